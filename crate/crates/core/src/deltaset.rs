//! Pointed Δ-sets `m^ℓ_•(X)` and `D^ℓ_•(E)`, their reduced chains, quotients
//! by re-pointing, and the cellwise isomorphism
//! `m^ℓ(E)/D^ℓ(E) ≅ m^ℓ(F×B)/D^ℓ(F×B)`.

use std::collections::HashMap;

use crate::chain::{enumerate_paths, render_tuple, Cell, ChainComplex, SparseMatrix, Tuple};
use crate::classify::{t_word, DMembership};
use crate::error::{Error, Result};
use crate::fibration::Fibration;
use crate::kunneth::{phi_tuple, psi_tuple};
use crate::metric::{Length, MetricSpace};

/// Which cells make up the Δ-set.
#[derive(Clone, Copy, Debug)]
pub enum DeltaVariant<'a> {
    /// All of `P^ℓ_n(X)`.
    Magnitude,
    /// The D-tuples of the total space of a fibration.
    D(&'a Fibration),
}

/// A Δ-set with a basepoint `∗` in every degree. Only non-basepoint cells are
/// stored; a face equal to `∗` is `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedDeltaSet {
    label: String,
    cells: Vec<Vec<Tuple>>,
    index: Vec<HashMap<Tuple, usize>>,
    /// faces[n][c][i] = d_i of cell c in degree n, for 0 ≤ i ≤ n
    faces: Vec<Vec<Vec<Option<usize>>>>,
}

impl PointedDeltaSet {
    /// Assembles a Δ-set from cells and a face rule, then checks the
    /// simplicial identities.
    fn from_rule(
        label: String,
        cells: Vec<Vec<Tuple>>,
        mut face: impl FnMut(&Tuple, usize) -> Option<Tuple>,
    ) -> Result<Self> {
        let index: Vec<HashMap<Tuple, usize>> = cells
            .iter()
            .map(|c| c.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect())
            .collect();
        let mut faces = Vec::with_capacity(cells.len());
        for (n, layer) in cells.iter().enumerate() {
            let mut fs = Vec::with_capacity(layer.len());
            for t in layer {
                let mut row = Vec::with_capacity(n + 1);
                for i in 0..=n {
                    row.push(match face(t, i) {
                        None => None,
                        Some(f) => Some(*index[n - 1].get(&f).ok_or_else(|| {
                            Error::DeltaSet(format!("d_{i}{t:?} = {f:?} is not a cell"))
                        })?),
                    });
                }
                fs.push(row);
            }
            faces.push(fs);
        }
        let ds = PointedDeltaSet {
            label,
            cells,
            index,
            faces,
        };
        ds.verify_identities()?;
        Ok(ds)
    }

    pub fn top_degree(&self) -> usize {
        self.cells.len().saturating_sub(1)
    }

    /// Non-basepoint cells of degree `n`.
    pub fn cells(&self, n: usize) -> &[Tuple] {
        self.cells.get(n).map_or(&[], Vec::as_slice)
    }

    /// Cells of degree `n` including the basepoint.
    pub fn cell_count(&self, n: usize) -> usize {
        self.cells(n).len() + 1
    }

    pub fn position(&self, n: usize, t: &[usize]) -> Option<usize> {
        self.index.get(n)?.get(t).copied()
    }

    /// `d_i` of cell `c` in degree `n`; `None` is the basepoint.
    pub fn face(&self, n: usize, c: usize, i: usize) -> Option<usize> {
        self.faces[n][c][i]
    }

    fn face_of(&self, n: usize, c: Option<usize>, i: usize) -> Option<usize> {
        c.and_then(|c| self.faces[n][c][i])
    }

    /// Checks `d_i d_j = d_{j-1} d_i` for all `i < j` on every cell.
    pub fn verify_identities(&self) -> Result<()> {
        for n in 2..self.cells.len() {
            for c in 0..self.cells[n].len() {
                for j in 1..=n {
                    for i in 0..j {
                        let lhs = self.face_of(n - 1, self.faces[n][c][j], i);
                        let rhs = self.face_of(n - 1, self.faces[n][c][i], j - 1);
                        if lhs != rhs {
                            return Err(Error::DeltaSet(format!(
                                "d_{i} d_{j} ≠ d_{} d_{i} on {:?}",
                                j - 1,
                                self.cells[n][c]
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Sends every cell of `sub` to the basepoint. `sub` must be closed under
    /// faces.
    pub fn quotient(&self, sub: &PointedDeltaSet) -> Result<PointedDeltaSet> {
        for n in 0..sub.cells.len() {
            for (c, t) in sub.cells[n].iter().enumerate() {
                if self.position(n, t).is_none() {
                    return Err(Error::DeltaSet(format!("{t:?} is not a cell of {}", self.label)));
                }
                for i in 0..=n {
                    if let Some(f) = sub.faces[n][c][i] {
                        let face = &sub.cells[n - 1][f];
                        let own = self.face(n, self.position(n, t).unwrap(), i);
                        if own.map(|k| &self.cells[n - 1][k]) != Some(face) {
                            return Err(Error::DeltaSet(format!("faces of {t:?} disagree")));
                        }
                    }
                }
            }
        }
        let kept: Vec<Vec<Tuple>> = self
            .cells
            .iter()
            .enumerate()
            .map(|(n, layer)| {
                layer
                    .iter()
                    .filter(|t| sub.position(n, t).is_none())
                    .cloned()
                    .collect()
            })
            .collect();
        PointedDeltaSet::from_rule(format!("{}/{}", self.label, sub.label), kept, |t, i| {
            let n = t.len() - 1;
            let f = self.face(n, self.position(n, t).expect("kept cell"), i)?;
            let face = &self.cells[n - 1][f];
            sub.position(n - 1, face).is_none().then(|| face.clone())
        })
    }
}

/// `d_i(x_0, …, x_n)`: deletes an interior `x_i` lying between its neighbours;
/// every other face is the basepoint.
fn magnitude_face(space: &MetricSpace, t: &Tuple, i: usize) -> Option<Tuple> {
    let n = t.len() - 1;
    if i == 0 || i == n || !space.is_between(t[i - 1], t[i], t[i + 1]) {
        return None;
    }
    let mut f = t.clone();
    f.remove(i);
    Some(f)
}

/// `m^ℓ_•(X)` or `D^ℓ_•(E)` in degrees `0..=nmax`.
pub fn build_pointed_delta(space: &MetricSpace, ell: Length, nmax: usize, variant: DeltaVariant<'_>) -> Result<PointedDeltaSet> {
    if let DeltaVariant::D(fib) = variant {
        if fib.total() != space {
            return Err(Error::NotDComplex(
                "space is not the total space of the fibration".into(),
            ));
        }
    }
    let cells = (0..=nmax)
        .map(|n| {
            let all = enumerate_paths(space, ell, n);
            match variant {
                DeltaVariant::Magnitude => Ok(all),
                DeltaVariant::D(fib) => all
                    .into_iter()
                    .filter_map(|t| match t_word(fib, &t) {
                        Ok(w) if w.membership() == DMembership::Outside => None,
                        Ok(_) => Some(Ok(t)),
                        Err(e) => Some(Err(e)),
                    })
                    .collect(),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    PointedDeltaSet::from_rule(ell.to_string(), cells, |t, i| magnitude_face(space, t, i))
}

/// Chains on the non-basepoint cells with `∂ = Σ (-1)^i d_i`, faces at the
/// basepoint contributing zero.
pub fn reduced_chain_complex(ds: &PointedDeltaSet) -> ChainComplex {
    let top = ds.top_degree();
    let bases: Vec<Vec<Cell>> = (0..=top)
        .map(|n| ds.cells(n).iter().cloned().map(Cell::Path).collect())
        .collect();
    let boundaries = (0..=top)
        .map(|n| {
            if n == 0 {
                return SparseMatrix::zeros(0, ds.cells(0).len());
            }
            let cols = (0..ds.cells(n).len())
                .map(|c| {
                    (0..=n)
                        .filter_map(|i| ds.face(n, c, i).map(|f| (f, if i % 2 == 0 { 1 } else { -1 })))
                        .collect()
                })
                .collect();
            SparseMatrix::from_columns(ds.cells(n - 1).len(), cols)
        })
        .collect();
    ChainComplex::new(ds.label.clone(), bases, boundaries)
        .expect("face identities give a chain complex")
}

/// Per-degree cell counts of the two quotients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaIsoDegree {
    pub n: usize,
    pub total_cells: usize,
    pub product_cells: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaIsoReport {
    pub ell: Length,
    pub basepoint: usize,
    pub degrees: Vec<DeltaIsoDegree>,
    /// First failing check with a witness cell.
    pub failure: Option<String>,
}

impl DeltaIsoReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// `φ(x)_i = (x_{min(i,m)}^b, πx_i)` for a word `v^m h^k`, as a tuple of the
/// product `F × B` indexed `f * |B| + b`.
fn phi_cell(fib: &Fibration, b: usize, fiber_local: &HashMap<usize, usize>, t: &[usize]) -> Result<Tuple> {
    let (f, base) = phi_tuple(fib, b, t)?;
    let m = f.len() - 1;
    let nb = fib.base().len();
    let point = |fi: usize, bi: usize| fiber_local[&fi] * nb + bi;
    let b0 = base[0];
    let mut out: Tuple = f.iter().map(|&x| point(x, b0)).collect();
    out.extend(base[1..].iter().map(|&bj| point(f[m], bj)));
    Ok(out)
}

/// Checks that `φ` is a bijection from the non-D cells of `m^ℓ(E)` to those
/// of `m^ℓ(F×B)` in each degree `≤ nmax`, that it commutes with every face
/// map, and that the cellwise `ψ` inverts it.
pub fn deltaiso_check(fib: &Fibration, b: usize, ell: Length, nmax: usize) -> Result<DeltaIsoReport> {
    if b >= fib.base().len() {
        return Err(Error::UnknownPoint(format!("base index {b}")));
    }
    let fiber = fib.fiber(b);
    let product = Fibration::trivial_product(&fiber.space, fib.base());
    let fiber_local: HashMap<usize, usize> =
        fiber.points.iter().enumerate().map(|(i, &x)| (x, i)).collect();

    let quotient_of = |f: &Fibration| -> Result<PointedDeltaSet> {
        let m = build_pointed_delta(f.total(), ell, nmax, DeltaVariant::Magnitude)?;
        let d = build_pointed_delta(f.total(), ell, nmax, DeltaVariant::D(f))?;
        m.quotient(&d)
    };
    let qe = quotient_of(fib)?;
    let qp = quotient_of(&product)?;

    let mut report = DeltaIsoReport {
        ell,
        basepoint: b,
        degrees: (0..=nmax)
            .map(|n| DeltaIsoDegree {
                n,
                total_cells: qe.cells(n).len(),
                product_cells: qp.cells(n).len(),
            })
            .collect(),
        failure: None,
    };
    let e = fib.total();
    let p = product.total();
    let mut images: Vec<Vec<usize>> = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        let mut hit = vec![false; qp.cells(n).len()];
        let mut img = Vec::with_capacity(qe.cells(n).len());
        for t in qe.cells(n) {
            let u = phi_cell(fib, b, &fiber_local, t)?;
            let Some(k) = qp.position(n, &u) else {
                report.failure = Some(format!(
                    "φ{} = {} is not a non-D cell of the product",
                    render_tuple(e, t),
                    render_tuple(p, &u)
                ));
                return Ok(report);
            };
            if std::mem::replace(&mut hit[k], true) {
                report.failure = Some(format!(
                    "φ is not injective: {} is hit twice",
                    render_tuple(p, &u)
                ));
                return Ok(report);
            }
            // cellwise ψ of the product tuple (f_0,b_0) … (f_m,b_m) (f_m,b_{m+1}) …
            let back = psi_of_product(&product, fib, &fiber.points, &u)?;
            if &back != t {
                report.failure = Some(format!(
                    "ψφ{} = {}",
                    render_tuple(e, t),
                    render_tuple(e, &back)
                ));
                return Ok(report);
            }
            img.push(k);
        }
        if let Some(k) = hit.iter().position(|h| !h) {
            report.failure = Some(format!(
                "φ is not surjective: {} is missed",
                render_tuple(p, &qp.cells(n)[k])
            ));
            return Ok(report);
        }
        images.push(img);
    }
    for n in 1..=nmax {
        for c in 0..qe.cells(n).len() {
            for i in 0..=n {
                let lhs = qe.face(n, c, i).map(|f| images[n - 1][f]);
                let rhs = qp.face(n, images[n][c], i);
                if lhs != rhs {
                    report.failure = Some(format!(
                        "φ d_{i} ≠ d_{i} φ on {}",
                        render_tuple(e, &qe.cells(n)[c])
                    ));
                    return Ok(report);
                }
            }
        }
    }
    Ok(report)
}

/// `ψ` on a product tuple of word `v^m h^k`: `(f_0..f_m) ⊗ (b_m..b_n)` in
/// total-space fiber indices, then iterated lifts.
fn psi_of_product(product: &Fibration, fib: &Fibration, fiber_points: &[usize], u: &[usize]) -> Result<Tuple> {
    let (f, base) = phi_tuple(product, 0, u)?;
    let nb = fib.base().len();
    let fiber: Vec<usize> = f.iter().map(|&x| fiber_points[x / nb]).collect();
    Ok(psi_tuple(fib, &fiber, &base))
}
