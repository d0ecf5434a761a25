//! The fibration Künneth decomposition: the cellwise isomorphism between the
//! quotient `MC^ℓ(E) / D^ℓ(E)` and `⊕ MC^{ℓv}(F) ⊗ MC^{ℓh}(B)`, and an
//! end-to-end homology comparison.

use num_bigint::BigInt;

use crate::chain::{
    build_complex, d_closure_violations, default_top_degree, quotient_complex, render_tuple,
    tensor_and_sum, Cell, ChainComplex, Restriction, SparseMatrix, Tuple,
};
use crate::classify::t_word;
use crate::error::{Error, Result};
use crate::fibration::{FiberSpace, Fibration};
use crate::homology::{check_chain_map, homology, is_quasi_iso, ChainMap, HomologySummary};
use crate::metric::{Length, MetricSpace};

/// Mutually inverse chain maps between the quotient and the tensor side.
#[derive(Clone, Debug)]
pub struct PhiPsiPair {
    pub basepoint: usize,
    /// `φ_n`: quotient → tensor side.
    pub phi: ChainMap,
    /// `ψ_n`: tensor side → quotient.
    pub psi: ChainMap,
}

/// `φ(x_0, …, x_n) = (x_0^b, …, x_m^b) ⊗ (πx_m, …, πx_n)` for a tuple with
/// word `v^m h^{n-m}`. The fiber factor is in total-space indices.
pub fn phi_tuple(fib: &Fibration, b: usize, tuple: &[usize]) -> Result<(Tuple, Tuple)> {
    let word = t_word(fib, tuple)?;
    let m = word.vertical_prefix().ok_or_else(|| {
        Error::NotDComplex(format!(
            "{} has word {word}, not of the form v^m h^k",
            render_tuple(fib.total(), tuple)
        ))
    })?;
    let fiber = tuple[..=m].iter().map(|&x| fib.lift_at(x, b)).collect();
    let base = tuple[m..].iter().map(|&x| fib.project(x)).collect();
    Ok((fiber, base))
}

/// `ψ((f_0, …, f_m) ⊗ (b_0, …, b_k)) = (f_0^{b_0}, …, f_m^{b_0}, f_m^{b_0 b_1}, …, f_m^{b_0 ⋯ b_k})`,
/// with iterated lifts. The fiber factor is in total-space indices.
pub fn psi_tuple(fib: &Fibration, fiber: &[usize], base: &[usize]) -> Tuple {
    let b0 = base[0];
    let mut out: Tuple = fiber.iter().map(|&f| fib.lift_at(f, b0)).collect();
    let mut cur = *out.last().expect("nonempty fiber tuple");
    for &bj in &base[1..] {
        cur = fib.lift_at(cur, bj);
        out.push(cur);
    }
    out
}

/// `⊕_{ℓv + ℓh = ℓ} MC^{ℓv}(F) ⊗ MC^{ℓh}(B)` in degrees `0..=top`, over the
/// splittings achievable in both factors.
pub fn kunneth_rhs(fiber: &MetricSpace, base: &MetricSpace, ell: Length, top: usize) -> Result<ChainComplex> {
    let base_lengths = base.achievable_lengths(ell);
    let mut factors = Vec::new();
    for lv in fiber.achievable_lengths(ell) {
        let lh = ell - lv;
        if base_lengths.binary_search(&lh).is_ok() {
            factors.push((
                build_complex(fiber, lv, top, Restriction::All)?,
                build_complex(base, lh, top, Restriction::All)?,
            ));
        }
    }
    let summands: Vec<(&ChainComplex, &ChainComplex)> = factors.iter().map(|(c, d)| (c, d)).collect();
    tensor_and_sum(ell.to_string(), &summands, top)
}

fn split_pair(cell: &Cell) -> Option<(&[usize], &[usize])> {
    match cell {
        Cell::Pair(l, r) => Some((l.as_path()?, r.as_path()?)),
        _ => None,
    }
}

/// Builds `φ` and `ψ` on the given bases, checks both are chain maps and that
/// they are mutually inverse.
pub fn phi_map(
    fib: &Fibration,
    b: usize,
    quotient: &ChainComplex,
    rhs: &ChainComplex,
) -> Result<PhiPsiPair> {
    let fiber = fib.fiber(b);
    let top = quotient.top_degree();
    if rhs.top_degree() != top {
        return Err(Error::PhiPsi(format!(
            "quotient has top degree {top}, tensor side {}",
            rhs.top_degree()
        )));
    }
    let mut phi = Vec::with_capacity(top + 1);
    let mut psi = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let mut cols = Vec::with_capacity(quotient.dim(n));
        for cell in quotient.basis(n) {
            let t = cell
                .as_path()
                .ok_or_else(|| Error::PhiPsi(format!("quotient generator {cell} is not a tuple")))?;
            let (f, base) = phi_tuple(fib, b, t)?;
            let image = Cell::pair(Cell::Path(to_local(&fiber, &f)), Cell::Path(base));
            let r = rhs.position(n, &image).ok_or_else(|| {
                Error::PhiPsi(format!(
                    "φ{}: image of {} missing from the tensor side",
                    n,
                    cell.render(fib.total())
                ))
            })?;
            cols.push(vec![(r, 1)]);
        }
        phi.push(SparseMatrix::from_columns(rhs.dim(n), cols));

        let mut cols = Vec::with_capacity(rhs.dim(n));
        for cell in rhs.basis(n) {
            let (f, base) = split_pair(cell)
                .ok_or_else(|| Error::PhiPsi(format!("tensor generator {cell} is not a pair of tuples")))?;
            let f: Vec<usize> = f.iter().map(|&i| fiber.points[i]).collect();
            let image = Cell::Path(psi_tuple(fib, &f, base));
            let r = quotient.position(n, &image).ok_or_else(|| {
                Error::PhiPsi(format!(
                    "ψ{}: image {} missing from the quotient",
                    n,
                    image.render(fib.total())
                ))
            })?;
            cols.push(vec![(r, 1)]);
        }
        psi.push(SparseMatrix::from_columns(quotient.dim(n), cols));
    }
    let pair = PhiPsiPair {
        basepoint: b,
        phi: ChainMap { components: phi },
        psi: ChainMap { components: psi },
    };
    check_chain_map(&pair.phi, quotient, rhs)?;
    check_chain_map(&pair.psi, rhs, quotient)?;
    for n in 0..=top {
        let (f, g) = (&pair.phi.components[n], &pair.psi.components[n]);
        if g.mul(f)? != SparseMatrix::identity(quotient.dim(n)) {
            return Err(Error::PhiPsi(format!("ψφ is not the identity in degree {n}")));
        }
        if f.mul(g)? != SparseMatrix::identity(rhs.dim(n)) {
            return Err(Error::PhiPsi(format!("φψ is not the identity in degree {n}")));
        }
    }
    Ok(pair)
}

fn to_local(fiber: &FiberSpace, points: &[usize]) -> Tuple {
    points
        .iter()
        .map(|&x| fiber.local_index(x).expect("lift lies in the fiber"))
        .collect()
}

/// One degree of a [`KunnethLevel`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KunnethRow {
    pub n: usize,
    pub betti_total: usize,
    pub betti_quotient: usize,
    pub betti_rhs: usize,
    pub torsion_total: Vec<BigInt>,
    pub torsion_quotient: Vec<BigInt>,
    pub torsion_rhs: Vec<BigInt>,
    pub d_betti: usize,
    pub d_torsion: Vec<BigInt>,
}

impl KunnethRow {
    pub fn agrees(&self) -> bool {
        self.betti_total == self.betti_quotient
            && self.betti_quotient == self.betti_rhs
            && self.torsion_total == self.torsion_quotient
            && self.torsion_quotient == self.torsion_rhs
            && self.d_betti == 0
            && self.d_torsion.is_empty()
    }
}

/// Verification data for one length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KunnethLevel {
    pub ell: Length,
    pub rows: Vec<KunnethRow>,
    /// First `(generator, face)` of D whose face leaves D, if any.
    pub subcomplex_violation: Option<(String, String)>,
    /// `Err` carries the first failure of the φ/ψ checks.
    pub phi_psi: Result<(), String>,
    /// Whether `MC^ℓ(E) → MC^ℓ(E)/D^ℓ(E)` has an acyclic mapping cone.
    pub projection_quasi_iso: Option<bool>,
}

impl KunnethLevel {
    pub fn passed(&self) -> bool {
        self.subcomplex_violation.is_none()
            && self.phi_psi.is_ok()
            && self.projection_quasi_iso == Some(true)
            && self.rows.iter().all(KunnethRow::agrees)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KunnethReport {
    pub basepoint: usize,
    pub levels: Vec<KunnethLevel>,
}

impl KunnethReport {
    pub fn passed(&self) -> bool {
        self.levels.iter().all(KunnethLevel::passed)
    }
}

/// Runs [`verify_level`] for every achievable `ℓ ≤ ℓ_max`.
pub fn verify_kunneth(fib: &Fibration, b: usize, lmax: Length, nmax: Option<usize>) -> Result<KunnethReport> {
    let levels = fib
        .total()
        .achievable_lengths(lmax)
        .into_iter()
        .map(|ell| verify_level(fib, b, ell, nmax))
        .collect::<Result<_>>()?;
    Ok(KunnethReport { basepoint: b, levels })
}

/// Compares `MC^ℓ(E)`, its quotient by D, and the tensor side in degrees
/// `0..=nmax`, and checks that D is an acyclic subcomplex.
///
/// Without `nmax` every nonzero degree is covered. With it, complexes are
/// built one degree higher so that homology in degree `nmax` is exact.
pub fn verify_level(fib: &Fibration, b: usize, ell: Length, nmax: Option<usize>) -> Result<KunnethLevel> {
    if b >= fib.base().len() {
        return Err(Error::UnknownPoint(format!("base index {b}")));
    }
    let e = fib.total();
    let (report_top, build_top) = match nmax {
        Some(n) => (n, n + 1),
        None => {
            let t = default_top_degree(e, ell);
            (t, t)
        }
    };
    let subcomplex_violation = d_closure_violations(fib, ell, build_top)
        .into_iter()
        .next()
        .map(|(t, f)| (render_tuple(e, &t), render_tuple(e, &f)));

    let full = build_complex(e, ell, build_top, Restriction::All)?;
    let d = build_complex(e, ell, build_top, Restriction::DOnly(fib))?;
    let rhs = kunneth_rhs(&fib.fiber(b).space, fib.base(), ell, build_top)?;
    let h_full = homology(&full);
    let h_d = homology(&d);
    let h_rhs = homology(&rhs);

    let mut phi_psi = Err("quotient unavailable".to_string());
    let mut projection_quasi_iso = None;
    let mut h_quot = HomologySummary::default();
    if subcomplex_violation.is_none() {
        let sub: Vec<Vec<usize>> = (0..=build_top)
            .map(|n| {
                d.basis(n)
                    .iter()
                    .map(|c| full.position(n, c).expect("D cells are cells of MC"))
                    .collect()
            })
            .collect();
        let quotient = quotient_complex(&full, &sub)?;
        h_quot = homology(&quotient);
        phi_psi = phi_map(fib, b, &quotient, &rhs).map(|_| ()).map_err(|e| e.to_string());
        let projection = ChainMap {
            components: (0..=build_top)
                .map(|n| {
                    let cols = full
                        .basis(n)
                        .iter()
                        .map(|c| quotient.position(n, c).map(|r| (r, 1)).into_iter().collect())
                        .collect();
                    SparseMatrix::from_columns(quotient.dim(n), cols)
                })
                .collect(),
        };
        projection_quasi_iso = Some(cone_acyclic_up_to(&projection, &full, &quotient, report_top)?);
    }

    let rows = (0..=report_top)
        .map(|n| KunnethRow {
            n,
            betti_total: h_full.betti(n),
            betti_quotient: h_quot.betti(n),
            betti_rhs: h_rhs.betti(n),
            torsion_total: h_full.torsion(n).to_vec(),
            torsion_quotient: h_quot.torsion(n).to_vec(),
            torsion_rhs: h_rhs.torsion(n).to_vec(),
            d_betti: h_d.betti(n),
            d_torsion: h_d.torsion(n).to_vec(),
        })
        .collect();
    Ok(KunnethLevel {
        ell,
        rows,
        subcomplex_violation,
        phi_psi,
        projection_quasi_iso,
    })
}

/// Acyclicity of the mapping cone in degrees `0..=top`, where the cone of
/// complexes truncated at `top + 1` still computes the true one.
fn cone_acyclic_up_to(f: &ChainMap, c: &ChainComplex, d: &ChainComplex, top: usize) -> Result<bool> {
    if top >= c.top_degree() {
        return is_quasi_iso(f, c, d);
    }
    let cone = crate::homology::mapping_cone(f, c, d)?;
    let h = homology(&cone);
    Ok(h.degrees.iter().take(top + 1).all(|g| g.is_zero()))
}
