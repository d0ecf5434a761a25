//! Based free chain complexes over the integers, and the magnitude chain
//! complex `MC^ℓ_*(X)` together with its D-subcomplex, quotients and
//! tensor sums.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde_json::{json, Value};

use crate::classify::{t_word, DMembership};
use crate::error::{Error, Result};
use crate::fibration::Fibration;
use crate::metric::{Length, MetricSpace};

/// A tuple of point indices.
pub type Tuple = Vec<usize>;

/// A basis element of a based chain complex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cell {
    /// A tuple `(x_0, …, x_n)` of points.
    Path(Tuple),
    /// `left ⊗ right` in a tensor product.
    Pair(Box<Cell>, Box<Cell>),
    /// An ordered simplex of `(point, time)` vertices.
    Simplex(Vec<(usize, i64)>),
    /// An abstract generator.
    Gen(usize),
}

impl Cell {
    pub fn pair(left: Cell, right: Cell) -> Cell {
        Cell::Pair(Box::new(left), Box::new(right))
    }

    pub fn as_path(&self) -> Option<&[usize]> {
        match self {
            Cell::Path(t) => Some(t),
            _ => None,
        }
    }

    /// Renders path cells with point labels of `space`.
    pub fn render(&self, space: &MetricSpace) -> String {
        match self {
            Cell::Path(t) => render_tuple(space, t),
            other => other.to_string(),
        }
    }
}

pub fn render_tuple(space: &MetricSpace, t: &[usize]) -> String {
    let inner: Vec<&str> = t.iter().map(|&x| space.label(x)).collect();
    format!("({})", inner.join(","))
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Path(t) => {
                let inner: Vec<String> = t.iter().map(|x| x.to_string()).collect();
                write!(f, "({})", inner.join(","))
            }
            Cell::Pair(a, b) => write!(f, "{a}⊗{b}"),
            Cell::Simplex(vs) => {
                let inner: Vec<String> = vs.iter().map(|(x, t)| format!("{x}@{t}")).collect();
                write!(f, "[{}]", inner.join(","))
            }
            Cell::Gen(i) => write!(f, "g{i}"),
        }
    }
}

/// Column-major sparse integer matrix. Columns are sorted by row and hold no
/// explicit zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SparseMatrix {
    rows: usize,
    cols: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, ncols: usize) -> Self {
        SparseMatrix {
            rows,
            cols: vec![Vec::new(); ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: (0..n).map(|i| vec![(i, 1)]).collect(),
        }
    }

    /// Builds a matrix from arbitrary column entry lists, merging duplicates.
    pub fn from_columns(rows: usize, cols: Vec<Vec<(usize, i64)>>) -> Self {
        let cols = cols
            .into_iter()
            .map(|c| {
                let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
                for (r, v) in c {
                    assert!(r < rows, "row {r} out of range {rows}");
                    *acc.entry(r).or_insert(0) += v;
                }
                acc.into_iter().filter(|&(_, v)| v != 0).collect()
            })
            .collect();
        SparseMatrix { rows, cols }
    }

    pub fn from_dense(rows: usize, dense: &[Vec<i64>]) -> Self {
        let ncols = dense.first().map_or(0, Vec::len);
        let cols = (0..ncols)
            .map(|j| {
                (0..rows)
                    .filter(|&i| dense[i][j] != 0)
                    .map(|i| (i, dense[i][j]))
                    .collect()
            })
            .collect();
        SparseMatrix { rows, cols }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, i64)] {
        &self.cols[j]
    }

    pub fn columns(&self) -> impl Iterator<Item = &[(usize, i64)]> {
        self.cols.iter().map(Vec::as_slice)
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.cols[c]
            .binary_search_by_key(&r, |&(row, _)| row)
            .map_or(0, |k| self.cols[c][k].1)
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        let mut d = vec![vec![0; self.ncols()]; self.rows];
        for (j, c) in self.cols.iter().enumerate() {
            for &(i, v) in c {
                d[i][j] = v;
            }
        }
        d
    }

    /// `self · rhs`, with overflow reported as an error.
    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix> {
        assert_eq!(self.ncols(), rhs.nrows(), "dimension mismatch in product");
        let mut cols = Vec::with_capacity(rhs.ncols());
        for rc in &rhs.cols {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for &(k, a) in rc {
                for &(i, b) in &self.cols[k] {
                    let e = acc.entry(i).or_insert(0);
                    *e = a
                        .checked_mul(b)
                        .and_then(|p| e.checked_add(p))
                        .ok_or(Error::Overflow("matrix product"))?;
                }
            }
            cols.push(acc.into_iter().filter(|&(_, v)| v != 0).collect());
        }
        Ok(SparseMatrix {
            rows: self.rows,
            cols,
        })
    }

    /// Submatrix on the kept rows and columns; `row_map[r]` is the new index
    /// of old row `r`.
    pub fn restrict(&self, row_map: &[Option<usize>], new_rows: usize, keep_cols: &[usize]) -> Self {
        let cols = keep_cols
            .iter()
            .map(|&j| {
                self.cols[j]
                    .iter()
                    .filter_map(|&(r, v)| row_map[r].map(|nr| (nr, v)))
                    .collect::<Vec<_>>()
            })
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        SparseMatrix {
            rows: new_rows,
            cols,
        }
    }

    /// `P · self · Q⁻¹` for permutations: row `r` moves to `row_perm[r]`,
    /// column `c` to `col_perm[c]`.
    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        let mut cols = vec![Vec::new(); self.ncols()];
        for (j, c) in self.cols.iter().enumerate() {
            let mut nc: Vec<_> = c.iter().map(|&(r, v)| (row_perm[r], v)).collect();
            nc.sort_unstable();
            cols[col_perm[j]] = nc;
        }
        SparseMatrix {
            rows: self.rows,
            cols,
        }
    }
}

/// A finite based free chain complex concentrated in degrees `0..=top`.
///
/// `boundary(n)` maps degree `n` to degree `n - 1`; `boundary(0)` has no rows.
/// The complex is treated as zero above its top degree.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    label: String,
    bases: Vec<Vec<Cell>>,
    index: Vec<HashMap<Cell, usize>>,
    boundaries: Vec<SparseMatrix>,
}

impl PartialEq for ChainComplex {
    fn eq(&self, other: &Self) -> bool {
        self.label == other.label
            && self.bases == other.bases
            && self.boundaries == other.boundaries
    }
}

impl ChainComplex {
    /// Checks shapes, distinct basis elements and `∂∂ = 0`.
    pub fn new(label: impl Into<String>, bases: Vec<Vec<Cell>>, boundaries: Vec<SparseMatrix>) -> Result<Self> {
        if bases.is_empty() || bases.len() != boundaries.len() {
            return Err(Error::Dimension(0));
        }
        for (n, d) in boundaries.iter().enumerate() {
            let rows = if n == 0 { 0 } else { bases[n - 1].len() };
            if d.nrows() != rows || d.ncols() != bases[n].len() {
                return Err(Error::Dimension(n));
            }
        }
        let mut index = Vec::with_capacity(bases.len());
        for (n, b) in bases.iter().enumerate() {
            let mut map = HashMap::with_capacity(b.len());
            for (i, c) in b.iter().enumerate() {
                if map.insert(c.clone(), i).is_some() {
                    return Err(Error::DuplicateCell(c.to_string(), n));
                }
            }
            index.push(map);
        }
        for n in 2..boundaries.len() {
            if !boundaries[n - 1].mul(&boundaries[n])?.is_zero() {
                return Err(Error::NonzeroSquare(n));
            }
        }
        Ok(ChainComplex {
            label: label.into(),
            bases,
            index,
            boundaries,
        })
    }

    /// The zero complex in degrees `0..=top`.
    pub fn zero(label: impl Into<String>, top: usize) -> Self {
        ChainComplex::new(
            label,
            vec![Vec::new(); top + 1],
            vec![SparseMatrix::zeros(0, 0); top + 1],
        )
        .expect("zero complex is valid")
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn top_degree(&self) -> usize {
        self.bases.len() - 1
    }

    pub fn basis(&self, n: usize) -> &[Cell] {
        self.bases.get(n).map_or(&[], Vec::as_slice)
    }

    pub fn dim(&self, n: usize) -> usize {
        self.basis(n).len()
    }

    pub fn total_dim(&self) -> usize {
        self.bases.iter().map(Vec::len).sum()
    }

    /// Boundary out of degree `n`; `None` above the top degree.
    pub fn boundary(&self, n: usize) -> Option<&SparseMatrix> {
        self.boundaries.get(n)
    }

    /// Boundary into degree `n` from degree `n + 1`, as an explicit (possibly
    /// empty-columned) matrix.
    pub fn boundary_into(&self, n: usize) -> SparseMatrix {
        self.boundaries
            .get(n + 1)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(self.dim(n), 0))
    }

    pub fn position(&self, n: usize, cell: &Cell) -> Option<usize> {
        self.index.get(n)?.get(cell).copied()
    }

    pub fn is_zero(&self) -> bool {
        self.bases.iter().all(Vec::is_empty)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.bases
            .iter()
            .enumerate()
            .map(|(n, b)| if n % 2 == 0 { b.len() as i64 } else { -(b.len() as i64) })
            .sum()
    }

    /// Same complex with each degree's basis reordered: old position `i` in
    /// degree `n` moves to `perms[n][i]`.
    pub fn permuted(&self, perms: &[Vec<usize>]) -> Result<ChainComplex> {
        let bases = self
            .bases
            .iter()
            .zip(perms)
            .map(|(b, p)| {
                let mut nb = b.clone();
                for (i, c) in b.iter().enumerate() {
                    nb[p[i]] = c.clone();
                }
                nb
            })
            .collect();
        let boundaries = self
            .boundaries
            .iter()
            .enumerate()
            .map(|(n, d)| {
                let rows: &[usize] = if n == 0 { &[] } else { &perms[n - 1] };
                d.permute(rows, &perms[n])
            })
            .collect();
        ChainComplex::new(self.label.clone(), bases, boundaries)
    }

    /// Structured dump: per degree, the basis and the sparse boundary columns.
    pub fn dump(&self, render: impl Fn(&Cell) -> String) -> Value {
        let degrees: Vec<Value> = (0..=self.top_degree())
            .map(|n| {
                let cols: Vec<Value> = self.boundaries[n]
                    .columns()
                    .map(|c| json!(c.iter().map(|&(r, v)| json!([r, v])).collect::<Vec<_>>()))
                    .collect();
                json!({
                    "n": n,
                    "basis": self.bases[n].iter().map(&render).collect::<Vec<_>>(),
                    "boundary": cols,
                })
            })
            .collect();
        json!({ "label": self.label, "degrees": degrees })
    }
}

/// Which tuples of `P^ℓ_n` span the complex.
#[derive(Clone, Copy, Debug)]
pub enum Restriction<'a> {
    All,
    /// The D-subcomplex of the total space of a fibration.
    DOnly(&'a Fibration),
    /// Tuples from the first point to the second.
    Endpoints(usize, usize),
}

/// `P^ℓ_n(X)` in lexicographic order.
pub fn enumerate_paths(space: &MetricSpace, ell: Length, n: usize) -> Vec<Tuple> {
    let mut out = Vec::new();
    if ell.is_negative() {
        return out;
    }
    let min = space.min_positive_distance().unwrap_or_else(Length::zero);
    let mut cur = Vec::with_capacity(n + 1);
    for x in 0..space.len() {
        cur.push(x);
        extend_paths(space, ell, n, min, Length::zero(), &mut cur, &mut out);
        cur.pop();
    }
    out
}

fn extend_paths(
    space: &MetricSpace,
    ell: Length,
    n: usize,
    min: Length,
    sum: Length,
    cur: &mut Tuple,
    out: &mut Vec<Tuple>,
) {
    let steps_left = n + 1 - cur.len();
    if steps_left == 0 {
        if sum == ell {
            out.push(cur.clone());
        }
        return;
    }
    let last = *cur.last().expect("nonempty prefix");
    for y in 0..space.len() {
        if y == last {
            continue;
        }
        let s = sum + space.dist(last, y);
        if s + min.times(steps_left - 1) > ell {
            continue;
        }
        cur.push(y);
        extend_paths(space, ell, n, min, s, cur, out);
        cur.pop();
    }
}

/// Nonzero terms of `∂(x_0, …, x_n)`: for each interior `i` with
/// `x_{i-1} ≺ x_i ≺ x_{i+1}`, the tuple without `x_i` with sign `(-1)^i`.
pub fn path_boundary(space: &MetricSpace, tuple: &[usize]) -> Vec<(Tuple, i64)> {
    let n = tuple.len().saturating_sub(1);
    (1..n)
        .filter(|&i| space.is_between(tuple[i - 1], tuple[i], tuple[i + 1]))
        .map(|i| {
            let mut face = tuple.to_vec();
            face.remove(i);
            (face, if i % 2 == 0 { 1 } else { -1 })
        })
        .collect()
}

/// Boundary matrix from `basis_n` to `basis_lower`.
pub fn boundary_matrix(space: &MetricSpace, basis_n: &[Tuple], basis_lower: &[Tuple]) -> Result<SparseMatrix> {
    let index: HashMap<&[usize], usize> = basis_lower
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_slice(), i))
        .collect();
    let mut cols = Vec::with_capacity(basis_n.len());
    for t in basis_n {
        let mut col = Vec::new();
        for (face, sign) in path_boundary(space, t) {
            match index.get(face.as_slice()) {
                Some(&r) => col.push((r, sign)),
                None => {
                    return Err(Error::MissingFace {
                        degree: t.len() - 1,
                        cell: render_tuple(space, t),
                        face: render_tuple(space, &face),
                    })
                }
            }
        }
        cols.push(col);
    }
    Ok(SparseMatrix::from_columns(basis_lower.len(), cols))
}

/// Largest degree with a nonempty basis at length `ℓ`: `⌊ℓ / min distance⌋`.
pub fn default_top_degree(space: &MetricSpace, ell: Length) -> usize {
    match space.min_positive_distance() {
        Some(m) if !ell.is_negative() => ell.floor_div(m),
        _ => 0,
    }
}

/// D-subcomplex generators of `P^ℓ_n(E)`.
pub fn d_basis(fib: &Fibration, ell: Length, n: usize) -> Vec<Tuple> {
    enumerate_paths(fib.total(), ell, n)
        .into_iter()
        .filter(|t| membership(fib, t) != DMembership::Outside)
        .collect()
}

pub(crate) fn membership(fib: &Fibration, t: &[usize]) -> DMembership {
    t_word(fib, t)
        .expect("enumerated tuples have distinct consecutive points")
        .membership()
}

/// `MC^ℓ_*(X)` in degrees `0..=top`, or its restriction.
pub fn build_complex(space: &MetricSpace, ell: Length, top: usize, restriction: Restriction<'_>) -> Result<ChainComplex> {
    if let Restriction::DOnly(fib) = restriction {
        if fib.total() != space {
            return Err(Error::NotDComplex(
                "space is not the total space of the fibration".into(),
            ));
        }
    }
    let mut tuples: Vec<Vec<Tuple>> = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let all = enumerate_paths(space, ell, n);
        let kept = match restriction {
            Restriction::All => all,
            Restriction::DOnly(fib) => all
                .into_iter()
                .filter(|t| membership(fib, t) != DMembership::Outside)
                .collect(),
            Restriction::Endpoints(a, b) => all
                .into_iter()
                .filter(|t| t[0] == a && t[t.len() - 1] == b)
                .collect(),
        };
        tuples.push(kept);
    }
    let mut boundaries = Vec::with_capacity(top + 1);
    boundaries.push(SparseMatrix::zeros(0, tuples[0].len()));
    for n in 1..=top {
        boundaries.push(boundary_matrix(space, &tuples[n], &tuples[n - 1])?);
    }
    let bases = tuples
        .into_iter()
        .map(|b| b.into_iter().map(Cell::Path).collect())
        .collect();
    ChainComplex::new(ell.to_string(), bases, boundaries)
}

/// Every `(generator, face)` of the D-subcomplex at length `ℓ` whose face has a
/// nonzero coefficient but lies outside D. Empty when D is a subcomplex.
pub fn d_closure_violations(fib: &Fibration, ell: Length, top: usize) -> Vec<(Tuple, Tuple)> {
    let mut bad = Vec::new();
    for n in 1..=top {
        for t in d_basis(fib, ell, n) {
            for (face, _) in path_boundary(fib.total(), &t) {
                if membership(fib, &face) == DMembership::Outside {
                    bad.push((t.clone(), face));
                }
            }
        }
    }
    bad
}

/// Quotient of `full` by the subcomplex spanned by `sub[n]` (basis positions
/// per degree).
pub fn quotient_complex(full: &ChainComplex, sub: &[Vec<usize>]) -> Result<ChainComplex> {
    let top = full.top_degree();
    let in_sub: Vec<Vec<bool>> = (0..=top)
        .map(|n| {
            let mut mask = vec![false; full.dim(n)];
            for &i in sub.get(n).map_or(&[][..], Vec::as_slice) {
                mask[i] = true;
            }
            mask
        })
        .collect();
    for n in 1..=top {
        let d = full.boundary(n).expect("degree within range");
        for (j, col) in d.columns().enumerate() {
            if in_sub[n][j] && col.iter().any(|&(r, _)| !in_sub[n - 1][r]) {
                return Err(Error::NotSubcomplex {
                    degree: n,
                    cell: full.basis(n)[j].to_string(),
                });
            }
        }
    }
    let keep: Vec<Vec<usize>> = in_sub
        .iter()
        .map(|m| (0..m.len()).filter(|&i| !m[i]).collect())
        .collect();
    let row_maps: Vec<Vec<Option<usize>>> = in_sub
        .iter()
        .map(|m| {
            let mut next = 0;
            m.iter()
                .map(|&s| {
                    (!s).then(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        })
        .collect();
    let bases: Vec<Vec<Cell>> = keep
        .iter()
        .enumerate()
        .map(|(n, k)| k.iter().map(|&i| full.basis(n)[i].clone()).collect())
        .collect();
    let boundaries = (0..=top)
        .map(|n| {
            let d = full.boundary(n).expect("degree within range");
            if n == 0 {
                SparseMatrix::zeros(0, keep[0].len())
            } else {
                d.restrict(&row_maps[n - 1], keep[n - 1].len(), &keep[n])
            }
        })
        .collect();
    ChainComplex::new(full.label().to_string(), bases, boundaries)
}

/// `⊕_s C_s ⊗ D_s` in degrees `0..=top`, with
/// `∂(x ⊗ y) = ∂x ⊗ y + (-1)^{|x|} x ⊗ ∂y`.
///
/// Basis order: summand, then degree of the left factor, then left basis
/// order, then right basis order.
pub fn tensor_and_sum(label: impl Into<String>, summands: &[(&ChainComplex, &ChainComplex)], top: usize) -> Result<ChainComplex> {
    // origin[n][k] = (summand, left degree, left index, right index)
    let mut bases: Vec<Vec<Cell>> = vec![Vec::new(); top + 1];
    let mut origin: Vec<Vec<(usize, usize, usize, usize)>> = vec![Vec::new(); top + 1];
    for n in 0..=top {
        for (s, (c, d)) in summands.iter().enumerate() {
            for p in 0..=n {
                let q = n - p;
                for (i, x) in c.basis(p).iter().enumerate() {
                    for (j, y) in d.basis(q).iter().enumerate() {
                        bases[n].push(Cell::pair(x.clone(), y.clone()));
                        origin[n].push((s, p, i, j));
                    }
                }
            }
        }
    }
    let lookup: Vec<HashMap<(usize, usize, usize, usize), usize>> = origin
        .iter()
        .map(|o| o.iter().enumerate().map(|(k, &key)| (key, k)).collect())
        .collect();
    let mut boundaries = vec![SparseMatrix::zeros(0, bases[0].len())];
    for n in 1..=top {
        let mut cols = Vec::with_capacity(bases[n].len());
        for &(s, p, i, j) in &origin[n] {
            let (c, d) = summands[s];
            let q = n - p;
            let mut col = Vec::new();
            if p >= 1 {
                if let Some(dc) = c.boundary(p) {
                    for &(r, v) in dc.column(i) {
                        col.push((lookup[n - 1][&(s, p - 1, r, j)], v));
                    }
                }
            }
            if q >= 1 {
                if let Some(dd) = d.boundary(q) {
                    let sign = if p % 2 == 0 { 1 } else { -1 };
                    for &(r, v) in dd.column(j) {
                        col.push((lookup[n - 1][&(s, p, i, r)], sign * v));
                    }
                }
            }
            cols.push(col);
        }
        boundaries.push(SparseMatrix::from_columns(bases[n - 1].len(), cols));
    }
    ChainComplex::new(label, bases, boundaries)
}
