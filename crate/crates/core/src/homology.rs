//! Integer homology of chain complexes and quasi-isomorphism tests.

use std::fmt;

use num_bigint::BigInt;

use crate::chain::{Cell, ChainComplex, SparseMatrix};
use crate::error::{Error, Result};
use crate::snf::{smith_form, SmithForm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeHomology {
    pub degree: usize,
    pub betti: usize,
    /// Invariant factors greater than one, ascending and dividing each other.
    pub torsion: Vec<BigInt>,
}

impl DegreeHomology {
    pub fn is_zero(&self) -> bool {
        self.betti == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for DegreeHomology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.betti {
            0 => {}
            1 => parts.push("Z".to_string()),
            b => parts.push(format!("Z^{b}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Homology in degrees `0..=top` of a complex.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HomologySummary {
    pub degrees: Vec<DegreeHomology>,
}

impl HomologySummary {
    pub fn is_zero(&self) -> bool {
        self.degrees.iter().all(DegreeHomology::is_zero)
    }

    pub fn betti(&self, n: usize) -> usize {
        self.degrees.get(n).map_or(0, |d| d.betti)
    }

    pub fn torsion(&self, n: usize) -> &[BigInt] {
        self.degrees.get(n).map_or(&[], |d| d.torsion.as_slice())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees
            .iter()
            .map(|d| if d.degree % 2 == 0 { d.betti as i64 } else { -(d.betti as i64) })
            .sum()
    }

    /// Equality as graded groups, ignoring trailing zero degrees.
    pub fn same_groups(&self, other: &HomologySummary) -> bool {
        let n = self.degrees.len().max(other.degrees.len());
        (0..n).all(|k| self.betti(k) == other.betti(k) && self.torsion(k) == other.torsion(k))
    }
}

/// Homology of `c` from Smith normal forms of its boundary matrices.
///
/// `∂∂ = 0` holds for every [`ChainComplex`] by construction. The top degree
/// is computed as if the complex vanished above it.
pub fn homology(c: &ChainComplex) -> HomologySummary {
    let top = c.top_degree();
    let forms: Vec<SmithForm> = (0..=top + 1)
        .map(|n| match c.boundary(n) {
            Some(d) => smith_form(d),
            None => SmithForm::default(),
        })
        .collect();
    let degrees = (0..=top)
        .map(|n| DegreeHomology {
            degree: n,
            betti: c.dim(n) - forms[n].rank - forms[n + 1].rank,
            torsion: forms[n + 1].torsion(),
        })
        .collect();
    HomologySummary { degrees }
}

/// Per-degree integer matrices `f_n: C_n → D_n`. Missing degrees are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub components: Vec<SparseMatrix>,
}

impl ChainMap {
    pub fn identity(c: &ChainComplex) -> Self {
        ChainMap {
            components: (0..=c.top_degree())
                .map(|n| SparseMatrix::identity(c.dim(n)))
                .collect(),
        }
    }

    pub fn zero(c: &ChainComplex, d: &ChainComplex) -> Self {
        ChainMap {
            components: (0..=c.top_degree())
                .map(|n| SparseMatrix::zeros(d.dim(n), c.dim(n)))
                .collect(),
        }
    }

    fn at(&self, n: usize, c: &ChainComplex, d: &ChainComplex) -> SparseMatrix {
        self.components
            .get(n)
            .cloned()
            .unwrap_or_else(|| SparseMatrix::zeros(d.dim(n), c.dim(n)))
    }
}

fn boundary_or_zero(c: &ChainComplex, n: usize) -> SparseMatrix {
    match c.boundary(n) {
        Some(d) => d.clone(),
        None => SparseMatrix::zeros(if n == 0 { 0 } else { c.dim(n - 1) }, c.dim(n)),
    }
}

/// Verifies `∂_D f_n = f_{n-1} ∂_C` in every degree.
pub fn check_chain_map(f: &ChainMap, c: &ChainComplex, d: &ChainComplex) -> Result<()> {
    let top = c.top_degree().max(d.top_degree()) + 1;
    for n in 0..=top {
        let fn_ = f.at(n, c, d);
        if fn_.nrows() != d.dim(n) || fn_.ncols() != c.dim(n) {
            return Err(Error::Dimension(n));
        }
        if n == 0 {
            continue;
        }
        let lhs = boundary_or_zero(d, n).mul(&fn_)?;
        let rhs = f.at(n - 1, c, d).mul(&boundary_or_zero(c, n))?;
        for j in 0..c.dim(n) {
            if lhs.column(j) != rhs.column(j) {
                return Err(Error::NotChainMap {
                    degree: n,
                    cell: c.basis(n)[j].to_string(),
                });
            }
        }
    }
    Ok(())
}

/// `Cone(f)_n = C_{n-1} ⊕ D_n` with `∂(c, d) = (-∂c, f c + ∂d)`.
pub fn mapping_cone(f: &ChainMap, c: &ChainComplex, d: &ChainComplex) -> Result<ChainComplex> {
    check_chain_map(f, c, d)?;
    let top = c.top_degree().max(d.top_degree()) + 1;
    let tag = |side: usize, cell: &Cell| Cell::pair(Cell::Gen(side), cell.clone());
    let bases: Vec<Vec<Cell>> = (0..=top)
        .map(|n| {
            let mut b: Vec<Cell> = if n == 0 {
                Vec::new()
            } else {
                c.basis(n - 1).iter().map(|x| tag(0, x)).collect()
            };
            b.extend(d.basis(n).iter().map(|y| tag(1, y)));
            b
        })
        .collect();
    let mut boundaries = vec![SparseMatrix::zeros(0, bases[0].len())];
    for n in 1..=top {
        // rows: C_{n-2} then D_{n-1}
        let offset = if n >= 2 { c.dim(n - 2) } else { 0 };
        let mut cols = Vec::with_capacity(bases[n].len());
        let fc = f.at(n - 1, c, d);
        let dc = boundary_or_zero(c, n - 1);
        for j in 0..c.dim(n - 1) {
            let mut col: Vec<(usize, i64)> = if n >= 2 {
                dc.column(j).iter().map(|&(r, v)| (r, -v)).collect()
            } else {
                Vec::new()
            };
            col.extend(fc.column(j).iter().map(|&(r, v)| (offset + r, v)));
            cols.push(col);
        }
        let dd = boundary_or_zero(d, n);
        for j in 0..d.dim(n) {
            cols.push(dd.column(j).iter().map(|&(r, v)| (offset + r, v)).collect());
        }
        boundaries.push(SparseMatrix::from_columns(bases[n - 1].len(), cols));
    }
    ChainComplex::new(format!("cone({})", c.label()), bases, boundaries)
}

/// Whether `f` induces an isomorphism on homology, decided by acyclicity of
/// its mapping cone.
pub fn is_quasi_iso(f: &ChainMap, c: &ChainComplex, d: &ChainComplex) -> Result<bool> {
    Ok(homology(&mapping_cone(f, c, d)?).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{build_complex, Restriction};
    use crate::metric::{Length, MetricSpace};

    fn l(n: i64) -> Length {
        Length::integer(n)
    }

    /// Two-generator complex `Z --k--> Z` in degrees 1 → 0.
    fn multiplication(k: i64) -> ChainComplex {
        ChainComplex::new(
            "k",
            vec![vec![Cell::Gen(0)], vec![Cell::Gen(1)]],
            vec![
                SparseMatrix::zeros(0, 1),
                SparseMatrix::from_columns(1, vec![vec![(0, k)]]),
            ],
        )
        .unwrap()
    }

    #[test]
    fn torsion_reported() {
        let h = homology(&multiplication(6));
        assert_eq!(h.degrees[0].torsion, vec![BigInt::from(6)]);
        assert_eq!(h.betti(0), 0);
        assert_eq!(h.betti(1), 0);
        assert_eq!(h.degrees[0].to_string(), "Z/6");
    }

    #[test]
    fn zero_boundaries_give_free_homology() {
        let k3 = MetricSpace::complete(3);
        let c = build_complex(&k3, l(1), 1, Restriction::All).unwrap();
        let h = homology(&c);
        assert_eq!(h.betti(1), 6);
        assert_eq!(h.betti(0), 0);
        assert!(h.degrees.iter().all(|d| d.torsion.is_empty()));
    }

    #[test]
    fn path_graph_i3_length_two() {
        let c = build_complex(&MetricSpace::path(3), l(2), 2, Restriction::All).unwrap();
        let h = homology(&c);
        // P_1^2 = {(1,3),(3,1)}, P_2^2 = {(1,2,1),(1,2,3),(2,1,2),(2,3,2),(3,2,1),(3,2,3)};
        // ∂ kills (1,3) and (3,1) against (1,2,3) and (3,2,1).
        assert_eq!(h.betti(1), 0);
        assert_eq!(h.betti(2), 4);
    }

    #[test]
    fn quasi_iso_identity_and_zero() {
        let c = build_complex(&MetricSpace::cycle(5), l(2), 2, Restriction::All).unwrap();
        assert!(is_quasi_iso(&ChainMap::identity(&c), &c, &c).unwrap());
        assert!(!homology(&c).is_zero());
        assert!(!is_quasi_iso(&ChainMap::zero(&c, &c), &c, &c).unwrap());
    }

    #[test]
    fn non_chain_map_rejected() {
        let c = multiplication(2);
        let bad = ChainMap {
            components: vec![SparseMatrix::identity(1), SparseMatrix::zeros(1, 1)],
        };
        let err = check_chain_map(&bad, &c, &c).unwrap_err();
        assert_eq!(
            err,
            Error::NotChainMap {
                degree: 1,
                cell: "g1".into()
            }
        );
    }
}
