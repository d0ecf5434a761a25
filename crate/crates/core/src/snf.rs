//! Smith normal form of sparse integer matrices over arbitrary-precision
//! integers.
//!
//! Unit pivots are eliminated first on the sparse representation, choosing
//! the pivot with the smallest Markowitz cost `(r - 1)(c - 1)`. Whatever is
//! left (typically tiny) is diagonalized densely by Euclidean row and column
//! reduction, and the diagonal is then normalized into a divisibility chain.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::chain::SparseMatrix;

/// Rank and nonzero invariant factors `d_1 | d_2 | … | d_r` (all positive).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SmithForm {
    pub rank: usize,
    pub invariant_factors: Vec<BigInt>,
}

impl SmithForm {
    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

pub fn smith_form(m: &SparseMatrix) -> SmithForm {
    let mut work = Sparse::new(m);
    let units = work.eliminate_units();
    let rest = work.into_dense();
    let mut diag = diagonalize(rest);
    diag.extend(std::iter::repeat_n(BigInt::one(), units));
    normalize_chain(&mut diag);
    SmithForm {
        rank: diag.len(),
        invariant_factors: diag,
    }
}

struct Sparse {
    cols: Vec<BTreeMap<usize, BigInt>>,
    rows: Vec<BTreeSet<usize>>,
}

impl Sparse {
    fn new(m: &SparseMatrix) -> Self {
        let mut rows = vec![BTreeSet::new(); m.nrows()];
        let cols = m
            .columns()
            .enumerate()
            .map(|(j, c)| {
                c.iter()
                    .map(|&(r, v)| {
                        rows[r].insert(j);
                        (r, BigInt::from(v))
                    })
                    .collect()
            })
            .collect();
        Sparse { cols, rows }
    }

    fn best_unit_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for (c, col) in self.cols.iter().enumerate() {
            for (&r, v) in col {
                if v.abs().is_one() {
                    let cost = (col.len() - 1) * (self.rows[r].len() - 1);
                    if best.is_none_or(|(b, _, _)| cost < b) {
                        best = Some((cost, r, c));
                        if cost == 0 {
                            return Some((r, c));
                        }
                    }
                }
            }
        }
        best.map(|(_, r, c)| (r, c))
    }

    /// Eliminates unit pivots until none remain; returns how many.
    fn eliminate_units(&mut self) -> usize {
        let mut count = 0;
        while let Some((r, c)) = self.best_unit_pivot() {
            let pivot_col = std::mem::take(&mut self.cols[c]);
            let u = pivot_col[&r].clone();
            let others: Vec<usize> = self.rows[r].iter().copied().filter(|&k| k != c).collect();
            for k in others {
                let f = &self.cols[k][&r] * &u;
                for (&r2, v) in &pivot_col {
                    let entry = self.cols[k].entry(r2).or_insert_with(BigInt::zero);
                    *entry -= &f * v;
                    if entry.is_zero() {
                        self.cols[k].remove(&r2);
                        self.rows[r2].remove(&k);
                    } else {
                        self.rows[r2].insert(k);
                    }
                }
            }
            for &r2 in pivot_col.keys() {
                self.rows[r2].remove(&c);
            }
            debug_assert!(self.rows[r].is_empty());
            count += 1;
        }
        count
    }

    fn into_dense(self) -> Vec<Vec<BigInt>> {
        let live_rows: Vec<usize> = (0..self.rows.len())
            .filter(|&r| !self.rows[r].is_empty())
            .collect();
        let row_pos: BTreeMap<usize, usize> =
            live_rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let live_cols: Vec<&BTreeMap<usize, BigInt>> =
            self.cols.iter().filter(|c| !c.is_empty()).collect();
        let mut dense = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
        for (j, col) in live_cols.iter().enumerate() {
            for (r, v) in col.iter() {
                dense[row_pos[r]][j] = v.clone();
            }
        }
        dense
    }
}

/// Returns the absolute values of a diagonal equivalent to `a`.
fn diagonalize(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_abs_entry(&a, t, t..m, t..n) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if !a[i][t].is_zero() {
                    let q = &a[i][t] / &a[t][t];
                    for j in t..n {
                        let d = &q * &a[t][j];
                        a[i][j] -= d;
                    }
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = &a[t][j] / &a[t][t];
                    for row in a.iter_mut().skip(t) {
                        let d = &q * &row[t];
                        row[j] -= d;
                    }
                    clean &= a[t][j].is_zero();
                }
            }
            if clean {
                break;
            }
            // a smaller remainder is left in row t or column t; make it the pivot
            let (bi, bj) = (t + 1..m)
                .map(|i| (i, t))
                .chain((t + 1..n).map(|j| (t, j)))
                .filter(|&(i, j)| !a[i][j].is_zero())
                .min_by(|&(i, j), &(k, l)| a[i][j].abs().cmp(&a[k][l].abs()))
                .expect("unclean pivot row or column has a nonzero entry");
            if bi != t {
                a.swap(t, bi);
            } else {
                for row in a.iter_mut() {
                    row.swap(t, bj);
                }
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

fn min_abs_entry(
    a: &[Vec<BigInt>],
    _t: usize,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if a[i][j].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                best = Some((i, j));
                if a[i][j].abs().is_one() {
                    return best;
                }
            }
        }
    }
    best
}

/// Replaces a list of positive integers by the invariant factors of the
/// diagonal matrix they form, ascending.
fn normalize_chain(diag: &mut [BigInt]) {
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            let g = diag[i].gcd(&diag[j]);
            if g != diag[i] {
                let l = diag[i].lcm(&diag[j]);
                diag[i] = g;
                diag[j] = l;
            }
        }
    }
    diag.sort();
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf(rows: usize, dense: &[Vec<i64>]) -> SmithForm {
        smith_form(&SparseMatrix::from_dense(rows, dense))
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn zero_and_empty() {
        assert_eq!(snf(0, &[]), SmithForm::default());
        assert_eq!(snf(2, &[vec![0, 0], vec![0, 0]]).rank, 0);
    }

    #[test]
    fn classic_examples() {
        let s = snf(2, &[vec![2, 0], vec![0, 3]]);
        assert_eq!(s.invariant_factors, ints(&[1, 6]));
        assert_eq!(s.torsion(), ints(&[6]));

        let s = snf(3, &[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        assert_eq!(s.invariant_factors, ints(&[2, 6, 12]));

        let s = snf(2, &[vec![4, 6], vec![6, 4]]);
        // det = -20, gcd of entries 2
        assert_eq!(s.invariant_factors, ints(&[2, 10]));
    }

    #[test]
    fn projective_plane_boundary_has_z2() {
        // ∂2 of the 2-cell of RP² on a one-cell skeleton: multiplication by 2.
        let s = snf(1, &[vec![2]]);
        assert_eq!(s.torsion(), ints(&[2]));
    }

    #[test]
    fn unit_phase_and_remainder_mix() {
        let s = snf(
            3,
            &[vec![1, 1, 0], vec![0, 2, 0], vec![0, 0, 3]],
        );
        assert_eq!(s.invariant_factors, ints(&[1, 1, 6]));
    }
}
