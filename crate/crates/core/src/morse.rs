//! Algebraic Morse theory on based free complexes: matching validation, the
//! hv-matching on the D-subcomplex, and reduction to the critical complex.
//!
//! A matched pair `a → b` (with `a` one degree above `b`) must have boundary
//! coefficient `±1`. The zig-zag digraph on upper cells has an arrow
//! `a → a'` whenever `∂a` meets a cell `b' ≠ m(a)` matched to `a'`; a matching
//! is Morse exactly when this digraph is acyclic.

use std::collections::{BTreeMap, BTreeSet};

use crate::chain::{Cell, ChainComplex, SparseMatrix};
use crate::classify::{fill_hv, t_word, DMembership};
use crate::error::{Error, Result};
use crate::fibration::Fibration;

/// A matched pair: `upper` in degree `degree + 1`, `lower` in degree `degree`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MatchedPair {
    pub degree: usize,
    pub upper: usize,
    pub lower: usize,
}

/// Why a set of edges is not a Morse matching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatchingFailure {
    /// An edge names a cell that does not exist.
    BadReference(MatchedPair),
    /// A cell `(degree, index)` is used by two edges.
    SharedVertex { degree: usize, index: usize },
    /// The boundary coefficient of a matched edge is not a unit.
    NonUnit { pair: MatchedPair, coefficient: i64 },
    /// A closed zig-zag path, listed as alternating upper/lower cell indices
    /// `a_1, b_1, a_2, …` in degrees `degree + 1` and `degree`.
    Cycle { degree: usize, path: Vec<usize> },
}

/// A validated Morse matching.
#[derive(Clone, Debug)]
pub struct MorseMatching<'c> {
    complex: &'c ChainComplex,
    pairs: Vec<MatchedPair>,
    critical: Vec<Vec<usize>>,
}

impl<'c> MorseMatching<'c> {
    pub fn complex(&self) -> &'c ChainComplex {
        self.complex
    }

    /// Pairs in elimination order.
    pub fn pairs(&self) -> &[MatchedPair] {
        &self.pairs
    }

    /// Unmatched basis positions per degree.
    pub fn critical(&self) -> &[Vec<usize>] {
        &self.critical
    }

    pub fn critical_count(&self) -> usize {
        self.critical.iter().map(Vec::len).sum()
    }

    pub fn is_perfect(&self) -> bool {
        self.critical_count() == 0
    }

    /// `(degree, upper cell, lower cell)` triples.
    pub fn dump(&self) -> Vec<(usize, &Cell, &Cell)> {
        self.pairs
            .iter()
            .map(|p| {
                (
                    p.degree,
                    &self.complex.basis(p.degree + 1)[p.upper],
                    &self.complex.basis(p.degree)[p.lower],
                )
            })
            .collect()
    }
}

/// Checks disjointness, unit coefficients and acyclicity. On success the
/// pairs are reordered by a topological order of the zig-zag digraph.
pub fn validate_matching<'c>(
    complex: &'c ChainComplex,
    edges: &[MatchedPair],
) -> Result<MorseMatching<'c>, MatchingFailure> {
    let top = complex.top_degree();
    let mut used: Vec<Vec<bool>> = (0..=top).map(|n| vec![false; complex.dim(n)]).collect();
    for &e in edges {
        if e.degree + 1 > top
            || e.upper >= complex.dim(e.degree + 1)
            || e.lower >= complex.dim(e.degree)
        {
            return Err(MatchingFailure::BadReference(e));
        }
        for (deg, idx) in [(e.degree + 1, e.upper), (e.degree, e.lower)] {
            if std::mem::replace(&mut used[deg][idx], true) {
                return Err(MatchingFailure::SharedVertex {
                    degree: deg,
                    index: idx,
                });
            }
        }
        let coefficient = complex
            .boundary(e.degree + 1)
            .expect("degree checked")
            .get(e.lower, e.upper);
        if coefficient.abs() != 1 {
            return Err(MatchingFailure::NonUnit {
                pair: e,
                coefficient,
            });
        }
    }
    let mut ordered = Vec::with_capacity(edges.len());
    for n in 0..top {
        let layer: Vec<MatchedPair> = edges.iter().copied().filter(|e| e.degree == n).collect();
        ordered.extend(topological_layer(complex, n, &layer)?);
    }
    let critical = used
        .iter()
        .map(|u| (0..u.len()).filter(|&i| !u[i]).collect())
        .collect();
    Ok(MorseMatching {
        complex,
        pairs: ordered,
        critical,
    })
}

/// Orders the pairs of one degree so that every zig-zag arrow `a → a'` puts
/// `a'` before `a`, or reports a cycle.
fn topological_layer(
    complex: &ChainComplex,
    n: usize,
    layer: &[MatchedPair],
) -> Result<Vec<MatchedPair>, MatchingFailure> {
    let d = complex.boundary(n + 1).expect("degree within range");
    let by_lower: BTreeMap<usize, usize> =
        layer.iter().enumerate().map(|(k, e)| (e.lower, k)).collect();
    // succ[k]: pairs k' reachable by a → b' ⇒ a'
    let succ: Vec<Vec<usize>> = layer
        .iter()
        .map(|e| {
            d.column(e.upper)
                .iter()
                .filter(|&&(r, _)| r != e.lower)
                .filter_map(|(r, _)| by_lower.get(r).copied())
                .collect()
        })
        .collect();

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let mut mark = vec![Mark::New; layer.len()];
    let mut post = Vec::with_capacity(layer.len());
    for start in 0..layer.len() {
        if mark[start] != Mark::New {
            continue;
        }
        // iterative DFS; stack holds (node, next successor slot)
        let mut stack = vec![(start, 0usize)];
        mark[start] = Mark::Active;
        while let Some(&mut (v, ref mut slot)) = stack.last_mut() {
            if let Some(&w) = succ[v].get(*slot) {
                *slot += 1;
                match mark[w] {
                    Mark::New => {
                        mark[w] = Mark::Active;
                        stack.push((w, 0));
                    }
                    Mark::Active => {
                        let from = stack.iter().position(|&(u, _)| u == w).expect("on stack");
                        let mut path = Vec::new();
                        for &(u, _) in &stack[from..] {
                            path.push(layer[u].upper);
                        }
                        // fill in the lower cells between consecutive uppers
                        let uppers = path;
                        let mut zigzag = Vec::with_capacity(2 * uppers.len() + 1);
                        for (k, &a) in uppers.iter().enumerate() {
                            let next = uppers.get(k + 1).copied().unwrap_or(uppers[0]);
                            let next_pair = layer.iter().find(|e| e.upper == next).expect("matched");
                            zigzag.push(a);
                            zigzag.push(next_pair.lower);
                        }
                        zigzag.push(uppers[0]);
                        return Err(MatchingFailure::Cycle {
                            degree: n,
                            path: zigzag,
                        });
                    }
                    Mark::Done => {}
                }
            } else {
                mark[v] = Mark::Done;
                post.push(v);
                stack.pop();
            }
        }
    }
    // successors finish first: eliminating in post-order never revisits a
    // pair whose coefficient was touched by a later elimination
    Ok(post.into_iter().map(|k| layer[k]).collect())
}

/// The matching `a^hv → a` over all tilted-first generators `a` of a
/// D-restricted complex, ordered by ascending weight of `a^hv`.
///
/// Besides the generic validation, checks the weight certificate: whenever
/// `a_2 ≠ a_1` is a tilted-first face of `a_1^hv`, `|a_1^hv| < |a_2^hv|`.
pub fn hv_matching<'c>(fib: &Fibration, d: &'c ChainComplex) -> Result<MorseMatching<'c>> {
    let top = d.top_degree();
    let mut edges = Vec::new();
    let mut weight_of_upper: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for n in 0..=top {
        for (i, cell) in d.basis(n).iter().enumerate() {
            let t = cell
                .as_path()
                .ok_or_else(|| Error::NotDComplex(format!("non-path generator {cell}")))?;
            let word = t_word(fib, t)?;
            match word.membership() {
                DMembership::Outside => {
                    return Err(Error::NotDComplex(format!(
                        "generator {} has word {}",
                        cell.render(fib.total()),
                        word
                    )))
                }
                DMembership::HvFirst => {}
                DMembership::TiltedFirst => {
                    if n == top {
                        // partner lies above the truncation; stays critical
                        continue;
                    }
                    let filled = fill_hv(fib, t)?;
                    let upper = d.position(n + 1, &Cell::Path(filled.clone())).ok_or_else(|| {
                        Error::NotDComplex(format!(
                            "filled generator {} missing",
                            Cell::Path(filled.clone()).render(fib.total())
                        ))
                    })?;
                    weight_of_upper.insert((n, upper), t_word(fib, &filled)?.weight());
                    edges.push(MatchedPair {
                        degree: n,
                        upper,
                        lower: i,
                    });
                }
            }
        }
    }
    check_weight_certificate(fib, d, &edges, &weight_of_upper)?;
    let m = validate_matching(d, &edges).map_err(|f| {
        Error::NotDComplex(format!("hv-matching fails validation: {f:?}"))
    })?;
    let mut pairs = m.pairs.clone();
    pairs.sort_by_key(|p| (p.degree, weight_of_upper[&(p.degree, p.upper)], p.upper));
    Ok(MorseMatching { pairs, ..m })
}

fn check_weight_certificate(
    fib: &Fibration,
    d: &ChainComplex,
    edges: &[MatchedPair],
    weight_of_upper: &BTreeMap<(usize, usize), usize>,
) -> Result<()> {
    let upper_of_lower: BTreeMap<(usize, usize), usize> = edges
        .iter()
        .map(|e| ((e.degree, e.lower), e.upper))
        .collect();
    for e in edges {
        let col = d.boundary(e.degree + 1).expect("degree within range").column(e.upper);
        let w1 = weight_of_upper[&(e.degree, e.upper)];
        for &(r, _) in col {
            if r == e.lower {
                continue;
            }
            if let Some(&u2) = upper_of_lower.get(&(e.degree, r)) {
                let w2 = weight_of_upper[&(e.degree, u2)];
                if w1 >= w2 {
                    return Err(Error::NotDComplex(format!(
                        "weight does not increase from {} to {}",
                        d.basis(e.degree + 1)[e.upper].render(fib.total()),
                        d.basis(e.degree + 1)[u2].render(fib.total())
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Eliminates the matched pairs one at a time, in the matching's order, and
/// returns the complex on the critical cells.
pub fn morse_reduce(m: &MorseMatching<'_>) -> Result<ChainComplex> {
    let c = m.complex;
    let mut work = Working::new(c);
    for p in &m.pairs {
        work.eliminate(p.degree + 1, p.upper, p.lower)?;
    }
    work.finish(c)
}

struct Working {
    /// cols[n][j]: boundary of cell j of degree n, by row
    cols: Vec<Vec<BTreeMap<usize, i64>>>,
    /// rows[n][r]: columns of degree n with an entry in row r (a cell of degree n-1)
    rows: Vec<Vec<BTreeSet<usize>>>,
    alive: Vec<Vec<bool>>,
}

impl Working {
    fn new(c: &ChainComplex) -> Self {
        let top = c.top_degree();
        let mut cols = Vec::with_capacity(top + 1);
        let mut rows = Vec::with_capacity(top + 1);
        for n in 0..=top {
            let d = c.boundary(n).expect("degree within range");
            let mut r_index = vec![BTreeSet::new(); d.nrows()];
            let cs = d
                .columns()
                .enumerate()
                .map(|(j, col)| {
                    col.iter()
                        .map(|&(r, v)| {
                            r_index[r].insert(j);
                            (r, v)
                        })
                        .collect()
                })
                .collect();
            cols.push(cs);
            rows.push(r_index);
        }
        let alive = (0..=top).map(|n| vec![true; c.dim(n)]).collect();
        Working { cols, rows, alive }
    }

    fn eliminate(&mut self, up: usize, a: usize, b: usize) -> Result<()> {
        let u = self.cols[up][a].get(&b).copied().unwrap_or(0);
        if u.abs() != 1 {
            return Err(Error::NotDComplex(format!(
                "pivot coefficient {u} is not a unit at reduction time"
            )));
        }
        let pivot = std::mem::take(&mut self.cols[up][a]);
        for &r in pivot.keys() {
            self.rows[up][r].remove(&a);
        }
        // c ← c − λu·a for every other column c meeting b
        let others: Vec<usize> = self.rows[up][b].iter().copied().collect();
        for k in others {
            let lambda = self.cols[up][k][&b];
            let f = lambda.checked_mul(u).ok_or(Error::Overflow("Morse reduction"))?;
            for (&r, &v) in &pivot {
                let e = self.cols[up][k].entry(r).or_insert(0);
                *e = f
                    .checked_mul(v)
                    .and_then(|p| e.checked_sub(p))
                    .ok_or(Error::Overflow("Morse reduction"))?;
                if *e == 0 {
                    self.cols[up][k].remove(&r);
                    self.rows[up][r].remove(&k);
                } else {
                    self.rows[up][r].insert(k);
                }
            }
        }
        debug_assert!(self.rows[up][b].is_empty());
        // drop row a from the degree above
        if up + 1 < self.cols.len() {
            for e in std::mem::take(&mut self.rows[up + 1][a]) {
                self.cols[up + 1][e].remove(&a);
            }
        }
        // drop column b
        for r in std::mem::take(&mut self.cols[up - 1][b]).into_keys() {
            self.rows[up - 1][r].remove(&b);
        }
        self.alive[up][a] = false;
        self.alive[up - 1][b] = false;
        Ok(())
    }

    fn finish(self, c: &ChainComplex) -> Result<ChainComplex> {
        let top = c.top_degree();
        let keep: Vec<Vec<usize>> = self
            .alive
            .iter()
            .map(|a| (0..a.len()).filter(|&i| a[i]).collect())
            .collect();
        let new_index: Vec<Vec<Option<usize>>> = self
            .alive
            .iter()
            .map(|a| {
                let mut next = 0;
                a.iter()
                    .map(|&live| {
                        live.then(|| {
                            next += 1;
                            next - 1
                        })
                    })
                    .collect()
            })
            .collect();
        let bases = keep
            .iter()
            .enumerate()
            .map(|(n, k)| k.iter().map(|&i| c.basis(n)[i].clone()).collect())
            .collect();
        let boundaries = (0..=top)
            .map(|n| {
                let rows = if n == 0 { 0 } else { keep[n - 1].len() };
                let cols = keep[n]
                    .iter()
                    .map(|&j| {
                        self.cols[n][j]
                            .iter()
                            .map(|(&r, &v)| (new_index[n - 1][r].expect("surviving row"), v))
                            .collect()
                    })
                    .collect();
                SparseMatrix::from_columns(rows, cols)
            })
            .collect();
        ChainComplex::new(c.label().to_string(), bases, boundaries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{build_complex, Restriction};
    use crate::fixtures;
    use crate::homology::homology;
    use crate::metric::Length;

    /// Boundary of a triangle: vertices 0,1,2; edges 01, 02, 12; one 2-cell.
    fn triangle() -> ChainComplex {
        let d1 = SparseMatrix::from_columns(
            3,
            vec![vec![(0, -1), (1, 1)], vec![(0, -1), (2, 1)], vec![(1, -1), (2, 1)]],
        );
        let d2 = SparseMatrix::from_columns(3, vec![vec![(0, 1), (1, -1), (2, 1)]]);
        ChainComplex::new(
            "tri",
            vec![
                (0..3).map(Cell::Gen).collect(),
                (3..6).map(Cell::Gen).collect(),
                vec![Cell::Gen(6)],
            ],
            vec![SparseMatrix::zeros(0, 3), d1, d2],
        )
        .unwrap()
    }

    #[test]
    fn empty_matching_is_identity() {
        let c = triangle();
        let m = validate_matching(&c, &[]).unwrap();
        assert_eq!(m.critical_count(), c.total_dim());
        assert_eq!(morse_reduce(&m).unwrap(), c);
    }

    #[test]
    fn collapse_triangle_to_point() {
        let c = triangle();
        let edges = [
            MatchedPair { degree: 1, upper: 0, lower: 2 },
            MatchedPair { degree: 0, upper: 0, lower: 1 },
            MatchedPair { degree: 0, upper: 1, lower: 2 },
        ];
        let m = validate_matching(&c, &edges).unwrap();
        let r = morse_reduce(&m).unwrap();
        assert_eq!(r.total_dim(), 1);
        assert_eq!(homology(&r), homology(&c));
    }

    #[test]
    fn non_unit_coefficient() {
        let c = ChainComplex::new(
            "2",
            vec![vec![Cell::Gen(0)], vec![Cell::Gen(1)]],
            vec![
                SparseMatrix::zeros(0, 1),
                SparseMatrix::from_columns(1, vec![vec![(0, 2)]]),
            ],
        )
        .unwrap();
        let e = MatchedPair { degree: 0, upper: 0, lower: 0 };
        assert_eq!(
            validate_matching(&c, &[e]).unwrap_err(),
            MatchingFailure::NonUnit { pair: e, coefficient: 2 }
        );
    }

    #[test]
    fn shared_vertex_and_cycle() {
        let c = triangle();
        let shared = [
            MatchedPair { degree: 0, upper: 0, lower: 1 },
            MatchedPair { degree: 0, upper: 1, lower: 1 },
        ];
        assert_eq!(
            validate_matching(&c, &shared).unwrap_err(),
            MatchingFailure::SharedVertex { degree: 0, index: 1 }
        );
        // 01 → 1, 12 → 2, 02 → 0 goes around the triangle
        let cyc = [
            MatchedPair { degree: 0, upper: 0, lower: 1 },
            MatchedPair { degree: 0, upper: 2, lower: 2 },
            MatchedPair { degree: 0, upper: 1, lower: 0 },
        ];
        assert!(matches!(
            validate_matching(&c, &cyc).unwrap_err(),
            MatchingFailure::Cycle { degree: 0, .. }
        ));
    }

    #[test]
    fn hv_matching_on_e2_is_perfect() {
        let e2 = fixtures::paper_e2();
        for ell in 1..=3 {
            let d = build_complex(e2.total(), Length::integer(ell), ell as usize, Restriction::DOnly(&e2)).unwrap();
            let m = hv_matching(&e2, &d).unwrap();
            assert!(m.is_perfect());
            let r = morse_reduce(&m).unwrap();
            assert!(r.is_zero());
        }
    }

    #[test]
    fn hv_matching_rejects_full_complex() {
        let e2 = fixtures::paper_e2();
        let full = build_complex(e2.total(), Length::integer(1), 1, Restriction::All).unwrap();
        assert!(matches!(hv_matching(&e2, &full), Err(Error::NotDComplex(_))));
    }
}
