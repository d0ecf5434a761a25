//! Order complexes of causal posets on the integer grid, and their relative
//! homology compared with magnitude homology.
//!
//! For endpoints `a, b` and integer `ℓ` the poset has elements `(x, t)` with
//! `t ∈ 0..=ℓ`, `d(a,x) ≤ t` and `d(x,b) ≤ ℓ - t`, ordered by
//! `(x,t) < (x',t')` iff `d(x,x') ≤ t' - t` and the elements differ. `Δ` is its
//! order complex and `Δ'` the subcomplex of chains whose consecutive
//! distances sum to less than `ℓ`.

use crate::chain::{build_complex, default_top_degree, quotient_complex, Cell, ChainComplex, Restriction, SparseMatrix};
use crate::error::{Error, Result};
use crate::homology::{homology, HomologySummary};
use crate::metric::{Length, MetricSpace};

/// A poset element `(x, t)`.
pub type Event = (usize, i64);

#[derive(Clone, Debug)]
pub struct CausalPosetComplex {
    pub a: usize,
    pub b: usize,
    pub ell: i64,
    /// Elements sorted by `(t, x)`.
    pub events: Vec<Event>,
    /// Chains by dimension, as increasing lists of event indices.
    pub faces: Vec<Vec<Vec<usize>>>,
    /// `in_sub[n][k]`: whether face `k` of dimension `n` lies in `Δ'`.
    pub in_sub: Vec<Vec<bool>>,
}

/// Integer distance matrix, or `NonInteger` naming the first offending pair.
fn integer_distances(space: &MetricSpace) -> Result<Vec<Vec<i64>>> {
    (0..space.len())
        .map(|x| {
            (0..space.len())
                .map(|y| {
                    space.dist(x, y).to_integer().ok_or_else(|| {
                        Error::NonInteger(format!(
                            "d({},{}) = {}",
                            space.label(x),
                            space.label(y),
                            space.dist(x, y)
                        ))
                    })
                })
                .collect()
        })
        .collect()
}

impl CausalPosetComplex {
    pub fn build(space: &MetricSpace, ell: Length, a: usize, b: usize) -> Result<Self> {
        let d = integer_distances(space)?;
        let ell = ell
            .to_integer()
            .ok_or_else(|| Error::NonInteger(format!("length {ell}")))?;
        if ell < 0 {
            return Err(Error::InvalidLength(ell.to_string()));
        }
        let mut events = Vec::new();
        for t in 0..=ell {
            for x in 0..space.len() {
                if d[a][x] <= t && d[x][b] <= ell - t {
                    events.push((x, t));
                }
            }
        }
        let less = |p: Event, q: Event| p != q && d[p.0][q.0] <= q.1 - p.1;
        let mut faces: Vec<Vec<Vec<usize>>> = Vec::new();
        let mut stack: Vec<Vec<usize>> = (0..events.len()).rev().map(|k| vec![k]).collect();
        // depth-first in lexicographic order of index lists
        while let Some(chain) = stack.pop() {
            let last = *chain.last().expect("nonempty chain");
            let dim = chain.len() - 1;
            if faces.len() <= dim {
                faces.resize(dim + 1, Vec::new());
            }
            for next in (last + 1..events.len()).rev() {
                if less(events[last], events[next]) {
                    let mut longer = chain.clone();
                    longer.push(next);
                    stack.push(longer);
                }
            }
            faces[dim].push(chain);
        }
        let in_sub = faces
            .iter()
            .map(|layer| {
                layer
                    .iter()
                    .map(|c| {
                        c.windows(2)
                            .map(|w| d[events[w[0]].0][events[w[1]].0])
                            .sum::<i64>()
                            < ell
                    })
                    .collect()
            })
            .collect();
        Ok(CausalPosetComplex {
            a,
            b,
            ell,
            events,
            faces,
            in_sub,
        })
    }

    pub fn top_degree(&self) -> usize {
        self.faces.len().saturating_sub(1)
    }

    fn cell(&self, chain: &[usize]) -> Cell {
        Cell::Simplex(chain.iter().map(|&k| self.events[k]).collect())
    }

    /// Simplicial chains of `Δ` in degrees `0..=top`.
    pub fn chain_complex(&self, top: usize) -> ChainComplex {
        let layer = |n: usize| self.faces.get(n).map_or(&[][..], Vec::as_slice);
        let bases: Vec<Vec<Cell>> = (0..=top)
            .map(|n| layer(n).iter().map(|c| self.cell(c)).collect())
            .collect();
        let boundaries = (0..=top)
            .map(|n| {
                if n == 0 {
                    return SparseMatrix::zeros(0, layer(0).len());
                }
                let index: std::collections::HashMap<&[usize], usize> = layer(n - 1)
                    .iter()
                    .enumerate()
                    .map(|(i, c)| (c.as_slice(), i))
                    .collect();
                let cols = layer(n)
                    .iter()
                    .map(|c| {
                        (0..c.len())
                            .map(|i| {
                                let mut f = c.clone();
                                f.remove(i);
                                (index[f.as_slice()], if i % 2 == 0 { 1 } else { -1 })
                            })
                            .collect()
                    })
                    .collect();
                SparseMatrix::from_columns(layer(n - 1).len(), cols)
            })
            .collect();
        ChainComplex::new(format!("cau({},{})", self.a, self.b), bases, boundaries)
            .expect("simplicial boundary squares to zero")
    }

    /// `C(Δ) / C(Δ')` in degrees `0..=top`.
    pub fn relative_complex(&self, top: usize) -> Result<ChainComplex> {
        let full = self.chain_complex(top);
        let sub: Vec<Vec<usize>> = (0..=top)
            .map(|n| {
                self.in_sub
                    .get(n)
                    .map_or(Vec::new(), |m| (0..m.len()).filter(|&k| m[k]).collect())
            })
            .collect();
        quotient_complex(&full, &sub)
    }

    /// Faces of `Δ ∖ Δ'` as `(x, t)` lists.
    pub fn tight_faces(&self) -> Vec<Vec<Event>> {
        self.faces
            .iter()
            .zip(&self.in_sub)
            .flat_map(|(layer, sub)| {
                layer
                    .iter()
                    .zip(sub)
                    .filter(|(_, &s)| !s)
                    .map(|(c, _)| c.iter().map(|&k| self.events[k]).collect())
            })
            .collect()
    }
}

/// Relative and magnitude homology for one ordered pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CauPair {
    pub a: usize,
    pub b: usize,
    pub relative: HomologySummary,
    pub magnitude: HomologySummary,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CauReport {
    pub ell: i64,
    /// Degrees covered by both sides.
    pub top: usize,
    pub pairs: Vec<CauPair>,
    /// Summed Betti numbers over all pairs, per degree.
    pub relative_betti: Vec<usize>,
    pub magnitude_betti: Vec<usize>,
    /// Every `s` with `H_n(Δ, Δ') ≅ MH^ℓ_{n+s}` for all pairs and degrees,
    /// Betti numbers and torsion alike.
    pub fitting_shifts: Vec<i64>,
}

impl CauReport {
    pub fn passed(&self) -> bool {
        !self.fitting_shifts.is_empty()
    }
}

fn shifted_match(rel: &HomologySummary, mag: &HomologySummary, s: i64, top: usize) -> bool {
    let at = |h: &HomologySummary, k: i64| {
        if k < 0 {
            (0, Vec::new())
        } else {
            (h.betti(k as usize), h.torsion(k as usize).to_vec())
        }
    };
    (-(top as i64) - 1..=2 * top as i64 + 1).all(|n| at(rel, n) == at(mag, n + s))
}

/// Compares relative homology of every causal complex of `space` at length
/// `ℓ` with magnitude homology between the same endpoints, and fits the
/// degree shift.
///
/// Both sides vanish above degree `ℓ`; `nmax` caps the degrees built, and
/// without it the complexes are complete.
pub fn cau_verify(space: &MetricSpace, ell: Length, nmax: Option<usize>) -> Result<CauReport> {
    integer_distances(space)?;
    let l = ell
        .to_integer()
        .ok_or_else(|| Error::NonInteger(format!("length {ell}")))?;
    if l < 0 {
        return Err(Error::InvalidLength(ell.to_string()));
    }
    let complete = (l as usize).max(default_top_degree(space, ell));
    let top = nmax.map_or(complete, |n| n.min(complete));
    let mut pairs = Vec::new();
    for a in 0..space.len() {
        for b in 0..space.len() {
            let cau = CausalPosetComplex::build(space, ell, a, b)?;
            let relative = homology(&cau.relative_complex(top + 1)?);
            let magnitude = homology(&build_complex(space, ell, top + 1, Restriction::Endpoints(a, b))?);
            pairs.push(CauPair {
                a,
                b,
                relative: trim(relative, top),
                magnitude: trim(magnitude, top),
            });
        }
    }
    let sum = |f: fn(&CauPair) -> &HomologySummary| -> Vec<usize> {
        (0..=top).map(|n| pairs.iter().map(|p| f(p).betti(n)).sum()).collect()
    };
    let relative_betti = sum(|p| &p.relative);
    let magnitude_betti = sum(|p| &p.magnitude);
    let bound = l + 1;
    let fitting_shifts = (-bound..=bound)
        .filter(|&s| {
            pairs
                .iter()
                .all(|p| shifted_match(&p.relative, &p.magnitude, s, top))
                && (-(top as i64) - 1..=2 * top as i64 + 1).all(|n| {
                    let get = |v: &[usize], k: i64| {
                        if k < 0 { 0 } else { v.get(k as usize).copied().unwrap_or(0) }
                    };
                    get(&relative_betti, n) == get(&magnitude_betti, n + s)
                })
        })
        .collect();
    Ok(CauReport {
        ell: l,
        top,
        pairs,
        relative_betti,
        magnitude_betti,
        fitting_shifts,
    })
}

/// Drops the degree above `top`, which was built only to make `top` exact.
fn trim(mut h: HomologySummary, top: usize) -> HomologySummary {
    h.degrees.truncate(top + 1);
    h
}
