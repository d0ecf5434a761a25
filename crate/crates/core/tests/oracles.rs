//! Independent cross-checks against slow reference computations.

use magfib::chain::{build_complex, d_basis, default_top_degree, ChainComplex, Restriction};
use magfib::classify::{fill_hv, t_word, unfill_hv, DMembership};
use magfib::fixtures;
use magfib::homology::homology;
use magfib::metric::{Length, MetricSpace};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Rank over Q by fraction-exact Gaussian elimination.
fn rational_rank(rows: usize, cols: Vec<Vec<(usize, i64)>>) -> usize {
    let mut m: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); cols.len()]; rows];
    for (j, col) in cols.iter().enumerate() {
        for &(i, v) in col {
            m[i][j] = BigRational::from_integer(BigInt::from(v));
        }
    }
    let mut rank = 0;
    for c in 0..cols.len() {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = BigRational::one() / m[rank][c].clone();
        for r in rank + 1..rows {
            if m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].clone() * inv.clone();
            for k in c..cols.len() {
                let t = m[rank][k].clone() * f.clone();
                m[r][k] -= t;
            }
        }
        rank += 1;
    }
    rank
}

fn check_ranks(c: &ChainComplex) {
    let h = homology(c);
    let ranks: Vec<usize> = (0..=c.top_degree() + 1)
        .map(|n| match c.boundary(n) {
            Some(d) if n > 0 => rational_rank(d.nrows(), d.columns().map(<[_]>::to_vec).collect()),
            _ => 0,
        })
        .collect();
    for n in 0..c.top_degree() {
        // the top degree has no incoming boundary and is not a homology group
        let betti = c.dim(n) - ranks[n] - ranks[n + 1];
        assert_eq!(h.betti(n), betti, "{} degree {n}", c.label());
    }
}

#[test]
fn rational_ranks_agree_with_smith_form() {
    let mut spaces = vec![
        MetricSpace::cycle(4),
        MetricSpace::cycle(5),
        MetricSpace::complete(3),
        MetricSpace::path(4),
    ];
    spaces.extend(fixtures::NAMES.iter().map(|n| fixtures::by_name(n).unwrap().total().clone()));
    for s in &spaces {
        for ell in 1..=3 {
            let ell = Length::integer(ell);
            let c = build_complex(s, ell, default_top_degree(s, ell), Restriction::All).unwrap();
            check_ranks(&c);
        }
    }
}

#[test]
fn fill_hv_is_a_bijection_onto_hv_first() {
    for (name, f) in [("E1", fixtures::paper_e1()), ("E2", fixtures::paper_e2())] {
        for ell in 1..=4 {
            let ell = Length::integer(ell);
            let top = default_top_degree(f.total(), ell);
            for n in 0..top {
                let lower = d_basis(&f, ell, n);
                let upper = d_basis(&f, ell, n + 1);
                let mut tilted = Vec::new();
                for t in &lower {
                    if t_word(&f, t).unwrap().membership() == DMembership::TiltedFirst {
                        let up = fill_hv(&f, t).unwrap();
                        let w = t_word(&f, &up).unwrap();
                        assert_eq!(w.membership(), DMembership::HvFirst, "{name} {t:?}");
                        assert!(upper.contains(&up), "{name}: {up:?} not in D");
                        assert_eq!(unfill_hv(&f, &up).unwrap(), *t);
                        tilted.push(up);
                    }
                }
                let hv: Vec<_> = upper
                    .iter()
                    .filter(|t| t_word(&f, t).unwrap().membership() == DMembership::HvFirst)
                    .cloned()
                    .collect();
                tilted.sort();
                let mut hv_sorted = hv.clone();
                hv_sorted.sort();
                assert_eq!(tilted, hv_sorted, "{name} degree {n}");
            }
        }
    }
}

#[test]
fn other_faces_of_a_filled_tuple_have_larger_weight_partners() {
    // every tilted-first face b != a of a^hv has weight(b^hv) > weight(a^hv)
    for f in [fixtures::paper_e1(), fixtures::paper_e2()] {
        for ell in 1..=4 {
            let ell = Length::integer(ell);
            let top = default_top_degree(f.total(), ell);
            for n in 0..top {
                for t in d_basis(&f, ell, n) {
                    if t_word(&f, &t).unwrap().membership() != DMembership::TiltedFirst {
                        continue;
                    }
                    let up = fill_hv(&f, &t).unwrap();
                    let w = t_word(&f, &up).unwrap().weight();
                    for i in 1..up.len() - 1 {
                        if !f.total().is_between(up[i - 1], up[i], up[i + 1]) {
                            continue;
                        }
                        let mut face = up.clone();
                        face.remove(i);
                        if face == t {
                            continue;
                        }
                        let fw = t_word(&f, &face).unwrap();
                        if fw.membership() == DMembership::TiltedFirst {
                            let partner = fill_hv(&f, &face).unwrap();
                            assert!(t_word(&f, &partner).unwrap().weight() > w, "{up:?} -> {face:?}");
                        }
                    }
                }
            }
        }
    }
}
