//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::process::{Command, ExitCode};

use magfib::causal::cau_verify;
use magfib::chain::{build_complex, d_closure_violations, default_top_degree, Cell, ChainComplex, Restriction, SparseMatrix};
use magfib::classify::{step, t_word, Step};
use magfib::deltaset::{build_pointed_delta, deltaiso_check, reduced_chain_complex, DeltaVariant};
use magfib::fibration::Fibration;
use magfib::fixtures;
use magfib::homology::homology;
use magfib::kunneth::verify_kunneth;
use magfib::metric::{Length, MetricSpace};
use magfib::morse::{hv_matching, morse_reduce, validate_matching, MatchedPair};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn l(n: i64) -> Length {
    Length::integer(n)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn magfib(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_magfib"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn all_fixtures() -> Vec<(&'static str, Fibration)> {
    fixtures::NAMES
        .iter()
        .map(|&n| (n, fixtures::by_name(n).unwrap()))
        .collect()
}

fn fixture_validity() -> Check {
    for name in ["paper-E1", "paper-E2"] {
        let (code, out) = magfib(&["fibcheck", "--fixture", name]);
        ensure(code == 0, || format!("fibcheck {name} exited {code}: {}", String::from_utf8_lossy(&out)))?;
        let f = fixtures::by_name(name).unwrap();
        ensure(f.check_fiber_isometry().is_ok(), || format!("{name}: fiber isometry fails"))?;
    }
    let e1 = fixtures::paper_e1();
    let e2 = fixtures::paper_e2();
    ensure(e1.total().len() == 12 && e1.base().len() == 4, || "E1 shape".into())?;
    ensure(e2.total().len() == 6 && e2.base().len() == 3, || "E2 shape".into())?;
    ensure(isometric(&e1.fiber(0).space, &MetricSpace::path(3)), || "E1 fiber is not I3".into())?;
    ensure(isometric(&e2.fiber(0).space, &MetricSpace::path(2)), || "E2 fiber is not I2".into())?;
    Ok("E1, E2 verified; all fibers isometric".into())
}

fn t_calculus() -> Check {
    let mut triples = 0usize;
    for (name, f) in all_fixtures() {
        let e = f.total();
        let b = f.base();
        for x in 0..e.len() {
            for y in 0..e.len() {
                for z in 0..e.len() {
                    if x == y || y == z || !e.is_between(x, y, z) || e.dist(x, z) > l(4) {
                        continue;
                    }
                    triples += 1;
                    let (s1, s2, s) = (step(&f, x, y), step(&f, y, z), step(&f, x, z));
                    use Step::*;
                    let expected = match (s1, s2) {
                        (Vertical, Vertical) => vec![Vertical],
                        (Tilted, _) | (_, Tilted) => vec![Tilted],
                        (Horizontal, Vertical) | (Vertical, Horizontal) => vec![Tilted],
                        (Horizontal, Horizontal) => {
                            if b.is_between(f.project(x), f.project(y), f.project(z)) {
                                vec![Horizontal]
                            } else {
                                vec![Tilted]
                            }
                        }
                    };
                    ensure(expected.contains(&s), || {
                        format!("{name}: T({x},{y})={s1:?}, T({y},{z})={s2:?} but T({x},{z})={s:?}")
                    })?;
                }
            }
        }
    }
    let e1 = fixtures::paper_e1();
    let e2 = fixtures::paper_e2();
    let word = |f: &Fibration, names: &[&str]| -> String {
        let t: Vec<usize> = names.iter().map(|n| f.total().index_of(n).unwrap()).collect();
        t_word(f, &t).unwrap().to_string()
    };
    let cases: [(&Fibration, [&str; 3], &str, &str); 9] = [
        (&e1, ["1", "2", "6"], "hv", "t"),
        (&e1, ["1", "5", "6"], "vh", "t"),
        (&e1, ["1", "2", "7"], "ht", "t"),
        (&e1, ["1", "6", "7"], "th", "t"),
        (&e1, ["1", "5", "10"], "vt", "t"),
        (&e1, ["1", "6", "10"], "tv", "t"),
        (&e1, ["1", "6", "11"], "tt", "t"),
        (&e1, ["1", "2", "3"], "hh", "h"),
        (&e2, ["a", "e", "f"], "hh", "t"),
    ];
    for (f, t, w, outer) in cases {
        let e = f.total();
        let idx: Vec<usize> = t.iter().map(|n| e.index_of(n).unwrap()).collect();
        ensure(e.is_between(idx[0], idx[1], idx[2]), || format!("{t:?} is not a between triple"))?;
        ensure(word(f, &t) == w, || format!("T{t:?} = {} not {w}", word(f, &t)))?;
        let o = word(f, &[t[0], t[2]]);
        ensure(o == outer, || format!("T({},{}) = {o} not {outer}", t[0], t[2]))?;
    }
    Ok(format!("{triples} between triples, 9 worked identities"))
}

fn subcomplex_closure() -> Check {
    for (name, f) in [("E1", fixtures::paper_e1()), ("E2", fixtures::paper_e2())] {
        for ell in 0..=3 {
            let top = default_top_degree(f.total(), l(ell));
            let bad = d_closure_violations(&f, l(ell), top);
            ensure(bad.is_empty(), || format!("{name} l={ell}: {:?}", bad[0]))?;
        }
    }
    Ok("no D generator has a face outside D".into())
}

fn contractibility() -> Check {
    let mut pairs = 0;
    for (name, f, lmax) in [("E1", fixtures::paper_e1(), 3), ("E2", fixtures::paper_e2(), 4)] {
        for ell in 0..=lmax {
            let top = default_top_degree(f.total(), l(ell));
            let d = build_complex(f.total(), l(ell), top, Restriction::DOnly(&f)).map_err(|e| e.to_string())?;
            ensure(homology(&d).is_zero(), || format!("{name} l={ell}: H(D) ≠ 0"))?;
            let m = hv_matching(&f, &d).map_err(|e| format!("{name} l={ell}: {e}"))?;
            ensure(m.is_perfect(), || format!("{name} l={ell}: {} critical cells", m.critical_count()))?;
            let again = validate_matching(&d, m.pairs()).map_err(|e| format!("{name} l={ell}: {e:?}"))?;
            ensure(again.is_perfect(), || "revalidation differs".into())?;
            let r = morse_reduce(&m).map_err(|e| e.to_string())?;
            ensure(r.total_dim() == 0, || format!("{name} l={ell}: reduced complex nonempty"))?;
            pairs += m.pairs().len();
        }
    }
    Ok(format!("D acyclic by SNF and by reduction; {pairs} matched pairs"))
}

/// Direct sum of `Z` summands and `Z --k--> Z` pieces, conjugated by random
/// unimodular changes of basis. Returns the complex and its known Betti
/// numbers and torsion.
fn random_known_complex(rng: &mut ChaCha8Rng) -> (ChainComplex, Vec<usize>, Vec<Vec<BigInt>>) {
    let top = rng.gen_range(1..=3usize);
    let mut dims = vec![0usize; top + 1];
    let mut betti = vec![0usize; top + 1];
    let mut torsion: Vec<Vec<BigInt>> = vec![Vec::new(); top + 1];
    // (lower degree, lower index, upper index, k)
    let mut arrows = Vec::new();
    for piece in 0..rng.gen_range(3..=9) {
        let n = rng.gen_range(0..=top);
        // the first piece is always a unit pair so some edge is matchable
        let n = if piece == 0 { n.min(top - 1) } else { n };
        if piece == 0 || (n < top && rng.gen_bool(0.6)) {
            let k: i64 = if piece == 0 { 1 } else { [1, 1, 2, 4, 8][rng.gen_range(0..5)] };
            arrows.push((n, dims[n], dims[n + 1], k));
            dims[n] += 1;
            dims[n + 1] += 1;
            if k > 1 {
                torsion[n].push(BigInt::from(k));
            }
        } else {
            dims[n] += 1;
            betti[n] += 1;
        }
    }
    for t in &mut torsion {
        t.sort();
    }
    let mut d: Vec<Vec<Vec<i64>>> = (0..=top)
        .map(|n| vec![vec![0; dims[n]]; if n == 0 { 0 } else { dims[n - 1] }])
        .collect();
    for &(n, lo, up, k) in &arrows {
        d[n + 1][lo][up] = k;
    }
    // P_n and P_n^{-1} per degree
    let mut p: Vec<Vec<Vec<i64>>> = dims.iter().map(|&k| identity(k)).collect();
    let mut pinv = p.clone();
    for n in 0..=top {
        if dims[n] < 2 {
            continue;
        }
        for _ in 0..rng.gen_range(1..=4) {
            let i = rng.gen_range(0..dims[n]);
            let mut j = rng.gen_range(0..dims[n]);
            while j == i {
                j = rng.gen_range(0..dims[n]);
            }
            let c: i64 = [-2, -1, 1, 2][rng.gen_range(0..4)];
            // P ← E P with E = I + c e_ij; P^{-1} ← P^{-1} E^{-1}
            for col in 0..dims[n] {
                p[n][i][col] += c * p[n][j][col];
            }
            for row in pinv[n].iter_mut() {
                row[j] -= c * row[i];
            }
        }
    }
    let boundaries = (0..=top)
        .map(|n| {
            if n == 0 {
                return SparseMatrix::zeros(0, dims[0]);
            }
            let m = mul(&mul(&p[n - 1], &d[n]), &pinv[n]);
            let cols = (0..dims[n])
                .map(|j| (0..dims[n - 1]).filter(|&i| m[i][j] != 0).map(|i| (i, m[i][j])).collect())
                .collect();
            SparseMatrix::from_columns(dims[n - 1], cols)
        })
        .collect();
    let bases = (0..=top)
        .map(|n| (0..dims[n]).map(|i| Cell::Gen(100 * n + i)).collect())
        .collect();
    (ChainComplex::new("random", bases, boundaries).unwrap(), betti, torsion)
}

fn identity(k: usize) -> Vec<Vec<i64>> {
    (0..k).map(|i| (0..k).map(|j| i64::from(i == j)).collect()).collect()
}

fn mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect())
        .collect()
}

fn greedy_matching(c: &ChainComplex, rng: &mut ChaCha8Rng) -> Vec<MatchedPair> {
    let mut candidates = Vec::new();
    for n in 0..c.top_degree() {
        for upper in 0..c.dim(n + 1) {
            for &(lower, v) in c.boundary(n + 1).unwrap().column(upper) {
                if v.abs() == 1 {
                    candidates.push(MatchedPair { degree: n, upper, lower });
                }
            }
        }
    }
    candidates.shuffle(rng);
    let mut chosen = Vec::new();
    for e in candidates {
        chosen.push(e);
        if validate_matching(c, &chosen).is_err() {
            chosen.pop();
        }
    }
    chosen
}

fn morse_soundness() -> Check {
    let mut matched = 0;
    let trials = 150;
    for seed in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (c, betti, torsion) = random_known_complex(&mut rng);
        let before = homology(&c);
        for n in 0..=c.top_degree() {
            ensure(before.betti(n) == betti[n] && before.torsion(n) == torsion[n].as_slice(), || {
                format!("seed {seed}: SNF disagrees with the construction in degree {n}")
            })?;
        }
        let edges = greedy_matching(&c, &mut rng);
        matched += usize::from(!edges.is_empty());
        let m = validate_matching(&c, &edges).map_err(|e| format!("seed {seed}: {e:?}"))?;
        let after = homology(&morse_reduce(&m).map_err(|e| e.to_string())?);
        ensure(after.same_groups(&before), || format!("seed {seed}: reduction changed homology"))?;
    }
    ensure(matched >= 100, || format!("only {matched} complexes had a nonempty matching"))?;
    Ok(format!("{trials} random complexes, {matched} with nonempty matchings"))
}

fn kunneth_runs(cases: &[(&str, Fibration, i64)]) -> Check {
    let mut runs = 0;
    for (name, f, lmax) in cases {
        for b in 0..f.base().len() {
            let r = verify_kunneth(f, b, l(*lmax), None).map_err(|e| e.to_string())?;
            ensure(r.passed(), || format!("{name} basepoint {b}: {r:?}"))?;
            runs += 1;
        }
        let lm = lmax.to_string();
        let (code, out) = magfib(&["kunneth", "--fixture", name, "--lmax", &lm]);
        ensure(code == 0, || format!("kunneth {name} exited {code}: {}", String::from_utf8_lossy(&out)))?;
    }
    Ok(format!("{runs} (fixture, basepoint) runs agree in every degree"))
}

fn main_theorem() -> Check {
    kunneth_runs(&[
        ("paper-E2", fixtures::paper_e2(), 4),
        ("paper-E1", fixtures::paper_e1(), 3),
    ])
}

fn product_kunneth() -> Check {
    kunneth_runs(&[
        ("product-I2-I3", fixtures::by_name("product-I2-I3").unwrap(), 3),
        ("product-I2-K3", fixtures::by_name("product-I2-K3").unwrap(), 3),
    ])
}

fn complete_graph_oracle() -> Check {
    for (m, n) in [(3usize, 1usize), (3, 2), (2, 3)] {
        let k = MetricSpace::complete(m);
        let c = build_complex(&k, l(n as i64), n, Restriction::All).map_err(|e| e.to_string())?;
        let h = homology(&c);
        let expected = m * (m - 1).pow(n as u32);
        // brute force over all (n+1)-tuples
        let mut count = 0;
        for code in 0..m.pow(n as u32 + 1) {
            let t: Vec<usize> = (0..=n).map(|i| code / m.pow(i as u32) % m).collect();
            if t.windows(2).all(|w| w[0] != w[1]) {
                count += 1;
                for i in 1..n {
                    ensure(!k.is_between(t[i - 1], t[i], t[i + 1]), || format!("{t:?} has a boundary term"))?;
                }
            }
        }
        ensure(count == expected, || format!("K{m}: brute force {count} ≠ {expected}"))?;
        ensure(h.betti(n) == expected && h.torsion(n).is_empty(), || {
            format!("MH^{n}_{n}(K{m}) has rank {}", h.betti(n))
        })?;
    }
    Ok("ranks 6, 12, 2 from pipeline and brute force".into())
}

fn delta_layer() -> Check {
    let mut spaces: Vec<(String, MetricSpace)> = all_fixtures()
        .into_iter()
        .map(|(n, f)| (n.to_string(), f.total().clone()))
        .collect();
    spaces.push(("C5".into(), MetricSpace::cycle(5)));
    for (name, s) in &spaces {
        for ell in 0..=3 {
            let top = default_top_degree(s, l(ell));
            let m = build_pointed_delta(s, l(ell), top, DeltaVariant::Magnitude).map_err(|e| format!("{name}: {e}"))?;
            let direct = build_complex(s, l(ell), top, Restriction::All).map_err(|e| e.to_string())?;
            ensure(reduced_chain_complex(&m) == direct, || format!("{name} l={ell}: reduced chains differ"))?;
        }
    }
    for (name, f) in all_fixtures() {
        for ell in 0..=3 {
            let top = default_top_degree(f.total(), l(ell));
            let d = build_pointed_delta(f.total(), l(ell), top, DeltaVariant::D(&f)).map_err(|e| format!("{name}: {e}"))?;
            let direct = build_complex(f.total(), l(ell), top, Restriction::DOnly(&f)).map_err(|e| e.to_string())?;
            ensure(reduced_chain_complex(&d) == direct, || format!("{name} l={ell}: D chains differ"))?;
        }
    }
    let e2 = fixtures::paper_e2();
    for b in 0..3 {
        for ell in 0..=3 {
            let r = deltaiso_check(&e2, b, l(ell), ell as usize).map_err(|e| e.to_string())?;
            ensure(r.passed(), || format!("E2 basepoint {b} l={ell}: {:?}", r.failure))?;
        }
    }
    Ok("identities hold; reduced chains equal MC and D; E2 quotient ≅ I2×K3 quotient".into())
}

fn appendix() -> Check {
    let mut common: Option<Vec<i64>> = None;
    for (name, s) in [("I2", MetricSpace::path(2)), ("I3", MetricSpace::path(3)), ("C4", MetricSpace::cycle(4))] {
        for ell in 0..=2 {
            let r = cau_verify(&s, l(ell), None).map_err(|e| e.to_string())?;
            let shifts = r.fitting_shifts.clone();
            common = Some(match common {
                None => shifts,
                Some(c) => c.into_iter().filter(|x| shifts.contains(x)).collect(),
            });
            ensure(!r.fitting_shifts.is_empty(), || format!("{name} l={ell}: no shift fits"))?;
        }
    }
    let common = common.unwrap_or_default();
    ensure(common.len() == 1, || format!("shifts fitting every input: {common:?}"))?;
    Ok(format!("fitted shift s = {}", common[0]))
}

fn determinism() -> Check {
    let commands: [&[&str]; 8] = [
        &["validate", "--fixture", "paper-E1"],
        &["mh", "--fixture", "paper-E2", "--lmax", "3"],
        &["fibcheck", "--fixture", "paper-E1"],
        &["kunneth", "--fixture", "paper-E2", "--lmax", "3"],
        &["morse", "--fixture", "paper-E1", "--lmax", "3"],
        &["deltaiso", "--fixture", "paper-E2", "--lmax", "3"],
        &["cau", "--fixture", "C4", "--lmax", "2"],
        &["mh", "--fixture", "paper-E1", "--lmax", "3", "--nmax", "2"],
    ];
    let mut runs = 0;
    for cmd in commands {
        for format in ["table", "structured"] {
            let mut outputs = Vec::new();
            for jobs in ["1", "8", "1", "8"] {
                let mut args = cmd.to_vec();
                args.extend(["--format", format, "--jobs", jobs]);
                outputs.push(magfib(&args));
                runs += 1;
            }
            ensure(outputs.windows(2).all(|w| w[0] == w[1]), || format!("{cmd:?} --format {format} differs"))?;
        }
    }
    Ok(format!("{runs} runs, byte-identical per command"))
}

/// Brute-force isometry test over all bijections; fine for tiny spaces.
fn isometric(a: &MetricSpace, b: &MetricSpace) -> bool {
    fn extend(a: &MetricSpace, b: &MetricSpace, map: &mut Vec<usize>) -> bool {
        let x = map.len();
        if x == a.len() {
            return true;
        }
        for y in 0..b.len() {
            if map.contains(&y) || (0..x).any(|w| a.dist(w, x) != b.dist(map[w], y)) {
                continue;
            }
            map.push(y);
            if extend(a, b, map) {
                return true;
            }
            map.pop();
        }
        false
    }
    a.len() == b.len() && extend(a, b, &mut Vec::new())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("fixture validity", fixture_validity),
        ("T-calculus", t_calculus),
        ("subcomplex closure", subcomplex_closure),
        ("contractibility of D", contractibility),
        ("Morse engine soundness", morse_soundness),
        ("fibration Künneth theorem", main_theorem),
        ("product Künneth cross-check", product_kunneth),
        ("complete-graph oracle", complete_graph_oracle),
        ("Δ-set layer", delta_layer),
        ("causal order complexes", appendix),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
