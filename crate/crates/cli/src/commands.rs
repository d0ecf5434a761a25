use anyhow::{bail, Context, Result};
use magfib::causal::cau_verify;
use magfib::chain::{build_complex, default_top_degree, Restriction};
use magfib::deltaset::deltaiso_check;
use magfib::fibration::Fibration;
use magfib::homology::{homology, DegreeHomology};
use magfib::kunneth::verify_level;
use magfib::metric::Length;
use magfib::morse::{hv_matching, morse_reduce};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::{Command, FibrationLevelCmd, Format, Output, SpaceCmd, SpaceLevelCmd};
use crate::input::{basepoint, load_fibration, load_space, lmax, verified_fibration};
use crate::report::*;

/// Rendered output and whether the verification succeeded.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

fn emit<R: Serialize>(format: Format, report: &R, table: impl FnOnce(&R) -> String, passed: bool) -> Result<Outcome> {
    let text = match format {
        Format::Table => table(report),
        Format::Structured => serde_json::to_string_pretty(report)? + "\n",
    };
    Ok(Outcome { text, passed })
}

/// Runs one job per length on a pool of `jobs` threads, keeping input order.
fn per_level<T: Send>(jobs: usize, lengths: Vec<Length>, job: impl Fn(Length) -> Result<T> + Sync) -> Result<Vec<T>> {
    if jobs == 0 {
        bail!("--jobs must be at least 1");
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .context("cannot start worker threads")?;
    pool.install(|| lengths.into_par_iter().map(|l| job(l)).collect())
}

fn strings(v: &[BigInt]) -> Vec<String> {
    v.iter().map(BigInt::to_string).collect()
}

pub fn run(command: Command) -> Result<Outcome> {
    match command {
        Command::Validate(c) => validate(c),
        Command::Mh(c) => mh(c),
        Command::Fibcheck(c) => fibcheck(c.input, c.output),
        Command::Kunneth(c) => kunneth(c),
        Command::Morse(c) => morse(c),
        Command::Deltaiso(c) => deltaiso(c),
        Command::Cau(c) => cau(c),
    }
}

fn validate(c: SpaceCmd) -> Result<Outcome> {
    let (name, space) = load_space(&c.input)?;
    let violation = space.validate().err().map(|v| v.describe(&space));
    let report = ValidateReport {
        schema: schema("validate"),
        input: name,
        points: space.len(),
        integral: space.is_integral(),
        valid: violation.is_none(),
        violation,
    };
    let passed = report.valid;
    emit(c.output.format, &report, ValidateReport::table, passed)
}

fn mh(c: SpaceLevelCmd) -> Result<Outcome> {
    let (name, space) = load_space(&c.input)?;
    let space = space.checked()?;
    let lmax = lmax(&c.levels)?;
    let nmax = c.levels.nmax;
    let levels = per_level(c.output.jobs, space.achievable_lengths(lmax), |ell| {
        let (report_top, build_top) = match nmax {
            Some(n) => (n, n + 1),
            None => {
                let t = default_top_degree(&space, ell);
                (t, t)
            }
        };
        let complex = build_complex(&space, ell, build_top, Restriction::All)?;
        let h = homology(&complex);
        Ok(MhLevel {
            ell: ell.to_string(),
            rows: (0..=report_top)
                .map(|n| MhRow {
                    n,
                    rank: complex.dim(n),
                    betti: h.betti(n),
                    torsion: strings(h.torsion(n)),
                })
                .collect(),
        })
    })?;
    let report = MhReport {
        schema: schema("mh"),
        input: name,
        lmax: lmax.to_string(),
        nmax,
        levels,
    };
    emit(c.output.format, &report, MhReport::table, true)
}

fn fibcheck(input: crate::args::FibrationInput, output: Output) -> Result<Outcome> {
    let raw = load_fibration(&input)?;
    let name = raw.name.clone();
    let mut report = FibcheckReport {
        schema: schema("fibcheck"),
        input: name,
        total_points: raw.total.len(),
        base_points: raw.base.len(),
        verified: false,
        failure: None,
        fibers: Vec::new(),
        lifts: Vec::new(),
        fiber_isometry: false,
    };
    let checked = raw
        .total
        .validate()
        .map_err(|v| format!("total space: {}", v.describe(&raw.total)))
        .and_then(|()| {
            raw.base
                .validate()
                .map_err(|v| format!("base space: {}", v.describe(&raw.base)))
        });
    if let Err(e) = checked {
        report.failure = Some(e);
        return emit(output.format, &report, FibcheckReport::table, false);
    }
    match Fibration::verify_labeled(raw.total.clone(), raw.base.clone(), &raw.projection)? {
        Err(f) => report.failure = Some(f.describe(&raw.total, &raw.base)),
        Ok(fib) => {
            report.verified = true;
            let (e, b) = (fib.total(), fib.base());
            report.fibers = (0..b.len())
                .map(|p| FiberEntry {
                    base: b.label(p).to_string(),
                    points: fib.fiber_points(p).iter().map(|&x| e.label(x).to_string()).collect(),
                })
                .collect();
            report.lifts = (0..e.len())
                .map(|x| {
                    (0..b.len())
                        .map(|p| e.label(fib.lift(x, p).expect("indices in range")).to_string())
                        .collect()
                })
                .collect();
            match fib.check_fiber_isometry() {
                Ok(()) => report.fiber_isometry = true,
                Err((p, q)) => {
                    report.failure = Some(format!(
                        "lifting from the fiber over {} to the fiber over {} is not an isometry",
                        b.label(p),
                        b.label(q)
                    ))
                }
            }
        }
    }
    let passed = report.passed();
    emit(output.format, &report, FibcheckReport::table, passed)
}

fn group_strings(h: &[DegreeHomology]) -> Vec<String> {
    h.iter().map(ToString::to_string).collect()
}

fn kunneth(c: FibrationLevelCmd) -> Result<Outcome> {
    let raw = load_fibration(&c.input)?;
    let name = raw.name.clone();
    let fib = verified_fibration(raw)?;
    let b = basepoint(&fib, c.basepoint.as_deref())?;
    let lmax = lmax(&c.levels)?;
    let nmax = c.levels.nmax;
    let levels = per_level(c.output.jobs, fib.total().achievable_lengths(lmax), |ell| {
        let level = verify_level(&fib, b, ell, nmax)?;
        Ok(KunnethLevel {
            ell: ell.to_string(),
            passed: level.passed(),
            subcomplex_violation: level.subcomplex_violation.clone(),
            phi_psi_error: level.phi_psi.clone().err(),
            projection_quasi_iso: level.projection_quasi_iso,
            rows: level
                .rows
                .iter()
                .map(|r| KunnethRow {
                    n: r.n,
                    betti_total: r.betti_total,
                    betti_quotient: r.betti_quotient,
                    betti_rhs: r.betti_rhs,
                    torsion_total: strings(&r.torsion_total),
                    torsion_quotient: strings(&r.torsion_quotient),
                    torsion_rhs: strings(&r.torsion_rhs),
                    d_betti: r.d_betti,
                    d_torsion: strings(&r.d_torsion),
                })
                .collect(),
        })
    })?;
    let passed = levels.iter().all(|l| l.passed);
    let report = KunnethReport {
        schema: schema("kunneth"),
        input: name,
        basepoint: fib.base().label(b).to_string(),
        lmax: lmax.to_string(),
        nmax,
        passed,
        levels,
    };
    emit(c.output.format, &report, KunnethReport::table, passed)
}

fn morse(c: FibrationLevelCmd) -> Result<Outcome> {
    let raw = load_fibration(&c.input)?;
    let name = raw.name.clone();
    let fib = verified_fibration(raw)?;
    let lmax = lmax(&c.levels)?;
    let nmax = c.levels.nmax;
    let e = fib.total();
    let levels = per_level(c.output.jobs, e.achievable_lengths(lmax), |ell| {
        let (report_top, build_top) = match nmax {
            Some(n) => (n, n + 1),
            None => {
                let t = default_top_degree(e, ell);
                (t, t)
            }
        };
        let d = build_complex(e, ell, build_top, Restriction::DOnly(&fib))?;
        let d_ranks: Vec<usize> = (0..=report_top).map(|n| d.dim(n)).collect();
        let d_homology_zero = homology(&d).degrees.iter().take(report_top + 1).all(|g| g.is_zero());
        let mut level = MorseLevel {
            ell: ell.to_string(),
            passed: false,
            error: None,
            d_ranks,
            matched_pairs: 0,
            critical: Vec::new(),
            d_homology_zero,
        };
        match hv_matching(&fib, &d).and_then(|m| Ok((morse_reduce(&m)?, m.pairs().len()))) {
            Err(err) => level.error = Some(err.to_string()),
            Ok((reduced, pairs)) => {
                level.matched_pairs = pairs;
                level.critical = (0..=report_top).map(|n| reduced.dim(n)).collect();
                level.passed = d_homology_zero && level.critical.iter().all(|&k| k == 0);
            }
        }
        Ok(level)
    })?;
    let passed = levels.iter().all(|l| l.passed);
    let report = MorseReport {
        schema: schema("morse"),
        input: name,
        lmax: lmax.to_string(),
        nmax,
        passed,
        levels,
    };
    emit(c.output.format, &report, MorseReport::table, passed)
}

fn deltaiso(c: FibrationLevelCmd) -> Result<Outcome> {
    let raw = load_fibration(&c.input)?;
    let name = raw.name.clone();
    let fib = verified_fibration(raw)?;
    let b = basepoint(&fib, c.basepoint.as_deref())?;
    let lmax = lmax(&c.levels)?;
    let nmax = c.levels.nmax;
    let levels = per_level(c.output.jobs, fib.total().achievable_lengths(lmax), |ell| {
        let top = nmax.unwrap_or_else(|| default_top_degree(fib.total(), ell));
        let r = deltaiso_check(&fib, b, ell, top)?;
        Ok(DeltaisoLevel {
            ell: ell.to_string(),
            passed: r.passed(),
            failure: r.failure.clone(),
            degrees: r
                .degrees
                .iter()
                .map(|d| DeltaisoDegree {
                    n: d.n,
                    total_cells: d.total_cells,
                    product_cells: d.product_cells,
                })
                .collect(),
        })
    })?;
    let passed = levels.iter().all(|l| l.passed);
    let report = DeltaisoReport {
        schema: schema("deltaiso"),
        input: name,
        basepoint: fib.base().label(b).to_string(),
        lmax: lmax.to_string(),
        nmax,
        passed,
        levels,
    };
    emit(c.output.format, &report, DeltaisoReport::table, passed)
}

fn cau(c: SpaceLevelCmd) -> Result<Outcome> {
    let (name, space) = load_space(&c.input)?;
    let space = space.checked()?;
    let lmax = lmax(&c.levels)?;
    let nmax = c.levels.nmax;
    let top = lmax.as_rational().floor().to_integer();
    let lengths = (0..=top).map(Length::integer).collect();
    let levels = per_level(c.output.jobs, lengths, |ell| {
        let r = cau_verify(&space, ell, nmax)?;
        Ok(CauLevel {
            ell: r.ell,
            relative_betti: r.relative_betti.clone(),
            magnitude_betti: r.magnitude_betti.clone(),
            fitting_shifts: r.fitting_shifts.clone(),
            pairs: r
                .pairs
                .iter()
                .map(|p| CauPair {
                    a: space.label(p.a).to_string(),
                    b: space.label(p.b).to_string(),
                    relative: group_strings(&p.relative.degrees),
                    magnitude: group_strings(&p.magnitude.degrees),
                })
                .collect(),
        })
    })?;
    let mut common: Vec<i64> = levels.first().map_or(Vec::new(), |l| l.fitting_shifts.clone());
    for l in &levels {
        common.retain(|s| l.fitting_shifts.contains(s));
    }
    let passed = !common.is_empty();
    let report = CauReport {
        schema: schema("cau"),
        input: name,
        lmax: lmax.to_string(),
        nmax,
        common_shifts: common,
        passed,
        levels,
    };
    emit(c.output.format, &report, CauReport::table, passed)
}
