use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use magfib::fibration::Fibration;
use magfib::metric::{Length, MetricSpace};
use magfib::{fixtures, io};

use crate::args::{FibrationInput, Levels, SpaceInput};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn space_file(path: &Path) -> Result<MetricSpace> {
    io::parse_space(&read(path)?).with_context(|| format!("in {}", path.display()))
}

/// A named space, not yet checked against the metric axioms.
pub fn load_space(input: &SpaceInput) -> Result<(String, MetricSpace)> {
    if let Some(name) = &input.fixture {
        let space = fixtures::space_by_name(name).ok_or_else(|| anyhow!("unknown fixture {name:?}"))?;
        return Ok((name.clone(), space));
    }
    if let Some(path) = input.space.as_ref().or(input.total.as_ref()) {
        return Ok((path.display().to_string(), space_file(path)?));
    }
    bail!("one of --fixture, --space or --total is required")
}

/// The parts of a fibration before verification.
pub struct RawFibration {
    pub name: String,
    pub total: MetricSpace,
    pub base: MetricSpace,
    pub projection: Vec<(String, String)>,
}

pub fn load_fibration(input: &FibrationInput) -> Result<RawFibration> {
    if let Some(name) = &input.fixture {
        let f = fixtures::by_name(name).ok_or_else(|| anyhow!("unknown fibration fixture {name:?}"))?;
        let projection = (0..f.total().len())
            .map(|x| {
                (
                    f.total().label(x).to_string(),
                    f.base().label(f.project(x)).to_string(),
                )
            })
            .collect();
        return Ok(RawFibration {
            name: name.clone(),
            total: f.total().clone(),
            base: f.base().clone(),
            projection,
        });
    }
    if let Some(path) = &input.fibration {
        let (total, base, projection) =
            io::parse_fibration(&read(path)?).with_context(|| format!("in {}", path.display()))?;
        return Ok(RawFibration {
            name: path.display().to_string(),
            total,
            base,
            projection,
        });
    }
    match (&input.total, &input.base, &input.proj) {
        (Some(t), Some(b), Some(p)) => Ok(RawFibration {
            name: t.display().to_string(),
            total: space_file(t)?,
            base: space_file(b)?,
            projection: io::parse_projection(&read(p)?).with_context(|| format!("in {}", p.display()))?,
        }),
        _ => bail!("one of --fixture, --fibration or --total/--base/--proj is required"),
    }
}

/// Verifies the metric axioms and the fibration axioms, treating any failure
/// as an input error.
pub fn verified_fibration(raw: RawFibration) -> Result<Fibration> {
    let total = raw.total.checked().context("total space")?;
    let base = raw.base.checked().context("base space")?;
    match Fibration::verify_labeled(total.clone(), base.clone(), &raw.projection)? {
        Ok(f) => Ok(f),
        Err(failure) => bail!("not a metric fibration: {}", failure.describe(&total, &base)),
    }
}

pub fn lmax(levels: &Levels) -> Result<Length> {
    let l: Length = levels.lmax.parse()?;
    if l.is_negative() {
        bail!("--lmax must be nonnegative, got {l}");
    }
    Ok(l)
}

pub fn basepoint(fib: &Fibration, label: Option<&str>) -> Result<usize> {
    match label {
        None => Ok(0),
        Some(l) => Ok(fib.base().index_of(l)?),
    }
}
