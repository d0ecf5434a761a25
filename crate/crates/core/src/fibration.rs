//! Metric fibrations `π: E → B` with a materialized lift table.

use std::fmt;

use crate::error::{Error, Result};
use crate::metric::MetricSpace;

/// Why a candidate map fails to be a metric fibration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FibrationFailure {
    /// The projection table has the wrong length or names an unknown base point.
    BadProjection(String),
    NotSurjective { base_point: usize },
    /// `d_B(πx, πy) > d_E(x, y)`.
    Lipschitz { x: usize, y: usize },
    MissingLift { point: usize, base_point: usize },
    AmbiguousLift {
        point: usize,
        base_point: usize,
        candidates: Vec<usize>,
    },
}

impl FibrationFailure {
    pub fn describe(&self, total: &MetricSpace, base: &MetricSpace) -> String {
        match self {
            FibrationFailure::BadProjection(s) => format!("bad projection: {s}"),
            FibrationFailure::NotSurjective { base_point } => format!(
                "projection is not surjective: nothing maps to {}",
                base.label(*base_point)
            ),
            FibrationFailure::Lipschitz { x, y } => format!(
                "projection is not 1-Lipschitz at ({}, {})",
                total.label(*x),
                total.label(*y)
            ),
            FibrationFailure::MissingLift { point, base_point } => format!(
                "no lift of {} to the fiber over {}",
                total.label(*point),
                base.label(*base_point)
            ),
            FibrationFailure::AmbiguousLift {
                point,
                base_point,
                candidates,
            } => format!(
                "lift of {} to the fiber over {} is not unique: {}",
                total.label(*point),
                base.label(*base_point),
                candidates
                    .iter()
                    .map(|&c| total.label(c))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        }
    }
}

impl fmt::Display for FibrationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A verified metric fibration.
#[derive(Clone, Debug)]
pub struct Fibration {
    total: MetricSpace,
    base: MetricSpace,
    projection: Vec<usize>,
    /// `lifts[x * |B| + b] = x^b`
    lifts: Vec<usize>,
    fibers: Vec<Vec<usize>>,
}

/// The fiber `π⁻¹(b)` with the induced metric.
#[derive(Clone, Debug)]
pub struct FiberSpace {
    pub basepoint: usize,
    /// Total-space indices of the fiber points, ascending.
    pub points: Vec<usize>,
    pub space: MetricSpace,
}

impl FiberSpace {
    /// Index within the fiber of a total-space point.
    pub fn local_index(&self, x: usize) -> Option<usize> {
        self.points.binary_search(&x).ok()
    }
}

impl Fibration {
    /// Checks the fibration axioms and builds the lift table.
    pub fn verify(
        total: MetricSpace,
        base: MetricSpace,
        projection: Vec<usize>,
    ) -> Result<Fibration, FibrationFailure> {
        let (ne, nb) = (total.len(), base.len());
        if projection.len() != ne {
            return Err(FibrationFailure::BadProjection(format!(
                "{} entries for {} points",
                projection.len(),
                ne
            )));
        }
        if let Some(&b) = projection.iter().find(|&&b| b >= nb) {
            return Err(FibrationFailure::BadProjection(format!(
                "base index {b} out of range"
            )));
        }
        let mut fibers = vec![Vec::new(); nb];
        for (x, &b) in projection.iter().enumerate() {
            fibers[b].push(x);
        }
        if let Some(b) = fibers.iter().position(Vec::is_empty) {
            return Err(FibrationFailure::NotSurjective { base_point: b });
        }
        for x in 0..ne {
            for y in 0..ne {
                if base.dist(projection[x], projection[y]) > total.dist(x, y) {
                    return Err(FibrationFailure::Lipschitz { x, y });
                }
            }
        }
        let mut lifts = Vec::with_capacity(ne * nb);
        for x in 0..ne {
            for b in 0..nb {
                let target = base.dist(projection[x], b);
                let candidates: Vec<usize> = fibers[b]
                    .iter()
                    .copied()
                    .filter(|&z| {
                        total.dist(x, z) == target
                            && fibers[b]
                                .iter()
                                .all(|&y| total.dist(x, y) == target + total.dist(z, y))
                    })
                    .collect();
                match candidates.as_slice() {
                    [z] => lifts.push(*z),
                    [] => {
                        return Err(FibrationFailure::MissingLift {
                            point: x,
                            base_point: b,
                        })
                    }
                    _ => {
                        return Err(FibrationFailure::AmbiguousLift {
                            point: x,
                            base_point: b,
                            candidates,
                        })
                    }
                }
            }
        }
        Ok(Fibration {
            total,
            base,
            projection,
            lifts,
            fibers,
        })
    }

    /// Like [`Fibration::verify`] with the projection given by labels.
    pub fn verify_labeled(
        total: MetricSpace,
        base: MetricSpace,
        projection: &[(String, String)],
    ) -> Result<Result<Fibration, FibrationFailure>> {
        let mut table = vec![None; total.len()];
        for (e, b) in projection {
            table[total.index_of(e)?] = Some(base.index_of(b)?);
        }
        let mut resolved = Vec::with_capacity(table.len());
        for (x, b) in table.into_iter().enumerate() {
            match b {
                Some(b) => resolved.push(b),
                None => {
                    return Ok(Err(FibrationFailure::BadProjection(format!(
                        "no image for {}",
                        total.label(x)
                    ))))
                }
            }
        }
        Ok(Fibration::verify(total, base, resolved))
    }

    /// The product `F × B → B`. Points are labelled `(f,b)` and indexed
    /// `f * |B| + b`.
    pub fn trivial_product(fiber: &MetricSpace, base: &MetricSpace) -> Fibration {
        let (nf, nb) = (fiber.len(), base.len());
        let labels: Vec<String> = (0..nf)
            .flat_map(|f| (0..nb).map(move |b| (f, b)))
            .map(|(f, b)| format!("({},{})", fiber.label(f), base.label(b)))
            .collect();
        let rows = (0..nf * nb)
            .map(|p| {
                (0..nf * nb)
                    .map(|q| fiber.dist(p / nb, q / nb) + base.dist(p % nb, q % nb))
                    .collect()
            })
            .collect();
        let total = MetricSpace::from_matrix(labels, rows).expect("product labels are distinct");
        let projection: Vec<usize> = (0..nf * nb).map(|p| p % nb).collect();
        let lifts = (0..nf * nb)
            .flat_map(|p| (0..nb).map(move |b| (p / nb) * nb + b))
            .collect();
        let mut fibers = vec![Vec::new(); nb];
        for (x, &b) in projection.iter().enumerate() {
            fibers[b].push(x);
        }
        Fibration {
            total,
            base: base.clone(),
            projection,
            lifts,
            fibers,
        }
    }

    pub fn total(&self) -> &MetricSpace {
        &self.total
    }

    pub fn base(&self) -> &MetricSpace {
        &self.base
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    #[inline]
    pub fn project(&self, x: usize) -> usize {
        self.projection[x]
    }

    /// `x^b`, the unique point of `π⁻¹(b)` realizing `d(πx, b)`.
    pub fn lift(&self, x: usize, b: usize) -> Result<usize> {
        if x >= self.total.len() {
            return Err(Error::UnknownPoint(format!("total-space index {x}")));
        }
        if b >= self.base.len() {
            return Err(Error::UnknownPoint(format!("base index {b}")));
        }
        Ok(self.lift_at(x, b))
    }

    #[inline]
    pub(crate) fn lift_at(&self, x: usize, b: usize) -> usize {
        self.lifts[x * self.base.len() + b]
    }

    pub fn lift_label(&self, x: &str, b: &str) -> Result<&str> {
        let x = self.total.index_of(x)?;
        let b = self.base.index_of(b)?;
        Ok(self.total.label(self.lift_at(x, b)))
    }

    /// Total-space points over `b`, ascending.
    pub fn fiber_points(&self, b: usize) -> &[usize] {
        &self.fibers[b]
    }

    pub fn fiber(&self, b: usize) -> FiberSpace {
        let points = self.fibers[b].clone();
        FiberSpace {
            basepoint: b,
            space: self.total.subspace(&points),
            points,
        }
    }

    /// For all `b, b'`, checks that `x ↦ x^{b'}` maps `π⁻¹(b)` isometrically
    /// onto `π⁻¹(b')`. Returns the first failing `(b, b')`.
    pub fn check_fiber_isometry(&self) -> Result<(), (usize, usize)> {
        let nb = self.base.len();
        for b in 0..nb {
            for b2 in 0..nb {
                let src = &self.fibers[b];
                let image: Vec<usize> = src.iter().map(|&x| self.lift_at(x, b2)).collect();
                let mut sorted = image.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted != self.fibers[b2] {
                    return Err((b, b2));
                }
                for (i, &x) in src.iter().enumerate() {
                    for (j, &y) in src.iter().enumerate() {
                        if self.total.dist(x, y) != self.total.dist(image[i], image[j]) {
                            return Err((b, b2));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
