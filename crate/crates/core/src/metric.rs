//! Finite metric spaces with exact rational distances.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Sub};
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact nonnegative rational length.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Length(Rational64);

impl Length {
    pub fn zero() -> Self {
        Length(Rational64::zero())
    }

    pub fn integer(n: i64) -> Self {
        Length(Rational64::from_integer(n))
    }

    /// `numer / denom`, reduced. Fails on a zero denominator.
    pub fn ratio(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidLength(format!("{numer}/{denom}")));
        }
        Ok(Length(Rational64::new(numer, denom)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn as_rational(&self) -> Rational64 {
        self.0
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<i64> {
        self.0.is_integer().then(|| self.0.to_integer())
    }

    /// `k * self`.
    pub fn times(&self, k: usize) -> Length {
        Length(self.0 * Rational64::from_integer(k as i64))
    }

    /// Largest `k` with `k * step <= self`. `step` must be positive.
    pub fn floor_div(&self, step: Length) -> usize {
        (self.0 / step.0).floor().to_integer().to_usize().unwrap_or(0)
    }
}

impl Add for Length {
    type Output = Length;
    fn add(self, rhs: Length) -> Length {
        Length(self.0 + rhs.0)
    }
}

impl AddAssign for Length {
    fn add_assign(&mut self, rhs: Length) {
        self.0 += rhs.0;
    }
}

impl Sub for Length {
    type Output = Length;
    fn sub(self, rhs: Length) -> Length {
        Length(self.0 - rhs.0)
    }
}

impl Sum for Length {
    fn sum<I: Iterator<Item = Length>>(iter: I) -> Length {
        iter.fold(Length::zero(), |a, b| a + b)
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Length {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidLength(s.to_string());
        let t = s.trim();
        match t.split_once('/') {
            Some((p, q)) => {
                let p: i64 = p.trim().parse().map_err(|_| bad())?;
                let q: i64 = q.trim().parse().map_err(|_| bad())?;
                Length::ratio(p, q)
            }
            None => t.parse::<i64>().map(Length::integer).map_err(|_| bad()),
        }
    }
}

impl From<i64> for Length {
    fn from(n: i64) -> Self {
        Length::integer(n)
    }
}

/// First violated metric axiom found by [`MetricSpace::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricViolation {
    Symmetry { x: usize, y: usize },
    Identity { x: usize },
    Positivity { x: usize, y: usize },
    Triangle { x: usize, y: usize, z: usize },
}

impl MetricViolation {
    pub fn describe(&self, space: &MetricSpace) -> String {
        let l = |i: usize| space.label(i);
        match *self {
            MetricViolation::Symmetry { x, y } => format!(
                "symmetry violated at ({}, {}): {} != {}",
                l(x),
                l(y),
                space.dist(x, y),
                space.dist(y, x)
            ),
            MetricViolation::Identity { x } => {
                format!("identity violated at {}: d = {}", l(x), space.dist(x, x))
            }
            MetricViolation::Positivity { x, y } => format!(
                "positivity violated at ({}, {}): d = {}",
                l(x),
                l(y),
                space.dist(x, y)
            ),
            MetricViolation::Triangle { x, y, z } => format!(
                "triangle inequality violated at ({}, {}, {}): d(x,z) = {} > {} + {}",
                l(x),
                l(y),
                l(z),
                space.dist(x, z),
                space.dist(x, y),
                space.dist(y, z)
            ),
        }
    }
}

/// A finite set of labelled points with an exact distance table.
///
/// Constructors only check the shape of the table; call [`MetricSpace::validate`]
/// (or use [`MetricSpace::checked`]) before relying on the metric axioms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricSpace {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    dist: Vec<Length>,
}

impl MetricSpace {
    pub fn from_matrix(labels: Vec<String>, rows: Vec<Vec<Length>>) -> Result<Self> {
        let n = labels.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Shape(format!(
                "{} labels, {} rows",
                n,
                rows.len()
            )));
        }
        let index = index_labels(&labels)?;
        Ok(MetricSpace {
            labels,
            index,
            dist: rows.into_iter().flatten().collect(),
        })
    }

    /// Unweighted shortest-path metric of a connected simple graph whose
    /// vertices are labelled by their indices.
    pub fn from_graph(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let labels = (0..vertex_count).map(|i| i.to_string()).collect();
        Self::from_labeled_graph(labels, edges)
    }

    pub fn from_labeled_graph(labels: Vec<String>, edges: &[(usize, usize)]) -> Result<Self> {
        let n = labels.len();
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            for v in [a, b] {
                if v >= n {
                    return Err(Error::VertexOutOfRange {
                        vertex: v,
                        count: n,
                    });
                }
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut dist = vec![Length::zero(); n * n];
        for s in 0..n {
            let hops = bfs(&adj, s);
            for (t, h) in hops.into_iter().enumerate() {
                match h {
                    Some(h) => dist[s * n + t] = Length::integer(h as i64),
                    None => {
                        return Err(Error::Disconnected {
                            from: labels[s].clone(),
                            to: labels[t].clone(),
                        })
                    }
                }
            }
        }
        let index = index_labels(&labels)?;
        Ok(MetricSpace { labels, index, dist })
    }

    /// Parses then validates the metric axioms.
    pub fn checked(self) -> Result<Self> {
        match self.validate() {
            Ok(()) => Ok(self),
            Err(v) => Err(Error::NotMetric(v.describe(&self))),
        }
    }

    /// The path graph `I_n` on vertices `1..=n`.
    pub fn path(n: usize) -> Self {
        let labels = (1..=n).map(|i| i.to_string()).collect();
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_labeled_graph(labels, &edges).expect("path graph is connected")
    }

    /// The complete graph `K_n` on vertices `1..=n`.
    pub fn complete(n: usize) -> Self {
        let labels = (1..=n).map(|i| i.to_string()).collect();
        let edges: Vec<_> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        Self::from_labeled_graph(labels, &edges).expect("complete graph is connected")
    }

    /// The cycle graph `C_n` on vertices `1..=n`, `n >= 3`.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least three vertices");
        let labels = (1..=n).map(|i| i.to_string()).collect();
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_labeled_graph(labels, &edges).expect("cycle graph is connected")
    }

    /// The one-point space.
    pub fn point() -> Self {
        Self::path(1)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownPoint(label.to_string()))
    }

    #[inline]
    pub fn dist(&self, x: usize, y: usize) -> Length {
        self.dist[x * self.labels.len() + y]
    }

    /// `x ≺ y ≺ z`: `d(x,z) = d(x,y) + d(y,z)`.
    #[inline]
    pub fn is_between(&self, x: usize, y: usize, z: usize) -> bool {
        self.dist(x, z) == self.dist(x, y) + self.dist(y, z)
    }

    /// Checks symmetry, identity, positivity and the triangle inequality, in
    /// that order, and returns the first violation.
    pub fn validate(&self) -> Result<(), MetricViolation> {
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                if self.dist(x, y) != self.dist(y, x) {
                    return Err(MetricViolation::Symmetry { x, y });
                }
            }
        }
        for x in 0..n {
            if !self.dist(x, x).is_zero() {
                return Err(MetricViolation::Identity { x });
            }
        }
        for x in 0..n {
            for y in 0..n {
                if x != y && (self.dist(x, y).is_zero() || self.dist(x, y).is_negative()) {
                    return Err(MetricViolation::Positivity { x, y });
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if self.dist(x, z) > self.dist(x, y) + self.dist(y, z) {
                        return Err(MetricViolation::Triangle { x, y, z });
                    }
                }
            }
        }
        Ok(())
    }

    /// Smallest distance between distinct points, if there are two points.
    pub fn min_positive_distance(&self) -> Option<Length> {
        let n = self.len();
        (0..n)
            .flat_map(|x| (0..n).filter(move |&y| y != x).map(move |y| (x, y)))
            .map(|(x, y)| self.dist(x, y))
            .min()
    }

    /// Whether every distance is an integer.
    pub fn is_integral(&self) -> bool {
        self.dist.iter().all(|d| d.to_integer().is_some())
    }

    /// The induced metric on `points`, keeping their labels.
    pub fn subspace(&self, points: &[usize]) -> MetricSpace {
        let labels: Vec<String> = points.iter().map(|&p| self.labels[p].clone()).collect();
        let dist = points
            .iter()
            .flat_map(|&x| points.iter().map(move |&y| (x, y)))
            .map(|(x, y)| self.dist(x, y))
            .collect();
        let index = index_labels(&labels).expect("labels of a space are distinct");
        MetricSpace { labels, index, dist }
    }

    /// All lengths `ℓ <= max` for which some tuple of consecutive distinct
    /// points has total length `ℓ`, ascending. Always contains zero for a
    /// nonempty space.
    pub fn achievable_lengths(&self, max: Length) -> Vec<Length> {
        let n = self.len();
        // reach[x]: lengths of tuples ending at x
        let mut reach: Vec<BTreeSet<Length>> = vec![BTreeSet::from([Length::zero()]); n];
        let mut queue: VecDeque<(usize, Length)> =
            (0..n).map(|x| (x, Length::zero())).collect();
        while let Some((x, l)) = queue.pop_front() {
            for y in 0..n {
                if y == x {
                    continue;
                }
                let next = l + self.dist(x, y);
                if next <= max && reach[y].insert(next) {
                    queue.push_back((y, next));
                }
            }
        }
        let all: BTreeSet<Length> = reach.into_iter().flatten().collect();
        if n == 0 {
            return Vec::new();
        }
        all.into_iter().collect()
    }
}

fn index_labels(labels: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(index)
}

fn bfs(adj: &[Vec<usize>], source: usize) -> Vec<Option<usize>> {
    let mut hops = vec![None; adj.len()];
    hops[source] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        let h = hops[v].unwrap();
        for &w in &adj[v] {
            if hops[w].is_none() {
                hops[w] = Some(h + 1);
                queue.push_back(w);
            }
        }
    }
    hops
}
