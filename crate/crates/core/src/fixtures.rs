//! Built-in example fibrations.

use crate::fibration::Fibration;
use crate::metric::MetricSpace;

/// Names accepted by [`by_name`].
pub const NAMES: &[&str] = &["paper-E1", "paper-E2", "product-I2-I3", "product-I2-K3"];

/// Three nested squares `(I2 × I2) × I3`, projected onto the square `C4`.
///
/// Points 1–4 form the inner square, 5–8 the middle one and 9–12 the outer
/// one, listed counter-clockwise from the south-west corner. Each corner
/// column (e.g. 1–5–9) is a fiber isometric to `I3`.
pub fn paper_e1() -> Fibration {
    let labels: Vec<String> = (1..=12).map(|i| i.to_string()).collect();
    let mut edges = Vec::new();
    for layer in 0..3 {
        let o = 4 * layer;
        for k in 0..4 {
            edges.push((o + k, o + (k + 1) % 4));
        }
    }
    for k in 0..4 {
        edges.push((k, 4 + k));
        edges.push((4 + k, 8 + k));
    }
    let total = MetricSpace::from_labeled_graph(labels, &edges).expect("E1 is connected");
    let base = MetricSpace::from_labeled_graph(
        ["SW", "SE", "NE", "NW"].iter().map(|s| s.to_string()).collect(),
        &[(0, 1), (1, 2), (2, 3), (3, 0)],
    )
    .expect("C4 is connected");
    let projection = (0..12).map(|x| x % 4).collect();
    Fibration::verify(total, base, projection).expect("E1 is a metric fibration")
}

/// The edge list of the six-point twisted prism over `K3`.
pub const E2_EDGES: [(usize, usize); 9] = [
    (2, 1), // c-b
    (2, 0), // c-a
    (1, 3), // b-d
    (0, 3), // a-d
    (2, 5), // c-f
    (1, 4), // b-e
    (4, 0), // e-a
    (5, 3), // f-d
    (5, 4), // f-e
];

/// A non-trivial fibration over `K3` with fiber `I2`: points `a..f`, fibers
/// `A = {a,d}`, `B = {b,e}`, `C = {c,f}`.
pub fn paper_e2() -> Fibration {
    let total = e2_space(&E2_EDGES);
    Fibration::verify(total, k3_abc(), e2_projection()).expect("E2 is a metric fibration")
}

pub(crate) fn e2_space(edges: &[(usize, usize)]) -> MetricSpace {
    let labels = ["a", "b", "c", "d", "e", "f"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    MetricSpace::from_labeled_graph(labels, edges).expect("E2 is connected")
}

pub(crate) fn k3_abc() -> MetricSpace {
    MetricSpace::from_labeled_graph(
        ["A", "B", "C"].iter().map(|s| s.to_string()).collect(),
        &[(0, 1), (1, 2), (0, 2)],
    )
    .expect("K3 is connected")
}

pub(crate) fn e2_projection() -> Vec<usize> {
    vec![0, 1, 2, 0, 1, 2]
}

/// Looks up a built-in fibration by name.
pub fn by_name(name: &str) -> Option<Fibration> {
    match name {
        "paper-E1" => Some(paper_e1()),
        "paper-E2" => Some(paper_e2()),
        "product-I2-I3" => Some(Fibration::trivial_product(
            &MetricSpace::path(2),
            &MetricSpace::path(3),
        )),
        "product-I2-K3" => Some(Fibration::trivial_product(
            &MetricSpace::path(2),
            &MetricSpace::complete(3),
        )),
        _ => None,
    }
}

/// Looks up a built-in metric space: the total space of a named fibration, or
/// one of `I<n>`, `K<n>`, `C<n>` (path, complete and cycle graphs).
pub fn space_by_name(name: &str) -> Option<MetricSpace> {
    if let Some(f) = by_name(name) {
        return Some(f.total().clone());
    }
    let (kind, n) = name.split_at(name.char_indices().nth(1)?.0);
    let n: usize = n.parse().ok()?;
    match kind {
        "I" if n >= 1 => Some(MetricSpace::path(n)),
        "K" if n >= 1 => Some(MetricSpace::complete(n)),
        "C" if n >= 3 => Some(MetricSpace::cycle(n)),
        _ => None,
    }
}
