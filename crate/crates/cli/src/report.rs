//! Structured reports. Each serializes with a `schema` field naming the
//! command and version, and renders as a plain-text table.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

pub fn schema(command: &str) -> String {
    format!("magfib.{command}/{SCHEMA_VERSION}")
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn group(betti: usize, torsion: &[String]) -> String {
    let mut parts = Vec::new();
    match betti {
        0 => {}
        1 => parts.push("Z".to_string()),
        b => parts.push(format!("Z^{b}")),
    }
    parts.extend(torsion.iter().map(|d| format!("Z/{d}")));
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub schema: String,
    pub input: String,
    pub points: usize,
    pub integral: bool,
    pub valid: bool,
    pub violation: Option<String>,
}

impl ValidateReport {
    pub fn table(&self) -> String {
        match &self.violation {
            None => format!(
                "{}: metric axioms hold ({} points, {} distances)\n",
                self.input,
                self.points,
                if self.integral { "integer" } else { "rational" }
            ),
            Some(v) => format!("{}: {v}\n", self.input),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MhRow {
    pub n: usize,
    pub rank: usize,
    pub betti: usize,
    pub torsion: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MhLevel {
    pub ell: String,
    pub rows: Vec<MhRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MhReport {
    pub schema: String,
    pub input: String,
    pub lmax: String,
    pub nmax: Option<usize>,
    pub levels: Vec<MhLevel>,
}

impl MhReport {
    pub fn table(&self) -> String {
        let mut s = format!("magnitude homology of {} (lengths up to {})\n", self.input, self.lmax);
        let _ = writeln!(s, "{:>6} {:>3} {:>8} {:>6}  group", "l", "n", "rank C", "betti");
        for level in &self.levels {
            for r in &level.rows {
                let _ = writeln!(
                    s,
                    "{:>6} {:>3} {:>8} {:>6}  {}",
                    level.ell,
                    r.n,
                    r.rank,
                    r.betti,
                    group(r.betti, &r.torsion)
                );
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberEntry {
    pub base: String,
    pub points: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibcheckReport {
    pub schema: String,
    pub input: String,
    pub total_points: usize,
    pub base_points: usize,
    pub verified: bool,
    pub failure: Option<String>,
    pub fibers: Vec<FiberEntry>,
    /// `lifts[x][b]`: label of the lift of point `x` to the fiber over `b`.
    pub lifts: Vec<Vec<String>>,
    pub fiber_isometry: bool,
}

impl FibcheckReport {
    pub fn passed(&self) -> bool {
        self.verified && self.fiber_isometry
    }

    pub fn table(&self) -> String {
        let mut s = format!(
            "fibration {}: {} points over {} base points\n",
            self.input, self.total_points, self.base_points
        );
        if let Some(f) = &self.failure {
            let _ = writeln!(s, "  {f}");
        }
        for fb in &self.fibers {
            let _ = writeln!(s, "  fiber over {}: {{{}}}", fb.base, fb.points.join(", "));
        }
        if self.verified {
            let _ = writeln!(
                s,
                "  fiber isometry: {}",
                if self.fiber_isometry { "holds" } else { "fails" }
            );
        }
        let _ = writeln!(s, "{}", verdict(self.passed()));
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KunnethRow {
    pub n: usize,
    pub betti_total: usize,
    pub betti_quotient: usize,
    pub betti_rhs: usize,
    pub torsion_total: Vec<String>,
    pub torsion_quotient: Vec<String>,
    pub torsion_rhs: Vec<String>,
    pub d_betti: usize,
    pub d_torsion: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KunnethLevel {
    pub ell: String,
    pub passed: bool,
    pub subcomplex_violation: Option<(String, String)>,
    pub phi_psi_error: Option<String>,
    pub projection_quasi_iso: Option<bool>,
    pub rows: Vec<KunnethRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KunnethReport {
    pub schema: String,
    pub input: String,
    pub basepoint: String,
    pub lmax: String,
    pub nmax: Option<usize>,
    pub passed: bool,
    pub levels: Vec<KunnethLevel>,
}

impl KunnethReport {
    pub fn table(&self) -> String {
        let mut s = format!(
            "Künneth check for {} with fiber over {} (lengths up to {})\n",
            self.input, self.basepoint, self.lmax
        );
        for l in &self.levels {
            let _ = writeln!(
                s,
                "l = {}: {}  D closed: {}  phi/psi: {}  E -> E/D quasi-iso: {}",
                l.ell,
                verdict(l.passed),
                match &l.subcomplex_violation {
                    None => "yes".to_string(),
                    Some((a, f)) => format!("no, {a} has face {f}"),
                },
                l.phi_psi_error.as_deref().unwrap_or("inverse chain maps"),
                match l.projection_quasi_iso {
                    Some(true) => "yes",
                    Some(false) => "no",
                    None => "n/a",
                }
            );
            let _ = writeln!(s, "  {:>3}  {:<12} {:<12} {:<12} {:<6}", "n", "H(E)", "H(E/D)", "H(F x B)", "H(D)");
            for r in &l.rows {
                let _ = writeln!(
                    s,
                    "  {:>3}  {:<12} {:<12} {:<12} {:<6}",
                    r.n,
                    group(r.betti_total, &r.torsion_total),
                    group(r.betti_quotient, &r.torsion_quotient),
                    group(r.betti_rhs, &r.torsion_rhs),
                    group(r.d_betti, &r.d_torsion)
                );
            }
        }
        let _ = writeln!(s, "{}", verdict(self.passed));
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorseLevel {
    pub ell: String,
    pub passed: bool,
    pub error: Option<String>,
    /// D-complex rank per degree.
    pub d_ranks: Vec<usize>,
    pub matched_pairs: usize,
    /// Critical cells per reported degree.
    pub critical: Vec<usize>,
    pub d_homology_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorseReport {
    pub schema: String,
    pub input: String,
    pub lmax: String,
    pub nmax: Option<usize>,
    pub passed: bool,
    pub levels: Vec<MorseLevel>,
}

impl MorseReport {
    pub fn table(&self) -> String {
        let mut s = format!("hv-matching on D for {} (lengths up to {})\n", self.input, self.lmax);
        let _ = writeln!(s, "{:>6}  {:<6} {:>7}  {:<20} {:<14} H(D)", "l", "", "pairs", "rank D", "critical");
        for l in &self.levels {
            let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
            let _ = writeln!(
                s,
                "{:>6}  {:<6} {:>7}  {:<20} {:<14} {}",
                l.ell,
                verdict(l.passed),
                l.matched_pairs,
                join(&l.d_ranks),
                join(&l.critical),
                if l.d_homology_zero { "0" } else { "nonzero" }
            );
            if let Some(e) = &l.error {
                let _ = writeln!(s, "        {e}");
            }
        }
        let _ = writeln!(s, "{}", verdict(self.passed));
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaisoDegree {
    pub n: usize,
    pub total_cells: usize,
    pub product_cells: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaisoLevel {
    pub ell: String,
    pub passed: bool,
    pub failure: Option<String>,
    pub degrees: Vec<DeltaisoDegree>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaisoReport {
    pub schema: String,
    pub input: String,
    pub basepoint: String,
    pub lmax: String,
    pub nmax: Option<usize>,
    pub passed: bool,
    pub levels: Vec<DeltaisoLevel>,
}

impl DeltaisoReport {
    pub fn table(&self) -> String {
        let mut s = format!(
            "quotient Δ-sets of {} against F x B, fiber over {} (lengths up to {})\n",
            self.input, self.basepoint, self.lmax
        );
        for l in &self.levels {
            let counts: Vec<String> = l
                .degrees
                .iter()
                .map(|d| format!("{}:{}/{}", d.n, d.total_cells, d.product_cells))
                .collect();
            let _ = writeln!(s, "l = {}: {}  cells n:E/FxB {}", l.ell, verdict(l.passed), counts.join(" "));
            if let Some(f) = &l.failure {
                let _ = writeln!(s, "  {f}");
            }
        }
        let _ = writeln!(s, "{}", verdict(self.passed));
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CauPair {
    pub a: String,
    pub b: String,
    /// Relative homology groups by degree.
    pub relative: Vec<String>,
    /// Magnitude homology groups between the same endpoints, by degree.
    pub magnitude: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CauLevel {
    pub ell: i64,
    pub relative_betti: Vec<usize>,
    pub magnitude_betti: Vec<usize>,
    pub fitting_shifts: Vec<i64>,
    pub pairs: Vec<CauPair>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CauReport {
    pub schema: String,
    pub input: String,
    pub lmax: String,
    pub nmax: Option<usize>,
    /// Shifts fitting every length.
    pub common_shifts: Vec<i64>,
    pub passed: bool,
    pub levels: Vec<CauLevel>,
}

impl CauReport {
    pub fn table(&self) -> String {
        let mut s = format!(
            "causal order complexes of {} (integer lengths up to {})\n",
            self.input, self.lmax
        );
        let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        for l in &self.levels {
            let _ = writeln!(
                s,
                "l = {}: summed relative betti [{}], magnitude betti [{}], fitting shifts {:?}",
                l.ell,
                join(&l.relative_betti),
                join(&l.magnitude_betti),
                l.fitting_shifts
            );
            for p in &l.pairs {
                if p.relative.iter().chain(&p.magnitude).any(|g| g != "0") {
                    let _ = writeln!(
                        s,
                        "  ({}, {}): relative [{}]  magnitude [{}]",
                        p.a,
                        p.b,
                        p.relative.join(", "),
                        p.magnitude.join(", ")
                    );
                }
            }
        }
        let _ = writeln!(s, "common shifts {:?}", self.common_shifts);
        let _ = writeln!(s, "{}", verdict(self.passed));
        s
    }
}
