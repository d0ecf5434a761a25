//! Horizontal / vertical / tilted classification of steps in the total space
//! of a fibration, and the derived notions on tuples: T-words, membership in
//! the D-subcomplex, the gap-filling map `a ↦ a^hv` and the weight `|a|`.

use std::fmt;

use crate::error::{Error, Result};
use crate::fibration::Fibration;

/// Classification of an ordered pair of distinct points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    /// `d(x, y) = d(πx, πy)`
    Horizontal,
    /// `πx = πy`
    Vertical,
    /// `0 < d(πx, πy) < d(x, y)`
    Tilted,
}

impl Step {
    pub fn letter(self) -> char {
        match self {
            Step::Horizontal => 'h',
            Step::Vertical => 'v',
            Step::Tilted => 't',
        }
    }
}

/// Concatenated step letters of a tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct TWord(pub Vec<Step>);

impl TWord {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn steps(&self) -> &[Step] {
        &self.0
    }

    /// Length `p` of the prefix `v^m h^k` (with `p = m + k`) and `k`.
    fn vh_prefix(&self) -> (usize, usize) {
        let w = &self.0;
        let m = w.iter().take_while(|&&s| s == Step::Vertical).count();
        let k = w[m..]
            .iter()
            .take_while(|&&s| s == Step::Horizontal)
            .count();
        (m + k, k)
    }

    pub fn membership(&self) -> DMembership {
        let (p, _) = self.vh_prefix();
        match self.0.get(p) {
            None => DMembership::Outside,
            Some(Step::Tilted) => DMembership::TiltedFirst,
            // the v-prefix is maximal, so a v here follows at least one h
            Some(Step::Vertical) => DMembership::HvFirst,
            Some(Step::Horizontal) => unreachable!("h-run is maximal"),
        }
    }

    /// Position of the first tilted step of a `v^m h^k t ⋯` word.
    pub fn first_tilt(&self) -> Option<usize> {
        let (p, _) = self.vh_prefix();
        (self.0.get(p) == Some(&Step::Tilted)).then_some(p)
    }

    /// Position `j` of the vertical step in a `v^m h^{k+1} v ⋯` word.
    pub fn hv_position(&self) -> Option<usize> {
        let (p, k) = self.vh_prefix();
        (k > 0 && self.0.get(p) == Some(&Step::Vertical)).then_some(p)
    }

    /// Number of leading vertical steps, when the word is `v^m h^k`.
    pub fn vertical_prefix(&self) -> Option<usize> {
        let (p, k) = self.vh_prefix();
        (p == self.0.len()).then_some(p - k)
    }

    /// Sum of the positions carrying a vertical step.
    pub fn weight(&self) -> usize {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &s)| s == Step::Vertical)
            .map(|(i, _)| i)
            .sum()
    }
}

impl fmt::Display for TWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            write!(f, "{}", s.letter())?;
        }
        Ok(())
    }
}

/// Whether a tuple generates the D-subcomplex, and by which pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DMembership {
    /// Word of shape `v^m h^k`; survives in the quotient.
    Outside,
    /// `v^m h^k t ⋯`
    TiltedFirst,
    /// `v^m h^{k+1} v ⋯`
    HvFirst,
}

pub fn d_membership(word: &TWord) -> DMembership {
    word.membership()
}

/// Letter of the pair `(x, y)`, `x ≠ y`.
#[inline]
pub fn step(fib: &Fibration, x: usize, y: usize) -> Step {
    let (px, py) = (fib.project(x), fib.project(y));
    if px == py {
        Step::Vertical
    } else if fib.total().dist(x, y) == fib.base().dist(px, py) {
        Step::Horizontal
    } else {
        Step::Tilted
    }
}

pub fn t_word(fib: &Fibration, tuple: &[usize]) -> Result<TWord> {
    let mut word = Vec::with_capacity(tuple.len().saturating_sub(1));
    for (i, w) in tuple.windows(2).enumerate() {
        if w[0] == w[1] {
            return Err(Error::RepeatedPoint {
                point: w[0],
                position: i,
            });
        }
        word.push(step(fib, w[0], w[1]));
    }
    Ok(TWord(word))
}

/// `a^hv`: inserts `x_s^{π x_{s+1}}` after the first tilted step position `s`.
pub fn fill_hv(fib: &Fibration, tuple: &[usize]) -> Result<Vec<usize>> {
    let word = t_word(fib, tuple)?;
    let s = word.first_tilt().ok_or(Error::NotTiltedFirst)?;
    let y = fib.lift_at(tuple[s], fib.project(tuple[s + 1]));
    let mut out = Vec::with_capacity(tuple.len() + 1);
    out.extend_from_slice(&tuple[..=s]);
    out.push(y);
    out.extend_from_slice(&tuple[s + 1..]);
    debug_assert!(fib.total().is_between(tuple[s], y, tuple[s + 1]));
    Ok(out)
}

/// Inverse of [`fill_hv`] on hv-first tuples: deletes the point between the
/// filled horizontal and vertical steps.
pub fn unfill_hv(fib: &Fibration, tuple: &[usize]) -> Result<Vec<usize>> {
    let word = t_word(fib, tuple)?;
    let j = word.hv_position().ok_or(Error::NotTiltedFirst)?;
    let mut out = tuple.to_vec();
    out.remove(j);
    Ok(out)
}

pub fn weight(fib: &Fibration, tuple: &[usize]) -> Result<usize> {
    Ok(t_word(fib, tuple)?.weight())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn idx(fib: &Fibration, labels: &[&str]) -> Vec<usize> {
        labels
            .iter()
            .map(|l| fib.total().index_of(l).unwrap())
            .collect()
    }

    fn word(fib: &Fibration, labels: &[&str]) -> String {
        t_word(fib, &idx(fib, labels)).unwrap().to_string()
    }

    fn parse(w: &str) -> TWord {
        TWord(
            w.chars()
                .map(|c| match c {
                    'h' => Step::Horizontal,
                    'v' => Step::Vertical,
                    't' => Step::Tilted,
                    _ => panic!("bad letter"),
                })
                .collect(),
        )
    }

    #[test]
    fn example_words_e1() {
        let e1 = fixtures::paper_e1();
        assert_eq!(word(&e1, &["1", "2", "6"]), "hv");
        assert_eq!(word(&e1, &["1", "5", "6"]), "vh");
        assert_eq!(word(&e1, &["1", "6", "11"]), "tt");
        assert_eq!(word(&e1, &["1", "6", "7"]), "th");
        assert_eq!(word(&e1, &["1", "2", "3"]), "hh");
        assert_eq!(word(&e1, &["1", "6"]), "t");
    }

    #[test]
    fn example_words_e2() {
        let e2 = fixtures::paper_e2();
        assert_eq!(word(&e2, &["a", "e", "f"]), "hh");
        assert_eq!(word(&e2, &["a", "f"]), "t");
    }

    #[test]
    fn repeated_point_rejected() {
        let e2 = fixtures::paper_e2();
        assert_eq!(
            t_word(&e2, &[0, 0]).unwrap_err(),
            Error::RepeatedPoint {
                point: 0,
                position: 0
            }
        );
    }

    #[test]
    fn membership_patterns() {
        assert_eq!(parse("th").membership(), DMembership::TiltedFirst);
        assert_eq!(parse("hv").membership(), DMembership::HvFirst);
        assert_eq!(parse("hh").membership(), DMembership::Outside);
        assert_eq!(parse("").membership(), DMembership::Outside);
        assert_eq!(parse("vvhht").membership(), DMembership::TiltedFirst);
        assert_eq!(parse("vhvt").membership(), DMembership::HvFirst);
        assert_eq!(parse("vvv").membership(), DMembership::Outside);
        assert_eq!(parse("vvh").vertical_prefix(), Some(2));
        assert_eq!(parse("hvh").vertical_prefix(), None);
    }

    #[test]
    fn fill_examples() {
        let e1 = fixtures::paper_e1();
        let f = fill_hv(&e1, &idx(&e1, &["1", "6"])).unwrap();
        assert_eq!(f, idx(&e1, &["1", "2", "6"]));
        let f = fill_hv(&e1, &idx(&e1, &["1", "6", "7"])).unwrap();
        assert_eq!(f, idx(&e1, &["1", "2", "6", "7"]));
        assert_eq!(t_word(&e1, &f).unwrap().to_string(), "hvh");
        assert_eq!(unfill_hv(&e1, &f).unwrap(), idx(&e1, &["1", "6", "7"]));

        let e2 = fixtures::paper_e2();
        let f = fill_hv(&e2, &idx(&e2, &["a", "f"])).unwrap();
        assert_eq!(f, idx(&e2, &["a", "c", "f"]));
        assert_eq!(
            fill_hv(&e2, &idx(&e2, &["a", "e", "f"])).unwrap_err(),
            Error::NotTiltedFirst
        );
    }

    #[test]
    fn weights() {
        let e1 = fixtures::paper_e1();
        assert_eq!(weight(&e1, &idx(&e1, &["1", "2", "6"])).unwrap(), 1);
        assert_eq!(weight(&e1, &idx(&e1, &["1", "5", "6"])).unwrap(), 0);
        assert_eq!(weight(&e1, &idx(&e1, &["1", "2", "3"])).unwrap(), 0);
        assert_eq!(parse("vhvv").weight(), 0 + 2 + 3);
    }
}
