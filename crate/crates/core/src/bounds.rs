//! Closed-form lower bounds on the independence number of a connected graph
//! with `n` vertices and `m` edges.
//!
//! All three share the shape `(s - sqrt(s^2 - c n^2)) / d`:
//!
//! | kind       | s          | c  | d |
//! |------------|------------|----|---|
//! | `harant`   | 2m + n + 1 | 4  | 2 |
//! | `claimed`  | 2m + n + 2 | 16 | 8 |
//! | `repaired` | 2m + n + 2 | 8  | 4 |
//!
//! `repaired` is derived in this crate: it is what the `claimed` derivation
//! yields once the sign of the `sum k_j` term in the edge count is
//! corrected. It is not a published bound.
//!
//! Values are reported as `f64`, but every validity decision goes through
//! [`bound_holds_exact`], which is pure integer arithmetic.

use std::fmt;

use num_rational::Ratio;
use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::min_greedy::MinTrace;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("bounds need at least one vertex")]
    EmptyGraph,
    #[error("n={n}, m={m} cannot come from a connected graph (m < n - 1)")]
    NotConnectedInput { n: u64, m: u64 },
    #[error("denominator {0} is not positive")]
    NonpositiveDenominator(i64),
    #[error("trace does not belong to this graph")]
    TraceMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    Harant,
    Claimed,
    Repaired,
}

impl BoundKind {
    pub const ALL: [BoundKind; 3] = [BoundKind::Harant, BoundKind::Claimed, BoundKind::Repaired];

    fn offset(self) -> i128 {
        match self {
            BoundKind::Harant => 1,
            BoundKind::Claimed | BoundKind::Repaired => 2,
        }
    }

    fn coefficient(self) -> i128 {
        match self {
            BoundKind::Harant => 4,
            BoundKind::Claimed => 16,
            BoundKind::Repaired => 8,
        }
    }

    fn divisor(self) -> i128 {
        match self {
            BoundKind::Harant => 2,
            BoundKind::Claimed => 8,
            BoundKind::Repaired => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Harant => "harant",
            BoundKind::Claimed => "claimed",
            BoundKind::Repaired => "repaired",
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RootStatus {
    Real,
    NotReal,
}

impl RootStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RootStatus::Real => "real",
            RootStatus::NotReal => "not_real",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Violated,
    NotReal,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
            Verdict::NotReal => "not_real",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundValue {
    pub kind: BoundKind,
    pub s: i128,
    pub discriminant: i128,
    pub status: RootStatus,
    /// Present iff `status` is `Real`.
    pub value: Option<f64>,
    /// Smallest integer not below the exact bound; present iff real.
    pub ceil_value: Option<i64>,
}

fn coefficients(kind: BoundKind, n: u64, m: u64) -> Result<(i128, i128), BoundError> {
    if n == 0 {
        return Err(BoundError::EmptyGraph);
    }
    if m + 1 < n {
        return Err(BoundError::NotConnectedInput { n, m });
    }
    let (n, m) = (n as i128, m as i128);
    let s = 2 * m + n + kind.offset();
    Ok((s, s * s - kind.coefficient() * n * n))
}

/// Exact test of `(s - sqrt(disc)) / d <= t` for a non-negative
/// discriminant: `s - d t <= 0`, or both sides non-negative and
/// `(s - d t)^2 <= disc`.
fn at_most(kind: BoundKind, s: i128, disc: i128, t: i128) -> bool {
    let gap = s - kind.divisor() * t;
    gap <= 0 || gap * gap <= disc
}

pub fn evaluate(kind: BoundKind, n: u64, m: u64) -> Result<BoundValue, BoundError> {
    let (s, disc) = coefficients(kind, n, m)?;
    if disc < 0 {
        return Ok(BoundValue {
            kind,
            s,
            discriminant: disc,
            status: RootStatus::NotReal,
            value: None,
            ceil_value: None,
        });
    }
    // Rationalized form c n^2 / (d (s + sqrt(disc))) avoids cancellation.
    let c_n2 = (kind.coefficient() * (n as i128) * (n as i128)) as f64;
    let value = c_n2 / (kind.divisor() as f64 * (s as f64 + (disc as f64).sqrt()));

    let mut ceil = value.ceil() as i128;
    while at_most(kind, s, disc, ceil - 1) {
        ceil -= 1;
    }
    while !at_most(kind, s, disc, ceil) {
        ceil += 1;
    }
    Ok(BoundValue {
        kind,
        s,
        discriminant: disc,
        status: RootStatus::Real,
        value: Some(value),
        ceil_value: Some(ceil as i64),
    })
}

pub fn harant_bound(n: u64, m: u64) -> Result<BoundValue, BoundError> {
    evaluate(BoundKind::Harant, n, m)
}

pub fn claimed_bound(n: u64, m: u64) -> Result<BoundValue, BoundError> {
    evaluate(BoundKind::Claimed, n, m)
}

pub fn repaired_bound(n: u64, m: u64) -> Result<BoundValue, BoundError> {
    evaluate(BoundKind::Repaired, n, m)
}

/// Decides `bound <= alpha` without floating point.
pub fn bound_holds_exact(kind: BoundKind, n: u64, m: u64, alpha: u64) -> Result<Verdict, BoundError> {
    let (s, disc) = coefficients(kind, n, m)?;
    if disc < 0 {
        return Ok(Verdict::NotReal);
    }
    Ok(if at_most(kind, s, disc, alpha as i128) {
        Verdict::Holds
    } else {
        Verdict::Violated
    })
}

/// `sum over all vertices i of (d_G(i) - delta_j(i))`, where `j(i)` is the
/// iteration that deleted `i` and `delta_j` is the minimum degree of the
/// remaining graph at that iteration (the chosen vertex's degree).
pub fn inequality1_sum(trace: &MinTrace, g: &Graph) -> Result<i64, BoundError> {
    if trace.n != g.n() || trace.m != g.m() {
        return Err(BoundError::TraceMismatch);
    }
    let mut delta_at = vec![None; g.n()];
    for it in &trace.iterations {
        for &v in &it.deleted_vertices {
            let slot = delta_at.get_mut(v).ok_or(BoundError::TraceMismatch)?;
            *slot = Some(it.chosen_degree as i64);
        }
    }
    (0..g.n())
        .map(|v| delta_at[v].map(|d| g.degree(v) as i64 - d).ok_or(BoundError::TraceMismatch))
        .sum()
}

/// `n^2 / (2m + n - sum)` with the sum from [`inequality1_sum`], exactly.
pub fn inequality1_rhs(trace: &MinTrace, g: &Graph) -> Result<Ratio<i64>, BoundError> {
    let sum = inequality1_sum(trace, g)?;
    let (n, m) = (g.n() as i64, g.m() as i64);
    let denominator = 2 * m + n - sum;
    if denominator <= 0 {
        return Err(BoundError::NonpositiveDenominator(denominator));
    }
    Ok(Ratio::new(n * n, denominator))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{gen_named, Named};
    use crate::min_greedy::{replay, run_min, TieBreak};

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-4
    }

    #[test]
    fn harant_values() {
        let k4 = harant_bound(4, 6).unwrap();
        assert_eq!((k4.s, k4.discriminant), (17, 225));
        assert_eq!(k4.value, Some(1.0));
        assert_eq!(k4.ceil_value, Some(1));
        let p4 = harant_bound(4, 3).unwrap();
        assert_eq!(p4.discriminant, 57);
        assert!(close(p4.value.unwrap(), 1.7251));
        assert_eq!(p4.ceil_value, Some(2));
        let k1 = harant_bound(1, 0).unwrap();
        assert_eq!((k1.s, k1.discriminant, k1.value), (2, 0, Some(1.0)));
    }

    #[test]
    fn claimed_values() {
        let p4 = claimed_bound(4, 3).unwrap();
        assert_eq!(p4.status, RootStatus::NotReal);
        assert_eq!(p4.discriminant, -112);
        assert_eq!((p4.value, p4.ceil_value), (None, None));
        let k4 = claimed_bound(4, 6).unwrap();
        assert_eq!(k4.discriminant, 68);
        assert!(close(k4.value.unwrap(), 1.2192));
        assert_eq!(k4.ceil_value, Some(2));
        let k33 = claimed_bound(6, 9).unwrap();
        assert_eq!((k33.discriminant, k33.value), (100, Some(2.0)));
    }

    #[test]
    fn repaired_values() {
        let p4 = repaired_bound(4, 3).unwrap();
        assert_eq!((p4.discriminant, p4.value), (16, Some(2.0)));
        let k4 = repaired_bound(4, 6).unwrap();
        assert_eq!((k4.discriminant, k4.value), (196, Some(1.0)));
        let c5 = repaired_bound(5, 5).unwrap();
        assert_eq!(c5.discriminant, 89);
        assert!(close(c5.value.unwrap(), 1.8915));
        assert_eq!(c5.ceil_value, Some(2));
    }

    #[test]
    fn input_errors() {
        assert_eq!(harant_bound(0, 0).unwrap_err(), BoundError::EmptyGraph);
        assert_eq!(
            claimed_bound(4, 2).unwrap_err(),
            BoundError::NotConnectedInput { n: 4, m: 2 }
        );
    }

    #[test]
    fn exact_predicate() {
        assert_eq!(bound_holds_exact(BoundKind::Claimed, 4, 6, 1), Ok(Verdict::Violated));
        assert_eq!(bound_holds_exact(BoundKind::Harant, 4, 6, 1), Ok(Verdict::Holds));
        assert_eq!(bound_holds_exact(BoundKind::Claimed, 4, 3, 2), Ok(Verdict::NotReal));
        assert_eq!(bound_holds_exact(BoundKind::Repaired, 4, 6, 1), Ok(Verdict::Holds));
        assert_eq!(bound_holds_exact(BoundKind::Repaired, 4, 6, 0), Ok(Verdict::Violated));
    }

    #[test]
    fn complete_graphs_are_tight() {
        // On K_n the discriminants are (n^2 - 1)^2 and (n^2 - 2)^2.
        for n in 1..=50u64 {
            let m = n * (n - 1) / 2;
            for kind in [BoundKind::Harant, BoundKind::Repaired] {
                let b = evaluate(kind, n, m).unwrap();
                if kind == BoundKind::Repaired && n == 1 {
                    // |1 - 2| = 1 gives (3 - 1) / 4.
                    assert_eq!(b.value, Some(0.5));
                } else {
                    assert_eq!(b.value, Some(1.0), "{kind} on K{n}");
                }
                assert_eq!(b.ceil_value, Some(1));
            }
        }
    }

    #[test]
    fn ceil_is_exact_at_integers() {
        // Perfect-square discriminants land exactly on integers.
        assert_eq!(claimed_bound(6, 9).unwrap().ceil_value, Some(2));
        assert_eq!(repaired_bound(4, 3).unwrap().ceil_value, Some(2));
    }

    #[test]
    fn inequality1_examples() {
        let p4 = gen_named(Named::Path(4)).unwrap();
        let t = run_min(&p4, TieBreak::LowestIndex);
        assert_eq!(inequality1_sum(&t, &p4), Ok(2));
        assert_eq!(inequality1_rhs(&t, &p4), Ok(Ratio::from_integer(2)));

        let k4 = gen_named(Named::Complete(4)).unwrap();
        let t = run_min(&k4, TieBreak::LowestIndex);
        assert_eq!(inequality1_sum(&t, &k4), Ok(0));
        assert_eq!(inequality1_rhs(&t, &k4), Ok(Ratio::from_integer(1)));

        let star = gen_named(Named::Star(4)).unwrap();
        let t = replay(&star, &[1, 2, 3, 4]).unwrap();
        assert_eq!(t.k(), 4);
        assert_eq!(inequality1_sum(&t, &star), Ok(6));
        assert_eq!(inequality1_rhs(&t, &star), Ok(Ratio::new(25, 7)));
    }

    #[test]
    fn inequality1_mismatch() {
        let p4 = gen_named(Named::Path(4)).unwrap();
        let t = run_min(&gen_named(Named::Path(5)).unwrap(), TieBreak::LowestIndex);
        assert_eq!(inequality1_rhs(&t, &p4), Err(BoundError::TraceMismatch));
    }
}
