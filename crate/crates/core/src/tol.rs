//! Floating-point slack convention for real inequalities.
//!
//! `lhs >= rhs` holds iff `lhs >= rhs - tol * max(1, |lhs|, |rhs|)`.

use serde::{Deserialize, Serialize};

pub const DEFAULT_TOL: f64 = 1e-9;

pub fn scale(a: f64, b: f64) -> f64 {
    1f64.max(a.abs()).max(b.abs())
}

pub fn at_least(lhs: f64, rhs: f64, tol: f64) -> bool {
    lhs >= rhs - tol * scale(lhs, rhs)
}

pub fn at_most(lhs: f64, rhs: f64, tol: f64) -> bool {
    at_least(rhs, lhs, tol)
}

/// Equality in the same relative sense as [`at_least`].
pub fn approx_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * scale(a, b)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
}

/// One evaluated inequality `lhs <relation> rhs`.
///
/// `slack` is oriented so that a non-negative value means the inequality
/// holds exactly; `holds` applies the tolerance policy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

impl Check {
    pub fn le(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            relation: Relation::Le,
            lhs,
            rhs,
            slack: rhs - lhs,
            holds: at_most(lhs, rhs, tol),
        }
    }

    pub fn ge(name: impl Into<String>, lhs: f64, rhs: f64, tol: f64) -> Self {
        Check {
            name: name.into(),
            relation: Relation::Ge,
            lhs,
            rhs,
            slack: lhs - rhs,
            holds: at_least(lhs, rhs, tol),
        }
    }
}
