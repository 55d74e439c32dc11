//! Averaged subset sequences and the inequalities derived from them.
//!
//! The central object is
//!
//! ```text
//! t_k = (1 / C(n,k)) Σ_{|T| = k} g(f(T) / k),   k = 1..n
//! ```
//!
//! whose monotonicity in `k` follows from the modularity class of `f` and the
//! shape of `g`:
//!
//! | f            | g                       | t_k        |
//! |--------------|-------------------------|------------|
//! | submodular   | increasing, convex      | decreasing |
//! | submodular   | decreasing, concave     | increasing |
//! | supermodular | increasing, concave     | increasing |
//! | supermodular | decreasing, convex      | decreasing |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::combin::{binom, binom_f64, hb, k_subsets};
use crate::exec::{Exec, CHUNK};
use crate::infomeasures::{
    build_cond_entropy_fn, build_entropic_fn, build_mi_fn, build_sum_entropy_fn, dist_entropy,
    sum_distributions, JointPmf,
};
use crate::setfn::{SetFunction, SubsetFamily};
use crate::tol::{self, Check};
use crate::{Error, Mask, Result};

/// Total correlation allowed for inputs that must be independent.
pub const INDEPENDENCE_THRESHOLD: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// A monotone scalar map `g` with known convexity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScalarTransform {
    Identity,
    /// `x^alpha` for `x >= 0`, `0` otherwise; `alpha >= 1`.
    ClippedPower {
        alpha: f64,
    },
    /// `2^{c x}`, `c != 0`.
    Exp2Scaled {
        c: f64,
    },
    /// `-2^{c x}`, `c != 0`; concave, decreasing when `c > 0`.
    NegExp2Scaled {
        c: f64,
    },
    /// `slope * x + intercept`, `slope != 0`.
    Affine {
        slope: f64,
        intercept: f64,
    },
}

impl ScalarTransform {
    pub fn clipped_power(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha < 1.0 {
            return Err(Error::domain(format!(
                "clipped power needs alpha >= 1, got {alpha}"
            )));
        }
        Ok(ScalarTransform::ClippedPower { alpha })
    }

    pub fn exp2_scaled(c: f64) -> Result<Self> {
        nonzero(c, "exponent scale")?;
        Ok(ScalarTransform::Exp2Scaled { c })
    }

    pub fn neg_exp2_scaled(c: f64) -> Result<Self> {
        nonzero(c, "exponent scale")?;
        Ok(ScalarTransform::NegExp2Scaled { c })
    }

    pub fn affine(slope: f64, intercept: f64) -> Result<Self> {
        nonzero(slope, "slope")?;
        if !intercept.is_finite() {
            return Err(Error::domain("intercept must be finite"));
        }
        Ok(ScalarTransform::Affine { slope, intercept })
    }

    pub fn apply(&self, x: f64) -> f64 {
        match *self {
            ScalarTransform::Identity => x,
            ScalarTransform::ClippedPower { alpha } => {
                if x <= 0.0 {
                    0.0
                } else {
                    x.powf(alpha)
                }
            }
            ScalarTransform::Exp2Scaled { c } => (c * x).exp2(),
            ScalarTransform::NegExp2Scaled { c } => -(c * x).exp2(),
            ScalarTransform::Affine { slope, intercept } => slope * x + intercept,
        }
    }

    pub fn direction(&self) -> Direction {
        let increasing = match *self {
            ScalarTransform::Identity | ScalarTransform::ClippedPower { .. } => true,
            ScalarTransform::Exp2Scaled { c } => c > 0.0,
            ScalarTransform::NegExp2Scaled { c } => c < 0.0,
            ScalarTransform::Affine { slope, .. } => slope > 0.0,
        };
        if increasing {
            Direction::Increasing
        } else {
            Direction::Decreasing
        }
    }

    pub fn is_convex(&self) -> bool {
        !matches!(self, ScalarTransform::NegExp2Scaled { .. })
    }

    pub fn is_concave(&self) -> bool {
        matches!(
            self,
            ScalarTransform::Identity
                | ScalarTransform::Affine { .. }
                | ScalarTransform::NegExp2Scaled { .. }
        )
    }
}

fn nonzero(v: f64, what: &str) -> Result<()> {
    if !v.is_finite() || v == 0.0 {
        return Err(Error::domain(format!(
            "{what} must be finite and non-zero, got {v}"
        )));
    }
    Ok(())
}

impl fmt::Display for ScalarTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ScalarTransform::Identity => write!(f, "identity"),
            ScalarTransform::ClippedPower { alpha } => write!(f, "power:{alpha}"),
            ScalarTransform::Exp2Scaled { c } => write!(f, "exp2:{c}"),
            ScalarTransform::NegExp2Scaled { c } => write!(f, "negexp2:{c}"),
            ScalarTransform::Affine { slope, intercept } => write!(f, "affine:{slope},{intercept}"),
        }
    }
}

/// Parses `identity`, `power:<alpha>`, `exp2:<c>`, `negexp2:<c>` or
/// `affine:<slope>,<intercept>`.
impl FromStr for ScalarTransform {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::domain(format!("bad number {t:?} in transform {s:?}")))
        };
        match kind.trim() {
            "identity" => Ok(ScalarTransform::Identity),
            "power" => Self::clipped_power(num(arg)?),
            "exp2" => Self::exp2_scaled(num(arg)?),
            "negexp2" => Self::neg_exp2_scaled(num(arg)?),
            "affine" => {
                let (a, b) = arg
                    .split_once(',')
                    .ok_or_else(|| Error::domain("affine needs <slope>,<intercept>"))?;
                Self::affine(num(a)?, num(b)?)
            }
            other => Err(Error::domain(format!("unknown transform {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FnClass {
    Submodular,
    Supermodular,
    /// Both submodular and supermodular.
    Modular,
}

impl FnClass {
    pub fn detect(f: &SetFunction, tol: f64) -> Option<FnClass> {
        match (f.is_submodular(tol).holds, f.is_supermodular(tol).holds) {
            (true, true) => Some(FnClass::Modular),
            (true, false) => Some(FnClass::Submodular),
            (false, true) => Some(FnClass::Supermodular),
            (false, false) => None,
        }
    }

    fn is_sub(self) -> bool {
        matches!(self, FnClass::Submodular | FnClass::Modular)
    }

    fn is_super(self) -> bool {
        matches!(self, FnClass::Supermodular | FnClass::Modular)
    }
}

/// Row of the monotonicity case table that justified a claimed direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremCase {
    /// submodular f, increasing convex g
    A,
    /// submodular f, decreasing concave g
    B,
    /// supermodular f, increasing concave g
    C,
    /// supermodular f, decreasing convex g
    D,
}

impl TheoremCase {
    /// First matching row of the case table, with the direction it asserts.
    pub fn select(class: FnClass, g: &ScalarTransform) -> Option<(TheoremCase, Direction)> {
        let inc = g.direction() == Direction::Increasing;
        if class.is_sub() && inc && g.is_convex() {
            Some((TheoremCase::A, Direction::Decreasing))
        } else if class.is_sub() && !inc && g.is_concave() {
            Some((TheoremCase::B, Direction::Increasing))
        } else if class.is_super() && inc && g.is_concave() {
            Some((TheoremCase::C, Direction::Increasing))
        } else if class.is_super() && !inc && g.is_convex() {
            Some((TheoremCase::D, Direction::Decreasing))
        } else {
            None
        }
    }
}

/// How the claimed direction of a sequence is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Claim {
    /// Classify `f` with the modularity predicates, then use the case table.
    Detect,
    /// Use the case table with a caller-supplied class.
    Class(FnClass),
    /// Assert a direction without consulting the case table.
    Direction(Direction),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Monotonicity {
    Constant,
    Increasing,
    Decreasing,
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step {
    /// Step from `t_k` to `t_{k+1}`.
    pub k: usize,
    /// Signed margin in the claimed direction; negative means a violation.
    pub slack: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SequenceReport {
    pub name: String,
    /// `values[k-1] = t_k`.
    pub values: Vec<f64>,
    pub direction_claimed: Option<Direction>,
    pub case: Option<TheoremCase>,
    pub measured: Monotonicity,
    /// Every adjacent pair respects the claimed direction within tolerance
    /// (vacuously true without a claim).
    pub holds: bool,
    pub worst_step: Option<Step>,
}

impl SequenceReport {
    fn build(
        name: impl Into<String>,
        values: Vec<f64>,
        claim: Option<(Option<TheoremCase>, Direction)>,
        tol: f64,
    ) -> Self {
        let measured = measure(&values, tol);
        let (case, direction_claimed) = match claim {
            Some((case, dir)) => (case, Some(dir)),
            None => (None, None),
        };
        let mut holds = true;
        let mut worst: Option<Step> = None;
        if let Some(dir) = direction_claimed {
            for (i, w) in values.windows(2).enumerate() {
                let (a, b) = (w[0], w[1]);
                let slack = match dir {
                    Direction::Decreasing => a - b,
                    Direction::Increasing => b - a,
                };
                if slack < -tol * tol::scale(a, b) {
                    holds = false;
                }
                if worst.is_none_or(|s| slack < s.slack) {
                    worst = Some(Step { k: i + 1, slack });
                }
            }
        }
        SequenceReport {
            name: name.into(),
            values,
            direction_claimed,
            case,
            measured,
            holds,
            worst_step: worst,
        }
    }
}

fn measure(values: &[f64], tol: f64) -> Monotonicity {
    let mut up = false;
    let mut down = false;
    for w in values.windows(2) {
        let eps = tol * tol::scale(w[0], w[1]);
        if w[1] > w[0] + eps {
            up = true;
        }
        if w[1] < w[0] - eps {
            down = true;
        }
    }
    match (up, down) {
        (false, false) => Monotonicity::Constant,
        (true, false) => Monotonicity::Increasing,
        (false, true) => Monotonicity::Decreasing,
        (true, true) => Monotonicity::Neither,
    }
}

/// `Σ_{|T|=k} g(f(T)/k)` for `k = 0..=n` (entry 0 is unused and zero).
fn level_sums(f: &SetFunction, g: &ScalarTransform, exec: Exec) -> Vec<f64> {
    let n = f.n();
    let v = f.values();
    let parts = exec.map_chunks(v.len(), CHUNK, |range| {
        let mut acc = vec![0.0; n + 1];
        for t in range {
            let k = (t as Mask).count_ones() as usize;
            if k > 0 {
                acc[k] += g.apply(v[t] / k as f64);
            }
        }
        acc
    });
    let mut sums = vec![0.0; n + 1];
    for part in parts {
        for (s, p) in sums.iter_mut().zip(part) {
            *s += p;
        }
    }
    sums
}

/// `t_1..t_n` by exhaustive enumeration of the subsets of each size.
pub fn tk_values(f: &SetFunction, g: &ScalarTransform, exec: Exec) -> Vec<f64> {
    let n = f.n() as u32;
    level_sums(f, g, exec)
        .into_iter()
        .enumerate()
        .skip(1)
        .map(|(k, s)| s / binom_f64(n, k as u32))
        .collect()
}

pub fn tk_sequence(
    f: &SetFunction,
    g: &ScalarTransform,
    claim: Claim,
    tol: f64,
) -> Result<SequenceReport> {
    tk_sequence_with(f, g, claim, tol, Exec::default())
}

pub fn tk_sequence_with(
    f: &SetFunction,
    g: &ScalarTransform,
    claim: Claim,
    tol: f64,
    exec: Exec,
) -> Result<SequenceReport> {
    f.require_zero_at_empty(tol)?;
    let resolved = match claim {
        Claim::Direction(d) => Some((None, d)),
        Claim::Class(c) => TheoremCase::select(c, g).map(|(case, d)| (Some(case), d)),
        Claim::Detect => FnClass::detect(f, tol)
            .and_then(|c| TheoremCase::select(c, g))
            .map(|(case, d)| (Some(case), d)),
    };
    let values = tk_values(f, g, exec);
    Ok(SequenceReport::build(
        format!("t_k[{g}]"),
        values,
        resolved,
        tol,
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenHanReport {
    pub alpha: f64,
    pub k: usize,
    pub c_alpha: f64,
    /// `Σ_{|T|=k} (f(Ω)^α - f(T)^α) <= c_α(n,k) f(Ω)^α`.
    pub check: Check,
    /// Two-sided bound on `Σ_{|T|=k} f(T)^α`, present when `f` is a rank function.
    pub rank_bounds: Option<[Check; 2]>,
}

/// `c_α(n,k) = (1 - (k/n)^α) C(n,k)`, exactly `C(n-1,k)` at `α = 1`.
pub fn c_alpha(n: usize, k: usize, alpha: f64) -> f64 {
    let (n32, k32) = (n as u32, k as u32);
    if alpha == 1.0 {
        binom_f64(n32 - 1, k32)
    } else {
        (1.0 - (k as f64 / n as f64).powf(alpha)) * binom_f64(n32, k32)
    }
}

/// Generalized Han inequality for a submodular `f` with `f(∅) = 0`
/// (nonnegative as well when `α > 1`).
pub fn corollary2_check(f: &SetFunction, alpha: f64, k: usize, tol: f64) -> Result<GenHanReport> {
    let n = f.n();
    if !alpha.is_finite() || alpha < 1.0 {
        return Err(Error::domain(format!("alpha must be >= 1, got {alpha}")));
    }
    if k == 0 || k >= n {
        return Err(Error::domain(format!(
            "k must lie in 1..={}, got {k}",
            n.saturating_sub(1)
        )));
    }
    f.require_zero_at_empty(tol)?;
    if !f.is_submodular(tol).holds {
        return Err(Error::precondition("f must be submodular"));
    }
    if alpha > 1.0 && !f.is_nonnegative(tol).holds {
        return Err(Error::precondition("f must be nonnegative when alpha > 1"));
    }
    let pow = |x: f64| {
        if alpha == 1.0 {
            x
        } else {
            x.max(0.0).powf(alpha)
        }
    };
    let top = pow(f.get(f.full()));
    let level: f64 = k_subsets(n as u32, k as u32).map(|t| pow(f.get(t))).sum();
    let count = binom_f64(n as u32, k as u32);
    let lhs = count * top - level;
    let c = c_alpha(n, k, alpha);
    let check = Check::le("generalized Han", lhs, c * top, tol);
    let rank_bounds = if f.is_rank_function(tol).holds {
        let lower =
            (k as f64 / n as f64).powf(alpha - 1.0) * binom_f64(n as u32 - 1, k as u32 - 1) * top;
        Some([
            Check::ge("power sum lower bound", level, lower, tol),
            Check::le("power sum upper bound", level, count * top, tol),
        ])
    } else {
        None
    };
    Ok(GenHanReport {
        alpha,
        k,
        c_alpha: c,
        check,
        rank_bounds,
    })
}

/// Han's inequality `Σ_i (H(X^n) - H(X_{-i})) <= H(X^n)`.
pub fn han_check(p: &JointPmf, tol: f64) -> Check {
    let full = p.full();
    let h = p.entropy(full).expect("full mask is valid");
    let lhs: f64 = (0..p.var_count())
        .map(|i| h - p.entropy(full & !(1 << i)).expect("valid mask"))
        .sum();
    Check::le("Han", lhs, h, tol)
}

/// The eight information sequences built from a joint PMF.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InfoSequence {
    /// averaged `H(X_T)/k`
    #[serde(rename = "h")]
    H,
    /// averaged `I(X_T; X_{T^c})/k`
    #[serde(rename = "l")]
    L,
    /// `H(Σ_{T} X)` summed over `|T|=k`, normalized by `C(n-1,k-1)`
    #[serde(rename = "m")]
    M,
    /// averaged `H(X_T | X_{T^c})/k`
    #[serde(rename = "r")]
    R,
    /// averaged `2^{2r H(X_T)/k}`
    #[serde(rename = "s")]
    S,
    /// averaged `2^{-r H(X_T|X_{T^c})/k}`
    #[serde(rename = "u")]
    U,
    /// averaged `2^{r I(X_T;X_{T^c})/k}`
    #[serde(rename = "v")]
    V,
    /// averaged `2^{2r H(Σ_T X)/k}`
    #[serde(rename = "w")]
    W,
}

impl InfoSequence {
    pub const ALL: [InfoSequence; 8] = [
        InfoSequence::H,
        InfoSequence::L,
        InfoSequence::M,
        InfoSequence::R,
        InfoSequence::S,
        InfoSequence::U,
        InfoSequence::V,
        InfoSequence::W,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InfoSequence::H => "h",
            InfoSequence::L => "l",
            InfoSequence::M => "m",
            InfoSequence::R => "r",
            InfoSequence::S => "s",
            InfoSequence::U => "u",
            InfoSequence::V => "v",
            InfoSequence::W => "w",
        }
    }

    /// Whether the sequence needs independent integer-valued variables.
    pub fn needs_sums(self) -> bool {
        matches!(self, InfoSequence::M | InfoSequence::W)
    }
}

impl FromStr for InfoSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        InfoSequence::ALL
            .into_iter()
            .find(|q| q.name() == s)
            .ok_or_else(|| Error::domain(format!("unknown sequence {s:?}")))
    }
}

fn require_independent_integers(p: &JointPmf) -> Result<Vec<JointPmf>> {
    if p.integer_values().is_none() {
        return Err(Error::precondition(
            "sums of variables need integer values for every symbol",
        ));
    }
    let tc = p.total_correlation();
    if tc > INDEPENDENCE_THRESHOLD {
        return Err(Error::precondition(format!(
            "variables must be independent (total correlation {tc:.3e} bits)"
        )));
    }
    Ok(p.single_marginals())
}

/// One of the eight monotone information sequences, computed as `t_k` with the
/// set function and transform that make its direction follow from the case
/// table.
pub fn corollary3_sequences(
    p: &JointPmf,
    r: f64,
    which: InfoSequence,
    tol: f64,
) -> Result<SequenceReport> {
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::domain(format!("r must be positive, got {r}")));
    }
    use FnClass::{Submodular as Sub, Supermodular as Sup};
    let (f, g, class) = match which {
        InfoSequence::H => (build_entropic_fn(p)?, ScalarTransform::Identity, Sub),
        InfoSequence::L => (build_mi_fn(p)?, ScalarTransform::Identity, Sub),
        InfoSequence::M => (
            build_sum_entropy_fn(&require_independent_integers(p)?)?,
            ScalarTransform::Identity,
            Sub,
        ),
        InfoSequence::R => (build_cond_entropy_fn(p)?, ScalarTransform::Identity, Sup),
        InfoSequence::S => (
            build_entropic_fn(p)?,
            ScalarTransform::exp2_scaled(2.0 * r)?,
            Sub,
        ),
        InfoSequence::U => (
            build_cond_entropy_fn(p)?,
            ScalarTransform::exp2_scaled(-r)?,
            Sup,
        ),
        InfoSequence::V => (build_mi_fn(p)?, ScalarTransform::exp2_scaled(r)?, Sub),
        InfoSequence::W => (
            build_sum_entropy_fn(&require_independent_integers(p)?)?,
            ScalarTransform::exp2_scaled(2.0 * r)?,
            Sub,
        ),
    };
    let mut report = tk_sequence(&f, &g, Claim::Class(class), tol)?;
    if which == InfoSequence::M {
        // C(n-1,k-1) = (k/n) C(n,k), so m_k = n t_k
        let n = p.var_count() as f64;
        let values = report.values.iter().map(|t| n * t).collect();
        report = SequenceReport::build(
            "",
            values,
            report.direction_claimed.map(|d| (report.case, d)),
            tol,
        );
    }
    report.name = which.name().to_string();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub k: usize,
    /// `C(n,k) g(f(Ω)/n)`
    pub lower: f64,
    /// `Σ_{|T|=k} g(f(T)/k)`
    pub mid: f64,
    /// `C(n,k) g(f(Ω)/k)`
    pub upper: f64,
    /// `2^{n H_b(k/n)} / (n+1)`
    pub binom_lo: f64,
    pub binom: f64,
    /// `2^{n H_b(k/n)}`
    pub binom_hi: f64,
    pub checks: Vec<Check>,
}

impl SandwichReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Finite-n bounds on `Σ_{|T|=k} g(f(T)/k)` for a rank function `f` and an
/// increasing convex `g`, together with the entropy bounds on `C(n,k)`.
pub fn corollary1_sandwich(
    f: &SetFunction,
    g: &ScalarTransform,
    k: usize,
    tol: f64,
) -> Result<SandwichReport> {
    let n = f.n();
    if k == 0 || k > n {
        return Err(Error::domain(format!("k must lie in 1..={n}, got {k}")));
    }
    if !f.is_rank_function(tol).holds {
        return Err(Error::precondition("f must be a rank function"));
    }
    if g.direction() != Direction::Increasing || !g.is_convex() {
        return Err(Error::precondition("g must be increasing and convex"));
    }
    let count = binom_f64(n as u32, k as u32);
    let top = f.get(f.full());
    let lower = count * g.apply(top / n as f64);
    let upper = count * g.apply(top / k as f64);
    let mid: f64 = k_subsets(n as u32, k as u32)
        .map(|t| g.apply(f.get(t) / k as f64))
        .sum();
    let binom_hi = (n as f64 * hb(k as f64 / n as f64)).exp2();
    let binom_lo = binom_hi / (n as f64 + 1.0);
    let checks = vec![
        Check::le("lower <= sum", lower, mid, tol),
        Check::le("sum <= upper", mid, upper, tol),
        Check::le("binomial lower bound", binom_lo, count, tol),
        Check::le("binomial upper bound", count, binom_hi, tol),
    ];
    Ok(SandwichReport {
        k,
        lower,
        mid,
        upper,
        binom_lo,
        binom: count,
        binom_hi,
        checks,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionReport {
    pub n: usize,
    pub k: usize,
    pub cardinality: u64,
    /// Distinct projections onto each `k`-subset of coordinates, with the
    /// subsets in increasing bitmask order.
    pub projection_sizes: Vec<u64>,
    /// `(Π_j M_j)^{1 / C(n-1,k-1)}`
    pub bound: f64,
    pub log2_bound: f64,
    pub holds: bool,
    /// `log2 |P| / n`
    pub rate: f64,
    /// Mean of `log2 M_j / k`.
    pub mean_projection_rate: f64,
}

/// Distinct points of an `n`-dimensional integer point set, sorted.
pub fn canonical_points(points: &[Vec<i64>]) -> Result<(usize, Vec<Vec<i64>>)> {
    let n = points
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::domain("point set is empty"))?;
    if let Some(p) = points.iter().find(|p| p.len() != n) {
        return Err(Error::domain(format!(
            "point {p:?} has dimension {}, expected {n}",
            p.len()
        )));
    }
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    Ok((n, pts))
}

/// Number of distinct projections of `points` onto each `k`-subset of
/// coordinates (increasing bitmask order).
pub fn projection_sizes(points: &[Vec<i64>], n: usize, k: usize, exec: Exec) -> Vec<u64> {
    let subsets: Vec<Mask> = k_subsets(n as u32, k as u32).collect();
    exec.map_items(&subsets, |&s| {
        let coords: Vec<usize> = (0..n).filter(|i| s >> i & 1 == 1).collect();
        let mut proj: Vec<Vec<i64>> = points
            .iter()
            .map(|p| coords.iter().map(|&i| p[i]).collect())
            .collect();
        proj.sort_unstable();
        proj.dedup();
        proj.len() as u64
    })
}

/// Upper bound on a finite point set from the sizes of its projections on
/// all `k`-dimensional coordinate subspaces.
pub fn projection_bound(points: &[Vec<i64>], k: usize, tol: f64) -> Result<ProjectionReport> {
    let (n, pts) = canonical_points(points)?;
    if n < 2 || k == 0 || k >= n {
        return Err(Error::domain(format!(
            "projection dimension k must lie in 1..={} for points of dimension {n}",
            n.saturating_sub(1)
        )));
    }
    let sizes = projection_sizes(&pts, n, k, Exec::default());
    let card = pts.len() as u64;
    let sum_log: f64 = sizes.iter().map(|&m| (m as f64).log2()).sum();
    let log2_bound = sum_log / binom_f64(n as u32 - 1, k as u32 - 1);
    let bound = log2_bound.exp2();
    Ok(ProjectionReport {
        n,
        k,
        cardinality: card,
        holds: card as f64 <= bound * (1.0 + tol),
        rate: (card as f64).log2() / n as f64,
        mean_projection_rate: sum_log / k as f64 / sizes.len() as f64,
        projection_sizes: sizes,
        bound,
        log2_bound,
    })
}

/// Optional cover data for the sum-entropy Shearer inequality.
#[derive(Clone, Debug, PartialEq)]
pub struct SumCover {
    pub family: SubsetFamily,
    pub d: usize,
    pub target: Mask,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpiReport {
    pub n: usize,
    pub k: usize,
    /// `N(ΣX)` with scalar entropy power `N = 2^{2H}`.
    pub entropy_power: f64,
    /// `(Π_{|T|=k} N(Σ_T X))^{1/C(n-1,k-1)}`
    pub geometric_bound: f64,
    /// `(1/C(n,k)) Σ_{|T|=k} N(Σ_T X)^{n/k}`
    pub arithmetic_bound: f64,
    pub checks: Vec<Check>,
}

impl EpiReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Entropy and entropy-power inequalities for sums of independent
/// integer-valued variables.
pub fn sum_epi_checks(
    marginals: &[JointPmf],
    k: usize,
    cover: Option<&SumCover>,
    tol: f64,
) -> Result<EpiReport> {
    let n = marginals.len();
    if n < 2 || k == 0 || k >= n {
        return Err(Error::domain(format!(
            "need n >= 2 and k in 1..=n-1, got n={n}, k={k}"
        )));
    }
    let dists = sum_distributions(marginals)?;
    let h: Vec<f64> = dists.iter().map(dist_entropy).collect();
    let full = (1usize << n) - 1;
    let h_all = h[full];
    let power = (2.0 * h_all).exp2();
    let (n32, k32) = (n as u32, k as u32);
    let d = binom_f64(n32 - 1, k32 - 1);

    let level: Vec<f64> = k_subsets(n32, k32).map(|t| h[t as usize]).collect();
    let level_sum: f64 = level.iter().sum();
    let geometric_bound = (2.0 * level_sum / d).exp2();
    let ratio = n as f64 / k as f64;
    let arithmetic_bound = level
        .iter()
        .map(|&ht| (2.0 * ht * ratio).exp2())
        .sum::<f64>()
        / binom_f64(n32, k32);

    let drop_one: Vec<f64> = (0..n).map(|j| h[full & !(1 << j)]).collect();
    let loo_geometric = (2.0 * drop_one.iter().sum::<f64>() / (n - 1) as f64).exp2();
    let loo_arithmetic = drop_one
        .iter()
        .map(|&ht| (2.0 * ht * n as f64 / (n - 1) as f64).exp2())
        .sum::<f64>()
        / n as f64;

    let mut checks = vec![
        Check::le("sum entropy vs k-subset sums", h_all, level_sum / d, tol),
        Check::le(
            "entropy power vs geometric mean",
            power,
            geometric_bound,
            tol,
        ),
        Check::le(
            "entropy power vs arithmetic mean",
            power,
            arithmetic_bound,
            tol,
        ),
        Check::le(
            "geometric vs arithmetic mean",
            geometric_bound,
            arithmetic_bound,
            tol,
        ),
        Check::le(
            "entropy power vs leave-one-out geometric mean",
            power,
            loo_geometric,
            tol,
        ),
        Check::le(
            "leave-one-out geometric vs arithmetic mean",
            loo_geometric,
            loo_arithmetic,
            tol,
        ),
    ];
    if let Some(cover) = cover {
        let fam = &cover.family;
        if fam.ground().size() != n {
            return Err(Error::domain("cover family has the wrong ground set"));
        }
        if cover.d == 0 {
            return Err(Error::domain("cover multiplicity d must be at least 1"));
        }
        for (i, deg) in fam.degree_profile().into_iter().enumerate() {
            if cover.target >> i & 1 == 1 && deg < cover.d {
                return Err(Error::precondition(format!(
                    "element {} of the target is covered {deg} time(s), fewer than d={}",
                    fam.ground().labels()[i],
                    cover.d
                )));
            }
        }
        let lhs = cover.d as f64 * h[cover.target as usize];
        let rhs: f64 = fam.members().iter().map(|&m| h[m as usize]).sum();
        checks.push(Check::le("Shearer for sum entropies", lhs, rhs, tol));
    }
    Ok(EpiReport {
        n,
        k,
        entropy_power: power,
        geometric_bound,
        arithmetic_bound,
        checks,
    })
}

/// Exact `C(n,k)` exposed for reports.
pub fn binomial(n: u32, k: u32) -> u128 {
    binom(n, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infomeasures::JointPmf;
    use crate::setfn::GroundSet;

    fn fair_bits(n: usize) -> JointPmf {
        JointPmf::product(&vec![vec![0.5, 0.5]; n]).unwrap()
    }

    fn correlated(n: usize) -> JointPmf {
        let mut probs = vec![0.0; 1 << n];
        probs[0] = 0.5;
        probs[(1 << n) - 1] = 0.5;
        JointPmf::new(vec![2; n], probs).unwrap()
    }

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn transform_flags() {
        let id = ScalarTransform::Identity;
        assert!(id.is_convex() && id.is_concave());
        assert_eq!(id.direction(), Direction::Increasing);
        let e = ScalarTransform::exp2_scaled(-1.0).unwrap();
        assert_eq!(e.direction(), Direction::Decreasing);
        assert!(e.is_convex() && !e.is_concave());
        let ne = ScalarTransform::neg_exp2_scaled(1.0).unwrap();
        assert_eq!(ne.direction(), Direction::Decreasing);
        assert!(ne.is_concave() && !ne.is_convex());
        assert!(ScalarTransform::clipped_power(0.5).is_err());
        assert!(ScalarTransform::exp2_scaled(0.0).is_err());
        assert_eq!(
            ScalarTransform::clipped_power(2.0).unwrap().apply(-3.0),
            0.0
        );
        assert_eq!(ScalarTransform::clipped_power(2.0).unwrap().apply(3.0), 9.0);
    }

    #[test]
    fn transform_parsing_roundtrip() {
        for s in [
            "identity",
            "power:2",
            "exp2:-1.5",
            "negexp2:3",
            "affine:2,-1",
        ] {
            let g: ScalarTransform = s.parse().unwrap();
            assert_eq!(g.to_string(), s);
        }
        assert!("power:0.2".parse::<ScalarTransform>().is_err());
        assert!("cosh".parse::<ScalarTransform>().is_err());
    }

    #[test]
    fn case_table() {
        let inc_convex = ScalarTransform::exp2_scaled(1.0).unwrap();
        let dec_concave = ScalarTransform::neg_exp2_scaled(1.0).unwrap();
        let inc_concave = ScalarTransform::neg_exp2_scaled(-1.0).unwrap();
        let dec_convex = ScalarTransform::exp2_scaled(-1.0).unwrap();
        use FnClass::*;
        assert_eq!(
            TheoremCase::select(Submodular, &inc_convex),
            Some((TheoremCase::A, Direction::Decreasing))
        );
        assert_eq!(
            TheoremCase::select(Submodular, &dec_concave),
            Some((TheoremCase::B, Direction::Increasing))
        );
        assert_eq!(
            TheoremCase::select(Supermodular, &inc_concave),
            Some((TheoremCase::C, Direction::Increasing))
        );
        assert_eq!(
            TheoremCase::select(Supermodular, &dec_convex),
            Some((TheoremCase::D, Direction::Decreasing))
        );
        assert_eq!(TheoremCase::select(Submodular, &inc_concave), None);
        assert_eq!(TheoremCase::select(Supermodular, &inc_convex), None);
    }

    #[test]
    fn tk_on_independent_and_correlated_bits() {
        let f = build_entropic_fn(&fair_bits(3)).unwrap();
        let r = tk_sequence(&f, &ScalarTransform::Identity, Claim::Detect, 1e-9).unwrap();
        assert!(close(&r.values, &[1.0, 1.0, 1.0]));
        assert!(r.holds);
        assert_eq!(r.measured, Monotonicity::Constant);

        let f = build_entropic_fn(&correlated(3)).unwrap();
        let r = tk_sequence(&f, &ScalarTransform::Identity, Claim::Detect, 1e-9).unwrap();
        assert!(close(&r.values, &[1.0, 0.5, 1.0 / 3.0]));
        assert_eq!(r.direction_claimed, Some(Direction::Decreasing));
        assert_eq!(r.case, Some(TheoremCase::A));
        assert!(r.holds);
    }

    #[test]
    fn tk_rejects_nonzero_empty_value() {
        let f = SetFunction::from_fn(GroundSet::new(2).unwrap(), |_| 1.0).unwrap();
        let err = tk_sequence(&f, &ScalarTransform::Identity, Claim::Detect, 1e-9).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn tk_unknown_case_is_measured_only() {
        let f = build_entropic_fn(&correlated(3)).unwrap();
        let g = ScalarTransform::neg_exp2_scaled(-1.0).unwrap();
        let r = tk_sequence(&f, &g, Claim::Class(FnClass::Submodular), 1e-9).unwrap();
        assert_eq!(r.direction_claimed, None);
        assert!(r.holds);
        assert!(r.worst_step.is_none());
    }

    #[test]
    fn wrong_claim_is_reported() {
        let f = build_entropic_fn(&correlated(3)).unwrap();
        let r = tk_sequence(
            &f,
            &ScalarTransform::Identity,
            Claim::Direction(Direction::Increasing),
            1e-9,
        )
        .unwrap();
        assert!(!r.holds);
        let w = r.worst_step.unwrap();
        assert_eq!(w.k, 1);
        assert!((w.slack + 0.5).abs() < 1e-12);
    }

    #[test]
    fn c_alpha_values() {
        assert_eq!(c_alpha(4, 3, 1.0), 1.0);
        assert_eq!(c_alpha(5, 2, 1.0), 6.0);
        assert!((c_alpha(4, 2, 2.0) - 0.75 * 6.0).abs() < 1e-12);
    }

    #[test]
    fn generalized_han_equality_for_independent_bits() {
        for n in 2..6 {
            let f = build_entropic_fn(&fair_bits(n)).unwrap();
            let r = corollary2_check(&f, 1.0, n - 1, 1e-9).unwrap();
            assert!((r.check.lhs - n as f64).abs() < 1e-12);
            assert!((r.check.rhs - n as f64).abs() < 1e-12);
            assert!(r.check.holds);
            let [lo, hi] = r.rank_bounds.unwrap();
            assert!(lo.holds && hi.holds);
        }
    }

    #[test]
    fn generalized_han_preconditions() {
        let f = build_entropic_fn(&fair_bits(3)).unwrap();
        assert!(corollary2_check(&f, 1.0, 0, 1e-9).is_err());
        assert!(corollary2_check(&f, 1.0, 3, 1e-9).is_err());
        assert!(corollary2_check(&f, 0.5, 1, 1e-9).is_err());
        let sq = SetFunction::from_fn(GroundSet::new(3).unwrap(), |b| {
            f64::from(b.count_ones()).powi(2)
        })
        .unwrap();
        let err = corollary2_check(&sq, 1.0, 1, 1e-9).unwrap_err();
        assert!(err.to_string().contains("submodular"));
        let neg = f.negated();
        // -H is supermodular, hence not submodular unless modular; -|T| is modular but negative
        let neg_card = SetFunction::cardinality(3).unwrap().negated();
        assert!(corollary2_check(&neg_card, 1.0, 1, 1e-9).is_ok());
        let err = corollary2_check(&neg_card, 2.0, 1, 1e-9).unwrap_err();
        assert!(err.to_string().contains("nonnegative"));
        assert!(corollary2_check(&neg, 1.0, 1, 1e-9).is_ok());
    }

    #[test]
    fn han_examples() {
        let c = han_check(&fair_bits(4), 1e-12);
        assert!(c.holds && c.slack.abs() < 1e-12);
        let c = han_check(&correlated(3), 1e-12);
        assert!(c.lhs.abs() < 1e-12);
        assert!((c.rhs - 1.0).abs() < 1e-12);
        assert!(c.holds);
    }

    #[test]
    fn corollary3_examples() {
        let r = corollary3_sequences(&fair_bits(3), 1.0, InfoSequence::H, 1e-9).unwrap();
        assert!(close(&r.values, &[1.0, 1.0, 1.0]));
        let r = corollary3_sequences(&correlated(2), 1.0, InfoSequence::R, 1e-9).unwrap();
        assert!(close(&r.values, &[0.0, 0.5]));
        assert_eq!(r.direction_claimed, Some(Direction::Increasing));
        assert!(r.holds);
        let r = corollary3_sequences(&fair_bits(3), 1.0, InfoSequence::S, 1e-9).unwrap();
        assert!(close(&r.values, &[4.0, 4.0, 4.0]));
        let r = corollary3_sequences(&correlated(3), 1.0, InfoSequence::U, 1e-9).unwrap();
        assert_eq!(r.direction_claimed, Some(Direction::Decreasing));
        assert!(r.holds);
        // m and w need integer values
        assert!(corollary3_sequences(&fair_bits(3), 1.0, InfoSequence::M, 1e-9).is_err());
        let p = fair_bits(3)
            .with_integer_values(vec![vec![0, 1]; 3])
            .unwrap();
        let m = corollary3_sequences(&p, 1.0, InfoSequence::M, 1e-9).unwrap();
        // m_1 = Σ_i H(X_i) / C(2,0) = 3; m_3 = H(X1+X2+X3)
        assert!((m.values[0] - 3.0).abs() < 1e-12);
        assert!(m.holds);
        let dep = correlated(3)
            .with_integer_values(vec![vec![0, 1]; 3])
            .unwrap();
        assert!(matches!(
            corollary3_sequences(&dep, 1.0, InfoSequence::W, 1e-9),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn sandwich_examples() {
        let f = build_entropic_fn(&fair_bits(10)).unwrap();
        let r = corollary1_sandwich(&f, &ScalarTransform::Identity, 5, 1e-9).unwrap();
        assert_eq!(r.binom, 252.0);
        assert!((r.binom_hi - 1024.0).abs() < 1e-9);
        assert!((r.binom_lo - 1024.0 / 11.0).abs() < 1e-9);
        assert!((r.lower - 252.0).abs() < 1e-9 && (r.mid - 252.0).abs() < 1e-9);
        assert!((r.upper - 504.0).abs() < 1e-9);
        assert!(r.holds());
        let concave = ScalarTransform::neg_exp2_scaled(-1.0).unwrap();
        assert!(corollary1_sandwich(&f, &concave, 5, 1e-9).is_err());
    }

    #[test]
    fn projection_grid_equality() {
        let mut pts = Vec::new();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    pts.push(vec![a, b, c]);
                }
            }
        }
        let r = projection_bound(&pts, 2, 1e-9).unwrap();
        assert_eq!(r.projection_sizes, vec![4, 4, 4]);
        assert!((r.bound - 8.0).abs() < 1e-12);
        assert_eq!(r.cardinality, 8);
        assert!(r.holds);
        assert!((r.rate - r.mean_projection_rate).abs() < 1e-12);
    }

    #[test]
    fn projection_single_point_and_errors() {
        let r = projection_bound(&[vec![3, 1, 4, 1]], 2, 1e-9).unwrap();
        assert!(r.projection_sizes.iter().all(|&m| m == 1));
        assert_eq!(r.bound, 1.0);
        assert!(projection_bound(&[vec![1, 2]], 2, 1e-9).is_err());
        assert!(projection_bound(&[vec![1, 2], vec![1]], 1, 1e-9).is_err());
        assert!(projection_bound(&[], 1, 1e-9).is_err());
        let dup = projection_bound(&[vec![1, 2], vec![1, 2]], 1, 1e-9).unwrap();
        assert_eq!(dup.cardinality, 1);
    }

    #[test]
    fn epi_three_fair_bits() {
        let bit = JointPmf::integer_variable(vec![0, 1], vec![0.5, 0.5]).unwrap();
        let r = sum_epi_checks(&[bit.clone(), bit.clone(), bit], 2, None, 1e-9).unwrap();
        let first = &r.checks[0];
        // H(1/8,3/8,3/8,1/8) = 3 - (3/4) log2 3
        assert!((first.lhs - (3.0 - 0.75 * 3f64.log2())).abs() < 1e-12);
        assert!((first.rhs - 2.25).abs() < 1e-12);
        assert!(r.holds());
        assert!((r.geometric_bound - r.arithmetic_bound).abs() < 1e-9 * r.arithmetic_bound);
    }

    #[test]
    fn epi_with_deterministic_variable() {
        let x = JointPmf::integer_variable(vec![0, 1, 5], vec![0.2, 0.3, 0.5]).unwrap();
        let zero = JointPmf::integer_variable(vec![0], vec![1.0]).unwrap();
        let r = sum_epi_checks(&[x, zero], 1, None, 1e-12).unwrap();
        let c = &r.checks[0];
        assert!((c.lhs - c.rhs).abs() < 1e-12);
        assert!(r.holds());
    }

    #[test]
    fn epi_with_cover() {
        let bit = JointPmf::integer_variable(vec![0, 1], vec![0.5, 0.5]).unwrap();
        let g = GroundSet::new(3).unwrap();
        let fam = SubsetFamily::new(g, vec![0b011, 0b110]).unwrap();
        let cover = SumCover {
            family: fam.clone(),
            d: 1,
            target: 0b111,
        };
        let r = sum_epi_checks(
            &[bit.clone(), bit.clone(), bit.clone()],
            1,
            Some(&cover),
            1e-9,
        )
        .unwrap();
        assert!(r.holds());
        let bad = SumCover {
            family: fam,
            d: 2,
            target: 0b111,
        };
        assert!(sum_epi_checks(&[bit.clone(), bit.clone(), bit], 1, Some(&bad), 1e-9).is_err());
    }
}
