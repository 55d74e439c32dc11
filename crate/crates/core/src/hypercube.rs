//! Confusion graphs on subsets of the binary hypercube.
//!
//! A word is an `n`-bit mask; bit `i` set means coordinate `i + 1` equals `+1`.
//! Two words are adjacent in the confusion graph of radius `τ` when their
//! Hamming distance lies in `1..=τ`.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::combin::{binom, binom_f64, hb, k_subsets};
use crate::exec::Exec;
use crate::infomeasures::entropy_from_counts;
use crate::tol::{self, Check};
use crate::{Error, Mask, Result};

/// Largest dimension a [`CodeSet`] may have.
pub const MAX_DIM: usize = 30;
/// Dense membership tables are used up to this dimension.
const DENSE_DIM: usize = 24;
/// Rows of the pair scan handled per task.
const PAIR_ROWS: usize = 64;

/// A non-empty subset of `{-1, 1}^n` in canonical (sorted, deduplicated) form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeSet {
    n: usize,
    words: Vec<Mask>,
}

impl CodeSet {
    pub fn new(n: usize, mut words: Vec<Mask>) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(Error::domain(format!(
                "dimension must lie in 1..={MAX_DIM}, got {n}"
            )));
        }
        if words.is_empty() {
            return Err(Error::domain("code set is empty"));
        }
        let limit = 1u64 << n;
        if let Some(w) = words.iter().find(|&&w| u64::from(w) >= limit) {
            return Err(Error::domain(format!(
                "word {w:#b} does not fit in {n} bits"
            )));
        }
        words.sort_unstable();
        words.dedup();
        Ok(CodeSet { n, words })
    }

    pub fn full_cube(n: usize) -> Result<Self> {
        if n == 0 || n > DENSE_DIM {
            return Err(Error::domain(format!(
                "full cube needs 1 <= n <= {DENSE_DIM}"
            )));
        }
        CodeSet::new(n, (0..1u32 << n).collect())
    }

    /// `{x : x_coord = +1}` with 1-based `coord`.
    pub fn dictator(n: usize, coord: usize) -> Result<Self> {
        if coord == 0 || coord > n {
            return Err(Error::domain(format!("coordinate must lie in 1..={n}")));
        }
        let cube = CodeSet::full_cube(n)?;
        let bit = 1 << (coord - 1);
        CodeSet::new(n, cube.words.into_iter().filter(|w| w & bit != 0).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn words(&self) -> &[Mask] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: Mask) -> bool {
        self.words.binary_search(&w).is_ok()
    }

    /// `|A| / 2^n`.
    pub fn density(&self) -> f64 {
        self.len() as f64 / (self.n as f64).exp2()
    }

    fn check_radius(&self, d: usize, what: &str) -> Result<()> {
        if d == 0 || d > self.n {
            return Err(Error::domain(format!(
                "{what} must lie in 1..={}, got {d}",
                self.n
            )));
        }
        Ok(())
    }
}

/// Membership oracle: a bitset for small `n`, binary search above.
enum Members<'a> {
    Dense(Vec<u64>),
    Sorted(&'a [Mask]),
}

impl<'a> Members<'a> {
    fn of(a: &'a CodeSet) -> Self {
        if a.n <= DENSE_DIM {
            let mut bits = vec![0u64; (1usize << a.n).div_ceil(64)];
            for &w in &a.words {
                bits[w as usize / 64] |= 1 << (w % 64);
            }
            Members::Dense(bits)
        } else {
            Members::Sorted(&a.words)
        }
    }

    fn contains(&self, w: Mask) -> bool {
        match self {
            Members::Dense(bits) => bits[w as usize / 64] >> (w % 64) & 1 == 1,
            Members::Sorted(words) => words.binary_search(&w).is_ok(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeStrategy {
    /// Pick the cheaper of the two below.
    #[default]
    Auto,
    /// Histogram of distances over all unordered pairs of words.
    Pairs,
    /// Flip every `d`-subset of coordinates of every word.
    Flips,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub n: usize,
    pub card: u64,
    pub tau: usize,
    /// `edge_counts[d-1] = |E_d|`.
    pub edge_counts: Vec<u64>,
    /// `boundary_counts[d-1]` counts `(x, y)` with `x ∈ A`, `y ∉ A` at distance `d`.
    pub boundary_counts: Vec<u64>,
}

impl GraphStats {
    pub fn total_edges(&self) -> u64 {
        self.edge_counts.iter().sum()
    }

    /// `C(n,d)|A| = 2|E_d| + |B_d|` for every `d`, in exact integers.
    pub fn identity_holds(&self) -> bool {
        (1..=self.tau).all(|d| {
            binom(self.n as u32, d as u32) * u128::from(self.card)
                == 2 * u128::from(self.edge_counts[d - 1]) + u128::from(self.boundary_counts[d - 1])
        })
    }
}

pub fn edge_counts(a: &CodeSet, tau: usize) -> Result<GraphStats> {
    edge_counts_with(a, tau, EdgeStrategy::Auto, Exec::default())
}

pub fn edge_counts_with(
    a: &CodeSet,
    tau: usize,
    strategy: EdgeStrategy,
    exec: Exec,
) -> Result<GraphStats> {
    a.check_radius(tau, "tau")?;
    let n = a.n;
    let card = a.len() as u64;
    let strategy = match strategy {
        EdgeStrategy::Auto => {
            let flips: u128 = (1..=tau).map(|d| binom(n as u32, d as u32)).sum();
            if u128::from(card) <= 2 * flips {
                EdgeStrategy::Pairs
            } else {
                EdgeStrategy::Flips
            }
        }
        s => s,
    };
    // ordered[d] = #{(x, y) ∈ A² : dist(x, y) = d}
    let ordered = match strategy {
        EdgeStrategy::Flips => ordered_by_flips(a, tau, exec),
        _ => ordered_by_pairs(a, exec),
    };
    let mut edge = Vec::with_capacity(tau);
    let mut boundary = Vec::with_capacity(tau);
    for d in 1..=tau {
        let total = binom(n as u32, d as u32) * u128::from(card);
        let o = u128::from(ordered[d]);
        edge.push((o / 2) as u64);
        boundary.push((total - o) as u64);
    }
    let stats = GraphStats {
        n,
        card,
        tau,
        edge_counts: edge,
        boundary_counts: boundary,
    };
    assert!(stats.identity_holds(), "edge/boundary identity violated");
    Ok(stats)
}

fn ordered_by_pairs(a: &CodeSet, exec: Exec) -> Vec<u64> {
    let w = &a.words;
    let parts = exec.map_chunks(w.len(), PAIR_ROWS, |rows| {
        let mut hist = vec![0u64; a.n + 1];
        for i in rows {
            for &y in &w[i + 1..] {
                hist[(w[i] ^ y).count_ones() as usize] += 2;
            }
        }
        hist
    });
    let mut hist = vec![0u64; a.n + 1];
    for part in parts {
        for (h, p) in hist.iter_mut().zip(part) {
            *h += p;
        }
    }
    hist
}

fn ordered_by_flips(a: &CodeSet, tau: usize, exec: Exec) -> Vec<u64> {
    let members = Members::of(a);
    let mut hist = vec![0u64; a.n + 1];
    for (d, slot) in hist.iter_mut().enumerate().take(tau + 1).skip(1) {
        let flips: Vec<Mask> = k_subsets(a.n as u32, d as u32).collect();
        let parts = exec.map_items(&flips, |&k| {
            a.words.iter().filter(|&&x| members.contains(x ^ k)).count() as u64
        });
        *slot = parts.into_iter().sum();
    }
    hist
}

/// Value of `m_d` or `l_d` together with whether the minimum ranged over an
/// empty set (in which case the value is the cap).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constant {
    pub value: u64,
    pub vacuous: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constants {
    pub d: usize,
    pub m: Constant,
    pub l: Constant,
}

/// Upper cap for `m_d`: `min(2^d, |A|)`, but never below 2.
pub fn m_cap(card: u64, d: usize) -> u64 {
    (1u64 << d).min(card).max(2)
}

/// Upper cap for `l_d`: `min(2^d - 1, |A| - 1)`, but never below 1.
pub fn l_cap(card: u64, d: usize) -> u64 {
    ((1u64 << d) - 1).min(card.saturating_sub(1)).max(1)
}

/// `m_d` and `l_d`: over all `x ∈ A` and `d`-subsets `K` of coordinates, the
/// least number of words of `A` that agree with `x` outside `K`, split by
/// whether `x` with the coordinates in `K` flipped lies in `A` (`m_d`) or not
/// (`l_d`).
pub fn compute_constants(a: &CodeSet, d: usize) -> Result<Constants> {
    compute_constants_with(a, d, Exec::default())
}

pub fn compute_constants_with(a: &CodeSet, d: usize, exec: Exec) -> Result<Constants> {
    a.check_radius(d, "d")?;
    let members = Members::of(a);
    let flips: Vec<Mask> = k_subsets(a.n as u32, d as u32).collect();
    let per_k = exec.map_items(&flips, |&k| {
        let keep = !k;
        let mut buckets: HashMap<Mask, u64> = HashMap::with_capacity(a.len());
        for &y in &a.words {
            *buckets.entry(y & keep).or_default() += 1;
        }
        let (mut m, mut l) = (u64::MAX, u64::MAX);
        for &x in &a.words {
            let c = buckets[&(x & keep)];
            if members.contains(x ^ k) {
                m = m.min(c);
            } else {
                l = l.min(c);
            }
        }
        (m, l)
    });
    let m = per_k.iter().map(|p| p.0).min().unwrap_or(u64::MAX);
    let l = per_k.iter().map(|p| p.1).min().unwrap_or(u64::MAX);
    let card = a.len() as u64;
    let settle = |v: u64, cap: u64| {
        if v == u64::MAX {
            Constant {
                value: cap,
                vacuous: true,
            }
        } else {
            Constant {
                value: v,
                vacuous: false,
            }
        }
    };
    Ok(Constants {
        d,
        m: settle(m, m_cap(card, d)),
        l: settle(l, l_cap(card, d)),
    })
}

pub fn compute_md(a: &CodeSet, d: usize) -> Result<Constant> {
    Ok(compute_constants(a, d)?.m)
}

pub fn compute_ld(a: &CodeSet, d: usize) -> Result<Constant> {
    Ok(compute_constants(a, d)?.l)
}

/// Caller-supplied `m_d`, `l_d` used in place of the computed maxima.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Overrides {
    pub m: u64,
    pub l: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub d: usize,
    pub m_d: u64,
    pub l_d: u64,
    pub m_vacuous: bool,
    pub l_vacuous: bool,
    /// `|E_d|`.
    pub exact_count: u64,
    /// `C(n-1,d-1)|A|(log|A| - (n/d) log l_d) / (2 log(m_d/l_d))`, when `m_d > l_d`.
    pub refined: Option<f64>,
    /// `C(n-1,d-1)|A| log|A| / 2`.
    pub default_bound: f64,
    /// `C(n,d)|A| / 2`.
    pub trivial: f64,
    /// `|A| < m_d^{n/d}`, decided exactly.
    pub useful: bool,
    /// `C(n-1,d-1) log|A| >= C(n,d) log l_d + (2|E_d|/|A|) log(m_d/l_d)`.
    pub han_step: Check,
    /// `|E_d|` against each bound that is present.
    pub checks: Vec<Check>,
}

impl BoundReport {
    pub fn holds(&self) -> bool {
        self.han_step.holds && self.checks.iter().all(|c| c.holds)
    }
}

/// `|A|^d < m^n` in exact arithmetic.
pub fn is_useful(card: u64, m: u64, n: usize, d: usize) -> bool {
    BigUint::from(card).pow(d as u32) < BigUint::from(m).pow(n as u32)
}

pub fn bound_report(
    a: &CodeSet,
    d: usize,
    overrides: Option<Overrides>,
    tol: f64,
) -> Result<BoundReport> {
    let stats = edge_counts(a, d)?;
    bound_report_from(a, &stats, d, overrides, tol)
}

/// As [`bound_report`], reusing edge counts computed for some `tau >= d`.
pub fn bound_report_from(
    a: &CodeSet,
    stats: &GraphStats,
    d: usize,
    overrides: Option<Overrides>,
    tol: f64,
) -> Result<BoundReport> {
    a.check_radius(d, "d")?;
    if stats.tau < d || stats.n != a.n || stats.card != a.len() as u64 {
        return Err(Error::domain("graph statistics do not match the code set"));
    }
    let card = a.len() as u64;
    let found = compute_constants(a, d)?;
    let (m, l) = match overrides {
        None => (found.m.value, found.l.value),
        Some(o) => {
            if o.m < 2 || o.m > m_cap(card, d) || o.l < 1 || o.l > l_cap(card, d) {
                return Err(Error::precondition(format!(
                    "override m_d={}, l_d={} outside 2..={} and 1..={}",
                    o.m,
                    o.l,
                    m_cap(card, d),
                    l_cap(card, d)
                )));
            }
            if o.m > found.m.value || o.l > found.l.value {
                return Err(Error::precondition(format!(
                    "override m_d={}, l_d={} exceeds the attained m_d={}, l_d={}",
                    o.m, o.l, found.m.value, found.l.value
                )));
            }
            (o.m, o.l)
        }
    };
    let (n32, d32) = (a.n as u32, d as u32);
    let c_nd = binom_f64(n32, d32);
    let c_low = binom_f64(n32 - 1, d32 - 1);
    let size = card as f64;
    let log_a = size.log2();
    let (lm, ll) = ((m as f64).log2(), (l as f64).log2());
    let ratio = a.n as f64 / d as f64;
    let exact = stats.edge_counts[d - 1];
    let e = exact as f64;

    let refined = (m > l).then(|| c_low * size * (log_a - ratio * ll) / (2.0 * (lm - ll)));
    let default_bound = 0.5 * c_low * size * log_a;
    let trivial = 0.5 * c_nd * size;
    let han_step = Check::ge(
        "counting step",
        c_low * log_a,
        c_nd * ll + 2.0 * e / size * (lm - ll),
        tol,
    );
    let mut checks = Vec::with_capacity(3);
    if let Some(r) = refined {
        checks.push(Check::le("edges <= refined", e, r, tol));
    }
    checks.push(Check::le("edges <= default", e, default_bound, tol));
    checks.push(Check::le("edges <= trivial", e, trivial, tol));
    Ok(BoundReport {
        d,
        m_d: m,
        l_d: l,
        m_vacuous: overrides.is_none() && found.m.vacuous,
        l_vacuous: overrides.is_none() && found.l.vacuous,
        exact_count: exact,
        refined,
        default_bound,
        trivial,
        useful: is_useful(card, m, a.n, d),
        han_step,
        checks,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TotalBound {
    pub tau: usize,
    pub total_edges: u64,
    /// `(1/2) Σ_{d<=τ} C(n-1,d-1)|A| log|A|`.
    pub sum_form: f64,
    /// `(1/2) 2^{(n-1) H_b((τ-1)/(n-1))} |A| log|A|`, when `2τ <= n + 1`.
    pub entropy_form: Option<f64>,
    pub checks: Vec<Check>,
}

impl TotalBound {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

pub fn total_edge_bound(a: &CodeSet, tau: usize, tol: f64) -> Result<TotalBound> {
    let stats = edge_counts(a, tau)?;
    total_edge_bound_from(a, &stats, tol)
}

pub fn total_edge_bound_from(a: &CodeSet, stats: &GraphStats, tol: f64) -> Result<TotalBound> {
    let tau = stats.tau;
    a.check_radius(tau, "tau")?;
    let n = a.n;
    let size = a.len() as f64;
    let base = 0.5 * size * size.log2();
    let weight: f64 = (1..=tau)
        .map(|d| binom_f64(n as u32 - 1, d as u32 - 1))
        .sum();
    let sum_form = weight * base;
    let entropy_form = (2 * tau <= n + 1).then(|| {
        let p = if tau == 1 {
            0.0
        } else {
            (tau - 1) as f64 / (n - 1) as f64
        };
        ((n - 1) as f64 * hb(p)).exp2() * base
    });
    let total = stats.total_edges();
    let mut checks = vec![Check::le("edges <= sum form", total as f64, sum_form, tol)];
    if let Some(ent) = entropy_form {
        checks.push(Check::le("sum form <= entropy form", sum_form, ent, tol));
    }
    Ok(TotalBound {
        tau,
        total_edges: total,
        sum_form,
        entropy_form,
        checks,
    })
}

/// Average over `d`-subsets of coordinates of the probability that flipping
/// them at a uniform point changes membership in `A`.
pub fn influence(a: &CodeSet, d: usize) -> Result<f64> {
    let stats = edge_counts(a, d)?;
    Ok(influence_from(a, &stats, d))
}

fn influence_from(a: &CodeSet, stats: &GraphStats, d: usize) -> f64 {
    let denom = ((a.n - 1) as f64).exp2() * binom_f64(a.n as u32, d as u32);
    stats.boundary_counts[d - 1] as f64 / denom
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InfluenceBounds {
    pub d: usize,
    pub exact: f64,
    /// Present when `m_d > l_d`.
    pub refined_lb: Option<f64>,
    pub default_lb: f64,
    pub checks: Vec<Check>,
}

impl InfluenceBounds {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

pub fn influence_bounds(
    a: &CodeSet,
    d: usize,
    overrides: Option<Overrides>,
    tol: f64,
) -> Result<InfluenceBounds> {
    let stats = edge_counts(a, d)?;
    let report = bound_report_from(a, &stats, d, overrides, tol)?;
    Ok(influence_bounds_from(a, &stats, &report, tol))
}

/// As [`influence_bounds`], from previously computed statistics and constants.
pub fn influence_bounds_from(
    a: &CodeSet,
    stats: &GraphStats,
    report: &BoundReport,
    tol: f64,
) -> InfluenceBounds {
    let d = report.d;
    let exact = influence_from(a, stats, d);
    let p = a.density();
    let lead = d as f64 / a.n as f64 * (1.0 / p).log2();
    let (m, l) = (report.m_d as f64, report.l_d as f64);
    let refined_lb = (report.m_d > report.l_d)
        .then(|| 2.0 * p * (lead - ((d as f64).exp2() / m).log2()) / (m / l).log2());
    let default_lb = 2.0 * p * (lead + 1.0 - d as f64);
    let mut checks = Vec::with_capacity(2);
    if let Some(r) = refined_lb {
        checks.push(Check::ge("influence >= refined", exact, r, tol));
    }
    checks.push(Check::ge("influence >= default", exact, default_lb, tol));
    InfluenceBounds {
        d,
        exact,
        refined_lb,
        default_lb,
        checks,
    }
}

/// Union of random axis-aligned subcubes of dimension `d_max`, closed so that
/// any two words at distance `d <= d_max` span a subcube inside the set.
pub fn subcube_family(n: usize, d_max: usize, seed: u64) -> Result<CodeSet> {
    if n == 0 || n > DENSE_DIM {
        return Err(Error::domain(format!(
            "subcube families need 1 <= n <= {DENSE_DIM}"
        )));
    }
    if d_max > n {
        return Err(Error::domain(format!("d_max={d_max} exceeds n={n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cubes = if d_max == 0 {
        1
    } else {
        rng.random_range(1..=3)
    };
    let mut set = BTreeSet::new();
    for _ in 0..cubes {
        let base: Mask = rng.random_range(0..1u32 << n);
        let free = random_coords(&mut rng, n, d_max);
        set.extend(subcube(base, free));
    }
    if d_max > 0 {
        close_subcubes(&mut set, d_max);
    }
    CodeSet::new(n, set.into_iter().collect())
}

fn random_coords(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Mask {
    let mut coords: Vec<usize> = (0..n).collect();
    for i in 0..d {
        let j = rng.random_range(i..n);
        coords.swap(i, j);
    }
    coords[..d].iter().fold(0, |m, &c| m | 1 << c)
}

/// All words that agree with `base` outside `free`.
fn subcube(base: Mask, free: Mask) -> impl Iterator<Item = Mask> {
    let fixed = base & !free;
    let mut sub = free;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let w = fixed | sub;
        if sub == 0 {
            done = true;
        } else {
            sub = (sub - 1) & free;
        }
        Some(w)
    })
}

fn close_subcubes(set: &mut BTreeSet<Mask>, d_max: usize) {
    loop {
        let words: Vec<Mask> = set.iter().copied().collect();
        let mut added = Vec::new();
        for (i, &x) in words.iter().enumerate() {
            for &y in &words[i + 1..] {
                let diff = x ^ y;
                if diff.count_ones() as usize <= d_max {
                    added.extend(subcube(x, diff).filter(|w| !set.contains(w)));
                }
            }
        }
        if added.is_empty() {
            return;
        }
        set.extend(added);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyIdentity {
    /// `Σ_k (H(X) - H(X with coordinate k erased))`, `X` uniform on `A`.
    pub lhs: f64,
    /// `2|E_1| / |A|`.
    pub rhs: f64,
    pub holds: bool,
}

pub fn d1_entropy_identity(a: &CodeSet, tol: f64) -> EntropyIdentity {
    let card = a.len() as u64;
    let h = (card as f64).log2();
    let lhs: f64 = (0..a.n)
        .map(|k| {
            let keep: Mask = !(1 << k);
            let mut buckets: HashMap<Mask, u64> = HashMap::new();
            for &w in a.words() {
                *buckets.entry(w & keep).or_default() += 1;
            }
            let mut counts: Vec<u64> = buckets.into_values().collect();
            counts.sort_unstable();
            h - entropy_from_counts(counts, card)
        })
        .sum();
    let stats = edge_counts(a, 1).expect("n >= 1");
    let rhs = 2.0 * stats.edge_counts[0] as f64 / card as f64;
    EntropyIdentity {
        lhs,
        rhs,
        holds: tol::approx_eq(lhs, rhs, tol),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(n: usize, words: &[Mask]) -> CodeSet {
        CodeSet::new(n, words.to_vec()).unwrap()
    }

    #[test]
    fn canonical_form() {
        let a = set(3, &[5, 1, 5, 3]);
        assert_eq!(a.words(), &[1, 3, 5]);
        assert!(CodeSet::new(3, vec![8]).is_err());
        assert!(CodeSet::new(0, vec![0]).is_err());
        assert!(CodeSet::new(31, vec![0]).is_err());
        assert!(CodeSet::new(2, vec![]).is_err());
    }

    #[test]
    fn edge_examples() {
        let cube = CodeSet::full_cube(2).unwrap();
        let s = edge_counts(&cube, 2).unwrap();
        assert_eq!(s.edge_counts, vec![4, 2]);
        assert_eq!(s.boundary_counts, vec![0, 0]);

        // {111, 11-1, 1-11}: coordinate 1 is bit 0
        let a = set(3, &[0b111, 0b011, 0b101]);
        let s = edge_counts(&a, 2).unwrap();
        assert_eq!(s.edge_counts, vec![2, 1]);

        let single = set(4, &[6]);
        let s = edge_counts(&single, 4).unwrap();
        assert_eq!(s.edge_counts, vec![0; 4]);
        assert_eq!(s.boundary_counts, vec![4, 6, 4, 1]);
        assert!(edge_counts(&single, 0).is_err());
        assert!(edge_counts(&single, 5).is_err());
    }

    #[test]
    fn strategies_agree() {
        let a = set(6, &[0, 1, 3, 7, 12, 33, 40, 41, 63, 62, 17]);
        for tau in 1..=6 {
            let p = edge_counts_with(&a, tau, EdgeStrategy::Pairs, Exec::Sequential).unwrap();
            let f = edge_counts_with(&a, tau, EdgeStrategy::Flips, Exec::Parallel).unwrap();
            assert_eq!(p, f);
        }
    }

    #[test]
    fn sparse_large_dimension() {
        let a = set(30, &[0, 1, 3, (1 << 30) - 1]);
        let s = edge_counts(&a, 2).unwrap();
        assert_eq!(s.edge_counts, vec![2, 1]);
        let c = compute_constants(&a, 1).unwrap();
        assert_eq!(c.m.value, 2);
        assert_eq!(c.l.value, 1);
    }

    #[test]
    fn constants_examples() {
        let a = set(3, &[0b111, 0b011]);
        let c = compute_constants(&a, 1).unwrap();
        assert_eq!(
            c.m,
            Constant {
                value: 2,
                vacuous: false
            }
        );
        assert_eq!(
            c.l,
            Constant {
                value: 1,
                vacuous: false
            }
        );

        let cube = CodeSet::full_cube(4).unwrap();
        for d in 1..=4 {
            let c = compute_constants(&cube, d).unwrap();
            assert_eq!(c.m.value, 1 << d);
            assert!(c.l.vacuous);
        }

        let single = set(3, &[2]);
        let c = compute_constants(&single, 2).unwrap();
        assert!(c.m.vacuous);
        assert_eq!(c.m.value, 2);
        assert_eq!(
            c.l,
            Constant {
                value: 1,
                vacuous: false
            }
        );
    }

    #[test]
    fn d1_refined_is_half_a_log_a() {
        let a = set(4, &[0, 1, 2, 3, 5, 8, 15]);
        let r = bound_report(&a, 1, None, 1e-9).unwrap();
        assert_eq!((r.m_d, r.l_d), (2, 1));
        let want = 0.5 * 7.0 * 7f64.log2();
        assert!((r.refined.unwrap() - want).abs() < 1e-12);
        assert!(r.holds());
    }

    #[test]
    fn full_cube_is_not_useful() {
        for n in 1..=5 {
            let cube = CodeSet::full_cube(n).unwrap();
            for d in 1..=n {
                let r = bound_report(&cube, d, None, 1e-9).unwrap();
                assert!(!r.useful);
                let refined = r.refined.unwrap();
                assert!((refined - r.trivial).abs() <= 1e-9 * r.trivial);
                assert_eq!(r.exact_count as f64, r.trivial);
                assert!(r.holds());
            }
        }
    }

    #[test]
    fn overrides_are_validated() {
        let a = set(3, &[0b111, 0b011]);
        assert!(bound_report(&a, 1, Some(Overrides { m: 2, l: 1 }), 1e-9).is_ok());
        let err = bound_report(&a, 1, Some(Overrides { m: 3, l: 1 }), 1e-9).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        let sq = subcube_family(5, 2, 9).unwrap();
        let r = bound_report(&sq, 2, Some(Overrides { m: 4, l: 1 }), 1e-9).unwrap();
        let size = sq.len() as f64;
        let want = 0.5 * 10.0 * size * size.log2() / 5.0;
        assert!((r.refined.unwrap() - want).abs() < 1e-9);
    }

    #[test]
    fn total_bound_examples() {
        let a = set(11, &[0, 1, 2, 4, 8, 16, 1023, 2047]);
        let t = total_edge_bound(&a, 1, 1e-9).unwrap();
        let base = 0.5 * 8.0 * 3.0;
        assert!((t.sum_form - base).abs() < 1e-12);
        assert!((t.entropy_form.unwrap() - base).abs() < 1e-12);
        let t = total_edge_bound(&a, 6, 1e-9).unwrap();
        assert!((t.entropy_form.unwrap() - 1024.0 * base).abs() < 1e-9);
        assert!(t.holds());
        assert!(total_edge_bound(&a, 7, 1e-9)
            .unwrap()
            .entropy_form
            .is_none());
        let one = set(5, &[3]);
        let t = total_edge_bound(&one, 2, 1e-9).unwrap();
        assert_eq!((t.sum_form, t.total_edges), (0.0, 0));
        let tiny = set(1, &[0, 1]);
        assert!(total_edge_bound(&tiny, 1, 1e-9)
            .unwrap()
            .entropy_form
            .is_some());
    }

    #[test]
    fn dictator_influence() {
        for n in 1..=6 {
            let a = CodeSet::dictator(n, 1).unwrap();
            let i = influence(&a, 1).unwrap();
            assert!((i - 1.0 / n as f64).abs() < 1e-12);
            let b = influence_bounds(&a, 1, None, 1e-12).unwrap();
            assert!((b.default_lb - 1.0 / n as f64).abs() < 1e-12);
            assert!(b.holds());
        }
    }

    #[test]
    fn full_cube_influence() {
        let cube = CodeSet::full_cube(4).unwrap();
        for d in 1..=4 {
            let b = influence_bounds(&cube, d, None, 1e-9).unwrap();
            assert_eq!(b.exact, 0.0);
            assert!(b.default_lb <= 0.0);
            assert!(b.holds());
        }
    }

    #[test]
    fn subcube_families() {
        let s = subcube_family(6, 0, 3).unwrap();
        assert_eq!(s.len(), 1);
        let a = subcube_family(6, 2, 1).unwrap();
        assert_eq!(a, subcube_family(6, 2, 1).unwrap());
        for d in 1..=2 {
            let c = compute_constants(&a, d).unwrap();
            assert_eq!(c.m.value, 1 << d);
        }
    }

    #[test]
    fn entropy_identity_examples() {
        let cube = CodeSet::full_cube(3).unwrap();
        let e = d1_entropy_identity(&cube, 1e-12);
        assert!((e.lhs - 3.0).abs() < 1e-12 && (e.rhs - 3.0).abs() < 1e-12);
        let one = set(4, &[9]);
        let e = d1_entropy_identity(&one, 1e-12);
        assert_eq!((e.lhs, e.rhs), (0.0, 0.0));
        let a = set(5, &[0, 1, 3, 7, 9, 22, 31]);
        assert!(d1_entropy_identity(&a, 1e-12).holds);
    }

    #[test]
    fn usefulness_is_exact() {
        assert!(!is_useful(8, 2, 3, 1));
        assert!(is_useful(7, 2, 3, 1));
        assert!(is_useful(15, 4, 4, 2));
        assert!(!is_useful(16, 4, 4, 2));
    }
}
