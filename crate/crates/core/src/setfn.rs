//! Set functions over a small ground set, stored as dense tables.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exec::{Exec, CHUNK};
use crate::tol::Check;
use crate::{Error, Mask, Result};

pub const DEFAULT_MAX_N: usize = 24;

/// Hard ceiling imposed by the 32-bit masks, whatever the environment says.
const ABSOLUTE_MAX_N: usize = 30;

/// Environment variable that overrides the size caps of this crate.
pub const MAX_N_ENV: &str = "SUBMODKIT_MAX_N";

pub(crate) fn cap_from_env(default: usize) -> usize {
    std::env::var(MAX_N_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map(|v| v.clamp(1, ABSOLUTE_MAX_N))
        .unwrap_or(default)
}

/// Largest accepted ground-set size (24 unless overridden by `SUBMODKIT_MAX_N`).
pub fn max_ground_size() -> usize {
    cap_from_env(DEFAULT_MAX_N)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundSet {
    labels: Vec<String>,
}

impl GroundSet {
    /// Ground set `{1, ..., n}` labelled by 1-based indices.
    pub fn new(n: usize) -> Result<Self> {
        Self::with_labels((1..=n).map(|i| i.to_string()).collect())
    }

    pub fn with_labels(labels: Vec<String>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::domain("ground set must be non-empty"));
        }
        if n > max_ground_size() {
            return Err(Error::domain(format!(
                "ground set of size {n} exceeds the cap {} (set {MAX_N_ENV} to override)",
                max_ground_size()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(Error::domain(format!("duplicate label {l:?}")));
            }
        }
        Ok(GroundSet { labels })
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn full(&self) -> Mask {
        full_mask(self.size())
    }

    pub fn contains(&self, subset: Mask) -> bool {
        subset & !self.full() == 0
    }

    /// Renders a subset as `{a,b,c}` using the element labels.
    pub fn render(&self, subset: Mask) -> String {
        let names: Vec<&str> = (0..self.size())
            .filter(|&i| subset >> i & 1 == 1)
            .map(|i| self.labels[i].as_str())
            .collect();
        format!("{{{}}}", names.join(","))
    }

    fn restricted(&self, domain: Mask) -> Result<GroundSet> {
        let labels = (0..self.size())
            .filter(|&i| domain >> i & 1 == 1)
            .map(|i| self.labels[i].clone())
            .collect();
        GroundSet::with_labels(labels)
    }
}

pub(crate) fn full_mask(n: usize) -> Mask {
    if n >= 32 {
        Mask::MAX
    } else {
        ((1u64 << n) - 1) as Mask
    }
}

/// Spreads the low bits of `compact` onto the set bits of `domain`.
pub(crate) fn deposit(compact: Mask, domain: Mask) -> Mask {
    let mut out = 0;
    let mut rest = domain;
    let mut k = 0;
    while rest != 0 {
        let bit = rest & rest.wrapping_neg();
        if compact >> k & 1 == 1 {
            out |= bit;
        }
        rest ^= bit;
        k += 1;
    }
    out
}

/// A real-valued function on all subsets of a ground set.
///
/// `values[b]` is `f(S_b)` where bit `i` of `b` marks element `i`. The value on
/// the empty set is stored like any other entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetFunction {
    ground: GroundSet,
    values: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Predicate {
    Submodular,
    Supermodular,
    MonotoneIncreasing,
    Subadditive,
    RankFunction,
    Nonnegative,
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Predicate::Submodular => "submodular",
            Predicate::Supermodular => "supermodular",
            Predicate::MonotoneIncreasing => "monotonically increasing",
            Predicate::Subadditive => "subadditive",
            Predicate::RankFunction => "rank function",
            Predicate::Nonnegative => "nonnegative",
        };
        f.write_str(s)
    }
}

/// The configuration at which a predicate is violated the most.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// `f(S+i) + f(S+j) >= f(S+i+j) + f(S)` fails.
    Pair { base: Mask, i: usize, j: usize },
    /// `f(S) <= f(S+i)` fails.
    Extension { base: Mask, elem: usize },
    /// A two-set condition over `(S, T)` fails.
    Sets { s: Mask, t: Mask },
    /// A condition on a single subset fails (e.g. a negative value).
    Subset { set: Mask },
}

impl Witness {
    pub fn describe(&self, ground: &GroundSet) -> String {
        let label = |i: usize| ground.labels()[i].as_str();
        match *self {
            Witness::Pair { base, i, j } => {
                format!("S={}, i={}, j={}", ground.render(base), label(i), label(j))
            }
            Witness::Extension { base, elem } => {
                format!("S={}, i={}", ground.render(base), label(elem))
            }
            Witness::Sets { s, t } => format!("S={}, T={}", ground.render(s), ground.render(t)),
            Witness::Subset { set } => format!("S={}", ground.render(set)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub predicate: Predicate,
    pub holds: bool,
    /// Largest shortfall over all checked conditions; non-positive when every
    /// condition holds exactly.
    pub worst_violation: f64,
    /// Worst violating configuration, present only when `holds` is false.
    pub witness: Option<Witness>,
}

/// Running maximum that keeps the earliest configuration on ties.
#[derive(Clone, Copy)]
struct Worst {
    shortfall: f64,
    witness: Option<Witness>,
}

impl Worst {
    const NONE: Worst = Worst {
        shortfall: f64::NEG_INFINITY,
        witness: None,
    };

    fn offer(&mut self, shortfall: f64, witness: Witness) {
        if shortfall > self.shortfall {
            self.shortfall = shortfall;
            self.witness = Some(witness);
        }
    }

    fn merge(parts: Vec<Worst>) -> Worst {
        let mut acc = Worst::NONE;
        for p in parts {
            if p.shortfall > acc.shortfall {
                acc = p;
            }
        }
        acc
    }

    fn verdict(self, predicate: Predicate, allowance: f64) -> Verdict {
        let shortfall = if self.witness.is_none() {
            0.0
        } else {
            self.shortfall
        };
        let holds = shortfall <= allowance;
        Verdict {
            predicate,
            holds,
            worst_violation: shortfall,
            witness: if holds { None } else { self.witness },
        }
    }
}

impl SetFunction {
    pub fn new(ground: GroundSet, values: Vec<f64>) -> Result<Self> {
        let expected = 1usize << ground.size();
        if values.len() != expected {
            return Err(Error::domain(format!(
                "set function on {} elements needs {expected} values, got {}",
                ground.size(),
                values.len()
            )));
        }
        if let Some(b) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::domain(format!(
                "value at {} is not finite",
                ground.render(b as Mask)
            )));
        }
        Ok(SetFunction { ground, values })
    }

    pub fn from_fn(ground: GroundSet, f: impl Fn(Mask) -> f64) -> Result<Self> {
        let values = (0..1u64 << ground.size()).map(|b| f(b as Mask)).collect();
        Self::new(ground, values)
    }

    /// `f(T) = |T|` on `{1..n}`.
    pub fn cardinality(n: usize) -> Result<Self> {
        Self::from_fn(GroundSet::new(n)?, |b| f64::from(b.count_ones()))
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn n(&self) -> usize {
        self.ground.size()
    }

    pub fn full(&self) -> Mask {
        self.ground.full()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn evaluate(&self, subset: Mask) -> Result<f64> {
        self.values.get(subset as usize).copied().ok_or_else(|| {
            Error::domain(format!(
                "bitmask {subset:#b} is outside a ground set of {} elements",
                self.n()
            ))
        })
    }

    /// Unchecked lookup; panics on an out-of-range mask.
    #[inline]
    pub fn get(&self, subset: Mask) -> f64 {
        self.values[subset as usize]
    }

    pub fn negated(&self) -> SetFunction {
        SetFunction {
            ground: self.ground.clone(),
            values: self.values.iter().map(|v| -v).collect(),
        }
    }

    fn value_scale(&self) -> f64 {
        self.values.iter().fold(1f64, |m, v| m.max(v.abs()))
    }

    /// Restriction of `f` to the subsets of `domain`, re-indexed over a ground
    /// set made of the elements of `domain` (in their original order).
    pub fn restrict(&self, domain: Mask) -> Result<SetFunction> {
        if !self.ground.contains(domain) || domain == 0 {
            return Err(Error::domain(format!(
                "restriction domain {domain:#b} must be a non-empty subset of the ground set"
            )));
        }
        let ground = self.ground.restricted(domain)?;
        Self::from_fn(ground, |s| self.get(deposit(s, domain)))
    }

    /// Local pair check: for every `S` and `i < j` outside `S`,
    /// `f(S+i) + f(S+j) >= f(S+i+j) + f(S)` up to `tol * max(1, max|f|)`.
    pub fn is_submodular(&self, tol: f64) -> Verdict {
        self.is_submodular_with(tol, Exec::default())
    }

    pub fn is_submodular_with(&self, tol: f64, exec: Exec) -> Verdict {
        self.local_pair_scan(tol, exec, Predicate::Submodular, 1.0)
    }

    pub fn is_supermodular(&self, tol: f64) -> Verdict {
        self.is_supermodular_with(tol, Exec::default())
    }

    pub fn is_supermodular_with(&self, tol: f64, exec: Exec) -> Verdict {
        self.local_pair_scan(tol, exec, Predicate::Supermodular, -1.0)
    }

    fn local_pair_scan(&self, tol: f64, exec: Exec, predicate: Predicate, sign: f64) -> Verdict {
        let n = self.n();
        let v = &self.values;
        let parts = exec.map_chunks(v.len(), CHUNK, |range| {
            let mut worst = Worst::NONE;
            for s in range {
                let s = s as Mask;
                for i in 0..n {
                    let bi = 1 << i;
                    if s & bi != 0 {
                        continue;
                    }
                    for j in i + 1..n {
                        let bj = 1 << j;
                        if s & bj != 0 {
                            continue;
                        }
                        let lhs = v[(s | bi) as usize] + v[(s | bj) as usize];
                        let rhs = v[(s | bi | bj) as usize] + v[s as usize];
                        worst.offer(sign * (rhs - lhs), Witness::Pair { base: s, i, j });
                    }
                }
            }
            worst
        });
        Worst::merge(parts).verdict(predicate, tol * self.value_scale())
    }

    /// `f(S) <= f(S+i)` for every `S` and `i` outside `S`.
    pub fn is_monotone_increasing(&self, tol: f64) -> Verdict {
        self.is_monotone_increasing_with(tol, Exec::default())
    }

    pub fn is_monotone_increasing_with(&self, tol: f64, exec: Exec) -> Verdict {
        let n = self.n();
        let v = &self.values;
        let parts = exec.map_chunks(v.len(), CHUNK, |range| {
            let mut worst = Worst::NONE;
            for s in range {
                let s = s as Mask;
                for elem in 0..n {
                    if s >> elem & 1 == 0 {
                        let grown = v[(s | 1 << elem) as usize];
                        worst.offer(v[s as usize] - grown, Witness::Extension { base: s, elem });
                    }
                }
            }
            worst
        });
        Worst::merge(parts).verdict(Predicate::MonotoneIncreasing, tol * self.value_scale())
    }

    /// `f(S ∪ T) <= f(S) + f(T)` over all unordered pairs (quadratic in `2^n`).
    pub fn is_subadditive(&self, tol: f64) -> Verdict {
        let v = &self.values;
        let parts = Exec::default().map_chunks(v.len(), 64, |range| {
            let mut worst = Worst::NONE;
            for s in range {
                for t in s..v.len() {
                    let shortfall = v[s | t] - v[s] - v[t];
                    worst.offer(
                        shortfall,
                        Witness::Sets {
                            s: s as Mask,
                            t: t as Mask,
                        },
                    );
                }
            }
            worst
        });
        Worst::merge(parts).verdict(Predicate::Subadditive, tol * self.value_scale())
    }

    pub fn is_nonnegative(&self, tol: f64) -> Verdict {
        let mut worst = Worst::NONE;
        for (b, &v) in self.values.iter().enumerate() {
            worst.offer(-v, Witness::Subset { set: b as Mask });
        }
        worst.verdict(Predicate::Nonnegative, tol * self.value_scale())
    }

    /// Submodular, monotonically increasing and `|f(∅)| <= tol`.
    ///
    /// The witness comes from the first failing component in that order.
    pub fn is_rank_function(&self, tol: f64) -> Verdict {
        let sub = self.is_submodular(tol);
        let mono = self.is_monotone_increasing(tol);
        let empty = self.values[0].abs();
        let empty_ok = empty <= tol;
        let witness = if !sub.holds {
            sub.witness
        } else if !mono.holds {
            mono.witness
        } else if !empty_ok {
            Some(Witness::Subset { set: 0 })
        } else {
            None
        };
        Verdict {
            predicate: Predicate::RankFunction,
            holds: sub.holds && mono.holds && empty_ok,
            worst_violation: sub.worst_violation.max(mono.worst_violation).max(empty),
            witness,
        }
    }

    /// Errors unless `|f(∅)| <= tol`.
    pub fn require_zero_at_empty(&self, tol: f64) -> Result<()> {
        let v = self.values[0];
        if v.abs() > tol {
            return Err(Error::precondition(format!("f(∅) must be 0, found {v}")));
        }
        Ok(())
    }
}

/// A finite collection of subsets of a ground set; repeats are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetFamily {
    ground: GroundSet,
    members: Vec<Mask>,
}

impl SubsetFamily {
    pub fn new(ground: GroundSet, members: Vec<Mask>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::domain("a subset family needs at least one member"));
        }
        if let Some(m) = members.iter().find(|&&m| !ground.contains(m)) {
            return Err(Error::domain(format!(
                "member {m:#b} is not a subset of a ground set of {} elements",
                ground.size()
            )));
        }
        Ok(SubsetFamily { ground, members })
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn members(&self) -> &[Mask] {
        &self.members
    }

    /// Number of members containing each element.
    pub fn degree_profile(&self) -> Vec<usize> {
        (0..self.ground.size())
            .map(|i| self.members.iter().filter(|&&m| m >> i & 1 == 1).count())
            .collect()
    }

    /// Whether the members are totally ordered by inclusion.
    pub fn is_chain(&self) -> bool {
        let mut sorted = self.members.clone();
        sorted.sort_by_key(|m| m.count_ones());
        sorted.windows(2).all(|w| w[0] & !w[1] == 0)
    }

    pub fn sum_of(&self, f: &SetFunction) -> f64 {
        self.members.iter().map(|&m| f.get(m)).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShearerPart {
    /// Target is the whole ground set; needs `f` nonnegative and submodular.
    A,
    /// Target is a proper subset; needs `f` to be a rank function.
    B,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShearerReport {
    pub part: ShearerPart,
    /// Whether `f` satisfies the hypothesis of the applicable part.
    pub hypothesis_holds: bool,
    pub d: usize,
    pub target: Mask,
    /// `Σ_j f(S_j) >= d f(target)`.
    pub check: Check,
}

/// Generalized Shearer inequality `Σ_j f(S_j) >= d · f(target)`.
///
/// Every element of `target` must lie in at least `d` members of `family`.
pub fn shearer_check(
    f: &SetFunction,
    family: &SubsetFamily,
    d: usize,
    target: Mask,
    tol: f64,
) -> Result<ShearerReport> {
    if d == 0 {
        return Err(Error::domain("cover multiplicity d must be at least 1"));
    }
    if family.ground() != f.ground() {
        return Err(Error::domain(
            "family and set function use different ground sets",
        ));
    }
    if !f.ground().contains(target) {
        return Err(Error::domain(format!(
            "target {target:#b} is outside the ground set"
        )));
    }
    let degrees = family.degree_profile();
    for (i, &deg) in degrees.iter().enumerate() {
        if target >> i & 1 == 1 && deg < d {
            return Err(Error::precondition(format!(
                "element {} of the target is covered by {deg} member(s), fewer than d={d}",
                f.ground().labels()[i]
            )));
        }
    }
    let (part, hypothesis_holds) = if target == f.full() {
        let ok = f.is_nonnegative(tol).holds && f.is_submodular(tol).holds;
        (ShearerPart::A, ok)
    } else {
        (ShearerPart::B, f.is_rank_function(tol).holds)
    };
    let lhs = family.sum_of(f);
    let rhs = d as f64 * f.get(target);
    Ok(ShearerReport {
        part,
        hypothesis_holds,
        d,
        target,
        check: Check::ge("generalized Shearer", lhs, rhs, tol),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Uncrossing {
    /// Members in increasing inclusion order.
    pub chain: SubsetFamily,
    /// Positions `(p, q)` in the working sequence replaced by their
    /// intersection (at `p`) and union (at `q`), in the order applied.
    pub steps: Vec<(usize, usize)>,
}

/// Replaces incomparable pairs by their intersection and union until the
/// family is a chain.
///
/// The order is inductive: the first `l` members are turned into a chain, the
/// next member is merged against the top of that chain, and the prefix is
/// processed again. The degree profile is unchanged by every step, and for a
/// submodular `f` the sum `Σ f(S_j)` never increases.
pub fn uncross_to_chain(family: &SubsetFamily) -> Result<Uncrossing> {
    let mut work = family.members().to_vec();
    let n = family.ground().size() as u32;
    // Each step raises Σ|S_j|² by at least 2, so M·n² steps always suffice.
    let cap = 4usize
        .saturating_pow(n)
        .max(work.len().saturating_mul((n * n) as usize));
    let mut steps = Vec::new();
    settle(&mut work, &mut steps, cap)?;
    Ok(Uncrossing {
        chain: SubsetFamily::new(family.ground().clone(), work)?,
        steps,
    })
}

fn settle(work: &mut [Mask], steps: &mut Vec<(usize, usize)>, cap: usize) -> Result<()> {
    let len = work.len();
    if len <= 1 {
        return Ok(());
    }
    settle(&mut work[..len - 1], steps, cap)?;
    let top = work[len - 2];
    let next = work[len - 1];
    if top & !next == 0 {
        return Ok(());
    }
    if next & !top == 0 {
        // comparable: slide the smaller set below the top and re-settle
        work.swap(len - 2, len - 1);
        return settle(&mut work[..len - 1], steps, cap);
    }
    if steps.len() >= cap {
        return Err(Error::domain(format!(
            "uncrossing did not reach a chain within {cap} steps"
        )));
    }
    steps.push((len - 2, len - 1));
    work[len - 2] = top & next;
    work[len - 1] = top | next;
    settle(&mut work[..len - 1], steps, cap)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(elems: &[usize]) -> Mask {
        elems.iter().map(|e| 1 << (e - 1)).sum()
    }

    #[test]
    fn evaluate_cardinality() {
        let f = SetFunction::cardinality(3).unwrap();
        assert_eq!(f.evaluate(set(&[1, 3])).unwrap(), 2.0);
        assert_eq!(f.evaluate(0).unwrap(), 0.0);
        assert!(matches!(f.evaluate(8), Err(Error::Domain(_))));
    }

    #[test]
    fn table_length_and_finiteness_are_validated() {
        let g = GroundSet::new(2).unwrap();
        assert!(SetFunction::new(g.clone(), vec![0.0; 3]).is_err());
        assert!(SetFunction::new(g, vec![0.0, 1.0, f64::NAN, 0.0]).is_err());
        assert!(GroundSet::with_labels(vec!["a".into(), "a".into()]).is_err());
        assert!(GroundSet::new(0).is_err());
    }

    #[test]
    fn modular_is_submodular() {
        let f = SetFunction::cardinality(4).unwrap();
        let v = f.is_submodular(0.0);
        assert!(v.holds);
        assert_eq!(v.worst_violation, 0.0);
        assert!(f.is_supermodular(0.0).holds);
    }

    #[test]
    fn square_of_cardinality_is_not_submodular() {
        let f = SetFunction::from_fn(GroundSet::new(2).unwrap(), |b| {
            f64::from(b.count_ones()).powi(2)
        })
        .unwrap();
        let v = f.is_submodular(1e-9);
        assert!(!v.holds);
        assert_eq!(v.worst_violation, 2.0);
        assert_eq!(
            v.witness,
            Some(Witness::Pair {
                base: 0,
                i: 0,
                j: 1
            })
        );
        assert_eq!(v.witness.unwrap().describe(f.ground()), "S={}, i=1, j=2");
        assert!(f.is_supermodular(1e-9).holds);
    }

    #[test]
    fn uniform_matroid_rank() {
        let f = SetFunction::from_fn(GroundSet::new(3).unwrap(), |b| {
            f64::from(b.count_ones().min(1))
        })
        .unwrap();
        assert!(f.is_submodular(0.0).holds);
        assert!(f.is_rank_function(0.0).holds);
        assert!(f.is_subadditive(0.0).holds);
    }

    #[test]
    fn rank_requires_zero_at_empty() {
        let f = SetFunction::from_fn(GroundSet::new(2).unwrap(), |_| 1.0).unwrap();
        let v = f.is_rank_function(1e-9);
        assert!(!v.holds);
        assert_eq!(v.witness, Some(Witness::Subset { set: 0 }));
        assert!(f.require_zero_at_empty(1e-9).is_err());
    }

    #[test]
    fn monotone_witness() {
        let f = SetFunction::new(GroundSet::new(2).unwrap(), vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let v = f.is_monotone_increasing(1e-9);
        assert!(!v.holds);
        assert_eq!(v.witness, Some(Witness::Extension { base: 1, elem: 1 }));
    }

    #[test]
    fn restriction() {
        let f = SetFunction::cardinality(4).unwrap();
        let r = f.restrict(set(&[1, 2])).unwrap();
        assert_eq!(r, SetFunction::cardinality(2).unwrap());
        assert_eq!(f.restrict(f.full()).unwrap(), f);
        let g = SetFunction::from_fn(GroundSet::new(3).unwrap(), |b| b as f64).unwrap();
        let r = g.restrict(set(&[1, 3])).unwrap();
        assert_eq!(r.values(), &[0.0, 1.0, 4.0, 5.0]);
        assert_eq!(r.ground().labels(), &["1".to_string(), "3".to_string()]);
        assert!(g.restrict(0).is_err());
    }

    #[test]
    fn deposit_spreads_bits() {
        assert_eq!(deposit(0b11, 0b1010), 0b1010);
        assert_eq!(deposit(0b10, 0b1010), 0b1000);
        assert_eq!(deposit(0b01, 0b0110), 0b0010);
    }

    #[test]
    fn shearer_small_examples() {
        let f = SetFunction::cardinality(2).unwrap();
        let fam = SubsetFamily::new(f.ground().clone(), vec![set(&[1]), set(&[1, 2])]).unwrap();
        let r = shearer_check(&f, &fam, 1, set(&[1]), 1e-9).unwrap();
        assert_eq!(r.check.lhs, 3.0);
        assert_eq!(r.check.rhs, 1.0);
        assert!(r.check.holds);
        assert_eq!(r.part, ShearerPart::B);
        assert!(r.hypothesis_holds);
    }

    #[test]
    fn shearer_reports_uncovered_element() {
        let f = SetFunction::cardinality(3).unwrap();
        let fam = SubsetFamily::new(f.ground().clone(), vec![set(&[1, 2]), set(&[2])]).unwrap();
        let err = shearer_check(&f, &fam, 1, f.full(), 1e-9).unwrap_err();
        assert!(err.to_string().contains("element 3"), "{err}");
        let err = shearer_check(&f, &fam, 2, set(&[1, 2]), 1e-9).unwrap_err();
        assert!(err.to_string().contains("element 1"), "{err}");
        assert!(shearer_check(&f, &fam, 0, 0, 1e-9).is_err());
    }

    #[test]
    fn uncross_single_pair() {
        let g = GroundSet::new(3).unwrap();
        let fam = SubsetFamily::new(g, vec![set(&[1, 2]), set(&[2, 3])]).unwrap();
        let u = uncross_to_chain(&fam).unwrap();
        assert_eq!(u.chain.members(), &[set(&[2]), set(&[1, 2, 3])]);
        assert_eq!(u.steps, vec![(0, 1)]);
    }

    #[test]
    fn uncross_chain_is_unchanged() {
        let g = GroundSet::new(3).unwrap();
        let members = vec![set(&[1]), set(&[1, 2]), set(&[1, 2, 3])];
        let fam = SubsetFamily::new(g, members.clone()).unwrap();
        let u = uncross_to_chain(&fam).unwrap();
        assert_eq!(u.chain.members(), members.as_slice());
        assert!(u.steps.is_empty());
    }

    #[test]
    fn uncross_all_pairs_of_three() {
        let g = GroundSet::new(3).unwrap();
        let fam = SubsetFamily::new(g, vec![set(&[1, 2]), set(&[1, 3]), set(&[2, 3])]).unwrap();
        let u = uncross_to_chain(&fam).unwrap();
        assert!(u.chain.is_chain());
        assert_eq!(u.chain.members().len(), 3);
        assert_eq!(u.chain.degree_profile(), vec![2, 2, 2]);
        assert_eq!(u.chain.members(), &[0, 0b111, 0b111]);
        assert_eq!(u.steps.len(), 2);
    }

    #[test]
    fn chain_detection() {
        let g = GroundSet::new(3).unwrap();
        assert!(SubsetFamily::new(g.clone(), vec![7, 1, 3])
            .unwrap()
            .is_chain());
        assert!(!SubsetFamily::new(g.clone(), vec![1, 2]).unwrap().is_chain());
        assert!(SubsetFamily::new(g.clone(), vec![]).is_err());
        assert!(SubsetFamily::new(g, vec![8]).is_err());
    }
}
