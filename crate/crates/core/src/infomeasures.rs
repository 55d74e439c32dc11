//! Discrete joint distributions and Shannon measures in bits.
//!
//! All logarithms are base 2 and entropy power uses base-2 exponentiation, so
//! every quantity produced here is in bits (entropy power is dimensionless).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::exec::Exec;
use crate::setfn::{deposit, full_mask, GroundSet, SetFunction};
use crate::{Error, Mask, Result, DEFAULT_TOL};

/// Allowed deviation of the total probability mass from 1.
pub const MASS_TOL: f64 = 1e-12;

/// Threshold on pairwise conditional mutual information for the conditional
/// independence hypothesis of [`build_cond_mi_fn`].
pub const CI_THRESHOLD: f64 = 1e-6;

/// Largest support a distribution of integer sums may reach.
pub const MAX_SUM_SUPPORT: usize = 1_000_000;

/// Joint PMF of `n` discrete variables over a finite product alphabet.
///
/// Cells are stored in mixed radix with variable 0 varying fastest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JointPmf {
    sizes: Vec<usize>,
    probs: Vec<f64>,
    integer_values: Option<Vec<Vec<i64>>>,
}

impl JointPmf {
    pub fn new(sizes: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::domain("a PMF needs at least one variable"));
        }
        if sizes.len() > crate::setfn::max_ground_size() {
            return Err(Error::domain(format!(
                "{} variables exceed the cap {}",
                sizes.len(),
                crate::setfn::max_ground_size()
            )));
        }
        if sizes.contains(&0) {
            return Err(Error::domain("alphabet sizes must be at least 1"));
        }
        let cells = sizes
            .iter()
            .try_fold(1usize, |acc, &k| acc.checked_mul(k))
            .ok_or_else(|| Error::domain("alphabet product overflows"))?;
        if probs.len() != cells {
            return Err(Error::domain(format!(
                "expected {cells} probabilities, got {}",
                probs.len()
            )));
        }
        if let Some(p) = probs.iter().find(|p| !p.is_finite() || **p < 0.0) {
            return Err(Error::domain(format!("invalid probability {p}")));
        }
        let mass: f64 = probs.iter().sum();
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::domain(format!("probabilities sum to {mass}, not 1")));
        }
        Ok(JointPmf {
            sizes,
            probs,
            integer_values: None,
        })
    }

    /// Attaches an integer value to every alphabet index of every variable.
    pub fn with_integer_values(mut self, values: Vec<Vec<i64>>) -> Result<Self> {
        if values.len() != self.sizes.len()
            || values.iter().zip(&self.sizes).any(|(v, &k)| v.len() != k)
        {
            return Err(Error::domain(
                "integer values must list one integer per alphabet symbol of every variable",
            ));
        }
        self.integer_values = Some(values);
        Ok(self)
    }

    /// Product distribution of independent marginals.
    pub fn product(marginals: &[Vec<f64>]) -> Result<Self> {
        let sizes: Vec<usize> = marginals.iter().map(Vec::len).collect();
        let mut probs = vec![1.0];
        // variable 0 fastest: new variables multiply in as slower digits
        for m in marginals {
            probs = m
                .iter()
                .flat_map(|&q| probs.iter().map(move |&p| p * q))
                .collect();
        }
        Self::new(sizes, probs)
    }

    /// Single integer-valued variable taking `values[i]` with probability `probs[i]`.
    pub fn integer_variable(values: Vec<i64>, probs: Vec<f64>) -> Result<Self> {
        Self::new(vec![probs.len()], probs)?.with_integer_values(vec![values])
    }

    pub fn var_count(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn integer_values(&self) -> Option<&[Vec<i64>]> {
        self.integer_values.as_deref()
    }

    pub fn full(&self) -> Mask {
        full_mask(self.var_count())
    }

    /// Flat index of a cell given per-variable alphabet indices.
    pub fn index_of(&self, cell: &[usize]) -> Result<usize> {
        if cell.len() != self.var_count() {
            return Err(Error::domain("cell has the wrong number of coordinates"));
        }
        let mut idx = 0;
        let mut stride = 1;
        for (&x, &k) in cell.iter().zip(&self.sizes) {
            if x >= k {
                return Err(Error::domain(format!(
                    "symbol {x} outside alphabet of size {k}"
                )));
            }
            idx += x * stride;
            stride *= k;
        }
        Ok(idx)
    }

    /// Alphabet indices of the cell at flat position `idx`.
    pub fn cell_of(&self, mut idx: usize) -> Vec<usize> {
        self.sizes
            .iter()
            .map(|&k| {
                let x = idx % k;
                idx /= k;
                x
            })
            .collect()
    }

    fn check_mask(&self, subset: Mask) -> Result<()> {
        if subset & !self.full() != 0 {
            return Err(Error::domain(format!(
                "subset {subset:#b} refers to variables beyond {}",
                self.var_count()
            )));
        }
        Ok(())
    }

    /// Marginal probabilities of the variables in `keep`, in the same mixed
    /// radix layout restricted to those variables.
    fn marginal_probs(&self, keep: Mask) -> Vec<f64> {
        let n = self.var_count();
        let mut mstride = vec![0usize; n];
        let mut size = 1usize;
        for v in 0..n {
            if keep >> v & 1 == 1 {
                mstride[v] = size;
                size *= self.sizes[v];
            }
        }
        let mut out = vec![0.0; size];
        let mut digits = vec![0usize; n];
        let mut midx = 0usize;
        for &p in &self.probs {
            out[midx] += p;
            // odometer increment
            for v in 0..n {
                digits[v] += 1;
                midx += mstride[v];
                if digits[v] < self.sizes[v] {
                    break;
                }
                midx -= mstride[v] * self.sizes[v];
                digits[v] = 0;
            }
        }
        out
    }

    pub fn marginalize(&self, keep: Mask) -> Result<JointPmf> {
        if keep == 0 {
            return Err(Error::domain(
                "cannot marginalize onto an empty set of variables",
            ));
        }
        self.check_mask(keep)?;
        let sizes: Vec<usize> = (0..self.var_count())
            .filter(|v| keep >> v & 1 == 1)
            .map(|v| self.sizes[v])
            .collect();
        let integer_values = self.integer_values.as_ref().map(|vals| {
            (0..self.var_count())
                .filter(|v| keep >> v & 1 == 1)
                .map(|v| vals[v].clone())
                .collect()
        });
        Ok(JointPmf {
            sizes,
            probs: self.marginal_probs(keep),
            integer_values,
        })
    }

    /// Single-variable marginals, each carrying its integer values if present.
    pub fn single_marginals(&self) -> Vec<JointPmf> {
        (0..self.var_count())
            .map(|v| self.marginalize(1 << v).expect("valid single variable"))
            .collect()
    }

    /// `H(X_subset)` in bits; the empty subset has entropy 0.
    pub fn entropy(&self, subset: Mask) -> Result<f64> {
        self.check_mask(subset)?;
        Ok(self.entropy_unchecked(subset))
    }

    fn entropy_unchecked(&self, subset: Mask) -> f64 {
        if subset == 0 {
            return 0.0;
        }
        shannon_bits(&self.marginal_probs(subset))
    }

    /// `H(X_T)` for every `T`, indexed by bitmask.
    pub fn entropy_table(&self) -> Vec<f64> {
        self.entropy_table_with(Exec::default())
    }

    pub fn entropy_table_with(&self, exec: Exec) -> Vec<f64> {
        let count = 1usize << self.var_count();
        exec.map_chunks(count, 1, |r| self.entropy_unchecked(r.start as Mask))
    }

    /// `H(X_a | X_b) = H(X_a, X_b) - H(X_b)` for disjoint `a`, `b`.
    pub fn conditional_entropy(&self, a: Mask, b: Mask) -> Result<f64> {
        self.check_mask(a | b)?;
        disjoint(&[a, b])?;
        Ok(self.entropy_unchecked(a | b) - self.entropy_unchecked(b))
    }

    /// `I(X_a; X_b) = H(X_a) + H(X_b) - H(X_a, X_b)` for disjoint `a`, `b`.
    pub fn mutual_information(&self, a: Mask, b: Mask) -> Result<f64> {
        self.check_mask(a | b)?;
        disjoint(&[a, b])?;
        let v =
            self.entropy_unchecked(a) + self.entropy_unchecked(b) - self.entropy_unchecked(a | b);
        Ok(clamp_nonnegative(v))
    }

    /// `I(X_a; X_b | X_c) = H(a,c) + H(b,c) - H(c) - H(a,b,c)` for pairwise
    /// disjoint `a`, `b`, `c`.
    pub fn conditional_mutual_information(&self, a: Mask, b: Mask, c: Mask) -> Result<f64> {
        self.check_mask(a | b | c)?;
        disjoint(&[a, b, c])?;
        let v = self.entropy_unchecked(a | c) + self.entropy_unchecked(b | c)
            - self.entropy_unchecked(c)
            - self.entropy_unchecked(a | b | c);
        Ok(clamp_nonnegative(v))
    }

    /// `Σ_i H(X_i) - H(X^n)`, zero exactly for product distributions.
    pub fn total_correlation(&self) -> f64 {
        let singles: f64 = (0..self.var_count())
            .map(|v| self.entropy_unchecked(1 << v))
            .sum();
        clamp_nonnegative(singles - self.entropy_unchecked(self.full()))
    }
}

fn disjoint(sets: &[Mask]) -> Result<()> {
    for (i, &a) in sets.iter().enumerate() {
        for &b in &sets[i + 1..] {
            if a & b != 0 {
                return Err(Error::domain(format!(
                    "variable sets {a:#b} and {b:#b} overlap"
                )));
            }
        }
    }
    Ok(())
}

/// Maps round-off negatives in `[-tol, 0)` to exactly 0.
fn clamp_nonnegative(v: f64) -> f64 {
    if (-DEFAULT_TOL..0.0).contains(&v) {
        0.0
    } else {
        v
    }
}

/// `-Σ q log2 q` with `0 log 0 = 0`.
pub fn shannon_bits(probs: &[f64]) -> f64 {
    -probs
        .iter()
        .filter(|&&q| q > 0.0)
        .map(|&q| q * q.log2())
        .sum::<f64>()
}

/// Entropy in bits of the empirical distribution given by integer counts.
pub fn entropy_from_counts(counts: impl IntoIterator<Item = u64>, total: u64) -> f64 {
    let total = total as f64;
    -counts
        .into_iter()
        .filter(|&c| c > 0)
        .map(|c| {
            let q = c as f64 / total;
            q * q.log2()
        })
        .sum::<f64>()
}

pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!(
            "binary entropy needs p in [0,1], got {p}"
        )));
    }
    Ok(crate::combin::hb(p))
}

/// Entropy power `2^{(2/n) h}` of an `n`-dimensional vector with entropy `h` bits.
pub fn entropy_power(h_bits: f64, dimension: usize) -> Result<f64> {
    if dimension == 0 {
        return Err(Error::domain("entropy power needs dimension >= 1"));
    }
    Ok((2.0 * h_bits / dimension as f64).exp2())
}

fn ground_for(n: usize) -> Result<GroundSet> {
    GroundSet::new(n)
}

/// `f(T) = H(X_T)`; a rank function.
pub fn build_entropic_fn(p: &JointPmf) -> Result<SetFunction> {
    SetFunction::new(ground_for(p.var_count())?, p.entropy_table())
}

/// `f(T) = H(X_T | X_{T^c})`; supermodular and monotonically increasing.
pub fn build_cond_entropy_fn(p: &JointPmf) -> Result<SetFunction> {
    let h = p.entropy_table();
    let full = p.full();
    SetFunction::from_fn(ground_for(p.var_count())?, |t| {
        if t == 0 {
            0.0
        } else {
            h[full as usize] - h[(full & !t) as usize]
        }
    })
}

/// `f(T) = I(X_T; X_{T^c})`; submodular, symmetric under complement, not monotone.
pub fn build_mi_fn(p: &JointPmf) -> Result<SetFunction> {
    let h = p.entropy_table();
    let full = p.full();
    SetFunction::from_fn(ground_for(p.var_count())?, |t| {
        if t == 0 || t == full {
            0.0
        } else {
            clamp_nonnegative(h[t as usize] + h[(full & !t) as usize] - h[full as usize])
        }
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CondMiFunction {
    /// `f(T) = I(X_U; X_T)` on the subsets `T` of `V` (ground set = `V`).
    pub f: SetFunction,
    /// Largest `I(X_i; X_j | X_U)` over pairs `i != j` in `V`.
    pub worst_pairwise_cmi: f64,
    /// Set when the conditional-independence hypothesis fails beyond
    /// [`CI_THRESHOLD`]; the function is still returned.
    pub ci_violated: bool,
}

/// `f(T) = I(X_U; X_T)` for `T ⊆ V`; a rank function when the entries of
/// `X_V` are conditionally independent given `X_U`.
pub fn build_cond_mi_fn(p: &JointPmf, u: Mask, v: Mask) -> Result<CondMiFunction> {
    p.check_mask(u | v)?;
    disjoint(&[u, v])?;
    if v == 0 {
        return Err(Error::domain("V must be non-empty"));
    }
    let labels = (0..p.var_count())
        .filter(|i| v >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect();
    let ground = GroundSet::with_labels(labels)?;
    let h_u = p.entropy_unchecked(u);
    let f = SetFunction::from_fn(ground, |t| {
        if t == 0 {
            return 0.0;
        }
        let t = deposit(t, v);
        clamp_nonnegative(h_u + p.entropy_unchecked(t) - p.entropy_unchecked(u | t))
    })?;
    let members: Vec<usize> = (0..p.var_count()).filter(|i| v >> i & 1 == 1).collect();
    let mut worst = 0f64;
    for (a, &i) in members.iter().enumerate() {
        for &j in &members[a + 1..] {
            worst = worst.max(p.conditional_mutual_information(1 << i, 1 << j, u)?);
        }
    }
    Ok(CondMiFunction {
        f,
        worst_pairwise_cmi: worst,
        ci_violated: worst > CI_THRESHOLD,
    })
}

/// Distribution of an integer-valued variable as value → probability.
pub type IntDist = BTreeMap<i64, f64>;

fn integer_dist(p: &JointPmf) -> Result<IntDist> {
    let values = match (p.var_count(), p.integer_values()) {
        (1, Some(v)) => &v[0],
        _ => {
            return Err(Error::domain(
                "sum entropies need single-variable PMFs with integer values",
            ))
        }
    };
    let mut out = IntDist::new();
    for (x, &q) in values.iter().zip(p.probs()) {
        if q > 0.0 {
            *out.entry(*x).or_insert(0.0) += q;
        }
    }
    Ok(out)
}

/// Exact convolution of two integer distributions.
pub fn convolve(a: &IntDist, b: &IntDist) -> Result<IntDist> {
    let mut out = IntDist::new();
    for (&x, &p) in a {
        for (&y, &q) in b {
            let s = x
                .checked_add(y)
                .ok_or_else(|| Error::domain("integer sum overflows"))?;
            *out.entry(s).or_insert(0.0) += p * q;
        }
        if out.len() > MAX_SUM_SUPPORT {
            return Err(Error::domain(format!(
                "support of a sum exceeds {MAX_SUM_SUPPORT} points"
            )));
        }
    }
    Ok(out)
}

pub fn dist_entropy(d: &IntDist) -> f64 {
    -d.values()
        .filter(|&&q| q > 0.0)
        .map(|&q| q * q.log2())
        .sum::<f64>()
}

/// Distributions of `Σ_{i∈T} X_i` for every subset `T` of independent variables.
pub fn sum_distributions(marginals: &[JointPmf]) -> Result<Vec<IntDist>> {
    let n = marginals.len();
    if n == 0 {
        return Err(Error::domain("need at least one variable"));
    }
    ground_for(n)?;
    let singles = marginals
        .iter()
        .map(integer_dist)
        .collect::<Result<Vec<_>>>()?;
    let mut dists: Vec<IntDist> = Vec::with_capacity(1 << n);
    dists.push(IntDist::from([(0, 1.0)]));
    for t in 1..1usize << n {
        let low = t.trailing_zeros() as usize;
        let rest = t & (t - 1);
        let d = if rest == 0 {
            singles[low].clone()
        } else {
            convolve(&dists[rest], &singles[low])?
        };
        dists.push(d);
    }
    Ok(dists)
}

/// `f(T) = H(Σ_{ω∈T} X_ω)` for independent integer-valued variables; a rank
/// function.
pub fn build_sum_entropy_fn(marginals: &[JointPmf]) -> Result<SetFunction> {
    let dists = sum_distributions(marginals)?;
    let values = dists.iter().map(dist_entropy).collect();
    SetFunction::new(ground_for(marginals.len())?, values)
}
