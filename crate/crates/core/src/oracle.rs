//! Definition-level brute force used to cross-check the optimized modules,
//! plus seeded instance generators.
//!
//! Nothing here calls into the scans it is meant to check: enumeration,
//! entropy and counting code is written out again in the most literal form.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::hypercube::{CodeSet, GraphStats};
use crate::infomeasures::JointPmf;
use crate::setfn::{GroundSet, SetFunction, SubsetFamily};
use crate::{Error, Mask, Result};

pub const MAX_N_DEFINITION: usize = 12;
pub const MAX_N_RANK: usize = 12;
pub const MAX_N_PAIRS: usize = 16;
pub const MAX_N_CONSTANTS: usize = 12;
pub const MAX_N_PROJECTION: usize = 12;

pub type OracleRng = ChaCha8Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_n: usize,
    pub seed: u64,
    pub instance_count: usize,
}

impl OracleConfig {
    pub fn for_set_functions(seed: u64, instance_count: usize) -> Self {
        OracleConfig {
            max_n: 6,
            seed,
            instance_count,
        }
    }

    pub fn for_hypercube(seed: u64, instance_count: usize) -> Self {
        OracleConfig {
            max_n: 10,
            seed,
            instance_count,
        }
    }

    pub fn rng(&self) -> OracleRng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

fn refuse(what: &str, n: usize, cap: usize) -> Error {
    Error::Refused(format!("{what} oracle handles n <= {cap}, got n = {n}"))
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleVerdict {
    pub holds: bool,
    /// Largest shortfall found (0 when none).
    pub worst: f64,
    /// `(S, T)` attaining `worst`.
    pub witness: Option<(Mask, Mask)>,
}

/// `f(S) + f(T) >= f(S ∪ T) + f(S ∩ T)` over every ordered pair of subsets,
/// with the allowance `tol * max(1, max |f|)`.
pub fn submodularity_by_definition(f: &SetFunction, tol: f64) -> Result<OracleVerdict> {
    let n = f.n();
    if n > MAX_N_DEFINITION {
        return Err(refuse("submodularity", n, MAX_N_DEFINITION));
    }
    let v = f.values();
    let mut biggest = 1.0f64;
    for x in v {
        if x.abs() > biggest {
            biggest = x.abs();
        }
    }
    let allowance = tol * biggest;
    let size = 1usize << n;
    let mut worst = 0.0;
    let mut witness = None;
    for s in 0..size {
        for t in 0..size {
            let shortfall = v[s | t] + v[s & t] - v[s] - v[t];
            if shortfall > allowance && shortfall > worst {
                worst = shortfall;
                witness = Some((s as Mask, t as Mask));
            }
        }
    }
    Ok(OracleVerdict {
        holds: witness.is_none(),
        worst,
        witness,
    })
}

/// Entropic function of a random joint PMF (alphabets of size 2 or 3 up to
/// `n = 6`, binary above). Deterministic in `seed`.
pub fn random_rank_function(n: usize, seed: u64) -> Result<SetFunction> {
    if n == 0 || n > MAX_N_RANK {
        return Err(refuse("rank function", n, MAX_N_RANK));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_alphabet = if n <= 6 { 3 } else { 2 };
    let p = random_pmf(&mut rng, n, max_alphabet);
    let cells = p.probs().len();
    let sizes = p.sizes().to_vec();
    let mut values = Vec::with_capacity(1 << n);
    for mask in 0..1usize << n {
        let mut marginal: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
        for (idx, &q) in p.probs().iter().enumerate().take(cells) {
            let mut rest = idx;
            let mut key = Vec::new();
            for (i, &s) in sizes.iter().enumerate() {
                let digit = rest % s;
                rest /= s;
                if mask >> i & 1 == 1 {
                    key.push(digit);
                }
            }
            *marginal.entry(key).or_insert(0.0) += q;
        }
        let mut h = 0.0;
        for q in marginal.values() {
            if *q > 0.0 {
                h -= q * q.log2();
            }
        }
        values.push(if mask == 0 { 0.0 } else { h.max(0.0) });
    }
    SetFunction::new(GroundSet::new(n)?, values)
}

/// Minimal constants as literal minima: `(m_d, l_d)`, `None` where the
/// minimum ranges over nothing.
pub fn brute_md_ld(a: &CodeSet, d: usize) -> Result<(Option<u64>, Option<u64>)> {
    let n = a.n();
    if n > MAX_N_CONSTANTS {
        return Err(refuse("m_d/l_d", n, MAX_N_CONSTANTS));
    }
    let words = a.words();
    let mut m: Option<u64> = None;
    let mut l: Option<u64> = None;
    for &x in words {
        for k in 0..(1u32 << n) {
            if k.count_ones() as usize != d {
                continue;
            }
            let partner = x ^ k;
            let mut agree = 0u64;
            for &y in words {
                let mut same = true;
                for i in 0..n {
                    if k >> i & 1 == 0 && (x >> i & 1) != (y >> i & 1) {
                        same = false;
                    }
                }
                if same {
                    agree += 1;
                }
            }
            let slot = if words.contains(&partner) {
                &mut m
            } else {
                &mut l
            };
            *slot = Some(slot.map_or(agree, |v| v.min(agree)));
        }
    }
    Ok((m, l))
}

/// Edge and boundary counts from the definitions.
pub fn brute_pairs(a: &CodeSet, tau: usize) -> Result<GraphStats> {
    let n = a.n();
    if n > MAX_N_PAIRS {
        return Err(refuse("pair", n, MAX_N_PAIRS));
    }
    let dist = |x: Mask, y: Mask| (0..n).filter(|i| (x >> i & 1) != (y >> i & 1)).count();
    let inside: HashSet<Mask> = a.words().iter().copied().collect();
    let mut edges = vec![0u64; tau];
    let mut boundary = vec![0u64; tau];
    for &x in a.words() {
        for &y in a.words() {
            let dd = dist(x, y);
            if dd >= 1 && dd <= tau {
                edges[dd - 1] += 1;
            }
        }
        for y in 0..(1u32 << n) {
            let dd = dist(x, y);
            if dd >= 1 && dd <= tau && !inside.contains(&y) {
                boundary[dd - 1] += 1;
            }
        }
    }
    for e in &mut edges {
        *e /= 2;
    }
    Ok(GraphStats {
        n,
        card: a.len() as u64,
        tau,
        edge_counts: edges,
        boundary_counts: boundary,
    })
}

/// Distinct projections onto each `k`-subset of coordinates, subsets in
/// increasing bitmask order.
pub fn brute_projection(points: &[Vec<i64>], k: usize) -> Result<Vec<u64>> {
    let n = points.first().map_or(0, Vec::len);
    if n > MAX_N_PROJECTION {
        return Err(refuse("projection", n, MAX_N_PROJECTION));
    }
    let mut out = Vec::new();
    for s in 0..(1u32 << n) {
        if s.count_ones() as usize != k {
            continue;
        }
        let mut seen = BTreeSet::new();
        for p in points {
            let proj: Vec<i64> = (0..n).filter(|i| s >> i & 1 == 1).map(|i| p[i]).collect();
            seen.insert(proj);
        }
        out.push(seen.len() as u64);
    }
    Ok(out)
}

/// Random weights with a few exact zeros, normalized to sum to one.
fn random_simplex(rng: &mut OracleRng, len: usize) -> Vec<f64> {
    loop {
        let w: Vec<f64> = (0..len)
            .map(|_| {
                if rng.random_range(0..8) == 0 {
                    0.0
                } else {
                    rng.random::<f64>()
                }
            })
            .collect();
        let total: f64 = w.iter().sum();
        if total > 0.0 {
            return w.into_iter().map(|x| x / total).collect();
        }
    }
}

/// Joint PMF on `n` variables with alphabet sizes in `2..=max_alphabet`.
pub fn random_pmf(rng: &mut OracleRng, n: usize, max_alphabet: usize) -> JointPmf {
    let sizes: Vec<usize> = (0..n)
        .map(|_| rng.random_range(2..=max_alphabet.max(2)))
        .collect();
    let cells = sizes.iter().product();
    JointPmf::new(sizes, random_simplex(rng, cells)).expect("valid pmf")
}

pub fn random_product_pmf(rng: &mut OracleRng, n: usize, max_alphabet: usize) -> JointPmf {
    let marginals: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let s = rng.random_range(2..=max_alphabet.max(2));
            random_simplex(rng, s)
        })
        .collect();
    JointPmf::product(&marginals).expect("valid product")
}

/// PMF whose last `n_v` variables are drawn independently given the first
/// `n_u`. Returns the PMF with the masks `U` and `V`.
pub fn random_ci_pmf(
    rng: &mut OracleRng,
    n_u: usize,
    n_v: usize,
    max_alphabet: usize,
) -> (JointPmf, Mask, Mask) {
    let top = max_alphabet.max(2);
    let n = n_u + n_v;
    let sizes: Vec<usize> = (0..n).map(|_| rng.random_range(2..=top)).collect();
    let u_cells: usize = sizes[..n_u].iter().product();
    let base = random_simplex(rng, u_cells);
    // conditional tables: cond[j][u_cell] is the law of variable n_u + j
    let cond: Vec<Vec<Vec<f64>>> = (0..n_v)
        .map(|j| {
            (0..u_cells)
                .map(|_| random_simplex(rng, sizes[n_u + j]))
                .collect()
        })
        .collect();
    let cells: usize = sizes.iter().product();
    let mut probs = vec![0.0; cells];
    for (idx, slot) in probs.iter_mut().enumerate() {
        let mut rest = idx;
        let mut digits = Vec::with_capacity(n);
        for &s in &sizes {
            digits.push(rest % s);
            rest /= s;
        }
        let mut u_cell = 0;
        for i in (0..n_u).rev() {
            u_cell = u_cell * sizes[i] + digits[i];
        }
        let mut q = base[u_cell];
        for j in 0..n_v {
            q *= cond[j][u_cell][digits[n_u + j]];
        }
        *slot = q;
    }
    let pmf = JointPmf::new(sizes, probs).expect("valid pmf");
    let u = (1 << n_u) - 1;
    let v = ((1 << n) - 1) & !u;
    (pmf, u, v)
}

/// Independent integer-valued variables with supports drawn from
/// `-spread..=spread`.
pub fn random_integer_marginals(
    rng: &mut OracleRng,
    n: usize,
    max_support: usize,
    spread: i64,
) -> Vec<JointPmf> {
    (0..n)
        .map(|_| {
            let size = rng.random_range(1..=max_support.max(1));
            let mut values = BTreeSet::new();
            while values.len() < size {
                values.insert(rng.random_range(-spread..=spread));
            }
            let probs = loop {
                let p = random_simplex(rng, size);
                if p.iter().all(|&x| x > 0.0) {
                    break p;
                }
            };
            JointPmf::integer_variable(values.into_iter().collect(), probs).expect("valid")
        })
        .collect()
}

/// Submodular function with `f(∅) = 0` that may be negative and
/// non-monotone: weighted coverage plus a concave function of the size plus
/// a signed modular term.
pub fn random_signed_submodular(rng: &mut OracleRng, n: usize) -> SetFunction {
    let blocks: Vec<(u32, f64)> = (0..n + 2)
        .map(|_| (rng.random_range(1..1u32 << n), rng.random::<f64>() * 3.0))
        .collect();
    let modular: Vec<f64> = (0..n).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect();
    let curve = rng.random::<f64>() * 2.0;
    let values = (0..1u32 << n)
        .map(|t| {
            let cover: f64 = blocks
                .iter()
                .filter(|(b, _)| b & t != 0)
                .map(|(_, w)| w)
                .sum();
            let lin: f64 = (0..n).filter(|i| t >> i & 1 == 1).map(|i| modular[i]).sum();
            let size = f64::from(t.count_ones());
            cover + lin + curve * size.sqrt()
        })
        .collect();
    SetFunction::new(GroundSet::new(n).expect("n in range"), values).expect("finite")
}

/// Uniform random table on `[-1, 1)` with `f(∅) = 0`.
pub fn random_table(rng: &mut OracleRng, n: usize) -> SetFunction {
    let values = (0..1usize << n)
        .map(|t| {
            if t == 0 {
                0.0
            } else {
                rng.random::<f64>() * 2.0 - 1.0
            }
        })
        .collect();
    SetFunction::new(GroundSet::new(n).expect("n in range"), values).expect("finite")
}

/// Random non-empty set of words; `max_size` caps its cardinality.
pub fn random_code_set(rng: &mut OracleRng, n: usize, max_size: usize) -> CodeSet {
    let limit = 1u64 << n;
    let size = rng.random_range(1..=max_size.max(1)) as u64;
    let size = size.min(limit);
    let mut words = BTreeSet::new();
    // dense sets are built by removal, sparse ones by insertion
    if 2 * size > limit {
        let mut all: BTreeSet<Mask> = (0..limit as Mask).collect();
        while all.len() as u64 > size {
            let w = rng.random_range(0..limit) as Mask;
            all.remove(&w);
        }
        words = all;
    } else {
        while (words.len() as u64) < size {
            words.insert(rng.random_range(0..limit) as Mask);
        }
    }
    CodeSet::new(n, words.into_iter().collect()).expect("valid code set")
}

/// `count` integer points in `[0, range)^n`.
pub fn random_points(rng: &mut OracleRng, n: usize, count: usize, range: i64) -> Vec<Vec<i64>> {
    (0..count)
        .map(|_| (0..n).map(|_| rng.random_range(0..range.max(1))).collect())
        .collect()
}

/// The grid `[0, side)^n`.
pub fn grid(n: usize, side: i64) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..side).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// `m` random subsets of `{0..n}` (possibly empty or repeated).
pub fn random_family(rng: &mut OracleRng, n: usize, m: usize) -> SubsetFamily {
    let members = (0..m).map(|_| rng.random_range(0..1u32 << n)).collect();
    SubsetFamily::new(GroundSet::new(n).expect("n in range"), members).expect("valid family")
}

/// Random family of `m >= d` subsets in which every element lies in at least
/// `d` members.
pub fn random_cover(rng: &mut OracleRng, n: usize, m: usize, d: usize) -> SubsetFamily {
    assert!(m >= d && d >= 1, "need m >= d >= 1");
    let mut members: Vec<Mask> = (0..m).map(|_| rng.random_range(0..1u32 << n)).collect();
    for i in 0..n {
        let bit = 1 << i;
        let mut have = members.iter().filter(|&&s| s & bit != 0).count();
        while have < d {
            let j = rng.random_range(0..m);
            if members[j] & bit == 0 {
                members[j] |= bit;
                have += 1;
            }
        }
    }
    SubsetFamily::new(GroundSet::new(n).expect("n in range"), members).expect("valid family")
}

/// Writes a failing instance to `<dir>/<name>.txt`, followed by a comment
/// line with the command that reproduces it.
pub fn dump_failure(dir: &Path, name: &str, instance: &str, repro: &str) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("{name}.txt"));
    let mut file = std::fs::File::create(&path)?;
    file.write_all(instance.as_bytes())?;
    if !instance.ends_with('\n') {
        writeln!(file)?;
    }
    writeln!(file, "# repro: {repro}")?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn definition_check_on_small_tables() {
        let sq = SetFunction::from_fn(GroundSet::new(2).unwrap(), |t| {
            f64::from(t.count_ones()).powi(2)
        })
        .unwrap();
        let v = submodularity_by_definition(&sq, 1e-9).unwrap();
        assert!(!v.holds);
        assert_eq!(v.worst, 2.0);
        assert_eq!(v.witness, Some((1, 2)));
        let modular = SetFunction::cardinality(4).unwrap();
        assert!(submodularity_by_definition(&modular, 1e-9).unwrap().holds);
        let big = SetFunction::cardinality(13).unwrap();
        assert!(matches!(
            submodularity_by_definition(&big, 1e-9),
            Err(Error::Refused(_))
        ));
    }

    #[test]
    fn rank_generator_is_deterministic() {
        let a = random_rank_function(4, 11).unwrap();
        let b = random_rank_function(4, 11).unwrap();
        assert_eq!(a.values(), b.values());
        let one = random_rank_function(1, 3).unwrap();
        assert_eq!(one.values()[0], 0.0);
        assert!(one.values()[1] >= 0.0 && one.values()[1] <= 3f64.log2());
    }

    #[test]
    fn brute_counts_small_example() {
        let a = CodeSet::new(3, vec![0b111, 0b011, 0b101]).unwrap();
        let s = brute_pairs(&a, 2).unwrap();
        assert_eq!(s.edge_counts, vec![2, 1]);
        let (m, l) = brute_md_ld(&CodeSet::new(3, vec![0b111, 0b011]).unwrap(), 1).unwrap();
        assert_eq!((m, l), (Some(2), Some(1)));
    }

    #[test]
    fn generators_cover_and_grid() {
        let mut rng = OracleConfig::for_set_functions(5, 1).rng();
        let fam = random_cover(&mut rng, 5, 4, 2);
        assert!(fam.degree_profile().iter().all(|&deg| deg >= 2));
        assert_eq!(grid(3, 2).len(), 8);
        let (p, u, v) = random_ci_pmf(&mut rng, 1, 3, 3);
        assert_eq!((u, v), (0b0001, 0b1110));
        assert!(p.conditional_mutual_information(0b0010, 0b0100, u).unwrap() < 1e-9);
    }

    #[test]
    fn dump_writes_repro_line() {
        let dir = tempdir();
        let path = dump_failure(
            &dir,
            "case",
            "setfn n=1\n0 0\n1 1\n",
            "submodkit check-setfn case.txt",
        )
        .unwrap();
        let text = std::fs::read_to_string(path).unwrap();
        assert!(text.ends_with("# repro: submodkit check-setfn case.txt\n"));
        std::fs::remove_dir_all(dir).unwrap();
    }

    fn tempdir() -> PathBuf {
        let dir = std::env::temp_dir().join(format!("submodkit-oracle-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        dir
    }
}
