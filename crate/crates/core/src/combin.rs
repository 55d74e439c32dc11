//! Exact binomial coefficients and fixed-size subset enumeration.

use crate::Mask;

/// `C(n, k)` in 128-bit integers; exact for every `n` this crate accepts.
pub fn binom(n: u32, k: u32) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) is divisible by (i + 1) at every step
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

pub fn binom_f64(n: u32, k: u32) -> f64 {
    binom(n, k) as f64
}

/// Iterates all `k`-element subsets of `{0..n}` as bitmasks in increasing order.
pub fn k_subsets(n: u32, k: u32) -> KSubsets {
    let next = if k > n {
        None
    } else if k == 0 {
        Some(0)
    } else {
        Some((1u64 << k) - 1)
    };
    KSubsets {
        limit: 1u64 << n,
        next,
    }
}

pub struct KSubsets {
    limit: u64,
    next: Option<u64>,
}

impl Iterator for KSubsets {
    type Item = Mask;

    fn next(&mut self) -> Option<Mask> {
        let cur = self.next?;
        if cur >= self.limit {
            self.next = None;
            return None;
        }
        self.next = if cur == 0 {
            None
        } else {
            // Gosper's hack
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            Some((((r ^ cur) >> 2) / c) | r)
        };
        Some(cur as Mask)
    }
}

/// Binary entropy in bits, without range validation.
pub(crate) fn hb(p: f64) -> f64 {
    let term = |q: f64| if q <= 0.0 { 0.0 } else { -q * q.log2() };
    term(p) + term(1.0 - p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_binomials() {
        assert_eq!(binom(10, 5), 252);
        assert_eq!(binom(24, 12), 2_704_156);
        assert_eq!(binom(3, 4), 0);
        assert_eq!(binom(0, 0), 1);
        assert_eq!(binom(62, 31), 465_428_353_255_261_088);
    }

    #[test]
    fn pascal_rule() {
        for n in 1..40 {
            for k in 1..n {
                assert_eq!(binom(n, k), binom(n - 1, k - 1) + binom(n - 1, k));
            }
        }
    }

    #[test]
    fn subsets_have_right_size_and_count() {
        for n in 0..=10u32 {
            for k in 0..=n + 1 {
                let all: Vec<Mask> = k_subsets(n, k).collect();
                assert_eq!(all.len() as u128, binom(n, k), "n={n} k={k}");
                assert!(all.iter().all(|m| m.count_ones() == k && *m < (1 << n)));
                assert!(all.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }
}
