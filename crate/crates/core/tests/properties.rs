//! Invariants of the set-function, entropy and hypercube machinery.

use proptest::prelude::*;
use rand::SeedableRng;
use submodkit::exec::Exec;
use submodkit::hypercube::{self, bound_report, edge_counts_with, EdgeStrategy};
use submodkit::inequality_lab::{
    corollary2_check, sum_epi_checks, tk_sequence_with, Claim, ScalarTransform,
};
use submodkit::infomeasures::{build_cond_entropy_fn, build_entropic_fn, build_mi_fn};
use submodkit::oracle::{self, OracleRng};
use submodkit::setfn::{shearer_check, uncross_to_chain};

fn rng(seed: u64) -> OracleRng {
    OracleRng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn entropic_functions_are_rank_functions(seed in any::<u64>(), n in 1usize..=5) {
        let p = oracle::random_pmf(&mut rng(seed), n, 3);
        prop_assert!(build_entropic_fn(&p).unwrap().is_rank_function(1e-9).holds);
        prop_assert!(build_cond_entropy_fn(&p).unwrap().is_supermodular(1e-9).holds);
        prop_assert!(build_mi_fn(&p).unwrap().is_submodular(1e-9).holds);
    }

    #[test]
    fn chain_rule(seed in any::<u64>(), n in 2usize..=5, a in any::<u32>(), b in any::<u32>()) {
        let p = oracle::random_pmf(&mut rng(seed), n, 3);
        let full = (1u32 << n) - 1;
        let a = a & full;
        let b = b & full & !a;
        let joint = p.entropy(a | b).unwrap();
        let split = p.entropy(b).unwrap() + p.conditional_entropy(a, b).unwrap();
        prop_assert!((joint - split).abs() < 1e-9);
        let mi = p.mutual_information(a, b).unwrap();
        prop_assert!(mi >= 0.0);
    }

    #[test]
    fn policies_are_bit_identical(seed in any::<u64>(), n in 1usize..=6) {
        let f = oracle::random_signed_submodular(&mut rng(seed), n);
        let g = ScalarTransform::exp2_scaled(0.5).unwrap();
        let f0 = submodkit::setfn::SetFunction::from_fn(f.ground().clone(), |t| f.get(t) - f.get(0)).unwrap();
        let s = tk_sequence_with(&f0, &g, Claim::Detect, 1e-9, Exec::Sequential).unwrap();
        let p = tk_sequence_with(&f0, &g, Claim::Detect, 1e-9, Exec::Parallel).unwrap();
        prop_assert_eq!(s, p);
        prop_assert_eq!(f.is_submodular_with(1e-9, Exec::Sequential), f.is_submodular_with(1e-9, Exec::Parallel));
    }

    #[test]
    fn generalized_han_for_signed_submodular(seed in any::<u64>(), n in 2usize..=5) {
        let f = oracle::random_signed_submodular(&mut rng(seed), n);
        for k in 1..n {
            prop_assert!(corollary2_check(&f, 1.0, k, 1e-9).unwrap().check.holds);
        }
    }

    #[test]
    fn shearer_and_uncrossing(seed in any::<u64>(), n in 1usize..=6, m in 1usize..=6, d in 1usize..=3) {
        let mut r = rng(seed);
        let f = oracle::random_rank_function(n, seed).unwrap();
        let d = d.min(m);
        let fam = oracle::random_cover(&mut r, n, m, d);
        let rep = shearer_check(&f, &fam, d, f.full(), 1e-9).unwrap();
        prop_assert!(rep.check.holds);
        let u = uncross_to_chain(&fam).unwrap();
        prop_assert!(u.chain.is_chain());
        prop_assert_eq!(u.chain.degree_profile(), fam.degree_profile());
        prop_assert!(u.chain.sum_of(&f) <= fam.sum_of(&f) + 1e-9);
    }

    #[test]
    fn graph_identity_and_bounds(seed in any::<u64>(), n in 1usize..=9, tau in 1usize..=3) {
        let tau = tau.min(n);
        let a = oracle::random_code_set(&mut rng(seed), n, 1 << n);
        let s = edge_counts_with(&a, tau, EdgeStrategy::Auto, Exec::Parallel).unwrap();
        prop_assert!(s.identity_holds());
        for d in 1..=tau {
            let r = bound_report(&a, d, None, 1e-9).unwrap();
            prop_assert!(r.holds(), "{:?}", r);
        }
        prop_assert!(hypercube::d1_entropy_identity(&a, 1e-9).holds);
    }

    #[test]
    fn epi_chain(seed in any::<u64>(), n in 2usize..=5, k in 1usize..=4) {
        let k = k.min(n - 1);
        let marginals = oracle::random_integer_marginals(&mut rng(seed), n, 4, 3);
        let r = sum_epi_checks(&marginals, k, None, 1e-9).unwrap();
        prop_assert!(r.holds(), "{:?}", r);
    }
}
