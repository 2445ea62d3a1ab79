use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;

use krverify_core::charoracle::{
    irr_character, kr_product_dimension, kr_tensor_multiplicity_type_a, OracleLimits,
};
use krverify_core::fermionic::{m_sum_at_one, verify_mn, FermionicInput, Grading, KrCounts, VacancyScope};
use krverify_core::liealg::{CartanData, Weight};
use krverify_core::sweep::reachable_lambdas;
use krverify_core::symbolic::{binom_ext, qbinom_q, LaurentPoly, MultiPoly, Division, VarSet};

fn cd(name: &str) -> CartanData {
    name.parse().unwrap()
}

/// Random module list of bounded load plus one reachable λ.
fn case(rank: usize, load: i64) -> impl Strategy<Value = (KrCounts, usize)> {
    prop::collection::vec((0..rank, 1..=load as usize), 0..=load as usize).prop_flat_map(move |pieces| {
        let mut n = KrCounts::empty(rank);
        let mut used = 0;
        for (a, j) in pieces {
            if used + j as i64 <= load {
                n.add(a, j, 1);
                used += j as i64;
            }
        }
        (Just(n), 0usize..64)
    })
}

fn pick(c: &CartanData, n: &KrCounts, idx: usize) -> Weight {
    let ls = reachable_lambdas(c, n);
    ls[idx % ls.len()].clone()
}

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-4i64..6, -5i64..6), 0..5).prop_map(LaurentPoly::from_terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mn_agree_at_one_a2((n, idx) in case(2, 5)) {
        let c = cd("A2");
        let input = FermionicInput::new(c.clone(), pick(&c, &n, idx), n).unwrap();
        let r = verify_mn(&input).unwrap();
        prop_assert!(r.equal_at_1);
        prop_assert!(r.m.has_nonnegative_coeffs());
        prop_assert_eq!(r.stats.tail_violations, 0);
        prop_assert_eq!(m_sum_at_one(&input).unwrap(), r.m_at_1());
    }

    #[test]
    fn cocharge_grading_is_exact_for_nonsimply_laced((n, idx) in case(2, 4), name in prop::sample::select(vec!["B2", "C2", "G2"])) {
        let c = cd(name);
        let input = FermionicInput::new(c.clone(), pick(&c, &n, idx), n).unwrap().with_grading(Grading::Cocharge);
        let r = verify_mn(&input).unwrap();
        prop_assert!(r.equal_graded);
        prop_assert!(r.equal_at_1);
    }

    #[test]
    fn gradings_agree_at_one((n, idx) in case(2, 4)) {
        let c = cd("B2");
        let base = FermionicInput::new(c.clone(), pick(&c, &n, idx), n).unwrap();
        let p = verify_mn(&base.clone().with_grading(Grading::Paper)).unwrap();
        let q = verify_mn(&base.with_grading(Grading::Cocharge)).unwrap();
        prop_assert_eq!(p.m_at_1(), q.m_at_1());
    }

    #[test]
    fn vacancy_scopes_agree((n, idx) in case(3, 4)) {
        let c = cd("A3");
        let base = FermionicInput::new(c.clone(), pick(&c, &n, idx), n).unwrap();
        let all = verify_mn(&base).unwrap();
        let occ = verify_mn(&base.with_scope(VacancyScope::OccupiedOnly)).unwrap();
        prop_assert_eq!(all.m, occ.m);
    }

    #[test]
    fn type_a_oracle_and_dimension_sum((n, _idx) in case(2, 5)) {
        let c = cd("A2");
        let limits = OracleLimits::default();
        let mut sum = BigUint::default();
        for lambda in reachable_lambdas(&c, &n) {
            let input = FermionicInput::new(c.clone(), lambda.clone(), n.clone()).unwrap();
            let m = m_sum_at_one(&input).unwrap();
            let oracle = kr_tensor_multiplicity_type_a(&c, &n, &lambda, &limits).unwrap();
            prop_assert_eq!(&m, &BigInt::from(oracle));
            sum += m.to_biguint().unwrap() * c.weyl_dim(&lambda).unwrap();
        }
        prop_assert_eq!(sum, kr_product_dimension(&c, &n).unwrap());
    }

    #[test]
    fn character_mass_is_weyl_dimension(a in 0i64..4, b in 0i64..4, name in prop::sample::select(vec!["A2", "B2", "G2"])) {
        let c = cd(name);
        let w = Weight(vec![a, b]);
        let ch = irr_character(&c, &w, &OracleLimits::default()).unwrap();
        prop_assert!(ch.is_weyl_symmetric(&c));
        prop_assert_eq!(ch.mass(), c.weyl_dim(&w).unwrap());
    }

    #[test]
    fn convolution_commutes(a in 0i64..3, b in 0i64..3, c2 in 0i64..3, d in 0i64..3) {
        let c = cd("B2");
        let limits = OracleLimits::default();
        let x = irr_character(&c, &Weight(vec![a, b]), &limits).unwrap();
        let y = irr_character(&c, &Weight(vec![c2, d]), &limits).unwrap();
        let xy = x.convolve(&y, &limits).unwrap();
        let yx = y.convolve(&x, &limits).unwrap();
        prop_assert_eq!(xy.mass(), x.mass() * y.mass());
        prop_assert!(xy.iter().eq(yx.iter()));
    }

    #[test]
    fn laurent_ring_laws(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a + &b) - &b, a);
    }

    #[test]
    fn qbinom_specializes_and_is_palindromic(m in 0i64..8, p in -8i64..8) {
        let q = qbinom_q(m, p).unwrap();
        prop_assert_eq!(q.eval_at_one(), binom_ext(m, p).unwrap());
        let top = q.max_exp().unwrap_or(0);
        let bottom = q.min_exp().unwrap_or(0);
        for (e, coeff) in q.terms() {
            prop_assert_eq!(coeff.clone(), q.coeff(top + bottom - e));
        }
    }

    #[test]
    fn multipoly_division_round_trip(
        a in prop::collection::vec(((0u32..3, 0u32..3), -3i64..4), 1..5),
        b in prop::collection::vec(((0u32..3, 0u32..3), -3i64..4), 1..4),
    ) {
        let vars = VarSet::new(["x", "y"]).unwrap();
        let mk = |t: &[((u32, u32), i64)]| {
            MultiPoly::from_terms(&vars, t.iter().map(|&((i, j), c)| {
                (vec![i, j], c)
            }))
        };
        let (pa, pb) = (mk(&a), mk(&b));
        prop_assume!(!pb.is_zero());
        match pa.mul(&pb).exact_divide(&pb).unwrap() {
            Division::Exact(q) => prop_assert_eq!(q, pa),
            Division::NotDivisible { .. } => prop_assert!(false, "product did not divide"),
        }
    }
}

#[cfg(feature = "parallel")]
#[test]
fn parallel_and_single_thread_runs_agree() {
    let c = cd("G2");
    let n = KrCounts::parse(2, "1:1=3;2:1=2;1:2=1").unwrap();
    let input = FermionicInput::new(c, Weight(vec![0, 0]), n).unwrap();
    let wide = verify_mn(&input).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let narrow = pool.install(|| verify_mn(&input)).unwrap();
    assert_eq!(wide.m, narrow.m);
    assert_eq!(wide.n, narrow.n);
    assert_eq!(wide.stats, narrow.stats);
}
