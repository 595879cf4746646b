//! Randomized invariants: algebraic laws of the operator calculus, the
//! strong/weak relation laws, the probability-functional identities, and
//! simulator reproducibility. Structured randomness (commuting pairs, strong
//! densities, commutant members) is drawn from seeded generators so failures
//! replay exactly.

use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use qeval::jointprob::{
    check_c1, check_c2, check_c3, check_theorem_4_2, cond_prob, interference_term, p_and,
    CommutantDomain,
};
use qeval::opalg::{
    certify_density, certify_projector, commutator, f_affine, orthogonal, pure_state_density,
    tensor, trace_product, Operator,
};
use qeval::random::{
    random_density, random_projector, random_state, random_unitary, CommutingPair,
};
use qeval::relations::{check_prop_2_1, strong_evaluates, weak_evaluates};
use qeval::simulator::{joint_distribution, parse_support_text, sample_support, MeasurementPlan};
use qeval::DEFAULT_TOL;

const DIM: usize = 8;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn rng(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

prop_compose! {
    fn mat2()(entries in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 4)) -> Operator {
        let data: Vec<Complex64> = entries.into_iter().map(|(re, im)| c(re, im)).collect();
        Operator::from_row_major(2, &data).expect("2x2 literal")
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tensor_is_bilinear(a in mat2(), b in mat2(), d in mat2(), s in -2.0f64..2.0) {
        let scaled = d.scale(c(s, 0.0));
        let left = tensor(&(&a + &scaled), &b).unwrap();
        let right = &tensor(&a, &b).unwrap() + &tensor(&d, &b).unwrap().scale(c(s, 0.0));
        prop_assert!(left.approx_eq(&right, 1e-12));
        // Linearity in the second slot as well.
        let left2 = tensor(&b, &(&a + &scaled)).unwrap();
        let right2 = &tensor(&b, &a).unwrap() + &tensor(&b, &d).unwrap().scale(c(s, 0.0));
        prop_assert!(left2.approx_eq(&right2, 1e-12));
    }

    #[test]
    fn tensor_is_associative(a in mat2(), b in mat2(), d in mat2()) {
        let left = tensor(&tensor(&a, &b).unwrap(), &d).unwrap();
        let right = tensor(&a, &tensor(&b, &d).unwrap()).unwrap();
        prop_assert!(left.approx_eq(&right, 1e-12));
    }

    #[test]
    fn trace_product_is_cyclic(a in mat2(), b in mat2()) {
        let ab = trace_product(&[&a, &b]).unwrap();
        let ba = trace_product(&[&b, &a]).unwrap();
        prop_assert!((ab - ba).norm() <= 1e-12);
    }

    #[test]
    fn random_pure_states_certify_as_densities(seed in any::<u64>()) {
        let mut r = rng(seed);
        let psi = random_state(DIM, &mut r);
        let rho = pure_state_density(&psi);
        prop_assert!(certify_density(rho.op().clone(), DEFAULT_TOL).is_ok());
        prop_assert!((rho.op().trace().re - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn f_affine_is_involutive_on_random_projectors(seed in any::<u64>(), rank in 0usize..=DIM) {
        let mut r = rng(seed);
        let p = random_projector(DIM, rank, &mut r);
        let f = f_affine(&p);
        prop_assert!((&f * &f).approx_eq(&Operator::identity(DIM), 1e-12));
    }

    #[test]
    fn orthogonal_projectors_sum_to_a_projector(
        seed in any::<u64>(),
        ranks in (1usize..=4, 1usize..=4),
    ) {
        let mut r = rng(seed);
        let u = random_unitary(DIM, &mut r);
        let (ka, kb) = ranks;
        let va = u.columns(0, ka).into_owned();
        let vb = u.columns(ka, kb).into_owned();
        let pa = certify_projector(
            Operator::from_matrix(&va * va.adjoint()).unwrap(),
            DEFAULT_TOL,
        )
        .unwrap();
        let pb = certify_projector(
            Operator::from_matrix(&vb * vb.adjoint()).unwrap(),
            DEFAULT_TOL,
        )
        .unwrap();
        prop_assert!(orthogonal(&pa, &pb, 1e-12).unwrap());
        let sum = pa.op() + pb.op();
        prop_assert!(certify_projector(sum, 1e-10).is_ok());
    }

    #[test]
    fn strong_relation_is_symmetric_and_complement_closed(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pair = CommutingPair::random(DIM, &mut r);
        let strong_rho = pair.strong_density(&mut r);
        let generic_rho = random_density(DIM, &mut r);
        for rho in [&strong_rho, &generic_rho] {
            let te = strong_evaluates(&pair.t, &pair.e, rho, DEFAULT_TOL).unwrap();
            let et = strong_evaluates(&pair.e, &pair.t, rho, DEFAULT_TOL).unwrap();
            prop_assert_eq!(te, et);
            if te {
                prop_assert!(strong_evaluates(
                    &pair.t.complement(),
                    &pair.e.complement(),
                    rho,
                    DEFAULT_TOL
                )
                .unwrap());
            }
        }
        prop_assert!(strong_evaluates(&pair.t, &pair.e, &strong_rho, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn strong_triples_satisfy_the_weak_relation(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pair = CommutingPair::random(DIM, &mut r);
        let rho = pair.strong_density(&mut r);
        let check = check_prop_2_1(&pair.t, &pair.e, &rho, DEFAULT_TOL).unwrap();
        prop_assert!(check.strong);
        prop_assert!(check.weak);
        prop_assert!(check.prob_10.abs() <= DEFAULT_TOL);
        prop_assert!(check.prob_01.abs() <= DEFAULT_TOL);
        prop_assert!(weak_evaluates(&pair.t, &pair.e, &rho, DEFAULT_TOL).unwrap());
    }

    #[test]
    fn strong_implies_weak_on_arbitrary_commuting_triples(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pair = CommutingPair::random(DIM, &mut r);
        let rho = random_density(DIM, &mut r);
        let check = check_prop_2_1(&pair.t, &pair.e, &rho, DEFAULT_TOL).unwrap();
        prop_assert!(check.commutes);
        if check.strong {
            prop_assert!(check.weak);
        }
    }

    #[test]
    fn decomposition_identity_holds_for_all_pairs(
        seed in any::<u64>(),
        ranks in (0usize..=DIM, 0usize..=DIM),
    ) {
        let mut r = rng(seed);
        let e = random_projector(DIM, ranks.0, &mut r);
        let f = random_projector(DIM, ranks.1, &mut r);
        let rho = random_density(DIM, &mut r);
        let marginal = trace_product(&[rho.op(), f.op()]).unwrap().re;
        let direct = p_and(&e, &f, &rho).unwrap()
            + p_and(&e.complement(), &f, &rho).unwrap()
            + interference_term(&e, &f, &rho).unwrap();
        prop_assert!((marginal - direct).abs() <= 1e-9);
        // The difference-form interference agrees with the trace form.
        let report = check_c3(&e, &f, &rho, DEFAULT_TOL).unwrap();
        let trace_form = interference_term(&e, &f, &rho).unwrap();
        prop_assert!((report.interference - trace_form).abs() <= 1e-9);
    }

    #[test]
    fn conditionals_agree_across_strong_pairs(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pair = CommutingPair::random(DIM, &mut r);
        let rho = pair.strong_density(&mut r);
        let f = pair.joint_commutant_member(&mut r);
        let via_t = cond_prob(&f, &pair.t, &rho, DEFAULT_TOL).unwrap();
        let via_e = cond_prob(&f, &pair.e, &rho, DEFAULT_TOL).unwrap();
        prop_assert!((via_t - via_e).abs() <= 1e-9);
        let via_t_comp = cond_prob(&f, &pair.t.complement(), &rho, DEFAULT_TOL).unwrap();
        let via_e_comp = cond_prob(&f, &pair.e.complement(), &rho, DEFAULT_TOL).unwrap();
        prop_assert!((via_t_comp - via_e_comp).abs() <= 1e-9);
    }

    #[test]
    fn joint_routing_holds_on_random_strong_triples(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pair = CommutingPair::random(DIM, &mut r);
        let rho = pair.strong_density(&mut r);
        let members: Vec<_> = (0..5).map(|_| pair.commutant_member(&mut r)).collect();
        let domain = CommutantDomain::new(pair.t.clone(), members, 1e-9).unwrap();
        prop_assert!(check_theorem_4_2(&pair.t, &pair.e, &domain, &rho, 1e-9).unwrap());
    }

    #[test]
    fn additivity_conditions_hold_on_random_commuting_structures(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pair = CommutingPair::random(DIM, &mut r);
        let rho = random_density(DIM, &mut r);
        let members: Vec<_> = (0..4).map(|_| pair.joint_commutant_member(&mut r)).collect();
        let domain = CommutantDomain::new(pair.t.clone(), members, 1e-9).unwrap();
        prop_assert!(check_c1(&pair.e, &domain, &rho, 1e-9).unwrap());

        let f = pair.commutant_member(&mut r);
        let family = f.rank_one_family();
        if !family.is_empty() {
            prop_assert!(check_c2(&pair.e, &family, &rho, 1e-9).unwrap());
        }
    }

    #[test]
    fn joint_distribution_marginals_match_expectations(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pair = CommutingPair::random(DIM, &mut r);
        let rho = random_density(DIM, &mut r);
        let plan = MeasurementPlan::new(
            vec![
                ("T".to_string(), pair.t.clone()),
                ("E".to_string(), pair.e.clone()),
            ],
            1e-9,
        )
        .unwrap();
        let dist = joint_distribution(&plan, &rho).unwrap();
        let total: f64 = dist.probs().iter().sum();
        prop_assert!((total - 1.0).abs() <= 1e-10);
        for p in dist.probs() {
            prop_assert!(*p >= -1e-10 && *p <= 1.0 + 1e-10);
        }
        for (name, proj) in [("T", &pair.t), ("E", &pair.e)] {
            let expected = trace_product(&[rho.op(), proj.op()]).unwrap().re;
            prop_assert!((dist.marginal(name).unwrap() - expected).abs() <= 1e-10);
        }
    }

    #[test]
    fn sampled_supports_roundtrip_through_text(seed in any::<u64>(), n in 1usize..40) {
        let mut r = rng(seed);
        let pair = CommutingPair::random(DIM, &mut r);
        let rho = pair.strong_density(&mut r);
        let plan = MeasurementPlan::new(
            vec![
                ("T".to_string(), pair.t.clone()),
                ("E".to_string(), pair.e.clone()),
            ],
            1e-9,
        )
        .unwrap();
        let support = sample_support(&plan, &rho, n, seed).unwrap();
        let parsed = parse_support_text(&support.to_text()).unwrap();
        prop_assert_eq!(parsed.seed, seed);
        prop_assert_eq!(parsed.n, n);
        prop_assert_eq!(parsed.specimens.len(), support.specimens().len());
        for (got, want) in parsed.specimens.iter().zip(support.specimens()) {
            prop_assert_eq!(got, want);
        }
        // Strong pair: no discordant specimen, ever.
        let discordant = support.count_where(|s| {
            s.value("T").unwrap() != s.value("E").unwrap()
        });
        prop_assert_eq!(discordant, 0);
    }

    #[test]
    fn commutator_vanishes_iff_pair_built_commuting(seed in any::<u64>()) {
        let mut r = rng(seed);
        let pair = CommutingPair::random(DIM, &mut r);
        prop_assert!(commutator(pair.t.op(), pair.e.op()).unwrap().max_norm() <= 1e-12);
        let member = pair.commutant_member(&mut r);
        prop_assert!(commutator(member.op(), pair.t.op()).unwrap().max_norm() <= 1e-12);
    }
}
