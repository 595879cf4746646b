//! Suite drivers behind the `qeval` binary: the fixed-fixture verification
//! suite, the randomized theorem suite, and the sampling front-end. Each
//! driver returns a [`VerificationReport`]; rendering and exit codes live in
//! the binary.

use std::time::Instant;

use num_complex::Complex64;

use qeval::contradiction::{
    consistency_analysis, constraint_product, enumerate_satisfying, enumerate_satisfying_among,
    SignAssignment,
};
use qeval::ghsz::{self, Catalog};
use qeval::jointprob::{
    check_c1, check_c2, check_c3, check_theorem_4_2, cond_prob, interference_term, p_and,
    CommutantDomain,
};
use qeval::opalg::{
    commutator, pure_state_density, tensor, trace_product, DensityOperator, Operator, Projector,
    StateVector,
};
use qeval::random::{random_commutant_projector, random_density, random_projector, CommutingPair};
use qeval::relations::check_prop_2_1;
use qeval::report::{VerificationReport, Witness};
use qeval::simulator::{frequency_table, sample_support, FrequencyRow, MeasurementPlan, Support};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Output rendering for reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Json,
}

/// Renders a report in the chosen format.
pub fn render(report: &VerificationReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => report.to_text(),
        OutputFormat::Json => {
            let mut json = report.to_json();
            json.push('\n');
            json
        }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Fixed-fixture suite: state and observable construction, commutation
/// structure, the four strong relations, the consistency analysis, and the
/// exhaustive sign-assignment enumeration.
pub fn verify_ghsz(tol: f64) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("verify-ghsz", 0, tol);

    let psi = ghsz::build_state();
    let rho = ghsz::state_density();
    let seven = ghsz::build_seven();
    let derived = ghsz::build_derived(&seven);

    // Reference state: unit norm and the two expected amplitudes.
    let norm_residual = (psi.amplitudes().norm() - 1.0).abs();
    report.push(
        "state.normalized",
        "2.3",
        norm_residual <= tol,
        Witness::Residual(norm_residual),
    );
    let s = 1.0 / 2.0_f64.sqrt();
    let mut amp_residual = 0.0_f64;
    for i in 0..ghsz::DIM {
        let expected = match i {
            0b0011 => c(s, 0.0),
            0b1100 => c(-s, 0.0),
            _ => c(0.0, 0.0),
        };
        amp_residual = amp_residual.max((psi.amplitude(i) - expected).norm());
    }
    report.push(
        "state.support_amplitudes",
        "2.3",
        amp_residual <= tol,
        Witness::Residual(amp_residual),
    );

    // The seven elementary observables are projectors of rank 8.
    let mut certify_residual = 0.0_f64;
    let mut rank_residual = 0.0_f64;
    for (_, p) in seven.named() {
        let idem = (&(p.op() * p.op()) - p.op()).max_norm();
        let adj = (p.op() - &p.op().adjoint()).max_norm();
        certify_residual = certify_residual.max(idem).max(adj);
        rank_residual = rank_residual.max((p.op().trace() - c(8.0, 0.0)).norm());
    }
    report.push(
        "seven.projectors_certified",
        "2.3",
        certify_residual <= tol,
        Witness::Residual(certify_residual),
    );
    report.push(
        "seven.half_rank",
        "2.3",
        rank_residual <= tol,
        Witness::Residual(rank_residual),
    );

    // The measured family commutes pairwise.
    let family = seven.measured_family();
    let mut family_residual = 0.0_f64;
    for i in 0..family.len() {
        for j in (i + 1)..family.len() {
            let norm = commutator(family[i].op(), family[j].op())
                .expect("fixture dims agree")
                .max_norm();
            family_residual = family_residual.max(norm);
        }
    }
    report.push(
        "family.pairwise_commute",
        "2.3",
        family_residual <= tol,
        Witness::Residual(family_residual),
    );

    // All three same-site alternative pairs are genuinely incompatible.
    let mut min_incompatible = f64::INFINITY;
    for (_, a, b) in seven.incompatible_pairs() {
        let norm = commutator(a.op(), b.op())
            .expect("fixture dims agree")
            .max_norm();
        min_incompatible = min_incompatible.min(norm);
    }
    report.push(
        "family.same_site_incompatible",
        "2.3",
        min_incompatible >= 0.1,
        Witness::Residual(min_incompatible),
    );

    // Derived projectors certify.
    let mut derived_residual = 0.0_f64;
    for (_, p) in derived.named() {
        let idem = (&(p.op() * p.op()) - p.op()).max_norm();
        let adj = (p.op() - &p.op().adjoint()).max_norm();
        derived_residual = derived_residual.max(idem).max(adj);
    }
    report.push(
        "derived.projectors_certified",
        "2.3",
        derived_residual <= tol,
        Witness::Residual(derived_residual),
    );

    // Equal expectations across each strong pair.
    let strong_pairs = [
        (&derived.m, &seven.g_alpha),
        (&derived.n, &seven.e_beta),
        (&derived.r, &seven.l_beta),
        (&derived.s, &seven.l_beta),
    ];
    let mut trace_residual = 0.0_f64;
    for (t, e) in strong_pairs {
        let tt = trace_product(&[rho.op(), t.op()])
            .expect("fixture dims agree")
            .re;
        let te = trace_product(&[rho.op(), e.op()])
            .expect("fixture dims agree")
            .re;
        trace_residual = trace_residual.max((tt - te).abs());
    }
    report.push(
        "expectations.strong_pairs_match",
        "2.3",
        trace_residual <= tol,
        Witness::Residual(trace_residual),
    );

    // Commutation analysis and the four strong relations.
    report.extend(consistency_analysis(&seven, &derived, &rho, tol));

    // Exhaustive enumeration of the sign-assignment system.
    let full = enumerate_satisfying();
    report.push(
        "enum.full_system",
        "2.4",
        full.is_empty(),
        Witness::Count(full.len() as i64),
    );
    let mut min_solutions = usize::MAX;
    for dropped in 0..4 {
        let active: Vec<usize> = (0..4).filter(|k| *k != dropped).collect();
        min_solutions = min_solutions.min(enumerate_satisfying_among(&active).len());
    }
    report.push(
        "enum.three_subsets_satisfiable",
        "2.4",
        min_solutions >= 1,
        Witness::Count(min_solutions as i64),
    );
    let bad_products = (0..128u8)
        .filter(|idx| constraint_product(&SignAssignment::from_index(*idx)) != (1, -1))
        .count();
    report.push(
        "enum.product_identity",
        "2.3",
        bad_products == 0,
        Witness::Count(bad_products as i64),
    );

    report.runtime_ms = start.elapsed().as_millis() as u64;
    report
}

/// Randomized theorem suite plus the concrete reference instances. All
/// randomness is drawn from one stream seeded by `seed`, so the report is a
/// deterministic function of `(tol, seed, trials)`.
pub fn verify_theorems(tol: f64, seed: u64, trials: usize) -> VerificationReport {
    let start = Instant::now();
    let mut report = VerificationReport::new("verify-theorems", seed, tol);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let trials = trials.max(1);
    // Equality claims compare quantities assembled from chains of dim-8
    // products; allow one order of magnitude over the exact-zero tolerance.
    let eq_tol = tol * 10.0;

    const DIM: usize = 8;

    let mut weak_failures: i64 = 0;
    let mut max_discordance = 0.0_f64;
    let mut max_conditionals = 0.0_f64;
    let mut max_conditionals_primed = 0.0_f64;
    let mut additivity_failures: i64 = 0;
    let mut spectral_failures: i64 = 0;
    let mut max_routing = 0.0_f64;
    let mut max_strong_interference = 0.0_f64;
    let mut noncommuting_members: i64 = 0;
    let mut structural_failures: i64 = 0;

    for _ in 0..trials {
        let pair = CommutingPair::random(DIM, &mut rng);
        let rho = pair.strong_density(&mut rng);

        match check_prop_2_1(&pair.t, &pair.e, &rho, tol) {
            Ok(check) if check.strong && check.weak => {
                max_discordance = max_discordance
                    .max(check.prob_10.abs())
                    .max(check.prob_01.abs());
            }
            _ => weak_failures += 1,
        }

        // Conditional equalities with a member commuting with both sides.
        let f_joint = pair.joint_commutant_member(&mut rng);
        let conditionals = (|| -> qeval::Result<(f64, f64)> {
            let via_t = cond_prob(&f_joint, &pair.t, &rho, tol)?;
            let via_e = cond_prob(&f_joint, &pair.e, &rho, tol)?;
            let via_t_c = cond_prob(&f_joint, &pair.t.complement(), &rho, tol)?;
            let via_e_c = cond_prob(&f_joint, &pair.e.complement(), &rho, tol)?;
            Ok(((via_t - via_e).abs(), (via_t_c - via_e_c).abs()))
        })();
        match conditionals {
            Ok((diff, diff_primed)) => {
                max_conditionals = max_conditionals.max(diff);
                max_conditionals_primed = max_conditionals_primed.max(diff_primed);
            }
            Err(_) => structural_failures += 1,
        }

        // Additivity over a domain of jointly commuting members.
        let joint_members: Vec<Projector> = (0..3)
            .map(|_| pair.joint_commutant_member(&mut rng))
            .collect();
        match CommutantDomain::new(pair.t.clone(), joint_members, tol) {
            Ok(domain) => match check_c1(&pair.e, &domain, &rho, eq_tol) {
                Ok(true) => {}
                _ => additivity_failures += 1,
            },
            Err(_) => additivity_failures += 1,
        }
        let spectral_source = pair.commutant_member(&mut rng);
        let spectral = spectral_source.rank_one_family();
        if !spectral.is_empty() {
            match check_c2(&pair.e, &spectral, &rho, eq_tol) {
                Ok(true) => {}
                _ => spectral_failures += 1,
            }
        }

        // The joint-probability equalities for members of the target's
        // commutant, including members that do not commute with E.
        for _ in 0..2 {
            let f = pair.commutant_member(&mut rng);
            let witness = commutator(f.op(), pair.e.op())
                .expect("dims agree")
                .max_norm();
            if witness >= 0.01 {
                noncommuting_members += 1;
            }
            let t_comp = pair.t.complement();
            let e_comp = pair.e.complement();
            let equalities = (|| -> qeval::Result<f64> {
                let via_t = trace_product(&[rho.op(), pair.t.op(), f.op()])?.re;
                let direct = p_and(&pair.e, &f, &rho)?;
                let via_t_comp = trace_product(&[rho.op(), t_comp.op(), f.op()])?.re;
                let direct_comp = p_and(&e_comp, &f, &rho)?;
                Ok((via_t - direct).abs().max((via_t_comp - direct_comp).abs()))
            })();
            match equalities {
                Ok(residual) => max_routing = max_routing.max(residual),
                Err(_) => structural_failures += 1,
            }
            match check_c3(&pair.e, &f, &rho, eq_tol) {
                Ok(c3) => {
                    max_strong_interference = max_strong_interference.max(c3.interference.abs())
                }
                Err(_) => structural_failures += 1,
            }
        }
    }

    report.push(
        "relations.strong_implies_weak",
        "Prop2.1",
        weak_failures == 0,
        Witness::Count(weak_failures),
    );
    report.push(
        "relations.discordance_bounded",
        "Prop2.1",
        max_discordance <= tol,
        Witness::Residual(max_discordance),
    );
    report.push(
        "conditionals.match",
        "(3.1)",
        max_conditionals <= eq_tol,
        Witness::Residual(max_conditionals),
    );
    report.push(
        "conditionals.match_primed",
        "(3.2)",
        max_conditionals_primed <= eq_tol,
        Witness::Residual(max_conditionals_primed),
    );
    report.push(
        "additivity.commuting_members",
        "(C.1)",
        additivity_failures == 0,
        Witness::Count(additivity_failures),
    );
    report.push(
        "additivity.spectral_family",
        "(C.2)",
        spectral_failures == 0,
        Witness::Count(spectral_failures),
    );
    report.push(
        "routing.joint_equalities",
        "Thm4.2",
        max_routing <= eq_tol && structural_failures == 0,
        Witness::Residual(max_routing),
    );
    report.push(
        "interference.vanishes_under_strong",
        "(C.3)",
        max_strong_interference <= eq_tol,
        Witness::Residual(max_strong_interference),
    );
    // One fifth of the trials must produce a genuinely noncommuting member
    // (20 at the default 100 trials); tiny runs carry no quota because a
    // single draw can legitimately land in the commuting corner.
    let required_noncommuting = (trials / 5) as i64;
    report.push(
        "routing.noncommuting_members",
        "Thm4.2",
        noncommuting_members >= required_noncommuting,
        Witness::Count(noncommuting_members),
    );

    // Universal decomposition identity on unstructured random triples.
    let mut max_decomp = 0.0_f64;
    for _ in 0..(10 * trials) {
        let rank_e = rng.random_range(0..=DIM);
        let rank_f = rng.random_range(0..=DIM);
        let e = random_projector(DIM, rank_e, &mut rng);
        let f = random_projector(DIM, rank_f, &mut rng);
        let rho = random_density(DIM, &mut rng);
        let marginal = trace_product(&[rho.op(), f.op()]).expect("dims agree").re;
        let total = p_and(&e, &f, &rho).expect("dims agree")
            + p_and(&e.complement(), &f, &rho).expect("dims agree")
            + interference_term(&e, &f, &rho).expect("dims agree");
        max_decomp = max_decomp.max((marginal - total).abs());
    }
    report.push(
        "decomp.identity",
        "4.1",
        max_decomp <= eq_tol,
        Witness::Residual(max_decomp),
    );

    // Reference-fixture instances.
    let seven = ghsz::build_seven();
    let derived = ghsz::build_derived(&seven);
    let rho0 = ghsz::state_density();

    // Interference of the incompatible site-0 pair in the reference state:
    // the value is recorded as the witness; the check asserts the two
    // computation routes agree. (The value itself happens to vanish here.)
    let via_diff = check_c3(&seven.e_alpha, &seven.e_beta, &rho0, tol)
        .expect("fixture dims agree")
        .interference;
    let via_trace =
        interference_term(&seven.e_alpha, &seven.e_beta, &rho0).expect("fixture dims agree");
    report.push(
        "interference.reference_pair_recorded",
        "4.1",
        (via_diff - via_trace).abs() <= eq_tol,
        Witness::Residual(via_diff),
    );

    // An explicit triple with interference far from zero: the site-0 basis
    // projector against E_alpha in the basis state |0000⟩.
    let z0 = Operator::from_row_major(2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
        .expect("2x2 literal");
    let f_z = Projector::certify(
        tensor(&z0, &Operator::identity(8)).expect("within cap"),
        1e-12,
    )
    .expect("exact projector");
    let mut ground = vec![c(0.0, 0.0); ghsz::DIM];
    ground[0] = c(1.0, 0.0);
    let ground_rho =
        pure_state_density(&StateVector::new(ground, 1e-12).expect("unit basis vector"));
    let witness_interference =
        interference_term(&seven.e_alpha, &f_z, &ground_rho).expect("fixture dims agree");
    report.push(
        "interference.nonzero_witness",
        "4.1",
        witness_interference.abs() >= 1e-3,
        Witness::Residual(witness_interference),
    );

    // Theorem instance on the reference relation with random commutant
    // members plus the deliberately incompatible member E_alpha.
    let mut members = vec![seven.e_alpha.clone()];
    for _ in 0..10 {
        members.push(random_commutant_projector(&derived.n, &mut rng));
    }
    let n_members = members.len() as i64;
    let reference_ok = CommutantDomain::new(derived.n.clone(), members, eq_tol)
        .and_then(|domain| check_theorem_4_2(&derived.n, &seven.e_beta, &domain, &rho0, eq_tol))
        .unwrap_or(false);
    report.push(
        "routing.reference_instance",
        "Thm4.2",
        reference_ok,
        Witness::Count(n_members),
    );

    report.runtime_ms = start.elapsed().as_millis() as u64;
    report
}

/// Result of a sampling run: the support plus its frequency table.
pub struct SimulationOutput {
    pub support: Support,
    pub rows: Vec<FrequencyRow>,
}

impl SimulationOutput {
    /// The serialized support.
    pub fn support_text(&self) -> String {
        self.support.to_text()
    }

    /// Frequency-vs-probability table, one outcome pattern per line.
    pub fn summary_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "plan={} n={} seed={}\n",
            self.support.plan().names().join(","),
            self.support.n(),
            self.support.seed
        ));
        out.push_str("pattern count frequency probability z\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{} {} {:.6} {:.6} {:.3}\n",
                row.pattern(),
                row.count,
                row.frequency,
                row.probability,
                row.z
            ));
        }
        out
    }
}

/// Parses a comma-separated plan over the built-in catalog, samples it in the
/// reference state, and tabulates frequencies.
pub fn simulate(plan_spec: &str, n: usize, seed: u64, tol: f64) -> qeval::Result<SimulationOutput> {
    let catalog = Catalog::new();
    let mut entries: Vec<(String, Projector)> = Vec::new();
    for raw in plan_spec.split(',') {
        let name = raw.trim();
        if name.is_empty() {
            continue;
        }
        entries.push((name.to_string(), catalog.resolve(name)?));
    }
    let plan = MeasurementPlan::new(entries, tol)?;
    let rho: DensityOperator = ghsz::state_density();
    let support = sample_support(&plan, &rho, n, seed)?;
    let rows = frequency_table(&support)?;
    Ok(SimulationOutput { support, rows })
}
