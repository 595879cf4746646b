//! Unsatisfiability of the four outcome constraints, by exhaustive search.
//!
//! A [`SignAssignment`] fixes simultaneous 0/1 outcomes for the seven
//! elementary observables; through `f(ξ) = 2ξ − 1` each outcome becomes a
//! sign. The four constraints relate products of these signs. Multiplying all
//! four constraint equations together forces `+1 = −1` — no assignment can
//! satisfy them jointly — and the enumeration below confirms that directly on
//! all 2⁷ = 128 cases, while any three of the four constraints remain
//! satisfiable. [`consistency_analysis`] runs the companion operator-level
//! checks: which observables the measured family can consistently assign
//! values to, and where that assignment provably breaks.

use crate::ghsz::{DerivedProjectors, SevenObservables};
use crate::opalg::{commutator, DensityOperator};
use crate::relations::check_prop_2_1;
use crate::report::{VerificationReport, Witness};

/// Simultaneous 0/1 outcomes for the seven elementary observables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignAssignment {
    pub eta_alpha: u8,
    pub eta_beta: u8,
    pub phi: u8,
    pub gamma_alpha: u8,
    pub gamma_beta: u8,
    pub lambda_alpha: u8,
    pub lambda_beta: u8,
}

impl SignAssignment {
    /// Decodes index `0..128`; bit 6 is `eta_alpha`, bit 0 is `lambda_beta`,
    /// so ascending index is lexicographic over the field order.
    pub fn from_index(index: u8) -> Self {
        assert!(index < 128, "assignment index {index} out of range");
        let bit = |k: u8| (index >> k) & 1;
        Self {
            eta_alpha: bit(6),
            eta_beta: bit(5),
            phi: bit(4),
            gamma_alpha: bit(3),
            gamma_beta: bit(2),
            lambda_alpha: bit(1),
            lambda_beta: bit(0),
        }
    }

    /// Inverse of [`SignAssignment::from_index`].
    pub fn index(&self) -> u8 {
        (self.eta_alpha << 6)
            | (self.eta_beta << 5)
            | (self.phi << 4)
            | (self.gamma_alpha << 3)
            | (self.gamma_beta << 2)
            | (self.lambda_alpha << 1)
            | self.lambda_beta
    }
}

/// The sign map `f(ξ) = 2ξ − 1` on 0/1 outcomes.
fn sign(v: u8) -> i32 {
    2 * i32::from(v) - 1
}

/// Left- and right-hand sides of the four constraints as ±1 integers.
fn constraint_sides(a: &SignAssignment) -> [(i32, i32); 4] {
    let ea = sign(a.eta_alpha);
    let eb = sign(a.eta_beta);
    let ph = sign(a.phi);
    let ga = sign(a.gamma_alpha);
    let gb = sign(a.gamma_beta);
    let la = sign(a.lambda_alpha);
    let lb = sign(a.lambda_beta);
    [
        (ea * ph, -(ga * la)),
        (eb * ph, -(gb * la)),
        (eb * ph, -(ga * lb)),
        (ea * ph, gb * lb),
    ]
}

/// Evaluates the four constraints on an assignment.
pub fn constraints_2_4(a: &SignAssignment) -> [bool; 4] {
    constraint_sides(a).map(|(lhs, rhs)| lhs == rhs)
}

/// Product of the four left-hand sides and of the four right-hand sides.
/// Every variable appears an even number of times on the left and each sign
/// flip survives on the right, so the result is `(+1, −1)` for every
/// assignment — the elementary-algebra form of the contradiction.
pub fn constraint_product(a: &SignAssignment) -> (i32, i32) {
    constraint_sides(a)
        .iter()
        .fold((1, 1), |(l, r), (lhs, rhs)| (l * lhs, r * rhs))
}

/// All assignments satisfying the constraints selected by `active`
/// (indices into the four constraints), in ascending index order.
pub fn enumerate_satisfying_among(active: &[usize]) -> Vec<SignAssignment> {
    (0..128u8)
        .map(SignAssignment::from_index)
        .filter(|a| {
            let verdicts = constraints_2_4(a);
            active.iter().all(|k| verdicts[*k])
        })
        .collect()
}

/// All assignments satisfying all four constraints — provably none.
pub fn enumerate_satisfying() -> Vec<SignAssignment> {
    enumerate_satisfying_among(&[0, 1, 2, 3])
}

/// Operator-level consistency analysis of value assignment by evaluation.
///
/// Checks three groups of facts at the reference state ρ₀ and reports each as
/// a separate claim: (a) the derived projectors M and N commute with all four
/// observables of the measured family; (b) the four strong relations hold;
/// (c) the two observables that R's definition rests on fail to commute with
/// the measured family's same-site choices, with commutator norms far from
/// zero.
pub fn consistency_analysis(
    seven: &SevenObservables,
    derived: &DerivedProjectors,
    rho0: &DensityOperator,
    tol: f64,
) -> VerificationReport {
    let mut report = VerificationReport::new("consistency", 0, tol);

    // (a) M and N are functions of measured-family members, hence commute
    // with all of them.
    let mut worst = 0.0_f64;
    for d in [&derived.m, &derived.n] {
        for member in seven.measured_family() {
            let norm = commutator(d.op(), member.op())
                .expect("fixture dims agree")
                .max_norm();
            worst = worst.max(norm);
        }
    }
    report.push(
        "analysis.functions_commute_with_family",
        "4.2",
        worst <= tol,
        Witness::Residual(worst),
    );

    // (b) The four strong relations.
    let relations = [
        ("analysis.strong.m_g_alpha", &derived.m, &seven.g_alpha),
        ("analysis.strong.n_e_beta", &derived.n, &seven.e_beta),
        ("analysis.strong.r_l_beta", &derived.r, &seven.l_beta),
        ("analysis.strong.s_l_beta", &derived.s, &seven.l_beta),
    ];
    for (claim, t, e) in relations {
        let check = check_prop_2_1(t, e, rho0, tol).expect("fixture dims agree");
        report.push(
            claim,
            "2.3",
            check.strong,
            Witness::Residual(check.residual_te),
        );
    }

    // (c) The same-site incompatibilities that block a consistent assignment
    // for the remaining observable.
    let blockers = [
        (
            "analysis.incompatible.e_beta_e_alpha",
            &seven.e_beta,
            &seven.e_alpha,
        ),
        (
            "analysis.incompatible.g_alpha_g_beta",
            &seven.g_alpha,
            &seven.g_beta,
        ),
    ];
    for (claim, a, b) in blockers {
        let norm = commutator(a.op(), b.op())
            .expect("fixture dims agree")
            .max_norm();
        report.push(claim, "4.2", norm >= 0.1, Witness::Residual(norm));
    }

    report
}
