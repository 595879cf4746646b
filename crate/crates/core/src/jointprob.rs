//! Conditional probabilities and the joint-probability functional.
//!
//! For commuting pairs the usual conditional probability
//! `P(F|E) = Tr(ρF̂Ê)/Tr(ρÊ)` exists. For arbitrary pairs the joint
//! functional `p(E&F) = Tr(ρÊF̂Ê)` is still defined; it satisfies the
//! additivity conditions checked here, and the defect in the complementary
//! sum rule is the interference term `2 Re Tr(ρÊF̂Ê′)`:
//!
//! `Tr(ρF̂) = p(E&F) + p(E′&F) + 2 Re Tr(ρÊF̂Ê′)` for every pair.
//!
//! The headline result checked by [`check_theorem_4_2`]: when T strongly
//! evaluates E in ρ, then for every F commuting with T — including F that do
//! not commute with E — `p(E&F) = Tr(ρT̂F̂)`, `p(E′&F) = Tr(ρT̂′F̂)`, and the
//! interference vanishes.

use crate::error::{Error, Result};
use crate::opalg::{commutator, trace_product, DensityOperator, Projector};
use crate::relations::strong_evaluates;

/// A target projector together with projectors that commute with it.
#[derive(Clone, Debug)]
pub struct CommutantDomain {
    t: Projector,
    members: Vec<Projector>,
}

impl CommutantDomain {
    /// Validates that every member commutes with `t` within `tol`.
    pub fn new(t: Projector, members: Vec<Projector>, tol: f64) -> Result<Self> {
        for f in &members {
            if f.dim() != t.dim() {
                return Err(Error::DimensionMismatch {
                    left: t.dim(),
                    right: f.dim(),
                });
            }
            let residual = commutator(f.op(), t.op())?.max_norm();
            if residual > tol {
                return Err(Error::NonCommuting { residual });
            }
        }
        Ok(Self { t, members })
    }

    /// The anchor projector.
    pub fn t(&self) -> &Projector {
        &self.t
    }

    /// The validated members.
    pub fn members(&self) -> &[Projector] {
        &self.members
    }
}

/// Joint, complementary-joint, and marginal probabilities for one (E, F, ρ)
/// pair, with the interference defect between them.
#[derive(Clone, Debug, PartialEq)]
pub struct ConsistencyReport {
    /// `p(E&F) = Tr(ρÊF̂Ê)`.
    pub p_e_and_f: f64,
    /// `p(E′&F)` for the complement `E′ = 1 − E`.
    pub p_eprime_and_f: f64,
    /// Marginal `Tr(ρF̂)`.
    pub tr_rho_f: f64,
    /// `tr_rho_f − p_e_and_f − p_eprime_and_f`; algebraically equals
    /// `2 Re Tr(ρÊF̂Ê′)`.
    pub interference: f64,
    /// Whether the interference vanishes within the tolerance.
    pub c3_holds: bool,
}

fn check_pair_dims(a: &Projector, b: &Projector, rho: &DensityOperator) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    if a.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: rho.dim(),
        });
    }
    Ok(())
}

/// Conditional probability `P(F|E) = Tr(ρF̂Ê)/Tr(ρÊ)` for commuting F, E.
pub fn cond_prob(f: &Projector, e: &Projector, rho: &DensityOperator, tol: f64) -> Result<f64> {
    check_pair_dims(f, e, rho)?;
    let residual = commutator(f.op(), e.op())?.max_norm();
    if residual > tol {
        return Err(Error::NonCommuting { residual });
    }
    let denom = trace_product(&[rho.op(), e.op()])?.re;
    if denom <= tol {
        return Err(Error::ConditioningOnNull { prob: denom });
    }
    let numer = trace_product(&[rho.op(), f.op(), e.op()])?.re;
    Ok(numer / denom)
}

/// The joint-probability functional `p(E&F) = Tr(ρÊF̂Ê)`, defined for every
/// pair whether or not it commutes.
pub fn p_and(e: &Projector, f: &Projector, rho: &DensityOperator) -> Result<f64> {
    check_pair_dims(e, f, rho)?;
    Ok(trace_product(&[rho.op(), e.op(), f.op(), e.op()])?.re)
}

/// The interference term `2 Re Tr(ρÊF̂Ê′)` with `Ê′ = 1 − Ê`.
pub fn interference_term(e: &Projector, f: &Projector, rho: &DensityOperator) -> Result<f64> {
    check_pair_dims(e, f, rho)?;
    let e_comp = e.complement();
    Ok(2.0 * trace_product(&[rho.op(), e.op(), f.op(), e_comp.op()])?.re)
}

/// First additivity condition: for every domain member F commuting with E,
/// `p(E&F) = Tr(ρÊF̂)` and likewise for E′. Members that do not commute with
/// E are outside the condition's hypothesis and are skipped.
pub fn check_c1(
    e: &Projector,
    domain: &CommutantDomain,
    rho: &DensityOperator,
    tol: f64,
) -> Result<bool> {
    let e_comp = e.complement();
    for f in domain.members() {
        check_pair_dims(e, f, rho)?;
        if commutator(f.op(), e.op())?.max_norm() > tol {
            continue;
        }
        let plain = trace_product(&[rho.op(), e.op(), f.op()])?.re;
        if (p_and(e, f, rho)? - plain).abs() > tol {
            return Ok(false);
        }
        let plain_comp = trace_product(&[rho.op(), e_comp.op(), f.op()])?.re;
        if (p_and(&e_comp, f, rho)? - plain_comp).abs() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Second additivity condition: for a pairwise-orthogonal family summing to a
/// projector, `p(E&ΣF_j) = Σ p(E&F_j)`, for both E and E′.
pub fn check_c2(
    e: &Projector,
    family: &[Projector],
    rho: &DensityOperator,
    tol: f64,
) -> Result<bool> {
    let first = family.first().ok_or(Error::EmptyOperatorList)?;
    for f in family {
        check_pair_dims(e, f, rho)?;
    }
    for i in 0..family.len() {
        for j in (i + 1)..family.len() {
            let residual = (family[i].op() * family[j].op()).max_norm();
            if residual > tol {
                return Err(Error::NotOrthogonalFamily { residual });
            }
        }
    }
    let sum_op = family[1..]
        .iter()
        .fold(first.op().clone(), |acc, f| &acc + f.op());
    let sum = Projector::certify(sum_op, tol)?;

    let e_comp = e.complement();
    for target in [e, &e_comp] {
        let whole = p_and(target, &sum, rho)?;
        let mut parts = 0.0;
        for f in family {
            parts += p_and(target, f, rho)?;
        }
        if (whole - parts).abs() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Third condition: the complementary joint probabilities must exhaust the
/// marginal. Always returns the full report; `c3_holds` records the verdict.
pub fn check_c3(
    e: &Projector,
    f: &Projector,
    rho: &DensityOperator,
    tol: f64,
) -> Result<ConsistencyReport> {
    check_pair_dims(e, f, rho)?;
    let e_comp = e.complement();
    let p_e_and_f = p_and(e, f, rho)?;
    let p_eprime_and_f = p_and(&e_comp, f, rho)?;
    let tr_rho_f = trace_product(&[rho.op(), f.op()])?.re;
    let interference = tr_rho_f - p_e_and_f - p_eprime_and_f;
    Ok(ConsistencyReport {
        p_e_and_f,
        p_eprime_and_f,
        tr_rho_f,
        interference,
        c3_holds: interference.abs() <= tol,
    })
}

/// When T strongly evaluates E in ρ, every member F of T's commutant must
/// satisfy `p(E&F) = Tr(ρT̂F̂)`, `p(E′&F) = Tr(ρT̂′F̂)`, and the vanishing-
/// interference condition — even members that do not commute with E.
pub fn check_theorem_4_2(
    t: &Projector,
    e: &Projector,
    domain: &CommutantDomain,
    rho: &DensityOperator,
    tol: f64,
) -> Result<bool> {
    if !strong_evaluates(t, e, rho, tol)? {
        return Err(Error::RelationNotSatisfied {
            detail: "target does not strongly evaluate the observable in this state".to_string(),
        });
    }
    let t_comp = t.complement();
    let e_comp = e.complement();
    for f in domain.members() {
        check_pair_dims(e, f, rho)?;
        let via_t = trace_product(&[rho.op(), t.op(), f.op()])?.re;
        if (p_and(e, f, rho)? - via_t).abs() > tol {
            return Ok(false);
        }
        let via_t_comp = trace_product(&[rho.op(), t_comp.op(), f.op()])?.re;
        if (p_and(&e_comp, f, rho)? - via_t_comp).abs() > tol {
            return Ok(false);
        }
        if !check_c3(e, f, rho, tol)?.c3_holds {
            return Ok(false);
        }
    }
    Ok(true)
}
