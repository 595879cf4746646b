//! Evaluation relations between a target observable T and an evaluated one E.
//!
//! The strong relation asks for `[T̂, Ê] = 0` together with `T̂ρ = Êρ`; the
//! weak relation asks that the two discordant-outcome probabilities
//! `Tr(ρT̂(1−Ê))` and `Tr(ρ(1−T̂)Ê)` vanish. The strong relation implies the
//! weak one; the verification suites assert that implication on every triple
//! they touch.

use crate::error::{Error, Result};
use crate::opalg::{commutator, trace_product, DensityOperator, Projector};

/// Full diagnostic record for one (T, E, ρ) triple.
#[derive(Clone, Debug, PartialEq)]
pub struct EvaluationCheck {
    /// `‖[T̂,Ê]‖ ≤ tol`.
    pub commutes: bool,
    /// `‖T̂ρ − Êρ‖` in max-norm.
    pub residual_te: f64,
    /// `Tr(ρT̂(1−Ê))`, real part.
    pub prob_10: f64,
    /// `Tr(ρ(1−T̂)Ê)`, real part.
    pub prob_01: f64,
    /// Strong relation verdict.
    pub strong: bool,
    /// Weak relation verdict (only meaningful when `commutes`).
    pub weak: bool,
}

fn check_dims(t: &Projector, e: &Projector, rho: &DensityOperator) -> Result<()> {
    if t.dim() != e.dim() {
        return Err(Error::DimensionMismatch {
            left: t.dim(),
            right: e.dim(),
        });
    }
    if t.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            left: t.dim(),
            right: rho.dim(),
        });
    }
    Ok(())
}

/// Discordant-outcome probabilities `(Tr(ρT̂(1−Ê)), Tr(ρ(1−T̂)Ê))` as complex
/// traces; their imaginary parts vanish whenever T̂ and Ê commute.
fn discordance(t: &Projector, e: &Projector, rho: &DensityOperator) -> (f64, f64, f64, f64) {
    let e_comp = e.complement();
    let t_comp = t.complement();
    let p10 = trace_product(&[rho.op(), t.op(), e_comp.op()]).expect("dims checked");
    let p01 = trace_product(&[rho.op(), t_comp.op(), e.op()]).expect("dims checked");
    (p10.re, p10.im, p01.re, p01.im)
}

/// Whether the strong relation holds: `‖[T̂,Ê]‖ ≤ tol` and `‖T̂ρ − Êρ‖ ≤ tol`.
pub fn strong_evaluates(
    t: &Projector,
    e: &Projector,
    rho: &DensityOperator,
    tol: f64,
) -> Result<bool> {
    check_dims(t, e, rho)?;
    let comm = commutator(t.op(), e.op())?;
    if comm.max_norm() > tol {
        return Ok(false);
    }
    let residual = (&(t.op() * rho.op()) - &(e.op() * rho.op())).max_norm();
    Ok(residual <= tol)
}

/// Whether the weak relation holds: both discordance probabilities ≤ tol.
///
/// Commutation is a precondition, not part of the verdict: a non-commuting
/// pair admits no joint measurement in the first place, so the relation is
/// not even well-posed and the call fails with [`Error::NonCommuting`].
pub fn weak_evaluates(
    t: &Projector,
    e: &Projector,
    rho: &DensityOperator,
    tol: f64,
) -> Result<bool> {
    check_dims(t, e, rho)?;
    let comm_norm = commutator(t.op(), e.op())?.max_norm();
    if comm_norm > tol {
        return Err(Error::NonCommuting {
            residual: comm_norm,
        });
    }
    let (p10, _, p01, _) = discordance(t, e, rho);
    Ok(p10.abs() <= tol && p01.abs() <= tol)
}

/// Computes the full [`EvaluationCheck`] record for a triple.
pub fn check_prop_2_1(
    t: &Projector,
    e: &Projector,
    rho: &DensityOperator,
    tol: f64,
) -> Result<EvaluationCheck> {
    check_dims(t, e, rho)?;
    let comm_norm = commutator(t.op(), e.op())?.max_norm();
    let commutes = comm_norm <= tol;
    let residual_te = (&(t.op() * rho.op()) - &(e.op() * rho.op())).max_norm();
    let (prob_10, _, prob_01, _) = discordance(t, e, rho);
    Ok(EvaluationCheck {
        commutes,
        residual_te,
        prob_10,
        prob_01,
        strong: commutes && residual_te <= tol,
        weak: commutes && prob_10.abs() <= tol && prob_01.abs() <= tol,
    })
}
