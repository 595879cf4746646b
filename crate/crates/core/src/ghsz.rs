//! A concrete four-qubit observable family with exactly known algebra.
//!
//! Four two-level sites are composed left-to-right, site 0 contributing the
//! most significant bit of the 16-dimensional basis index. Seven elementary
//! observables live on single sites (two incompatible choices on sites 0, 2,
//! and 3, one fixed choice on site 1) and four more projectors are derived
//! from triple products of their sign observables. Together with the
//! entangled reference state they form the fixture every verification suite
//! in this crate runs against.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::opalg::{
    f_affine, pure_state_density, tensor, DensityOperator, Operator, Projector, StateVector,
};
use crate::DEFAULT_TOL;

/// Number of two-level sites.
pub const SITES: usize = 4;

/// Hilbert-space dimension, `2^SITES`.
pub const DIM: usize = 16;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Single-site projector onto the +1 eigenvector of σx: `½ [[1, 1], [1, 1]]`.
pub fn plus_x() -> Projector {
    let op = Operator::from_row_major(2, &[c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0), c(0.5, 0.0)])
        .expect("2x2 literal");
    Projector::certify(op, DEFAULT_TOL).expect("plus_x is an exact projector")
}

/// Single-site projector onto the +1 eigenvector of σy: `½ [[1, −i], [i, 1]]`.
pub fn plus_y() -> Projector {
    let op = Operator::from_row_major(2, &[c(0.5, 0.0), c(0.0, -0.5), c(0.0, 0.5), c(0.5, 0.0)])
        .expect("2x2 literal");
    Projector::certify(op, DEFAULT_TOL).expect("plus_y is an exact projector")
}

/// Places a single-site operator at `site`, identity elsewhere.
fn embed(factor: &Operator, site: usize) -> Operator {
    assert!(site < SITES, "site {site} out of range");
    let mut acc = Operator::identity(1);
    for s in 0..SITES {
        let next = if s == site {
            factor.clone()
        } else {
            Operator::identity(2)
        };
        acc = tensor(&acc, &next).expect("four-site embedding stays within the dimension cap");
    }
    acc
}

fn embedded_projector(factor: &Projector, site: usize) -> Projector {
    Projector::certify(embed(factor.op(), site), DEFAULT_TOL)
        .expect("embedding preserves the projector property")
}

/// The seven elementary observables.
#[derive(Clone, Debug)]
pub struct SevenObservables {
    /// σx-type choice on site 0.
    pub e_alpha: Projector,
    /// σy-type choice on site 0.
    pub e_beta: Projector,
    /// The fixed observable on site 1.
    pub f: Projector,
    /// σx-type choice on site 2.
    pub g_alpha: Projector,
    /// σy-type choice on site 2.
    pub g_beta: Projector,
    /// σx-type choice on site 3.
    pub l_alpha: Projector,
    /// σy-type choice on site 3.
    pub l_beta: Projector,
}

impl SevenObservables {
    /// The four observables that a single run can measure together: one
    /// compatible choice per site.
    pub fn measured_family(&self) -> [&Projector; 4] {
        [&self.e_alpha, &self.f, &self.g_beta, &self.l_alpha]
    }

    /// The three same-site incompatible pairs.
    pub fn incompatible_pairs(&self) -> [(&'static str, &Projector, &Projector); 3] {
        [
            ("E_alpha/E_beta", &self.e_alpha, &self.e_beta),
            ("G_alpha/G_beta", &self.g_alpha, &self.g_beta),
            ("L_alpha/L_beta", &self.l_alpha, &self.l_beta),
        ]
    }

    /// Name/projector pairs in catalog order.
    pub fn named(&self) -> [(&'static str, &Projector); 7] {
        [
            ("E_alpha", &self.e_alpha),
            ("E_beta", &self.e_beta),
            ("F", &self.f),
            ("G_alpha", &self.g_alpha),
            ("G_beta", &self.g_beta),
            ("L_alpha", &self.l_alpha),
            ("L_beta", &self.l_beta),
        ]
    }
}

/// The four projectors derived from triple sign products.
#[derive(Clone, Debug)]
pub struct DerivedProjectors {
    /// `(1 − f(E_alpha) f(F) f(L_alpha)) / 2`.
    pub m: Projector,
    /// `(1 − f(F) f(G_beta) f(L_alpha)) / 2`.
    pub n: Projector,
    /// `(1 − f(E_beta) f(F) f(G_alpha)) / 2`.
    pub r: Projector,
    /// `(1 + f(E_alpha) f(F) f(G_beta)) / 2`.
    pub s: Projector,
}

impl DerivedProjectors {
    /// Name/projector pairs in catalog order.
    pub fn named(&self) -> [(&'static str, &Projector); 4] {
        [
            ("M", &self.m),
            ("N", &self.n),
            ("R", &self.r),
            ("S", &self.s),
        ]
    }
}

/// Builds the entangled reference state, `(|0011⟩ − |1100⟩)/√2`.
pub fn build_state() -> StateVector {
    let s = 1.0 / 2.0_f64.sqrt();
    let mut amps = vec![c(0.0, 0.0); DIM];
    amps[0b0011] = c(s, 0.0);
    amps[0b1100] = c(-s, 0.0);
    StateVector::new(amps, DEFAULT_TOL).expect("reference state is normalized")
}

/// The reference state as a density operator.
pub fn state_density() -> DensityOperator {
    pure_state_density(&build_state())
}

/// Builds the seven elementary observables.
pub fn build_seven() -> SevenObservables {
    SevenObservables {
        e_alpha: embedded_projector(&plus_x(), 0),
        e_beta: embedded_projector(&plus_y(), 0),
        f: embedded_projector(&plus_x(), 1),
        g_alpha: embedded_projector(&plus_x(), 2),
        g_beta: embedded_projector(&plus_y(), 2),
        l_alpha: embedded_projector(&plus_x(), 3),
        l_beta: embedded_projector(&plus_y(), 3),
    }
}

/// Builds the four derived projectors from the elementary seven.
pub fn build_derived(seven: &SevenObservables) -> DerivedProjectors {
    let fe_a = f_affine(&seven.e_alpha);
    let fe_b = f_affine(&seven.e_beta);
    let ff = f_affine(&seven.f);
    let fg_a = f_affine(&seven.g_alpha);
    let fg_b = f_affine(&seven.g_beta);
    let fl_a = f_affine(&seven.l_alpha);

    let half = c(0.5, 0.0);
    let id = Operator::identity(DIM);
    let from_sign_product = |prod: Operator, plus: bool| {
        let combined = if plus { &id + &prod } else { &id - &prod };
        Projector::certify(combined.scale(half), DEFAULT_TOL)
            .expect("sign-product combination is a projector by construction")
    };

    DerivedProjectors {
        m: from_sign_product(&(&fe_a * &ff) * &fl_a, false),
        n: from_sign_product(&(&ff * &fg_b) * &fl_a, false),
        r: from_sign_product(&(&fe_b * &ff) * &fg_a, false),
        s: from_sign_product(&(&fe_a * &ff) * &fg_b, true),
    }
}

/// Name-addressable access to the full fixture: the seven elementary
/// observables, the four derived projectors, and (via a `~` prefix) their
/// orthocomplements.
#[derive(Clone, Debug)]
pub struct Catalog {
    seven: SevenObservables,
    derived: DerivedProjectors,
    entries: Vec<(&'static str, Projector)>,
}

impl Default for Catalog {
    fn default() -> Self {
        Self::new()
    }
}

impl Catalog {
    /// Builds the full fixture.
    pub fn new() -> Self {
        let seven = build_seven();
        let derived = build_derived(&seven);
        let mut entries = Vec::with_capacity(11);
        for (name, p) in seven.named() {
            entries.push((name, p.clone()));
        }
        for (name, p) in derived.named() {
            entries.push((name, p.clone()));
        }
        Self {
            seven,
            derived,
            entries,
        }
    }

    /// The elementary observables.
    pub fn seven(&self) -> &SevenObservables {
        &self.seven
    }

    /// The derived projectors.
    pub fn derived(&self) -> &DerivedProjectors {
        &self.derived
    }

    /// All catalog names, in order.
    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|(name, _)| *name).collect()
    }

    /// Resolves a name to its projector; a `~` prefix takes the complement.
    pub fn resolve(&self, name: &str) -> Result<Projector> {
        let (base, complement) = match name.strip_prefix('~') {
            Some(rest) => (rest, true),
            None => (name, false),
        };
        let found = self
            .entries
            .iter()
            .find(|(n, _)| *n == base)
            .map(|(_, p)| p.clone())
            .ok_or_else(|| Error::UnknownObservable {
                name: name.to_string(),
            })?;
        Ok(if complement {
            found.complement()
        } else {
            found
        })
    }
}
