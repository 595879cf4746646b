//! Seeded generators for the randomized verification suites.
//!
//! Everything here is driven by a caller-supplied [`rand::Rng`], so a fixed
//! seed reproduces the exact same operators. The key construction is
//! [`CommutingPair`]: a pair of projectors diagonal in one shared random
//! orthonormal basis, from which one can draw densities making the strong
//! relation hold exactly and projectors lying in either commutant.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::opalg::{DensityOperator, Operator, Projector, StateVector};
use crate::DEFAULT_TOL;

fn random_complex(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

fn random_square(dim: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    DMatrix::from_fn(dim, dim, |_, _| random_complex(rng))
}

/// A random unitary: Q factor of a full-rank random complex matrix.
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> DMatrix<Complex64> {
    loop {
        let q = random_square(dim, rng).qr().q();
        // A rank-deficient draw (measure zero, but cheap to guard) would leave
        // near-zero columns; accept only a numerically unitary Q.
        let defect = (&q.adjoint() * &q - DMatrix::<Complex64>::identity(dim, dim))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if defect <= 1e-12 {
            return q;
        }
    }
}

/// A random unit vector.
pub fn random_state(dim: usize, rng: &mut impl Rng) -> StateVector {
    loop {
        let amps: Vec<Complex64> = (0..dim).map(|_| random_complex(rng)).collect();
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            let scaled = amps.into_iter().map(|z| z / norm).collect();
            return StateVector::new(scaled, DEFAULT_TOL).expect("normalized by construction");
        }
    }
}

/// A random full-support density operator `U diag(w) U†` with random weights.
pub fn random_density(dim: usize, rng: &mut impl Rng) -> DensityOperator {
    let u = random_unitary(dim, rng);
    let raw: Vec<f64> = (0..dim).map(|_| rng.random_range(0.01..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut diag = DMatrix::<Complex64>::zeros(dim, dim);
    for (i, w) in raw.iter().enumerate() {
        diag[(i, i)] = Complex64::new(w / total, 0.0);
    }
    let mat = &u * diag * u.adjoint();
    DensityOperator::certify(
        Operator::from_matrix(mat).expect("square by construction"),
        DEFAULT_TOL,
    )
    .expect("unitary conjugation of a probability diagonal is a density operator")
}

fn projector_from_columns(cols: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    cols * cols.adjoint()
}

/// A random rank-`rank` projector `V V†` from `rank` orthonormal columns.
pub fn random_projector(dim: usize, rank: usize, rng: &mut impl Rng) -> Projector {
    assert!(rank <= dim, "rank {rank} exceeds dimension {dim}");
    if rank == 0 {
        return Projector::zero(dim);
    }
    let u = random_unitary(dim, rng);
    let v = u.columns(0, rank).into_owned();
    certify_assembled(projector_from_columns(&v))
}

fn certify_assembled(mat: DMatrix<Complex64>) -> Projector {
    Projector::certify(
        Operator::from_matrix(mat).expect("square by construction"),
        DEFAULT_TOL,
    )
    .expect("orthonormal-column assembly yields a projector")
}

/// Splits the columns of a basis into groups, draws an independent random
/// sub-projector inside each group's span, and sums them. The result commutes
/// with every operator that is constant on each group's span.
fn block_projector(
    basis: &DMatrix<Complex64>,
    groups: &[Vec<usize>],
    rng: &mut impl Rng,
) -> Projector {
    let dim = basis.nrows();
    let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
    for group in groups {
        if group.is_empty() {
            continue;
        }
        let rank = rng.random_range(0..=group.len());
        if rank == 0 {
            continue;
        }
        let b = DMatrix::from_fn(dim, group.len(), |i, j| basis[(i, group[j])]);
        let w = random_unitary(group.len(), rng);
        let a = &b * w.columns(0, rank).into_owned();
        acc += projector_from_columns(&a);
    }
    certify_assembled(acc)
}

/// A random projector commuting with `t`, drawn block-diagonally in `t`'s
/// eigenbasis (one block for each of the eigenvalues 1 and 0). This
/// parametrizes exactly the projectors of `t`'s commutant.
pub fn random_commutant_projector(t: &Projector, rng: &mut impl Rng) -> Projector {
    let (values, vectors) = t.op().hermitian_eigen();
    let mut ones = Vec::new();
    let mut zeros = Vec::new();
    for (k, lambda) in values.iter().enumerate() {
        if *lambda > 0.5 {
            ones.push(k);
        } else {
            zeros.push(k);
        }
    }
    block_projector(&vectors, &[ones, zeros], rng)
}

/// Two projectors diagonal in one shared random orthonormal basis, together
/// with their diagonal 0/1 patterns. Guaranteed non-trivial: each projector
/// has rank strictly between 0 and `dim`, and the patterns agree on at least
/// one basis vector with value 1 and one with value 0.
#[derive(Clone, Debug)]
pub struct CommutingPair {
    basis: DMatrix<Complex64>,
    t_bits: Vec<bool>,
    e_bits: Vec<bool>,
    /// First projector of the pair.
    pub t: Projector,
    /// Second projector; commutes with `t` by construction.
    pub e: Projector,
}

impl CommutingPair {
    /// Draws a pair at dimension `dim ≥ 4`.
    pub fn random(dim: usize, rng: &mut impl Rng) -> Self {
        assert!(dim >= 4, "need dimension at least 4 for a non-trivial pair");
        let basis = random_unitary(dim, rng);
        let (t_bits, e_bits) = loop {
            let t: Vec<bool> = (0..dim).map(|_| rng.random_bool(0.5)).collect();
            let e: Vec<bool> = (0..dim).map(|_| rng.random_bool(0.5)).collect();
            let nontrivial = |bits: &[bool]| {
                let ones = bits.iter().filter(|b| **b).count();
                ones > 0 && ones < dim
            };
            let both_one = t.iter().zip(&e).any(|(a, b)| *a && *b);
            let both_zero = t.iter().zip(&e).any(|(a, b)| !*a && !*b);
            if nontrivial(&t) && nontrivial(&e) && both_one && both_zero {
                break (t, e);
            }
        };
        let t = Self::pattern_projector(&basis, &t_bits);
        let e = Self::pattern_projector(&basis, &e_bits);
        Self {
            basis,
            t_bits,
            e_bits,
            t,
            e,
        }
    }

    fn pattern_projector(basis: &DMatrix<Complex64>, bits: &[bool]) -> Projector {
        let cols: Vec<usize> = (0..bits.len()).filter(|i| bits[*i]).collect();
        let b = DMatrix::from_fn(basis.nrows(), cols.len(), |i, j| basis[(i, cols[j])]);
        certify_assembled(projector_from_columns(&b))
    }

    fn classes(&self) -> [Vec<usize>; 4] {
        let mut out: [Vec<usize>; 4] = Default::default();
        for i in 0..self.t_bits.len() {
            let idx = (self.t_bits[i] as usize) * 2 + (self.e_bits[i] as usize);
            out[idx].push(i);
        }
        out // [00, 01, 10, 11]
    }

    /// A density operator making the strong relation between `t` and `e` hold
    /// exactly: random weights placed only on basis vectors where the two 0/1
    /// patterns agree, so `T̂ρ = Êρ` termwise.
    pub fn strong_density(&self, rng: &mut impl Rng) -> DensityOperator {
        let dim = self.t_bits.len();
        let agree: Vec<usize> = (0..dim)
            .filter(|i| self.t_bits[*i] == self.e_bits[*i])
            .collect();
        let raw: Vec<f64> = agree.iter().map(|_| rng.random_range(0.01..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let mut mat = DMatrix::<Complex64>::zeros(dim, dim);
        for (k, i) in agree.iter().enumerate() {
            let v = self.basis.column(*i);
            mat += (v * v.adjoint()).scale(raw[k] / total);
        }
        DensityOperator::certify(
            Operator::from_matrix(mat).expect("square by construction"),
            DEFAULT_TOL,
        )
        .expect("convex combination of orthogonal pure states is a density operator")
    }

    /// A random member of `t`'s commutant (need not commute with `e`): a
    /// block-diagonal draw over the rank and kernel spaces of `t`.
    pub fn commutant_member(&self, rng: &mut impl Rng) -> Projector {
        let dim = self.t_bits.len();
        let ones: Vec<usize> = (0..dim).filter(|i| self.t_bits[*i]).collect();
        let zeros: Vec<usize> = (0..dim).filter(|i| !self.t_bits[*i]).collect();
        block_projector(&self.basis, &[ones, zeros], rng)
    }

    /// A random projector commuting with both `t` and `e`: block-diagonal
    /// over the four joint (t, e) eigenvalue classes.
    pub fn joint_commutant_member(&self, rng: &mut impl Rng) -> Projector {
        block_projector(&self.basis, &self.classes(), rng)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ghsz;
    use crate::opalg::commutator;
    use crate::relations::strong_evaluates;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    #[test]
    fn unitary_satisfies_isometry() {
        let mut r = rng(1);
        let u = random_unitary(8, &mut r);
        let defect = (&u.adjoint() * &u - DMatrix::<Complex64>::identity(8, 8))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        assert!(defect <= 1e-12);
    }

    #[test]
    fn generators_produce_certified_objects() {
        let mut r = rng(2);
        let psi = random_state(16, &mut r);
        assert_eq!(psi.dim(), 16);
        let rho = random_density(8, &mut r);
        assert_eq!(rho.dim(), 8);
        let p = random_projector(8, 3, &mut r);
        assert!((p.op().trace().re - 3.0).abs() <= 1e-10);
        assert_eq!(random_projector(4, 0, &mut r).op().max_norm(), 0.0);
    }

    #[test]
    fn commuting_pair_commutes_and_is_nontrivial() {
        for seed in 0..5 {
            let mut r = rng(seed);
            let pair = CommutingPair::random(8, &mut r);
            let norm = commutator(pair.t.op(), pair.e.op()).unwrap().max_norm();
            assert!(norm <= 1e-12, "seed {seed}: {norm}");
            let rank_t = pair.t.op().trace().re;
            assert!(rank_t > 0.5 && rank_t < 7.5);
        }
    }

    #[test]
    fn strong_density_realizes_the_strong_relation() {
        for seed in 0..5 {
            let mut r = rng(100 + seed);
            let pair = CommutingPair::random(8, &mut r);
            let rho = pair.strong_density(&mut r);
            assert!(strong_evaluates(&pair.t, &pair.e, &rho, DEFAULT_TOL).unwrap());
        }
    }

    #[test]
    fn commutant_members_commute_as_promised() {
        let mut r = rng(7);
        let pair = CommutingPair::random(8, &mut r);
        for _ in 0..10 {
            let f = pair.commutant_member(&mut r);
            assert!(commutator(f.op(), pair.t.op()).unwrap().max_norm() <= 1e-12);
            let g = pair.joint_commutant_member(&mut r);
            assert!(commutator(g.op(), pair.t.op()).unwrap().max_norm() <= 1e-12);
            assert!(commutator(g.op(), pair.e.op()).unwrap().max_norm() <= 1e-12);
        }
    }

    #[test]
    fn eigenbasis_commutant_projector_commutes_with_concrete_target() {
        let derived = ghsz::build_derived(&ghsz::build_seven());
        let mut r = rng(11);
        for _ in 0..10 {
            let f = random_commutant_projector(&derived.n, &mut r);
            let norm = commutator(f.op(), derived.n.op()).unwrap().max_norm();
            assert!(norm <= 1e-9, "residual {norm}");
        }
    }

    #[test]
    fn fixed_seed_reproduces_draws() {
        let mut a = rng(99);
        let mut b = rng(99);
        let ua = random_unitary(6, &mut a);
        let ub = random_unitary(6, &mut b);
        assert_eq!(ua, ub);
        let pa = CommutingPair::random(6, &mut a);
        let pb = CommutingPair::random(6, &mut b);
        assert_eq!(pa.t.op(), pb.t.op());
        assert_eq!(pa.e.op(), pb.e.op());
    }
}
