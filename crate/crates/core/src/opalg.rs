//! Dense operator calculus: operators, projectors, density operators, states.
//!
//! Everything is backed by `nalgebra` dense matrices over `Complex64`.
//! Approximate comparisons use the componentwise max-norm (largest entry
//! modulus) against an explicit absolute tolerance. Certified wrappers
//! ([`Projector`], [`DensityOperator`], [`StateVector`]) can only be built
//! through constructors that verify their defining properties, so downstream
//! code may rely on those properties without rechecking.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::MAX_DIM;

/// A bounded linear operator on a finite-dimensional complex Hilbert space.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    mat: DMatrix<Complex64>,
}

impl Operator {
    /// Wraps a square matrix, enforcing the global dimension cap.
    pub fn from_matrix(mat: DMatrix<Complex64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch {
                left: mat.nrows(),
                right: mat.ncols(),
            });
        }
        check_dim(mat.nrows())?;
        Ok(Self { mat })
    }

    /// Builds a `dim`-dimensional operator from an entry function.
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self {
            mat: DMatrix::from_fn(dim, dim, f),
        })
    }

    /// Builds an operator from row-major entries; `data` must hold `dim * dim` values.
    pub fn from_row_major(dim: usize, data: &[Complex64]) -> Result<Self> {
        check_dim(dim)?;
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: data.len(),
                right: dim * dim,
            });
        }
        Ok(Self {
            mat: DMatrix::from_row_slice(dim, dim, data),
        })
    }

    /// The identity operator.
    ///
    /// # Panics
    /// Panics if `dim` is zero or exceeds the dimension cap; identities are
    /// only requested at dimensions the caller already validated.
    pub fn identity(dim: usize) -> Self {
        assert!(
            (1..=MAX_DIM).contains(&dim),
            "identity dimension {dim} out of range"
        );
        Self {
            mat: DMatrix::identity(dim, dim),
        }
    }

    /// The zero operator (same panic contract as [`Operator::identity`]).
    pub fn zeros(dim: usize) -> Self {
        assert!(
            (1..=MAX_DIM).contains(&dim),
            "zero-operator dimension {dim} out of range"
        );
        Self {
            mat: DMatrix::zeros(dim, dim),
        }
    }

    /// Space dimension the operator acts on.
    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Single entry access.
    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.mat[(row, col)]
    }

    /// Borrow of the backing matrix.
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.mat
    }

    /// Hermitian adjoint (conjugate transpose).
    pub fn adjoint(&self) -> Self {
        Self {
            mat: self.mat.adjoint(),
        }
    }

    /// Trace.
    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    /// Componentwise max-norm: the largest entry modulus.
    pub fn max_norm(&self) -> f64 {
        self.mat.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Scalar multiple.
    pub fn scale(&self, s: Complex64) -> Self {
        Self { mat: &self.mat * s }
    }

    /// Whether `‖A − A†‖ ≤ tol` in max-norm.
    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        (self - &self.adjoint()).max_norm() <= tol
    }

    /// Whether two operators agree entrywise within `tol` (false on dimension
    /// mismatch).
    pub fn approx_eq(&self, other: &Operator, tol: f64) -> bool {
        self.dim() == other.dim() && (self - other).max_norm() <= tol
    }

    /// Eigendecomposition of a self-adjoint operator: real eigenvalues plus
    /// the unitary matrix of column eigenvectors. Callers must have certified
    /// self-adjointness; the routine reads the matrix as Hermitian.
    pub(crate) fn hermitian_eigen(&self) -> (DVector<f64>, DMatrix<Complex64>) {
        let eig = self.mat.clone().symmetric_eigen();
        (eig.eigenvalues, eig.eigenvectors)
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim > MAX_DIM {
        return Err(Error::DimensionTooLarge { dim, max: MAX_DIM });
    }
    Ok(())
}

fn assert_same_dim(a: &Operator, b: &Operator) {
    assert_eq!(
        a.dim(),
        b.dim(),
        "operator dimensions disagree: {} vs {}",
        a.dim(),
        b.dim()
    );
}

impl Add<&Operator> for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        assert_same_dim(self, rhs);
        Operator {
            mat: &self.mat + &rhs.mat,
        }
    }
}

impl Sub<&Operator> for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        assert_same_dim(self, rhs);
        Operator {
            mat: &self.mat - &rhs.mat,
        }
    }
}

impl Mul<&Operator> for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        assert_same_dim(self, rhs);
        Operator {
            mat: &self.mat * &rhs.mat,
        }
    }
}

impl Neg for &Operator {
    type Output = Operator;
    fn neg(self) -> Operator {
        Operator { mat: -&self.mat }
    }
}

/// Tensor (Kronecker) product; errors if the product dimension exceeds the cap.
pub fn tensor(a: &Operator, b: &Operator) -> Result<Operator> {
    let dim = a.dim() * b.dim();
    check_dim(dim)?;
    Ok(Operator {
        mat: a.mat.kronecker(&b.mat),
    })
}

/// Commutator `AB − BA`.
pub fn commutator(a: &Operator, b: &Operator) -> Result<Operator> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(&(a * b) - &(b * a))
}

/// Trace of an operator product, `Tr(A₁ A₂ ⋯ Aₙ)`.
///
/// The two-factor case is computed as `Σᵢⱼ Aᵢⱼ Bⱼᵢ` without forming the
/// product; longer chains multiply out all but the last factor first.
pub fn trace_product(ops: &[&Operator]) -> Result<Complex64> {
    let first = *ops.first().ok_or(Error::EmptyOperatorList)?;
    for op in &ops[1..] {
        if op.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                left: first.dim(),
                right: op.dim(),
            });
        }
    }
    match ops.len() {
        1 => Ok(first.trace()),
        2 => Ok(trace_pair(ops[0], ops[1])),
        _ => {
            let head = ops[1..ops.len() - 1]
                .iter()
                .fold(ops[0].clone(), |acc, op| &acc * op);
            Ok(trace_pair(&head, ops[ops.len() - 1]))
        }
    }
}

fn trace_pair(a: &Operator, b: &Operator) -> Complex64 {
    let n = a.dim();
    let mut acc = Complex64::ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += a.mat[(i, j)] * b.mat[(j, i)];
        }
    }
    acc
}

/// A certified projection operator: self-adjoint and idempotent within the
/// tolerance it was certified at.
#[derive(Clone, Debug, PartialEq)]
pub struct Projector {
    op: Operator,
}

impl Projector {
    /// Certifies `‖P − P†‖ ≤ tol` and `‖P² − P‖ ≤ tol`, then wraps.
    pub fn certify(op: Operator, tol: f64) -> Result<Self> {
        let adj_residual = (&op - &op.adjoint()).max_norm();
        if adj_residual > tol {
            return Err(Error::NotSelfAdjoint {
                residual: adj_residual,
            });
        }
        let idem_residual = (&(&op * &op) - &op).max_norm();
        if idem_residual > tol {
            return Err(Error::NotIdempotent {
                residual: idem_residual,
            });
        }
        Ok(Self { op })
    }

    /// Wraps an operator that is a projector by construction (e.g. `v v†` for
    /// a unit vector). Debug builds still verify the defining properties.
    pub(crate) fn from_op_unchecked(op: Operator) -> Self {
        debug_assert!(
            op.is_self_adjoint(1e-9),
            "unchecked projector not self-adjoint"
        );
        debug_assert!(
            (&(&op * &op) - &op).max_norm() <= 1e-9,
            "unchecked projector not idempotent"
        );
        Self { op }
    }

    /// The zero projector (projects onto the trivial subspace).
    pub fn zero(dim: usize) -> Self {
        Self {
            op: Operator::zeros(dim),
        }
    }

    /// The identity projector (projects onto the whole space).
    pub fn one(dim: usize) -> Self {
        Self {
            op: Operator::identity(dim),
        }
    }

    /// Underlying operator.
    pub fn op(&self) -> &Operator {
        &self.op
    }

    /// Space dimension.
    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// Orthocomplement `1 − P`, again a projector by construction.
    pub fn complement(&self) -> Projector {
        Projector {
            op: &Operator::identity(self.dim()) - &self.op,
        }
    }

    /// Splits the projector into rank-one projectors onto an orthonormal
    /// basis of its range, so that the results sum to `self`.
    pub fn rank_one_family(&self) -> Vec<Projector> {
        let (values, vectors) = self.op.hermitian_eigen();
        let mut family = Vec::new();
        for (k, lambda) in values.iter().enumerate() {
            // Eigenvalues of a certified projector cluster at 0 and 1.
            if *lambda > 0.5 {
                let v = vectors.column(k).into_owned();
                family.push(rank_one_from_unit(&v));
            }
        }
        family
    }
}

/// A certified density operator: self-adjoint, positive semidefinite, unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    op: Operator,
}

impl DensityOperator {
    /// Certifies self-adjointness, `λ_min ≥ −tol`, and `|Tr − 1| ≤ tol`.
    pub fn certify(op: Operator, tol: f64) -> Result<Self> {
        let adj_residual = (&op - &op.adjoint()).max_norm();
        if adj_residual > tol {
            return Err(Error::NotSelfAdjoint {
                residual: adj_residual,
            });
        }
        let (values, _) = op.hermitian_eigen();
        if let Some(min) = values.iter().copied().reduce(f64::min) {
            if min < -tol {
                return Err(Error::NotPositiveSemidefinite { eigenvalue: min });
            }
        }
        let trace = op.trace().re;
        if (trace - 1.0).abs() > tol {
            return Err(Error::TraceNotUnit { trace });
        }
        Ok(Self { op })
    }

    pub(crate) fn from_op_unchecked(op: Operator) -> Self {
        debug_assert!(
            op.is_self_adjoint(1e-9),
            "unchecked density not self-adjoint"
        );
        debug_assert!(
            (op.trace().re - 1.0).abs() <= 1e-9,
            "unchecked density trace is not 1"
        );
        Self { op }
    }

    /// Underlying operator.
    pub fn op(&self) -> &Operator {
        &self.op
    }

    /// Space dimension.
    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    /// Expectation `Tr(ρ A)` of an observable in this state.
    pub fn expectation(&self, a: &Operator) -> Result<Complex64> {
        trace_product(&[&self.op, a])
    }
}

/// A certified unit vector.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amp: DVector<Complex64>,
}

impl StateVector {
    /// Certifies `‖v‖ = 1` within `tol`.
    pub fn new(amplitudes: Vec<Complex64>, tol: f64) -> Result<Self> {
        check_dim(amplitudes.len())?;
        let amp = DVector::from_vec(amplitudes);
        let norm = amp.norm();
        if (norm - 1.0).abs() > tol {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amp })
    }

    /// Space dimension.
    pub fn dim(&self) -> usize {
        self.amp.len()
    }

    /// Amplitude of basis index `i`.
    pub fn amplitude(&self, i: usize) -> Complex64 {
        self.amp[i]
    }

    /// Borrow of the amplitude vector.
    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amp
    }
}

/// Free-function form of [`Projector::certify`].
pub fn certify_projector(op: Operator, tol: f64) -> Result<Projector> {
    Projector::certify(op, tol)
}

/// Free-function form of [`DensityOperator::certify`].
pub fn certify_density(op: Operator, tol: f64) -> Result<DensityOperator> {
    DensityOperator::certify(op, tol)
}

/// The pure state `ρ = |ψ⟩⟨ψ|`; a density operator by construction.
pub fn pure_state_density(psi: &StateVector) -> DensityOperator {
    let mat = psi.amp.clone() * psi.amp.adjoint();
    DensityOperator::from_op_unchecked(Operator { mat })
}

fn rank_one_from_unit(v: &DVector<Complex64>) -> Projector {
    let mat = v.clone() * v.adjoint();
    Projector::from_op_unchecked(Operator { mat })
}

/// The affine sign observable `f(P) = 2P − 1`, with spectrum in `{−1, +1}`.
pub fn f_affine(p: &Projector) -> Operator {
    &p.op().scale(Complex64::new(2.0, 0.0)) - &Operator::identity(p.dim())
}

/// Whether two projectors are orthogonal, `‖F G‖ ≤ tol` (equivalently
/// `‖G F‖ ≤ tol` for self-adjoint operands).
pub fn orthogonal(f: &Projector, g: &Projector, tol: f64) -> Result<bool> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            left: f.dim(),
            right: g.dim(),
        });
    }
    Ok((f.op() * g.op()).max_norm() <= tol)
}
