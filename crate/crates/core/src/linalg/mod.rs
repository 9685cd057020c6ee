// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra over small Hilbert spaces.
//!
//! Every rank, orthogonality and equality decision goes through a single
//! [`Tolerance`]. Rank decisions scale it by the largest input norm.

mod expm;
mod layout;
mod ortho;
pub mod random;

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub use expm::{expm, unitary_propagator};
pub use layout::{partial_trace, RegisterLayout};
pub use ortho::{fix_phase, orthonormalize};

pub type C64 = num_complex::Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Default absolute tolerance.
pub const DEFAULT_EPS: f64 = 1e-9;

/// Environment variable consulted by [`Tolerance::from_env`].
pub const EPS_ENV_VAR: &str = "QPT_EPS";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps: DEFAULT_EPS }
    }
}

impl Tolerance {
    pub fn new(eps: f64) -> Result<Self> {
        if !(eps.is_finite() && (0.0..1.0).contains(&eps)) {
            return Err(Error::InvalidParameter(format!(
                "tolerance must satisfy 0 <= eps < 1, got {eps}"
            )));
        }
        Ok(Tolerance { eps })
    }

    /// Reads `QPT_EPS`, falling back to the default when unset.
    pub fn from_env() -> Result<Self> {
        match std::env::var(EPS_ENV_VAR) {
            Ok(s) => {
                let eps = s.trim().parse::<f64>().map_err(|e| {
                    Error::InvalidParameter(format!("{EPS_ENV_VAR}={s:?}: {e}"))
                })?;
                Tolerance::new(eps)
            }
            Err(_) => Ok(Tolerance::default()),
        }
    }

    #[inline]
    pub fn is_zero(&self, x: f64) -> bool {
        x.abs() <= self.eps
    }

    #[inline]
    pub fn approx_eq(&self, a: f64, b: f64) -> bool {
        (a - b).abs() <= self.eps
    }
}

/// A finite complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector(DVector<C64>);

impl ComplexVector {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        Self::from_dvector(DVector::from_vec(amplitudes))
    }

    pub fn from_dvector(v: DVector<C64>) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::InvalidParameter("vector dimension must be >= 1".into()));
        }
        if v.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("vector"));
        }
        Ok(ComplexVector(v))
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "vector dimension must be >= 1");
        ComplexVector(DVector::zeros(dim))
    }

    /// The computational basis vector `e_index`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut v = DVector::zeros(dim);
        v[index] = ONE;
        ComplexVector(v)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn as_dvector(&self) -> &DVector<C64> {
        &self.0
    }

    pub fn into_dvector(self) -> DVector<C64> {
        self.0
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.0.as_slice()
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroVector);
        }
        Ok(ComplexVector(self.0.unscale(n)))
    }

    /// ⟨self|other⟩, conjugate-linear in `self`.
    pub fn inner(&self, other: &ComplexVector) -> C64 {
        self.0.dotc(&other.0)
    }

    pub fn scale(&self, c: C64) -> Self {
        ComplexVector(&self.0 * c)
    }

    /// |self⟩⟨self|
    pub fn projector(&self) -> Operator {
        Operator(&self.0 * self.0.adjoint())
    }

    pub fn distance(&self, other: &ComplexVector) -> f64 {
        (&self.0 - &other.0).norm()
    }

    /// Distance between the rays spanned by `self` and `other`, insensitive to
    /// global phase. Both vectors are assumed normalized.
    pub fn ray_distance(&self, other: &ComplexVector) -> f64 {
        (1.0 - self.inner(other).norm_sqr()).max(0.0).sqrt()
    }

    pub fn check_normalized(&self, tol: Tolerance) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > tol.eps {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(())
    }
}

impl Add for &ComplexVector {
    type Output = ComplexVector;
    fn add(self, rhs: &ComplexVector) -> ComplexVector {
        ComplexVector(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexVector {
    type Output = ComplexVector;
    fn sub(self, rhs: &ComplexVector) -> ComplexVector {
        ComplexVector(&self.0 - &rhs.0)
    }
}

impl Neg for &ComplexVector {
    type Output = ComplexVector;
    fn neg(self) -> ComplexVector {
        ComplexVector(-&self.0)
    }
}

impl Mul<&ComplexVector> for C64 {
    type Output = ComplexVector;
    fn mul(self, rhs: &ComplexVector) -> ComplexVector {
        rhs.scale(self)
    }
}

/// A square complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator(DMatrix<C64>);

impl Operator {
    pub fn from_dmatrix(m: DMatrix<C64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimMismatch { expected: m.nrows(), actual: m.ncols() });
        }
        if m.is_empty() {
            return Err(Error::InvalidParameter("operator dimension must be >= 1".into()));
        }
        if m.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::NonFinite("operator"));
        }
        Ok(Operator(m))
    }

    /// Row-major construction.
    pub fn from_rows(dim: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimMismatch { expected: dim * dim, actual: entries.len() });
        }
        Self::from_dmatrix(DMatrix::from_row_slice(dim, dim, entries))
    }

    pub fn from_real_rows(dim: usize, entries: &[f64]) -> Result<Self> {
        let c: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_rows(dim, &c)
    }

    pub fn identity(dim: usize) -> Self {
        Operator(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Operator(DMatrix::zeros(dim, dim))
    }

    pub fn from_fn(dim: usize, f: impl FnMut(usize, usize) -> C64) -> Self {
        Operator(DMatrix::from_fn(dim, dim, f))
    }

    /// Permutation operator sending basis state `j` to `perm[j]`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParameter(format!("{perm:?} is not a permutation")));
            }
        }
        let mut m = DMatrix::zeros(n, n);
        for (j, &p) in perm.iter().enumerate() {
            m[(p, j)] = ONE;
        }
        Ok(Operator(m))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    #[inline]
    pub fn as_dmatrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Operator(self.0.adjoint())
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn scale(&self, c: C64) -> Self {
        Operator(&self.0 * c)
    }

    /// Unchecked matrix-vector product.
    pub fn act(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(self.dim(), v.dim(), "operator/vector dimension mismatch");
        ComplexVector(&self.0 * &v.0)
    }

    /// ⟨v|self|v⟩
    pub fn expectation(&self, v: &ComplexVector) -> C64 {
        v.0.dotc(&(&self.0 * &v.0))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_distance(&self, other: &Operator) -> f64 {
        (&self.0 - &other.0).norm()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn spectral_norm(&self) -> f64 {
        self.0.clone().singular_values().iter().cloned().fold(0.0, f64::max)
    }

    pub fn commutator(&self, other: &Operator) -> Operator {
        Operator(&self.0 * &other.0 - &other.0 * &self.0)
    }

    pub fn unitarity_deviation(&self) -> f64 {
        let g = self.0.adjoint() * &self.0;
        let n = self.dim();
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let target = if i == j { ONE } else { ZERO };
                dev = dev.max((g[(i, j)] - target).norm());
            }
        }
        dev
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn check_unitary(&self, tol: Tolerance) -> Result<()> {
        let deviation = self.unitarity_deviation();
        if deviation > tol.eps {
            return Err(Error::NonUnitary { deviation });
        }
        Ok(())
    }

    pub fn check_hermitian(&self, tol: Tolerance) -> Result<()> {
        let deviation = self.hermiticity_deviation();
        if deviation > tol.eps {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(())
    }

    /// Hermitian, unit trace and positive semidefinite, all within `tol`.
    pub fn check_density(&self, tol: Tolerance) -> Result<()> {
        let herm = self.hermiticity_deviation();
        if herm > tol.eps {
            return Err(Error::NotDensityOperator(format!("not Hermitian ({herm:.3e})")));
        }
        let tr = self.trace();
        if (tr - ONE).norm() > tol.eps {
            return Err(Error::NotDensityOperator(format!("trace {tr}")));
        }
        let hermitian_part = (&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0);
        let min_eig = hermitian_part
            .symmetric_eigenvalues()
            .iter()
            .cloned()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -tol.eps {
            return Err(Error::NotDensityOperator(format!("negative eigenvalue {min_eig:.3e}")));
        }
        Ok(())
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator(&self.0 + &rhs.0)
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        Operator(&self.0 - &rhs.0)
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        Operator(&self.0 * &rhs.0)
    }
}

impl Mul<&ComplexVector> for &Operator {
    type Output = ComplexVector;
    fn mul(self, rhs: &ComplexVector) -> ComplexVector {
        self.act(rhs)
    }
}

/// Kronecker product; the left operand is the most significant factor.
pub trait Tensor {
    fn tensor(&self, other: &Self) -> Self;
}

impl Tensor for ComplexVector {
    fn tensor(&self, other: &Self) -> Self {
        ComplexVector(self.0.kronecker(&other.0))
    }
}

impl Tensor for Operator {
    fn tensor(&self, other: &Self) -> Self {
        Operator(self.0.kronecker(&other.0))
    }
}

/// Left-to-right Kronecker product of a non-empty list.
pub fn tensor_all<T: Tensor + Clone>(items: &[T]) -> T {
    let (first, rest) = items.split_first().expect("tensor_all of an empty list");
    rest.iter().fold(first.clone(), |acc, x| acc.tensor(x))
}

/// Applies a unitary after checking unitarity and dimensions.
pub fn apply(u: &Operator, v: &ComplexVector, tol: Tolerance) -> Result<ComplexVector> {
    if u.dim() != v.dim() {
        return Err(Error::DimMismatch { expected: u.dim(), actual: v.dim() });
    }
    u.check_unitary(tol)?;
    Ok(u.act(v))
}

/// Single-qubit Pauli matrices in the {|+z⟩, |−z⟩} basis.
pub mod pauli {
    use super::{Operator, C64};

    pub fn x() -> Operator {
        Operator::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
    }

    pub fn y() -> Operator {
        let z = C64::new(0.0, 0.0);
        Operator::from_rows(2, &[z, C64::new(0.0, -1.0), C64::new(0.0, 1.0), z]).unwrap()
    }

    pub fn z() -> Operator {
        Operator::from_real_rows(2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
    }

    /// Spin component along angle `theta` in the x–z plane:
    /// cos θ σ_z + sin θ σ_x.
    pub fn spin_xz(theta: f64) -> Operator {
        let (s, c) = theta.sin_cos();
        Operator::from_real_rows(2, &[c, s, s, -c]).unwrap()
    }
}
