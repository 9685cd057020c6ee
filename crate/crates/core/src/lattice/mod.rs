// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

//! The lattice of subspaces of a finite-dimensional Hilbert space.
//!
//! Subspaces carry an orthonormal basis and their projector. Equality is
//! basis-independent: two subspaces are the same element when their
//! projectors are within `eps · ambient_dim` in Frobenius norm.

mod closure;

use crate::linalg::{orthonormalize, ComplexVector, Operator, Tolerance};
use crate::{Error, Result};

pub use closure::{closure, is_boolean, ClosureFlags, SublatticeSet, DEFAULT_CLOSURE_BUDGET};

#[derive(Debug, Clone)]
pub struct Subspace {
    basis: Vec<ComplexVector>,
    ambient_dim: usize,
    projector: Operator,
}

impl Subspace {
    fn from_orthonormal(basis: Vec<ComplexVector>, ambient_dim: usize) -> Self {
        let mut p = Operator::zeros(ambient_dim);
        for b in &basis {
            p = &p + &b.projector();
        }
        Subspace { basis, ambient_dim, projector: p }
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Subspace::from_orthonormal(Vec::new(), ambient_dim)
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim).map(|i| ComplexVector::basis(ambient_dim, i)).collect();
        Subspace::from_orthonormal(basis, ambient_dim)
    }

    /// Closed span of `vectors`; all must share one dimension.
    pub fn span(vectors: &[ComplexVector], ambient_dim: usize, tol: Tolerance) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.dim() != ambient_dim) {
            return Err(Error::DimMismatch { expected: ambient_dim, actual: v.dim() });
        }
        Ok(Subspace::from_orthonormal(orthonormalize(vectors, tol), ambient_dim))
    }

    /// The ray through a nonzero vector.
    pub fn ray(v: &ComplexVector, tol: Tolerance) -> Result<Self> {
        let s = Subspace::span(std::slice::from_ref(v), v.dim(), tol)?;
        if s.rank() == 0 {
            return Err(Error::ZeroVector);
        }
        Ok(s)
    }

    /// Range of a Hermitian projector, read off its columns.
    pub fn from_projector(p: &Operator, tol: Tolerance) -> Result<Self> {
        let n = p.dim();
        let cols: Vec<ComplexVector> = (0..n)
            .map(|j| ComplexVector::from_dvector(p.as_dmatrix().column(j).into_owned()))
            .collect::<Result<_>>()?;
        Subspace::span(&cols, n, tol)
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[ComplexVector] {
        &self.basis
    }

    pub fn projector(&self) -> &Operator {
        &self.projector
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ambient_dim
    }

    fn check_dim(&self, other: &Subspace) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimMismatch { expected: self.ambient_dim, actual: other.ambient_dim });
        }
        Ok(())
    }

    pub fn same_as(&self, other: &Subspace, tol: Tolerance) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.rank() == other.rank()
            && self.projector.frobenius_distance(&other.projector) <= tol.eps * self.ambient_dim as f64
    }

    /// ‖P v‖² for a unit vector `v`.
    pub fn weight_of(&self, v: &ComplexVector) -> f64 {
        self.basis.iter().map(|b| b.inner(v).norm_sqr()).sum()
    }

    pub fn contains_vector(&self, v: &ComplexVector, tol: Tolerance) -> bool {
        let n2 = v.norm().powi(2);
        (n2 - self.weight_of(v)).abs() <= tol.eps * n2.max(1.0)
    }

    pub fn orthogonal_to_vector(&self, v: &ComplexVector, tol: Tolerance) -> bool {
        self.weight_of(v) <= tol.eps * v.norm().powi(2).max(1.0)
    }

    /// Order relation: `self ≤ other` iff P_other P_self = P_self.
    pub fn is_le(&self, other: &Subspace, tol: Tolerance) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.basis.iter().all(|b| other.contains_vector(b, tol))
    }

    pub fn orthocomplement(&self, tol: Tolerance) -> Subspace {
        let n = self.ambient_dim;
        let residuals: Vec<ComplexVector> = (0..n)
            .map(|j| {
                let e = ComplexVector::basis(n, j);
                let pe = self.projector.act(&e);
                &e - &pe
            })
            .collect();
        let mut basis = orthonormalize(&residuals, tol);
        basis.truncate(n - self.rank());
        Subspace::from_orthonormal(basis, n)
    }

    pub fn join(&self, other: &Subspace, tol: Tolerance) -> Result<Subspace> {
        self.check_dim(other)?;
        if self.is_le(other, tol) {
            return Ok(other.clone());
        }
        if other.is_le(self, tol) {
            return Ok(self.clone());
        }
        let vs: Vec<ComplexVector> = self.basis.iter().chain(&other.basis).cloned().collect();
        Subspace::span(&vs, self.ambient_dim, tol)
    }

    /// Intersection, computed as (a⊥ ∨ b⊥)⊥.
    pub fn meet(&self, other: &Subspace, tol: Tolerance) -> Result<Subspace> {
        self.check_dim(other)?;
        if self.is_le(other, tol) {
            return Ok(self.clone());
        }
        if other.is_le(self, tol) {
            return Ok(other.clone());
        }
        let j = self.orthocomplement(tol).join(&other.orthocomplement(tol), tol)?;
        Ok(j.orthocomplement(tol))
    }

    /// Compatibility: P_a P_b = P_b P_a entrywise within eps.
    pub fn commutes(&self, other: &Subspace, tol: Tolerance) -> Result<bool> {
        self.check_dim(other)?;
        let c = self.projector.commutator(&other.projector);
        Ok(c.max_abs_diff(&Operator::zeros(self.ambient_dim)) <= tol.eps)
    }
}

pub fn meet(a: &Subspace, b: &Subspace, tol: Tolerance) -> Result<Subspace> {
    a.meet(b, tol)
}

pub fn join(a: &Subspace, b: &Subspace, tol: Tolerance) -> Result<Subspace> {
    a.join(b, tol)
}

pub fn orthocomplement(a: &Subspace, tol: Tolerance) -> Subspace {
    a.orthocomplement(tol)
}

pub fn commutes(a: &Subspace, b: &Subspace, tol: Tolerance) -> Result<bool> {
    a.commutes(b, tol)
}
