// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

use serde::Serialize;

use crate::lattice::Subspace;
use crate::linalg::{ComplexVector, Operator, RegisterLayout, Tolerance};
use crate::{Error, Result};

/// A labeled eigenspace of a preferred observable.
#[derive(Debug, Clone)]
pub struct Eigenspace {
    pub label: String,
    pub subspace: Subspace,
}

/// A preferred observable, given by its spectral resolution: mutually
/// orthogonal eigenspaces summing to the identity.
#[derive(Debug, Clone)]
pub struct ObservableSpec {
    eigenspaces: Vec<Eigenspace>,
}

impl ObservableSpec {
    pub fn new(eigenspaces: Vec<(String, Subspace)>, tol: Tolerance) -> Result<Self> {
        let Some(dim) = eigenspaces.first().map(|(_, s)| s.ambient_dim()) else {
            return Err(Error::NotResolutionOfIdentity("no eigenspaces".into()));
        };
        if let Some((_, s)) = eigenspaces.iter().find(|(_, s)| s.ambient_dim() != dim) {
            return Err(Error::DimMismatch { expected: dim, actual: s.ambient_dim() });
        }
        for (i, (a, _)) in eigenspaces.iter().enumerate() {
            if eigenspaces[..i].iter().any(|(b, _)| a == b) {
                return Err(Error::InvalidParameter(format!("duplicate eigenspace label {a:?}")));
            }
        }

        let zero = Operator::zeros(dim);
        let scale = tol.eps * dim as f64;
        for (i, (la, a)) in eigenspaces.iter().enumerate() {
            for (lb, b) in &eigenspaces[i + 1..] {
                let overlap = a.projector() * b.projector();
                if overlap.max_abs_diff(&zero) > scale {
                    return Err(Error::NotResolutionOfIdentity(format!("eigenspaces {la:?} and {lb:?} overlap")));
                }
            }
        }
        let sum = eigenspaces.iter().fold(zero, |acc, (_, s)| &acc + s.projector());
        let dev = sum.max_abs_diff(&Operator::identity(dim));
        if dev > scale {
            return Err(Error::NotResolutionOfIdentity(format!("projectors sum to identity only within {dev:.3e}")));
        }
        Ok(ObservableSpec {
            eigenspaces: eigenspaces.into_iter().map(|(label, subspace)| Eigenspace { label, subspace }).collect(),
        })
    }

    /// The identity observable: one eigenspace, the whole space.
    pub fn identity(dim: usize) -> Self {
        ObservableSpec { eigenspaces: vec![Eigenspace { label: "I".into(), subspace: Subspace::full(dim) }] }
    }

    /// Maximal observable diagonal in an orthonormal basis; labels are the
    /// basis positions.
    pub fn from_basis(basis: &[ComplexVector], tol: Tolerance) -> Result<Self> {
        let eigenspaces = basis
            .iter()
            .enumerate()
            .map(|(i, v)| Ok((i.to_string(), Subspace::ray(v, tol)?)))
            .collect::<Result<Vec<_>>>()?;
        ObservableSpec::new(eigenspaces, tol)
    }

    /// Observable that reads the computational-basis digits of `factors` and
    /// is degenerate on everything else. Labels look like `pos1=0,pos2=2`.
    pub fn on_factors(layout: &RegisterLayout, factors: &[&str], tol: Tolerance) -> Result<Self> {
        let positions = factors.iter().map(|f| layout.position(f)).collect::<Result<Vec<_>>>()?;
        let sub = layout.sublayout(factors)?;
        let dim = layout.dim();
        let mut groups: Vec<Vec<ComplexVector>> = vec![Vec::new(); sub.dim()];
        for j in 0..dim {
            let digits = layout.digits(j);
            let key: Vec<usize> = positions.iter().map(|&p| digits[p]).collect();
            groups[sub.index_of(&key)].push(ComplexVector::basis(dim, j));
        }
        let eigenspaces = groups
            .iter()
            .enumerate()
            .map(|(g, vs)| {
                let label = factors
                    .iter()
                    .zip(sub.digits(g))
                    .map(|(f, d)| format!("{f}={d}"))
                    .collect::<Vec<_>>()
                    .join(",");
                Ok((label, Subspace::span(vs, dim, tol)?))
            })
            .collect::<Result<Vec<_>>>()?;
        ObservableSpec::new(eigenspaces, tol)
    }

    /// U R U†: every eigenspace mapped through `u`.
    pub fn conjugated(&self, u: &Operator, tol: Tolerance) -> Result<Self> {
        if u.dim() != self.dim() {
            return Err(Error::DimMismatch { expected: self.dim(), actual: u.dim() });
        }
        u.check_unitary(tol)?;
        let eigenspaces = self
            .eigenspaces
            .iter()
            .map(|e| {
                let image: Vec<ComplexVector> = e.subspace.basis().iter().map(|b| u.act(b)).collect();
                Ok((e.label.clone(), Subspace::span(&image, self.dim(), tol)?))
            })
            .collect::<Result<Vec<_>>>()?;
        ObservableSpec::new(eigenspaces, tol)
    }

    pub fn dim(&self) -> usize {
        self.eigenspaces[0].subspace.ambient_dim()
    }

    pub fn len(&self) -> usize {
        self.eigenspaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenspaces.is_empty()
    }

    pub fn eigenspaces(&self) -> &[Eigenspace] {
        &self.eigenspaces
    }

    pub fn labels(&self) -> Vec<&str> {
        self.eigenspaces.iter().map(|e| e.label.as_str()).collect()
    }

    pub fn summary(&self) -> ObservableSummary {
        ObservableSummary {
            labels: self.eigenspaces.iter().map(|e| e.label.clone()).collect(),
            ranks: self.eigenspaces.iter().map(|e| e.subspace.rank()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObservableSummary {
    pub labels: Vec<String>,
    pub ranks: Vec<usize>,
}
