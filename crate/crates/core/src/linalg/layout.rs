// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::{ComplexVector, Operator, Tolerance, C64, ZERO};
use crate::{Error, Result};

/// Named tensor factors in declaration order. The first factor is the most
/// significant digit of a composite basis index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterLayout {
    factors: Vec<(String, usize)>,
}

impl RegisterLayout {
    pub fn new<S: Into<String>>(factors: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let factors: Vec<(String, usize)> =
            factors.into_iter().map(|(n, d)| (n.into(), d)).collect();
        if factors.is_empty() {
            return Err(Error::InvalidParameter("layout needs at least one factor".into()));
        }
        for (i, (name, d)) in factors.iter().enumerate() {
            if *d == 0 {
                return Err(Error::InvalidParameter(format!("factor `{name}` has dimension 0")));
            }
            if factors[..i].iter().any(|(n, _)| n == name) {
                return Err(Error::InvalidParameter(format!("duplicate factor `{name}`")));
            }
        }
        Ok(RegisterLayout { factors })
    }

    pub fn factors(&self) -> &[(String, usize)] {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.factors.iter().map(|(_, d)| d).product()
    }

    pub fn position(&self, name: &str) -> Result<usize> {
        self.factors
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| Error::UnknownFactor(name.to_string()))
    }

    pub fn local_dim(&self, name: &str) -> Result<usize> {
        Ok(self.factors[self.position(name)?].1)
    }

    fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|(_, d)| *d).collect()
    }

    /// Composite index from per-factor digits.
    pub fn index_of(&self, digits: &[usize]) -> usize {
        debug_assert_eq!(digits.len(), self.factors.len());
        digits
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (&x, (_, d))| {
                debug_assert!(x < *d);
                acc * d + x
            })
    }

    /// Per-factor digits of a composite index.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.factors.len()];
        for (slot, (_, d)) in out.iter_mut().zip(&self.factors).rev() {
            *slot = index % d;
            index /= d;
        }
        out
    }

    pub fn sublayout(&self, keep: &[&str]) -> Result<RegisterLayout> {
        let positions = self.positions(keep)?;
        RegisterLayout::new(positions.iter().map(|&p| self.factors[p].clone()))
    }

    fn positions(&self, names: &[&str]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(names.len());
        for n in names {
            let p = self.position(n)?;
            if out.contains(&p) {
                return Err(Error::InvalidParameter(format!("factor `{n}` listed twice")));
            }
            out.push(p);
        }
        Ok(out)
    }

    /// Product state from one ket per factor, given in any order. Every factor
    /// must be covered.
    pub fn product(&self, kets: &[(&str, &ComplexVector)]) -> Result<ComplexVector> {
        if kets.len() != self.factors.len() {
            return Err(Error::InvalidParameter(format!(
                "product state needs {} factors, got {}",
                self.factors.len(),
                kets.len()
            )));
        }
        let mut ordered: Vec<Option<&ComplexVector>> = vec![None; self.factors.len()];
        for (name, ket) in kets {
            let p = self.position(name)?;
            if ket.dim() != self.factors[p].1 {
                return Err(Error::DimMismatch { expected: self.factors[p].1, actual: ket.dim() });
            }
            ordered[p] = Some(ket);
        }
        let kets: Vec<ComplexVector> = ordered
            .into_iter()
            .map(|k| k.cloned().ok_or_else(|| Error::InvalidParameter("factor listed twice".into())))
            .collect::<Result<_>>()?;
        Ok(super::tensor_all(&kets))
    }

    /// Lifts `op`, defined on the tensor product of `on` (in the listed order),
    /// to the full layout, acting as identity on the remaining factors.
    pub fn embed(&self, op: &Operator, on: &[&str]) -> Result<Operator> {
        let pos = self.positions(on)?;
        let local_dims: Vec<usize> = pos.iter().map(|&p| self.factors[p].1).collect();
        let local_dim: usize = local_dims.iter().product();
        if op.dim() != local_dim {
            return Err(Error::DimMismatch { expected: local_dim, actual: op.dim() });
        }
        let n = self.dim();
        let m = op.as_dmatrix();
        let mut out = DMatrix::<C64>::zeros(n, n);
        for col in 0..n {
            let digits = self.digits(col);
            let local_col = pos.iter().zip(&local_dims).fold(0, |acc, (&p, d)| acc * d + digits[p]);
            let mut row_digits = digits.clone();
            for local_row in 0..local_dim {
                let a = m[(local_row, local_col)];
                if a == ZERO {
                    continue;
                }
                let mut r = local_row;
                for (&p, d) in pos.iter().zip(&local_dims).rev() {
                    row_digits[p] = r % d;
                    r /= d;
                }
                out[(self.index_of(&row_digits), col)] += a;
            }
        }
        Operator::from_dmatrix(out)
    }

    /// Reorders the tensor factors of `v` to `order`, returning the new layout
    /// and the permuted vector.
    pub fn permute(&self, v: &ComplexVector, order: &[&str]) -> Result<(RegisterLayout, ComplexVector)> {
        if v.dim() != self.dim() {
            return Err(Error::DimMismatch { expected: self.dim(), actual: v.dim() });
        }
        if order.len() != self.factors.len() {
            return Err(Error::InvalidParameter("permutation must list every factor".into()));
        }
        let target = self.sublayout(order)?;
        let pos = self.positions(order)?;
        let mut out = vec![ZERO; v.dim()];
        for (i, amp) in v.amplitudes().iter().enumerate() {
            let digits = self.digits(i);
            let new_digits: Vec<usize> = pos.iter().map(|&p| digits[p]).collect();
            out[target.index_of(&new_digits)] = *amp;
        }
        Ok((target, ComplexVector::new(out)?))
    }

    /// Composite-index bookkeeping for a keep/trace split: for every index of
    /// the full space, its index in the kept and in the traced sublayout.
    fn split_indices(&self, keep: &[&str]) -> Result<(usize, usize, Vec<(usize, usize)>)> {
        let keep_pos = self.positions(keep)?;
        let trace_pos: Vec<usize> = (0..self.factors.len()).filter(|p| !keep_pos.contains(p)).collect();
        let dims = self.dims();
        let keep_dim: usize = keep_pos.iter().map(|&p| dims[p]).product();
        let trace_dim: usize = trace_pos.iter().map(|&p| dims[p]).product();
        let split = (0..self.dim())
            .map(|i| {
                let d = self.digits(i);
                let k = keep_pos.iter().fold(0, |acc, &p| acc * dims[p] + d[p]);
                let t = trace_pos.iter().fold(0, |acc, &p| acc * dims[p] + d[p]);
                (k, t)
            })
            .collect();
        Ok((keep_dim, trace_dim, split))
    }

    /// Reduced density operator of a pure state on the `keep` factors (in the
    /// listed order). Works on the amplitude vector directly, so it scales to
    /// registers whose full density matrix would not fit in memory.
    pub fn reduced_state(&self, psi: &ComplexVector, keep: &[&str]) -> Result<Operator> {
        if psi.dim() != self.dim() {
            return Err(Error::DimMismatch { expected: self.dim(), actual: psi.dim() });
        }
        let (keep_dim, trace_dim, split) = self.split_indices(keep)?;
        let mut m = DMatrix::<C64>::zeros(keep_dim, trace_dim);
        for (amp, &(k, t)) in psi.amplitudes().iter().zip(&split) {
            m[(k, t)] = *amp;
        }
        Operator::from_dmatrix(&m * m.adjoint())
    }
}

/// Partial trace of a density operator, keeping the named factors in the
/// listed order.
pub fn partial_trace(rho: &Operator, layout: &RegisterLayout, keep: &[&str], tol: Tolerance) -> Result<Operator> {
    if rho.dim() != layout.dim() {
        return Err(Error::DimMismatch { expected: layout.dim(), actual: rho.dim() });
    }
    rho.check_density(tol)?;
    let (keep_dim, trace_dim, split) = layout.split_indices(keep)?;
    // by_trace[t][k] = full index with traced part t and kept part k
    let mut by_trace = vec![vec![0usize; keep_dim]; trace_dim];
    for (full, &(k, t)) in split.iter().enumerate() {
        by_trace[t][k] = full;
    }
    let r = rho.as_dmatrix();
    let out = DMatrix::from_fn(keep_dim, keep_dim, |a, b| {
        by_trace.iter().map(|row| r[(row[a], row[b])]).sum::<C64>()
    });
    Operator::from_dmatrix(out)
}
