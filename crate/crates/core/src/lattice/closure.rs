// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

//! Bounded generated-sublattice closure.
//!
//! Sublattices of the subspace lattice generated by a few elements are
//! generically infinite, so closure runs under an element budget and reports
//! whether it reached a fixpoint.

use std::cmp::Ordering;

use super::Subspace;
use crate::exec::Exec;
use crate::linalg::Tolerance;
use crate::{Error, Result};

pub const DEFAULT_CLOSURE_BUDGET: usize = 512;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClosureFlags {
    pub meet: bool,
    pub join: bool,
    pub complement: bool,
}

impl ClosureFlags {
    pub const ALL: ClosureFlags = ClosureFlags { meet: true, join: true, complement: true };
}

/// A finite, duplicate-free set of subspaces of one ambient space.
#[derive(Debug, Clone)]
pub struct SublatticeSet {
    elements: Vec<Subspace>,
    pub closed_under: ClosureFlags,
    pub closure_depth: usize,
    pub fixpoint: bool,
}

impl SublatticeSet {
    /// Deduplicated set with no closure claims.
    pub fn new(elements: Vec<Subspace>, tol: Tolerance) -> Result<Self> {
        let mut index = SubspaceIndex::default();
        let mut out: Vec<Subspace> = Vec::new();
        for s in elements {
            if let Some(first) = out.first() {
                if first.ambient_dim() != s.ambient_dim() {
                    return Err(Error::DimMismatch { expected: first.ambient_dim(), actual: s.ambient_dim() });
                }
            }
            index.insert_if_new(&mut out, s, tol);
        }
        Ok(SublatticeSet { elements: out, closed_under: ClosureFlags::default(), closure_depth: 0, fixpoint: false })
    }

    pub fn elements(&self) -> &[Subspace] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.fixpoint && self.closed_under == ClosureFlags::ALL
    }

    pub fn contains(&self, s: &Subspace, tol: Tolerance) -> bool {
        self.elements.iter().any(|e| e.same_as(s, tol))
    }

    /// Rays (rank-1 elements) of the set.
    pub fn rays(&self) -> impl Iterator<Item = &Subspace> {
        self.elements.iter().filter(|s| s.rank() == 1)
    }

    fn sort_canonical(&mut self) {
        self.elements.sort_by(canonical_order);
    }
}

/// Rank first, then projector entries quantized to 1e-7, row-major.
fn canonical_order(a: &Subspace, b: &Subspace) -> Ordering {
    a.rank().cmp(&b.rank()).then_with(|| {
        let q = |x: f64| (x * 1e7).round() as i64;
        let pa = a.projector().as_dmatrix();
        let pb = b.projector().as_dmatrix();
        for i in 0..pa.nrows() {
            for j in 0..pa.ncols() {
                let (x, y) = (pa[(i, j)], pb[(i, j)]);
                let o = q(x.re).cmp(&q(y.re)).then(q(x.im).cmp(&q(y.im)));
                if o != Ordering::Equal {
                    return o;
                }
            }
        }
        Ordering::Equal
    })
}

/// Sorted scalar fingerprints for fast duplicate lookup. The fingerprint is a
/// fixed weighting of the projector diagonal; candidates inside a window are
/// compared exactly.
#[derive(Default)]
struct SubspaceIndex {
    keys: Vec<(f64, usize)>,
}

impl SubspaceIndex {
    fn fingerprint(s: &Subspace) -> f64 {
        let p = s.projector().as_dmatrix();
        let diag: f64 = (0..p.nrows())
            .map(|i| p[(i, i)].re * (1.0 + 0.618_033_988_749_895 * i as f64).fract().mul_add(1.0, 0.5))
            .sum();
        diag + 10.0 * s.rank() as f64
    }

    fn find(&self, elements: &[Subspace], s: &Subspace, tol: Tolerance) -> Option<usize> {
        let key = Self::fingerprint(s);
        let window = 1e-6_f64.max(100.0 * tol.eps * s.ambient_dim() as f64);
        let start = self.keys.partition_point(|(k, _)| *k < key - window);
        self.keys[start..]
            .iter()
            .take_while(|(k, _)| *k <= key + window)
            .map(|&(_, i)| i)
            .find(|&i| elements[i].same_as(s, tol))
    }

    fn insert_if_new(&mut self, elements: &mut Vec<Subspace>, s: Subspace, tol: Tolerance) -> bool {
        if self.find(elements, &s, tol).is_some() {
            return false;
        }
        let key = Self::fingerprint(&s);
        let at = self.keys.partition_point(|(k, _)| *k < key);
        self.keys.insert(at, (key, elements.len()));
        elements.push(s);
        true
    }
}

/// Closes `generators` (plus 0 and the full space) under meet, join and
/// orthocomplement.
///
/// Works in rounds: each round combines every element added in the previous
/// round with every element present. At most `max_elements` elements are
/// kept; exceeding that returns [`Error::BudgetExceeded`] carrying the
/// partial set. The result is independent of `exec`.
pub fn closure(generators: &[Subspace], max_elements: usize, tol: Tolerance, exec: Exec) -> Result<SublatticeSet> {
    let dim = match generators.first() {
        Some(g) => g.ambient_dim(),
        None => return Err(Error::InvalidParameter("closure needs at least one generator".into())),
    };
    if let Some(g) = generators.iter().find(|g| g.ambient_dim() != dim) {
        return Err(Error::DimMismatch { expected: dim, actual: g.ambient_dim() });
    }

    let mut index = SubspaceIndex::default();
    let mut elements: Vec<Subspace> = Vec::new();
    for s in [Subspace::zero(dim), Subspace::full(dim)].into_iter().chain(generators.iter().cloned()) {
        index.insert_if_new(&mut elements, s, tol);
    }

    let finish = |mut elements: Vec<Subspace>, depth: usize, fixpoint: bool| {
        let mut set = SublatticeSet {
            elements: std::mem::take(&mut elements),
            closed_under: if fixpoint { ClosureFlags::ALL } else { ClosureFlags::default() },
            closure_depth: depth,
            fixpoint,
        };
        set.sort_canonical();
        set
    };

    if elements.len() > max_elements {
        elements.truncate(max_elements);
        let partial = finish(elements, 0, false);
        return Err(Error::BudgetExceeded { budget: max_elements, partial: Box::new(partial) });
    }

    let mut frontier: Vec<usize> = (0..elements.len()).collect();
    let mut depth = 0;
    while !frontier.is_empty() {
        depth += 1;
        let round_size = elements.len();
        let mut next = Vec::new();
        for &x in &frontier {
            let snapshot = &elements[..round_size];
            let a = &elements[x];
            if a.is_zero() || a.is_full() {
                continue;
            }
            // complement first, then meets/joins with every element in order
            let mut candidates = vec![a.orthocomplement(tol)];
            let products: Vec<[Subspace; 2]> = exec.map(snapshot, |b| {
                [a.meet(b, tol).expect("same ambient dim"), a.join(b, tol).expect("same ambient dim")]
            });
            candidates.extend(products.into_iter().flatten());
            for c in candidates {
                if index.insert_if_new(&mut elements, c, tol) {
                    next.push(elements.len() - 1);
                    if elements.len() > max_elements {
                        elements.truncate(max_elements);
                        let partial = finish(elements, depth, false);
                        return Err(Error::BudgetExceeded { budget: max_elements, partial: Box::new(partial) });
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(finish(elements, depth, true))
}

/// True iff every pair commutes and meet distributes over join on every
/// triple.
pub fn is_boolean(s: &SublatticeSet, tol: Tolerance, exec: Exec) -> Result<bool> {
    if !s.is_closed() {
        return Err(Error::NotClosed);
    }
    let els = s.elements();
    let commuting = exec
        .map(els, |a| els.iter().all(|b| a.commutes(b, tol).unwrap_or(false)))
        .into_iter()
        .all(|x| x);
    if !commuting {
        return Ok(false);
    }
    let distributive = exec.map(els, |a| {
        els.iter().all(|b| {
            els.iter().all(|c| {
                let lhs = a.meet(&b.join(c, tol).unwrap(), tol).unwrap();
                let rhs = a.meet(b, tol).unwrap().join(&a.meet(c, tol).unwrap(), tol).unwrap();
                lhs.same_as(&rhs, tol)
            })
        })
    });
    Ok(distributive.into_iter().all(|x| x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{random, ComplexVector};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn ray(v: ComplexVector) -> Subspace {
        Subspace::ray(&v, tol()).unwrap()
    }

    #[test]
    fn single_ray_in_dim2_closes_to_four_elements() {
        let set = closure(&[ray(ComplexVector::basis(2, 0))], 512, tol(), Exec::default()).unwrap();
        assert_eq!(set.len(), 4);
        assert!(set.fixpoint);
        assert!(is_boolean(&set, tol(), Exec::default()).unwrap());
    }

    #[test]
    fn two_noncommuting_rays_give_six_element_lattice() {
        // elements: 0, a, a⊥, b, b⊥, 1. Any two distinct rays join to 1 and
        // meet in 0, so no further elements arise.
        let a = ray(ComplexVector::basis(2, 0));
        let b = ray(ComplexVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap());
        let set = closure(&[a, b], 512, tol(), Exec::default()).unwrap();
        assert_eq!(set.len(), 6);
        // a ∧ (b ∨ a⊥) = a ∧ 1 = a but (a ∧ b) ∨ (a ∧ a⊥) = 0
        assert!(!is_boolean(&set, tol(), Exec::default()).unwrap());
    }

    #[test]
    fn maximal_observable_in_dim4_is_boolean_with_16_elements() {
        let gens: Vec<Subspace> = (0..4).map(|i| ray(ComplexVector::basis(4, i))).collect();
        let set = closure(&gens, 512, tol(), Exec::default()).unwrap();
        assert_eq!(set.len(), 16);
        assert!(is_boolean(&set, tol(), Exec::default()).unwrap());
    }

    #[test]
    fn budget_exceeded_carries_partial_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let gens: Vec<Subspace> = (0..3).map(|_| ray(random::state(3, &mut rng))).collect();
        match closure(&gens, 40, tol(), Exec::default()) {
            Err(Error::BudgetExceeded { budget, partial }) => {
                assert_eq!(budget, 40);
                assert_eq!(partial.len(), 40);
                assert!(!partial.fixpoint);
                for g in &gens {
                    assert!(partial.contains(g, tol()));
                }
                assert!(matches!(is_boolean(&partial, tol(), Exec::default()), Err(Error::NotClosed)));
            }
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    #[test]
    fn closure_contains_bounds_and_generators() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let gens: Vec<Subspace> = (0..2).map(|_| ray(random::state(4, &mut rng))).collect();
        let set = closure(&gens, 512, tol(), Exec::default()).unwrap();
        assert!(set.contains(&Subspace::zero(4), tol()));
        assert!(set.contains(&Subspace::full(4), tol()));
        for g in &gens {
            assert!(set.contains(g, tol()));
        }
    }

    #[test]
    fn exec_modes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let gens: Vec<Subspace> = (0..3).map(|_| ray(random::state(3, &mut rng))).collect();
        let run = |exec| match closure(&gens, 120, tol(), exec) {
            Ok(s) => s,
            Err(Error::BudgetExceeded { partial, .. }) => *partial,
            Err(e) => panic!("{e}"),
        };
        let a = run(Exec::Sequential);
        let b = run(Exec::default());
        assert_eq!(a.len(), b.len());
        for (x, y) in a.elements().iter().zip(b.elements()) {
            assert!(x.same_as(y, tol()));
        }
    }
}
