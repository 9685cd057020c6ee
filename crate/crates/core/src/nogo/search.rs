// Copyright 2026 The qpt Contributors
// SPDX-License-Identifier: Apache-2.0

//! Backtracking search for noncontextual 2-valued assignments.
//!
//! Rays are branched on in order of decreasing context degree (ties by input
//! index), trying 1 before 0. Unit propagation:
//! * a ray set to 1 forces every orthogonal ray to 0;
//! * a context whose rays are all 0 but one forces that one to 1, and a
//!   context of all 0s is a conflict.

use serde::Serialize;

use super::RaySet;
use crate::linalg::Tolerance;
use crate::Result;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Assignment {
    pub values: Vec<bool>,
}

impl Assignment {
    /// Re-checks both constraints against `rs`.
    pub fn is_valid_for(&self, rs: &RaySet) -> bool {
        if self.values.len() != rs.len() {
            return false;
        }
        let one_per_context = rs
            .contexts()
            .iter()
            .all(|ctx| ctx.iter().filter(|&&i| self.values[i]).count() == 1);
        let no_orthogonal_ones = (0..rs.len())
            .filter(|&i| self.values[i])
            .all(|i| rs.orthogonal_to(i).iter().all(|&j| !self.values[j]));
        one_per_context && no_orthogonal_ones
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SearchOutcome {
    Found(Assignment),
    /// No assignment exists; `core` lists context indices (into the searched
    /// ray set) whose restricted problem is already unsatisfiable.
    NoAssignment { core: Vec<usize> },
}

const UNKNOWN: i8 = -1;

struct Solver<'a> {
    rs: &'a RaySet,
    ray_contexts: Vec<Vec<usize>>,
    order: Vec<usize>,
    values: Vec<i8>,
    trail: Vec<usize>,
    nodes: u64,
}

enum Step {
    Sat,
    Unsat,
    OutOfBudget,
}

impl<'a> Solver<'a> {
    fn new(rs: &'a RaySet) -> Self {
        let mut ray_contexts = vec![Vec::new(); rs.len()];
        for (c, ctx) in rs.contexts().iter().enumerate() {
            for &i in ctx {
                ray_contexts[i].push(c);
            }
        }
        let mut order: Vec<usize> = (0..rs.len()).filter(|&i| !ray_contexts[i].is_empty()).collect();
        order.sort_by(|&a, &b| ray_contexts[b].len().cmp(&ray_contexts[a].len()).then(a.cmp(&b)));
        Solver { rs, ray_contexts, order, values: vec![UNKNOWN; rs.len()], trail: Vec::new(), nodes: 0 }
    }

    fn set(&mut self, i: usize, v: bool, queue: &mut Vec<usize>) -> bool {
        match self.values[i] {
            UNKNOWN => {
                self.values[i] = v as i8;
                self.trail.push(i);
                queue.push(i);
                true
            }
            cur => cur == v as i8,
        }
    }

    fn propagate(&mut self, mut queue: Vec<usize>) -> bool {
        while let Some(i) = queue.pop() {
            if self.values[i] == 1 {
                for k in 0..self.rs.orthogonal_to(i).len() {
                    let j = self.rs.orthogonal_to(i)[k];
                    if !self.set(j, false, &mut queue) {
                        return false;
                    }
                }
            } else {
                for k in 0..self.ray_contexts[i].len() {
                    let c = self.ray_contexts[i][k];
                    let ctx = &self.rs.contexts()[c];
                    if ctx.iter().any(|&j| self.values[j] == 1) {
                        continue;
                    }
                    let mut open = ctx.iter().filter(|&&j| self.values[j] == UNKNOWN);
                    match (open.next(), open.next()) {
                        (None, _) => return false,
                        (Some(&j), None) => {
                            if !self.set(j, true, &mut queue) {
                                return false;
                            }
                        }
                        _ => {}
                    }
                }
            }
        }
        true
    }

    fn undo_to(&mut self, mark: usize) {
        for i in self.trail.drain(mark..) {
            self.values[i] = UNKNOWN;
        }
    }

    fn solve(&mut self, max_nodes: u64) -> Step {
        self.nodes += 1;
        if self.nodes > max_nodes {
            return Step::OutOfBudget;
        }
        let Some(&var) = self.order.iter().find(|&&i| self.values[i] == UNKNOWN) else {
            return Step::Sat;
        };
        for v in [true, false] {
            let mark = self.trail.len();
            let mut queue = Vec::new();
            if self.set(var, v, &mut queue) && self.propagate(queue) {
                match self.solve(max_nodes) {
                    Step::Unsat => {}
                    other => return other,
                }
            }
            self.undo_to(mark);
        }
        Step::Unsat
    }

    fn run(mut self, max_nodes: u64) -> Option<Option<Assignment>> {
        if self.rs.contexts().iter().any(Vec::is_empty) {
            return Some(None);
        }
        match self.solve(max_nodes) {
            Step::Sat => Some(Some(Assignment { values: self.values.iter().map(|&v| v == 1).collect() })),
            Step::Unsat => Some(None),
            Step::OutOfBudget => None,
        }
    }
}

fn satisfiable(rs: &RaySet, max_nodes: u64) -> Option<Option<Assignment>> {
    Solver::new(rs).run(max_nodes)
}

/// Exhaustive search. Returns the first assignment in canonical search order,
/// or an unsatisfiable core of contexts.
pub fn find_assignment(rs: &RaySet, tol: Tolerance) -> Result<SearchOutcome> {
    Ok(find_assignment_bounded(rs, u64::MAX, tol)?.expect("unbounded search terminates"))
}

/// Like [`find_assignment`] but gives up (returning `None`) after
/// `max_nodes` search nodes in any single solve.
pub fn find_assignment_bounded(rs: &RaySet, max_nodes: u64, tol: Tolerance) -> Result<Option<SearchOutcome>> {
    rs.verify(tol)?;
    match satisfiable(rs, max_nodes) {
        None => Ok(None),
        Some(Some(a)) => Ok(Some(SearchOutcome::Found(a))),
        Some(None) => Ok(shrink_core(rs, max_nodes, tol)?.map(|core| SearchOutcome::NoAssignment { core })),
    }
}

/// Deletion-based core extraction with halving chunk sizes: try dropping
/// blocks of contexts, keep the drop whenever the rest stays unsatisfiable.
fn shrink_core(rs: &RaySet, max_nodes: u64, tol: Tolerance) -> Result<Option<Vec<usize>>> {
    let mut core: Vec<usize> = (0..rs.contexts().len()).collect();
    let mut chunk = (core.len() / 2).max(1);
    loop {
        let mut start = 0;
        while start < core.len() {
            let end = (start + chunk).min(core.len());
            let trial: Vec<usize> = core[..start].iter().chain(&core[end..]).copied().collect();
            if !trial.is_empty() {
                let sub = rs.restrict(&trial, tol)?;
                match satisfiable(&sub, max_nodes) {
                    None => return Ok(None),
                    Some(None) => {
                        core = trial;
                        continue;
                    }
                    Some(Some(_)) => {}
                }
            }
            start = end;
        }
        if chunk == 1 {
            break;
        }
        chunk /= 2;
    }
    Ok(Some(core))
}

/// Every valid assignment, in canonical search order, up to `limit`.
pub fn enumerate_assignments(rs: &RaySet, limit: usize) -> Vec<Assignment> {
    fn go(s: &mut Solver, out: &mut Vec<Assignment>, limit: usize) {
        if out.len() >= limit {
            return;
        }
        let Some(&var) = s.order.iter().find(|&&i| s.values[i] == UNKNOWN) else {
            out.push(Assignment { values: s.values.iter().map(|&v| v == 1).collect() });
            return;
        };
        for v in [true, false] {
            let mark = s.trail.len();
            let mut queue = Vec::new();
            if s.set(var, v, &mut queue) && s.propagate(queue) {
                go(s, out, limit);
            }
            s.undo_to(mark);
        }
    }
    let mut s = Solver::new(rs);
    let mut out = Vec::new();
    go(&mut s, &mut out, limit);
    out
}
