use std::collections::VecDeque;

use super::domain::{Domain, RemoveOutcome};
use super::propagator::Propagator;
use super::{CpError, VarId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Consistency {
    Consistent,
    Inconsistent,
}

/// Outcome of [`CspModel::check_solution`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    Valid,
    Violated(Vec<Violated>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violated {
    /// The propagator at this index rejects the assignment.
    Propagator(usize),
    /// The variable's value lies outside its original domain.
    Domain(VarId),
}

/// A complete assignment, one value per variable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Solution {
    pub values: Vec<u32>,
}

impl Solution {
    pub fn value(&self, var: VarId) -> u32 {
        self.values[var.index()]
    }
}

/// Variables, their current domains and the propagators over them.
#[derive(Debug, Clone, Default)]
pub struct CspModel {
    domains: Vec<Domain>,
    initial: Vec<Domain>,
    propagators: Vec<Propagator>,
    subscriptions: Vec<Vec<usize>>,
    propagations: u64,
}

impl CspModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, domain: Domain) -> Result<VarId, CpError> {
        if domain.is_empty() {
            return Err(CpError::EmptyDomain(self.domains.len()));
        }
        self.domains.push(domain);
        self.initial.push(domain);
        self.subscriptions.push(Vec::new());
        Ok(VarId(self.domains.len() - 1))
    }

    /// Registers a propagator and subscribes it to every variable in its scope.
    pub fn post(&mut self, propagator: Propagator) -> Result<usize, CpError> {
        propagator.validate(self.domains.len()).map_err(CpError::InvalidPropagator)?;
        let idx = self.propagators.len();
        let mut scope = propagator.scope();
        scope.sort_unstable();
        scope.dedup();
        for v in scope {
            self.subscriptions[v.index()].push(idx);
        }
        self.propagators.push(propagator);
        Ok(idx)
    }

    pub fn num_vars(&self) -> usize {
        self.domains.len()
    }

    pub fn domain(&self, var: VarId) -> Domain {
        self.domains[var.index()]
    }

    pub fn domains(&self) -> &[Domain] {
        &self.domains
    }

    /// Domains as declared, before any propagation or search.
    pub fn initial_domains(&self) -> &[Domain] {
        &self.initial
    }

    pub fn propagators(&self) -> &[Propagator] {
        &self.propagators
    }

    pub fn subscriptions(&self, var: VarId) -> &[usize] {
        &self.subscriptions[var.index()]
    }

    /// Total propagator executions since the model was built.
    pub fn propagation_count(&self) -> u64 {
        self.propagations
    }

    pub(crate) fn restore(&mut self, domains: &[Domain]) {
        self.domains.copy_from_slice(domains);
    }

    /// Removes `value` from `var`'s domain. Panics on a foreign `VarId`.
    pub fn remove(&mut self, var: VarId, value: u32) -> RemoveOutcome {
        self.domains[var.index()].remove(value)
    }

    pub(crate) fn assign(&mut self, var: VarId, value: u32) {
        self.domains[var.index()] = Domain::singleton(value);
    }

    /// Runs every propagator to a common fixpoint.
    pub fn propagate_fixpoint(&mut self) -> Consistency {
        let all: Vec<usize> = (0..self.propagators.len()).collect();
        self.propagate_queue(all)
    }

    /// Fixpoint propagation starting from the propagators watching `var`.
    pub(crate) fn propagate_from(&mut self, var: VarId) -> Consistency {
        let start = self.subscriptions[var.index()].clone();
        self.propagate_queue(start)
    }

    fn propagate_queue(&mut self, start: Vec<usize>) -> Consistency {
        let mut queued = vec![false; self.propagators.len()];
        let mut queue = VecDeque::with_capacity(start.len());
        for p in start {
            if !queued[p] {
                queued[p] = true;
                queue.push_back(p);
            }
        }
        let mut changed = Vec::new();
        while let Some(p) = queue.pop_front() {
            queued[p] = false;
            changed.clear();
            self.propagations += 1;
            if self.propagators[p].propagate(&mut self.domains, &mut changed).is_err() {
                return Consistency::Inconsistent;
            }
            for v in &changed {
                for &q in &self.subscriptions[v.index()] {
                    // propagators leave themselves at fixpoint
                    if q != p && !queued[q] {
                        queued[q] = true;
                        queue.push_back(q);
                    }
                }
            }
        }
        Consistency::Consistent
    }

    /// Evaluates every ground checker on `solution`; no propagation involved.
    pub fn check_solution(&self, solution: &Solution) -> CheckOutcome {
        assert_eq!(solution.values.len(), self.num_vars(), "assignment length mismatch");
        let mut violated: Vec<Violated> = solution
            .values
            .iter()
            .zip(&self.initial)
            .enumerate()
            .filter(|(_, (x, d))| !d.contains(**x))
            .map(|(i, _)| Violated::Domain(VarId(i)))
            .collect();
        violated.extend(
            self.propagators
                .iter()
                .enumerate()
                .filter(|(_, p)| !p.is_satisfied(&solution.values))
                .map(|(i, _)| Violated::Propagator(i)),
        );
        if violated.is_empty() {
            CheckOutcome::Valid
        } else {
            CheckOutcome::Violated(violated)
        }
    }
}
