//! Observers: a dual median graph, an excitation weight per vertex, an
//! optional realized world, and a conjectured state that updates when an
//! element is observed. An observation excites the observed element's up-set,
//! flags every excited element whose complement is currently held, and
//! repairs each flag by swapping the complement out and the element in.
//!
//! The idealized update excites the whole up-set. The dissipative variant
//! spends a budget per covering step and may stop short, leaving stale
//! complements in place; elements already held refresh the budget as the
//! wave passes, so repeated observations reach further as repairs accumulate.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::median::{MedianGraph, VertexId};
use crate::pocset::{Elem, PocSet};
use crate::realization::Realization;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum ObserverError {
    #[error("excitation must list one finite non-negative weight per vertex")]
    BadExcitation,
    #[error("excitation is identically zero")]
    ZeroExcitation,
    #[error("only proper elements can be observed")]
    TrivialObservation,
    #[error("charge budgets need initial > 0, decay in (0, 1], threshold > 0")]
    BadBudget,
    #[error("realization was built from a different poc-set than this observer")]
    PocSetMismatch,
    #[error("this observer has no realization attached")]
    NoRealization,
    #[error("atom index {0} out of range")]
    AtomRange(usize),
}

/// How far an excitation wave carries past the observed element.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum Budget {
    /// The whole up-set fires: identical to the idealized update.
    Unlimited,
    /// Fires up to this many covering steps from the nearest held element.
    Hops(usize),
    /// A charge of `initial` decays by `decay` per covering step and fires
    /// while at least `threshold`.
    Charge {
        initial: f64,
        decay: f64,
        threshold: f64,
    },
}

impl Budget {
    fn validate(&self) -> Result<(), ObserverError> {
        if let Budget::Charge {
            initial,
            decay,
            threshold,
        } = self
        {
            let ok = initial.is_finite()
                && *initial > 0.0
                && *decay > 0.0
                && *decay <= 1.0
                && threshold.is_finite()
                && *threshold > 0.0;
            if !ok {
                return Err(ObserverError::BadBudget);
            }
        }
        Ok(())
    }

    /// Whether a wave still fires after `depth` covering steps.
    fn fires(&self, depth: usize) -> bool {
        match self {
            Budget::Unlimited => true,
            Budget::Hops(k) => depth <= *k,
            Budget::Charge {
                initial,
                decay,
                threshold,
            } => initial * decay.powi(depth as i32) >= *threshold,
        }
    }
}

/// What one observation did.
#[derive(Clone, PartialEq, Debug)]
pub struct UpdateReport {
    pub observed: Elem,
    /// Excited elements whose complement was held when the wave arrived.
    pub flags: Vec<Elem>,
    /// Complements dropped from the conjectured state: the flags, starred.
    pub removed: Vec<Elem>,
    /// Elements newly present afterwards; always within the up-set.
    pub added: Vec<Elem>,
    /// Whether the wave covered the observed element's whole up-set.
    pub reached_all: bool,
    /// Elements processed by the wave, for work accounting.
    pub visited: usize,
}

struct Propagation {
    fired: Vec<Elem>,
    reached_all: bool,
    visited: usize,
}

/// Walks the up-set of `a` along covering steps. Each element fires when its
/// effective depth is within budget; elements of `eps` reset the depth to
/// zero as the wave passes, and only firing elements propagate further. The
/// observed element itself always fires.
fn propagate(p: &PocSet, eps: &BTreeSet<Elem>, a: Elem, budget: &Budget) -> Propagation {
    let upset = p.upset(a);
    if matches!(budget, Budget::Unlimited) {
        return Propagation {
            reached_all: true,
            visited: upset.len(),
            fired: upset,
        };
    }
    let mut depth: Vec<Option<usize>> = vec![None; p.elem_count()];
    depth[a.0 as usize] = Some(0);
    let mut queue = std::collections::VecDeque::from([a]);
    let mut visited = 0usize;
    while let Some(x) = queue.pop_front() {
        visited += 1;
        let d = depth[x.0 as usize].unwrap();
        if x != a && !budget.fires(d) {
            continue;
        }
        let out = if eps.contains(&x) { 0 } else { d };
        for y in p.covers_up(x) {
            let nd = out + 1;
            if depth[y.0 as usize].map_or(true, |old| nd < old) {
                depth[y.0 as usize] = Some(nd);
                queue.push_back(y);
            }
        }
    }
    let fired: Vec<Elem> = upset
        .iter()
        .copied()
        .filter(|&x| x == a || depth[x.0 as usize].is_some_and(|d| budget.fires(d)))
        .collect();
    let reached_all = fired.len() == upset.len();
    Propagation {
        fired,
        reached_all,
        visited,
    }
}

/// Classification of the conjectured state against an atom's true profile.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MisperceptionKind {
    /// The conjecture matches the profile exactly.
    Exact,
    /// The conjecture is a strict subset of the profile.
    Incomplete,
    /// The conjecture holds elements the profile denies.
    Contradicted,
}

#[derive(Clone, PartialEq, Debug)]
pub struct MisperceptionReport {
    pub kind: MisperceptionKind,
    /// Profile elements the conjecture lacks.
    pub missing: Vec<Elem>,
    /// Conjectured elements the profile denies.
    pub extra: Vec<Elem>,
    /// Vertices the world allows but the observer weights at zero.
    pub consistent_zero_weight: Vec<VertexId>,
    /// Vertices the world rules out but the observer still weights.
    pub inconsistent_positive_weight: Vec<VertexId>,
}

/// A belief state over a dual median graph.
#[derive(Clone, Debug)]
pub struct Observer {
    graph: MedianGraph,
    realization: Option<Realization>,
    excitation: Vec<f64>,
    epsilon: BTreeSet<Elem>,
}

fn check_excitation(p: &[f64], vertex_count: usize) -> Result<(), ObserverError> {
    if p.len() != vertex_count || p.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(ObserverError::BadExcitation);
    }
    if p.iter().all(|&w| w == 0.0) {
        return Err(ObserverError::ZeroExcitation);
    }
    Ok(())
}

impl Observer {
    /// An observer with the given excitation and conjectured state. The
    /// conjecture may be incoherent; [`Observer::coherence_check`] exposes
    /// that rather than construction rejecting it.
    pub fn new(
        graph: MedianGraph,
        excitation: Vec<f64>,
        epsilon: BTreeSet<Elem>,
    ) -> Result<Observer, ObserverError> {
        check_excitation(&excitation, graph.vertex_count())?;
        Ok(Observer {
            graph,
            realization: None,
            excitation,
            epsilon,
        })
    }

    /// An observer whose excitation is the objective vertex mass of the
    /// attached world.
    pub fn objective(
        graph: MedianGraph,
        realization: Realization,
        epsilon: BTreeSet<Elem>,
    ) -> Result<Observer, ObserverError> {
        let excitation = realization
            .objective_excitation(&graph)
            .map_err(|_| ObserverError::PocSetMismatch)?;
        let mut o = Observer::new(graph, excitation, epsilon)?;
        o.realization = Some(realization);
        Ok(o)
    }

    pub fn attach_realization(&mut self, r: Realization) -> Result<(), ObserverError> {
        if r.pocset() != self.graph.pocset() {
            return Err(ObserverError::PocSetMismatch);
        }
        self.realization = Some(r);
        Ok(())
    }

    pub fn graph(&self) -> &MedianGraph {
        &self.graph
    }

    pub fn pocset(&self) -> &PocSet {
        self.graph.pocset()
    }

    pub fn realization(&self) -> Option<&Realization> {
        self.realization.as_ref()
    }

    pub fn excitation(&self) -> &[f64] {
        &self.excitation
    }

    /// Replaces the excitation; updates never modify it themselves.
    pub fn set_excitation(&mut self, p: Vec<f64>) -> Result<(), ObserverError> {
        check_excitation(&p, self.graph.vertex_count())?;
        self.excitation = p;
        Ok(())
    }

    pub fn epsilon(&self) -> &BTreeSet<Elem> {
        &self.epsilon
    }

    pub fn set_epsilon(&mut self, epsilon: BTreeSet<Elem>) {
        self.epsilon = epsilon;
    }

    /// Probability of a vertex set: its excitation over the total.
    pub fn prob(&self, vertices: &[VertexId]) -> f64 {
        let mut seen = vec![false; self.graph.vertex_count()];
        let mut mass = 0.0;
        for &v in vertices {
            if !seen[v] {
                seen[v] = true;
                mass += self.excitation[v];
            }
        }
        mass / self.excitation.iter().sum::<f64>()
    }

    /// Every unordered pair of conjectured elements with one below the
    /// other's complement, each reported once.
    pub fn coherence_check(&self) -> Vec<(Elem, Elem)> {
        let p = self.pocset();
        let elems: Vec<Elem> = self.epsilon.iter().copied().collect();
        let mut out = Vec::new();
        for (i, &a) in elems.iter().enumerate() {
            for &b in &elems[i..] {
                if p.le(a, b.star()) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Observes `a` with the whole up-set excited.
    pub fn update_idealized(&mut self, a: Elem) -> Result<UpdateReport, ObserverError> {
        self.update_dissipative(a, &Budget::Unlimited)
    }

    /// Observes `a`, exciting only the part of the up-set the budget reaches.
    /// A partial wave can leave the conjecture incoherent; that is recorded,
    /// not rejected.
    pub fn update_dissipative(
        &mut self,
        a: Elem,
        budget: &Budget,
    ) -> Result<UpdateReport, ObserverError> {
        if !a.is_proper() {
            return Err(ObserverError::TrivialObservation);
        }
        budget.validate()?;
        let prop = propagate(self.pocset(), &self.epsilon, a, budget);
        let flags: Vec<Elem> = prop
            .fired
            .iter()
            .copied()
            .filter(|b| self.epsilon.contains(&b.star()))
            .collect();
        let removed: Vec<Elem> = flags.iter().map(|b| b.star()).collect();
        let mut added = Vec::new();
        for b in flags.iter().copied().chain([a]) {
            if !self.epsilon.contains(&b) && !added.contains(&b) {
                added.push(b);
            }
        }
        added.sort_unstable();
        for r in &removed {
            self.epsilon.remove(r);
        }
        self.epsilon.extend(flags.iter().copied());
        self.epsilon.insert(a);
        Ok(UpdateReport {
            observed: a,
            flags,
            removed,
            added,
            reached_all: prop.reached_all,
            visited: prop.visited,
        })
    }

    /// Compares the conjecture with the true profile of `atom` and surveys
    /// where excitation and world consistency disagree.
    pub fn misperception_report(&self, atom: usize) -> Result<MisperceptionReport, ObserverError> {
        let r = self.realization.as_ref().ok_or(ObserverError::NoRealization)?;
        if atom >= r.world().atom_count() {
            return Err(ObserverError::AtomRange(atom));
        }
        let profile: BTreeSet<Elem> = r
            .profile(atom)
            .elems(self.pocset().tag_count())
            .into_iter()
            .collect();
        let held: BTreeSet<Elem> = self
            .epsilon
            .iter()
            .copied()
            .filter(|e| e.is_proper())
            .collect();
        let missing: Vec<Elem> = profile.difference(&held).copied().collect();
        let extra: Vec<Elem> = held.difference(&profile).copied().collect();
        let kind = if extra.is_empty() && missing.is_empty() {
            MisperceptionKind::Exact
        } else if extra.is_empty() {
            MisperceptionKind::Incomplete
        } else {
            MisperceptionKind::Contradicted
        };
        let mut consistent_zero_weight = Vec::new();
        let mut inconsistent_positive_weight = Vec::new();
        let n = self.pocset().tag_count();
        for v in 0..self.graph.vertex_count() {
            let consistent = r.is_consistent(self.graph.selection(v).elems(n));
            if consistent && self.excitation[v] == 0.0 {
                consistent_zero_weight.push(v);
            }
            if !consistent && self.excitation[v] > 0.0 {
                inconsistent_positive_weight.push(v);
            }
        }
        Ok(MisperceptionReport {
            kind,
            missing,
            extra,
            consistent_zero_weight,
            inconsistent_positive_weight,
        })
    }
}
