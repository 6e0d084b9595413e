//! Structural updates on poc-sets: degenerating a corner by imposing the
//! relation that empties it, expanding by a fresh tag or a relaxed relation,
//! and the retractions that tie the old structure to the new. Excitation
//! weights ride along via the injective dual of the retraction, and a move
//! log replays every recorded step to confirm each one was a single
//! elementary move with canonical weight transport.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::median::{dual_vertex_map, Corner, MedianError, MedianGraph, VertexId, HARD_MAX_TAGS};
use crate::morphism::PocMorphism;
use crate::observer::Observer;
use crate::pocset::{Elem, PocSet};

/// Weight comparisons in transports and audits are exact up to this.
pub const TRANSPORT_TOLERANCE: f64 = 1e-12;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum DeformError {
    #[error("only proper elements take part in structural moves")]
    NotProper,
    #[error("elements of one complement pair don't span a corner")]
    SamePair,
    #[error("the imposed relation forces {0} below its own complement")]
    ForcedTrivial(String),
    #[error("no relation {0} < {1} to relax")]
    RelationAbsent(String, String),
    #[error("{0} < {1} is not a covering relation; relaxing it would break transitivity")]
    NotACover(String, String),
    #[error("invalid tag name {0:?}")]
    BadTag(String),
    #[error("tag {0:?} is already in the alphabet")]
    DuplicateTag(String),
    #[error("retraction target has tag {0:?} that the source lacks")]
    TagNotShared(String),
    #[error("retraction moves shared tag {0:?} instead of fixing it")]
    NotIdentityOnShared(String),
    #[error("retractions do not chain: {0}")]
    Chain(String),
    #[error("weights must be one finite non-negative value per vertex with positive total")]
    BadWeights,
    #[error("threshold must lie in (0, 1]")]
    BadThreshold,
    #[error(transparent)]
    Graph(#[from] MedianError),
}

/// A poc-morphism from a bigger structure onto a smaller one that fixes
/// every surviving tag. Degeneration and expansion both hand one back;
/// `from` is always the side with the bigger dual graph.
#[derive(Clone, PartialEq, Debug)]
pub struct Retraction {
    morphism: PocMorphism,
}

impl Retraction {
    /// Wraps a morphism after checking the retraction laws: the target
    /// alphabet is a sub-alphabet of the source, fixed pointwise.
    pub fn new(morphism: PocMorphism) -> Result<Retraction, DeformError> {
        let from = morphism.source();
        let to = morphism.target();
        for (j, name) in to.tags().iter().enumerate() {
            match from.tag_elem(name) {
                None => return Err(DeformError::TagNotShared(name.clone())),
                Some(e) => {
                    if morphism.apply(e) != Elem::positive(j) {
                        return Err(DeformError::NotIdentityOnShared(name.clone()));
                    }
                }
            }
        }
        Ok(Retraction { morphism })
    }

    pub fn identity(p: &PocSet) -> Retraction {
        Retraction {
            morphism: PocMorphism::identity(p),
        }
    }

    pub fn from(&self) -> &PocSet {
        self.morphism.source()
    }

    pub fn to(&self) -> &PocSet {
        self.morphism.target()
    }

    pub fn apply(&self, e: Elem) -> Elem {
        self.morphism.apply(e)
    }

    pub fn morphism(&self) -> &PocMorphism {
        &self.morphism
    }

    pub fn is_identity(&self) -> bool {
        self.from() == self.to()
            && (0..self.from().tag_count()).all(|i| self.apply(Elem::positive(i)) == Elem::positive(i))
    }

    /// Chains this retraction with one that leaves from its target.
    pub fn then(&self, next: &Retraction) -> Result<Retraction, DeformError> {
        let composed = self
            .morphism
            .then(&next.morphism)
            .map_err(|e| DeformError::Chain(e.to_string()))?;
        Retraction::new(composed)
    }
}

/// Imposes the relations in `extra` on a copy of `q`, closes, and quotients
/// out any elements the closure identifies. Returns the quotient and the
/// image of every original element.
fn impose_and_quotient(
    q: &PocSet,
    extra: &[(Elem, Elem)],
) -> Result<(PocSet, Vec<Elem>), DeformError> {
    let mut cur = q.clone();
    for &(x, y) in extra {
        cur.set_lt(x, y);
        cur.set_lt(y.star(), x.star());
    }
    cur.close_in_place();
    let mut map: Vec<Elem> = (0..q.elem_count() as u32).map(Elem).collect();
    loop {
        for x in cur.proper_elems() {
            if cur.le(x, x.star()) {
                return Err(DeformError::ForcedTrivial(cur.tags()[x.tag()].clone()));
            }
        }
        // Mutual comparability after closure means the elements were
        // identified; collect the classes with a polarity-aware union-find.
        let m = cur.elem_count();
        let mut parent: Vec<usize> = (0..m).collect();
        fn find(parent: &mut Vec<usize>, mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        let mut merged = false;
        for x in cur.elems() {
            for y in cur.elems() {
                if x < y && cur.lt(x, y) && cur.lt(y, x) {
                    for (u, v) in [(x, y), (x.star(), y.star())] {
                        let (ru, rv) = (find(&mut parent, u.idx()), find(&mut parent, v.idx()));
                        if ru != rv {
                            parent[ru] = rv;
                            merged = true;
                        }
                    }
                }
            }
        }
        if !merged {
            return Ok((cur, map));
        }
        for x in cur.proper_elems() {
            if find(&mut parent, x.idx()) == find(&mut parent, x.star().idx()) {
                return Err(DeformError::ForcedTrivial(cur.tags()[x.tag()].clone()));
            }
        }
        // Per class the lexicographically smallest tag survives, keeping the
        // polarity its literal has inside the class.
        let mut class_members: Vec<Vec<Elem>> = vec![Vec::new(); m];
        for x in cur.proper_elems() {
            class_members[find(&mut parent, x.idx())].push(x);
        }
        let survivor_of_root = |members: &[Elem]| -> Elem {
            *members
                .iter()
                .min_by_key(|e| &cur.tags()[e.tag()])
                .expect("class is non-empty")
        };
        let survives = |t: usize, parent: &mut Vec<usize>, class_members: &Vec<Vec<Elem>>| {
            let root = find(parent, Elem::positive(t).idx());
            survivor_of_root(&class_members[root]) == Elem::positive(t)
        };
        let keep: Vec<usize> = (0..cur.tag_count())
            .filter(|&t| survives(t, &mut parent, &class_members))
            .collect();
        let new_tags: Vec<String> = keep.iter().map(|&t| cur.tags()[t].clone()).collect();
        let new_index_of: std::collections::HashMap<usize, usize> = keep
            .iter()
            .enumerate()
            .map(|(new, &old)| (old, new))
            .collect();
        let step = |e: Elem, parent: &mut Vec<usize>| -> Elem {
            if !e.is_proper() {
                return e;
            }
            let root = find(parent, e.idx());
            let lit = survivor_of_root(&class_members[root]);
            let new_tag = new_index_of[&lit.tag()];
            if lit.is_positive() {
                Elem::positive(new_tag)
            } else {
                Elem::negative(new_tag)
            }
        };
        let mut next = PocSet::unrelated(new_tags);
        for x in cur.elems() {
            for y in cur.elems() {
                if cur.lt(x, y) {
                    let (nx, ny) = (step(x, &mut parent), step(y, &mut parent));
                    if nx != ny {
                        next.set_lt(nx, ny);
                    }
                }
            }
        }
        next.close_in_place();
        for img in map.iter_mut() {
            *img = step(*img, &mut parent);
        }
        cur = next;
    }
}

fn retraction_from_map(q: &PocSet, small: PocSet, map: &[Elem]) -> Retraction {
    let images: Vec<Elem> = (0..q.tag_count())
        .map(|i| map[Elem::positive(i).idx()])
        .collect();
    let morphism = PocMorphism::new(q.clone(), small, images)
        .expect("quotient maps preserve order by construction");
    Retraction::new(morphism).expect("quotients fix every surviving tag")
}

/// Empties the corner spanned by `a` and `b` by imposing `a` below the
/// complement of `b` and closing. Closure can identify tags; the smaller
/// poc-set keeps the lexicographically smallest tag of each merged class.
/// An already-empty corner returns the input with the identity retraction.
pub fn degenerate(q: &PocSet, a: Elem, b: Elem) -> Result<(PocSet, Retraction), DeformError> {
    if !a.is_proper() || !b.is_proper() {
        return Err(DeformError::NotProper);
    }
    if a.tag() == b.tag() {
        return Err(DeformError::SamePair);
    }
    if q.le(a, b.star()) {
        return Ok((q.clone(), Retraction::identity(q)));
    }
    let (small, map) = impose_and_quotient(q, &[(a, b.star())])?;
    let r = retraction_from_map(q, small.clone(), &map);
    Ok((small, r))
}

/// The two inverse moves to degeneration.
#[derive(Clone, PartialEq, Debug)]
pub enum Expansion {
    /// A fresh tag, unrelated to everything; the retraction sends it to the
    /// maximum, so its dual effect is forgetting the new coordinate.
    AddTag(String),
    /// Drops one covering relation, restoring the corner it had emptied.
    RelaxRelation(Elem, Elem),
}

/// Grows `p` by one move and returns the bigger poc-set with the retraction
/// back onto `p`.
pub fn expand(p: &PocSet, how: &Expansion) -> Result<(PocSet, Retraction), DeformError> {
    match how {
        Expansion::AddTag(name) => {
            let bad = name.is_empty()
                || name == "0"
                || name == "1"
                || name.ends_with('*')
                || name.ends_with('\u{2217}');
            if bad {
                return Err(DeformError::BadTag(name.clone()));
            }
            if p.tag_elem(name).is_some() {
                return Err(DeformError::DuplicateTag(name.clone()));
            }
            let mut tags: Vec<String> = p.tags().to_vec();
            tags.push(name.clone());
            // Appending keeps every existing element id stable.
            let mut big = PocSet::unrelated(tags);
            for x in p.elems() {
                for y in p.elems() {
                    if p.lt(x, y) {
                        big.set_lt(x, y);
                    }
                }
            }
            let mut images: Vec<Elem> = (0..p.tag_count()).map(Elem::positive).collect();
            images.push(Elem::ONE);
            let morphism = PocMorphism::new(big.clone(), p.clone(), images)
                .expect("collapsing a fresh unrelated tag preserves order");
            Ok((big, Retraction::new(morphism).expect("existing tags are fixed")))
        }
        Expansion::RelaxRelation(a, b) => {
            let (a, b) = (*a, *b);
            if !a.is_proper() || !b.is_proper() {
                return Err(DeformError::NotProper);
            }
            if !p.lt(a, b) {
                return Err(DeformError::RelationAbsent(p.elem_name(a), p.elem_name(b)));
            }
            let covered = p
                .proper_elems()
                .any(|z| z != a && z != b && p.lt(a, z) && p.lt(z, b));
            if covered {
                return Err(DeformError::NotACover(p.elem_name(a), p.elem_name(b)));
            }
            let mut big = p.clone();
            big.clear_lt(a, b);
            big.clear_lt(b.star(), a.star());
            debug_assert!(big.validate().is_ok());
            let morphism = PocMorphism::new(big.clone(), p.clone(), {
                (0..p.tag_count()).map(Elem::positive).collect()
            })
            .expect("dropping a relation keeps the identity monotone");
            Ok((big, Retraction::new(morphism).expect("same alphabet")))
        }
    }
}

/// Weights after a transport, with whether they had to be rescaled.
#[derive(Clone, PartialEq, Debug)]
pub struct Transported {
    pub weights: Vec<f64>,
    pub renormalized: bool,
}

fn check_weights(p: &[f64], expected_len: usize) -> Result<f64, DeformError> {
    if p.len() != expected_len || p.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(DeformError::BadWeights);
    }
    let sum: f64 = p.iter().sum();
    if sum <= 0.0 {
        return Err(DeformError::BadWeights);
    }
    Ok(sum)
}

fn graphs_of(r: &Retraction) -> Result<(MedianGraph, MedianGraph, Vec<VertexId>), DeformError> {
    let g_from = MedianGraph::build_with_limit(r.from(), HARD_MAX_TAGS)?;
    let g_to = MedianGraph::build_with_limit(r.to(), HARD_MAX_TAGS)?;
    let embedding = dual_vertex_map(r.morphism(), &g_to, &g_from)
        .expect("graphs were built from the retraction's own endpoints");
    Ok((g_from, g_to, embedding))
}

/// Pushes weights on the small dual forward onto the big one: each small
/// vertex hands its weight to its embedded image, everything off the image
/// gets zero. Unnormalized input is normalized first and flagged.
pub fn transport_weights(r: &Retraction, p: &[f64]) -> Result<Transported, DeformError> {
    let (g_from, g_to, embedding) = graphs_of(r)?;
    let sum = check_weights(p, g_to.vertex_count())?;
    let renormalized = (sum - 1.0).abs() > TRANSPORT_TOLERANCE;
    let mut out = vec![0.0; g_from.vertex_count()];
    for (vs, &vb) in embedding.iter().enumerate() {
        out[vb] = if renormalized { p[vs] / sum } else { p[vs] };
    }
    Ok(Transported {
        weights: out,
        renormalized,
    })
}

/// Reads weights on the big dual back along the embedding of the small one.
/// Mass outside the image is discarded; if anything was lost the result is
/// rescaled to the input total and flagged. All-zero output is returned
/// as-is so callers can tell a fully-discarded state apart.
pub fn pull_back_weights(r: &Retraction, p: &[f64]) -> Result<Transported, DeformError> {
    let (g_from, g_to, embedding) = graphs_of(r)?;
    let in_sum = check_weights(p, g_from.vertex_count())?;
    let mut out: Vec<f64> = embedding.iter().map(|&vb| p[vb]).collect();
    debug_assert_eq!(out.len(), g_to.vertex_count());
    let out_sum: f64 = out.iter().sum();
    if out_sum == 0.0 {
        return Ok(Transported {
            weights: out,
            renormalized: false,
        });
    }
    let renormalized = (out_sum - in_sum).abs() > TRANSPORT_TOLERANCE;
    if renormalized {
        let scale = in_sum / out_sum;
        for w in out.iter_mut() {
            *w *= scale;
        }
    }
    Ok(Transported {
        weights: out,
        renormalized,
    })
}

/// Maps a conjectured state through a retraction, dropping any element that
/// lands on a trivial one.
pub fn map_epsilon(r: &Retraction, eps: &BTreeSet<Elem>) -> BTreeSet<Elem> {
    eps.iter()
        .map(|&e| r.apply(e))
        .filter(|e| e.is_proper())
        .collect()
}

/// Non-empty corners whose probability under the observer's excitation is
/// below the threshold, cheapest first with element ids breaking ties.
pub fn degeneration_candidates(
    o: &Observer,
    threshold: f64,
) -> Result<Vec<(Corner, f64)>, DeformError> {
    if !threshold.is_finite() || threshold <= 0.0 || threshold > 1.0 {
        return Err(DeformError::BadThreshold);
    }
    let p = o.pocset();
    let mut out = Vec::new();
    for a in p.proper_elems() {
        for b in p.proper_elems().filter(|b| *b > a && b.tag() != a.tag()) {
            let corner = o
                .graph()
                .corner(a, b)
                .expect("distinct proper pairs always span a corner");
            if corner.is_empty() {
                continue;
            }
            let prob = o.prob(&corner.vertices);
            if prob < threshold {
                out.push((corner, prob));
            }
        }
    }
    out.sort_by(|x, y| {
        x.1.partial_cmp(&y.1)
            .expect("corner probabilities are finite")
            .then(x.0.a.cmp(&y.0.a))
            .then(x.0.b.cmp(&y.0.b))
    });
    Ok(out)
}

#[derive(Clone, PartialEq, Debug)]
pub enum MoveKind {
    Degenerate { a: Elem, b: Elem },
    Expand(Expansion),
}

/// Human-readable account of what a move changed, in tag names.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct MoveDelta {
    /// Relation imposed by a degeneration.
    pub imposed: Option<(String, String)>,
    /// Relation removed by a relaxation.
    pub relaxed: Option<(String, String)>,
    pub added_tag: Option<String>,
    /// Tags the closure identified away, with the element each one became.
    pub merged: Vec<(String, String)>,
}

/// Computes the delta a retraction realizes for the given move kind.
pub fn move_delta(kind: &MoveKind, r: &Retraction) -> MoveDelta {
    let mut delta = MoveDelta::default();
    match kind {
        MoveKind::Degenerate { a, b } => {
            delta.imposed = Some((r.from().elem_name(*a), r.from().elem_name(b.star())));
            for (t, name) in r.from().tags().iter().enumerate() {
                if r.to().tag_elem(name).is_none() {
                    let image = r.to().elem_name(r.apply(Elem::positive(t)));
                    delta.merged.push((name.clone(), image));
                }
            }
        }
        MoveKind::Expand(Expansion::AddTag(name)) => delta.added_tag = Some(name.clone()),
        MoveKind::Expand(Expansion::RelaxRelation(a, b)) => {
            delta.relaxed = Some((r.to().elem_name(*a), r.to().elem_name(*b)));
        }
    }
    delta
}

/// One structural move with its retraction and the small-to-big weight
/// transport that witnesses the face relation between the two states.
#[derive(Clone, PartialEq, Debug)]
pub struct DeformationMove {
    pub kind: MoveKind,
    pub retraction: Retraction,
    pub delta: MoveDelta,
    pub transported: Transported,
}

/// The whole observer state at one instant, enough to replay a move.
#[derive(Clone, PartialEq, Debug)]
pub struct ObserverSnapshot {
    pub pocset: PocSet,
    pub excitation: Vec<f64>,
    pub epsilon: BTreeSet<Elem>,
}

impl ObserverSnapshot {
    pub fn of(o: &Observer) -> ObserverSnapshot {
        ObserverSnapshot {
            pocset: o.pocset().clone(),
            excitation: o.excitation().to_vec(),
            epsilon: o.epsilon().clone(),
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct MoveStep {
    pub before: ObserverSnapshot,
    pub mv: DeformationMove,
    pub after: ObserverSnapshot,
}

#[derive(Clone, PartialEq, Debug, Default)]
pub struct MoveLog {
    pub steps: Vec<MoveStep>,
}

/// Verdict of replaying a move log; `violation` names the first step that
/// was not a single canonical move.
#[derive(Clone, PartialEq, Debug)]
pub struct AuditOutcome {
    pub ok: bool,
    pub violation: Option<String>,
}

fn close_enough(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b)
            .all(|(x, y)| (x - y).abs() <= TRANSPORT_TOLERANCE)
}

impl MoveLog {
    pub fn push(&mut self, step: MoveStep) {
        self.steps.push(step);
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Replays every recorded step and checks four things per step: the
    /// recorded retraction is exactly what the recorded move produces, the
    /// after state lives on the move's output, weights moved canonically
    /// (push-forward for expansions, pull-back for degenerations, matching
    /// the recorded transport), and the conjecture was mapped along. Two
    /// structural changes fused into one step fail the replay comparison.
    pub fn audit(&self) -> AuditOutcome {
        for (i, step) in self.steps.iter().enumerate() {
            if let Some(why) = Self::audit_step(step) {
                return AuditOutcome {
                    ok: false,
                    violation: Some(format!("step {i}: {why}")),
                };
            }
            if let Some(next) = self.steps.get(i + 1) {
                if next.before.pocset != step.after.pocset {
                    return AuditOutcome {
                        ok: false,
                        violation: Some(format!(
                            "step {}: starts from a structure step {i} did not produce",
                            i + 1
                        )),
                    };
                }
            }
        }
        AuditOutcome {
            ok: true,
            violation: None,
        }
    }

    fn audit_step(step: &MoveStep) -> Option<String> {
        let replayed = match &step.mv.kind {
            MoveKind::Degenerate { a, b } => degenerate(&step.before.pocset, *a, *b),
            MoveKind::Expand(how) => expand(&step.before.pocset, how),
        };
        let (out, r) = match replayed {
            Ok(pair) => pair,
            Err(e) => return Some(format!("recorded move does not replay: {e}")),
        };
        if out != step.after.pocset {
            return Some("replayed move produces a different structure".into());
        }
        if r != step.mv.retraction {
            return Some("recorded retraction is not the move's own".into());
        }
        // Small side of the retraction holds the state with fewer vertices:
        // after a degeneration, before an expansion.
        let (small, expected_eps) = match &step.mv.kind {
            MoveKind::Degenerate { .. } => {
                let pulled = match pull_back_weights(&r, &step.before.excitation) {
                    Ok(t) => t,
                    Err(e) => return Some(format!("weights do not pull back: {e}")),
                };
                if !close_enough(&pulled.weights, &step.after.excitation) {
                    return Some("after-state weights are not the canonical pull-back".into());
                }
                (step.after.excitation.clone(), map_epsilon(&r, &step.before.epsilon))
            }
            MoveKind::Expand(_) => {
                let expected = match transport_weights(&r, &step.before.excitation) {
                    Ok(t) => t,
                    Err(e) => return Some(format!("weights do not transport: {e}")),
                };
                if !close_enough(&expected.weights, &step.after.excitation) {
                    return Some("after-state weights are not the canonical push-forward".into());
                }
                (step.before.excitation.clone(), step.before.epsilon.clone())
            }
        };
        if step.after.epsilon != expected_eps {
            return Some("conjecture was not carried through the retraction".into());
        }
        match transport_weights(&r, &small) {
            Ok(t) => {
                if !close_enough(&t.weights, &step.mv.transported.weights) {
                    return Some("recorded transport disagrees with the canonical one".into());
                }
            }
            Err(e) => return Some(format!("recorded transport cannot be recomputed: {e}")),
        }
        None
    }
}
