//! Finite poc-sets: partially ordered sets with a least element and an
//! order-reversing complementation `*` in which no proper element lies below
//! its own complement.
//!
//! A poc-set over `n` tags has `2n + 2` elements: the constants `0` and `1`,
//! plus a positive and a complemented literal per tag. The strict order is
//! materialized as a dense matrix closed under transitivity, so order queries
//! are O(1) and validation checks each axiom over all pairs.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// One element of a poc-set, identified by index.
///
/// Index 0 is the minimum `0`, index 1 the maximum `1`, and tag `i` occupies
/// indices `2i + 2` (positive) and `2i + 3` (complemented). Complementation is
/// `index ^ 1` across the board.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Elem(pub u32);

impl Elem {
    /// The least element `0`.
    pub const ZERO: Elem = Elem(0);
    /// The greatest element `1`, the complement of `0`.
    pub const ONE: Elem = Elem(1);

    /// Positive literal of tag `i`.
    pub fn positive(tag: usize) -> Elem {
        Elem(2 * tag as u32 + 2)
    }

    /// Complemented literal of tag `i`.
    pub fn negative(tag: usize) -> Elem {
        Elem(2 * tag as u32 + 3)
    }

    /// The complement `a*`.
    pub fn star(self) -> Elem {
        Elem(self.0 ^ 1)
    }

    /// True for every element other than `0` and `1`.
    pub fn is_proper(self) -> bool {
        self.0 >= 2
    }

    /// True for positive literals (and for `0`, which pairs with `1`).
    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// Tag index of a proper element.
    pub fn tag(self) -> usize {
        debug_assert!(self.is_proper());
        (self.0 as usize - 2) / 2
    }

    pub(crate) fn idx(self) -> usize {
        self.0 as usize
    }
}

/// How two proper elements from distinct complement pairs relate.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PairRelation {
    /// Exactly one of the four order relations below holds.
    Nested(Nesting),
    /// No order relation holds in either polarity; written `a ⋔ b`.
    Transverse,
}

/// The four mutually exclusive ways `a` can nest with `b`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Nesting {
    /// `a ≤ b`
    ALeB,
    /// `a ≤ b*`
    ALeBStar,
    /// `a* ≤ b`
    AStarLeB,
    /// `a* ≤ b*`, equivalently `b ≤ a`
    AStarLeBStar,
}

impl fmt::Display for Nesting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nesting::ALeB => write!(f, "a <= b"),
            Nesting::ALeBStar => write!(f, "a <= b*"),
            Nesting::AStarLeB => write!(f, "a* <= b"),
            Nesting::AStarLeBStar => write!(f, "a* <= b*"),
        }
    }
}

/// Why a declared relation set cannot be closed into a poc-set order.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum CloseError {
    #[error("tag {0:?} is empty, reserved, or ends in a complement marker")]
    BadTag(String),
    #[error("duplicate tag {0:?}")]
    DuplicateTag(String),
    #[error("unknown element name {0:?}")]
    UnknownElement(String),
    #[error("relation {0} < {0} relates an element to itself")]
    SelfRelation(String),
    #[error("relation {0} < {1} relates an element to its own complement")]
    ComplementRelation(String, String),
    #[error("closure forces {0} <= {0}*, making a proper element trivial")]
    ForcedTrivial(String),
    #[error("closure forces {0} = {1}, collapsing distinct elements")]
    ForcedEqual(String, String),
}

/// One failed poc-set axiom, with witnesses named.
#[derive(Clone, PartialEq, Debug)]
pub enum Violation {
    /// `0 < x` is missing for some `x != 0`.
    NotMinimum { elem: String },
    /// `x < 1` is missing for some `x != 1`.
    NotMaximum { elem: String },
    /// `a < b` is stored but `b* < a*` is not.
    InvolutionNotReversing { a: String, b: String },
    /// `a <= a*` for a proper `a`.
    ProperBelowStar { a: String },
    /// `a < b` and `b < c` without `a < c`.
    NotTransitive { a: String, b: String, c: String },
    /// Both `a < b` and `b < a` for distinct elements.
    NotAntisymmetric { a: String, b: String },
    /// `a < a` is stored.
    Reflexive { a: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotMinimum { elem } => write!(f, "0 is not below {elem}"),
            Violation::NotMaximum { elem } => write!(f, "{elem} is not below 1"),
            Violation::InvolutionNotReversing { a, b } => {
                write!(f, "{a} < {b} stored without {b}* < {a}*")
            }
            Violation::ProperBelowStar { a } => {
                write!(f, "{a} <= {a}* with {a} proper")
            }
            Violation::NotTransitive { a, b, c } => {
                write!(f, "{a} < {b} < {c} stored without {a} < {c}")
            }
            Violation::NotAntisymmetric { a, b } => {
                write!(f, "both {a} < {b} and {b} < {a} stored")
            }
            Violation::Reflexive { a } => write!(f, "{a} < {a} stored"),
        }
    }
}

/// Outcome of checking every poc-set axiom; violations are data, not faults.
#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// A finite poc-set with its strict order stored transitively closed.
#[derive(Clone, PartialEq, Debug)]
pub struct PocSet {
    tags: Vec<String>,
    /// Row-major strict-order matrix over all `2n + 2` elements.
    lt: Vec<bool>,
}

fn check_tags(tags: &[String]) -> Result<(), CloseError> {
    let mut seen = BTreeSet::new();
    for t in tags {
        if t.is_empty() || t == "0" || t == "1" || t.ends_with('*') || t.ends_with('\u{2217}') {
            return Err(CloseError::BadTag(t.clone()));
        }
        if !seen.insert(t.clone()) {
            return Err(CloseError::DuplicateTag(t.clone()));
        }
    }
    Ok(())
}

/// Transitive closure in place (Floyd-Warshall on a boolean matrix).
fn close_transitive(lt: &mut [bool], m: usize) {
    for k in 0..m {
        for i in 0..m {
            if lt[i * m + k] {
                for j in 0..m {
                    if lt[k * m + j] {
                        lt[i * m + j] = true;
                    }
                }
            }
        }
    }
}

impl PocSet {
    /// Builds the poc-set over `tags` with no relations among proper elements.
    pub fn unrelated<S: Into<String>>(tags: impl IntoIterator<Item = S>) -> PocSet {
        let tags: Vec<String> = tags.into_iter().map(Into::into).collect();
        check_tags(&tags).expect("invalid tag");
        let m = 2 * tags.len() + 2;
        let mut p = PocSet {
            tags,
            lt: vec![false; m * m],
        };
        p.seed_trivial();
        p
    }

    /// Builds the smallest closed poc-set order containing the declared
    /// relations, each pair meaning `left < right`. Fails if the closure
    /// would make a proper element trivial or collapse distinct elements.
    pub fn close<S: Into<String>>(
        tags: impl IntoIterator<Item = S>,
        relations: &[(&str, &str)],
    ) -> Result<PocSet, CloseError> {
        let mut p = PocSet::raw(tags, relations)?;
        p.close_in_place();
        for e in p.elems() {
            if e.is_proper() && p.lt(e, e.star()) {
                return Err(CloseError::ForcedTrivial(p.elem_name(e)));
            }
        }
        for a in p.elems() {
            for b in p.elems() {
                if a != b && p.lt(a, b) && p.lt(b, a) {
                    return Err(CloseError::ForcedEqual(p.elem_name(a), p.elem_name(b)));
                }
            }
            if p.lt(a, a) {
                return Err(CloseError::ForcedEqual(p.elem_name(a), p.elem_name(a)));
            }
        }
        Ok(p)
    }

    /// Materializes declared relations literally, adding only the `0`/`1`
    /// comparabilities and skipping closure and axiom checks. Feed the result
    /// to [`PocSet::validate`] to see which axioms the input breaks.
    pub fn raw<S: Into<String>>(
        tags: impl IntoIterator<Item = S>,
        relations: &[(&str, &str)],
    ) -> Result<PocSet, CloseError> {
        let tags: Vec<String> = tags.into_iter().map(Into::into).collect();
        check_tags(&tags)?;
        let m = 2 * tags.len() + 2;
        let mut p = PocSet {
            tags,
            lt: vec![false; m * m],
        };
        p.seed_trivial();
        for (l, r) in relations {
            let a = p
                .elem_by_name(l)
                .ok_or_else(|| CloseError::UnknownElement(l.to_string()))?;
            let b = p
                .elem_by_name(r)
                .ok_or_else(|| CloseError::UnknownElement(r.to_string()))?;
            if a == b {
                return Err(CloseError::SelfRelation(p.elem_name(a)));
            }
            if a == b.star() {
                return Err(CloseError::ComplementRelation(p.elem_name(a), p.elem_name(b)));
            }
            p.set_lt(a, b);
        }
        Ok(p)
    }

    /// `0 < x` for `x != 0` and `x < 1` for `x != 1`.
    fn seed_trivial(&mut self) {
        for e in self.elems() {
            if e != Elem::ZERO {
                self.set_lt(Elem::ZERO, e);
            }
            if e != Elem::ONE {
                self.set_lt(e, Elem::ONE);
            }
        }
    }

    /// One complementation pass over the stored pairs, then transitive
    /// closure. An involution-closed seed stays involution-closed under
    /// transitivity, so a single pass suffices.
    pub(crate) fn close_in_place(&mut self) {
        let m = self.elem_count();
        for i in 0..m {
            for j in 0..m {
                if self.lt[i * m + j] {
                    self.lt[(j ^ 1) * m + (i ^ 1)] = true;
                }
            }
        }
        close_transitive(&mut self.lt, m);
    }

    pub fn tag_count(&self) -> usize {
        self.tags.len()
    }

    pub fn elem_count(&self) -> usize {
        2 * self.tags.len() + 2
    }

    pub fn tags(&self) -> &[String] {
        &self.tags
    }

    /// All elements, `0` and `1` first.
    pub fn elems(&self) -> impl Iterator<Item = Elem> {
        (0..self.elem_count() as u32).map(Elem)
    }

    /// All proper elements.
    pub fn proper_elems(&self) -> impl Iterator<Item = Elem> {
        (2..self.elem_count() as u32).map(Elem)
    }

    /// Strict order query.
    pub fn lt(&self, a: Elem, b: Elem) -> bool {
        self.lt[a.idx() * self.elem_count() + b.idx()]
    }

    /// Non-strict order query.
    pub fn le(&self, a: Elem, b: Elem) -> bool {
        a == b || self.lt(a, b)
    }

    pub(crate) fn set_lt(&mut self, a: Elem, b: Elem) {
        let m = self.elem_count();
        self.lt[a.idx() * m + b.idx()] = true;
    }

    pub(crate) fn clear_lt(&mut self, a: Elem, b: Elem) {
        let m = self.elem_count();
        self.lt[a.idx() * m + b.idx()] = false;
    }

    /// Positive literal of the named tag, if present.
    pub fn tag_elem(&self, name: &str) -> Option<Elem> {
        self.tags.iter().position(|t| t == name).map(Elem::positive)
    }

    /// Resolves `"x"`, `"x*"`, `"0"`, or `"1"` to an element. Accepts both
    /// the ASCII `*` and the unicode `∗` complement markers.
    pub fn elem_by_name(&self, name: &str) -> Option<Elem> {
        match name {
            "0" => return Some(Elem::ZERO),
            "1" => return Some(Elem::ONE),
            _ => {}
        }
        let stripped = name
            .strip_suffix('*')
            .or_else(|| name.strip_suffix('\u{2217}'));
        match stripped {
            Some(base) => self.tag_elem(base).map(Elem::star),
            None => self.tag_elem(name),
        }
    }

    /// Renders an element as `0`, `1`, `tag`, or `tag*`.
    pub fn elem_name(&self, e: Elem) -> String {
        if e == Elem::ZERO {
            "0".to_string()
        } else if e == Elem::ONE {
            "1".to_string()
        } else if e.is_positive() {
            self.tags[e.tag()].clone()
        } else {
            format!("{}*", self.tags[e.tag()])
        }
    }

    /// Checks every axiom over all pairs and reports each failure.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for e in self.elems() {
            if e != Elem::ZERO && !self.lt(Elem::ZERO, e) {
                violations.push(Violation::NotMinimum {
                    elem: self.elem_name(e),
                });
            }
            if e != Elem::ONE && !self.lt(e, Elem::ONE) {
                violations.push(Violation::NotMaximum {
                    elem: self.elem_name(e),
                });
            }
            if self.lt(e, e) {
                violations.push(Violation::Reflexive {
                    a: self.elem_name(e),
                });
            }
            if e.is_proper() && self.lt(e, e.star()) {
                violations.push(Violation::ProperBelowStar {
                    a: self.elem_name(e),
                });
            }
        }
        for a in self.elems() {
            for b in self.elems() {
                if a == b || !self.lt(a, b) {
                    continue;
                }
                if !self.lt(b.star(), a.star()) {
                    violations.push(Violation::InvolutionNotReversing {
                        a: self.elem_name(a),
                        b: self.elem_name(b),
                    });
                }
                if self.lt(b, a) {
                    violations.push(Violation::NotAntisymmetric {
                        a: self.elem_name(a),
                        b: self.elem_name(b),
                    });
                }
                for c in self.elems() {
                    if c != a && self.lt(b, c) && !self.lt(a, c) {
                        violations.push(Violation::NotTransitive {
                            a: self.elem_name(a),
                            b: self.elem_name(b),
                            c: self.elem_name(c),
                        });
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    /// Classifies how two proper elements from distinct complement pairs
    /// relate: one of the four nestings, or transverse.
    pub fn classify_pair(&self, a: Elem, b: Elem) -> Result<PairRelation, CloseError> {
        if !a.is_proper() {
            return Err(CloseError::UnknownElement(self.elem_name(a)));
        }
        if !b.is_proper() || a == b || a == b.star() {
            return Err(CloseError::ComplementRelation(
                self.elem_name(a),
                self.elem_name(b),
            ));
        }
        let rel = if self.le(a, b) {
            PairRelation::Nested(Nesting::ALeB)
        } else if self.le(a, b.star()) {
            PairRelation::Nested(Nesting::ALeBStar)
        } else if self.le(a.star(), b) {
            PairRelation::Nested(Nesting::AStarLeB)
        } else if self.le(a.star(), b.star()) {
            PairRelation::Nested(Nesting::AStarLeBStar)
        } else {
            PairRelation::Transverse
        };
        Ok(rel)
    }

    /// True when some nesting relates `a` and `b`.
    pub fn nested(&self, a: Elem, b: Elem) -> bool {
        matches!(self.classify_pair(a, b), Ok(PairRelation::Nested(_)))
    }

    /// True when `a` is nested with every other proper element. Equivalently,
    /// the dual median graph has exactly one edge separated by `{a, a*}` and
    /// removing it disconnects the graph.
    pub fn is_cut_edge_element(&self, a: Elem) -> bool {
        assert!(a.is_proper(), "cut-edge test needs a proper element");
        self.proper_elems()
            .filter(|&b| b != a && b != a.star())
            .all(|b| self.nested(a, b))
    }

    /// `{b : b >= a}`, in element order.
    pub fn upset(&self, a: Elem) -> Vec<Elem> {
        self.elems().filter(|&b| self.le(a, b)).collect()
    }

    /// Immediate successors: `b > a` with nothing strictly between.
    pub fn covers_up(&self, a: Elem) -> Vec<Elem> {
        self.elems()
            .filter(|&b| self.lt(a, b))
            .filter(|&b| !self.elems().any(|c| self.lt(a, c) && self.lt(c, b)))
            .collect()
    }

    /// Strict pairs among proper elements, sorted.
    pub fn proper_pairs(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in self.proper_elems() {
            for b in self.proper_elems() {
                if self.lt(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Covering pairs of the order restricted to proper elements, one per
    /// mirror class: a cover and its complemented reverse state the same
    /// relation, and only the id-wise smaller of the two is listed. Closing
    /// these regenerates the full order, so they serve as the canonical
    /// serialized relation list.
    pub fn generating_pairs(&self) -> Vec<(Elem, Elem)> {
        let mut out = Vec::new();
        for a in self.proper_elems() {
            for b in self.proper_elems() {
                if self.lt(a, b)
                    && (a, b) <= (b.star(), a.star())
                    && !self
                        .proper_elems()
                        .any(|c| self.lt(a, c) && self.lt(c, b))
                {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn compass() -> PocSet {
        PocSet::close(
            ["n", "s", "w", "e"],
            &[("n", "s*"), ("s", "n*"), ("e", "w*"), ("w", "e*")],
        )
        .unwrap()
    }

    #[test]
    fn cube_validates() {
        let p = PocSet::unrelated(["a", "b", "c"]);
        assert!(p.validate().is_ok());
        assert_eq!(p.elem_count(), 8);
    }

    #[test]
    fn compass_validates_and_classifies() {
        let p = compass();
        assert!(p.validate().is_ok());
        let n = p.tag_elem("n").unwrap();
        let s = p.tag_elem("s").unwrap();
        let w = p.tag_elem("w").unwrap();
        assert_eq!(
            p.classify_pair(n, s).unwrap(),
            PairRelation::Nested(Nesting::ALeBStar)
        );
        assert_eq!(p.classify_pair(n, w).unwrap(), PairRelation::Transverse);
        assert_eq!(p.classify_pair(n, w.star()).unwrap(), PairRelation::Transverse);
    }

    #[test]
    fn closure_adds_complement_image() {
        let p = PocSet::close(["a", "b"], &[("a", "b")]).unwrap();
        let a = p.tag_elem("a").unwrap();
        let b = p.tag_elem("b").unwrap();
        assert!(p.lt(a, b));
        assert!(p.lt(b.star(), a.star()));
        assert!(p.validate().is_ok());
    }

    #[test]
    fn closure_is_transitive() {
        let p = PocSet::close(["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        let a = p.tag_elem("a").unwrap();
        let c = p.tag_elem("c").unwrap();
        assert!(p.lt(a, c));
        assert!(p.lt(c.star(), a.star()));
    }

    #[test]
    fn closed_output_is_stable() {
        let p = PocSet::close(["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        let pairs: Vec<(String, String)> = p
            .proper_pairs()
            .into_iter()
            .map(|(x, y)| (p.elem_name(x), p.elem_name(y)))
            .collect();
        let borrowed: Vec<(&str, &str)> = pairs
            .iter()
            .map(|(x, y)| (x.as_str(), y.as_str()))
            .collect();
        let q = PocSet::close(p.tags().to_vec(), &borrowed).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn generating_pairs_regenerate() {
        let p = PocSet::close(["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        let gen: Vec<(String, String)> = p
            .generating_pairs()
            .into_iter()
            .map(|(x, y)| (p.elem_name(x), p.elem_name(y)))
            .collect();
        let borrowed: Vec<(&str, &str)> = gen
            .iter()
            .map(|(x, y)| (x.as_str(), y.as_str()))
            .collect();
        assert_eq!(PocSet::close(p.tags().to_vec(), &borrowed).unwrap(), p);
    }

    #[test]
    fn forced_trivial_rejected() {
        // a <= b and a* <= b squeeze b* between b* <= a <= b, so b* <= b.
        let err = PocSet::close(["a", "b"], &[("a", "b"), ("a*", "b")]).unwrap_err();
        assert!(matches!(err, CloseError::ForcedTrivial(_)));
    }

    #[test]
    fn forced_equal_rejected() {
        let err = PocSet::close(["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        assert!(matches!(err, CloseError::ForcedEqual(_, _)));
    }

    #[test]
    fn direct_self_complement_rejected() {
        let err = PocSet::close(["a"], &[("a", "a*")]).unwrap_err();
        assert!(matches!(err, CloseError::ComplementRelation(_, _)));
    }

    #[test]
    fn raw_violations_are_named() {
        // A raw order with a <= a* materialized; validate must call it out.
        let mut p = PocSet::raw(["a", "b"], &[]).unwrap();
        let a = p.tag_elem("a").unwrap();
        p.set_lt(a, a.star());
        let report = p.validate();
        assert!(!report.is_ok());
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::ProperBelowStar { a } if a == "a")));
        // An asymmetric pair without its mirror breaks complementation.
        let b = p.tag_elem("b").unwrap();
        p.set_lt(a, b);
        assert!(p
            .validate()
            .violations
            .iter()
            .any(|v| matches!(v, Violation::InvolutionNotReversing { .. })));
    }

    #[test]
    fn raw_transitivity_gap_detected() {
        let p = PocSet::raw(["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        let report = p.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NotTransitive { .. })));
    }

    #[test]
    fn classify_rejects_trivial_and_same_pair() {
        let p = compass();
        let n = p.tag_elem("n").unwrap();
        assert!(p.classify_pair(Elem::ZERO, n).is_err());
        assert!(p.classify_pair(n, n).is_err());
        assert!(p.classify_pair(n, n.star()).is_err());
    }

    #[test]
    fn nesting_is_exclusive_on_valid_pocsets() {
        // On every closed poc-set at most one of the four relations holds;
        // classify_pair picks it by first match, so cross-check directly.
        let p = compass();
        for a in p.proper_elems() {
            for b in p.proper_elems() {
                if a == b || a == b.star() {
                    continue;
                }
                let held = [
                    p.le(a, b),
                    p.le(a, b.star()),
                    p.le(a.star(), b),
                    p.le(a.star(), b.star()),
                ];
                assert!(held.iter().filter(|&&h| h).count() <= 1);
            }
        }
    }

    #[test]
    fn upset_and_covers() {
        let p = PocSet::close(["a", "b", "c"], &[("a", "b"), ("b", "c")]).unwrap();
        let a = p.tag_elem("a").unwrap();
        let b = p.tag_elem("b").unwrap();
        let c = p.tag_elem("c").unwrap();
        assert_eq!(p.upset(a), vec![Elem::ONE, a, b, c]);
        assert_eq!(p.covers_up(a), vec![b]);
        assert_eq!(p.covers_up(c), vec![Elem::ONE]);
    }

    #[test]
    fn cut_edge_elements() {
        // In a chain every element is nested with every other.
        let chain = PocSet::close(["a", "b"], &[("a", "b")]).unwrap();
        for e in chain.proper_elems() {
            assert!(chain.is_cut_edge_element(e));
        }
        // In the compass, n is transverse to w.
        let p = compass();
        assert!(!p.is_cut_edge_element(p.tag_elem("n").unwrap()));
    }

    #[test]
    fn bad_tags_rejected() {
        assert!(matches!(
            PocSet::close(["a*"], &[]),
            Err(CloseError::BadTag(_))
        ));
        assert!(matches!(
            PocSet::close(["0"], &[]),
            Err(CloseError::BadTag(_))
        ));
        assert!(matches!(
            PocSet::close(["a", "a"], &[]),
            Err(CloseError::DuplicateTag(_))
        ));
    }

    #[test]
    fn unicode_complement_marker_accepted() {
        let p = compass();
        assert_eq!(
            p.elem_by_name("s\u{2217}"),
            Some(p.tag_elem("s").unwrap().star())
        );
    }
}
