//! The dual median graph of a poc-set: vertices are the coherent selections
//! picking one element from each complement pair, and edges join selections
//! that differ in a single pair. Distance, medians, intervals, hulls, and
//! halfspaces all reduce to bit arithmetic on the selection masks.

use std::fmt::Write as _;

use thiserror::Error;

use crate::morphism::PocMorphism;
use crate::pocset::{Elem, PocSet};

/// Default ceiling on tag count for vertex enumeration.
pub const DEFAULT_MAX_TAGS: usize = 20;

/// Masks are single machine words, so enumeration never exceeds this.
pub const HARD_MAX_TAGS: usize = 63;

/// Index into [`MedianGraph`] vertices, in canonical mask order.
pub type VertexId = usize;

/// A selection encoded one bit per tag: bit `i` set means tag `i` is taken
/// positively, clear means its complement is taken. `1` is always taken.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Selection(pub u64);

impl Selection {
    /// Whether the selection contains `e`. `1` is in every selection, `0` in
    /// none.
    pub fn contains(self, e: Elem) -> bool {
        if e == Elem::ONE {
            true
        } else if e == Elem::ZERO {
            false
        } else if e.is_positive() {
            self.0 >> e.tag() & 1 == 1
        } else {
            self.0 >> e.tag() & 1 == 0
        }
    }

    /// The proper elements of the selection, in tag order.
    pub fn elems(self, tag_count: usize) -> Vec<Elem> {
        (0..tag_count)
            .map(|i| {
                if self.0 >> i & 1 == 1 {
                    Elem::positive(i)
                } else {
                    Elem::negative(i)
                }
            })
            .collect()
    }

    /// Builds the selection taking exactly the given elements positively.
    pub fn from_positive_tags(tags: impl IntoIterator<Item = usize>) -> Selection {
        let mut mask = 0u64;
        for t in tags {
            mask |= 1 << t;
        }
        Selection(mask)
    }
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum MedianError {
    #[error("poc-set has {got} tags, above the enumeration limit of {limit}")]
    TooManyTags { got: usize, limit: usize },
    #[error("vertex index {0} out of range")]
    VertexRange(usize),
    #[error("convex hull of an empty vertex set is undefined")]
    EmptyHull,
    #[error("corner needs two proper elements from distinct complement pairs")]
    BadCorner,
    #[error("graph was built from a different poc-set than the given map")]
    PocSetMismatch,
}

/// A corner: the intersection of two halfspaces, as a vertex set.
#[derive(Clone, PartialEq, Debug)]
pub struct Corner {
    pub a: Elem,
    pub b: Elem,
    pub vertices: Vec<VertexId>,
}

impl Corner {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edges of the subgraph induced on the corner.
    pub fn induced_edges(&self, g: &MedianGraph) -> Vec<(VertexId, VertexId)> {
        g.edges()
            .iter()
            .copied()
            .filter(|&(u, v)| self.vertices.contains(&u) && self.vertices.contains(&v))
            .collect()
    }
}

/// The dual median graph of a poc-set.
#[derive(Clone, PartialEq, Debug)]
pub struct MedianGraph {
    pocset: PocSet,
    /// Selection masks in ascending order; the index is the vertex id.
    masks: Vec<u64>,
    /// Edges `(u, v)` with `u < v`, sorted.
    edges: Vec<(VertexId, VertexId)>,
    adj: Vec<Vec<VertexId>>,
}

impl MedianGraph {
    /// Enumerates all coherent selections under the default size guard.
    pub fn build(p: &PocSet) -> Result<MedianGraph, MedianError> {
        MedianGraph::build_with_limit(p, DEFAULT_MAX_TAGS)
    }

    /// Enumerates all coherent selections, refusing poc-sets with more than
    /// `max_tags` tags. Backtracks tag by tag, pruning any partial selection
    /// containing `x` and `y` with `x <= y*`.
    pub fn build_with_limit(p: &PocSet, max_tags: usize) -> Result<MedianGraph, MedianError> {
        let limit = max_tags.min(HARD_MAX_TAGS);
        let n = p.tag_count();
        if n > limit {
            return Err(MedianError::TooManyTags { got: n, limit });
        }
        let mut masks = Vec::new();
        let mut chosen: Vec<Elem> = Vec::with_capacity(n);
        fn recurse(p: &PocSet, n: usize, i: usize, mask: u64, chosen: &mut Vec<Elem>, out: &mut Vec<u64>) {
            if i == n {
                out.push(mask);
                return;
            }
            for e in [Elem::negative(i), Elem::positive(i)] {
                let coherent = chosen
                    .iter()
                    .all(|&c| !p.lt(c, e.star()) && !p.lt(e, c.star()));
                if coherent {
                    chosen.push(e);
                    let bit = if e.is_positive() { 1u64 << i } else { 0 };
                    recurse(p, n, i + 1, mask | bit, chosen, out);
                    chosen.pop();
                }
            }
        }
        recurse(p, n, 0, 0, &mut chosen, &mut masks);
        masks.sort_unstable();

        let mut edges = Vec::new();
        let mut adj = vec![Vec::new(); masks.len()];
        for (u, &mask) in masks.iter().enumerate() {
            for i in 0..n {
                let flipped = mask ^ (1u64 << i);
                if flipped > mask {
                    if let Ok(v) = masks.binary_search(&flipped) {
                        edges.push((u, v));
                        adj[u].push(v);
                        adj[v].push(u);
                    }
                }
            }
        }
        edges.sort_unstable();
        for nb in &mut adj {
            nb.sort_unstable();
        }
        Ok(MedianGraph {
            pocset: p.clone(),
            masks,
            edges,
            adj,
        })
    }

    pub fn pocset(&self) -> &PocSet {
        &self.pocset
    }

    pub fn vertex_count(&self) -> usize {
        self.masks.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId)] {
        &self.edges
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    pub fn selection(&self, v: VertexId) -> Selection {
        Selection(self.masks[v])
    }

    /// All vertices as selections, in canonical order.
    pub fn selections(&self) -> impl Iterator<Item = Selection> + '_ {
        self.masks.iter().map(|&m| Selection(m))
    }

    /// Looks up the vertex with the given selection.
    pub fn vertex_of(&self, s: Selection) -> Option<VertexId> {
        self.masks.binary_search(&s.0).ok()
    }

    /// Number of complement pairs the two selections disagree on; equals
    /// shortest-path distance in the graph.
    pub fn distance(&self, u: VertexId, v: VertexId) -> usize {
        (self.masks[u] ^ self.masks[v]).count_ones() as usize
    }

    /// The majority selection, a vertex by the median property.
    pub fn median(&self, u: VertexId, v: VertexId, w: VertexId) -> VertexId {
        let (a, b, c) = (self.masks[u], self.masks[v], self.masks[w]);
        let m = (a & b) | (b & c) | (a & c);
        self.vertex_of(Selection(m))
            .expect("majority of coherent selections is coherent")
    }

    /// The interval between `u` and `v`: every vertex whose selection extends
    /// `u ∩ v`, i.e. agrees with both wherever they agree.
    pub fn interval(&self, u: VertexId, v: VertexId) -> Vec<VertexId> {
        let agree = !(self.masks[u] ^ self.masks[v]);
        (0..self.vertex_count())
            .filter(|&w| (self.masks[w] ^ self.masks[u]) & agree == 0)
            .collect()
    }

    /// Vertices on the `e` side: selections containing `e`.
    pub fn halfspace(&self, e: Elem) -> Vec<VertexId> {
        (0..self.vertex_count())
            .filter(|&v| self.selection(v).contains(e))
            .collect()
    }

    /// Intersection of every halfspace containing all of `w`.
    pub fn convex_hull(&self, w: &[VertexId]) -> Result<Vec<VertexId>, MedianError> {
        if w.is_empty() {
            return Err(MedianError::EmptyHull);
        }
        if let Some(&v) = w.iter().find(|&&v| v >= self.vertex_count()) {
            return Err(MedianError::VertexRange(v));
        }
        let mut inside = vec![true; self.vertex_count()];
        for e in self.pocset.proper_elems() {
            if w.iter().all(|&v| self.selection(v).contains(e)) {
                for v in 0..self.vertex_count() {
                    if !self.selection(v).contains(e) {
                        inside[v] = false;
                    }
                }
            }
        }
        Ok((0..self.vertex_count()).filter(|&v| inside[v]).collect())
    }

    /// The corner `V(a) ∩ V(b)`. Empty exactly when `a <= b*`.
    pub fn corner(&self, a: Elem, b: Elem) -> Result<Corner, MedianError> {
        if !a.is_proper() || !b.is_proper() || a == b || a == b.star() {
            return Err(MedianError::BadCorner);
        }
        let vertices = (0..self.vertex_count())
            .filter(|&v| {
                let s = self.selection(v);
                s.contains(a) && s.contains(b)
            })
            .collect();
        Ok(Corner { a, b, vertices })
    }

    /// Graphviz rendering with vertices labeled by their positive tags.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph median {\n");
        for (v, s) in self.selections().enumerate() {
            let label: Vec<String> = s
                .elems(self.pocset.tag_count())
                .into_iter()
                .filter(|e| e.is_positive())
                .map(|e| self.pocset.elem_name(e))
                .collect();
            let _ = writeln!(out, "  {} [label=\"{{{}}}\"];", v, label.join(","));
        }
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "  {} -- {};", u, v);
        }
        out.push_str("}\n");
        out
    }
}

/// The vertex map dual to a morphism `f`: each vertex of the graph over
/// `f`'s target pulls back to a vertex of the graph over `f`'s source, by
/// taking every source element whose image lies in the selection.
///
/// Returns the image vertex in `source_graph` for each vertex of
/// `target_graph`, indexed by vertex id.
pub fn dual_vertex_map(
    f: &PocMorphism,
    target_graph: &MedianGraph,
    source_graph: &MedianGraph,
) -> Result<Vec<VertexId>, MedianError> {
    if target_graph.pocset != *f.target() || source_graph.pocset != *f.source() {
        return Err(MedianError::PocSetMismatch);
    }
    let n = f.source().tag_count();
    let mut out = Vec::with_capacity(target_graph.vertex_count());
    for s in target_graph.selections() {
        let pulled = Selection::from_positive_tags(
            (0..n).filter(|&i| s.contains(f.apply(Elem::positive(i)))),
        );
        let v = source_graph
            .vertex_of(pulled)
            .expect("preimage of a coherent selection is coherent");
        out.push(v);
    }
    Ok(out)
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
    fn cube_skeleton() {
        let p = PocSet::unrelated(["a", "b", "c"]);
        let g = MedianGraph::build(&p).unwrap();
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.edges().len(), 12);
        for v in 0..g.vertex_count() {
            assert_eq!(g.neighbors(v).len(), 3);
        }
    }

    #[test]
    fn two_tags_no_relations_is_a_square() {
        let g = MedianGraph::build(&PocSet::unrelated(["a", "b"])).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edges().len(), 4);
    }

    #[test]
    fn single_relation_gives_three_vertex_path() {
        let p = PocSet::close(["a", "b"], &[("a", "b")]).unwrap();
        let g = MedianGraph::build(&p).unwrap();
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edges().len(), 2);
        // The dropped selection is {a, b*}.
        let a = p.tag_elem("a").unwrap();
        let b = p.tag_elem("b").unwrap();
        let dead = Selection::from_positive_tags([a.tag()]);
        assert!(!dead.contains(b));
        assert!(g.vertex_of(dead).is_none());
    }

    #[test]
    fn star_tree_from_pairwise_relations() {
        // a_i* < a_j for i < j leaves the all-positive selection plus one
        // selection per flipped tag: a tree with n leaves.
        let p = PocSet::close(
            ["a1", "a2", "a3"],
            &[("a1*", "a2"), ("a1*", "a3"), ("a2*", "a3")],
        )
        .unwrap();
        let g = MedianGraph::build(&p).unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.edges().len(), 3);
        let center = g.vertex_of(Selection(0b111)).unwrap();
        assert_eq!(g.neighbors(center).len(), 3);
    }

    #[test]
    fn compass_grid() {
        let g = MedianGraph::build(&compass()).unwrap();
        assert_eq!(g.vertex_count(), 9);
        assert_eq!(g.edges().len(), 12);
    }

    #[test]
    fn empty_alphabet() {
        let g = MedianGraph::build(&PocSet::unrelated(Vec::<String>::new())).unwrap();
        assert_eq!(g.vertex_count(), 1);
        assert!(g.edges().is_empty());
    }

    #[test]
    fn size_guard() {
        let tags: Vec<String> = (0..25).map(|i| format!("t{i}")).collect();
        let names: Vec<&str> = tags.iter().map(String::as_str).collect();
        let chain: Vec<(&str, &str)> = names.windows(2).map(|w| (w[0], w[1])).collect();
        let p = PocSet::close(names.clone(), &chain).unwrap();
        assert!(matches!(
            MedianGraph::build(&p),
            Err(MedianError::TooManyTags { got: 25, limit: 20 })
        ));
        // A 25 element chain dualizes to a path, so a raised limit is cheap.
        let g = MedianGraph::build_with_limit(&p, 25).unwrap();
        assert_eq!(g.vertex_count(), 26);
    }

    #[test]
    fn median_of_cube_corners() {
        let g = MedianGraph::build(&PocSet::unrelated(["a", "b", "c"])).unwrap();
        let u = g.vertex_of(Selection(0b000)).unwrap();
        let v = g.vertex_of(Selection(0b011)).unwrap();
        let w = g.vertex_of(Selection(0b101)).unwrap();
        let m = g.median(u, v, w);
        assert_eq!(g.selection(m), Selection(0b001));
    }

    #[test]
    fn interval_spans_the_square() {
        let g = MedianGraph::build(&PocSet::unrelated(["a", "b"])).unwrap();
        let u = g.vertex_of(Selection(0b00)).unwrap();
        let v = g.vertex_of(Selection(0b11)).unwrap();
        assert_eq!(g.interval(u, v).len(), 4);
        let w = g.vertex_of(Selection(0b01)).unwrap();
        assert_eq!(g.interval(u, w), vec![u, w]);
    }

    #[test]
    fn hull_of_antipodal_corners_is_everything() {
        let g = MedianGraph::build(&PocSet::unrelated(["a", "b"])).unwrap();
        let u = g.vertex_of(Selection(0b00)).unwrap();
        let v = g.vertex_of(Selection(0b11)).unwrap();
        assert_eq!(g.convex_hull(&[u, v]).unwrap().len(), 4);
        assert_eq!(g.convex_hull(&[u]).unwrap(), vec![u]);
        assert!(matches!(g.convex_hull(&[]), Err(MedianError::EmptyHull)));
    }

    #[test]
    fn halfspaces_complement() {
        let p = compass();
        let g = MedianGraph::build(&p).unwrap();
        let n = p.tag_elem("n").unwrap();
        let side: Vec<_> = g.halfspace(n);
        let other: Vec<_> = g.halfspace(n.star());
        assert_eq!(side.len() + other.len(), g.vertex_count());
        assert!(side.iter().all(|v| !other.contains(v)));
        assert!(g.halfspace(Elem::ZERO).is_empty());
        assert_eq!(g.halfspace(Elem::ONE).len(), g.vertex_count());
    }

    #[test]
    fn corner_empty_iff_relation() {
        let p = compass();
        let g = MedianGraph::build(&p).unwrap();
        let n = p.tag_elem("n").unwrap();
        let s = p.tag_elem("s").unwrap();
        let w = p.tag_elem("w").unwrap();
        assert!(g.corner(n, s).unwrap().is_empty());
        let nw = g.corner(n, w).unwrap();
        assert_eq!(nw.vertices.len(), 1);
        assert!(g.corner(n, n).is_err());
        assert!(g.corner(n, n.star()).is_err());
    }

    #[test]
    fn dual_map_of_path_into_square() {
        // Adding a < b quotients nothing and includes the 3-path into the
        // square; the dual map lands injectively on the non-corner vertices.
        let square = PocSet::unrelated(["a", "b"]);
        let path = PocSet::close(["a", "b"], &[("a", "b")]).unwrap();
        let f = PocMorphism::inclusion(&square, &path).unwrap();
        let gq = MedianGraph::build(&path).unwrap();
        let gp = MedianGraph::build(&square).unwrap();
        let map = dual_vertex_map(&f, &gq, &gp).unwrap();
        assert_eq!(map.len(), 3);
        let mut sorted = map.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), 3, "dual of a surjection is injective");
        // Images carry the same selections.
        for (v, &img) in map.iter().enumerate() {
            assert_eq!(gq.selection(v), gp.selection(img));
        }
    }

    #[test]
    fn dot_output_shape() {
        let g = MedianGraph::build(&PocSet::unrelated(["a"])).unwrap();
        let dot = g.to_dot();
        assert!(dot.starts_with("graph median {"));
        assert!(dot.contains("label=\"{a}\""));
        assert!(dot.contains("0 -- 1;"));
    }
}
