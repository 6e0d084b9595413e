//! Observers meet the world: a finite atomized state space with a weight
//! distribution, and one subset of atoms per tag saying where that sensor
//! answers positively. Sensors induce an answer profile per atom, a visible
//! graph of distinguishable states, and an objective excitation over the
//! dual median graph.

use thiserror::Error;

use crate::median::{MedianGraph, Selection, VertexId};
use crate::pocset::{Elem, PocSet};

/// Tolerance for the total weight of a world summing to one.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// A set of atoms, packed 64 per block.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AtomSet {
    blocks: Vec<u64>,
    len: usize,
}

impl AtomSet {
    pub fn empty(len: usize) -> AtomSet {
        AtomSet {
            blocks: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> AtomSet {
        let mut s = AtomSet::empty(len);
        for b in &mut s.blocks {
            *b = !0;
        }
        s.clear_tail();
        s
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> AtomSet {
        let mut s = AtomSet::empty(len);
        for i in indices {
            s.insert(i);
        }
        s
    }

    fn clear_tail(&mut self) {
        let tail = self.len % 64;
        if tail != 0 {
            if let Some(last) = self.blocks.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.len, "atom index out of range");
        self.blocks[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.blocks[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn universe_len(&self) -> usize {
        self.len
    }

    pub fn count(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn intersect_with(&mut self, other: &AtomSet) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= b;
        }
    }

    pub fn complement(&self) -> AtomSet {
        let mut s = AtomSet {
            blocks: self.blocks.iter().map(|b| !b).collect(),
            len: self.len,
        };
        s.clear_tail();
        s
    }

    pub fn is_subset_of(&self, other: &AtomSet) -> bool {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.contains(i))
    }
}

#[derive(Error, Debug, Clone, PartialEq)]
pub enum RealizationError {
    #[error("world weights must be non-negative and finite")]
    BadWeight,
    #[error("world weights sum to {0}, not 1 within tolerance")]
    BadTotal(f64),
    #[error("expected {want} sensor sets, got {got}")]
    SensorCount { got: usize, want: usize },
    #[error("sensor universe size {got} does not match the world's {want} atoms")]
    SensorUniverse { got: usize, want: usize },
    #[error("sensors do not preserve order: {a} <= {b} but the {a} set is not inside the {b} set")]
    OrderViolated { a: String, b: String },
    #[error("graph was built from a different poc-set than this realization")]
    PocSetMismatch,
    #[error("no sensor for tag {0:?}")]
    UnknownTag(String),
}

/// A finite atomized state space with a probability weight per atom.
#[derive(Clone, PartialEq, Debug)]
pub struct World {
    mu: Vec<f64>,
}

impl World {
    pub fn new(mu: Vec<f64>) -> Result<World, RealizationError> {
        if mu.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(RealizationError::BadWeight);
        }
        let total: f64 = mu.iter().sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(RealizationError::BadTotal(total));
        }
        Ok(World { mu })
    }

    pub fn uniform(atoms: usize) -> World {
        assert!(atoms > 0, "a world needs at least one atom");
        World {
            mu: vec![1.0 / atoms as f64; atoms],
        }
    }

    pub fn atom_count(&self) -> usize {
        self.mu.len()
    }

    pub fn weight(&self, atom: usize) -> f64 {
        self.mu[atom]
    }

    pub fn weights(&self) -> &[f64] {
        &self.mu
    }

    pub fn mass(&self, atoms: &AtomSet) -> f64 {
        atoms.iter().map(|i| self.mu[i]).sum()
    }
}

/// Sensors tying a poc-set to a world: one atom set per tag, complements on
/// demand, checked to send the poc-set order to set inclusion.
#[derive(Clone, PartialEq, Debug)]
pub struct Realization {
    pocset: PocSet,
    world: World,
    sensors: Vec<AtomSet>,
}

impl Realization {
    pub fn new(
        pocset: PocSet,
        world: World,
        sensors: Vec<AtomSet>,
    ) -> Result<Realization, RealizationError> {
        let r = Realization::new_unchecked(pocset, world, sensors)?;
        for a in r.pocset.elems() {
            for b in r.pocset.elems() {
                if r.pocset.lt(a, b) && !r.sensor_set(a).is_subset_of(&r.sensor_set(b)) {
                    return Err(RealizationError::OrderViolated {
                        a: r.pocset.elem_name(a),
                        b: r.pocset.elem_name(b),
                    });
                }
            }
        }
        Ok(r)
    }

    /// Skips the order-preservation check. Restructuring can leave an
    /// observer whose adopted relations outrun the world; the result still
    /// answers profile and weight queries.
    pub(crate) fn new_unchecked(
        pocset: PocSet,
        world: World,
        sensors: Vec<AtomSet>,
    ) -> Result<Realization, RealizationError> {
        if sensors.len() != pocset.tag_count() {
            return Err(RealizationError::SensorCount {
                got: sensors.len(),
                want: pocset.tag_count(),
            });
        }
        if let Some(s) = sensors
            .iter()
            .find(|s| s.universe_len() != world.atom_count())
        {
            return Err(RealizationError::SensorUniverse {
                got: s.universe_len(),
                want: world.atom_count(),
            });
        }
        Ok(Realization {
            pocset,
            world,
            sensors,
        })
    }

    /// Carries the world over to a poc-set whose tags are a subset of this
    /// one's, reusing each surviving tag's sensor. Adopted relations are not
    /// re-checked against the world: a restructured order can claim more
    /// than the sensors deliver, and the realization still has to answer.
    pub fn restrict_to(&self, p: &PocSet) -> Result<Realization, RealizationError> {
        let sensors: Vec<AtomSet> = p
            .tags()
            .iter()
            .map(|name| {
                self.pocset
                    .tag_elem(name)
                    .map(|e| self.sensor_set(e))
                    .ok_or_else(|| RealizationError::UnknownTag(name.clone()))
            })
            .collect::<Result<_, _>>()?;
        Realization::new_unchecked(p.clone(), self.world.clone(), sensors)
    }

    pub fn pocset(&self) -> &PocSet {
        &self.pocset
    }

    pub fn world(&self) -> &World {
        &self.world
    }

    pub fn sensors(&self) -> &[AtomSet] {
        &self.sensors
    }

    /// The atom set answering `e` positively: stored for positive tags,
    /// complemented on demand, empty for `0` and everything for `1`.
    pub fn sensor_set(&self, e: Elem) -> AtomSet {
        let n = self.world.atom_count();
        if e == Elem::ZERO {
            AtomSet::empty(n)
        } else if e == Elem::ONE {
            AtomSet::full(n)
        } else if e.is_positive() {
            self.sensors[e.tag()].clone()
        } else {
            self.sensors[e.tag()].complement()
        }
    }

    /// The answer profile of an atom: every sensor's verdict, as a selection.
    /// Order preservation makes every profile a coherent selection.
    pub fn profile(&self, atom: usize) -> Selection {
        Selection::from_positive_tags(
            (0..self.pocset.tag_count()).filter(|&i| self.sensors[i].contains(atom)),
        )
    }

    /// Intersection of the sensor sets of the given elements.
    pub fn intersection(&self, elems: impl IntoIterator<Item = Elem>) -> AtomSet {
        let mut acc = AtomSet::full(self.world.atom_count());
        for e in elems {
            acc.intersect_with(&self.sensor_set(e));
        }
        acc
    }

    /// Whether some atom answers every element of `u` positively.
    pub fn is_consistent(&self, u: impl IntoIterator<Item = Elem>) -> bool {
        !self.intersection(u).is_empty()
    }

    /// Like [`Realization::is_consistent`], but ignores atoms of weight zero.
    pub fn is_consistent_positive(&self, u: impl IntoIterator<Item = Elem>) -> bool {
        self.mass(u) > 0.0
    }

    /// Total weight of the atoms answering every element of `u` positively.
    pub fn mass(&self, u: impl IntoIterator<Item = Elem>) -> f64 {
        self.world.mass(&self.intersection(u))
    }

    /// The weight each vertex objectively carries: the mass of the atoms
    /// whose profile is exactly that selection. Sums to one; inconsistent
    /// vertices get zero.
    pub fn objective_excitation(&self, g: &MedianGraph) -> Result<Vec<f64>, RealizationError> {
        if g.pocset() != &self.pocset {
            return Err(RealizationError::PocSetMismatch);
        }
        let mut p = vec![0.0; g.vertex_count()];
        for atom in 0..self.world.atom_count() {
            let v = g
                .vertex_of(self.profile(atom))
                .expect("profiles are coherent selections");
            p[v] += self.world.weight(atom);
        }
        Ok(p)
    }

    /// The graph of sensor-distinguishable states and its embedding into the
    /// dual median graph. Duplicate or complementary sensor sets count as a
    /// single separating wall, so edges join states that exactly one wall
    /// tells apart.
    pub fn visible_graph(&self, g: &MedianGraph) -> Result<VisibleGraph, RealizationError> {
        if g.pocset() != &self.pocset {
            return Err(RealizationError::PocSetMismatch);
        }
        let n_atoms = self.world.atom_count();
        let mut selections: Vec<Selection> = (0..n_atoms).map(|a| self.profile(a)).collect();
        selections.sort_unstable();
        selections.dedup();

        let mut class_of_atom = vec![0usize; n_atoms];
        let mut atoms = vec![Vec::new(); selections.len()];
        for atom in 0..n_atoms {
            let c = selections.binary_search(&self.profile(atom)).unwrap();
            class_of_atom[atom] = c;
            atoms[c].push(atom);
        }

        // One representative tag per wall, deduplicating sensors that carry
        // the same or the complementary atom set. Trivial sensors never
        // separate anything.
        let mut wall_reps: Vec<usize> = Vec::new();
        let mut wall_keys: Vec<AtomSet> = Vec::new();
        for i in 0..self.pocset.tag_count() {
            let s = &self.sensors[i];
            if s.is_empty() || s.complement().is_empty() {
                continue;
            }
            let c = s.complement();
            let key = if s.blocks_le(&c) { s.clone() } else { c };
            if !wall_keys.contains(&key) {
                wall_keys.push(key);
                wall_reps.push(i);
            }
        }

        let mut edges = Vec::new();
        for u in 0..selections.len() {
            for v in u + 1..selections.len() {
                let diff = selections[u].0 ^ selections[v].0;
                let separating = wall_reps.iter().filter(|&&i| diff >> i & 1 == 1).count();
                if separating == 1 {
                    edges.push((u, v));
                }
            }
        }

        let embedding = selections
            .iter()
            .map(|&s| g.vertex_of(s).expect("profiles are coherent selections"))
            .collect();

        Ok(VisibleGraph {
            selections,
            atoms,
            class_of_atom,
            edges,
            embedding,
            wall_count: wall_reps.len(),
        })
    }
}

impl AtomSet {
    /// Lexicographic block comparison, used to pick a canonical side of a
    /// wall.
    fn blocks_le(&self, other: &AtomSet) -> bool {
        self.blocks <= other.blocks
    }
}

/// Distinguishable states of a realized world, with their embedding into the
/// dual median graph.
#[derive(Clone, Debug)]
pub struct VisibleGraph {
    /// One selection per state, ascending.
    pub selections: Vec<Selection>,
    /// The atoms of each state.
    pub atoms: Vec<Vec<usize>>,
    /// State index per atom.
    pub class_of_atom: Vec<usize>,
    /// State pairs separated by exactly one wall.
    pub edges: Vec<(usize, usize)>,
    /// Vertex of the dual graph carrying each state; injective.
    pub embedding: Vec<VertexId>,
    /// Number of distinct separating walls among the sensors.
    pub wall_count: usize,
}

impl VisibleGraph {
    pub fn state_count(&self) -> usize {
        self.selections.len()
    }

    pub fn degree(&self, state: usize) -> usize {
        self.edges
            .iter()
            .filter(|&&(u, v)| u == state || v == state)
            .count()
    }
}
