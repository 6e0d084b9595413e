//! JSON file formats: poc-sets as alphabet plus generating relations,
//! worlds as weights plus sensor atom lists, observers as a conjectured
//! state plus sparse vertex weights with file references to their
//! structure, retractions, and graph exports. Element names use the ASCII
//! `*` complement suffix on output and accept `∗` on input.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::deformation::{DeformError, Retraction};
use crate::median::{MedianError, MedianGraph, Selection};
use crate::morphism::PocMorphism;
use crate::observer::{MisperceptionKind, MisperceptionReport, Observer, UpdateReport};
use crate::pocset::{CloseError, Elem, PocSet};
use crate::realization::{AtomSet, Realization, RealizationError, World};

#[derive(Error, Debug)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        source: serde_json::Error,
    },
    #[error(transparent)]
    Close(#[from] CloseError),
    #[error(transparent)]
    Realization(#[from] RealizationError),
    #[error(transparent)]
    Retraction(#[from] DeformError),
    #[error(transparent)]
    Graph(#[from] MedianError),
    #[error("unknown element {0:?}")]
    UnknownElement(String),
    #[error("observer state rejected: {0}")]
    BadObserver(String),
    #[error("vertex index {0} out of range")]
    VertexRange(usize),
    #[error("observer file references no realization but one is required")]
    NoRealizationRef,
    #[error("retraction file maps unknown or mismatched elements: {0}")]
    BadRetractionMap(String),
}

pub(crate) fn read(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn write(path: &Path, text: &str) -> Result<(), FormatError> {
    fs::write(path, text).map_err(|source| FormatError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn parse<T: serde::de::DeserializeOwned>(
    path: &Path,
    text: &str,
) -> Result<T, FormatError> {
    serde_json::from_str(text).map_err(|source| FormatError::Json {
        path: path.to_path_buf(),
        source,
    })
}

pub fn resolve_elem(p: &PocSet, name: &str) -> Result<Elem, FormatError> {
    p.elem_by_name(name)
        .ok_or_else(|| FormatError::UnknownElement(name.to_string()))
}

/// A poc-set as its alphabet and the covering relations that generate it.
#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
pub struct PocSetFile {
    pub alphabet: Vec<String>,
    #[serde(default)]
    pub relations: Vec<(String, String)>,
}

impl PocSetFile {
    pub fn of(p: &PocSet) -> PocSetFile {
        PocSetFile {
            alphabet: p.tags().to_vec(),
            relations: p
                .generating_pairs()
                .iter()
                .map(|&(a, b)| (p.elem_name(a), p.elem_name(b)))
                .collect(),
        }
    }

    pub fn build(&self) -> Result<PocSet, FormatError> {
        let relations: Vec<(&str, &str)> = self
            .relations
            .iter()
            .map(|(a, b)| (a.as_str(), b.as_str()))
            .collect();
        let names: Vec<&str> = self.alphabet.iter().map(String::as_str).collect();
        Ok(PocSet::close(names, &relations)?)
    }
}

pub fn load_pocset(path: &Path) -> Result<PocSet, FormatError> {
    let file: PocSetFile = parse(path, &read(path)?)?;
    file.build()
}

pub fn save_pocset(path: &Path, p: &PocSet) -> Result<(), FormatError> {
    write(path, &to_pretty(&PocSetFile::of(p)))
}

/// A realized world: atom weights and one atom list per tag's sensor.
#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
pub struct WorldFile {
    pub atoms: usize,
    pub mu: Vec<f64>,
    pub sensors: BTreeMap<String, Vec<usize>>,
}

impl WorldFile {
    pub fn of(r: &Realization) -> WorldFile {
        let p = r.pocset();
        WorldFile {
            atoms: r.world().atom_count(),
            mu: r.world().weights().to_vec(),
            sensors: p
                .tags()
                .iter()
                .enumerate()
                .map(|(i, name)| {
                    let set = r.sensor_set(Elem::positive(i));
                    (name.clone(), set.iter().collect())
                })
                .collect(),
        }
    }

    /// Builds the realization for `p`, checking sensors against the order.
    pub fn build(&self, p: &PocSet) -> Result<Realization, FormatError> {
        let world = World::new(self.mu.clone())?;
        let sensors = p
            .tags()
            .iter()
            .map(|name| {
                let atoms = self
                    .sensors
                    .get(name)
                    .ok_or(RealizationError::UnknownTag(name.clone()))?;
                if let Some(&bad) = atoms.iter().find(|&&a| a >= self.atoms) {
                    return Err(RealizationError::SensorUniverse {
                        got: bad + 1,
                        want: self.atoms,
                    });
                }
                Ok(AtomSet::from_indices(self.atoms, atoms.iter().copied()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Realization::new(p.clone(), world, sensors)?)
    }
}

pub fn load_realization(path: &Path, p: &PocSet) -> Result<Realization, FormatError> {
    let file: WorldFile = parse(path, &read(path)?)?;
    file.build(p)
}

pub fn save_realization(path: &Path, r: &Realization) -> Result<(), FormatError> {
    write(path, &to_pretty(&WorldFile::of(r)))
}

/// An observer as file references plus its own state: conjectured element
/// names and sparse vertex weights (missing vertices are zero).
#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
pub struct ObserverFile {
    pub pocset: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub realization: Option<String>,
    #[serde(default)]
    pub epsilon: Vec<String>,
    pub p: BTreeMap<usize, f64>,
}

/// Loads an observer file, resolving its references relative to its own
/// directory. The graph is built under the given tag limit.
pub fn load_observer(path: &Path, max_tags: usize) -> Result<Observer, FormatError> {
    let file: ObserverFile = parse(path, &read(path)?)?;
    let dir = path.parent().unwrap_or(Path::new("."));
    let p = load_pocset(&dir.join(&file.pocset))?;
    let graph = MedianGraph::build_with_limit(&p, max_tags)?;
    let epsilon = file
        .epsilon
        .iter()
        .map(|name| resolve_elem(&p, name))
        .collect::<Result<_, _>>()?;
    let mut weights = vec![0.0; graph.vertex_count()];
    for (&v, &w) in &file.p {
        *weights.get_mut(v).ok_or(FormatError::VertexRange(v))? = w;
    }
    let mut o =
        Observer::new(graph, weights, epsilon).map_err(|e| FormatError::BadObserver(e.to_string()))?;
    if let Some(world_path) = &file.realization {
        let r = load_realization(&dir.join(world_path), &p)?;
        o.attach_realization(r).expect("same poc-set by construction");
    }
    Ok(o)
}

/// Serializes observer state with the file references it should carry.
pub fn observer_file(
    o: &Observer,
    pocset_ref: String,
    realization_ref: Option<String>,
) -> ObserverFile {
    ObserverFile {
        pocset: pocset_ref,
        realization: realization_ref,
        epsilon: o
            .epsilon()
            .iter()
            .map(|&e| o.pocset().elem_name(e))
            .collect(),
        p: o
            .excitation()
            .iter()
            .enumerate()
            .filter(|(_, w)| **w != 0.0)
            .map(|(v, &w)| (v, w))
            .collect(),
    }
}

/// A dual graph export: per-vertex positive tags, the edge list, and the
/// vertex set of each tag's halfspace.
#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
pub struct GraphFile {
    pub vertices: Vec<Vec<String>>,
    pub edges: Vec<(usize, usize)>,
    pub halfspaces: BTreeMap<String, Vec<usize>>,
}

impl GraphFile {
    pub fn of(g: &MedianGraph) -> GraphFile {
        let p = g.pocset();
        let positive_tags = |s: Selection| -> Vec<String> {
            (0..p.tag_count())
                .filter(|&i| s.contains(Elem::positive(i)))
                .map(|i| p.tags()[i].clone())
                .collect()
        };
        GraphFile {
            vertices: g.selections().map(positive_tags).collect(),
            edges: g.edges().to_vec(),
            halfspaces: p
                .tags()
                .iter()
                .enumerate()
                .map(|(i, name)| (name.clone(), g.halfspace(Elem::positive(i))))
                .collect(),
        }
    }
}

pub fn save_graph(path: &Path, g: &MedianGraph) -> Result<(), FormatError> {
    write(path, &to_pretty(&GraphFile::of(g)))
}

/// A retraction as both endpoint poc-sets and the image of every source tag.
#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
pub struct RetractionFile {
    pub from: PocSetFile,
    pub to: PocSetFile,
    pub map: BTreeMap<String, String>,
}

impl RetractionFile {
    pub fn of(r: &Retraction) -> RetractionFile {
        RetractionFile {
            from: PocSetFile::of(r.from()),
            to: PocSetFile::of(r.to()),
            map: r
                .from()
                .tags()
                .iter()
                .enumerate()
                .map(|(i, name)| {
                    (name.clone(), r.to().elem_name(r.apply(Elem::positive(i))))
                })
                .collect(),
        }
    }

    pub fn build(&self) -> Result<Retraction, FormatError> {
        let from = self.from.build()?;
        let to = self.to.build()?;
        let images = from
            .tags()
            .iter()
            .map(|name| {
                let target = self
                    .map
                    .get(name)
                    .ok_or_else(|| FormatError::BadRetractionMap(format!("no image for {name}")))?;
                resolve_elem(&to, target)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let morphism = PocMorphism::new(from, to, images)
            .map_err(|e| FormatError::BadRetractionMap(e.to_string()))?;
        Ok(Retraction::new(morphism)?)
    }
}

pub fn save_retraction(path: &Path, r: &Retraction) -> Result<(), FormatError> {
    write(path, &to_pretty(&RetractionFile::of(r)))
}

pub fn load_retraction(path: &Path) -> Result<Retraction, FormatError> {
    let file: RetractionFile = parse(path, &read(path)?)?;
    file.build()
}

/// An update report with element names instead of ids, for trace lines.
#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
pub struct UpdateReportJson {
    pub observed: String,
    pub flags: Vec<String>,
    pub removed: Vec<String>,
    pub added: Vec<String>,
    pub reached_all: bool,
    pub visited: usize,
}

impl UpdateReportJson {
    pub fn of(p: &PocSet, r: &UpdateReport) -> UpdateReportJson {
        let names = |v: &[Elem]| v.iter().map(|&e| p.elem_name(e)).collect();
        UpdateReportJson {
            observed: p.elem_name(r.observed),
            flags: names(&r.flags),
            removed: names(&r.removed),
            added: names(&r.added),
            reached_all: r.reached_all,
            visited: r.visited,
        }
    }
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
pub struct MisperceptionJson {
    pub kind: String,
    pub missing: Vec<String>,
    pub extra: Vec<String>,
    pub consistent_zero_weight: Vec<usize>,
    pub inconsistent_positive_weight: Vec<usize>,
}

impl MisperceptionJson {
    pub fn of(p: &PocSet, r: &MisperceptionReport) -> MisperceptionJson {
        let names = |v: &[Elem]| v.iter().map(|&e| p.elem_name(e)).collect();
        MisperceptionJson {
            kind: match r.kind {
                MisperceptionKind::Exact => "exact",
                MisperceptionKind::Incomplete => "incomplete",
                MisperceptionKind::Contradicted => "contradicted",
            }
            .to_string(),
            missing: names(&r.missing),
            extra: names(&r.extra),
            consistent_zero_weight: r.consistent_zero_weight.clone(),
            inconsistent_positive_weight: r.inconsistent_positive_weight.clone(),
        }
    }
}

pub fn to_pretty<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    text.push('\n');
    text
}
