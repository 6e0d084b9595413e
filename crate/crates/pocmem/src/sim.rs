//! Scenario-driven simulation: an observer receives a stream of
//! observations, explicit or sampled from the world's atom weights, updates
//! after each one, and may restructure itself when a corner's probability
//! falls below the threshold. Every run produces a JSON-lines trace that is
//! byte-identical under a fixed seed, plus the move log and its audit.

use std::collections::BTreeMap;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::deformation::{
    degenerate, degeneration_candidates, map_epsilon, move_delta, pull_back_weights,
    transport_weights, AuditOutcome, DeformError, DeformationMove, MoveKind, MoveLog, MoveStep,
    ObserverSnapshot, Retraction,
};
use crate::formats::{
    self, FormatError, MisperceptionJson, UpdateReportJson,
};
use crate::median::{MedianError, MedianGraph};
use crate::observer::{Budget, Observer, ObserverError};
use crate::pocset::{Elem, PocSet};
use crate::realization::{Realization, RealizationError, World};
use crate::scenarios;

#[derive(Error, Debug)]
pub enum SimError {
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Observer(#[from] ObserverError),
    #[error(transparent)]
    Deform(#[from] DeformError),
    #[error(transparent)]
    Graph(#[from] MedianError),
    #[error(transparent)]
    World(#[from] RealizationError),
    #[error("objective excitation, sampling, and misperception reports need a realized world")]
    NeedsWorld,
    #[error("unknown stream element {0:?}")]
    UnknownStreamElement(String),
}

/// Where the poc-set and its world come from.
#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WorldSpec {
    /// Four directions over a circle of midpoint atoms, arcs of the given
    /// half-width in degrees.
    Compass { epsilon_degrees: f64, atoms: usize },
    /// An m by n rectangle of cells with threshold sensors per axis.
    Grid { m: usize, n: usize },
    /// A poc-set file, optionally with a world file over it.
    Files {
        pocset: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        world: Option<String>,
    },
}

/// Initial excitation. `Auto` means objective when a world is realized,
/// uniform otherwise.
#[derive(Serialize, Deserialize, Clone, PartialEq, Debug, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ExcitationSpec {
    #[default]
    Auto,
    Objective,
    Uniform,
    Explicit { weights: Vec<f64> },
}

#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StreamSpec {
    /// Element names observed in order, resolved against the starting
    /// poc-set and carried through any restructuring.
    Explicit { observations: Vec<String> },
    /// Draw an atom per the world's weights, then answer with one uniformly
    /// chosen element of its profile.
    Sampled { length: usize },
}

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Debug)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BudgetSpec {
    Unlimited,
    Hops { hops: usize },
    /// Unit initial charge decaying per covering step.
    Charge { decay: f64, threshold: f64 },
}

impl BudgetSpec {
    pub fn to_budget(self) -> Budget {
        match self {
            BudgetSpec::Unlimited => Budget::Unlimited,
            BudgetSpec::Hops { hops } => Budget::Hops(hops),
            BudgetSpec::Charge { decay, threshold } => Budget::Charge {
                initial: 1.0,
                decay,
                threshold,
            },
        }
    }

    fn label(self) -> String {
        match self {
            BudgetSpec::Unlimited => "unlimited".into(),
            BudgetSpec::Hops { hops } => format!("hops:{hops}"),
            BudgetSpec::Charge { decay, threshold } => format!("charge:{decay},{threshold}"),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Debug, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModeSpec {
    #[default]
    Idealized,
    Dissipative { budget: BudgetSpec },
}

/// A full simulation request, loadable from JSON.
#[derive(Serialize, Deserialize, Clone, PartialEq, Debug)]
pub struct Scenario {
    pub world: WorldSpec,
    /// Conjectured element names at the start.
    #[serde(default)]
    pub epsilon: Vec<String>,
    #[serde(default)]
    pub excitation: ExcitationSpec,
    pub stream: StreamSpec,
    #[serde(default)]
    pub mode: ModeSpec,
    #[serde(default)]
    pub seed: u64,
    /// Corner probability below which a degeneration fires, at most one
    /// per step. Absent means never restructure.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    /// Compare the conjecture against each sampled atom's true profile.
    #[serde(default)]
    pub report_misperception: bool,
}

impl Scenario {
    /// The narrow-arc compass story: objective weights leave the four
    /// diagonal corners empty, so a run with a threshold collapses them
    /// one per step while observations keep arriving.
    pub fn compass_example() -> Scenario {
        Scenario {
            world: WorldSpec::Compass {
                epsilon_degrees: 30.0,
                atoms: 360,
            },
            epsilon: ["n*", "s*", "w*", "e*"].map(String::from).to_vec(),
            excitation: ExcitationSpec::Objective,
            stream: StreamSpec::Sampled { length: 6 },
            mode: ModeSpec::Idealized,
            seed: 7,
            threshold: Some(0.05),
            report_misperception: true,
        }
    }

    pub fn grid_example() -> Scenario {
        Scenario {
            world: WorldSpec::Grid { m: 3, n: 4 },
            epsilon: Vec::new(),
            excitation: ExcitationSpec::Objective,
            stream: StreamSpec::Sampled { length: 10 },
            mode: ModeSpec::Dissipative {
                budget: BudgetSpec::Hops { hops: 1 },
            },
            seed: 7,
            threshold: None,
            report_misperception: false,
        }
    }
}

pub fn load_scenario(path: &Path) -> Result<Scenario, FormatError> {
    formats::parse(path, &formats::read(path)?)
}

pub fn save_scenario(path: &Path, s: &Scenario) -> Result<(), FormatError> {
    formats::write(path, &formats::to_pretty(s))
}

pub struct SimOutput {
    /// The trace: header, one line per step, one line per move, final state.
    pub lines: Vec<String>,
    pub observer: Observer,
    pub log: MoveLog,
    pub audit: AuditOutcome,
}

#[derive(Serialize)]
struct HeaderLine<'a> {
    seed: u64,
    mode: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    budget: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    threshold: Option<f64>,
    tags: Vec<String>,
    vertices: usize,
}

#[derive(Serialize)]
struct StepLine {
    step: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    atom: Option<usize>,
    update: UpdateReportJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    misperception: Option<MisperceptionJson>,
    epsilon: Vec<String>,
}

#[derive(Serialize)]
struct MoveLine {
    #[serde(rename = "move")]
    mv: MoveJson,
}

#[derive(Serialize)]
struct MoveJson {
    kind: &'static str,
    corner: (String, String),
    imposed: (String, String),
    #[serde(skip_serializing_if = "Vec::is_empty")]
    merged: Vec<(String, String)>,
    retraction: BTreeMap<String, String>,
    corner_probability: f64,
    renormalized: bool,
    vertices_before: usize,
    vertices_after: usize,
}

#[derive(Serialize)]
struct AuditJson {
    ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    violation: Option<String>,
}

#[derive(Serialize)]
struct FinalLine {
    #[serde(rename = "final")]
    state: FinalState,
    moves: usize,
    audit: AuditJson,
}

#[derive(Serialize)]
struct FinalState {
    tags: Vec<String>,
    vertices: usize,
    epsilon: Vec<String>,
    p: BTreeMap<usize, f64>,
}

fn json_line<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("trace lines serialize")
}

/// Draws one atom index distributed by the world's weights.
fn draw_atom(rng: &mut ChaCha8Rng, world: &World) -> usize {
    let total: f64 = world.weights().iter().sum();
    let mut r = rng.gen::<f64>() * total;
    let mut last_positive = 0;
    for (i, &m) in world.weights().iter().enumerate() {
        if m > 0.0 {
            last_positive = i;
            if r < m {
                return i;
            }
            r -= m;
        }
    }
    last_positive
}

/// One true answer about the drawn atom: a uniformly chosen literal of its
/// profile.
fn draw_observation(rng: &mut ChaCha8Rng, r: &Realization, atom: usize) -> Elem {
    let profile = r.profile(atom);
    let tag = rng.gen_range(0..r.pocset().tag_count());
    if profile.contains(Elem::positive(tag)) {
        Elem::positive(tag)
    } else {
        Elem::negative(tag)
    }
}

fn names(p: &PocSet, eps: impl IntoIterator<Item = Elem>) -> Vec<String> {
    eps.into_iter().map(|e| p.elem_name(e)).collect()
}

struct Setup {
    observer: Observer,
    pocset: PocSet,
}

fn build_setup(
    scenario: &Scenario,
    base_dir: &Path,
    max_tags: usize,
) -> Result<Setup, SimError> {
    let (pocset, realization) = match &scenario.world {
        WorldSpec::Compass {
            epsilon_degrees,
            atoms,
        } => {
            let r = scenarios::compass(*epsilon_degrees, *atoms);
            (r.pocset().clone(), Some(r))
        }
        WorldSpec::Grid { m, n } => {
            let r = scenarios::grid(*m, *n);
            (r.pocset().clone(), Some(r))
        }
        WorldSpec::Files { pocset, world } => {
            let p = formats::load_pocset(&base_dir.join(pocset))?;
            let r = world
                .as_ref()
                .map(|w| formats::load_realization(&base_dir.join(w), &p))
                .transpose()?;
            (p, r)
        }
    };
    let graph = MedianGraph::build_with_limit(&pocset, max_tags)?;
    let n = graph.vertex_count();
    let weights = match (&scenario.excitation, &realization) {
        (ExcitationSpec::Objective, None) => return Err(SimError::NeedsWorld),
        (ExcitationSpec::Auto | ExcitationSpec::Objective, Some(r)) => {
            r.objective_excitation(&graph)?
        }
        (ExcitationSpec::Auto, None) | (ExcitationSpec::Uniform, _) => vec![1.0 / n as f64; n],
        (ExcitationSpec::Explicit { weights }, _) => weights.clone(),
    };
    let epsilon = scenario
        .epsilon
        .iter()
        .map(|name| formats::resolve_elem(&pocset, name))
        .collect::<Result<_, _>>()?;
    let mut observer = Observer::new(graph, weights, epsilon)?;
    if let Some(r) = realization {
        observer
            .attach_realization(r)
            .expect("realization was built over the same poc-set");
    }
    Ok(Setup { observer, pocset })
}

/// Runs the scenario: per step one observation, one update, and at most one
/// degeneration. File references resolve against `base_dir`; graphs are
/// built under `max_tags`.
pub fn run(scenario: &Scenario, base_dir: &Path, max_tags: usize) -> Result<SimOutput, SimError> {
    let Setup {
        mut observer,
        pocset,
    } = build_setup(scenario, base_dir, max_tags)?;
    let needs_world = matches!(scenario.stream, StreamSpec::Sampled { .. })
        || scenario.report_misperception;
    if needs_world && observer.realization().is_none() {
        return Err(SimError::NeedsWorld);
    }
    let (mode_label, budget) = match scenario.mode {
        ModeSpec::Idealized => ("idealized", Budget::Unlimited),
        ModeSpec::Dissipative { budget } => ("dissipative", budget.to_budget()),
    };
    let budget_label = match scenario.mode {
        ModeSpec::Idealized => None,
        ModeSpec::Dissipative { budget } => Some(budget.label()),
    };
    let mut lines = vec![json_line(&HeaderLine {
        seed: scenario.seed,
        mode: mode_label,
        budget: budget_label,
        threshold: scenario.threshold,
        tags: pocset.tags().to_vec(),
        vertices: observer.graph().vertex_count(),
    })];
    let explicit_stream: Option<Vec<Elem>> = match &scenario.stream {
        StreamSpec::Explicit { observations } => Some(
            observations
                .iter()
                .map(|name| {
                    pocset
                        .elem_by_name(name)
                        .filter(|e| e.is_proper())
                        .ok_or_else(|| SimError::UnknownStreamElement(name.clone()))
                })
                .collect::<Result<_, _>>()?,
        ),
        StreamSpec::Sampled { .. } => None,
    };
    let step_count = match &scenario.stream {
        StreamSpec::Explicit { observations } => observations.len(),
        StreamSpec::Sampled { length } => *length,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);
    let mut log = MoveLog::default();
    // Explicit observations are named in the starting vocabulary; this maps
    // them into whatever the observer has restructured itself into.
    let mut so_far = Retraction::identity(&pocset);
    for step in 0..step_count {
        let (atom, observed) = match &explicit_stream {
            Some(stream) => (None, so_far.apply(stream[step])),
            None => {
                let r = observer.realization().expect("checked above");
                let atom = draw_atom(&mut rng, r.world());
                let obs = draw_observation(&mut rng, r, atom);
                (Some(atom), obs)
            }
        };
        let report = observer.update_dissipative(observed, &budget)?;
        let misperception = match (scenario.report_misperception, atom) {
            (true, Some(a)) => Some(MisperceptionJson::of(
                observer.pocset(),
                &observer.misperception_report(a)?,
            )),
            _ => None,
        };
        lines.push(json_line(&StepLine {
            step,
            atom,
            update: UpdateReportJson::of(observer.pocset(), &report),
            misperception,
            epsilon: names(observer.pocset(), observer.epsilon().iter().copied()),
        }));
        if let Some(threshold) = scenario.threshold {
            if let Some(line) = try_degeneration(&mut observer, threshold, max_tags, &mut log)? {
                let r = &log.steps.last().expect("a move was just pushed").mv.retraction;
                so_far = so_far.then(r)?;
                lines.push(line);
            }
        }
    }
    let audit = log.audit();
    lines.push(json_line(&FinalLine {
        state: FinalState {
            tags: observer.pocset().tags().to_vec(),
            vertices: observer.graph().vertex_count(),
            epsilon: names(observer.pocset(), observer.epsilon().iter().copied()),
            p: observer
                .excitation()
                .iter()
                .enumerate()
                .filter(|(_, w)| **w != 0.0)
                .map(|(v, &w)| (v, w))
                .collect(),
        },
        moves: log.steps.len(),
        audit: AuditJson {
            ok: audit.ok,
            violation: audit.violation.clone(),
        },
    }));
    Ok(SimOutput {
        lines,
        observer,
        log,
        audit,
    })
}

/// Applies the cheapest viable degeneration below the threshold, if any.
/// Candidates whose closure would trivialize an element, or whose collapse
/// would discard every bit of excitation, are passed over.
fn try_degeneration(
    observer: &mut Observer,
    threshold: f64,
    max_tags: usize,
    log: &mut MoveLog,
) -> Result<Option<String>, SimError> {
    let candidates = degeneration_candidates(observer, threshold)?;
    for (corner, prob) in candidates {
        let before = ObserverSnapshot::of(observer);
        let (small, r) = match degenerate(&before.pocset, corner.a, corner.b) {
            Ok(pair) => pair,
            Err(DeformError::ForcedTrivial(_)) => continue,
            Err(e) => return Err(e.into()),
        };
        let pulled = pull_back_weights(&r, &before.excitation)?;
        if pulled.weights.iter().all(|w| *w == 0.0) {
            continue;
        }
        let graph = MedianGraph::build_with_limit(&small, max_tags)?;
        let vertices_after = graph.vertex_count();
        let epsilon = map_epsilon(&r, &before.epsilon);
        let mut next = Observer::new(graph, pulled.weights.clone(), epsilon)?;
        if let Some(real) = observer.realization() {
            next.attach_realization(real.restrict_to(&small)?)
                .expect("restriction targets the new poc-set");
        }
        let after = ObserverSnapshot::of(&next);
        let kind = MoveKind::Degenerate {
            a: corner.a,
            b: corner.b,
        };
        let delta = move_delta(&kind, &r);
        let line = json_line(&MoveLine {
            mv: MoveJson {
                kind: "degenerate",
                corner: (
                    before.pocset.elem_name(corner.a),
                    before.pocset.elem_name(corner.b),
                ),
                imposed: delta.imposed.clone().expect("degenerations impose"),
                merged: delta.merged.clone(),
                retraction: before
                    .pocset
                    .tags()
                    .iter()
                    .enumerate()
                    .map(|(i, name)| (name.clone(), small.elem_name(r.apply(Elem::positive(i)))))
                    .collect(),
                corner_probability: prob,
                renormalized: pulled.renormalized,
                vertices_before: before.excitation.len(),
                vertices_after,
            },
        });
        let mv = DeformationMove {
            transported: transport_weights(&r, &after.excitation)?,
            retraction: r,
            kind,
            delta,
        };
        log.push(MoveStep { before, mv, after });
        *observer = next;
        return Ok(Some(line));
    }
    Ok(None)
}
