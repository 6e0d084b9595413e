//! Partially ordered complement sets and the median graphs dual to them,
//! with observers that hold, update, and restructure discrete belief states.
//!
//! A poc-set is a finite poset with a minimum and an order-reversing
//! complement; every way of picking one side of each complement pair without
//! contradiction is a vertex of the dual graph, and those vertices form a
//! median graph. [`PocSet`] builds and validates the orders, [`MedianGraph`]
//! enumerates the dual, [`Realization`] grounds elements in sensors over a
//! weighted atom space, [`Observer`] carries excitation weights and a
//! conjectured state through observation updates, and [`deformation`]
//! restructures the underlying poc-set while transporting everything along.
//!
//! The `examples/` directory is the guided tour, one runnable program per
//! capability:
//!
//! * `compass` builds a small direction vocabulary and inspects its dual.
//! * `duality` walks morphisms and the vertex maps they induce.
//! * `observer_updates` runs idealized and dissipative belief updates.
//! * `degeneration` collapses corners and audits the move log.
//! * `simulate` drives a full observation stream with restructuring.
//!
//! The `pocmem` binary exposes the same machinery on files; see the crate
//! README for the subcommands and JSON formats.

pub mod deformation;
pub mod formats;
pub mod median;
pub mod morphism;
pub mod observer;
pub mod pocset;
pub mod realization;
pub mod scenarios;
pub mod sim;

pub use deformation::{
    degenerate, degeneration_candidates, expand, pull_back_weights, transport_weights,
    AuditOutcome, DeformError, DeformationMove, Expansion, MoveKind, MoveLog, MoveStep,
    ObserverSnapshot, Retraction, Transported, TRANSPORT_TOLERANCE,
};
pub use median::{
    dual_vertex_map, Corner, MedianError, MedianGraph, Selection, VertexId, DEFAULT_MAX_TAGS,
    HARD_MAX_TAGS,
};
pub use morphism::{MorphismError, PocMorphism};
pub use observer::{
    Budget, MisperceptionKind, MisperceptionReport, Observer, ObserverError, UpdateReport,
};
pub use pocset::{
    CloseError, Elem, Nesting, PairRelation, PocSet, ValidationReport, Violation,
};
pub use realization::{AtomSet, Realization, RealizationError, VisibleGraph, World};
pub use sim::{
    load_scenario, save_scenario, BudgetSpec, ExcitationSpec, ModeSpec, Scenario, SimError,
    SimOutput, StreamSpec, WorldSpec,
};
