//! Collapses an empty corner of a square into a path, carries weights back
//! and forth across the collapse, and replays the recorded move through the
//! audit.

use pocmem::deformation::{
    degenerate, degeneration_candidates, map_epsilon, move_delta, pull_back_weights,
    transport_weights, DeformationMove, MoveKind, MoveLog, MoveStep, ObserverSnapshot,
};
use pocmem::scenarios;
use pocmem::{MedianGraph, Observer};

fn main() {
    // A square with nothing in its (a1, a2) corner: the observer has seen
    // no reason to keep both directions independent.
    let square = scenarios::cube_pocset(2);
    let g = MedianGraph::build(&square).unwrap();
    let weights = vec![0.5, 0.25, 0.25, 0.0];
    let epsilon = [square.tag_elem("a1").unwrap().star()].into();
    let o = Observer::new(g, weights, epsilon).unwrap();

    for (corner, prob) in degeneration_candidates(&o, 0.1).unwrap() {
        println!(
            "corner ({}, {}) holds probability {prob}",
            square.elem_name(corner.a),
            square.elem_name(corner.b)
        );
    }

    let a = square.tag_elem("a1").unwrap();
    let b = square.tag_elem("a2").unwrap();
    let before = ObserverSnapshot::of(&o);
    let (path, r) = degenerate(&square, a, b).unwrap();
    println!(
        "imposed {} <= {}; tags now {:?}",
        square.elem_name(a),
        square.elem_name(b.star()),
        path.tags()
    );
    println!(
        "square dual had 4 vertices; path dual has {}",
        MedianGraph::build(&path).unwrap().vertex_count()
    );

    // The dead corner carried no weight, so nothing is lost pulling back.
    let pulled = pull_back_weights(&r, &before.excitation).unwrap();
    println!("pulled-back weights: {:?}, renormalized = {}", pulled.weights, pulled.renormalized);
    let pushed = transport_weights(&r, &pulled.weights).unwrap();
    assert_eq!(pushed.weights, vec![0.5, 0.25, 0.25, 0.0]);
    println!("transporting them forward restores the originals exactly");

    // Log the move and let the audit re-derive it.
    let small_graph = MedianGraph::build(&path).unwrap();
    let after_observer = Observer::new(
        small_graph,
        pulled.weights.clone(),
        map_epsilon(&r, &before.epsilon),
    )
    .unwrap();
    let after = ObserverSnapshot::of(&after_observer);
    let kind = MoveKind::Degenerate { a, b };
    let delta = move_delta(&kind, &r);
    let mv = DeformationMove {
        transported: transport_weights(&r, &after.excitation).unwrap(),
        kind,
        delta,
        retraction: r,
    };
    let mut log = MoveLog::default();
    log.push(MoveStep { before, mv, after });
    let audit = log.audit();
    println!("audit ok = {}", audit.ok);
}
