//! Runs the narrow-arc compass scenario end to end: sampled observations,
//! idealized updates, and threshold-triggered corner collapses, printing the
//! same trace the `pocmem simulate` subcommand writes.

use std::path::Path;

use pocmem::sim::{self, Scenario};
use pocmem::DEFAULT_MAX_TAGS;

fn main() {
    let scenario = Scenario::compass_example();
    let out = sim::run(&scenario, Path::new("."), DEFAULT_MAX_TAGS).unwrap();
    for line in &out.lines {
        println!("{line}");
    }
    println!();
    println!(
        "{} structural moves, audit ok = {}",
        out.log.steps.len(),
        out.audit.ok
    );
    let p = out.observer.pocset();
    let held: Vec<String> = out
        .observer
        .epsilon()
        .iter()
        .map(|&e| p.elem_name(e))
        .collect();
    println!("final conjecture: {held:?} over {} vertices", out.observer.graph().vertex_count());
}
