//! Runs belief updates two ways: the idealized projection that moves the
//! conjecture as little as possible, and the dissipative version whose
//! excitation wave can run out before reaching a contradiction.

use std::collections::BTreeSet;

use pocmem::scenarios;
use pocmem::{Budget, MedianGraph, Observer};

fn main() {
    // Start the compass observer at the center: nothing held positively.
    let r = scenarios::compass(60.0, 360);
    let p = r.pocset().clone();
    let g = MedianGraph::build(&p).unwrap();
    let center: BTreeSet<_> = p.proper_elems().filter(|e| !e.is_positive()).collect();
    let mut o = Observer::objective(g, r, center).unwrap();

    let show = |o: &Observer| {
        let names: Vec<String> = o.epsilon().iter().map(|&e| o.pocset().elem_name(e)).collect();
        println!("  epsilon = {names:?}, coherent = {}", o.coherence_check().is_empty());
    };
    println!("compass observer, idealized:");
    show(&o);
    for name in ["n", "s"] {
        let a = o.pocset().elem_by_name(name).unwrap();
        let report = o.update_idealized(a).unwrap();
        let flags: Vec<String> = report
            .flags
            .iter()
            .map(|&e| o.pocset().elem_name(e))
            .collect();
        println!("observe {name}: flags {flags:?}");
        show(&o);
    }

    // A chain a < b1 < b2 held entirely in the negative: observing a
    // contradicts every level, but a one-hop wave only reaches b1. The
    // freshly accepted elements re-ground the wave, so repeating the
    // observation pushes the correction one level further each time.
    let chain = scenarios::chain_pocset(&["a", "b1", "b2"]);
    let g = MedianGraph::build(&chain).unwrap();
    let all_starred: BTreeSet<_> = chain.proper_elems().filter(|e| !e.is_positive()).collect();
    let n = g.vertex_count();
    let mut o = Observer::new(g, vec![1.0 / n as f64; n], all_starred).unwrap();
    let a = chain.tag_elem("a").unwrap();
    println!("chain observer, one hop per update:");
    for step in 1..=3 {
        let report = o.update_dissipative(a, &Budget::Hops(1)).unwrap();
        println!(
            "  step {step}: flags {:?}, reached_all = {}",
            report
                .flags
                .iter()
                .map(|&e| o.pocset().elem_name(e))
                .collect::<Vec<_>>(),
            report.reached_all
        );
    }
    assert!(o.coherence_check().is_empty());
}
