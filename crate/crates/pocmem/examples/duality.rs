//! Walks both directions of the duality: a poc-set determines its median
//! graph, and a morphism of poc-sets determines a vertex map running the
//! other way.

use pocmem::scenarios;
use pocmem::{dual_vertex_map, Elem, MedianGraph, PocMorphism, PocSet};

fn main() {
    // A 3-pompom: three petals hanging off one base point. Its dual is a
    // star, one leaf per petal.
    let pompom = PocSet::close(
        ["a", "b", "c"],
        &[("a", "b*"), ("a", "c*"), ("b", "c*")],
    )
    .unwrap();
    let g = MedianGraph::build(&pompom).unwrap();
    println!("pompom dual: {} vertices, {} edges", g.vertex_count(), g.edges().len());

    let cube = scenarios::cube_pocset(3);
    let h = MedianGraph::build(&cube).unwrap();
    println!("3-cube dual: {} vertices, {} edges", h.vertex_count(), h.edges().len());

    // Median of three cube corners, coordinate by coordinate.
    let (u, v, w) = (0, 3, 5);
    println!(
        "median({u}, {v}, {w}) = {} at distance {} {} {}",
        h.median(u, v, w),
        h.distance(u, h.median(u, v, w)),
        h.distance(v, h.median(u, v, w)),
        h.distance(w, h.median(u, v, w)),
    );

    // Including a 2-cube into the 3-cube dualizes to the coordinate
    // projection of the big cube onto a face: surjective on vertices
    // because the inclusion is injective on elements.
    let square = scenarios::cube_pocset(2);
    let face = PocMorphism::inclusion(&square, &cube).unwrap();
    let gs = MedianGraph::build(&square).unwrap();
    let map = dual_vertex_map(&face, &h, &gs).unwrap();
    println!("3-cube -> 2-cube projection: {map:?}");

    // Collapsing a tag runs the other way: the morphism is surjective, so
    // its dual embeds the small graph into the big one.
    let forget = PocMorphism::new(
        cube.clone(),
        square.clone(),
        vec![Elem::positive(0), Elem::positive(1), Elem::ONE],
    )
    .unwrap();
    assert!(forget.is_surjective());
    let emb = dual_vertex_map(&forget, &gs, &h).unwrap();
    let mut seen = emb.clone();
    seen.sort_unstable();
    seen.dedup();
    println!(
        "dual of the surjection is injective: {} distinct images for {} vertices",
        seen.len(),
        emb.len()
    );
}
