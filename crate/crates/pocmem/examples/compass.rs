//! Builds the four-direction compass vocabulary, inspects its pair
//! relations, and shows how the arc width decides which dual vertices stay
//! consistent with the circle underneath.

use pocmem::scenarios;
use pocmem::{Elem, MedianGraph};

fn main() {
    let p = scenarios::compass_pocset();
    println!("tags: {:?}", p.tags());
    assert!(p.validate().is_ok());

    // Opposite directions exclude each other, adjacent ones overlap.
    for (x, y) in [("n", "s"), ("n", "w"), ("w", "e")] {
        let a = p.tag_elem(x).unwrap();
        let b = p.tag_elem(y).unwrap();
        println!("{x} vs {y}: {:?}", p.classify_pair(a, b).unwrap());
    }

    let g = MedianGraph::build(&p).unwrap();
    println!(
        "dual graph: {} vertices, {} edges",
        g.vertex_count(),
        g.edges().len()
    );

    for eps in [60.0, 30.0] {
        let r = scenarios::compass(eps, 360);
        let consistent: Vec<usize> = (0..g.vertex_count())
            .filter(|&v| {
                let s = g.selections().nth(v).unwrap();
                r.is_consistent(s.elems(p.tag_count()))
            })
            .collect();
        let center = g
            .selections()
            .position(|s| (0..p.tag_count()).all(|i| s.contains(Elem::negative(i))))
            .unwrap();
        println!(
            "arc half-width {eps}: {} of {} vertices consistent, center {}",
            consistent.len(),
            g.vertex_count(),
            if consistent.contains(&center) {
                "included"
            } else {
                "excluded"
            }
        );

        // The consistent vertices are exactly the states an atom can induce.
        let visible = r.visible_graph(&g).unwrap();
        println!(
            "  visible: {} states, {} edges, {} walls",
            visible.state_count(),
            visible.edges.len(),
            visible.wall_count
        );
    }
}
