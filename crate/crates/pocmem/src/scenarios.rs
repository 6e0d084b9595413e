//! Ready-made poc-sets and realized worlds: hypercubes, chains, star trees,
//! the four-sensor compass on a discretized circle, and rectangular grids.

use crate::pocset::PocSet;
use crate::realization::{AtomSet, Realization, World};

/// Poc-set over `n` pairwise transverse tags; its dual is the `n`-cube
/// skeleton.
pub fn cube_pocset(n: usize) -> PocSet {
    PocSet::unrelated((0..n).map(|i| format!("a{}", i + 1)))
}

/// Chain poc-set with each listed tag strictly below the next.
pub fn chain_pocset(labels: &[&str]) -> PocSet {
    let relations: Vec<(&str, &str)> = labels.windows(2).map(|w| (w[0], w[1])).collect();
    PocSet::close(labels.iter().copied(), &relations).expect("a chain always closes")
}

/// Poc-set whose dual is a star tree with `n` leaves: `a_i* < a_j` for every
/// `i < j` kills all selections with two complemented tags.
pub fn star_pocset(n: usize) -> PocSet {
    let tags: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
    let names: Vec<(String, String)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (format!("a{}*", i + 1), format!("a{}", j + 1))))
        .collect();
    let relations: Vec<(&str, &str)> = names
        .iter()
        .map(|(l, r)| (l.as_str(), r.as_str()))
        .collect();
    PocSet::close(tags, &relations).expect("star relations always close")
}

/// The compass poc-set: opposite directions exclude each other, adjacent
/// ones are transverse.
pub fn compass_pocset() -> PocSet {
    PocSet::close(
        ["n", "s", "w", "e"],
        &[("n", "s*"), ("s", "n*"), ("e", "w*"), ("w", "e*")],
    )
    .expect("compass relations always close")
}

/// The compass realized on a circle discretized into `atoms` equal slices,
/// with one sensor arc of half-width `epsilon_degrees` per cardinal
/// direction. Atom `k` sits at the slice midpoint, so integer-degree arc
/// endpoints never land on an atom.
pub fn compass(epsilon_degrees: f64, atoms: usize) -> Realization {
    let pocset = compass_pocset();
    let world = World::uniform(atoms);
    let centers = [0.0, 180.0, 90.0, 270.0]; // n, s, w, e in tag order
    let sensors = centers
        .iter()
        .map(|&center| {
            AtomSet::from_indices(
                atoms,
                (0..atoms).filter(|&k| {
                    let angle = (k as f64 + 0.5) * 360.0 / atoms as f64;
                    let d = (angle - center).abs() % 360.0;
                    d.min(360.0 - d) < epsilon_degrees
                }),
            )
        })
        .collect();
    Realization::new(pocset, world, sensors).expect("compass arcs preserve order")
}

/// Poc-set of an `m` by `n` rectangle of integer points: one chain of `n`
/// horizontal cuts, one chain of `m` vertical cuts, transverse across.
pub fn grid_pocset(m: usize, n: usize) -> PocSet {
    let tags: Vec<String> = (1..=n)
        .map(|s| format!("h{s}"))
        .chain((1..=m).map(|t| format!("v{t}")))
        .collect();
    let names: Vec<(String, String)> = (1..n)
        .map(|s| (format!("h{s}"), format!("h{}", s + 1)))
        .chain((1..m).map(|t| (format!("v{t}"), format!("v{}", t + 1))))
        .collect();
    let relations: Vec<(&str, &str)> = names
        .iter()
        .map(|(l, r)| (l.as_str(), r.as_str()))
        .collect();
    PocSet::close(tags, &relations).expect("grid chains always close")
}

/// The grid realized on its own `(m + 1) * (n + 1)` integer points with
/// uniform weight. Atom `y * (m + 1) + x` is the point `(x, y)`; sensor
/// `v_t` answers where `x < t` and `h_s` where `y < s`.
pub fn grid(m: usize, n: usize) -> Realization {
    let pocset = grid_pocset(m, n);
    let atom_count = (m + 1) * (n + 1);
    let world = World::uniform(atom_count);
    let coords = |a: usize| (a % (m + 1), a / (m + 1));
    let sensors = (1..=n)
        .map(|s| AtomSet::from_indices(atom_count, (0..atom_count).filter(move |&a| coords(a).1 < s)))
        .chain((1..=m).map(|t| {
            AtomSet::from_indices(atom_count, (0..atom_count).filter(move |&a| coords(a).0 < t))
        }))
        .collect();
    Realization::new(pocset, world, sensors).expect("grid cuts preserve order")
}

/// Grid coordinates of a dual-graph selection: the number of cuts answering
/// negatively along each axis.
pub fn grid_coords(m: usize, n: usize, s: crate::median::Selection) -> (usize, usize) {
    let h_positive = (0..n).filter(|&i| s.0 >> i & 1 == 1).count();
    let v_positive = (n..n + m).filter(|&i| s.0 >> i & 1 == 1).count();
    (m - v_positive, n - h_positive)
}
