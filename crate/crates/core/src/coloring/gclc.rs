use crate::coloring::{better, Algorithm, Coloring, ColoringOutcome};
use crate::graph::{ConflictGraph, VertexId};

/// How GCLC1 decides which vertices may join the seed's color class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Grouping {
    /// Candidates need `|T_v'| = |T_v|`.
    #[default]
    Cardinality,
    /// Candidates need `T_v' = T_v` as user sets.
    SameUsers,
}

/// Greedy constrained local coloring, variant 1.
///
/// Repeatedly seeds a class with the lowest-id uncolored vertex and sweeps
/// the remaining uncolored vertices in id order, adding each one whose `T`
/// set matches the seed's (per `grouping`) and that has no edge to the class.
pub fn gclc1(g: &ConflictGraph, grouping: Grouping) -> ColoringOutcome {
    const NONE: u32 = u32::MAX;
    let mut color = vec![NONE; g.len()];
    let mut next = 0u32;
    let mut class: Vec<VertexId> = Vec::new();
    for v in 0..g.len() as VertexId {
        if color[v as usize] != NONE {
            continue;
        }
        class.clear();
        class.push(v);
        let t_size = g.t_size(v);
        let t_set = matches!(grouping, Grouping::SameUsers).then(|| g.t_set(v));
        // Only non-neighbors of the seed can join, so sweep those.
        for &w in g.compatible(v) {
            if color[w as usize] != NONE || w < v || g.t_size(w) != t_size {
                continue;
            }
            if let Some(set) = &t_set {
                if &g.t_set(w) != set {
                    continue;
                }
            }
            if class[1..].iter().all(|&x| !g.is_adjacent(w, x)) {
                class.push(w);
            }
        }
        for &x in &class {
            color[x as usize] = next;
        }
        next += 1;
    }
    ColoringOutcome::evaluate(g, Coloring::new(color), Algorithm::Gclc1)
}

/// Greedy constrained local coloring, variant 2: one color per distinct
/// requested packet.
pub fn gclc2(g: &ConflictGraph) -> ColoringOutcome {
    let color = (0..g.len() as VertexId)
        .map(|v| g.packet_group(v) as u32)
        .collect();
    ColoringOutcome::evaluate(g, Coloring::new(color), Algorithm::Gclc2)
}

/// The better of [`gclc1`] and [`gclc2`] by local number, ties to variant 1.
pub fn gclc(g: &ConflictGraph, grouping: Grouping) -> ColoringOutcome {
    better(gclc1(g, grouping), gclc2(g))
}
