use crate::coloring::Coloring;
use crate::error::Result;
use crate::graph::{ConflictGraph, VertexId};

/// Tries to retire whole color classes, in ascending color order.
///
/// A class is retired when every member can move to another live color not
/// used by any of its neighbors, judged against the tentative recoloring as
/// it is built. Members take the lowest such color. The output is valid and
/// never uses more colors than the input.
pub fn local_search(g: &ConflictGraph, coloring: &Coloring) -> Result<Coloring> {
    coloring.validate(g)?;
    Ok(local_search_unchecked(g, coloring))
}

pub(crate) fn local_search_unchecked(g: &ConflictGraph, coloring: &Coloring) -> Coloring {
    let k = coloring.num_colors();
    let mut color: Vec<u32> = coloring.colors().to_vec();
    let mut members = coloring.classes();
    let mut count: Vec<u32> = members.iter().map(|m| m.len() as u32).collect();
    let mut live = vec![true; k];
    // Scratch: how many non-neighbors of the current vertex carry each color.
    let mut seen = vec![0u32; k];
    let mut touched: Vec<u32> = Vec::new();
    let mut moves: Vec<(VertexId, u32)> = Vec::new();

    for c in 0..k {
        if !live[c] || members[c].is_empty() {
            continue;
        }
        moves.clear();
        let mut retired = true;
        for &v in &members[c] {
            for &w in g.compatible(v) {
                let cw = color[w as usize] as usize;
                if seen[cw] == 0 {
                    touched.push(cw as u32);
                }
                seen[cw] += 1;
            }
            // A color is free for v when all of its vertices are non-neighbors.
            let target = touched
                .iter()
                .map(|&x| x as usize)
                .filter(|&x| x != c && live[x] && seen[x] == count[x])
                .min();
            for &x in &touched {
                seen[x as usize] = 0;
            }
            touched.clear();
            match target {
                Some(t) => {
                    color[v as usize] = t as u32;
                    count[t] += 1;
                    count[c] -= 1;
                    moves.push((v, t as u32));
                }
                None => {
                    retired = false;
                    break;
                }
            }
        }
        if retired {
            for &(v, t) in &moves {
                members[t as usize].push(v);
            }
            members[c].clear();
            live[c] = false;
        } else {
            for &(v, t) in &moves {
                color[v as usize] = c as u32;
                count[t as usize] -= 1;
                count[c] += 1;
            }
        }
    }
    Coloring::new(color)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::{gclc2, local_number};
    use crate::instances::random_small_instance;
    use crate::model::{CacheRealization, DemandRealization};

    #[test]
    fn complete_graph_unchanged() {
        let k = 4;
        let cache = CacheRealization::empty(k, k, 1);
        let demand = DemandRealization::new((0..k).map(|u| vec![u]).collect(), &cache).unwrap();
        let g = ConflictGraph::build(&cache, &demand).unwrap();
        let c = Coloring::new(vec![0, 1, 2, 3]);
        assert_eq!(local_search(&g, &c).unwrap(), c);
    }

    #[test]
    fn path_merges_endpoints() {
        // v0 - v1 - v2 with v0, v2 non-adjacent: users 0 and 2 cache each other's packet.
        let sets = vec![
            vec![vec![], vec![], vec![0]],
            vec![vec![], vec![], vec![]],
            vec![vec![0], vec![], vec![]],
        ];
        let cache = CacheRealization::from_sets(3, 1, &sets).unwrap();
        let demand = DemandRealization::new(vec![vec![0], vec![1], vec![2]], &cache).unwrap();
        let g = ConflictGraph::build(&cache, &demand).unwrap();
        assert!(g.is_adjacent(0, 1) && g.is_adjacent(1, 2) && !g.is_adjacent(0, 2));
        let out = local_search(&g, &Coloring::new(vec![1, 2, 3])).unwrap();
        assert_eq!(out.num_colors(), 2);
        assert_eq!(out.color(0), out.color(2));
        assert_ne!(out.color(0), out.color(1));
    }

    #[test]
    fn never_adds_colors() {
        for seed in 0..500 {
            let (cache, demand) = random_small_instance(12, seed);
            let g = ConflictGraph::build(&cache, &demand).unwrap();
            let input = Coloring::new((0..g.len() as u32).rev().collect());
            let out = local_search(&g, &input).unwrap();
            out.validate(&g).unwrap();
            assert!(out.num_colors() <= input.num_colors());
            let per_packet = gclc2(&g).coloring;
            let out = local_search(&g, &per_packet).unwrap();
            assert!(local_number(&g, &out).is_ok());
            assert!(out.num_colors() <= per_packet.num_colors());
        }
    }

    #[test]
    fn rejects_invalid_input() {
        let cache = CacheRealization::empty(2, 2, 1);
        let demand = DemandRealization::new(vec![vec![0], vec![1]], &cache).unwrap();
        let g = ConflictGraph::build(&cache, &demand).unwrap();
        assert!(local_search(&g, &Coloring::new(vec![0, 0])).is_err());
    }
}
