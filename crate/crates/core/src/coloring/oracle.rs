use crate::coloring::{Algorithm, Coloring, ColoringOutcome};
use crate::error::{Error, Result};
use crate::graph::{ConflictGraph, VertexId};

/// Largest graph the exhaustive search accepts.
pub const ORACLE_MAX_VERTICES: usize = 12;

struct Search {
    size: usize,
    adjacent: Vec<u16>,
    // in_closed_out[k]: vertices x whose closed out-neighborhood contains k.
    in_closed_out: Vec<u16>,
    colors: Vec<u8>,
    seen: Vec<u16>,
    best: usize,
    best_colors: Vec<u8>,
}

impl Search {
    fn run(&mut self, k: usize, used: usize, current: usize) {
        if k == self.size {
            self.best = current;
            self.best_colors.clone_from(&self.colors);
            return;
        }
        let saved = self.seen.clone();
        for c in 0..=used.min(self.size - 1) {
            let clash = (0..k).any(|j| self.colors[j] as usize == c && self.adjacent[k] >> j & 1 == 1);
            if clash {
                continue;
            }
            let mut worst = current;
            let holders = self.in_closed_out[k];
            for x in 0..self.size {
                if holders >> x & 1 == 1 {
                    self.seen[x] |= 1 << c;
                    worst = worst.max(self.seen[x].count_ones() as usize);
                }
            }
            if worst < self.best {
                self.colors[k] = c as u8;
                self.run(k + 1, used.max(c + 1), worst);
            }
            self.seen.copy_from_slice(&saved);
        }
    }
}

/// Exact local chromatic number by exhaustive search over colorings, up to
/// relabeling of colors. Refuses graphs above [`ORACLE_MAX_VERTICES`].
pub fn brute_force_oracle(g: &ConflictGraph) -> Result<ColoringOutcome> {
    let size = g.len();
    if size > ORACLE_MAX_VERTICES {
        return Err(Error::TooLarge {
            size,
            limit: ORACLE_MAX_VERTICES,
        });
    }
    let ids = 0..size as VertexId;
    let adjacent = ids
        .clone()
        .map(|v| {
            ids.clone()
                .filter(|&w| g.is_adjacent(v, w))
                .fold(0u16, |m, w| m | 1 << w)
        })
        .collect();
    let in_closed_out = ids
        .clone()
        .map(|k| {
            ids.clone()
                .filter(|&x| x == k || g.has_arc(x, k))
                .fold(0u16, |m, x| m | 1 << x)
        })
        .collect();
    let mut search = Search {
        size,
        adjacent,
        in_closed_out,
        colors: vec![0; size],
        seen: vec![0; size],
        best: size + 1,
        best_colors: vec![0; size],
    };
    search.run(0, 0, 0);
    let coloring = Coloring::new(search.best_colors.iter().map(|&c| c as u32).collect());
    Ok(ColoringOutcome {
        coloring,
        local_number: if size == 0 { 0 } else { search.best },
        algorithm: Algorithm::Oracle,
    })
}
