//! Vertex colorings of the conflict graph and the delivery heuristics built on them.
//!
//! A proper coloring of the undirected conflict graph together with its
//! *local number*, the largest count of distinct colors in any closed
//! out-neighborhood, determines an index code of that many transmissions.

mod dump;
mod gclc;
mod hglc;
mod local_search;
mod oracle;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ConflictGraph, VertexId};

pub use dump::{parse_coloring_dump, write_coloring_dump, ColoringSummary};
pub use gclc::{gclc, gclc1, gclc2, Grouping};
pub use hglc::{hglc, hglc1, HglcParams};
pub use local_search::local_search;
pub use oracle::{brute_force_oracle, ORACLE_MAX_VERTICES};

/// A total map from vertices to dense color ids `0..num_colors`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    color_of: Vec<u32>,
    num_colors: usize,
}

impl Coloring {
    /// Relabels arbitrary color ids to `0..k`, preserving their relative order.
    pub fn new(raw: Vec<u32>) -> Self {
        let mut ids = raw.clone();
        ids.sort_unstable();
        ids.dedup();
        let color_of = raw
            .into_iter()
            .map(|c| ids.binary_search(&c).expect("present") as u32)
            .collect();
        Coloring {
            color_of,
            num_colors: ids.len(),
        }
    }

    pub fn color(&self, v: VertexId) -> u32 {
        self.color_of[v as usize]
    }

    pub fn colors(&self) -> &[u32] {
        &self.color_of
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn len(&self) -> usize {
        self.color_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.color_of.is_empty()
    }

    /// Vertices of each color class, ascending.
    pub fn classes(&self) -> Vec<Vec<VertexId>> {
        let mut classes = vec![Vec::new(); self.num_colors];
        for (v, &c) in self.color_of.iter().enumerate() {
            classes[c as usize].push(v as VertexId);
        }
        classes
    }

    /// Checks that the coloring covers `g` and no edge joins two equal colors.
    pub fn validate(&self, g: &ConflictGraph) -> Result<()> {
        if self.color_of.len() != g.len() {
            return Err(Error::DimensionMismatch(format!(
                "coloring covers {} vertices, graph has {}",
                self.color_of.len(),
                g.len()
            )));
        }
        let mut class_size = vec![0usize; self.num_colors];
        for &c in &self.color_of {
            class_size[c as usize] += 1;
        }
        for v in 0..g.len() as VertexId {
            let c = self.color(v);
            let same = 1 + g.compatible(v).iter().filter(|&&w| self.color(w) == c).count();
            if same != class_size[c as usize] {
                let w = (0..g.len() as VertexId)
                    .find(|&w| self.color(w) == c && g.is_adjacent(v, w))
                    .expect("class contains a neighbor");
                return Err(Error::InvalidColoring(v.min(w), v.max(w), c));
            }
        }
        Ok(())
    }
}

/// Which procedure produced a coloring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "GCLC1")]
    Gclc1,
    #[serde(rename = "GCLC2")]
    Gclc2,
    #[serde(rename = "HGLC1")]
    Hglc1,
    #[serde(rename = "ORACLE")]
    Oracle,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Gclc1 => "GCLC1",
            Algorithm::Gclc2 => "GCLC2",
            Algorithm::Hglc1 => "HGLC1",
            Algorithm::Oracle => "ORACLE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringOutcome {
    pub coloring: Coloring,
    /// Largest number of distinct colors in a closed out-neighborhood.
    pub local_number: usize,
    pub algorithm: Algorithm,
}

impl ColoringOutcome {
    pub(crate) fn evaluate(g: &ConflictGraph, coloring: Coloring, algorithm: Algorithm) -> Self {
        let local_number = local_number_unchecked(g, &coloring);
        ColoringOutcome {
            coloring,
            local_number,
            algorithm,
        }
    }

    pub fn num_colors(&self) -> usize {
        self.coloring.num_colors()
    }

    /// Transmission rate in file units, `local_number / B`.
    pub fn rate(&self, packets_per_file: usize) -> f64 {
        self.local_number as f64 / packets_per_file as f64
    }
}

/// `max_v |c(N+(v))|` for a valid coloring.
pub fn local_number(g: &ConflictGraph, coloring: &Coloring) -> Result<usize> {
    coloring.validate(g)?;
    Ok(local_number_unchecked(g, coloring))
}

/// Distinct colors in each vertex's closed out-neighborhood. Quadratic; meant
/// for inspection of small graphs.
pub fn closed_neighborhood_colors(g: &ConflictGraph, coloring: &Coloring) -> Vec<Vec<u32>> {
    (0..g.len() as VertexId)
        .map(|v| {
            let mut colors: Vec<u32> = (0..g.len() as VertexId)
                .filter(|&w| w == v || g.has_arc(v, w))
                .map(|w| coloring.color(w))
                .collect();
            colors.sort_unstable();
            colors.dedup();
            colors
        })
        .collect()
}

// Per user u, the out-neighborhood of any of its vertices v is every vertex
// whose packet u lacks, minus the vertices sharing v's packet, plus v. Count
// the colors of the first set once per user, then correct per packet.
fn local_number_unchecked(g: &ConflictGraph, coloring: &Coloring) -> usize {
    let k = coloring.num_colors();
    let mut in_user = vec![0u32; k];
    let mut in_packet = vec![0u32; k];
    let mut best = 0usize;
    for u in 0..g.n_users() {
        let own = g.user_vertices(u);
        if own.is_empty() {
            continue;
        }
        in_user.iter_mut().for_each(|x| *x = 0);
        let mut distinct = 0usize;
        for w in 0..g.len() as VertexId {
            if !g.user_caches_global(u, g.global_packet(w)) {
                let c = coloring.color(w) as usize;
                if in_user[c] == 0 {
                    distinct += 1;
                }
                in_user[c] += 1;
            }
        }
        for v in own {
            let group = g.same_packet(v);
            for &w in group {
                in_packet[coloring.color(w) as usize] += 1;
            }
            let mut lost = 0usize;
            for &w in group {
                let c = coloring.color(w) as usize;
                if in_packet[c] != 0 {
                    if in_packet[c] == in_user[c] {
                        lost += 1;
                    }
                    in_packet[c] = 0;
                }
            }
            // The colors lost only to v's packet group; v's own color is then added back.
            let own_color = coloring.color(v) as usize;
            let own_lost = group
                .iter()
                .filter(|&&w| coloring.color(w) as usize == own_color)
                .count() as u32
                == in_user[own_color];
            let value = distinct - lost + usize::from(own_lost);
            best = best.max(value);
        }
    }
    best
}

/// Keeps the outcome with the smaller local number, preferring `first` on ties.
pub(crate) fn better(first: ColoringOutcome, second: ColoringOutcome) -> ColoringOutcome {
    if second.local_number < first.local_number {
        second
    } else {
        first
    }
}
