//! Directed conflict graph over `(packet, user)` vertices.
//!
//! Vertex `v2` has an arc to `v1` when `v1`'s packet is missing from the
//! cache of `v2`'s user and the two vertices carry different packets. The
//! graphs met in practice are dense (a random pair is adjacent unless each
//! user caches the other's packet), so arcs are answered on demand from the
//! per-user cache bitsets and only the sparse complement, the
//! non-adjacent "compatible" vertices, is materialized.

use std::io::Write;
use std::ops::Range;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::model::{CacheRealization, DemandRealization, PacketId};

pub type VertexId = u32;

/// A requested packet together with the user requesting it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub packet: PacketId,
    pub user: u32,
}

#[derive(Debug, Clone)]
pub struct ConflictGraph {
    vertices: Vec<Vertex>,
    global: Vec<u32>,
    user_ranges: Vec<Range<u32>>,
    cached: Vec<FixedBitSet>,
    packets: usize,
    // Vertices grouped by packet; `group_of[v]` indexes `groups` and `cachers`.
    group_of: Vec<u32>,
    groups: Vec<Vec<VertexId>>,
    cachers: Vec<Vec<u32>>,
    compatible: Vec<Vec<VertexId>>,
}

impl ConflictGraph {
    /// Builds the conflict graph of a cache/demand realization pair.
    ///
    /// Vertex ids follow `(user, file, packet index)` order.
    pub fn build(cache: &CacheRealization, demand: &DemandRealization) -> Result<Self> {
        if cache.n() != demand.n() {
            return Err(Error::input(format!(
                "cache has {} users, demand has {}",
                cache.n(),
                demand.n()
            )));
        }
        if cache.packets() != demand.packets() {
            return Err(Error::input(format!(
                "cache uses B = {}, demand uses B = {}",
                cache.packets(),
                demand.packets()
            )));
        }
        let b = cache.packets();
        let n = cache.n();

        let mut vertices = Vec::with_capacity(demand.total_needed());
        let mut user_ranges = Vec::with_capacity(n);
        for u in 0..n {
            let start = vertices.len() as u32;
            for (f, missing) in demand.needed(u) {
                if *f >= cache.m() {
                    return Err(Error::input(format!("file {f} outside library of {}", cache.m())));
                }
                for &i in missing {
                    let packet = PacketId::new(*f, i);
                    if cache.contains(u, packet) {
                        return Err(Error::input(format!("user {u} both needs and caches {packet}")));
                    }
                    vertices.push(Vertex {
                        packet,
                        user: u as u32,
                    });
                }
            }
            user_ranges.push(start..vertices.len() as u32);
        }
        if vertices.len() > u32::MAX as usize {
            return Err(Error::input("too many vertices"));
        }
        let global: Vec<u32> = vertices.iter().map(|v| v.packet.global(b) as u32).collect();

        let mut order: Vec<VertexId> = (0..vertices.len() as u32).collect();
        order.sort_by_key(|&v| (global[v as usize], v));
        let mut group_of = vec![0u32; vertices.len()];
        let mut groups: Vec<Vec<VertexId>> = Vec::new();
        let mut last = None;
        for v in order {
            let g = global[v as usize];
            if last != Some(g) {
                groups.push(Vec::new());
                last = Some(g);
            }
            group_of[v as usize] = (groups.len() - 1) as u32;
            groups.last_mut().unwrap().push(v);
        }

        let cached = cache.bitsets().to_vec();
        let cachers: Vec<Vec<u32>> = groups
            .iter()
            .map(|members| {
                let g = global[members[0] as usize] as usize;
                (0..n as u32)
                    .filter(|&u| cached[u as usize].contains(g))
                    .collect()
            })
            .collect();

        let mut graph = ConflictGraph {
            vertices,
            global,
            user_ranges,
            cached,
            packets: b,
            group_of,
            groups,
            cachers,
            compatible: Vec::new(),
        };
        graph.compatible = (0..graph.len() as u32)
            .map(|v| graph.collect_compatible(v))
            .collect();
        Ok(graph)
    }

    // Non-neighbors of v: same-packet vertices, plus vertices of users caching
    // v's packet whose own packet is cached by v's user.
    fn collect_compatible(&self, v: VertexId) -> Vec<VertexId> {
        let vi = v as usize;
        let group = self.group_of[vi] as usize;
        let own_cache = &self.cached[self.vertices[vi].user as usize];
        let mut out: Vec<VertexId> = self.groups[group].iter().copied().filter(|&w| w != v).collect();
        for &u in &self.cachers[group] {
            for w in self.user_ranges[u as usize].clone() {
                if own_cache.contains(self.global[w as usize] as usize) {
                    out.push(w);
                }
            }
        }
        out.sort_unstable();
        out
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn n_users(&self) -> usize {
        self.user_ranges.len()
    }

    pub fn packets_per_file(&self) -> usize {
        self.packets
    }

    pub fn vertex(&self, v: VertexId) -> Vertex {
        self.vertices[v as usize]
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn packet(&self, v: VertexId) -> PacketId {
        self.vertices[v as usize].packet
    }

    pub fn user(&self, v: VertexId) -> usize {
        self.vertices[v as usize].user as usize
    }

    /// Vertices requested by `user`, a contiguous id range.
    pub fn user_vertices(&self, user: usize) -> Range<VertexId> {
        self.user_ranges[user].clone()
    }

    pub(crate) fn global_packet(&self, v: VertexId) -> usize {
        self.global[v as usize] as usize
    }

    pub fn user_caches(&self, user: usize, packet: PacketId) -> bool {
        self.cached[user].contains(packet.global(self.packets))
    }

    pub(crate) fn user_caches_global(&self, user: usize, global: usize) -> bool {
        self.cached[user].contains(global)
    }

    pub fn check_vertex(&self, v: usize) -> Result<VertexId> {
        if v < self.len() {
            Ok(v as VertexId)
        } else {
            Err(Error::VertexOutOfRange(v, self.len()))
        }
    }

    /// Arc `from -> to`: `to`'s packet interferes at `from`'s user.
    pub fn has_arc(&self, from: VertexId, to: VertexId) -> bool {
        let (f, t) = (from as usize, to as usize);
        self.global[f] != self.global[t]
            && !self.cached[self.vertices[f].user as usize].contains(self.global[t] as usize)
    }

    /// Adjacency in the undirected version of the graph.
    pub fn is_adjacent(&self, a: VertexId, b: VertexId) -> bool {
        a != b && (self.has_arc(a, b) || self.has_arc(b, a))
    }

    /// Non-neighbors of `v` in the undirected graph, excluding `v`, ascending.
    pub fn compatible(&self, v: VertexId) -> &[VertexId] {
        &self.compatible[v as usize]
    }

    /// Other vertices carrying the same packet as `v`, including `v`.
    pub fn same_packet(&self, v: VertexId) -> &[VertexId] {
        &self.groups[self.group_of[v as usize] as usize]
    }

    pub(crate) fn packet_group(&self, v: VertexId) -> usize {
        self.group_of[v as usize] as usize
    }

    /// Users caching `v`'s packet, ascending.
    pub fn cachers(&self, v: VertexId) -> &[u32] {
        &self.cachers[self.group_of[v as usize] as usize]
    }

    /// `|T_v|`: the requesting user plus every user caching the packet.
    pub fn t_size(&self, v: VertexId) -> usize {
        1 + self.cachers(v).len()
    }

    /// `T_v` as a sorted user list.
    pub fn t_set(&self, v: VertexId) -> Vec<u32> {
        let mut set = self.cachers(v).to_vec();
        let own = self.vertices[v as usize].user;
        let at = set.partition_point(|&u| u < own);
        set.insert(at, own);
        set
    }

    /// `|K_v|`: users that either request or cache `v`'s packet.
    pub fn k_size(&self, v: VertexId) -> usize {
        self.cachers(v).len() + self.same_packet(v).len()
    }

    pub fn out_neighbors(&self, v: VertexId) -> Vec<VertexId> {
        (0..self.len() as u32).filter(|&w| self.has_arc(v, w)).collect()
    }

    pub fn in_neighbors(&self, v: VertexId) -> Vec<VertexId> {
        (0..self.len() as u32).filter(|&w| self.has_arc(w, v)).collect()
    }

    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        (0..self.len() as u32)
            .filter(|&w| self.is_adjacent(v, w))
            .collect()
    }

    /// `{v}` plus every out-neighbor of `v`, ascending.
    pub fn closed_out_neighborhood(&self, v: usize) -> Result<Vec<VertexId>> {
        let v = self.check_vertex(v)?;
        Ok((0..self.len() as u32)
            .filter(|&w| w == v || self.has_arc(v, w))
            .collect())
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        let user = self.user(v);
        self.interfering_count(user) - self.same_packet(v).len()
    }

    // Vertices whose packet is not in `user`'s cache.
    fn interfering_count(&self, user: usize) -> usize {
        self.global
            .iter()
            .filter(|&&g| !self.cached[user].contains(g as usize))
            .count()
    }

    /// Number of directed arcs.
    pub fn arc_count(&self) -> usize {
        (0..self.n_users())
            .map(|u| {
                let range = self.user_vertices(u);
                if range.is_empty() {
                    return 0;
                }
                let interfering = self.interfering_count(u);
                range
                    .map(|v| interfering - self.same_packet(v).len())
                    .sum::<usize>()
            })
            .sum()
    }

    /// Number of edges of the undirected version.
    pub fn edge_count(&self) -> usize {
        let n = self.len();
        let non_adjacent: usize = self.compatible.iter().map(Vec::len).sum::<usize>() / 2;
        n * n.saturating_sub(1) / 2 - non_adjacent
    }

    /// Writes the arc list as text: a `p <|V|> <|E|>` header then `e <src> <dst>`
    /// lines with one-based vertex ids.
    pub fn write_dimacs<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "p {} {}", self.len(), self.arc_count())?;
        for v in 0..self.len() as u32 {
            for w in 0..self.len() as u32 {
                if self.has_arc(v, w) {
                    writeln!(out, "e {} {}", v + 1, w + 1)?;
                }
            }
        }
        Ok(())
    }
}

/// A parsed arc-list dump.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcList {
    pub vertices: usize,
    /// Zero-based `(src, dst)` pairs.
    pub arcs: Vec<(u32, u32)>,
}

/// Parses the text produced by [`ConflictGraph::write_dimacs`]. Lines starting
/// with `c` are comments.
pub fn parse_dimacs(text: &str) -> Result<ArcList> {
    const FMT: &str = "arc list";
    let mut header: Option<(usize, usize)> = None;
    let mut arcs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let mut parts = line.split_whitespace();
        let Some(tag) = parts.next() else { continue };
        let mut number = |what: &str| -> Result<usize> {
            parts
                .next()
                .ok_or_else(|| Error::malformed(FMT, format!("line {lineno}: missing {what}")))?
                .parse::<usize>()
                .map_err(|e| Error::malformed(FMT, format!("line {lineno}: bad {what}: {e}")))
        };
        match tag {
            "c" => continue,
            "p" => {
                if header.is_some() {
                    return Err(Error::malformed(FMT, format!("line {lineno}: second header")));
                }
                let v = number("vertex count")?;
                let e = number("arc count")?;
                if v > u32::MAX as usize {
                    return Err(Error::malformed(FMT, "vertex count too large"));
                }
                header = Some((v, e));
            }
            "e" => {
                let Some((v, _)) = header else {
                    return Err(Error::malformed(FMT, format!("line {lineno}: arc before header")));
                };
                let src = number("source")?;
                let dst = number("target")?;
                if src == 0 || dst == 0 || src > v || dst > v {
                    return Err(Error::malformed(
                        FMT,
                        format!("line {lineno}: endpoint outside 1..={v}"),
                    ));
                }
                arcs.push(((src - 1) as u32, (dst - 1) as u32));
            }
            other => {
                return Err(Error::malformed(
                    FMT,
                    format!("line {lineno}: unknown record '{other}'"),
                ))
            }
        }
        if parts.next().is_some() {
            return Err(Error::malformed(FMT, format!("line {lineno}: trailing fields")));
        }
    }
    let (vertices, expected) = header.ok_or_else(|| Error::malformed(FMT, "missing header"))?;
    if arcs.len() != expected {
        return Err(Error::malformed(
            FMT,
            format!("header announces {expected} arcs, found {}", arcs.len()),
        ));
    }
    Ok(ArcList { vertices, arcs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::example_one;

    #[test]
    fn example_one_vertices() {
        let (cache, demand) = example_one();
        let g = ConflictGraph::build(&cache, &demand).unwrap();
        assert_eq!(g.len(), 6);
        let labels: Vec<(u32, u32, u32)> = g
            .vertices()
            .iter()
            .map(|v| (v.user, v.packet.file, v.packet.index))
            .collect();
        assert_eq!(
            labels,
            vec![(0, 0, 1), (0, 0, 2), (1, 0, 0), (1, 0, 2), (2, 1, 0), (2, 1, 1)]
        );
        // A3 requested by users 1 and 2 never conflicts with itself.
        assert!(!g.is_adjacent(1, 3));
        // User 2 caches A2 and user 1 caches A1.
        assert!(!g.is_adjacent(0, 2));
        assert_eq!(g.closed_out_neighborhood(2).unwrap(), vec![1, 2, 3, 4]);
        assert_eq!(g.closed_out_neighborhood(4).unwrap(), vec![0, 2, 4, 5]);
        assert!(g.closed_out_neighborhood(6).is_err());
    }

    #[test]
    fn single_and_shared_packets() {
        let cache = CacheRealization::empty(1, 1, 1);
        let demand = DemandRealization::new(vec![vec![0]], &cache).unwrap();
        let g = ConflictGraph::build(&cache, &demand).unwrap();
        assert_eq!((g.len(), g.arc_count()), (1, 0));
        assert_eq!(g.closed_out_neighborhood(0).unwrap(), vec![0]);

        let cache = CacheRealization::empty(2, 1, 1);
        let demand = DemandRealization::new(vec![vec![0], vec![0]], &cache).unwrap();
        let g = ConflictGraph::build(&cache, &demand).unwrap();
        assert_eq!((g.len(), g.arc_count(), g.edge_count()), (2, 0, 0));
        assert_eq!(g.k_size(0), 2);
    }

    #[test]
    fn rejects_mismatched_inputs() {
        let cache = CacheRealization::empty(2, 2, 2);
        let other = CacheRealization::empty(3, 2, 2);
        let demand = DemandRealization::new(vec![vec![0], vec![1], vec![0]], &other).unwrap();
        assert!(ConflictGraph::build(&cache, &demand).is_err());
    }

    #[test]
    fn dimacs_round_trip() {
        let (cache, demand) = example_one();
        let g = ConflictGraph::build(&cache, &demand).unwrap();
        let mut buf = Vec::new();
        g.write_dimacs(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let parsed = parse_dimacs(&text).unwrap();
        assert_eq!(parsed.vertices, 6);
        assert_eq!(parsed.arcs.len(), g.arc_count());
        assert!(parsed.arcs.iter().all(|&(a, b)| g.has_arc(a, b)));
    }

    #[test]
    fn dimacs_rejects_garbage() {
        assert!(parse_dimacs("").is_err());
        assert!(parse_dimacs("e 1 2\n").is_err());
        assert!(parse_dimacs("p 2 1\ne 1 3\n").is_err());
        assert!(parse_dimacs("p 2 2\ne 1 2\n").is_err());
        assert!(parse_dimacs("p 2 1\ne 1 2 3\n").is_err());
        assert!(parse_dimacs("c hi\np 2 1\ne 2 1\n").is_ok());
    }
}
