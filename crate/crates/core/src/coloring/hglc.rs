//! Hierarchical greedy local coloring.
//!
//! Vertices are processed by hierarchy `i = n, n-1, ..., 1`, where a vertex
//! starts at hierarchy `|K_v|`, the number of users that request or cache its
//! packet. At hierarchy `i` the algorithm first colors independent sets of
//! exactly `i` vertices with `|K_v| = i`, then repeatedly grows independent
//! sets from randomly drawn seeds, keeping a set if it reaches size `i` and
//! otherwise pushing the seed down to hierarchy `i - 1`. At hierarchy 1 every
//! set qualifies, so every vertex ends up colored. The result is then
//! polished with [`local_search`](super::local_search).
//!
//! Draws are restricted to windows over `|K_v|`: seeds come from the
//! vertices whose `|K_v|` lies within `min + floor(a * (max - min))` of the
//! smallest value still waiting at this hierarchy, and candidates similarly
//! with fraction `b`, taken over the waiting vertices that are still
//! non-adjacent to every member of the growing set.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coloring::local_search::local_search_unchecked;
use crate::coloring::{better, gclc2, Algorithm, Coloring, ColoringOutcome};
use crate::error::{Error, Result};
use crate::graph::{ConflictGraph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HglcParams {
    /// Width of the seed window, as a fraction of the `|K_v|` spread.
    pub a: f64,
    /// Width of the candidate window.
    pub b: f64,
}

impl Default for HglcParams {
    fn default() -> Self {
        HglcParams { a: 0.25, b: 0.25 }
    }
}

impl HglcParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        let params = HglcParams { a, b };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, x) in [("a", self.a), ("b", self.b)] {
            if !(0.0..=1.0).contains(&x) {
                return Err(Error::config(format!("{name} = {x} outside [0, 1]")));
            }
        }
        Ok(())
    }
}

/// Vertices bucketed by `|K_v|` with O(1) removal and window sampling.
struct KBuckets {
    buckets: Vec<Vec<VertexId>>,
    slot: Vec<u32>,
    lo: usize,
    hi: usize,
    len: usize,
}

impl KBuckets {
    fn new(max_k: usize, vertices: usize) -> Self {
        KBuckets {
            buckets: vec![Vec::new(); max_k + 1],
            slot: vec![u32::MAX; vertices],
            lo: max_k + 1,
            hi: 0,
            len: 0,
        }
    }

    fn clear(&mut self) {
        for k in self.lo..=self.hi.min(self.buckets.len() - 1) {
            for &v in &self.buckets[k] {
                self.slot[v as usize] = u32::MAX;
            }
            self.buckets[k].clear();
        }
        self.lo = self.buckets.len();
        self.hi = 0;
        self.len = 0;
    }

    fn insert(&mut self, v: VertexId, k: usize) {
        self.slot[v as usize] = self.buckets[k].len() as u32;
        self.buckets[k].push(v);
        self.lo = self.lo.min(k);
        self.hi = self.hi.max(k);
        self.len += 1;
    }

    fn contains(&self, v: VertexId) -> bool {
        self.slot[v as usize] != u32::MAX
    }

    fn remove(&mut self, v: VertexId, k: usize) {
        let at = self.slot[v as usize] as usize;
        let bucket = &mut self.buckets[k];
        bucket.swap_remove(at);
        if let Some(&moved) = bucket.get(at) {
            self.slot[moved as usize] = at as u32;
        }
        self.slot[v as usize] = u32::MAX;
        self.len -= 1;
    }

    fn tighten(&mut self) {
        while self.lo <= self.hi && self.buckets[self.lo].is_empty() {
            self.lo += 1;
        }
        while self.hi > self.lo && self.buckets[self.hi].is_empty() {
            self.hi -= 1;
        }
    }

    /// Removes and returns a uniform draw from the window
    /// `[min, min + floor(frac * (max - min))]` of occupied `|K|` values.
    fn take_from_window<R: Rng>(&mut self, frac: f64, rng: &mut R) -> Option<(VertexId, usize)> {
        if self.len == 0 {
            return None;
        }
        self.tighten();
        let top = self.lo + (frac * (self.hi - self.lo) as f64).floor() as usize;
        let total: usize = self.buckets[self.lo..=top].iter().map(Vec::len).sum();
        let mut pick = rng.gen_range(0..total);
        for k in self.lo..=top {
            let size = self.buckets[k].len();
            if pick < size {
                let v = self.buckets[k][pick];
                self.remove(v, k);
                return Some((v, k));
            }
            pick -= size;
        }
        unreachable!("window total covers the pick")
    }
}

/// [`KBuckets::take_from_window`] over an unindexed list.
fn take_flat<R: Rng>(pool: &mut Vec<(VertexId, usize)>, frac: f64, rng: &mut R) -> Option<VertexId> {
    let lo = pool.iter().map(|p| p.1).min()?;
    let hi = pool.iter().map(|p| p.1).max()?;
    let top = lo + (frac * (hi - lo) as f64).floor() as usize;
    let total = pool.iter().filter(|p| p.1 <= top).count();
    let pick = rng.gen_range(0..total);
    let at = pool
        .iter()
        .enumerate()
        .filter(|(_, p)| p.1 <= top)
        .nth(pick)
        .map(|(at, _)| at)?;
    Some(pool.swap_remove(at).0)
}

/// Hierarchical greedy local coloring, variant 1. Deterministic given `seed`.
pub fn hglc1(g: &ConflictGraph, params: HglcParams, seed: u64) -> ColoringOutcome {
    const NONE: u32 = u32::MAX;
    let n = g.n_users();
    let size = g.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k: Vec<usize> = (0..size as VertexId).map(|v| g.k_size(v)).collect();
    let max_k = k.iter().copied().max().unwrap_or(0).max(n);
    let mut level = k.clone();
    let mut color = vec![NONE; size];
    let mut next = 0u32;
    let mut class: Vec<VertexId> = Vec::new();
    let mut waiting = KBuckets::new(max_k, size);
    let mut pool: Vec<(VertexId, usize)> = Vec::new();
    let mut mark = vec![0u32; size];
    let mut stamp = 0u32;

    let independent = |class: &[VertexId], w: VertexId| class.iter().all(|&x| !g.is_adjacent(w, x));

    for i in (1..=n).rev() {
        for v in 0..size {
            if color[v] == NONE && level[v] > i {
                level[v] = i;
            }
        }

        // Exact-size sets among vertices native to this hierarchy.
        for v in 0..size as VertexId {
            if color[v as usize] != NONE || k[v as usize] != i {
                continue;
            }
            class.clear();
            class.push(v);
            for &w in g.compatible(v) {
                if class.len() == i {
                    break;
                }
                if color[w as usize] == NONE && k[w as usize] == i && independent(&class[1..], w) {
                    class.push(w);
                }
            }
            if class.len() == i {
                for &x in &class {
                    color[x as usize] = next;
                }
                next += 1;
            }
        }

        // Randomized growth over everything still waiting here.
        waiting.clear();
        for v in 0..size {
            if color[v] == NONE && level[v] == i {
                waiting.insert(v as VertexId, k[v]);
            }
        }
        while let Some((v, _)) = waiting.take_from_window(params.a, &mut rng) {
            pool.clear();
            pool.extend(
                g.compatible(v)
                    .iter()
                    .filter(|&&w| waiting.contains(w))
                    .map(|&w| (w, k[w as usize])),
            );
            class.clear();
            class.push(v);
            // The pool only ever holds vertices that can still join the class,
            // so the set fails as soon as it cannot reach size i.
            while class.len() + pool.len() >= i {
                let Some(w) = take_flat(&mut pool, params.b, &mut rng) else {
                    break;
                };
                class.push(w);
                stamp += 1;
                for &x in g.compatible(w) {
                    mark[x as usize] = stamp;
                }
                pool.retain(|&(x, _)| mark[x as usize] == stamp);
            }
            if class.len() >= i {
                for &x in &class {
                    color[x as usize] = next;
                    if x != v {
                        waiting.remove(x, k[x as usize]);
                    }
                }
                next += 1;
            } else {
                debug_assert!(i > 1, "singletons always qualify at hierarchy 1");
                level[v as usize] = i - 1;
            }
        }
    }
    debug_assert!(color.iter().all(|&c| c != NONE));

    let greedy = ColoringOutcome::evaluate(g, Coloring::new(color), Algorithm::Hglc1);
    let polished = local_search_unchecked(g, &greedy.coloring);
    let polished = ColoringOutcome::evaluate(g, polished, Algorithm::Hglc1);
    if polished.local_number <= greedy.local_number {
        polished
    } else {
        greedy
    }
}

/// The better of [`hglc1`] and the per-packet coloring by local number, ties to variant 1.
pub fn hglc(g: &ConflictGraph, params: HglcParams, seed: u64) -> ColoringOutcome {
    better(hglc1(g, params, seed), gclc2(g))
}
