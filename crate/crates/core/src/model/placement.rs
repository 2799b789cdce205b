use std::fmt;

use fixedbitset::FixedBitSet;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::NetworkConfig;

/// A packet of the library: `(file, index)`, both zero-based.
///
/// Ordering is lexicographic on `(file, index)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PacketId {
    pub file: u32,
    pub index: u32,
}

impl PacketId {
    pub fn new(file: usize, index: usize) -> Self {
        PacketId {
            file: file as u32,
            index: index as u32,
        }
    }

    /// Dense library-wide id, `file * packets + index`.
    pub fn global(self, packets: usize) -> usize {
        self.file as usize * packets + self.index as usize
    }

    pub fn from_global(id: usize, packets: usize) -> Self {
        PacketId::new(id / packets, id % packets)
    }
}

impl fmt::Display for PacketId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}p{}", self.file, self.index)
    }
}

/// Packet-level cache contents of every user.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheRealization {
    m: usize,
    packets: usize,
    cached: Vec<FixedBitSet>,
}

impl CacheRealization {
    /// Empty caches for `n` users.
    pub fn empty(n: usize, m: usize, packets: usize) -> Self {
        CacheRealization {
            m,
            packets,
            cached: vec![FixedBitSet::with_capacity(m * packets); n],
        }
    }

    /// Builds caches from explicit `sets[u][f]` packet-index lists.
    pub fn from_sets(m: usize, packets: usize, sets: &[Vec<Vec<usize>>]) -> Result<Self> {
        let mut cache = Self::empty(sets.len(), m, packets);
        for (u, files) in sets.iter().enumerate() {
            if files.len() != m {
                return Err(Error::input(format!(
                    "user {u} lists {} files, expected {m}",
                    files.len()
                )));
            }
            for (f, idxs) in files.iter().enumerate() {
                for &i in idxs {
                    if i >= packets {
                        return Err(Error::input(format!(
                            "packet index {i} of file {f} exceeds B = {packets}"
                        )));
                    }
                    cache.insert(u, PacketId::new(f, i));
                }
            }
        }
        Ok(cache)
    }

    fn insert(&mut self, user: usize, packet: PacketId) {
        let id = packet.global(self.packets);
        self.cached[user].insert(id);
    }

    pub fn n(&self) -> usize {
        self.cached.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn packets(&self) -> usize {
        self.packets
    }

    pub fn contains(&self, user: usize, packet: PacketId) -> bool {
        self.cached[user].contains(packet.global(self.packets))
    }

    pub fn contains_global(&self, user: usize, global: usize) -> bool {
        self.cached[user].contains(global)
    }

    /// Cached packet indices of `file` at `user`, ascending.
    pub fn cached_in_file(&self, user: usize, file: usize) -> impl Iterator<Item = usize> + '_ {
        let base = file * self.packets;
        (0..self.packets).filter(move |i| self.cached[user].contains(base + i))
    }

    pub fn count(&self, user: usize, file: usize) -> usize {
        self.cached_in_file(user, file).count()
    }

    /// Total packets cached by `user`.
    pub fn total(&self, user: usize) -> usize {
        self.cached[user].count_ones(..)
    }

    pub(crate) fn bitsets(&self) -> &[FixedBitSet] {
        &self.cached
    }
}

/// Largest-remainder apportionment of real-valued targets to integers summing
/// to `round(sum(targets))`. Ties on the remainder go to the lower index.
pub fn apportion(targets: &[f64]) -> Vec<usize> {
    let total = targets.iter().sum::<f64>().round() as usize;
    let mut counts: Vec<usize> = targets.iter().map(|t| t.max(0.0).floor() as usize).collect();
    let assigned: usize = counts.iter().sum();
    let mut order: Vec<usize> = (0..targets.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = targets[a] - targets[a].floor();
        let rb = targets[b] - targets[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for &i in order.iter().take(total.saturating_sub(assigned)) {
        counts[i] += 1;
    }
    counts
}

/// Random popularity-based placement: user `u` caches `p[u][f] * M_u * B`
/// (apportioned) distinct packets of each file `f`, uniformly at random.
pub fn rap_place(config: &NetworkConfig, seed: u64) -> Result<CacheRealization> {
    let (n, m, b) = (config.n(), config.m(), config.packets());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cache = CacheRealization::empty(n, m, b);
    for u in 0..n {
        let budget = config.cache_size(u) * b as f64;
        if budget <= 0.0 {
            continue;
        }
        let targets: Vec<f64> = config.caching_row(u).iter().map(|p| p * budget).collect();
        let counts = apportion(&targets);
        for (f, &count) in counts.iter().enumerate() {
            if count > b {
                return Err(Error::config(format!(
                    "user {u} would cache {count} packets of file {f} but B = {b}"
                )));
            }
            for i in index::sample(&mut rng, b, count) {
                cache.insert(u, PacketId::new(f, i));
            }
        }
    }
    Ok(cache)
}

/// Files of `user` ordered by decreasing popularity, ties to the lower index.
pub fn popularity_order(config: &NetworkConfig, user: usize) -> Vec<usize> {
    let row = config.demand_row(user);
    let mut order: Vec<usize> = (0..config.m()).collect();
    order.sort_by(|&a, &b| row[b].total_cmp(&row[a]).then(a.cmp(&b)));
    order
}

/// Least-frequently-used steady state: each user holds its `floor(M_u)` most popular files whole.
pub fn lfu_place(config: &NetworkConfig) -> CacheRealization {
    let (n, m, b) = (config.n(), config.m(), config.packets());
    let mut cache = CacheRealization::empty(n, m, b);
    for u in 0..n {
        let whole = config.cache_size(u).floor() as usize;
        for &f in popularity_order(config, u).iter().take(whole) {
            for i in 0..b {
                cache.insert(u, PacketId::new(f, i));
            }
        }
    }
    cache
}
