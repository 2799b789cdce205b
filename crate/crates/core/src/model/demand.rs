use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{CacheRealization, NetworkConfig, PacketId};

/// Draws `L_u` i.i.d. file requests per user from its demand row.
///
/// Repeated draws of the same file collapse into one request; each user's
/// list comes back sorted and distinct.
pub fn sample_requests(config: &NetworkConfig, seed: u64) -> Vec<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut shared: Option<(&[f64], WeightedIndex<f64>)> = None;
    (0..config.n())
        .map(|u| {
            let row = config.demand_row(u);
            let dist = match &shared {
                Some((r, d)) if *r == row => d.clone(),
                _ => {
                    let d = WeightedIndex::new(row).expect("validated demand row");
                    shared = Some((row, d.clone()));
                    d
                }
            };
            let mut files: Vec<usize> = (0..config.request_count(u))
                .map(|_| dist.sample(&mut rng))
                .collect();
            files.sort_unstable();
            files.dedup();
            files
        })
        .collect()
}

/// Samples requests and resolves the packets each user still needs under `cache`.
pub fn sample_demands(
    config: &NetworkConfig,
    cache: &CacheRealization,
    seed: u64,
) -> Result<DemandRealization> {
    DemandRealization::new(sample_requests(config, seed), cache)
}

/// Requested files per user together with the packets missing from its cache.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandRealization {
    requests: Vec<Vec<usize>>,
    needed: Vec<Vec<(usize, Vec<usize>)>>,
    packets: usize,
}

impl DemandRealization {
    /// `needed[u][f] = {all B packets of f} \ C[u][f]` for every requested `f`.
    pub fn new(requests: Vec<Vec<usize>>, cache: &CacheRealization) -> Result<Self> {
        if requests.len() != cache.n() {
            return Err(Error::input(format!(
                "{} request lists for {} cached users",
                requests.len(),
                cache.n()
            )));
        }
        let b = cache.packets();
        let mut normalized = Vec::with_capacity(requests.len());
        let mut needed = Vec::with_capacity(requests.len());
        for (u, mut files) in requests.into_iter().enumerate() {
            files.sort_unstable();
            files.dedup();
            if let Some(&f) = files.iter().find(|&&f| f >= cache.m()) {
                return Err(Error::input(format!(
                    "user {u} requests file {f} but m = {}",
                    cache.m()
                )));
            }
            let per_file = files
                .iter()
                .map(|&f| {
                    let missing = (0..b)
                        .filter(|&i| !cache.contains(u, PacketId::new(f, i)))
                        .collect();
                    (f, missing)
                })
                .collect();
            needed.push(per_file);
            normalized.push(files);
        }
        Ok(DemandRealization {
            requests: normalized,
            needed,
            packets: b,
        })
    }

    pub fn n(&self) -> usize {
        self.requests.len()
    }

    pub fn packets(&self) -> usize {
        self.packets
    }

    /// Distinct requested files of `user`, ascending.
    pub fn requests(&self, user: usize) -> &[usize] {
        &self.requests[user]
    }

    /// `(file, missing packet indices)` for each requested file of `user`.
    pub fn needed(&self, user: usize) -> &[(usize, Vec<usize>)] {
        &self.needed[user]
    }

    /// Missing packet indices of `file` at `user`, empty if not requested.
    pub fn needed_in_file(&self, user: usize, file: usize) -> &[usize] {
        self.needed[user]
            .iter()
            .find(|(f, _)| *f == file)
            .map_or(&[], |(_, idx)| idx.as_slice())
    }

    pub fn total_needed(&self) -> usize {
        self.needed
            .iter()
            .flat_map(|files| files.iter().map(|(_, idx)| idx.len()))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_mass_demand() {
        let cfg = NetworkConfig::explicit(
            2,
            vec![0.0],
            vec![1],
            vec![vec![1.0, 0.0, 0.0]],
            vec![vec![1.0 / 3.0; 3]],
        )
        .unwrap();
        for seed in 0..10 {
            assert_eq!(sample_requests(&cfg, seed), vec![vec![0]]);
        }
    }

    #[test]
    fn needed_excludes_cached() {
        let sets: Vec<Vec<Vec<usize>>> = (0..3).map(|u| vec![vec![u]; 3]).collect();
        let cache = CacheRealization::from_sets(3, 3, &sets).unwrap();
        let demand = DemandRealization::new(vec![vec![0], vec![0], vec![1]], &cache).unwrap();
        assert_eq!(demand.needed_in_file(0, 0), &[1, 2]);
        assert_eq!(demand.needed_in_file(1, 0), &[0, 2]);
        assert_eq!(demand.needed_in_file(2, 1), &[0, 1]);
        assert_eq!(demand.total_needed(), 6);
    }

    #[test]
    fn duplicates_collapse() {
        let cache = CacheRealization::empty(1, 4, 2);
        let demand = DemandRealization::new(vec![vec![3, 1, 3]], &cache).unwrap();
        assert_eq!(demand.requests(0), &[1, 3]);
        assert!(DemandRealization::new(vec![vec![4]], &cache).is_err());
        assert!(DemandRealization::new(vec![], &cache).is_err());
    }
}
