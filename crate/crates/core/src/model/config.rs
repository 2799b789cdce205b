use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SIMPLEX_TOL: f64 = 1e-9;

/// Normalized Zipf popularity over `m` files: `q_f = f^-gamma / sum_j j^-gamma`.
pub fn zipf_distribution(m: usize, gamma: f64) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::config("zipf distribution needs at least one file"));
    }
    if gamma.is_nan() || gamma < 0.0 || gamma.is_infinite() {
        return Err(Error::config(format!("zipf exponent must be >= 0, got {gamma}")));
    }
    let weights: Vec<f64> = (1..=m).map(|f| (f as f64).powf(-gamma)).collect();
    // Smallest terms first keeps the normalizer accurate for large m.
    let total: f64 = weights.iter().rev().sum();
    Ok(weights.into_iter().map(|w| w / total).collect())
}

/// How per-user demand rows are specified in a config document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DemandModel {
    Named(NamedDemand),
    Matrix(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedDemand {
    Zipf { gamma: f64 },
}

/// How per-user caching distributions are specified in a config document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CachingModel {
    Named(NamedCaching),
    Matrix(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NamedCaching {
    Uniform,
}

/// A per-user vector that may be written as a single scalar for homogeneous networks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerUser<T> {
    Same(T),
    Each(Vec<T>),
}

impl<T: Clone> PerUser<T> {
    fn expand(&self, n: usize, field: &str) -> Result<Vec<T>> {
        match self {
            PerUser::Same(v) => Ok(vec![v.clone(); n]),
            PerUser::Each(vs) if vs.len() == n => Ok(vs.clone()),
            PerUser::Each(vs) => Err(Error::config(format!(
                "{field} has {} entries but n = {n}",
                vs.len()
            ))),
        }
    }
}

/// On-disk form of a [`NetworkConfig`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkConfigFile {
    pub m: usize,
    pub n: usize,
    #[serde(rename = "B")]
    pub packets: usize,
    #[serde(rename = "M")]
    pub cache_sizes: PerUser<f64>,
    #[serde(rename = "L")]
    pub requests: PerUser<usize>,
    #[serde(rename = "Q")]
    pub demand: DemandModel,
    #[serde(rename = "P", default = "default_caching")]
    pub caching: CachingModel,
    #[serde(default)]
    pub seed: u64,
}

fn default_caching() -> CachingModel {
    CachingModel::Named(NamedCaching::Uniform)
}

/// Validated network: library size, packetization, caches, request counts,
/// demand matrix and caching distribution (both dense, one row per user).
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    m: usize,
    n: usize,
    packets: usize,
    cache_sizes: Vec<f64>,
    requests: Vec<usize>,
    demand: Vec<f64>,
    caching: Vec<f64>,
    demand_model: DemandModel,
    caching_model: CachingModel,
    seed: u64,
}

impl NetworkConfig {
    pub fn from_file(file: NetworkConfigFile) -> Result<Self> {
        let NetworkConfigFile {
            m,
            n,
            packets,
            cache_sizes,
            requests,
            demand,
            caching,
            seed,
        } = file;
        if m == 0 {
            return Err(Error::config("m must be at least 1"));
        }
        if n == 0 {
            return Err(Error::config("n must be at least 1"));
        }
        if packets == 0 {
            return Err(Error::config("B must be at least 1"));
        }
        let cache_sizes = cache_sizes.expand(n, "M")?;
        let requests = requests.expand(n, "L")?;

        let q = match &demand {
            DemandModel::Named(NamedDemand::Zipf { gamma }) => zipf_distribution(m, *gamma)?.repeat(n),
            DemandModel::Matrix(rows) => flatten_rows(rows, n, m, "Q")?,
        };
        let p = match &caching {
            CachingModel::Named(NamedCaching::Uniform) => vec![1.0 / m as f64; n * m],
            CachingModel::Matrix(rows) => flatten_rows(rows, n, m, "P")?,
        };

        let cfg = NetworkConfig {
            m,
            n,
            packets,
            cache_sizes,
            requests,
            demand: q,
            caching: p,
            demand_model: demand,
            caching_model: caching,
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Homogeneous network: shared Zipf demand, uniform caching, equal caches and request counts.
    pub fn homogeneous(
        m: usize,
        n: usize,
        packets: usize,
        cache_size: f64,
        requests: usize,
        gamma: f64,
    ) -> Result<Self> {
        Self::from_file(NetworkConfigFile {
            m,
            n,
            packets,
            cache_sizes: PerUser::Same(cache_size),
            requests: PerUser::Same(requests),
            demand: DemandModel::Named(NamedDemand::Zipf { gamma }),
            caching: CachingModel::Named(NamedCaching::Uniform),
            seed: 0,
        })
    }

    /// Fully explicit heterogeneous network.
    pub fn explicit(
        packets: usize,
        cache_sizes: Vec<f64>,
        requests: Vec<usize>,
        demand: Vec<Vec<f64>>,
        caching: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let n = demand.len();
        let m = demand.first().map_or(0, Vec::len);
        Self::from_file(NetworkConfigFile {
            m,
            n,
            packets,
            cache_sizes: PerUser::Each(cache_sizes),
            requests: PerUser::Each(requests),
            demand: DemandModel::Matrix(demand),
            caching: CachingModel::Matrix(caching),
            seed: 0,
        })
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        Self::from_file(crate::error::parse_json(text)?)
    }

    pub fn to_file(&self) -> NetworkConfigFile {
        NetworkConfigFile {
            m: self.m,
            n: self.n,
            packets: self.packets,
            cache_sizes: PerUser::Each(self.cache_sizes.clone()),
            requests: PerUser::Each(self.requests.clone()),
            demand: self.demand_model.clone(),
            caching: self.caching_model.clone(),
            seed: self.seed,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("config serializes")
    }

    fn validate(&self) -> Result<()> {
        for u in 0..self.n {
            let l = self.requests[u];
            if l == 0 || l > self.m {
                return Err(Error::config(format!("L[{u}] = {l} outside [1, m = {}]", self.m)));
            }
            let cache = self.cache_sizes[u];
            if !(0.0..=self.m as f64).contains(&cache) {
                return Err(Error::config(format!(
                    "M[{u}] = {cache} outside [0, m = {}]",
                    self.m
                )));
            }
            check_simplex(self.demand_row(u), "Q", u)?;
            check_simplex(self.caching_row(u), "P", u)?;
            if cache > 0.0 {
                let cap = 1.0 / cache;
                if let Some(f) = self.caching_row(u).iter().position(|&p| p > cap + 1e-12) {
                    return Err(Error::config(format!(
                        "P[{u}][{f}] = {} exceeds 1/M_u = {cap}",
                        self.caching_row(u)[f]
                    )));
                }
            }
        }
        Ok(())
    }

    /// Number of files.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of users.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Packets per file.
    pub fn packets(&self) -> usize {
        self.packets
    }

    pub fn cache_size(&self, user: usize) -> f64 {
        self.cache_sizes[user]
    }

    pub fn cache_sizes(&self) -> &[f64] {
        &self.cache_sizes
    }

    pub fn request_count(&self, user: usize) -> usize {
        self.requests[user]
    }

    pub fn request_counts(&self) -> &[usize] {
        &self.requests
    }

    pub fn demand_row(&self, user: usize) -> &[f64] {
        &self.demand[user * self.m..(user + 1) * self.m]
    }

    pub fn caching_row(&self, user: usize) -> &[f64] {
        &self.caching[user * self.m..(user + 1) * self.m]
    }

    pub fn q(&self, user: usize, file: usize) -> f64 {
        self.demand[user * self.m + file]
    }

    pub fn p(&self, user: usize, file: usize) -> f64 {
        self.caching[user * self.m + file]
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn demand_model(&self) -> &DemandModel {
        &self.demand_model
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Replaces the caching distribution, re-validating the cap constraint.
    pub fn with_caching(mut self, rows: Vec<Vec<f64>>) -> Result<Self> {
        self.caching = flatten_rows(&rows, self.n, self.m, "P")?;
        self.caching_model = CachingModel::Matrix(rows);
        self.validate()?;
        Ok(self)
    }

    /// True when every user shares the same demand row, caching row, cache size and request count.
    pub fn is_homogeneous(&self) -> bool {
        (1..self.n).all(|u| {
            self.cache_sizes[u] == self.cache_sizes[0]
                && self.requests[u] == self.requests[0]
                && self.demand_row(u) == self.demand_row(0)
                && self.caching_row(u) == self.caching_row(0)
        })
    }
}

fn flatten_rows(rows: &[Vec<f64>], n: usize, m: usize, field: &str) -> Result<Vec<f64>> {
    if rows.len() != n {
        return Err(Error::config(format!(
            "{field} has {} rows but n = {n}",
            rows.len()
        )));
    }
    let mut out = Vec::with_capacity(n * m);
    for (u, row) in rows.iter().enumerate() {
        if row.len() != m {
            return Err(Error::config(format!(
                "{field}[{u}] has {} entries but m = {m}",
                row.len()
            )));
        }
        out.extend_from_slice(row);
    }
    Ok(out)
}

fn check_simplex(row: &[f64], field: &str, user: usize) -> Result<()> {
    if let Some(f) = row.iter().position(|x| !(0.0..=1.0).contains(x)) {
        return Err(Error::config(format!(
            "{field}[{user}][{f}] = {} outside [0, 1]",
            row[f]
        )));
    }
    let total: f64 = row.iter().sum();
    if (total - 1.0).abs() > SIMPLEX_TOL {
        return Err(Error::config(format!(
            "{field}[{user}] sums to {total}, expected 1"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zipf_trivial_cases() {
        assert_eq!(zipf_distribution(4, 0.0).unwrap(), vec![0.25; 4]);
        let q = zipf_distribution(2, 1.0).unwrap();
        assert!((q[0] - 2.0 / 3.0).abs() < 1e-15);
        assert!((q[1] - 1.0 / 3.0).abs() < 1e-15);
        assert!(zipf_distribution(0, 0.4).is_err());
        assert!(zipf_distribution(3, -1.0).is_err());
    }

    #[test]
    fn parses_named_models() {
        let cfg = NetworkConfig::from_json_str(
            r#"{"m": 5, "n": 2, "B": 4, "M": 1, "L": [1, 2],
                "Q": {"zipf": {"gamma": 0.4}}, "P": "uniform", "seed": 9}"#,
        )
        .unwrap();
        assert_eq!(cfg.n(), 2);
        assert_eq!(cfg.request_count(1), 2);
        assert_eq!(cfg.seed(), 9);
        assert!((cfg.p(1, 3) - 0.2).abs() < 1e-15);
        assert!(!cfg.is_homogeneous());
    }

    #[test]
    fn parses_explicit_matrices() {
        let cfg = NetworkConfig::from_json_str(
            r#"{"m": 2, "n": 1, "B": 3, "M": [1], "L": [1],
                "Q": [[1.0, 0.0]], "P": [[0.5, 0.5]]}"#,
        )
        .unwrap();
        assert_eq!(cfg.q(0, 0), 1.0);
        let back = NetworkConfig::from_json_str(&cfg.to_json_string()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_invalid_documents() {
        let cap = r#"{"m": 2, "n": 1, "B": 3, "M": [2], "L": [1],
                      "Q": [[0.5, 0.5]], "P": [[0.9, 0.1]]}"#;
        assert!(matches!(
            NetworkConfig::from_json_str(cap),
            Err(Error::InvalidConfig(_))
        ));
        let sum = r#"{"m": 2, "n": 1, "B": 3, "M": 0, "L": 1, "Q": [[0.5, 0.6]]}"#;
        assert!(NetworkConfig::from_json_str(sum).is_err());
        let too_many = r#"{"m": 2, "n": 1, "B": 3, "M": 0, "L": 3, "Q": [[0.5, 0.5]]}"#;
        assert!(NetworkConfig::from_json_str(too_many).is_err());
        let bad_type = r#"{"m": 2, "n": 1, "B": "x", "M": 0, "L": 1, "Q": [[0.5, 0.5]]}"#;
        match NetworkConfig::from_json_str(bad_type) {
            Err(Error::ConfigParse { path, line, .. }) => {
                assert_eq!(path, "B");
                assert_eq!(line, 1);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
