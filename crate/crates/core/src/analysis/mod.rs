//! Limiting (`B -> infinity`) rate expressions for random caching with
//! greedy constrained local coloring, and the LFU baseline.

mod psi;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::model::{popularity_order, NetworkConfig};

pub use psi::{
    psi_heterogeneous, psi_homogeneous, rho_homogeneous, Exponent, PsiEstimate, PsiOptions,
    EXACT_SUBSET_LIMIT,
};

/// Request counts sorted in decreasing order, with the users active in each request layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RequestProfile {
    sorted: Vec<usize>,
    layers: Vec<Vec<usize>>,
}

impl RequestProfile {
    pub fn new(requests: &[usize]) -> Self {
        let mut sorted = requests.to_vec();
        sorted.sort_unstable_by(|a, b| b.cmp(a));
        let max = sorted.first().copied().unwrap_or(0);
        let layers = (1..=max)
            .map(|j| (0..requests.len()).filter(|&u| requests[u] >= j).collect())
            .collect();
        RequestProfile { sorted, layers }
    }

    /// `L_[1] >= L_[2] >= ... >= L_[n]`.
    pub fn sorted(&self) -> &[usize] {
        &self.sorted
    }

    pub fn max_requests(&self) -> usize {
        self.layers.len()
    }

    /// `n_j`, the number of users with at least `j` requests (`j >= 1`).
    pub fn n_j(&self, j: usize) -> usize {
        self.layers[j - 1].len()
    }

    /// `U_{n_j}`, ascending.
    pub fn users(&self, j: usize) -> &[usize] {
        &self.layers[j - 1]
    }
}

// P(file f is requested by at least one user).
fn request_probability(config: &NetworkConfig, f: usize) -> f64 {
    let miss: f64 = (0..config.n())
        .map(|u| (1.0 - config.q(u, f)).powi(config.request_count(u) as i32))
        .product();
    1.0 - miss
}

/// `m_bar`: expected number of distinct requested files.
pub fn m_bar(config: &NetworkConfig) -> f64 {
    (0..config.m()).map(|f| request_probability(config, f)).sum()
}

/// `M_bar = sum_f min_u p_{f,u} (1 - prod_u (1 - q_{f,u})^{L_u})`.
#[allow(non_snake_case)]
pub fn M_bar(config: &NetworkConfig) -> f64 {
    (0..config.m())
        .map(|f| {
            let p_min = (0..config.n())
                .map(|u| config.p(u, f))
                .fold(f64::INFINITY, f64::min);
            p_min * request_probability(config, f)
        })
        .sum()
}

/// Expected LFU rate: each user holds its `floor(M_u)` most popular files,
/// and every requested file missing from some requester's cache is sent once.
pub fn lfu_rate(config: &NetworkConfig) -> f64 {
    let (n, m) = (config.n(), config.m());
    let mut cached = vec![vec![false; m]; n];
    for (u, row) in cached.iter_mut().enumerate() {
        let whole = config.cache_size(u).floor() as usize;
        for &f in popularity_order(config, u).iter().take(whole) {
            row[f] = true;
        }
    }
    (0..m)
        .map(|f| {
            let miss: f64 = (0..n)
                .filter(|&u| !cached[u][f])
                .map(|u| (1.0 - config.q(u, f)).powi(config.request_count(u) as i32))
                .product();
            1.0 - miss
        })
        .sum()
}

/// `R^GCLC = min{psi, m_bar - M_bar}` with its ingredients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateBound {
    pub psi: f64,
    pub psi_stderr: f64,
    pub m_bar: f64,
    #[serde(rename = "M_bar")]
    pub big_m_bar: f64,
    pub r_gclc: f64,
}

impl RateBound {
    fn assemble(psi: PsiEstimate, m_bar: f64, big_m_bar: f64) -> Self {
        RateBound {
            psi: psi.value,
            psi_stderr: psi.stderr,
            m_bar,
            big_m_bar,
            r_gclc: psi.value.min(m_bar - big_m_bar),
        }
    }
}

/// Achievable-rate bound; closed form for psi on homogeneous networks.
pub fn rate_bound(config: &NetworkConfig, opts: PsiOptions) -> Result<RateBound> {
    let psi = if config.is_homogeneous() && config.n() > 0 {
        PsiEstimate {
            value: psi_homogeneous(
                config.caching_row(0),
                config.demand_row(0),
                config.cache_size(0),
                config.request_count(0),
                config.n(),
            ),
            stderr: 0.0,
            exact: true,
        }
    } else {
        psi_heterogeneous(config, opts)?
    };
    Ok(RateBound::assemble(psi, m_bar(config), M_bar(config)))
}

/// JSON report of the `analyze` command.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub m_bar: f64,
    #[serde(rename = "M_bar")]
    pub big_m_bar: f64,
    pub psi: f64,
    pub psi_stderr: f64,
    pub r_gclc: f64,
    pub r_lfu: f64,
}

pub fn analyze(config: &NetworkConfig, opts: PsiOptions) -> Result<AnalysisReport> {
    let bound = rate_bound(config, opts)?;
    Ok(AnalysisReport {
        m_bar: bound.m_bar,
        big_m_bar: bound.big_m_bar,
        psi: bound.psi,
        psi_stderr: bound.psi_stderr,
        r_gclc: bound.r_gclc,
        r_lfu: lfu_rate(config),
    })
}

/// Best truncated-uniform caching distribution on a homogeneous network.
#[derive(Debug, Clone, PartialEq)]
pub struct CachingChoice {
    /// Number of most popular files receiving mass `1 / m_tilde`.
    pub m_tilde: usize,
    pub p: Vec<f64>,
    pub bound: RateBound,
}

/// Sweeps `m_tilde` from `m` down to `ceil(M)` (smaller values violate
/// `p <= 1/M`) and keeps the smallest homogeneous bound, ties to the larger `m_tilde`.
pub fn optimize_caching_distribution(config: &NetworkConfig) -> Result<CachingChoice> {
    let m = config.m();
    let lo = (config.cache_size(0).ceil() as usize).max(1);
    let order = popularity_order(config, 0);
    let mut best: Option<CachingChoice> = None;
    for m_tilde in (lo..=m).rev() {
        let mut p = vec![0.0; m];
        for &f in &order[..m_tilde] {
            p[f] = 1.0 / m_tilde as f64;
        }
        let candidate = config.clone().with_caching(vec![p.clone(); config.n()])?;
        let bound = rate_bound(&candidate, PsiOptions::default())?;
        if best.as_ref().is_none_or(|b| bound.r_gclc < b.bound.r_gclc) {
            best = Some(CachingChoice { m_tilde, p, bound });
        }
    }
    best.ok_or_else(|| crate::error::Error::config("no admissible caching distribution"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single_user(q: Vec<f64>, p: Vec<f64>, cache: f64) -> NetworkConfig {
        NetworkConfig::explicit(1, vec![cache], vec![1], vec![q], vec![p]).unwrap()
    }

    #[test]
    fn profile_layers() {
        let prof = RequestProfile::new(&[2, 5, 1, 5]);
        assert_eq!(prof.sorted(), &[5, 5, 2, 1]);
        assert_eq!(prof.max_requests(), 5);
        assert_eq!((prof.n_j(1), prof.n_j(2), prof.n_j(3)), (4, 3, 2));
        assert_eq!(prof.users(3), &[1, 3]);
    }

    #[test]
    fn point_mass_demand() {
        let cfg = single_user(vec![1.0, 0.0], vec![0.3, 0.7], 1.0);
        assert_eq!(m_bar(&cfg), 1.0);
        assert!((M_bar(&cfg) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn homogeneous_m_bar_matches_corollary() {
        let cfg = NetworkConfig::homogeneous(10, 4, 1, 2.0, 3, 0.0).unwrap();
        let expected = 10.0 * (1.0 - (1.0 - 0.1f64).powi(12));
        assert!((m_bar(&cfg) - expected).abs() < 1e-12);
    }

    #[test]
    fn lfu_trivial_cases() {
        let full = NetworkConfig::homogeneous(5, 3, 1, 5.0, 2, 0.6).unwrap();
        assert_eq!(lfu_rate(&full), 0.0);
        let cfg = single_user(vec![1.0, 0.0, 0.0], vec![1.0 / 3.0; 3], 0.0);
        assert_eq!(lfu_rate(&cfg), 1.0);
    }

    #[test]
    fn zero_cache_psi_is_total_requests() {
        let q = vec![vec![0.5, 0.25, 0.25], vec![0.1, 0.1, 0.8], vec![0.2, 0.3, 0.5]];
        let p = vec![vec![1.0 / 3.0; 3]; 3];
        let cfg = NetworkConfig::explicit(2, vec![0.0; 3], vec![2, 1, 3], q, p).unwrap();
        let psi = psi_heterogeneous(&cfg, PsiOptions::default()).unwrap();
        assert!(psi.exact);
        assert!((psi.value - 6.0).abs() < 1e-12);
    }

    #[test]
    fn heterogeneous_reduces_to_homogeneous() {
        for (n, l, cache, gamma) in [(5, 1, 5.0, 0.4), (4, 2, 2.5, 1.1), (6, 3, 1.0, 0.0)] {
            let cfg = NetworkConfig::homogeneous(12, n, 1, cache, l, gamma).unwrap();
            let zipf = cfg.demand_row(0).to_vec();
            // Skewed caching so the argmax is not a pure tie.
            let mut p: Vec<f64> = (0..12).map(|f| 1.0 / (f as f64 + 3.0)).collect();
            let total: f64 = p.iter().sum();
            p.iter_mut().for_each(|x| *x /= total);
            assert!(p[0] * cache <= 1.0);
            let cfg = cfg.with_caching(vec![p.clone(); n]).unwrap();
            let het = psi_heterogeneous(&cfg, PsiOptions::default()).unwrap().value;
            let hom = psi_homogeneous(&p, &zipf, cache, l, n);
            assert!((het - hom).abs() < 1e-9 * hom.max(1.0), "{het} vs {hom}");
        }
    }

    #[test]
    fn sampled_subsets_track_enumeration() {
        let n = 18;
        let cfg = NetworkConfig::homogeneous(8, n, 1, 2.0, 1, 0.8).unwrap();
        let exact = psi_homogeneous(cfg.caching_row(0), cfg.demand_row(0), 2.0, 1, n);
        let est = psi_heterogeneous(
            &cfg,
            PsiOptions {
                samples: 20,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(!est.exact);
        // Every subset of a homogeneous network has the same value, so sampling is exact too.
        assert!((est.value - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn zero_samples_rejected() {
        let cfg = NetworkConfig::homogeneous(4, 2, 1, 1.0, 1, 0.5).unwrap();
        assert!(psi_heterogeneous(
            &cfg,
            PsiOptions {
                samples: 0,
                ..Default::default()
            }
        )
        .is_err());
    }

    #[test]
    fn r_gclc_is_the_minimum() {
        let cfg = NetworkConfig::homogeneous(20, 5, 1, 5.0, 1, 0.4).unwrap();
        let b = rate_bound(&cfg, PsiOptions::default()).unwrap();
        assert_eq!(b.r_gclc, b.psi.min(b.m_bar - b.big_m_bar));
        assert!(b.r_gclc <= b.psi && b.r_gclc <= b.m_bar - b.big_m_bar && b.r_gclc >= 0.0);
        assert!(b.m_bar <= 20.0);
    }

    #[test]
    fn optimizer_trivial_cases() {
        let uniform = NetworkConfig::homogeneous(10, 4, 1, 2.0, 1, 0.0).unwrap();
        assert_eq!(optimize_caching_distribution(&uniform).unwrap().m_tilde, 10);
        let mut q = vec![0.0; 6];
        q[0] = 1.0;
        let point = NetworkConfig::explicit(
            1,
            vec![1.0; 3],
            vec![1; 3],
            vec![q; 3],
            vec![vec![1.0 / 6.0; 6]; 3],
        )
        .unwrap();
        let choice = optimize_caching_distribution(&point).unwrap();
        assert_eq!(choice.m_tilde, 1);
        assert_eq!(choice.bound.r_gclc, 0.0);
    }

    #[test]
    fn optimizer_beats_uniform() {
        let cfg = NetworkConfig::homogeneous(100, 10, 1, 10.0, 1, 0.4).unwrap();
        let uniform = rate_bound(&cfg, PsiOptions::default()).unwrap();
        let best = optimize_caching_distribution(&cfg).unwrap();
        assert!(best.bound.r_gclc <= uniform.r_gclc);
    }
}
