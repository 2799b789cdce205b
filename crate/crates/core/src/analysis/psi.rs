use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::analysis::RequestProfile;
use crate::error::{Error, Result};
use crate::model::NetworkConfig;

/// Largest `|U_{n_j}|` for which all user subsets are enumerated.
pub const EXACT_SUBSET_LIMIT: usize = 15;

/// Which user count enters the exponent of the winner criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Exponent {
    /// `n_j - l + 1`, as in the displayed formula.
    #[default]
    Subset,
    /// `n - l + 1`, as in the prose.
    Network,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiOptions {
    /// Subsets drawn per `(j, l)` when enumeration is too large.
    pub samples: usize,
    pub seed: u64,
    pub exponent: Exponent,
}

impl Default for PsiOptions {
    fn default() -> Self {
        PsiOptions {
            samples: 200,
            seed: 0,
            exponent: Exponent::Subset,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiEstimate {
    pub value: f64,
    /// Zero when every subset was enumerated.
    pub stderr: f64,
    pub exact: bool,
}

/// `x^(l-1) (1-x)^k` with `0^0 = 1`.
pub(crate) fn term(x: f64, l: usize, k: usize) -> f64 {
    x.powi(l as i32 - 1) * (1.0 - x).powi(k as i32)
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// One requestable `(file, user)` outcome.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Candidate {
    pub crit: f64,
    pub file: usize,
    pub user: usize,
    pub q: f64,
    pub weight: f64,
}

/// `E[weight(winner)]` when each of `users` users draws one candidate of its
/// own with probability `q`, and the winner maximizes `crit` with ties going
/// to the lower file, then the lower user.
pub(crate) fn winner_expectation(cands: &mut [Candidate], users: usize) -> f64 {
    const EMPTY: f64 = 1e-12;
    cands.sort_by(|a, b| {
        b.crit
            .total_cmp(&a.crit)
            .then(a.file.cmp(&b.file))
            .then(a.user.cmp(&b.user))
    });
    // factor[u]: probability that u draws something weaker than the sweep point.
    let mut factor = vec![1.0f64; users];
    let mut product = 1.0f64;
    let mut zeros = 0usize;
    let mut total = 0.0;
    for c in cands.iter() {
        if c.q <= 0.0 {
            continue;
        }
        let f = factor[c.user];
        let others = if f == 0.0 {
            if zeros == 1 {
                product
            } else {
                0.0
            }
        } else if zeros > 0 {
            0.0
        } else {
            product / f
        };
        total += c.q * others * c.weight;
        let next = f - c.q;
        if f != 0.0 {
            product /= f;
            if next <= EMPTY {
                factor[c.user] = 0.0;
                zeros += 1;
            } else {
                factor[c.user] = next;
                product *= next;
            }
        }
    }
    total
}

/// Winner probabilities `rho_{f,l}` for `l` i.i.d. draws from `q`, where
/// file `f` scores `term(p_f M, l, n - l + 1)`.
pub fn rho_homogeneous(p: &[f64], q: &[f64], cache: f64, n: usize, l: usize) -> Vec<f64> {
    let m = p.len();
    let crit: Vec<f64> = p.iter().map(|&pf| term(pf * cache, l, n + 1 - l)).collect();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| crit[b].total_cmp(&crit[a]).then(a.cmp(&b)));
    // P(f wins) = P(all draws are f or weaker) - P(all draws strictly weaker).
    let mut rho = vec![0.0; m];
    let mut weaker = 0.0f64;
    for f in order.into_iter().rev() {
        let upto = (weaker + q[f]).min(1.0);
        rho[f] = upto.powi(l as i32) - weaker.powi(l as i32);
        weaker = upto;
    }
    rho
}

/// Homogeneous closed form: `L sum_l C(n,l) sum_f rho_{f,l} (1-p_f M)^{n-l+1} (p_f M)^{l-1}`.
pub fn psi_homogeneous(p: &[f64], q: &[f64], cache: f64, requests: usize, n: usize) -> f64 {
    let mut total = 0.0;
    for l in 1..=n {
        let rho = rho_homogeneous(p, q, cache, n, l);
        let inner: f64 = rho
            .iter()
            .zip(p)
            .map(|(&r, &pf)| r * term(pf * cache, l, n + 1 - l))
            .sum();
        total += binomial(n, l) * inner;
    }
    requests as f64 * total
}

/// Subset form over users of each request layer.
///
/// Each user of a subset draws one file from its demand row; the subset's
/// contribution is the expected weight of the winning `(file, user)` pair.
/// Subsets are enumerated when `n_j <= EXACT_SUBSET_LIMIT`, otherwise
/// `samples` uniform subsets per size are averaged and scaled by `C(n_j, l)`.
pub fn psi_heterogeneous(config: &NetworkConfig, opts: PsiOptions) -> Result<PsiEstimate> {
    if opts.samples == 0 {
        return Err(Error::input("psi needs a positive sample budget"));
    }
    let n = config.n();
    let m = config.m();
    let profile = RequestProfile::new(config.request_counts());
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut value = 0.0;
    let mut variance = 0.0;
    let mut exact = true;
    let mut cands: Vec<Candidate> = Vec::new();

    let subset_value = |subset: &[usize], nj: usize, cands: &mut Vec<Candidate>| -> f64 {
        let l = subset.len();
        let k_weight = nj + 1 - l;
        let k_crit = match opts.exponent {
            Exponent::Subset => k_weight,
            Exponent::Network => n + 1 - l,
        };
        cands.clear();
        for (local, &u) in subset.iter().enumerate() {
            let mu = config.cache_size(u);
            for f in 0..m {
                let q = config.q(u, f);
                if q <= 0.0 {
                    continue;
                }
                let x = config.p(u, f) * mu;
                cands.push(Candidate {
                    crit: term(x, l, k_crit),
                    file: f,
                    user: local,
                    q,
                    weight: term(x, l, k_weight),
                });
            }
        }
        winner_expectation(cands, l)
    };

    for j in 1..=profile.max_requests() {
        let users = profile.users(j);
        let nj = users.len();
        if nj <= EXACT_SUBSET_LIMIT {
            let mut subset = Vec::with_capacity(nj);
            for mask in 1u32..(1u32 << nj) {
                subset.clear();
                subset.extend((0..nj).filter(|&i| mask >> i & 1 == 1).map(|i| users[i]));
                value += subset_value(&subset, nj, &mut cands);
            }
            continue;
        }
        exact = false;
        for l in 1..=nj {
            let scale = binomial(nj, l);
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            for _ in 0..opts.samples {
                let mut subset: Vec<usize> = sample(&mut rng, nj, l).into_iter().map(|i| users[i]).collect();
                subset.sort_unstable();
                let x = subset_value(&subset, nj, &mut cands);
                sum += x;
                sum_sq += x * x;
            }
            let s = opts.samples as f64;
            let mean = sum / s;
            value += scale * mean;
            if opts.samples > 1 {
                let var = ((sum_sq - s * mean * mean) / (s - 1.0)).max(0.0);
                variance += scale * scale * var / s;
            }
        }
    }
    Ok(PsiEstimate {
        value,
        stderr: variance.sqrt(),
        exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::distributions::{Distribution, WeightedIndex};
    use std::cmp::Ordering;

    fn stronger(a: (f64, usize, usize), b: (f64, usize, usize)) -> Ordering {
        b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2))
    }

    #[test]
    fn term_conventions() {
        assert_eq!(term(0.0, 1, 3), 1.0);
        assert_eq!(term(1.0, 2, 1), 0.0);
        assert!((term(0.5, 2, 2) - 0.125).abs() < 1e-15);
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(3, 4), 0.0);
    }

    #[test]
    fn winner_expectation_matches_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let q = [vec![0.5, 0.3, 0.2], vec![0.1, 0.1, 0.8], vec![0.6, 0.0, 0.4]];
        let crit = [vec![0.2, 0.9, 0.2], vec![0.5, 0.9, 0.1], vec![0.2, 0.0, 0.7]];
        let weight = [vec![1.0, 2.0, 3.0], vec![4.0, 5.0, 6.0], vec![7.0, 8.0, 9.0]];
        let mut cands = Vec::new();
        for u in 0..3 {
            for f in 0..3 {
                cands.push(Candidate {
                    crit: crit[u][f],
                    file: f,
                    user: u,
                    q: q[u][f],
                    weight: weight[u][f],
                });
            }
        }
        let exact = winner_expectation(&mut cands, 3);
        let dists: Vec<_> = q.iter().map(|r| WeightedIndex::new(r).unwrap()).collect();
        let trials = 200_000;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..trials {
            let draws: Vec<(f64, usize, usize)> = (0..3)
                .map(|u| {
                    let f = dists[u].sample(&mut rng);
                    (crit[u][f], f, u)
                })
                .collect();
            let best = draws.iter().copied().min_by(|&a, &b| stronger(a, b)).unwrap();
            let w = weight[best.2][best.1];
            sum += w;
            sum_sq += w * w;
        }
        let mean = sum / trials as f64;
        let se = ((sum_sq / trials as f64 - mean * mean) / trials as f64).sqrt();
        assert!((exact - mean).abs() < 4.0 * se, "{exact} vs {mean} +- {se}");
    }

    #[test]
    fn rho_is_a_distribution() {
        let p = vec![0.05; 20];
        let q = crate::model::zipf_distribution(20, 0.4).unwrap();
        for l in 1..=5 {
            let rho = rho_homogeneous(&p, &q, 5.0, 5, l);
            let total: f64 = rho.iter().sum();
            assert!((total - 1.0).abs() < 1e-12);
            // Uniform p ties everywhere, so the lowest requested file wins.
            assert!((rho[0] - (1.0 - (1.0 - q[0]).powi(l as i32))).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_cache_collapse() {
        let q = crate::model::zipf_distribution(10, 0.7).unwrap();
        let p = vec![0.1; 10];
        assert!((psi_homogeneous(&p, &q, 0.0, 3, 4) - 12.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_p_closed_form() {
        // With every p_f M = x, psi = L (1 - x)/x (1 - (1 - x)^n).
        let q = crate::model::zipf_distribution(20, 0.4).unwrap();
        let p = vec![0.05; 20];
        let x: f64 = 0.25;
        let expected = (1.0 - x) / x * (1.0 - (1.0 - x).powi(5));
        assert!((psi_homogeneous(&p, &q, 5.0, 1, 5) - expected).abs() < 1e-12);
    }
}
