use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::coding::field::Field;
use crate::coding::linalg::rank;
use crate::error::{Error, Result};

/// A `nu x chi` generator, one column per color.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodingMatrix<F> {
    nu: usize,
    chi: usize,
    entries: Vec<F>,
}

impl<F: Field> CodingMatrix<F> {
    /// Builds from row-major entries.
    pub fn from_rows(rows: &[Vec<F>]) -> Result<Self> {
        let nu = rows.len();
        let chi = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != chi) {
            return Err(Error::DimensionMismatch("ragged generator rows".into()));
        }
        Ok(CodingMatrix {
            nu,
            chi,
            entries: rows.concat(),
        })
    }

    pub fn nu(&self) -> usize {
        self.nu
    }

    pub fn chi(&self) -> usize {
        self.chi
    }

    pub fn get(&self, row: usize, col: usize) -> F {
        self.entries[row * self.chi + col]
    }

    pub fn column(&self, col: usize) -> Vec<F> {
        (0..self.nu).map(|r| self.get(r, col)).collect()
    }

    /// Whether the columns in `cols` are linearly independent.
    pub fn columns_independent(&self, cols: &[usize]) -> bool {
        let mut m: Vec<Vec<F>> = (0..self.nu)
            .map(|r| cols.iter().map(|&c| self.get(r, c)).collect())
            .collect();
        rank(&mut m) == cols.len()
    }

    /// Checks that every `nu`-subset of columns is independent: exhaustively
    /// when there are at most `10^5` subsets, otherwise on `samples` random
    /// subsets drawn from `seed`.
    pub fn is_mds(&self, samples: usize, seed: u64) -> bool {
        if self.nu > self.chi {
            return false;
        }
        if self.nu == 0 {
            return true;
        }
        match binomial(self.chi, self.nu) {
            Some(total) if total <= 100_000 => {
                let mut subset: Vec<usize> = (0..self.nu).collect();
                loop {
                    if !self.columns_independent(&subset) {
                        return false;
                    }
                    if !next_combination(&mut subset, self.chi) {
                        return true;
                    }
                }
            }
            _ => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..samples).all(|_| {
                    let mut subset = sample(&mut rng, self.chi, self.nu).into_vec();
                    subset.sort_unstable();
                    self.columns_independent(&subset)
                })
            }
        }
    }
}

/// An MDS generator for `chi` colors and `nu` transmissions.
///
/// Identity when `nu == chi`, the systematic `[I | 1]` form when
/// `nu == chi - 1`, otherwise the Vandermonde matrix `G[r][c] = alpha_c^r`
/// with `alpha_c = g^c` for a primitive `g`.
pub fn mds_generator<F: Field>(chi: usize, nu: usize) -> Result<CodingMatrix<F>> {
    if nu > chi {
        return Err(Error::input(format!("nu = {nu} exceeds chi = {chi}")));
    }
    if nu == 0 && chi > 0 {
        return Err(Error::input("nu = 0 with a nonempty coloring"));
    }
    let available = F::order() - 1;
    if chi > available {
        return Err(Error::FieldTooSmall {
            needed: chi,
            available,
            bits: F::BITS,
        });
    }
    let mut entries = vec![F::ZERO; nu * chi];
    if nu + 1 >= chi {
        for r in 0..nu {
            entries[r * chi + r] = F::ONE;
            if nu < chi {
                entries[r * chi + nu] = F::ONE;
            }
        }
    } else {
        for c in 0..chi {
            let alpha = F::primitive_power(c);
            let mut x = F::ONE;
            for r in 0..nu {
                entries[r * chi + c] = x;
                x *= alpha;
            }
        }
    }
    Ok(CodingMatrix { nu, chi, entries })
}

fn binomial(n: usize, k: usize) -> Option<u64> {
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u64)? / (i as u64 + 1);
    }
    Some(acc)
}

// Advances a sorted k-subset of 0..n in lexicographic order.
fn next_combination(subset: &mut [usize], n: usize) -> bool {
    let k = subset.len();
    for i in (0..k).rev() {
        if subset[i] < n - k + i {
            subset[i] += 1;
            for j in i + 1..k {
                subset[j] = subset[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
