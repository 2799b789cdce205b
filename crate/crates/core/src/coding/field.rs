//! Binary extension fields GF(2^8) and GF(2^16) with log/antilog tables.

#![allow(clippy::suspicious_arithmetic_impl, clippy::suspicious_op_assign_impl)]

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Sub, SubAssign};
use std::sync::OnceLock;

use rand::Rng;

/// Arithmetic of a binary extension field. Addition is XOR.
pub trait Field:
    Copy
    + Eq
    + Debug
    + Default
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
{
    const BITS: u32;
    const ZERO: Self;
    const ONE: Self;

    /// Number of field elements.
    fn order() -> usize {
        1 << Self::BITS
    }

    fn from_bits(bits: u32) -> Self;
    fn to_bits(self) -> u32;

    /// Multiplicative inverse, `None` for zero.
    fn inv(self) -> Option<Self>;

    /// `g^k` for the fixed primitive element `g`.
    fn primitive_power(k: usize) -> Self;

    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::from_bits(rng.gen::<u32>())
    }

    fn is_zero(self) -> bool {
        self == Self::ZERO
    }
}

struct Tables {
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl Tables {
    fn build(bits: u32, poly: u32) -> Self {
        let order = 1usize << bits;
        let cycle = order - 1;
        let mut exp = vec![0u32; 2 * cycle];
        let mut log = vec![0u32; order];
        let mut x = 1u32;
        for (k, slot) in exp.iter_mut().take(cycle).enumerate() {
            *slot = x;
            log[x as usize] = k as u32;
            x <<= 1;
            if x & (1 << bits) != 0 {
                x ^= poly;
            }
        }
        for k in cycle..2 * cycle {
            exp[k] = exp[k - cycle];
        }
        Tables { exp, log }
    }
}

macro_rules! binary_field {
    ($name:ident, $repr:ty, $bits:expr, $poly:expr, $tables:ident) => {
        #[doc = concat!("Element of GF(2^", stringify!($bits), "), reduction polynomial `", stringify!($poly), "`.")]
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
        pub struct $name(pub $repr);

        static $tables: OnceLock<Tables> = OnceLock::new();

        impl $name {
            fn tables() -> &'static Tables {
                $tables.get_or_init(|| Tables::build($bits, $poly))
            }
        }

        impl Field for $name {
            const BITS: u32 = $bits;
            const ZERO: Self = $name(0);
            const ONE: Self = $name(1);

            fn from_bits(bits: u32) -> Self {
                $name(bits as $repr)
            }

            fn to_bits(self) -> u32 {
                self.0 as u32
            }

            fn inv(self) -> Option<Self> {
                if self.0 == 0 {
                    return None;
                }
                let t = Self::tables();
                let cycle = (1usize << $bits) - 1;
                let l = t.log[self.0 as usize] as usize;
                Some($name(t.exp[(cycle - l) % cycle] as $repr))
            }

            fn primitive_power(k: usize) -> Self {
                let cycle = (1usize << $bits) - 1;
                $name(Self::tables().exp[k % cycle] as $repr)
            }
        }

        impl Add for $name {
            type Output = Self;
            fn add(self, rhs: Self) -> Self {
                $name(self.0 ^ rhs.0)
            }
        }

        impl Sub for $name {
            type Output = Self;
            fn sub(self, rhs: Self) -> Self {
                $name(self.0 ^ rhs.0)
            }
        }

        impl Mul for $name {
            type Output = Self;
            fn mul(self, rhs: Self) -> Self {
                if self.0 == 0 || rhs.0 == 0 {
                    return $name(0);
                }
                let t = Self::tables();
                $name(t.exp[(t.log[self.0 as usize] + t.log[rhs.0 as usize]) as usize] as $repr)
            }
        }

        impl Div for $name {
            type Output = Self;
            fn div(self, rhs: Self) -> Self {
                self * rhs.inv().expect("division by zero in finite field")
            }
        }

        impl AddAssign for $name {
            fn add_assign(&mut self, rhs: Self) {
                self.0 ^= rhs.0;
            }
        }

        impl SubAssign for $name {
            fn sub_assign(&mut self, rhs: Self) {
                self.0 ^= rhs.0;
            }
        }

        impl MulAssign for $name {
            fn mul_assign(&mut self, rhs: Self) {
                *self = *self * rhs;
            }
        }
    };
}

binary_field!(Gf256, u8, 8, 0x11d, GF256_TABLES);
binary_field!(Gf65536, u16, 16, 0x1100b, GF65536_TABLES);

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    // Shift-and-add multiplication, independent of the tables.
    fn slow_mul(a: u32, b: u32, bits: u32, poly: u32) -> u32 {
        let (mut a, mut b, mut acc) = (a, b, 0u32);
        while b != 0 {
            if b & 1 == 1 {
                acc ^= a;
            }
            b >>= 1;
            a <<= 1;
            if a & (1 << bits) != 0 {
                a ^= poly;
            }
        }
        acc
    }

    fn axioms<F: Field>(poly: u32) {
        let mut rng = ChaCha8Rng::seed_from_u64(F::BITS as u64);
        for _ in 0..10_000 {
            let (a, b, c) = (F::random(&mut rng), F::random(&mut rng), F::random(&mut rng));
            assert_eq!((a + b) + c, a + (b + c));
            assert_eq!((a * b) * c, a * (b * c));
            assert_eq!(a * (b + c), a * b + a * c);
            assert_eq!(a * b, b * a);
            assert_eq!(
                (a * b).to_bits(),
                slow_mul(a.to_bits(), b.to_bits(), F::BITS, poly)
            );
            if !a.is_zero() {
                assert_eq!(a * a.inv().unwrap(), F::ONE);
                assert_eq!((b * a) / a, b);
            }
        }
        assert_eq!(F::ZERO.inv(), None);
    }

    #[test]
    fn gf256_axioms() {
        axioms::<Gf256>(0x11d);
    }

    #[test]
    fn gf65536_axioms() {
        axioms::<Gf65536>(0x1100b);
    }

    #[test]
    fn generators_are_primitive() {
        let mut seen = vec![false; 1 << 16];
        for k in 0..65535 {
            let x = Gf65536::primitive_power(k).0 as usize;
            assert!(!seen[x], "power {k} repeats");
            seen[x] = true;
        }
        let distinct: std::collections::HashSet<u8> = (0..255).map(|k| Gf256::primitive_power(k).0).collect();
        assert_eq!(distinct.len(), 255);
    }
}
