//! Finite fields F_Q = F_ℓ[z]/(m) with log/antilog tables.
//!
//! An element is encoded as the integer Σ c_k·ℓ^k of its coefficient vector
//! in the basis {1, z, …, z^{n−1}}; for n = 1 this is the residue itself.

use crate::arith::{prime_divisors, prime_power};
use crate::error::{invalid, Result};

/// Largest field size accepted.
pub const FIELD_CAP: u64 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf {
    ell: u64,
    degree: u32,
    size: u64,
    modulus: Vec<u64>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// Multiplies two coefficient vectors modulo the monic `modulus` over F_ℓ.
fn mul_mod_poly(a: &[u64], b: &[u64], modulus: &[u64], ell: u64) -> Vec<u64> {
    let n = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * n];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % ell;
        }
    }
    for k in (n..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        prod[k] = 0;
        for (j, &m) in modulus[..n].iter().enumerate() {
            let slot = k - n + j;
            prod[slot] = (prod[slot] + ell - c * m % ell) % ell;
        }
    }
    prod.truncate(n);
    prod
}

fn pow_mod_poly(base: &[u64], mut e: u64, modulus: &[u64], ell: u64) -> Vec<u64> {
    let n = modulus.len() - 1;
    let mut acc = vec![0; n];
    acc[0] = 1;
    let mut b = base.to_vec();
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod_poly(&acc, &b, modulus, ell);
        }
        b = mul_mod_poly(&b, &b, modulus, ell);
        e >>= 1;
    }
    acc
}

impl Gf {
    /// The field with `size` elements; the modulus is the least monic
    /// primitive polynomial in encoding order.
    pub fn new(size: u64) -> Result<Self> {
        let (ell, degree) = prime_power(size)
            .ok_or_else(|| invalid("q", format!("{size} is not a prime power")))?;
        if size > FIELD_CAP {
            return Err(invalid(
                "q",
                format!("field of size {size} exceeds the cap {FIELD_CAP}"),
            ));
        }
        let n = degree as usize;
        let order = size - 1;
        let divisors = prime_divisors(order);

        let (modulus, generator_vec) = if n == 1 {
            let g = (1..size)
                .find(|&g| {
                    divisors
                        .iter()
                        .all(|&r| crate::arith::pow_mod(g, order / r, size) != 1)
                })
                .expect("prime field has a primitive root");
            (vec![(size - g) % size, 1], vec![g])
        } else {
            let mut z = vec![0; n];
            z[1] = 1;
            let mut found = None;
            for code in 0..ell.pow(degree) {
                let mut m: Vec<u64> = (0..n).map(|k| code / ell.pow(k as u32) % ell).collect();
                if m[0] == 0 {
                    continue;
                }
                m.push(1);
                let one = pow_mod_poly(&z, order, &m, ell);
                let is_one = one[0] == 1 && one[1..].iter().all(|&c| c == 0);
                let primitive = is_one
                    && divisors.iter().all(|&r| {
                        let y = pow_mod_poly(&z, order / r, &m, ell);
                        !(y[0] == 1 && y[1..].iter().all(|&c| c == 0))
                    });
                if primitive {
                    found = Some(m);
                    break;
                }
            }
            (found.expect("a primitive polynomial exists"), z)
        };

        let encode = |v: &[u64]| -> u32 {
            v.iter().rev().fold(0u64, |acc, &c| acc * ell + c) as u32
        };
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![u32::MAX; size as usize];
        let mut cur = vec![0u64; n];
        cur[0] = 1;
        for k in 0..order {
            let code = encode(&cur);
            exp.push(code);
            log[code as usize] = k as u32;
            cur = if n == 1 {
                vec![cur[0] * generator_vec[0] % ell]
            } else {
                mul_mod_poly(&cur, &generator_vec, &modulus, ell)
            };
        }
        Ok(Gf {
            ell,
            degree,
            size,
            modulus,
            generator: encode(&generator_vec),
            exp,
            log,
        })
    }

    pub fn characteristic(&self) -> u64 {
        self.ell
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn size(&self) -> u64 {
        self.size
    }

    /// Minimal polynomial of z over F_ℓ, low-to-high.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn generator(&self) -> u32 {
        self.generator
    }

    /// Encoding of z (the generator of the field over F_ℓ).
    pub fn z(&self) -> u32 {
        if self.degree == 1 {
            self.generator
        } else {
            self.ell as u32
        }
    }

    pub fn digits(&self, a: u32) -> Vec<u64> {
        let mut r = a as u64;
        (0..self.degree)
            .map(|_| {
                let d = r % self.ell;
                r /= self.ell;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u64]) -> u32 {
        digits
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.ell + c % self.ell) as u32
    }

    pub fn from_int(&self, x: i64) -> u32 {
        x.rem_euclid(self.ell as i64) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.degree == 1 {
            return ((a as u64 + b as u64) % self.ell) as u32;
        }
        let (mut x, mut y) = (a as u64, b as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.degree {
            out += ((x % self.ell + y % self.ell) % self.ell) * place;
            x /= self.ell;
            y /= self.ell;
            place *= self.ell;
        }
        out as u32
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.degree == 1 {
            return ((self.ell - a as u64) % self.ell) as u32;
        }
        let digits: Vec<u64> = self
            .digits(a)
            .iter()
            .map(|&d| (self.ell - d) % self.ell)
            .collect();
        self.from_digits(&digits)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let k = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % (self.size - 1);
        self.exp[k as usize]
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        let k = (self.size - 1 - self.log[a as usize] as u64) % (self.size - 1);
        self.exp[k as usize]
    }

    pub fn div(&self, a: u32, b: u32) -> u32 {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: u32, e: i64) -> u32 {
        if a == 0 {
            assert!(e > 0, "zero to a non-positive power");
            return 0;
        }
        let order = (self.size - 1) as i64;
        let k = (self.log[a as usize] as i64 * e.rem_euclid(order)).rem_euclid(order);
        self.exp[k as usize]
    }

    /// Discrete log with respect to the canonical generator.
    pub fn dlog(&self, a: u32) -> u64 {
        assert!(a != 0, "log of zero");
        self.log[a as usize] as u64
    }

    /// g^k for the canonical generator g.
    pub fn gen_pow(&self, k: i64) -> u32 {
        self.exp[k.rem_euclid((self.size - 1) as i64) as usize]
    }

    /// Elements of the field in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.size as u32
    }

    /// The p-th root of unity g^{(Q−1)/p}.
    pub fn root_of_unity(&self, p: u64) -> u32 {
        self.gen_pow(((self.size - 1) / p) as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_generator() {
        let f = Gf::new(7).unwrap();
        assert_eq!(f.generator(), 3);
        assert_eq!(f.root_of_unity(3), 2);
        assert_eq!(f.mul(3, 5), 1);
        assert_eq!(f.inv(2), 4);
        assert_eq!(f.dlog(2), 2);
    }

    #[test]
    fn extension_field_tables() {
        for q in [4u64, 8, 9, 25, 49, 343] {
            let f = Gf::new(q).unwrap();
            assert_eq!(f.generator(), f.characteristic() as u32);
            let mut seen = std::collections::HashSet::new();
            for k in 0..(q - 1) as i64 {
                assert!(seen.insert(f.gen_pow(k)));
            }
            for a in 1..q as u32 {
                assert_eq!(f.mul(a, f.inv(a)), 1);
                assert_eq!(f.add(a, f.neg(a)), 0);
            }
        }
        let f = Gf::new(25).unwrap();
        // z² reduces through the modulus
        let m = f.modulus();
        let zz = f.mul(f.z(), f.z());
        let expected = f.from_digits(&[(5 - m[0]) % 5, (5 - m[1]) % 5]);
        assert_eq!(zz, expected);
    }

    #[test]
    fn rejects_non_prime_powers() {
        assert!(Gf::new(12).is_err());
        assert!(Gf::new(1).is_err());
    }
}
