//! Dense univariate polynomials over a [`Gf`], coefficients low-to-high.

use std::cmp::Ordering;

use super::gf::Gf;

/// A polynomial with no trailing zero coefficients; the zero polynomial
/// has an empty coefficient vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<u32>,
}

impl Ord for Poly {
    /// Degree first, then coefficients from the leading one down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: u32) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(1)
    }

    /// The variable x.
    pub fn x() -> Self {
        Poly::new(vec![0, 1])
    }

    /// c·x^k.
    pub fn monomial(c: u32, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn coeff(&self, k: usize) -> u32 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }
}

impl Gf {
    pub fn padd(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.coeffs.len().max(b.coeffs.len());
        Poly::new((0..n).map(|k| self.add(a.coeff(k), b.coeff(k))).collect())
    }

    pub fn psub(&self, a: &Poly, b: &Poly) -> Poly {
        let n = a.coeffs.len().max(b.coeffs.len());
        Poly::new((0..n).map(|k| self.sub(a.coeff(k), b.coeff(k))).collect())
    }

    pub fn pscale(&self, a: &Poly, c: u32) -> Poly {
        Poly::new(a.coeffs.iter().map(|&x| self.mul(x, c)).collect())
    }

    pub fn pmul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u32; a.coeffs.len() + b.coeffs.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                out[i + j] = self.add(out[i + j], self.mul(x, y));
            }
        }
        Poly::new(out)
    }

    pub fn ppow(&self, a: &Poly, mut e: u64) -> Poly {
        let mut acc = Poly::one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.pmul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.pmul(&base, &base);
            }
        }
        acc
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn pdivrem(&self, a: &Poly, b: &Poly) -> (Poly, Poly) {
        assert!(!b.is_zero(), "division by the zero polynomial");
        let mut rem = a.coeffs.clone();
        if rem.len() < b.coeffs.len() {
            return (Poly::zero(), a.clone());
        }
        let db = b.coeffs.len() - 1;
        let inv_lead = self.inv(b.leading());
        let mut quot = vec![0u32; rem.len() - db];
        for k in (db..rem.len()).rev() {
            let c = rem[k];
            if c == 0 {
                continue;
            }
            let f = self.mul(c, inv_lead);
            quot[k - db] = f;
            for (j, &bj) in b.coeffs.iter().enumerate() {
                let slot = k - db + j;
                rem[slot] = self.sub(rem[slot], self.mul(f, bj));
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn prem(&self, a: &Poly, b: &Poly) -> Poly {
        self.pdivrem(a, b).1
    }

    /// Exact quotient; panics in debug builds when the division leaves a
    /// remainder.
    pub fn pdiv_exact(&self, a: &Poly, b: &Poly) -> Poly {
        let (q, r) = self.pdivrem(a, b);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn pmonic(&self, a: &Poly) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        self.pscale(a, self.inv(a.leading()))
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn pgcd(&self, a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = self.prem(&x, &y);
            x = y;
            y = r;
        }
        self.pmonic(&x)
    }

    pub fn pderiv(&self, a: &Poly) -> Poly {
        Poly::new(
            a.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| self.mul(self.from_int(k as i64), c))
                .collect(),
        )
    }

    pub fn peval(&self, a: &Poly, x: u32) -> u32 {
        a.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// a^e mod m.
    pub fn ppowmod(&self, a: &Poly, mut e: u128, m: &Poly) -> Poly {
        let mut acc = self.prem(&Poly::one(), m);
        let mut base = self.prem(a, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.prem(&self.pmul(&acc, &base), m);
            }
            e >>= 1;
            if e > 0 {
                base = self.prem(&self.pmul(&base, &base), m);
            }
        }
        acc
    }

    /// a(c·x).
    pub fn pscale_var(&self, a: &Poly, c: u32) -> Poly {
        let mut power = 1;
        let mut out = Vec::with_capacity(a.coeffs.len());
        for &k in &a.coeffs {
            out.push(self.mul(k, power));
            power = self.mul(power, c);
        }
        Poly::new(out)
    }

    /// Applies a map to every coefficient.
    pub fn pmap(&self, a: &Poly, f: impl Fn(u32) -> u32) -> Poly {
        Poly::new(a.coeffs.iter().map(|&c| f(c)).collect())
    }

    /// a(x^k).
    pub fn pinflate(&self, a: &Poly, k: usize) -> Poly {
        if a.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0; a.degree() * k + 1];
        for (j, &c) in a.coeffs.iter().enumerate() {
            out[j * k] = c;
        }
        Poly::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_degree_then_leading() {
        let a = Poly::new(vec![6, 1]);
        let b = Poly::new(vec![0, 1]);
        let c = Poly::new(vec![1, 0, 1]);
        assert!(b < a && a < c);
        assert!(Poly::one() < b);
    }

    #[test]
    fn division_and_gcd() {
        let f = Gf::new(7).unwrap();
        // s^3 − 1 = (s − 1)(s^2 + s + 1)
        let a = Poly::new(vec![6, 0, 0, 1]);
        let b = Poly::new(vec![6, 1]);
        let (q, r) = f.pdivrem(&a, &b);
        assert_eq!(q, Poly::new(vec![1, 1, 1]));
        assert!(r.is_zero());
        assert_eq!(f.pgcd(&a, &f.pderiv(&a)), Poly::one());
        assert_eq!(f.pgcd(&a, &f.pmul(&b, &b)), b);
        assert_eq!(f.peval(&a, 2), 0);
    }
}
