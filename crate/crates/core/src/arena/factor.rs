//! Deterministic factorization over finite fields: square-free split,
//! distinct-degree split, then equal-degree splitting driven by a fixed
//! enumeration of trial polynomials.

use super::gf::Gf;
use super::poly::Poly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: u32,
    /// Monic irreducible factors with multiplicities, in ascending order.
    pub factors: Vec<(Poly, u32)>,
}

impl Gf {
    pub fn factor(&self, f: &Poly) -> Result<Factorization> {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let unit = f.leading();
        let monic = self.pmonic(f);
        let mut factors = Vec::new();
        for (sq, mult) in self.square_free(&monic) {
            for (part, d) in self.distinct_degree(&sq) {
                for irr in self.equal_degree(&part, d) {
                    factors.push((irr, mult));
                }
            }
        }
        factors.sort();
        // merge equal atoms coming from different square-free layers
        let mut merged: Vec<(Poly, u32)> = Vec::new();
        for (p, m) in factors {
            match merged.last_mut() {
                Some((last, lm)) if *last == p => *lm += m,
                _ => merged.push((p, m)),
            }
        }
        Ok(Factorization {
            unit,
            factors: merged,
        })
    }

    pub fn is_irreducible(&self, f: &Poly) -> bool {
        if f.degree() == 0 {
            return false;
        }
        matches!(self.factor(f), Ok(fac) if fac.factors.len() == 1 && fac.factors[0].1 == 1)
    }

    /// The polynomial g with g(x)^ℓ = f(x); f must have only exponents
    /// divisible by ℓ.
    fn char_root(&self, f: &Poly) -> Poly {
        let ell = self.characteristic() as usize;
        let root_exp = (self.size() / self.characteristic()) as i64;
        let coeffs = f.coeffs();
        Poly::new(
            (0..=f.degree() / ell)
                .map(|k| {
                    let c = coeffs[k * ell];
                    if c == 0 {
                        0
                    } else {
                        self.pow(c, root_exp)
                    }
                })
                .collect(),
        )
    }

    /// Square-free decomposition of a monic polynomial: pairs (g, m) with
    /// f = ∏ g^m and each g square-free.
    fn square_free(&self, f: &Poly) -> Vec<(Poly, u32)> {
        let mut out = Vec::new();
        if f.degree() == 0 {
            return out;
        }
        let ell = self.characteristic() as u32;
        let df = self.pderiv(f);
        if df.is_zero() {
            for (g, m) in self.square_free(&self.char_root(f)) {
                out.push((g, m * ell));
            }
            return out;
        }
        let mut c = self.pgcd(f, &df);
        let mut w = self.pdiv_exact(f, &c);
        let mut i = 1;
        while w.degree() > 0 {
            let y = self.pgcd(&w, &c);
            let fac = self.pdiv_exact(&w, &y);
            if fac.degree() > 0 {
                out.push((fac, i));
            }
            w = y;
            c = self.pdiv_exact(&c, &w);
            i += 1;
        }
        if c.degree() > 0 {
            for (g, m) in self.square_free(&self.char_root(&c)) {
                out.push((g, m * ell));
            }
        }
        out
    }

    /// Splits a monic square-free polynomial into products of irreducibles
    /// of equal degree d.
    fn distinct_degree(&self, f: &Poly) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        let mut rest = f.clone();
        let x = Poly::x();
        let mut h = self.prem(&x, &rest);
        let mut d = 0;
        while rest.degree() > 0 {
            d += 1;
            if 2 * d > rest.degree() {
                let deg = rest.degree();
                out.push((rest, deg));
                break;
            }
            h = self.ppowmod(&h, self.size() as u128, &rest);
            let g = self.pgcd(&self.psub(&h, &x), &rest);
            if g.degree() > 0 {
                rest = self.pdiv_exact(&rest, &g);
                h = self.prem(&h, &rest);
                out.push((g, d));
            }
        }
        out
    }

    /// Trial polynomials in index order, skipping constants: x, x+1, …,
    /// 2x, …, x², ….
    fn trial_poly(&self, index: u64) -> Poly {
        let q = self.size();
        let mut r = index + q;
        let mut coeffs = Vec::new();
        while r > 0 {
            coeffs.push((r % q) as u32);
            r /= q;
        }
        Poly::new(coeffs)
    }

    /// A nontrivial factor of f (product of ≥ 2 irreducibles of degree d)
    /// from the trial element h, if h separates.
    fn split_with(&self, f: &Poly, h: &Poly, d: usize) -> Option<Poly> {
        let q = self.size();
        let candidate = if self.characteristic() == 2 {
            // absolute trace h + h² + h⁴ + … over F_{Q^d}
            let steps = self.degree() as usize * d;
            let mut term = self.prem(h, f);
            let mut acc = term.clone();
            for _ in 1..steps {
                term = self.prem(&self.pmul(&term, &term), f);
                acc = self.padd(&acc, &term);
            }
            acc
        } else {
            // h^{(Q^d−1)/2} = (h·h^Q⋯h^{Q^{d−1}})^{(Q−1)/2}
            let mut term = self.prem(h, f);
            let mut norm = term.clone();
            for _ in 1..d {
                term = self.ppowmod(&term, q as u128, f);
                norm = self.prem(&self.pmul(&norm, &term), f);
            }
            let half = self.ppowmod(&norm, ((q - 1) / 2) as u128, f);
            self.psub(&half, &Poly::one())
        };
        let g = self.pgcd(&candidate, f);
        (g.degree() > 0 && g.degree() < f.degree()).then_some(g)
    }

    fn equal_degree(&self, f: &Poly, d: usize) -> Vec<Poly> {
        if f.degree() == d {
            return vec![f.clone()];
        }
        let mut index = 0;
        loop {
            let h = self.trial_poly(index);
            index += 1;
            if h.degree() >= f.degree() {
                // the enumeration is exhaustive below deg f, so this cannot happen
                // for a square-free product of several degree-d irreducibles
                unreachable!("equal-degree splitting exhausted its trial elements");
            }
            if let Some(g) = self.split_with(f, &h, d) {
                let other = self.pdiv_exact(f, &g);
                let mut out = self.equal_degree(&g, d);
                out.extend(self.equal_degree(&other, d));
                return out;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expand(f: &Gf, fac: &Factorization) -> Poly {
        let mut acc = Poly::constant(fac.unit);
        for (p, m) in &fac.factors {
            acc = f.pmul(&acc, &f.ppow(p, *m as u64));
        }
        acc
    }

    #[test]
    fn cube_roots_of_unity_split() {
        let f = Gf::new(7).unwrap();
        let fac = f.factor(&Poly::new(vec![6, 0, 0, 1])).unwrap();
        let atoms: Vec<_> = fac.factors.iter().map(|(p, _)| p.coeffs().to_vec()).collect();
        assert_eq!(atoms, vec![vec![3, 1], vec![5, 1], vec![6, 1]]);
    }

    #[test]
    fn non_cube_stays_irreducible() {
        let f = Gf::new(7).unwrap();
        assert!(f.is_irreducible(&Poly::new(vec![4, 0, 0, 1])));
    }

    #[test]
    fn square_of_variable() {
        let f = Gf::new(7).unwrap();
        let fac = f.factor(&Poly::new(vec![0, 0, 1])).unwrap();
        assert_eq!(fac.factors, vec![(Poly::x(), 2)]);
    }

    #[test]
    fn inseparable_powers_and_char_two() {
        for q in [2u64, 4, 8, 3, 9, 5, 25] {
            let f = Gf::new(q).unwrap();
            let ell = f.characteristic() as usize;
            // (x^ℓ + x + 1)^ℓ·(x + 1)^2·x has an inseparable layer
            let a = Poly::new({
                let mut v = vec![1, 1];
                v.resize(ell + 1, 0);
                v[ell] = 1;
                v
            });
            let poly = f.pmul(
                &f.pmul(&f.ppow(&a, ell as u64), &f.ppow(&Poly::new(vec![1, 1]), 2)),
                &Poly::x(),
            );
            let fac = f.factor(&poly).unwrap();
            assert_eq!(expand(&f, &fac), poly);
            for (p, _) in &fac.factors {
                assert!(p.is_monic());
            }
        }
    }

    #[test]
    fn zero_rejected() {
        let f = Gf::new(7).unwrap();
        assert_eq!(f.factor(&Poly::zero()), Err(Error::ZeroPolynomial));
    }
}
