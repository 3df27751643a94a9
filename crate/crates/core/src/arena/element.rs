//! Nonzero rational functions over a finite field in factored form.

use std::collections::BTreeMap;

use super::gf::Gf;
use super::poly::Poly;
use crate::error::{Error, Result};

/// constant · ∏ atom^exponent with monic irreducible atoms and nonzero
/// exponents. Never zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    constant: u32,
    factors: BTreeMap<Poly, i64>,
}

impl FieldElement {
    pub fn one() -> Self {
        FieldElement {
            constant: 1,
            factors: BTreeMap::new(),
        }
    }

    pub fn constant(c: u32) -> Result<Self> {
        if c == 0 {
            return Err(Error::ZeroElement);
        }
        Ok(FieldElement {
            constant: c,
            factors: BTreeMap::new(),
        })
    }

    /// Builds an element from parts already in canonical form: monic
    /// irreducible atoms, zero exponents dropped.
    pub(crate) fn from_parts(constant: u32, factors: BTreeMap<Poly, i64>) -> Self {
        debug_assert!(constant != 0);
        let factors = factors.into_iter().filter(|(_, e)| *e != 0).collect();
        FieldElement { constant, factors }
    }

    /// A single atom to a power; `atom` must be monic irreducible.
    pub fn atom(atom: Poly, exponent: i64) -> Self {
        let mut factors = BTreeMap::new();
        if exponent != 0 {
            factors.insert(atom, exponent);
        }
        FieldElement {
            constant: 1,
            factors,
        }
    }

    /// The variable itself (s or t, depending on the arena).
    pub fn variable() -> Self {
        FieldElement::atom(Poly::x(), 1)
    }

    pub fn constant_part(&self) -> u32 {
        self.constant
    }

    pub fn factors(&self) -> &BTreeMap<Poly, i64> {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.constant == 1 && self.factors.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn from_poly(field: &Gf, f: &Poly) -> Result<Self> {
        let fac = field.factor(f)?;
        Ok(FieldElement {
            constant: fac.unit,
            factors: fac
                .factors
                .into_iter()
                .map(|(p, m)| (p, m as i64))
                .collect(),
        })
    }

    pub fn from_rational(field: &Gf, num: &Poly, den: &Poly) -> Result<Self> {
        let n = FieldElement::from_poly(field, num)?;
        let d = FieldElement::from_poly(field, den)?;
        Ok(n.div(field, &d))
    }

    /// Expanded form (numerator, denominator) with monic denominator.
    pub fn to_rational(&self, field: &Gf) -> (Poly, Poly) {
        let mut num = Poly::constant(self.constant);
        let mut den = Poly::one();
        for (p, &e) in &self.factors {
            if e > 0 {
                num = field.pmul(&num, &field.ppow(p, e as u64));
            } else {
                den = field.pmul(&den, &field.ppow(p, (-e) as u64));
            }
        }
        (num, den)
    }

    pub fn mul(&self, field: &Gf, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        for (p, &e) in &other.factors {
            let slot = factors.entry(p.clone()).or_insert(0);
            *slot += e;
            if *slot == 0 {
                factors.remove(p);
            }
        }
        FieldElement {
            constant: field.mul(self.constant, other.constant),
            factors,
        }
    }

    pub fn inv(&self, field: &Gf) -> Self {
        FieldElement {
            constant: field.inv(self.constant),
            factors: self.factors.iter().map(|(p, &e)| (p.clone(), -e)).collect(),
        }
    }

    pub fn div(&self, field: &Gf, other: &Self) -> Self {
        self.mul(field, &other.inv(field))
    }

    pub fn pow(&self, field: &Gf, e: i64) -> Self {
        if e == 0 {
            return FieldElement::one();
        }
        FieldElement {
            constant: field.pow(self.constant, e),
            factors: self.factors.iter().map(|(p, &k)| (p.clone(), k * e)).collect(),
        }
    }

    pub fn scale(&self, field: &Gf, c: u32) -> Result<Self> {
        if c == 0 {
            return Err(Error::ZeroElement);
        }
        let mut out = self.clone();
        out.constant = field.mul(out.constant, c);
        Ok(out)
    }

    /// Sum of elements; `None` when the sum is zero.
    pub fn sum(field: &Gf, terms: &[FieldElement]) -> Option<FieldElement> {
        // common denominator: each atom at its most negative exponent
        let mut den_exps: BTreeMap<Poly, i64> = BTreeMap::new();
        for t in terms {
            for (p, &e) in &t.factors {
                if e < 0 {
                    let slot = den_exps.entry(p.clone()).or_insert(0);
                    *slot = (*slot).max(-e);
                }
            }
        }
        let mut num = Poly::zero();
        for t in terms {
            let mut part = Poly::constant(t.constant);
            for (p, &e) in &t.factors {
                let shift = e + den_exps.get(p).copied().unwrap_or(0);
                if shift > 0 {
                    part = field.pmul(&part, &field.ppow(p, shift as u64));
                }
            }
            for (p, &d) in &den_exps {
                if !t.factors.contains_key(p) {
                    part = field.pmul(&part, &field.ppow(p, d as u64));
                }
            }
            num = field.padd(&num, &part);
        }
        if num.is_zero() {
            return None;
        }
        let n = FieldElement::from_poly(field, &num).expect("nonzero numerator");
        let d = FieldElement::from_parts(1, den_exps);
        Some(n.div(field, &d))
    }

    pub fn add(&self, field: &Gf, other: &Self) -> Option<Self> {
        FieldElement::sum(field, &[self.clone(), other.clone()])
    }

    /// Applies a field automorphism given on constants by `on_const` and on
    /// the variable by x ↦ `var_scale`·x; atoms are re-monicized and the
    /// leading coefficients absorbed into the constant.
    pub(crate) fn map_atoms(
        &self,
        field: &Gf,
        on_const: impl Fn(u32) -> u32,
        var_scale: u32,
    ) -> Self {
        let mut constant = on_const(self.constant);
        let mut factors = BTreeMap::new();
        for (p, &e) in &self.factors {
            let image = field.pscale_var(&field.pmap(p, &on_const), var_scale);
            let lead = image.leading();
            constant = field.mul(constant, field.pow(lead, e));
            *factors.entry(field.pmonic(&image)).or_insert(0) += e;
        }
        FieldElement::from_parts(constant, factors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_rational() {
        let f = Gf::new(7).unwrap();
        let num = Poly::new(vec![1, 2, 3]);
        let den = Poly::new(vec![6, 0, 0, 1]);
        let x = FieldElement::from_rational(&f, &num, &den).unwrap();
        let (n, d) = x.to_rational(&f);
        assert_eq!(f.pmul(&n, &den), f.pmul(&d, &num));
    }

    #[test]
    fn sum_cancels() {
        let f = Gf::new(7).unwrap();
        let s = FieldElement::variable();
        let minus_s = s.scale(&f, 6).unwrap();
        assert!(s.add(&f, &minus_s).is_none());
        // 1/s + 1/s = 2/s
        let inv = s.inv(&f);
        let two = inv.add(&f, &inv).unwrap();
        assert_eq!(two, inv.scale(&f, 2).unwrap());
    }
}
