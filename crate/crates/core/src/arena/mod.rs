//! The two cyclic degree-p extensions K/F used for computation.
//!
//! * Variant R: K = F_q(s), F = F_q(t) with t = s^p, σ(s) = ξ·s, a = t.
//! * Variant C: K = F_{q^p}(t), F = F_q(t), σ the q-power Frobenius on
//!   constants, a = u the canonical generator of F_q×.
//!
//! Elements of K are [`FieldElement`]s over the constants field of K, in the
//! variable s (R) or t (C).

mod element;
mod factor;
mod gf;
mod poly;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{is_odd_prime, prime_power};
use crate::error::{invalid, Error, Result};

pub use element::FieldElement;
pub use factor::Factorization;
pub use gf::{Gf, FIELD_CAP};
pub use poly::Poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    /// K = F_q(t^{1/p}), radical over the function field.
    R,
    /// K = F_{q^p}(t), constant-field extension.
    C,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::R => write!(f, "R"),
            Variant::C => write!(f, "C"),
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "R" | "r" => Ok(Variant::R),
            "C" | "c" => Ok(Variant::C),
            other => Err(invalid("arena", format!("unknown variant `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ArenaConfig {
    pub p: u64,
    pub variant: Variant,
    pub q: u64,
}

#[derive(Clone, Debug)]
pub struct Arena {
    config: ArenaConfig,
    field: Gf,
    xi: u32,
    radicand: FieldElement,
    radicand_root: FieldElement,
    upsilon: u8,
}

impl Arena {
    pub fn new(config: ArenaConfig) -> Result<Self> {
        let ArenaConfig { p, variant, q } = config;
        if !is_odd_prime(p) {
            return Err(invalid("p", format!("{p} is not an odd prime")));
        }
        if prime_power(q).is_none() {
            return Err(invalid("q", format!("{q} is not a prime power")));
        }
        if (q - 1) % p != 0 {
            return Err(invalid("q", format!("{p} does not divide {q} − 1")));
        }
        match variant {
            Variant::R => {
                if (q - 1) % (p * p) == 0 {
                    return Err(invalid(
                        "q",
                        format!(
                            "{p}² divides {q} − 1, so the root of unity is a {p}-th power \
                             and the radical arena degenerates"
                        ),
                    ));
                }
                let field = Gf::new(q)?;
                let xi = field.root_of_unity(p);
                let s = FieldElement::variable();
                Ok(Arena {
                    config,
                    radicand: s.pow(&field, p as i64),
                    radicand_root: s,
                    field,
                    xi,
                    upsilon: 0,
                })
            }
            Variant::C => {
                let big = q
                    .checked_pow(p as u32)
                    .filter(|&b| b <= FIELD_CAP)
                    .ok_or_else(|| {
                        invalid("q", format!("{q}^{p} exceeds the field-size cap {FIELD_CAP}"))
                    })?;
                let field = Gf::new(big)?;
                let order = (big - 1) as i64;
                let xi = field.root_of_unity(p);
                let u = field.gen_pow(order / (q as i64 - 1));
                let v = field.gen_pow(order / (p as i64 * (q as i64 - 1)));
                Ok(Arena {
                    config,
                    radicand: FieldElement::constant(u)?,
                    radicand_root: FieldElement::constant(v)?,
                    field,
                    xi,
                    upsilon: 1,
                })
            }
        }
    }

    pub fn config(&self) -> ArenaConfig {
        self.config
    }

    pub fn p(&self) -> u64 {
        self.config.p
    }

    pub fn q(&self) -> u64 {
        self.config.q
    }

    pub fn variant(&self) -> Variant {
        self.config.variant
    }

    /// The constants field of K.
    pub fn field(&self) -> &Gf {
        &self.field
    }

    /// Name of the polynomial variable of K.
    pub fn var_name(&self) -> char {
        match self.variant() {
            Variant::R => 's',
            Variant::C => 't',
        }
    }

    /// The primitive p-th root of unity ξ with σ(a^{1/p}) = ξ·a^{1/p}.
    pub fn xi(&self) -> u32 {
        self.xi
    }

    pub fn xi_element(&self) -> FieldElement {
        FieldElement::constant(self.xi).expect("ξ is nonzero")
    }

    /// 1 when ξ is a norm from K, 0 otherwise.
    pub fn upsilon(&self) -> u8 {
        self.upsilon
    }

    /// The radicand a with K = F(a^{1/p}).
    pub fn radicand(&self) -> &FieldElement {
        &self.radicand
    }

    pub fn radicand_root(&self) -> &FieldElement {
        &self.radicand_root
    }

    /// The variable t of F as an element of K.
    pub fn base_variable(&self) -> FieldElement {
        match self.variant() {
            Variant::R => FieldElement::variable().pow(&self.field, self.p() as i64),
            Variant::C => FieldElement::variable(),
        }
    }

    /// The element used to twist non-split solutions: a^{1/p} in variant R,
    /// the canonical generator of the constants field in variant C (the
    /// least power of the generator with nonzero index).
    pub fn lemma5_element(&self) -> FieldElement {
        match self.variant() {
            Variant::R => self.radicand_root.clone(),
            Variant::C => FieldElement::constant(self.field.generator()).expect("nonzero"),
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::one()
    }

    pub fn constant(&self, c: u32) -> Result<FieldElement> {
        FieldElement::constant(c)
    }

    pub fn from_poly(&self, f: &Poly) -> Result<FieldElement> {
        FieldElement::from_poly(&self.field, f)
    }

    pub fn from_rational(&self, num: &Poly, den: &Poly) -> Result<FieldElement> {
        FieldElement::from_rational(&self.field, num, den)
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        x.mul(&self.field, y)
    }

    pub fn div(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        x.div(&self.field, y)
    }

    pub fn inv(&self, x: &FieldElement) -> FieldElement {
        x.inv(&self.field)
    }

    pub fn pow(&self, x: &FieldElement, e: i64) -> FieldElement {
        x.pow(&self.field, e)
    }

    pub fn product(&self, xs: &[FieldElement]) -> FieldElement {
        xs.iter()
            .fold(FieldElement::one(), |acc, x| acc.mul(&self.field, x))
    }

    /// σ on a constant.
    pub fn sigma_const(&self, c: u32) -> u32 {
        match self.variant() {
            Variant::R => c,
            Variant::C => self.field.pow(c, self.q() as i64),
        }
    }

    /// σ of a monic atom: (leading constant, monic image).
    pub fn sigma_atom(&self, atom: &Poly) -> (u32, Poly) {
        let image = match self.variant() {
            Variant::R => self.field.pscale_var(atom, self.xi),
            Variant::C => self.field.pmap(atom, |c| self.sigma_const(c)),
        };
        let lead = image.leading();
        (lead, self.field.pmonic(&image))
    }

    /// The σ-orbit of a monic atom, starting at the atom itself.
    pub fn atom_orbit(&self, atom: &Poly) -> Vec<Poly> {
        let mut orbit = vec![atom.clone()];
        loop {
            let (_, next) = self.sigma_atom(orbit.last().expect("nonempty"));
            if &next == atom {
                return orbit;
            }
            orbit.push(next);
        }
    }

    pub fn sigma(&self, x: &FieldElement) -> FieldElement {
        match self.variant() {
            Variant::R => x.map_atoms(&self.field, |c| c, self.xi),
            Variant::C => x.map_atoms(&self.field, |c| self.sigma_const(c), 1),
        }
    }

    pub fn sigma_pow(&self, x: &FieldElement, k: u64) -> FieldElement {
        let mut y = x.clone();
        for _ in 0..k % self.p() {
            y = self.sigma(&y);
        }
        y
    }

    /// x·σ(x)⋯σ^{p−1}(x).
    pub fn norm(&self, x: &FieldElement) -> FieldElement {
        let mut acc = x.clone();
        let mut y = x.clone();
        for _ in 1..self.p() {
            y = self.sigma(&y);
            acc = acc.mul(&self.field, &y);
        }
        acc
    }

    pub fn is_in_base(&self, x: &FieldElement) -> bool {
        &self.sigma(x) == x
    }

    /// The p-th root with least discrete log of its constant, when x is a
    /// p-th power in K.
    pub fn pth_root(&self, x: &FieldElement) -> Option<FieldElement> {
        let p = self.p() as i64;
        if x.factors().values().any(|e| e % p != 0) {
            return None;
        }
        let log = self.field.dlog(x.constant_part()) as i64;
        if log % p != 0 {
            return None;
        }
        let factors: BTreeMap<Poly, i64> =
            x.factors().iter().map(|(a, e)| (a.clone(), e / p)).collect();
        Some(FieldElement::from_parts(self.field.gen_pow(log / p), factors))
    }

    pub fn is_pth_power(&self, x: &FieldElement) -> bool {
        self.pth_root(x).is_some()
    }

    /// Writes c ∈ F ∩ K^p as a^s·f^p with f ∈ F.
    pub fn decompose_base_class(&self, c: &FieldElement) -> Result<(u64, FieldElement)> {
        if !self.is_in_base(c) {
            return Err(Error::NotInBaseField);
        }
        if !self.is_pth_power(c) {
            return Err(Error::Precondition("element is not a p-th power in K".into()));
        }
        let a_inv = self.inv(&self.radicand);
        let mut y = c.clone();
        for s in 0..self.p() {
            if let Some(r) = self.pth_root(&y) {
                // roots differ by powers of ξ ∈ F, so one lies in F iff all do
                if self.is_in_base(&r) {
                    return Ok((s, r));
                }
            }
            y = self.mul(&y, &a_inv);
        }
        Err(Error::Precondition(
            "no decomposition a^s·f^p found".into(),
        ))
    }

    /// Representative of x·F× in canonical form: constant reduced modulo
    /// the constants of F, each free σ-orbit shifted so its least exponent
    /// is zero, σ-fixed atoms of F removed.
    pub fn normalize_mod_base(&self, x: &FieldElement) -> FieldElement {
        let p = self.p() as i64;
        let constant = match self.variant() {
            Variant::R => 1,
            Variant::C => {
                let period = ((self.field.size() - 1) / (self.q() - 1)) as i64;
                self.field
                    .gen_pow(self.field.dlog(x.constant_part()) as i64 % period)
            }
        };
        let mut factors: BTreeMap<Poly, i64> = BTreeMap::new();
        let mut done: Vec<&Poly> = Vec::new();
        for atom in x.factors().keys() {
            if done.contains(&atom) {
                continue;
            }
            let orbit = self.atom_orbit(atom);
            if orbit.len() == 1 {
                done.push(atom);
                // the variable s is fixed but not in F; only its exponent mod p matters
                if self.variant() == Variant::R && atom == &Poly::x() {
                    factors.insert(atom.clone(), x.factors()[atom].rem_euclid(p));
                }
                continue;
            }
            let exps: Vec<i64> = orbit
                .iter()
                .map(|a| x.factors().get(a).copied().unwrap_or(0))
                .collect();
            let least = *exps.iter().min().expect("orbit nonempty");
            for (a, e) in orbit.iter().zip(&exps) {
                factors.insert(a.clone(), e - least);
            }
            for a in x.factors().keys() {
                if orbit.contains(a) {
                    done.push(a);
                }
            }
        }
        FieldElement::from_parts(constant, factors)
    }

    /// Trial elements for the Hilbert 90 resolvent: s^m (R) or z^m (C).
    fn resolvent_trials(&self) -> Vec<FieldElement> {
        match self.variant() {
            Variant::R => (0..self.p() as i64)
                .map(|m| FieldElement::variable().pow(&self.field, m))
                .collect(),
            Variant::C => (0..self.field.degree() as i64)
                .map(|m| {
                    let c = self.field.pow(self.field.z(), m);
                    FieldElement::constant(c).expect("nonzero")
                })
                .collect(),
        }
    }

    /// b with σ(b)/b = c, normalized modulo F×; requires N(c) = 1.
    pub fn hilbert90(&self, c: &FieldElement) -> Result<FieldElement> {
        if !self.norm(c).is_one() {
            return Err(Error::Precondition("norm of the input is not 1".into()));
        }
        // σ(Σ c_k σ^k θ) = (1/c')·Σ c_k σ^k θ when c_k = ∏_{j<k} σ^j(c'); take c' = 1/c
        let c_prime = self.inv(c);
        let mut coeffs = vec![FieldElement::one()];
        let mut term = c_prime.clone();
        for _ in 1..self.p() {
            let next = self.mul(coeffs.last().expect("nonempty"), &term);
            coeffs.push(next);
            term = self.sigma(&term);
        }
        for theta in self.resolvent_trials() {
            let mut conj = theta.clone();
            let mut terms = Vec::with_capacity(coeffs.len());
            for ck in &coeffs {
                terms.push(self.mul(ck, &conj));
                conj = self.sigma(&conj);
            }
            if let Some(b) = FieldElement::sum(&self.field, &terms) {
                let b = self.normalize_mod_base(&b);
                debug_assert_eq!(&self.div(&self.sigma(&b), &b), c);
                return Ok(b);
            }
        }
        unreachable!("some basis element of K/F gives a nonzero resolvent")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arena_r7() -> Arena {
        Arena::new(ArenaConfig {
            p: 3,
            variant: Variant::R,
            q: 7,
        })
        .unwrap()
    }

    fn lin(c: u32) -> FieldElement {
        FieldElement::atom(Poly::new(vec![c, 1]), 1)
    }

    #[test]
    fn sigma_examples() {
        let a = arena_r7();
        assert_eq!(a.xi(), 2);
        let s = FieldElement::variable();
        assert_eq!(a.sigma(&s), s.scale(a.field(), 2).unwrap());
        assert_eq!(a.sigma(&lin(6)), lin(3).scale(a.field(), 2).unwrap());
        let t_minus_1 = a.from_poly(&Poly::new(vec![6, 0, 0, 1])).unwrap();
        assert_eq!(a.sigma(&t_minus_1), t_minus_1);
    }

    #[test]
    fn norm_examples() {
        let a = arena_r7();
        let s = FieldElement::variable();
        assert_eq!(a.norm(&s), a.base_variable());
        let t_minus_1 = a.from_poly(&Poly::new(vec![6, 0, 0, 1])).unwrap();
        assert_eq!(a.norm(&lin(6)), t_minus_1);
        assert_eq!(a.norm(&a.constant(3).unwrap()), a.constant(6).unwrap());
    }

    #[test]
    fn pth_root_examples() {
        let a = arena_r7();
        assert_eq!(a.pth_root(&a.base_variable()), Some(FieldElement::variable()));
        assert_eq!(a.pth_root(&a.constant(6).unwrap()), Some(a.constant(3).unwrap()));
        assert_eq!(a.pth_root(&a.constant(3).unwrap()), None);
    }

    #[test]
    fn hilbert90_examples() {
        let a = arena_r7();
        assert_eq!(a.hilbert90(&FieldElement::one()).unwrap(), FieldElement::one());
        assert_eq!(a.hilbert90(&a.constant(2).unwrap()).unwrap(), FieldElement::variable());
        let c = lin(3).div(a.field(), &lin(6)).scale(a.field(), 2).unwrap();
        assert_eq!(a.hilbert90(&c).unwrap(), lin(6));
        assert!(a.hilbert90(&a.constant(3).unwrap()).is_err());
    }

    #[test]
    fn decompose_base_class_examples() {
        let a = arena_r7();
        let t = a.base_variable();
        assert_eq!(a.decompose_base_class(&t).unwrap(), (1, FieldElement::one()));
        let t1 = a.from_poly(&Poly::new(vec![6, 0, 0, 1])).unwrap();
        assert_eq!(a.decompose_base_class(&a.pow(&t1, 3)).unwrap(), (0, t1));
        assert_eq!(a.decompose_base_class(&a.pow(&t, 4)).unwrap(), (1, t));
        assert_eq!(
            a.decompose_base_class(&FieldElement::variable()),
            Err(Error::NotInBaseField)
        );
    }

    #[test]
    fn config_validation() {
        let mk = |p, variant, q| Arena::new(ArenaConfig { p, variant, q });
        assert!(mk(3, Variant::R, 19).is_err());
        assert!(mk(3, Variant::R, 11).is_err());
        assert!(mk(2, Variant::R, 7).is_err());
        assert!(mk(3, Variant::R, 25).is_ok());
        assert!(mk(3, Variant::R, 4).is_ok());
        let c = mk(3, Variant::C, 7).unwrap();
        assert_eq!(c.field().size(), 343);
        let v = c.radicand_root();
        assert_eq!(c.div(&c.sigma(v), v), c.xi_element());
        assert_eq!(c.pow(v, 3), *c.radicand());
    }
}
