//! The F_p[G]-module J = K×/K×^p on a finite σ-stable window: classes,
//! the ρ-action, length and index, decomposition, and identification of
//! the Galois group of the associated radical extension.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::arena::{Arena, FieldElement, Poly, Variant};
use crate::error::{Error, Result};
use crate::fpg_module::{Block, FpGModule};
use crate::linalg::Matrix;
use crate::pgroup::{CayleyTable, ORDER_CAP};

/// Largest abstract Galois group built by [`abstract_galois_group`].
pub const ABSTRACT_GROUP_CAP: usize = 729;

/// A σ-stable window of J: the constants class [g], then the σ-orbits of
/// monic atoms. Atoms are ranked by their negated lower coefficients read
/// from the top (for linear atoms: by root), each orbit is listed in rank
/// order, and orbits are ordered by their first member. In variant R the
/// atom s (whose class is [a^{1/p}]) is always present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportSpace {
    p: u64,
    atoms: Vec<Poly>,
    index: BTreeMap<Poly, usize>,
    sigma: Matrix,
}

/// Coordinates of a class over a [`SupportSpace`] basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct KummerClass {
    pub coords: Vec<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexValue {
    Defined(u64),
    Undefined,
}

impl IndexValue {
    pub fn value(self) -> Option<u64> {
        match self {
            IndexValue::Defined(e) => Some(e),
            IndexValue::Undefined => None,
        }
    }
}

/// Isomorphism-class label for B_{i,e}: nonzero twists are all isomorphic,
/// and at full length the twist is irrelevant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ELabel {
    Zero,
    Nonzero,
    #[serde(rename = "n/a")]
    NotApplicable,
}

impl std::fmt::Display for ELabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ELabel::Zero => write!(f, "0"),
            ELabel::Nonzero => write!(f, "nonzero"),
            ELabel::NotApplicable => write!(f, "n/a"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassProfile {
    pub length: usize,
    pub index: IndexValue,
}

impl SupportSpace {
    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.atoms.len() + 1
    }

    /// Atoms in basis order (coordinate k + 1 belongs to atom k).
    pub fn atoms(&self) -> &[Poly] {
        &self.atoms
    }

    pub fn coordinate_of(&self, atom: &Poly) -> Option<usize> {
        self.index.get(atom).copied()
    }

    pub fn sigma_matrix(&self) -> &Matrix {
        &self.sigma
    }

    pub fn rho_matrix(&self) -> Matrix {
        self.sigma.sub(&Matrix::identity(self.p, self.dim()))
    }

    pub fn module(&self) -> FpGModule {
        FpGModule::new(self.sigma.clone()).expect("σ-matrix of a support space has order p")
    }

    pub fn zero(&self) -> KummerClass {
        KummerClass {
            coords: vec![0; self.dim()],
        }
    }

    pub fn basis_class(&self, k: usize) -> KummerClass {
        let mut c = self.zero();
        c.coords[k] = 1;
        c
    }

    pub fn contains_support(&self, x: &FieldElement) -> bool {
        let p = self.p as i64;
        x.factors()
            .iter()
            .all(|(a, e)| e % p == 0 || self.index.contains_key(a))
    }

    /// Labels of the basis classes, e.g. "[3]", "[s]", "[s+6]".
    pub fn labels(&self, arena: &Arena) -> Vec<String> {
        let mut out = vec![format!(
            "[{}]",
            crate::parse::render_constant(arena, arena.field().generator())
        )];
        for a in &self.atoms {
            out.push(format!("[{}]", crate::parse::render_poly(arena, a)));
        }
        out
    }
}

/// The smallest window containing the atoms of `elements` (with full
/// σ-orbits), the constants class, and in variant R the class of s.
pub fn closure_space(arena: &Arena, elements: &[FieldElement]) -> SupportSpace {
    let mut seeds: BTreeSet<Poly> = BTreeSet::new();
    if arena.variant() == Variant::R {
        seeds.insert(Poly::x());
    }
    for x in elements {
        seeds.extend(x.factors().keys().cloned());
    }
    let field = arena.field();
    let rank = |a: &Poly| -> (usize, Vec<u32>) {
        let c = a.coeffs();
        let lower = c[..c.len() - 1].iter().rev().map(|&x| field.neg(x)).collect();
        (a.degree(), lower)
    };
    let mut orbits: Vec<Vec<Poly>> = Vec::new();
    let mut seen: BTreeSet<Poly> = BTreeSet::new();
    for atom in seeds {
        if seen.contains(&atom) {
            continue;
        }
        let mut orbit = arena.atom_orbit(&atom);
        orbit.sort_by_key(|a| rank(a));
        seen.extend(orbit.iter().cloned());
        orbits.push(orbit);
    }
    orbits.sort_by_key(|o| rank(&o[0]));
    let atoms: Vec<Poly> = orbits.into_iter().flatten().collect();
    let index: BTreeMap<Poly, usize> = atoms
        .iter()
        .enumerate()
        .map(|(k, a)| (a.clone(), k + 1))
        .collect();

    let p = arena.p();
    let dim = atoms.len() + 1;
    let const_class = |c: u32| field.dlog(c) % p;
    let mut sigma = Matrix::zero(p, dim, dim);
    sigma.set(0, 0, const_class(arena.sigma_const(field.generator())));
    for (k, atom) in atoms.iter().enumerate() {
        let (lead, image) = arena.sigma_atom(atom);
        sigma.set(0, k + 1, const_class(lead));
        let row = index[&image];
        sigma.set(row, k + 1, (sigma.get(row, k + 1) + 1) % p);
    }
    SupportSpace {
        p,
        atoms,
        index,
        sigma,
    }
}

/// The window spanned by a given space and further elements.
pub fn enlarge_space(arena: &Arena, space: &SupportSpace, extra: &[FieldElement]) -> SupportSpace {
    let mut elements: Vec<FieldElement> = space
        .atoms
        .iter()
        .map(|a| FieldElement::atom(a.clone(), 1))
        .collect();
    elements.extend(extra.iter().cloned());
    closure_space(arena, &elements)
}

pub fn class_of(arena: &Arena, space: &SupportSpace, x: &FieldElement) -> Result<KummerClass> {
    let p = arena.p();
    let mut c = space.zero();
    c.coords[0] = arena.field().dlog(x.constant_part()) % p;
    for (atom, &e) in x.factors() {
        let r = e.rem_euclid(p as i64) as u64;
        if r == 0 {
            continue;
        }
        let k = space.coordinate_of(atom).ok_or(Error::SupportExceeded)?;
        c.coords[k] = r;
    }
    Ok(c)
}

/// Canonical representative g^{c₀}·∏ atom^{c_k} with exponents in [0, p).
pub fn lift_class(arena: &Arena, space: &SupportSpace, c: &KummerClass) -> Result<FieldElement> {
    check_class(space, c)?;
    let field = arena.field();
    let constant = field.gen_pow(c.coords[0] as i64);
    let mut x = FieldElement::constant(constant)?;
    for (k, atom) in space.atoms.iter().enumerate() {
        let e = c.coords[k + 1];
        if e != 0 {
            x = x.mul(field, &FieldElement::atom(atom.clone(), e as i64));
        }
    }
    Ok(x)
}

fn check_class(space: &SupportSpace, c: &KummerClass) -> Result<()> {
    if c.coords.len() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: c.coords.len(),
        });
    }
    if c.coords.iter().any(|&x| x >= space.p) {
        return Err(Error::InvalidInput("class coordinates must be reduced mod p".into()));
    }
    Ok(())
}

pub fn rho_apply(space: &SupportSpace, c: &KummerClass, k: usize) -> Result<KummerClass> {
    check_class(space, c)?;
    Ok(KummerClass {
        coords: space.module().rho_apply(&c.coords, k)?,
    })
}

pub fn class_add(space: &SupportSpace, a: &KummerClass, b: &KummerClass) -> KummerClass {
    KummerClass {
        coords: crate::linalg::add_vec(&a.coords, &b.coords, space.p),
    }
}

pub fn class_scale(space: &SupportSpace, a: &KummerClass, k: u64) -> KummerClass {
    KummerClass {
        coords: crate::linalg::scale_vec(&a.coords, k, space.p),
    }
}

/// Index of an element whose class lies in J_{p−1}: the residue e with
/// σ(r)/r = ξ^e for r a p-th root of N(x). `None` when N(x) is not a p-th
/// power in K.
pub fn index_of_element(arena: &Arena, x: &FieldElement) -> Option<u64> {
    let root = arena.pth_root(&arena.norm(x))?;
    let ratio = arena.div(&arena.sigma(&root), &root);
    debug_assert!(ratio.is_constant(), "σ(r)/r of a norm root is a root of unity");
    let field = arena.field();
    let mut power = 1;
    for e in 0..arena.p() {
        if power == ratio.constant_part() && ratio.is_constant() {
            return Some(e);
        }
        power = field.mul(power, arena.xi());
    }
    unreachable!("σ(r)/r is a p-th root of unity")
}

pub fn class_profile(arena: &Arena, space: &SupportSpace, c: &KummerClass) -> Result<ClassProfile> {
    check_class(space, c)?;
    let length = space.module().module_length(&c.coords)?;
    let index = if (length as u64) < arena.p() {
        let x = lift_class(arena, space, c)?;
        IndexValue::Defined(index_of_element(arena, &x).expect("class lies in J_{p−1}"))
    } else {
        IndexValue::Undefined
    };
    Ok(ClassProfile { length, index })
}

pub fn decompose_classes(space: &SupportSpace, classes: &[KummerClass]) -> Result<Vec<(KummerClass, usize)>> {
    for c in classes {
        check_class(space, c)?;
    }
    let gens: Vec<Vec<u64>> = classes.iter().map(|c| c.coords.clone()).collect();
    let blocks: Vec<Block> = space.module().module_decompose(&gens)?;
    Ok(blocks
        .into_iter()
        .map(|b| (KummerClass { coords: b.generator }, b.length))
        .collect())
}

pub fn identify_galois_group(
    arena: &Arena,
    space: &SupportSpace,
    generator: &KummerClass,
) -> Result<(usize, ELabel)> {
    let profile = class_profile(arena, space, generator)?;
    if profile.length == 0 {
        return Err(Error::InvalidInput("the zero class generates no extension".into()));
    }
    let label = match profile.index {
        IndexValue::Undefined => ELabel::NotApplicable,
        IndexValue::Defined(0) => ELabel::Zero,
        IndexValue::Defined(_) => ELabel::Nonzero,
    };
    Ok((profile.length, label))
}

/// An automorphism of L_M: σ^k on K, and r_j ↦ c_j·∏_m r_m^{E_jm} on the
/// formal radicals r_j = (β_j)^{1/p}, with exponents reduced into [0, p).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct RadicalMap {
    k: u64,
    images: Vec<(FieldElement, Vec<u64>)>,
}

struct RadicalSystem<'a> {
    arena: &'a Arena,
    /// β_0, …, β_{i−1}.
    radicands: Vec<FieldElement>,
}

impl RadicalSystem<'_> {
    /// Reduces c·∏ r^E with arbitrary nonnegative exponents.
    fn reduce(&self, c: FieldElement, exps: Vec<u64>) -> (FieldElement, Vec<u64>) {
        let p = self.arena.p();
        let field = self.arena.field();
        let mut c = c;
        let mut out = Vec::with_capacity(exps.len());
        for (m, e) in exps.into_iter().enumerate() {
            let carry = e / p;
            if carry > 0 {
                c = c.mul(field, &self.radicands[m].pow(field, carry as i64));
            }
            out.push(e % p);
        }
        (c, out)
    }

    /// g(c·∏ r^E).
    fn apply(&self, g: &RadicalMap, c: &FieldElement, exps: &[u64]) -> (FieldElement, Vec<u64>) {
        let field = self.arena.field();
        let mut coeff = self.arena.sigma_pow(c, g.k);
        let mut total = vec![0u64; exps.len()];
        for (m, &e) in exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let (cm, em) = &g.images[m];
            coeff = coeff.mul(field, &cm.pow(field, e as i64));
            for (t, &x) in total.iter_mut().zip(em) {
                *t += x * e;
            }
        }
        self.reduce(coeff, total)
    }

    fn compose(&self, g: &RadicalMap, h: &RadicalMap) -> RadicalMap {
        RadicalMap {
            k: (g.k + h.k) % self.arena.p(),
            images: h
                .images
                .iter()
                .map(|(c, e)| self.apply(g, c, e))
                .collect(),
        }
    }
}

/// Builds Gal(L_M/F) for M generated by [β] as a multiplication table on
/// formal radicals of β, ρβ, …, ρ^{i−1}β. Index 0 is the identity.
pub fn abstract_galois_group(
    arena: &Arena,
    space: &SupportSpace,
    generator: &KummerClass,
    representative: &FieldElement,
) -> Result<CayleyTable> {
    if &class_of(arena, space, representative)? != generator {
        return Err(Error::InvalidInput(
            "representative's class differs from the generator".into(),
        ));
    }
    let p = arena.p();
    let length = class_profile(arena, space, generator)?.length;
    if length == 0 {
        return Err(Error::InvalidInput("the zero class generates no extension".into()));
    }
    let order = (p as usize).pow(length as u32 + 1);
    if order > ABSTRACT_GROUP_CAP.min(ORDER_CAP) {
        return Err(Error::SizeCap {
            size: order,
            cap: ABSTRACT_GROUP_CAP,
        });
    }

    let mut radicands = vec![representative.clone()];
    for _ in 1..length {
        let last = radicands.last().expect("nonempty");
        radicands.push(arena.div(&arena.sigma(last), last));
    }
    let last = radicands.last().expect("nonempty");
    let tail = arena.div(&arena.sigma(last), last);
    let tail_root = arena
        .pth_root(&tail)
        .expect("ρ^i β is a p-th power when l(M_β) = i");
    let sys = RadicalSystem {
        arena,
        radicands,
    };

    let unit = |j: usize| -> Vec<u64> {
        let mut v = vec![0; length];
        v[j] = 1;
        v
    };
    let identity = RadicalMap {
        k: 0,
        images: (0..length).map(|j| (FieldElement::one(), unit(j))).collect(),
    };
    // σ̃: r_j ↦ r_j·r_{j+1}, r_{i−1} ↦ y·r_{i−1} with y^p = σ(β_{i−1})/β_{i−1}
    let sigma_lift = RadicalMap {
        k: 1,
        images: (0..length)
            .map(|j| {
                if j + 1 < length {
                    let mut e = unit(j);
                    e[j + 1] = 1;
                    (FieldElement::one(), e)
                } else {
                    (tail_root.clone(), unit(j))
                }
            })
            .collect(),
    };
    let xi = arena.xi_element();
    let characters: Vec<RadicalMap> = (0..length)
        .map(|m| RadicalMap {
            k: 0,
            images: (0..length)
                .map(|j| {
                    let c = if j == m { xi.clone() } else { FieldElement::one() };
                    (c, unit(j))
                })
                .collect(),
        })
        .collect();
    let mut gens = vec![sigma_lift];
    gens.extend(characters);

    let mut elements: Vec<RadicalMap> = vec![identity.clone()];
    let mut lookup: HashMap<RadicalMap, usize> = HashMap::from([(identity, 0)]);
    let mut cursor = 0;
    while cursor < elements.len() {
        let x = elements[cursor].clone();
        cursor += 1;
        for g in &gens {
            let y = sys.compose(&x, g);
            if !lookup.contains_key(&y) {
                if elements.len() >= order {
                    return Err(Error::InvalidInput(
                        "radical automorphisms exceed the expected group order".into(),
                    ));
                }
                lookup.insert(y.clone(), elements.len());
                elements.push(y);
            }
        }
    }
    if elements.len() != order {
        return Err(Error::InvalidInput(format!(
            "generated {} automorphisms, expected {order}",
            elements.len()
        )));
    }
    let table: Vec<Vec<u32>> = elements
        .iter()
        .map(|a| {
            elements
                .iter()
                .map(|b| lookup[&sys.compose(a, b)] as u32)
                .collect()
        })
        .collect();
    CayleyTable::new(table)
}

/// Recomputes Υ from class data: variant C searches the powers of the
/// constants generator for a class of nonzero index; variant R checks that
/// [ξ] is nonzero and that the constants class, the fixed atoms of degree
/// at most p and the norm classes of linear atoms all have index 0.
pub fn verify_upsilon(arena: &Arena) -> Result<u8> {
    let field = arena.field();
    let p = arena.p();
    match arena.variant() {
        Variant::C => {
            for k in 1..(field.size() - 1) as i64 {
                let x = FieldElement::constant(field.gen_pow(k))?;
                if let Some(e) = index_of_element(arena, &x) {
                    if e != 0 {
                        return Ok(1);
                    }
                }
            }
            Ok(0)
        }
        Variant::R => {
            if field.dlog(arena.xi()).is_multiple_of(p) {
                return Ok(1);
            }
            let mut candidates = vec![FieldElement::constant(field.generator())?];
            let q = field.size();
            for deg in 1..=p as u32 {
                for code in 0..q.pow(deg) {
                    let mut coeffs: Vec<u32> =
                        (0..deg).map(|k| (code / q.pow(k) % q) as u32).collect();
                    coeffs.push(1);
                    let poly = Poly::new(coeffs);
                    if !field.is_irreducible(&poly) {
                        continue;
                    }
                    let (_, image) = arena.sigma_atom(&poly);
                    let fixed = image == poly;
                    let is_s = poly == Poly::x();
                    let atom = FieldElement::atom(poly, 1);
                    if fixed && !is_s {
                        candidates.push(atom);
                    } else if !fixed && deg == 1 {
                        candidates.push(arena.norm(&atom));
                    }
                }
            }
            for x in candidates {
                if index_of_element(arena, &x) != Some(0) {
                    return Ok(1);
                }
            }
            Ok(0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arena::ArenaConfig;
    use crate::pgroup::{table_isomorphic_to, GroupBie};

    fn arena() -> Arena {
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
    fn closure_of_linear_atom() {
        let a = arena();
        let w = closure_space(&a, &[lin(6)]);
        assert_eq!(w.dim(), 5);
        let t1 = a.from_poly(&Poly::new(vec![6, 0, 0, 1])).unwrap();
        assert_eq!(closure_space(&a, &[t1]), w);
        assert_eq!(closure_space(&a, &[a.constant(3).unwrap()]).dim(), 2);
    }

    #[test]
    fn profiles() {
        let a = arena();
        let w = closure_space(&a, &[lin(6)]);
        let s = class_of(&a, &w, &FieldElement::variable()).unwrap();
        assert_eq!(
            class_profile(&a, &w, &s).unwrap(),
            ClassProfile {
                length: 2,
                index: IndexValue::Defined(1)
            }
        );
        let t1 = a.from_poly(&Poly::new(vec![6, 0, 0, 1])).unwrap();
        let c = class_of(&a, &w, &t1).unwrap();
        assert_eq!(
            class_profile(&a, &w, &c).unwrap(),
            ClassProfile {
                length: 1,
                index: IndexValue::Defined(0)
            }
        );
        let c = class_of(&a, &w, &lin(6)).unwrap();
        assert_eq!(
            class_profile(&a, &w, &c).unwrap(),
            ClassProfile {
                length: 3,
                index: IndexValue::Undefined
            }
        );
        assert_eq!(
            rho_apply(&w, &c, 2).unwrap(),
            class_of(&a, &w, &t1).unwrap()
        );
    }

    #[test]
    fn heisenberg_from_radicals() {
        let a = arena();
        let beta = lin(3).div(a.field(), &lin(6)).scale(a.field(), 2).unwrap();
        let w = closure_space(&a, std::slice::from_ref(&beta));
        let c = class_of(&a, &w, &beta).unwrap();
        let table = abstract_galois_group(&a, &w, &c, &beta).unwrap();
        assert!(table_isomorphic_to(&table, &GroupBie::new(3, 2, 0).unwrap()).unwrap());
    }

    #[test]
    fn upsilon_recomputed() {
        let a = arena();
        assert_eq!(verify_upsilon(&a).unwrap(), 0);
        let c = Arena::new(ArenaConfig {
            p: 3,
            variant: Variant::C,
            q: 7,
        })
        .unwrap();
        assert_eq!(verify_upsilon(&c).unwrap(), 1);
    }
}
