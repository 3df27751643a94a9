//! The groups B_{i,e}: extensions of A/A_i by G = Z/p with σ̃^p = e·x^{i−1},
//! together with exhaustive invariants, isomorphism and G-surjection search.
//!
//! Group algorithms run over [`FiniteGroup`], whose elements are indices
//! `0..order` with 0 the identity.

use std::collections::VecDeque;

use serde::Serialize;

use crate::arith::is_odd_prime;
use crate::error::{invalid, Error, Result};

/// Largest group order handled by the exhaustive routines.
pub const ORDER_CAP: usize = 15625;

pub trait FiniteGroup {
    fn order(&self) -> usize;
    fn mul(&self, a: usize, b: usize) -> usize;

    fn identity(&self) -> usize {
        0
    }

    fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity() {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    fn inverse(&self, a: usize) -> usize {
        let n = self.element_order(a);
        self.pow(a, n - 1)
    }

    fn pow(&self, a: usize, mut e: usize) -> usize {
        let mut acc = self.identity();
        let mut base = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// aba⁻¹b⁻¹.
    fn commutator(&self, a: usize, b: usize) -> usize {
        let ab = self.mul(a, b);
        let ab_ai = self.mul(ab, self.inverse(a));
        self.mul(ab_ai, self.inverse(b))
    }
}

/// A group given by its full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyTable {
    table: Vec<Vec<u32>>,
}

impl CayleyTable {
    /// Validates closure, identity at index 0, and associativity.
    pub fn new(table: Vec<Vec<u32>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::InvalidInput("empty multiplication table".into()));
        }
        if n > ORDER_CAP {
            return Err(Error::SizeCap {
                size: n,
                cap: ORDER_CAP,
            });
        }
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            if row.iter().any(|&x| x as usize >= n) {
                return Err(Error::InvalidInput("table entry out of range".into()));
            }
            if row[0] as usize != a || table[0][a] as usize != a {
                return Err(Error::InvalidInput("index 0 is not the identity".into()));
            }
        }
        let g = CayleyTable { table };
        if n <= 729 {
            for a in 0..n {
                for b in 0..n {
                    let ab = g.mul(a, b);
                    for c in 0..n {
                        if g.mul(ab, c) != g.mul(a, g.mul(b, c)) {
                            return Err(Error::InvalidInput("table is not associative".into()));
                        }
                    }
                }
            }
        }
        Ok(g)
    }

    pub fn table(&self) -> &[Vec<u32>] {
        &self.table
    }
}

impl FiniteGroup for CayleyTable {
    fn order(&self) -> usize {
        self.table.len()
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b] as usize
    }
}

/// An element (v, k) of B_{i,e}: v ∈ A/A_i in the basis {1, x, …, x^{i−1}},
/// k the exponent of σ̃.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BieElement {
    pub v: Vec<u64>,
    pub k: u64,
}

/// The group B_{i,e}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupBie {
    p: u64,
    i: usize,
    e: u64,
}

impl GroupBie {
    pub fn new(p: u64, i: usize, e: i64) -> Result<Self> {
        if !is_odd_prime(p) {
            return Err(invalid("p", format!("{p} is not an odd prime")));
        }
        if i == 0 || i as u64 > p {
            return Err(invalid("i", format!("need 1 ≤ i ≤ {p}, got {i}")));
        }
        Ok(GroupBie {
            p,
            i,
            e: e.rem_euclid(p as i64) as u64,
        })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn length(&self) -> usize {
        self.i
    }

    pub fn twist(&self) -> u64 {
        self.e
    }

    /// σ̃ = (0, 1).
    pub fn sigma_lift(&self) -> BieElement {
        BieElement {
            v: vec![0; self.i],
            k: 1,
        }
    }

    /// τ̃₀ = (1, 0).
    pub fn tau_lift(&self) -> BieElement {
        let mut v = vec![0; self.i];
        v[0] = 1;
        BieElement { v, k: 0 }
    }

    fn check(&self, x: &BieElement) -> Result<()> {
        if x.v.len() != self.i {
            return Err(Error::DimensionMismatch {
                expected: self.i,
                found: x.v.len(),
            });
        }
        if x.k >= self.p || x.v.iter().any(|&c| c >= self.p) {
            return Err(Error::InvalidInput(format!(
                "element entries must lie in 0..{}",
                self.p
            )));
        }
        Ok(())
    }

    /// σ^k acting on A/A_i: multiplication by (1 + x)^k, truncated.
    fn sigma_pow_apply(&self, w: &[u64], k: u64) -> Vec<u64> {
        let mut out = w.to_vec();
        for _ in 0..k {
            for m in (1..self.i).rev() {
                out[m] = (out[m] + out[m - 1]) % self.p;
            }
        }
        out
    }

    pub fn group_mul(&self, x: &BieElement, y: &BieElement) -> Result<BieElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.mul_unchecked(x, y))
    }

    fn mul_unchecked(&self, x: &BieElement, y: &BieElement) -> BieElement {
        let mut v = self.sigma_pow_apply(&y.v, x.k);
        for (a, b) in v.iter_mut().zip(&x.v) {
            *a = (*a + b) % self.p;
        }
        if x.k + y.k >= self.p {
            v[self.i - 1] = (v[self.i - 1] + self.e) % self.p;
        }
        BieElement {
            v,
            k: (x.k + y.k) % self.p,
        }
    }

    pub fn index_of(&self, x: &BieElement) -> usize {
        let mut idx = 0u64;
        for &c in x.v.iter().rev() {
            idx = idx * self.p + c;
        }
        (idx * self.p + x.k) as usize
    }

    pub fn element(&self, idx: usize) -> BieElement {
        let mut r = idx as u64;
        let k = r % self.p;
        r /= self.p;
        let mut v = Vec::with_capacity(self.i);
        for _ in 0..self.i {
            v.push(r % self.p);
            r /= self.p;
        }
        BieElement { v, k }
    }

    fn check_cap(&self) -> Result<()> {
        let n = self.order();
        if n > ORDER_CAP {
            return Err(Error::SizeCap {
                size: n,
                cap: ORDER_CAP,
            });
        }
        Ok(())
    }

    /// Generators (σ̃, τ̃₀) as indices.
    pub fn generators(&self) -> Vec<usize> {
        vec![
            self.index_of(&self.sigma_lift()),
            self.index_of(&self.tau_lift()),
        ]
    }
}

impl FiniteGroup for GroupBie {
    fn order(&self) -> usize {
        (self.p as usize).pow(self.i as u32 + 1)
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.index_of(&self.mul_unchecked(&self.element(a), &self.element(b)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupProfile {
    pub order: usize,
    pub exponent: usize,
    pub center_size: usize,
    pub frattini_size: usize,
    pub nilpotency_class: usize,
    pub min_generators: usize,
}

/// Subgroup generated by `gens`, as a membership mask.
pub fn subgroup_closure<G: FiniteGroup + ?Sized>(g: &G, gens: &[usize]) -> Vec<bool> {
    let mut member = vec![false; g.order()];
    member[g.identity()] = true;
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        for &s in gens {
            let y = g.mul(x, s);
            if !member[y] {
                member[y] = true;
                queue.push_back(y);
            }
        }
    }
    member
}

fn mask_elements(mask: &[bool]) -> Vec<usize> {
    mask.iter()
        .enumerate()
        .filter_map(|(x, &m)| m.then_some(x))
        .collect()
}

/// Greedy generating set: elements in index order not already generated.
pub fn generating_set<G: FiniteGroup + ?Sized>(g: &G) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut member = subgroup_closure(g, &gens);
    for x in 0..g.order() {
        if !member[x] {
            gens.push(x);
            member = subgroup_closure(g, &gens);
        }
    }
    gens
}

/// Normal closure of `seeds` under conjugation by the generating set.
fn normal_closure<G: FiniteGroup + ?Sized>(g: &G, seeds: &[usize], gens: &[usize]) -> Vec<bool> {
    let mut current: Vec<usize> = seeds.to_vec();
    loop {
        let mask = subgroup_closure(g, &current);
        let mut extra = Vec::new();
        for h in mask_elements(&mask) {
            for &s in gens {
                let c = g.mul(g.mul(s, h), g.inverse(s));
                if !mask[c] && !extra.contains(&c) {
                    extra.push(c);
                }
            }
        }
        if extra.is_empty() {
            return mask;
        }
        current.extend(extra);
    }
}

/// The Frattini subgroup of a p-group: G^p·[G, G].
pub fn frattini_subgroup<G: FiniteGroup + ?Sized>(g: &G, p: usize, gens: &[usize]) -> Vec<bool> {
    let mut seeds: Vec<usize> = Vec::new();
    let mut seen = vec![false; g.order()];
    for x in 0..g.order() {
        let y = g.pow(x, p);
        if !seen[y] {
            seen[y] = true;
            seeds.push(y);
        }
    }
    for &a in gens {
        for &b in gens {
            let c = g.commutator(a, b);
            if !seen[c] {
                seen[c] = true;
                seeds.push(c);
            }
        }
    }
    normal_closure(g, &seeds, gens)
}

/// Minimal generating set of a p-group: elements independent modulo Φ.
pub fn minimal_generators<G: FiniteGroup + ?Sized>(g: &G, p: usize) -> Vec<usize> {
    let gens = generating_set(g);
    let phi = mask_elements(&frattini_subgroup(g, p, &gens));
    let mut chosen = Vec::new();
    let mut member = subgroup_closure(g, &phi);
    for x in 0..g.order() {
        if !member[x] {
            chosen.push(x);
            let mut all = phi.clone();
            all.extend(&chosen);
            member = subgroup_closure(g, &all);
        }
    }
    chosen
}

/// Invariants of a finite p-group computed by enumeration.
pub fn profile_of<G: FiniteGroup + ?Sized>(g: &G, p: usize, gens: &[usize]) -> Result<GroupProfile> {
    let n = g.order();
    if n > ORDER_CAP {
        return Err(Error::SizeCap {
            size: n,
            cap: ORDER_CAP,
        });
    }
    let exponent = (0..n).map(|x| g.element_order(x)).max().unwrap_or(1);
    let is_central = |x: usize| gens.iter().all(|&s| g.mul(x, s) == g.mul(s, x));
    let center_size = (0..n).filter(|&x| is_central(x)).count();
    let frattini_size = mask_elements(&frattini_subgroup(g, p, gens)).len();
    let mut min_generators = 0;
    let mut quotient = n / frattini_size;
    while quotient > 1 {
        quotient /= p;
        min_generators += 1;
    }

    // upper central series: x ∈ Z_{k+1} iff [x, s] ∈ Z_k for all generators s
    let mut upper = vec![false; n];
    upper[g.identity()] = true;
    let mut nilpotency_class = 0;
    while upper.iter().any(|&m| !m) {
        let next: Vec<bool> = (0..n)
            .map(|x| gens.iter().all(|&s| upper[g.commutator(x, s)]))
            .collect();
        if next == upper {
            return Err(Error::InvalidInput("group is not nilpotent".into()));
        }
        upper = next;
        nilpotency_class += 1;
    }
    Ok(GroupProfile {
        order: n,
        exponent,
        center_size,
        frattini_size,
        nilpotency_class,
        min_generators,
    })
}

/// Extends an assignment of generator images to a homomorphism, returning
/// the full map when the assignment is consistent.
pub fn extend_homomorphism<G: FiniteGroup + ?Sized, H: FiniteGroup + ?Sized>(
    g: &G,
    gens: &[usize],
    h: &H,
    images: &[usize],
) -> Option<Vec<usize>> {
    const UNSET: usize = usize::MAX;
    let mut map = vec![UNSET; g.order()];
    map[g.identity()] = h.identity();
    let mut queue = VecDeque::from([g.identity()]);
    while let Some(x) = queue.pop_front() {
        for (&s, &img) in gens.iter().zip(images) {
            let y = g.mul(x, s);
            let fy = h.mul(map[x], img);
            if map[y] == UNSET {
                map[y] = fy;
                queue.push_back(y);
            } else if map[y] != fy {
                return None;
            }
        }
    }
    if map.contains(&UNSET) {
        return None;
    }
    Some(map)
}

/// First isomorphism from `g` onto `h` in index order of the images of
/// `gens`; returns the generator images.
pub fn find_isomorphism<G: FiniteGroup + ?Sized, H: FiniteGroup + ?Sized>(
    g: &G,
    gens: &[usize],
    h: &H,
) -> Option<Vec<usize>> {
    let n = g.order();
    if n != h.order() {
        return None;
    }
    let g_orders: Vec<usize> = gens.iter().map(|&s| g.element_order(s)).collect();
    let h_orders: Vec<usize> = (0..n).map(|x| h.element_order(x)).collect();
    let candidates: Vec<Vec<usize>> = g_orders
        .iter()
        .map(|&o| (0..n).filter(|&x| h_orders[x] == o).collect())
        .collect();
    let mut choice = vec![0usize; gens.len()];
    if candidates.iter().any(|c| c.is_empty()) {
        return None;
    }
    loop {
        let images: Vec<usize> = choice
            .iter()
            .zip(&candidates)
            .map(|(&c, cands)| cands[c])
            .collect();
        if let Some(map) = extend_homomorphism(g, gens, h, &images) {
            let mut hit = vec![false; n];
            for &y in &map {
                hit[y] = true;
            }
            if hit.iter().all(|&b| b) {
                return Some(images);
            }
        }
        // advance the odometer, first generator most significant
        let mut slot = gens.len();
        loop {
            if slot == 0 {
                return None;
            }
            slot -= 1;
            choice[slot] += 1;
            if choice[slot] < candidates[slot].len() {
                break;
            }
            choice[slot] = 0;
        }
    }
}

pub fn group_profile(g: &GroupBie) -> Result<GroupProfile> {
    g.check_cap()?;
    profile_of(g, g.p as usize, &g.generators())
}

/// Isomorphism test between two B_{i,e}; on success returns the images of
/// (σ̃, τ̃₀) of the first group.
pub fn group_isomorphic(g1: &GroupBie, g2: &GroupBie) -> Result<Option<(BieElement, BieElement)>> {
    g1.check_cap()?;
    g2.check_cap()?;
    if g1.order() != g2.order() || group_profile(g1)? != group_profile(g2)? {
        return Ok(None);
    }
    Ok(find_isomorphism(g1, &g1.generators(), g2)
        .map(|imgs| (g2.element(imgs[0]), g2.element(imgs[1]))))
}

/// Isomorphism test between an arbitrary table and B_{i,e}.
pub fn table_isomorphic_to(table: &CayleyTable, target: &GroupBie) -> Result<bool> {
    target.check_cap()?;
    if table.order() != target.order() {
        return Ok(false);
    }
    let p = target.p as usize;
    let gens = minimal_generators(table, p);
    let tg = generating_set(table);
    if profile_of(table, p, &tg)? != group_profile(target)? {
        return Ok(false);
    }
    Ok(find_isomorphism(table, &gens, target).is_some())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurjectionReport {
    pub exists: bool,
    /// Size of the kernel when a surjection exists.
    pub kernel_size: Option<usize>,
    /// Description of the kernel inside A/A_i.
    pub kernel: Option<String>,
}

/// Prediction for G-surjections B_{i,e} → B_{j,e2}: they exist exactly
/// when i > j and e2 = 0, with kernel A_j/A_i.
pub fn list_g_surjections(i: usize, e: i64, j: usize, e2: i64, p: u64) -> Result<SurjectionReport> {
    GroupBie::new(p, i, e)?;
    GroupBie::new(p, j, e2)?;
    if i > j && e2.rem_euclid(p as i64) == 0 {
        Ok(SurjectionReport {
            exists: true,
            kernel_size: Some((p as usize).pow((i - j) as u32)),
            kernel: Some(format!("A_{j}/A_{i}")),
        })
    } else {
        Ok(SurjectionReport {
            exists: false,
            kernel_size: None,
            kernel: None,
        })
    }
}

/// Exhaustive search for a G-surjection B_{i,e} → B_{j,e2} with nontrivial
/// kernel: σ̃ ↦ (w, 1), τ̃₀ ↦ (v, 0). Returns the kernel as element indices
/// of the source when found.
pub fn search_g_surjection(src: &GroupBie, dst: &GroupBie) -> Result<Option<Vec<usize>>> {
    src.check_cap()?;
    dst.check_cap()?;
    if src.p != dst.p {
        return Err(invalid("p", "groups over different primes"));
    }
    let p = src.p;
    let vecs = (p as usize).pow(dst.i as u32);
    let gens = src.generators();
    for w in 0..vecs {
        let sigma_img = dst.index_of(&BieElement {
            v: dst.element(w * p as usize).v,
            k: 1,
        });
        for v in 0..vecs {
            let tau_img = dst.index_of(&BieElement {
                v: dst.element(v * p as usize).v,
                k: 0,
            });
            let Some(map) = extend_homomorphism(src, &gens, dst, &[sigma_img, tau_img]) else {
                continue;
            };
            let mut hit = vec![false; dst.order()];
            for &y in &map {
                hit[y] = true;
            }
            if !hit.iter().all(|&b| b) {
                continue;
            }
            let kernel: Vec<usize> = (0..src.order())
                .filter(|&x| map[x] == dst.identity())
                .collect();
            if kernel.len() > 1 {
                return Ok(Some(kernel));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_lift_power_is_twist() {
        let g = GroupBie::new(3, 2, 1).unwrap();
        let s = g.sigma_lift();
        let s2 = g.group_mul(&s, &s).unwrap();
        let s3 = g.group_mul(&s2, &s).unwrap();
        assert_eq!(s3, BieElement { v: vec![0, 1], k: 0 });
    }

    #[test]
    fn heisenberg_commutator() {
        let g = GroupBie::new(3, 2, 0).unwrap();
        let [s, t] = [g.generators()[0], g.generators()[1]];
        let c = g.element(g.commutator(s, t));
        assert_eq!(c, BieElement { v: vec![0, 1], k: 0 });
    }

    #[test]
    fn malformed_elements_rejected() {
        let g = GroupBie::new(3, 2, 0).unwrap();
        let bad = BieElement { v: vec![0], k: 0 };
        assert!(g.group_mul(&bad, &g.sigma_lift()).is_err());
        let bad = BieElement { v: vec![0, 3], k: 0 };
        assert!(g.group_mul(&bad, &g.sigma_lift()).is_err());
        assert!(GroupBie::new(3, 4, 0).is_err());
        assert!(GroupBie::new(4, 1, 0).is_err());
    }

    #[test]
    fn index_round_trip() {
        let g = GroupBie::new(3, 3, 2).unwrap();
        for idx in 0..g.order() {
            assert_eq!(g.index_of(&g.element(idx)), idx);
        }
        assert_eq!(g.element(0), BieElement { v: vec![0; 3], k: 0 });
    }

    #[test]
    fn profiles_at_three() {
        let h = group_profile(&GroupBie::new(3, 2, 0).unwrap()).unwrap();
        assert_eq!(
            h,
            GroupProfile {
                order: 27,
                exponent: 3,
                center_size: 3,
                frattini_size: 3,
                nilpotency_class: 2,
                min_generators: 2,
            }
        );
        let ab = group_profile(&GroupBie::new(3, 1, 0).unwrap()).unwrap();
        assert_eq!((ab.order, ab.exponent, ab.nilpotency_class), (9, 3, 1));
        let b3 = group_profile(&GroupBie::new(3, 3, 0).unwrap()).unwrap();
        assert_eq!((b3.order, b3.exponent), (81, 9));
    }

    #[test]
    fn lemma_one_examples() {
        let b = |i, e| GroupBie::new(3, i, e).unwrap();
        assert!(group_isomorphic(&b(2, 1), &b(2, 2)).unwrap().is_some());
        assert!(group_isomorphic(&b(2, 0), &b(2, 1)).unwrap().is_none());
        assert!(group_isomorphic(&b(3, 1), &b(3, 0)).unwrap().is_some());
    }

    #[test]
    fn surjection_predictions() {
        let r = list_g_surjections(2, 1, 1, 0, 3).unwrap();
        assert!(r.exists);
        assert_eq!(r.kernel.as_deref(), Some("A_1/A_2"));
        assert!(!list_g_surjections(2, 0, 2, 1, 3).unwrap().exists);
        assert!(!list_g_surjections(3, 0, 1, 1, 3).unwrap().exists);
    }

    #[test]
    fn table_round_trip() {
        let g = GroupBie::new(3, 2, 0).unwrap();
        let table: Vec<Vec<u32>> = (0..g.order())
            .map(|a| (0..g.order()).map(|b| g.mul(a, b) as u32).collect())
            .collect();
        let t = CayleyTable::new(table).unwrap();
        assert!(table_isomorphic_to(&t, &g).unwrap());
        assert!(!table_isomorphic_to(&t, &GroupBie::new(3, 2, 1).unwrap()).unwrap());
    }
}
