#![allow(dead_code)]

use galembed::arena::{Arena, ArenaConfig, FieldElement, Poly, Variant};
use galembed::kummer::{class_of, closure_space, lift_class, KummerClass, SupportSpace};
use galembed::linalg::{Matrix, Span};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn arena(variant: Variant, q: u64) -> Arena {
    Arena::new(ArenaConfig { p: 3, variant, q }).unwrap()
}

/// A monic linear atom s − c with c ≠ 0.
pub fn random_linear(arena: &Arena, rng: &mut ChaCha8Rng) -> FieldElement {
    let size = arena.field().size() as u32;
    let c = rng.gen_range(1..size);
    FieldElement::atom(Poly::new(vec![c, 1]), 1)
}

/// A window spanned by `orbits` random linear atoms and their conjugates.
pub fn random_window(arena: &Arena, orbits: usize, rng: &mut ChaCha8Rng) -> SupportSpace {
    loop {
        let atoms: Vec<FieldElement> = (0..orbits).map(|_| random_linear(arena, rng)).collect();
        let space = closure_space(arena, &atoms);
        let extra = usize::from(arena.variant() == Variant::R);
        if space.dim() == 1 + extra + orbits * arena.p() as usize {
            return space;
        }
    }
}

pub fn random_vector(p: u64, dim: usize, rng: &mut ChaCha8Rng) -> Vec<u64> {
    (0..dim).map(|_| rng.gen_range(0..p)).collect()
}

/// A random element of the span of `basis`.
pub fn random_combination(p: u64, dim: usize, basis: &[Vec<u64>], rng: &mut ChaCha8Rng) -> Vec<u64> {
    let mut v = vec![0; dim];
    for b in basis {
        let k = rng.gen_range(0..p);
        for (x, y) in v.iter_mut().zip(b) {
            *x = (*x + k * y) % p;
        }
    }
    v
}

/// A random class of module length exactly `length` in the window.
pub fn random_class_of_length(
    arena: &Arena,
    space: &SupportSpace,
    length: usize,
    rng: &mut ChaCha8Rng,
) -> KummerClass {
    let p = arena.p();
    let kernel = space.rho_matrix().pow(length as u64).kernel();
    let module = space.module();
    loop {
        let v = random_combination(p, space.dim(), &kernel, rng);
        if module.module_length(&v).unwrap() == length {
            return KummerClass { coords: v };
        }
    }
}

pub fn random_element_of_length(
    arena: &Arena,
    space: &SupportSpace,
    length: usize,
    rng: &mut ChaCha8Rng,
) -> FieldElement {
    let c = random_class_of_length(arena, space, length, rng);
    lift_class(arena, space, &c).unwrap()
}

/// σ(x)/x iterated k times, by field arithmetic only.
pub fn rho_field(arena: &Arena, x: &FieldElement, k: usize) -> FieldElement {
    let mut y = x.clone();
    for _ in 0..k {
        y = arena.div(&arena.sigma(&y), &y);
    }
    y
}

/// Exhaustive search over every class of the window for ω with
/// ρ^k(ω)·target^{-1} a p-th power (times ξ^{-e} for some e in `twists`).
pub fn brute_force_preimage(
    arena: &Arena,
    space: &SupportSpace,
    k: usize,
    target: &FieldElement,
    twists: &[u64],
) -> Option<FieldElement> {
    let p = arena.p();
    let dim = space.dim();
    let total = (p as usize).pow(dim as u32);
    for n in 0..total {
        let mut coords = vec![0; dim];
        let mut r = n;
        for c in coords.iter_mut() {
            *c = (r % p as usize) as u64;
            r /= p as usize;
        }
        let omega = lift_class(arena, space, &KummerClass { coords }).unwrap();
        let image = rho_field(arena, &omega, k);
        for &e in twists {
            let shifted = arena.mul(&arena.pow(&arena.xi_element(), e as i64), &image);
            if arena.is_pth_power(&arena.div(&shifted, target)) {
                return Some(omega);
            }
        }
    }
    None
}

/// Rank-based membership of ρ^k-images, independent of the solver.
pub fn in_image(space: &SupportSpace, k: usize, v: &[u64]) -> bool {
    let m: Matrix = space.rho_matrix().pow(k as u64);
    let mut span = Span::new(space.prime(), space.dim());
    for c in 0..m.cols() {
        span.insert(&m.column(c));
    }
    span.contains(v)
}

pub fn class(arena: &Arena, x: &FieldElement) -> (SupportSpace, KummerClass) {
    let space = closure_space(arena, std::slice::from_ref(x));
    let c = class_of(arena, &space, x).unwrap();
    (space, c)
}
