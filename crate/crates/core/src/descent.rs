//! Transfer between a base without p-th roots of unity and its cyclotomic
//! lift: the automorphism ε of the lifted radical arena, the eigenspace
//! projector T, and a solvability cross-check through T.
//!
//! The lift is variant R over F_{q0^dε}(s). ε acts on constants by the
//! q0-power Frobenius and sends s to 1/s, which makes it commute with σ.

use crate::arena::{Arena, ArenaConfig, FieldElement, Poly, Variant};
use crate::arith::{inv_mod, mult_order, pow_mod, prime_power};
use crate::embed::{solve, EmbeddingProblem, Kind, SolveReport};
use crate::error::{invalid, Error, Result};
use crate::kummer::{
    class_of, class_profile, closure_space, enlarge_space, lift_class, IndexValue, KummerClass,
    SupportSpace,
};
use crate::linalg::{is_zero_vec, scale_vec, sub_vec, Matrix};

#[derive(Clone, Debug)]
pub struct DescentConfig {
    pub p: u64,
    pub q0: u64,
    /// Order of ε, the least d > 1 with p | q0^d − 1.
    pub d_eps: u64,
    /// ε(ξ) = ξ^t_eig.
    pub t_eig: u64,
    /// z·dε·t_eig^{dε−1} ≡ 1 mod p.
    pub z: u64,
    pub arena: Arena,
}

impl DescentConfig {
    pub fn new(p: u64, q0: u64) -> Result<Self> {
        if prime_power(q0).is_none() {
            return Err(invalid("q0", format!("{q0} is not a prime power")));
        }
        if q0.is_multiple_of(p) || (q0 - 1).is_multiple_of(p) {
            return Err(invalid(
                "q0",
                format!("{q0} must be prime to {p} with {p} ∤ {q0} − 1"),
            ));
        }
        let d_eps = mult_order(q0 % p, p);
        if d_eps != 2 {
            return Err(invalid(
                "q0",
                format!("ε has order {d_eps}; only q0 ≡ −1 mod {p} (order 2) is supported"),
            ));
        }
        let arena = Arena::new(ArenaConfig {
            p,
            variant: Variant::R,
            q: q0.pow(d_eps as u32),
        })
        .map_err(|e| match e {
            Error::InvalidParameter { reason, .. } => invalid("q0", reason),
            other => other,
        })?;
        let t_eig = q0 % p;
        let z = inv_mod(d_eps % p * pow_mod(t_eig, d_eps - 1, p) % p, p);
        Ok(DescentConfig {
            p,
            q0,
            d_eps,
            t_eig,
            z,
            arena,
        })
    }

    /// ε(x): c ↦ c^{q0} on constants, s ↦ 1/s.
    pub fn epsilon(&self, x: &FieldElement) -> FieldElement {
        let field = self.arena.field();
        let frob = |c: u32| field.pow(c, self.q0 as i64);
        let mut acc = FieldElement::constant(frob(x.constant_part())).expect("nonzero");
        for (atom, &e) in x.factors() {
            let d = atom.degree();
            let reversed: Vec<u32> = (0..=d).map(|k| frob(atom.coeff(d - k))).collect();
            let image = FieldElement::from_poly(field, &Poly::new(reversed))
                .expect("reversal of a nonzero polynomial")
                .mul(field, &FieldElement::atom(Poly::x(), -(d as i64)));
            acc = acc.mul(field, &image.pow(field, e));
        }
        acc
    }

    /// The smallest window holding `elements` that is stable under σ and ε.
    pub fn epsilon_space(&self, elements: &[FieldElement]) -> SupportSpace {
        let mut space = closure_space(&self.arena, elements);
        loop {
            let images: Vec<FieldElement> = space
                .atoms()
                .iter()
                .map(|a| self.epsilon(&FieldElement::atom(a.clone(), 1)))
                .collect();
            if images.iter().all(|x| space.contains_support(x)) {
                return space;
            }
            space = enlarge_space(&self.arena, &space, &images);
        }
    }

    /// Matrix of ε on the window; errors if the window is not ε-stable.
    pub fn epsilon_matrix(&self, space: &SupportSpace) -> Result<Matrix> {
        let field = self.arena.field();
        let mut cols = Vec::with_capacity(space.dim());
        let g = FieldElement::constant(field.generator())?;
        cols.push(class_of(&self.arena, space, &self.epsilon(&g))?.coords);
        for atom in space.atoms() {
            let image = self.epsilon(&FieldElement::atom(atom.clone(), 1));
            let c = class_of(&self.arena, space, &image).map_err(|_| {
                Error::Precondition("the window is not closed under ε".into())
            })?;
            cols.push(c.coords);
        }
        Ok(Matrix::from_columns(self.p, space.dim(), &cols))
    }

    /// T = z·Σ_{k=1}^{dε} t_eig^{dε−k} ε^{k−1}.
    pub fn projector(&self, space: &SupportSpace) -> Result<Matrix> {
        let eps = self.epsilon_matrix(space)?;
        let p = self.p;
        let mut acc = Matrix::zero(p, space.dim(), space.dim());
        let mut power = Matrix::identity(p, space.dim());
        for k in 1..=self.d_eps {
            acc = acc.add(&power.scale(pow_mod(self.t_eig, self.d_eps - k, p)));
            power = power.mul(&eps);
        }
        Ok(acc.scale(self.z))
    }
}

/// T·c, the J^ε component of a class.
pub fn project_eigen(cfg: &DescentConfig, space: &SupportSpace, c: &KummerClass) -> Result<KummerClass> {
    if c.coords.len() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: c.coords.len(),
        });
    }
    Ok(KummerClass {
        coords: cfg.projector(space)?.mul_vec(&c.coords),
    })
}

#[derive(Clone, Debug)]
pub struct TransferReport {
    /// The problem solved over the lifted arena.
    pub lifted: SolveReport,
    pub basis: Vec<String>,
    pub gamma_in_eigenspace: bool,
    pub projected_gamma: KummerClass,
    /// Verdict for T[γ] over the whole window.
    pub projected_verdict: bool,
    /// Verdict for T[γ] with witnesses restricted to J^ε.
    pub eigen_verdict: bool,
    /// Representative of T[β] when the lifted problem is solvable.
    pub projected_witness: Option<FieldElement>,
    pub witness_ok: Option<bool>,
    pub agreement: bool,
}

/// Linear solvability of ρ^{p−j}x = target (or target − e[ξ] for some
/// e ≢ 0 on the root-of-unity route), with x ranging over `domain`'s image.
fn linear_verdict(
    arena: &Arena,
    space: &SupportSpace,
    domain: &Matrix,
    target: &[u64],
    i: usize,
    j: usize,
    kind: Kind,
) -> Result<bool> {
    let p = arena.p();
    let a = space.rho_matrix().pow(p - j as u64).mul(domain);
    let root_route = kind == Kind::Nonsplit
        && arena.upsilon() == 0
        && i == j + 1
        && j as u64 != p - 1;
    if !root_route {
        return Ok(a.solve(target).is_some());
    }
    let xi = class_of(arena, space, &arena.xi_element())?;
    Ok((1..p).any(|e| a.solve(&sub_vec(target, &scale_vec(&xi.coords, e, p), p)).is_some()))
}

/// Solves E_{i,j}(γ0) over the lift, projects the data to the ε-eigenspace
/// and checks that the verdict and witness survive the projection.
pub fn transfer_check(
    cfg: &DescentConfig,
    gamma0: &FieldElement,
    i: usize,
    j: usize,
    kind: Kind,
) -> Result<TransferReport> {
    let arena = &cfg.arena;
    let prob = EmbeddingProblem {
        gamma: gamma0.clone(),
        i,
        j,
        kind,
    };
    let lifted = solve(arena, &prob, &FieldElement::one())?;

    let mut elements = vec![gamma0.clone(), arena.xi_element()];
    elements.extend(lifted.beta.iter().cloned());
    let space = cfg.epsilon_space(&elements);
    let t = cfg.projector(&space)?;
    let p = cfg.p;
    let cg = class_of(arena, &space, gamma0)?;
    let tg = t.mul_vec(&cg.coords);
    let projected_verdict = linear_verdict(
        arena,
        &space,
        &Matrix::identity(p, space.dim()),
        &tg,
        i,
        j,
        kind,
    )?;
    let eigen_verdict = linear_verdict(arena, &space, &t, &tg, i, j, kind)?;

    let (projected_witness, witness_ok) = match &lifted.beta {
        Some(beta) => {
            let cb = class_of(arena, &space, beta)?;
            let delta = KummerClass {
                coords: t.mul_vec(&cb.coords),
            };
            let rho = space.rho_matrix().pow((i - j) as u64);
            let image = rho.mul_vec(&delta.coords);
            // ρ^{i−j}[β] equals [γ] up to a constant class
            let mut defect = sub_vec(&image, &tg, p);
            defect[0] = 0;
            let pb = class_profile(arena, &space, &cb)?;
            let pd = class_profile(arena, &space, &delta)?;
            let index_kept = match pb.index {
                IndexValue::Defined(e) => pd.index == IndexValue::Defined(e),
                IndexValue::Undefined => true,
            };
            let ok = image == t.mul_vec(&rho.mul_vec(&cb.coords)) && is_zero_vec(&defect) && index_kept;
            (Some(lift_class(arena, &space, &delta)?), Some(ok))
        }
        None => (None, None),
    };

    let agreement = projected_verdict == eigen_verdict
        && (!lifted.solvable || projected_verdict)
        && witness_ok != Some(false);
    Ok(TransferReport {
        basis: space.labels(arena),
        gamma_in_eigenspace: tg == cg.coords,
        projected_gamma: KummerClass { coords: tg },
        projected_verdict,
        eigen_verdict,
        projected_witness,
        witness_ok,
        agreement,
        lifted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_element, render_element};

    fn config() -> DescentConfig {
        DescentConfig::new(3, 5).unwrap()
    }

    #[test]
    fn parameters_for_five() {
        let cfg = config();
        assert_eq!((cfg.d_eps, cfg.t_eig, cfg.z), (2, 2, 1));
        assert_eq!(cfg.arena.q(), 25);
        assert!(DescentConfig::new(3, 7).is_err());
        assert!(DescentConfig::new(3, 6).is_err());
    }

    #[test]
    fn epsilon_is_an_involution_commuting_with_sigma() {
        let cfg = config();
        let a = &cfg.arena;
        for text in ["s+z", "(s^2+3)*(s+1)^-2", "z*s", "t-1"] {
            let x = parse_element(a, text).unwrap();
            assert_eq!(cfg.epsilon(&cfg.epsilon(&x)), x, "{text}");
            assert_eq!(cfg.epsilon(&a.sigma(&x)), a.sigma(&cfg.epsilon(&x)), "{text}");
        }
    }

    #[test]
    fn projector_is_two_plus_epsilon() {
        let cfg = config();
        let a = &cfg.arena;
        let g = FieldElement::constant(a.field().generator()).unwrap();
        let space = cfg.epsilon_space(&[parse_element(a, "s+z").unwrap()]);
        let t = cfg.projector(&space).unwrap();
        let eps = cfg.epsilon_matrix(&space).unwrap();
        let expected = Matrix::identity(3, space.dim()).scale(2).add(&eps);
        assert_eq!(t, expected);
        assert_eq!(t.mul(&t), t);
        let cg = class_of(a, &space, &g).unwrap();
        let projected = project_eigen(&cfg, &space, &cg).unwrap();
        let direct = class_of(a, &space, &a.mul(&a.pow(&g, 2), &cfg.epsilon(&g))).unwrap();
        assert_eq!(projected, direct);
    }

    #[test]
    fn lifted_t_minus_one() {
        let cfg = config();
        let gamma = parse_element(&cfg.arena, "t-1").unwrap();
        let r = transfer_check(&cfg, &gamma, 2, 1, Kind::Split).unwrap();
        assert!(r.lifted.solvable);
        assert_eq!(render_element(&cfg.arena, r.lifted.omega.as_ref().unwrap()), "s+4");
        assert!(r.agreement);
        assert_eq!(r.witness_ok, Some(true));
    }

    #[test]
    fn generator_constant_unsolvable() {
        let cfg = config();
        let gamma = FieldElement::constant(cfg.arena.field().generator()).unwrap();
        let r = transfer_check(&cfg, &gamma, 2, 1, Kind::Split).unwrap();
        assert!(!r.lifted.solvable);
        assert!(r.gamma_in_eigenspace);
        assert!(!r.projected_verdict && !r.eigen_verdict && r.agreement);
        // every constant of F_5 is a cube in F_25
        let gamma = parse_element(&cfg.arena, "2").unwrap();
        assert!(matches!(
            transfer_check(&cfg, &gamma, 2, 1, Kind::Split),
            Err(Error::Precondition(_))
        ));
    }
}
