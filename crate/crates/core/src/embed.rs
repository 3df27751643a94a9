//! Deciding and solving the embedding problems E_{i,j} (target B_{i,0}) and
//! E′_{i,j} (target B_{i,e}, e ≠ 0), the extension step that lengthens a
//! class by one, norm equations, and end-to-end verification.

use serde::{Deserialize, Serialize};

use crate::arena::{Arena, FieldElement};
use crate::error::{invalid, Error, Result};
use crate::kummer::{
    abstract_galois_group, class_of, class_profile, closure_space, enlarge_space,
    identify_galois_group, index_of_element, lift_class, ELabel, IndexValue, KummerClass,
    SupportSpace, ABSTRACT_GROUP_CAP,
};
use crate::linalg::{is_zero_vec, scale_vec, sub_vec, Matrix, Span};
use crate::pgroup::{table_isomorphic_to, GroupBie};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Split,
    Nonsplit,
}

impl std::str::FromStr for Kind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "split" => Ok(Kind::Split),
            "nonsplit" => Ok(Kind::Nonsplit),
            other => Err(invalid("kind", format!("expected split or nonsplit, got `{other}`"))),
        }
    }
}

/// Which construction produced (or refuted) a solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// β = f·ω^{ρ^{p−i}}.
    Split,
    /// β = f·α·ω^{ρ^{p−i}} with α of nonzero index.
    Twisted,
    /// β = f·a^{e/p}·ω^{ρ^{p−j−1}}, solving [γ] = e[ξ] + ρ^{p−j}[ω].
    RootOfUnity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingProblem {
    pub gamma: FieldElement,
    pub i: usize,
    pub j: usize,
    pub kind: Kind,
}

/// Why an instance has no solution: a functional on the class window that
/// vanishes on the relevant image but not on the target class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub note: String,
    pub certificate: Vec<u64>,
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveReport {
    pub kind: Kind,
    pub i: usize,
    pub j: usize,
    pub solvable: bool,
    pub route: Route,
    pub omega: Option<FieldElement>,
    /// The residue e in [γ] = e[ξ] + ρ^{p−j}[ω] for the root-of-unity route.
    pub twist: Option<u64>,
    pub beta: Option<FieldElement>,
    /// Radical generators over L: fβ, ρβ, …, ρ^{i−j−1}β.
    pub tower: Vec<FieldElement>,
    /// Identified Gal(L̃/F) as (i, e-label).
    pub group: Option<(usize, ELabel)>,
    pub obstruction: Option<Obstruction>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub length: bool,
    pub index: bool,
    pub contains_base: bool,
    pub tower: bool,
    /// `None` when the Galois group exceeds the table cap.
    pub group: Option<bool>,
    pub passed: bool,
    pub diagnostics: Vec<String>,
}

/// σ(x)/x.
pub fn rho_element(arena: &Arena, x: &FieldElement) -> FieldElement {
    arena.div(&arena.sigma(x), x)
}

pub fn rho_element_pow(arena: &Arena, x: &FieldElement, k: usize) -> FieldElement {
    (0..k).fold(x.clone(), |y, _| rho_element(arena, &y))
}

fn rho_power(space: &SupportSpace, k: usize) -> Matrix {
    space.rho_matrix().pow(k as u64)
}

fn render_class(arena: &Arena, space: &SupportSpace, c: &[u64]) -> String {
    let labels = space.labels(arena);
    let terms: Vec<String> = c
        .iter()
        .zip(&labels)
        .filter(|(&x, _)| x != 0)
        .map(|(&x, l)| if x == 1 { l.clone() } else { format!("{x}·{l}") })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Explains why `target` is outside image(ρ^k) (optionally enlarged by
/// `extra` vectors).
fn obstruction(
    arena: &Arena,
    space: &SupportSpace,
    k: usize,
    extra: &[Vec<u64>],
    target: &[u64],
) -> Obstruction {
    let image = rho_power(space, k);
    let mut cols: Vec<Vec<u64>> = (0..image.cols()).map(|c| image.column(c)).collect();
    cols.extend(extra.iter().cloned());
    let m = Matrix::from_columns(space.prime(), space.dim(), &cols);
    let certificate = m.certificate(target).unwrap_or_default();
    let mut stripped = target.to_vec();
    stripped[0] = 0;
    let note = if target[0] != 0 && m.solve(&stripped).is_some() {
        format!(
            "constant component {} not in image(ρ^{k})",
            render_class(arena, space, &{
                let mut c = vec![0; target.len()];
                c[0] = target[0];
                c
            })
        )
    } else {
        format!("class {} not in image(ρ^{k})", render_class(arena, space, target))
    };
    Obstruction {
        note,
        certificate,
        basis: space.labels(arena),
    }
}

fn check_problem(arena: &Arena, prob: &EmbeddingProblem, f: &FieldElement) -> Result<SupportSpace> {
    let p = arena.p() as usize;
    if prob.j < 1 || prob.j >= prob.i || prob.i > p {
        return Err(invalid(
            "i",
            format!("need 1 ≤ j < i ≤ {p}, got i = {}, j = {}", prob.i, prob.j),
        ));
    }
    if !arena.is_in_base(f) {
        return Err(invalid("f", "f must lie in the base field F"));
    }
    let space = closure_space(arena, &[prob.gamma.clone(), f.clone()]);
    let gamma = class_of(arena, &space, &prob.gamma)?;
    let length = class_profile(arena, &space, &gamma)?.length;
    if length != prob.j {
        return Err(Error::Precondition(format!(
            "l(M_γ) = {length}, but the problem requires j = {}",
            prob.j
        )));
    }
    Ok(space)
}

fn unsolvable(prob: &EmbeddingProblem, route: Route, obstruction: Obstruction) -> SolveReport {
    SolveReport {
        kind: prob.kind,
        i: prob.i,
        j: prob.j,
        solvable: false,
        route,
        omega: None,
        twist: None,
        beta: None,
        tower: Vec::new(),
        group: None,
        obstruction: Some(obstruction),
    }
}

fn solved(
    arena: &Arena,
    prob: &EmbeddingProblem,
    route: Route,
    omega: FieldElement,
    twist: Option<u64>,
    beta: FieldElement,
) -> Result<SolveReport> {
    let mut tower = vec![beta.clone()];
    for _ in 1..prob.i - prob.j {
        let next = rho_element(arena, tower.last().expect("nonempty"));
        tower.push(next);
    }
    let space = closure_space(arena, &[beta.clone(), prob.gamma.clone()]);
    let class = class_of(arena, &space, &beta)?;
    let group = identify_galois_group(arena, &space, &class)?;
    Ok(SolveReport {
        kind: prob.kind,
        i: prob.i,
        j: prob.j,
        solvable: true,
        route,
        omega: Some(omega),
        twist,
        beta: Some(beta),
        tower,
        group: Some(group),
        obstruction: None,
    })
}

/// Solves ρ^k·x = target on the window; returns the least lift.
fn solve_rho_power(
    arena: &Arena,
    space: &SupportSpace,
    k: usize,
    target: &[u64],
) -> Result<Option<FieldElement>> {
    match rho_power(space, k).solve(target) {
        Some(x) => Ok(Some(lift_class(arena, space, &KummerClass { coords: x })?)),
        None => Ok(None),
    }
}

/// E_{i,j}: solvable iff [γ] ∈ image(ρ^{p−j}); β = f·ω^{ρ^{p−i}}.
pub fn solve_split(arena: &Arena, prob: &EmbeddingProblem, f: &FieldElement) -> Result<SolveReport> {
    if prob.kind != Kind::Split {
        return Err(invalid("kind", "solve_split needs a split problem"));
    }
    let space = check_problem(arena, prob, f)?;
    let p = arena.p() as usize;
    let gamma = class_of(arena, &space, &prob.gamma)?;
    let Some(omega) = solve_rho_power(arena, &space, p - prob.j, &gamma.coords)? else {
        return Ok(unsolvable(
            prob,
            Route::Split,
            obstruction(arena, &space, p - prob.j, &[], &gamma.coords),
        ));
    };
    let beta = arena.mul(f, &rho_element_pow(arena, &omega, p - prob.i));
    solved(arena, prob, Route::Split, omega, None, beta)
}

/// E′_{i,j}. When i > j + 1 − Υ or j = p − 1 the condition is the split one
/// and β = f·α·ω^{ρ^{p−i}}; the overlap i = p, j = p − 1 with Υ = 0 uses the
/// split construction since B_{p,e} ≅ B_{p,0}. When Υ = 0 and i = j + 1 < p,
/// solvable iff [γ] = e[ξ] + ρ^{p−j}[ω] with e ≢ 0, and β = f·a^{e/p}·ω^{ρ^{p−j−1}}.
pub fn solve_nonsplit(arena: &Arena, prob: &EmbeddingProblem, f: &FieldElement) -> Result<SolveReport> {
    if prob.kind != Kind::Nonsplit {
        return Err(invalid("kind", "solve_nonsplit needs a nonsplit problem"));
    }
    let space = check_problem(arena, prob, f)?;
    let p = arena.p() as usize;
    let upsilon = arena.upsilon() as usize;
    let gamma = class_of(arena, &space, &prob.gamma)?;
    let k = p - prob.j;

    if prob.i + upsilon > prob.j + 1 || prob.j == p - 1 {
        let Some(omega) = solve_rho_power(arena, &space, k, &gamma.coords)? else {
            return Ok(unsolvable(
                prob,
                Route::Twisted,
                obstruction(arena, &space, k, &[], &gamma.coords),
            ));
        };
        let core = rho_element_pow(arena, &omega, p - prob.i);
        if upsilon == 0 && prob.j == p - 1 {
            let beta = arena.mul(f, &core);
            return solved(arena, prob, Route::Split, omega, None, beta);
        }
        let beta = arena.product(&[f.clone(), arena.lemma5_element(), core]);
        return solved(arena, prob, Route::Twisted, omega, None, beta);
    }

    let xi = class_of(arena, &space, &arena.xi_element())?;
    for e in 1..p as u64 {
        let target = sub_vec(&gamma.coords, &scale_vec(&xi.coords, e, p as u64), p as u64);
        if let Some(omega) = solve_rho_power(arena, &space, k, &target)? {
            let radical = arena.pow(arena.radicand_root(), e as i64);
            let core = rho_element_pow(arena, &omega, p - prob.j - 1);
            let beta = arena.product(&[f.clone(), radical, core]);
            return solved(arena, prob, Route::RootOfUnity, omega, Some(e), beta);
        }
    }
    let mut obs = obstruction(arena, &space, k, std::slice::from_ref(&xi.coords), &gamma.coords);
    if rho_power(&space, k).solve(&gamma.coords).is_some() {
        obs.note = format!(
            "class {} lies in image(ρ^{k}) but not in e·[ξ] + image(ρ^{k}) for any e ≢ 0",
            render_class(arena, &space, &gamma.coords)
        );
    }
    Ok(unsolvable(prob, Route::RootOfUnity, obs))
}

pub fn solve(arena: &Arena, prob: &EmbeddingProblem, f: &FieldElement) -> Result<SolveReport> {
    match prob.kind {
        Kind::Split => solve_split(arena, prob, f),
        Kind::Nonsplit => solve_nonsplit(arena, prob, f),
    }
}

/// Given [γ] with 2 ≤ l(M_γ) < p and e([γ]) = 0, returns γ′ with
/// l(M_γ′) = l(M_γ) + 1, ρ²[γ′] = ρ[γ], the same G-fixed line, and
/// e([γ′]) = 0 when l(M_γ′) < p.
pub fn extend_class(arena: &Arena, gamma: &FieldElement) -> Result<FieldElement> {
    let p = arena.p() as usize;
    let space = closure_space(arena, std::slice::from_ref(gamma));
    let c = class_of(arena, &space, gamma)?;
    let profile = class_profile(arena, &space, &c)?;
    if profile.length < 2 || profile.length >= p {
        return Err(Error::Precondition(format!(
            "extension needs 2 ≤ l(M_γ) < {p}, got {}",
            profile.length
        )));
    }
    if profile.index != IndexValue::Defined(0) {
        return Err(Error::Precondition("extension needs e([γ]) = 0".into()));
    }
    let norm = arena.norm(gamma);
    let (s, f) = arena.decompose_base_class(&norm)?;
    if s != 0 {
        return Err(Error::Precondition(
            "norm is not a p-th power of F although the index vanishes".into(),
        ));
    }
    let omega = arena.hilbert90(&arena.div(gamma, &f))?;
    let shift = if profile.length < p - 1 {
        index_of_element(arena, &omega).expect("l(M_ω) < p")
    } else {
        0
    };
    let extended = arena.div(&omega, &arena.pow(arena.radicand_root(), shift as i64));

    let big = enlarge_space(arena, &space, std::slice::from_ref(&extended));
    let cg = class_of(arena, &big, gamma)?;
    let cx = class_of(arena, &big, &extended)?;
    let pg = class_profile(arena, &big, &cg)?;
    let px = class_profile(arena, &big, &cx)?;
    let module = big.module();
    let fixed_g = module.rho_apply(&cg.coords, pg.length - 1)?;
    let fixed_x = module.rho_apply(&cx.coords, px.length - 1)?;
    let mut line_g = Span::new(arena.p(), big.dim());
    line_g.insert(&fixed_g);
    let ok = px.length == pg.length + 1
        && module.rho_apply(&cx.coords, 2)? == module.rho_apply(&cg.coords, 1)?
        && line_g.contains(&fixed_x)
        && !is_zero_vec(&fixed_x)
        && (px.length >= p || px.index == IndexValue::Defined(0));
    if !ok {
        return Err(Error::InvalidInput(
            "extension step failed its postconditions".into(),
        ));
    }
    Ok(extended)
}

/// ω with N(ω) = b exactly, or `None` when [b] ∉ image(ρ^{p−1}).
pub fn solve_norm_equation(arena: &Arena, b: &FieldElement) -> Result<Option<FieldElement>> {
    if !arena.is_in_base(b) {
        return Err(Error::NotInBaseField);
    }
    let p = arena.p() as usize;
    let space = closure_space(arena, std::slice::from_ref(b));
    let target = class_of(arena, &space, b)?;
    let Some(alpha) = solve_rho_power(arena, &space, p - 1, &target.coords)? else {
        return Ok(None);
    };
    let ratio = arena.div(&arena.norm(&alpha), b);
    let (s, f) = arena.decompose_base_class(&ratio)?;
    let correction = arena.mul(&arena.pow(arena.radicand_root(), s as i64), &f);
    let omega = arena.div(&alpha, &correction);
    if &arena.norm(&omega) != b {
        return Err(Error::InvalidInput("norm equation witness failed".into()));
    }
    Ok(Some(omega))
}

/// Certificate for an unsolvable norm equation.
pub fn norm_obstruction(arena: &Arena, b: &FieldElement) -> Result<Obstruction> {
    let p = arena.p() as usize;
    let space = closure_space(arena, std::slice::from_ref(b));
    let target = class_of(arena, &space, b)?;
    Ok(obstruction(arena, &space, p - 1, &[], &target.coords))
}

/// Recomputes everything a solution must satisfy: l(M_β) = i, the index of
/// [β] matching the kind when i < p, ρ^{i−j}[β] generating M_γ, the tower
/// spanning M_β together with M_γ, and Gal(L_{M_β}/F) ≅ B_{i,e}.
pub fn verify_solution(arena: &Arena, prob: &EmbeddingProblem, report: &SolveReport) -> Result<Verification> {
    let beta = report
        .beta
        .as_ref()
        .ok_or_else(|| Error::Precondition("report carries no solution".into()))?;
    let p = arena.p() as usize;
    let mut elements = vec![beta.clone(), prob.gamma.clone()];
    elements.extend(report.tower.iter().cloned());
    let space = closure_space(arena, &elements);
    let module = space.module();
    let cb = class_of(arena, &space, beta)?;
    let cg = class_of(arena, &space, &prob.gamma)?;
    let pb = class_profile(arena, &space, &cb)?;
    let pg = class_profile(arena, &space, &cg)?;
    let mut diagnostics = Vec::new();

    let length = pb.length == prob.i;
    if !length {
        diagnostics.push(format!("l(M_β) = {}, expected {}", pb.length, prob.i));
    }

    let index = match (prob.i < p, pb.index) {
        (false, _) => true,
        (true, IndexValue::Defined(e)) => match prob.kind {
            Kind::Split => e == 0,
            Kind::Nonsplit => e != 0,
        },
        (true, IndexValue::Undefined) => false,
    };
    if !index {
        diagnostics.push(format!("index of [β] is {:?}, wrong for a {:?} problem", pb.index, prob.kind));
    }

    let image = module.rho_apply(&cb.coords, prob.i.saturating_sub(prob.j))?;
    let gamma_module = module.generated_submodule(std::slice::from_ref(&cg.coords))?;
    let contains_base = pg.length == prob.j
        && gamma_module.contains(&image)
        && module.module_length(&image)? == prob.j;
    if !contains_base {
        diagnostics.push("ρ^{i−j}[β] does not generate M_γ".into());
    }

    let beta_module = module.generated_submodule(std::slice::from_ref(&cb.coords))?;
    let mut spanned = Span::new(arena.p(), space.dim());
    for v in gamma_module.basis() {
        spanned.insert(&v);
    }
    for x in &report.tower {
        spanned.insert(&class_of(arena, &space, x)?.coords);
    }
    let tower = spanned.dim() == beta_module.dim()
        && beta_module.basis().iter().all(|v| spanned.contains(v));
    if !tower {
        diagnostics.push("tower classes and M_γ do not span M_β".into());
    }

    let order = p.pow(pb.length as u32 + 1);
    let group = if pb.length == 0 || order > ABSTRACT_GROUP_CAP {
        diagnostics.push(format!("group check skipped: order {order} exceeds the table cap"));
        None
    } else {
        let e = match pb.index {
            IndexValue::Defined(e) => e as i64,
            IndexValue::Undefined => 0,
        };
        let table = abstract_galois_group(arena, &space, &cb, beta)?;
        let twist = if prob.i == p { 0 } else { e };
        let target = GroupBie::new(arena.p(), prob.i, twist)?;
        let ok = table_isomorphic_to(&table, &target)?;
        if !ok {
            diagnostics.push("Galois group of the tower is not the target B_{i,e}".into());
        }
        Some(ok)
    };

    let passed = length && index && contains_base && tower && group != Some(false);
    Ok(Verification {
        length,
        index,
        contains_base,
        tower,
        group,
        passed,
        diagnostics,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainReport {
    pub rows: Vec<(usize, bool)>,
    pub verdict: bool,
    pub consistent: bool,
}

/// Split verdicts of E_{i,1}(γ) for i = 2..p; they all agree.
pub fn main_theorem_chain(arena: &Arena, gamma: &FieldElement) -> Result<ChainReport> {
    let p = arena.p() as usize;
    let space = closure_space(arena, std::slice::from_ref(gamma));
    let c = class_of(arena, &space, gamma)?;
    let length = class_profile(arena, &space, &c)?.length;
    if length != 1 {
        return Err(Error::Precondition(format!("chain needs l(M_γ) = 1, got {length}")));
    }
    let mut rows = Vec::new();
    for i in 2..=p {
        let prob = EmbeddingProblem {
            gamma: gamma.clone(),
            i,
            j: 1,
            kind: Kind::Split,
        };
        rows.push((i, solve_split(arena, &prob, &FieldElement::one())?.solvable));
    }
    let verdict = rows[0].1;
    let consistent = rows.iter().all(|&(_, v)| v == verdict);
    Ok(ChainReport {
        rows,
        verdict,
        consistent,
    })
}
