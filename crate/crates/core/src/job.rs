//! Job execution and JSON reports. A [`JobSpec`] names a command and its
//! parameters; [`execute`] validates it, runs it and returns a report with a
//! fixed key order together with the process exit code.

use std::time::Instant;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::arena::{Arena, ArenaConfig, FieldElement, Variant};
use crate::descent::{transfer_check, DescentConfig};
use crate::embed::{
    main_theorem_chain, norm_obstruction, solve, solve_norm_equation, verify_solution,
    EmbeddingProblem, Kind, Obstruction, SolveReport, Verification,
};
use crate::error::{invalid, Error, Result};
use crate::kummer::{class_of, class_profile, closure_space, decompose_classes, lift_class, KummerClass};
use crate::parse::{parse_element, render_element};
use crate::pgroup::{group_isomorphic, group_profile, GroupBie};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNSOLVABLE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Solve,
    Verify,
    Group,
    Decompose,
    Descend,
    Norm,
    Chain,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Verify => "verify",
            Command::Group => "group",
            Command::Decompose => "decompose",
            Command::Descend => "descend",
            Command::Norm => "norm",
            Command::Chain => "chain",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Option<Command>,
    pub arena: Option<String>,
    pub p: Option<u64>,
    pub q: Option<u64>,
    pub q0: Option<u64>,
    pub gamma: Option<String>,
    pub i: Option<usize>,
    pub j: Option<usize>,
    pub e: Option<i64>,
    pub kind: Option<String>,
    pub f: Option<String>,
    pub beta: Option<String>,
    pub tower: Option<Vec<String>>,
    pub b: Option<String>,
    pub classes: Option<Vec<String>>,
    #[serde(default)]
    pub profile: bool,
    pub iso_with: Option<(usize, i64)>,
    #[serde(default)]
    pub timings: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub exit_code: i32,
}

impl Outcome {
    pub fn render(&self) -> String {
        serde_json::to_string_pretty(&self.report).expect("reports serialize")
    }
}

fn required<T: Clone>(value: &Option<T>, field: &'static str) -> Result<T> {
    value.clone().ok_or_else(|| invalid(field, "missing"))
}

fn element(arena: &Arena, field: &'static str, text: &str) -> Result<FieldElement> {
    parse_element(arena, text).map_err(|e| invalid(field, e.to_string()))
}

fn build_arena(job: &JobSpec) -> Result<Arena> {
    let variant: Variant = required(&job.arena, "arena")?.parse()?;
    let p = required(&job.p, "p")?;
    let q = required(&job.q, "q")?;
    Arena::new(ArenaConfig { p, variant, q })
}

fn arena_json(arena: &Arena) -> Value {
    json!({
        "variant": arena.variant().to_string(),
        "p": arena.p(),
        "q": arena.q(),
    })
}

fn problem(job: &JobSpec, arena: &Arena) -> Result<(EmbeddingProblem, FieldElement)> {
    let gamma = element(arena, "gamma", &required(&job.gamma, "gamma")?)?;
    let kind: Kind = job.kind.as_deref().unwrap_or("split").parse()?;
    let f = match &job.f {
        Some(text) => element(arena, "f", text)?,
        None => FieldElement::one(),
    };
    let prob = EmbeddingProblem {
        gamma,
        i: required(&job.i, "i")?,
        j: required(&job.j, "j")?,
        kind,
    };
    Ok((prob, f))
}

fn kind_name(kind: Kind) -> &'static str {
    match kind {
        Kind::Split => "split",
        Kind::Nonsplit => "nonsplit",
    }
}

fn problem_json(arena: &Arena, prob: &EmbeddingProblem, f: &FieldElement) -> Value {
    json!({
        "gamma": render_element(arena, &prob.gamma),
        "i": prob.i,
        "j": prob.j,
        "kind": kind_name(prob.kind),
        "f": render_element(arena, f),
    })
}

fn obstruction_json(o: &Obstruction) -> Value {
    json!({
        "note": o.note,
        "certificate": o.certificate,
        "basis": o.basis,
    })
}

fn verification_json(v: &Verification) -> Value {
    json!({
        "passed": v.passed,
        "length": v.length,
        "index": v.index,
        "contains_base": v.contains_base,
        "tower": v.tower,
        "group": v.group,
        "diagnostics": v.diagnostics,
    })
}

fn solve_json(arena: &Arena, r: &SolveReport, verify: Option<&Verification>) -> Value {
    let render = |x: &FieldElement| render_element(arena, x);
    json!({
        "verdict": if r.solvable { "solvable" } else { "unsolvable" },
        "route": serde_json::to_value(r.route).expect("route serializes"),
        "omega": r.omega.as_ref().map(render),
        "e_twist": r.twist,
        "beta": r.beta.as_ref().map(render),
        "tower": r.tower.iter().map(render).collect::<Vec<_>>(),
        "group": r.group.map(|(i, e)| json!({"i": i, "e_label": e.to_string()})),
        "obstruction": r.obstruction.as_ref().map(obstruction_json),
        "verify": verify.map(verification_json),
    })
}

fn merge(mut head: Value, tail: Value) -> Value {
    let (Value::Object(h), Value::Object(t)) = (&mut head, tail) else {
        unreachable!("reports are objects")
    };
    h.extend(t);
    head
}

fn run_solve(job: &JobSpec) -> Result<(Value, i32)> {
    let arena = build_arena(job)?;
    let (prob, f) = problem(job, &arena)?;
    let report = solve(&arena, &prob, &f)?;
    let verify = if report.solvable {
        Some(verify_solution(&arena, &prob, &report)?)
    } else {
        None
    };
    let body = solve_json(&arena, &report, verify.as_ref());
    let head = json!({
        "command": "solve",
        "arena": arena_json(&arena),
        "problem": problem_json(&arena, &prob, &f),
    });
    let code = if report.solvable { EXIT_OK } else { EXIT_UNSOLVABLE };
    Ok((merge(head, body), code))
}

fn run_verify(job: &JobSpec) -> Result<(Value, i32)> {
    let arena = build_arena(job)?;
    let (prob, f) = problem(job, &arena)?;
    let beta = element(&arena, "beta", &required(&job.beta, "beta")?)?;
    let tower = match &job.tower {
        Some(list) => list
            .iter()
            .map(|t| element(&arena, "tower", t))
            .collect::<Result<Vec<_>>>()?,
        None => {
            let mut tower = vec![beta.clone()];
            for _ in 1..prob.i.saturating_sub(prob.j) {
                let next = crate::embed::rho_element(&arena, tower.last().expect("nonempty"));
                tower.push(next);
            }
            tower
        }
    };
    let report = SolveReport {
        kind: prob.kind,
        i: prob.i,
        j: prob.j,
        solvable: true,
        route: crate::embed::Route::Split,
        omega: None,
        twist: None,
        beta: Some(beta.clone()),
        tower: tower.clone(),
        group: None,
        obstruction: None,
    };
    let v = verify_solution(&arena, &prob, &report)?;
    let render = |x: &FieldElement| render_element(&arena, x);
    let out = json!({
        "command": "verify",
        "arena": arena_json(&arena),
        "problem": problem_json(&arena, &prob, &f),
        "beta": render(&beta),
        "tower": tower.iter().map(render).collect::<Vec<_>>(),
        "verify": verification_json(&v),
    });
    Ok((out, if v.passed { EXIT_OK } else { EXIT_UNSOLVABLE }))
}

fn run_group(job: &JobSpec) -> Result<(Value, i32)> {
    let p = required(&job.p, "p")?;
    let i = required(&job.i, "i")?;
    let e = job.e.unwrap_or(0);
    let g = GroupBie::new(p, i, e)?;
    let mut out = json!({
        "command": "group",
        "group": {"p": p, "i": i, "e": g.twist()},
    });
    let map = out.as_object_mut().expect("object");
    if job.profile || job.iso_with.is_none() {
        let prof = group_profile(&g)?;
        map.insert("profile".into(), serde_json::to_value(prof).expect("profile serializes"));
    }
    if let Some((i2, e2)) = job.iso_with {
        let h = GroupBie::new(p, i2, e2)?;
        let iso = group_isomorphic(&g, &h)?;
        map.insert(
            "isomorphism".into(),
            json!({
                "with": {"p": p, "i": i2, "e": h.twist()},
                "isomorphic": iso.is_some(),
                "sigma_image": iso.as_ref().map(|(s, _)| serde_json::to_value(s).expect("serializes")),
                "tau_image": iso.as_ref().map(|(_, t)| serde_json::to_value(t).expect("serializes")),
            }),
        );
    }
    Ok((out, EXIT_OK))
}

fn run_decompose(job: &JobSpec) -> Result<(Value, i32)> {
    let arena = build_arena(job)?;
    let texts = required(&job.classes, "classes")?;
    if texts.is_empty() {
        return Err(invalid("classes", "empty list"));
    }
    let elements = texts
        .iter()
        .map(|t| element(&arena, "classes", t))
        .collect::<Result<Vec<_>>>()?;
    let space = closure_space(&arena, &elements);
    let classes = elements
        .iter()
        .map(|x| class_of(&arena, &space, x))
        .collect::<Result<Vec<KummerClass>>>()?;
    let blocks = decompose_classes(&space, &classes)?;
    let mut rows = Vec::new();
    for (c, length) in &blocks {
        let profile = class_profile(&arena, &space, c)?;
        let index = profile.index.value();
        rows.push(json!({
            "generator": render_element(&arena, &lift_class(&arena, &space, c)?),
            "coords": c.coords,
            "length": length,
            "index": index,
        }));
    }
    let out = json!({
        "command": "decompose",
        "arena": arena_json(&arena),
        "basis": space.labels(&arena),
        "inputs": classes.iter().map(|c| c.coords.clone()).collect::<Vec<_>>(),
        "blocks": rows,
    });
    Ok((out, EXIT_OK))
}

fn run_descend(job: &JobSpec) -> Result<(Value, i32)> {
    let p = required(&job.p, "p")?;
    let q0 = required(&job.q0, "q0")?;
    let cfg = DescentConfig::new(p, q0)?;
    let arena = &cfg.arena;
    let (prob, _) = problem(job, arena)?;
    let r = transfer_check(&cfg, &prob.gamma, prob.i, prob.j, prob.kind)?;
    let render = |x: &FieldElement| render_element(arena, x);
    let head = json!({
        "command": "descend",
        "descent": {"p": p, "q0": q0, "d_eps": cfg.d_eps, "t_eig": cfg.t_eig, "z": cfg.z},
        "arena": arena_json(arena),
        "problem": problem_json(arena, &prob, &FieldElement::one()),
    });
    let body = solve_json(arena, &r.lifted, None);
    let transfer = json!({
        "transfer": {
            "basis": r.basis,
            "gamma_in_eigenspace": r.gamma_in_eigenspace,
            "projected_gamma": r.projected_gamma.coords,
            "projected_verdict": r.projected_verdict,
            "eigen_verdict": r.eigen_verdict,
            "projected_witness": r.projected_witness.as_ref().map(render),
            "witness_ok": r.witness_ok,
            "agreement": r.agreement,
        }
    });
    let code = if r.lifted.solvable { EXIT_OK } else { EXIT_UNSOLVABLE };
    Ok((merge(merge(head, body), transfer), code))
}

fn run_norm(job: &JobSpec) -> Result<(Value, i32)> {
    let arena = build_arena(job)?;
    let b = element(&arena, "b", &required(&job.b, "b")?)?;
    if !arena.is_in_base(&b) {
        return Err(invalid("b", Error::NotInBaseField.to_string()));
    }
    let omega = solve_norm_equation(&arena, &b)?;
    let obstruction = match omega {
        Some(_) => None,
        None => Some(obstruction_json(&norm_obstruction(&arena, &b)?)),
    };
    let out = json!({
        "command": "norm",
        "arena": arena_json(&arena),
        "b": render_element(&arena, &b),
        "verdict": if omega.is_some() { "solvable" } else { "unsolvable" },
        "omega": omega.as_ref().map(|x| render_element(&arena, x)),
        "obstruction": obstruction,
    });
    Ok((out, if omega.is_some() { EXIT_OK } else { EXIT_UNSOLVABLE }))
}

fn run_chain(job: &JobSpec) -> Result<(Value, i32)> {
    let arena = build_arena(job)?;
    let gamma = element(&arena, "gamma", &required(&job.gamma, "gamma")?)?;
    let chain = main_theorem_chain(&arena, &gamma)?;
    let out = json!({
        "command": "chain",
        "arena": arena_json(&arena),
        "gamma": render_element(&arena, &gamma),
        "rows": chain.rows.iter().map(|(i, v)| json!({"i": i, "solvable": v})).collect::<Vec<_>>(),
        "verdict": if chain.verdict { "solvable" } else { "unsolvable" },
        "consistent": chain.consistent,
    });
    Ok((out, if chain.verdict { EXIT_OK } else { EXIT_UNSOLVABLE }))
}

/// Runs a job. Invalid input yields an error report with exit code 2.
pub fn execute(job: &JobSpec) -> Outcome {
    let start = Instant::now();
    let result = match job.command {
        None => Err(invalid("command", "missing")),
        Some(Command::Solve) => run_solve(job),
        Some(Command::Verify) => run_verify(job),
        Some(Command::Group) => run_group(job),
        Some(Command::Decompose) => run_decompose(job),
        Some(Command::Descend) => run_descend(job),
        Some(Command::Norm) => run_norm(job),
        Some(Command::Chain) => run_chain(job),
    };
    let (mut report, exit_code) = match result {
        Ok(ok) => ok,
        Err(err) => (
            json!({
                "command": job.command.map(Command::name),
                "error": err.to_string(),
            }),
            EXIT_INVALID,
        ),
    };
    if job.timings {
        let ms = start.elapsed().as_secs_f64() * 1000.0;
        report
            .as_object_mut()
            .expect("object")
            .insert("timings".into(), json!({"total_ms": ms}));
    }
    Outcome { report, exit_code }
}

/// Runs one JSON job per nonblank line; a failing line yields an error
/// report and does not stop the batch.
pub fn execute_batch(text: &str) -> Vec<Outcome> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, line)| match serde_json::from_str::<JobSpec>(line) {
            Ok(job) => {
                let mut out = execute(&job);
                prepend_line(&mut out.report, n + 1);
                out
            }
            Err(err) => Outcome {
                report: json!({"line": n + 1, "error": format!("invalid job: {err}")}),
                exit_code: EXIT_INVALID,
            },
        })
        .collect()
}

fn prepend_line(report: &mut Value, line: usize) {
    let old = std::mem::take(report);
    *report = merge(json!({"line": line}), old);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve_job(gamma: &str) -> JobSpec {
        JobSpec {
            command: Some(Command::Solve),
            arena: Some("R".into()),
            p: Some(3),
            q: Some(7),
            gamma: Some(gamma.into()),
            i: Some(2),
            j: Some(1),
            ..Default::default()
        }
    }

    #[test]
    fn solve_report_fields() {
        let out = execute(&solve_job("(s^3+6)"));
        assert_eq!(out.exit_code, EXIT_OK);
        let r = &out.report;
        assert_eq!(r["verdict"], "solvable");
        assert_eq!(r["omega"], "s+6");
        assert_eq!(r["tower"][0], "2*(s+3)*(s+6)^-1");
        assert_eq!(r["group"]["i"], 2);
        assert_eq!(r["group"]["e_label"], "0");
        assert_eq!(r["verify"]["passed"], true);
        let keys: Vec<&String> = r.as_object().unwrap().keys().collect();
        assert_eq!(keys[..4], ["command", "arena", "problem", "verdict"]);
    }

    #[test]
    fn unsolvable_and_invalid() {
        let out = execute(&solve_job("2*(s^3+6)"));
        assert_eq!(out.exit_code, EXIT_UNSOLVABLE);
        assert!(out.report["obstruction"]["note"]
            .as_str()
            .unwrap()
            .starts_with("constant component"));
        let out = execute(&solve_job("0"));
        assert_eq!(out.exit_code, EXIT_INVALID);
        assert!(out.report["error"].as_str().unwrap().contains("`gamma`"));
        let mut job = solve_job("t-1");
        job.q = Some(11);
        let out = execute(&job);
        assert_eq!(out.exit_code, EXIT_INVALID);
        assert!(out.report["error"].as_str().unwrap().contains("`q`"));
    }

    #[test]
    fn batch_isolates_failures() {
        let text = concat!(
            r#"{"command":"solve","arena":"R","p":3,"q":7,"gamma":"t-1","i":2,"j":1}"#,
            "\n",
            "not json\n",
            r#"{"command":"group","p":3,"i":2,"e":1,"profile":true}"#,
            "\n"
        );
        let outs = execute_batch(text);
        let codes: Vec<i32> = outs.iter().map(|o| o.exit_code).collect();
        assert_eq!(codes, vec![0, 2, 0]);
        assert_eq!(outs[2].report["profile"]["order"], 27);
        assert_eq!(outs[2].report["line"], 3);
    }

    #[test]
    fn reports_are_deterministic() {
        let a = execute(&solve_job("t-1")).render();
        let b = execute(&solve_job("t-1")).render();
        assert_eq!(a, b);
        assert!(!a.contains("timings"));
    }
}
