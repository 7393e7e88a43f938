//! Command implementations. Each returns the text to print and the exit
//! code, or a [`CliError`].

use std::path::Path;

use ctxlab_core::contextuality::{
    evaluate_inequality, hardy_decomposition_check, hardy_state, max_violation, HardyTriple,
};
use ctxlab_core::dilation::{naimark_dilate, povm_from_dilation, verify_constraints, Dilation, JointOutcomeSet};
use ctxlab_core::hilbert::gram;
use ctxlab_core::interferometer::{DetectionBasis, Polarisation};
use ctxlab_core::{Ket, Povm, Space, State};
use serde_json::{json, Value};

use crate::format::{encode_ket, encode_povm, LabelledVector, ScenarioFile};
use crate::report::{self, sig};
use crate::{dot, exit, presets, CliError, FileError};

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, code: exit::OK }
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn gram_of(p: &Povm) -> Option<ctxlab_core::Operator> {
    let vectors: Option<Vec<Ket>> = p.elements().iter().map(|e| e.payload.as_vector().cloned()).collect();
    gram(&vectors?).ok()
}

fn povm_summary_text(p: &Povm) -> Result<String, CliError> {
    let mut out = format!("povm: {} elements on system dimension {}\n", p.len(), p.system_dim());
    out += &report::povm_elements_text(p);
    if let Some(g) = gram_of(p) {
        out += &format!(
            "gram matrix (order {}):\n{}\n",
            p.labels().collect::<Vec<_>>().join(" | "),
            report::matrix(&g)
        );
    }
    out += &format!("completeness residual: {}\n", sig(p.completeness_check()));
    out += &report::graph_text(&p.context_graph()?);
    Ok(out)
}

fn povm_summary_json(p: &Povm) -> Result<Value, CliError> {
    Ok(json!({
        "system_dim": p.system_dim(),
        "elements": report::povm_elements_json(p),
        "gram": gram_of(p).map(|g| report::json_matrix(&g)),
        "completeness_residual": p.completeness_check(),
        "context_graph": report::graph_json(&p.context_graph()?),
    }))
}

pub fn parse_basis(s: &str) -> Result<DetectionBasis, CliError> {
    match s.to_ascii_uppercase().as_str() {
        "VH" | "HV" => Ok(DetectionBasis::VH),
        "DA" | "AD" => Ok(DetectionBasis::DA),
        _ => Err(CliError::input(format!("unknown basis `{s}`, expected VH or DA"))),
    }
}

pub fn parse_polarisation(s: &str) -> Result<Polarisation, CliError> {
    match s.to_ascii_uppercase().as_str() {
        "H" => Ok(Polarisation::H),
        "V" => Ok(Polarisation::V),
        "D" => Ok(Polarisation::D),
        "A" => Ok(Polarisation::A),
        _ => Err(CliError::input(format!(
            "unknown polarisation `{s}`, expected D, A, H or V"
        ))),
    }
}

pub struct ScenarioOptions<'a> {
    pub basis: DetectionBasis,
    pub merge_a: bool,
    pub phi_init: Polarisation,
    pub json: bool,
    pub output: Option<&'a Path>,
    pub tol: f64,
}

/// `scenario run PRESET`.
pub fn scenario_run(preset: &str, opts: &ScenarioOptions) -> Result<Output, CliError> {
    if !presets::PRESETS.contains(&preset) {
        return Err(CliError::input(format!(
            "unknown preset `{preset}`, available: {}",
            presets::PRESETS.join(", ")
        )));
    }
    let file = presets::three_path_file(opts.basis, opts.phi_init, opts.merge_a, opts.tol)?;
    let p = file.povm(opts.tol)?;
    if let Some(path) = opts.output {
        file.save(path)?;
    }
    let stdout = if opts.json {
        json_text(&json!({"preset": preset, "povm": povm_summary_json(&p)?}))
    } else {
        format!(
            "scenario {preset}: basis {:?}, phi_init {:?}{}\n{}",
            opts.basis,
            opts.phi_init,
            if opts.merge_a && opts.basis == DetectionBasis::DA {
                ", A merged"
            } else {
                ""
            },
            povm_summary_text(&p)?
        )
    };
    Ok(Output::ok(stdout))
}

fn load(path: &Path) -> Result<ScenarioFile, CliError> {
    Ok(ScenarioFile::load(path)?)
}

/// Joint outcomes without the orthonormality check, so that `povm check`
/// can report how far off they are.
fn unchecked_dilation(file: &ScenarioFile, tol: f64) -> Result<Option<Dilation>, CliError> {
    let (Some(env_dim), Some(phi)) = (file.env_dim, &file.phi_init) else {
        return Ok(None);
    };
    let joint = Space::joint(env_dim, file.system_dim)?;
    let mut outcomes = Vec::with_capacity(file.outcomes.len());
    for o in &file.outcomes {
        if o.vector.len() != joint.dim() {
            return Err(FileError::Schema(format!("outcome `{}` has wrong length", o.label)).into());
        }
        let k = Ket::new(
            joint,
            o.vector
                .iter()
                .map(|p| ctxlab_core::Complex64::new(p[0], p[1]))
                .collect(),
        )?;
        outcomes.push((o.label.clone(), k));
    }
    let set = JointOutcomeSet::unchecked(env_dim, file.system_dim, outcomes)?;
    if phi.len() != env_dim {
        return Err(FileError::Schema("phi_init has wrong length".into()).into());
    }
    let phi = Ket::new(
        Space::Environment(env_dim),
        phi.iter().map(|p| ctxlab_core::Complex64::new(p[0], p[1])).collect(),
    )?;
    Ok(Some(Dilation::with_tol(set, phi, tol)?))
}

/// `povm check FILE`: completeness and, when the file carries joint
/// outcomes, the dilation constraints. Reports, and only fails with
/// `strict`.
pub fn povm_check(path: &Path, strict: bool, json: bool, tol: f64) -> Result<Output, CliError> {
    let file = load(path)?;
    let dilation = unchecked_dilation(&file, tol)?;
    let declared = file.declared_povm(tol)?;
    let mut failures: Vec<&str> = Vec::new();

    let mut dil_json = Value::Null;
    let mut dil_text = String::new();
    let mut derived = None;
    if let Some(d) = &dilation {
        let ortho = d.outcomes().orthonormality_residual();
        let c = verify_constraints(d);
        if ortho > tol {
            failures.push("orthonormal-outcomes");
        }
        if !c.holds(tol) {
            failures.push("sigma-constraints");
        }
        if ortho <= tol {
            derived = Some(povm_from_dilation(d)?);
        }
        let mut reproduction = None;
        if let (Some(p), Some(q)) = (&declared, &derived) {
            let r = povm_distance(p, q)?;
            if r > tol {
                failures.push("declared-matches-derived");
            }
            reproduction = Some(r);
        }
        dil_text = format!(
            "dilation: env_dim {}, {} outcomes{}\n  outcome orthonormality residual: {}\n  sigma orthogonality residual: {}\n  sigma normalisation residual: {}\n  sigma overlap with initial state: {}\n",
            d.outcomes().env_dim(),
            d.outcomes().len(),
            if d.outcomes().is_complete() { " (complete)" } else { "" },
            sig(ortho),
            sig(c.max_orthogonality_residual),
            sig(c.max_normalisation_residual),
            sig(c.max_init_overlap),
        );
        if let Some(r) = reproduction {
            dil_text += &format!("  declared vs derived povm: {}\n", sig(r));
        }
        dil_json = json!({
            "env_dim": d.outcomes().env_dim(),
            "outcomes": d.outcomes().len(),
            "complete": d.outcomes().is_complete(),
            "orthonormality_residual": ortho,
            "max_orthogonality_residual": c.max_orthogonality_residual,
            "max_normalisation_residual": c.max_normalisation_residual,
            "max_init_overlap": c.max_init_overlap,
            "declared_vs_derived": reproduction,
        });
    }
    let p = match declared.or(derived) {
        Some(p) => p,
        None => {
            return Err(CliError::from(ctxlab_core::Error::NotOrthonormal {
                residual: dilation
                    .map(|d| d.outcomes().orthonormality_residual())
                    .unwrap_or(f64::NAN),
            }))
        }
    };
    let completeness = p.completeness_check();
    if completeness > tol {
        failures.push("completeness");
    }
    let status = if failures.is_empty() {
        "ok".to_string()
    } else {
        format!("FAIL ({})", failures.join(", "))
    };
    let stdout = if json {
        json_text(&json!({
            "povm": povm_summary_json(&p)?,
            "dilation": dil_json,
            "tolerance": tol,
            "failures": failures,
        }))
    } else {
        format!(
            "{}{}tolerance: {}\nstatus: {}\n",
            povm_summary_text(&p)?,
            dil_text,
            sig(tol),
            status
        )
    };
    let code = if strict && !failures.is_empty() {
        exit::INVARIANT
    } else {
        exit::OK
    };
    Ok(Output { stdout, code })
}

/// Largest entrywise difference between the declared elements and the
/// derived ones. A declared label `L` missing from the derived POVM is
/// compared with the sum of the derived outcomes `L,*` (a coarse-graining).
fn povm_distance(declared: &Povm, derived: &Povm) -> Result<f64, CliError> {
    let mut used = 0;
    let mut worst: f64 = 0.0;
    for e in declared.elements() {
        let target = e.payload.to_operator();
        let parts: Vec<_> = match derived.element(&e.label) {
            Ok(x) => vec![x],
            Err(_) => {
                let prefix = format!("{},", e.label);
                derived
                    .elements()
                    .iter()
                    .filter(|x| x.label.starts_with(&prefix))
                    .collect()
            }
        };
        if parts.is_empty() {
            return Ok(f64::INFINITY);
        }
        used += parts.len();
        let mut sum = parts[0].payload.to_operator();
        for x in &parts[1..] {
            sum = sum.add(&x.payload.to_operator())?;
        }
        worst = worst.max(target.max_abs_diff(&sum)?);
    }
    if used != derived.len() {
        return Ok(f64::INFINITY);
    }
    Ok(worst)
}

/// `dilate FILE -o OUT`: Naimark dilation of the file's POVM.
pub fn dilate(path: &Path, out: &Path, tol: f64) -> Result<Output, CliError> {
    let mut file = load(path)?;
    let p = file.povm(tol)?;
    let d = naimark_dilate(&p)?;
    file.env_dim = Some(d.outcomes().env_dim());
    file.phi_init = Some(encode_ket(d.phi_init()));
    file.outcomes = d
        .outcomes()
        .outcomes()
        .iter()
        .map(|(l, k)| LabelledVector {
            label: l.clone(),
            vector: encode_ket(k),
        })
        .collect();
    file.povm = encode_povm(&p);
    file.save(out)?;
    let c = verify_constraints(&d);
    Ok(Output::ok(format!(
        "wrote {}: env_dim {}, {} outcomes\nsigma orthogonality residual: {}\nsigma normalisation residual: {}\n",
        out.display(),
        d.outcomes().env_dim(),
        d.outcomes().len(),
        sig(c.max_orthogonality_residual),
        sig(c.max_normalisation_residual),
    )))
}

/// `context-graph FILE`.
pub fn context_graph(path: &Path, as_dot: bool, json: bool, tol: f64) -> Result<Output, CliError> {
    let p = load(path)?.povm(tol)?;
    let g = p.context_graph()?;
    let stdout = if as_dot {
        dot::to_dot(&g)
    } else if json {
        json_text(&report::graph_json(&g))
    } else {
        report::graph_text(&g)
    };
    Ok(Output::ok(stdout))
}

fn triple_of(file: &ScenarioFile, p: &Povm) -> Result<HardyTriple, CliError> {
    let (labels, b1, b2) = file
        .hardy()?
        .ok_or_else(|| CliError::input("file has no hardy section"))?;
    Ok(HardyTriple::from_povm(
        p,
        [&labels[0], &labels[1], &labels[2]],
        &b1,
        &b2,
    )?)
}

/// `inequality FILE`: evaluate the rescaled inequality on each state of the
/// file (or on the Hardy state of `D1`, `D2` when there are none).
pub fn inequality(path: &Path, state: Option<&str>, json: bool, tol: f64) -> Result<Output, CliError> {
    let file = load(path)?;
    let p = file.povm(tol)?;
    let t = triple_of(&file, &p)?;
    let mut states = file.states(tol)?;
    if let Some(label) = state {
        states.retain(|(l, _)| l == label);
        if states.is_empty() {
            return Err(CliError::input(format!("no state `{label}` in file")));
        }
    }
    if states.is_empty() {
        states.push(("hardy-state".into(), State::pure(hardy_state(&t.d1, &t.d2, tol)?, tol)?));
    }
    let dec = hardy_decomposition_check(&t.f, &t.basis1, &t.d1, &t.basis2, &t.d2)?;

    let mut rows = Vec::new();
    let mut text = format!(
        "hardy triple F={}, D1={}, D2={}\ndecomposition 1: alpha {}, beta {}, residual {}\ndecomposition 2: alpha {}, beta {}, residual {}\n",
        t.f_label,
        t.d1_label,
        t.d2_label,
        report::complex(dec.first.alpha),
        report::complex(dec.first.beta),
        sig(dec.first.residual),
        report::complex(dec.second.alpha),
        report::complex(dec.second.beta),
        sig(dec.second.residual),
    );
    for (label, st) in &states {
        let r = evaluate_inequality(&p, &t, st)?;
        let c = r.certification;
        text += &format!(
            "state {label}: lhs {}, rhs {}, violated {}\n  certification: c1 {}, c2 {}, r1 {}, r2 {}\n",
            sig(r.lhs),
            sig(r.rhs),
            r.violated,
            sig(c.c1),
            sig(c.c2),
            sig(c.r1),
            sig(c.r2)
        );
        rows.push(json!({
            "state": label,
            "lhs": r.lhs,
            "rhs": r.rhs,
            "violated": r.violated,
            "state_used": report::json_matrix(r.state_used.operator()),
            "certification": {"c1": c.c1, "c2": c.c2, "r1": c.r1, "r2": c.r2},
        }));
    }
    let stdout = if json {
        json_text(&json!({
            "f": t.f_label, "d1": t.d1_label, "d2": t.d2_label,
            "decomposition": [
                {"alpha": report::json_complex(dec.first.alpha), "beta": report::json_complex(dec.first.beta), "residual": dec.first.residual},
                {"alpha": report::json_complex(dec.second.alpha), "beta": report::json_complex(dec.second.beta), "residual": dec.second.residual},
            ],
            "results": rows,
        }))
    } else {
        text
    };
    Ok(Output::ok(stdout))
}

/// `max-violation FILE`.
pub fn max_violation_cmd(path: &Path, json: bool, tol: f64) -> Result<Output, CliError> {
    let file = load(path)?;
    let p = file.povm(tol)?;
    let t = triple_of(&file, &p)?;
    let v = max_violation(&t)?;
    let stdout = if json {
        json_text(&json!({"value": v.value, "state": report::json_ket(&v.state)}))
    } else {
        format!("value {}\nstate {}\n", sig(v.value), report::ket(&v.state))
    };
    Ok(Output::ok(stdout))
}
