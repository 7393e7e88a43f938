//! Built-in scenarios and the bundled fixture files.

use ctxlab_core::contextuality::three_path_hardy;
use ctxlab_core::dilation::naimark_dilate;
use ctxlab_core::interferometer::{build_three_path, DetectionBasis, Polarisation};
use ctxlab_core::{Ket, Result, Space, DEFAULT_TOL};

use crate::format::{encode_ket, encode_povm, HardySection, LabelledVector, ScenarioFile, StateEntry};

pub const PRESETS: &[&str] = &["three-path"];

fn uniform_state() -> StateEntry {
    let r = 1.0 / 3f64.sqrt();
    StateEntry {
        label: "uniform".into(),
        vector: Some(encode_ket(
            &Ket::from_reals(Space::System(3), &[r, r, r]).expect("shape"),
        )),
        density: None,
    }
}

/// Three-path interferometer: joint outcomes, initial polarisation and the
/// resulting POVM, plus the uniform superposition of the three paths.
pub fn three_path_file(basis: DetectionBasis, phi_init: Polarisation, merge_a: bool, tol: f64) -> Result<ScenarioFile> {
    let s = build_three_path();
    let d = s.dilation(basis, phi_init);
    let povm = s.povm(basis, phi_init, merge_a)?.retol(tol);
    let mut file = ScenarioFile::empty(3);
    file.env_dim = Some(2);
    file.outcomes = d
        .outcomes()
        .outcomes()
        .iter()
        .map(|(l, k)| LabelledVector {
            label: l.clone(),
            vector: encode_ket(k),
        })
        .collect();
    file.phi_init = Some(encode_ket(d.phi_init()));
    file.povm = encode_povm(&povm);
    file.states = vec![uniform_state()];
    Ok(file)
}

/// Hardy argument on the interferometer: `F`, `D1`, `D2` completed into a
/// rank-one POVM, its Naimark dilation, and the Hardy state.
pub fn hardy_file() -> Result<ScenarioFile> {
    let s = build_three_path();
    let (completion, triple) = three_path_hardy(&s, DEFAULT_TOL)?;
    let d = naimark_dilate(&completion.povm)?;
    let mut file = ScenarioFile::empty(3);
    file.env_dim = Some(d.outcomes().env_dim());
    file.outcomes = d
        .outcomes()
        .outcomes()
        .iter()
        .map(|(l, k)| LabelledVector {
            label: l.clone(),
            vector: encode_ket(k),
        })
        .collect();
    file.phi_init = Some(encode_ket(d.phi_init()));
    file.povm = encode_povm(&completion.povm);
    let mut hardy = uniform_state();
    hardy.label = "hardy".into();
    file.states = vec![
        hardy,
        StateEntry {
            label: "path1".into(),
            vector: Some(encode_ket(&s.paths[0])),
            density: None,
        },
    ];
    file.hardy = Some(HardySection {
        f: triple.f_label.clone(),
        d1: triple.d1_label.clone(),
        d2: triple.d2_label.clone(),
        basis1: encode_ket(&triple.basis1),
        basis2: encode_ket(&triple.basis2),
    });
    Ok(file)
}

/// Bundled fixtures by file name.
pub fn bundled() -> Result<Vec<(&'static str, ScenarioFile)>> {
    Ok(vec![
        (
            "three-path-VH.json",
            three_path_file(DetectionBasis::VH, Polarisation::D, false, DEFAULT_TOL)?,
        ),
        (
            "three-path-DA.json",
            three_path_file(DetectionBasis::DA, Polarisation::D, true, DEFAULT_TOL)?,
        ),
        ("hardy.json", hardy_file()?),
    ])
}
