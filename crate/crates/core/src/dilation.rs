//! System-environment dilations of POVMs.
//!
//! A joint outcome `|m⟩` on `E ⊗ S` together with the environment's initial
//! state `|φ⟩` yields the system vector `|λ(m)⟩ = ⟨φ|m⟩` and the residual
//! `|σ(m)⟩ = |m⟩ − |φ⟩ ⊗ |λ(m)⟩`, orthogonal to `|φ⟩ ⊗ H_S`. Orthonormality
//! of the joint outcomes is equivalent to
//! `⟨σ(m)|σ(m′)⟩ = δ_{mm′} − ⟨λ(m)|λ(m′)⟩`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hilbert::{
    c, eigh, gram, orthonormality_residual, partial_inner_env, tensor, Ket, Operator, Space, DEFAULT_TOL,
};
use crate::povm::{Payload, Povm};

/// Labelled joint outcome vectors on `Joint(env_dim, sys_dim)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointOutcomeSet {
    space: Space,
    sys_dim: usize,
    outcomes: Vec<(String, Ket)>,
}

impl JointOutcomeSet {
    /// Validated set: shapes, unique labels, and pairwise orthonormality
    /// within `tol`.
    pub fn new(env_dim: usize, sys_dim: usize, outcomes: Vec<(String, Ket)>, tol: f64) -> Result<Self> {
        let set = Self::unchecked(env_dim, sys_dim, outcomes)?;
        let residual = set.orthonormality_residual();
        if residual > tol {
            return Err(Error::NotOrthonormal { residual });
        }
        Ok(set)
    }

    /// Shape-checked only. Useful for diagnosing sets that are known to be
    /// slightly off, see [`verify_constraints`].
    pub fn unchecked(env_dim: usize, sys_dim: usize, outcomes: Vec<(String, Ket)>) -> Result<Self> {
        let space = Space::joint(env_dim, sys_dim)?;
        if outcomes.is_empty() {
            return Err(Error::Empty("joint outcomes"));
        }
        if outcomes.len() > space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: outcomes.len(),
            });
        }
        for (i, (label, ket)) in outcomes.iter().enumerate() {
            if ket.space() != space {
                return Err(Error::SpaceMismatch {
                    expected: space,
                    found: ket.space(),
                });
            }
            if outcomes[..i].iter().any(|(l, _)| l == label) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(JointOutcomeSet {
            space,
            sys_dim,
            outcomes,
        })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn env_dim(&self) -> usize {
        self.space.dim() / self.sys_dim
    }

    pub fn sys_dim(&self) -> usize {
        self.sys_dim
    }

    pub fn outcomes(&self) -> &[(String, Ket)] {
        &self.outcomes
    }

    pub fn len(&self) -> usize {
        self.outcomes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.outcomes.is_empty()
    }

    /// One outcome per joint basis dimension.
    pub fn is_complete(&self) -> bool {
        self.outcomes.len() == self.space.dim()
    }

    pub fn vectors(&self) -> Vec<Ket> {
        self.outcomes.iter().map(|(_, k)| k.clone()).collect()
    }

    pub fn orthonormality_residual(&self) -> f64 {
        orthonormality_residual(&self.vectors()).expect("non-empty, same space")
    }

    pub fn get(&self, label: &str) -> Result<&Ket> {
        self.outcomes
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, k)| k)
            .ok_or_else(|| Error::UnknownLabel(label.into()))
    }
}

/// Joint outcomes plus the environment's initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct Dilation {
    outcomes: JointOutcomeSet,
    phi_init: Ket,
    tol: f64,
}

impl Dilation {
    pub fn new(outcomes: JointOutcomeSet, phi_init: Ket) -> Result<Self> {
        Self::with_tol(outcomes, phi_init, DEFAULT_TOL)
    }

    pub fn with_tol(outcomes: JointOutcomeSet, phi_init: Ket, tol: f64) -> Result<Self> {
        let env = Space::Environment(outcomes.env_dim());
        if phi_init.space() != env {
            return Err(Error::SpaceMismatch {
                expected: env,
                found: phi_init.space(),
            });
        }
        if !phi_init.is_normalised(tol) {
            return Err(Error::NotNormalised {
                norm_sq: phi_init.norm_sqr(),
            });
        }
        Ok(Dilation {
            outcomes,
            phi_init,
            tol,
        })
    }

    pub fn outcomes(&self) -> &JointOutcomeSet {
        &self.outcomes
    }

    pub fn phi_init(&self) -> &Ket {
        &self.phi_init
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    fn require_orthonormal(&self) -> Result<()> {
        let residual = self.outcomes.orthonormality_residual();
        if residual > self.tol {
            return Err(Error::NotOrthonormal { residual });
        }
        Ok(())
    }

    fn lambdas(&self) -> Vec<Ket> {
        self.outcomes
            .outcomes
            .iter()
            .map(|(_, m)| partial_inner_env(&self.phi_init, m).expect("validated shapes"))
            .collect()
    }
}

/// `λ(m) = ⟨φ_init|m⟩` for every outcome. Zero elements are kept.
pub fn povm_from_dilation(d: &Dilation) -> Result<Povm> {
    d.require_orthonormal()?;
    let elements = d
        .outcomes
        .outcomes
        .iter()
        .zip(d.lambdas())
        .map(|((label, _), lam)| (label.clone(), Payload::Vector(lam)))
        .collect();
    Povm::with_tol(d.outcomes.sys_dim, elements, d.tol)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub label: String,
    pub lambda: Ket,
    pub sigma: Ket,
}

/// `σ(m)` for every outcome of a dilation.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualSet {
    pub residuals: Vec<Residual>,
}

impl ResidualSet {
    pub fn get(&self, label: &str) -> Result<&Residual> {
        self.residuals
            .iter()
            .find(|r| r.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.into()))
    }
}

pub fn residual_decompose(d: &Dilation) -> Result<ResidualSet> {
    d.require_orthonormal()?;
    Ok(decompose(d))
}

fn decompose(d: &Dilation) -> ResidualSet {
    let residuals = d
        .outcomes
        .outcomes
        .iter()
        .zip(d.lambdas())
        .map(|((label, m), lambda)| {
            let init = tensor(&d.phi_init, &lambda).expect("validated shapes");
            Residual {
                label: label.clone(),
                sigma: m.sub(&init).expect("same space"),
                lambda,
            }
        })
        .collect();
    ResidualSet { residuals }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintReport {
    /// `max_{m≠m′} |⟨σ(m)|σ(m′)⟩ + ⟨λ(m)|λ(m′)⟩|`
    pub max_orthogonality_residual: f64,
    /// `max_m |⟨σ(m)|σ(m)⟩ + ⟨λ(m)|λ(m)⟩ − 1|`
    pub max_normalisation_residual: f64,
    /// `max_m ‖⟨φ_init|σ(m)⟩‖`
    pub max_init_overlap: f64,
}

impl ConstraintReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.max_orthogonality_residual <= tol && self.max_normalisation_residual <= tol && self.max_init_overlap <= tol
    }
}

/// Report how well the dilation satisfies the σ/λ constraints. Never fails:
/// a non-orthonormal outcome set simply yields large residuals.
pub fn verify_constraints(d: &Dilation) -> ConstraintReport {
    let set = decompose(d);
    let lambdas: Vec<Ket> = set.residuals.iter().map(|r| r.lambda.clone()).collect();
    let sigmas: Vec<Ket> = set.residuals.iter().map(|r| r.sigma.clone()).collect();
    let gl = gram(&lambdas).expect("non-empty");
    let gs = gram(&sigmas).expect("non-empty");
    let n = lambdas.len();
    let mut ortho: f64 = 0.0;
    let mut norm: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let s = gs[(i, j)] + gl[(i, j)];
            if i == j {
                norm = norm.max((s - c(1.0)).norm());
            } else {
                ortho = ortho.max(s.norm());
            }
        }
    }
    let init = sigmas
        .iter()
        .map(|s| partial_inner_env(&d.phi_init, s).expect("validated").norm())
        .fold(0.0, f64::max);
    ConstraintReport {
        max_orthogonality_residual: ortho,
        max_normalisation_residual: norm,
        max_init_overlap: init,
    }
}

/// Realise a complete rank-one POVM as a projective measurement on
/// `C^M ⊗ H_S`, `M` the number of outcomes.
///
/// The environment starts in `|0⟩`, and `|m⟩ = |0⟩ ⊗ |λ(m)⟩ + |σ(m)⟩` with
/// `σ(m)` supported on `span{|1⟩..|M−1⟩} ⊗ H_S`. The σ coordinates come from
/// the eigendecomposition of `G_σ = I_M − G_λ`: with
/// `G_σ = Σ_j e_j w_j w_j†`, coordinate `j` of `σ(m)` is `√e_j conj(w_j[m])`.
/// Rank-one operator payloads are converted to vectors first.
pub fn naimark_dilate(p: &Povm) -> Result<Dilation> {
    let tol = p.tol();
    let residual = p.completeness_check();
    if residual > tol {
        return Err(Error::Incomplete { residual });
    }
    let ds = p.system_dim();
    let m = p.len();
    let lambdas: Vec<Ket> = p
        .elements()
        .iter()
        .map(|e| match &e.payload {
            Payload::Vector(v) => Ok(v.clone()),
            Payload::Operator(op) => {
                let eig = eigh(op)?;
                if eig.rank(tol) > 1 {
                    return Err(Error::NotRankOne(e.label.clone()));
                }
                let (w, v) = eig.max();
                Ok(v.scale(c(libm::sqrt(w.max(0.0)))).canonical_phase())
            }
        })
        .collect::<Result<_>>()?;

    let gl = gram(&lambdas)?;
    let gs = Operator::identity(gl.space()).sub(&gl)?;
    let eig = eigh(&gs)?;
    let kept: Vec<(f64, &Ket)> = eig
        .values
        .iter()
        .zip(&eig.vectors)
        .filter(|(v, _)| **v > tol)
        .map(|(v, k)| (*v, k))
        .collect();
    // rank(G_σ) = M − d_S ≤ (M − 1)·d_S slots orthogonal to |0⟩ ⊗ H_S
    debug_assert!(kept.len() <= (m - 1) * ds);

    let env_space = Space::environment(m)?;
    let joint = Space::joint(m, ds)?;
    let phi = Ket::basis(env_space, 0)?;
    let mut outcomes = Vec::with_capacity(m);
    for (idx, (e, lam)) in p.elements().iter().zip(&lambdas).enumerate() {
        let mut amps = tensor(&phi, lam)?.into_amplitudes();
        for (j, (val, w)) in kept.iter().enumerate() {
            amps[ds + j] += w[idx].conj() * libm::sqrt(*val);
        }
        outcomes.push((e.label.clone(), Ket::new(joint, amps)?));
    }
    let set = JointOutcomeSet::new(m, ds, outcomes, tol)?;
    Dilation::with_tol(set, phi, tol)
}

/// One branch of a context switch: environment state `|x⟩` selects the
/// system unitary `U_x`.
#[derive(Debug, Clone, PartialEq)]
pub struct SwitchContext {
    pub name: String,
    pub env_state: Ket,
    pub unitary: Operator,
}

impl SwitchContext {
    pub fn new(name: impl Into<String>, env_state: Ket, unitary: Operator) -> Self {
        SwitchContext {
            name: name.into(),
            env_state,
            unitary,
        }
    }
}

/// Joint outcomes `|x⟩ ⊗ U_x†|a⟩`, labelled `"{name},{a+1}"`.
pub fn context_switch_outcomes(contexts: &[SwitchContext], basis: &[Ket], tol: f64) -> Result<JointOutcomeSet> {
    let first = contexts.first().ok_or(Error::Empty("contexts"))?;
    let env_dim = first.env_state.dim();
    let sys_space = basis.first().ok_or(Error::Empty("basis"))?.space();
    let ds = sys_space.dim();
    if basis.len() != ds {
        return Err(Error::DimensionMismatch {
            expected: ds,
            found: basis.len(),
        });
    }
    let residual = orthonormality_residual(basis)?;
    if residual > tol {
        return Err(Error::NotOrthonormal { residual });
    }
    let env_states: Vec<Ket> = contexts.iter().map(|x| x.env_state.clone()).collect();
    let residual = orthonormality_residual(&env_states)?;
    if residual > tol {
        return Err(Error::NotOrthonormal { residual });
    }
    let mut outcomes = Vec::with_capacity(contexts.len() * ds);
    for x in contexts {
        if x.unitary.space() != sys_space {
            return Err(Error::SpaceMismatch {
                expected: sys_space,
                found: x.unitary.space(),
            });
        }
        let residual = x.unitary.unitarity_residual();
        if residual > tol {
            return Err(Error::NotUnitary { residual });
        }
        let udag = x.unitary.adjoint();
        for (a, ket) in basis.iter().enumerate() {
            let joint = tensor(&x.env_state, &udag.apply(ket)?)?;
            outcomes.push((format!("{},{}", x.name, a + 1), joint));
        }
    }
    JointOutcomeSet::new(env_dim, ds, outcomes, tol)
}

/// POVM of a context switch, `λ(x,a) = ⟨φ_init|x⟩ · U_x†|a⟩`.
pub fn context_switch_povm(contexts: &[SwitchContext], basis: &[Ket], phi_init: &Ket, tol: f64) -> Result<Povm> {
    let set = context_switch_outcomes(contexts, basis, tol)?;
    povm_from_dilation(&Dilation::with_tol(set, phi_init.clone(), tol)?)
}
