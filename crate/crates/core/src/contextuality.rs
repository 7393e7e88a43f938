//! Hardy-type arguments and the rescaled-probability contextuality test.
//!
//! For rank-one outcomes `F`, `D1`, `D2` the test compares
//! `P(F)/⟨λ_F|λ_F⟩` against `P(D1)/⟨λ_D1|λ_D1⟩ + P(D2)/⟨λ_D2|λ_D2⟩`. On a
//! pure state `ψ` the difference of the two sides is `⟨ψ|M|ψ⟩` with
//! `M = Π̂_F − Π̂_D1 − Π̂_D2`, so its maximum over states is the top
//! eigenvalue of `M`. Mixed states are convex combinations and cannot do
//! better.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hilbert::{c, cabs, eigh, Ket, Operator, Space};
use crate::interferometer::ThreePathScenario;
use crate::povm::{DensityMatrix, Payload, Povm, State};

/// Outcomes `F`, `D1`, `D2` of a Hardy argument together with the declared
/// orthogonal pair `b1 ⊥ b2` such that `D1 ⊥ b1` and `D2 ⊥ b2`.
#[derive(Debug, Clone, PartialEq)]
pub struct HardyTriple {
    pub f_label: String,
    pub d1_label: String,
    pub d2_label: String,
    /// Unit vectors.
    pub f: Ket,
    pub d1: Ket,
    pub d2: Ket,
    pub basis1: Ket,
    pub basis2: Ket,
}

impl HardyTriple {
    #[allow(clippy::too_many_arguments)]
    pub fn new(labels: [&str; 3], f: &Ket, d1: &Ket, d2: &Ket, basis1: &Ket, basis2: &Ket, tol: f64) -> Result<Self> {
        let unit = |k: &Ket, label: &str| k.normalised(tol).ok_or_else(|| Error::ZeroElement(label.into()));
        let f = unit(f, labels[0])?;
        let d1 = unit(d1, labels[1])?;
        let d2 = unit(d2, labels[2])?;
        let basis1 = unit(basis1, "basis1")?;
        let basis2 = unit(basis2, "basis2")?;
        if cabs(basis1.inner(&basis2)?) > tol {
            return Err(Error::HardyInvariant("basis1 and basis2 must be orthogonal"));
        }
        if cabs(d1.inner(&basis1)?) > tol {
            return Err(Error::HardyInvariant("D1 must be orthogonal to basis1"));
        }
        if cabs(d2.inner(&basis2)?) > tol {
            return Err(Error::HardyInvariant("D2 must be orthogonal to basis2"));
        }
        Ok(HardyTriple {
            f_label: labels[0].into(),
            d1_label: labels[1].into(),
            d2_label: labels[2].into(),
            f,
            d1,
            d2,
            basis1,
            basis2,
        })
    }

    /// Resolve the three labels to rank-one elements of `p`.
    pub fn from_povm(p: &Povm, labels: [&str; 3], basis1: &Ket, basis2: &Ket) -> Result<Self> {
        let f = p.vector(labels[0])?;
        let d1 = p.vector(labels[1])?;
        let d2 = p.vector(labels[2])?;
        Self::new(labels, f, d1, d2, basis1, basis2, p.tol())
    }

    /// `Π̂_F − Π̂_D1 − Π̂_D2`.
    pub fn violation_operator(&self) -> Operator {
        self.f
            .projector()
            .sub(&self.d1.projector())
            .and_then(|m| m.sub(&self.d2.projector()))
            .expect("same space")
    }
}

/// `|F⟩ = α|b⟩ + β|D⟩ + r` with `α = ⟨b|F⟩`, `β = ⟨D|F⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    pub alpha: num_complex::Complex64,
    pub beta: num_complex::Complex64,
    /// `‖r‖`
    pub residual: f64,
    /// `|⟨b|D⟩|`, zero for a genuine Hardy decomposition.
    pub overlap: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyDecomposition {
    pub first: Decomposition,
    pub second: Decomposition,
}

fn decompose(f: &Ket, b: &Ket, d: &Ket) -> Result<Decomposition> {
    let alpha = b.inner(f)?;
    let beta = d.inner(f)?;
    let rest = f.sub(&b.scale(alpha))?.sub(&d.scale(beta))?;
    Ok(Decomposition {
        alpha,
        beta,
        residual: rest.norm(),
        overlap: cabs(b.inner(d)?),
    })
}

/// Report how `|F⟩` splits along `(basis1, D1)` and `(basis2, D2)`.
pub fn hardy_decomposition_check(
    f: &Ket,
    basis1: &Ket,
    d1: &Ket,
    basis2: &Ket,
    d2: &Ket,
) -> Result<HardyDecomposition> {
    Ok(HardyDecomposition {
        first: decompose(f, basis1, d1)?,
        second: decompose(f, basis2, d2)?,
    })
}

/// The unit state orthogonal to both `d1` and `d2` in a three-dimensional
/// system, with canonical phase.
pub fn hardy_state(d1: &Ket, d2: &Ket, tol: f64) -> Result<Ket> {
    if d1.space() != d2.space() {
        return Err(Error::SpaceMismatch {
            expected: d1.space(),
            found: d2.space(),
        });
    }
    if d1.dim() != 3 {
        return Err(Error::Unsupported("Hardy state requires a three-dimensional system"));
    }
    let u1 = d1.normalised(tol).ok_or(Error::Degenerate)?;
    let u2 = d2.normalised(tol).ok_or(Error::Degenerate)?;
    // Spectrum of Π̂1 + Π̂2 is {0, 1 − |⟨u1|u2⟩|, 1 + |⟨u1|u2⟩|}.
    let eig = eigh(&u1.projector().add(&u2.projector())?)?;
    if eig.values[1] <= tol {
        return Err(Error::Degenerate);
    }
    Ok(eig.vectors[0].canonical_phase())
}

/// The four certification numbers: rescaled `P(F)` at the state maximising
/// `P(D1)` (`c1`) and at `basis1` (`r1`), likewise for `D2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Certification {
    pub c1: f64,
    pub c2: f64,
    pub r1: f64,
    pub r2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InequalityReport {
    /// Rescaled `P(F)`.
    pub lhs: f64,
    /// Rescaled `P(D1)` + rescaled `P(D2)`.
    pub rhs: f64,
    pub violated: bool,
    pub state_used: DensityMatrix,
    pub certification: Certification,
}

pub fn evaluate_inequality(p: &Povm, t: &HardyTriple, state: &State) -> Result<InequalityReport> {
    let tol = p.tol();
    let lhs = p.rescaled_probability(state, &t.f_label)?;
    let rhs = p.rescaled_probability(state, &t.d1_label)? + p.rescaled_probability(state, &t.d2_label)?;
    let at = |s: State| p.rescaled_probability(&s, &t.f_label);
    let certification = Certification {
        c1: at(State::Mixed(p.maximizing_state(&t.d1_label)?))?,
        c2: at(State::Mixed(p.maximizing_state(&t.d2_label)?))?,
        r1: at(State::pure(t.basis1.clone(), tol)?)?,
        r2: at(State::pure(t.basis2.clone(), tol)?)?,
    };
    Ok(InequalityReport {
        lhs,
        rhs,
        violated: lhs > rhs + tol,
        state_used: state.density(),
        certification,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub value: f64,
    pub state: Ket,
}

/// Largest value of rescaled `P(F)` − rescaled `P(D1)` − rescaled `P(D2)`
/// over all states, and a pure state attaining it.
pub fn max_violation(t: &HardyTriple) -> Result<Violation> {
    let eig = eigh(&t.violation_operator())?;
    let (value, state) = eig.max();
    Ok(Violation {
        value,
        state: state.clone(),
    })
}

/// A complete rank-one POVM containing the given directions.
#[derive(Debug, Clone, PartialEq)]
pub struct Completion {
    pub povm: Povm,
    /// Common weight `s` given to every supplied direction: each appears as
    /// `√s · v̂`, with `s = 1/λ_max(Σ Π̂)` the largest uniform choice that
    /// leaves `I − s Σ Π̂` positive.
    pub scale: f64,
    /// Labels of the remainder elements, `rest,1`, `rest,2`, ...
    pub remainder: Vec<String>,
}

/// Embed unit directions into one POVM by uniform scaling and split the
/// positive remainder into rank-one pieces along its eigenvectors.
pub fn complete_povm(directions: &[(&str, &Ket)], tol: f64) -> Result<Completion> {
    let (_, first) = directions.first().ok_or(Error::Empty("directions"))?;
    let space = first.space();
    let dim = match space {
        Space::System(d) => d,
        other => {
            return Err(Error::SpaceMismatch {
                expected: Space::System(first.dim()),
                found: other,
            })
        }
    };
    let mut units = Vec::with_capacity(directions.len());
    let mut sum = Operator::zero(space);
    for (label, v) in directions {
        let u = v.normalised(tol).ok_or_else(|| Error::ZeroElement((*label).into()))?;
        sum = sum.add(&u.projector())?;
        units.push(((*label).into(), u));
    }
    let scale = 1.0 / eigh(&sum)?.max().0;
    let rest = Operator::identity(space).sub(&sum.scale(c(scale)))?;
    let eig = eigh(&rest)?;
    let amp = c(libm::sqrt(scale));
    let mut elements: Vec<(String, Payload)> = units
        .into_iter()
        .map(|(l, u): (String, Ket)| (l, Payload::Vector(u.scale(amp))))
        .collect();
    let mut remainder = Vec::new();
    for (val, vec) in eig.values.iter().zip(&eig.vectors) {
        if *val > tol {
            let label = format!("rest,{}", remainder.len() + 1);
            elements.push((label.clone(), Payload::Vector(vec.scale(c(libm::sqrt(*val))))));
            remainder.push(label);
        }
    }
    Ok(Completion {
        povm: Povm::with_tol(dim, elements, tol)?,
        scale,
        remainder,
    })
}

/// The interferometer's Hardy argument: `F`, and `D1`, `D2` orthogonal to
/// paths `|1⟩`, `|2⟩`, completed into one POVM.
pub fn three_path_hardy(s: &ThreePathScenario, tol: f64) -> Result<(Completion, HardyTriple)> {
    let d1 = s.hardy_direction(0);
    let d2 = s.hardy_direction(1);
    let completion = complete_povm(&[("F", &s.f), ("D1", &d1), ("D2", &d2)], tol)?;
    let triple = HardyTriple::from_povm(&completion.povm, ["F", "D1", "D2"], &s.paths[0], &s.paths[1])?;
    Ok((completion, triple))
}
