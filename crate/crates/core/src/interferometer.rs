//! The three-path interferometer with a polarisation environment.
//!
//! Paths `|1⟩, |2⟩, |3⟩` span the system; polarisation `|H⟩ = e₀`,
//! `|V⟩ = e₁` spans the environment. Vertically polarised photons see the
//! input basis at the output ports. Horizontally polarised photons pick up a
//! π phase on one path (by default `|F⟩`), i.e. the context `I − 2|F⟩⟨F|`.
//!
//! The beam splitter states take `+` signs, `S1 = (|2⟩+|3⟩)/√2` and
//! `S2 = (|1⟩+|3⟩)/√2`; with `F = (|1⟩+|2⟩−|3⟩)/√3` this is the convention
//! under which `F ⊥ S1, S2`.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use crate::dilation::{povm_from_dilation, Dilation, JointOutcomeSet};
use crate::error::{Error, Result};
use crate::hilbert::{c, tensor, Ket, Operator, Space, DEFAULT_TOL};
use crate::povm::Povm;

const SYS: Space = Space::System(3);
const ENV: Space = Space::Environment(2);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarisation {
    H,
    V,
    D,
    A,
}

impl Polarisation {
    pub fn ket(self) -> Ket {
        let h = FRAC_1_SQRT_2;
        let amps: [f64; 2] = match self {
            Polarisation::H => [1.0, 0.0],
            Polarisation::V => [0.0, 1.0],
            Polarisation::D => [h, h],
            Polarisation::A => [h, -h],
        };
        Ket::from_reals(ENV, &amps).expect("static shape")
    }
}

/// Which polarisation basis the output detectors resolve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectionBasis {
    VH,
    DA,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThreePathScenario {
    pub paths: [Ket; 3],
    pub s1: Ket,
    pub s2: Ket,
    pub f: Ket,
    /// Unit vector of the path carrying the half-wave plate.
    pub hwp_path: Ket,
}

/// The standard layout, half-wave plate on `|F⟩`.
pub fn build_three_path() -> ThreePathScenario {
    let r3 = 1.0 / libm::sqrt(3.0);
    let h = FRAC_1_SQRT_2;
    let k = |v: [f64; 3]| Ket::from_reals(SYS, &v).expect("static shape");
    let f = k([r3, r3, -r3]);
    ThreePathScenario {
        paths: [k([1.0, 0.0, 0.0]), k([0.0, 1.0, 0.0]), k([0.0, 0.0, 1.0])],
        s1: k([0.0, h, h]),
        s2: k([h, 0.0, h]),
        hwp_path: f.clone(),
        f,
    }
}

impl ThreePathScenario {
    /// Move the half-wave plate to another (unit) path vector.
    pub fn with_hwp_path(mut self, path: Ket) -> Result<Self> {
        if path.space() != SYS {
            return Err(Error::SpaceMismatch {
                expected: SYS,
                found: path.space(),
            });
        }
        if !path.is_normalised(DEFAULT_TOL) {
            return Err(Error::NotNormalised {
                norm_sq: path.norm_sqr(),
            });
        }
        self.hwp_path = path;
        Ok(self)
    }

    /// `I − 2|p⟩⟨p|` for the half-wave-plate path `p`.
    pub fn hwp_operator(&self) -> Operator {
        Operator::identity(SYS)
            .sub(&self.hwp_path.projector().scale(c(2.0)))
            .expect("same space")
    }

    pub fn hwp_transform(&self, psi: &Ket) -> Result<Ket> {
        self.hwp_operator().apply(psi)
    }

    /// Unit context vector `û(pol, i)` for `pol ∈ {V, H}`.
    fn context_vector(&self, pol: Polarisation, i: usize) -> Ket {
        match pol {
            Polarisation::V => self.paths[i].clone(),
            Polarisation::H => self.hwp_transform(&self.paths[i]).expect("same space"),
            _ => unreachable!("only V and H carry contexts"),
        }
    }

    /// `(V,i) = |V⟩⊗|i⟩`, `(H,i) = |H⟩⊗hwp|i⟩`.
    pub fn joint_outcomes_vh(&self) -> JointOutcomeSet {
        let mut outcomes = Vec::with_capacity(6);
        for (pol, name) in [(Polarisation::V, "V"), (Polarisation::H, "H")] {
            for i in 0..3 {
                let m = tensor(&pol.ket(), &self.context_vector(pol, i)).expect("shapes");
                outcomes.push((format!("{name},{}", i + 1), m));
            }
        }
        JointOutcomeSet::new(2, 3, outcomes, DEFAULT_TOL).expect("orthonormal by construction")
    }

    /// `(D,i) = (|H⟩⊗û(H,i) + |V⟩⊗û(V,i))/√2` and `(A,i)` with the minus
    /// sign, built from unit context vectors.
    pub fn joint_outcomes_da(&self) -> JointOutcomeSet {
        let h = c(FRAC_1_SQRT_2);
        let mut outcomes = Vec::with_capacity(6);
        for (sign, name) in [(1.0, "D"), (-1.0, "A")] {
            for i in 0..3 {
                let hp = tensor(&Polarisation::H.ket(), &self.context_vector(Polarisation::H, i)).expect("shapes");
                let vp = tensor(&Polarisation::V.ket(), &self.context_vector(Polarisation::V, i)).expect("shapes");
                let m = hp.add(&vp.scale(c(sign))).expect("same space").scale(h);
                outcomes.push((format!("{name},{}", i + 1), m));
            }
        }
        JointOutcomeSet::new(2, 3, outcomes, DEFAULT_TOL).expect("orthonormal by construction")
    }

    pub fn dilation(&self, basis: DetectionBasis, phi_init: Polarisation) -> Dilation {
        let set = match basis {
            DetectionBasis::VH => self.joint_outcomes_vh(),
            DetectionBasis::DA => self.joint_outcomes_da(),
        };
        Dilation::new(set, phi_init.ket()).expect("normalised environment state")
    }

    /// POVM for the given detection basis and initial polarisation. With
    /// `merge_a`, the three `A` outcomes of the D/A basis collapse into one.
    pub fn povm(&self, basis: DetectionBasis, phi_init: Polarisation, merge_a: bool) -> Result<Povm> {
        let p = povm_from_dilation(&self.dilation(basis, phi_init))?;
        if merge_a && basis == DetectionBasis::DA {
            p.coarse_grain(&["A,1", "A,2", "A,3"], "A")
        } else {
            Ok(p)
        }
    }

    /// V/H detection with diagonal input polarisation.
    pub fn povm_vh(&self) -> Povm {
        self.povm(DetectionBasis::VH, Polarisation::D, false)
            .expect("valid fixture")
    }

    /// D/A detection with diagonal input polarisation.
    pub fn povm_da(&self, merge_a: bool) -> Povm {
        self.povm(DetectionBasis::DA, Polarisation::D, merge_a)
            .expect("valid fixture")
    }

    /// `D_k`: the unit component of `F` orthogonal to path `k` (0-based),
    /// so that `|F⟩ = ⟨k|F⟩|k⟩ + ‖…‖|D_k⟩`.
    pub fn hardy_direction(&self, k: usize) -> Ket {
        let b = &self.paths[k];
        let along = b.inner(&self.f).expect("same space");
        self.f
            .sub(&b.scale(along))
            .expect("same space")
            .normalised(DEFAULT_TOL)
            .expect("F is not a path basis vector")
    }
}
