//! Literal three-path vectors for unit tests, written out by hand rather
//! than derived through the interferometer module.

use alloc::vec::Vec;

use crate::hilbert::{Ket, Space};
use crate::povm::Povm;

pub fn sys(v: &[f64]) -> Ket {
    Ket::from_reals(Space::System(3), v).unwrap()
}

pub fn sys2(v: &[f64]) -> Ket {
    Ket::from_reals(Space::System(2), v).unwrap()
}

pub fn f_ket() -> Ket {
    let r = 1.0 / 3f64.sqrt();
    sys(&[r, r, -r])
}

/// `{λ(D,1), λ(D,2), λ(D,3), λ(A)}`.
pub fn da_merged_povm() -> Povm {
    let t = 1.0 / 3.0;
    Povm::from_vectors(
        3,
        [
            ("D,1", sys(&[2.0 * t, -t, t])),
            ("D,2", sys(&[-t, 2.0 * t, t])),
            ("D,3", sys(&[t, t, 2.0 * t])),
            ("A", f_ket()),
        ]
        .into_iter()
        .collect::<Vec<_>>(),
    )
    .unwrap()
}

/// `λ(V,i) = |i⟩/√2` and `λ(H,i)` with the half-wave plate on path F.
pub fn vh_povm() -> Povm {
    let h = 1.0 / 2f64.sqrt();
    let k = h / 3.0;
    Povm::from_vectors(
        3,
        [
            ("V,1", sys(&[h, 0.0, 0.0])),
            ("V,2", sys(&[0.0, h, 0.0])),
            ("V,3", sys(&[0.0, 0.0, h])),
            ("H,1", sys(&[k, -2.0 * k, 2.0 * k])),
            ("H,2", sys(&[-2.0 * k, k, 2.0 * k])),
            ("H,3", sys(&[2.0 * k, 2.0 * k, k])),
        ]
        .into_iter()
        .collect::<Vec<_>>(),
    )
    .unwrap()
}
