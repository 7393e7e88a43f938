use alloc::vec::Vec;

use num_complex::Complex64;

use super::{c, cabs, Ket, Operator, DEFAULT_TOL, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigendecomposition of a Hermitian operator.
#[derive(Debug, Clone)]
pub struct Eigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Orthonormal, `vectors[k]` belongs to `values[k]`. Each vector carries
    /// the canonical phase of [`Ket::canonical_phase`].
    pub vectors: Vec<Ket>,
}

impl Eigen {
    pub fn max(&self) -> (f64, &Ket) {
        let k = self.values.len() - 1;
        (self.values[k], &self.vectors[k])
    }

    pub fn min(&self) -> (f64, &Ket) {
        (self.values[0], &self.vectors[0])
    }

    /// Number of eigenvalues strictly above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.values.iter().filter(|&&v| v > tol).count()
    }

    /// `Σ_k e_k |v_k⟩⟨v_k|`.
    pub fn reconstruct(&self) -> Operator {
        let space = self.vectors[0].space();
        let mut out = Operator::zero(space);
        for (v, k) in self.values.iter().zip(&self.vectors) {
            out = out.add(&k.projector().scale(c(*v))).expect("same space");
        }
        out
    }
}

/// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
///
/// Input must be Hermitian within [`DEFAULT_TOL`] (relative to its largest
/// entry); only the upper triangle is trusted after that check.
pub fn eigh(op: &Operator) -> Result<Eigen> {
    let n = op.dim();
    let scale = op.max_abs().max(1.0);
    let residual = op.hermiticity_residual();
    if residual > DEFAULT_TOL * scale {
        return Err(Error::NotHermitian { residual });
    }

    // Symmetrised working copy.
    let mut a: Vec<Complex64> = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            a.push(if i <= j { op[(i, j)] } else { op[(j, i)].conj() });
        }
        a[i * n + i] = c(a[i * n + i].re);
    }
    let mut v: Vec<Complex64> = (0..n * n).map(|k| if k / n == k % n { c(1.0) } else { ZERO }).collect();

    let off = |a: &[Complex64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                s += a[i * n + j].norm_sqr();
            }
        }
        s
    };
    let eps = (1e-15 * scale * n as f64) * (1e-15 * scale * n as f64);

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        if off(&a) <= eps {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let mag = cabs(apq);
                if mag == 0.0 {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let phase = apq / mag;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + libm::sqrt(1.0 + tau * tau))
                } else {
                    -1.0 / (-tau + libm::sqrt(1.0 + tau * tau))
                };
                let cs = 1.0 / libm::sqrt(1.0 + t * t);
                let sn = t * cs;
                // U restricted to (p, q): [[c, s], [-s e^{-iθ}, c e^{-iθ}]]
                let upp = c(cs);
                let upq = c(sn);
                let uqp = -phase.conj() * sn;
                let uqq = phase.conj() * cs;

                // A <- A U
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * upp + akq * uqp;
                    a[k * n + q] = akp * upq + akq * uqq;
                }
                // A <- U† A
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = upp.conj() * apk + uqp.conj() * aqk;
                    a[q * n + k] = upq.conj() * apk + uqq.conj() * aqk;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p] = c(a[p * n + p].re);
                a[q * n + q] = c(a[q * n + q].re);
                // V <- V U
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * upp + vkq * uqp;
                    v[k * n + q] = vkp * upq + vkq * uqq;
                }
            }
        }
    }
    if !converged && off(&a) > eps {
        return Err(Error::NoConvergence { sweeps: MAX_SWEEPS });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].re.total_cmp(&a[j * n + j].re));
    let space = op.space();
    let values = order.iter().map(|&k| a[k * n + k].re).collect();
    let vectors = order
        .iter()
        .map(|&k| {
            let col = (0..n).map(|r| v[r * n + k]).collect();
            Ket::new(space, col).expect("finite").canonical_phase()
        })
        .collect();
    Ok(Eigen { values, vectors })
}
