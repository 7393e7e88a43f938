//! Dense complex linear algebra over labelled Hilbert spaces.
//!
//! Joint spaces use the environment-major flat index `e * d_S + s`, so that
//! `tensor(env, sys)` lays out the environment factor as the slow index.

mod eigen;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub use eigen::{eigh, Eigen};

/// Default absolute tolerance for every validation in the toolkit.
pub const DEFAULT_TOL: f64 = 1e-9;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[inline]
pub(crate) fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

#[inline]
pub(crate) fn cabs(z: Complex64) -> f64 {
    libm::hypot(z.re, z.im)
}

/// Which factor of the system-environment product a vector lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Space {
    System(usize),
    Environment(usize),
    Joint { env: usize, sys: usize },
}

impl Space {
    pub fn system(dim: usize) -> Result<Self> {
        nonzero(dim).map(Space::System)
    }

    pub fn environment(dim: usize) -> Result<Self> {
        nonzero(dim).map(Space::Environment)
    }

    pub fn joint(env: usize, sys: usize) -> Result<Self> {
        nonzero(env)?;
        nonzero(sys)?;
        Ok(Space::Joint { env, sys })
    }

    pub fn dim(&self) -> usize {
        match *self {
            Space::System(d) | Space::Environment(d) => d,
            Space::Joint { env, sys } => env * sys,
        }
    }
}

fn nonzero(dim: usize) -> Result<usize> {
    if dim == 0 {
        Err(Error::ZeroDimension)
    } else {
        Ok(dim)
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::System(d) => write!(f, "System({d})"),
            Space::Environment(d) => write!(f, "Environment({d})"),
            Space::Joint { env, sys } => write!(f, "Joint({env}, {sys})"),
        }
    }
}

fn check_space(expected: Space, found: Space) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::SpaceMismatch { expected, found })
    }
}

/// A (possibly non-normalised) vector of complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    space: Space,
    amps: Vec<Complex64>,
}

impl Ket {
    pub fn new(space: Space, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: amps.len(),
            });
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite("ket"));
        }
        Ok(Ket { space, amps })
    }

    /// Real amplitudes, convenient for fixtures.
    pub fn from_reals(space: Space, amps: &[f64]) -> Result<Self> {
        Ket::new(space, amps.iter().map(|&x| c(x)).collect())
    }

    pub fn zero(space: Space) -> Self {
        Ket {
            space,
            amps: vec![ZERO; space.dim()],
        }
    }

    /// Canonical basis vector `|index⟩`.
    pub fn basis(space: Space, index: usize) -> Result<Self> {
        if index >= space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: index + 1,
            });
        }
        let mut k = Ket::zero(space);
        k.amps[index] = ONE;
        Ok(k)
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    /// Same amplitudes relabelled onto another space of equal dimension.
    pub fn relabel(mut self, space: Space) -> Result<Self> {
        if space.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: self.dim(),
            });
        }
        self.space = space;
        Ok(self)
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Ket) -> Result<Complex64> {
        check_space(self.space, other.space)?;
        Ok(self.inner_unchecked(other))
    }

    pub(crate) fn inner_unchecked(&self, other: &Ket) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .fold(ZERO, |acc, (a, b)| acc + a.conj() * b)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sqr())
    }

    pub fn is_normalised(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    pub fn scale(&self, factor: Complex64) -> Ket {
        Ket {
            space: self.space,
            amps: self.amps.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn add(&self, other: &Ket) -> Result<Ket> {
        check_space(self.space, other.space)?;
        Ok(Ket {
            space: self.space,
            amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Ket) -> Result<Ket> {
        check_space(self.space, other.space)?;
        Ok(Ket {
            space: self.space,
            amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a - b).collect(),
        })
    }

    /// Unit vector along `self`; `None` when the norm is at most `tol`.
    pub fn normalised(&self, tol: f64) -> Option<Ket> {
        let n = self.norm();
        if n <= tol {
            None
        } else {
            Some(self.scale(c(1.0 / n)))
        }
    }

    /// `|self⟩⟨other|`.
    pub fn outer(&self, other: &Ket) -> Result<Operator> {
        check_space(self.space, other.space)?;
        let n = self.dim();
        let mut op = Operator::zero(self.space);
        for i in 0..n {
            for j in 0..n {
                op[(i, j)] = self.amps[i] * other.amps[j].conj();
            }
        }
        Ok(op)
    }

    /// `|self⟩⟨self|`.
    pub fn projector(&self) -> Operator {
        self.outer(self).expect("same space")
    }

    /// Multiply by a global phase so that the largest-magnitude amplitude is
    /// real and positive. Near-ties (within a relative 1e-9) resolve to the
    /// lowest index, so the result is stable under rounding noise.
    pub fn canonical_phase(&self) -> Ket {
        let max = self.amps.iter().map(|a| cabs(*a)).fold(0.0, f64::max);
        if max == 0.0 {
            return self.clone();
        }
        let pivot = self
            .amps
            .iter()
            .position(|a| cabs(*a) >= max * (1.0 - 1e-9))
            .expect("maximum exists");
        let a = self.amps[pivot];
        if a.im == 0.0 && a.re > 0.0 {
            return self.clone();
        }
        let mag = cabs(a);
        let mut out = self.scale(a.conj() / mag);
        out.amps[pivot] = c(mag);
        out
    }

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &Ket) -> Result<f64> {
        check_space(self.space, other.space)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| cabs(a - b))
            .fold(0.0, f64::max))
    }
}

impl Index<usize> for Ket {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.amps[i]
    }
}

/// Dense square matrix acting on one space, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    space: Space,
    data: Vec<Complex64>,
}

impl Operator {
    pub fn new(space: Space, rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let n = space.dim();
        if rows.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: rows.len(),
            });
        }
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        if data.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite("operator"));
        }
        Ok(Operator { space, data })
    }

    pub fn zero(space: Space) -> Self {
        let n = space.dim();
        Operator {
            space,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(space: Space) -> Self {
        let mut op = Operator::zero(space);
        for i in 0..space.dim() {
            op[(i, i)] = ONE;
        }
        op
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Complex64]> {
        self.data.chunks(self.dim())
    }

    pub fn adjoint(&self) -> Operator {
        let n = self.dim();
        let mut out = Operator::zero(self.space);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, factor: Complex64) -> Operator {
        Operator {
            space: self.space,
            data: self.data.iter().map(|a| a * factor).collect(),
        }
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        check_space(self.space, other.space)?;
        Ok(Operator {
            space: self.space,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        check_space(self.space, other.space)?;
        Ok(Operator {
            space: self.space,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn matmul(&self, other: &Operator) -> Result<Operator> {
        check_space(self.space, other.space)?;
        let n = self.dim();
        let mut out = Operator::zero(self.space);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, ket: &Ket) -> Result<Ket> {
        check_space(self.space, ket.space)?;
        let amps = self
            .rows()
            .map(|row| row.iter().zip(&ket.amps).map(|(a, b)| a * b).sum())
            .collect();
        Ok(Ket {
            space: self.space,
            amps,
        })
    }

    /// `⟨ket|self|ket⟩`.
    pub fn expectation(&self, ket: &Ket) -> Result<Complex64> {
        Ok(ket.inner_unchecked(&self.apply(ket)?))
    }

    /// `self·other − other·self`.
    pub fn commutator(&self, other: &Operator) -> Result<Operator> {
        self.matmul(other)?.sub(&other.matmul(self)?)
    }

    pub fn max_abs_diff(&self, other: &Operator) -> Result<f64> {
        check_space(self.space, other.space)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| cabs(a - b))
            .fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|a| cabs(*a)).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|a| a.norm_sqr()).sum())
    }

    /// Entrywise `max |M − M†|`.
    pub fn hermiticity_residual(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max(cabs(self[(i, j)] - self[(j, i)].conj()));
            }
        }
        worst
    }

    /// Entrywise `max |U†U − I|`.
    pub fn unitarity_residual(&self) -> f64 {
        let prod = self.adjoint().matmul(self).expect("same space");
        prod.max_abs_diff(&Operator::identity(self.space)).expect("same space")
    }

    pub fn relabel(mut self, space: Space) -> Result<Self> {
        if space.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: self.dim(),
            });
        }
        self.space = space;
        Ok(self)
    }
}

impl Index<(usize, usize)> for Operator {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.space.dim() + j]
    }
}

impl IndexMut<(usize, usize)> for Operator {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        let n = self.space.dim();
        &mut self.data[i * n + j]
    }
}

/// `|env⟩ ⊗ |sys⟩` in the environment-major joint space.
pub fn tensor(env: &Ket, sys: &Ket) -> Result<Ket> {
    let (de, ds) = match (env.space, sys.space) {
        (Space::Environment(de), Space::System(ds)) => (de, ds),
        (Space::Environment(_), other) => {
            return Err(Error::SpaceMismatch {
                expected: Space::System(sys.dim()),
                found: other,
            })
        }
        (other, _) => {
            return Err(Error::SpaceMismatch {
                expected: Space::Environment(env.dim()),
                found: other,
            })
        }
    };
    let mut amps = Vec::with_capacity(de * ds);
    for e in &env.amps {
        amps.extend(sys.amps.iter().map(|s| e * s));
    }
    Ok(Ket {
        space: Space::Joint { env: de, sys: ds },
        amps,
    })
}

/// Contract the environment factor of a joint vector with `phi`:
/// `λ[s] = Σ_e conj(φ[e]) · m[e·d_S + s]`.
pub fn partial_inner_env(phi: &Ket, joint: &Ket) -> Result<Ket> {
    let (de, ds) = match joint.space {
        Space::Joint { env, sys } => (env, sys),
        other => {
            return Err(Error::SpaceMismatch {
                expected: Space::Joint {
                    env: phi.dim(),
                    sys: joint.dim() / phi.dim().max(1),
                },
                found: other,
            })
        }
    };
    check_space(Space::Environment(de), phi.space)?;
    let mut amps = vec![ZERO; ds];
    for (e, p) in phi.amps.iter().enumerate() {
        let pc = p.conj();
        for (s, out) in amps.iter_mut().enumerate() {
            *out += pc * joint.amps[e * ds + s];
        }
    }
    Ok(Ket {
        space: Space::System(ds),
        amps,
    })
}

/// Gram matrix `G[i][j] = ⟨v_i|v_j⟩`, labelled on a system space of size
/// `vectors.len()`.
pub fn gram(vectors: &[Ket]) -> Result<Operator> {
    let first = vectors.first().ok_or(Error::Empty("gram vectors"))?;
    for v in vectors {
        check_space(first.space, v.space)?;
    }
    let m = vectors.len();
    let mut g = Operator::zero(Space::System(m));
    for i in 0..m {
        for j in i..m {
            let v = vectors[i].inner_unchecked(&vectors[j]);
            g[(i, j)] = v;
            g[(j, i)] = v.conj();
        }
    }
    Ok(g)
}

/// Largest deviation of the Gram matrix from the identity.
pub fn orthonormality_residual(vectors: &[Ket]) -> Result<f64> {
    let g = gram(vectors)?;
    g.max_abs_diff(&Operator::identity(g.space()))
}
