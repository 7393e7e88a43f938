//! POVMs, states and the probability rules built on them.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hilbert::{c, cabs, eigh, orthonormality_residual, Ket, Operator, Space, DEFAULT_TOL};

/// Payload of one POVM element.
#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    /// Rank-one element `|λ⟩⟨λ|`, stored as the (non-normalised) vector `|λ⟩`.
    Vector(Ket),
    /// General positive element.
    Operator(Operator),
}

impl Payload {
    pub fn to_operator(&self) -> Operator {
        match self {
            Payload::Vector(v) => v.projector(),
            Payload::Operator(op) => op.clone(),
        }
    }

    pub fn as_vector(&self) -> Option<&Ket> {
        match self {
            Payload::Vector(v) => Some(v),
            Payload::Operator(_) => None,
        }
    }

    fn space(&self) -> Space {
        match self {
            Payload::Vector(v) => v.space(),
            Payload::Operator(op) => op.space(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub label: String,
    pub payload: Payload,
}

/// A labelled, finite-outcome POVM on a system of dimension `system_dim`.
///
/// Construction checks shapes, label uniqueness and element positivity but
/// *not* completeness, which is reported by [`Povm::completeness_check`].
/// Vector payloads are stored with the canonical phase of
/// [`Ket::canonical_phase`].
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    system_dim: usize,
    elements: Vec<Element>,
    tol: f64,
}

impl Povm {
    pub fn new(system_dim: usize, elements: Vec<(String, Payload)>) -> Result<Self> {
        Self::with_tol(system_dim, elements, DEFAULT_TOL)
    }

    pub fn with_tol(system_dim: usize, elements: Vec<(String, Payload)>, tol: f64) -> Result<Self> {
        let space = Space::system(system_dim)?;
        if elements.is_empty() {
            return Err(Error::Empty("POVM elements"));
        }
        let mut out: Vec<Element> = Vec::with_capacity(elements.len());
        for (label, payload) in elements {
            if out.iter().any(|e| e.label == label) {
                return Err(Error::DuplicateLabel(label));
            }
            if payload.space() != space {
                return Err(Error::SpaceMismatch {
                    expected: space,
                    found: payload.space(),
                });
            }
            let payload = match payload {
                Payload::Vector(v) => {
                    let w = v.norm_sqr();
                    if w > 1.0 + tol {
                        return Err(Error::WeightOutOfRange { label, weight: w });
                    }
                    Payload::Vector(v.canonical_phase())
                }
                Payload::Operator(op) => {
                    let eig = eigh(&op)?;
                    let (lo, hi) = (eig.min().0, eig.max().0);
                    if lo < -tol {
                        return Err(Error::NotPositive { min_eigenvalue: lo });
                    }
                    if hi > 1.0 + tol {
                        return Err(Error::WeightOutOfRange { label, weight: hi });
                    }
                    Payload::Operator(op)
                }
            };
            out.push(Element { label, payload });
        }
        Ok(Povm {
            system_dim,
            elements: out,
            tol,
        })
    }

    /// POVM whose elements are all rank-one vectors.
    pub fn from_vectors<S: Into<String>>(system_dim: usize, vectors: Vec<(S, Ket)>) -> Result<Self> {
        Self::new(
            system_dim,
            vectors
                .into_iter()
                .map(|(l, v)| (l.into(), Payload::Vector(v)))
                .collect(),
        )
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn space(&self) -> Space {
        Space::System(self.system_dim)
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Same elements, different validation tolerance.
    pub fn retol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.elements.iter().map(|e| e.label.as_str())
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.elements
            .iter()
            .position(|e| e.label == label)
            .ok_or_else(|| Error::UnknownLabel(label.into()))
    }

    pub fn element(&self, label: &str) -> Result<&Element> {
        Ok(&self.elements[self.index_of(label)?])
    }

    /// Vector of a rank-one element, if stored as one.
    pub fn vector(&self, label: &str) -> Result<&Ket> {
        let e = self.element(label)?;
        e.payload.as_vector().ok_or_else(|| Error::NotRankOne(e.label.clone()))
    }

    /// Largest entrywise deviation of `Σ_m E_m` from the identity.
    pub fn completeness_check(&self) -> f64 {
        let space = self.space();
        let sum = self.elements.iter().fold(Operator::zero(space), |acc, e| {
            acc.add(&e.payload.to_operator()).expect("same space")
        });
        sum.max_abs_diff(&Operator::identity(space)).expect("same space")
    }

    pub fn is_complete(&self) -> bool {
        self.completeness_check() <= self.tol
    }

    /// Born-rule probability of `label` in `state`.
    pub fn probability(&self, state: &State, label: &str) -> Result<f64> {
        let e = self.element(label)?;
        if state.space() != self.space() {
            return Err(Error::SpaceMismatch {
                expected: self.space(),
                found: state.space(),
            });
        }
        let p = match (&e.payload, state) {
            (Payload::Vector(v), State::Pure(psi)) => v.inner(psi)?.norm_sqr(),
            (Payload::Vector(v), State::Mixed(rho)) => rho.op.expectation(v)?.re,
            (Payload::Operator(op), State::Pure(psi)) => op.expectation(psi)?.re,
            (Payload::Operator(op), State::Mixed(rho)) => op.matmul(&rho.op)?.trace().re,
        };
        if p < -self.tol {
            return Err(Error::NotPositive { min_eigenvalue: p });
        }
        Ok(p)
    }

    /// Maximal probability of `label` over all states: `⟨λ|λ⟩` for vectors,
    /// the largest eigenvalue for operator elements.
    pub fn context_selection_probability(&self, label: &str) -> Result<f64> {
        let e = self.element(label)?;
        Ok(match &e.payload {
            Payload::Vector(v) => v.norm_sqr(),
            Payload::Operator(op) => eigh(op)?.max().0,
        })
    }

    /// The state that attains [`Povm::context_selection_probability`].
    ///
    /// For operator elements this is the top eigenvector, which is unique only
    /// when the top eigenvalue is non-degenerate.
    pub fn maximizing_state(&self, label: &str) -> Result<DensityMatrix> {
        let e = self.element(label)?;
        let dir = match &e.payload {
            Payload::Vector(v) => v.clone(),
            Payload::Operator(op) => {
                let eig = eigh(op)?;
                if eig.max().0 <= self.tol {
                    return Err(Error::ZeroElement(e.label.clone()));
                }
                eig.max().1.clone()
            }
        };
        DensityMatrix::from_ket(&dir, self.tol).map_err(|_| Error::ZeroElement(e.label.clone()))
    }

    /// Probability divided by the context-selection probability.
    pub fn rescaled_probability(&self, state: &State, label: &str) -> Result<f64> {
        let w = self.context_selection_probability(label)?;
        if w <= self.tol {
            return Err(Error::ZeroElement(label.into()));
        }
        Ok(self.probability(state, label)? / w)
    }

    /// Whether two outcomes share a measurement context.
    ///
    /// Rank-one pairs are tested through the normalised overlap
    /// `|⟨λ̂₁|λ̂₂⟩|`, shared when it is at most `tol` (orthogonal) or at least
    /// `1 − tol` (same projector). Pairs involving an operator element use
    /// the Frobenius norm of the commutator of the support projectors.
    pub fn share_context(&self, first: &str, second: &str) -> Result<ContextWitness> {
        let a = self.element(first)?;
        let b = self.element(second)?;
        let tol = self.tol;
        if let (Payload::Vector(u), Payload::Vector(v)) = (&a.payload, &b.payload) {
            let u = u.normalised(tol).ok_or_else(|| Error::ZeroElement(a.label.clone()))?;
            let v = v.normalised(tol).ok_or_else(|| Error::ZeroElement(b.label.clone()))?;
            let overlap = cabs(u.inner(&v)?);
            let proportional = overlap >= 1.0 - tol;
            return Ok(ContextWitness {
                shared: overlap <= tol || proportional,
                kind: WitnessKind::Overlap,
                magnitude: overlap,
                proportional,
            });
        }
        let pa = support_projector(&a.payload.to_operator(), tol).ok_or_else(|| Error::ZeroElement(a.label.clone()))?;
        let pb = support_projector(&b.payload.to_operator(), tol).ok_or_else(|| Error::ZeroElement(b.label.clone()))?;
        let comm = pa.commutator(&pb)?.frobenius_norm();
        Ok(ContextWitness {
            shared: comm <= tol,
            kind: WitnessKind::Commutator,
            magnitude: comm,
            proportional: pa.sub(&pb)?.frobenius_norm() <= tol,
        })
    }

    /// Graph of the share-context relation over the non-zero outcomes.
    pub fn context_graph(&self) -> Result<ContextGraph> {
        let mut nodes = Vec::new();
        let mut excluded = Vec::new();
        for e in &self.elements {
            let weight = match &e.payload {
                Payload::Vector(v) => v.norm_sqr(),
                Payload::Operator(op) => eigh(op)?.max().0,
            };
            if weight <= self.tol {
                excluded.push(e.label.clone());
            } else {
                nodes.push(e.label.clone());
            }
        }
        let mut edges = Vec::new();
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                let witness = self.share_context(&nodes[i], &nodes[j])?;
                if witness.shared {
                    edges.push(ContextEdge {
                        a: nodes[i].clone(),
                        b: nodes[j].clone(),
                        witness,
                    });
                }
            }
        }
        Ok(ContextGraph { nodes, edges, excluded })
    }

    /// Merge `labels` into a single outcome `new_label` whose element is the
    /// sum of the merged elements. The merged outcome takes the position of
    /// the first merged element; a rank-one sum is stored as a vector.
    pub fn coarse_grain(&self, labels: &[&str], new_label: &str) -> Result<Povm> {
        if labels.is_empty() {
            return Err(Error::Empty("labels to merge"));
        }
        let mut idx = Vec::with_capacity(labels.len());
        for l in labels {
            let i = self.index_of(l)?;
            if idx.contains(&i) {
                return Err(Error::DuplicateLabel((*l).into()));
            }
            idx.push(i);
        }
        let first = *idx.iter().min().expect("non-empty");
        let sum = idx.iter().fold(Operator::zero(self.space()), |acc, &i| {
            acc.add(&self.elements[i].payload.to_operator()).expect("same space")
        });
        let eig = eigh(&sum)?;
        let merged = match eig.rank(self.tol) {
            0 => Payload::Vector(Ket::zero(self.space())),
            1 => {
                let (w, v) = eig.max();
                Payload::Vector(v.scale(c(libm::sqrt(w))))
            }
            _ => Payload::Operator(sum),
        };
        let mut elements = Vec::with_capacity(self.len() + 1 - idx.len());
        for (i, e) in self.elements.iter().enumerate() {
            if i == first {
                elements.push((String::from(new_label), merged.clone()));
            } else if !idx.contains(&i) {
                elements.push((e.label.clone(), e.payload.clone()));
            }
        }
        Povm::with_tol(self.system_dim, elements, self.tol)
    }
}

fn support_projector(op: &Operator, tol: f64) -> Option<Operator> {
    let eig = eigh(op).ok()?;
    let mut proj = Operator::zero(op.space());
    let mut any = false;
    for (val, vec) in eig.values.iter().zip(&eig.vectors) {
        if *val > tol {
            proj = proj.add(&vec.projector()).expect("same space");
            any = true;
        }
    }
    any.then_some(proj)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// Normalised overlap magnitude of two rank-one elements.
    Overlap,
    /// Frobenius norm of the commutator of the support projectors.
    Commutator,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContextWitness {
    pub shared: bool,
    pub kind: WitnessKind,
    pub magnitude: f64,
    /// The two elements have the same support projector.
    pub proportional: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContextEdge {
    pub a: String,
    pub b: String,
    pub witness: ContextWitness,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContextGraph {
    pub nodes: Vec<String>,
    pub edges: Vec<ContextEdge>,
    /// Zero-weight outcomes, left out of the relation.
    pub excluded: Vec<String>,
}

impl ContextGraph {
    pub fn has_edge(&self, a: &str, b: &str) -> bool {
        self.edges
            .iter()
            .any(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
    }

    pub fn degree(&self, node: &str) -> usize {
        self.edges.iter().filter(|e| e.a == node || e.b == node).count()
    }
}

/// A labelled orthonormal basis of the system, one measurement context.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedBasis {
    pub name: String,
    pub vectors: Vec<Ket>,
}

impl NamedBasis {
    pub fn new(name: impl Into<String>, vectors: Vec<Ket>) -> Self {
        NamedBasis {
            name: name.into(),
            vectors,
        }
    }
}

/// Choose context `x` with probability `weights[x]`, then measure its basis.
/// Outcome `(x, a)` is labelled `"{name},{a+1}"` with vector `√P(x)|a_x⟩`.
pub fn selby_mixture(bases: &[NamedBasis], weights: &[f64], tol: f64) -> Result<Povm> {
    if bases.is_empty() {
        return Err(Error::Empty("bases"));
    }
    if weights.len() != bases.len() {
        return Err(Error::InvalidWeights("one weight per basis required"));
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::InvalidWeights("weights must be non-negative"));
    }
    if (weights.iter().sum::<f64>() - 1.0).abs() > tol {
        return Err(Error::InvalidWeights("weights must sum to one"));
    }
    let dim = bases[0].vectors.first().ok_or(Error::Empty("basis"))?.dim();
    let mut elements = Vec::new();
    for (basis, &w) in bases.iter().zip(weights) {
        if basis.vectors.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: basis.vectors.len(),
            });
        }
        let residual = orthonormality_residual(&basis.vectors)?;
        if residual > tol {
            return Err(Error::NotOrthonormal { residual });
        }
        let amp = c(libm::sqrt(w));
        for (a, v) in basis.vectors.iter().enumerate() {
            elements.push((format!("{},{}", basis.name, a + 1), Payload::Vector(v.scale(amp))));
        }
    }
    Povm::with_tol(dim, elements, tol)
}

/// A validated density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: Operator,
}

impl DensityMatrix {
    pub fn new(op: Operator, tol: f64) -> Result<Self> {
        let residual = op.hermiticity_residual();
        if residual > tol {
            return Err(Error::NotHermitian { residual });
        }
        let trace = op.trace().re;
        if (trace - 1.0).abs() > tol {
            return Err(Error::BadTrace { trace });
        }
        let min = eigh(&op)?.min().0;
        if min < -tol {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        Ok(DensityMatrix { op })
    }

    /// `|ψ⟩⟨ψ| / ⟨ψ|ψ⟩`.
    pub fn from_ket(psi: &Ket, tol: f64) -> Result<Self> {
        let unit = psi.normalised(tol).ok_or(Error::NotNormalised {
            norm_sq: psi.norm_sqr(),
        })?;
        Ok(DensityMatrix { op: unit.projector() })
    }

    pub fn operator(&self) -> &Operator {
        &self.op
    }

    pub fn space(&self) -> Space {
        self.op.space()
    }
}

/// Pure or mixed system state.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Pure(Ket),
    Mixed(DensityMatrix),
}

impl State {
    /// Pure state; the ket must be normalised within `tol`.
    pub fn pure(psi: Ket, tol: f64) -> Result<Self> {
        if !psi.is_normalised(tol) {
            return Err(Error::NotNormalised {
                norm_sq: psi.norm_sqr(),
            });
        }
        Ok(State::Pure(psi))
    }

    pub fn space(&self) -> Space {
        match self {
            State::Pure(k) => k.space(),
            State::Mixed(rho) => rho.space(),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        match self {
            State::Pure(k) => DensityMatrix { op: k.projector() },
            State::Mixed(rho) => rho.clone(),
        }
    }
}

impl From<DensityMatrix> for State {
    fn from(rho: DensityMatrix) -> Self {
        State::Mixed(rho)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use alloc::vec;

    const T: f64 = 1e-12;

    fn basis_povm(dim: usize) -> Povm {
        Povm::from_vectors(
            dim,
            (0..dim)
                .map(|i| (format!("{}", i + 1), Ket::basis(Space::System(dim), i).unwrap()))
                .collect(),
        )
        .unwrap()
    }

    fn uniform() -> State {
        let r = 1.0 / 3f64.sqrt();
        State::pure(fixtures::sys(&[r, r, r]), T).unwrap()
    }

    #[test]
    fn completeness_examples() {
        assert_eq!(basis_povm(3).completeness_check(), 0.0);
        let p = fixtures::da_merged_povm();
        assert!(p.completeness_check() <= T);
        let partial = Povm::from_vectors(
            3,
            p.elements()[..3]
                .iter()
                .map(|e| (e.label.clone(), e.payload.as_vector().unwrap().clone()))
                .collect(),
        )
        .unwrap();
        assert!((partial.completeness_check() - 1.0 / 3.0).abs() <= T);
        assert!(!partial.is_complete());
    }

    #[test]
    fn probabilities_on_uniform_state() {
        let p = fixtures::da_merged_povm();
        let psi = uniform();
        let expected = [4.0 / 27.0, 4.0 / 27.0, 16.0 / 27.0, 1.0 / 9.0];
        let mut total = 0.0;
        for (label, e) in ["D,1", "D,2", "D,3", "A"].iter().zip(expected) {
            let pr = p.probability(&psi, label).unwrap();
            assert!((pr - e).abs() <= T, "{label}: {pr}");
            total += pr;
        }
        assert!((total - 1.0).abs() <= T);
        assert!(matches!(p.probability(&psi, "nope"), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn probability_mixed_matches_pure() {
        let p = fixtures::da_merged_povm();
        let psi = uniform();
        let rho = State::Mixed(psi.density());
        for l in ["D,1", "A"] {
            let a = p.probability(&psi, l).unwrap();
            let b = p.probability(&rho, l).unwrap();
            assert!((a - b).abs() <= T);
        }
    }

    #[test]
    fn vh_probability_and_weights() {
        let p = fixtures::vh_povm();
        let one = State::pure(Ket::basis(Space::System(3), 0).unwrap(), T).unwrap();
        assert!((p.probability(&one, "V,1").unwrap() - 0.5).abs() <= T);
        for l in p.labels() {
            assert!((p.context_selection_probability(l).unwrap() - 0.5).abs() <= T);
        }
    }

    #[test]
    fn selection_probabilities() {
        let b = basis_povm(3);
        assert_eq!(b.context_selection_probability("2").unwrap(), 1.0);
        let p = fixtures::da_merged_povm();
        assert!((p.context_selection_probability("D,1").unwrap() - 2.0 / 3.0).abs() <= T);
    }

    #[test]
    fn maximizing_states() {
        let b = basis_povm(3);
        let rho = b.maximizing_state("2").unwrap();
        assert!(
            rho.operator()
                .max_abs_diff(&Ket::basis(Space::System(3), 1).unwrap().projector())
                .unwrap()
                <= T
        );

        let p = fixtures::da_merged_povm();
        let rho = p.maximizing_state("D,1").unwrap();
        let r6 = 1.0 / 6f64.sqrt();
        let target = fixtures::sys(&[2.0 * r6, -r6, r6]).projector();
        assert!(rho.operator().max_abs_diff(&target).unwrap() <= T);
        let pr = p.probability(&State::Mixed(rho), "D,1").unwrap();
        assert!((pr - 2.0 / 3.0).abs() <= T);

        let rho = p.maximizing_state("A").unwrap();
        assert!(rho.operator().max_abs_diff(&fixtures::f_ket().projector()).unwrap() <= T);
        assert!((p.probability(&State::Mixed(rho), "A").unwrap() - 1.0).abs() <= T);
    }

    #[test]
    fn maximizing_state_rejects_zero() {
        let p = Povm::from_vectors(
            2,
            vec![
                ("z", Ket::zero(Space::System(2))),
                ("a", fixtures::sys2(&[1.0, 0.0])),
                ("b", fixtures::sys2(&[0.0, 1.0])),
            ],
        )
        .unwrap();
        assert!(matches!(p.maximizing_state("z"), Err(Error::ZeroElement(_))));
        let s = State::pure(fixtures::sys2(&[1.0, 0.0]), T).unwrap();
        assert!(matches!(p.rescaled_probability(&s, "z"), Err(Error::ZeroElement(_))));
        assert!(matches!(p.share_context("z", "a"), Err(Error::ZeroElement(_))));
        let g = p.context_graph().unwrap();
        assert_eq!(g.excluded, vec![String::from("z")]);
        assert_eq!(g.nodes.len(), 2);
    }

    #[test]
    fn rescaled_examples() {
        let p = fixtures::da_merged_povm();
        let rho = State::Mixed(p.maximizing_state("D,2").unwrap());
        assert!((p.rescaled_probability(&rho, "D,2").unwrap() - 1.0).abs() <= T);
        assert!((p.rescaled_probability(&uniform(), "A").unwrap() - 1.0 / 9.0).abs() <= T);

        let vh = fixtures::vh_povm();
        let one = State::pure(Ket::basis(Space::System(3), 0).unwrap(), T).unwrap();
        let sum = vh.rescaled_probability(&one, "V,1").unwrap() + vh.rescaled_probability(&one, "V,2").unwrap();
        assert!((sum - 1.0).abs() <= T);
    }

    #[test]
    fn share_context_examples() {
        let p = fixtures::da_merged_povm();
        let w = p.share_context("D,1", "A").unwrap();
        assert!(w.shared && !w.proportional && w.magnitude <= T);
        let w = p.share_context("D,1", "D,2").unwrap();
        assert!(!w.shared);
        assert!((w.magnitude - 0.5).abs() <= T);
        let w = p.share_context("D,3", "D,3").unwrap();
        assert!(w.shared && w.proportional);
    }

    #[test]
    fn commutator_path_agrees_with_overlap_path() {
        let p = fixtures::da_merged_povm();
        let as_ops = Povm::new(
            3,
            p.elements()
                .iter()
                .map(|e| (e.label.clone(), Payload::Operator(e.payload.to_operator())))
                .collect(),
        )
        .unwrap();
        for a in ["D,1", "D,2", "D,3", "A"] {
            for b in ["D,1", "D,2", "D,3", "A"] {
                let x = p.share_context(a, b).unwrap();
                let y = as_ops.share_context(a, b).unwrap();
                assert_eq!(x.shared, y.shared, "{a} {b}");
                assert_eq!(y.kind, WitnessKind::Commutator);
            }
        }
    }

    #[test]
    fn graphs() {
        let g = basis_povm(3).context_graph().unwrap();
        assert_eq!(g.edges.len(), 3);

        let g = fixtures::da_merged_povm().context_graph().unwrap();
        assert_eq!(g.edges.len(), 3);
        for d in ["D,1", "D,2", "D,3"] {
            assert!(g.has_edge("A", d));
        }
        assert_eq!(g.degree("A"), 3);

        // V/H: within-triple edges, plus cross edges only where orthogonal.
        let vh = fixtures::vh_povm();
        let g = vh.context_graph().unwrap();
        for ctx in ["V", "H"] {
            for i in 1..=3 {
                for j in i + 1..=3 {
                    assert!(g.has_edge(&format!("{ctx},{i}"), &format!("{ctx},{j}")));
                }
            }
        }
        for i in 1..=3 {
            for j in 1..=3 {
                let (v, h) = (format!("V,{i}"), format!("H,{j}"));
                let ov = vh.vector(&v).unwrap().inner(vh.vector(&h).unwrap()).unwrap();
                assert_eq!(g.has_edge(&v, &h), cabs(ov) <= 1e-9);
            }
        }
        // every hwp-basis vector has non-zero overlap with every |i⟩
        assert_eq!(g.edges.len(), 6);
    }

    #[test]
    fn coarse_grain_examples() {
        let r3 = 1.0 / 3f64.sqrt();
        let f = fixtures::f_ket();
        let mut elems: Vec<(String, Payload)> = fixtures::da_merged_povm().elements()[..3]
            .iter()
            .map(|e| (e.label.clone(), e.payload.clone()))
            .collect();
        for i in 1..=3 {
            elems.push((format!("A,{i}"), Payload::Vector(f.scale(c(r3)))));
        }
        let six = Povm::new(3, elems).unwrap();
        let merged = six.coarse_grain(&["A,1", "A,2", "A,3"], "A").unwrap();
        assert_eq!(merged.len(), 4);
        let a = merged.vector("A").unwrap();
        assert!((a.norm_sqr() - 1.0).abs() <= T);
        assert!(a.max_abs_diff(&f.canonical_phase()).unwrap() <= T);

        let all = basis_povm(3).coarse_grain(&["1", "2", "3"], "all").unwrap();
        match &all.element("all").unwrap().payload {
            Payload::Operator(op) => {
                assert!(op.max_abs_diff(&Operator::identity(Space::System(3))).unwrap() <= T)
            }
            _ => panic!("identity is not rank one"),
        }

        let p = fixtures::da_merged_povm();
        let d12 = p.coarse_grain(&["D,1", "D,2"], "D12").unwrap();
        match &d12.element("D12").unwrap().payload {
            Payload::Operator(op) => {
                assert!((op.trace().re - 4.0 / 3.0).abs() <= T);
                assert_eq!(eigh(op).unwrap().rank(1e-9), 2);
            }
            _ => panic!("expected rank two"),
        }
        assert!(d12.completeness_check() <= T);
        let psi = uniform();
        for l in ["D,3", "A"] {
            assert_eq!(d12.probability(&psi, l).unwrap(), p.probability(&psi, l).unwrap());
        }
        assert!(matches!(
            p.coarse_grain(&["D,1", "x"], "y"),
            Err(Error::UnknownLabel(_))
        ));
    }

    #[test]
    fn selby_examples() {
        let single = selby_mixture(
            &[NamedBasis::new(
                "z",
                (0..2).map(|i| Ket::basis(Space::System(2), i).unwrap()).collect(),
            )],
            &[1.0],
            1e-9,
        )
        .unwrap();
        assert_eq!(single.completeness_check(), 0.0);

        let h = core::f64::consts::FRAC_1_SQRT_2;
        let z = |re, im| num_complex::Complex64::new(re, im);
        let mk = |a: [num_complex::Complex64; 2]| Ket::new(Space::System(2), a.to_vec()).unwrap();
        let bases = [
            NamedBasis::new(
                "Z",
                vec![mk([z(1.0, 0.0), z(0.0, 0.0)]), mk([z(0.0, 0.0), z(1.0, 0.0)])],
            ),
            NamedBasis::new("X", vec![mk([z(h, 0.0), z(h, 0.0)]), mk([z(h, 0.0), z(-h, 0.0)])]),
            NamedBasis::new("Y", vec![mk([z(h, 0.0), z(0.0, h)]), mk([z(h, 0.0), z(0.0, -h)])]),
        ];
        let w = [1.0 / 3.0; 3];
        let p = selby_mixture(&bases, &w, 1e-9).unwrap();
        assert_eq!(p.len(), 6);
        assert!(p.completeness_check() <= T);
        for l in p.labels() {
            assert!((p.context_selection_probability(l).unwrap() - 1.0 / 3.0).abs() <= T);
        }
        assert!(matches!(
            selby_mixture(&bases, &[0.5, 0.5, 0.5], 1e-9),
            Err(Error::InvalidWeights(_))
        ));
        assert!(matches!(
            selby_mixture(&bases, &[0.5, 0.5], 1e-9),
            Err(Error::InvalidWeights(_))
        ));
    }

    #[test]
    fn validation() {
        assert!(matches!(
            Povm::from_vectors(2, vec![("a", fixtures::sys2(&[1.0, 1.0]))]),
            Err(Error::WeightOutOfRange { .. })
        ));
        assert!(matches!(
            Povm::from_vectors(
                2,
                vec![("a", fixtures::sys2(&[1.0, 0.0])), ("a", fixtures::sys2(&[0.0, 1.0]))]
            ),
            Err(Error::DuplicateLabel(_))
        ));
        let neg = Operator::identity(Space::System(2)).scale(c(-0.5));
        assert!(matches!(
            Povm::new(2, vec![("n".into(), Payload::Operator(neg))]),
            Err(Error::NotPositive { .. })
        ));
        assert!(matches!(
            State::pure(fixtures::sys2(&[1.0, 1.0]), 1e-9),
            Err(Error::NotNormalised { .. })
        ));
        assert!(matches!(
            DensityMatrix::new(Operator::identity(Space::System(2)), 1e-9),
            Err(Error::BadTrace { .. })
        ));
    }
}
