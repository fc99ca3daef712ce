//! Odd n-cycle contextuality machinery: exclusivity graphs, the standard
//! five-test construction and its n-cycle generalization in d = 3, the K
//! functional, exclusivity evaluation, and the noncontextual bound.
//!
//! The physical content of a projector family lives entirely in its Gram
//! matrix, so Gram equality (not entrywise vector equality) is the
//! correctness criterion used by the tests here.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{Projector, StateVector};
use crate::tol::{COMPOSITE_EPS, PARADOX_GUARD};

/// The cycle graph on n vertices, n odd and at least 5, with edges
/// (i, i⊕1 mod n). Vertices are tests; an edge marks exclusivity.
#[derive(Debug, Clone, Copy)]
pub struct CycleGraph {
    n: usize,
}

impl CycleGraph {
    pub fn new(n: usize) -> Result<Self> {
        if n < 5 || n.is_multiple_of(2) {
            return Err(Error::InvalidN(n));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).map(move |i| (i, (i + 1) % self.n))
    }
}

/// A concrete realization of an n-cycle: rank-1 projectors in d = 3 with
/// tr(Π_i·Π_{i⊕1}) = 0 on every edge.
#[derive(Debug, Clone)]
pub struct CycleInstance {
    graph: CycleGraph,
    vectors: Vec<StateVector>,
    projectors: Vec<Projector>,
}

impl CycleInstance {
    /// Builds the instance from (already normalized) generating vectors,
    /// checking cyclic orthogonality at 1e-10.
    pub fn new(vectors: Vec<StateVector>) -> Result<Self> {
        let graph = CycleGraph::new(vectors.len())?;
        for v in &vectors {
            if v.dim() != 3 {
                return Err(Error::DimensionMismatch {
                    expected: 3,
                    found: v.dim(),
                });
            }
        }
        let projectors: Vec<Projector> = vectors.iter().map(Projector::rank1).collect();
        for (i, j) in graph.edges() {
            let trace = projectors[i].product_trace(&projectors[j])?;
            if trace.abs() > COMPOSITE_EPS {
                return Err(Error::NotExclusive { trace });
            }
        }
        Ok(Self {
            graph,
            vectors,
            projectors,
        })
    }

    pub fn graph(&self) -> &CycleGraph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n
    }

    pub fn vectors(&self) -> &[StateVector] {
        &self.vectors
    }

    pub fn projectors(&self) -> &[Projector] {
        &self.projectors
    }

    /// Gram matrix ⟨v_i|v_j⟩ of the generating vectors; invariant under any
    /// global unitary, hence the right object for equivalence checks.
    pub fn gram_matrix(&self) -> Array2<Complex64> {
        let n = self.n();
        Array2::from_shape_fn((n, n), |(i, j)| {
            self.vectors[i]
                .inner(&self.vectors[j])
                .expect("equal dimensions by construction")
        })
    }
}

/// The standard five-test construction in d = 3.
///
/// Generating vectors, before normalization:
///
/// ```text
/// v_j = (cos(4πj/5), -sin(4πj/5), sqrt(cos(π/5)))      j = 0..4
/// ```
///
/// Consecutive planar parts differ by 4π/5, so
/// ⟨v_j|v_{j⊕1}⟩ = cos(4π/5) + cos(π/5) = 0: the cycle edges are exactly
/// the orthogonal pairs. Vectors are normalized before projector
/// construction (the norm² of each raw vector is 1 + cos(π/5)).
pub fn kcbs_projectors() -> CycleInstance {
    let z = (std::f64::consts::PI / 5.0).cos().sqrt();
    let vectors = (0..5)
        .map(|j| {
            let angle = 4.0 * std::f64::consts::PI * j as f64 / 5.0;
            StateVector::from_real(&[angle.cos(), -angle.sin(), z])
                .expect("constant construction is well-formed")
        })
        .collect();
    CycleInstance::new(vectors).expect("cyclic orthogonality holds by construction")
}

/// The symmetric-cone n-cycle family in d = 3, for odd n in 5..=15:
///
/// ```text
/// v_j ∝ (cos(jπ(n−1)/n), sin(jπ(n−1)/n), sqrt(cos(π/n)))      j = 0..n−1
/// ```
///
/// Adjacent planar angles differ by π(n−1)/n, and
/// cos(π(n−1)/n) + cos(π/n) = 0 gives cyclic orthogonality. For n = 5 the
/// instance is unitarily equivalent to [`kcbs_projectors`] (equal Gram
/// matrices; the generating vectors differ by a reflection).
pub fn ncycle_projectors(n: usize) -> Result<CycleInstance> {
    if n.is_multiple_of(2) || !(5..=15).contains(&n) {
        return Err(Error::InvalidN(n));
    }
    let z = (std::f64::consts::PI / n as f64).cos().sqrt();
    let step = std::f64::consts::PI * (n as f64 - 1.0) / n as f64;
    let vectors = (0..n)
        .map(|j| {
            let angle = j as f64 * step;
            StateVector::from_real(&[angle.cos(), angle.sin(), z])
        })
        .collect::<Result<_>>()?;
    CycleInstance::new(vectors)
}

/// The K functional: the plain sum of the n conditioned probabilities.
///
/// Exclusivity is deliberately not checked here; a K above the
/// noncontextual bound is only meaningful once [`exclusivity_ok`] holds,
/// and callers must check that separately.
pub fn k_value(zetas: &[f64]) -> Result<f64> {
    for &z in zetas {
        if !z.is_finite() || !(0.0..=1.0).contains(&z) {
            return Err(Error::OutOfRange(z));
        }
    }
    Ok(zetas.iter().sum())
}

/// Evaluates every edge constraint ζ_i + ζ_{i⊕1} ≤ 1 (+1e-12 guard).
///
/// Returns the overall verdict together with all n edge sums for
/// diagnostics.
pub fn exclusivity_ok(zetas: &[f64], g: &CycleGraph) -> Result<(bool, Vec<f64>)> {
    if zetas.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            found: zetas.len(),
        });
    }
    let sums: Vec<f64> = g.edges().map(|(i, j)| zetas[i] + zetas[j]).collect();
    let ok = sums.iter().all(|&s| s <= 1.0 + PARADOX_GUARD);
    Ok((ok, sums))
}

/// Noncontextual bound of the odd n-cycle: ⌊n/2⌋, the maximum weight of an
/// independent set of the cycle.
pub fn noncontextual_bound(n: usize) -> Result<f64> {
    if n < 5 || n.is_multiple_of(2) {
        return Err(Error::InvalidN(n));
    }
    Ok((n / 2) as f64)
}
