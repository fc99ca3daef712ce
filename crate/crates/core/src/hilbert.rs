//! Finite-dimensional complex Hilbert-space primitives: unit state vectors,
//! projectors, PVMs, Born probabilities, and projective collapse.
//!
//! Projectors are stored as dense d×d complex matrices rather than as
//! generating vectors: the complement 𝟙−Π of a rank-1 projector has rank
//! d−1, and a uniform matrix representation keeps retrodiction formulas
//! branch-free. Dimensions stay tiny (d ≤ 9) throughout, so dense is exact
//! enough and nothing fancier is warranted.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol::{COMPOSITE_EPS, CONDITIONING_EPS, CONSTRUCTION_EPS};

/// Unit-norm complex vector in dimension d ≥ 2.
///
/// Construction normalizes rather than rejects non-unit input, so callers
/// may pass unnormalized amplitude lists directly.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Array1<Complex64>,
}

impl StateVector {
    /// Builds a state from raw amplitudes, scaling to unit norm.
    ///
    /// Fails with [`Error::ZeroVector`] when the norm is below 1e-15, with
    /// [`Error::NonFinite`] on NaN/Inf entries, and with
    /// [`Error::DimensionTooSmall`] for d < 2.
    pub fn normalized(raw: Vec<Complex64>) -> Result<Self> {
        if raw.len() < 2 {
            return Err(Error::DimensionTooSmall(raw.len()));
        }
        if raw.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm_sq: f64 = raw.iter().map(|a| a.norm_sqr()).sum();
        let norm = norm_sq.sqrt();
        if norm < CONDITIONING_EPS {
            return Err(Error::ZeroVector);
        }
        let amps = Array1::from(raw).mapv(|a| a / norm);
        Ok(Self { amps })
    }

    /// Builds a state from real amplitudes, scaling to unit norm.
    pub fn from_real(raw: &[f64]) -> Result<Self> {
        Self::normalized(raw.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Computational-basis state |k⟩ in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: k,
            });
        }
        let mut raw = vec![Complex64::ZERO; dim];
        raw[k] = Complex64::ONE;
        Self::normalized(raw)
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &Array1<Complex64> {
        &self.amps
    }

    /// Inner product ⟨self|other⟩ = Σ_k conj(self_k)·other_k.
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

/// Hermitian idempotent d×d complex matrix.
#[derive(Debug, Clone)]
pub struct Projector {
    matrix: Array2<Complex64>,
}

impl Projector {
    /// Validates Hermiticity and idempotency entrywise at 1e-12 and trace
    /// integrality at 1e-10, then wraps the matrix.
    pub fn new(matrix: Array2<Complex64>) -> Result<Self> {
        let (rows, cols) = matrix.dim();
        if rows != cols {
            return Err(Error::DimensionMismatch {
                expected: rows,
                found: cols,
            });
        }
        if rows < 2 {
            return Err(Error::DimensionTooSmall(rows));
        }
        if matrix.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let mut herm_residual = 0.0_f64;
        for i in 0..rows {
            for j in 0..rows {
                let r = (matrix[[i, j]] - matrix[[j, i]].conj()).norm();
                herm_residual = herm_residual.max(r);
            }
        }
        if herm_residual > CONSTRUCTION_EPS {
            return Err(Error::NotHermitian {
                residual: herm_residual,
            });
        }
        let square = matrix.dot(&matrix);
        let idem_residual = max_abs_diff(&square, &matrix);
        if idem_residual > CONSTRUCTION_EPS {
            return Err(Error::NotIdempotent {
                residual: idem_residual,
            });
        }
        let trace: Complex64 = (0..rows).map(|i| matrix[[i, i]]).sum();
        let tr = trace.re;
        if (tr - tr.round()).abs() > COMPOSITE_EPS || tr.round() < 0.0 || tr.round() > rows as f64 {
            return Err(Error::InvalidTrace { trace: tr });
        }
        Ok(Self { matrix })
    }

    /// Rank-1 projector |v⟩⟨v| from a unit state: matrix_{jk} = v_j·conj(v_k).
    pub fn rank1(v: &StateVector) -> Self {
        let d = v.dim();
        let amps = v.amplitudes();
        let matrix = Array2::from_shape_fn((d, d), |(j, k)| amps[j] * amps[k].conj());
        Self { matrix }
    }

    /// The identity, a valid projector of trace d.
    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: Array2::eye(dim),
        }
    }

    /// Complement 𝟙−Π. Involutive: `p.complement().complement()` equals `p`.
    pub fn complement(&self) -> Self {
        let matrix = Array2::eye(self.dim()) - &self.matrix;
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<Complex64> {
        &self.matrix
    }

    /// Trace, real by Hermiticity.
    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.matrix[[i, i]].re).sum()
    }

    /// Real part of tr(self·other); vanishes iff the two projectors are
    /// orthogonal (exclusive outcomes).
    pub fn product_trace(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let prod = self.matrix.dot(&other.matrix);
        Ok((0..self.dim()).map(|i| prod[[i, i]].re).sum())
    }

    /// Applies the projector to a state, returning the raw (unnormalized)
    /// image Π|s⟩.
    pub fn apply(&self, s: &StateVector) -> Result<Array1<Complex64>> {
        if self.dim() != s.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: s.dim(),
            });
        }
        Ok(self.matrix.dot(s.amplitudes()))
    }

    /// Born probability ⟨s|Π|s⟩, clamped to [0, 1].
    pub fn born_probability(&self, s: &StateVector) -> Result<f64> {
        let image = self.apply(s)?;
        let value: Complex64 = s
            .amplitudes()
            .iter()
            .zip(image.iter())
            .map(|(a, b)| a.conj() * b)
            .sum();
        if value.im.abs() > CONSTRUCTION_EPS {
            return Err(Error::Internal(format!(
                "Born probability has imaginary part {:e}",
                value.im
            )));
        }
        Ok(value.re.clamp(0.0, 1.0))
    }

    /// Projective collapse: normalize(Π|s⟩).
    ///
    /// Fails with [`Error::ZeroVector`] when the branch probability is below
    /// 1e-15, i.e. the outcome is impossible from `s`.
    pub fn collapse(&self, s: &StateVector) -> Result<StateVector> {
        if self.born_probability(s)? < CONDITIONING_EPS {
            return Err(Error::ZeroVector);
        }
        StateVector::normalized(self.apply(s)?.to_vec())
    }
}

/// Projection-valued measure: mutually orthogonal projectors resolving the
/// identity.
#[derive(Debug, Clone)]
pub struct Pvm {
    elements: Vec<Projector>,
}

impl Pvm {
    /// Validates pairwise orthogonality and completeness at 1e-10.
    pub fn new(elements: Vec<Projector>) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(Error::EmptyPvm);
        };
        let dim = first.dim();
        for p in &elements {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
        }
        for i in 0..elements.len() {
            for j in (i + 1)..elements.len() {
                let prod = elements[i].matrix().dot(elements[j].matrix());
                let residual = prod.iter().map(|a| a.norm()).fold(0.0_f64, f64::max);
                if residual > COMPOSITE_EPS {
                    return Err(Error::PvmNotOrthogonal { i, j, residual });
                }
            }
        }
        let mut sum = Array2::<Complex64>::zeros((dim, dim));
        for p in &elements {
            sum += p.matrix();
        }
        let residual = max_abs_diff(&sum, &Array2::eye(dim));
        if residual > COMPOSITE_EPS {
            return Err(Error::PvmIncomplete { residual });
        }
        Ok(Self { elements })
    }

    /// The two-outcome measurement {Π, 𝟙−Π}.
    pub fn dichotomic(p: &Projector) -> Self {
        Self {
            elements: vec![p.clone(), p.complement()],
        }
    }

    pub fn elements(&self) -> &[Projector] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements[0].dim()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

fn max_abs_diff(a: &Array2<Complex64>, b: &Array2<Complex64>) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0_f64, f64::max)
}
