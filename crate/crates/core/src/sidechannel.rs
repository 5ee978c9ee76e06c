//! Passive source side channel.
//!
//! Each of the four BB84 letters carries an extra, non-operational degree of
//! freedom in one of four generally nonorthogonal states `|iΔ_B⟩`. The model
//! is fixed entirely by their 4x4 Gram matrix. This module realizes those
//! states as vectors, and maps between overlaps, the basis-imbalance
//! parameter Δ and HOM visibility.

use num_complex::Complex64;

use crate::alphabet::{letter_index, Basis, Bit};
use crate::error::{Error, Result};
use crate::qmath::{min_eigenvalue, ComplexMatrix, DensityMatrix, StateVector, PSD_TOL, STRUCTURE_TOL};

/// Residual pivots below this are treated as exact rank deficiency.
const PIVOT_TOL: f64 = 1e-14;

/// Gram matrix `g[i][j] = ⟨i|j⟩` of the side-channel states, ordered
/// `(0Δ_X, 1Δ_X, 0Δ_Y, 1Δ_Y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SideChannelGram {
    g: ComplexMatrix,
}

impl SideChannelGram {
    pub fn new(g: ComplexMatrix) -> Result<Self> {
        if (g.rows(), g.cols()) != (4, 4) {
            return Err(Error::DimensionMismatch(format!(
                "side-channel Gram must be 4x4, got {}x{}",
                g.rows(),
                g.cols()
            )));
        }
        g.ensure_hermitian()?;
        for i in 0..4 {
            let d = g[(i, i)];
            if (d.re - 1.0).abs() > STRUCTURE_TOL || d.im.abs() > STRUCTURE_TOL {
                return Err(Error::domain(
                    "gram diagonal",
                    d.re,
                    format!("entry ({i},{i}) must be 1 for normalized states"),
                ));
            }
        }
        let min = min_eigenvalue(&g)?;
        if min < -PSD_TOL {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: min,
            });
        }
        Ok(Self { g })
    }

    /// Every pair of distinct states has the same real overlap `s`.
    pub fn uniform(s: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&s) {
            return Err(Error::domain("overlap", s, "uniform overlap must lie in [0, 1]"));
        }
        Self::new(ComplexMatrix::from_fn(4, 4, |i, j| {
            Complex64::new(if i == j { 1.0 } else { s }, 0.0)
        }))
    }

    /// Builds the Gram matrix from 16 row-major `(re, im)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        if pairs.len() != 16 {
            return Err(Error::DimensionMismatch(format!(
                "expected 16 (re, im) pairs, got {}",
                pairs.len()
            )));
        }
        Self::new(ComplexMatrix::new(
            4,
            4,
            pairs.iter().map(|&(re, im)| Complex64::new(re, im)).collect(),
        )?)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.g
    }

    /// `⟨a|b⟩` for two letters.
    pub fn overlap(&self, a: (Bit, Basis), b: (Bit, Basis)) -> Complex64 {
        self.g[(letter_index(a.0, a.1), letter_index(b.0, b.1))]
    }
}

/// Concrete 4-dimensional vectors realizing a [`SideChannelGram`].
#[derive(Debug, Clone, PartialEq)]
pub struct SideChannelStates {
    states: [StateVector; 4],
}

impl SideChannelStates {
    pub fn get(&self, bit: Bit, basis: Basis) -> &StateVector {
        &self.states[letter_index(bit, basis)]
    }

    pub fn states(&self) -> &[StateVector; 4] {
        &self.states
    }

    /// Gram matrix of the stored vectors.
    pub fn gram(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(4, 4, |i, j| self.states[i].inner(&self.states[j]))
    }
}

/// Factorizes the Gram matrix as `G = L L†` by diagonally pivoted Cholesky
/// and returns the conjugated rows of `L`, so that `⟨ψᵢ|ψⱼ⟩ = Gᵢⱼ`.
///
/// Rank-deficient Gram matrices (coincident or linearly dependent states)
/// are fine; the factorization stops once the residual is numerically zero.
pub fn embed_states(gram: &SideChannelGram) -> Result<SideChannelStates> {
    let n = 4;
    let mut residual = gram.matrix().clone();
    let mut factor = ComplexMatrix::zeros(n, n);
    let mut used = [false; 4];

    for col in 0..n {
        let (pivot, pivot_val) = (0..n)
            .filter(|&i| !used[i])
            .map(|i| (i, residual[(i, i)].re))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("pivot candidates remain");
        if pivot_val < -PSD_TOL {
            return Err(Error::NotPositiveSemidefinite {
                min_eigenvalue: pivot_val,
            });
        }
        if pivot_val <= PIVOT_TOL {
            break;
        }
        used[pivot] = true;
        let root = pivot_val.sqrt();
        for i in 0..n {
            factor[(i, col)] = if i == pivot {
                Complex64::new(root, 0.0)
            } else if used[i] {
                Complex64::new(0.0, 0.0)
            } else {
                residual[(i, pivot)] / root
            };
        }
        for i in 0..n {
            for j in 0..n {
                let update = factor[(i, col)] * factor[(j, col)].conj();
                residual[(i, j)] -= update;
            }
        }
    }

    let mut states = Vec::with_capacity(n);
    for i in 0..n {
        let amps = (0..n).map(|k| factor[(i, k)].conj()).collect();
        states.push(StateVector::normalized(amps)?);
    }
    let states: [StateVector; 4] = states.try_into().expect("four states");
    Ok(SideChannelStates { states })
}

/// Basis-imbalance parameter Δ: the probability that the GLLP quantum coin
/// reveals the basis. Always within `[0, 0.5]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Imbalance(f64);

impl Imbalance {
    pub const ZERO: Imbalance = Imbalance(0.0);

    pub fn new(delta: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&delta) {
            return Err(Error::domain("delta", delta, "imbalance must lie in [0, 0.5]"));
        }
        Ok(Self(delta))
    }

    /// Clamps a raw formula value into `[0, 0.5]`.
    pub fn clamped(raw: f64) -> Self {
        Self(raw.clamp(0.0, 0.5))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Uniform overlap `S` with `(1 - S)/2 = Δ`.
    pub fn uniform_overlap(self) -> f64 {
        1.0 - 2.0 * self.0
    }
}

/// `Δ = (4 - Re Σ_{i,j} ⟨iΔ_X|jΔ_Y⟩) / 8`.
pub fn imbalance_from_gram(gram: &SideChannelGram) -> Imbalance {
    let cross: f64 = Bit::ALL
        .iter()
        .flat_map(|&i| Bit::ALL.iter().map(move |&j| (i, j)))
        .map(|(i, j)| gram.overlap((i, Basis::X), (j, Basis::Y)).re)
        .sum();
    Imbalance::clamped((4.0 - cross) / 8.0)
}

/// `Δ = (1 - S)/2` for a uniform overlap `S`.
pub fn imbalance_uniform(s: f64) -> Result<Imbalance> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::domain("overlap", s, "uniform overlap must lie in [0, 1]"));
    }
    Ok(Imbalance::clamped((1.0 - s) / 2.0))
}

/// Hong-Ou-Mandel visibility `Tr[ρ₁ρ₂]`.
pub fn hom_visibility(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<f64> {
    rho1.matrix().ensure_same_shape(rho2.matrix(), "hom_visibility")?;
    let (a, b) = (rho1.matrix(), rho2.matrix());
    let n = rho1.dim();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    Ok(acc.re)
}

/// Upper bound on Δ from a measured HOM visibility `v` of weak coherent
/// pulses with mean photon number `mu`:
///
/// `Δ = ½(1 - cos(2 arccos((1 + x)/2) + arccos x))`, `x = e^{μ(√(2v) - 1)}`.
///
/// The bound is used with equality. The formula is only defined for
/// `v ≤ 0.5`, where `x ≤ 1`.
pub fn imbalance_from_visibility(v: f64, mu: f64) -> Result<Imbalance> {
    if !(v >= 0.0) {
        return Err(Error::domain("visibility", v, "must be nonnegative"));
    }
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::domain("mu", mu, "mean photon number must be positive"));
    }
    let x = (mu * ((2.0 * v).sqrt() - 1.0)).exp();
    if x > 1.0 {
        return Err(Error::domain(
            "visibility",
            v,
            "the visibility-to-imbalance bound is only defined for v <= 0.5 (arccos argument exceeds 1)",
        ));
    }
    let angle = 2.0 * ((1.0 + x) / 2.0).acos() + x.acos();
    Ok(Imbalance::clamped(0.5 * (1.0 - angle.cos())))
}
