//! Phase-covariant cloning attack on the signal qubit, and the Holevo
//! quantities bounding Eve's information with and without the side channel.
//!
//! Subsystems are ordered Bob ⊗ Eve ⊗ Eve′ throughout; a three-qubit basis
//! index is `4·b + 2·e + e′`.

use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::alphabet::{signal_state, Basis, Bit};
use crate::error::{Error, Result};
use crate::qmath::{expectation, partial_trace, vn_entropy, ComplexMatrix, DensityMatrix, StateVector};
use crate::sidechannel::SideChannelStates;

const DIMS: [usize; 3] = [2, 2, 2];

/// Cloning angle η in `[0, π/2]`: 0 leaves the signal untouched, π/2 hands
/// Eve a perfect copy.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ClonerSetting {
    eta: f64,
}

impl ClonerSetting {
    pub const IDLE: ClonerSetting = ClonerSetting { eta: 0.0 };

    pub fn new(eta: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&eta) {
            return Err(Error::domain("eta", eta, "cloning angle must lie in [0, pi/2]"));
        }
        Ok(Self { eta })
    }

    /// Setting whose induced QBER `(1 - cos η)/2` equals `qber`.
    pub fn from_target_qber(qber: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&qber) {
            return Err(Error::domain("target_qber", qber, "must lie in [0, 0.5]"));
        }
        Self::new((1.0 - 2.0 * qber).acos().min(FRAC_PI_2))
    }

    pub fn eta(self) -> f64 {
        self.eta
    }
}

/// Closed-form QBER of the cloner, `(1 - cos η)/2`.
pub fn qber_closed_form(setting: ClonerSetting) -> f64 {
    (1.0 - setting.eta.cos()) / 2.0
}

/// The 8x2 isometry `|b⟩ ↦ U|b⟩|0⟩|0⟩`.
///
/// `U|0⟩|00⟩ = (|000⟩ + cos η|011⟩ + sin η|101⟩)/√2` and
/// `U|1⟩|00⟩ = (cos η|100⟩ + sin η|010⟩ + |111⟩)/√2`. By linearity this
/// reproduces the cloner's action on every equatorial input
/// `(|0⟩ ± e^{iφ}|1⟩)/√2`.
pub fn cloner_isometry(setting: ClonerSetting) -> ComplexMatrix {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let (s, c) = setting.eta.sin_cos();
    let mut u = ComplexMatrix::zeros(8, 2);
    u[(0b000, 0)] = Complex64::new(r, 0.0);
    u[(0b011, 0)] = Complex64::new(r * c, 0.0);
    u[(0b101, 0)] = Complex64::new(r * s, 0.0);
    u[(0b100, 1)] = Complex64::new(r * c, 0.0);
    u[(0b010, 1)] = Complex64::new(r * s, 0.0);
    u[(0b111, 1)] = Complex64::new(r, 0.0);
    u
}

/// Images of `|0_z⟩` and `|1_z⟩` under the cloner.
pub fn cloner_images(setting: ClonerSetting) -> [StateVector; 2] {
    let u = cloner_isometry(setting);
    [0, 1].map(|col| {
        StateVector::new((0..8).map(|row| u[(row, col)]).collect())
            .expect("cloner columns are unit vectors")
    })
}

/// Applies the cloner to a qubit, returning the B ⊗ E ⊗ E′ state.
pub fn clone_state(input: &StateVector, setting: ClonerSetting) -> Result<StateVector> {
    if input.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "cloner input must be a qubit, got dimension {}",
            input.dim()
        )));
    }
    input.apply(&cloner_isometry(setting))
}

/// Bob's error rate, obtained by cloning `|0_x⟩`, tracing out Eve and
/// projecting onto `|1_x⟩`.
pub fn bob_qber(setting: ClonerSetting) -> Result<f64> {
    let out = clone_state(&signal_state(Bit::Zero, Basis::X), setting)?;
    let bob = partial_trace(&out.projector(), &DIMS, &[0])?;
    let wrong = signal_state(Bit::One, Basis::X).outer();
    Ok(expectation(&bob, &wrong)?.clamp(0.0, 0.5))
}

/// Eve's two-qubit state after cloning the letter `(bit, basis)`.
pub fn eve_states(setting: ClonerSetting, bit: Bit, basis: Basis) -> Result<DensityMatrix> {
    let out = clone_state(&signal_state(bit, basis), setting)?;
    partial_trace(&out.projector(), &DIMS, &[1, 2])
}

/// Holevo quantity of the equiprobable ensemble `{ρ₀, ρ₁}` in bits.
pub fn holevo(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<f64> {
    if rho0.dim() != rho1.dim() {
        return Err(Error::DimensionMismatch(format!(
            "holevo: dimensions {} and {}",
            rho0.dim(),
            rho1.dim()
        )));
    }
    let avg = DensityMatrix::mixture(&[(0.5, rho0), (0.5, rho1)])?;
    let chi = vn_entropy(&avg)? - 0.5 * vn_entropy(rho0)? - 0.5 * vn_entropy(rho1)?;
    Ok(chi.max(0.0))
}

/// Holevo quantity when each of Eve's states is paired with its X-basis
/// side-channel state: `{ρ₀ ⊗ |0Δ_X⟩⟨0Δ_X|, ρ₁ ⊗ |1Δ_X⟩⟨1Δ_X|}`.
pub fn holevo_with_sidechannel(
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
    sc: &SideChannelStates,
) -> Result<f64> {
    holevo_with_sidechannel_in(rho0, rho1, sc, Basis::X)
}

/// As [`holevo_with_sidechannel`], using the side-channel states of `basis`.
pub fn holevo_with_sidechannel_in(
    rho0: &DensityMatrix,
    rho1: &DensityMatrix,
    sc: &SideChannelStates,
    basis: Basis,
) -> Result<f64> {
    let joint0 = rho0.kron(&sc.get(Bit::Zero, basis).projector());
    let joint1 = rho1.kron(&sc.get(Bit::One, basis).projector());
    holevo(&joint0, &joint1)
}

/// Which basis' letters enter the Holevo quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LeakageBasis {
    /// X-basis states only.
    #[default]
    X,
    /// Mean of the X- and Y-basis values.
    Average,
}

/// One cloner setting evaluated against one side-channel model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackResult {
    pub eta: f64,
    pub q_bob: f64,
    pub chi: f64,
    pub chi_delta: f64,
}

/// Bob's QBER plus Eve's Holevo information without and with the side
/// channel, for a given cloner and side-channel realization.
pub fn analyze(
    setting: ClonerSetting,
    sc: &SideChannelStates,
    leakage: LeakageBasis,
) -> Result<AttackResult> {
    let per_basis = |basis: Basis| -> Result<(f64, f64)> {
        let r0 = eve_states(setting, Bit::Zero, basis)?;
        let r1 = eve_states(setting, Bit::One, basis)?;
        Ok((holevo(&r0, &r1)?, holevo_with_sidechannel_in(&r0, &r1, sc, basis)?))
    };
    let (chi, chi_delta) = match leakage {
        LeakageBasis::X => per_basis(Basis::X)?,
        LeakageBasis::Average => {
            let (cx, dx) = per_basis(Basis::X)?;
            let (cy, dy) = per_basis(Basis::Y)?;
            (0.5 * (cx + cy), 0.5 * (dx + dy))
        }
    };
    // appending a tensor factor cannot lower the Holevo quantity; only
    // rounding noise may put chi_delta a hair below chi
    if chi_delta < chi - 1e-10 {
        return Err(Error::domain(
            "chi_delta",
            chi_delta,
            format!("side-channel Holevo value below the plain value {chi}"),
        ));
    }
    Ok(AttackResult {
        eta: setting.eta,
        q_bob: bob_qber(setting)?,
        chi,
        chi_delta: chi_delta.max(chi),
    })
}
