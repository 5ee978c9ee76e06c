//! Effective error: folds the extra Holevo leakage of the side channel into
//! an inflated Bob error rate.
//!
//! The key-rate balance `1 - h₂(Q) - χ^Δ` is rewritten as
//! `1 - h₂(Q^Δ) - χ`, i.e. Eve is credited only with the plain χ while Bob
//! is charged a larger error `Q^Δ`. That `Q^Δ` can then be fed into any
//! downstream analysis that takes an observed error rate.

use crate::attack::{analyze, AttackResult, ClonerSetting, LeakageBasis};
use crate::error::{Error, Result};
use crate::qmath::{h2, inv_binary_entropy};
use crate::sidechannel::{embed_states, SideChannelGram};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveErrorResult {
    pub q_bob: f64,
    pub q_bob_delta: f64,
    /// `1 - h₂(Q) - χ^Δ`, unfloored.
    pub r_delta: f64,
    pub chi: f64,
    pub chi_delta: f64,
    /// The entropy balance had no solution and `q_bob_delta` saturated at 0.5.
    pub saturated: bool,
}

/// Solves `h₂(Q^Δ) = h₂(Q) + χ^Δ - χ` on `[0, 0.5]`.
///
/// When the right-hand side exceeds 1 there is no solution; the result
/// saturates at `Q^Δ = 0.5` and `saturated` is set.
pub fn effective_qber(q_bob: f64, chi: f64, chi_delta: f64) -> Result<EffectiveErrorResult> {
    if !(0.0..=0.5).contains(&q_bob) {
        return Err(Error::domain("q_bob", q_bob, "must lie in [0, 0.5]"));
    }
    if !(chi >= 0.0) {
        return Err(Error::domain("chi", chi, "Holevo value must be nonnegative"));
    }
    if !(chi_delta >= chi) {
        return Err(Error::domain(
            "chi_delta",
            chi_delta,
            format!("must be at least chi = {chi}; side information cannot reduce leakage"),
        ));
    }
    let h_q = h2(q_bob);
    let r_delta = 1.0 - h_q - chi_delta;
    let target = h_q + (chi_delta - chi);
    let (q_bob_delta, saturated) = if chi_delta == chi {
        (q_bob, false)
    } else if target >= 1.0 {
        (0.5, target > 1.0)
    } else {
        (inv_binary_entropy(target)?, false)
    };
    Ok(EffectiveErrorResult {
        q_bob,
        q_bob_delta: q_bob_delta.max(q_bob),
        r_delta,
        chi,
        chi_delta,
        saturated,
    })
}

/// Side channel model → side-channel states → Eve's states → Holevo values
/// and Bob's QBER → effective error, with X-basis leakage.
pub fn attack_pipeline(setting: ClonerSetting, gram: &SideChannelGram) -> Result<EffectiveErrorResult> {
    attack_pipeline_with(setting, gram, LeakageBasis::X)
}

pub fn attack_pipeline_with(
    setting: ClonerSetting,
    gram: &SideChannelGram,
    leakage: LeakageBasis,
) -> Result<EffectiveErrorResult> {
    let states = embed_states(gram)?;
    let AttackResult {
        q_bob,
        chi,
        chi_delta,
        ..
    } = analyze(setting, &states, leakage)?;
    effective_qber(q_bob, chi, chi_delta)
}
