//! Asymptotic decoy-state BB84 key rates.
//!
//! The channel model: a fiber of loss `alpha` dB/km and length `L` followed
//! by a receiver of transmittance `eta_bob`, dark-count yield `Y₀` with
//! random dark-count bits (`e₀`), and an optical misalignment error `e_det`.
//! An eavesdropper's error enters as an additive term next to `e_det`.
//! Yields and errors are the exact model values (infinite decoys).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::h2_saturating;
use crate::sidechannel::Imbalance;

/// Decoy-state channel configuration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelParams {
    /// Fiber loss in dB/km.
    pub alpha: f64,
    /// Fiber length in km.
    pub length: f64,
    pub eta_bob: f64,
    pub y0: f64,
    pub e0: f64,
    pub e_det: f64,
    /// Mean photon number of signal pulses.
    pub mu: f64,
    /// Error-correction inefficiency (1 = Shannon limit).
    pub f: f64,
}

impl Default for ChannelParams {
    fn default() -> Self {
        Self {
            alpha: 0.2,
            length: 0.0,
            eta_bob: 0.1,
            y0: 1e-5,
            e0: 0.5,
            e_det: 0.01,
            mu: 0.5,
            f: 1.0,
        }
    }
}

impl ChannelParams {
    pub fn with_length(self, length: f64) -> Self {
        Self { length, ..self }
    }

    /// Checks every field; errors name the offending field as `channel.<name>`.
    pub fn validate(&self) -> Result<()> {
        let prob = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::config(format!("channel.{name}"), format!("{v} is not a probability")))
            }
        };
        prob("eta_bob", self.eta_bob)?;
        prob("y0", self.y0)?;
        prob("e0", self.e0)?;
        prob("e_det", self.e_det)?;
        if !(self.alpha >= 0.0) || !self.alpha.is_finite() {
            return Err(Error::config("channel.alpha", format!("{} must be >= 0", self.alpha)));
        }
        if !(self.length >= 0.0) || !self.length.is_finite() {
            return Err(Error::config("channel.length", format!("{} must be >= 0", self.length)));
        }
        if !(self.mu > 0.0) || !self.mu.is_finite() {
            return Err(Error::config("channel.mu", format!("{} must be > 0", self.mu)));
        }
        if !(self.f >= 1.0) || !self.f.is_finite() {
            return Err(Error::config("channel.f", format!("{} must be >= 1", self.f)));
        }
        Ok(())
    }
}

/// One evaluated point of a key-rate curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub length: f64,
    pub q_mu: f64,
    pub e_mu: f64,
    pub y1: f64,
    /// Single-photon error entering privacy amplification (`e₁′` for GLLP).
    pub e1: f64,
    /// Secret bits per pulse, floored at zero.
    pub rate: f64,
}

/// Overall transmittance `10^(-αL/10)·η_Bob`.
pub fn transmittance(p: &ChannelParams) -> f64 {
    10f64.powf(-p.alpha * p.length / 10.0) * p.eta_bob
}

/// Probability that at least one of `n` photons arrives: `1 - (1 - η)^n`.
pub fn eta_n(eta: f64, n: u32) -> f64 {
    if n == 0 {
        return 0.0;
    }
    1.0 - (1.0 - eta).powi(n as i32)
}

/// `Y_n = Y₀ + η_n`, capped at 1. The `Y₀·η_n` cross term is dropped, which
/// keeps the closed forms of `Q_μ` and `E_μ` exact.
pub fn yield_n(p: &ChannelParams, n: u32) -> f64 {
    (p.y0 + eta_n(transmittance(p), n)).min(1.0)
}

/// `1 - e^{-ημ}`, computed without cancellation at small `η`.
fn detected_fraction(p: &ChannelParams) -> f64 {
    -(-transmittance(p) * p.mu).exp_m1()
}

/// Gain `Q_μ = Y₀ + 1 - e^{-ημ}`.
pub fn gain_qmu(p: &ChannelParams) -> f64 {
    p.y0 + detected_fraction(p)
}

/// Overall QBER `E_μ = [e₀Y₀ + (e_det + q)(1 - e^{-ημ})] / Q_μ`.
pub fn qber_emu(p: &ChannelParams, q_attack: f64) -> f64 {
    let q_mu = gain_qmu(p);
    if q_mu == 0.0 {
        return p.e0;
    }
    (p.e0 * p.y0 + (p.e_det + q_attack) * detected_fraction(p)) / q_mu
}

/// Single-photon error `e₁ = [e₀Y₀ + (e_det + q)η] / Y₁`.
pub fn single_photon_error(p: &ChannelParams, q_attack: f64) -> Result<f64> {
    let eta = transmittance(p);
    let y1 = p.y0 + eta;
    if y1 <= 0.0 {
        return Err(Error::DegenerateChannel(
            "single-photon yield is zero (no dark counts and no transmission)".into(),
        ));
    }
    Ok((p.e0 * p.y0 + (p.e_det + q_attack) * eta) / y1)
}

fn check_attack(name: &'static str, q: f64) -> Result<()> {
    if (0.0..=0.5).contains(&q) {
        Ok(())
    } else {
        Err(Error::domain(name, q, "attack error must lie in [0, 0.5]"))
    }
}

fn rate_from(p: &ChannelParams, y1: f64, e1: f64, q_mu: f64, e_mu: f64) -> f64 {
    let q1 = p.mu * (-p.mu).exp() * y1;
    let raw = 0.5 * (q1 * (1.0 - h2_saturating(e1)) - p.f * q_mu * h2_saturating(e_mu));
    raw.max(0.0)
}

/// `R = ½[Q₁(1 - h₂(e₁)) - f·Q_μ·h₂(E_μ)]`, floored at zero.
///
/// `q_attack_e1` is the eavesdropping error charged to the single-photon
/// error, `q_attack_emu` the one charged to the observed QBER. Error rates
/// at or above one half count as fully random.
pub fn key_rate_decoy(p: &ChannelParams, q_attack_e1: f64, q_attack_emu: f64) -> Result<RatePoint> {
    p.validate()?;
    check_attack("q_attack_e1", q_attack_e1)?;
    check_attack("q_attack_emu", q_attack_emu)?;
    let y1 = p.y0 + transmittance(p);
    let e1 = single_photon_error(p, q_attack_e1)?;
    let q_mu = gain_qmu(p);
    let e_mu = qber_emu(p, q_attack_emu);
    Ok(RatePoint {
        length: p.length,
        q_mu,
        e_mu,
        y1,
        e1,
        rate: rate_from(p, y1, e1, q_mu, e_mu),
    })
}

/// Single-photon error inflated by the basis-dependence penalty:
///
/// `e₁′ = e₁ + 4(1-Δ′)Δ′(1-2e₁) + 4(1-2Δ′)√(Δ′(1-Δ′)e₁(1-e₁))`,
/// with `Δ′ = min(Δ/Y₁, 0.5)`, saturating at 0.5.
pub fn gllp_e1prime(e1: f64, delta: Imbalance, y1: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&e1) {
        return Err(Error::domain("e1", e1, "must lie in [0, 0.5]"));
    }
    if !(y1 > 0.0 && y1 <= 1.0) {
        return Err(Error::domain("y1", y1, "single-photon yield must lie in (0, 1]"));
    }
    let d = (delta.value() / y1).min(0.5);
    let inflated = e1
        + 4.0 * (1.0 - d) * d * (1.0 - 2.0 * e1)
        + 4.0 * (1.0 - 2.0 * d) * (d * (1.0 - d) * e1 * (1.0 - e1)).sqrt();
    Ok(inflated.clamp(0.0, 0.5))
}

/// Key rate with `e₁` replaced by [`gllp_e1prime`].
pub fn key_rate_gllp(
    p: &ChannelParams,
    delta: Imbalance,
    q_attack_e1: f64,
    q_attack_emu: f64,
) -> Result<RatePoint> {
    let base = key_rate_decoy(p, q_attack_e1, q_attack_emu)?;
    let e1 = gllp_e1prime(base.e1.min(0.5), delta, base.y1.min(1.0))?;
    Ok(RatePoint {
        e1,
        rate: rate_from(p, base.y1, e1, base.q_mu, base.e_mu),
        ..base
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::h2;

    fn defaults() -> ChannelParams {
        ChannelParams::default()
    }

    /// Poisson-weighted sums Σ P(k) Y_k and Σ P(k) Y_k e_k with the
    /// per-photon-number model, truncated at k = 50.
    fn series(p: &ChannelParams, q: f64) -> (f64, f64) {
        let eta = 10f64.powf(-p.alpha * p.length / 10.0) * p.eta_bob;
        let mut weight = (-p.mu).exp();
        let (mut gain, mut err) = (0.0, 0.0);
        for k in 0..=50u32 {
            if k > 0 {
                weight *= p.mu / k as f64;
            }
            let eta_k = 1.0 - (1.0 - eta).powi(k as i32);
            let y_k = p.y0 + eta_k;
            let e_k = (p.e0 * p.y0 + (p.e_det + q) * eta_k) / y_k;
            gain += weight * y_k;
            err += weight * y_k * e_k;
        }
        (gain, err)
    }

    #[test]
    fn transmittance_examples() {
        let p = ChannelParams { eta_bob: 1.0, ..defaults() };
        assert_eq!(transmittance(&p), 1.0);
        assert!((transmittance(&p.with_length(50.0)) - 0.1).abs() < 1e-15);
        let p = ChannelParams { eta_bob: 0.5, ..defaults() }.with_length(100.0);
        assert!((transmittance(&p) - 0.005).abs() < 1e-15);
    }

    #[test]
    fn eta_n_examples() {
        assert_eq!(eta_n(0.3, 0), 0.0);
        assert!((eta_n(0.3, 1) - 0.3).abs() < 1e-15);
        assert!((eta_n(0.1, 3) - 0.271).abs() < 1e-15);
    }

    #[test]
    fn yield_examples() {
        let p = ChannelParams { eta_bob: 1.0, ..defaults() }.with_length(50.0);
        assert_eq!(yield_n(&p, 0), 1e-5);
        assert!((yield_n(&p, 1) - 0.10001).abs() < 1e-14);
        let half = ChannelParams { eta_bob: 0.5, ..defaults() };
        assert!((yield_n(&half, 60) - 1.0).abs() < 1e-12);
        assert!(yield_n(&half, 60) <= 1.0);
    }

    #[test]
    fn gain_examples() {
        let p = ChannelParams { eta_bob: 1.0, ..defaults() };
        assert!((gain_qmu(&p) - 0.393479).abs() < 1e-6);
        let p10 = p.with_length(50.0);
        let expected = 1e-5 + 1.0 - (-0.05f64).exp();
        assert!((gain_qmu(&p10) - expected).abs() < 1e-15);
        assert!((gain_qmu(&p10) - (0.048771 + 1e-5)).abs() < 1e-6);
        let tiny = ChannelParams { mu: 1e-12, ..p };
        assert!((gain_qmu(&tiny) - 1e-5).abs() < 1e-11);
    }

    #[test]
    fn closed_forms_match_series() {
        for (len, q) in [(0.0, 0.0), (50.0, 0.0), (50.0, 0.02), (120.0, 0.1), (10.0, 0.3)] {
            let p = defaults().with_length(len);
            let (gain, err) = series(&p, q);
            assert!((gain_qmu(&p) - gain).abs() < 1e-10);
            assert!((qber_emu(&p, q) * gain_qmu(&p) - err).abs() < 1e-10);
        }
    }

    #[test]
    fn emu_limits() {
        let dark = defaults().with_length(1000.0);
        assert!((qber_emu(&dark, 0.0) - 0.5).abs() < 1e-6);
        let clean = ChannelParams { y0: 0.0, ..defaults() }.with_length(30.0);
        assert!((qber_emu(&clean, 0.0) - 0.01).abs() < 1e-15);
    }

    #[test]
    fn single_photon_error_examples() {
        let clean = ChannelParams { y0: 0.0, ..defaults() }.with_length(30.0);
        assert!((single_photon_error(&clean, 0.0).unwrap() - 0.01).abs() < 1e-15);
        assert!((single_photon_error(&clean, 0.11).unwrap() - 0.12).abs() < 1e-15);
        // defaults at 50 km: η = 0.01
        let p = defaults().with_length(50.0);
        let eta = 0.1 * 0.1;
        let want = (0.5 * 1e-5 + (0.01 + 0.02) * eta) / (1e-5 + eta);
        assert!((single_photon_error(&p, 0.02).unwrap() - want).abs() < 1e-15);
        let dead = ChannelParams { y0: 0.0, eta_bob: 0.0, ..defaults() };
        assert!(matches!(single_photon_error(&dead, 0.0), Err(Error::DegenerateChannel(_))));
    }

    #[test]
    fn rate_positive_at_short_distance() {
        assert!(key_rate_decoy(&defaults(), 0.0, 0.0).unwrap().rate > 0.0);
    }

    #[test]
    fn rate_zero_when_single_photon_error_saturates() {
        let r = key_rate_decoy(&defaults(), 0.5, 0.0).unwrap();
        assert!(r.e1 >= 0.5);
        assert_eq!(r.rate, 0.0);
    }

    #[test]
    fn rate_matches_hand_evaluation() {
        let p = defaults().with_length(40.0);
        let eta = 10f64.powf(-0.8) * 0.1;
        let y1 = 1e-5 + eta;
        let q1 = 0.5 * (-0.5f64).exp() * y1;
        let e1 = (0.5e-5 + 0.03 * eta) / y1;
        let qmu = 1e-5 + 1.0 - (-eta * 0.5).exp();
        let emu = (0.5e-5 + 0.01 * (1.0 - (-eta * 0.5).exp())) / qmu;
        let want = 0.5 * (q1 * (1.0 - h2(e1)) - qmu * h2(emu));
        let got = key_rate_decoy(&p, 0.02, 0.0).unwrap();
        assert!((got.rate - want).abs() < 1e-15);
    }

    #[test]
    fn reference_curve_shape() {
        let at = |l: f64| key_rate_decoy(&defaults().with_length(l), 0.0, 0.0).unwrap().rate;
        assert!(at(50.0) > 0.0);
        assert!(at(130.0) > 0.0);
        let mut prev = f64::INFINITY;
        for l in 0..=250 {
            let r = at(l as f64);
            assert!(r <= prev + 1e-12);
            prev = r;
        }
        assert_eq!(at(250.0), 0.0);
    }

    #[test]
    fn e1prime_examples() {
        assert_eq!(gllp_e1prime(0.03, Imbalance::ZERO, 0.01).unwrap(), 0.03);
        // Δ′ = 0.5 with e₁ = 0 gives 1, saturated to 0.5
        let d = Imbalance::new(0.25).unwrap();
        assert_eq!(gllp_e1prime(0.0, d, 0.5).unwrap(), 0.5);
        // independent evaluation of the three-term formula
        let (e1, dp) = (0.01f64, 0.01f64);
        let t1 = e1;
        let t2 = 4.0 * dp * (1.0 - dp) * (1.0 - 2.0 * e1);
        let t3 = 4.0 * (1.0 - 2.0 * dp) * (dp * (1.0 - dp) * e1 * (1.0 - e1)).sqrt();
        let got = gllp_e1prime(e1, Imbalance::new(0.001).unwrap(), 0.1).unwrap();
        assert!((got - (t1 + t2 + t3)).abs() < 1e-15);
        assert!(gllp_e1prime(0.6, d, 0.5).is_err());
        assert!(gllp_e1prime(0.1, d, 0.0).is_err());
    }

    #[test]
    fn gllp_reduces_to_decoy_without_imbalance() {
        for l in [0.0, 40.0, 120.0] {
            let p = defaults().with_length(l);
            let a = key_rate_decoy(&p, 0.01, 0.01).unwrap();
            let b = key_rate_gllp(&p, Imbalance::ZERO, 0.01, 0.01).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn gllp_is_never_above_decoy() {
        for delta in [0.0001, 0.001, 0.01] {
            let d = Imbalance::new(delta).unwrap();
            for l in 0..=200 {
                let p = defaults().with_length(l as f64);
                let a = key_rate_decoy(&p, 0.0, 0.0).unwrap().rate;
                let b = key_rate_gllp(&p, d, 0.0, 0.0).unwrap().rate;
                assert!(b <= a + 1e-12);
            }
        }
    }

    #[test]
    fn gllp_penalty_blows_up_with_loss() {
        // Δ′ = Δ/Y₁ grows as Y₁ shrinks; with Δ = 1e-3 the GLLP curve dies
        // long before the unpenalized one
        let d = Imbalance::new(0.001).unwrap();
        let zero_at = |f: &dyn Fn(f64) -> f64| (0..=300).map(f64::from).find(|&l| f(l) == 0.0);
        let plain = zero_at(&|l| key_rate_decoy(&defaults().with_length(l), 0.0, 0.0).unwrap().rate);
        let gllp = zero_at(&|l| key_rate_gllp(&defaults().with_length(l), d, 0.0, 0.0).unwrap().rate);
        assert!(gllp.unwrap() < plain.unwrap() / 2.0);
    }

    #[test]
    fn cloner_only_attack_at_critical_error_kills_key() {
        // with e_det + Q = 0.11 the privacy-amplification term cannot cover
        // error correction at f = 1
        let p = defaults();
        for l in [0.0, 20.0, 60.0] {
            let r = key_rate_decoy(&p.with_length(l), 0.10, 0.10).unwrap();
            assert_eq!(r.rate, 0.0);
        }
        assert!(key_rate_decoy(&p, 0.03, 0.03).unwrap().rate > 0.0);
    }

    #[test]
    fn validation_names_fields() {
        let bad = ChannelParams { mu: 0.0, ..defaults() };
        match bad.validate() {
            Err(Error::InvalidConfig { field, .. }) => assert_eq!(field, "channel.mu"),
            other => panic!("{other:?}"),
        }
        let bad = ChannelParams { f: 0.9, ..defaults() };
        assert!(bad.validate().is_err());
        let bad = ChannelParams { y0: 1.5, ..defaults() };
        assert!(bad.validate().is_err());
        assert!(key_rate_decoy(&defaults(), 0.7, 0.0).is_err());
    }
}
