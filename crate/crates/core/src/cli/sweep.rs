//! Distance sweeps and zero-key distances.

use crate::decoy::{key_rate_decoy, key_rate_gllp};
use crate::effective_error::{attack_pipeline_with, EffectiveErrorResult};
use crate::error::{Error, Result};

use super::config::ScenarioConfig;

/// Rates below this count as zero when locating the zero-key distance.
pub const ZERO_RATE: f64 = 1e-12;

/// One sweep point. Rates a scenario did not ask for are `None`.
///
/// `e1` and `e_mu` come from the effective-error model when it is computed
/// and from the GLLP model otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub length: f64,
    pub rate_reference: f64,
    pub rate_effective_error: Option<f64>,
    pub rate_gllp: Option<f64>,
    pub q_bob: f64,
    pub q_bob_delta: f64,
    pub chi: f64,
    pub chi_delta: f64,
    pub e1: f64,
    pub e_mu: f64,
}

/// A rate column that [`zero_key_distance`] can scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RateColumn {
    Reference,
    EffectiveError,
    Gllp,
}

impl RateColumn {
    pub const ALL: [RateColumn; 3] = [RateColumn::Reference, RateColumn::EffectiveError, RateColumn::Gllp];

    pub fn name(self) -> &'static str {
        match self {
            RateColumn::Reference => "rate_reference",
            RateColumn::EffectiveError => "rate_effective_error",
            RateColumn::Gllp => "rate_gllp",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|c| c.name() == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    pub fn value(self, row: &SweepRow) -> Option<f64> {
        match self {
            RateColumn::Reference => Some(row.rate_reference),
            RateColumn::EffectiveError => row.rate_effective_error,
            RateColumn::Gllp => row.rate_gllp,
        }
    }
}

/// The attack quantities shared by every point of a sweep.
pub fn scenario_attack(cfg: &ScenarioConfig) -> Result<(EffectiveErrorResult, crate::sidechannel::Imbalance)> {
    let (gram, delta) = cfg.sidechannel.resolve()?;
    let setting = cfg.cloner.resolve(&gram, cfg.leakage)?;
    Ok((attack_pipeline_with(setting, &gram, cfg.leakage)?, delta))
}

/// Runs the scenario over its distance range. The attack is evaluated once;
/// only the channel changes between points.
pub fn run_sweep(cfg: &ScenarioConfig) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let (attack, delta) = scenario_attack(cfg)?;
    let q_emu_efer = if cfg.conservative_emu {
        attack.q_bob_delta
    } else {
        attack.q_bob
    };
    cfg.sweep
        .lengths()
        .into_iter()
        .map(|length| {
            let p = cfg.channel.with_length(length);
            let at = |e: Error| Error::AtLength {
                length,
                source: Box::new(e),
            };
            let reference = key_rate_decoy(&p, 0.0, 0.0).map_err(at)?;
            let efer = if cfg.method.wants_effective_error() {
                Some(key_rate_decoy(&p, attack.q_bob_delta, q_emu_efer).map_err(at)?)
            } else {
                None
            };
            let gllp = if cfg.method.wants_gllp() {
                Some(key_rate_gllp(&p, delta, attack.q_bob, attack.q_bob).map_err(at)?)
            } else {
                None
            };
            let detail = efer.or(gllp).unwrap_or(reference);
            Ok(SweepRow {
                length,
                rate_reference: reference.rate,
                rate_effective_error: efer.map(|r| r.rate),
                rate_gllp: gllp.map(|r| r.rate),
                q_bob: attack.q_bob,
                q_bob_delta: attack.q_bob_delta,
                chi: attack.chi,
                chi_delta: attack.chi_delta,
                e1: detail.e1,
                e_mu: detail.e_mu,
            })
        })
        .collect()
}

/// Smallest length at which the column drops below [`ZERO_RATE`], linearly
/// interpolated between the bracketing points. `None` if the rate stays
/// positive over the whole sweep. If the first row is already zero, its
/// length is returned.
pub fn zero_key_distance(rows: &[SweepRow], column: &str) -> Result<Option<f64>> {
    let col = RateColumn::from_name(column)?;
    if rows.is_empty() {
        return Err(Error::DimensionMismatch("no sweep rows".to_string()));
    }
    let values: Vec<f64> = rows
        .iter()
        .map(|r| col.value(r).ok_or_else(|| Error::ColumnNotComputed(column.to_string())))
        .collect::<Result<_>>()?;
    let Some(i) = values.iter().position(|&v| v < ZERO_RATE) else {
        return Ok(None);
    };
    if i == 0 {
        return Ok(Some(rows[0].length));
    }
    let (l0, l1) = (rows[i - 1].length, rows[i].length);
    let (r0, r1) = (values[i - 1], values[i]);
    let t = ((r0 - ZERO_RATE) / (r0 - r1)).clamp(0.0, 1.0);
    Ok(Some(l0 + t * (l1 - l0)))
}
