//! Scenario configuration.
//!
//! Configs are flat `key = value` files with dotted section names (a subset
//! of TOML). Every key is optional and falls back to the default channel:
//!
//! ```text
//! channel.alpha = 0.2        # dB/km
//! channel.eta_bob = 0.1
//! channel.y0 = 1e-5
//! channel.e0 = 0.5
//! channel.e_det = 0.01
//! channel.mu = 0.5
//! channel.f = 1.0
//!
//! cloner.eta = 0.3           # radians, or "optimal"
//! cloner.target_qber = 0.03  # with "optimal": pick η giving this QBER
//!
//! sidechannel.overlap = 0.98 # exactly one of overlap / delta / gram / visibility
//! sidechannel.leakage = "x"  # or "average"
//!
//! method = "both"            # efer | gllp | both
//! decoy.conservative_emu = false
//! sweep.start = 0
//! sweep.stop = 200
//! sweep.step = 1
//! output = "rates.csv"
//! ```
//!
//! A full Gram matrix is given as 16 row-major `[re, im]` pairs:
//! `sidechannel.gram = [[1, 0], [0.9, 0], ...]`. A visibility model is
//! `sidechannel.visibility = 0.45` with optional `sidechannel.visibility_mu`
//! (defaults to `channel.mu`).

use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Deserialize;

use crate::attack::{analyze, ClonerSetting, LeakageBasis};
use crate::decoy::ChannelParams;
use crate::error::{Error, Result};
use crate::sidechannel::{
    embed_states, imbalance_from_gram, imbalance_from_visibility, imbalance_uniform, Imbalance,
    SideChannelGram,
};

/// Grid size used when the cloner angle is chosen by maximizing leakage.
const LEAKAGE_SCAN_POINTS: usize = 91;

/// Which key-rate bounds a sweep computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    EffectiveError,
    Gllp,
    #[default]
    Both,
}

impl Method {
    pub fn wants_effective_error(self) -> bool {
        matches!(self, Method::EffectiveError | Method::Both)
    }

    pub fn wants_gllp(self) -> bool {
        matches!(self, Method::Gllp | Method::Both)
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "efer" | "effective-error" => Ok(Method::EffectiveError),
            "gllp" => Ok(Method::Gllp),
            "both" => Ok(Method::Both),
            other => Err(Error::config("method", format!("unknown method `{other}` (efer, gllp, both)"))),
        }
    }
}

/// How the cloning angle is picked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClonerChoice {
    Fixed(ClonerSetting),
    /// η with `(1 - cos η)/2` equal to the given QBER.
    TargetQber(f64),
    /// η on a grid over `[0, π/2]` maximizing the excess leakage `χ^Δ - χ`.
    MaxLeakage,
}

impl ClonerChoice {
    pub fn resolve(&self, gram: &SideChannelGram, leakage: LeakageBasis) -> Result<ClonerSetting> {
        match *self {
            ClonerChoice::Fixed(s) => Ok(s),
            ClonerChoice::TargetQber(q) => ClonerSetting::from_target_qber(q),
            ClonerChoice::MaxLeakage => {
                let states = embed_states(gram)?;
                let mut best = (ClonerSetting::IDLE, f64::NEG_INFINITY);
                for k in 0..LEAKAGE_SCAN_POINTS {
                    let eta = FRAC_PI_2 * k as f64 / (LEAKAGE_SCAN_POINTS - 1) as f64;
                    let setting = ClonerSetting::new(eta)?;
                    let r = analyze(setting, &states, leakage)?;
                    if r.chi_delta - r.chi > best.1 {
                        best = (setting, r.chi_delta - r.chi);
                    }
                }
                Ok(best.0)
            }
        }
    }
}

/// Side-channel description as given in a config.
#[derive(Debug, Clone, PartialEq)]
pub enum SideChannelModel {
    /// All six pairwise overlaps equal `S`.
    Uniform(f64),
    /// Uniform overlap chosen so that `(1 - S)/2 = Δ`.
    Imbalance(Imbalance),
    Gram(SideChannelGram),
    /// HOM visibility of weak coherent pulses; Δ from the visibility bound,
    /// realized as a uniform overlap.
    Visibility { v: f64, mu: f64 },
}

impl SideChannelModel {
    /// Gram matrix for the attack and Δ for the GLLP bound.
    pub fn resolve(&self) -> Result<(SideChannelGram, Imbalance)> {
        match self {
            SideChannelModel::Uniform(s) => Ok((SideChannelGram::uniform(*s)?, imbalance_uniform(*s)?)),
            SideChannelModel::Imbalance(d) => Ok((SideChannelGram::uniform(d.uniform_overlap())?, *d)),
            SideChannelModel::Gram(g) => Ok((g.clone(), imbalance_from_gram(g))),
            SideChannelModel::Visibility { v, mu } => {
                let d = imbalance_from_visibility(*v, *mu)?;
                Ok((SideChannelGram::uniform(d.uniform_overlap())?, d))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Default for SweepRange {
    fn default() -> Self {
        Self {
            start: 0.0,
            stop: 200.0,
            step: 1.0,
        }
    }
}

impl SweepRange {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0) || !self.step.is_finite() {
            return Err(Error::config("sweep.step", format!("{} must be > 0", self.step)));
        }
        if !(self.start >= 0.0) || !self.start.is_finite() {
            return Err(Error::config("sweep.start", format!("{} must be >= 0", self.start)));
        }
        if !(self.start <= self.stop) || !self.stop.is_finite() {
            return Err(Error::config(
                "sweep.stop",
                format!("{} must be >= sweep.start = {}", self.stop, self.start),
            ));
        }
        Ok(())
    }

    /// Lengths `start, start + step, ...` up to `stop` inclusive.
    pub fn lengths(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..n).map(|i| self.start + i as f64 * self.step).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub channel: ChannelParams,
    pub cloner: ClonerChoice,
    pub sidechannel: SideChannelModel,
    pub leakage: LeakageBasis,
    pub method: Method,
    pub sweep: SweepRange,
    /// Charge the effective error to the observed QBER as well.
    pub conservative_emu: bool,
    pub output: Option<PathBuf>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            channel: ChannelParams::default(),
            cloner: ClonerChoice::Fixed(ClonerSetting::IDLE),
            sidechannel: SideChannelModel::Uniform(1.0),
            leakage: LeakageBasis::X,
            method: Method::Both,
            sweep: SweepRange::default(),
            conservative_emu: false,
            output: None,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        self.channel.validate()?;
        self.sweep.validate()
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawConfig =
            toml::from_str(text).map_err(|e| Error::config(e_field(&e), e.message().to_string()))?;
        raw.into_config()
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

fn e_field(e: &toml::de::Error) -> String {
    // toml reports the key path inside the message; keep a stable field tag
    match e.span() {
        Some(span) => format!("config (bytes {}..{})", span.start, span.end),
        None => "config".to_string(),
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    channel: ChannelParams,
    #[serde(default)]
    cloner: RawCloner,
    #[serde(default)]
    sidechannel: RawSideChannel,
    method: Option<String>,
    #[serde(default)]
    decoy: RawDecoy,
    #[serde(default)]
    sweep: RawSweep,
    output: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCloner {
    eta: Option<EtaValue>,
    target_qber: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum EtaValue {
    Radians(f64),
    Named(String),
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSideChannel {
    overlap: Option<f64>,
    delta: Option<f64>,
    gram: Option<Vec<[f64; 2]>>,
    visibility: Option<f64>,
    visibility_mu: Option<f64>,
    leakage: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDecoy {
    #[serde(default)]
    conservative_emu: bool,
}

#[derive(Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RawSweep {
    start: f64,
    stop: f64,
    step: f64,
}

impl Default for RawSweep {
    fn default() -> Self {
        let d = SweepRange::default();
        Self {
            start: d.start,
            stop: d.stop,
            step: d.step,
        }
    }
}

fn tag(field: &'static str) -> impl Fn(Error) -> Error {
    move |e| match e {
        e @ Error::InvalidConfig { .. } => e,
        other => Error::config(field, other.to_string()),
    }
}

impl RawConfig {
    fn into_config(self) -> Result<ScenarioConfig> {
        let channel = self.channel;
        channel.validate()?;

        let cloner = match (self.cloner.eta, self.cloner.target_qber) {
            (None, None) => ClonerChoice::Fixed(ClonerSetting::IDLE),
            (Some(EtaValue::Radians(eta)), None) => {
                ClonerChoice::Fixed(ClonerSetting::new(eta).map_err(tag("cloner.eta"))?)
            }
            (Some(EtaValue::Radians(_)), Some(_)) => {
                return Err(Error::config(
                    "cloner.target_qber",
                    "a target QBER requires cloner.eta = \"optimal\"",
                ))
            }
            (Some(EtaValue::Named(name)), target) if name == "optimal" => match target {
                Some(q) => {
                    ClonerSetting::from_target_qber(q).map_err(tag("cloner.target_qber"))?;
                    ClonerChoice::TargetQber(q)
                }
                None => ClonerChoice::MaxLeakage,
            },
            (None, Some(q)) => {
                ClonerSetting::from_target_qber(q).map_err(tag("cloner.target_qber"))?;
                ClonerChoice::TargetQber(q)
            }
            (Some(EtaValue::Named(name)), _) => {
                return Err(Error::config(
                    "cloner.eta",
                    format!("expected radians or \"optimal\", got \"{name}\""),
                ))
            }
        };

        let sc = self.sidechannel;
        let given = [
            sc.overlap.is_some(),
            sc.delta.is_some(),
            sc.gram.is_some(),
            sc.visibility.is_some(),
        ]
        .iter()
        .filter(|&&b| b)
        .count();
        if given > 1 {
            return Err(Error::config(
                "sidechannel",
                "give only one of overlap, delta, gram, visibility",
            ));
        }
        if sc.visibility_mu.is_some() && sc.visibility.is_none() {
            return Err(Error::config(
                "sidechannel.visibility_mu",
                "only meaningful together with sidechannel.visibility",
            ));
        }
        let sidechannel = if let Some(s) = sc.overlap {
            SideChannelGram::uniform(s).map_err(tag("sidechannel.overlap"))?;
            SideChannelModel::Uniform(s)
        } else if let Some(d) = sc.delta {
            SideChannelModel::Imbalance(Imbalance::new(d).map_err(tag("sidechannel.delta"))?)
        } else if let Some(pairs) = sc.gram {
            let pairs: Vec<(f64, f64)> = pairs.into_iter().map(|[re, im]| (re, im)).collect();
            SideChannelModel::Gram(SideChannelGram::from_pairs(&pairs).map_err(tag("sidechannel.gram"))?)
        } else if let Some(v) = sc.visibility {
            let mu = sc.visibility_mu.unwrap_or(channel.mu);
            imbalance_from_visibility(v, mu).map_err(tag("sidechannel.visibility"))?;
            SideChannelModel::Visibility { v, mu }
        } else {
            SideChannelModel::Uniform(1.0)
        };

        let leakage = match sc.leakage.as_deref() {
            None | Some("x") | Some("X") => LeakageBasis::X,
            Some("average") => LeakageBasis::Average,
            Some(other) => {
                return Err(Error::config(
                    "sidechannel.leakage",
                    format!("unknown value `{other}` (x, average)"),
                ))
            }
        };

        let method = match self.method {
            Some(m) => m.parse()?,
            None => Method::Both,
        };

        let sweep = SweepRange {
            start: self.sweep.start,
            stop: self.sweep.stop,
            step: self.sweep.step,
        };
        sweep.validate()?;

        Ok(ScenarioConfig {
            channel,
            cloner,
            sidechannel,
            leakage,
            method,
            sweep,
            conservative_emu: self.decoy.conservative_emu,
            output: self.output,
        })
    }
}
