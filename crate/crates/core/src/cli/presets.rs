//! Built-in scenarios reproducing the standard comparison plots.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::sidechannel::{imbalance_from_visibility, Imbalance};

use super::config::{ClonerChoice, Method, ScenarioConfig, SideChannelModel};
use super::output::{emit_csv, emit_fig3_csv};
use super::sweep::{run_sweep, zero_key_distance, RateColumn};

/// Δ values swept by the distance presets.
pub const PRESET_DELTAS: [f64; 4] = [0.001, 0.005, 0.01, 0.05];

/// Cloner QBER of the attacked preset.
pub const FIG2_QBER: f64 = 0.03;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Side channel only, no cloner.
    Fig1,
    /// Side channel plus a cloner at [`FIG2_QBER`].
    Fig2,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Fig1 => "fig1",
            Preset::Fig2 => "fig2",
        }
    }

    /// One scenario per Δ in [`PRESET_DELTAS`].
    pub fn scenarios(self, method: Method) -> Result<Vec<(f64, ScenarioConfig)>> {
        let cloner = match self {
            Preset::Fig1 => ClonerChoice::Fixed(crate::attack::ClonerSetting::IDLE),
            Preset::Fig2 => ClonerChoice::TargetQber(FIG2_QBER),
        };
        PRESET_DELTAS
            .iter()
            .map(|&d| {
                Ok((
                    d,
                    ScenarioConfig {
                        cloner,
                        sidechannel: SideChannelModel::Imbalance(Imbalance::new(d)?),
                        method,
                        ..ScenarioConfig::default()
                    },
                ))
            })
            .collect()
    }
}

/// Zero-key distances of one preset scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetSummary {
    pub delta: f64,
    pub file: PathBuf,
    pub distances: Vec<(RateColumn, Option<f64>)>,
}

impl std::fmt::Display for PresetSummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "delta={}", self.delta)?;
        for (col, d) in &self.distances {
            match d {
                Some(km) => write!(f, " {}={km:.1}km", col.name())?,
                None => write!(f, " {}=beyond-sweep", col.name())?,
            }
        }
        Ok(())
    }
}

/// Writes `<dir>/<preset>_delta_<Δ>.csv` for every Δ and returns the
/// zero-key distances of the computed columns.
pub fn run_preset(preset: Preset, method: Method, dir: &Path) -> Result<Vec<PresetSummary>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    let mut summaries = Vec::new();
    for (delta, cfg) in preset.scenarios(method)? {
        let rows = run_sweep(&cfg)?;
        let file = dir.join(format!("{}_delta_{delta}.csv", preset.name()));
        let f = File::create(&file).map_err(|e| Error::Io(format!("{}: {e}", file.display())))?;
        emit_csv(&rows, BufWriter::new(f))?;
        let mut distances = Vec::new();
        for col in RateColumn::ALL {
            if col.value(&rows[0]).is_some() {
                distances.push((col, zero_key_distance(&rows, col.name())?));
            }
        }
        summaries.push(PresetSummary {
            delta,
            file,
            distances,
        });
    }
    Ok(summaries)
}

/// Δ as a function of HOM visibility over `points` evenly spaced values
/// of `V` in `[0, 0.5]`.
pub fn fig3_table(mu: f64, points: usize) -> Result<Vec<(f64, f64)>> {
    if points < 2 {
        return Err(Error::domain("points", points as f64, "need at least 2 grid points"));
    }
    (0..points)
        .map(|i| {
            let v = 0.5 * i as f64 / (points - 1) as f64;
            Ok((v, imbalance_from_visibility(v, mu)?.value()))
        })
        .collect()
}

pub fn write_fig3(mu: f64, points: usize, path: &Path) -> Result<()> {
    let table = fig3_table(mu, points)?;
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::Io(format!("{}: {e}", parent.display())))?;
    }
    let f = File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    emit_fig3_csv(&table, BufWriter::new(f))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fig3_endpoints() {
        let t = fig3_table(0.5, 101).unwrap();
        assert_eq!(t.len(), 101);
        assert_eq!(t[0].0, 0.0);
        assert_eq!(t[100].0, 0.5);
        assert!(t[100].1.abs() < 1e-12);
        for w in t.windows(2) {
            assert!(w[1].1 <= w[0].1 + 1e-15);
        }
        assert!(fig3_table(0.5, 1).is_err());
        assert!(fig3_table(0.0, 11).is_err());
    }

    #[test]
    fn preset_scenarios() {
        let s = Preset::Fig2.scenarios(Method::Both).unwrap();
        assert_eq!(s.len(), PRESET_DELTAS.len());
        assert!(s.iter().all(|(_, c)| c.cloner == ClonerChoice::TargetQber(FIG2_QBER)));
    }

    #[test]
    fn run_preset_writes_files() {
        let dir = tempfile::tempdir().unwrap();
        let sums = run_preset(Preset::Fig1, Method::Both, dir.path()).unwrap();
        assert_eq!(sums.len(), 4);
        for s in &sums {
            assert!(s.file.exists());
            assert_eq!(s.distances.len(), 3);
        }
        assert!(dir.path().join("fig1_delta_0.001.csv").exists());
        assert!(sums[0].to_string().starts_with("delta=0.001 rate_reference="));
    }
}
