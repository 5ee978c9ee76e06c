//! Scenario files, distance sweeps, CSV output and the built-in presets
//! behind the `qkd-sidechannel` binary.

pub mod config;
pub mod output;
pub mod presets;
pub mod sweep;

pub use config::{ClonerChoice, Method, ScenarioConfig, SideChannelModel, SweepRange};
pub use output::{csv_string, emit_csv, emit_fig3_csv, read_csv, HEADER};
pub use presets::{fig3_table, run_preset, write_fig3, Preset, PresetSummary, PRESET_DELTAS};
pub use sweep::{run_sweep, scenario_attack, zero_key_distance, RateColumn, SweepRow, ZERO_RATE};
