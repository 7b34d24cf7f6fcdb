//! Fixed positions shared by the benchmarks.

use nsim_core::preset::{build_preset, PresetName};
use nsim_core::Position;

pub fn preset(name: PresetName) -> Position {
    build_preset(name).expect("benchmark presets are in range")
}

pub fn empty(n: usize) -> Position {
    Position::empty(n).expect("size in range")
}
