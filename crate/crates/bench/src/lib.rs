//! Fixtures shared by the benchmarks.

use cmeis_core::lattice::period_lattice;
use cmeis_core::{APComplex, Lattice, Preset};

pub fn preset(id: &str) -> Preset {
    Preset::builtin(id).expect("builtin preset")
}

pub fn lattice(id: &str, prec: u32) -> Lattice {
    period_lattice(&preset(id), prec).expect("period lattice")
}

/// A generic point `0.31·ω1 + 0.27·ω2` of the fundamental cell.
pub fn cell_point(lat: &Lattice, prec: u32) -> APComplex {
    let (w1, w2) = lat.basis();
    &(&APComplex::from_f64(0.31, prec) * w1) + &(&APComplex::from_f64(0.27, prec) * w2)
}
