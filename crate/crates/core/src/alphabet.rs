//! The four BB84 signal states on the equator of the Bloch sphere.

use std::fmt;

use num_complex::Complex64;

use crate::qmath::StateVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Bit {
    Zero,
    One,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    X,
    Y,
}

impl Bit {
    pub const ALL: [Bit; 2] = [Bit::Zero, Bit::One];

    pub fn flipped(self) -> Self {
        match self {
            Bit::Zero => Bit::One,
            Bit::One => Bit::Zero,
        }
    }

    fn sign(self) -> f64 {
        match self {
            Bit::Zero => 1.0,
            Bit::One => -1.0,
        }
    }
}

impl Basis {
    pub const ALL: [Basis; 2] = [Basis::X, Basis::Y];
}

/// Index of a letter in the side-channel ordering `(0X, 1X, 0Y, 1Y)`.
pub fn letter_index(bit: Bit, basis: Basis) -> usize {
    let b = match bit {
        Bit::Zero => 0,
        Bit::One => 1,
    };
    match basis {
        Basis::X => b,
        Basis::Y => 2 + b,
    }
}

/// `|0_x⟩ = (|0⟩+|1⟩)/√2`, `|1_x⟩ = (|0⟩-|1⟩)/√2`,
/// `|0_y⟩ = (|0⟩+i|1⟩)/√2`, `|1_y⟩ = (|0⟩-i|1⟩)/√2`.
pub fn signal_state(bit: Bit, basis: Basis) -> StateVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let phase = match basis {
        Basis::X => Complex64::new(1.0, 0.0),
        Basis::Y => Complex64::new(0.0, 1.0),
    };
    StateVector::new(vec![Complex64::new(s, 0.0), phase * (s * bit.sign())])
        .expect("signal states are normalized")
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::X => write!(f, "X"),
            Basis::Y => write!(f, "Y"),
        }
    }
}
