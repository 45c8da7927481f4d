//! Named one- and two-qubit gates.
//!
//! Basis ordering is `|00⟩, |01⟩, |10⟩, |11⟩` with qubit 0 as the first tensor
//! factor (the upper wire in a circuit diagram).

use core::f64::consts::FRAC_1_SQRT_2;

use crate::linalg::{c, kron, phase, Mat2, Mat4, ONE, ZERO};

/// Which of the two qubits a single-qubit gate acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Qubit {
    /// First tensor factor.
    Q0,
    /// Second tensor factor.
    Q1,
}

impl Qubit {
    pub fn index(self) -> usize {
        match self {
            Qubit::Q0 => 0,
            Qubit::Q1 => 1,
        }
    }
}

impl TryFrom<usize> for Qubit {
    type Error = usize;
    fn try_from(value: usize) -> Result<Self, usize> {
        match value {
            0 => Ok(Qubit::Q0),
            1 => Ok(Qubit::Q1),
            other => Err(other),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
}

pub fn pauli(p: Pauli) -> Mat2 {
    match p {
        Pauli::I => Mat2::identity(),
        Pauli::X => Mat2::from_rows_unchecked([[ZERO, ONE], [ONE, ZERO]]),
        Pauli::Y => Mat2::from_rows_unchecked([[ZERO, c(0.0, -1.0)], [c(0.0, 1.0), ZERO]]),
        Pauli::Z => Mat2::from_diagonal([ONE, -ONE]),
    }
}

pub fn hadamard() -> Mat2 {
    let h = c(FRAC_1_SQRT_2, 0.0);
    Mat2::from_rows_unchecked([[h, h], [h, -h]])
}

/// `diag(1, e^{iγ})`.
pub fn r_z(gamma: f64) -> Mat2 {
    Mat2::from_diagonal([ONE, phase(gamma)])
}

/// `diag(1, e^{iγ}, e^{iγ}, 1)`.
pub fn r_zz(gamma: f64) -> Mat4 {
    let e = phase(gamma);
    Mat4::from_diagonal([ONE, e, e, ONE])
}

/// Controlled phase, `diag(1, 1, 1, e^{iγ})`.
pub fn cp(gamma: f64) -> Mat4 {
    Mat4::from_diagonal([ONE, ONE, ONE, phase(gamma)])
}

/// `diag(1, 1, 1, −1)`. Built directly rather than as `cp(π)` so the entry is
/// exactly −1.
pub fn cz() -> Mat4 {
    Mat4::from_diagonal([ONE, ONE, ONE, -ONE])
}

/// Identity on `|00⟩, |11⟩`; `|01⟩ → i|10⟩`, `|10⟩ → i|01⟩`.
pub fn iswap() -> Mat4 {
    let i = c(0.0, 1.0);
    Mat4::from_rows_unchecked([
        [ONE, ZERO, ZERO, ZERO],
        [ZERO, ZERO, i, ZERO],
        [ZERO, i, ZERO, ZERO],
        [ZERO, ZERO, ZERO, ONE],
    ])
}

/// Lifts a single-qubit gate into the two-qubit space.
pub fn embed(g: &Mat2, q: Qubit) -> Mat4 {
    match q {
        Qubit::Q0 => kron(g, &Mat2::identity()),
        Qubit::Q1 => kron(&Mat2::identity(), g),
    }
}
