//! The three compilations of `R_ZZ(γ)` into native gates.
//!
//! A [`Decomposition`] is an ordered gate list, first-applied gate first. Each
//! native two-qubit gate carries an error slot: a position right after the
//! gate where a coherent `CP(angle)` over-rotation is inserted and where the
//! depolarizing channel acts. The slots are metadata, so one decomposition
//! serves the noiseless, coherent, depolarizing and combined cases.

use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_2;
use core::fmt;
use core::str::FromStr;

use crate::channel::CoherentErrorDraw;
use crate::gates::{cp, cz, embed, hadamard, iswap, r_z, r_zz, Qubit};
use crate::linalg::Mat4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DecompositionKind {
    /// One parametric controlled-phase gate.
    Cp,
    /// Two fixed controlled-Z gates.
    Cz,
    /// Two iSWAP gates.
    ISwap,
}

impl DecompositionKind {
    pub const ALL: [DecompositionKind; 3] = [DecompositionKind::Cp, DecompositionKind::Cz, DecompositionKind::ISwap];

    pub fn name(self) -> &'static str {
        match self {
            DecompositionKind::Cp => "cp",
            DecompositionKind::Cz => "cz",
            DecompositionKind::ISwap => "iswap",
        }
    }

    /// Number of native two-qubit gates, which is also the number of error
    /// slots and of depolarizing events per application.
    pub fn native_gate_count(self) -> usize {
        match self {
            DecompositionKind::Cp => 1,
            DecompositionKind::Cz | DecompositionKind::ISwap => 2,
        }
    }
}

impl fmt::Display for DecompositionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("unknown decomposition kind (expected cp, cz or iswap)")]
pub struct UnknownKind;

impl FromStr for DecompositionKind {
    type Err = UnknownKind;
    fn from_str(s: &str) -> Result<Self, UnknownKind> {
        match s.trim().to_ascii_lowercase().as_str() {
            "cp" => Ok(DecompositionKind::Cp),
            "cz" => Ok(DecompositionKind::Cz),
            "iswap" => Ok(DecompositionKind::ISwap),
            _ => Err(UnknownKind),
        }
    }
}

/// Which over-rotation angle of a [`CoherentErrorDraw`] feeds an error slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorAngle {
    Theta,
    Zeta,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GateName {
    Rz,
    H,
    Cp,
    Cz,
    ISwap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Support {
    One(Qubit),
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Step {
    pub gate: GateName,
    pub support: Support,
    pub unitary: Mat4,
    /// Set on native two-qubit gates only.
    pub error: Option<ErrorAngle>,
}

impl Step {
    fn single(gate: GateName, q: Qubit, m: &crate::linalg::Mat2) -> Self {
        Step { gate, support: Support::One(q), unitary: embed(m, q), error: None }
    }

    fn native(gate: GateName, unitary: Mat4, error: ErrorAngle) -> Self {
        Step { gate, support: Support::Both, unitary, error: Some(error) }
    }

    pub fn is_native(&self) -> bool {
        self.error.is_some()
    }
}

/// A unitary block followed, optionally, by one native-gate noise event.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub unitary: Mat4,
    pub noisy: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    kind: DecompositionKind,
    gamma: f64,
    steps: Vec<Step>,
}

impl Decomposition {
    pub fn build(kind: DecompositionKind, gamma: f64) -> Self {
        match kind {
            DecompositionKind::Cp => build_cp_decomposition(gamma),
            DecompositionKind::Cz => build_cz_decomposition(gamma),
            DecompositionKind::ISwap => build_iswap_decomposition(gamma),
        }
    }

    pub fn kind(&self) -> DecompositionKind {
        self.kind
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// The gate this sequence compiles, `R_ZZ(γ)`.
    pub fn target(&self) -> Mat4 {
        r_zz(self.gamma)
    }

    /// `(step index, angle)` for every error slot, in application order.
    pub fn error_slots(&self) -> Vec<(usize, ErrorAngle)> {
        self.steps.iter().enumerate().filter_map(|(i, s)| s.error.map(|a| (i, a))).collect()
    }

    pub fn native_gate_count(&self) -> usize {
        self.steps.iter().filter(|s| s.is_native()).count()
    }

    pub fn single_qubit_gate_count(&self) -> usize {
        self.steps.iter().filter(|s| matches!(s.support, Support::One(_))).count()
    }

    /// Noiseless circuit unitary.
    pub fn product(&self) -> Mat4 {
        self.steps.iter().fold(Mat4::identity(), |acc, s| s.unitary * acc)
    }

    /// Circuit unitary with `CP(angle)` inserted after every native gate.
    pub fn product_with_errors(&self, draw: &CoherentErrorDraw) -> Mat4 {
        self.segments(Some(draw)).iter().fold(Mat4::identity(), |acc, s| s.unitary * acc)
    }

    /// Splits the circuit into unitary blocks, each ending either at a native
    /// gate (plus its over-rotation) or at the end of the circuit.
    pub fn segments(&self, draw: Option<&CoherentErrorDraw>) -> Vec<Segment> {
        let mut out = Vec::with_capacity(self.kind.native_gate_count() + 1);
        let mut acc = Mat4::identity();
        let mut pending = false;
        for step in &self.steps {
            acc = step.unitary * acc;
            pending = true;
            if let Some(angle) = step.error {
                if let Some(d) = draw {
                    acc = cp(d.angle(angle)) * acc;
                }
                out.push(Segment { unitary: acc, noisy: true });
                acc = Mat4::identity();
                pending = false;
            }
        }
        if pending {
            out.push(Segment { unitary: acc, noisy: false });
        }
        out
    }
}

/// `[R_Z(γ) on q0, R_Z(γ) on q1, CP(−2γ)]`.
pub fn build_cp_decomposition(gamma: f64) -> Decomposition {
    let rz = r_z(gamma);
    Decomposition {
        kind: DecompositionKind::Cp,
        gamma,
        steps: alloc::vec![
            Step::single(GateName::Rz, Qubit::Q0, &rz),
            Step::single(GateName::Rz, Qubit::Q1, &rz),
            Step::native(GateName::Cp, cp(-2.0 * gamma), ErrorAngle::Theta),
        ],
    }
}

/// `[H, CZ, H, R_Z(γ), H, CZ, H]` with every single-qubit gate on q1.
///
/// The first CZ carries ζ and the second θ, so that the error product reads
/// `H·CZ·CP(θ)·H·R_Z(γ)·H·CZ·CP(ζ)·H` right to left.
pub fn build_cz_decomposition(gamma: f64) -> Decomposition {
    let h = hadamard();
    Decomposition {
        kind: DecompositionKind::Cz,
        gamma,
        steps: alloc::vec![
            Step::single(GateName::H, Qubit::Q1, &h),
            Step::native(GateName::Cz, cz(), ErrorAngle::Zeta),
            Step::single(GateName::H, Qubit::Q1, &h),
            Step::single(GateName::Rz, Qubit::Q1, &r_z(gamma)),
            Step::single(GateName::H, Qubit::Q1, &h),
            Step::native(GateName::Cz, cz(), ErrorAngle::Theta),
            Step::single(GateName::H, Qubit::Q1, &h),
        ],
    }
}

/// iSWAP compilation: 8 fixed single-qubit gates, one `R_Z(γ)` and two
/// iSWAPs. The product equals `R_ZZ(γ)` exactly (trivial global phase).
pub fn build_iswap_decomposition(gamma: f64) -> Decomposition {
    let h = hadamard();
    let quarter = r_z(FRAC_PI_2);
    let minus_quarter = r_z(-FRAC_PI_2);
    Decomposition {
        kind: DecompositionKind::ISwap,
        gamma,
        steps: alloc::vec![
            Step::single(GateName::H, Qubit::Q1, &h),
            Step::single(GateName::Rz, Qubit::Q0, &quarter),
            Step::single(GateName::Rz, Qubit::Q1, &minus_quarter),
            Step::native(GateName::ISwap, iswap(), ErrorAngle::Zeta),
            Step::single(GateName::H, Qubit::Q0, &h),
            Step::single(GateName::Rz, Qubit::Q0, &r_z(gamma)),
            Step::single(GateName::H, Qubit::Q0, &h),
            Step::native(GateName::ISwap, iswap(), ErrorAngle::Theta),
            Step::single(GateName::Rz, Qubit::Q0, &quarter),
            Step::single(GateName::Rz, Qubit::Q1, &minus_quarter),
            Step::single(GateName::H, Qubit::Q1, &h),
        ],
    }
}
