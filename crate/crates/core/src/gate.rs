use std::f64::consts::PI;
use std::fmt;

use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// ω = e^{i2π/3}.
pub fn omega() -> C64 {
    C64::from_polar(1.0, 2.0 * PI / 3.0)
}

/// ω^p for any integer p, reduced mod 3 first so the result is exact-ish.
pub fn omega_pow(p: i64) -> C64 {
    match p.rem_euclid(3) {
        0 => C64::new(1.0, 0.0),
        1 => omega(),
        _ => omega().conj(),
    }
}

/// A two-level subspace of a qutrit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Subspace {
    #[serde(rename = "01")]
    S01,
    #[serde(rename = "02")]
    S02,
    #[serde(rename = "12")]
    S12,
}

impl Subspace {
    pub const ALL: [Subspace; 3] = [Subspace::S01, Subspace::S02, Subspace::S12];

    pub fn levels(self) -> (usize, usize) {
        match self {
            Subspace::S01 => (0, 1),
            Subspace::S02 => (0, 2),
            Subspace::S12 => (1, 2),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Subspace::S01 => "01",
            Subspace::S02 => "02",
            Subspace::S12 => "12",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "01" | "10" => Ok(Subspace::S01),
            "02" | "20" => Ok(Subspace::S02),
            "12" | "21" => Ok(Subspace::S12),
            other => Err(Error::InvalidGate(format!("unknown subspace {other:?}"))),
        }
    }
}

/// One native qutrit gate together with the register positions it acts on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    /// X^p, p ∈ {1, 2}; X|j⟩ = |j+1 mod 3⟩.
    XPow {
        q: usize,
        p: u8,
    },
    /// Z^p, p ∈ {1, 2}; Z|j⟩ = ω^j|j⟩.
    ZPow {
        q: usize,
        p: u8,
    },
    RotZ {
        q: usize,
        sub: Subspace,
        angle: f64,
    },
    RotX {
        q: usize,
        sub: Subspace,
        angle: f64,
    },
    SigmaX {
        q: usize,
        sub: Subspace,
    },
    Hadamard {
        q: usize,
    },
    /// |c⟩|t⟩ → |c⟩|t + c⟩.
    CX {
        control: usize,
        target: usize,
    },
    /// |c⟩|t⟩ → |c⟩|t − c⟩, i.e. CX².
    CXDag {
        control: usize,
        target: usize,
    },
}

impl Gate {
    pub fn cx(control: usize, target: usize) -> Self {
        Gate::CX { control, target }
    }

    pub fn cx_dag(control: usize, target: usize) -> Self {
        Gate::CXDag { control, target }
    }

    /// CX^p with the exponent reduced mod 3; `None` for the identity.
    pub fn cx_pow(control: usize, target: usize, p: i64) -> Option<Self> {
        match p.rem_euclid(3) {
            0 => None,
            1 => Some(Gate::CX { control, target }),
            _ => Some(Gate::CXDag { control, target }),
        }
    }

    pub fn rz(q: usize, sub: Subspace, angle: f64) -> Self {
        Gate::RotZ { q, sub, angle }
    }

    pub fn rx(q: usize, sub: Subspace, angle: f64) -> Self {
        Gate::RotX { q, sub, angle }
    }

    /// Register positions touched, control first for two-qutrit gates.
    pub fn qutrits(&self) -> Vec<usize> {
        match *self {
            Gate::XPow { q, .. }
            | Gate::ZPow { q, .. }
            | Gate::RotZ { q, .. }
            | Gate::RotX { q, .. }
            | Gate::SigmaX { q, .. }
            | Gate::Hadamard { q } => vec![q],
            Gate::CX { control, target } | Gate::CXDag { control, target } => vec![control, target],
        }
    }

    pub fn is_two_qutrit(&self) -> bool {
        matches!(self, Gate::CX { .. } | Gate::CXDag { .. })
    }

    /// Single-qutrit gates diagonal in the computational basis.
    pub fn is_diagonal_single(&self) -> bool {
        matches!(self, Gate::RotZ { .. } | Gate::ZPow { .. })
    }

    /// For CX/CXDag: (control, target, exponent).
    pub fn as_cx_power(&self) -> Option<(usize, usize, i64)> {
        match *self {
            Gate::CX { control, target } => Some((control, target, 1)),
            Gate::CXDag { control, target } => Some((control, target, 2)),
            _ => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match *self {
            Gate::XPow { p: 1, .. } => "X",
            Gate::XPow { .. } => "X2",
            Gate::ZPow { p: 1, .. } => "Z",
            Gate::ZPow { .. } => "Z2",
            Gate::RotZ { .. } => "RotZ",
            Gate::RotX { .. } => "RotX",
            Gate::SigmaX { .. } => "SigmaX",
            Gate::Hadamard { .. } => "H",
            Gate::CX { .. } => "CX",
            Gate::CXDag { .. } => "CXDag",
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Gate::XPow { p, .. } | Gate::ZPow { p, .. } if p != 1 && p != 2 => {
                Err(Error::InvalidGate(format!("power {p} not in {{1,2}}")))
            }
            Gate::RotZ { angle, .. } | Gate::RotX { angle, .. } if !angle.is_finite() => {
                Err(Error::InvalidGate(format!("non-finite angle {angle}")))
            }
            Gate::CX { control, target } | Gate::CXDag { control, target } if control == target => {
                Err(Error::InvalidGate(format!("control equals target ({control})")))
            }
            _ => Ok(()),
        }
    }

    /// Gates whose product is the inverse of `self`. Hadamard has no native
    /// inverse, so it expands to H³.
    pub fn inverse(&self) -> Vec<Gate> {
        match *self {
            Gate::XPow { q, p } => vec![Gate::XPow { q, p: 3 - p }],
            Gate::ZPow { q, p } => vec![Gate::ZPow { q, p: 3 - p }],
            Gate::RotZ { q, sub, angle } => vec![Gate::RotZ { q, sub, angle: -angle }],
            Gate::RotX { q, sub, angle } => vec![Gate::RotX { q, sub, angle: -angle }],
            Gate::SigmaX { .. } => vec![*self],
            Gate::Hadamard { .. } => vec![*self; 3],
            Gate::CX { control, target } => vec![Gate::CXDag { control, target }],
            Gate::CXDag { control, target } => vec![Gate::CX { control, target }],
        }
    }

    /// Same gate with register positions passed through `f`.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Gate {
        match *self {
            Gate::XPow { q, p } => Gate::XPow { q: f(q), p },
            Gate::ZPow { q, p } => Gate::ZPow { q: f(q), p },
            Gate::RotZ { q, sub, angle } => Gate::RotZ { q: f(q), sub, angle },
            Gate::RotX { q, sub, angle } => Gate::RotX { q: f(q), sub, angle },
            Gate::SigmaX { q, sub } => Gate::SigmaX { q: f(q), sub },
            Gate::Hadamard { q } => Gate::Hadamard { q: f(q) },
            Gate::CX { control, target } => Gate::CX { control: f(control), target: f(target) },
            Gate::CXDag { control, target } => Gate::CXDag { control: f(control), target: f(target) },
        }
    }

    /// Matrix on the touched qutrits (3×3, or 9×9 with the control as the
    /// more significant digit).
    pub fn local_matrix(&self) -> Array2<C64> {
        let zero = C64::new(0.0, 0.0);
        let one = C64::new(1.0, 0.0);
        match *self {
            Gate::XPow { p, .. } => {
                let mut m = Array2::from_elem((3, 3), zero);
                for j in 0..3 {
                    m[[(j + p as usize) % 3, j]] = one;
                }
                m
            }
            Gate::ZPow { p, .. } => {
                let mut m = Array2::from_elem((3, 3), zero);
                for j in 0..3 {
                    m[[j, j]] = omega_pow(p as i64 * j as i64);
                }
                m
            }
            Gate::RotZ { sub, angle, .. } => {
                let (i, j) = sub.levels();
                let mut m = Array2::from_diag_elem(3, one);
                m[[i, i]] = C64::from_polar(1.0, -angle / 2.0);
                m[[j, j]] = C64::from_polar(1.0, angle / 2.0);
                m
            }
            Gate::RotX { sub, angle, .. } => {
                let (i, j) = sub.levels();
                let (s, c) = (angle / 2.0).sin_cos();
                let mut m = Array2::from_diag_elem(3, one);
                m[[i, i]] = C64::new(c, 0.0);
                m[[j, j]] = C64::new(c, 0.0);
                m[[i, j]] = C64::new(0.0, -s);
                m[[j, i]] = C64::new(0.0, -s);
                m
            }
            Gate::SigmaX { sub, .. } => {
                let (i, j) = sub.levels();
                let mut m = Array2::from_diag_elem(3, one);
                m[[i, i]] = zero;
                m[[j, j]] = zero;
                m[[i, j]] = one;
                m[[j, i]] = one;
                m
            }
            Gate::Hadamard { .. } => {
                let pre = C64::new(0.0, -1.0 / 3f64.sqrt());
                Array2::from_shape_fn((3, 3), |(r, c)| pre * omega_pow((r * c) as i64))
            }
            Gate::CX { .. } | Gate::CXDag { .. } => {
                let p = if matches!(self, Gate::CX { .. }) { 1 } else { 2 };
                let mut m = Array2::from_elem((9, 9), zero);
                for c in 0..3 {
                    for t in 0..3 {
                        m[[3 * c + (t + p * c) % 3, 3 * c + t]] = one;
                    }
                }
                m
            }
        }
    }

    /// Classical action on one basis trit-string, for permutation gates
    /// (X powers, SigmaX, CX, CXDag). Returns `None` for the others.
    pub fn permute_trits(&self, x: &mut [u8]) -> Option<()> {
        match *self {
            Gate::XPow { q, p } => x[q] = (x[q] + p) % 3,
            Gate::SigmaX { q, sub } => {
                let (i, j) = sub.levels();
                let v = x[q] as usize;
                if v == i {
                    x[q] = j as u8;
                } else if v == j {
                    x[q] = i as u8;
                }
            }
            Gate::CX { control, target } => x[target] = (x[target] + x[control]) % 3,
            Gate::CXDag { control, target } => x[target] = (x[target] + 2 * x[control]) % 3,
            _ => return None,
        }
        Some(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::RotZ { q, sub, angle } | Gate::RotX { q, sub, angle } => {
                write!(f, "{}({})[{:.6}]@{}", self.kind_name(), sub.label(), angle, q)
            }
            Gate::SigmaX { q, sub } => write!(f, "SigmaX({})@{}", sub.label(), q),
            Gate::CX { control, target } | Gate::CXDag { control, target } => {
                write!(f, "{}({},{})", self.kind_name(), control, target)
            }
            _ => write!(f, "{}@{}", self.kind_name(), self.qutrits()[0]),
        }
    }
}

/// Wire form of a gate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateJson {
    pub kind: String,
    pub qutrits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub subspace: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
}

impl From<&Gate> for GateJson {
    fn from(g: &Gate) -> Self {
        let (subspace, angle) = match *g {
            Gate::RotZ { sub, angle, .. } | Gate::RotX { sub, angle, .. } => {
                (Some(sub.label().to_string()), Some(angle))
            }
            Gate::SigmaX { sub, .. } => (Some(sub.label().to_string()), None),
            _ => (None, None),
        };
        GateJson { kind: g.kind_name().to_string(), qutrits: g.qutrits(), subspace, angle }
    }
}

impl TryFrom<&GateJson> for Gate {
    type Error = Error;

    fn try_from(j: &GateJson) -> Result<Gate> {
        let arity = |n: usize| -> Result<()> {
            if j.qutrits.len() == n {
                Ok(())
            } else {
                Err(Error::InvalidGate(format!("{} expects {} qutrit(s), got {}", j.kind, n, j.qutrits.len())))
            }
        };
        let sub = || -> Result<Subspace> {
            Subspace::parse(
                j.subspace.as_deref().ok_or_else(|| Error::InvalidGate(format!("{} requires a subspace", j.kind)))?,
            )
        };
        let angle =
            || -> Result<f64> { j.angle.ok_or_else(|| Error::InvalidGate(format!("{} requires an angle", j.kind))) };
        let g = match j.kind.as_str() {
            "X" | "X2" | "Z" | "Z2" | "H" => {
                arity(1)?;
                let q = j.qutrits[0];
                match j.kind.as_str() {
                    "X" => Gate::XPow { q, p: 1 },
                    "X2" => Gate::XPow { q, p: 2 },
                    "Z" => Gate::ZPow { q, p: 1 },
                    "Z2" => Gate::ZPow { q, p: 2 },
                    _ => Gate::Hadamard { q },
                }
            }
            "RotZ" => {
                arity(1)?;
                Gate::RotZ { q: j.qutrits[0], sub: sub()?, angle: angle()? }
            }
            "RotX" => {
                arity(1)?;
                Gate::RotX { q: j.qutrits[0], sub: sub()?, angle: angle()? }
            }
            "SigmaX" => {
                arity(1)?;
                Gate::SigmaX { q: j.qutrits[0], sub: sub()? }
            }
            "CX" => {
                arity(2)?;
                Gate::CX { control: j.qutrits[0], target: j.qutrits[1] }
            }
            "CXDag" | "CX2" => {
                arity(2)?;
                Gate::CXDag { control: j.qutrits[0], target: j.qutrits[1] }
            }
            other => return Err(Error::InvalidGate(format!("unknown gate kind {other:?}"))),
        };
        g.validate()?;
        Ok(g)
    }
}
