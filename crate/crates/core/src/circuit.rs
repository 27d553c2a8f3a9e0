use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::{Gate, GateJson};

/// Ordered gate list over `num_qutrits` qutrits, in temporal order.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    num_qutrits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qutrits: usize) -> Self {
        Circuit { num_qutrits, gates: Vec::new() }
    }

    pub fn from_gates(num_qutrits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Circuit::new(num_qutrits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn num_qutrits(&self) -> usize {
        self.num_qutrits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, g: Gate) -> Result<()> {
        g.validate()?;
        for q in g.qutrits() {
            if q >= self.num_qutrits {
                return Err(Error::IndexOutOfRange { index: q, bound: self.num_qutrits });
            }
        }
        self.gates.push(g);
        Ok(())
    }

    pub fn extend<I: IntoIterator<Item = Gate>>(&mut self, gates: I) -> Result<()> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    /// Appends `other`, whose qutrit count must not exceed ours.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qutrits > self.num_qutrits {
            return Err(Error::DimensionMismatch { expected: self.num_qutrits, actual: other.num_qutrits });
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    /// Copy of this circuit embedded in a larger register via `map`.
    pub fn remapped(&self, num_qutrits: usize, map: impl Fn(usize) -> usize) -> Result<Circuit> {
        Circuit::from_gates(num_qutrits, self.gates.iter().map(|g| g.remap(&map)).collect())
    }

    /// Circuit implementing the inverse unitary.
    pub fn inverse(&self) -> Circuit {
        let gates = self.gates.iter().rev().flat_map(|g| g.inverse()).collect();
        Circuit { num_qutrits: self.num_qutrits, gates }
    }

    /// Same circuit without rotations whose angle is within `tol` of zero.
    pub fn without_zero_rotations(&self, tol: f64) -> Circuit {
        let gates = self
            .gates
            .iter()
            .filter(|g| !matches!(g, Gate::RotZ { angle, .. } | Gate::RotX { angle, .. } if angle.abs() <= tol))
            .copied()
            .collect();
        Circuit { num_qutrits: self.num_qutrits, gates }
    }

    /// Classical action on a basis trit-string. Only defined for circuits
    /// made of permutation gates.
    pub fn apply_to_trits(&self, x: &[u8]) -> Result<Vec<u8>> {
        if x.len() != self.num_qutrits {
            return Err(Error::DimensionMismatch { expected: self.num_qutrits, actual: x.len() });
        }
        if let Some(&t) = x.iter().find(|&&t| t > 2) {
            return Err(Error::InvalidSymbol { symbol: t as i64, context: "trit string" });
        }
        let mut y = x.to_vec();
        for g in &self.gates {
            g.permute_trits(&mut y).ok_or_else(|| Error::UnsupportedGate(g.to_string()))?;
        }
        Ok(y)
    }

    pub fn to_json(&self) -> CircuitJson {
        CircuitJson { n: self.num_qutrits, gates: self.gates.iter().map(GateJson::from).collect() }
    }

    pub fn from_json(j: &CircuitJson) -> Result<Circuit> {
        if j.n == 0 {
            return Err(Error::InvalidCircuit("n must be positive".into()));
        }
        let gates = j.gates.iter().map(Gate::try_from).collect::<Result<Vec<_>>>()?;
        Circuit::from_gates(j.n, gates)
    }
}

/// Wire form of a circuit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitJson {
    pub n: usize,
    pub gates: Vec<GateJson>,
}

/// The four-gate qutrit SWAP on qutrits `a`, `b`.
pub fn swap_gates(a: usize, b: usize) -> [Gate; 4] {
    use crate::gate::Subspace;
    [Gate::cx(a, b), Gate::cx_dag(b, a), Gate::cx(a, b), Gate::SigmaX { q: a, sub: Subspace::S12 }]
}
