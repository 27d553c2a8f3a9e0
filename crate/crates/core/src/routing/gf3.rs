use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::{Gate, Subspace};

/// Square matrix over GF(3). Row j holds the coefficients of output trit j
/// as a combination of input trits.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TernaryParityMap {
    n: usize,
    rows: Vec<Vec<u8>>,
}

impl TernaryParityMap {
    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|i| (0..n).map(|j| (i == j) as u8).collect()).collect();
        TernaryParityMap { n, rows }
    }

    /// Checks shape, symbols and invertibility.
    pub fn new(rows: Vec<Vec<u8>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::DimensionMismatch { expected: 1, actual: 0 });
        }
        for r in &rows {
            if r.len() != n {
                return Err(Error::DimensionMismatch { expected: n, actual: r.len() });
            }
            if let Some(&v) = r.iter().find(|&&v| v > 2) {
                return Err(Error::InvalidSymbol { symbol: v as i64, context: "GF(3) entry" });
            }
        }
        let p = TernaryParityMap { n, rows };
        if !p.is_invertible() {
            return Err(Error::NotInvertible);
        }
        Ok(p)
    }

    /// Uniformly random invertible matrix (rejection sampling).
    pub fn random_invertible<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        loop {
            let rows = (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..3u8)).collect()).collect();
            let p = TernaryParityMap { n, rows };
            if p.is_invertible() {
                return p;
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.rows[r][c]
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.n).all(|r| (0..r).all(|c| self.rows[r][c] == 0))
    }

    pub fn rank(&self) -> usize {
        let mut m = self.rows.clone();
        let mut rank = 0;
        for c in 0..self.n {
            let Some(p) = (rank..self.n).find(|&r| m[r][c] != 0) else { continue };
            m.swap(rank, p);
            let inv = m[rank][c]; // 1⁻¹ = 1, 2⁻¹ = 2
            for v in m[rank].iter_mut() {
                *v = (*v * inv) % 3;
            }
            for r in 0..self.n {
                if r != rank && m[r][c] != 0 {
                    let f = m[r][c];
                    let pivot = m[rank].clone();
                    for (v, p) in m[r].iter_mut().zip(pivot) {
                        *v = (*v + 3 * 3 - f * p) % 3;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.n
    }

    /// P·x mod 3.
    pub fn apply(&self, x: &[u8]) -> Result<Vec<u8>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, actual: x.len() });
        }
        Ok(self
            .rows
            .iter()
            .map(|r| (r.iter().zip(x).map(|(&a, &b)| a as u32 * b as u32).sum::<u32>() % 3) as u8)
            .collect())
    }

    pub fn to_json(&self) -> ParityJson {
        ParityJson { n: self.n, rows: self.rows.clone() }
    }

    pub fn from_json(j: &ParityJson) -> Result<Self> {
        if j.rows.len() != j.n {
            return Err(Error::DimensionMismatch { expected: j.n, actual: j.rows.len() });
        }
        Self::new(j.rows.clone())
    }

    fn check(&self, i: usize) -> Result<()> {
        if i >= self.n {
            return Err(Error::IndexOutOfRange { index: i, bound: self.n });
        }
        Ok(())
    }

    /// In-place row operation.
    pub fn apply_op(&mut self, op: RowOp) -> Result<()> {
        match op {
            RowOp::Add { src, dst } | RowOp::Sub { src, dst } => {
                self.check(src)?;
                self.check(dst)?;
                if src == dst {
                    return Err(Error::InvalidGate(format!("row operation on a single row {src}")));
                }
                let f = if matches!(op, RowOp::Add { .. }) { 1 } else { 2 };
                let s = self.rows[src].clone();
                for (d, v) in self.rows[dst].iter_mut().zip(s) {
                    *d = (*d + f * v) % 3;
                }
            }
            RowOp::Double { row } => {
                self.check(row)?;
                for v in self.rows[row].iter_mut() {
                    *v = (*v * 2) % 3;
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityJson {
    pub n: usize,
    pub rows: Vec<Vec<u8>>,
}

/// Elementary GF(3) row operation and its gate:
/// `Add` ↔ CX(src, dst), `Sub` ↔ CXDag(src, dst), `Double` ↔ SigmaX(12)@row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum RowOp {
    /// P_dst += P_src
    Add { src: usize, dst: usize },
    /// P_dst −= P_src
    Sub { src: usize, dst: usize },
    /// P_row ×= 2
    Double { row: usize },
}

impl RowOp {
    pub fn gate(self) -> Gate {
        match self {
            RowOp::Add { src, dst } => Gate::cx(src, dst),
            RowOp::Sub { src, dst } => Gate::cx_dag(src, dst),
            RowOp::Double { row } => Gate::SigmaX { q: row, sub: Subspace::S12 },
        }
    }

    pub fn from_gate(g: &Gate) -> Result<RowOp> {
        match *g {
            Gate::CX { control, target } => Ok(RowOp::Add { src: control, dst: target }),
            Gate::CXDag { control, target } => Ok(RowOp::Sub { src: control, dst: target }),
            Gate::SigmaX { q, sub: Subspace::S12 } => Ok(RowOp::Double { row: q }),
            _ => Err(Error::UnsupportedGate(g.to_string())),
        }
    }

    pub fn remap(self, f: impl Fn(usize) -> usize) -> RowOp {
        match self {
            RowOp::Add { src, dst } => RowOp::Add { src: f(src), dst: f(dst) },
            RowOp::Sub { src, dst } => RowOp::Sub { src: f(src), dst: f(dst) },
            RowOp::Double { row } => RowOp::Double { row: f(row) },
        }
    }
}

/// Functional form of [`TernaryParityMap::apply_op`].
pub fn apply_row_op(p: &TernaryParityMap, op: RowOp) -> Result<TernaryParityMap> {
    let mut q = p.clone();
    q.apply_op(op)?;
    Ok(q)
}

/// Parity map of a circuit made only of CX, CXDag and SigmaX(12).
pub fn parity_map_of_circuit(c: &Circuit) -> Result<TernaryParityMap> {
    let mut p = TernaryParityMap::identity(c.num_qutrits());
    for g in c.gates() {
        p.apply_op(RowOp::from_gate(g)?)?;
    }
    Ok(p)
}
