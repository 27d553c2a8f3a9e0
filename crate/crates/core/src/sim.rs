//! Dense simulation: state vectors updated gate by gate, full unitaries for
//! small registers, and phase-insensitive comparison.
//!
//! Qutrit 0 is the most significant digit of a basis index:
//! `index = Σ x_q · 3^(N-1-q)`.

use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::gate::Gate;

/// Largest register for which a dense unitary is built.
pub const MAX_UNITARY_QUTRITS: usize = 8;
/// Largest register for state-vector simulation.
pub const MAX_STATE_QUTRITS: usize = 15;
/// Tolerance on ‖U†U − 1‖_F for unitaries built from circuits.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Tolerance on |‖ψ‖ − 1| for state vectors.
pub const NORM_TOL: f64 = 1e-10;
/// Above this size unitarity is checked with probe vectors instead of U†U.
const FULL_CHECK_QUTRITS: usize = 5;

pub fn pow3(n: usize) -> usize {
    3usize.pow(n as u32)
}

/// Trit string of `index` (qutrit 0 first).
pub fn index_to_trits(index: usize, n: usize) -> Vec<u8> {
    let mut x = vec![0u8; n];
    let mut r = index;
    for q in (0..n).rev() {
        x[q] = (r % 3) as u8;
        r /= 3;
    }
    x
}

pub fn trits_to_index(x: &[u8]) -> usize {
    x.iter().fold(0, |acc, &t| acc * 3 + t as usize)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qutrits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(num_qutrits: usize, amps: Vec<C64>) -> Result<Self> {
        check_state_cap(num_qutrits)?;
        if amps.len() != pow3(num_qutrits) {
            return Err(Error::DimensionMismatch { expected: pow3(num_qutrits), actual: amps.len() });
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidParameters(format!("state norm {norm} is not 1")));
        }
        Ok(StateVector { num_qutrits, amps })
    }

    pub fn basis(num_qutrits: usize, index: usize) -> Result<Self> {
        check_state_cap(num_qutrits)?;
        let d = pow3(num_qutrits);
        if index >= d {
            return Err(Error::IndexOutOfRange { index, bound: d });
        }
        let mut amps = vec![C64::new(0.0, 0.0); d];
        amps[index] = C64::new(1.0, 0.0);
        Ok(StateVector { num_qutrits, amps })
    }

    pub fn zero(num_qutrits: usize) -> Result<Self> {
        Self::basis(num_qutrits, 0)
    }

    pub fn from_trits(x: &[u8]) -> Result<Self> {
        if let Some(&t) = x.iter().find(|&&t| t > 2) {
            return Err(Error::InvalidSymbol { symbol: t as i64, context: "trit string" });
        }
        Self::basis(x.len(), trits_to_index(x))
    }

    pub fn num_qutrits(&self) -> usize {
        self.num_qutrits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }
}

fn check_state_cap(n: usize) -> Result<()> {
    if n > MAX_STATE_QUTRITS {
        return Err(Error::DimensionCap { num_qutrits: n, max: MAX_STATE_QUTRITS });
    }
    Ok(())
}

/// Square complex matrix of dimension 3^N.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseUnitary {
    num_qutrits: usize,
    m: Array2<C64>,
}

impl DenseUnitary {
    /// Wraps `m` after checking it is unitary within [`UNITARITY_TOL`].
    pub fn from_matrix(m: Array2<C64>) -> Result<Self> {
        let u = Self::from_matrix_unchecked(m)?;
        let err = unitarity_error(&u.m);
        if err > UNITARITY_TOL {
            return Err(Error::InvalidCircuit(format!("matrix is not unitary (‖U†U−1‖ = {err:e})")));
        }
        Ok(u)
    }

    /// Wraps a square 3^N matrix without the unitarity check.
    pub fn from_matrix_unchecked(m: Array2<C64>) -> Result<Self> {
        let d = m.nrows();
        if m.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, actual: m.ncols() });
        }
        let n = (0..=MAX_UNITARY_QUTRITS)
            .find(|&n| pow3(n) == d)
            .ok_or(Error::DimensionMismatch { expected: pow3(MAX_UNITARY_QUTRITS), actual: d })?;
        Ok(DenseUnitary { num_qutrits: n, m })
    }

    pub fn identity(num_qutrits: usize) -> Result<Self> {
        check_unitary_cap(num_qutrits)?;
        Ok(DenseUnitary { num_qutrits, m: Array2::from_diag_elem(pow3(num_qutrits), C64::new(1.0, 0.0)) })
    }

    /// diag(e^{iφ_0}, e^{iφ_1}, …).
    pub fn from_phases(phases: &[f64]) -> Result<Self> {
        let diag = Array1::from_iter(phases.iter().map(|&p| C64::from_polar(1.0, p)));
        Self::from_matrix_unchecked(Array2::from_diag(&diag))
    }

    /// Matrix of a gate on its own qutrits.
    pub fn of_gate(g: &Gate) -> DenseUnitary {
        let m = g.local_matrix();
        let n = if m.nrows() == 3 { 1 } else { 2 };
        DenseUnitary { num_qutrits: n, m }
    }

    pub fn num_qutrits(&self) -> usize {
        self.num_qutrits
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &Array2<C64> {
        &self.m
    }

    pub fn into_matrix(self) -> Array2<C64> {
        self.m
    }

    pub fn apply(&self, s: &StateVector) -> Result<StateVector> {
        if s.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: s.dim() });
        }
        let v = Array1::from_vec(s.amps.clone());
        Ok(StateVector { num_qutrits: s.num_qutrits, amps: self.m.dot(&v).to_vec() })
    }

    pub fn dagger(&self) -> DenseUnitary {
        DenseUnitary { num_qutrits: self.num_qutrits, m: self.m.t().mapv(|z| z.conj()) }
    }
}

fn check_unitary_cap(n: usize) -> Result<()> {
    if n > MAX_UNITARY_QUTRITS {
        return Err(Error::DimensionCap { num_qutrits: n, max: MAX_UNITARY_QUTRITS });
    }
    Ok(())
}

/// ‖U†U − 1‖_F for small matrices; for larger ones the worst ‖U†Uv − v‖
/// over a few fixed probe vectors.
fn unitarity_error(m: &Array2<C64>) -> f64 {
    let d = m.nrows();
    let dag = m.t().mapv(|z| z.conj());
    if d <= pow3(FULL_CHECK_QUTRITS) {
        let p = dag.dot(m);
        return p.indexed_iter().map(|((i, j), z)| (z - if i == j { 1.0 } else { 0.0 }).norm_sqr()).sum::<f64>().sqrt();
    }
    (1..=3)
        .map(|k| {
            let scale = 1.0 / (d as f64).sqrt();
            let v = Array1::from_shape_fn(d, |i| C64::from_polar(scale, (i * i * k) as f64 * 0.618));
            let w = dag.dot(&m.dot(&v));
            (&w - &v).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
        })
        .fold(0.0, f64::max)
}

/// Gate prepared for repeated application to a register of fixed size.
struct LocalOp {
    strides: Vec<usize>,
    /// For each local row: nonzero (offset, value) pairs.
    rows: Vec<Vec<(usize, C64)>>,
}

impl LocalOp {
    fn new(g: &Gate, n: usize) -> Self {
        let qs = g.qutrits();
        let strides: Vec<usize> = qs.iter().map(|&q| pow3(n - 1 - q)).collect();
        let m = g.local_matrix();
        let offset = |b: usize| -> usize {
            let k = strides.len();
            (0..k).map(|t| ((b / pow3(k - 1 - t)) % 3) * strides[t]).sum()
        };
        let rows = (0..m.nrows())
            .map(|a| {
                (0..m.ncols()).filter(|&b| m[[a, b]] != C64::new(0.0, 0.0)).map(|b| (offset(b), m[[a, b]])).collect()
            })
            .collect();
        LocalOp { strides, rows }
    }

    #[inline]
    fn amp(&self, src: &[C64], i: usize) -> C64 {
        let mut a = 0;
        let mut base = i;
        for &s in &self.strides {
            let digit = (i / s) % 3;
            a = a * 3 + digit;
            base -= digit * s;
        }
        self.rows[a].iter().map(|&(off, v)| v * src[base + off]).sum()
    }

    fn apply(&self, exec: Exec, src: &[C64]) -> Vec<C64> {
        exec::map_range(exec, src.len(), |i| self.amp(src, i))
    }
}

/// Applies `c` to `s` gate by gate without forming any full matrix.
pub fn apply_circuit(s: &StateVector, c: &Circuit) -> Result<StateVector> {
    apply_circuit_with(Exec::default(), s, c)
}

pub fn apply_circuit_with(exec: Exec, s: &StateVector, c: &Circuit) -> Result<StateVector> {
    if s.num_qutrits != c.num_qutrits() {
        return Err(Error::DimensionMismatch { expected: c.num_qutrits(), actual: s.num_qutrits });
    }
    let n = c.num_qutrits();
    let mut amps = s.amps.clone();
    for g in c.gates() {
        amps = LocalOp::new(g, n).apply(exec, &amps);
    }
    Ok(StateVector { num_qutrits: n, amps })
}

/// U = U_k ⋯ U_1 for gates listed in temporal order.
pub fn circuit_unitary(c: &Circuit) -> Result<DenseUnitary> {
    circuit_unitary_with(Exec::default(), c)
}

pub fn circuit_unitary_with(exec: Exec, c: &Circuit) -> Result<DenseUnitary> {
    let n = c.num_qutrits();
    check_unitary_cap(n)?;
    let d = pow3(n);
    let ops: Vec<LocalOp> = c.gates().iter().map(|g| LocalOp::new(g, n)).collect();
    let columns = exec::map_range(exec, d, |j| {
        let mut v = vec![C64::new(0.0, 0.0); d];
        v[j] = C64::new(1.0, 0.0);
        for op in &ops {
            v = op.apply(Exec::Sequential, &v);
        }
        v
    });
    let m = Array2::from_shape_fn((d, d), |(i, j)| columns[j][i]);
    DenseUnitary::from_matrix(m)
}

/// Matrix of a single gate embedded in an N-qutrit register.
pub fn gate_unitary(g: &Gate) -> DenseUnitary {
    DenseUnitary::of_gate(g)
}

/// 1 − |Tr(U†V)|/d. Zero exactly when U = e^{iφ}V.
pub fn phase_distance(u: &DenseUnitary, v: &DenseUnitary) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), actual: v.dim() });
    }
    let tr: C64 = u.m.iter().zip(v.m.iter()).map(|(a, b)| a.conj() * b).sum();
    Ok((1.0 - tr.norm() / u.dim() as f64).max(0.0))
}

/// Kronecker product of square matrices.
pub fn kron(a: &Array2<C64>, b: &Array2<C64>) -> Array2<C64> {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    Array2::from_shape_fn((ra * rb, ca * cb), |(i, j)| a[[i / rb, j / cb]] * b[[i % rb, j % cb]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::swap_gates;
    use crate::gate::Subspace;
    use std::f64::consts::PI;

    #[test]
    fn empty_circuit_is_identity() {
        let u = circuit_unitary(&Circuit::new(2)).unwrap();
        assert_eq!(u, DenseUnitary::identity(2).unwrap());
    }

    #[test]
    fn cx_cubed_is_identity() {
        let c = Circuit::from_gates(2, vec![Gate::cx(0, 1); 3]).unwrap();
        let u = circuit_unitary(&c).unwrap();
        assert_eq!(phase_distance(&u, &DenseUnitary::identity(2).unwrap()).unwrap(), 0.0);
    }

    #[test]
    fn dimension_cap() {
        let c = Circuit::new(9);
        assert!(matches!(circuit_unitary(&c), Err(Error::DimensionCap { num_qutrits: 9, max: 8 })));
    }

    #[test]
    fn swap_unitary_is_the_swap_permutation() {
        let c = Circuit::from_gates(2, swap_gates(0, 1).to_vec()).unwrap();
        let u = circuit_unitary(&c).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                for r in 0..9 {
                    let want = if r == 3 * b + a { 1.0 } else { 0.0 };
                    assert_eq!(u.matrix()[[r, 3 * a + b]], C64::new(want, 0.0));
                }
            }
        }
    }

    #[test]
    fn cx_on_basis_states() {
        let c = Circuit::from_gates(2, vec![Gate::cx(0, 1)]).unwrap();
        let out = apply_circuit(&StateVector::from_trits(&[0, 0]).unwrap(), &c).unwrap();
        assert_eq!(out, StateVector::from_trits(&[0, 0]).unwrap());
        let out = apply_circuit(&StateVector::from_trits(&[2, 0]).unwrap(), &c).unwrap();
        assert_eq!(out, StateVector::from_trits(&[2, 2]).unwrap());
    }

    #[test]
    fn most_significant_is_qutrit_zero() {
        let c = Circuit::from_gates(3, vec![Gate::XPow { q: 0, p: 1 }]).unwrap();
        let out = apply_circuit(&StateVector::zero(3).unwrap(), &c).unwrap();
        assert_eq!(out.amplitudes()[9], C64::new(1.0, 0.0));
    }

    #[test]
    fn phase_distance_examples() {
        let x = DenseUnitary::of_gate(&Gate::XPow { q: 0, p: 1 });
        let id = DenseUnitary::identity(1).unwrap();
        assert!((phase_distance(&id, &x).unwrap() - 1.0).abs() < 1e-15);
        let h = DenseUnitary::of_gate(&Gate::Hadamard { q: 0 });
        let hp = DenseUnitary::from_matrix(h.matrix() * C64::from_polar(1.0, PI / 7.0)).unwrap();
        assert!(phase_distance(&h, &hp).unwrap() < 1e-14);
        assert!(phase_distance(&h, &h).unwrap() < 1e-15);
        assert!(phase_distance(&h, &id).is_ok());
        assert!(phase_distance(&id, &DenseUnitary::identity(2).unwrap()).is_err());
    }

    #[test]
    fn dimension_mismatch_on_apply() {
        let s = StateVector::zero(2).unwrap();
        assert!(matches!(apply_circuit(&s, &Circuit::new(3)), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn state_norm_checked() {
        assert!(StateVector::new(1, vec![C64::new(1.0, 0.0); 3]).is_err());
        assert!(StateVector::new(1, vec![C64::new(1.0, 0.0)]).is_err());
    }

    #[test]
    fn hadamard_column_and_norm() {
        let c = Circuit::from_gates(1, vec![Gate::Hadamard { q: 0 }]).unwrap();
        let out = apply_circuit(&StateVector::zero(1).unwrap(), &c).unwrap();
        for a in out.amplitudes() {
            assert!((a - C64::new(0.0, -1.0 / 3f64.sqrt())).norm() < 1e-15);
        }
    }

    #[test]
    fn non_unitary_rejected() {
        let mut m = Array2::from_diag_elem(3, C64::new(1.0, 0.0));
        m[[0, 1]] = C64::new(0.5, 0.0);
        assert!(DenseUnitary::from_matrix(m).is_err());
    }

    #[test]
    fn probe_check_on_large_register() {
        let mut c = Circuit::new(6);
        for q in 0..6 {
            c.push(Gate::Hadamard { q }).unwrap();
            c.push(Gate::rx(q, Subspace::S02, 0.3 * q as f64)).unwrap();
        }
        c.push(Gate::cx(0, 5)).unwrap();
        assert!(circuit_unitary(&c).is_ok());
    }

    #[test]
    fn kron_orders_first_factor_high() {
        let x = Gate::XPow { q: 0, p: 1 }.local_matrix();
        let id = Array2::from_diag_elem(3, C64::new(1.0, 0.0));
        let g = Circuit::from_gates(2, vec![Gate::XPow { q: 0, p: 1 }]).unwrap();
        assert_eq!(circuit_unitary(&g).unwrap().matrix(), &kron(&x, &id));
    }
}
