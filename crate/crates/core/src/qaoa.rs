//! Ternary-encoded QAOA for graph k-coloring with k = 3^m.
//!
//! Node `v` owns qutrits `m·v .. m·v + m`; its color is the base-3 number
//! they hold. No basis state is invalid, so no penalty term is needed.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::decompose::{count_gates, decompose_weyl, rotation_synthesis};
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::gate::{Gate, Subspace};
use crate::sim::{pow3, DenseUnitary, StateVector, MAX_UNITARY_QUTRITS};
use crate::weyl::WeylZString;

/// m with 3^m = k, or `UnsupportedK`.
pub fn qutrits_per_node(k: usize) -> Result<usize> {
    let mut m = 0;
    let mut p = 1usize;
    while p < k {
        p = p.checked_mul(3).ok_or(Error::UnsupportedK(k))?;
        m += 1;
    }
    if p != k || m == 0 {
        return Err(Error::UnsupportedK(k));
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringProblem {
    num_nodes: usize,
    edges: Vec<(usize, usize)>,
    k: usize,
    m: usize,
}

impl ColoringProblem {
    /// Edges are normalized to `v < w` and sorted.
    pub fn new(num_nodes: usize, edges: &[(usize, usize)], k: usize) -> Result<Self> {
        let m = qutrits_per_node(k)?;
        let mut norm = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop at node {a}")));
            }
            if a >= num_nodes || b >= num_nodes {
                return Err(Error::InvalidGraph(format!("edge ({a},{b}) outside {num_nodes} nodes")));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!("duplicate edge ({},{})", w[0].0, w[0].1)));
        }
        Ok(ColoringProblem { num_nodes, edges: norm, k, m })
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn num_qutrits(&self) -> usize {
        self.num_nodes * self.m
    }

    /// Color of `node` in basis state `index`.
    pub fn color(&self, index: usize, node: usize) -> usize {
        let n = self.num_qutrits();
        let low = n - self.m * (node + 1);
        (index / pow3(low)) % self.k
    }

    /// Cost of a basis state: each edge contributes k − 1 when both ends share
    /// a color and −1 otherwise.
    pub fn basis_cost(&self, index: usize) -> f64 {
        self.edges
            .iter()
            .map(|&(v, w)| if self.color(index, v) == self.color(index, w) { self.k as f64 - 1.0 } else { -1.0 })
            .sum()
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson { nodes: self.num_nodes, edges: self.edges.iter().map(|&(a, b)| [a, b]).collect() }
    }

    pub fn from_json(g: &GraphJson, k: usize) -> Result<Self> {
        let edges: Vec<(usize, usize)> = g.edges.iter().map(|e| (e[0], e[1])).collect();
        Self::new(g.nodes, &edges, k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub nodes: usize,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QaoaLayerSpec {
    pub gammas: Vec<f64>,
    pub betas: Vec<f64>,
}

impl QaoaLayerSpec {
    pub fn new(gammas: Vec<f64>, betas: Vec<f64>) -> Result<Self> {
        if gammas.len() != betas.len() {
            return Err(Error::InvalidParameters(format!("{} gammas but {} betas", gammas.len(), betas.len())));
        }
        if let Some(x) = gammas.iter().chain(&betas).find(|x| !x.is_finite()) {
            return Err(Error::InvalidParameters(format!("non-finite angle {x}")));
        }
        Ok(QaoaLayerSpec { gammas, betas })
    }

    pub fn layers(&self) -> usize {
        self.gammas.len()
    }
}

/// One Hermitian summand `c·Π Z^{e_i}_{q_i} + h.c.` of an edge Hamiltonian,
/// on register positions `qutrits` (ascending, last exponent 1).
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeTerm {
    pub qutrits: Vec<usize>,
    pub string: WeylZString,
}

/// Summands of H^k_{v,w}: for every nonempty digit set L = {ℓ_1 < … < ℓ_r}
/// and d ∈ {1,2}^r with d_r = 2, the string Π Z^{d_n}_{v,ℓ_n} Z^{2d_n}_{w,ℓ_n}.
/// Fixing d_r picks one of each pair (d, −d), the other being the h.c.
pub fn edge_hamiltonian_terms(k: usize, v: usize, w: usize) -> Result<Vec<EdgeTerm>> {
    let m = qutrits_per_node(k)?;
    if v == w {
        return Err(Error::InvalidGraph(format!("self-loop at node {v}")));
    }
    let (v, w) = (v.min(w), v.max(w));
    let mut terms = Vec::new();
    for size in 1..=m {
        for mask in 1usize..1 << m {
            if mask.count_ones() as usize != size {
                continue;
            }
            let digits: Vec<usize> = (0..m).filter(|l| mask >> l & 1 == 1).collect();
            for free in 0..1usize << (size - 1) {
                let d: Vec<u8> = (0..size).map(|n| if n == size - 1 { 2 } else { 1 + (free >> n & 1) as u8 }).collect();
                let mut qutrits: Vec<usize> = digits.iter().map(|l| m * v + l).collect();
                qutrits.extend(digits.iter().map(|l| m * w + l));
                let mut e: Vec<u8> = d.clone();
                e.extend(d.iter().map(|&x| (2 * x) % 3));
                e.pop();
                terms.push(EdgeTerm { qutrits, string: WeylZString::new(C64::new(1.0, 0.0), e)? });
            }
        }
    }
    Ok(terms)
}

/// Diagonal of H^k_{v,w} summed term by term over `num_qutrits` qutrits.
pub fn edge_hamiltonian_diagonal(k: usize, v: usize, w: usize, num_qutrits: usize) -> Result<Vec<f64>> {
    if num_qutrits > MAX_UNITARY_QUTRITS {
        return Err(Error::DimensionCap { num_qutrits, max: MAX_UNITARY_QUTRITS });
    }
    let mut acc = vec![0.0; pow3(num_qutrits)];
    for t in edge_hamiltonian_terms(k, v, w)? {
        if let Some(&q) = t.qutrits.iter().find(|&&q| q >= num_qutrits) {
            return Err(Error::IndexOutOfRange { index: q, bound: num_qutrits });
        }
        let local = t.string.diagonal()?;
        let r = t.qutrits.len();
        for (x, a) in acc.iter_mut().enumerate() {
            let li = t.qutrits.iter().fold(0, |idx, &q| idx * 3 + (x / pow3(num_qutrits - 1 - q)) % 3);
            debug_assert!(li < pow3(r));
            *a += local[li];
        }
    }
    Ok(acc)
}

/// Exact e^{−i(γ/2)H^k_{v,w}}.
pub fn edge_exponential(k: usize, v: usize, w: usize, num_qutrits: usize, gamma: f64) -> Result<DenseUnitary> {
    let d = edge_hamiltonian_diagonal(k, v, w, num_qutrits)?;
    DenseUnitary::from_phases(&d.iter().map(|&x| -gamma / 2.0 * x).collect::<Vec<_>>())
}

/// e^{−i(γ/2)(Z^{2}Z + h.c.)}-type phase on a qutrit already holding the
/// relevant difference: R01(γ)·R02(γ).
fn unit_phase(q: usize, gamma: f64) -> Vec<Gate> {
    rotation_synthesis(q, C64::new(1.0, 0.0), gamma).expect("unit coefficient")
}

/// Circuit for e^{−i(γ/2)H^k_{v,w}} on `m·(max(v,w)+1)` qutrits.
///
/// k = 3, 9, 27 use fixed templates: CX²(v_ℓ, w_ℓ) leaves y_ℓ = x_{w,ℓ} − x_{v,ℓ}
/// on w's qutrits, every summand's phase depends only on a combination of the
/// y_ℓ, and CX between w's own qutrits walks the target through those
/// combinations. Larger k falls back to one Weyl ladder per summand.
pub fn edge_circuit(k: usize, v: usize, w: usize, gamma: f64) -> Result<Circuit> {
    let m = qutrits_per_node(k)?;
    if v == w {
        return Err(Error::InvalidGraph(format!("self-loop at node {v}")));
    }
    if !gamma.is_finite() {
        return Err(Error::InvalidParameters(format!("gamma {gamma} is not finite")));
    }
    let (v, w) = (v.min(w), v.max(w));
    let n = m * (w + 1);
    let a = |l: usize| m * v + l;
    let b = |l: usize| m * w + l;
    let mut g: Vec<Gate> = Vec::new();
    let entangle = |g: &mut Vec<Gate>| (0..m).for_each(|l| g.push(Gate::cx_dag(a(l), b(l))));
    let disentangle = |g: &mut Vec<Gate>| (0..m).for_each(|l| g.push(Gate::cx(a(l), b(l))));
    match m {
        1 => {
            entangle(&mut g);
            g.extend(unit_phase(b(0), gamma));
            disentangle(&mut g);
        }
        2 => {
            entangle(&mut g);
            g.extend(unit_phase(b(0), gamma));
            g.extend(unit_phase(b(1), gamma));
            pair_walk(&mut g, b(0), b(1), gamma);
            disentangle(&mut g);
        }
        3 => {
            entangle(&mut g);
            for l in 0..3 {
                g.extend(unit_phase(b(l), gamma));
            }
            pair_walk(&mut g, b(0), b(1), gamma);
            pair_walk(&mut g, b(0), b(2), gamma);
            pair_walk(&mut g, b(1), b(2), gamma);
            // b2 visits y2 + y0 + y1, y2 + y0 + 2y1, y2 + 2y0 + 2y1, y2 + 2y0 + y1.
            g.push(Gate::cx(b(0), b(2)));
            g.push(Gate::cx(b(1), b(2)));
            g.extend(unit_phase(b(2), gamma));
            g.push(Gate::cx(b(1), b(2)));
            g.extend(unit_phase(b(2), gamma));
            g.push(Gate::cx(b(0), b(2)));
            g.extend(unit_phase(b(2), gamma));
            g.push(Gate::cx_dag(b(1), b(2)));
            g.extend(unit_phase(b(2), gamma));
            g.push(Gate::cx(b(0), b(2)));
            g.push(Gate::cx_dag(b(1), b(2)));
            disentangle(&mut g);
        }
        _ => {
            let mut c = Circuit::new(n);
            for t in edge_hamiltonian_terms(k, v, w)? {
                let local = decompose_weyl(&t.string, gamma)?;
                c.append(&local.remapped(n, |q| t.qutrits[q])?)?;
            }
            return Ok(c);
        }
    }
    Circuit::from_gates(n, g)
}

/// Target `t` holding y_t: visit y_t − y_c and y_t + y_c, then restore.
fn pair_walk(g: &mut Vec<Gate>, c: usize, t: usize, gamma: f64) {
    g.push(Gate::cx_dag(c, t));
    g.extend(unit_phase(t, gamma));
    g.push(Gate::cx_dag(c, t));
    g.extend(unit_phase(t, gamma));
    g.push(Gate::cx_dag(c, t));
}

/// e^{−i(γ/2)H_C}: edge circuits in sorted edge order.
pub fn cost_layer(problem: &ColoringProblem, gamma: f64) -> Result<Circuit> {
    let n = problem.num_qutrits();
    let mut c = Circuit::new(n);
    for &(v, w) in problem.edges() {
        let e = edge_circuit(problem.k(), v, w, gamma)?;
        c.append(&e.remapped(n, |q| q)?)?;
    }
    Ok(c)
}

/// R_x^{(01)}(β), R_x^{(02)}(β), R_x^{(12)}(β) on every qutrit, in that
/// temporal order.
pub fn mixer_layer(num_qutrits: usize, beta: f64) -> Result<Circuit> {
    if !beta.is_finite() {
        return Err(Error::InvalidParameters(format!("beta {beta} is not finite")));
    }
    let mut c = Circuit::new(num_qutrits);
    for q in 0..num_qutrits {
        for s in Subspace::ALL {
            c.push(Gate::rx(q, s, beta))?;
        }
    }
    Ok(c)
}

/// One Hadamard per qutrit.
pub fn initial_layer(num_qutrits: usize) -> Circuit {
    let mut c = Circuit::new(num_qutrits);
    for q in 0..num_qutrits {
        c.push(Gate::Hadamard { q }).expect("in range");
    }
    c
}

/// Full ansatz: Hadamards, then p alternations of cost and mixer layers.
pub fn qaoa_circuit(problem: &ColoringProblem, spec: &QaoaLayerSpec) -> Result<Circuit> {
    let n = problem.num_qutrits();
    let mut c = initial_layer(n);
    for (&g, &b) in spec.gammas.iter().zip(&spec.betas) {
        c.append(&cost_layer(problem, g)?)?;
        c.append(&mixer_layer(n, b)?)?;
    }
    Ok(c)
}

/// ⟨ψ|H_C|ψ⟩, evaluated on basis probabilities.
pub fn cost_expectation(state: &StateVector, problem: &ColoringProblem) -> Result<f64> {
    cost_expectation_with(Exec::default(), state, problem)
}

pub fn cost_expectation_with(exec: Exec, state: &StateVector, problem: &ColoringProblem) -> Result<f64> {
    if state.num_qutrits() != problem.num_qutrits() {
        return Err(Error::DimensionMismatch { expected: pow3(problem.num_qutrits()), actual: state.dim() });
    }
    let amps = state.amplitudes();
    Ok(exec::chunked_sum(exec, amps.len(), |i| amps[i].norm_sqr() * problem.basis_cost(i)))
}

/// One row of the resource comparison. The qubit columns are fixed reference
/// values for binary encoding with penalty terms, not computed here.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceRow {
    pub k: usize,
    /// Node degree.
    pub m: usize,
    pub depth_qutrit: usize,
    pub ent_qutrit: usize,
    pub qudits_qutrit: usize,
    pub depth_qubit: usize,
    pub ent_qubit: usize,
    pub qudits_qubit: usize,
}

/// Reference qubit-encoding costs per degree m: (depth, entangling, qubits).
pub fn qubit_reference(k: usize, degree: usize) -> Result<(usize, usize, usize)> {
    let m = degree;
    match k {
        3 => Ok((6 * m + 4, 6 * m + 2, 2)),
        9 => Ok((32 * m + 30, 36 * m + 28, 4)),
        27 => Ok((80 * m + 78, 90 * m + 80, 5)),
        _ => Err(Error::UnsupportedK(k)),
    }
}

/// Qutrit costs from the built edge circuit, scaled by node degree.
pub fn resource_report(k: usize, degree: usize) -> Result<ResourceRow> {
    let (depth_qubit, ent_qubit, qudits_qubit) = qubit_reference(k, degree)?;
    let counts = count_gates(&edge_circuit(k, 0, 1, 1.0)?);
    Ok(ResourceRow {
        k,
        m: degree,
        depth_qutrit: counts.depth * degree,
        ent_qutrit: counts.cx_count * degree,
        qudits_qutrit: qutrits_per_node(k)?,
        depth_qubit,
        ent_qubit,
        qudits_qubit,
    })
}
