//! Compilation of Weyl Z-string and diagonal Gell-Mann string exponentials
//! into CX/CX² ladders around z rotations on the last qutrit.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::{omega_pow, Gate, Subspace};
use crate::sim::DenseUnitary;
use crate::weyl::{expand_closed_form, GellMannString, WeylExpansion, WeylZString, MAX_CLOSED_FORM_WEIGHT};

/// Eigenvalues of a generator below this magnitude count as zero when
/// choosing the rotation layout.
const EIGEN_ZERO: f64 = 1e-12;

/// Rotations implementing e^{−i(θ/2)(cZ + c*Z†)} on qutrit `q`, one per
/// nonzero part of `c = a + ib`: R01(aθ)·R02(aθ) for the real part and
/// R12(−√3·bθ) for the imaginary part.
pub fn rotation_synthesis(q: usize, c: C64, theta: f64) -> Result<Vec<Gate>> {
    if c.norm() == 0.0 {
        return Err(Error::ZeroCoefficient);
    }
    let mut out = Vec::with_capacity(3);
    if c.re != 0.0 {
        out.push(Gate::rz(q, Subspace::S01, c.re * theta));
        out.push(Gate::rz(q, Subspace::S02, c.re * theta));
    }
    if c.im != 0.0 {
        out.push(Gate::rz(q, Subspace::S12, -(3f64.sqrt()) * c.im * theta));
    }
    Ok(out)
}

/// Same unitary as [`rotation_synthesis`] (up to global phase) with at most
/// two rotations, and exactly one when an eigenvalue of `cZ + c*Z†` vanishes.
///
/// The generator has eigenvalues `d_j = 2Re(c ω^j)` summing to zero, so the
/// target phases `φ_j = −(θ/2)d_j` are reproduced exactly by
/// R01(2φ_1)·R02(2φ_2). When `d_j = 0` the other two phases are opposite and
/// a single rotation in the complementary subspace suffices. The layout
/// depends only on `c`, never on `θ`.
pub fn compact_rotations(q: usize, c: C64, theta: f64) -> Vec<Gate> {
    let d: Vec<f64> = (0..3).map(|j| 2.0 * (c * omega_pow(j)).re).collect();
    let phi: Vec<f64> = d.iter().map(|&v| -theta / 2.0 * v).collect();
    if d[0].abs() < EIGEN_ZERO {
        vec![Gate::rz(q, Subspace::S12, 2.0 * phi[2])]
    } else if d[1].abs() < EIGEN_ZERO {
        vec![Gate::rz(q, Subspace::S02, 2.0 * phi[2])]
    } else if d[2].abs() < EIGEN_ZERO {
        vec![Gate::rz(q, Subspace::S01, 2.0 * phi[1])]
    } else {
        vec![Gate::rz(q, Subspace::S01, 2.0 * phi[1]), Gate::rz(q, Subspace::S02, 2.0 * phi[2])]
    }
}

fn weyl_block(s: &[u8], c: C64, theta: f64) -> Vec<Gate> {
    let t = s.len();
    let mut g: Vec<Gate> = s.iter().enumerate().filter_map(|(j, &e)| Gate::cx_pow(j, t, e as i64)).collect();
    g.extend(compact_rotations(t, c, theta));
    g.extend(s.iter().enumerate().filter_map(|(j, &e)| Gate::cx_pow(j, t, 2 * e as i64)));
    g
}

/// Circuit for e^{−i(θ/2)·(cZ^{s_1}⊗…⊗Z + h.c.)} on qutrits `0..N`.
///
/// The ladder CX^{s_j}(j → N−1) accumulates `Σ s_j x_j + x_{N−1}` on the
/// last qutrit, which then carries the whole phase; CX^{2s_j} uncomputes.
pub fn decompose_weyl(w: &WeylZString, theta: f64) -> Result<Circuit> {
    if !theta.is_finite() {
        return Err(Error::InvalidParameters(format!("theta {theta} is not finite")));
    }
    Circuit::from_gates(w.weight(), weyl_block(&w.s, w.c, theta))
}

/// Block order in which consecutive exponent strings differ in one entry:
/// the reflected binary Gray sequence starting at s(0).
pub fn gray_order(expansion: &WeylExpansion) -> Result<Vec<usize>> {
    let n = expansion.weight();
    let expected = 1usize << (n.max(1) - 1);
    let mut seen = vec![false; expected];
    for t in &expansion.terms {
        if t.k < expected {
            seen[t.k] = true;
        }
    }
    let found = seen.iter().filter(|&&b| b).count();
    if n < 2 || expansion.terms.len() != expected || found != expected {
        return Err(Error::IncompleteExpansion { found, expected });
    }
    Ok((0..expected).map(|i| i ^ (i >> 1)).collect())
}

/// Merges maximal runs of consecutive CX-type gates that share a target:
/// exponents are summed per control mod 3 and identities dropped. Gates in
/// such a run commute, so the result keeps the first-appearance order.
pub fn merge_cx_runs(c: &Circuit) -> Circuit {
    let mut out: Vec<Gate> = Vec::with_capacity(c.len());
    let mut run: Vec<(usize, i64)> = Vec::new();
    let mut run_target: Option<usize> = None;
    let flush = |run: &mut Vec<(usize, i64)>, t: Option<usize>, out: &mut Vec<Gate>| {
        if let Some(t) = t {
            out.extend(run.iter().filter_map(|&(ctrl, p)| Gate::cx_pow(ctrl, t, p)));
        }
        run.clear();
    };
    for g in c.gates() {
        match g.as_cx_power() {
            Some((ctrl, t, p)) if run_target == Some(t) || run_target.is_none() => {
                run_target = Some(t);
                match run.iter_mut().find(|(cc, _)| *cc == ctrl) {
                    Some(entry) => entry.1 = (entry.1 + p) % 3,
                    None => run.push((ctrl, p)),
                }
            }
            Some((ctrl, t, p)) => {
                flush(&mut run, run_target, &mut out);
                run_target = Some(t);
                run.push((ctrl, p));
            }
            None => {
                flush(&mut run, run_target, &mut out);
                run_target = None;
                out.push(*g);
            }
        }
    }
    flush(&mut run, run_target, &mut out);
    Circuit::from_gates(c.num_qutrits(), out).expect("merging preserves validity")
}

/// Circuit for e^{−iθ·(λ^{i_1}⊗…⊗λ^{i_N})}, blocks in Gray order.
pub fn decompose_gellmann(g: &GellMannString, theta: f64) -> Result<Circuit> {
    let exp = expand_closed_form(g)?;
    let order = gray_order(&exp)?;
    decompose_expansion(&exp, &order, theta)
}

/// Blocks of `exp` in the given order, with adjacent ladders merged.
/// Each term contributes e^{−iθ(c_k W_k + h.c.)}, a Weyl block at angle 2θ.
pub fn decompose_expansion(exp: &WeylExpansion, order: &[usize], theta: f64) -> Result<Circuit> {
    let n = exp.weight();
    if !(2..=MAX_CLOSED_FORM_WEIGHT).contains(&n) {
        return Err(Error::UnsupportedWeight { weight: n, min: 2, max: MAX_CLOSED_FORM_WEIGHT });
    }
    if !theta.is_finite() {
        return Err(Error::InvalidParameters(format!("theta {theta} is not finite")));
    }
    let mut raw = Circuit::new(n);
    for &k in order {
        let term = exp
            .terms
            .iter()
            .find(|t| t.k == k)
            .ok_or(Error::IncompleteExpansion { found: exp.terms.len(), expected: order.len() })?;
        raw.extend(weyl_block(&term.s, term.c, 2.0 * theta))?;
    }
    Ok(merge_cx_runs(&raw))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    /// CX plus CX².
    pub cx_count: usize,
    pub rotation_count: usize,
    pub single_qutrit_count: usize,
    pub total: usize,
    pub depth: usize,
}

/// Gate counts and ASAP depth. A gate starts one layer after the latest gate
/// on any of its qutrits, except that consecutive diagonal single-qutrit
/// gates on one qutrit (a z-rotation group) share a layer.
pub fn count_gates(c: &Circuit) -> GateCounts {
    let n = c.num_qutrits();
    let mut level = vec![0usize; n];
    let mut last_diag = vec![false; n];
    let mut counts = GateCounts::default();
    for g in c.gates() {
        counts.total += 1;
        if g.is_two_qutrit() {
            counts.cx_count += 1;
        } else {
            counts.single_qutrit_count += 1;
        }
        if matches!(g, Gate::RotZ { .. } | Gate::RotX { .. }) {
            counts.rotation_count += 1;
        }
        let qs = g.qutrits();
        let diag = g.is_diagonal_single();
        if diag && last_diag[qs[0]] {
            continue;
        }
        let layer = qs.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
        for &q in &qs {
            level[q] = layer;
            last_diag[q] = diag;
        }
    }
    counts.depth = level.into_iter().max().unwrap_or(0);
    counts
}

/// Exact e^{−i(θ/2)·W} as a diagonal unitary.
pub fn weyl_exponential(w: &WeylZString, theta: f64) -> Result<DenseUnitary> {
    let phases: Vec<f64> = w.diagonal()?.iter().map(|&d| -theta / 2.0 * d).collect();
    DenseUnitary::from_phases(&phases)
}

/// Exact e^{−iθ·(λ^{i_1}⊗…⊗λ^{i_N})} as a diagonal unitary.
pub fn gellmann_exponential(g: &GellMannString, theta: f64) -> Result<DenseUnitary> {
    let phases: Vec<f64> = g.diagonal()?.iter().map(|&d| -theta * d).collect();
    DenseUnitary::from_phases(&phases)
}

/// A string exponential to compile.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    /// e^{−i(θ/2)(cZ^s + h.c.)}
    Weyl(WeylZString),
    /// e^{−iθ λ^{i_1}⊗…}
    GellMann(GellMannString),
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecomposeRequest {
    pub generator: Generator,
    pub theta: f64,
}

impl DecomposeRequest {
    pub fn num_qutrits(&self) -> usize {
        match &self.generator {
            Generator::Weyl(w) => w.weight(),
            Generator::GellMann(g) => g.weight(),
        }
    }

    pub fn compile(&self) -> Result<Circuit> {
        match &self.generator {
            Generator::Weyl(w) => decompose_weyl(w, self.theta),
            Generator::GellMann(g) => decompose_gellmann(g, self.theta),
        }
    }

    pub fn exact_unitary(&self) -> Result<DenseUnitary> {
        match &self.generator {
            Generator::Weyl(w) => weyl_exponential(w, self.theta),
            Generator::GellMann(g) => gellmann_exponential(g, self.theta),
        }
    }

    pub fn to_json(&self) -> GeneratorJson {
        match &self.generator {
            Generator::Weyl(w) => GeneratorJson::Weyl {
                c: crate::weyl::ComplexJson { re: w.c.re, im: w.c.im },
                s: w.s.clone(),
                theta: self.theta,
            },
            Generator::GellMann(g) => GeneratorJson::Gellmann { indices: g.indices().to_vec(), theta: self.theta },
        }
    }

    pub fn from_json(j: &GeneratorJson) -> Result<Self> {
        let (generator, theta) = match j {
            GeneratorJson::Weyl { c, s, theta } => (Generator::Weyl(WeylZString::new((*c).into(), s.clone())?), *theta),
            GeneratorJson::Gellmann { indices, theta } => {
                (Generator::GellMann(GellMannString::new(indices.clone())?), *theta)
            }
        };
        if !theta.is_finite() {
            return Err(Error::InvalidParameters(format!("theta {theta} is not finite")));
        }
        Ok(DecomposeRequest { generator, theta })
    }
}

/// Wire form of a generator with its angle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum GeneratorJson {
    Weyl { c: crate::weyl::ComplexJson, s: Vec<u8>, theta: f64 },
    Gellmann { indices: Vec<u8>, theta: f64 },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::swap_gates;
    use crate::sim::{circuit_unitary, phase_distance};

    fn single_qutrit_exact(c: C64, theta: f64) -> DenseUnitary {
        let phases: Vec<f64> = (0..3).map(|j| -theta / 2.0 * 2.0 * (c * omega_pow(j)).re).collect();
        DenseUnitary::from_phases(&phases).unwrap()
    }

    fn dist(gates: Vec<Gate>, n: usize, want: &DenseUnitary) -> f64 {
        let u = circuit_unitary(&Circuit::from_gates(n, gates).unwrap()).unwrap();
        phase_distance(&u, want).unwrap()
    }

    #[test]
    fn rotation_synthesis_layouts() {
        assert_eq!(rotation_synthesis(0, C64::new(0.0, 1.0), 0.4).unwrap().len(), 1);
        let two = rotation_synthesis(0, C64::new(1.0, 0.0), 0.4).unwrap();
        assert_eq!(two.len(), 2);
        assert!(matches!(two[0], Gate::RotZ { sub: Subspace::S01, .. }));
        assert!(matches!(two[1], Gate::RotZ { sub: Subspace::S02, .. }));
        let c = C64::new(3f64.sqrt(), 1.0) / 2.0;
        let three = rotation_synthesis(0, c, 0.7).unwrap();
        assert_eq!(three.len(), 3);
        assert!(dist(three, 1, &single_qutrit_exact(c, 0.7)) < 1e-10);
        assert_eq!(rotation_synthesis(0, C64::new(0.0, 0.0), 1.0), Err(Error::ZeroCoefficient));
    }

    #[test]
    fn compact_matches_literal() {
        for (re, im) in [(1.0, 0.0), (0.0, -2.0), (0.3, 0.9), (-0.5, 0.5 * 3f64.sqrt()), (0.7, -1.1)] {
            let c = C64::new(re, im);
            for theta in [0.0, 0.3, -2.2] {
                let want = single_qutrit_exact(c, theta);
                assert!(dist(compact_rotations(0, c, theta), 1, &want) < 1e-12);
                assert!(dist(rotation_synthesis(0, c, theta).unwrap(), 1, &want) < 1e-12);
            }
        }
        // c = iω² makes c·ω imaginary, so d_1 = 0 and a single R02 remains.
        let r = compact_rotations(0, C64::new(0.0, 1.0) * omega_pow(2), 1.0);
        assert!(matches!(r[..], [Gate::RotZ { sub: Subspace::S02, .. }]));
    }

    #[test]
    fn weyl_fig_example() {
        let w = WeylZString::new(C64::new(0.0, 0.8), vec![2, 1, 2]).unwrap();
        let c = decompose_weyl(&w, 0.9).unwrap();
        let counts = count_gates(&c);
        assert_eq!((counts.cx_count, counts.rotation_count), (6, 1));
        let d = phase_distance(&circuit_unitary(&c).unwrap(), &weyl_exponential(&w, 0.9).unwrap()).unwrap();
        assert!(d < 1e-9);
    }

    #[test]
    fn weyl_two_qutrit_shape() {
        let w = WeylZString::new(C64::new(1.0, 0.0), vec![1]).unwrap();
        let c = decompose_weyl(&w, 0.5).unwrap();
        let g = c.gates();
        assert_eq!(g[0], Gate::cx(0, 1));
        assert_eq!(*g.last().unwrap(), Gate::cx_dag(0, 1));
        let zero = decompose_weyl(&w, 0.0).unwrap();
        let d = phase_distance(&circuit_unitary(&zero).unwrap(), &DenseUnitary::identity(2).unwrap()).unwrap();
        assert!(d < 1e-15);
    }

    #[test]
    fn gray_orders() {
        let order = |n| gray_order(&expand_closed_form(&GellMannString::new(vec![3; n]).unwrap()).unwrap()).unwrap();
        assert_eq!(order(2), vec![0, 1]);
        assert_eq!(order(3), vec![0, 1, 3, 2]);
        assert_eq!(order(4), vec![0, 1, 3, 2, 6, 7, 5, 4]);
        let mut exp = expand_closed_form(&GellMannString::new(vec![3, 8, 8]).unwrap()).unwrap();
        exp.terms.pop();
        assert_eq!(gray_order(&exp), Err(Error::IncompleteExpansion { found: 3, expected: 4 }));
    }

    #[test]
    fn small_string_counts() {
        let cnt = |v: Vec<u8>| count_gates(&decompose_gellmann(&GellMannString::new(v).unwrap(), 0.3).unwrap());
        let c = cnt(vec![3, 3]);
        assert_eq!((c.cx_count, c.rotation_count), (3, 4));
        assert_eq!(cnt(vec![3, 3, 8]).cx_count, 7);
        let c = cnt(vec![3, 3, 8, 3]);
        assert_eq!((c.cx_count, c.rotation_count), (13, 8));
    }

    #[test]
    fn alternative_block_orders_agree() {
        let g = GellMannString::new(vec![8, 3, 3]).unwrap();
        let exp = expand_closed_form(&g).unwrap();
        let want = gellmann_exponential(&g, 0.77).unwrap();
        for order in [[0, 1, 3, 2], [0, 2, 3, 1]] {
            let c = decompose_expansion(&exp, &order, 0.77).unwrap();
            assert_eq!(count_gates(&c).cx_count, 7);
            assert!(phase_distance(&circuit_unitary(&c).unwrap(), &want).unwrap() < 1e-9);
        }
    }

    #[test]
    fn merge_cancels_and_combines() {
        let c = Circuit::from_gates(
            3,
            vec![Gate::cx(0, 2), Gate::cx(1, 2), Gate::cx_dag(0, 2), Gate::cx(1, 2), Gate::cx(0, 1)],
        )
        .unwrap();
        assert_eq!(merge_cx_runs(&c).gates(), &[Gate::cx_dag(1, 2), Gate::cx(0, 1)]);
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_gates(&Circuit::new(3)), GateCounts::default());
        let swap = Circuit::from_gates(2, swap_gates(0, 1).to_vec()).unwrap();
        let c = count_gates(&swap);
        assert_eq!((c.cx_count, c.single_qutrit_count, c.depth), (3, 1, 4));
        let rot = Circuit::from_gates(
            2,
            vec![Gate::rz(1, Subspace::S01, 0.1), Gate::rz(1, Subspace::S02, 0.1), Gate::rx(0, Subspace::S01, 1.0)],
        )
        .unwrap();
        assert_eq!(count_gates(&rot).depth, 1);
    }

    #[test]
    fn generator_json_round_trip() {
        let r =
            DecomposeRequest { generator: Generator::GellMann(GellMannString::new(vec![3, 8]).unwrap()), theta: 0.5 };
        let s = serde_json::to_string(&r.to_json()).unwrap();
        assert!(s.contains("\"type\":\"gellmann\""));
        let back = DecomposeRequest::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, r);
        let w: GeneratorJson =
            serde_json::from_str(r#"{"type":"weyl","c":{"re":1.0,"im":0.0},"s":[1,2],"theta":0.1}"#).unwrap();
        assert_eq!(DecomposeRequest::from_json(&w).unwrap().num_qutrits(), 3);
    }
}
