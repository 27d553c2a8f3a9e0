//! Weyl Z-strings, diagonal Gell-Mann strings, and the expansion of the
//! latter in the former.
//!
//! A Weyl Z-string of weight N is `c·Z^{s_1}⊗…⊗Z^{s_{N-1}}⊗Z + h.c.` with
//! `s_j ∈ {1,2}`. Exponent strings are indexed little-endian:
//! `s_j = 1 + ((k >> (j-1)) & 1)`.

use ndarray::Array2;
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gate::omega_pow;
use crate::sim::{pow3, MAX_UNITARY_QUTRITS};

/// Largest weight accepted by the closed-form expansion.
pub const MAX_CLOSED_FORM_WEIGHT: usize = 16;
/// Reconstruction tolerance of the brute-force oracle (Frobenius).
pub const ORACLE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct WeylZString {
    pub c: C64,
    /// Exponents of the first N−1 factors; the last factor is always Z.
    pub s: Vec<u8>,
}

impl WeylZString {
    pub fn new(c: C64, s: Vec<u8>) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::UnsupportedWeight { weight: 1, min: 2, max: usize::MAX });
        }
        check_exponents(&s)?;
        Ok(WeylZString { c, s })
    }

    pub fn weight(&self) -> usize {
        self.s.len() + 1
    }

    /// Exponent of every factor, including the trailing 1.
    pub fn full_exponents(&self) -> Vec<u8> {
        let mut e = self.s.clone();
        e.push(1);
        e
    }

    /// Diagonal of the (diagonal, Hermitian) operator.
    pub fn diagonal(&self) -> Result<Vec<f64>> {
        let n = self.weight();
        if n > MAX_UNITARY_QUTRITS {
            return Err(Error::DimensionCap { num_qutrits: n, max: MAX_UNITARY_QUTRITS });
        }
        let e = self.full_exponents();
        Ok((0..pow3(n)).map(|x| 2.0 * (self.c * omega_pow(weyl_phase_exponent(&e, x, n))).re).collect())
    }
}

/// Σ_j e_j·x_j for basis index `x` over `n` qutrits.
fn weyl_phase_exponent(e: &[u8], x: usize, n: usize) -> i64 {
    let mut r = x;
    let mut acc = 0i64;
    for q in (0..n).rev() {
        acc += e[q] as i64 * (r % 3) as i64;
        r /= 3;
    }
    acc
}

fn check_exponents(s: &[u8]) -> Result<()> {
    match s.iter().find(|&&v| v != 1 && v != 2) {
        Some(&v) => Err(Error::InvalidSymbol { symbol: v as i64, context: "Weyl exponent" }),
        None => Ok(()),
    }
}

/// Tensor product of diagonal Gell-Mann matrices, entries in {3, 8}.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GellMannString {
    indices: Vec<u8>,
}

impl GellMannString {
    pub fn new(indices: Vec<u8>) -> Result<Self> {
        if indices.len() < 2 {
            return Err(Error::UnsupportedWeight { weight: indices.len(), min: 2, max: usize::MAX });
        }
        if let Some(&v) = indices.iter().find(|&&v| v != 3 && v != 8) {
            return Err(Error::InvalidSymbol { symbol: v as i64, context: "diagonal Gell-Mann index" });
        }
        Ok(GellMannString { indices })
    }

    pub fn indices(&self) -> &[u8] {
        &self.indices
    }

    pub fn weight(&self) -> usize {
        self.indices.len()
    }

    pub fn n3(&self) -> usize {
        self.indices.iter().filter(|&&i| i == 3).count()
    }

    /// Diagonal of λ^{i_1}⊗…⊗λ^{i_N}.
    pub fn diagonal(&self) -> Result<Vec<f64>> {
        let n = self.weight();
        if n > MAX_UNITARY_QUTRITS {
            return Err(Error::DimensionCap { num_qutrits: n, max: MAX_UNITARY_QUTRITS });
        }
        let mut d = vec![1.0];
        for &i in &self.indices {
            let f: Vec<f64> = gellmann_matrix(i as usize)?.diag().iter().map(|z| z.re).collect();
            d = d.iter().flat_map(|&a| f.iter().map(move |&v| a * v)).collect();
        }
        Ok(d)
    }

    /// All 2^N index strings of weight `n`, in lexicographic order with 3 < 8.
    pub fn all(n: usize) -> Vec<GellMannString> {
        (0..1usize << n)
            .map(|b| GellMannString {
                indices: (0..n).map(|q| if (b >> (n - 1 - q)) & 1 == 0 { 3 } else { 8 }).collect(),
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeylTerm {
    pub k: usize,
    pub s: Vec<u8>,
    pub c: C64,
}

/// λ^{i_1}⊗…⊗λ^{i_N} = Σ_k (c_k W_k + h.c.), one term per exponent string.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylExpansion {
    pub indices: Vec<u8>,
    pub terms: Vec<WeylTerm>,
}

impl WeylExpansion {
    pub fn weight(&self) -> usize {
        self.indices.len()
    }

    pub fn coefficient(&self, k: usize) -> Option<C64> {
        self.terms.iter().find(|t| t.k == k).map(|t| t.c)
    }

    /// Diagonal of Σ_k (c_k W_k + h.c.).
    pub fn reconstruct_diagonal(&self) -> Result<Vec<f64>> {
        let n = self.weight();
        if n > MAX_UNITARY_QUTRITS {
            return Err(Error::DimensionCap { num_qutrits: n, max: MAX_UNITARY_QUTRITS });
        }
        let mut acc = vec![0.0; pow3(n)];
        for t in &self.terms {
            let w = WeylZString::new(t.c, t.s.clone())?;
            for (a, v) in acc.iter_mut().zip(w.diagonal()?) {
                *a += v;
            }
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> WeylExpansionJson {
        WeylExpansionJson {
            indices: self.indices.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| WeylTermJson { k: t.k, s: t.s.clone(), c: ComplexJson { re: t.c.re, im: t.c.im } })
                .collect(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub re: f64,
    pub im: f64,
}

impl From<ComplexJson> for C64 {
    fn from(c: ComplexJson) -> C64 {
        C64::new(c.re, c.im)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylTermJson {
    pub k: usize,
    pub s: Vec<u8>,
    pub c: ComplexJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeylExpansionJson {
    pub indices: Vec<u8>,
    pub terms: Vec<WeylTermJson>,
}

/// Exponent string of index `k` for a weight-`n` Weyl string.
pub fn s_from_index(k: usize, n: usize) -> Result<Vec<u8>> {
    if n < 2 || n > usize::BITS as usize {
        return Err(Error::UnsupportedWeight { weight: n, min: 2, max: usize::BITS as usize });
    }
    let bound = 1usize << (n - 1);
    if k >= bound {
        return Err(Error::IndexOutOfRange { index: k, bound });
    }
    Ok((0..n - 1).map(|j| 1 + ((k >> j) & 1) as u8).collect())
}

pub fn index_from_s(s: &[u8]) -> Result<usize> {
    check_exponents(s)?;
    Ok(s.iter().enumerate().map(|(j, &v)| ((v - 1) as usize) << j).sum())
}

/// Gell-Mann matrix λ^index; λ⁰ is the identity.
pub fn gellmann_matrix(index: usize) -> Result<Array2<C64>> {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let i = C64::new(0.0, 1.0);
    let mut m = Array2::from_elem((3, 3), z);
    match index {
        0 => m = Array2::from_diag_elem(3, one),
        1 => {
            m[[0, 1]] = one;
            m[[1, 0]] = one;
        }
        2 => {
            m[[0, 1]] = -i;
            m[[1, 0]] = i;
        }
        3 => {
            m[[0, 0]] = one;
            m[[1, 1]] = -one;
        }
        4 => {
            m[[0, 2]] = one;
            m[[2, 0]] = one;
        }
        5 => {
            m[[0, 2]] = -i;
            m[[2, 0]] = i;
        }
        6 => {
            m[[1, 2]] = one;
            m[[2, 1]] = one;
        }
        7 => {
            m[[1, 2]] = -i;
            m[[2, 1]] = i;
        }
        8 => {
            let r = 1.0 / 3f64.sqrt();
            m[[0, 0]] = C64::new(r, 0.0);
            m[[1, 1]] = C64::new(r, 0.0);
            m[[2, 2]] = C64::new(-2.0 * r, 0.0);
        }
        _ => return Err(Error::IndexOutOfRange { index, bound: 9 }),
    }
    Ok(m)
}

/// λ̃ = −X λ X† for the diagonal Gell-Mann matrices.
pub fn tilde_lambda(index: usize) -> Result<Array2<C64>> {
    let d: [f64; 3] = match index {
        3 => [0.0, -1.0, 1.0],
        8 => {
            let r = 1.0 / 3f64.sqrt();
            [2.0 * r, -r, -r]
        }
        _ => return Err(Error::IndexOutOfRange { index, bound: 9 }),
    };
    Ok(Array2::from_diag(&ndarray::arr1(&d).mapv(|v| C64::new(v, 0.0))))
}

/// Expansion coefficients from the closed form.
///
/// With λ̃^i = −Xλ^iX† = Σ_s (a Z^s + h.c.) the tilde string has coefficients
/// `a_k = i^{n3}/√3^N · (−1)^f`, `f = Σ_{j: i_j = 3} (s_j − 1)`. Conjugating
/// back by X^{⊗N} multiplies each Z^s factor by ω^s, so
/// `c_k = (−1)^N a_k ω^n` with `n = Σ_j s_j` over all N factors (the last
/// one fixed to 1).
pub fn expand_closed_form(g: &GellMannString) -> Result<WeylExpansion> {
    let n = g.weight();
    if n > MAX_CLOSED_FORM_WEIGHT {
        return Err(Error::UnsupportedWeight { weight: n, min: 2, max: MAX_CLOSED_FORM_WEIGHT });
    }
    let n3 = g.n3();
    let i_pow = [C64::new(1.0, 0.0), C64::new(0.0, 1.0), C64::new(-1.0, 0.0), C64::new(0.0, -1.0)][n3 % 4];
    let norm = 3f64.powf(-(n as f64) / 2.0);
    let sign_n = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    let terms = (0..1usize << (n - 1))
        .map(|k| {
            let s = s_from_index(k, n)?;
            let full: Vec<u8> = s.iter().copied().chain(std::iter::once(1)).collect();
            let f: u32 = g.indices.iter().zip(&full).filter(|(&i, _)| i == 3).map(|(_, &sj)| (sj - 1) as u32).sum();
            let a = i_pow * norm * if f.is_multiple_of(2) { 1.0 } else { -1.0 };
            let phase: i64 = full.iter().map(|&v| v as i64).sum();
            Ok(WeylTerm { k, s, c: a * sign_n * omega_pow(phase) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WeylExpansion { indices: g.indices.clone(), terms })
}

/// Brute-force expansion by Weyl-basis orthogonality:
/// `c_k = Tr(W_k† M) / 3^N` with M formed densely, followed by a
/// reconstruction self-check.
pub fn expand_oracle(g: &GellMannString) -> Result<WeylExpansion> {
    let n = g.weight();
    if n > MAX_UNITARY_QUTRITS {
        return Err(Error::DimensionCap { num_qutrits: n, max: MAX_UNITARY_QUTRITS });
    }
    // M is diagonal because every factor is; check rather than assume.
    let mut m_diag = vec![C64::new(1.0, 0.0)];
    for &i in &g.indices {
        let f = gellmann_matrix(i as usize)?;
        let off: f64 = f.indexed_iter().filter(|((r, c), _)| r != c).map(|(_, z)| z.norm()).sum();
        if off != 0.0 {
            return Err(Error::InvalidSymbol { symbol: i as i64, context: "diagonal Gell-Mann index" });
        }
        let fd = f.diag().to_vec();
        m_diag = m_diag.iter().flat_map(|&a| fd.iter().map(move |&v| a * v)).collect();
    }
    let d = pow3(n);
    let terms = (0..1usize << (n - 1))
        .map(|k| {
            let s = s_from_index(k, n)?;
            let e: Vec<u8> = s.iter().copied().chain(std::iter::once(1)).collect();
            let tr: C64 = (0..d).map(|x| omega_pow(weyl_phase_exponent(&e, x, n)).conj() * m_diag[x]).sum();
            Ok(WeylTerm { k, s, c: tr / d as f64 })
        })
        .collect::<Result<Vec<_>>>()?;
    let exp = WeylExpansion { indices: g.indices.clone(), terms };
    let rec = exp.reconstruct_diagonal()?;
    let residual = rec.iter().zip(&m_diag).map(|(r, m)| (C64::new(*r, 0.0) - m).norm_sqr()).sum::<f64>().sqrt();
    if residual > ORACLE_TOL {
        return Err(Error::OracleMismatch { residual });
    }
    Ok(exp)
}
