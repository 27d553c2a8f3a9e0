use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::exec::{map_slice, Exec};

use super::gf3::{parity_map_of_circuit, RowOp, TernaryParityMap};
use super::topology::{decreasing_in, steiner_in, Topology};

/// One reduction step with the phase that produced it
/// (1 = lower elimination, 2 = upper elimination, 3 = diagonal fix-up).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoggedOp {
    pub step: u8,
    #[serde(flatten)]
    pub op: RowOp,
}

/// Result of Steiner-Gauss reduction of a parity map P.
///
/// The row operations reduce P to the identity. Read as a circuit they form
/// `reduction` (C), and `implementation()` = C⁻¹ realises P.
#[derive(Clone, Debug, PartialEq)]
pub struct Synthesis {
    ops: Vec<LoggedOp>,
    reduction: Circuit,
}

impl Synthesis {
    pub fn ops(&self) -> &[LoggedOp] {
        &self.ops
    }

    pub fn reduction(&self) -> &Circuit {
        &self.reduction
    }

    pub fn implementation(&self) -> Circuit {
        self.reduction.inverse()
    }

    /// CX and CX† gates.
    pub fn cx_count(&self) -> usize {
        self.ops.iter().filter(|o| !matches!(o.op, RowOp::Double { .. })).count()
    }

    pub fn double_count(&self) -> usize {
        self.ops.len() - self.cx_count()
    }
}

fn inverse(op: RowOp) -> RowOp {
    match op {
        RowOp::Add { src, dst } => RowOp::Sub { src, dst },
        RowOp::Sub { src, dst } => RowOp::Add { src, dst },
        RowOp::Double { row } => RowOp::Double { row },
    }
}

fn undoes(a: RowOp, b: RowOp) -> bool {
    !matches!(a, RowOp::Double { .. }) && inverse(a) == b
}

struct Work {
    q: TernaryParityMap,
    log: Vec<LoggedOp>,
    step: u8,
}

impl Work {
    /// Applies and logs `op`; an op that undoes the previous one cancels it.
    fn op(&mut self, op: RowOp) {
        self.q.apply_op(op).expect("row op indices are in range");
        match self.log.last() {
            Some(last) if last.step == self.step && undoes(last.op, op) => {
                self.log.pop();
            }
            _ => self.log.push(LoggedOp { step: self.step, op }),
        }
        if self.step == 2 {
            assert!(self.q.is_upper_triangular(), "upper elimination left triangular form");
        }
    }

    fn val(&self, r: usize, c: usize) -> u8 {
        self.q.get(r, c)
    }

    /// Accumulates column `col` down `chain` (chain[0] must be nonzero there),
    /// choosing add or subtract so every visited row stays nonzero.
    fn cascade(&mut self, chain: &[usize], col: usize) -> Vec<RowOp> {
        let mut done = Vec::with_capacity(chain.len().saturating_sub(1));
        for w in chain.windows(2) {
            let (src, dst) = (w[0], w[1]);
            let (a, b) = (self.val(dst, col), self.val(src, col));
            debug_assert!(b != 0);
            let op = if (a + b) % 3 != 0 { RowOp::Add { src, dst } } else { RowOp::Sub { src, dst } };
            self.op(op);
            done.push(op);
        }
        done
    }

    fn undo(&mut self, ops: &[RowOp]) {
        for &op in ops.iter().rev() {
            self.op(inverse(op));
        }
    }

    /// Zeroes Q[target][col] using the row at `from`, which must be nonzero there.
    fn clear(&mut self, from: usize, target: usize, col: usize) {
        let (a, b) = (self.val(target, col), self.val(from, col));
        let op = if (a + b) % 3 == 0 {
            RowOp::Add { src: from, dst: target }
        } else {
            RowOp::Sub { src: from, dst: target }
        };
        self.op(op);
        assert_eq!(self.val(target, col), 0);
    }

    /// Clears column `col` at every terminal through the tree rooted at `col`.
    fn eliminate(&mut self, tree: &super::topology::SteinerTree, col: usize) {
        let mut terms: Vec<usize> = tree.terminals().iter().copied().filter(|&t| t != col).collect();
        terms.sort_by_key(|&t| (tree.depth(t), t));
        for t in terms {
            let path = tree.path_from_root(t);
            let chain = &path[..path.len() - 1];
            let ops = self.cascade(chain, col);
            self.clear(*chain.last().unwrap(), t, col);
            self.undo(&ops);
        }
    }
}

/// Routes an invertible parity map onto a topology.
///
/// Works in position space (qutrit `order[p]` becomes p). Lower elimination
/// only uses qutrits at positions ≥ the current column; upper elimination
/// uses decreasing trees so the matrix stays upper triangular throughout.
pub fn steiner_gauss_synthesize(p: &TernaryParityMap, topo: &Topology) -> Result<Synthesis> {
    let n = p.n();
    if n != topo.n() {
        return Err(Error::DimensionMismatch { expected: topo.n(), actual: n });
    }
    if !p.is_invertible() {
        return Err(Error::NotInvertible);
    }
    let order = topo.order();
    let rows = (0..n).map(|i| (0..n).map(|j| p.get(order[i], order[j])).collect()).collect();
    let adj = topo.position_adjacency();
    let mut w = Work { q: TernaryParityMap::new(rows)?, log: Vec::new(), step: 1 };

    for c in 0..n {
        let allowed = |v: usize| v >= c;
        if w.val(c, c) == 0 {
            let cands: Vec<usize> = (c + 1..n).filter(|&j| w.val(j, c) != 0).collect();
            let mut best = None;
            for &j in &cands {
                let t = steiner_in(&adj, allowed, &[j], c)?;
                let d = t.depth(j);
                if best.as_ref().is_none_or(|(bd, bj, _)| (d, j) < (*bd, *bj)) {
                    best = Some((d, j, t));
                }
            }
            let (_, j, t) = best.ok_or(Error::NotInvertible)?;
            let mut chain = t.path_from_root(j);
            chain.reverse();
            let ops = w.cascade(&chain, c);
            w.undo(&ops[..ops.len() - 1]);
        }
        let mut terms: Vec<usize> = (c + 1..n).filter(|&j| w.val(j, c) != 0).collect();
        if terms.is_empty() {
            continue;
        }
        terms.push(c);
        let tree = steiner_in(&adj, allowed, &terms, c)?;
        w.eliminate(&tree, c);
        assert!(w.val(c, c) != 0 && (c + 1..n).all(|j| w.val(j, c) == 0));
    }
    assert!(w.q.is_upper_triangular());

    w.step = 2;
    for c in (1..n).rev() {
        let mut terms: Vec<usize> = (0..c).filter(|&j| w.val(j, c) != 0).collect();
        if terms.is_empty() {
            continue;
        }
        terms.push(c);
        let tree = decreasing_in(&adj, &terms, c)?;
        w.eliminate(&tree, c);
    }

    w.step = 3;
    for c in 0..n {
        if w.val(c, c) == 2 {
            w.op(RowOp::Double { row: c });
        }
    }
    assert!(w.q.is_identity());

    let ops: Vec<LoggedOp> =
        w.log.into_iter().map(|l| LoggedOp { step: l.step, op: l.op.remap(|x| order[x]) }).collect();
    let reduction = Circuit::from_gates(n, ops.iter().map(|l| l.op.gate()).collect())?;
    Ok(Synthesis { ops, reduction })
}

/// CX count of Gauss-Jordan elimination done as if all-to-all, with each
/// operation between positions at distance d priced as a SWAP chain of
/// 3·2(d−1) gates plus the CX itself, i.e. 6d − 5.
pub fn naive_baseline_cx_count(p: &TernaryParityMap, topo: &Topology) -> Result<usize> {
    let n = p.n();
    if n != topo.n() {
        return Err(Error::DimensionMismatch { expected: topo.n(), actual: n });
    }
    let order = topo.order();
    let rows = (0..n).map(|i| (0..n).map(|j| p.get(order[i], order[j])).collect()).collect();
    let mut q = TernaryParityMap::new(rows)?;
    let cost = |a: usize, b: usize| 6 * a.abs_diff(b) - 5;
    let mut total = 0;
    for c in 0..n {
        if q.get(c, c) == 0 {
            let j = (c + 1..n).find(|&j| q.get(j, c) != 0).ok_or(Error::NotInvertible)?;
            q.apply_op(RowOp::Add { src: j, dst: c })?;
            total += cost(j, c);
        }
        for r in (0..n).filter(|&r| r != c) {
            let (a, b) = (q.get(r, c), q.get(c, c));
            if a != 0 {
                let op = if (a + b) % 3 == 0 { RowOp::Add { src: c, dst: r } } else { RowOp::Sub { src: c, dst: r } };
                q.apply_op(op)?;
                total += cost(r, c);
            }
        }
    }
    Ok(total)
}

/// Outcome of checking a circuit against a parity map on a topology.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteCheck {
    pub basis_ok: usize,
    pub basis_total: usize,
    pub off_edge_gates: usize,
    pub parity_matches: bool,
}

impl RouteCheck {
    pub fn ok(&self) -> bool {
        self.basis_ok == self.basis_total && self.off_edge_gates == 0 && self.parity_matches
    }
}

/// Checks that `circuit` maps every unit vector e_i to column i of P and only
/// uses two-qutrit gates on topology edges.
pub fn verify_route(p: &TernaryParityMap, topo: &Topology, circuit: &Circuit) -> Result<RouteCheck> {
    let n = p.n();
    if circuit.num_qutrits() != n || topo.n() != n {
        return Err(Error::DimensionMismatch { expected: n, actual: circuit.num_qutrits() });
    }
    let mut basis_ok = 0;
    for i in 0..n {
        let mut e = vec![0u8; n];
        e[i] = 1;
        if circuit.apply_to_trits(&e)? == p.apply(&e)? {
            basis_ok += 1;
        }
    }
    let off_edge_gates = circuit
        .gates()
        .iter()
        .filter(|g| {
            let q = g.qutrits();
            q.len() == 2 && !topo.is_edge(q[0], q[1])
        })
        .count();
    let parity_matches = parity_map_of_circuit(circuit).map(|m| m == *p).unwrap_or(false);
    Ok(RouteCheck { basis_ok, basis_total: n, off_edge_gates, parity_matches })
}

/// Per-matrix result of [`batch_route`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BatchItem {
    pub cx_count: usize,
    pub naive_cx: usize,
    pub check: RouteCheck,
}

/// Synthesizes and verifies many maps, in parallel when `exec` allows.
pub fn batch_route(exec: Exec, maps: &[TernaryParityMap], topo: &Topology) -> Vec<Result<BatchItem>> {
    map_slice(exec, maps, |p| {
        let s = steiner_gauss_synthesize(p, topo)?;
        let check = verify_route(p, topo, &s.implementation())?;
        Ok(BatchItem { cx_count: s.cx_count(), naive_cx: naive_baseline_cx_count(p, topo)?, check })
    })
}
