//! Exact integer homology of cube complexes, Smith normal form, induced
//! maps on homology, and the long-exact-sequence rank identity for cones.
//!
//! Homology is computed stratum by stratum: the differential preserves the
//! (q, a) bidegree, so each stratum is an ordinary finite integer complex
//! indexed by h.

use crate::algebra::GenIdx;
use crate::complex::{CubeComplex, VertexMask};
use crate::error::{AkhError, Result};
use crate::sl2::{apply_j, Sl2Op};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

// ---------------------------------------------------------------------------
// Dense integer matrices
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigMat {
    pub rows: usize,
    pub cols: usize,
    data: Vec<BigInt>,
}

impl BigMat {
    pub fn zero(rows: usize, cols: usize) -> BigMat {
        BigMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> BigMat {
        let mut m = BigMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::from(1);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> BigMat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = BigMat::zero(r, c);
        for (i, row) in rows.into_iter().enumerate() {
            for (j, v) in row.into_iter().enumerate() {
                m[(i, j)] = BigInt::from(v);
            }
        }
        m
    }

    pub fn mul(&self, other: &BigMat) -> BigMat {
        assert_eq!(self.cols, other.rows);
        let mut out = BigMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let p = &self[(i, k)] * &other[(k, j)];
                    out[(i, j)] += p;
                }
            }
        }
        out
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    /// Horizontal concatenation [self | other].
    pub fn hcat(&self, other: &BigMat) -> BigMat {
        assert_eq!(self.rows, other.rows);
        let mut out = BigMat::zero(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row a += q * row b
    fn add_row(&mut self, a: usize, b: usize, q: &BigInt) {
        for j in 0..self.cols {
            let p = q * &self[(b, j)];
            self[(a, j)] += p;
        }
    }

    /// col a += q * col b
    fn add_col(&mut self, a: usize, b: usize, q: &BigInt) {
        for i in 0..self.rows {
            let p = q * &self[(i, b)];
            self[(i, a)] += p;
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self[(a, j)].clone();
            self[(a, j)] = v;
        }
    }

    fn negate_col(&mut self, a: usize) {
        for i in 0..self.rows {
            let v = -self[(i, a)].clone();
            self[(i, a)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for BigMat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for BigMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

// ---------------------------------------------------------------------------
// Smith normal form
// ---------------------------------------------------------------------------

/// U * A * V = D with U, V unimodular and D diagonal with a divisibility
/// chain. `u_inv` satisfies A = u_inv * D * v_inv (v_inv not tracked).
#[derive(Clone, Debug)]
pub struct SnfResult {
    pub divisors: Vec<BigInt>,
    pub rank: usize,
    pub u: Option<BigMat>,
    pub u_inv: Option<BigMat>,
    pub v: Option<BigMat>,
}

/// Exact Smith normal form with pivoting on entries of least absolute
/// value. Transform tracking is optional: `(want_u, want_v)`.
pub fn smith_normal_form(a: &BigMat, want_u: bool, want_v: bool) -> SnfResult {
    let mut m = a.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut u = want_u.then(|| BigMat::identity(rows));
    let mut u_inv = want_u.then(|| BigMat::identity(rows));
    let mut v = want_v.then(|| BigMat::identity(cols));

    let mut t = 0usize;
    while t < rows.min(cols) {
        // Pivot: least |value| nonzero in the trailing submatrix.
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if m[(i, j)].is_zero() {
                    continue;
                }
                match pivot {
                    None => pivot = Some((i, j)),
                    Some(p) => {
                        if m[(i, j)].abs() < m[p].abs() {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap_rows(t, pi);
        if let Some(u) = u.as_mut() {
            u.swap_rows(t, pi);
        }
        if let Some(ui) = u_inv.as_mut() {
            ui.swap_cols(t, pi);
        }
        m.swap_cols(t, pj);
        if let Some(v) = v.as_mut() {
            v.swap_cols(t, pj);
        }

        'reduce: loop {
            // Clear column t below the pivot.
            for i in t + 1..rows {
                if m[(i, t)].is_zero() {
                    continue;
                }
                let q = &m[(i, t)] / &m[(t, t)];
                let nq = -&q;
                m.add_row(i, t, &nq);
                if let Some(u) = u.as_mut() {
                    u.add_row(i, t, &nq);
                }
                if let Some(ui) = u_inv.as_mut() {
                    ui.add_col(t, i, &q);
                }
                if !m[(i, t)].is_zero() {
                    // Remainder is smaller than the pivot: promote it.
                    m.swap_rows(t, i);
                    if let Some(u) = u.as_mut() {
                        u.swap_rows(t, i);
                    }
                    if let Some(ui) = u_inv.as_mut() {
                        ui.swap_cols(t, i);
                    }
                    continue 'reduce;
                }
            }
            // Clear row t right of the pivot.
            for j in t + 1..cols {
                if m[(t, j)].is_zero() {
                    continue;
                }
                let q = &m[(t, j)] / &m[(t, t)];
                let nq = -&q;
                m.add_col(j, t, &nq);
                if let Some(v) = v.as_mut() {
                    v.add_col(j, t, &nq);
                }
                if !m[(t, j)].is_zero() {
                    m.swap_cols(t, j);
                    if let Some(v) = v.as_mut() {
                        v.swap_cols(t, j);
                    }
                    continue 'reduce;
                }
            }
            // Pivot must divide the whole trailing submatrix.
            let mut fixed = true;
            'divcheck: for i in t + 1..rows {
                for j in t + 1..cols {
                    if (&m[(i, j)] % &m[(t, t)]).is_zero() {
                        continue;
                    }
                    let one = BigInt::from(1);
                    m.add_row(t, i, &one);
                    if let Some(u) = u.as_mut() {
                        u.add_row(t, i, &one);
                    }
                    if let Some(ui) = u_inv.as_mut() {
                        let neg = BigInt::from(-1);
                        ui.add_col(i, t, &neg);
                    }
                    fixed = false;
                    break 'divcheck;
                }
            }
            if fixed {
                break;
            }
        }

        if m[(t, t)].is_negative() {
            m.negate_row(t);
            if let Some(u) = u.as_mut() {
                u.negate_row(t);
            }
            if let Some(ui) = u_inv.as_mut() {
                ui.negate_col(t);
            }
        }
        t += 1;
    }

    let rank = t;
    let divisors: Vec<BigInt> = (0..rank).map(|i| m[(i, i)].clone()).collect();
    debug_assert!(divisors
        .windows(2)
        .all(|w| (&w[1] % &w[0]).is_zero()));
    SnfResult {
        divisors,
        rank,
        u,
        u_inv,
        v,
    }
}

pub fn rank_of(a: &BigMat) -> usize {
    smith_normal_form(a, false, false).rank
}

/// Integer basis of ker(A) as the trailing columns of V.
pub fn kernel_basis(a: &BigMat) -> BigMat {
    let snf = smith_normal_form(a, false, true);
    let v = snf.v.unwrap();
    let k = a.cols - snf.rank;
    let mut out = BigMat::zero(a.cols, k);
    for j in 0..k {
        for i in 0..a.cols {
            out[(i, j)] = v[(i, snf.rank + j)].clone();
        }
    }
    out
}

/// Exact linear solver for a fixed matrix K, factored once.
pub struct ExactSolver {
    rows: usize,
    cols: usize,
    snf: SnfResult,
}

impl ExactSolver {
    pub fn new(k: &BigMat) -> ExactSolver {
        ExactSolver {
            rows: k.rows,
            cols: k.cols,
            snf: smith_normal_form(k, true, true),
        }
    }

    /// Solve K x = b over the integers, if possible.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(self.rows, b.len());
        let u = self.snf.u.as_ref().unwrap();
        // D (V^-1 x) = U b; solve componentwise.
        let mut ub = vec![BigInt::zero(); self.rows];
        for i in 0..self.rows {
            for j in 0..self.rows {
                let p = &u[(i, j)] * &b[j];
                ub[i] += p;
            }
        }
        let mut y = vec![BigInt::zero(); self.cols];
        for i in 0..self.rows {
            if i < self.snf.rank {
                let (q, r) = num_integer::div_rem(ub[i].clone(), self.snf.divisors[i].clone());
                if !r.is_zero() {
                    return None;
                }
                y[i] = q;
            } else if !ub[i].is_zero() {
                return None;
            }
        }
        let v = self.snf.v.as_ref().unwrap();
        let mut x = vec![BigInt::zero(); self.cols];
        for i in 0..self.cols {
            for j in 0..self.cols {
                let p = &v[(i, j)] * &y[j];
                x[i] += p;
            }
        }
        Some(x)
    }
}

/// Solve K x = b exactly, if possible. K need not be square.
pub fn solve_exact(k: &BigMat, b: &[BigInt]) -> Option<Vec<BigInt>> {
    ExactSolver::new(k).solve(b)
}

// ---------------------------------------------------------------------------
// Homology tables
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HomologySummand {
    pub rank: usize,
    /// Elementary divisors > 1 in divisibility order (as decimal strings
    /// in serialized form they stay exact).
    pub torsion: Vec<u64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct HomologyTable {
    pub entries: BTreeMap<(i64, i64, i64), HomologySummand>,
}

impl HomologyTable {
    pub fn get(&self, h: i64, q: i64, a: i64) -> Option<&HomologySummand> {
        self.entries.get(&(h, q, a))
    }

    pub fn total_rank(&self) -> usize {
        self.entries.values().map(|s| s.rank).sum()
    }
}

/// Generators of one (q, a) stratum grouped by homological degree.
pub struct Stratum {
    pub q: i64,
    pub a: i64,
    /// h -> ordered generators (mask, gen).
    pub gens: BTreeMap<i64, Vec<(VertexMask, GenIdx)>>,
}

impl Stratum {
    pub fn index_of(&self, h: i64, mask: VertexMask, g: GenIdx) -> Option<usize> {
        self.gens.get(&h)?.iter().position(|&(m, x)| (m, x) == (mask, g))
    }

    pub fn dim(&self, h: i64) -> usize {
        self.gens.get(&h).map_or(0, |v| v.len())
    }
}

pub fn stratify(c: &CubeComplex) -> BTreeMap<(i64, i64), Stratum> {
    let mut strata: BTreeMap<(i64, i64), Stratum> = BTreeMap::new();
    for mask in 0..c.n_vertices() as VertexMask {
        for x in 0..c.basis_size(mask) as GenIdx {
            let d = c.degree(mask, x);
            strata
                .entry((d.q, d.a))
                .or_insert_with(|| Stratum {
                    q: d.q,
                    a: d.a,
                    gens: BTreeMap::new(),
                })
                .gens
                .entry(d.h)
                .or_default()
                .push((mask, x));
        }
    }
    strata
}

/// Signed boundary matrix d: C^h -> C^(h+1) of one stratum
/// (rows = target generators, cols = source generators).
pub fn boundary_matrix(c: &CubeComplex, s: &Stratum, h: i64) -> BigMat {
    let sources = s.gens.get(&h).cloned().unwrap_or_default();
    let targets = s.gens.get(&(h + 1)).cloned().unwrap_or_default();
    let tpos: BTreeMap<(VertexMask, GenIdx), usize> = targets
        .iter()
        .enumerate()
        .map(|(i, &k)| (k, i))
        .collect();
    let mut m = BigMat::zero(targets.len(), sources.len());
    for (j, &(mask, x)) in sources.iter().enumerate() {
        for dir in 0..c.ambient_dim {
            if mask & (1 << dir) != 0 {
                continue;
            }
            let to = mask | (1 << dir);
            for &(y, coeff) in c.apply_signed_edge(mask, dir, x).iter() {
                let i = tpos[&(to, y)];
                m[(i, j)] += BigInt::from(coeff);
            }
        }
    }
    m
}

/// Exact integer homology per tri-degree. Refuses complexes with d^2 != 0.
pub fn homology(c: &CubeComplex) -> Result<HomologyTable> {
    if let Some(cex) = c.d_squared_counterexample() {
        return Err(AkhError::NotAComplex(cex));
    }
    Ok(homology_unchecked(c))
}

pub fn homology_unchecked(c: &CubeComplex) -> HomologyTable {
    let strata = stratify(c);
    let mut table = HomologyTable::default();
    let results: Vec<((i64, i64), Vec<(i64, HomologySummand)>)> = strata
        .iter()
        .collect::<Vec<_>>()
        .into_iter()
        .map(|(&(q, a), s)| {
            let hs: Vec<i64> = s.gens.keys().copied().collect();
            let mut snfs: BTreeMap<i64, SnfResult> = BTreeMap::new();
            for &h in &hs {
                snfs.insert(h, smith_normal_form(&boundary_matrix(c, s, h), false, false));
            }
            let mut out = Vec::new();
            for &h in &hs {
                let dim = s.dim(h);
                let r_out = snfs[&h].rank;
                let r_in = snfs.get(&(h - 1)).map_or(0, |r| r.rank);
                let rank = dim - r_out - r_in;
                let torsion: Vec<u64> = snfs
                    .get(&(h - 1))
                    .map(|r| {
                        r.divisors
                            .iter()
                            .filter(|d| **d > BigInt::from(1))
                            .map(|d| d.to_u64().expect("torsion order fits in u64"))
                            .collect()
                    })
                    .unwrap_or_default();
                if rank > 0 || !torsion.is_empty() {
                    out.push((h, HomologySummand { rank, torsion }));
                }
            }
            ((q, a), out)
        })
        .collect();
    for ((q, a), rows) in results {
        for (h, summand) in rows {
            table.entries.insert((h, q, a), summand);
        }
    }
    table
}

// ---------------------------------------------------------------------------
// Induced maps on homology
// ---------------------------------------------------------------------------

/// A free-part homology basis of one stratum degree: cycles spanning
/// H^h / torsion, as columns in the chain coordinates of the stratum.
struct FreeBasis {
    /// Chain vectors of the representing cycles (dim x rank).
    cycles: BigMat,
    /// Kernel basis K (dim x k) and its factored solver.
    kernel: BigMat,
    solver: ExactSolver,
    /// Projection data: row-transform U of SNF(X) where K X = boundary.
    u_quot: BigMat,
    /// Divisors of SNF(X); rows with index >= rank are the free part.
    rank_quot: usize,
    divisors: Vec<BigInt>,
}

fn free_basis(c: &CubeComplex, s: &Stratum, h: i64) -> FreeBasis {
    let d_out = boundary_matrix(c, s, h);
    let d_in = boundary_matrix(c, s, h - 1);
    let kernel = kernel_basis(&d_out);
    let solver = ExactSolver::new(&kernel);
    let k = kernel.cols;
    // Express the incoming boundaries in kernel coordinates.
    let mut x = BigMat::zero(k, d_in.cols);
    for j in 0..d_in.cols {
        let b = d_in.col(j);
        let sol = solver
            .solve(&b)
            .expect("boundaries lie in the saturated kernel");
        for i in 0..k {
            x[(i, j)] = sol[i].clone();
        }
    }
    let snf = smith_normal_form(&x, true, false);
    let u_inv = snf.u_inv.clone().unwrap();
    let rank_quot = snf.rank;
    let free_rank = k - rank_quot;
    // Lifts of the free generators: columns rank_quot.. of K * U^-1.
    let ku = kernel.mul(&u_inv);
    let mut cycles = BigMat::zero(kernel.rows, free_rank);
    for j in 0..free_rank {
        for i in 0..kernel.rows {
            cycles[(i, j)] = ku[(i, rank_quot + j)].clone();
        }
    }
    FreeBasis {
        cycles,
        kernel,
        solver,
        u_quot: snf.u.unwrap(),
        rank_quot,
        divisors: snf.divisors,
    }
}

impl FreeBasis {
    fn free_rank(&self) -> usize {
        self.kernel.cols - self.rank_quot
    }

    /// Coordinates of a cycle (chain vector) in the free-part basis,
    /// reducing modulo boundaries and torsion.
    fn coords(&self, w: &[BigInt]) -> Option<Vec<BigInt>> {
        let y = self.solver.solve(w)?;
        let mut uy = vec![BigInt::zero(); self.kernel.cols];
        for i in 0..self.kernel.cols {
            for j in 0..self.kernel.cols {
                let p = &self.u_quot[(i, j)] * &y[j];
                uy[i] += p;
            }
        }
        // Torsion rows must be divisible? No: they reduce mod d_i; the free
        // part is the tail.
        let _ = &self.divisors;
        Some(uy[self.rank_quot..].to_vec())
    }
}

/// The maps induced by J on H/torsion, one integer matrix per (h, q, a).
pub struct InducedMaps {
    pub op: Sl2Op,
    pub table: BTreeMap<(i64, i64, i64), BigMat>,
    pub source_ranks: BTreeMap<(i64, i64, i64), usize>,
}

impl InducedMaps {
    pub fn matrix(&self, h: i64, q: i64, a: i64) -> Option<&BigMat> {
        self.table.get(&(h, q, a))
    }
}

/// Compute the chain-level image of J on a stratum vector and express it in
/// the target stratum's chain coordinates.
fn j_chain_image(
    c: &CubeComplex,
    strata: &BTreeMap<(i64, i64), Stratum>,
    op: Sl2Op,
    s: &Stratum,
    h: i64,
    vec: &[BigInt],
) -> ((i64, i64), Vec<BigInt>) {
    let (dq, da) = op.bidegree();
    let target_key = (s.q + dq, s.a + da);
    let tgt_len = strata
        .get(&target_key)
        .map_or(0, |t| t.dim(h));
    let mut out = vec![BigInt::zero(); tgt_len];
    if tgt_len == 0 {
        return (target_key, out);
    }
    let t = &strata[&target_key];
    let gens = s.gens.get(&h).cloned().unwrap_or_default();
    for (j, &(mask, x)) in gens.iter().enumerate() {
        if vec[j].is_zero() {
            continue;
        }
        let res = c.resolution_at(mask);
        for (y, coeff) in apply_j(op, res, x).iter() {
            let i = t
                .index_of(h, mask, y)
                .expect("J preserves h and shifts (q,a) by its bidegree");
            let p = coeff * &vec[j];
            out[i] += p;
        }
    }
    (target_key, out)
}

/// Induced map of J on homology mod torsion, per tri-degree.
pub fn induced_map(d: &crate::diagram::AnnularDiagram, op: Sl2Op) -> Result<InducedMaps> {
    let c = crate::complex::build_ckh(d);
    let strata = stratify(&c);
    let mut bases: BTreeMap<(i64, i64, i64), FreeBasis> = BTreeMap::new();
    for (&(q, a), s) in &strata {
        let hs: Vec<i64> = s.gens.keys().copied().collect();
        for h in hs {
            let fb = free_basis(&c, s, h);
            if fb.free_rank() > 0 || fb.kernel.cols > 0 {
                bases.insert((h, q, a), fb);
            }
        }
    }
    let mut table = BTreeMap::new();
    let mut source_ranks = BTreeMap::new();
    for (&(h, q, a), fb) in &bases {
        let src_rank = fb.free_rank();
        source_ranks.insert((h, q, a), src_rank);
        if src_rank == 0 {
            continue;
        }
        let s = &strata[&(q, a)];
        let (dq, da) = op.bidegree();
        let tgt_rank = bases
            .get(&(h, q + dq, a + da))
            .map_or(0, |t| t.free_rank());
        let mut m = BigMat::zero(tgt_rank, src_rank);
        for j in 0..src_rank {
            let z = fb.cycles.col(j);
            let (tkey, w) = j_chain_image(&c, &strata, op, s, h, &z);
            if tgt_rank == 0 {
                match bases.get(&(h, tkey.0, tkey.1)) {
                    Some(tb) => {
                        // Must still be a cycle mapping into torsion.
                        if tb.coords(&w).is_none() {
                            return Err(AkhError::Internal(
                                "induced map lift failed (chain map violated)".into(),
                            ));
                        }
                    }
                    None => {
                        if w.iter().any(|v| !v.is_zero()) {
                            return Err(AkhError::Internal(
                                "induced map hit an empty stratum with a nonzero image".into(),
                            ));
                        }
                    }
                }
                continue;
            }
            let tb = &bases[&(h, tkey.0, tkey.1)];
            let coords = tb.coords(&w).ok_or_else(|| {
                AkhError::Internal("induced map lift failed (chain map violated)".into())
            })?;
            for i in 0..tgt_rank {
                m[(i, j)] = coords[i].clone();
            }
        }
        table.insert((h, q, a), m);
    }
    Ok(InducedMaps {
        op,
        table,
        source_ranks,
    })
}

// ---------------------------------------------------------------------------
// Long exact sequence of the cone
// ---------------------------------------------------------------------------

/// Rational rank of the induced map J* at one (h, q, a) of CKh_A.
fn jstar_rank(
    c: &CubeComplex,
    strata: &BTreeMap<(i64, i64), Stratum>,
    op: Sl2Op,
    h: i64,
    q: i64,
    a: i64,
) -> usize {
    let Some(s) = strata.get(&(q, a)) else { return 0 };
    let dim = s.dim(h);
    if dim == 0 {
        return 0;
    }
    let (dq, da) = op.bidegree();
    let Some(t) = strata.get(&(q + dq, a + da)) else { return 0 };
    if t.dim(h) == 0 {
        return 0;
    }
    let k = kernel_basis(&boundary_matrix(c, s, h));
    // J * K as a matrix into the target stratum chain group.
    let mut jk = BigMat::zero(t.dim(h), k.cols);
    for j in 0..k.cols {
        let (_, w) = j_chain_image(c, strata, op, s, h, &k.col(j));
        for i in 0..t.dim(h) {
            jk[(i, j)] = w[i].clone();
        }
    }
    let d_in_t = boundary_matrix(c, t, h - 1);
    let stacked = jk.hcat(&d_in_t);
    rank_of(&stacked) - rank_of(&d_in_t)
}

#[derive(Clone, Debug, Serialize)]
pub struct LesReport {
    pub pass: bool,
    pub checked_degrees: usize,
    pub counterexample: Option<String>,
}

/// Verify, over the rationals and per (q, a) stratum of the cone, that
/// dim H^k(Cone J) = dim coker(J*_(k-1)) + dim ker(J*_k).
pub fn verify_les(d: &crate::diagram::AnnularDiagram, op: Sl2Op) -> LesReport {
    let ckh = crate::complex::build_ckh(d);
    let cone = crate::complex::build_cone(d, op);
    let strata = stratify(&ckh);
    let cone_strata = stratify(&cone);
    let (dq, da) = op.bidegree();

    let dim_h = |strata: &BTreeMap<(i64, i64), Stratum>,
                 c: &CubeComplex,
                 h: i64,
                 q: i64,
                 a: i64| {
        let Some(s) = strata.get(&(q, a)) else { return 0usize };
        let dim = s.dim(h);
        if dim == 0 {
            return 0;
        }
        let r_out = rank_of(&boundary_matrix(c, s, h));
        let r_in = rank_of(&boundary_matrix(c, s, h - 1));
        dim - r_out - r_in
    };

    // Collect every (k, q, a) that could carry cone homology.
    let mut keys: std::collections::BTreeSet<(i64, i64, i64)> = Default::default();
    for (&(q, a), s) in &cone_strata {
        for &h in s.gens.keys() {
            keys.insert((h, q, a));
        }
    }
    let mut checked = 0;
    for &(k, q, a) in &keys {
        let cone_dim = dim_h(&cone_strata, &cone, k, q, a);
        // ker(J*_k): H^k_(q,a) -> H^k_(q+dq,a+da)
        let hk = dim_h(&strata, &ckh, k, q, a);
        let rk = jstar_rank(&ckh, &strata, op, k, q, a);
        let ker_k = hk - rk;
        // coker(J*_(k-1)): target H^(k-1)_(q+dq,a+da)
        let hk1_t = dim_h(&strata, &ckh, k - 1, q + dq, a + da);
        let rk1 = jstar_rank(&ckh, &strata, op, k - 1, q, a);
        let coker_k1 = hk1_t - rk1;
        checked += 1;
        if cone_dim != ker_k + coker_k1 {
            return LesReport {
                pass: false,
                checked_degrees: checked,
                counterexample: Some(format!(
                    "at (h,q,a)=({k},{q},{a}): dim H(Cone)={cone_dim} but ker+coker={}",
                    ker_k + coker_k1
                )),
            };
        }
    }
    LesReport {
        pass: true,
        checked_degrees: checked,
        counterexample: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse_morse_word;

    #[test]
    fn snf_identity() {
        let m = BigMat::identity(3);
        let snf = smith_normal_form(&m, true, true);
        assert_eq!(snf.rank, 3);
        assert!(snf.divisors.iter().all(|d| *d == BigInt::from(1)));
    }

    #[test]
    fn snf_zero() {
        let m = BigMat::zero(2, 3);
        let snf = smith_normal_form(&m, false, false);
        assert_eq!(snf.rank, 0);
        assert!(snf.divisors.is_empty());
    }

    #[test]
    fn snf_2468() {
        // d1 = gcd of entries = 2, d1*d2 = |det| = 8.
        let m = BigMat::from_rows(vec![vec![2, 4], vec![6, 8]]);
        let snf = smith_normal_form(&m, true, true);
        assert_eq!(snf.rank, 2);
        assert_eq!(snf.divisors, vec![BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn snf_transforms_are_consistent() {
        let m = BigMat::from_rows(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
        let snf = smith_normal_form(&m, true, true);
        let u = snf.u.clone().unwrap();
        let v = snf.v.clone().unwrap();
        let uav = u.mul(&m).mul(&v);
        for i in 0..3 {
            for j in 0..3 {
                if i == j && i < snf.rank {
                    assert_eq!(uav[(i, j)], snf.divisors[i]);
                } else {
                    assert!(uav[(i, j)].is_zero());
                }
            }
        }
        // u_inv really inverts u.
        let ui = snf.u_inv.unwrap();
        assert_eq!(u.mul(&ui), BigMat::identity(3));
    }

    #[test]
    fn homology_essential_unknot() {
        let d = parse_morse_word("strands 1").unwrap();
        let c = crate::complex::build_ckh(&d);
        let h = homology(&c).unwrap();
        assert_eq!(h.total_rank(), 2);
        assert_eq!(h.get(0, 1, 1).unwrap().rank, 1);
        assert_eq!(h.get(0, -1, -1).unwrap().rank, 1);
    }

    #[test]
    fn homology_trivial_unknot() {
        let d = parse_morse_word("strands 0\ncup 1\ncap 1").unwrap();
        let c = crate::complex::build_ckh(&d);
        let h = homology(&c).unwrap();
        assert_eq!(h.total_rank(), 2);
        assert_eq!(h.get(0, 1, 0).unwrap().rank, 1);
        assert_eq!(h.get(0, -1, 0).unwrap().rank, 1);
    }

    #[test]
    fn induced_e_on_essential_unknot() {
        let d = parse_morse_word("strands 1").unwrap();
        let maps = induced_map(&d, Sl2Op::E).unwrap();
        let m = maps.matrix(0, -1, -1).expect("E out of (0,-1,-1)");
        assert_eq!((m.rows, m.cols), (1, 1));
        assert_eq!(m[(0, 0)].abs(), BigInt::from(1));
    }

    #[test]
    fn les_essential_unknot() {
        let d = parse_morse_word("strands 1").unwrap();
        for op in [Sl2Op::E, Sl2Op::F, Sl2Op::H] {
            let rep = verify_les(&d, op);
            assert!(rep.pass, "{op:?}: {:?}", rep.counterexample);
        }
    }

    #[test]
    fn les_two_crossing_knot() {
        let d = parse_morse_word("strands 3\nx+ 2\nx- 1").unwrap();
        for op in [Sl2Op::E, Sl2Op::F, Sl2Op::H] {
            let rep = verify_les(&d, op);
            assert!(rep.pass, "{op:?}: {:?}", rep.counterexample);
        }
    }
}
