//! Exact scalar and matrix arithmetic: p-adic valuations and Smith normal
//! form over the integers, interpreted p-locally.
//!
//! Everything downstream reduces to cokernels of integer matrices. A finitely
//! generated module over `Z_(p)` is determined by its free rank together with
//! the p-parts of the elementary divisors of a relation matrix; prime-to-p
//! torsion is a unit from the p-local point of view and is discarded.
//!
//! All computations use exact big integers. No transform matrices are exposed
//! publicly; [`QuotientView`] offers membership and order queries instead.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Errors from the arithmetic layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ArithError {
    /// The given integer is not prime.
    NotPrime(u64),
    /// Valuation of zero requested.
    ZeroValuation,
    /// Matrix shape mismatch.
    Shape(String),
}

impl fmt::Display for ArithError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithError::NotPrime(n) => write!(f, "{n} is not prime"),
            ArithError::ZeroValuation => write!(f, "p-adic valuation of 0 is infinite"),
            ArithError::Shape(s) => write!(f, "shape error: {s}"),
        }
    }
}

impl std::error::Error for ArithError {}

/// A verified prime number, the global `p` of every computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Prime(u64);

impl Prime {
    pub fn new(p: u64) -> Result<Prime, ArithError> {
        if p < 2 {
            return Err(ArithError::NotPrime(p));
        }
        let mut d = 2u64;
        while d * d <= p {
            if p % d == 0 {
                return Err(ArithError::NotPrime(p));
            }
            d += 1;
        }
        Ok(Prime(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }

    /// `p^e` as an exact big integer.
    pub fn pow_big(self, e: u32) -> BigInt {
        BigInt::from(self.0).pow(e)
    }

    /// `p^e` as an i64; panics on overflow (callers stay well below).
    pub fn pow_i64(self, e: u32) -> i64 {
        let mut acc = 1i64;
        for _ in 0..e {
            acc = acc
                .checked_mul(self.0 as i64)
                .expect("prime power overflow");
        }
        acc
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The p-adic valuation of a positive integer: the largest `e` with `p^e | k`.
pub fn nu_p(k: u64, p: Prime) -> Result<u32, ArithError> {
    if k == 0 {
        return Err(ArithError::ZeroValuation);
    }
    let p = p.get();
    let mut k = k;
    let mut e = 0u32;
    while k % p == 0 {
        k /= p;
        e += 1;
    }
    Ok(e)
}

/// p-adic valuation of a nonzero big integer.
pub fn nu_p_big(k: &BigInt, p: Prime) -> Result<u32, ArithError> {
    if k.is_zero() {
        return Err(ArithError::ZeroValuation);
    }
    let p = BigInt::from(p.get());
    let mut k = k.abs();
    let mut e = 0u32;
    loop {
        let (q, r) = k.div_rem(&p);
        if r.is_zero() {
            k = q;
            e += 1;
        } else {
            return Ok(e);
        }
    }
}

/// A finitely generated p-local abelian group: free rank plus the multiset of
/// torsion exponents, `e` standing for a `Z/p^e` summand. The multiset is kept
/// sorted ascending so that equality is plain structural equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<u32>,
}

impl AbelianGroup {
    pub fn new(free_rank: usize, mut torsion: Vec<u32>) -> Self {
        torsion.retain(|&e| e > 0);
        torsion.sort_unstable();
        AbelianGroup { free_rank, torsion }
    }

    pub fn zero() -> Self {
        AbelianGroup {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Direct sum: ranks add, torsion multisets merge.
    pub fn merge(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut torsion = self.torsion.clone();
        torsion.extend_from_slice(&other.torsion);
        AbelianGroup::new(self.free_rank + other.free_rank, torsion)
    }

    /// Number of p-power cyclic composition factors of the torsion part.
    pub fn torsion_length(&self) -> u64 {
        self.torsion.iter().map(|&e| e as u64).sum()
    }

    /// Number of cyclic torsion summands.
    pub fn torsion_summands(&self) -> usize {
        self.torsion.len()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for &e in &self.torsion {
            parts.push(format!("Z/p^{e}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Dense matrix of exact integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        let data = rows.into_iter().flatten().map(BigInt::from).collect();
        IntMat {
            rows: r,
            cols: c,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.rows, other.rows, "hconcat row mismatch");
        let mut m = IntMat::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(r, c, self.get(r, c).clone());
            }
            for c in 0..other.cols {
                m.set(r, self.cols + c, other.get(r, c).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "mul shape mismatch");
        let mut out = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "mul_vec shape mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = BigInt::zero();
                for c in 0..self.cols {
                    let a = self.get(r, c);
                    if !a.is_zero() && !v[c].is_zero() {
                        acc += a * &v[c];
                    }
                }
                acc
            })
            .collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row_mult(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let v = self.get(src, c);
            if !v.is_zero() {
                let nv = self.get(dst, c) + q * v;
                self.set(dst, c, nv);
            }
        }
    }

    /// col[dst] += q * col[src]
    fn add_col_mult(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let v = self.get(r, src);
            if !v.is_zero() {
                let nv = self.get(r, dst) + q * v;
                self.set(r, dst, nv);
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.get(r, c).clone();
            self.set(r, c, v);
        }
    }

    fn negate_col(&mut self, c: usize) {
        for r in 0..self.rows {
            let v = -self.get(r, c).clone();
            self.set(r, c, v);
        }
    }
}

/// Accumulates the left transform `U` and/or its inverse alongside row
/// operations on the working matrix.
struct LeftAccum {
    u: Option<IntMat>,
    uinv: Option<IntMat>,
}

impl LeftAccum {
    fn new(n: usize, want_u: bool, want_uinv: bool) -> LeftAccum {
        LeftAccum {
            u: want_u.then(|| IntMat::identity(n)),
            uinv: want_uinv.then(|| IntMat::identity(n)),
        }
    }

    fn swap(&mut self, a: usize, b: usize) {
        if let Some(u) = self.u.as_mut() {
            u.swap_rows(a, b);
        }
        if let Some(w) = self.uinv.as_mut() {
            w.swap_cols(a, b);
        }
    }

    /// Mirror `row[dst] += q * row[src]`.
    fn add(&mut self, dst: usize, src: usize, q: &BigInt) {
        if let Some(u) = self.u.as_mut() {
            u.add_row_mult(dst, src, q);
        }
        if let Some(w) = self.uinv.as_mut() {
            // (I + q e_{dst,src})^{-1} = I - q e_{dst,src}; right-multiplying
            // the inverse means col[src] -= q * col[dst].
            let nq = -q.clone();
            w.add_col_mult(src, dst, &nq);
        }
    }

    fn negate(&mut self, r: usize) {
        if let Some(u) = self.u.as_mut() {
            u.negate_row(r);
        }
        if let Some(w) = self.uinv.as_mut() {
            w.negate_col(r);
        }
    }
}

/// Find the position of a nonzero entry of minimal absolute value in the
/// trailing block starting at (k, k). Returns None if the block is zero.
fn min_pivot(m: &IntMat, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let mut best_abs = BigInt::zero();
    for r in k..m.rows() {
        for c in k..m.cols() {
            let v = m.get(r, c);
            if v.is_zero() {
                continue;
            }
            let a = v.abs();
            if best.is_none() || a < best_abs {
                best_abs = a;
                best = Some((r, c));
                if best_abs.is_one() {
                    return best;
                }
            }
        }
    }
    best
}

/// Smith normal form. Returns the diagonal entries (nonnegative, each dividing
/// the next) and, when requested, the left transform `U` with `U*A*V = D`.
pub(crate) struct Smith {
    pub diag: Vec<BigInt>,
    pub rank: usize,
    pub left: Option<IntMat>,
}

pub(crate) fn smith(a: &IntMat, want_left: bool) -> Smith {
    let (diag, rank, acc) = smith_impl(a, want_left, false);
    Smith {
        diag,
        rank,
        left: acc.u,
    }
}

/// Smith normal form returning `(diagonal, rank, U^{-1})`; the columns of
/// `U^{-1}` beyond the unit divisors represent the cyclic summands of the
/// cokernel.
pub(crate) fn smith_with_inverse(a: &IntMat) -> (Vec<BigInt>, usize, IntMat) {
    let (diag, rank, acc) = smith_impl(a, false, true);
    (diag, rank, acc.uinv.expect("inverse requested"))
}

fn smith_impl(a: &IntMat, want_u: bool, want_uinv: bool) -> (Vec<BigInt>, usize, LeftAccum) {
    let mut m = a.clone();
    let mut acc = LeftAccum::new(a.rows(), want_u, want_uinv);
    let nmin = a.rows().min(a.cols());
    let mut k = 0usize;
    while k < nmin {
        let Some((pr, pc)) = min_pivot(&m, k) else {
            break;
        };
        m.swap_rows(k, pr);
        acc.swap(k, pr);
        m.swap_cols(k, pc);
        // Eliminate column and row below/right of the pivot. Residues can
        // reappear after a round, so loop until clean.
        loop {
            let mut dirty = false;
            for r in (k + 1)..m.rows() {
                if m.get(r, k).is_zero() {
                    continue;
                }
                let q = -(m.get(r, k) / m.get(k, k));
                m.add_row_mult(r, k, &q);
                acc.add(r, k, &q);
                if !m.get(r, k).is_zero() {
                    // Remainder smaller than pivot: swap it up and restart.
                    m.swap_rows(k, r);
                    acc.swap(k, r);
                    dirty = true;
                }
            }
            for c in (k + 1)..m.cols() {
                if m.get(k, c).is_zero() {
                    continue;
                }
                let q = -(m.get(k, c) / m.get(k, k));
                m.add_col_mult(c, k, &q);
                if !m.get(k, c).is_zero() {
                    m.swap_cols(k, c);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        // Divisibility pass: pivot must divide every later entry.
        let mut fixed = true;
        'scan: for r in (k + 1)..m.rows() {
            for c in (k + 1)..m.cols() {
                if !(m.get(r, c) % m.get(k, k)).is_zero() {
                    // Fold that row into row k and redo this pivot.
                    let one = BigInt::one();
                    m.add_row_mult(k, r, &one);
                    acc.add(k, r, &one);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if !fixed {
            continue;
        }
        if m.get(k, k).is_negative() {
            m.negate_row(k);
            acc.negate(k);
        }
        k += 1;
    }
    let rank = k;
    let diag = (0..nmin).map(|i| m.get(i, i).clone()).collect();
    (diag, rank, acc)
}

/// Column Hermite form with column transform: returns `(H, C)` with
/// `H = A * C`, `C` unimodular, and `H` in column echelon form (pivots walk
/// down and right; columns after the last pivot are zero).
pub(crate) fn col_echelon(a: &IntMat) -> (IntMat, IntMat) {
    let mut h = a.clone();
    let mut c = IntMat::identity(a.cols());
    let mut pivot_col = 0usize;
    for row in 0..h.rows() {
        if pivot_col >= h.cols() {
            break;
        }
        // Reduce all entries of this row (from pivot_col on) to a single gcd.
        loop {
            let mut best: Option<usize> = None;
            let mut best_abs = BigInt::zero();
            for j in pivot_col..h.cols() {
                let v = h.get(row, j);
                if v.is_zero() {
                    continue;
                }
                let a = v.abs();
                if best.is_none() || a < best_abs {
                    best_abs = a;
                    best = Some(j);
                }
            }
            let Some(jmin) = best else { break };
            h.swap_cols(pivot_col, jmin);
            c.swap_cols(pivot_col, jmin);
            let mut clean = true;
            for j in (pivot_col + 1)..h.cols() {
                if h.get(row, j).is_zero() {
                    continue;
                }
                let q = -(h.get(row, j) / h.get(row, pivot_col));
                h.add_col_mult(j, pivot_col, &q);
                c.add_col_mult(j, pivot_col, &q);
                if !h.get(row, j).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if !h.get(row, pivot_col).is_zero() {
            pivot_col += 1;
        }
    }
    (h, c)
}

/// Basis of the integer kernel of `a`, returned as the columns of a matrix
/// (possibly with zero columns count).
pub(crate) fn kernel_basis(a: &IntMat) -> IntMat {
    let (h, c) = col_echelon(a);
    let zero_cols: Vec<usize> = (0..h.cols())
        .filter(|&j| (0..h.rows()).all(|r| h.get(r, j).is_zero()))
        .collect();
    let mut out = IntMat::zeros(a.cols(), zero_cols.len());
    for (k, &j) in zero_cols.iter().enumerate() {
        for r in 0..a.cols() {
            out.set(r, k, c.get(r, j).clone());
        }
    }
    out
}

/// Solve `B * x = target` over the integers for each column of `target`,
/// where the columns of `B` are independent. Returns the matrix of solution
/// columns, or None if some column is not in the lattice spanned by `B`.
pub(crate) fn express_in_basis(b: &IntMat, target: &IntMat) -> Option<IntMat> {
    assert_eq!(b.rows(), target.rows(), "express_in_basis shape");
    let (h, c) = col_echelon(b);
    // Pivot structure of H: for each pivot column, its topmost nonzero row.
    let mut pivots = Vec::new();
    for j in 0..h.cols() {
        if let Some(r) = (0..h.rows()).find(|&r| !h.get(r, j).is_zero()) {
            pivots.push((r, j));
        }
    }
    let mut ys = IntMat::zeros(h.cols(), target.cols());
    for t in 0..target.cols() {
        let mut v = target.column(t);
        for &(r, j) in &pivots {
            let piv = h.get(r, j);
            let (q, rem) = v[r].div_rem(piv);
            if !rem.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for rr in 0..h.rows() {
                    let hv = h.get(rr, j);
                    if !hv.is_zero() {
                        v[rr] -= &q * hv;
                    }
                }
                ys.set(j, t, q);
            }
        }
        if v.iter().any(|x| !x.is_zero()) {
            return None;
        }
    }
    // x = C * y per column.
    Some(c.mul(&ys))
}

/// The p-localized cokernel of an integer matrix `m`, viewed as the quotient
/// `Z^rows / im(m)`: free rank is `rows - rank`, torsion exponents are the
/// p-adic valuations of the nonunit elementary divisors.
pub fn cokernel_p(m: &IntMat, p: Prime) -> AbelianGroup {
    let s = smith(m, false);
    let torsion = s
        .diag
        .iter()
        .take(s.rank)
        .map(|d| nu_p_big(d, p).expect("nonzero divisor"))
        .collect();
    AbelianGroup::new(m.rows() - s.rank, torsion)
}

/// A p-local view of the quotient `Z^rows / im(A)` retaining enough of the
/// Smith decomposition to answer membership and order queries about classes.
pub struct QuotientView {
    p: Prime,
    rows: usize,
    rank: usize,
    /// p-adic valuations of the nonzero elementary divisors.
    nu: Vec<u32>,
    u: IntMat,
    group: AbelianGroup,
}

impl QuotientView {
    pub fn new(a: &IntMat, p: Prime) -> QuotientView {
        let s = smith(a, true);
        let nu: Vec<u32> = s
            .diag
            .iter()
            .take(s.rank)
            .map(|d| nu_p_big(d, p).expect("nonzero divisor"))
            .collect();
        let group = AbelianGroup::new(a.rows() - s.rank, nu.clone());
        QuotientView {
            p,
            rows: a.rows(),
            rank: s.rank,
            nu,
            u: s.left.expect("left transform"),
            group,
        }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn ambient_rank(&self) -> usize {
        self.rows
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    /// Order of the class of `x` in the p-localized quotient: `Some(e)` means
    /// order exactly `p^e` (`e = 0`: the class is zero), `None` means infinite.
    pub fn order_exp(&self, x: &[BigInt]) -> Option<u32> {
        let ux = self.u.mul_vec(x);
        for j in self.rank..self.rows {
            if !ux[j].is_zero() {
                return None;
            }
        }
        let mut e = 0u32;
        for j in 0..self.rank {
            if ux[j].is_zero() {
                continue;
            }
            let v = nu_p_big(&ux[j], self.p).expect("nonzero");
            if v < self.nu[j] {
                e = e.max(self.nu[j] - v);
            }
        }
        Some(e)
    }

    /// Whether the class of `x` is zero p-locally, i.e. `x` is in the image.
    pub fn is_zero_class(&self, x: &[BigInt]) -> bool {
        self.order_exp(x) == Some(0)
    }

    /// Membership conditions cutting out `{x : class(x) is p-locally zero}`
    /// as a lattice: pairs of (row functional, required p-power exponent).
    /// An exponent of `u32::MAX` encodes "must vanish identically" (free row).
    pub(crate) fn vanishing_conditions(&self) -> Vec<(Vec<BigInt>, u32)> {
        let mut out = Vec::new();
        for j in 0..self.rank {
            if self.nu[j] > 0 {
                out.push((self.u_row(j), self.nu[j]));
            }
        }
        for j in self.rank..self.rows {
            out.push((self.u_row(j), u32::MAX));
        }
        out
    }

    /// Conditions cutting out the torsion sublattice `{x : class(x) finite}`.
    pub(crate) fn torsion_conditions(&self) -> Vec<(Vec<BigInt>, u32)> {
        (self.rank..self.rows)
            .map(|j| (self.u_row(j), u32::MAX))
            .collect()
    }

    fn u_row(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|c| self.u.get(j, c).clone()).collect()
    }

    /// A generating set for the torsion subgroup of the quotient, as integer
    /// vectors in the ambient lattice. Computed as a basis of the lattice cut
    /// out by the free-row vanishing conditions.
    pub(crate) fn torsion_generators(&self) -> Vec<Vec<BigInt>> {
        let conds = self.torsion_conditions();
        let lattice = condition_lattice(self.rows, &conds, self.p);
        (0..lattice.cols()).map(|j| lattice.column(j)).collect()
    }
}

/// Basis (as columns) of the lattice `{x in Z^n : for each condition (w, e),
/// w.x == 0 (e == MAX) or w.x == 0 mod p^e}`.
pub(crate) fn condition_lattice(n: usize, conds: &[(Vec<BigInt>, u32)], p: Prime) -> IntMat {
    // Exact conditions first: kernel of the stacked free rows.
    let free: Vec<&(Vec<BigInt>, u32)> = conds.iter().filter(|(_, e)| *e == u32::MAX).collect();
    let modular: Vec<&(Vec<BigInt>, u32)> = conds.iter().filter(|(_, e)| *e != u32::MAX).collect();
    let mut basis = if free.is_empty() {
        IntMat::identity(n)
    } else {
        let mut w = IntMat::zeros(free.len(), n);
        for (i, (row, _)) in free.iter().enumerate() {
            for c in 0..n {
                w.set(i, c, row[c].clone());
            }
        }
        kernel_basis(&w)
    };
    if modular.is_empty() || basis.cols() == 0 {
        return basis;
    }
    // Congruence conditions: x = basis * y with W * basis * y == 0 mod p^e.
    // Solutions y are the projection of the kernel of [W*basis | -diag(p^e)].
    let k = basis.cols();
    let mut sys = IntMat::zeros(modular.len(), k + modular.len());
    for (i, (row, e)) in modular.iter().enumerate() {
        for j in 0..k {
            let mut acc = BigInt::zero();
            for r in 0..n {
                if !row[r].is_zero() && !basis.get(r, j).is_zero() {
                    acc += &row[r] * basis.get(r, j);
                }
            }
            sys.set(i, j, acc);
        }
        sys.set(i, k + i, -p.pow_big(*e));
    }
    let ker = kernel_basis(&sys);
    let mut proj = IntMat::zeros(k, ker.cols());
    for j in 0..ker.cols() {
        for r in 0..k {
            proj.set(r, j, ker.get(r, j).clone());
        }
    }
    basis = basis.mul(&proj);
    // Drop zero columns (the projection can contain them).
    let keep: Vec<usize> = (0..basis.cols())
        .filter(|&j| (0..basis.rows()).any(|r| !basis.get(r, j).is_zero()))
        .collect();
    let mut out = IntMat::zeros(basis.rows(), keep.len());
    for (jj, &j) in keep.iter().enumerate() {
        for r in 0..basis.rows() {
            out.set(r, jj, basis.get(r, j).clone());
        }
    }
    out
}
