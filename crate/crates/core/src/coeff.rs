//! Exact arithmetic and linear algebra over `Z/l^k` (`k = 1` gives the field `F_l`).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoeffError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("exponent must be at least 1")]
    ZeroExponent,
    #[error("modulus l^k does not fit in 64 bits")]
    ModulusOverflow,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operation requires the field case k = 1 (got k = {0})")]
    RequiresField(u32),
    #[error("{0} is not a unit modulo {1}")]
    NotAUnit(u64, u64),
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The ring `Z/l^k` with `l` prime. Elements are canonical residues in `[0, l^k)`.
#[derive(Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffRing {
    prime: u64,
    power: u32,
    modulus: u64,
}

impl fmt::Debug for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.power == 1 {
            write!(f, "F_{}", self.prime)
        } else {
            write!(f, "Z/{}^{}", self.prime, self.power)
        }
    }
}

impl CoeffRing {
    pub fn new(prime: u64, power: u32) -> Result<Self, CoeffError> {
        if !is_prime(prime) {
            return Err(CoeffError::NotPrime(prime));
        }
        if power == 0 {
            return Err(CoeffError::ZeroExponent);
        }
        let mut modulus: u64 = 1;
        for _ in 0..power {
            modulus = modulus
                .checked_mul(prime)
                .ok_or(CoeffError::ModulusOverflow)?;
        }
        Ok(CoeffRing {
            prime,
            power,
            modulus,
        })
    }

    pub fn field(prime: u64) -> Result<Self, CoeffError> {
        Self::new(prime, 1)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_field(&self) -> bool {
        self.power == 1
    }

    pub fn reduce(&self, n: i64) -> u64 {
        n.rem_euclid(self.modulus as i64) as u64
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.modulus
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.modulus - b % self.modulus) % self.modulus
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.modulus - a % self.modulus) % self.modulus
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    /// l-adic valuation of a residue; `val(0) = k` by convention.
    pub fn valuation(&self, a: u64) -> u32 {
        let a = a % self.modulus;
        if a == 0 {
            return self.power;
        }
        let mut v = 0;
        let mut a = a;
        while a % self.prime == 0 {
            a /= self.prime;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, a: u64) -> bool {
        a % self.modulus != 0 && a % self.prime != 0
    }

    pub fn inv(&self, a: u64) -> Result<u64, CoeffError> {
        if !self.is_unit(a) {
            return Err(CoeffError::NotAUnit(a, self.modulus));
        }
        // extended Euclid on (a, modulus)
        let (mut r0, mut r1) = (a as i128, self.modulus as i128);
        let (mut s0, mut s1) = (1i128, 0i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Ok(s0.rem_euclid(self.modulus as i128) as u64)
    }
}

/// Sparse matrix over a `CoeffRing`. All stored entries are nonzero residues.
#[derive(Clone, PartialEq, Eq)]
pub struct ModMatrix {
    ring: CoeffRing,
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), u64>,
}

impl fmt::Debug for ModMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ModMatrix {}x{} over {:?}", self.rows, self.cols, self.ring)?;
        for r in 0..self.rows.min(16) {
            let row: Vec<u64> = (0..self.cols.min(16)).map(|c| self.get(r, c)).collect();
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl ModMatrix {
    pub fn zero(ring: CoeffRing, rows: usize, cols: usize) -> Self {
        ModMatrix {
            ring,
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(ring: CoeffRing, n: usize) -> Self {
        let mut m = Self::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_dense(ring: CoeffRing, rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zero(ring, nrows, ncols);
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, ring.reduce(v));
            }
        }
        m
    }

    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        *self.entries.get(&(r, c)).unwrap_or(&0)
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        let v = v % self.ring.modulus();
        if v == 0 {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.entries.iter().map(|(&(r, c), &v)| (r, c, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_dense(&self) -> Vec<Vec<u64>> {
        let mut d = vec![vec![0u64; self.cols]; self.rows];
        for (&(r, c), &v) in &self.entries {
            d[r][c] = v;
        }
        d
    }

    pub fn transpose(&self) -> ModMatrix {
        let mut t = ModMatrix::zero(self.ring, self.cols, self.rows);
        for (&(r, c), &v) in &self.entries {
            t.set(c, r, v);
        }
        t
    }

    pub fn mul(&self, other: &ModMatrix) -> Result<ModMatrix, CoeffError> {
        if self.cols != other.rows {
            return Err(CoeffError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let ring = self.ring;
        let mut out = ModMatrix::zero(ring, self.rows, other.cols);
        let mut acc: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for (&(r, k), &a) in &self.entries {
            for (&(_, c), &b) in other.entries.range((k, 0)..(k + 1, 0)) {
                let e = acc.entry((r, c)).or_insert(0);
                *e = ring.add(*e, ring.mul(a, b));
            }
        }
        for ((r, c), v) in acc {
            out.set(r, c, v);
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u64]) -> Result<Vec<u64>, CoeffError> {
        if v.len() != self.cols {
            return Err(CoeffError::DimensionMismatch(format!(
                "matrix {}x{} times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![0u64; self.rows];
        for (&(r, c), &a) in &self.entries {
            out[r] = self.ring.add(out[r], self.ring.mul(a, v[c]));
        }
        Ok(out)
    }
}

/// Result of `smith_normal_form`: `left * M * right = diag(diagonal)`,
/// each diagonal entry normalized to a power of `l` (or zero).
///
/// `precision_exhausted` is set when some elementary divisor is zero in
/// `Z/l^k`, i.e. the rank over `Z_l` is undetermined at this precision.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub diagonal: Vec<u64>,
    pub left: ModMatrix,
    pub right: ModMatrix,
    pub precision_exhausted: bool,
}

impl SmithForm {
    /// Count of unit elementary divisors. Over a field this is the rank.
    pub fn unit_rank(&self, ring: &CoeffRing) -> usize {
        self.diagonal.iter().filter(|&&d| ring.is_unit(d)).count()
    }

    pub fn has_torsion(&self, ring: &CoeffRing) -> bool {
        self.diagonal
            .iter()
            .any(|&d| d != 0 && !ring.is_unit(d))
    }
}

/// Smith normal form over `Z/l^k`.
///
/// Pivoting is deterministic: minimal l-adic valuation first, ties broken by
/// smallest row index, then smallest column index.
pub fn smith_normal_form(m: &ModMatrix) -> SmithForm {
    let ring = m.ring();
    let lk = ring.modulus();
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.to_dense();
    let mut left = dense_identity(rows);
    let mut right = dense_identity(cols);

    let steps = rows.min(cols);
    for step in 0..steps {
        // find pivot
        let mut best: Option<(u32, usize, usize)> = None;
        for r in step..rows {
            for c in step..cols {
                if a[r][c] != 0 {
                    let v = ring.valuation(a[r][c]);
                    match best {
                        Some((bv, _, _)) if bv <= v => {}
                        _ => best = Some((v, r, c)),
                    }
                }
            }
        }
        let Some((_, pr, pc)) = best else { break };
        if pr != step {
            a.swap(pr, step);
            left.swap(pr, step);
        }
        if pc != step {
            swap_cols(&mut a, pc, step);
            swap_cols(&mut right, pc, step);
        }
        // normalize pivot to l^e
        let e = ring.valuation(a[step][step]);
        let le = ring.prime().pow(e);
        let unit = a[step][step] / le; // exact: canonical residue divisible by l^e
        let uinv = ring.inv(unit % lk).expect("unit part invertible");
        scale_row(&ring, &mut a, step, uinv);
        scale_row(&ring, &mut left, step, uinv);
        debug_assert_eq!(a[step][step], le % lk);
        // clear column
        for r in (step + 1)..rows {
            if a[r][step] != 0 {
                let q = a[r][step] / le; // valuation >= e, exact division
                let q = ring.neg(q % lk);
                add_scaled_row(&ring, &mut a, step, r, q);
                add_scaled_row(&ring, &mut left, step, r, q);
            }
        }
        // clear row
        for c in (step + 1)..cols {
            if a[step][c] != 0 {
                let q = a[step][c] / le;
                let q = ring.neg(q % lk);
                add_scaled_col(&ring, &mut a, step, c, q);
                add_scaled_col(&ring, &mut right, step, c, q);
            }
        }
    }

    // sort diagonal by valuation (divisibility chain); use transposition swaps
    let n = steps;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (ring.valuation(a[i][i]), i));
    // apply permutation by selection swaps
    let mut cur: Vec<usize> = (0..n).collect();
    for target in 0..n {
        let want = order[target];
        let at = cur.iter().position(|&x| x == want).unwrap();
        if at != target {
            a.swap(at, target);
            left.swap(at, target);
            swap_cols(&mut a, at, target);
            swap_cols(&mut right, at, target);
            cur.swap(at, target);
        }
    }

    let diagonal: Vec<u64> = (0..n).map(|i| a[i][i]).collect();
    let precision_exhausted = {
        let count_nonzero_possible = rows.min(cols);
        diagonal.iter().any(|&d| d == 0) && diagonal.len() == count_nonzero_possible && !ring.is_field()
    };
    // more precisely: any divisor that is 0 in the ring while the matrix had
    // entries there means rank over Z_l is undetermined at this k
    let precision_exhausted =
        precision_exhausted || (!ring.is_field() && diagonal.iter().any(|&d| d == 0 && !m.is_zero()));

    SmithForm {
        diagonal,
        left: dense_to_matrix(ring, &left),
        right: dense_to_matrix(ring, &right),
        precision_exhausted,
    }
}

fn dense_identity(n: usize) -> Vec<Vec<u64>> {
    let mut m = vec![vec![0u64; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

fn dense_to_matrix(ring: CoeffRing, d: &[Vec<u64>]) -> ModMatrix {
    let rows = d.len();
    let cols = d.first().map_or(0, |r| r.len());
    let mut m = ModMatrix::zero(ring, rows, cols);
    for (i, row) in d.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v % ring.modulus() != 0 {
                m.set(i, j, v);
            }
        }
    }
    m
}

fn swap_cols(a: &mut [Vec<u64>], i: usize, j: usize) {
    for row in a.iter_mut() {
        row.swap(i, j);
    }
}

fn scale_row(ring: &CoeffRing, a: &mut [Vec<u64>], r: usize, s: u64) {
    for v in a[r].iter_mut() {
        *v = ring.mul(*v, s);
    }
}

fn add_scaled_row(ring: &CoeffRing, a: &mut Vec<Vec<u64>>, src: usize, dst: usize, s: u64) {
    let srow = a[src].clone();
    for (v, &u) in a[dst].iter_mut().zip(srow.iter()) {
        *v = ring.add(*v, ring.mul(u, s));
    }
}

fn add_scaled_col(ring: &CoeffRing, a: &mut [Vec<u64>], src: usize, dst: usize, s: u64) {
    for row in a.iter_mut() {
        row[dst] = ring.add(row[dst], ring.mul(row[src], s));
    }
}

/// Row echelon data over the field `F_l`.
pub struct Rref {
    pub matrix: Vec<Vec<u64>>,
    /// column index of the pivot in each nonzero row
    pub pivots: Vec<usize>,
}

/// Reduced row echelon form over `F_l` (k = 1 only).
pub fn rref(m: &ModMatrix) -> Result<Rref, CoeffError> {
    let ring = m.ring();
    if !ring.is_field() {
        return Err(CoeffError::RequiresField(ring.power()));
    }
    let mut a = m.to_dense();
    Ok(rref_dense(&ring, &mut a))
}

pub(crate) fn rref_dense(ring: &CoeffRing, a: &mut Vec<Vec<u64>>) -> Rref {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut rank = 0usize;
    for c in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, pr);
        let inv = ring.inv(a[rank][c]).unwrap();
        for v in a[rank][c..].iter_mut() {
            *v = ring.mul(*v, inv);
        }
        let prow = a[rank].clone();
        for r in 0..rows {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c];
                for (v, &u) in a[r][c..].iter_mut().zip(prow[c..].iter()) {
                    *v = ring.sub(*v, ring.mul(f, u));
                }
            }
        }
        pivots.push(c);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    a.truncate(rank);
    Rref {
        matrix: a.clone(),
        pivots,
    }
}

/// Rank over `F_l`.
pub fn rank(m: &ModMatrix) -> Result<usize, CoeffError> {
    Ok(rref(m)?.pivots.len())
}

/// Basis of the right kernel `{v : Mv = 0}` over `F_l`.
pub fn kernel_basis(m: &ModMatrix) -> Result<Vec<Vec<u64>>, CoeffError> {
    let ring = m.ring();
    if !ring.is_field() {
        return Err(CoeffError::RequiresField(ring.power()));
    }
    let cols = m.cols();
    let r = rref(m)?;
    let pivot_set: std::collections::BTreeSet<usize> = r.pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (row, &pc) in r.matrix.iter().zip(r.pivots.iter()) {
            v[pc] = ring.neg(row[free]);
        }
        basis.push(v);
    }
    Ok(basis)
}

/// Solve `M x = b` exactly over `Z/l^k` via the Smith normal form.
///
/// Returns `Ok(None)` when no solution exists. The solution returned is the
/// deterministic one with zero free coordinates in SNF coordinates.
pub fn solve(m: &ModMatrix, b: &[u64]) -> Result<Option<Vec<u64>>, CoeffError> {
    if b.len() != m.rows() {
        return Err(CoeffError::DimensionMismatch(format!(
            "matrix has {} rows, vector length {}",
            m.rows(),
            b.len()
        )));
    }
    let ring = m.ring();
    let lk = ring.modulus();
    let snf = smith_normal_form(m);
    let ub = snf.left.mul_vec(b)?;
    let mut y = vec![0u64; m.cols()];
    for i in 0..m.rows() {
        let d = if i < snf.diagonal.len() {
            snf.diagonal[i]
        } else {
            0
        };
        let rhs = ub[i];
        if d == 0 {
            if rhs != 0 {
                return Ok(None);
            }
            continue;
        }
        // d = l^e; solvable iff l^e divides rhs
        if rhs % d != 0 {
            // d is a power of l and rhs canonical, so integer divisibility decides
            return Ok(None);
        }
        y[i] = (rhs / d) % lk;
    }
    let x = snf.right.mul_vec(&y)?;
    Ok(Some(x))
}
