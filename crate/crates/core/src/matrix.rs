//! Dense matrices of arbitrary-precision integers and the exact algorithms
//! on them: products, determinants (fraction-free), integer kernel bases and
//! the Smith normal form with unimodular transforms.
//!
//! Everything here is total-precision: entries are `BigInt` and no operation
//! ever rounds or overflows.

use std::fmt;

use num_bigint::BigInt;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Dense row-major matrix over the integers.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        IntMatrix { rows, cols, data }
    }

    /// Convenience constructor from machine-integer rows; panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Self::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |r, c| -&self[(r, c)])
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} + {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, self.cols, |r, c| {
            &self[(r, c)] + &other[(r, c)]
        }))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    pub fn add_mul_row(&mut self, dst: usize, src: usize, k: &BigInt) {
        assert_ne!(dst, src);
        for c in 0..self.cols {
            let t = k * &self[(src, c)];
            self[(dst, c)] += t;
        }
    }

    /// col[dst] += k * col[src]
    pub fn add_mul_col(&mut self, dst: usize, src: usize, k: &BigInt) {
        assert_ne!(dst, src);
        for r in 0..self.rows {
            let t = k * &self[(r, src)];
            self[(r, dst)] += t;
        }
    }

    pub fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -&self[(r, c)];
            self[(r, c)] = v;
        }
    }

    /// Entries converted to i64, or an error if any entry does not fit.
    pub fn to_i64(&self) -> Result<Vec<Vec<i64>>> {
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for c in 0..self.cols {
                row.push(i64::try_from(&self[(r, c)]).map_err(|_| {
                    Error::InternalInconsistency(format!(
                        "entry ({r},{c}) exceeds i64 range"
                    ))
                })?);
            }
            out.push(row);
        }
        Ok(out)
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        &mut self.data[r * self.cols + c]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(r, c)])?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Exact matrix product.
pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> Result<IntMatrix> {
    if a.cols() != b.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} * {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let mut out = IntMatrix::zeros(a.rows(), b.cols());
    for r in 0..a.rows() {
        for k in 0..a.cols() {
            let ark = &a[(r, k)];
            if ark.is_zero() {
                continue;
            }
            for c in 0..b.cols() {
                let t = ark * &b[(k, c)];
                out[(r, c)] += t;
            }
        }
    }
    Ok(out)
}

/// Matrix-vector product A * v.
pub fn mat_vec(a: &IntMatrix, v: &[BigInt]) -> Result<Vec<BigInt>> {
    if a.cols() != v.len() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} * vec[{}]",
            a.rows(),
            a.cols(),
            v.len()
        )));
    }
    let mut out = vec![BigInt::zero(); a.rows()];
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            out[r] += &a[(r, c)] * &v[c];
        }
    }
    Ok(out)
}

/// Exact determinant by Bareiss fraction-free elimination.
pub fn det(a: &IntMatrix) -> Result<BigInt> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m = a.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[(k, k)].is_zero() {
            // find a row below with nonzero pivot
            match (k + 1..n).find(|&r| !m[(r, k)].is_zero()) {
                Some(r) => {
                    m.swap_rows(k, r);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[(i, j)] * &m[(k, k)] - &m[(i, k)] * &m[(k, j)];
                // Bareiss: division by the previous pivot is exact
                m[(i, j)] = num / &prev;
            }
            m[(i, k)] = BigInt::zero();
        }
        prev = m[(k, k)].clone();
    }
    Ok(sign * m[(n - 1, n - 1)].clone())
}

pub fn is_unimodular(a: &IntMatrix) -> Result<bool> {
    use num_traits::One as _;
    Ok(det(a)?.abs().is_one())
}

/// Smith normal form `U * M * V = S` with unimodular `U`, `V`.
#[derive(Debug, Clone)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    /// Positive diagonal entries d_1 | d_2 | ... of `S`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.s.rows().min(self.s.cols());
        (0..k)
            .map(|i| self.s[(i, i)].clone())
            .take_while(|d| !d.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }
}

fn find_pivot(s: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for r in t..s.rows() {
        for c in t..s.cols() {
            if s[(r, c)].is_zero() {
                continue;
            }
            match best {
                Some(b) if s[(b.0, b.1)].abs() <= s[(r, c)].abs() => {}
                _ => best = Some((r, c)),
            }
        }
    }
    best
}

/// Diagonalize `s[t..,t..]`, updating `u` and `v` with the applied row and
/// column operations. Entries on the diagonal may still violate the
/// divisibility chain when this returns.
fn diagonalize_from(s: &mut IntMatrix, u: &mut IntMatrix, v: &mut IntMatrix, start: usize) {
    let mut t = start;
    while t < s.rows().min(s.cols()) {
        let Some((pr, pc)) = find_pivot(s, t) else {
            break;
        };
        s.swap_rows(t, pr);
        u.swap_rows(t, pr);
        s.swap_cols(t, pc);
        v.swap_cols(t, pc);
        loop {
            let mut clean = true;
            // clear column t below the pivot
            for r in t + 1..s.rows() {
                if s[(r, t)].is_zero() {
                    continue;
                }
                let q = &s[(r, t)] / &s[(t, t)];
                if !q.is_zero() {
                    let k = -q;
                    s.add_mul_row(r, t, &k);
                    u.add_mul_row(r, t, &k);
                }
                if !s[(r, t)].is_zero() {
                    // remainder is strictly smaller: promote it to pivot
                    s.swap_rows(t, r);
                    u.swap_rows(t, r);
                    clean = false;
                }
            }
            // clear row t right of the pivot
            for c in t + 1..s.cols() {
                if s[(t, c)].is_zero() {
                    continue;
                }
                let q = &s[(t, c)] / &s[(t, t)];
                if !q.is_zero() {
                    let k = -q;
                    s.add_mul_col(c, t, &k);
                    v.add_mul_col(c, t, &k);
                }
                if !s[(t, c)].is_zero() {
                    s.swap_cols(t, c);
                    v.swap_cols(t, c);
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        t += 1;
    }
}

/// Smith normal form of an arbitrary integer matrix (total function).
///
/// Pivoting picks the smallest nonzero absolute value in the working
/// submatrix, which keeps entry growth tame at the sizes used here. The
/// invariant factors are normalized positive; `U` absorbs the signs.
pub fn snf(m: &IntMatrix) -> SnfResult {
    let mut s = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut v = IntMatrix::identity(m.cols());

    diagonalize_from(&mut s, &mut u, &mut v, 0);
    // enforce the divisibility chain d_i | d_{i+1}
    loop {
        let k = s.rows().min(s.cols());
        let mut violation = None;
        'scan: for i in 0..k {
            if s[(i, i)].is_zero() {
                break;
            }
            for j in i + 1..k {
                if s[(j, j)].is_zero() {
                    break;
                }
                if !(&s[(j, j)] % &s[(i, i)]).is_zero() {
                    violation = Some((i, j));
                    break 'scan;
                }
            }
        }
        let Some((i, j)) = violation else { break };
        // fold column j into column i and re-reduce from i
        let one = BigInt::one();
        s.add_mul_col(i, j, &one);
        v.add_mul_col(i, j, &one);
        diagonalize_from(&mut s, &mut u, &mut v, i);
    }
    // normalize diagonal signs through U
    for i in 0..s.rows().min(s.cols()) {
        if s[(i, i)].is_negative() {
            s.negate_row(i);
            u.negate_row(i);
        }
    }
    SnfResult { u, s, v }
}

/// Rank of the matrix over the rationals (equivalently over the integers as
/// a lattice map), via the Smith normal form.
pub fn rank(m: &IntMatrix) -> usize {
    snf(m).rank()
}

/// Basis of the integer kernel lattice {v : A v = 0}, as columns.
///
/// The vectors are the last `cols - rank` columns of the SNF column
/// transform, so they span a primitive sublattice.
pub fn kernel_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let res = snf(a);
    let r = res.rank();
    (r..a.cols()).map(|c| res.v.col(c)).collect()
}

/// Deterministic pseudo-random unimodular matrix: `steps` elementary row
/// operations applied to the identity.
pub fn random_unimodular(n: usize, steps: usize, seed: u64) -> IntMatrix {
    assert!(n >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = IntMatrix::identity(n);
    for _ in 0..steps {
        match rng.gen_range(0..3u8) {
            0 if n >= 2 => {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n);
                while j == i {
                    j = rng.gen_range(0..n);
                }
                let k = BigInt::from([-2i64, -1, 1, 2][rng.gen_range(0..4)]);
                m.add_mul_row(j, i, &k);
            }
            1 if n >= 2 => {
                let i = rng.gen_range(0..n);
                let j = rng.gen_range(0..n);
                m.swap_rows(i, j);
            }
            _ => {
                let i = rng.gen_range(0..n);
                m.negate_row(i);
            }
        }
    }
    m
}

/// Exact inverse of a unimodular matrix via the adjugate.
pub fn unimodular_inverse(a: &IntMatrix) -> Result<IntMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let d = det(a)?;
    if d.magnitude() != BigInt::one().magnitude() {
        return Err(Error::NotUnimodular);
    }
    let n = a.rows();
    let mut inv = IntMatrix::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            // cofactor C_{c,r} (adjugate is the transposed cofactor matrix)
            let minor = IntMatrix::from_fn(n - 1, n - 1, |i, j| {
                let ii = if i < c { i } else { i + 1 };
                let jj = if j < r { j } else { j + 1 };
                a[(ii, jj)].clone()
            });
            let mut cof = det(&minor).expect("minor is square");
            if (r + c) % 2 == 1 {
                cof = -cof;
            }
            inv[(r, c)] = cof;
        }
    }
    if d.is_negative() {
        inv = inv.neg();
    }
    Ok(inv)
}
