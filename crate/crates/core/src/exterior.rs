//! The bivector representation of GL(n, Z): exterior squares, Pluecker
//! relations and decomposability of bivectors, and reconstruction of the
//! exterior root of a matrix (unique up to sign for n >= 3).
//!
//! Index pairs (i, j) with i < j are ordered lexicographically throughout;
//! `PairIndex` is the bijection between pairs and positions `0..C(n,2)`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{self, IntMatrix};

/// Number of unordered pairs from n elements.
pub fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// The rank n with C(n,2) = `dim`, restricted to n >= 3.
pub fn rank_from_pair_count(dim: usize) -> Result<usize> {
    let mut n = 3;
    loop {
        let c = pair_count(n);
        if c == dim {
            return Ok(n);
        }
        if c > dim {
            return Err(Error::NotBinomialDimension(dim));
        }
        n += 1;
    }
}

/// An index pair (i, j), 0-based with i < j, identified with its position in
/// the lexicographic ordering of all C(n,2) pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairIndex {
    pub i: usize,
    pub j: usize,
}

impl PairIndex {
    pub fn new(i: usize, j: usize) -> Self {
        assert!(i < j, "pair index requires i < j");
        PairIndex { i, j }
    }

    /// Lexicographic position among the pairs of {0, .., n-1}.
    pub fn position(&self, n: usize) -> usize {
        assert!(self.j < n);
        // pairs starting with 0..i come first
        self.i * n - self.i * (self.i + 1) / 2 + (self.j - self.i - 1)
    }

    pub fn from_position(n: usize, pos: usize) -> Self {
        let mut i = 0;
        let mut offset = 0;
        loop {
            let block = n - i - 1;
            if pos < offset + block {
                return PairIndex::new(i, i + 1 + pos - offset);
            }
            offset += block;
            i += 1;
        }
    }

    pub fn all(n: usize) -> Vec<PairIndex> {
        let mut out = Vec::with_capacity(pair_count(n));
        for i in 0..n {
            for j in i + 1..n {
                out.push(PairIndex::new(i, j));
            }
        }
        out
    }
}

/// An integer bivector: coordinates over the basis e_i /\ e_j, i < j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bivector {
    pub n: usize,
    pub coords: Vec<BigInt>,
}

impl Bivector {
    pub fn new(n: usize, coords: Vec<BigInt>) -> Result<Self> {
        if coords.len() != pair_count(n) {
            return Err(Error::DimensionMismatch(format!(
                "bivector for n={} needs {} coordinates, got {}",
                n,
                pair_count(n),
                coords.len()
            )));
        }
        Ok(Bivector { n, coords })
    }

    pub fn zero(n: usize) -> Self {
        Bivector {
            n,
            coords: vec![BigInt::zero(); pair_count(n)],
        }
    }

    /// e_i /\ e_j as a bivector.
    pub fn basis(n: usize, i: usize, j: usize) -> Self {
        let mut b = Self::zero(n);
        b.coords[PairIndex::new(i, j).position(n)] = BigInt::one();
        b
    }

    /// v /\ w for integer vectors of length n.
    pub fn wedge(v: &[BigInt], w: &[BigInt]) -> Self {
        let n = v.len();
        assert_eq!(n, w.len());
        let coords = PairIndex::all(n)
            .iter()
            .map(|p| &v[p.i] * &w[p.j] - &v[p.j] * &w[p.i])
            .collect();
        Bivector { n, coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }
}

/// The exterior square of a square matrix: entry ((ij),(kl)) is the 2x2
/// minor of `a` taken from rows i, j and columns k, l.
pub fn ext_square(a: &IntMatrix) -> Result<IntMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if n < 2 {
        return Err(Error::DimensionMismatch(format!(
            "exterior square needs n >= 2, got n={n}"
        )));
    }
    let pairs = PairIndex::all(n);
    let nn = pairs.len();
    let mut out = IntMatrix::zeros(nn, nn);
    for (r, pr) in pairs.iter().enumerate() {
        for (c, pc) in pairs.iter().enumerate() {
            out[(r, c)] =
                &a[(pr.i, pc.i)] * &a[(pr.j, pc.j)] - &a[(pr.i, pc.j)] * &a[(pr.j, pc.i)];
        }
    }
    Ok(out)
}

/// The antisymmetric n x n matrix W with W[i][j] = coordinate (ij) for i < j.
pub fn bivector_to_antisym(w: &Bivector) -> IntMatrix {
    let n = w.n;
    let mut m = IntMatrix::zeros(n, n);
    for p in PairIndex::all(n) {
        let x = w.coords[p.position(n)].clone();
        m[(p.j, p.i)] = -&x;
        m[(p.i, p.j)] = x;
    }
    m
}

/// Inverse of [`bivector_to_antisym`]; requires an antisymmetric matrix.
pub fn antisym_to_bivector(m: &IntMatrix) -> Result<Bivector> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    for i in 0..n {
        for j in 0..n {
            if m[(i, j)] != -&m[(j, i)] {
                return Err(Error::InvalidInput("matrix is not antisymmetric".into()));
            }
        }
    }
    let coords = PairIndex::all(n)
        .iter()
        .map(|p| m[(p.i, p.j)].clone())
        .collect();
    Bivector::new(n, coords)
}

/// All Pluecker quadratic relations of the bivector: one value
/// xi_ij xi_kl - xi_ik xi_jl + xi_il xi_jk per quadruple i < j < k < l.
/// The bivector is decomposable iff it is nonzero and all values vanish.
pub fn plucker_relations(w: &Bivector) -> Vec<BigInt> {
    let n = w.n;
    let at = |i: usize, j: usize| &w.coords[PairIndex::new(i, j).position(n)];
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                for l in k + 1..n {
                    out.push(at(i, j) * at(k, l) - at(i, k) * at(j, l) + at(i, l) * at(j, k));
                }
            }
        }
    }
    out
}

/// Whether a nonzero bivector is of the form v /\ w, i.e. its antisymmetric
/// matrix has rank exactly 2 over the rationals.
pub fn is_decomposable(w: &Bivector) -> Result<bool> {
    if w.is_zero() {
        return Err(Error::ZeroBivector);
    }
    Ok(matrix::rank(&bivector_to_antisym(w)) == 2)
}

/// The single Pluecker quadric value for n = 4:
/// xi_12 xi_34 - xi_13 xi_24 + xi_14 xi_23.
pub fn plucker_form_n4(w: &Bivector) -> Result<BigInt> {
    if w.n != 4 {
        return Err(Error::DimensionMismatch(format!(
            "Pluecker quadric is for n=4, got n={}",
            w.n
        )));
    }
    Ok(plucker_relations(w).pop().expect("one quadruple for n=4"))
}

/// Matrix of the polarized Pluecker form on the basis e_i /\ e_j for n = 4.
pub fn polarization_matrix_n4() -> IntMatrix {
    IntMatrix::from_i64(&[
        &[0, 0, 0, 0, 0, 1],
        &[0, 0, 0, 0, -1, 0],
        &[0, 0, 0, 1, 0, 0],
        &[0, 0, 1, 0, 0, 0],
        &[0, -1, 0, 0, 0, 0],
        &[1, 0, 0, 0, 0, 0],
    ])
}

/// Verdict of the quadric-isometry test B^t P B = +-P for 6 x 6 matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsometryKind {
    Plus,
    Minus,
    No,
}

pub fn is_plucker_isometry(b: &IntMatrix) -> Result<IsometryKind> {
    if b.rows() != 6 || b.cols() != 6 {
        return Err(Error::DimensionMismatch(format!(
            "isometry test needs a 6x6 matrix, got {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    let p = polarization_matrix_n4();
    let btpb = matrix::mat_mul(&matrix::mat_mul(&b.transpose(), &p)?, b)?;
    if btpb == p {
        Ok(IsometryKind::Plus)
    } else if btpb == p.neg() {
        Ok(IsometryKind::Minus)
    } else {
        Ok(IsometryKind::No)
    }
}

/// Two linearly independent columns of a rank-2 matrix, or None.
fn two_independent_columns(w: &IntMatrix) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
    let n = w.rows();
    let first = (0..n).find(|&c| (0..n).any(|r| !w[(r, c)].is_zero()))?;
    let u = w.col(first);
    for c in first + 1..n {
        let v = w.col(c);
        // independent iff some 2x2 minor of [u v] is nonzero
        let indep = (0..n).any(|r1| {
            (r1 + 1..n).any(|r2| !(&u[r1] * &v[r2] - &u[r2] * &v[r1]).is_zero())
        });
        if indep {
            return Some((u, v));
        }
    }
    None
}

/// Intersection of the column spans of two integer generator matrices,
/// returned as integer generating vectors (possibly redundant).
fn span_intersection(g1: &IntMatrix, g2: &IntMatrix) -> Vec<Vec<BigInt>> {
    let n = g1.rows();
    assert_eq!(n, g2.rows());
    let k1 = g1.cols();
    let stacked = IntMatrix::from_fn(n, k1 + g2.cols(), |r, c| {
        if c < k1 {
            g1[(r, c)].clone()
        } else {
            -&g2[(r, c - k1)]
        }
    });
    matrix::kernel_basis(&stacked)
        .into_iter()
        .map(|v| {
            let mut x = vec![BigInt::zero(); n];
            for (c, coef) in v[..k1].iter().enumerate() {
                for r in 0..n {
                    x[r] += coef * &g1[(r, c)];
                }
            }
            x
        })
        .filter(|x| x.iter().any(|e| !e.is_zero()))
        .collect()
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for e in &v {
        g = g.gcd(e);
    }
    if !g.is_zero() && !g.is_one() {
        for e in &mut v {
            *e /= &g;
        }
    }
    // canonical sign: first nonzero entry positive
    if let Some(first) = v.iter().find(|e| !e.is_zero()) {
        if first.is_negative() {
            for e in &mut v {
                *e = -&*e;
            }
        }
    }
    v
}

fn from_cols(cols: &[Vec<BigInt>]) -> IntMatrix {
    let n = cols[0].len();
    IntMatrix::from_fn(n, cols.len(), |r, c| cols[c][r].clone())
}

fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let num = x.numer().sqrt();
    let den = x.denom().sqrt();
    if &(&num * &num) == x.numer() && &(&den * &den) == x.denom() {
        Some(BigRational::new(num, den))
    } else {
        None
    }
}

/// Exterior root: a matrix A in GL(n, Z) with /\^2 A = B, if one exists.
///
/// The root is unique up to a global sign; the representative returned has
/// its first nonzero entry (row-major) positive. Reconstruction: each column
/// of B is read as the bivector (A e_i) /\ (A e_j); the line through A e_i is
/// the intersection of the column spaces of the rank-2 antisymmetric matrices
/// involving i; scalar multipliers on the recovered primitive vectors are
/// pinned (up to one global sign) by matching the 2x2 minors, and the result
/// is verified exactly before being returned.
pub fn ext_root(b: &IntMatrix) -> Result<Option<IntMatrix>> {
    if !b.is_square() {
        return Err(Error::NotSquare {
            rows: b.rows(),
            cols: b.cols(),
        });
    }
    let n = rank_from_pair_count(b.rows())?;
    if !matrix::is_unimodular(b)? {
        return Err(Error::NotUnimodular);
    }
    let pairs = PairIndex::all(n);

    // column (ij) as an antisymmetric matrix; every one must have rank 2
    let mut anti = Vec::with_capacity(pairs.len());
    for (pos, _) in pairs.iter().enumerate() {
        let w = Bivector::new(n, b.col(pos))?;
        let m = bivector_to_antisym(&w);
        if matrix::rank(&m) != 2 {
            return Ok(None);
        }
        anti.push(m);
    }

    // line of A e_i = intersection over j != i of the column spans
    let mut lines: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut space: Option<IntMatrix> = None;
        for j in 0..n {
            if j == i {
                continue;
            }
            let p = PairIndex::new(i.min(j), i.max(j));
            let w = &anti[p.position(n)];
            let Some((u, v)) = two_independent_columns(w) else {
                return Ok(None);
            };
            let gens = from_cols(&[u, v]);
            space = Some(match space {
                None => gens,
                Some(cur) => {
                    let inter = span_intersection(&cur, &gens);
                    if inter.is_empty() {
                        return Ok(None);
                    }
                    from_cols(&inter)
                }
            });
        }
        let space = space.expect("n >= 3 gives at least two pairs");
        if matrix::rank(&space) != 1 {
            return Ok(None);
        }
        let gen = (0..space.cols())
            .map(|c| space.col(c))
            .find(|col| col.iter().any(|e| !e.is_zero()))
            .expect("rank 1 space has a nonzero generator");
        lines.push(primitive(gen));
    }

    // ratios r_ij with (t_i w_i) /\ (t_j w_j) = column (ij), i.e.
    // t_i t_j * (w_i /\ w_j) = B[:, (ij)]
    let mut ratio = vec![vec![BigRational::zero(); n]; n];
    for p in &pairs {
        let wedge = Bivector::wedge(&lines[p.i], &lines[p.j]);
        let col = b.col(p.position(n));
        let Some(k0) = wedge.coords.iter().position(|e| !e.is_zero()) else {
            return Ok(None);
        };
        let r = BigRational::new(col[k0].clone(), wedge.coords[k0].clone());
        if r.is_zero() {
            return Ok(None);
        }
        for (kc, wc) in col.iter().zip(wedge.coords.iter()) {
            if BigRational::from_integer(kc.clone()) != &r * BigRational::from_integer(wc.clone())
            {
                return Ok(None);
            }
        }
        ratio[p.i][p.j] = r;
    }

    // t_1^2 = r_12 r_13 / r_23; the global sign is fixed afterwards
    let t1_sq = &ratio[0][1] * &ratio[0][2] / &ratio[1][2];
    let Some(t1) = rational_sqrt(&t1_sq) else {
        return Ok(None);
    };
    if t1.is_zero() {
        return Ok(None);
    }
    let mut mult = vec![t1.clone()];
    for j in 1..n {
        mult.push(&ratio[0][j] / &t1);
    }

    // integrality of the columns t_i * w_i
    let mut cols: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for (t, w) in mult.iter().zip(lines.iter()) {
        let mut col = Vec::with_capacity(n);
        for e in w {
            let x = t * BigRational::from_integer(e.clone());
            if !x.is_integer() {
                return Ok(None);
            }
            col.push(x.to_integer());
        }
        cols.push(col);
    }
    let mut a = from_cols(&cols);

    if !matrix::is_unimodular(&a)? || ext_square(&a)? != *b {
        return Ok(None);
    }
    // sign representative: first nonzero entry in reading order positive
    let first_neg = (0..a.rows())
        .flat_map(|r| (0..a.cols()).map(move |c| (r, c)))
        .find_map(|(r, c)| {
            let e = &a[(r, c)];
            (!e.is_zero()).then(|| e.is_negative())
        });
    if first_neg == Some(true) {
        a = a.neg();
    }
    Ok(Some(a))
}
