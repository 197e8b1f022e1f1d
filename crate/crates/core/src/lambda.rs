//! Data model for the multiparameter group of a quantum torus: the
//! commutator exponent vectors, the relations matrix they form, the
//! associated alternating forms on Z^n, the center lattice, basis changes
//! and the reduction that removes torsion.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exterior::PairIndex;
use crate::matrix::{self, IntMatrix};

/// A cyclic torsion coordinate: a residue modulo `order`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Torsion {
    pub order: u64,
    pub residue: u64,
}

impl Torsion {
    pub fn new(order: u64, residue: u64) -> Self {
        assert!(order >= 2);
        Torsion {
            order,
            residue: residue % order,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.residue == 0
    }
}

/// Element of the multiparameter group written additively: exponents of the
/// free generators plus an optional cyclic torsion coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentVector {
    pub free: Vec<BigInt>,
    pub torsion: Option<Torsion>,
}

impl ExponentVector {
    pub fn zero(l: usize) -> Self {
        ExponentVector {
            free: vec![BigInt::zero(); l],
            torsion: None,
        }
    }

    pub fn from_free(free: Vec<BigInt>) -> Self {
        ExponentVector { free, torsion: None }
    }

    pub fn is_identity(&self) -> bool {
        self.free.iter().all(|e| e.is_zero())
            && self.torsion.map_or(true, |t| t.is_trivial())
    }

    /// self + k * other in the abelian group.
    fn add_scaled(&mut self, other: &ExponentVector, k: &BigInt) {
        for (a, b) in self.free.iter_mut().zip(other.free.iter()) {
            *a += k * b;
        }
        if let Some(t) = other.torsion {
            let m = BigInt::from(t.order);
            let scaled = (k * BigInt::from(t.residue)).mod_floor(&m);
            let scaled = u64::try_from(&scaled).expect("residue fits");
            let cur = self.torsion.get_or_insert(Torsion::new(t.order, 0));
            assert_eq!(cur.order, t.order, "mixed torsion orders");
            cur.residue = (cur.residue + scaled) % t.order;
        }
    }
}

/// A multiparameter structure on Z^n: for each pair i < j the commutator
/// exponent vector. Pairs absent from the map commute trivially.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiparamSpec {
    n: usize,
    l: usize,
    rel: BTreeMap<(usize, usize), ExponentVector>,
}

impl MultiparamSpec {
    /// `rel` keys are 0-based pairs (i, j) with i < j < n; every exponent
    /// vector must have length `l` and torsion components (if any) must all
    /// share one order.
    pub fn new(
        n: usize,
        l: usize,
        rel: BTreeMap<(usize, usize), ExponentVector>,
    ) -> Result<Self> {
        let mut order = None;
        for (&(i, j), v) in &rel {
            if i >= j || j >= n {
                return Err(Error::IndexOutOfRange(format!("pair ({i},{j}) for n={n}")));
            }
            if v.free.len() != l {
                return Err(Error::DimensionMismatch(format!(
                    "exponent vector for ({i},{j}) has length {}, expected {l}",
                    v.free.len()
                )));
            }
            if let Some(t) = v.torsion {
                match order {
                    None => order = Some(t.order),
                    Some(o) if o == t.order => {}
                    Some(o) => {
                        return Err(Error::InvalidInput(format!(
                            "mixed torsion orders {o} and {}",
                            t.order
                        )))
                    }
                }
            }
        }
        Ok(MultiparamSpec { n, l, rel })
    }

    /// Spec with integer exponent rows given per pair (1-convenience for
    /// tests and fixtures; 0-based pairs).
    pub fn from_rows(n: usize, l: usize, rows: &[((usize, usize), &[i64])]) -> Result<Self> {
        let mut rel = BTreeMap::new();
        for ((i, j), exps) in rows {
            let free = exps.iter().map(|&e| BigInt::from(e)).collect();
            rel.insert((*i, *j), ExponentVector::from_free(free));
        }
        Self::new(n, l, rel)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn rel(&self, i: usize, j: usize) -> ExponentVector {
        assert!(i < j);
        self.rel
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(|| ExponentVector::zero(self.l))
    }

    pub fn is_torsion_free(&self) -> bool {
        self.rel
            .values()
            .all(|v| v.torsion.map_or(true, |t| t.is_trivial()))
    }

    fn require_torsion_free(&self) -> Result<()> {
        if self.is_torsion_free() {
            Ok(())
        } else {
            Err(Error::TorsionPresent)
        }
    }
}

/// The C(n,2) x l integer matrix whose row (ij) is the exponent vector of
/// the commutator of generators i and j, rows in lexicographic pair order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationsMatrix {
    pub n: usize,
    pub matrix: IntMatrix,
}

impl RelationsMatrix {
    pub fn pair_labels(&self) -> Vec<PairIndex> {
        PairIndex::all(self.n)
    }
}

pub fn build_relations_matrix(spec: &MultiparamSpec) -> Result<RelationsMatrix> {
    spec.require_torsion_free()?;
    let n = spec.n();
    let pairs = PairIndex::all(n);
    let m = IntMatrix::from_fn(pairs.len(), spec.l(), |r, c| {
        spec.rel(pairs[r].i, pairs[r].j).free[c].clone()
    });
    Ok(RelationsMatrix { n, matrix: m })
}

/// The commutator exponent of the monomials with exponent vectors `m`, `m'`:
/// sum over i < j of (m_i m'_j - m_j m'_i) times the pair's exponent vector.
pub fn lambda_eval(
    spec: &MultiparamSpec,
    m: &[BigInt],
    m2: &[BigInt],
) -> Result<ExponentVector> {
    let n = spec.n();
    if m.len() != n || m2.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "vectors of length {} and {}, expected {n}",
            m.len(),
            m2.len()
        )));
    }
    let mut acc = ExponentVector::zero(spec.l());
    for p in PairIndex::all(n) {
        let coef = &m[p.i] * &m2[p.j] - &m[p.j] * &m2[p.i];
        if coef.is_zero() {
            continue;
        }
        acc.add_scaled(&spec.rel(p.i, p.j), &coef);
    }
    Ok(acc)
}

/// The alternating form carried by generator `s` (0-based): the
/// antisymmetric n x n matrix with entry (i, j) = s-exponent of the (ij)
/// commutator for i < j.
pub fn form_matrix(spec: &MultiparamSpec, s: usize) -> Result<IntMatrix> {
    spec.require_torsion_free()?;
    if s >= spec.l() {
        return Err(Error::IndexOutOfRange(format!(
            "generator {s} of {}",
            spec.l()
        )));
    }
    let n = spec.n();
    let mut e = IntMatrix::zeros(n, n);
    for p in PairIndex::all(n) {
        let x = spec.rel(p.i, p.j).free[s].clone();
        e[(p.j, p.i)] = -&x;
        e[(p.i, p.j)] = x;
    }
    Ok(e)
}

/// All form matrices E_1 .. E_l.
pub fn form_matrices(spec: &MultiparamSpec) -> Result<Vec<IntMatrix>> {
    (0..spec.l()).map(|s| form_matrix(spec, s)).collect()
}

/// Rank of the column lattice of the relations matrix.
pub fn lambda_rank(spec: &MultiparamSpec) -> Result<usize> {
    Ok(matrix::rank(&build_relations_matrix(spec)?.matrix))
}

/// Basis of {m in Z^n : every form vanishes on m}, the radical of the
/// commutator pairing. An empty list means the center of the quantum torus
/// is just the ground field.
pub fn center_lattice(spec: &MultiparamSpec) -> Result<Vec<Vec<BigInt>>> {
    spec.require_torsion_free()?;
    let forms = form_matrices(spec)?;
    let n = spec.n();
    if forms.is_empty() {
        // trivial pairing: everything is central
        return Ok((0..n)
            .map(|i| {
                let mut v = vec![BigInt::zero(); n];
                v[i] = BigInt::one();
                v
            })
            .collect());
    }
    let stacked = IntMatrix::from_fn(forms.len() * n, n, |r, c| {
        forms[r / n][(r % n, c)].clone()
    });
    Ok(matrix::kernel_basis(&stacked))
}

/// Rewrite the spec over a new basis of the free part: the relations matrix
/// becomes M * P for a unimodular l x l matrix P.
pub fn basis_change(spec: &MultiparamSpec, p: &IntMatrix) -> Result<MultiparamSpec> {
    spec.require_torsion_free()?;
    let l = spec.l();
    if p.rows() != l || p.cols() != l {
        return Err(Error::DimensionMismatch(format!(
            "basis change must be {l}x{l}, got {}x{}",
            p.rows(),
            p.cols()
        )));
    }
    if !matrix::is_unimodular(p)? {
        return Err(Error::NotUnimodular);
    }
    let mut rel = BTreeMap::new();
    for (&key, v) in &spec.rel {
        let row = IntMatrix::from_fn(1, l, |_, c| v.free[c].clone());
        let new_row = matrix::mat_mul(&row, p)?;
        rel.insert(
            key,
            ExponentVector::from_free((0..l).map(|c| new_row[(0, c)].clone()).collect()),
        );
    }
    MultiparamSpec::new(spec.n(), l, rel)
}

/// Pass to the sublattice p Z^n (p = exponent of the torsion subgroup),
/// which kills all torsion: every exponent vector is scaled by p^2 and the
/// torsion components vanish. Returns the torsion-free spec and p.
pub fn torsion_reduce(spec: &MultiparamSpec) -> Result<(MultiparamSpec, u64)> {
    if spec.is_torsion_free() {
        let mut rel = BTreeMap::new();
        for (&key, v) in &spec.rel {
            rel.insert(key, ExponentVector::from_free(v.free.clone()));
        }
        return Ok((MultiparamSpec::new(spec.n(), spec.l(), rel)?, 1));
    }
    let p = spec
        .rel
        .values()
        .filter_map(|v| v.torsion.map(|t| t.order))
        .fold(1u64, num_integer::lcm);
    let scale = BigInt::from(p) * BigInt::from(p);
    let mut rel = BTreeMap::new();
    for (&key, v) in &spec.rel {
        // p^2 * residue = 0 mod order since order | p
        let free = v.free.iter().map(|e| e * &scale).collect();
        rel.insert(key, ExponentVector::from_free(free));
    }
    Ok((MultiparamSpec::new(spec.n(), spec.l(), rel)?, p))
}

/// Build a spec from concrete nonzero rational multiparameters.
///
/// The primes appearing in any value, in increasing order, give exponent
/// vectors for each pair; an SNF reduction of the lattice they span picks
/// the free generator basis (so `l` is the rank of the multiparameter
/// group). Negative values contribute an order-2 torsion coordinate.
pub fn rationals_to_spec(
    n: usize,
    q: &BTreeMap<(usize, usize), BigRational>,
) -> Result<MultiparamSpec> {
    for (&(i, j), v) in q {
        if i >= j || j >= n {
            return Err(Error::IndexOutOfRange(format!("pair ({i},{j}) for n={n}")));
        }
        if v.is_zero() {
            return Err(Error::InvalidInput(format!(
                "multiparameter for ({i},{j}) is zero"
            )));
        }
    }
    // collect the primes of all numerators and denominators
    let mut primes: Vec<BigInt> = Vec::new();
    let mut factored: BTreeMap<(usize, usize), (BTreeMap<BigInt, i64>, bool)> = BTreeMap::new();
    for (&key, v) in q {
        let negative = v.is_negative();
        let mut exps: BTreeMap<BigInt, i64> = BTreeMap::new();
        for (b, e) in [(v.numer().abs(), 1i64), (v.denom().abs(), -1i64)] {
            for (p, k) in factor(&b) {
                *exps.entry(p.clone()).or_insert(0) += e * k as i64;
                if !primes.contains(&p) {
                    primes.push(p);
                }
            }
        }
        exps.retain(|_, e| *e != 0);
        factored.insert(key, (exps, negative));
    }
    primes.sort();

    // exponent matrix over the prime basis, rows in pair order
    let pairs = PairIndex::all(n);
    let m0 = IntMatrix::from_fn(pairs.len(), primes.len(), |r, c| {
        factored
            .get(&(pairs[r].i, pairs[r].j))
            .and_then(|(exps, _)| exps.get(&primes[c]).copied())
            .map(BigInt::from)
            .unwrap_or_default()
    });

    // lattice basis via SNF: M0 = U^-1 S V^-1, so the first r columns of
    // U^-1 are the coordinates of the rows over the basis d_i * row_i(V^-1)
    let res = matrix::snf(&m0);
    let r = res.rank();
    let u_inv = matrix::unimodular_inverse(&res.u)?;

    let mut rel = BTreeMap::new();
    for (row, p) in pairs.iter().enumerate() {
        let free: Vec<BigInt> = (0..r).map(|c| u_inv[(row, c)].clone()).collect();
        let torsion = factored
            .get(&(p.i, p.j))
            .and_then(|(_, neg)| neg.then_some(Torsion::new(2, 1)));
        if free.iter().all(|e| e.is_zero()) && torsion.is_none() {
            continue;
        }
        rel.insert((p.i, p.j), ExponentVector { free, torsion });
    }
    MultiparamSpec::new(n, r, rel)
}

/// The free generators chosen by [`rationals_to_spec`], as positive
/// rationals over the same primes; generator s is the product of
/// primes[k]^B[s][k]. Returned together with the evaluation closure input:
/// (generators, per-pair signs are carried in the spec's torsion part).
pub fn spec_generators(
    n: usize,
    q: &BTreeMap<(usize, usize), BigRational>,
) -> Result<Vec<BigRational>> {
    // recompute exactly as rationals_to_spec does
    let mut primes: Vec<BigInt> = Vec::new();
    let mut factored: BTreeMap<(usize, usize), BTreeMap<BigInt, i64>> = BTreeMap::new();
    for (&key, v) in q {
        let mut exps: BTreeMap<BigInt, i64> = BTreeMap::new();
        for (b, e) in [(v.numer().abs(), 1i64), (v.denom().abs(), -1i64)] {
            for (p, k) in factor(&b) {
                *exps.entry(p.clone()).or_insert(0) += e * k as i64;
                if !primes.contains(&p) {
                    primes.push(p);
                }
            }
        }
        exps.retain(|_, e| *e != 0);
        factored.insert(key, exps);
    }
    primes.sort();
    let pairs = PairIndex::all(n);
    let m0 = IntMatrix::from_fn(pairs.len(), primes.len(), |r, c| {
        factored
            .get(&(pairs[r].i, pairs[r].j))
            .and_then(|exps| exps.get(&primes[c]).copied())
            .map(BigInt::from)
            .unwrap_or_default()
    });
    let res = matrix::snf(&m0);
    let r = res.rank();
    let v_inv = matrix::unimodular_inverse(&res.v)?;
    // basis vector s over the primes: d_s * row s of V^-1
    let mut gens = Vec::with_capacity(r);
    for s in 0..r {
        let d = res.s[(s, s)].clone();
        let mut g = BigRational::one();
        for (c, p) in primes.iter().enumerate() {
            let e = &d * &v_inv[(s, c)];
            g *= rational_pow(&BigRational::from_integer(p.clone()), &e);
        }
        gens.push(g);
    }
    Ok(gens)
}

fn rational_pow(base: &BigRational, exp: &BigInt) -> BigRational {
    let mag = u64::try_from(exp.magnitude()).expect("small exponent");
    let mut acc = BigRational::one();
    for _ in 0..mag {
        acc *= base;
    }
    if exp.is_negative() {
        acc.recip()
    } else {
        acc
    }
}

/// Trial-division factorization; fine for desk-scale fixture values.
fn factor(x: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = x.abs();
    let mut out = Vec::new();
    if n <= BigInt::one() {
        return out;
    }
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        let mut k = 0;
        while (&n % &d).is_zero() {
            n /= &d;
            k += 1;
        }
        if k > 0 {
            out.push((d.clone(), k));
        }
        d += 1;
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}
