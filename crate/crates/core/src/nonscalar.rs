//! The non-scalar automorphism engine: membership in Aut(Z^n, lambda) via
//! the exterior-square action on the relations matrix, the equivalent
//! all-forms symplectic test, the SNF description of the stabilizer, a
//! bounded exhaustive search with constraint pruning, and verification of
//! the closed-form families that arise in small rank.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{self, PairIndex};
use crate::lambda::{self, MultiparamSpec, RelationsMatrix};
use crate::matrix::{self, IntMatrix};

fn check_aut_input(a: &IntMatrix, spec: &MultiparamSpec) -> Result<()> {
    if !spec.is_torsion_free() {
        return Err(Error::TorsionPresent);
    }
    let n = spec.n();
    if a.rows() != n || a.cols() != n {
        return Err(Error::DimensionMismatch(format!(
            "matrix is {}x{}, spec has n={n}",
            a.rows(),
            a.cols()
        )));
    }
    if !matrix::is_unimodular(a)? {
        return Err(Error::NotUnimodular);
    }
    Ok(())
}

/// Membership of `a` (acting on column vectors) in Aut(Z^n, lambda):
/// the exterior square of the transpose must fix every column of the
/// relations matrix.
pub fn is_nonscalar_aut(a: &IntMatrix, spec: &MultiparamSpec) -> Result<bool> {
    check_aut_input(a, spec)?;
    let m = lambda::build_relations_matrix(spec)?.matrix;
    let sq = exterior::ext_square(&a.transpose())?;
    Ok(matrix::mat_mul(&sq, &m)? == m)
}

/// The equivalent membership route: `a` must preserve every alternating
/// form carried by a generator, a^t E_s a = E_s.
pub fn is_symplectic_all(a: &IntMatrix, spec: &MultiparamSpec) -> Result<bool> {
    check_aut_input(a, spec)?;
    let at = a.transpose();
    for e in lambda::form_matrices(spec)? {
        if matrix::mat_mul(&matrix::mat_mul(&at, &e)?, a)? != e {
            return Ok(false);
        }
    }
    Ok(true)
}

/// SNF description of the stabilizer of the relations matrix inside
/// GL(N, Z): conjugating by the row transform U reduces membership to
/// "the first r columns equal those of the identity".
#[derive(Debug, Clone)]
pub struct StabDescription {
    /// Bivector dimension N = C(n,2).
    pub dim: usize,
    /// Rank of the relations matrix.
    pub rank: usize,
    /// Row transform from the Smith normal form of the relations matrix.
    pub u: IntMatrix,
    relations: IntMatrix,
}

impl StabDescription {
    /// Direct membership test B M = M.
    pub fn contains(&self, b: &IntMatrix) -> Result<bool> {
        if b.rows() != self.dim || b.cols() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "stabilizer lives in GL({},Z), got {}x{}",
                self.dim,
                b.rows(),
                b.cols()
            )));
        }
        Ok(matrix::mat_mul(b, &self.relations)? == self.relations)
    }

    /// Conjugated membership test: U B U^-1 agrees with the identity in its
    /// first `rank` columns.
    pub fn contains_via_snf(&self, b: &IntMatrix) -> Result<bool> {
        let u_inv = matrix::unimodular_inverse(&self.u)?;
        let conj = matrix::mat_mul(&matrix::mat_mul(&self.u, b)?, &u_inv)?;
        let id = IntMatrix::identity(self.dim);
        for c in 0..self.rank {
            for r in 0..self.dim {
                if conj[(r, c)] != id[(r, c)] {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl std::fmt::Display for StabDescription {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "stab = U^-1 {{ X in GL({NN},Z) : first {r} columns of X equal those of I }} U",
            NN = self.dim,
            r = self.rank
        )
    }
}

pub fn stab_description(m: &RelationsMatrix) -> StabDescription {
    let res = matrix::snf(&m.matrix);
    StabDescription {
        dim: m.matrix.rows(),
        rank: res.rank(),
        u: res.u,
        relations: m.matrix.clone(),
    }
}

/// The closed-form automorphism families displayed for small n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// {+I, -I} in any rank.
    PmIdentity,
    /// n = 3: epsilon on the diagonal, free entries at (1,3) and (2,3).
    N3Upper,
    /// n = 4: epsilon on the diagonal, one free entry at (1,4).
    N4F,
    /// The transpose of `N4F` (free entry at (4,1)); this is the
    /// stabilizer-side representative and is *not* an automorphism family.
    N4FTransposed,
    /// n = 4: epsilon on the diagonal, free entries at (1,2) and (1,3).
    N4Phi,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::PmIdentity => "pm_identity",
            Family::N3Upper => "n3_upper",
            Family::N4F => "n4_f",
            Family::N4FTransposed => "n4_f_transposed",
            Family::N4Phi => "n4_phi",
        }
    }

    fn rank(&self) -> Option<usize> {
        match self {
            Family::PmIdentity => None,
            Family::N3Upper => Some(3),
            Family::N4F | Family::N4FTransposed | Family::N4Phi => Some(4),
        }
    }

    /// All members with every entry bounded by `bound` in absolute value.
    pub fn members(&self, n: usize, bound: i64) -> Result<Vec<IntMatrix>> {
        if let Some(need) = self.rank() {
            if need != n {
                return Err(Error::DimensionMismatch(format!(
                    "family {} needs n={need}, got n={n}",
                    self.name()
                )));
            }
        }
        let mut out = Vec::new();
        let span = || -bound..=bound;
        for eps in [1i64, -1] {
            match self {
                Family::PmIdentity => {
                    let mut m = IntMatrix::identity(n);
                    if eps < 0 {
                        m = m.neg();
                    }
                    out.push(m);
                }
                Family::N3Upper => {
                    for a in span() {
                        for b in span() {
                            let mut m = IntMatrix::identity(3);
                            for d in 0..3 {
                                m[(d, d)] = BigInt::from(eps);
                            }
                            m[(0, 2)] = BigInt::from(a);
                            m[(1, 2)] = BigInt::from(b);
                            out.push(m);
                        }
                    }
                }
                Family::N4F | Family::N4FTransposed => {
                    for b in span() {
                        let mut m = IntMatrix::identity(4);
                        for d in 0..4 {
                            m[(d, d)] = BigInt::from(eps);
                        }
                        m[(0, 3)] = BigInt::from(-b);
                        if *self == Family::N4FTransposed {
                            m = m.transpose();
                        }
                        out.push(m);
                    }
                }
                Family::N4Phi => {
                    for a in span() {
                        for b in span() {
                            let mut m = IntMatrix::identity(4);
                            for d in 0..4 {
                                m[(d, d)] = BigInt::from(eps);
                            }
                            m[(0, 1)] = BigInt::from(a);
                            m[(0, 2)] = BigInt::from(b);
                            out.push(m);
                        }
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

/// Check every family instantiation with parameters in [-samples, samples]
/// against the membership test.
pub fn verify_family(family: Family, spec: &MultiparamSpec, samples: i64) -> Result<bool> {
    for m in family.members(spec.n(), samples)? {
        if !is_nonscalar_aut(&m, spec)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Outcome of the bounded exhaustive search.
#[derive(Debug, Clone)]
pub struct SearchReport {
    pub bound: i64,
    /// Every automorphism with all entries bounded, sorted lexicographically
    /// by entries.
    pub found: Vec<IntMatrix>,
    pub closed_under_product_within_bound: bool,
    pub contains_minus_identity: bool,
    pub family_match: Option<Family>,
    pub nodes: u64,
}

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

pub fn search_auts(spec: &MultiparamSpec, bound: i64) -> Result<SearchReport> {
    search_auts_with_budget(spec, bound, DEFAULT_NODE_BUDGET)
}

/// Column-by-column backtracking over candidate columns in {-bound..bound}^n.
///
/// A partial assignment survives only if every placed pair of columns
/// satisfies the pairwise form constraints c_i^t E_s c_j = (E_s)_{ij}; full
/// assignments are kept when unimodular, and every keeper is re-verified
/// through the exterior-square route. The node budget caps the number of
/// partial assignments tried; exceeding it is an error, never a truncation.
pub fn search_auts_with_budget(
    spec: &MultiparamSpec,
    bound: i64,
    budget: u64,
) -> Result<SearchReport> {
    if !spec.is_torsion_free() {
        return Err(Error::TorsionPresent);
    }
    if bound < 1 {
        return Err(Error::Precondition("search bound must be >= 1".into()));
    }
    if bound > 10_000 {
        return Err(Error::Precondition(
            "search bound above 10000 is not supported".into(),
        ));
    }
    let n = spec.n();
    if n < 2 {
        return Err(Error::Precondition("search needs n >= 2".into()));
    }
    let forms: Vec<Vec<Vec<i64>>> = lambda::form_matrices(spec)?
        .iter()
        .map(|e| e.to_i64())
        .collect::<Result<_>>()?;
    let max_entry = forms
        .iter()
        .flatten()
        .flatten()
        .map(|e| e.unsigned_abs())
        .max()
        .unwrap_or(0);
    // i64 headroom for the dot products c^t E c'
    if (n as u128) * (bound as u128) * (bound as u128) * (max_entry as u128 + 1)
        >= (i64::MAX / 4) as u128
    {
        return Err(Error::Precondition(
            "form entries too large for the bounded search".into(),
        ));
    }

    // candidate columns in lexicographic order
    let mut candidates: Vec<Vec<i64>> = Vec::new();
    let mut cur = vec![-bound; n];
    loop {
        candidates.push(cur.clone());
        let Some(k) = (0..n).rev().find(|&k| cur[k] < bound) else {
            break;
        };
        cur[k] += 1;
        for x in cur.iter_mut().skip(k + 1) {
            *x = -bound;
        }
    }

    struct Ctx<'a> {
        n: usize,
        forms: &'a [Vec<Vec<i64>>],
        candidates: &'a [Vec<i64>],
        budget: u64,
        nodes: u64,
        placed: Vec<usize>,
        // placed_rows[i][s] = c_i^t E_s, precomputed per placed column
        placed_rows: Vec<Vec<Vec<i64>>>,
        found: Vec<IntMatrix>,
    }

    impl Ctx<'_> {
        fn descend(&mut self, spec: &MultiparamSpec) -> Result<()> {
            let depth = self.placed.len();
            if depth == self.n {
                let a = IntMatrix::from_fn(self.n, self.n, |r, c| {
                    BigInt::from(self.candidates[self.placed[c]][r])
                });
                if matrix::is_unimodular(&a)? {
                    // cross-check through the exterior-square route
                    if !is_nonscalar_aut(&a, spec)? {
                        return Err(Error::InternalInconsistency(format!(
                            "search candidate {a} satisfies all form constraints \
                             but fails the exterior-square membership test"
                        )));
                    }
                    self.found.push(a);
                }
                return Ok(());
            }
            'next_candidate: for (ci, c) in self.candidates.iter().enumerate() {
                self.nodes += 1;
                if self.nodes > self.budget {
                    return Err(Error::NodeBudgetExceeded {
                        budget: self.budget,
                    });
                }
                for (i, rows) in self.placed_rows.iter().enumerate() {
                    for (s, row) in rows.iter().enumerate() {
                        let dot: i64 = row.iter().zip(c.iter()).map(|(a, b)| a * b).sum();
                        if dot != self.forms[s][i][depth] {
                            continue 'next_candidate;
                        }
                    }
                }
                let rows: Vec<Vec<i64>> = self
                    .forms
                    .iter()
                    .map(|e| {
                        (0..self.n)
                            .map(|col| (0..self.n).map(|r| c[r] * e[r][col]).sum())
                            .collect()
                    })
                    .collect();
                self.placed.push(ci);
                self.placed_rows.push(rows);
                self.descend(spec)?;
                self.placed.pop();
                self.placed_rows.pop();
            }
            Ok(())
        }
    }

    let mut ctx = Ctx {
        n,
        forms: &forms,
        candidates: &candidates,
        budget,
        nodes: 0,
        placed: Vec::new(),
        placed_rows: Vec::new(),
        found: Vec::new(),
    };
    ctx.descend(spec)?;
    let mut found = ctx.found;
    found.sort();

    let minus_identity = IntMatrix::identity(n).neg();
    let contains_minus_identity = found.binary_search(&minus_identity).is_ok();

    let mut closed = true;
    'outer: for a in &found {
        for b in &found {
            let p = matrix::mat_mul(a, b)?;
            let within = (0..n)
                .all(|r| (0..n).all(|c| p[(r, c)].abs() <= BigInt::from(bound)));
            if within && found.binary_search(&p).is_err() {
                closed = false;
                break 'outer;
            }
        }
    }

    let family_match = [
        Family::PmIdentity,
        Family::N3Upper,
        Family::N4F,
        Family::N4Phi,
    ]
    .into_iter()
    .find(|f| {
        f.members(n, bound)
            .map(|members| members == found)
            .unwrap_or(false)
    });

    Ok(SearchReport {
        bound,
        found,
        closed_under_product_within_bound: closed,
        contains_minus_identity,
        family_match,
        nodes: ctx.nodes,
    })
}

/// Verdict of the independence pattern that forces Aut = {+-I}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Z2Verdict {
    pub n: usize,
    pub trivial_pairs: usize,
}

impl std::fmt::Display for Z2Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Aut(Z^{}, lambda) = {{+I, -I}} (Z_2)", self.n)
    }
}

/// Detect the hypothesis pattern "commutators (1,2)..(1,n-2) trivial, the
/// remaining C(n,2) - (n-3) multiparameters independent" for n >= 5, whose
/// automorphism group is exactly {+I, -I}.
pub fn z2_case_check(spec: &MultiparamSpec) -> Result<Option<Z2Verdict>> {
    if !spec.is_torsion_free() {
        return Err(Error::TorsionPresent);
    }
    let n = spec.n();
    if n < 5 {
        return Ok(None);
    }
    let trivial_count = n - 3;
    let m = lambda::build_relations_matrix(spec)?.matrix;
    let pairs = PairIndex::all(n);
    let expected_nonzero = m.rows() - trivial_count;
    if spec.l() != expected_nonzero {
        return Ok(None);
    }
    let mut seen = vec![false; spec.l()];
    for (row, p) in pairs.iter().enumerate() {
        let is_trivial_pair = p.i == 0 && p.j <= trivial_count;
        let row_entries: Vec<&BigInt> = (0..m.cols()).map(|c| &m[(row, c)]).collect();
        if is_trivial_pair {
            if row_entries.iter().any(|e| !e.is_zero()) {
                return Ok(None);
            }
        } else {
            // must be a standard basis vector not seen before
            let ones: Vec<usize> = row_entries
                .iter()
                .enumerate()
                .filter(|(_, e)| !e.is_zero())
                .map(|(c, _)| c)
                .collect();
            if ones.len() != 1 || !row_entries[ones[0]].is_one() || seen[ones[0]] {
                return Ok(None);
            }
            seen[ones[0]] = true;
        }
    }
    Ok(Some(Z2Verdict {
        n,
        trivial_pairs: trivial_count,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::random_unimodular;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn n3r2_spec() -> MultiparamSpec {
        MultiparamSpec::from_rows(3, 2, &[((0, 2), &[1, 0]), ((1, 2), &[0, 1])]).unwrap()
    }

    fn n4_f_spec() -> MultiparamSpec {
        // generators q14, q23, q24, q34; q12 = q13 = 1
        MultiparamSpec::from_rows(
            4,
            4,
            &[
                ((0, 3), &[1, 0, 0, 0]),
                ((1, 2), &[0, 1, 0, 0]),
                ((1, 3), &[0, 0, 1, 0]),
                ((2, 3), &[0, 0, 0, 1]),
            ],
        )
        .unwrap()
    }

    fn product_relation_spec() -> MultiparamSpec {
        MultiparamSpec::from_rows(
            4,
            5,
            &[
                ((0, 1), &[1, 1, 1, 1, 1]),
                ((0, 2), &[1, 0, 0, 0, 0]),
                ((0, 3), &[0, 1, 0, 0, 0]),
                ((1, 2), &[0, 0, 1, 0, 0]),
                ((1, 3), &[0, 0, 0, 1, 0]),
                ((2, 3), &[0, 0, 0, 0, 1]),
            ],
        )
        .unwrap()
    }

    fn three_trivial_spec() -> MultiparamSpec {
        MultiparamSpec::from_rows(
            4,
            3,
            &[((1, 2), &[1, 0, 0]), ((1, 3), &[0, 1, 0]), ((2, 3), &[0, 0, 1])],
        )
        .unwrap()
    }

    fn random_spec(rng: &mut ChaCha8Rng) -> MultiparamSpec {
        let n = rng.gen_range(3..=5);
        let l = rng.gen_range(0..=3);
        let pairs = PairIndex::all(n);
        let mut rows = std::collections::BTreeMap::new();
        for p in pairs {
            if rng.gen_bool(0.6) {
                let free = (0..l).map(|_| BigInt::from(rng.gen_range(-2i64..=2))).collect();
                rows.insert((p.i, p.j), crate::lambda::ExponentVector::from_free(free));
            }
        }
        MultiparamSpec::new(n, l, rows).unwrap()
    }

    #[test]
    fn n2_membership_is_special_linear() {
        let spec = MultiparamSpec::from_rows(2, 1, &[((0, 1), &[1])]).unwrap();
        for seed in 0..100 {
            let a = random_unimodular(2, 12, seed);
            let want = matrix::det(&a).unwrap().is_one();
            assert_eq!(is_nonscalar_aut(&a, &spec).unwrap(), want);
        }
    }

    #[test]
    fn minus_identity_is_always_a_member() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let spec = random_spec(&mut rng);
            let m = IntMatrix::identity(spec.n()).neg();
            assert!(is_nonscalar_aut(&m, &spec).unwrap());
        }
    }

    #[test]
    fn n3r2_membership_fixtures() {
        let spec = n3r2_spec();
        let member = IntMatrix::from_i64(&[&[1, 0, 3], &[0, 1, -2], &[0, 0, 1]]);
        assert!(is_nonscalar_aut(&member, &spec).unwrap());
        let swap = IntMatrix::from_i64(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        assert!(!is_nonscalar_aut(&swap, &spec).unwrap());
    }

    #[test]
    fn membership_rejects_bad_input() {
        let spec = n3r2_spec();
        let not_unimodular = IntMatrix::from_i64(&[&[2, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(matches!(
            is_nonscalar_aut(&not_unimodular, &spec),
            Err(Error::NotUnimodular)
        ));
        let wrong_size = IntMatrix::identity(4);
        assert!(matches!(
            is_nonscalar_aut(&wrong_size, &spec),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn symplectic_route_basics() {
        let spec = n3r2_spec();
        assert!(is_symplectic_all(&IntMatrix::identity(3), &spec).unwrap());
        // det -1 breaks a nondegenerate n=2 form
        let n2 = MultiparamSpec::from_rows(2, 1, &[((0, 1), &[1])]).unwrap();
        let refl = IntMatrix::from_i64(&[&[1, 0], &[0, -1]]);
        assert!(!is_symplectic_all(&refl, &n2).unwrap());
    }

    #[test]
    fn two_membership_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for trial in 0..150 {
            let spec = random_spec(&mut rng);
            let a = random_unimodular(spec.n(), 10, trial);
            assert_eq!(
                is_nonscalar_aut(&a, &spec).unwrap(),
                is_symplectic_all(&a, &spec).unwrap(),
                "trial {trial}"
            );
        }
    }

    #[test]
    fn membership_invariant_under_basis_change() {
        let spec = n3r2_spec();
        for seed in 0..50 {
            let p = random_unimodular(2, 8, seed);
            let changed = lambda::basis_change(&spec, &p).unwrap();
            let a = random_unimodular(3, 10, seed + 1000);
            assert_eq!(
                is_nonscalar_aut(&a, &spec).unwrap(),
                is_nonscalar_aut(&a, &changed).unwrap()
            );
        }
    }

    #[test]
    fn stab_description_of_column_deleted_identity() {
        // I_6 with the first three columns deleted
        let m = IntMatrix::from_fn(6, 3, |r, c| {
            if r == c + 3 {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        });
        let stab = stab_description(&RelationsMatrix { n: 4, matrix: m });
        assert_eq!(stab.rank, 3);
        // members agree with I outside the first three columns
        let mut member = IntMatrix::identity(6);
        member[(0, 1)] = BigInt::from(7);
        member[(5, 2)] = BigInt::from(-3);
        assert!(stab.contains(&member).unwrap());
        assert!(stab.contains_via_snf(&member).unwrap());
        let mut outsider = IntMatrix::identity(6);
        outsider[(0, 4)] = BigInt::one();
        assert!(!stab.contains(&outsider).unwrap());
        assert!(!stab.contains_via_snf(&outsider).unwrap());
    }

    #[test]
    fn stab_description_of_zero_matrix() {
        let stab = stab_description(&RelationsMatrix {
            n: 4,
            matrix: IntMatrix::zeros(6, 2),
        });
        assert_eq!(stab.rank, 0);
        for seed in 0..10 {
            let b = random_unimodular(6, 10, seed);
            assert!(stab.contains(&b).unwrap());
            assert!(stab.contains_via_snf(&b).unwrap());
        }
    }

    #[test]
    fn stab_description_of_product_relation_matrix() {
        let m = lambda::build_relations_matrix(&product_relation_spec()).unwrap();
        let stab = stab_description(&m);
        assert_eq!(stab.rank, 5);
        // the displayed parametrized stabilizer family
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let (x, y, z, u, v) = (
                rng.gen_range(-3i64..=3),
                rng.gen_range(-3i64..=3),
                rng.gen_range(-3i64..=3),
                rng.gen_range(-3i64..=3),
                rng.gen_range(-3i64..=3),
            );
            let s = u + v + x + y + z;
            let b = IntMatrix::from_i64(&[
                &[1 - s, s, s, s, s, s],
                &[-x, x + 1, x, x, x, x],
                &[-y, y, y + 1, y, y, y],
                &[-z, z, z, z + 1, z, z],
                &[-u, u, u, u, u + 1, u],
                &[-v, v, v, v, v, v + 1],
            ]);
            assert!(stab.contains(&b).unwrap());
            assert!(stab.contains_via_snf(&b).unwrap());
        }
    }

    #[test]
    fn stab_routes_agree_on_random_matrices() {
        let m = lambda::build_relations_matrix(&n3r2_spec()).unwrap();
        let stab = stab_description(&m);
        for seed in 0..50 {
            let b = random_unimodular(3, 10, seed);
            assert_eq!(
                stab.contains(&b).unwrap(),
                stab.contains_via_snf(&b).unwrap(),
                "seed {seed}"
            );
        }
    }

    #[test]
    fn search_n3r2_bound_one() {
        let report = search_auts(&n3r2_spec(), 1).unwrap();
        let family = Family::N3Upper.members(3, 1).unwrap();
        assert_eq!(report.found, family);
        assert_eq!(report.found.len(), 18);
        assert!(report.contains_minus_identity);
        assert!(report.closed_under_product_within_bound);
        assert_eq!(report.family_match, Some(Family::N3Upper));
    }

    #[test]
    fn search_n4_f_bound_one() {
        let report = search_auts(&n4_f_spec(), 1).unwrap();
        assert_eq!(report.found, Family::N4F.members(4, 1).unwrap());
        assert_eq!(report.found.len(), 6);
        assert_eq!(report.family_match, Some(Family::N4F));
    }

    #[test]
    fn search_product_relation_bound_one() {
        let report = search_auts(&product_relation_spec(), 1).unwrap();
        assert_eq!(report.found, Family::PmIdentity.members(4, 1).unwrap());
        assert_eq!(report.family_match, Some(Family::PmIdentity));
    }

    #[test]
    fn search_found_is_closed_under_inverse_membership() {
        let report = search_auts(&n3r2_spec(), 1).unwrap();
        for a in &report.found {
            let inv = matrix::unimodular_inverse(a).unwrap();
            assert!(is_nonscalar_aut(&inv, &n3r2_spec()).unwrap());
        }
    }

    #[test]
    fn search_budget_exhaustion_is_an_error() {
        let err = search_auts_with_budget(&n3r2_spec(), 2, 40).unwrap_err();
        assert!(matches!(err, Error::NodeBudgetExceeded { budget: 40 }));
    }

    #[test]
    fn search_rejects_bad_bounds() {
        assert!(matches!(
            search_auts(&n3r2_spec(), 0),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn verify_families() {
        assert!(verify_family(Family::N3Upper, &n3r2_spec(), 5).unwrap());
        assert!(verify_family(Family::PmIdentity, &n3r2_spec(), 5).unwrap());
        assert!(verify_family(Family::N4F, &n4_f_spec(), 5).unwrap());
        // the transposed orientation fails: it is the stabilizer-side
        // representative, not the automorphism family
        assert!(!verify_family(Family::N4FTransposed, &n4_f_spec(), 5).unwrap());
        assert!(verify_family(Family::N4Phi, &three_trivial_spec(), 5).unwrap());
        assert!(matches!(
            verify_family(Family::N3Upper, &n4_f_spec(), 2),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn z2_pattern_detection() {
        // n = 5: q12 = q13 = 1, remaining 8 independent
        let mut rows = Vec::new();
        let pairs = PairIndex::all(5);
        let mut gen = 0usize;
        let mut storage: Vec<((usize, usize), Vec<i64>)> = Vec::new();
        for p in &pairs {
            if p.i == 0 && p.j <= 2 {
                continue;
            }
            let mut row = vec![0i64; 8];
            row[gen] = 1;
            gen += 1;
            storage.push(((p.i, p.j), row));
        }
        for (key, row) in &storage {
            rows.push((*key, row.as_slice()));
        }
        let spec = MultiparamSpec::from_rows(5, 8, &rows).unwrap();
        let verdict = z2_case_check(&spec).unwrap().expect("pattern matches");
        assert_eq!(verdict.n, 5);
        assert_eq!(verdict.trivial_pairs, 2);

        assert!(z2_case_check(&n3r2_spec()).unwrap().is_none());
        assert!(z2_case_check(&n4_f_spec()).unwrap().is_none());
    }

    #[test]
    fn found_automorphisms_fix_relation_columns_pointwise() {
        let spec = n3r2_spec();
        let m = lambda::build_relations_matrix(&spec).unwrap().matrix;
        let report = search_auts(&spec, 1).unwrap();
        assert_eq!(matrix::rank(&m), spec.l());
        for a in &report.found {
            let sq = exterior::ext_square(&a.transpose()).unwrap();
            for c in 0..m.cols() {
                let col = m.col(c);
                assert_eq!(matrix::mat_vec(&sq, &col).unwrap(), col);
            }
        }
    }
}
