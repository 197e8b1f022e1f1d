//! The symmetric-group action on signed basis bivectors +-e_i /\ e_j:
//! cyclic orbits, Burnside counts, and the rank of the sublattice fixed by
//! the exterior square of a permutation matrix.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{self, pair_count, PairIndex};
use crate::matrix::{self, IntMatrix};
use crate::perm::Permutation;

/// A signed basis bivector, sign in {+1, -1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SignedPair {
    pub pair: PairIndex,
    pub sign: i8,
}

impl SignedPair {
    pub fn new(pair: PairIndex, sign: i8) -> Self {
        assert!(sign == 1 || sign == -1);
        SignedPair { pair, sign }
    }

    pub fn negated(&self) -> Self {
        SignedPair {
            pair: self.pair,
            sign: -self.sign,
        }
    }

    pub fn all(n: usize) -> Vec<SignedPair> {
        let mut out = Vec::with_capacity(2 * pair_count(n));
        for p in PairIndex::all(n) {
            out.push(SignedPair::new(p, 1));
            out.push(SignedPair::new(p, -1));
        }
        out
    }
}

/// Image of a signed pair under the exterior square of the permutation
/// matrix: e_i /\ e_j maps to e_{pi(i)} /\ e_{pi(j)}, with a sign flip when
/// the images arrive out of order.
pub fn perm_ext_action(pi: &Permutation, x: SignedPair) -> SignedPair {
    let a = pi.apply(x.pair.i);
    let b = pi.apply(x.pair.j);
    if a < b {
        SignedPair::new(PairIndex::new(a, b), x.sign)
    } else {
        SignedPair::new(PairIndex::new(b, a), -x.sign)
    }
}

/// Orbits of the cyclic group generated by `pi` on the signed pairs.
pub fn orbits(pi: &Permutation, n: usize) -> Vec<Vec<SignedPair>> {
    let mut seen: BTreeSet<SignedPair> = BTreeSet::new();
    let mut out = Vec::new();
    for start in SignedPair::all(n) {
        if seen.contains(&start) {
            continue;
        }
        let mut orbit = vec![start];
        seen.insert(start);
        let mut cur = perm_ext_action(pi, start);
        while cur != start {
            seen.insert(cur);
            orbit.push(cur);
            cur = perm_ext_action(pi, cur);
        }
        out.push(orbit);
    }
    out
}

/// Number of cyclic orbits on the signed pairs via the Burnside formula:
/// (n(n-1) + sum over nontrivial powers of 2 C(fix, 2)) / order.
pub fn burnside_count(pi: &Permutation, n: usize) -> Result<usize> {
    if pi.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "permutation of {} elements, n = {n}",
            pi.n()
        )));
    }
    let order = pi.order();
    let mut total = n * (n - 1);
    let mut power = pi.clone();
    for _ in 1..order {
        let fix = power.fixed_points().len();
        total += fix * fix.saturating_sub(1); // 2 * C(fix, 2)
        power = power.compose(pi);
    }
    if total % order != 0 {
        return Err(Error::InternalInconsistency(
            "Burnside sum not divisible by the group order".into(),
        ));
    }
    Ok(total / order)
}

/// Direct orbit enumeration; the independent cross-check for
/// [`burnside_count`].
pub fn orbit_count_direct(pi: &Permutation, n: usize) -> usize {
    orbits(pi, n).len()
}

/// Rank of the sublattice of /\^2 Z^n fixed by the exterior square of the
/// permutation matrix, computed as C(n,2) - rank(/\^2 P - I).
///
/// The identity is rejected: its fixed rank is all of C(n,2) and the
/// audited bound C(n-1,2) is about genuine permutations.
pub fn fix_rank(pi: &Permutation, n: usize) -> Result<usize> {
    if pi.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "permutation of {} elements, n = {n}",
            pi.n()
        )));
    }
    if n < 3 {
        return Err(Error::Precondition("fix_rank needs n >= 3".into()));
    }
    if pi.is_identity() {
        return Err(Error::Precondition(
            "fix_rank of the identity is C(n,2); the bound C(n-1,2) concerns \
             non-identity permutations only"
                .into(),
        ));
    }
    let sq = exterior::ext_square(&pi.matrix())?;
    let diff = sq.sub(&IntMatrix::identity(pair_count(n)))?;
    Ok(pair_count(n) - matrix::rank(&diff))
}

/// The orbit route to the same rank: nonzero-sum orbits come in +- mirror
/// pairs, and each mirror pair contributes one basis vector of the fixed
/// sublattice. An orbit sums to zero exactly when it contains a signed pair
/// together with its negation.
pub fn fix_rank_via_orbits(pi: &Permutation, n: usize) -> Result<usize> {
    if pi.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "permutation of {} elements, n = {n}",
            pi.n()
        )));
    }
    if n < 3 {
        return Err(Error::Precondition("fix_rank needs n >= 3".into()));
    }
    if pi.is_identity() {
        return Err(Error::Precondition("identity rejected".into()));
    }
    let nonzero_sum = orbits(pi, n)
        .iter()
        .filter(|orbit| !orbit.iter().any(|x| orbit.contains(&x.negated())))
        .count();
    Ok(nonzero_sum / 2)
}

/// One row of the audit: a permutation's ranks and orbit counts.
#[derive(Debug, Clone, Serialize)]
pub struct AuditRow {
    pub cycles: String,
    pub cycle_type: Vec<usize>,
    pub fix_rank: usize,
    pub burnside: usize,
}

/// Sweep of every non-identity permutation in S_n against the rank bound
/// C(n-1,2), the transposition equality case, and the half-orbit-count
/// bound.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaAudit {
    pub n: usize,
    pub bound: usize,
    pub max_fix_rank: usize,
    /// Cycle notations of the permutations attaining the maximum.
    pub attainers: Vec<String>,
    pub transpositions_attain_bound: bool,
    pub transposition_burnside: usize,
    pub violations: Vec<String>,
    pub rows: Vec<AuditRow>,
}

pub fn lemma_audit(n: usize) -> Result<LemmaAudit> {
    if !(3..=7).contains(&n) {
        return Err(Error::Precondition(format!(
            "lemma audit supports 3 <= n <= 7, got {n}"
        )));
    }
    let bound = pair_count(n - 1);
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut max_rank = 0;
    let mut attainers = Vec::new();
    let mut transpositions_attain = true;
    let mut transposition_burnside = None;
    for pi in Permutation::all(n) {
        if pi.is_identity() {
            continue;
        }
        let rank = fix_rank(&pi, n)?;
        let via_orbits = fix_rank_via_orbits(&pi, n)?;
        let burnside = burnside_count(&pi, n)?;
        let name = pi.cycle_notation();
        if rank != via_orbits {
            violations.push(format!(
                "{name}: kernel rank {rank} != orbit rank {via_orbits}"
            ));
        }
        if rank > bound {
            violations.push(format!("{name}: fix rank {rank} exceeds bound {bound}"));
        }
        if rank > bound.min(burnside / 2) {
            violations.push(format!(
                "{name}: fix rank {rank} exceeds floor(burnside/2) = {}",
                burnside / 2
            ));
        }
        if burnside != orbit_count_direct(&pi, n) {
            violations.push(format!("{name}: Burnside formula mismatch"));
        }
        if pi.is_transposition() {
            if rank != bound {
                transpositions_attain = false;
            }
            match transposition_burnside {
                None => transposition_burnside = Some(burnside),
                Some(b) if b == burnside => {}
                Some(b) => violations.push(format!(
                    "{name}: transposition orbit count {burnside} differs from {b}"
                )),
            }
        }
        if rank > max_rank {
            max_rank = rank;
            attainers.clear();
        }
        if rank == max_rank {
            attainers.push(name.clone());
        }
        rows.push(AuditRow {
            cycles: name,
            cycle_type: pi.cycle_type(),
            fix_rank: rank,
            burnside,
        });
    }
    Ok(LemmaAudit {
        n,
        bound,
        max_fix_rank: max_rank,
        attainers,
        transpositions_attain_bound: transpositions_attain,
        transposition_burnside: transposition_burnside.unwrap_or(0),
        violations,
        rows,
    })
}
