//! One-document-in, one-report-out: the full pipeline over a problem
//! document, with plain serializable fields so the front end can render
//! text or JSON from the same structure.

use serde::Serialize;

use crate::affine::{self, Section4Report, TheoremBReport};
use crate::document::ProblemDocument;
use crate::error::{Error, Result};
use crate::lambda;
use crate::matrix::IntMatrix;
use crate::nonscalar::{self, SearchReport};
use crate::orbits;

#[derive(Debug, Clone, Copy)]
pub struct ReportOptions {
    pub bound: i64,
    pub budget: u64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            bound: 1,
            budget: nonscalar::DEFAULT_NODE_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchSummary {
    pub bound: i64,
    pub count: usize,
    pub contains_minus_identity: bool,
    pub closed_under_product_within_bound: bool,
    pub family: Option<String>,
}

impl SearchSummary {
    pub fn from_report(report: &SearchReport) -> Self {
        SearchSummary {
            bound: report.bound,
            count: report.found.len(),
            contains_minus_identity: report.contains_minus_identity,
            closed_under_product_within_bound: report.closed_under_product_within_bound,
            family: report.family_match.map(|f| f.name().to_string()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TorusSection {
    pub lambda_rank: usize,
    /// Sublattice scaling applied to remove sign torsion, when > 1.
    pub torsion_scaling: Option<u64>,
    pub center_rank: usize,
    pub center_basis: Vec<Vec<i64>>,
    /// Closed-form verdict for n = 2.
    pub n2_verdict: Option<String>,
    /// Verdict when the independence pattern forces Aut = {+-I}.
    pub z2_verdict: Option<String>,
    pub theorem_b: TheoremBReport,
    pub search: SearchSummary,
}

#[derive(Debug, Clone, Serialize)]
pub struct AffineSection {
    pub field: String,
    pub admissible_count: usize,
    pub admissible: Vec<String>,
    /// 1-based witness pairs of a relation q_ij q_kl = 1.
    pub inverse_pair: Option<((usize, usize), (usize, usize))>,
    pub section4: Section4Report,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitSection {
    pub n: usize,
    pub bound: usize,
    pub max_fix_rank: usize,
    pub transpositions_attain_bound: bool,
    pub transposition_burnside: usize,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PipelineReport {
    pub n: usize,
    pub mode: String,
    pub torus: Option<TorusSection>,
    pub affine: Option<AffineSection>,
    pub orbits: Option<OrbitSection>,
}

fn vectors_to_i64(vecs: &[Vec<num_bigint::BigInt>]) -> Result<Vec<Vec<i64>>> {
    vecs.iter()
        .map(|v| {
            v.iter()
                .map(|e| {
                    i64::try_from(e).map_err(|_| {
                        Error::InternalInconsistency("center vector exceeds i64".into())
                    })
                })
                .collect()
        })
        .collect()
}

pub fn build_report(doc: &ProblemDocument, opts: &ReportOptions) -> Result<PipelineReport> {
    let torus = if doc.mode.includes_torus() {
        let raw_spec = doc.torus_spec()?;
        let (spec, scaling) = lambda::torsion_reduce(&raw_spec)?;
        let rank = lambda::lambda_rank(&spec)?;
        let center = lambda::center_lattice(&spec)?;
        let n2_verdict = (doc.n == 2).then(|| {
            let m = lambda::build_relations_matrix(&spec).expect("torsion-free");
            if m.matrix.is_zero() {
                "Aut(Z^2, lambda) = GL(2, Z)".to_string()
            } else {
                "Aut(Z^2, lambda) = SL(2, Z)".to_string()
            }
        });
        let z2_verdict = nonscalar::z2_case_check(&spec)?.map(|v| v.to_string());
        let theorem_b = affine::theorem_b_verdict(&spec)?;
        let search =
            nonscalar::search_auts_with_budget(&spec, opts.bound, opts.budget)?;
        Some(TorusSection {
            lambda_rank: rank,
            torsion_scaling: (scaling > 1).then_some(scaling),
            center_rank: center.len(),
            center_basis: vectors_to_i64(&center)?,
            n2_verdict,
            z2_verdict,
            theorem_b,
            search: SearchSummary::from_report(&search),
        })
    } else {
        None
    };

    let affine = if doc.mode.includes_affine() {
        let q = doc.q_matrix()?;
        let admissible = affine::admissible_perms(&q)?;
        Some(AffineSection {
            field: q.field().to_string(),
            admissible_count: admissible.len(),
            admissible: admissible.iter().map(|p| p.cycle_notation()).collect(),
            inverse_pair: affine::has_inverse_pair(&q)
                .map(|((i, j), (k, l))| ((i + 1, j + 1), (k + 1, l + 1))),
            section4: affine::check_section4_hypotheses(&q),
        })
    } else {
        None
    };

    let orbit = if (3..=7).contains(&doc.n) {
        let audit = orbits::lemma_audit(doc.n)?;
        Some(OrbitSection {
            n: audit.n,
            bound: audit.bound,
            max_fix_rank: audit.max_fix_rank,
            transpositions_attain_bound: audit.transpositions_attain_bound,
            transposition_burnside: audit.transposition_burnside,
            violations: audit.violations,
        })
    } else {
        None
    };

    Ok(PipelineReport {
        n: doc.n,
        mode: doc.mode.as_str().to_string(),
        torus,
        affine,
        orbits: orbit,
    })
}

/// The relations matrix of the document's torus data together with its
/// 1-based pair labels, for direct printing.
pub fn relations_with_labels(doc: &ProblemDocument) -> Result<(Vec<(usize, usize)>, IntMatrix)> {
    let spec = doc.torus_spec()?;
    let (spec, _) = lambda::torsion_reduce(&spec)?;
    let rel = lambda::build_relations_matrix(&spec)?;
    let labels = rel
        .pair_labels()
        .iter()
        .map(|p| (p.i + 1, p.j + 1))
        .collect();
    Ok((labels, rel.matrix))
}

#[cfg(test)]
mod tests {
    use super::*;

    const N3R2_DOC: &str = "\
n = 3
mode = torus
[lambda]
rank = 2
1,3 = 1 0
2,3 = 0 1
";

    const CIRCULANT_DOC: &str = "\
n = 5
mode = both
[q]
1,2 = 2
2,3 = 2
3,4 = 2
4,5 = 2
1,5 = 1/2
1,3 = 3
2,4 = 3
3,5 = 3
1,4 = 1/3
2,5 = 1/3
";

    const N2_DOC: &str = "\
n = 2
mode = torus
[lambda]
rank = 1
1,2 = 1
";

    #[test]
    fn n3r2_report() {
        let doc = ProblemDocument::parse(N3R2_DOC).unwrap();
        let report = build_report(&doc, &ReportOptions::default()).unwrap();
        let torus = report.torus.expect("torus section");
        assert_eq!(torus.lambda_rank, 2);
        assert_eq!(torus.center_rank, 0);
        assert!(torus.theorem_b.bound_met);
        assert!(torus.theorem_b.verdict.is_some());
        assert_eq!(torus.search.count, 18);
        assert_eq!(torus.search.family.as_deref(), Some("n3_upper"));
        assert!(report.affine.is_none());
        assert!(report.orbits.is_some());
    }

    #[test]
    fn circulant_report() {
        let doc = ProblemDocument::parse(CIRCULANT_DOC).unwrap();
        let report = build_report(&doc, &ReportOptions::default()).unwrap();
        let torus = report.torus.expect("torus section");
        assert_eq!(torus.lambda_rank, 2);
        assert!(!torus.theorem_b.bound_met);
        assert!(torus.theorem_b.verdict.is_none());
        let affine = report.affine.expect("affine section");
        assert!(affine
            .admissible
            .iter()
            .any(|s| s == "(1 2 3 4 5)"));
    }

    #[test]
    fn n2_report_verdict() {
        let doc = ProblemDocument::parse(N2_DOC).unwrap();
        let report = build_report(&doc, &ReportOptions::default()).unwrap();
        let torus = report.torus.expect("torus section");
        assert_eq!(
            torus.n2_verdict.as_deref(),
            Some("Aut(Z^2, lambda) = SL(2, Z)")
        );
    }

    #[test]
    fn relations_labels() {
        let doc = ProblemDocument::parse(N3R2_DOC).unwrap();
        let (labels, m) = relations_with_labels(&doc).unwrap();
        assert_eq!(labels, vec![(1, 2), (1, 3), (2, 3)]);
        assert_eq!(m.rows(), 3);
    }
}
