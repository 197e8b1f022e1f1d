//! Rendering and plumbing for the `qtaut` binary: matrix literals, exit-code
//! policy, and the text/JSON renderers for each subcommand. The binary in
//! `main.rs` only parses arguments and dispatches here.

use num_bigint::BigInt;
use serde::Serialize;

use qtaut::affine::{AlphaMatrix, QMatrix, Section4Report};
use qtaut::document::ProblemDocument;
use qtaut::error::Error;
use qtaut::exterior::{Bivector, IsometryKind};
use qtaut::field::{parse_rational, rational_to_prime, FieldKind, FieldScalar};
use qtaut::matrix::IntMatrix;
use qtaut::nonscalar::SearchReport;
use qtaut::report::PipelineReport;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID_INPUT: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Every error maps to a stable process exit code: budget exhaustion and
/// internal consistency failures are distinguishable from bad input.
pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::InternalInconsistency(_) => EXIT_INTERNAL,
        Error::NodeBudgetExceeded { .. } | Error::EnumerationBudgetExceeded { .. } => EXIT_BUDGET,
        _ => EXIT_INVALID_INPUT,
    }
}

/// Outcome of running both membership routes; disagreement is an internal
/// failure surfaced as exit code 2.
pub fn route_exit_code(bivector_route: bool, symplectic_route: bool) -> i32 {
    if bivector_route == symplectic_route {
        EXIT_OK
    } else {
        EXIT_INTERNAL
    }
}

/// Parse a row-semicolon integer matrix literal: "1 0; 2 -1".
pub fn parse_matrix_literal(text: &str) -> Result<IntMatrix, Error> {
    let rows: Vec<Vec<BigInt>> = text
        .split(';')
        .map(|row| {
            row.split_whitespace()
                .map(|tok| {
                    tok.parse::<BigInt>()
                        .map_err(|_| Error::Parse(format!("bad matrix entry: {tok}")))
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    if rows.is_empty() || rows[0].is_empty() {
        return Err(Error::Parse("empty matrix literal".into()));
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(Error::Parse("ragged matrix literal".into()));
    }
    Ok(IntMatrix::from_fn(rows.len(), cols, |r, c| {
        rows[r][c].clone()
    }))
}

/// Parse a whitespace-separated integer vector literal.
pub fn parse_vector_literal(text: &str) -> Result<Vec<BigInt>, Error> {
    let v: Vec<BigInt> = text
        .split_whitespace()
        .map(|tok| {
            tok.parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad vector entry: {tok}")))
        })
        .collect::<Result<_, _>>()?;
    if v.is_empty() {
        return Err(Error::Parse("empty vector literal".into()));
    }
    Ok(v)
}

/// Parse a matrix of field scalars in the document's field; entries are
/// exact rationals, reduced into the prime field when applicable.
pub fn parse_alpha_literal(text: &str, field: FieldKind) -> Result<AlphaMatrix, Error> {
    let rows: Vec<Vec<FieldScalar>> = text
        .split(';')
        .map(|row| {
            row.split_whitespace()
                .map(|tok| {
                    let r = parse_rational(tok)?;
                    match field {
                        FieldKind::Rational => Ok(FieldScalar::rational(r)),
                        FieldKind::Prime(p) => rational_to_prime(&r, p),
                    }
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    AlphaMatrix::new(rows)
}

pub fn matrix_to_rows(m: &IntMatrix) -> Result<Vec<Vec<i64>>, Error> {
    m.to_i64()
}

fn fmt_matrix_rows(m: &IntMatrix) -> String {
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| m[(r, c)].to_string())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect::<Vec<_>>()
        .join("; ")
}

pub fn render_int_matrix(m: &IntMatrix) -> String {
    format!("[{}]", fmt_matrix_rows(m))
}

// ---------------------------------------------------------------------------
// relmat
// ---------------------------------------------------------------------------

#[derive(Serialize)]
pub struct RelmatJson {
    pub n: usize,
    pub generators: usize,
    pub pairs: Vec<(usize, usize)>,
    pub matrix: Vec<Vec<i64>>,
}

pub fn render_relmat(doc: &ProblemDocument, json: bool) -> Result<String, Error> {
    let (labels, m) = qtaut::report::relations_with_labels(doc)?;
    if json {
        let payload = RelmatJson {
            n: doc.n,
            generators: m.cols(),
            pairs: labels,
            matrix: matrix_to_rows(&m)?,
        };
        return Ok(serde_json::to_string_pretty(&payload).expect("serializable"));
    }
    let mut out = format!("n = {}\ngenerators = {}\n", doc.n, m.cols());
    for (row, (i, j)) in labels.iter().enumerate() {
        let entries: Vec<String> = (0..m.cols()).map(|c| m[(row, c)].to_string()).collect();
        out.push_str(&format!("({i},{j}): {}\n", entries.join(" ")));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// check-aut
// ---------------------------------------------------------------------------

pub struct CheckAutcome {
    pub text: String,
    pub exit: i32,
}

pub fn render_check_aut(doc: &ProblemDocument, matrix: &IntMatrix) -> Result<CheckAutcome, Error> {
    let spec = doc.torus_spec()?;
    let (spec, _) = qtaut::lambda::torsion_reduce(&spec)?;
    let bivector_route = qtaut::nonscalar::is_nonscalar_aut(matrix, &spec)?;
    let symplectic_route = qtaut::nonscalar::is_symplectic_all(matrix, &spec)?;
    let agree = bivector_route == symplectic_route;
    let verdict = if bivector_route { "member" } else { "non-member" };
    let text = format!(
        "matrix: {}\nbivector route: {}\nsymplectic route: {}\nroutes agree: {}\nverdict: {}\n",
        render_int_matrix(matrix),
        if bivector_route { "member" } else { "non-member" },
        if symplectic_route { "member" } else { "non-member" },
        agree,
        verdict,
    );
    Ok(CheckAutcome {
        text,
        exit: route_exit_code(bivector_route, symplectic_route),
    })
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

#[derive(Serialize)]
pub struct SearchJson {
    pub bound: i64,
    pub count: usize,
    pub contains_minus_identity: bool,
    pub closed_under_product_within_bound: bool,
    pub family: Option<String>,
    pub found: Vec<Vec<Vec<i64>>>,
}

pub fn render_search(report: &SearchReport, json: bool) -> Result<String, Error> {
    if json {
        let payload = SearchJson {
            bound: report.bound,
            count: report.found.len(),
            contains_minus_identity: report.contains_minus_identity,
            closed_under_product_within_bound: report.closed_under_product_within_bound,
            family: report.family_match.map(|f| f.name().to_string()),
            found: report
                .found
                .iter()
                .map(matrix_to_rows)
                .collect::<Result<_, _>>()?,
        };
        return Ok(serde_json::to_string_pretty(&payload).expect("serializable"));
    }
    let mut out = format!(
        "bound = {}\nfound = {}\ncontains -I: {}\nclosed under product within bound: {}\nfamily: {}\n",
        report.bound,
        report.found.len(),
        report.contains_minus_identity,
        report.closed_under_product_within_bound,
        report
            .family_match
            .map(|f| f.name().to_string())
            .unwrap_or_else(|| "none".into()),
    );
    for m in &report.found {
        out.push_str(&render_int_matrix(m));
        out.push('\n');
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// ext
// ---------------------------------------------------------------------------

pub fn render_ext_square(matrix: &IntMatrix, json: bool) -> Result<String, Error> {
    let sq = qtaut::exterior::ext_square(matrix)?;
    if json {
        #[derive(Serialize)]
        struct Payload {
            square: Vec<Vec<i64>>,
        }
        return Ok(serde_json::to_string_pretty(&Payload {
            square: matrix_to_rows(&sq)?,
        })
        .expect("serializable"));
    }
    Ok(format!("{}\n", render_int_matrix(&sq)))
}

pub fn render_ext_root(matrix: &IntMatrix, json: bool) -> Result<String, Error> {
    let root = qtaut::exterior::ext_root(matrix)?;
    if json {
        #[derive(Serialize)]
        struct Payload {
            root: Option<Vec<Vec<i64>>>,
        }
        let root = match &root {
            Some(r) => Some(matrix_to_rows(r)?),
            None => None,
        };
        return Ok(serde_json::to_string_pretty(&Payload { root }).expect("serializable"));
    }
    Ok(match root {
        Some(r) => format!("{}\n", render_int_matrix(&r)),
        None => "no exterior root\n".to_string(),
    })
}

pub fn render_ext_decomposable(coords: &[BigInt], json: bool) -> Result<String, Error> {
    // infer n from the coordinate count
    let n = qtaut::exterior::rank_from_pair_count(coords.len())?;
    let w = Bivector::new(n, coords.to_vec())?;
    let decomposable = qtaut::exterior::is_decomposable(&w)?;
    let relations = qtaut::exterior::plucker_relations(&w);
    if json {
        #[derive(Serialize)]
        struct Payload {
            n: usize,
            decomposable: bool,
            plucker_values: Vec<i64>,
        }
        let plucker_values = relations
            .iter()
            .map(|v| {
                i64::try_from(v)
                    .map_err(|_| Error::InternalInconsistency("value exceeds i64".into()))
            })
            .collect::<Result<_, _>>()?;
        return Ok(serde_json::to_string_pretty(&Payload {
            n,
            decomposable,
            plucker_values,
        })
        .expect("serializable"));
    }
    let values: Vec<String> = relations.iter().map(|v| v.to_string()).collect();
    Ok(format!(
        "n = {n}\ndecomposable: {decomposable}\nplucker values: [{}]\n",
        values.join(", ")
    ))
}

pub fn render_ext_isometry(matrix: &IntMatrix) -> Result<String, Error> {
    let verdict = match qtaut::exterior::is_plucker_isometry(matrix)? {
        IsometryKind::Plus => "+P",
        IsometryKind::Minus => "-P",
        IsometryKind::No => "no",
    };
    Ok(format!("B^t P B = {verdict}\n"))
}

// ---------------------------------------------------------------------------
// affine
// ---------------------------------------------------------------------------

pub fn render_affine_perms(q: &QMatrix, json: bool) -> Result<String, Error> {
    let perms = qtaut::affine::admissible_perms(q)?;
    let names: Vec<String> = perms.iter().map(|p| p.cycle_notation()).collect();
    if json {
        #[derive(Serialize)]
        struct Payload {
            field: String,
            count: usize,
            admissible: Vec<String>,
        }
        return Ok(serde_json::to_string_pretty(&Payload {
            field: q.field().to_string(),
            count: names.len(),
            admissible: names,
        })
        .expect("serializable"));
    }
    let mut out = format!(
        "field = {}\nadmissible permutations ({}):\n",
        q.field(),
        names.len()
    );
    for name in names {
        out.push_str(&name);
        out.push('\n');
    }
    Ok(out)
}

pub fn render_affine_linear_check(q: &QMatrix, alpha: &AlphaMatrix) -> Result<String, Error> {
    let verdict = qtaut::affine::is_linear_aut(alpha, q)?;
    let mut out = format!(
        "linear automorphism: {}\n",
        if verdict { "yes" } else { "no" }
    );
    if verdict {
        match qtaut::affine::monomial_structure(alpha, q) {
            Ok(m) => {
                let scalars: Vec<String> = m.scalars.iter().map(|s| s.to_string()).collect();
                out.push_str(&format!(
                    "monomial: permutation {} with scalars [{}]\n",
                    m.permutation.cycle_notation(),
                    scalars.join(", ")
                ));
            }
            Err(Error::Precondition(why)) => {
                out.push_str(&format!("monomial decomposition not applicable: {why}\n"));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

pub fn render_affine_hypotheses(q: &QMatrix, json: bool) -> Result<String, Error> {
    let report = qtaut::affine::check_section4_hypotheses(q);
    if json {
        return Ok(serde_json::to_string_pretty(&report).expect("serializable"));
    }
    Ok(render_section4_text(&report))
}

fn render_section4_text(report: &Section4Report) -> String {
    format!(
        "char != 2: {}\nn >= 3: {}\n(i) entries pairwise distinct: {}\n(ii) no inverse products: {}\nverdict: {}\n",
        report.char_not_two,
        report.n_at_least_three,
        report.entries_pairwise_distinct,
        report.no_inverse_products,
        report.verdict.as_deref().unwrap_or("none"),
    )
}

pub fn render_affine_brute(q: &QMatrix, budget: u128, json: bool) -> Result<String, Error> {
    let found = qtaut::affine::brute_force_linear_auts(q, budget)?;
    let all_diagonal = found.iter().all(|a| a.is_diagonal());
    let render_alpha = |a: &AlphaMatrix| -> String {
        (0..a.n())
            .map(|i| {
                (0..a.n())
                    .map(|j| a.at(i, j).to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("; ")
    };
    if json {
        #[derive(Serialize)]
        struct Payload {
            field: String,
            group_order: String,
            count: usize,
            all_diagonal: bool,
            found: Vec<String>,
        }
        let FieldKind::Prime(p) = q.field() else {
            return Err(Error::Precondition("brute force needs a prime field".into()));
        };
        return Ok(serde_json::to_string_pretty(&Payload {
            field: q.field().to_string(),
            group_order: qtaut::affine::gl_order(q.n(), p).to_string(),
            count: found.len(),
            all_diagonal,
            found: found.iter().map(render_alpha).collect(),
        })
        .expect("serializable"));
    }
    let FieldKind::Prime(p) = q.field() else {
        return Err(Error::Precondition("brute force needs a prime field".into()));
    };
    let mut out = format!(
        "field = {}\n|GL({}, {})| = {}\nlinear automorphisms: {}\nall diagonal: {}\n",
        q.field(),
        q.n(),
        q.field(),
        qtaut::affine::gl_order(q.n(), p),
        found.len(),
        all_diagonal,
    );
    for a in &found {
        out.push_str(&format!("[{}]\n", render_alpha(a)));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

pub fn render_report(report: &PipelineReport, json: bool) -> String {
    if json {
        return serde_json::to_string_pretty(report).expect("serializable");
    }
    let mut out = format!("n = {}\nmode = {}\n", report.n, report.mode);
    if let Some(t) = &report.torus {
        out.push_str("\n[torus]\n");
        out.push_str(&format!("lambda rank = {}\n", t.lambda_rank));
        if let Some(p) = t.torsion_scaling {
            out.push_str(&format!("sign torsion removed on sublattice {p}Z^n\n"));
        }
        out.push_str(&format!(
            "center rank = {} ({})\n",
            t.center_rank,
            if t.center_rank == 0 {
                "center = F".to_string()
            } else {
                format!("basis {:?}", t.center_basis)
            }
        ));
        if let Some(v) = &t.n2_verdict {
            out.push_str(&format!("verdict: {v}\n"));
        }
        if let Some(v) = &t.z2_verdict {
            out.push_str(&format!("verdict: {v}\n"));
        }
        out.push_str(&format!(
            "rank bound C(n-1,2)+1 = {}: {}\n",
            t.theorem_b.bound,
            if t.theorem_b.bound_met { "met" } else { "not met" }
        ));
        if let Some(v) = &t.theorem_b.verdict {
            out.push_str(&format!("verdict: {v}\n"));
        }
        out.push_str(&format!(
            "search (bound {}): {} automorphisms, -I present: {}, family: {}\n",
            t.search.bound,
            t.search.count,
            t.search.contains_minus_identity,
            t.search.family.as_deref().unwrap_or("none"),
        ));
    }
    if let Some(a) = &report.affine {
        out.push_str("\n[affine]\n");
        out.push_str(&format!("field = {}\n", a.field));
        out.push_str(&format!(
            "admissible permutations ({}): {}\n",
            a.admissible_count,
            a.admissible.join(", ")
        ));
        match &a.inverse_pair {
            Some(((i, j), (k, l))) => out.push_str(&format!(
                "inverse product witness: q_({i},{j}) * q_({k},{l}) = 1\n"
            )),
            None => out.push_str("no inverse products among the multiparameters\n"),
        }
        out.push_str(&render_section4_text(&a.section4));
    }
    if let Some(o) = &report.orbits {
        out.push_str("\n[orbits]\n");
        out.push_str(&format!(
            "fix-rank bound C(n-1,2) = {}: max over non-identity permutations = {}\n",
            o.bound, o.max_fix_rank
        ));
        out.push_str(&format!(
            "transpositions attain the bound: {} (orbit count {})\n",
            o.transpositions_attain_bound, o.transposition_burnside
        ));
        out.push_str(&format!(
            "violations: {}\n",
            if o.violations.is_empty() {
                "none".to_string()
            } else {
                o.violations.join("; ")
            }
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code_for(&Error::Parse("x".into())), EXIT_INVALID_INPUT);
        assert_eq!(
            exit_code_for(&Error::NodeBudgetExceeded { budget: 1 }),
            EXIT_BUDGET
        );
        assert_eq!(
            exit_code_for(&Error::EnumerationBudgetExceeded { size: 2, budget: 1 }),
            EXIT_BUDGET
        );
        assert_eq!(
            exit_code_for(&Error::InternalInconsistency("x".into())),
            EXIT_INTERNAL
        );
        assert_eq!(exit_code_for(&Error::NotUnimodular), EXIT_INVALID_INPUT);
    }

    #[test]
    fn route_disagreement_is_internal() {
        assert_eq!(route_exit_code(true, true), EXIT_OK);
        assert_eq!(route_exit_code(false, false), EXIT_OK);
        assert_eq!(route_exit_code(true, false), EXIT_INTERNAL);
        assert_eq!(route_exit_code(false, true), EXIT_INTERNAL);
    }

    #[test]
    fn matrix_literals() {
        let m = parse_matrix_literal("1 0; 2 -1").unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(m[(1, 1)], BigInt::from(-1));
        assert!(parse_matrix_literal("1 0; 2").is_err());
        assert!(parse_matrix_literal("").is_err());
        assert!(parse_matrix_literal("1 x").is_err());
        assert_eq!(render_int_matrix(&m), "[1 0; 2 -1]");
    }

    #[test]
    fn alpha_literals_respect_the_field() {
        let a = parse_alpha_literal("1/2 0; 0 1", FieldKind::Rational).unwrap();
        assert_eq!(
            a.at(0, 0),
            &FieldScalar::rational(parse_rational("1/2").unwrap())
        );
        let b = parse_alpha_literal("1/2 0; 0 1", FieldKind::Prime(5)).unwrap();
        // 1/2 = 3 mod 5
        assert_eq!(b.at(0, 0), &FieldScalar::prime(3, 5).unwrap());
        assert!(parse_alpha_literal("1 1; 1 1", FieldKind::Rational).is_err());
    }
}
