//! The problem-document format: a small line-oriented text file that fixes
//! the rank, the mode, and either abstract commutator exponents or concrete
//! multiparameter values.
//!
//! ```text
//! # a rank-3 torus problem with two independent multiparameters
//! n = 3
//! mode = torus
//!
//! [lambda]
//! rank = 2
//! 1,3 = 1 0
//! 2,3 = 0 1
//! ```
//!
//! Concrete multiparameters go in a `[q]` section as exact rationals
//! ("2", "-5", "3/4"); pairs are "i,j" with 1 <= i < j <= n and omitted
//! pairs commute trivially. `field = rational` (default) or
//! `field = prime p` selects the field for affine audits.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::affine::QMatrix;
use crate::error::{Error, Result};
use crate::field::{self, FieldKind, FieldScalar};
use crate::lambda::{ExponentVector, MultiparamSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Torus,
    Affine,
    Both,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Torus => "torus",
            Mode::Affine => "affine",
            Mode::Both => "both",
        }
    }

    pub fn includes_torus(&self) -> bool {
        matches!(self, Mode::Torus | Mode::Both)
    }

    pub fn includes_affine(&self) -> bool {
        matches!(self, Mode::Affine | Mode::Both)
    }
}

#[derive(Debug, Clone)]
pub struct LambdaSection {
    pub rank: usize,
    pub relations: BTreeMap<(usize, usize), Vec<BigInt>>,
}

/// A parsed problem document. Pair keys are 0-based internally.
#[derive(Debug, Clone)]
pub struct ProblemDocument {
    pub n: usize,
    pub mode: Mode,
    pub field: FieldKind,
    pub lambda: Option<LambdaSection>,
    pub rational_q: Option<BTreeMap<(usize, usize), BigRational>>,
}

fn parse_pair_key(key: &str, n: usize) -> Result<(usize, usize)> {
    let (i, j) = key
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("pair key must be \"i,j\": {key}")))?;
    let i: usize = i
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad pair index: {key}")))?;
    let j: usize = j
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad pair index: {key}")))?;
    if i < 1 || j < 1 || i >= j || j > n {
        return Err(Error::Parse(format!(
            "pair ({i},{j}) must satisfy 1 <= i < j <= {n}"
        )));
    }
    Ok((i - 1, j - 1))
}

impl ProblemDocument {
    pub fn parse(text: &str) -> Result<Self> {
        #[derive(PartialEq)]
        enum Section {
            Top,
            Lambda,
            Q,
        }
        let mut section = Section::Top;
        let mut n: Option<usize> = None;
        let mut mode: Option<Mode> = None;
        let mut fieldkind: Option<FieldKind> = None;
        let mut lambda_rank: Option<usize> = None;
        let mut lambda_rel: BTreeMap<(usize, usize), Vec<BigInt>> = BTreeMap::new();
        let mut q_entries: BTreeMap<(usize, usize), BigRational> = BTreeMap::new();
        let mut saw_lambda = false;
        let mut saw_q = false;

        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.split_once('#') {
                Some((before, _)) => before.trim(),
                None => raw.trim(),
            };
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse(format!("line {}: {msg}", lineno + 1));
            if line == "[lambda]" {
                section = Section::Lambda;
                saw_lambda = true;
                continue;
            }
            if line == "[q]" {
                section = Section::Q;
                saw_q = true;
                continue;
            }
            if line.starts_with('[') {
                return Err(err(format!("unknown section {line}")));
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(err(format!("expected key = value, got: {line}")));
            };
            let key = key.trim();
            let value = value.trim();
            match section {
                Section::Top => match key {
                    "n" => {
                        let v: usize =
                            value.parse().map_err(|_| err(format!("bad n: {value}")))?;
                        if v < 2 {
                            return Err(err("n must be at least 2".into()));
                        }
                        n = Some(v);
                    }
                    "mode" => {
                        mode = Some(match value {
                            "torus" => Mode::Torus,
                            "affine" => Mode::Affine,
                            "both" => Mode::Both,
                            other => return Err(err(format!("unknown mode {other}"))),
                        });
                    }
                    "field" => {
                        fieldkind = Some(if value == "rational" {
                            FieldKind::Rational
                        } else if let Some(p) = value.strip_prefix("prime") {
                            let p: u64 = p
                                .trim()
                                .parse()
                                .map_err(|_| err(format!("bad prime: {value}")))?;
                            if FieldScalar::prime(0, p).is_err() {
                                return Err(err(format!("{p} is not prime")));
                            }
                            FieldKind::Prime(p)
                        } else {
                            return Err(err(format!("unknown field {value}")));
                        });
                    }
                    other => return Err(err(format!("unknown key {other}"))),
                },
                Section::Lambda => {
                    if key == "rank" {
                        lambda_rank = Some(
                            value
                                .parse()
                                .map_err(|_| err(format!("bad rank: {value}")))?,
                        );
                    } else {
                        let nn = n.ok_or_else(|| err("n must come before [lambda]".into()))?;
                        let pair = parse_pair_key(key, nn).map_err(|e| err(e.to_string()))?;
                        let exps: Result<Vec<BigInt>> = value
                            .split_whitespace()
                            .map(|t| {
                                t.parse::<BigInt>()
                                    .map_err(|_| err(format!("bad exponent: {t}")))
                            })
                            .collect();
                        lambda_rel.insert(pair, exps?);
                    }
                }
                Section::Q => {
                    let nn = n.ok_or_else(|| err("n must come before [q]".into()))?;
                    let pair = parse_pair_key(key, nn).map_err(|e| err(e.to_string()))?;
                    let v = field::parse_rational(value).map_err(|e| err(e.to_string()))?;
                    q_entries.insert(pair, v);
                }
            }
        }

        let n = n.ok_or_else(|| Error::Parse("missing n".into()))?;
        let mode = mode.ok_or_else(|| Error::Parse("missing mode".into()))?;
        let field = fieldkind.unwrap_or(FieldKind::Rational);

        let lambda = if saw_lambda {
            let rank =
                lambda_rank.ok_or_else(|| Error::Parse("[lambda] needs a rank".into()))?;
            for ((i, j), exps) in &lambda_rel {
                if exps.len() != rank {
                    return Err(Error::Parse(format!(
                        "pair ({},{}) has {} exponents, rank is {rank}",
                        i + 1,
                        j + 1,
                        exps.len()
                    )));
                }
            }
            Some(LambdaSection {
                rank,
                relations: lambda_rel,
            })
        } else {
            None
        };
        let rational_q = saw_q.then_some(q_entries);

        let doc = ProblemDocument {
            n,
            mode,
            field,
            lambda,
            rational_q,
        };
        doc.validate()?;
        Ok(doc)
    }

    fn validate(&self) -> Result<()> {
        if let Some(q) = &self.rational_q {
            for (&(i, j), v) in q {
                if num_traits::Zero::is_zero(v) {
                    return Err(Error::InvalidInput(format!(
                        "multiparameter ({},{}) is zero",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        if self.mode.includes_torus() {
            match (&self.lambda, &self.rational_q) {
                (Some(_), Some(_)) => {
                    return Err(Error::InvalidInput(
                        "give either [lambda] or [q], not both".into(),
                    ))
                }
                (None, None) => {
                    return Err(Error::InvalidInput(
                        "torus mode needs a [lambda] or [q] section".into(),
                    ))
                }
                (None, Some(_)) if self.field != FieldKind::Rational => {
                    return Err(Error::InvalidInput(
                        "torus computations from [q] need the rational field".into(),
                    ))
                }
                _ => {}
            }
        }
        if self.mode.includes_affine() && self.rational_q.is_none() {
            return Err(Error::InvalidInput(
                "affine mode needs a [q] section".into(),
            ));
        }
        Ok(())
    }

    /// The multiparameter spec for torus computations; may carry sign
    /// torsion when built from negative rationals.
    pub fn torus_spec(&self) -> Result<MultiparamSpec> {
        if let Some(lambda) = &self.lambda {
            let mut rel = BTreeMap::new();
            for (&pair, exps) in &lambda.relations {
                rel.insert(pair, ExponentVector::from_free(exps.clone()));
            }
            return MultiparamSpec::new(self.n, lambda.rank, rel);
        }
        if let Some(q) = &self.rational_q {
            return crate::lambda::rationals_to_spec(self.n, q);
        }
        Err(Error::InvalidInput(
            "document has no torus data (lambda or q)".into(),
        ))
    }

    /// The q matrix over the document's field for affine audits.
    pub fn q_matrix(&self) -> Result<QMatrix> {
        let Some(q) = &self.rational_q else {
            return Err(Error::InvalidInput("document has no [q] section".into()));
        };
        let mut upper = BTreeMap::new();
        for (&pair, v) in q {
            let scalar = match self.field {
                FieldKind::Rational => FieldScalar::rational(v.clone()),
                FieldKind::Prime(p) => field::rational_to_prime(v, p)?,
            };
            upper.insert(pair, scalar);
        }
        QMatrix::new(self.n, self.field, &upper)
    }
}
