//! Exact field scalars for the affine audits: arbitrary-precision rationals
//! or residues in a prime field. Elements of different fields never mix;
//! matrix constructors validate uniformity so the arithmetic itself can
//! assume it.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Which field a value lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FieldKind {
    Rational,
    Prime(u64),
}

impl FieldKind {
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldKind::Rational => 0,
            FieldKind::Prime(p) => *p,
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rational => write!(f, "Q"),
            FieldKind::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact scalar: a rational number or a prime-field residue.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum FieldScalar {
    Rational(BigRational),
    Prime { value: u64, p: u64 },
}

impl FieldScalar {
    pub fn rational(x: BigRational) -> Self {
        FieldScalar::Rational(x)
    }

    pub fn from_integer(x: i64) -> Self {
        FieldScalar::Rational(BigRational::from_integer(BigInt::from(x)))
    }

    /// Residue of `x` in F_p; `p` must be prime.
    pub fn prime(x: i64, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidInput(format!("{p} is not prime")));
        }
        let m = p as i128;
        let value = (((x as i128 % m) + m) % m) as u64;
        Ok(FieldScalar::Prime { value, p })
    }

    pub fn field(&self) -> FieldKind {
        match self {
            FieldScalar::Rational(_) => FieldKind::Rational,
            FieldScalar::Prime { p, .. } => FieldKind::Prime(*p),
        }
    }

    pub fn zero_of(field: FieldKind) -> Self {
        match field {
            FieldKind::Rational => FieldScalar::Rational(BigRational::zero()),
            FieldKind::Prime(p) => FieldScalar::Prime { value: 0, p },
        }
    }

    pub fn one_of(field: FieldKind) -> Self {
        match field {
            FieldKind::Rational => FieldScalar::Rational(BigRational::one()),
            FieldKind::Prime(p) => FieldScalar::Prime { value: 1 % p, p },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldScalar::Rational(x) => x.is_zero(),
            FieldScalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldScalar::Rational(x) => x.is_one(),
            FieldScalar::Prime { value, p } => *value == 1 % p,
        }
    }

    fn same_field(&self, other: &Self) -> (FieldKind, FieldKind) {
        (self.field(), other.field())
    }

    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a + b),
            (FieldScalar::Prime { value: a, p }, FieldScalar::Prime { value: b, p: q })
                if p == q =>
            {
                FieldScalar::Prime {
                    value: (a + b) % p,
                    p: *p,
                }
            }
            _ => panic!("mixed fields: {:?}", self.same_field(other)),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        match self {
            FieldScalar::Rational(a) => FieldScalar::Rational(-a),
            FieldScalar::Prime { value, p } => FieldScalar::Prime {
                value: (p - value) % p,
                p: *p,
            },
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (FieldScalar::Rational(a), FieldScalar::Rational(b)) => FieldScalar::Rational(a * b),
            (FieldScalar::Prime { value: a, p }, FieldScalar::Prime { value: b, p: q })
                if p == q =>
            {
                FieldScalar::Prime {
                    value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                    p: *p,
                }
            }
            _ => panic!("mixed fields: {:?}", self.same_field(other)),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(match self {
            FieldScalar::Rational(a) => FieldScalar::Rational(a.recip()),
            FieldScalar::Prime { value, p } => FieldScalar::Prime {
                value: pow_mod(*value, *p - 2, *p),
                p: *p,
            },
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }
}

pub fn pow_mod(base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc: u128 = 1;
    let mut b = base as u128 % p as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % p as u128;
        }
        b = b * b % p as u128;
        exp >>= 1;
    }
    acc as u64
}

impl fmt::Debug for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Rational(x) => write!(f, "{x}"),
            FieldScalar::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Parse "3", "-5", or "3/4" as an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator: {s}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator: {s}")))?;
    if den.is_zero() {
        return Err(Error::Parse(format!("zero denominator: {s}")));
    }
    Ok(BigRational::new(num, den))
}

/// Map a rational into F_p (denominator inverted mod p).
pub fn rational_to_prime(x: &BigRational, p: u64) -> Result<FieldScalar> {
    let reduce = |v: &BigInt| -> u64 {
        let m = BigInt::from(p);
        let r = ((v % &m) + &m) % &m;
        u64::try_from(&r).expect("residue fits")
    };
    let num = reduce(x.numer());
    let den = reduce(x.denom());
    if den == 0 {
        return Err(Error::InvalidInput(format!(
            "denominator of {x} vanishes mod {p}"
        )));
    }
    let den_inv = FieldScalar::Prime { value: den, p }.inv()?;
    Ok(FieldScalar::Prime { value: num, p }.mul(&den_inv))
}
