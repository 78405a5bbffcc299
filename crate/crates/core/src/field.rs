//! Coefficient fields and exact rank computations.
//!
//! Scalars are always carried as [`BigRational`]. Over `F_p` every scalar is
//! kept reduced to an integer in `0..p`, so the same representation serves
//! both fields and the field only decides how arithmetic is normalized.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

/// Prime used when a prime field is requested without naming one.
pub const DEFAULT_PRIME: u64 = 32003;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum FieldSpec {
    #[default]
    Rational,
    Prime(u64),
}

impl FieldSpec {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldSpec::Prime(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::Rational => 0,
            FieldSpec::Prime(p) => *p,
        }
    }

    /// Maps an arbitrary rational into the field's canonical representation.
    pub fn reduce(&self, x: &Scalar) -> Result<Scalar> {
        match self {
            FieldSpec::Rational => Ok(x.clone()),
            FieldSpec::Prime(p) => {
                let p = BigInt::from(*p);
                let num = x.numer().mod_floor_big(&p);
                let den = x.denom().mod_floor_big(&p);
                if den.is_zero() {
                    return Err(Error::NotInvertible(self.characteristic()));
                }
                let inv = den.modpow(&(&p - BigInt::from(2)), &p);
                Ok(BigRational::from_integer((num * inv) % &p))
            }
        }
    }

    pub fn from_i64(&self, x: i64) -> Scalar {
        self.reduce(&BigRational::from_integer(BigInt::from(x)))
            .expect("integers are always representable")
    }

    pub fn one(&self) -> Scalar {
        BigRational::one()
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.normalize(a + b)
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.normalize(a - b)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.normalize(a * b)
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.normalize(-a)
    }

    /// Multiplicative inverse of a nonzero scalar.
    pub fn inv(&self, a: &Scalar) -> Scalar {
        assert!(!a.is_zero(), "inverse of zero");
        match self {
            FieldSpec::Rational => a.recip(),
            FieldSpec::Prime(p) => {
                let p = BigInt::from(*p);
                let e = &p - BigInt::from(2);
                BigRational::from_integer(a.numer().modpow(&e, &p))
            }
        }
    }

    // operands are already reduced, so over F_p only integers appear here
    fn normalize(&self, x: Scalar) -> Scalar {
        match self {
            FieldSpec::Rational => x,
            FieldSpec::Prime(p) => {
                let p = BigInt::from(*p);
                BigRational::from_integer(x.numer().mod_floor_big(&p))
            }
        }
    }
}

trait ModFloor {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt;
}

impl ModFloor for BigInt {
    fn mod_floor_big(&self, m: &BigInt) -> BigInt {
        let r = self % m;
        if r.is_negative() {
            r + m
        } else {
            r
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rational => write!(f, "rational"),
            FieldSpec::Prime(p) => write!(f, "prime:{p}"),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = Error;

    /// Accepts `rational`, `prime` (for [`DEFAULT_PRIME`]) and `prime:<p>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "rational" | "Q" | "q" => Ok(FieldSpec::Rational),
            "prime" => FieldSpec::prime(DEFAULT_PRIME),
            _ => {
                let digits = s.strip_prefix("prime:").unwrap_or(s);
                let p: u64 = digits
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("unknown field '{s}'")))?;
                FieldSpec::prime(p)
            }
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut i = 2u64;
    while i.saturating_mul(i) <= p {
        if p.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

/// A sparse vector over the field, keyed by coordinate index.
pub type SparseVec = BTreeMap<usize, Scalar>;

/// Exact rank of the span of the given sparse vectors.
///
/// Incremental echelon form: each incoming vector is reduced against the
/// pivots found so far until its leading coordinate is new or it vanishes.
pub fn sparse_rank(field: FieldSpec, vectors: impl IntoIterator<Item = SparseVec>) -> usize {
    let mut pivots: BTreeMap<usize, SparseVec> = BTreeMap::new();
    for mut v in vectors {
        while let Some((&lead, lead_val)) = v.iter().next() {
            match pivots.get(&lead) {
                None => {
                    let inv = field.inv(lead_val);
                    let scaled: SparseVec = v.iter().map(|(&k, x)| (k, field.mul(x, &inv))).collect();
                    pivots.insert(lead, scaled);
                    break;
                }
                Some(pivot) => {
                    let factor = lead_val.clone();
                    for (&k, x) in pivot {
                        let updated = field.sub(v.get(&k).unwrap_or(&Scalar::zero()), &field.mul(&factor, x));
                        if updated.is_zero() {
                            v.remove(&k);
                        } else {
                            v.insert(k, updated);
                        }
                    }
                }
            }
        }
    }
    pivots.len()
}

/// Exact rank of a dense matrix given as rows.
pub fn field_rank(field: FieldSpec, rows: &[Vec<Scalar>]) -> usize {
    sparse_rank(
        field,
        rows.iter().map(|row| {
            row.iter()
                .enumerate()
                .filter_map(|(j, x)| {
                    let x = field.reduce(x).expect("entries must be representable in the field");
                    (!x.is_zero()).then_some((j, x))
                })
                .collect::<SparseVec>()
        }),
    )
}

/// Integer helper for building test and fixture matrices.
pub fn int_matrix(rows: &[&[i64]]) -> Vec<Vec<Scalar>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect())
        .collect()
}

/// Formats a scalar as `n` or `n/d`.
pub fn format_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Small integer view of a scalar, if it is one.
pub fn scalar_to_i64(x: &Scalar) -> Option<i64> {
    if x.denom().is_one() {
        x.numer().to_i64()
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_field_specs() {
        assert_eq!("rational".parse::<FieldSpec>().unwrap(), FieldSpec::Rational);
        assert_eq!("prime".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(32003));
        assert_eq!("prime:5".parse::<FieldSpec>().unwrap(), FieldSpec::Prime(5));
        assert_eq!("prime:6".parse::<FieldSpec>().unwrap_err(), Error::NotPrime(6));
        assert!("real".parse::<FieldSpec>().is_err());
        assert_eq!(FieldSpec::Prime(7).to_string(), "prime:7");
    }

    #[test]
    fn prime_arithmetic() {
        let f = FieldSpec::Prime(7);
        let three = f.from_i64(3);
        assert_eq!(f.mul(&three, &f.inv(&three)), f.one());
        assert_eq!(f.from_i64(-1), f.from_i64(6));
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        assert_eq!(f.reduce(&half).unwrap(), f.from_i64(4));
        let seventh = BigRational::new(BigInt::from(1), BigInt::from(7));
        assert_eq!(f.reduce(&seventh).unwrap_err(), Error::NotInvertible(7));
    }

    #[test]
    fn ranks() {
        let q = FieldSpec::Rational;
        assert_eq!(field_rank(q, &int_matrix(&[&[0, 0], &[0, 0]])), 0);
        let id: Vec<Vec<Scalar>> = (0..4)
            .map(|i| (0..4).map(|j| f_int(i64::from(i == j))).collect())
            .collect();
        assert_eq!(field_rank(q, &id), 4);
        assert_eq!(field_rank(q, &int_matrix(&[&[1, 2], &[2, 4]])), 1);
        // rank 2 over Q, rank 1 over F_2
        let m = int_matrix(&[&[1, 1], &[1, -1]]);
        assert_eq!(field_rank(q, &m), 2);
        assert_eq!(field_rank(FieldSpec::Prime(2), &m), 1);
        assert_eq!(field_rank(q, &[]), 0);
    }

    fn f_int(x: i64) -> Scalar {
        BigRational::from_integer(BigInt::from(x))
    }
}
