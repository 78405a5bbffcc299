//! JSON file format for graded free complexes.
//!
//! ```json
//! {"field":"rational","generators":[[3,0],[2,1]],
//!  "modules":[[[0,0]],[[4,2]]],
//!  "differentials":[[[[[1,1,[0,2]],[-1,1,[1,0]]]]]]}
//! ```
//!
//! `differentials[n − 1]` is `d_n` as a dense list of rows; each entry is a
//! list of terms `[numerator, denominator, exponents]`. Numbers are arbitrary
//! precision integers. Output is compact and canonical, so writing a parsed
//! file reproduces it byte for byte.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Number;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::semigroup::{AffineSemigroup, Degree, Monomial};

use super::{GradedFreeComplex, PolyEntry, PolyMatrix};

type Term = (Number, Number, Vec<u32>);

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexFile {
    field: String,
    generators: Vec<Vec<i64>>,
    modules: Vec<Vec<Vec<i64>>>,
    differentials: Vec<Vec<Vec<Vec<Term>>>>,
}

pub fn to_json(x: &GradedFreeComplex) -> String {
    let file = ComplexFile {
        field: x.field().to_string(),
        generators: x.semigroup().generator_matrix(),
        modules: x
            .modules()
            .iter()
            .map(|m| m.iter().map(|d| d.0.clone()).collect())
            .collect(),
        differentials: x
            .differentials()
            .iter()
            .map(|d| {
                (0..d.rows())
                    .map(|i| {
                        (0..d.cols())
                            .map(|j| d.get(i, j).map_or_else(Vec::new, entry_terms))
                            .collect()
                    })
                    .collect()
            })
            .collect(),
    };
    serde_json::to_string(&file).expect("complex serialization cannot fail")
}

fn entry_terms(e: &PolyEntry) -> Vec<Term> {
    e.terms()
        .map(|(m, s)| (big_number(s.numer()), big_number(s.denom()), m.0.clone()))
        .collect()
}

fn big_number(x: &BigInt) -> Number {
    Number::from_str(&x.to_string()).expect("integers are valid JSON numbers")
}

fn parse_big(n: &Number) -> Result<BigInt> {
    BigInt::from_str(&n.to_string())
        .map_err(|_| Error::MalformedComplex(format!("coefficient {n} is not an integer")))
}

pub fn from_json(text: &str) -> Result<GradedFreeComplex> {
    let file: ComplexFile =
        serde_json::from_str(text).map_err(|e| Error::MalformedComplex(e.to_string()))?;
    let field = FieldSpec::from_str(&file.field)?;
    let q = AffineSemigroup::new(file.generators)?;
    let modules: Vec<Vec<Degree>> = file
        .modules
        .into_iter()
        .map(|m| m.into_iter().map(Degree).collect())
        .collect();
    let nvars = q.num_generators();
    let mut differentials = Vec::with_capacity(file.differentials.len());
    for (k, rows) in file.differentials.into_iter().enumerate() {
        let cols = rows.first().map_or_else(
            || modules.get(k + 1).map_or(0, Vec::len),
            Vec::len,
        );
        let mut d = PolyMatrix::zeros(rows.len(), cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::MalformedComplex(format!("d_{} has ragged rows", k + 1)));
            }
            for (j, terms) in row.into_iter().enumerate() {
                let mut parsed = Vec::with_capacity(terms.len());
                for (num, den, exps) in terms {
                    let den = parse_big(&den)?;
                    if den.is_zero() {
                        return Err(Error::MalformedComplex("zero denominator".into()));
                    }
                    if exps.len() != nvars {
                        return Err(Error::MalformedComplex(format!(
                            "monomial has {} exponents, expected {nvars}",
                            exps.len()
                        )));
                    }
                    parsed.push((BigRational::new(parse_big(&num)?, den), Monomial(exps)));
                }
                d.set(i, j, PolyEntry::from_terms(field, parsed)?);
            }
        }
        differentials.push(d);
    }
    GradedFreeComplex::new(q, field, modules, differentials)
}

pub fn read_file(path: &std::path::Path) -> Result<GradedFreeComplex> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    from_json(&text)
}
