//! Multigraded Betti numbers of `k[Q]` and of constant functors on finite
//! categories, and the harness that checks the three ways of computing them
//! against each other.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::field::{field_rank, FieldSpec};
use crate::fincat::{bound_warnings, lub_objects, FiniteCategory};
use crate::homology::{delta_complex, reduced_homology, relative_nerve_homology};
use crate::resolution::{bar_complex, betti_from_complex, minimize};
use crate::semigroup::{AffineSemigroup, Degree};

/// Nonzero Betti numbers `β_{n,c}`, keyed by `(n, c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiTable {
    field: FieldSpec,
    bound: Option<Degree>,
    entries: BTreeMap<(usize, Degree), usize>,
    warnings: Vec<String>,
}

#[derive(Serialize)]
struct TableJson<'a> {
    field: String,
    entries: Vec<EntryJson<'a>>,
}

#[derive(Serialize)]
struct EntryJson<'a> {
    n: usize,
    degree: &'a [i64],
    beta: usize,
}

impl BettiTable {
    pub fn new(field: FieldSpec, bound: Option<Degree>) -> Self {
        BettiTable {
            field,
            bound,
            entries: BTreeMap::new(),
            warnings: Vec::new(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// The candidate box, when the table came from one.
    pub fn bound(&self) -> Option<&Degree> {
        self.bound.as_ref()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn get(&self, n: usize, c: &Degree) -> usize {
        self.entries.get(&(n, c.clone())).copied().unwrap_or(0)
    }

    pub fn set(&mut self, n: usize, c: Degree, beta: usize) {
        if beta == 0 {
            self.entries.remove(&(n, c));
        } else {
            self.entries.insert((n, c), beta);
        }
    }

    pub(crate) fn increment(&mut self, n: usize, c: Degree) {
        *self.entries.entry((n, c)).or_insert(0) += 1;
    }

    /// Nonzero entries ordered by `n`, then degree.
    pub fn entries(&self) -> impl Iterator<Item = (usize, &Degree, usize)> {
        self.entries.iter().map(|((n, c), &b)| (*n, c, b))
    }

    /// Degrees with some nonzero `β_{n,c}`.
    pub fn degrees(&self) -> BTreeSet<Degree> {
        self.entries.keys().map(|(_, c)| c.clone()).collect()
    }

    /// `Σ_c β_{n,c}` for each `n` up to the last nonzero one.
    pub fn ranks(&self) -> Vec<usize> {
        let len = self.entries.keys().map(|(n, _)| n + 1).max().unwrap_or(0);
        let mut out = vec![0; len];
        for ((n, _), b) in &self.entries {
            out[*n] += b;
        }
        out
    }

    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }

    /// Equality of the nonzero entries, ignoring field, bound and warnings.
    pub fn same_entries(&self, other: &BettiTable) -> bool {
        self.entries == other.entries
    }

    /// Entries where the two tables differ, as `(n, c, self, other)`.
    pub fn differences(&self, other: &BettiTable) -> Vec<(usize, Degree, usize, usize)> {
        let keys: BTreeSet<&(usize, Degree)> = self.entries.keys().chain(other.entries.keys()).collect();
        keys.into_iter()
            .filter_map(|(n, c)| {
                let (a, b) = (self.get(*n, c), other.get(*n, c));
                (a != b).then(|| (*n, c.clone(), a, b))
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        let json = TableJson {
            field: self.field.to_string(),
            entries: self
                .entries()
                .map(|(n, c, beta)| EntryJson {
                    n,
                    degree: c.coords(),
                    beta,
                })
                .collect(),
        };
        serde_json::to_string(&json).expect("table serialization cannot fail")
    }

    pub fn to_text(&self) -> String {
        let rows: Vec<(String, String, String)> = self
            .entries()
            .map(|(n, c, b)| (n.to_string(), c.to_string(), b.to_string()))
            .collect();
        let w0 = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max(1);
        let w1 = rows.iter().map(|r| r.1.len()).max().unwrap_or(0).max(6);
        let mut s = String::new();
        let _ = writeln!(s, "field: {}", self.field);
        if let Some(b) = &self.bound {
            let _ = writeln!(s, "bound: {b}");
        }
        let _ = writeln!(s, "{:<w0$}  {:<w1$}  beta", "n", "degree");
        for (n, c, b) in rows {
            let _ = writeln!(s, "{n:<w0$}  {c:<w1$}  {b}");
        }
        s
    }
}

fn generator_rows(q: &AffineSemigroup) -> Vec<Vec<crate::field::Scalar>> {
    q.generators()
        .iter()
        .map(|g| g.coords().iter().map(|&x| FieldSpec::Rational.from_i64(x)).collect())
        .collect()
}

fn resolve_bound(q: &AffineSemigroup, bound: Option<&Degree>) -> Result<Degree> {
    match bound {
        Some(b) => {
            q.check_dimension(b)?;
            Ok(b.clone())
        }
        None => Ok(q.total_degree()),
    }
}

/// `β_{n,c}(k[Q]) = dim H̃_{n−1}(Δ_c)` over the lub-category objects in the
/// box `[0, bound]`. The box defaults to `deg M`, the sum of the generators.
pub fn betti_table(q: &AffineSemigroup, field: FieldSpec, bound: Option<&Degree>) -> Result<BettiTable> {
    let bound = resolve_bound(q, bound)?;
    let candidates = lub_objects(q, &bound)?;
    let nvars = q.num_generators();
    let found: Result<Vec<Vec<(usize, Degree, usize)>>> = candidates
        .par_iter()
        .map(|c| {
            let delta = delta_complex(q, c)?;
            let h = reduced_homology(&delta, field);
            let row: Vec<(usize, Degree, usize)> = (0..=nvars)
                .map(|n| (n, c.clone(), h.get(n as i64 - 1)))
                .filter(|&(_, _, b)| b > 0)
                .collect();
            // a cone has no reduced homology
            debug_assert!(row.is_empty() || !delta.is_cone());
            Ok(row)
        })
        .collect();
    let mut table = BettiTable::new(field, Some(bound.clone()));
    for (n, c, b) in found?.into_iter().flatten() {
        table.set(n, c, b);
    }
    let degrees = table.degrees();
    table.warnings = bound_warnings(q, &bound, degrees.iter());
    // the toric ideal has height n − rank A, so it needs that many generators
    let height = nvars - field_rank(FieldSpec::Rational, &generator_rows(q));
    let first = table.ranks().get(1).copied().unwrap_or(0);
    if first < height {
        table.warnings.push(format!(
            "only {first} first syzygy degree(s) found but the toric ideal has height {height}; \
             some Betti degrees lie outside the bound {bound}"
        ));
    }
    Ok(table)
}

/// Full subcategory on the degrees where some Betti number is nonzero.
pub fn betti_category(q: &AffineSemigroup, field: FieldSpec, bound: Option<&Degree>) -> Result<FiniteCategory> {
    let table = betti_table(q, field, bound)?;
    FiniteCategory::full_subcategory(q, table.degrees())
}

/// Betti numbers of the constant functor on `cat`:
/// `β_{n,c} = dim H_n(N C_{≤c}, N C_{<c})`.
pub fn const_betti_table(cat: &FiniteCategory, field: FieldSpec) -> Result<BettiTable> {
    let found: Result<Vec<Vec<(usize, Degree, usize)>>> = cat
        .objects()
        .par_iter()
        .map(|c| {
            let h = relative_nerve_homology(cat, c, field)?;
            Ok(h.nonzero()
                .map(|(n, b)| (usize::try_from(n).expect("relative homology starts at 0"), c.clone(), b))
                .collect())
        })
        .collect();
    let mut table = BettiTable::new(field, None);
    for (n, c, b) in found?.into_iter().flatten() {
        table.set(n, c, b);
    }
    Ok(table)
}

/// The three Betti computations side by side.
#[derive(Clone, Debug)]
pub struct CrossValidation {
    /// From `Δ_c` over the lub-category.
    pub delta: BettiTable,
    /// Constant functor on the Betti category.
    pub constant: BettiTable,
    /// Read off the minimized bar resolution of the Betti category.
    pub minimal: BettiTable,
}

impl CrossValidation {
    pub fn agrees(&self) -> bool {
        self.delta.same_entries(&self.constant) && self.delta.same_entries(&self.minimal)
    }

    pub fn mismatches(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, other) in [("constant functor", &self.constant), ("minimal resolution", &self.minimal)] {
            for (n, c, a, b) in self.delta.differences(other) {
                out.push(format!("beta_{n},{c}: delta complex gives {a}, {name} gives {b}"));
            }
        }
        out
    }
}

pub fn cross_validate(q: &AffineSemigroup, field: FieldSpec, bound: Option<&Degree>) -> Result<CrossValidation> {
    let delta = betti_table(q, field, bound)?;
    let cat = FiniteCategory::full_subcategory(q, delta.degrees())?;
    let constant = const_betti_table(&cat, field)?;
    let minimal = betti_from_complex(&minimize(&bar_complex(&cat, field))?)?;
    Ok(CrossValidation {
        delta,
        constant,
        minimal,
    })
}
