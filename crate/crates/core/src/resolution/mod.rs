//! Multigraded free complexes over `R = k[x_1..x_n]`, graded by `Z^r` through
//! the generator matrix, and the constructions on them: the bar resolution of
//! a finite category, verification, minimization and transport.

mod bar;
pub mod io;
mod minimize;
mod transport;
mod verify;

pub use bar::{bar_chains, bar_complex};
pub use minimize::{minimize, minimize_with, PivotOrder};
pub use transport::transport_resolution;
pub use verify::{
    strand, strand_homology, verify_dsquare, verify_resolution, ResolutionReport, Strand, StrandFailure,
};

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Zero;

use crate::betti::BettiTable;
use crate::error::{Error, Result};
use crate::field::{format_scalar, FieldSpec, Scalar};
use crate::semigroup::{AffineSemigroup, Degree, Monomial};

/// A homogeneous polynomial entry: field scalars on monomials, in canonical
/// form (sorted, merged, no zero coefficients).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolyEntry {
    terms: BTreeMap<Monomial, Scalar>,
}

impl PolyEntry {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(coefficient: Scalar, monomial: Monomial) -> Self {
        let mut p = Self::zero();
        if !coefficient.is_zero() {
            p.terms.insert(monomial, coefficient);
        }
        p
    }

    /// Builds an entry from arbitrary terms, reducing scalars into the field
    /// and merging like monomials.
    pub fn from_terms(field: FieldSpec, terms: impl IntoIterator<Item = (Scalar, Monomial)>) -> Result<Self> {
        let mut p = Self::zero();
        for (s, m) in terms {
            let s = field.reduce(&s)?;
            p.add_term(field, m, &s);
        }
        Ok(p)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of the constant monomial, if nonzero. The zero exponent
    /// vector is the lexicographically smallest key, so this is O(1).
    pub fn constant_term(&self) -> Option<&Scalar> {
        self.terms
            .iter()
            .next()
            .filter(|(m, _)| m.is_one())
            .map(|(_, s)| s)
    }

    pub fn add_term(&mut self, field: FieldSpec, m: Monomial, s: &Scalar) {
        let v = match self.terms.get(&m) {
            Some(old) => field.add(old, s),
            None => s.clone(),
        };
        if v.is_zero() {
            self.terms.remove(&m);
        } else {
            self.terms.insert(m, v);
        }
    }

    /// `self += factor · other`.
    pub fn add_scaled(&mut self, field: FieldSpec, other: &PolyEntry, factor: &PolyEntry) {
        for (m1, s1) in &other.terms {
            for (m2, s2) in &factor.terms {
                self.add_term(field, m1.mul(m2), &field.mul(s1, s2));
            }
        }
    }

    pub fn mul(&self, field: FieldSpec, other: &PolyEntry) -> PolyEntry {
        let mut out = PolyEntry::zero();
        out.add_scaled(field, self, other);
        out
    }

    pub fn scale(&self, field: FieldSpec, s: &Scalar) -> PolyEntry {
        let mut out = PolyEntry::zero();
        for (m, x) in &self.terms {
            out.add_term(field, m.clone(), &field.mul(x, s));
        }
        out
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let coeff = format_scalar(c);
            let (sign, magnitude) = match coeff.strip_prefix('-') {
                Some(rest) => ("-", rest.to_string()),
                None => ("+", coeff),
            };
            if i == 0 {
                if sign == "-" {
                    s.push('-');
                }
            } else {
                let _ = write!(s, " {sign} ");
            }
            if m.is_one() {
                s.push_str(&magnitude);
            } else {
                if magnitude != "1" {
                    let _ = write!(s, "{magnitude}*");
                }
                s.push_str(&m.render(names));
            }
        }
        s
    }
}

/// Sparse matrix of polynomial entries, stored by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    rows: usize,
    columns: Vec<BTreeMap<usize, PolyEntry>>,
}

impl PolyMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        PolyMatrix {
            rows,
            columns: vec![BTreeMap::new(); cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.columns.len()
    }

    pub fn get(&self, row: usize, col: usize) -> Option<&PolyEntry> {
        self.columns[col].get(&row)
    }

    pub fn set(&mut self, row: usize, col: usize, entry: PolyEntry) {
        assert!(row < self.rows, "row out of range");
        if entry.is_zero() {
            self.columns[col].remove(&row);
        } else {
            self.columns[col].insert(row, entry);
        }
    }

    pub fn add_to(&mut self, field: FieldSpec, row: usize, col: usize, m: Monomial, s: &Scalar) {
        let entry = self.columns[col].entry(row).or_default();
        entry.add_term(field, m, s);
        if entry.is_zero() {
            self.columns[col].remove(&row);
        }
    }

    /// Nonzero entries of one column, by increasing row.
    pub fn column(&self, col: usize) -> &BTreeMap<usize, PolyEntry> {
        &self.columns[col]
    }

    pub(crate) fn column_mut(&mut self, col: usize) -> &mut BTreeMap<usize, PolyEntry> {
        &mut self.columns[col]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &PolyEntry)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, col)| col.iter().map(move |(&i, e)| (i, j, e)))
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(BTreeMap::len).sum()
    }

    /// `self · other`.
    pub fn mul(&self, field: FieldSpec, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.cols(), other.rows, "shape mismatch");
        let mut out = PolyMatrix::zeros(self.rows, other.cols());
        for (j, col) in other.columns.iter().enumerate() {
            let mut acc: BTreeMap<usize, PolyEntry> = BTreeMap::new();
            for (&k, b) in col {
                for (&i, a) in &self.columns[k] {
                    acc.entry(i).or_default().add_scaled(field, a, b);
                }
            }
            acc.retain(|_, e| !e.is_zero());
            out.columns[j] = acc;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(BTreeMap::is_empty)
    }
}

/// A finite free complex `F_len → … → F_1 → F_0` of `Z^r`-graded modules.
///
/// `modules[n]` lists the generator degrees of `F_n`; `differentials[n − 1]`
/// is the matrix of `d_n : F_n → F_{n−1}` with `r_{n−1}` rows and `r_n`
/// columns. Every monomial `m` in entry `(i, j)` of `d_n` satisfies
/// `deg m + δ^{n−1}_i = δ^n_j`; this is checked on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedFreeComplex {
    semigroup: AffineSemigroup,
    field: FieldSpec,
    modules: Vec<Vec<Degree>>,
    differentials: Vec<PolyMatrix>,
}

impl GradedFreeComplex {
    pub fn new(
        semigroup: AffineSemigroup,
        field: FieldSpec,
        modules: Vec<Vec<Degree>>,
        differentials: Vec<PolyMatrix>,
    ) -> Result<Self> {
        let x = Self::new_unchecked(semigroup, field, modules, differentials)?;
        x.check_homogeneous()?;
        Ok(x)
    }

    /// Validates shapes only.
    pub(crate) fn new_unchecked(
        semigroup: AffineSemigroup,
        field: FieldSpec,
        modules: Vec<Vec<Degree>>,
        differentials: Vec<PolyMatrix>,
    ) -> Result<Self> {
        if modules.is_empty() {
            return Err(Error::MalformedComplex("no modules".into()));
        }
        if differentials.len() + 1 != modules.len() {
            return Err(Error::MalformedComplex(format!(
                "{} modules need {} differentials, found {}",
                modules.len(),
                modules.len() - 1,
                differentials.len()
            )));
        }
        for (n, d) in differentials.iter().enumerate() {
            if d.rows() != modules[n].len() || d.cols() != modules[n + 1].len() {
                return Err(Error::MalformedComplex(format!(
                    "d_{} has shape {}x{}, expected {}x{}",
                    n + 1,
                    d.rows(),
                    d.cols(),
                    modules[n].len(),
                    modules[n + 1].len()
                )));
            }
        }
        for deg in modules.iter().flatten() {
            semigroup.check_dimension(deg)?;
        }
        Ok(GradedFreeComplex {
            semigroup,
            field,
            modules,
            differentials,
        })
    }

    pub fn check_homogeneous(&self) -> Result<()> {
        for (k, d) in self.differentials.iter().enumerate() {
            for (i, j, entry) in d.entries() {
                let expected = self.modules[k + 1][j].sub(&self.modules[k][i]);
                for (m, _) in entry.terms() {
                    let found = self.semigroup.checked_monomial_degree(m)?;
                    if found != expected {
                        return Err(Error::HomogeneityViolation {
                            index: k + 1,
                            row: i,
                            col: j,
                            expected,
                            found,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn semigroup(&self) -> &AffineSemigroup {
        &self.semigroup
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Length: the largest homological index.
    pub fn len(&self) -> usize {
        self.modules.len() - 1
    }

    /// True for a length-0 complex (a single module, no differentials).
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn modules(&self) -> &[Vec<Degree>] {
        &self.modules
    }

    pub fn module(&self, n: usize) -> &[Degree] {
        &self.modules[n]
    }

    /// `d_n` for `1 ≤ n ≤ len`.
    pub fn differential(&self, n: usize) -> &PolyMatrix {
        &self.differentials[n - 1]
    }

    pub fn differentials(&self) -> &[PolyMatrix] {
        &self.differentials
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.modules.iter().map(Vec::len).collect()
    }

    /// Sorted generator degrees of `F_n`.
    pub fn degree_multiset(&self, n: usize) -> Vec<Degree> {
        let mut v = self.modules[n].clone();
        v.sort();
        v
    }

    /// First differential entry with a nonzero constant term, as `(n, row, col)`.
    pub fn first_constant_entry(&self) -> Option<(usize, usize, usize)> {
        self.differentials.iter().enumerate().find_map(|(k, d)| {
            d.entries()
                .find(|(_, _, e)| e.constant_term().is_some())
                .map(|(i, j, _)| (k + 1, i, j))
        })
    }

    pub fn is_minimal(&self) -> bool {
        self.first_constant_entry().is_none()
    }

    /// Drops trailing zero modules (keeping `F_0`).
    pub fn trimmed(mut self) -> Self {
        while self.modules.len() > 1 && self.modules.last().is_some_and(Vec::is_empty) {
            self.modules.pop();
            self.differentials.pop();
        }
        self
    }

    pub fn render(&self, names: &[String]) -> String {
        let mut s = String::new();
        let ranks: Vec<String> = self.ranks().iter().map(usize::to_string).collect();
        let _ = writeln!(s, "field: {}", self.field);
        let _ = writeln!(s, "ranks: ({})", ranks.join(","));
        for (n, m) in self.modules.iter().enumerate() {
            let degs: Vec<String> = m.iter().map(Degree::to_string).collect();
            let _ = writeln!(s, "F_{n}: {}", degs.join(" "));
        }
        for (k, d) in self.differentials.iter().enumerate() {
            let _ = writeln!(s, "d_{}:", k + 1);
            for i in 0..d.rows() {
                let row: Vec<String> = (0..d.cols())
                    .map(|j| d.get(i, j).map_or_else(|| "0".to_string(), |e| e.render(names)))
                    .collect();
                let _ = writeln!(s, "  [{}]", row.join(", "));
            }
        }
        s
    }
}

/// Betti numbers read off a minimal complex: `β_{n,c}` is the number of
/// generators of `F_n` in degree `c`.
pub fn betti_from_complex(x: &GradedFreeComplex) -> Result<BettiTable> {
    if let Some((index, row, col)) = x.first_constant_entry() {
        return Err(Error::NotMinimal { index, row, col });
    }
    let mut table = BettiTable::new(x.field(), None);
    for (n, module) in x.modules().iter().enumerate() {
        for deg in module {
            table.increment(n, deg.clone());
        }
    }
    Ok(table)
}
