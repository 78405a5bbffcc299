//! Pointed affine semigroups `Q ⊆ N^r` given by a generator matrix.
//!
//! The semigroup is stored through its canonical minimal generators
//! `a_1..a_n`. Membership is decided by a memoized dynamic program over the
//! finite box below the queried degree; the memo is shared between clones and
//! safe to query from several threads at once.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An integer vector in `Z^r`; the objects of every category in this crate.
///
/// Degrees are ordered by coordinate sum first and lexicographically second,
/// which is the canonical object order used for reproducible output.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Degree(pub Vec<i64>);

impl Degree {
    pub fn zero(rank: usize) -> Self {
        Degree(vec![0; rank])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Degree) -> Degree {
        Degree(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn checked_add(&self, other: &Degree) -> Result<Degree> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(Degree)
    }

    pub fn checked_scale(&self, k: i64) -> Result<Degree> {
        self.0
            .iter()
            .map(|a| a.checked_mul(k).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(Degree)
    }

    /// Coordinatewise `self <= other`.
    pub fn le_coordinatewise(&self, other: &Degree) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Degree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Degree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Vec<i64>> for Degree {
    fn from(v: Vec<i64>) -> Self {
        Degree(v)
    }
}

impl From<&[i64]> for Degree {
    fn from(v: &[i64]) -> Self {
        Degree(v.to_vec())
    }
}

/// Exponent vector in `N^n`. Monomials are the morphisms of the action
/// category; composition is exponent addition. Ordered lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    /// Renders the monomial as a product of named generators, e.g. `a*c^2`.
    pub fn render(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                let name = names.get(i).cloned().unwrap_or_else(|| format!("x_{}", i + 1));
                if e == 1 {
                    name
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Default generator names `x_1..x_n`.
pub fn default_names(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x_{i}")).collect()
}

/// A pointed affine semigroup with canonical minimal generators in `N^r`.
#[derive(Clone)]
pub struct AffineSemigroup {
    generators: Arc<[Degree]>,
    rank: usize,
    memo: Arc<RwLock<HashMap<Degree, bool>>>,
}

impl fmt::Debug for AffineSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AffineSemigroup")
            .field("rank", &self.rank)
            .field("generators", &self.generators)
            .finish()
    }
}

impl PartialEq for AffineSemigroup {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
    }
}

impl Eq for AffineSemigroup {}

impl AffineSemigroup {
    /// Validates the generator list and builds the semigroup.
    ///
    /// Rejects empty input, ragged vectors, negative entries, the zero vector,
    /// and any generator that is a nonnegative combination of the others.
    pub fn new(generators: Vec<Vec<i64>>) -> Result<Self> {
        let Some(first) = generators.first() else {
            return Err(Error::EmptyGenerators);
        };
        let rank = first.len();
        if rank == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        for (index, g) in generators.iter().enumerate() {
            if g.len() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    found: g.len(),
                });
            }
            if g.iter().any(|&x| x < 0) {
                return Err(Error::NegativeEntry { index });
            }
            if g.iter().all(|&x| x == 0) {
                return Err(Error::ZeroGenerator { index });
            }
            // keeps every sum of generators and bound multiple well inside i64
            if g.iter().any(|&x| x > i64::from(i32::MAX)) {
                return Err(Error::Overflow);
            }
        }
        let degrees: Vec<Degree> = generators.into_iter().map(Degree).collect();
        for index in 0..degrees.len() {
            let others: Vec<Degree> = degrees
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != index)
                .map(|(_, g)| g.clone())
                .collect();
            let sub = Self::unchecked(others, rank);
            if sub.contains(&degrees[index]) {
                return Err(Error::NonMinimalGenerator {
                    index,
                    generator: degrees[index].clone(),
                });
            }
        }
        Ok(Self::unchecked(degrees, rank))
    }

    fn unchecked(generators: Vec<Degree>, rank: usize) -> Self {
        AffineSemigroup {
            generators: generators.into(),
            rank,
            memo: Arc::new(RwLock::new(HashMap::new())),
        }
    }

    /// Ambient rank `r`.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Number of generators `n`.
    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Degree] {
        &self.generators
    }

    pub fn generator_matrix(&self) -> Vec<Vec<i64>> {
        self.generators.iter().map(|g| g.0.clone()).collect()
    }

    /// `deg M`, the sum of all generators.
    pub fn total_degree(&self) -> Degree {
        self.generators
            .iter()
            .fold(Degree::zero(self.rank), |acc, g| acc.add(g))
    }

    /// Degree `Σ_{i∈I} a_i` of a set of generator indices.
    pub fn subset_degree(&self, subset: &[usize]) -> Degree {
        subset
            .iter()
            .fold(Degree::zero(self.rank), |acc, &i| acc.add(&self.generators[i]))
    }

    /// `A·x`, the degree of a monomial.
    pub fn monomial_degree(&self, m: &Monomial) -> Degree {
        let mut d = vec![0i64; self.rank];
        for (g, &e) in self.generators.iter().zip(&m.0) {
            for (dk, gk) in d.iter_mut().zip(&g.0) {
                *dk += gk * i64::from(e);
            }
        }
        Degree(d)
    }

    /// Like [`monomial_degree`](Self::monomial_degree) but rejects length
    /// mismatches and overflow; used on untrusted input.
    pub fn checked_monomial_degree(&self, m: &Monomial) -> Result<Degree> {
        if m.0.len() != self.num_generators() {
            return Err(Error::DimensionMismatch {
                expected: self.num_generators(),
                found: m.0.len(),
            });
        }
        let mut d = vec![0i64; self.rank];
        for (g, &e) in self.generators.iter().zip(&m.0) {
            for (dk, gk) in d.iter_mut().zip(&g.0) {
                let term = gk.checked_mul(i64::from(e)).ok_or(Error::Overflow)?;
                *dk = dk.checked_add(term).ok_or(Error::Overflow)?;
            }
        }
        Ok(Degree(d))
    }

    pub fn check_dimension(&self, d: &Degree) -> Result<()> {
        if d.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                found: d.len(),
            });
        }
        Ok(())
    }

    /// Membership test `d ∈ Q`.
    pub fn is_member(&self, d: &Degree) -> Result<bool> {
        self.check_dimension(d)?;
        Ok(self.contains(d))
    }

    /// `a ≤_Q b`, i.e. `b − a ∈ Q`.
    pub fn q_le(&self, a: &Degree, b: &Degree) -> Result<bool> {
        self.check_dimension(a)?;
        self.check_dimension(b)?;
        Ok(self.le(a, b))
    }

    pub(crate) fn le(&self, a: &Degree, b: &Degree) -> bool {
        self.contains(&b.sub(a))
    }

    /// Unchecked membership; the degree must have length `r`.
    pub(crate) fn contains(&self, d: &Degree) -> bool {
        if !d.is_nonnegative() {
            return false;
        }
        if d.is_zero() {
            return true;
        }
        if let Some(&known) = self.memo.read().expect("memo poisoned").get(d) {
            return known;
        }

        // Iterative depth-first evaluation of
        //   d ∈ Q  ⇔  d = 0  ∨  ∃i: d − a_i ≥ 0 ∧ d − a_i ∈ Q.
        // Each frame holds a degree and the next generator to try.
        let mut local: HashMap<Degree, bool> = HashMap::new();
        let mut stack: Vec<(Degree, usize)> = vec![(d.clone(), 0)];
        let lookup = |e: &Degree, local: &HashMap<Degree, bool>| -> Option<bool> {
            if !e.is_nonnegative() {
                return Some(false);
            }
            if e.is_zero() {
                return Some(true);
            }
            if let Some(&v) = local.get(e) {
                return Some(v);
            }
            self.memo.read().expect("memo poisoned").get(e).copied()
        };
        while let Some((cur, next)) = stack.last_mut() {
            if *next == self.generators.len() {
                let cur = cur.clone();
                local.insert(cur, false);
                stack.pop();
                continue;
            }
            let child = cur.sub(&self.generators[*next]);
            match lookup(&child, &local) {
                Some(true) => {
                    let cur = cur.clone();
                    local.insert(cur, true);
                    stack.pop();
                }
                Some(false) => *next += 1,
                None => stack.push((child, 0)),
            }
        }
        let answer = local[d];
        self.memo.write().expect("memo poisoned").extend(local);
        answer
    }

    /// All exponent vectors `x ∈ N^n` with `A·x = d`, in lexicographic order.
    pub fn enumerate_monomials(&self, d: &Degree) -> Result<Vec<Monomial>> {
        self.check_dimension(d)?;
        Ok(self.monomials_of_degree(d))
    }

    pub(crate) fn monomials_of_degree(&self, d: &Degree) -> Vec<Monomial> {
        let n = self.generators.len();
        let mut out = Vec::new();
        if !d.is_nonnegative() {
            return out;
        }
        // supported[i][k]: some generator with index >= i is positive in coordinate k
        let mut supported = vec![vec![false; self.rank]; n + 1];
        for i in (0..n).rev() {
            for k in 0..self.rank {
                supported[i][k] = supported[i + 1][k] || self.generators[i].0[k] > 0;
            }
        }
        let mut exps = vec![0u32; n];
        self.enumerate_rec(0, d.clone(), &supported, &mut exps, &mut out);
        out
    }

    fn enumerate_rec(
        &self,
        i: usize,
        rem: Degree,
        supported: &[Vec<bool>],
        exps: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        if rem.0.iter().zip(&supported[i]).any(|(&x, &s)| x > 0 && !s) {
            return;
        }
        if i == self.generators.len() {
            if rem.is_zero() {
                out.push(Monomial(exps.clone()));
            }
            return;
        }
        let g = &self.generators[i];
        let max = g
            .0
            .iter()
            .zip(&rem.0)
            .filter(|(&gk, _)| gk > 0)
            .map(|(&gk, &rk)| rk / gk)
            .min()
            .unwrap_or(0);
        let mut cur = rem;
        for e in 0..=max {
            exps[i] = e as u32;
            self.enumerate_rec(i + 1, cur.clone(), supported, exps, out);
            cur = cur.sub(g);
        }
        exps[i] = 0;
    }

    /// All generator subsets `I` (as sorted index lists) with `deg I ≤_Q c`.
    ///
    /// The family is downward closed, so it is grown one vertex at a time
    /// from the empty set. Listed by size, then lexicographically.
    pub(crate) fn subsets_below(&self, c: &Degree) -> Vec<Vec<usize>> {
        let n = self.generators.len();
        let mut out: Vec<Vec<usize>> = vec![Vec::new()];
        let mut layer: Vec<(Vec<usize>, Degree)> = vec![(Vec::new(), Degree::zero(self.rank))];
        while !layer.is_empty() {
            let mut next = Vec::new();
            for (face, deg) in &layer {
                let start = face.last().map_or(0, |&v| v + 1);
                for v in start..n {
                    let d = deg.add(&self.generators[v]);
                    if self.le(&d, c) {
                        let mut f = face.clone();
                        f.push(v);
                        next.push((f, d));
                    }
                }
            }
            out.extend(next.iter().map(|(f, _)| f.clone()));
            layer = next;
        }
        out
    }

    /// All `b ∈ Q` with `b ≤_Q c`, in canonical degree order.
    pub fn interval(&self, c: &Degree) -> Result<Vec<Degree>> {
        self.check_dimension(c)?;
        if !self.contains(c) {
            return Err(Error::NotAMember(c.clone()));
        }
        let zero = Degree::zero(self.rank);
        let mut seen: HashSet<Degree> = HashSet::from([zero.clone()]);
        let mut queue = VecDeque::from([zero]);
        while let Some(b) = queue.pop_front() {
            for g in self.generators.iter() {
                let next = b.add(g);
                if next.le_coordinatewise(c) && !seen.contains(&next) && self.le(&next, c) {
                    seen.insert(next.clone());
                    queue.push_back(next);
                }
            }
        }
        let mut out: Vec<Degree> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn twisted_cubic() -> AffineSemigroup {
        AffineSemigroup::new(vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]).unwrap()
    }

    fn d(v: &[i64]) -> Degree {
        Degree(v.to_vec())
    }

    #[test]
    fn builds_valid_semigroups() {
        let q = twisted_cubic();
        assert_eq!(q.rank(), 2);
        assert_eq!(q.num_generators(), 4);
        assert_eq!(q.total_degree(), d(&[6, 6]));
        assert!(AffineSemigroup::new(vec![vec![1, 0], vec![0, 1]]).is_ok());
    }

    #[test]
    fn rejects_bad_generators() {
        assert_eq!(
            AffineSemigroup::new(vec![vec![1, 0], vec![2, 0]]).unwrap_err(),
            Error::NonMinimalGenerator {
                index: 1,
                generator: d(&[2, 0])
            }
        );
        assert_eq!(
            AffineSemigroup::new(vec![vec![1, 0], vec![0, 0]]).unwrap_err(),
            Error::ZeroGenerator { index: 1 }
        );
        assert_eq!(
            AffineSemigroup::new(vec![vec![1, -1]]).unwrap_err(),
            Error::NegativeEntry { index: 0 }
        );
        assert!(matches!(
            AffineSemigroup::new(vec![vec![1, 0], vec![1]]).unwrap_err(),
            Error::DimensionMismatch { .. }
        ));
        assert_eq!(
            AffineSemigroup::new(vec![]).unwrap_err(),
            Error::EmptyGenerators
        );
        // duplicates are not minimal either
        assert!(matches!(
            AffineSemigroup::new(vec![vec![1, 1], vec![1, 1]]).unwrap_err(),
            Error::NonMinimalGenerator { index: 0, .. }
        ));
    }

    #[test]
    fn membership() {
        let q = twisted_cubic();
        assert!(q.is_member(&d(&[0, 0])).unwrap());
        assert!(!q.is_member(&d(&[1, 1])).unwrap());
        assert!(q.is_member(&d(&[5, 4])).unwrap());
        assert!(!q.is_member(&d(&[-3, 6])).unwrap());
        assert!(q.is_member(&d(&[1])).is_err());
    }

    #[test]
    fn order() {
        let q = twisted_cubic();
        assert!(q.q_le(&d(&[4, 2]), &d(&[4, 2])).unwrap());
        assert!(q.q_le(&d(&[3, 0]), &d(&[3, 3])).unwrap());
        assert!(!q.q_le(&d(&[4, 2]), &d(&[3, 3])).unwrap());
    }

    #[test]
    fn monomials() {
        let q = twisted_cubic();
        assert_eq!(
            q.enumerate_monomials(&d(&[0, 0])).unwrap(),
            vec![Monomial(vec![0, 0, 0, 0])]
        );
        // a*b*d, a*c^2, b^2*c in lexicographic order of exponents
        assert_eq!(
            q.enumerate_monomials(&d(&[5, 4])).unwrap(),
            vec![
                Monomial(vec![0, 2, 1, 0]),
                Monomial(vec![1, 0, 2, 0]),
                Monomial(vec![1, 1, 0, 1]),
            ]
        );
        assert!(q.enumerate_monomials(&d(&[1, 1])).unwrap().is_empty());
        for m in q.enumerate_monomials(&d(&[9, 6])).unwrap() {
            assert_eq!(q.monomial_degree(&m), d(&[9, 6]));
        }
    }

    #[test]
    fn intervals() {
        let q = twisted_cubic();
        assert_eq!(q.interval(&d(&[0, 0])).unwrap(), vec![d(&[0, 0])]);
        let got: HashSet<Degree> = q.interval(&d(&[3, 3])).unwrap().into_iter().collect();
        let want: HashSet<Degree> = [[0, 0], [3, 0], [2, 1], [1, 2], [0, 3], [3, 3]]
            .iter()
            .map(|v| d(v))
            .collect();
        assert_eq!(got, want);
        assert_eq!(
            q.interval(&d(&[1, 1])).unwrap_err(),
            Error::NotAMember(d(&[1, 1]))
        );
        let free = AffineSemigroup::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(
            free.interval(&d(&[1, 1])).unwrap(),
            vec![d(&[0, 0]), d(&[0, 1]), d(&[1, 0]), d(&[1, 1])]
        );
    }

    #[test]
    fn render_monomials() {
        let names: Vec<String> = ["a", "b", "c", "d"].iter().map(|s| s.to_string()).collect();
        assert_eq!(Monomial(vec![1, 0, 2, 0]).render(&names), "a*c^2");
        assert_eq!(Monomial(vec![0, 0, 0, 0]).render(&names), "1");
        assert_eq!(Monomial(vec![0, 1]).render(&default_names(2)), "x_2");
    }

    #[test]
    fn degree_order_is_graded() {
        let mut v = vec![d(&[3, 3]), d(&[0, 3]), d(&[2, 1]), d(&[0, 0])];
        v.sort();
        assert_eq!(v, vec![d(&[0, 0]), d(&[0, 3]), d(&[2, 1]), d(&[3, 3])]);
    }
}
