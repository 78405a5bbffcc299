use std::collections::HashMap;

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::Result;
use crate::field::{sparse_rank, SparseVec};
use crate::fincat::members_in_box;
use crate::semigroup::{Degree, Monomial};

use super::GradedFreeComplex;

/// `d_{n−1} ∘ d_n = 0` for every `n`.
pub fn verify_dsquare(x: &GradedFreeComplex) -> bool {
    first_nonzero_square(x).is_none()
}

/// Smallest `n ≥ 2` with `d_{n−1} d_n ≠ 0`.
pub(crate) fn first_nonzero_square(x: &GradedFreeComplex) -> Option<usize> {
    (2..=x.len()).find(|&n| {
        !x.differential(n - 1)
            .mul(x.field(), x.differential(n))
            .is_zero()
    })
}

/// The degree-`c` strand of a complex: a finite complex of vector spaces.
/// The basis of `(F_n)_c` is the pairs `(j, m)` with `deg m + δ^n_j = c`.
#[derive(Clone, Debug)]
pub struct Strand {
    pub degree: Degree,
    pub bases: Vec<Vec<(usize, Monomial)>>,
    /// `maps[n − 1]` holds the columns of `(d_n)_c`.
    pub maps: Vec<Vec<SparseVec>>,
}

impl Strand {
    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    pub fn ranks(&self, x: &GradedFreeComplex) -> Vec<usize> {
        self.maps
            .iter()
            .map(|cols| sparse_rank(x.field(), cols.iter().cloned()))
            .collect()
    }
}

pub fn strand(x: &GradedFreeComplex, c: &Degree) -> Result<Strand> {
    let q = x.semigroup();
    q.check_dimension(c)?;
    let bases: Vec<Vec<(usize, Monomial)>> = x
        .modules()
        .iter()
        .map(|module| {
            module
                .iter()
                .enumerate()
                .flat_map(|(j, deg)| {
                    q.monomials_of_degree(&c.sub(deg))
                        .into_iter()
                        .map(move |m| (j, m))
                })
                .collect()
        })
        .collect();
    let mut maps = Vec::with_capacity(x.len());
    for n in 1..=x.len() {
        let index: HashMap<&(usize, Monomial), usize> =
            bases[n - 1].iter().enumerate().map(|(i, b)| (b, i)).collect();
        let d = x.differential(n);
        let cols = bases[n]
            .iter()
            .map(|(j, m)| {
                let mut col = SparseVec::new();
                for (&i, entry) in d.column(*j) {
                    for (u, s) in entry.terms() {
                        let key = (i, u.mul(m));
                        let row = index[&key];
                        let v = x.field().add(col.get(&row).unwrap_or(&Zero::zero()), s);
                        if v.is_zero() {
                            col.remove(&row);
                        } else {
                            col.insert(row, v);
                        }
                    }
                }
                col
            })
            .collect();
        maps.push(cols);
    }
    Ok(Strand {
        degree: c.clone(),
        bases,
        maps,
    })
}

/// Homology dimensions `H_n` of the degree-`c` strand, `n = 0..=len`.
pub fn strand_homology(x: &GradedFreeComplex, c: &Degree) -> Result<Vec<usize>> {
    let st = strand(x, c)?;
    let dims = st.dims();
    let ranks = st.ranks(x);
    Ok((0..dims.len())
        .map(|n| {
            let incoming = ranks.get(n).copied().unwrap_or(0);
            let outgoing = if n == 0 { 0 } else { ranks[n - 1] };
            dims[n] - outgoing - incoming
        })
        .collect())
}

/// A degree where the augmented complex `F → k[Q] → 0` fails to be exact.
/// `position` is the homological index, with `−1` standing for `k[Q]` itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrandFailure {
    pub degree: Degree,
    pub position: i64,
    pub defect: usize,
}

#[derive(Clone, Debug)]
pub struct ResolutionReport {
    pub bound: Degree,
    pub degrees_checked: usize,
    pub failures: Vec<StrandFailure>,
}

impl ResolutionReport {
    pub fn is_exact(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that `F` resolves `k[Q]` in every degree `c ∈ Q` of the box
/// `[0, bound]`. The augmentation sends each generator of `F_0` to the
/// monomial `t^{δ}` of `k[Q]`.
pub fn verify_resolution(x: &GradedFreeComplex, bound: &Degree) -> Result<ResolutionReport> {
    let q = x.semigroup();
    q.check_dimension(bound)?;
    let degrees = members_in_box(q, bound);
    let per_degree: Result<Vec<Vec<StrandFailure>>> = degrees
        .par_iter()
        .map(|c| strand_failures(x, c))
        .collect();
    let mut failures: Vec<StrandFailure> = per_degree?.into_iter().flatten().collect();
    failures.sort_by(|a, b| a.degree.cmp(&b.degree).then(a.position.cmp(&b.position)));
    Ok(ResolutionReport {
        bound: bound.clone(),
        degrees_checked: degrees.len(),
        failures,
    })
}

fn strand_failures(x: &GradedFreeComplex, c: &Degree) -> Result<Vec<StrandFailure>> {
    let st = strand(x, c)?;
    let dims = st.dims();
    let ranks = st.ranks(x);
    // c ∈ Q here, so k[Q]_c is one-dimensional
    let epsilon = usize::from(dims[0] > 0);
    let mut out = Vec::new();
    let mut push = |position: i64, defect: usize| {
        if defect != 0 {
            out.push(StrandFailure {
                degree: c.clone(),
                position,
                defect,
            });
        }
    };
    push(-1, 1 - epsilon);
    for n in 0..dims.len() {
        let outgoing = if n == 0 { epsilon } else { ranks[n - 1] };
        let incoming = ranks.get(n).copied().unwrap_or(0);
        push(n as i64, dims[n] - outgoing - incoming);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::resolution::{PolyEntry, PolyMatrix};
    use crate::semigroup::AffineSemigroup;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn one() -> crate::field::Scalar {
        BigRational::from_integer(BigInt::from(1))
    }

    // k[N] = k[x] is free of rank one
    #[test]
    fn polynomial_ring_resolves_itself() {
        let q = AffineSemigroup::new(vec![vec![1]]).unwrap();
        let x = GradedFreeComplex::new(q, FieldSpec::Rational, vec![vec![Degree(vec![0])]], vec![]).unwrap();
        let report = verify_resolution(&x, &Degree(vec![6])).unwrap();
        assert!(report.is_exact());
        assert_eq!(report.degrees_checked, 7);
    }

    #[test]
    fn detects_missing_syzygy() {
        // F_0 = R ⊕ R(−(1,0)) with nothing above it
        let q = AffineSemigroup::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let modules = vec![vec![Degree(vec![0, 0]), Degree(vec![1, 0])]];
        let x = GradedFreeComplex::new(q.clone(), FieldSpec::Rational, modules, vec![]).unwrap();
        let report = verify_resolution(&x, &Degree(vec![1, 1])).unwrap();
        assert!(!report.is_exact());
        assert_eq!(report.failures[0].degree, Degree(vec![1, 0]));
        assert_eq!(report.failures[0].position, 0);

        // adding the syzygy e_(1,0) − x e_0 repairs it
        let mut d = PolyMatrix::zeros(2, 1);
        d.set(0, 0, PolyEntry::term(-one(), Monomial(vec![1, 0])));
        d.set(1, 0, PolyEntry::term(one(), Monomial(vec![0, 0])));
        let modules = vec![
            vec![Degree(vec![0, 0]), Degree(vec![1, 0])],
            vec![Degree(vec![1, 0])],
        ];
        let x = GradedFreeComplex::new(q, FieldSpec::Rational, modules, vec![d]).unwrap();
        assert!(verify_dsquare(&x));
        assert!(verify_resolution(&x, &Degree(vec![2, 2])).unwrap().is_exact());
        assert_eq!(strand_homology(&x, &Degree(vec![1, 1])).unwrap(), vec![1, 0]);
    }

    #[test]
    fn detects_nonzero_square() {
        let q = AffineSemigroup::new(vec![vec![1]]).unwrap();
        let mut d1 = PolyMatrix::zeros(1, 1);
        d1.set(0, 0, PolyEntry::term(one(), Monomial(vec![1])));
        let mut d2 = PolyMatrix::zeros(1, 1);
        d2.set(0, 0, PolyEntry::term(one(), Monomial(vec![1])));
        let modules = vec![vec![Degree(vec![0])], vec![Degree(vec![1])], vec![Degree(vec![2])]];
        let x = GradedFreeComplex::new(q, FieldSpec::Rational, modules, vec![d1, d2]).unwrap();
        assert!(!verify_dsquare(&x));
        assert_eq!(first_nonzero_square(&x), Some(2));
    }
}
