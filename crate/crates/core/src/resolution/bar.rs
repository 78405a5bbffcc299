use std::collections::HashMap;

use crate::fincat::{Chain, FiniteCategory};
use crate::field::FieldSpec;
use crate::semigroup::Monomial;

use super::{GradedFreeComplex, PolyMatrix};

/// Nondegenerate chains of every dimension, `chains[n]` in basis order of the
/// bar complex's `F_n`.
pub fn bar_chains(cat: &FiniteCategory) -> Vec<Vec<Chain>> {
    let mut out = Vec::new();
    for n in 0.. {
        let chains = cat.nerve_chains(n);
        if chains.is_empty() {
            break;
        }
        out.push(chains);
    }
    out
}

/// The bar resolution of `k` over the category algebra of `cat`, as a complex
/// of free `k[x]`-modules. `F_n` has one generator per nondegenerate `n`-chain,
/// in degree the chain's last object, and `d_n = Σ (−1)^i ∂_i` where the last
/// face multiplies by the dropped morphism's monomial.
pub fn bar_complex(cat: &FiniteCategory, field: FieldSpec) -> GradedFreeComplex {
    let chains = bar_chains(cat);
    let nvars = cat.semigroup().num_generators();
    let modules = chains
        .iter()
        .map(|level| level.iter().map(|c| cat.object(c.last()).clone()).collect())
        .collect();

    let mut differentials = Vec::with_capacity(chains.len().saturating_sub(1));
    for n in 1..chains.len() {
        let index: HashMap<&Chain, usize> = chains[n - 1].iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut d = PolyMatrix::zeros(chains[n - 1].len(), chains[n].len());
        for (j, chain) in chains[n].iter().enumerate() {
            for face in chain.faces(cat) {
                let row = index[&face.chain];
                let sign = if face.index % 2 == 0 { field.one() } else { field.neg(&field.one()) };
                let m = face.multiplier.unwrap_or_else(|| Monomial::one(nvars));
                d.add_to(field, row, j, m, &sign);
            }
        }
        differentials.push(d);
    }
    let x = GradedFreeComplex::new_unchecked(cat.semigroup().clone(), field, modules, differentials)
        .expect("bar complex shapes are consistent");
    debug_assert!(x.check_homogeneous().is_ok());
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::betti::betti_category;
    use crate::resolution::{verify_dsquare, verify_resolution};
    use crate::semigroup::{AffineSemigroup, Degree};

    fn twisted() -> AffineSemigroup {
        AffineSemigroup::new(vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]).unwrap()
    }

    #[test]
    fn twisted_cubic_bar_ranks() {
        let q = twisted();
        let cat = betti_category(&q, FieldSpec::Rational, None).unwrap();
        let x = bar_complex(&cat, FieldSpec::Rational);
        assert_eq!(x.ranks(), vec![6, 18, 12]);
        assert!(verify_dsquare(&x));
        let report = verify_resolution(&x, &Degree(vec![5, 4])).unwrap();
        assert!(report.is_exact(), "{report:?}");
    }

    #[test]
    fn first_differential_shape() {
        let q = twisted();
        let cat = betti_category(&q, FieldSpec::Rational, None).unwrap();
        let x = bar_complex(&cat, FieldSpec::Rational);
        // each 1-chain c0 -> c1 maps to e_{c1} - u e_{c0}
        let d1 = x.differential(1);
        for j in 0..d1.cols() {
            assert_eq!(d1.column(j).len(), 2);
            let constants = d1.column(j).values().filter(|e| e.constant_term().is_some()).count();
            assert_eq!(constants, 1);
        }
    }

    #[test]
    fn single_object_category() {
        let q = AffineSemigroup::new(vec![vec![1]]).unwrap();
        let cat = FiniteCategory::full_subcategory(&q, vec![Degree(vec![0])]).unwrap();
        let x = bar_complex(&cat, FieldSpec::Rational);
        assert_eq!(x.ranks(), vec![1]);
    }
}
