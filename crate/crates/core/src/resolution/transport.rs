use crate::error::{Error, Result};
use crate::fincat::CategoryIso;
use crate::semigroup::Degree;

use super::{GradedFreeComplex, PolyEntry, PolyMatrix};

/// Relabels a complex over the target of `iso` into one over its source.
///
/// Generator degrees are pulled back along the object bijection, and every
/// monomial of an entry `(i, j)` of `d_n` is pulled back along the hom-set
/// bijection `hom_D(δ_i, δ_j) → hom_C`. Scalars are unchanged.
pub fn transport_resolution(x: &GradedFreeComplex, iso: &CategoryIso) -> Result<GradedFreeComplex> {
    let target = iso.target();
    if x.semigroup() != target.semigroup() {
        return Err(Error::InvalidInput(
            "complex is not over the target semigroup of the isomorphism".into(),
        ));
    }
    let pull = |d: &Degree| -> Result<Degree> {
        iso.inverse_object(d)
            .cloned()
            .ok_or_else(|| Error::NotAnObject(d.clone()))
    };
    let modules = x
        .modules()
        .iter()
        .map(|m| m.iter().map(pull).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;

    let mut differentials = Vec::with_capacity(x.len());
    for n in 1..=x.len() {
        let d = x.differential(n);
        let mut out = PolyMatrix::zeros(d.rows(), d.cols());
        for (i, j, entry) in d.entries() {
            let (s, t) = (&x.module(n - 1)[i], &x.module(n)[j]);
            let mut terms = Vec::with_capacity(entry.len());
            for (m, c) in entry.terms() {
                let pulled = iso
                    .inverse_morphism(s, t, m)
                    .ok_or_else(|| Error::EntryNotAMorphism {
                        source_degree: s.clone(),
                        target_degree: t.clone(),
                        monomial: m.0.clone(),
                    })?;
                terms.push((c.clone(), pulled.clone()));
            }
            out.set(i, j, PolyEntry::from_terms(x.field(), terms)?);
        }
        differentials.push(out);
    }
    GradedFreeComplex::new(iso.source().semigroup().clone(), x.field(), modules, differentials)
}
