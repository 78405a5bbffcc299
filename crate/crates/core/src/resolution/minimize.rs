use crate::error::{Error, Result};
use crate::field::FieldSpec;

use super::verify::first_nonzero_square;
use super::{GradedFreeComplex, PolyEntry, PolyMatrix};

/// Which unit entry to cancel first within one differential.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PivotOrder {
    /// Smallest `(row, column)` first.
    #[default]
    Lowest,
    /// Largest `(row, column)` first.
    Highest,
}

pub fn minimize(x: &GradedFreeComplex) -> Result<GradedFreeComplex> {
    minimize_with(x, PivotOrder::Lowest)
}

/// Cancels unit entries of the differentials until none remain.
///
/// For a unit `u` at `(i, j)` of `d_n`, every other column `l` becomes
/// `col_l − (d[i][l] / u) · col_j`, then row `i` and column `j` go, together
/// with row `j` of `d_{n+1}` and column `i` of `d_{n−1}`. Homogeneity makes
/// every constant entry a pure scalar. Cancelling in `d_n` never creates
/// units in `d_{n−1}`, so one ascending pass over `n` is enough.
pub fn minimize_with(x: &GradedFreeComplex, order: PivotOrder) -> Result<GradedFreeComplex> {
    if let Some(n) = first_nonzero_square(x) {
        return Err(Error::NotAComplex { index: n - 1 });
    }
    let field = x.field();
    let mut mats: Vec<PolyMatrix> = x.differentials().to_vec();
    let mut alive: Vec<Vec<bool>> = x.modules().iter().map(|m| vec![true; m.len()]).collect();

    for n in 1..=x.len() {
        while let Some((i, j)) = find_pivot(&mats[n - 1], &alive[n], order) {
            eliminate(field, &mut mats[n - 1], &alive[n], i, j);
            alive[n][j] = false;
            alive[n - 1][i] = false;
            if n < x.len() {
                for col in 0..mats[n].cols() {
                    mats[n].column_mut(col).remove(&j);
                }
            }
            if n >= 2 {
                mats[n - 2].column_mut(i).clear();
            }
        }
    }
    compact(x, mats, &alive)
}

fn find_pivot(d: &PolyMatrix, alive_cols: &[bool], order: PivotOrder) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for j in 0..d.cols() {
        if !alive_cols[j] {
            continue;
        }
        let mut units = d
            .column(j)
            .iter()
            .filter(|(_, e)| e.constant_term().is_some())
            .map(|(&i, _)| i);
        let candidate = match order {
            PivotOrder::Lowest => units.next(),
            PivotOrder::Highest => units.next_back(),
        };
        if let Some(i) = candidate {
            let better = match (best, order) {
                (None, _) => true,
                (Some(b), PivotOrder::Lowest) => (i, j) < b,
                (Some(b), PivotOrder::Highest) => (i, j) > b,
            };
            if better {
                best = Some((i, j));
            }
        }
    }
    best
}

fn eliminate(field: FieldSpec, d: &mut PolyMatrix, alive_cols: &[bool], i: usize, j: usize) {
    let pivot_col = std::mem::take(d.column_mut(j));
    let u = pivot_col[&i]
        .constant_term()
        .expect("pivot is a unit")
        .clone();
    let neg_inv = field.neg(&field.inv(&u));
    for l in 0..d.cols() {
        if l == j || !alive_cols[l] {
            continue;
        }
        let Some(e) = d.column(l).get(&i).cloned() else {
            continue;
        };
        let factor = e.scale(field, &neg_inv);
        let col = d.column_mut(l);
        for (&k, ekj) in &pivot_col {
            let entry = col.entry(k).or_default();
            entry.add_scaled(field, ekj, &factor);
            if entry.is_zero() {
                col.remove(&k);
            }
        }
        debug_assert!(!col.contains_key(&i));
    }
    // row i is now empty outside the removed column
}

/// Drops cancelled generators, then stably sorts each module by degree and
/// permutes the matrices to match.
fn compact(x: &GradedFreeComplex, mats: Vec<PolyMatrix>, alive: &[Vec<bool>]) -> Result<GradedFreeComplex> {
    let mut order: Vec<Vec<usize>> = Vec::with_capacity(alive.len());
    let mut modules = Vec::with_capacity(alive.len());
    for (n, flags) in alive.iter().enumerate() {
        let mut keep: Vec<usize> = (0..flags.len()).filter(|&k| flags[k]).collect();
        keep.sort_by(|&a, &b| x.module(n)[a].cmp(&x.module(n)[b]));
        modules.push(keep.iter().map(|&k| x.module(n)[k].clone()).collect::<Vec<_>>());
        order.push(keep);
    }
    let mut new_index: Vec<Vec<Option<usize>>> = alive.iter().map(|f| vec![None; f.len()]).collect();
    for (n, keep) in order.iter().enumerate() {
        for (new, &old) in keep.iter().enumerate() {
            new_index[n][old] = Some(new);
        }
    }
    let mut differentials = Vec::with_capacity(mats.len());
    for (k, d) in mats.iter().enumerate() {
        let mut out = PolyMatrix::zeros(order[k].len(), order[k + 1].len());
        for (new_j, &old_j) in order[k + 1].iter().enumerate() {
            for (&old_i, e) in d.column(old_j) {
                let new_i = new_index[k][old_i].expect("cancelled rows are cleared");
                out.set(new_i, new_j, PolyEntry::clone(e));
            }
        }
        differentials.push(out);
    }
    GradedFreeComplex::new(x.semigroup().clone(), x.field(), modules, differentials).map(GradedFreeComplex::trimmed)
}
