//! Simplicial complexes `Δ_c`, chain complexes over a field, and the
//! homology computations built on them.

use std::collections::{BTreeSet, HashMap};

use num_traits::Zero;

use crate::error::Result;
use crate::field::{sparse_rank, FieldSpec, SparseVec};
use crate::fincat::{Chain, FiniteCategory};
use crate::semigroup::{AffineSemigroup, Degree};

/// A simplicial complex on vertices `0..n`, stored as its full face list.
/// Faces are sorted vertex lists, ordered by size then lexicographically,
/// and the empty face is always present.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: usize,
    faces: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// Downward closure of the given faces.
    pub fn from_facets(vertices: usize, facets: &[Vec<usize>]) -> Self {
        let mut set: BTreeSet<Vec<usize>> = BTreeSet::new();
        set.insert(Vec::new());
        for facet in facets {
            let mut f = facet.clone();
            f.sort_unstable();
            f.dedup();
            assert!(f.iter().all(|&v| v < vertices), "vertex out of range");
            for mask in 0u64..(1u64 << f.len()) {
                let sub: Vec<usize> = f
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                set.insert(sub);
            }
        }
        Self::from_closed(vertices, set.into_iter().collect())
    }

    fn from_closed(vertices: usize, mut faces: Vec<Vec<usize>>) -> Self {
        faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        SimplicialComplex { vertices, faces }
    }

    /// The full simplex on `n` vertices.
    pub fn simplex(n: usize) -> Self {
        Self::from_facets(n, &[(0..n).collect()])
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn contains(&self, face: &[usize]) -> bool {
        self.faces
            .binary_search_by(|f| f.len().cmp(&face.len()).then_with(|| f.as_slice().cmp(face)))
            .is_ok()
    }

    pub fn facets(&self) -> Vec<Vec<usize>> {
        self.faces
            .iter()
            .filter(|f| {
                (0..self.vertices)
                    .filter(|v| !f.contains(v))
                    .all(|v| !self.contains(&with_vertex(f, v)))
            })
            .cloned()
            .collect()
    }

    /// True if some vertex can be added to every face.
    pub fn is_cone(&self) -> bool {
        (0..self.vertices).any(|v| self.faces.iter().all(|f| self.contains(&with_vertex(f, v))))
    }

    /// Augmented chain complex, with the empty face in homological degree −1.
    pub fn chain_complex(&self) -> FieldComplex {
        let top = self.faces.iter().map(Vec::len).max().unwrap_or(0);
        let mut by_dim: Vec<Vec<&Vec<usize>>> = vec![Vec::new(); top + 1];
        for f in &self.faces {
            by_dim[f.len()].push(f);
        }
        let index: Vec<HashMap<&Vec<usize>, usize>> = by_dim
            .iter()
            .map(|fs| fs.iter().enumerate().map(|(i, &f)| (f, i)).collect())
            .collect();
        let dims = by_dim.iter().map(Vec::len).collect();
        let mut boundaries = vec![Vec::new()];
        for size in 1..=top {
            let columns = by_dim[size]
                .iter()
                .map(|f| {
                    let mut col = SparseVec::new();
                    for i in 0..f.len() {
                        let mut g = (*f).clone();
                        g.remove(i);
                        let sign = if i % 2 == 0 { 1 } else { -1 };
                        col.insert(index[size - 1][&g], FieldSpec::Rational.from_i64(sign));
                    }
                    col
                })
                .collect();
            boundaries.push(columns);
        }
        FieldComplex {
            start: -1,
            dims,
            boundaries,
        }
    }
}

fn with_vertex(face: &[usize], v: usize) -> Vec<usize> {
    let mut g = face.to_vec();
    if let Err(pos) = g.binary_search(&v) {
        g.insert(pos, v);
    }
    g
}

/// A finite chain complex of vector spaces.
///
/// `dims[k]` is the dimension in homological degree `start + k`, and
/// `boundaries[k]` lists, for each basis vector of that degree, its image in
/// degree `start + k − 1` as a sparse column. `boundaries[0]` is empty.
/// Entries are integers, so one complex serves every field.
#[derive(Clone, Debug)]
pub struct FieldComplex {
    pub start: i64,
    pub dims: Vec<usize>,
    pub boundaries: Vec<Vec<SparseVec>>,
}

impl FieldComplex {
    fn ranks(&self, field: FieldSpec) -> Vec<usize> {
        self.boundaries
            .iter()
            .map(|cols| sparse_rank(field, cols.iter().map(|c| reduce_vec(field, c))))
            .collect()
    }

    pub fn homology(&self, field: FieldSpec) -> HomologyDims {
        let ranks = self.ranks(field);
        let dims: Vec<usize> = (0..self.dims.len())
            .map(|k| self.dims[k] - ranks[k] - ranks.get(k + 1).copied().unwrap_or(0))
            .collect();
        let h = HomologyDims {
            start: self.start,
            dims,
        };
        debug_assert_eq!(self.euler_characteristic(), h.euler_characteristic());
        h
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(self.start, &self.dims)
    }

    /// True if every composite of consecutive boundaries vanishes.
    pub fn composition_vanishes(&self, field: FieldSpec) -> bool {
        for k in 2..self.boundaries.len() {
            for col in &self.boundaries[k] {
                let mut image = SparseVec::new();
                for (&j, x) in col {
                    for (&i, y) in &self.boundaries[k - 1][j] {
                        let acc = image.remove(&i).unwrap_or_else(Zero::zero);
                        let v = field.add(&acc, &field.mul(&field.reduce(x).unwrap(), &field.reduce(y).unwrap()));
                        if !v.is_zero() {
                            image.insert(i, v);
                        }
                    }
                }
                if !image.is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

fn reduce_vec(field: FieldSpec, v: &SparseVec) -> SparseVec {
    v.iter()
        .filter_map(|(&k, x)| {
            let x = field.reduce(x).expect("integer entries");
            (!x.is_zero()).then_some((k, x))
        })
        .collect()
}

fn alternating_sum(start: i64, dims: &[usize]) -> i64 {
    dims.iter()
        .enumerate()
        .map(|(k, &d)| {
            let sign = if (start + k as i64).rem_euclid(2) == 0 { 1 } else { -1 };
            sign * d as i64
        })
        .sum()
}

/// Homology dimensions indexed from `start`; zero outside the stored range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyDims {
    start: i64,
    dims: Vec<usize>,
}

impl HomologyDims {
    pub fn get(&self, i: i64) -> usize {
        usize::try_from(i - self.start)
            .ok()
            .and_then(|k| self.dims.get(k).copied())
            .unwrap_or(0)
    }

    /// Nonzero `(index, dimension)` pairs in increasing index order.
    pub fn nonzero(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.dims
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0)
            .map(|(k, &d)| (self.start + k as i64, d))
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(self.start, &self.dims)
    }
}

/// `Δ_c = { I ⊆ {1..n} : deg I ≤_Q c }`, with generator `i` as vertex `i − 1`.
pub fn delta_complex(q: &AffineSemigroup, c: &Degree) -> Result<SimplicialComplex> {
    q.check_dimension(c)?;
    if !q.contains(c) {
        return Err(crate::error::Error::NotAMember(c.clone()));
    }
    Ok(SimplicialComplex::from_closed(q.num_generators(), q.subsets_below(c)))
}

/// Reduced homology over `field`, indexed from −1.
pub fn reduced_homology(k: &SimplicialComplex, field: FieldSpec) -> HomologyDims {
    k.chain_complex().homology(field)
}

/// Chain complex of the pair `(N C_{≤c}, N C_{<c})` of nondegenerate nerves:
/// in degree `n`, the `n`-chains of `C_{≤c}` that pass through `c`.
pub fn relative_nerve_complex(cat: &FiniteCategory, c: &Degree) -> Result<FieldComplex> {
    let le = cat.sub_le(c)?;
    let top = le.object_index(c).expect("c is in C_{≤c}");
    let mut bases: Vec<Vec<Chain>> = Vec::new();
    for n in 0.. {
        let chains: Vec<Chain> = le
            .nerve_chains(n)
            .into_iter()
            .filter(|ch| ch.objects.contains(&top))
            .collect();
        if chains.is_empty() {
            break;
        }
        bases.push(chains);
    }
    let index: Vec<HashMap<&Chain, usize>> = bases
        .iter()
        .map(|b| b.iter().enumerate().map(|(i, ch)| (ch, i)).collect())
        .collect();
    let mut boundaries = vec![Vec::new()];
    for n in 1..bases.len() {
        let cols = bases[n]
            .iter()
            .map(|ch| {
                let mut col = SparseVec::new();
                for face in ch.faces(&le) {
                    // faces inside C_{<c} vanish in the quotient
                    let Some(&row) = index[n - 1].get(&face.chain) else {
                        continue;
                    };
                    let sign = if face.index % 2 == 0 { 1 } else { -1 };
                    let acc = col.remove(&row).unwrap_or_else(Zero::zero);
                    let v = acc + FieldSpec::Rational.from_i64(sign);
                    if !v.is_zero() {
                        col.insert(row, v);
                    }
                }
                col
            })
            .collect();
        boundaries.push(cols);
    }
    Ok(FieldComplex {
        start: 0,
        dims: bases.iter().map(Vec::len).collect(),
        boundaries,
    })
}

/// `H_n(N C_{≤c}, N C_{<c}; field)`.
pub fn relative_nerve_homology(cat: &FiniteCategory, c: &Degree, field: FieldSpec) -> Result<HomologyDims> {
    Ok(relative_nerve_complex(cat, c)?.homology(field))
}
