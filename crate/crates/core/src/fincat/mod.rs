//! Finite categories whose objects are degrees and whose morphisms are
//! monomials: full subcategories of the action category of `N^n` on `Z^r`.
//!
//! Every category here has identity-only isomorphisms, and the relation
//! "there is a non-identity morphism c → d" is acyclic. The canonical degree
//! order is therefore a topological order of the objects.

mod iso;

pub use iso::{find_isomorphism, find_isomorphism_extending, CategoryIso};

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::semigroup::{AffineSemigroup, Degree, Monomial};

#[derive(Clone, Debug)]
pub struct FiniteCategory {
    semigroup: AffineSemigroup,
    objects: Vec<Degree>,
    index: HashMap<Degree, usize>,
    // homs[s * k + t], sorted lexicographically; hom(c, c) is the identity
    homs: Vec<Vec<Monomial>>,
}

/// A nondegenerate chain `c_0 → c_1 → … → c_n` of non-identity morphisms.
///
/// Objects are indices into the owning category; morphism `i` is a position
/// in the hom list from `objects[i]` to `objects[i + 1]`. The derived order
/// compares object lists first and morphism lists second.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chain {
    pub objects: Vec<usize>,
    pub morphisms: Vec<usize>,
}

/// One face `∂_i` of a chain. Dropping the last object leaves the last
/// morphism behind as `multiplier`.
#[derive(Clone, Debug)]
pub struct Face {
    pub index: usize,
    pub chain: Chain,
    pub multiplier: Option<Monomial>,
}

impl Chain {
    /// Simplicial dimension `n`.
    pub fn len(&self) -> usize {
        self.morphisms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.morphisms.is_empty()
    }

    pub fn first(&self) -> usize {
        self.objects[0]
    }

    pub fn last(&self) -> usize {
        *self.objects.last().expect("chains have at least one object")
    }

    pub fn degrees<'a>(&self, cat: &'a FiniteCategory) -> Vec<&'a Degree> {
        self.objects.iter().map(|&i| cat.object(i)).collect()
    }

    pub fn monomials<'a>(&self, cat: &'a FiniteCategory) -> Vec<&'a Monomial> {
        self.morphisms
            .iter()
            .enumerate()
            .map(|(i, &p)| &cat.hom(self.objects[i], self.objects[i + 1])[p])
            .collect()
    }

    /// The faces `∂_0 … ∂_n` of a chain of dimension `n ≥ 1`.
    pub fn faces(&self, cat: &FiniteCategory) -> Vec<Face> {
        let n = self.len();
        let mut out = Vec::with_capacity(n + 1);
        if n == 0 {
            return out;
        }
        out.push(Face {
            index: 0,
            chain: Chain {
                objects: self.objects[1..].to_vec(),
                morphisms: self.morphisms[1..].to_vec(),
            },
            multiplier: None,
        });
        for i in 1..n {
            let (a, b, c) = (self.objects[i - 1], self.objects[i], self.objects[i + 1]);
            let composite = cat.hom(a, b)[self.morphisms[i - 1]].mul(&cat.hom(b, c)[self.morphisms[i]]);
            let pos = cat
                .hom_position(a, c, &composite)
                .expect("categories are closed under composition");
            let mut objects = self.objects.clone();
            objects.remove(i);
            let mut morphisms = self.morphisms[..i - 1].to_vec();
            morphisms.push(pos);
            morphisms.extend_from_slice(&self.morphisms[i + 1..]);
            out.push(Face {
                index: i,
                chain: Chain { objects, morphisms },
                multiplier: None,
            });
        }
        let last = cat.hom(self.objects[n - 1], self.objects[n])[self.morphisms[n - 1]].clone();
        out.push(Face {
            index: n,
            chain: Chain {
                objects: self.objects[..n].to_vec(),
                morphisms: self.morphisms[..n - 1].to_vec(),
            },
            multiplier: Some(last),
        });
        out
    }
}

impl FiniteCategory {
    /// Full subcategory of the action category on the given degrees.
    pub fn full_subcategory(
        q: &AffineSemigroup,
        objects: impl IntoIterator<Item = Degree>,
    ) -> Result<Self> {
        let mut set = BTreeSet::new();
        for d in objects {
            q.check_dimension(&d)?;
            if !q.contains(&d) {
                return Err(Error::NotAMember(d));
            }
            set.insert(d);
        }
        let objects: Vec<Degree> = set.into_iter().collect();
        let k = objects.len();
        let mut homs = vec![Vec::new(); k * k];
        for (s, cs) in objects.iter().enumerate() {
            for (t, ct) in objects.iter().enumerate() {
                homs[s * k + t] = if s == t {
                    vec![Monomial::one(q.num_generators())]
                } else if ct.total() <= cs.total() {
                    // non-identity morphisms strictly raise the coordinate sum
                    Vec::new()
                } else {
                    q.monomials_of_degree(&ct.sub(cs))
                };
            }
        }
        Ok(Self::from_parts(q.clone(), objects, homs))
    }

    fn from_parts(semigroup: AffineSemigroup, objects: Vec<Degree>, homs: Vec<Vec<Monomial>>) -> Self {
        let index = objects
            .iter()
            .enumerate()
            .map(|(i, d)| (d.clone(), i))
            .collect();
        FiniteCategory {
            semigroup,
            objects,
            index,
            homs,
        }
    }

    /// Least-upper-bounds category: objects are the `c ∈ Q` inside the
    /// coordinate box `[0, bound]` that are minimal upper bounds of
    /// `S_c = { deg I : deg I ≤_Q c }`.
    pub fn lub_category(q: &AffineSemigroup, bound: &Degree) -> Result<Self> {
        let objects = lub_objects(q, bound)?;
        Self::full_subcategory(q, objects)
    }

    pub fn semigroup(&self) -> &AffineSemigroup {
        &self.semigroup
    }

    pub fn objects(&self) -> &[Degree] {
        &self.objects
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn object(&self, i: usize) -> &Degree {
        &self.objects[i]
    }

    pub fn object_index(&self, d: &Degree) -> Option<usize> {
        self.index.get(d).copied()
    }

    pub fn contains_object(&self, d: &Degree) -> bool {
        self.index.contains_key(d)
    }

    /// Hom list between two objects, by index.
    pub fn hom(&self, s: usize, t: usize) -> &[Monomial] {
        &self.homs[s * self.objects.len() + t]
    }

    /// Hom list between two degrees; `None` unless both are objects.
    pub fn hom_between(&self, s: &Degree, t: &Degree) -> Option<&[Monomial]> {
        Some(self.hom(self.object_index(s)?, self.object_index(t)?))
    }

    pub fn hom_position(&self, s: usize, t: usize, m: &Monomial) -> Option<usize> {
        self.hom(s, t).binary_search(m).ok()
    }

    /// Number of non-identity morphisms.
    pub fn non_identity_count(&self) -> usize {
        let k = self.objects.len();
        (0..k)
            .flat_map(|s| (0..k).filter(move |&t| t != s).map(move |t| (s, t)))
            .map(|(s, t)| self.hom(s, t).len())
            .sum()
    }

    /// Targets of non-identity morphisms out of `s`, in object order.
    pub fn successors(&self, s: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.objects.len()).filter(move |&t| t != s && !self.hom(s, t).is_empty())
    }

    /// All nondegenerate `n`-chains, sorted by object list then morphism list.
    pub fn nerve_chains(&self, n: usize) -> Vec<Chain> {
        let mut out = Vec::new();
        for s in 0..self.objects.len() {
            let mut chain = Chain {
                objects: vec![s],
                morphisms: Vec::new(),
            };
            self.extend_chains(&mut chain, n, &mut out);
        }
        out.sort();
        out
    }

    fn extend_chains(&self, chain: &mut Chain, n: usize, out: &mut Vec<Chain>) {
        if chain.len() == n {
            out.push(chain.clone());
            return;
        }
        let s = chain.last();
        for t in self.successors(s).collect::<Vec<_>>() {
            for p in 0..self.hom(s, t).len() {
                chain.objects.push(t);
                chain.morphisms.push(p);
                self.extend_chains(chain, n, out);
                chain.objects.pop();
                chain.morphisms.pop();
            }
        }
    }

    /// Full subcategory on a subset of object indices.
    pub fn restrict(&self, keep: &[usize]) -> Self {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let k = keep.len();
        let mut homs = vec![Vec::new(); k * k];
        for (a, &s) in keep.iter().enumerate() {
            for (b, &t) in keep.iter().enumerate() {
                homs[a * k + b] = self.hom(s, t).to_vec();
            }
        }
        let objects = keep.iter().map(|&i| self.objects[i].clone()).collect();
        Self::from_parts(self.semigroup.clone(), objects, homs)
    }

    fn require_object(&self, c: &Degree) -> Result<usize> {
        self.object_index(c).ok_or_else(|| Error::NotAnObject(c.clone()))
    }

    /// `C_{≤c}`: the objects with a morphism into `c`.
    pub fn sub_le(&self, c: &Degree) -> Result<Self> {
        let ci = self.require_object(c)?;
        let keep: Vec<usize> = (0..self.objects.len())
            .filter(|&d| !self.hom(d, ci).is_empty())
            .collect();
        Ok(self.restrict(&keep))
    }

    /// `C_{<c}`: `C_{≤c}` without `c` itself.
    pub fn sub_lt(&self, c: &Degree) -> Result<Self> {
        let ci = self.require_object(c)?;
        let keep: Vec<usize> = (0..self.objects.len())
            .filter(|&d| d != ci && !self.hom(d, ci).is_empty())
            .collect();
        Ok(self.restrict(&keep))
    }

    /// Checks identities, degrees of hom elements, composition closure and
    /// acyclicity. Returns the first violation found.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let k = self.objects.len();
        let q = &self.semigroup;
        for s in 0..k {
            if self.hom(s, s) != [Monomial::one(q.num_generators())] {
                return Err(format!("hom({0}, {0}) is not the identity", self.objects[s]));
            }
            for t in 0..k {
                let expected = self.objects[t].sub(&self.objects[s]);
                for m in self.hom(s, t) {
                    if q.monomial_degree(m) != expected {
                        return Err(format!("{m:?} in hom({}, {}) has the wrong degree", self.objects[s], self.objects[t]));
                    }
                }
                if s != t && !self.hom(s, t).is_empty() && !self.hom(t, s).is_empty() {
                    return Err(format!("cycle between {} and {}", self.objects[s], self.objects[t]));
                }
            }
        }
        for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    for f in self.hom(a, b) {
                        for g in self.hom(b, c) {
                            if self.hom_position(a, c, &f.mul(g)).is_none() {
                                return Err(format!(
                                    "composite of {f:?} and {g:?} missing from hom({}, {})",
                                    self.objects[a], self.objects[c]
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> CategoryJson {
        let k = self.objects.len();
        let mut homs = Vec::new();
        for s in 0..k {
            for t in 0..k {
                if s != t && !self.hom(s, t).is_empty() {
                    homs.push(HomJson {
                        source: self.objects[s].clone(),
                        target: self.objects[t].clone(),
                        morphisms: self.hom(s, t).to_vec(),
                    });
                }
            }
        }
        CategoryJson {
            generators: self.semigroup.generator_matrix(),
            objects: self.objects.clone(),
            homs,
        }
    }

    /// Graphviz rendering: one node per object and one edge per non-identity
    /// morphism, labeled by its monomial.
    pub fn to_dot(&self, names: &[String]) -> String {
        let mut s = String::from("digraph category {\n  rankdir=LR;\n");
        for (i, d) in self.objects.iter().enumerate() {
            let _ = writeln!(s, "  n{i} [label=\"{d}\"];");
        }
        let k = self.objects.len();
        for a in 0..k {
            for b in self.successors(a) {
                for m in self.hom(a, b) {
                    let _ = writeln!(s, "  n{a} -> n{b} [label=\"{}\"];", m.render(names));
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Debug, Serialize)]
pub struct CategoryJson {
    pub generators: Vec<Vec<i64>>,
    pub objects: Vec<Degree>,
    pub homs: Vec<HomJson>,
}

#[derive(Debug, Serialize)]
pub struct HomJson {
    pub source: Degree,
    pub target: Degree,
    pub morphisms: Vec<Monomial>,
}

/// Members of `Q` inside the coordinate box `[0, bound]`, in canonical order.
pub fn members_in_box(q: &AffineSemigroup, bound: &Degree) -> Vec<Degree> {
    let zero = Degree::zero(q.rank());
    if !zero.le_coordinatewise(bound) {
        return Vec::new();
    }
    let mut seen: HashSet<Degree> = HashSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(b) = queue.pop_front() {
        for g in q.generators() {
            let next = b.add(g);
            if next.le_coordinatewise(bound) && seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    let mut out: Vec<Degree> = seen.into_iter().collect();
    out.sort();
    out
}

/// Objects of the lub-category inside the coordinate box `[0, bound]`.
///
/// If some `b <_Q c` were an upper bound of `S_c`, then so would be `c − a`
/// for any generator `a` with `b ≤_Q c − a`; hence only the degrees `c − a`
/// need to be tested.
pub fn lub_objects(q: &AffineSemigroup, bound: &Degree) -> Result<Vec<Degree>> {
    q.check_dimension(bound)?;
    let objects = members_in_box(q, bound)
        .into_iter()
        .filter(|c| is_lub_object(q, c))
        .collect();
    Ok(objects)
}

pub(crate) fn is_lub_object(q: &AffineSemigroup, c: &Degree) -> bool {
    let facets = maximal_subset_degrees(q, c);
    q.generators().iter().all(|a| {
        let b = c.sub(a);
        !(q.contains(&b) && facets.iter().all(|s| q.le(s, &b)))
    })
}

// degrees of the facets of Δ_c; a degree bounds S_c iff it bounds these
fn maximal_subset_degrees(q: &AffineSemigroup, c: &Degree) -> Vec<Degree> {
    let faces = q.subsets_below(c);
    let set: HashSet<&Vec<usize>> = faces.iter().collect();
    let n = q.num_generators();
    faces
        .iter()
        .filter(|f| {
            (0..n).filter(|v| !f.contains(v)).all(|v| {
                let mut g = (*f).clone();
                g.push(v);
                g.sort_unstable();
                !set.contains(&g)
            })
        })
        .map(|f| q.subset_degree(f))
        .collect()
}

/// Human-readable notes about how the candidate box limits the results.
///
/// Warns when the box does not contain `deg M`, and when any of the given
/// degrees touches the upper face of the box.
pub fn bound_warnings<'a>(
    q: &AffineSemigroup,
    bound: &Degree,
    touching: impl IntoIterator<Item = &'a Degree>,
) -> Vec<String> {
    let mut out = Vec::new();
    let total = q.total_degree();
    if !total.le_coordinatewise(bound) {
        out.push(format!(
            "bound {bound} does not dominate deg M = {total}; results may be incomplete"
        ));
    }
    let hits: Vec<String> = touching
        .into_iter()
        .filter(|d| d.coords().iter().zip(bound.coords()).any(|(x, b)| x == b))
        .map(Degree::to_string)
        .collect();
    if !hits.is_empty() {
        let shown = hits.iter().take(4).cloned().collect::<Vec<_>>().join(" ");
        let more = if hits.len() > 4 { " ..." } else { "" };
        out.push(format!(
            "{} degree(s) touch the bound {bound} ({shown}{more}); degrees beyond the bound were not examined",
            hits.len()
        ));
    }
    out
}

/// Objects that are not subset degrees `deg I`. Subset degrees are objects of
/// the lub-category for every box containing them, so only the remaining
/// objects say anything about the box being too small.
pub fn non_subset_objects<'a>(q: &AffineSemigroup, cat: &'a FiniteCategory) -> Vec<&'a Degree> {
    let all = q.subsets_below(&q.total_degree());
    let subset_degrees: HashSet<Degree> = all.iter().map(|f| q.subset_degree(f)).collect();
    cat.objects()
        .iter()
        .filter(|d| !subset_degrees.contains(*d))
        .collect()
}
