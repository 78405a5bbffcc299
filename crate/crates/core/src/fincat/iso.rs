//! Exhaustive isomorphism search between finite categories.
//!
//! All isomorphisms in these categories are identities, so an equivalence
//! between them is the same thing as an isomorphism. The search first
//! backtracks over object bijections that preserve hom-set sizes, and for each
//! complete object bijection runs a second backtracking search over hom-set
//! bijections with constraint propagation on the composition law.

use std::collections::HashMap;

use crate::semigroup::{Degree, Monomial};

use super::FiniteCategory;

/// An isomorphism `C → D` given by an object bijection and, for every ordered
/// pair of objects, a bijection of hom-sets.
#[derive(Clone, Debug)]
pub struct CategoryIso {
    source: FiniteCategory,
    target: FiniteCategory,
    objects: Vec<usize>,
    inverse_objects: Vec<usize>,
    // (s, t) in the source → image position of each element of hom(s, t)
    homs: HashMap<(usize, usize), Vec<usize>>,
}

impl CategoryIso {
    pub fn source(&self) -> &FiniteCategory {
        &self.source
    }

    pub fn target(&self) -> &FiniteCategory {
        &self.target
    }

    /// Object bijection as pairs `(c, φ(c))` in source object order.
    pub fn object_map(&self) -> Vec<(Degree, Degree)> {
        self.objects
            .iter()
            .enumerate()
            .map(|(i, &j)| (self.source.object(i).clone(), self.target.object(j).clone()))
            .collect()
    }

    pub fn map_object(&self, c: &Degree) -> Option<&Degree> {
        let i = self.source.object_index(c)?;
        Some(self.target.object(self.objects[i]))
    }

    pub fn inverse_object(&self, d: &Degree) -> Option<&Degree> {
        let j = self.target.object_index(d)?;
        Some(self.source.object(self.inverse_objects[j]))
    }

    /// Image of `m ∈ hom_C(s, t)`.
    pub fn map_morphism(&self, s: &Degree, t: &Degree, m: &Monomial) -> Option<&Monomial> {
        let (si, ti) = (self.source.object_index(s)?, self.source.object_index(t)?);
        let p = self.source.hom_position(si, ti, m)?;
        let q = self.hom_image(si, ti, p);
        Some(&self.target.hom(self.objects[si], self.objects[ti])[q])
    }

    /// Preimage of `m ∈ hom_D(s, t)`.
    pub fn inverse_morphism(&self, s: &Degree, t: &Degree, m: &Monomial) -> Option<&Monomial> {
        let (sj, tj) = (self.target.object_index(s)?, self.target.object_index(t)?);
        let q = self.target.hom_position(sj, tj, m)?;
        let (si, ti) = (self.inverse_objects[sj], self.inverse_objects[tj]);
        let p = (0..self.source.hom(si, ti).len()).find(|&p| self.hom_image(si, ti, p) == q)?;
        Some(&self.source.hom(si, ti)[p])
    }

    fn hom_image(&self, s: usize, t: usize, p: usize) -> usize {
        if s == t {
            0
        } else {
            self.homs[&(s, t)][p]
        }
    }

    /// The inverse isomorphism `D → C`.
    pub fn inverse(&self) -> CategoryIso {
        let mut homs = HashMap::new();
        for (&(s, t), images) in &self.homs {
            let mut inv = vec![0; images.len()];
            for (p, &q) in images.iter().enumerate() {
                inv[q] = p;
            }
            homs.insert((self.objects[s], self.objects[t]), inv);
        }
        CategoryIso {
            source: self.target.clone(),
            target: self.source.clone(),
            objects: self.inverse_objects.clone(),
            inverse_objects: self.objects.clone(),
            homs,
        }
    }

    /// Checks bijectivity and `ψ(g∘f) = ψ(g)∘ψ(f)` on every composable pair.
    pub fn respects_composition(&self) -> bool {
        let (c, d) = (&self.source, &self.target);
        let k = c.num_objects();
        if d.num_objects() != k {
            return false;
        }
        for s in 0..k {
            for t in 0..k {
                let images: Vec<usize> = (0..c.hom(s, t).len()).map(|p| self.hom_image(s, t, p)).collect();
                let mut sorted = images.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != images.len() || d.hom(self.objects[s], self.objects[t]).len() != images.len() {
                    return false;
                }
            }
        }
        for a in 0..k {
            for b in c.successors(a) {
                for e in c.successors(b) {
                    for (pf, f) in c.hom(a, b).iter().enumerate() {
                        for (pg, g) in c.hom(b, e).iter().enumerate() {
                            let Some(ph) = c.hom_position(a, e, &f.mul(g)) else {
                                return false;
                            };
                            let (fa, fb, fe) = (self.objects[a], self.objects[b], self.objects[e]);
                            let image_f = &d.hom(fa, fb)[self.hom_image(a, b, pf)];
                            let image_g = &d.hom(fb, fe)[self.hom_image(b, e, pg)];
                            let image_h = &d.hom(fa, fe)[self.hom_image(a, e, ph)];
                            if image_f.mul(image_g) != *image_h {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

/// Searches for an isomorphism `C → D`; returns the first one in search order.
pub fn find_isomorphism(c: &FiniteCategory, d: &FiniteCategory) -> Option<CategoryIso> {
    search(c, d, &HashMap::new())
}

/// Like [`find_isomorphism`], with some object images prescribed.
pub fn find_isomorphism_extending(
    c: &FiniteCategory,
    d: &FiniteCategory,
    fixed: &[(Degree, Degree)],
) -> Option<CategoryIso> {
    let mut pinned = HashMap::new();
    for (a, b) in fixed {
        pinned.insert(c.object_index(a)?, d.object_index(b)?);
    }
    search(c, d, &pinned)
}

#[derive(PartialEq, Eq)]
struct Profile {
    out_sizes: Vec<usize>,
    in_sizes: Vec<usize>,
}

fn profile(c: &FiniteCategory, i: usize) -> Profile {
    let k = c.num_objects();
    let mut out_sizes: Vec<usize> = (0..k).filter(|&t| t != i).map(|t| c.hom(i, t).len()).filter(|&s| s > 0).collect();
    let mut in_sizes: Vec<usize> = (0..k).filter(|&s| s != i).map(|s| c.hom(s, i).len()).filter(|&s| s > 0).collect();
    out_sizes.sort_unstable();
    in_sizes.sort_unstable();
    Profile { out_sizes, in_sizes }
}

fn search(c: &FiniteCategory, d: &FiniteCategory, pinned: &HashMap<usize, usize>) -> Option<CategoryIso> {
    let k = c.num_objects();
    if d.num_objects() != k || c.non_identity_count() != d.non_identity_count() {
        return None;
    }
    let dprofiles: Vec<Profile> = (0..k).map(|j| profile(d, j)).collect();
    let candidates: Vec<Vec<usize>> = (0..k)
        .map(|i| {
            let p = profile(c, i);
            (0..k)
                .filter(|&j| dprofiles[j] == p)
                .filter(|&j| pinned.get(&i).is_none_or(|&want| want == j))
                .collect()
        })
        .collect();
    if candidates.iter().any(|v| v.is_empty()) {
        return None;
    }
    let mut state = ObjectSearch {
        c,
        d,
        candidates,
        assignment: vec![usize::MAX; k],
        used: vec![false; k],
    };
    state.run(0)
}

struct ObjectSearch<'a> {
    c: &'a FiniteCategory,
    d: &'a FiniteCategory,
    candidates: Vec<Vec<usize>>,
    assignment: Vec<usize>,
    used: Vec<bool>,
}

impl ObjectSearch<'_> {
    fn run(&mut self, i: usize) -> Option<CategoryIso> {
        let k = self.c.num_objects();
        if i == k {
            return HomSearch::new(self.c, self.d, &self.assignment).solve();
        }
        for idx in 0..self.candidates[i].len() {
            let j = self.candidates[i][idx];
            if self.used[j] || !self.consistent(i, j) {
                continue;
            }
            self.assignment[i] = j;
            self.used[j] = true;
            if let Some(iso) = self.run(i + 1) {
                return Some(iso);
            }
            self.used[j] = false;
            self.assignment[i] = usize::MAX;
        }
        None
    }

    fn consistent(&self, i: usize, j: usize) -> bool {
        (0..i).all(|p| {
            let q = self.assignment[p];
            self.c.hom(p, i).len() == self.d.hom(q, j).len() && self.c.hom(i, p).len() == self.d.hom(j, q).len()
        })
    }
}

/// One non-identity morphism of the source: (source object, target object, position).
type Arrow = (usize, usize, usize);

struct HomSearch<'a> {
    c: &'a FiniteCategory,
    d: &'a FiniteCategory,
    objects: &'a [usize],
    arrows: Vec<Arrow>,
    arrow_id: HashMap<Arrow, usize>,
    // (f, g, h) with h = g∘f
    triples: Vec<(usize, usize, usize)>,
    involving: Vec<Vec<usize>>,
    order: Vec<usize>,
    value: Vec<Option<usize>>,
    // per source pair: which target positions are taken
    taken: HashMap<(usize, usize), Vec<bool>>,
    trail: Vec<usize>,
}

impl<'a> HomSearch<'a> {
    fn new(c: &'a FiniteCategory, d: &'a FiniteCategory, objects: &'a [usize]) -> Self {
        let k = c.num_objects();
        let mut arrows = Vec::new();
        let mut taken = HashMap::new();
        for s in 0..k {
            for t in c.successors(s) {
                taken.insert((s, t), vec![false; c.hom(s, t).len()]);
                for p in 0..c.hom(s, t).len() {
                    arrows.push((s, t, p));
                }
            }
        }
        let arrow_id: HashMap<Arrow, usize> = arrows.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let mut triples = Vec::new();
        let mut involving = vec![Vec::new(); arrows.len()];
        for a in 0..k {
            for b in c.successors(a) {
                for e in c.successors(b) {
                    for (pf, f) in c.hom(a, b).iter().enumerate() {
                        for (pg, g) in c.hom(b, e).iter().enumerate() {
                            let ph = c.hom_position(a, e, &f.mul(g)).expect("closed under composition");
                            let t = (arrow_id[&(a, b, pf)], arrow_id[&(b, e, pg)], arrow_id[&(a, e, ph)]);
                            let n = triples.len();
                            involving[t.0].push(n);
                            involving[t.1].push(n);
                            involving[t.2].push(n);
                            triples.push(t);
                        }
                    }
                }
            }
        }
        // short arrows first: their images force the images of composites
        let mut span: HashMap<(usize, usize), usize> = HashMap::new();
        for t in 0..k {
            for s in (0..t).rev() {
                if c.hom(s, t).is_empty() {
                    continue;
                }
                let longest = (s + 1..t)
                    .filter(|&m| !c.hom(s, m).is_empty() && !c.hom(m, t).is_empty())
                    .map(|m| span[&(s, m)] + span[&(m, t)])
                    .max()
                    .unwrap_or(1);
                span.insert((s, t), longest);
            }
        }
        let mut order: Vec<usize> = (0..arrows.len()).collect();
        order.sort_by_key(|&i| {
            let (s, t, p) = arrows[i];
            (span[&(s, t)], t, s, p)
        });
        HomSearch {
            c,
            d,
            objects,
            value: vec![None; arrows.len()],
            arrows,
            arrow_id,
            triples,
            involving,
            order,
            taken,
            trail: Vec::new(),
        }
    }

    fn target_hom(&self, arrow: usize) -> &'a [Monomial] {
        let (s, t, _) = self.arrows[arrow];
        self.d.hom(self.objects[s], self.objects[t])
    }

    fn set(&mut self, arrow: usize, v: usize) -> bool {
        let (s, t, _) = self.arrows[arrow];
        let slot = self.taken.get_mut(&(s, t)).expect("pair exists");
        if slot[v] {
            return false;
        }
        slot[v] = true;
        self.value[arrow] = Some(v);
        self.trail.push(arrow);
        true
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let arrow = self.trail.pop().expect("nonempty");
            let (s, t, _) = self.arrows[arrow];
            let v = self.value[arrow].take().expect("assigned");
            self.taken.get_mut(&(s, t)).expect("pair exists")[v] = false;
        }
    }

    /// Assigns and propagates; false on contradiction (caller undoes).
    fn assign(&mut self, arrow: usize, v: usize) -> bool {
        if !self.set(arrow, v) {
            return false;
        }
        let mut queue = vec![arrow];
        while let Some(x) = queue.pop() {
            for ti in 0..self.involving[x].len() {
                let (f, g, h) = self.triples[self.involving[x][ti]];
                let (vf, vg, vh) = (self.value[f], self.value[g], self.value[h]);
                let image = |a: usize, val: usize| &self.target_hom(a)[val];
                let forced = match (vf, vg, vh) {
                    (Some(a), Some(b), Some(c)) => {
                        if image(f, a).mul(image(g, b)) != *image(h, c) {
                            return false;
                        }
                        None
                    }
                    (Some(a), Some(b), None) => Some((h, image(f, a).mul(image(g, b)))),
                    (Some(a), None, Some(c)) => match image(h, c).div(image(f, a)) {
                        Some(m) => Some((g, m)),
                        None => return false,
                    },
                    (None, Some(b), Some(c)) => match image(h, c).div(image(g, b)) {
                        Some(m) => Some((f, m)),
                        None => return false,
                    },
                    _ => None,
                };
                if let Some((y, m)) = forced {
                    let Ok(pos) = self.target_hom(y).binary_search(&m) else {
                        return false;
                    };
                    if !self.set(y, pos) {
                        return false;
                    }
                    queue.push(y);
                }
            }
        }
        true
    }

    fn dfs(&mut self, depth: usize) -> bool {
        let Some(&arrow) = self.order[depth..].iter().find(|&&a| self.value[a].is_none()) else {
            return true;
        };
        let next = self.order.iter().position(|&a| a == arrow).expect("in order") + 1;
        for v in 0..self.target_hom(arrow).len() {
            let mark = self.trail.len();
            if self.assign(arrow, v) && self.dfs(next) {
                return true;
            }
            self.undo_to(mark);
        }
        false
    }

    fn solve(mut self) -> Option<CategoryIso> {
        if !self.dfs(0) {
            return None;
        }
        let k = self.c.num_objects();
        let mut homs = HashMap::new();
        for (&(s, t), slots) in &self.taken {
            let images = (0..slots.len())
                .map(|p| self.value[self.arrow_id[&(s, t, p)]].expect("complete assignment"))
                .collect();
            homs.insert((s, t), images);
        }
        let mut inverse_objects = vec![0; k];
        for (i, &j) in self.objects.iter().enumerate() {
            inverse_objects[j] = i;
        }
        Some(CategoryIso {
            source: self.c.clone(),
            target: self.d.clone(),
            objects: self.objects.to_vec(),
            inverse_objects,
            homs,
        })
    }
}
