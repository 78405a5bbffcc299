//! Shared generators and independent reference implementations for the
//! integration tests. Nothing here calls into the library's own algorithms
//! beyond constructing semigroups.

#![allow(dead_code)]

use std::collections::HashSet;

use betticat::error::Error;
use betticat::semigroup::{AffineSemigroup, Degree};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

pub fn d(v: &[i64]) -> Degree {
    Degree(v.to_vec())
}

pub fn twisted_cubic() -> AffineSemigroup {
    AffineSemigroup::new(vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]).unwrap()
}

pub fn segre() -> AffineSemigroup {
    AffineSemigroup::new(vec![
        vec![1, 0, 0, 0],
        vec![0, 1, 0, 0],
        vec![0, 0, 1, 0],
        vec![1, 0, 0, 1],
        vec![0, 1, 0, 1],
        vec![0, 0, 1, 1],
    ])
    .unwrap()
}

pub fn data(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

/// Builds a semigroup from arbitrary nonnegative vectors by dropping zero
/// vectors, duplicates and generators that are sums of the others.
pub fn minimal_semigroup(mut gens: Vec<Vec<i64>>) -> Option<AffineSemigroup> {
    gens.retain(|g| g.iter().any(|&x| x != 0));
    let mut seen = HashSet::new();
    gens.retain(|g| seen.insert(g.clone()));
    loop {
        if gens.is_empty() {
            return None;
        }
        match AffineSemigroup::new(gens.clone()) {
            Ok(q) => return Some(q),
            Err(Error::NonMinimalGenerator { index, .. }) => {
                gens.remove(index);
            }
            Err(e) => panic!("unexpected error {e}"),
        }
    }
}

/// Random pointed semigroups with rank ≤ `max_rank`, at most `max_gens`
/// generators and entries ≤ `max_entry`.
pub fn semigroup_strategy(max_rank: usize, max_gens: usize, max_entry: i64) -> impl Strategy<Value = AffineSemigroup> {
    (1..=max_rank)
        .prop_flat_map(move |r| prop::collection::vec(prop::collection::vec(0..=max_entry, r), 1..=max_gens))
        .prop_filter_map("no nonzero generators", minimal_semigroup)
}

/// A fixed, reproducible sample of at least `count` distinct random
/// semigroups, drawn until `min_nonfree` of them have linearly dependent
/// generators (the free ones have trivial resolutions).
pub fn sample_semigroups(
    count: usize,
    min_nonfree: usize,
    max_rank: usize,
    max_gens: usize,
    max_entry: i64,
) -> Vec<AffineSemigroup> {
    let mut runner = TestRunner::deterministic();
    let strategy = semigroup_strategy(max_rank, max_gens, max_entry);
    let mut out: Vec<AffineSemigroup> = Vec::new();
    let mut nonfree = 0;
    while out.len() < count || nonfree < min_nonfree {
        let q = strategy.new_tree(&mut runner).expect("strategy yields values").current();
        if out.contains(&q) {
            continue;
        }
        let dependent = bareiss_rank(&q.generator_matrix()) < q.num_generators();
        if dependent {
            nonfree += 1;
        } else if out.len() >= count {
            continue;
        }
        out.push(q);
    }
    out
}

/// Points of the box `[0, bound]` in row-major order.
pub fn box_points(bound: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &b in bound {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=b).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// Membership by dynamic programming over the box: a point is reachable iff
/// it is the origin or some generator steps back to a reachable point.
pub fn members_by_dp(gens: &[Vec<i64>], bound: &[i64]) -> HashSet<Vec<i64>> {
    let mut pts = box_points(bound);
    pts.sort_by_key(|p| p.iter().sum::<i64>());
    let mut reach: HashSet<Vec<i64>> = HashSet::new();
    for p in pts {
        let ok = p.iter().all(|&x| x == 0)
            || gens.iter().any(|g| {
                let back: Vec<i64> = p.iter().zip(g).map(|(a, b)| a - b).collect();
                back.iter().all(|&x| x >= 0) && reach.contains(&back)
            });
        if ok {
            reach.insert(p);
        }
    }
    reach
}

/// Largest cube box with at most `limit` points in rank `r`.
pub fn cube_side(r: usize, limit: usize) -> i64 {
    let mut s = 1i64;
    while ((s + 1) as usize).pow(r as u32) <= limit {
        s += 1;
    }
    s - 1
}

/// Lub-category membership straight from the definition: `c` is an object
/// iff no `b ≠ c` in the interval below `c` bounds every subset degree
/// lying below `c`. Subsets are enumerated by brute force.
pub fn is_lub_by_definition(gens: &[Vec<i64>], c: &[i64]) -> bool {
    let r = c.len();
    let n = gens.len();
    let bound: Vec<i64> = c.to_vec();
    let members = members_by_dp(gens, &bound);
    let le = |a: &[i64], b: &[i64]| {
        let diff: Vec<i64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
        diff.iter().all(|&x| x >= 0) && members.contains(&diff)
    };
    let mut below: Vec<Vec<i64>> = Vec::new();
    for mask in 0u32..(1 << n) {
        let mut deg = vec![0i64; r];
        for (i, g) in gens.iter().enumerate() {
            if mask & (1 << i) != 0 {
                for k in 0..r {
                    deg[k] += g[k];
                }
            }
        }
        if le(&deg, c) {
            below.push(deg);
        }
    }
    let interval: Vec<&Vec<i64>> = members.iter().filter(|b| le(b, c)).collect();
    !interval
        .iter()
        .any(|b| b.as_slice() != c && below.iter().all(|s| le(s, b)))
}

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
pub fn bareiss_rank(m: &[Vec<i64>]) -> usize {
    use num_bigint::BigInt;
    use num_traits::Zero;
    let mut a: Vec<Vec<BigInt>> = m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                a[i][j] = (&a[rank][col] * &a[i][j] - &a[i][col] * &a[rank][j]) / &prev;
            }
            a[i][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Rank over `F_p` by plain Gaussian elimination on machine integers.
pub fn rank_mod_p(m: &[Vec<i64>], p: u64) -> usize {
    let p = p as i64;
    let mut a: Vec<Vec<i64>> = m.iter().map(|r| r.iter().map(|&x| x.rem_euclid(p)).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let inv = |x: i64| -> i64 {
        // Fermat
        let (mut b, mut e, mut r) = (x, p - 2, 1i64);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for col in 0..cols {
        let Some(piv) = (rank..rows).find(|&i| a[i][col] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let s = inv(a[rank][col]);
        for j in 0..cols {
            a[rank][j] = a[rank][j] * s % p;
        }
        for i in 0..rows {
            if i != rank && a[i][col] != 0 {
                let f = a[i][col];
                for j in 0..cols {
                    a[i][j] = (a[i][j] - f * a[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}
