//! Vertex-induced census of 4-vertex subgraphs with 5 (K4′) or 6 (K4) edges.
//!
//! A 4-set with at least five induced edges is connected, and each of its
//! edges sees the other two vertices inside the union of its endpoints'
//! neighbourhoods. So every edge `(u, v)` is extended by pairs from
//! `N(u) ∪ N(v)`, and a set is counted only from its lexicographically
//! smallest induced edge.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphgen::IntersectionGraph;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MotifCounts {
    pub k4: u64,
    pub k4_prime: u64,
    /// Distinct connected 4-sets visited from their smallest induced edge.
    pub four_sets_scanned: u64,
}

impl std::ops::Add for MotifCounts {
    type Output = MotifCounts;

    fn add(self, o: MotifCounts) -> MotifCounts {
        MotifCounts {
            k4: self.k4 + o.k4,
            k4_prime: self.k4_prime + o.k4_prime,
            four_sets_scanned: self.four_sets_scanned + o.four_sets_scanned,
        }
    }
}

/// Default cap on the number of candidate (edge, pair) extensions.
pub const DEFAULT_MOTIF_BUDGET: u64 = 5_000_000_000;

/// Upper bound on the candidate extensions the census will examine:
/// the sum over edges of `C(deg u + deg v - 2, 2)`.
pub fn enumeration_bound(g: &IntersectionGraph) -> u64 {
    g.edges()
        .map(|(u, v)| {
            let k = (g.degree(u) + g.degree(v) - 2) as u64;
            k * k.saturating_sub(1) / 2
        })
        .sum()
}

pub fn census4(g: &IntersectionGraph) -> Result<MotifCounts> {
    census4_with_budget(g, DEFAULT_MOTIF_BUDGET)
}

pub fn census4_with_budget(g: &IntersectionGraph, budget: u64) -> Result<MotifCounts> {
    let bound = enumeration_bound(g);
    if bound > budget {
        return Err(Error::capacity(format!(
            "motif enumeration bound {bound} exceeds budget {budget}"
        )));
    }
    Ok((0..g.n())
        .into_par_iter()
        .map(|u| {
            let mut cand = Vec::new();
            let mut acc = MotifCounts::default();
            for &v in g.neighbors(u).iter().filter(|&&v| v > u) {
                count_from_edge(g, u, v, &mut cand, &mut acc);
            }
            acc
        })
        .reduce(MotifCounts::default, |a, b| a + b))
}

// Candidate vertex with adjacency flags to u and v.
#[derive(Clone, Copy)]
struct Cand {
    w: usize,
    to_u: bool,
    to_v: bool,
}

fn count_from_edge(g: &IntersectionGraph, u: usize, v: usize, cand: &mut Vec<Cand>, acc: &mut MotifCounts) {
    merge_neighbourhoods(g.neighbors(u), g.neighbors(v), u, v, cand);
    for (i, a) in cand.iter().enumerate() {
        for b in &cand[i + 1..] {
            let wx = g.has_edge(a.w, b.w);
            // Presence of each pair of the set, keyed by sorted endpoints.
            let pairs = [
                ((u, v), true),
                (ord(u, a.w), a.to_u),
                (ord(u, b.w), b.to_u),
                (ord(v, a.w), a.to_v),
                (ord(v, b.w), b.to_v),
                (ord(a.w, b.w), wx),
            ];
            let smallest = pairs.iter().filter(|(_, on)| *on).map(|(e, _)| *e).min();
            if smallest != Some((u, v)) {
                continue;
            }
            acc.four_sets_scanned += 1;
            match pairs.iter().filter(|(_, on)| *on).count() {
                6 => acc.k4 += 1,
                5 => acc.k4_prime += 1,
                _ => {}
            }
        }
    }
}

fn ord(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

fn merge_neighbourhoods(nu: &[usize], nv: &[usize], u: usize, v: usize, out: &mut Vec<Cand>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < nu.len() || j < nv.len() {
        let c = match (nu.get(i), nv.get(j)) {
            (Some(&a), Some(&b)) if a == b => {
                i += 1;
                j += 1;
                Cand { w: a, to_u: true, to_v: true }
            }
            (Some(&a), Some(&b)) if a < b => {
                i += 1;
                Cand { w: a, to_u: true, to_v: false }
            }
            (Some(&a), None) => {
                i += 1;
                Cand { w: a, to_u: true, to_v: false }
            }
            (_, Some(&b)) => {
                j += 1;
                Cand { w: b, to_u: false, to_v: true }
            }
            (None, None) => unreachable!(),
        };
        if c.w != u && c.w != v {
            out.push(c);
        }
    }
}
