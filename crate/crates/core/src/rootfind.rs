//! Root confidence sets.
//!
//! [`leaf_strip`] removes every vertex of degree at most one, simultaneously,
//! for a fixed number of rounds. Run on a tree of size `n` with
//! `m_n(n) - k` rounds it gives the confidence set `R_k`. All of the rounds
//! are computed at once by [`peel_rounds`], which records the round in which
//! each vertex disappears; the survivors of `r` rounds are the vertices whose
//! removal round exceeds `r`.
//!
//! Two baselines are included for comparison: ranking by Jordan centrality
//! (size of the largest component left after deleting a vertex) and greedy
//! likelihood, which for uniform attachment deletes a uniformly random leaf
//! at each step.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;
use crate::treegen::{IncreasingTree, Tree};

/// Round budget `⌈e ln n - (3/2) ln ln(n + 1)⌉`.
pub fn m_n(n: usize) -> u32 {
    assert!(n >= 1, "m_n is defined for n >= 1");
    let n = n as f64;
    let value = std::f64::consts::E * n.ln() - 1.5 * (n + 1.0).ln().ln();
    value.ceil() as u32
}

/// Number of stripping rounds for `R_k`, clamped at zero.
pub fn rounds_for(n: usize, k: u32) -> u32 {
    m_n(n).saturating_sub(k)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    #[serde(rename = "leafstrip")]
    LeafStrip,
    Jordan,
    Greedy,
}

impl Algorithm {
    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::LeafStrip => "leafstrip",
            Algorithm::Jordan => "jordan",
            Algorithm::Greedy => "greedy",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "leafstrip" => Ok(Algorithm::LeafStrip),
            "jordan" => Ok(Algorithm::Jordan),
            "greedy" => Ok(Algorithm::Greedy),
            other => Err(Error::Config(format!(
                "unknown algorithm {other:?} (expected leafstrip, jordan or greedy)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConfidenceSet {
    /// Sorted vertex labels.
    pub vertices: Vec<u32>,
    /// Stripping rounds for leaf stripping, deletions for greedy, 0 for Jordan.
    pub rounds_performed: u32,
    pub algorithm: Algorithm,
}

impl ConfidenceSet {
    pub fn contains(&self, v: u32) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
}

// Degree and xor-of-neighbours per vertex. A vertex of degree one can find its
// only remaining neighbour as the xor, so peeling needs no adjacency lists.
fn degree_xor<T: Tree + ?Sized>(t: &T) -> (Vec<u32>, Vec<u32>) {
    let n = t.vertex_count();
    let mut deg = vec![0u32; n + 1];
    let mut nb = vec![0u32; n + 1];
    t.for_each_edge(|u, v| {
        deg[u as usize] += 1;
        deg[v as usize] += 1;
        nb[u as usize] ^= v;
        nb[v as usize] ^= u;
    });
    (deg, nb)
}

/// Round (1-based) in which each vertex is stripped; index 0 holds 0.
///
/// Every vertex is eventually removed: the last one or two vertices go
/// together once they have degree at most one.
pub fn peel_rounds<T: Tree + ?Sized>(t: &T) -> Vec<u32> {
    let n = t.vertex_count();
    let (mut deg, mut nb) = degree_xor(t);
    let mut round = vec![0u32; n + 1];
    let mut frontier: Vec<u32> = (1..=n as u32).filter(|&v| deg[v as usize] <= 1).collect();
    let mut next = Vec::new();
    let mut r = 0;
    while !frontier.is_empty() {
        r += 1;
        for &v in &frontier {
            round[v as usize] = r;
        }
        for &v in &frontier {
            if deg[v as usize] == 1 {
                let u = nb[v as usize] as usize;
                deg[v as usize] = 0;
                deg[u] -= 1;
                nb[u] ^= v;
                if round[u] == 0 && deg[u] == 1 {
                    next.push(u as u32);
                }
            }
        }
        frontier.clear();
        std::mem::swap(&mut frontier, &mut next);
    }
    round
}

/// Survivors of `rounds` rounds of simultaneous leaf removal.
pub fn leaf_strip<T: Tree + ?Sized>(t: &T, rounds: u32) -> ConfidenceSet {
    let round = peel_rounds(t);
    survivors_after(&round, rounds)
}

/// Survivor set read off a [`peel_rounds`] profile.
pub fn survivors_after(peel: &[u32], rounds: u32) -> ConfidenceSet {
    ConfidenceSet {
        vertices: (1..peel.len() as u32).filter(|&v| peel[v as usize] > rounds).collect(),
        rounds_performed: rounds,
        algorithm: Algorithm::LeafStrip,
    }
}

/// `R_k`: leaf stripping with `max(m_n - k, 0)` rounds.
pub fn confidence_set_rk(t: &IncreasingTree, k: u32) -> ConfidenceSet {
    leaf_strip(t, rounds_for(t.n(), k))
}

/// Whether the root survives `m_n - k` rounds, read from the rooted shape:
/// vertex 1 needs two children whose subtrees have height at least
/// `m_n - k - 1`. With zero rounds the root is trivially kept.
pub fn root_captured_characterization(t: &IncreasingTree, k: u32) -> bool {
    let rounds = rounds_for(t.n(), k);
    if rounds == 0 {
        return true;
    }
    let heights = t.subtree_heights();
    let tall = t
        .parents()
        .iter()
        .enumerate()
        .filter(|&(i, &p)| p == 1 && heights[i + 2] + 1 >= rounds)
        .take(2)
        .count();
    tall >= 2
}

/// Jordan score of every vertex: the size of the largest component of the
/// forest left after deleting it. Index 0 is unused.
pub fn jordan_scores<T: Tree + ?Sized>(t: &T) -> Vec<u32> {
    let n = t.vertex_count();
    let adj = t.adjacency();
    let mut parent = vec![0u32; n + 1];
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![1u32];
    let mut seen = vec![false; n + 1];
    seen[1] = true;
    while let Some(v) = stack.pop() {
        order.push(v);
        for &w in &adj[v as usize] {
            if !seen[w as usize] {
                seen[w as usize] = true;
                parent[w as usize] = v;
                stack.push(w);
            }
        }
    }
    let mut size = vec![1u32; n + 1];
    let mut largest_child = vec![0u32; n + 1];
    for &v in order.iter().rev() {
        let p = parent[v as usize] as usize;
        if p != 0 {
            size[p] += size[v as usize];
            largest_child[p] = largest_child[p].max(size[v as usize]);
        }
    }
    let mut score = vec![0u32; n + 1];
    for v in 1..=n {
        score[v] = largest_child[v].max(n as u32 - size[v]);
    }
    score
}

/// All vertices ordered by Jordan score, ties broken by smaller label.
pub fn jordan_ranking<T: Tree + ?Sized>(t: &T) -> Vec<u32> {
    let score = jordan_scores(t);
    let mut order: Vec<u32> = (1..=t.vertex_count() as u32).collect();
    order.sort_by_key(|&v| (score[v as usize], v));
    order
}

/// The `size` most central vertices by Jordan score.
pub fn jordan_confidence_set<T: Tree + ?Sized>(t: &T, size: usize) -> Result<ConfidenceSet> {
    let n = t.vertex_count();
    if size == 0 || size > n {
        return Err(Error::SizeOutOfRange { requested: size, n });
    }
    let mut vertices = jordan_ranking(t);
    vertices.truncate(size);
    vertices.sort_unstable();
    Ok(ConfidenceSet {
        vertices,
        rounds_performed: 0,
        algorithm: Algorithm::Jordan,
    })
}

/// Order in which greedy likelihood deletes vertices when run to exhaustion.
/// Each step removes a uniformly random current leaf (degree at most one).
pub fn greedy_elimination_order<T: Tree + ?Sized>(t: &T, seed: u64) -> Vec<u32> {
    let n = t.vertex_count();
    let (mut deg, mut nb) = degree_xor(t);
    let mut leaves: Vec<u32> = (1..=n as u32).filter(|&v| deg[v as usize] <= 1).collect();
    let mut rng = rng::stream(seed);
    let mut order = Vec::with_capacity(n);
    while !leaves.is_empty() {
        let v = leaves.swap_remove(rng::below(&mut rng, leaves.len() as u32) as usize);
        order.push(v);
        if deg[v as usize] == 1 {
            let u = nb[v as usize] as usize;
            deg[u] -= 1;
            nb[u] ^= v;
            if deg[u] == 1 {
                leaves.push(u as u32);
            }
        }
        deg[v as usize] = 0;
    }
    order
}

/// Deletes uniformly random leaves until `survivors` vertices remain.
pub fn greedy_likelihood_strip<T: Tree + ?Sized>(t: &T, survivors: usize, seed: u64) -> Result<ConfidenceSet> {
    let n = t.vertex_count();
    if survivors == 0 || survivors > n {
        return Err(Error::SizeOutOfRange { requested: survivors, n });
    }
    let order = greedy_elimination_order(t, seed);
    let mut vertices = order[n - survivors..].to_vec();
    vertices.sort_unstable();
    Ok(ConfidenceSet {
        vertices,
        rounds_performed: (n - survivors) as u32,
        algorithm: Algorithm::Greedy,
    })
}
