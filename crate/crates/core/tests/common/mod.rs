//! Brute-force reference implementations shared by the integration tests.
//! They work directly on parent arrays (`parents[v - 2]` is the parent of
//! `v`) and deliberately avoid the library's algorithms.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

pub fn parent_of(parents: &[u32], v: u32) -> Option<u32> {
    if v <= 1 {
        None
    } else {
        Some(parents[v as usize - 2])
    }
}

pub fn vertex_count(parents: &[u32]) -> usize {
    parents.len() + 1
}

/// Simultaneous leaf removal on explicit neighbour sets. Returns survivors.
pub fn naive_strip(n: usize, edges: &[(u32, u32)], rounds: u32) -> BTreeSet<u32> {
    let mut adj: HashMap<u32, BTreeSet<u32>> = (1..=n as u32).map(|v| (v, BTreeSet::new())).collect();
    for &(a, b) in edges {
        adj.get_mut(&a).unwrap().insert(b);
        adj.get_mut(&b).unwrap().insert(a);
    }
    for _ in 0..rounds {
        if adj.is_empty() {
            break;
        }
        let leaves: Vec<u32> = adj.iter().filter(|(_, nb)| nb.len() <= 1).map(|(&v, _)| v).collect();
        for v in &leaves {
            adj.remove(v);
        }
        for nb in adj.values_mut() {
            for v in &leaves {
                nb.remove(v);
            }
        }
    }
    adj.keys().copied().collect()
}

pub fn tree_edges(parents: &[u32]) -> Vec<(u32, u32)> {
    parents.iter().enumerate().map(|(i, &p)| (p, i as u32 + 2)).collect()
}

/// `heights[v]` is the height of the subtree rooted at `v` (index 0 unused).
pub fn subtree_heights(parents: &[u32]) -> Vec<u32> {
    let n = vertex_count(parents);
    let mut h = vec![0u32; n + 1];
    for v in (2..=n).rev() {
        let p = parents[v - 2] as usize;
        h[p] = h[p].max(h[v] + 1);
    }
    h
}

pub fn subtree_sizes(parents: &[u32]) -> Vec<u32> {
    let n = vertex_count(parents);
    let mut s = vec![1u32; n + 1];
    s[0] = 0;
    for v in (2..=n).rev() {
        s[parents[v - 2] as usize] += s[v];
    }
    s
}

pub fn depths(parents: &[u32]) -> Vec<u32> {
    let n = vertex_count(parents);
    let mut d = vec![0u32; n + 1];
    for v in 2..=n {
        d[v] = d[parents[v - 2] as usize] + 1;
    }
    d
}

/// The root survives `rounds` rounds iff it has two children whose branches
/// are at least `rounds` edges long.
pub fn root_survives(parents: &[u32], rounds: u32) -> bool {
    if rounds == 0 {
        return true;
    }
    let h = subtree_heights(parents);
    let long = (2..=vertex_count(parents) as u32)
        .filter(|&v| parents[v as usize - 2] == 1 && h[v as usize] + 1 >= rounds)
        .count();
    long >= 2
}

/// Ulam-Harris address of every vertex: the i-th child (by label) of a
/// vertex gets digit i. Index 0 unused.
pub fn addresses(parents: &[u32]) -> Vec<Vec<u32>> {
    let n = vertex_count(parents);
    let mut seen = vec![0u32; n + 1];
    let mut addr: Vec<Vec<u32>> = vec![Vec::new(); n + 1];
    for v in 2..=n {
        let p = parents[v - 2] as usize;
        seen[p] += 1;
        let mut a = addr[p].clone();
        a.push(seen[p]);
        addr[v] = a;
    }
    addr
}

pub fn zones(parents: &[u32]) -> Vec<u32> {
    addresses(parents).iter().map(|a| a.iter().sum()).collect()
}

/// Descendants of `v`, including `v`.
pub fn descendants(parents: &[u32], v: u32) -> BTreeSet<u32> {
    let n = vertex_count(parents) as u32;
    let mut out = BTreeSet::from([v]);
    for w in v + 1..=n {
        if out.contains(&parents[w as usize - 2]) {
            out.insert(w);
        }
    }
    out
}

/// Vertices in `zone` whose subtree height is at least `threshold`.
pub fn tall_set(parents: &[u32], zone: u32, threshold: u32) -> Vec<u32> {
    let z = zones(parents);
    let h = subtree_heights(parents);
    (1..z.len()).filter(|&v| z[v] == zone && h[v] >= threshold).map(|v| v as u32).collect()
}

/// Every parent array with `parents[v - 2] < v`, by brute-force product.
pub fn all_increasing(n: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for v in 2..=n as u32 {
        let mut next = Vec::new();
        for prefix in &out {
            for p in 1..v {
                let mut q = prefix.clone();
                q.push(p);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// Largest component left after deleting `v`, by direct search.
pub fn jordan_score_bfs(n: usize, edges: &[(u32, u32)], v: u32) -> u32 {
    let mut adj = vec![Vec::new(); n + 1];
    for &(a, b) in edges {
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    }
    let mut seen = vec![false; n + 1];
    seen[v as usize] = true;
    let mut best = 0;
    for &start in &adj[v as usize] {
        if seen[start as usize] {
            continue;
        }
        let mut stack = vec![start];
        seen[start as usize] = true;
        let mut size = 0;
        while let Some(u) = stack.pop() {
            size += 1;
            for &w in &adj[u as usize] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        best = best.max(size);
    }
    best
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Zone preservation, fixed zone-j subtrees and height reflection, checked
/// from the two parent arrays alone.
pub fn lemma_violation(t: &[u32], f: &[u32], j: u32) -> Option<String> {
    let (zt, zf) = (zones(t), zones(f));
    let (dt, df) = (depths(t), depths(f));
    for v in 1..zt.len() {
        if zt[v] != zf[v] {
            return Some(format!("zone of {v} changed {} -> {}", zt[v], zf[v]));
        }
        if zt[v] == j && descendants(t, v as u32) != descendants(f, v as u32) {
            return Some(format!("subtree of zone-{j} vertex {v} changed"));
        }
        if (1..=j).contains(&zt[v]) && dt[v] + df[v] != zt[v] + 1 {
            return Some(format!("heights of {v}: {} + {} != {}", dt[v], df[v], zt[v] + 1));
        }
        if j % 4 == 0 && zt[v] == j && dt[v] <= j / 2 + 1 && df[v] < j / 2 {
            return Some(format!("height floor fails at {v}"));
        }
    }
    let h = subtree_heights(t).into_iter().max().unwrap_or(0);
    for thr in 0..=h + 1 {
        if tall_set(t, j, thr) != tall_set(f, j, thr) {
            return Some(format!("S changes at threshold {thr}"));
        }
    }
    None
}
