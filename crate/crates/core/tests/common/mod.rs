//! Independent test oracles, deliberately written as plain brute force with
//! no shared machinery from the implementation paths they check.

use chiforge_core::graph::Graph;

/// All-5-subsets induced-P5 scan: a 5-subset induces a P5 iff it has exactly
/// 4 edges, degree multiset {1,1,2,2,2}, and is connected.
pub fn naive_p5_scan(g: &Graph) -> bool {
    let n = g.n();
    if n < 5 {
        return false;
    }
    let verts: Vec<usize> = (0..n).collect();
    let mut idx = [0usize; 5];
    fn rec(
        g: &Graph,
        verts: &[usize],
        idx: &mut [usize; 5],
        depth: usize,
        start: usize,
    ) -> bool {
        if depth == 5 {
            return induces_p5(g, idx);
        }
        for i in start..verts.len() {
            idx[depth] = verts[i];
            if rec(g, verts, idx, depth + 1, i + 1) {
                return true;
            }
        }
        false
    }
    rec(g, &verts, &mut idx, 0, 0)
}

fn induces_p5(g: &Graph, vs: &[usize; 5]) -> bool {
    let mut deg = [0usize; 5];
    let mut edges = 0;
    for i in 0..5 {
        for j in i + 1..5 {
            if g.has_edge(vs[i], vs[j]) {
                deg[i] += 1;
                deg[j] += 1;
                edges += 1;
            }
        }
    }
    if edges != 4 {
        return false;
    }
    let mut sorted = deg;
    sorted.sort_unstable();
    if sorted != [1, 1, 2, 2, 2] {
        return false;
    }
    // Connectivity inside the subset (rules out a triangle plus an edge).
    let mut seen = [false; 5];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for j in 0..5 {
            if !seen[j] && g.has_edge(vs[i], vs[j]) {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Plain recursive k-colorability, no clique seeding and no saturation
/// heuristics: vertices colored in index order.
pub fn naive_k_colorable(g: &Graph, k: usize) -> bool {
    fn rec(g: &Graph, k: usize, colors: &mut Vec<usize>, v: usize) -> bool {
        if v == g.n() {
            return true;
        }
        for c in 0..k {
            let ok = (0..v).all(|u| !g.has_edge(u, v) || colors[u] != c);
            if ok {
                colors[v] = c;
                if rec(g, k, colors, v + 1) {
                    return true;
                }
            }
        }
        false
    }
    let mut colors = vec![usize::MAX; g.n()];
    rec(g, k, &mut colors, 0)
}

pub fn naive_chi(g: &Graph) -> usize {
    if g.n() == 0 {
        return 0;
    }
    (1..).find(|&k| naive_k_colorable(g, k)).unwrap()
}

/// Dynamic programming over independent sets: chi[S] = 1 + min over
/// maximal independent subsets I of S of chi[S \ I]. Exact for n <= ~20.
pub fn dp_chi(g: &Graph) -> usize {
    let n = g.n();
    assert!(n <= 20);
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let adj: Vec<u32> = (0..n)
        .map(|v| {
            let mut m = 0u32;
            for u in 0..n {
                if g.has_edge(v, u) {
                    m |= 1 << u;
                }
            }
            m
        })
        .collect();
    let mut chi = vec![u32::MAX; (full as usize) + 1];
    chi[0] = 0;
    for s in 1..=full {
        // enumerate independent subsets of s containing its lowest vertex
        let low = s.trailing_zeros() as usize;
        let mut best = u32::MAX;
        // subsets of candidates = s minus neighbors of low, containing low
        let cand = s & !adj[low] & !(1 << low);
        let mut sub = cand;
        loop {
            let ind = sub | (1 << low);
            if is_independent(&adj, ind) {
                let rest = s & !ind;
                if chi[rest as usize] != u32::MAX {
                    best = best.min(1 + chi[rest as usize]);
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & cand;
        }
        chi[s as usize] = best;
    }
    chi[full as usize] as usize
}

fn is_independent(adj: &[u32], set: u32) -> bool {
    let mut rest = set;
    while rest != 0 {
        let v = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        if adj[v] & set != 0 {
            return false;
        }
    }
    true
}

/// Brute-force maximum clique by subset enumeration (n <= 20).
pub fn naive_omega(g: &Graph) -> usize {
    let n = g.n();
    assert!(n <= 20);
    let mut best = 0;
    for mask in 0u32..(1 << n) {
        let size = mask.count_ones() as usize;
        if size <= best {
            continue;
        }
        let verts: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if verts
            .iter()
            .enumerate()
            .all(|(i, &u)| verts[i + 1..].iter().all(|&w| g.has_edge(u, w)))
        {
            best = size;
        }
    }
    best
}
