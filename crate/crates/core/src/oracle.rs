//! Exact chromatic number, clique number, and stability number with
//! witnesses, memoized per graph instance, plus the two chromatic-density
//! predicates and the Erdos-Hajnal black-box extractor.
//!
//! The chi solver is certified exact: a DSATUR greedy coloring gives the
//! upper bound, a branch-and-bound maximum clique gives the lower bound,
//! and exhaustive k-colorability backtracking (with the clique pre-colored)
//! closes the gap. A configurable vertex budget guards runtime; exceeding it
//! is an explicit error, never an approximate answer.

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::graph::{ComponentMode, Graph};
use crate::rat::Rat;
use std::cell::RefCell;
use std::collections::BTreeMap;
use std::collections::HashMap;

pub const DEFAULT_BUDGET: usize = 30;
pub const BUDGET_ENV: &str = "CHIFORGE_SOLVE_BUDGET";

/// A proper coloring of a vertex subset, `colors[v]` defined exactly on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoringWitness {
    pub colors: BTreeMap<usize, usize>,
    pub k: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtremalKind {
    Clique,
    Stable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalWitness {
    pub kind: ExtremalKind,
    pub members: VertexSet,
}

#[derive(Clone, Default)]
struct CacheEntry {
    chi: Option<(usize, ColoringWitness)>,
    omega: Option<(usize, VertexSet)>,
    alpha: Option<(usize, VertexSet)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityMode {
    /// `chi(S \ N[v]) < eps * chi(S)` for every `v` in `S`.
    SelfDense,
    /// `chi(A \ N(v)) < eps * chi(A)` for every `v` in `B`.
    DenseTo,
}

/// Exact oracle over one graph, with a per-instance memo table keyed by the
/// queried subset. Not `Sync`: campaigns run one oracle per worker.
pub struct Oracle {
    g: Graph,
    budget: usize,
    cache: RefCell<HashMap<Vec<u64>, CacheEntry>>,
}

pub fn budget_from_env() -> usize {
    std::env::var(BUDGET_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_BUDGET)
}

impl Oracle {
    pub fn new(g: Graph) -> Self {
        Self::with_budget(g, budget_from_env())
    }

    pub fn with_budget(g: Graph, budget: usize) -> Self {
        Oracle {
            g,
            budget,
            cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.g
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn clear_cache(&self) {
        self.cache.borrow_mut().clear();
    }

    fn check_budget(&self, s: &VertexSet) -> Result<()> {
        let size = s.len();
        if size > self.budget {
            Err(Error::BudgetExceeded {
                size,
                budget: self.budget,
            })
        } else {
            Ok(())
        }
    }

    /// Exact chromatic number of `G[S]` with a proper optimal coloring.
    pub fn chi(&self, s: &VertexSet) -> Result<usize> {
        Ok(self.chi_witness(s)?.0)
    }

    pub fn chi_rat(&self, s: &VertexSet) -> Result<Rat> {
        Ok(Rat::from_usize(self.chi(s)?))
    }

    pub fn chi_witness(&self, s: &VertexSet) -> Result<(usize, ColoringWitness)> {
        self.check_budget(s)?;
        let key = s.key();
        if let Some(hit) = self.cache.borrow().get(&key).and_then(|e| e.chi.clone()) {
            return Ok(hit);
        }
        let result = self.solve_chi(s);
        self.cache.borrow_mut().entry(key).or_default().chi = Some(result.clone());
        Ok(result)
    }

    fn solve_chi(&self, s: &VertexSet) -> (usize, ColoringWitness) {
        // Color component by component; chi of a disjoint union is the max.
        let mut colors = BTreeMap::new();
        let mut k = 0;
        for comp in self.g.components(s, ComponentMode::Connected) {
            let (ck, cw) = self.solve_chi_connected(&comp);
            k = k.max(ck);
            colors.extend(cw.colors);
        }
        (k, ColoringWitness { colors, k })
    }

    fn solve_chi_connected(&self, s: &VertexSet) -> (usize, ColoringWitness) {
        let verts = s.to_vec();
        let n = verts.len();
        if n == 0 {
            return (
                0,
                ColoringWitness {
                    colors: BTreeMap::new(),
                    k: 0,
                },
            );
        }
        // Local adjacency as index bitmasks (n <= budget <= 64 effectively).
        let adj = local_adjacency(&self.g, &verts);

        let (ub, greedy) = dsatur_greedy(n, &adj);
        let clique = max_clique_local(n, &adj);
        let lb = clique.len();

        let mut best = greedy;
        let mut best_k = ub;
        for k in lb..ub {
            if let Some(c) = k_colorable(n, &adj, k, &clique) {
                best = c;
                best_k = k;
                break;
            }
        }
        let colors = verts
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, best[i]))
            .collect();
        (
            best_k,
            ColoringWitness {
                colors,
                k: best_k,
            },
        )
    }

    /// Exact clique or stability number of `G[S]` with witness.
    pub fn extremal(&self, s: &VertexSet, kind: ExtremalKind) -> Result<(usize, ExtremalWitness)> {
        self.check_budget(s)?;
        let key = s.key();
        let cached = {
            let cache = self.cache.borrow();
            cache.get(&key).and_then(|e| match kind {
                ExtremalKind::Clique => e.omega.clone(),
                ExtremalKind::Stable => e.alpha.clone(),
            })
        };
        let (size, members) = match cached {
            Some(hit) => hit,
            None => {
                let verts = s.to_vec();
                let adj = match kind {
                    ExtremalKind::Clique => local_adjacency(&self.g, &verts),
                    ExtremalKind::Stable => local_adjacency_complement(&self.g, &verts),
                };
                let clique = max_clique_local(verts.len(), &adj);
                let members =
                    VertexSet::from_iter(self.g.n(), clique.iter().map(|&i| verts[i]));
                let result = (clique.len(), members);
                let mut cache = self.cache.borrow_mut();
                let entry = cache.entry(key).or_default();
                match kind {
                    ExtremalKind::Clique => entry.omega = Some(result.clone()),
                    ExtremalKind::Stable => entry.alpha = Some(result.clone()),
                }
                result
            }
        };
        Ok((
            size,
            ExtremalWitness {
                kind,
                members,
            },
        ))
    }

    pub fn omega(&self, s: &VertexSet) -> Result<usize> {
        Ok(self.extremal(s, ExtremalKind::Clique)?.0)
    }

    pub fn alpha(&self, s: &VertexSet) -> Result<usize> {
        Ok(self.extremal(s, ExtremalKind::Stable)?.0)
    }

    /// chi of the whole graph.
    pub fn chi_all(&self) -> Result<usize> {
        self.chi(&self.g.full_set())
    }

    /// Chromatic-density predicate, strict inequality in exact rationals.
    /// Returns `(true, None)` or `(false, least_violating_vertex)`.
    pub fn density_check(
        &self,
        eps: &Rat,
        mode: DensityMode,
        a: &VertexSet,
        b: Option<&VertexSet>,
    ) -> Result<(bool, Option<usize>)> {
        if !eps.is_positive() {
            return Err(Error::RangeError {
                op: "density_check",
                param: "eps",
                value: eps.to_string(),
                range: "(0, inf)",
            });
        }
        let chi_a = self.chi_rat(a)?;
        let threshold = eps * &chi_a;
        match mode {
            DensityMode::SelfDense => {
                for v in a.iter() {
                    let rest = a.difference(&self.g.closed_neighborhood(v));
                    if self.chi_rat(&rest)? >= threshold {
                        return Ok((false, Some(v)));
                    }
                }
                Ok((true, None))
            }
            DensityMode::DenseTo => {
                let b = b.expect("DenseTo requires the B side");
                for v in b.iter() {
                    let rest = a.difference(self.g.neighbors(v));
                    if self.chi_rat(&rest)? >= threshold {
                        return Ok((false, Some(v)));
                    }
                }
                Ok((true, None))
            }
        }
    }

    pub fn is_self_dense(&self, eps: &Rat, s: &VertexSet) -> Result<bool> {
        Ok(self.density_check(eps, DensityMode::SelfDense, s, None)?.0)
    }

    pub fn is_dense_to(&self, eps: &Rat, a: &VertexSet, b: &VertexSet) -> Result<bool> {
        Ok(self.density_check(eps, DensityMode::DenseTo, a, Some(b))?.0)
    }

    /// Erdos-Hajnal black box: on a P5-free graph, return a clique or stable
    /// set of size at least `|G|^(1/a)` (the larger of the two, clique
    /// preferred on ties). The exponent is a caller-supplied parameter; the
    /// claimed bound is re-checked exactly and a violation is an error.
    pub fn eh_extract(&self, a: &Rat) -> Result<ExtremalWitness> {
        if *a < Rat::one() {
            return Err(Error::RangeError {
                op: "eh_extract",
                param: "a",
                value: a.to_string(),
                range: "[1, inf)",
            });
        }
        if let Some(p5) = self.g.find_induced_p5() {
            return Err(Error::P5Found(p5));
        }
        let all = self.g.full_set();
        let n = self.g.n();
        if n == 0 {
            return Ok(ExtremalWitness {
                kind: ExtremalKind::Clique,
                members: VertexSet::empty(0),
            });
        }
        let (omega, cw) = self.extremal(&all, ExtremalKind::Clique)?;
        let (alpha, sw) = self.extremal(&all, ExtremalKind::Stable)?;
        let witness = if omega >= alpha { cw } else { sw };
        let size = omega.max(alpha);
        // size >= n^(1/a) for a = p/q  iff  size^p >= n^q
        let p = u32::try_from(a.numer().clone()).map_err(|_| Error::RangeError {
            op: "eh_extract",
            param: "a",
            value: a.to_string(),
            range: "numerator must fit u32",
        })?;
        let q = u32::try_from(a.denom().clone()).unwrap_or(1);
        if !Rat::from_usize(size).ge_pow_frac(&Rat::from_usize(n), q, p) {
            let need = (1..=n)
                .find(|&m| Rat::from_usize(m).ge_pow_frac(&Rat::from_usize(n), q, p))
                .unwrap_or(n);
            return Err(Error::EhBoundViolated {
                a: a.to_string(),
                got: size,
                need,
                n,
            });
        }
        Ok(witness)
    }

    /// True iff `witness` colors exactly `s` and no edge of `G[S]` is
    /// monochromatic.
    pub fn verify_coloring(&self, s: &VertexSet, witness: &ColoringWitness) -> Result<bool> {
        let domain = VertexSet::from_iter(self.g.n(), witness.colors.keys().copied());
        if domain != *s {
            return Err(Error::Precondition {
                op: "verify_coloring",
                clause: "witness domain equals S".into(),
                witness: None,
            });
        }
        for (&v, &cv) in &witness.colors {
            for u in self.g.neighbors(v).intersection(s).iter() {
                if u > v && witness.colors[&u] == cv {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn local_adjacency(g: &Graph, verts: &[usize]) -> Vec<u64> {
    let n = verts.len();
    assert!(n <= 64, "local solver limited to 64 vertices");
    let mut adj = vec![0u64; n];
    for i in 0..n {
        for j in i + 1..n {
            if g.has_edge(verts[i], verts[j]) {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    adj
}

fn local_adjacency_complement(g: &Graph, verts: &[usize]) -> Vec<u64> {
    let n = verts.len();
    let mut adj = local_adjacency(g, verts);
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    for (i, row) in adj.iter_mut().enumerate() {
        *row = !*row & mask & !(1 << i);
    }
    adj
}

/// DSATUR greedy coloring; returns (color count, coloring by local index).
fn dsatur_greedy(n: usize, adj: &[u64]) -> (usize, Vec<usize>) {
    let mut colors = vec![usize::MAX; n];
    let mut used = 0;
    for _ in 0..n {
        // pick uncolored vertex with max saturation, then max degree, then least index
        let mut pick = usize::MAX;
        let mut pick_sat = 0usize;
        let mut pick_deg = 0usize;
        for v in 0..n {
            if colors[v] != usize::MAX {
                continue;
            }
            let mut seen = 0u64;
            let mut nbrs = adj[v];
            while nbrs != 0 {
                let u = nbrs.trailing_zeros() as usize;
                nbrs &= nbrs - 1;
                if colors[u] != usize::MAX {
                    seen |= 1 << colors[u].min(63);
                }
            }
            let sat = seen.count_ones() as usize;
            let deg = adj[v].count_ones() as usize;
            if pick == usize::MAX || sat > pick_sat || (sat == pick_sat && deg > pick_deg) {
                pick = v;
                pick_sat = sat;
                pick_deg = deg;
            }
        }
        let v = pick;
        let mut forbidden = vec![false; used + 1];
        let mut nbrs = adj[v];
        while nbrs != 0 {
            let u = nbrs.trailing_zeros() as usize;
            nbrs &= nbrs - 1;
            if colors[u] != usize::MAX && colors[u] < forbidden.len() {
                forbidden[colors[u]] = true;
            }
        }
        let c = (0..).find(|&c| c >= forbidden.len() || !forbidden[c]).unwrap();
        colors[v] = c;
        used = used.max(c + 1);
    }
    (used, colors)
}

/// Branch-and-bound maximum clique (greedy-coloring bound), local indices.
fn max_clique_local(n: usize, adj: &[u64]) -> Vec<usize> {
    if n == 0 {
        return Vec::new();
    }
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut best: Vec<usize> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    expand(adj, mask, &mut current, &mut best);
    best.sort_unstable();
    best
}

fn expand(adj: &[u64], candidates: u64, current: &mut Vec<usize>, best: &mut Vec<usize>) {
    if candidates == 0 {
        if current.len() > best.len() {
            *best = current.clone();
        }
        return;
    }
    // Greedy coloring of the candidate set gives the bound per vertex.
    let mut order: Vec<usize> = Vec::new();
    let mut bound: Vec<usize> = Vec::new();
    let mut uncolored = candidates;
    let mut color = 0;
    while uncolored != 0 {
        color += 1;
        let mut avail = uncolored;
        while avail != 0 {
            let v = avail.trailing_zeros() as usize;
            avail &= !(1 << v);
            avail &= !adj[v];
            uncolored &= !(1 << v);
            order.push(v);
            bound.push(color);
        }
    }
    for i in (0..order.len()).rev() {
        if current.len() + bound[i] <= best.len() {
            return;
        }
        let v = order[i];
        current.push(v);
        let mut next = candidates & adj[v];
        for &w in &order[i..] {
            next &= !(1 << w);
        }
        expand(adj, next, current, best);
        current.pop();
    }
}

/// Exhaustive k-colorability with the given clique pre-colored; returns a
/// proper coloring on success.
fn k_colorable(n: usize, adj: &[u64], k: usize, clique: &[usize]) -> Option<Vec<usize>> {
    if clique.len() > k {
        return None;
    }
    let mut colors = vec![usize::MAX; n];
    for (c, &v) in clique.iter().enumerate() {
        colors[v] = c;
    }
    if color_rec(n, adj, k, &mut colors, clique.len()) {
        Some(colors)
    } else {
        None
    }
}

fn color_rec(n: usize, adj: &[u64], k: usize, colors: &mut [usize], max_used: usize) -> bool {
    // DSATUR-style most-constrained-vertex selection.
    let mut pick = usize::MAX;
    let mut pick_sat = usize::MAX;
    for v in 0..n {
        if colors[v] != usize::MAX {
            continue;
        }
        let mut seen = 0u64;
        let mut nbrs = adj[v];
        while nbrs != 0 {
            let u = nbrs.trailing_zeros() as usize;
            nbrs &= nbrs - 1;
            if colors[u] != usize::MAX {
                seen |= 1 << colors[u];
            }
        }
        let free = k - (seen.count_ones() as usize).min(k);
        if pick == usize::MAX || free < pick_sat {
            pick = v;
            pick_sat = free;
            if free == 0 {
                return false;
            }
        }
    }
    if pick == usize::MAX {
        return true;
    }
    let v = pick;
    let mut forbidden = 0u64;
    let mut nbrs = adj[v];
    while nbrs != 0 {
        let u = nbrs.trailing_zeros() as usize;
        nbrs &= nbrs - 1;
        if colors[u] != usize::MAX {
            forbidden |= 1 << colors[u];
        }
    }
    // Symmetry breaking: allow at most one fresh color.
    let limit = k.min(max_used + 1);
    for c in 0..limit {
        if forbidden >> c & 1 == 0 {
            colors[v] = c;
            if color_rec(n, adj, k, colors, max_used.max(c + 1)) {
                return true;
            }
            colors[v] = usize::MAX;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;

    fn oracle(g: Graph) -> Oracle {
        Oracle::with_budget(g, DEFAULT_BUDGET)
    }

    #[test]
    fn chi_small_fixtures() {
        let o = oracle(cycle(5));
        assert_eq!(o.chi_all().unwrap(), 3); // odd cycle
        let o = oracle(Graph::edgeless(0));
        assert_eq!(o.chi_all().unwrap(), 0); // chi of empty graph is 0
        let o = oracle(petersen());
        assert_eq!(o.chi_all().unwrap(), 3);
        let o = oracle(complete_multipartite(&[2, 2, 2]));
        assert_eq!(o.chi_all().unwrap(), 3);
        assert_eq!(o.omega(&o.graph().full_set()).unwrap(), 3);
    }

    #[test]
    fn chi_witness_is_proper_and_optimal() {
        let g = petersen();
        let o = oracle(g);
        let all = o.graph().full_set();
        let (k, w) = o.chi_witness(&all).unwrap();
        assert_eq!(k, 3);
        assert!(o.verify_coloring(&all, &w).unwrap());
        assert_eq!(w.colors.values().collect::<std::collections::BTreeSet<_>>().len(), 3);
    }

    #[test]
    fn extremal_values() {
        let o = oracle(cycle(5));
        let all = o.graph().full_set();
        assert_eq!(o.omega(&all).unwrap(), 2);
        assert_eq!(o.alpha(&all).unwrap(), 2);
        let (_, w) = o.extremal(&all, ExtremalKind::Stable).unwrap();
        // witness members pairwise nonadjacent
        let m = w.members.to_vec();
        assert_eq!(m.len(), 2);
        assert!(!o.graph().has_edge(m[0], m[1]));
    }

    #[test]
    fn budget_is_enforced() {
        let o = Oracle::with_budget(Graph::edgeless(40), 30);
        assert!(matches!(
            o.chi_all(),
            Err(Error::BudgetExceeded { size: 40, budget: 30 })
        ));
    }

    #[test]
    fn density_predicates() {
        // K4 is (eps,chi)-dense for any eps > 0: chi(G \ N[v]) = 0.
        let o = oracle(Graph::complete(4));
        let all = o.graph().full_set();
        assert!(o.is_self_dense(&Rat::new(1, 100), &all).unwrap());

        // 2K3 with eps = 1/2: chi(G \ N[v0]) = 3 >= 3/2, violator v0.
        let o = oracle(disjoint_copies(&Graph::complete(3), 2));
        let all = o.graph().full_set();
        let (ok, violator) = o
            .density_check(&Rat::new(1, 2), DensityMode::SelfDense, &all, None)
            .unwrap();
        assert!(!ok);
        assert_eq!(violator, Some(0));

        // K(3,3): part 2 dense to part 1 for any eps > 0.
        let o = oracle(complete_multipartite(&[3, 3]));
        let a = VertexSet::from_iter(6, [0, 1, 2]);
        let b = VertexSet::from_iter(6, [3, 4, 5]);
        assert!(o.is_dense_to(&Rat::new(1, 1000), &a, &b).unwrap());
    }

    #[test]
    fn eh_extraction() {
        // C5 with a = 200: 5^(1/200) has ceiling 2; alpha = 2 witness qualifies.
        let o = oracle(cycle(5));
        let w = o.eh_extract(&Rat::from_int(200)).unwrap();
        assert_eq!(w.members.len(), 2);

        // K5: clique of size 5 for any exponent.
        let o = oracle(Graph::complete(5));
        let w = o.eh_extract(&Rat::from_int(3)).unwrap();
        assert_eq!(w.kind, ExtremalKind::Clique);
        assert_eq!(w.members.len(), 5);

        // edgeless 8-graph with a = 3: stable set of all 8 >= 2.
        let o = oracle(Graph::edgeless(8));
        let w = o.eh_extract(&Rat::from_int(3)).unwrap();
        assert_eq!(w.kind, ExtremalKind::Stable);
        assert_eq!(w.members.len(), 8);

        // C6 is not P5-free.
        let o = oracle(cycle(6));
        assert!(matches!(o.eh_extract(&Rat::from_int(3)), Err(Error::P5Found(_))));

        // C5 with a = 1 demands a witness of size 5; the bound fails honestly.
        let o = oracle(cycle(5));
        assert!(matches!(
            o.eh_extract(&Rat::from_int(1)),
            Err(Error::EhBoundViolated { .. })
        ));
    }

    #[test]
    fn verify_coloring_cases() {
        let g = cycle(5);
        let o = oracle(g);
        let all = o.graph().full_set();
        let (_, w) = o.chi_witness(&all).unwrap();
        assert!(o.verify_coloring(&all, &w).unwrap());

        let mut bad = w.clone();
        bad.colors.insert(1, bad.colors[&0]); // 0 and 1 adjacent in C5
        assert!(!o.verify_coloring(&all, &bad).unwrap());

        let empty = ColoringWitness {
            colors: BTreeMap::new(),
            k: 0,
        };
        assert!(o.verify_coloring(&VertexSet::empty(5), &empty).unwrap());
    }

    #[test]
    fn cache_matches_fresh_recomputation() {
        let g = petersen();
        let o = oracle(g);
        let s = VertexSet::from_iter(10, [0, 1, 2, 5, 6, 7]);
        let first = o.chi(&s).unwrap();
        let cached = o.chi(&s).unwrap();
        o.clear_cache();
        let fresh = o.chi(&s).unwrap();
        assert_eq!(first, cached);
        assert_eq!(first, fresh);
    }
}
