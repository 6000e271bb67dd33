//! Decomposition of a (p,q)-sparse P5-free graph along high-chi anticomplete
//! pairs: a central cutset plus connected components under chromatic
//! constraints. Produces one of three verified outcomes: a grown
//! anticomplete pair, a complete pair, or a chi-dense subgraph.

use crate::bitset::VertexSet;
use crate::cert::{chi, con, CertBuilder, Rel};
use crate::error::{Error, Result};
use crate::graph::{ComponentMode, PairKind, Purity};
use crate::lemmas::search::{best_connected_anticomplete_pair, maximal_component, minimal_cutset};
use crate::lemmas::{LemmaOutcome, Payload};
use crate::oracle::Oracle;
use crate::rat::Rat;

pub const LEMMA: &str = "decompose_anti";

/// What a sparse-pair supplier produced for a connected induced subgraph F
/// with chi(F) >= q.
pub enum Supply {
    /// A connected anticomplete pair with both sides of chi >= p.
    Pair(VertexSet, VertexSet),
    /// The supplier's own machinery found a different verified outcome that
    /// the caller should propagate instead of continuing the decomposition.
    Escalate(LemmaOutcome),
    /// No qualifying pair exists: the sparsity hypothesis fails on F.
    Infeasible,
}

pub type Supplier<'s> = dyn FnMut(&Oracle, &VertexSet) -> Result<Supply> + 's;

pub enum AntiResult {
    Outcome(LemmaOutcome),
    Escalated(LemmaOutcome),
}

/// Standalone form: the sparse-pair search is exhaustive over connected
/// anticomplete pairs (the proof's maximization of chi(A)+chi(B), then
/// |A|+|B|).
pub fn decompose_anti(o: &Oracle, eps: &Rat, p: &Rat, q: &Rat) -> Result<LemmaOutcome> {
    let p_inner = p.clone();
    let mut supplier = move |oracle: &Oracle, f: &VertexSet| -> Result<Supply> {
        match best_connected_anticomplete_pair(oracle, f, &p_inner)? {
            Some((a, b)) => Ok(Supply::Pair(a, b)),
            None => Ok(Supply::Infeasible),
        }
    };
    match decompose_anti_with(o, eps, p, q, &mut supplier)? {
        AntiResult::Outcome(out) => Ok(out),
        AntiResult::Escalated(_) => unreachable!("exhaustive supplier never escalates"),
    }
}

/// Core driver with a pluggable sparse-pair supplier (the induction of the
/// growth lemma plugs a recursive call in here).
pub fn decompose_anti_with(
    o: &Oracle,
    eps: &Rat,
    p: &Rat,
    q: &Rat,
    supply: &mut Supplier<'_>,
) -> Result<AntiResult> {
    let g = o.graph();
    if !(eps.is_positive() && *eps <= Rat::new(1, 4)) {
        return Err(Error::RangeError {
            op: LEMMA,
            param: "eps",
            value: eps.to_string(),
            range: "(0, 1/4]",
        });
    }
    if let Some(p5) = g.find_induced_p5() {
        return Err(Error::P5Found(p5));
    }
    let all = g.full_set();
    let chi_g = o.chi_rat(&all)?;
    let q_cap = (Rat::one() - eps * eps) * &chi_g;
    if !(p.is_positive() && p <= q && *q <= q_cap) {
        return Err(Error::RangeError {
            op: LEMMA,
            param: "p,q",
            value: format!("p = {p}, q = {q}"),
            range: "0 < p <= q <= (1 - eps^2) chi(G)",
        });
    }

    let eps4chi = eps.pow(4) * &chi_g;
    let mut steps: Vec<(String, String)> = Vec::new();

    let complete_pair = |x: &VertexSet,
                         y: &VertexSet,
                         how: &str,
                         steps: &[(String, String)]|
     -> Result<LemmaOutcome> {
        let mut bld = CertBuilder::new(o, LEMMA, "B");
        bld.kind("complete-pair");
        bld.set("G", &all);
        bld.set("X", x);
        bld.set("Y", y);
        for (s, d) in steps {
            bld.step(s, d);
        }
        bld.step("candidate", how);
        bld.rel_pair(PairKind::Complete, "X", "Y")?;
        bld.claim(chi("X"), Rel::Ge, con(eps.pow(4)).mul(chi("G")))?;
        bld.claim(chi("Y"), Rel::Ge, con(p.clone()))?;
        Ok(LemmaOutcome {
            cert: bld.build(),
            payload: Payload::PurePair {
                kind: PairKind::Complete,
                a: x.clone(),
                b: y.clone(),
            },
        })
    };

    // Work on the maximal component; a rich remainder is already the first
    // bullet.
    let c0 = maximal_component(o, &all)?;
    if c0 != all {
        steps.push((
            "maximal-component".into(),
            format!("operating on {:?}", c0.to_vec()),
        ));
        let rest = all.difference(&c0);
        let q_minus = q - &(Rat::from_int(2) * &eps4chi);
        if o.chi_rat(&rest)? >= q_minus {
            let mut bld = CertBuilder::new(o, LEMMA, "B");
            bld.kind("anticomplete-pair");
            bld.set("G", &all);
            bld.set("A", &rest);
            bld.set("B", &c0);
            for (s, d) in &steps {
                bld.step(s, d);
            }
            bld.step("candidate", "components outside the maximal component are rich");
            bld.rel_pair(PairKind::Anticomplete, "A", "B")?;
            bld.claim(
                chi("A"),
                Rel::Ge,
                con(q.clone()).sub(con(Rat::from_int(2) * eps.pow(4)).mul(chi("G"))),
            )?;
            bld.claim(
                chi("B"),
                Rel::Ge,
                con(Rat::one() - eps * eps).mul(chi("G")),
            )?;
            return Ok(AntiResult::Outcome(LemmaOutcome {
                cert: bld.build(),
                payload: Payload::PurePair {
                    kind: PairKind::Anticomplete,
                    a: rest,
                    b: c0,
                },
            }));
        }
    }

    // claim_sparse: find a minimal cutset Z in connected F splitting off a
    // maximal-chi component, with bullet-2 escapes when a cutset side is
    // chromatically heavy.
    enum SparseStep {
        Split { a: VertexSet, z: VertexSet },
        Early(AntiResult),
    }
    let mut claim_sparse = |f: &VertexSet, steps: &mut Vec<(String, String)>| -> Result<SparseStep> {
        let (pa, pb) = match supply(o, f)? {
            Supply::Pair(a, b) => (a, b),
            Supply::Escalate(out) => return Ok(SparseStep::Early(AntiResult::Escalated(out))),
            Supply::Infeasible => {
                return Err(Error::HypothesisFailed {
                    op: LEMMA,
                    what: format!("(p,q)-sparsity with p = {p}, q = {q}"),
                    witness: format!("induced F = {:?} has no qualifying anticomplete pair", f.to_vec()),
                })
            }
        };
        // Supplier contract re-checks.
        for (s, name) in [(&pa, "A"), (&pb, "B")] {
            if s.is_empty() || !g.is_connected_within(s) || o.chi_rat(s)? < *p {
                return Err(Error::Precondition {
                    op: LEMMA,
                    clause: format!("supplied sparse pair side {name} connected with chi >= p"),
                    witness: Some(format!("{:?}", s.to_vec())),
                });
            }
        }
        if g.classify_pair(&pa, &pb)? != PairKind::Anticomplete {
            return Err(Error::Precondition {
                op: LEMMA,
                clause: "supplied sparse pair is anticomplete".into(),
                witness: None,
            });
        }
        let candidates = f.difference(&pa).difference(&pb);
        let z = minimal_cutset(g, f, &pa, &pb, &candidates)?;
        let comps = g.components(&f.difference(&z), ComponentMode::Connected);
        let comp_of = |s: &VertexSet| -> VertexSet {
            comps
                .iter()
                .find(|c| s.is_subset_of(c))
                .expect("pair side inside one component")
                .clone()
        };
        let ca = comp_of(&pa);
        let cb = comp_of(&pb);
        // Each minimal-cutset vertex sees both sides; by the mixed lemma it
        // is complete to one of them.
        let mut z_to_ca = VertexSet::empty(g.n());
        let mut z_to_cb = VertexSet::empty(g.n());
        for v in z.iter() {
            let to_a = g.mixed_on(v, &ca)?;
            let to_b = g.mixed_on(v, &cb)?;
            if to_a == Purity::PureComplete {
                z_to_ca.insert(v);
            } else if to_b == Purity::PureComplete {
                z_to_cb.insert(v);
            } else {
                return Err(Error::NoVerifiableOutcome {
                    op: LEMMA,
                    analysis: format!(
                        "cutset vertex {v} is complete to neither side; \
                         contradicts the mixed lemma on a P5-free graph"
                    ),
                });
            }
        }
        for (zs, side) in [(&z_to_ca, &ca), (&z_to_cb, &cb)] {
            if !zs.is_empty() && o.chi_rat(zs)? >= eps4chi {
                let out = complete_pair(zs, side, "heavy cutset side complete to a component", steps)?;
                return Ok(SparseStep::Early(AntiResult::Outcome(out)));
            }
        }
        // The new A is the maximal-chi component; its anticomplete partner is
        // whichever of the two pair components differs from it.
        let mut best = comps[0].clone();
        for c in &comps[1..] {
            if o.chi(c)? > o.chi(&best)? {
                best = c.clone();
            }
        }
        let partner = if ca != best { ca } else { cb };
        steps.push((
            "claim-sparse".into(),
            format!("cutset {:?}; new A = {:?}", z.to_vec(), best.to_vec()),
        ));
        let _ = partner;
        Ok(SparseStep::Split { a: best, z })
    };

    // Build the partition (A, D, B_1..B_k, E) with k maximal.
    let mut a;
    let mut d = VertexSet::empty(g.n());
    let mut blocks: Vec<VertexSet> = Vec::new();
    let mut e = VertexSet::empty(g.n());

    let mut frontier = c0.clone();
    loop {
        match claim_sparse(&frontier, &mut steps)? {
            SparseStep::Early(result) => return Ok(result),
            SparseStep::Split { a: new_a, z } => {
                d = d.union(&z);
                for comp in g.components(&frontier.difference(&z), ComponentMode::Connected) {
                    if comp == new_a {
                        continue;
                    }
                    if o.chi_rat(&comp)? >= *p {
                        blocks.push(comp);
                    } else {
                        e = e.union(&comp);
                    }
                }
                a = new_a;
            }
        }
        if o.chi_rat(&a)? < *q {
            break;
        }
        frontier = a.clone();
    }
    steps.push((
        "partition".into(),
        format!(
            "|D| = {}, blocks = {}, chi(A) = {}",
            d.len(),
            blocks.len(),
            o.chi(&a)?
        ),
    ));

    // S: cutset vertices mixed on A. The mixed lemma forces each to be pure
    // to every block.
    let mut s_set = VertexSet::empty(g.n());
    let mut r_set = VertexSet::empty(g.n());
    for v in d.iter() {
        match g.mixed_on(v, &a)? {
            Purity::Mixed => {
                s_set.insert(v);
            }
            Purity::PureComplete => {
                r_set.insert(v);
            }
            Purity::PureAnticomplete => {}
        }
    }
    for v in s_set.iter() {
        for (i, block) in blocks.iter().enumerate() {
            if g.mixed_on(v, block)? == Purity::Mixed {
                return Err(Error::NoVerifiableOutcome {
                    op: LEMMA,
                    analysis: format!(
                        "S-vertex {v} mixed on both A and block {i}; \
                         contradicts the mixed lemma on a P5-free graph"
                    ),
                });
            }
        }
    }

    // Claim-smalls checks: heavy complete attachments escape to bullet 2.
    for v in s_set.iter() {
        let rest = s_set.difference(&g.closed_neighborhood(v));
        for block in &blocks {
            let s_i = VertexSet::from_iter(
                g.n(),
                rest.iter().filter(|&u| !g.neighbors(u).is_disjoint_from(block)),
            );
            if !s_i.is_empty() && o.chi_rat(&s_i)? >= eps4chi {
                let out =
                    complete_pair(&s_i, block, "heavy attachment set complete to a block", &steps)?;
                return Ok(AntiResult::Outcome(out));
            }
        }
    }
    if !r_set.is_empty() && o.chi_rat(&r_set)? >= eps4chi {
        let out = complete_pair(&r_set, &a, "cutset part complete to A", &steps)?;
        return Ok(AntiResult::Outcome(out));
    }
    // Dense escape on S.
    let two_eps3_chi = Rat::from_int(2) * eps.pow(3) * &chi_g;
    if o.chi_rat(&s_set)? >= two_eps3_chi && o.is_self_dense(eps, &s_set)? {
        let mut bld = CertBuilder::new(o, LEMMA, "B");
        bld.kind("dense-subgraph");
        bld.set("G", &all);
        bld.set("F", &s_set);
        for (st, det) in &steps {
            bld.step(st, det);
        }
        bld.step("candidate", "the mixed cutset part S is chromatically dense");
        bld.rel_self_dense("F", eps)?;
        bld.claim(
            chi("F"),
            Rel::Ge,
            con(Rat::from_int(2) * eps.pow(3)).mul(chi("G")),
        )?;
        let f = s_set.clone();
        return Ok(AntiResult::Outcome(LemmaOutcome {
            cert: bld.build(),
            payload: Payload::Dense {
                f,
                eps: eps.clone(),
            },
        }));
    }

    // Final accounting: (A, W) with W = (D \ (R u S)) u blocks u E.
    let mut w = d.difference(&r_set).difference(&s_set);
    for block in &blocks {
        w = w.union(block);
    }
    w = w.union(&e);
    let mut bld = CertBuilder::new(o, LEMMA, "B");
    bld.kind("anticomplete-pair");
    bld.set("G", &all);
    bld.set("A", &a);
    bld.set("B", &w);
    for (st, det) in &steps {
        bld.step(st, det);
    }
    bld.step("candidate", "A against the rest of the decomposition");
    bld.rel_pair(PairKind::Anticomplete, "A", "B")?;
    bld.claim(
        chi("A"),
        Rel::Ge,
        con(q.clone()).sub(con(Rat::from_int(2) * eps.pow(4)).mul(chi("G"))),
    )?;
    bld.claim(
        chi("B"),
        Rel::Ge,
        con(Rat::one() - eps * eps).mul(chi("G")),
    )?;
    Ok(AntiResult::Outcome(LemmaOutcome {
        cert: bld.build(),
        payload: Payload::PurePair {
            kind: PairKind::Anticomplete,
            a,
            b: w,
        },
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::graph::Graph;

    #[test]
    fn two_triangles_first_bullet() {
        let o = Oracle::new(disjoint_copies(&Graph::complete(3), 2));
        let out = decompose_anti(&o, &Rat::new(1, 4), &Rat::one(), &Rat::new(14, 5)).unwrap();
        assert_eq!(out.cert.kind, "anticomplete-pair");
        // Both sides are triangles with chi = 3.
        assert_eq!(out.cert.sets["A"].len(), 3);
        assert_eq!(out.cert.sets["B"].len(), 3);
    }

    #[test]
    fn eps_out_of_range() {
        let o = Oracle::new(Graph::complete(3));
        assert!(matches!(
            decompose_anti(&o, &Rat::new(3, 10), &Rat::one(), &Rat::one()),
            Err(Error::RangeError { .. })
        ));
    }

    #[test]
    fn p4_produces_verified_outcome() {
        let o = Oracle::new(path(4));
        let q = Rat::new(15, 8); // <= (1 - 1/16) * 2
        let out = decompose_anti(&o, &Rat::new(1, 4), &Rat::one(), &q).unwrap();
        assert!(matches!(
            out.cert.kind.as_str(),
            "anticomplete-pair" | "complete-pair" | "dense-subgraph"
        ));
    }

    #[test]
    fn sparsity_failure_reports_witness() {
        // Complete graphs have no anticomplete pairs at all.
        let o = Oracle::new(Graph::complete(5));
        let err = decompose_anti(&o, &Rat::new(1, 4), &Rat::one(), &Rat::new(4, 1)).unwrap_err();
        assert!(matches!(err, Error::HypothesisFailed { .. }));
    }

    #[test]
    fn c5_runs() {
        let o = Oracle::new(cycle(5));
        let q = Rat::new(14, 5);
        let out = decompose_anti(&o, &Rat::new(1, 4), &Rat::one(), &q).unwrap();
        // C5's minimal cutsets are heavy relative to eps^4 chi, so the
        // complete-pair escape fires.
        assert_eq!(out.cert.kind, "complete-pair");
    }
}
