//! Linear-chi pure pairs versus linearly chi-dense induced subgraphs in
//! P5-free graphs (the chromatic Rodl analogues).

use crate::bitset::VertexSet;
use crate::cert::{chi, con, CertBuilder, Rel};
use crate::error::{Error, Result};
use crate::graph::{ComponentMode, PairKind};
use crate::lemmas::search::best_pure_pair;
use crate::lemmas::{LemmaOutcome, Payload};
use crate::oracle::Oracle;
use crate::rat::Rat;

pub const LEMMA_PURE_OR_DENSE: &str = "pure_or_dense";
pub const LEMMA_RODL: &str = "rodl_chi";

/// First vertex of `s` (index order) with `3 * chi(N(v) ∩ s) >= chi(s)`.
pub fn gyarfas_vertex_within(o: &Oracle, s: &VertexSet) -> Result<Option<usize>> {
    let chi_s = o.chi(s)?;
    if chi_s < 2 {
        return Ok(None);
    }
    for v in s.iter() {
        let nv = o.graph().neighbors(v).intersection(s);
        if 3 * o.chi(&nv)? >= chi_s {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

pub fn remap(map: &[usize], s: &VertexSet, n: usize) -> VertexSet {
    VertexSet::from_iter(n, s.iter().map(|i| map[i]))
}

fn pure_pair_cert(
    o: &Oracle,
    lemma: &str,
    kind: PairKind,
    a: &VertexSet,
    b: &VertexSet,
    delta: &Rat,
    how: &str,
    extra_steps: &[(String, String)],
) -> Result<LemmaOutcome> {
    let mut bld = CertBuilder::new(o, lemma, "B");
    bld.kind(match kind {
        PairKind::Complete => "complete-pair",
        PairKind::Anticomplete => "anticomplete-pair",
        PairKind::Mixed => unreachable!("pure pair"),
    });
    bld.set("G", &o.graph().full_set());
    bld.set("A", a);
    bld.set("B", b);
    for (s, d) in extra_steps {
        bld.step(s, d);
    }
    bld.step("candidate", how);
    bld.rel_pair(kind, "A", "B")?;
    bld.claim(chi("A"), Rel::Ge, con(delta.clone()).mul(chi("G")))?;
    bld.claim(chi("B"), Rel::Ge, con(delta.clone()).mul(chi("G")))?;
    Ok(LemmaOutcome {
        cert: bld.build(),
        payload: Payload::PurePair {
            kind,
            a: a.clone(),
            b: b.clone(),
        },
    })
}

fn dense_cert(
    o: &Oracle,
    lemma: &str,
    f: &VertexSet,
    eps: &Rat,
    delta: &Rat,
    how: &str,
    extra_steps: &[(String, String)],
) -> Result<LemmaOutcome> {
    let mut bld = CertBuilder::new(o, lemma, "B");
    bld.kind("dense-subgraph");
    bld.set("G", &o.graph().full_set());
    bld.set("F", f);
    for (s, d) in extra_steps {
        bld.step(s, d);
    }
    bld.step("candidate", how);
    bld.rel_self_dense("F", eps)?;
    bld.claim(chi("F"), Rel::Ge, con(delta.clone()).mul(chi("G")))?;
    Ok(LemmaOutcome {
        cert: bld.build(),
        payload: Payload::Dense {
            f: f.clone(),
            eps: eps.clone(),
        },
    })
}

/// Either a pure pair with both sides of chi at least `delta * chi(G)`, or
/// an (eps,chi)-dense induced subgraph F with `chi(F) >= delta * chi(G)`.
///
/// Requires `0 < delta <= 2^-7 eps^2` and a P5-free graph. The procedure
/// follows the proof (Z-set, Gyarfas vertex inside Z, A/B and P/Q splits,
/// two bipartite-trichotomy invocations) with least-index tie-breaks, after
/// two desk-scale quick checks: a component split when G is disconnected and
/// a direct density test of G itself.
pub fn pure_or_dense(o: &Oracle, eps: &Rat, delta: &Rat) -> Result<LemmaOutcome> {
    let g = o.graph();
    if !(eps.is_positive() && *eps < Rat::one()) {
        return Err(Error::RangeError {
            op: LEMMA_PURE_OR_DENSE,
            param: "eps",
            value: eps.to_string(),
            range: "(0, 1)",
        });
    }
    let delta_cap = Rat::pow2_neg(7) * eps * eps;
    if !(delta.is_positive() && *delta <= delta_cap) {
        return Err(Error::RangeError {
            op: LEMMA_PURE_OR_DENSE,
            param: "delta",
            value: delta.to_string(),
            range: "(0, 2^-7 eps^2]",
        });
    }
    if let Some(p5) = g.find_induced_p5() {
        return Err(Error::P5Found(p5));
    }
    let all = g.full_set();
    if g.n() == 0 {
        return dense_cert(o, LEMMA_PURE_OR_DENSE, &all, eps, delta, "empty graph", &[]);
    }
    let chi_g = o.chi_rat(&all)?;
    let threshold = delta * &chi_g;

    // Quick check: a component split gives an anticomplete pair outright.
    let comps = g.components(&all, ComponentMode::Connected);
    if comps.len() >= 2 {
        let c = crate::lemmas::search::maximal_component(o, &all)?;
        let rest = all.difference(&c);
        if o.chi_rat(&c)? >= threshold && o.chi_rat(&rest)? >= threshold {
            return pure_pair_cert(
                o,
                LEMMA_PURE_OR_DENSE,
                PairKind::Anticomplete,
                &c,
                &rest,
                delta,
                "component split of a disconnected graph",
                &[],
            );
        }
    }
    // Quick check: G itself dense.
    if o.is_self_dense(eps, &all)? {
        return dense_cert(o, LEMMA_PURE_OR_DENSE, &all, eps, delta, "G itself is dense", &[]);
    }

    let mut steps: Vec<(String, String)> = Vec::new();

    // Z := {v : chi(G \ N(v)) >= (eps/2) chi(G)}.
    let half_eps_chi = eps * &chi_g * Rat::new(1, 2);
    let mut z = VertexSet::empty(g.n());
    for v in 0..g.n() {
        if o.chi_rat(&all.difference(g.neighbors(v)))? >= half_eps_chi {
            z.insert(v);
        }
    }
    steps.push(("Z".into(), format!("{:?}", z.to_vec())));
    let gz = all.difference(&z);
    if o.chi_rat(&gz)? >= &chi_g * &Rat::new(1, 2) {
        if let Ok(out) = dense_cert(
            o,
            LEMMA_PURE_OR_DENSE,
            &gz,
            eps,
            delta,
            "G \\ Z has half the chromatic number and every closed nonneighborhood there is light",
            &steps,
        ) {
            return Ok(out);
        }
    }
    if let Some(v) = gyarfas_vertex_within(o, &z)? {
        steps.push(("gyarfas-in-Z".into(), format!("v = {v}")));
        let nv = g.neighbors(v).clone();
        let mut a = VertexSet::empty(g.n());
        for u in nv.iter() {
            let rest = all.difference(g.neighbors(u)).difference(g.neighbors(v));
            if o.chi_rat(&rest)? >= threshold {
                a.insert(u);
            }
        }
        let b = nv.difference(&a);
        steps.push(("A|B split of N(v)".into(), format!("A = {:?}", a.to_vec())));
        let outside = all.difference(&g.closed_neighborhood(v));
        let chi_b = o.chi_rat(&b)?;
        let quarter_eps = eps * &Rat::new(1, 4);
        let mut p = VertexSet::empty(g.n());
        for zv in outside.iter() {
            if o.chi_rat(&b.difference(g.neighbors(zv)))? < &quarter_eps * &chi_b {
                p.insert(zv);
            }
        }
        let q = outside.difference(&p);
        steps.push(("P|Q split".into(), format!("P = {:?}", p.to_vec())));

        // Claim-chirdl3 branch: bound chi(P) via the trichotomy on (B, P).
        if !b.is_empty()
            && !p.is_empty()
            && o.chi_rat(&p)? > eps * &chi_g * Rat::new(1, 4)
        {
            if let Ok(inner) = crate::lemmas::bip::bip_trichotomy(
                o,
                crate::lemmas::bip::BipInput {
                    v,
                    a: &b,
                    b: &p,
                    eps: &quarter_eps,
                },
            ) {
                steps.push(("bip(B,P)".into(), inner.cert.kind.clone()));
                if let Some(out) =
                    map_bip_outcome(o, LEMMA_PURE_OR_DENSE, inner, eps, delta, &steps)?
                {
                    return Ok(out);
                }
            }
        }
        // Main branch: Gyarfas vertex z inside Q, then the trichotomy on (E, T).
        if let Some(zv) = gyarfas_vertex_within(o, &q)? {
            // The proof text calls this vertex w in one claim; the context
            // vertex is z and the implementation follows the context.
            steps.push(("gyarfas-in-Q".into(), format!("z = {zv}")));
            let e = g.neighbors(zv).intersection(&q);
            let t = b.difference(g.neighbors(zv));
            if !e.is_empty() && !t.is_empty() && o.is_dense_to(&quarter_eps, &e, &t)? {
                if let Ok(inner) = crate::lemmas::bip::bip_trichotomy(
                    o,
                    crate::lemmas::bip::BipInput {
                        v: zv,
                        a: &e,
                        b: &t,
                        eps: &quarter_eps,
                    },
                ) {
                    steps.push(("bip(E,T)".into(), inner.cert.kind.clone()));
                    if let Some(out) =
                        map_bip_outcome(o, LEMMA_PURE_OR_DENSE, inner, eps, delta, &steps)?
                    {
                        return Ok(out);
                    }
                }
            }
        }
    }

    // Desk-scale fallback: bounded exhaustive searches.
    steps.push(("fallback".into(), "exhaustive desk-scale search".into()));
    let thr = threshold.clone();
    if let Some((a, b, kind)) =
        best_pure_pair(o, &all, |ca, cb| *ca >= thr && *cb >= thr)?
    {
        return pure_pair_cert(
            o,
            LEMMA_PURE_OR_DENSE,
            kind,
            &a,
            &b,
            delta,
            "exhaustive pure-pair search",
            &steps,
        );
    }
    let mut comps = g.components(&all, ComponentMode::Connected);
    comps.sort_by_key(|c| std::cmp::Reverse(o.chi(c).unwrap_or(0)));
    for c in comps {
        if o.chi_rat(&c)? >= threshold && o.is_self_dense(eps, &c)? {
            return dense_cert(
                o,
                LEMMA_PURE_OR_DENSE,
                &c,
                eps,
                delta,
                "dense component",
                &steps,
            );
        }
    }
    let singleton = VertexSet::singleton(g.n(), 0);
    if Rat::one() >= threshold {
        return dense_cert(
            o,
            LEMMA_PURE_OR_DENSE,
            &singleton,
            eps,
            delta,
            "single vertex is vacuously dense",
            &steps,
        );
    }
    Err(Error::NoVerifiableOutcome {
        op: LEMMA_PURE_OR_DENSE,
        analysis: "proof path degenerated and no fallback candidate verified".into(),
    })
}

fn map_bip_outcome(
    o: &Oracle,
    lemma: &str,
    inner: LemmaOutcome,
    eps: &Rat,
    delta: &Rat,
    steps: &[(String, String)],
) -> Result<Option<LemmaOutcome>> {
    let chi_g = o.chi_rat(&o.graph().full_set())?;
    let threshold = delta * &chi_g;
    match inner.payload {
        Payload::PurePair { kind, a, b } => {
            if o.chi_rat(&a)? >= threshold && o.chi_rat(&b)? >= threshold {
                return Ok(Some(pure_pair_cert(
                    o,
                    lemma,
                    kind,
                    &a,
                    &b,
                    delta,
                    "pure pair from the bipartite trichotomy",
                    steps,
                )?));
            }
        }
        Payload::Dense { f, eps: inner_eps } => {
            // The trichotomy was invoked at eps/4, so its dense side is
            // (eps,chi)-dense.
            debug_assert!(inner_eps <= *eps);
            if o.chi_rat(&f)? >= threshold {
                if let Ok(out) = dense_cert(
                    o,
                    lemma,
                    &f,
                    eps,
                    delta,
                    "dense subgraph from the bipartite trichotomy",
                    steps,
                ) {
                    return Ok(Some(out));
                }
            }
        }
        _ => {}
    }
    Ok(None)
}

/// Anticomplete pair or (eps,chi)-dense subgraph at the threshold
/// `delta = eta^ceil(log2(1/eps))`, `eta = 2^-7 eps^2`, via the doubling
/// loop over complete blockades.
pub fn rodl_chi(o: &Oracle, eps: &Rat) -> Result<LemmaOutcome> {
    let g = o.graph();
    if !(eps.is_positive() && *eps < Rat::one()) {
        return Err(Error::RangeError {
            op: LEMMA_RODL,
            param: "eps",
            value: eps.to_string(),
            range: "(0, 1)",
        });
    }
    if let Some(p5) = g.find_induced_p5() {
        return Err(Error::P5Found(p5));
    }
    let (eta, delta, rounds) = rodl_delta(eps);
    let all = g.full_set();
    if g.n() == 0 {
        return dense_cert(o, LEMMA_RODL, &all, eps, &delta, "empty graph", &[]);
    }
    let chi_g = o.chi_rat(&all)?;
    let threshold = &delta * &chi_g;
    let mut steps: Vec<(String, String)> = vec![(
        "delta".into(),
        format!("eta = {eta}, rounds = {rounds}, delta = {delta}"),
    )];

    // Desk-scale quick checks mirroring pure_or_dense.
    if g.components(&all, ComponentMode::Connected).len() >= 2 {
        let c = crate::lemmas::search::maximal_component(o, &all)?;
        let rest = all.difference(&c);
        if o.chi_rat(&c)? >= threshold && o.chi_rat(&rest)? >= threshold {
            return pure_pair_cert(
                o,
                LEMMA_RODL,
                PairKind::Anticomplete,
                &c,
                &rest,
                &delta,
                "component split",
                &steps,
            );
        }
    }
    if o.is_self_dense(eps, &all)? {
        return dense_cert(o, LEMMA_RODL, &all, eps, &delta, "G itself is dense", &steps);
    }

    // Doubling loop: maintain a complete blockade, chi(B_i) >= eta^k chi(G).
    let mut blocks = vec![all.clone()];
    for k in 0..rounds {
        let mut next = Vec::with_capacity(blocks.len() * 2);
        for block in &blocks {
            let (sub, map) = g.induced_with_map(block)?;
            let sub_oracle = Oracle::with_budget(sub, o.budget());
            let inner = pure_or_dense(&sub_oracle, eps, &eta)?;
            match inner.payload {
                Payload::Dense { f, .. } => {
                    let f = remap(&map, &f, g.n());
                    steps.push((
                        format!("round {k}"),
                        "inner call produced a dense subgraph".into(),
                    ));
                    return dense_cert(
                        o,
                        LEMMA_RODL,
                        &f,
                        eps,
                        &delta,
                        "dense subgraph found inside a blockade block",
                        &steps,
                    );
                }
                Payload::PurePair { kind, a, b } => {
                    let (a, b) = (remap(&map, &a, g.n()), remap(&map, &b, g.n()));
                    if kind == PairKind::Anticomplete {
                        steps.push((
                            format!("round {k}"),
                            "inner call produced an anticomplete pair".into(),
                        ));
                        return pure_pair_cert(
                            o,
                            LEMMA_RODL,
                            PairKind::Anticomplete,
                            &a,
                            &b,
                            &delta,
                            "anticomplete pair found inside a blockade block",
                            &steps,
                        );
                    }
                    next.push(a);
                    next.push(b);
                }
                _ => unreachable!("pure_or_dense payload"),
            }
        }
        steps.push((
            format!("round {k}"),
            format!("all blocks split into complete pairs; blockade length {}", next.len()),
        ));
        blocks = next;
    }

    // Equalize block chromatic numbers by deleting least-index vertices, then
    // take the union: a complete blockade of 2^rounds equal-chi blocks is
    // (eps,chi)-dense when 2^rounds >= 1/eps.
    let target = blocks
        .iter()
        .map(|b| o.chi(b))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min()
        .expect("nonempty blockade");
    let mut union = VertexSet::empty(g.n());
    for block in &mut blocks {
        while o.chi(block)? > target {
            let v = block.min_elem().expect("block nonempty");
            block.remove(v);
        }
        union = union.union(block);
    }
    steps.push((
        "equalize".into(),
        format!("all blocks trimmed to chi = {target}"),
    ));
    if let Ok(out) = dense_cert(
        o,
        LEMMA_RODL,
        &union,
        eps,
        &delta,
        "union of the equalized complete blockade",
        &steps,
    ) {
        return Ok(out);
    }
    // Boundary tie: the equalized union can miss the strict density
    // inequality exactly when 2^rounds equals 1/eps. At desk scale an
    // anticomplete pair at the delta threshold always exists on a
    // non-complete graph; search for the best one.
    steps.push((
        "equalize".into(),
        "union failed the strict density re-check (boundary tie); falling back".into(),
    ));
    if Rat::one() >= threshold {
        let nonadjacent = (0..g.n()).find_map(|u| {
            (u + 1..g.n())
                .find(|&w| !g.has_edge(u, w))
                .map(|w| (u, w))
        });
        if let Some((u, w)) = nonadjacent {
            return pure_pair_cert(
                o,
                LEMMA_RODL,
                PairKind::Anticomplete,
                &VertexSet::singleton(g.n(), u),
                &VertexSet::singleton(g.n(), w),
                &delta,
                "first nonadjacent pair in index order",
                &steps,
            );
        }
    }
    Err(Error::NoVerifiableOutcome {
        op: LEMMA_RODL,
        analysis: format!(
            "equalized blockade union failed the strict density re-check at eps = {eps} \
             (boundary tie) and no anticomplete pair meets delta = {delta}"
        ),
    })
}

/// `(eta, delta, rounds)` from the proof: `eta = 2^-7 eps^2`,
/// `delta = eta^ceil(log2(1/eps))`.
pub fn rodl_delta(eps: &Rat) -> (Rat, Rat, u32) {
    let eta = Rat::pow2_neg(7) * eps * eps;
    let rounds = eps.recip().ceil_log2().max(0) as u32;
    let delta = eta.pow(i64::from(rounds.max(1)));
    (eta, delta, rounds)
}
