//! Greedy max-nonneighborhood ordering inside a chi-dense neighborhood:
//! either trim A a little and shrink B by a chromatic factor of half so that
//! the result is (x,chi)-dense-to, or extract a pure blockade via the dyadic
//! bucket argument; then the combination with the averaging step.

use crate::bitset::VertexSet;
use crate::cert::{chi, con, CertBuilder, Expr, Rel};
use crate::error::{Error, Result};
use crate::graph::PairKind;
use crate::lemmas::search::maximal_component;
use crate::lemmas::{BlockadeTag, LemmaOutcome, Mode, Payload};
use crate::oracle::{DensityMode, Oracle};
use crate::rat::Rat;

pub const LEMMA_SHRINK: &str = "dense_shrink";
pub const LEMMA_COMBINE: &str = "dense_combine";

pub struct ShrinkInput<'a> {
    pub v: usize,
    pub a: &'a VertexSet,
    pub b: &'a VertexSet,
    pub x: &'a Rat,
    pub y: &'a Rat,
    pub mode: Mode,
}

fn check_xy(op: &'static str, x: &Rat, y: &Rat, mode: Mode) -> Result<Option<String>> {
    let hard_cap = Rat::new(1, 2);
    let strict_cap = Rat::pow2_neg(8);
    if !(x.is_positive() && y.is_positive() && x <= y && *y <= hard_cap) {
        return Err(Error::RangeError {
            op,
            param: "x,y",
            value: format!("x = {x}, y = {y}"),
            range: "0 < x <= y <= 1/2 (strict: <= 2^-8)",
        });
    }
    if *y > strict_cap || *x > strict_cap {
        if mode == Mode::Strict {
            return Err(Error::RangeError {
                op,
                param: "x,y",
                value: format!("x = {x}, y = {y}"),
                range: "(0, 2^-8] in strict mode",
            });
        }
        return Ok(Some(format!(
            "threshold rig: x = {x}, y = {y} beyond the strict range (0, 2^-8]"
        )));
    }
    Ok(None)
}

/// Smallest integer `m >= 1` with `4^m x^2 >= y`, the dyadic bucket count
/// `ceil(log2(1/x) - (1/2) log2(1/y))`.
fn bucket_count(x: &Rat, y: &Rat) -> u32 {
    let mut m = 1u32;
    loop {
        if Rat::from_int(4).pow(i64::from(m)) * x * x >= *y {
            return m;
        }
        m += 1;
    }
}

pub fn dense_shrink(o: &Oracle, input: ShrinkInput<'_>) -> Result<LemmaOutcome> {
    let g = o.graph();
    let ShrinkInput { v, a, b, x, y, mode } = input;
    let relaxed = mode.is_relaxed();
    let rig = check_xy(LEMMA_SHRINK, x, y, mode)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    if !a.is_subset_of(g.neighbors(v)) || !b.is_disjoint_from(&g.closed_neighborhood(v)) {
        return Err(Error::Precondition {
            op: LEMMA_SHRINK,
            clause: "A inside N(v) and B outside N[v]".into(),
            witness: None,
        });
    }
    if let Some(p5) = g.find_induced_p5() {
        return Err(Error::P5Found(p5));
    }
    // Structural hypothesis: A is (y,chi)-dense to B.
    let (dense, violator) = o.density_check(y, DensityMode::DenseTo, b, Some(a))?;
    if !dense {
        return Err(Error::Precondition {
            op: LEMMA_SHRINK,
            clause: format!("A is ({y},chi)-dense to B"),
            witness: violator.map(|u| u.to_string()),
        });
    }
    let chi_a = o.chi_rat(a)?;
    let chi_b = o.chi_rat(b)?;
    let two_over_x = Rat::from_int(2) * x.recip();
    let mut waivers: Vec<String> = rig.into_iter().collect();
    if chi_a < two_over_x {
        if mode == Mode::Strict {
            return Err(Error::StrictGate {
                op: LEMMA_SHRINK,
                gate: format!("chi(A) >= 2/x = {two_over_x}, got {chi_a}"),
            });
        }
        waivers.push(format!("magnitude gate chi(A) >= 2/x waived (chi(A) = {chi_a})"));
    }

    // Greedy ordering: v_{j+1} maximizes the chi of its nonneighborhood in
    // the running common-neighborhood of B; ties to the least index.
    let mut order: Vec<usize> = Vec::new();
    let mut domain = b.clone(); // ∩_{i<=j} N(v_i) ∩ B
    let mut e_sets: Vec<VertexSet> = Vec::new();
    let mut remaining = a.clone();
    while !remaining.is_empty() {
        let mut pick = usize::MAX;
        let mut pick_chi = Rat::from_int(-1);
        for u in remaining.iter() {
            let cu = o.chi_rat(&domain.difference(g.neighbors(u)))?;
            if cu > pick_chi {
                pick = u;
                pick_chi = cu;
            }
        }
        order.push(pick);
        e_sets.push(domain.difference(g.neighbors(pick)));
        domain = domain.intersection(g.neighbors(pick));
        remaining.remove(pick);
    }

    let x2_chi_b = x * x * &chi_b;
    let base = |bld: &mut CertBuilder<'_>, waivers: &[String]| {
        bld.set("G", &g.full_set());
        bld.set("v", &VertexSet::singleton(g.n(), v));
        bld.set("A", a);
        bld.set("B", b);
        for w in waivers {
            bld.waive(w);
        }
        bld.step(
            "greedy-order",
            format!("{:?}", order),
        );
    };

    let dense_pair = |xs: &VertexSet,
                      ys: &VertexSet,
                      how: &str,
                      waivers: &[String]|
     -> Result<LemmaOutcome> {
        let mut bld = CertBuilder::new(o, LEMMA_SHRINK, "C");
        bld.kind("dense-to-pair");
        base(&mut bld, waivers);
        bld.set("X", xs);
        bld.set("Y", ys);
        bld.step("candidate", how);
        bld.rel_dense_to("Y", "X", x)?;
        bld.claim_or_waive(
            chi("X"),
            Rel::Ge,
            chi("A").sub(con(two_over_x.clone())),
            relaxed,
        )?;
        bld.claim_or_waive(
            chi("Y"),
            Rel::Ge,
            con(Rat::new(1, 2)).mul(chi("B")),
            relaxed,
        )?;
        Ok(LemmaOutcome {
            cert: bld.build(),
            payload: Payload::Pair {
                kind: PairKind::Mixed,
                a: xs.clone(),
                b: ys.clone(),
            },
        })
    };

    if o.chi_rat(&e_sets[0])? < x2_chi_b {
        return dense_pair(a, b, "E1 already light: X = A, Y = B", &waivers);
    }
    // ell: maximal prefix with chi(E_j) >= x^2 chi(B) (chis are monotone
    // nonincreasing along the greedy order).
    let mut ell = 0;
    for e in &e_sets {
        if o.chi_rat(e)? >= x2_chi_b {
            ell += 1;
        } else {
            break;
        }
    }
    let blocks: Vec<VertexSet> = e_sets[..ell]
        .iter()
        .map(|e| maximal_component(o, e))
        .collect::<Result<_>>()?;
    // P5 chases force the blocks pure; verify.
    let mut kinds = vec![vec![None; blocks.len()]; blocks.len()];
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            let kind = g.classify_pair(&blocks[i], &blocks[j])?;
            if kind == PairKind::Mixed {
                return Err(Error::NoVerifiableOutcome {
                    op: LEMMA_SHRINK,
                    analysis: format!("greedy blocks {i},{j} are mixed; contradicts the P5 chase"),
                });
            }
            kinds[i][j] = Some(kind);
        }
    }

    // Dyadic buckets: each block goes to the least p with
    // chi(B_j) <= 4^p x^2 chi(B); a heavy bucket is a pure blockade in range.
    let q_buckets = bucket_count(x, y);
    let bucket_of = |j: usize| -> Result<u32> {
        let c = o.chi_rat(&blocks[j])?;
        Ok((1..=q_buckets)
            .find(|&p| c <= Rat::from_int(4).pow(i64::from(p)) * &x2_chi_b)
            .unwrap_or(q_buckets))
    };
    for p in 1..=q_buckets {
        let members: Vec<usize> = (0..blocks.len())
            .filter(|&j| bucket_of(j).map(|bp| bp == p).unwrap_or(false))
            .collect();
        let k = members.len();
        if k < 2 {
            continue;
        }
        let kr = Rat::from_usize(k);
        let in_range = &kr * &kr * y >= Rat::one() && kr <= x.recip() * x.recip();
        let chis_ok = members
            .iter()
            .map(|&j| o.chi_rat(&blocks[j]))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .all(|c| c * &kr * &kr >= chi_b);
        if in_range && chis_ok {
            let mut bld = CertBuilder::new(o, LEMMA_SHRINK, "C");
            bld.kind("pure-blockade");
            base(&mut bld, &waivers);
            bld.step("bucket", format!("dyadic bucket p = {p} of {q_buckets}"));
            let mut out_blocks = Vec::with_capacity(k);
            for (bi, &j) in members.iter().enumerate() {
                bld.block(&format!("B{}", bi + 1), &blocks[j]);
                out_blocks.push(blocks[j].clone());
            }
            for bi in 0..k {
                for bj in bi + 1..k {
                    let kind = kinds[members[bi]][members[bj]].unwrap();
                    bld.rel_pair(kind, &format!("B{}", bi + 1), &format!("B{}", bj + 1))?;
                }
            }
            // k in [y^(-1/2), x^(-2)] and chi(B_i) >= k^(-2) chi(B).
            bld.claim(
                Expr::BlockCount.pow(2).mul(con(y.clone())),
                Rel::Ge,
                con(Rat::one()),
            )?;
            bld.claim(Expr::BlockCount, Rel::Le, con(x.recip() * x.recip()))?;
            for bi in 1..=k {
                bld.claim(
                    chi(&format!("B{bi}")).mul(Expr::BlockCount.pow(2)),
                    Rel::Ge,
                    chi("B"),
                )?;
            }
            return Ok(LemmaOutcome {
                cert: bld.build(),
                payload: Payload::Blockade {
                    blocks: out_blocks,
                    tag: BlockadeTag::Pure,
                },
            });
        }
    }

    // Trim: X = A minus the ordering prefix, Y = B minus the peeled sets.
    let mut xs = a.clone();
    let mut ys = b.clone();
    for (j, e) in e_sets.iter().enumerate().take(ell) {
        xs.remove(order[j]);
        ys = ys.difference(e);
    }
    if ys.is_empty() {
        return Err(Error::NoVerifiableOutcome {
            op: LEMMA_SHRINK,
            analysis: "peeling consumed B entirely and no bucket was heavy".into(),
        });
    }
    dense_pair(&xs, &ys, "trim after the greedy peel", &waivers)
}

pub struct CombineInput<'a> {
    pub v: usize,
    pub a: &'a VertexSet,
    pub b: &'a VertexSet,
    pub r: &'a Rat,
    pub x: &'a Rat,
    pub y: &'a Rat,
    pub mode: Mode,
}

/// Chain the averaging step (q = ceil(y^(-1/2))) and the greedy shrink, as
/// in the proof.
pub fn dense_combine(o: &Oracle, input: CombineInput<'_>) -> Result<LemmaOutcome> {
    let CombineInput { v, a, b, r, x, y, mode } = input;
    let relaxed = mode.is_relaxed();
    let rig = check_xy(LEMMA_COMBINE, x, y, mode)?;
    // q = ceil(sqrt(1/y)): smallest integer with q^2 >= 1/y.
    let q = (1..).find(|&m: &usize| Rat::from_usize(m * m) >= y.recip()).unwrap();
    if Rat::from_usize(2 * q) > y.recip() {
        return Err(Error::Precondition {
            op: LEMMA_COMBINE,
            clause: format!("q = ceil(y^-1/2) = {q} must satisfy q <= 1/(2y)"),
            witness: None,
        });
    }
    let chi_a = o.chi_rat(a)?;
    let gate = Rat::from_int(2) * (r * &Rat::from_usize(q)) + Rat::from_int(2) * x.recip();
    let mut waivers: Vec<String> = rig.into_iter().collect();
    if chi_a < gate {
        if mode == Mode::Strict {
            return Err(Error::StrictGate {
                op: LEMMA_COMBINE,
                gate: format!("chi(A) >= 2 q r + 2/x = {gate}, got {chi_a}"),
            });
        }
        waivers.push(format!("magnitude gate chi(A) >= 2qr + 2/x waived"));
    }

    let inner = crate::increment::avg::avg_p5(
        o,
        crate::increment::avg::AvgInput { v, a, b, r, y, q },
    )?;
    let chi_b = o.chi_rat(b)?;
    match inner.payload {
        Payload::Pair { a: p_set, b: q_set, .. } => {
            let shrunk = dense_shrink(
                o,
                ShrinkInput {
                    v,
                    a: &p_set,
                    b: &q_set,
                    x,
                    y,
                    mode,
                },
            )?;
            match shrunk.payload {
                Payload::Pair { a: xs, b: ys, .. } => {
                    let mut bld = CertBuilder::new(o, LEMMA_COMBINE, "C");
                    bld.kind("dense-to-pair");
                    bld.set("G", &o.graph().full_set());
                    bld.set("A", a);
                    bld.set("B", b);
                    bld.set("X", &xs);
                    bld.set("Y", &ys);
                    for w in &waivers {
                        bld.waive(w);
                    }
                    bld.step("chain", "averaging then greedy shrink, both first bullets");
                    bld.rel_dense_to("Y", "X", x)?;
                    // chi(X) >= chi(A) - 2 y^(-1/2) r - 2/x, cross-powered
                    // when the y-root term is needed.
                    let slack = &chi_a - &o.chi_rat(&xs)? - Rat::from_int(2) * x.recip();
                    if slack.is_positive() {
                        // (chi(A) - chi(X) - 2/x)^2 <= 4 r^2 / y
                        bld.claim(
                            chi("A")
                                .sub(chi("X"))
                                .sub(con(Rat::from_int(2) * x.recip()))
                                .pow(2),
                            Rel::Le,
                            con(Rat::from_int(4) * r * r * y.recip()),
                        )?;
                    } else {
                        bld.claim(
                            chi("X").add(con(Rat::from_int(2) * x.recip())),
                            Rel::Ge,
                            chi("A"),
                        )?;
                    }
                    bld.claim_or_waive(
                        chi("Y"),
                        Rel::Ge,
                        con(y * y * Rat::new(1, 4)).mul(chi("B")),
                        relaxed,
                    )?;
                    Ok(LemmaOutcome {
                        cert: bld.build(),
                        payload: Payload::Pair {
                            kind: PairKind::Mixed,
                            a: xs,
                            b: ys,
                        },
                    })
                }
                Payload::Blockade { blocks, .. } => {
                    blockade_passthrough(o, a, b, &chi_b, blocks, x, y, &waivers, relaxed)
                }
                _ => unreachable!(),
            }
        }
        Payload::Blockade { blocks, .. } => {
            blockade_passthrough(o, a, b, &chi_b, blocks, x, y, &waivers, relaxed)
        }
        _ => unreachable!(),
    }
}

#[allow(clippy::too_many_arguments)]
fn blockade_passthrough(
    o: &Oracle,
    a: &VertexSet,
    b: &VertexSet,
    chi_b: &Rat,
    blocks: Vec<VertexSet>,
    x: &Rat,
    y: &Rat,
    waivers: &[String],
    relaxed: bool,
) -> Result<LemmaOutcome> {
    let g = o.graph();
    let mut bld = CertBuilder::new(o, LEMMA_COMBINE, "C");
    bld.kind("pure-blockade");
    bld.set("G", &g.full_set());
    bld.set("A", a);
    bld.set("B", b);
    for w in waivers {
        bld.waive(w);
    }
    bld.step("chain", "pure blockade passed through with k re-checked");
    for (i, block) in blocks.iter().enumerate() {
        bld.block(&format!("B{}", i + 1), block);
    }
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            let kind = g.classify_pair(&blocks[i], &blocks[j])?;
            if kind == PairKind::Mixed {
                return Err(Error::NoVerifiableOutcome {
                    op: LEMMA_COMBINE,
                    analysis: "passed-through blockade has a mixed pair".into(),
                });
            }
            bld.rel_pair(kind, &format!("B{}", i + 1), &format!("B{}", j + 1))?;
        }
    }
    // k in [y^(-1/2), x^(-2)]; chi(B_i) >= k^(-7) chi(B).
    bld.claim_or_waive(
        Expr::BlockCount.pow(2).mul(con(y.clone())),
        Rel::Ge,
        con(Rat::one()),
        relaxed,
    )?;
    bld.claim_or_waive(
        Expr::BlockCount,
        Rel::Le,
        con(x.recip() * x.recip()),
        relaxed,
    )?;
    let k = blocks.len();
    for i in 1..=k {
        let lhs = chi(&format!("B{i}")).mul(Expr::BlockCount.pow(7));
        bld.claim_or_waive(lhs, Rel::Ge, con(chi_b.clone()), relaxed)?;
    }
    Ok(LemmaOutcome {
        cert: bld.build(),
        payload: Payload::Blockade {
            blocks,
            tag: BlockadeTag::Pure,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn complete_to_b_instance() -> (Graph, VertexSet, VertexSet) {
        // v = 0; A = triangle {1,2,3} inside N(v); B = {4,5} (an edge),
        // A complete to B.
        let mut edges = vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (4, 5)];
        for u in [1, 2, 3] {
            for w in [4, 5] {
                edges.push((u, w));
            }
        }
        let g = Graph::from_edges(6, &edges).unwrap();
        assert!(g.is_p5_free());
        (
            g,
            VertexSet::from_iter(6, [1, 2, 3]),
            VertexSet::from_iter(6, [4, 5]),
        )
    }

    #[test]
    fn complete_pair_takes_e1_empty_branch() {
        let (g, a, b) = complete_to_b_instance();
        let o = Oracle::new(g);
        let out = dense_shrink(
            &o,
            ShrinkInput {
                v: 0,
                a: &a,
                b: &b,
                x: &Rat::pow2_neg(8),
                y: &Rat::pow2_neg(8),
                mode: Mode::Relaxed,
            },
        )
        .unwrap();
        assert_eq!(out.cert.kind, "dense-to-pair");
        assert_eq!(out.cert.sets["X"], vec![1, 2, 3]);
        assert_eq!(out.cert.sets["Y"], vec![4, 5]);
        // The chi(Y) >= chi(B)/2 claim holds here with Y = B.
        assert!(out.cert.claims.len() >= 2);
    }

    #[test]
    fn strict_mode_enforces_ranges_and_gate() {
        let (g, a, b) = complete_to_b_instance();
        let o = Oracle::new(g);
        // x = 2^-7 is outside the strict range
        assert!(matches!(
            dense_shrink(
                &o,
                ShrinkInput {
                    v: 0,
                    a: &a,
                    b: &b,
                    x: &Rat::pow2_neg(7),
                    y: &Rat::pow2_neg(7),
                    mode: Mode::Strict,
                }
            ),
            Err(Error::RangeError { .. })
        ));
        // in-range but the chi(A) >= 2/x = 512 gate cannot be met
        assert!(matches!(
            dense_shrink(
                &o,
                ShrinkInput {
                    v: 0,
                    a: &a,
                    b: &b,
                    x: &Rat::pow2_neg(8),
                    y: &Rat::pow2_neg(8),
                    mode: Mode::Strict,
                }
            ),
            Err(Error::StrictGate { .. })
        ));
    }

    #[test]
    fn rig_mode_deterministic_ordering_and_replay() {
        // 12-vertex rig with scaled thresholds y = 1/2, x = 1/4: v plus a
        // 5-clique A and B made of two anticomplete triangles; three
        // A-vertices each miss exactly one B-vertex, so the greedy order
        // peels three singleton nonneighborhoods into a bucketed blockade.
        let mut edges = vec![];
        for u in 1..=5 {
            edges.push((0, u));
            for w in u + 1..=5 {
                edges.push((u, w));
            }
        }
        edges.extend([(6, 7), (6, 8), (7, 8), (9, 10), (9, 11), (10, 11)]);
        let misses = |u: usize, w: usize| {
            (u == 1 && w == 6) || (u == 2 && w == 9) || (u == 3 && w == 7)
        };
        for u in 1..=5usize {
            for w in 6..=11usize {
                if !misses(u, w) {
                    edges.push((u, w));
                }
            }
        }
        let g = Graph::from_edges(12, &edges).unwrap();
        assert!(g.is_p5_free(), "rig instance must be P5-free");
        let o = Oracle::new(g);
        let a = VertexSet::from_iter(12, 1..=5);
        let b = VertexSet::from_iter(12, 6..=11);
        let run = || {
            dense_shrink(
                &o,
                ShrinkInput {
                    v: 0,
                    a: &a,
                    b: &b,
                    x: &Rat::new(1, 4),
                    y: &Rat::new(1, 2),
                    mode: Mode::Relaxed,
                },
            )
            .unwrap()
        };
        let first = run();
        let second = run();
        assert_eq!(first.cert.to_json(), second.cert.to_json());
        assert!(first.cert.trace.iter().any(|t| t.step == "greedy-order"));
        assert_eq!(first.cert.kind, "pure-blockade");
    }

    #[test]
    fn combine_chains_first_bullets() {
        let (g, a, b) = complete_to_b_instance();
        let o = Oracle::new(g);
        // q = ceil(y^(-1/2)) = 16 at y = 2^-8, so r must keep qr below
        // chi(A) = 3; A is complete to B so any positive r works.
        let out = dense_combine(
            &o,
            CombineInput {
                v: 0,
                a: &a,
                b: &b,
                r: &Rat::new(1, 8),
                x: &Rat::pow2_neg(8),
                y: &Rat::pow2_neg(8),
                mode: Mode::Relaxed,
            },
        )
        .unwrap();
        assert_eq!(out.cert.kind, "dense-to-pair");
    }

    #[test]
    fn combine_q_guard() {
        let (g, a, b) = complete_to_b_instance();
        let o = Oracle::new(g);
        // y = 1/3: q = ceil(sqrt(3)) = 2 > 1/(2y) = 3/2 -> guard error.
        assert!(matches!(
            dense_combine(
                &o,
                CombineInput {
                    v: 0,
                    a: &a,
                    b: &b,
                    r: &Rat::one(),
                    x: &Rat::new(1, 3),
                    y: &Rat::new(1, 3),
                    mode: Mode::Relaxed,
                }
            ),
            Err(Error::Precondition { .. })
        ));
    }
}
