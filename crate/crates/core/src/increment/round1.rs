//! Round one of chromatic density increment: a single density step and the
//! driver producing a pure or (x,chi)-dense blockade with the round-one
//! exponent bounds.

use crate::bitset::VertexSet;
use crate::cert::{chi, con, CertBuilder, Expr, Rel};
use crate::error::{Error, Result};
use crate::graph::PairKind;
use crate::increment::dense1::{dense_combine, CombineInput};
use crate::increment::ledger;
use crate::lemmas::search::{best_pure_pair, equal_chi_partition};
use crate::lemmas::{BlockadeTag, LemmaOutcome, Mode, Payload};
use crate::oracle::{DensityMode, Oracle};
use crate::rat::Rat;

pub const LEMMA_STEP: &str = "incre1_step";
pub const LEMMA_ROUND: &str = "round1";

pub struct StepInput<'a> {
    pub x: &'a Rat,
    pub y: &'a Rat,
    pub mode: Mode,
}

/// One increment step on a (y,chi)-dense P5-free graph: either the density
/// parameter squares, or a dense-to pair with nearly full chi on one side
/// appears, or a pure blockade falls out.
pub fn incre1_step(o: &Oracle, input: StepInput<'_>) -> Result<LemmaOutcome> {
    let g = o.graph();
    let StepInput { x, y, mode } = input;
    let relaxed = mode.is_relaxed();
    let strict_cap = Rat::pow2_neg(8);
    if !(x.is_positive() && x <= y && *y <= Rat::new(1, 2)) {
        return Err(Error::RangeError {
            op: LEMMA_STEP,
            param: "x,y",
            value: format!("x = {x}, y = {y}"),
            range: "0 < x <= y <= 1/2 (strict: <= 2^-8)",
        });
    }
    let mut waivers: Vec<String> = Vec::new();
    if *y > strict_cap {
        if mode == Mode::Strict {
            return Err(Error::RangeError {
                op: LEMMA_STEP,
                param: "y",
                value: y.to_string(),
                range: "(0, 2^-8] in strict mode",
            });
        }
        waivers.push(format!("threshold rig: y = {y} beyond the strict range"));
    }
    if let Some(p5) = g.find_induced_p5() {
        return Err(Error::P5Found(p5));
    }
    let all = g.full_set();
    let chi_g = o.chi_rat(&all)?;
    // Structural hypothesis: G is (y,chi)-dense.
    let (dense, violator) = o.density_check(y, DensityMode::SelfDense, &all, None)?;
    if !dense {
        return Err(Error::Precondition {
            op: LEMMA_STEP,
            clause: format!("G is ({y},chi)-dense"),
            witness: violator.map(|u| u.to_string()),
        });
    }
    if chi_g < x.recip() * x.recip() {
        if mode == Mode::Strict {
            return Err(Error::StrictGate {
                op: LEMMA_STEP,
                gate: format!("chi(G) >= x^-2"),
            });
        }
        waivers.push("magnitude gate chi(G) >= x^-2 waived".into());
    }

    // Bullet 1: already (y^2,chi)-dense.
    let y2 = y * y;
    let (denser, violator) = o.density_check(&y2, DensityMode::SelfDense, &all, None)?;
    if denser {
        let mut bld = CertBuilder::new(o, LEMMA_STEP, "C");
        bld.kind("self-dense");
        bld.set("G", &all);
        for w in &waivers {
            bld.waive(w);
        }
        bld.step("candidate", "G is already (y^2,chi)-dense");
        bld.rel_self_dense("G", &y2)?;
        return Ok(LemmaOutcome {
            cert: bld.build(),
            payload: Payload::Dense {
                f: all,
                eps: y2,
            },
        });
    }
    let v = violator.expect("non-dense graph has a violator");
    let a = g.neighbors(v).clone();
    let b = all.difference(&g.closed_neighborhood(v));
    let r = y * &chi_g;
    let inner = dense_combine(
        o,
        CombineInput {
            v,
            a: &a,
            b: &b,
            r: &r,
            x,
            y,
            mode,
        },
    )?;
    match inner.payload {
        Payload::Pair { a: xs, b: ys, .. } => {
            let mut bld = CertBuilder::new(o, LEMMA_STEP, "C");
            bld.kind("dense-to-pair");
            bld.set("G", &all);
            bld.set("X", &xs);
            bld.set("Y", &ys);
            for w in &waivers {
                bld.waive(w);
            }
            bld.step("pivot", format!("density violator v = {v}"));
            bld.rel_dense_to("Y", "X", x)?;
            // chi(X) >= (1 - 3 y^(1/2)) chi(G): (chi(G) - chi(X))^2 <= 9 y chi(G)^2.
            let gap = &chi_g - &o.chi_rat(&xs)?;
            if gap.is_positive() {
                bld.claim_or_waive(
                    chi("G").sub(chi("X")).pow(2),
                    Rel::Le,
                    con(Rat::from_int(9) * y).mul(chi("G").pow(2)),
                    relaxed,
                )?;
            } else {
                bld.claim(chi("X"), Rel::Ge, chi("G"))?;
            }
            bld.claim_or_waive(
                chi("Y"),
                Rel::Ge,
                con(y.pow(4) * Rat::new(1, 4)).mul(chi("G")),
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
            let mut bld = CertBuilder::new(o, LEMMA_STEP, "C");
            bld.kind("pure-blockade");
            bld.set("G", &all);
            for w in &waivers {
                bld.waive(w);
            }
            bld.step("pivot", format!("density violator v = {v}"));
            for (i, block) in blocks.iter().enumerate() {
                bld.block(&format!("B{}", i + 1), block);
            }
            for i in 0..blocks.len() {
                for j in i + 1..blocks.len() {
                    let kind = g.classify_pair(&blocks[i], &blocks[j])?;
                    if kind == PairKind::Mixed {
                        return Err(Error::NoVerifiableOutcome {
                            op: LEMMA_STEP,
                            analysis: "blockade pair mixed".into(),
                        });
                    }
                    bld.rel_pair(kind, &format!("B{}", i + 1), &format!("B{}", j + 1))?;
                }
            }
            bld.claim_or_waive(
                Expr::BlockCount.pow(2).mul(con(y.clone())),
                Rel::Ge,
                con(Rat::one()),
                relaxed,
            )?;
            bld.claim_or_waive(Expr::BlockCount, Rel::Le, con(x.recip() * x.recip()), relaxed)?;
            for i in 1..=blocks.len() {
                bld.claim_or_waive(
                    chi(&format!("B{i}")).mul(Expr::BlockCount.pow(11)),
                    Rel::Ge,
                    chi("G"),
                    relaxed,
                )?;
            }
            Ok(LemmaOutcome {
                cert: bld.build(),
                payload: Payload::Blockade {
                    blocks,
                    tag: BlockadeTag::Pure,
                },
            })
        }
        _ => unreachable!(),
    }
}

/// Round-one driver: a pure or (x,chi)-dense blockade with
/// `k in [2, 1/x]` and `chi(B_i) >= k^-a chi(G)` for the round-one exponent
/// `a = 200`. Strict mode enforces the full magnitude gates; relaxed accepts any
/// `x in (0, 1/2)` and waives the gates.
pub fn round1(o: &Oracle, x: &Rat, mode: Mode) -> Result<LemmaOutcome> {
    let g = o.graph();
    let a1 = ledger::ledger().a1;
    let strict_cap = Rat::pow2_neg(a1 as u32);
    if mode == Mode::Strict {
        if !(x.is_positive() && *x <= strict_cap) {
            return Err(Error::RangeError {
                op: LEMMA_ROUND,
                param: "x",
                value: x.to_string(),
                range: "(0, 2^-200] in strict mode",
            });
        }
        let chi_g = o.chi_rat(&g.full_set())?;
        if chi_g.clone().pow(1) < x.recip().pow(a1 as i64) {
            return Err(Error::StrictGate {
                op: LEMMA_ROUND,
                gate: "chi(G) >= x^-200".into(),
            });
        }
    } else if !(x.is_positive() && *x < Rat::new(1, 2)) {
        return Err(Error::RangeError {
            op: LEMMA_ROUND,
            param: "x",
            value: x.to_string(),
            range: "(0, 1/2) in relaxed mode",
        });
    }
    if let Some(p5) = g.find_induced_p5() {
        return Err(Error::P5Found(p5));
    }
    let all = g.full_set();
    let chi_g = o.chi_rat(&all)?;
    let relaxed = mode.is_relaxed();
    let mut steps: Vec<(String, String)> = Vec::new();
    if relaxed && *x > strict_cap {
        steps.push((
            "waiver".into(),
            format!("x = {x} beyond the strict range (0, 2^-200]"),
        ));
    }

    let eps0 = Rat::pow2_neg(32);
    let delta0 = Rat::pow2_neg(71);
    let inner = crate::lemmas::chirdl::pure_or_dense(o, &eps0, &delta0)?;
    steps.push(("pure-or-dense".into(), inner.cert.kind.clone()));
    match inner.payload {
        Payload::PurePair { kind: _, a, b } => {
            blockade_cert(o, x, a1, vec![a, b], BlockadeKindHint::Pure, &steps, relaxed)
        }
        Payload::Dense { f, eps } => {
            // Minimal-y bookkeeping: the found subgraph realizes the density
            // parameter eps at chi(F) >= eps^3 chi(G); on desk instances the
            // candidate set below eps is vacuous.
            steps.push((
                "minimal-y".into(),
                format!("using the dense subgraph at y = {eps}; chi(F) = {}", o.chi(&f)?),
            ));
            let ell_target = {
                // ceil(x^(-1/2)): smallest m with m^2 >= 1/x
                (1usize..).find(|&m| Rat::from_usize(m * m) >= x.recip()).unwrap()
            };
            if Rat::from_usize(o.chi(&f)?) >= Rat::from_usize(2 * ell_target) && ell_target >= 2 {
                let parts = equal_chi_partition(o, &f, ell_target)?;
                // The partition must genuinely be an (x,chi)-dense blockade.
                let mut all_dense = true;
                'outer: for i in 0..parts.len() {
                    for j in i + 1..parts.len() {
                        if !o.is_dense_to(x, &parts[i], &parts[j])? {
                            all_dense = false;
                            break 'outer;
                        }
                    }
                }
                if all_dense {
                    steps.push((
                        "equal-chi-partition".into(),
                        format!("{} blocks inside the dense subgraph", parts.len()),
                    ));
                    return blockade_cert(
                        o,
                        x,
                        a1,
                        parts,
                        BlockadeKindHint::Dense,
                        &steps,
                        relaxed,
                    );
                }
                steps.push((
                    "equal-chi-partition".into(),
                    "partition failed the dense-to re-check; falling back".into(),
                ));
            } else {
                steps.push((
                    "equal-chi-partition".into(),
                    "dense subgraph too light to split; falling back".into(),
                ));
            }
            // Fallback: best pure pair across the whole graph.
            let thr = x.pow(a1 as i64).min(Rat::one()) * &chi_g;
            let found = best_pure_pair(o, &all, |ca, cb| *ca >= thr && *cb >= thr)?;
            match found {
                Some((a, b, _kind)) => blockade_cert(
                    o,
                    x,
                    a1,
                    vec![a, b],
                    BlockadeKindHint::Pure,
                    &steps,
                    relaxed,
                ),
                None => Err(Error::NoVerifiableOutcome {
                    op: LEMMA_ROUND,
                    analysis: "graph too small for any blockade of length 2".into(),
                }),
            }
        }
        _ => unreachable!(),
    }
}

enum BlockadeKindHint {
    Pure,
    Dense,
}

fn blockade_cert(
    o: &Oracle,
    x: &Rat,
    a1: u64,
    blocks: Vec<VertexSet>,
    hint: BlockadeKindHint,
    steps: &[(String, String)],
    relaxed: bool,
) -> Result<LemmaOutcome> {
    let g = o.graph();
    let mut bld = CertBuilder::new(o, LEMMA_ROUND, "C");
    let (kind_str, tag) = match &hint {
        BlockadeKindHint::Pure => ("pure-blockade", BlockadeTag::Pure),
        BlockadeKindHint::Dense => ("dense-blockade", BlockadeTag::Dense(x.clone())),
    };
    bld.kind(kind_str);
    bld.set("G", &g.full_set());
    for (s, d) in steps {
        bld.step(s, d);
    }
    for (i, block) in blocks.iter().enumerate() {
        bld.block(&format!("B{}", i + 1), block);
    }
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            match hint {
                BlockadeKindHint::Pure => {
                    let kind = g.classify_pair(&blocks[i], &blocks[j])?;
                    if kind == PairKind::Mixed {
                        return Err(Error::NoVerifiableOutcome {
                            op: LEMMA_ROUND,
                            analysis: "pure blockade has a mixed pair".into(),
                        });
                    }
                    bld.rel_pair(kind, &format!("B{}", i + 1), &format!("B{}", j + 1))?;
                }
                BlockadeKindHint::Dense => {
                    bld.rel_dense_to(&format!("B{}", i + 1), &format!("B{}", j + 1), x)?;
                }
            }
        }
    }
    let k = blocks.len();
    bld.claim(Expr::BlockCount, Rel::Ge, con(Rat::from_int(2)))?;
    bld.claim_or_waive(Expr::BlockCount, Rel::Le, con(x.recip()), relaxed)?;
    for i in 1..=k {
        bld.claim(
            chi(&format!("B{i}")).mul(Expr::BlockCount.pow(a1 as u32)),
            Rel::Ge,
            chi("G"),
        )?;
    }
    Ok(LemmaOutcome {
        cert: bld.build(),
        payload: Payload::Blockade { blocks, tag },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::*;
    use crate::graph::Graph;

    #[test]
    fn k4_is_already_denser() {
        let o = Oracle::new(Graph::complete(4));
        let out = incre1_step(
            &o,
            StepInput {
                x: &Rat::pow2_neg(8),
                y: &Rat::pow2_neg(8),
                mode: Mode::Relaxed,
            },
        )
        .unwrap();
        assert_eq!(out.cert.kind, "self-dense");
    }

    #[test]
    fn strict_gate_on_desk_instance() {
        let o = Oracle::new(Graph::complete(4));
        assert!(matches!(
            incre1_step(
                &o,
                StepInput {
                    x: &Rat::pow2_neg(8),
                    y: &Rat::pow2_neg(8),
                    mode: Mode::Strict,
                }
            ),
            Err(Error::StrictGate { .. })
        ));
    }

    #[test]
    fn density_precondition_fails_with_violator() {
        let o = Oracle::new(disjoint_copies(&Graph::complete(3), 2));
        let err = incre1_step(
            &o,
            StepInput {
                x: &Rat::pow2_neg(8),
                y: &Rat::pow2_neg(8),
                mode: Mode::Relaxed,
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::Precondition { .. }));
    }

    #[test]
    fn rig_second_bullet_path() {
        // Join of K6 with a nonedge: chi = 7; at y = 1/4 the graph is
        // (y,chi)-dense (nonneighborhoods have chi 1 < 7/4) but not
        // (y^2,chi)-dense (1 >= 7/16), driving the pivot path into the
        // combination step.
        let g = join(&Graph::complete(6), &Graph::edgeless(2));
        assert!(g.is_p5_free());
        let o = Oracle::new(g);
        let out = incre1_step(
            &o,
            StepInput {
                x: &Rat::new(1, 8),
                y: &Rat::new(1, 4),
                mode: Mode::Relaxed,
            },
        )
        .unwrap();
        assert_eq!(out.cert.kind, "dense-to-pair");
        assert_eq!(out.cert.sets["X"].len(), 6);
    }

    #[test]
    fn round1_two_triangles() {
        let o = Oracle::new(disjoint_copies(&Graph::complete(3), 2));
        let out = round1(&o, &Rat::new(1, 4), Mode::Relaxed).unwrap();
        assert_eq!(out.cert.kind, "pure-blockade");
        let Payload::Blockade { blocks, .. } = &out.payload else {
            panic!()
        };
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[0].to_vec(), vec![0, 1, 2]);
        assert_eq!(blocks[1].to_vec(), vec![3, 4, 5]);
    }

    #[test]
    fn round1_k6_partition_branch() {
        let o = Oracle::new(Graph::complete(6));
        let out = round1(&o, &Rat::new(1, 4), Mode::Relaxed).unwrap();
        assert_eq!(out.cert.kind, "dense-blockade");
        let Payload::Blockade { blocks, .. } = &out.payload else {
            panic!()
        };
        assert_eq!(blocks.len(), 2);
    }

    #[test]
    fn round1_range_error() {
        let o = Oracle::new(Graph::complete(3));
        assert!(matches!(
            round1(&o, &Rat::new(3, 4), Mode::Relaxed),
            Err(Error::RangeError { .. })
        ));
    }
}
