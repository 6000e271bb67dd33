//! Round two of chromatic density increment: from a chi-dense graph to a
//! complete blockade, through dense blockades, the midway lemma, and the
//! clique-extraction endgame.

use crate::bitset::VertexSet;
use crate::cert::{chi, con, CertBuilder, Expr, Rel};
use crate::error::{Error, Result};
use crate::graph::{PairKind, Purity};
use crate::increment::extract::{anticonn_witness, averaged_extract, AveragedInput};
use crate::increment::ledger;
use crate::increment::midway::{midway_blockade, MidwayParams};
use crate::lemmas::search::{equal_chi_partition, maximal_component};
use crate::lemmas::{BlockadeTag, LemmaOutcome, Mode, Payload};
use crate::oracle::{DensityMode, Oracle};
use crate::rat::Rat;

pub const LEMMA_STEP: &str = "incre2_step";
pub const LEMMA_ROUND: &str = "round2";

pub struct Incre2Input<'a> {
    pub a_sets: &'a [VertexSet],
    pub y: &'a Rat,
    pub b: u64,
    pub mode: Mode,
}

/// One round-two increment on a (y,chi)-dense blockade: a denser blockade
/// inside the last block, a transversal complete pair structure, or a
/// complete blockade inside some block.
pub fn incre2_step(o: &Oracle, input: Incre2Input<'_>) -> Result<LemmaOutcome> {
    let g = o.graph();
    let Incre2Input { a_sets, y, b, mode } = input;
    let relaxed = mode.is_relaxed();
    if !(y.is_positive() && *y <= Rat::new(1, 2)) {
        return Err(Error::RangeError {
            op: LEMMA_STEP,
            param: "y",
            value: y.to_string(),
            range: "(0, 1/2] (strict: <= 2^-8)",
        });
    }
    let mut waivers: Vec<String> = Vec::new();
    if *y > Rat::pow2_neg(8) {
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
    let ell = a_sets.len();
    if ell == 0 || a_sets.iter().any(|s| s.is_empty()) {
        return Err(Error::EmptySet);
    }
    if let Some(p5) = g.find_induced_p5() {
        return Err(Error::P5Found(p5));
    }
    // Structural hypothesis: the blockade is (y,chi)-dense.
    for i in 0..ell {
        for j in i + 1..ell {
            let (ok, viol) =
                o.density_check(y, DensityMode::DenseTo, &a_sets[i], Some(&a_sets[j]))?;
            if !ok {
                return Err(Error::Precondition {
                    op: LEMMA_STEP,
                    clause: format!("A_{} is (y,chi)-dense to A_{}", j + 1, i + 1),
                    witness: viol.map(|v| v.to_string()),
                });
            }
        }
    }
    // Magnitude gates.
    if Rat::from_usize(ell).pow(4) * y < Rat::one() {
        if mode == Mode::Strict {
            return Err(Error::StrictGate {
                op: LEMMA_STEP,
                gate: "ell >= y^(-1/4)".into(),
            });
        }
        waivers.push("magnitude gate ell >= y^(-1/4) waived".into());
    }
    let last = &a_sets[ell - 1];
    let chi_last = o.chi_rat(last)?;
    {
        let gate_exp = (b * b).min(512) as i64;
        if chi_last < y.recip().pow(gate_exp) {
            if mode == Mode::Strict {
                return Err(Error::StrictGate {
                    op: LEMMA_STEP,
                    gate: "chi(A_ell) >= y^(-b^2)".into(),
                });
            }
            waivers.push("magnitude gate chi(A_ell) >= y^(-b^2) waived".into());
        }
    }

    // Midway inside the last block at eps = y^b.
    let (sub, map) = g.induced_with_map(last)?;
    let sub_o = Oracle::with_budget(sub, o.budget());
    let eps_mid = y.pow(b.min(30) as i64).max(Rat::pow2_neg(30)).min(Rat::new(1, 2));
    let mid = midway_blockade(
        &sub_o,
        MidwayParams {
            eps: &eps_mid,
            b: b.max(1),
            eh_exponent: Rat::from_int(4),
            mode,
        },
    )?;
    let n = g.n();
    let Payload::Blockade {
        blocks: mid_blocks,
        tag,
    } = mid.payload
    else {
        unreachable!()
    };
    let mid_blocks: Vec<VertexSet> = mid_blocks
        .iter()
        .map(|s| crate::lemmas::chirdl::remap(&map, s, n))
        .collect();

    if matches!(tag, BlockadeTag::Dense(_)) {
        // Bullet 1: a denser blockade inside the last block.
        let mut bld = CertBuilder::new(o, LEMMA_STEP, "C");
        bld.kind("dense-blockade-increment");
        bld.set("G", &g.full_set());
        bld.set("A", last);
        for w in &waivers {
            bld.waive(w);
        }
        bld.step("midway", "dense branch inside the last block");
        for (i, blk) in mid_blocks.iter().enumerate() {
            bld.block(&format!("D{}", i + 1), blk);
        }
        for i in 0..mid_blocks.len() {
            for j in i + 1..mid_blocks.len() {
                bld.rel_dense_to(&format!("D{}", i + 1), &format!("D{}", j + 1), &eps_mid)?;
            }
        }
        bld.claim_or_waive(
            Expr::BlockCount.mul(con(y.pow_clamped(u128::from(b), 64))),
            Rel::Ge,
            con(Rat::one()),
            relaxed,
        )?;
        let yb2 = y.pow_clamped(u128::from(b) * u128::from(b), 128);
        for i in 1..=mid_blocks.len() {
            bld.claim_or_waive(
                chi(&format!("D{i}")),
                Rel::Ge,
                con(yb2.clone()).mul(chi("A")),
                relaxed,
            )?;
        }
        return Ok(LemmaOutcome {
            cert: bld.build(),
            payload: Payload::Blockade {
                blocks: mid_blocks,
                tag: BlockadeTag::Dense(eps_mid),
            },
        });
    }

    // Anticomplete branch: connectify, check the mixed lemma, extract
    // anticonnected cores, then run the averaged extraction.
    let d_blocks: Vec<VertexSet> = mid_blocks
        .iter()
        .map(|blk| maximal_component(o, blk))
        .collect::<Result<_>>()?;
    for j in 0..ell - 1 {
        for v in a_sets[j].iter() {
            let mixed = d_blocks
                .iter()
                .filter(|blk| {
                    !blk.contains(v)
                        && g.mixed_on(v, blk).map(|p| p == Purity::Mixed).unwrap_or(false)
                })
                .count();
            if mixed >= 2 {
                return Err(Error::NoVerifiableOutcome {
                    op: LEMMA_STEP,
                    analysis: format!(
                        "vertex {v} mixed on two anticomplete connected blocks; \
                         contradicts the mixed lemma"
                    ),
                });
            }
        }
    }
    let mut cores: Vec<VertexSet> = Vec::new();
    for blk in &d_blocks {
        match anticonn_witness_within(o, y, blk)? {
            Some(core) => cores.push(core),
            None => {
                // No heavy anticonnected subset: the grouping lemma gives a
                // complete blockade inside this block (bullet 3).
                let (sub, map) = g.induced_with_map(blk)?;
                let sub_o = Oracle::with_budget(sub, o.budget());
                let grouped =
                    crate::increment::extract::anticonn_or_complete(&sub_o, &y.clone().min(Rat::new(1, 8)))?;
                let Payload::Blockade { blocks, .. } = grouped.payload else {
                    unreachable!()
                };
                let blocks: Vec<VertexSet> = blocks
                    .iter()
                    .map(|s| crate::lemmas::chirdl::remap(&map, s, n))
                    .collect();
                return complete_blockade_cert(
                    o,
                    LEMMA_STEP,
                    "complete blockade inside an anticomplete block",
                    last,
                    blocks,
                    y,
                    b,
                    &waivers,
                    relaxed,
                );
            }
        }
    }
    // k = ceil(y^(-1/2)) cores, or as many as available.
    let want = (1usize..).find(|&m| Rat::from_usize(m * m) >= y.recip()).unwrap();
    let k = want.min(cores.len());
    let cores = &cores[..k];
    let rs: Vec<Rat> = a_sets[..ell - 1]
        .iter()
        .map(|a| Ok(y * &o.chi_rat(a)?))
        .collect::<Result<_>>()?;
    let front = &a_sets[..ell - 1];
    if front.is_empty() {
        return Err(Error::Precondition {
            op: LEMMA_STEP,
            clause: "blockade has at least two blocks".into(),
            witness: None,
        });
    }
    let averaged = averaged_extract(
        o,
        AveragedInput {
            a_sets: front,
            blocks: cores,
            rs: &rs,
        },
    )?;
    match averaged.payload {
        Payload::Blockade { blocks, .. } => complete_blockade_cert(
            o,
            LEMMA_STEP,
            "complete blockade from the averaged extraction",
            last,
            blocks,
            y,
            b,
            &waivers,
            relaxed,
        ),
        Payload::AveragedPartners {
            block_index,
            indices,
            partners,
        } => {
            let b_last = cores[block_index].clone();
            let mut bld = CertBuilder::new(o, LEMMA_STEP, "C");
            bld.kind("transversal-complete");
            bld.set("G", &g.full_set());
            bld.set("A", last);
            bld.set("Bl", &b_last);
            for w in &waivers {
                bld.waive(w);
            }
            bld.step(
                "averaged",
                format!("pigeonholed core {} with {} partners", block_index + 1, indices.len()),
            );
            let yb21 = y.pow_clamped(u128::from(b) * u128::from(b) + 1, 128);
            bld.claim_or_waive(chi("Bl"), Rel::Ge, con(yb21).mul(chi("A")), relaxed)?;
            // |I| >= (1 - 2 y^(1/4)) ell: (ell - |I|)^4 <= 16 y ell^4.
            let gap = ell - 1 - indices.len();
            bld.claim_or_waive(
                con(Rat::from_usize(gap)).pow(4),
                Rel::Le,
                con(Rat::from_int(16) * y * Rat::from_usize(ell).pow(4)),
                relaxed,
            )?;
            for (pos, &j) in indices.iter().enumerate() {
                let name = format!("Ap{}", j + 1);
                bld.set(&name, &partners[pos]);
                if !partners[pos].is_empty() {
                    bld.rel_pair(PairKind::Complete, &name, "Bl")?;
                    // chi(A'_j) >= (1 - 3 y^(1/2)) chi(A_j):
                    // (chi(A_j) - chi(A'_j))^2 <= 9 y chi(A_j)^2.
                    let orig = format!("A{}", j + 1);
                    bld.set(&orig, &a_sets[j]);
                    bld.claim_or_waive(
                        chi(&orig).sub(chi(&name)).pow(2),
                        Rel::Le,
                        con(Rat::from_int(9) * y).mul(chi(&orig).pow(2)),
                        relaxed,
                    )?;
                }
            }
            Ok(LemmaOutcome {
                cert: bld.build(),
                payload: Payload::AveragedPartners {
                    block_index,
                    indices,
                    partners,
                },
            })
        }
        _ => unreachable!(),
    }
}

fn anticonn_witness_within(o: &Oracle, y: &Rat, within: &VertexSet) -> Result<Option<VertexSet>> {
    anticonn_witness(o, y, within)
}

#[allow(clippy::too_many_arguments)]
fn complete_blockade_cert(
    o: &Oracle,
    lemma: &str,
    how: &str,
    ambient: &VertexSet,
    blocks: Vec<VertexSet>,
    y: &Rat,
    b: u64,
    waivers: &[String],
    relaxed: bool,
) -> Result<LemmaOutcome> {
    let mut bld = CertBuilder::new(o, lemma, "C");
    bld.kind("complete-blockade");
    bld.set("G", &o.graph().full_set());
    bld.set("A", ambient);
    for w in waivers {
        bld.waive(w);
    }
    bld.step("candidate", how);
    for (i, blk) in blocks.iter().enumerate() {
        bld.block(&format!("E{}", i + 1), blk);
    }
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            bld.rel_pair(PairKind::Complete, &format!("E{}", i + 1), &format!("E{}", j + 1))?;
        }
    }
    bld.claim_or_waive(
        Expr::BlockCount.pow(4).mul(con(y.clone())),
        Rel::Ge,
        con(Rat::one()),
        relaxed,
    )?;
    let yb21 = y.pow_clamped(u128::from(b) * u128::from(b) + 1, 128);
    for i in 1..=blocks.len() {
        bld.claim_or_waive(
            chi(&format!("E{i}")),
            Rel::Ge,
            con(yb21.clone()).mul(chi("A")),
            relaxed,
        )?;
    }
    Ok(LemmaOutcome {
        cert: bld.build(),
        payload: Payload::Blockade {
            blocks,
            tag: BlockadeTag::Complete,
        },
    })
}

/// Round-two driver: on an (eps,chi)-dense P5-free graph, produce a complete
/// blockade with `k >= eps^(-1/16)` and `chi(B_i) >= k^(-a2) chi(G)`.
pub fn round2(o: &Oracle, eps: &Rat, mode: Mode) -> Result<LemmaOutcome> {
    let g = o.graph();
    let lg = ledger::ledger();
    if mode == Mode::Strict {
        if !(eps.is_positive() && *eps <= Rat::pow2_neg(32)) {
            return Err(Error::RangeError {
                op: LEMMA_ROUND,
                param: "eps",
                value: eps.to_string(),
                range: "(0, 2^-32] in strict mode",
            });
        }
        // chi(G) >= eps^-a2 needs chi beyond 2^(32 a2); unreachable for any
        // representable chromatic number, so the gate always trips.
        return Err(Error::StrictGate {
            op: LEMMA_ROUND,
            gate: format!(
                "chi(G) >= eps^-a2 with a2 = {}; infeasible at desk scale",
                lg.a2
            ),
        });
    }
    if !(eps.is_positive() && *eps <= Rat::new(1, 16)) {
        return Err(Error::RangeError {
            op: LEMMA_ROUND,
            param: "eps",
            value: eps.to_string(),
            range: "(0, 1/16] so that q = floor(eps^(-1/2)/2) >= 2",
        });
    }
    if let Some(p5) = g.find_induced_p5() {
        return Err(Error::P5Found(p5));
    }
    let all = g.full_set();
    let (dense, violator) = o.density_check(eps, DensityMode::SelfDense, &all, None)?;
    if !dense {
        return Err(Error::Precondition {
            op: LEMMA_ROUND,
            clause: format!("G is ({eps},chi)-dense"),
            witness: violator.map(|v| v.to_string()),
        });
    }
    // The blockade density parameter: sqrt(eps), which must be rational for
    // exact checks (the default 1/16 gives 1/4).
    let y = eps.sqrt_exact().ok_or(Error::RangeError {
        op: LEMMA_ROUND,
        param: "eps",
        value: eps.to_string(),
        range: "a square of a rational in relaxed mode (e.g. 1/16)",
    })?;
    // q = floor((1/2) eps^(-1/2)) = floor(1/(2y)).
    let q_big = (y.recip() * Rat::new(1, 2)).floor();
    let q = usize::try_from(u64::try_from(q_big).unwrap_or(2)).unwrap_or(2).max(2);
    let chi_g = o.chi_rat(&all)?;
    if chi_g < Rat::from_usize(2 * q) {
        return Err(Error::Precondition {
            op: LEMMA_ROUND,
            clause: format!("chi(G) >= 2q = {} for the equal-chi partition", 2 * q),
            witness: Some(chi_g.to_string()),
        });
    }
    let parts = equal_chi_partition(o, &all, q)?;
    let mut steps: Vec<(String, String)> = vec![(
        "partition".into(),
        format!("q = {q} parts by greedy equal-chi assignment"),
    )];
    // The partition is a (sqrt(eps),chi)-dense blockade; verify.
    for i in 0..parts.len() {
        for j in i + 1..parts.len() {
            let (ok, viol) = o.density_check(&y, DensityMode::DenseTo, &parts[i], Some(&parts[j]))?;
            if !ok {
                return Err(Error::NoVerifiableOutcome {
                    op: LEMMA_ROUND,
                    analysis: format!(
                        "equal-chi partition is not (sqrt(eps),chi)-dense; violator {}",
                        viol.unwrap()
                    ),
                });
            }
        }
    }
    // Minimal-y search over desk-realizable parameters: the partition
    // qualifies only when q >= 8 y^(-1/4); on desk instances this is
    // vacuous, which the trace records, and the clique endgame runs.
    let qualifies = Rat::from_usize(q).pow(4) * &y >= Rat::from_int(4096);
    if qualifies {
        steps.push(("minimal-y".into(), format!("blockade qualifies at y = {y}")));
        let out = incre2_step(
            o,
            Incre2Input {
                a_sets: &parts,
                y: &y,
                b: lg.b_mid.min(4),
                mode,
            },
        )?;
        if let Payload::Blockade {
            tag: BlockadeTag::Complete,
            ..
        } = &out.payload
        {
            return finish_round2(o, eps, out, steps);
        }
        steps.push((
            "minimal-y".into(),
            "increment step did not terminate in a complete blockade; endgame".into(),
        ));
    } else {
        steps.push((
            "minimal-y".into(),
            "search vacuous at desk scale; proceeding to the clique endgame".into(),
        ));
    }

    // Clique endgame: extend a transversal clique from the last part down.
    let mut clique: Vec<usize> = vec![parts[q - 1].min_elem().expect("nonempty part")];
    for i in (0..q - 1).rev() {
        let mut ext = parts[i].clone();
        for &c in &clique {
            ext = ext.intersection(g.neighbors(c));
        }
        match ext.min_elem() {
            Some(v) => clique.push(v),
            None => break,
        }
    }
    let k = clique.len();
    steps.push(("endgame".into(), format!("transversal clique of size {k}")));
    let blocks: Vec<VertexSet> = clique
        .iter()
        .map(|&v| VertexSet::singleton(g.n(), v))
        .collect();
    let mut bld = CertBuilder::new(o, LEMMA_ROUND, "C");
    bld.kind("complete-blockade");
    bld.set("G", &all);
    for (s, d) in &steps {
        bld.step(s, d);
    }
    for (i, blk) in blocks.iter().enumerate() {
        bld.block(&format!("B{}", i + 1), blk);
    }
    for i in 0..k {
        for j in i + 1..k {
            bld.rel_pair(PairKind::Complete, &format!("B{}", i + 1), &format!("B{}", j + 1))?;
        }
    }
    // k >= eps^(-1/16): k^16 eps >= 1.
    bld.claim(
        Expr::BlockCount.pow(16).mul(con(eps.clone())),
        Rel::Ge,
        con(Rat::one()),
    )?;
    // chi(B_i) >= k^(-a2) chi(G), clamped: chi(B_i) k^256 >= chi(G).
    for i in 1..=k {
        bld.claim(
            chi(&format!("B{i}")).mul(Expr::BlockCount.pow(256)),
            Rel::Ge,
            chi("G"),
        )?;
    }
    Ok(LemmaOutcome {
        cert: bld.build(),
        payload: Payload::Blockade {
            blocks,
            tag: BlockadeTag::Complete,
        },
    })
}

fn finish_round2(
    o: &Oracle,
    eps: &Rat,
    inner: LemmaOutcome,
    steps: Vec<(String, String)>,
) -> Result<LemmaOutcome> {
    let Payload::Blockade { blocks, .. } = &inner.payload else {
        unreachable!()
    };
    let mut bld = CertBuilder::new(o, LEMMA_ROUND, "C");
    bld.kind("complete-blockade");
    bld.set("G", &o.graph().full_set());
    for (s, d) in &steps {
        bld.step(s, d);
    }
    for (i, blk) in blocks.iter().enumerate() {
        bld.block(&format!("B{}", i + 1), blk);
    }
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            bld.rel_pair(PairKind::Complete, &format!("B{}", i + 1), &format!("B{}", j + 1))?;
        }
    }
    bld.claim(
        Expr::BlockCount.pow(16).mul(con(eps.clone())),
        Rel::Ge,
        con(Rat::one()),
    )?;
    for i in 1..=blocks.len() {
        bld.claim(
            chi(&format!("B{i}")).mul(Expr::BlockCount.pow(256)),
            Rel::Ge,
            chi("G"),
        )?;
    }
    let payload = inner.payload.clone();
    Ok(LemmaOutcome {
        cert: bld.build(),
        payload,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn k9_clique_endgame() {
        let o = Oracle::new(Graph::complete(9));
        let out = round2(&o, &Rat::new(1, 16), Mode::Relaxed).unwrap();
        assert_eq!(out.cert.kind, "complete-blockade");
        let Payload::Blockade { blocks, .. } = &out.payload else {
            panic!()
        };
        // q = 2 parts, transversal clique extends fully: k = 2 >= 16^(1/16).
        assert_eq!(blocks.len(), 2);
        assert!(out
            .cert
            .trace
            .iter()
            .any(|t| t.detail.contains("vacuous at desk scale")));
    }

    #[test]
    fn strict_gate_always_trips() {
        let o = Oracle::new(Graph::complete(9));
        assert!(matches!(
            round2(&o, &Rat::pow2_neg(32), Mode::Strict),
            Err(Error::StrictGate { .. })
        ));
    }

    #[test]
    fn density_precondition() {
        let o = Oracle::new(crate::graph::families::complete_multipartite(&[2, 2, 2]));
        // chi = 3, chi(G \ N[v]) = 1 >= 3/16: not (1/16,chi)-dense.
        assert!(matches!(
            round2(&o, &Rat::new(1, 16), Mode::Relaxed),
            Err(Error::Precondition { .. })
        ));
    }

    #[test]
    fn incre2_join_blockade() {
        // Join of four triangles: a (y,chi)-dense blockade of 4 blocks.
        let tri = Graph::complete(3);
        let mut g = tri.clone();
        for _ in 0..3 {
            g = crate::graph::families::join(&g, &tri);
        }
        assert!(g.is_p5_free());
        let o = Oracle::new(g);
        let a_sets: Vec<VertexSet> = (0..4)
            .map(|i| VertexSet::from_iter(12, 3 * i..3 * i + 3))
            .collect();
        let out = incre2_step(
            &o,
            Incre2Input {
                a_sets: &a_sets,
                y: &Rat::new(1, 4),
                b: 2,
                mode: Mode::Relaxed,
            },
        )
        .unwrap();
        assert!(matches!(
            out.cert.kind.as_str(),
            "dense-blockade-increment" | "transversal-complete" | "complete-blockade"
        ));
    }
}
