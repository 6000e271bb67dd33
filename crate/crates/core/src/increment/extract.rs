//! Extraction of complete structure from anticomplete anticonnected blocks:
//! the per-set extraction, its averaged form over many sets, and the
//! anticomponent grouping that yields complete blockades outright.

use crate::bitset::VertexSet;
use crate::cert::{chi, con, CertBuilder, Expr, Rel};
use crate::error::{Error, Result};
use crate::graph::{ComponentMode, PairKind, Purity};
use crate::lemmas::{BlockadeTag, LemmaOutcome, Payload};
use crate::oracle::Oracle;
use crate::rat::Rat;

pub const LEMMA_EXTRACT: &str = "anticomplete_extract";
pub const LEMMA_AVERAGED: &str = "averaged_extract";
pub const LEMMA_ANTICONN: &str = "anticonn_or_complete";

pub struct ExtractInput<'a> {
    pub a: &'a VertexSet,
    pub blocks: &'a [VertexSet],
    pub r: &'a Rat,
}

fn check_extract_hypotheses(o: &Oracle, input: &ExtractInput<'_>) -> Result<()> {
    let g = o.graph();
    let ExtractInput { a, blocks, r } = input;
    if a.is_empty() || blocks.is_empty() || blocks.iter().any(|b| b.is_empty()) {
        return Err(Error::EmptySet);
    }
    for (i, b) in blocks.iter().enumerate() {
        if !b.is_disjoint_from(a) {
            return Err(Error::OverlappingSets);
        }
        if g.components(b, ComponentMode::Anticonnected).len() != 1 {
            return Err(Error::Precondition {
                op: LEMMA_EXTRACT,
                clause: format!("G[B_{i}] anticonnected"),
                witness: None,
            });
        }
        for (j, b2) in blocks.iter().enumerate().skip(i + 1) {
            if g.classify_pair(b, b2)? != PairKind::Anticomplete {
                return Err(Error::Precondition {
                    op: LEMMA_EXTRACT,
                    clause: format!("B_{i} anticomplete to B_{j}"),
                    witness: None,
                });
            }
        }
    }
    for v in a.iter() {
        let mixed_count = blocks
            .iter()
            .filter(|b| g.mixed_on(v, b).map(|p| p == Purity::Mixed).unwrap_or(false))
            .count();
        if mixed_count >= 2 {
            return Err(Error::Precondition {
                op: LEMMA_EXTRACT,
                clause: "no A-vertex mixed on two blocks".into(),
                witness: Some(v.to_string()),
            });
        }
    }
    for b in blocks.iter() {
        for v in b.iter() {
            if o.chi_rat(&a.difference(g.neighbors(v)))? > **r {
                return Err(Error::Precondition {
                    op: LEMMA_EXTRACT,
                    clause: "chi(A \\ N(v)) <= r for all v in the blocks".into(),
                    witness: Some(v.to_string()),
                });
            }
        }
    }
    Ok(())
}

/// Either most blocks get a complete partner of nearly full chi inside A, or
/// the mixed-attachment sets form a complete blockade inside A.
pub fn anticomplete_extract(o: &Oracle, input: ExtractInput<'_>) -> Result<LemmaOutcome> {
    let g = o.graph();
    if let Some(p5) = g.find_induced_p5() {
        return Err(Error::P5Found(p5));
    }
    check_extract_hypotheses(o, &input)?;
    let ExtractInput { a, blocks, r } = input;
    let k = blocks.len();
    let chi_a = o.chi_rat(a)?;
    // D: A-vertices with no neighbor in some block.
    let mut d = VertexSet::empty(g.n());
    for u in a.iter() {
        if blocks.iter().any(|b| g.neighbors(u).is_disjoint_from(b)) {
            d.insert(u);
        }
    }
    // D_i: A \ D vertices mixed on block i (pairwise disjoint by hypothesis).
    let rest = a.difference(&d);
    let d_sets: Vec<VertexSet> = blocks
        .iter()
        .map(|b| {
            let mut s = VertexSet::empty(g.n());
            for u in rest.iter() {
                if g.mixed_on(u, b).map(|p| p == Purity::Mixed).unwrap_or(false) {
                    s.insert(u);
                }
            }
            s
        })
        .collect();
    // Claim: the nonempty D_i are pairwise complete (a P5 chase).
    for i in 0..k {
        for j in i + 1..k {
            if d_sets[i].is_empty() || d_sets[j].is_empty() {
                continue;
            }
            if g.classify_pair(&d_sets[i], &d_sets[j])? != PairKind::Complete {
                return Err(Error::NoVerifiableOutcome {
                    op: LEMMA_EXTRACT,
                    analysis: format!(
                        "mixed-attachment sets D_{i}, D_{j} are not complete; \
                         contradicts the P5 chase"
                    ),
                });
            }
        }
    }
    let k_rat = Rat::from_usize(k);
    let light: Vec<usize> = (0..k)
        .filter(|&i| {
            o.chi_rat(&d_sets[i])
                .map(|c| c * &k_rat <= chi_a)
                .unwrap_or(false)
        })
        .collect();
    // |light| >= k - sqrt(k) iff (k - |light|)^2 <= k.
    let gap = k - light.len();
    if gap * gap <= k {
        let mut bld = CertBuilder::new(o, LEMMA_EXTRACT, "B");
        bld.kind("complete-partners");
        bld.set("G", &g.full_set());
        bld.set("A", a);
        for (i, b) in blocks.iter().enumerate() {
            bld.set(&format!("B{}", i + 1), b);
        }
        bld.step(
            "light-indices",
            format!("{:?}", light.iter().map(|i| i + 1).collect::<Vec<_>>()),
        );
        bld.claim(
            con(Rat::from_usize(gap)).pow(2),
            Rel::Le,
            con(k_rat.clone()),
        )?;
        let mut indices = Vec::new();
        let mut partners = Vec::new();
        let threshold = (Rat::one() - k_rat.recip()) * &chi_a - &k_rat * r;
        for &i in &light {
            let partner = a.difference(&d).difference(&d_sets[i]);
            let name = format!("Ap{}", i + 1);
            bld.set(&name, &partner);
            if !partner.is_empty() {
                bld.rel_pair(PairKind::Complete, &name, &format!("B{}", i + 1))?;
                bld.claim(
                    chi(&name),
                    Rel::Ge,
                    chi("A")
                        .sub(chi("A").mul(con(k_rat.recip())))
                        .sub(con(&k_rat * r)),
                )?;
            } else if threshold.is_positive() {
                return Err(Error::NoVerifiableOutcome {
                    op: LEMMA_EXTRACT,
                    analysis: format!("partner for block {i} empty yet the threshold is positive"),
                });
            }
            indices.push(i);
            partners.push(partner);
        }
        return Ok(LemmaOutcome {
            cert: bld.build(),
            payload: Payload::CompletePartners { indices, partners },
        });
    }
    // Heavy indices form a complete blockade.
    let heavy: Vec<usize> = (0..k).filter(|i| !light.contains(i)).collect();
    let q = heavy.len();
    let mut bld = CertBuilder::new(o, LEMMA_EXTRACT, "B");
    bld.kind("complete-blockade");
    bld.set("G", &g.full_set());
    bld.set("A", a);
    let mut out_blocks = Vec::with_capacity(q);
    for (bi, &i) in heavy.iter().enumerate() {
        bld.block(&format!("D{}", bi + 1), &d_sets[i]);
        out_blocks.push(d_sets[i].clone());
    }
    for bi in 0..q {
        for bj in bi + 1..q {
            bld.rel_pair(
                PairKind::Complete,
                &format!("D{}", bi + 1),
                &format!("D{}", bj + 1),
            )?;
        }
    }
    bld.claim(Expr::BlockCount.pow(2), Rel::Ge, con(k_rat.clone()))?;
    for bi in 1..=q {
        bld.claim(
            chi(&format!("D{bi}")).mul(con(k_rat.clone())),
            Rel::Ge,
            chi("A"),
        )?;
    }
    Ok(LemmaOutcome {
        cert: bld.build(),
        payload: Payload::Blockade {
            blocks: out_blocks,
            tag: BlockadeTag::Complete,
        },
    })
}

pub struct AveragedInput<'a> {
    pub a_sets: &'a [VertexSet],
    pub blocks: &'a [VertexSet],
    pub rs: &'a [Rat],
}

/// Run the extraction per A_j and pigeonhole a common block index.
pub fn averaged_extract(o: &Oracle, input: AveragedInput<'_>) -> Result<LemmaOutcome> {
    let AveragedInput { a_sets, blocks, rs } = input;
    let ell = a_sets.len();
    let k = blocks.len();
    if ell == 0 || rs.len() != ell {
        return Err(Error::Precondition {
            op: LEMMA_AVERAGED,
            clause: "one r per A set, at least one A set".into(),
            witness: None,
        });
    }
    let mut per_j: Vec<(Vec<usize>, Vec<VertexSet>)> = Vec::with_capacity(ell);
    for (j, a) in a_sets.iter().enumerate() {
        let out = anticomplete_extract(
            o,
            ExtractInput {
                a,
                blocks,
                r: &rs[j],
            },
        )?;
        match out.payload {
            Payload::Blockade { .. } => {
                // Second bullet: a complete blockade inside A_j; pass through
                // with the source index recorded.
                let mut cert = out.cert;
                cert.lemma = LEMMA_AVERAGED.to_string();
                cert.trace.push(crate::cert::TraceStep {
                    step: "source".into(),
                    detail: format!("complete blockade found inside A_{}", j + 1),
                });
                return Ok(LemmaOutcome {
                    cert,
                    payload: out.payload,
                });
            }
            Payload::CompletePartners { indices, partners } => {
                per_j.push((indices, partners));
            }
            _ => unreachable!(),
        }
    }
    // Pigeonhole: the block index contained in the most I_j (least on ties).
    let mut best_i = 0usize;
    let mut best_count = 0usize;
    for i in 0..k {
        let count = per_j.iter().filter(|(idx, _)| idx.contains(&i)).count();
        if count > best_count {
            best_count = count;
            best_i = i;
        }
    }
    let chosen: Vec<usize> = (0..ell)
        .filter(|&j| per_j[j].0.contains(&best_i))
        .collect();
    let mut bld = CertBuilder::new(o, LEMMA_AVERAGED, "B");
    bld.kind("averaged-partners");
    bld.set("G", &o.graph().full_set());
    bld.set("B", &blocks[best_i]);
    bld.step("pigeonhole", format!("block index i = {}", best_i + 1));
    let mut partners = Vec::new();
    for &j in &chosen {
        let pos = per_j[j].0.iter().position(|&i| i == best_i).unwrap();
        let partner = per_j[j].1[pos].clone();
        let name = format!("Ap{}", j + 1);
        bld.set(&name, &partner);
        if !partner.is_empty() {
            bld.rel_pair(PairKind::Complete, &name, "B")?;
        }
        partners.push(partner);
    }
    // |I| >= (1 - k^(-1/2)) ell, exactly: (ell - |I|)^2 k <= ell^2.
    let gap = ell - chosen.len();
    bld.claim(
        con(Rat::from_usize(gap)).pow(2).mul(con(Rat::from_usize(k))),
        Rel::Le,
        con(Rat::from_usize(ell)).pow(2),
    )?;
    Ok(LemmaOutcome {
        cert: bld.build(),
        payload: Payload::AveragedPartners {
            block_index: best_i,
            indices: chosen,
            partners,
        },
    })
}

/// The high-chi anticonnected subset of `within`, if one exists: because an
/// anticonnected set lies inside one anticomponent and chi is monotone, it
/// suffices to check the anticomponents themselves.
pub fn anticonn_witness(o: &Oracle, y: &Rat, within: &VertexSet) -> Result<Option<VertexSet>> {
    let threshold = y * &o.chi_rat(within)?;
    for anti in o
        .graph()
        .components(within, ComponentMode::Anticonnected)
    {
        if o.chi_rat(&anti)? >= threshold {
            return Ok(Some(anti));
        }
    }
    Ok(None)
}

/// When no anticonnected subset is chromatically heavy, greedy grouping of
/// the anticomponents yields a complete blockade: groups close as soon as
/// their chi reaches `y chi(G)`, so each stays below `2 y chi(G)` and there
/// are at least `y^(-1/2)` of them.
pub fn anticonn_or_complete(o: &Oracle, y: &Rat) -> Result<LemmaOutcome> {
    let g = o.graph();
    if !(y.is_positive() && *y <= Rat::new(1, 8)) {
        return Err(Error::RangeError {
            op: LEMMA_ANTICONN,
            param: "y",
            value: y.to_string(),
            range: "(0, 1/8]",
        });
    }
    let all = g.full_set();
    if let Some(witness) = anticonn_witness(o, y, &all)? {
        return Err(Error::HypothesisFailed {
            op: LEMMA_ANTICONN,
            what: format!("no anticonnected S with chi(S) >= y chi(G) = {}", y * &o.chi_rat(&all)?),
            witness: format!("{:?}", witness.to_vec()),
        });
    }
    let threshold = y * &o.chi_rat(&all)?;
    let mut groups: Vec<VertexSet> = Vec::new();
    let mut current = VertexSet::empty(g.n());
    for anti in g.components(&all, ComponentMode::Anticonnected) {
        current = current.union(&anti);
        if o.chi_rat(&current)? >= threshold {
            groups.push(std::mem::replace(&mut current, VertexSet::empty(g.n())));
        }
    }
    let leftover = current;
    let mut bld = CertBuilder::new(o, LEMMA_ANTICONN, "B");
    bld.kind("complete-blockade");
    bld.set("G", &all);
    if !leftover.is_empty() {
        bld.step(
            "leftover",
            format!("light tail group {:?} dropped", leftover.to_vec()),
        );
    }
    for (i, grp) in groups.iter().enumerate() {
        bld.block(&format!("B{}", i + 1), grp);
    }
    for i in 0..groups.len() {
        for j in i + 1..groups.len() {
            bld.rel_pair(
                PairKind::Complete,
                &format!("B{}", i + 1),
                &format!("B{}", j + 1),
            )?;
        }
    }
    // k >= y^(-1/2): k^2 y >= 1.
    bld.claim(
        Expr::BlockCount.pow(2).mul(con(y.clone())),
        Rel::Ge,
        con(Rat::one()),
    )?;
    for i in 1..=groups.len() {
        bld.claim(chi(&format!("B{i}")), Rel::Ge, con(y.clone()).mul(chi("G")))?;
        bld.claim(
            chi(&format!("B{i}")),
            Rel::Lt,
            con(Rat::from_int(2) * y).mul(chi("G")),
        )?;
    }
    Ok(LemmaOutcome {
        cert: bld.build(),
        payload: Payload::Blockade {
            blocks: groups,
            tag: BlockadeTag::Complete,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn k12_grouping_matches_expected_shape() {
        let o = Oracle::new(Graph::complete(12));
        let out = anticonn_or_complete(&o, &Rat::new(1, 8)).unwrap();
        let Payload::Blockade { blocks, .. } = &out.payload else {
            panic!()
        };
        // y chi(G) = 3/2; pairs of singleton anticomponents close at chi = 2.
        assert_eq!(blocks.len(), 6);
        for b in blocks {
            assert_eq!(b.len(), 2);
        }
    }

    #[test]
    fn k3_hypothesis_fails_with_singleton_witness() {
        let o = Oracle::new(Graph::complete(3));
        let err = anticonn_or_complete(&o, &Rat::new(1, 8)).unwrap_err();
        match err {
            Error::HypothesisFailed { witness, .. } => assert_eq!(witness, "[0]"),
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn y_range() {
        let o = Oracle::new(Graph::complete(3));
        assert!(matches!(
            anticonn_or_complete(&o, &Rat::new(1, 4)),
            Err(Error::RangeError { .. })
        ));
    }

    #[test]
    fn extract_k1_complete_block() {
        // k = 1, B_1 complete to A: first bullet with partner = A.
        // A = {0,1} edge, B_1 = {2,3} nonedge (anticonnected), complete to A.
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let o = Oracle::new(g);
        let a = VertexSet::from_iter(4, [0, 1]);
        let blocks = [VertexSet::from_iter(4, [2, 3])];
        let out = anticomplete_extract(
            &o,
            ExtractInput {
                a: &a,
                blocks: &blocks,
                r: &Rat::new(1, 2),
            },
        )
        .unwrap();
        assert_eq!(out.cert.kind, "complete-partners");
        let Payload::CompletePartners { partners, .. } = &out.payload else {
            panic!()
        };
        assert_eq!(partners[0].to_vec(), vec![0, 1]);
    }

    #[test]
    fn extract_rejects_mixed_on_two() {
        // Vertex 0 mixed on both blocks {1,2} and {3,4}: hypothesis error.
        // Use anticomplete blocks that are anticonnected (nonedges).
        let g = Graph::from_edges(5, &[(0, 1), (0, 3)]).unwrap();
        let o = Oracle::new(g);
        let a = VertexSet::singleton(5, 0);
        let blocks = [
            VertexSet::from_iter(5, [1, 2]),
            VertexSet::from_iter(5, [3, 4]),
        ];
        let err = anticomplete_extract(
            &o,
            ExtractInput {
                a: &a,
                blocks: &blocks,
                r: &Rat::one(),
            },
        )
        .unwrap_err();
        match err {
            Error::Precondition { clause, witness, .. } => {
                assert!(clause.contains("mixed on two"));
                assert_eq!(witness, Some("0".into()));
            }
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn averaged_degenerates_to_single() {
        let g = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
        let o = Oracle::new(g);
        let a_sets = [VertexSet::from_iter(4, [0, 1])];
        let blocks = [VertexSet::from_iter(4, [2, 3])];
        let rs = [Rat::new(1, 2)];
        let out = averaged_extract(
            &o,
            AveragedInput {
                a_sets: &a_sets,
                blocks: &blocks,
                rs: &rs,
            },
        )
        .unwrap();
        assert_eq!(out.cert.kind, "averaged-partners");
        let Payload::AveragedPartners { indices, .. } = &out.payload else {
            panic!()
        };
        assert_eq!(indices, &vec![0]);
    }
}
