//! The midway lemma: a homogeneous (all-anticomplete or all-dense) blockade
//! via the conversion theorem, a pattern graph, and the Erdos-Hajnal black
//! box on the pattern.

use crate::bitset::VertexSet;
use crate::cert::{chi, con, CertBuilder, Expr, Rel};
use crate::error::{Error, Result};
use crate::graph::{Graph, PairKind};
use crate::increment::convert::{convert_blockade, ConvertParams, SuppliedBlockade};
use crate::increment::ledger;
use crate::increment::round1::round1;
use crate::lemmas::{BlockadeTag, LemmaOutcome, Mode, Payload};
use crate::oracle::{ExtremalKind, Oracle};
use crate::rat::Rat;

pub const LEMMA: &str = "midway_blockade";

pub struct MidwayParams<'a> {
    pub eps: &'a Rat,
    /// Exponent used in the per-block chi claims; the ledger value in strict
    /// mode, caller-chosen in relaxed mode.
    pub b: u64,
    /// Erdos-Hajnal exponent for the pattern graph, exposed as a parameter
    /// since no particular value is pinned for this class.
    pub eh_exponent: Rat,
    pub mode: Mode,
}

impl MidwayParams<'_> {
    pub fn relaxed_default(eps: &Rat) -> MidwayParams<'_> {
        MidwayParams {
            eps,
            b: 384,
            eh_exponent: Rat::from_int(4),
            mode: Mode::Relaxed,
        }
    }
}

/// An anticomplete or (eps,chi)-dense blockade of length at least 1/eps with
/// per-block chi at least eps^b chi(G).
pub fn midway_blockade(o: &Oracle, params: MidwayParams<'_>) -> Result<LemmaOutcome> {
    let g = o.graph();
    let MidwayParams {
        eps,
        b,
        eh_exponent,
        mode,
    } = params;
    if !(eps.is_positive() && *eps <= Rat::new(1, 2)) {
        return Err(Error::RangeError {
            op: LEMMA,
            param: "eps",
            value: eps.to_string(),
            range: "(0, 1/2]",
        });
    }
    if let Some(p5) = g.find_induced_p5() {
        return Err(Error::P5Found(p5));
    }
    let all = g.full_set();
    let chi_g = o.chi_rat(&all)?;
    let b_eff = if mode == Mode::Strict {
        ledger::ledger().b_mid
    } else {
        b
    };
    // Strict gate: chi(G) >= eps^-b with the ledger b.
    if mode == Mode::Strict {
        let gate_exp = b_eff.min(512) as i64;
        if chi_g < eps.recip().pow(gate_exp) {
            return Err(Error::StrictGate {
                op: LEMMA,
                gate: format!("chi(G) >= eps^-b with ledger b = {b_eff}"),
            });
        }
    }
    let mut steps: Vec<(String, String)> = Vec::new();
    if mode == Mode::Relaxed {
        steps.push((
            "waiver".into(),
            format!("relaxed mode: user b = {b_eff} in place of the ledger exponent"),
        ));
    }

    // Conversion with escalating inner exponents: small exponents give short
    // target lengths; escalate when the inner supply cannot meet the
    // contract on the given instance.
    let mut last_err: Option<Error> = None;
    for aconv in [1u32, 2, 4] {
        let eps_conv = eps.pow(i64::from(aconv));
        let x_inner = eps_conv.pow(3 * i64::from(aconv));
        let mut inner = |oracle: &Oracle, f: &VertexSet| -> Result<SuppliedBlockade> {
            let (sub, map) = oracle.graph().induced_with_map(f)?;
            let sub_o = Oracle::with_budget(sub, oracle.budget());
            let out = round1(&sub_o, &x_inner, mode)?;
            let Payload::Blockade { blocks, tag } = out.payload else {
                unreachable!()
            };
            Ok(SuppliedBlockade {
                blocks: blocks
                    .iter()
                    .map(|s| crate::lemmas::chirdl::remap(&map, s, oracle.graph().n()))
                    .collect(),
                dense_param: match tag {
                    BlockadeTag::Dense(x) => Some(x),
                    _ => None,
                },
            })
        };
        match convert_blockade(
            o,
            ConvertParams {
                eps: &eps_conv,
                a: aconv,
                mode,
            },
            &mut inner,
        ) {
            Ok(converted) => {
                steps.push((
                    "convert".into(),
                    format!("conversion succeeded with inner exponent a = {aconv}"),
                ));
                return pattern_and_extract(
                    o, eps, b_eff, &eh_exponent, converted, steps, mode,
                );
            }
            Err(e @ Error::InnerSupplyFailed { .. }) | Err(e @ Error::NoVerifiableOutcome { .. }) => {
                steps.push((
                    "convert".into(),
                    format!("inner exponent a = {aconv} failed: {e}"),
                ));
                last_err = Some(e);
            }
            Err(other) => return Err(other),
        }
    }
    Err(last_err.unwrap_or(Error::NoVerifiableOutcome {
        op: LEMMA,
        analysis: "conversion failed for every inner exponent".into(),
    }))
}

fn pattern_and_extract(
    o: &Oracle,
    eps: &Rat,
    b_eff: u64,
    eh_exponent: &Rat,
    converted: LemmaOutcome,
    mut steps: Vec<(String, String)>,
    mode: Mode,
) -> Result<LemmaOutcome> {
    let g = o.graph();
    let relaxed = mode.is_relaxed();
    let Payload::Blockade { blocks, tag } = converted.payload else {
        unreachable!()
    };
    let dense_at = match &tag {
        BlockadeTag::AnticompleteOrDense(e) => e.clone(),
        BlockadeTag::Dense(e) => e.clone(),
        _ => eps.clone(),
    };
    // Pattern graph J: vertices are blocks, edges the non-anticomplete pairs.
    let ell = blocks.len();
    let mut pattern_edges = Vec::new();
    for i in 0..ell {
        for j in i + 1..ell {
            if g.classify_pair(&blocks[i], &blocks[j])? != PairKind::Anticomplete {
                pattern_edges.push((i, j));
            }
        }
    }
    let pattern = Graph::from_edges(ell, &pattern_edges)?;
    // The pattern inherits P5-freeness; a violation here is an
    // implementation bug, so it is a hard failure.
    if let Some(p5) = pattern.find_induced_p5() {
        return Err(Error::NoVerifiableOutcome {
            op: LEMMA,
            analysis: format!(
                "pattern graph contains an induced P5 at blocks {p5:?}; this \
                 indicates a bug in the conversion bookkeeping"
            ),
        });
    }
    steps.push((
        "pattern".into(),
        format!("J on {ell} blocks with {} edges; P5-free confirmed", pattern_edges.len()),
    ));
    let pattern_oracle = Oracle::with_budget(pattern, o.budget());
    let witness = pattern_oracle.eh_extract(eh_exponent)?;
    let chosen: Vec<usize> = witness.members.to_vec();
    steps.push((
        "eh-extract".into(),
        format!(
            "{} of size {} at exponent {eh_exponent}",
            match witness.kind {
                ExtremalKind::Clique => "clique",
                ExtremalKind::Stable => "stable set",
            },
            chosen.len()
        ),
    ));

    let sub_blocks: Vec<VertexSet> = chosen.iter().map(|&i| blocks[i].clone()).collect();
    let mut bld = CertBuilder::new(o, LEMMA, "C");
    let homogeneous_dense = witness.kind == ExtremalKind::Clique;
    bld.kind(if homogeneous_dense {
        "dense-blockade"
    } else {
        "anticomplete-blockade"
    });
    bld.set("G", &g.full_set());
    for (s, d) in &steps {
        bld.step(s, d);
    }
    for (i, blk) in sub_blocks.iter().enumerate() {
        bld.block(&format!("B{}", i + 1), blk);
    }
    for i in 0..sub_blocks.len() {
        for j in i + 1..sub_blocks.len() {
            if homogeneous_dense {
                // dense at the conversion parameter, which implies
                // (eps,chi)-dense since it is no larger than eps
                bld.rel_dense_to(&format!("B{}", i + 1), &format!("B{}", j + 1), eps)?;
            } else {
                bld.rel_pair(
                    PairKind::Anticomplete,
                    &format!("B{}", i + 1),
                    &format!("B{}", j + 1),
                )?;
            }
        }
    }
    let _ = dense_at;
    // k >= 1/eps and chi(B_i) >= eps^b chi(G) (exponent clamped downward,
    // which strengthens the claim since eps < 1).
    bld.claim_or_waive(
        Expr::BlockCount.mul(con(eps.clone())),
        Rel::Ge,
        con(Rat::one()),
        relaxed,
    )?;
    let eps_b = eps.pow_clamped(u128::from(b_eff), 256);
    for i in 1..=sub_blocks.len() {
        bld.claim(chi(&format!("B{i}")), Rel::Ge, con(eps_b.clone()).mul(chi("G")))?;
    }
    Ok(LemmaOutcome {
        cert: bld.build(),
        payload: Payload::Blockade {
            blocks: sub_blocks,
            tag: if homogeneous_dense {
                BlockadeTag::Dense(eps.clone())
            } else {
                BlockadeTag::Anticomplete
            },
        },
    })
}
