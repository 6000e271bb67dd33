//! Independent certificate verification: re-derive every claimed relation
//! via pair classification and the density predicates, and every claimed
//! inequality by re-evaluating both sides from fresh oracle queries.
//!
//! Rejection carries a reason; an oracle budget overrun is an error,
//! reported distinctly from rejection.

use crate::bitset::VertexSet;
use crate::cert::{parse_claim_meaning, Certificate, EvalCtx, RelClaim};
use crate::error::{Error, Result};
use crate::graph::PairKind;
use crate::oracle::{DensityMode, Oracle};
use crate::rat::Rat;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Accept,
    Reject(String),
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        matches!(self, Verdict::Accept)
    }
}

/// Map every verification-internal error except budget overruns to a
/// rejection: a malformed certificate is rejected, not crashed on.
fn soft<T>(r: Result<T>, what: &str) -> Result<std::result::Result<T, String>> {
    match r {
        Ok(v) => Ok(Ok(v)),
        Err(Error::BudgetExceeded { size, budget }) => Err(Error::BudgetExceeded { size, budget }),
        Err(e) => Ok(Err(format!("{what}: {e}"))),
    }
}

pub fn verify_certificate(o: &Oracle, cert: &Certificate) -> Result<Verdict> {
    let g = o.graph();
    let n = g.n();
    // Sets well-formed.
    let mut sets: BTreeMap<String, VertexSet> = BTreeMap::new();
    for (name, verts) in &cert.sets {
        if let Some(&v) = verts.iter().find(|&&v| v >= n) {
            return Ok(Verdict::Reject(format!(
                "set {name} contains out-of-range vertex {v}"
            )));
        }
        sets.insert(name.clone(), VertexSet::from_iter(n, verts.iter().copied()));
    }
    // Blockade structure: named blocks exist, nonempty, pairwise disjoint.
    for (i, bname) in cert.blocks.iter().enumerate() {
        let Some(b) = sets.get(bname) else {
            return Ok(Verdict::Reject(format!("block {bname} has no set")));
        };
        if b.is_empty() {
            return Ok(Verdict::Reject(format!("block {bname} is empty")));
        }
        for other in cert.blocks.iter().take(i) {
            if !sets[other].is_disjoint_from(b) {
                return Ok(Verdict::Reject(format!(
                    "blocks {other} and {bname} overlap"
                )));
            }
        }
    }
    // Relations.
    for (i, rel) in cert.rels.iter().enumerate() {
        match rel {
            RelClaim::Complete { args } | RelClaim::Anticomplete { args } => {
                let (Some(a), Some(b)) = (sets.get(&args[0]), sets.get(&args[1])) else {
                    return Ok(Verdict::Reject(format!("rel {i} names a missing set")));
                };
                let want = if matches!(rel, RelClaim::Complete { .. }) {
                    PairKind::Complete
                } else {
                    PairKind::Anticomplete
                };
                match soft(g.classify_pair(a, b), &format!("rel {i}"))? {
                    Ok(found) if found == want => {}
                    Ok(found) => {
                        return Ok(Verdict::Reject(format!(
                            "rel {i}: ({}, {}) classifies as {found:?}, claimed {want:?}",
                            args[0], args[1]
                        )))
                    }
                    Err(msg) => return Ok(Verdict::Reject(msg)),
                }
            }
            RelClaim::SelfDense { args, eps } => {
                let Some(f) = sets.get(&args[0]) else {
                    return Ok(Verdict::Reject(format!("rel {i} names a missing set")));
                };
                match soft(
                    o.density_check(eps, DensityMode::SelfDense, f, None),
                    &format!("rel {i}"),
                )? {
                    Ok((true, _)) => {}
                    Ok((false, viol)) => {
                        return Ok(Verdict::Reject(format!(
                            "rel {i}: {} is not ({eps},chi)-dense; violator {}",
                            args[0],
                            viol.unwrap()
                        )))
                    }
                    Err(msg) => return Ok(Verdict::Reject(msg)),
                }
            }
            RelClaim::DenseTo { args, eps } => {
                let (Some(a), Some(b)) = (sets.get(&args[0]), sets.get(&args[1])) else {
                    return Ok(Verdict::Reject(format!("rel {i} names a missing set")));
                };
                match soft(
                    o.density_check(eps, DensityMode::DenseTo, a, Some(b)),
                    &format!("rel {i}"),
                )? {
                    Ok((true, _)) => {}
                    Ok((false, viol)) => {
                        return Ok(Verdict::Reject(format!(
                            "rel {i}: {} is not ({eps},chi)-dense to {}; violator {}",
                            args[1],
                            args[0],
                            viol.unwrap()
                        )))
                    }
                    Err(msg) => return Ok(Verdict::Reject(msg)),
                }
            }
        }
    }
    // Claims: meanings re-derive the recorded values exactly.
    let ctx = EvalCtx {
        oracle: o,
        sets: &sets,
        block_count: cert.blocks.len(),
    };
    for (i, claim) in cert.claims.iter().enumerate() {
        let parsed = match parse_claim_meaning(&claim.meaning) {
            Ok(p) => p,
            Err(e) => {
                return Ok(Verdict::Reject(format!(
                    "claim {i}: meaning does not parse: {e}"
                )))
            }
        };
        let (lhs_expr, rel, rhs_expr) = parsed;
        if rel != claim.rel {
            return Ok(Verdict::Reject(format!(
                "claim {i}: relation mismatch between meaning and record"
            )));
        }
        let lhs = match soft(lhs_expr.eval(&ctx), &format!("claim {i} lhs"))? {
            Ok(v) => v,
            Err(msg) => return Ok(Verdict::Reject(msg)),
        };
        let rhs = match soft(rhs_expr.eval(&ctx), &format!("claim {i} rhs"))? {
            Ok(v) => v,
            Err(msg) => return Ok(Verdict::Reject(msg)),
        };
        if lhs != claim.lhs {
            return Ok(Verdict::Reject(format!(
                "claim {i}: chi inequality lhs mismatch: recorded {}, re-derived {lhs}",
                claim.lhs
            )));
        }
        if rhs != claim.rhs {
            return Ok(Verdict::Reject(format!(
                "claim {i}: rhs mismatch: recorded {}, re-derived {rhs}",
                claim.rhs
            )));
        }
        if !claim.rel.holds(&lhs, &rhs) {
            return Ok(Verdict::Reject(format!(
                "claim {i}: chi inequality fails: {lhs} {} {rhs}",
                claim.rel.symbol()
            )));
        }
    }
    Ok(Verdict::Accept)
}

/// Ten deterministic planted faults for a certificate; each must be
/// rejected by the verifier. Faults are chosen so rejection is guaranteed
/// (value mismatches, structural breakage, out-of-range vertices), never
/// merely likely.
pub fn planted_faults(cert: &Certificate) -> Vec<(String, Certificate)> {
    let mut out: Vec<(String, Certificate)> = Vec::new();
    let push = |name: &str, c: Certificate, out: &mut Vec<(String, Certificate)>| {
        out.push((name.to_string(), c));
    };
    if !cert.claims.is_empty() {
        let mut c = cert.clone();
        c.claims[0].lhs = &c.claims[0].lhs + &Rat::one();
        push("claim-lhs-corrupted", c, &mut out);

        let mut c = cert.clone();
        c.claims[0].rhs = &c.claims[0].rhs + &Rat::one();
        push("claim-rhs-inflated", c, &mut out);

        let mut c = cert.clone();
        c.claims[0].rel = match c.claims[0].rel {
            crate::cert::Rel::Ge | crate::cert::Rel::Gt | crate::cert::Rel::Eq => {
                crate::cert::Rel::Lt
            }
            crate::cert::Rel::Le | crate::cert::Rel::Lt => crate::cert::Rel::Gt,
        };
        push("claim-rel-flipped", c, &mut out);

        let mut c = cert.clone();
        c.claims[0].meaning = String::new();
        push("claim-meaning-erased", c, &mut out);

        let mut c = cert.clone();
        c.claims[0].meaning = "1 >= 2".into();
        push("claim-meaning-replaced", c, &mut out);
    }
    if let Some(rel) = cert.rels.first() {
        let mut c = cert.clone();
        c.rels[0] = match rel {
            RelClaim::Complete { args } => RelClaim::Anticomplete { args: args.clone() },
            RelClaim::Anticomplete { args } => RelClaim::Complete { args: args.clone() },
            RelClaim::SelfDense { args, .. } => RelClaim::Complete {
                args: [args[0].clone(), args[0].clone()],
            },
            RelClaim::DenseTo { args, .. } => RelClaim::Complete {
                args: [args[0].clone(), args[0].clone()],
            },
        };
        push("rel-flipped", c, &mut out);
    }
    {
        let mut c = cert.clone();
        c.rels.push(RelClaim::Complete {
            args: ["__missing__".into(), "__missing__".into()],
        });
        push("rel-ghost-set", c, &mut out);
    }
    {
        let mut c = cert.clone();
        c.blocks.push("__missing_block__".into());
        push("ghost-block", c, &mut out);
    }
    {
        let mut c = cert.clone();
        c.claims.push(crate::cert::Claim {
            lhs: Rat::zero(),
            rel: crate::cert::Rel::Ge,
            rhs: Rat::one(),
            meaning: "0 >= 1".into(),
        });
        push("appended-false-claim", c, &mut out);
    }
    // Pad with out-of-range vertex plants until there are ten.
    let mut bump = 0usize;
    while out.len() < 10 {
        let mut c = cert.clone();
        if let Some((_, verts)) = c.sets.iter_mut().next() {
            verts.push(usize::MAX - bump);
        } else {
            c.sets.insert("__planted__".into(), vec![usize::MAX - bump]);
            c.rels.push(RelClaim::Complete {
                args: ["__planted__".into(), "__planted__".into()],
            });
        }
        push(&format!("out-of-range-vertex-{bump}"), c, &mut out);
        bump += 1;
    }
    out.truncate(10);
    out
}
