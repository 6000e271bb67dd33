//! Certificates: serializable lemma outcomes whose claimed relations and
//! inequalities can be re-verified independently with only the graph and the
//! exact oracles.
//!
//! A claim stores the evaluated rational values of both sides plus a
//! machine-readable `meaning` in a small expression grammar over oracle
//! terms. The verifier re-parses the meaning, re-evaluates both sides from
//! fresh oracle queries, checks they match the recorded values, and checks
//! the inequality. Structural relations (complete / anticomplete / dense)
//! are listed separately and re-checked by pair classification and the
//! density predicates.
//!
//! Grammar for `meaning` (rationals are nonnegative `p` or `p/q`):
//!
//! ```text
//! claim  := expr rel expr        rel in { <, <=, >=, >, == }
//! expr   := term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ('^' uint)?
//! atom   := rational | chi(NAME) | omega(NAME) | alpha(NAME)
//!         | card(NAME) | k | '(' expr ')'
//! ```
//!
//! `k` is the number of blocks of the certificate's blockade.

use crate::bitset::VertexSet;
use crate::error::{Error, Result};
use crate::oracle::{ExtremalKind, Oracle};
use crate::rat::Rat;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

pub const POW_CLAMP: u32 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rel {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "==")]
    Eq,
}

impl Rel {
    pub fn holds(self, lhs: &Rat, rhs: &Rat) -> bool {
        match self {
            Rel::Lt => lhs < rhs,
            Rel::Le => lhs <= rhs,
            Rel::Ge => lhs >= rhs,
            Rel::Gt => lhs > rhs,
            Rel::Eq => lhs == rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Ge => ">=",
            Rel::Gt => ">",
            Rel::Eq => "==",
        }
    }
}

/// Expression over oracle terms and rational constants.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Const(Rat),
    Chi(String),
    Omega(String),
    Alpha(String),
    Card(String),
    BlockCount,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

pub fn chi(name: &str) -> Expr {
    Expr::Chi(name.to_string())
}

pub fn con(r: Rat) -> Expr {
    Expr::Const(r)
}

impl Expr {
    pub fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }
    pub fn sub(self, rhs: Expr) -> Expr {
        Expr::Sub(Box::new(self), Box::new(rhs))
    }
    pub fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }
    pub fn pow(self, e: u32) -> Expr {
        Expr::Pow(Box::new(self), e)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 0,
            Expr::Mul(..) => 1,
            Expr::Pow(..) => 2,
            _ => 3,
        }
    }

    pub fn eval(&self, ctx: &EvalCtx) -> Result<Rat> {
        Ok(match self {
            Expr::Const(r) => r.clone(),
            Expr::Chi(s) => ctx.oracle.chi_rat(ctx.set(s)?)?,
            Expr::Omega(s) => Rat::from_usize(ctx.oracle.extremal(ctx.set(s)?, ExtremalKind::Clique)?.0),
            Expr::Alpha(s) => Rat::from_usize(ctx.oracle.extremal(ctx.set(s)?, ExtremalKind::Stable)?.0),
            Expr::Card(s) => Rat::from_usize(ctx.set(s)?.len()),
            Expr::BlockCount => Rat::from_usize(ctx.block_count),
            Expr::Add(a, b) => a.eval(ctx)? + b.eval(ctx)?,
            Expr::Sub(a, b) => a.eval(ctx)? - b.eval(ctx)?,
            Expr::Mul(a, b) => a.eval(ctx)? * b.eval(ctx)?,
            Expr::Pow(a, e) => a.eval(ctx)?.pow(i64::from(*e)),
        })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn wrap(f: &mut fmt::Formatter<'_>, e: &Expr, min_prec: u8) -> fmt::Result {
            if e.precedence() < min_prec {
                write!(f, "(")?;
                write!(f, "{e}")?;
                write!(f, ")")
            } else {
                write!(f, "{e}")
            }
        }
        match self {
            Expr::Const(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{r}")
                }
            }
            Expr::Chi(s) => write!(f, "chi({s})"),
            Expr::Omega(s) => write!(f, "omega({s})"),
            Expr::Alpha(s) => write!(f, "alpha({s})"),
            Expr::Card(s) => write!(f, "card({s})"),
            Expr::BlockCount => write!(f, "k"),
            Expr::Add(a, b) => {
                wrap(f, a, 0)?;
                write!(f, " + ")?;
                wrap(f, b, 1)
            }
            Expr::Sub(a, b) => {
                wrap(f, a, 0)?;
                write!(f, " - ")?;
                wrap(f, b, 1)
            }
            Expr::Mul(a, b) => {
                wrap(f, a, 1)?;
                write!(f, " * ")?;
                wrap(f, b, 2)
            }
            Expr::Pow(a, e) => {
                wrap(f, a, 3)?;
                write!(f, "^{e}")
            }
        }
    }
}

pub struct EvalCtx<'a> {
    pub oracle: &'a Oracle,
    pub sets: &'a BTreeMap<String, VertexSet>,
    pub block_count: usize,
}

impl EvalCtx<'_> {
    fn set(&self, name: &str) -> Result<&VertexSet> {
        self.sets
            .get(name)
            .ok_or_else(|| Error::CertificateRejected(format!("unknown set `{name}` in claim")))
    }
}

/// One verified numeric inequality. `lhs`/`rhs` are the evaluated rational
/// values; `meaning` re-derives them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Claim {
    pub lhs: Rat,
    pub rel: Rel,
    pub rhs: Rat,
    pub meaning: String,
}

/// A structural relation between named sets, re-checkable by classification
/// or a density predicate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rel", rename_all = "snake_case")]
pub enum RelClaim {
    Complete { args: [String; 2] },
    Anticomplete { args: [String; 2] },
    /// `G[args[0]]` is (eps,chi)-dense.
    SelfDense { args: [String; 1], eps: Rat },
    /// `args[1]` is (eps,chi)-dense to `args[0]`.
    DenseTo { args: [String; 2], eps: Rat },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceStep {
    pub step: String,
    pub detail: String,
}

/// A serialized lemma outcome. The JSON shape is the external interface:
/// sets as sorted name -> vertex-index lists, rationals as "p/q".
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: String,
    pub lemma: String,
    /// Desk-verifiability class: "A", "B", or "C".
    pub class: String,
    pub sets: BTreeMap<String, Vec<usize>>,
    /// Ordered block set-names when the outcome is a blockade.
    #[serde(default)]
    pub blocks: Vec<String>,
    #[serde(default)]
    pub rels: Vec<RelClaim>,
    pub claims: Vec<Claim>,
    pub trace: Vec<TraceStep>,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn outcome_tag(&self) -> &str {
        &self.kind
    }

    pub fn waived(&self) -> Vec<&TraceStep> {
        self.trace.iter().filter(|t| t.step == "waiver").collect()
    }

    /// Waivers of structural hypotheses (as opposed to magnitude gates).
    /// Relaxed mode must never produce these.
    pub fn structural_waivers(&self) -> Vec<&TraceStep> {
        self.trace
            .iter()
            .filter(|t| t.step == "structural-waiver")
            .collect()
    }
}

/// Incrementally builds a certificate; `claim` evaluates both sides on the
/// spot and refuses to record an inequality that does not hold, so every
/// certificate leaving a lemma procedure is true by construction (and is
/// re-verified independently by the harness).
pub struct CertBuilder<'a> {
    oracle: &'a Oracle,
    kind: String,
    lemma: String,
    class: String,
    sets: BTreeMap<String, VertexSet>,
    blocks: Vec<String>,
    rels: Vec<RelClaim>,
    claims: Vec<Claim>,
    trace: Vec<TraceStep>,
}

impl<'a> CertBuilder<'a> {
    pub fn new(oracle: &'a Oracle, lemma: &str, class: &str) -> Self {
        CertBuilder {
            oracle,
            kind: String::new(),
            lemma: lemma.to_string(),
            class: class.to_string(),
            sets: BTreeMap::new(),
            blocks: Vec::new(),
            rels: Vec::new(),
            claims: Vec::new(),
            trace: Vec::new(),
        }
    }

    pub fn kind(&mut self, kind: &str) -> &mut Self {
        self.kind = kind.to_string();
        self
    }

    pub fn set(&mut self, name: &str, s: &VertexSet) -> &mut Self {
        self.sets.insert(name.to_string(), s.clone());
        self
    }

    pub fn block(&mut self, name: &str, s: &VertexSet) -> &mut Self {
        self.set(name, s);
        self.blocks.push(name.to_string());
        self
    }

    pub fn get_set(&self, name: &str) -> Option<&VertexSet> {
        self.sets.get(name)
    }

    pub fn step(&mut self, step: &str, detail: impl fmt::Display) -> &mut Self {
        self.trace.push(TraceStep {
            step: step.to_string(),
            detail: detail.to_string(),
        });
        self
    }

    pub fn waive(&mut self, detail: impl fmt::Display) -> &mut Self {
        self.step("waiver", detail)
    }

    fn ctx(&self) -> EvalCtx<'_> {
        EvalCtx {
            oracle: self.oracle,
            sets: &self.sets,
            block_count: self.blocks.len(),
        }
    }

    /// Record `lhs rel rhs` after checking it holds; error otherwise.
    pub fn claim(&mut self, lhs: Expr, rel: Rel, rhs: Expr) -> Result<&mut Self> {
        let ctx = self.ctx();
        let lv = lhs.eval(&ctx)?;
        let rv = rhs.eval(&ctx)?;
        if !rel.holds(&lv, &rv) {
            return Err(Error::NoVerifiableOutcome {
                op: "claim",
                analysis: format!(
                    "candidate claim fails: {lhs} {} {rhs} evaluates to {lv} {} {rv} in {}",
                    rel.symbol(),
                    rel.symbol(),
                    self.lemma
                ),
            });
        }
        self.claims.push(Claim {
            lhs: lv,
            rel,
            rhs: rv,
            meaning: format!("{lhs} {} {rhs}", rel.symbol()),
        });
        Ok(self)
    }

    /// True iff the claim would hold; does not record.
    pub fn check(&self, lhs: &Expr, rel: Rel, rhs: &Expr) -> Result<bool> {
        let ctx = self.ctx();
        Ok(rel.holds(&lhs.eval(&ctx)?, &rhs.eval(&ctx)?))
    }

    /// Record the claim when it holds; in relaxed mode a failing magnitude
    /// claim becomes a trace waiver instead of an error. Returns whether the
    /// claim was recorded.
    pub fn claim_or_waive(&mut self, lhs: Expr, rel: Rel, rhs: Expr, relaxed: bool) -> Result<bool> {
        if self.check(&lhs, rel, &rhs)? {
            self.claim(lhs, rel, rhs)?;
            Ok(true)
        } else if relaxed {
            self.waive(format!(
                "magnitude claim `{lhs} {} {rhs}` fails at desk scale",
                rel.symbol()
            ));
            Ok(false)
        } else {
            self.claim(lhs, rel, rhs)?;
            unreachable!("claim that failed check cannot record")
        }
    }

    /// Record a verified complete/anticomplete relation.
    pub fn rel_pair(&mut self, kind: crate::graph::PairKind, a: &str, b: &str) -> Result<&mut Self> {
        let (sa, sb) = (
            self.sets[a].clone(),
            self.sets[b].clone(),
        );
        let found = self.oracle.graph().classify_pair(&sa, &sb)?;
        if found != kind {
            return Err(Error::NoVerifiableOutcome {
                op: "rel_pair",
                analysis: format!("({a},{b}) classifies as {found:?}, wanted {kind:?}"),
            });
        }
        self.rels.push(match kind {
            crate::graph::PairKind::Complete => RelClaim::Complete {
                args: [a.to_string(), b.to_string()],
            },
            crate::graph::PairKind::Anticomplete => RelClaim::Anticomplete {
                args: [a.to_string(), b.to_string()],
            },
            crate::graph::PairKind::Mixed => {
                return Err(Error::NoVerifiableOutcome {
                    op: "rel_pair",
                    analysis: "mixed is not a recordable pair relation".into(),
                })
            }
        });
        Ok(self)
    }

    /// Record a verified (eps,chi)-self-density of a named set.
    pub fn rel_self_dense(&mut self, name: &str, eps: &Rat) -> Result<&mut Self> {
        let s = self.sets[name].clone();
        let (ok, violator) =
            self.oracle
                .density_check(eps, crate::oracle::DensityMode::SelfDense, &s, None)?;
        if !ok {
            return Err(Error::NoVerifiableOutcome {
                op: "rel_self_dense",
                analysis: format!(
                    "{name} is not ({eps},chi)-dense; violator {}",
                    violator.unwrap()
                ),
            });
        }
        self.rels.push(RelClaim::SelfDense {
            args: [name.to_string()],
            eps: eps.clone(),
        });
        Ok(self)
    }

    /// Record a verified "(eps,chi)-dense to": every vertex of `b` sees `a`
    /// except for a sub-eps part.
    pub fn rel_dense_to(&mut self, a: &str, b: &str, eps: &Rat) -> Result<&mut Self> {
        let (sa, sb) = (self.sets[a].clone(), self.sets[b].clone());
        let (ok, violator) =
            self.oracle
                .density_check(eps, crate::oracle::DensityMode::DenseTo, &sa, Some(&sb))?;
        if !ok {
            return Err(Error::NoVerifiableOutcome {
                op: "rel_dense_to",
                analysis: format!(
                    "{b} is not ({eps},chi)-dense to {a}; violator {}",
                    violator.unwrap()
                ),
            });
        }
        self.rels.push(RelClaim::DenseTo {
            args: [a.to_string(), b.to_string()],
            eps: eps.clone(),
        });
        Ok(self)
    }

    pub fn build(&mut self) -> Certificate {
        Certificate {
            kind: std::mem::take(&mut self.kind),
            lemma: std::mem::take(&mut self.lemma),
            class: std::mem::take(&mut self.class),
            sets: std::mem::take(&mut self.sets)
                .into_iter()
                .map(|(k, v)| (k, v.to_vec()))
                .collect(),
            blocks: std::mem::take(&mut self.blocks),
            rels: std::mem::take(&mut self.rels),
            claims: std::mem::take(&mut self.claims),
            trace: std::mem::take(&mut self.trace),
        }
    }
}

/// Parse a claim meaning back into `(lhs, rel, rhs)`.
pub fn parse_claim_meaning(s: &str) -> Result<(Expr, Rel, Expr)> {
    let mut p = Parser {
        src: s.as_bytes(),
        pos: 0,
    };
    let lhs = p.expr()?;
    p.skip_ws();
    let rel = p.rel()?;
    let rhs = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::Parse(format!(
            "trailing input in claim meaning at byte {}: {s}",
            p.pos
        )));
    }
    Ok((lhs, rel, rhs))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.src.get(self.pos) == Some(&b' ') {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn rel(&mut self) -> Result<Rel> {
        let out = match self.bump() {
            Some(b'<') => {
                if self.src.get(self.pos) == Some(&b'=') {
                    self.pos += 1;
                    Rel::Le
                } else {
                    Rel::Lt
                }
            }
            Some(b'>') => {
                if self.src.get(self.pos) == Some(&b'=') {
                    self.pos += 1;
                    Rel::Ge
                } else {
                    Rel::Gt
                }
            }
            Some(b'=') => {
                if self.src.get(self.pos) == Some(&b'=') {
                    self.pos += 1;
                    Rel::Eq
                } else {
                    return Err(Error::Parse("expected ==".into()));
                }
            }
            other => return Err(Error::Parse(format!("expected relation, got {other:?}"))),
        };
        Ok(out)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    lhs = lhs.add(self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    lhs = lhs.sub(self.term()?);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            lhs = lhs.mul(self.factor()?);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr> {
        let atom = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.uint()?;
            Ok(atom.pow(u32::try_from(e).map_err(|_| Error::Parse("exponent too large".into()))?))
        } else {
            Ok(atom)
        }
    }

    fn uint(&mut self) -> Result<u64> {
        self.digits()?
            .parse()
            .map_err(|e| Error::Parse(format!("bad integer: {e}")))
    }

    /// Arbitrary-length digit span (rational constants carry thresholds like
    /// 2^-108 whose denominators exceed any machine word).
    fn digits(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse("expected integer".into()));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .to_string())
    }

    fn name(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse("expected name".into()));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .to_string())
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.bump() == Some(c) {
            Ok(())
        } else {
            Err(Error::Parse(format!("expected `{}`", c as char)))
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.digits()?;
                if self.src.get(self.pos) == Some(&b'/') {
                    self.pos += 1;
                    let den = self.digits()?;
                    let r: Rat = format!("{num}/{den}")
                        .parse()
                        .map_err(|e| Error::Parse(format!("bad rational: {e}")))?;
                    Ok(con(r))
                } else {
                    let r: Rat = num
                        .parse()
                        .map_err(|e| Error::Parse(format!("bad rational: {e}")))?;
                    Ok(con(r))
                }
            }
            Some(_) => {
                let name = self.name()?;
                match name.as_str() {
                    "k" => Ok(Expr::BlockCount),
                    "chi" | "omega" | "alpha" | "card" => {
                        self.expect(b'(')?;
                        let arg = self.name()?;
                        self.expect(b')')?;
                        Ok(match name.as_str() {
                            "chi" => Expr::Chi(arg),
                            "omega" => Expr::Omega(arg),
                            "alpha" => Expr::Alpha(arg),
                            _ => Expr::Card(arg),
                        })
                    }
                    other => Err(Error::Parse(format!("unknown term `{other}`"))),
                }
            }
            None => Err(Error::Parse("unexpected end of claim meaning".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;
    use crate::oracle::Oracle;

    #[test]
    fn expr_display_and_parse_round_trip() {
        let e = chi("A")
            .sub(chi("X"))
            .pow(2)
            .mul(con(Rat::new(9, 16)))
            .add(con(Rat::from_int(3)));
        let s = e.to_string();
        assert_eq!(s, "(chi(A) - chi(X))^2 * 9/16 + 3");
        let meaning = format!("{s} >= chi(G)");
        let (lhs, rel, rhs) = parse_claim_meaning(&meaning).unwrap();
        assert_eq!(lhs.to_string(), s);
        assert_eq!(rel, Rel::Ge);
        assert_eq!(rhs, chi("G"));
    }

    #[test]
    fn builder_rejects_false_claims() {
        let g = families::cycle(5);
        let o = Oracle::new(g);
        let all = o.graph().full_set();
        let mut b = CertBuilder::new(&o, "test", "A");
        b.set("G", &all);
        assert!(b.claim(chi("G"), Rel::Ge, con(Rat::from_int(3))).is_ok());
        assert!(b.claim(chi("G"), Rel::Ge, con(Rat::from_int(4))).is_err());
    }

    #[test]
    fn build_and_serialize() {
        let g = families::disjoint_copies(&crate::graph::Graph::complete(3), 2);
        let o = Oracle::new(g);
        let t1 = crate::bitset::VertexSet::from_iter(6, [0, 1, 2]);
        let t2 = crate::bitset::VertexSet::from_iter(6, [3, 4, 5]);
        let mut b = CertBuilder::new(&o, "unit", "A");
        b.kind("anticomplete-pair");
        b.set("G", &o.graph().full_set());
        b.set("A", &t1);
        b.set("B", &t2);
        b.rel_pair(crate::graph::PairKind::Anticomplete, "A", "B").unwrap();
        b.claim(chi("A"), Rel::Ge, con(Rat::from_int(3))).unwrap();
        let cert = b.build();
        let json = cert.to_json();
        let back = Certificate::from_json(&json).unwrap();
        assert_eq!(back, cert);
        assert_eq!(back.to_json(), json); // byte-stable round trip
    }
}
