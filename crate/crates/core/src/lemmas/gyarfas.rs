//! The Gyarfas path argument: every P5-free graph with chi >= 2 has a vertex
//! whose neighborhood has chromatic number at least a third of the whole.

use crate::cert::{chi, con, CertBuilder, Rel};
use crate::error::{Error, Result};
use crate::lemmas::{LemmaOutcome, Payload};
use crate::oracle::Oracle;
use crate::rat::Rat;

pub const LEMMA: &str = "gyarfas_vertex";

/// Scan vertices in index order; return the first `v` with
/// `3 * chi(N(v)) >= chi(G)`. The theorem guarantees one exists.
pub fn gyarfas_vertex(o: &Oracle) -> Result<LemmaOutcome> {
    let g = o.graph();
    if let Some(p5) = g.find_induced_p5() {
        return Err(Error::P5Found(p5));
    }
    let all = g.full_set();
    let chi_g = o.chi(&all)?;
    if chi_g < 2 {
        return Err(Error::Precondition {
            op: LEMMA,
            clause: format!("chi(G) >= 2 (got {chi_g})"),
            witness: None,
        });
    }
    for v in 0..g.n() {
        let nv = g.neighbors(v);
        let chi_n = o.chi(nv)?;
        if 3 * chi_n >= chi_g {
            let mut b = CertBuilder::new(o, LEMMA, "A");
            b.kind("gyarfas-vertex");
            b.set("G", &all);
            b.set("v", &crate::bitset::VertexSet::singleton(g.n(), v));
            b.set("N", nv);
            b.step("scan", format!("first satisfying vertex v = {v} in index order"));
            b.claim(chi("N"), Rel::Ge, con(Rat::new(1, 3)).mul(chi("G")))?;
            return Ok(LemmaOutcome {
                cert: b.build(),
                payload: Payload::Vertex { v },
            });
        }
    }
    // Unreachable for P5-free inputs with chi >= 2; if it ever fires the
    // detector or the oracle is wrong.
    Err(Error::NoVerifiableOutcome {
        op: LEMMA,
        analysis: "no vertex satisfies 3*chi(N(v)) >= chi(G); theorem violated".into(),
    })
}
