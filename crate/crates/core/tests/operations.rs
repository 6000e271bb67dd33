//! Cross-checks of the oracle surface against independently written naive
//! solvers, plus engineered fixtures for the extraction and combination
//! procedures that the unit tests do not reach.

mod common;

use chiforge_core::bitset::VertexSet;
use chiforge_core::gen::{self, GenSpec};
use chiforge_core::graph::{families, Graph};
use chiforge_core::increment::avg::{avg_p5, AvgInput};
use chiforge_core::increment::dense1::{dense_combine, CombineInput};
use chiforge_core::increment::extract::{
    anticomplete_extract, averaged_extract, AveragedInput, ExtractInput,
};
use chiforge_core::lemmas::{Mode, Payload};
use chiforge_core::oracle::{ExtremalKind, Oracle};
use chiforge_core::rat::Rat;
use chiforge_core::verify::{verify_certificate, Verdict};

#[test]
fn petersen_chi_cross_checked_by_independent_backtracking() {
    let g = families::petersen();
    let o = Oracle::new(g.clone());
    let solver = o.chi(&g.full_set()).unwrap();
    let naive = common::naive_chi(&g);
    assert_eq!(solver, 3);
    assert_eq!(solver, naive);
}

#[test]
fn chi_agrees_with_dp_over_independent_sets() {
    for t in 0..60u64 {
        let mut rng = gen::rng_for(7001, t);
        use rand::RngCore;
        let n = 1 + (rng.next_u64() % 9) as usize;
        let g = gen::gnp(n, 0.45, &mut rng);
        let o = Oracle::new(g.clone());
        assert_eq!(
            o.chi(&g.full_set()).unwrap(),
            common::dp_chi(&g),
            "disagreement on {}",
            chiforge_core::graph6::encode(&g)
        );
    }
}

#[test]
fn omega_agrees_with_subset_enumeration() {
    for t in 0..40u64 {
        let mut rng = gen::rng_for(7002, t);
        use rand::RngCore;
        let n = 1 + (rng.next_u64() % 10) as usize;
        let g = gen::gnp(n, 0.5, &mut rng);
        let o = Oracle::new(g.clone());
        assert_eq!(
            o.extremal(&g.full_set(), ExtremalKind::Clique).unwrap().0,
            common::naive_omega(&g)
        );
    }
}

#[test]
fn complete_multipartite_chi_equals_omega_equals_parts() {
    for parts in [vec![2, 2, 2], vec![1, 3, 2], vec![2, 1, 1, 2], vec![3, 3]] {
        let g = families::complete_multipartite(&parts);
        let o = Oracle::new(g.clone());
        let all = g.full_set();
        assert_eq!(o.chi(&all).unwrap(), parts.len());
        assert_eq!(
            o.extremal(&all, ExtremalKind::Clique).unwrap().0,
            parts.len()
        );
    }
}

#[test]
fn substitute_size_formula_exact() {
    use rand::RngCore;
    for t in 0..20u64 {
        let mut rng = gen::rng_for(7003, t);
        let g = gen::random_p5free(&GenSpec::repair(7, 0.4, 7003).with_stream(t)).unwrap();
        if g.n() == 0 {
            continue;
        }
        let h = gen::random_p5free(&GenSpec::repair(4, 0.4, 7004).with_stream(t)).unwrap();
        let v = (rng.next_u64() % g.n() as u64) as usize;
        if let Ok(out) = gen::substitute(&g, v, &h) {
            assert_eq!(out.n(), g.n() - 1 + h.n());
            assert!(out.is_p5_free());
        }
    }
}

/// Engineered second-bullet instance for the anticomplete extraction: four
/// anticomplete nonedge blocks; three thirds of a K9 are each mixed on one
/// block and complete to the rest, so three heavy attachment sets form the
/// complete blockade.
fn extraction_second_bullet_instance() -> (Graph, VertexSet, Vec<VertexSet>) {
    // A = K9 on 0..9; blocks B_i = {9+2i, 10+2i} nonedges, i = 0..4.
    let mut edges = Vec::new();
    for u in 0..9 {
        for w in u + 1..9 {
            edges.push((u, w));
        }
    }
    let block_verts: Vec<(usize, usize)> = (0..4).map(|i| (9 + 2 * i, 10 + 2 * i)).collect();
    // D_1 = {0,1,2} mixed on B_1 (adjacent to its first vertex only),
    // D_2 = {3,4,5} mixed on B_2, D_3 = {6,7,8} mixed on B_3; everyone is
    // complete to every other block, and everyone is complete to B_4.
    for a in 0..9usize {
        let mixed_block = a / 3; // 0,1,2
        for (i, &(b1, b2)) in block_verts.iter().enumerate() {
            if i == mixed_block {
                edges.push((a, b1));
            } else {
                edges.push((a, b1));
                edges.push((a, b2));
            }
        }
    }
    let g = Graph::from_edges(17, &edges).unwrap();
    let a = VertexSet::from_iter(17, 0..9);
    let blocks = block_verts
        .iter()
        .map(|&(b1, b2)| VertexSet::from_iter(17, [b1, b2]))
        .collect();
    (g, a, blocks)
}

#[test]
fn extraction_second_bullet_complete_blockade() {
    let (g, a, blocks) = extraction_second_bullet_instance();
    assert!(g.is_p5_free());
    let o = Oracle::new(g);
    let out = anticomplete_extract(
        &o,
        ExtractInput {
            a: &a,
            blocks: &blocks,
            r: &Rat::from_int(3),
        },
    )
    .unwrap();
    assert_eq!(out.cert.kind, "complete-blockade");
    let Payload::Blockade { blocks: out_blocks, .. } = &out.payload else {
        panic!()
    };
    // D_1, D_2, D_3 all exceed chi(A)/k = 9/4; completeness verified.
    assert_eq!(out_blocks.len(), 3);
    for b in out_blocks {
        assert_eq!(o.chi(b).unwrap(), 3);
    }
    assert!(verify_certificate(&o, &out.cert).unwrap().is_accept());
}

#[test]
fn averaged_two_sets_one_block() {
    // ell = 2, k = 1: both extractions fire the first bullet, so I = {1,2}.
    let mut edges = vec![(0, 1), (2, 3)];
    for u in [0, 1, 2, 3] {
        for w in [4, 5] {
            edges.push((u, w));
        }
    }
    let g = Graph::from_edges(6, &edges).unwrap();
    assert!(g.is_p5_free());
    let o = Oracle::new(g);
    let a_sets = [
        VertexSet::from_iter(6, [0, 1]),
        VertexSet::from_iter(6, [2, 3]),
    ];
    let blocks = [VertexSet::from_iter(6, [4, 5])];
    let rs = [Rat::new(1, 2), Rat::new(1, 2)];
    let out = averaged_extract(
        &o,
        AveragedInput {
            a_sets: &a_sets,
            blocks: &blocks,
            rs: &rs,
        },
    )
    .unwrap();
    let Payload::AveragedPartners { indices, .. } = &out.payload else {
        panic!("{:?}", out.cert.kind)
    };
    assert_eq!(indices, &vec![0, 1]);
    assert!(verify_certificate(&o, &out.cert).unwrap().is_accept());
}

#[test]
fn combine_passes_blockade_through_with_k_rechecked() {
    // The avg_p5 anticover fixture: two rounds peel singleton blocks; the
    // combination re-checks k in [y^(-1/2), x^(-2)] on the way through.
    let edges = vec![
        (0, 1),
        (0, 2),
        (1, 2),
        (3, 4),
        (3, 5),
        (3, 6),
        (4, 5),
        (4, 6),
        (5, 6),
        (1, 3),
        (1, 4),
        (1, 5),
        (1, 6),
        (2, 3),
        (2, 4),
        (2, 5),
        (2, 7),
    ];
    let g = Graph::from_edges(8, &edges).unwrap();
    let o = Oracle::new(g);
    let a = VertexSet::from_iter(8, [1, 2]);
    let b = VertexSet::from_iter(8, [3, 4, 5, 6, 7]);
    // Direct averaging produces the pure blockade...
    let inner = avg_p5(
        &o,
        AvgInput {
            v: 0,
            a: &a,
            b: &b,
            r: &Rat::one(),
            y: &Rat::new(1, 4),
            q: 2,
        },
    )
    .unwrap();
    assert_eq!(inner.cert.kind, "pure-blockade");
    // ...and the combination passes it through with the k-range claims.
    let out = dense_combine(
        &o,
        CombineInput {
            v: 0,
            a: &a,
            b: &b,
            r: &Rat::one(),
            x: &Rat::new(1, 4),
            y: &Rat::new(1, 4),
            mode: Mode::Relaxed,
        },
    )
    .unwrap();
    assert_eq!(out.cert.kind, "pure-blockade");
    let k_claim = out
        .cert
        .claims
        .iter()
        .any(|c| c.meaning.contains("k^2"));
    assert!(k_claim, "k-range re-check missing: {:?}", out.cert.claims);
    assert!(verify_certificate(&o, &out.cert).unwrap().is_accept());
}

#[test]
fn verify_rejects_on_wrong_graph() {
    // A certificate transplanted to a different labeled graph must reject.
    let o = Oracle::new(families::cycle(5));
    let out = chiforge_core::lemmas::gyarfas::gyarfas_vertex(&o).unwrap();
    let other = Oracle::new(Graph::edgeless(5));
    match verify_certificate(&other, &out.cert).unwrap() {
        Verdict::Reject(_) => {}
        Verdict::Accept => panic!("accepted on the wrong graph"),
    }
}

#[test]
fn eh_exponent_is_a_parameter() {
    // The same graph passes at a generous exponent and fails at exponent 1.
    let o = Oracle::new(families::cycle(5));
    assert!(o.eh_extract(&Rat::from_int(200)).is_ok());
    assert!(o.eh_extract(&Rat::new(3, 2)).is_err());
}
