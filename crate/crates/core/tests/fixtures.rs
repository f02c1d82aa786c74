//! Small hand-checked instances through the public API.

use std::collections::BTreeMap;

use approx::assert_relative_eq;
use coarse_l1::analysis::phi_threshold;
use coarse_l1::decomposition::{
    annulus_round, kpr_decompose, kpr_diameter_bound, parameter_search, AnnulusParams, Offsets,
    ResidueConvention,
};
use coarse_l1::embedding::{cut_magnitudes, expected_abs_gap, f_column, ScaleBlock};
use coarse_l1::graphcore::{
    bfs_distances, far_pair_measure, generate, metric_of, proximity_graph, vertex_boundary, Family,
    FamilySpec, Graph, VertexMeasure,
};

fn p9() -> Graph {
    generate(&FamilySpec::new(Family::Path { n: 9 }, 0)).unwrap()
}

#[test]
fn generated_instances() {
    let g = p9();
    assert_eq!((g.n(), g.edge_count(), g.diameter()), (9, 8, 8));
    let grid = generate(&FamilySpec::new(Family::Grid2d { rows: 4, cols: 4 }, 0)).unwrap();
    assert_eq!((grid.n(), grid.edge_count(), grid.diameter()), (16, 24, 6));
    let reg = generate(&FamilySpec::new(
        Family::RandomRegular { n: 16, degree: 3 },
        7,
    ))
    .unwrap();
    assert!(reg.is_connected());
    assert!((0..16).all(|v| reg.degree(v) == 3));
    assert_eq!(
        *bfs_distances(
            &generate(&FamilySpec::new(Family::Cycle { n: 8 }, 0)).unwrap(),
            0
        )
        .iter()
        .max()
        .unwrap(),
        4
    );
}

#[test]
fn metric_helpers() {
    let m = metric_of(&p9()).unwrap();
    assert_eq!(m.d(0, 8), 8);
    let sub = m.restrict(&[0, 3, 7]);
    let prox = proximity_graph(&sub, 3).unwrap();
    assert_eq!(prox.edges(), &[(0, 1)]);
    assert_eq!(vertex_boundary(&p9(), &[3, 4, 5]), vec![2, 6]);
    assert!(vertex_boundary(&p9(), &[]).is_empty());

    let mu = far_pair_measure(&m, 8).unwrap();
    assert_eq!(mu.support(), &[(0, 8, 0.5), (8, 0, 0.5)]);
    assert!(far_pair_measure(&m, 9).is_err());
    assert_relative_eq!(VertexMeasure::uniform(9).restrict(&[2, 6]), 2.0 / 9.0);
}

#[test]
fn residue_rounds_on_path() {
    let g = p9();
    let lit = ResidueConvention::Literal;
    let dec = kpr_decompose(&g, &Offsets::new(4, vec![2]).unwrap(), lit);
    assert_eq!(dec.cut_vertices(), vec![2, 6]);
    let leaders: Vec<usize> = dec.components.iter().map(|c| c.leader).collect();
    assert_eq!(leaders, [0, 3, 7]);

    // Δ above the diameter: residue Δ is never reached except by the leader
    // under the literal reading, which cuts vertex 0.
    let dec = kpr_decompose(&g, &Offsets::new(16, vec![16]).unwrap(), lit);
    assert_eq!(dec.cut_vertices(), vec![0]);
    let dec = kpr_decompose(
        &g,
        &Offsets::new(16, vec![16]).unwrap(),
        ResidueConvention::SkipLeader,
    );
    assert!(dec.is_cut_empty());
    assert_eq!(dec.components.len(), 1);

    assert_eq!(kpr_diameter_bound(2, 3).unwrap(), 66);
    assert_eq!(kpr_diameter_bound(2, 5).unwrap(), 196);
    assert_eq!(kpr_diameter_bound(10, 2).unwrap(), 121);
    assert!(kpr_diameter_bound(2, 1).is_err());
}

#[test]
fn annulus_on_path() {
    let g = p9();
    let nu = VertexMeasure::uniform(9);
    let all: Vec<usize> = (0..9).collect();
    let (deleted, alpha) =
        annulus_round(&g, &all, &nu, AnnulusParams::new(1, 2).unwrap(), 0).unwrap();
    assert!(nu.restrict(&deleted) <= 0.5 + 1e-12);
    assert!(alpha < 4);
    // every vertex is covered by exactly 2s = 2 of the 4 offsets
    let mut hits = [0; 9];
    for a in 0..4u32 {
        for (v, h) in hits.iter_mut().enumerate() {
            let r = (v as u32 + 4 - a) % 4;
            if (1..=2).contains(&r) {
                *h += 1;
            }
        }
    }
    assert!(hits.iter().all(|&h| h == 2));
}

#[test]
fn embedding_function_on_path() {
    let g = p9();
    let dec = kpr_decompose(
        &g,
        &Offsets::new(4, vec![2]).unwrap(),
        ResidueConvention::Literal,
    );
    let signs: BTreeMap<usize, i8> = [(0, 1), (3, -1), (7, 1)].into();
    let f = f_column(&g, &dec, &signs).unwrap();
    assert_eq!(f[2], 0);
    assert_eq!(f[4], -2);
    assert_eq!(f, [2, 1, 0, -1, -2, -1, 0, 1, 2]);

    assert_eq!(expected_abs_gap(Some((0, 3.0)), Some((1, 5.0))), 5.0);
    assert_eq!(expected_abs_gap(Some((0, 3.0)), Some((0, 5.0))), 2.0);
    assert_eq!(expected_abs_gap(None, Some((1, 5.0))), 5.0);
}

/// The cut magnitude can exceed Δ/2: far from the cut the distance to ∪D
/// grows past half the residue period.
#[test]
fn magnitude_can_exceed_half_delta() {
    let g = p9();
    let dec = kpr_decompose(
        &g,
        &Offsets::new(4, vec![1, 3, 3]).unwrap(),
        ResidueConvention::Literal,
    );
    assert_eq!(dec.cut_vertices(), vec![1, 5]);
    let mags = cut_magnitudes(&g, &dec);
    assert_eq!(mags[8], 3);
    assert!(2 * mags[8] > 4);

    let signs: BTreeMap<usize, i8> = dec.components.iter().map(|c| (c.leader, 1)).collect();
    let col = f_column(&g, &dec, &signs).unwrap();
    let block = ScaleBlock::from_values(2, 1, col).unwrap();
    assert!(block.magnitude_violations().iter().any(|v| v.vertex == 8));
}

#[test]
fn parameter_values() {
    assert_eq!(phi_threshold(1.0, 16).unwrap(), 2.0);
    assert_eq!(phi_threshold(1.0, 9).unwrap(), 0.25);
    let p = parameter_search(1.0, 2).unwrap();
    assert_eq!((p.s, p.t, p.n), (9, 153, 1842));
    assert!(parameter_search(0.0, 2).is_err());
    assert!(parameter_search(1.0, 1).is_err());
}
