use morse_core::budget::Parallelism;
use morse_core::corpus::connected_graphs;
use morse_core::iso::{all_set_isomorphisms, automorphisms, find_isomorphism};
use morse_core::reconstruct::{as_cycle, detect_index_anomaly, ReconstructionRoute};
use morse_core::{find_morse_isomorphism, reconstruct_complex_iso, reconstruct_graph_iso, MorseComplex, MorseIso, SimplicialComplex};

#[test]
fn triangle_with_pendant_edge_automorphisms() {
    let k = SimplicialComplex::closure(vec![vec!["a", "b", "c"], vec!["c", "d"]]).unwrap();
    let m = MorseComplex::of_complex(&k);
    let system = m.non_face_system();
    let autos = all_set_isomorphisms(&system, &system, 10_000);
    assert!(!autos.is_empty());
    for a in autos {
        let f = MorseIso::from_forward(a).unwrap();
        let r = reconstruct_complex_iso(&f, &k, &k, &m, &m).unwrap();
        assert!(r.map.is_isomorphism(&k, &k));
        assert_eq!(r.map.apply(3), 3);
    }
}

#[test]
fn graph_functoriality() {
    for g in connected_graphs(3, 5) {
        if as_cycle(&g).is_some() {
            continue;
        }
        let m = MorseComplex::of_complex(&g);
        for h in automorphisms(&g, 200) {
            let f = MorseIso::induced(&h, m.diagram(), m.diagram()).unwrap();
            assert_eq!(reconstruct_graph_iso(&f, &g, &g, &m, &m).unwrap(), h);
        }
    }
}

#[test]
fn isomorphic_morse_complexes_have_equal_counts() {
    let graphs = connected_graphs(1, 5);
    let morse: Vec<MorseComplex> = graphs.iter().map(MorseComplex::of_complex).collect();
    for i in 0..graphs.len() {
        for j in 0..graphs.len() {
            if find_morse_isomorphism(&morse[i], &morse[j], Parallelism::Sequential).is_some() {
                assert_eq!(graphs[i].num_vertices(), graphs[j].num_vertices());
                assert_eq!(graphs[i].edges().len(), graphs[j].edges().len());
                assert!(find_isomorphism(&graphs[i], &graphs[j]).is_some());
            }
        }
    }
}

/// Whether automorphisms of the Morse complex of the tetrahedron boundary
/// ever move an index-0 pair to a higher index. Recorded, not asserted.
#[test]
fn index_mixing_on_tetrahedron_boundary() {
    let k = SimplicialComplex::boundary_of_simplex(3);
    let m = MorseComplex::of_complex(&k);
    let system = m.non_face_system();
    let autos = all_set_isomorphisms(&system, &system, 1_000_000);
    let mut mixing = 0;
    for a in &autos {
        let f = MorseIso::from_forward(a.clone()).unwrap();
        if detect_index_anomaly(&f, &m, &m).is_some() {
            mixing += 1;
            assert_eq!(k.is_boundary_simplex(), Some(3));
            let r = reconstruct_complex_iso(&f, &k, &k, &m, &m).unwrap();
            assert_eq!(r.route, ReconstructionRoute::BoundarySimplex(3));
        }
    }
    println!("automorphisms of the Morse complex of the tetrahedron boundary: {}, index-mixing: {mixing}", autos.len());
}
