use homrecol::format::{
    parse_graph, parse_instance, parse_path, serialize_graph, serialize_instance, serialize_path,
};
use homrecol::graph::named::{complete, cycle, h7, path};
use homrecol::hom::{enumerate_homomorphisms, verify_path};
use homrecol::oracle::{explore, hom_graph_components, reachable, ColComponents};
use homrecol::{Homomorphism, Instance, OracleError};
use proptest::prelude::*;

fn hom(m: &[usize]) -> Homomorphism {
    Homomorphism::from_map_unchecked(m.to_vec())
}

#[test]
fn reachable_path_survives_the_file_formats() {
    let g = complete(2).reflexive_closure();
    let text = serialize_instance(&g, &h7(), &hom(&[1, 1]), &hom(&[6, 6]));
    let file = parse_instance(&text).unwrap();
    let inst = Instance::new(file.g, file.h, file.alpha, file.beta).unwrap();
    let r = reachable(&inst, 1 << 16).unwrap();
    let p = r.path.unwrap();
    let reread = parse_path(&serialize_path(&p), inst.alpha.clone()).unwrap();
    assert_eq!(reread, p);
    assert!(verify_path(&inst.g, &inst.h, &reread, &inst.beta));
}

#[test]
fn graph_round_trip_keeps_loops_and_edges() {
    let h = h7();
    let back = parse_graph(&serialize_graph(&h)).unwrap();
    assert_eq!(back.n(), h.n());
    assert_eq!(back.edge_set(), h.edge_set());
    assert!(back.is_reflexive());
}

#[test]
fn components_of_k3_into_k3_are_frozen() {
    let g = complete(3);
    let homs = enumerate_homomorphisms(&g, &g, 1 << 10).unwrap();
    let comps = ColComponents::build(&g, &g, &homs, 1 << 10).unwrap();
    assert_eq!(comps.count(), 6);
    assert_eq!(comps.total_states(), 6);
}

#[test]
fn budget_is_an_error_not_an_answer() {
    let g = path(4);
    let h = complete(5).reflexive_closure();
    let start = hom(&[0, 0, 0, 0]);
    assert_eq!(explore(&g, &h, &start, 625, None).unwrap().len(), 625);
    assert!(matches!(
        explore(&g, &h, &start, 624, None),
        Err(OracleError::BudgetExceeded { .. })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    // reflexive targets: Col(G, H) and Hom(G, H) share their components
    #[test]
    fn col_and_hom_components_agree(n in 2usize..5, len in 3usize..6) {
        let g = path(n);
        let h = cycle(len).reflexive_closure();
        let homs = enumerate_homomorphisms(&g, &h, 1 << 20).unwrap();
        let hom_roots = hom_graph_components(&g, &h, &homs);
        let comps = ColComponents::build(&g, &h, &homs, 1 << 20).unwrap();
        for i in 0..homs.len() {
            for j in 0..homs.len() {
                prop_assert_eq!(hom_roots[i] == hom_roots[j], comps.connected(&homs[i], &homs[j]));
            }
        }
    }

    #[test]
    fn bfs_paths_are_shortest_and_valid(target in 0usize..625) {
        let g = path(4);
        let h = cycle(5).reflexive_closure();
        let beta = hom(&[target % 5, target / 5 % 5, target / 25 % 5, target / 125]);
        prop_assume!(homrecol::hom::is_homomorphism(&g, &h, beta.map()));
        let alpha = hom(&[0, 0, 0, 0]);
        let tree = explore(&g, &h, &alpha, 1 << 16, None).unwrap();
        let p = tree.path_to(beta.map()).unwrap();
        prop_assert!(verify_path(&g, &h, &p, &beta));
        prop_assert_eq!(Some(p.len()), tree.depth(beta.map()));
    }
}
