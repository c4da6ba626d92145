//! Maximal clique enumeration (Bron–Kerbosch with Tomita pivoting).

use crate::graph::Graph;

/// Maximal cliques of the loop-ignoring adjacency of `g`, each sorted
/// ascending and the list sorted lexicographically.
pub fn maximal_cliques(g: &Graph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if g.is_empty() {
        return out;
    }
    let mut r = Vec::new();
    let p: Vec<usize> = g.vertices().collect();
    expand(g, &mut r, p, Vec::new(), &mut out);
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    out
}

fn expand(
    g: &Graph,
    r: &mut Vec<usize>,
    mut p: Vec<usize>,
    mut x: Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() {
        if x.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    // pivot maximises |P ∩ N(u)|
    let pivot = p
        .iter()
        .chain(x.iter())
        .copied()
        .max_by_key(|&u| p.iter().filter(|&&v| v != u && g.adjacent(u, v)).count())
        .expect("p is non-empty");
    let candidates: Vec<usize> = p
        .iter()
        .copied()
        .filter(|&v| v == pivot || !g.adjacent(pivot, v))
        .collect();
    for v in candidates {
        let nv = g.neighbors(v);
        let p_next = p
            .iter()
            .copied()
            .filter(|w| nv.binary_search(w).is_ok())
            .collect();
        let x_next = x
            .iter()
            .copied()
            .filter(|w| nv.binary_search(w).is_ok())
            .collect();
        r.push(v);
        expand(g, r, p_next, x_next, out);
        r.pop();
        p.retain(|&w| w != v);
        x.push(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use proptest::prelude::*;

    fn brute_force(g: &Graph) -> Vec<Vec<usize>> {
        let n = g.n();
        let is_clique = |mask: u32| {
            (0..n).all(|u| {
                (u + 1..n).all(|v| mask & (1 << u) == 0 || mask & (1 << v) == 0 || g.adjacent(u, v))
            })
        };
        let cliques: Vec<u32> = (1u32..(1 << n)).filter(|&m| is_clique(m)).collect();
        let mut out: Vec<Vec<usize>> = cliques
            .iter()
            .filter(|&&m| !cliques.iter().any(|&o| o != m && o & m == m))
            .map(|&m| (0..n).filter(|&v| m & (1 << v) != 0).collect())
            .collect();
        out.sort();
        out
    }

    #[test]
    fn h7_cliques() {
        assert_eq!(
            maximal_cliques(&h7()),
            vec![
                vec![0, 1, 2],
                vec![0, 3, 4],
                vec![2, 5],
                vec![3, 6],
                vec![5, 6]
            ]
        );
    }

    #[test]
    fn small_cliques() {
        assert_eq!(maximal_cliques(&complete(2)), vec![vec![0, 1]]);
        assert_eq!(maximal_cliques(&complete(4)), vec![vec![0, 1, 2, 3]]);
        assert_eq!(maximal_cliques(&Graph::new("e", 2)), vec![vec![0], vec![1]]);
        assert!(maximal_cliques(&Graph::new("empty", 0)).is_empty());
    }

    proptest! {
        #[test]
        fn matches_brute_force(n in 1usize..8, bits in proptest::collection::vec(any::<bool>(), 28), loops in proptest::collection::vec(any::<bool>(), 8)) {
            let mut g = Graph::new("g", n);
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] { g.add_edge(u, v).unwrap(); }
                    k += 1;
                }
            }
            for u in (0..n).filter(|&u| loops[u]) {
                g.add_loop(u).unwrap();
            }
            let cliques = maximal_cliques(&g);
            prop_assert_eq!(&cliques, &brute_force(&g));
            for (u, v) in g.edges() {
                prop_assert!(cliques.iter().any(|c| c.contains(&u) && c.contains(&v)));
            }
            for v in g.vertices() {
                prop_assert!(cliques.iter().any(|c| c.contains(&v)));
            }
        }
    }
}
