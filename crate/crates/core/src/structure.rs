//! Folds, dismantling and the recoloring paths they induce.
//!
//! A vertex `b` folds into `a` when every neighbour of `b` is a neighbour of
//! `a`, loops included. Removing `b` is then a retraction, and any
//! homomorphism into the graph can be pushed off `b` one vertex at a time.

use crate::error::ReductionError;
use crate::graph::Graph;
use crate::hom::{check_homomorphism, Homomorphism, RecoloringPath, RecoloringStep};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fold {
    pub folded: usize,
    pub into: usize,
}

/// Whether `b` folds into `a` inside the subgraph induced by `alive`.
fn dominates(g: &Graph, alive: &[bool], b: usize, a: usize) -> bool {
    if a == b || !alive[a] || !alive[b] {
        return false;
    }
    if g.has_loop(b) && !g.adjacent(a, b) {
        return false;
    }
    g.neighbors(b)
        .iter()
        .filter(|&&x| alive[x])
        .all(|&x| g.adjacent(a, x))
}

fn find_fold_in(g: &Graph, alive: &[bool]) -> Option<Fold> {
    for b in g.vertices() {
        for a in g.vertices() {
            if dominates(g, alive, b, a) {
                return Some(Fold { folded: b, into: a });
            }
        }
    }
    None
}

/// The lexicographically least `(folded, into)` pair, or `None` if `g` is stiff.
pub fn find_fold(g: &Graph) -> Option<Fold> {
    find_fold_in(g, &vec![true; g.n()])
}

pub fn is_stiff(g: &Graph) -> bool {
    find_fold(g).is_none()
}

/// A sequence of folds. [`dismantle`] produces one that ends in a stiff
/// core; shorter prefixes are still valid retractions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DismantlingSequence {
    pub graph: Graph,
    pub folds: Vec<Fold>,
}

impl DismantlingSequence {
    /// Surviving vertices, in their original numbering.
    pub fn core_vertices(&self) -> Vec<usize> {
        let mut alive = vec![true; self.graph.n()];
        for f in &self.folds {
            alive[f.folded] = false;
        }
        self.graph.vertices().filter(|&v| alive[v]).collect()
    }

    /// The residual graph, renumbered densely; labels carry the original indices.
    pub fn core(&self) -> Graph {
        let mut core = self.graph.induced_subgraph(&self.core_vertices());
        core.set_name(format!("{}_core", self.graph.name()));
        core
    }

    /// Image of each vertex under the composed retraction onto the core.
    pub fn retraction(&self) -> Vec<usize> {
        let mut r: Vec<usize> = self.graph.vertices().collect();
        for f in self.folds.iter().rev() {
            r[f.folded] = r[f.into];
        }
        r
    }

    /// Every fold is valid in the graph remaining at its turn.
    pub fn folds_valid(&self) -> bool {
        let mut alive = vec![true; self.graph.n()];
        for f in &self.folds {
            if !dominates(&self.graph, &alive, f.folded, f.into) {
                return false;
            }
            alive[f.folded] = false;
        }
        true
    }

    /// The residual graph admits no further fold.
    pub fn is_complete(&self) -> bool {
        let mut alive = vec![true; self.graph.n()];
        for f in &self.folds {
            alive[f.folded] = false;
        }
        find_fold_in(&self.graph, &alive).is_none()
    }

    pub fn is_valid(&self) -> bool {
        self.folds_valid() && self.is_complete()
    }

    /// The first `k` folds.
    pub fn prefix(&self, k: usize) -> DismantlingSequence {
        DismantlingSequence {
            graph: self.graph.clone(),
            folds: self.folds[..k.min(self.folds.len())].to_vec(),
        }
    }
}

/// Folds greedily (least pair first) until the remaining graph is stiff.
pub fn dismantle(g: &Graph) -> DismantlingSequence {
    let mut alive = vec![true; g.n()];
    let mut folds = Vec::new();
    while let Some(f) = find_fold_in(g, &alive) {
        alive[f.folded] = false;
        folds.push(f);
    }
    DismantlingSequence {
        graph: g.clone(),
        folds,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Retracted {
    /// Homomorphism into the core, in the original vertex numbering of `g`.
    pub image: Homomorphism,
    /// Path in Col(source, g) from the input map to `image`.
    pub path: RecoloringPath,
}

/// Pushes `alpha: source -> seq.graph` onto the stiff core: for each fold
/// `b -> a` in order, every source vertex currently on `b` moves to `a`.
pub fn fold_retraction_path(
    source: &Graph,
    alpha: &Homomorphism,
    seq: &DismantlingSequence,
) -> Result<Retracted, ReductionError> {
    let g = &seq.graph;
    check_homomorphism(source, g, alpha.map())?;
    let mut cur = alpha.map().to_vec();
    let mut steps = Vec::new();
    for f in &seq.folds {
        for v in source.vertices() {
            if cur[v] == f.folded {
                // a looped source vertex on b forces b ~ a, so the move stays in Col
                debug_assert!(!source.has_loop(v) || g.adjacent(f.folded, f.into));
                steps.push(RecoloringStep::new(v, f.folded, f.into));
                cur[v] = f.into;
            }
        }
    }
    Ok(Retracted {
        image: Homomorphism::from_map_unchecked(cur),
        path: RecoloringPath {
            start: alpha.clone(),
            steps,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::hom::verify_path;

    fn brute_stiff(g: &Graph) -> bool {
        for b in g.vertices() {
            for a in g.vertices() {
                if a == b {
                    continue;
                }
                let closed_b: Vec<usize> = g.vertices().filter(|&x| g.adjacent(b, x)).collect();
                if closed_b.iter().all(|&x| g.adjacent(a, x)) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn reflexive_edge_folds() {
        let k2 = complete(2).reflexive_closure();
        // both vertices fold into each other; (folded, into) = (0, 1) is least
        assert_eq!(find_fold(&k2), Some(Fold { folded: 0, into: 1 }));
        let seq = dismantle(&k2);
        assert_eq!(seq.core_vertices(), vec![1]);
    }

    #[test]
    fn odd_cycle_is_stiff() {
        assert_eq!(find_fold(&cycle(5)), None);
        let seq = dismantle(&cycle(5));
        assert!(seq.folds.is_empty());
        assert_eq!(seq.core_vertices(), vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn complete_reflexive_dismantles_to_a_loop() {
        let seq = dismantle(&complete(4).reflexive_closure());
        assert!(seq.is_valid());
        let core = seq.core();
        assert_eq!(core.n(), 1);
        assert!(core.is_reflexive());
    }

    #[test]
    fn single_fold_path() {
        let k1 = Graph::from_edges("k1", 1, [0], []).unwrap();
        let k2 = complete(2).reflexive_closure();
        let seq = DismantlingSequence {
            graph: k2.clone(),
            folds: vec![Fold { folded: 1, into: 0 }],
        };
        let alpha = Homomorphism::from_map_unchecked(vec![1]);
        let r = fold_retraction_path(&k1, &alpha, &seq).unwrap();
        assert_eq!(r.path.len(), 1);
        assert_eq!(r.image.map(), &[0]);
        assert!(verify_path(&k1, &k2, &r.path, &r.image));

        let on_core = Homomorphism::from_map_unchecked(vec![0]);
        assert!(fold_retraction_path(&k1, &on_core, &seq)
            .unwrap()
            .path
            .is_empty());
    }

    #[test]
    fn stiffness_matches_brute_force_on_small_graphs() {
        for n in 1..=4usize {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            for mask in 0u32..(1 << pairs.len()) {
                for loops in 0u32..(1 << n) {
                    let edges = pairs
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, &e)| e);
                    let g =
                        Graph::from_edges("g", n, (0..n).filter(|v| loops & (1 << v) != 0), edges)
                            .unwrap();
                    assert_eq!(is_stiff(&g), brute_stiff(&g), "{:?}", g);
                    let seq = dismantle(&g);
                    assert!(seq.is_valid());
                    let r = seq.retraction();
                    let core = seq.core_vertices();
                    assert!(r.iter().all(|x| core.contains(x)));
                }
            }
        }
    }
}
