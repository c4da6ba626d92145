//! The product with `K2` and the unlooping of reflexive paths.

use crate::error::{PathError, ReductionError};
use crate::graph::{named, Bipartition, Graph};
use crate::hom::{Homomorphism, RecoloringPath, RecoloringStep};
use crate::instance::Instance;

/// `h x K2`. Vertex `(a, i)` has index `2a + i`, so its side is `i`.
pub fn product_with_k2(h: &Graph) -> Graph {
    let mut p = h.tensor_product(&named::complete(2));
    p.set_name(format!("{}xK2", h.name()));
    p
}

/// Sides of `h x K2` by the `K2` coordinate.
pub fn product_sides(h: &Graph) -> Bipartition {
    Bipartition::from_sides((0..2 * h.n()).map(|i| (i % 2) as u8).collect())
}

/// `alpha'(u) = (alpha(u), side(u))`.
pub fn lift_to_product(alpha: &Homomorphism, sides: &Bipartition) -> Homomorphism {
    Homomorphism::from_map_unchecked(
        alpha
            .map()
            .iter()
            .enumerate()
            .map(|(u, &a)| 2 * a + sides.side(u) as usize)
            .collect(),
    )
}

/// Reduces an instance with bipartite `g` to one over `h x K2`, with each
/// vertex of `g` kept on the `K2` side of its class.
pub fn product_lift(instance: &Instance) -> Result<Instance, ReductionError> {
    let sides = instance
        .g
        .bipartition()
        .ok_or_else(|| ReductionError::NotBipartite(instance.g.name().to_string()))?;
    let target = product_with_k2(&instance.h);
    let alpha = lift_to_product(&instance.alpha, &sides);
    let beta = lift_to_product(&instance.beta, &sides);
    Ok(Instance {
        g: instance.g.clone(),
        h: target,
        alpha,
        beta,
    })
}

/// Projects a path in Col(g, h x K2) onto Col(g, h), dropping moves that
/// only change the `K2` coordinate.
pub fn product_project(path: &RecoloringPath) -> RecoloringPath {
    let start = Homomorphism::from_map_unchecked(path.start.map().iter().map(|&c| c / 2).collect());
    let steps = path
        .steps
        .iter()
        .map(|s| RecoloringStep::new(s.vertex, s.from / 2, s.to / 2))
        .filter(|s| !s.is_noop())
        .collect();
    RecoloringPath { start, steps }
}

/// Orientation of `g` against `h`: `Some(false)` when every vertex maps to
/// its own side, `Some(true)` when every vertex maps to the opposite side.
fn orientation(map: &[usize], g_sides: &Bipartition, h_sides: &Bipartition) -> Option<bool> {
    let same = map
        .iter()
        .enumerate()
        .all(|(u, &c)| h_sides.side(c) == g_sides.side(u));
    let opposite = map
        .iter()
        .enumerate()
        .all(|(u, &c)| h_sides.side(c) != g_sides.side(u));
    match (same, opposite) {
        (true, _) => Some(false),
        (false, true) => Some(true),
        _ => None,
    }
}

/// Turns a path in Col(g, h°) into one in Col(g, h) with the same endpoints,
/// where `g` is bipartite and `h` is irreflexive, bipartite and square-free.
///
/// Both endpoints must keep every vertex of `g` on one fixed side of `h`
/// (the "right" side). Moves are rewritten one at a time:
///
/// * a move onto a right colour is copied;
/// * a move from a right colour to a wrong one is dropped;
/// * a move between wrong colours `a` and `c` becomes a move to the unique
///   common neighbour of `a` and `c` in `h`.
pub fn unloop_sequence(
    g: &Graph,
    g_sides: &Bipartition,
    h: &Graph,
    h_sides: &Bipartition,
    path: &RecoloringPath,
) -> Result<RecoloringPath, ReductionError> {
    if !h.is_irreflexive() {
        return Err(ReductionError::NotIrreflexive(h.name().to_string()));
    }
    if !g_sides.is_valid_for(g) || !h_sides.is_valid_for(h) {
        return Err(ReductionError::Precondition(
            "bipartition does not match its graph".into(),
        ));
    }
    let start_map = path.start.map();
    let flip = orientation(start_map, g_sides, h_sides).ok_or(ReductionError::Misaligned)?;
    if orientation(path.end().map(), g_sides, h_sides) != Some(flip) {
        return Err(ReductionError::Misaligned);
    }
    let right = |u: usize, c: usize| (h_sides.side(c) == g_sides.side(u)) != flip;

    let mut orig = start_map.to_vec();
    let mut cur = start_map.to_vec();
    let mut steps = Vec::new();
    for (index, s) in path.steps.iter().enumerate() {
        let u = s.vertex;
        if u >= g.n() {
            return Err(PathError::VertexOutOfRange { index, vertex: u }.into());
        }
        if orig[u] != s.from {
            return Err(PathError::FromMismatch {
                index,
                vertex: u,
                expected: orig[u],
                actual: s.from,
            }
            .into());
        }
        let (a, c) = (s.from, s.to);
        orig[u] = c;
        if a == c {
            continue;
        }
        let target = if right(u, c) {
            c
        } else if right(u, a) {
            continue;
        } else {
            let common = h.common_neighbors(a, c);
            match common.as_slice() {
                [b] => *b,
                [] if g.degree(u) == 0 => continue,
                _ => {
                    return Err(ReductionError::CommonNeighbor {
                        a,
                        c,
                        count: common.len(),
                    })
                }
            }
        };
        if cur[u] != target {
            steps.push(RecoloringStep::new(u, cur[u], target));
            cur[u] = target;
        }
    }
    Ok(RecoloringPath {
        start: path.start.clone(),
        steps,
    })
}

/// Reduces Recol(h) on bipartite instances, for irreflexive square-free `h`,
/// to Recol((h x K2)°).
pub fn bipartite_irreflexive_to_reflexive(instance: &Instance) -> Result<Instance, ReductionError> {
    let h = &instance.h;
    if !h.is_irreflexive() {
        return Err(ReductionError::NotIrreflexive(h.name().to_string()));
    }
    if !h.is_square_free() {
        return Err(ReductionError::NotSquareFree(h.name().to_string()));
    }
    let lifted = product_lift(instance)?;
    let mut target = lifted.h.reflexive_closure();
    target.set_name(format!("{}xK2_refl", h.name()));
    Ok(Instance {
        h: target,
        ..lifted
    })
}

/// Brings a path of the reflexive instance back to Col(g, h): unloop inside
/// `h x K2`, then project.
pub fn reflexive_path_to_original(
    g: &Graph,
    h: &Graph,
    path: &RecoloringPath,
) -> Result<RecoloringPath, ReductionError> {
    let g_sides = g
        .bipartition()
        .ok_or_else(|| ReductionError::NotBipartite(g.name().to_string()))?;
    let hk = product_with_k2(h);
    let unlooped = unloop_sequence(g, &g_sides, &hk, &product_sides(h), path)?;
    Ok(product_project(&unlooped))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::hom::verify_path;

    fn hom(m: &[usize]) -> Homomorphism {
        Homomorphism::from_map_unchecked(m.to_vec())
    }

    #[test]
    fn product_examples() {
        let c4k2 = product_with_k2(&cycle(4));
        assert_eq!((c4k2.n(), c4k2.edge_count()), (8, 8));
        assert!(c4k2.is_bipartite());
        let k3k2 = product_with_k2(&complete(3));
        assert!(k3k2.is_connected());
        assert!(k3k2.vertices().all(|v| k3k2.degree(v) == 2));
        // an edge of K2 x K2 is two disjoint edges
        let k2k2 = product_with_k2(&complete(2));
        assert_eq!(k2k2.edge_set(), [(0, 3), (1, 2)].into_iter().collect());
    }

    #[test]
    fn lift_and_project() {
        let p2 = path(2);
        let inst = Instance::new(p2.clone(), complete(3), hom(&[0, 1]), hom(&[1, 2])).unwrap();
        let lifted = product_lift(&inst).unwrap();
        assert_eq!(lifted.alpha.map(), &[0, 3]);
        assert_eq!(lifted.beta.map(), &[2, 5]);
        lifted.validate().unwrap();
        let p = RecoloringPath {
            start: hom(&[0, 3]),
            steps: vec![RecoloringStep::new(0, 0, 4), RecoloringStep::new(1, 3, 5)],
        };
        let projected = product_project(&p);
        assert_eq!(projected.start.map(), &[0, 1]);
        assert_eq!(
            projected.steps,
            vec![RecoloringStep::new(0, 0, 2), RecoloringStep::new(1, 1, 2)]
        );
    }

    #[test]
    fn lift_requires_bipartite_source() {
        let inst = Instance::new(cycle(3), complete(3), hom(&[0, 1, 2]), hom(&[0, 1, 2])).unwrap();
        assert!(matches!(
            product_lift(&inst),
            Err(ReductionError::NotBipartite(_))
        ));
    }

    #[test]
    fn unloop_p4_example() {
        // g = u - v, h = a - b - c - d
        let g = path(2);
        let h = path(4);
        let hk = product_with_k2(&h);
        let hr = hk.reflexive_closure();
        let v = |x: usize, i: usize| 2 * x + i;
        let (a, b, c, d) = (0, 1, 2, 3);
        let s = RecoloringPath {
            start: hom(&[v(a, 0), v(b, 1)]),
            steps: vec![
                RecoloringStep::new(1, v(b, 1), v(a, 0)),
                RecoloringStep::new(0, v(a, 0), v(b, 1)),
                RecoloringStep::new(1, v(a, 0), v(c, 0)),
                RecoloringStep::new(0, v(b, 1), v(d, 1)),
                RecoloringStep::new(1, v(c, 0), v(d, 1)),
                RecoloringStep::new(0, v(d, 1), v(c, 0)),
            ],
        };
        let end = hom(&[v(c, 0), v(d, 1)]);
        assert!(verify_path(&g, &hr, &s, &end));
        let out =
            unloop_sequence(&g, &g.bipartition().unwrap(), &hk, &product_sides(&h), &s).unwrap();
        assert_eq!(
            out.steps,
            vec![
                RecoloringStep::new(0, v(a, 0), v(c, 0)),
                RecoloringStep::new(1, v(b, 1), v(d, 1))
            ]
        );
        assert!(verify_path(&g, &hk, &out, &end));
    }

    #[test]
    fn unloop_rejects_misaligned_endpoints() {
        let g = path(2);
        let h = path(4);
        let hk = product_with_k2(&h);
        let p = RecoloringPath::empty(hom(&[0, 2]));
        assert!(matches!(
            unloop_sequence(&g, &g.bipartition().unwrap(), &hk, &product_sides(&h), &p),
            Err(ReductionError::Misaligned)
        ));
    }

    #[test]
    fn flipped_orientation_is_accepted() {
        let g = path(2);
        let h = path(3);
        let hk = product_with_k2(&h);
        // u on side 1, v on side 0
        let start = hom(&[1, 2]);
        let out = unloop_sequence(
            &g,
            &g.bipartition().unwrap(),
            &hk,
            &product_sides(&h),
            &RecoloringPath::empty(start.clone()),
        )
        .unwrap();
        assert_eq!(out.start, start);
    }

    #[test]
    fn reflexive_target_requires_square_free() {
        let inst = Instance::new(path(2), cycle(4), hom(&[0, 1]), hom(&[1, 2])).unwrap();
        assert!(matches!(
            bipartite_irreflexive_to_reflexive(&inst),
            Err(ReductionError::NotSquareFree(_))
        ));
        let inst = Instance::new(path(2), cycle(6), hom(&[0, 1]), hom(&[1, 2])).unwrap();
        let r = bipartite_irreflexive_to_reflexive(&inst).unwrap();
        assert!(r.h.is_reflexive());
        assert_eq!(r.h.n(), 12);
        r.validate().unwrap();
    }
}
