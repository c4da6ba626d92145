//! Moving between Col(G, H) and Col(G°, H) for reflexive, square-free `H`.

use crate::error::ReductionError;
use crate::graph::Graph;
use crate::hom::{
    check_homomorphism, col_adjacent, is_col_move, Homomorphism, RecoloringPath, RecoloringStep,
};
use crate::instance::Instance;

/// Replaces one move of Col(G, H) by at most two moves of Col(G°, H).
///
/// If the old and new colours of the moving vertex `w` are adjacent the
/// move is kept. Otherwise `w` passes through the least colour adjacent to
/// both and to the colour of every neighbour of `w`.
pub fn expand_move_reflexive(
    g: &Graph,
    h: &Graph,
    alpha: &Homomorphism,
    beta: &Homomorphism,
) -> Result<RecoloringPath, ReductionError> {
    if !h.is_reflexive() {
        return Err(ReductionError::NotReflexive(h.name().to_string()));
    }
    check_homomorphism(g, h, alpha.map())?;
    check_homomorphism(g, h, beta.map())?;
    if !col_adjacent(g, h, alpha, beta) {
        return Err(ReductionError::Precondition(
            "the two maps are not adjacent in Col(G, H)".into(),
        ));
    }
    let diff = alpha.diff(beta);
    let Some(&w) = diff.first() else {
        return Ok(RecoloringPath::empty(alpha.clone()));
    };
    let closed = g.reflexive_closure();
    let (a, b) = (alpha.get(w), beta.get(w));
    if is_col_move(&closed, h, alpha.map(), w, b) {
        return Ok(RecoloringPath {
            start: alpha.clone(),
            steps: vec![RecoloringStep::new(w, a, b)],
        });
    }
    let c = h
        .vertices()
        .find(|&c| {
            c != a && c != b && h.adjacent(c, b) && is_col_move(&closed, h, alpha.map(), w, c)
        })
        .ok_or(ReductionError::NoIntermediate {
            vertex: w,
            from: a,
            to: b,
        })?;
    Ok(RecoloringPath {
        start: alpha.clone(),
        steps: vec![RecoloringStep::new(w, a, c), RecoloringStep::new(w, c, b)],
    })
}

/// Expands every move of a Col(G, H) path.
pub fn transfer_to_closure(
    g: &Graph,
    h: &Graph,
    path: &RecoloringPath,
) -> Result<RecoloringPath, ReductionError> {
    let mut out = RecoloringPath::empty(path.start.clone());
    let mut cur = path.start.clone();
    for &s in &path.steps {
        let mut next = cur.clone();
        next.set(s.vertex, s.to);
        out.steps
            .extend(expand_move_reflexive(g, h, &cur, &next)?.steps);
        cur = next;
    }
    Ok(out)
}

/// The instance over `G°`, same target and endpoints.
pub fn reflexive_closure_reduction(instance: &Instance) -> Result<Instance, ReductionError> {
    if !instance.h.is_reflexive() {
        return Err(ReductionError::NotReflexive(instance.h.name().to_string()));
    }
    if !instance.h.is_square_free() {
        return Err(ReductionError::NotSquareFree(instance.h.name().to_string()));
    }
    let mut g = instance.g.reflexive_closure();
    g.set_name(format!("{}_refl", instance.g.name()));
    Ok(Instance {
        g,
        ..instance.clone()
    })
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
    fn adjacent_colours_keep_the_move() {
        let h = cycle(5).reflexive_closure();
        let g = path(2);
        let p = expand_move_reflexive(&g, &h, &hom(&[0, 1]), &hom(&[1, 1])).unwrap();
        assert_eq!(p.steps, vec![RecoloringStep::new(0, 0, 1)]);
    }

    #[test]
    fn distance_two_goes_through_the_middle() {
        let h = cycle(5).reflexive_closure();
        let g = path(2);
        // 0 -> 2 is legal in Col(P2, C5°) since both are adjacent to 1
        let (a, b) = (hom(&[0, 1]), hom(&[2, 1]));
        let p = expand_move_reflexive(&g, &h, &a, &b).unwrap();
        assert_eq!(
            p.steps,
            vec![RecoloringStep::new(0, 0, 1), RecoloringStep::new(0, 1, 2)]
        );
        assert!(verify_path(&g.reflexive_closure(), &h, &p, &b));
    }

    #[test]
    fn no_intermediate_for_far_colours() {
        let h = path(4).reflexive_closure();
        let g = Graph::new("k1", 1);
        let err = expand_move_reflexive(&g, &h, &hom(&[0]), &hom(&[3])).unwrap_err();
        assert!(matches!(
            err,
            ReductionError::NoIntermediate {
                vertex: 0,
                from: 0,
                to: 3
            }
        ));
    }

    #[test]
    fn non_adjacent_pair_is_rejected() {
        let h = cycle(5).reflexive_closure();
        let g = path(2);
        assert!(expand_move_reflexive(&g, &h, &hom(&[0, 1]), &hom(&[2, 2])).is_err());
    }
}
