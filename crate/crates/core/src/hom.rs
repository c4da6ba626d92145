//! Homomorphisms, the Hom/Col adjacency relations and recoloring paths.

use std::fmt;

use crate::error::{HomError, PathError};
use crate::graph::Graph;

/// A total vertex map `source -> target`. The graphs are passed alongside
/// wherever validity matters; the map itself is just the image vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Homomorphism {
    map: Vec<usize>,
}

impl fmt::Debug for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hom{:?}", self.map)
    }
}

impl Homomorphism {
    /// Checked constructor.
    pub fn new(g: &Graph, h: &Graph, map: Vec<usize>) -> Result<Self, HomError> {
        check_homomorphism(g, h, &map)?;
        Ok(Homomorphism { map })
    }

    /// Wraps `map` without checking it.
    pub fn from_map_unchecked(map: Vec<usize>) -> Self {
        Homomorphism { map }
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn into_map(self) -> Vec<usize> {
        self.map
    }

    pub fn get(&self, v: usize) -> usize {
        self.map[v]
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub(crate) fn set(&mut self, v: usize, c: usize) {
        self.map[v] = c;
    }

    /// Vertices where `self` and `other` differ.
    pub fn diff(&self, other: &Homomorphism) -> Vec<usize> {
        self.map
            .iter()
            .zip(&other.map)
            .enumerate()
            .filter(|(_, (a, b))| a != b)
            .map(|(v, _)| v)
            .collect()
    }
}

pub fn check_homomorphism(g: &Graph, h: &Graph, map: &[usize]) -> Result<(), HomError> {
    if map.len() != g.n() {
        return Err(HomError::WrongLength {
            expected: g.n(),
            got: map.len(),
        });
    }
    for (v, &a) in map.iter().enumerate() {
        if a >= h.n() {
            return Err(HomError::ImageOutOfRange {
                vertex: v,
                image: a,
                n: h.n(),
            });
        }
    }
    for v in g.loop_vertices() {
        if !h.has_loop(map[v]) {
            return Err(HomError::BrokenLoop {
                vertex: v,
                image: map[v],
            });
        }
    }
    for (u, v) in g.edges() {
        if !h.adjacent(map[u], map[v]) {
            return Err(HomError::BrokenEdge {
                u,
                v,
                a: map[u],
                b: map[v],
            });
        }
    }
    Ok(())
}

pub fn is_homomorphism(g: &Graph, h: &Graph, map: &[usize]) -> bool {
    check_homomorphism(g, h, map).is_ok()
}

/// Hom-graph adjacency: `alpha(u) ~ beta(v)` for every edge and loop `uv` of
/// `g`, in both orientations.
pub fn hom_adjacent(g: &Graph, h: &Graph, alpha: &Homomorphism, beta: &Homomorphism) -> bool {
    g.loop_vertices()
        .all(|v| h.adjacent(alpha.get(v), beta.get(v)))
        && g.edges().all(|(u, v)| {
            h.adjacent(alpha.get(u), beta.get(v)) && h.adjacent(alpha.get(v), beta.get(u))
        })
}

/// Whether recolouring `w` from its colour in `current` to `to` is an edge of
/// Col(g, h). `current` must be a homomorphism.
pub fn is_col_move(g: &Graph, h: &Graph, current: &[usize], w: usize, to: usize) -> bool {
    if to >= h.n() {
        return false;
    }
    if g.has_loop(w) && !(h.has_loop(to) && h.adjacent(current[w], to)) {
        return false;
    }
    g.neighbors(w).iter().all(|&x| h.adjacent(to, current[x]))
}

/// Col(g, h) adjacency: both maps are homomorphisms, they differ on at most
/// one vertex `w`, and `alpha(w) ~ beta(w)` when `w` carries a loop.
pub fn col_adjacent(g: &Graph, h: &Graph, alpha: &Homomorphism, beta: &Homomorphism) -> bool {
    if !is_homomorphism(g, h, alpha.map()) || !is_homomorphism(g, h, beta.map()) {
        return false;
    }
    match alpha.diff(beta).as_slice() {
        [] => true,
        [w] => !g.has_loop(*w) || h.adjacent(alpha.get(*w), beta.get(*w)),
        _ => false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RecoloringStep {
    pub vertex: usize,
    pub from: usize,
    pub to: usize,
}

impl RecoloringStep {
    pub fn new(vertex: usize, from: usize, to: usize) -> Self {
        RecoloringStep { vertex, from, to }
    }

    pub fn is_noop(&self) -> bool {
        self.from == self.to
    }

    pub fn reversed(&self) -> Self {
        RecoloringStep {
            vertex: self.vertex,
            from: self.to,
            to: self.from,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoloringPath {
    pub start: Homomorphism,
    pub steps: Vec<RecoloringStep>,
}

impl RecoloringPath {
    pub fn empty(start: Homomorphism) -> Self {
        RecoloringPath {
            start,
            steps: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Map reached after replaying every step (no validity checks).
    pub fn end(&self) -> Homomorphism {
        let mut cur = self.start.clone();
        for s in &self.steps {
            cur.set(s.vertex, s.to);
        }
        cur
    }

    /// Every intermediate map, starting with `start` and ending with `end()`.
    pub fn states(&self) -> Vec<Homomorphism> {
        let mut cur = self.start.clone();
        let mut out = vec![cur.clone()];
        for s in &self.steps {
            cur.set(s.vertex, s.to);
            out.push(cur.clone());
        }
        out
    }

    /// Drops no-op steps.
    pub fn normalize(mut self) -> Self {
        self.steps.retain(|s| !s.is_noop());
        self
    }

    /// Same moves walked backwards, starting at `end()`.
    pub fn reversed(&self) -> Self {
        RecoloringPath {
            start: self.end(),
            steps: self
                .steps
                .iter()
                .rev()
                .map(RecoloringStep::reversed)
                .collect(),
        }
    }

    /// Appends `other`, which must start where `self` ends.
    pub fn concat(mut self, other: RecoloringPath) -> Self {
        debug_assert_eq!(self.end(), other.start);
        self.steps.extend(other.steps);
        self
    }
}

/// Replays `path` in Col(g, h), checking every step, and that it ends at
/// `expected_end`.
pub fn check_path(
    g: &Graph,
    h: &Graph,
    path: &RecoloringPath,
    expected_end: &Homomorphism,
) -> Result<(), PathError> {
    check_homomorphism(g, h, path.start.map()).map_err(PathError::InvalidStart)?;
    let mut cur = path.start.map().to_vec();
    for (index, s) in path.steps.iter().enumerate() {
        if s.vertex >= g.n() {
            return Err(PathError::VertexOutOfRange {
                index,
                vertex: s.vertex,
            });
        }
        if cur[s.vertex] != s.from {
            return Err(PathError::FromMismatch {
                index,
                vertex: s.vertex,
                expected: s.from,
                actual: cur[s.vertex],
            });
        }
        if !is_col_move(g, h, &cur, s.vertex, s.to) {
            return Err(PathError::IllegalMove {
                index,
                vertex: s.vertex,
                from: s.from,
                to: s.to,
            });
        }
        cur[s.vertex] = s.to;
    }
    if cur != expected_end.map() {
        return Err(PathError::WrongEnd {
            expected: expected_end.map().to_vec(),
            actual: cur,
        });
    }
    Ok(())
}

pub fn verify_path(
    g: &Graph,
    h: &Graph,
    path: &RecoloringPath,
    expected_end: &Homomorphism,
) -> bool {
    check_path(g, h, path, expected_end).is_ok()
}

/// Turns a Hom-graph edge into a Col path by switching the differing
/// vertices one at a time in index order.
pub fn hom_edge_to_col_path(
    g: &Graph,
    h: &Graph,
    alpha: &Homomorphism,
    beta: &Homomorphism,
) -> Result<RecoloringPath, HomError> {
    check_homomorphism(g, h, alpha.map())?;
    check_homomorphism(g, h, beta.map())?;
    if !hom_adjacent(g, h, alpha, beta) {
        // report the first offending pair
        for (u, v) in g.edges().chain(g.loop_vertices().map(|v| (v, v))) {
            for (x, y) in [(u, v), (v, u)] {
                if !h.adjacent(alpha.get(x), beta.get(y)) {
                    return Err(HomError::BrokenEdge {
                        u: x,
                        v: y,
                        a: alpha.get(x),
                        b: beta.get(y),
                    });
                }
            }
        }
    }
    let steps = alpha
        .diff(beta)
        .into_iter()
        .map(|v| RecoloringStep::new(v, alpha.get(v), beta.get(v)))
        .collect();
    Ok(RecoloringPath {
        start: alpha.clone(),
        steps,
    })
}

/// Upper bound on candidate maps tried by [`enumerate_homomorphisms`].
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 10_000_000;

/// All homomorphisms `g -> h` in lexicographic order of their map vectors.
///
/// Backtracking assigns vertices in index order; `budget` bounds the number
/// of partial assignments explored.
pub fn enumerate_homomorphisms(
    g: &Graph,
    h: &Graph,
    budget: u64,
) -> Result<Vec<Homomorphism>, crate::error::OracleError> {
    let n = g.n();
    let mut out = Vec::new();
    if n == 0 {
        out.push(Homomorphism { map: Vec::new() });
        return Ok(out);
    }
    let mut map = vec![0usize; n];
    let mut explored = 0u64;
    let mut v = 0usize;
    let mut next = vec![0usize; n];
    // iterative backtracking: next[v] is the next colour to try at v
    loop {
        let mut placed = false;
        while next[v] < h.n() {
            let c = next[v];
            next[v] += 1;
            explored += 1;
            if explored > budget {
                return Err(crate::error::OracleError::BudgetExceeded {
                    budget: budget as usize,
                });
            }
            let ok = (!g.has_loop(v) || h.has_loop(c))
                && g.neighbors(v)
                    .iter()
                    .take_while(|&&x| x < v)
                    .all(|&x| h.adjacent(c, map[x]));
            if ok {
                map[v] = c;
                placed = true;
                break;
            }
        }
        if placed {
            if v + 1 == n {
                out.push(Homomorphism { map: map.clone() });
            } else {
                v += 1;
                next[v] = 0;
            }
        } else {
            if v == 0 {
                break;
            }
            v -= 1;
        }
    }
    Ok(out)
}
