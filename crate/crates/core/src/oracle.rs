//! Brute-force reachability in Col(g, h).
//!
//! States are homomorphisms keyed by their map vector; moves are single-vertex
//! recolourings that stay inside Col(g, h). Successors are generated with
//! vertices ascending and colours ascending, so shortest paths are
//! reproducible.

use std::collections::VecDeque;

use rustc_hash::FxHashMap as HashMap;

use crate::error::OracleError;
use crate::graph::Graph;
use crate::hom::{check_homomorphism, hom_adjacent, Homomorphism, RecoloringPath, RecoloringStep};
use crate::instance::Instance;

pub const DEFAULT_STATE_BUDGET: usize = 1_000_000;
pub const DEFAULT_EXPORT_CAP: u64 = 5_000;

enum StateIndex {
    Packed { bits: u32, map: HashMap<u128, u32> },
    Wide(HashMap<Box<[u32]>, u32>),
}

impl StateIndex {
    fn new(n: usize, colours: usize) -> Self {
        let bits = usize::BITS - colours.saturating_sub(1).leading_zeros();
        let bits = bits.max(1);
        if (bits as usize) * n <= 128 {
            StateIndex::Packed {
                bits,
                map: HashMap::default(),
            }
        } else {
            StateIndex::Wide(HashMap::default())
        }
    }

    fn pack(bits: u32, state: &[u32]) -> u128 {
        state
            .iter()
            .fold(0u128, |acc, &c| (acc << bits) | c as u128)
    }

    fn get(&self, state: &[u32]) -> Option<u32> {
        match self {
            StateIndex::Packed { bits, map } => map.get(&Self::pack(*bits, state)).copied(),
            StateIndex::Wide(map) => map.get(state).copied(),
        }
    }

    /// Inserts if absent; returns whether the state was new.
    fn insert(&mut self, state: &[u32], idx: u32) -> bool {
        match self {
            StateIndex::Packed { bits, map } => {
                let key = Self::pack(*bits, state);
                match map.entry(key) {
                    std::collections::hash_map::Entry::Occupied(_) => false,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(idx);
                        true
                    }
                }
            }
            StateIndex::Wide(map) => {
                if map.contains_key(state) {
                    false
                } else {
                    map.insert(state.into(), idx);
                    true
                }
            }
        }
    }
}

/// Breadth-first search tree of one component of Col(g, h).
pub struct ReachTree {
    n: usize,
    states: Vec<u32>,
    parent: Vec<u32>,
    index: StateIndex,
}

impl ReachTree {
    /// Number of states discovered.
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    fn state(&self, i: usize) -> &[u32] {
        &self.states[i * self.n..(i + 1) * self.n]
    }

    fn key(map: &[usize]) -> Vec<u32> {
        map.iter().map(|&c| c as u32).collect()
    }

    pub fn contains(&self, map: &[usize]) -> bool {
        self.index.get(&Self::key(map)).is_some()
    }

    pub fn root(&self) -> Homomorphism {
        self.hom_at(0)
    }

    fn hom_at(&self, i: usize) -> Homomorphism {
        Homomorphism::from_map_unchecked(self.state(i).iter().map(|&c| c as usize).collect())
    }

    /// BFS depth of `map`, i.e. its Col distance from the root.
    pub fn depth(&self, map: &[usize]) -> Option<usize> {
        let mut i = self.index.get(&Self::key(map))? as usize;
        let mut d = 0;
        while i != 0 {
            i = self.parent[i] as usize;
            d += 1;
        }
        Some(d)
    }

    fn chain(&self, mut i: usize) -> Vec<usize> {
        let mut out = vec![i];
        while i != 0 {
            i = self.parent[i] as usize;
            out.push(i);
        }
        out.reverse();
        out
    }

    fn step_between(&self, a: usize, b: usize) -> RecoloringStep {
        let (sa, sb) = (self.state(a), self.state(b));
        let v = (0..self.n)
            .find(|&v| sa[v] != sb[v])
            .expect("tree edges change one vertex");
        RecoloringStep::new(v, sa[v] as usize, sb[v] as usize)
    }

    /// Shortest path from the root to `map`.
    pub fn path_to(&self, map: &[usize]) -> Option<RecoloringPath> {
        let i = self.index.get(&Self::key(map))? as usize;
        let chain = self.chain(i);
        let steps = chain
            .windows(2)
            .map(|w| self.step_between(w[0], w[1]))
            .collect();
        Some(RecoloringPath {
            start: self.root(),
            steps,
        })
    }

    /// A path between two states of this tree through their lowest common
    /// ancestor. Not necessarily shortest.
    pub fn path_between(&self, from: &[usize], to: &[usize]) -> Option<RecoloringPath> {
        let a = self.index.get(&Self::key(from))? as usize;
        let b = self.index.get(&Self::key(to))? as usize;
        let (ca, cb) = (self.chain(a), self.chain(b));
        let common = ca.iter().zip(&cb).take_while(|(x, y)| x == y).count();
        let mut steps = Vec::new();
        for w in ca[common - 1..].windows(2).rev() {
            steps.push(self.step_between(w[1], w[0]));
        }
        for w in cb[common - 1..].windows(2) {
            steps.push(self.step_between(w[0], w[1]));
        }
        Some(RecoloringPath {
            start: self.hom_at(a),
            steps,
        })
    }

    /// All states, in discovery order.
    pub fn homomorphisms(&self) -> impl Iterator<Item = Homomorphism> + '_ {
        (0..self.len()).map(|i| self.hom_at(i))
    }
}

/// Closed neighbourhoods and an adjacency matrix of `h`, precomputed for
/// successor generation.
struct Moves<'a> {
    g: &'a Graph,
    hn: usize,
    closed: Vec<Vec<usize>>,
    adj: Vec<bool>,
}

impl<'a> Moves<'a> {
    fn new(g: &'a Graph, h: &'a Graph) -> Self {
        let hn = h.n();
        let closed = h.vertices().map(|v| h.closed_neighbors(v)).collect();
        let mut adj = vec![false; hn * hn];
        for a in h.vertices() {
            for b in h.vertices() {
                adj[a * hn + b] = h.adjacent(a, b);
            }
        }
        Moves { g, hn, closed, adj }
    }

    fn valid(&self, cur: &[usize], w: usize, c: usize) -> bool {
        let row = &self.adj[c * self.hn..(c + 1) * self.hn];
        (!self.g.has_loop(w) || row[cur[w]] && row[c])
            && self.g.neighbors(w).iter().all(|&x| row[cur[x]])
    }

    /// Calls `f(w, c)` for every Col move of `cur`, vertices then colours ascending.
    fn for_each(&self, cur: &[usize], mut f: impl FnMut(usize, usize)) {
        for w in self.g.vertices() {
            let mut try_colour = |c: usize| {
                if c != cur[w] && self.valid(cur, w, c) {
                    f(w, c);
                }
            };
            if self.g.has_loop(w) {
                self.closed[cur[w]].iter().for_each(|&c| try_colour(c));
            } else if let Some(&x) = self.g.neighbors(w).first() {
                self.closed[cur[x]].iter().for_each(|&c| try_colour(c));
            } else {
                (0..self.hn).for_each(try_colour);
            }
        }
    }
}

/// BFS from `start` over Col(g, h). Stops early once `stop_at` is found.
///
/// Returns `BudgetExceeded` if more than `budget` states would be visited;
/// this never masquerades as an unreachable answer.
pub fn explore(
    g: &Graph,
    h: &Graph,
    start: &Homomorphism,
    budget: usize,
    stop_at: Option<&Homomorphism>,
) -> Result<ReachTree, OracleError> {
    check_homomorphism(g, h, start.map()).map_err(OracleError::InvalidEndpoint)?;
    let n = g.n();
    let moves = Moves::new(g, h);
    let mut tree = ReachTree {
        n,
        states: Vec::new(),
        parent: Vec::new(),
        index: StateIndex::new(n, h.n()),
    };
    let root: Vec<u32> = ReachTree::key(start.map());
    tree.index.insert(&root, 0);
    tree.states.extend_from_slice(&root);
    tree.parent.push(0);
    if budget == 0 {
        return Err(OracleError::BudgetExceeded { budget });
    }
    if stop_at.is_some_and(|t| t == start) {
        return Ok(tree);
    }
    let target = stop_at.map(|t| ReachTree::key(t.map()));
    let mut queue = VecDeque::from([0usize]);
    let mut cur = vec![0usize; n];
    let mut next = vec![0u32; n];
    while let Some(i) = queue.pop_front() {
        for (v, &c) in tree.state(i).iter().enumerate() {
            cur[v] = c as usize;
        }
        let mut found = false;
        let mut overflow = false;
        moves.for_each(&cur, |w, c| {
            if found || overflow {
                return;
            }
            next.copy_from_slice(tree.state(i));
            next[w] = c as u32;
            let idx = tree.parent.len() as u32;
            if tree.index.insert(&next, idx) {
                if tree.parent.len() >= budget {
                    overflow = true;
                    return;
                }
                tree.states.extend_from_slice(&next);
                tree.parent.push(i as u32);
                queue.push_back(idx as usize);
                if target.as_deref() == Some(&next[..]) {
                    found = true;
                }
            }
        });
        if overflow {
            return Err(OracleError::BudgetExceeded { budget });
        }
        if found {
            break;
        }
    }
    Ok(tree)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reachability {
    pub reachable: bool,
    /// A shortest path when reachable.
    pub path: Option<RecoloringPath>,
    pub states_visited: usize,
}

/// Decides the instance by BFS and returns a shortest path when one exists.
pub fn reachable(instance: &Instance, budget: usize) -> Result<Reachability, OracleError> {
    instance.validate()?;
    let tree = explore(
        &instance.g,
        &instance.h,
        &instance.alpha,
        budget,
        Some(&instance.beta),
    )?;
    let path = tree.path_to(instance.beta.map());
    Ok(Reachability {
        reachable: path.is_some(),
        path,
        states_visited: tree.len(),
    })
}

/// Component structure of Col(g, h) restricted to the components touching a
/// given set of seed homomorphisms.
pub struct ColComponents {
    trees: Vec<ReachTree>,
}

impl ColComponents {
    pub fn build<'a>(
        g: &Graph,
        h: &Graph,
        seeds: impl IntoIterator<Item = &'a Homomorphism>,
        budget: usize,
    ) -> Result<Self, OracleError> {
        let mut trees: Vec<ReachTree> = Vec::new();
        for s in seeds {
            if trees.iter().any(|t| t.contains(s.map())) {
                continue;
            }
            trees.push(explore(g, h, s, budget, None)?);
        }
        Ok(ColComponents { trees })
    }

    pub fn component_of(&self, map: &[usize]) -> Option<usize> {
        self.trees.iter().position(|t| t.contains(map))
    }

    pub fn connected(&self, a: &Homomorphism, b: &Homomorphism) -> bool {
        match (self.component_of(a.map()), self.component_of(b.map())) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        }
    }

    pub fn path(&self, a: &Homomorphism, b: &Homomorphism) -> Option<RecoloringPath> {
        let c = self.component_of(a.map())?;
        self.trees[c].path_between(a.map(), b.map())
    }

    pub fn count(&self) -> usize {
        self.trees.len()
    }

    pub fn total_states(&self) -> usize {
        self.trees.iter().map(ReachTree::len).sum()
    }
}

/// Materialises Col(g, h): one vertex per homomorphism (labelled by its map
/// vector), an edge per single-vertex move, a loop on every vertex.
pub fn export_col_graph(
    g: &Graph,
    h: &Graph,
    cap: u64,
) -> Result<(Graph, Vec<Homomorphism>), OracleError> {
    let candidates = (h.n() as u64).checked_pow(g.n() as u32).unwrap_or(u64::MAX);
    if candidates > cap {
        return Err(OracleError::BudgetExceeded {
            budget: cap as usize,
        });
    }
    let homs = crate::hom::enumerate_homomorphisms(g, h, u64::MAX)?;
    let index: HashMap<&[usize], usize> =
        homs.iter().enumerate().map(|(i, a)| (a.map(), i)).collect();
    let mut col = Graph::new(format!("col_{}_{}", g.name(), h.name()), homs.len());
    let moves = Moves::new(g, h);
    for (i, a) in homs.iter().enumerate() {
        col.add_loop(i).expect("in range");
        let label = a
            .map()
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(" ");
        col.set_label(i, label).expect("in range");
        let mut cur = a.map().to_vec();
        moves.for_each(a.map(), |w, c| {
            let old = cur[w];
            cur[w] = c;
            let j = index[&cur[..]];
            cur[w] = old;
            if i < j {
                col.add_edge(i, j).expect("in range");
            }
        });
    }
    Ok((col, homs))
}

/// Connected components of Hom(g, h) over the given homomorphisms: entry
/// `i` is the least index in the component of `homs[i]`. Quadratic in the
/// number of maps.
pub fn hom_graph_components(g: &Graph, h: &Graph, homs: &[Homomorphism]) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..homs.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..homs.len() {
        for j in i + 1..homs.len() {
            if hom_adjacent(g, h, &homs[i], &homs[j]) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    (0..homs.len()).map(|i| find(&mut parent, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;
    use crate::hom::{enumerate_homomorphisms, verify_path, DEFAULT_ENUMERATION_BUDGET};

    fn hom(m: &[usize]) -> Homomorphism {
        Homomorphism::from_map_unchecked(m.to_vec())
    }

    fn k2_loop() -> Graph {
        complete(2).reflexive_closure()
    }

    #[test]
    fn trivial_instance_is_reachable_with_empty_path() {
        let inst = Instance::new(k2_loop(), h7(), hom(&[3, 3]), hom(&[3, 3])).unwrap();
        let r = reachable(&inst, DEFAULT_STATE_BUDGET).unwrap();
        assert!(r.reachable);
        assert!(r.path.unwrap().is_empty());
    }

    #[test]
    fn k2_loop_into_h7_needs_six_moves() {
        // each endpoint image must travel 1-2-5-6, a distance of 3
        let inst = Instance::new(k2_loop(), h7(), hom(&[1, 1]), hom(&[6, 6])).unwrap();
        let r = reachable(&inst, DEFAULT_STATE_BUDGET).unwrap();
        let path = r.path.unwrap();
        assert_eq!(path.len(), 6);
        assert!(verify_path(&inst.g, &inst.h, &path, &inst.beta));
    }

    #[test]
    fn rotated_triangle_is_frozen() {
        let k3 = complete(3);
        let inst = Instance::new(k3.clone(), k3, hom(&[0, 1, 2]), hom(&[1, 2, 0])).unwrap();
        let r = reachable(&inst, DEFAULT_STATE_BUDGET).unwrap();
        assert!(!r.reachable);
        assert_eq!(r.states_visited, 1);
    }

    #[test]
    fn budget_is_not_a_negative_answer() {
        let inst = Instance::new(k2_loop(), h7(), hom(&[1, 1]), hom(&[6, 6])).unwrap();
        assert_eq!(
            reachable(&inst, 3),
            Err(OracleError::BudgetExceeded { budget: 3 })
        );
    }

    #[test]
    fn disconnected_source_rejected() {
        let g = Graph::new("two", 2);
        let err = Instance::new(g, h7(), hom(&[0, 0]), hom(&[0, 0])).unwrap_err();
        assert!(matches!(err, OracleError::InvalidInstance(_)));
    }

    #[test]
    fn export_examples() {
        let (col, homs) = export_col_graph(&complete(2), &complete(2), DEFAULT_EXPORT_CAP).unwrap();
        assert_eq!(homs.len(), 2);
        assert_eq!(col.edge_count(), 0);

        let (col, _) = export_col_graph(&k2_loop(), &h7(), DEFAULT_EXPORT_CAP).unwrap();
        assert_eq!(col.n(), 25);
        assert!(col.is_connected());

        let k1 = Graph::from_edges("k1", 1, [0], []).unwrap();
        let (col, _) = export_col_graph(&k1, &h7(), DEFAULT_EXPORT_CAP).unwrap();
        assert_eq!(col.edge_set(), h7().edge_set());

        assert!(export_col_graph(&path(5), &h7(), DEFAULT_EXPORT_CAP).is_err());
    }

    #[test]
    fn bfs_agrees_with_materialised_col_graph() {
        let cases = [
            (k2_loop(), h7()),
            (path(3), cycle(5)),
            (path(3).reflexive_closure(), cycle(4).reflexive_closure()),
            (complete(2), cycle(6)),
        ];
        for (g, h) in cases {
            let (col, homs) = export_col_graph(&g, &h, DEFAULT_EXPORT_CAP).unwrap();
            let comp = col.components();
            for (i, a) in homs.iter().enumerate() {
                let tree = explore(&g, &h, a, DEFAULT_STATE_BUDGET, None).unwrap();
                for (j, b) in homs.iter().enumerate() {
                    assert_eq!(tree.contains(b.map()), comp[i] == comp[j]);
                }
                // BFS depth equals distance in the explicit graph
                for b in homs.iter() {
                    if let Some(p) = tree.path_to(b.map()) {
                        assert_eq!(Some(p.len()), tree.depth(b.map()));
                        assert!(verify_path(&g, &h, &p, b));
                    }
                }
            }
        }
    }

    #[test]
    fn shortest_paths_cannot_be_shortened() {
        let (g, h) = (path(3).reflexive_closure(), h7());
        let homs = enumerate_homomorphisms(&g, &h, DEFAULT_ENUMERATION_BUDGET).unwrap();
        let (col, _) = export_col_graph(&g, &h, 1 << 20).unwrap();
        let a = &homs[0];
        let tree = explore(&g, &h, a, DEFAULT_STATE_BUDGET, None).unwrap();
        for (j, b) in homs.iter().enumerate() {
            if let Some(p) = tree.path_to(b.map()) {
                let d = col.shortest_path(0, j).map(|w| w.len() - 1);
                assert_eq!(Some(p.len()), d);
            }
        }
    }

    #[test]
    fn lca_paths_validate() {
        let (g, h) = (path(3).reflexive_closure(), h7());
        let homs = enumerate_homomorphisms(&g, &h, DEFAULT_ENUMERATION_BUDGET).unwrap();
        let comps = ColComponents::build(&g, &h, &homs, DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!(comps.count(), 1);
        for a in homs.iter().step_by(7) {
            for b in homs.iter().step_by(5) {
                let p = comps.path(a, b).unwrap();
                assert!(verify_path(&g, &h, &p, b));
            }
        }
    }

    #[test]
    fn wide_state_keys() {
        // 30 vertices with 17 colours need 150 bits, past the packed key width
        let g = path(30).reflexive_closure();
        let h = complete(17).reflexive_closure();
        let a = hom(&[0; 30]);
        let mut b = vec![0; 30];
        b[29] = 16;
        b[28] = 5;
        let inst = Instance::new(g, h, a, hom(&b)).unwrap();
        let r = reachable(&inst, DEFAULT_STATE_BUDGET).unwrap();
        assert_eq!(r.path.unwrap().len(), 2);
    }

    #[test]
    fn hom_graph_components_examples() {
        let k3 = complete(3);
        let homs = crate::hom::enumerate_homomorphisms(&k3, &k3, 1000).unwrap();
        assert_eq!(
            hom_graph_components(&k3, &k3, &homs),
            vec![0, 1, 2, 3, 4, 5]
        );
        // K2 into a reflexive edge: every pair of maps is Hom-adjacent
        let k2r = complete(2).reflexive_closure();
        let homs = crate::hom::enumerate_homomorphisms(&complete(2), &k2r, 1000).unwrap();
        assert_eq!(hom_graph_components(&complete(2), &k2r, &homs), vec![0; 4]);
    }
}
