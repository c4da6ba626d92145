//! Finite undirected graphs with optional loops.
//!
//! Vertices are dense indices `0..n`. Self-adjacency is carried only by the
//! loop flags, never by an edge `(v, v)`, so `adjacent(v, v)` is true exactly
//! when `v` has a loop.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use crate::error::GraphError;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    name: String,
    loops: Vec<bool>,
    adj: Vec<Vec<usize>>,
    labels: Vec<Option<String>>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("name", &self.name)
            .field("n", &self.n())
            .field("loops", &self.loop_vertices().collect::<Vec<_>>())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// Edgeless, loopless graph on `n` vertices.
    pub fn new(name: impl Into<String>, n: usize) -> Self {
        Graph {
            name: name.into(),
            loops: vec![false; n],
            adj: vec![Vec::new(); n],
            labels: vec![None; n],
        }
    }

    pub fn from_edges(
        name: impl Into<String>,
        n: usize,
        loops: impl IntoIterator<Item = usize>,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut g = Graph::new(name, n);
        for v in loops {
            g.check_vertex(v)?;
            g.loops[v] = true;
        }
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n()
    }

    fn check_vertex(&self, v: usize) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            })
        }
    }

    /// Adds the edge `{u, v}`. Returns `Ok(false)` if it was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfEdge(u));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                Ok(true)
            }
        }
    }

    pub fn add_loop(&mut self, v: usize) -> Result<(), GraphError> {
        self.check_vertex(v)?;
        self.loops[v] = true;
        Ok(())
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.loops[v]
    }

    pub fn loop_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.loops
            .iter()
            .enumerate()
            .filter(|(_, &l)| l)
            .map(|(v, _)| v)
    }

    pub fn loop_count(&self) -> usize {
        self.loops.iter().filter(|&&l| l).count()
    }

    /// Adjacency including loops: `adjacent(v, v)` iff `v` has a loop.
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        if u == v {
            self.loops[u]
        } else {
            self.adj[u].binary_search(&v).is_ok()
        }
    }

    /// Neighbours of `v` other than `v` itself, ascending.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    /// Neighbours of `v` including `v` when it carries a loop, ascending.
    pub fn closed_neighbors(&self, v: usize) -> Vec<usize> {
        let mut out = self.adj[v].clone();
        if self.loops[v] {
            let pos = out.binary_search(&v).unwrap_err();
            out.insert(pos, v);
        }
        out
    }

    /// Number of non-loop edges at `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Non-loop edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels[v].as_deref()
    }

    pub fn has_labels(&self) -> bool {
        self.labels.iter().any(Option::is_some)
    }

    pub fn set_label(&mut self, v: usize, label: impl Into<String>) -> Result<(), GraphError> {
        self.check_vertex(v)?;
        self.labels[v] = Some(label.into());
        Ok(())
    }

    pub fn clear_labels(&mut self) {
        self.labels.iter_mut().for_each(|l| *l = None);
    }

    pub fn is_reflexive(&self) -> bool {
        self.loops.iter().all(|&l| l)
    }

    pub fn is_irreflexive(&self) -> bool {
        self.loops.iter().all(|&l| !l)
    }

    pub fn is_connected(&self) -> bool {
        if self.is_empty() {
            return false;
        }
        self.components().iter().all(|&c| c == 0)
    }

    /// Component id per vertex; components are numbered by their least vertex.
    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.n()];
        let mut next = 0;
        for s in self.vertices() {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = next;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if comp[w] == usize::MAX {
                        comp[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        comp
    }

    /// Shortest walk from `from` to `to` along non-loop edges, endpoints included.
    pub fn shortest_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let mut parent = vec![usize::MAX; self.n()];
        parent[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = parent[cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for &w in &self.adj[u] {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// True iff no four distinct vertices form a cycle `a~b~c~d~a` (loops ignored).
    pub fn is_square_free(&self) -> bool {
        // Two distinct vertices sharing two common neighbours close a 4-cycle.
        let n = self.n();
        let mut seen = vec![usize::MAX; n];
        for a in self.vertices() {
            for &b in &self.adj[a] {
                for &c in &self.adj[b] {
                    if c <= a {
                        continue;
                    }
                    if seen[c] == a {
                        return false;
                    }
                    seen[c] = a;
                }
            }
        }
        true
    }

    /// Finds `{u, v, x, y}` inducing a diamond: `u~v`, `x` and `y` adjacent to
    /// both, `x≁y`. Loops are ignored.
    pub fn find_induced_diamond(&self) -> Option<[usize; 4]> {
        for (u, v) in self.edges() {
            let common = self.common_neighbors(u, v);
            for (i, &x) in common.iter().enumerate() {
                for &y in &common[i + 1..] {
                    if !self.adjacent(x, y) {
                        return Some([u, v, x, y]);
                    }
                }
            }
        }
        None
    }

    pub fn has_induced_diamond(&self) -> bool {
        self.find_induced_diamond().is_some()
    }

    /// Vertices other than `u` and `v` adjacent to both.
    pub fn common_neighbors(&self, u: usize, v: usize) -> Vec<usize> {
        let (a, b) = (&self.adj[u], &self.adj[v]);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    if a[i] != u && a[i] != v {
                        out.push(a[i]);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    /// 2-colouring with the least vertex of every component on side 0, or
    /// `None` if a loop or an odd cycle exists.
    pub fn bipartition(&self) -> Option<Bipartition> {
        if self.loops.iter().any(|&l| l) {
            return None;
        }
        let mut side = vec![u8::MAX; self.n()];
        for s in self.vertices() {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adj[u] {
                    if side[w] == u8::MAX {
                        side[w] = 1 - side[u];
                        queue.push_back(w);
                    } else if side[w] == side[u] {
                        return None;
                    }
                }
            }
        }
        Some(Bipartition { side })
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    /// Categorical product; vertex `(i, j)` has index `i * b.n() + j`.
    pub fn tensor_product(&self, other: &Graph) -> Graph {
        let m = other.n();
        let mut p = Graph::new(format!("{}x{}", self.name, other.name), self.n() * m);
        for i in self.vertices() {
            let ni = self.closed_neighbors(i);
            for j in other.vertices() {
                let nj = other.closed_neighbors(j);
                let a = i * m + j;
                for &i2 in &ni {
                    for &j2 in &nj {
                        let b = i2 * m + j2;
                        if a == b {
                            p.loops[a] = true;
                        } else if a < b {
                            p.add_edge(a, b).expect("product indices are in range");
                        }
                    }
                }
                p.labels[a] = Some(format!("({},{})", i, j));
            }
        }
        p
    }

    /// Same edges, a loop on every vertex.
    pub fn reflexive_closure(&self) -> Graph {
        let mut g = self.clone();
        g.loops.iter_mut().for_each(|l| *l = true);
        g
    }

    /// Subgraph induced by `keep` (ascending), renumbered densely. Labels
    /// record the original index unless the vertex already had one.
    pub fn induced_subgraph(&self, keep: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n()];
        for (new, &old) in keep.iter().enumerate() {
            index[old] = new;
        }
        let mut g = Graph::new(self.name.clone(), keep.len());
        for (new, &old) in keep.iter().enumerate() {
            g.loops[new] = self.loops[old];
            g.labels[new] = Some(self.labels[old].clone().unwrap_or_else(|| old.to_string()));
            for &w in &self.adj[old] {
                if index[w] != usize::MAX && index[w] > new {
                    g.add_edge(new, index[w]).expect("in range");
                }
            }
        }
        g
    }

    /// Inclusion-maximal cliques of the loop-free adjacency, each ascending,
    /// listed lexicographically. Isolated vertices give singleton cliques.
    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        crate::cliques::maximal_cliques(self)
    }

    /// Graphviz rendering; loops are drawn only if `with_loops`.
    pub fn to_dot(&self, with_loops: bool) -> String {
        let mut out = format!("graph \"{}\" {{\n", self.name.replace('"', "'"));
        for v in self.vertices() {
            match &self.labels[v] {
                Some(l) => out.push_str(&format!("  {} [label=\"{}\"];\n", v, l.replace('"', "'"))),
                None => out.push_str(&format!("  {};\n", v)),
            }
        }
        if with_loops {
            for v in self.loop_vertices() {
                out.push_str(&format!("  {} -- {};\n", v, v));
            }
        }
        for (u, v) in self.edges() {
            out.push_str(&format!("  {} -- {};\n", u, v));
        }
        out.push_str("}\n");
        out
    }

    pub fn edge_set(&self) -> BTreeSet<(usize, usize)> {
        self.edges().collect()
    }
}

/// Side assignment of a loop-free bipartite graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bipartition {
    side: Vec<u8>,
}

impl Bipartition {
    pub fn from_sides(side: Vec<u8>) -> Self {
        assert!(side.iter().all(|&s| s <= 1), "sides must be 0 or 1");
        Bipartition { side }
    }

    pub fn side(&self, v: usize) -> u8 {
        self.side[v]
    }

    pub fn sides(&self) -> &[u8] {
        &self.side
    }

    pub fn len(&self) -> usize {
        self.side.len()
    }

    pub fn is_empty(&self) -> bool {
        self.side.is_empty()
    }

    /// Swaps the two sides.
    pub fn flipped(&self) -> Bipartition {
        Bipartition {
            side: self.side.iter().map(|s| 1 - s).collect(),
        }
    }

    pub fn is_valid_for(&self, g: &Graph) -> bool {
        self.side.len() == g.n()
            && g.is_irreflexive()
            && g.edges().all(|(u, v)| self.side[u] != self.side[v])
    }
}

/// A handful of named graphs used throughout tests and docs.
pub mod named {
    use super::Graph;

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::new(format!("K{}", n), n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    pub fn path(n: usize) -> Graph {
        let mut g = Graph::new(format!("P{}", n), n);
        for u in 1..n {
            g.add_edge(u - 1, u).unwrap();
        }
        g
    }

    pub fn cycle(n: usize) -> Graph {
        let mut g = path(n).with_name(format!("C{}", n));
        if n >= 3 {
            g.add_edge(n - 1, 0).unwrap();
        }
        g
    }

    /// The 7-vertex reflexive graph whose maximal cliques are the triangles
    /// 012 and 034 and the edges 25, 56, 36.
    pub fn h7() -> Graph {
        Graph::from_edges(
            "h7",
            7,
            0..7,
            [
                (0, 1),
                (1, 2),
                (0, 2),
                (0, 3),
                (3, 4),
                (0, 4),
                (2, 5),
                (5, 6),
                (3, 6),
            ],
        )
        .unwrap()
    }
}
