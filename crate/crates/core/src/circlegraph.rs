//! Simple graphs, circle graphs of double-occurrence words, local
//! complementation, vertex minors, cut rank and rank width.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::bits::{gf2_rank, BitRow};
use crate::error::{Error, Result};
use crate::multigraph::DoubleOccurrenceWord;

/// An undirected graph without loops or parallel edges on named vertices.
///
/// Equality is labeled: two graphs are equal when they have the same vertex
/// names and the same edges, regardless of vertex order.
#[derive(Debug, Clone)]
pub struct SimpleGraph {
    vertices: Vec<String>,
    adj: Vec<BitRow>,
}

impl SimpleGraph {
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let mut g = Self::empty(vertices)?;
        for (a, b) in edges {
            let i = g.require(a.as_ref())?;
            let j = g.require(b.as_ref())?;
            if i == j {
                return Err(Error::InvalidGraph(format!("self-loop at {:?}", a.as_ref())));
            }
            g.set_edge(i, j, true);
        }
        Ok(g)
    }

    /// Graph on the given vertices with no edges.
    pub fn empty<S: AsRef<str>>(vertices: &[S]) -> Result<Self> {
        let names: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        let mut seen = HashSet::new();
        for v in &names {
            if !seen.insert(v.as_str()) {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let n = names.len();
        Ok(Self {
            vertices: names,
            adj: vec![BitRow::zeros(n); n],
        })
    }

    /// Graph on vertices `0..n` named `"0"`, `"1"`, ... with the given index edges.
    pub fn from_index_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut g = Self::empty(&names).expect("distinct names");
        for &(i, j) in edges {
            assert!(i != j && i < n && j < n, "bad edge ({i}, {j})");
            g.set_edge(i, j, true);
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Self::from_index_edges(n, &edges)
    }

    pub fn cycle(n: usize) -> Self {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_index_edges(n, &edges)
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_index_edges(n, &edges)
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn index_of(&self, v: &str) -> Option<usize> {
        self.vertices.iter().position(|x| x == v)
    }

    fn require(&self, v: &str) -> Result<usize> {
        self.index_of(v).ok_or_else(|| Error::UnknownVertex(v.to_string()))
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].get(j)
    }

    pub fn has_named_edge(&self, a: &str, b: &str) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => self.has_edge(i, j),
            _ => false,
        }
    }

    pub(crate) fn set_edge(&mut self, i: usize, j: usize, value: bool) {
        self.adj[i].set(j, value);
        self.adj[j].set(i, value);
    }

    pub fn neighbourhood(&self, i: usize) -> &BitRow {
        &self.adj[i]
    }

    pub fn neighbours(&self, i: usize) -> Vec<usize> {
        self.adj[i].ones().collect()
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].count_ones()
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.vertex_count())
            .flat_map(|i| self.adj[i].ones().filter(move |&j| j > i).map(move |j| (i, j)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// Graph `G * v`: the subgraph induced on the neighbourhood of `v` is complemented.
    pub fn local_complement(&self, v: &str) -> Result<Self> {
        let i = self.require(v)?;
        Ok(self.local_complement_index(i))
    }

    pub fn local_complement_index(&self, v: usize) -> Self {
        let mut g = self.clone();
        let nbrs = self.neighbours(v);
        for (k, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[k + 1..] {
                g.adj[a].flip(b);
                g.adj[b].flip(a);
            }
        }
        g
    }

    pub fn delete_vertex(&self, v: &str) -> Result<Self> {
        let i = self.require(v)?;
        let keep: Vec<usize> = (0..self.vertex_count()).filter(|&k| k != i).collect();
        Ok(self.induced(&keep))
    }

    /// Subgraph induced on the vertex indices `keep`, in that order.
    pub fn induced(&self, keep: &[usize]) -> Self {
        let names: Vec<&str> = keep.iter().map(|&k| self.vertices[k].as_str()).collect();
        let mut g = Self::empty(&names).expect("induced vertices are distinct");
        for (a, &i) in keep.iter().enumerate() {
            for (b, &j) in keep.iter().enumerate().skip(a + 1) {
                if self.has_edge(i, j) {
                    g.set_edge(a, b, true);
                }
            }
        }
        g
    }

    pub fn is_connected(&self) -> bool {
        let n = self.vertex_count();
        if n == 0 {
            return true;
        }
        let mut seen = BitRow::zeros(n);
        seen.set(0, true);
        let mut stack = vec![0];
        while let Some(u) = stack.pop() {
            for w in self.adj[u].ones() {
                if !seen.get(w) {
                    seen.set(w, true);
                    stack.push(w);
                }
            }
        }
        seen.count_ones() == n
    }

    /// GF(2) rank of the biadjacency matrix between `side` and its complement.
    pub fn cut_rank_of(&self, side: &BitRow) -> usize {
        let n = self.vertex_count();
        let mut other = BitRow::from_indices(n, 0..n);
        other = other.and_not(side);
        gf2_rank(side.ones().map(|a| self.adj[a].and(&other)))
    }

    pub fn cut_rank<S: AsRef<str>>(&self, side: &[S]) -> Result<usize> {
        let mut mask = BitRow::zeros(self.vertex_count());
        for v in side {
            mask.set(self.require(v.as_ref())?, true);
        }
        Ok(self.cut_rank_of(&mask))
    }

    /// Upper-triangle adjacency packed into a `u64`, for graphs with at most 11 vertices.
    fn packed(&self, order: &[usize]) -> u64 {
        let mut bits = 0u64;
        let mut k = 0;
        for (a, &i) in order.iter().enumerate() {
            for &j in &order[a + 1..] {
                if self.has_edge(i, j) {
                    bits |= 1 << k;
                }
                k += 1;
            }
        }
        bits
    }
}

impl PartialEq for SimpleGraph {
    fn eq(&self, other: &Self) -> bool {
        if self.vertex_count() != other.vertex_count() {
            return false;
        }
        let Some(map): Option<Vec<usize>> =
            self.vertices.iter().map(|v| other.index_of(v)).collect()
        else {
            return false;
        };
        (0..self.vertex_count()).all(|i| {
            (0..self.vertex_count()).all(|j| self.has_edge(i, j) == other.has_edge(map[i], map[j]))
        })
    }
}

impl Eq for SimpleGraph {}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: Vec<String>,
    edges: Vec<[String; 2]>,
}

impl Serialize for SimpleGraph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson {
            vertices: self.vertices.clone(),
            edges: self
                .edges()
                .into_iter()
                .map(|(i, j)| [self.vertices[i].clone(), self.vertices[j].clone()])
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SimpleGraph {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = GraphJson::deserialize(deserializer)?;
        let edges: Vec<(String, String)> =
            raw.edges.into_iter().map(|[a, b]| (a, b)).collect();
        SimpleGraph::new(&raw.vertices, &edges).map_err(serde::de::Error::custom)
    }
}

/// Circle graph of a word: `v ~ w` iff their occurrences interleave.
pub fn alternance_graph(word: &DoubleOccurrenceWord) -> SimpleGraph {
    let mut g = SimpleGraph::empty(word.vertices()).expect("word letters are distinct");
    let n = word.vertex_count();
    for i in 0..n {
        for j in i + 1..n {
            if word.alternates(i, j) {
                g.set_edge(i, j, true);
            }
        }
    }
    g
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MinorOptions {
    /// Maximum number of distinct graphs visited in the local-complementation orbit.
    pub budget: usize,
    /// Accept any induced subgraph isomorphic to `H` instead of the one on `H`'s labels.
    pub up_to_isomorphism: bool,
}

impl Default for MinorOptions {
    fn default() -> Self {
        Self {
            budget: 1_000_000,
            up_to_isomorphism: false,
        }
    }
}

/// Whether `h` is a vertex minor of `g`.
///
/// Every vertex minor arises as an induced subgraph of some graph in the
/// local-complementation orbit of `g`, so the search is a breadth-first walk over
/// that orbit. Graphs with more than 11 vertices are not supported.
pub fn is_vertex_minor(h: &SimpleGraph, g: &SimpleGraph, options: MinorOptions) -> Result<bool> {
    const LIMIT: usize = 11;
    if g.vertex_count() > LIMIT {
        return Err(Error::TooLarge {
            what: "vertex-minor search",
            size: g.vertex_count(),
            limit: LIMIT,
        });
    }
    let k = h.vertex_count();
    if k > g.vertex_count() {
        return Ok(false);
    }

    let matcher: Box<dyn Fn(&SimpleGraph) -> bool> = if options.up_to_isomorphism {
        let targets = permuted_codes(h);
        let subsets = k_subsets(g.vertex_count(), k);
        Box::new(move |state: &SimpleGraph| {
            subsets.iter().any(|s| targets.contains(&state.packed(s)))
        })
    } else {
        let Some(order): Option<Vec<usize>> =
            h.vertices().iter().map(|v| g.index_of(v)).collect()
        else {
            return Ok(false);
        };
        let target = h.packed(&(0..k).collect::<Vec<_>>());
        Box::new(move |state: &SimpleGraph| state.packed(&order) == target)
    };

    let all: Vec<usize> = (0..g.vertex_count()).collect();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(g.packed(&all));
    queue.push_back(g.clone());
    while let Some(state) = queue.pop_front() {
        if matcher(&state) {
            return Ok(true);
        }
        for v in 0..state.vertex_count() {
            if state.degree(v) < 2 {
                continue;
            }
            let next = state.local_complement_index(v);
            if seen.insert(next.packed(&all)) {
                if seen.len() > options.budget {
                    return Err(Error::BudgetExceeded {
                        budget: options.budget,
                    });
                }
                queue.push_back(next);
            }
        }
    }
    Ok(false)
}

fn permuted_codes(h: &SimpleGraph) -> HashSet<u64> {
    let k = h.vertex_count();
    let mut perm: Vec<usize> = (0..k).collect();
    let mut out = HashSet::new();
    heap_permutations(&mut perm, k, &mut |p| {
        out.insert(h.packed(p));
    });
    out
}

fn heap_permutations(items: &mut [usize], k: usize, visit: &mut dyn FnMut(&[usize])) {
    if k <= 1 {
        visit(items);
        return;
    }
    for i in 0..k - 1 {
        heap_permutations(items, k - 1, visit);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
    heap_permutations(items, k - 1, visit);
}

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// A subcubic tree whose leaves are the vertices of a graph.
///
/// Tree nodes are numbered `0..node_count`; `leaves[i]` is the node carrying
/// graph vertex `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankDecomposition {
    pub node_count: usize,
    pub edges: Vec<[usize; 2]>,
    pub leaves: Vec<(String, usize)>,
}

impl RankDecomposition {
    /// Width of the decomposition for `g`: the largest cut rank over tree edges.
    pub fn width(&self, g: &SimpleGraph) -> usize {
        let node_of: HashMap<usize, usize> = self
            .leaves
            .iter()
            .map(|(v, node)| (*node, g.index_of(v).expect("leaf names a vertex")))
            .collect();
        (0..self.edges.len())
            .map(|e| {
                let side = self.side_of(e);
                let mask = BitRow::from_indices(
                    g.vertex_count(),
                    side.iter().filter_map(|node| node_of.get(node).copied()),
                );
                g.cut_rank_of(&mask)
            })
            .max()
            .unwrap_or(0)
    }

    /// Nodes on the side of edge `e` containing its first endpoint.
    fn side_of(&self, e: usize) -> Vec<usize> {
        let [a, b] = self.edges[e];
        let mut adj = vec![Vec::new(); self.node_count];
        for (k, &[x, y]) in self.edges.iter().enumerate() {
            if k != e {
                adj[x].push(y);
                adj[y].push(x);
            }
        }
        let mut seen = vec![false; self.node_count];
        seen[a] = true;
        let mut stack = vec![a];
        let mut out = vec![a];
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] && w != b {
                    seen[w] = true;
                    stack.push(w);
                    out.push(w);
                }
            }
        }
        out
    }

    /// Checks the tree is connected, acyclic, of maximum degree 3, with leaves in
    /// bijection with the graph's vertices.
    pub fn is_valid_for(&self, g: &SimpleGraph) -> bool {
        let n = self.node_count;
        if g.vertex_count() == 0 {
            return n == 0 && self.edges.is_empty();
        }
        if n == 0 || self.edges.len() + 1 != n {
            return false;
        }
        let mut degree = vec![0usize; n];
        for &[a, b] in &self.edges {
            if a >= n || b >= n || a == b {
                return false;
            }
            degree[a] += 1;
            degree[b] += 1;
        }
        if degree.iter().any(|&d| d > 3) {
            return false;
        }
        let mut uf: Vec<usize> = (0..n).collect();
        fn find(uf: &mut [usize], x: usize) -> usize {
            if uf[x] != x {
                let r = find(uf, uf[x]);
                uf[x] = r;
            }
            uf[x]
        }
        for &[a, b] in &self.edges {
            let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
            if ra == rb {
                return false;
            }
            uf[ra] = rb;
        }
        let mut nodes: Vec<usize> = self.leaves.iter().map(|&(_, node)| node).collect();
        nodes.sort_unstable();
        nodes.dedup();
        let leaf_nodes: Vec<usize> = (0..n).filter(|&k| degree[k] <= 1).collect();
        let names_ok = self.leaves.len() == g.vertex_count()
            && self.leaves.iter().all(|(v, _)| g.index_of(v).is_some())
            && self
                .leaves
                .iter()
                .map(|(v, _)| v)
                .collect::<HashSet<_>>()
                .len()
                == g.vertex_count();
        names_ok && nodes == leaf_nodes
    }
}

pub const RANK_WIDTH_LIMIT: usize = 10;

/// Exact rank width with a witness decomposition.
///
/// Enumerates every cubic tree with the graph's vertices as leaves by inserting
/// leaf `k` into each edge of a tree on leaves `0..k`, abandoning a partial tree
/// once some edge's cut rank on the already placed vertices reaches the best
/// width found so far (adding leaves never lowers a cut rank).
pub fn rank_width_exact(g: &SimpleGraph) -> Result<(usize, RankDecomposition)> {
    let n = g.vertex_count();
    if n > RANK_WIDTH_LIMIT {
        return Err(Error::TooLarge {
            what: "exact rank width",
            size: n,
            limit: RANK_WIDTH_LIMIT,
        });
    }
    let leaves = |count: usize| -> Vec<(String, usize)> {
        g.vertices()
            .iter()
            .take(count)
            .cloned()
            .zip(0..count)
            .collect()
    };
    match n {
        0 => {
            return Ok((
                0,
                RankDecomposition {
                    node_count: 0,
                    edges: vec![],
                    leaves: vec![],
                },
            ))
        }
        1 => {
            return Ok((
                0,
                RankDecomposition {
                    node_count: 1,
                    edges: vec![],
                    leaves: leaves(1),
                },
            ))
        }
        2 => {
            let d = RankDecomposition {
                node_count: 2,
                edges: vec![[0, 1]],
                leaves: leaves(2),
            };
            return Ok((d.width(g), d));
        }
        _ => {}
    }

    // Leaves are nodes 0..n, internal nodes n.. in creation order.
    let mut search = TreeSearch {
        g,
        n,
        best: usize::MAX,
        best_edges: Vec::new(),
        memo: HashMap::new(),
    };
    let mut edges = vec![[0, n], [1, n], [2, n]];
    search.extend(&mut edges, 3);
    let decomposition = RankDecomposition {
        node_count: 2 * n - 2,
        edges: search.best_edges.clone(),
        leaves: leaves(n),
    };
    Ok((search.best, decomposition))
}

struct TreeSearch<'a> {
    g: &'a SimpleGraph,
    n: usize,
    best: usize,
    best_edges: Vec<[usize; 2]>,
    memo: HashMap<(u32, u32), usize>,
}

impl TreeSearch<'_> {
    /// Largest cut rank over the edges of a tree with leaves `0..placed`.
    fn width(&mut self, edges: &[[usize; 2]], placed: usize) -> usize {
        let nodes = 2 * placed - 2;
        let index = |node: usize| if node < self.n { node } else { node - self.n + placed };
        let mut adj = vec![Vec::new(); nodes];
        for &[a, b] in edges {
            adj[index(a)].push(index(b));
            adj[index(b)].push(index(a));
        }
        let all = (1u32 << placed) - 1;
        let mut width = 0;
        for &[a, b] in edges {
            let (a, b) = (index(a), index(b));
            // leaves reachable from a without crossing to b
            let mut mask = 0u32;
            let mut stack = vec![(a, b)];
            while let Some((u, parent)) = stack.pop() {
                if u < placed {
                    mask |= 1 << u;
                }
                for &w in &adj[u] {
                    if w != parent {
                        stack.push((w, u));
                    }
                }
            }
            let side = mask.min(all ^ mask);
            let rank = *self.memo.entry((side, all)).or_insert_with(|| {
                let rows = (0..placed).filter(|&i| side >> i & 1 == 1).map(|i| {
                    let row = self.g.neighbourhood(i);
                    BitRow::from_indices(
                        placed,
                        (0..placed).filter(|&j| side >> j & 1 == 0 && row.get(j)),
                    )
                });
                gf2_rank(rows)
            });
            width = width.max(rank);
            if width >= self.best {
                return width;
            }
        }
        width
    }

    fn extend(&mut self, edges: &mut Vec<[usize; 2]>, placed: usize) {
        if self.width(edges, placed) >= self.best {
            return;
        }
        if placed == self.n {
            self.best = self.width(edges, placed);
            self.best_edges = edges.clone();
            return;
        }
        let internal = self.n + placed - 2;
        for e in 0..edges.len() {
            let [a, b] = edges[e];
            edges[e] = [a, internal];
            edges.push([internal, b]);
            edges.push([internal, placed]);
            self.extend(edges, placed + 1);
            edges.pop();
            edges.pop();
            edges[e] = [a, b];
            if self.best == 0 {
                return;
            }
        }
    }
}

/// Whether the number of nonzero Schmidt coefficients of the graph state equals
/// `2^cutrank` for every bipartition. Supports at most 8 vertices.
pub fn entanglement_width_check(g: &SimpleGraph) -> Result<bool> {
    Ok(entanglement_width_report(g)?.iter().all(|c| c.matches()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutComparison {
    pub side: Vec<usize>,
    pub cut_rank: usize,
    pub schmidt_count: usize,
}

impl CutComparison {
    pub fn matches(&self) -> bool {
        self.schmidt_count == 1 << self.cut_rank
    }
}

pub const ENTANGLEMENT_CHECK_LIMIT: usize = 8;

/// Schmidt count and cut rank of every bipartition containing vertex 0 on one side
/// (the other half of each pair is its complement).
pub fn entanglement_width_report(g: &SimpleGraph) -> Result<Vec<CutComparison>> {
    let n = g.vertex_count();
    if n > ENTANGLEMENT_CHECK_LIMIT {
        return Err(Error::TooLarge {
            what: "entanglement-width check",
            size: n,
            limit: ENTANGLEMENT_CHECK_LIMIT,
        });
    }
    if n < 2 {
        return Ok(Vec::new());
    }
    let psi = crate::oracle::graph_state_vector(g)?;
    let mut out = Vec::new();
    for mask in (1u32..(1 << n) - 1).filter(|m| m & 1 == 1) {
        let side: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let cut_rank = g.cut_rank_of(&BitRow::from_indices(n, side.iter().copied()));
        let schmidt_count = crate::oracle::schmidt_count(&psi, &side);
        out.push(CutComparison {
            side,
            cut_rank,
            schmidt_count,
        });
    }
    Ok(out)
}

/// The `n x n` comparability grid on vertices `"(i,j)"`, `1 <= i, j <= n`.
pub fn comparability_grid(n: usize) -> SimpleGraph {
    let coords: Vec<(usize, usize)> = (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j))).collect();
    let names: Vec<String> = coords.iter().map(|(i, j)| format!("({i},{j})")).collect();
    let mut g = SimpleGraph::empty(&names).expect("distinct coordinates");
    for a in 0..coords.len() {
        for b in a + 1..coords.len() {
            let ((i, j), (k, l)) = (coords[a], coords[b]);
            if (i <= k && j <= l) || (i >= k && j >= l) {
                g.set_edge(a, b, true);
            }
        }
    }
    g
}

pub const WORD_SEARCH_LIMIT: usize = 8;

/// A word whose circle graph is exactly `g` (same labels), found by exhaustive
/// search, or `None` if `g` is not a circle graph.
///
/// The first letter is pinned to the first vertex, which removes rotations.
/// When a letter's second occurrence is placed its alternance with every other
/// letter is already determined, so the whole adjacency row is checked then.
pub fn find_word_bruteforce(g: &SimpleGraph) -> Result<Option<DoubleOccurrenceWord>> {
    let n = g.vertex_count();
    if n > WORD_SEARCH_LIMIT {
        return Err(Error::TooLarge {
            what: "word search",
            size: n,
            limit: WORD_SEARCH_LIMIT,
        });
    }
    if n == 0 {
        return Ok(Some(DoubleOccurrenceWord::new(Vec::<String>::new())?));
    }
    let mut state = WordSearch {
        g,
        word: Vec::with_capacity(2 * n),
        first: vec![usize::MAX; n],
        closed: vec![false; n],
    };
    state.place(0, 0);
    if state.solve() {
        let letters = state.word.iter().map(|&v| g.vertices()[v].clone());
        return Ok(Some(DoubleOccurrenceWord::new(letters)?));
    }
    Ok(None)
}

struct WordSearch<'a> {
    g: &'a SimpleGraph,
    word: Vec<usize>,
    first: Vec<usize>,
    closed: Vec<bool>,
}

impl WordSearch<'_> {
    fn place(&mut self, v: usize, pos: usize) {
        if self.first[v] == usize::MAX {
            self.first[v] = pos;
        } else {
            self.closed[v] = true;
        }
        self.word.push(v);
    }

    fn unplace(&mut self) {
        let v = self.word.pop().expect("nonempty");
        if self.closed[v] {
            self.closed[v] = false;
        } else {
            self.first[v] = usize::MAX;
        }
    }

    /// With `v` just closed, checks `v` against every other vertex.
    fn row_ok(&self, v: usize) -> bool {
        let start = self.first[v];
        let n = self.g.vertex_count();
        let mut inside = vec![0u8; n];
        for &w in &self.word[start + 1..self.word.len() - 1] {
            inside[w] += 1;
        }
        (0..n)
            .filter(|&w| w != v)
            .all(|w| (inside[w] == 1) == self.g.has_edge(v, w))
    }

    fn solve(&mut self) -> bool {
        let n = self.g.vertex_count();
        if self.word.len() == 2 * n {
            return true;
        }
        let pos = self.word.len();
        for v in 0..n {
            if self.closed[v] {
                continue;
            }
            self.place(v, pos);
            if (!self.closed[v] || self.row_ok(v)) && self.solve() {
                return true;
            }
            self.unplace();
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn named(vertices: &[&str], edges: &[(&str, &str)]) -> SimpleGraph {
        SimpleGraph::new(vertices, edges).unwrap()
    }

    fn c4() -> SimpleGraph {
        named(
            &["a", "b", "c", "d"],
            &[("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")],
        )
    }

    #[test]
    fn alternance_examples() {
        let g = alternance_graph(&"adbacbdc".parse().unwrap());
        assert_eq!(g, c4());
        let chords = alternance_graph(&"RBOYRGBYOG".parse().unwrap());
        let expected = named(
            &["R", "B", "O", "Y", "G"],
            &[
                ("R", "B"),
                ("R", "O"),
                ("R", "Y"),
                ("B", "O"),
                ("B", "Y"),
                ("B", "G"),
                ("O", "G"),
                ("Y", "G"),
            ],
        );
        assert_eq!(chords, expected);
        // O's two occurrences enclose both Y's
        assert!(!chords.has_named_edge("O", "Y"));
        assert!(!chords.has_named_edge("R", "G"));
        let g = alternance_graph(&"aabb".parse().unwrap());
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn local_complement_example() {
        let g = named(
            &["1", "2", "3", "4"],
            &[("1", "2"), ("1", "3"), ("1", "4"), ("2", "3")],
        );
        let expected = named(
            &["1", "2", "3", "4"],
            &[("1", "2"), ("1", "3"), ("1", "4"), ("2", "4"), ("3", "4")],
        );
        let lc = g.local_complement("1").unwrap();
        assert_eq!(lc, expected);
        assert_eq!(lc.local_complement("1").unwrap(), g);
        let iso = named(&["x", "y", "z"], &[("y", "z")]);
        assert_eq!(iso.local_complement("x").unwrap(), iso);
        assert!(matches!(g.local_complement("9"), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn deletions() {
        let p = SimpleGraph::path(3);
        let d = p.delete_vertex("1").unwrap();
        assert_eq!(d.vertex_count(), 2);
        assert_eq!(d.edge_count(), 0);
        let single = SimpleGraph::from_index_edges(1, &[]);
        assert_eq!(single.delete_vertex("0").unwrap().vertex_count(), 0);
        let path = c4().delete_vertex("a").unwrap();
        assert_eq!(path, named(&["b", "c", "d"], &[("b", "c"), ("c", "d")]));
    }

    #[test]
    fn graph_json_round_trip() {
        let g = c4();
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(
            json,
            r#"{"vertices":["a","b","c","d"],"edges":[["a","b"],["a","d"],["b","c"],["c","d"]]}"#
        );
        let back: SimpleGraph = serde_json::from_str(&json).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<SimpleGraph>(r#"{"vertices":["a"],"edges":[["a","a"]]}"#).is_err());
        assert!(serde_json::from_str::<SimpleGraph>(r#"{"vertices":["a","a"],"edges":[]}"#).is_err());
    }

    #[test]
    fn cut_rank_examples() {
        let fig = SimpleGraph::new(
            &["1", "2", "3", "4", "5"],
            &[("1", "4"), ("2", "3"), ("3", "4"), ("4", "5"), ("5", "1")],
        )
        .unwrap();
        assert_eq!(fig.cut_rank(&["1", "2"]).unwrap(), 2);
        assert_eq!(fig.cut_rank::<&str>(&[]).unwrap(), 0);
        let k4 = SimpleGraph::complete(4);
        assert_eq!(k4.cut_rank(&["0", "2"]).unwrap(), 1);
    }

    #[test]
    fn minors() {
        let g = c4();
        let opts = MinorOptions::default();
        assert!(is_vertex_minor(&g, &g, opts).unwrap());
        let edge = named(&["a", "b"], &[("a", "b")]);
        assert!(is_vertex_minor(&edge, &g, opts).unwrap());
        let k4 = SimpleGraph::complete(4);
        let p4 = SimpleGraph::path(4);
        assert!(!is_vertex_minor(&k4, &p4, opts).unwrap());
        let iso = MinorOptions {
            up_to_isomorphism: true,
            ..opts
        };
        assert!(!is_vertex_minor(&k4, &p4, iso).unwrap());
        // star and complete graph share an orbit
        let star = SimpleGraph::from_index_edges(4, &[(0, 1), (0, 2), (0, 3)]);
        assert!(is_vertex_minor(&k4, &star, opts).unwrap());
        // a triangle on other labels only matches up to isomorphism
        let tri = named(&["x", "y", "z"], &[("x", "y"), ("y", "z"), ("x", "z")]);
        assert!(!is_vertex_minor(&tri, &star, opts).unwrap());
        assert!(is_vertex_minor(&tri, &star, iso).unwrap());
        let tight = MinorOptions {
            budget: 1,
            up_to_isomorphism: false,
        };
        assert!(matches!(
            is_vertex_minor(&named(&["zz"], &[]), &SimpleGraph::cycle(6), tight),
            Err(Error::BudgetExceeded { budget: 1 }) | Ok(false)
        ));
    }

    #[test]
    fn rank_width_small() {
        assert_eq!(rank_width_exact(&SimpleGraph::complete(5)).unwrap().0, 1);
        assert_eq!(rank_width_exact(&SimpleGraph::from_index_edges(4, &[])).unwrap().0, 0);
        let (w, d) = rank_width_exact(&SimpleGraph::cycle(5)).unwrap();
        assert_eq!(w, 2);
        assert!(d.is_valid_for(&SimpleGraph::cycle(5)));
        assert_eq!(d.width(&SimpleGraph::cycle(5)), 2);
        assert!(rank_width_exact(&SimpleGraph::complete(11)).is_err());
    }

    #[test]
    fn grid_small() {
        assert_eq!(comparability_grid(1).edge_count(), 0);
        let g2 = comparability_grid(2);
        assert!(g2.has_named_edge("(1,1)", "(2,2)"));
        assert!(g2.has_named_edge("(1,1)", "(1,2)"));
        assert!(!g2.has_named_edge("(1,2)", "(2,1)"));
        assert_eq!(comparability_grid(3).edge_count(), 27);
    }

    #[test]
    fn word_search() {
        let w = find_word_bruteforce(&c4()).unwrap().unwrap();
        assert_eq!(alternance_graph(&w), c4());
        let empty2 = named(&["a", "b"], &[]);
        let w = find_word_bruteforce(&empty2).unwrap().unwrap();
        assert_eq!(alternance_graph(&w), empty2);
        let wheel =
            SimpleGraph::from_index_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (5, 0), (5, 1), (5, 2), (5, 3), (5, 4)]);
        assert_eq!(find_word_bruteforce(&wheel).unwrap(), None);
    }
}
