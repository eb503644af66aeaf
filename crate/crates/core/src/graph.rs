//! Public graphs, colorings, paths, ground-truth oracles, and the path
//! verification protocol.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt::Write;

use crate::card::{encoding_pattern, Symbol};
use crate::engine::{PlacementKey, Pos, Program, ProgramBuilder, ProverScript};
use crate::error::{Error, Result};
use crate::subprotocols;

/// Unordered edge stored as `(u, v)` with `u < v`; vertices are `1..=n`.
pub type Edge = (usize, usize);

pub fn edge(u: usize, v: usize) -> Edge {
    (u.min(v), u.max(v))
}

/// A simple undirected graph on vertices `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::Domain(format!("self-loop at vertex {u}")));
            }
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Error::Domain(format!("edge {u}-{v} outside vertices 1..={n}")));
            }
            if !set.insert(edge(u, v)) {
                return Err(Error::Domain(format!("duplicate edge {u}-{v}")));
            }
        }
        let mut adj = vec![Vec::new(); n + 1];
        for &(u, v) in &set {
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        Ok(Graph { n, edges: set.into_iter().collect(), adj })
    }

    /// Parse `"n m"` followed by `m` lines `"u v"` with `1 <= u < v <= n`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header".into() })?;
        let nums = parse_numbers(header, hl + 1)?;
        let [n, m] = nums[..] else {
            return Err(Error::Parse { line: hl + 1, msg: "header must be \"n m\"".into() });
        };
        let mut edges = Vec::new();
        for (i, line) in lines {
            let nums = parse_numbers(line, i + 1)?;
            match nums[..] {
                [u, v] if u < v && v <= n && u >= 1 => edges.push((u, v)),
                _ => return Err(Error::Parse { line: i + 1, msg: format!("expected \"u v\" with 1 <= u < v <= {n}") }),
            }
        }
        if edges.len() != m {
            return Err(Error::Parse { line: hl + 1, msg: format!("header announces {m} edges, found {}", edges.len()) });
        }
        Graph::new(n, edges).map_err(|e| Error::Parse { line: hl + 1, msg: e.to_string() })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n, self.edges.len());
        for (u, v) in &self.edges {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|i| (i, i + 1))).unwrap()
    }

    pub fn cycle(n: usize) -> Self {
        Graph::new(n, (1..=n).map(|i| edge(i, i % n + 1))).unwrap()
    }

    pub fn complete(n: usize) -> Self {
        Graph::new(n, (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v)))).unwrap()
    }

    /// Star with center 1 and `leaves` leaves.
    pub fn star(leaves: usize) -> Self {
        Graph::new(leaves + 1, (2..=leaves + 1).map(|v| (1, v))).unwrap()
    }

    /// Every graph on vertices `1..=n`.
    pub fn all_on(n: usize) -> Vec<Graph> {
        let all = Graph::complete(n).edges;
        subsets(&all).into_iter().map(|es| Graph::new(n, es).unwrap()).collect()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (1..=self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && u <= self.n && v <= self.n && self.adj[u].binary_search(&v).is_ok()
    }

    /// The spanning subgraph with edge set `h`; fails unless `h` is a subset
    /// of the edges.
    pub fn subgraph(&self, h: &[Edge]) -> Result<Graph> {
        if let Some(&(u, v)) = h.iter().find(|&&(u, v)| !self.has_edge(u, v)) {
            return Err(Error::Domain(format!("edge {u}-{v} is not in the graph")));
        }
        Graph::new(self.n, h.iter().map(|&(u, v)| edge(u, v)))
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n + 1];
        let mut queue = VecDeque::from([1]);
        seen[1] = true;
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n
    }

    /// A shortest `s`-`t` path; shortest paths have no chords.
    pub fn shortest_path(&self, s: usize, t: usize) -> Option<Vec<usize>> {
        let mut prev = vec![0; self.n + 1];
        let mut seen = vec![false; self.n + 1];
        let mut queue = VecDeque::from([s]);
        seen[s] = true;
        while let Some(u) = queue.pop_front() {
            if u == t {
                let mut path = vec![t];
                while *path.last().unwrap() != s {
                    path.push(prev[*path.last().unwrap()]);
                }
                path.reverse();
                return Some(path);
            }
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    prev[w] = u;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Vertices of degree exactly one.
    pub fn leaves(&self) -> usize {
        (1..=self.n).filter(|&v| self.degree(v) == 1).count()
    }
}

fn parse_numbers(line: &str, lineno: usize) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|w| w.parse().map_err(|_| Error::Parse { line: lineno, msg: format!("not a number: {w:?}") }))
        .collect()
}

/// Parse a subgraph file: one `"u v"` line per edge.
pub fn parse_subgraph(text: &str) -> Result<Vec<Edge>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match parse_numbers(line, i + 1)?[..] {
            [u, v] if u != v => out.push(edge(u, v)),
            _ => return Err(Error::Parse { line: i + 1, msg: "expected \"u v\"".into() }),
        }
    }
    Ok(out)
}

/// Every subset of `items`, in binary counting order.
pub fn subsets<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    (0u64..1 << items.len())
        .map(|mask| items.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e.clone()).collect())
        .collect()
}

/// A proper vertex coloring with colors `1..=d+1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<usize>,
}

impl Coloring {
    pub fn color(&self, v: usize) -> usize {
        self.colors[v]
    }

    /// Number of distinct colors used.
    pub fn count(&self) -> usize {
        self.colors[1..].iter().collect::<HashSet<_>>().len()
    }

    pub fn is_proper(&self, g: &Graph) -> bool {
        g.edges().iter().all(|&(u, v)| self.colors[u] != self.colors[v])
    }
}

/// Greedy coloring in ascending vertex order, least unused color first.
pub fn greedy_coloring(g: &Graph) -> Coloring {
    let mut colors = vec![0; g.n() + 1];
    for v in 1..=g.n() {
        let used: HashSet<usize> = g.neighbors(v).iter().map(|&w| colors[w]).collect();
        colors[v] = (1..).find(|c| !used.contains(c)).unwrap();
    }
    Coloring { colors }
}

fn edge_set(h: &[Edge]) -> HashSet<Edge> {
    h.iter().map(|&(u, v)| edge(u, v)).collect()
}

/// Consecutive vertices adjacent in `h` and all vertices distinct.
pub fn is_path(h: &[Edge], path: &[usize]) -> bool {
    let set = edge_set(h);
    let distinct: HashSet<_> = path.iter().collect();
    !path.is_empty() && distinct.len() == path.len() && path.windows(2).all(|w| set.contains(&edge(w[0], w[1])))
}

/// A path is minimal if no two non-consecutive vertices are adjacent in `h`.
pub fn is_minimal_path(h: &[Edge], path: &[usize]) -> bool {
    let set = edge_set(h);
    (0..path.len()).all(|i| (i + 2..path.len()).all(|j| !set.contains(&edge(path[i], path[j]))))
}

/// Shortcut chords until the path is minimal. From each vertex jump to the
/// furthest later vertex adjacent to it.
pub fn minimalize_path(h: &[Edge], path: &[usize]) -> Result<Vec<usize>> {
    if !is_path(h, path) {
        return Err(Error::Domain("not a path in the given edge set".into()));
    }
    let set = edge_set(h);
    let mut out = vec![path[0]];
    let mut i = 0;
    while i + 1 < path.len() {
        let j = (i + 1..path.len()).rev().find(|&j| set.contains(&edge(path[i], path[j]))).unwrap();
        out.push(path[j]);
        i = j;
    }
    Ok(out)
}

/// Ground truth: is `(V(G), h)` connected?
pub fn oracle_connected_spanning(g: &Graph, h: &[Edge]) -> Result<bool> {
    let mut parent: Vec<usize> = (0..=g.n()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    let mut components = g.n();
    for &(u, v) in h {
        if !g.has_edge(u, v) {
            return Err(Error::Domain(format!("edge {u}-{v} is not in the graph")));
        }
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            components -= 1;
        }
    }
    Ok(components <= 1)
}

/// Compiled path verification between `s` and `t`, with each vertex's
/// `E_{d+2}` sequence and the order vertices are checked.
#[derive(Clone, Debug)]
pub struct PathProtocol {
    pub program: Program,
    pub s: usize,
    pub t: usize,
}

/// Build the path verification program. Terminals get public `E_{d+2}(0)`;
/// every other vertex gets a private sequence. Each vertex is checked by
/// counting matching rows among its neighbors plus two artificial rows
/// encoding its own color.
pub fn path_protocol(g: &Graph, coloring: &Coloring, s: usize, t: usize) -> Result<PathProtocol> {
    if s == t || s == 0 || t == 0 || s > g.n() || t > g.n() {
        return Err(Error::Domain("terminals must be two distinct vertices".into()));
    }
    let k = g.max_degree() + 2;
    let mut b = ProgramBuilder::new();
    let mut seq: Vec<Vec<Pos>> = vec![Vec::new(); g.n() + 1];
    for (v, slot) in seq.iter_mut().enumerate().skip(1) {
        *slot = if v == s || v == t {
            b.place(encoding_pattern(0, k)?)
        } else {
            b.prover_place(k, PlacementKey::Round { round: 0, vertex: v })
        };
    }
    for v in 1..=g.n() {
        let x = coloring.color(v);
        let art: Vec<Vec<Pos>> = (0..2).map(|_| b.place(encoding_pattern(x, k).unwrap())).collect();
        let mut rows = vec![seq[v].clone()];
        rows.extend(g.neighbors(v).iter().map(|&w| seq[w].clone()));
        rows.extend(art.iter().cloned());
        let expect = if v == s || v == t { 1 } else { 2 };
        subprotocols::neighbor_count(&mut b, &format!("v{v}"), &rows, Some(expect));
        for a in art {
            b.discard(&a);
        }
    }
    Ok(PathProtocol { program: b.finish(), s, t })
}

/// Honest placements for a path: `0` on the path, the vertex color off it.
pub fn path_script(proto: &PathProtocol, coloring: &Coloring, path: &[usize]) -> Result<ProverScript> {
    let k = proto
        .program
        .placement_keys()
        .first()
        .map(|(_, len)| *len)
        .unwrap_or(0);
    let on: HashSet<usize> = path.iter().copied().collect();
    ProverScript::build(&proto.program, |key, _| match key {
        PlacementKey::Round { vertex, .. } => {
            let x = if on.contains(vertex) { 0 } else { coloring.color(*vertex) };
            encoding_pattern(x, k).unwrap_or_default()
        }
        _ => Vec::new(),
    })
}

/// Placements chosen freely, e.g. by an adversary: `values[v]` for vertex `v`.
pub fn path_script_from_values(proto: &PathProtocol, values: &dyn Fn(usize) -> Vec<Symbol>) -> Result<ProverScript> {
    ProverScript::build(&proto.program, |key, _| match key {
        PlacementKey::Round { vertex, .. } => values(*vertex),
        _ => Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_print() {
        let g = Graph::parse("3 2\n1 2\n2 3\n").unwrap();
        assert_eq!(g, Graph::path(3));
        assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
        assert!(Graph::parse("3 2\n1 2\n").is_err());
        assert!(Graph::parse("3 1\n2 1\n").is_err());
        assert!(Graph::parse("3 1\n1 4\n").is_err());
        assert!(Graph::parse("").is_err());
        assert_eq!(parse_subgraph("2 1\n\n3 2\n").unwrap(), vec![(1, 2), (2, 3)]);
    }

    #[test]
    fn coloring_examples() {
        assert_eq!(greedy_coloring(&Graph::complete(3)).count(), 3);
        let c = greedy_coloring(&Graph::path(3));
        assert_eq!((c.color(1), c.color(2), c.color(3)), (1, 2, 1));
        let empty = Graph::new(4, []).unwrap();
        assert!((1..=4).all(|v| greedy_coloring(&empty).color(v) == 1));
    }

    #[test]
    fn greedy_is_proper_on_small_graphs() {
        for n in 1..=5 {
            for g in Graph::all_on(n) {
                let c = greedy_coloring(&g);
                assert!(c.is_proper(&g));
                assert!((1..=n).all(|v| c.color(v) <= g.max_degree() + 1));
            }
        }
    }

    #[test]
    fn minimalize_examples() {
        let h = vec![(1, 2), (2, 3), (1, 3)];
        assert_eq!(minimalize_path(&h, &[1, 2, 3]).unwrap(), vec![1, 3]);
        assert_eq!(minimalize_path(&[(1, 2), (2, 3)], &[1, 2, 3]).unwrap(), vec![1, 2, 3]);
        let c5 = Graph::cycle(5);
        let long = [1, 2, 3, 4, 5];
        assert_eq!(minimalize_path(c5.edges(), &long[..4]).unwrap(), vec![1, 2, 3, 4]);
        assert!(minimalize_path(&h, &[1, 4]).is_err());
    }

    #[test]
    fn c4_connected_subsets() {
        let g = Graph::cycle(4);
        let good: Vec<_> = subsets(g.edges()).into_iter().filter(|h| oracle_connected_spanning(&g, h).unwrap()).collect();
        assert_eq!(good.len(), 5);
        assert!(good.iter().all(|h| h.len() >= 3));
        assert!(!oracle_connected_spanning(&Graph::path(2), &[]).unwrap());
        assert!(oracle_connected_spanning(&Graph::complete(4), &[(1, 2), (1, 3), (1, 4)]).unwrap());
        assert!(oracle_connected_spanning(&Graph::path(3), &[(1, 3)]).is_err());
    }

    proptest! {
        #[test]
        fn minimalized_paths_have_no_chords(
            perm in Just((1..=8).collect::<Vec<usize>>()).prop_shuffle(),
            len in 2usize..=8,
            mask in any::<u32>(),
        ) {
            let path = &perm[..len];
            let mut h: Vec<Edge> = path.windows(2).map(|w| edge(w[0], w[1])).collect();
            h.extend(Graph::complete(8).edges().iter().enumerate().filter(|(i, _)| mask >> (i % 32) & 1 == 1).map(|(_, e)| *e));
            h.sort_unstable();
            h.dedup();
            let out = minimalize_path(&h, path).unwrap();
            prop_assert!(is_path(&h, &out));
            prop_assert!(is_minimal_path(&h, &out));
            prop_assert_eq!(out.first(), path.first());
            prop_assert_eq!(out.last(), path.last());
        }
    }
}
