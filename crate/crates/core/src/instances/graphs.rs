//! Graphs, independent sets and the two hardness reductions.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{int, Ballot, Election, Rational};

/// A simple undirected graph on vertices `0..vertices`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph, normalising each edge to `(min, max)` and sorting.
    pub fn new(vertices: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut list: Vec<(usize, usize)> = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::Structural(format!("self-loop at vertex {u}")));
            }
            if u >= vertices || v >= vertices {
                return Err(Error::Structural(format!(
                    "edge ({u}, {v}) leaves the vertex range 0..{vertices}"
                )));
            }
            list.push((u.min(v), u.max(v)));
        }
        list.sort_unstable();
        if list.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Structural("duplicate edge".into()));
        }
        Ok(Graph { vertices, edges: list })
    }

    /// Parses an edge list: an optional `vertices: N` line, then one `u v` pair per line.
    /// Without the header the vertex count is one more than the largest endpoint.
    pub fn parse(text: &str) -> Result<Self> {
        let mut declared = None;
        let mut edges = Vec::new();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line: no + 1, message };
            if let Some(rest) = line.strip_prefix("vertices:") {
                declared = Some(
                    rest.trim()
                        .parse()
                        .map_err(|_| parse_err(format!("bad vertex count `{}`", rest.trim())))?,
                );
                continue;
            }
            let mut parts = line.split_whitespace().map(str::parse::<usize>);
            match (parts.next(), parts.next(), parts.next()) {
                (Some(Ok(u)), Some(Ok(v)), None) => edges.push((u, v)),
                _ => return Err(parse_err(format!("expected `u v`, got `{line}`"))),
            }
        }
        let vertices = declared.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0));
        Graph::new(vertices, edges)
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Maximum vertex degree.
    pub fn max_degree(&self) -> usize {
        (0..self.vertices).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn is_cubic(&self) -> bool {
        (0..self.vertices).all(|v| self.degree(v) == 3)
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices == 0 {
            return true;
        }
        let adjacency = self.adjacency();
        let mut seen = vec![false; self.vertices];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adjacency = vec![Vec::new(); self.vertices];
        for &(u, v) in &self.edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        adjacency
    }

    fn adjacency_bits(&self) -> Vec<u32> {
        let mut bits = vec![0u32; self.vertices];
        for &(u, v) in &self.edges {
            bits[u] |= 1 << v;
            bits[v] |= 1 << u;
        }
        bits
    }

    /// Size of a largest independent set, by enumerating vertex subsets.
    pub fn independence_number(&self) -> usize {
        assert!(
            self.vertices < 32,
            "independent-set brute force supports fewer than 32 vertices"
        );
        let bits = self.adjacency_bits();
        (0u32..1 << self.vertices)
            .filter(|&set| (0..self.vertices).all(|v| set >> v & 1 == 0 || bits[v] & set == 0))
            .map(|set| set.count_ones() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Whether the graph has an independent set of exactly `t` vertices.
    pub fn has_independent_set(&self, t: usize) -> bool {
        t <= self.independence_number()
    }

    /// Isomorphism-invariant fingerprint used to bucket graphs before exact comparison.
    fn invariant(&self) -> Vec<(usize, Vec<usize>)> {
        let adjacency = self.adjacency();
        let mut profile: Vec<(usize, Vec<usize>)> = adjacency
            .iter()
            .map(|nbrs| {
                let mut degrees: Vec<usize> = nbrs.iter().map(|&w| adjacency[w].len()).collect();
                degrees.sort_unstable();
                (nbrs.len(), degrees)
            })
            .collect();
        profile.sort();
        profile
    }

    /// Exact isomorphism test by backtracking over degree-preserving vertex maps.
    pub fn is_isomorphic(&self, other: &Graph) -> bool {
        if self.vertices != other.vertices || self.edges.len() != other.edges.len() {
            return false;
        }
        let (a, b) = (self.adjacency_bits(), other.adjacency_bits());
        let mut map = vec![usize::MAX; self.vertices];
        let mut used = vec![false; self.vertices];
        fn extend(v: usize, a: &[u32], b: &[u32], map: &mut [usize], used: &mut [bool]) -> bool {
            if v == a.len() {
                return true;
            }
            for w in 0..b.len() {
                if used[w] || a[v].count_ones() != b[w].count_ones() {
                    continue;
                }
                // adjacency to already-mapped vertices must agree
                let consistent = (0..v).all(|u| (a[v] >> u & 1) == (b[w] >> map[u] & 1));
                if consistent {
                    map[v] = w;
                    used[w] = true;
                    if extend(v + 1, a, b, map, used) {
                        return true;
                    }
                    used[w] = false;
                }
            }
            false
        }
        extend(0, &a, &b, &mut map, &mut used)
    }
}

/// Vertex count and degree-profile invariant of a graph.
type InvariantKey = (usize, Vec<(usize, Vec<usize>)>);

/// Keeps one representative per isomorphism class, in input order.
pub fn dedup_isomorphic(graphs: impl IntoIterator<Item = Graph>) -> Vec<Graph> {
    let mut buckets: HashMap<InvariantKey, Vec<usize>> = HashMap::new();
    let mut kept: Vec<Graph> = Vec::new();
    for g in graphs {
        let bucket = buckets.entry((g.vertices, g.invariant())).or_default();
        if bucket.iter().any(|&i| kept[i].is_isomorphic(&g)) {
            continue;
        }
        bucket.push(kept.len());
        kept.push(g);
    }
    kept
}

/// All connected graphs on exactly `vertices` vertices, one per isomorphism class.
pub fn connected_graphs(vertices: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..vertices)
        .flat_map(|u| (u + 1..vertices).map(move |v| (u, v)))
        .collect();
    assert!(
        pairs.len() < 32,
        "connected graph enumeration supports at most 8 vertices"
    );
    let labelled = (0u32..1 << pairs.len()).filter_map(|mask| {
        let edges = (0..pairs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i]);
        let g = Graph::new(vertices, edges).expect("valid pairs");
        g.is_connected().then_some(g)
    });
    dedup_isomorphic(labelled)
}

/// All cubic graphs on `vertices` vertices (connected or not), one per isomorphism class.
pub fn cubic_graphs(vertices: usize) -> Vec<Graph> {
    fn rec(v: usize, last: usize, degree: &mut [usize], edges: &mut Vec<(usize, usize)>, out: &mut Vec<Graph>) {
        let n = degree.len();
        if v == n {
            out.push(Graph::new(n, edges.iter().copied()).expect("valid edges"));
            return;
        }
        if degree[v] == 3 {
            rec(v + 1, v + 1, degree, edges, out);
            return;
        }
        // neighbours of v added in increasing order so each labelled graph appears once
        for w in last.max(v) + 1..n {
            if degree[w] < 3 {
                degree[v] += 1;
                degree[w] += 1;
                edges.push((v, w));
                rec(v, w, degree, edges, out);
                edges.pop();
                degree[v] -= 1;
                degree[w] -= 1;
            }
        }
    }
    let mut labelled = Vec::new();
    rec(0, 0, &mut vec![0; vertices], &mut Vec::new(), &mut labelled);
    dedup_isomorphic(labelled)
}

fn vertex_election(graph: &Graph, k: usize, dummies: impl Fn(usize) -> usize) -> Result<Election> {
    let parties = (0..graph.vertices()).map(|v| format!("v{v}")).collect();
    let mut ballots: Vec<Ballot> = graph.edges().iter().map(|&(u, v)| Ballot::new(vec![u, v], 1)).collect();
    for v in 0..graph.vertices() {
        let extra = dummies(v);
        if extra > 0 {
            ballots.push(Ballot::new(vec![v], extra as u64));
        }
    }
    Election::new(parties, ballots, k)
}

/// Independent set to PAV: one party per vertex, one voter per edge approving
/// both endpoints, `deg(G) − deg(v)` voters approving only `v`, and `k = t`.
/// Returns the election and the threshold `deg(G)·t`; an independent set of
/// size `t` exists iff some committee reaches it.
pub fn reduce_is_to_pav(graph: &Graph, t: usize) -> Result<(Election, Rational)> {
    if t > graph.vertices() {
        return Err(Error::Domain(format!(
            "t = {t} exceeds the {} vertices",
            graph.vertices()
        )));
    }
    let max_degree = graph.max_degree();
    let election = vertex_election(graph, t, |v| max_degree - graph.degree(v))?;
    Ok((election, int((max_degree * t) as u64)))
}

/// Independent set on cubic graphs to MaxPhragmén: one party per vertex, one
/// voter per edge, `k = t`. Returns the election and the load bound `1/3`; an
/// independent set of size `t` exists iff some committee keeps every voter's
/// load at most `1/3`.
pub fn reduce_is_to_maxphragmen(graph: &Graph, t: usize) -> Result<(Election, Rational)> {
    if !graph.is_cubic() {
        return Err(Error::Domain("the MaxPhragmén reduction needs a cubic graph".into()));
    }
    if t > graph.vertices() {
        return Err(Error::Domain(format!(
            "t = {t} exceeds the {} vertices",
            graph.vertices()
        )));
    }
    Ok((vertex_election(graph, t, |_| 0)?, crate::model::ratio(1, 3)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ratio;

    fn complete(n: usize) -> Graph {
        Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::new(n, (0..n).map(|v| (v, (v + 1) % n))).unwrap()
    }

    #[test]
    fn graph_validation() {
        assert!(Graph::new(2, [(0, 0)]).is_err());
        assert!(Graph::new(2, [(0, 2)]).is_err());
        assert!(Graph::new(2, [(0, 1), (1, 0)]).is_err());
        let g = Graph::parse("# square\nvertices: 4\n0 1\n1 2\n2 3\n3 0\n").unwrap();
        assert_eq!(g, cycle(4));
        assert!(Graph::parse("0 1 2\n").is_err());
    }

    #[test]
    fn independence_numbers() {
        assert_eq!(complete(4).independence_number(), 1);
        assert_eq!(cycle(4).independence_number(), 2);
        assert_eq!(cycle(5).independence_number(), 2);
    }

    #[test]
    fn graph_counts() {
        // connected graphs up to isomorphism on 1..=6 vertices
        let counts: Vec<usize> = (1..=6).map(|n| connected_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 6, 21, 112]);
        // cubic graphs on 4, 6, 8 vertices, disconnected 2K4 included
        let cubic: Vec<usize> = [4, 6, 8].iter().map(|&n| cubic_graphs(n).len()).collect();
        assert_eq!(cubic, vec![1, 2, 6]);
    }

    #[test]
    fn isomorphism() {
        let relabelled = Graph::new(4, [(2, 0), (0, 3), (3, 1), (1, 2)]).unwrap();
        assert!(cycle(4).is_isomorphic(&relabelled));
        let path = Graph::new(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(!cycle(4).is_isomorphic(&path));
    }

    #[test]
    fn pav_reduction_shapes() {
        let (e, s) = reduce_is_to_pav(&complete(3), 1).unwrap();
        assert_eq!((e.num_parties(), e.n(), e.k()), (3, 3, 1));
        assert_eq!(s, int(2));
        let path = Graph::new(2, [(0, 1)]).unwrap();
        let (e, s) = reduce_is_to_pav(&path, 1).unwrap();
        assert_eq!((e.num_parties(), e.n()), (2, 1));
        assert_eq!(s, int(1));
        let star = Graph::new(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let (e, _) = reduce_is_to_pav(&star, 2).unwrap();
        // three edges plus two dummies for each leaf
        assert_eq!(e.n(), 9);
    }

    #[test]
    fn maxphragmen_reduction_shapes() {
        let (e, bound) = reduce_is_to_maxphragmen(&complete(4), 1).unwrap();
        assert_eq!((e.num_parties(), e.n(), e.k()), (4, 6, 1));
        assert_eq!(bound, ratio(1, 3));
        assert!(matches!(reduce_is_to_maxphragmen(&cycle(4), 1), Err(Error::Domain(_))));
    }
}
