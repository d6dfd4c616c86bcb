//! Finite undirected graphs with loops, graph maps, distances, the categorical
//! product and exponential, and dismantling by folds.
//!
//! Vertices are addressed by their index in declaration order; every set-valued
//! output is emitted in that order. A loop is an ordinary adjacency entry
//! `(v, v)`, so `v` belongs to its own neighborhood exactly when it is looped.

use std::collections::{HashMap, VecDeque};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Limits, Result};

#[derive(Clone, Debug)]
pub struct Graph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<FixedBitSet>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.adj == other.adj
    }
}

impl Eq for Graph {}

impl Graph {
    /// Edgeless graph on the given vertex tokens.
    pub fn with_vertices<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(l.clone()));
            }
        }
        let n = labels.len();
        Ok(Graph {
            labels,
            index,
            adj: vec![FixedBitSet::with_capacity(n); n],
        })
    }

    /// Vertices `0..n` labelled by their decimal index.
    pub fn unlabelled(n: usize) -> Self {
        Self::with_vertices((0..n).map(|i| i.to_string())).expect("decimal labels are distinct")
    }

    /// Builds a graph from labelled edges; each unordered pair may be listed once.
    pub fn from_labelled_edges<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let mut g = Self::with_vertices(vertices.iter().map(|s| s.as_ref().to_string()))?;
        for (a, b) in edges {
            let u = g.vertex(a.as_ref())?;
            let v = g.vertex(b.as_ref())?;
            if g.adjacent(u, v) {
                return Err(Error::DuplicateEdge(
                    a.as_ref().to_string(),
                    b.as_ref().to_string(),
                ));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Adds the symmetric pair `(u, v)`; idempotent.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn add_loop(&mut self, v: usize) {
        self.adj[v].insert(v);
    }

    /// Same graph with a loop at every vertex.
    pub fn reflexive(mut self) -> Self {
        for v in 0..self.len() {
            self.add_loop(v);
        }
        self
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn vertex(&self, label: &str) -> Result<usize> {
        self.index_of(label)
            .ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownVertex(format!("#{v}")))
        }
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn has_loop(&self, v: usize) -> bool {
        self.adj[v].contains(v)
    }

    /// Raw neighborhood bitset of `v` (includes `v` iff looped).
    pub fn neighbor_set(&self, v: usize) -> &FixedBitSet {
        &self.adj[v]
    }

    pub fn neighborhood(&self, v: usize) -> Result<Vec<usize>> {
        self.check_vertex(v)?;
        Ok(self.adj[v].ones().collect())
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones(..)
    }

    /// Unordered adjacent pairs `u < v`, loops excluded.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |u| {
            self.adj[u]
                .ones()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn loop_count(&self) -> usize {
        (0..self.len()).filter(|&v| self.has_loop(v)).count()
    }

    pub fn looped_vertices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.has_loop(v)).collect()
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.len()).all(|v| self.has_loop(v))
    }

    /// Shortest-path distances from `source`; `None` marks unreachable vertices.
    pub fn bfs_distances(&self, source: usize) -> Result<Vec<Option<usize>>> {
        self.check_vertex(source)?;
        let mut dist = vec![None; self.len()];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for w in self.adj[u].ones() {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        Ok(dist)
    }

    pub fn is_connected(&self) -> bool {
        if self.is_empty() {
            return false;
        }
        self.bfs_distances(0).unwrap().iter().all(Option::is_some)
    }

    pub fn diameter(&self) -> Result<usize> {
        if self.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut best = 0;
        for v in 0..self.len() {
            for d in self.bfs_distances(v)? {
                best = best.max(d.ok_or(Error::Disconnected)?);
            }
        }
        Ok(best)
    }

    /// Subgraph induced on `subset`; vertex order follows this graph.
    pub fn induced_subgraph(&self, subset: &[usize]) -> Result<Graph> {
        let mut keep: Vec<usize> = subset.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.last().is_some_and(|&v| v >= self.len()) {
            return Err(Error::NotASubset);
        }
        let mut g = Graph::with_vertices(keep.iter().map(|&v| self.labels[v].clone()))?;
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        for (i, &v) in keep.iter().enumerate() {
            for w in self.adj[v].ones() {
                if pos[w] != usize::MAX {
                    g.adj[i].insert(pos[w]);
                }
            }
        }
        Ok(g)
    }

    /// Subgraph induced on the vertices accepted by `keep`.
    pub fn induced_by<F: Fn(usize) -> bool>(&self, keep: F) -> Graph {
        let subset: Vec<usize> = (0..self.len()).filter(|&v| keep(v)).collect();
        self.induced_subgraph(&subset)
            .expect("indices come from this graph")
    }

    /// Lexicographically least `(v, w)` with `v != w` and `N(v) ⊆ N(w)`.
    pub fn find_dominated(&self) -> Option<(usize, usize)> {
        let alive = all_bits(self.len());
        find_dominated_within(&self.adj, &alive)
    }

    /// Greedily folds dominated vertices until none is left.
    pub fn dismantle(&self) -> Result<Dismantling> {
        if self.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let mut alive = all_bits(self.len());
        let mut steps = Vec::new();
        while let Some((v, w)) = find_dominated_within(&self.adj, &alive) {
            alive.set(v, false);
            steps.push((v, w));
        }
        let remaining: Vec<usize> = alive.ones().collect();
        let residual = self.induced_subgraph(&remaining)?;
        let dismantlable = residual.len() == 1 && residual.has_loop(0);
        Ok(Dismantling {
            dismantlable,
            witness: FoldSequence { steps },
            residual,
        })
    }

    pub fn to_json(&self) -> GraphJson {
        let mut edges = Vec::new();
        for u in 0..self.len() {
            for v in self.adj[u].ones().filter(|&v| v >= u) {
                edges.push([self.labels[u].clone(), self.labels[v].clone()]);
            }
        }
        GraphJson {
            vertices: self.labels.clone(),
            edges,
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self> {
        let edges: Vec<(&str, &str)> = json
            .edges
            .iter()
            .map(|[a, b]| (a.as_str(), b.as_str()))
            .collect();
        let vertices: Vec<&str> = json.vertices.iter().map(String::as_str).collect();
        Self::from_labelled_edges(&vertices, &edges)
    }
}

/// On-disk graph format: each unordered pair listed once, loops as `["a","a"]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: Vec<String>,
    pub edges: Vec<[String; 2]>,
}

fn all_bits(n: usize) -> FixedBitSet {
    let mut b = FixedBitSet::with_capacity(n);
    b.insert_range(..);
    b
}

fn find_dominated_within(adj: &[FixedBitSet], alive: &FixedBitSet) -> Option<(usize, usize)> {
    let mut nv = FixedBitSet::with_capacity(alive.len());
    let mut nw = FixedBitSet::with_capacity(alive.len());
    for v in alive.ones() {
        nv.clone_from(&adj[v]);
        nv.intersect_with(alive);
        // Any dominating w must be adjacent to some neighbor of v.
        let candidates: Vec<usize> = match nv.ones().next() {
            Some(u) => adj[u].ones().filter(|&w| alive.contains(w)).collect(),
            None => alive.ones().collect(),
        };
        for w in candidates {
            if w == v {
                continue;
            }
            nw.clone_from(&adj[w]);
            nw.intersect_with(alive);
            if nv.is_subset(&nw) {
                return Some((v, w));
            }
        }
    }
    None
}

/// Outcome of greedy dismantling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dismantling {
    pub dismantlable: bool,
    pub witness: FoldSequence,
    pub residual: Graph,
}

/// Ordered folds `(v, w)`: `v` is removed, absorbed by `w`. Indices refer to
/// the original graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FoldSequence {
    pub steps: Vec<(usize, usize)>,
}

impl FoldSequence {
    /// Replays the folds on `g`, checking `N(v) ⊆ N(w)` in the residual graph
    /// at every step, and returns the final residual.
    pub fn replay(&self, g: &Graph) -> Result<Graph> {
        let mut alive = all_bits(g.len());
        for &(v, w) in &self.steps {
            if v == w || v >= g.len() || w >= g.len() || !alive.contains(v) || !alive.contains(w) {
                return Err(Error::InvalidMap(format!(
                    "fold ({v},{w}) is not applicable"
                )));
            }
            let mut nv = g.adj[v].clone();
            nv.intersect_with(&alive);
            let mut nw = g.adj[w].clone();
            nw.intersect_with(&alive);
            if !nv.is_subset(&nw) {
                return Err(Error::InvalidMap(format!(
                    "N({v}) is not contained in N({w})"
                )));
            }
            alive.set(v, false);
        }
        let remaining: Vec<usize> = alive.ones().collect();
        g.induced_subgraph(&remaining)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Total assignment `V(source) -> V(target)`, by vertex index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexMap {
    assignment: Vec<usize>,
}

impl VertexMap {
    pub fn new(source: &Graph, target: &Graph, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != source.len() {
            return Err(Error::InvalidMap(format!(
                "assignment has {} entries for {} source vertices",
                assignment.len(),
                source.len()
            )));
        }
        if let Some(&bad) = assignment.iter().find(|&&x| x >= target.len()) {
            return Err(Error::InvalidMap(format!(
                "image #{bad} is not a target vertex"
            )));
        }
        Ok(VertexMap { assignment })
    }

    pub(crate) fn from_raw(assignment: Vec<usize>) -> Self {
        VertexMap { assignment }
    }

    pub fn image(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Label `(f(t0),f(t1),...)` in source vertex order.
    pub fn label(&self, target: &Graph) -> String {
        let parts: Vec<&str> = self.assignment.iter().map(|&x| target.label(x)).collect();
        format!("({})", parts.join(","))
    }
}

pub fn is_graph_map(source: &Graph, target: &Graph, f: &VertexMap) -> bool {
    (0..source.len()).all(|u| {
        source.adj[u]
            .ones()
            .all(|v| target.adjacent(f.image(u), f.image(v)))
    })
}

/// Categorical product; vertex `(g, h)` sits at index `g * |H| + h`.
pub fn product(g: &Graph, h: &Graph) -> Graph {
    let labels = (0..g.len())
        .flat_map(|a| (0..h.len()).map(move |b| (a, b)))
        .map(|(a, b)| format!("({},{})", g.label(a), h.label(b)));
    let mut p = Graph::with_vertices(labels.collect::<Vec<_>>()).unwrap_or_else(|_| {
        // Labels may collide when tokens contain commas; fall back to indices.
        Graph::unlabelled(g.len() * h.len())
    });
    let m = h.len();
    for a in 0..g.len() {
        for a2 in g.adj[a].ones() {
            for b in 0..m {
                for b2 in h.adj[b].ones() {
                    p.adj[a * m + b].insert(a2 * m + b2);
                }
            }
        }
    }
    p
}

/// Exponential graph `H^G`: one vertex per total map `V(G) -> V(H)`, listed in
/// lexicographic order of assignments. `f ~ f'` iff `f(v) ~ f'(v')` for every
/// adjacent `v ~ v'` in `G`.
pub fn exponential_graph(h: &Graph, g: &Graph, limits: &Limits) -> Result<Graph> {
    let n = g.len();
    let base = h.len();
    let count = (base as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    let count = usize::try_from(count).unwrap_or(usize::MAX);
    limits.check("exponential_graph", count)?;

    let decode = |mut code: usize| -> Vec<usize> {
        let mut f = vec![0; n];
        for slot in f.iter_mut().rev() {
            *slot = code % base;
            code /= base;
        }
        f
    };

    // For each map, the allowed images of each coordinate in an adjacent map.
    let domains = |f: &[usize]| -> Vec<FixedBitSet> {
        (0..n)
            .map(|v2| {
                let mut d = all_bits(base);
                for v in g.adj[v2].ones() {
                    d.intersect_with(&h.adj[f[v]]);
                }
                d
            })
            .collect()
    };

    let mut directed = 0usize;
    let mut loops = 0usize;
    for code in 0..count {
        let f = decode(code);
        let doms = domains(&f);
        let size = doms
            .iter()
            .map(|d| d.count_ones(..))
            .try_fold(1usize, |acc, s| acc.checked_mul(s));
        directed = directed.saturating_add(size.unwrap_or(usize::MAX));
        if is_graph_map(g, h, &VertexMap::from_raw(f)) {
            loops += 1;
        }
        limits.check(
            "exponential_graph",
            count.saturating_add((directed - loops) / 2 + loops),
        )?;
    }

    let labels: Vec<String> = (0..count)
        .map(|c| VertexMap::from_raw(decode(c)).label(h))
        .collect();
    let mut exp = match Graph::with_vertices(labels) {
        Ok(e) => e,
        Err(_) => Graph::unlabelled(count),
    };
    for code in 0..count {
        let doms = domains(&decode(code));
        for_each_product(&doms, |images| {
            let other = images.iter().fold(0usize, |acc, &x| acc * base + x);
            exp.adj[code].insert(other);
        });
    }
    Ok(exp)
}

/// Calls `visit` on every tuple in the cartesian product of the bitsets.
pub(crate) fn for_each_product<F: FnMut(&[usize])>(domains: &[FixedBitSet], mut visit: F) {
    let lists: Vec<Vec<usize>> = domains.iter().map(|d| d.ones().collect()).collect();
    if lists.iter().any(Vec::is_empty) {
        return;
    }
    let mut idx = vec![0usize; lists.len()];
    let mut tuple: Vec<usize> = lists.iter().map(|l| l[0]).collect();
    loop {
        visit(&tuple);
        let mut pos = lists.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < lists[pos].len() {
                tuple[pos] = lists[pos][idx[pos]];
                break;
            }
            idx[pos] = 0;
            tuple[pos] = lists[pos][0];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::*;

    #[test]
    fn neighborhoods() {
        let c6 = cycle(6).reflexive();
        assert_eq!(c6.neighborhood(0).unwrap(), vec![0, 1, 5]);
        assert_eq!(complete(2).neighborhood(0).unwrap(), vec![1]);
        assert_eq!(looped_point().neighborhood(0).unwrap(), vec![0]);
        assert!(matches!(c6.neighborhood(6), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn distances_and_diameter() {
        let c6 = cycle(6);
        let d: Vec<usize> = c6
            .bfs_distances(0)
            .unwrap()
            .into_iter()
            .map(Option::unwrap)
            .collect();
        assert_eq!(d, vec![0, 1, 2, 3, 2, 1]);
        let two = Graph::unlabelled(2).reflexive();
        assert_eq!(two.bfs_distances(0).unwrap(), vec![Some(0), None]);
        assert_eq!(
            complete(2).bfs_distances(0).unwrap(),
            vec![Some(0), Some(1)]
        );

        assert_eq!(complete(2).diameter().unwrap(), 1);
        assert_eq!(c6.diameter().unwrap(), 3);
        assert_eq!(looped_point().diameter().unwrap(), 0);
        assert_eq!(two.diameter(), Err(Error::Disconnected));
        assert_eq!(Graph::unlabelled(0).diameter(), Err(Error::EmptyGraph));
    }

    #[test]
    fn graph_maps() {
        let k3 = complete(3);
        let pt = looped_point();
        let c = VertexMap::new(&k3, &pt, vec![0, 0, 0]).unwrap();
        assert!(is_graph_map(&k3, &pt, &c));
        let id = VertexMap::new(&k3, &k3, vec![0, 1, 2]).unwrap();
        assert!(is_graph_map(&k3, &k3, &id));
        let k2 = complete(2);
        let collapse = VertexMap::new(&k2, &k2, vec![0, 0]).unwrap();
        assert!(!is_graph_map(&k2, &k2, &collapse));
        assert!(VertexMap::new(&k2, &k2, vec![0]).is_err());
        assert!(VertexMap::new(&k2, &k2, vec![0, 2]).is_err());
    }

    #[test]
    fn products() {
        let p = product(&complete(2), &complete(2));
        assert_eq!(p.len(), 4);
        assert_eq!(p.edge_count(), 2);
        assert_eq!(p.loop_count(), 0);
        // (0,0)~(1,1) and (0,1)~(1,0)
        assert!(p.adjacent(0, 3) && p.adjacent(1, 2));

        let g = cycle(5);
        let unit = product(&looped_point(), &g);
        assert_eq!(unit.adj, g.adj);

        let e = complete(2).reflexive();
        let q = product(&e, &e);
        assert!(q.is_reflexive());
        assert_eq!(q.edge_count(), 6);
    }

    #[test]
    fn exponentials() {
        let lim = Limits::default();
        let c7 = cycle(7).reflexive();
        let unit = exponential_graph(&c7, &looped_point(), &lim).unwrap();
        assert_eq!(unit.adj, c7.adj);

        let e = exponential_graph(&complete(3), &complete(2), &lim).unwrap();
        assert_eq!(e.len(), 9);
        assert_eq!(e.loop_count(), 6);
        assert_eq!(e.looped_vertices().len(), 6);

        let e = exponential_graph(&cycle(12).reflexive(), &complete(2), &lim).unwrap();
        assert_eq!(e.len(), 144);
        assert_eq!(e.loop_count(), 36);

        let tight = Limits::new(100);
        assert!(matches!(
            exponential_graph(&cycle(12).reflexive(), &complete(2), &tight),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn induced() {
        let c6 = cycle(6).reflexive();
        assert_eq!(c6.induced_subgraph(&[0, 1, 2, 3, 4, 5]).unwrap(), c6);
        let p = c6.induced_subgraph(&[2, 0, 1]).unwrap();
        assert_eq!(p.adj, path(3).reflexive().adj);
        assert!(c6.induced_subgraph(&[]).unwrap().is_empty());
        assert_eq!(c6.induced_subgraph(&[7]), Err(Error::NotASubset));
    }

    #[test]
    fn domination() {
        assert_eq!(path(3).reflexive().find_dominated(), Some((0, 1)));
        assert_eq!(cycle(4).reflexive().find_dominated(), None);
        assert_eq!(complete(2).find_dominated(), None);
    }

    #[test]
    fn dismantling() {
        let pt = looped_point().dismantle().unwrap();
        assert!(pt.dismantlable && pt.witness.is_empty());
        assert_eq!(pt.residual, looped_point());

        let p3 = path(3).reflexive();
        let d = p3.dismantle().unwrap();
        assert!(d.dismantlable);
        assert_eq!(d.witness.len(), 2);
        assert_eq!(d.witness.replay(&p3).unwrap(), d.residual);

        let c4 = cycle(4).reflexive();
        let d = c4.dismantle().unwrap();
        assert!(!d.dismantlable);
        assert_eq!(d.residual, c4);

        // Loopless graphs stall short of the looped point.
        assert!(!complete(2).dismantle().unwrap().dismantlable);
        assert_eq!(Graph::unlabelled(0).dismantle(), Err(Error::EmptyGraph));
    }

    #[test]
    fn replay_rejects_bad_folds() {
        let c4 = cycle(4).reflexive();
        let bogus = FoldSequence {
            steps: vec![(0, 2)],
        };
        assert!(bogus.replay(&c4).is_err());
        let twice = FoldSequence {
            steps: vec![(0, 1), (0, 1)],
        };
        assert!(twice.replay(&path(3).reflexive()).is_err());
    }

    #[test]
    fn json_round_trip_and_errors() {
        let g = cycle(4).reflexive();
        let back = Graph::from_json(&g.to_json()).unwrap();
        assert_eq!(back, g);

        let bad: GraphJson =
            serde_json::from_str(r#"{"vertices":["a","b"],"edges":[["a","c"]]}"#).unwrap();
        assert_eq!(
            Graph::from_json(&bad),
            Err(Error::UnknownVertex("c".into()))
        );
        let dup: GraphJson =
            serde_json::from_str(r#"{"vertices":["a","b"],"edges":[["a","b"],["b","a"]]}"#)
                .unwrap();
        assert!(matches!(
            Graph::from_json(&dup),
            Err(Error::DuplicateEdge(..))
        ));
        let dupv: GraphJson = serde_json::from_str(r#"{"vertices":["a","a"],"edges":[]}"#).unwrap();
        assert!(matches!(
            Graph::from_json(&dupv),
            Err(Error::DuplicateVertex(_))
        ));
    }
}
