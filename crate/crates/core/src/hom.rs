//! Hom complexes: graph maps `T -> G`, the poset of multihomomorphisms, its
//! order complex, and the clique complex of the looped part of `G^T`.

use std::collections::{BTreeMap, HashMap};

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Limits, Result};
use crate::graph::{Graph, VertexMap};
use crate::homology::{betti_of_chain_complex, BettiVector};
use crate::simplicial::{clique_complex, order_complex, Poset, SimplicialComplex};

/// Vertices of `t` in breadth-first order, component by component.
fn bfs_order(t: &Graph) -> Vec<usize> {
    let mut seen = FixedBitSet::with_capacity(t.len());
    let mut order = Vec::with_capacity(t.len());
    for root in 0..t.len() {
        if seen.put(root) {
            continue;
        }
        let start = order.len();
        order.push(root);
        let mut i = start;
        while i < order.len() {
            let u = order[i];
            for w in t.neighbor_set(u).ones() {
                if !seen.put(w) {
                    order.push(w);
                }
            }
            i += 1;
        }
    }
    order
}

fn full(n: usize) -> FixedBitSet {
    let mut b = FixedBitSet::with_capacity(n);
    b.insert_range(..);
    b
}

/// All graph maps `t -> g`, in lexicographic order of assignments.
pub fn enumerate_homs(t: &Graph, g: &Graph, limits: &Limits) -> Result<Vec<VertexMap>> {
    enumerate_homs_within(t, g, None, limits)
}

/// Graph maps `f` with `f(v) ∈ domains[v]` for every vertex `v` of `t`.
pub fn enumerate_homs_within(
    t: &Graph,
    g: &Graph,
    domains: Option<&[FixedBitSet]>,
    limits: &Limits,
) -> Result<Vec<VertexMap>> {
    let order = bfs_order(t);
    let looped_g = looped(g);
    let mut assignment = vec![usize::MAX; t.len()];
    let mut out = Vec::new();

    struct Ctx<'a> {
        t: &'a Graph,
        g: &'a Graph,
        order: &'a [usize],
        domains: Option<&'a [FixedBitSet]>,
        looped_g: &'a FixedBitSet,
        limits: &'a Limits,
    }

    fn extend(
        cx: &Ctx,
        depth: usize,
        assignment: &mut Vec<usize>,
        out: &mut Vec<VertexMap>,
    ) -> Result<()> {
        if depth == cx.order.len() {
            out.push(VertexMap::from_raw(assignment.clone()));
            return cx.limits.check("enumerate_homs", out.len());
        }
        let v = cx.order[depth];
        let mut cand = match cx.domains {
            Some(d) => d[v].clone(),
            None => full(cx.g.len()),
        };
        if cx.t.has_loop(v) {
            cand.intersect_with(cx.looped_g);
        }
        for u in cx.t.neighbor_set(v).ones() {
            if u != v && assignment[u] != usize::MAX {
                cand.intersect_with(cx.g.neighbor_set(assignment[u]));
            }
        }
        for x in cand.ones() {
            assignment[v] = x;
            extend(cx, depth + 1, assignment, out)?;
        }
        assignment[v] = usize::MAX;
        Ok(())
    }

    let cx = Ctx {
        t,
        g,
        order: &order,
        domains,
        looped_g: &looped_g,
        limits,
    };
    extend(&cx, 0, &mut assignment, &mut out)?;
    out.sort_unstable();
    Ok(out)
}

/// Allowed images, vertex by vertex of `t`, for maps adjacent to every map in
/// `clique` inside `G^T`.
pub fn common_neighbor_domains(t: &Graph, g: &Graph, clique: &[VertexMap]) -> Vec<FixedBitSet> {
    (0..t.len())
        .map(|v| {
            let mut d = full(g.len());
            for f in clique {
                for u in t.neighbor_set(v).ones() {
                    d.intersect_with(g.neighbor_set(f.image(u)));
                }
            }
            d
        })
        .collect()
}

/// `f ~ f'` in `G^T`.
pub fn maps_adjacent(t: &Graph, g: &Graph, f: &VertexMap, h: &VertexMap) -> bool {
    (0..t.len()).all(|u| {
        t.neighbor_set(u)
            .ones()
            .all(|v| g.adjacent(f.image(u), h.image(v)))
    })
}

/// The looped part of `G^T`: one vertex per graph map, with the exponential
/// adjacency. Non-map vertices of `G^T` are never materialized.
pub fn hom_graph(t: &Graph, g: &Graph, limits: &Limits) -> Result<(Vec<VertexMap>, Graph)> {
    let homs = enumerate_homs(t, g, limits)?;
    let index: HashMap<&VertexMap, usize> = homs.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let labels: Vec<String> = homs.iter().map(|f| f.label(g)).collect();
    let mut graph = Graph::with_vertices(labels).unwrap_or_else(|_| Graph::unlabelled(homs.len()));
    let mut cells = homs.len();
    for (i, f) in homs.iter().enumerate() {
        let doms = common_neighbor_domains(t, g, std::slice::from_ref(f));
        for h in enumerate_homs_within(t, g, Some(&doms), limits)? {
            let j = index[&h];
            if j >= i {
                graph.add_edge(i, j);
                cells += 1;
            }
        }
        limits.check("hom_graph", cells)?;
    }
    Ok((homs, graph))
}

/// `Δ(G^T)`: clique complex on the looped vertices of the exponential graph.
pub fn hom_complex_exponential(t: &Graph, g: &Graph, limits: &Limits) -> Result<SimplicialComplex> {
    let (_, graph) = hom_graph(t, g, limits)?;
    clique_complex(&graph, limits)
}

/// Multihomomorphism: a nonempty vertex set of `G` for each vertex of `T`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiHom {
    sets: Vec<FixedBitSet>,
}

impl MultiHom {
    pub fn new(t: &Graph, g: &Graph, sets: Vec<Vec<usize>>) -> Result<Self> {
        if sets.len() != t.len() {
            return Err(Error::InvalidMap(format!(
                "{} sets for {} vertices",
                sets.len(),
                t.len()
            )));
        }
        let mut bits = Vec::with_capacity(sets.len());
        for s in sets {
            if s.is_empty() {
                return Err(Error::InvalidMap("empty image set".into()));
            }
            let mut b = FixedBitSet::with_capacity(g.len());
            for x in s {
                if x >= g.len() {
                    return Err(Error::UnknownVertex(format!("#{x}")));
                }
                b.insert(x);
            }
            bits.push(b);
        }
        let eta = MultiHom { sets: bits };
        if !eta.is_valid(t, g) {
            return Err(Error::InvalidMap(
                "cross pairs along an edge are not all adjacent".into(),
            ));
        }
        Ok(eta)
    }

    pub fn is_valid(&self, t: &Graph, g: &Graph) -> bool {
        (0..t.len()).all(|x| {
            !self.sets[x].is_clear()
                && t.neighbor_set(x).ones().all(|y| {
                    self.sets[x]
                        .ones()
                        .all(|a| self.sets[y].is_subset(g.neighbor_set(a)))
                })
        })
    }

    pub fn set(&self, v: usize) -> Vec<usize> {
        self.sets[v].ones().collect()
    }

    pub fn rank(&self) -> usize {
        self.sets.iter().map(|s| s.count_ones(..)).sum()
    }

    pub fn is_atom(&self) -> bool {
        self.sets.iter().all(|s| s.count_ones(..) == 1)
    }

    /// Pointwise containment `self ≤ other`.
    pub fn le(&self, other: &MultiHom) -> bool {
        self.sets
            .iter()
            .zip(&other.sets)
            .all(|(a, b)| a.is_subset(b))
    }

    pub fn as_map(&self) -> Option<VertexMap> {
        self.is_atom().then(|| {
            VertexMap::from_raw(self.sets.iter().map(|s| s.ones().next().unwrap()).collect())
        })
    }

    pub fn label(&self, g: &Graph) -> String {
        self.sets
            .iter()
            .map(|s| {
                format!(
                    "[{}]",
                    s.ones().map(|x| g.label(x)).collect::<Vec<_>>().join(",")
                )
            })
            .collect()
    }

    pub fn to_json(&self, t: &Graph, g: &Graph) -> MultiHomJson {
        let eta = (0..t.len())
            .map(|v| {
                (
                    t.label(v).to_string(),
                    self.sets[v]
                        .ones()
                        .map(|x| g.label(x).to_string())
                        .collect(),
                )
            })
            .collect();
        MultiHomJson { eta }
    }

    fn sort_key(&self) -> (usize, Vec<Vec<usize>>) {
        (
            self.rank(),
            self.sets.iter().map(|s| s.ones().collect()).collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiHomJson {
    pub eta: BTreeMap<String, Vec<String>>,
}

/// The poset of multihomomorphisms under pointwise containment.
#[derive(Debug, Clone)]
pub struct HomPoset {
    pub elements: Vec<MultiHom>,
    pub poset: Poset,
}

impl HomPoset {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn atoms(&self) -> impl Iterator<Item = &MultiHom> + '_ {
        self.elements.iter().filter(|e| e.is_atom())
    }

    pub fn to_json(&self, t: &Graph, g: &Graph) -> HomPosetJson {
        HomPosetJson {
            elements: self.elements.iter().map(|e| e.to_json(t, g)).collect(),
            covers: self.poset.covers().to_vec(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HomPosetJson {
    pub elements: Vec<MultiHomJson>,
    /// Index pairs `(a, b)`: element `b` covers element `a`.
    pub covers: Vec<(usize, usize)>,
}

/// Enumerates every multihomomorphism `t -> g` once, by backtracking over the
/// vertices of `t` in breadth-first order. Each vertex draws its image set
/// from the common neighborhood of the sets already placed on its neighbors,
/// and a partial assignment is abandoned as soon as some unplaced vertex is
/// left with no admissible image.
pub fn hom_poset(t: &Graph, g: &Graph, limits: &Limits) -> Result<HomPoset> {
    let n = g.len();
    let order = bfs_order(t);
    let mut pos = vec![0; t.len()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }

    struct Search<'a> {
        t: &'a Graph,
        g: &'a Graph,
        order: &'a [usize],
        pos: &'a [usize],
        limits: &'a Limits,
        looped_g: FixedBitSet,
        sets: Vec<FixedBitSet>,
        /// common neighborhood of each placed set
        common: Vec<FixedBitSet>,
        out: Vec<MultiHom>,
    }

    impl Search<'_> {
        fn domain(&self, v: usize, depth: usize) -> FixedBitSet {
            let mut d = full(self.g.len());
            for u in self.t.neighbor_set(v).ones() {
                if u != v && self.pos[u] < depth {
                    d.intersect_with(&self.common[u]);
                }
            }
            d
        }

        /// Every unplaced vertex still has a candidate image.
        fn feasible(&self, depth: usize) -> bool {
            self.order[depth..].iter().all(|&w| {
                let mut d = self.domain(w, depth);
                if self.t.has_loop(w) {
                    d.intersect_with(&self.looped_g);
                }
                !d.is_clear()
            })
        }

        fn place(&mut self, depth: usize) -> Result<()> {
            if depth == self.order.len() {
                self.out.push(MultiHom {
                    sets: self.sets.clone(),
                });
                return self.limits.check("hom_poset", self.out.len());
            }
            let v = self.order[depth];
            let allowed = self.domain(v, depth);
            let mut set = FixedBitSet::with_capacity(self.g.len());
            self.grow(v, depth, &allowed, &mut set, full(self.g.len()), 0)
        }

        /// Extends `set` (all of whose members are below `from`) by members
        /// `>= from`, recursing into the next vertex for every nonempty choice.
        fn grow(
            &mut self,
            v: usize,
            depth: usize,
            allowed: &FixedBitSet,
            set: &mut FixedBitSet,
            common: FixedBitSet,
            from: usize,
        ) -> Result<()> {
            let looped_v = self.t.has_loop(v);
            for x in allowed.ones().filter(|&x| x >= from) {
                if looped_v && !(common.contains(x) && self.g.has_loop(x)) {
                    continue;
                }
                let mut next = common.clone();
                next.intersect_with(self.g.neighbor_set(x));
                set.insert(x);
                self.sets[v] = set.clone();
                self.common[v] = next.clone();
                if self.feasible(depth + 1) {
                    self.place(depth + 1)?;
                    self.grow(v, depth, allowed, set, next, x + 1)?;
                }
                set.set(x, false);
            }
            Ok(())
        }
    }

    let mut search = Search {
        t,
        g,
        order: &order,
        pos: &pos,
        limits,
        looped_g: looped(g),
        sets: vec![FixedBitSet::with_capacity(n); t.len()],
        common: vec![FixedBitSet::with_capacity(n); t.len()],
        out: Vec::new(),
    };
    if !t.is_empty() {
        search.place(0)?;
    } else {
        search.out.push(MultiHom { sets: Vec::new() });
    }
    let mut elements = search.out;
    elements.sort_by_cached_key(MultiHom::sort_key);

    // The family is closed under shrinking sets, so covers are exactly the
    // one-vertex enlargements.
    let index: HashMap<&MultiHom, usize> =
        elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut covers = Vec::new();
    for (i, e) in elements.iter().enumerate() {
        for v in 0..t.len() {
            for x in 0..n {
                if e.sets[v].contains(x) {
                    continue;
                }
                let mut bigger = e.clone();
                bigger.sets[v].insert(x);
                if let Some(&j) = index.get(&bigger) {
                    covers.push((i, j));
                }
            }
        }
        limits.check("hom_poset", elements.len() + covers.len())?;
    }
    let labels = elements.iter().map(|e| e.label(g)).collect();
    let poset = Poset::from_covers_unchecked(labels, covers);
    Ok(HomPoset { elements, poset })
}

fn looped(g: &Graph) -> FixedBitSet {
    let mut b = FixedBitSet::with_capacity(g.len());
    g.looped_vertices().into_iter().for_each(|v| b.insert(v));
    b
}

/// Z/2 Betti numbers of the Hom complex from its cell structure: each
/// multihomomorphism `η` is a product of simplices of dimension
/// `Σ(|η(v)| - 1)`, and its boundary cells are the elements it covers. The
/// order complex is a subdivision of this cell complex, so the numbers agree
/// with `betti_z2(hom_complex_order(..))` at a fraction of the size.
pub fn hom_betti_cellular(p: &HomPoset) -> BettiVector {
    let Some(first) = p.elements.first() else {
        return BettiVector(Vec::new());
    };
    let base = first.sets.len();
    let dim = |e: &MultiHom| e.rank() - base;
    // elements are sorted by rank, so each dimension is a contiguous block
    let top = dim(p.elements.last().unwrap());
    let mut start = vec![0usize; top + 2];
    for e in &p.elements {
        start[dim(e) + 1] += 1;
    }
    for d in 0..=top {
        start[d + 1] += start[d];
    }
    let sizes: Vec<usize> = (0..=top).map(|d| start[d + 1] - start[d]).collect();
    let mut below: Vec<Vec<u32>> = vec![Vec::new(); p.len()];
    for &(a, b) in p.poset.covers() {
        below[b].push(a as u32);
    }
    betti_of_chain_complex(&sizes, |d| {
        (start[d]..start[d + 1])
            .map(|j| below[j].iter().map(|&i| i - start[d - 1] as u32).collect())
            .collect()
    })
}

/// Order complex of the Hom poset.
pub fn hom_complex_order(t: &Graph, g: &Graph, limits: &Limits) -> Result<SimplicialComplex> {
    order_complex(&hom_poset(t, g, limits)?.poset, limits)
}

/// `G_α`: subgraph of `g` induced on the images of the maps in `alpha`, which
/// must be a clique of looped vertices of `G^T`.
pub fn support_subgraph(t: &Graph, g: &Graph, alpha: &[VertexMap]) -> Result<Graph> {
    for (i, f) in alpha.iter().enumerate() {
        if f.assignment().len() != t.len() || f.assignment().iter().any(|&x| x >= g.len()) {
            return Err(Error::NotAClique);
        }
        for h in &alpha[i..] {
            if !maps_adjacent(t, g, f, h) {
                return Err(Error::NotAClique);
            }
        }
    }
    let support: Vec<usize> = alpha
        .iter()
        .flat_map(|f| f.assignment().iter().copied())
        .collect();
    g.induced_subgraph(&support)
}

/// Random face of `Δ(G^T)`: a uniformly chosen graph map, grown by uniformly
/// chosen common neighbors; after each step the walk stops with probability
/// `stop`.
pub fn random_clique<R: Rng>(
    t: &Graph,
    g: &Graph,
    homs: &[VertexMap],
    stop: f64,
    rng: &mut R,
    limits: &Limits,
) -> Result<Vec<VertexMap>> {
    let Some(first) = homs.choose(rng) else {
        return Ok(Vec::new());
    };
    let mut clique = vec![first.clone()];
    while !rng.gen_bool(stop) {
        let doms = common_neighbor_domains(t, g, &clique);
        let cands: Vec<VertexMap> = enumerate_homs_within(t, g, Some(&doms), limits)?
            .into_iter()
            .filter(|h| !clique.contains(h))
            .collect();
        match cands.choose(rng) {
            Some(h) => clique.push(h.clone()),
            None => break,
        }
    }
    Ok(clique)
}
