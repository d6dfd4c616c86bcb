//! The graph `G_{k,X}`: looped 1-skeleton of the `k`-th barycentric
//! subdivision of `X`, together with its ball cover, the nerve of that cover,
//! vertex types, and the end-to-end Betti comparison between `X` and
//! `Hom(T, G_{k,X})`.

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Limits, Result};
use crate::generators::complete;
use crate::graph::{Graph, VertexMap};
use crate::hom::{hom_complex_exponential, hom_complex_order, support_subgraph};
use crate::homology::{betti_z2_limited, BettiVector};
use crate::simplicial::{
    complexes_equal_under, name_bijection, nerve, FaceName, SimplicialComplex,
};

/// `k` together with the diameter of the test graph it was chosen for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConstructionParams {
    pub k: u32,
    pub d: usize,
    pub special_case_point: bool,
}

impl ConstructionParams {
    /// Replaces `k` by a larger value; smaller values are refused.
    pub fn with_k(self, k: u32) -> Result<Self> {
        if k < self.k {
            return Err(Error::InvalidParams(format!(
                "k = {k} is below the admissible minimum {}",
                self.k
            )));
        }
        if self.special_case_point && k != 1 {
            // the flag marks the k = 1 shortcut only
            return Ok(ConstructionParams {
                k,
                special_case_point: false,
                ..self
            });
        }
        Ok(ConstructionParams { k, ..self })
    }
}

/// `2^k - 1`, the radius of the balls around original vertices.
pub fn ball_radius(k: u32) -> usize {
    (1usize << k) - 1
}

/// Minimal admissible `k` for test graph `t`: `k = 1` for the single looped
/// vertex, otherwise the least `k >= 2` with `2^(k-1) - 1 >= diam(t)`.
pub fn choose_k(t: &Graph) -> Result<ConstructionParams> {
    if t.len() == 1 && t.has_loop(0) {
        return Ok(ConstructionParams {
            k: 1,
            d: 0,
            special_case_point: true,
        });
    }
    if t.is_empty() || !t.is_connected() {
        return Err(Error::InvalidParams("test graph must be connected".into()));
    }
    if t.edge_count() == 0 {
        return Err(Error::InvalidParams(
            "test graph needs an edge or must be the looped point".into(),
        ));
    }
    let d = t.diameter()?;
    let mut k = 2;
    while ball_radius(k - 1) < d {
        k += 1;
    }
    Ok(ConstructionParams {
        k,
        d,
        special_case_point: false,
    })
}

/// `X = X^0, X^1, ..., X^k` with, for each subdivision vertex, the face of the
/// previous level it is the barycenter of and its carrier in `X`.
#[derive(Debug, Clone)]
pub struct SubdivisionTower {
    levels: Vec<SimplicialComplex>,
    /// `carriers[m][v]`: vertices of `X` spanning the face containing `v`.
    carriers: Vec<Vec<Vec<u32>>>,
}

impl SubdivisionTower {
    pub fn new(x: &SimplicialComplex, k: u32, limits: &Limits) -> Result<Self> {
        let mut levels = vec![x.clone()];
        let mut carriers = vec![(0..x.vertex_count() as u32)
            .map(|v| vec![v])
            .collect::<Vec<_>>()];
        for _ in 0..k {
            let prev = levels.last().unwrap();
            let next = prev.barycentric_subdivision(limits)?;
            let prev_carriers = carriers.last().unwrap();
            let c: Vec<Vec<u32>> = prev
                .faces()
                .iter()
                .map(|face| {
                    let mut u: Vec<u32> = face
                        .iter()
                        .flat_map(|&v| prev_carriers[v as usize].iter().copied())
                        .collect();
                    u.sort_unstable();
                    u.dedup();
                    u
                })
                .collect();
            carriers.push(c);
            levels.push(next);
        }
        Ok(SubdivisionTower { levels, carriers })
    }

    pub fn k(&self) -> u32 {
        (self.levels.len() - 1) as u32
    }

    pub fn level(&self, m: usize) -> &SimplicialComplex {
        &self.levels[m]
    }

    pub fn top(&self) -> &SimplicialComplex {
        self.levels.last().unwrap()
    }

    /// Type `(i, j)` of vertex `v` of the top level: `i` is the dimension of
    /// the face of `X` whose interior holds `v`, `j` the dimension of the face
    /// of the previous level that `v` is the barycenter of.
    pub fn vertex_type(&self, v: usize) -> (usize, usize) {
        let m = self.levels.len() - 1;
        let i = self.carriers[m][v].len() - 1;
        let j = if m == 0 {
            0
        } else {
            let prev = &self.levels[m - 1];
            prev.faces()
                .iter()
                .nth(v)
                .expect("vertex indexes a face")
                .len()
                - 1
        };
        (i, j)
    }
}

/// Looped 1-skeleton of `bd^k(X)`.
pub fn build_g_kx(x: &SimplicialComplex, k: u32, limits: &Limits) -> Result<Graph> {
    Ok(SubdivisionTower::new(x, k, limits)?
        .top()
        .one_skeleton_graph()
        .reflexive())
}

/// `(i, j)` type of the vertex named `v` in `bd^k(X)`.
pub fn vertex_type(x: &SimplicialComplex, k: u32, v: &FaceName) -> Result<(usize, usize)> {
    if k == 0 {
        return Err(Error::InvalidParams("k must be at least 1".into()));
    }
    let tower = SubdivisionTower::new(x, k, &Limits::default())?;
    let idx = tower
        .top()
        .index_of(v)
        .ok_or_else(|| Error::UnknownVertex(v.to_string()))?;
    Ok(tower.vertex_type(idx))
}

fn original_vertex(gkx: &Graph, x: &str) -> Result<usize> {
    let v = gkx.vertex(x)?;
    match FaceName::from_token(x) {
        FaceName::Vertex(_) => Ok(v),
        FaceName::Barycenter(_) => Err(Error::InvalidParams(format!(
            "`{x}` is not an original vertex"
        ))),
    }
}

/// `G^x_{k,X}`: vertices within `2^k - 1` of the original vertex `x`.
pub fn ball_subgraph(gkx: &Graph, x: &str, k: u32) -> Result<Graph> {
    intersection_subgraph(gkx, &[x], k)
}

/// Vertices within `2^k - 1` of every original vertex in `set`; may be empty.
pub fn intersection_subgraph<S: AsRef<str>>(gkx: &Graph, set: &[S], k: u32) -> Result<Graph> {
    let r = ball_radius(k);
    let mut keep = FixedBitSet::with_capacity(gkx.len());
    keep.insert_range(..);
    for x in set {
        let dist = gkx.bfs_distances(original_vertex(gkx, x.as_ref())?)?;
        for (w, d) in dist.into_iter().enumerate() {
            if d.is_none_or(|d| d > r) {
                keep.set(w, false);
            }
        }
    }
    Ok(gkx.induced_by(|w| keep.contains(w)))
}

/// `G_{k,X}` with one BFS distance table per original vertex.
#[derive(Debug, Clone)]
pub struct Construction {
    pub x: SimplicialComplex,
    pub k: u32,
    pub tower: SubdivisionTower,
    pub g: Graph,
    /// `dist[x][w]` for original vertex `x` (index into `X`).
    dist: Vec<Vec<Option<usize>>>,
}

impl Construction {
    pub fn new(x: &SimplicialComplex, k: u32, limits: &Limits) -> Result<Self> {
        if x.is_empty() {
            return Err(Error::InvalidParams("complex must be nonempty".into()));
        }
        if k == 0 {
            return Err(Error::InvalidParams("k must be at least 1".into()));
        }
        let tower = SubdivisionTower::new(x, k, limits)?;
        let g = tower.top().one_skeleton_graph().reflexive();
        limits.check("build_g_kx", g.len() + g.edge_count() + g.loop_count())?;
        // subdivision keeps original vertices at the same indices
        let dist = (0..x.vertex_count())
            .map(|v| g.bfs_distances(v))
            .collect::<Result<_>>()?;
        Ok(Construction {
            x: x.clone(),
            k,
            tower,
            g,
            dist,
        })
    }

    pub fn radius(&self) -> usize {
        ball_radius(self.k)
    }

    /// Vertex indices of `G` within the radius of every original vertex in `set`.
    pub fn intersection_vertices(&self, set: &[u32]) -> Vec<usize> {
        let r = self.radius();
        (0..self.g.len())
            .filter(|&w| {
                set.iter()
                    .all(|&x| self.dist[x as usize][w].is_some_and(|d| d <= r))
            })
            .collect()
    }

    pub fn ball_vertices(&self, x: usize) -> Vec<usize> {
        self.intersection_vertices(&[x as u32])
    }

    pub fn ball(&self, x: usize) -> Graph {
        self.g
            .induced_subgraph(&self.ball_vertices(x))
            .expect("indices from G")
    }

    pub fn intersection(&self, set: &[u32]) -> Graph {
        self.g
            .induced_subgraph(&self.intersection_vertices(set))
            .expect("indices from G")
    }

    /// Nerve of the ball cover, named by the original vertices.
    pub fn cover_nerve(&self) -> Result<(SimplicialComplex, bool)> {
        let names: Vec<String> = self.x.names().iter().map(ToString::to_string).collect();
        let members: Vec<Vec<usize>> = (0..self.x.vertex_count())
            .map(|v| self.ball_vertices(v))
            .collect();
        let n = nerve(&names, &members)?;
        let matches = match name_bijection(&n, &self.x) {
            Ok(b) => complexes_equal_under(&n, &self.x, &b)?,
            Err(_) => false,
        };
        Ok((n, matches))
    }

    /// Original vertex `x` whose ball contains the support of `alpha`, if any.
    pub fn covering_ball(&self, t: &Graph, alpha: &[VertexMap]) -> Result<Option<usize>> {
        let support = support_subgraph(t, &self.g, alpha)?;
        let ids: Vec<usize> = support
            .labels()
            .iter()
            .map(|l| self.g.vertex(l))
            .collect::<Result<_>>()?;
        let r = self.radius();
        Ok((0..self.x.vertex_count())
            .find(|&x| ids.iter().all(|&w| self.dist[x][w].is_some_and(|d| d <= r))))
    }

    /// Dismantlability of each ball, in vertex order of `X`.
    pub fn balls_dismantlable(&self) -> Vec<(String, bool)> {
        (0..self.x.vertex_count())
            .into_par_iter()
            .map(|x| {
                let ok = self
                    .ball(x)
                    .dismantle()
                    .map(|d| d.dismantlable)
                    .unwrap_or(false);
                (self.x.names()[x].to_string(), ok)
            })
            .collect()
    }

    /// Dismantlability of the intersection over each face of `X` with at
    /// least two vertices, plus whether every non-face gives an empty
    /// intersection.
    pub fn intersections(&self) -> (Vec<(String, bool)>, bool) {
        let faces: Vec<Vec<u32>> = self
            .x
            .faces()
            .iter()
            .filter(|f| f.len() >= 2)
            .map(<[u32]>::to_vec)
            .collect();
        let results = faces
            .par_iter()
            .map(|f| {
                let g = self.intersection(f);
                let ok = !g.is_empty() && g.dismantle().map(|d| d.dismantlable).unwrap_or(false);
                let name =
                    FaceName::barycenter(f.iter().map(|&v| self.x.names()[v as usize].clone()));
                (name.to_string(), ok)
            })
            .collect();
        (results, self.non_faces_empty())
    }

    /// Every minimal non-face of `X` has an empty ball intersection (and so
    /// every non-face does).
    pub fn non_faces_empty(&self) -> bool {
        let n = self.x.vertex_count() as u32;
        let mut stack: Vec<Vec<u32>> = (0..n).map(|v| vec![v]).collect();
        while let Some(set) = stack.pop() {
            for v in set.last().unwrap() + 1..n {
                let mut bigger = set.clone();
                bigger.push(v);
                if self.x.contains_face(&bigger) {
                    stack.push(bigger);
                } else if !self.intersection_vertices(&bigger).is_empty() {
                    return false;
                }
            }
        }
        true
    }
}

/// Construction of the Hom complex used for the Betti comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Route {
    /// Clique complex of the looped part of `G^T`.
    #[default]
    Exponential,
    /// Order complex of the multihomomorphism poset.
    Poset,
}

impl Route {
    pub fn as_str(&self) -> &'static str {
        match self {
            Route::Exponential => "exp",
            Route::Poset => "poset",
        }
    }
}

pub fn hom_complex(
    t: &Graph,
    g: &Graph,
    route: Route,
    limits: &Limits,
) -> Result<SimplicialComplex> {
    match route {
        Route::Exponential => hom_complex_exponential(t, g, limits),
        Route::Poset => hom_complex_order(t, g, limits),
    }
}

/// JSON object that keeps insertion order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OrderedMap<V>(pub Vec<(String, V)>);

impl<V: Serialize> Serialize for OrderedMap<V> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

impl<V> OrderedMap<V> {
    pub fn values(&self) -> impl Iterator<Item = &V> + '_ {
        self.0.iter().map(|(_, v)| v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphSize {
    pub vertices: usize,
    pub edges: usize,
    pub loops: usize,
}

impl GraphSize {
    pub fn of(g: &Graph) -> Self {
        GraphSize {
            vertices: g.len(),
            edges: g.edge_count(),
            loops: g.loop_count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplexSize {
    pub f_vector: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionReport {
    pub faces: OrderedMap<bool>,
    pub non_faces_empty: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub k: u32,
    pub via: &'static str,
    pub g_size: GraphSize,
    pub complex_size: ComplexSize,
    pub betti_x: BettiVector,
    pub betti_hom: BettiVector,
    #[serde(rename = "match")]
    pub matches: bool,
    pub balls_dismantlable: OrderedMap<bool>,
    pub intersections_dismantlable: IntersectionReport,
    pub nerve_matches: bool,
}

impl Report {
    /// Betti match, every ball and face intersection dismantlable, non-faces
    /// empty, and the nerve equal to `X`.
    pub fn all_passed(&self) -> bool {
        self.matches
            && self.balls_dismantlable.values().all(|&b| b)
            && self.intersections_dismantlable.faces.values().all(|&b| b)
            && self.intersections_dismantlable.non_faces_empty
            && self.nerve_matches
    }
}

/// Runs the whole pipeline: choose `k`, build `G_{k,X}`, compare the Betti
/// numbers of `X` and of the Hom complex, and check the ball cover.
pub fn verify_universality(
    t: &Graph,
    x: &SimplicialComplex,
    k: Option<u32>,
    route: Route,
    limits: &Limits,
) -> Result<Report> {
    let mut params = choose_k(t)?;
    if let Some(k) = k {
        params = params.with_k(k)?;
    }
    let cons = Construction::new(x, params.k, limits)?;
    let hom = hom_complex(t, &cons.g, route, limits)?;
    let betti_hom = betti_z2_limited(&hom, limits)?;
    let betti_x = betti_z2_limited(x, limits)?;
    let (_, nerve_matches) = cons.cover_nerve()?;
    let (faces, non_faces_empty) = cons.intersections();
    Ok(Report {
        k: params.k,
        via: route.as_str(),
        g_size: GraphSize::of(&cons.g),
        complex_size: ComplexSize {
            f_vector: hom.f_vector(),
        },
        matches: betti_x.same_homology(&betti_hom),
        betti_x,
        betti_hom,
        balls_dismantlable: OrderedMap(cons.balls_dismantlable()),
        intersections_dismantlable: IntersectionReport {
            faces: OrderedMap(faces),
            non_faces_empty,
        },
        nerve_matches,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub k: u32,
    pub g_size: GraphSize,
    pub complex_size: ComplexSize,
    pub betti_x: BettiVector,
    pub betti_hom: BettiVector,
    #[serde(rename = "match")]
    pub matches: bool,
}

/// Compares `Hom(K_2, G_{1,X})` with `X`, below the `k >= 2` floor. The
/// outcome is reported, never asserted.
pub fn conjecture_experiment(x: &SimplicialComplex, limits: &Limits) -> Result<ConjectureReport> {
    let g = build_g_kx(x, 1, limits)?;
    let hom = hom_complex_exponential(&complete(2), &g, limits)?;
    let betti_hom = betti_z2_limited(&hom, limits)?;
    let betti_x = betti_z2_limited(x, limits)?;
    Ok(ConjectureReport {
        k: 1,
        g_size: GraphSize::of(&g),
        complex_size: ComplexSize {
            f_vector: hom.f_vector(),
        },
        matches: betti_x.same_homology(&betti_hom),
        betti_x,
        betti_hom,
    })
}
