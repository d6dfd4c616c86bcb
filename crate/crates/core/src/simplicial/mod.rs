//! Abstract simplicial complexes: construction from facets, face families,
//! skeleta, barycentric subdivision, clique complexes, order complexes and
//! nerves of covers.

mod face_name;
mod poset;

pub use face_name::FaceName;
pub use poset::{Poset, PosetJson};

use std::collections::{HashMap, HashSet};
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Limits, Result};
use crate::graph::Graph;

/// Faces of one dimension, stored flat and sorted lexicographically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceList {
    width: usize,
    data: Vec<u32>,
}

impl FaceList {
    fn from_sorted(width: usize, data: Vec<u32>) -> Self {
        FaceList { width, data }
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.width
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Number of vertices per face.
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn get(&self, i: usize) -> &[u32] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.data.chunks_exact(self.width)
    }

    /// Index of `face` (sorted vertex indices) in this list.
    pub fn position(&self, face: &[u32]) -> Option<usize> {
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.get(mid).cmp(face) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }
}

/// All nonempty faces, grouped by dimension (index 0 holds vertices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceFamily {
    by_dim: Vec<FaceList>,
}

impl FaceFamily {
    pub fn dims(&self) -> &[FaceList] {
        &self.by_dim
    }

    pub fn dim(&self, d: usize) -> Option<&FaceList> {
        self.by_dim.get(d)
    }

    pub fn total(&self) -> usize {
        self.by_dim.iter().map(FaceList::len).sum()
    }

    /// Every face, dimension by dimension, each dimension in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.by_dim.iter().flat_map(FaceList::iter)
    }

    /// Position of `face` in the order of [`FaceFamily::iter`].
    pub fn global_index(&self, face: &[u32]) -> Option<usize> {
        let d = face.len().checked_sub(1)?;
        let offset: usize = self.by_dim.iter().take(d).map(FaceList::len).sum();
        Some(offset + self.by_dim.get(d)?.position(face)?)
    }
}

#[derive(Debug, Clone)]
pub struct SimplicialComplex {
    names: Vec<FaceName>,
    /// Maximal faces as sorted vertex indices, in lexicographic order.
    facets: Vec<Vec<u32>>,
    faces: OnceLock<FaceFamily>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.facets == other.facets
    }
}

impl Eq for SimplicialComplex {}

impl SimplicialComplex {
    /// Complex with the given vertices and faces generated by `facets`.
    /// Non-maximal input faces are absorbed; declared vertices that appear in
    /// no facet become isolated points.
    pub fn from_facets<S: AsRef<str>>(vertices: &[S], facets: &[Vec<S>]) -> Result<Self> {
        let names: Vec<FaceName> = vertices
            .iter()
            .map(|v| FaceName::from_token(v.as_ref()))
            .collect();
        let mut index = HashMap::with_capacity(names.len());
        for (i, (n, raw)) in names.iter().zip(vertices).enumerate() {
            if index.insert(n.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(raw.as_ref().to_string()));
            }
        }
        let mut idx_facets = Vec::with_capacity(facets.len());
        for f in facets {
            if f.is_empty() {
                return Err(Error::EmptyFacet);
            }
            let mut face = Vec::with_capacity(f.len());
            for v in f {
                let i = index
                    .get(&FaceName::from_token(v.as_ref()))
                    .ok_or_else(|| Error::UnknownVertex(v.as_ref().to_string()))?;
                face.push(*i as u32);
            }
            idx_facets.push(face);
        }
        Ok(Self::from_indexed_facets(names, idx_facets))
    }

    /// Vertex set inferred from the facets, in order of first appearance.
    pub fn from_facet_labels<S: AsRef<str>>(facets: &[Vec<S>]) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut vertices = Vec::new();
        for f in facets {
            for v in f {
                if seen.insert(FaceName::from_token(v.as_ref())) {
                    vertices.push(v.as_ref().to_string());
                }
            }
        }
        let facets: Vec<Vec<String>> = facets
            .iter()
            .map(|f| f.iter().map(|v| v.as_ref().to_string()).collect())
            .collect();
        Self::from_facets(&vertices, &facets)
    }

    /// Index-based constructor enforcing maximality.
    pub fn from_indexed_facets(names: Vec<FaceName>, facets: Vec<Vec<u32>>) -> Self {
        let n = names.len();
        let mut candidates: Vec<Vec<u32>> = facets
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .collect();
        let mut covered = vec![false; n];
        for f in &candidates {
            for &v in f {
                covered[v as usize] = true;
            }
        }
        candidates.extend((0..n).filter(|&v| !covered[v]).map(|v| vec![v as u32]));
        candidates.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        candidates.dedup();

        let mut kept: Vec<Vec<u32>> = Vec::new();
        let mut kept_bits: Vec<FixedBitSet> = Vec::new();
        for f in candidates {
            let mut bits = FixedBitSet::with_capacity(n);
            f.iter().for_each(|&v| bits.insert(v as usize));
            if kept_bits.iter().any(|k| bits.is_subset(k)) {
                continue;
            }
            kept.push(f);
            kept_bits.push(bits);
        }
        Self::from_maximal_unchecked(names, kept)
    }

    /// Caller guarantees no facet contains another and every vertex is used.
    pub(crate) fn from_maximal_unchecked(names: Vec<FaceName>, mut facets: Vec<Vec<u32>>) -> Self {
        for f in &mut facets {
            f.sort_unstable();
        }
        facets.sort_unstable();
        SimplicialComplex {
            names,
            facets,
            faces: OnceLock::new(),
        }
    }

    /// Complex determined by a downward-closed family of faces.
    pub fn from_faces(names: Vec<FaceName>, faces: Vec<Vec<u32>>) -> Self {
        let family: HashSet<Vec<u32>> = faces
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f
            })
            .collect();
        let n = names.len() as u32;
        let facets: Vec<Vec<u32>> = family
            .iter()
            .filter(|f| {
                !(0..n).any(|v| {
                    if f.binary_search(&v).is_ok() {
                        return false;
                    }
                    let mut g = (*f).clone();
                    g.push(v);
                    g.sort_unstable();
                    family.contains(&g)
                })
            })
            .cloned()
            .collect();
        Self::from_indexed_facets(names, facets)
    }

    pub fn empty() -> Self {
        Self::from_maximal_unchecked(Vec::new(), Vec::new())
    }

    pub fn names(&self) -> &[FaceName] {
        &self.names
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &FaceName) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn facets(&self) -> &[Vec<u32>] {
        &self.facets
    }

    /// Facets rendered through vertex names.
    pub fn facet_labels(&self) -> Vec<Vec<String>> {
        self.facets
            .iter()
            .map(|f| {
                f.iter()
                    .map(|&v| self.names[v as usize].to_string())
                    .collect()
            })
            .collect()
    }

    /// Dimension of the complex; `None` when empty.
    pub fn dimension(&self) -> Option<usize> {
        self.facets.iter().map(|f| f.len() - 1).max()
    }

    /// Memoized face family.
    pub fn faces(&self) -> &FaceFamily {
        self.try_faces(&Limits::new(usize::MAX))
            .expect("unbounded face enumeration")
    }

    /// Memoized face family, refusing to materialize more than the cap.
    pub fn try_faces(&self, limits: &Limits) -> Result<&FaceFamily> {
        if let Some(f) = self.faces.get() {
            limits.check("face_family", f.total())?;
            return Ok(f);
        }
        let family = close_downward(&self.facets, limits)?;
        let _ = self.faces.set(family);
        Ok(self.faces.get().expect("just initialized"))
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.faces().dims().iter().map(FaceList::len).collect()
    }

    pub fn contains_face(&self, face: &[u32]) -> bool {
        let mut f = face.to_vec();
        f.sort_unstable();
        f.dedup();
        !f.is_empty()
            && self
                .faces()
                .dim(f.len() - 1)
                .is_some_and(|l| l.position(&f).is_some())
    }

    /// Faces of dimension at most `d`.
    pub fn skeleton(&self, d: usize) -> SimplicialComplex {
        let mut facets: Vec<Vec<u32>> = self
            .facets
            .iter()
            .filter(|f| f.len() <= d)
            .cloned()
            .collect();
        if let Some(list) = self.faces().dim(d) {
            facets.extend(list.iter().map(<[u32]>::to_vec));
        }
        Self::from_maximal_unchecked(self.names.clone(), facets)
    }

    /// Barycentric subdivision. Vertex `i` of the result is the barycenter of
    /// the `i`-th face of `self` in [`FaceFamily::iter`] order, so original
    /// vertices keep their indices and names.
    pub fn barycentric_subdivision(&self, limits: &Limits) -> Result<SimplicialComplex> {
        let family = self.try_faces(limits)?;
        let names: Vec<FaceName> = family
            .iter()
            .map(|f| FaceName::barycenter(f.iter().map(|&v| self.names[v as usize].clone())))
            .collect();

        let count: usize = self
            .facets
            .iter()
            .map(|f| (1..=f.len()).product::<usize>())
            .sum();
        limits.check("barycentric_subdivision", count.saturating_add(names.len()))?;

        let mut facets = Vec::with_capacity(count);
        for f in &self.facets {
            let mut perm = f.clone();
            for_each_permutation(&mut perm, &mut |order| {
                let mut prefix: Vec<u32> = Vec::with_capacity(order.len());
                let chain: Vec<u32> = order
                    .iter()
                    .map(|&v| {
                        let at = prefix.partition_point(|&x| x < v);
                        prefix.insert(at, v);
                        family
                            .global_index(&prefix)
                            .expect("prefix of a facet is a face") as u32
                    })
                    .collect();
                facets.push(chain);
            });
        }
        Ok(Self::from_maximal_unchecked(names, facets))
    }

    /// Adjacency graph of the 1-skeleton, labelled by canonical vertex names.
    pub fn one_skeleton_graph(&self) -> Graph {
        let mut g = Graph::with_vertices(self.names.iter().map(ToString::to_string))
            .expect("face names are distinct");
        if let Some(edges) = self.faces().dim(1) {
            for e in edges.iter() {
                g.add_edge(e[0] as usize, e[1] as usize);
            }
        }
        g
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            facets: self.facet_labels(),
        }
    }

    pub fn from_json(json: &ComplexJson) -> Result<Self> {
        Self::from_facet_labels(&json.facets)
    }
}

/// On-disk complex format; the vertex set is inferred from the facets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexJson {
    pub facets: Vec<Vec<String>>,
}

fn close_downward(facets: &[Vec<u32>], limits: &Limits) -> Result<FaceFamily> {
    let top = match facets.iter().map(Vec::len).max() {
        Some(w) => w,
        None => return Ok(FaceFamily { by_dim: Vec::new() }),
    };
    let mut total = 0usize;
    let mut by_dim: Vec<FaceList> = Vec::with_capacity(top);
    let mut upper: Option<FaceList> = None;
    for width in (1..=top).rev() {
        let mut data: Vec<u32> = Vec::new();
        for f in facets.iter().filter(|f| f.len() == width) {
            data.extend_from_slice(f);
        }
        if let Some(up) = &upper {
            data.reserve(up.len() * width * (width + 1));
            for face in up.iter() {
                for skip in 0..face.len() {
                    data.extend(
                        face.iter()
                            .enumerate()
                            .filter(|&(i, _)| i != skip)
                            .map(|(_, &v)| v),
                    );
                }
            }
        }
        let mut rows: Vec<&[u32]> = data.chunks_exact(width).collect();
        rows.sort_unstable();
        rows.dedup();
        total += rows.len();
        limits.check("face_family", total)?;
        let flat: Vec<u32> = rows.concat();
        let list = FaceList::from_sorted(width, flat);
        by_dim.push(list.clone());
        upper = Some(list);
    }
    by_dim.reverse();
    Ok(FaceFamily { by_dim })
}

fn for_each_permutation<F: FnMut(&[u32])>(items: &mut [u32], visit: &mut F) {
    fn heap<F: FnMut(&[u32])>(k: usize, items: &mut [u32], visit: &mut F) {
        if k <= 1 {
            visit(items);
            return;
        }
        for i in 0..k {
            heap(k - 1, items, visit);
            let j = if k.is_multiple_of(2) { i } else { 0 };
            if i + 1 < k {
                items.swap(j, k - 1);
            }
        }
    }
    let n = items.len();
    heap(n, items, visit);
}

/// Clique complex on the looped vertices of `g`.
pub fn clique_complex(g: &Graph, limits: &Limits) -> Result<SimplicialComplex> {
    let looped = g.looped_vertices();
    let names: Vec<FaceName> = looped
        .iter()
        .map(|&v| FaceName::from_token(g.label(v)))
        .collect();
    let m = looped.len();
    let mut adj = vec![FixedBitSet::with_capacity(m); m];
    for (i, &u) in looped.iter().enumerate() {
        for (j, &v) in looped.iter().enumerate() {
            if i != j && g.adjacent(u, v) {
                adj[i].insert(j);
            }
        }
    }
    let facets = maximal_cliques(&adj, limits)?;
    Ok(SimplicialComplex::from_maximal_unchecked(names, facets))
}

/// Bron–Kerbosch with pivoting over an irreflexive adjacency.
pub(crate) fn maximal_cliques(adj: &[FixedBitSet], limits: &Limits) -> Result<Vec<Vec<u32>>> {
    fn expand(
        adj: &[FixedBitSet],
        r: &mut Vec<u32>,
        mut p: FixedBitSet,
        mut x: FixedBitSet,
        out: &mut Vec<Vec<u32>>,
        limits: &Limits,
    ) -> Result<()> {
        if p.is_clear() {
            if x.is_clear() {
                out.push(r.clone());
                limits.check("maximal_cliques", out.len())?;
            }
            return Ok(());
        }
        let pivot = p
            .ones()
            .chain(x.ones())
            .max_by_key(|&u| adj[u].intersection(&p).count())
            .expect("p is nonempty");
        let branch: Vec<usize> = p.difference(&adj[pivot]).collect();
        for v in branch {
            let mut p2 = p.clone();
            p2.intersect_with(&adj[v]);
            let mut x2 = x.clone();
            x2.intersect_with(&adj[v]);
            r.push(v as u32);
            expand(adj, r, p2, x2, out, limits)?;
            r.pop();
            p.set(v, false);
            x.insert(v);
        }
        Ok(())
    }

    let n = adj.len();
    let mut out = Vec::new();
    if n == 0 {
        return Ok(out);
    }
    let mut p = FixedBitSet::with_capacity(n);
    p.insert_range(..);
    expand(
        adj,
        &mut Vec::new(),
        p,
        FixedBitSet::with_capacity(n),
        &mut out,
        limits,
    )?;
    Ok(out)
}

/// Order complex: vertices are the poset elements, facets the maximal chains.
pub fn order_complex(p: &Poset, limits: &Limits) -> Result<SimplicialComplex> {
    let names: Vec<FaceName> = p.labels().iter().map(|l| FaceName::from_token(l)).collect();
    let mut facets = Vec::new();
    let mut chain = Vec::new();
    fn walk(
        p: &Poset,
        a: usize,
        chain: &mut Vec<u32>,
        out: &mut Vec<Vec<u32>>,
        limits: &Limits,
    ) -> Result<()> {
        chain.push(a as u32);
        let up = p.upper_covers(a);
        if up.is_empty() {
            out.push(chain.clone());
            limits.check("order_complex", out.len())?;
        }
        for &b in up {
            walk(p, b, chain, out, limits)?;
        }
        chain.pop();
        Ok(())
    }
    for a in p.minimal_elements() {
        walk(p, a, &mut chain, &mut facets, limits)?;
    }
    Ok(SimplicialComplex::from_maximal_unchecked(names, facets))
}

/// Nerve of a named cover: a set of members is a face iff their common
/// intersection is nonempty. Member elements are arbitrary indices.
pub fn nerve<S: AsRef<str>>(names: &[S], members: &[Vec<usize>]) -> Result<SimplicialComplex> {
    assert_eq!(names.len(), members.len(), "one name per cover member");
    let universe = members.iter().flatten().max().map_or(0, |&m| m + 1);
    let sets: Vec<FixedBitSet> = members
        .iter()
        .zip(names)
        .map(|(m, name)| {
            if m.is_empty() {
                return Err(Error::EmptyCoverMember(name.as_ref().to_string()));
            }
            let mut b = FixedBitSet::with_capacity(universe);
            m.iter().for_each(|&x| b.insert(x));
            Ok(b)
        })
        .collect::<Result<_>>()?;

    let mut faces = Vec::new();
    fn grow(
        sets: &[FixedBitSet],
        start: usize,
        face: &mut Vec<u32>,
        common: &FixedBitSet,
        faces: &mut Vec<Vec<u32>>,
    ) {
        for i in start..sets.len() {
            let mut next = common.clone();
            next.intersect_with(&sets[i]);
            if next.is_clear() {
                continue;
            }
            face.push(i as u32);
            faces.push(face.clone());
            grow(sets, i + 1, face, &next, faces);
            face.pop();
        }
    }
    let mut all = FixedBitSet::with_capacity(universe);
    all.insert_range(..);
    grow(&sets, 0, &mut Vec::new(), &all, &mut faces);
    let names = names
        .iter()
        .map(|n| FaceName::from_token(n.as_ref()))
        .collect();
    Ok(SimplicialComplex::from_faces(names, faces))
}

/// True iff `bijection` (vertex `i` of `x` to vertex `bijection[i]` of `y`)
/// carries the faces of `x` exactly onto the faces of `y`.
pub fn complexes_equal_under(
    x: &SimplicialComplex,
    y: &SimplicialComplex,
    bijection: &[usize],
) -> Result<bool> {
    if bijection.len() != x.vertex_count() || x.vertex_count() != y.vertex_count() {
        return Err(Error::NotABijection(format!(
            "{} images for {} -> {} vertices",
            bijection.len(),
            x.vertex_count(),
            y.vertex_count()
        )));
    }
    let mut hit = vec![false; y.vertex_count()];
    for &b in bijection {
        if b >= y.vertex_count() || std::mem::replace(&mut hit[b], true) {
            return Err(Error::NotABijection(format!(
                "image {b} repeated or out of range"
            )));
        }
    }
    let mut mapped: Vec<Vec<u32>> = x
        .facets()
        .iter()
        .map(|f| {
            let mut g: Vec<u32> = f.iter().map(|&v| bijection[v as usize] as u32).collect();
            g.sort_unstable();
            g
        })
        .collect();
    mapped.sort_unstable();
    Ok(mapped == y.facets())
}

/// Bijection matching vertices with equal names, if one exists.
pub fn name_bijection(x: &SimplicialComplex, y: &SimplicialComplex) -> Result<Vec<usize>> {
    x.names()
        .iter()
        .map(|n| {
            y.index_of(n)
                .ok_or_else(|| Error::NotABijection(format!("`{n}` missing from target")))
        })
        .collect()
}
