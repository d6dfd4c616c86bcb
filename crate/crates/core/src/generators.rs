//! Standard small graphs and complexes, plus a seeded generator of
//! dismantlable graphs.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::Graph;
use crate::simplicial::SimplicialComplex;

/// Loopless complete graph `K_n`.
pub fn complete(n: usize) -> Graph {
    let mut g = Graph::unlabelled(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v);
        }
    }
    g
}

/// Loopless cycle `C_n` (`n >= 3`).
pub fn cycle(n: usize) -> Graph {
    let mut g = Graph::unlabelled(n);
    for v in 0..n {
        g.add_edge(v, (v + 1) % n);
    }
    g
}

/// Loopless path on `n` vertices.
pub fn path(n: usize) -> Graph {
    let mut g = Graph::unlabelled(n);
    for v in 1..n {
        g.add_edge(v - 1, v);
    }
    g
}

/// The single looped vertex, the unit of the categorical product.
pub fn looped_point() -> Graph {
    Graph::unlabelled(1).reflexive()
}

fn letters(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("v{i}")
            }
        })
        .collect()
}

/// Full `d`-simplex on vertices `a, b, ...`.
pub fn simplex(d: usize) -> SimplicialComplex {
    let vs = letters(d + 1);
    SimplicialComplex::from_facets(&vs, std::slice::from_ref(&vs)).expect("valid simplex")
}

/// Boundary of the `d`-simplex, a `(d-1)`-sphere.
pub fn boundary_simplex(d: usize) -> SimplicialComplex {
    let vs = letters(d + 1);
    let facets: Vec<Vec<String>> = (0..=d)
        .map(|skip| {
            vs.iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, v)| v.clone())
                .collect()
        })
        .collect();
    SimplicialComplex::from_facets(&vs, &facets).expect("valid boundary")
}

/// `n` isolated points.
pub fn points(n: usize) -> SimplicialComplex {
    let vs = letters(n);
    let facets: Vec<Vec<String>> = vs.iter().map(|v| vec![v.clone()]).collect();
    SimplicialComplex::from_facets(&vs, &facets).expect("valid points")
}

/// Random dismantlable graph on `n >= 1` vertices, grown by reverse folds.
///
/// Each new vertex `v` is attached under an existing `w`: `v ~ w`, `v` is
/// looped, and `v` also sees each other neighbor of `w` with probability
/// `density`. Hence `N(v) ⊆ N(w)` at insertion time, and folding vertices
/// in reverse insertion order reaches the looped seed. When `density` is small
/// the result stays sparse enough for Hom posets to remain enumerable.
/// Closed neighborhoods are kept to at most `max_degree` vertices.
pub fn random_dismantlable<R: Rng>(
    rng: &mut R,
    n: usize,
    density: f64,
    max_degree: usize,
) -> Graph {
    assert!(n >= 1, "need at least one vertex");
    let mut g = Graph::unlabelled(n);
    g.add_loop(0);
    for v in 1..n {
        let open: Vec<usize> = (0..v).filter(|&w| g.degree(w) < max_degree).collect();
        let w = *open.choose(rng).unwrap_or(&rng.gen_range(0..v));
        g.add_loop(v);
        g.add_edge(v, w);
        let mut others: Vec<usize> = g
            .neighborhood(w)
            .unwrap()
            .into_iter()
            .filter(|&u| u != w && u != v)
            .collect();
        others.shuffle(rng);
        for u in others {
            if g.degree(v) >= max_degree || g.degree(u) >= max_degree {
                continue;
            }
            if rng.gen_bool(density) {
                g.add_edge(v, u);
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn shapes() {
        assert_eq!(complete(4).edge_count(), 6);
        assert_eq!(cycle(6).edge_count(), 6);
        assert_eq!(path(3).edge_count(), 2);
        assert!(looped_point().is_reflexive());
        assert_eq!(points(2).f_vector(), vec![2]);
        assert_eq!(boundary_simplex(2).f_vector(), vec![3, 3]);
    }

    #[test]
    fn random_graphs_dismantle() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=8 {
            for _ in 0..20 {
                let g = random_dismantlable(&mut rng, n, 0.4, 4);
                assert_eq!(g.len(), n);
                assert!(g.dismantle().unwrap().dismantlable, "{:?}", g.to_json());
            }
        }
    }
}
