//! Graph homomorphism complexes and the `G_{k,X}` construction.
//!
//! For a finite simplicial complex `X` and a connected test graph `T`, the
//! looped 1-skeleton `G_{k,X}` of the `k`-th barycentric subdivision of `X`
//! has `Hom(T, G_{k,X})` homotopy equivalent to `X` once `k` is large enough
//! relative to the diameter of `T`. This crate builds every object in that
//! statement and checks it numerically with Z/2 Betti numbers.

pub mod error;
pub mod generators;
pub mod graph;
pub mod hom;
pub mod homology;
pub mod simplicial;
pub mod universality;

pub use error::{Error, Limits, Result, DEFAULT_MAX_CELLS};
pub use graph::{
    exponential_graph, is_graph_map, product, Dismantling, FoldSequence, Graph, GraphJson,
    VertexMap,
};
pub use hom::{
    enumerate_homs, hom_betti_cellular, hom_complex_exponential, hom_complex_order, hom_graph,
    hom_poset, support_subgraph, HomPoset, MultiHom,
};
pub use homology::{
    betti_of_chain_complex, betti_z2, betti_z2_limited, euler_characteristic, BettiReport,
    BettiVector, Z2Matrix,
};
pub use simplicial::{
    clique_complex, nerve, order_complex, ComplexJson, FaceFamily, FaceName, Poset,
    SimplicialComplex,
};
pub use universality::{
    build_g_kx, choose_k, verify_universality, Construction, ConstructionParams, Report, Route,
    SubdivisionTower,
};
