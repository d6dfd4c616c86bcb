use thiserror::Error;

/// Default budget for materialized cells (vertices + edges, faces, poset
/// elements) before an operation gives up.
pub const DEFAULT_MAX_CELLS: usize = 5_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),

    #[error("duplicate edge entry `{0}`-`{1}`")]
    DuplicateEdge(String, String),

    #[error("empty facet")]
    EmptyFacet,

    #[error("empty cover member `{0}`")]
    EmptyCoverMember(String),

    #[error("graph is empty")]
    EmptyGraph,

    #[error("graph is disconnected")]
    Disconnected,

    #[error("vertex set is not a subset of the graph")]
    NotASubset,

    #[error("invalid vertex map: {0}")]
    InvalidMap(String),

    #[error("mapping is not a bijection: {0}")]
    NotABijection(String),

    #[error("poset relation has a cycle")]
    CyclicOrder,

    #[error("maps do not form a clique of looped vertices in the exponential graph")]
    NotAClique,

    #[error("invalid construction parameters: {0}")]
    InvalidParams(String),

    #[error("invalid face name `{0}`")]
    InvalidFaceName(String),

    #[error("cell cap exceeded at stage `{stage}` (limit {limit})")]
    CapExceeded { stage: &'static str, limit: usize },

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Size budget shared by every construction that can blow up combinatorially.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_cells: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_cells: DEFAULT_MAX_CELLS,
        }
    }
}

impl Limits {
    pub fn new(max_cells: usize) -> Self {
        Limits { max_cells }
    }

    pub(crate) fn check(&self, stage: &'static str, count: usize) -> Result<()> {
        if count > self.max_cells {
            Err(Error::CapExceeded {
                stage,
                limit: self.max_cells,
            })
        } else {
            Ok(())
        }
    }
}
