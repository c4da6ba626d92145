use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range (graph has {n} vertices)")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge ({0}, {0}) is a loop; loops are declared on the `loops` line")]
    SelfEdge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomError {
    #[error("map has {got} entries but the source graph has {expected} vertices")]
    WrongLength { expected: usize, got: usize },
    #[error("vertex {vertex} is mapped to {image}, outside the target's {n} vertices")]
    ImageOutOfRange {
        vertex: usize,
        image: usize,
        n: usize,
    },
    #[error("edge ({u}, {v}) is mapped to the non-edge ({a}, {b})")]
    BrokenEdge {
        u: usize,
        v: usize,
        a: usize,
        b: usize,
    },
    #[error("looped vertex {vertex} is mapped to {image}, which has no loop")]
    BrokenLoop { vertex: usize, image: usize },
}

/// First violation found while replaying a recoloring path.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("start map is not a homomorphism: {0}")]
    InvalidStart(HomError),
    #[error("step {index}: vertex {vertex} out of range")]
    VertexOutOfRange { index: usize, vertex: usize },
    #[error("step {index}: vertex {vertex} has colour {actual}, step expects {expected}")]
    FromMismatch {
        index: usize,
        vertex: usize,
        expected: usize,
        actual: usize,
    },
    #[error("step {index}: recolouring vertex {vertex} from {from} to {to} is not a Col move")]
    IllegalMove {
        index: usize,
        vertex: usize,
        from: usize,
        to: usize,
    },
    #[error("path ends at {actual:?}, expected {expected:?}")]
    WrongEnd {
        expected: Vec<usize>,
        actual: Vec<usize>,
    },
}

impl PathError {
    /// Index of the offending step, if the failure is tied to one.
    pub fn step_index(&self) -> Option<usize> {
        match self {
            PathError::VertexOutOfRange { index, .. }
            | PathError::FromMismatch { index, .. }
            | PathError::IllegalMove { index, .. } => Some(*index),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("state budget of {budget} exceeded")]
    BudgetExceeded { budget: usize },
    #[error("endpoint is not a homomorphism: {0}")]
    InvalidEndpoint(HomError),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("graph `{0}` must be reflexive")]
    NotReflexive(String),
    #[error("graph `{0}` must be irreflexive")]
    NotIrreflexive(String),
    #[error("graph `{name}` contains an induced diamond on {witness:?}")]
    Diamond { name: String, witness: [usize; 4] },
    #[error("graph `{0}` is not bipartite")]
    NotBipartite(String),
    #[error("graph `{0}` contains a 4-cycle")]
    NotSquareFree(String),
    #[error("vertex {vertex} of the incidence graph is mapped to the wrong side ({image})")]
    SideSwap { vertex: usize, image: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no intermediate colour between {from} and {to} for vertex {vertex}")]
    NoIntermediate {
        vertex: usize,
        from: usize,
        to: usize,
    },
    #[error("colours {a} and {c} have {count} common neighbours; expected exactly one")]
    CommonNeighbor { a: usize, c: usize, count: usize },
    #[error("endpoint does not keep every vertex on its side of the product")]
    Misaligned,
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Path(#[from] PathError),
}
