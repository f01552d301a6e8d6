use alloc::boxed::Box;
use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("distance matrix has {rows} rows (row {bad_row} has {cols} entries) for {points} points")]
    DimensionMismatch {
        points: usize,
        rows: usize,
        bad_row: usize,
        cols: usize,
    },
    #[error("index {index} out of range for {len} points")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("{0} must not be empty")]
    EmptySubset(&'static str),
    #[error("degenerate chain: endpoints are the same point")]
    DegenerateChain,
    #[error("{name} = {value} is outside {range}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("values are not {bound}-Lipschitz: pair ({a}, {b}) has ratio {ratio}")]
    NotLipschitz {
        a: usize,
        b: usize,
        ratio: f64,
        bound: f64,
    },
    #[error("space has no basepoint")]
    MissingBasepoint,
    #[error("edges do not form a tree: {0}")]
    NotATree(String),
    #[error("domain is not an arc: {0}")]
    NotAnArc(String),
    #[error("tree is not 1-bounded turning (measured constant {c_hat})")]
    NotOneBoundedTurning { c_hat: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("point {0} of the smaller set is not in the larger set")]
    NotSubset(usize),
    #[error("structural invariant violated: {0}")]
    Structural(String),
    #[error("piece maps disagree at vertex {vertex}: {left} vs {right}")]
    BoundaryMismatch { vertex: usize, left: f64, right: f64 },
    #[error("map does not vanish at basepoint of piece {piece} (value {value})")]
    NonzeroBasepoint { piece: usize, value: f64 },
    #[error("solver: {0}")]
    Solver(String),
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn at(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
