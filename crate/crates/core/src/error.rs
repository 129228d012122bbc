use thiserror::Error;

/// Rejections of malformed or out-of-scope input. These map to exit code 1.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InputError {
    #[error("p = 2 is not supported: the residue characteristic must be odd")]
    EvenCharacteristic,
    #[error("p = {0} is not prime")]
    NotPrime(String),
    #[error("root count {0} is odd; a split Weierstrass polynomial has even degree 2g+2")]
    OddRootCount(usize),
    #[error("too few roots: got {count}, need at least {min} (genus g >= 2)")]
    TooFewRoots { count: usize, min: usize },
    #[error("duplicate roots at indices {0} and {1}")]
    DuplicateRoots(usize, usize),
    #[error("root at index {index} ({value}) is not integral at p = {p}")]
    NonIntegralRoot { index: usize, value: String, p: u64 },
    #[error("cannot parse root at index {index}: {value:?} is not an integer or fraction a/b")]
    BadRoot { index: usize, value: String },
    #[error("valuation matrix is not square: row {row} has {len} entries, expected {n}")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("valuation matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("valuation matrix diagonal entry ({0}, {0}) must be null (infinite)")]
    FiniteDiagonal(usize),
    #[error("valuation matrix has an infinite off-diagonal entry at ({0}, {1}): roots must be distinct")]
    InfiniteOffDiagonal(usize, usize),
    #[error("valuation matrix is not ultrametric: violating triples {}", format_triples(.0))]
    UltrametricViolation(Vec<(usize, usize, usize)>),
    #[error("malformed instance file: {0}")]
    Malformed(String),
    #[error("{0}")]
    StrictWarning(String),
}

fn format_triples(triples: &[(usize, usize, usize)]) -> String {
    const SHOWN: usize = 8;
    let mut out: Vec<String> = triples
        .iter()
        .take(SHOWN)
        .map(|(i, j, k)| format!("({i}, {j}, {k})"))
        .collect();
    if triples.len() > SHOWN {
        out.push(format!("... and {} more", triples.len() - SHOWN));
    }
    out.join(", ")
}

/// An identity that must hold on every correctly constructed model failed.
/// Maps to exit code 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("internal invariant violated: {identity}{}", .vertex.map(|v| format!(" at vertex {v}")).unwrap_or_default())]
pub struct InvariantViolation {
    pub identity: String,
    pub vertex: Option<usize>,
}

impl InvariantViolation {
    pub fn new(identity: impl Into<String>) -> Self {
        Self {
            identity: identity.into(),
            vertex: None,
        }
    }

    pub fn at(identity: impl Into<String>, vertex: usize) -> Self {
        Self {
            identity: identity.into(),
            vertex: Some(vertex),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Invariant(#[from] InvariantViolation),
}

impl AnalysisError {
    /// Process exit code associated with this failure class.
    pub fn exit_code(&self) -> i32 {
        match self {
            AnalysisError::Input(_) => 1,
            AnalysisError::Invariant(_) => 2,
        }
    }
}
