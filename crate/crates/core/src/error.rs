use thiserror::Error;

/// Errors surfaced by the exact-lattice library.
///
/// Every failure mode is a typed variant so callers (and the CLI) can map
/// domain failures to stable exit codes and messages.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric (entry ({i},{j}) differs from ({j},{i}))")]
    NotSymmetric { i: usize, j: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("matrix is not negative definite")]
    NotNegativeDefinite,

    #[error("kernel rank exceeds one; extension bookkeeping needs a single relation")]
    KernelRankTooHigh,

    #[error("kernel is trivial; enhanced matrix must be singular for a rational-ball handle")]
    KernelTrivial,

    #[error("vector is not characteristic for this form (coordinate {index} has wrong parity)")]
    NotCharacteristic { index: usize },

    #[error("vectors are not in the same spin-c class")]
    NotSameClass,

    #[error("full paths require a forest with single edges (tree form)")]
    NotTreeForm,

    #[error("path did not terminate within the step bound")]
    PathDidNotTerminate,

    #[error("continued fraction requires p/q > 1 with q >= 1 and gcd(p, q) = 1; got {p}/{q}")]
    BadFraction { p: String, q: String },

    #[error("continued-fraction entries must all be >= 2; entry {index} is {value}")]
    BadCfracEntry { index: usize, value: String },

    #[error("invalid plumbing data: {0}")]
    BadGraph(String),

    #[error("Seifert ray must have alpha >= 2, 1 <= beta < alpha, gcd(alpha, beta) = 1; ray {index} is {alpha}/{beta}")]
    BadSeifertRay {
        index: usize,
        alpha: String,
        beta: String,
    },

    #[error("blow-down needs a vertex of weight +1 or -1; vertex {vertex} has weight {weight}")]
    BlowDownWeight { vertex: usize, weight: String },

    #[error("blow-down result is not a plumbing graph (positive off-diagonal pairing between {i} and {j})")]
    BlowDownNotGraph { i: usize, j: usize },

    #[error("grading shift is positive ({shift}); sharp relations need a non-positive shift")]
    NegativeShift { shift: String },

    #[error("no self-conjugate base class among the candidates")]
    NoSelfConjugateBase,

    #[error("diagram is not alternating (crossing {crossing} breaks the uniform checkerboard sign)")]
    NotAlternating { crossing: usize },

    #[error("diagram is split (white regions fall into more than one component)")]
    SplitDiagram,

    #[error("Goeritz form is definite in neither orientation")]
    NotDefiniteEitherOrientation,

    #[error("lens space parameters need 0 < q < p and gcd(p, q) = 1; got p={p}, q={q}")]
    BadLensParameters { p: String, q: String },

    #[error("chain weights must all be <= -2; weight {index} is {value}")]
    BadWeights { index: usize, value: String },

    #[error("{context}: parse error at line {line}: {message}")]
    Parse {
        context: &'static str,
        line: usize,
        message: String,
    },

    #[error("exact scan overflowed the step bound: {0}")]
    ScanBound(String),
}

pub type Result<T> = std::result::Result<T, Error>;
