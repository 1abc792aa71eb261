use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("not a bit string: {0:?}")]
    InvalidBits(String),

    #[error("layout error: {0}")]
    Layout(String),

    #[error("degenerate preparation: both V coefficients are zero")]
    DegeneratePreparation,

    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    Unitarity { deviation: f64 },

    #[error("state is not normalized (norm² = {norm_sqr})")]
    Normalization { norm_sqr: f64 },

    #[error("outcome {outcome} of register {register} has zero probability")]
    ImpossibleOutcome { register: String, outcome: String },

    #[error("partition error: {0}")]
    Partition(String),

    #[error("unsupported size for family {family}: {detail}")]
    Size { family: String, detail: String },

    #[error("unknown family {0:?}")]
    UnknownFamily(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(
        "capacity exceeded for {family}: {members} members, {rows} rows (limits {max_members}, {max_rows})"
    )]
    Capacity {
        family: String,
        members: usize,
        rows: usize,
        max_members: usize,
        max_rows: usize,
    },

    #[error("members {a} and {b} have identical tables but different solutions")]
    Indistinguishable { a: String, b: String },

    #[error("every advanced half of {0} already determines the solution")]
    DegenerateProblem(String),

    #[error("histories need advanced depth 1, found {depth}")]
    UnsupportedDepth { depth: usize },

    #[error("history amplitudes cancel to the zero vector")]
    Cancellation,

    #[error("label {label}: members {a} and {b} leave non-proportional X states")]
    LabelIncoherence { label: String, a: String, b: String },

    #[error("separation error: {0}")]
    Separation(String),

    #[error("mod-2 system is rank deficient (rank {rank}, need {needed})")]
    Rank { rank: usize, needed: usize },

    #[error("sampling loop did not terminate within {0} iterations")]
    NonTermination(usize),

    #[error("model mismatch: {0}")]
    ModelMismatch(String),
}
