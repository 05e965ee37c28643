use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("scheme `{label}` is not defined at side {side} ({requirement})")]
    InadmissibleSide {
        label: String,
        side: usize,
        requirement: &'static str,
    },

    #[error("map is not a bijection: ({i1},{j1}) and ({i2},{j2}) both map to ({p},{q})")]
    DuplicateTarget {
        i1: usize,
        j1: usize,
        i2: usize,
        j2: usize,
        p: usize,
        q: usize,
    },

    #[error("map is not total: no image given for ({i},{j})")]
    MissingSource { i: usize, j: usize },

    #[error("index {value} out of range 1..={max}")]
    IndexOutOfRange { value: usize, max: usize },

    #[error("pairings of odd length {m} do not exist")]
    OddPairingLength { m: usize },

    #[error("pairing enumeration capped at m = {max}, got m = {m}")]
    PairingTooLong { m: usize, max: usize },

    #[error(
        "budget of {budget} constraint checks exceeded after {pairings_done}/{pairings_total} \
         pairings; rerun with a budget of at least {suggested}"
    )]
    BudgetExceeded {
        budget: u64,
        pairings_done: usize,
        pairings_total: usize,
        suggested: u64,
    },

    #[error("exact evaluation only covers Gaussian factors; word contains constant `{name}`")]
    ConstantInExactWord { name: String },

    #[error("unknown scheme label `{label}`")]
    UnknownScheme { label: String },

    #[error("constant `{name}` needs an even side, got {side}")]
    OddConstantSide { name: String, side: usize },

    #[error("star flag on `{label}` is invalid: semicircular variables are self-adjoint")]
    StarOnSemicircular { label: String },

    #[error("no kind declared for word label `{label}`")]
    MissingKind { label: String },

    #[error("scheme `{label}` declared symmetric but fails symmetry at side {side}: σ({i},{j}) is not t(σ(t({i},{j})))")]
    SymmetryViolation {
        label: String,
        side: usize,
        i: usize,
        j: usize,
    },

    #[error("certification grid needs at least 3 points, got {got}")]
    GridTooSmall { got: usize },

    #[error("Monte Carlo estimation needs at least 2 samples, got {got}")]
    TooFewSamples { got: usize },

    #[error("empty word")]
    EmptyWord,

    #[error("table file, line {line}: {message}")]
    TableParse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
