use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid definition: {0}")]
    Definition(String),

    #[error("unknown symbol '{0}'")]
    UnknownSymbol(char),

    #[error("erasing rule: the image of '{0}' is empty")]
    ErasingRule(char),

    #[error("empty subshift: no letter has unbounded iterates")]
    EmptySubshift,

    #[error("empty word not allowed for {0}")]
    EmptyWord(&'static str),

    #[error("no growing letters: the reduced substitution is empty")]
    NoGrowingLetters,

    #[error("no letter with unbounded iterates reaches every letter of the alphabet (pruned alphabet for the first candidate: {0})")]
    OccurrenceFails(String),

    #[error("factor set is not saturated (closure stopped after {rounds} rounds / {words} words)")]
    Unsaturated { rounds: usize, words: usize },

    #[error("length {requested} exceeds the factor set depth {available}")]
    TooShallow { requested: usize, available: usize },

    #[error("'{0}' has no prefix-fixpoint structure; check compatibility for a two-sided seed instead")]
    NoPrefixFixpoint(char),

    #[error("the reduced substitution is not primitive")]
    NotPrimitive,

    #[error("word {0} contains no growing letter")]
    PureBoundedWord(String),

    #[error("length overflow while iterating (|S^{power}| exceeds 128 bits)")]
    LengthOverflow { power: usize },

    #[error("power iteration did not converge after {0} steps")]
    NoConvergence(usize),

    #[error("undecided at depth: {0}")]
    UndecidedAtDepth(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("structure error: {0}")]
    Structure(String),

    #[error("validation mismatch: {0}")]
    Validation(String),
}
