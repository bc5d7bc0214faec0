use thiserror::Error;

/// Errors raised by the enumeration and verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet must contain at least one letter")]
    EmptyAlphabet,
    #[error("invalid letter token {0:?}")]
    InvalidLetter(String),
    #[error("letter {0:?} appears more than once in the alphabet")]
    DuplicateLetter(String),
    #[error("cannot parse word {word:?}: {reason}")]
    WordParse { word: String, reason: String },
    #[error("forbidden word {0:?} has length < 2")]
    ForbiddenTooShort(String),
    #[error("operands are over different alphabets")]
    AlphabetMismatch,
    #[error("constant term is not a unit of the coefficient ring")]
    NonUnitConstant,
    #[error("forbidden set is not reduced: {0} contains another member as a factor")]
    NotReduced(String),
    #[error("{0} is not a cluster word")]
    NotClusterWord(String),
    #[error("invalid marked word: {0}")]
    InvalidMark(String),
    #[error("coefficient {value} of {word} lies outside {{-1, 0, 1}}")]
    RangeViolation { word: String, value: String },
    #[error("computation paths disagree at {word}: {detail}")]
    PathDisagreement { word: String, detail: String },
    #[error("invalid sign sequence: {0}")]
    SignSequence(String),
    #[error("forbidden word {0:?} does not have length 2")]
    NotLengthTwo(String),
    #[error("interval family: {0}")]
    IntervalFamily(String),
    #[error("family of {size} intervals exceeds the bound {bound}")]
    FamilyTooLarge { size: usize, bound: usize },
    #[error("elements are not comparable in the lattice")]
    Incomparable,
    #[error("element is not in the lattice")]
    NotInLattice,
    #[error("enumeration of {count} words exceeds the limit {limit}")]
    TooManyWords { count: u128, limit: u128 },
    #[error("problem spec: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
