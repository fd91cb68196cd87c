use thiserror::Error;

#[derive(Debug, Error)]
pub enum GroupError {
    #[error("trivial or empty group")]
    Trivial,
    #[error("dihedral groups need n >= 3, got {0}")]
    DihedralTooSmall(usize),
    #[error("table row has {found} entries, expected {expected}")]
    BadShape { expected: usize, found: usize },
    #[error("table entry {value} out of range for order {order}")]
    EntryOutOfRange { value: usize, order: usize },
    #[error("not a Latin square: {0}")]
    NotLatinSquare(String),
    #[error("no identity element")]
    NoIdentity,
    #[error("not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("group too large (order cap {cap})")]
    TooLarge { cap: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("element {element} out of range for order {order}")]
    ElementOutOfRange { element: usize, order: usize },
    #[error("malformed table document: {0}")]
    TableFormat(String),
    #[error("group is not nilpotent")]
    NotNilpotent,
    #[error("covering analysis requires a noncyclic group")]
    Cyclic,
    #[error("bad group descriptor `{input}`: {reason}")]
    Descriptor { input: String, reason: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("terminal state: the mover can only generate the group")]
    Terminal,
    #[error("state ({subgroup}, {selected}) is not valid for this lattice")]
    InvalidState { subgroup: usize, selected: usize },
    #[error("subgroup {0} is not maximal")]
    NotMaximal(usize),
    #[error("brute-force oracle limited to order {cap}, got {order}")]
    OracleCap { cap: usize, order: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}
