use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(
        "matrix is not Hermitian: entries ({row},{col}) and ({col},{row}) differ by {deviation:e}"
    )]
    NonHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("not a valid state: eigenvalue {0:e} is below the clamping band")]
    NotAState(f64),

    #[error("parameter out of domain: {0}")]
    Domain(String),

    #[error("no entanglement anywhere in the search bracket: {0}")]
    NoEntanglement(String),

    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
