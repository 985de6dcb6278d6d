use thiserror::Error;

use crate::poly::PolyError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported root system type {letter}{rank}")]
    UnsupportedType { letter: char, rank: usize },

    #[error("Weyl group of order {order} exceeds the cap of {cap} elements")]
    GroupTooLarge { order: u64, cap: u64 },

    #[error("complement has {size} roots; the direct method allows at most {limit}")]
    ComplementTooLarge { size: usize, limit: usize },

    #[error("not a Weyl-type subset: {0}")]
    NotWeylType(String),

    #[error("invalid ideal: {0}")]
    InvalidIdeal(String),

    #[error("invalid arrangement: {0}")]
    InvalidArrangement(String),

    #[error("{what} needs {needed} work units, budget is {budget}")]
    BudgetExceeded { what: &'static str, needed: u64, budget: u64 },

    #[error("denominator vanishes at evaluation point t = {point}")]
    EvaluationPole { point: i64 },

    #[error(transparent)]
    Poly(#[from] PolyError),

    #[error("cache: {0}")]
    Io(#[from] std::io::Error),
}
