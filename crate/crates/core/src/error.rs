use thiserror::Error;

use crate::linalg::SparseVec;

/// A concrete input on which an identity or construction breaks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Tensor factor dimensions of the space the input lives in.
    pub dims: Vec<usize>,
    /// Multi-index of the basis vector used as input, if the input is one.
    pub basis_index: Option<Vec<usize>>,
    pub input: SparseVec,
    /// Left side minus right side, or the offending image vector.
    pub residual: SparseVec,
}

impl Witness {
    /// Witness for the basis vector `e_j` of a space with factor `dims`.
    pub fn basis(dims: &[usize], j: usize, residual: SparseVec) -> Witness {
        Witness {
            dims: dims.to_vec(),
            basis_index: Some(decode_index(dims, j)),
            input: SparseVec::unit(j),
            residual,
        }
    }

    pub fn vector(dims: &[usize], input: SparseVec, residual: SparseVec) -> Witness {
        Witness { dims: dims.to_vec(), basis_index: None, input, residual }
    }
}

/// Splits a flat tensor index into per-factor indices (row-major, last
/// factor fastest).
pub fn decode_index(dims: &[usize], mut j: usize) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        if d > 0 {
            *slot = j % d;
            j /= d;
        }
    }
    out
}

pub fn encode_index(dims: &[usize], idx: &[usize]) -> usize {
    dims.iter().zip(idx).fold(0, |acc, (&d, &i)| acc * d + i)
}

#[derive(Clone, Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("map is singular")]
    Singular,
    #[error("no factorization: kernel vector not annihilated")]
    NoFactor(Box<Witness>),
    #[error("algebra axiom {0} fails")]
    NotAlgebra(String, Box<Witness>),
    #[error("braiding {0} is not invertible")]
    NotInvertible(String),
    #[error("the two expressions for tau disagree")]
    TauMismatch(Box<Witness>),
    #[error("tau is singular")]
    TauSingular,
    #[error("hexagon identity {0} fails")]
    HexagonFails(String, Box<Witness>),
    #[error("completion exceeded {0} elements")]
    Truncated(usize),
    #[error("Leibniz rule fails")]
    NotLeibniz(Box<Witness>),
    #[error("bimodule law {0} fails")]
    NotBimodule(String, Box<Witness>),
    #[error("{0} is not surjective")]
    NotSurjective(String),
    #[error("calculus is not covariant for braiding {0}")]
    NotCovariant(String, Box<Witness>),
    #[error("calculus is not left covariant")]
    NotLeftCovariant(Box<Witness>),
    #[error("calculus is not right covariant")]
    NotRightCovariant(Box<Witness>),
    #[error("invalid ideal: {0}")]
    IdealInvalid(String, Option<Box<Witness>>),
    #[error("induced braiding on invariant forms is singular")]
    SigmaStarSingular,
    #[error("calculus is not antipode covariant")]
    NotKappaCovariant(Box<Witness>),
    #[error("calculus is not star covariant")]
    NotStarCovariant(Box<Witness>),
    #[error("star structure fails {0}")]
    NotStarGroup(String, Box<Witness>),
    #[error("adjoint coaction does not descend to invariant forms")]
    AdNotDescending(Box<Witness>),
    #[error("the two expressions for kappa0 disagree")]
    Kappa0Mismatch(Box<Witness>),
    #[error("{0} flip-over operator is not bijective")]
    FlipNotBijective(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String, Option<Box<Witness>>),
    #[error("{0}")]
    Input(String),
}

impl Error {
    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Error::NoFactor(w)
            | Error::NotAlgebra(_, w)
            | Error::TauMismatch(w)
            | Error::HexagonFails(_, w)
            | Error::NotLeibniz(w)
            | Error::NotBimodule(_, w)
            | Error::NotCovariant(_, w)
            | Error::NotLeftCovariant(w)
            | Error::NotRightCovariant(w)
            | Error::NotKappaCovariant(w)
            | Error::NotStarCovariant(w)
            | Error::NotStarGroup(_, w)
            | Error::AdNotDescending(w)
            | Error::Kappa0Mismatch(w) => Some(w),
            Error::Inconsistent(_, w) => w.as_deref(),
            Error::IdealInvalid(_, w) => w.as_deref(),
            _ => None,
        }
    }

    /// Variant name, used as a stable label in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Parse(_) => "ParseError",
            Error::Schema(_) => "SchemaError",
            Error::DimMismatch(_) => "DimensionError",
            Error::DivisionByZero => "DivisionByZero",
            Error::Singular => "Singular",
            Error::NoFactor(_) => "NoFactor",
            Error::NotAlgebra(..) => "NotAlgebra",
            Error::NotInvertible(_) => "NotInvertible",
            Error::TauMismatch(_) => "TauMismatch",
            Error::TauSingular => "TauSingular",
            Error::HexagonFails(..) => "HexagonFails",
            Error::Truncated(_) => "Truncated",
            Error::NotLeibniz(_) => "NotLeibniz",
            Error::NotBimodule(..) => "NotBimodule",
            Error::NotSurjective(_) => "NotSurjective",
            Error::NotCovariant(..) => "NotCovariant",
            Error::NotLeftCovariant(_) => "NotLeftCovariant",
            Error::NotRightCovariant(_) => "NotRightCovariant",
            Error::IdealInvalid(..) => "IdealInvalid",
            Error::SigmaStarSingular => "SigmaStarSingular",
            Error::NotKappaCovariant(_) => "NotKappaCovariant",
            Error::NotStarCovariant(_) => "NotStarCovariant",
            Error::NotStarGroup(..) => "NotStarGroup",
            Error::AdNotDescending(_) => "AdNotDescending",
            Error::Kappa0Mismatch(_) => "Kappa0Mismatch",
            Error::FlipNotBijective(_) => "FlipNotBijective",
            Error::Inconsistent(..) => "Inconsistent",
            Error::Input(_) => "InputError",
        }
    }

    /// Whether this error stems from malformed input rather than a failed
    /// mathematical check.
    pub fn is_input_error(&self) -> bool {
        matches!(self, Error::Parse(_) | Error::Schema(_) | Error::DimMismatch(_) | Error::Input(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
