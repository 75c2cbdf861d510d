use thiserror::Error;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(&'static str),
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("index {index} out of range (limit {limit})")]
    OutOfRange { index: usize, limit: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("not a permutation of 1..={0}")]
    NotPermutation(usize),
    #[error("invalid sigma encoding: {0}")]
    SigmaSyntax(&'static str),
    #[error("decision sequence has length {got}, expected {expected}")]
    DecisionLength { expected: usize, got: usize },
    #[error("A(z) is singular at z = {re}{im:+}i (pole candidate)")]
    Pole { re: f64, im: f64 },
    #[error("A(λ) is not regular")]
    IrregularA,
    #[error("interpolation residual {residual:.3e} exceeds tolerance")]
    InterpolationResidual { residual: f64 },
    #[error("holdout residual {residual:.3e} exceeds tolerance after retries")]
    HoldoutResidual { residual: f64 },
    #[error("root iteration did not converge in {sweeps} sweeps")]
    NonConvergence { sweeps: usize },
    #[error("matrix polynomial is singular (det vanishes identically)")]
    SingularInput,
    #[error("no sample point could be evaluated")]
    AllSamplesSingular,
    #[error("degree {0} is too small for this operation")]
    DegreeTooSmall(usize),
    #[error("problem too large for dense determinant interpolation (degree bound {0})")]
    TooLarge(usize),
    #[error("zero polynomial")]
    ZeroPolynomial,
}
