use thiserror::Error;

/// Errors raised by the geometry kernel and the verification harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("spinor contraction requires matching priming")]
    ContractionError,
    #[error("matrix is not null (|det| = {det_abs:e} exceeds tolerance)")]
    NotNull { det_abs: f64 },
    #[error("zero vector where a nonzero one is required")]
    ZeroVector,
    #[error("singular 2x2 matrix")]
    SingularMatrix,
    #[error("division by a jet whose value is too close to zero")]
    DivisionBySingularJet,
    #[error("jet order {got} is below the required order {need}")]
    InsufficientJetOrder { need: usize, got: usize },
    #[error("degenerate curve: {0}")]
    DegenerateCurve(&'static str),
    #[error("random generation exhausted after {0} retries")]
    GenerationExhausted(usize),
    #[error("singular tangent: curve derivative vanishes at the expansion point")]
    SingularTangent,
    #[error("curve tangent is not null at the expansion point")]
    NotNullTangent,
    #[error("singular correspondence: tangent-spinor pairing below tolerance")]
    SingularCorrespondence,
    #[error("singular image: inversion denominator below tolerance")]
    SingularImage,
    #[error("singular denominator in closed-form evaluation")]
    SingularDenominator,
    #[error("degenerate image: endomorphism output vanishes")]
    DegenerateImage,
    #[error("singular patch: b{0} is not invertible")]
    SingularPatch(u8),
    #[error("singular base point: patch coordinate is not invertible")]
    SingularBasePoint,
    #[error("degenerate tangent factor in extracted null direction")]
    DegenerateTangent,
    #[error("unknown suite '{0}'")]
    UnknownSuite(String),
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),
    #[error("io error: {0}")]
    Io(String),
    #[error("could not parse input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
