use thiserror::Error;

/// Invalid beam parameters.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("{0} must be strictly positive and finite")]
    NonPositive(&'static str),
}

/// Errors raised while building or evaluating superpositions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("a field spec needs at least one beam component")]
    Empty,
    #[error("all components must share one wavelength (found {first} and {other})")]
    MixedWavelength { first: f64, other: f64 },
    #[error("expected exactly two components, found {0}")]
    WrongArity(usize),
    #[error("grid too large: {requested} samples exceeds the cap of {cap}")]
    GridTooLarge { requested: u128, cap: u64 },
    #[error("invalid sampling grid: {0}")]
    InvalidGrid(String),
}

/// Failures of zero finding, ridge tracing and pitch estimation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum HelixError {
    #[error("components carry different polarization directions; scalar reduction impossible")]
    MixedPolarization,
    #[error("newton iteration did not converge within {iterations} iterations (|E| = {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("jacobian singular at ({x}, {y}): seed sits on a ridge or a higher-charge vortex")]
    JacobianSingular { x: f64, y: f64 },
    #[error("zero search failed at z = {z}: {source}")]
    TraceFailed {
        z: f64,
        #[source]
        source: Box<HelixError>,
    },
    #[error("continuation step at z = {z} jumped {jump} (cap {cap})")]
    StepTooLarge { z: f64, jump: f64, cap: f64 },
    #[error("too few steps: {given} given, at least {required} needed to resolve the helix")]
    TooFewSteps { given: usize, required: usize },
    #[error("bright ridge lost at z = {z}: maximization escaped beyond 3 w(z)")]
    RidgeLost { z: f64 },
    #[error("bright ridge ill-defined at z = {z}: {cause}")]
    RidgeIllDefined { z: f64, cause: IllDefinedCause },
    #[error("trace covers only {turns:.3} turns; at least 0.5 needed")]
    InsufficientTurn { turns: f64 },
    #[error("point is not a field zero: |E| = {amplitude:e} exceeds {tolerance:e}")]
    NotAZero { amplitude: f64, tolerance: f64 },
    #[error("degenerate mode pair: equal OAM index {0} on both beams")]
    DegenerateOam(i32),
    #[error("invalid trace request: {0}")]
    InvalidRequest(String),
}

/// Why a bright ridge could not be isolated.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum IllDefinedCause {
    #[error("hessian indefinite, helix strands self-overlap")]
    HessianIndefinite,
    #[error("helix strands self-overlap (valley/peak intensity {valley_ratio:.4})")]
    SelfOverlap { valley_ratio: f64 },
    #[error("maximum sits on the helix axis (no helical strand)")]
    OnAxis,
}

impl IllDefinedCause {
    pub fn is_self_overlap(&self) -> bool {
        matches!(self, Self::HessianIndefinite | Self::SelfOverlap { .. })
    }
}

/// Lattice construction and contrast measurement failures.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LatticeError {
    #[error("lattice spacing must be positive")]
    BadSpacing,
    #[error("mask selects no samples")]
    EmptyMask,
    #[error("background reference must be positive")]
    BadBackground,
    #[error("core polish diverged from ({x}, {y}, {z})")]
    PolishDiverged { x: f64, y: f64, z: f64 },
    #[error("auxiliary cancellation minimization failed: {0}")]
    MinimizationFailed(String),
    #[error("lattice has no embed-single-helix modification or is not gaussian")]
    NotEmbeddable,
    #[error("helical template must be one forward and one backward beam with different OAM")]
    BadTemplate,
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Helix(#[from] HelixError),
}

/// Invalid contour requests.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContourError {
    #[error("contour fraction must lie strictly between 0 and 1 (got {0})")]
    BadFraction(f64),
    #[error("contouring needs at least 2 samples along x and y (got {nx}×{ny})")]
    TooFewSamples { nx: usize, ny: usize },
}
