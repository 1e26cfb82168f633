use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("cycle detected through vertex {0}")]
    CycleDetected(u64),
    #[error("more than one root: {0} and {1}")]
    MultipleRoots(u64, u64),
    #[error("in-list problem at vertex {0}: {1}")]
    UnorderedInList(u64, String),
    #[error("vertex {0} not found")]
    VertexNotFound(usize),
    #[error("the two endpoints must be distinct")]
    IdenticalEndpoints,
    #[error("seam tree is not stable")]
    SeamTreeUnstable,
    #[error("bubble-tree stability violated at component {0}")]
    BubbleStabilityViolated(usize),
    #[error("alternation violated: {0}")]
    AlternationViolated(String),
    #[error("coherence violated: {0}")]
    CoherenceViolated(String),
    #[error("type vector mismatch: {0}")]
    TypeVectorMismatch(String),
    #[error("contiguity is only defined when one endpoint is a component")]
    PairKindUnsupported,
    #[error("scale limit exceeded: {0}")]
    ScaleLimitExceeded(String),
    #[error("horizontal part of the reparametrization at component {0} differs from its seam vertex")]
    ProjectionMismatch(usize),
    #[error("invalid coordinates: {0}")]
    InvalidCoordinates(String),
    #[error("undefined derived coordinate: {0}")]
    UndefinedCoordinate(String),
    #[error("degenerate family: {0}")]
    DegenerateFamily(String),
    #[error("invalid family: {0}")]
    InvalidFamily(String),
    #[error("new point coincides with marked point ({0}, {1})")]
    CoincidentPoint(usize, usize),
    #[error("classification mismatch: {0}")]
    ClassificationMismatch(String),
    #[error("no tree-pair surjection from the limit to the smooth stratum")]
    SurjectionNotFound,
    #[error("surjection does not match the given curves: {0}")]
    SurjectionMismatch(String),
    #[error("radius must be a positive number, got {0}")]
    InvalidRadius(String),
    #[error("parse error: {0}")]
    Parse(String),
}
