use thiserror::Error;

/// Errors raised by ring construction, ideal algebra and the bi-amalgamation layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring has {size} elements, above the cap of {cap}")]
    SizeCap { size: usize, cap: usize },

    #[error("ideal lattice of a {size}-element ring is too large to enumerate (cap {cap})")]
    LatticeTooLarge { size: usize, cap: usize },

    #[error("construction produced the zero ring")]
    ZeroRing,

    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("ring mismatch: {0}")]
    RingMismatch(String),

    #[error("not a ring homomorphism: {0}")]
    NotAHom(String),

    #[error("element {0} does not belong to the ring")]
    NotAnElement(String),

    #[error("ideal is not proper")]
    NotProper,

    #[error("localization is the zero ring (0 is inverted)")]
    DegenerateLocalization,

    #[error("contraction mismatch: f^-1(J) has {left} elements, g^-1(J') has {right}")]
    ContractionMismatch { left: usize, right: usize },

    #[error("ideal does not contain I0")]
    NotOverConductor,

    #[error("{0}")]
    Unsupported(String),

    #[error("independent decision routes disagree: {0}")]
    OracleDisagreement(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
