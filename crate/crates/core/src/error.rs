use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong when building or querying a ring problem.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `N < 2`, `w <= 0`, or a non-finite parameter.
    InvalidConfig(&'static str),
    /// Momentum or site index outside `0..N`.
    IndexOutOfRange { index: usize, len: usize },
    /// Amplitudes do not have unit norm (site basis) or do not satisfy
    /// Parseval (momentum basis).
    NotNormalized { norm_sqr: f64 },
    /// Sequence length does not match the ring.
    LengthMismatch { expected: usize, found: usize },
    /// Initial packet does not fit on the ring.
    PacketTooWide,
    /// Square form factor requested for an even width.
    EvenWidth(usize),
    /// Time or time step is NaN or infinite.
    NonFiniteTime,
    /// Receiver offset `|d| >= N/2` is ambiguous on the ring.
    ReceiverOutOfRange { receiver: i64, n_sites: usize },
    /// A requested time exceeds the no-wrap horizon.
    HorizonExceeded { t: f64, horizon: f64 },
    /// Time grid empty or not strictly increasing.
    InvalidGrid(&'static str),
    /// Fewer samples than peak extraction needs.
    SeriesTooShort(usize),
    /// Occupation straddles the antipode of the reference site.
    CenterUndefined,
    /// Argument outside the supported domain of a closed-form routine.
    Domain(&'static str),
    /// Step size or step count outside the stepper's limits.
    StepSize(&'static str),
    /// Dense oracle asked for more sites than it supports.
    OracleTooLarge(usize),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidConfig(why) => write!(f, "invalid ring configuration: {why}"),
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for ring of {len} sites")
            }
            Error::NotNormalized { norm_sqr } => {
                write!(f, "amplitudes are not normalized (norm squared {norm_sqr})")
            }
            Error::LengthMismatch { expected, found } => {
                write!(f, "expected {expected} amplitudes, found {found}")
            }
            Error::PacketTooWide => write!(f, "initial packet is wider than the ring"),
            Error::EvenWidth(l) => write!(f, "square packet width must be odd, got {l}"),
            Error::NonFiniteTime => write!(f, "time must be finite"),
            Error::ReceiverOutOfRange { receiver, n_sites } => {
                write!(
                    f,
                    "receiver offset {receiver} must satisfy |d| < {n_sites}/2"
                )
            }
            Error::HorizonExceeded { t, horizon } => {
                write!(f, "time {t} exceeds the no-wrap horizon {horizon}")
            }
            Error::InvalidGrid(why) => write!(f, "invalid time grid: {why}"),
            Error::SeriesTooShort(n) => write!(f, "peak search needs at least 3 samples, got {n}"),
            Error::CenterUndefined => {
                write!(
                    f,
                    "center of mass undefined: occupation straddles the antipode"
                )
            }
            Error::Domain(why) => write!(f, "argument out of domain: {why}"),
            Error::StepSize(why) => write!(f, "invalid step size: {why}"),
            Error::OracleTooLarge(n) => {
                write!(f, "dense oracle supports at most 4096 sites, got {n}")
            }
        }
    }
}

impl core::error::Error for Error {}
