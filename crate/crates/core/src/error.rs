use alloc::string::String;
use core::fmt;

/// Errors raised by the engine. Failing identity checks are reported through
/// report structs, never through this type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    DuplicateName(String),
    ReducibleMinpoly { name: String, root: String },
    NonMonic(String),
    /// Minimal polynomial coefficients may only involve algebraic generators.
    UnsupportedMinpoly(String),
    DivisionByZero,
    TowerMismatch,
    NameClash(String),
    SingularRelation { point: String },
    RelationNotMonic(String),
    RingMismatch,
    NonUnitBody,
    NonUnitEntry,
    BaseIncompatible(String),
    Mismatch(String),
    NoDualBase,
    NotAnEnlargement { from: String, to: String },
    NotStabilized { dims_low: alloc::vec::Vec<usize>, dims_high: alloc::vec::Vec<usize> },
    WindowOverflow(String),
    NotNumberField,
    NotLaurent(String),
    TooManyVariables(usize),
    UnsupportedCurve(String),
    InvalidArgument(String),
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DuplicateName(n) => write!(f, "duplicate name `{n}`"),
            Error::ReducibleMinpoly { name, root } => {
                write!(f, "minimal polynomial of `{name}` has a root in the tower below: {root}")
            }
            Error::NonMonic(n) => write!(f, "minimal polynomial of `{n}` is not monic"),
            Error::UnsupportedMinpoly(n) => write!(
                f,
                "minimal polynomial of `{n}` mentions a transcendental generator"
            ),
            Error::DivisionByZero => f.write_str("division by zero"),
            Error::TowerMismatch => f.write_str("operands live in different towers"),
            Error::NameClash(n) => write!(f, "name `{n}` is already in use"),
            Error::SingularRelation { point } => write!(f, "relation is singular at {point}"),
            Error::RelationNotMonic(v) => {
                write!(f, "relation is not monic in the last variable `{v}`")
            }
            Error::RingMismatch => f.write_str("operands live in different rings"),
            Error::NonUnitBody => f.write_str("dual number has a non-unit body"),
            Error::NonUnitEntry => f.write_str("symbol entry is not a unit"),
            Error::BaseIncompatible(m) => write!(f, "incompatible base: {m}"),
            Error::Mismatch(m) => write!(f, "mismatched operands: {m}"),
            Error::NoDualBase => f.write_str("form is not defined over a dual-number base"),
            Error::NotAnEnlargement { from, to } => {
                write!(f, "base {to} does not enlarge base {from}")
            }
            Error::NotStabilized { dims_low, dims_high } => write!(
                f,
                "truncated cohomology did not stabilize: {dims_low:?} vs {dims_high:?}"
            ),
            Error::WindowOverflow(m) => write!(f, "truncation window overflow: {m}"),
            Error::NotNumberField => f.write_str("ground field is not a number field"),
            Error::NotLaurent(m) => write!(f, "element is not a Laurent polynomial on the chart: {m}"),
            Error::TooManyVariables(n) => write!(f, "too many variables ({n})"),
            Error::UnsupportedCurve(m) => write!(f, "unsupported curve: {m}"),
            Error::InvalidArgument(m) => write!(f, "invalid argument: {m}"),
        }
    }
}

impl core::error::Error for Error {}
