use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong in the algebra core.
///
/// Variants that signal a violated internal guarantee (`DegenerateForm`,
/// `ResidualBeta`) indicate a bug, not bad input.
#[derive(Debug, Clone, PartialEq, Eq)]
#[non_exhaustive]
pub enum Error {
    NotPrime(u64),
    CharacteristicTwo,
    FieldTooLarge { p: u32, k: u32 },
    NotIrreducible,
    OrderUnavailable { order: u64, field_order: u64 },
    ContextMismatch,
    ShapeMismatch,
    InvalidShape(&'static str),
    IndexOutOfRange,
    AxisOutOfRange { axis: usize, m: usize },
    NonzeroConstantTerm,
    NotAUnit,
    KindConstraintViolation(&'static str),
    DimensionCapExceeded { dim: usize, cap: usize },
    NoFormForW,
    ParityMismatch,
    InvalidAutomorphism(&'static str),
    NotMonomial,
    RelationViolation,
    TorsionIncompatible,
    GroupMismatch,
    NonfiniteGroup,
    NotStandard,
    NonCommuting,
    NotSemisimple,
    NotInAutGroup,
    NotInNormalizer,
    NotSymplectic,
    DegenerateForm,
    FormMultiplierMismatch,
    WrongShape,
    ResidualBeta,
    ExcludedConfiguration(&'static str),
    InvalidInput(String),
}

impl Error {
    /// Stable identifier used in machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::CharacteristicTwo => "CharacteristicTwo",
            Error::FieldTooLarge { .. } => "FieldTooLarge",
            Error::NotIrreducible => "NotIrreducible",
            Error::OrderUnavailable { .. } => "OrderUnavailable",
            Error::ContextMismatch => "ContextMismatch",
            Error::ShapeMismatch => "ShapeMismatch",
            Error::InvalidShape(_) => "InvalidShape",
            Error::IndexOutOfRange => "IndexOutOfRange",
            Error::AxisOutOfRange { .. } => "AxisOutOfRange",
            Error::NonzeroConstantTerm => "NonzeroConstantTerm",
            Error::NotAUnit => "NotAUnit",
            Error::KindConstraintViolation(_) => "KindConstraintViolation",
            Error::DimensionCapExceeded { .. } => "DimensionCapExceeded",
            Error::NoFormForW => "NoFormForW",
            Error::ParityMismatch => "ParityMismatch",
            Error::InvalidAutomorphism(_) => "InvalidAutomorphism",
            Error::NotMonomial => "NotMonomial",
            Error::RelationViolation => "RelationViolation",
            Error::TorsionIncompatible => "TorsionIncompatible",
            Error::GroupMismatch => "GroupMismatch",
            Error::NonfiniteGroup => "NonfiniteGroup",
            Error::NotStandard => "NotStandard",
            Error::NonCommuting => "NonCommuting",
            Error::NotSemisimple => "NotSemisimple",
            Error::NotInAutGroup => "NotInAutGroup",
            Error::NotInNormalizer => "NotInNormalizer",
            Error::NotSymplectic => "NotSymplectic",
            Error::DegenerateForm => "DegenerateForm",
            Error::FormMultiplierMismatch => "FormMultiplierMismatch",
            Error::WrongShape => "WrongShape",
            Error::ResidualBeta => "ResidualBeta",
            Error::ExcludedConfiguration(_) => "ExcludedConfiguration",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::CharacteristicTwo => f.write_str("characteristic must be an odd prime"),
            Error::FieldTooLarge { p, k } => {
                write!(f, "field of order {p}^{k} exceeds the supported table size")
            }
            Error::NotIrreducible => f.write_str("modulus polynomial is not irreducible"),
            Error::OrderUnavailable { order, field_order } => {
                write!(f, "no element of order {order} in a field of order {field_order}; enlarge the field")
            }
            Error::ContextMismatch => f.write_str("operands live over different fields"),
            Error::ShapeMismatch => f.write_str("operands have different shapes"),
            Error::InvalidShape(why) => write!(f, "invalid shape: {why}"),
            Error::IndexOutOfRange => f.write_str("multi-index out of range"),
            Error::AxisOutOfRange { axis, m } => write!(f, "axis {axis} out of range 1..={m}"),
            Error::NonzeroConstantTerm => f.write_str("divided powers need an element with zero constant term"),
            Error::NotAUnit => f.write_str("element is not invertible"),
            Error::KindConstraintViolation(why) => write!(f, "kind constraint violated: {why}"),
            Error::DimensionCapExceeded { dim, cap } => {
                write!(f, "dimension {dim} exceeds the configured cap {cap}")
            }
            Error::NoFormForW => f.write_str("the Witt algebra has no defining form"),
            Error::ParityMismatch => f.write_str("number of variables has the wrong parity"),
            Error::InvalidAutomorphism(why) => write!(f, "not a continuous automorphism: {why}"),
            Error::NotMonomial => f.write_str("automorphism is not monomial"),
            Error::RelationViolation => f.write_str("homomorphism does not factor through the quotient lattice"),
            Error::TorsionIncompatible => f.write_str("homomorphism is not well defined on the torsion part"),
            Error::GroupMismatch => f.write_str("gradings are by different groups"),
            Error::NonfiniteGroup => f.write_str("group has a free part"),
            Error::NotStandard => f.write_str("grading does not carry a standard homomorphism"),
            Error::NonCommuting => f.write_str("generators do not commute"),
            Error::NotSemisimple => f.write_str("generator is not semisimple of the declared order"),
            Error::NotInAutGroup => f.write_str("automorphism does not preserve the algebra"),
            Error::NotInNormalizer => f.write_str("generator does not normalize the standard torus"),
            Error::NotSymplectic => f.write_str("transformation is not symplectic"),
            Error::DegenerateForm => f.write_str("symplectic pairing degenerated"),
            Error::FormMultiplierMismatch => f.write_str("form multiplier does not match"),
            Error::WrongShape => f.write_str("generator does not have the contact normalizer shape"),
            Error::ResidualBeta => f.write_str("conjugated contact generator kept quadratic terms"),
            Error::ExcludedConfiguration(why) => write!(f, "excluded configuration: {why}"),
            Error::InvalidInput(why) => write!(f, "invalid input: {why}"),
        }
    }
}

impl core::error::Error for Error {}
