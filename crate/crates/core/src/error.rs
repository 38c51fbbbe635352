use std::fmt;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by constructions in this crate.
///
/// Axiom failures discovered by the validators are data (see
/// [`crate::ValidationReport`]); an `Error::Validation` is raised only when
/// an operation requires a validated input or promises a validated output
/// and the check does not pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    CycleDetected {
        name: String,
    },
    UnknownName(String),
    DuplicateName(String),
    NotAPartialOrder {
        law: String,
        witness: String,
    },
    NotALattice {
        which: &'static str,
        witness: String,
    },
    NotResiduated {
        witness: String,
    },
    NotAnUpSet {
        which: &'static str,
    },
    UnknownBuiltin(String),
    CarrierTooLarge {
        size: usize,
        max: usize,
    },
    ConeNotBrouwerian {
        witness: String,
    },
    NotCovering,
    NotOdd,
    NotASubuniverse {
        op: String,
        witness: String,
    },
    ProfileMismatch {
        expected: String,
        found: String,
    },
    Validation {
        subject: String,
        law: String,
        witness: String,
    },
    MorphismInvalid {
        law: String,
        witness: String,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::CycleDetected { name } => {
                write!(f, "cover relation has a directed cycle through '{name}'")
            }
            Error::UnknownName(n) => write!(f, "unknown element name '{n}'"),
            Error::DuplicateName(n) => write!(f, "duplicate element name '{n}'"),
            Error::NotAPartialOrder { law, witness } => {
                write!(
                    f,
                    "relation is not a partial order: {law} fails at {witness}"
                )
            }
            Error::NotALattice { which, witness } => {
                write!(f, "poset is not a lattice: no {which} for {witness}")
            }
            Error::NotResiduated { witness } => {
                write!(
                    f,
                    "multiplication is not residuated: no maximum for {witness}"
                )
            }
            Error::NotAnUpSet { which } => write!(f, "{which} is not an up-set"),
            Error::UnknownBuiltin(n) => write!(f, "unknown builtin '{n}'"),
            Error::CarrierTooLarge { size, max } => {
                write!(
                    f,
                    "carrier of size {size} exceeds the supported maximum {max}"
                )
            }
            Error::ConeNotBrouwerian { witness } => {
                write!(
                    f,
                    "multiplication differs from meet on the negative cone at {witness}"
                )
            }
            Error::NotCovering => write!(f, "the two subsets do not cover the carrier"),
            Error::NotOdd => write!(
                f,
                "algebra is not odd (the involution does not fix the unit)"
            ),
            Error::NotASubuniverse { op, witness } => {
                write!(f, "subset is not closed under {op} at {witness}")
            }
            Error::ProfileMismatch { expected, found } => {
                write!(f, "expected profile {expected}, found {found}")
            }
            Error::Validation {
                subject,
                law,
                witness,
            } => {
                write!(f, "'{subject}' violates {law} (witness {witness})")
            }
            Error::MorphismInvalid { law, witness } => {
                write!(f, "map does not preserve {law} (witness {witness})")
            }
        }
    }
}

impl std::error::Error for Error {}
