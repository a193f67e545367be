use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("multiplication is not associative on basis triple ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("unit vector is not a two-sided unit (fails on basis element {0})")]
    NoUnit(usize),
    #[error("product b{0}*b{1} has a component on b{2} of the wrong parity")]
    ParityViolation(usize, usize, usize),
    #[error("trace form is degenerate: {0}")]
    DegenerateTrace(String),
    #[error("trace is not homogeneous: basis elements {0} and {1} have nonzero trace and different parity")]
    InhomogeneousTrace(usize, usize),
    #[error("not a group multiplication table: {0}")]
    BadCayleyTable(String),
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("wrong variant: {0}")]
    WrongVariant(String),
    #[error("not divisible: {0}")]
    NotDivisible(String),
    #[error("not a pin label: {0}")]
    NotPinLabel(String),
    #[error("regularity inconclusive: {0}")]
    RegularityInconclusive(String),
    #[error("pin label is not monic: {0}")]
    NotMonic(String),
    #[error("reduction did not terminate: {0}")]
    NonTermination(String),
    #[error("incompatible objects: {0}")]
    IncompatibleObjects(String),
    #[error("ill-typed diagram word: {0}")]
    IllTypedWord(String),
    #[error("level must be one: {0}")]
    LevelNotOne(String),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("invalid input: {0}")]
    Input(String),
}

impl Error {
    /// Module-qualified code, e.g. `frobenius.NotAssociative`.
    pub fn code(&self) -> &'static str {
        use Error::*;
        match self {
            NotAssociative(..) => "frobenius.NotAssociative",
            NoUnit(..) => "frobenius.NoUnit",
            ParityViolation(..) => "frobenius.ParityViolation",
            DegenerateTrace(..) => "frobenius.DegenerateTrace",
            InhomogeneousTrace(..) => "frobenius.InhomogeneousTrace",
            BadCayleyTable(..) => "frobenius.BadCayleyTable",
            NoSolution(..) => "frobenius.NoSolution",
            InternalInconsistency(..) => "internal.InternalInconsistency",
            IndexOutOfRange(..) => "polyalg.IndexOutOfRange",
            WrongVariant(..) => "polyalg.WrongVariant",
            NotDivisible(..) => "polyalg.NotDivisible",
            NotPinLabel(..) => "polyalg.NotPinLabel",
            RegularityInconclusive(..) => "polyalg.RegularityInconclusive",
            NotMonic(..) => "wreath.NotMonic",
            NonTermination(..) => "wreath.NonTermination",
            IncompatibleObjects(..) => "category.IncompatibleObjects",
            IllTypedWord(..) => "category.IllTypedWord",
            LevelNotOne(..) => "category.LevelNotOne",
            Syntax { .. } => "cli.SyntaxError",
            UnknownLabel(..) => "cli.UnknownLabel",
            Input(..) => "cli.InputError",
        }
    }

    /// Errors that signal a failed mathematical check rather than bad input.
    pub fn is_verification_failure(&self) -> bool {
        use Error::*;
        matches!(
            self,
            NotAssociative(..)
                | NoUnit(..)
                | ParityViolation(..)
                | DegenerateTrace(..)
                | InhomogeneousTrace(..)
                | BadCayleyTable(..)
                | InternalInconsistency(..)
                | NotDivisible(..)
                | NonTermination(..)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
