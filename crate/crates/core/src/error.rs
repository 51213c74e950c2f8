use alloc::string::String;
use alloc::vec::Vec;

use crate::polycore::form::Signature;
use crate::polycore::poly::Poly;
use crate::polycore::Rational;

/// Which of the two divisibility conditions on a 2-jet failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivisibilityCondition {
    /// `<A,B>` is not a multiple of `<A,A>`.
    LinearQuadratic,
    /// `<B,B>` is not a multiple of `<A,A>`.
    QuadraticQuadratic,
}

impl core::fmt::Display for DivisibilityCondition {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            DivisibilityCondition::LinearQuadratic => f.write_str("<A,B>"),
            DivisibilityCondition::QuadraticQuadratic => f.write_str("<B,B>"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("division by the zero polynomial")]
    DivisionByZero,

    #[error("expected {expected}, got {got}")]
    WrongDegree { expected: &'static str, got: String },

    #[error("rank of the linear part is {rank}, at least 2 is required")]
    RankTooLow { rank: usize },

    #[error("{condition} is not divisible by <A,A> (remainder {remainder})")]
    NotDivisible {
        condition: DivisibilityCondition,
        remainder: Poly,
    },

    #[error("<F,F> is not divisible by the denominator (remainder {remainder})")]
    DenominatorDoesNotDivide { remainder: Poly },

    #[error("the jet is not degenerate")]
    NotDegenerate,

    #[error("the jet is degenerate but no rational common kernel vector exists")]
    IrrationalKernelWitness,

    #[error("the denominator vanishes identically on the line")]
    DenominatorVanishesIdentically,

    #[error("circle fitting needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("the homogenized norm quotient is not a quadratic form")]
    Q2NotQuadratic,

    #[error("the metric form has signature {signature}, the jet is degenerate")]
    Degenerate {
        signature: Signature,
        witness: Option<Vec<Rational>>,
    },

    #[error("point is within {0:e} of the stereographic pole")]
    PoleProximity(f64),

    #[error("no normed pairing of size [{r},{n},{n}]: r exceeds rho({n}) = {rho}")]
    SizeInfeasible { r: usize, n: usize, rho: usize },

    #[error("{what} = {value} is out of range ({range})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        range: &'static str,
    },

    #[error("<f,f> = <x,x><y,y> does not hold")]
    NotNormedPairing,

    #[error("map is not defined at this point (denominator vanishes)")]
    NotDefined,
}

pub type Result<T> = core::result::Result<T, Error>;
