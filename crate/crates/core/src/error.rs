use core::fmt;

/// Everything that can go wrong inside the solver core.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two objects that must act on the same number of positions do not.
    LengthMismatch { expected: usize, found: usize },
    /// An image array is not a bijection on `0..n`.
    InvalidPermutation,
    EmptyGenerators,
    /// Group closure grew past the configured element cap.
    ClosureCapExceeded { cap: usize },
    /// The permutation is not one of the listed generators.
    NotAGenerator,
    /// The permutation is not an element of the group.
    NotAMember,
    /// No element of order `p` exists because `p` does not divide `|G|`.
    NoCauchyElement { p: u64, order: u64 },
    /// The element does not have the required order.
    WrongOrder { expected: u64, found: u64 },
    /// p-adic valuation of zero was requested.
    ZeroValuation,
    NotPrime(u64),
    /// `value` is not a power of the prime `p`.
    NotPrimePower { value: u64, p: u64 },
    /// A quotient step of the chain construction found no fixed vector.
    NoFixedVector { chosen: usize },
    /// A residue lies outside `[0, m)` or the modulus is zero.
    InvalidResidue { value: u64, modulus: u64 },
    ModulusMismatch { expected: u64, found: u64 },
    /// `m^n` exceeds the configured state cap (or does not fit in 64 bits).
    StateCapExceeded { cap: u64 },
    /// Predecessor history for witness extraction would exceed its budget.
    WitnessBudgetExceeded { bits: u128, budget: u128 },
    Overflow,
    /// The operation requires a solvable game.
    Unsolvable,
    /// The operation requires an unsolvable game.
    Solvable,
    /// The enumeration strategy needs a trivial group.
    NontrivialGroup { order: u64 },
    /// The operation requires the full rotation group as generator set.
    NotRotations,
    NotADivisor { divisor: u64, of: u64 },
    /// The configuration is already semi-homogeneous.
    AlreadySemiHomogeneous,
    /// Every generator restores semi-homogeneity; this contradicts the impossibility lemma.
    InvariantBroken,
    IndexOutOfRange { index: usize, len: usize },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::InvalidPermutation => f.write_str("not a permutation"),
            Error::EmptyGenerators => f.write_str("generator list is empty"),
            Error::ClosureCapExceeded { cap } => {
                write!(f, "group closure exceeds the cap of {cap} elements")
            }
            Error::NotAGenerator => f.write_str("permutation is not in the generator set"),
            Error::NotAMember => f.write_str("permutation is not a group element"),
            Error::NoCauchyElement { p, order } => {
                write!(f, "{p} does not divide the group order {order}")
            }
            Error::WrongOrder { expected, found } => {
                write!(f, "element has order {found}, expected {expected}")
            }
            Error::ZeroValuation => f.write_str("valuation of zero is undefined"),
            Error::NotPrime(p) => write!(f, "{p} is not prime"),
            Error::NotPrimePower { value, p } => write!(f, "{value} is not a power of {p}"),
            Error::NoFixedVector { chosen } => {
                write!(f, "no fixed vector in quotient after {chosen} basis vectors")
            }
            Error::InvalidResidue { value, modulus } => {
                write!(f, "residue {value} is invalid for modulus {modulus}")
            }
            Error::ModulusMismatch { expected, found } => {
                write!(f, "modulus mismatch: expected {expected}, found {found}")
            }
            Error::StateCapExceeded { cap } => {
                write!(f, "configuration space exceeds the state cap of {cap}")
            }
            Error::WitnessBudgetExceeded { bits, budget } => {
                write!(f, "witness history needs {bits} bits, budget is {budget}")
            }
            Error::Overflow => f.write_str("arithmetic overflow"),
            Error::Unsolvable => f.write_str("game is not solvable"),
            Error::Solvable => f.write_str("game is solvable, no certificate exists"),
            Error::NontrivialGroup { order } => {
                write!(f, "group has order {order}, expected the trivial group")
            }
            Error::NotRotations => f.write_str("generator set is not the rotation group"),
            Error::NotADivisor { divisor, of } => write!(f, "{divisor} does not divide {of}"),
            Error::AlreadySemiHomogeneous => f.write_str("configuration is semi-homogeneous"),
            Error::InvariantBroken => {
                f.write_str("no generator preserves non-semi-homogeneity (internal invariant broken)")
            }
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range for length {len}")
            }
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
