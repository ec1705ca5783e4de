use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad category of an error, mapped onto process exit codes by the binary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Parse,
    Precondition,
    Resource,
    Disagreement,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Parse => 2,
            ErrorKind::Precondition => 3,
            ErrorKind::Resource => 4,
            ErrorKind::Disagreement => 5,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("not a group: {reason} (witness {witness:?})")]
    NotAGroup { reason: String, witness: Vec<usize> },
    #[error("more than {bound} distinct elements generated")]
    OrderBoundExceeded { bound: usize },
    #[error("subgroup is not abelian: elements {0} and {1} do not commute")]
    NotAbelian(usize, usize),
    #[error("subgroup is not central: element {0} is not in the center")]
    NonCentralSubgroup(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic orders {0} and {1} have lcm above the configured bound")]
    IncompatibleOrders(u32, u32),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cocycle is not normalized at ({0}, {1})")]
    NotNormalized(usize, usize),
    #[error("not a cocycle: identity fails at ({0}, {1}, {2})")]
    NotACocycle(usize, usize, usize),
    #[error("map is not a homomorphism at ({0}, {1})")]
    NotAHomomorphism(usize, usize),
    #[error("section defect at ({0}, {1}) lies outside the kernel")]
    DefectOutsideKernel(usize, usize),
    #[error("bilinear form is not well defined: {0}")]
    IllDefinedForm(String),
    #[error("elements {0} and {1} do not commute")]
    NonCommutingPair(usize, usize),
    #[error("subgroup needs {0} invariant factors, at most 2 allowed")]
    NotBicyclic(usize),
    #[error("group order {order} exceeds cap {cap}")]
    Infeasible { order: usize, cap: usize },
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u64, u64),
    #[error("invalid group action: {0}")]
    ActionInvalid(String),
    #[error("generator {0} is not invertible")]
    NonInvertibleGenerator(usize),
    #[error("zero vector has no line stabilizer")]
    ZeroVector,
    #[error("class {class}: twisted dimension {value} is not a nonnegative integer")]
    NonIntegralDimension { class: usize, value: String },
    #[error("malformed input at '{pointer}': {message}")]
    Malformed { pointer: String, message: String },
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("internal disagreement: {0}")]
    Disagreement(String),
}

impl Error {
    pub fn malformed(pointer: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Malformed {
            pointer: pointer.into(),
            message: message.into(),
        }
    }

    /// Stable machine-readable code, echoed in structured error output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotAGroup { .. } => "NotAGroup",
            Error::OrderBoundExceeded { .. } => "OrderBoundExceeded",
            Error::NotAbelian(..) => "NotAbelian",
            Error::NonCentralSubgroup(_) => "NonCentralSubgroup",
            Error::DivisionByZero => "DivisionByZero",
            Error::IncompatibleOrders(..) => "IncompatibleOrders",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NotNormalized(..) => "NotNormalized",
            Error::NotACocycle(..) => "NotACocycle",
            Error::NotAHomomorphism(..) => "NotAHomomorphism",
            Error::DefectOutsideKernel(..) => "DefectOutsideKernel",
            Error::IllDefinedForm(_) => "IllDefinedForm",
            Error::NonCommutingPair(..) => "NonCommutingPair",
            Error::NotBicyclic(_) => "NotBicyclic",
            Error::Infeasible { .. } => "Infeasible",
            Error::ModulusMismatch(..) => "ModulusMismatch",
            Error::ActionInvalid(_) => "ActionInvalid",
            Error::NonInvertibleGenerator(_) => "NonInvertibleGenerator",
            Error::ZeroVector => "ZeroVector",
            Error::NonIntegralDimension { .. } => "NonIntegralDimension",
            Error::Malformed { .. } => "Malformed",
            Error::Io(_) => "Io",
            Error::Disagreement(_) => "Disagreement",
        }
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Malformed { .. } | Error::Io(_) => ErrorKind::Parse,
            Error::OrderBoundExceeded { .. }
            | Error::Infeasible { .. }
            | Error::IncompatibleOrders(..) => ErrorKind::Resource,
            Error::Disagreement(_) => ErrorKind::Disagreement,
            _ => ErrorKind::Precondition,
        }
    }
}
