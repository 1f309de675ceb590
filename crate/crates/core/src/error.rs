use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("representation mismatch: {0}")]
    RepresentationMismatch(String),

    #[error("unsupported input for {operation}: {reason}")]
    Unsupported { operation: &'static str, reason: String },

    #[error("Gram-Schmidt degeneracy at input index {index} (residual norm {residual:.3e} below tolerance {tol:.1e})")]
    Degenerate { index: usize, residual: f64, tol: f64 },

    #[error("deficiency frame construction failed for {model}: residual {residual:.3e}")]
    FrameConstruction { model: String, residual: f64 },

    #[error("ODE integration failed: {0}")]
    Ode(String),

    #[error("near-singular Wronskian {wronskian:.3e} in {context}")]
    NearSingular { context: String, wronskian: f64 },

    #[error("domain violation: {0}")]
    Domain(String),

    #[error("unitary parameter invalid: deviation {deviation:.3e} from unitarity")]
    NotUnitary { deviation: f64 },

    #[error("atom kernel cross-check failed for {pair}: closed form {closed:.6e}, quadrature {quadrature:.6e}")]
    KernelMismatch { pair: String, closed: f64, quadrature: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("missing report for diagnostic {0}")]
    MissingReport(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}
