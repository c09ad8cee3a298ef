use num_complex::Complex64;

use crate::rootfind::ResonanceRoot;

/// Errors shared across the crate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("spherical Hankel function has a pole at z = 0")]
    HankelPole,

    #[error("spherical Bessel derivative of order {0} is not evaluated at z = 0")]
    DerivativeAtOrigin(u32),

    #[error("{name} must be positive (got {value})")]
    NonPositive { name: &'static str, value: f64 },

    #[error("radii must be finite, positive and strictly decreasing (got {0:?})")]
    BadRadii(Vec<f64>),

    #[error("geometric scale factor must lie in (0, 1) (got {0})")]
    BadScale(f64),

    #[error("layer index {index} out of range 0..={max}")]
    LayerIndex { index: usize, max: usize },

    #[error("dispersion matrix is undefined at omega = 0")]
    OmegaPole,

    #[error("invalid search configuration: {0}")]
    BadSearchConfig(String),

    #[error("muller seeds must be pairwise distinct")]
    DegenerateSeeds,

    #[error("muller did not converge after {iterations} iterations (last iterate {last})")]
    NoConvergence { iterations: usize, last: Complex64 },

    #[error("muller iterate {omega} left the search window")]
    Diverged { omega: Complex64 },

    #[error("found {} of {expected} expected resonances", found.len())]
    RootShortfall {
        expected: usize,
        found: Vec<ResonanceRoot>,
    },

    #[error("kernel residual {residual:.3e} exceeds {limit:.1e}; omega is not a characteristic value")]
    KernelResidual { residual: f64, limit: f64 },

    #[error("eigenmode carries no mass over the resonator layers")]
    DegenerateMode,

    #[error("no closed-form frequency is implemented for {0} layers")]
    NoClosedForm(usize),

    #[error(
        "cap-to-volume precondition violated: outer pair ratio {outer} exceeds inner pair ratio {inner}"
    )]
    CvrPrecondition { outer: f64, inner: f64 },

    #[error("{0}")]
    InvalidInput(String),
}
