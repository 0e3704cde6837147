//! Numerical tolerances shared across the crate.

/// All tolerance constants in one record.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Allowed deviation of a state's squared norm from one.
    pub norm: f64,
    /// Largest imaginary part accepted on an expectation value.
    pub imaginary: f64,
    /// Closed-form vs. statevector agreement.
    pub oracle: f64,
    /// Relative singular-value cut-off used to detect rank deficiency.
    pub rank: f64,
    /// Slack granted when checking that an activation lies in [-1, 1].
    pub activation_range: f64,
}

pub const TOLERANCES: Tolerances = Tolerances {
    norm: 1e-12,
    imaginary: 1e-12,
    oracle: 1e-10,
    rank: 1e-12,
    activation_range: 1e-15,
};

/// Largest register the dense simulator accepts (2^22 complex doubles, 64 MiB).
pub const MAX_QUBITS: usize = 22;
