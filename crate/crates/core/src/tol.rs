//! Numerical tolerances shared across the crate.
//!
//! Every threshold that decides a boolean verdict lives here so that the
//! library, the CLI and the test suites agree on the same numbers.

/// Relative slack on `Δt ≥ |Δx|` for causal segments and the causal order:
/// a pair is accepted when `Δt ≥ |Δx| − CAUSAL_SLACK·max(1, |Δt|)`.
pub const CAUSAL_SLACK: f64 = 1e-12;

/// Absolute tolerance under which two events are the same event.
pub const POINT_EQ: f64 = 1e-12;

/// Normalisation tolerance for state vectors, Bloch vectors and unitarity.
pub const NORM: f64 = 1e-12;

/// Dirac data with `|d1 − d2|` at or below this gap are degenerate.
pub const DEGENERATE_GAP: f64 = 1e-15;

/// Two latitudes closer than this are the same parallel.
pub const LATITUDE: f64 = 1e-12;

/// States with `1 − |z|` at or below this value sit on a pole.
pub const POLE: f64 = 1e-12;

/// Absolute slack when comparing available and required proper time.
pub const BOUND: f64 = 1e-12;

/// Internal states whose canonical representatives differ by at most this
/// amount (entrywise) are equal.
pub const STATE_EQ: f64 = 1e-12;

/// Default relative tolerance of the positive-semidefiniteness test.
pub const PSD_REL: f64 = 1e-9;

/// Slack on the sufficient inequality for the `a = b` family of causal elements.
pub const LEMMA_SLACK: f64 = 1e-12;

/// Slack when checking that a causal element does not separate two states.
pub const PAIRING: f64 = 1e-10;

/// Relative agreement required between closed forms and their numeric routes
/// in witness certificates.
pub const CLOSED_FORM_REL: f64 = 1e-8;

/// Absolute accuracy of the supremum over the auxiliary angle for mixed states.
pub const SUP_ANGLE: f64 = 1e-10;

/// Relative entrywise tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN: f64 = 1e-12;
