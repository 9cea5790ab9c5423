//! Numerical tolerances shared by every module.
//!
//! Functions that take no explicit [`Tolerances`] use [`Tolerances::DEFAULT`].
//! Property tests use the `_with` variants to tighten or loosen the whole set
//! at once.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max `|M[i][j] - conj(M[j][i])|` (scaled by `max(1, max|M|)`) accepted as Hermitian.
    pub hermitian: f64,
    /// Jacobi stops once the off-diagonal Frobenius norm drops below this fraction of `||H||_F`.
    pub jacobi_off_diagonal: f64,
    pub jacobi_max_sweeps: usize,
    /// Eigenvalues in `[-psd_clamp, 0)` are clamped to zero silently.
    pub psd_clamp: f64,
    /// Eigenvalues below `-psd_reject` mark the input as not PSD.
    pub psd_reject: f64,
    /// Nonnegative eigenvalues at or below this are treated as exact zeros in
    /// square-root based measures. Keeps round-off zeros from leaking through a square root.
    pub rank_cutoff: f64,
    /// Allowed deviation of a pure state's squared norm from one.
    pub state_norm: f64,
    /// Allowed deviation of W-class coefficients' squared norm from one.
    pub coefficient_norm: f64,
    /// Allowed deviation of a density matrix's trace from one.
    pub trace: f64,
    /// Relative slack applied when deciding whether an inequality holds.
    pub report_slack: f64,
    /// Values at or below this count as zero for the nonvanishing hypotheses.
    pub zero_value: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermitian: 1e-10,
        jacobi_off_diagonal: 1e-13,
        jacobi_max_sweeps: 100,
        psd_clamp: 1e-10,
        psd_reject: 1e-8,
        rank_cutoff: 1e-14,
        state_norm: 1e-10,
        coefficient_norm: 1e-12,
        trace: 1e-10,
        report_slack: 1e-12,
        zero_value: 1e-12,
    };
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
