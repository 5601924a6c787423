//! Freeness certificates and Euler-characteristic bookkeeping for
//! finitely generated groups.
//!
//! The crate is organised around three independent engines and a thin
//! job layer that drives them:
//!
//! * [`exact`] — Gaussian-rational scalars, polynomials over them, and
//!   2×2 matrices, all with exact arithmetic. No floats anywhere.
//! * [`magnus`] — certifies that matrix generators together with the
//!   unipotent `[[1, X], [0, 1]]` generate a free product inside
//!   `GL₂(ℚ(i)[X])`, by checking degree profiles of alternating words.
//! * [`hyperbolic`] — numeric upper-half-space model: Möbius actions,
//!   distances, and the `log(2k−1)` displacement obstruction with a
//!   basepoint minimiser.
//! * [`freeness`] — Schottky/ping-pong certificates from isometric
//!   disks, plus the Jørgensen inequality filter.
//! * [`groupcalc`] — free-word calculus: Stallings folding, the
//!   independence number `iof`, Nielsen-move searches for `miof`
//!   bounds, and reduced Euler characteristic arithmetic.
//! * [`jobs`] — JSON job specs and deterministic report envelopes,
//!   shared by the CLI binary and the C ABI crate.

pub mod exact;
pub mod freeness;
pub mod groupcalc;
pub mod hyperbolic;
pub mod jobs;
pub mod magnus;

/// Default tolerance used by numeric verdicts unless a job overrides it.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Default RNG seed: every randomised search is reproducible by default.
pub const DEFAULT_SEED: u64 = 1729;
