//! Construction and analysis of strictly convex billiard tables whose
//! 2-periodic orbit directions form a prescribed closed set.
//!
//! The pipeline goes: a direction set on the projective line is lifted to the
//! circle, an odd-symmetric function `g` vanishing exactly on the lift is
//! synthesized ([`vanishing`]), the curvature perturbation `f` and translation
//! `c` are recovered from `g` ([`vanishing::recover_perturbation`]), a table is
//! built around the unit circle by the string construction ([`table`]), and
//! the invariant curves of rotation number 1/2, their singular points and the
//! hyperbolicity of the underlying 2-periodic orbits are computed and
//! cross-checked by independent routes ([`curves`], [`spectrum`],
//! [`billiard`]).
//!
//! The crate is `no_std`-compatible (with `alloc`); all float math goes
//! through `num-traits`/`libm` when the `std` feature is disabled.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod billiard;
pub mod bump;
pub mod curves;
pub mod direction_set;
pub mod quad;
pub mod spectrum;
pub mod table;
pub mod trig;
pub mod twist;
pub mod vanishing;

pub use billiard::{Diameter, DiameterSet, PhasePoint};
pub use curves::{CurveBranch, CurveSample, SingularClass, SingularPoint};
pub use direction_set::{Accumulation, AccumulationSide, CircleSet, DirectionSetSpec};
pub use spectrum::{DiameterSpectrum, StabilityClass};

pub use table::{ConvexBody, StringTable};
pub use trig::{Point2, TrigPoly};

pub use twist::{PeriodicPotential, TwistSystem};
pub use vanishing::{GVariant, PerturbationData, SymmetricFunction};

use core::fmt;

/// Errors for table construction and analysis.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Curvature-radius coefficient at k = -1 is nonzero, the curve does not close.
    NonClosedCurve { alpha_minus_one_abs: f64 },
    /// Fewer than the 2N+1 samples needed to fit degree N.
    InsufficientSamples { got: usize, need: usize },
    /// Trigonometric coefficients violate conjugate symmetry beyond tolerance.
    AsymmetricCoefficients { index: isize, defect: f64 },
    /// Direction-set components overlap or collide.
    OverlappingComponents,
    /// Bump half-widths must be positive.
    NonpositiveWidth,
    /// The lifted direction set covers the whole circle (or is empty), leaving
    /// nothing to build a sign-changing function on.
    EmptyComplement,
    /// No odd-symmetric function with transversal zeros exactly on this set
    /// exists: a purely isolated antipodal set with an even number of
    /// direction pairs forces a sign contradiction.
    UnrealizableTransversalSet { direction_pairs: usize },
    /// Rebuilding g from the recovered (f, c) missed the input beyond tolerance.
    ReconstructionMismatch { defect: f64 },
    /// Curvature radius fails positivity on the scan grid.
    NonpositiveCurvatureRadius { min_value: f64, at: f64 },
    /// String too short: the constructed boundary fails convexity or positivity.
    StringTooShort { detail: &'static str },
    /// Boundary tangent degenerate at the requested parameter.
    DegenerateTangent { at: f64 },
    /// Incidence angle too close to tangential for the bounce solver.
    TangentialShot { theta: f64 },
    /// Bounce root-finder failed to bracket or converge.
    NoConvergence,
    /// Requested a diameter-only quantity away from a critical point of h.
    NotACriticalPoint { at: f64, hdot: f64 },
    /// Independent classification routes disagree.
    ClassificationConflict { detail: &'static str },
    /// Closed-form curvatures and measured geometry disagree.
    FormulaMismatch { defect: f64 },
    /// Twist potential nodes overlap or leave no room for profiles.
    SpecOverlap,
    /// Energy below the potential level: the curve branch does not exist there.
    NegativeRadicand { at: f64 },
    /// The requested point is not a critical point of the potential.
    NotCritical { at: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonClosedCurve { alpha_minus_one_abs } => write!(
                f,
                "curve does not close: |alpha_-1| = {alpha_minus_one_abs:e} (must vanish)"
            ),
            Error::InsufficientSamples { got, need } => {
                write!(f, "need at least {need} equispaced samples, got {got}")
            }
            Error::AsymmetricCoefficients { index, defect } => write!(
                f,
                "coefficients break conjugate symmetry at k = {index} (defect {defect:e})"
            ),
            Error::OverlappingComponents => write!(f, "direction-set components overlap"),
            Error::NonpositiveWidth => write!(f, "bump half-widths must be positive"),
            Error::EmptyComplement => {
                write!(f, "lifted set leaves no complement to build on (empty or full circle)")
            }
            Error::UnrealizableTransversalSet { direction_pairs } => write!(
                f,
                "no odd-symmetric function has transversal zeros exactly on {direction_pairs} \
                 isolated direction pairs (even count): sign alternation contradicts g(t)=-g(t+pi)"
            ),
            Error::ReconstructionMismatch { defect } => {
                write!(f, "g rebuilt from (f, c) misses input by {defect:e}")
            }
            Error::NonpositiveCurvatureRadius { min_value, at } => {
                write!(f, "curvature radius {min_value} <= 0 at t = {at}")
            }
            Error::StringTooShort { detail } => write!(f, "string too short: {detail}"),
            Error::DegenerateTangent { at } => write!(f, "degenerate tangent at t = {at}"),
            Error::TangentialShot { theta } => {
                write!(f, "incidence angle {theta} too close to tangential")
            }
            Error::NoConvergence => write!(f, "bounce root-finder failed to converge"),
            Error::NotACriticalPoint { at, hdot } => {
                write!(f, "t = {at} is not a critical point of h (hdot = {hdot:e})")
            }
            Error::ClassificationConflict { detail } => {
                write!(f, "classification routes disagree: {detail}")
            }
            Error::FormulaMismatch { defect } => {
                write!(f, "closed form and measured geometry disagree by {defect:e}")
            }
            Error::SpecOverlap => write!(f, "potential nodes overlap"),
            Error::NegativeRadicand { at } => {
                write!(f, "energy below potential level at X = {at}")
            }
            Error::NotCritical { at } => write!(f, "X = {at} is not a critical point"),
        }
    }
}

impl core::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
