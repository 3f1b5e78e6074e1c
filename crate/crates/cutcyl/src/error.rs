use crate::cutlocus::CutLocusDescription;
use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value of {what} at t = {t}")]
    NonFinite { what: &'static str, t: f64 },

    #[error("nu = {nu} is at or above m(0) = {m0}; the half-period domain is open at the equator")]
    NuAtOrAboveEquator { nu: f64, m0: f64 },

    #[error("nu = {nu} is at or below inf m ~= {inf_m}; no parallel with m(t) = nu exists")]
    NuAtOrBelowInfM { nu: f64, inf_m: f64 },

    #[error("m' changes sign {transitions} times on (0, {t_max}]; profile is outside the supported class")]
    OutsideProfileClass { transitions: usize, t_max: f64 },

    #[error("profile invariant violated: {0}")]
    ProfileInvariant(String),

    #[error("turning height t = {t} is degenerate: m'(t) = {m_prime}")]
    DegenerateTurningPoint { t: f64, m_prime: f64 },

    #[error("|nu| = {nu} exceeds m({t}) = {m}; no unit-speed geodesic through that point has this Clairaut constant")]
    ClairautBound { nu: f64, t: f64, m: f64 },

    #[error("nu = {nu} exceeds m(u) = {m_u}; outside the re-intersection range")]
    OutsideCutRange { nu: f64, m_u: f64 },

    #[error("accuracy failure: {0}")]
    Accuracy(String),

    #[error("geodesic did not reach t = {target} within s_max = {s_max}")]
    NonArrival { target: f64, s_max: f64 },

    #[error("requested horizon {want} exceeds trace length {have}")]
    HorizonTruncated { have: f64, want: f64 },

    #[error("profile satisfies neither the positive-equator hypotheses nor the nonpositive-curvature case")]
    UnsupportedProfile,

    #[error("phi(m(t_q)) = {phi} +/- {err} is indistinguishable from pi; refusing to pick a case")]
    AmbiguousClassification {
        phi: f64,
        err: f64,
        candidates: Box<(CutLocusDescription, CutLocusDescription)>,
    },

    #[error("no sign change on [{lo}, {hi}]; cannot bracket a root")]
    NoBracket { lo: f64, hi: f64 },

    #[error("spatial epsilon {epsilon} is below the oracle resolution {resolution}")]
    Resolution { epsilon: f64, resolution: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
