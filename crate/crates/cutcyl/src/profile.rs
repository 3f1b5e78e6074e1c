//! Warping functions m(t) of a cylinder of revolution `dt^2 + m(t)^2 dtheta^2`,
//! their curvature, and the derived constants (t0, t1, inf m) with hypothesis
//! validation.
//!
//! Profiles carry closed-form first and second derivatives; finite-difference
//! cross-checks guard against transcription errors in the formulas.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::numfmt::{json_f64, json_opt_f64, json_str};
use crate::roots::bisect;

/// Scan window and resolution for the least-positive-root search in [`xi`].
const XI_SCAN_MAX: f64 = 50.0;
const XI_SCAN_N: usize = 4096;

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum ProfileKind {
    /// m(t) = exp(-a t^2)
    Gauss { a: f64 },
    /// m(t) = sech(a t)
    Sech { a: f64 },
    /// m(t) = 1 + t^2/2 - ln(1 + t^2); m' has its unique positive zero at t = 1
    Hourglass,
    /// m(t) = sqrt(a^2 + t^2)
    Catenoid { a: f64 },
    /// m(t) = r (flat cylinder; integrator tests only)
    Flat { r: f64 },
    /// Programmatic profile with caller-supplied closed-form derivatives.
    /// Not selectable from the CLI.
    Custom {
        m: ScalarFn,
        m_prime: ScalarFn,
        m_double_prime: ScalarFn,
    },
}

/// A warping function m(t) > 0 with closed-form derivatives.
#[derive(Clone)]
pub struct WarpingProfile {
    kind: ProfileKind,
    name: String,
    params: Vec<(String, f64)>,
}

impl fmt::Debug for WarpingProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WarpingProfile")
            .field("name", &self.name)
            .field("params", &self.params)
            .finish()
    }
}

fn sech(x: f64) -> f64 {
    1.0 / x.cosh()
}

impl WarpingProfile {
    pub fn gauss(a: f64) -> Self {
        WarpingProfile {
            kind: ProfileKind::Gauss { a },
            name: "gauss".into(),
            params: vec![("a".into(), a)],
        }
    }

    pub fn sech_profile(a: f64) -> Self {
        WarpingProfile {
            kind: ProfileKind::Sech { a },
            name: "sech".into(),
            params: vec![("a".into(), a)],
        }
    }

    pub fn hourglass() -> Self {
        WarpingProfile {
            kind: ProfileKind::Hourglass,
            name: "hourglass".into(),
            params: vec![],
        }
    }

    pub fn catenoid(a: f64) -> Self {
        WarpingProfile {
            kind: ProfileKind::Catenoid { a },
            name: "catenoid".into(),
            params: vec![("a".into(), a)],
        }
    }

    pub fn flat(r: f64) -> Self {
        WarpingProfile {
            kind: ProfileKind::Flat { r },
            name: "flat".into(),
            params: vec![("r".into(), r)],
        }
    }

    /// Programmatic profile; the caller is responsible for evenness and positivity
    /// (checked by [`WarpingProfile::validate`] / [`analyze`], not at construction).
    pub fn custom(
        name: &str,
        m: impl Fn(f64) -> f64 + Send + Sync + 'static,
        m_prime: impl Fn(f64) -> f64 + Send + Sync + 'static,
        m_double_prime: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        WarpingProfile {
            kind: ProfileKind::Custom {
                m: Arc::new(m),
                m_prime: Arc::new(m_prime),
                m_double_prime: Arc::new(m_double_prime),
            },
            name: name.into(),
            params: vec![],
        }
    }

    /// Names accepted by [`WarpingProfile::by_name`].
    pub fn gallery() -> &'static [&'static str] {
        &["gauss", "sech", "hourglass", "catenoid", "flat"]
    }

    /// Build a gallery profile from its name and `key=value` parameters.
    pub fn by_name(name: &str, params: &[(String, f64)]) -> Result<Self> {
        let get = |key: &str, default: f64| -> Result<f64> {
            let mut val = default;
            for (k, v) in params {
                if k == key {
                    val = *v;
                } else {
                    return Err(Error::Config(format!(
                        "profile '{name}' has no parameter '{k}'"
                    )));
                }
            }
            if !(val > 0.0) {
                return Err(Error::Config(format!(
                    "parameter '{key}' of '{name}' must be positive, got {val}"
                )));
            }
            Ok(val)
        };
        match name {
            "gauss" => Ok(Self::gauss(get("a", 1.0)?)),
            "sech" => Ok(Self::sech_profile(get("a", 1.0)?)),
            "hourglass" => {
                if params.is_empty() {
                    Ok(Self::hourglass())
                } else {
                    Err(Error::Config("profile 'hourglass' takes no parameters".into()))
                }
            }
            "catenoid" => Ok(Self::catenoid(get("a", 1.0)?)),
            "flat" => Ok(Self::flat(get("r", 1.0)?)),
            other => Err(Error::Config(format!(
                "unknown profile '{other}' (expected one of {:?})",
                Self::gallery()
            ))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> &[(String, f64)] {
        &self.params
    }

    pub fn m(&self, t: f64) -> f64 {
        match &self.kind {
            ProfileKind::Gauss { a } => (-a * t * t).exp(),
            ProfileKind::Sech { a } => sech(a * t),
            ProfileKind::Hourglass => 1.0 + 0.5 * t * t - (t * t).ln_1p(),
            ProfileKind::Catenoid { a } => (a * a + t * t).sqrt(),
            ProfileKind::Flat { r } => *r,
            ProfileKind::Custom { m, .. } => m(t),
        }
    }

    pub fn m_prime(&self, t: f64) -> f64 {
        match &self.kind {
            ProfileKind::Gauss { a } => -2.0 * a * t * (-a * t * t).exp(),
            ProfileKind::Sech { a } => -a * sech(a * t) * (a * t).tanh(),
            ProfileKind::Hourglass => t - 2.0 * t / (1.0 + t * t),
            ProfileKind::Catenoid { a } => t / (a * a + t * t).sqrt(),
            ProfileKind::Flat { .. } => 0.0,
            ProfileKind::Custom { m_prime, .. } => m_prime(t),
        }
    }

    pub fn m_double_prime(&self, t: f64) -> f64 {
        match &self.kind {
            ProfileKind::Gauss { a } => (4.0 * a * a * t * t - 2.0 * a) * (-a * t * t).exp(),
            ProfileKind::Sech { a } => {
                let s = sech(a * t);
                let th = (a * t).tanh();
                a * a * s * (th * th - s * s)
            }
            ProfileKind::Hourglass => {
                let q = 1.0 + t * t;
                1.0 - 2.0 * (1.0 - t * t) / (q * q)
            }
            ProfileKind::Catenoid { a } => {
                let q = a * a + t * t;
                a * a / (q * q.sqrt())
            }
            ProfileKind::Flat { .. } => 0.0,
            ProfileKind::Custom { m_double_prime, .. } => m_double_prime(t),
        }
    }

    /// Sampled evenness / positivity / derivative-consistency check.
    pub fn validate(&self, t_max: f64, n: usize) -> Result<()> {
        if !(t_max > 0.0) || n < 8 {
            return Err(Error::InvalidArgument(
                "validate requires t_max > 0 and n >= 8".into(),
            ));
        }
        if !(self.m(0.0) > 0.0) {
            return Err(Error::ProfileInvariant(format!(
                "m(0) = {} is not positive",
                self.m(0.0)
            )));
        }
        for i in 0..=n {
            let t = -t_max + 2.0 * t_max * (i as f64) / (n as f64);
            let m = self.m(t);
            if !m.is_finite() {
                return Err(Error::NonFinite { what: "m", t });
            }
            // m == 0.0 far out is tail underflow of a positive function (the
            // gauss profile at |t| > 27), not a sign violation
            if m < 0.0 {
                return Err(Error::ProfileInvariant(format!(
                    "m({t}) = {m} is not positive"
                )));
            }
            let mm = self.m(-t);
            if (m - mm).abs() > 1e-12 * (1.0 + m.abs()) {
                return Err(Error::ProfileInvariant(format!(
                    "m is not even at t = {t}: m(t) = {m}, m(-t) = {mm}"
                )));
            }
        }
        if self.m_prime(0.0).abs() > 1e-12 {
            return Err(Error::ProfileInvariant(format!(
                "m'(0) = {} is not zero",
                self.m_prime(0.0)
            )));
        }
        // Supplied derivatives must match central differences with second-order
        // convergence under h-halving.
        let t_check = t_max.min(2.0);
        for i in 0..=16 {
            let t = -t_check + 2.0 * t_check * (i as f64) / 16.0;
            let scale = 1.0 + self.m(t).abs();
            let mut prev_err_p = f64::INFINITY;
            let mut prev_err_pp = f64::INFINITY;
            for k in 0..3 {
                let h = 1e-3 / (1 << k) as f64;
                let fd_p = (self.m(t + h) - self.m(t - h)) / (2.0 * h);
                let fd_pp = (self.m(t + h) - 2.0 * self.m(t) + self.m(t - h)) / (h * h);
                let err_p = (fd_p - self.m_prime(t)).abs();
                let err_pp = (fd_pp - self.m_double_prime(t)).abs();
                // O(h^2) with headroom for roundoff in the difference quotients.
                if err_p > 1e-4 * scale + 0.5 * prev_err_p
                    || err_pp > 1e-2 * scale + 0.5 * prev_err_pp
                {
                    return Err(Error::ProfileInvariant(format!(
                        "supplied derivatives disagree with finite differences at t = {t} (h = {h}): |d1| = {err_p}, |d2| = {err_pp}"
                    )));
                }
                prev_err_p = err_p;
                prev_err_pp = err_pp;
            }
        }
        Ok(())
    }
}

/// Gaussian curvature K(t) = -m''(t)/m(t); even in t.
pub fn curvature(profile: &WarpingProfile, t: f64) -> Result<f64> {
    let mpp = profile.m_double_prime(t);
    if !mpp.is_finite() {
        return Err(Error::NonFinite { what: "m''", t });
    }
    let m = profile.m(t);
    if !m.is_finite() {
        return Err(Error::NonFinite { what: "m", t });
    }
    let k = -mpp / m;
    if !k.is_finite() {
        // tail underflow of m makes the quotient meaningless
        return Err(Error::NonFinite { what: "K = -m''/m", t });
    }
    Ok(k)
}

/// Sign structure of m' on (0, t_max].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MonotoneClass {
    /// m' < 0 on (0, t0) and m' > 0 beyond; t0 finite.
    DecreasingThenIncreasing,
    /// m' < 0 on all of (0, t_max]; t0 = +infinity.
    DecreasingThroughout,
    /// m' >= 0 on (0, t_max] (flat or catenoid-like); no oscillating geodesics.
    NondecreasingThroughout,
}

/// Hypothesis flags evaluated by grid sampling.
#[derive(Debug, Clone, Copy)]
pub struct Hypotheses {
    pub even: bool,
    pub positive: bool,
    pub k0_positive: bool,
    /// K nonincreasing on [0, t0] when t0 is finite, on [0, t_max] otherwise.
    pub k_decreasing: bool,
    pub nonpositive_curvature_everywhere: bool,
}

impl Hypotheses {
    /// The positive-equator hypotheses of the classification (Remark case excluded).
    pub fn main_case(&self) -> bool {
        self.even && self.positive && self.k0_positive && self.k_decreasing
    }
}

/// Derived constants of a profile over the analysis window [0, t_max].
#[derive(Debug, Clone)]
pub struct ProfileAnalysis {
    pub m0: f64,
    /// inf of m; exact (= m(t0)) in the finite-t0 case, m(t_max) otherwise.
    pub inf_m: f64,
    /// True when inf_m is the truncation estimate m(t_max).
    pub inf_m_truncated: bool,
    /// First (unique) positive zero of m'; None when m' has no positive zero.
    pub t0: Option<f64>,
    pub monotone: MonotoneClass,
    /// Zero of K in (0, t0) (or in (0, t_max] when t0 is infinite); None if K
    /// does not change sign there.
    pub t1: Option<f64>,
    /// Gaussian curvature at the equator.
    pub k0: f64,
    pub t_max: f64,
    pub grid_n: usize,
    pub hypotheses: Hypotheses,
}

impl ProfileAnalysis {
    pub fn to_json(&self) -> String {
        let h = &self.hypotheses;
        format!(
            "{{\"m0\":{},\"inf_m\":{},\"inf_m_truncated\":{},\"t0\":{},\"t1\":{},\"K0\":{},\"t_max\":{},\"grid_n\":{},\"hypotheses_ok\":{{\"even\":{},\"positive\":{},\"K0_positive\":{},\"K_decreasing\":{},\"nonpositive_curvature_everywhere\":{}}}}}",
            json_f64(self.m0),
            json_f64(self.inf_m),
            self.inf_m_truncated,
            json_opt_f64(self.t0),
            json_opt_f64(self.t1),
            json_f64(self.k0),
            json_f64(self.t_max),
            self.grid_n,
            h.even,
            h.positive,
            h.k0_positive,
            h.k_decreasing,
            h.nonpositive_curvature_everywhere,
        )
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Sign {
    Neg,
    Zero,
    Pos,
}

fn sign_of(x: f64) -> Sign {
    if x < 0.0 {
        Sign::Neg
    } else if x > 0.0 {
        Sign::Pos
    } else {
        Sign::Zero
    }
}

/// Locate t0 and t1, estimate inf m, and evaluate the hypothesis flags.
///
/// Rejects profiles whose m' changes sign more than once on (0, t_max]: the
/// uniqueness of t0 is only guaranteed for curvature-monotone profiles, and a
/// violating profile must not be mis-analyzed.
pub fn analyze(profile: &WarpingProfile, t_max: f64, grid_n: usize) -> Result<ProfileAnalysis> {
    if !(t_max > 0.0) {
        return Err(Error::InvalidArgument("t_max must be positive".into()));
    }
    if grid_n < 100 {
        return Err(Error::InvalidArgument("grid_n must be at least 100".into()));
    }
    profile.validate(t_max, 1000.min(grid_n))?;

    let m0 = profile.m(0.0);
    let k0 = curvature(profile, 0.0)?;

    // Sign structure of m' on the positive grid.
    let h = t_max / grid_n as f64;
    let mut signs: Vec<(f64, Sign)> = Vec::with_capacity(grid_n);
    for i in 1..=grid_n {
        let t = i as f64 * h;
        let mp = profile.m_prime(t);
        if !mp.is_finite() {
            return Err(Error::NonFinite { what: "m'", t });
        }
        signs.push((t, sign_of(mp)));
    }
    let mut transitions: Vec<(f64, f64, Sign, Sign)> = Vec::new();
    let mut last_nonzero: Option<(f64, Sign)> = None;
    let mut any_neg = false;
    let mut any_pos = false;
    for &(t, s) in &signs {
        match s {
            Sign::Zero => {}
            _ => {
                if s == Sign::Neg {
                    any_neg = true;
                } else {
                    any_pos = true;
                }
                if let Some((tp, sp)) = last_nonzero {
                    if sp != s {
                        transitions.push((tp, t, sp, s));
                    }
                }
                last_nonzero = Some((t, s));
            }
        }
    }
    if transitions.len() > 1 {
        return Err(Error::OutsideProfileClass {
            transitions: transitions.len(),
            t_max,
        });
    }

    let (monotone, t0) = match (transitions.first(), any_neg, any_pos) {
        (Some(&(lo, hi, Sign::Neg, Sign::Pos)), _, _) => {
            let t0 = bisect(|t| profile.m_prime(t), lo, hi, 1e-12, 0.0)?;
            (MonotoneClass::DecreasingThenIncreasing, Some(t0))
        }
        (Some(_), _, _) => {
            // A single Pos -> Neg transition: m rises from the equator then
            // falls; not the symmetric-decreasing class.
            return Err(Error::OutsideProfileClass {
                transitions: 1,
                t_max,
            });
        }
        (None, true, false) => (MonotoneClass::DecreasingThroughout, None),
        (None, false, _) => (MonotoneClass::NondecreasingThroughout, None),
        (None, true, true) => unreachable!("a Neg and a Pos sample force a transition"),
    };

    let (inf_m, inf_m_truncated) = match (monotone, t0) {
        (MonotoneClass::DecreasingThenIncreasing, Some(t0)) => (profile.m(t0), false),
        (MonotoneClass::DecreasingThroughout, _) => (profile.m(t_max), true),
        (MonotoneClass::NondecreasingThroughout, _) => (m0, false),
        _ => unreachable!(),
    };

    // Largest height at which m is still numerically meaningful; K grids stay
    // inside it (gauss underflows beyond |t| ~ 27).
    let mut t_support = t_max;
    for i in 1..=grid_n {
        let t = t_max * i as f64 / grid_n as f64;
        if profile.m(t) < 1e-300 {
            t_support = (i - 1) as f64 * h;
            break;
        }
    }

    // t1: sign change of K on (0, t0] (or (0, t_support] when t0 is infinite).
    let k_hi = t0.unwrap_or(t_support);
    let mut t1 = None;
    if k0 > 0.0 {
        let n1 = grid_n.max(1000);
        let mut prev_t = 0.0;
        let mut prev_k = k0;
        for i in 1..=n1 {
            let t = k_hi * i as f64 / n1 as f64;
            let k = curvature(profile, t)?;
            if prev_k > 0.0 && k <= 0.0 {
                t1 = Some(bisect(
                    |x| -profile.m_double_prime(x),
                    prev_t,
                    t,
                    1e-12,
                    0.0,
                )?);
                break;
            }
            prev_t = t;
            prev_k = k;
        }
    }

    // Hypothesis flags by grid sampling.
    let mut even = true;
    let mut positive = true;
    let mut nonpositive = true;
    for i in 0..=grid_n {
        let t = t_max * i as f64 / grid_n as f64;
        let m = profile.m(t);
        let mm = profile.m(-t);
        if (m - mm).abs() > 1e-12 * (1.0 + m.abs()) {
            even = false;
        }
        // zeros far out are tail underflow, not sign violations
        if m < 0.0 || mm < 0.0 {
            positive = false;
        }
        if t <= t_support && curvature(profile, t)? > 1e-12 {
            nonpositive = false;
        }
    }
    // K nonincreasing on the window where oscillating geodesics live:
    // [0, t0] in the finite-t0 case, the supported grid otherwise.
    let k_window = t0.unwrap_or(t_support);
    let mut k_decreasing = true;
    let mut prev_k = k0;
    for i in 1..=grid_n {
        let t = k_window * i as f64 / grid_n as f64;
        let k = curvature(profile, t)?;
        if k > prev_k + 1e-10 * (1.0 + prev_k.abs()) {
            k_decreasing = false;
            break;
        }
        prev_k = k;
    }

    Ok(ProfileAnalysis {
        m0,
        inf_m,
        inf_m_truncated,
        t0,
        monotone,
        t1,
        k0,
        t_max,
        grid_n,
        hypotheses: Hypotheses {
            even,
            positive,
            k0_positive: k0 > 0.0,
            k_decreasing,
            nonpositive_curvature_everywhere: nonpositive,
        },
    })
}

/// Tangency height xi(nu): least t > 0 with m(t) = nu, for nu in (inf m, m(0)).
///
/// Strictly decreasing in nu on the supported class. The search scans
/// [0, 50] at resolution 50/4096 and refines the first bracket by bisection
/// to 1e-13 relative.
pub fn xi(profile: &WarpingProfile, nu: f64) -> Result<f64> {
    let m0 = profile.m(0.0);
    if !(nu < m0) {
        return Err(Error::NuAtOrAboveEquator { nu, m0 });
    }
    if !(nu > 0.0) {
        return Err(Error::NuAtOrBelowInfM { nu, inf_m: 0.0 });
    }
    let h = XI_SCAN_MAX / XI_SCAN_N as f64;
    let mut prev_t = 0.0;
    let mut prev_m = m0;
    let mut min_m = m0;
    let mut argmin = 0.0;
    for i in 1..=XI_SCAN_N {
        let t = i as f64 * h;
        let m = profile.m(t);
        if m <= nu {
            return bisect(|x| profile.m(x) - nu, prev_t, t, 0.0, 1e-13);
        }
        if m < min_m {
            min_m = m;
            argmin = t;
        }
        prev_t = t;
        prev_m = m;
    }
    let _ = prev_m;
    // No sample dipped to nu. Refine around the sampled minimum in case the
    // dip is narrower than the scan resolution.
    if argmin > 0.0 && argmin < XI_SCAN_MAX {
        let (mut lo, mut hi) = (argmin - h, argmin + h);
        for _ in 0..200 {
            let l3 = lo + (hi - lo) / 3.0;
            let r3 = hi - (hi - lo) / 3.0;
            if profile.m(l3) < profile.m(r3) {
                hi = r3;
            } else {
                lo = l3;
            }
            if hi - lo < 1e-14 * (1.0 + argmin) {
                break;
            }
        }
        let tm = 0.5 * (lo + hi);
        if profile.m(tm) <= nu {
            return bisect(|x| profile.m(x) - nu, 0.0, tm, 0.0, 1e-13);
        }
        min_m = min_m.min(profile.m(tm));
    }
    Err(Error::NuAtOrBelowInfM { nu, inf_m: min_m })
}

pub fn profile_to_json(profile: &WarpingProfile) -> String {
    let params: Vec<String> = profile
        .params()
        .iter()
        .map(|(k, v)| format!("{}:{}", json_str(k), json_f64(*v)))
        .collect();
    format!(
        "{{\"name\":{},\"params\":{{{}}}}}",
        json_str(profile.name()),
        params.join(",")
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two_dip_profile() -> WarpingProfile {
        // m' = t (t^2-1)(t^2-4) / 10: sign pattern + - + on (0, inf).
        WarpingProfile::custom(
            "two-dip",
            |t| (t.powi(6) / 6.0 - 1.25 * t.powi(4) + 2.0 * t * t) / 10.0 + 1.0,
            |t| (t.powi(5) - 5.0 * t.powi(3) + 4.0 * t) / 10.0,
            |t| (5.0 * t.powi(4) - 15.0 * t * t + 4.0) / 10.0,
        )
    }

    #[test]
    fn curvature_examples() {
        let g = WarpingProfile::gauss(1.0);
        assert!((curvature(&g, 0.0).unwrap() - 2.0).abs() < 1e-12);
        let f = WarpingProfile::flat(1.0);
        for t in [-3.0, 0.0, 1.7] {
            assert_eq!(curvature(&f, t).unwrap(), 0.0);
        }
        let c = WarpingProfile::catenoid(1.0);
        assert!((curvature(&c, 0.0).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn curvature_is_even() {
        let g = WarpingProfile::gauss(1.0);
        for t in [0.3, 1.1, 2.4] {
            assert!(
                (curvature(&g, t).unwrap() - curvature(&g, -t).unwrap()).abs() < 1e-13
            );
        }
    }

    #[test]
    fn analyze_hourglass_finds_t0_and_t1() {
        let p = WarpingProfile::hourglass();
        let a = analyze(&p, 30.0, 10_000).unwrap();
        assert_eq!(a.monotone, MonotoneClass::DecreasingThenIncreasing);
        assert!((a.t0.unwrap() - 1.0).abs() < 1e-10);
        // K(t1) = 0 at t1 = sqrt(sqrt(5) - 2)
        let t1_exact = (5f64.sqrt() - 2.0).sqrt();
        assert!((a.t1.unwrap() - t1_exact).abs() < 1e-10);
        assert!((a.k0 - 1.0).abs() < 1e-12);
        assert!((a.inf_m - (1.5 - 2f64.ln())).abs() < 1e-12);
        assert!(!a.inf_m_truncated);
        assert!(a.hypotheses.main_case());
        assert!(!a.hypotheses.nonpositive_curvature_everywhere);
    }

    #[test]
    fn analyze_gauss_reports_infinite_t0() {
        let p = WarpingProfile::gauss(1.0);
        let a = analyze(&p, 30.0, 10_000).unwrap();
        assert_eq!(a.monotone, MonotoneClass::DecreasingThroughout);
        assert!(a.t0.is_none());
        assert!(a.inf_m_truncated);
        assert!(a.inf_m < 1e-100);
        assert!((a.k0 - 2.0).abs() < 1e-12);
        // K(t) = 2 - 4 t^2 vanishes at 1/sqrt(2)
        assert!((a.t1.unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);
        assert!(a.hypotheses.main_case());
        assert!(a.hypotheses.k_decreasing);
    }

    #[test]
    fn analyze_catenoid_is_remark_class() {
        let p = WarpingProfile::catenoid(1.0);
        let a = analyze(&p, 30.0, 10_000).unwrap();
        assert_eq!(a.monotone, MonotoneClass::NondecreasingThroughout);
        assert!(a.t0.is_none());
        assert!(!a.hypotheses.k0_positive);
        assert!(a.hypotheses.nonpositive_curvature_everywhere);
        assert_eq!(a.inf_m, a.m0);
        assert!(a.t1.is_none());
    }

    #[test]
    fn analyze_flat_fails_equator_hypothesis() {
        let p = WarpingProfile::flat(1.0);
        let a = analyze(&p, 10.0, 1000).unwrap();
        assert!(!a.hypotheses.k0_positive);
        assert!(a.hypotheses.nonpositive_curvature_everywhere);
        assert_eq!(a.monotone, MonotoneClass::NondecreasingThroughout);
    }

    #[test]
    fn analyze_rejects_double_dip() {
        let p = two_dip_profile();
        match analyze(&p, 5.0, 10_000) {
            Err(Error::OutsideProfileClass { transitions, .. }) => assert!(transitions >= 2),
            other => panic!("expected OutsideProfileClass, got {other:?}"),
        }
    }

    #[test]
    fn analyze_rejects_uneven_profile() {
        let p = WarpingProfile::custom(
            "shifted",
            |t| 1.0 + (t - 0.2) * (t - 0.2),
            |t| 2.0 * (t - 0.2),
            |_| 2.0,
        );
        assert!(analyze(&p, 5.0, 1000).is_err());
    }

    #[test]
    fn xi_closed_form_inverse_for_gauss() {
        let p = WarpingProfile::gauss(1.0);
        let x = xi(&p, (-1.0f64).exp()).unwrap();
        assert!((x - 1.0).abs() < 1e-12, "xi = {x}");
        for nu in [0.2, 0.5, 0.9] {
            let x = xi(&p, nu).unwrap();
            let expect = (-(nu as f64).ln()).sqrt();
            assert!((x - expect).abs() < 1e-12 * (1.0 + expect));
        }
    }

    #[test]
    fn xi_tends_to_zero_at_the_equator() {
        let p = WarpingProfile::gauss(1.0);
        let mut prev = f64::INFINITY;
        for k in 1..=6 {
            let nu = 1.0 - 10f64.powi(-k);
            let x = xi(&p, nu).unwrap();
            assert!(x < prev);
            prev = x;
        }
        assert!(prev < 1e-2);
    }

    #[test]
    fn xi_inverts_m_on_the_decreasing_branch() {
        let p = WarpingProfile::hourglass();
        let x = xi(&p, p.m(0.5)).unwrap();
        assert!((x - 0.5).abs() < 1e-10);
    }

    #[test]
    fn xi_domain_errors_distinguish_sides() {
        let p = WarpingProfile::hourglass();
        match xi(&p, 1.5) {
            Err(Error::NuAtOrAboveEquator { .. }) => {}
            other => panic!("expected NuAtOrAboveEquator, got {other:?}"),
        }
        match xi(&p, 0.5) {
            Err(Error::NuAtOrBelowInfM { .. }) => {}
            other => panic!("expected NuAtOrBelowInfM, got {other:?}"),
        }
        // just below inf m is outside the domain (exactly inf m sits on the
        // float boundary where a representable root may exist)
        match xi(&p, 1.5 - 2f64.ln() - 1e-9) {
            Err(Error::NuAtOrBelowInfM { .. }) => {}
            other => panic!("expected NuAtOrBelowInfM, got {other:?}"),
        }
    }

    #[test]
    fn gallery_by_name_and_unknown_rejection() {
        for name in WarpingProfile::gallery() {
            let p = WarpingProfile::by_name(name, &[]).unwrap();
            assert_eq!(p.name(), *name);
        }
        assert!(WarpingProfile::by_name("torus", &[]).is_err());
        assert!(WarpingProfile::by_name("gauss", &[("b".into(), 1.0)]).is_err());
        assert!(WarpingProfile::by_name("gauss", &[("a".into(), -1.0)]).is_err());
    }

    #[test]
    fn curvature_sign_structure_on_hourglass() {
        let p = WarpingProfile::hourglass();
        let a = analyze(&p, 30.0, 10_000).unwrap();
        let t0 = a.t0.unwrap();
        let t1 = a.t1.unwrap();
        assert!(0.0 < t1 && t1 < t0);
        let n = 800;
        for i in 0..=n {
            let t = t1 * i as f64 / n as f64;
            assert!(curvature(&p, t).unwrap() >= -1e-10);
        }
        for i in 0..=n {
            let t = t1 + (30.0 - t1) * i as f64 / n as f64;
            assert!(curvature(&p, t).unwrap() <= 1e-10);
        }
        // m' < 0 on (0, t0), > 0 just beyond (Lemma-2.2 structure)
        for i in 1..n {
            let t = t0 * i as f64 / n as f64;
            assert!(p.m_prime(t) < 0.0);
        }
        for i in 1..=n {
            let t = t0 + 0.5 * i as f64 / n as f64;
            assert!(p.m_prime(t) > 0.0);
        }
    }

    proptest! {
        #[test]
        fn evenness_holds_on_random_samples(t in -30.0f64..30.0) {
            for p in [
                WarpingProfile::gauss(1.0),
                WarpingProfile::sech_profile(1.0),
                WarpingProfile::hourglass(),
                WarpingProfile::catenoid(1.0),
            ] {
                let m = p.m(t);
                prop_assert!((m - p.m(-t)).abs() <= 1e-12 * (1.0 + m.abs()));
            }
        }

        #[test]
        fn xi_composed_with_m_is_identity(u in 0.02f64..0.98) {
            // hourglass: t0 = 1, m injective on (0, 1)
            let p = WarpingProfile::hourglass();
            let x = xi(&p, p.m(u)).unwrap();
            prop_assert!((x - u).abs() <= 1e-10);
        }

        #[test]
        fn xi_is_strictly_decreasing_in_nu(nu in 0.05f64..0.94, d in 0.01f64..0.05) {
            let p = WarpingProfile::gauss(1.0);
            let x1 = xi(&p, nu).unwrap();
            let x2 = xi(&p, nu + d).unwrap();
            prop_assert!(x2 < x1);
        }
    }
}
