//! Unit-speed geodesic integration on the cylinder and its universal cover.
//!
//! The integrator works on the regular second-order system
//!
//! ```text
//! t''     = m'(t) nu^2 / m(t)^3,      theta' = nu / m(t)^2,
//! ```
//!
//! which is smooth through turning points, unlike the first-order form with
//! its square-root branch. The quadrature module remains the closed-form
//! source of truth for theta-advances and lengths; this integrator is the
//! independent cross-check.
//!
//! Fixed-step classical RK4 with event bisection for tangencies (dt/ds = 0)
//! and t = const crossings keeps traces deterministic and reproducible.

use crate::error::{Error, Result};
use crate::numfmt::g17;
use crate::profile::WarpingProfile;

/// A point on a unit-speed geodesic, tagged with its Clairaut constant.
#[derive(Debug, Clone, Copy)]
pub struct GeodesicState {
    pub s: f64,
    pub t: f64,
    /// Unbounded on the universal cover; callers reduce mod 2 pi on M.
    pub theta: f64,
    pub dt_ds: f64,
    pub nu: f64,
}

impl GeodesicState {
    /// |dt_ds^2 + (nu/m)^2 - 1|
    pub fn unit_speed_defect(&self, profile: &WarpingProfile) -> f64 {
        // meridians have no theta component; 0/0 on an underflowed tail is 0
        let c = if self.nu == 0.0 {
            0.0
        } else {
            self.nu / profile.m(self.t)
        };
        (self.dt_ds * self.dt_ds + c * c - 1.0).abs()
    }

    /// |m(t) cos(eta) - nu| with eta measured on the actual velocity vector
    /// (dt_ds, nu/m) renormalized; reduces to |nu| |1/speed - 1|.
    pub fn clairaut_defect(&self, profile: &WarpingProfile) -> f64 {
        if self.nu == 0.0 {
            return 0.0;
        }
        let c = self.nu / profile.m(self.t);
        let speed = (self.dt_ds * self.dt_ds + c * c).sqrt();
        (self.nu / speed - self.nu).abs()
    }
}

/// Tangency with a parallel: m(t) = |nu| and dt/ds changes sign.
#[derive(Debug, Clone, Copy)]
pub struct TurningPoint {
    pub s: f64,
    pub t: f64,
}

/// A sampled trajectory. States sit on the uniform step grid; turning points
/// are refined separately.
#[derive(Debug, Clone)]
pub struct GeodesicTrace {
    pub states: Vec<GeodesicState>,
    pub turning_points: Vec<TurningPoint>,
    pub total_length: f64,
    pub step: f64,
}

impl GeodesicTrace {
    pub fn start(&self) -> &GeodesicState {
        &self.states[0]
    }

    /// CSV export (s, t, theta, dt_ds), 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,t,theta,dt_ds\n");
        for st in &self.states {
            out.push_str(&format!(
                "{},{},{},{}\n",
                g17(st.s),
                g17(st.t),
                g17(st.theta),
                g17(st.dt_ds)
            ));
        }
        out
    }
}

/// Clairaut constant m(t) cos(eta) of a direction making angle eta with the
/// parallel direction at height t.
pub fn clairaut_constant(profile: &WarpingProfile, t: f64, eta: f64) -> f64 {
    profile.m(t) * eta.cos()
}

// y = [t, theta, p] with p = dt/ds.
fn rhs(profile: &WarpingProfile, nu: f64, y: &[f64; 3]) -> [f64; 3] {
    if nu == 0.0 {
        // meridian: theta frozen, no transverse acceleration
        return [y[2], 0.0, 0.0];
    }
    let m = profile.m(y[0]);
    let r = nu / (m * m);
    [y[2], r, profile.m_prime(y[0]) * nu * r / m]
}

fn rk4_step(profile: &WarpingProfile, nu: f64, y: &[f64; 3], h: f64) -> [f64; 3] {
    let k1 = rhs(profile, nu, y);
    let y2 = [
        y[0] + 0.5 * h * k1[0],
        y[1] + 0.5 * h * k1[1],
        y[2] + 0.5 * h * k1[2],
    ];
    let k2 = rhs(profile, nu, &y2);
    let y3 = [
        y[0] + 0.5 * h * k2[0],
        y[1] + 0.5 * h * k2[1],
        y[2] + 0.5 * h * k2[2],
    ];
    let k3 = rhs(profile, nu, &y3);
    let y4 = [y[0] + h * k3[0], y[1] + h * k3[1], y[2] + h * k3[2]];
    let k4 = rhs(profile, nu, &y4);
    [
        y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        y[2] + h / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
    ]
}

/// Bisect for sigma in (0, h] with g(y(sigma)) = 0, given g(y(0)) = g0 and an
/// opposite (or zero) sign at sigma = h. Each probe is one RK4 sub-step from
/// y0, so the refined state inherits the local O(h^5) accuracy.
fn refine_event<G: Fn(&[f64; 3]) -> f64>(
    profile: &WarpingProfile,
    nu: f64,
    y0: &[f64; 3],
    h: f64,
    g0: f64,
    g: G,
) -> (f64, [f64; 3]) {
    let mut lo = 0.0;
    let mut hi = h;
    let mut y_hi = rk4_step(profile, nu, y0, h);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let y_mid = rk4_step(profile, nu, y0, mid);
        let g_mid = g(&y_mid);
        if g_mid == 0.0 {
            return (mid, y_mid);
        }
        if g_mid.signum() == g0.signum() {
            lo = mid;
        } else {
            hi = mid;
            y_hi = y_mid;
        }
    }
    (hi, y_hi)
}

fn check_start(profile: &WarpingProfile, t: f64, nu: f64) -> Result<f64> {
    let m = profile.m(t);
    if nu.abs() > m * (1.0 + 1e-12) {
        return Err(Error::ClairautBound { nu: nu.abs(), t, m });
    }
    Ok((1.0 - (nu / m) * (nu / m)).max(0.0).sqrt())
}

/// Detects a grazing tangency: dt/ds reaches an extremum inside the step
/// without changing sign. On the supported class this can only happen at the
/// degenerate height where m' vanishes, which the fixed step cannot resolve.
fn check_touch(
    profile: &WarpingProfile,
    nu: f64,
    y: &[f64; 3],
    y_new: &[f64; 3],
    h: f64,
) -> Result<()> {
    if nu == 0.0 || y[2] * y_new[2] <= 0.0 {
        return Ok(());
    }
    let mp0 = profile.m_prime(y[0]);
    let mp1 = profile.m_prime(y_new[0]);
    if mp0 * mp1 < 0.0 {
        let (_, y_ext) = refine_event(profile, nu, y, h, mp0, |yy| profile.m_prime(yy[0]));
        if y_ext[2].abs() <= 1e-9 {
            return Err(Error::Accuracy(format!(
                "degenerate tangency near t = {}: dt/ds touches zero without a sign change",
                y_ext[0]
            )));
        }
    }
    Ok(())
}

fn turning_from(
    profile: &WarpingProfile,
    nu: f64,
    s0: f64,
    y0: &[f64; 3],
    h: f64,
) -> Result<TurningPoint> {
    let (sigma, y_turn) = refine_event(profile, nu, y0, h, y0[2], |yy| yy[2]);
    let defect = (profile.m(y_turn[0]) - nu.abs()).abs();
    if defect > 1e-9 {
        return Err(Error::Accuracy(format!(
            "turning point at s = {} misses its parallel by {defect}; reduce the step",
            s0 + sigma
        )));
    }
    Ok(TurningPoint {
        s: s0 + sigma,
        t: y_turn[0],
    })
}

/// Integrate a unit-speed geodesic from (t, theta) = `start` with Clairaut
/// constant `nu`, initial sign of dt/ds `sign0`, up to arclength `s_max`.
pub fn integrate(
    profile: &WarpingProfile,
    start: (f64, f64),
    nu: f64,
    sign0: f64,
    s_max: f64,
    step: f64,
) -> Result<GeodesicTrace> {
    if !(s_max > 0.0) || !(step > 0.0) {
        return Err(Error::InvalidArgument("s_max and step must be positive".into()));
    }
    let p0 = check_start(profile, start.0, nu)? * sign0.signum();
    let mut y = [start.0, start.1, p0];
    let mut s = 0.0;
    let n_steps = (s_max / step).ceil() as usize;
    let mut states = Vec::with_capacity(n_steps + 1);
    let mut turning_points = Vec::new();
    states.push(GeodesicState {
        s,
        t: y[0],
        theta: y[1],
        dt_ds: y[2],
        nu,
    });
    while s < s_max - 1e-15 * s_max {
        let h = step.min(s_max - s);
        let y_new = rk4_step(profile, nu, &y, h);
        if !(y_new[0].is_finite() && y_new[1].is_finite() && y_new[2].is_finite()) {
            return Err(Error::NonFinite { what: "geodesic state", t: y[0] });
        }
        if y[2] * y_new[2] < 0.0 {
            turning_points.push(turning_from(profile, nu, s, &y, h)?);
        } else {
            check_touch(profile, nu, &y, &y_new, h)?;
        }
        s += h;
        y = y_new;
        states.push(GeodesicState {
            s,
            t: y[0],
            theta: y[1],
            dt_ds: y[2],
            nu,
        });
    }
    Ok(GeodesicTrace {
        states,
        turning_points,
        total_length: s,
        step,
    })
}

/// Streamed integration for large fans: invokes `sample` every `stride`-th
/// step (and at s = 0) without storing the trajectory.
pub(crate) fn integrate_sampled<F: FnMut(f64, f64, f64, f64)>(
    profile: &WarpingProfile,
    start: (f64, f64),
    nu: f64,
    sign0: f64,
    s_max: f64,
    step: f64,
    stride: usize,
    mut sample: F,
) -> Result<()> {
    let p0 = check_start(profile, start.0, nu)? * sign0.signum();
    let mut y = [start.0, start.1, p0];
    let mut s = 0.0;
    let stride = stride.max(1);
    let mut k = 0usize;
    sample(s, y[0], y[1], y[2]);
    while s < s_max - 1e-15 * s_max {
        let h = step.min(s_max - s);
        let y_new = rk4_step(profile, nu, &y, h);
        if !(y_new[0].is_finite() && y_new[1].is_finite() && y_new[2].is_finite()) {
            return Err(Error::NonFinite { what: "geodesic state", t: y[0] });
        }
        s += h;
        y = y_new;
        k += 1;
        if k % stride == 0 {
            sample(s, y[0], y[1], y[2]);
        }
    }
    Ok(())
}

/// Where and how a geodesic first meets a parallel.
#[derive(Debug, Clone, Copy)]
pub struct Arrival {
    pub delta_theta: f64,
    pub arclength: f64,
    pub t: f64,
}

/// First crossing of the parallel t = `target` after at least `min_turns`
/// tangencies. A tangency landing on the target parallel itself counts as the
/// arrival (the nu = m(u) endpoint case).
pub(crate) fn first_arrival_at(
    profile: &WarpingProfile,
    start: (f64, f64),
    nu: f64,
    sign0: f64,
    target: f64,
    min_turns: usize,
    s_max: f64,
    step: f64,
) -> Result<Arrival> {
    let p0_mag = check_start(profile, start.0, nu)?;
    let p0 = p0_mag * sign0.signum();
    let mut y = [start.0, start.1, p0];
    let mut s = 0.0;
    // Starting tangent to its own parallel counts as a tangency already spent.
    let mut turns = if p0_mag == 0.0 { 1 } else { 0 };
    while s < s_max {
        let h = step.min(s_max - s);
        let y_new = rk4_step(profile, nu, &y, h);
        if !(y_new[0].is_finite() && y_new[1].is_finite() && y_new[2].is_finite()) {
            return Err(Error::NonFinite { what: "geodesic state", t: y[0] });
        }

        // Events inside this step, processed in arclength order.
        let mut turn_sigma = f64::INFINITY;
        let mut turn_state = None;
        if y[2] * y_new[2] < 0.0 {
            let tp = turning_from(profile, nu, s, &y, h)?;
            turn_sigma = tp.s - s;
            turn_state = Some(tp);
        } else {
            check_touch(profile, nu, &y, &y_new, h)?;
        }
        let g0 = y[0] - target;
        let g1 = y_new[0] - target;
        let mut cross_sigma = f64::INFINITY;
        let mut cross_state = [0.0f64; 3];
        if (g0 != 0.0 && g0 * g1 < 0.0) || (g0 != 0.0 && g1 == 0.0) {
            let (sigma, yc) = refine_event(profile, nu, &y, h, g0, |yy| yy[0] - target);
            cross_sigma = sigma;
            cross_state = yc;
        }

        if turn_sigma <= cross_sigma {
            if let Some(tp) = turn_state {
                turns += 1;
                if (tp.t - target).abs() <= 1e-9 && turns > min_turns {
                    // tangent arrival at the target parallel
                    let (_, yt) = refine_event(profile, nu, &y, h, y[2], |yy| yy[2]);
                    return Ok(Arrival {
                        delta_theta: yt[1] - start.1,
                        arclength: tp.s,
                        t: tp.t,
                    });
                }
            }
        }
        if cross_sigma.is_finite() && turns >= min_turns {
            return Ok(Arrival {
                delta_theta: cross_state[1] - start.1,
                arclength: s + cross_sigma,
                t: cross_state[0],
            });
        }

        s += h;
        y = y_new;
    }
    Err(Error::NonArrival { target, s_max })
}

/// First return of an equator-started geodesic to t = 0, past its tangency.
/// The theta advance equals the half-period phi(nu) and the arclength equals
/// l(nu); this is the shooting route, fully independent of the quadrature.
pub fn equator_return(
    profile: &WarpingProfile,
    nu: f64,
    step: f64,
    s_max: f64,
) -> Result<Arrival> {
    if !(nu.abs() > 0.0) {
        return Err(Error::InvalidArgument(
            "the meridian never returns to the equator".into(),
        ));
    }
    first_arrival_at(profile, (0.0, 0.0), nu, 1.0, 0.0, 1, s_max, step)
}

/// The two re-intersecting arrivals of Lemmas 5.1-5.2.
#[derive(Debug, Clone, Copy)]
pub struct ReturnIntersection {
    /// Branch with initial dt/ds < 0.
    pub alpha: Arrival,
    /// Branch with initial dt/ds > 0.
    pub beta: Arrival,
}

/// Integrate both geodesics from (-u, 0) with Clairaut constant nu and return
/// their first arrivals at the opposite parallel t = u (for beta, the first
/// arrival past its tangency). Contract: both delta-thetas equal phi(nu) and
/// both arclengths equal l(nu).
pub fn return_point(
    profile: &WarpingProfile,
    u: f64,
    nu: f64,
    step: f64,
    s_max: f64,
) -> Result<ReturnIntersection> {
    if !(u > 0.0) {
        return Err(Error::InvalidArgument("u must be positive".into()));
    }
    let m_u = profile.m(u);
    if nu > m_u {
        return Err(Error::OutsideCutRange { nu, m_u });
    }
    if !(nu > 0.0) {
        return Err(Error::InvalidArgument(
            "re-intersection requires a positive Clairaut constant".into(),
        ));
    }
    crate::profile::xi(profile, nu)?;
    let alpha = first_arrival_at(profile, (-u, 0.0), nu, -1.0, u, 1, s_max, step)?;
    let beta = first_arrival_at(profile, (-u, 0.0), nu, 1.0, u, 1, s_max, step)?;
    Ok(ReturnIntersection { alpha, beta })
}

/// First zero of the Jacobi field J'' + K(t(s)) J = 0, J(0) = 0, J'(0) = 1
/// along the trace, searched up to `horizon`.
pub fn jacobi_first_zero_within(
    profile: &WarpingProfile,
    trace: &GeodesicTrace,
    horizon: f64,
) -> Result<Option<f64>> {
    if horizon > trace.total_length + 1e-12 {
        return Err(Error::HorizonTruncated {
            have: trace.total_length,
            want: horizon,
        });
    }
    let start = trace.start();
    let nu = start.nu;
    // augmented state [t, theta, p, J, J']
    let rhs5 = |y: &[f64; 5]| -> [f64; 5] {
        let base = rhs(profile, nu, &[y[0], y[1], y[2]]);
        let k = -profile.m_double_prime(y[0]) / profile.m(y[0]);
        [base[0], base[1], base[2], y[4], -k * y[3]]
    };
    let step5 = |y: &[f64; 5], h: f64| -> [f64; 5] {
        let k1 = rhs5(y);
        let mut y2 = *y;
        for i in 0..5 {
            y2[i] = y[i] + 0.5 * h * k1[i];
        }
        let k2 = rhs5(&y2);
        let mut y3 = *y;
        for i in 0..5 {
            y3[i] = y[i] + 0.5 * h * k2[i];
        }
        let k3 = rhs5(&y3);
        let mut y4 = *y;
        for i in 0..5 {
            y4[i] = y[i] + h * k3[i];
        }
        let k4 = rhs5(&y4);
        let mut out = *y;
        for i in 0..5 {
            out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        out
    };

    let mut y = [start.t, start.theta, start.dt_ds, 0.0, 1.0];
    let mut s = 0.0;
    let step = trace.step;
    while s < horizon - 1e-15 * horizon.max(1.0) {
        let h = step.min(horizon - s);
        let y_new = step5(&y, h);
        if !y_new.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite { what: "jacobi state", t: y[0] });
        }
        if s > 0.0 && y[3] * y_new[3] < 0.0 {
            // bisect the sub-step for the zero of J
            let (mut lo, mut hi) = (0.0, h);
            let j0 = y[3];
            for _ in 0..64 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let ym = step5(&y, mid);
                if ym[3] == 0.0 {
                    return Ok(Some(s + mid));
                }
                if ym[3].signum() == j0.signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Ok(Some(s + 0.5 * (lo + hi)));
        }
        s += h;
        y = y_new;
    }
    Ok(None)
}

/// First conjugate point along the trace, if any occurs before its end.
pub fn jacobi_first_zero(profile: &WarpingProfile, trace: &GeodesicTrace) -> Result<Option<f64>> {
    jacobi_first_zero_within(profile, trace, trace.total_length)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{xi, WarpingProfile};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    #[test]
    fn clairaut_constant_examples() {
        let p = WarpingProfile::gauss(1.0);
        assert!(clairaut_constant(&p, 0.7, FRAC_PI_2).abs() < 1e-16);
        assert!((clairaut_constant(&p, 0.0, 0.0) - 1.0).abs() < 1e-15);
        // m(0.3) cos(pi/3) = e^{-0.09} / 2
        let nu = clairaut_constant(&p, -0.3, FRAC_PI_3);
        assert!((nu - 0.45696559263561409).abs() < 1e-15);
    }

    #[test]
    fn flat_profile_gives_straight_lines() {
        let p = WarpingProfile::flat(1.0);
        for eta in [0.3, 1.0, -0.7] {
            let nu = (eta as f64).cos();
            let sign = (eta as f64).sin().signum();
            let tr = integrate(&p, (0.0, 0.0), nu, sign, 5.0, 1e-3).unwrap();
            for st in tr.states.iter().step_by(500) {
                let expect_t = st.s * (eta as f64).sin();
                let expect_th = st.s * (eta as f64).cos();
                assert!((st.t - expect_t).abs() < 1e-9, "t at s={}", st.s);
                assert!((st.theta - expect_th).abs() < 1e-9);
            }
            assert!(tr.turning_points.is_empty());
        }
    }

    #[test]
    fn meridian_keeps_theta_constant() {
        let p = WarpingProfile::gauss(1.0);
        let tr = integrate(&p, (0.2, 1.0), 0.0, -1.0, 50.0, 1e-3).unwrap();
        let last = tr.states.last().unwrap();
        assert_eq!(last.theta, 1.0);
        assert!((last.t - (0.2 - 50.0)).abs() < 1e-9);
        assert!((last.dt_ds + 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_clairaut_constant_above_bound() {
        let p = WarpingProfile::gauss(1.0);
        match integrate(&p, (0.5, 0.0), 0.9, 1.0, 1.0, 1e-3) {
            Err(Error::ClairautBound { .. }) => {}
            other => panic!("expected ClairautBound, got {other:?}"),
        }
    }

    #[test]
    fn turning_points_sit_on_their_parallel() {
        let p = WarpingProfile::gauss(1.0);
        let nu = 0.5;
        let tr = integrate(&p, (0.0, 0.0), nu, 1.0, 6.0, 1e-3).unwrap();
        assert!(!tr.turning_points.is_empty());
        let expect = xi(&p, nu).unwrap();
        let tp = tr.turning_points[0];
        assert!((tp.t - expect).abs() < 1e-9, "t = {} vs xi = {expect}", tp.t);
        // sign alternation across the recorded tangency
        let before = tr
            .states
            .iter()
            .rev()
            .find(|st| st.s < tp.s - 1e-6)
            .unwrap();
        let after = tr.states.iter().find(|st| st.s > tp.s + 1e-6).unwrap();
        assert!(before.dt_ds > 0.0 && after.dt_ds < 0.0);
    }

    #[test]
    fn conservation_over_long_horizon() {
        // Clairaut and unit-speed drift stay tiny over 50 arclength units.
        let p = WarpingProfile::sech_profile(1.0);
        for k in 0..8 {
            let eta = -PI + 2.0 * PI * (k as f64 + 1.0) / 8.0;
            let nu = clairaut_constant(&p, -0.3, eta);
            let tr = integrate(&p, (-0.3, 0.0), nu, eta.sin().signum(), 50.0, 1e-3).unwrap();
            for st in tr.states.iter().step_by(1000) {
                assert!(st.unit_speed_defect(&p) <= 1e-8, "unit speed at s={}", st.s);
                assert!(st.clairaut_defect(&p) <= 1e-8, "clairaut at s={}", st.s);
            }
        }
    }

    #[test]
    fn reflection_in_nu_mirrors_theta() {
        let p = WarpingProfile::gauss(1.0);
        let a = integrate(&p, (-0.4, 0.0), 0.6, 1.0, 8.0, 1e-3).unwrap();
        let b = integrate(&p, (-0.4, 0.0), -0.6, 1.0, 8.0, 1e-3).unwrap();
        for (sa, sb) in a.states.iter().zip(&b.states).step_by(800) {
            assert!((sa.theta + sb.theta).abs() <= 1e-10);
            assert!((sa.t - sb.t).abs() <= 1e-10);
        }
    }

    #[test]
    fn return_point_rejects_nu_above_m_u() {
        let p = WarpingProfile::gauss(1.0);
        match return_point(&p, 0.3, 0.95, 1e-3, 20.0) {
            Err(Error::OutsideCutRange { .. }) => {}
            other => panic!("expected OutsideCutRange, got {other:?}"),
        }
    }

    #[test]
    fn return_point_branches_agree() {
        let p = WarpingProfile::gauss(1.0);
        let r = return_point(&p, 0.3, 0.5, 1e-3, 30.0).unwrap();
        assert!(
            (r.alpha.delta_theta - r.beta.delta_theta).abs() < 1e-7,
            "alpha {} beta {}",
            r.alpha.delta_theta,
            r.beta.delta_theta
        );
        assert!((r.alpha.arclength - r.beta.arclength).abs() < 1e-7);
        assert!((r.alpha.t - 0.3).abs() < 1e-9);
    }

    #[test]
    fn jacobi_flat_profile_never_vanishes() {
        let p = WarpingProfile::flat(1.0);
        let tr = integrate(&p, (0.0, 0.0), 0.5, 1.0, 30.0, 1e-3).unwrap();
        assert_eq!(jacobi_first_zero(&p, &tr).unwrap(), None);
    }

    #[test]
    fn jacobi_negative_curvature_has_no_conjugate_point() {
        let p = WarpingProfile::catenoid(1.0);
        for eta in [0.2, 0.9, 1.4] {
            let nu = clairaut_constant(&p, -0.5, eta);
            let tr = integrate(&p, (-0.5, 0.0), nu, eta.sin().signum(), 20.0, 1e-3).unwrap();
            assert_eq!(jacobi_first_zero(&p, &tr).unwrap(), None);
        }
    }

    #[test]
    fn jacobi_equator_zero_at_constant_coefficient_value() {
        // equator of gauss: K0 = 2, so J = sin(sqrt(2) s)/sqrt(2)
        let p = WarpingProfile::gauss(1.0);
        let tr = integrate(&p, (0.0, 0.0), 1.0, 1.0, 4.0, 1e-3).unwrap();
        let s = jacobi_first_zero(&p, &tr).unwrap().unwrap();
        assert!((s - PI / 2f64.sqrt()).abs() < 1e-6, "s = {s}");
    }

    #[test]
    fn jacobi_horizon_is_checked() {
        let p = WarpingProfile::flat(1.0);
        let tr = integrate(&p, (0.0, 0.0), 0.5, 1.0, 2.0, 1e-3).unwrap();
        match jacobi_first_zero_within(&p, &tr, 5.0) {
            Err(Error::HorizonTruncated { .. }) => {}
            other => panic!("expected HorizonTruncated, got {other:?}"),
        }
    }

    #[test]
    fn step_halving_converges_at_fourth_order() {
        // theta at the first equator return versus a reference at a much finer
        // step; the error must shrink ~16x per halving.
        let p = WarpingProfile::gauss(1.0);
        let nu = 0.5;
        let reference = first_arrival_at(&p, (0.0, 0.0), nu, 1.0, 0.0, 1, 10.0, 1e-4)
            .unwrap()
            .delta_theta;
        let e1 = (first_arrival_at(&p, (0.0, 0.0), nu, 1.0, 0.0, 1, 10.0, 4e-3)
            .unwrap()
            .delta_theta
            - reference)
            .abs();
        let e2 = (first_arrival_at(&p, (0.0, 0.0), nu, 1.0, 0.0, 1, 10.0, 2e-3)
            .unwrap()
            .delta_theta
            - reference)
            .abs();
        let ratio = e1 / e2;
        assert!(
            (8.0..40.0).contains(&ratio),
            "step-halving ratio {ratio} (e1 = {e1}, e2 = {e2})"
        );
        // a step too coarse to resolve the tangency is an error, not a wrong answer
        assert!(matches!(
            first_arrival_at(&p, (0.0, 0.0), nu, 1.0, 0.0, 1, 10.0, 0.05),
            Err(Error::Accuracy(_))
        ));
    }

    #[test]
    fn trace_csv_shape() {
        let p = WarpingProfile::flat(1.0);
        let tr = integrate(&p, (0.0, 0.0), 0.5, 1.0, 0.01, 1e-3).unwrap();
        let csv = tr.to_csv();
        assert!(csv.starts_with("s,t,theta,dt_ds\n"));
        assert_eq!(csv.lines().count(), 1 + tr.states.len());
    }
}
