//! Improper integrals of the half-period machinery.
//!
//! The half-period phi(nu) and the arc length l(nu) both integrate a function
//! with an inverse-square-root singularity at the turning height t = xi(nu).
//! The substitution t = xi - w^2 removes the singularity exactly whenever
//! m'(xi) != 0; adaptive Gauss-Kronrod refinement then gives a deterministic
//! absolute-error bound.

use crate::error::{Error, Result};
use crate::numfmt::{g17, json_f64};
use crate::profile::{curvature, xi, WarpingProfile};

/// Default absolute quadrature tolerance (CLI-overridable).
pub const DEFAULT_TOL: f64 = 1e-10;

/// A value with an estimated absolute error.
#[derive(Debug, Clone, Copy)]
pub struct Estimate {
    pub value: f64,
    pub est_error: f64,
}

// 15-point Kronrod abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights. Standard constants.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

/// One Gauss-Kronrod 7-15 panel on [a, b]. Nodes are interior, so integrands
/// with removable endpoint singularities are never evaluated at the endpoints.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut res_gauss = 0.0;
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = res_kronrod.abs();
    let mut fv = [0.0f64; 15];
    fv[7] = f_center;

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv[j] = f1;
        fv[14 - j] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }
    res_gauss += WG[3] * f_center;

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv[j] - mean).abs() + (fv[14 - j] - mean).abs());
    }

    let result = res_kronrod * half;
    let err = rescale_error((res_kronrod - res_gauss) * half, res_abs * half.abs(), res_asc * half.abs());
    (result, err)
}

/// Worst-first adaptive refinement to an absolute tolerance, with a hard cap
/// on the number of panels so roundoff-limited integrands terminate with an
/// honest (possibly above-tolerance) error estimate. Deterministic: the panel
/// to split is the one with the largest error, ties broken by position.
pub fn adaptive_gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<Estimate> {
    const MAX_PANELS: usize = 4096;
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("quadrature tol must be positive".into()));
    }
    if a == b {
        return Ok(Estimate { value: 0.0, est_error: 0.0 });
    }
    struct Panel {
        a: f64,
        b: f64,
        value: f64,
        err: f64,
        splittable: bool,
    }
    let make = |a: f64, b: f64| -> Result<Panel> {
        let (value, err) = gk15(f, a, b);
        if !value.is_finite() {
            return Err(Error::NonFinite { what: "integrand panel", t: 0.5 * (a + b) });
        }
        let mid = 0.5 * (a + b);
        Ok(Panel { a, b, value, err, splittable: mid > a.min(b) && mid < a.max(b) })
    };
    let mut panels = vec![make(a, b)?];
    loop {
        let total_err: f64 = panels.iter().map(|p| p.err).sum();
        if total_err <= tol || panels.len() >= MAX_PANELS {
            break;
        }
        let mut worst: Option<usize> = None;
        for (i, p) in panels.iter().enumerate() {
            if p.splittable && worst.map_or(true, |w| p.err > panels[w].err) {
                worst = Some(i);
            }
        }
        let Some(i) = worst else { break };
        if panels[i].err <= tol / (2.0 * panels.len() as f64) {
            break; // remaining refinable error is negligible
        }
        let (pa, pb) = (panels[i].a, panels[i].b);
        let mid = 0.5 * (pa + pb);
        let left = make(pa, mid)?;
        let right = make(mid, pb)?;
        panels[i] = left;
        panels.push(right);
    }
    let value = panels.iter().map(|p| p.value).sum();
    let est_error = panels.iter().map(|p| p.err).sum();
    Ok(Estimate { value, est_error })
}

/// Stable m(t)^2 - nu^2 at t = turn - w^2 with turn = xi(nu).
///
/// Near w = 0, m(t) - nu cancels catastrophically in direct evaluation;
/// a two-term Taylor expansion around the turning height takes over there
/// (relative error O((w^2/turn)^2)).
fn m_sq_minus_nu_sq(profile: &WarpingProfile, nu: f64, turn: f64, w: f64) -> f64 {
    let t = turn - w * w;
    let m = profile.m(t);
    let w2 = w * w;
    // m(turn - w^2) - nu = -m'(turn) w^2 + m''(turn) w^4 / 2 + O(w^6)
    let diff = if w2 <= 1e-4 * turn {
        (-profile.m_prime(turn) + 0.5 * profile.m_double_prime(turn) * w2) * w2
    } else {
        m - nu
    };
    diff * (m + nu)
}

struct TurnData {
    turn: f64,
}

fn prepare(profile: &WarpingProfile, nu: f64) -> Result<TurnData> {
    let m0 = profile.m(0.0);
    if !(nu < m0) {
        return Err(Error::NuAtOrAboveEquator { nu, m0 });
    }
    let turn = xi(profile, nu)?;
    let mp = profile.m_prime(turn);
    if mp.abs() <= 1e-9 {
        return Err(Error::DegenerateTurningPoint { t: turn, m_prime: mp });
    }
    Ok(TurnData { turn })
}

/// Half-period phi(nu) = 2 * int_0^{xi(nu)} nu / (m sqrt(m^2 - nu^2)) dt,
/// for nu in (inf m, m(0)). Returns the value and an estimated absolute error
/// bounded by `tol`.
pub fn phi(profile: &WarpingProfile, nu: f64, tol: f64) -> Result<Estimate> {
    let td = prepare(profile, nu)?;
    let turn = td.turn;
    let f = |w: f64| {
        let t = turn - w * w;
        let msq = m_sq_minus_nu_sq(profile, nu, turn, w);
        2.0 * w * nu / (profile.m(t) * msq.sqrt())
    };
    let est = adaptive_gk15(&f, 0.0, turn.sqrt(), 0.5 * tol)?;
    Ok(Estimate { value: 2.0 * est.value, est_error: 2.0 * est.est_error })
}

/// Arc length l(nu) = 2 * int_0^{xi(nu)} m / sqrt(m^2 - nu^2) dt of the
/// half-period arc. Cross-evaluates the algebraically equivalent second form
/// l = 2 * int sqrt(m^2 - nu^2)/m dt + nu * phi(nu) and requires agreement
/// within the combined error estimate.
pub fn geodesic_length(profile: &WarpingProfile, nu: f64, tol: f64) -> Result<Estimate> {
    let td = prepare(profile, nu)?;
    let turn = td.turn;

    let f1 = |w: f64| {
        let t = turn - w * w;
        let m = profile.m(t);
        let msq = m_sq_minus_nu_sq(profile, nu, turn, w);
        2.0 * w * m / msq.sqrt()
    };
    let first = adaptive_gk15(&f1, 0.0, turn.sqrt(), 0.5 * tol)?;
    let first = Estimate { value: 2.0 * first.value, est_error: 2.0 * first.est_error };

    let f2 = |w: f64| {
        let t = turn - w * w;
        let m = profile.m(t);
        let msq = m_sq_minus_nu_sq(profile, nu, turn, w);
        2.0 * w * msq.sqrt() / m
    };
    let phi_est = phi(profile, nu, tol)?;
    let second_int = adaptive_gk15(&f2, 0.0, turn.sqrt(), 0.5 * tol)?;
    let second = 2.0 * second_int.value + nu * phi_est.value;
    // error estimates are heuristic; keep an f64-realistic floor so the gate
    // catches real formula bugs (1e-6 scale) without tripping on roundoff
    let combined = (first.est_error + 2.0 * second_int.est_error + nu * phi_est.est_error)
        .max(4.0 * tol)
        .max(2e-11 * (1.0 + first.value.abs()));
    if (first.value - second).abs() > combined {
        return Err(Error::Accuracy(format!(
            "the two length forms disagree at nu = {nu}: {} vs {} (allowance {combined})",
            first.value, second
        )));
    }
    Ok(first)
}

/// Central-difference residual |dl/dnu - nu * dphi/dnu| at step h.
/// O(h^2) plus quadrature error; quadrature runs at 1e-12 so the truncation
/// term dominates for h >= ~1e-4.
pub fn check_derivative_identity(profile: &WarpingProfile, nu: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument("h must be positive".into()));
    }
    let tol = 1e-12;
    let phi_hi = phi(profile, nu + h, tol)?;
    let phi_lo = phi(profile, nu - h, tol)?;
    let l_hi = geodesic_length(profile, nu + h, tol)?;
    let l_lo = geodesic_length(profile, nu - h, tol)?;
    let dl = (l_hi.value - l_lo.value) / (2.0 * h);
    let dphi = (phi_hi.value - phi_lo.value) / (2.0 * h);
    Ok((dl - nu * dphi).abs())
}

/// A boundary value of phi obtained as a one-sided limit.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryValue {
    pub value: f64,
    pub est_error: f64,
    /// Always true: the boundary is outside the open domain of phi.
    pub extrapolated: bool,
    /// Small-oscillation asymptotic pi / (m(0) sqrt(K(0))), when K(0) > 0.
    pub asymptotic: Option<f64>,
    /// Set when the sequence grows instead of settling (inf-m side with a
    /// degenerate turning height).
    pub diverging: bool,
}

/// phi at nu = m(0), evaluated as a limit: Richardson extrapolation over
/// nu_k = m0 (1 - eps 2^-k), k = 0..4, eps = 1e-3. The expansion of phi in
/// delta = m0 - nu is analytic, so the classical ratio-2 table applies.
pub fn phi_at_equator_limit(profile: &WarpingProfile, tol: f64) -> Result<BoundaryValue> {
    let m0 = profile.m(0.0);
    let eps = 1e-3;
    // Sampling this close to the boundary is roundoff-limited near the
    // turning height; tighter tolerances would only chase noise.
    let tol = tol.max(1e-9);
    let mut vals = [0.0f64; 5];
    let mut errs = 0.0;
    for (k, v) in vals.iter_mut().enumerate() {
        let nu = m0 * (1.0 - eps * 0.5f64.powi(k as i32));
        let e = phi(profile, nu, tol)?;
        *v = e.value;
        errs += e.est_error;
    }
    let mut table = vals.to_vec();
    let mut last_correction = 0.0;
    for j in 1..5 {
        let factor = 2f64.powi(j as i32) - 1.0;
        for i in (j..5).rev() {
            let corr = (table[i] - table[i - 1]) / factor;
            table[i] += corr;
            if i == 4 {
                last_correction = corr.abs();
            }
        }
    }
    let k0 = curvature(profile, 0.0)?;
    let asymptotic = if k0 > 0.0 {
        Some(std::f64::consts::PI / (m0 * k0.sqrt()))
    } else {
        None
    };
    Ok(BoundaryValue {
        value: table[4],
        est_error: last_correction + errs,
        extrapolated: true,
        asymptotic,
        diverging: false,
    })
}

/// One-sided behavior of phi as nu approaches inf m from above, sampled at
/// inf_m + delta * {4, 2, 1} with delta = 1e-6 (m0 - inf_m). With a finite t0
/// the turning height degenerates (m'(t0) = 0) and phi grows without bound;
/// the result is then flagged `diverging` and `value` holds the innermost
/// sample as a lower bound.
pub fn phi_at_inf_m_limit(
    profile: &WarpingProfile,
    inf_m: f64,
    tol: f64,
) -> Result<BoundaryValue> {
    let m0 = profile.m(0.0);
    if !(inf_m < m0) {
        return Err(Error::InvalidArgument(
            "inf_m must be below m(0) for a one-sided limit".into(),
        ));
    }
    let delta = 1e-6 * (m0 - inf_m);
    let mut vals = [0.0f64; 3];
    let mut errs = 0.0;
    for (i, mult) in [4.0, 2.0, 1.0].iter().enumerate() {
        let e = phi(profile, inf_m + delta * mult, tol)?;
        vals[i] = e.value;
        errs += e.est_error;
    }
    let d1 = vals[1] - vals[0];
    let d2 = vals[2] - vals[1];
    // A settling sequence contracts; phi diverging toward inf m does not.
    let diverging = !(d2.abs() < 0.75 * d1.abs());
    let (value, est_error) = if diverging {
        (vals[2], f64::INFINITY)
    } else {
        // geometric tail bound
        let q = (d2 / d1).abs().min(0.75);
        (vals[2] + d2 * q / (1.0 - q), d2.abs() * q / (1.0 - q) + errs)
    };
    Ok(BoundaryValue {
        value,
        est_error,
        extrapolated: true,
        asymptotic: None,
        diverging,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct PhiEntry {
    pub nu: f64,
    pub phi: f64,
    pub l: f64,
    pub est_err_phi: f64,
    pub est_err_l: f64,
}

/// Tabulated phi and l on a uniform Clairaut grid.
#[derive(Debug, Clone)]
pub struct PhiTable {
    pub nu_grid: Vec<f64>,
    pub entries: Vec<Option<PhiEntry>>,
    /// Any entry failed to evaluate.
    pub partial: bool,
    /// phi nonincreasing along the grid within per-entry error bars.
    pub phi_nonincreasing: bool,
    /// l strictly decreasing wherever phi is strictly decreasing beyond the
    /// error bars (l' = nu phi').
    pub l_consistent: bool,
}

pub fn build_phi_table(
    profile: &WarpingProfile,
    nu_min: f64,
    nu_max: f64,
    n: usize,
    tol: f64,
) -> Result<PhiTable> {
    if n < 2 {
        return Err(Error::InvalidArgument("table needs n >= 2".into()));
    }
    if !(nu_min < nu_max) {
        return Err(Error::InvalidArgument(format!(
            "need nu_min < nu_max, got [{nu_min}, {nu_max}]"
        )));
    }
    // Endpoints must lie in the open domain; interior entries soft-fail.
    xi(profile, nu_min)?;
    xi(profile, nu_max)?;

    let mut nu_grid = Vec::with_capacity(n);
    let mut entries = Vec::with_capacity(n);
    for i in 0..n {
        let nu = nu_min + (nu_max - nu_min) * i as f64 / (n - 1) as f64;
        nu_grid.push(nu);
        let entry = (|| -> Result<PhiEntry> {
            let p = phi(profile, nu, tol)?;
            let l = geodesic_length(profile, nu, tol)?;
            Ok(PhiEntry {
                nu,
                phi: p.value,
                l: l.value,
                est_err_phi: p.est_error,
                est_err_l: l.est_error,
            })
        })();
        entries.push(entry.ok());
    }
    let partial = entries.iter().any(|e| e.is_none());

    let mut phi_nonincreasing = true;
    let mut l_consistent = true;
    for pair in entries.windows(2) {
        if let (Some(a), Some(b)) = (&pair[0], &pair[1]) {
            let slack = a.est_err_phi + b.est_err_phi;
            if b.phi > a.phi + slack {
                phi_nonincreasing = false;
            }
            if a.phi - b.phi > slack && !(b.l < a.l) {
                l_consistent = false;
            }
        }
    }
    Ok(PhiTable {
        nu_grid,
        entries,
        partial,
        phi_nonincreasing,
        l_consistent,
    })
}

impl PhiTable {
    /// CSV with one row per successful entry.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("nu,phi,l,est_err_phi,est_err_l\n");
        for e in self.entries.iter().flatten() {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                g17(e.nu),
                g17(e.phi),
                g17(e.l),
                g17(e.est_err_phi),
                g17(e.est_err_l)
            ));
        }
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<String> = self
            .entries
            .iter()
            .map(|e| match e {
                Some(e) => format!(
                    "{{\"nu\":{},\"phi\":{},\"l\":{},\"est_err_phi\":{},\"est_err_l\":{}}}",
                    json_f64(e.nu),
                    json_f64(e.phi),
                    json_f64(e.l),
                    json_f64(e.est_err_phi),
                    json_f64(e.est_err_l)
                ),
                None => "null".to_string(),
            })
            .collect();
        format!(
            "{{\"rows\":[{}],\"partial\":{},\"phi_nonincreasing\":{},\"l_consistent\":{}}}",
            rows.join(","),
            self.partial,
            self.phi_nonincreasing,
            self.l_consistent
        )
    }
}
