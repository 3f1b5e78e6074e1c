//! The cut-locus classifier on M and the per-geodesic cut points on the
//! universal cover.
//!
//! For a base point q = (t_q, 0) on a profile with positive equator curvature,
//! decreasing K and |t_q| < t0, the cut locus is either the opposite meridian
//! alone (phi(m(t_q)) >= pi, or |t_q| >= t0) or the opposite meridian together
//! with the subarc [phi, 2 pi - phi] of the opposite parallel. On a profile
//! with nonpositive curvature everywhere no geodesic has a conjugate point and
//! the answer is always the opposite meridian.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::numfmt::{json_f64, json_opt_f64};
use crate::profile::{ProfileAnalysis, WarpingProfile};
use crate::quadrature::{geodesic_length, phi, phi_at_equator_limit};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutLocusKind {
    MeridianOnly,
    MeridianAndParallelArc,
    /// Universal-cover query with |t_q| >= t0: no cut point at all.
    EmptyOnCover,
}

impl CutLocusKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CutLocusKind::MeridianOnly => "MeridianOnly",
            CutLocusKind::MeridianAndParallelArc => "MeridianAndParallelArc",
            CutLocusKind::EmptyOnCover => "EmptyOnCover",
        }
    }
}

/// The classifier's answer for the base point (t_q, 0).
#[derive(Debug, Clone)]
pub struct CutLocusDescription {
    pub kind: CutLocusKind,
    pub t_q: f64,
    /// Height of the opposite parallel, -t_q; present iff the arc is.
    pub parallel_level: Option<f64>,
    /// [phi(m(t_q)), 2 pi - phi(m(t_q))], symmetric about pi.
    pub theta_arc: Option<(f64, f64)>,
    pub phi_at_q: Option<f64>,
    pub phi_est_error: Option<f64>,
    /// phi(m(t_q)) was taken as the extrapolated equator limit (t_q = 0).
    pub boundary_extrapolated: bool,
}

impl CutLocusDescription {
    pub fn to_json(&self) -> String {
        let arc = match self.theta_arc {
            Some((lo, hi)) => format!("[{},{}]", json_f64(lo), json_f64(hi)),
            None => "null".to_string(),
        };
        format!(
            "{{\"kind\":\"{}\",\"t_q\":{},\"parallel_level\":{},\"theta_arc\":{},\"phi_at_q\":{},\"phi_est_error\":{},\"boundary_extrapolated\":{}}}",
            self.kind.as_str(),
            json_f64(self.t_q),
            json_opt_f64(self.parallel_level),
            arc,
            json_opt_f64(self.phi_at_q),
            json_opt_f64(self.phi_est_error),
            self.boundary_extrapolated
        )
    }

    fn meridian_only(t_q: f64, phi_q: Option<(f64, f64)>, extrapolated: bool) -> Self {
        CutLocusDescription {
            kind: CutLocusKind::MeridianOnly,
            t_q,
            parallel_level: None,
            theta_arc: None,
            phi_at_q: phi_q.map(|(v, _)| v),
            phi_est_error: phi_q.map(|(_, e)| e),
            boundary_extrapolated: extrapolated,
        }
    }

    fn with_arc(t_q: f64, phi_q: f64, err: f64, extrapolated: bool) -> Self {
        CutLocusDescription {
            kind: CutLocusKind::MeridianAndParallelArc,
            t_q,
            parallel_level: Some(-t_q),
            theta_arc: Some((phi_q, 2.0 * PI - phi_q)),
            phi_at_q: Some(phi_q),
            phi_est_error: Some(err),
            boundary_extrapolated: extrapolated,
        }
    }
}

/// The phi-vs-pi dichotomy. Within 2x the numerical error of pi the theorem's
/// two cases cannot be told apart and we refuse to guess.
fn decide(t_q: f64, phi_q: f64, err: f64, extrapolated: bool) -> Result<CutLocusDescription> {
    let band = 2.0 * err;
    if phi_q >= PI + band {
        Ok(CutLocusDescription::meridian_only(
            t_q,
            Some((phi_q, err)),
            extrapolated,
        ))
    } else if phi_q <= PI - band {
        Ok(CutLocusDescription::with_arc(t_q, phi_q, err, extrapolated))
    } else {
        Err(Error::AmbiguousClassification {
            phi: phi_q,
            err,
            candidates: Box::new((
                CutLocusDescription::meridian_only(t_q, Some((phi_q, err)), extrapolated),
                CutLocusDescription::with_arc(t_q, phi_q, err, extrapolated),
            )),
        })
    }
}

/// Classify the cut locus of q = (t_q, 0) on M.
pub fn classify(
    profile: &WarpingProfile,
    analysis: &ProfileAnalysis,
    t_q: f64,
    tol: f64,
) -> Result<CutLocusDescription> {
    let h = &analysis.hypotheses;
    if h.nonpositive_curvature_everywhere && h.even && h.positive {
        // no conjugate points anywhere; the meridian opposite to q is the lot
        return Ok(CutLocusDescription::meridian_only(t_q, None, false));
    }
    if !h.main_case() {
        return Err(Error::UnsupportedProfile);
    }
    if let Some(t0) = analysis.t0 {
        if t_q.abs() >= t0 {
            return Ok(CutLocusDescription::meridian_only(t_q, None, false));
        }
    }
    let nu_q = profile.m(t_q);
    if nu_q >= analysis.m0 {
        // equator base point: phi(m(0)) sits on the domain boundary and is
        // evaluated as the extrapolated limit
        let b = phi_at_equator_limit(profile, tol)?;
        decide(t_q, b.value, b.est_error, true)
    } else {
        let est = phi(profile, nu_q, tol)?;
        decide(t_q, est.value, est.est_error, false)
    }
}

/// A cut point of q = (-u, 0) on the universal cover, reached along the pair
/// alpha_nu / beta_nu.
#[derive(Debug, Clone, Copy)]
pub struct CoverCutPoint {
    /// (u, phi(nu)) in (t, theta) coordinates with theta(q) = 0.
    pub point: (f64, f64),
    /// = l(nu), the common length of the two minimizers.
    pub distance: f64,
    pub phi_est_error: f64,
    pub l_est_error: f64,
    /// nu = m(u): the endpoint of the cut locus ray.
    pub endpoint: bool,
}

/// Cut point (u, phi(nu)) at distance l(nu), for 0 < u < t0 and
/// nu in (inf m, m(u)]. The map nu -> phi(nu) parametrizes the cover cut
/// locus {t = u, theta >= phi(m(u))} monotonically, nu = m(u) giving the
/// endpoint.
pub fn cut_point_on_cover(
    profile: &WarpingProfile,
    analysis: &ProfileAnalysis,
    u: f64,
    nu: f64,
    tol: f64,
) -> Result<CoverCutPoint> {
    if !(u > 0.0) {
        return Err(Error::InvalidArgument("u must be positive".into()));
    }
    if let Some(t0) = analysis.t0 {
        if u >= t0 {
            return Err(Error::InvalidArgument(format!(
                "u = {u} is not below t0 = {t0}"
            )));
        }
    }
    let m_u = profile.m(u);
    if nu > m_u {
        return Err(Error::OutsideCutRange { nu, m_u });
    }
    let p = phi(profile, nu, tol)?;
    let l = geodesic_length(profile, nu, tol)?;
    Ok(CoverCutPoint {
        point: (u, p.value),
        distance: l.value,
        phi_est_error: p.est_error,
        l_est_error: l.est_error,
        endpoint: (nu - m_u).abs() <= 1e-12 * m_u,
    })
}

/// Lemma-5.5 predicate: on the cover, a point with |t_q| >= t0 has empty cut
/// locus. Always false when t0 is infinite or undefined.
pub fn empty_on_cover(analysis: &ProfileAnalysis, t_q: f64) -> bool {
    matches!(analysis.t0, Some(t0) if t_q.abs() >= t0)
}

/// Cover-side description; `Some` only in the empty case.
pub fn cover_description(analysis: &ProfileAnalysis, t_q: f64) -> Option<CutLocusDescription> {
    if empty_on_cover(analysis, t_q) {
        Some(CutLocusDescription {
            kind: CutLocusKind::EmptyOnCover,
            t_q,
            parallel_level: None,
            theta_arc: None,
            phi_at_q: None,
            phi_est_error: None,
            boundary_extrapolated: false,
        })
    } else {
        None
    }
}

/// Distance from (t, theta) to the predicted cut set, in the surface metric
/// linearized at the point (adequate at the oracle's tolerance scales).
/// theta is taken mod 2 pi.
pub fn distance_to_predicted(
    profile: &WarpingProfile,
    desc: &CutLocusDescription,
    t: f64,
    theta: f64,
) -> f64 {
    let two_pi = 2.0 * PI;
    let th = theta.rem_euclid(two_pi);
    let wrap = |a: f64| -> f64 {
        let d = (a % two_pi).abs();
        d.min(two_pi - d)
    };
    let mut best = f64::INFINITY;
    if desc.kind != CutLocusKind::EmptyOnCover {
        best = best.min(profile.m(t) * wrap(th - PI));
    }
    if let (Some(level), Some((lo, hi))) = (desc.parallel_level, desc.theta_arc) {
        let dth = if th < lo {
            lo - th
        } else if th > hi {
            // wrapping below lo is shorter for theta just under 2 pi
            (th - hi).min(two_pi - th + lo)
        } else {
            0.0
        };
        let m_mid = profile.m(0.5 * (t + level));
        best = best.min(((t - level).powi(2) + (m_mid * dth).powi(2)).sqrt());
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::analyze;
    use crate::quadrature::DEFAULT_TOL;

    fn analysis_of(p: &WarpingProfile) -> ProfileAnalysis {
        analyze(p, 30.0, 10_000).unwrap()
    }

    #[test]
    fn hourglass_beyond_t0_is_meridian_only() {
        let p = WarpingProfile::hourglass();
        let a = analysis_of(&p);
        let d = classify(&p, &a, 1.5, DEFAULT_TOL).unwrap();
        assert_eq!(d.kind, CutLocusKind::MeridianOnly);
        assert!(d.theta_arc.is_none());
        let d = classify(&p, &a, -2.5, DEFAULT_TOL).unwrap();
        assert_eq!(d.kind, CutLocusKind::MeridianOnly);
    }

    #[test]
    fn hourglass_inside_t0_has_phi_above_pi() {
        // phi decreases toward its equator limit pi/(m0 sqrt(K0)) = pi, so
        // every interior point classifies as meridian-only via phi >= pi.
        let p = WarpingProfile::hourglass();
        let a = analysis_of(&p);
        let d = classify(&p, &a, -0.5, DEFAULT_TOL).unwrap();
        assert_eq!(d.kind, CutLocusKind::MeridianOnly);
        let phi_q = d.phi_at_q.unwrap();
        assert!(phi_q > PI, "phi = {phi_q}");
    }

    #[test]
    fn catenoid_is_meridian_only_for_any_base() {
        let p = WarpingProfile::catenoid(1.0);
        let a = analysis_of(&p);
        for t_q in [-0.5, 0.0, 2.0] {
            let d = classify(&p, &a, t_q, DEFAULT_TOL).unwrap();
            assert_eq!(d.kind, CutLocusKind::MeridianOnly);
            assert!(d.phi_at_q.is_none());
        }
    }

    #[test]
    fn flat_profile_classifies_via_nonpositive_case() {
        let p = WarpingProfile::flat(1.0);
        let a = analyze(&p, 10.0, 1000).unwrap();
        let d = classify(&p, &a, 0.7, DEFAULT_TOL).unwrap();
        assert_eq!(d.kind, CutLocusKind::MeridianOnly);
    }

    #[test]
    fn gauss_near_equator_gets_the_parallel_arc() {
        let p = WarpingProfile::gauss(1.0);
        let a = analysis_of(&p);
        let d = classify(&p, &a, -0.3, DEFAULT_TOL).unwrap();
        assert_eq!(d.kind, CutLocusKind::MeridianAndParallelArc);
        assert_eq!(d.parallel_level.unwrap(), 0.3);
        let (lo, hi) = d.theta_arc.unwrap();
        let phi_q = d.phi_at_q.unwrap();
        assert_eq!(lo, phi_q);
        // arc symmetric about pi and nonempty
        assert!((0.5 * (lo + hi) - PI).abs() < 1e-12);
        assert!(lo < hi);
        // frozen from the independent shooting oracle
        assert!((phi_q - 2.274029395103982).abs() < 1e-6, "phi_q = {phi_q}");
        assert!(!d.boundary_extrapolated);
    }

    #[test]
    fn gauss_deep_point_is_meridian_only_via_phi() {
        // m(1.2) ~ 0.237 and phi there exceeds pi
        let p = WarpingProfile::gauss(1.0);
        let a = analysis_of(&p);
        let d = classify(&p, &a, -1.2, DEFAULT_TOL).unwrap();
        assert_eq!(d.kind, CutLocusKind::MeridianOnly);
        assert!(d.phi_at_q.unwrap() > PI);
    }

    #[test]
    fn classification_is_mirror_symmetric() {
        let p = WarpingProfile::gauss(1.0);
        let a = analysis_of(&p);
        let d1 = classify(&p, &a, -0.3, DEFAULT_TOL).unwrap();
        let d2 = classify(&p, &a, 0.3, DEFAULT_TOL).unwrap();
        assert_eq!(d1.kind, d2.kind);
        assert_eq!(d1.parallel_level.unwrap(), -d2.parallel_level.unwrap());
        let a1 = d1.theta_arc.unwrap();
        let a2 = d2.theta_arc.unwrap();
        assert!((a1.0 - a2.0).abs() < 1e-12 && (a1.1 - a2.1).abs() < 1e-12);
    }

    #[test]
    fn equator_base_point_is_flagged_extrapolated() {
        let p = WarpingProfile::gauss(1.0);
        let a = analysis_of(&p);
        let d = classify(&p, &a, 0.0, DEFAULT_TOL).unwrap();
        assert!(d.boundary_extrapolated);
        assert_eq!(d.kind, CutLocusKind::MeridianAndParallelArc);
        // limit value pi/sqrt(2)
        assert!((d.phi_at_q.unwrap() - PI / 2f64.sqrt()).abs() < 1e-4);
        assert_eq!(d.parallel_level.unwrap(), 0.0);
    }

    #[test]
    fn unsupported_profile_is_rejected() {
        // evenness violated: neither the main class nor the Remark class
        let p = WarpingProfile::custom(
            "shifted",
            |t| 1.0 + 0.1 * (t - 0.2) * (t - 0.2),
            |t| 0.2 * (t - 0.2),
            |_| 0.2,
        );
        // analyze() itself rejects it; classification cannot be reached with
        // a valid analysis, so build one from a valid profile and check the
        // flag path instead.
        assert!(analyze(&p, 5.0, 1000).is_err());
    }

    #[test]
    fn ambiguous_band_refuses_to_decide() {
        match decide(0.2, PI + 1e-12, 1e-9, false) {
            Err(Error::AmbiguousClassification { candidates, .. }) => {
                assert_eq!(candidates.0.kind, CutLocusKind::MeridianOnly);
                assert_eq!(candidates.1.kind, CutLocusKind::MeridianAndParallelArc);
            }
            other => panic!("expected ambiguity, got {other:?}"),
        }
        assert!(decide(0.2, PI + 1e-6, 1e-9, false).is_ok());
    }

    #[test]
    fn cover_cut_point_endpoint_and_sweep() {
        let p = WarpingProfile::gauss(1.0);
        let a = analysis_of(&p);
        let u = 0.3;
        let m_u = p.m(u);
        let end = cut_point_on_cover(&p, &a, u, m_u, DEFAULT_TOL).unwrap();
        assert!(end.endpoint);
        assert_eq!(end.point.0, u);
        // phi(nu) sweeps the ray monotonically as nu decreases
        let mut prev = end.point.1;
        for nu in [0.85, 0.7, 0.5, 0.3] {
            let c = cut_point_on_cover(&p, &a, u, nu, DEFAULT_TOL).unwrap();
            assert!(!c.endpoint);
            assert!(c.point.1 > prev, "phi({nu}) = {} after {prev}", c.point.1);
            assert!(c.distance > 0.0);
            prev = c.point.1;
        }
        assert!(matches!(
            cut_point_on_cover(&p, &a, u, m_u * 1.01, DEFAULT_TOL),
            Err(Error::OutsideCutRange { .. })
        ));
    }

    #[test]
    fn empty_on_cover_examples() {
        let hg = WarpingProfile::hourglass();
        let a = analysis_of(&hg);
        assert!(empty_on_cover(&a, -2.0));
        // t0 itself is located to 1e-12; stay just clear of the knife edge
        assert!(empty_on_cover(&a, 1.0 + 1e-9));
        assert!(!empty_on_cover(&a, 0.0));
        assert!(!empty_on_cover(&a, -0.99));
        assert_eq!(
            cover_description(&a, -2.0).unwrap().kind,
            CutLocusKind::EmptyOnCover
        );
        assert!(cover_description(&a, 0.5).is_none());

        let g = WarpingProfile::gauss(1.0);
        let ag = analysis_of(&g);
        for t_q in [0.0, 1.0, 25.0] {
            assert!(!empty_on_cover(&ag, t_q));
        }
    }

    #[test]
    fn cover_projection_reproduces_the_arc() {
        // Projecting the cover ray {t = u, theta >= phi(m(u))} to M and taking
        // the union with its mirror must give [phi_q, 2 pi - phi_q] on the
        // opposite parallel: endpoints match the classifier's arc.
        let p = WarpingProfile::gauss(1.0);
        let a = analysis_of(&p);
        let d = classify(&p, &a, -0.3, DEFAULT_TOL).unwrap();
        let (lo, hi) = d.theta_arc.unwrap();
        let end = cut_point_on_cover(&p, &a, 0.3, p.m(0.3), DEFAULT_TOL).unwrap();
        assert!((end.point.1 - lo).abs() < 1e-9);
        assert!((2.0 * PI - end.point.1 - hi).abs() < 1e-9);
    }

    #[test]
    fn json_shape() {
        let p = WarpingProfile::gauss(1.0);
        let a = analysis_of(&p);
        let d = classify(&p, &a, -0.3, DEFAULT_TOL).unwrap();
        let js = d.to_json();
        assert!(js.contains("\"kind\":\"MeridianAndParallelArc\""));
        assert!(js.contains("\"theta_arc\":["));
        assert!(js.contains("\"boundary_extrapolated\":false"));
    }

    #[test]
    fn distance_to_predicted_set_basics() {
        let p = WarpingProfile::gauss(1.0);
        let a = analysis_of(&p);
        let d = classify(&p, &a, -0.3, DEFAULT_TOL).unwrap();
        // a point on the meridian
        assert!(distance_to_predicted(&p, &d, 1.0, PI) < 1e-12);
        // a point on the arc
        let (lo, _) = d.theta_arc.unwrap();
        assert!(distance_to_predicted(&p, &d, 0.3, lo + 0.1) < 1e-12);
        // just below the arc onset: distance ~ m(0.3) * gap
        let gap = 0.05;
        let dd = distance_to_predicted(&p, &d, 0.3, lo - gap);
        assert!((dd - p.m(0.3) * gap).abs() < 0.3 * p.m(0.3) * gap);
    }
}
