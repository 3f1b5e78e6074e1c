//! Cross-checks between the closed-form quadrature route and the independent
//! geodesic-shooting route.
//!
//! The shooting oracle was implemented and frozen first; the values below are
//! its output (12 significant digits). The quadrature results must land on
//! the same numbers through a completely different code path: turning-height
//! root finding plus singularity-removing substitution versus RK4 integration
//! with event bisection.

use cutcyl::geodesics::{
    clairaut_constant, equator_return, integrate, jacobi_first_zero, return_point,
};
use cutcyl::profile::{analyze, xi, WarpingProfile};
use cutcyl::quadrature::{geodesic_length, phi};

/// (nu, phi(nu), l(nu)) frozen from the shooting oracle.
const GAUSS_TABLE: [(f64, f64, f64); 3] = [
    (0.3, 3.570719595866, 2.915338749830),
    (0.5, 2.795321250443, 2.618172811423),
    (0.7, 2.464200675275, 2.423273944245),
];

const SECH_TABLE: [(f64, f64, f64); 3] = [
    (0.3, 7.309850115946, 5.255546664169),
    (0.5, 4.844224110273, 4.313031294999),
    (0.7, 3.844549272479, 3.725281604665),
];

/// First return to the equator: theta advance and arclength from the
/// integrator, against the frozen values and the quadrature.
fn check_profile(profile: &WarpingProfile, table: &[(f64, f64, f64)]) {
    for &(nu, phi_frozen, l_frozen) in table {
        // the shooting oracle must reproduce its frozen output
        let arr = equator_return(profile, nu, 1e-3, 12.0).unwrap();
        assert!(
            (arr.delta_theta - phi_frozen).abs() < 1e-9,
            "shooting delta-theta {} vs frozen {phi_frozen}",
            arr.delta_theta
        );
        assert!(
            (arr.arclength - l_frozen).abs() < 1e-9,
            "shooting arclength {} vs frozen {l_frozen}",
            arr.arclength
        );
        // and the quadrature must agree with the oracle
        let p = phi(profile, nu, 1e-10).unwrap();
        let l = geodesic_length(profile, nu, 1e-10).unwrap();
        assert!((p.value - phi_frozen).abs() < 1e-6, "phi {}", p.value);
        assert!((l.value - l_frozen).abs() < 1e-6, "l {}", l.value);
    }
}

#[test]
fn gauss_quadrature_matches_shooting() {
    check_profile(&WarpingProfile::gauss(1.0), &GAUSS_TABLE);
}

#[test]
fn sech_quadrature_matches_shooting() {
    check_profile(&WarpingProfile::sech_profile(1.0), &SECH_TABLE);
}

#[test]
fn turning_height_matches_closed_form() {
    // xi(nu) = sqrt(-ln nu) for the gauss profile; the recorded tangency of
    // the integrated trace must sit on that parallel.
    let p = WarpingProfile::gauss(1.0);
    for nu in [0.3, 0.5, 0.7] {
        let expect = (-(nu as f64).ln()).sqrt();
        assert!((xi(&p, nu).unwrap() - expect).abs() < 1e-12);
        let trace = integrate(&p, (0.0, 0.0), nu, 1.0, 6.0, 1e-3).unwrap();
        assert!((trace.turning_points[0].t - expect).abs() < 1e-9);
    }
}

#[test]
fn re_intersection_lengths_match_quadrature() {
    // both branches from (-u, 0) arrive at (u, phi(nu)) after l(nu)
    let p = WarpingProfile::gauss(1.0);
    let u = 0.3;
    for nu in [0.3, 0.5, 0.7] {
        let r = return_point(&p, u, nu, 1e-3, 30.0).unwrap();
        let pq = phi(&p, nu, 1e-10).unwrap().value;
        let lq = geodesic_length(&p, nu, 1e-10).unwrap().value;
        assert!((r.alpha.delta_theta - r.beta.delta_theta).abs() < 1e-7);
        assert!((r.alpha.delta_theta - pq).abs() < 1e-6);
        assert!((r.alpha.arclength - lq).abs() < 1e-6);
        assert!((r.beta.arclength - lq).abs() < 1e-6);
    }
}

#[test]
fn return_point_limit_matches_equator_case() {
    // u -> 0 degenerates to the Lemma-3.1 equator return
    let p = WarpingProfile::gauss(1.0);
    let nu = 0.5;
    let r = return_point(&p, 1e-6, nu, 1e-3, 30.0).unwrap();
    let pq = phi(&p, nu, 1e-10).unwrap().value;
    assert!((r.alpha.delta_theta - pq).abs() < 1e-5);
}

#[test]
fn clairaut_example_value() {
    let p = WarpingProfile::gauss(1.0);
    let nu = clairaut_constant(&p, -0.3, std::f64::consts::FRAC_PI_3);
    assert!((nu - 0.456965592635614).abs() < 1e-14);
}

#[test]
fn cut_point_never_trails_the_conjugate_point() {
    // along alpha_nu the first Jacobi zero comes no earlier than l(nu) - tol
    let p = WarpingProfile::gauss(1.0);
    let a = analyze(&p, 30.0, 10_000).unwrap();
    assert!(a.hypotheses.main_case());
    let u = 0.3;
    for nu in [0.5, 0.7, 0.85] {
        let lq = geodesic_length(&p, nu, 1e-10).unwrap().value;
        let trace = integrate(&p, (-u, 0.0), nu, -1.0, lq + 2.0, 1e-3).unwrap();
        if let Some(s_conj) = jacobi_first_zero(&p, &trace).unwrap() {
            assert!(
                s_conj >= lq - 1e-4,
                "conjugate point at {s_conj} before cut distance {lq} (nu = {nu})"
            );
        }
    }
}
