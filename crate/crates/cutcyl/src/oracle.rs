//! Brute-force verification of the cut-locus classifier.
//!
//! A dense fan of geodesics is shot from the base point and cut points are
//! reconstructed purely from trajectory data: a point of a trace stops being
//! minimal when some other trace certifiably reaches it first. The oracle
//! never touches the closed-form half-period integrals, so agreement with the
//! classifier is a genuine cross-check of the formulas against the metric.
//!
//! Cut detection sweeps spatial hash buckets of decimated trace samples. The
//! non-minimality certificate is triangle-corrected: a competitor sample at
//! distance d with arclength s_j beats s_i only when s_j + d < s_i - eps_len,
//! which stays sound for samples that are merely near (not at) the query
//! point. Equal-length detection additionally requires clearly distinct
//! arrival directions, since neighboring fan traces pass arbitrarily close to
//! each other with nearly equal arclength everywhere.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::cutlocus::{distance_to_predicted, CutLocusDescription, CutLocusKind};
use crate::error::{Error, Result};
use crate::geodesics::integrate_sampled;
use crate::numfmt::{json_f64, json_opt_f64, json_str};
use crate::profile::WarpingProfile;
use crate::quadrature::geodesic_length;

const TWO_PI: f64 = 2.0 * PI;

/// Fan construction parameters.
#[derive(Debug, Clone, Copy)]
pub struct FanParams {
    pub n_geodesics: usize,
    pub s_max: f64,
    pub step: f64,
    /// Arclength spacing of retained samples.
    pub decimate: f64,
}

impl Default for FanParams {
    fn default() -> Self {
        FanParams {
            n_geodesics: 2000,
            s_max: 12.0,
            step: 1e-3,
            // half the spatial matching radius, so sample pairs near a
            // crossing cannot all fall outside the match ball
            decimate: 5e-3,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FanSample {
    pub s: f64,
    pub t: f64,
    pub theta: f64,
    pub dt_ds: f64,
}

#[derive(Debug, Clone)]
pub struct FanTrace {
    pub eta: f64,
    pub nu: f64,
    pub sign0: f64,
    pub samples: Vec<FanSample>,
}

/// A fan of geodesics from a single base point, decimated for the sweep.
#[derive(Debug, Clone)]
pub struct Fan {
    pub base: (f64, f64),
    pub params: FanParams,
    pub traces: Vec<FanTrace>,
}

/// Shoot `n_geodesics` geodesics with uniformly spaced initial angles
/// eta in (-pi, pi] from q. Multiples of 4 include both meridian and both
/// parallel-tangent directions exactly.
pub fn build_fan(profile: &WarpingProfile, q: (f64, f64), params: &FanParams) -> Result<Fan> {
    if params.n_geodesics < 4 {
        return Err(Error::InvalidArgument(
            "a fan needs at least 4 geodesics".into(),
        ));
    }
    if !(params.s_max > 0.0) || !(params.step > 0.0) {
        return Err(Error::InvalidArgument("s_max and step must be positive".into()));
    }
    let n = params.n_geodesics;
    let m_q = profile.m(q.0);
    let stride = (params.decimate / params.step).round().max(1.0) as usize;
    let mut traces = Vec::with_capacity(n);
    for i in 0..n {
        let eta = -PI + TWO_PI * (i as f64 + 1.0) / n as f64;
        let mut nu = m_q * eta.cos();
        if nu.abs() < 1e-15 * m_q {
            nu = 0.0; // exact meridian
        }
        if nu.abs() > m_q {
            nu = nu.signum() * m_q;
        }
        let sign0 = if eta.sin() >= 0.0 { 1.0 } else { -1.0 };
        let expected = params.s_max / params.decimate + 2.0;
        let mut samples = Vec::with_capacity(expected as usize);
        integrate_sampled(
            profile,
            q,
            nu,
            sign0,
            params.s_max,
            params.step,
            stride,
            |s, t, theta, dt_ds| samples.push(FanSample { s, t, theta, dt_ds }),
        )?;
        traces.push(FanTrace {
            eta,
            nu,
            sign0,
            samples,
        });
    }
    Ok(Fan {
        base: q,
        params: *params,
        traces,
    })
}

/// Detection thresholds for the bucket sweep.
#[derive(Debug, Clone, Copy)]
pub struct CutDetectParams {
    /// Spatial match radius (and hash cell size).
    pub eps_space: f64,
    /// Length slack of the certificates.
    pub eps_len: f64,
    /// Minimum angle between arrival directions for two-minimizer detection.
    pub min_angle: f64,
    /// Ignore arclengths below this (every trace leaves the base point).
    pub dead_zone: f64,
    /// Minimum |s_i - s_j| for self-intersection pairs.
    pub self_gap: f64,
    /// Reduce theta mod 2 pi (on-M comparisons); false keeps the cover.
    pub compactify: bool,
}

impl Default for CutDetectParams {
    fn default() -> Self {
        CutDetectParams {
            eps_space: 1e-2,
            eps_len: 1e-3,
            min_angle: 0.05,
            dead_zone: 0.2,
            self_gap: 0.1,
            compactify: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutKind {
    /// Another trace reaches the point strictly shorter.
    ShorterPath,
    /// A distinct trace arrives with equal length: a genuine two-minimizer
    /// point.
    TwoMinimizer,
}

impl CutKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CutKind::ShorterPath => "shorter_path",
            CutKind::TwoMinimizer => "two_minimizer",
        }
    }
}

/// First arclength at which a trace stops being minimal, with the balanced
/// location estimate.
#[derive(Debug, Clone, Copy)]
pub struct EmpiricalCutPoint {
    pub trace: usize,
    pub nu: f64,
    pub s_cut: f64,
    pub t: f64,
    pub theta: f64,
    pub kind: CutKind,
    pub partner: usize,
}

fn wrap_theta(theta: f64) -> f64 {
    theta.rem_euclid(TWO_PI)
}

fn theta_gap(a: f64, b: f64, compactify: bool) -> f64 {
    if compactify {
        let d = (a - b).rem_euclid(TWO_PI);
        d.min(TWO_PI - d)
    } else {
        (a - b).abs()
    }
}

/// Chart distance between nearby points, exact to O(d^2) at these scales.
fn local_dist(profile: &WarpingProfile, a: &FanSample, b: &FanSample, compactify: bool) -> f64 {
    let dth = theta_gap(a.theta, b.theta, compactify);
    let m_mid = 0.5 * (profile.m(a.t) + profile.m(b.t));
    let dt = a.t - b.t;
    (dt * dt + m_mid * m_mid * dth * dth).sqrt()
}

/// Angle between the unit tangents of two samples.
fn arrival_angle(profile: &WarpingProfile, a: &FanSample, nu_a: f64, b: &FanSample, nu_b: f64) -> f64 {
    let ca = nu_a / profile.m(a.t);
    let cb = nu_b / profile.m(b.t);
    let dot = (a.dt_ds * b.dt_ds + ca * cb).clamp(-1.0, 1.0);
    dot.acos()
}

struct BucketIndex {
    cell: f64,
    n_theta: i32,
    compactify: bool,
    /// (it, itheta, trace, sample) sorted lexicographically.
    entries: Vec<(i32, i32, u32, u32)>,
}

impl BucketIndex {
    fn build(fan: &Fan, cell: f64, compactify: bool) -> Self {
        let n_theta = (TWO_PI / cell).ceil() as i32;
        let mut entries = Vec::new();
        for (i, tr) in fan.traces.iter().enumerate() {
            for (k, sm) in tr.samples.iter().enumerate() {
                let (it, ith) = Self::key(cell, n_theta, compactify, sm.t, sm.theta);
                entries.push((it, ith, i as u32, k as u32));
            }
        }
        entries.sort_unstable();
        BucketIndex {
            cell,
            n_theta,
            compactify,
            entries,
        }
    }

    fn key(cell: f64, n_theta: i32, compactify: bool, t: f64, theta: f64) -> (i32, i32) {
        let th = if compactify { wrap_theta(theta) } else { theta };
        let mut ith = (th / cell).floor() as i32;
        if compactify {
            ith = ith.rem_euclid(n_theta);
        }
        ((t / cell).floor() as i32, ith)
    }

    fn cell_range(&self, it: i32, ith: i32) -> &[(i32, i32, u32, u32)] {
        let lo = self.entries.partition_point(|e| (e.0, e.1) < (it, ith));
        let hi = self.entries.partition_point(|e| (e.0, e.1) <= (it, ith));
        &self.entries[lo..hi]
    }

    /// Cells within the match ball. The ball radius is metric, but theta
    /// cells have metric width m(t) * cell, so the theta span widens where
    /// the tube narrows (up to the whole circle).
    fn neighbors(&self, t: f64, theta: f64, m_t: f64) -> impl Iterator<Item = (i32, i32)> + '_ {
        let (it, ith) = Self::key(self.cell, self.n_theta, self.compactify, t, theta);
        let n_theta = self.n_theta;
        let compactify = self.compactify;
        let inv = 1.0 / m_t;
        let mut span = if inv.is_finite() && inv < 1e9 {
            inv.ceil() as i64 + 1
        } else {
            n_theta as i64
        };
        if compactify && 2 * span + 1 >= n_theta as i64 {
            span = (n_theta as i64 - 1) / 2;
        }
        let span = span.min(i32::MAX as i64 / 4) as i32;
        (-1..=1).flat_map(move |dt| {
            (-span..=span).map(move |dth| {
                let mut jth = ith + dth;
                if compactify {
                    jth = jth.rem_euclid(n_theta);
                }
                (it + dt, jth)
            })
        })
    }
}

/// Per-trace first cut events: `None` for rays (no event before s_max).
///
/// Two certificates fire a cut, both sound by the triangle inequality (the
/// chart-metric error at these scales is under 1e-5, far below eps_len):
///
/// * strictly shorter: s_j + d < s_i - eps_len, any partner. Cannot hold
///   while the trace still minimizes.
/// * equal length: |s_j + d - s_i| <= eps_len for a distinct trace arriving
///   with a clearly different direction. This is what detects symmetric
///   meetings (mirror pairs tie at theta = pi with cert = +d, which the
///   strict rule never sees). The angle gate suppresses neighboring fan
///   traces, which shadow each other with near-equal arclength everywhere;
///   the proximity gate d <= s/4 suppresses the base-point neighborhood.
///   An equal-length fire must additionally be confirmed by the same partner
///   turning strictly shorter within a short lookahead: near a focal zone the
///   certificate can hover inside the window long before the actual crossing,
///   and only the sign change separates the two.
///
/// The balanced estimate (s_i + s_j + d)/2 locates the equidistance crossing.
pub fn empirical_cut_points(
    profile: &WarpingProfile,
    fan: &Fan,
    det: &CutDetectParams,
) -> Result<Vec<Option<EmpiricalCutPoint>>> {
    // The drop achievable inside the match ball scales as eps_space psi^2 / 8
    // for a crossing angle psi, so the threshold bounds how shallow a
    // detectable crossing may be. 2e-5 admits psi >= ~0.13 while staying two
    // orders of magnitude above the chart-metric error.
    const CONFIRM_LOOKAHEAD: f64 = 0.15;
    const CONFIRM_DROP: f64 = 2e-5;
    let resolution = fan.params.decimate.max(fan.params.step);
    if det.eps_space < resolution {
        return Err(Error::Resolution {
            epsilon: det.eps_space,
            resolution,
        });
    }
    let index = BucketIndex::build(fan, det.eps_space, det.compactify);

    // First point within (s_from, s_from + lookahead] where `partner`
    // certifies a strictly shorter route to trace i (threshold just above the
    // chart-metric error, so this cannot happen before the cut). Returns the
    // balanced location estimate of that transition, which pins the genuine
    // equidistance crossing; the equal-length window alone would smear it.
    let confirm_and_locate = |i: usize, k_from: usize, partner: usize| -> Option<f64> {
        let tr = &fan.traces[i];
        let s_from = tr.samples[k_from].s;
        for sm in &tr.samples[k_from..] {
            if sm.s > s_from + CONFIRM_LOOKAHEAD {
                break;
            }
            let mut best: Option<f64> = None;
            for (it, ith) in index.neighbors(sm.t, sm.theta, profile.m(sm.t)) {
                for &(_, _, j, kj) in index.cell_range(it, ith) {
                    if j as usize != partner {
                        continue;
                    }
                    let other = &fan.traces[partner].samples[kj as usize];
                    if partner == i && (sm.s - other.s).abs() < det.self_gap {
                        continue;
                    }
                    let d = local_dist(profile, sm, other, det.compactify);
                    if d <= det.eps_space && other.s + d - sm.s < -CONFIRM_DROP {
                        let s_est = (0.5 * (sm.s + other.s + d)).min(sm.s);
                        best = Some(best.map_or(s_est, |b: f64| b.min(s_est)));
                    }
                }
            }
            if best.is_some() {
                return best;
            }
        }
        None
    };

    let mut out = Vec::with_capacity(fan.traces.len());
    for (i, tr) in fan.traces.iter().enumerate() {
        let mut found: Option<EmpiricalCutPoint> = None;
        'walk: for (k, sm) in tr.samples.iter().enumerate() {
            if sm.s < det.dead_zone {
                continue;
            }
            // best candidates at this sample, by (s_est, partner)
            let mut best_strict: Option<(f64, usize)> = None;
            let mut best_equal: Option<(f64, usize)> = None;
            for (it, ith) in index.neighbors(sm.t, sm.theta, profile.m(sm.t)) {
                for &(_, _, j, kj) in index.cell_range(it, ith) {
                    let j = j as usize;
                    let other = &fan.traces[j].samples[kj as usize];
                    if j == i && (sm.s - other.s).abs() < det.self_gap {
                        continue;
                    }
                    let d = local_dist(profile, sm, other, det.compactify);
                    if d > det.eps_space {
                        continue;
                    }
                    let cert = other.s + d - sm.s;
                    let s_est = (0.5 * (sm.s + other.s + d)).min(sm.s);
                    if cert < -det.eps_len {
                        if best_strict.map_or(true, |b| (s_est, j) < b) {
                            best_strict = Some((s_est, j));
                        }
                    } else if cert.abs() <= det.eps_len
                        && j != i
                        && d <= 0.25 * sm.s
                        && arrival_angle(profile, sm, tr.nu, other, fan.traces[j].nu)
                            >= det.min_angle
                        && best_equal.map_or(true, |b| (s_est, j) < b)
                    {
                        best_equal = Some((s_est, j));
                    }
                }
            }
            let confirm = |e: (f64, usize)| -> Option<((f64, usize), CutKind)> {
                // report the sound transition point, not the smeared
                // equal-length sample
                confirm_and_locate(i, k, e.1).map(|s_at_dip| ((s_at_dip, e.1), CutKind::TwoMinimizer))
            };
            let fired = match (best_strict, best_equal) {
                (None, None) => None,
                (Some(s), None) => Some((s, CutKind::ShorterPath)),
                (None, Some(e)) => confirm(e),
                (Some(s), Some(e)) => {
                    if e < s {
                        confirm(e).or(Some((s, CutKind::ShorterPath)))
                    } else {
                        Some((s, CutKind::ShorterPath))
                    }
                }
            };
            if let Some(((s_est, partner), kind)) = fired {
                let (t, theta) = interpolate(tr, s_est);
                found = Some(EmpiricalCutPoint {
                    trace: i,
                    nu: tr.nu,
                    s_cut: s_est,
                    t,
                    theta,
                    kind,
                    partner,
                });
                break 'walk;
            }
        }
        out.push(found);
    }
    Ok(out)
}

fn interpolate(tr: &FanTrace, s: f64) -> (f64, f64) {
    let samples = &tr.samples;
    let k = samples.partition_point(|sm| sm.s <= s);
    if k == 0 {
        return (samples[0].t, samples[0].theta);
    }
    if k >= samples.len() {
        let last = samples.last().unwrap();
        return (last.t, last.theta);
    }
    let a = &samples[k - 1];
    let b = &samples[k];
    let w = if b.s > a.s { (s - a.s) / (b.s - a.s) } else { 0.0 };
    (a.t + w * (b.t - a.t), a.theta + w * (b.theta - a.theta))
}

/// Empirical distances on a (t, theta) lattice: minimum fan arclength into
/// each cell, with the number of traces achieving the minimum within eps_len.
#[derive(Debug, Clone)]
pub struct DistanceField {
    pub base: (f64, f64),
    pub cell: f64,
    pub eps_len: f64,
    pub compactify: bool,
    pub cells: BTreeMap<(i32, i32), DistCell>,
}

#[derive(Debug, Clone, Copy)]
pub struct DistCell {
    pub dist: f64,
    pub argmin_trace: u32,
    pub argmin_count: u32,
}

pub fn build_distance_field(
    fan: &Fan,
    cell: f64,
    eps_len: f64,
    compactify: bool,
) -> DistanceField {
    let n_theta = (TWO_PI / cell).ceil() as i32;
    // per (cell, trace) minimum arrival arclength
    let mut per_trace: BTreeMap<((i32, i32), u32), f64> = BTreeMap::new();
    for (i, tr) in fan.traces.iter().enumerate() {
        for sm in &tr.samples {
            let key = BucketIndex::key(cell, n_theta, compactify, sm.t, sm.theta);
            per_trace
                .entry((key, i as u32))
                .and_modify(|s| *s = s.min(sm.s))
                .or_insert(sm.s);
        }
    }
    let mut cells: BTreeMap<(i32, i32), DistCell> = BTreeMap::new();
    for (&(key, trace), &s) in &per_trace {
        cells
            .entry(key)
            .and_modify(|c| {
                if s < c.dist {
                    c.dist = s;
                    c.argmin_trace = trace;
                }
            })
            .or_insert(DistCell {
                dist: s,
                argmin_trace: trace,
                argmin_count: 0,
            });
    }
    for (&(key, _), &s) in &per_trace {
        let c = cells.get_mut(&key).unwrap();
        if s <= c.dist + eps_len {
            c.argmin_count += 1;
        }
    }
    DistanceField {
        base: fan.base,
        cell,
        eps_len,
        compactify,
        cells,
    }
}

impl DistanceField {
    /// Cells violating dist >= |t_cell - t_q| beyond lattice slack.
    pub fn lower_bound_violations(&self) -> usize {
        let mut bad = 0;
        for (&(it, _), c) in &self.cells {
            let t_center = (it as f64 + 0.5) * self.cell;
            let bound = (t_center - self.base.0).abs() - self.cell;
            if c.dist < bound - 1e-12 {
                bad += 1;
            }
        }
        bad
    }

    /// Along each parallel row, distance must not decrease with theta-offset
    /// from the base meridian (cover-side sweep), up to one cell of slack.
    pub fn parallel_monotonicity_violations(&self) -> usize {
        let mut bad = 0;
        let mut rows: BTreeMap<i32, Vec<(i32, f64)>> = BTreeMap::new();
        for (&(it, ith), c) in &self.cells {
            rows.entry(it).or_default().push((ith, c.dist));
        }
        let base_ith = (self.base.1 / self.cell).floor() as i32;
        for (_, row) in rows {
            let mut fwd: Vec<(i32, f64)> = row
                .iter()
                .copied()
                .filter(|(ith, _)| *ith >= base_ith)
                .collect();
            fwd.sort_unstable_by_key(|(ith, _)| *ith);
            let mut prev = f64::NEG_INFINITY;
            for (_, d) in &fwd {
                if *d < prev - 2.0 * self.cell {
                    bad += 1;
                }
                prev = prev.max(*d);
            }
            let mut back: Vec<(i32, f64)> = row
                .iter()
                .copied()
                .filter(|(ith, _)| *ith <= base_ith)
                .collect();
            back.sort_unstable_by_key(|(ith, _)| std::cmp::Reverse(*ith));
            let mut prev = f64::NEG_INFINITY;
            for (_, d) in &back {
                if *d < prev - 2.0 * self.cell {
                    bad += 1;
                }
                prev = prev.max(*d);
            }
        }
        bad
    }
}

/// One trace's line in the verification report.
#[derive(Debug, Clone)]
pub struct TraceVerdict {
    pub trace: usize,
    pub nu: f64,
    pub s_cut: Option<f64>,
    pub point: Option<(f64, f64)>,
    pub kind: Option<CutKind>,
    /// l(|nu|) when the prediction pins this trace's cut distance.
    pub predicted_distance: Option<f64>,
    pub deviation: Option<f64>,
}

/// Outcome of checking empirical cut points against a prediction.
#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub tol_space: f64,
    pub n_traces: usize,
    pub n_cut_points: usize,
    pub max_deviation: f64,
    /// Smallest folded theta among cut points on the opposite parallel.
    pub arc_onset_theta: Option<f64>,
    /// |onset - phi(m(t_q))| when the prediction carries the arc.
    pub arc_onset_deviation: Option<f64>,
    pub violations: Vec<String>,
    pub per_trace: Vec<TraceVerdict>,
}

/// Check every empirical cut point against the predicted set (one-sided
/// Hausdorff at tol_space) and locate the empirical onset of the
/// two-minimizer locus on the opposite parallel.
pub fn compare(
    profile: &WarpingProfile,
    prediction: &CutLocusDescription,
    fan: &Fan,
    points: &[Option<EmpiricalCutPoint>],
    tol_space: f64,
) -> VerifyReport {
    let mut per_trace = Vec::with_capacity(points.len());
    let mut max_deviation: f64 = 0.0;
    let mut violations = Vec::new();
    let mut n_cut_points = 0;
    let mut onset: Option<f64> = None;

    for (i, p) in points.iter().enumerate() {
        let nu = fan.traces[i].nu;
        match p {
            None => per_trace.push(TraceVerdict {
                trace: i,
                nu,
                s_cut: None,
                point: None,
                kind: None,
                predicted_distance: None,
                deviation: None,
            }),
            Some(cp) => {
                n_cut_points += 1;
                let dev = distance_to_predicted(profile, prediction, cp.t, cp.theta);
                max_deviation = max_deviation.max(dev);
                if dev > tol_space {
                    violations.push(format!(
                        "trace {i} (nu = {nu:.6}): cut point at (t = {:.6}, theta = {:.6}) deviates {dev:.6} from the predicted set",
                        cp.t, cp.theta
                    ));
                }
                let mut predicted_distance = None;
                if let Some(level) = prediction.parallel_level {
                    if (cp.t - level).abs() <= tol_space {
                        let th = wrap_theta(cp.theta);
                        let folded = th.min(TWO_PI - th);
                        onset = Some(match onset {
                            None => folded,
                            Some(o) => o.min(folded),
                        });
                        if let Ok(l) = geodesic_length(profile, nu.abs(), 1e-9) {
                            predicted_distance = Some(l.value);
                        }
                    }
                }
                per_trace.push(TraceVerdict {
                    trace: i,
                    nu,
                    s_cut: Some(cp.s_cut),
                    point: Some((cp.t, cp.theta)),
                    kind: Some(cp.kind),
                    predicted_distance,
                    deviation: Some(dev),
                });
            }
        }
    }

    let mut arc_onset_deviation = None;
    match (prediction.kind, prediction.theta_arc) {
        (CutLocusKind::MeridianAndParallelArc, Some((lo, _))) => match onset {
            Some(o) => {
                let dev = (o - lo).abs();
                arc_onset_deviation = Some(dev);
                if dev > tol_space {
                    violations.push(format!(
                        "two-minimizer onset on the opposite parallel at theta = {o:.6} misses the arc endpoint {lo:.6} by {dev:.6}"
                    ));
                }
            }
            None => violations.push(
                "prediction carries a parallel arc but no cut point was found near it".into(),
            ),
        },
        _ => {
            if n_cut_points == 0 {
                violations.push("no empirical cut points found at all".into());
            }
        }
    }

    VerifyReport {
        tol_space,
        n_traces: points.len(),
        n_cut_points,
        max_deviation,
        arc_onset_theta: onset,
        arc_onset_deviation,
        violations,
        per_trace,
    }
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<String> = self
            .per_trace
            .iter()
            .map(|v| {
                let point = match v.point {
                    Some((t, th)) => format!("[{},{}]", json_f64(t), json_f64(th)),
                    None => "null".into(),
                };
                let kind = match v.kind {
                    Some(k) => format!("\"{}\"", k.as_str()),
                    None => "null".into(),
                };
                format!(
                    "{{\"trace\":{},\"nu\":{},\"s_cut\":{},\"point\":{},\"kind\":{},\"predicted_distance\":{},\"deviation\":{}}}",
                    v.trace,
                    json_f64(v.nu),
                    json_opt_f64(v.s_cut),
                    point,
                    kind,
                    json_opt_f64(v.predicted_distance),
                    json_opt_f64(v.deviation)
                )
            })
            .collect();
        let violations: Vec<String> = self.violations.iter().map(|v| json_str(v)).collect();
        format!(
            "{{\"tol_space\":{},\"n_traces\":{},\"n_cut_points\":{},\"max_deviation\":{},\"arc_onset_theta\":{},\"arc_onset_deviation\":{},\"violations\":[{}],\"per_trace\":[{}]}}",
            json_f64(self.tol_space),
            self.n_traces,
            self.n_cut_points,
            json_f64(self.max_deviation),
            json_opt_f64(self.arc_onset_theta),
            json_opt_f64(self.arc_onset_deviation),
            violations.join(","),
            rows.join(",")
        )
    }
}
