//! Local maxima and zero intervals of a sampled entanglement curve.

use std::f64::consts::PI;

use serde::Serialize;

use super::{MethodTag, SweepResult};

/// Samples below this are treated as exactly separable.
pub const ZERO_THRESHOLD: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExtremumKind {
    Max,
    ZeroOnset,
    ZeroOffset,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extremum {
    pub method: MethodTag,
    pub tau: f64,
    pub tau_over_pi: f64,
    pub value: f64,
    pub kind: ExtremumKind,
}

/// Extrema of every method series in the sweep, in method order then by `tau`.
pub fn find_extrema(result: &SweepResult) -> Vec<Extremum> {
    let mut out = Vec::new();
    for method in [MethodTag::Analytic, MethodTag::Numeric] {
        let (taus, values): (Vec<f64>, Vec<f64>) = result
            .rows
            .iter()
            .filter(|r| r.method == method)
            .map(|r| (r.tau, r.e_n))
            .unzip();
        if taus.is_empty() {
            continue;
        }
        out.extend(
            series_extrema(&taus, &values)
                .into_iter()
                .map(|(tau, value, kind)| Extremum {
                    method,
                    tau,
                    tau_over_pi: tau / PI,
                    value,
                    kind,
                }),
        );
    }
    out
}

/// Extrema of one curve sampled at increasing `taus`, sorted by `tau`.
///
/// Maxima are interior samples above their left neighbour and not below the
/// right one, refined by a parabola through the three samples. Zero intervals
/// are runs of samples below [`ZERO_THRESHOLD`]; onset and offset sit on the
/// first and last sample of the run.
pub fn series_extrema(taus: &[f64], values: &[f64]) -> Vec<(f64, f64, ExtremumKind)> {
    assert_eq!(taus.len(), values.len());
    let n = values.len();
    let mut out = Vec::new();
    for i in 1..n.saturating_sub(1) {
        let (l, c, r) = (values[i - 1], values[i], values[i + 1]);
        if c > l && c >= r && c >= ZERO_THRESHOLD {
            out.push(refine_max(taus[i - 1], taus[i], taus[i + 1], l, c, r));
        }
    }
    let mut i = 0;
    while i < n {
        if values[i] < ZERO_THRESHOLD {
            let start = i;
            while i + 1 < n && values[i + 1] < ZERO_THRESHOLD {
                i += 1;
            }
            out.push((taus[start], values[start], ExtremumKind::ZeroOnset));
            out.push((taus[i], values[i], ExtremumKind::ZeroOffset));
        }
        i += 1;
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

fn refine_max(t0: f64, t1: f64, t2: f64, l: f64, c: f64, r: f64) -> (f64, f64, ExtremumKind) {
    let curvature = l - 2.0 * c + r;
    if !(curvature < 0.0) {
        return (t1, c, ExtremumKind::Max);
    }
    let shift = (0.5 * (l - r) / curvature).clamp(-0.5, 0.5);
    let h = if shift < 0.0 { t1 - t0 } else { t2 - t1 };
    let value = c - 0.25 * (l - r) * shift;
    (t1 + shift * h, value.max(c), ExtremumKind::Max)
}

/// `(onset, offset)` pairs of the zero intervals, in order.
pub fn zero_intervals(extrema: &[Extremum]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut onset = None;
    for e in extrema {
        match e.kind {
            ExtremumKind::ZeroOnset => onset = Some(e.tau),
            ExtremumKind::ZeroOffset => {
                if let Some(t0) = onset.take() {
                    out.push((t0, e.tau));
                }
            }
            ExtremumKind::Max => {}
        }
    }
    out
}
