//! Globally adaptive 21-point Gauss-Kronrod quadrature on finite intervals and
//! on the real line, for real or complex integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances and budget of the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct QuadSettings {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadSettings {
    fn default() -> Self {
        Self { rel_tol: 1e-6, abs_tol: 1e-14, max_subdivisions: 4000 }
    }
}

/// Values the integrator can accumulate.
pub trait Integrand:
    Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn magnitude(self) -> f64;
}

impl Integrand for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
}

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Gauss weights for the odd-indexed Kronrod nodes.
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// How a unit segment of the parameter axis maps to the real line.
#[derive(Debug, Clone, Copy)]
enum Chart {
    Identity,
    /// x = anchor - scale t / (1 - t), t in [0, 1).
    LeftTail { anchor: f64, scale: f64 },
    /// x = anchor + scale t / (1 - t), t in [0, 1).
    RightTail { anchor: f64, scale: f64 },
}

impl Chart {
    fn apply(self, t: f64) -> (f64, f64) {
        match self {
            Chart::Identity => (t, 1.0),
            Chart::LeftTail { anchor, scale } => {
                let u = 1.0 - t;
                (anchor - scale * t / u, scale / (u * u))
            }
            Chart::RightTail { anchor, scale } => {
                let u = 1.0 - t;
                (anchor + scale * t / u, scale / (u * u))
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    a: f64,
    b: f64,
    chart: Chart,
    value: T,
    error: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error).then(other.a.total_cmp(&self.a))
    }
}

fn kronrod<T, F>(f: &mut F, a: f64, b: f64, chart: Chart) -> Result<Segment<T>>
where
    T: Integrand,
    F: FnMut(f64) -> Result<T>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut eval = |t: f64| -> Result<T> {
        let (x, jac) = chart.apply(t);
        if jac == 0.0 {
            return Ok(T::default());
        }
        Ok(f(x)? * jac)
    };
    let fc = eval(center)?;
    let mut res_k = fc * WGK[10];
    let mut res_g = T::default();
    let mut res_abs = fc.magnitude() * WGK[10];
    let mut values = [(T::default(), T::default()); 10];
    for k in 0..10 {
        let dx = half * XGK[k];
        let (f1, f2) = (eval(center - dx)?, eval(center + dx)?);
        values[k] = (f1, f2);
        res_k = res_k + (f1 + f2) * WGK[k];
        res_abs += (f1.magnitude() + f2.magnitude()) * WGK[k];
        if k % 2 == 1 {
            res_g = res_g + (f1 + f2) * WG[k / 2];
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = (fc - mean).magnitude() * WGK[10];
    for k in 0..10 {
        res_asc += ((values[k].0 - mean).magnitude() + (values[k].1 - mean).magnitude()) * WGK[k];
    }
    let scale = half.abs();
    res_asc *= scale;
    res_abs *= scale;
    let mut error = ((res_k - res_g) * half).magnitude();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Segment { a, b, chart, value: res_k * half, error })
}

fn adapt<T, F>(f: &mut F, initial: Vec<(f64, f64, Chart)>, settings: &QuadSettings) -> Result<QuadEstimate<T>>
where
    T: Integrand,
    F: FnMut(f64) -> Result<T>,
{
    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for (a, b, chart) in initial {
        if b > a {
            heap.push(kronrod(f, a, b, chart)?);
            evaluations += 21;
        }
    }
    let mut splits = 0;
    loop {
        let total = heap.iter().fold(T::default(), |acc, s| acc + s.value);
        let error: f64 = heap.iter().map(|s| s.error).sum();
        let tol = settings.abs_tol.max(settings.rel_tol * total.magnitude());
        if error <= tol {
            return Ok(QuadEstimate { value: total, error, evaluations });
        }
        let worst = match heap.pop() {
            Some(s) => s,
            None => return Ok(QuadEstimate { value: T::default(), error: 0.0, evaluations }),
        };
        let mid = 0.5 * (worst.a + worst.b);
        if splits >= settings.max_subdivisions || !(worst.a < mid && mid < worst.b) {
            return Err(Error::IntegrationFailure(format!(
                "error estimate {error:e} above tolerance {tol:e} after {splits} subdivisions"
            )));
        }
        heap.push(kronrod(f, worst.a, mid, worst.chart)?);
        heap.push(kronrod(f, mid, worst.b, worst.chart)?);
        evaluations += 42;
        splits += 1;
    }
}

/// Integrates `f` over the finite interval [a, b].
pub fn integrate<T, F>(mut f: F, a: f64, b: f64, settings: &QuadSettings) -> Result<QuadEstimate<T>>
where
    T: Integrand,
    F: FnMut(f64) -> Result<T>,
{
    if a == b {
        return Ok(QuadEstimate { value: T::default(), error: 0.0, evaluations: 0 });
    }
    if a > b {
        let est = integrate(f, b, a, settings)?;
        return Ok(QuadEstimate { value: est.value * -1.0, ..est });
    }
    adapt(&mut f, vec![(a, b, Chart::Identity)], settings)
}

/// Integrates `f` from the first to the last of the sorted `points`, using
/// the interior points as initial subdivisions.
pub fn integrate_partitioned<T, F>(mut f: F, points: &[f64], settings: &QuadSettings) -> Result<QuadEstimate<T>>
where
    T: Integrand,
    F: FnMut(f64) -> Result<T>,
{
    let mut pts: Vec<f64> = points.iter().copied().filter(|x| x.is_finite()).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let initial = pts.windows(2).map(|w| (w[0], w[1], Chart::Identity)).collect();
    adapt(&mut f, initial, settings)
}

/// Integrates `f` over the whole real line.
///
/// `breakpoints` mark features (peaks, kinks) and are used as initial
/// subdivision points; the two unbounded tails beyond the outermost
/// breakpoints are mapped onto [0, 1) with length scale `tail_scale`.
pub fn integrate_real_line<T, F>(
    mut f: F,
    breakpoints: &[f64],
    tail_scale: f64,
    settings: &QuadSettings,
) -> Result<QuadEstimate<T>>
where
    T: Integrand,
    F: FnMut(f64) -> Result<T>,
{
    let mut points: Vec<f64> = breakpoints.iter().copied().filter(|x| x.is_finite()).collect();
    if points.is_empty() {
        points.push(0.0);
    }
    points.sort_by(f64::total_cmp);
    points.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * a.abs().max(1.0));
    let scale = if tail_scale > 0.0 { tail_scale } else { 1.0 };
    let mut initial = vec![(0.0, 1.0, Chart::LeftTail { anchor: points[0], scale })];
    for w in points.windows(2) {
        initial.push((w[0], w[1], Chart::Identity));
    }
    initial.push((0.0, 1.0, Chart::RightTail { anchor: points[points.len() - 1], scale }));
    adapt(&mut f, initial, settings)
}
