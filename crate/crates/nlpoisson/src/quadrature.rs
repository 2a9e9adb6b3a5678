//! Half-line integration for the identity integrands: adaptive
//! Gauss-Kronrod (7-15 pair) on bisected panels, geometric grading toward
//! endpoint power singularities `t^alpha` with `alpha > -1`, and the
//! inversion substitution `t -> 1/t` for the tail.
//!
//! `integral_0^inf f = integral_0^s f(t) dt + integral_0^{1/s} f(1/u)/u^2 du`
//!
//! The tail is never truncated: the substitution turns algebraic decay
//! `t^{-beta}` into the endpoint power `u^{beta-2}`, the same class the
//! graded panels already handle, and it tames the oscillatory phases that
//! build up at large times. Real and imaginary parts share one subdivision
//! tree but carry their own error estimates.

use num_complex::Complex64;
use std::collections::BinaryHeap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QuadratureError {
    #[error("integrand returned a non-finite value at t = {t}")]
    NonFiniteSample { t: f64 },
    #[error("invalid quadrature spec: {0}")]
    BadSpec(String),
    #[error("partial integral needs a cutoff T > 1, got {0}")]
    BadCutoff(f64),
}

/// Tolerances and subdivision policy for one integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Where the half line is cut before inverting the tail.
    pub split_point: f64,
    /// Panel budget per sub-integral.
    pub max_subdivisions: usize,
    /// Known endpoint behavior `t^alpha` as `t -> 0+`, `alpha > -1`;
    /// switches on the geometric grading of the head interval.
    pub singular_exponent: Option<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            split_point: 1.0,
            max_subdivisions: 2000,
            singular_exponent: None,
        }
    }
}

impl QuadratureSpec {
    fn validate(&self) -> Result<(), QuadratureError> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(QuadratureError::BadSpec("tolerances must be positive".into()));
        }
        if !(self.split_point > 0.0) || !self.split_point.is_finite() {
            return Err(QuadratureError::BadSpec("split_point must be positive and finite".into()));
        }
        if self.max_subdivisions < 8 {
            return Err(QuadratureError::BadSpec("max_subdivisions must be at least 8".into()));
        }
        if let Some(alpha) = self.singular_exponent {
            if !(alpha > -1.0) {
                return Err(QuadratureError::BadSpec(format!(
                    "singular exponent must exceed -1 for integrability, got {alpha}"
                )));
            }
        }
        Ok(())
    }
}

/// Result of a scalar integral: value, error estimate, convergence flag
/// (a failed flag still carries the partial value) and evaluation count.
#[derive(Debug, Clone, Copy)]
pub struct IntegralEstimate {
    pub value: Complex64,
    pub error: f64,
    pub converged: bool,
    pub evaluations: usize,
}

/// Result of a vector-valued integral sharing one subdivision tree.
#[derive(Debug, Clone)]
pub struct BatchEstimate {
    pub values: Vec<Complex64>,
    pub errors: Vec<f64>,
    pub converged: bool,
    pub evaluations: usize,
}

// 7-15 Gauss-Kronrod pair (QUADPACK).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_838_258_730,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
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

struct Panel {
    a: f64,
    b: f64,
    values: Vec<Complex64>,
    errors: Vec<f64>,
    key: f64,
    seq: u64,
    splittable: bool,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key && self.seq == other.seq
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // max-heap on error key; older panels win ties for determinism
        self.key
            .total_cmp(&other.key)
            .then_with(|| other.seq.cmp(&self.seq))
    }
}

fn gk15_panel<F>(
    f: &mut F,
    a: f64,
    b: f64,
    width: usize,
    seq: u64,
    evals: &mut usize,
) -> Result<Panel, QuadratureError>
where
    F: FnMut(f64) -> Vec<Complex64>,
{
    let center = 0.5 * (a + b);
    let hl = 0.5 * (b - a);
    let hl_abs = hl.abs();

    let mut nodes = [0.0f64; 15];
    nodes[14] = center;
    for j in 0..7 {
        nodes[2 * j] = center - hl * XGK[j];
        nodes[2 * j + 1] = center + hl * XGK[j];
    }
    let mut fv: Vec<Vec<Complex64>> = Vec::with_capacity(15);
    for &t in &nodes {
        let v = f(t);
        debug_assert_eq!(v.len(), width);
        *evals += 1;
        for z in &v {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(QuadratureError::NonFiniteSample { t });
            }
        }
        fv.push(v);
    }

    let mut values = Vec::with_capacity(width);
    let mut errors = Vec::with_capacity(width);
    for c in 0..width {
        let fc = fv[14][c];
        let mut resk = fc * WGK[7];
        let mut resg = fc * WG[3];
        let mut abs_re = fc.re.abs() * WGK[7];
        let mut abs_im = fc.im.abs() * WGK[7];
        for j in 0..7 {
            let f1 = fv[2 * j][c];
            let f2 = fv[2 * j + 1][c];
            let fsum = f1 + f2;
            resk += fsum * WGK[j];
            abs_re += WGK[j] * (f1.re.abs() + f2.re.abs());
            abs_im += WGK[j] * (f1.im.abs() + f2.im.abs());
            if j % 2 == 1 {
                // XGK indices 1, 3, 5 are the embedded Gauss nodes
                resg += fsum * WG[j / 2];
            }
        }
        let mean = resk * 0.5;
        let mut asc_re = WGK[7] * (fc.re - mean.re).abs();
        let mut asc_im = WGK[7] * (fc.im - mean.im).abs();
        for j in 0..7 {
            asc_re += WGK[j]
                * ((fv[2 * j][c].re - mean.re).abs() + (fv[2 * j + 1][c].re - mean.re).abs());
            asc_im += WGK[j]
                * ((fv[2 * j][c].im - mean.im).abs() + (fv[2 * j + 1][c].im - mean.im).abs());
        }
        let diff = (resk - resg) * hl;
        let err_re = rescale_error(diff.re, abs_re * hl_abs, asc_re * hl_abs);
        let err_im = rescale_error(diff.im, abs_im * hl_abs, asc_im * hl_abs);
        values.push(resk * hl);
        errors.push(err_re + err_im);
    }
    let key = errors.iter().copied().fold(0.0f64, f64::max);
    let splittable = {
        let mid = 0.5 * (a + b);
        mid > a && mid < b
    };
    Ok(Panel { a, b, values, errors, key, seq, splittable })
}

/// Adaptive driver over an initial panel list. Shared by every public
/// entry point.
fn adapt<F>(
    f: &mut F,
    width: usize,
    seeds: &[(f64, f64)],
    abs_tol: f64,
    rel_tol: f64,
    max_panels: usize,
) -> Result<BatchEstimate, QuadratureError>
where
    F: FnMut(f64) -> Vec<Complex64>,
{
    let mut evals = 0usize;
    let mut seq = 0u64;
    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Panel> = Vec::new();
    let mut totals = vec![Complex64::default(); width];
    let mut total_err = vec![0.0f64; width];

    let push = |panel: Panel,
                    heap: &mut BinaryHeap<Panel>,
                    frozen: &mut Vec<Panel>,
                    totals: &mut [Complex64],
                    total_err: &mut [f64]| {
        for c in 0..width {
            totals[c] += panel.values[c];
            total_err[c] += panel.errors[c];
        }
        if panel.splittable && panel.key > 0.0 {
            heap.push(panel);
        } else {
            frozen.push(panel);
        }
    };

    for &(a, b) in seeds {
        if a == b {
            continue;
        }
        let p = gk15_panel(f, a, b, width, seq, &mut evals)?;
        seq += 1;
        push(p, &mut heap, &mut frozen, &mut totals, &mut total_err);
    }

    let converged = |totals: &[Complex64], total_err: &[f64]| {
        (0..width).all(|c| total_err[c] <= abs_tol.max(rel_tol * totals[c].norm()))
    };

    let mut n_panels = heap.len() + frozen.len();
    while !converged(&totals, &total_err) && n_panels < max_panels {
        let Some(worst) = heap.pop() else { break };
        for c in 0..width {
            totals[c] -= worst.values[c];
            total_err[c] -= worst.errors[c];
        }
        let mid = 0.5 * (worst.a + worst.b);
        let left = gk15_panel(f, worst.a, mid, width, seq, &mut evals)?;
        seq += 1;
        let right = gk15_panel(f, mid, worst.b, width, seq, &mut evals)?;
        seq += 1;
        push(left, &mut heap, &mut frozen, &mut totals, &mut total_err);
        push(right, &mut heap, &mut frozen, &mut totals, &mut total_err);
        n_panels += 1;
    }

    Ok(BatchEstimate {
        converged: converged(&totals, &total_err),
        values: totals,
        errors: total_err,
        evaluations: evals,
    })
}

/// Geometric panel chain `[0, s 2^{-K}], ..., [s/2, s]` toward an endpoint
/// power singularity at zero.
fn graded_seeds(upper: f64) -> Vec<(f64, f64)> {
    const LEVELS: i32 = 54;
    let mut seeds = Vec::with_capacity(LEVELS as usize + 1);
    seeds.push((0.0, upper * 2f64.powi(-LEVELS)));
    for k in (1..=LEVELS).rev() {
        seeds.push((upper * 2f64.powi(-k), upper * 2f64.powi(-k + 1)));
    }
    seeds
}

/// Adaptive integral over a finite interval; building block exposed for
/// tests and tooling.
pub fn integrate_interval<F>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralEstimate, QuadratureError>
where
    F: FnMut(f64) -> Complex64,
{
    spec.validate()?;
    let mut g = |t: f64| vec![f(t)];
    let batch = adapt(&mut g, 1, &[(a, b)], spec.abs_tol, spec.rel_tol, spec.max_subdivisions)?;
    Ok(IntegralEstimate {
        value: batch.values[0],
        error: batch.errors[0],
        converged: batch.converged,
        evaluations: batch.evaluations,
    })
}

/// `integral_0^inf f(t) dt`, head panel plus inverted tail as described in
/// the module docs. Non-convergence is flagged on the result, with the
/// partial value retained.
pub fn integrate_half_line<F>(
    mut f: F,
    spec: &QuadratureSpec,
) -> Result<IntegralEstimate, QuadratureError>
where
    F: FnMut(f64) -> Complex64,
{
    let mut g = |t: f64| vec![f(t)];
    let batch = integrate_half_line_batch(&mut g, 1, spec)?;
    Ok(IntegralEstimate {
        value: batch.values[0],
        error: batch.errors[0],
        converged: batch.converged,
        evaluations: batch.evaluations,
    })
}

/// Vector-valued version of [`integrate_half_line`]: all components share
/// the subdivision tree; the error policy applies to every component.
pub fn integrate_half_line_batch<F>(
    f: &mut F,
    width: usize,
    spec: &QuadratureSpec,
) -> Result<BatchEstimate, QuadratureError>
where
    F: FnMut(f64) -> Vec<Complex64>,
{
    spec.validate()?;
    let s = spec.split_point;

    let head_seeds = if spec.singular_exponent.is_some() {
        graded_seeds(s)
    } else {
        vec![(0.0, s)]
    };
    let head = adapt(f, width, &head_seeds, spec.abs_tol / 2.0, spec.rel_tol, spec.max_subdivisions)?;

    // tail: u -> f(1/u)/u^2 on (0, 1/s]; decay becomes an endpoint power,
    // so the tail interval is always graded
    let mut tail_fn = |u: f64| {
        let mut v = f(1.0 / u);
        let w = 1.0 / (u * u);
        for z in &mut v {
            *z *= w;
        }
        v
    };
    let tail_seeds = graded_seeds(1.0 / s);
    let tail = adapt(
        &mut tail_fn,
        width,
        &tail_seeds,
        spec.abs_tol / 2.0,
        spec.rel_tol,
        spec.max_subdivisions,
    )?;

    let values = head
        .values
        .iter()
        .zip(&tail.values)
        .map(|(a, b)| a + b)
        .collect();
    let errors = head
        .errors
        .iter()
        .zip(&tail.errors)
        .map(|(a, b)| a + b)
        .collect();
    Ok(BatchEstimate {
        values,
        errors,
        converged: head.converged && tail.converged,
        evaluations: head.evaluations + tail.evaluations,
    })
}

fn inversion_window_seeds(t_max: f64) -> Vec<(f64, f64)> {
    let mut seeds = Vec::new();
    let mut v = 1.0 / t_max;
    while v < t_max {
        let next = (v * 2.0).min(t_max);
        seeds.push((v, next));
        v = next;
    }
    seeds
}

/// `integral_{1/T}^{T} f(t) dt` for `T > 1`, dyadically seeded around `t = 1`.
/// No integrability assumption; this is the divergence scanner's primitive.
pub fn partial_integral<F>(
    mut f: F,
    t_max: f64,
    spec: &QuadratureSpec,
) -> Result<IntegralEstimate, QuadratureError>
where
    F: FnMut(f64) -> Complex64,
{
    let mut g = |t: f64| vec![f(t)];
    let batch = partial_integral_batch(&mut g, 1, t_max, spec)?;
    Ok(IntegralEstimate {
        value: batch.values[0],
        error: batch.errors[0],
        converged: batch.converged,
        evaluations: batch.evaluations,
    })
}

/// Vector-valued version of [`partial_integral`] with one shared
/// subdivision tree. The window `[1/T, T]` is invariant under `t -> 1/t`,
/// which is what makes windowed comparisons of the two identity sides
/// exact rather than approximate.
pub fn partial_integral_batch<F>(
    f: &mut F,
    width: usize,
    t_max: f64,
    spec: &QuadratureSpec,
) -> Result<BatchEstimate, QuadratureError>
where
    F: FnMut(f64) -> Vec<Complex64>,
{
    spec.validate()?;
    if !(t_max > 1.0) || !t_max.is_finite() {
        return Err(QuadratureError::BadCutoff(t_max));
    }
    let seeds = inversion_window_seeds(t_max);
    adapt(f, width, &seeds, spec.abs_tol, spec.rel_tol, spec.max_subdivisions)
}
