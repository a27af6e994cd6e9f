//! Globally adaptive Gauss–Kronrod (7/15 point) integration on finite intervals.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

// Kronrod abscissae; the odd-indexed ones are the Gauss points.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
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

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of subintervals before giving up.
    pub max_intervals: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
    /// Whether the requested tolerance was met.
    pub converged: bool,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// QUADPACK-style error rescaling.
fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut err = err.abs();
    if res_asc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / res_asc).powf(1.5);
        err = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    err
}

/// Single 15-point Kronrod pass. Returns (value, error, |f| integral).
fn kronrod15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);

    let mut res_gauss = f_center * WG[3];
    let mut res_kronrod = f_center * WGK[7];
    let mut res_abs = res_kronrod.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];

    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(center - x);
        let f2 = f(center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        res_kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * res_kronrod;
    let mut res_asc = WGK[7] * (f_center - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let value = res_kronrod * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let err = rescale_error((res_kronrod - res_gauss) * half, res_abs, res_asc);
    (value, err, res_abs)
}

/// Integrates `f` over `[a, b]`, bisecting the subinterval with the largest
/// error estimate until the total error satisfies
/// `err <= max(abs_tol, rel_tol * |value|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, settings: &QuadratureSettings) -> Estimate {
    let (value, error, res_abs) = kronrod15(&f, a, b);
    let mut evaluations = 15;
    let tolerance = |v: f64| settings.abs_tol.max(settings.rel_tol * v.abs());

    // Roundoff floor: the estimate cannot beat the 50·ε·∫|f| bound.
    let roundoff = 50.0 * f64::EPSILON * res_abs;
    if error <= tolerance(value) || error <= roundoff {
        return Estimate { value, error, evaluations, converged: true };
    }

    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total_value = value;
    let mut total_error = error;

    while heap.len() < settings.max_intervals {
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval can no longer be split in floating point.
            heap.push(worst);
            break;
        }
        let (v1, e1, _) = kronrod15(&f, worst.a, mid);
        let (v2, e2, _) = kronrod15(&f, mid, worst.b);
        evaluations += 30;

        total_value += v1 + v2 - worst.value;
        total_error += e1 + e2 - worst.error;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2 });

        if total_error <= tolerance(total_value) {
            break;
        }
    }

    // Resum from scratch so the result does not carry the drift of the
    // running updates.
    let mut segments = heap.into_vec();
    segments.sort_by(|x, y| x.a.total_cmp(&y.a));
    let value: f64 = segments.iter().map(|s| s.value).sum();
    let error: f64 = segments.iter().map(|s| s.error).sum();
    let converged = error <= tolerance(value) || error <= roundoff;
    Estimate { value, error, evaluations, converged }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kronrod_is_exact_for_degree_22_polynomials() {
        // ∫_{-1}^{1} x^22 dx = 2/23
        let (v, _, _) = kronrod15(&|x: f64| x.powi(22), -1.0, 1.0);
        assert!((v - 2.0 / 23.0).abs() < 1e-15);
        let (v, _, _) = kronrod15(&|x: f64| x.powi(21) + 3.0 * x * x, 0.0, 2.0);
        let exact = 2f64.powi(22) / 22.0 + 8.0;
        assert!((v - exact).abs() / exact < 1e-14);
    }

    #[test]
    fn gauss_weights_sum_to_two() {
        let s: f64 = 2.0 * WG[..3].iter().sum::<f64>() + WG[3];
        assert!((s - 2.0).abs() < 1e-15);
        let s: f64 = 2.0 * WGK[..7].iter().sum::<f64>() + WGK[7];
        assert!((s - 2.0).abs() < 1e-15);
    }

    #[test]
    fn exponential_tail() {
        // ∫_0^60 y² e^{-y} dy = 2 - e^{-60}(60² + 2·60 + 2)
        let est = integrate(|y: f64| y * y * (-y).exp(), 0.0, 60.0, &QuadratureSettings::default());
        assert!(est.converged);
        assert!((est.value - 2.0).abs() < 1e-12);
    }

    #[test]
    fn peaked_integrand_needs_subdivision() {
        let s = QuadratureSettings { abs_tol: 0.0, rel_tol: 1e-12, max_intervals: 500 };
        let eps = 1e-3;
        let est = integrate(|x: f64| eps / (x * x + eps * eps), -1.0, 1.0, &s);
        let exact = 2.0 * (1.0 / eps).atan();
        assert!(est.converged);
        assert!(est.evaluations > 15);
        assert!((est.value - exact).abs() / exact < 1e-11);
    }

    #[test]
    fn reports_non_convergence() {
        let s = QuadratureSettings { abs_tol: 0.0, rel_tol: 1e-14, max_intervals: 3 };
        let est = integrate(|x: f64| (1.0 / (x + 1e-9)).sin(), 0.0, 1.0, &s);
        assert!(!est.converged);
    }
}
