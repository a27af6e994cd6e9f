//! Bracketing root finder and golden-section maximizer for fallible
//! objective functions.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    /// Final bracket; always contains a sign change.
    pub bracket: (f64, f64),
    pub iterations: usize,
}

/// Brent's method: inverse quadratic / secant steps with bisection fallback.
///
/// `fa` and `fb` are the known values at the bracket ends, which must differ in
/// sign. Stops once the bracket is narrower than `xtol(x)`.
pub fn brent<F, T>(mut f: F, a: f64, b: f64, fa: f64, fb: f64, xtol: T, max_iter: usize) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
    T: Fn(f64) -> f64,
{
    if fa == 0.0 {
        return Ok(Root { x: a, bracket: (a, a), iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, bracket: (b, b), iterations: 0 });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Config(format!("root is not bracketed: f({a:e}) = {fa:e}, f({b:e}) = {fb:e}")));
    }

    let (mut a, mut b, mut fa, mut fb) = (a, b, fa, fb);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for iter in 1..=max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 0.5 * xtol(b).max(4.0 * f64::EPSILON * b.abs());
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            let (lo, hi) = if b < c { (b, c) } else { (c, b) };
            return Ok(Root { x: b, bracket: (lo, hi), iterations: iter });
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Err(Error::Convergence {
        message: format!("root search did not converge in {max_iter} iterations"),
        partial: b,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Maximum {
    pub x: f64,
    pub value: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximum of a unimodal `f` on `[a, c]`,
/// stopping when the bracket is narrower than `rel_tol · x`.
pub fn golden_max<F>(mut f: F, a: f64, c: f64, rel_tol: f64, max_iter: usize) -> Result<Maximum>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut lo, mut hi) = if a < c { (a, c) } else { (c, a) };
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    for _ in 0..max_iter {
        if (hi - lo) <= rel_tol * 0.5 * (lo + hi).abs() {
            break;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 >= f2 { Maximum { x: x1, value: f1 } } else { Maximum { x: x2, value: f2 } })
}
