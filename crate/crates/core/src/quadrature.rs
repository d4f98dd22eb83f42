//! One-dimensional adaptive Gauss–Kronrod quadrature, a fixed composite
//! Simpson rule, and nested cubature over boxes.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// 15-point Kronrod estimate and the embedded 7-point Gauss error estimate.
fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * x;
        let s = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive Gauss–Kronrod integration of `f` over `[a, b]`.
///
/// Subdivides the interval with the largest error estimate until the summed
/// estimate drops below `tol` (absolute) or `max_intervals` is reached.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    integrate_with_limit(&mut f, a, b, tol, 2000)
}

pub fn integrate_with_limit<F: FnMut(f64) -> f64>(
    f: &mut F,
    a: f64,
    b: f64,
    tol: f64,
    max_intervals: usize,
) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (v, e) = gk15(f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    loop {
        let total_err: f64 = pieces.iter().map(|p| p.3).sum();
        let total: f64 = pieces.iter().map(|p| p.2).sum();
        if !total.is_finite() {
            return Err(Error::Quadrature("non-finite integrand".into()));
        }
        if total_err <= tol || total_err <= 1e-15 * total.abs() {
            return Ok(total);
        }
        if pieces.len() >= max_intervals {
            return Err(Error::Quadrature(format!(
                "{} intervals, error estimate {total_err:e} > {tol:e}",
                pieces.len()
            )));
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (lo, hi, _, _) = pieces.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(f, lo, mid);
        let (v2, e2) = gk15(f, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}

/// Composite Simpson rule with `panels` (rounded up to even) subintervals.
pub fn simpson<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, panels: usize) -> f64 {
    let n = panels.max(2).next_multiple_of(2);
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// Nested adaptive cubature of `f` over the box `lo..hi`.
///
/// Every level uses the same absolute tolerance, so the total error is of
/// order `tol` times the box measure terms.
pub fn integrate_box<F: Fn([f64; 3]) -> f64>(f: F, lo: [f64; 3], hi: [f64; 3], tol: f64) -> Result<f64> {
    let mut failure: Option<Error> = None;
    let record = |r: Result<f64>, failure: &mut Option<Error>| match r {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    };
    let outer = integrate_with_limit(
        &mut |x| {
            let mid = integrate_with_limit(
                &mut |y| {
                    let inner = integrate_with_limit(&mut |z| f([x, y, z]), lo[2], hi[2], tol, 500);
                    record(inner, &mut failure)
                },
                lo[1],
                hi[1],
                tol,
                500,
            );
            match mid {
                Ok(v) => v,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        lo[0],
        hi[0],
        tol,
        500,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(outer),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gauss_kronrod_polynomial_and_trig() {
        let v = integrate(|x| x.powi(5) - 2.0 * x, 0.0, 2.0, 1e-13).unwrap();
        assert!((v - (64.0 / 6.0 - 4.0)).abs() < 1e-12);
        let s = integrate(f64::sin, 0.0, PI, 1e-13).unwrap();
        assert!((s - 2.0).abs() < 1e-12);
    }

    #[test]
    fn endpoint_singularity_is_handled_adaptively() {
        let v = integrate(|x| x.sqrt(), 0.0, 1.0, 1e-10).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn simpson_matches_exact_cubic() {
        let v = simpson(|x| x * x * x, 0.0, 1.0, 10);
        assert!((v - 0.25).abs() < 1e-14);
    }

    #[test]
    fn box_cubature_of_separable_function() {
        let v = integrate_box(|p| p[0] * p[1].exp() * p[2].cos(), [0.0; 3], [1.0, 1.0, 1.0], 1e-11).unwrap();
        let exact = 0.5 * (1f64.exp() - 1.0) * 1f64.sin();
        assert!((v - exact).abs() < 1e-9, "{v} vs {exact}");
    }
}
