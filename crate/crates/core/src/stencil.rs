//! Second-order finite-difference operators on a uniform node set.
//!
//! Interior nodes use central stencils, the two end nodes use second-order
//! one-sided stencils. Inputs need at least four values.

/// First derivative.
pub fn d1(f: &[f64], dx: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 4, "d1 needs at least 4 nodes");
    let mut out = vec![0.0; n];
    let h2 = 2.0 * dx;
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / h2;
    for i in 1..n - 1 {
        out[i] = (f[i + 1] - f[i - 1]) / h2;
    }
    out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / h2;
    out
}

/// Second derivative, compact three-point stencil in the interior.
pub fn d2(f: &[f64], dx: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 4, "d2 needs at least 4 nodes");
    let mut out = vec![0.0; n];
    let h2 = dx * dx;
    out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2;
    for i in 1..n - 1 {
        out[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
    }
    out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) / h2;
    out
}

/// Third derivative as `d1` applied to `d2`.
pub fn d3(f: &[f64], dx: f64) -> Vec<f64> {
    d1(&d2(f, dx), dx)
}

/// Time derivative at the middle of three samples `(t0, t1, t2)` by the
/// second-order three-point formula for unequal spacing.
pub fn central_time_derivative(times: [f64; 3], f0: &[f64], f1: &[f64], f2: &[f64]) -> Vec<f64> {
    let h0 = times[1] - times[0];
    let h1 = times[2] - times[1];
    let w0 = -h1 / (h0 * (h0 + h1));
    let w1 = (h1 - h0) / (h0 * h1);
    let w2 = h0 / (h1 * (h0 + h1));
    f0.iter()
        .zip(f1)
        .zip(f2)
        .map(|((a, b), c)| w0 * a + w1 * b + w2 * c)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(n: usize, dx: f64, f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..n).map(|i| f(i as f64 * dx)).collect()
    }

    #[test]
    fn exact_on_quadratics() {
        let dx = 0.1;
        let f = sample(12, dx, |x| 3.0 * x * x - 2.0 * x + 1.0);
        let df = d1(&f, dx);
        let ddf = d2(&f, dx);
        for (i, (a, b)) in df.iter().zip(&ddf).enumerate() {
            let x = i as f64 * dx;
            assert!((a - (6.0 * x - 2.0)).abs() < 1e-12, "d1 at {i}");
            assert!((b - 6.0).abs() < 1e-10, "d2 at {i}");
        }
    }

    #[test]
    fn second_order_on_smooth_data() {
        let err = |n: usize| {
            let dx = 1.0 / (n - 1) as f64;
            let f = sample(n, dx, f64::sin);
            let df = d1(&f, dx);
            let ddf = d2(&f, dx);
            (0..n)
                .map(|i| {
                    let x = i as f64 * dx;
                    (df[i] - x.cos()).abs().max((ddf[i] + x.sin()).abs())
                })
                .fold(0.0, f64::max)
        };
        let ratio = err(65) / err(129);
        assert!(ratio > 3.5 && ratio < 4.5, "ratio {ratio}");
    }

    #[test]
    fn time_derivative_unequal_spacing() {
        let g = |t: f64| vec![t * t, 2.0 * t];
        let times = [0.9, 1.0, 1.3];
        let d = central_time_derivative(times, &g(0.9), &g(1.0), &g(1.3));
        assert!((d[0] - 2.0).abs() < 1e-12);
        assert!((d[1] - 2.0).abs() < 1e-12);
    }
}
