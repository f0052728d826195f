//! Fourth-order finite-difference derivatives on uniformly spaced samples.
//!
//! Centered five-point stencils in the interior, one-sided stencils of the
//! same order on the two nodes nearest each end.

/// First derivative of `f` sampled with spacing `h`. Needs at least 5 samples.
pub fn d1(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 5, "fourth-order stencil needs at least 5 samples");
    let s = 1.0 / (12.0 * h);
    let mut out = vec![0.0; n];
    out[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) * s;
    out[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) * s;
    for j in 2..n - 2 {
        out[j] = (-f[j + 2] + 8.0 * f[j + 1] - 8.0 * f[j - 1] + f[j - 2]) * s;
    }
    let m = n - 1;
    out[m] = (25.0 * f[m] - 48.0 * f[m - 1] + 36.0 * f[m - 2] - 16.0 * f[m - 3] + 3.0 * f[m - 4]) * s;
    out[m - 1] = (3.0 * f[m] + 10.0 * f[m - 1] - 18.0 * f[m - 2] + 6.0 * f[m - 3] - f[m - 4]) * s;
    out
}

/// Second derivative of `f` sampled with spacing `h`. Needs at least 6 samples.
pub fn d2(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 6, "fourth-order stencil needs at least 6 samples");
    let s = 1.0 / (12.0 * h * h);
    let mut out = vec![0.0; n];
    out[0] = (45.0 * f[0] - 154.0 * f[1] + 214.0 * f[2] - 156.0 * f[3] + 61.0 * f[4]
        - 10.0 * f[5])
        * s;
    out[1] = (10.0 * f[0] - 15.0 * f[1] - 4.0 * f[2] + 14.0 * f[3] - 6.0 * f[4] + f[5]) * s;
    for j in 2..n - 2 {
        out[j] = (-f[j + 2] + 16.0 * f[j + 1] - 30.0 * f[j] + 16.0 * f[j - 1] - f[j - 2]) * s;
    }
    let m = n - 1;
    out[m] = (45.0 * f[m] - 154.0 * f[m - 1] + 214.0 * f[m - 2] - 156.0 * f[m - 3]
        + 61.0 * f[m - 4]
        - 10.0 * f[m - 5])
        * s;
    out[m - 1] = (10.0 * f[m] - 15.0 * f[m - 1] - 4.0 * f[m - 2] + 14.0 * f[m - 3]
        - 6.0 * f[m - 4]
        + f[m - 5])
        * s;
    out
}

/// Second derivative by the three-point stencil at interior nodes; the two
/// end entries are left at zero.
pub fn d2_three_point(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    for j in 1..n.saturating_sub(1) {
        out[j] = (f[j + 1] - 2.0 * f[j] + f[j - 1]) / (h * h);
    }
    out
}
