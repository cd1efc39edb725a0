//! Legendre polynomials and spherical Bessel functions of the first kind.

/// Fills `out[l] = P_l(x)` for `l = 0..out.len()`.
pub fn legendre_all(x: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    out[0] = 1.0;
    if out.len() > 1 {
        out[1] = x;
    }
    for l in 2..out.len() {
        let lf = l as f64;
        out[l] = ((2.0 * lf - 1.0) * x * out[l - 1] - (lf - 1.0) * out[l - 2]) / lf;
    }
}

/// Fills `out[l] = j_l(x)` for `l = 0..out.len()` and `x >= 0`.
///
/// Power series below `x = 1`, upward recurrence when `x` exceeds the highest
/// order (where it is stable), Miller's downward recurrence otherwise.
pub fn spherical_bessel_all(x: f64, out: &mut [f64]) {
    let n = out.len();
    if n == 0 {
        return;
    }
    let lmax = n - 1;
    if x < 1.0 {
        series(x, out);
    } else if x >= lmax as f64 {
        let (s, c) = x.sin_cos();
        out[0] = s / x;
        if n > 1 {
            out[1] = s / (x * x) - c / x;
        }
        for l in 1..lmax {
            out[l + 1] = (2 * l + 1) as f64 / x * out[l] - out[l - 1];
        }
    } else {
        miller(x, out);
    }
}

fn series(x: f64, out: &mut [f64]) {
    let half_x2 = 0.5 * x * x;
    let mut leading = 1.0; // x^l / (2l+1)!!
    for (l, slot) in out.iter_mut().enumerate() {
        if l > 0 {
            leading *= x / (2 * l + 1) as f64;
        }
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 1..24 {
            term *= -half_x2 / (k as f64 * (2 * l + 2 * k + 1) as f64);
            sum += term;
            if term.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        *slot = leading * sum;
    }
}

fn miller(x: f64, out: &mut [f64]) {
    let lmax = out.len() - 1;
    let start = lmax + 16 + (10.0 * (lmax as f64 + x)).sqrt() as usize;
    let mut upper = 0.0; // j_{l+1}
    let mut current = 1e-30; // j_l
    for l in (1..=start).rev() {
        let lower = (2 * l + 1) as f64 / x * current - upper;
        upper = current;
        current = lower;
        if l - 1 <= lmax {
            out[l - 1] = current;
        }
        if current.abs() > 1e200 {
            upper *= 1e-200;
            current *= 1e-200;
            for v in out[(l - 1).min(lmax)..].iter_mut() {
                *v *= 1e-200;
            }
        }
    }
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    let scale = if lmax >= 1 {
        let j1 = s / (x * x) - c / x;
        if j0.abs() >= j1.abs() {
            j0 / out[0]
        } else {
            j1 / out[1]
        }
    } else {
        j0 / out[0]
    };
    for v in out.iter_mut() {
        *v *= scale;
    }
}
