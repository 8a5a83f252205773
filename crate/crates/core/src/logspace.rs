//! Log-domain arithmetic for positive quantities.
//!
//! A positive real `x` is carried as `ln x`; zero is `-inf`. Products and
//! powers become sums and scalings, sums go through [`log_add_exp`].

/// `ln(e^a + e^b)` without overflow.
#[inline]
pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln(e^a - e^b)` for `a >= b`; `-inf` when they are equal.
#[inline]
pub fn log_sub_exp(a: f64, b: f64) -> f64 {
    if b == f64::NEG_INFINITY {
        return a;
    }
    debug_assert!(a >= b, "log_sub_exp({a}, {b})");
    if a <= b {
        return f64::NEG_INFINITY;
    }
    a + (-(b - a).exp_m1()).ln()
}

/// `ln(sum e^x)` over a slice, stable for any spread of magnitudes.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || max.is_infinite() {
        return max;
    }
    max + xs.iter().map(|&x| (x - max).exp()).sum::<f64>().ln()
}

/// `e^a - e^b` as a plain float, computed as `e^a (1 - e^(b-a))`.
#[inline]
pub fn exp_diff(a: f64, b: f64) -> f64 {
    if b == f64::NEG_INFINITY {
        return a.exp();
    }
    if a == f64::NEG_INFINITY {
        return -b.exp();
    }
    if a >= b {
        -a.exp() * (b - a).exp_m1()
    } else {
        b.exp() * (a - b).exp_m1()
    }
}

/// Logs of an elementwise nonnegative slice (`0 -> -inf`).
pub fn ln_all(xs: &[f64]) -> Vec<f64> {
    xs.iter().map(|x| x.ln()).collect()
}

/// `out[i] = ln sum_{j<=i} e^{xs[j]}`.
pub fn log_prefix(xs: &[f64]) -> Vec<f64> {
    let mut acc = f64::NEG_INFINITY;
    xs.iter()
        .map(|&x| {
            acc = log_add_exp(acc, x);
            acc
        })
        .collect()
}

/// `out[i] = ln sum_{j>=i} e^{xs[j]}`.
pub fn log_suffix(xs: &[f64]) -> Vec<f64> {
    let mut out = vec![f64::NEG_INFINITY; xs.len()];
    let mut acc = f64::NEG_INFINITY;
    for i in (0..xs.len()).rev() {
        acc = log_add_exp(acc, xs[i]);
        out[i] = acc;
    }
    out
}

/// Relative difference `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn rel_diff(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn add_and_sub() {
        let a = 3.0_f64.ln();
        let b = 5.0_f64.ln();
        assert!((log_add_exp(a, b).exp() - 8.0).abs() < 1e-14);
        assert!((log_sub_exp(b, a).exp() - 2.0).abs() < 1e-14);
        assert_eq!(log_add_exp(f64::NEG_INFINITY, a), a);
        assert_eq!(log_sub_exp(a, a), f64::NEG_INFINITY);
    }

    #[test]
    fn huge_magnitudes() {
        // e^1000 + e^999 overflows in linear scale.
        let s = log_add_exp(1000.0, 999.0);
        assert!((s - (1000.0 + (1.0 + (-1.0f64).exp()).ln())).abs() < 1e-12);
        let t = log_sum_exp(&[-3000.0, -3000.0, -3000.0]);
        assert!((t - (-3000.0 + 3.0f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn prefix_suffix_match_direct_sums() {
        let xs = [1.0, 2.0, 0.5, 7.0, 1e-3];
        let lx = ln_all(&xs);
        let pre = log_prefix(&lx);
        let suf = log_suffix(&lx);
        for i in 0..xs.len() {
            let p: f64 = xs[..=i].iter().sum();
            let s: f64 = xs[i..].iter().sum();
            assert!(rel_diff(pre[i].exp(), p) < 1e-14);
            assert!(rel_diff(suf[i].exp(), s) < 1e-14);
        }
    }

    #[test]
    fn exp_diff_signs() {
        assert!((exp_diff(2.0f64.ln(), 0.5f64.ln()) - 1.5).abs() < 1e-15);
        assert!((exp_diff(0.5f64.ln(), 2.0f64.ln()) + 1.5).abs() < 1e-15);
        assert_eq!(exp_diff(1.0, 1.0), 0.0);
    }
}
