//! Law of one step of the chain: `sqrt(U) x + sqrt(U) (1 - sqrt(U))` for a
//! fixed state `x`.

use crate::numeric::clamped_sqrt;

/// Right end `((1 + x) / 2)^2` of the support of the one-step law.
#[inline]
pub fn kernel_support_end(x: f64) -> f64 {
    let h = 0.5 * (1.0 + x);
    h * h
}

/// `p_t = 2 sqrt(t) - 1`: states below `p_t` cannot reach `t` in one step.
#[inline]
pub fn p_t(t: f64) -> f64 {
    2.0 * t.sqrt() - 1.0
}

/// `g(x, t) = (1 + x) / sqrt((1 + x)^2 - 4t)`.
#[inline]
pub fn g(x: f64, t: f64) -> f64 {
    (1.0 + x) / ((1.0 + x) * (1.0 + x) - 4.0 * t).sqrt()
}

/// Primitive of `g(., t)` in `x`: `G(x, t) = sqrt((1 + x)^2 - 4t)`, zero at
/// `x = p_t`. Arguments below `p_t` are clamped to it.
#[inline]
pub fn g_primitive(x: f64, t: f64) -> f64 {
    let r = (1.0 + x) * (1.0 + x) - 4.0 * t;
    if r <= 0.0 {
        0.0
    } else {
        r.sqrt()
    }
}

/// Distribution function `F_x(t)` of the one-step law.
#[inline]
pub fn kernel_cdf(x: f64, t: f64) -> f64 {
    if t < 0.0 {
        return 0.0;
    }
    let a = 1.0 + x;
    if t < x {
        let s = 0.5 * (a - clamped_sqrt(a * a - 4.0 * t));
        s * s
    } else if t < kernel_support_end(x) {
        1.0 - a * clamped_sqrt(a * a - 4.0 * t)
    } else {
        1.0
    }
}

/// Density `phi(x, t)` of the one-step law: `2 g` on `p_t < x <= t`,
/// `g - 1` on `t < x <= 1`, zero otherwise.
///
/// Exactly at `x = p_t` the density has an integrable singularity and
/// `f64::INFINITY` is returned.
#[inline]
pub fn kernel_density(x: f64, t: f64) -> f64 {
    if !(0.0..=1.0).contains(&t) {
        return 0.0;
    }
    let pt = p_t(t);
    if x == pt {
        return f64::INFINITY;
    }
    if pt < x && x <= t {
        2.0 * g(x, t)
    } else if t < x && x <= 1.0 {
        g(x, t) - 1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream_rng, uniform};
    use approx::assert_abs_diff_eq;

    /// Composite three-point Gauss–Legendre; never evaluates the endpoints.
    fn gauss3(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
        let nodes = [-(0.6f64.sqrt()), 0.0, 0.6f64.sqrt()];
        let weights = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|i| {
                let mid = a + (i as f64 + 0.5) * h;
                nodes.iter().zip(weights).map(|(z, w)| w * f(mid + 0.5 * h * z)).sum::<f64>()
            })
            .sum::<f64>()
            * 0.5
            * h
    }

    /// Integrates `phi(x, .)` after the substitution `t = end - s^2`, which
    /// removes the inverse-square-root singularity at the support end, split
    /// at the jump `t = x`.
    fn integrate_density(x: f64) -> f64 {
        let end = kernel_support_end(x);
        let f = |s: f64| {
            let v = kernel_density(x, end - s * s);
            if v.is_finite() { 2.0 * s * v } else { 0.0 }
        };
        let width = end.sqrt();
        let jump = if x < end { (end - x).sqrt() } else { 0.0 };
        gauss3(&f, 0.0, jump, 2_000) + gauss3(&f, jump, width, 2_000)
    }

    #[test]
    fn cdf_examples() {
        for x in [0.1, 0.5, 1.0] {
            assert_eq!(kernel_cdf(x, 0.0), 0.0);
        }
        assert_eq!(kernel_cdf(0.0, 0.25), 1.0);
        assert_abs_diff_eq!(kernel_cdf(1.0, 0.75), 0.25, epsilon = 1e-15);
        assert_eq!(kernel_cdf(0.3, -1.0), 0.0);
        assert_eq!(kernel_cdf(0.3, 2.0), 1.0);
    }

    #[test]
    fn cdf_is_continuous_at_branch_boundaries() {
        let eps = 1e-12;
        for i in 0..50 {
            let x = i as f64 / 50.0;
            assert_abs_diff_eq!(kernel_cdf(x, x - eps), kernel_cdf(x, x + eps), epsilon = 1e-9);
            let end = kernel_support_end(x);
            assert_abs_diff_eq!(kernel_cdf(x, end - eps), 1.0, epsilon = 1e-5);
        }
        // At x = 1 the two boundaries meet and F(1, t) = (1 - sqrt(1 - t))^2 has
        // a square-root onset.
        assert_abs_diff_eq!(kernel_cdf(1.0, 1.0 - eps), 1.0, epsilon = 3e-6);
        assert_eq!(kernel_cdf(1.0, 1.0), 1.0);
    }

    #[test]
    fn cdf_matches_monte_carlo_at_x_one() {
        let mut rng = stream_rng(5, 0);
        let n = 200_000;
        let hits = (0..n)
            .filter(|_| {
                let s = uniform(&mut rng).sqrt();
                s + s * (1.0 - s) <= 0.75
            })
            .count();
        assert_abs_diff_eq!(hits as f64 / n as f64, kernel_cdf(1.0, 0.75), epsilon = 4e-3);
    }

    #[test]
    fn density_examples() {
        for x in [0.2, 0.7, 1.0] {
            assert_abs_diff_eq!(kernel_density(x, 0.0), 0.0, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(kernel_density(1.0, 0.125), (8.0f64 / 7.0).sqrt() - 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(kernel_density(0.125, 0.125), 18.0 / 7.0, epsilon = 1e-14);
        assert_eq!(kernel_density(0.0, 0.25), f64::INFINITY);
    }

    #[test]
    fn density_integrates_to_one() {
        for x in [0.0, 1.0 / 3.0, 1.0] {
            assert_abs_diff_eq!(integrate_density(x), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn primitive_differentiates_to_g() {
        let (x, t, h) = (0.6, 0.3, 1e-6);
        let numeric = (g_primitive(x + h, t) - g_primitive(x - h, t)) / (2.0 * h);
        assert_abs_diff_eq!(numeric, g(x, t), epsilon = 1e-7);
        assert_eq!(g_primitive(p_t(t), t), 0.0);
    }
}
