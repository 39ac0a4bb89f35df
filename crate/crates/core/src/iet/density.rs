//! Invariant density checks for the genus-one renormalization maps.
//!
//! The slow map preserves `1/(2x(1-x)) dx`; the accelerated map
//! preserves the two-branch density `1/(2 log 2) * 1/(1-x)` below one
//! half and `1/(2 log 2) * 1/x` above. Pushforward invariance is tested
//! on subintervals through exact branch inverses and numerical
//! quadrature, with the infinite branch family of the accelerated map
//! closed off by an analytic tail.

use crate::num::{Rational, Scalar};

/// Adaptive Simpson quadrature to ~1e-13.
#[allow(clippy::too_many_arguments)]
fn integrate(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    fn simpson(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = (a + b) / 2.0;
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    fn recurse(
        f: &impl Fn(f64) -> f64,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        eps: f64,
        depth: usize,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * eps {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, left, lm, flm, eps / 2.0, depth - 1)
            + recurse(f, m, fm, b, fb, right, rm, frm, eps / 2.0, depth - 1)
    }
    if (b - a).abs() < f64::MIN_POSITIVE {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    recurse(f, a, fa, b, fb, whole, m, fm, 1e-13, 48)
}

pub fn rho_slow(x: f64) -> f64 {
    1.0 / (2.0 * x * (1.0 - x))
}

pub fn rho_fast(x: f64) -> f64 {
    let c = 1.0 / (2.0 * std::f64::consts::LN_2);
    if x < 0.5 {
        c / (1.0 - x)
    } else {
        c / x
    }
}

fn measure(rho: &impl Fn(f64) -> f64, a: &Scalar, b: &Scalar) -> f64 {
    integrate(rho, a.to_f64(), b.to_f64())
}

/// |mu(T^{-1} A) - mu(A)| for the slow map on `A = [a, b]`.
///
/// The two branch inverses are exact: `y -> y/(1+y)` into (0, 1/2) and
/// `y -> 1/(2-y)` into (1/2, 1).
pub fn slow_pushforward_error(a: &Scalar, b: &Scalar) -> f64 {
    let one = Scalar::one();
    let two = Scalar::from_int(2);
    let inv1 = |y: &Scalar| y / &(&one + y);
    let inv2 = |y: &Scalar| one.clone() / (&two - y);
    let direct = measure(&rho_slow, a, b);
    let back = measure(&rho_slow, &inv1(a), &inv1(b)) + measure(&rho_slow, &inv2(a), &inv2(b));
    (direct - back).abs()
}

/// |mu(G^{-1} A) - mu(A)| for the accelerated map on `A = [a, b]` with
/// `A` inside one half of the interval.
///
/// Branch inverses are exact per digit: `y -> y/(1+ky)` into `P_k` when
/// `A` lies above one half, `y -> ((k-1)(1-y)+1)/(k(1-y)+1)` into `Q_k`
/// when below. The first `K` branches integrate numerically; the
/// remaining tail is the telescoped antiderivative difference, which
/// tends to zero like `1/K`.
pub fn fast_pushforward_error(a: &Scalar, b: &Scalar) -> f64 {
    let half = Scalar::Rat(Rational::new(1, 2));
    assert!(
        b.cmp_exact(&half) == std::cmp::Ordering::Less
            || a.cmp_exact(&half) == std::cmp::Ordering::Greater,
        "interval must avoid the branch boundary at 1/2"
    );
    let above = a.cmp_exact(&half) == std::cmp::Ordering::Greater;
    let direct = measure(&rho_fast, a, b);
    let k_max: i64 = 4000;
    let mut back = 0.0;
    for k in 1..=k_max {
        let kk = Scalar::from_int(k);
        let (lo, hi) = if above {
            // preimage in P_k of [a, b]
            let p = |y: &Scalar| y / &(Scalar::one() + &kk * y);
            (p(a), p(b))
        } else {
            // preimage in Q_k of [a, b]
            let q = |y: &Scalar| {
                let om = Scalar::one() - y.clone();
                let num = (&kk - &Scalar::one()) * om.clone() + Scalar::one();
                let den = &kk * &om + Scalar::one();
                num / den
            };
            (q(a), q(b))
        };
        back += measure(&rho_fast, &lo, &hi);
    }
    // Analytic tail of the telescoping series beyond K.
    let (af, bf) = (a.to_f64(), b.to_f64());
    let c = 1.0 / (2.0 * std::f64::consts::LN_2);
    let tail = if above {
        // sum_{k>K} mu(P_k-preimage) = c * [ln(b/a) - ln((1+Kb)/(1+Ka))]
        c * ((bf / af).ln() - ((1.0 + k_max as f64 * bf) / (1.0 + k_max as f64 * af)).ln())
    } else {
        // by the symmetric telescoping in 1 - y
        let (am, bm) = (1.0 - af, 1.0 - bf);
        c * ((am / bm).ln() - ((1.0 + k_max as f64 * am) / (1.0 + k_max as f64 * bm)).ln())
    };
    (direct - back - tail).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Scalar {
        Scalar::Rat(Rational::new(n, d))
    }

    #[test]
    fn quadrature_sanity() {
        let v = integrate(&|x| x * x, 0.0, 1.0);
        assert!((v - 1.0 / 3.0).abs() < 1e-12);
        let v = integrate(&rho_slow, 0.25, 0.75);
        // antiderivative ln(x/(1-x))/2
        let expect = 0.5 * ((3.0f64).ln() - (1.0f64 / 3.0).ln());
        assert!((v - expect).abs() < 1e-11);
    }

    #[test]
    fn slow_density_is_invariant() {
        let cases = [
            (rat(1, 5), rat(2, 5)),
            (rat(1, 3), rat(7, 8)),
            (rat(1, 100), rat(99, 100)),
        ];
        for (a, b) in cases {
            assert!(slow_pushforward_error(&a, &b) < 1e-9);
        }
        // a wrong density fails the same check by a wide margin
        let direct = measure(&|x| 1.0 / x, &rat(1, 5), &rat(2, 5));
        let one = Scalar::one();
        let i1 = |y: &Scalar| y / &(&one + y);
        let two = Scalar::from_int(2);
        let i2 = |y: &Scalar| one.clone() / (&two - y);
        let back = measure(&|x| 1.0 / x, &i1(&rat(1, 5)), &i1(&rat(2, 5)))
            + measure(&|x| 1.0 / x, &i2(&rat(1, 5)), &i2(&rat(2, 5)));
        assert!((direct - back).abs() > 1e-3);
    }

    #[test]
    fn fast_density_is_invariant() {
        for (a, b) in [
            (rat(3, 5), rat(4, 5)),
            (rat(51, 100), rat(99, 100)),
            (rat(1, 10), rat(2, 5)),
            (rat(1, 4), rat(49, 100)),
        ] {
            let err = fast_pushforward_error(&a, &b);
            assert!(err < 1e-9, "error {err} on [{a}, {b}]");
        }
    }
}
