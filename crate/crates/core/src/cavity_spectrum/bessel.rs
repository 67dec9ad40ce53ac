//! Integer-order Bessel functions of the first kind and their roots.

use crate::error::{Error, Result};

/// Largest order and root index accepted by the root finders.
pub const MAX_INDEX: u32 = 20;

const SCAN_STEP: f64 = 0.05;

/// `J_n(x)` for integer `n >= 0` and real `x`.
///
/// Ascending series for `|x| < 1`, Miller's backward recurrence normalised
/// by `J_0 + 2 sum J_2k = 1` otherwise.
pub fn bessel_j(n: u32, x: f64) -> f64 {
    if x < 0.0 {
        let v = bessel_j(n, -x);
        return if n % 2 == 1 { -v } else { v };
    }
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    if x < 1.0 {
        return series(n, x);
    }
    miller(n, x)
}

fn series(n: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=n {
        term *= half / k as f64;
    }
    let q = -half * half;
    let mut sum = term;
    for k in 1..60 {
        term *= q / (k as f64 * (k + n) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

fn miller(n: u32, x: f64) -> f64 {
    let top = (n as f64).max(x);
    let mut start = (top + 20.0 + (60.0 * top).sqrt()) as usize;
    start += start % 2;
    let (mut above, mut cur) = (0.0f64, 1e-300f64);
    let mut even_sum = 0.0;
    let mut wanted = 0.0;
    for k in (1..=start).rev() {
        let below = 2.0 * k as f64 / x * cur - above;
        above = cur;
        cur = below;
        // `cur` now holds the unnormalised J_{k-1}
        if k - 1 == n as usize {
            wanted = cur;
        }
        if (k - 1) % 2 == 0 && k > 1 {
            even_sum += cur;
        }
        if cur.abs() > 1e250 {
            cur *= 1e-250;
            above *= 1e-250;
            even_sum *= 1e-250;
            wanted *= 1e-250;
        }
    }
    // cur is J_0
    wanted / (cur + 2.0 * even_sum)
}

/// `J_n'(x) = (J_{n-1}(x) - J_{n+1}(x)) / 2`, with `J_0' = -J_1`.
pub fn bessel_j_prime(n: u32, x: f64) -> f64 {
    if n == 0 {
        -bessel_j(1, x)
    } else {
        0.5 * (bessel_j(n - 1, x) - bessel_j(n + 1, x))
    }
}

fn check_indices(l: u32, m: u32) -> Result<()> {
    if m == 0 {
        return Err(Error::Range("root index m must be at least 1".into()));
    }
    if l > MAX_INDEX || m > MAX_INDEX {
        return Err(Error::Range(format!("(l, m) = ({l}, {m}) exceeds {MAX_INDEX}")));
    }
    Ok(())
}

/// `m`-th positive zero of `f`, scanning upward from `start` and bisecting
/// each sign change.
pub(crate) fn nth_root<F: Fn(f64) -> f64>(f: F, start: f64, m: u32) -> f64 {
    let mut found = 0;
    let mut a = start;
    let mut fa = f(a);
    loop {
        let b = a + SCAN_STEP;
        let fb = f(b);
        if fa == 0.0 || fa.signum() != fb.signum() {
            found += 1;
            if found == m {
                return if fa == 0.0 { a } else { bisect(&f, a, b, fa) };
            }
        }
        a = b;
        fa = fb;
    }
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    while b - a > 1e-14 * b {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// `m`-th positive root of `J_l'`, which sets the TE_lmn cutoff.
pub fn bessel_prime_root(l: u32, m: u32) -> Result<f64> {
    check_indices(l, m)?;
    // every positive zero of J_l' lies above l (and above 0 for l = 0)
    let start = (l as f64).max(0.5);
    Ok(nth_root(|x| bessel_j_prime(l, x), start, m))
}

/// `m`-th positive root of `J_l`, which sets the TM_lmn cutoff.
pub fn bessel_root(l: u32, m: u32) -> Result<f64> {
    check_indices(l, m)?;
    let start = (l as f64).max(0.5);
    Ok(nth_root(|x| bessel_j(l, x), start, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    /// `J_n(x) = (1/pi) int_0^pi cos(n t - x sin t) dt`; the integrand is
    /// smooth and periodic so the trapezoid rule converges geometrically.
    pub(crate) fn bessel_integral(n: u32, x: f64) -> f64 {
        let k = 2000;
        let h = 2.0 * PI / k as f64;
        (0..k).map(|i| (n as f64 * i as f64 * h - x * (i as f64 * h).sin()).cos()).sum::<f64>() * h / (2.0 * PI)
    }

    #[test]
    fn matches_integral_representation() {
        for n in [0, 1, 2, 5, 10, 21] {
            for x in [0.001, 0.3, 0.99, 1.0, 2.5, 7.0, 15.3, 40.0, 95.0] {
                let a = bessel_j(n, x);
                let b = bessel_integral(n, x);
                assert!((a - b).abs() < 1e-13, "J_{n}({x}): {a} vs {b}");
            }
        }
        assert_eq!(bessel_j(0, 0.0), 1.0);
        assert_eq!(bessel_j(3, 0.0), 0.0);
        assert!((bessel_j(1, -2.0) + bessel_j(1, 2.0)).abs() < 1e-16);
    }

    #[test]
    fn tabulated_roots() {
        assert!((bessel_prime_root(1, 1).unwrap() - 1.841_183_781_3).abs() < 1e-10);
        assert!((bessel_prime_root(0, 1).unwrap() - 3.831_705_970_2).abs() < 1e-10);
        assert!((bessel_prime_root(2, 1).unwrap() - 3.054_236_928_2).abs() < 1e-10);
        assert!((bessel_root(0, 1).unwrap() - 2.404_825_557_7).abs() < 1e-10);
        assert!((bessel_root(1, 2).unwrap() - 7.015_586_669_8).abs() < 1e-10);
    }

    #[test]
    fn roots_agree_with_independent_bisection() {
        for (l, m) in [(0, 3), (3, 2), (7, 1), (20, 20), (12, 5)] {
            let fast = bessel_prime_root(l, m).unwrap();
            let d = |x: f64| {
                let h = 1e-5;
                (bessel_integral(l, x + h) - bessel_integral(l, x - h)) / (2.0 * h)
            };
            let (mut a, mut b) = (fast - 0.01, fast + 0.01);
            assert!(d(a).signum() != d(b).signum());
            for _ in 0..60 {
                let mid = 0.5 * (a + b);
                if d(mid).signum() == d(a).signum() { a = mid } else { b = mid }
            }
            assert!((fast - a).abs() < 1e-8, "({l},{m}): {fast} vs {a}");
        }
    }

    #[test]
    fn range_errors() {
        assert!(matches!(bessel_prime_root(21, 1), Err(Error::Range(_))));
        assert!(matches!(bessel_root(1, 21), Err(Error::Range(_))));
        assert!(matches!(bessel_root(1, 0), Err(Error::Range(_))));
    }

    proptest! {
        #[test]
        fn roots_increase_with_m(l in 0u32..=20, m in 1u32..20) {
            prop_assert!(bessel_prime_root(l, m + 1).unwrap() > bessel_prime_root(l, m).unwrap());
            prop_assert!(bessel_root(l, m + 1).unwrap() > bessel_root(l, m).unwrap());
        }

        #[test]
        fn roots_are_zeros(l in 0u32..=20, m in 1u32..=20) {
            let x = bessel_prime_root(l, m).unwrap();
            prop_assert!(bessel_j_prime(l, x).abs() < 1e-12);
            let x = bessel_root(l, m).unwrap();
            prop_assert!(bessel_j(l, x).abs() < 1e-12);
        }
    }
}
