//! Incomplete beta against composite Simpson refinement.

use qgrowth::specfun::{inc_beta, inc_beta_inverse};

fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

/// Halves the Simpson step until successive estimates differ by < 1e-13.
fn refine(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let mut n = 8;
    let mut prev = simpson(f, a, b, n);
    loop {
        n *= 2;
        let next = simpson(f, a, b, n);
        if (next - prev).abs() < 1e-13 || n > 1 << 22 {
            return next;
        }
        prev = next;
    }
}

/// `∫_{x1}^{x2} t^{a−1}(1−t)^{b−1} dt` for `0 ≤ x1 < x2 < 1`, with power
/// substitutions `t = s^m` near 0 and `1 − t = s^m` near 1 so that the
/// Simpson integrand is smooth.
fn oracle(a: f64, b: f64, x1: f64, x2: f64) -> f64 {
    let m0 = (1.0 / a).ceil().max(1.0);
    let m1 = (1.0 / b).ceil().max(1.0);
    let lower = move |s: f64| {
        if s == 0.0 && m0 * a - 1.0 == 0.0 {
            return m0;
        }
        let t = s.powf(m0);
        m0 * s.powf(m0 * a - 1.0) * (1.0 - t).powf(b - 1.0)
    };
    let upper = move |s: f64| {
        if s == 0.0 && m1 * b - 1.0 == 0.0 {
            return m1;
        }
        let t = 1.0 - s.powf(m1);
        m1 * s.powf(m1 * b - 1.0) * t.powf(a - 1.0)
    };
    let split = 0.5f64.clamp(x1, x2);
    let left = refine(&lower, x1.powf(1.0 / m0), split.powf(1.0 / m0));
    let right = refine(&upper, (1.0 - x2).powf(1.0 / m1), (1.0 - split).powf(1.0 / m1));
    left + right
}

const A: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
const B: [f64; 4] = [0.25, 0.5, 1.0, 2.0];

fn xs() -> impl Iterator<Item = f64> {
    (1..=9).map(|i| i as f64 / 10.0)
}

#[test]
fn matches_simpson_oracle() {
    for a in A {
        for b in B {
            for x in xs() {
                let got = inc_beta(a, b, x).unwrap();
                let want = oracle(a, b, 0.0, x);
                assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0), "B_{x}({a},{b}) = {got}, oracle {want}");
            }
        }
    }
}

#[test]
fn inverse_round_trip() {
    for a in A {
        for b in B {
            for x in xs() {
                let target = inc_beta(a, b, x).unwrap();
                let back = inc_beta_inverse(target, a, b, 0.0, 1.0).unwrap();
                assert!((back - x).abs() <= 1e-8, "a={a} b={b} x={x}: {back}");
            }
        }
    }
}

#[test]
fn additive_in_x() {
    for a in A {
        for b in B {
            for (x1, x2) in [(0.1, 0.4), (0.3, 0.7), (0.55, 0.9)] {
                let diff = inc_beta(a, b, x2).unwrap() - inc_beta(a, b, x1).unwrap();
                let piece = oracle(a, b, x1, x2);
                assert!((diff - piece).abs() <= 1e-9, "a={a} b={b} [{x1},{x2}]");
            }
        }
    }
}

#[test]
fn monotone_in_x() {
    for a in A {
        for b in [-0.5, 0.0, 0.25, 2.0] {
            let mut prev = 0.0;
            for i in 1..100 {
                let v = inc_beta(a, b, i as f64 / 100.0).unwrap();
                assert!(v >= prev);
                prev = v;
            }
        }
    }
}
