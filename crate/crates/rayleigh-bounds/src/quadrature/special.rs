//! Scalar special functions used by the bounds.

use std::f64::consts::PI;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Normalized sinc, `sin(πx)/(πx)`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        let t = PI * x;
        1.0 - t * t / 6.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Exponential integral E₁(x) for x > 0.
pub fn expint_e1(x: f64) -> f64 {
    assert!(x > 0.0, "E1 needs x > 0");
    if x <= 1.0 {
        e1_series(x)
    } else {
        scaled_e1_cf(x) * (-x).exp()
    }
}

/// `e^x E₁(x)`, evaluated without overflow for large x.
pub fn scaled_expint_e1(x: f64) -> f64 {
    assert!(x > 0.0, "E1 needs x > 0");
    if x <= 1.0 {
        x.exp() * e1_series(x)
    } else {
        scaled_e1_cf(x)
    }
}

fn e1_series(x: f64) -> f64 {
    // -γ - ln x - Σ (-x)^k / (k k!)
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..200 {
        term *= -x / k as f64;
        let add = term / k as f64;
        sum += add;
        if add.abs() < 1e-17 * sum.abs().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - x.ln() - sum
}

// Modified Lentz evaluation of the continued fraction for e^x E₁(x), x > 1.
fn scaled_e1_cf(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            return h;
        }
    }
    h
}
