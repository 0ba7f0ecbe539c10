use serde::{Deserialize, Serialize};

use crate::exact::EULER_GAMMA;

/// The tilt `c` solving `θ(1 − e^{−c}) = c` and the asymptotic acceptance
/// speed-up `e^{u(c)}` it buys the conditioned-Poisson sampler.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TiltSolution {
    pub theta: f64,
    pub c: f64,
    /// `e^{u(c)}`, `u(c) = −c + θ ∫_0^1 (1 − e^{−cv})/v dv`.
    pub speedup: f64,
}

impl TiltSolution {
    /// Poisson mean scale `x = e^{−c/n}`.
    pub fn x(&self, n: usize) -> f64 {
        (-self.c / n as f64).exp()
    }

    pub fn residual(&self) -> f64 {
        self.theta * (-(-self.c).exp_m1()) - self.c
    }

    /// The untilted choice `x = 1`.
    pub fn untilted(theta: f64) -> Self {
        TiltSolution {
            theta,
            c: 0.0,
            speedup: 1.0,
        }
    }
}

// Roots closer to zero than this are the trivial root.
const ROOT_EXCLUSION: f64 = 1e-8;

/// Finds the non-trivial root of `θ(1 − e^{−c}) = c` (negative for `θ < 1`,
/// positive for `θ > 1`, zero at `θ = 1`) by Newton steps safeguarded with
/// bisection.
pub fn solve_tilt(theta: f64) -> TiltSolution {
    assert!(theta.is_finite() && theta > 0.0, "theta must be positive");
    if theta == 1.0 {
        return TiltSolution::untilted(theta);
    }
    let f = |c: f64| theta * (-(-c).exp_m1()) - c;
    let df = |c: f64| theta * (-c).exp() - 1.0;

    // f > 0 just off zero on the root's side, f → −∞ far out
    let sign = if theta > 1.0 { 1.0 } else { -1.0 };
    let mut near = sign * ROOT_EXCLUSION;
    let mut far = sign * 50.0;
    while f(far) > 0.0 {
        far *= 2.0;
    }
    let mut c = if theta > 1.0 {
        theta
    } else {
        0.5 * (near + far)
    };
    if (c - near) * (c - far) > 0.0 {
        c = 0.5 * (near + far);
    }
    for _ in 0..200 {
        let fc = f(c);
        if fc == 0.0 {
            break;
        }
        if fc > 0.0 {
            near = c;
        } else {
            far = c;
        }
        let step = c - fc / df(c);
        let next = if (step - near) * (step - far) <= 0.0 {
            step
        } else {
            0.5 * (near + far)
        };
        if (next - c).abs() <= 4.0 * f64::EPSILON * c.abs() {
            c = next;
            break;
        }
        c = next;
    }
    TiltSolution {
        theta,
        c,
        speedup: log_speedup(theta, c).exp(),
    }
}

/// `u(c) = −c + θ·Ein(c)` with `Ein(c) = Σ_{k≥1} (−1)^{k+1} c^k/(k·k!)`.
fn log_speedup(theta: f64, c: f64) -> f64 {
    -c + theta * ein(c)
}

// Above this the alternating series cancels badly; use Ein(c) = γ + ln c + E1(c).
const EIN_SERIES_MAX: f64 = 20.0;

fn ein(c: f64) -> f64 {
    if c > EIN_SERIES_MAX {
        return EULER_GAMMA + c.ln() + exp_integral_e1(c);
    }
    let mut sum = 0.0;
    let mut power_over_fact = 1.0; // (−c)^k / k!
    for k in 1..500 {
        let kf = k as f64;
        power_over_fact *= -c / kf;
        let term = -power_over_fact / kf;
        sum += term;
        if term.abs() < 1e-16 * sum.abs() {
            break;
        }
    }
    sum
}

/// `E1(x)` for large positive `x` by its continued fraction.
fn exp_integral_e1(x: f64) -> f64 {
    let mut b = x + 1.0;
    let mut c = 1e300;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h * (-x).exp()
}
