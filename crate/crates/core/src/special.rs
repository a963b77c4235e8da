//! Closed-form profiles of the diffusing vortex: the Gaussian vorticity `G`,
//! its stream function `Υ`, the entire exponential integral `Ein`, the
//! coercivity weight `W₀`, the leading vorticity–stream functional `F₀`, and
//! the harmonic polynomials `Qₙ`.

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Series/asymptotic switch point for [`ein`]. Below this the alternating
/// power series loses at most two digits to cancellation; above it
/// `E₁(x)` is tiny and the continued fraction converges in a few dozen terms.
const EIN_SWITCH: f64 = 8.0;

/// Entire exponential integral `Ein(x) = ∫₀ˣ (1−e^{−t})/t dt` for `x ≥ 0`.
///
/// Power series `Σ (−1)^{k+1} xᵏ/(k·k!)` up to the switch point, and
/// `γ + ln x + E₁(x)` beyond it. Relative accuracy is everywhere better
/// than 1e−13.
pub fn ein(x: f64) -> f64 {
    assert!(x >= 0.0, "ein: negative argument {x}");
    if x == 0.0 {
        return 0.0;
    }
    if x <= EIN_SWITCH {
        let mut term = x;
        let mut sum = x;
        let mut k = 1usize;
        while term.abs() > 1e-17 * sum.abs() && k < 200 {
            let kf = k as f64;
            term *= -x * kf / ((kf + 1.0) * (kf + 1.0));
            sum += term;
            k += 1;
        }
        sum
    } else {
        EULER_GAMMA + x.ln() + exp_e1(x)
    }
}

/// Exponential integral `E₁(x) = ∫ₓ^∞ e^{−t}/t dt` for `x > 0`, by the
/// standard continued fraction (reliable for `x ≳ 1`; we only use it past
/// the [`ein`] switch point).
pub fn exp_e1(x: f64) -> f64 {
    assert!(x > 0.0, "exp_e1: nonpositive argument {x}");
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..200 {
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

/// Gaussian vortex profile `G(ρ) = e^{−ρ²/4}/(4π)`; unit total circulation.
pub fn gaussian_g(rho: f64) -> f64 {
    (-rho * rho / 4.0).exp() / (4.0 * std::f64::consts::PI)
}

/// Radial derivative `G′(ρ) = −(ρ/2)·G(ρ)`.
pub fn gaussian_g_prime(rho: f64) -> f64 {
    -0.5 * rho * gaussian_g(rho)
}

/// Stream function of the Gaussian vortex, `Υ(ρ) = (Ein(ρ²/4) − γ)/(4π)`.
///
/// Values carry the `Ein` normalization; only derivatives of `Υ` enter any
/// transport bracket, so the additive constant is a pure convention.
pub fn upsilon(rho: f64) -> f64 {
    (ein(rho * rho / 4.0) - EULER_GAMMA) / (4.0 * std::f64::consts::PI)
}

/// Azimuthal velocity factor `Υ′(ρ) = (1 − e^{−ρ²/4})/(2πρ)`, continued by
/// its limit 0 at `ρ = 0`.
pub fn upsilon_prime(rho: f64) -> f64 {
    if rho == 0.0 {
        return 0.0;
    }
    -(-rho * rho / 4.0).exp_m1() / (2.0 * std::f64::consts::PI * rho)
}

/// Coercivity weight `W₀(ρ) = 4ρ^{−2}(e^{ρ²/4} − 1)`, with the removable
/// singularity at the origin filled by its limit 1.
pub fn w0_weight(rho: f64) -> f64 {
    let x = rho * rho / 4.0;
    if x < 1e-4 {
        1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0
    } else {
        x.exp_m1() / x
    }
}

/// Leading vorticity–stream functional `F₀(s) = (Γ/4π)(γ − Ein(ln(Γ/4πs)))`,
/// defined for `0 < s ≤ Γ/4π` when `Γ > 0` and extended to `Γ < 0` by the odd
/// symmetry `F₀(s; −Γ) = −F₀(−s; Γ)`.
pub fn f0(s: f64, gamma: f64) -> f64 {
    assert!(gamma != 0.0, "f0: zero total circulation");
    if gamma < 0.0 {
        return -f0(-s, -gamma);
    }
    let u = f0_log_arg(s, gamma);
    gamma / (4.0 * std::f64::consts::PI) * (EULER_GAMMA - ein(u))
}

/// Derivative `F₀′(s) = (Γ/4πs)·(1 − e^{−u})/u` with `u = ln(Γ/4πs)`.
///
/// On the Gaussian family this reproduces the weight: `F₀′(Γ·G(ρ)) = W₀(ρ)`.
pub fn f0_prime(s: f64, gamma: f64) -> f64 {
    assert!(gamma != 0.0, "f0_prime: zero total circulation");
    if gamma < 0.0 {
        return f0_prime(-s, -gamma);
    }
    let u = f0_log_arg(s, gamma);
    let ratio = if u == 0.0 { 1.0 } else { -(-u).exp_m1() / u };
    gamma / (4.0 * std::f64::consts::PI * s) * ratio
}

/// Argument `u = ln(Γ/4πs)` of the `F₀` formulas, with the domain check
/// `0 < s ≤ Γ/4π` (a hair of slack absorbs roundoff at the endpoint).
fn f0_log_arg(s: f64, gamma: f64) -> f64 {
    assert!(
        s > 0.0,
        "f0: vorticity value {s} outside the admissible range (0, gamma/4pi]"
    );
    let u = (gamma / (4.0 * std::f64::consts::PI * s)).ln();
    assert!(
        u >= -1e-10,
        "f0: vorticity value {s} exceeds the Gaussian peak gamma/4pi"
    );
    u.max(0.0)
}

/// Trigonometric flavor of an angular harmonic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Trig {
    Cos,
    Sin,
}

/// Harmonic polynomial `Qₙ(ξ)`: the real (`Cos`) or imaginary (`Sin`) part of
/// `(ξ₁ + iξ₂)ⁿ`, i.e. `ρⁿ cos nθ` or `ρⁿ sin nθ`.
pub fn harmonic_q(n: usize, kind: Trig, xi: [f64; 2]) -> f64 {
    if n == 0 {
        match kind {
            Trig::Cos => return 1.0,
            Trig::Sin => panic!("harmonic_q: sin harmonic undefined at n = 0"),
        }
    }
    let (mut re, mut im) = (1.0f64, 0.0f64);
    for _ in 0..n {
        let (r, i) = (re, im);
        re = r * xi[0] - i * xi[1];
        im = r * xi[1] + i * xi[0];
    }
    match kind {
        Trig::Cos => re,
        Trig::Sin => im,
    }
}

/// Gradient of [`harmonic_q`], using the degree-lowering recursions
/// `∂₁Qᶜₙ = nQᶜₙ₋₁`, `∂₂Qᶜₙ = −nQˢₙ₋₁`, `∂₁Qˢₙ = nQˢₙ₋₁`, `∂₂Qˢₙ = nQᶜₙ₋₁`.
pub fn harmonic_q_grad(n: usize, kind: Trig, xi: [f64; 2]) -> [f64; 2] {
    if n == 0 {
        return [0.0, 0.0];
    }
    let nf = n as f64;
    let qc = harmonic_q(n - 1, Trig::Cos, xi);
    let qs = if n == 1 {
        0.0
    } else {
        harmonic_q(n - 1, Trig::Sin, xi)
    };
    match kind {
        Trig::Cos => [nf * qc, -nf * qs],
        Trig::Sin => [nf * qs, nf * qc],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ein_vanishes_at_zero() {
        assert_eq!(ein(0.0), 0.0);
    }

    #[test]
    fn ein_branches_agree_at_switch() {
        let below = ein(EIN_SWITCH);
        let above = EULER_GAMMA + EIN_SWITCH.ln() + exp_e1(EIN_SWITCH);
        assert_relative_eq!(below, above, max_relative = 1e-13);
    }

    #[test]
    fn ein_large_argument_is_log_plus_gamma() {
        // E₁(25) < 1e−12, so the asymptote γ + ln x carries all the digits.
        assert_relative_eq!(ein(25.0), EULER_GAMMA + 25f64.ln(), max_relative = 1e-11);
        assert!(exp_e1(25.0) < 1e-12);
    }

    #[test]
    fn gaussian_peak_value() {
        assert_relative_eq!(
            gaussian_g(0.0),
            1.0 / (4.0 * std::f64::consts::PI),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            gaussian_g(2.0),
            (-1.0f64).exp() / (4.0 * std::f64::consts::PI),
            max_relative = 1e-15
        );
    }

    #[test]
    fn upsilon_at_zero_is_minus_gamma_over_4pi() {
        assert_relative_eq!(
            upsilon(0.0),
            -EULER_GAMMA / (4.0 * std::f64::consts::PI),
            max_relative = 1e-15
        );
    }

    #[test]
    fn circulation_function_identity() {
        for rho in [0.3, 1.0, 2.5, 6.0] {
            let lhs = 2.0 * std::f64::consts::PI * rho * upsilon_prime(rho);
            let rhs = 1.0 - (-rho * rho / 4.0).exp();
            assert_relative_eq!(lhs, rhs, max_relative = 1e-14);
        }
    }

    #[test]
    fn w0_limit_and_value() {
        assert_eq!(w0_weight(0.0), 1.0);
        assert_relative_eq!(w0_weight(2.0), std::f64::consts::E - 1.0, max_relative = 1e-14);
        // Taylor and expm1 branches agree at the seam point itself.
        let x = 1e-4f64;
        let taylor = 1.0 + x / 2.0 + x * x / 6.0 + x * x * x / 24.0;
        assert_relative_eq!(taylor, x.exp_m1() / x, epsilon = 1e-14);
    }

    #[test]
    fn f0_negative_circulation_symmetry() {
        let (s, gamma) = (0.01, 1.7);
        assert_relative_eq!(f0(-s, -gamma), -f0(s, gamma), max_relative = 1e-14);
        assert_relative_eq!(f0_prime(-s, -gamma), f0_prime(s, gamma), max_relative = 1e-14);
    }

    #[test]
    fn harmonic_q_low_orders() {
        let xi = [1.0, 1.0];
        assert_relative_eq!(harmonic_q(2, Trig::Cos, xi), 0.0, epsilon = 1e-14);
        assert_eq!(harmonic_q(1, Trig::Cos, [0.3, -0.7]), 0.3);
        assert_eq!(harmonic_q(1, Trig::Sin, [0.3, -0.7]), -0.7);
        assert_eq!(harmonic_q(0, Trig::Cos, xi), 1.0);
    }

    #[test]
    fn harmonic_q_recursion_exact() {
        // Degree-lowering recursion at machine precision for n ≤ 8.
        let pts = [[0.5, 1.25], [-2.0, 0.75], [3.0, -1.5], [0.0, 2.0]];
        for n in 1..=8usize {
            for &p in &pts {
                let g = harmonic_q_grad(n, Trig::Cos, p);
                let nf = n as f64;
                assert_relative_eq!(
                    g[0],
                    nf * harmonic_q(n - 1, Trig::Cos, p),
                    max_relative = 1e-15
                );
                if n > 1 {
                    assert_relative_eq!(
                        g[1],
                        -nf * harmonic_q(n - 1, Trig::Sin, p),
                        max_relative = 1e-15
                    );
                }
            }
        }
    }
}
