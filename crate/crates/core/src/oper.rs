//! The operator toolbox for vorticity fields around a Gaussian vortex: the
//! drift-diffusion generator `L` and its adjoint, per-mode Poisson inversion,
//! the linearized advection operator `Λ` with its inverse and adjoint, and
//! the resolvent of `L`.
//!
//! `L f = Δf + (ξ/2)·∇f + f` generates the self-similar heat evolution;
//! `Λ f = {Υ, f} + {Δ⁻¹f, G}` is the advection linearization, skew-adjoint
//! in the Gaussian-weighted space.

use std::sync::Arc;

use crate::grid::{fornberg_weights, FactorKey, RadialGrid};
use crate::linalg::{BandedLu, BandedMatrix};
use crate::mode::{DecayClass, ModeField, RadialProfile};
use crate::special::{gaussian_g, gaussian_g_prime, upsilon_prime, Trig};

/// Failure modes of the operator solves.
#[derive(Clone, Debug)]
pub enum OperError {
    /// Mode-1 inversion requested for data outside the zero-first-moment
    /// subspace on which the operator is invertible.
    MomentCondition { moment: f64, norm: f64 },
    /// The discretized boundary-value problem was singular.
    SingularSystem { mode: usize },
}

impl std::fmt::Display for OperError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            OperError::MomentCondition { moment, norm } => write!(
                f,
                "mode-1 inversion is only defined on the zero-first-moment subspace: \
                 input has moment {moment:.3e} against norm {norm:.3e}"
            ),
            OperError::SingularSystem { mode } => {
                write!(f, "singular boundary-value system at mode {mode}")
            }
        }
    }
}

impl std::error::Error for OperError {}

/// Drift-diffusion generator `L f = Δf + (ρ/2)∂ρf + f`.
pub fn apply_l(f: &ModeField) -> ModeField {
    let half_rho: Vec<f64> = f.grid().nodes().iter().map(|r| 0.5 * r).collect();
    let mut out = f.laplacian();
    out.axpy(1.0, &f.d_rho().times_radial(&half_rho, f.decay()));
    out.axpy(1.0, f);
    out
}

/// Adjoint generator `L* f = Δf − (ρ/2)∂ρf`.
pub fn apply_l_star(f: &ModeField) -> ModeField {
    let half_rho: Vec<f64> = f.grid().nodes().iter().map(|r| 0.5 * r).collect();
    let mut out = f.laplacian();
    out.axpy(-1.0, &f.d_rho().times_radial(&half_rho, f.decay()));
    out
}

/// Result of a per-mode Poisson inversion.
#[derive(Clone, Debug)]
pub struct PoissonSolution {
    pub profile: RadialProfile,
    /// Coefficient of the `ln ρ` far field (zero for modes `n ≥ 1`); the
    /// mode-0 solution decays only when this vanishes.
    pub log_coefficient: f64,
}

/// Solves the per-mode Poisson equation `a″ + a′/ρ − n²a/ρ² = b` with
/// regularity at the axis, via the explicit Green's kernel.
///
/// For `n ≥ 1` the decaying solution is
/// `a(ρ) = −(1/2n)[ρ^{−n}∫₀^ρ s^{n+1}b ds + ρⁿ∫_ρ^∞ s^{1−n}b ds]`.
/// For `n = 0` it is `a(ρ) = ln ρ·P(ρ) + ∫_ρ^∞ s ln s·b ds` with
/// `P(ρ) = ∫₀^ρ s b ds` the running mass, evaluated in the equivalent
/// log-free form `a(ρ) = ln(ρ_max)·P(ρ_max) − ∫_ρ^{ρ_max} P(s)/s ds`;
/// the far field carries `log_coefficient · ln ρ`.
pub fn poisson_inverse_mode(n: usize, b: &RadialProfile) -> PoissonSolution {
    let grid = b.grid().clone();
    let rho = grid.nodes();
    if n == 0 {
        let running_mass = grid.cumulative_rho_integral(b.values());
        let total = *running_mass.last().unwrap();
        let over_rho_sq: Vec<f64> = running_mass
            .iter()
            .zip(rho)
            .map(|(p, r)| p / (r * r))
            .collect();
        let tail = grid.outward_rho_integral(&over_rho_sq);
        let log_r_max = grid.rho_max().ln();
        let values: Vec<f64> = (0..grid.len())
            .map(|j| log_r_max * total - tail[j])
            .collect();
        return PoissonSolution {
            profile: RadialProfile::new(grid, values, DecayClass::Polynomial),
            log_coefficient: total,
        };
    }
    let ni = n as i32;
    let grow: Vec<f64> = b
        .values()
        .iter()
        .zip(rho)
        .map(|(v, r)| v * r.powi(ni))
        .collect();
    let shrink: Vec<f64> = b
        .values()
        .iter()
        .zip(rho)
        .map(|(v, r)| v * r.powi(-ni))
        .collect();
    let inward = grid.cumulative_rho_integral(&grow);
    let outward = grid.outward_rho_integral(&shrink);
    let c = -0.5 / n as f64;
    let values: Vec<f64> = (0..grid.len())
        .map(|j| c * (rho[j].powi(-ni) * inward[j] + rho[j].powi(ni) * outward[j]))
        .collect();
    PoissonSolution {
        profile: RadialProfile::new(grid, values, DecayClass::Polynomial),
        log_coefficient: 0.0,
    }
}

/// Stream function `Δ⁻¹f`, assembled harmonic by harmonic with the log-free
/// mode-0 convention (spatial constants are dropped).
pub fn stream_field(f: &ModeField) -> ModeField {
    let mut out = ModeField::zeros(f.grid().clone(), f.max_mode(), DecayClass::Polynomial);
    for m in 0..=f.max_mode() {
        for trig in [Trig::Cos, Trig::Sin] {
            if m == 0 && trig == Trig::Sin {
                continue;
            }
            let row = f.profile(m, trig);
            if row.values().iter().all(|v| *v == 0.0) {
                continue;
            }
            let sol = poisson_inverse_mode(m, &row);
            out.add_harmonic(m as isize, trig, sol.profile.values(), 1.0);
        }
    }
    out
}

/// Linearized advection operator `Λf = {Υ, f} + {Δ⁻¹f, G}`.
///
/// Acts harmonic by harmonic: `a cos kϑ ↦ k[φG′ − Υ′a]/ρ · sin kϑ` and
/// `a sin kϑ ↦ −k[φG′ − Υ′a]/ρ · cos kϑ` with `φ` the mode-`k` Poisson
/// inverse of `a`; every purely radial field is annihilated.
pub fn apply_lambda(f: &ModeField) -> ModeField {
    let grid = f.grid().clone();
    let rho = grid.nodes();
    let gp = grid.sample(gaussian_g_prime);
    let up = grid.sample(upsilon_prime);
    let mut out = ModeField::zeros(grid.clone(), f.max_mode().max(1), f.decay());
    for k in 1..=f.max_mode() {
        for trig in [Trig::Cos, Trig::Sin] {
            let row = match trig {
                Trig::Cos => f.cos_profile(k),
                Trig::Sin => f.sin_profile(k),
            };
            if row.iter().all(|&v| v == 0.0) {
                continue;
            }
            let a: Vec<f64> = row.to_vec();
            let phi = poisson_inverse_mode(
                k,
                &RadialProfile::new(grid.clone(), a.clone(), f.decay()),
            );
            let w: Vec<f64> = (0..grid.len())
                .map(|j| {
                    k as f64 * (gp[j] * phi.profile.values()[j] - up[j] * a[j]) / rho[j]
                })
                .collect();
            match trig {
                Trig::Cos => out.add_harmonic(k as isize, Trig::Sin, &w, 1.0),
                Trig::Sin => out.add_harmonic(k as isize, Trig::Cos, &w, -1.0),
            }
        }
    }
    out
}

/// Adjoint `Λ*ϱ = −{Υ, ϱ} − Δ⁻¹{ϱ, G}`, computed through the conjugation
/// identity `Λ*ϱ = −G⁻¹ Λ[Gϱ]` (valid for polynomially growing ϱ).
pub fn apply_lambda_star(rho_field: &ModeField) -> ModeField {
    let grid = rho_field.grid().clone();
    let g = grid.sample(gaussian_g);
    let ginv: Vec<f64> = g.iter().map(|v| 1.0 / v).collect();
    let inner = rho_field.times_radial(&g, DecayClass::SchwartzWeighted);
    let mut out = apply_lambda(&inner).times_radial(&ginv, DecayClass::Polynomial);
    out.scale(-1.0);
    out
}

/// A single-harmonic solution field `profile(ρ) · trig(kϑ)` produced by an
/// operator inversion, with the magnitude of any input projection applied.
#[derive(Clone, Debug)]
pub struct HarmonicSolution {
    pub profile: RadialProfile,
    pub trig: Trig,
    pub mode: usize,
    /// First-moment component removed from nearly admissible mode-1 data.
    pub projected_moment: f64,
}

impl HarmonicSolution {
    /// The solution as a full field.
    pub fn field(&self) -> ModeField {
        ModeField::harmonic(
            self.profile.grid().clone(),
            self.mode,
            self.trig,
            self.profile.values(),
            self.profile.decay(),
        )
    }
}

/// Inverts `Λ` on a single harmonic: given the radial factor `b` of a
/// mode-`n` field `b·trig(nϑ)`, returns the field solving `Λ[sol] = input`.
///
/// The output harmonic flips parity (sin input → cos output and vice versa).
/// The underlying stream factor `φ` solves the boundary-value problem
/// `−φ″ − φ′/ρ + (n²/ρ² − V)φ = S·b` with `V = (ρ²/4)/(e^{ρ²/4}−1)` and
/// `S = 2πρ²/(n(1−e^{−ρ²/4}))`, and the solution factor is `w = −Vφ − Sb`.
///
/// For `n = 1` the operator is invertible only on zero-first-moment data:
/// a moment within `1e−10` of zero (relative to the input norm) is projected
/// out and reported, anything larger is an error. The output is projected
/// onto the zero-moment subspace as well, which removes the kernel direction
/// `∂G` the discrete solve cannot pin down.
pub fn invert_lambda(
    n: usize,
    b: &RadialProfile,
    input_trig: Trig,
) -> Result<HarmonicSolution, OperError> {
    assert!(n >= 1, "mode 0 lies in the kernel and cannot be inverted");
    let grid = b.grid().clone();
    let rho = grid.nodes();
    let nn = grid.len();
    let mut bvals = b.values().to_vec();
    let mut projected_moment = 0.0;
    let gp = grid.sample(gaussian_g_prime);
    if n == 1 {
        let moment = first_moment_of_mode1(&grid, &bvals);
        let norm = field_norm_of_mode(&grid, &bvals);
        if moment.abs() > 1e-10 * norm.max(f64::MIN_POSITIVE) {
            return Err(OperError::MomentCondition { moment, norm });
        }
        // The mode-1 profile of ∂G carries first moment −1, so adding
        // moment·∂G cancels the residual moment exactly.
        for (v, g) in bvals.iter_mut().zip(&gp) {
            *v += moment * g;
        }
        projected_moment = moment;
    }
    let lu = grid.cached_factorization(FactorKey::LambdaBvp { n: n as u32 }, || {
        build_lambda_bvp(&grid, n)
    });
    let rhs: Vec<f64> = (0..nn)
        .map(|j| {
            if j == 0 || j == nn - 1 {
                0.0
            } else {
                source_s(rho[j], n) * bvals[j]
            }
        })
        .collect();
    let mut phi = lu.solve(&rhs);
    // Defect correction with the high-order derivative stencils: the banded
    // factorization absorbs the residual left by its own three-point rows.
    for _ in 0..2 {
        let d1 = grid.deriv1(&phi);
        let d2 = grid.deriv2(&phi);
        let mut corr_rhs = vec![0.0; nn];
        for i in 1..nn - 1 {
            let n_sq = ((n * n) as f64) / (rho[i] * rho[i]);
            let applied = -d2[i] - d1[i] / rho[i] + (n_sq - potential_v(rho[i])) * phi[i];
            corr_rhs[i] = source_s(rho[i], n) * bvals[i] - applied;
        }
        let delta = lu.solve(&corr_rhs);
        for (p, d) in phi.iter_mut().zip(&delta) {
            *p += d;
        }
    }
    let mut w: Vec<f64> = (0..nn)
        .map(|j| -potential_v(rho[j]) * phi[j] - source_s(rho[j], n) * bvals[j])
        .collect();
    if n == 1 {
        let out_moment = first_moment_of_mode1(&grid, &w);
        for (v, g) in w.iter_mut().zip(&gp) {
            *v += out_moment * g;
        }
    }
    let (out_trig, sign) = match input_trig {
        Trig::Sin => (Trig::Cos, 1.0),
        Trig::Cos => (Trig::Sin, -1.0),
    };
    if sign < 0.0 {
        for v in &mut w {
            *v = -*v;
        }
    }
    Ok(HarmonicSolution {
        profile: RadialProfile::new(grid, w, DecayClass::SchwartzWeighted),
        trig: out_trig,
        mode: n,
        projected_moment,
    })
}

/// Inverts the adjoint: returns the polynomially growing field `ϱ` with
/// `Λ*[ϱ] = h·trig(nϑ)`, through `Λ[Gϱ] = −G·h`.
pub fn invert_lambda_star(
    n: usize,
    h: &RadialProfile,
    input_trig: Trig,
) -> Result<HarmonicSolution, OperError> {
    let grid = h.grid().clone();
    let g = grid.sample(gaussian_g);
    let rhs: Vec<f64> = h.values().iter().zip(&g).map(|(v, gg)| -v * gg).collect();
    let inner = invert_lambda(
        n,
        &RadialProfile::new(grid.clone(), rhs, DecayClass::SchwartzWeighted),
        input_trig,
    )?;
    let values: Vec<f64> = inner
        .profile
        .values()
        .iter()
        .zip(&g)
        .map(|(v, gg)| v / gg)
        .collect();
    Ok(HarmonicSolution {
        profile: RadialProfile::new(grid, values, DecayClass::Polynomial),
        trig: inner.trig,
        mode: n,
        projected_moment: inner.projected_moment,
    })
}

/// Solves `(κ − L) a = b` on one angular mode, `κ > 0`, with axis regularity
/// and a decaying far field.
pub fn resolvent_solve(kappa: f64, n: usize, b: &RadialProfile) -> RadialProfile {
    assert!(kappa > 0.0, "resolvent requires a positive shift");
    let grid = b.grid().clone();
    let nn = grid.len();
    let lu = grid.cached_factorization(
        FactorKey::Resolvent {
            n: n as u32,
            kappa_bits: kappa.to_bits(),
        },
        || build_resolvent(&grid, kappa, n),
    );
    let rhs: Vec<f64> = (0..nn)
        .map(|j| if j == 0 || j == nn - 1 { 0.0 } else { b.values()[j] })
        .collect();
    let mut a = lu.solve(&rhs);
    // Defect correction with the high-order derivative stencils: the banded
    // factorization absorbs the residual left by its own three-point rows.
    let rho = grid.nodes();
    for _ in 0..2 {
        let d1 = grid.deriv1(&a);
        let d2 = grid.deriv2(&a);
        let mut corr_rhs = vec![0.0; nn];
        for i in 1..nn - 1 {
            let n_sq = (n * n) as f64 / (rho[i] * rho[i]);
            let applied =
                d2[i] + (1.0 / rho[i] + 0.5 * rho[i]) * d1[i] + (1.0 - n_sq) * a[i];
            corr_rhs[i] = b.values()[i] - (kappa * a[i] - applied);
        }
        let delta = lu.solve(&corr_rhs);
        for (v, d) in a.iter_mut().zip(&delta) {
            *v += d;
        }
    }
    RadialProfile::new(grid, a, DecayClass::SchwartzWeighted)
}

/// Rotation-rate potential `V(ρ) = (ρ²/4)/(e^{ρ²/4} − 1)`, continued by 1 at
/// the axis.
pub fn potential_v(rho: f64) -> f64 {
    if rho < 1e-6 {
        return 1.0;
    }
    let x = rho * rho / 4.0;
    x / x.exp_m1()
}

/// Source factor `S(ρ) = 2πρ²/(n(1 − e^{−ρ²/4}))`, continued by `8π/n` at
/// the axis.
pub fn source_s(rho: f64, n: usize) -> f64 {
    if rho < 1e-6 {
        return 8.0 * std::f64::consts::PI / n as f64;
    }
    let x = rho * rho / 4.0;
    -2.0 * std::f64::consts::PI * rho * rho / (n as f64 * (-x).exp_m1())
}

/// First moment `∫ ξ_j f dξ` of a mode-1 field with radial factor `a`.
fn first_moment_of_mode1(grid: &Arc<RadialGrid>, a: &[f64]) -> f64 {
    let weighted: Vec<f64> = a.iter().zip(grid.nodes()).map(|(v, r)| v * r).collect();
    std::f64::consts::PI * grid.integrate_rho(&weighted)
}

/// Plane L² norm of a single-harmonic field with radial factor `a`.
fn field_norm_of_mode(grid: &Arc<RadialGrid>, a: &[f64]) -> f64 {
    let sq: Vec<f64> = a.iter().map(|v| v * v).collect();
    (std::f64::consts::PI * grid.integrate_rho(&sq)).max(0.0).sqrt()
}

/// Assembles the mode-`n` stream boundary-value problem
/// `−φ″ − φ′/ρ + (n²/ρ² − V)φ = rhs` with second-order centered interior
/// stencils, a `ρⁿ` regularity row at the axis, and a Robin row
/// `φ′ + (n/ρ)φ = 0` at the outer boundary matching the decaying harmonic.
fn build_lambda_bvp(grid: &Arc<RadialGrid>, n: usize) -> BandedLu {
    let rho = grid.nodes();
    let nn = grid.len();
    let mut m = BandedMatrix::zeros(nn, 4, 1);
    m.set(0, 0, (rho[1] / rho[0]).powi(n as i32));
    m.set(0, 1, -1.0);
    for i in 1..nn - 1 {
        let w = fornberg_weights(rho[i], &rho[i - 1..=i + 1], 2);
        for (k, col) in (i - 1..=i + 1).enumerate() {
            let mut entry = -w[2][k] - w[1][k] / rho[i];
            if col == i {
                entry += (n * n) as f64 / (rho[i] * rho[i]) - potential_v(rho[i]);
            }
            m.set(i, col, entry);
        }
    }
    let w = fornberg_weights(rho[nn - 1], &rho[nn - 5..=nn - 1], 1);
    for (k, col) in (nn - 5..=nn - 1).enumerate() {
        let mut entry = w[1][k];
        if col == nn - 1 {
            entry += n as f64 / rho[nn - 1];
        }
        m.set(nn - 1, col, entry);
    }
    m.factorize()
        .unwrap_or_else(|e| panic!("stream boundary-value problem at mode {n}: {e}"))
}

/// Assembles `(κ − L)` on mode `n` with the same second-order machinery,
/// axis regularity, and a Dirichlet far-field row.
fn build_resolvent(grid: &Arc<RadialGrid>, kappa: f64, n: usize) -> BandedLu {
    let rho = grid.nodes();
    let nn = grid.len();
    let mut m = BandedMatrix::zeros(nn, 1, 2);
    if n == 0 {
        // Even regularity: the first three nodes must agree with a single
        // parabola in ρ², which pins the axis value to fourth order.
        let (s0, s1, s2) = (rho[0] * rho[0], rho[1] * rho[1], rho[2] * rho[2]);
        m.set(0, 0, s1 - s2);
        m.set(0, 1, s2 - s0);
        m.set(0, 2, s0 - s1);
    } else {
        m.set(0, 0, (rho[1] / rho[0]).powi(n as i32));
        m.set(0, 1, -1.0);
    }
    for i in 1..nn - 1 {
        let w = fornberg_weights(rho[i], &rho[i - 1..=i + 1], 2);
        for (k, col) in (i - 1..=i + 1).enumerate() {
            let mut entry = -w[2][k] - (1.0 / rho[i] + 0.5 * rho[i]) * w[1][k];
            if col == i {
                entry += kappa - 1.0 + (n * n) as f64 / (rho[i] * rho[i]);
            }
            m.set(i, col, entry);
        }
    }
    m.set(nn - 1, nn - 1, 1.0);
    m.factorize()
        .unwrap_or_else(|e| panic!("resolvent system at mode {n}, shift {kappa}: {e}"))
}
