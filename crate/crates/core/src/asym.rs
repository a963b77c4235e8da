//! Slow-time expansion of a co-rotating pair of viscous vortices.
//!
//! In the self-similar frame attached to each vortex center the pair is
//! described by profile corrections in powers of the aspect ratio
//! `ε = √(νt)` (core size over separation), with every coefficient split
//! into an inviscid part and a part carrying one factor of the viscosity.
//! [`construct_approximation`] builds the corrections order by order,
//! cancelling the rescaled evolution residual and fixing the rotation-rate
//! and separation modulation laws from its first-moment balance.
//! [`residual_parts`] evaluates the residual of a finished series at a
//! concrete aspect ratio, exposing its exact dependence on the viscosity,
//! and [`beta_coefficients`] extracts the rotation-rate corrections that
//! drive the slow phase drift of the pair.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::grid::RadialGrid;
use crate::mode::{poisson_bracket, DecayClass, ModeField, RadialProfile, VectorModeField};
use crate::oper::{apply_l, invert_lambda, resolvent_solve, stream_field, OperError};
use crate::special::{gaussian_g, gaussian_g_prime, Trig};

/// Largest supported expansion order.
pub const MAX_SERIES_ORDER: usize = 6;

/// Largest supported far-field moment expansion order.
pub const MAX_EXPANSION_ORDER: usize = 12;

/// Identifier stamped into serialized series documents.
pub const SERIES_SCHEMA: &str = "vortex-pair-expansion/1";

/// Relative size below which a defect of a residual coefficient is projected
/// out silently; anything larger aborts the construction.
const SOLVABILITY_TOL: f64 = 1e-8;

/// Relative size below which a single harmonic row of a residual coefficient
/// is treated as identically zero instead of being fed to a solver.
const ROW_SKIP: f64 = 1e-12;

// ---------------------------------------------------------------------------
// Circulations and errors
// ---------------------------------------------------------------------------

/// Strengths and geometry of the two-vortex configuration, in units where
/// the initial separation is one.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circulations {
    pub gamma1: f64,
    pub gamma2: f64,
    /// Total strength `Γ = Γ₁ + Γ₂`.
    pub gamma: f64,
    /// Initial separation; fixed to one by the normalization.
    pub d: f64,
    /// Signed distance factor of vortex 1 from the rotation center, `Γ₂/Γ`.
    pub ell1: f64,
    /// Signed distance factor of vortex 2, `−Γ₁/Γ`.
    pub ell2: f64,
}

impl Circulations {
    /// Builds the configuration from the two strengths.  The total must not
    /// vanish: a zero-total pair translates instead of rotating and has no
    /// co-rotating frame.
    pub fn new(gamma1: f64, gamma2: f64) -> Result<Circulations, AsymError> {
        let gamma = gamma1 + gamma2;
        let scale = gamma1.abs() + gamma2.abs();
        if !gamma.is_finite() || scale == 0.0 || gamma.abs() < 1e-12 * scale {
            return Err(AsymError::DegenerateCirculations { gamma1, gamma2 });
        }
        Ok(Circulations {
            gamma1,
            gamma2,
            gamma,
            d: 1.0,
            ell1: gamma2 / gamma,
            ell2: -gamma1 / gamma,
        })
    }

    /// The symmetric unit pair `Γ₁ = Γ₂ = 1`.
    pub fn equal() -> Circulations {
        Circulations::new(1.0, 1.0).expect("the unit pair is not degenerate")
    }

    /// Strength of vortex `i` (zero-based).
    pub(crate) fn strength(&self, i: usize) -> f64 {
        if i == 0 {
            self.gamma1
        } else {
            self.gamma2
        }
    }

    /// Strength of the companion of vortex `i` (zero-based).
    pub(crate) fn other_strength(&self, i: usize) -> f64 {
        self.strength(1 - i)
    }

    /// Shift orientation of vortex `i`: the companion sits at `κ_i α/ε` along
    /// the first axis of frame `i`.
    pub(crate) fn kappa(i: usize) -> f64 {
        if i == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Failure modes of the expansion layer.
#[derive(Clone, Debug)]
pub enum AsymError {
    /// The two strengths sum to (nearly) zero and define no rotating frame.
    DegenerateCirculations { gamma1: f64, gamma2: f64 },
    /// The first-moment balance that fixes the modulation at this order has
    /// no unique solution (one of the strengths vanishes).
    SingularMomentSystem { order: usize },
    /// A residual coefficient violates a mass or moment compatibility
    /// condition by more than the construction tolerates.
    Solvability {
        order: usize,
        defect: f64,
        scale: f64,
        what: &'static str,
    },
    /// A requested order lies outside the supported range.
    ExpansionOrder { requested: usize, min: usize, max: usize },
    /// The requested evaluation point lies outside the regime in which the
    /// series approximates anything.
    OutOfValidity { eps: f64, nu: f64 },
    /// A serialized document carries an unknown schema identifier.
    Schema { found: String },
    /// A serialized document is malformed.
    Format { detail: String },
    /// An operator inversion failed while building a coefficient.
    Operator { order: usize, source: OperError },
}

impl std::fmt::Display for AsymError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AsymError::DegenerateCirculations { gamma1, gamma2 } => write!(
                f,
                "total circulation of ({gamma1:.3e}, {gamma2:.3e}) is too close to zero \
                 to define a rotating frame"
            ),
            AsymError::SingularMomentSystem { order } => write!(
                f,
                "moment system fixing the modulation at order {order} is singular \
                 (a vortex strength vanishes)"
            ),
            AsymError::Solvability {
                order,
                defect,
                scale,
                what,
            } => write!(
                f,
                "residual coefficient at order {order} violates the {what} compatibility \
                 condition: defect {defect:.3e} against scale {scale:.3e}"
            ),
            AsymError::ExpansionOrder { requested, min, max } => write!(
                f,
                "order {requested} outside the supported range {min}..={max}"
            ),
            AsymError::OutOfValidity { eps, nu } => write!(
                f,
                "evaluation point eps={eps:.3e}, nu={nu:.3e} outside the validity \
                 region 0 < eps <= 0.3, 0 < nu <= eps^2"
            ),
            AsymError::Schema { found } => {
                write!(f, "unknown series schema {found:?}, expected {SERIES_SCHEMA:?}")
            }
            AsymError::Format { detail } => write!(f, "malformed series document: {detail}"),
            AsymError::Operator { order, source } => {
                write!(f, "operator inversion failed at order {order}: {source}")
            }
        }
    }
}

impl std::error::Error for AsymError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            AsymError::Operator { source, .. } => Some(source),
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------------
// Truncated power-series helpers
// ---------------------------------------------------------------------------

/// Truncated Cauchy product of two coefficient lists.
fn conv_trunc(a: &[f64], b: &[f64], kmax: usize) -> Vec<f64> {
    let mut out = vec![0.0; kmax + 1];
    for (i, &ai) in a.iter().enumerate().take(kmax + 1) {
        if ai == 0.0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate().take(kmax + 1 - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Coefficients of `1/a` for a series with nonvanishing constant term.
fn series_recip(a: &[f64], kmax: usize) -> Vec<f64> {
    assert!(a[0].abs() > 0.5, "series reciprocal needs a unit-size leading term");
    let mut out = vec![0.0; kmax + 1];
    out[0] = 1.0 / a[0];
    for k in 1..=kmax {
        let mut acc = 0.0;
        for j in 1..=k {
            acc += a.get(j).copied().unwrap_or(0.0) * out[k - j];
        }
        out[k] = -acc / a[0];
    }
    out
}

/// Coefficients of `a^{−n}`.
fn series_pow_neg(a: &[f64], n: usize, kmax: usize) -> Vec<f64> {
    let recip = series_recip(a, kmax);
    let mut out = vec![0.0; kmax + 1];
    out[0] = 1.0;
    for _ in 0..n {
        out = conv_trunc(&out, &recip, kmax);
    }
    out
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k.min(n));
    let mut acc = 1.0;
    for j in 0..k {
        acc = acc * (n - j) as f64 / (j + 1) as f64;
    }
    acc
}

// ---------------------------------------------------------------------------
// Series containers
// ---------------------------------------------------------------------------

/// One ε-order of the expansion: the inviscid profile pair and the pair
/// carrying one factor of viscosity.
#[derive(Clone, Debug)]
pub struct OrderTerm {
    pub euler: VectorModeField,
    pub viscous: VectorModeField,
}

/// Rotation-rate coefficient at one ε-order, split like the profiles.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ThetaDot {
    pub euler: f64,
    pub viscous: f64,
}

/// Record of the compatibility defects met (and projected out) while
/// cancelling one residual coefficient.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OrderDiagnostics {
    /// ε-power of the cancelled residual coefficient.
    pub order: usize,
    /// Norm of the inviscid-level coefficient before cancellation.
    pub h0_norm: f64,
    /// Norm of the viscosity-neutral coefficient before cancellation.
    pub h1_norm: f64,
    pub h0_mass_defect: f64,
    pub h1_mass_defect: f64,
    pub h0_moment_defect: f64,
    pub h1_moment_defect: f64,
    /// Residual first moment that the left-right symmetry kills on its own
    /// rather than through a modulation choice.
    pub parity_defect: f64,
}

/// The constructed expansion: profile corrections `Ω_{i,k} = E_k + ν·NS_k`
/// for `k = 0..=order`, rotation-rate coefficients for `k = 0..order`, and
/// separation-modulation coefficients for `k = 0..order` (each carrying one
/// factor of viscosity).  Immutable once built.
#[derive(Clone, Debug)]
pub struct EpsilonSeries {
    circ: Circulations,
    order: usize,
    terms: Vec<OrderTerm>,
    theta_dot: Vec<ThetaDot>,
    alpha_dot_ns: Vec<f64>,
    diagnostics: Vec<OrderDiagnostics>,
    grid: Arc<RadialGrid>,
}

impl EpsilonSeries {
    pub fn circulations(&self) -> &Circulations {
        &self.circ
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn term(&self, k: usize) -> &OrderTerm {
        &self.terms[k]
    }

    pub fn theta_dot(&self, k: usize) -> ThetaDot {
        self.theta_dot[k]
    }

    pub fn alpha_dot_ns(&self, k: usize) -> f64 {
        self.alpha_dot_ns[k]
    }

    pub fn diagnostics(&self) -> &[OrderDiagnostics] {
        &self.diagnostics
    }

    /// ε-coefficients of the separation factor `α(ε) = 1 + Σ_{k≥2} (2/k)·ε^k·α̇_{k−2}`,
    /// returned up to `ε^{order+1}`.  The list is viscosity-free: the factor
    /// of ν in each modulation coefficient cancels against the slow clock.
    pub fn alpha_coeffs(&self) -> Vec<f64> {
        alpha_coeffs(&self.alpha_dot_ns, self.order + 1)
    }

    /// Separation factor at a concrete aspect ratio.
    pub fn alpha(&self, eps: f64) -> f64 {
        horner(&self.alpha_coeffs(), eps)
    }

    /// Rotation rate at a concrete aspect ratio and viscosity.
    pub fn theta_dot_eval(&self, eps: f64, nu: f64) -> f64 {
        let coeffs: Vec<f64> = self
            .theta_dot
            .iter()
            .map(|t| t.euler + nu * t.viscous)
            .collect();
        horner(&coeffs, eps)
    }

    /// Separation drift rate at a concrete aspect ratio and viscosity.
    pub fn alpha_dot_eval(&self, eps: f64, nu: f64) -> f64 {
        nu * horner(&self.alpha_dot_ns, eps)
    }

    /// Inviscid profile pair at a concrete aspect ratio, `Σ_k ε^k Ωᴱ_k`.
    pub fn euler_field(&self, eps: f64) -> VectorModeField {
        let mut out =
            VectorModeField::zeros(self.grid.clone(), 1, DecayClass::SchwartzWeighted);
        for (k, term) in self.terms.iter().enumerate() {
            out.axpy(eps.powi(k as i32), &term.euler);
        }
        out.trim_zeros();
        out
    }

    /// Full profile pair at a concrete aspect ratio and viscosity,
    /// `Σ_k ε^k (Ωᴱ_k + ν·Ω^{NS}_k)`.
    pub fn field_at(&self, eps: f64, nu: f64) -> VectorModeField {
        let mut out = self.euler_field(eps);
        for (k, term) in self.terms.iter().enumerate() {
            out.axpy(nu * eps.powi(k as i32), &term.viscous);
        }
        out.trim_zeros();
        out
    }

    /// Stream pair of the inviscid state at a concrete aspect ratio, with
    /// every spatially constant offset dropped: per component, the own
    /// stream, the far-field terms of the companion's stream in the shifted
    /// frame, the rotation quadratic, and the rotation dipole.
    ///
    /// Panics when `eps` lies outside `[0, 0.3]`.
    pub fn euler_stream(&self, eps: f64) -> VectorModeField {
        assert!(
            (0.0..=0.3).contains(&eps),
            "aspect ratio {eps:.3e} outside the validity range [0, 0.3]"
        );
        let alpha = self.alpha(eps);
        let theta_e = self.theta_dot_eval(eps, 0.0);
        let state = self.euler_field(eps);
        let rho1 = self.grid.sample(|r| r);
        let rho2 = self.grid.sample(|r| r * r);
        let mut out =
            VectorModeField::zeros(self.grid.clone(), 1, DecayClass::Polynomial);
        for i in 0..2 {
            let kappa = Circulations::kappa(i);
            let lambda = kappa * eps / alpha;
            let front = kappa * self.circ.other_strength(i) / self.circ.gamma;
            let psi = component_mut(&mut out, i);
            let own = component(&state, i);
            if !is_zero_field(own) {
                psi.axpy(1.0, &stream_field(own));
            }
            let far = component(&state, 1 - i);
            if eps > 0.0 && !is_zero_field(far) {
                let terms = moment_expansion(far, MAX_EXPANSION_ORDER)
                    .expect("expansion order is within the supported range");
                for (t, term) in terms.iter().enumerate() {
                    psi.axpy(lambda.powi(t as i32 + 1), term);
                }
            }
            psi.add_harmonic(0, Trig::Cos, &rho2, 0.5 * eps * eps * theta_e);
            psi.add_harmonic(1, Trig::Cos, &rho1, eps * front * theta_e * alpha);
        }
        out
    }
}

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn alpha_coeffs(alpha_dot: &[f64], kmax: usize) -> Vec<f64> {
    let mut a = vec![0.0; kmax + 1];
    a[0] = 1.0;
    for k in 2..=kmax {
        if let Some(ad) = alpha_dot.get(k - 2) {
            a[k] = 2.0 * ad / k as f64;
        }
    }
    a
}

// ---------------------------------------------------------------------------
// Far-field moment expansion of a shifted stream function
// ---------------------------------------------------------------------------

/// Polynomial terms of the stream function of `Ω` seen from a frame shifted
/// by `λ^{−1}` along the first axis:
///
/// `Δ⁻¹Ω(ξ + λ⁻¹e₁) = (m/2π)·ln(1/|λ|) + Σ_{n=1}^{N} λⁿ·P_n(ξ) + O(λ^{N+1})`
///
/// with `m` the mass of `Ω`.  Returns the coefficient polynomials `P_n` for
/// `n = 1..=order`; each is assembled from the harmonic moments of `Ω` and
/// has degree `n`.  The logarithmic offset is spatially constant and left to
/// the caller.
pub fn moment_expansion(omega: &ModeField, order: usize) -> Result<Vec<ModeField>, AsymError> {
    if order < 1 || order > MAX_EXPANSION_ORDER {
        return Err(AsymError::ExpansionOrder {
            requested: order,
            min: 1,
            max: MAX_EXPANSION_ORDER,
        });
    }
    let grid = omega.grid().clone();
    let rho_pows = power_rows(&grid, order);
    let mut mc = vec![0.0; order + 1];
    let mut ms = vec![0.0; order + 1];
    for k in 0..=order {
        mc[k] = omega.harmonic_moment(k, Trig::Cos);
        if k >= 1 {
            ms[k] = omega.harmonic_moment(k, Trig::Sin);
        }
    }
    let mut out = Vec::with_capacity(order);
    for n in 1..=order {
        let cn = if n % 2 == 1 { 1.0 } else { -1.0 } / (2.0 * PI * n as f64);
        let mut field = ModeField::zeros(grid.clone(), 0, DecayClass::Polynomial);
        for j in 0..=n {
            let sign = if (n - j) % 2 == 0 { 1.0 } else { -1.0 };
            let c = binomial(n, j) * sign;
            if mc[n - j] != 0.0 {
                field.add_harmonic(j as isize, Trig::Cos, &rho_pows[j], cn * c * mc[n - j]);
            }
            if j >= 1 && ms[n - j] != 0.0 {
                field.add_harmonic(j as isize, Trig::Sin, &rho_pows[j], -cn * c * ms[n - j]);
            }
        }
        out.push(field);
    }
    Ok(out)
}

fn power_rows(grid: &Arc<RadialGrid>, max_pow: usize) -> Vec<Vec<f64>> {
    (0..=max_pow)
        .map(|j| grid.nodes().iter().map(|r| r.powi(j as i32)).collect())
        .collect()
}

// ---------------------------------------------------------------------------
// The universal second-order correction
// ---------------------------------------------------------------------------

/// Strength-independent radial factors of the first pair-interaction
/// correction: the inviscid part rides `cos 2ϑ` and is positive, the
/// viscous part rides `sin 2ϑ`.
#[derive(Clone, Debug)]
pub struct Order2 {
    pub euler_radial: RadialProfile,
    pub viscous_radial: RadialProfile,
}

/// Solves the two mode-2 problems defining the universal second-order
/// radial factors: the inviscid factor inverts the linearized advection
/// against the quadrupole forcing `−(ρ²/16π²)e^{−ρ²/4}·sin 2ϑ` induced by
/// the far vortex, and the viscous factor inverts it against the diffusive
/// remainder `(L−1)` of the inviscid correction.
pub fn universal_order2(grid: &Arc<RadialGrid>) -> Result<Order2, AsymError> {
    let source: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|&r| -r * r * (-r * r / 4.0).exp() / (16.0 * PI * PI))
        .collect();
    let b = RadialProfile::new(grid.clone(), source, DecayClass::SchwartzWeighted);
    let euler = invert_lambda(2, &b, Trig::Sin)
        .map_err(|source| AsymError::Operator { order: 2, source })?;
    let e_field = euler.field();
    let mut remainder = apply_l(&e_field);
    remainder.axpy(-1.0, &e_field);
    let viscous = invert_lambda(2, &remainder.profile(2, Trig::Cos), Trig::Cos)
        .map_err(|source| AsymError::Operator { order: 2, source })?;
    Ok(Order2 {
        euler_radial: euler.profile,
        viscous_radial: viscous.profile,
    })
}

/// Assembles the second-order term of the expansion for a given pair of
/// strengths from the universal radial factors: the inviscid part of vortex
/// `i` is the other strength times the universal factor, the viscous part
/// additionally divides by the own strength.
pub fn build_order2(circ: &Circulations) -> Result<OrderTerm, AsymError> {
    build_order2_on(&RadialGrid::standard(), circ)
}

/// As [`build_order2`], on a caller-supplied grid.
pub fn build_order2_on(
    grid: &Arc<RadialGrid>,
    circ: &Circulations,
) -> Result<OrderTerm, AsymError> {
    let uni = universal_order2(grid)?;
    let component = |strength: f64, own: f64| {
        let mut e = ModeField::harmonic(
            grid.clone(),
            2,
            Trig::Cos,
            uni.euler_radial.values(),
            DecayClass::SchwartzWeighted,
        );
        e.scale(strength);
        let mut ns = ModeField::harmonic(
            grid.clone(),
            2,
            Trig::Sin,
            uni.viscous_radial.values(),
            DecayClass::SchwartzWeighted,
        );
        ns.scale(strength / own);
        (e, ns)
    };
    let (e1, ns1) = component(circ.gamma2, circ.gamma1);
    let (e2, ns2) = component(circ.gamma1, circ.gamma2);
    Ok(OrderTerm {
        euler: VectorModeField::new(e1, e2),
        viscous: VectorModeField::new(ns1, ns2),
    })
}

// ---------------------------------------------------------------------------
// The construction engine
// ---------------------------------------------------------------------------

struct State {
    /// `fields[k][q]` is the coefficient of `ε^k ν^q`, one component per vortex.
    fields: Vec<[VectorModeField; 2]>,
    /// `theta[k] = [inviscid, viscous]` rotation-rate coefficients.
    theta: Vec<[f64; 2]>,
    /// Separation modulation coefficients (each carries one viscosity factor).
    alpha_dot: Vec<f64>,
}

struct Engine {
    circ: Circulations,
    grid: Arc<RadialGrid>,
    gauss_row: Vec<f64>,
    gauss_prime_row: Vec<f64>,
    gauss_mass: f64,
    rho_pows: Vec<Vec<f64>>,
}

/// Residual coefficients: `parts[k][p]` is the coefficient of
/// `ε^k ν^{p−1}`, one component per vortex.
struct ResidualCoeffs {
    parts: Vec<[VectorModeField; 3]>,
}

pub(crate) fn component(v: &VectorModeField, i: usize) -> &ModeField {
    if i == 0 {
        &v.c1
    } else {
        &v.c2
    }
}

pub(crate) fn component_mut(v: &mut VectorModeField, i: usize) -> &mut ModeField {
    if i == 0 {
        &mut v.c1
    } else {
        &mut v.c2
    }
}

pub(crate) fn is_zero_field(f: &ModeField) -> bool {
    f.sup_coeff() == 0.0
}

impl Engine {
    fn new(circ: Circulations, grid: Arc<RadialGrid>) -> Engine {
        let gauss_row = grid.sample(gaussian_g);
        let gauss_prime_row = grid.sample(gaussian_g_prime);
        let gauss_mass = 2.0 * PI * grid.integrate_rho(&gauss_row);
        let rho_pows = power_rows(&grid, MAX_EXPANSION_ORDER);
        Engine {
            circ,
            grid,
            gauss_row,
            gauss_prime_row,
            gauss_mass,
            rho_pows,
        }
    }

    /// Stream function of a field, harmonic by harmonic.
    fn stream_of(&self, f: &ModeField) -> ModeField {
        stream_field(f)
    }

    /// Frame stream-function coefficients `ψ[i][k][q]` for the current
    /// state: own stream, far-field terms of the other vortex's stream in
    /// the shifted frame (spatial constants dropped), the rotation
    /// quadratic, and the modulation dipoles.
    fn psi(&self, state: &State, kmax: usize) -> [Vec<[ModeField; 2]>; 2] {
        let zero =
            |_k: usize| [0, 1].map(|_| ModeField::zeros(self.grid.clone(), 1, DecayClass::Polynomial));
        let mut psi = [
            (0..=kmax).map(zero).collect::<Vec<_>>(),
            (0..=kmax).map(zero).collect::<Vec<_>>(),
        ];
        let alpha = alpha_coeffs(&state.alpha_dot, kmax);
        for i in 0..2 {
            let kappa = Circulations::kappa(i);
            let other = 1 - i;
            // Own streams.
            for (k, pair) in state.fields.iter().enumerate().take(kmax + 1) {
                for q in 0..2 {
                    let f = component(&pair[q], i);
                    if !is_zero_field(f) {
                        psi[i][k][q].axpy(1.0, &self.stream_of(f));
                    }
                }
            }
            // Shifted stream of the other vortex, through its far-field
            // moment terms: the coefficient of λⁿ is a degree-n polynomial
            // and λ = κ_i ε / α.
            for kf in 0..state.fields.len().min(kmax) {
                for q in 0..2 {
                    let f = component(&state.fields[kf][q], other);
                    if is_zero_field(f) {
                        continue;
                    }
                    let n_terms = (kmax - kf).min(MAX_EXPANSION_ORDER);
                    let terms = moment_expansion(f, n_terms)
                        .expect("expansion order is within the supported range");
                    for (t, term) in terms.iter().enumerate() {
                        let n = t + 1;
                        if kf + n > kmax {
                            break;
                        }
                        let sign = if n % 2 == 0 { 1.0 } else { kappa };
                        let apow = series_pow_neg(&alpha, n, kmax - kf - n);
                        for (j, &aj) in apow.iter().enumerate() {
                            if aj != 0.0 {
                                psi[i][kf + n + j][q].axpy(sign * aj, term);
                            }
                        }
                    }
                }
            }
            // Rotation quadratic (ε²/2)·θ̇·|ξ|².
            for (k, td) in state.theta.iter().enumerate() {
                if k + 2 > kmax {
                    break;
                }
                for q in 0..2 {
                    if td[q] != 0.0 {
                        psi[i][k + 2][q].add_harmonic(
                            0,
                            Trig::Cos,
                            &self.rho_pows[2],
                            0.5 * td[q],
                        );
                    }
                }
            }
            // Modulation dipoles ε·(κ_i Γ_other/Γ)·(θ̇ α ξ₁ + α̇ ξ₂).
            let front = kappa * self.circ.other_strength(i) / self.circ.gamma;
            let theta_e: Vec<f64> = state.theta.iter().map(|t| t[0]).collect();
            let theta_ns: Vec<f64> = state.theta.iter().map(|t| t[1]).collect();
            for (q, series) in [theta_e, theta_ns].iter().enumerate() {
                let prod = conv_trunc(series, &alpha, kmax.saturating_sub(1));
                for (k, &c) in prod.iter().enumerate() {
                    if k + 1 <= kmax && c != 0.0 {
                        psi[i][k + 1][q].add_harmonic(1, Trig::Cos, &self.rho_pows[1], front * c);
                    }
                }
            }
            for (k, &ad) in state.alpha_dot.iter().enumerate() {
                if k + 1 <= kmax && ad != 0.0 {
                    psi[i][k + 1][1].add_harmonic(1, Trig::Sin, &self.rho_pows[1], front * ad);
                }
            }
        }
        psi
    }

    /// Residual coefficients of the current state through `ε^{kmax}`,
    /// split by viscosity power.
    fn residual_coeffs(&self, state: &State, kmax: usize) -> ResidualCoeffs {
        let psi = self.psi(state, kmax);
        let mut parts: Vec<[VectorModeField; 3]> = (0..=kmax)
            .map(|_| {
                [0, 1, 2].map(|_| {
                    VectorModeField::zeros(self.grid.clone(), 1, DecayClass::SchwartzWeighted)
                })
            })
            .collect();
        // Slow-clock and diffusion part (k/2 − L) acting on each coefficient.
        for (k, pair) in state.fields.iter().enumerate().take(kmax + 1) {
            for q in 0..2 {
                for i in 0..2 {
                    let f = component(&pair[q], i);
                    if is_zero_field(f) {
                        continue;
                    }
                    let mut lin = apply_l(f);
                    lin.scale(-1.0);
                    lin.axpy(0.5 * k as f64, f);
                    component_mut(&mut parts[k][q + 1], i).axpy(1.0, &lin);
                }
            }
        }
        // Transport part: brackets of the frame stream against the profiles.
        for i in 0..2 {
            for k1 in 0..=kmax {
                for q1 in 0..2 {
                    let s = &psi[i][k1][q1];
                    if is_zero_field(s) {
                        continue;
                    }
                    for (k2, pair) in state.fields.iter().enumerate().take(kmax + 1 - k1) {
                        for q2 in 0..2 {
                            let f = component(&pair[q2], i);
                            if is_zero_field(f) {
                                continue;
                            }
                            let b = poisson_bracket(s, f);
                            component_mut(&mut parts[k1 + k2][q1 + q2], i).axpy(1.0, &b);
                        }
                    }
                }
            }
        }
        ResidualCoeffs { parts }
    }

    /// First-moment defect of the mode-1 row that the inversion of the
    /// linearized advection requires to vanish; adding that multiple of the
    /// Gaussian-gradient profile cancels it exactly.
    fn project_dipole_moment(&self, row: &mut [f64]) -> f64 {
        let weighted: Vec<f64> = row
            .iter()
            .zip(self.grid.nodes())
            .map(|(v, r)| v * r)
            .collect();
        let moment = PI * self.grid.integrate_rho(&weighted);
        for (v, g) in row.iter_mut().zip(&self.gauss_prime_row) {
            *v += moment * g;
        }
        moment
    }

    /// Removes the residual first moment of a solved field by a
    /// Gaussian-gradient shift.  That direction spans the kernel of the
    /// linearized advection at the dipole harmonic, so the defining
    /// equation is untouched while the moment becomes exactly zero on the
    /// grid.
    fn zero_dipole_moment(&self, f: &mut ModeField) {
        if f.max_mode() < 1 {
            return;
        }
        let gp_moment = {
            let weighted: Vec<f64> = self
                .gauss_prime_row
                .iter()
                .zip(self.grid.nodes())
                .map(|(v, r)| v * r)
                .collect();
            PI * self.grid.integrate_rho(&weighted)
        };
        let m = f.first_moment();
        for (trig, val) in [(Trig::Cos, m[0]), (Trig::Sin, m[1])] {
            if val != 0.0 {
                f.add_harmonic(1, trig, &self.gauss_prime_row, -val / gp_moment);
            }
        }
    }

    /// Cancels the residual coefficient at `ε^{order}` by the three-part
    /// solve: a radial resolvent for the angle-free inviscid piece, an
    /// advection inversion for the rest of the inviscid piece, and a second
    /// advection inversion for the viscous piece.
    fn solve_order(
        &self,
        order: usize,
        h0: &ModeField,
        h1: &ModeField,
        own_strength: f64,
        row_floor: f64,
    ) -> Result<(ModeField, ModeField), AsymError> {
        let kappa_shift = 0.5 * order as f64;
        let grid = &self.grid;
        let mut euler = ModeField::zeros(grid.clone(), 1, DecayClass::SchwartzWeighted);

        // Angle-free piece: (order/2 − L) E0 = −P₀ h1, with the exact mass
        // multiple of the Gaussian projected out of the data first.
        let mut radial_row = h1.cos_profile(0).to_vec();
        let mass = 2.0 * PI * grid.integrate_rho(&radial_row);
        for (v, g) in radial_row.iter_mut().zip(&self.gauss_row) {
            *v -= mass / self.gauss_mass * g;
        }
        if norm_row(grid, &radial_row) > row_floor {
            for v in &mut radial_row {
                *v = -*v;
            }
            let e0 = resolvent_solve(
                kappa_shift,
                0,
                &RadialProfile::new(grid.clone(), radial_row, DecayClass::SchwartzWeighted),
            );
            // The continuous solution is mass-free; subtracting the exact
            // discrete mass multiple of the Gaussian keeps that true on the
            // grid without disturbing the equation (the Gaussian is
            // annihilated by the diffusion part).
            let mut values = e0.values().to_vec();
            let e0_mass = 2.0 * PI * grid.integrate_rho(&values);
            for (v, g) in values.iter_mut().zip(&self.gauss_row) {
                *v -= e0_mass / self.gauss_mass * g;
            }
            euler.add_harmonic(0, Trig::Cos, &values, 1.0);
        }

        // Angular inviscid piece: Γ_i Λ E1 = −h0 on the odd rows.
        for m in 1..=h0.max_mode() {
            let mut row: Vec<f64> = h0
                .sin_profile(m)
                .iter()
                .map(|v| -v / own_strength)
                .collect();
            if norm_row(grid, &row) <= row_floor / own_strength.abs() {
                continue;
            }
            if m == 1 {
                self.project_dipole_moment(&mut row);
            }
            let sol = invert_lambda(
                m,
                &RadialProfile::new(grid.clone(), row, DecayClass::SchwartzWeighted),
                Trig::Sin,
            )
            .map_err(|source| AsymError::Operator { order, source })?;
            euler.add_harmonic(m as isize, sol.trig, sol.profile.values(), 1.0);
        }

        // Viscous piece: Γ_i Λ NS = −[(1−P₀) h1 + (order/2 − L) E1] on the
        // even rows.
        let mut rhs = apply_l(&euler);
        rhs.scale(-1.0);
        rhs.axpy(kappa_shift, &euler);
        rhs.axpy(1.0, h1);
        let mut viscous = ModeField::zeros(grid.clone(), 1, DecayClass::SchwartzWeighted);
        for m in 1..=rhs.max_mode() {
            let mut row: Vec<f64> = rhs
                .cos_profile(m)
                .iter()
                .map(|v| -v / own_strength)
                .collect();
            if norm_row(grid, &row) <= row_floor / own_strength.abs() {
                continue;
            }
            if m == 1 {
                self.project_dipole_moment(&mut row);
            }
            let sol = invert_lambda(
                m,
                &RadialProfile::new(grid.clone(), row, DecayClass::SchwartzWeighted),
                Trig::Cos,
            )
            .map_err(|source| AsymError::Operator { order, source })?;
            viscous.add_harmonic(m as isize, sol.trig, sol.profile.values(), 1.0);
        }
        self.zero_dipole_moment(&mut euler);
        self.zero_dipole_moment(&mut viscous);
        euler.trim_zeros();
        viscous.trim_zeros();
        Ok((euler, viscous))
    }
}

fn norm_row(grid: &Arc<RadialGrid>, row: &[f64]) -> f64 {
    let sq: Vec<f64> = row.iter().map(|v| v * v).collect();
    (PI * grid.integrate_rho(&sq)).max(0.0).sqrt()
}

/// Builds the expansion to the requested order on the standard grid.
pub fn construct_approximation(
    circ: &Circulations,
    order: usize,
) -> Result<EpsilonSeries, AsymError> {
    construct_approximation_on(&RadialGrid::standard(), circ, order)
}

/// As [`construct_approximation`], on a caller-supplied grid.
///
/// Starting from the Gaussian pair, each step fixes the modulation
/// coefficients from the first-moment balance of the residual and then
/// cancels the residual coefficient itself by the three-part solve.  The
/// step that cancels `ε^{k+1}` determines the rotation-rate and separation
/// coefficients of index `k` together with the profile correction of index
/// `k+1`.
pub fn construct_approximation_on(
    grid: &Arc<RadialGrid>,
    circ: &Circulations,
    order: usize,
) -> Result<EpsilonSeries, AsymError> {
    if order < 1 || order > MAX_SERIES_ORDER {
        return Err(AsymError::ExpansionOrder {
            requested: order,
            min: 1,
            max: MAX_SERIES_ORDER,
        });
    }
    let engine = Engine::new(*circ, grid.clone());
    let mut g1 = ModeField::gaussian(grid.clone());
    g1.scale(circ.gamma1);
    let mut g2 = ModeField::gaussian(grid.clone());
    g2.scale(circ.gamma2);
    let base_e = VectorModeField::new(g1, g2);
    let zero_pair =
        |mm: usize| VectorModeField::zeros(grid.clone(), mm, DecayClass::SchwartzWeighted);
    let mut state = State {
        fields: vec![[base_e, zero_pair(0)]],
        theta: Vec::new(),
        alpha_dot: Vec::new(),
    };
    let mut diagnostics = Vec::new();
    let product = circ.gamma1 * circ.gamma2;
    let zero_floor = 1e-14 * (circ.gamma1.abs() + circ.gamma2.abs()).powi(2);

    for step in 0..order {
        if product.abs() < 1e-14 * circ.gamma * circ.gamma {
            return Err(AsymError::SingularMomentSystem { order: step });
        }
        let kmax = step + 1;
        // First pass: moment balance with the new modulation coefficients
        // still absent fixes them, since each enters the balance linearly
        // with the exact weight Γ₁Γ₂/Γ.
        let bare = engine.residual_coeffs(&state, kmax);
        let m_inviscid = component(&bare.parts[kmax][0], 0).first_moment();
        let m_neutral = component(&bare.parts[kmax][1], 0).first_moment();
        let ratio = circ.gamma / product;
        state.theta.push([ratio * m_inviscid[1], ratio * m_neutral[1]]);
        state.alpha_dot.push(-ratio * m_neutral[0]);
        let parity_defect = m_inviscid[0].abs();

        // Second pass: with the modulation in place the coefficient at
        // ε^{step+1} is ready to cancel.
        let res = engine.residual_coeffs(&state, kmax);
        let mut h0_norm: f64 = 0.0;
        let mut h1_norm: f64 = 0.0;
        for i in 0..2 {
            h0_norm = h0_norm.max(component(&res.parts[kmax][0], i).norm_l2());
            h1_norm = h1_norm.max(component(&res.parts[kmax][1], i).norm_l2());
        }
        let scale = h0_norm.max(h1_norm);
        let mut diag = OrderDiagnostics {
            order: kmax,
            h0_norm,
            h1_norm,
            parity_defect,
            ..OrderDiagnostics::default()
        };
        if scale <= zero_floor {
            diagnostics.push(diag);
            state
                .fields
                .push([zero_pair(0), zero_pair(0)]);
            continue;
        }
        let mut next: Vec<[ModeField; 2]> = Vec::with_capacity(2);
        for i in 0..2 {
            let h0 = component(&res.parts[kmax][0], i);
            let h1 = component(&res.parts[kmax][1], i);
            let h0_mass = h0.mass().abs();
            let h1_mass = h1.mass().abs();
            let h0_mom = moment_size(h0);
            let h1_mom = moment_size(h1);
            diag.h0_mass_defect = diag.h0_mass_defect.max(h0_mass);
            diag.h1_mass_defect = diag.h1_mass_defect.max(h1_mass);
            diag.h0_moment_defect = diag.h0_moment_defect.max(h0_mom);
            diag.h1_moment_defect = diag.h1_moment_defect.max(h1_mom);
            for (defect, what) in [
                (h0_mass, "inviscid mass"),
                (h1_mass, "neutral mass"),
                (h0_mom, "inviscid first-moment"),
                (h1_mom, "neutral first-moment"),
                (parity_defect, "left-right parity"),
            ] {
                if defect > SOLVABILITY_TOL * scale {
                    return Err(AsymError::Solvability {
                        order: kmax,
                        defect,
                        scale,
                        what,
                    });
                }
            }
            let (e, ns) = engine.solve_order(
                kmax,
                h0,
                h1,
                circ.strength(i),
                ROW_SKIP * scale,
            )?;
            next.push([e, ns]);
        }
        diagnostics.push(diag);
        let mut it = next.into_iter();
        let [e1, ns1] = it.next().unwrap();
        let [e2, ns2] = it.next().unwrap();
        state.fields.push([
            VectorModeField::new(e1, e2),
            VectorModeField::new(ns1, ns2),
        ]);
    }

    let terms = state
        .fields
        .into_iter()
        .map(|[e, ns]| OrderTerm { euler: e, viscous: ns })
        .collect();
    Ok(EpsilonSeries {
        circ: *circ,
        order,
        terms,
        theta_dot: state
            .theta
            .iter()
            .map(|t| ThetaDot {
                euler: t[0],
                viscous: t[1],
            })
            .collect(),
        alpha_dot_ns: state.alpha_dot,
        diagnostics,
        grid: grid.clone(),
    })
}

fn moment_size(f: &ModeField) -> f64 {
    let m = f.first_moment();
    m[0].hypot(m[1])
}

// ---------------------------------------------------------------------------
// Rotation-rate corrections
// ---------------------------------------------------------------------------

/// Rotation-rate correction coefficients in the two conventions in use:
/// `raw[k] = −θ̇ᴱ_k` and `normalized[k] = −(2π/Γ)·θ̇ᴱ_k`, so the normalized
/// sequence starts at one and feeds the phase prediction
/// `θ(t) = (Γ/2πd²)·(t + Σ_{k≥2} 2·normalized[k]/(k+2)·(νt/d²)^{k/2}·t)`.
#[derive(Clone, Debug)]
pub struct BetaCoefficients {
    pub raw: Vec<f64>,
    pub normalized: Vec<f64>,
    /// Attached when the weaker vortex is so faint that the fixed-order
    /// truncation carries little accuracy.
    pub warning: Option<String>,
}

/// Extracts the rotation-rate corrections `k = 0..=order` from a series.
/// The first nonzero drift correction sits at `k = 4`, so orders below four
/// are rejected, as are orders the series does not resolve.
pub fn beta_coefficients(
    series: &EpsilonSeries,
    order: usize,
) -> Result<BetaCoefficients, AsymError> {
    if order < 4 || order + 1 > series.order {
        return Err(AsymError::ExpansionOrder {
            requested: order,
            min: 4,
            max: series.order.saturating_sub(1),
        });
    }
    let circ = series.circ;
    let mut raw = Vec::with_capacity(order + 1);
    let mut normalized = Vec::with_capacity(order + 1);
    for k in 0..=order {
        let e = series.theta_dot[k].euler;
        raw.push(-e);
        normalized.push(-2.0 * PI / circ.gamma * e);
    }
    let weaker = circ.gamma1.abs().min(circ.gamma2.abs());
    let stronger = circ.gamma1.abs().max(circ.gamma2.abs());
    let warning = if weaker < 0.05 * stronger {
        Some(format!(
            "weaker strength {weaker:.3e} below 5% of {stronger:.3e}: drift corrections \
             are dominated by the single-vortex limit and the truncation error grows"
        ))
    } else {
        None
    };
    Ok(BetaCoefficients {
        raw,
        normalized,
        warning,
    })
}

// ---------------------------------------------------------------------------
// Residual evaluation at a concrete aspect ratio
// ---------------------------------------------------------------------------

/// The residual of a series at fixed `ε`, split by viscosity power:
/// `R(ε, ν) = ν⁻¹·parts[0] + parts[1] + ν·parts[2]`.
#[derive(Clone, Debug)]
pub struct ResidualParts {
    pub parts: [VectorModeField; 3],
}

impl ResidualParts {
    /// Recombines the split at a concrete viscosity.
    pub fn total(&self, nu: f64) -> VectorModeField {
        let mut out = self.parts[1].clone();
        out.axpy(1.0 / nu, &self.parts[0]);
        out.axpy(nu, &self.parts[2]);
        out
    }

    pub fn norms(&self) -> [f64; 3] {
        [
            self.parts[0].norm_v(),
            self.parts[1].norm_v(),
            self.parts[2].norm_v(),
        ]
    }
}

/// Evaluates the residual of the series at aspect ratio `eps`, keeping the
/// viscosity symbolic.  The profiles, streams, far-field terms, and
/// modulation laws are summed numerically at `eps`; the far-field expansion
/// is carried to its supported limit so its truncation sits far below the
/// series' own.
pub fn residual_parts(series: &EpsilonSeries, eps: f64) -> Result<ResidualParts, AsymError> {
    if !(eps > 0.0 && eps <= 0.3) {
        return Err(AsymError::OutOfValidity { eps, nu: f64::NAN });
    }
    let grid = series.grid.clone();
    let circ = series.circ;
    let engine = Engine::new(circ, grid.clone());

    // Numeric profile sums per vortex and viscosity power, with their
    // slow-clock plus diffusion images accumulated alongside.
    let mut omega: Vec<[ModeField; 2]> = Vec::with_capacity(2);
    let mut clocked: Vec<[ModeField; 2]> = Vec::with_capacity(2);
    for i in 0..2 {
        let mut om = [0, 1].map(|_| ModeField::zeros(grid.clone(), 1, DecayClass::SchwartzWeighted));
        let mut cl = [0, 1].map(|_| ModeField::zeros(grid.clone(), 1, DecayClass::SchwartzWeighted));
        for (k, term) in series.terms.iter().enumerate() {
            let ek = eps.powi(k as i32);
            for (q, part) in [&term.euler, &term.viscous].iter().enumerate() {
                let f = component(part, i);
                if is_zero_field(f) {
                    continue;
                }
                om[q].axpy(ek, f);
                let mut lin = apply_l(f);
                lin.scale(-1.0);
                lin.axpy(0.5 * k as f64, f);
                cl[q].axpy(ek, &lin);
            }
        }
        omega.push(om);
        clocked.push(cl);
    }

    let alpha = horner(&series.alpha_coeffs(), eps);
    let theta_e: f64 = horner(
        &series.theta_dot.iter().map(|t| t.euler).collect::<Vec<_>>(),
        eps,
    );
    let theta_ns: f64 = horner(
        &series.theta_dot.iter().map(|t| t.viscous).collect::<Vec<_>>(),
        eps,
    );
    let alpha_dot = horner(&series.alpha_dot_ns, eps);

    let mut parts = [0, 1, 2]
        .map(|_| VectorModeField::zeros(grid.clone(), 1, DecayClass::SchwartzWeighted));
    for i in 0..2 {
        let kappa = Circulations::kappa(i);
        let lambda = kappa * eps / alpha;
        let front = kappa * circ.other_strength(i) / circ.gamma;
        let mut psi = [0, 1].map(|_| ModeField::zeros(grid.clone(), 1, DecayClass::Polynomial));
        for q in 0..2 {
            if !is_zero_field(&omega[i][q]) {
                psi[q].axpy(1.0, &engine.stream_of(&omega[i][q]));
            }
            let far = &omega[1 - i][q];
            if !is_zero_field(far) {
                let terms = moment_expansion(far, MAX_EXPANSION_ORDER)?;
                for (t, term) in terms.iter().enumerate() {
                    psi[q].axpy(lambda.powi(t as i32 + 1), term);
                }
            }
        }
        psi[0].add_harmonic(0, Trig::Cos, &engine.rho_pows[2], 0.5 * eps * eps * theta_e);
        psi[1].add_harmonic(0, Trig::Cos, &engine.rho_pows[2], 0.5 * eps * eps * theta_ns);
        psi[0].add_harmonic(1, Trig::Cos, &engine.rho_pows[1], eps * front * theta_e * alpha);
        psi[1].add_harmonic(1, Trig::Cos, &engine.rho_pows[1], eps * front * theta_ns * alpha);
        psi[1].add_harmonic(1, Trig::Sin, &engine.rho_pows[1], eps * front * alpha_dot);

        for q1 in 0..2 {
            if is_zero_field(&psi[q1]) {
                continue;
            }
            for q2 in 0..2 {
                if is_zero_field(&omega[i][q2]) {
                    continue;
                }
                let b = poisson_bracket(&psi[q1], &omega[i][q2]);
                component_mut(&mut parts[q1 + q2], i).axpy(1.0, &b);
            }
        }
        for q in 0..2 {
            if !is_zero_field(&clocked[i][q]) {
                component_mut(&mut parts[q + 1], i).axpy(1.0, &clocked[i][q]);
            }
        }
    }
    Ok(ResidualParts { parts })
}

/// Evaluates the full residual at a concrete `(ε, ν)`.  The viscosity must
/// respect the slow clock `ν ≤ ε²` (times are at least one).
pub fn residual(
    series: &EpsilonSeries,
    eps: f64,
    nu: f64,
) -> Result<VectorModeField, AsymError> {
    if !(nu > 0.0 && nu <= eps * eps * (1.0 + 1e-12)) {
        return Err(AsymError::OutOfValidity { eps, nu });
    }
    Ok(residual_parts(series, eps)?.total(nu))
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct SeriesDoc {
    schema: String,
    gamma1: f64,
    gamma2: f64,
    order: usize,
    grid_n: usize,
    grid_rho_max: f64,
    theta_dot: Vec<ThetaDot>,
    alpha_dot_ns: Vec<f64>,
    terms: Vec<TermDoc>,
    diagnostics: Vec<OrderDiagnostics>,
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    order: usize,
    rows: Vec<RowDoc>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct RowDoc {
    pub(crate) vortex: u8,
    pub(crate) part: String,
    pub(crate) mode: usize,
    pub(crate) trig: String,
    pub(crate) values: Vec<f64>,
}

/// Encodes the nonzero harmonic rows of a two-component field under the
/// given part tag.
pub(crate) fn encode_rows(part_name: &str, pair: &VectorModeField) -> Vec<RowDoc> {
    let mut rows = Vec::new();
    for vortex in 1..=2u8 {
        let f = pair.component(vortex as usize);
        for m in 0..=f.max_mode() {
            for trig in [Trig::Cos, Trig::Sin] {
                if m == 0 && trig == Trig::Sin {
                    continue;
                }
                let row = match trig {
                    Trig::Cos => f.cos_profile(m),
                    Trig::Sin => f.sin_profile(m),
                };
                if row.iter().all(|v| *v == 0.0) {
                    continue;
                }
                rows.push(RowDoc {
                    vortex,
                    part: part_name.to_string(),
                    mode: m,
                    trig: match trig {
                        Trig::Cos => "cos".to_string(),
                        Trig::Sin => "sin".to_string(),
                    },
                    values: row.to_vec(),
                });
            }
        }
    }
    rows
}

/// Adds one decoded harmonic row to a two-component field, validating the
/// row against the field's grid.  Failures name the offending attribute.
pub(crate) fn decode_row(target: &mut VectorModeField, row: &RowDoc) -> Result<(), String> {
    if row.values.len() != target.grid().len() {
        return Err("row length does not match the grid".to_string());
    }
    if !(1..=2).contains(&row.vortex) {
        return Err("vortex index outside {1, 2}".to_string());
    }
    if row.mode > 4 * MAX_SERIES_ORDER {
        return Err("harmonic index implausibly large".to_string());
    }
    let trig = match row.trig.as_str() {
        "cos" => Trig::Cos,
        "sin" => Trig::Sin,
        _ => return Err(format!("unknown trig tag {:?}", row.trig)),
    };
    component_mut(target, row.vortex as usize - 1).add_harmonic(
        row.mode as isize,
        trig,
        &row.values,
        1.0,
    );
    Ok(())
}

/// Resolves a serialized grid description, reusing the shared standard grid
/// when the dimensions match it.
pub(crate) fn resolve_grid(n: usize, rho_max: f64) -> Result<Arc<RadialGrid>, String> {
    let standard = RadialGrid::standard();
    if n == standard.len() && rho_max == standard.rho_max() {
        return Ok(standard);
    }
    if n < 16 {
        return Err(format!("grid of {n} nodes is too small"));
    }
    if !(rho_max > 0.0) {
        return Err("grid radius must be positive".to_string());
    }
    Ok(RadialGrid::new(n, rho_max))
}

impl EpsilonSeries {
    /// Serializes the series as a versioned JSON document.  Only nonzero
    /// harmonic rows are stored.
    pub fn to_json_string(&self) -> String {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (k, term) in self.terms.iter().enumerate() {
            let mut rows = encode_rows("euler", &term.euler);
            rows.extend(encode_rows("viscous", &term.viscous));
            terms.push(TermDoc { order: k, rows });
        }
        let doc = SeriesDoc {
            schema: SERIES_SCHEMA.to_string(),
            gamma1: self.circ.gamma1,
            gamma2: self.circ.gamma2,
            order: self.order,
            grid_n: self.grid.len(),
            grid_rho_max: self.grid.rho_max(),
            theta_dot: self.theta_dot.clone(),
            alpha_dot_ns: self.alpha_dot_ns.clone(),
            terms,
            diagnostics: self.diagnostics.clone(),
        };
        serde_json::to_string(&doc).expect("series documents serialize without fallible types")
    }

    /// Rebuilds a series from its JSON document.
    pub fn from_json_str(text: &str) -> Result<EpsilonSeries, AsymError> {
        let doc: SeriesDoc = serde_json::from_str(text).map_err(|e| AsymError::Format {
            detail: e.to_string(),
        })?;
        if doc.schema != SERIES_SCHEMA {
            return Err(AsymError::Schema { found: doc.schema });
        }
        let circ = Circulations::new(doc.gamma1, doc.gamma2)?;
        if doc.order < 1 || doc.order > MAX_SERIES_ORDER {
            return Err(AsymError::ExpansionOrder {
                requested: doc.order,
                min: 1,
                max: MAX_SERIES_ORDER,
            });
        }
        let grid = resolve_grid(doc.grid_n, doc.grid_rho_max)
            .map_err(|detail| AsymError::Format { detail })?;
        let expect = |cond: bool, detail: &str| -> Result<(), AsymError> {
            if cond {
                Ok(())
            } else {
                Err(AsymError::Format {
                    detail: detail.to_string(),
                })
            }
        };
        expect(doc.terms.len() == doc.order + 1, "term count does not match the order")?;
        expect(
            doc.theta_dot.len() == doc.order && doc.alpha_dot_ns.len() == doc.order,
            "modulation coefficient count does not match the order",
        )?;
        let mut terms = Vec::with_capacity(doc.terms.len());
        for (k, term_doc) in doc.terms.iter().enumerate() {
            expect(term_doc.order == k, "term orders are not consecutive")?;
            let mut euler =
                VectorModeField::zeros(grid.clone(), 1, DecayClass::SchwartzWeighted);
            let mut viscous =
                VectorModeField::zeros(grid.clone(), 1, DecayClass::SchwartzWeighted);
            for row in &term_doc.rows {
                let target = match row.part.as_str() {
                    "euler" => &mut euler,
                    "viscous" => &mut viscous,
                    _ => return Err(AsymError::Format {
                        detail: format!("unknown part tag {:?}", row.part),
                    }),
                };
                decode_row(target, row)
                    .map_err(|detail| AsymError::Format { detail })?;
            }
            terms.push(OrderTerm { euler, viscous });
        }
        Ok(EpsilonSeries {
            circ,
            order: doc.order,
            terms,
            theta_dot: doc.theta_dot,
            alpha_dot_ns: doc.alpha_dot_ns,
            diagnostics: doc.diagnostics,
            grid,
        })
    }
}
