//! Pseudo-momenta algebra for the co-rotating pair: the coupled stream
//! operator tying the two vortex frames together, the rotating-frame
//! derivative, the pair linearization with the ε-expansion of its adjoint,
//! and the four pseudo-momenta whose inner-product structure splits a
//! perturbation into modulation directions and a projectable remainder.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::asym::{
    build_order2_on, component, component_mut, decode_row, encode_rows, is_zero_field,
    moment_expansion, resolve_grid, Circulations, EpsilonSeries, RowDoc, MAX_EXPANSION_ORDER,
};
use crate::grid::RadialGrid;
use crate::mode::{poisson_bracket, DecayClass, ModeField, VectorModeField};
use crate::oper::{apply_lambda_star, stream_field};
use crate::special::{gaussian_g, Trig};

/// Schema identifier for serialized momenta sets.
pub const MOMENTA_SCHEMA: &str = "vortex-pair-momenta/1";

/// ε-order through which the nontrivial momenta are realized.
pub const MOMENTA_ORDER: usize = 2;

/// Failure modes of the momenta layer.
#[derive(Clone, Debug)]
pub enum PseudoError {
    /// The adjoint expansion is only realized through the implemented order.
    UnsupportedOrder { requested: usize },
    /// The projector pivot `b̄ + āc̄/Γ` has collapsed and the four-momenta
    /// system cannot be inverted.
    SingularProjection { pivot: f64, scale: f64 },
    /// A serialized document carries an unknown schema identifier.
    Schema { found: String },
    /// A serialized document is malformed.
    Format { detail: String },
}

impl std::fmt::Display for PseudoError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PseudoError::UnsupportedOrder { requested } => write!(
                f,
                "adjoint order {requested} not realized; supported orders are 0..={MOMENTA_ORDER}"
            ),
            PseudoError::SingularProjection { pivot, scale } => write!(
                f,
                "projection pivot {pivot:.3e} is degenerate against scale {scale:.3e}"
            ),
            PseudoError::Schema { found } => {
                write!(f, "unknown momenta schema {found:?}, expected {MOMENTA_SCHEMA:?}")
            }
            PseudoError::Format { detail } => write!(f, "malformed momenta document: {detail}"),
        }
    }
}

impl std::error::Error for PseudoError {}

/// Second momentum direction `Y₂ = (Γ₂, −Γ₁)ᵀ`, component `i` (zero-based).
fn y2(c: &Circulations, i: usize) -> f64 {
    Circulations::kappa(i) * c.other_strength(i)
}

// ---------------------------------------------------------------------------
// Coupled stream and rotating-frame derivative
// ---------------------------------------------------------------------------

/// Coupled stream of a two-component field, with the spatially constant
/// logarithmic offsets of the shifted parts reported separately.
#[derive(Clone, Debug)]
pub struct CoupledStream {
    /// Per component, the own stream plus the companion's stream seen from
    /// the shifted frame, the latter through its far-field moment terms.
    pub field: VectorModeField,
    /// Constant offset `(mass/2π)·ln(α_a/ε)` carried by each shifted part;
    /// zero at `ε = 0`, where the companion is infinitely far away.
    pub log_constants: [f64; 2],
}

/// Applies the coupled stream operator: component `i` is `Δ⁻¹Ω_i` plus the
/// stream of the companion component seen from frame `i`, whose ε-dependent
/// part is expanded through `order` far-field moment terms.
///
/// Panics when `eps` is negative, `alpha_a` is not positive, or `order`
/// exceeds the supported expansion range.
pub fn coupled_stream(
    omega: &VectorModeField,
    eps: f64,
    alpha_a: f64,
    order: usize,
) -> CoupledStream {
    assert!(eps >= 0.0, "aspect ratio must be nonnegative, got {eps:.3e}");
    assert!(alpha_a > 0.0, "separation factor must be positive, got {alpha_a:.3e}");
    assert!(
        (1..=MAX_EXPANSION_ORDER).contains(&order),
        "expansion order {order} outside 1..={MAX_EXPANSION_ORDER}"
    );
    let grid = omega.grid().clone();
    let mut field = VectorModeField::zeros(grid, 1, DecayClass::Polynomial);
    let mut log_constants = [0.0; 2];
    for i in 0..2 {
        let own = component(omega, i);
        let psi = component_mut(&mut field, i);
        if !is_zero_field(own) {
            psi.axpy(1.0, &stream_field(own));
        }
        let far = component(omega, 1 - i);
        if eps > 0.0 && !is_zero_field(far) {
            let lambda = Circulations::kappa(i) * eps / alpha_a;
            let terms = moment_expansion(far, order).expect("order validated above");
            for (t, term) in terms.iter().enumerate() {
                psi.axpy(lambda.powi(t as i32 + 1), term);
            }
            log_constants[i] = far.mass() / (2.0 * PI) * (alpha_a / eps).ln();
        }
    }
    CoupledStream { field, log_constants }
}

/// Stream function of the co-rotating frame flow, `ξ₁Y₂ + (εΓ/2α_a)|ξ|²Y₁`.
pub fn frame_stream(
    eps: f64,
    alpha_a: f64,
    c: &Circulations,
    grid: &Arc<RadialGrid>,
) -> VectorModeField {
    assert!(alpha_a > 0.0, "separation factor must be positive, got {alpha_a:.3e}");
    let rho1 = grid.sample(|r| r);
    let rho2 = grid.sample(|r| r * r);
    let mut out = VectorModeField::zeros(grid.clone(), 1, DecayClass::Polynomial);
    for i in 0..2 {
        let f = component_mut(&mut out, i);
        f.add_harmonic(1, Trig::Cos, &rho1, y2(c, i));
        f.add_harmonic(0, Trig::Cos, &rho2, 0.5 * eps * c.gamma / alpha_a);
    }
    out
}

/// Rotating-frame derivative `(Y₂∂₂ + (εΓ/α_a)Y₁∂_ϑ)Ω`: the bracket of the
/// frame stream with the field, written out directly.
pub fn frame_derivative(
    omega: &VectorModeField,
    eps: f64,
    alpha_a: f64,
    c: &Circulations,
) -> VectorModeField {
    assert!(alpha_a > 0.0, "separation factor must be positive, got {alpha_a:.3e}");
    let swirl = eps * c.gamma / alpha_a;
    let make = |i: usize| {
        let om = component(omega, i);
        let mut f = om.partial_xi(2);
        f.scale(y2(c, i));
        f.axpy(swirl, &om.d_theta());
        f.trim_zeros();
        f
    };
    VectorModeField::new(make(0), make(1))
}

// ---------------------------------------------------------------------------
// Pair linearization and its adjoint expansion
// ---------------------------------------------------------------------------

/// Applies the linearization of the pair state to a perturbation:
/// `{Ψᴱ, ω}_V + {Bω, Ωᴱ}_V` with the stream pair and the profile pair
/// evaluated from the series at the given aspect ratio.
///
/// Panics when `eps` lies outside the series validity range `[0, 0.3]`.
pub fn apply_pair_lambda(
    omega: &VectorModeField,
    series: &EpsilonSeries,
    eps: f64,
) -> VectorModeField {
    let psi = series.euler_stream(eps);
    let state = series.euler_field(eps);
    let alpha = series.alpha(eps);
    let coupled = coupled_stream(omega, eps, alpha, MAX_EXPANSION_ORDER);
    let mut out = psi.bracket(omega);
    out.axpy(1.0, &coupled.field.bracket(&state));
    out.trim_zeros();
    out
}

/// Reads a component as `μξ₁ + νξ₂` plus a spatial constant, returning
/// `(μ, ν)`, or `None` when the component is not exactly affine.
fn affine_coefficients(f: &ModeField) -> Option<(f64, f64)> {
    let rho = f.grid().nodes();
    let last = f.grid().len() - 1;
    for k in 2..=f.max_mode() {
        if f.cos_profile(k).iter().any(|&v| v != 0.0)
            || f.sin_profile(k).iter().any(|&v| v != 0.0)
        {
            return None;
        }
    }
    let c0 = f.cos_profile(0);
    if c0.iter().any(|&v| v != c0[0]) {
        return None;
    }
    let fit = |k_present: bool, row: ndarray::ArrayView1<f64>| -> Option<f64> {
        if !k_present || row.iter().all(|&v| v == 0.0) {
            return Some(0.0);
        }
        let coeff = row[last] / rho[last];
        let scale = row.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        for (j, &v) in row.iter().enumerate() {
            if (v - coeff * rho[j]).abs() > 1e-12 * scale {
                return None;
            }
        }
        Some(coeff)
    };
    let has1 = f.max_mode() >= 1;
    let mu = fit(has1, f.cos_profile(if has1 { 1 } else { 0 }))?;
    let nu = fit(has1, f.sin_profile(if has1 { 1 } else { 0 }))?;
    if !has1 {
        return Some((0.0, 0.0));
    }
    Some((mu, nu))
}

/// One ε-order of the adjoint of the pair linearization, acting on a
/// polynomial-class field.
///
/// Order 0 is the diagonal single-vortex adjoint scaled by the strengths;
/// order 1 is a spatially constant vector built from a first moment of the
/// cross-component bracket; order 2 takes an exact polynomial route on
/// affine inputs and otherwise assembles the second-order profile pair, its
/// stream, and the second far-field moment term.  Higher orders are not
/// realized.
pub fn pair_lambda_star_order(
    ell: usize,
    rho: &VectorModeField,
    c: &Circulations,
) -> Result<VectorModeField, PseudoError> {
    let grid = rho.grid().clone();
    match ell {
        0 => {
            let make = |i: usize| {
                let mut f = apply_lambda_star(component(rho, i));
                f.scale(c.strength(i));
                f
            };
            Ok(VectorModeField::new(make(0), make(1)))
        }
        1 => {
            let g_row = grid.sample(gaussian_g);
            let g_field = ModeField::harmonic(
                grid.clone(),
                0,
                Trig::Cos,
                &g_row,
                DecayClass::SchwartzWeighted,
            );
            let ones = vec![1.0; grid.len()];
            let mut out = VectorModeField::zeros(grid, 0, DecayClass::Polynomial);
            for i in 0..2 {
                let other = component(rho, 1 - i);
                if is_zero_field(other) {
                    continue;
                }
                let bracket = poisson_bracket(other, &g_field);
                let moment = c.other_strength(i) * bracket.first_moment()[0];
                component_mut(&mut out, i).add_harmonic(
                    0,
                    Trig::Cos,
                    &ones,
                    Circulations::kappa(i) / (2.0 * PI) * moment,
                );
            }
            Ok(out)
        }
        2 => {
            let affine = (
                affine_coefficients(component(rho, 0)),
                affine_coefficients(component(rho, 1)),
            );
            if let (Some((mu1, nu1)), Some((mu2, nu2))) = affine {
                return Ok(star_order2_affine(&grid, c, [mu1, mu2], [nu1, nu2]));
            }
            star_order2_general(&grid, rho, c)
        }
        _ => Err(PseudoError::UnsupportedOrder { requested: ell }),
    }
}

/// Exact second-order adjoint on `ϱ_i = μ_iξ₁ + ν_iξ₂`: the stream and
/// inverse-Laplacian parts cancel, leaving degree-one polynomials.
fn star_order2_affine(
    grid: &Arc<RadialGrid>,
    c: &Circulations,
    mu: [f64; 2],
    nu: [f64; 2],
) -> VectorModeField {
    let rho1 = grid.sample(|r| r);
    let cos_sum = mu[0] * c.gamma1 + mu[1] * c.gamma2;
    let mut out = VectorModeField::zeros(grid.clone(), 1, DecayClass::Polynomial);
    for i in 0..2 {
        let own = nu[i];
        let other = nu[1 - i];
        let f = component_mut(&mut out, i);
        f.add_harmonic(
            1,
            Trig::Cos,
            &rho1,
            (c.other_strength(i) * (own - other) + own * c.gamma) / (2.0 * PI),
        );
        f.add_harmonic(1, Trig::Sin, &rho1, -cos_sum / (2.0 * PI));
    }
    out
}

/// Second-order adjoint on a general polynomial field, assembled from the
/// second-order profile pair: `−{Ψ₂, ϱ_i} − Δ⁻¹{ϱ_i, Ω₂} − P₂[{ϱ_î, Γ_îG}]`
/// with `Ψ₂` the second-order stream correction and `P₂` the second
/// far-field moment term.
fn star_order2_general(
    grid: &Arc<RadialGrid>,
    rho: &VectorModeField,
    c: &Circulations,
) -> Result<VectorModeField, PseudoError> {
    let order2 = build_order2_on(grid, c).map_err(|e| PseudoError::Format {
        detail: format!("second-order profiles unavailable: {e}"),
    })?;
    let g_row = grid.sample(gaussian_g);
    let g_field = ModeField::harmonic(
        grid.clone(),
        0,
        Trig::Cos,
        &g_row,
        DecayClass::SchwartzWeighted,
    );
    let rho2 = grid.sample(|r| r * r);
    let mut out = VectorModeField::zeros(grid.clone(), 1, DecayClass::Polynomial);
    for i in 0..2 {
        let own = component(rho, i);
        let target = component_mut(&mut out, i);
        let om2 = component(&order2.euler, i);
        if !is_zero_field(own) {
            let mut psi2 = stream_field(om2);
            psi2.add_harmonic(2, Trig::Cos, &rho2, -c.other_strength(i) / (4.0 * PI));
            psi2.add_harmonic(0, Trig::Cos, &rho2, -c.gamma / (4.0 * PI));
            target.axpy(-1.0, &poisson_bracket(&psi2, own));
            target.axpy(-1.0, &stream_field(&poisson_bracket(own, om2)));
        }
        let other = component(rho, 1 - i);
        if !is_zero_field(other) {
            let mut cross = poisson_bracket(other, &g_field);
            cross.scale(c.other_strength(i));
            let terms = moment_expansion(&cross, 2)
                .expect("second-order expansion is within the supported range");
            target.axpy(-1.0, &terms[1]);
        }
    }
    out.trim_zeros();
    Ok(out)
}

// ---------------------------------------------------------------------------
// The four pseudo-momenta
// ---------------------------------------------------------------------------

/// The four pseudo-momenta of a pair state and their images under the
/// state bracket, evaluated at a concrete aspect ratio.
///
/// The trivial pair `(ϱ^{te}, ϱ^{to})` is exact at every order; the
/// nontrivial pair `(ϱᵉ, ϱᵒ)` is realized through `ε²`, with `λᵉ` the
/// ε-series of the eigenvalue pairing them.
#[derive(Clone, Debug)]
pub struct PseudoMomentaSet {
    /// Translation momentum, even: `ξ₁Y₁`.
    pub rho_te: VectorModeField,
    /// Translation momentum, odd: `ξ₂Y₁`.
    pub rho_to: VectorModeField,
    /// Rotation momentum, even: `ξ₁Y₂ + (εΓ/2α)|ξ|²Y₁`.
    pub rho_e: VectorModeField,
    /// Rotation momentum, odd: `ξ₂Y₂`.
    pub rho_o: VectorModeField,
    /// Image `{ϱ^{te}, Ωᴱ}_V = ∂₂Ωᴱ`.
    pub f_te: VectorModeField,
    /// Image `{ϱ^{to}, Ωᴱ}_V = −∂₁Ωᴱ`.
    pub f_to: VectorModeField,
    /// Image `{ϱᵉ, Ωᴱ}_V`, the rotating-frame derivative of the state.
    pub f_e: VectorModeField,
    /// Image `{ϱᵒ, Ωᴱ}_V`, componentwise `−(Y₂)_i ∂₁Ωᴱ_i`.
    pub f_o: VectorModeField,
    /// ε-coefficients of the pairing eigenvalue, `[0, 0, Γ/π]`.
    pub lambda_e: Vec<f64>,
    /// Aspect ratio the fields are evaluated at.
    pub eps: f64,
    /// Implemented ε-order of the nontrivial pair.
    pub order: usize,
    circ: Circulations,
}

impl PseudoMomentaSet {
    pub fn circulations(&self) -> &Circulations {
        &self.circ
    }

    /// The pairing eigenvalue at the set's aspect ratio.
    pub fn lambda_e_at(&self, eps: f64) -> f64 {
        self.lambda_e
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * eps + c)
    }
}

/// Builds the four pseudo-momenta of the series state at a concrete aspect
/// ratio.  The momentum images are stored in their exact-parity derivative
/// forms, so each carries a pure ξ₂-parity bitwise.
///
/// Panics when the series holds fewer than two orders, when the strengths
/// disagree with the series, or when `eps` lies outside `[0, 0.3]`.
pub fn build_pseudo_momenta(
    series: &EpsilonSeries,
    c: &Circulations,
    eps: f64,
) -> PseudoMomentaSet {
    assert!(
        series.order() >= MOMENTA_ORDER,
        "nontrivial momenta need the second-order profiles, series holds order {}",
        series.order()
    );
    assert_eq!(
        c,
        series.circulations(),
        "strengths must match the series the momenta are built from"
    );
    let grid = series.grid().clone();
    let alpha = series.alpha(eps);
    let state = series.euler_field(eps);
    let rho1 = grid.sample(|r| r);

    let single = |trig: Trig, coeffs: [f64; 2]| {
        let mut out = VectorModeField::zeros(grid.clone(), 1, DecayClass::Polynomial);
        for i in 0..2 {
            component_mut(&mut out, i).add_harmonic(1, trig, &rho1, coeffs[i]);
        }
        out
    };
    let rho_te = single(Trig::Cos, [1.0, 1.0]);
    let rho_to = single(Trig::Sin, [1.0, 1.0]);
    let rho_e = frame_stream(eps, alpha, c, &grid);
    let rho_o = single(Trig::Sin, [y2(c, 0), y2(c, 1)]);

    let derivative = |j: usize, coeffs: [f64; 2]| {
        let make = |i: usize| {
            let mut f = component(&state, i).partial_xi(j);
            f.scale(coeffs[i]);
            f.trim_zeros();
            f
        };
        VectorModeField::new(make(0), make(1))
    };
    let f_te = derivative(2, [1.0, 1.0]);
    let f_to = derivative(1, [-1.0, -1.0]);
    let f_e = frame_derivative(&state, eps, alpha, c);
    let f_o = derivative(1, [-y2(c, 0), -y2(c, 1)]);

    PseudoMomentaSet {
        rho_te,
        rho_to,
        rho_e,
        rho_o,
        f_te,
        f_to,
        f_e,
        f_o,
        lambda_e: vec![0.0, 0.0, c.gamma / PI],
        eps,
        order: MOMENTA_ORDER,
        circ: *c,
    }
}

/// Inner products `I[j][k] = ⟨f_k, ϱ_j⟩_V` over the momenta in the order
/// (te, to, e, o).  Skew up to quadrature error, with the eight structural
/// zeros exact by parity.
///
/// Panics unless `eps` equals the aspect ratio the set was built at.
pub fn inner_product_matrix(set: &PseudoMomentaSet, eps: f64) -> [[f64; 4]; 4] {
    assert!(
        eps == set.eps,
        "matrix requested at ε = {eps:.6e} for a set built at ε = {:.6e}",
        set.eps
    );
    let rhos = [&set.rho_te, &set.rho_to, &set.rho_e, &set.rho_o];
    let fs = [&set.f_te, &set.f_to, &set.f_e, &set.f_o];
    let mut out = [[0.0; 4]; 4];
    for (j, rho) in rhos.iter().enumerate() {
        for (k, f) in fs.iter().enumerate() {
            out[j][k] = f.inner_v(rho);
        }
    }
    out
}

/// Decomposition of a perturbation over the nontrivial momenta directions.
#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Coefficient of the direction `fᵒ − (ā/Γ)f^{to}`.
    pub mu_o: f64,
    /// Coefficient of the direction `fᵉ + (c̄/Γ)f^{te}`.
    pub mu_e: f64,
    /// What is left after removing both directions; orthogonal to all four
    /// momenta when the input meets the zero-mass and zero-translation
    /// constraints.
    pub remainder: VectorModeField,
}

/// Splits a perturbation into the two modulation directions and a
/// remainder orthogonal to the nontrivial momenta.  The input is expected
/// mass-free per component with vanishing translation momenta; those two
/// pairings are untouched by the split.
pub fn project_perturbation(
    omega: &VectorModeField,
    set: &PseudoMomentaSet,
) -> Result<Decomposition, PseudoError> {
    let m = inner_product_matrix(set, set.eps);
    let c = &set.circ;
    // Mix the trivial images in so each direction is orthogonal to both
    // translation momenta for the discrete inner products.
    let w_to = -m[0][3] / m[0][1];
    let w_te = -m[1][2] / m[1][0];
    let pivot_o = m[2][3] + w_to * m[2][1];
    let pivot_e = m[3][2] + w_te * m[3][0];
    let scale = (c.gamma1 * c.gamma2 * c.gamma).abs();
    if pivot_o.abs() < 1e-6 * scale || pivot_e.abs() < 1e-6 * scale {
        return Err(PseudoError::SingularProjection {
            pivot: pivot_o.abs().min(pivot_e.abs()),
            scale,
        });
    }
    let mu_o = omega.inner_v(&set.rho_e) / pivot_o;
    let mu_e = omega.inner_v(&set.rho_o) / pivot_e;
    let mut dir_o = set.f_o.clone();
    dir_o.axpy(w_to, &set.f_to);
    let mut dir_e = set.f_e.clone();
    dir_e.axpy(w_te, &set.f_te);
    let mut remainder = omega.clone();
    remainder.axpy(-mu_o, &dir_o);
    remainder.axpy(-mu_e, &dir_e);
    remainder.trim_zeros();
    Ok(Decomposition { mu_o, mu_e, remainder })
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct MomentaDoc {
    schema: String,
    gamma1: f64,
    gamma2: f64,
    eps: f64,
    order: usize,
    grid_n: usize,
    grid_rho_max: f64,
    lambda_e: Vec<f64>,
    fields: Vec<FieldDoc>,
}

#[derive(Serialize, Deserialize)]
struct FieldDoc {
    name: String,
    rows: Vec<RowDoc>,
}

const FIELD_NAMES: [&str; 8] = [
    "rho_te", "rho_to", "rho_e", "rho_o", "f_te", "f_to", "f_e", "f_o",
];

impl PseudoMomentaSet {
    fn field_list(&self) -> [&VectorModeField; 8] {
        [
            &self.rho_te,
            &self.rho_to,
            &self.rho_e,
            &self.rho_o,
            &self.f_te,
            &self.f_to,
            &self.f_e,
            &self.f_o,
        ]
    }

    /// Serializes the set as a versioned JSON document.  Only nonzero
    /// harmonic rows are stored.
    pub fn to_json_string(&self) -> String {
        let fields = FIELD_NAMES
            .iter()
            .zip(self.field_list())
            .map(|(name, field)| FieldDoc {
                name: name.to_string(),
                rows: encode_rows(name, field),
            })
            .collect();
        let doc = MomentaDoc {
            schema: MOMENTA_SCHEMA.to_string(),
            gamma1: self.circ.gamma1,
            gamma2: self.circ.gamma2,
            eps: self.eps,
            order: self.order,
            grid_n: self.rho_te.grid().len(),
            grid_rho_max: self.rho_te.grid().rho_max(),
            lambda_e: self.lambda_e.clone(),
            fields,
        };
        serde_json::to_string(&doc).expect("momenta documents serialize without fallible types")
    }

    /// Rebuilds a set from its JSON document.
    pub fn from_json_str(text: &str) -> Result<PseudoMomentaSet, PseudoError> {
        let doc: MomentaDoc = serde_json::from_str(text).map_err(|e| PseudoError::Format {
            detail: e.to_string(),
        })?;
        if doc.schema != MOMENTA_SCHEMA {
            return Err(PseudoError::Schema { found: doc.schema });
        }
        let fail = |detail: &str| PseudoError::Format {
            detail: detail.to_string(),
        };
        let circ = Circulations::new(doc.gamma1, doc.gamma2)
            .map_err(|e| PseudoError::Format { detail: e.to_string() })?;
        if doc.order != MOMENTA_ORDER {
            return Err(fail("stored momenta order is not the realized one"));
        }
        if !(doc.eps.is_finite() && doc.eps >= 0.0) {
            return Err(fail("stored aspect ratio is not a nonnegative number"));
        }
        if doc.lambda_e.len() != MOMENTA_ORDER + 1 {
            return Err(fail("eigenvalue series length does not match the order"));
        }
        let grid = resolve_grid(doc.grid_n, doc.grid_rho_max)
            .map_err(|detail| PseudoError::Format { detail })?;
        if doc.fields.len() != FIELD_NAMES.len() {
            return Err(fail("field count does not match the four momenta pairs"));
        }
        let mut decoded = Vec::with_capacity(FIELD_NAMES.len());
        for (name, field_doc) in FIELD_NAMES.iter().zip(&doc.fields) {
            if field_doc.name != *name {
                return Err(PseudoError::Format {
                    detail: format!("expected field {name:?}, found {:?}", field_doc.name),
                });
            }
            let decay = if name.starts_with("rho") {
                DecayClass::Polynomial
            } else {
                DecayClass::SchwartzWeighted
            };
            let mut field = VectorModeField::zeros(grid.clone(), 1, decay);
            for row in &field_doc.rows {
                decode_row(&mut field, row)
                    .map_err(|detail| PseudoError::Format { detail })?;
            }
            decoded.push(field);
        }
        let mut it = decoded.into_iter();
        Ok(PseudoMomentaSet {
            rho_te: it.next().expect("eight fields decoded"),
            rho_to: it.next().expect("eight fields decoded"),
            rho_e: it.next().expect("eight fields decoded"),
            rho_o: it.next().expect("eight fields decoded"),
            f_te: it.next().expect("eight fields decoded"),
            f_to: it.next().expect("eight fields decoded"),
            f_e: it.next().expect("eight fields decoded"),
            f_o: it.next().expect("eight fields decoded"),
            lambda_e: doc.lambda_e,
            eps: doc.eps,
            order: doc.order,
            circ,
        })
    }
}
