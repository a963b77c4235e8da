//! Order-by-order construction of the slow-time pair expansion: far-field
//! moment terms, the universal second-order correction, modulation laws,
//! rotation-rate coefficients, and residual decay.

use std::f64::consts::PI;
use std::sync::Arc;

use proptest::prelude::*;

use vortexlab_core::asym::{
    beta_coefficients, build_order2, construct_approximation, moment_expansion, residual,
    residual_parts, universal_order2, AsymError, Circulations, EpsilonSeries,
};
use vortexlab_core::grid::RadialGrid;
use vortexlab_core::mode::{poisson_bracket, DecayClass, ModeField};
use vortexlab_core::oper::{apply_l, apply_lambda};
use vortexlab_core::special::Trig;

fn grid() -> Arc<RadialGrid> {
    RadialGrid::standard()
}

/// Unit-mass Gaussian with a quadrupole correction; its harmonic moments
/// are known exactly (mass 1, second cosine moment 2, fourth 24), which
/// pins every far-field term in closed form.
fn two_mode_field(grid: &Arc<RadialGrid>) -> ModeField {
    let mut f = ModeField::gaussian(grid.clone());
    let row: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|&r| r * r / 8.0 * (-r * r / 4.0).exp() / (4.0 * PI))
        .collect();
    f.add_harmonic(2, Trig::Cos, &row, 1.0);
    f
}

fn row_max_err(actual: ndarray::ArrayView1<f64>, expected: impl Fn(f64) -> f64, g: &RadialGrid) -> f64 {
    actual
        .iter()
        .zip(g.nodes())
        .map(|(a, &r)| (a - expected(r)).abs())
        .fold(0.0, f64::max)
}

#[test]
fn moment_terms_of_a_gaussian_match_closed_forms() {
    let g = grid();
    let f = ModeField::gaussian(g.clone());
    let terms = moment_expansion(&f, 4).unwrap();
    // A radial unit-mass field has only its mass, so the n-th term is
    // (−1)^{n−1}/(2πn)·ρⁿ cos nϑ.
    for (t, term) in terms.iter().enumerate() {
        let n = t + 1;
        let cn = if n % 2 == 1 { 1.0 } else { -1.0 } / (2.0 * PI * n as f64);
        let err = row_max_err(term.cos_profile(n), |r| cn * r.powi(n as i32), &g);
        let scale = (cn.abs() * g.rho_max().powi(n as i32)).max(1.0);
        assert!(err <= 1e-14 * scale, "term {n} cosine row off by {err:.3e}");
        for m in 0..=term.max_mode() {
            if m != n {
                assert_eq!(term.cos_profile(m).iter().fold(0.0f64, |a, v| a.max(v.abs())), 0.0);
            }
            assert_eq!(term.sin_profile(m).iter().fold(0.0f64, |a, v| a.max(v.abs())), 0.0);
        }
    }
}

#[test]
fn moment_terms_collect_lower_harmonics_from_field_moments() {
    let g = grid();
    let f = two_mode_field(&g);
    let terms = moment_expansion(&f, 4).unwrap();
    // With mass 1 and second cosine moment 2 the third term is
    // (1/6π)(ρ³cos3ϑ + 6ρcosϑ) and the fourth is
    // −(1/8π)(ρ⁴cos4ϑ + 12ρ²cos2ϑ); the field has no fourth moment, so
    // the fourth term carries no constant part.
    let c3 = 1.0 / (6.0 * PI);
    let c4 = -1.0 / (8.0 * PI);
    let checks: [(usize, usize, Box<dyn Fn(f64) -> f64>); 4] = [
        (2, 3, Box::new(move |r: f64| c3 * r.powi(3))),
        (2, 1, Box::new(move |r: f64| c3 * 6.0 * r)),
        (3, 4, Box::new(move |r: f64| c4 * r.powi(4))),
        (3, 2, Box::new(move |r: f64| c4 * 12.0 * r * r)),
    ];
    for (t, mode, expected) in checks {
        let err = row_max_err(terms[t].cos_profile(mode), expected, &g);
        assert!(
            err <= 1e-9,
            "term {} mode {mode} cosine row off by {err:.3e}",
            t + 1
        );
    }
    let const_row = terms[3].cos_profile(0);
    assert_eq!(const_row.iter().fold(0.0f64, |a, v| a.max(v.abs())), 0.0);
}

#[test]
fn far_field_truncations_converge_at_documented_rates() {
    let g = grid();
    let f = two_mode_field(&g);
    let terms = moment_expansion(&f, 7).unwrap();
    let mass = f.mass();
    // (1/2π)∫log|x−η| Ω(η) dη by 40-digit quadrature (mpmath), cross-checked
    // against a direct nested 2-D quadrature at 1e-15.
    let phi_8 = 0.344_067_283_356_631_89; // x = (8.8, 0)
    let phi_16 = 0.448_472_496_790_622_97; // x = (16.8, 0)
    let partial = |nmax: usize, a: f64| -> f64 {
        let lam = 1.0 / a;
        let mut s = mass / (2.0 * PI) * a.ln();
        let mut pw = 1.0;
        for term in terms.iter().take(nmax) {
            pw *= lam;
            s += pw * term.eval_xy(0.8, 0.0);
        }
        s
    };
    // Truncating after N terms leaves an O(λ^{N+1}) remainder, so halving λ
    // divides it by 2^{N+1}.
    for nmax in 1..=6 {
        let r8 = phi_8 - partial(nmax, 8.0);
        let r16 = phi_16 - partial(nmax, 16.0);
        let ratio = r8 / r16;
        let want = 2f64.powi(nmax as i32 + 1);
        assert!(
            (0.8 * want..=1.2 * want).contains(&ratio),
            "remainder ratio at N = {nmax} is {ratio:.3}, want {want} within 20%"
        );
    }
    // Off-axis value check at x = (8.7, 0.4): the seven-term sum lands on the
    // quadrature value to the size of the first dropped term.
    let phi_off = 0.342_382_160_444_677_66;
    let lam: f64 = 1.0 / 8.0;
    let mut s = mass / (2.0 * PI) * 8f64.ln();
    for (t, term) in terms.iter().enumerate() {
        s += lam.powi(t as i32 + 1) * term.eval_xy(0.7, 0.4);
    }
    assert!(
        (s - phi_off).abs() <= 3e-8,
        "seven-term far-field value off by {:.3e}",
        (s - phi_off).abs()
    );
}

#[test]
fn pair_interaction_correction_is_positive_and_inverts_forward() {
    let g = grid();
    let uni = universal_order2(&g).unwrap();
    // Positivity of the inviscid factor on the whole grid.
    for (&w, &r) in uni.euler_radial.values().iter().zip(g.nodes()) {
        assert!(w > 0.0, "inviscid factor not positive at rho = {r:.3}");
    }
    // Forward residual of the defining advection problem.
    let e_field = ModeField::harmonic(
        g.clone(),
        2,
        Trig::Cos,
        uni.euler_radial.values(),
        DecayClass::SchwartzWeighted,
    );
    let ns_field = ModeField::harmonic(
        g.clone(),
        2,
        Trig::Sin,
        uni.viscous_radial.values(),
        DecayClass::SchwartzWeighted,
    );
    let source: Vec<f64> = g
        .nodes()
        .iter()
        .map(|&r| -r * r * (-r * r / 4.0).exp() / (16.0 * PI * PI))
        .collect();
    let mut forward = apply_lambda(&e_field);
    let mut src_field = ModeField::zeros(g.clone(), 2, DecayClass::SchwartzWeighted);
    src_field.add_harmonic(2, Trig::Sin, &source, -1.0);
    forward.axpy(1.0, &src_field);
    let scale = e_field.sup_coeff().max(src_field.sup_coeff());
    assert!(
        forward.sup_coeff() <= 1e-6 * scale,
        "inviscid forward residual {:.3e} vs scale {scale:.3e}",
        forward.sup_coeff()
    );
    // The viscous factor satisfies advection = diffusion remainder of the
    // inviscid one.
    let mut rhs = apply_l(&e_field);
    rhs.axpy(-1.0, &e_field);
    let mut forward_ns = apply_lambda(&ns_field);
    forward_ns.axpy(-1.0, &rhs);
    let scale_ns = ns_field.sup_coeff().max(rhs.sup_coeff());
    assert!(
        forward_ns.sup_coeff() <= 1e-6 * scale_ns,
        "viscous forward residual {:.3e} vs scale {scale_ns:.3e}",
        forward_ns.sup_coeff()
    );
    // Frozen samples of the inviscid factor from an independent
    // high-precision shooting solve of the same boundary value problem.
    for (rho, want) in [
        (0.5, 0.04767952731742327),
        (1.0, 0.1631930447348662),
        (2.0, 0.35121550478252006),
        (4.0, 0.11719492604985679),
    ] {
        let got = g.interp(uni.euler_radial.values(), rho);
        assert!(
            (got - want).abs() <= 1e-6 * want.abs(),
            "inviscid factor at rho={rho}: got {got:.12e}, want {want:.12e}"
        );
    }
}

#[test]
fn quadratic_moment_of_the_correction_agrees_between_its_two_forms() {
    // The fourth-order rotation coefficient involves the weighted integral
    // of the second-order factor, which can be written either against the
    // harmonic polynomial ξ₁²−ξ₂² in the plane or as a radial moment; the
    // angular reduction ∫cos²(2ϑ)dϑ = π makes them equal.
    let g = grid();
    let uni = universal_order2(&g).unwrap();
    let e_field = ModeField::harmonic(
        g.clone(),
        2,
        Trig::Cos,
        uni.euler_radial.values(),
        DecayClass::SchwartzWeighted,
    );
    let quad_rows: Vec<f64> = g.nodes().iter().map(|&r| r * r).collect();
    let mut qc2 = ModeField::zeros(g.clone(), 2, DecayClass::Polynomial);
    qc2.add_harmonic(2, Trig::Cos, &quad_rows, 1.0);
    let planar = (1.0 / (2.0 * PI)) * e_field.mul(&qc2).mass();
    let radial = 0.5 * e_field.harmonic_moment(2, Trig::Cos) / PI;
    let denom = planar.abs().max(radial.abs());
    assert!(
        (planar - radial).abs() <= 1e-12 * denom,
        "planar form {planar:.15e} vs radial form {radial:.15e}"
    );
    assert!(planar > 0.0);
}

#[test]
fn low_orders_of_the_expansion_match_the_direct_pair_solution() {
    let circ = Circulations::equal();
    let series = construct_approximation(&circ, 3).unwrap();
    // Leading rotation rate.
    let want = -circ.gamma / (2.0 * PI);
    let got = series.theta_dot(0).euler;
    assert!(
        (got - want).abs() <= 1e-12 * want.abs(),
        "leading rotation rate {got:.15e} vs {want:.15e}"
    );
    assert_eq!(series.theta_dot(0).viscous, 0.0);
    // First-order corrections vanish.
    assert!(series.theta_dot(1).euler.abs() <= 1e-14);
    assert!(series.theta_dot(1).viscous.abs() <= 1e-14);
    assert!(series.alpha_dot_ns(1).abs() <= 1e-14);
    assert_eq!(series.term(1).euler.sup_coeff(), 0.0);
    assert_eq!(series.term(1).viscous.sup_coeff(), 0.0);
    // Second order agrees with the directly assembled correction.
    let direct = build_order2(&circ).unwrap();
    let t2 = series.term(2);
    for (series_part, direct_part) in
        [(&t2.euler, &direct.euler), (&t2.viscous, &direct.viscous)]
    {
        for i in [1, 2] {
            let mut diff = series_part.component(i).clone();
            diff.axpy(-1.0, direct_part.component(i));
            let scale = direct_part.component(i).sup_coeff();
            assert!(
                diff.sup_coeff() <= 1e-8 * scale,
                "second-order mismatch {:.3e} vs scale {scale:.3e}",
                diff.sup_coeff()
            );
        }
    }
}

fn check_construction_invariants(series: &EpsilonSeries) {
    let circ = series.circulations();
    // Base masses are the strengths; corrections are mass- and moment-free.
    for k in 0..=series.order() {
        let term = series.term(k);
        for (i, strength) in [(1usize, circ.gamma1), (2usize, circ.gamma2)] {
            let e = term.euler.component(i);
            let ns = term.viscous.component(i);
            let want_mass = if k == 0 { strength } else { 0.0 };
            assert!(
                (e.mass() - want_mass).abs() <= 1e-9,
                "order {k} vortex {i} inviscid mass {:.3e} vs {want_mass}",
                e.mass()
            );
            assert!(ns.mass().abs() <= 1e-9);
            for f in [e, ns] {
                let m = f.first_moment();
                assert!(
                    m[0].hypot(m[1]) <= 1e-9,
                    "order {k} vortex {i} first moment {:.3e}",
                    m[0].hypot(m[1])
                );
            }
            // Left-right symmetry: inviscid parts are even in ξ₂, viscous
            // parts odd.
            assert!(e.sin_magnitude() <= 1e-10 * e.cos_magnitude().max(1.0));
            assert!(ns.cos_magnitude() <= 1e-10 * ns.sin_magnitude().max(1.0));
            // Order k carries harmonics of index at most k.
            assert!(e.max_mode() <= k);
            assert!(ns.max_mode() <= k);
        }
    }
    // Leading rotation rate and separation law.
    let want = -circ.gamma / (2.0 * PI);
    assert!((series.theta_dot(0).euler - want).abs() <= 1e-12 * want.abs());
    let a = series.alpha_coeffs();
    assert_eq!(a[0], 1.0);
    assert!(a[1].abs() <= 1e-14);
    assert!(a[2].abs() <= 1e-14, "separation drifts at second order: {:.3e}", a[2]);
    assert!(a[3].abs() <= 1e-14, "separation drifts at third order: {:.3e}", a[3]);
}

#[test]
fn construction_enforces_mass_moment_and_parity_invariants() {
    let circ = Circulations::new(1.0, 0.6).unwrap();
    let series = construct_approximation(&circ, 4).unwrap();
    check_construction_invariants(&series);
    for d in series.diagnostics() {
        assert_eq!(d.parity_defect, 0.0);
        let scale = d.h0_norm.max(d.h1_norm);
        for defect in [
            d.h0_mass_defect,
            d.h1_mass_defect,
            d.h0_moment_defect,
            d.h1_moment_defect,
        ] {
            assert!(defect <= 1e-8 * scale.max(f64::MIN_POSITIVE));
        }
    }
}

#[test]
fn the_two_vortices_share_one_second_order_shape() {
    // At second order the correction of each vortex is the other strength
    // times one universal profile, so dividing by the partner strengths
    // must collapse both onto the same field.
    let circ = Circulations::new(1.0, 0.6).unwrap();
    let series = construct_approximation(&circ, 2).unwrap();
    let t2 = series.term(2);
    let mut diff = t2.euler.component(1).clone();
    diff.scale(1.0 / circ.gamma2);
    diff.axpy(-1.0 / circ.gamma1, t2.euler.component(2));
    let scale = t2.euler.component(1).sup_coeff() / circ.gamma2.abs();
    assert!(
        diff.sup_coeff() <= 1e-12 * scale,
        "shared-shape defect {:.3e} vs scale {scale:.3e}",
        diff.sup_coeff()
    );
}

#[test]
fn first_moments_of_the_residual_cancel_between_vortices() {
    let circ = Circulations::new(1.0, 0.6).unwrap();
    let series = construct_approximation(&circ, 4).unwrap();
    let parts = residual_parts(&series, 0.25).unwrap();
    for part in &parts.parts {
        let m1 = part.component(1).first_moment();
        let m2 = part.component(2).first_moment();
        for j in 0..2 {
            let scale = m1[j].abs() + m2[j].abs();
            assert!(
                (m1[j] + m2[j]).abs() <= 1e-8 * scale.max(1e-12),
                "moment component {j}: {:+.6e} + {:+.6e}",
                m1[j],
                m2[j]
            );
        }
    }
}

#[test]
fn residual_mass_vanishes_at_sampled_points() {
    let circ = Circulations::equal();
    let series = construct_approximation(&circ, 2).unwrap();
    let r = residual(&series, 0.1, 0.005).unwrap();
    assert!(r.component(1).mass().abs() <= 1e-9);
    assert!(r.component(2).mass().abs() <= 1e-9);
}

#[test]
fn rotation_rate_corrections_recover_the_fourth_order_drift() {
    let circ = Circulations::equal();
    let series = construct_approximation(&circ, 6).unwrap();
    // Orders two and three below the drift threshold vanish.
    assert!(series.theta_dot(2).euler.abs() <= 1e-10);
    assert!(series.theta_dot(3).euler.abs() <= 1e-10);
    // Frozen value of the fourth-order coefficient for the unit pair, from
    // an independent high-precision solve of the second-order problem and
    // quadrature of its weighted integral.
    let want = -44.49311644960786;
    let got = series.theta_dot(4).euler;
    assert!(
        (got - want).abs() <= 1e-6 * want.abs(),
        "fourth-order rotation coefficient {got:.12e} vs {want:.12e}"
    );

    let beta = beta_coefficients(&series, 5).unwrap();
    assert!((beta.normalized[0] - 1.0).abs() <= 1e-12);
    assert!((beta.raw[0] - circ.gamma / (2.0 * PI)).abs() <= 1e-12);
    assert!(beta.normalized[2].abs() <= 1e-10);
    assert!(beta.normalized[3].abs() <= 1e-10);
    let want_beta4 = 139.7792477734032;
    assert!(
        (beta.normalized[4] - want_beta4).abs() <= 1e-6 * want_beta4,
        "normalized fourth coefficient {:.12e} vs {want_beta4:.12e}",
        beta.normalized[4]
    );
    // The two normalizations differ by 2π/Γ.
    for k in 0..beta.raw.len() {
        let lifted = beta.raw[k] * 2.0 * PI / circ.gamma;
        assert!((lifted - beta.normalized[k]).abs() <= 1e-12 * lifted.abs().max(1.0));
    }
    assert!(beta.warning.is_none());
}

#[test]
fn fourth_order_drift_scales_with_the_strength_combination() {
    // The fourth coefficient is π(Γ₁²+Γ₂²)/(Γ₁Γ₂) times the weighted
    // integral of the universal second-order factor, so an unequal pair
    // must reproduce it with the same integral.
    let g = grid();
    let uni = universal_order2(&g).unwrap();
    let e_field = ModeField::harmonic(
        g.clone(),
        2,
        Trig::Cos,
        uni.euler_radial.values(),
        DecayClass::SchwartzWeighted,
    );
    let i3 = e_field.harmonic_moment(2, Trig::Cos) / PI;
    let circ = Circulations::new(1.0, 0.6).unwrap();
    let series = construct_approximation(&circ, 5).unwrap();
    let beta = beta_coefficients(&series, 4).unwrap();
    let want = PI * (circ.gamma1.powi(2) + circ.gamma2.powi(2)) / (circ.gamma1 * circ.gamma2) * i3;
    assert!(
        (beta.normalized[4] - want).abs() <= 1e-6 * want.abs(),
        "unequal-pair fourth coefficient {:.10e} vs predicted {want:.10e}",
        beta.normalized[4]
    );
}

#[test]
fn residual_shrinks_at_the_documented_rates() {
    let circ = Circulations::equal();

    // First-order series: the surviving residual is the quadrupole forcing
    // of the partner vortex, of size ε² at the inverse-viscosity level.
    let s1 = construct_approximation(&circ, 1).unwrap();
    let hi = residual_parts(&s1, 0.1).unwrap().norms();
    let lo = residual_parts(&s1, 0.05).unwrap().norms();
    let ratio = hi[0] / lo[0];
    assert!(
        (3.4..=4.6).contains(&ratio),
        "first-order ratio {ratio:.3} outside 4 ± 15%"
    );
    // Magnitude check against the explicit quadrupole bracket.
    let g = s1.grid().clone();
    let quad_rows: Vec<f64> = g.nodes().iter().map(|&r| r * r).collect();
    let mut qc2 = ModeField::zeros(g.clone(), 2, DecayClass::Polynomial);
    qc2.add_harmonic(2, Trig::Cos, &quad_rows, 1.0);
    let forcing = poisson_bracket(&qc2, &ModeField::gaussian(g.clone()));
    let predicted = (2.0f64).sqrt() * circ.gamma1 * circ.gamma2 / (4.0 * PI)
        * forcing.norm_l2()
        * 0.05f64.powi(2);
    assert!(
        (lo[0] - predicted).abs() <= 0.1 * predicted,
        "first-order magnitude {:.4e} vs predicted {predicted:.4e}",
        lo[0]
    );

    // Higher orders: the inverse-viscosity level shrinks like ε^{M+1} and
    // the viscous level like ε², each checked by ε-halving.
    for (m, window) in [(2usize, 8.0), (4usize, 32.0)] {
        let series = construct_approximation(&circ, m).unwrap();
        let hi = residual_parts(&series, 0.025).unwrap().norms();
        let lo = residual_parts(&series, 0.0125).unwrap().norms();
        let r0 = hi[0] / lo[0];
        assert!(
            (0.8 * window..=1.2 * window).contains(&r0),
            "order {m} inviscid-level ratio {r0:.3} outside {window} ± 20%"
        );
        let r2 = hi[2] / lo[2];
        assert!(
            (3.2..=4.8).contains(&r2),
            "order {m} viscous-level ratio {r2:.3} outside 4 ± 20%"
        );
    }
}

#[test]
fn series_documents_survive_json_round_trips() {
    let circ = Circulations::new(1.0, 0.5).unwrap();
    let series = construct_approximation(&circ, 2).unwrap();
    let text = series.to_json_string();
    let back = EpsilonSeries::from_json_str(&text).unwrap();
    assert_eq!(back.order(), series.order());
    for k in 0..series.order() {
        assert_eq!(back.theta_dot(k), series.theta_dot(k));
        assert_eq!(back.alpha_dot_ns(k), series.alpha_dot_ns(k));
    }
    for k in 0..=series.order() {
        for i in [1, 2] {
            let mut d_e = back.term(k).euler.component(i).clone();
            d_e.axpy(-1.0, series.term(k).euler.component(i));
            assert_eq!(d_e.sup_coeff(), 0.0, "inviscid rows not bitwise at order {k}");
            let mut d_ns = back.term(k).viscous.component(i).clone();
            d_ns.axpy(-1.0, series.term(k).viscous.component(i));
            assert_eq!(d_ns.sup_coeff(), 0.0, "viscous rows not bitwise at order {k}");
        }
    }

    let tampered = text.replace("vortex-pair-expansion/1", "vortex-pair-expansion/9");
    match EpsilonSeries::from_json_str(&tampered) {
        Err(AsymError::Schema { found }) => assert!(found.ends_with("/9")),
        other => panic!("expected schema rejection, got {other:?}"),
    }
    let truncated = &text[..text.len() / 2];
    assert!(matches!(
        EpsilonSeries::from_json_str(truncated),
        Err(AsymError::Format { .. })
    ));
}

#[test]
fn invalid_requests_are_rejected() {
    assert!(matches!(
        Circulations::new(1.0, -1.0),
        Err(AsymError::DegenerateCirculations { .. })
    ));

    // One vanishing strength defines a rotating frame but leaves the
    // moment balance without a unique modulation solution.
    let lone = Circulations::new(1.0, 0.0).unwrap();
    assert!(matches!(
        construct_approximation(&lone, 2),
        Err(AsymError::SingularMomentSystem { order: 0 })
    ));

    let circ = Circulations::equal();
    assert!(matches!(
        construct_approximation(&circ, 0),
        Err(AsymError::ExpansionOrder { .. })
    ));
    assert!(matches!(
        construct_approximation(&circ, 7),
        Err(AsymError::ExpansionOrder { .. })
    ));

    let series = construct_approximation(&circ, 2).unwrap();
    assert!(matches!(
        beta_coefficients(&series, 4),
        Err(AsymError::ExpansionOrder { .. })
    ));
    assert!(matches!(
        residual_parts(&series, 0.31),
        Err(AsymError::OutOfValidity { .. })
    ));
    assert!(matches!(
        residual(&series, 0.1, 0.02),
        Err(AsymError::OutOfValidity { .. })
    ));
}

#[test]
fn faint_partner_strengths_attach_a_warning() {
    let faint = Circulations::new(1.0, 0.04).unwrap();
    let series = construct_approximation(&faint, 5).unwrap();
    let beta = beta_coefficients(&series, 4).unwrap();
    assert!(beta.warning.is_some());
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 8,
        ..ProptestConfig::default()
    })]

    #[test]
    fn construction_invariants_hold_for_random_strength_ratios(
        raw in prop::sample::select(vec![0.15, 0.3, 0.45, 0.6, 0.8, 1.0, -0.2, -0.5, -0.75, -0.9])
    ) {
        let circ = Circulations::new(1.0, raw).unwrap();
        let series = construct_approximation(&circ, 2).unwrap();
        check_construction_invariants(&series);
    }
}
