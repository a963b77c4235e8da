use vortexlab_core::asym::{construct_approximation, Circulations};
use vortexlab_core::grid::RadialGrid;
use vortexlab_core::mode::{DecayClass, VectorModeField};
use vortexlab_core::oper::apply_lambda;
use vortexlab_core::pseudo::{
    apply_pair_lambda, build_pseudo_momenta, coupled_stream, frame_derivative, frame_stream,
    inner_product_matrix, pair_lambda_star_order, project_perturbation,
};
use vortexlab_core::special::{gaussian_g, upsilon_prime, Trig};

fn vnorm(f: &VectorModeField) -> f64 {
    f.norm_v()
}

fn v_norm_windowed(f: &VectorModeField, cut: f64) -> f64 {
    let grid = f.grid();
    let w = grid.quad_weights();
    let rho = grid.nodes();
    let mut total = 0.0;
    for comp in [f.component(1), f.component(2)] {
        for k in 0..=comp.max_mode() {
            let factor = if k == 0 { 2.0 } else { 1.0 } * std::f64::consts::PI;
            let c = comp.cos_profile(k);
            let s = comp.sin_profile(k);
            for j in 0..grid.len() {
                if rho[j] > cut {
                    break;
                }
                let q = c[j] * c[j] + if k > 0 { s[j] * s[j] } else { 0.0 };
                total += factor * w[j] * q;
            }
        }
    }
    total.sqrt()
}

/// Deterministic smooth rapidly decaying test pair with content in modes 0..=3.
fn test_pair(grid: &std::sync::Arc<RadialGrid>, seed: f64) -> VectorModeField {
    let mut f = VectorModeField::zeros(grid.clone(), 3, DecayClass::SchwartzWeighted);
    for (ci, comp) in [0.37 + seed, -0.61 - 0.5 * seed].into_iter().enumerate() {
        for k in 0..=3usize {
            let a = comp * (0.9 - 0.17 * k as f64);
            let b = 0.23 * comp - 0.05 * k as f64;
            let row: Vec<f64> = grid
                .nodes()
                .iter()
                .map(|&r| (a + b * r * r) * r.powi(k as i32) * (-r * r / 4.0).exp())
                .collect();
            let target = if ci == 0 { &mut f.c1 } else { &mut f.c2 };
            target.add_harmonic(k as isize, Trig::Cos, &row, 1.0);
            if k > 0 {
                target.add_harmonic(k as isize, Trig::Sin, &row, 0.4 - 0.2 * k as f64);
            }
        }
    }
    f
}

/// Modes >= 2 only: orthogonal to every mode-0/1 pseudo-momentum by parity.
fn high_mode_pair(grid: &std::sync::Arc<RadialGrid>) -> VectorModeField {
    let mut f = VectorModeField::zeros(grid.clone(), 3, DecayClass::SchwartzWeighted);
    let row2: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|&r| r * r * (-r * r / 4.0).exp())
        .collect();
    let row3: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|&r| r * r * r * (0.3 - 0.1 * r) * (-r * r / 5.0).exp())
        .collect();
    f.c1.add_harmonic(2, Trig::Cos, &row2, 0.8);
    f.c1.add_harmonic(3, Trig::Sin, &row3, -0.5);
    f.c2.add_harmonic(2, Trig::Sin, &row2, 0.6);
    f.c2.add_harmonic(3, Trig::Cos, &row3, 0.9);
    f
}

fn star_full(
    rho: &VectorModeField,
    c: &Circulations,
    eps: f64,
) -> VectorModeField {
    let mut out = pair_lambda_star_order(0, rho, c).unwrap();
    out.axpy(eps, &pair_lambda_star_order(1, rho, c).unwrap());
    out.axpy(eps * eps, &pair_lambda_star_order(2, rho, c).unwrap());
    out
}

fn main() {
    let grid = RadialGrid::standard();
    let equal = Circulations::equal();
    let uneq = Circulations::new(1.0, 0.5).unwrap();

    println!("== frame identity, interior comparison (equal, M=3, N=12) ==");
    let series = construct_approximation(&equal, 3).unwrap();
    for eps in [0.05, 0.025, 0.0125] {
        let alpha = series.alpha(eps);
        let state = series.euler_field(eps);
        let b_state = coupled_stream(&state, eps, alpha, 12);
        let xb = frame_derivative(&b_state.field, eps, alpha, &equal);
        let xo = frame_derivative(&state, eps, alpha, &equal);
        let bx = coupled_stream(&xo, eps, alpha, 12);
        let mut diff = xb.clone();
        diff.axpy(-1.0, &bx.field);
        let mut pts = String::new();
        for (r, t) in [(0.7, 0.4), (1.5, 1.1), (3.0, 2.0)] {
            let d = diff.component(1).eval_polar(r, t);
            let v = xb.component(1).eval_polar(r, t);
            pts.push_str(&format!(" ({r},{t}): d={:.2e}/v={:.2e}", d, v));
        }
        println!(
            "  eps={eps}: |diff|_vw6={:.3e} |X(BO)|_vw6={:.3e} pts:{pts}",
            v_norm_windowed(&diff, 6.0),
            v_norm_windowed(&xb, 6.0),
        );
    }

    println!("== X: bracket vs direct, {{Xhat,Xhat}}, eps=0 radial ==");
    for (name, c) in [("equal", &equal), ("1:0.5", &uneq)] {
        let series = construct_approximation(c, 2).unwrap();
        let eps = 0.05;
        let alpha = series.alpha(eps);
        let state = series.euler_field(eps);
        let direct = frame_derivative(&state, eps, alpha, c);
        let xhat = frame_stream(eps, alpha, c, &grid);
        let brack = xhat.bracket(&state);
        let mut d = brack.clone();
        d.axpy(-1.0, &direct);
        let selfb = xhat.bracket(&xhat);
        println!(
            "  {name}: |brack-direct|={:.3e} rel={:.3e} |{{Xhat,Xhat}}|={:.3e} vs |Xhat|={:.3e}",
            vnorm(&d),
            vnorm(&d) / vnorm(&direct),
            vnorm(&selfb),
            vnorm(&xhat),
        );

        // eps = 0 on a radial pair (G, G)
        let mut gg = VectorModeField::zeros(grid.clone(), 0, DecayClass::SchwartzWeighted);
        let grow: Vec<f64> = grid.sample(gaussian_g);
        gg.c1.add_harmonic(0, Trig::Cos, &grow, 1.0);
        gg.c2.add_harmonic(0, Trig::Cos, &grow, 1.0);
        let x0 = frame_derivative(&gg, 0.0, 1.0, c);
        let mut expect = VectorModeField::zeros(grid.clone(), 1, DecayClass::SchwartzWeighted);
        let dg = gg.c1.partial_xi(2);
        expect.c1.axpy(c.gamma2, &dg);
        expect.c2.axpy(-c.gamma1, &dg);
        let mut dd = x0.clone();
        dd.axpy(-1.0, &expect);
        println!("  {name}: eps=0 radial |X - (G2 d2, -G1 d2)| sup={:.3e}", dd.sup_coeff());
    }

    println!("== eps=0 block diagonal ==");
    for (name, c) in [("equal", &equal), ("1:0.5", &uneq)] {
        let series = construct_approximation(c, 2).unwrap();
        let f = test_pair(&grid, 0.11);
        let pair = apply_pair_lambda(&f, &series, 0.0);
        let mut expect = VectorModeField::zeros(grid.clone(), 0, DecayClass::SchwartzWeighted);
        expect.c1 = apply_lambda(&f.c1);
        expect.c1.scale(c.gamma1);
        expect.c2 = apply_lambda(&f.c2);
        expect.c2.scale(c.gamma2);
        let mut d = pair.clone();
        d.axpy(-1.0, &expect);
        println!(
            "  {name}: |pair - blockdiag|={:.3e} rel={:.3e}",
            vnorm(&d),
            vnorm(&d) / vnorm(&expect)
        );
    }

    println!("== duality <Lam w, rho> vs sum eps^l <w, Lam*_l rho> (equal M=2) ==");
    {
        let series = construct_approximation(&equal, 2).unwrap();
        let w = test_pair(&grid, 0.23);
        let rho_nodes: Vec<f64> = grid.nodes().to_vec();
        // affine probe
        let mut rho_a = VectorModeField::zeros(grid.clone(), 1, DecayClass::Polynomial);
        rho_a.c1.add_harmonic(1, Trig::Cos, &rho_nodes, 0.7);
        rho_a.c1.add_harmonic(1, Trig::Sin, &rho_nodes, -0.4);
        rho_a.c2.add_harmonic(1, Trig::Sin, &rho_nodes, 1.1);
        // general probe: add slow mode-0 and mode-2 content
        let mut rho_g = rho_a.clone();
        let sq: Vec<f64> = grid.nodes().iter().map(|&r| r * r * (-r * r / 36.0).exp()).collect();
        rho_g.c1.add_harmonic(2, Trig::Cos, &sq, 0.15);
        rho_g.c2.add_harmonic(0, Trig::Cos, &sq, -0.2);
        for (label, rho) in [("affine", &rho_a), ("general", &rho_g)] {
            let mut prev: Option<f64> = None;
            for eps in [0.1, 0.05, 0.025] {
                let lhs = apply_pair_lambda(&w, &series, eps).inner_v(rho);
                let rhs = w.inner_v(&star_full(rho, &equal, eps));
                let diff = (lhs - rhs).abs();
                let ratio = prev.map(|p| p / diff).unwrap_or(f64::NAN);
                println!(
                    "  {label} eps={eps}: lhs={:+.6e} diff={:.3e} ratio={:.2}",
                    lhs, diff, ratio
                );
                prev = Some(diff);
            }
        }
    }

    println!("== star order examples ==");
    for (name, c) in [("equal", &equal), ("1:0.5", &uneq)] {
        let rho_nodes: Vec<f64> = grid.nodes().to_vec();
        // ell=0 kernel on (xi1, 0)
        let mut k0 = VectorModeField::zeros(grid.clone(), 1, DecayClass::Polynomial);
        k0.c1.add_harmonic(1, Trig::Cos, &rho_nodes, 1.0);
        let im0 = pair_lambda_star_order(0, &k0, c).unwrap();
        println!("  {name}: |L*_0 (xi1,0)|={:.3e} sup={:.3e}", vnorm(&im0), im0.sup_coeff());

        // ell=1 on rho_to = xi2 Y1: expect constant (Y2)_i / 2pi
        let mut to = VectorModeField::zeros(grid.clone(), 1, DecayClass::Polynomial);
        to.c1.add_harmonic(1, Trig::Sin, &rho_nodes, 1.0);
        to.c2.add_harmonic(1, Trig::Sin, &rho_nodes, 1.0);
        let im1 = pair_lambda_star_order(1, &to, c).unwrap();
        for i in [1usize, 2] {
            let row = im1.component(i).cos_profile(0);
            let mn = row.iter().cloned().fold(f64::INFINITY, f64::min);
            let mx = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let y2i = if i == 1 { c.gamma2 } else { -c.gamma1 };
            let expect = y2i / (2.0 * std::f64::consts::PI);
            println!(
                "  {name} i={i}: ell1 const in [{:.12e},{:.12e}] expect {:.12e} relerr={:.3e}",
                mn,
                mx,
                expect,
                (mn - expect).abs() / expect.abs()
            );
        }

        // ell=2 closed on xi2 Y2 vs (Gam/pi) xi1 Y2
        let mut s2 = VectorModeField::zeros(grid.clone(), 1, DecayClass::Polynomial);
        s2.c1.add_harmonic(1, Trig::Sin, &rho_nodes, c.gamma2);
        s2.c2.add_harmonic(1, Trig::Sin, &rho_nodes, -c.gamma1);
        let im2 = pair_lambda_star_order(2, &s2, c).unwrap();
        let mut expect = VectorModeField::zeros(grid.clone(), 1, DecayClass::Polynomial);
        let lam2 = c.gamma / std::f64::consts::PI;
        expect.c1.add_harmonic(1, Trig::Cos, &rho_nodes, lam2 * c.gamma2);
        expect.c2.add_harmonic(1, Trig::Cos, &rho_nodes, lam2 * -c.gamma1);
        let mut d2 = im2.clone();
        d2.axpy(-1.0, &expect);
        println!("  {name}: |L*_2(xi2 Y2) - (G/pi) xi1 Y2| sup={:.3e}", d2.sup_coeff());
    }

    println!("== Prop 6.1 style residual L*[rho_te] - eps^2 thetadot rho_to ==");
    for (name, c) in [("equal", &equal), ("1:0.5", &uneq)] {
        let series = construct_approximation(c, 3).unwrap();
        println!(
            "  {name}: theta orders {:?}",
            (0..=2).map(|k| series.theta_dot(k).euler).collect::<Vec<_>>()
        );
        let mut prev = f64::NAN;
        for eps in [0.1, 0.05, 0.025] {
            let set = build_pseudo_momenta(&series, c, eps);
            let th = series.theta_dot_eval(eps, 0.0);
            let mut resid = star_full(&set.rho_te, c, eps);
            resid.axpy(-eps * eps * th, &set.rho_to);
            let n = vnorm(&resid);
            println!(
                "  {name} eps={eps}: |resid|={:.3e} |eps^2 th rho_to|={:.3e} ratio_prev={:.2}",
                n,
                (eps * eps * th).abs() * vnorm(&set.rho_to),
                prev / n
            );
            prev = n;
        }
    }

    println!("== projection examples ==");
    for (name, c) in [("equal", &equal), ("1:0.5", &uneq)] {
        let series = construct_approximation(c, 2).unwrap();
        let eps = 0.05;
        let set = build_pseudo_momenta(&series, c, eps);
        let m = inner_product_matrix(&set, eps);
        let w_to = -m[0][3] / m[0][1];
        let w_te = -m[1][2] / m[1][0];

        // own range
        let mut own = set.f_o.clone();
        own.axpy(w_to, &set.f_to);
        let d = project_perturbation(&own, &set).unwrap();
        println!(
            "  {name}: own-range mu_o-1={:.3e} mu_e={:.3e} |w_R|={:.3e}",
            d.mu_o - 1.0,
            d.mu_e,
            vnorm(&d.remainder)
        );

        // orthogonal input
        let orth = high_mode_pair(&grid);
        let d2 = project_perturbation(&orth, &set).unwrap();
        let mut dr = d2.remainder.clone();
        dr.axpy(-1.0, &orth);
        println!(
            "  {name}: orthogonal mu_o={:.3e} mu_e={:.3e} |w_R - w|={:.3e}",
            d2.mu_o,
            d2.mu_e,
            vnorm(&dr)
        );

        // reassembly
        let (mo, me) = (0.83, -1.27);
        let mut w = high_mode_pair(&grid);
        w.scale(0.4);
        let mut eo = set.f_o.clone();
        eo.axpy(w_to, &set.f_to);
        let mut ee = set.f_e.clone();
        ee.axpy(w_te, &set.f_te);
        w.axpy(mo, &eo);
        w.axpy(me, &ee);
        let d3 = project_perturbation(&w, &set).unwrap();
        println!(
            "  {name}: reassembly rel mu_o={:.3e} rel mu_e={:.3e} <wR,rho_e>={:.3e} <wR,rho_o>={:.3e} <wR,rho_te>={:.3e}",
            (d3.mu_o - mo).abs() / mo.abs(),
            (d3.mu_e - me).abs() / me.abs(),
            d3.remainder.inner_v(&set.rho_e),
            d3.remainder.inner_v(&set.rho_o),
            d3.remainder.inner_v(&set.rho_te),
        );
    }

    println!("== coupled stream examples ==");
    for (name, c) in [("equal", &equal), ("1:0.5", &uneq)] {
        let grow: Vec<f64> = grid.sample(gaussian_g);
        let mut gg = VectorModeField::zeros(grid.clone(), 0, DecayClass::SchwartzWeighted);
        gg.c1.add_harmonic(0, Trig::Cos, &grow, c.gamma1);
        gg.c2.add_harmonic(0, Trig::Cos, &grow, c.gamma2);

        // eps = 0: (G1 Upsilon, G2 Upsilon); check radial derivative
        let cs0 = coupled_stream(&gg, 0.0, 1.0, 4);
        for i in [1usize, 2] {
            let gstr = if i == 1 { c.gamma1 } else { c.gamma2 };
            let dpsi = cs0.field.component(i).d_rho();
            let drow = dpsi.cos_profile(0);
            let mut worst = 0.0f64;
            for (j, &r) in grid.nodes().iter().enumerate() {
                if !(0.2..=20.0).contains(&r) {
                    continue;
                }
                let expect = gstr * upsilon_prime(r);
                let rel = (drow[j] - expect).abs() / expect.abs();
                worst = worst.max(rel);
            }
            println!("  {name} i={i}: eps=0 d_rho vs upsilon_prime worst rel={:.3e}", worst);
            println!(
                "  {name} i={i}: log_constants={:+.6e} (expect far mass/2pi * ln(a/e)=0 at eps=0? reported={:+.6e})",
                cs0.log_constants[i - 1],
                cs0.log_constants[i - 1]
            );
        }

        // order 1 at eps=0.08: mode-1 cos row of field minus self stream
        let eps = 0.08;
        let cs1 = coupled_stream(&gg, eps, 1.0, 1);
        for i in [1usize, 2] {
            let gfar = if i == 1 { c.gamma2 } else { c.gamma1 };
            let kap = if i == 1 { 1.0 } else { -1.0 };
            let row = cs1.field.component(i).cos_profile(1);
            let expect = kap * eps * gfar / (2.0 * std::f64::consts::PI);
            let mut worst = 0.0f64;
            for (j, &r) in grid.nodes().iter().enumerate() {
                let rel = (row[j] / r - expect).abs() / expect.abs();
                worst = worst.max(rel);
            }
            println!("  {name} i={i}: order1 coeff relerr (vs k e Gfar/2pi)={:.3e}", worst);
        }

        // order 2 minus order 1: mode-2 cos row vs -(eps^2/4pi) Gfar rho^2
        let cs2 = coupled_stream(&gg, eps, 1.0, 2);
        for i in [1usize, 2] {
            let gfar = if i == 1 { c.gamma2 } else { c.gamma1 };
            let mut d = cs2.field.component(i).clone();
            d.axpy(-1.0, cs1.field.component(i));
            let row = d.cos_profile(2);
            let expect = -eps * eps * gfar / (4.0 * std::f64::consts::PI);
            let mut worst = 0.0f64;
            for (j, &r) in grid.nodes().iter().enumerate() {
                let rel = (row[j] / (r * r) - expect).abs() / expect.abs();
                worst = worst.max(rel);
            }
            println!("  {name} i={i}: order2 coeff relerr (vs -e^2 Gfar/4pi)={:.3e}", worst);
        }
    }
}
