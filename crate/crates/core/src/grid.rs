//! Stretched radial grid shared by every profile in a computation: nodes,
//! quadrature against the measure `ρ dρ`, finite-difference derivative
//! stencils, cumulative integrals for Green-kernel convolutions, and a
//! per-grid cache of boundary-value factorizations.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::linalg::BandedLu;

/// Clustering exponent of the node map `ρ(s) = ρ_max s^{3/2}`, `s = j/N`.
pub const STRETCH: f64 = 1.5;

/// Node count of the default working grid.
pub const DEFAULT_N: usize = 2048;

/// Outer radius of the default working grid.
pub const DEFAULT_RHO_MAX: f64 = 24.0;

const WINDOW: usize = 6;

/// Key for cached banded factorizations attached to a grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum FactorKey {
    /// Stream-function boundary-value problem at angular mode `n`.
    LambdaBvp { n: u32 },
    /// Shifted diffusion operator `(κ − L)` at angular mode `n`.
    Resolvent { n: u32, kappa_bits: u64 },
}

/// Radial discretization on `(0, ρ_max]` with nodes clustered near the axis.
///
/// The axis itself is not a node: profiles of angular mode `n` vanish there
/// like `ρⁿ`, and every integral carries the measure `ρ dρ`, so the origin
/// contributes nothing that the mapped quadrature does not already capture.
pub struct RadialGrid {
    rho: Vec<f64>,
    weight: Vec<f64>,
    rho_max: f64,
    h: f64,
    win: Vec<usize>,
    d1: Vec<[f64; WINDOW]>,
    d2: Vec<[f64; WINDOW]>,
    factorizations: Mutex<HashMap<FactorKey, Arc<BandedLu>>>,
}

impl std::fmt::Debug for RadialGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RadialGrid")
            .field("n", &self.rho.len())
            .field("rho_max", &self.rho_max)
            .finish()
    }
}

impl RadialGrid {
    /// Builds a grid with `n` nodes on `(0, rho_max]`.
    pub fn new(n: usize, rho_max: f64) -> Arc<RadialGrid> {
        assert!(n >= 16, "radial grid needs at least 16 nodes, got {n}");
        assert!(rho_max > 0.0, "outer radius must be positive");
        let h = 1.0 / n as f64;
        let mut rho = Vec::with_capacity(n);
        let mut weight = Vec::with_capacity(n);
        for j in 1..=n {
            let s = j as f64 * h;
            let r = rho_max * s.powf(STRETCH);
            rho.push(r);
            // Trapezoid rule in the map coordinate; the virtual axis node
            // carries zero integrand because rho * rho'(s) vanishes there.
            let trap = if j == n { 0.5 } else { 1.0 };
            weight.push(trap * h * STRETCH * r * r / s);
        }
        let mut win = Vec::with_capacity(n);
        let mut d1 = Vec::with_capacity(n);
        let mut d2 = Vec::with_capacity(n);
        for i in 0..n {
            let start = i.saturating_sub(2).min(n - WINDOW);
            let table = fornberg_weights(rho[i], &rho[start..start + WINDOW], 2);
            win.push(start);
            let mut w1 = [0.0; WINDOW];
            let mut w2 = [0.0; WINDOW];
            w1.copy_from_slice(&table[1]);
            w2.copy_from_slice(&table[2]);
            d1.push(w1);
            d2.push(w2);
        }
        Arc::new(RadialGrid {
            rho,
            weight,
            rho_max,
            h,
            win,
            d1,
            d2,
            factorizations: Mutex::new(HashMap::new()),
        })
    }

    /// The shared default grid (2048 nodes out to ρ = 24).
    pub fn standard() -> Arc<RadialGrid> {
        static STANDARD: OnceLock<Arc<RadialGrid>> = OnceLock::new();
        STANDARD
            .get_or_init(|| RadialGrid::new(DEFAULT_N, DEFAULT_RHO_MAX))
            .clone()
    }

    pub fn len(&self) -> usize {
        self.rho.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn rho_max(&self) -> f64 {
        self.rho_max
    }

    /// Node radii `ρ_1 < ρ_2 < … < ρ_N = ρ_max`.
    pub fn nodes(&self) -> &[f64] {
        &self.rho
    }

    /// Quadrature weights for `∫₀^∞ f(ρ) ρ dρ ≈ Σ w_j f(ρ_j)`.
    pub fn quad_weights(&self) -> &[f64] {
        &self.weight
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.rho.iter().map(|&r| f(r)).collect()
    }

    /// Integral of a sampled profile against the measure `ρ dρ`.
    pub fn integrate_rho(&self, values: &[f64]) -> f64 {
        assert_eq!(values.len(), self.rho.len(), "profile length mismatch");
        values
            .iter()
            .zip(&self.weight)
            .map(|(v, w)| v * w)
            .sum()
    }

    /// First radial derivative of a sampled profile.
    pub fn deriv1(&self, values: &[f64]) -> Vec<f64> {
        self.apply_stencils(values, &self.d1)
    }

    /// Second radial derivative of a sampled profile.
    pub fn deriv2(&self, values: &[f64]) -> Vec<f64> {
        self.apply_stencils(values, &self.d2)
    }

    fn apply_stencils(&self, values: &[f64], table: &[[f64; WINDOW]]) -> Vec<f64> {
        assert_eq!(values.len(), self.rho.len(), "profile length mismatch");
        (0..values.len())
            .map(|i| {
                let s = self.win[i];
                table[i]
                    .iter()
                    .zip(&values[s..s + WINDOW])
                    .map(|(c, v)| c * v)
                    .sum()
            })
            .collect()
    }

    /// Per-segment integrals `seg_j = ∫_{ρ_{j−1}}^{ρ_j} v(ρ) ρ dρ` (with
    /// `ρ_0 = 0`), by segment-wise cubic interpolation in the map coordinate.
    ///
    /// Prefix sums give inward cumulative integrals; suffix sums give outward
    /// ones without the cancellation a difference of large totals would cost.
    pub fn segment_rho_integrals(&self, values: &[f64]) -> Vec<f64> {
        let n = self.rho.len();
        assert_eq!(values.len(), n, "profile length mismatch");
        // phi_k = integrand in the map coordinate at node k, with the exact
        // virtual axis value phi_0 = 0; phi[k] pairs with values[k - 1].
        let mut phi = Vec::with_capacity(n + 1);
        phi.push(0.0);
        for (j, v) in values.iter().enumerate() {
            let s = (j + 1) as f64 * self.h;
            phi.push(v * STRETCH * self.rho[j] * self.rho[j] / s);
        }
        let h = self.h;
        (0..n)
            .map(|seg| {
                let quad = if seg == 0 {
                    let p = &phi[0..4];
                    (3.0 / 8.0) * p[0] + (19.0 / 24.0) * p[1] - (5.0 / 24.0) * p[2]
                        + (1.0 / 24.0) * p[3]
                } else if seg == n - 1 {
                    let p = &phi[n - 3..=n];
                    (1.0 / 24.0) * p[0] - (5.0 / 24.0) * p[1] + (19.0 / 24.0) * p[2]
                        + (3.0 / 8.0) * p[3]
                } else {
                    let p = &phi[seg - 1..seg + 3];
                    (-1.0 / 24.0) * p[0] + (13.0 / 24.0) * p[1] + (13.0 / 24.0) * p[2]
                        - (1.0 / 24.0) * p[3]
                };
                h * quad
            })
            .collect()
    }

    /// Running integrals `C_j = ∫₀^{ρ_j} v(ρ) ρ dρ`.
    pub fn cumulative_rho_integral(&self, values: &[f64]) -> Vec<f64> {
        let mut acc = 0.0;
        self.segment_rho_integrals(values)
            .into_iter()
            .map(|s| {
                acc += s;
                acc
            })
            .collect()
    }

    /// Outward integrals `S_j = ∫_{ρ_j}^{ρ_max} v(ρ) ρ dρ`, accumulated from
    /// the boundary inward.
    pub fn outward_rho_integral(&self, values: &[f64]) -> Vec<f64> {
        let segs = self.segment_rho_integrals(values);
        let n = segs.len();
        let mut out = vec![0.0; n];
        let mut acc = 0.0;
        for j in (0..n - 1).rev() {
            acc += segs[j + 1];
            out[j] = acc;
        }
        out
    }

    /// Polynomial interpolation of a sampled profile at radius `rho`.
    ///
    /// Uses the six nearest nodes; returns 0 beyond the outer radius, where
    /// every admissible profile has decayed below roundoff.
    pub fn interp(&self, values: &[f64], rho: f64) -> f64 {
        let n = self.rho.len();
        assert_eq!(values.len(), n, "profile length mismatch");
        if rho > self.rho_max {
            return 0.0;
        }
        let idx = self.rho.partition_point(|&r| r < rho);
        let start = idx.saturating_sub(3).min(n - WINDOW);
        lagrange_eval(
            rho,
            &self.rho[start..start + WINDOW],
            &values[start..start + WINDOW],
        )
    }

    /// Returns the cached factorization for `key`, building it on first use.
    pub(crate) fn cached_factorization(
        &self,
        key: FactorKey,
        build: impl FnOnce() -> BandedLu,
    ) -> Arc<BandedLu> {
        if let Some(f) = self.factorizations.lock().unwrap().get(&key) {
            return f.clone();
        }
        let fresh = Arc::new(build());
        let mut cache = self.factorizations.lock().unwrap();
        cache.entry(key).or_insert(fresh).clone()
    }
}

/// Finite-difference weights of Fornberg: derivatives of order `0..=m` at `z`
/// from arbitrary nodes `x`. Row `k` of the result holds the order-`k`
/// weights.
pub fn fornberg_weights(z: f64, x: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = x.len();
    assert!(n > m, "need more nodes than the derivative order");
    let mut c = vec![vec![0.0; n]; m + 1];
    let mut c1 = 1.0;
    let mut c4 = x[0] - z;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

fn lagrange_eval(z: f64, x: &[f64], y: &[f64]) -> f64 {
    let mut sum = 0.0;
    for i in 0..x.len() {
        if z == x[i] {
            return y[i];
        }
        let mut basis = 1.0;
        for j in 0..x.len() {
            if j != i {
                basis *= (z - x[j]) / (x[i] - x[j]);
            }
        }
        sum += basis * y[i];
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn fornberg_recovers_uniform_stencils() {
        let x = [-2.0, -1.0, 0.0, 1.0, 2.0];
        let w = fornberg_weights(0.0, &x, 2);
        let first = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
        let second = [-1.0 / 12.0, 16.0 / 12.0, -30.0 / 12.0, 16.0 / 12.0, -1.0 / 12.0];
        for i in 0..5 {
            assert_relative_eq!(w[1][i], first[i], epsilon = 1e-13);
            assert_relative_eq!(w[2][i], second[i], epsilon = 1e-13);
        }
    }

    #[test]
    fn gaussian_mass_quadrature() {
        let grid = RadialGrid::standard();
        let g = grid.sample(|r| (-r * r / 4.0).exp());
        assert_relative_eq!(grid.integrate_rho(&g), 2.0, epsilon = 1e-12);
    }

    #[test]
    fn quadrature_second_moment() {
        let grid = RadialGrid::standard();
        let g = grid.sample(|r| r * r * (-r * r / 4.0).exp());
        assert_relative_eq!(grid.integrate_rho(&g), 8.0, epsilon = 1e-11);
    }

    #[test]
    fn derivatives_of_gaussian() {
        let grid = RadialGrid::standard();
        let g = grid.sample(|r| (-r * r / 4.0).exp());
        let d1 = grid.deriv1(&g);
        let d2 = grid.deriv2(&g);
        for (j, &r) in grid.nodes().iter().enumerate() {
            if r > 12.0 {
                break;
            }
            let e = (-r * r / 4.0).exp();
            assert_relative_eq!(d1[j], -0.5 * r * e, epsilon = 1e-8);
            assert_relative_eq!(d2[j], (0.25 * r * r - 0.5) * e, epsilon = 1e-6);
        }
    }

    #[test]
    fn cumulative_integral_closed_form() {
        let grid = RadialGrid::standard();
        let v = grid.sample(|r| (-r * r / 4.0).exp());
        let cum = grid.cumulative_rho_integral(&v);
        for (j, &r) in grid.nodes().iter().enumerate() {
            let exact = 2.0 * (1.0 - (-r * r / 4.0).exp());
            assert_relative_eq!(cum[j], exact, epsilon = 1e-10);
        }
    }

    #[test]
    fn interpolation_hits_nodes_and_midpoints() {
        let grid = RadialGrid::new(256, 12.0);
        let v = grid.sample(|r| (1.0 + r).recip());
        assert_relative_eq!(grid.interp(&v, grid.nodes()[40]), v[40], epsilon = 1e-15);
        for rho in [0.013, 0.4, 3.7, 9.2] {
            assert_relative_eq!(grid.interp(&v, rho), (1.0 + rho).recip(), epsilon = 1e-9);
        }
        assert_eq!(grid.interp(&v, 13.0), 0.0);
    }
}
