//! Fields on the plane as finite Fourier series in the polar angle with
//! sampled radial profiles: the representation every operator in this crate
//! acts on, together with its calculus (derivatives, products, Poisson
//! brackets) and quadratures (mass, moments, plain and Gaussian-weighted
//! inner products).

use std::sync::Arc;

use ndarray::{Array2, ArrayView1};

use crate::grid::RadialGrid;
use crate::special::{gaussian_g, Trig};

/// Decay character of a radial profile: Gaussian-weighted rapid decay
/// (vorticity-like) or polynomial growth (multiplier fields).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecayClass {
    SchwartzWeighted,
    Polynomial,
}

impl DecayClass {
    /// Class of a pointwise product: one rapidly decaying factor is enough.
    pub fn product(self, other: DecayClass) -> DecayClass {
        if self == DecayClass::Polynomial && other == DecayClass::Polynomial {
            DecayClass::Polynomial
        } else {
            DecayClass::SchwartzWeighted
        }
    }

    /// Class of a sum: one polynomially growing term is enough.
    pub fn sum(self, other: DecayClass) -> DecayClass {
        if self == DecayClass::SchwartzWeighted && other == DecayClass::SchwartzWeighted {
            DecayClass::SchwartzWeighted
        } else {
            DecayClass::Polynomial
        }
    }
}

/// A single radial factor `a(ρ)` sampled on a grid.
#[derive(Clone, Debug)]
pub struct RadialProfile {
    grid: Arc<RadialGrid>,
    values: Vec<f64>,
    decay: DecayClass,
}

impl RadialProfile {
    pub fn new(grid: Arc<RadialGrid>, values: Vec<f64>, decay: DecayClass) -> RadialProfile {
        assert_eq!(values.len(), grid.len(), "profile length mismatch");
        assert!(
            values.iter().all(|v| v.is_finite()),
            "radial profile contains non-finite values"
        );
        RadialProfile { grid, values, decay }
    }

    pub fn from_fn(
        grid: Arc<RadialGrid>,
        decay: DecayClass,
        f: impl Fn(f64) -> f64,
    ) -> RadialProfile {
        let values = grid.sample(f);
        RadialProfile::new(grid, values, decay)
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn decay(&self) -> DecayClass {
        self.decay
    }

    /// Whether a rapidly decaying profile has in fact decayed at the grid
    /// boundary (true for the polynomial class by definition).
    pub fn decay_satisfied(&self) -> bool {
        match self.decay {
            DecayClass::Polynomial => true,
            DecayClass::SchwartzWeighted => {
                let max = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let last = self.values.last().map_or(0.0, |v| v.abs());
                last <= 1e-12 * max || max == 0.0
            }
        }
    }
}

/// Finite angular Fourier series with sampled radial coefficients:
/// `f(ρ, ϑ) = Σ_k c_k(ρ) cos kϑ + s_k(ρ) sin kϑ`, `k = 0..=max_mode`.
#[derive(Clone, Debug)]
pub struct ModeField {
    grid: Arc<RadialGrid>,
    /// Row `k`: radial profile of `cos kϑ`.
    cos: Array2<f64>,
    /// Row `k`: radial profile of `sin kϑ`; row 0 is identically zero.
    sin: Array2<f64>,
    decay: DecayClass,
}

impl ModeField {
    pub fn zeros(grid: Arc<RadialGrid>, max_mode: usize, decay: DecayClass) -> ModeField {
        let n = grid.len();
        ModeField {
            grid,
            cos: Array2::zeros((max_mode + 1, n)),
            sin: Array2::zeros((max_mode + 1, n)),
            decay,
        }
    }

    /// Purely radial field (mode 0).
    pub fn radial(grid: Arc<RadialGrid>, values: &[f64], decay: DecayClass) -> ModeField {
        let mut f = ModeField::zeros(grid, 0, decay);
        f.cos.row_mut(0).iter_mut().zip(values).for_each(|(d, s)| *d = *s);
        f
    }

    /// Single-harmonic field `a(ρ)·trig(kϑ)`.
    pub fn harmonic(
        grid: Arc<RadialGrid>,
        k: usize,
        trig: Trig,
        values: &[f64],
        decay: DecayClass,
    ) -> ModeField {
        assert!(
            !(k == 0 && trig == Trig::Sin),
            "sin harmonic undefined at mode 0"
        );
        let mut f = ModeField::zeros(grid, k, decay);
        let mut row = match trig {
            Trig::Cos => f.cos.row_mut(k),
            Trig::Sin => f.sin.row_mut(k),
        };
        row.iter_mut().zip(values).for_each(|(d, s)| *d = *s);
        f
    }

    /// The unit-mass Gaussian vortex profile as a mode-0 field.
    pub fn gaussian(grid: Arc<RadialGrid>) -> ModeField {
        let values = grid.sample(gaussian_g);
        ModeField::radial(grid, &values, DecayClass::SchwartzWeighted)
    }

    /// Projects a smooth function of the plane onto the first
    /// `max_mode` harmonics by angular trapezoid quadrature (exact for
    /// band-limited integrands at this sample count).
    pub fn project_fn(
        grid: Arc<RadialGrid>,
        max_mode: usize,
        decay: DecayClass,
        f: impl Fn(f64, f64) -> f64,
    ) -> ModeField {
        let n_ang = 4 * (max_mode + 2);
        let mut out = ModeField::zeros(grid.clone(), max_mode, decay);
        let dthet = 2.0 * std::f64::consts::PI / n_ang as f64;
        for (j, &rho) in grid.nodes().iter().enumerate() {
            let samples: Vec<f64> = (0..n_ang).map(|a| f(rho, a as f64 * dthet)).collect();
            for k in 0..=max_mode {
                let (mut ck, mut sk) = (0.0, 0.0);
                for (a, &v) in samples.iter().enumerate() {
                    let ang = k as f64 * a as f64 * dthet;
                    ck += v * ang.cos();
                    sk += v * ang.sin();
                }
                let norm = if k == 0 { 1.0 } else { 2.0 } / n_ang as f64;
                out.cos[[k, j]] = ck * norm;
                if k > 0 {
                    out.sin[[k, j]] = sk * norm;
                }
            }
        }
        out
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        &self.grid
    }

    pub fn max_mode(&self) -> usize {
        self.cos.nrows() - 1
    }

    pub fn decay(&self) -> DecayClass {
        self.decay
    }

    pub fn set_decay(&mut self, decay: DecayClass) {
        self.decay = decay;
    }

    pub fn cos_profile(&self, k: usize) -> ArrayView1<'_, f64> {
        self.cos.row(k)
    }

    pub fn sin_profile(&self, k: usize) -> ArrayView1<'_, f64> {
        self.sin.row(k)
    }

    /// Radial factor of one harmonic as an owned profile.
    pub fn profile(&self, k: usize, trig: Trig) -> RadialProfile {
        let row = match trig {
            Trig::Cos => self.cos.row(k),
            Trig::Sin => self.sin.row(k),
        };
        RadialProfile::new(self.grid.clone(), row.to_vec(), self.decay)
    }

    /// Adds `coeff · a(ρ) · trig(kϑ)` in place, folding negative harmonic
    /// indices by `cos(−kϑ) = cos kϑ`, `sin(−kϑ) = −sin kϑ` and growing the
    /// stored mode range when needed.
    pub fn add_harmonic(&mut self, k: isize, trig: Trig, values: &[f64], coeff: f64) {
        let (idx, sign) = if k < 0 { ((-k) as usize, -1.0) } else { (k as usize, 1.0) };
        let eff = match trig {
            Trig::Cos => coeff,
            Trig::Sin => sign * coeff,
        };
        if idx == 0 && trig == Trig::Sin {
            return;
        }
        if eff == 0.0 {
            return;
        }
        self.ensure_mode(idx);
        let mut row = match trig {
            Trig::Cos => self.cos.row_mut(idx),
            Trig::Sin => self.sin.row_mut(idx),
        };
        row.iter_mut().zip(values).for_each(|(d, s)| *d += eff * s);
    }

    fn ensure_mode(&mut self, k: usize) {
        let have = self.max_mode();
        if k <= have {
            return;
        }
        let n = self.grid.len();
        let grow = |old: &Array2<f64>| {
            let mut new = Array2::zeros((k + 1, n));
            new.slice_mut(ndarray::s![..=have, ..]).assign(old);
            new
        };
        self.cos = grow(&self.cos);
        self.sin = grow(&self.sin);
    }

    /// Drops trailing harmonics that are identically zero.
    pub fn trim_zeros(&mut self) {
        let mut top = self.max_mode();
        while top > 0 {
            let zero = self.cos.row(top).iter().all(|&v| v == 0.0)
                && self.sin.row(top).iter().all(|&v| v == 0.0);
            if !zero {
                break;
            }
            top -= 1;
        }
        if top < self.max_mode() {
            let n = self.grid.len();
            let mut cos = Array2::zeros((top + 1, n));
            let mut sin = Array2::zeros((top + 1, n));
            cos.assign(&self.cos.slice(ndarray::s![..=top, ..]));
            sin.assign(&self.sin.slice(ndarray::s![..=top, ..]));
            self.cos = cos;
            self.sin = sin;
        }
    }

    pub fn scale(&mut self, c: f64) {
        self.cos.mapv_inplace(|v| c * v);
        self.sin.mapv_inplace(|v| c * v);
    }

    /// `self += c · other`.
    pub fn axpy(&mut self, c: f64, other: &ModeField) {
        assert!(Arc::ptr_eq(&self.grid, &other.grid), "grid mismatch");
        self.ensure_mode(other.max_mode());
        for k in 0..=other.max_mode() {
            self.cos
                .row_mut(k)
                .iter_mut()
                .zip(other.cos.row(k))
                .for_each(|(d, s)| *d += c * s);
            self.sin
                .row_mut(k)
                .iter_mut()
                .zip(other.sin.row(k))
                .for_each(|(d, s)| *d += c * s);
        }
        self.decay = self.decay.sum(other.decay);
    }

    pub fn sum(terms: &[(&ModeField, f64)]) -> ModeField {
        assert!(!terms.is_empty(), "empty sum");
        let mut out = ModeField::zeros(
            terms[0].0.grid.clone(),
            terms.iter().map(|(t, _)| t.max_mode()).max().unwrap(),
            terms[0].0.decay,
        );
        for &(t, c) in terms {
            out.axpy(c, t);
        }
        out
    }

    /// Multiplies every harmonic by the same radial function.
    pub fn times_radial(&self, values: &[f64], decay: DecayClass) -> ModeField {
        assert_eq!(values.len(), self.grid.len(), "profile length mismatch");
        let mut out = self.clone();
        for k in 0..=out.max_mode() {
            out.cos
                .row_mut(k)
                .iter_mut()
                .zip(values)
                .for_each(|(d, s)| *d *= s);
            out.sin
                .row_mut(k)
                .iter_mut()
                .zip(values)
                .for_each(|(d, s)| *d *= s);
        }
        out.decay = decay;
        out
    }

    /// Pointwise product, expanded exactly over harmonics: the result's mode
    /// range is the sum of the operands' ranges.
    pub fn mul(&self, other: &ModeField) -> ModeField {
        assert!(Arc::ptr_eq(&self.grid, &other.grid), "grid mismatch");
        let mut out = ModeField::zeros(
            self.grid.clone(),
            self.max_mode() + other.max_mode(),
            self.decay.product(other.decay),
        );
        let n = self.grid.len();
        let mut prod = vec![0.0; n];
        let half = |a: ArrayView1<f64>, b: ArrayView1<f64>, prod: &mut [f64]| -> bool {
            let mut any = false;
            for i in 0..prod.len() {
                prod[i] = 0.5 * a[i] * b[i];
                any |= prod[i] != 0.0;
            }
            any
        };
        for ka in 0..=self.max_mode() {
            for kb in 0..=other.max_mode() {
                let (kai, kbi) = (ka as isize, kb as isize);
                // cos·cos → cos(ka−kb) + cos(ka+kb)
                if half(self.cos.row(ka), other.cos.row(kb), &mut prod) {
                    out.add_harmonic(kai - kbi, Trig::Cos, &prod, 1.0);
                    out.add_harmonic(kai + kbi, Trig::Cos, &prod, 1.0);
                }
                // sin·sin → cos(ka−kb) − cos(ka+kb)
                if ka > 0 && kb > 0 && half(self.sin.row(ka), other.sin.row(kb), &mut prod) {
                    out.add_harmonic(kai - kbi, Trig::Cos, &prod, 1.0);
                    out.add_harmonic(kai + kbi, Trig::Cos, &prod, -1.0);
                }
                // sin·cos → sin(ka+kb) + sin(ka−kb)
                if ka > 0 && half(self.sin.row(ka), other.cos.row(kb), &mut prod) {
                    out.add_harmonic(kai + kbi, Trig::Sin, &prod, 1.0);
                    out.add_harmonic(kai - kbi, Trig::Sin, &prod, 1.0);
                }
                // cos·sin → sin(ka+kb) − sin(ka−kb)
                if kb > 0 && half(self.cos.row(ka), other.sin.row(kb), &mut prod) {
                    out.add_harmonic(kai + kbi, Trig::Sin, &prod, 1.0);
                    out.add_harmonic(kai - kbi, Trig::Sin, &prod, -1.0);
                }
            }
        }
        out
    }

    /// Radial derivative `∂ρ`, harmonic by harmonic.
    pub fn d_rho(&self) -> ModeField {
        let mut out = self.clone();
        for k in 0..=self.max_mode() {
            let dc = self.grid.deriv1(self.cos.row(k).as_slice().unwrap());
            out.cos.row_mut(k).iter_mut().zip(&dc).for_each(|(d, s)| *d = *s);
            let ds = self.grid.deriv1(self.sin.row(k).as_slice().unwrap());
            out.sin.row_mut(k).iter_mut().zip(&ds).for_each(|(d, s)| *d = *s);
        }
        out
    }

    /// Angular derivative `∂ϑ`.
    pub fn d_theta(&self) -> ModeField {
        let mut out = ModeField::zeros(self.grid.clone(), self.max_mode(), self.decay);
        for k in 1..=self.max_mode() {
            let kf = k as f64;
            // ∂ϑ[c cos kϑ] = −k c sin kϑ; ∂ϑ[s sin kϑ] = k s cos kϑ.
            out.sin
                .row_mut(k)
                .iter_mut()
                .zip(self.cos.row(k))
                .for_each(|(d, s)| *d = -kf * s);
            out.cos
                .row_mut(k)
                .iter_mut()
                .zip(self.sin.row(k))
                .for_each(|(d, s)| *d = kf * s);
        }
        out
    }

    /// Cartesian derivative `∂_j`, `j ∈ {1, 2}`, realized as harmonic shifts
    /// `k → k ± 1` mixing cos and sin.
    pub fn partial_xi(&self, j: usize) -> ModeField {
        assert!(j == 1 || j == 2, "plane direction must be 1 or 2");
        let rho = self.grid.nodes();
        let n = self.grid.len();
        let mut out = ModeField::zeros(self.grid.clone(), self.max_mode() + 1, self.decay);
        let mut plus = vec![0.0; n];
        let mut minus = vec![0.0; n];
        for k in 0..=self.max_mode() {
            let kf = k as f64;
            let ki = k as isize;
            for (trig, row) in [(Trig::Cos, self.cos.row(k)), (Trig::Sin, self.sin.row(k))] {
                if k == 0 && trig == Trig::Sin {
                    continue;
                }
                if row.iter().all(|&v| v == 0.0) {
                    continue;
                }
                let a: Vec<f64> = row.to_vec();
                let da = self.grid.deriv1(&a);
                for i in 0..n {
                    let over = kf * a[i] / rho[i];
                    plus[i] = 0.5 * (da[i] - over);
                    minus[i] = 0.5 * (da[i] + over);
                }
                match (j, trig) {
                    // ∂₁[c cos kϑ] = ½(c′+kc/ρ)cos(k−1)ϑ + ½(c′−kc/ρ)cos(k+1)ϑ
                    (1, Trig::Cos) => {
                        out.add_harmonic(ki - 1, Trig::Cos, &minus, 1.0);
                        out.add_harmonic(ki + 1, Trig::Cos, &plus, 1.0);
                    }
                    // ∂₁[s sin kϑ] = ½(s′+ks/ρ)sin(k−1)ϑ + ½(s′−ks/ρ)sin(k+1)ϑ
                    (1, Trig::Sin) => {
                        out.add_harmonic(ki - 1, Trig::Sin, &minus, 1.0);
                        out.add_harmonic(ki + 1, Trig::Sin, &plus, 1.0);
                    }
                    // ∂₂[c cos kϑ] = ½(c′−kc/ρ)sin(k+1)ϑ − ½(c′+kc/ρ)sin(k−1)ϑ
                    (2, Trig::Cos) => {
                        out.add_harmonic(ki + 1, Trig::Sin, &plus, 1.0);
                        out.add_harmonic(ki - 1, Trig::Sin, &minus, -1.0);
                    }
                    // ∂₂[s sin kϑ] = ½(s′+ks/ρ)cos(k−1)ϑ − ½(s′−ks/ρ)cos(k+1)ϑ
                    (2, Trig::Sin) => {
                        out.add_harmonic(ki - 1, Trig::Cos, &minus, 1.0);
                        out.add_harmonic(ki + 1, Trig::Cos, &plus, -1.0);
                    }
                    _ => unreachable!(),
                }
            }
        }
        out
    }

    /// Laplacian, per harmonic: `Δₖ = ∂ρρ + ρ⁻¹∂ρ − k²ρ⁻²`.
    pub fn laplacian(&self) -> ModeField {
        let rho = self.grid.nodes();
        let mut out = ModeField::zeros(self.grid.clone(), self.max_mode(), self.decay);
        for k in 0..=self.max_mode() {
            let k2 = (k * k) as f64;
            for (src, mut dst) in [
                (self.cos.row(k), out.cos.row_mut(k)),
                (self.sin.row(k), out.sin.row_mut(k)),
            ] {
                let a: Vec<f64> = src.to_vec();
                if a.iter().all(|&v| v == 0.0) {
                    continue;
                }
                let d1 = self.grid.deriv1(&a);
                let d2 = self.grid.deriv2(&a);
                for (i, d) in dst.iter_mut().enumerate() {
                    *d = d2[i] + d1[i] / rho[i] - k2 * a[i] / (rho[i] * rho[i]);
                }
            }
        }
        out
    }

    /// Series evaluation at a polar point.
    pub fn eval_polar(&self, rho: f64, theta: f64) -> f64 {
        let mut sum = 0.0;
        for k in 0..=self.max_mode() {
            let ang = k as f64 * theta;
            let c = self.grid.interp(self.cos.row(k).as_slice().unwrap(), rho);
            sum += c * ang.cos();
            if k > 0 {
                let s = self.grid.interp(self.sin.row(k).as_slice().unwrap(), rho);
                sum += s * ang.sin();
            }
        }
        sum
    }

    /// Series evaluation at a Cartesian point.
    pub fn eval_xy(&self, x: f64, y: f64) -> f64 {
        self.eval_polar(x.hypot(y), y.atan2(x))
    }

    /// Total integral `m[f] = ∫ f dξ` (only mode 0 contributes).
    pub fn mass(&self) -> f64 {
        2.0 * std::f64::consts::PI
            * self.grid.integrate_rho(self.cos.row(0).as_slice().unwrap())
    }

    /// First moment `M[f] = ∫ ξ f dξ` (only mode 1 contributes).
    pub fn first_moment(&self) -> [f64; 2] {
        if self.max_mode() < 1 {
            return [0.0, 0.0];
        }
        let rho = self.grid.nodes();
        let weigh = |row: ArrayView1<f64>| {
            let v: Vec<f64> = row.iter().zip(rho).map(|(a, r)| a * r).collect();
            std::f64::consts::PI * self.grid.integrate_rho(&v)
        };
        [weigh(self.cos.row(1)), weigh(self.sin.row(1))]
    }

    /// Harmonic moment `∫ Q_k f dξ` for the cos or sin harmonic polynomial;
    /// `k = 0` (cos) is the mass.
    pub fn harmonic_moment(&self, k: usize, trig: Trig) -> f64 {
        if k == 0 {
            assert_eq!(trig, Trig::Cos, "sin harmonic undefined at mode 0");
            return self.mass();
        }
        if k > self.max_mode() {
            return 0.0;
        }
        let rho = self.grid.nodes();
        let row = match trig {
            Trig::Cos => self.cos.row(k),
            Trig::Sin => self.sin.row(k),
        };
        let v: Vec<f64> = row.iter().zip(rho).map(|(a, r)| a * r.powi(k as i32)).collect();
        std::f64::consts::PI * self.grid.integrate_rho(&v)
    }

    /// Plain L² inner product `∫ f g dξ`, mode-orthogonal by construction.
    pub fn inner_l2(&self, other: &ModeField) -> f64 {
        self.weighted_inner(other, None)
    }

    /// Gaussian-weighted inner product `∫ f g G⁻¹ dξ`.
    ///
    /// Panics if the weighted integrand has not decayed by the grid boundary
    /// (profiles must decay faster than `√G` for the integral to exist).
    pub fn inner_y(&self, other: &ModeField) -> f64 {
        let ginv = self.grid.sample(|r| 1.0 / gaussian_g(r));
        self.weighted_inner(other, Some(&ginv))
    }

    fn weighted_inner(&self, other: &ModeField, weight: Option<&[f64]>) -> f64 {
        assert!(Arc::ptr_eq(&self.grid, &other.grid), "grid mismatch");
        let kmax = self.max_mode().min(other.max_mode());
        let n = self.grid.len();
        let w = self.grid.quad_weights();
        let mut total = 0.0;
        let mut abs_total = 0.0;
        let mut last_contrib = 0.0;
        for k in 0..=kmax {
            let factor = if k == 0 { 2.0 } else { 1.0 } * std::f64::consts::PI;
            for i in 0..n {
                let mut q = self.cos[[k, i]] * other.cos[[k, i]];
                if k > 0 {
                    q += self.sin[[k, i]] * other.sin[[k, i]];
                }
                let mut term = factor * q * w[i];
                if let Some(g) = weight {
                    term *= g[i];
                }
                total += term;
                abs_total += term.abs();
                if i == n - 1 {
                    last_contrib += term.abs();
                }
            }
        }
        if weight.is_some() {
            assert!(
                total.is_finite() && (abs_total == 0.0 || last_contrib <= 1e-6 * abs_total),
                "non-integrable in the Gaussian-weighted space: \
                 integrand has not decayed at the grid boundary"
            );
        }
        total
    }

    pub fn norm_l2(&self) -> f64 {
        self.inner_l2(self).max(0.0).sqrt()
    }

    pub fn norm_y(&self) -> f64 {
        self.inner_y(self).max(0.0).sqrt()
    }

    /// Largest absolute radial coefficient across all harmonics.
    pub fn sup_coeff(&self) -> f64 {
        let m1 = self.cos.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        self.sin.iter().fold(m1, |m, v| m.max(v.abs()))
    }

    /// The ξ₂-even part (cos harmonics only).
    pub fn cos_part(&self) -> ModeField {
        let mut out = self.clone();
        out.sin.fill(0.0);
        out
    }

    /// The ξ₂-odd part (sin harmonics only).
    pub fn sin_part(&self) -> ModeField {
        let mut out = self.clone();
        out.cos.fill(0.0);
        out
    }

    /// Largest sin coefficient: zero iff the field is ξ₂-even.
    pub fn sin_magnitude(&self) -> f64 {
        self.sin.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Largest cos coefficient: zero iff the field is ξ₂-odd.
    pub fn cos_magnitude(&self) -> f64 {
        self.cos.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

/// Poisson bracket `{f, g} = ρ⁻¹(∂ρf ∂ϑg − ∂ϑf ∂ρg)`.
pub fn poisson_bracket(f: &ModeField, g: &ModeField) -> ModeField {
    let fr = f.d_rho();
    let ft = f.d_theta();
    let gr = g.d_rho();
    let gt = g.d_theta();
    let mut out = fr.mul(&gt);
    out.axpy(-1.0, &ft.mul(&gr));
    let inv_rho: Vec<f64> = f.grid().nodes().iter().map(|r| 1.0 / r).collect();
    let mut out = out.times_radial(&inv_rho, f.decay().product(g.decay()));
    out.trim_zeros();
    out
}

/// Two-component field `(f₁, f₂)ᵀ`, one entry per vortex.
#[derive(Clone, Debug)]
pub struct VectorModeField {
    pub c1: ModeField,
    pub c2: ModeField,
}

impl VectorModeField {
    pub fn new(c1: ModeField, c2: ModeField) -> VectorModeField {
        assert!(Arc::ptr_eq(c1.grid(), c2.grid()), "grid mismatch");
        VectorModeField { c1, c2 }
    }

    pub fn zeros(grid: Arc<RadialGrid>, max_mode: usize, decay: DecayClass) -> VectorModeField {
        VectorModeField {
            c1: ModeField::zeros(grid.clone(), max_mode, decay),
            c2: ModeField::zeros(grid, max_mode, decay),
        }
    }

    pub fn grid(&self) -> &Arc<RadialGrid> {
        self.c1.grid()
    }

    pub fn component(&self, i: usize) -> &ModeField {
        match i {
            1 => &self.c1,
            2 => &self.c2,
            _ => panic!("vortex index must be 1 or 2"),
        }
    }

    pub fn scale(&mut self, c: f64) {
        self.c1.scale(c);
        self.c2.scale(c);
    }

    pub fn axpy(&mut self, c: f64, other: &VectorModeField) {
        self.c1.axpy(c, &other.c1);
        self.c2.axpy(c, &other.c2);
    }

    /// Componentwise product `(f₁g₁, f₂g₂)ᵀ`.
    pub fn dot_mul(&self, other: &VectorModeField) -> VectorModeField {
        VectorModeField {
            c1: self.c1.mul(&other.c1),
            c2: self.c2.mul(&other.c2),
        }
    }

    /// Componentwise Poisson bracket.
    pub fn bracket(&self, other: &VectorModeField) -> VectorModeField {
        VectorModeField {
            c1: poisson_bracket(&self.c1, &other.c1),
            c2: poisson_bracket(&self.c2, &other.c2),
        }
    }

    /// Sum of componentwise L² inner products.
    pub fn inner_v(&self, other: &VectorModeField) -> f64 {
        self.c1.inner_l2(&other.c1) + self.c2.inner_l2(&other.c2)
    }

    pub fn norm_v(&self) -> f64 {
        self.inner_v(self).max(0.0).sqrt()
    }

    pub fn sup_coeff(&self) -> f64 {
        self.c1.sup_coeff().max(self.c2.sup_coeff())
    }

    pub fn trim_zeros(&mut self) {
        self.c1.trim_zeros();
        self.c2.trim_zeros();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn grid() -> Arc<RadialGrid> {
        RadialGrid::standard()
    }

    fn xi1(grid: &Arc<RadialGrid>) -> ModeField {
        let rho = grid.sample(|r| r);
        ModeField::harmonic(grid.clone(), 1, Trig::Cos, &rho, DecayClass::Polynomial)
    }

    fn xi2(grid: &Arc<RadialGrid>) -> ModeField {
        let rho = grid.sample(|r| r);
        ModeField::harmonic(grid.clone(), 1, Trig::Sin, &rho, DecayClass::Polynomial)
    }

    #[test]
    fn gaussian_mass_is_one() {
        let g = ModeField::gaussian(grid());
        assert_relative_eq!(g.mass(), 1.0, epsilon = 1e-12);
        assert_eq!(g.first_moment(), [0.0, 0.0]);
    }

    #[test]
    fn partial_of_xi1_is_one() {
        let g = grid();
        let d = xi1(&g).partial_xi(1);
        // ∂₁ξ₁ = 1: mode-0 coefficient 1, everything else zero.
        for &v in d.cos_profile(0) {
            assert_relative_eq!(v, 1.0, epsilon = 1e-9);
        }
        assert!(d.sin_magnitude() < 1e-10);
        let dd = xi1(&g).partial_xi(2);
        assert!(dd.sup_coeff() < 1e-9);
    }

    #[test]
    fn partials_of_gaussian() {
        let g = grid();
        let gg = ModeField::gaussian(g.clone());
        let d1 = gg.partial_xi(1);
        // ∂₁G = G′(ρ)cos ϑ.
        for (i, &r) in g.nodes().iter().enumerate() {
            assert_relative_eq!(
                d1.cos_profile(1)[i],
                crate::special::gaussian_g_prime(r),
                epsilon = 1e-9
            );
        }
        assert!(d1.sin_magnitude() == 0.0);
    }

    #[test]
    fn mixed_partials_commute() {
        let g = grid();
        let f = ModeField::harmonic(
            g.clone(),
            2,
            Trig::Cos,
            &g.sample(|r| r * r * (-r * r / 4.0).exp()),
            DecayClass::SchwartzWeighted,
        );
        let a = f.partial_xi(1).partial_xi(2);
        let b = f.partial_xi(2).partial_xi(1);
        let mut diff = a.clone();
        diff.axpy(-1.0, &b);
        assert!(diff.sup_coeff() < 1e-7 * f.sup_coeff().max(1.0));
    }

    #[test]
    fn laplacian_of_harmonic_polynomial_vanishes() {
        let g = grid();
        let q3 = ModeField::harmonic(
            g.clone(),
            3,
            Trig::Cos,
            &g.sample(|r| r.powi(3)),
            DecayClass::Polynomial,
        );
        let lap = q3.laplacian();
        // Away from the one-sided boundary stencils the Laplacian of a
        // degree-3 harmonic polynomial is zero to stencil accuracy.
        for (i, &r) in g.nodes().iter().enumerate() {
            if r > 1.0 && r < 20.0 {
                assert!(lap.cos_profile(3)[i].abs() < 1e-7, "rho={r}");
            }
        }
    }

    #[test]
    fn product_expands_modes() {
        let g = grid();
        let p = xi1(&g).mul(&xi2(&g));
        // ξ₁ξ₂ = ½ρ² sin 2ϑ.
        assert_eq!(p.max_mode(), 2);
        for (i, &r) in g.nodes().iter().enumerate() {
            assert_relative_eq!(p.sin_profile(2)[i], 0.5 * r * r, max_relative = 1e-13);
        }
        assert!(p.cos_magnitude() < 1e-13 * p.sup_coeff());
    }

    #[test]
    fn product_matches_pointwise_eval() {
        let g = grid();
        let a = ModeField::harmonic(
            g.clone(),
            2,
            Trig::Sin,
            &g.sample(|r| r * r * (-r * r / 4.0).exp()),
            DecayClass::SchwartzWeighted,
        );
        let b = ModeField::harmonic(
            g.clone(),
            1,
            Trig::Cos,
            &g.sample(|r| (-r * r / 8.0).exp()),
            DecayClass::SchwartzWeighted,
        );
        let p = a.mul(&b);
        for (rho, theta) in [(0.7, 0.3), (2.0, 1.9), (4.5, -2.0)] {
            assert_relative_eq!(
                p.eval_polar(rho, theta),
                a.eval_polar(rho, theta) * b.eval_polar(rho, theta),
                max_relative = 1e-10,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn bracket_of_translations() {
        let g = grid();
        let gg = ModeField::gaussian(g.clone());
        // {ξ₁, G} = ∂₂G and {ξ₂, G} = −∂₁G.
        let b1 = poisson_bracket(&xi1(&g), &gg);
        let d2 = gg.partial_xi(2);
        let mut diff = b1.clone();
        diff.axpy(-1.0, &d2);
        assert!(diff.sup_coeff() < 1e-10);
        let b2 = poisson_bracket(&xi2(&g), &gg);
        let d1 = gg.partial_xi(1);
        let mut diff = b2;
        diff.axpy(1.0, &d1);
        assert!(diff.sup_coeff() < 1e-10);
    }

    #[test]
    fn bracket_antisymmetry() {
        let g = grid();
        let a = ModeField::harmonic(
            g.clone(),
            2,
            Trig::Cos,
            &g.sample(|r| r * r * (-r * r / 4.0).exp()),
            DecayClass::SchwartzWeighted,
        );
        let mut sum = poisson_bracket(&a, &a);
        assert!(sum.sup_coeff() < 1e-12);
        let b = xi1(&g);
        sum = poisson_bracket(&a, &b);
        sum.axpy(1.0, &poisson_bracket(&b, &a));
        assert!(sum.sup_coeff() < 1e-12 * a.sup_coeff().max(1.0));
    }

    #[test]
    fn inner_y_of_gaussian_is_one() {
        let g = ModeField::gaussian(grid());
        // G·G·G⁻¹ = G integrates to 1.
        assert_relative_eq!(g.inner_y(&g), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn inner_y_mode_orthogonality_exact() {
        let g = grid();
        let a = ModeField::harmonic(
            g.clone(),
            2,
            Trig::Cos,
            &g.sample(|r| r * r * (-r * r / 4.0).exp()),
            DecayClass::SchwartzWeighted,
        );
        let b = ModeField::harmonic(
            g.clone(),
            3,
            Trig::Cos,
            &g.sample(|r| r * r * r * (-r * r / 4.0).exp()),
            DecayClass::SchwartzWeighted,
        );
        assert_eq!(a.inner_y(&b), 0.0);
    }

    #[test]
    #[should_panic(expected = "non-integrable")]
    fn inner_y_rejects_slow_decay() {
        let g = grid();
        // e^{−ρ²/8} = √(4πG): exactly the borderline the weight excludes.
        let f = ModeField::radial(
            g.clone(),
            &g.sample(|r| (-r * r / 8.0).exp()),
            DecayClass::SchwartzWeighted,
        );
        f.inner_y(&f);
    }

    #[test]
    fn moment_of_gradient_profile() {
        let g = grid();
        let d1g = ModeField::gaussian(g.clone()).partial_xi(1);
        let m = d1g.first_moment();
        assert_relative_eq!(m[0], -1.0, epsilon = 1e-10);
        assert_relative_eq!(m[1], 0.0, epsilon = 1e-14);
        assert_relative_eq!(d1g.mass(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn harmonic_moments_of_shifted_mass() {
        let g = grid();
        // Q-moments of G are mass only; higher harmonic moments vanish.
        let gg = ModeField::gaussian(g.clone());
        assert_relative_eq!(gg.harmonic_moment(0, Trig::Cos), 1.0, epsilon = 1e-12);
        assert_eq!(gg.harmonic_moment(2, Trig::Cos), 0.0);
    }

    #[test]
    fn projection_recovers_harmonics() {
        let g = RadialGrid::new(64, 12.0);
        let f = ModeField::project_fn(g.clone(), 3, DecayClass::SchwartzWeighted, |r, t| {
            (-r * r / 4.0).exp() * (1.0 + 0.5 * (2.0 * t).cos() - 1.5 * (3.0 * t).sin())
        });
        for (i, &r) in g.nodes().iter().enumerate() {
            let e = (-r * r / 4.0).exp();
            assert_relative_eq!(f.cos_profile(0)[i], e, max_relative = 1e-12);
            assert_relative_eq!(f.cos_profile(2)[i], 0.5 * e, max_relative = 1e-12);
            assert_relative_eq!(f.sin_profile(3)[i], -1.5 * e, max_relative = 1e-12);
            assert!(f.cos_profile(1)[i].abs() < 1e-14);
        }
    }
}
