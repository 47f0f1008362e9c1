//! Flat stationary solutions.
//!
//! A flat equilibrium consists of two horizontal interfaces at heights
//! `rho1*` and `rho2* = rho1* + delta`. The thickness `delta` is the unique
//! positive root of `tanh(delta)/delta = sigma_tilde/sigma_bar`; the
//! pressure offset `c` on the lower interface and the vertical profiles
//! `sigma*(y)`, `p*(y)` then follow in closed form. The lower height
//! `rho1*` is a free parameter of the family and is required input.

use crate::error::{Error, Result};
use crate::params::ModelParams;

/// Residual gate for the root condition `tanh(delta)/delta = ratio`.
pub const DELTA_RESIDUAL_TOL: f64 = 1e-12;

/// Gate for identities that hold exactly in real arithmetic (boundary
/// values, normalization identities); generous against f64 rounding.
pub const ANALYTIC_RESIDUAL_TOL: f64 = 1e-10;

/// Gate for residuals checked by centered second-order finite differences
/// with step [`FD_PROBE_STEP`]; scaled as O(h^2).
pub const FD_RESIDUAL_TOL: f64 = 1e-6;

/// Step used by the finite-difference residual probes.
pub const FD_PROBE_STEP: f64 = 1e-4;

/// Ratios closer to one than this are rejected: the root `delta` goes to
/// zero like `sqrt(3(1-ratio))` and downstream formulas divide by
/// `sinh(delta*k)`, so serving a root there would be misleadingly inaccurate.
pub const MAX_RATIO: f64 = 1.0 - 1e-10;

/// Profile evaluation allows stepping this far outside `[rho1*, rho2*]` so
/// centered difference probes at the interfaces remain legal.
const DOMAIN_OVERHANG: f64 = 1e-3;

/// Solves `tanh(delta)/delta = ratio` for the unique positive root.
///
/// Bracketed bisection on `[1e-8, max(50, 10/ratio)]` followed by a few
/// Newton refinements; the bracket is safe because the left-hand side is
/// strictly decreasing from 1 to 0 on `(0, infinity)`.
pub fn solve_delta(ratio: f64) -> Result<f64> {
    if !(ratio > 0.0 && ratio < 1.0) {
        return Err(Error::Domain(format!(
            "ratio sigma_tilde/sigma_bar must lie in (0,1), got {ratio}"
        )));
    }
    if ratio > MAX_RATIO {
        return Err(Error::Domain(format!(
            "ratio {ratio} too close to 1: the root delta degenerates to 0"
        )));
    }
    let g = |d: f64| d.tanh() / d - ratio;
    let mut lo = 1e-8_f64;
    let mut hi = 50.0_f64.max(10.0 / ratio);
    debug_assert!(g(lo) > 0.0 && g(hi) < 0.0);
    for _ in 0..90 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // Newton polish inside the final bracket; dg/dd = sech^2(d)/d - tanh(d)/d^2.
    let mut d = 0.5 * (lo + hi);
    for _ in 0..8 {
        let t = d.tanh();
        let dg = (1.0 - t * t) / d - t / (d * d);
        if dg == 0.0 {
            break;
        }
        let step = (t / d - ratio) / dg;
        let next = d - step;
        if next > lo && next < hi {
            d = next;
        } else {
            d = 0.5 * (lo + hi);
            break;
        }
        if step.abs() < 1e-16 * d {
            break;
        }
    }
    let residual = (d.tanh() / d - ratio).abs();
    if residual > DELTA_RESIDUAL_TOL {
        return Err(Error::SolveBreakdown(format!(
            "delta root residual {residual:e} exceeds {DELTA_RESIDUAL_TOL:e}"
        )));
    }
    Ok(d)
}

/// The necrotic pressure offset `c = (mu*sigma_bar/cosh(delta)) * B(delta)`
/// with `B(delta) = 1 - cosh(delta) + (delta/2) sinh(delta)`.
///
/// `B` is a difference of nearly equal quantities for small `delta`; its
/// power series `B = sum_(m>=2) (m-1) delta^(2m) / (2m)!` is used below the
/// switch point so the result keeps full relative accuracy (the bracket is
/// O(delta^4)). `c` is strictly positive for every `delta > 0`.
pub fn necrosis_constant(params: &ModelParams, delta: f64) -> Result<f64> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::Domain(format!(
            "delta must be positive, got {delta}"
        )));
    }
    let bracket = if delta < 0.75 {
        let t = delta * delta;
        // Coefficients (m-1)/(2m)! for m = 2..=8; the m=9 tail is below
        // 1e-16 relative at the switch point.
        let series = 1.0 / 24.0
            + t * (1.0 / 360.0
                + t * (1.0 / 13440.0
                    + t * (1.0 / 907_200.0
                        + t * (1.0 / 95_800_320.0
                            + t * (1.0 / 14_529_715_200.0 + t * (1.0 / 2_988_969_984_000.0))))));
        t * t * series
    } else {
        1.0 - delta.cosh() + 0.5 * delta * delta.sinh()
    };
    let c = params.mu * params.sigma_bar * bracket / delta.cosh();
    if c.is_nan() || c <= 0.0 {
        return Err(Error::SolveBreakdown(format!(
            "necrosis constant must be positive, got {c:e} at delta={delta}"
        )));
    }
    Ok(c)
}

/// A flat equilibrium of the two-interface model.
#[derive(Debug, Clone)]
pub struct FlatStationary {
    pub params: ModelParams,
    /// Height of the lower (necrotic) interface.
    pub rho1_star: f64,
    /// Layer thickness `rho2* - rho1*`.
    pub delta: f64,
    /// Pressure offset on the lower interface (`p*(rho1*) = -c`).
    pub c_value: f64,
}

/// The eight defining conditions of a flat equilibrium, evaluated as
/// residuals. ODE residuals use centered finite differences at
/// [`FD_PROBE_STEP`]; the rest are direct evaluations.
#[derive(Debug, Clone, Copy)]
pub struct FlatResiduals {
    /// max over probe points of `|sigma*'' - sigma*|` (finite-difference).
    pub sigma_ode: f64,
    /// max over probe points of `|p*'' + mu (sigma* - sigma_tilde)|`.
    pub pressure_ode: f64,
    /// `|sigma*(rho2*) - sigma_bar|`.
    pub sigma_top: f64,
    /// `|sigma*'(rho1*)|` (finite-difference).
    pub sigma_flux_bottom: f64,
    /// `|p*(rho1*) + c|`.
    pub pressure_bottom: f64,
    /// `|p*(rho2*)|`.
    pub pressure_top: f64,
    /// `|p*'(rho1*)|` (finite-difference).
    pub pressure_flux_bottom: f64,
    /// `|p*'(rho2*)|` (finite-difference).
    pub pressure_flux_top: f64,
}

impl FlatResiduals {
    /// Largest residual among the analytically-evaluated conditions.
    pub fn max_analytic(&self) -> f64 {
        self.sigma_top
            .max(self.pressure_bottom)
            .max(self.pressure_top)
    }

    /// Largest residual among the finite-difference-evaluated conditions.
    pub fn max_fd(&self) -> f64 {
        self.sigma_ode
            .max(self.pressure_ode)
            .max(self.sigma_flux_bottom)
            .max(self.pressure_flux_bottom)
            .max(self.pressure_flux_top)
    }
}

/// Builds a flat equilibrium and validates all eight defining conditions.
pub fn flat_stationary(params: &ModelParams, rho1_star: f64) -> Result<FlatStationary> {
    if rho1_star.is_nan() || rho1_star <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "rho1_star",
            reason: format!("must be positive, got {rho1_star}"),
        });
    }
    let delta = solve_delta(params.ratio())?;
    let c_value = necrosis_constant(params, delta)?;
    let fs = FlatStationary {
        params: *params,
        rho1_star,
        delta,
        c_value,
    };
    let r = fs.residuals(FD_PROBE_STEP);
    if r.max_analytic() > ANALYTIC_RESIDUAL_TOL {
        return Err(Error::SolveBreakdown(format!(
            "flat equilibrium analytic residual {:e} exceeds {ANALYTIC_RESIDUAL_TOL:e}",
            r.max_analytic()
        )));
    }
    if r.max_fd() > FD_RESIDUAL_TOL {
        return Err(Error::SolveBreakdown(format!(
            "flat equilibrium finite-difference residual {:e} exceeds {FD_RESIDUAL_TOL:e}",
            r.max_fd()
        )));
    }
    Ok(fs)
}

impl FlatStationary {
    /// Height of the upper interface.
    pub fn rho2_star(&self) -> f64 {
        self.rho1_star + self.delta
    }

    fn check_domain(&self, y: f64) -> Result<()> {
        if y < self.rho1_star - DOMAIN_OVERHANG || y > self.rho2_star() + DOMAIN_OVERHANG {
            return Err(Error::Domain(format!(
                "y = {y} outside the layer [{}, {}]",
                self.rho1_star,
                self.rho2_star()
            )));
        }
        Ok(())
    }

    /// The nutrient profile `sigma*(y) = sigma_bar cosh(y - rho1*)/cosh(delta)`.
    ///
    /// Evaluated in the shifted form rather than the raw
    /// `(cosh y - tanh(rho1*) sinh y)`-quotient: the two are identical, but
    /// the shifted form neither cancels nor overflows for large `rho1*`.
    /// A small overhang outside the layer is permitted so centered
    /// difference probes at the interfaces stay in-domain.
    pub fn sigma_star(&self, y: f64) -> Result<f64> {
        self.check_domain(y)?;
        Ok(self.sigma_star_unchecked(y))
    }

    pub(crate) fn sigma_star_unchecked(&self, y: f64) -> f64 {
        self.params.sigma_bar * (y - self.rho1_star).cosh() / self.delta.cosh()
    }

    /// First derivative `sigma*'(y)`.
    pub fn sigma_star_derivative(&self, y: f64) -> Result<f64> {
        self.check_domain(y)?;
        Ok(self.params.sigma_bar * (y - self.rho1_star).sinh() / self.delta.cosh())
    }

    /// The pressure profile
    /// `p*(y) = mu (sigma_bar - sigma*(y)) + mu sigma_tilde rho1* (rho2* - y)
    ///  + (mu sigma_tilde / 2)(y^2 - rho2*^2)`.
    pub fn p_star(&self, y: f64) -> Result<f64> {
        self.check_domain(y)?;
        Ok(self.p_star_unchecked(y))
    }

    pub(crate) fn p_star_unchecked(&self, y: f64) -> f64 {
        let p = &self.params;
        let r2 = self.rho2_star();
        p.mu * (p.sigma_bar - self.sigma_star_unchecked(y))
            + p.mu * p.sigma_tilde * self.rho1_star * (r2 - y)
            + 0.5 * p.mu * p.sigma_tilde * (y * y - r2 * r2)
    }

    /// First derivative `p*'(y)`.
    pub fn p_star_derivative(&self, y: f64) -> Result<f64> {
        self.check_domain(y)?;
        let p = &self.params;
        Ok(
            -p.mu * self.params.sigma_bar * (y - self.rho1_star).sinh() / self.delta.cosh()
                - p.mu * p.sigma_tilde * self.rho1_star
                + p.mu * p.sigma_tilde * y,
        )
    }

    /// Evaluates the eight defining conditions as residuals with
    /// finite-difference step `h`.
    pub fn residuals(&self, h: f64) -> FlatResiduals {
        let r1 = self.rho1_star;
        let r2 = self.rho2_star();
        let sig = |y: f64| self.sigma_star_unchecked(y);
        let pst = |y: f64| self.p_star_unchecked(y);
        let d2 = |f: &dyn Fn(f64) -> f64, y: f64| (f(y - h) - 2.0 * f(y) + f(y + h)) / (h * h);
        let d1 = |f: &dyn Fn(f64) -> f64, y: f64| (f(y + h) - f(y - h)) / (2.0 * h);

        let mut sigma_ode = 0.0_f64;
        let mut pressure_ode = 0.0_f64;
        let probes = 21;
        for i in 0..probes {
            let y = r1 + self.delta * i as f64 / (probes - 1) as f64;
            sigma_ode = sigma_ode.max((d2(&sig, y) - sig(y)).abs());
            pressure_ode = pressure_ode
                .max((d2(&pst, y) + self.params.mu * (sig(y) - self.params.sigma_tilde)).abs());
        }
        FlatResiduals {
            sigma_ode,
            pressure_ode,
            sigma_top: (sig(r2) - self.params.sigma_bar).abs(),
            sigma_flux_bottom: d1(&sig, r1).abs(),
            pressure_bottom: (pst(r1) + self.c_value).abs(),
            pressure_top: pst(r2).abs(),
            pressure_flux_bottom: d1(&pst, r1).abs(),
            pressure_flux_top: d1(&pst, r2).abs(),
        }
    }
}

/// The raw quotient form of `sigma*` as stated by the defining boundary
/// value problem. Kept as an independent evaluation route; its equality
/// with [`FlatStationary::sigma_star`] is asserted in tests. Unlike the
/// shifted form it cancels catastrophically for large heights, so it is
/// not used for computation.
pub fn sigma_star_raw(fs: &FlatStationary, y: f64) -> f64 {
    let t1 = fs.rho1_star.tanh();
    let r2 = fs.rho2_star();
    fs.params.sigma_bar * (y.cosh() - t1 * y.sinh()) / (r2.cosh() - t1 * r2.sinh())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> ModelParams {
        ModelParams::new(2.0, 1.0, 1.0).unwrap()
    }

    /// Root of tanh(d)/d = 1/2, frozen from a high-precision solve.
    const DELTA_HALF: f64 = 1.915_008_048_154_537_5;
    /// c at (sigma_bar, mu) = (2, 1) and the ratio-1/2 thickness.
    const C_HALF: f64 = 0.410_467_730_138_308_6;

    #[test]
    fn delta_forward_example_at_one() {
        let ratio = 1.0_f64.tanh();
        let d = solve_delta(ratio).unwrap();
        assert!((d - 1.0).abs() < 1e-9, "d = {d}");
    }

    #[test]
    fn delta_at_ratio_half_matches_frozen_value() {
        let d = solve_delta(0.5).unwrap();
        assert!((d - DELTA_HALF).abs() < 1e-13, "d = {d}");
        assert!((d.tanh() / d - 0.5).abs() <= DELTA_RESIDUAL_TOL);
    }

    #[test]
    fn delta_small_thickness_asymptotics() {
        // tanh(d)/d = 1 - d^2/3 + O(d^4), so d^2 ~ 3(1-ratio) near ratio=1.
        let ratio = 0.999_999;
        let d = solve_delta(ratio).unwrap();
        let predicted = (3.0 * (1.0 - ratio)).sqrt();
        assert!((d / predicted - 1.0).abs() < 1e-5, "d = {d}");
    }

    #[test]
    fn delta_domain_errors() {
        assert!(solve_delta(0.0).is_err());
        assert!(solve_delta(1.0).is_err());
        assert!(solve_delta(-0.3).is_err());
        assert!(solve_delta(1.5).is_err());
        assert!(solve_delta(1.0 - 1e-12).is_err());
    }

    #[test]
    fn delta_sweep_monotone_and_accurate() {
        let mut prev = f64::INFINITY;
        for i in 0..100 {
            let t = i as f64 / 99.0;
            let ratio = 0.01 * (0.99_f64 / 0.01).powf(t);
            let d = solve_delta(ratio).unwrap();
            assert!(
                (d.tanh() / d - ratio).abs() <= DELTA_RESIDUAL_TOL,
                "ratio {ratio}"
            );
            assert!(d < prev, "delta must decrease strictly in ratio");
            prev = d;
        }
    }

    #[test]
    fn necrosis_constant_matches_frozen_value() {
        let c = necrosis_constant(&params(), DELTA_HALF).unwrap();
        assert!((c - C_HALF).abs() < 1e-13, "c = {c}");
    }

    #[test]
    fn necrosis_constant_is_bilinear_in_mu_sigma_bar() {
        let d = 1.3;
        let base = necrosis_constant(&ModelParams::new(1.0, 0.5, 1.0).unwrap(), d).unwrap();
        let scaled = necrosis_constant(&ModelParams::new(4.0, 0.5, 2.0).unwrap(), d).unwrap();
        assert_eq!(scaled, 8.0 * base);
    }

    #[test]
    fn necrosis_constant_series_and_direct_agree_near_switch() {
        let p = params();
        for &d in &[0.6, 0.7, 0.749, 0.751, 0.8, 0.9] {
            let series = {
                let t = d * d;
                let s = 1.0 / 24.0
                    + t * (1.0 / 360.0
                        + t * (1.0 / 13440.0
                            + t * (1.0 / 907_200.0
                                + t * (1.0 / 95_800_320.0
                                    + t * (1.0 / 14_529_715_200.0
                                        + t * (1.0 / 2_988_969_984_000.0))))));
                p.mu * p.sigma_bar * t * t * s / d.cosh()
            };
            let direct = p.mu * p.sigma_bar * (1.0 - d.cosh() + 0.5 * d * d.sinh()) / d.cosh();
            let c = necrosis_constant(&p, d).unwrap();
            assert!((c - series).abs() / series < 1e-12, "d={d}");
            assert!((c - direct).abs() / series < 1e-11, "d={d}");
        }
    }

    #[test]
    fn necrosis_constant_small_thickness_scaling() {
        // c ~ mu sigma_bar delta^4 / 24 as delta -> 0.
        let p = params();
        let d = 1e-3;
        let c = necrosis_constant(&p, d).unwrap();
        let leading = p.mu * p.sigma_bar * d.powi(4) / 24.0;
        assert!((c / leading - 1.0).abs() < 1e-5);
    }

    #[test]
    fn necrosis_constant_positive_over_sweep() {
        let p = params();
        for i in 0..60 {
            let d = 1e-3 * (3e4_f64).powf(i as f64 / 59.0); // 1e-3 .. 30
            assert!(necrosis_constant(&p, d).unwrap() > 0.0, "d={d}");
        }
        assert!(necrosis_constant(&p, 0.0).is_err());
        assert!(necrosis_constant(&p, -1.0).is_err());
    }

    #[test]
    fn flat_stationary_validates_and_exposes_frozen_values() {
        let fs = flat_stationary(&params(), 1.0).unwrap();
        assert!((fs.delta - DELTA_HALF).abs() < 1e-13);
        assert!((fs.c_value - C_HALF).abs() < 1e-13);
        let r = fs.residuals(FD_PROBE_STEP);
        assert!(r.max_analytic() <= ANALYTIC_RESIDUAL_TOL);
        assert!(r.max_fd() <= FD_RESIDUAL_TOL);
    }

    #[test]
    fn flat_stationary_rejects_invalid_inputs() {
        assert!(flat_stationary(&params(), 0.0).is_err());
        assert!(flat_stationary(&params(), -2.0).is_err());
        assert!(ModelParams::new(1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn family_is_shift_invariant_in_rho1() {
        let a = flat_stationary(&params(), 1.0).unwrap();
        let b = flat_stationary(&params(), 5.0).unwrap();
        assert_eq!(a.delta, b.delta);
        assert_eq!(a.c_value, b.c_value);
        // sigma* depends on y only through y - rho1*.
        for &t in &[0.0, 0.3, 1.1, a.delta] {
            let va = a.sigma_star(a.rho1_star + t).unwrap();
            let vb = b.sigma_star(b.rho1_star + t).unwrap();
            assert!((va - vb).abs() <= 1e-14 * va.abs().max(1.0), "t={t}");
        }
    }

    #[test]
    fn profile_boundary_values() {
        let fs = flat_stationary(&params(), 1.0).unwrap();
        let r2 = fs.rho2_star();
        assert!((fs.sigma_star(r2).unwrap() - 2.0).abs() < 1e-14);
        let bottom = fs.sigma_star(fs.rho1_star).unwrap();
        assert!((bottom - 2.0 / fs.delta.cosh()).abs() < 1e-14);
        assert!(fs.p_star(r2).unwrap().abs() < 1e-14);
        assert!((fs.p_star(fs.rho1_star).unwrap() + fs.c_value).abs() < 1e-14);
    }

    #[test]
    fn profile_domain_errors() {
        let fs = flat_stationary(&params(), 1.0).unwrap();
        assert!(fs.sigma_star(0.5).is_err());
        assert!(fs.sigma_star(fs.rho2_star() + 0.5).is_err());
        assert!(fs.p_star(0.0).is_err());
        // the overhang admits finite-difference probes
        assert!(fs.sigma_star(fs.rho1_star - 1e-4).is_ok());
        assert!(fs.p_star(fs.rho2_star() + 1e-4).is_ok());
    }

    #[test]
    fn raw_and_shifted_sigma_forms_agree() {
        for &r1 in &[0.1, 0.5, 1.0, 3.0, 5.0] {
            let fs = flat_stationary(&params(), r1).unwrap();
            for i in 0..=16 {
                let y = fs.rho1_star + fs.delta * i as f64 / 16.0;
                let a = fs.sigma_star(y).unwrap();
                let b = sigma_star_raw(&fs, y);
                assert!(
                    (a - b).abs() <= 1e-11 * a.abs(),
                    "r1={r1} y={y}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn analytic_derivatives_match_finite_differences() {
        let fs = flat_stationary(&params(), 1.0).unwrap();
        let h = 1e-5;
        for i in 1..8 {
            let y = fs.rho1_star + fs.delta * i as f64 / 8.0;
            let sd = (fs.sigma_star(y + h).unwrap() - fs.sigma_star(y - h).unwrap()) / (2.0 * h);
            assert!((sd - fs.sigma_star_derivative(y).unwrap()).abs() < 1e-9);
            let pd = (fs.p_star(y + h).unwrap() - fs.p_star(y - h).unwrap()) / (2.0 * h);
            assert!((pd - fs.p_star_derivative(y).unwrap()).abs() < 1e-9);
        }
    }

    #[test]
    fn eight_conditions_hold_across_heights() {
        for &r1 in &[0.5, 1.0, 5.0] {
            let fs = flat_stationary(&params(), r1).unwrap();
            let r = fs.residuals(FD_PROBE_STEP);
            assert!(r.max_analytic() <= ANALYTIC_RESIDUAL_TOL, "r1={r1}");
            assert!(r.max_fd() <= FD_RESIDUAL_TOL, "r1={r1}");
        }
    }
}
