//! Deterministic self-check suites.
//!
//! [`VerifyReport::run`] exercises every computational layer of the crate
//! against closed forms, independent discretizations, and frozen reference
//! values, producing a machine-readable pass/fail report. All inputs are
//! fixed, so repeated runs on the same parameters produce byte-identical
//! output. Frozen-number comparisons are specific to the canonical
//! parameter point (σ̄, σ̃, μ) = (2, 1, 1) with the inner interface at
//! height 1; on other parameters those comparisons are skipped and the
//! parameter-independent identities still run.

use serde::Serialize;

use crate::bvp::{self, BoundaryCondition, TwoPointBvp};
use crate::curve::BoundaryCurve;
use crate::error::Error;
use crate::evolution::{growth_rate, mode_velocity, step, LinearState};
use crate::format::fmt_float;
use crate::modes::{
    check_m0, check_m0_numeric, closed_ak, closed_mk, forcing_f, gamma1, gamma1_groups, gamma2,
    gamma_sweep, positivity_threshold, pressure_forcing_f, M0Verdict, ModeCoefficients,
};
use crate::params::ModelParams;
use crate::stationary::{flat_stationary, FlatStationary};
use crate::strip::{
    bifurcation_residual, build_operator, ellipticity_bounds, phi, phi_prime_up, solve_nutrient,
    solve_nutrient_generic, solve_pressure_generic, solve_pressure_neumann, suggested_c0,
};

/// Outcome of one named suite.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub details: Vec<String>,
}

/// Aggregated outcome of all suites.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suites: Vec<SuiteResult>,
    pub passed: bool,
}

/// Collects labelled bound checks for one suite.
struct Checks {
    details: Vec<String>,
    passed: bool,
}

impl Checks {
    fn new() -> Self {
        Self {
            details: Vec::new(),
            passed: true,
        }
    }

    /// Records `|value| <= bound`.
    fn bound(&mut self, label: &str, value: f64, bound: f64) {
        let ok = value.abs() <= bound;
        self.passed &= ok;
        self.details.push(format!(
            "{} {label}: {} within {}",
            if ok { "ok" } else { "FAIL" },
            fmt_float(value),
            fmt_float(bound)
        ));
    }

    fn claim(&mut self, label: &str, ok: bool) {
        self.passed &= ok;
        self.details
            .push(format!("{} {label}", if ok { "ok" } else { "FAIL" }));
    }

    fn note(&mut self, label: &str) {
        self.details.push(format!("-- {label}"));
    }

    fn finish(self, name: &str) -> SuiteResult {
        SuiteResult {
            name: name.to_string(),
            passed: self.passed,
            details: self.details,
        }
    }

    fn abort(mut self, name: &str, err: &Error) -> SuiteResult {
        self.passed = false;
        self.details.push(format!("FAIL unexpected error: {err}"));
        SuiteResult {
            name: name.to_string(),
            passed: false,
            details: self.details,
        }
    }
}

fn is_canonical(params: &ModelParams, rho1_star: f64) -> bool {
    params.sigma_bar == 2.0 && params.sigma_tilde == 1.0 && params.mu == 1.0 && rho1_star == 1.0
}

fn flat_pair(m: usize, fs: &FlatStationary) -> (BoundaryCurve, BoundaryCurve) {
    (
        BoundaryCurve::constant(m, fs.rho1_star).unwrap(),
        BoundaryCurve::constant(m, fs.rho2_star()).unwrap(),
    )
}

fn suite_flat_stationary(fs: &FlatStationary) -> SuiteResult {
    let mut c = Checks::new();
    let ratio = fs.params.ratio();
    c.bound(
        "bisection residual",
        fs.delta.tanh() / fs.delta - ratio,
        1e-12,
    );
    c.claim("necrosis constant positive", fs.c_value > 0.0);
    let residuals = fs.residuals(1e-4);
    c.bound(
        "analytic stationarity residual",
        residuals.max_analytic(),
        1e-10,
    );
    c.bound(
        "finite-difference stationarity residual",
        residuals.max_fd(),
        1e-6,
    );
    c.finish("flat-stationary")
}

fn suite_closed_forms(fs: &FlatStationary) -> SuiteResult {
    let name = "mode-closed-forms";
    let mut c = Checks::new();
    let n = 2048;
    let delta = fs.delta;
    let dif = 1.0 / (delta * delta);
    let cases = [(1usize, 0.3, -0.4), (4, 0.3, -0.4), (7, -0.8, 0.5)];
    for (k, a, ck) in cases {
        let mode = match ModeCoefficients::cos_only(k, a, ck) {
            Ok(m) => m,
            Err(e) => return c.abort(name, &e),
        };
        let kk = (k * k) as f64;
        let forcing = forcing_f(&mode, fs);
        let sigma_problem = match TwoPointBvp::new(
            dif,
            -(1.0 + kk),
            move |y| forcing.eval(y),
            BoundaryCondition::Neumann(0.0),
            BoundaryCondition::Dirichlet(0.0),
        ) {
            Ok(p) => p,
            Err(e) => return c.abort(name, &e),
        };
        let sigma = match bvp::solve(&sigma_problem, n) {
            Ok(s) => s,
            Err(e) => return c.abort(name, &e),
        };
        let ak = match closed_ak(&mode, fs) {
            Ok(p) => p,
            Err(e) => return c.abort(name, &e),
        };
        let mut sup_a = 0.0_f64;
        for (y, v) in sigma.grid.iter().zip(&sigma.values) {
            sup_a = sup_a.max((v - ak.eval(*y)).abs());
        }
        c.bound(&format!("nutrient amplitude mismatch k={k}"), sup_a, 1e-5);

        let pf = pressure_forcing_f(&mode, fs);
        let mu = fs.params.mu;
        let ak_rhs = match closed_ak(&mode, fs) {
            Ok(p) => p,
            Err(e) => return c.abort(name, &e),
        };
        let pressure_problem = match TwoPointBvp::new(
            dif,
            -kk,
            move |y| pf.eval(y) - mu * ak_rhs.eval(y),
            BoundaryCondition::Neumann(0.0),
            BoundaryCondition::Neumann(0.0),
        ) {
            Ok(p) => p,
            Err(e) => return c.abort(name, &e),
        };
        let pressure = match bvp::solve(&pressure_problem, n) {
            Ok(s) => s,
            Err(e) => return c.abort(name, &e),
        };
        let mk = match closed_mk(&mode, fs) {
            Ok(p) => p,
            Err(e) => return c.abort(name, &e),
        };
        let mut sup_m = 0.0_f64;
        for (y, v) in pressure.grid.iter().zip(&pressure.values) {
            sup_m = sup_m.max((v - mk.eval(*y)).abs());
        }
        c.bound(&format!("pressure amplitude mismatch k={k}"), sup_m, 1e-5);
    }
    c.finish(name)
}

fn suite_m0_dichotomy(fs: &FlatStationary) -> SuiteResult {
    let name = "vertical-shift-solvability";
    let mut c = Checks::new();
    let equal = ModeCoefficients::new(0, 0.4, 0.0, 0.4, 0.0).unwrap();
    let unequal = ModeCoefficients::new(0, 0.2, 0.0, 0.9, 0.0).unwrap();
    match check_m0(&equal) {
        Ok(M0Verdict::SolvableZero) => c.claim("equal shifts solvable with zero", true),
        other => c.claim(&format!("equal shifts misclassified: {other:?}"), false),
    }
    match check_m0(&unequal) {
        Ok(M0Verdict::Unsolvable) => c.claim("unequal shifts unsolvable", true),
        other => c.claim(&format!("unequal shifts misclassified: {other:?}"), false),
    }
    match check_m0_numeric(&equal, fs, 256) {
        Ok(sol) => {
            c.bound(
                "equal-shift defect",
                sol.compatibility_defect.unwrap_or(f64::NAN),
                1e-10,
            );
            c.bound("equal-shift solution norm", sol.sup_norm(), 1e-8);
        }
        Err(e) => return c.abort(name, &e),
    }
    match check_m0_numeric(&unequal, fs, 256) {
        Err(Error::Unsolvable { defect }) => {
            c.claim("unequal-shift defect detected", defect.abs() > 1e-4);
        }
        other => c.claim(
            &format!("unequal shifts accepted numerically: {other:?}"),
            false,
        ),
    }
    c.finish(name)
}

fn suite_gamma(fs: &FlatStationary, canonical: bool) -> SuiteResult {
    let name = "surface-tension-curves";
    let mut c = Checks::new();
    for k in [2usize, 7, 20] {
        let a = 0.3;
        let ck = -0.4;
        let mode = ModeCoefficients::cos_only(k, a, ck).unwrap();
        let kk = (k * k) as f64;
        let (g1, g2, mk) = match (
            gamma1(k, fs, ck / a),
            gamma2(k, fs, a / ck),
            closed_mk(&mode, fs),
        ) {
            (Ok(g1), Ok(g2), Ok(mk)) => (g1, g2, mk),
            (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return c.abort(name, &e),
        };
        let rel1 = (mk.eval(0.0) - kk * g1 * a) / (kk * g1 * a);
        let rel2 = (mk.eval(1.0) - kk * g2 * ck) / (kk * g2 * ck);
        c.bound(&format!("inner trace identity k={k}"), rel1, 1e-10);
        c.bound(&format!("outer trace identity k={k}"), rel2, 1e-10);
    }
    match (gamma1(200, fs, 1.0), gamma2(200, fs, 1.0)) {
        (Ok(g1), Ok(g2)) => {
            c.claim(
                "tensions decay at large wavenumber",
                g1.abs() < 1e-3 && g2.abs() < 1e-3,
            );
        }
        (Err(e), _) | (_, Err(e)) => return c.abort(name, &e),
    }
    let d = fs.delta;
    let (l1, l2, l3) = gamma1_groups(200, fs, 1.0);
    let l2_limit = d - (1.0 + 0.5 * d * d) * d.tanh();
    c.claim("bracket group 1 grows", l1 > 1e3);
    c.bound("bracket group 2 asymptote", l2 - l2_limit, 1e-2);
    c.bound("bracket group 3 decays", l3, 1e-12);
    if canonical {
        let table = [
            (1usize, 0.363_863_929_588, 0.377_249_094_69),
            (2, 0.055_975_091_04, 0.071_744_825_702_9),
            (5, 0.003_473_959_023_86, 0.006_483_595_368_61),
            (10, 0.000_426_022_920_305, 0.000_904_487_788_734),
        ];
        for (k, g1_ref, g2_ref) in table {
            let g1 = gamma1(k, fs, 1.0).unwrap();
            let g2 = gamma2(k, fs, 1.0).unwrap();
            c.bound(
                &format!("frozen inner tension k={k}"),
                (g1 - g1_ref) / g1_ref,
                1e-9,
            );
            c.bound(
                &format!("frozen outer tension k={k}"),
                (g2 - g2_ref) / g2_ref,
                1e-9,
            );
        }
        match gamma_sweep(fs, 30, 1.0) {
            Ok(rows) => {
                c.claim(
                    "positivity threshold at k=1",
                    positivity_threshold(&rows) == Some(1),
                );
            }
            Err(e) => return c.abort(name, &e),
        }
    } else {
        c.note("frozen-point comparisons skipped for non-canonical parameters");
    }
    c.finish(name)
}

fn suite_ellipticity(fs: &FlatStationary) -> SuiteResult {
    let name = "strip-ellipticity";
    let mut c = Checks::new();
    let (rho1, rho2) = flat_pair(16, fs);
    let op = match build_operator(&rho1, &rho2) {
        Ok(op) => op,
        Err(e) => return c.abort(name, &e),
    };
    let (lambda, capital) = ellipticity_bounds(&op);
    let d2 = fs.delta * fs.delta;
    let lambda_expected = 1.0 / (1.0 + d2);
    let capital_expected = (1.0_f64).max(1.0 / d2);
    c.bound(
        "lower ellipticity bound mismatch",
        lambda - lambda_expected,
        1e-12,
    );
    c.bound(
        "upper ellipticity bound mismatch",
        capital - capital_expected,
        1e-12,
    );
    c.claim("bounds ordered", lambda > 0.0 && lambda <= capital);
    c.finish(name)
}

fn suite_nutrient(fs: &FlatStationary) -> SuiteResult {
    let name = "strip-nutrient";
    let mut c = Checks::new();
    let (rho1, rho2) = flat_pair(8, fs);
    let n = 128;
    let sigma = match solve_nutrient(&rho1, &rho2, fs.params.sigma_bar, n) {
        Ok(s) => s,
        Err(e) => return c.abort(name, &e),
    };
    let mut sup = 0.0_f64;
    for l in 0..=n {
        let y = fs.rho1_star + fs.delta * l as f64 / n as f64;
        let exact = fs.sigma_star(y).unwrap();
        for j in 0..8 {
            sup = sup.max((sigma.get(j, l) - exact).abs());
        }
    }
    c.bound("flat-profile mismatch", sup, 1e-4);
    let (r16, s16) = flat_pair(16, fs);
    match (
        solve_nutrient(&r16, &s16, fs.params.sigma_bar, 32),
        solve_nutrient_generic(&r16, &s16, fs.params.sigma_bar, 32),
    ) {
        (Ok(fast), Ok(generic)) => {
            c.bound("route disagreement", fast.max_abs_diff(&generic), 1e-11);
        }
        (Err(e), _) | (_, Err(e)) => return c.abort(name, &e),
    }
    c.finish(name)
}

fn suite_pressure(fs: &FlatStationary) -> SuiteResult {
    let name = "strip-pressure";
    let mut c = Checks::new();
    let (rho1, rho2) = flat_pair(8, fs);
    let n = 128;
    let pressure = match solve_pressure_neumann(&rho1, &rho2, &fs.params, n) {
        Ok(p) => p,
        Err(e) => return c.abort(name, &e),
    };
    c.claim("origin pinned", pressure.get(0, 0) == 0.0);
    let offset = fs.p_star(fs.rho1_star).unwrap();
    let mut sup = 0.0_f64;
    for l in 0..=n {
        let y = fs.rho1_star + fs.delta * l as f64 / n as f64;
        let exact = fs.p_star(y).unwrap() - offset;
        for j in 0..8 {
            sup = sup.max((pressure.get(j, l) - exact).abs());
        }
    }
    c.bound("flat-profile mismatch", sup, 5e-4);
    let (r16, s16) = flat_pair(16, fs);
    match (
        solve_pressure_neumann(&r16, &s16, &fs.params, 32),
        solve_pressure_generic(&r16, &s16, &fs.params, 32),
    ) {
        (Ok(fast), Ok((generic, _))) => {
            c.bound("route disagreement", fast.max_abs_diff(&generic), 1e-11);
        }
        (Err(e), _) | (_, Err(e)) => return c.abort(name, &e),
    }
    c.finish(name)
}

fn suite_phi(fs: &FlatStationary) -> SuiteResult {
    let name = "solvability-functional";
    let mut c = Checks::new();
    let (rho1, rho2) = flat_pair(8, fs);
    let n = 128;
    match phi(&rho1, &rho2, &fs.params, n) {
        Ok(value) => c.bound("equilibrium functional", value, 1e-6),
        Err(e) => return c.abort(name, &e),
    }
    let d = fs.delta;
    let target = fs.params.sigma_bar * (1.0 - d.tanh() / d - d.tanh() * d.tanh());
    match phi_prime_up(&rho1, &rho2, &fs.params, n, 1e-4) {
        Ok(fd) => {
            c.bound("directional derivative mismatch", fd - target, 1e-3);
            c.claim("directional derivative nonzero", fd.abs() > 1e-3);
        }
        Err(e) => return c.abort(name, &e),
    }
    c.finish(name)
}

fn suite_bifurcation(fs: &FlatStationary) -> SuiteResult {
    let name = "stationarity-residuals";
    let mut c = Checks::new();
    let (rho1, rho2) = flat_pair(8, fs);
    let n = 1024;
    let (g1, g2) = match (gamma1(2, fs, 1.0), gamma2(2, fs, 1.0)) {
        (Ok(g1), Ok(g2)) => (g1, g2),
        (Err(e), _) | (_, Err(e)) => return c.abort(name, &e),
    };
    let c0 = match suggested_c0(&rho1, &rho2, g2, &fs.params, n) {
        Ok(v) => v,
        Err(e) => return c.abort(name, &e),
    };
    c.bound(
        "suggested constant vs necrosis constant",
        c0 + fs.c_value,
        1e-5,
    );
    match bifurcation_residual(&rho1, &rho2, g1, g2, c0, &fs.params, fs, n) {
        Ok(res) => {
            let sup1 = res.res1.iter().fold(0.0_f64, |acc, r| acc.max(r.abs()));
            let sup2 = res.res2.iter().fold(0.0_f64, |acc, r| acc.max(r.abs()));
            c.bound("inner residual", sup1, 1e-5);
            c.bound("outer residual", sup2, 1e-5);
            c.bound("reported functional", res.phi_value, 1e-6);
        }
        Err(e) => return c.abort(name, &e),
    }
    c.finish(name)
}

fn suite_evolution(fs: &FlatStationary) -> SuiteResult {
    let name = "linearized-evolution";
    let mut c = Checks::new();
    let (g1, g2) = match (gamma1(2, fs, 1.0), gamma2(2, fs, 1.0)) {
        (Ok(g1), Ok(g2)) => (g1, g2),
        (Err(e), _) | (_, Err(e)) => return c.abort(name, &e),
    };
    match growth_rate(2, fs, g1, g2, 8192) {
        Ok(rate) => c.bound("neutral eigenvalue", rate, 1e-5),
        Err(e) => return c.abort(name, &e),
    }
    let shifts = LinearState::new(vec![(0.5, 0.0)], vec![(0.5, 0.0)]).unwrap();
    match mode_velocity(&shifts, 0, fs, 1.0, 1.0, 256) {
        Ok(rate) => {
            c.claim(
                "equal shifts stationary",
                rate.rate_r.0 == 0.0 && rate.rate_s.0 == 0.0,
            );
        }
        Err(e) => return c.abort(name, &e),
    }
    let gammas: Vec<(f64, f64)> = (0..=3)
        .map(|k| {
            if k == 0 {
                (1.0, 1.0)
            } else {
                (gamma1(k, fs, 1.0).unwrap(), gamma2(k, fs, 1.0).unwrap())
            }
        })
        .collect();
    let mut joint = LinearState::zero(3);
    joint.r_coeffs[2] = (0.8, -0.1);
    joint.s_coeffs[2] = (0.3, 0.2);
    joint.r_coeffs[3] = (-0.4, 0.5);
    joint.s_coeffs[3] = (0.1, -0.6);
    let solo2 = LinearState::single_mode(3, 2, (0.8, -0.1), (0.3, 0.2)).unwrap();
    let solo3 = LinearState::single_mode(3, 3, (-0.4, 0.5), (0.1, -0.6)).unwrap();
    match (
        step(&joint, fs, &gammas, 64, 0.05),
        step(&solo2, fs, &gammas, 64, 0.05),
        step(&solo3, fs, &gammas, 64, 0.05),
    ) {
        (Ok(a), Ok(b), Ok(cc)) => {
            let mut worst = 0.0_f64;
            for k in 0..=3 {
                worst = worst
                    .max((a.r_coeffs[k].0 - b.r_coeffs[k].0 - cc.r_coeffs[k].0).abs())
                    .max((a.r_coeffs[k].1 - b.r_coeffs[k].1 - cc.r_coeffs[k].1).abs())
                    .max((a.s_coeffs[k].0 - b.s_coeffs[k].0 - cc.s_coeffs[k].0).abs())
                    .max((a.s_coeffs[k].1 - b.s_coeffs[k].1 - cc.s_coeffs[k].1).abs());
            }
            c.bound("superposition defect", worst, 1e-12);
        }
        (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return c.abort(name, &e),
    }
    c.finish(name)
}

fn suite_curvature() -> SuiteResult {
    let name = "interface-curvature";
    let mut c = Checks::new();
    let flat = BoundaryCurve::constant(16, 2.0).unwrap();
    let kappa_flat = flat.curvature();
    let worst = kappa_flat.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    c.bound("flat interface curvature", worst, 1e-12);
    let bump = BoundaryCurve::from_fn(64, |x| 2.0 + 0.1 * x.cos()).unwrap();
    let kappa = bump.curvature();
    c.bound("unit-mode crest curvature", kappa[0] - 0.1, 1e-10);
    c.claim(
        "crest positive, trough negative",
        kappa[0] > 0.0 && kappa[32] < 0.0,
    );
    c.finish(name)
}

impl VerifyReport {
    /// Runs every suite for the given parameters.
    pub fn run(params: &ModelParams, rho1_star: f64) -> crate::error::Result<VerifyReport> {
        let fs = flat_stationary(params, rho1_star)?;
        let canonical = is_canonical(params, rho1_star);
        let suites = vec![
            suite_flat_stationary(&fs),
            suite_closed_forms(&fs),
            suite_m0_dichotomy(&fs),
            suite_gamma(&fs, canonical),
            suite_curvature(),
            suite_ellipticity(&fs),
            suite_nutrient(&fs),
            suite_pressure(&fs),
            suite_phi(&fs),
            suite_bifurcation(&fs),
            suite_evolution(&fs),
        ];
        let passed = suites.iter().all(|s| s.passed);
        Ok(VerifyReport { suites, passed })
    }

    /// Plain-text rendering with one banner line per suite.
    pub fn render_text(&self) -> String {
        let width = self.suites.iter().map(|s| s.name.len()).max().unwrap_or(0);
        let mut out = String::new();
        for suite in &self.suites {
            out.push_str(&format!(
                "{:<width$}  {}\n",
                suite.name,
                if suite.passed { "PASS" } else { "FAIL" },
            ));
            for line in &suite.details {
                out.push_str("    ");
                out.push_str(line);
                out.push('\n');
            }
        }
        out.push_str(&format!(
            "overall: {}\n",
            if self.passed { "PASS" } else { "FAIL" }
        ));
        out
    }

    /// JSON rendering mirroring the text report.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }
}
