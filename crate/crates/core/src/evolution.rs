//! Linearized interface evolution.
//!
//! The linearization about the flat stationary configuration is a
//! differential-algebraic system: per Fourier mode, two quasi-static
//! vertical solves (nutrient perturbation, then pressure perturbation with
//! curvature-Dirichlet ends) produce the time derivatives of the interface
//! amplitudes through the conormal pressure gradient at the two interfaces.
//! Modes decouple exactly, so the integrator advances each mode with an
//! independent classical Runge–Kutta step.

use crate::bvp::{self, BoundaryCondition, TwoPointBvp};
use crate::error::{Error, Result};
use crate::modes::{
    forcing_f, forcing_g, pressure_forcing_f, pressure_forcing_g, ModeCoefficients,
};
use crate::profile::Profile;
use crate::stationary::FlatStationary;

/// Truncated Fourier description of the two interface perturbations.
///
/// Entry `k` of `r_coeffs` holds the cosine and sine amplitudes of the
/// inner interface at wavenumber `k`; `s_coeffs` likewise for the outer
/// interface. The `k = 0` channel carries no sine component.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearState {
    /// Fourier truncation: coefficient vectors run over `k = 0..=k_max`.
    pub k_max: usize,
    pub r_coeffs: Vec<(f64, f64)>,
    pub s_coeffs: Vec<(f64, f64)>,
    pub time: f64,
}

impl LinearState {
    /// Validates and wraps coefficient vectors; time starts at zero.
    pub fn new(r_coeffs: Vec<(f64, f64)>, s_coeffs: Vec<(f64, f64)>) -> Result<Self> {
        if r_coeffs.is_empty() || r_coeffs.len() != s_coeffs.len() {
            return Err(Error::Misuse(format!(
                "amplitude vectors must be nonempty and of equal length, got {} and {}",
                r_coeffs.len(),
                s_coeffs.len()
            )));
        }
        for (k, ((a, b), (c, d))) in r_coeffs.iter().zip(&s_coeffs).enumerate() {
            for v in [a, b, c, d] {
                if !v.is_finite() {
                    return Err(Error::InvalidParameter {
                        name: "coefficients",
                        reason: format!("non-finite amplitude at mode {k}"),
                    });
                }
            }
            if k == 0 && (*b != 0.0 || *d != 0.0) {
                return Err(Error::InvalidParameter {
                    name: "coefficients",
                    reason: "the k = 0 channel has no sine component".into(),
                });
            }
        }
        Ok(Self {
            k_max: r_coeffs.len() - 1,
            r_coeffs,
            s_coeffs,
            time: 0.0,
        })
    }

    /// State with all amplitudes zero.
    pub fn zero(k_max: usize) -> Self {
        Self {
            k_max,
            r_coeffs: vec![(0.0, 0.0); k_max + 1],
            s_coeffs: vec![(0.0, 0.0); k_max + 1],
            time: 0.0,
        }
    }

    /// State carrying a single excited mode.
    pub fn single_mode(k_max: usize, k: usize, r: (f64, f64), s: (f64, f64)) -> Result<Self> {
        if k > k_max {
            return Err(Error::Misuse(format!(
                "mode {k} exceeds truncation {k_max}"
            )));
        }
        let mut r_coeffs = vec![(0.0, 0.0); k_max + 1];
        let mut s_coeffs = vec![(0.0, 0.0); k_max + 1];
        r_coeffs[k] = r;
        s_coeffs[k] = s;
        Self::new(r_coeffs, s_coeffs)
    }
}

/// Instantaneous amplitude derivatives of one mode.
#[derive(Debug, Clone, Copy)]
pub struct ModeRate {
    pub k: usize,
    /// Time derivatives of the inner (cosine, sine) amplitudes.
    pub rate_r: (f64, f64),
    /// Time derivatives of the outer (cosine, sine) amplitudes.
    pub rate_s: (f64, f64),
}

fn validate_tension(name: &'static str, value: f64) -> Result<()> {
    if !(value.is_finite() && value >= 0.0) {
        return Err(Error::InvalidParameter {
            name,
            reason: format!("surface tension must be finite and nonnegative, got {value}"),
        });
    }
    Ok(())
}

/// Quasi-static solves for one trigonometric channel of mode `k`.
///
/// `lo`, `hi` are the channel amplitudes on the inner and outer interface;
/// the pressure ends carry the curvature data `k² γ1 lo` and `k² γ2 hi`,
/// and the returned pair is `−(1/δ) P_y` evaluated one-sidedly at the two
/// interfaces. A channel with both amplitudes zero yields exact zeros.
#[allow(clippy::too_many_arguments)]
fn single_channel(
    fs: &FlatStationary,
    k: usize,
    lo: f64,
    hi: f64,
    forcing: Profile,
    pressure_forcing: Profile,
    gamma1: f64,
    gamma2: f64,
    n: usize,
) -> Result<(f64, f64)> {
    if lo == 0.0 && hi == 0.0 {
        return Ok((0.0, 0.0));
    }
    let delta = fs.delta;
    let dif = 1.0 / (delta * delta);
    let kk = (k * k) as f64;
    let sigma_problem = TwoPointBvp::new(
        dif,
        -(1.0 + kk),
        Box::new(move |y| forcing.eval(y)),
        BoundaryCondition::Neumann(0.0),
        BoundaryCondition::Dirichlet(0.0),
    )?;
    let sigma = bvp::solve(&sigma_problem, n)?;
    let mu = fs.params.mu;
    let rhs: Vec<f64> = sigma
        .grid
        .iter()
        .zip(&sigma.values)
        .map(|(y, s)| pressure_forcing.eval(*y) - mu * s)
        .collect();
    let pressure_problem = TwoPointBvp::new(
        dif,
        -kk,
        Box::new(bvp::sampled_rhs(rhs)),
        BoundaryCondition::Dirichlet(kk * gamma1 * lo),
        BoundaryCondition::Dirichlet(kk * gamma2 * hi),
    )?;
    let p = bvp::solve(&pressure_problem, n)?;
    let h = 1.0 / n as f64;
    let v = &p.values;
    let left = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    let right = (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * h);
    Ok((-left / delta, -right / delta))
}

fn mode_rates_from_amplitudes(
    fs: &FlatStationary,
    k: usize,
    amps: [f64; 4],
    gamma1: f64,
    gamma2: f64,
    n: usize,
) -> Result<[f64; 4]> {
    let [a, b, c, d] = amps;
    let mode = ModeCoefficients::new(k, a, b, c, d)?;
    let cosine = single_channel(
        fs,
        k,
        a,
        c,
        forcing_f(&mode, fs),
        pressure_forcing_f(&mode, fs),
        gamma1,
        gamma2,
        n,
    )?;
    let sine = single_channel(
        fs,
        k,
        b,
        d,
        forcing_g(&mode, fs),
        pressure_forcing_g(&mode, fs),
        gamma1,
        gamma2,
        n,
    )?;
    Ok([cosine.0, sine.0, cosine.1, sine.1])
}

/// Instantaneous rates of mode `k` of a state under tensions
/// `(gamma1, gamma2)`.
pub fn mode_velocity(
    state: &LinearState,
    k: usize,
    fs: &FlatStationary,
    gamma1: f64,
    gamma2: f64,
    n: usize,
) -> Result<ModeRate> {
    validate_tension("gamma1", gamma1)?;
    validate_tension("gamma2", gamma2)?;
    if k > state.k_max {
        return Err(Error::Misuse(format!(
            "mode {k} exceeds the state truncation {}",
            state.k_max
        )));
    }
    let amps = [
        state.r_coeffs[k].0,
        state.r_coeffs[k].1,
        state.s_coeffs[k].0,
        state.s_coeffs[k].1,
    ];
    let rates = mode_rates_from_amplitudes(fs, k, amps, gamma1, gamma2, n)?;
    Ok(ModeRate {
        k,
        rate_r: (rates[0], rates[1]),
        rate_s: (rates[2], rates[3]),
    })
}

/// Advances every mode by one classical Runge–Kutta step of size `dt`.
///
/// `gammas[k]` supplies the tension pair applied to mode `k`; passing the
/// closed-form pair per mode freezes that mode in place.
pub fn step(
    state: &LinearState,
    fs: &FlatStationary,
    gammas: &[(f64, f64)],
    n: usize,
    dt: f64,
) -> Result<LinearState> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParameter {
            name: "dt",
            reason: format!("step size must be positive, got {dt}"),
        });
    }
    if gammas.len() != state.k_max + 1 {
        return Err(Error::Misuse(format!(
            "need one tension pair per mode: got {} for truncation {}",
            gammas.len(),
            state.k_max
        )));
    }
    let mut r_coeffs = Vec::with_capacity(state.k_max + 1);
    let mut s_coeffs = Vec::with_capacity(state.k_max + 1);
    for (k, &(g1, g2)) in gammas.iter().enumerate() {
        validate_tension("gamma1", g1)?;
        validate_tension("gamma2", g2)?;
        let y0 = [
            state.r_coeffs[k].0,
            state.r_coeffs[k].1,
            state.s_coeffs[k].0,
            state.s_coeffs[k].1,
        ];
        let eval = |y: [f64; 4]| mode_rates_from_amplitudes(fs, k, y, g1, g2, n);
        let shift = |y: [f64; 4], r: [f64; 4], factor: f64| {
            [
                y[0] + factor * r[0],
                y[1] + factor * r[1],
                y[2] + factor * r[2],
                y[3] + factor * r[3],
            ]
        };
        let k1 = eval(y0)?;
        let k2 = eval(shift(y0, k1, 0.5 * dt))?;
        let k3 = eval(shift(y0, k2, 0.5 * dt))?;
        let k4 = eval(shift(y0, k3, dt))?;
        let mut y1 = [0.0_f64; 4];
        for i in 0..4 {
            y1[i] = y0[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        r_coeffs.push((y1[0], y1[1]));
        s_coeffs.push((y1[2], y1[3]));
    }
    Ok(LinearState {
        k_max: state.k_max,
        r_coeffs,
        s_coeffs,
        time: state.time + dt,
    })
}

/// Largest real part of the eigenvalues of the 2×2 map taking the cosine
/// amplitude pair `(a_k, c_k)` to its rates, assembled by unit probes.
pub fn growth_rate(
    k: usize,
    fs: &FlatStationary,
    gamma1: f64,
    gamma2: f64,
    n: usize,
) -> Result<f64> {
    if k == 0 {
        return Err(Error::Misuse(
            "growth_rate probes the coupled cosine pair and needs k >= 1".into(),
        ));
    }
    validate_tension("gamma1", gamma1)?;
    validate_tension("gamma2", gamma2)?;
    let probe = |a: f64, c: f64| -> Result<(f64, f64)> {
        let rates = mode_rates_from_amplitudes(fs, k, [a, 0.0, c, 0.0], gamma1, gamma2, n)?;
        Ok((rates[0], rates[2]))
    };
    let (m11, m21) = probe(1.0, 0.0)?;
    let (m12, m22) = probe(0.0, 1.0)?;
    let trace = m11 + m22;
    let det = m11 * m22 - m12 * m21;
    let disc = trace * trace - 4.0 * det;
    if disc >= 0.0 {
        Ok(0.5 * (trace + disc.sqrt()))
    } else {
        Ok(0.5 * trace)
    }
}

/// The 2×2 cosine-pair rate matrix `[[∂ȧ/∂a, ∂ȧ/∂c], [∂ċ/∂a, ∂ċ/∂c]]`.
pub fn rate_matrix(
    k: usize,
    fs: &FlatStationary,
    gamma1: f64,
    gamma2: f64,
    n: usize,
) -> Result<[[f64; 2]; 2]> {
    if k == 0 {
        return Err(Error::Misuse(
            "rate_matrix probes the coupled cosine pair and needs k >= 1".into(),
        ));
    }
    validate_tension("gamma1", gamma1)?;
    validate_tension("gamma2", gamma2)?;
    let first = mode_rates_from_amplitudes(fs, k, [1.0, 0.0, 0.0, 0.0], gamma1, gamma2, n)?;
    let second = mode_rates_from_amplitudes(fs, k, [0.0, 0.0, 1.0, 0.0], gamma1, gamma2, n)?;
    Ok([[first[0], second[0]], [first[2], second[2]]])
}
