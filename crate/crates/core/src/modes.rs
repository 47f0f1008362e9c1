//! Closed-form Fourier-mode solutions of the linearized stationary
//! problem and the surface-tension coefficient curves.
//!
//! About a flat equilibrium, interface perturbations decompose into
//! Fourier modes `cos(kx)`, `sin(kx)`. For each wavenumber the linearized
//! nutrient and pressure corrections are one-dimensional profiles in the
//! scaled vertical coordinate `y' in [0,1]`: `A_k`, `B_k` for the
//! nutrient (cos/sin channels) and `M_k`, `N_k` for the pressure. Both
//! are available in closed form, and evaluating the pressure traces at
//! the interfaces yields, per mode, the surface-tension pair
//! `(gamma1(k), gamma2(k))` for which the perturbed problem admits a
//! nontrivial stationary solution.
//!
//! All hyperbolic ratios are evaluated in overflow-safe form so the
//! curves stay finite and accurate far beyond the naive `cosh` overflow
//! near `k ~ 380`.

use crate::bvp::{self, BoundaryCondition, OracleSolution, TwoPointBvp};
use crate::error::{Error, Result};
use crate::hyp::{cosh_over_cosh, cosh_over_sinh, inv_sinh, sech, sinh_over_cosh};
use crate::profile::Profile;
use crate::stationary::FlatStationary;
use serde::Serialize;

/// Relative slack for the cross-amplitude compatibility product
/// `a_k d_k = b_k c_k`; violations beyond it are rejected as invalid modes.
pub const COMPATIBILITY_TOL: f64 = 1e-12;

/// Fourier amplitudes of one interface-perturbation mode: `(a_k, b_k)`
/// are the cos/sin amplitudes of the lower interface, `(c_k, d_k)` of the
/// upper one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeCoefficients {
    pub k: usize,
    pub a_k: f64,
    pub b_k: f64,
    pub c_k: f64,
    pub d_k: f64,
}

impl ModeCoefficients {
    pub fn new(k: usize, a_k: f64, b_k: f64, c_k: f64, d_k: f64) -> Result<Self> {
        for (name, v) in [("a_k", a_k), ("b_k", b_k), ("c_k", c_k), ("d_k", d_k)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite, got {v}"),
                });
            }
        }
        if k == 0 && (b_k != 0.0 || d_k != 0.0) {
            return Err(Error::InvalidMode(
                "k = 0 has no sin channel; b_0 and d_0 must be zero".into(),
            ));
        }
        Ok(Self {
            k,
            a_k,
            b_k,
            c_k,
            d_k,
        })
    }

    /// Cosine-only mode `(b_k = d_k = 0)`.
    pub fn cos_only(k: usize, a_k: f64, c_k: f64) -> Result<Self> {
        Self::new(k, a_k, 0.0, c_k, 0.0)
    }

    /// Whether the cross-amplitude products satisfy `a_k d_k = b_k c_k`
    /// up to [`COMPATIBILITY_TOL`]. When they do, the cos and sin
    /// channels demand the same surface-tension pair.
    pub fn is_compatible(&self) -> bool {
        let ad = self.a_k * self.d_k;
        let bc = self.b_k * self.c_k;
        (ad - bc).abs() <= COMPATIBILITY_TOL * ad.abs().max(bc.abs()).max(1.0)
    }

    fn lower_nontrivial(&self) -> bool {
        self.a_k != 0.0 || self.b_k != 0.0
    }

    fn upper_nontrivial(&self) -> bool {
        self.c_k != 0.0 || self.d_k != 0.0
    }
}

fn require_positive_k(k: usize, what: &str) -> Result<()> {
    if k == 0 {
        return Err(Error::Misuse(format!("{what} requires k >= 1")));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Forcings
// ---------------------------------------------------------------------------

fn sigma_forcing_amps(fs: &FlatStationary, k: usize, lo: f64, hi: f64) -> Profile {
    let d = fs.delta;
    let sb = fs.params.sigma_bar;
    let k2 = (k * k) as f64;
    Profile::new(move |y: f64| {
        let sc = sinh_over_cosh(y * d, d);
        2.0 * sb * (hi - lo) / d * cosh_over_cosh(y * d, d)
            - k2 * sb * lo * sc
            - k2 * sb * (hi - lo) * y * sc
    })
}

fn pressure_forcing_amps(fs: &FlatStationary, k: usize, lo: f64, hi: f64) -> Profile {
    let d = fs.delta;
    let sb = fs.params.sigma_bar;
    let st = fs.params.sigma_tilde;
    let mu = fs.params.mu;
    let k2 = (k * k) as f64;
    Profile::new(move |y: f64| {
        let sc = sinh_over_cosh(y * d, d);
        2.0 * mu * st * (hi - lo) / d
            - mu * k2 * st * d * lo * y
            - mu * k2 * st * d * (hi - lo) * y * y
            + mu * k2 * sb * lo * sc
            - 2.0 * mu * sb * (hi - lo) / d * cosh_over_cosh(y * d, d)
            + mu * k2 * sb * (hi - lo) * y * sc
    })
}

/// Cos-channel forcing of the mode-`k` nutrient problem (amplitudes
/// `a_k`, `c_k`).
pub fn forcing_f(mode: &ModeCoefficients, fs: &FlatStationary) -> Profile {
    sigma_forcing_amps(fs, mode.k, mode.a_k, mode.c_k)
}

/// Sin-channel forcing of the mode-`k` nutrient problem; identical formula
/// with `(a, c)` replaced by `(b, d)`.
pub fn forcing_g(mode: &ModeCoefficients, fs: &FlatStationary) -> Profile {
    sigma_forcing_amps(fs, mode.k, mode.b_k, mode.d_k)
}

/// Cos-channel forcing of the mode-`k` pressure problem.
pub fn pressure_forcing_f(mode: &ModeCoefficients, fs: &FlatStationary) -> Profile {
    pressure_forcing_amps(fs, mode.k, mode.a_k, mode.c_k)
}

/// Sin-channel forcing of the mode-`k` pressure problem.
pub fn pressure_forcing_g(mode: &ModeCoefficients, fs: &FlatStationary) -> Profile {
    pressure_forcing_amps(fs, mode.k, mode.b_k, mode.d_k)
}

// ---------------------------------------------------------------------------
// Closed-form profiles
// ---------------------------------------------------------------------------

/// The mean-mode nutrient profile
/// `A_0(y') = (sigma_bar (c_0 - a_0)/cosh delta)[y' sinh(y' delta) - tanh delta cosh(y' delta)]`.
pub fn closed_a0(mode: &ModeCoefficients, fs: &FlatStationary) -> Result<Profile> {
    if mode.k != 0 {
        return Err(Error::Misuse("closed_a0 requires k = 0".into()));
    }
    let d = fs.delta;
    let pref = fs.params.sigma_bar * (mode.c_k - mode.a_k);
    let tanh_d = d.tanh();
    Ok(Profile::new(move |y: f64| {
        pref * (y * sinh_over_cosh(y * d, d) - tanh_d * cosh_over_cosh(y * d, d))
    }))
}

fn sigma_profile_amps(fs: &FlatStationary, k: usize, lo: f64, hi: f64) -> Profile {
    let d = fs.delta;
    let sb = fs.params.sigma_bar;
    let kk = k as f64;
    let rk = (1.0 + kk * kk).sqrt();
    let w = d * rk;
    let sech_d = sech(d);
    let tanh_d = d.tanh();
    Profile::new(move |y: f64| {
        sb * lo / rk * sech_d * sinh_over_cosh(w * (1.0 - y), w)
            - sb * hi * tanh_d * cosh_over_cosh(w * y, w)
            + sb * lo * sinh_over_cosh(y * d, d)
            + sb * (hi - lo) * y * sinh_over_cosh(y * d, d)
    })
}

fn pressure_profile_amps(fs: &FlatStationary, k: usize, lo: f64, hi: f64) -> Profile {
    let d = fs.delta;
    let sb = fs.params.sigma_bar;
    let st = fs.params.sigma_tilde;
    let mu = fs.params.mu;
    let kk = k as f64;
    let rk = (1.0 + kk * kk).sqrt();
    let w = d * rk;
    let dk = d * kk;
    let sech_d = sech(d);
    let tanh_d = d.tanh();
    // Coefficient of the cosh(y' delta k) kernel term, assembled from
    // bounded pieces so it stays finite for large k.
    let kmod =
        sb * d * lo * sech_d * sech(w) + sb * hi * d * rk * tanh_d * w.tanh() + sb * hi * tanh_d
            - d * sb * hi;
    Profile::new(move |y: f64| {
        mu * st * lo / kk * cosh_over_sinh(dk * (1.0 - y), dk)
            - mu / dk * cosh_over_sinh(y * dk, dk) * kmod
            - mu * sb * lo / rk * sech_d * sinh_over_cosh(w * (1.0 - y), w)
            + mu * sb * hi * tanh_d * cosh_over_cosh(y * w, w)
            - mu * sb * lo * sinh_over_cosh(d * y, d)
            - mu * sb * (hi - lo) * y * sinh_over_cosh(d * y, d)
            + mu * st * d * lo * y
            + mu * st * d * (hi - lo) * y * y
    })
}

/// Cos-channel nutrient profile `A_k` for `k >= 1`.
pub fn closed_ak(mode: &ModeCoefficients, fs: &FlatStationary) -> Result<Profile> {
    require_positive_k(mode.k, "closed_ak")?;
    Ok(sigma_profile_amps(fs, mode.k, mode.a_k, mode.c_k))
}

/// Sin-channel nutrient profile `B_k`: same code path as [`closed_ak`]
/// with `(a, c)` replaced by `(b, d)`.
pub fn closed_bk(mode: &ModeCoefficients, fs: &FlatStationary) -> Result<Profile> {
    require_positive_k(mode.k, "closed_bk")?;
    Ok(sigma_profile_amps(fs, mode.k, mode.b_k, mode.d_k))
}

/// Cos-channel pressure profile `M_k` for `k >= 1`.
pub fn closed_mk(mode: &ModeCoefficients, fs: &FlatStationary) -> Result<Profile> {
    require_positive_k(mode.k, "closed_mk")?;
    Ok(pressure_profile_amps(fs, mode.k, mode.a_k, mode.c_k))
}

/// Sin-channel pressure profile `N_k`: same code path as [`closed_mk`]
/// on the swapped amplitudes.
pub fn closed_nk(mode: &ModeCoefficients, fs: &FlatStationary) -> Result<Profile> {
    require_positive_k(mode.k, "closed_nk")?;
    Ok(pressure_profile_amps(fs, mode.k, mode.b_k, mode.d_k))
}

// ---------------------------------------------------------------------------
// The mean pressure mode
// ---------------------------------------------------------------------------

/// Solvability verdict for the mean (`k = 0`) pressure mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum M0Verdict {
    /// The five defining conditions are compatible and force `M_0 = 0`.
    SolvableZero,
    /// Incompatible conditions; no solution exists.
    Unsolvable,
}

/// Algebraic dichotomy for the mean pressure mode: solvable (with the
/// zero solution) exactly when the two mean interface amplitudes agree.
pub fn check_m0(mode: &ModeCoefficients) -> Result<M0Verdict> {
    if mode.k != 0 {
        return Err(Error::Misuse("check_m0 requires k = 0".into()));
    }
    if mode.c_k == mode.a_k {
        Ok(M0Verdict::SolvableZero)
    } else {
        Ok(M0Verdict::Unsolvable)
    }
}

/// Independent numerical route for the same dichotomy: assembles the mean
/// pressure problem as a pure-flux two-point BVP and hands it to the
/// finite-difference oracle, whose compatibility defect exposes the
/// obstruction. Compatible data returns the (zero) solution; incompatible
/// data surfaces the defect through the unsolvability error.
pub fn check_m0_numeric(
    mode: &ModeCoefficients,
    fs: &FlatStationary,
    n: usize,
) -> Result<OracleSolution> {
    if mode.k != 0 {
        return Err(Error::Misuse("check_m0_numeric requires k = 0".into()));
    }
    let a0 = closed_a0(mode, fs)?;
    let ftil = pressure_forcing_amps(fs, 0, mode.a_k, mode.c_k);
    let mu = fs.params.mu;
    let rhs = move |y: f64| ftil.eval(y) - mu * a0.eval(y);
    let delta = fs.delta;
    let bvp = TwoPointBvp::new(
        1.0 / (delta * delta),
        0.0,
        rhs,
        BoundaryCondition::Neumann(0.0),
        BoundaryCondition::Neumann(0.0),
    )?;
    bvp::solve(&bvp, n)
}

// ---------------------------------------------------------------------------
// Surface-tension coefficients
// ---------------------------------------------------------------------------

/// The lower surface-tension coefficient `gamma1(k)`; equals
/// `M_k(0)/(k^2 a_k)` and depends on the amplitudes only through the
/// ratio `c_k/a_k`.
pub fn gamma1(k: usize, fs: &FlatStationary, ratio_ck_ak: f64) -> Result<f64> {
    require_positive_k(k, "gamma1")?;
    if !ratio_ck_ak.is_finite() {
        return Err(Error::InvalidParameter {
            name: "ratio_ck_ak",
            reason: format!("must be finite, got {ratio_ck_ak}"),
        });
    }
    let d = fs.delta;
    let sb = fs.params.sigma_bar;
    let st = fs.params.sigma_tilde;
    let mu = fs.params.mu;
    let kk = k as f64;
    let rk = (1.0 + kk * kk).sqrt();
    let w = d * rk;
    let dk = d * kk;
    let p1 = d.tanh() / dk.tanh() - dk * w.tanh() * sech(d) / rk;
    let q = kk * sinh_over_cosh(dk, w) - rk * w.tanh();
    let inv_s = inv_sinh(dk);
    let p2 = ratio_ck_ak * d * ((1.0 - st / sb) * inv_s + d.tanh() * q * inv_s);
    let p3 = -d * sech(d) * sech(w) * inv_s;
    Ok(mu * sb / (d * kk.powi(3)) * (p1 + p2 + p3))
}

/// The bracket of `gamma2(k)` before the `mu sigma_bar/(delta k^3 tanh(delta k))`
/// prefactor; it tends to `delta - tanh(delta)` as `k` grows.
pub fn gamma2_bracket(k: usize, fs: &FlatStationary, ratio_ak_ck: f64) -> Result<f64> {
    require_positive_k(k, "gamma2_bracket")?;
    if !ratio_ak_ck.is_finite() {
        return Err(Error::InvalidParameter {
            name: "ratio_ak_ck",
            reason: format!("must be finite, got {ratio_ak_ck}"),
        });
    }
    let d = fs.delta;
    let kk = k as f64;
    let rk = (1.0 + kk * kk).sqrt();
    let w = d * rk;
    let dk = d * kk;
    let g1 = ratio_ak_ck * (d.tanh() * sech(dk) - d * sech(d) * sech(w));
    let g2 = d * d.tanh() * (kk * dk.tanh() - rk * w.tanh());
    let g3 = d - d.tanh();
    Ok(g1 + g2 + g3)
}

/// The upper surface-tension coefficient `gamma2(k)`; equals
/// `M_k(1)/(k^2 c_k)` and depends on the amplitudes only through `a_k/c_k`.
pub fn gamma2(k: usize, fs: &FlatStationary, ratio_ak_ck: f64) -> Result<f64> {
    let bracket = gamma2_bracket(k, fs, ratio_ak_ck)?;
    let d = fs.delta;
    let kk = k as f64;
    let dk = d * kk;
    Ok(fs.params.mu * fs.params.sigma_bar / (d * kk.powi(3) * dk.tanh()) * bracket)
}

/// The three groups of the `gamma1` bracket multiplied through by
/// `sinh(delta k)`, evaluated directly (valid up to `k ~ 300` before the
/// growing group overflows). As `k` grows they tend to `+infinity`,
/// `delta - (1 + delta^2/2) tanh(delta)`, and `0` respectively.
pub(crate) fn gamma1_groups(k: usize, fs: &FlatStationary, ratio_ck_ak: f64) -> (f64, f64, f64) {
    let d = fs.delta;
    let sb = fs.params.sigma_bar;
    let st = fs.params.sigma_tilde;
    let kk = k as f64;
    let rk = (1.0 + kk * kk).sqrt();
    let w = d * rk;
    let dk = d * kk;
    let l1 = dk.cosh() * d.tanh() - dk * w.tanh() * dk.sinh() / (rk * d.cosh());
    let l2 =
        ratio_ck_ak * d * (1.0 - st / sb + d.tanh() * (kk * dk.sinh() - rk * w.sinh()) / w.cosh());
    let l3 = -d / (d.cosh() * w.cosh());
    (l1, l2, l3)
}

/// One row of a gamma sweep.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GammaRow {
    pub k: usize,
    pub gamma1: f64,
    pub gamma2: f64,
}

/// Both coefficient curves for `k = 1..=k_max` at a fixed amplitude ratio
/// `c_k/a_k` (the reciprocal is used for `gamma2`).
pub fn gamma_sweep(fs: &FlatStationary, k_max: usize, ratio: f64) -> Result<Vec<GammaRow>> {
    if k_max < 1 {
        return Err(Error::Misuse("gamma_sweep requires k_max >= 1".into()));
    }
    if !(ratio.is_finite() && ratio != 0.0) {
        return Err(Error::InvalidParameter {
            name: "ratio",
            reason: format!("must be finite and nonzero, got {ratio}"),
        });
    }
    (1..=k_max)
        .map(|k| {
            Ok(GammaRow {
                k,
                gamma1: gamma1(k, fs, ratio)?,
                gamma2: gamma2(k, fs, 1.0 / ratio)?,
            })
        })
        .collect()
}

/// Smallest wavenumber in the table from which on both coefficients stay
/// strictly positive, or `None` if the final row is not positive.
pub fn positivity_threshold(rows: &[GammaRow]) -> Option<usize> {
    let mut threshold = None;
    for row in rows.iter().rev() {
        if row.gamma1 > 0.0 && row.gamma2 > 0.0 {
            threshold = Some(row.k);
        } else {
            break;
        }
    }
    threshold
}

// ---------------------------------------------------------------------------
// Mode assembly
// ---------------------------------------------------------------------------

/// A fully assembled stationary mode: nutrient profiles `a`/`b` and
/// pressure profiles `m`/`n` for the cos/sin channels, together with the
/// surface-tension pair that makes the interface matching conditions hold
/// (`m(0) = k^2 gamma1 a_k`, `m(1) = k^2 gamma2 c_k`, and likewise for
/// the sin channel).
#[derive(Debug)]
pub struct ModeSolution {
    pub k: usize,
    /// Cos-channel nutrient profile `A_k`.
    pub a: Profile,
    /// Sin-channel nutrient profile `B_k`.
    pub b: Profile,
    /// Cos-channel pressure profile `M_k`.
    pub m: Profile,
    /// Sin-channel pressure profile `N_k`.
    pub n: Profile,
    pub gamma1: f64,
    pub gamma2: f64,
}

/// Bundles the closed-form profiles of a nontrivial mode with its
/// surface-tension pair.
///
/// Requires `k >= 1`, a perturbation on both interfaces, and the
/// cross-amplitude compatibility `a_k d_k = b_k c_k`; without the latter
/// the cos and sin channels would demand different coefficient pairs.
pub fn assemble_mode(mode: &ModeCoefficients, fs: &FlatStationary) -> Result<ModeSolution> {
    require_positive_k(mode.k, "assemble_mode")?;
    if !mode.lower_nontrivial() || !mode.upper_nontrivial() {
        return Err(Error::InvalidMode(
            "assemble_mode requires a nontrivial perturbation on both interfaces".into(),
        ));
    }
    if !mode.is_compatible() {
        return Err(Error::InvalidMode(format!(
            "cross-amplitude products disagree: a_k d_k = {:e}, b_k c_k = {:e}",
            mode.a_k * mode.d_k,
            mode.b_k * mode.c_k
        )));
    }
    let g1 = if mode.a_k != 0.0 {
        gamma1(mode.k, fs, mode.c_k / mode.a_k)?
    } else {
        gamma1(mode.k, fs, mode.d_k / mode.b_k)?
    };
    let g2 = if mode.c_k != 0.0 {
        gamma2(mode.k, fs, mode.a_k / mode.c_k)?
    } else {
        gamma2(mode.k, fs, mode.b_k / mode.d_k)?
    };
    Ok(ModeSolution {
        k: mode.k,
        a: closed_ak(mode, fs)?,
        b: closed_bk(mode, fs)?,
        m: closed_mk(mode, fs)?,
        n: closed_nk(mode, fs)?,
        gamma1: g1,
        gamma2: g2,
    })
}
