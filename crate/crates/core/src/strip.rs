//! Elliptic solvers on the reference strip.
//!
//! The annular region between two periodic interface graphs is pulled back
//! to the fixed strip `S¹ × [0, 1]`. This module tabulates the transformed
//! operator's coefficient fields, reports its ellipticity bounds, and solves
//! the nutrient and pressure problems with second-order finite differences
//! (spectral differentiation supplies the curve derivatives entering the
//! coefficients). It also evaluates the solvability functional Φ, its
//! directional derivative under a rigid raise of the outer interface, the
//! stationarity residuals of the two Laplace–Young conditions, and a
//! diagnostic comparing the linearized operator against its closed-form
//! forcing.
//!
//! When both curves are horizontal the transformed problems lose their
//! x-dependence and are routed through the one-dimensional solver in
//! [`crate::bvp`]; the generic two-dimensional path stays available
//! internally so the two routes can be checked against each other.

use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use ndarray::Array2;

use crate::bvp::{self, BoundaryCondition, TwoPointBvp};
use crate::curve::BoundaryCurve;
use crate::error::{Error, Result};
use crate::grid::GridFunction2D;
use crate::modes::{forcing_f, forcing_g, ModeCoefficients};
use crate::params::ModelParams;
use crate::stationary::FlatStationary;

/// Default bound accepted for |Φ| by the pure-flux pressure solve.
///
/// Φ is normalized by the angular period, so this equals one part in 10⁴
/// of the reference-strip area for the unnormalized functional.
pub const DEFAULT_COMPATIBILITY_THRESHOLD: f64 = 1e-4;

/// Smallest vertical grid accepted by the two-dimensional solvers.
pub const MIN_GRID_2D: usize = 16;

/// Largest vertical grid accepted by the two-dimensional solvers.
pub const MAX_GRID_2D: usize = 16384;

/// Smallest grid accepted by [`phi`], which also solves on `n / 2`.
pub const MIN_PHI_GRID: usize = 32;

fn validate_grid(n: usize) -> Result<()> {
    if !(MIN_GRID_2D..=MAX_GRID_2D).contains(&n) {
        return Err(Error::Misuse(format!(
            "vertical grid size n={n} outside [{MIN_GRID_2D}, {MAX_GRID_2D}]"
        )));
    }
    Ok(())
}

/// Validated curve pair together with the spectral derivatives feeding the
/// transformed-operator coefficients.
struct Geometry {
    m: usize,
    /// Pointwise gap `rho2 - rho1`, positive everywhere.
    w: Vec<f64>,
    d1_lo: Vec<f64>,
    d1_hi: Vec<f64>,
    d2_lo: Vec<f64>,
    d2_hi: Vec<f64>,
    /// Both curves are exactly horizontal, enabling the 1D reduction.
    flat: bool,
}

fn prepare(rho1: &BoundaryCurve, rho2: &BoundaryCurve) -> Result<Geometry> {
    if rho1.len() != rho2.len() {
        return Err(Error::InvalidParameter {
            name: "rho2",
            reason: format!(
                "sample counts differ: rho1 has {}, rho2 has {}",
                rho1.len(),
                rho2.len()
            ),
        });
    }
    let m = rho1.len();
    let mut w = Vec::with_capacity(m);
    for j in 0..m {
        let wj = rho2.samples()[j] - rho1.samples()[j];
        if wj.is_nan() || wj <= 0.0 {
            return Err(Error::Domain(format!(
                "interfaces touch or cross at sample {j}: rho1={} rho2={}",
                rho1.samples()[j],
                rho2.samples()[j]
            )));
        }
        w.push(wj);
    }
    let flat = rho1.max() == rho1.min() && rho2.max() == rho2.min();
    Ok(Geometry {
        m,
        w,
        d1_lo: rho1.derivative(),
        d1_hi: rho2.derivative(),
        d2_lo: rho1.second_derivative(),
        d2_hi: rho2.second_derivative(),
        flat,
    })
}

impl Geometry {
    /// Coefficients `(a12, a22, b)` of the transformed operator at angular
    /// index `j` and strip height `y`; `a11` is identically one.
    fn coeff(&self, j: usize, y: f64) -> (f64, f64, f64) {
        let dr = self.d1_hi[j] - self.d1_lo[j];
        let e = y * dr + self.d1_lo[j];
        let w = self.w[j];
        let a12 = -e / w;
        let a22 = (1.0 + e * e) / (w * w);
        let b = 2.0 * dr * e / (w * w) - (y * (self.d2_hi[j] - self.d2_lo[j]) + self.d2_lo[j]) / w;
        (a12, a22, b)
    }

    /// Slope factor turning the lower flux condition into `u_y = wc · u_x`.
    fn wc(&self, j: usize) -> f64 {
        self.d1_lo[j] * self.w[j] / (self.d1_lo[j] * self.d1_lo[j] + 1.0)
    }

    /// Slope factor turning the upper flux condition into `u_y = vc · u_x`.
    fn vc(&self, j: usize) -> f64 {
        self.d1_hi[j] * self.w[j] / (self.d1_hi[j] * self.d1_hi[j] + 1.0)
    }
}

/// Coefficient fields of the transformed interior operator together with
/// the boundary-operator coefficient rows.
///
/// The interior operator reads
/// `u_xx + 2 a12 u_xy + a22 u_yy + b u_y`
/// and the boundary operators are
/// `b1_x u_x + b1_y u_y` at `y = 0` and `b2_x u_x + b2_y u_y` at `y = 1`.
/// Fields are tabulated on a square `m × (m + 1)` grid; the extreme values
/// entering [`ellipticity_bounds`] are attained on the boundary rows, which
/// every vertical resolution contains, so the bounds do not depend on the
/// tabulation density.
#[derive(Debug)]
pub struct StripOperator {
    pub a11: GridFunction2D,
    pub a12: GridFunction2D,
    pub a22: GridFunction2D,
    pub b: GridFunction2D,
    pub b1_x: Vec<f64>,
    pub b1_y: Vec<f64>,
    pub b2_x: Vec<f64>,
    pub b2_y: Vec<f64>,
}

/// Tabulates the transformed-operator coefficients for a valid curve pair.
pub fn build_operator(rho1: &BoundaryCurve, rho2: &BoundaryCurve) -> Result<StripOperator> {
    let geo = prepare(rho1, rho2)?;
    let m = geo.m;
    let n = m;
    let mut a11 = Array2::zeros((m, n + 1));
    let mut a12 = Array2::zeros((m, n + 1));
    let mut a22 = Array2::zeros((m, n + 1));
    let mut b = Array2::zeros((m, n + 1));
    for j in 0..m {
        for l in 0..=n {
            let y = l as f64 / n as f64;
            let (c12, c22, cb) = geo.coeff(j, y);
            a11[[j, l]] = 1.0;
            a12[[j, l]] = c12;
            a22[[j, l]] = c22;
            b[[j, l]] = cb;
        }
    }
    let mut b1_x = Vec::with_capacity(m);
    let mut b1_y = Vec::with_capacity(m);
    let mut b2_x = Vec::with_capacity(m);
    let mut b2_y = Vec::with_capacity(m);
    for j in 0..m {
        b1_x.push(geo.d1_lo[j]);
        b1_y.push(-(geo.d1_lo[j] * geo.d1_lo[j] + 1.0) / geo.w[j]);
        b2_x.push(-geo.d1_hi[j]);
        b2_y.push((geo.d1_hi[j] * geo.d1_hi[j] + 1.0) / geo.w[j]);
    }
    Ok(StripOperator {
        a11: GridFunction2D::new(a11),
        a12: GridFunction2D::new(a12),
        a22: GridFunction2D::new(a22),
        b: GridFunction2D::new(b),
        b1_x,
        b1_y,
        b2_x,
        b2_y,
    })
}

/// Uniform ellipticity bounds `(lambda, Lambda)` of the tabulated operator.
///
/// `Lambda` is the grid maximum of the largest eigenvalue of the symbol
/// matrix `[[1, a12], [a12, a22]]`; `lambda` is the grid minimum of the
/// reciprocal squared Frobenius norm of its inverse, a guaranteed lower
/// bound on the smallest eigenvalue.
pub fn ellipticity_bounds(op: &StripOperator) -> (f64, f64) {
    let m = op.a12.m();
    let n = op.a12.n();
    let mut lambda = f64::INFINITY;
    let mut capital = f64::NEG_INFINITY;
    for j in 0..m {
        for l in 0..=n {
            let c12 = op.a12.get(j, l);
            let c22 = op.a22.get(j, l);
            let det = c22 - c12 * c12;
            debug_assert!(det > 0.0, "ellipticity lost at grid node ({j}, {l})");
            // The inverse symbol has squared Frobenius norm
            // (1 + E^2 + w^2) with E = -a12 w and w^2 = 1/det.
            let w2 = 1.0 / det;
            let frob = 1.0 + (c12 * c12 + 1.0) * w2;
            lambda = lambda.min(1.0 / frob);
            let t = 1.0 + c22;
            let disc = (t * t - 4.0 * det).max(0.0);
            capital = capital.max(0.5 * (t + disc.sqrt()));
        }
    }
    (lambda, capital)
}

/// Top boundary closure of the vertical sweep.
enum TopRow {
    /// Fixed value at `y = 1` (nutrient).
    Dirichlet(f64),
    /// Conormal flux condition at `y = 1` (pressure).
    Flux,
}

struct LevelSystem {
    lower: DMatrix<f64>,
    diag: DMatrix<f64>,
    upper: DMatrix<f64>,
    rhs: DVector<f64>,
}

/// Assembles one horizontal level of the finite-difference system.
///
/// Ghost nodes introduced by the flux conditions are eliminated through
/// the boundary relations `u_y = wc · u_x` (bottom) and `u_y = vc · u_x`
/// (top); the cross-derivative contribution differentiates the slope
/// factor along the boundary, which couples second angular neighbours.
fn assemble_level(
    geo: &Geometry,
    n: usize,
    l: usize,
    shift: f64,
    top: &TopRow,
    rhs_at: &dyn Fn(usize) -> f64,
    pinned: bool,
) -> LevelSystem {
    let m = geo.m;
    let dx = TAU / m as f64;
    let dy = 1.0 / n as f64;
    let cx = 1.0 / (dx * dx);
    let gx = 1.0 / (2.0 * dx);
    let mut lower = DMatrix::<f64>::zeros(m, m);
    let mut diag = DMatrix::<f64>::zeros(m, m);
    let mut upper = DMatrix::<f64>::zeros(m, m);
    let mut rhs = DVector::<f64>::zeros(m);

    if l == n {
        if let TopRow::Dirichlet(v) = top {
            for j in 0..m {
                diag[(j, j)] = 1.0;
                rhs[j] = *v;
            }
            return LevelSystem {
                lower,
                diag,
                upper,
                rhs,
            };
        }
    }

    for j in 0..m {
        let jp = (j + 1) % m;
        let jm = (j + m - 1) % m;
        if l == 0 || l == n {
            let (y, slope_here, slope_p, slope_m, sign) = if l == 0 {
                (0.0, geo.wc(j), geo.wc(jp), geo.wc(jm), -1.0)
            } else {
                (1.0, geo.vc(j), geo.vc(jp), geo.vc(jm), 1.0)
            };
            let (c12, c22, cb) = geo.coeff(j, y);
            let jpp = (j + 2) % m;
            let jmm = (j + m - 2) % m;
            diag[(j, jm)] += cx;
            diag[(j, jp)] += cx;
            diag[(j, j)] += -2.0 * cx + shift;
            diag[(j, j)] += -2.0 * c22 / (dy * dy);
            if l == 0 {
                upper[(j, j)] += 2.0 * c22 / (dy * dy);
            } else {
                lower[(j, j)] += 2.0 * c22 / (dy * dy);
            }
            // Vertical-difference remainder of a22 u_yy after ghost
            // elimination: sign picks the conormal direction.
            let t1 = sign * c22 * 2.0 * slope_here / dy * gx;
            diag[(j, jp)] += t1;
            diag[(j, jm)] -= t1;
            // 2 a12 u_xy with u_y replaced along the boundary.
            let t2 = 2.0 * c12 * gx;
            let cp = t2 * slope_p * gx;
            diag[(j, jpp)] += cp;
            diag[(j, j)] -= cp;
            let cm = t2 * slope_m * gx;
            diag[(j, j)] -= cm;
            diag[(j, jmm)] += cm;
            // b u_y along the boundary.
            let t3 = cb * slope_here * gx;
            diag[(j, jp)] += t3;
            diag[(j, jm)] -= t3;
            rhs[j] = rhs_at(j);
        } else {
            let y = l as f64 * dy;
            let (c12, c22, cb) = geo.coeff(j, y);
            let cy = c22 / (dy * dy);
            let cross = c12 / (2.0 * dx * dy);
            let cb2 = cb / (2.0 * dy);
            diag[(j, jm)] += cx;
            diag[(j, jp)] += cx;
            diag[(j, j)] += -2.0 * cx - 2.0 * cy + shift;
            upper[(j, j)] += cy + cb2;
            upper[(j, jp)] += cross;
            upper[(j, jm)] += -cross;
            lower[(j, j)] += cy - cb2;
            lower[(j, jp)] += -cross;
            lower[(j, jm)] += cross;
            rhs[j] = rhs_at(j);
        }
    }

    if pinned && l == 0 {
        for col in 0..m {
            diag[(0, col)] = 0.0;
            upper[(0, col)] = 0.0;
        }
        diag[(0, 0)] = 1.0;
        rhs[0] = 0.0;
    }

    LevelSystem {
        lower,
        diag,
        upper,
        rhs,
    }
}

/// Block-tridiagonal elimination over horizontal levels.
fn block_solve(
    geo: &Geometry,
    n: usize,
    shift: f64,
    top: &TopRow,
    rhs_levels: &dyn Fn(usize, usize) -> f64,
    pinned: bool,
) -> Result<Vec<DVector<f64>>> {
    let mut cs: Vec<DMatrix<f64>> = Vec::with_capacity(n);
    let mut ds: Vec<DVector<f64>> = Vec::with_capacity(n + 1);
    for l in 0..=n {
        let rhs_row = |j: usize| rhs_levels(j, l);
        let sys = assemble_level(geo, n, l, shift, top, &rhs_row, pinned);
        let (stilde, btilde) = if l == 0 {
            (sys.diag, sys.rhs)
        } else {
            let correction = &sys.lower * &cs[l - 1];
            let btilde = &sys.rhs - &sys.lower * &ds[l - 1];
            (sys.diag - correction, btilde)
        };
        let lu = stilde.lu();
        if l < n {
            let c = lu
                .solve(&sys.upper)
                .ok_or_else(|| Error::SolveBreakdown(format!("singular level block at l={l}")))?;
            cs.push(c);
        }
        let d = lu
            .solve(&btilde)
            .ok_or_else(|| Error::SolveBreakdown(format!("singular level block at l={l}")))?;
        ds.push(d);
    }
    for l in (0..n).rev() {
        let correction = &cs[l] * &ds[l + 1];
        ds[l] -= correction;
    }
    for (l, level) in ds.iter().enumerate() {
        if level.iter().any(|v| !v.is_finite()) {
            return Err(Error::SolveBreakdown(format!(
                "non-finite entries in solved level l={l}"
            )));
        }
    }
    Ok(ds)
}

fn levels_to_grid(m: usize, n: usize, levels: &[DVector<f64>]) -> GridFunction2D {
    let mut values = Array2::zeros((m, n + 1));
    for (l, level) in levels.iter().enumerate() {
        for j in 0..m {
            values[[j, l]] = level[j];
        }
    }
    GridFunction2D::new(values)
}

fn nutrient_fast(geo: &Geometry, sigma_bar: f64, n: usize) -> Result<GridFunction2D> {
    let w = geo.w[0];
    let problem = TwoPointBvp::new(
        1.0 / (w * w),
        -1.0,
        Box::new(|_| 0.0),
        BoundaryCondition::Neumann(0.0),
        BoundaryCondition::Dirichlet(sigma_bar),
    )?;
    let solution = bvp::solve(&problem, n)?;
    Ok(GridFunction2D::broadcast_column(geo.m, &solution.values))
}

fn nutrient_generic_inner(geo: &Geometry, sigma_bar: f64, n: usize) -> Result<GridFunction2D> {
    let levels = block_solve(
        geo,
        n,
        -1.0,
        &TopRow::Dirichlet(sigma_bar),
        &|_, _| 0.0,
        false,
    )?;
    Ok(levels_to_grid(geo.m, n, &levels))
}

fn validate_sigma_bar(sigma_bar: f64) -> Result<()> {
    if !(sigma_bar.is_finite() && sigma_bar > 0.0) {
        return Err(Error::InvalidParameter {
            name: "sigma_bar",
            reason: format!("must be positive and finite, got {sigma_bar}"),
        });
    }
    Ok(())
}

/// Solves the nutrient problem on the strip: interior equation
/// `𝒜σ = σ`, zero conormal flux at `y = 0`, value `sigma_bar` at `y = 1`.
pub fn solve_nutrient(
    rho1: &BoundaryCurve,
    rho2: &BoundaryCurve,
    sigma_bar: f64,
    n: usize,
) -> Result<GridFunction2D> {
    validate_sigma_bar(sigma_bar)?;
    validate_grid(n)?;
    let geo = prepare(rho1, rho2)?;
    if geo.flat {
        nutrient_fast(&geo, sigma_bar, n)
    } else {
        nutrient_generic_inner(&geo, sigma_bar, n)
    }
}

/// Generic-path nutrient solve, bypassing the horizontal-pair reduction;
/// used to cross-check the two routes on flat pairs.
pub(crate) fn solve_nutrient_generic(
    rho1: &BoundaryCurve,
    rho2: &BoundaryCurve,
    sigma_bar: f64,
    n: usize,
) -> Result<GridFunction2D> {
    validate_sigma_bar(sigma_bar)?;
    validate_grid(n)?;
    let geo = prepare(rho1, rho2)?;
    nutrient_generic_inner(&geo, sigma_bar, n)
}

fn phi_single(
    rho1: &BoundaryCurve,
    rho2: &BoundaryCurve,
    params: &ModelParams,
    n: usize,
    force_generic: bool,
) -> Result<f64> {
    let geo = prepare(rho1, rho2)?;
    let sigma = if geo.flat && !force_generic {
        nutrient_fast(&geo, params.sigma_bar, n)?
    } else {
        nutrient_generic_inner(&geo, params.sigma_bar, n)?
    };
    let m = geo.m;
    let mut total = 0.0;
    for j in 0..m {
        let mut column = 0.0;
        for l in 0..=n {
            let tw = if l == 0 || l == n { 0.5 } else { 1.0 };
            column += tw * (sigma.get(j, l) - params.sigma_tilde);
        }
        total += column * geo.w[j] / n as f64;
    }
    Ok(total / m as f64)
}

fn phi_impl(
    rho1: &BoundaryCurve,
    rho2: &BoundaryCurve,
    params: &ModelParams,
    n: usize,
    force_generic: bool,
) -> Result<f64> {
    if n < MIN_PHI_GRID || !n.is_multiple_of(2) {
        return Err(Error::Misuse(format!(
            "phi requires an even grid size n >= {MIN_PHI_GRID}, got {n}"
        )));
    }
    validate_grid(n)?;
    let coarse = phi_single(rho1, rho2, params, n / 2, force_generic)?;
    let fine = phi_single(rho1, rho2, params, n, force_generic)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

/// Solvability functional of the pressure problem: the mean over the
/// angular variable of `∫₀¹ (σ − σ̃)(ρ2 − ρ1) dy` with σ the nutrient
/// solution.
///
/// The tensor trapezoidal value on the requested grid is combined with its
/// half-resolution companion to extrapolate away the shared second-order
/// bias of quadrature and discretization, so the equilibrium zero is
/// resolved well below the solver's pointwise accuracy.
pub fn phi(
    rho1: &BoundaryCurve,
    rho2: &BoundaryCurve,
    params: &ModelParams,
    n: usize,
) -> Result<f64> {
    phi_impl(rho1, rho2, params, n, false)
}

/// Centered directional derivative of [`phi`] under a rigid vertical
/// translation of the outer curve.
pub fn phi_prime_up(
    rho1: &BoundaryCurve,
    rho2: &BoundaryCurve,
    params: &ModelParams,
    n: usize,
    eps: f64,
) -> Result<f64> {
    if !(eps.is_finite() && (1e-6..=1e-2).contains(&eps)) {
        return Err(Error::InvalidParameter {
            name: "eps",
            reason: format!("directional step must lie in [1e-6, 1e-2], got {eps}"),
        });
    }
    let up = rho2.translated(eps)?;
    let down = rho2.translated(-eps)?;
    Ok((phi(rho1, &up, params, n)? - phi(rho1, &down, params, n)?) / (2.0 * eps))
}

fn pressure_fast(geo: &Geometry, params: &ModelParams, n: usize) -> Result<(GridFunction2D, f64)> {
    let w = geo.w[0];
    let dif = 1.0 / (w * w);
    let nutrient = TwoPointBvp::new(
        dif,
        -1.0,
        Box::new(|_| 0.0),
        BoundaryCondition::Neumann(0.0),
        BoundaryCondition::Dirichlet(params.sigma_bar),
    )?;
    let sigma = bvp::solve(&nutrient, n)?;
    let mu = params.mu;
    let sigma_tilde = params.sigma_tilde;
    let rhs: Vec<f64> = sigma
        .values
        .iter()
        .map(|s| -mu * (s - sigma_tilde))
        .collect();
    let pressure = TwoPointBvp::new(
        dif,
        0.0,
        Box::new(bvp::sampled_rhs(rhs)),
        BoundaryCondition::Neumann(0.0),
        BoundaryCondition::Neumann(0.0),
    )?;
    let (_, values, defect) = bvp::solve_pinned_projected(&pressure, n)?;
    Ok((GridFunction2D::broadcast_column(geo.m, &values), defect))
}

fn pressure_generic_inner(
    geo: &Geometry,
    params: &ModelParams,
    n: usize,
) -> Result<(GridFunction2D, f64)> {
    let sigma = nutrient_generic_inner(geo, params.sigma_bar, n)?;
    let m = geo.m;
    let mut rhs = vec![vec![0.0_f64; m]; n + 1];
    let mut defect = 0.0;
    for (l, level) in rhs.iter_mut().enumerate() {
        let tw = if l == 0 || l == n { 0.5 } else { 1.0 };
        for (j, value) in level.iter_mut().enumerate() {
            *value = -params.mu * (sigma.get(j, l) - params.sigma_tilde);
            defect += tw * *value;
        }
    }
    defect /= (m * n) as f64;
    for level in rhs.iter_mut() {
        for value in level.iter_mut() {
            *value -= defect;
        }
    }
    let levels = block_solve(geo, n, 0.0, &TopRow::Flux, &|j, l| rhs[l][j], true)?;
    Ok((levels_to_grid(m, n, &levels), defect))
}

fn pressure_inner(
    rho1: &BoundaryCurve,
    rho2: &BoundaryCurve,
    params: &ModelParams,
    n: usize,
    threshold: f64,
    force_generic: bool,
) -> Result<(GridFunction2D, f64, f64)> {
    validate_grid(n)?;
    let phi_value = phi_impl(rho1, rho2, params, n, force_generic)?;
    if phi_value.abs() > threshold {
        return Err(Error::Incompatible {
            phi: phi_value,
            threshold,
        });
    }
    let geo = prepare(rho1, rho2)?;
    let (grid, defect) = if geo.flat && !force_generic {
        pressure_fast(&geo, params, n)?
    } else {
        pressure_generic_inner(&geo, params, n)?
    };
    Ok((grid, defect, phi_value))
}

/// Solves the pure-flux pressure problem `𝒜p = −μ(σ − σ̃)` with zero
/// conormal flux on both interfaces, pinned to zero at the grid node
/// `(x, y) = (0, 0)`.
///
/// Solvability is gated on |[`phi`]| staying below
/// [`DEFAULT_COMPATIBILITY_THRESHOLD`]; the discrete right-hand side is
/// additionally projected onto the solvable subspace before solving.
pub fn solve_pressure_neumann(
    rho1: &BoundaryCurve,
    rho2: &BoundaryCurve,
    params: &ModelParams,
    n: usize,
) -> Result<GridFunction2D> {
    let (grid, _, _) = pressure_inner(
        rho1,
        rho2,
        params,
        n,
        DEFAULT_COMPATIBILITY_THRESHOLD,
        false,
    )?;
    Ok(grid)
}

/// [`solve_pressure_neumann`] with an explicit compatibility threshold;
/// also returns the projected discrete defect.
pub fn solve_pressure_neumann_with_threshold(
    rho1: &BoundaryCurve,
    rho2: &BoundaryCurve,
    params: &ModelParams,
    n: usize,
    threshold: f64,
) -> Result<(GridFunction2D, f64)> {
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(Error::InvalidParameter {
            name: "threshold",
            reason: format!("compatibility threshold must be positive, got {threshold}"),
        });
    }
    let (grid, defect, _) = pressure_inner(rho1, rho2, params, n, threshold, false)?;
    Ok((grid, defect))
}

/// Generic-path pressure solve, bypassing the horizontal-pair reduction;
/// used to cross-check the two routes on flat pairs.
pub(crate) fn solve_pressure_generic(
    rho1: &BoundaryCurve,
    rho2: &BoundaryCurve,
    params: &ModelParams,
    n: usize,
) -> Result<(GridFunction2D, f64)> {
    let (grid, defect, _) =
        pressure_inner(rho1, rho2, params, n, DEFAULT_COMPATIBILITY_THRESHOLD, true)?;
    Ok((grid, defect))
}

/// Suggests the free constant of the residual map by zeroing the mean of
/// the outer-interface residual:
/// `c0 = −mean(p|_{y=1} − gamma2 · κ(rho2))`.
pub fn suggested_c0(
    rho1: &BoundaryCurve,
    rho2: &BoundaryCurve,
    gamma2: f64,
    params: &ModelParams,
    n: usize,
) -> Result<f64> {
    if !(gamma2.is_finite() && gamma2 > 0.0) {
        return Err(Error::InvalidParameter {
            name: "gamma2",
            reason: format!("surface-tension coefficient must be positive, got {gamma2}"),
        });
    }
    let pressure = solve_pressure_neumann(rho1, rho2, params, n)?;
    let kappa2 = rho2.curvature();
    let top = pressure.top_row();
    let m = top.len();
    let mean = (0..m).map(|j| top[j] - gamma2 * kappa2[j]).sum::<f64>() / m as f64;
    Ok(-mean)
}

/// Pointwise residuals of the two Laplace–Young stationarity conditions
/// for a candidate configuration.
#[derive(Debug, Clone)]
pub struct BifurcationResidual {
    /// Inner-interface residual `p|_{y=0} + c0 + c − gamma1 · κ(rho1)`.
    pub res1: Vec<f64>,
    /// Outer-interface residual `p|_{y=1} + c0 − gamma2 · κ(rho2)`.
    pub res2: Vec<f64>,
    /// Solvability functional of the pair, reported alongside.
    pub phi_value: f64,
}

/// Evaluates the stationarity residual map at a candidate curve pair with
/// surface-tension coefficients `gamma1`, `gamma2` and free constant `c0`;
/// `fs` supplies the additive constant `c` of the inner condition.
#[allow(clippy::too_many_arguments)]
pub fn bifurcation_residual(
    rho1: &BoundaryCurve,
    rho2: &BoundaryCurve,
    gamma1: f64,
    gamma2: f64,
    c0: f64,
    params: &ModelParams,
    fs: &FlatStationary,
    n: usize,
) -> Result<BifurcationResidual> {
    for (name, value) in [("gamma1", gamma1), ("gamma2", gamma2)] {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::InvalidParameter {
                name,
                reason: format!("surface-tension coefficient must be positive, got {value}"),
            });
        }
    }
    if !c0.is_finite() {
        return Err(Error::InvalidParameter {
            name: "c0",
            reason: "free constant must be finite".into(),
        });
    }
    let (pressure, _, phi_value) = pressure_inner(
        rho1,
        rho2,
        params,
        n,
        DEFAULT_COMPATIBILITY_THRESHOLD,
        false,
    )?;
    let kappa1 = rho1.curvature();
    let kappa2 = rho2.curvature();
    let bottom = pressure.bottom_row();
    let top = pressure.top_row();
    let m = bottom.len();
    let mut res1 = Vec::with_capacity(m);
    let mut res2 = Vec::with_capacity(m);
    for j in 0..m {
        res1.push(bottom[j] + c0 + fs.c_value - gamma1 * kappa1[j]);
        res2.push(top[j] + c0 - gamma2 * kappa2[j]);
    }
    Ok(BifurcationResidual {
        res1,
        res2,
        phi_value,
    })
}

/// Compares the numerical ε-derivative of the transformed operator applied
/// to the flat nutrient profile against the closed-form linearization
/// forcing, returning the grid sup-norm of the mismatch.
///
/// This is a sign-convention audit: the value is reported, not asserted
/// against a target. The mismatch vanishes with the direction and shrinks
/// linearly in `eps` when the conventions agree; since the first-order
/// terms cancel, the remainder is quadratic in the direction amplitude.
pub fn linearization_gateaux_gap(
    fs: &FlatStationary,
    mode: &ModeCoefficients,
    eps: f64,
    n: usize,
) -> Result<f64> {
    if !(eps.is_finite() && (1e-6..=1e-3).contains(&eps)) {
        return Err(Error::InvalidParameter {
            name: "eps",
            reason: format!("linearization step must lie in [1e-6, 1e-3], got {eps}"),
        });
    }
    if n < 8 || !n.is_multiple_of(2) || n > MAX_GRID_2D {
        return Err(Error::Misuse(format!(
            "gateaux grid must be an even size in [8, {MAX_GRID_2D}], got {n}"
        )));
    }
    let m = n;
    let k = mode.k as f64;
    let rho1_base = BoundaryCurve::constant(m, fs.rho1_star)?;
    let rho2_base = BoundaryCurve::constant(m, fs.rho2_star())?;
    let mut lower = Vec::with_capacity(m);
    let mut upper = Vec::with_capacity(m);
    for j in 0..m {
        let x = TAU * j as f64 / m as f64;
        let r = mode.a_k * (k * x).cos() + mode.b_k * (k * x).sin();
        let s = mode.c_k * (k * x).cos() + mode.d_k * (k * x).sin();
        lower.push(fs.rho1_star + eps * r);
        upper.push(fs.rho2_star() + eps * s);
    }
    let rho1_eps = BoundaryCurve::from_samples(lower)?;
    let rho2_eps = BoundaryCurve::from_samples(upper)?;
    let op_eps = build_operator(&rho1_eps, &rho2_eps)?;
    let op_base = build_operator(&rho1_base, &rho2_base)?;
    let f = forcing_f(mode, fs);
    let g = forcing_g(mode, fs);
    let d = fs.delta;
    let mut gap = 0.0_f64;
    for j in 0..m {
        let x = TAU * j as f64 / m as f64;
        let ck = (k * x).cos();
        let sk = (k * x).sin();
        for l in 0..=n {
            let y = l as f64 / n as f64;
            let y_phys = fs.rho1_star + y * d;
            // The flat profile is x-independent, so the operator reduces
            // to its a22 and b terms acting on the vertical derivatives.
            let u_yy = d * d * fs.sigma_star_unchecked(y_phys);
            let u_y = d * fs.sigma_star_derivative(y_phys)?;
            let applied_eps = op_eps.a22.get(j, l) * u_yy + op_eps.b.get(j, l) * u_y;
            let applied_base = op_base.a22.get(j, l) * u_yy + op_base.b.get(j, l) * u_y;
            let residual = (applied_eps - applied_base) / eps + f.eval(y) * ck + g.eval(y) * sk;
            gap = gap.max(residual.abs());
        }
    }
    Ok(gap)
}
