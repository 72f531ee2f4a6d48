//! Second moments, covariances and the spatial-domain integrals behind the
//! uncertainty bounds.

use std::sync::atomic::{AtomicBool, Ordering};

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Axis, Grid2D, QField};
use crate::quat::Quaternion;
use crate::scalar::Scalar;
use crate::transform::{qfrft_fast, spot_check, TransformOrder, FAST_TOL};

/// Allowed deviation of `||f||^2` from one.
pub const UNIT_ENERGY_TOL: f64 = 1e-6;

/// Output nodes per axis compared against the reference quadrature on the
/// first fast transform of a process.
pub const ORACLE_SAMPLES: usize = 5;

static ORACLE_CHECKED: AtomicBool = AtomicBool::new(false);

pub fn check_unit_energy<S: Scalar>(f: &QField<S>) -> Result<()> {
    let energy = f.energy();
    if !((energy - S::one()).abs() <= S::lit(UNIT_ENERGY_TOL)) {
        return Err(Error::NotNormalized {
            norm: energy.sqrt().to_f64_lossy(),
        });
    }
    Ok(())
}

/// Uncentred second moments along each axis and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentSet<S> {
    pub axis: [S; 2],
    pub total: S,
}

impl<S: Scalar> MomentSet<S> {
    pub fn get(&self, axis: Axis) -> S {
        self.axis[axis.index()]
    }
}

/// `int x_k^2 |g|^2` over the grid of `g`, for both axes.
pub fn second_moments<S: Scalar>(g: &QField<S>) -> MomentSet<S> {
    let grid = g.grid();
    let axis = Axis::BOTH.map(|k| {
        integrate_with(grid, |idx, x| {
            x[k.index()] * x[k.index()] * g.values()[idx].norm_sqr()
        })
    });
    MomentSet {
        total: axis[0] + axis[1],
        axis,
    }
}

/// Spatial second moments of a unit-energy field.
pub fn spatial_moment2<S: Scalar>(f: &QField<S>) -> Result<MomentSet<S>> {
    check_unit_energy(f)?;
    Ok(second_moments(f))
}

/// Transform-domain second moments `int w_k^2 |F{f}(w)|^2`, with the
/// transform sampled on the grid of `f`.
///
/// Uses the fast transform. The first call in a process also evaluates the
/// reference quadrature at a few output nodes and fails with
/// [`Error::OracleMismatch`] if the two disagree.
pub fn spectral_moment2_direct<S: Scalar>(
    f: &QField<S>,
    order: &TransformOrder<S>,
) -> Result<MomentSet<S>> {
    let big_f = qfrft_fast(f, order, f.grid())?;
    if !ORACLE_CHECKED.swap(true, Ordering::SeqCst) {
        let deviation = spot_check(f, order, &big_f, ORACLE_SAMPLES);
        log::debug!("fast transform oracle spot-check: max deviation {deviation}");
        if !(deviation <= S::lit(FAST_TOL)) {
            return Err(Error::OracleMismatch {
                deviation: deviation.to_f64_lossy(),
            });
        }
    }
    Ok(second_moments(&big_f))
}

/// Integrates `g(idx, [x1, x2])` over every node.
fn integrate_with<S, F>(grid: &Grid2D<S>, mut g: F) -> S
where
    S: Scalar,
    F: FnMut(usize, [S; 2]) -> S,
{
    let x1 = grid.coords(Axis::X1);
    let x2 = grid.coords(Axis::X2);
    let n2 = grid.n2();
    let values: Vec<S> = (0..grid.len())
        .map(|idx| g(idx, [x1[idx / n2], x2[idx % n2]]))
        .collect();
    grid.integrate(&values)
}

/// Spatial integrals along one axis `k`. `D` is the phase-derivative field,
/// `e_k` is `i` for `x1` and `j` for `x2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AxisIntegrals<S> {
    /// `int x_k^2 rho^2`
    pub x2_rho2: S,
    /// `int (d_k rho)^2`
    pub drho2: S,
    /// `int rho^2 |D_k|^2`
    pub rho2_d2: S,
    /// `int x_k rho^2 Sc[e_k D_k]`
    pub sc: S,
    /// `int |x_k D_k| rho^2`
    pub cov_abs: S,
    /// `int x_k D_k rho^2`
    pub cov_signed: Quaternion<S>,
    /// `int x_k rho d_k rho`
    pub x_rho_drho: S,
    /// `int rho (d_k rho) |D_k|`
    pub rho_drho_d: S,
    /// `int x_k rho^2 |D_k|`
    pub x_rho2_d: S,
}

/// Polar decomposition of a field together with its derivative fields and
/// every per-axis integral the bounds need.
#[derive(Debug, Clone)]
pub struct SpatialAnalysis<S> {
    grid: Grid2D<S>,
    rho: Vec<S>,
    mask: Vec<bool>,
    drho: [Vec<S>; 2],
    d: [QField<S>; 2],
    integrals: [AxisIntegrals<S>; 2],
}

impl<S: Scalar> SpatialAnalysis<S> {
    pub fn new(f: &QField<S>) -> Result<Self> {
        let polar = f.polar();
        let grid = *f.grid();
        let rho = polar.rho().to_vec();
        let drho = [
            grid.differentiate(&rho, Axis::X1)?,
            grid.differentiate(&rho, Axis::X2)?,
        ];
        let d = [
            polar.phase_derivative(Axis::X1)?,
            polar.phase_derivative(Axis::X2)?,
        ];
        let integrals = Axis::BOTH.map(|k| {
            let i = k.index();
            let (dr, dk) = (&drho[i], d[i].values());
            let e = k.unit::<S>();
            let r2 = |idx: usize| rho[idx] * rho[idx];
            let cov_terms: Vec<Quaternion<S>> = (0..grid.len())
                .map(|idx| {
                    let xk = grid.coord(
                        k,
                        if i == 0 {
                            idx / grid.n2()
                        } else {
                            idx % grid.n2()
                        },
                    );
                    dk[idx] * (xk * r2(idx))
                })
                .collect();
            AxisIntegrals {
                x2_rho2: integrate_with(&grid, |idx, x| x[i] * x[i] * r2(idx)),
                drho2: integrate_with(&grid, |idx, _| dr[idx] * dr[idx]),
                rho2_d2: integrate_with(&grid, |idx, _| r2(idx) * dk[idx].norm_sqr()),
                sc: integrate_with(&grid, |idx, x| x[i] * r2(idx) * (e * dk[idx]).scalar()),
                cov_abs: integrate_with(&grid, |idx, x| x[i].abs() * dk[idx].norm() * r2(idx)),
                cov_signed: grid.integrate(&cov_terms),
                x_rho_drho: integrate_with(&grid, |idx, x| x[i] * rho[idx] * dr[idx]),
                rho_drho_d: integrate_with(&grid, |idx, _| rho[idx] * dr[idx] * dk[idx].norm()),
                x_rho2_d: integrate_with(&grid, |idx, x| x[i] * r2(idx) * dk[idx].norm()),
            }
        });
        Ok(Self {
            grid,
            mask: polar.mask().to_vec(),
            rho,
            drho,
            d,
            integrals,
        })
    }

    #[inline]
    pub fn grid(&self) -> &Grid2D<S> {
        &self.grid
    }

    #[inline]
    pub fn rho(&self) -> &[S] {
        &self.rho
    }

    #[inline]
    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    /// `d_k rho` per node.
    #[inline]
    pub fn drho(&self, axis: Axis) -> &[S] {
        &self.drho[axis.index()]
    }

    /// Phase-derivative field `D_k`.
    #[inline]
    pub fn phase_derivative(&self, axis: Axis) -> &QField<S> {
        &self.d[axis.index()]
    }

    #[inline]
    pub fn integrals(&self, axis: Axis) -> &AxisIntegrals<S> {
        &self.integrals[axis.index()]
    }

    pub fn spatial_moments(&self) -> MomentSet<S> {
        let axis = self.integrals.map(|a| a.x2_rho2);
        MomentSet {
            total: axis[0] + axis[1],
            axis,
        }
    }

    /// Spectral second moment along `k` from spatial integrals:
    /// `sin^2 int (d_k rho)^2 + cos^2 int x_k^2 rho^2 + sin^2 int rho^2 |D_k|^2
    /// - 2 sin cos int x_k rho^2 Sc[e_k D_k]`.
    pub fn spectral_moment2(&self, order: &TransformOrder<S>, axis: Axis) -> S {
        let a = self.integrals(axis);
        let (s, c) = (order.sin(axis), order.cos(axis));
        let two = S::lit(2.0);
        s * s * a.drho2 + c * c * a.x2_rho2 + s * s * a.rho2_d2 - two * s * c * a.sc
    }

    /// The four summands of [`SpatialAnalysis::spectral_moment2`], each
    /// summed over both axes; the spectral total is `I1 + I2 + I3 - I4`.
    pub fn i_terms(&self, order: &TransformOrder<S>) -> [S; 4] {
        let two = S::lit(2.0);
        let mut out = [S::zero(); 4];
        for k in Axis::BOTH {
            let a = self.integrals(k);
            let (s, c) = (order.sin(k), order.cos(k));
            out[0] = out[0] + s * s * a.drho2;
            out[1] = out[1] + c * c * a.x2_rho2;
            out[2] = out[2] + s * s * a.rho2_d2;
            out[3] = out[3] + two * s * c * a.sc;
        }
        out
    }

    pub fn covariances(&self, order: &TransformOrder<S>) -> CovarianceSet<S> {
        let cov_abs_axis = self.integrals.map(|a| a.cov_abs);
        let cov_signed_axis = self.integrals.map(|a| a.cov_signed);
        let mut cov_abs_alpha = S::zero();
        let mut cov_signed_alpha = Quaternion::zero();
        for k in Axis::BOTH {
            let s = order.sin(k);
            cov_abs_alpha = cov_abs_alpha + s.abs() * cov_abs_axis[k.index()];
            cov_signed_alpha += cov_signed_axis[k.index()] * s;
        }
        CovarianceSet {
            cov_abs_axis,
            cov_signed_axis,
            cov_abs_alpha,
            cov_signed_alpha,
            sc_term_axis: self.integrals.map(|a| a.sc),
        }
    }
}

/// Covariance functionals for one transform order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CovarianceSet<S> {
    /// `COV_k = int |x_k D_k| rho^2`
    pub cov_abs_axis: [S; 2],
    /// `Cov_k = int x_k D_k rho^2`
    pub cov_signed_axis: [Quaternion<S>; 2],
    /// `sum_k |sin a_k| COV_k`
    pub cov_abs_alpha: S,
    /// `sum_k sin a_k Cov_k`
    pub cov_signed_alpha: Quaternion<S>,
    /// `int x_k rho^2 Sc[e_k D_k]`
    pub sc_term_axis: [S; 2],
}

/// `I1..I4` at order `a` followed by `I5..I8` at order `b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ITerms<S> {
    pub values: [S; 8],
}

impl<S: Scalar> ITerms<S> {
    pub fn new(
        analysis: &SpatialAnalysis<S>,
        a: &TransformOrder<S>,
        b: &TransformOrder<S>,
    ) -> Self {
        let (x, y) = (analysis.i_terms(a), analysis.i_terms(b));
        Self {
            values: [x[0], x[1], x[2], x[3], y[0], y[1], y[2], y[3]],
        }
    }

    /// One-based accessor: `i(1)` is `I1`.
    pub fn i(&self, n: usize) -> S {
        self.values[n - 1]
    }
}

pub fn spectral_moment2_spatial<S: Scalar>(
    f: &QField<S>,
    order: &TransformOrder<S>,
    axis: Axis,
) -> Result<S> {
    Ok(SpatialAnalysis::new(f)?.spectral_moment2(order, axis))
}

pub fn cov_abs<S: Scalar>(f: &QField<S>, axis: Axis) -> Result<S> {
    Ok(SpatialAnalysis::new(f)?.integrals(axis).cov_abs)
}

pub fn cov_signed<S: Scalar>(f: &QField<S>, axis: Axis) -> Result<Quaternion<S>> {
    Ok(SpatialAnalysis::new(f)?.integrals(axis).cov_signed)
}

pub fn cov_alpha_abs<S: Scalar>(f: &QField<S>, order: &TransformOrder<S>) -> Result<S> {
    Ok(SpatialAnalysis::new(f)?.covariances(order).cov_abs_alpha)
}

pub fn cov_alpha_signed<S: Scalar>(
    f: &QField<S>,
    order: &TransformOrder<S>,
) -> Result<Quaternion<S>> {
    Ok(SpatialAnalysis::new(f)?.covariances(order).cov_signed_alpha)
}

pub fn sc_term<S: Scalar>(f: &QField<S>, axis: Axis) -> Result<S> {
    Ok(SpatialAnalysis::new(f)?.integrals(axis).sc)
}

pub fn i_terms<S: Scalar>(f: &QField<S>, order: &TransformOrder<S>) -> Result<[S; 4]> {
    Ok(SpatialAnalysis::new(f)?.i_terms(order))
}
