//! Gaussian signals that attain equality in the uncertainty bounds.

use serde::Serialize;

use crate::bounds::{BoundReport, BoundsEvaluator};
use crate::error::{Error, Result};
use crate::field::{Axis, Grid2D, QField};
use crate::quat::Quaternion;
use crate::scalar::Scalar;
use crate::transform::TransformOrder;

/// Commutator tolerance for the phase-slope check.
pub const COMMUTE_TOL: f64 = 1e-12;

/// Tolerance for treating a phase slope as pure.
pub const PURE_TOL: f64 = 1e-12;

/// Grid half-width required, in units of the widest envelope scale.
pub const EXTENT_FACTOR: f64 = 6.0;

/// Relative slack below which equality is declared.
pub const EQ_TOL: f64 = 1e-3;

/// Tighter equality tolerance used from this many nodes per axis.
pub const EQ_TOL_FINE: f64 = 1e-4;
pub const EQ_TOL_FINE_NODES: usize = 513;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Variant {
    /// Independent widths and slopes per axis; equality in the directional bound.
    PerAxis,
    /// Common width and slope; equality in the spatial bound.
    Spatial,
    /// `(pi l sin a)^{-1/2} e^{-|x|^2 / (2 l sin a)} e^{beta |x|^2}`.
    Example51,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExtremalSpec<S> {
    pub variant: Variant,
    pub lambda1: S,
    pub lambda2: S,
    pub alpha1: S,
    pub alpha2: S,
    pub beta1: Quaternion<S>,
    pub beta2: Quaternion<S>,
}

impl<S: Scalar> ExtremalSpec<S> {
    pub fn per_axis(lambda: (S, S), alpha: (S, S), beta: (Quaternion<S>, Quaternion<S>)) -> Self {
        Self {
            variant: Variant::PerAxis,
            lambda1: lambda.0,
            lambda2: lambda.1,
            alpha1: alpha.0,
            alpha2: alpha.1,
            beta1: beta.0,
            beta2: beta.1,
        }
    }

    pub fn spatial(lambda: S, alpha: (S, S), beta: Quaternion<S>) -> Self {
        Self {
            variant: Variant::Spatial,
            lambda1: lambda,
            lambda2: lambda,
            alpha1: alpha.0,
            alpha2: alpha.1,
            beta1: beta,
            beta2: beta,
        }
    }

    pub fn example51(lambda: S, alpha: S, beta: Quaternion<S>) -> Self {
        Self {
            variant: Variant::Example51,
            lambda1: lambda,
            lambda2: lambda,
            alpha1: alpha,
            alpha2: alpha,
            beta1: beta,
            beta2: beta,
        }
    }

    pub fn order(&self) -> Result<TransformOrder<S>> {
        TransformOrder::new(self.alpha1, self.alpha2)
    }

    /// Expected `D_k / x_k`: `beta_k` for the Gaussian variants, `2 beta` for
    /// the `e^{beta |x|^2}` phase.
    pub fn slope(&self, axis: Axis) -> Quaternion<S> {
        let beta = match axis {
            Axis::X1 => self.beta1,
            Axis::X2 => self.beta2,
        };
        match self.variant {
            Variant::Example51 => beta * S::lit(2.0),
            _ => beta,
        }
    }

    /// Envelope variance parameter `lambda_k |sin a_k|` along `axis`.
    pub fn width(&self, axis: Axis) -> S {
        match axis {
            Axis::X1 => self.lambda1 * self.alpha1.sin().abs(),
            Axis::X2 => self.lambda2 * self.alpha2.sin().abs(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let order = self.order()?;
        for l in [self.lambda1, self.lambda2] {
            if !(l.is_finite() && l > S::zero()) {
                return Err(Error::InvalidSpec(format!(
                    "lambda must be positive, got {l}"
                )));
            }
        }
        for b in [self.beta1, self.beta2] {
            if !b.is_finite() || b.q0.abs() > S::lit(PURE_TOL) {
                return Err(Error::InvalidSpec(format!(
                    "phase slope must be pure, scalar part is {}",
                    b.q0
                )));
            }
        }
        let (s1, s2) = (order.sin(Axis::X1), order.sin(Axis::X2));
        match self.variant {
            Variant::PerAxis => {
                if !check_remark48(self.beta1, self.beta2)? {
                    return Err(Error::NonCommutingBetas {
                        commutator: commutator(self.beta1, self.beta2).norm().to_f64_lossy(),
                    });
                }
            }
            Variant::Spatial => {
                if (s1 - s2).abs() > S::lit(1e-12) {
                    return Err(Error::InvalidSpec(format!(
                        "spatial extremal needs sin a1 = sin a2, got {s1} and {s2}"
                    )));
                }
            }
            Variant::Example51 => {
                if self.alpha1 != self.alpha2 || !(s1 > S::zero()) {
                    return Err(Error::InvalidSpec(
                        "example signal needs a single order with sin a > 0".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

fn commutator<S: Scalar>(a: Quaternion<S>, b: Quaternion<S>) -> Quaternion<S> {
    a * b - b * a
}

/// Whether the pure slopes commute, which for pure quaternions means they are
/// parallel.
pub fn check_remark48<S: Scalar>(beta1: Quaternion<S>, beta2: Quaternion<S>) -> Result<bool> {
    for b in [beta1, beta2] {
        if b.q0.abs() > S::lit(PURE_TOL) {
            return Err(Error::NotPure {
                scalar: b.q0.to_f64_lossy(),
            });
        }
    }
    Ok(commutator(beta1, beta2).norm() <= S::lit(COMMUTE_TOL))
}

type PhaseFn<S> = Box<dyn Fn(S, S) -> Quaternion<S>>;

/// Samples the extremal of `spec` on `grid`.
pub fn build_extremal<S: Scalar>(spec: &ExtremalSpec<S>, grid: &Grid2D<S>) -> Result<QField<S>> {
    spec.validate()?;
    let needed = Axis::BOTH
        .iter()
        .map(|&k| spec.width(k).sqrt())
        .fold(S::zero(), S::max)
        * S::lit(EXTENT_FACTOR);
    for k in Axis::BOTH {
        let (lo, hi) = grid.bounds(k);
        let reach = (-lo).min(hi);
        if reach < needed {
            return Err(Error::GridTooSmall(format!(
                "extremal needs |x{}| up to {needed}, grid reaches {reach}",
                k.number()
            )));
        }
    }
    let (v1, v2) = (spec.width(Axis::X1), spec.width(Axis::X2));
    let two = S::lit(2.0);
    let pi = S::PI();
    let (norm, phase): (S, PhaseFn<S>) = match spec.variant {
        Variant::PerAxis => {
            let (b1, b2) = (spec.beta1, spec.beta2);
            (
                (pi * pi * v1 * v2).powf(S::lit(-0.25)),
                Box::new(move |x1, x2| {
                    Quaternion::exp_of_pure((b1 * (x1 * x1) + b2 * (x2 * x2)) / two)
                }),
            )
        }
        Variant::Spatial => {
            let b = spec.beta1;
            let root = (spec.alpha1.sin().abs() * spec.alpha2.sin().abs()).sqrt();
            (
                (pi * spec.lambda1 * root).powf(S::lit(-0.5)),
                Box::new(move |x1, x2| Quaternion::exp_of_pure(b * ((x1 * x1 + x2 * x2) / two))),
            )
        }
        Variant::Example51 => {
            let b = spec.beta1;
            (
                (pi * v1).powf(S::lit(-0.5)),
                Box::new(move |x1, x2| Quaternion::exp_of_pure(b * (x1 * x1 + x2 * x2))),
            )
        }
    };
    QField::sample(*grid, |x1, x2| {
        phase(x1, x2) * (norm * (-(x1 * x1) / (two * v1) - x2 * x2 / (two * v2)).exp())
    })
}

/// Largest `|D_k - slope_k x_k|` over masked nodes and both axes.
pub fn ode_residual<S: Scalar>(spec: &ExtremalSpec<S>, f: &QField<S>) -> Result<S> {
    let polar = f.polar();
    let grid = f.grid();
    let mut worst = S::zero();
    for k in Axis::BOTH {
        let d = polar.phase_derivative(k)?;
        let slope = spec.slope(k);
        for (idx, &keep) in polar.mask().iter().enumerate() {
            if keep {
                let pos = if k == Axis::X1 {
                    idx / grid.n2()
                } else {
                    idx % grid.n2()
                };
                let expect = slope * grid.coord(k, pos);
                worst = worst.max((d.values()[idx] - expect).norm());
            }
        }
    }
    Ok(worst)
}

/// Equality tolerance for a grid: [`EQ_TOL`], or [`EQ_TOL_FINE`] on fine grids.
pub fn eq_tol<S: Scalar>(grid: &Grid2D<S>) -> S {
    if grid.n1().min(grid.n2()) >= EQ_TOL_FINE_NODES {
        S::lit(EQ_TOL_FINE)
    } else {
        S::lit(EQ_TOL)
    }
}

/// Builds the extremal and evaluates the bound it should saturate: the
/// directional bound along `axis` for the per-axis and example signals, the
/// spatial bound for the spatial signal.
pub fn verify_equality<S: Scalar>(
    spec: &ExtremalSpec<S>,
    grid: &Grid2D<S>,
    axis: Axis,
) -> Result<BoundReport<S>> {
    let f = build_extremal(spec, grid)?;
    let order = spec.order()?;
    let mut ev = BoundsEvaluator::new(&f)?;
    match spec.variant {
        Variant::Spatial => ev.thm11(&order),
        _ => ev.thm47(&order, axis),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_traits::Zero;
    use std::f64::consts::{FRAC_PI_2, PI};

    type Q = Quaternion<f64>;

    fn grid() -> Grid2D<f64> {
        Grid2D::<f64>::symmetric(257, 257, 8.0).unwrap()
    }

    #[test]
    fn remark48_examples() {
        assert!(check_remark48(Q::i(), Q::i()).unwrap());
        assert!(!check_remark48(Q::i(), Q::j()).unwrap());
        assert!(check_remark48(Q::i(), Q::pure(2.0, 0.0, 0.0)).unwrap());
        assert!(check_remark48(Q::zero(), Q::k()).unwrap());
        assert!(matches!(
            check_remark48(Q::one(), Q::i()),
            Err(Error::NotPure { .. })
        ));
    }

    #[test]
    fn example_is_unit_energy() {
        let f = build_extremal(&ExtremalSpec::example51(1.0, FRAC_PI_2, Q::i()), &grid()).unwrap();
        assert_relative_eq!(f.l2_norm(), 1.0, epsilon = 1e-6);
        let f = build_extremal(
            &ExtremalSpec::example51(0.5, 1.1, Q::pure(0.0, 0.6, 0.8)),
            &grid(),
        )
        .unwrap();
        assert_relative_eq!(f.l2_norm(), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn per_axis_without_phase_is_real_gaussian() {
        let spec =
            ExtremalSpec::per_axis((1.0, 1.0), (FRAC_PI_2, FRAC_PI_2), (Q::zero(), Q::zero()));
        let f = build_extremal(&spec, &grid()).unwrap();
        let expect = QField::sample(grid(), |x1, x2| {
            Q::from_real((-(x1 * x1 + x2 * x2) / 2.0).exp() / PI.sqrt())
        })
        .unwrap();
        assert!(f.max_abs_diff(&expect).unwrap() <= 1e-15);
    }

    #[test]
    fn rejects_bad_specs() {
        let spec = ExtremalSpec::per_axis((1.0, 1.0), (FRAC_PI_2, FRAC_PI_2), (Q::i(), Q::j()));
        assert!(matches!(
            build_extremal(&spec, &grid()),
            Err(Error::NonCommutingBetas { .. })
        ));
        let spec = ExtremalSpec::example51(4.0, FRAC_PI_2, Q::i());
        let small = Grid2D::<f64>::symmetric(65, 65, 8.0).unwrap();
        assert!(matches!(
            build_extremal(&spec, &small),
            Err(Error::GridTooSmall(_))
        ));
        let spec = ExtremalSpec::spatial(1.0, (FRAC_PI_2, 1.0), Q::i());
        assert!(matches!(
            build_extremal(&spec, &grid()),
            Err(Error::InvalidSpec(_))
        ));
        let spec = ExtremalSpec::example51(-1.0, FRAC_PI_2, Q::i());
        assert!(matches!(
            build_extremal(&spec, &grid()),
            Err(Error::InvalidSpec(_))
        ));
        let spec = ExtremalSpec::example51(1.0, 0.0, Q::i());
        assert!(matches!(
            build_extremal(&spec, &grid()),
            Err(Error::DegenerateOrder { .. })
        ));
    }

    #[test]
    fn ode_holds() {
        let specs = [
            ExtremalSpec::example51(1.0, FRAC_PI_2, Q::i()),
            ExtremalSpec::per_axis(
                (1.0, 0.6),
                (1.2, 2.0),
                (Q::pure(0.0, 0.0, 1.5), Q::pure(0.0, 0.0, -0.5)),
            ),
            ExtremalSpec::spatial(0.8, (1.0, PI - 1.0), Q::pure(0.6, 0.8, 0.0)),
        ];
        for spec in specs {
            let f = build_extremal(&spec, &grid()).unwrap();
            assert!(ode_residual(&spec, &f).unwrap() <= 1e-4, "{spec:?}");
        }
    }

    #[test]
    fn equality_reports() {
        let r = verify_equality(
            &ExtremalSpec::example51(1.0, FRAC_PI_2, Q::i()),
            &grid(),
            Axis::X1,
        )
        .unwrap();
        assert_relative_eq!(r.lhs, 1.25, max_relative = 1e-3);
        assert!(r.relative_slack() <= eq_tol(&grid()));
        // lambda = 2 needs |x| up to 6 sqrt(2), and its spectrum reaches |w| ~ 13
        let spec = ExtremalSpec::example51(2.0, FRAC_PI_2, Q::j());
        assert!(matches!(
            verify_equality(&spec, &grid(), Axis::X2),
            Err(Error::GridTooSmall(_))
        ));
        let wide = Grid2D::<f64>::symmetric(449, 449, 14.0).unwrap();
        let r = verify_equality(&spec, &wide, Axis::X2).unwrap();
        assert_relative_eq!(r.lhs, 4.25, max_relative = 1e-3);
        assert!(r.relative_slack() <= eq_tol(&wide));
        let spec =
            ExtremalSpec::per_axis((1.0, 1.0), (FRAC_PI_2, FRAC_PI_2), (Q::zero(), Q::zero()));
        let r = verify_equality(&spec, &grid(), Axis::X1).unwrap();
        assert_relative_eq!(r.lhs, 0.25, max_relative = 1e-3);
        assert!(r.relative_slack() <= 1e-3);
        let spec = ExtremalSpec::spatial(1.0, (FRAC_PI_2, FRAC_PI_2), Q::k());
        let r = verify_equality(&spec, &grid(), Axis::X1).unwrap();
        assert!(r.relative_slack() <= 1e-3);
    }

    #[test]
    fn eq_tol_tightens_on_fine_grids() {
        assert_eq!(eq_tol(&grid()), 1e-3);
        assert_eq!(
            eq_tol(&Grid2D::<f64>::symmetric(513, 513, 8.0).unwrap()),
            1e-4
        );
    }
}
