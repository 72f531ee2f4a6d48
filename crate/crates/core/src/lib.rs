//! Two-sided quaternion fractional Fourier transform (QFrFT) on 2D grids, and
//! numerical checks of the covariance-sharpened uncertainty principles it
//! satisfies.
//!
//! The numeric core is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64`, which is what the tolerances are tuned for.
//!
//! ```
//! use qfrft_core::{Field, Grid, Order, Quat};
//!
//! let grid = Grid::symmetric(65, 65, 6.0).unwrap();
//! let f = Field::sample(grid, |x1, x2| {
//!     Quat::new(1.0, 0.0, 0.5, 0.0) * (-(x1 * x1 + x2 * x2) / 2.0).exp()
//! })
//! .unwrap()
//! .normalize()
//! .unwrap();
//! let order = Order::new(1.0, 0.6).unwrap();
//! let big_f = qfrft_core::transform::qfrft_fast(&f, &order, &grid).unwrap();
//! assert!((big_f.l2_norm() - 1.0).abs() < 1e-6);
//! ```

// `!(x > 0)` style checks also reject NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod extremals;
pub mod field;
pub mod moments;
pub mod qsig;
pub mod quat;
pub mod scalar;
pub mod signals;
pub mod suites;
pub mod transform;

pub use error::{Error, Result};
pub use field::{Axis, Grid2D, PolarField, QField};
pub use quat::{exp_pure, PolarQuat, Quaternion};
pub use scalar::Scalar;
pub use transform::TransformOrder;

pub type Quat = Quaternion<f64>;
pub type Grid = Grid2D<f64>;
pub type Field = QField<f64>;
pub type Order = TransformOrder<f64>;
pub type Report = bounds::BoundReport<f64>;

pub type Quat32 = Quaternion<f32>;
pub type Field32 = QField<f32>;
