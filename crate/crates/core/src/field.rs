//! Quaternion-valued signals sampled on a uniform 2D grid, with the
//! quadrature, finite-difference and polar machinery the moment integrals
//! are built from.

use std::ops::{Add, Mul};

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quat::Quaternion;
use crate::scalar::{pairwise_sum, Scalar};

/// Minimum node count per axis.
pub const MIN_NODES: usize = 4;

/// Nodes per axis needed by the five-point derivative stencils.
pub const MIN_STENCIL_NODES: usize = 5;

/// Nodes whose magnitude falls below `RHO_FLOOR_REL * max(rho)` are masked
/// out of every phase-dependent quantity.
pub const RHO_FLOOR_REL: f64 = 1e-9;

/// Coordinate axis of the signal domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Axis {
    X1,
    X2,
}

impl Axis {
    pub const BOTH: [Axis; 2] = [Axis::X1, Axis::X2];

    /// Zero-based index (0 for `x1`, 1 for `x2`).
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Axis::X1 => 0,
            Axis::X2 => 1,
        }
    }

    /// One-based axis number.
    pub fn number(self) -> u8 {
        self.index() as u8 + 1
    }

    pub fn from_number(k: u8) -> Option<Self> {
        match k {
            1 => Some(Axis::X1),
            2 => Some(Axis::X2),
            _ => None,
        }
    }

    /// Imaginary unit attached to this axis: `i` for `x1`, `j` for `x2`.
    pub fn unit<S: Scalar>(self) -> Quaternion<S> {
        match self {
            Axis::X1 => Quaternion::i(),
            Axis::X2 => Quaternion::j(),
        }
    }
}

/// Uniform rectangular lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid2D<S> {
    n1: usize,
    n2: usize,
    x1_min: S,
    x1_max: S,
    x2_min: S,
    x2_max: S,
    h1: S,
    h2: S,
}

impl<S: Scalar> Grid2D<S> {
    pub fn new(n1: usize, n2: usize, x1: (S, S), x2: (S, S)) -> Result<Self> {
        if n1 < MIN_NODES || n2 < MIN_NODES {
            return Err(Error::BadGrid(format!(
                "need at least {MIN_NODES} nodes per axis, got {n1}x{n2}"
            )));
        }
        for (lo, hi) in [x1, x2] {
            if !(lo.is_finite() && hi.is_finite() && hi > lo) {
                return Err(Error::BadGrid(format!("invalid extent [{lo}, {hi}]")));
            }
        }
        Ok(Self {
            n1,
            n2,
            x1_min: x1.0,
            x1_max: x1.1,
            x2_min: x2.0,
            x2_max: x2.1,
            h1: (x1.1 - x1.0) / S::from_index(n1 - 1),
            h2: (x2.1 - x2.0) / S::from_index(n2 - 1),
        })
    }

    /// Symmetric grid on `[-extent, extent]^2`.
    pub fn symmetric(n1: usize, n2: usize, extent: S) -> Result<Self> {
        if !(extent > S::zero()) {
            return Err(Error::BadGrid(format!(
                "extent must be positive, got {extent}"
            )));
        }
        Self::new(n1, n2, (-extent, extent), (-extent, extent))
    }

    #[inline]
    pub fn n1(&self) -> usize {
        self.n1
    }

    #[inline]
    pub fn n2(&self) -> usize {
        self.n2
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n1 * self.n2
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn count(&self, axis: Axis) -> usize {
        match axis {
            Axis::X1 => self.n1,
            Axis::X2 => self.n2,
        }
    }

    #[inline]
    pub fn spacing(&self, axis: Axis) -> S {
        match axis {
            Axis::X1 => self.h1,
            Axis::X2 => self.h2,
        }
    }

    #[inline]
    pub fn bounds(&self, axis: Axis) -> (S, S) {
        match axis {
            Axis::X1 => (self.x1_min, self.x1_max),
            Axis::X2 => (self.x2_min, self.x2_max),
        }
    }

    /// Largest absolute coordinate along `axis`.
    pub fn max_abs_coord(&self, axis: Axis) -> S {
        let (lo, hi) = self.bounds(axis);
        lo.abs().max(hi.abs())
    }

    /// Coordinate of node `idx` along `axis`.
    #[inline]
    pub fn coord(&self, axis: Axis, idx: usize) -> S {
        let (lo, _) = self.bounds(axis);
        lo + S::from_index(idx) * self.spacing(axis)
    }

    pub fn coords(&self, axis: Axis) -> Vec<S> {
        (0..self.count(axis)).map(|i| self.coord(axis, i)).collect()
    }

    /// Trapezoid weights along `axis`, including the spacing.
    pub fn weights(&self, axis: Axis) -> Vec<S> {
        let n = self.count(axis);
        let h = self.spacing(axis);
        let half = S::lit(0.5);
        (0..n)
            .map(|i| if i == 0 || i + 1 == n { h * half } else { h })
            .collect()
    }

    /// Row-major flat index with `x2` varying fastest.
    #[inline]
    pub fn index(&self, m: usize, n: usize) -> usize {
        m * self.n2 + n
    }

    /// Tensor-product trapezoid rule over node values laid out like a
    /// [`QField`]. Rows are reduced first, then the row sums, each with the
    /// fixed pairwise tree.
    pub fn integrate<T>(&self, values: &[T]) -> T
    where
        T: Copy + Zero + Add<Output = T> + Mul<S, Output = T>,
    {
        assert_eq!(values.len(), self.len(), "value count does not match grid");
        let w1 = self.weights(Axis::X1);
        let w2 = self.weights(Axis::X2);
        let mut row = Vec::with_capacity(self.n2);
        let rows: Vec<T> = (0..self.n1)
            .map(|m| {
                row.clear();
                row.extend(
                    values[m * self.n2..(m + 1) * self.n2]
                        .iter()
                        .zip(&w2)
                        .map(|(&v, &w)| v * w),
                );
                pairwise_sum(&row) * w1[m]
            })
            .collect();
        pairwise_sum(&rows)
    }

    /// Integrates `g(x1, x2)` evaluated at every node.
    pub fn integrate_fn<F>(&self, mut g: F) -> S
    where
        F: FnMut(S, S) -> S,
    {
        let x1 = self.coords(Axis::X1);
        let x2 = self.coords(Axis::X2);
        let mut values = Vec::with_capacity(self.len());
        for &a in &x1 {
            for &b in &x2 {
                values.push(g(a, b));
            }
        }
        self.integrate(&values)
    }

    /// Fourth-order first derivative along `axis` of values laid out on this
    /// grid: central five-point stencil inside, one-sided five-point stencils
    /// on the two outermost nodes of each end.
    pub fn differentiate<T>(&self, values: &[T], axis: Axis) -> Result<Vec<T>>
    where
        T: Copy + Zero + Add<Output = T> + Mul<S, Output = T>,
    {
        assert_eq!(values.len(), self.len(), "value count does not match grid");
        let n = self.count(axis);
        if n < MIN_STENCIL_NODES {
            return Err(Error::GridTooSmall(format!(
                "derivative along {axis:?} needs {MIN_STENCIL_NODES} nodes, grid has {n}"
            )));
        }
        let inv_h = S::one() / self.spacing(axis);
        let mut out = vec![T::zero(); values.len()];
        self.for_each_line(axis, |line| {
            for i in 0..n {
                let (start, c) = stencil::<S>(i, n);
                let mut acc = T::zero();
                for (j, &cj) in c.iter().enumerate() {
                    acc = acc + values[line(start + j)] * cj;
                }
                out[line(i)] = acc * inv_h;
            }
        });
        Ok(out)
    }

    /// Calls `visit` once per grid line parallel to `axis`, passing a map
    /// from position along the line to the flat node index.
    fn for_each_line<F>(&self, axis: Axis, mut visit: F)
    where
        F: FnMut(&dyn Fn(usize) -> usize),
    {
        match axis {
            Axis::X1 => {
                for n in 0..self.n2 {
                    let n2 = self.n2;
                    visit(&move |m| m * n2 + n);
                }
            }
            Axis::X2 => {
                for m in 0..self.n1 {
                    let n2 = self.n2;
                    visit(&move |n| m * n2 + n);
                }
            }
        }
    }
}

/// Five-point first-derivative stencil for node `i` of a line of `n` nodes.
/// Returns the first node of the window and the weights (to be divided by `h`).
fn stencil<S: Scalar>(i: usize, n: usize) -> (usize, [S; 5]) {
    let (start, c): (usize, [f64; 5]) = if i == 0 {
        (0, [-25.0, 48.0, -36.0, 16.0, -3.0])
    } else if i == 1 {
        (0, [-3.0, -10.0, 18.0, -6.0, 1.0])
    } else if i + 2 == n {
        (n - 5, [-1.0, 6.0, -18.0, 10.0, 3.0])
    } else if i + 1 == n {
        (n - 5, [3.0, -16.0, 36.0, -48.0, 25.0])
    } else {
        (i - 2, [1.0, -8.0, 0.0, 8.0, -1.0])
    };
    let twelfth = S::one() / S::lit(12.0);
    (start, c.map(|v| S::lit(v) * twelfth))
}

/// A quaternion value per grid node, row-major with `x2` varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct QField<S> {
    grid: Grid2D<S>,
    values: Vec<Quaternion<S>>,
}

impl<S: Scalar> QField<S> {
    pub fn new(grid: Grid2D<S>, values: Vec<Quaternion<S>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::BadGrid(format!(
                "{} values for a {}x{} grid",
                values.len(),
                grid.n1(),
                grid.n2()
            )));
        }
        if let Some(pos) = values.iter().position(|q| !q.is_finite()) {
            return Err(Error::NonFinite {
                m: pos / grid.n2(),
                n: pos % grid.n2(),
            });
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: Grid2D<S>) -> Self {
        Self {
            values: vec![Quaternion::zero(); grid.len()],
            grid,
        }
    }

    /// Evaluates `f(x1, x2)` on every node.
    pub fn sample<F>(grid: Grid2D<S>, mut f: F) -> Result<Self>
    where
        F: FnMut(S, S) -> Quaternion<S>,
    {
        let x1 = grid.coords(Axis::X1);
        let x2 = grid.coords(Axis::X2);
        let mut values = Vec::with_capacity(grid.len());
        for &a in &x1 {
            for &b in &x2 {
                values.push(f(a, b));
            }
        }
        Self::new(grid, values)
    }

    /// Builds a field from values already known to be finite.
    pub(crate) fn from_raw(grid: Grid2D<S>, values: Vec<Quaternion<S>>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    #[inline]
    pub fn grid(&self) -> &Grid2D<S> {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[Quaternion<S>] {
        &self.values
    }

    #[inline]
    pub fn get(&self, m: usize, n: usize) -> Quaternion<S> {
        self.values[self.grid.index(m, n)]
    }

    pub fn into_values(self) -> Vec<Quaternion<S>> {
        self.values
    }

    pub fn map<F>(&self, f: F) -> Self
    where
        F: FnMut(&Quaternion<S>) -> Quaternion<S>,
    {
        Self::from_raw(self.grid, self.values.iter().map(f).collect())
    }

    /// Applies `f(x1, x2, value)` node by node.
    pub fn map_with_coords<F>(&self, mut f: F) -> Self
    where
        F: FnMut(S, S, Quaternion<S>) -> Quaternion<S>,
    {
        let x1 = self.grid.coords(Axis::X1);
        let x2 = self.grid.coords(Axis::X2);
        let n2 = self.grid.n2();
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(idx, &q)| f(x1[idx / n2], x2[idx % n2], q))
            .collect();
        Self::from_raw(self.grid, values)
    }

    pub fn scale(&self, s: S) -> Self {
        self.map(|q| q.scale(s))
    }

    /// `x_k f(x)`.
    pub fn times_coord(&self, axis: Axis) -> Self {
        self.map_with_coords(|x1, x2, q| {
            q.scale(match axis {
                Axis::X1 => x1,
                Axis::X2 => x2,
            })
        })
    }

    /// Node-wise `a * self + b * other`.
    pub fn lin_comb(&self, a: S, other: &Self, b: S) -> Result<Self> {
        self.check_grid(other)?;
        Ok(Self::from_raw(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&p, &q)| p.scale(a) + q.scale(b))
                .collect(),
        ))
    }

    /// Largest absolute component difference over all nodes.
    pub fn max_abs_diff(&self, other: &Self) -> Result<S> {
        self.check_grid(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&p, &q)| p.max_abs_diff(q))
            .fold(S::zero(), S::max))
    }

    pub fn max_abs(&self) -> S {
        self.values
            .iter()
            .map(|q| q.q0.abs().max(q.q1.abs()).max(q.q2.abs()).max(q.q3.abs()))
            .fold(S::zero(), S::max)
    }

    fn check_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(())
    }

    /// `|f|^2` per node.
    pub fn modulus_sqr(&self) -> Vec<S> {
        self.values.iter().map(|q| q.norm_sqr()).collect()
    }

    /// `<f, g> = integral of f conj(g)`.
    pub fn inner(&self, other: &Self) -> Result<Quaternion<S>> {
        self.check_grid(other)?;
        let prod: Vec<Quaternion<S>> = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&p, &q)| p * q.conj())
            .collect();
        Ok(self.grid.integrate(&prod))
    }

    /// `sqrt(Sc <f, f>)`.
    pub fn l2_norm(&self) -> S {
        self.energy().sqrt()
    }

    /// `Sc <f, f>`, the squared L2 norm.
    pub fn energy(&self) -> S {
        self.grid.integrate(&self.modulus_sqr())
    }

    pub fn normalize(&self) -> Result<Self> {
        let norm = self.l2_norm();
        if !(norm > S::zero()) {
            return Err(Error::ZeroField);
        }
        Ok(self.map(|q| *q / norm))
    }

    /// Componentwise fourth-order partial derivative along `axis`.
    pub fn partial(&self, axis: Axis) -> Result<Self> {
        let d = self.grid.differentiate(&self.values, axis)?;
        Ok(Self::from_raw(self.grid, d))
    }

    pub fn polar(&self) -> PolarField<S> {
        PolarField::new(self)
    }

    /// Phase-derivative field `D_k = (d/dx_k e^{u theta}) e^{-u theta}`.
    ///
    /// Evaluated as the stencil derivative, at offset zero, of the pure
    /// quaternion `s -> ln(e^{u theta}(x + s e_k) e^{-u theta}(x))`. That
    /// curve vanishes at `s = 0` and its slope there is exactly `D_k`, but it
    /// stays smooth (polynomial for polynomial phases) where `e^{u theta}`
    /// itself oscillates, so the stencil error no longer grows with the
    /// local frequency. Unmasked nodes yield zero.
    pub fn phase_derivative(&self, axis: Axis) -> Result<Self> {
        self.polar().phase_derivative(axis)
    }

    /// Phase-derivative field by direct differentiation of the unit phase,
    /// `partial(e^{u theta}) * conj(e^{u theta})`. Kept as an independent
    /// route to cross-check [`QField::phase_derivative`].
    pub fn phase_derivative_product(&self, axis: Axis) -> Result<Self> {
        self.polar().phase_derivative_product(axis)
    }
}

/// Per-node polar decomposition of a [`QField`].
#[derive(Debug, Clone)]
pub struct PolarField<S> {
    grid: Grid2D<S>,
    rho: Vec<S>,
    theta: Vec<S>,
    axis: Vec<Option<Quaternion<S>>>,
    /// Unit phase `f / rho` on masked nodes, `1` elsewhere.
    unit: Vec<Quaternion<S>>,
    /// Unit phase wherever it is numerically defined, for stencils.
    source: Vec<Option<Quaternion<S>>>,
    mask: Vec<bool>,
    rho_floor: S,
}

impl<S: Scalar> PolarField<S> {
    pub fn new(f: &QField<S>) -> Self {
        let polar: Vec<_> = f.values().iter().map(|q| q.polar()).collect();
        let rho: Vec<S> = polar.iter().map(|p| p.rho).collect();
        let rho_max = rho.iter().copied().fold(S::zero(), S::max);
        let rho_floor = S::lit(RHO_FLOOR_REL) * rho_max;
        let mask: Vec<bool> = rho
            .iter()
            .map(|&r| r > S::zero() && r >= rho_floor)
            .collect();
        let unit = f
            .values()
            .iter()
            .zip(&rho)
            .zip(&mask)
            .map(|((&q, &r), &keep)| if keep { q / r } else { Quaternion::one() })
            .collect();
        let tiny = S::min_positive_value() / S::epsilon();
        let source = f
            .values()
            .iter()
            .zip(&rho)
            .map(|(&q, &r)| {
                let u = q / r;
                (r >= tiny && u.is_finite()).then_some(u)
            })
            .collect();
        Self {
            grid: *f.grid(),
            theta: polar.iter().map(|p| p.theta).collect(),
            axis: polar.iter().map(|p| p.axis).collect(),
            rho,
            unit,
            source,
            mask,
            rho_floor,
        }
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
    pub fn theta(&self) -> &[S] {
        &self.theta
    }

    /// Unit pure axis per node; `None` where the vector part vanishes.
    #[inline]
    pub fn axis(&self) -> &[Option<Quaternion<S>>] {
        &self.axis
    }

    #[inline]
    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    #[inline]
    pub fn rho_floor(&self) -> S {
        self.rho_floor
    }

    /// Unit phase field `e^{u theta}` (identity on unmasked nodes).
    #[inline]
    pub fn unit_phase(&self) -> &[Quaternion<S>] {
        &self.unit
    }

    /// `rho e^{u theta}` per node.
    pub fn reconstruct(&self) -> QField<S> {
        let values = self
            .rho
            .iter()
            .zip(&self.theta)
            .zip(&self.axis)
            .map(|((&rho, &theta), &axis)| {
                crate::quat::PolarQuat { rho, axis, theta }.reconstruct()
            })
            .collect();
        QField::from_raw(self.grid, values)
    }

    /// Unit phase along each line, with nodes where it is undefined
    /// (`rho` zero or subnormal) filled from the nearest defined neighbour.
    fn extended_phase(&self, axis: Axis) -> Vec<Quaternion<S>> {
        let mut out: Vec<_> = self
            .source
            .iter()
            .map(|u| u.unwrap_or(Quaternion::one()))
            .collect();
        let n = self.grid.count(axis);
        let mut positions = Vec::with_capacity(n);
        self.grid.for_each_line(axis, |line| {
            positions.clear();
            positions.extend((0..n).filter(|&i| self.source[line(i)].is_some()));
            if positions.is_empty() || positions.len() == n {
                return;
            }
            let mut next = 0;
            for i in 0..n {
                if self.source[line(i)].is_some() {
                    continue;
                }
                while next + 1 < positions.len() && positions[next + 1] <= i {
                    next += 1;
                }
                let mut best = positions[next];
                if let Some(&after) = positions.get(next + 1) {
                    if after.abs_diff(i) < best.abs_diff(i) {
                        best = after;
                    }
                }
                out[line(i)] = out[line(best)];
            }
        });
        out
    }

    pub fn phase_derivative(&self, axis: Axis) -> Result<QField<S>> {
        self.phase_derivative_with(axis, |here, there| (there * here.conj()).ln())
    }

    pub fn phase_derivative_product(&self, axis: Axis) -> Result<QField<S>> {
        let n = self.grid.count(axis);
        if n < MIN_STENCIL_NODES {
            return Err(Error::GridTooSmall(format!(
                "phase derivative along {axis:?} needs {MIN_STENCIL_NODES} nodes"
            )));
        }
        let phase = self.extended_phase(axis);
        let d = self.grid.differentiate(&phase, axis)?;
        let values = d
            .iter()
            .zip(&phase)
            .zip(&self.mask)
            .map(|((&dq, &e), &keep)| {
                if keep {
                    dq * e.conj()
                } else {
                    Quaternion::zero()
                }
            })
            .collect();
        Ok(QField::from_raw(self.grid, values))
    }

    /// Stencil derivative at offset zero of `s -> rel(e(x), e(x + s))`.
    fn phase_derivative_with<F>(&self, axis: Axis, rel: F) -> Result<QField<S>>
    where
        F: Fn(Quaternion<S>, Quaternion<S>) -> Quaternion<S>,
    {
        let n = self.grid.count(axis);
        if n < MIN_STENCIL_NODES {
            return Err(Error::GridTooSmall(format!(
                "phase derivative along {axis:?} needs {MIN_STENCIL_NODES} nodes"
            )));
        }
        let phase = self.extended_phase(axis);
        let inv_h = S::one() / self.grid.spacing(axis);
        let mut out = vec![Quaternion::zero(); self.grid.len()];
        self.grid.for_each_line(axis, |line| {
            for i in 0..n {
                let here = line(i);
                if !self.mask[here] {
                    continue;
                }
                let (start, c) = stencil::<S>(i, n);
                let mut acc = Quaternion::zero();
                for (j, &cj) in c.iter().enumerate() {
                    if cj != S::zero() {
                        acc += rel(phase[here], phase[line(start + j)]) * cj;
                    }
                }
                out[here] = acc * inv_h;
            }
        });
        Ok(QField::from_raw(self.grid, out))
    }
}
