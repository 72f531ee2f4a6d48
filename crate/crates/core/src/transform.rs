//! Two-sided quaternion fractional Fourier transform.
//!
//! `F(w) = ∫ K_{a1}(x1, w1) f(x) K_{a2}(x2, w2) dx`, where `K_{a1}` lives in
//! the complex plane spanned by `{1, i}` and multiplies from the left, and
//! `K_{a2}` lives in `{1, j}` and multiplies from the right.
//!
//! [`qfrft`] is the reference: direct trapezoid quadrature in quaternion
//! arithmetic, accumulated separably. [`qfrft_fast`] evaluates the same sums
//! as two passes of complex chirp-z transforms.

use std::sync::Arc;

use num_complex::Complex;
use num_traits::Zero;
use rustfft::{Fft, FftPlanner};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Axis, Grid2D, QField};
use crate::quat::Quaternion;
use crate::scalar::{pairwise_sum, Scalar};

/// Orders with `|sin a| < SIN_FLOOR` are rejected as degenerate.
pub const SIN_FLOOR: f64 = 1e-6;

/// Largest per-axis node count accepted by [`qfrft_naive`].
pub const NAIVE_MAX_NODES: usize = 32;

/// Agreement required between the fast path and the reference quadrature.
pub const FAST_TOL: f64 = 1e-8;

/// Pair of transform angles `(alpha1, alpha2)` in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransformOrder<S> {
    alpha1: S,
    alpha2: S,
}

impl<S: Scalar> TransformOrder<S> {
    pub fn new(alpha1: S, alpha2: S) -> Result<Self> {
        check_alpha(alpha1)?;
        check_alpha(alpha2)?;
        Ok(Self { alpha1, alpha2 })
    }

    /// Same angle on both axes.
    pub fn uniform(alpha: S) -> Result<Self> {
        Self::new(alpha, alpha)
    }

    /// The quaternion Fourier transform order `(pi/2, pi/2)`.
    pub fn qft() -> Self {
        Self {
            alpha1: S::FRAC_PI_2(),
            alpha2: S::FRAC_PI_2(),
        }
    }

    #[inline]
    pub fn alpha1(&self) -> S {
        self.alpha1
    }

    #[inline]
    pub fn alpha2(&self) -> S {
        self.alpha2
    }

    #[inline]
    pub fn alpha(&self, axis: Axis) -> S {
        match axis {
            Axis::X1 => self.alpha1,
            Axis::X2 => self.alpha2,
        }
    }

    /// Fractional power `p = 2 alpha / pi` along `axis`.
    pub fn p(&self, axis: Axis) -> S {
        S::lit(2.0) * self.alpha(axis) / S::PI()
    }

    pub fn sin(&self, axis: Axis) -> S {
        self.alpha(axis).sin()
    }

    pub fn cos(&self, axis: Axis) -> S {
        self.alpha(axis).cos()
    }

    /// Order of the inverse transform, `(-alpha1, -alpha2)`.
    pub fn inverse(&self) -> Self {
        Self {
            alpha1: -self.alpha1,
            alpha2: -self.alpha2,
        }
    }
}

fn check_alpha<S: Scalar>(alpha: S) -> Result<()> {
    let sin_abs = alpha.sin().abs();
    if !alpha.is_finite() || !(sin_abs >= S::lit(SIN_FLOOR)) {
        return Err(Error::DegenerateOrder {
            alpha: alpha.to_f64_lossy(),
            sin_abs: sin_abs.to_f64_lossy(),
        });
    }
    Ok(())
}

/// Kernel constant `C_a = sqrt((1 - e cot a) / 2pi)`, principal branch, as a
/// complex number in the `{1, e}` plane.
fn kernel_constant<S: Scalar>(alpha: S) -> Complex<S> {
    let two_pi = S::TAU();
    let cot = alpha.cos() / alpha.sin();
    Complex::new(S::one() / two_pi, -cot / two_pi).sqrt()
}

/// Scalar fractional kernel `C_a e^{e((x^2 + w^2)/2 cot a - x w csc a)}`.
fn kernel_complex<S: Scalar>(alpha: S, x: S, w: S) -> Complex<S> {
    let (s, c) = alpha.sin_cos();
    let phase = (x * x + w * w) / S::lit(2.0) * (c / s) - x * w / s;
    kernel_constant(alpha) * Complex::from_polar(S::one(), phase)
}

/// Places `z = a + b e` into the quaternion plane of `axis` (`e = i` or `j`).
#[inline]
fn embed<S: Scalar>(z: Complex<S>, axis: Axis) -> Quaternion<S> {
    match axis {
        Axis::X1 => Quaternion::new(z.re, z.im, S::zero(), S::zero()),
        Axis::X2 => Quaternion::new(z.re, S::zero(), z.im, S::zero()),
    }
}

/// Transform kernel `K_alpha(x, w)` for `axis`.
pub fn kernel<S: Scalar>(alpha: S, x: S, w: S, axis: Axis) -> Result<Quaternion<S>> {
    check_alpha(alpha)?;
    Ok(embed(kernel_complex(alpha, x, w), axis))
}

/// Warns when the kernel phase advances by more than `pi/2` per grid step at
/// the edge of the domain.
fn check_resolution<S: Scalar>(order: &TransformOrder<S>, grid: &Grid2D<S>) {
    for axis in Axis::BOTH {
        let step = grid.max_abs_coord(axis) * grid.spacing(axis) / order.sin(axis).abs();
        if step > S::FRAC_PI_2() {
            log::warn!(
                "kernel along x{} under-resolved: phase step {} rad at the domain edge (alpha = {})",
                axis.number(),
                step,
                order.alpha(axis)
            );
        }
    }
}

/// Direct separable quadrature `sum_m sum_n K1[p][m] f[m][n] K2[q][n]`.
fn direct<S, K1, K2>(f: &QField<S>, out: &Grid2D<S>, k1: K1, k2: K2) -> QField<S>
where
    S: Scalar,
    K1: Fn(S, S) -> Complex<S>,
    K2: Fn(S, S) -> Complex<S>,
{
    let g = f.grid();
    let (n1, n2) = (g.n1(), g.n2());
    let (p1, p2) = (out.n1(), out.n2());
    let table = |k: &dyn Fn(S, S) -> Complex<S>, axis: Axis| -> Vec<Quaternion<S>> {
        let x = g.coords(axis);
        let wt = g.weights(axis);
        let w = out.coords(axis);
        let mut t = Vec::with_capacity(w.len() * x.len());
        for &wp in &w {
            for (&xm, &wm) in x.iter().zip(&wt) {
                t.push(embed(k(xm, wp) * wm, axis));
            }
        }
        t
    };
    let t1 = table(&k1, Axis::X1);
    let t2 = table(&k2, Axis::X2);

    let values = f.values();
    let mut mid = vec![Quaternion::zero(); p1 * n2];
    let mut terms = Vec::with_capacity(n1.max(n2));
    for p in 0..p1 {
        let row = &t1[p * n1..(p + 1) * n1];
        for n in 0..n2 {
            terms.clear();
            terms.extend((0..n1).map(|m| row[m] * values[m * n2 + n]));
            mid[p * n2 + n] = pairwise_sum(&terms);
        }
    }
    let mut result = Vec::with_capacity(p1 * p2);
    for p in 0..p1 {
        let g_row = &mid[p * n2..(p + 1) * n2];
        for q in 0..p2 {
            let k_row = &t2[q * n2..(q + 1) * n2];
            terms.clear();
            terms.extend(g_row.iter().zip(k_row).map(|(&a, &b)| a * b));
            result.push(pairwise_sum(&terms));
        }
    }
    QField::from_raw(*out, result)
}

/// Reference two-sided QFrFT by direct quadrature on every node of `out`.
pub fn qfrft<S: Scalar>(
    f: &QField<S>,
    order: &TransformOrder<S>,
    out: &Grid2D<S>,
) -> Result<QField<S>> {
    check_resolution(order, f.grid());
    let (a1, a2) = (order.alpha1, order.alpha2);
    Ok(direct(
        f,
        out,
        |x, w| kernel_complex(a1, x, w),
        |x, w| kernel_complex(a2, x, w),
    ))
}

/// Inverse transform: the forward transform at order `(-alpha1, -alpha2)`.
pub fn iqfrft<S: Scalar>(
    big_f: &QField<S>,
    order: &TransformOrder<S>,
    out: &Grid2D<S>,
) -> Result<QField<S>> {
    qfrft(big_f, &order.inverse(), out)
}

/// Two-sided quaternion Fourier transform with kernels `e^{-i x1 w1}/sqrt(2pi)`
/// on the left and `e^{-j x2 w2}/sqrt(2pi)` on the right.
pub fn qft<S: Scalar>(f: &QField<S>, out: &Grid2D<S>) -> Result<QField<S>> {
    let c = S::one() / S::TAU().sqrt();
    let k = move |x: S, w: S| Complex::from_polar(c, -x * w);
    Ok(direct(f, out, k, k))
}

/// Fully naive four-fold quadrature, one 2D trapezoid sum per output node.
/// Restricted to grids of at most [`NAIVE_MAX_NODES`] nodes per axis.
pub fn qfrft_naive<S: Scalar>(
    f: &QField<S>,
    order: &TransformOrder<S>,
    out: &Grid2D<S>,
) -> Result<QField<S>> {
    for n in [f.grid().n1(), f.grid().n2(), out.n1(), out.n2()] {
        if n > NAIVE_MAX_NODES {
            return Err(Error::GridTooLarge {
                n,
                max: NAIVE_MAX_NODES,
            });
        }
    }
    let g = f.grid();
    let x1 = g.coords(Axis::X1);
    let x2 = g.coords(Axis::X2);
    let mut result = Vec::with_capacity(out.len());
    let mut terms = vec![Quaternion::zero(); g.len()];
    for w1 in out.coords(Axis::X1) {
        for w2 in out.coords(Axis::X2) {
            for (m, &a) in x1.iter().enumerate() {
                let left = kernel(order.alpha1, a, w1, Axis::X1)?;
                for (n, &b) in x2.iter().enumerate() {
                    let right = kernel(order.alpha2, b, w2, Axis::X2)?;
                    terms[g.index(m, n)] = left * f.get(m, n) * right;
                }
            }
            result.push(g.integrate(&terms));
        }
    }
    Ok(QField::from_raw(*out, result))
}

/// Reference quadrature evaluated at a single output point.
pub fn qfrft_at<S: Scalar>(
    f: &QField<S>,
    order: &TransformOrder<S>,
    w1: S,
    w2: S,
) -> Quaternion<S> {
    let g = f.grid();
    let x1 = g.coords(Axis::X1);
    let x2 = g.coords(Axis::X2);
    let wt1 = g.weights(Axis::X1);
    let wt2 = g.weights(Axis::X2);
    let right: Vec<Quaternion<S>> = x2
        .iter()
        .zip(&wt2)
        .map(|(&b, &w)| embed(kernel_complex(order.alpha2, b, w2) * w, Axis::X2))
        .collect();
    let mut inner = Vec::with_capacity(g.n2());
    let outer: Vec<Quaternion<S>> = x1
        .iter()
        .zip(&wt1)
        .enumerate()
        .map(|(m, (&a, &w))| {
            inner.clear();
            inner.extend((0..g.n2()).map(|n| f.get(m, n) * right[n]));
            embed(kernel_complex(order.alpha1, a, w1) * w, Axis::X1) * pairwise_sum(&inner)
        })
        .collect();
    pairwise_sum(&outer)
}

/// One-dimensional fractional transform between two uniform node sets,
/// evaluated as a chirp-z convolution.
///
/// `out_p = C sum_m wt_m e^{e((x_m^2 + w_p^2)/2 cot - x_m w_p csc)} a_m`, with
/// `x_m w_p` split so that only `(p - m)^2` couples the two indices.
struct ChirpPlan<S: Scalar> {
    m: usize,
    p: usize,
    len: usize,
    pre: Vec<Complex<S>>,
    post: Vec<Complex<S>>,
    chirp_hat: Vec<Complex<S>>,
    fft: Arc<dyn Fft<S>>,
    ifft: Arc<dyn Fft<S>>,
}

impl<S: Scalar> ChirpPlan<S> {
    fn new(
        alpha: S,
        src: &Grid2D<S>,
        dst: &Grid2D<S>,
        axis: Axis,
        planner: &mut FftPlanner<S>,
    ) -> Self {
        let m = src.count(axis);
        let p = dst.count(axis);
        let len = (m + p - 1).next_power_of_two();
        let (x0, _) = src.bounds(axis);
        let (w0, _) = dst.bounds(axis);
        let h = src.spacing(axis);
        let dw = dst.spacing(axis);
        let (s, c) = alpha.sin_cos();
        let cot = c / s;
        let csc = S::one() / s;
        let gamma = csc * h * dw;
        let half = S::lit(0.5);

        let wt = src.weights(axis);
        let pre = (0..m)
            .map(|i| {
                let fi = S::from_index(i);
                let x = src.coord(axis, i);
                let phase = x * x * half * cot - csc * fi * h * w0 - gamma * fi * fi * half;
                Complex::from_polar(wt[i], phase)
            })
            .collect();
        let cst = kernel_constant(alpha);
        let post = (0..p)
            .map(|i| {
                let fi = S::from_index(i);
                let w = dst.coord(axis, i);
                let phase = w * w * half * cot
                    - csc * x0 * fi * dw
                    - csc * x0 * w0
                    - gamma * fi * fi * half;
                cst * Complex::from_polar(S::one(), phase)
            })
            .collect();

        let fft = planner.plan_fft_forward(len);
        let ifft = planner.plan_fft_inverse(len);
        let mut chirp_hat = vec![Complex::new(S::zero(), S::zero()); len];
        let chirp = |k: usize| {
            let fk = S::from_index(k);
            Complex::from_polar(S::one(), gamma * fk * fk * half)
        };
        for (k, slot) in chirp_hat.iter_mut().enumerate().take(p) {
            *slot = chirp(k);
        }
        for k in 1..m {
            chirp_hat[len - k] = chirp(k);
        }
        fft.process(&mut chirp_hat);
        let scale = S::one() / S::from_index(len);
        for z in chirp_hat.iter_mut() {
            *z = *z * scale;
        }
        Self {
            m,
            p,
            len,
            pre,
            post,
            chirp_hat,
            fft,
            ifft,
        }
    }

    /// Transforms `input` (length `m`) into `out` (length `p`).
    fn apply(&self, input: &[Complex<S>], out: &mut [Complex<S>], buf: &mut Vec<Complex<S>>) {
        debug_assert_eq!(input.len(), self.m);
        debug_assert_eq!(out.len(), self.p);
        buf.clear();
        buf.extend(input.iter().zip(&self.pre).map(|(&a, &b)| a * b));
        buf.resize(self.len, Complex::new(S::zero(), S::zero()));
        self.fft.process(buf);
        for (z, &k) in buf.iter_mut().zip(&self.chirp_hat) {
            *z = *z * k;
        }
        self.ifft.process(buf);
        for ((o, &z), &post) in out.iter_mut().zip(buf.iter()).zip(&self.post) {
            *o = z * post;
        }
    }
}

/// Separable fast evaluation of [`qfrft`].
///
/// The left pass writes each column as `(f0 + i f1) + (f2 + i f3) j` and runs
/// a complex 1D transform on both `i`-planes along `x1`. The right pass writes
/// each intermediate row as `(g0 + j g2) + i (g1 + j g3)` and transforms both
/// `j`-planes along `x2`.
pub fn qfrft_fast<S: Scalar>(
    f: &QField<S>,
    order: &TransformOrder<S>,
    out: &Grid2D<S>,
) -> Result<QField<S>> {
    check_resolution(order, f.grid());
    let g = f.grid();
    let mut planner = FftPlanner::new();
    let plan1 = ChirpPlan::new(order.alpha1, g, out, Axis::X1, &mut planner);
    let plan2 = ChirpPlan::new(order.alpha2, g, out, Axis::X2, &mut planner);
    let (n1, n2) = (g.n1(), g.n2());
    let (p1, p2) = (out.n1(), out.n2());
    let zero = Complex::new(S::zero(), S::zero());
    let mut buf = Vec::with_capacity(plan1.len.max(plan2.len));

    let values = f.values();
    let mut mid = vec![Quaternion::zero(); p1 * n2];
    let (mut a, mut b) = (vec![zero; n1], vec![zero; n1]);
    let (mut ao, mut bo) = (vec![zero; p1], vec![zero; p1]);
    for n in 0..n2 {
        for m in 0..n1 {
            let q = values[m * n2 + n];
            a[m] = Complex::new(q.q0, q.q1);
            b[m] = Complex::new(q.q2, q.q3);
        }
        plan1.apply(&a, &mut ao, &mut buf);
        plan1.apply(&b, &mut bo, &mut buf);
        for p in 0..p1 {
            mid[p * n2 + n] = Quaternion::new(ao[p].re, ao[p].im, bo[p].re, bo[p].im);
        }
    }

    let mut result = vec![Quaternion::zero(); p1 * p2];
    let (mut pc, mut qc) = (vec![zero; n2], vec![zero; n2]);
    let (mut po, mut qo) = (vec![zero; p2], vec![zero; p2]);
    for p in 0..p1 {
        for n in 0..n2 {
            let q = mid[p * n2 + n];
            pc[n] = Complex::new(q.q0, q.q2);
            qc[n] = Complex::new(q.q1, q.q3);
        }
        plan2.apply(&pc, &mut po, &mut buf);
        plan2.apply(&qc, &mut qo, &mut buf);
        for q in 0..p2 {
            result[p * p2 + q] = Quaternion::new(po[q].re, qo[q].re, po[q].im, qo[q].im);
        }
    }
    QField::new(*out, result)
}

/// Fast inverse transform.
pub fn iqfrft_fast<S: Scalar>(
    big_f: &QField<S>,
    order: &TransformOrder<S>,
    out: &Grid2D<S>,
) -> Result<QField<S>> {
    qfrft_fast(big_f, &order.inverse(), out)
}

/// Compares `fast` against the reference quadrature at a spread of output
/// nodes and returns the largest component deviation.
pub fn spot_check<S: Scalar>(
    f: &QField<S>,
    order: &TransformOrder<S>,
    fast: &QField<S>,
    samples_per_axis: usize,
) -> S {
    let out = fast.grid();
    let pick = |n: usize| -> Vec<usize> {
        match samples_per_axis.min(n) {
            0 | 1 => vec![n / 2],
            k => (0..k).map(|i| i * (n - 1) / (k - 1)).collect(),
        }
    };
    let mut worst = S::zero();
    for &p in &pick(out.n1()) {
        for &q in &pick(out.n2()) {
            let exact = qfrft_at(f, order, out.coord(Axis::X1, p), out.coord(Axis::X2, q));
            worst = worst.max(exact.max_abs_diff(fast.get(p, q)));
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    type Q = Quaternion<f64>;

    fn smooth_field(n: usize, extent: f64) -> QField<f64> {
        let g = Grid2D::<f64>::symmetric(n, n, extent).unwrap();
        QField::sample(g, |x1, x2| {
            let env = (-(x1 * x1 + 0.7 * x2 * x2) / 2.0).exp();
            Q::exp_of_pure(Q::pure(0.3, -0.5, 0.2) * (0.8 * x1 - 0.4 * x2 + 0.2 * x1 * x2))
                * Q::new(1.0, 0.2, -0.1, 0.3)
                * env
        })
        .unwrap()
    }

    #[test]
    fn kernel_examples() {
        let s = 1.0 / (2.0 * PI).sqrt();
        let k = kernel(FRAC_PI_2, 0.7, -1.3, Axis::X1).unwrap();
        let (sn, cs) = (0.7f64 * 1.3).sin_cos();
        assert!(k.max_abs_diff(Q::new(cs * s, sn * s, 0.0, 0.0)) <= 1e-15);
        let k = kernel(FRAC_PI_2, 0.0, 0.0, Axis::X2).unwrap();
        assert!(k.max_abs_diff(Q::from_real(s)) <= 1e-15);

        let k = kernel(FRAC_PI_4, 1.0, 1.0, Axis::X1).unwrap();
        assert_abs_diff_eq!(k.norm(), s * 2f64.powf(0.25), epsilon = 1e-15);
        let c = kernel_constant(FRAC_PI_4);
        let (sn, cs) = (1.0 - 2f64.sqrt()).sin_cos();
        let expect = c * Complex::new(cs, sn);
        assert!(k.max_abs_diff(embed(expect, Axis::X1)) <= 1e-15);
        assert!(c.re >= 0.0);
        assert_eq!(k.q2, 0.0);
        assert_eq!(kernel(FRAC_PI_4, 1.0, 1.0, Axis::X2).unwrap().q1, 0.0);

        for alpha in [0.0, PI, -PI, 1e-7] {
            assert!(matches!(
                kernel(alpha, 0.0, 0.0, Axis::X1),
                Err(Error::DegenerateOrder { .. })
            ));
        }
        assert!(TransformOrder::new(0.0, 1.0).is_err());
        assert!(TransformOrder::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn kernel_constant_modulus() {
        for alpha in [0.3, 1.0, FRAC_PI_2, 2.5, -0.8, -2.0] {
            let c = kernel_constant(alpha);
            assert_abs_diff_eq!(
                c.norm(),
                (1.0 / alpha.sin().abs() / (2.0 * PI)).sqrt(),
                epsilon = 1e-14
            );
            assert!(c.re >= 0.0);
        }
    }

    #[test]
    fn direct_matches_naive() {
        let f = smooth_field(24, 4.0);
        let out = Grid2D::new(20, 22, (-3.0, 3.5), (-2.5, 3.0)).unwrap();
        let order = TransformOrder::new(1.1, -0.6).unwrap();
        let a = qfrft(&f, &order, &out).unwrap();
        let b = qfrft_naive(&f, &order, &out).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() <= 1e-13);

        let big = smooth_field(33, 4.0);
        assert!(matches!(
            qfrft_naive(&big, &order, big.grid()),
            Err(Error::GridTooLarge { n: 33, .. })
        ));
    }

    #[test]
    fn qft_reduction() {
        let f = smooth_field(65, 6.0);
        let a = qfrft(&f, &TransformOrder::qft(), f.grid()).unwrap();
        let b = qft(&f, f.grid()).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() <= 1e-12);
    }

    #[test]
    fn gaussian_is_qft_eigenfunction() {
        let g = Grid2D::<f64>::symmetric(257, 257, 8.0).unwrap();
        let f =
            QField::sample(g, |x1, x2| Q::from_real((-(x1 * x1 + x2 * x2) / 2.0).exp())).unwrap();
        let big_f = qfrft_fast(&f, &TransformOrder::qft(), &g).unwrap();
        assert!(big_f.max_abs_diff(&f).unwrap() <= 1e-6);
        let direct = qft(&f, &g).unwrap();
        assert!(direct.max_abs_diff(&f).unwrap() <= 1e-6);
        let vec_max = direct
            .values()
            .iter()
            .map(|q| q.vector_norm())
            .fold(0.0, f64::max);
        assert!(vec_max <= 1e-8);
    }

    #[test]
    fn fast_matches_reference() {
        let f = smooth_field(129, 8.0);
        for (a1, a2) in [
            (1.2, 0.7),
            (FRAC_PI_2, FRAC_PI_2),
            (-0.4, 2.9),
            (2.0 * PI / 3.0, PI / 6.0),
        ] {
            let order = TransformOrder::new(a1, a2).unwrap();
            let a = qfrft(&f, &order, f.grid()).unwrap();
            let b = qfrft_fast(&f, &order, f.grid()).unwrap();
            assert!(a.max_abs_diff(&b).unwrap() <= 1e-8, "order ({a1}, {a2})");
        }
        // distinct output grid
        let out = Grid2D::new(100, 90, (-5.0, 6.0), (-7.0, 4.0)).unwrap();
        let order = TransformOrder::new(0.9, 1.7).unwrap();
        let a = qfrft(&f, &order, &out).unwrap();
        let b = qfrft_fast(&f, &order, &out).unwrap();
        assert!(a.max_abs_diff(&b).unwrap() <= 1e-8);
        assert!(spot_check(&f, &order, &b, 5) <= 1e-8);
    }

    #[test]
    fn zero_field_maps_to_zero() {
        let g = Grid2D::<f64>::symmetric(17, 17, 3.0).unwrap();
        let z = QField::zeros(g);
        let order = TransformOrder::new(0.8, 1.3).unwrap();
        assert_eq!(qfrft_fast(&z, &order, &g).unwrap().max_abs(), 0.0);
        assert_eq!(iqfrft(&z, &order, &g).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn round_trip_and_parseval() {
        let f = smooth_field(257, 8.0).normalize().unwrap();
        for (a1, a2) in [(PI / 6.0, 2.0 * PI / 3.0), (FRAC_PI_4, FRAC_PI_2)] {
            let order = TransformOrder::new(a1, a2).unwrap();
            let big_f = qfrft_fast(&f, &order, f.grid()).unwrap();
            assert_abs_diff_eq!(big_f.l2_norm(), 1.0, epsilon = 1e-4);
            let back = iqfrft_fast(&big_f, &order, f.grid()).unwrap();
            assert!(back.max_abs_diff(&f).unwrap() <= 1e-4);
        }
    }

    #[test]
    fn linearity_over_reals() {
        let f = smooth_field(65, 6.0);
        let g = f.map_with_coords(|x1, x2, q| q * Q::new(x2, 1.0, -x1, 0.5));
        let order = TransformOrder::new(0.9, 2.2).unwrap();
        let lhs = qfrft_fast(&f.lin_comb(2.5, &g, -0.75).unwrap(), &order, f.grid()).unwrap();
        let rhs = qfrft_fast(&f, &order, f.grid())
            .unwrap()
            .lin_comb(2.5, &qfrft_fast(&g, &order, f.grid()).unwrap(), -0.75)
            .unwrap();
        assert!(lhs.max_abs_diff(&rhs).unwrap() <= 1e-12);
    }

    #[test]
    fn order_accessors() {
        let o = TransformOrder::new(FRAC_PI_2, -FRAC_PI_4).unwrap();
        assert_abs_diff_eq!(o.p(Axis::X1), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(o.p(Axis::X2), -0.5, epsilon = 1e-15);
        assert_eq!(o.inverse().alpha2(), FRAC_PI_4);
    }
}
