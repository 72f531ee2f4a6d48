//! Left- and right-hand sides of the uncertainty inequalities, term by term.

use serde::Serialize;

use crate::error::Result;
use crate::field::{Axis, Grid2D, QField};
use crate::moments::{
    check_unit_energy, spectral_moment2_direct, ITerms, MomentSet, SpatialAnalysis,
};
use crate::scalar::Scalar;
use crate::transform::TransformOrder;

/// Relative slack tolerance: a bound passes when `slack >= -SLACK_TOL * max(1, lhs)`.
pub const SLACK_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TheoremId {
    /// Directional bound for one axis, absolute covariance.
    #[serde(rename = "Thm4.7")]
    Thm47,
    /// Directional bound, signed covariance.
    #[serde(rename = "Cor4.9")]
    Cor49,
    /// Spatial bound over both axes, absolute covariance.
    #[serde(rename = "Thm1.1")]
    Thm11,
    /// Spatial bound, signed covariance.
    #[serde(rename = "Cor4.10")]
    Cor410,
    /// Bound between two transform orders.
    #[serde(rename = "Thm1.2")]
    Thm12,
}

impl TheoremId {
    pub const ALL: [TheoremId; 5] = [
        TheoremId::Thm47,
        TheoremId::Cor49,
        TheoremId::Thm11,
        TheoremId::Cor410,
        TheoremId::Thm12,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::Thm47 => "Thm4.7",
            TheoremId::Cor49 => "Cor4.9",
            TheoremId::Thm11 => "Thm1.1",
            TheoremId::Cor410 => "Cor4.10",
            TheoremId::Thm12 => "Thm1.2",
        }
    }

    /// Short command-line name (`thm47`, `cor49`, ...).
    pub fn slug(self) -> &'static str {
        match self {
            TheoremId::Thm47 => "thm47",
            TheoremId::Cor49 => "cor49",
            TheoremId::Thm11 => "thm11",
            TheoremId::Cor410 => "cor410",
            TheoremId::Thm12 => "thm12",
        }
    }

    pub fn from_slug(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|t| t.slug() == s)
    }

    /// Whether the bound is stated per axis.
    pub fn per_axis(self) -> bool {
        matches!(self, TheoremId::Thm47 | TheoremId::Cor49)
    }
}

impl std::fmt::Display for TheoremId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One labelled summand of a right-hand side.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RhsTerm<S> {
    pub label: &'static str,
    /// `+1` or `-1`.
    pub sign: i8,
    pub value: S,
}

impl<S: Scalar> RhsTerm<S> {
    fn plus(label: &'static str, value: S) -> Self {
        Self {
            label,
            sign: 1,
            value,
        }
    }

    fn minus(label: &'static str, value: S) -> Self {
        Self {
            label,
            sign: -1,
            value,
        }
    }
}

/// Outcome of evaluating one inequality on one field.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport<S> {
    pub theorem_id: TheoremId,
    pub orders: Vec<TransformOrder<S>>,
    pub axis: Option<Axis>,
    pub lhs: S,
    pub rhs: S,
    pub slack: S,
    pub rhs_terms: Vec<RhsTerm<S>>,
    pub grid: Grid2D<S>,
}

impl<S: Scalar> BoundReport<S> {
    fn assemble(
        theorem_id: TheoremId,
        orders: Vec<TransformOrder<S>>,
        axis: Option<Axis>,
        lhs: S,
        rhs_terms: Vec<RhsTerm<S>>,
        grid: Grid2D<S>,
    ) -> Self {
        let rhs = sum_terms(&rhs_terms);
        Self {
            theorem_id,
            orders,
            axis,
            lhs,
            rhs,
            slack: lhs - rhs,
            rhs_terms,
            grid,
        }
    }

    /// Re-sums the signed terms in order; reproduces `rhs` exactly.
    pub fn resum(&self) -> S {
        sum_terms(&self.rhs_terms)
    }

    /// `SLACK_TOL * max(1, lhs)`.
    pub fn tol_slack(&self) -> S {
        S::lit(SLACK_TOL) * self.lhs.max(S::one())
    }

    pub fn passes(&self, tol_slack: S) -> bool {
        self.slack >= -tol_slack
    }

    /// `|slack| / lhs`.
    pub fn relative_slack(&self) -> S {
        self.slack.abs() / self.lhs
    }

    pub fn term(&self, label: &str) -> Option<&RhsTerm<S>> {
        self.rhs_terms.iter().find(|t| t.label == label)
    }
}

fn sum_terms<S: Scalar>(terms: &[RhsTerm<S>]) -> S {
    terms.iter().fold(S::zero(), |acc, t| {
        if t.sign < 0 {
            acc - t.value
        } else {
            acc + t.value
        }
    })
}

/// Evaluates bounds on one unit-energy field, sharing the spatial analysis
/// and caching transform-side moments per order.
pub struct BoundsEvaluator<'a, S: Scalar> {
    f: &'a QField<S>,
    analysis: SpatialAnalysis<S>,
    spectral: Vec<(TransformOrder<S>, MomentSet<S>)>,
}

impl<'a, S: Scalar> BoundsEvaluator<'a, S> {
    pub fn new(f: &'a QField<S>) -> Result<Self> {
        check_unit_energy(f)?;
        Ok(Self {
            f,
            analysis: SpatialAnalysis::new(f)?,
            spectral: Vec::new(),
        })
    }

    pub fn analysis(&self) -> &SpatialAnalysis<S> {
        &self.analysis
    }

    /// Transform-side moments at `order`, computed once.
    pub fn spectral(&mut self, order: &TransformOrder<S>) -> Result<MomentSet<S>> {
        if let Some((_, m)) = self.spectral.iter().find(|(o, _)| o == order) {
            return Ok(*m);
        }
        let m = spectral_moment2_direct(self.f, order)?;
        self.spectral.push((*order, m));
        Ok(m)
    }

    pub fn thm47(&mut self, order: &TransformOrder<S>, axis: Axis) -> Result<BoundReport<S>> {
        self.directional(TheoremId::Thm47, order, axis)
    }

    pub fn cor49(&mut self, order: &TransformOrder<S>, axis: Axis) -> Result<BoundReport<S>> {
        self.directional(TheoremId::Cor49, order, axis)
    }

    pub fn thm11(&mut self, order: &TransformOrder<S>) -> Result<BoundReport<S>> {
        self.spatial(TheoremId::Thm11, order)
    }

    pub fn cor410(&mut self, order: &TransformOrder<S>) -> Result<BoundReport<S>> {
        self.spatial(TheoremId::Cor410, order)
    }

    fn directional(
        &mut self,
        id: TheoremId,
        order: &TransformOrder<S>,
        axis: Axis,
    ) -> Result<BoundReport<S>> {
        let spectral = self.spectral(order)?.get(axis);
        let a = self.analysis.integrals(axis);
        let (s, c) = (order.sin(axis), order.cos(axis));
        let m = a.x2_rho2;
        let cov = match id {
            TheoremId::Thm47 => RhsTerm::plus("sin2_cov2", s * s * a.cov_abs * a.cov_abs),
            _ => RhsTerm::plus("sin2_abs_cov2", s * s * a.cov_signed.norm_sqr()),
        };
        let terms = vec![
            RhsTerm::plus("quarter_sin2", s * s / S::lit(4.0)),
            cov,
            RhsTerm::plus("cos2_moment2", c * c * m * m),
            RhsTerm::minus("sin_cos_moment_sc", S::lit(2.0) * s * c * m * a.sc),
        ];
        Ok(BoundReport::assemble(
            id,
            vec![*order],
            Some(axis),
            m * spectral,
            terms,
            *self.f.grid(),
        ))
    }

    fn spatial(&mut self, id: TheoremId, order: &TransformOrder<S>) -> Result<BoundReport<S>> {
        let spectral = self.spectral(order)?.total;
        let moments = self.analysis.spatial_moments();
        let cov = self.analysis.covariances(order);
        let (s1, s2) = (order.sin(Axis::X1), order.sin(Axis::X2));
        let mut cos_moment = S::zero();
        let mut sc = S::zero();
        for k in Axis::BOTH {
            let a = self.analysis.integrals(k);
            let (s, c) = (order.sin(k), order.cos(k));
            cos_moment = cos_moment + c * c * a.x2_rho2;
            sc = sc + S::lit(2.0) * s * c * a.sc;
        }
        let cov_term = match id {
            TheoremId::Thm11 => RhsTerm::plus("cov_alpha2", cov.cov_abs_alpha * cov.cov_abs_alpha),
            _ => RhsTerm::plus("abs_cov_alpha2", cov.cov_signed_alpha.norm_sqr()),
        };
        let terms = vec![
            RhsTerm::plus("quarter_sin_sum2", (s1 + s2) * (s1 + s2) / S::lit(4.0)),
            cov_term,
            RhsTerm::plus("moment_cos2_moment", moments.total * cos_moment),
            RhsTerm::minus("moment_sin_cos_sc", moments.total * sc),
        ];
        Ok(BoundReport::assemble(
            id,
            vec![*order],
            None,
            moments.total * spectral,
            terms,
            *self.f.grid(),
        ))
    }

    /// Bound between the transform moments at orders `a` and `b`: nine
    /// squared mixed integrals minus seven products of the `I` terms.
    pub fn thm12(
        &mut self,
        a: &TransformOrder<S>,
        b: &TransformOrder<S>,
    ) -> Result<BoundReport<S>> {
        let lhs = self.spectral(a)?.total * self.spectral(b)?.total;
        let i = ITerms::new(&self.analysis, a, b);
        let mix = |g: &dyn Fn(S, S, S, S, Axis) -> S| -> S {
            Axis::BOTH.iter().fold(S::zero(), |acc, &k| {
                acc + g(a.sin(k), a.cos(k), b.sin(k), b.cos(k), k)
            })
        };
        let it = |k: Axis| self.analysis.integrals(k);
        let quarter = S::lit(0.25);
        let sq = |v: S| v * v;
        let terms = vec![
            RhsTerm::plus("I1I5", sq(mix(&|sa, _, sb, _, k| sa * sb * it(k).drho2))),
            RhsTerm::plus("I1I6", quarter * sq(mix(&|sa, _, _, cb, _| sa * cb))),
            RhsTerm::plus(
                "I1I7",
                sq(mix(&|sa, _, sb, _, k| sa * sb * it(k).rho_drho_d)),
            ),
            RhsTerm::plus("I2I5", quarter * sq(mix(&|_, ca, sb, _, _| ca * sb))),
            RhsTerm::plus("I2I6", sq(mix(&|_, ca, _, cb, k| ca * cb * it(k).x2_rho2))),
            RhsTerm::plus("I2I7", sq(mix(&|_, ca, sb, _, k| ca * sb * it(k).x_rho2_d))),
            RhsTerm::plus(
                "I3I5",
                sq(mix(&|sa, _, sb, _, k| sa * sb * it(k).rho_drho_d)),
            ),
            RhsTerm::plus("I3I6", sq(mix(&|sa, _, _, cb, k| sa * cb * it(k).x_rho2_d))),
            RhsTerm::plus("I3I7", sq(mix(&|sa, _, sb, _, k| sa * sb * it(k).rho2_d2))),
            RhsTerm::minus("I1I8", i.i(1) * i.i(8)),
            RhsTerm::minus("I2I8", i.i(2) * i.i(8)),
            RhsTerm::minus("I3I8", i.i(3) * i.i(8)),
            RhsTerm::minus("I4I5", i.i(4) * i.i(5)),
            RhsTerm::minus("I4I6", i.i(4) * i.i(6)),
            RhsTerm::minus("I4I7", i.i(4) * i.i(7)),
            RhsTerm::minus("I4I8", i.i(4) * i.i(8)),
        ];
        Ok(BoundReport::assemble(
            TheoremId::Thm12,
            vec![*a, *b],
            None,
            lhs,
            terms,
            *self.f.grid(),
        ))
    }

    /// Dispatches on `id`. Per-axis theorems need `axis`; `Thm1.2` needs `second`.
    pub fn evaluate(
        &mut self,
        id: TheoremId,
        order: &TransformOrder<S>,
        second: Option<&TransformOrder<S>>,
        axis: Axis,
    ) -> Result<BoundReport<S>> {
        match id {
            TheoremId::Thm47 => self.thm47(order, axis),
            TheoremId::Cor49 => self.cor49(order, axis),
            TheoremId::Thm11 => self.thm11(order),
            TheoremId::Cor410 => self.cor410(order),
            TheoremId::Thm12 => self.thm12(order, second.unwrap_or(order)),
        }
    }
}

pub fn check_thm47<S: Scalar>(
    f: &QField<S>,
    order: &TransformOrder<S>,
    axis: Axis,
) -> Result<BoundReport<S>> {
    BoundsEvaluator::new(f)?.thm47(order, axis)
}

pub fn check_cor49<S: Scalar>(
    f: &QField<S>,
    order: &TransformOrder<S>,
    axis: Axis,
) -> Result<BoundReport<S>> {
    BoundsEvaluator::new(f)?.cor49(order, axis)
}

pub fn check_thm11<S: Scalar>(f: &QField<S>, order: &TransformOrder<S>) -> Result<BoundReport<S>> {
    BoundsEvaluator::new(f)?.thm11(order)
}

pub fn check_cor410<S: Scalar>(f: &QField<S>, order: &TransformOrder<S>) -> Result<BoundReport<S>> {
    BoundsEvaluator::new(f)?.cor410(order)
}

pub fn check_thm12<S: Scalar>(
    f: &QField<S>,
    a: &TransformOrder<S>,
    b: &TransformOrder<S>,
) -> Result<BoundReport<S>> {
    BoundsEvaluator::new(f)?.thm12(a, b)
}
