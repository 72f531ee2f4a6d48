//! Named property suites run over seeded random fields.

use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::field::{Axis, Grid2D, QField};
use crate::moments::{spectral_moment2_direct, SpatialAnalysis};
use crate::quat::Quaternion;
use crate::signals::{gaussian_mixture, random_field};
use crate::transform::{iqfrft_fast, qfrft_fast, TransformOrder};

/// Transform angles the suites sweep over, on each axis independently.
pub const ALPHA_SET: [f64; 4] = [PI / 6.0, PI / 4.0, PI / 2.0, 2.0 * PI / 3.0];

pub const PARSEVAL_TOL: f64 = 1e-4;
pub const INVERSE_TOL: f64 = 1e-4;
pub const DERIVATIVE_TOL: f64 = 1e-3;
pub const SCALAR_ZERO_TOL: f64 = 1e-8;
pub const MODULUS_SPLIT_TOL: f64 = 1e-6;
pub const PARTS_TOL: f64 = 1e-8;
pub const ENERGY_IDENTITY_TOL: f64 = 1e-4;
pub const THM45_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Parseval,
    Inverse,
    DerivativeIdentity,
    ScalarZero,
    ModulusSplit,
    PartsIdentity,
    Thm45,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Parseval,
        Suite::Inverse,
        Suite::DerivativeIdentity,
        Suite::ScalarZero,
        Suite::ModulusSplit,
        Suite::PartsIdentity,
        Suite::Thm45,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Parseval => "parseval",
            Suite::Inverse => "inverse",
            Suite::DerivativeIdentity => "derivative-identity",
            Suite::ScalarZero => "scalar-zero",
            Suite::ModulusSplit => "modulus-split",
            Suite::PartsIdentity => "parts-identity",
            Suite::Thm45 => "thm45",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|x| x.name() == s)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub n: usize,
    pub extent: f64,
    pub seed: u64,
    /// Number of random fields; field `i` uses seed `seed + i`.
    pub fields: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            n: 257,
            extent: 8.0,
            seed: 0,
            fields: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseResult {
    pub label: String,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
}

impl CaseResult {
    fn new(label: String, value: f64, tol: f64) -> Self {
        Self {
            label,
            value,
            tol,
            pass: value <= tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub config: SuiteConfig,
    pub cases: Vec<CaseResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.pass)
    }

    /// Fixed-width table, one case per line.
    pub fn table(&self) -> String {
        let width = self
            .cases
            .iter()
            .map(|c| c.label.len())
            .max()
            .unwrap_or(4)
            .max(4);
        let mut out = format!(
            "{:<width$}  {:>12}  {:>9}  result\n",
            "case", "value", "tol"
        );
        for c in &self.cases {
            out.push_str(&format!(
                "{:<width$}  {:>12.4e}  {:>9.1e}  {}\n",
                c.label,
                c.value,
                c.tol,
                if c.pass { "PASS" } else { "FAIL" }
            ));
        }
        out
    }
}

fn order_pairs() -> Vec<TransformOrder<f64>> {
    let mut v = Vec::new();
    for &a1 in &ALPHA_SET {
        for &a2 in &ALPHA_SET {
            v.push(TransformOrder::new(a1, a2).expect("angles in the sweep are valid"));
        }
    }
    v
}

fn order_label(o: &TransformOrder<f64>) -> String {
    let frac = |a: f64| match (a / PI * 12.0).round() as i64 {
        2 => "pi/6",
        3 => "pi/4",
        6 => "pi/2",
        8 => "2pi/3",
        _ => "?",
    };
    format!("({},{})", frac(o.alpha1()), frac(o.alpha2()))
}

pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<SuiteReport> {
    let grid = Grid2D::symmetric(config.n, config.n, config.extent)?;
    let mut cases = Vec::new();
    for i in 0..config.fields {
        let seed = config.seed.wrapping_add(i as u64);
        let f = random_field(&grid, seed)?;
        let tag = format!("seed {seed}");
        match suite {
            Suite::Parseval => parseval(&f, &tag, &mut cases)?,
            Suite::Inverse => inverse(&f, &tag, &mut cases)?,
            Suite::DerivativeIdentity => derivative_identity(&f, &tag, &mut cases)?,
            Suite::ScalarZero => scalar_zero(&f, &tag, &mut cases)?,
            Suite::ModulusSplit => modulus_split(&f, &tag, &mut cases)?,
            Suite::PartsIdentity => parts_identity(&f, &tag, &mut cases)?,
            Suite::Thm45 => thm45(&f, &tag, &mut cases)?,
        }
    }
    if suite == Suite::Inverse {
        let f = gaussian_mixture(&grid, config.seed)?;
        inverse(&f, &format!("mixture {}", config.seed), &mut cases)?;
    }
    if suite == Suite::Parseval && config.fields >= 2 {
        for i in 0..config.fields {
            let a = random_field(&grid, config.seed.wrapping_add(i as u64))?;
            let j = (i + 1) % config.fields;
            let b = random_field(&grid, config.seed.wrapping_add(j as u64))?;
            plancherel(
                &a,
                &b,
                &format!(
                    "seeds {}/{}",
                    config.seed + i as u64,
                    config.seed + j as u64
                ),
                &mut cases,
            )?;
        }
    }
    Ok(SuiteReport {
        suite,
        config: *config,
        cases,
    })
}

fn parseval(f: &QField<f64>, tag: &str, cases: &mut Vec<CaseResult>) -> Result<()> {
    let norm = f.l2_norm();
    for order in order_pairs() {
        let big_f = qfrft_fast(f, &order, f.grid())?;
        let dev = (big_f.l2_norm() - norm).abs() / norm;
        cases.push(CaseResult::new(
            format!("{tag} {} norm", order_label(&order)),
            dev,
            PARSEVAL_TOL,
        ));
    }
    Ok(())
}

fn plancherel(
    a: &QField<f64>,
    b: &QField<f64>,
    tag: &str,
    cases: &mut Vec<CaseResult>,
) -> Result<()> {
    let scale = a.l2_norm() * b.l2_norm();
    let spatial = a.inner(b)?.scalar();
    for order in order_pairs() {
        let fa = qfrft_fast(a, &order, a.grid())?;
        let fb = qfrft_fast(b, &order, b.grid())?;
        let dev = (fa.inner(&fb)?.scalar() - spatial).abs() / scale;
        cases.push(CaseResult::new(
            format!("{tag} {} inner", order_label(&order)),
            dev,
            PARSEVAL_TOL,
        ));
    }
    Ok(())
}

fn inverse(f: &QField<f64>, tag: &str, cases: &mut Vec<CaseResult>) -> Result<()> {
    for order in order_pairs() {
        let big_f = qfrft_fast(f, &order, f.grid())?;
        let back = iqfrft_fast(&big_f, &order, f.grid())?;
        cases.push(CaseResult::new(
            format!("{tag} {}", order_label(&order)),
            back.max_abs_diff(f)?,
            INVERSE_TOL,
        ));
    }
    Ok(())
}

/// Relative residual of the transform derivative identities
/// `F{d1 f} = -i cot a1 F{x1 f} + i w1 csc a1 F{f}` and
/// `F{d2 f} = -cot a2 F{x2 f} j + w2 csc a2 F{f} j`.
pub fn derivative_residual(
    f: &QField<f64>,
    order: &TransformOrder<f64>,
    axis: Axis,
) -> Result<f64> {
    let grid = f.grid();
    let fd = qfrft_fast(&f.partial(axis)?, order, grid)?;
    let fx = qfrft_fast(&f.times_coord(axis), order, grid)?;
    let ff = qfrft_fast(f, order, grid)?;
    let (s, c) = order.alpha(axis).sin_cos();
    let (cot, csc) = (c / s, 1.0 / s);
    let e = axis.unit::<f64>();
    let n2 = grid.n2();
    let residual: Vec<Quaternion<f64>> = (0..grid.len())
        .map(|idx| {
            let w = match axis {
                Axis::X1 => grid.coord(axis, idx / n2),
                Axis::X2 => grid.coord(axis, idx % n2),
            };
            let rhs = fx.values()[idx] * (-cot) + ff.values()[idx] * (w * csc);
            let rhs = match axis {
                Axis::X1 => e * rhs,
                Axis::X2 => rhs * e,
            };
            fd.values()[idx] - rhs
        })
        .collect();
    let r = QField::new(*grid, residual)?;
    Ok(r.l2_norm() / fd.l2_norm())
}

fn derivative_identity(f: &QField<f64>, tag: &str, cases: &mut Vec<CaseResult>) -> Result<()> {
    for (i, &a1) in ALPHA_SET.iter().enumerate() {
        let order = TransformOrder::new(a1, ALPHA_SET[(i + 1) % ALPHA_SET.len()])?;
        for axis in Axis::BOTH {
            cases.push(CaseResult::new(
                format!("{tag} {} k={}", order_label(&order), axis.number()),
                derivative_residual(f, &order, axis)?,
                DERIVATIVE_TOL,
            ));
        }
    }
    Ok(())
}

/// Largest `|Sc[D_k]|` over masked nodes.
pub fn scalar_part_max(f: &QField<f64>, axis: Axis) -> Result<f64> {
    let polar = f.polar();
    let d = polar.phase_derivative(axis)?;
    Ok(polar
        .mask()
        .iter()
        .zip(d.values())
        .filter(|(&keep, _)| keep)
        .map(|(_, q)| q.q0.abs())
        .fold(0.0, f64::max))
}

fn scalar_zero(f: &QField<f64>, tag: &str, cases: &mut Vec<CaseResult>) -> Result<()> {
    for axis in Axis::BOTH {
        cases.push(CaseResult::new(
            format!("{tag} k={}", axis.number()),
            scalar_part_max(f, axis)?,
            SCALAR_ZERO_TOL,
        ));
    }
    Ok(())
}

/// Largest `| |d_k f|^2 - (d_k rho)^2 - rho^2 |D_k|^2 |`, relative to
/// `max |d_k f|^2`.
pub fn modulus_split_error(
    f: &QField<f64>,
    analysis: &SpatialAnalysis<f64>,
    axis: Axis,
) -> Result<f64> {
    let df = f.partial(axis)?;
    let drho = analysis.drho(axis);
    let d = analysis.phase_derivative(axis).values();
    let rho = analysis.rho();
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for (idx, q) in df.values().iter().enumerate() {
        let lhs = q.norm_sqr();
        let rhs = drho[idx] * drho[idx] + rho[idx] * rho[idx] * d[idx].norm_sqr();
        worst = worst.max((lhs - rhs).abs());
        scale = scale.max(lhs);
    }
    Ok(worst / scale)
}

fn modulus_split(f: &QField<f64>, tag: &str, cases: &mut Vec<CaseResult>) -> Result<()> {
    let analysis = SpatialAnalysis::new(f)?;
    for axis in Axis::BOTH {
        cases.push(CaseResult::new(
            format!("{tag} k={}", axis.number()),
            modulus_split_error(f, &analysis, axis)?,
            MODULUS_SPLIT_TOL,
        ));
    }
    Ok(())
}

/// Largest `|Sc[e_k (d_k f) x_k conj f] - x_k rho^2 Sc[e_k D_k]|` over nodes.
pub fn parts_identity_error(
    f: &QField<f64>,
    analysis: &SpatialAnalysis<f64>,
    axis: Axis,
) -> Result<f64> {
    let df = f.partial(axis)?;
    let d = analysis.phase_derivative(axis).values();
    let rho = analysis.rho();
    let e = axis.unit::<f64>();
    let grid = f.grid();
    let n2 = grid.n2();
    let mut worst = 0.0f64;
    for (idx, q) in df.values().iter().enumerate() {
        let x = match axis {
            Axis::X1 => grid.coord(axis, idx / n2),
            Axis::X2 => grid.coord(axis, idx % n2),
        };
        let lhs = (e * *q * f.values()[idx].conj()).scalar() * x;
        let rhs = x * rho[idx] * rho[idx] * (e * d[idx]).scalar();
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

fn parts_identity(f: &QField<f64>, tag: &str, cases: &mut Vec<CaseResult>) -> Result<()> {
    let analysis = SpatialAnalysis::new(f)?;
    for axis in Axis::BOTH {
        cases.push(CaseResult::new(
            format!("{tag} k={} per-node", axis.number()),
            parts_identity_error(f, &analysis, axis)?,
            PARTS_TOL,
        ));
        cases.push(CaseResult::new(
            format!("{tag} k={} int x rho drho", axis.number()),
            (analysis.integrals(axis).x_rho_drho + 0.5).abs(),
            ENERGY_IDENTITY_TOL,
        ));
    }
    Ok(())
}

fn thm45(f: &QField<f64>, tag: &str, cases: &mut Vec<CaseResult>) -> Result<()> {
    let analysis = SpatialAnalysis::new(f)?;
    for order in order_pairs() {
        let direct = spectral_moment2_direct(f, &order)?.total;
        let spatial = analysis.spectral_moment2(&order, Axis::X1)
            + analysis.spectral_moment2(&order, Axis::X2);
        cases.push(CaseResult::new(
            format!("{tag} {}", order_label(&order)),
            (direct - spatial).abs() / direct.abs(),
            THM45_TOL,
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(Suite::from_name(s.name()), Some(s));
        }
        assert_eq!(Suite::from_name("nope"), None);
    }

    #[test]
    fn small_suites_run() {
        let config = SuiteConfig {
            n: 129,
            extent: 8.0,
            seed: 11,
            fields: 1,
        };
        for s in [
            Suite::Parseval,
            Suite::Inverse,
            Suite::ScalarZero,
            Suite::Thm45,
        ] {
            let r = run_suite(s, &config).unwrap();
            assert!(!r.cases.is_empty());
            assert!(r.passed(), "{}\n{}", s, r.table());
        }
    }

    #[test]
    fn labels_cover_the_sweep() {
        let labels: Vec<String> = order_pairs().iter().map(order_label).collect();
        assert_eq!(labels.len(), 16);
        assert!(labels.iter().all(|l| !l.contains('?')));
    }
}
