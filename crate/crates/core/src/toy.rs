//! Non-perturbative toy state with extra two- and three-excitation weights E
//! and Σ, its validity region, closed-form partial-transpose eigenvalues, and
//! the two regimes in which the π-tangle goes negative.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::detector::MatrixElements;
use crate::error::{Error, Result};
use crate::qubit::{build_rho, DensityMatrix};
use crate::sweep::Axis;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ToyParams {
    pub p: f64,
    pub c: f64,
    pub e: f64,
    pub sigma: f64,
    pub x: Complex64,
}

impl ToyParams {
    pub fn new(p: f64, c: f64, abs_x: f64, e: f64, sigma: f64) -> Self {
        Self {
            p,
            c,
            e,
            sigma,
            x: Complex64::new(abs_x, 0.0),
        }
    }

    /// ξ = 1 − 3P − 2E − Σ
    pub fn xi(&self) -> f64 {
        1.0 - 3.0 * self.p - 2.0 * self.e - self.sigma
    }

    pub fn abs_x(&self) -> f64 {
        self.x.norm()
    }
}

/// Leading coefficients of the weak-coupling series: P = λ²P₂, C = λ²C₂,
/// X = λ²X₂, E = λ⁴E₄, Σ = λ⁶Σ₆.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PerturbativeToyParams {
    pub lambda: f64,
    pub p2: f64,
    pub c2: f64,
    pub e4: f64,
    pub sigma6: f64,
    pub x2: Complex64,
}

impl PerturbativeToyParams {
    pub fn new(lambda: f64, p2: f64, c2: f64, abs_x2: f64, e4: f64, sigma6: f64) -> Self {
        Self {
            lambda,
            p2,
            c2,
            e4,
            sigma6,
            x2: Complex64::new(abs_x2, 0.0),
        }
    }

    pub fn assemble(&self) -> ToyParams {
        let l2 = self.lambda * self.lambda;
        ToyParams {
            p: l2 * self.p2,
            c: l2 * self.c2,
            e: l2 * l2 * self.e4,
            sigma: l2 * l2 * l2 * self.sigma6,
            x: self.x2 * l2,
        }
    }
}

/// 8×8 state with diagonal (1−3P−3E−Σ, P, P, P, E, E, E, Σ).
pub fn build_toy_rho(p: &ToyParams) -> DensityMatrix {
    let mut rho = build_rho(&MatrixElements::symmetric(p.p, p.c, p.x));
    rho.set(0, 0, Complex64::new(1.0 - 3.0 * p.p - 3.0 * p.e - p.sigma, 0.0));
    for k in 4..7 {
        rho.set(k, k, Complex64::new(p.e, 0.0));
    }
    rho.set(7, 7, Complex64::new(p.sigma, 0.0));
    rho
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    ENonNegative,
    SigmaNonNegative,
    PAtLeastC,
    PAtLeastMinusTwoC,
    PNonNegative,
    XiNonNegative,
    Coherence,
}

impl Constraint {
    pub fn label(&self) -> &'static str {
        match self {
            Constraint::ENonNegative => "E >= 0",
            Constraint::SigmaNonNegative => "Sigma >= 0",
            Constraint::PAtLeastC => "P >= C",
            Constraint::PAtLeastMinusTwoC => "P >= -2C",
            Constraint::PNonNegative => "P >= 0",
            Constraint::XiNonNegative => "xi >= 0",
            Constraint::Coherence => "E*xi >= E^2 + 3|X|^2",
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Violated constraints; empty means the toy state is positive semidefinite.
pub fn validity_check(p: &ToyParams) -> Vec<Constraint> {
    let xi = p.xi();
    let checks = [
        (p.e >= 0.0, Constraint::ENonNegative),
        (p.sigma >= 0.0, Constraint::SigmaNonNegative),
        (p.p >= p.c, Constraint::PAtLeastC),
        (p.p >= -2.0 * p.c, Constraint::PAtLeastMinusTwoC),
        (p.p >= 0.0, Constraint::PNonNegative),
        (xi >= 0.0, Constraint::XiNonNegative),
        (p.e * xi >= p.e * p.e + 3.0 * p.x.norm_sqr(), Constraint::Coherence),
    ];
    checks.iter().filter(|(ok, _)| !ok).map(|&(_, c)| c).collect()
}

/// Candidate negative eigenvalues: e4, e7 of ρ^{T_A}, f1, f3 of (Tr_C ρ)^{T_A}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToyEigenvalues {
    pub e4: f64,
    pub e7: f64,
    pub f1: f64,
    pub f3: f64,
}

/// The argument 2C² − E + 3E² + 3EP + |X|² + EΣ under the e7 square root.
/// (Its EP coefficient must be 3 for e7 to be an eigenvalue at all.)
fn e7_shift(p: &ToyParams) -> f64 {
    let e = p.e;
    2.0 * p.c * p.c - e + 3.0 * e * e + 3.0 * e * p.p + p.x.norm_sqr() + e * p.sigma
}

/// ½(a − √(a² + b)), without cancelling when b ≪ a².
fn lower_root(a: f64, b: f64) -> f64 {
    let r = (a * a + b).sqrt();
    if a > 0.0 {
        -0.5 * b / (r + a)
    } else {
        0.5 * (a - r)
    }
}

/// f3 = ½((1−2P−2E) − √(4C² + (1−4E−2P−2Σ)²)), written as a lower root about
/// h = 1−2P−2E: g² = h² − 4(E+Σ)(h − E − Σ).
fn f3_value(p: &ToyParams) -> f64 {
    let h = 1.0 - 2.0 * p.p - 2.0 * p.e;
    let d = p.e + p.sigma;
    lower_root(h, 4.0 * p.c * p.c - 4.0 * d * (h - d))
}

pub fn toy_eigenvalues(p: &ToyParams) -> ToyEigenvalues {
    let ax = p.abs_x();
    let e4 = 0.5 * (2.0 * p.p + p.c - (p.c * p.c + 8.0 * ax * ax).sqrt());
    let e7 = lower_root(p.xi(), 4.0 * e7_shift(p));
    let f1 = p.e + p.p - ax;
    ToyEigenvalues {
        e4,
        e7,
        f1,
        f3: f3_value(p),
    }
}

/// Eξ − E² − |X|² − 2C²; e7 ≥ 0 exactly when this is ≥ 0.
pub fn e7_condition(p: &ToyParams) -> f64 {
    p.e * p.xi() - p.e * p.e - p.x.norm_sqr() - 2.0 * p.c * p.c
}

/// Eξ + Σξ − C² − E² − EΣ + PE + PΣ; f3 ≥ 0 exactly when this is ≥ 0.
pub fn f3_condition(p: &ToyParams) -> f64 {
    let xi = p.xi();
    p.e * xi + p.sigma * xi - p.c * p.c - p.e * p.e - p.e * p.sigma + p.p * p.e + p.p * p.sigma
}

/// Which of the two negative-π mechanisms the parameters sit in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToyRegime {
    /// f1 < 0 (and e7 ≥ 0): |X| exceeds P + E.
    Case1,
    /// f3 < 0 with f1, e4 ≥ 0.
    Case2,
    /// No negative two-detector eigenvalue: π ≥ 0.
    NoPairEntanglement,
    /// Anything else (only reachable by invalid parameters).
    Other,
}

pub fn toy_regime(p: &ToyParams) -> ToyRegime {
    let ev = toy_eigenvalues(p);
    if ev.f1 < 0.0 && ev.e7 >= 0.0 {
        ToyRegime::Case1
    } else if ev.f3 < 0.0 && ev.f1 >= 0.0 && ev.e4 >= 0.0 {
        ToyRegime::Case2
    } else if ev.f1 >= 0.0 && ev.f3 >= 0.0 {
        ToyRegime::NoPairEntanglement
    } else {
        ToyRegime::Other
    }
}

/// [½(√(C²+8|X|²) − 2P − C)]² − 2(|X| − P − E)², without the regime check.
pub fn case1_formula(p: &ToyParams) -> f64 {
    let ax = p.abs_x();
    let n = 0.5 * ((p.c * p.c + 8.0 * ax * ax).sqrt() - 2.0 * p.p - p.c);
    let m = ax - p.p - p.e;
    n * n - 2.0 * m * m
}

/// Case-1 π-tangle; errors outside f1 < 0, e7 ≥ 0.
pub fn toy_pi_case1(p: &ToyParams) -> Result<f64> {
    let ev = toy_eigenvalues(p);
    if !(ev.f1 < 0.0) || !(ev.e7 >= 0.0) {
        return Err(Error::Regime {
            case: "case-1",
            reason: format!("need f1 < 0 and e7 >= 0, have f1 = {:e}, e7 = {:e}", ev.f1, ev.e7),
        });
    }
    Ok(case1_formula(p))
}

/// λ⁴[¼(√(C₂²+8|X₂|²) − 2P₂ − C₂)² − 2(|X₂| − P₂)²]
pub fn toy_pi_case1_pert(pp: &PerturbativeToyParams) -> f64 {
    let ax = pp.x2.norm();
    let n = (pp.c2 * pp.c2 + 8.0 * ax * ax).sqrt() - 2.0 * pp.p2 - pp.c2;
    let m = ax - pp.p2;
    pp.lambda.powi(4) * (0.25 * n * n - 2.0 * m * m)
}

/// 4[P₂²(P₂−C₂)² − 2(|X₂|−P₂)(C₂²(2|X₂|−P₂) − |X₂|(2P₂−C₂)²)]; for |X₂| > P₂
/// its sign is the sign of the perturbative case-1 π-tangle.
pub fn case1_pert_quartic(pp: &PerturbativeToyParams) -> f64 {
    let (p, c, x) = (pp.p2, pp.c2, pp.x2.norm());
    4.0 * (p * p * (p - c) * (p - c)
        - 2.0 * (x - p) * (c * c * (2.0 * x - p) - x * (2.0 * p - c) * (2.0 * p - c)))
}

/// [½(√(ξ² + 4(2C² − E + 3E² + 3EP + |X|² + EΣ)) − ξ)]²
///   − 2[½(√(4C² + (1−4E−2P−2Σ)²) − (1−2P−2E))]², without the regime check.
pub fn case2_formula(p: &ToyParams) -> f64 {
    // the brackets are −e7 and −f3
    let ev = toy_eigenvalues(p);
    ev.e7 * ev.e7 - 2.0 * ev.f3 * ev.f3
}

/// Case-2 π-tangle; errors outside f3 < 0, f1 ≥ 0, e4 ≥ 0.
pub fn toy_pi_case2(p: &ToyParams) -> Result<f64> {
    let ev = toy_eigenvalues(p);
    if !(ev.f3 < 0.0 && ev.f1 >= 0.0 && ev.e4 >= 0.0) {
        return Err(Error::Regime {
            case: "case-2",
            reason: format!(
                "need f3 < 0, f1 >= 0, e4 >= 0, have f3 = {:e}, f1 = {:e}, e4 = {:e}",
                ev.f3, ev.f1, ev.e4
            ),
        });
    }
    Ok(case2_formula(p))
}

/// λ⁸(2(C₂²+|X₂|²)² − (E₄+|X₂|²)²)
pub fn toy_pi_case2_pert(pp: &PerturbativeToyParams) -> f64 {
    let x2 = pp.x2.norm_sqr();
    let a = pp.c2 * pp.c2 + x2;
    let b = pp.e4 + x2;
    pp.lambda.powi(8) * (2.0 * a * a - b * b)
}

/// Largest E₄ with a nonnegative perturbative case-2 π: (√2−1)|X₂|² + √2 C₂².
pub fn case2_pert_e4_bound(pp: &PerturbativeToyParams) -> f64 {
    (2f64.sqrt() - 1.0) * pp.x2.norm_sqr() + 2f64.sqrt() * pp.c2 * pp.c2
}

/// A random valid toy state with P ≥ Σ, spread over several decades so that
/// both negative-π regimes get sampled.
pub fn sample_valid_params<R: Rng + ?Sized>(rng: &mut R) -> ToyParams {
    let p = 10f64.powf(rng.gen_range(-4.0..-0.9));
    let c = p * rng.gen_range(-0.5..=1.0);
    let e = 10f64.powf(rng.gen_range(-7.0..-1.3));
    let sigma = if rng.gen_bool(0.3) { 0.0 } else { p * rng.gen::<f64>() };
    let xi = 1.0 - 3.0 * p - 2.0 * e - sigma;
    let room = (e * xi - e * e).max(0.0) / 3.0;
    let ax = room.sqrt() * rng.gen::<f64>().powf(0.25);
    let phase = rng.gen_range(0.0..std::f64::consts::TAU);
    let out = ToyParams {
        p,
        c,
        e,
        sigma,
        x: Complex64::from_polar(ax, phase),
    };
    // rounding can nudge the coherence bound; shrink X until it holds
    if validity_check(&out).is_empty() {
        out
    } else {
        ToyParams {
            x: out.x * (1.0 - 1e-12),
            ..out
        }
    }
}

/// Perturbative case-1 π over a (P₂, |X₂|) grid with C₂ = ratio·P₂.
#[derive(Debug, Clone, PartialEq)]
pub struct CkwScanSpec {
    pub p2: Axis,
    pub x2: Axis,
    pub c2_ratio: f64,
    pub lambda: f64,
}

impl Default for CkwScanSpec {
    fn default() -> Self {
        Self {
            p2: Axis::new(0.05, 5.0, 200),
            x2: Axis::new(0.05, 5.0, 200),
            c2_ratio: 0.9,
            lambda: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CkwCell {
    pub p2: f64,
    pub x2: f64,
    pub pi: f64,
    /// the sign-deciding quartic, see `case1_pert_quartic`
    pub quartic: f64,
    /// P₂ ≥ |X₂|: f1 is not negative, so case 1 does not apply
    pub excluded: bool,
}

impl CkwScanSpec {
    pub fn validate(&self) -> Result<()> {
        self.p2.validate("p2")?;
        self.x2.validate("x2")?;
        if !(self.p2.min > 0.0 && self.x2.min > 0.0) {
            return Err(Error::Config("toy-scan grid bounds must be positive".into()));
        }
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return Err(Error::Config("lambda must be finite and > 0".into()));
        }
        if !self.c2_ratio.is_finite() {
            return Err(Error::Config("c2_ratio must be finite".into()));
        }
        Ok(())
    }
}

/// Row-major, P₂ outer.
pub fn ckw_scan(spec: &CkwScanSpec) -> Result<Vec<CkwCell>> {
    spec.validate()?;
    let ps = spec.p2.values();
    let xs = spec.x2.values();
    Ok((0..ps.len() * xs.len())
        .into_par_iter()
        .map(|k| {
            let (p2, x2) = (ps[k / xs.len()], xs[k % xs.len()]);
            let pp = PerturbativeToyParams::new(spec.lambda, p2, spec.c2_ratio * p2, x2, 0.0, 0.0);
            CkwCell {
                p2,
                x2,
                pi: toy_pi_case1_pert(&pp),
                quartic: case1_pert_quartic(&pp),
                excluded: p2 >= x2,
            }
        })
        .collect())
}
