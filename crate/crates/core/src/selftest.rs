//! Quick internal consistency checks, runnable from the command line.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::detector::{matrix_elements, DetectorParams, Geometry};
use crate::error::Result;
use crate::qubit::{build_rho, Party, SpectrumMode};
use crate::special::{dawson, erfc_real, faddeeva_w};
use crate::sweep::{closed_form, eigenvalue_route, GeometryKind};
use crate::tangle::pi_tangle_general;
use crate::toy::{build_toy_rho, case1_formula, case2_formula, sample_valid_params, toy_eigenvalues, ToyParams};
use crate::Complex64;

/// Closed form vs spectrum, absolute, per field.
pub const ROUTE_TOL: f64 = 1e-10;
/// Toy eigenvalue formulas vs the numerical spectrum, absolute.
pub const SPECTRUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SelfCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl SelfCheck {
    fn new(name: impl Into<String>, passed: bool, detail: String) -> Self {
        Self {
            name: name.into(),
            passed,
            detail,
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn special_spot_values() -> Result<SelfCheck> {
    let errs = [
        rel(erfc_real(1.0)?, 0.157_299_207_050_285_13),
        rel(dawson(1.0)?, 0.538_079_506_912_768_4),
        rel(faddeeva_w(Complex64::new(0.0, 1.0))?.re, 0.427_583_576_155_807),
        rel(faddeeva_w(Complex64::new(1.0, 1.0))?.im, 0.208_218_938_202_831_63),
    ];
    let worst = errs.iter().fold(0.0f64, |m, &e| m.max(e));
    Ok(SelfCheck::new(
        "special-function spot values",
        worst < 1e-14,
        format!("worst relative error {worst:.2e}"),
    ))
}

/// A random triangle with sides in [0.5, 12].
fn random_triangle(rng: &mut ChaCha8Rng) -> Result<Geometry> {
    loop {
        let s: [f64; 3] = std::array::from_fn(|_| rng.gen_range(0.5..12.0));
        if s[0] + s[1] > s[2] && s[0] + s[2] > s[1] && s[1] + s[2] > s[0] {
            return Geometry::from_sides(s[0], s[1], s[2]);
        }
    }
}

fn route_agreement(kind: GeometryKind, points: usize, rng: &mut ChaCha8Rng) -> Result<SelfCheck> {
    let mut worst = 0.0f64;
    for _ in 0..points {
        let gap = rng.gen_range(-1.0..4.0);
        let geom = match kind {
            GeometryKind::Equilateral => Geometry::equilateral(rng.gen_range(0.5..12.0))?,
            GeometryKind::Linear => Geometry::linear(rng.gen_range(0.5..6.0))?,
            _ => random_triangle(rng)?,
        };
        let me = matrix_elements(&DetectorParams::new(0.1, gap)?, &geom)?;
        let d = closed_form(kind, &me)?.max_abs_diff(&eigenvalue_route(&me)?);
        worst = worst.max(d);
    }
    Ok(SelfCheck::new(
        format!("{kind} closed form vs spectrum ({points} points)"),
        worst <= ROUTE_TOL,
        format!("max |difference| {worst:.2e}"),
    ))
}

fn contains(spectrum: &[f64], v: f64) -> bool {
    spectrum.iter().any(|&s| (s - v).abs() <= SPECTRUM_TOL)
}

fn toy_spectra(points: usize, rng: &mut ChaCha8Rng) -> Result<SelfCheck> {
    let (mut misses, mut both_negative) = (0, 0);
    for _ in 0..points {
        let p = sample_valid_params(rng);
        let rho = build_toy_rho(&p);
        let ev = toy_eigenvalues(&p);
        if ev.f1 < 0.0 && ev.f3 < 0.0 {
            both_negative += 1;
        }
        let full = rho.partial_transpose(Party::A)?.eigenvalues()?;
        let pair = rho.partial_trace(Party::C)?.partial_transpose(Party::A)?.eigenvalues()?;
        if !(contains(&full, ev.e4) && contains(&full, ev.e7) && contains(&pair, ev.f1) && contains(&pair, ev.f3)) {
            misses += 1;
        }
    }
    Ok(SelfCheck::new(
        format!("toy eigenvalue formulas in spectrum ({points} states)"),
        misses == 0 && both_negative == 0,
        format!("{misses} mismatches, {both_negative} with f1 and f3 both negative"),
    ))
}

fn toy_route(points: usize, rng: &mut ChaCha8Rng) -> Result<SelfCheck> {
    let mut worst = 0.0f64;
    for _ in 0..points {
        let p = sample_valid_params(rng);
        let r = pi_tangle_general(&build_toy_rho(&p), SpectrumMode::Exact)?;
        let ev = toy_eigenvalues(&p);
        let formula = if ev.f1 < 0.0 && ev.e7 >= 0.0 {
            case1_formula(&p)
        } else if ev.f3 < 0.0 && ev.e7 < 0.0 && ev.e4 >= 0.0 && ev.f1 >= 0.0 {
            case2_formula(&p)
        } else {
            continue;
        };
        worst = worst.max((r.pi - formula).abs());
    }
    Ok(SelfCheck::new(
        format!("toy closed forms vs spectrum ({points} states)"),
        worst <= ROUTE_TOL,
        format!("max |difference| {worst:.2e}"),
    ))
}

fn toy_printed_values() -> SelfCheck {
    let c1 = case1_formula(&ToyParams::new(0.01, 0.009, 0.04, 0.000_11, 0.0));
    let c2 = case2_formula(&ToyParams::new(0.01, 0.009, 0.008, 0.000_15, 1e-6));
    let worst = rel(c1, -1.994_352_248_013_520_5e-6).max(rel(c2, -2.428_661_470_918_285_3e-9));
    SelfCheck::new(
        "toy reference values",
        worst < 1e-12,
        format!("worst relative error {worst:.2e}"),
    )
}

/// Deterministic for a given seed.
pub fn run_selftest(seed: u64, points: usize) -> Result<Vec<SelfCheck>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![special_spot_values()?];
    for kind in [GeometryKind::Equilateral, GeometryKind::Linear, GeometryKind::Scalene] {
        out.push(route_agreement(kind, points, &mut rng)?);
    }
    // sanity: the unsymmetrised route on a random triangle is Hermitian-clean
    let me = matrix_elements(&DetectorParams::new(0.1, 0.5)?, &random_triangle(&mut rng)?)?;
    let defect = build_rho(&me).hermiticity_defect();
    out.push(SelfCheck::new("harvested state is Hermitian", defect == 0.0, format!("defect {defect:e}")));
    out.push(toy_spectra(points, &mut rng)?);
    out.push(toy_route(points, &mut rng)?);
    out.push(toy_printed_values());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_checks_pass() {
        for c in run_selftest(7, 200).unwrap() {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
    }
}
