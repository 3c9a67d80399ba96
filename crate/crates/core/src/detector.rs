//! Closed-form matrix elements for identical inertial detectors with Gaussian
//! switching in the 3+1 Minkowski vacuum. Units: σ = 1, so `gap` is Ωσ and
//! lengths are L/σ.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::{dawson, erfc_real, faddeeva_w, FRAC_2_SQRT_PI};

/// Couplings above this make the O(λ²) truncation questionable.
pub const PERTURBATIVE_COUPLING_LIMIT: f64 = 0.3;

/// Beyond this gap P is evaluated from the continued-fraction tail instead of
/// the cancelling difference e^{−Ω²} − √πΩ erfc Ω.
const P_TAIL_GAP: f64 = 2.0;
const P_TAIL_DEPTH: usize = 80;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorParams {
    /// λ > 0
    pub coupling: f64,
    /// Ωσ, may be negative (detectors start excited)
    pub gap: f64,
}

impl DetectorParams {
    /// Switching width; everything is measured in units of it.
    pub const WIDTH: f64 = 1.0;

    pub fn new(coupling: f64, gap: f64) -> Result<Self> {
        let p = Self { coupling, gap };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.coupling.is_finite() && self.coupling > 0.0) {
            return Err(Error::InvalidParameter {
                name: "coupling",
                value: self.coupling,
                reason: "must be finite and > 0",
            });
        }
        if !self.gap.is_finite() {
            return Err(Error::InvalidParameter {
                name: "gap",
                value: self.gap,
                reason: "must be finite",
            });
        }
        Ok(())
    }

    pub fn is_perturbative(&self) -> bool {
        self.coupling <= PERTURBATIVE_COUPLING_LIMIT
    }
}

/// Detector positions at t = 0, with the pairwise distances (AB, AC, BC).
///
/// The named constructors store their distances analytically so that equal
/// sides compare bit-equal; `from_positions` derives them from the vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub positions: [[f64; 3]; 3],
    distances: [f64; 3],
}

fn norm(a: [f64; 3], b: [f64; 3]) -> f64 {
    let d = [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

fn positive_length(name: &'static str, v: f64) -> Result<f64> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(Error::InvalidParameter {
            name,
            value: v,
            reason: "must be finite and > 0",
        })
    }
}

impl Geometry {
    pub fn from_positions(positions: [[f64; 3]; 3]) -> Result<Self> {
        let [a, b, c] = positions;
        Self::checked(positions, [norm(a, b), norm(a, c), norm(b, c)])
    }

    fn checked(positions: [[f64; 3]; 3], distances: [f64; 3]) -> Result<Self> {
        for &d in &distances {
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::CoincidentDetectors(d));
            }
        }
        Ok(Self { positions, distances })
    }

    /// Triangle with the given sides (AB, AC, BC), A at the origin and B on the x axis.
    pub fn from_sides(ab: f64, ac: f64, bc: f64) -> Result<Self> {
        for (name, v) in [("ab", ab), ("ac", ac), ("bc", bc)] {
            positive_length(name, v)?;
        }
        if ab + ac < bc || ab + bc < ac || ac + bc < ab {
            return Err(Error::InvalidParameter {
                name: "sides",
                value: ab,
                reason: "violate the triangle inequality",
            });
        }
        let cx = (ab * ab + ac * ac - bc * bc) / (2.0 * ab);
        let cy = (ac * ac - cx * cx).max(0.0).sqrt();
        Self::checked([[0.0; 3], [ab, 0.0, 0.0], [cx, cy, 0.0]], [ab, ac, bc])
    }

    /// Side-L triangle in the z = 0 plane.
    pub fn equilateral(length: f64) -> Result<Self> {
        let l = positive_length("length", length)?;
        let h = 0.75f64.sqrt() * l;
        Self::checked([[0.0; 3], [l, 0.0, 0.0], [0.5 * l, h, 0.0]], [l, l, l])
    }

    /// A, B, C on a line with spacing L (total length 2L).
    pub fn linear(length: f64) -> Result<Self> {
        let l = positive_length("length", length)?;
        Self::checked(
            [[0.0; 3], [l, 0.0, 0.0], [2.0 * l, 0.0, 0.0]],
            [l, 2.0 * l, l],
        )
    }

    /// A = (0,0,0), C = (L_AC,0,0), B = (L_AC/2 + D, √3 L_AC/2, 0).
    pub fn scalene(base: f64, displacement: f64) -> Result<Self> {
        let l = positive_length("scalene_base", base)?;
        if !displacement.is_finite() {
            return Err(Error::InvalidParameter {
                name: "displacement",
                value: displacement,
                reason: "must be finite",
            });
        }
        let h = 0.75f64.sqrt() * l;
        let h2 = 0.75 * l * l;
        let ab = ((0.5 * l + displacement).powi(2) + h2).sqrt();
        let bc = ((0.5 * l - displacement).powi(2) + h2).sqrt();
        Self::checked(
            [[0.0; 3], [0.5 * l + displacement, h, 0.0], [l, 0.0, 0.0]],
            [ab, l, bc],
        )
    }

    /// (L_AB, L_AC, L_BC)
    pub fn distances(&self) -> [f64; 3] {
        self.distances
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixElements {
    pub p: f64,
    pub c_ab: f64,
    pub c_ac: f64,
    pub c_bc: f64,
    pub x_ab: Complex64,
    pub x_ac: Complex64,
    pub x_bc: Complex64,
}

impl MatrixElements {
    /// All three pairs share the same C and X.
    pub fn symmetric(p: f64, c: f64, x: Complex64) -> Self {
        Self {
            p,
            c_ab: c,
            c_ac: c,
            c_bc: c,
            x_ab: x,
            x_ac: x,
            x_bc: x,
        }
    }

    pub fn zero_correlations(p: f64) -> Self {
        Self::symmetric(p, 0.0, Complex64::new(0.0, 0.0))
    }
}

/// P = (λ²/4π)(e^{−Ω²} − √π Ω erfc Ω).
pub fn transition_probability(params: &DetectorParams) -> Result<f64> {
    params.validate()?;
    let k = params.coupling * params.coupling / (4.0 * PI);
    let o = params.gap;
    if o > P_TAIL_GAP {
        // √π erfcx(Ω) = 1/(Ω + t),  t = ½/(Ω + 1/(Ω + (3/2)/(Ω + …)))
        // so the bracket is e^{−Ω²} t/(Ω + t) with nothing to cancel.
        let mut t = 0.0;
        for n in (1..=P_TAIL_DEPTH).rev() {
            t = (0.5 * n as f64) / (o + t);
        }
        Ok(k * (-o * o).exp() * t / (o + t))
    } else {
        Ok(k * ((-o * o).exp() - PI.sqrt() * o * erfc_real(o)?))
    }
}

fn separation(length: f64) -> Result<f64> {
    if length.is_finite() && length > 0.0 {
        Ok(length)
    } else {
        Err(Error::CoincidentDetectors(length))
    }
}

/// C(L) = (λ²/4√πL) e^{−L²/4}[Im(e^{iΩL} erf(iL/2 + Ω)) − sin ΩL].
///
/// The bracket times e^{−L²/4} is −e^{−Ω²} Im w(−L/2 + iΩ), which decays like
/// 1/L rather than being a difference of e^{L²/4}-sized terms.
pub fn cross_correlation_c(params: &DetectorParams, length: f64) -> Result<f64> {
    params.validate()?;
    let l = separation(length)?;
    let k = params.coupling * params.coupling / (4.0 * PI.sqrt() * l);
    let o = params.gap;
    // −Im w(−L/2 + i|Ω|) = Im w(L/2 + i|Ω|)
    let w = faddeeva_w(Complex64::new(0.5 * l, o.abs()))?;
    let mut bracket = (-o * o).exp() * w.im;
    if o < 0.0 {
        // reflection into the upper half plane: w(ζ) = 2e^{−ζ²} − conj w(ζ̄)
        bracket += 2.0 * (-0.25 * l * l).exp() * (-o * l).sin();
    }
    Ok(k * bracket)
}

/// X(L) = i(λ²/4√πL) e^{−Ω²}[e^{−L²/4} + (2i/√π) D(L/2)].
pub fn cross_correlation_x(params: &DetectorParams, length: f64) -> Result<Complex64> {
    params.validate()?;
    let l = separation(length)?;
    let k = params.coupling * params.coupling / (4.0 * PI.sqrt() * l) * (-params.gap * params.gap).exp();
    let d = dawson(0.5 * l)?;
    Ok(Complex64::new(-k * FRAC_2_SQRT_PI * d, k * (-0.25 * l * l).exp()))
}

pub fn matrix_elements(params: &DetectorParams, geom: &Geometry) -> Result<MatrixElements> {
    let [ab, ac, bc] = geom.distances();
    let me = MatrixElements {
        p: transition_probability(params)?,
        c_ab: cross_correlation_c(params, ab)?,
        c_ac: cross_correlation_c(params, ac)?,
        c_bc: cross_correlation_c(params, bc)?,
        x_ab: cross_correlation_x(params, ab)?,
        x_ac: cross_correlation_x(params, ac)?,
        x_bc: cross_correlation_x(params, bc)?,
    };
    let finite = [me.p, me.c_ab, me.c_ac, me.c_bc]
        .iter()
        .chain([me.x_ab, me.x_ac, me.x_bc].iter().flat_map(|x| [&x.re, &x.im]))
        .all(|v| v.is_finite());
    if !finite {
        // only reachable through an absurd coupling
        return Err(Error::NonFinite("matrix_elements"));
    }
    Ok(me)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(gap: f64) -> DetectorParams {
        DetectorParams::new(0.1, gap).unwrap()
    }

    #[test]
    fn p_at_zero_gap() {
        let p = transition_probability(&params(0.0)).unwrap();
        assert!((p - 0.01 / (4.0 * PI)).abs() < 1e-18);
        assert!((p - 7.957747e-4).abs() < 1e-10);
    }

    #[test]
    fn p_tail_switch_is_continuous() {
        let lo = transition_probability(&params(P_TAIL_GAP)).unwrap();
        let hi = transition_probability(&params(P_TAIL_GAP * (1.0 + 1e-14))).unwrap();
        assert!(((lo - hi) / lo).abs() < 1e-13);
        assert!(transition_probability(&params(10.0)).unwrap() <= 1e-8 * 0.01);
    }

    #[test]
    fn invalid_inputs() {
        assert!(DetectorParams::new(0.0, 1.0).is_err());
        assert!(DetectorParams::new(0.1, f64::NAN).is_err());
        assert!(matches!(
            cross_correlation_c(&params(1.0), 0.0),
            Err(Error::CoincidentDetectors(_))
        ));
        assert!(cross_correlation_x(&params(1.0), -1.0).is_err());
        assert!(Geometry::from_positions([[0.0; 3], [0.0; 3], [1.0, 0.0, 0.0]]).is_err());
        assert!(Geometry::equilateral(0.0).is_err());
    }

    #[test]
    fn equal_sides_give_identical_elements() {
        let me = matrix_elements(&params(2.0), &Geometry::equilateral(4.0).unwrap()).unwrap();
        assert_eq!(me.c_ab, me.c_ac);
        assert_eq!(me.c_ab, me.c_bc);
        assert_eq!(me.x_ab, me.x_ac);
        assert_eq!(me.x_ab, me.x_bc);

        let lin = matrix_elements(&params(2.0), &Geometry::linear(3.0).unwrap()).unwrap();
        assert_eq!(lin.c_ab, lin.c_bc);
        assert_eq!(lin.c_ac, cross_correlation_c(&params(2.0), 6.0).unwrap());
    }

    #[test]
    fn scalene_zero_displacement_is_equilateral() {
        let s = matrix_elements(&params(3.5), &Geometry::scalene(7.0, 0.0).unwrap()).unwrap();
        let e = matrix_elements(&params(3.5), &Geometry::equilateral(7.0).unwrap()).unwrap();
        assert_eq!(s, e);
    }

    #[test]
    fn stored_distances_match_positions() {
        for g in [
            Geometry::equilateral(2.7).unwrap(),
            Geometry::linear(1.3).unwrap(),
            Geometry::scalene(7.0, 3.1).unwrap(),
            Geometry::scalene(7.0, -9.0).unwrap(),
        ] {
            let from = Geometry::from_positions(g.positions).unwrap();
            for (a, b) in g.distances().iter().zip(from.distances()) {
                assert!((a - b).abs() <= 4.0 * f64::EPSILON * a, "{a} vs {b}");
            }
        }
    }
}
