//! Real and complex error-function family.
//!
//! * `erfc_real`, `erf_real`, `erfcx`: W. J. Cody's rational Chebyshev
//!   approximations (Math. Comp. 23, 1969), three intervals.
//! * `dawson`: Maclaurin series near 0, Rybicki's exponentially convergent
//!   sampling sum in the bulk, asymptotic series in the tail.
//! * `faddeeva_w`: region-switched. Large |z| uses the Laplace continued
//!   fraction; elsewhere the Zaghloul–Ali (ACM TOMS 916) exponential sums
//!   with the region boundaries of S. G. Johnson's Faddeeva package.
//! * `complex_erf`: erf(z) = 1 − e^{−z²} w(iz), with Taylor expansions where
//!   that subtraction cancels.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex scalar used throughout the crate.
pub type ComplexValue = Complex64;

pub(crate) const FRAC_1_SQRT_PI: f64 = 0.564_189_583_547_756_3;
pub(crate) const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

// ---------------------------------------------------------------------------
// Region boundaries for w(z). `y` is Im z (≥ 0 after reflection), `x` is |Re z|.

/// Continued fraction for every point with Im z above this.
pub const W_CF_MIN_Y: f64 = 7.0;
/// ... or with |Re z| above this and Im z above `W_CF_NEAR_AXIS_Y`.
pub const W_CF_MIN_X: f64 = 6.0;
pub const W_CF_NEAR_AXIS_Y: f64 = 0.1;
/// ... or |Re z| above this and Im z above `W_CF_TINY_Y`.
pub const W_CF_MID_X: f64 = 8.0;
pub const W_CF_TINY_Y: f64 = 1e-10;
/// ... or |Re z| above this, whatever Im z is.
pub const W_CF_FAR_X: f64 = 28.0;
/// Beyond this |z| only the leading term of the continued fraction survives.
const W_CF_LEADING_ONLY: f64 = 1e7;
/// Inside the sum region the cross terms of Im w cancel to rounding above this.
const W_SUM_DROP_IM_Y: f64 = 5.0;

// ---------------------------------------------------------------------------
// Cody erf/erfc

const THRESHOLD: f64 = 0.46875;
const XBIG: f64 = 26.543;
const XNEG: f64 = -26.628_735_713_751_4;

#[allow(clippy::excessive_precision)]
const A: [f64; 5] = [
    3.161_123_743_870_565_6,
    113.864_154_151_050_16,
    377.485_237_685_302_02,
    3_209.377_589_138_469_5,
    0.185_777_706_184_603_15,
];
#[allow(clippy::excessive_precision)]
const B: [f64; 4] = [
    23.601_290_952_344_12,
    244.024_637_934_444_17,
    1_282.616_526_077_372_3,
    2_844.236_833_439_170_6,
];
#[allow(clippy::excessive_precision)]
const C: [f64; 9] = [
    0.564_188_496_988_670_1,
    8.883_149_794_388_376,
    66.119_190_637_141_63,
    298.635_138_197_400_13,
    881.952_221_241_769_1,
    1_712.047_612_634_070_6,
    2_051.078_377_826_071_6,
    1_230.339_354_797_997_2,
    2.153_115_354_744_038_5e-8,
];
const D: [f64; 8] = [
    15.744_926_110_709_835,
    117.693_950_891_312_5,
    537.181_101_862_009_9,
    1_621.389_574_566_690_2,
    3_290.799_235_733_459_6,
    4_362.619_090_143_247,
    3_439.367_674_143_721_6,
    1_230.339_354_803_749_4,
];
const P: [f64; 6] = [
    0.305_326_634_961_232_36,
    0.360_344_899_949_804_45,
    0.125_781_726_111_229_24,
    0.016_083_785_148_742_275,
    6.587_491_615_298_378e-4,
    0.016_315_387_137_302_097,
];
const Q: [f64; 5] = [
    2.568_520_192_289_822,
    1.872_952_849_923_460_4,
    0.527_905_102_951_428_4,
    0.060_518_341_312_441_32,
    0.002_335_204_976_268_691_8,
];

#[inline]
fn rat_ab(z: f64) -> f64 {
    ((((A[4] * z + A[0]) * z + A[1]) * z + A[2]) * z + A[3])
        / ((((z + B[0]) * z + B[1]) * z + B[2]) * z + B[3])
}

#[inline]
fn rat_cd(y: f64) -> f64 {
    let num = C[..8].iter().fold(C[8], |acc, &c| acc * y + c);
    let den = D.iter().fold(1.0, |acc, &d| acc * y + d);
    num / den
}

#[inline]
fn rat_pq(z: f64) -> f64 {
    let num = P[..5].iter().fold(P[5], |acc, &p| acc * z + p);
    let den = Q.iter().fold(1.0, |acc, &q| acc * z + q);
    z * num / den
}

/// e^{−y²} with the square split so the exponent carries no rounding error.
#[inline]
fn exp_neg_sq(y: f64) -> f64 {
    let yt = (y * 16.0).trunc() / 16.0;
    (-yt * yt).exp() * (-(y - yt) * (y + yt)).exp()
}

#[inline]
fn exp_pos_sq(y: f64) -> f64 {
    let yt = (y * 16.0).trunc() / 16.0;
    (yt * yt).exp() * ((y - yt) * (y + yt)).exp()
}

/// erfcx(y) for y > THRESHOLD.
#[inline]
fn erfcx_tail(y: f64) -> f64 {
    if y <= 4.0 {
        rat_cd(y)
    } else {
        (FRAC_1_SQRT_PI - rat_pq(1.0 / (y * y))) / y
    }
}

fn check(x: f64, what: &'static str) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// erf(x) for real x.
pub fn erf_real(x: f64) -> Result<f64> {
    check(x, "erf_real")?;
    Ok(erf_unchecked(x))
}

fn erf_unchecked(x: f64) -> f64 {
    let y = x.abs();
    if y <= THRESHOLD {
        return x * rat_ab(y * y);
    }
    let tail = if y >= XBIG { 0.0 } else { erfcx_tail(y) * exp_neg_sq(y) };
    if x < 0.0 {
        tail - 1.0
    } else {
        1.0 - tail
    }
}

/// erfc(x) for real x. Underflows cleanly to 0 above x ≈ 26.5.
pub fn erfc_real(x: f64) -> Result<f64> {
    check(x, "erfc_real")?;
    Ok(erfc_unchecked(x))
}

fn erfc_unchecked(x: f64) -> f64 {
    let y = x.abs();
    if y <= THRESHOLD {
        return 1.0 - x * rat_ab(y * y);
    }
    let tail = if y >= XBIG { 0.0 } else { erfcx_tail(y) * exp_neg_sq(y) };
    if x < 0.0 {
        2.0 - tail
    } else {
        tail
    }
}

/// Scaled complementary error function e^{x²} erfc(x).
pub fn erfcx(x: f64) -> Result<f64> {
    check(x, "erfcx")?;
    if x < XNEG {
        return Err(Error::Overflow("erfcx"));
    }
    Ok(erfcx_unchecked(x))
}

fn erfcx_unchecked(x: f64) -> f64 {
    let y = x.abs();
    if y <= THRESHOLD {
        let z = y * y;
        return z.exp() * (1.0 - x * rat_ab(z));
    }
    let r = erfcx_tail(y);
    if x < 0.0 {
        2.0 * exp_pos_sq(x) - r
    } else {
        r
    }
}

// ---------------------------------------------------------------------------
// Dawson

const RYBICKI_H: f64 = 0.2;
const RYBICKI_TERMS: usize = 20;
const DAWSON_SERIES_MAX: f64 = 0.2;
const DAWSON_ASYMPTOTIC_MIN: f64 = 50.0;

/// Dawson's integral D(x) = e^{−x²} ∫₀ˣ e^{t²} dt.
pub fn dawson(x: f64) -> Result<f64> {
    check(x, "dawson")?;
    Ok(dawson_unchecked(x))
}

fn dawson_unchecked(x: f64) -> f64 {
    let ax = x.abs();
    let d = if ax < DAWSON_SERIES_MAX {
        // D(x) = Σ (−2x²)^k x / (2k+1)!!
        let m2x2 = -2.0 * ax * ax;
        let mut term = ax;
        let mut sum = ax;
        let mut k = 0.0;
        loop {
            term *= m2x2 / (2.0 * k + 3.0);
            sum += term;
            k += 1.0;
            if term.abs() <= 1e-18 * sum {
                break;
            }
        }
        sum
    } else if ax < DAWSON_ASYMPTOTIC_MIN {
        // G. B. Rybicki, Computers in Physics 3, 85 (1989).
        let n0 = 2.0 * (0.5 * ax / RYBICKI_H).round();
        let xp = ax - n0 * RYBICKI_H;
        let mut e1 = (2.0 * xp * RYBICKI_H).exp();
        let e2 = e1 * e1;
        let mut d1 = n0 + 1.0;
        let mut d2 = d1 - 2.0;
        let mut sum = 0.0;
        for i in 0..RYBICKI_TERMS {
            let t = (2 * i + 1) as f64 * RYBICKI_H;
            sum += (-t * t).exp() * (e1 / d1 + 1.0 / (d2 * e1));
            d1 += 2.0;
            d2 -= 2.0;
            e1 *= e2;
        }
        FRAC_1_SQRT_PI * (-xp * xp).exp() * sum
    } else {
        // D(x) ~ (1/2x) Σ (2k−1)!! / (2x²)^k
        let inv = 1.0 / (2.0 * ax * ax);
        let mut term = 1.0;
        let mut sum = 1.0;
        let mut k = 0.0;
        while term > 1e-18 * sum {
            term *= (2.0 * k + 1.0) * inv;
            sum += term;
            k += 1.0;
        }
        sum / (2.0 * ax)
    };
    d.copysign(x)
}

// ---------------------------------------------------------------------------
// Faddeeva

/// w(z) = e^{−z²} erfc(−iz).
pub fn faddeeva_w(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFinite("faddeeva_w"));
    }
    if z.im >= 0.0 {
        return Ok(w_upper(z.re, z.im));
    }
    // w(z) = 2 e^{−z²} − w(−z), with −z in the upper half plane
    let e = exp_checked(-(z * z), "faddeeva_w")?;
    let r = 2.0 * e - w_upper(-z.re, -z.im);
    if r.re.is_finite() && r.im.is_finite() {
        Ok(r)
    } else {
        Err(Error::Overflow("faddeeva_w"))
    }
}

fn exp_checked(z: Complex64, what: &'static str) -> Result<Complex64> {
    if z.re > 709.0 {
        return Err(Error::Overflow(what));
    }
    let m = z.re.exp();
    let (s, c) = z.im.sin_cos();
    Ok(Complex64::new(m * c, m * s))
}

/// w(x + iy) for y ≥ 0.
fn w_upper(x: f64, y: f64) -> Complex64 {
    let xa = x.abs();
    let w = if xa == 0.0 {
        Complex64::new(erfcx_unchecked(y), 0.0)
    } else if y > W_CF_MIN_Y
        || (xa > W_CF_MIN_X
            && (y > W_CF_NEAR_AXIS_Y || (xa > W_CF_MID_X && y > W_CF_TINY_Y) || xa > W_CF_FAR_X))
    {
        w_continued_fraction(xa, y)
    } else {
        w_sums(xa, y)
    };
    // w(−x + iy) = conj(w(x + iy))
    if x < 0.0 {
        w.conj()
    } else {
        w
    }
}

/// Laplace continued fraction w(z) = (i/√π) / (z − ½/(z − 1/(z − 3/2/(z − …)))).
fn w_continued_fraction(x: f64, y: f64) -> Complex64 {
    if x + y > W_CF_LEADING_ONLY {
        // i/(√π z), Smith's division to stay clear of overflow in |z|²
        let (re, im) = if x > y {
            let r = y / x;
            let d = x + y * r;
            (r / d, 1.0 / d)
        } else {
            let r = x / y;
            let d = y + x * r;
            (1.0 / d, r / d)
        };
        return Complex64::new(FRAC_1_SQRT_PI * re, FRAC_1_SQRT_PI * im);
    }
    // depth fit from Johnson's Faddeeva package (relative error ≲ 1e-14)
    let nu = (3.9 + 11.398 / (0.08254 * x + 0.1421 * y + 0.2023)).floor();
    let (mut wr, mut wi) = (x, y);
    let mut k = 0.5 * (nu - 1.0);
    while k > 0.4 {
        let s = k / (wr * wr + wi * wi);
        wr = x - wr * s;
        wi = y + wi * s;
        k -= 0.5;
    }
    let s = FRAC_1_SQRT_PI / (wr * wr + wi * wi);
    Complex64::new(s * wi, s * wr)
}

#[allow(clippy::excessive_precision)]
const SUM_A: f64 = 0.518_321_480_430_085_929_872;
#[allow(clippy::excessive_precision)]
const SUM_A2: f64 = 0.268_657_157_075_235_951_582;
#[allow(clippy::excessive_precision)]
const SUM_C: f64 = 0.329_973_702_884_629_072_537; // 2a/π

#[inline]
fn sinc(t: f64, sin_t: f64) -> f64 {
    if t.abs() < 1e-4 {
        1.0 - t * t / 6.0
    } else {
        sin_t / t
    }
}

/// Zaghloul–Ali exponential sums; x ≥ 0, y ≥ 0, x < W_CF_FAR_X.
fn w_sums(x: f64, y: f64) -> Complex64 {
    let y2 = y * y;
    let x2 = x * x;
    let expx2 = (-x2).exp();
    let n_max = ((x + 6.5) / SUM_A).ceil().max(13.0) as usize;

    let (mut s1, mut s23, mut s54) = (0.0, 0.0, 0.0);
    for n in 1..=n_max {
        let nf = n as f64;
        let an = SUM_A * nf;
        let denom = SUM_A2 * nf * nf + y2;
        let base = (-SUM_A2 * nf * nf - x2).exp();
        s1 += base / denom;
        if x < 1.0 {
            // e^{−(an∓x)²} = base·e^{±2anx}; take cosh/sinh to avoid cancellation
            let t = 2.0 * an * x;
            s23 += 2.0 * base * t.cosh() / denom;
            s54 += 2.0 * an * base * t.sinh() / denom;
        } else {
            let ep = (-(an - x) * (an - x)).exp();
            let em = (-(an + x) * (an + x)).exp();
            s23 += (ep + em) / denom;
            s54 += an * (ep - em) / denom;
        }
    }

    let xy = x * y;
    let (sin2xy, cos2xy) = (2.0 * xy).sin_cos();
    let sinxy = xy.sin();
    let coef1 = expx2 * erfcx_unchecked(y) - SUM_C * y * s1;
    let coef2 = SUM_C * x * expx2;

    let re = coef1 * cos2xy + coef2 * sinxy * sinc(xy, sinxy) + 0.5 * SUM_C * y * s23;
    let im = if y > W_SUM_DROP_IM_Y {
        0.5 * SUM_C * s54
    } else {
        coef2 * sinc(2.0 * xy, sin2xy) - coef1 * sin2xy + 0.5 * SUM_C * s54
    };
    Complex64::new(re, im)
}

// ---------------------------------------------------------------------------
// complex erf

/// erf(z) for complex z.
pub fn complex_erf(z: Complex64) -> Result<Complex64> {
    let (x, y) = (z.re, z.im);
    if !(x.is_finite() && y.is_finite()) {
        return Err(Error::NonFinite("complex_erf"));
    }
    if y == 0.0 {
        return Ok(Complex64::new(erf_unchecked(x), y));
    }
    if x == 0.0 {
        // erf(iy) = i e^{y²} Im w(y) = i (2/√π) e^{y²} D(y)
        if y * y > 709.0 {
            return Err(Error::Overflow("complex_erf"));
        }
        return Ok(Complex64::new(x, (y * y).exp() * FRAC_2_SQRT_PI * dawson_unchecked(y)));
    }

    let m_re_z2 = (y - x) * (x + y); // Re(−z²)
    let m_im_z2 = -2.0 * x * y; // Im(−z²)
    if m_re_z2 < -750.0 {
        return Ok(Complex64::new(1.0f64.copysign(x), 0.0));
    }

    if x.abs() < 8e-2 {
        if y.abs() < 1e-2 {
            return Ok(erf_taylor(z, m_re_z2, m_im_z2));
        } else if m_im_z2.abs() < 5e-3 && x.abs() < 5e-3 {
            return erf_taylor_near_imaginary(x, y);
        }
    }

    if m_re_z2 > 709.0 {
        return Err(Error::Overflow("complex_erf"));
    }
    let e = m_re_z2.exp();
    let (s, c) = m_im_z2.sin_cos();
    let phase = Complex64::new(c, s);
    let r = if x >= 0.0 {
        // 1 − e^{−z²} w(iz)
        1.0 - e * (phase * w_upper(-y, x))
    } else {
        // e^{−z²} w(−iz) − 1
        e * (phase * w_upper(y, -x)) - 1.0
    };
    if r.re.is_finite() && r.im.is_finite() {
        Ok(r)
    } else {
        Err(Error::Overflow("complex_erf"))
    }
}

/// erf(z) = (2/√π) z (1 − z²/3 + z⁴/10 − z⁶/42 + z⁸/216 − …) for small |z|.
fn erf_taylor(z: Complex64, m_re_z2: f64, m_im_z2: f64) -> Complex64 {
    let mz2 = Complex64::new(m_re_z2, m_im_z2);
    z * (FRAC_2_SQRT_PI
        + mz2
            * (0.376_126_389_031_837_5
                + mz2
                    * (0.112_837_916_709_551_26
                        + mz2 * (0.026_866_170_645_131_252 + mz2 * 0.005_223_977_625_442_188))))
}

/// Expansion in small x about the imaginary axis:
/// erf(x+iy) = erf(iy) + (2/√π) e^{y²} [x(1 − x²(1+2y²)/3 + …) − i x² y (1 − x²(3+2y²)/6 + …)].
fn erf_taylor_near_imaginary(x: f64, y: f64) -> Result<Complex64> {
    let (x2, y2) = (x * x, y * y);
    if y2 > 709.0 {
        return Err(Error::Overflow("complex_erf"));
    }
    let expy2 = y2.exp();
    let w_im = FRAC_2_SQRT_PI * dawson_unchecked(y);
    Ok(Complex64::new(
        expy2
            * x
            * (FRAC_2_SQRT_PI - x2 * (0.376_126_389_031_837_5 + 0.752_252_778_063_675 * y2)
                + x2 * x2
                    * (0.112_837_916_709_551_26
                        + y2 * (0.451_351_666_838_205 + 0.150_450_555_612_735 * y2))),
        expy2
            * (w_im
                - x2 * y
                    * (FRAC_2_SQRT_PI
                        - x2 * (0.564_189_583_547_756_3 + 0.376_126_389_031_837_5 * y2))),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_values() {
        assert_eq!(erfc_real(0.0).unwrap(), 1.0);
        assert_eq!(dawson(0.0).unwrap(), 0.0);
        assert_eq!(faddeeva_w(Complex64::new(0.0, 0.0)).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(complex_erf(Complex64::new(0.0, 0.0)).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn known_digits() {
        let rel = |a: f64, b: f64| ((a - b) / b).abs();
        assert!(rel(erfc_real(1.0).unwrap(), 0.157_299_207_050_285_13) < 1e-15);
        assert!(rel(dawson(1.0).unwrap(), 0.538_079_506_912_768_4) < 1e-15);
        let w = faddeeva_w(Complex64::new(0.0, 1.0)).unwrap();
        assert!(rel(w.re, 0.427_583_576_155_807) < 1e-14);
        let e = complex_erf(Complex64::new(0.0, 1.0)).unwrap();
        assert!(rel(e.im, 1.650_425_758_797_543) < 1e-14);
    }

    #[test]
    fn tails() {
        assert_eq!(erfc_real(30.0).unwrap(), 0.0);
        assert_eq!(erfc_real(-30.0).unwrap(), 2.0);
        assert!((dawson(50.0).unwrap() - 0.01).abs() <= 1e-5);
        assert!(erfcx(-27.0).is_err());
    }

    #[test]
    fn non_finite_rejected() {
        assert!(erfc_real(f64::NAN).is_err());
        assert!(dawson(f64::INFINITY).is_err());
        assert!(faddeeva_w(Complex64::new(f64::NAN, 0.0)).is_err());
        assert!(complex_erf(Complex64::new(0.0, f64::NEG_INFINITY)).is_err());
    }

    #[test]
    fn reflection_overflow_is_an_error() {
        assert!(matches!(
            faddeeva_w(Complex64::new(1.0, -40.0)),
            Err(Error::Overflow(_))
        ));
    }

    #[test]
    fn dawson_branches_join() {
        for &b in &[DAWSON_SERIES_MAX, DAWSON_ASYMPTOTIC_MIN] {
            let lo = dawson(b * (1.0 - 1e-15)).unwrap();
            let hi = dawson(b * (1.0 + 1e-15)).unwrap();
            assert!(((lo - hi) / hi).abs() < 1e-13, "{b}: {lo} vs {hi}");
        }
    }
}
