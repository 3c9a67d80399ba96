//! π-tangle: generic spectral route and the geometry-specific closed forms.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::detector::MatrixElements;
use crate::error::{Error, Result};
use crate::qubit::{DensityMatrix, Party, SpectrumMode};

/// Arccos arguments this far outside [−1, 1] are clamped; further is a bug.
pub const ARCCOS_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PiTangleResult {
    pub pi: f64,
    pub pi_a: f64,
    pub pi_b: f64,
    pub pi_c: f64,
    pub n_a_bc: f64,
    pub n_b_ac: f64,
    pub n_c_ab: f64,
    pub n_ab: f64,
    pub n_ac: f64,
    pub n_bc: f64,
}

impl PiTangleResult {
    /// Assemble from one-vs-rest [A(BC), B(AC), C(AB)] and pair [AB, AC, BC] negativities.
    pub fn from_negativities(one_vs_rest: [f64; 3], pairs: [f64; 3]) -> Self {
        let [n_a_bc, n_b_ac, n_c_ab] = one_vs_rest;
        let [n_ab, n_ac, n_bc] = pairs;
        let pi_a = n_a_bc * n_a_bc - n_ab * n_ab - n_ac * n_ac;
        let pi_b = n_b_ac * n_b_ac - n_ab * n_ab - n_bc * n_bc;
        let pi_c = n_c_ab * n_c_ab - n_ac * n_ac - n_bc * n_bc;
        Self {
            pi: (pi_a + pi_b + pi_c) / 3.0,
            pi_a,
            pi_b,
            pi_c,
            n_a_bc,
            n_b_ac,
            n_c_ab,
            n_ab,
            n_ac,
            n_bc,
        }
    }

    pub fn one_vs_rest(&self) -> [f64; 3] {
        [self.n_a_bc, self.n_b_ac, self.n_c_ab]
    }

    pub fn pairs(&self) -> [f64; 3] {
        [self.n_ab, self.n_ac, self.n_bc]
    }

    /// π, π_A, π_B, π_C and the six negativities, in CSV column order.
    pub fn fields(&self) -> [f64; 10] {
        [
            self.pi, self.pi_a, self.pi_b, self.pi_c, self.n_a_bc, self.n_b_ac, self.n_c_ab,
            self.n_ab, self.n_ac, self.n_bc,
        ]
    }

    /// Largest absolute difference over every field.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.fields()
            .iter()
            .zip(other.fields())
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Negativities from the spectra of the partial transposes of ρ and of its
/// three two-detector reductions.
pub fn pi_tangle_general(rho: &DensityMatrix, mode: SpectrumMode) -> Result<PiTangleResult> {
    let mut one = [0.0; 3];
    for (slot, party) in one.iter_mut().zip(Party::ALL) {
        *slot = rho.negativity(party, mode)?;
    }
    // AB = Tr_C, AC = Tr_B, BC = Tr_A; transpose the first remaining factor
    let pair = |traced: Party, first: Party| -> Result<f64> {
        rho.partial_trace(traced)?.negativity(first, mode)
    };
    let pairs = [
        pair(Party::C, Party::A)?,
        pair(Party::B, Party::A)?,
        pair(Party::A, Party::B)?,
    ];
    Ok(PiTangleResult::from_negativities(one, pairs))
}

#[inline]
fn clamp0(v: f64) -> f64 {
    if v > 0.0 {
        v
    } else {
        0.0
    }
}

/// max[0, |X| − P]
pub fn pair_negativity(p: f64, x: Complex64) -> f64 {
    clamp0(x.norm() - p)
}

/// max[0, √(C² + 8|X|²)/2 − C/2 − P]: one-vs-rest negativity when both partners share X.
pub fn symmetric_one_vs_rest(p: f64, c: f64, abs_x: f64) -> f64 {
    clamp0(0.5 * (c * c + 8.0 * abs_x * abs_x).sqrt() - 0.5 * c - p)
}

/// The two clamped branch terms of a one-vs-rest negativity,
/// [cos(π/3 + θ) branch, sin(π/6 + θ) branch], for correlation `c` between
/// the two partners and their coherences `x1`, `x2` with the singled-out detector.
///
/// The candidate negative eigenvalues of the partial transpose are P − μ, with
/// μ the two largest roots of μ³ − qμ + r = 0, q = c² + |x1|² + |x2|²,
/// r = 2c Re(x1 x̄2); trigonometric solution with 3θ = arccos(3√3 r / 2q^{3/2}).
pub fn one_vs_rest_branches(p: f64, c: f64, x1: Complex64, x2: Complex64) -> Result<[f64; 2]> {
    let q = c * c + x1.norm_sqr() + x2.norm_sqr();
    if q == 0.0 {
        return Ok([0.0, 0.0]);
    }
    let r = 2.0 * c * (x1 * x2.conj()).re;
    let mut t = 3.0 * 3f64.sqrt() * r / (2.0 * q.powf(1.5));
    if t.abs() > 1.0 {
        if t.abs() > 1.0 + ARCCOS_SLACK || t.is_nan() {
            return Err(Error::ArccosDomain(t));
        }
        t = t.signum();
    }
    let theta = t.acos() / 3.0;
    let amp = 2.0 / 3f64.sqrt() * q.sqrt();
    Ok([
        clamp0(amp * (PI / 3.0 + theta).cos() - p),
        clamp0(amp * (PI / 6.0 + theta).sin() - p),
    ])
}

pub fn one_vs_rest(p: f64, c: f64, x1: Complex64, x2: Complex64) -> Result<f64> {
    let [a, b] = one_vs_rest_branches(p, c, x1, x2)?;
    Ok(a + b)
}

/// Equilateral: every pair shares (C, X).
pub fn equilateral_closed(p: f64, c: f64, abs_x: f64) -> PiTangleResult {
    let n = symmetric_one_vs_rest(p, c, abs_x);
    let m = clamp0(abs_x - p);
    PiTangleResult::from_negativities([n; 3], [m; 3])
}

/// π = max[0, √(C²+8|X|²)/2 − C/2 − P]² − 2 max[0, |X| − P]²
pub fn pi_equilateral_closed(p: f64, c: f64, abs_x: f64) -> f64 {
    let n = symmetric_one_vs_rest(p, c, abs_x);
    let m = clamp0(abs_x - p);
    n * n - 2.0 * m * m
}

/// Linear chain A–B–C with spacing L: pairs AB, BC at L and AC at 2L.
pub fn linear_closed(
    p: f64,
    c_l: f64,
    c_2l: f64,
    x_l: Complex64,
    x_2l: Complex64,
) -> Result<PiTangleResult> {
    let ends = one_vs_rest(p, c_l, x_l, x_2l)?;
    let middle = symmetric_one_vs_rest(p, c_2l, x_l.norm());
    let m_l = pair_negativity(p, x_l);
    let m_2l = pair_negativity(p, x_2l);
    Ok(PiTangleResult::from_negativities(
        [ends, middle, ends],
        [m_l, m_2l, m_l],
    ))
}

/// π = ⅔N_{A(BC)}² + ⅓N_{B(AC)}² − (4/3)max[0,|X_L|−P]² − ⅔max[0,|X_2L|−P]²
pub fn pi_linear_closed(p: f64, c_l: f64, c_2l: f64, x_l: Complex64, x_2l: Complex64) -> Result<f64> {
    let ends = one_vs_rest(p, c_l, x_l, x_2l)?;
    let middle = symmetric_one_vs_rest(p, c_2l, x_l.norm());
    let m_l = pair_negativity(p, x_l);
    let m_2l = pair_negativity(p, x_2l);
    Ok(2.0 / 3.0 * ends * ends + middle * middle / 3.0
        - 4.0 / 3.0 * m_l * m_l
        - 2.0 / 3.0 * m_2l * m_2l)
}

/// The end-detector negativity of the linear chain with only the single
/// sin(π/6 − θ) term, i.e. the cos(π/3 + θ) branch alone. Kept to quantify
/// how it differs from the full two-branch expression.
pub fn linear_single_branch_one_vs_rest(p: f64, c_l: f64, x_l: Complex64, x_2l: Complex64) -> Result<f64> {
    Ok(one_vs_rest_branches(p, c_l, x_l, x_2l)?[0])
}

/// General triangle.
pub fn pi_scalene_closed(me: &MatrixElements) -> Result<PiTangleResult> {
    let p = me.p;
    let one = [
        one_vs_rest(p, me.c_bc, me.x_ab, me.x_ac)?,
        one_vs_rest(p, me.c_ac, me.x_ab, me.x_bc)?,
        one_vs_rest(p, me.c_ab, me.x_ac, me.x_bc)?,
    ];
    let pairs = [
        pair_negativity(p, me.x_ab),
        pair_negativity(p, me.x_ac),
        pair_negativity(p, me.x_bc),
    ];
    Ok(PiTangleResult::from_negativities(one, pairs))
}
