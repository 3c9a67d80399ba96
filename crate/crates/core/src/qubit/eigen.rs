//! Cyclic Jacobi eigenvalues for small dense Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot a_pq with a diagonal
//! unitary, then applies the classical real Jacobi rotation, so the pivot is
//! annihilated exactly and the diagonal stays real.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 64;
/// Converged once the off-diagonal Frobenius norm drops below this times ‖m‖_F.
pub const OFF_DIAGONAL_TOL: f64 = 1e-15;
/// Allowed |m_ij − conj(m_ji)|, relative to max(1, max |m_ij|).
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Largest |m_ij − conj(m_ji)| over the row-major n×n matrix.
pub fn hermiticity_defect(m: &[Complex64], n: usize) -> f64 {
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[i * n + j] - m[j * n + i].conj()).norm());
        }
    }
    dev
}

/// All n eigenvalues of a row-major Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &[Complex64], n: usize) -> Result<Vec<f64>> {
    assert_eq!(m.len(), n * n, "expected a {n}x{n} matrix");
    if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite("hermitian_eigenvalues"));
    }
    let scale = m.iter().fold(0.0f64, |s, z| s.max(z.norm()));
    let dev = hermiticity_defect(m, n);
    if dev > HERMITIAN_TOL * scale.max(1.0) {
        return Err(Error::NotHermitian(dev));
    }

    // work on the Hermitian part; diagonal is real from here on
    let mut a = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        a[i * n + i] = Complex64::new(m[i * n + i].re, 0.0);
        for j in i + 1..n {
            let v = 0.5 * (m[i * n + j] + m[j * n + i].conj());
            a[i * n + j] = v;
            a[j * n + i] = v.conj();
        }
    }

    let frob = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let tol = OFF_DIAGONAL_TOL * frob;
    let off = |a: &[Complex64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[i * n + j].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    while off(&a) > tol {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence(MAX_SWEEPS));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, n, p, q);
            }
        }
    }

    let mut ev: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

fn rotate(a: &mut [Complex64], n: usize, p: usize, q: usize) {
    let apq = a[p * n + q];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    // skip pivots already negligible against both diagonal entries
    if app.abs() + 100.0 * g == app.abs() && aqq.abs() + 100.0 * g == aqq.abs() {
        a[p * n + q] = Complex64::new(0.0, 0.0);
        a[q * n + p] = Complex64::new(0.0, 0.0);
        return;
    }

    // D = diag(.., e^{-iφ} at q, ..) makes the pivot real and positive
    let ph = apq / g;
    for r in 0..n {
        a[r * n + q] *= ph.conj();
        a[q * n + r] *= ph;
    }

    let theta = (aqq - app) / (2.0 * g);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    for r in 0..n {
        if r == p || r == q {
            continue;
        }
        let arp = a[r * n + p];
        let arq = a[r * n + q];
        let np = c * arp - s * arq;
        let nq = s * arp + c * arq;
        a[r * n + p] = np;
        a[r * n + q] = nq;
        a[p * n + r] = np.conj();
        a[q * n + r] = nq.conj();
    }
    a[p * n + p] = Complex64::new(app - t * g, 0.0);
    a[q * n + q] = Complex64::new(aqq + t * g, 0.0);
    a[p * n + q] = Complex64::new(0.0, 0.0);
    a[q * n + p] = Complex64::new(0.0, 0.0);
}
