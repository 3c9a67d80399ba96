//! Dense one- to three-qubit density matrices, partial transposes and traces,
//! and negativities from the spectrum.

pub mod eigen;

use std::fmt;

use num_complex::Complex64;

use crate::detector::MatrixElements;
use crate::error::{Error, Result};

pub use eigen::hermitian_eigenvalues;

/// Eigenvalues above −NEGATIVITY_CLAMP count as zero.
pub const NEGATIVITY_CLAMP: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Party {
    A,
    B,
    C,
}

impl Party {
    pub const ALL: [Party; 3] = [Party::A, Party::B, Party::C];
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

// Basis ordering, the single source of truth for every index map below.
// Row k of a matrix over factors (f0, f1, f2) is the product state with the
// occupation numbers BASIS3[k]. Three qubits are ordered by excitation number
// first: |000>, |001>, |010>, |100>, |011>, |101>, |110>, |111>. With fewer
// qubits this coincides with plain binary order.
const BASIS3: [[u8; 3]; 8] = [
    [0, 0, 0],
    [0, 0, 1],
    [0, 1, 0],
    [1, 0, 0],
    [0, 1, 1],
    [1, 0, 1],
    [1, 1, 0],
    [1, 1, 1],
];
const BASIS2: [[u8; 3]; 4] = [[0, 0, 0], [0, 1, 0], [1, 0, 0], [1, 1, 0]];
const BASIS1: [[u8; 3]; 2] = [[0, 0, 0], [1, 0, 0]];

fn basis(qubits: usize) -> &'static [[u8; 3]] {
    match qubits {
        1 => &BASIS1,
        2 => &BASIS2,
        3 => &BASIS3,
        _ => unreachable!("1 to 3 qubits"),
    }
}

fn index_of(qubits: usize, bits: [u8; 3]) -> usize {
    basis(qubits)
        .iter()
        .position(|b| *b == bits)
        .expect("occupation pattern is in the basis")
}

/// How much of the spectrum a negativity looks at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumMode {
    /// The full partial-transpose spectrum.
    Exact,
    /// Drop the |0…0> row and column before diagonalising. For states that
    /// are only correct to O(λ²) this is the consistent (degenerate
    /// perturbation theory) spectrum: the vacuum block of the truncated state
    /// otherwise contributes spurious O(λ⁴) negative eigenvalues.
    LeadingOrder,
}

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Hermitian matrix over one to three detector qubits (value type, 8×8 storage).
#[derive(Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    parties: [Party; 3],
    qubits: usize,
    data: [[Complex64; 8]; 8],
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DensityMatrix {:?}", self.parties())?;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                write!(f, " {:>12.5e}{:+.5e}i", self.data[i][j].re, self.data[i][j].im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl DensityMatrix {
    /// Row-major entries over the given factors (1 to 3 distinct parties).
    pub fn from_entries(parties: &[Party], entries: &[Complex64]) -> Result<Self> {
        let qubits = parties.len();
        if !(1..=3).contains(&qubits) {
            return Err(Error::Config(format!("{qubits} parties; expected 1 to 3")));
        }
        for (i, p) in parties.iter().enumerate() {
            if parties[..i].contains(p) {
                return Err(Error::Config(format!("party {p} listed twice")));
            }
        }
        let dim = 1 << qubits;
        if entries.len() != dim * dim {
            return Err(Error::Config(format!(
                "{} entries for a {dim}x{dim} matrix",
                entries.len()
            )));
        }
        let mut m = Self::zeros(parties);
        for i in 0..dim {
            for j in 0..dim {
                m.data[i][j] = entries[i * dim + j];
            }
        }
        Ok(m)
    }

    fn zeros(parties: &[Party]) -> Self {
        let mut ps = [Party::A; 3];
        ps[..parties.len()].copy_from_slice(parties);
        Self {
            parties: ps,
            qubits: parties.len(),
            data: [[ZERO; 8]; 8],
        }
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn parties(&self) -> &[Party] {
        &self.parties[..self.qubits]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i][j] = v;
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        assert!(i < self.dim() && j < self.dim());
        self.data[i][j]
    }

    /// Row-major copy of the entries.
    pub fn entries(&self) -> Vec<Complex64> {
        let n = self.dim();
        (0..n * n).map(|k| self.data[k / n][k % n]).collect()
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.data[i][i]).sum()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        eigen::hermiticity_defect(&self.entries(), self.dim())
    }

    fn factor(&self, party: Party) -> Result<usize> {
        self.parties()
            .iter()
            .position(|&p| p == party)
            .ok_or(Error::MissingParty(party))
    }

    /// Transpose of the given factor: ⟨i'jk|ρ^T|ij'k'⟩ = ⟨ijk|ρ|i'j'k'⟩ (pure index permutation).
    pub fn partial_transpose(&self, party: Party) -> Result<Self> {
        let k = self.factor(party)?;
        let n = self.qubits;
        let b = basis(n);
        let mut out = *self;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let (mut bi, mut bj) = (b[i], b[j]);
                std::mem::swap(&mut bi[k], &mut bj[k]);
                out.data[i][j] = self.data[index_of(n, bi)][index_of(n, bj)];
            }
        }
        Ok(out)
    }

    /// Trace over the given factor.
    pub fn partial_trace(&self, party: Party) -> Result<Self> {
        let k = self.factor(party)?;
        if self.qubits == 1 {
            return Err(Error::Config("cannot trace out the last qubit".into()));
        }
        let n = self.qubits;
        let rest: Vec<Party> = self.parties().iter().copied().filter(|&p| p != party).collect();
        let mut out = Self::zeros(&rest);
        let big = basis(n);
        for (i, bi) in basis(n - 1).iter().enumerate() {
            for (j, bj) in basis(n - 1).iter().enumerate() {
                let mut acc = ZERO;
                for s in 0..2u8 {
                    let lift = |small: &[u8; 3]| {
                        let mut v = [0u8; 3];
                        let mut src = 0;
                        for (f, slot) in v.iter_mut().enumerate().take(n) {
                            if f == k {
                                *slot = s;
                            } else {
                                *slot = small[src];
                                src += 1;
                            }
                        }
                        v
                    };
                    let (ri, rj) = (lift(bi), lift(bj));
                    debug_assert!(big.contains(&ri) && big.contains(&rj));
                    acc += self.data[index_of(n, ri)][index_of(n, rj)];
                }
                out.data[i][j] = acc;
            }
        }
        Ok(out)
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.entries(), self.dim())
    }

    /// Eigenvalues of the block without the |0…0> row and column, ascending.
    pub fn excited_block_eigenvalues(&self) -> Result<Vec<f64>> {
        let n = self.dim() - 1;
        let mut m = Vec::with_capacity(n * n);
        for i in 1..=n {
            for j in 1..=n {
                m.push(self.data[i][j]);
            }
        }
        hermitian_eigenvalues(&m, n)
    }

    /// Negativity across the cut `party | rest`.
    pub fn negativity(&self, party: Party, mode: SpectrumMode) -> Result<f64> {
        let pt = self.partial_transpose(party)?;
        let ev = match mode {
            SpectrumMode::Exact => pt.eigenvalues()?,
            SpectrumMode::LeadingOrder => pt.excited_block_eigenvalues()?,
        };
        Ok(negative_mass(&ev))
    }
}

/// Σ|λ| over eigenvalues below −NEGATIVITY_CLAMP; never a tiny negative number.
pub fn negative_mass(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .filter(|&&l| l < -NEGATIVITY_CLAMP)
        .map(|l| -l)
        .sum::<f64>()
        + 0.0
}

/// Leading-order three-detector state in the basis above.
pub fn build_rho(me: &MatrixElements) -> DensityMatrix {
    let mut m = DensityMatrix::zeros(&Party::ALL);
    let d = &mut m.data;
    let p = Complex64::new(me.p, 0.0);
    d[0][0] = Complex64::new(1.0 - 3.0 * me.p, 0.0);
    d[1][1] = p;
    d[2][2] = p;
    d[3][3] = p;
    // single-excitation block: |001>=C, |010>=B, |100>=A
    let c = |v: f64| Complex64::new(v, 0.0);
    d[1][2] = c(me.c_bc);
    d[2][1] = c(me.c_bc);
    d[1][3] = c(me.c_ac);
    d[3][1] = c(me.c_ac);
    d[2][3] = c(me.c_ab);
    d[3][2] = c(me.c_ab);
    // ground state against double excitations |011>, |101>, |110>
    for (k, x) in [(4, me.x_bc), (5, me.x_ac), (6, me.x_ab)] {
        d[k][0] = x;
        d[0][k] = x.conj();
    }
    m
}
