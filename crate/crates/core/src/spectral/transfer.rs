use std::ops::Mul;

use crate::words::{Alphabet, Letter};

/// Real value of each letter, as seen by the operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential(Vec<f64>);

impl Potential {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    /// Letter values scaled by `coupling`.
    pub fn from_alphabet(alphabet: &Alphabet, coupling: f64) -> Self {
        Self(alphabet.letters().map(|a| coupling * alphabet.value(a)).collect())
    }

    pub fn value(&self, letter: Letter) -> f64 {
        self.0[letter as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    /// The potential along `word`.
    pub fn sites(&self, word: &[Letter]) -> Vec<f64> {
        word.iter().map(|&l| self.value(l)).collect()
    }
}

/// 2x2 real matrix acting on `(u(n+1), u(n))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix(pub [[f64; 2]; 2]);

impl TransferMatrix {
    pub const IDENTITY: TransferMatrix = TransferMatrix([[1.0, 0.0], [0.0, 1.0]]);

    /// One step at a site with potential `v`.
    pub fn step(v: f64, energy: f64) -> Self {
        TransferMatrix([[energy - v, -1.0], [1.0, 0.0]])
    }

    pub fn det(&self) -> f64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, x| m.max(x.abs()))
    }
}

impl Mul for TransferMatrix {
    type Output = TransferMatrix;

    fn mul(self, rhs: TransferMatrix) -> TransferMatrix {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        TransferMatrix(out)
    }
}

/// `T(v_n) ... T(v_1)`: the first site is the rightmost factor.
pub fn transfer_matrix(sites: &[f64], energy: f64) -> TransferMatrix {
    sites
        .iter()
        .fold(TransferMatrix::IDENTITY, |m, &v| TransferMatrix::step(v, energy) * m)
}

const RESCALE_ABOVE: f64 = 1e150;

/// Trace of [`transfer_matrix`], rescaling on the way so long products do not
/// overflow to NaN; values far outside `[-2, 2]` may come back infinite.
pub fn trace(sites: &[f64], energy: f64) -> f64 {
    let (m, log_scale) = scaled_product(sites, energy);
    m.trace() * log_scale.exp()
}

/// Entry `(1, 0)` of the transfer matrix, i.e. `u(n)` for the solution with
/// `u(0) = 0`, `u(1) = 1`; same rescaling as [`trace`].
pub fn lower_left(sites: &[f64], energy: f64) -> f64 {
    let (m, log_scale) = scaled_product(sites, energy);
    m.0[1][0] * log_scale.exp()
}

fn scaled_product(sites: &[f64], energy: f64) -> (TransferMatrix, f64) {
    let mut m = TransferMatrix::IDENTITY;
    let mut log_scale = 0.0;
    for &v in sites {
        m = TransferMatrix::step(v, energy) * m;
        let big = m.max_abs();
        if big > RESCALE_ABOVE {
            m = TransferMatrix(m.0.map(|r| r.map(|x| x / big)));
            log_scale += big.ln();
        }
    }
    (m, log_scale)
}
