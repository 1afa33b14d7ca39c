//! Banded complex LU factorization with partial pivoting.
//!
//! Storage follows the LAPACK `gbtrf` layout: an `(2·kl + ku + 1) × n` array
//! where entry `(i, j)` of the matrix lives in row `kl + ku + i − j` of
//! column `j`. The extra `kl` rows absorb fill-in from row interchanges.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BandError {
    #[error("matrix is singular: zero pivot in column {column}")]
    Singular { column: usize },
    #[error("entry ({row}, {col}) is outside the band")]
    OutsideBand { row: usize, col: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    ldab: usize,
    data: Vec<Complex64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let ldab = 2 * kl + ku + 1;
        Self {
            n,
            kl,
            ku,
            ldab,
            data: vec![Complex64::new(0.0, 0.0); ldab * n],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        j * self.ldab + (self.kl + self.ku + i - j)
    }

    fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && i <= j + self.kl && j <= i + self.ku
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        if self.in_band(i, j) {
            self.data[self.idx(i, j)]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) -> Result<(), BandError> {
        if !self.in_band(i, j) {
            return Err(BandError::OutsideBand { row: i, col: j });
        }
        let k = self.idx(i, j);
        self.data[k] = v;
        Ok(())
    }

    pub fn add(&mut self, i: usize, j: usize, v: Complex64) -> Result<(), BandError> {
        let cur = self.get(i, j);
        self.set(i, j, cur + v)
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// Factors in place; consumes the matrix.
    pub fn factor(self) -> Result<BandLu, BandError> {
        let mut a = self;
        let (n, kl, ku) = (a.n, a.kl, a.ku);
        let kv = kl + ku;
        let mut piv = vec![0usize; n];
        // entry (i, j) with fill-in: stored at row kv + i − j, valid for j ≤ i + kv
        let at = |j: usize, i: usize, ldab: usize| j * ldab + (kv + i - j);
        let scale: f64 = a.data.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for j in 0..n {
            let last = (j + kl).min(n - 1);
            let mut p = j;
            let mut best = a.data[at(j, j, a.ldab)].norm();
            for i in j + 1..=last {
                let v = a.data[at(j, i, a.ldab)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best <= f64::EPSILON * 1e-3 * scale || best == 0.0 {
                return Err(BandError::Singular { column: j });
            }
            piv[j] = p;
            let ucol = (j + kv).min(n - 1);
            if p != j {
                for c in j..=ucol {
                    let (x, y) = (at(c, j, a.ldab), at(c, p, a.ldab));
                    a.data.swap(x, y);
                }
            }
            let pivot = a.data[at(j, j, a.ldab)];
            for i in j + 1..=last {
                let k = at(j, i, a.ldab);
                let l = a.data[k] / pivot;
                a.data[k] = l;
                for c in j + 1..=ucol {
                    let u = a.data[at(c, j, a.ldab)];
                    let t = at(c, i, a.ldab);
                    a.data[t] -= l * u;
                }
            }
        }
        Ok(BandLu { a, piv })
    }
}

#[derive(Debug, Clone)]
pub struct BandLu {
    a: BandMatrix,
    piv: Vec<usize>,
}

impl BandLu {
    pub fn solve(&self, b: &[Complex64]) -> Result<Vec<Complex64>, BandError> {
        let n = self.a.n;
        if b.len() != n {
            return Err(BandError::Dimension { expected: n, got: b.len() });
        }
        let (kl, kv, ldab) = (self.a.kl, self.a.kl + self.a.ku, self.a.ldab);
        let at = |j: usize, i: usize| j * ldab + (kv + i - j);
        let d = &self.a.data;
        let mut x = b.to_vec();
        // forward: apply interchanges and unit-lower L
        for j in 0..n {
            let p = self.piv[j];
            if p != j {
                x.swap(j, p);
            }
            let xj = x[j];
            for i in j + 1..=(j + kl).min(n - 1) {
                x[i] -= d[at(j, i)] * xj;
            }
        }
        // backward: U has bandwidth kv
        for j in (0..n).rev() {
            x[j] /= d[at(j, j)];
            let xj = x[j];
            for i in j.saturating_sub(kv)..j {
                x[i] -= d[at(j, i)] * xj;
            }
        }
        Ok(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solves_random_pentadiagonal_with_pivoting() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 40;
        let mut m = BandMatrix::zeros(n, 2, 2);
        for i in 0..n {
            for j in i.saturating_sub(2)..=(i + 2).min(n - 1) {
                // weak diagonal forces row swaps
                let scale = if i == j { 0.01 } else { 1.0 };
                m.set(i, j, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale)
                    .unwrap();
            }
        }
        let x: Vec<Complex64> = (0..n).map(|k| c(k as f64, 1.0 - k as f64 * 0.5)).collect();
        let b = m.mul_vec(&x);
        let lu = m.factor().unwrap();
        let got = lu.solve(&b).unwrap();
        let err: f64 = got.iter().zip(&x).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(err < 1e-9, "{err}");
    }

    #[test]
    fn rejects_out_of_band_and_singular() {
        let mut m = BandMatrix::zeros(4, 1, 1);
        assert!(m.set(0, 3, c(1.0, 0.0)).is_err());
        m.set(0, 0, c(1.0, 0.0)).unwrap();
        assert!(matches!(m.factor(), Err(BandError::Singular { .. })));
    }
}
