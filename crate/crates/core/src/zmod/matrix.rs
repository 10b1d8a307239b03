use serde::{Deserialize, Serialize};

use super::{add_mod, mul_mod, LinalgError};

/// Dense matrix over `Z/m`, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ZkMatrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl ZkMatrix {
    pub fn zeros(modulus: u64, rows: usize, cols: usize) -> Self {
        ZkMatrix { modulus, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(modulus: u64, n: usize) -> Self {
        let mut a = Self::zeros(modulus, n, n);
        for i in 0..n {
            a.data[i * n + i] = 1 % modulus;
        }
        a
    }

    pub fn from_rows(modulus: u64, rows: &[Vec<u64>]) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, |r| r.len());
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(LinalgError::Dimension { expected: cols, got: bad.len() });
        }
        Ok(ZkMatrix {
            modulus,
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().map(|&x| x % modulus).collect(),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: u64) {
        self.data[i * self.cols + j] = x % self.modulus;
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.modulus, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn mul(&self, other: &ZkMatrix) -> Result<ZkMatrix, LinalgError> {
        if self.modulus != other.modulus {
            return Err(LinalgError::Modulus(self.modulus, other.modulus));
        }
        if self.cols != other.rows {
            return Err(LinalgError::Dimension { expected: self.cols, got: other.rows });
        }
        let m = self.modulus;
        let mut out = Self::zeros(m, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = add_mod(out.data[idx], mul_mod(a, other.get(k, j), m), m);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, f: u64) -> ZkMatrix {
        let m = self.modulus;
        ZkMatrix { data: self.data.iter().map(|&x| mul_mod(x, f, m)).collect(), ..self.clone() }
    }

    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        let m = self.modulus;
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).fold(0, |acc, (&a, &b)| add_mod(acc, mul_mod(a, b, m), m)))
            .collect()
    }

    pub fn determinant(&self) -> u64 {
        assert_eq!(self.rows, self.cols);
        // Laplace expansion; only used on tiny matrices
        fn det(a: &[Vec<u64>], m: u64) -> u64 {
            let n = a.len();
            if n == 1 {
                return a[0][0] % m;
            }
            let mut acc = 0u64;
            for j in 0..n {
                let minor: Vec<Vec<u64>> = a[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect())
                    .collect();
                let term = mul_mod(a[0][j], det(&minor, m), m);
                acc = if j % 2 == 0 { add_mod(acc, term, m) } else { super::sub_mod(acc, term, m) };
            }
            acc
        }
        if self.rows == 0 {
            return 1 % self.modulus;
        }
        det(&self.to_rows(), self.modulus)
    }

    /// Multiplicative order as an element of `GL_n(Z/m)`, if invertible.
    pub fn order(&self) -> Option<u64> {
        let id = Self::identity(self.modulus, self.rows);
        let mut p = self.clone();
        let bound = (self.modulus as u128).pow((self.rows * self.rows) as u32).min(1 << 24) as u64;
        for k in 1..=bound {
            if p == id {
                return Some(k);
            }
            p = p.mul(self).ok()?;
        }
        None
    }
}
