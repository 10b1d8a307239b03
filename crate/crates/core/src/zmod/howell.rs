use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{add_mod, axpy, mul_mod, neg_mod, reduce, scale, unit_normalizer, xgcd, LinalgError};

/// Canonical basis of a submodule of `(Z/m)^n` in Howell normal form.
///
/// Rows are sorted by pivot column, each leading entry divides `m`, entries
/// above a pivot are reduced modulo it, and the span is closed under
/// annihilators: a span element vanishing on the first `j` coordinates lies in
/// the span of the rows whose pivot is beyond `j`. Two generating sets of the
/// same submodule produce identical values.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HowellBasis {
    modulus: u64,
    dim: usize,
    rows: Vec<Vec<u64>>,
}

fn first_nonzero(v: &[u64]) -> Option<usize> {
    v.iter().position(|&x| x != 0)
}

/// Insert `v` into the pivot slots, queueing annihilator multiples of every
/// row that lands in a slot.
fn insert(slots: &mut [Option<Vec<u64>>], queue: &mut Vec<Vec<u64>>, mut v: Vec<u64>, m: u64) {
    while let Some(j) = first_nonzero(&v) {
        match slots[j].take() {
            None => {
                let u = unit_normalizer(v[j], m);
                if u != 1 {
                    v = scale(&v, u, m);
                }
                let d = v[j];
                if d != 1 {
                    queue.push(scale(&v, m / d, m));
                }
                slots[j] = Some(v);
                return;
            }
            Some(b) => {
                let a = b[j];
                let c = v[j];
                if c % a == 0 {
                    axpy(&mut v, neg_mod(c / a, m), &b, m);
                    slots[j] = Some(b);
                    continue;
                }
                let (s, t, g) = xgcd(a as i128, c as i128);
                let (s, t) = (reduce(s, m), reduce(t, m));
                let cg = neg_mod((c as i128 / g) as u64, m);
                let ag = (a as i128 / g) as u64;
                let mut nb = vec![0u64; b.len()];
                let mut nv = vec![0u64; b.len()];
                for k in j..b.len() {
                    nb[k] = add_mod(mul_mod(s, b[k], m), mul_mod(t, v[k], m), m);
                    nv[k] = add_mod(mul_mod(cg, b[k], m), mul_mod(ag, v[k], m), m);
                }
                debug_assert_eq!(nv[j], 0);
                let u = unit_normalizer(nb[j], m);
                if u != 1 {
                    nb = scale(&nb, u, m);
                }
                let d = nb[j];
                if d != 1 {
                    queue.push(scale(&nb, m / d, m));
                }
                slots[j] = Some(nb);
                v = nv;
            }
        }
    }
}

impl HowellBasis {
    pub fn from_rows<I>(modulus: u64, dim: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = Vec<u64>>,
    {
        assert!(modulus >= 2, "modulus must be at least 2");
        let mut slots: Vec<Option<Vec<u64>>> = vec![None; dim];
        let mut queue: Vec<Vec<u64>> = rows
            .into_iter()
            .map(|r| {
                assert_eq!(r.len(), dim, "row length");
                r.into_iter().map(|x| x % modulus).collect()
            })
            .collect();
        queue.reverse();
        while let Some(v) = queue.pop() {
            insert(&mut slots, &mut queue, v, modulus);
        }
        let mut rows: Vec<Vec<u64>> = slots.into_iter().flatten().collect();
        // reduce above pivots
        for i in 0..rows.len() {
            let j = first_nonzero(&rows[i]).unwrap();
            let d = rows[i][j];
            let (head, tail) = rows.split_at_mut(i);
            let pivot_row = &tail[0];
            for r in head.iter_mut() {
                let f = r[j] / d;
                if f != 0 {
                    axpy(r, neg_mod(f, modulus), pivot_row, modulus);
                }
            }
        }
        HowellBasis { modulus, dim, rows }
    }

    pub fn zero(modulus: u64, dim: usize) -> Self {
        HowellBasis { modulus, dim, rows: Vec::new() }
    }

    pub fn full(modulus: u64, dim: usize) -> Self {
        let rows = (0..dim)
            .map(|i| {
                let mut r = vec![0; dim];
                r[i] = 1;
                r
            })
            .collect();
        HowellBasis { modulus, dim, rows }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn pivots(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.rows.iter().map(|r| {
            let j = first_nonzero(r).unwrap();
            (j, r[j])
        })
    }

    fn check_vec(&self, v: &[u64]) -> Result<(), LinalgError> {
        if v.len() != self.dim {
            return Err(LinalgError::Dimension { expected: self.dim, got: v.len() });
        }
        Ok(())
    }

    fn check_same(&self, other: &HowellBasis) -> Result<(), LinalgError> {
        if self.modulus != other.modulus {
            return Err(LinalgError::Modulus(self.modulus, other.modulus));
        }
        if self.dim != other.dim {
            return Err(LinalgError::Dimension { expected: self.dim, got: other.dim });
        }
        Ok(())
    }

    /// Coordinates of `v` over the basis rows, or `None` when `v` is not in
    /// the span.
    pub fn coordinates(&self, v: &[u64]) -> Result<Option<Vec<u64>>, LinalgError> {
        self.check_vec(v)?;
        let m = self.modulus;
        let mut w: Vec<u64> = v.iter().map(|&x| x % m).collect();
        let mut coords = vec![0u64; self.rows.len()];
        for (i, (j, d)) in self.pivots().enumerate() {
            let x = w[j];
            if x % d != 0 {
                return Ok(None);
            }
            let f = x / d;
            if f != 0 {
                axpy(&mut w, neg_mod(f, m), &self.rows[i], m);
                coords[i] = f;
            }
        }
        Ok(w.iter().all(|&x| x == 0).then_some(coords))
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        matches!(self.coordinates(v), Ok(Some(_)))
    }

    /// Canonical representative of the coset `v + span`.
    pub fn residue(&self, v: &[u64]) -> Vec<u64> {
        let m = self.modulus;
        let mut w: Vec<u64> = v.iter().map(|&x| x % m).collect();
        for (i, (j, d)) in self.pivots().enumerate() {
            let f = w[j] / d;
            if f != 0 {
                axpy(&mut w, neg_mod(f, m), &self.rows[i], m);
            }
        }
        w
    }

    pub fn sum(&self, other: &HowellBasis) -> Result<HowellBasis, LinalgError> {
        self.check_same(other)?;
        Ok(HowellBasis::from_rows(
            self.modulus,
            self.dim,
            self.rows.iter().chain(other.rows.iter()).cloned(),
        ))
    }

    pub fn intersection(&self, other: &HowellBasis) -> Result<HowellBasis, LinalgError> {
        self.check_same(other)?;
        let n = self.dim;
        let stacked = self
            .rows
            .iter()
            .map(|r| {
                let mut row = r.clone();
                row.extend_from_slice(r);
                row
            })
            .chain(other.rows.iter().map(|r| {
                let mut row = r.clone();
                row.extend(std::iter::repeat_n(0, n));
                row
            }));
        let h = HowellBasis::from_rows(self.modulus, 2 * n, stacked);
        Ok(HowellBasis {
            modulus: self.modulus,
            dim: n,
            rows: h
                .rows
                .iter()
                .filter(|r| first_nonzero(r).unwrap() >= n)
                .map(|r| r[n..].to_vec())
                .collect(),
        })
    }

    pub fn is_subset_of(&self, other: &HowellBasis) -> bool {
        self.modulus == other.modulus
            && self.dim == other.dim
            && self.rows.iter().all(|r| other.contains(r))
    }

    /// Number of elements in the span.
    pub fn cardinality(&self) -> BigUint {
        self.pivots()
            .fold(BigUint::from(1u32), |acc, (_, d)| acc * BigUint::from(self.modulus / d))
    }

    /// `|span|` as a `u64`, when it fits.
    pub fn cardinality_u64(&self) -> Option<u64> {
        self.pivots()
            .try_fold(1u64, |acc, (_, d)| acc.checked_mul(self.modulus / d))
    }

    /// `m^n / |span|`.
    pub fn submodule_index(&self) -> BigUint {
        BigUint::from(self.modulus).pow(self.dim as u32) / self.cardinality()
    }

    /// `[other : self]` for `self ⊆ other`.
    pub fn index_in(&self, other: &HowellBasis) -> Result<BigUint, LinalgError> {
        self.check_same(other)?;
        if !self.is_subset_of(other) {
            return Err(LinalgError::NotContained);
        }
        Ok(other.cardinality() / self.cardinality())
    }

    /// Image of the span under a coordinate map given row-by-row: row `i` of
    /// the result generators is `f(rows[i])`.
    pub fn map_rows<F>(&self, dim: usize, f: F) -> HowellBasis
    where
        F: FnMut(&Vec<u64>) -> Vec<u64>,
    {
        HowellBasis::from_rows(self.modulus, dim, self.rows.iter().map(f))
    }

    /// Every element of the span. Only for small modules.
    pub fn enumerate(&self) -> Vec<Vec<u64>> {
        let m = self.modulus;
        let mut out = vec![vec![0u64; self.dim]];
        for (i, (_, d)) in self.pivots().enumerate() {
            let count = m / d;
            let mut next = Vec::with_capacity(out.len() * count as usize);
            for v in &out {
                for c in 0..count {
                    let mut w = v.clone();
                    axpy(&mut w, c, &self.rows[i], m);
                    next.push(w);
                }
            }
            out = next;
        }
        out
    }
}

/// Left kernel `{x : x·A = 0}` of the matrix whose rows are `rows`.
pub fn kernel(modulus: u64, rows: &[Vec<u64>], cols: usize) -> HowellBasis {
    let r = rows.len();
    let aug = rows.iter().enumerate().map(|(i, row)| {
        let mut v = row.clone();
        v.resize(cols + r, 0);
        v[cols + i] = 1;
        v
    });
    let h = HowellBasis::from_rows(modulus, cols + r, aug);
    HowellBasis {
        modulus,
        dim: r,
        rows: h
            .rows
            .iter()
            .filter(|row| first_nonzero(row).unwrap() >= cols)
            .map(|row| row[cols..].to_vec())
            .collect(),
    }
}

/// Expresses vectors as combinations of a fixed generator list.
#[derive(Clone, Debug)]
pub struct LinearSolver {
    modulus: u64,
    dim: usize,
    gens: usize,
    // Howell form of [gens | I]; only rows with pivot in the left block
    aug: Vec<Vec<u64>>,
}

impl LinearSolver {
    pub fn new(modulus: u64, dim: usize, gens: &[Vec<u64>]) -> Self {
        let g = gens.len();
        let rows = gens.iter().enumerate().map(|(i, row)| {
            let mut v = row.clone();
            v.resize(dim + g, 0);
            v[dim + i] = 1;
            v
        });
        let h = HowellBasis::from_rows(modulus, dim + g, rows);
        let aug = h
            .rows
            .into_iter()
            .filter(|row| first_nonzero(row).unwrap() < dim)
            .collect();
        LinearSolver { modulus, dim, gens: g, aug }
    }

    /// Coefficients `c` with `Σ c_i gens_i = v`, if any.
    pub fn solve(&self, v: &[u64]) -> Option<Vec<u64>> {
        let m = self.modulus;
        assert_eq!(v.len(), self.dim);
        let mut w: Vec<u64> = v.iter().map(|&x| x % m).collect();
        w.resize(self.dim + self.gens, 0);
        for row in &self.aug {
            let j = first_nonzero(row).unwrap();
            let d = row[j];
            let x = w[j];
            if x % d != 0 {
                return None;
            }
            if x != 0 {
                axpy(&mut w, neg_mod(x / d, m), row, m);
            }
        }
        if w[..self.dim].iter().any(|&x| x != 0) {
            return None;
        }
        Some(w[self.dim..].iter().map(|&x| neg_mod(x, m)).collect())
    }
}
