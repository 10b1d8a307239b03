use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::{add_mod, lcm, mul_mod, neg_mod, HowellBasis};

/// The coordinate group `Z/e_1 ⊕ … ⊕ Z/e_r`.
///
/// Subgroups are handled through the embedding `x ↦ ((E/e_i)·x_i)` into
/// `(Z/E)^r`, `E` the exponent, so they can be carried as Howell bases.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FiniteAbelian {
    invariants: Vec<u64>,
}

impl FiniteAbelian {
    pub fn new(invariants: Vec<u64>) -> Self {
        assert!(invariants.iter().all(|&e| e >= 1));
        FiniteAbelian { invariants }
    }

    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    pub fn exponent(&self) -> u64 {
        self.invariants.iter().fold(1, |a, &e| lcm(a, e))
    }

    /// Working modulus of the embedding; at least 2 so Howell bases exist.
    pub fn embedding_modulus(&self) -> u64 {
        self.exponent().max(2)
    }

    pub fn order(&self) -> BigUint {
        self.invariants.iter().fold(BigUint::from(1u32), |a, &e| a * BigUint::from(e))
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.invariants.iter().try_fold(1u64, |a, &e| a.checked_mul(e))
    }

    pub fn zero(&self) -> Vec<u64> {
        vec![0; self.rank()]
    }

    pub fn unit(&self, i: usize) -> Vec<u64> {
        let mut v = self.zero();
        v[i] = 1 % self.invariants[i];
        v
    }

    pub fn normalize(&self, x: &[u64]) -> Vec<u64> {
        x.iter().zip(&self.invariants).map(|(&a, &e)| a % e).collect()
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        x.iter()
            .zip(y)
            .zip(&self.invariants)
            .map(|((&a, &b), &e)| add_mod(a, b, e))
            .collect()
    }

    pub fn neg(&self, x: &[u64]) -> Vec<u64> {
        x.iter().zip(&self.invariants).map(|(&a, &e)| neg_mod(a, e)).collect()
    }

    pub fn sub(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, k: u64, x: &[u64]) -> Vec<u64> {
        x.iter().zip(&self.invariants).map(|(&a, &e)| mul_mod(a, k, e)).collect()
    }

    /// Mixed-radix index of an element, first coordinate fastest.
    pub fn index_of(&self, x: &[u64]) -> usize {
        let mut idx = 0usize;
        for (&a, &e) in x.iter().zip(&self.invariants).rev() {
            idx = idx * e as usize + (a % e) as usize;
        }
        idx
    }

    pub fn element(&self, mut idx: usize) -> Vec<u64> {
        self.invariants
            .iter()
            .map(|&e| {
                let a = (idx % e as usize) as u64;
                idx /= e as usize;
                a
            })
            .collect()
    }

    pub fn embed(&self, x: &[u64]) -> Vec<u64> {
        let big = self.embedding_modulus();
        x.iter()
            .zip(&self.invariants)
            .map(|(&a, &e)| mul_mod(big / e, a % e, big))
            .collect()
    }

    pub fn unembed(&self, y: &[u64]) -> Vec<u64> {
        let big = self.embedding_modulus();
        y.iter()
            .zip(&self.invariants)
            .map(|(&b, &e)| {
                let f = big / e;
                debug_assert_eq!(b % f, 0);
                (b / f) % e
            })
            .collect()
    }

    /// The whole group as a submodule of `(Z/E)^r`.
    pub fn ambient(&self) -> HowellBasis {
        let rows = (0..self.rank()).map(|i| self.embed(&self.unit(i)));
        HowellBasis::from_rows(self.embedding_modulus(), self.rank(), rows)
    }

    pub fn subgroup<'a, I>(&self, gens: I) -> HowellBasis
    where
        I: IntoIterator<Item = &'a Vec<u64>>,
    {
        HowellBasis::from_rows(
            self.embedding_modulus(),
            self.rank(),
            gens.into_iter().map(|g| self.embed(g)),
        )
    }

    /// Matrix–vector product for a homomorphism given with row `i` taken
    /// modulo `e_i` (columns index the source coordinates).
    pub fn apply(&self, mat: &[Vec<u64>], x: &[u64]) -> Vec<u64> {
        mat.iter()
            .zip(&self.invariants)
            .map(|(row, &e)| {
                row.iter()
                    .zip(x)
                    .fold(0u64, |acc, (&a, &b)| add_mod(acc, mul_mod(a, b, e), e))
            })
            .collect()
    }

    /// Product of two endomorphism matrices.
    pub fn compose(&self, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let r = self.rank();
        (0..r)
            .map(|i| {
                let e = self.invariants[i];
                (0..r)
                    .map(|j| (0..r).fold(0u64, |acc, k| add_mod(acc, mul_mod(a[i][k], b[k][j], e), e)))
                    .collect()
            })
            .collect()
    }

    pub fn identity_matrix(&self) -> Vec<Vec<u64>> {
        let r = self.rank();
        (0..r)
            .map(|i| (0..r).map(|j| u64::from(i == j) % self.invariants[i]).collect())
            .collect()
    }

    /// Whether `mat` describes a well-defined endomorphism: `e_i | a_ij·e_j`.
    pub fn is_endomorphism(&self, mat: &[Vec<u64>]) -> bool {
        let r = self.rank();
        mat.len() == r
            && mat.iter().enumerate().all(|(i, row)| {
                row.len() == r
                    && row
                        .iter()
                        .enumerate()
                        .all(|(j, &a)| (a as u128 * self.invariants[j] as u128) % self.invariants[i] as u128 == 0)
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        let g = FiniteAbelian::new(vec![3, 4, 2]);
        for i in 0..24 {
            assert_eq!(g.index_of(&g.element(i)), i);
        }
    }

    #[test]
    fn embedding_is_injective_hom() {
        let g = FiniteAbelian::new(vec![2, 4]);
        let amb = g.ambient();
        assert_eq!(amb.cardinality_u64(), Some(8));
        for i in 0..8 {
            for j in 0..8 {
                let (x, y) = (g.element(i), g.element(j));
                let s = g.add(&x, &y);
                let ex = g.embed(&x);
                let ey = g.embed(&y);
                let es: Vec<u64> = ex.iter().zip(&ey).map(|(a, b)| (a + b) % 4).collect();
                assert_eq!(g.embed(&s), es);
                assert_eq!(g.unembed(&g.embed(&x)), x);
            }
        }
    }
}
