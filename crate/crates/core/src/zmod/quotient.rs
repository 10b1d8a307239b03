use num_bigint::BigUint;

use super::howell::{HowellBasis, LinearSolver};
use super::smith::smith_form;
use super::{add_mod, axpy, mul_mod, LinalgError};

/// The quotient `top / bottom` of two submodules of `(Z/m)^n`, presented as
/// `⊕ Z/e_i` with explicit coordinate and lift maps.
#[derive(Clone, Debug)]
pub struct QuotientModule {
    modulus: u64,
    dim: usize,
    top: HowellBasis,
    bottom: HowellBasis,
    solver: LinearSolver,
    invariants: Vec<u64>,
    // column of the Smith transform for each kept coordinate
    transform: Vec<Vec<u64>>,
    lifts: Vec<Vec<u64>>,
}

impl QuotientModule {
    pub fn new(top: &HowellBasis, bottom: &HowellBasis) -> Result<Self, LinalgError> {
        if top.modulus() != bottom.modulus() {
            return Err(LinalgError::Modulus(top.modulus(), bottom.modulus()));
        }
        if top.dim() != bottom.dim() {
            return Err(LinalgError::Dimension { expected: top.dim(), got: bottom.dim() });
        }
        if !bottom.is_subset_of(top) {
            return Err(LinalgError::NotContained);
        }
        let m = top.modulus();
        let dim = top.dim();
        let a = top.rows().len();
        let gens: Vec<Vec<u64>> = top.rows().iter().chain(bottom.rows()).cloned().collect();
        let solver = LinearSolver::new(m, dim, &gens);
        // relations among the top rows modulo bottom
        let rel_full = super::howell::kernel(m, &gens, dim);
        let relations: Vec<Vec<u64>> = rel_full.rows().iter().map(|r| r[..a].to_vec()).collect();
        let snf = smith_form(m, &relations, a);
        let mut invariants = Vec::new();
        let mut transform = Vec::new();
        let mut lifts = Vec::new();
        for i in 0..a {
            let e = snf.invariant(i);
            if e == 1 {
                continue;
            }
            invariants.push(e);
            transform.push((0..a).map(|j| snf.col_transform[j][i]).collect::<Vec<u64>>());
            let mut lift = vec![0u64; dim];
            for (j, row) in top.rows().iter().enumerate() {
                axpy(&mut lift, snf.col_transform_inv[i][j], row, m);
            }
            lifts.push(lift);
        }
        Ok(QuotientModule {
            modulus: m,
            dim,
            top: top.clone(),
            bottom: bottom.clone(),
            solver,
            invariants,
            transform,
            lifts,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn invariants(&self) -> &[u64] {
        &self.invariants
    }

    pub fn top(&self) -> &HowellBasis {
        &self.top
    }

    pub fn bottom(&self) -> &HowellBasis {
        &self.bottom
    }

    /// Ambient vectors representing the coordinate generators.
    pub fn lifts(&self) -> &[Vec<u64>] {
        &self.lifts
    }

    pub fn order(&self) -> BigUint {
        self.invariants.iter().fold(BigUint::from(1u32), |acc, &e| acc * BigUint::from(e))
    }

    /// Coordinates of `v + bottom`, or `None` if `v` is not in `top`.
    pub fn coords(&self, v: &[u64]) -> Option<Vec<u64>> {
        let m = self.modulus;
        let c = self.solver.solve(v)?;
        let a = self.transform.first().map_or(0, |t| t.len());
        Some(
            self.transform
                .iter()
                .zip(&self.invariants)
                .map(|(col, &e)| {
                    let y = (0..a).fold(0u64, |acc, j| add_mod(acc, mul_mod(c[j], col[j], m), m));
                    y % e
                })
                .collect(),
        )
    }

    pub fn lift(&self, coords: &[u64]) -> Vec<u64> {
        let mut v = vec![0u64; self.dim];
        for (c, l) in coords.iter().zip(&self.lifts) {
            axpy(&mut v, *c, l, self.modulus);
        }
        v
    }

    /// Matrix (row `i` reduced mod `e_i`) of the endomorphism induced by an
    /// ambient map preserving both `top` and `bottom`.
    pub fn induced_matrix<F>(&self, mut f: F) -> Result<Vec<Vec<u64>>, LinalgError>
    where
        F: FnMut(&[u64]) -> Vec<u64>,
    {
        let s = self.invariants.len();
        let mut mat = vec![vec![0u64; s]; s];
        for (j, l) in self.lifts.iter().enumerate() {
            let img = f(l);
            let c = self.coords(&img).ok_or(LinalgError::NotInModule)?;
            for i in 0..s {
                mat[i][j] = c[i];
            }
        }
        Ok(mat)
    }

    /// Embedding of the coordinate group `⊕ Z/e_i` into `(Z/E)^s`, `E` the
    /// exponent, via `x_i ↦ (E/e_i)·x_i`.
    pub fn exponent(&self) -> u64 {
        self.invariants.iter().fold(1, |acc, &e| super::lcm(acc, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quotient_z4_by_2() {
        let top = HowellBasis::full(4, 2);
        let bottom = HowellBasis::from_rows(4, 2, vec![vec![2, 0]]);
        let q = QuotientModule::new(&top, &bottom).unwrap();
        let mut inv = q.invariants().to_vec();
        inv.sort();
        assert_eq!(inv, vec![2, 4]);
        // coords are additive and lift back into the coset
        for a in 0..4 {
            for b in 0..4 {
                let v = vec![a, b];
                let c = q.coords(&v).unwrap();
                let l = q.lift(&c);
                let d: Vec<u64> = v.iter().zip(&l).map(|(x, y)| (x + 4 - y) % 4).collect();
                assert!(bottom.contains(&d), "{v:?} {l:?}");
            }
        }
    }
}
