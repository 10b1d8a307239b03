use num_bigint::BigUint;
use rand::Rng;

use super::abelian::FiniteAbelian;
use super::howell::{HowellBasis, LinearSolver};
use super::quotient::QuotientModule;
use super::{add_mod, axpy, inv_mod, is_prime, mul_mod, neg_mod, scale, sub_mod, LinalgError};

/// A complement `C` of `sub` inside `ambient`: `sub ⊕ C = ambient`.
///
/// Every generator of `ambient/sub` is lifted to an element of the same
/// order; this succeeds for every generator exactly when `sub` is a direct
/// summand, otherwise `NotASummand` is returned.
pub fn pure_complement(sub: &HowellBasis, ambient: &HowellBasis) -> Result<HowellBasis, LinalgError> {
    let m = ambient.modulus();
    let dim = ambient.dim();
    if !sub.is_subset_of(ambient) {
        return Err(LinalgError::NotContained);
    }
    let q = QuotientModule::new(ambient, sub)?;
    let mut gens = Vec::with_capacity(q.invariants().len());
    for (x, &e) in q.lifts().iter().zip(q.invariants()) {
        let x = sub.residue(x);
        // need s ∈ sub with e·(x + s) = 0
        let target: Vec<u64> = x.iter().map(|&a| neg_mod(mul_mod(e, a, m), m)).collect();
        let scaled: Vec<Vec<u64>> = sub.rows().iter().map(|r| scale(r, e, m)).collect();
        let coeffs = if scaled.is_empty() {
            target.iter().all(|&a| a == 0).then(Vec::new)
        } else {
            LinearSolver::new(m, dim, &scaled).solve(&target)
        };
        let coeffs = coeffs.ok_or(LinalgError::NotASummand)?;
        let mut c = x.clone();
        for (k, row) in coeffs.iter().zip(sub.rows()) {
            axpy(&mut c, *k, row, m);
        }
        gens.push(c);
    }
    let comp = HowellBasis::from_rows(m, dim, gens);
    let meet = comp.intersection(sub)?;
    if !meet.is_zero() || comp.cardinality() * sub.cardinality() != ambient.cardinality() {
        return Err(LinalgError::NotASummand);
    }
    Ok(comp)
}

/// An idempotent endomorphism of a coordinate group `⊕ Z/e_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectionMap {
    pub group: FiniteAbelian,
    pub matrix: Vec<Vec<u64>>,
}

impl ProjectionMap {
    /// Projection onto `image` along `kernel`; both given as subgroups in the
    /// embedded coordinates of `group` and assumed to form a direct sum.
    pub fn along(group: &FiniteAbelian, image: &HowellBasis, kernel: &HowellBasis) -> Result<Self, LinalgError> {
        let big = group.embedding_modulus();
        let r = group.rank();
        let gens: Vec<Vec<u64>> = image.rows().iter().chain(kernel.rows()).cloned().collect();
        let solver = LinearSolver::new(big, r, &gens);
        let ni = image.rows().len();
        let mut matrix = vec![vec![0u64; r]; r];
        for j in 0..r {
            let u = group.embed(&group.unit(j));
            let c = solver.solve(&u).ok_or(LinalgError::NotASummand)?;
            let mut part = vec![0u64; r];
            for (k, row) in c[..ni].iter().zip(image.rows()) {
                axpy(&mut part, *k, row, big);
            }
            let col = group.unembed(&part);
            for i in 0..r {
                matrix[i][j] = col[i];
            }
        }
        Ok(ProjectionMap { group: group.clone(), matrix })
    }

    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        self.group.apply(&self.matrix, x)
    }

    pub fn is_idempotent(&self) -> bool {
        self.group.compose(&self.matrix, &self.matrix) == self.matrix
    }

    pub fn image(&self) -> HowellBasis {
        let cols: Vec<Vec<u64>> = (0..self.group.rank())
            .map(|j| self.apply(&self.group.unit(j)))
            .collect();
        self.group.subgroup(cols.iter())
    }

    /// `ker π = im(1 − π)` for an idempotent `π`.
    pub fn kernel(&self) -> HowellBasis {
        let g = &self.group;
        let cols: Vec<Vec<u64>> = (0..g.rank())
            .map(|j| {
                let u = g.unit(j);
                g.sub(&u, &self.apply(&u))
            })
            .collect();
        g.subgroup(cols.iter())
    }
}

/// Index-`p` submodules of `J` that contain `rad J` and avoid a given vector.
///
/// `J/rad J` must be elementary abelian of rank `d`. Hyperplanes avoiding
/// `v̄ ≠ 0` correspond one-to-one to functionals `f` with `f(v̄) = 1`, so there
/// are `p^(d-1)` of them; they are indexed by the free coordinates of `f`.
#[derive(Clone, Debug)]
pub struct HyperplaneSpace {
    quotient: QuotientModule,
    radical: HowellBasis,
    p: u64,
    vbar: Vec<u64>,
    pivot: Option<usize>,
}

impl HyperplaneSpace {
    pub fn new(module: &HowellBasis, radical: &HowellBasis, v: &[u64]) -> Result<Self, LinalgError> {
        if !module.contains(v) {
            return Err(LinalgError::NotInModule);
        }
        let quotient = QuotientModule::new(module, radical)?;
        let inv = quotient.invariants();
        let p = inv.first().copied().unwrap_or(2);
        if inv.iter().any(|&e| e != p) || !is_prime(p) {
            return Err(LinalgError::NotElementary);
        }
        let vbar = quotient.coords(v).ok_or(LinalgError::NotInModule)?;
        let pivot = vbar.iter().position(|&x| x != 0);
        Ok(HyperplaneSpace { quotient, radical: radical.clone(), p, vbar, pivot })
    }

    pub fn dimension(&self) -> usize {
        self.vbar.len()
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn is_empty(&self) -> bool {
        self.pivot.is_none()
    }

    pub fn count(&self) -> BigUint {
        match self.pivot {
            None => BigUint::from(0u32),
            Some(_) => BigUint::from(self.p).pow(self.dimension() as u32 - 1),
        }
    }

    fn functional_from_free(&self, free: &[u64]) -> Vec<u64> {
        let p = self.p;
        let piv = self.pivot.expect("non-empty space");
        let mut f = vec![0u64; self.dimension()];
        let mut k = 0;
        let mut acc = 0u64;
        for i in 0..self.dimension() {
            if i == piv {
                continue;
            }
            f[i] = free[k] % p;
            acc = add_mod(acc, mul_mod(f[i], self.vbar[i], p), p);
            k += 1;
        }
        let inv = inv_mod(self.vbar[piv], p).unwrap();
        f[piv] = mul_mod(sub_mod(1, acc, p), inv, p);
        f
    }

    /// The hyperplane `rad J + lift(ker f)`.
    pub fn hyperplane_for(&self, f: &[u64]) -> HowellBasis {
        let p = self.p;
        let d = self.dimension();
        let lead = f.iter().position(|&x| x != 0).expect("non-zero functional");
        let inv = inv_mod(f[lead], p).unwrap();
        let mut gens: Vec<Vec<u64>> = self.radical.rows().to_vec();
        for i in 0..d {
            if i == lead {
                continue;
            }
            let mut e = vec![0u64; d];
            e[i] = 1;
            e[lead] = neg_mod(mul_mod(f[i], inv, p), p);
            gens.push(self.quotient.lift(&e));
        }
        HowellBasis::from_rows(self.radical.modulus(), self.radical.dim(), gens)
    }

    /// Hyperplane number `index` in `0..count()`, digits base `p` over the
    /// free coordinates.
    pub fn nth(&self, mut index: u128) -> Option<HowellBasis> {
        self.pivot?;
        let free: Vec<u64> = (0..self.dimension() - 1)
            .map(|_| {
                let digit = (index % self.p as u128) as u64;
                index /= self.p as u128;
                digit
            })
            .collect();
        (index == 0).then(|| self.hyperplane_for(&self.functional_from_free(&free)))
    }

    pub fn iter(&self) -> impl Iterator<Item = HowellBasis> + '_ {
        let total: u128 = if self.pivot.is_some() {
            (self.p as u128).pow(self.dimension() as u32 - 1)
        } else {
            0
        };
        (0..total).map(move |i| self.nth(i).unwrap())
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<HowellBasis> {
        self.pivot?;
        let free: Vec<u64> = (0..self.dimension() - 1).map(|_| rng.random_range(0..self.p)).collect();
        Some(self.hyperplane_for(&self.functional_from_free(&free)))
    }
}
