use super::{add_mod, gcd, mul_mod, neg_mod, reduce, unit_normalizer, xgcd};

/// Diagonalization `P·R·Q = D` over `Z/m`, keeping the column transform `Q`
/// and its inverse. Diagonal entries are divisors of `m` forming a divisibility
/// chain; `0` stands for the zero ideal (a free `Z/m` summand).
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub modulus: u64,
    pub diagonal: Vec<u64>,
    pub col_transform: Vec<Vec<u64>>,
    pub col_transform_inv: Vec<Vec<u64>>,
}

impl SmithForm {
    /// Invariant factor of position `i`: the order of `Z/m / (d_i)`.
    pub fn invariant(&self, i: usize) -> u64 {
        match self.diagonal[i] {
            0 => self.modulus,
            d => gcd(d, self.modulus),
        }
    }
}

struct Work {
    m: u64,
    a: Vec<Vec<u64>>,
    q: Vec<Vec<u64>>,
    qi: Vec<Vec<u64>>,
}

impl Work {
    fn row_combine(&mut self, i: usize, k: usize, c: usize) {
        // rows i (pivot) and k, eliminating column c in row k
        let m = self.m;
        let a = self.a[i][c];
        let b = self.a[k][c];
        if b == 0 {
            return;
        }
        if a != 0 && b % a == 0 {
            let f = neg_mod(b / a, m);
            for j in 0..self.a[i].len() {
                let x = self.a[i][j];
                self.a[k][j] = add_mod(self.a[k][j], mul_mod(f, x, m), m);
            }
            return;
        }
        let (s, t, g) = xgcd(a as i128, b as i128);
        let (s, t) = (reduce(s, m), reduce(t, m));
        let bg = neg_mod((b as i128 / g) as u64, m);
        let ag = (a as i128 / g) as u64 % m;
        for j in 0..self.a[i].len() {
            let x = self.a[i][j];
            let y = self.a[k][j];
            self.a[i][j] = add_mod(mul_mod(s, x, m), mul_mod(t, y, m), m);
            self.a[k][j] = add_mod(mul_mod(bg, x, m), mul_mod(ag, y, m), m);
        }
    }

    /// Column operation `[col_i col_k] ← [col_i col_k]·T`, tracked in `Q`.
    fn col_apply(&mut self, i: usize, k: usize, t: [u64; 4], tinv: [u64; 4]) {
        let m = self.m;
        let [t00, t01, t10, t11] = t;
        for mat in [&mut self.a, &mut self.q] {
            for row in mat.iter_mut() {
                let x = row[i];
                let y = row[k];
                row[i] = add_mod(mul_mod(x, t00, m), mul_mod(y, t10, m), m);
                row[k] = add_mod(mul_mod(x, t01, m), mul_mod(y, t11, m), m);
            }
        }
        // Q^{-1} ← T^{-1}·Q^{-1}
        let [u00, u01, u10, u11] = tinv;
        let n = self.qi[i].len();
        for j in 0..n {
            let x = self.qi[i][j];
            let y = self.qi[k][j];
            self.qi[i][j] = add_mod(mul_mod(u00, x, m), mul_mod(u01, y, m), m);
            self.qi[k][j] = add_mod(mul_mod(u10, x, m), mul_mod(u11, y, m), m);
        }
    }

    fn col_combine(&mut self, r: usize, i: usize, k: usize) {
        let m = self.m;
        let a = self.a[r][i];
        let b = self.a[r][k];
        if b == 0 {
            return;
        }
        if a != 0 && b % a == 0 {
            let f = b / a;
            // col_k -= f col_i
            self.col_apply(i, k, [1, neg_mod(f, m), 0, 1], [1, f % m, 0, 1]);
            return;
        }
        let (s, t, g) = xgcd(a as i128, b as i128);
        let (s, t) = (reduce(s, m), reduce(t, m));
        let bg = (b as i128 / g) as u64 % m;
        let ag = (a as i128 / g) as u64 % m;
        // new col_i = s col_i + t col_k ; new col_k = -bg col_i + ag col_k
        self.col_apply(i, k, [s, neg_mod(bg, m), t, ag], [ag, bg, neg_mod(t, m), s]);
    }

    fn col_swap(&mut self, i: usize, k: usize) {
        if i != k {
            let m = self.m;
            self.col_apply(i, k, [0, 1, 1, 0], [0, 1, 1 % m, 0]);
        }
    }

    fn col_scale(&mut self, i: usize, u: u64, uinv: u64) {
        let m = self.m;
        for mat in [&mut self.a, &mut self.q] {
            for row in mat.iter_mut() {
                row[i] = mul_mod(row[i], u, m);
            }
        }
        for x in self.qi[i].iter_mut() {
            *x = mul_mod(*x, uinv, m);
        }
    }
}

/// Smith form over `Z/m` of the `rows × cols` matrix given by rows.
pub fn smith_form(modulus: u64, rows: &[Vec<u64>], cols: usize) -> SmithForm {
    let m = modulus;
    let identity = |n: usize| -> Vec<Vec<u64>> {
        (0..n)
            .map(|i| {
                let mut r = vec![0; n];
                r[i] = 1 % m;
                r
            })
            .collect()
    };
    let mut a: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x % m).collect()).collect();
    // square up with zero rows so every column gets a diagonal slot
    while a.len() < cols {
        a.push(vec![0; cols]);
    }
    let mut w = Work { m, a, q: identity(cols), qi: identity(cols) };
    let nrows = w.a.len();
    let steps = cols.min(nrows);
    for t in 0..steps {
        loop {
            // pivot of smallest gcd with m
            let mut best: Option<(u64, usize, usize)> = None;
            for i in t..nrows {
                for j in t..cols {
                    let x = w.a[i][j];
                    if x != 0 {
                        let g = gcd(x, m);
                        if best.is_none_or(|(bg, _, _)| g < bg) {
                            best = Some((g, i, j));
                        }
                    }
                }
            }
            let Some((_, pi, pj)) = best else { break };
            w.a.swap(t, pi);
            w.col_swap(t, pj);
            for k in t + 1..nrows {
                w.row_combine(t, k, t);
            }
            for k in t + 1..cols {
                w.col_combine(t, t, k);
            }
            let clean_row = (t + 1..cols).all(|k| w.a[t][k] == 0);
            let clean_col = (t + 1..nrows).all(|k| w.a[k][t] == 0);
            if !(clean_row && clean_col) {
                continue;
            }
            let u = unit_normalizer(w.a[t][t], m);
            if u != 1 {
                let uinv = super::inv_mod(u, m).unwrap();
                w.col_scale(t, u, uinv);
            }
            let d = w.a[t][t];
            // divisibility chain: pivot must divide the rest
            let bad = (t + 1..nrows).find(|&i| (t + 1..cols).any(|j| w.a[i][j] % d != 0));
            match bad {
                Some(i) => {
                    for j in 0..cols {
                        let x = w.a[i][j];
                        w.a[t][j] = add_mod(w.a[t][j], x, m);
                    }
                }
                None => break,
            }
        }
    }
    let diagonal = (0..cols).map(|i| if i < nrows { w.a[i][i] } else { 0 }).collect();
    SmithForm { modulus, diagonal, col_transform: w.q, col_transform_inv: w.qi }
}
