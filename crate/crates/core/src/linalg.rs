use crate::error::{CnlsError, Result};
use nalgebra::{DMatrix, DVector};

/// General banded matrix with `kl` sub- and `ku` super-diagonals, stored
/// LAPACK-style with `kl` extra fill rows for the pivoted LU factorization.
#[derive(Debug, Clone)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    ldab: usize,
    ab: Vec<f64>, // column-major, ldab = 2*kl + ku + 1 rows
}

impl BandedMatrix {
    pub fn new(n: usize, kl: usize, ku: usize) -> Self {
        let ldab = 2 * kl + ku + 1;
        Self { n, kl, ku, ldab, ab: vec![0.0; ldab * n] }
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        // entry (i, j) lives at row kl + ku + i - j of column j
        self.kl + self.ku + i - j + j * self.ldab
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        debug_assert!(j + self.ku >= i && i + self.kl >= j, "outside band");
        let k = self.idx(i, j);
        self.ab[k] += v;
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.ab[k] = v;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// LU factorization with partial pivoting (unblocked `dgbtf2` variant).
    pub fn factor(mut self) -> Result<BandedLu> {
        let (n, kl, ku, ldab) = (self.n, self.kl, self.ku, self.ldab);
        let kv = kl + ku;
        let mut ipiv = vec![0usize; n];
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            // pivot search in column j
            let mut p = 0usize;
            let mut pmax = self.ab[kv + j * ldab].abs();
            for t in 1..=km {
                let v = self.ab[kv + t + j * ldab].abs();
                if v > pmax {
                    pmax = v;
                    p = t;
                }
            }
            ipiv[j] = j + p;
            if pmax == 0.0 || !pmax.is_finite() {
                return Err(CnlsError::SingularOperator(format!(
                    "banded LU breakdown at column {j}"
                )));
            }
            if p != 0 {
                let cmax = (j + kv).min(n - 1);
                for col in j..=cmax {
                    let a = kv + j - col + col * ldab;
                    let b = kv + j + p - col + col * ldab;
                    self.ab.swap(a, b);
                }
            }
            let piv = self.ab[kv + j * ldab];
            for t in 1..=km {
                self.ab[kv + t + j * ldab] /= piv;
            }
            let cmax = (j + kv).min(n - 1);
            for col in j + 1..=cmax {
                let f = self.ab[kv + j - col + col * ldab];
                if f != 0.0 {
                    for t in 1..=km {
                        let m = self.ab[kv + t + j * ldab];
                        self.ab[kv + t + j - col + col * ldab] -= m * f;
                    }
                }
            }
        }
        Ok(BandedLu { n, kl, kv, ldab, ab: self.ab, ipiv })
    }
}

/// Factored banded matrix; solves by forward/backward substitution.
#[derive(Debug, Clone)]
pub struct BandedLu {
    n: usize,
    kl: usize,
    kv: usize,
    ldab: usize,
    ab: Vec<f64>,
    ipiv: Vec<usize>,
}

impl BandedLu {
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let (n, kl, kv, ldab) = (self.n, self.kl, self.kv, self.ldab);
        debug_assert_eq!(b.len(), n);
        // L (unit lower, multipliers stored below the diagonal), with pivots
        for j in 0..n {
            let p = self.ipiv[j];
            if p != j {
                b.swap(j, p);
            }
            let km = kl.min(n - 1 - j);
            let bj = b[j];
            if bj != 0.0 {
                for t in 1..=km {
                    b[j + t] -= self.ab[kv + t + j * ldab] * bj;
                }
            }
        }
        // U (banded upper with kv superdiagonals)
        for j in (0..n).rev() {
            b[j] /= self.ab[kv + j * ldab];
            let bj = b[j];
            if bj != 0.0 {
                let imin = j.saturating_sub(kv);
                for i in imin..j {
                    b[i] -= self.ab[kv + i - j + j * ldab] * bj;
                }
            }
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

/// Solve the bordered system
///
/// ```text
/// [ A  B ] [x]   [f]
/// [ C  D ] [y] = [g]
/// ```
///
/// with `A` already factored (banded), `B` given as `m` dense columns,
/// `C` as `m` dense rows and `D` a small `m x m` block (Schur complement
/// elimination; `m` is tiny).
pub fn solve_bordered(
    a: &BandedLu,
    b_cols: &[Vec<f64>],
    c_rows: &[Vec<f64>],
    d: &DMatrix<f64>,
    f: &[f64],
    g: &[f64],
) -> Result<(Vec<f64>, Vec<f64>)> {
    let m = b_cols.len();
    debug_assert_eq!(c_rows.len(), m);
    debug_assert_eq!(g.len(), m);
    let y1 = a.solve(f);
    let ys: Vec<Vec<f64>> = b_cols.iter().map(|col| a.solve(col)).collect();
    let mut s = DMatrix::<f64>::zeros(m, m);
    let mut rhs = DVector::<f64>::zeros(m);
    for i in 0..m {
        let ci = &c_rows[i];
        rhs[i] = g[i] - dot(ci, &y1);
        for j in 0..m {
            s[(i, j)] = d[(i, j)] - dot(ci, &ys[j]);
        }
    }
    let y = s
        .lu()
        .solve(&rhs)
        .ok_or_else(|| CnlsError::SingularOperator("bordered Schur block".into()))?;
    let mut x = y1;
    for j in 0..m {
        let yj = y[j];
        for (xi, bij) in x.iter_mut().zip(&ys[j]) {
            *xi -= yj * bij;
        }
    }
    Ok((x, y.iter().cloned().collect()))
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Eigenvalues (ascending) and eigenvectors of a dense symmetric matrix.
pub fn symmetric_eigen_sorted(m: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = m.nrows();
    let eig = nalgebra::SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vecs = DMatrix::<f64>::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        vecs.set_column(new, &eig.eigenvectors.column(old));
    }
    (vals, vecs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lcg(seed: &mut u64) -> f64 {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (*seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    }

    #[test]
    fn banded_lu_matches_dense() {
        let (n, kl, ku) = (40usize, 3usize, 2usize);
        let mut seed = 42u64;
        let mut band = BandedMatrix::new(n, kl, ku);
        let mut dense = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            for i in j.saturating_sub(ku)..(j + kl + 1).min(n) {
                let v = lcg(&mut seed) + if i == j { 4.0 } else { 0.0 };
                band.set(i, j, v);
                dense[(i, j)] = v;
            }
        }
        let rhs: Vec<f64> = (0..n).map(|_| lcg(&mut seed)).collect();
        let lu = band.factor().unwrap();
        let x = lu.solve(&rhs);
        let xd = dense
            .lu()
            .solve(&DVector::from_column_slice(&rhs))
            .unwrap();
        for i in 0..n {
            assert!((x[i] - xd[i]).abs() < 1e-10, "{} vs {}", x[i], xd[i]);
        }
    }

    #[test]
    fn banded_lu_indefinite_with_pivoting() {
        // indefinite but nonsingular pentadiagonal
        let n = 60;
        let mut seed = 7u64;
        let mut band = BandedMatrix::new(n, 2, 2);
        let mut dense = DMatrix::<f64>::zeros(n, n);
        for j in 0..n {
            for i in j.saturating_sub(2)..(j + 3).min(n) {
                let v = lcg(&mut seed) * 2.0 + if i == j { ((j % 3) as f64 - 1.0) * 3.0 } else { 0.0 };
                band.set(i, j, v);
                dense[(i, j)] = v;
            }
        }
        let rhs: Vec<f64> = (0..n).map(|_| lcg(&mut seed)).collect();
        let x = band.factor().unwrap().solve(&rhs);
        let resid = &dense * DVector::from_column_slice(&x) - DVector::from_column_slice(&rhs);
        assert!(resid.abs().max() < 1e-8, "residual {}", resid.abs().max());
    }

    #[test]
    fn bordered_solve_matches_dense() {
        let n = 30;
        let m = 2;
        let mut seed = 9u64;
        let mut band = BandedMatrix::new(n, 2, 2);
        let mut dense = DMatrix::<f64>::zeros(n + m, n + m);
        for j in 0..n {
            for i in j.saturating_sub(2)..(j + 3).min(n) {
                let v = lcg(&mut seed) + if i == j { 5.0 } else { 0.0 };
                band.set(i, j, v);
                dense[(i, j)] = v;
            }
        }
        let mut b_cols = vec![vec![0.0; n]; m];
        let mut c_rows = vec![vec![0.0; n]; m];
        let mut d = DMatrix::<f64>::zeros(m, m);
        for k in 0..m {
            for i in 0..n {
                b_cols[k][i] = lcg(&mut seed);
                c_rows[k][i] = lcg(&mut seed);
                dense[(i, n + k)] = b_cols[k][i];
                dense[(n + k, i)] = c_rows[k][i];
            }
            for l in 0..m {
                d[(k, l)] = lcg(&mut seed) + if k == l { 1.0 } else { 0.0 };
                dense[(n + k, n + l)] = d[(k, l)];
            }
        }
        let f: Vec<f64> = (0..n).map(|_| lcg(&mut seed)).collect();
        let g: Vec<f64> = (0..m).map(|_| lcg(&mut seed)).collect();
        let lu = band.factor().unwrap();
        let (x, y) = solve_bordered(&lu, &b_cols, &c_rows, &d, &f, &g).unwrap();
        let mut rhs_full = f.clone();
        rhs_full.extend_from_slice(&g);
        let sol = dense.lu().solve(&DVector::from_column_slice(&rhs_full)).unwrap();
        for i in 0..n {
            assert!((x[i] - sol[i]).abs() < 1e-9);
        }
        for k in 0..m {
            assert!((y[k] - sol[n + k]).abs() < 1e-9);
        }
    }
}
