//! Banded linear algebra: storage, pivoted LU factorization, and solves for
//! the small bandwidths produced by radial finite-difference stencils.

/// General banded matrix with `kl` subdiagonals and `ku` superdiagonals.
///
/// Storage follows the usual banded convention: entry `(i, j)` lives at
/// `data[j * ldab + kl + ku + i - j]`, with `kl` extra rows of headroom for
/// the fill-in produced by row pivoting.
#[derive(Clone, Debug)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    ldab: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        assert!(n > 0, "banded matrix must have positive dimension");
        let ldab = 2 * kl + ku + 1;
        BandedMatrix {
            n,
            kl,
            ku,
            ldab,
            data: vec![0.0; n * ldab],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        j * self.ldab + self.kl + self.ku + i - j
    }

    /// Writes entry `(i, j)`; the pair must lie inside the declared band.
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(i < self.n && j < self.n, "banded index out of range");
        assert!(
            i + self.ku >= j && j + self.kl >= i,
            "entry ({i}, {j}) outside band kl={}, ku={}",
            self.kl,
            self.ku
        );
        let s = self.slot(i, j);
        self.data[s] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let s = self.slot(i, j);
        assert!(i + self.ku >= j && j + self.kl >= i, "entry outside band");
        self.data[s] += v;
    }

    /// Factors the matrix in place into a pivoted LU decomposition.
    pub fn factorize(mut self) -> Result<BandedLu, SingularMatrix> {
        let (n, kl, ldab) = (self.n, self.kl, self.ldab);
        let kv = self.kl + self.ku;
        let mut pivots = vec![0usize; n];
        for j in 0..n {
            let km = kl.min(n - 1 - j);
            let mut jp = 0usize;
            let mut best = self.data[j * ldab + kv].abs();
            for p in 1..=km {
                let cand = self.data[j * ldab + kv + p].abs();
                if cand > best {
                    best = cand;
                    jp = p;
                }
            }
            pivots[j] = j + jp;
            if best == 0.0 {
                return Err(SingularMatrix { column: j });
            }
            let ju = (j + kv).min(n - 1);
            if jp != 0 {
                for c in j..=ju {
                    let a = c * ldab + kv + j - c;
                    self.data.swap(a, a + jp);
                }
            }
            let pivot = self.data[j * ldab + kv];
            for p in 1..=km {
                let m = self.data[j * ldab + kv + p] / pivot;
                self.data[j * ldab + kv + p] = m;
                for c in j + 1..=ju {
                    let head = c * ldab + kv + j - c;
                    self.data[head + p] -= m * self.data[head];
                }
            }
        }
        Ok(BandedLu {
            mat: self,
            pivots,
            kv,
        })
    }
}

/// Exactly singular matrix encountered during factorization.
#[derive(Clone, Copy, Debug)]
pub struct SingularMatrix {
    pub column: usize,
}

impl std::fmt::Display for SingularMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "singular banded matrix at column {}", self.column)
    }
}

impl std::error::Error for SingularMatrix {}

/// Pivoted LU factorization of a [`BandedMatrix`], reusable across solves.
#[derive(Clone, Debug)]
pub struct BandedLu {
    mat: BandedMatrix,
    pivots: Vec<usize>,
    kv: usize,
}

impl BandedLu {
    pub fn n(&self) -> usize {
        self.mat.n
    }

    /// Solves `A x = b` for the factored `A`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let (n, kl, ldab, kv) = (self.mat.n, self.mat.kl, self.mat.ldab, self.kv);
        assert_eq!(b.len(), n, "right-hand side length mismatch");
        let mut x = b.to_vec();
        for j in 0..n {
            let p = self.pivots[j];
            if p != j {
                x.swap(j, p);
            }
            let km = kl.min(n - 1 - j);
            for q in 1..=km {
                x[j + q] -= self.mat.data[j * ldab + kv + q] * x[j];
            }
        }
        for j in (0..n).rev() {
            let hi = (j + kv).min(n - 1);
            let mut acc = x[j];
            for c in j + 1..=hi {
                acc -= self.mat.data[c * ldab + kv + j - c] * x[c];
            }
            x[j] = acc / self.mat.data[j * ldab + kv];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    /// Dense pivoted LU solve, the reference for the banded implementation.
    fn dense_solve(a: &[Vec<f64>], b: &[f64]) -> Option<Vec<f64>> {
        let n = b.len();
        let mut m: Vec<Vec<f64>> = a.to_vec();
        let mut x = b.to_vec();
        for j in 0..n {
            let piv = (j..n).max_by(|&p, &q| m[p][j].abs().total_cmp(&m[q][j].abs()))?;
            if m[piv][j].abs() < 1e-300 {
                return None;
            }
            m.swap(j, piv);
            x.swap(j, piv);
            for i in j + 1..n {
                let f = m[i][j] / m[j][j];
                for c in j..n {
                    m[i][c] -= f * m[j][c];
                }
                x[i] -= f * x[j];
            }
        }
        for j in (0..n).rev() {
            for c in j + 1..n {
                let xc = x[c];
                x[j] -= m[j][c] * xc;
            }
            x[j] /= m[j][j];
        }
        Some(x)
    }

    fn band_case() -> impl Strategy<Value = (usize, usize, usize, Vec<f64>, Vec<f64>)> {
        (1usize..28, 0usize..4, 0usize..4).prop_flat_map(|(n, kl, ku)| {
            let kl = kl.min(n - 1);
            let ku = ku.min(n - 1);
            let entries = proptest::collection::vec(-1.0f64..1.0, n * (kl + ku + 1));
            let rhs = proptest::collection::vec(-1.0f64..1.0, n);
            (Just(n), Just(kl), Just(ku), entries, rhs)
        })
    }

    proptest! {
        #[test]
        fn banded_solve_matches_dense((n, kl, ku, entries, rhs) in band_case()) {
            let mut banded = BandedMatrix::zeros(n, kl, ku);
            let mut dense = vec![vec![0.0; n]; n];
            let mut k = 0;
            for i in 0..n {
                for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                    let mut v = entries[k];
                    k += 1;
                    if i == j {
                        // Strict diagonal dominance keeps every sampled case
                        // well conditioned: |diag| >= 7 against at most six
                        // off-diagonal entries of magnitude <= 1.
                        v += if v >= 0.0 { 8.0 } else { -8.0 };
                    }
                    banded.set(i, j, v);
                    dense[i][j] = v;
                }
            }
            let lu = banded.factorize().expect("diagonally dominant");
            let x = lu.solve(&rhs);
            let y = dense_solve(&dense, &rhs).expect("diagonally dominant");
            for i in 0..n {
                prop_assert!((x[i] - y[i]).abs() <= 1e-10 * (1.0 + y[i].abs()));
            }
        }
    }

    #[test]
    fn tridiagonal_reference() {
        // -x'' discretization on 4 nodes: frozen solve against hand elimination.
        let mut m = BandedMatrix::zeros(4, 1, 1);
        for i in 0..4 {
            m.set(i, i, 2.0);
            if i > 0 {
                m.set(i, i - 1, -1.0);
            }
            if i < 3 {
                m.set(i, i + 1, -1.0);
            }
        }
        let lu = m.factorize().unwrap();
        let x = lu.solve(&[1.0, 0.0, 0.0, 1.0]);
        for (got, want) in x.iter().zip([1.0, 1.0, 1.0, 1.0]) {
            assert_relative_eq!(*got, want, max_relative = 1e-13);
        }
    }

    #[test]
    fn singular_matrix_reported() {
        let mut m = BandedMatrix::zeros(3, 1, 1);
        m.set(0, 0, 1.0);
        m.set(1, 1, 0.0);
        m.set(2, 2, 1.0);
        assert!(m.factorize().is_err());
    }
}
