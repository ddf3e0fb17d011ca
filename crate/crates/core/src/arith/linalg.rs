//! Dense linear algebra over F_q. Matrices are row-major `Vec<Vec<u32>>`.

use super::fq::Fq;
use super::poly::Poly;

pub type Mat = Vec<Vec<u32>>;

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| {
            let mut r = vec![0; n];
            r[i] = 1;
            r
        })
        .collect()
}

pub fn zeros(r: usize, c: usize) -> Mat {
    vec![vec![0; c]; r]
}

pub fn transpose(m: &Mat) -> Mat {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

fn axpy(f: &Fq, y: &mut [u32], a: u32, x: &[u32]) {
    if a == 0 {
        return;
    }
    if f.is_prime_field() {
        let p = f.p() as u64;
        for (yi, &xi) in y.iter_mut().zip(x) {
            *yi = ((*yi as u64 + a as u64 * xi as u64) % p) as u32;
        }
    } else {
        for (yi, &xi) in y.iter_mut().zip(x) {
            *yi = f.add(*yi, f.mul(a, xi));
        }
    }
}

pub fn mat_vec(f: &Fq, m: &Mat, v: &[u32]) -> Vec<u32> {
    m.iter()
        .map(|row| row.iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
        .collect()
}

pub fn mat_mul(f: &Fq, a: &Mat, b: &Mat) -> Mat {
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            let mut out = vec![0; cols];
            for (k, &x) in row.iter().enumerate() {
                axpy(f, &mut out, x, &b[k]);
            }
            out
        })
        .collect()
}

pub fn mat_add(f: &Fq, a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(r, s)| r.iter().zip(s).map(|(&x, &y)| f.add(x, y)).collect())
        .collect()
}

pub fn mat_scale(f: &Fq, a: &Mat, c: u32) -> Mat {
    a.iter().map(|r| r.iter().map(|&x| f.mul(x, c)).collect()).collect()
}

/// p(M) by Horner.
pub fn poly_of_matrix(f: &Fq, p: &Poly<Fq>, m: &Mat) -> Mat {
    let n = m.len();
    let mut acc = zeros(n, n);
    for &c in p.coeffs().iter().rev() {
        acc = mat_mul(f, &acc, m);
        for (i, row) in acc.iter_mut().enumerate() {
            row[i] = f.add(row[i], c);
        }
    }
    acc
}

/// In-place reduced row echelon form; returns pivot columns.
pub fn rref(f: &Fq, m: &mut Mat) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(piv) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, piv);
        let inv = f.inv(m[r][c]);
        if inv != 1 {
            for x in m[r].iter_mut() {
                *x = f.mul(*x, inv);
            }
        }
        let pivot_row = m[r].clone();
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let a = f.neg(m[i][c]);
                axpy(f, &mut m[i], a, &pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    pivots
}

pub fn rank(f: &Fq, m: &Mat) -> usize {
    let mut m = m.clone();
    rref(f, &mut m).len()
}

/// Basis of {v : M v = 0}.
pub fn nullspace(f: &Fq, m: &Mat, cols: usize) -> Mat {
    let mut r = m.clone();
    let pivots = rref(f, &mut r);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0; cols];
            v[fc] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r[i][fc]);
            }
            v
        })
        .collect()
}

/// Canonical basis (RREF rows) of the span of `vectors`.
pub fn span_key(f: &Fq, vectors: &[Vec<u32>]) -> Mat {
    let mut m = vectors.to_vec();
    rref(f, &mut m);
    m
}

/// Solves sum_j x_j c_j = b for fixed independent columns c_j.
#[derive(Clone, Debug)]
pub struct ColumnSolver {
    field: Fq,
    /// E with E*C = R (RREF of C), rows of E beyond the rank test consistency.
    e: Mat,
    pivots: Vec<usize>,
    k: usize,
}

impl ColumnSolver {
    pub fn new(f: &Fq, columns: &[Vec<u32>]) -> Self {
        let k = columns.len();
        let m = columns.first().map_or(0, |c| c.len());
        let mut aug: Mat = (0..m)
            .map(|i| {
                let mut row: Vec<u32> = columns.iter().map(|c| c[i]).collect();
                row.extend((0..m).map(|j| u32::from(i == j)));
                row
            })
            .collect();
        // full elimination on the left block only
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..k {
            let Some(piv) = (r..m).find(|&i| aug[i][c] != 0) else { continue };
            aug.swap(r, piv);
            let inv = f.inv(aug[r][c]);
            for x in aug[r].iter_mut() {
                *x = f.mul(*x, inv);
            }
            let pr = aug[r].clone();
            for i in 0..m {
                if i != r && aug[i][c] != 0 {
                    let a = f.neg(aug[i][c]);
                    axpy(f, &mut aug[i], a, &pr);
                }
            }
            pivots.push(c);
            r += 1;
        }
        let e = aug.into_iter().map(|row| row[k..].to_vec()).collect();
        ColumnSolver { field: f.clone(), e, pivots, k }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        let y = mat_vec(&self.field, &self.e, b);
        if y[self.pivots.len()..].iter().any(|&v| v != 0) {
            return None;
        }
        let mut x = vec![0; self.k];
        for (i, &c) in self.pivots.iter().enumerate() {
            x[c] = y[i];
        }
        Some(x)
    }
}

/// Characteristic polynomial det(xI - M) by Berkowitz (division free).
pub fn charpoly(f: &Fq, m: &Mat) -> Poly<Fq> {
    let n = m.len();
    if n == 0 {
        return Poly::one(f);
    }
    // coefficient vectors, highest degree first
    let mut c: Vec<u32> = vec![1, f.neg(m[0][0])];
    for k in 1..n {
        // partition of the leading (k+1)x(k+1) block
        let r: Vec<u32> = (0..k).map(|j| m[k][j]).collect();
        let col: Vec<u32> = (0..k).map(|i| m[i][k]).collect();
        let a: Mat = (0..k).map(|i| m[i][..k].to_vec()).collect();
        // Toeplitz column: 1, -m_kk, -R C, -R A C, ..., -R A^{k-1} C
        let mut t = vec![1, f.neg(m[k][k])];
        let mut v = col.clone();
        for _ in 0..k {
            let s = r.iter().zip(&v).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)));
            t.push(f.neg(s));
            v = mat_vec(f, &a, &v);
        }
        // new c = T * c  (T lower-triangular Toeplitz of size (k+2)x(k+1))
        let mut nc = vec![0; k + 2];
        for (i, slot) in nc.iter_mut().enumerate() {
            for (j, &cj) in c.iter().enumerate() {
                if i >= j && i - j < t.len() {
                    *slot = f.add(*slot, f.mul(t[i - j], cj));
                }
            }
        }
        c = nc;
    }
    c.reverse();
    Poly::new(f, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nullspace_and_rank() {
        let f = Fq::new(3, 1).unwrap();
        let m = vec![vec![1, 1, 0], vec![0, 1, 1]];
        let ns = nullspace(&f, &m, 3);
        assert_eq!(ns.len(), 1);
        assert!(mat_vec(&f, &m, &ns[0]).iter().all(|&x| x == 0));
        assert_eq!(rank(&f, &m), 2);
    }

    #[test]
    fn solver() {
        let f = Fq::new(5, 1).unwrap();
        let cols = vec![vec![1, 2, 3], vec![0, 1, 4]];
        let s = ColumnSolver::new(&f, &cols);
        let b: Vec<u32> = (0..3).map(|i| f.add(f.mul(2, cols[0][i]), f.mul(3, cols[1][i]))).collect();
        assert_eq!(s.solve(&b), Some(vec![2, 3]));
        assert_eq!(s.solve(&[0, 0, 1]), None);
    }

    #[test]
    fn charpoly_kills_matrix() {
        let f = Fq::new(7, 1).unwrap();
        let m = vec![vec![1, 2, 0], vec![3, 4, 5], vec![6, 0, 1]];
        let c = charpoly(&f, &m);
        assert_eq!(c.degree(), Some(3));
        assert!(c.is_monic());
        let z = poly_of_matrix(&f, &c, &m);
        assert!(z.iter().flatten().all(|&x| x == 0));
        // trace appears as -c_2
        assert_eq!(f.neg(c.coeff(2)), 6);
    }
}
