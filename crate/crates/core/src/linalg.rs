//! Dense linear-algebra helpers tuned for the very sparse operators that
//! ladder algebra produces.

use nalgebra::{DMatrix, DVector, Matrix3};
use num_complex::Complex64 as C64;

const ZERO: C64 = C64::new(0.0, 0.0);

fn nnz(m: &DMatrix<C64>) -> usize {
    m.iter().filter(|z| z.re != 0.0 || z.im != 0.0).count()
}

/// Matrix product that skips structural zeros when either factor is sparse.
pub fn matmul(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    assert_eq!(a.ncols(), b.nrows(), "matmul dimension mismatch");
    let (n, m) = (a.nrows(), b.ncols());
    let inner = a.ncols();
    let dense = inner * m.max(1);
    let nb = nnz(b);
    if nb * 4 < dense {
        let mut c = DMatrix::from_element(n, m, ZERO);
        for j in 0..m {
            for k in 0..inner {
                let bkj = b[(k, j)];
                if bkj == ZERO {
                    continue;
                }
                let col_a = a.column(k);
                let mut col_c = c.column_mut(j);
                for i in 0..n {
                    col_c[i] += col_a[i] * bkj;
                }
            }
        }
        return c;
    }
    let na = nnz(a);
    if na * 4 < n * inner {
        let mut c = DMatrix::from_element(n, m, ZERO);
        for k in 0..inner {
            for i in 0..n {
                let aik = a[(i, k)];
                if aik == ZERO {
                    continue;
                }
                for j in 0..m {
                    c[(i, j)] += aik * b[(k, j)];
                }
            }
        }
        return c;
    }
    a * b
}

/// `Tr(A B)` without forming the product.
pub fn trace_product(a: &DMatrix<C64>, b: &DMatrix<C64>) -> C64 {
    let mut acc = ZERO;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            let aij = a[(i, j)];
            if aij != ZERO {
                acc += aij * b[(j, i)];
            }
        }
    }
    acc
}

/// `v† A v`.
pub fn sandwich(v: &DVector<C64>, a: &DMatrix<C64>) -> C64 {
    let av = matvec(a, v);
    v.dotc(&av)
}

pub fn matvec(a: &DMatrix<C64>, v: &DVector<C64>) -> DVector<C64> {
    let mut out = DVector::from_element(a.nrows(), ZERO);
    for k in 0..a.ncols() {
        let vk = v[k];
        if vk == ZERO {
            continue;
        }
        let col = a.column(k);
        for i in 0..a.nrows() {
            let x = col[i];
            if x != ZERO {
                out[i] += x * vk;
            }
        }
    }
    out
}

pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest entrywise deviation `|A - A†|`.
pub fn hermitian_deviation(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Kronecker product with the left factor varying slowest.
pub fn kron(a: &DMatrix<C64>, b: &DMatrix<C64>) -> DMatrix<C64> {
    a.kronecker(b)
}

/// Hermitian eigendecomposition with eigenvalues sorted ascending.
pub fn eigh(m: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let n = m.nrows();
    // Symmetrise so tiny rounding asymmetry cannot leak into the solver.
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = h.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::from_element(n, n, ZERO);
    for (col, &i) in order.iter().enumerate() {
        vectors.set_column(col, &eig.eigenvectors.column(i));
    }
    (values, vectors)
}

pub fn eigvalsh(m: &DMatrix<C64>) -> Vec<f64> {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut v: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `exp(-i H t)` for Hermitian `H`.
pub fn unitary_evolution(h: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
    let (vals, vecs) = eigh(h);
    let mut scaled = vecs.clone();
    for (j, &e) in vals.iter().enumerate() {
        let phase = C64::from_polar(1.0, -e * t);
        for i in 0..scaled.nrows() {
            scaled[(i, j)] *= phase;
        }
    }
    &scaled * vecs.adjoint()
}

/// Cyclic Jacobi eigensolver for a real symmetric 3x3 matrix.
///
/// Returns eigenvalues ascending and the matching orthonormal eigenvectors as
/// columns.
pub fn jacobi3(m: &Matrix3<f64>) -> ([f64; 3], Matrix3<f64>) {
    let mut a = (m + m.transpose()) * 0.5;
    let mut v = Matrix3::identity();
    for _sweep in 0..64 {
        let off = a[(0, 1)].powi(2) + a[(0, 2)].powi(2) + a[(1, 2)].powi(2);
        let scale = a.iter().fold(0.0f64, |s, x| s.max(x.abs())).max(f64::MIN_POSITIVE);
        if off.sqrt() <= 1e-300_f64.max(f64::EPSILON * 1e-3 * scale) {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let apq = a[(p, q)];
            if apq == 0.0 {
                continue;
            }
            let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
            let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
            let t = if theta == 0.0 { 1.0 } else { t };
            let c = 1.0 / (t * t + 1.0).sqrt();
            let s = t * c;
            let mut rot = Matrix3::identity();
            rot[(p, p)] = c;
            rot[(q, q)] = c;
            rot[(p, q)] = s;
            rot[(q, p)] = -s;
            a = rot.transpose() * a * rot;
            a[(p, q)] = 0.0;
            a[(q, p)] = 0.0;
            v *= rot;
        }
    }
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let vals = [a[(order[0], order[0])], a[(order[1], order[1])], a[(order[2], order[2])]];
    let mut vecs = Matrix3::zeros();
    for (col, &i) in order.iter().enumerate() {
        vecs.set_column(col, &v.column(i));
    }
    (vals, vecs)
}
