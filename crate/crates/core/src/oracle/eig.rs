//! Dense complex non-Hermitian eigendecomposition: Householder reduction to
//! upper Hessenberg form, then explicitly shifted QR iteration with Givens
//! rotations (Wilkinson shift, occasional exceptional shift), eigenvectors by
//! back-substitution on the triangular Schur factor.

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Largest matrix dimension the dense path accepts.
pub const MAX_DENSE_DIM: usize = 4096;

const MAX_SWEEPS_PER_EIG: usize = 60;

#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    /// sorted by (Re, Im)
    pub values: Vec<C64>,
    /// `vectors[k]` is a unit right eigenvector for `values[k]`
    pub vectors: Vec<Vec<C64>>,
}

/// Max column 2-norm: a cheap lower bound on the spectral norm, which makes
/// residual checks against it conservative.
pub fn matrix_norm_lower(m: &Array2<C64>) -> f64 {
    let n = m.nrows();
    let mut best = 0.0f64;
    for j in 0..n {
        let s: f64 = (0..n).map(|i| m[(i, j)].norm_sqr()).sum();
        best = best.max(s);
    }
    best.sqrt()
}

// Row-major working storage; ndarray's bounds checks cost too much in the
// rotation loops.
struct Mat {
    n: usize,
    d: Vec<C64>,
}

impl Mat {
    fn from_array(a: &Array2<C64>) -> Mat {
        let n = a.nrows();
        let mut d = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                d.push(a[(i, j)]);
            }
        }
        Mat { n, d }
    }

    fn identity(n: usize) -> Mat {
        let mut d = vec![C64::new(0.0, 0.0); n * n];
        for i in 0..n {
            d[i * n + i] = C64::new(1.0, 0.0);
        }
        Mat { n, d }
    }

    #[inline(always)]
    fn at(&self, i: usize, j: usize) -> C64 {
        self.d[i * self.n + j]
    }

    #[inline(always)]
    fn set(&mut self, i: usize, j: usize, v: C64) {
        self.d[i * self.n + j] = v;
    }

    /// mutable views of rows i and i+1
    fn row_pair(&mut self, i: usize) -> (&mut [C64], &mut [C64]) {
        let n = self.n;
        let (a, b) = self.d.split_at_mut((i + 1) * n);
        (&mut a[i * n..], &mut b[..n])
    }

    fn frobenius(&self) -> f64 {
        self.d.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Householder vector: (v, beta) with (I - beta v v^H) x = -sigma |x| e1.
fn householder(x: &[C64]) -> Option<(Vec<C64>, f64)> {
    let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return None;
    }
    let sigma = if x[0].norm() == 0.0 {
        C64::new(1.0, 0.0)
    } else {
        x[0] / x[0].norm()
    };
    let mut v = x.to_vec();
    v[0] += sigma * norm;
    let vsq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    Some((v, 2.0 / vsq))
}

/// In-place reduction to upper Hessenberg form; accumulates the similarity
/// transform into `q` when given (A_in = Q H Q^H).
fn hessenberg(a: &mut Mat, mut q: Option<&mut Mat>) {
    let n = a.n;
    for k in 0..n.saturating_sub(2) {
        let col: Vec<C64> = (k + 1..n).map(|i| a.at(i, k)).collect();
        let Some((v, beta)) = householder(&col) else {
            continue;
        };
        // rows k+1.. of columns k..n
        for j in k..n {
            let mut s = C64::new(0.0, 0.0);
            for (idx, vi) in v.iter().enumerate() {
                s += vi.conj() * a.at(k + 1 + idx, j);
            }
            s *= beta;
            for (idx, vi) in v.iter().enumerate() {
                let cur = a.at(k + 1 + idx, j);
                a.set(k + 1 + idx, j, cur - s * vi);
            }
        }
        // columns k+1.. of every row
        for i in 0..n {
            let row = &mut a.d[i * n..(i + 1) * n];
            let mut s = C64::new(0.0, 0.0);
            for (idx, vi) in v.iter().enumerate() {
                s += row[k + 1 + idx] * vi;
            }
            s *= beta;
            for (idx, vi) in v.iter().enumerate() {
                row[k + 1 + idx] -= s * vi.conj();
            }
        }
        if let Some(qm) = q.as_deref_mut() {
            for i in 0..n {
                let row = &mut qm.d[i * n..(i + 1) * n];
                let mut s = C64::new(0.0, 0.0);
                for (idx, vi) in v.iter().enumerate() {
                    s += row[k + 1 + idx] * vi;
                }
                s *= beta;
                for (idx, vi) in v.iter().enumerate() {
                    row[k + 1 + idx] -= s * vi.conj();
                }
            }
        }
        // the transformed column is known in closed form; store it exactly
        for i in k + 2..n {
            a.set(i, k, C64::new(0.0, 0.0));
        }
    }
}

fn wilkinson_shift(h: &Mat, hi: usize) -> C64 {
    let a = h.at(hi - 1, hi - 1);
    let b = h.at(hi - 1, hi);
    let c = h.at(hi, hi - 1);
    let d = h.at(hi, hi);
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - det * 4.0).sqrt();
    let q = if (tr.conj() * disc).re < 0.0 {
        (tr - disc) * 0.5
    } else {
        (tr + disc) * 0.5
    };
    let r1 = q;
    let r2 = if q.norm() > 0.0 { det / q } else { C64::new(0.0, 0.0) };
    if (r1 - d).norm() <= (r2 - d).norm() {
        r1
    } else {
        r2
    }
}

/// One explicit shifted QR sweep on the active block `lo..=hi`.
fn qr_sweep(h: &mut Mat, q: Option<&mut Mat>, lo: usize, hi: usize, mu: C64) {
    let n = h.n;
    for i in lo..=hi {
        let v = h.at(i, i) - mu;
        h.set(i, i, v);
    }
    let mut rots: Vec<(C64, C64)> = Vec::with_capacity(hi - lo);
    for i in lo..hi {
        let a = h.at(i, i);
        let b = h.at(i + 1, i);
        let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 {
            (C64::new(1.0, 0.0), C64::new(0.0, 0.0))
        } else {
            (a / r, b / r)
        };
        rots.push((c, s));
        let (top, bot) = h.row_pair(i);
        for j in i..n {
            let x = top[j];
            let y = bot[j];
            top[j] = c.conj() * x + s.conj() * y;
            bot[j] = -s * x + c * y;
        }
    }
    for (idx, &(c, s)) in rots.iter().enumerate() {
        let i = lo + idx;
        for r in 0..=(i + 1).min(n - 1) {
            let x = h.at(r, i);
            let y = h.at(r, i + 1);
            h.set(r, i, c * x + s * y);
            h.set(r, i + 1, -s.conj() * x + c.conj() * y);
        }
    }
    if let Some(qm) = q {
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let i = lo + idx;
            for r in 0..n {
                let x = qm.at(r, i);
                let y = qm.at(r, i + 1);
                qm.set(r, i, c * x + s * y);
                qm.set(r, i + 1, -s.conj() * x + c.conj() * y);
            }
        }
    }
    for i in lo..=hi {
        let v = h.at(i, i) + mu;
        h.set(i, i, v);
    }
}

/// Shifted QR iteration driving the Hessenberg matrix to upper triangular
/// form. `q`, when given, accumulates the rotations.
fn qr_iteration(h: &mut Mat, mut q: Option<&mut Mat>) -> Result<()> {
    let n = h.n;
    if n < 2 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let scale = {
        let f = h.frobenius();
        if f > 0.0 {
            f
        } else {
            1.0
        }
    };
    let mut hi = n - 1;
    let mut sweeps = 0usize;
    loop {
        // deflation scan for the unreduced block ending at hi
        let mut lo = hi;
        while lo > 0 {
            let sub = h.at(lo, lo - 1).norm();
            if sub == 0.0 {
                break;
            }
            let mut s = h.at(lo - 1, lo - 1).norm() + h.at(lo, lo).norm();
            if s == 0.0 {
                s = scale;
            }
            if sub <= eps * s {
                h.set(lo, lo - 1, C64::new(0.0, 0.0));
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            if hi == 0 {
                return Ok(());
            }
            hi -= 1;
            sweeps = 0;
            continue;
        }
        sweeps += 1;
        if sweeps > MAX_SWEEPS_PER_EIG {
            return Err(Error::NoConvergence { index: hi, sweeps });
        }
        let mu = if sweeps % 10 == 0 {
            h.at(hi, hi) + C64::new(0.75 * h.at(hi, hi - 1).norm(), 0.0)
        } else {
            wilkinson_shift(h, hi)
        };
        qr_sweep(h, q.as_deref_mut(), lo, hi, mu);
    }
}

/// Right eigenvectors of the original matrix from its Schur factors.
fn eigenvectors_from_schur(t: &Mat, q: &Mat) -> Vec<Vec<C64>> {
    let n = t.n;
    let tiny = f64::EPSILON * t.frobenius().max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let lam = t.at(k, k);
        let mut y = vec![C64::new(0.0, 0.0); k + 1];
        y[k] = C64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut s = C64::new(0.0, 0.0);
            for (j, yj) in y.iter().enumerate().take(k + 1).skip(i + 1) {
                s += t.at(i, j) * yj;
            }
            let mut den = t.at(i, i) - lam;
            if den.norm() < tiny {
                den = C64::new(tiny, 0.0);
            }
            y[i] = -s / den;
            let m = y[i].norm();
            if m > 1e100 {
                for yj in y.iter_mut().skip(i) {
                    *yj /= m;
                }
            }
        }
        let mut v = vec![C64::new(0.0, 0.0); n];
        for (j, yj) in y.iter().enumerate() {
            if yj.norm_sqr() == 0.0 {
                continue;
            }
            for (r, vr) in v.iter_mut().enumerate() {
                *vr += q.at(r, j) * yj;
            }
        }
        let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for vr in v.iter_mut() {
            *vr /= nv;
        }
        out.push(v);
    }
    out
}

fn check_dims(m: &Array2<C64>) -> Result<usize> {
    let (r, c) = m.dim();
    assert_eq!(r, c, "eigendecomposition needs a square matrix");
    if r > MAX_DENSE_DIM {
        return Err(Error::DimensionCap {
            dim: r,
            cap: MAX_DENSE_DIM,
        });
    }
    Ok(r)
}

fn sort_key(z: &C64) -> (f64, f64) {
    (z.re, z.im)
}

/// Eigenvalues only (no transform accumulation), sorted by (Re, Im).
pub fn eigvals_complex_dense(m: &Array2<C64>) -> Result<Vec<C64>> {
    let n = check_dims(m)?;
    if n == 0 {
        return Ok(vec![]);
    }
    let mut h = Mat::from_array(m);
    hessenberg(&mut h, None);
    qr_iteration(&mut h, None)?;
    let mut vals: Vec<C64> = (0..n).map(|i| h.at(i, i)).collect();
    vals.sort_by(|a, b| {
        let (ar, ai) = sort_key(a);
        let (br, bi) = sort_key(b);
        ar.total_cmp(&br).then(ai.total_cmp(&bi))
    });
    Ok(vals)
}

/// Full eigendecomposition with a residual guarantee: every reported pair
/// satisfies |Mv - lambda v| <= 1e-8 * |M| (with |M| conservatively replaced
/// by its max-column lower bound, which only tightens the check).
pub fn eig_complex_dense(m: &Array2<C64>) -> Result<EigenDecomposition> {
    let n = check_dims(m)?;
    if n == 0 {
        return Ok(EigenDecomposition {
            values: vec![],
            vectors: vec![],
        });
    }
    let mut h = Mat::from_array(m);
    let mut q = Mat::identity(n);
    hessenberg(&mut h, Some(&mut q));
    qr_iteration(&mut h, Some(&mut q))?;
    let vectors = eigenvectors_from_schur(&h, &q);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| {
        let (ar, ai) = sort_key(&h.at(a, a));
        let (br, bi) = sort_key(&h.at(b, b));
        ar.total_cmp(&br).then(ai.total_cmp(&bi))
    });
    let values: Vec<C64> = idx.iter().map(|&i| h.at(i, i)).collect();
    let vectors: Vec<Vec<C64>> = idx.iter().map(|&i| vectors[i].clone()).collect();

    let norm_lb = matrix_norm_lower(m).max(f64::MIN_POSITIVE);
    for (k, (lam, v)) in values.iter().zip(vectors.iter()).enumerate() {
        let mut res = 0.0f64;
        for i in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for j in 0..n {
                acc += m[(i, j)] * v[j];
            }
            res += (acc - lam * v[i]).norm_sqr();
        }
        let res = res.sqrt();
        if !(res <= 1e-8 * norm_lb) {
            return Err(Error::Numeric(format!(
                "eigenpair {k} residual {res:.3e} exceeds guarantee {:.3e}",
                1e-8 * norm_lb
            )));
        }
    }
    Ok(EigenDecomposition { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    // deterministic xorshift for reproducible pseudo-random test matrices
    struct Rng(u64);
    impl Rng {
        fn next_f64(&mut self) -> f64 {
            self.0 ^= self.0 << 13;
            self.0 ^= self.0 >> 7;
            self.0 ^= self.0 << 17;
            (self.0 >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        }
    }

    #[test]
    fn triangular_matrix_eigenvalues() {
        let m = array![[c(1.0, 0.0), c(0.0, 1.0)], [c(0.0, 0.0), c(2.0, 0.0)]];
        let vals = eigvals_complex_dense(&m).unwrap();
        assert!((vals[0] - c(1.0, 0.0)).norm() < 1e-14);
        assert!((vals[1] - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn two_by_two_sqrt_eps() {
        let eps = 1e-6;
        let m = array![[c(0.0, 0.0), c(1.0, 0.0)], [c(eps, 0.0), c(0.0, 0.0)]];
        let vals = eigvals_complex_dense(&m).unwrap();
        let r = eps.sqrt();
        assert!((vals[0] - c(-r, 0.0)).norm() < 1e-12);
        assert!((vals[1] - c(r, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn random_matrix_eigenpairs_have_small_residuals() {
        let n = 40;
        let mut rng = Rng(0x9e3779b97f4a7c15);
        let mut m = Array2::from_elem((n, n), c(0.0, 0.0));
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = c(rng.next_f64(), rng.next_f64());
            }
        }
        // eig_complex_dense verifies the residual guarantee internally
        let d = eig_complex_dense(&m).unwrap();
        assert_eq!(d.values.len(), n);
        for v in &d.vectors {
            let nv: f64 = v.iter().map(|z| z.norm_sqr()).sum();
            assert!((nv - 1.0).abs() < 1e-10);
        }
        // eigenvalue sum equals the trace
        let tr: C64 = (0..n).map(|i| m[(i, i)]).sum();
        let sum: C64 = d.values.iter().sum();
        assert!((tr - sum).norm() < 1e-9);
    }

    #[test]
    fn defective_jordan_block_converges() {
        // 3x3 Jordan block with eigenvalue 2: QR must still terminate
        let mut m = Array2::from_elem((3, 3), c(0.0, 0.0));
        for i in 0..3 {
            m[(i, i)] = c(2.0, 0.0);
            if i + 1 < 3 {
                m[(i, i + 1)] = c(1.0, 0.0);
            }
        }
        let vals = eigvals_complex_dense(&m).unwrap();
        for v in vals {
            assert!((v - c(2.0, 0.0)).norm() < 1e-4);
        }
    }

    #[test]
    fn hermitian_free_particle_ground_state() {
        // particle in a box, n=201, l=10: lowest eigenvalue near (pi/2l)^2
        let n = 201usize;
        let l = 10.0;
        let h = 2.0 * l / (n - 1) as f64;
        let m_int = n - 2;
        let mut m = Array2::from_elem((m_int, m_int), c(0.0, 0.0));
        let d = 2.0 / (h * h);
        let e = -1.0 / (h * h);
        for i in 0..m_int {
            m[(i, i)] = c(d, 0.0);
            if i + 1 < m_int {
                m[(i, i + 1)] = c(e, 0.0);
                m[(i + 1, i)] = c(e, 0.0);
            }
        }
        let vals = eigvals_complex_dense(&m).unwrap();
        let expect = (std::f64::consts::PI / (2.0 * l)).powi(2);
        assert!((vals[0].re - expect).abs() < 1e-4);
        assert!(vals[0].im.abs() < 1e-10);
    }

    #[test]
    fn dimension_cap_enforced() {
        let m = Array2::from_elem((MAX_DENSE_DIM + 1, MAX_DENSE_DIM + 1), c(0.0, 0.0));
        match eigvals_complex_dense(&m) {
            Err(Error::DimensionCap { dim, cap }) => {
                assert_eq!(dim, MAX_DENSE_DIM + 1);
                assert_eq!(cap, MAX_DENSE_DIM);
            }
            other => panic!("expected DimensionCap, got {other:?}"),
        }
    }
}
