//! Complex tridiagonal linear algebra for the fine-grid refinement stage:
//! LU with partial pivoting (one fill-in superdiagonal) and shifted inverse
//! iteration with Rayleigh-quotient polish.

use num_complex::Complex64 as C64;

/// LU factors of a tridiagonal matrix after partial pivoting.
pub struct TridiagLu {
    n: usize,
    dl: Vec<C64>,
    d: Vec<C64>,
    du: Vec<C64>,
    du2: Vec<C64>,
    swapped: Vec<bool>,
}

/// Factor the tridiagonal matrix with diagonal `d` and constant off-diagonals
/// `off` (symmetric), after shifting the diagonal by `-sigma`.
pub fn factor_shifted(diag: &[C64], off: C64, sigma: C64) -> TridiagLu {
    let n = diag.len();
    let scale = diag
        .iter()
        .map(|z| z.norm())
        .fold(off.norm(), f64::max)
        .max(f64::MIN_POSITIVE);
    let tiny = f64::EPSILON * scale;
    let mut d: Vec<C64> = diag.iter().map(|&x| x - sigma).collect();
    let mut dl = vec![off; n.saturating_sub(1)];
    let mut du = vec![off; n.saturating_sub(1)];
    let mut du2 = vec![C64::new(0.0, 0.0); n.saturating_sub(2)];
    let mut swapped = vec![false; n.saturating_sub(1)];
    for i in 0..n.saturating_sub(1) {
        if d[i].norm() >= dl[i].norm() {
            if d[i].norm() < tiny {
                d[i] = C64::new(tiny, 0.0);
            }
            let fact = dl[i] / d[i];
            dl[i] = fact;
            d[i + 1] -= fact * du[i];
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            dl[i] = fact;
            let temp = du[i];
            du[i] = d[i + 1];
            d[i + 1] = temp - fact * d[i + 1];
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du[i + 1];
            }
            swapped[i] = true;
        }
    }
    if n > 0 && d[n - 1].norm() < tiny {
        d[n - 1] = C64::new(tiny, 0.0);
    }
    TridiagLu {
        n,
        dl,
        d,
        du,
        du2,
        swapped,
    }
}

impl TridiagLu {
    pub fn solve_in_place(&self, b: &mut [C64]) {
        let n = self.n;
        assert_eq!(b.len(), n);
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                b.swap(i, i + 1);
            }
            let t = self.dl[i] * b[i];
            b[i + 1] -= t;
        }
        if n == 0 {
            return;
        }
        b[n - 1] /= self.d[n - 1];
        if n >= 2 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

/// `T v` for the symmetric tridiagonal with diagonal `diag`, off-diagonal `off`.
pub fn apply_tridiag(diag: &[C64], off: C64, v: &[C64]) -> Vec<C64> {
    let n = diag.len();
    (0..n)
        .map(|i| {
            let mut s = diag[i] * v[i];
            if i > 0 {
                s += off * v[i - 1];
            }
            if i + 1 < n {
                s += off * v[i + 1];
            }
            s
        })
        .collect()
}

fn normalize(v: &mut [C64]) -> f64 {
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
    n
}

/// Shifted inverse iteration from `sigma0`, with Rayleigh-quotient updates
/// once the fixed-shift phase has locked on. Returns (eigenvalue, unit
/// eigenvector, residual) when the residual reaches `tol`, else None.
pub fn refine_eigenpair(
    diag: &[C64],
    off: C64,
    sigma0: C64,
    start: &[C64],
    tol: f64,
) -> Option<(C64, Vec<C64>, f64)> {
    let n = diag.len();
    assert_eq!(start.len(), n);
    let mut v = start.to_vec();
    if normalize(&mut v) == 0.0 {
        return None;
    }
    let lu = factor_shifted(diag, off, sigma0);
    for _ in 0..4 {
        lu.solve_in_place(&mut v);
        if normalize(&mut v) == 0.0 {
            return None;
        }
    }
    let mut best: Option<(C64, Vec<C64>, f64)> = None;
    for _ in 0..12 {
        let tv = apply_tridiag(diag, off, &v);
        let sigma: C64 = v.iter().zip(tv.iter()).map(|(a, b)| a.conj() * b).sum();
        let res = v
            .iter()
            .zip(tv.iter())
            .map(|(vi, ti)| (ti - sigma * vi).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let better = best.as_ref().map(|(_, _, r)| res < *r).unwrap_or(true);
        if better {
            best = Some((sigma, v.clone(), res));
        }
        if res <= tol {
            break;
        }
        let lu = factor_shifted(diag, off, sigma);
        lu.solve_in_place(&mut v);
        if normalize(&mut v) == 0.0 {
            break;
        }
    }
    best.filter(|(_, _, r)| *r <= tol)
}
