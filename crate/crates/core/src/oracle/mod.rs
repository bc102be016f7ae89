//! Independent numerical ground truth: finite-difference discretization of
//! `-d2/dx2 + U(x)` with Dirichlet walls, dense complex eigendecomposition,
//! bound-state extraction, spectrum matching, and convergence studies.

mod eig;
mod tridiag;

pub use eig::{eig_complex_dense, eigvals_complex_dense, matrix_norm_lower, EigenDecomposition, MAX_DENSE_DIM};

use ndarray::Array2;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::stencil::{rows, Acc};

/// Dense discretization of a Schrodinger-type operator on the interior nodes
/// of a symmetric grid (Dirichlet walls).
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub matrix: Array2<C64>,
    pub grid: Grid,
    pub order: Acc,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn eigenvalues(&self) -> Result<Vec<C64>> {
        eigvals_complex_dense(&self.matrix)
    }

    pub fn eigen(&self) -> Result<EigenDecomposition> {
        eig_complex_dense(&self.matrix)
    }
}

/// `-d2/dx2 + U(x)` on the interior nodes; boundary-node stencil weights
/// multiply the (zero) wall values and are dropped.
pub fn discretize_schrodinger<F>(u: F, grid: &Grid, order: Acc) -> Result<OperatorMatrix>
where
    F: Fn(f64) -> C64,
{
    let n = grid.n();
    let pts = grid.points();
    let h = grid.h();
    let all_rows = rows(n, 2, order)?;
    let m = n - 2;
    let s = -1.0 / (h * h);
    let mut matrix = Array2::from_elem((m, m), C64::new(0.0, 0.0));
    for gi in 1..=n - 2 {
        let row = &all_rows[gi];
        let i = gi - 1;
        for (k, &w) in row.w.iter().enumerate() {
            let gj = row.start + k;
            if gj == 0 || gj == n - 1 || w == 0.0 {
                continue;
            }
            matrix[(i, gj - 1)] += C64::new(w * s, 0.0);
        }
        let x = pts[gi];
        let uv = u(x);
        if !uv.re.is_finite() || !uv.im.is_finite() {
            return Err(Error::NonFinitePotential { x });
        }
        matrix[(i, i)] += uv;
    }
    Ok(OperatorMatrix {
        matrix,
        grid: *grid,
        order,
    })
}

/// Bound-state real-part threshold: only eigenvalues with Re below this are
/// bound candidates.
const BOUND_RE_MAX: f64 = -1e-3;
/// Eigenvector boundary amplitude must fall below this fraction of its max.
const DECAY_FRACTION: f64 = 1e-4;
/// Potential magnitude allowed at the outermost interior points. Tails at
/// this level shift bound eigenvalues by far less than the tolerances any
/// caller of this oracle works to; larger tails mean the box is genuinely
/// truncating the potential.
const BOUNDARY_DECAY: f64 = 1e-5;
/// Coarse-grid point count for the dense scan stage.
const COARSE_N: usize = 401;
/// Refined values closer than this are considered the same state.
const DEDUPE_TOL: f64 = 1e-6;

fn decay_ok(v: &[C64]) -> bool {
    let maxv = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if maxv == 0.0 {
        return false;
    }
    v[0].norm() < DECAY_FRACTION * maxv && v[v.len() - 1].norm() < DECAY_FRACTION * maxv
}

fn sort_pairs(pairs: &mut Vec<(C64, Vec<C64>)>) {
    pairs.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
}

fn bound_pairs<F>(u: F, grid: &Grid) -> Result<Vec<(C64, Vec<C64>)>>
where
    F: Fn(f64) -> C64,
{
    let pts = grid.points();
    let n = grid.n();
    let edge = u(pts[1]).norm().max(u(pts[n - 2]).norm());
    if edge >= BOUNDARY_DECAY {
        return Err(Error::DomainTooSmall {
            l: grid.l(),
            boundary: edge,
        });
    }

    if n <= COARSE_N {
        let op = discretize_schrodinger(&u, grid, Acc::Two)?;
        let d = op.eigen()?;
        let mut out: Vec<(C64, Vec<C64>)> = d
            .values
            .into_iter()
            .zip(d.vectors)
            .filter(|(lam, v)| lam.re < BOUND_RE_MAX && decay_ok(v))
            .collect();
        sort_pairs(&mut out);
        return Ok(out);
    }

    // stage 1: dense scan on a coarse grid for candidate locations
    let coarse = Grid::new(grid.l(), COARSE_N)?;
    let coarse_op = discretize_schrodinger(&u, &coarse, Acc::Two)?;
    let coarse_vals = coarse_op.eigenvalues()?;
    let candidates: Vec<C64> = coarse_vals
        .into_iter()
        .filter(|lam| lam.re < BOUND_RE_MAX)
        .collect();

    // stage 2: refine each candidate on the full grid (tridiagonal inverse
    // iteration with Rayleigh polish)
    let h = grid.h();
    let m = n - 2;
    let mut diag = Vec::with_capacity(m);
    for gi in 1..=n - 2 {
        let x = pts[gi];
        let uv = u(x);
        if !uv.re.is_finite() || !uv.im.is_finite() {
            return Err(Error::NonFinitePotential { x });
        }
        diag.push(C64::new(2.0 / (h * h), 0.0) + uv);
    }
    let off = C64::new(-1.0 / (h * h), 0.0);
    let tnorm = diag
        .iter()
        .map(|z| (z.norm_sqr() + 2.0 * off.norm_sqr()).sqrt())
        .fold(0.0, f64::max);
    let start: Vec<C64> = (1..=n - 2)
        .map(|gi| {
            let x = pts[gi];
            C64::new((0.5 * x).cosh().recip() * (1.0 + 0.3 * (2.7 * x + 0.4).sin()), 0.0)
        })
        .collect();
    let mut refined: Vec<(C64, Vec<C64>)> = Vec::new();
    for sigma0 in candidates {
        let Some((lam, v, _res)) =
            tridiag::refine_eigenpair(&diag, off, sigma0, &start, 1e-8 * tnorm)
        else {
            continue;
        };
        if lam.re >= BOUND_RE_MAX || !decay_ok(&v) {
            continue;
        }
        if refined.iter().any(|(l0, _)| (l0 - lam).norm() < DEDUPE_TOL) {
            continue;
        }
        refined.push((lam, v));
    }
    sort_pairs(&mut refined);
    Ok(refined)
}

/// Numeric bound-state eigenvalues of `-d2/dx2 + U(x)` on `grid`: eigenvalues
/// with `Re < -1e-3` whose eigenvectors decay at the walls. Sorted by
/// (Re, Im).
pub fn bound_spectrum<F>(u: F, grid: &Grid) -> Result<Vec<C64>>
where
    F: Fn(f64) -> C64,
{
    Ok(bound_pairs(u, grid)?.into_iter().map(|(l, _)| l).collect())
}

/// Like [`bound_spectrum`], also returning the unit eigenvectors sampled on
/// the interior nodes.
pub fn bound_spectrum_with_vectors<F>(u: F, grid: &Grid) -> Result<Vec<(C64, Vec<C64>)>>
where
    F: Fn(f64) -> C64,
{
    bound_pairs(u, grid)
}

/// One row of a spectrum comparison: a closed-form level and, when matching
/// succeeded, its numeric partner.
#[derive(Debug, Clone)]
pub struct MatchedPair {
    pub closed_form: C64,
    pub numeric: Option<C64>,
    pub abs_err: Option<f64>,
    pub matched: bool,
}

#[derive(Debug, Clone)]
pub struct SpectrumReport {
    /// one entry per closed-form input, in input order
    pub pairs: Vec<MatchedPair>,
    /// numeric levels no closed-form value claimed
    pub unmatched_numeric: Vec<C64>,
    pub tol: f64,
    pub grid: Option<Grid>,
}

impl SpectrumReport {
    pub fn all_matched(&self) -> bool {
        self.pairs.iter().all(|p| p.matched)
    }
}

/// Greedy nearest-neighbor matching in the complex plane; closed-form values
/// are processed in ascending |value| so the result is deterministic.
pub fn match_spectra(closed: &[C64], numeric: &[C64], tol: f64) -> SpectrumReport {
    let mut order: Vec<usize> = (0..closed.len()).collect();
    order.sort_by(|&a, &b| {
        closed[a]
            .norm()
            .total_cmp(&closed[b].norm())
            .then(closed[a].re.total_cmp(&closed[b].re))
            .then(closed[a].im.total_cmp(&closed[b].im))
    });
    let mut claimed = vec![false; numeric.len()];
    let mut pairs: Vec<Option<MatchedPair>> = vec![None; closed.len()];
    for &ci in &order {
        let cv = closed[ci];
        let mut best: Option<(usize, f64)> = None;
        for (ni, &nv) in numeric.iter().enumerate() {
            if claimed[ni] {
                continue;
            }
            let d = (cv - nv).norm();
            if best.map(|(_, bd)| d < bd).unwrap_or(true) {
                best = Some((ni, d));
            }
        }
        pairs[ci] = Some(match best {
            Some((ni, d)) if d <= tol => {
                claimed[ni] = true;
                MatchedPair {
                    closed_form: cv,
                    numeric: Some(numeric[ni]),
                    abs_err: Some(d),
                    matched: true,
                }
            }
            _ => MatchedPair {
                closed_form: cv,
                numeric: None,
                abs_err: None,
                matched: false,
            },
        });
    }
    let unmatched_numeric = numeric
        .iter()
        .zip(claimed.iter())
        .filter(|(_, &c)| !c)
        .map(|(&v, _)| v)
        .collect();
    SpectrumReport {
        pairs: pairs.into_iter().map(Option::unwrap).collect(),
        unmatched_numeric,
        tol,
        grid: None,
    }
}

#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub name: String,
    pub errors: Vec<f64>,
    /// `errors[k] / errors[k+1]`; near `2^p` for an order-p scheme
    pub ratios: Vec<f64>,
    pub inconclusive: bool,
}

/// Evaluate an error measure on successively refined grids and report the
/// decay ratios. Grids must share `l` and halve the spacing each step.
pub fn convergence_study<F>(name: &str, grids: &[Grid], mut quantity: F) -> Result<ConvergenceReport>
where
    F: FnMut(&Grid) -> Result<f64>,
{
    if grids.len() < 3 {
        return Err(Error::InvalidModel(format!(
            "convergence study needs at least 3 grids, got {}",
            grids.len()
        )));
    }
    for w in grids.windows(2) {
        if w[0].l() != w[1].l() || w[1].n() != 2 * w[0].n() - 1 {
            return Err(Error::InvalidModel(
                "convergence grids must share the half-width and halve the spacing".into(),
            ));
        }
    }
    let mut errors = Vec::with_capacity(grids.len());
    for g in grids {
        errors.push(quantity(g)?);
    }
    let mut ratios = Vec::with_capacity(errors.len() - 1);
    let mut inconclusive = false;
    for w in errors.windows(2) {
        if !(w[0] > 0.0) || !(w[1] > 0.0) || w[1] >= w[0] {
            inconclusive = true;
        }
        ratios.push(if w[1] != 0.0 { w[0] / w[1] } else { f64::INFINITY });
    }
    Ok(ConvergenceReport {
        name: name.to_string(),
        errors,
        ratios,
        inconclusive,
    })
}
