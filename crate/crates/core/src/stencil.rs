//! Finite-difference stencils: Fornberg weights on arbitrary nodes, fixed
//! uniform-grid stencil tables, and banded operator application (with the
//! adjoint, needed for conjugate-transpose residual checks).

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Requested discretization accuracy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Acc {
    Two,
    Four,
}

impl Acc {
    pub fn as_u8(self) -> u8 {
        match self {
            Acc::Two => 2,
            Acc::Four => 4,
        }
    }

    pub fn from_u8(v: u8) -> Option<Acc> {
        match v {
            2 => Some(Acc::Two),
            4 => Some(Acc::Four),
            _ => None,
        }
    }
}

/// Weights of the finite-difference approximations to derivatives `0..=m` at
/// `x0` from the nodes `xs` (Fornberg's recurrence). `w[k][j]` multiplies the
/// sample at `xs[j]` in the k-th derivative.
pub fn fornberg_weights(x0: f64, xs: &[f64], m: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    assert!(n > m, "need more nodes than the derivative order");
    let mut w = vec![vec![0.0; n]; m + 1];
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    w[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    w[k][i] = c1 * (k as f64 * w[k - 1][i - 1] - c5 * w[k][i - 1]) / c2;
                }
                w[0][i] = -c1 * c5 * w[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                w[k][j] = (c4 * w[k][j] - k as f64 * w[k - 1][j]) / c3;
            }
            w[0][j] = c4 * w[0][j] / c3;
        }
        c1 = c2;
    }
    w
}

// Uniform-grid stencil tables (unit spacing; scale by h^-d). The hard-coded
// rationals keep mirrored rows exact negations/copies of each other, which
// matters for reflection identities; the tables are cross-checked against
// fornberg_weights in the tests.
const D1A2_CENTRAL: [f64; 3] = [-0.5, 0.0, 0.5];
const D1A2_EDGE0: [f64; 3] = [-1.5, 2.0, -0.5];

const D1A4_CENTRAL: [f64; 5] = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
const D1A4_EDGE0: [f64; 5] = [-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -0.25];
const D1A4_EDGE1: [f64; 5] = [-0.25, -5.0 / 6.0, 1.5, -0.5, 1.0 / 12.0];

const D2A2_CENTRAL: [f64; 3] = [1.0, -2.0, 1.0];
const D2A2_EDGE0: [f64; 4] = [2.0, -5.0, 4.0, -1.0];

const D2A4_CENTRAL: [f64; 5] = [-1.0 / 12.0, 4.0 / 3.0, -5.0 / 2.0, 4.0 / 3.0, -1.0 / 12.0];
const D2A4_EDGE0: [f64; 6] = [
    15.0 / 4.0,
    -77.0 / 6.0,
    107.0 / 6.0,
    -13.0,
    61.0 / 12.0,
    -5.0 / 6.0,
];
const D2A4_EDGE1: [f64; 6] = [5.0 / 6.0, -5.0 / 4.0, -1.0 / 3.0, 7.0 / 6.0, -0.5, 1.0 / 12.0];

/// One stencil row: starting column plus unit-spacing weights.
#[derive(Debug, Clone)]
pub struct Row {
    pub start: usize,
    pub w: Vec<f64>,
}

fn edge_rows(deriv: usize, acc: Acc) -> Vec<&'static [f64]> {
    match (deriv, acc) {
        (1, Acc::Two) => vec![&D1A2_EDGE0],
        (1, Acc::Four) => vec![&D1A4_EDGE0, &D1A4_EDGE1],
        (2, Acc::Two) => vec![&D2A2_EDGE0],
        (2, Acc::Four) => vec![&D2A4_EDGE0, &D2A4_EDGE1],
        _ => panic!("unsupported stencil request: derivative {deriv}"),
    }
}

fn central_row(deriv: usize, acc: Acc) -> &'static [f64] {
    match (deriv, acc) {
        (1, Acc::Two) => &D1A2_CENTRAL,
        (1, Acc::Four) => &D1A4_CENTRAL,
        (2, Acc::Two) => &D2A2_CENTRAL,
        (2, Acc::Four) => &D2A4_CENTRAL,
        _ => panic!("unsupported stencil request: derivative {deriv}"),
    }
}

/// Minimum grid length for which `rows` is well-formed.
pub fn min_points(deriv: usize, acc: Acc) -> usize {
    let e = edge_rows(deriv, acc);
    let longest_edge = e.iter().map(|r| r.len()).max().unwrap();
    longest_edge.max(2 * e.len() + 1)
}

/// All `n` stencil rows for the requested derivative: one-sided rows near the
/// edges, the central stencil elsewhere. Right-edge rows are exact mirrors of
/// the left-edge rows (times `(-1)^deriv`), so reflecting the grid reflects
/// the operator bit-for-bit. Weights are for unit spacing.
pub fn rows(n: usize, deriv: usize, acc: Acc) -> Result<Vec<Row>> {
    let need = min_points(deriv, acc);
    if n < need {
        return Err(Error::GridTooShort { n, need });
    }
    let edges = edge_rows(deriv, acc);
    let central = central_row(deriv, acc);
    let margin = edges.len();
    let half = central.len() / 2;
    let sign = if deriv % 2 == 0 { 1.0 } else { -1.0 };
    let mut out = Vec::with_capacity(n);
    for e in edges.iter() {
        out.push(Row {
            start: 0,
            w: e.to_vec(),
        });
    }
    for _ in margin..n - margin {
        out.push(Row { start: 0, w: central.to_vec() });
    }
    for i in margin..n - margin {
        out[i].start = i - half;
    }
    for r in (0..margin).rev() {
        let e = &out[r];
        let w: Vec<f64> = e.w.iter().rev().map(|&c| sign * c).collect();
        let start = n - (e.start + e.w.len());
        out.push(Row { start, w });
    }
    Ok(out)
}

/// Differentiate samples on a uniform grid of spacing `h`.
pub fn apply_derivative(values: &[C64], h: f64, deriv: usize, acc: Acc) -> Result<Vec<C64>> {
    let rs = rows(values.len(), deriv, acc)?;
    let scale = h.powi(-(deriv as i32));
    Ok(rs
        .iter()
        .map(|row| {
            let mut acc_v = C64::new(0.0, 0.0);
            for (j, &w) in row.w.iter().enumerate() {
                if w != 0.0 {
                    acc_v += values[row.start + j] * w;
                }
            }
            acc_v * scale
        })
        .collect())
}

/// A banded complex operator stored row-wise, with forward and adjoint
/// (conjugate-transpose) application.
#[derive(Debug, Clone)]
pub struct BandedOp {
    n: usize,
    rows: Vec<(usize, Vec<C64>)>,
}

impl BandedOp {
    pub fn n(&self) -> usize {
        self.n
    }

    /// `-d2/dx2 + diag(u)` on the full grid (one-sided rows at the edges).
    pub fn schrodinger(u: &[C64], h: f64, acc: Acc) -> Result<Self> {
        let n = u.len();
        let rs = rows(n, 2, acc)?;
        let s = -1.0 / (h * h);
        let rows = rs
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                let mut w: Vec<C64> = r.w.iter().map(|&c| C64::new(c * s, 0.0)).collect();
                w[i - r.start] += u[i];
                (r.start, w)
            })
            .collect();
        Ok(BandedOp { n, rows })
    }

    /// First-order operator `c1 * d/dx + diag(g)`.
    pub fn first_order(g: &[C64], c1: f64, h: f64, acc: Acc) -> Result<Self> {
        let n = g.len();
        let rs = rows(n, 1, acc)?;
        let s = c1 / h;
        let rows = rs
            .into_iter()
            .enumerate()
            .map(|(i, r)| {
                let mut w: Vec<C64> = r.w.iter().map(|&c| C64::new(c * s, 0.0)).collect();
                w[i - r.start] += g[i];
                (r.start, w)
            })
            .collect();
        Ok(BandedOp { n, rows })
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.n);
        self.rows
            .iter()
            .map(|(start, w)| {
                let mut acc = C64::new(0.0, 0.0);
                for (j, &c) in w.iter().enumerate() {
                    acc += c * v[start + j];
                }
                acc
            })
            .collect()
    }

    pub fn apply_adjoint(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.n);
        let mut out = vec![C64::new(0.0, 0.0); self.n];
        for (i, (start, w)) in self.rows.iter().enumerate() {
            for (j, &c) in w.iter().enumerate() {
                out[start + j] += c.conj() * v[i];
            }
        }
        out
    }
}

pub fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
