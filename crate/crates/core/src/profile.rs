//! Vector-potential profiles with analytic derivatives. Numerical
//! differentiation never enters the closed-form side; the table-backed
//! profile carries node derivatives computed once at load time.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::stencil::fornberg_weights;

/// A_y profile: value and analytic derivative at any point.
#[derive(Debug, Clone)]
pub enum Profile {
    Constant(C64),
    /// amp * sech(mu x)
    Sech { amp: C64, mu: f64 },
    /// amp * tanh(mu x)
    Tanh { amp: C64, mu: f64 },
    Table(TableProfile),
}

impl Profile {
    pub fn eval(&self, x: f64) -> Result<C64> {
        let v = match self {
            Profile::Constant(c) => *c,
            Profile::Sech { amp, mu } => amp * (mu * x).cosh().recip(),
            Profile::Tanh { amp, mu } => amp * (mu * x).tanh(),
            Profile::Table(t) => t.interp(&t.values, x)?,
        };
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation {
                x,
                what: "profile value is not finite".into(),
            })
        }
    }

    pub fn deriv(&self, x: f64) -> Result<C64> {
        let v = match self {
            Profile::Constant(_) => C64::new(0.0, 0.0),
            Profile::Sech { amp, mu } => {
                let s = (mu * x).cosh().recip();
                -amp * mu * s * (mu * x).tanh()
            }
            Profile::Tanh { amp, mu } => {
                let s = (mu * x).cosh().recip();
                amp * mu * s * s
            }
            Profile::Table(t) => t.interp(&t.derivs, x)?,
        };
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::Evaluation {
                x,
                what: "profile derivative is not finite".into(),
            })
        }
    }
}

/// Tabulated profile on strictly increasing nodes; evaluation uses 4-point
/// Lagrange interpolation, derivatives come from 5-point weights computed per
/// node when the table is loaded.
#[derive(Debug, Clone)]
pub struct TableProfile {
    xs: Vec<f64>,
    values: Vec<C64>,
    derivs: Vec<C64>,
}

impl TableProfile {
    pub fn new(xs: Vec<f64>, values: Vec<C64>) -> Result<Self> {
        if xs.len() != values.len() {
            return Err(Error::UnsupportedProfile(
                "table nodes and values differ in length".into(),
            ));
        }
        if xs.len() < 5 {
            return Err(Error::UnsupportedProfile(format!(
                "table profile needs at least 5 nodes, got {}",
                xs.len()
            )));
        }
        if !xs.windows(2).all(|w| w[1] > w[0]) || !xs.iter().all(|x| x.is_finite()) {
            return Err(Error::UnsupportedProfile(
                "table nodes must be finite and strictly increasing".into(),
            ));
        }
        if !values.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::UnsupportedProfile(
                "table values must be finite".into(),
            ));
        }
        let n = xs.len();
        let mut derivs = Vec::with_capacity(n);
        for i in 0..n {
            let lo = i.saturating_sub(2).min(n - 5);
            let w = fornberg_weights(xs[i], &xs[lo..lo + 5], 1);
            let d: C64 = (0..5).map(|j| values[lo + j] * w[1][j]).sum();
            derivs.push(d);
        }
        Ok(TableProfile { xs, values, derivs })
    }

    /// Parse whitespace-separated lines `x re [im]`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut xs = Vec::new();
        let mut values = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() < 2 || fields.len() > 3 {
                return Err(Error::UnsupportedProfile(format!(
                    "table line {} needs `x re [im]`, got {:?}",
                    ln + 1,
                    line
                )));
            }
            let parse = |s: &str| -> Result<f64> {
                s.parse::<f64>().map_err(|_| {
                    Error::UnsupportedProfile(format!("table line {}: bad number {s:?}", ln + 1))
                })
            };
            let x = parse(fields[0])?;
            let re = parse(fields[1])?;
            let im = if fields.len() == 3 { parse(fields[2])? } else { 0.0 };
            xs.push(x);
            values.push(C64::new(re, im));
        }
        TableProfile::new(xs, values)
    }

    fn interp(&self, table: &[C64], x: f64) -> Result<C64> {
        let n = self.xs.len();
        if x < self.xs[0] || x > self.xs[n - 1] {
            return Err(Error::Evaluation {
                x,
                what: format!(
                    "outside table range [{}, {}]",
                    self.xs[0],
                    self.xs[n - 1]
                ),
            });
        }
        let pos = self.xs.partition_point(|&t| t < x);
        let lo = pos.saturating_sub(2).min(n - 4);
        let xs = &self.xs[lo..lo + 4];
        let ys = &table[lo..lo + 4];
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..4 {
            let mut w = 1.0;
            for j in 0..4 {
                if i != j {
                    w *= (x - xs[j]) / (xs[i] - xs[j]);
                }
            }
            acc += ys[i] * w;
        }
        Ok(acc)
    }
}

/// Named profile shapes exposed on the command line.
pub fn named_profile(name: &str, amp: C64, mu: f64) -> Result<Profile> {
    match name {
        "scarf2" => Ok(Profile::Sech { amp, mu }),
        "constant" => Ok(Profile::Constant(amp)),
        "tanh" => Ok(Profile::Tanh { amp, mu }),
        other => Err(Error::UnsupportedProfile(format!(
            "unknown profile {other:?} (expected scarf2, constant, tanh, or custom-table)"
        ))),
    }
}
