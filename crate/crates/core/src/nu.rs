//! Closed-form spectra and eigenfunctions for the hyperbolic potential
//! family U(x) = A1 sech^2(mu x) + A2 sech(mu x) tanh(mu x): reduction to a
//! hypergeometric-type equation in z = sinh(mu x), root selection, branch
//! acceptance, quantization (two independent routes), weight function, and
//! Rodrigues-built eigenfunctions.
//!
//! Complex square roots take the principal branch everywhere, so every
//! branch-dependent quantity is bit-for-bit reproducible.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Dimensionless problem data: a1 = A1/mu^2, a2 = A2/mu^2, and the length
/// scale mu. The transformed equation lives on z = sinh(mu x) with
/// sigma(z) = 1 + z^2, tau_tilde(z) = z, and reduced energy ebar = E/mu^2.
#[derive(Debug, Clone, Copy)]
pub struct NUProblem {
    a1: C64,
    a2: C64,
    mu: f64,
}

impl NUProblem {
    pub fn new(a1: C64, a2: C64, mu: f64) -> Result<Self> {
        let finite = |z: C64| z.re.is_finite() && z.im.is_finite();
        if !finite(a1) || !finite(a2) || !mu.is_finite() || mu <= 0.0 {
            return Err(Error::InvalidModel(format!(
                "need finite couplings and mu > 0, got a1 = {a1}, a2 = {a2}, mu = {mu}"
            )));
        }
        Ok(NUProblem { a1, a2, mu })
    }

    /// From the dimensionful potential couplings A1, A2.
    pub fn from_couplings(cap_a1: C64, cap_a2: C64, mu: f64) -> Result<Self> {
        Self::new(cap_a1 / (mu * mu), cap_a2 / (mu * mu), mu)
    }

    pub fn a1(&self) -> C64 {
        self.a1
    }

    pub fn a2(&self) -> C64 {
        self.a2
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// U(x) = mu^2 (a1 sech^2 + a2 sech tanh)(mu x).
    pub fn potential(&self, x: f64) -> C64 {
        let s = (self.mu * x).cosh().recip();
        let t = (self.mu * x).tanh();
        (self.a1 * s * s + self.a2 * s * t) * self.mu * self.mu
    }
}

/// The two roots of the discriminant condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    K1,
    K2,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::K1 => "k1",
            Branch::K2 => "k2",
        }
    }
}

/// c0 + c1 * ebar.
#[derive(Debug, Clone, Copy)]
pub struct Affine {
    pub c0: C64,
    pub c1: C64,
}

impl Affine {
    pub fn eval(&self, ebar: C64) -> C64 {
        self.c0 + self.c1 * ebar
    }

    /// Solve self(ebar) = target.
    pub fn solve(&self, target: C64) -> Result<C64> {
        if self.c1.norm() < 1e-14 {
            return Err(Error::SingularQuantization);
        }
        Ok((target - self.c0) / self.c1)
    }
}

/// sigma, tau_tilde, sigma_tilde as ascending coefficient lists (the last is
/// ebar-dependent).
pub fn nu_reduce(problem: &NUProblem, ebar: C64) -> (Vec<C64>, Vec<C64>, Vec<C64>) {
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    let sigma = vec![one, zero, one];
    let tau_tilde = vec![zero, one];
    let sigma_tilde = vec![ebar - problem.a1, -problem.a2, ebar];
    (sigma, tau_tilde, sigma_tilde)
}

/// How a branch fares against the negative-slope requirement on tau.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchStatus {
    Accepted,
    /// Re tau' = 0: the boundary case; quantities are still defined but the
    /// polynomial tower degenerates (see `EigenfunctionSpec::degenerate`).
    Marginal,
    Rejected,
}

// Everything the downstream operations need about one branch; computed in one
// place so the two k-roots and their derived quantities stay consistent.
#[derive(Debug, Clone, Copy)]
struct BranchData {
    k_affine: Affine,
    g: C64,
    p1: C64,
    p0: C64,
    tau_prime: C64,
    status: BranchStatus,
}

fn branch_data(problem: &NUProblem, branch: Branch) -> BranchData {
    let (a1, a2) = (problem.a1, problem.a2);
    let inner = (a1 * 4.0 - 1.0) * (a1 * 4.0 - 1.0) + a2 * a2 * 16.0;
    let s = inner.sqrt();
    let signed = match branch {
        Branch::K1 => -s,
        Branch::K2 => s,
    };
    // k = ebar + (-1 - 4 a1 +/- S)/8
    let k_affine = Affine {
        c0: (c(-1.0, 0.0) - a1 * 4.0 + signed) / 8.0,
        c1: c(1.0, 0.0),
    };
    // square-root argument (z/2)^2 - sigma_tilde + k sigma = c2 z^2 + a2 z + c0,
    // with the discriminant zero by construction: c2 c0 = (a2/2)^2
    let c2 = (c(1.0, 0.0) - a1 * 4.0 + signed) / 8.0;
    let c0 = (a1 * 4.0 - c(1.0, 0.0) + signed) / 8.0;
    let g = c2.sqrt();
    let p1 = c(0.5, 0.0) - g;
    let p0 = if g.norm() > 0.0 {
        -a2 / (g * 2.0)
    } else {
        // c2 = 0 forces a2 = 0 (discriminant-zero), leaving a constant root
        -c0.sqrt()
    };
    let tau_prime = c(1.0, 0.0) + p1 * 2.0;
    let status = if tau_prime.re < 0.0 {
        BranchStatus::Accepted
    } else if tau_prime.re == 0.0 {
        BranchStatus::Marginal
    } else {
        BranchStatus::Rejected
    };
    BranchData {
        k_affine,
        g,
        p1,
        p0,
        tau_prime,
        status,
    }
}

/// Both k-roots as affine functions of the reduced energy.
pub fn nu_k_roots(problem: &NUProblem) -> (Affine, Affine) {
    (
        branch_data(problem, Branch::K1).k_affine,
        branch_data(problem, Branch::K2).k_affine,
    )
}

/// An accepted (or boundary-case) branch: the linear polynomial
/// pi(z) = p1 z + p0, tau' = 1 + 2 p1, and the affine quantization data.
#[derive(Debug, Clone, Copy)]
pub struct NUBranch {
    pub tag: Branch,
    pub k_affine: Affine,
    pub p1: C64,
    pub p0: C64,
    /// lambda = k + pi' as an affine function of ebar
    pub lambda_affine: Affine,
    pub tau_prime: C64,
    /// Re tau' = 0: accepted only at the boundary of the criterion
    pub marginal: bool,
}

/// Select pi(z) for the branch, enforcing Re tau' < 0 (the boundary case
/// Re tau' = 0 passes with the `marginal` flag set).
pub fn nu_pi(problem: &NUProblem, branch: Branch) -> Result<NUBranch> {
    let d = branch_data(problem, branch);
    if d.status == BranchStatus::Rejected {
        return Err(Error::BranchRejected {
            branch: branch.as_str(),
            re_tau_prime: d.tau_prime.re,
        });
    }
    Ok(NUBranch {
        tag: branch,
        k_affine: d.k_affine,
        p1: d.p1,
        p0: d.p0,
        lambda_affine: Affine {
            c0: d.k_affine.c0 + d.p1,
            c1: d.k_affine.c1,
        },
        tau_prime: d.tau_prime,
        marginal: d.status == BranchStatus::Marginal,
    })
}

/// Quantized energy via the affine route: solve
/// lambda(ebar) = -n tau' - n(n-1) for ebar, return E = mu^2 ebar.
///
/// Defined for every branch; physical admissibility (branch acceptance and
/// normalizability) is reported by [`level_report`].
pub fn nu_energy(problem: &NUProblem, branch: Branch, n: usize) -> Result<C64> {
    let d = branch_data(problem, branch);
    let nf = n as f64;
    let lambda_n = -d.tau_prime * nf - c(nf * (nf - 1.0), 0.0);
    let lambda_affine = Affine {
        c0: d.k_affine.c0 + d.p1,
        c1: d.k_affine.c1,
    };
    let ebar = lambda_affine.solve(lambda_n)?;
    Ok(ebar * problem.mu * problem.mu)
}

/// The same level from the closed-form expression
/// E_n = -mu^2 (n + 1/2 - g)^2; an independent code path used to
/// cross-check [`nu_energy`].
pub fn nu_energy_closed(problem: &NUProblem, branch: Branch, n: usize) -> C64 {
    let d = branch_data(problem, branch);
    let shift = c(n as f64 + 0.5, 0.0) - d.g;
    -shift * shift * problem.mu * problem.mu
}

/// The +/- pair E = +/- v_f sqrt(E2) (principal branch); `imaginary_vf`
/// applies v_f -> i v_f, turning a negative-real E2 into a real pair.
pub fn dirac_energy(e: C64, v_f: f64, imaginary_vf: bool) -> (C64, C64) {
    assert!(v_f > 0.0, "Fermi velocity must be positive");
    let root = e.sqrt() * v_f;
    let root = if imaginary_vf { root * c(0.0, 1.0) } else { root };
    (root, -root)
}

/// rho(z) = (1+z^2)^p e^{q arctan z}.
#[derive(Debug, Clone, Copy)]
pub struct WeightFunction {
    pub p: C64,
    pub q: C64,
}

impl WeightFunction {
    pub fn eval(&self, z: f64) -> C64 {
        let base = 1.0 + z * z;
        (self.p * base.ln() + self.q * z.atan()).exp()
    }
}

/// Solve (sigma rho)' = tau rho for the branch weight: matching
/// coefficients of tau = tau' z + 2 p0 gives p = (tau' - 2)/2 = -g and
/// q = 2 p0.
pub fn nu_weight(problem: &NUProblem, branch: Branch) -> Result<WeightFunction> {
    let b = nu_pi(problem, branch)?;
    Ok(WeightFunction {
        p: (b.tau_prime - 2.0) / 2.0,
        q: b.p0 * 2.0,
    })
}

/// Maximum Rodrigues level kept in exact coefficient arithmetic.
pub const MAX_LEVEL: usize = 12;

/// One closed-form eigenfunction
/// chi_n(x) = cosh^{1/2+alpha}(mu x) e^{-beta arctan(sinh mu x)} y_n(sinh mu x)
/// in the unnormalized convention (N = 1).
#[derive(Debug, Clone)]
pub struct EigenfunctionSpec {
    pub n: usize,
    pub branch: Branch,
    pub alpha: C64,
    pub beta: C64,
    /// ascending coefficients of y_n
    pub poly: Vec<C64>,
    /// true when the Rodrigues polynomial dropped below degree n (happens
    /// exactly on marginal branches, where tau' = 0 collapses the tower)
    pub degenerate: bool,
    mu: f64,
}

fn poly_eval(coeffs: &[C64], z: C64) -> C64 {
    let mut acc = c(0.0, 0.0);
    for &ck in coeffs.iter().rev() {
        acc = acc * z + ck;
    }
    acc
}

fn poly_deriv(coeffs: &[C64]) -> Vec<C64> {
    if coeffs.len() <= 1 {
        return vec![c(0.0, 0.0)];
    }
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &ck)| ck * k as f64)
        .collect()
}

impl EigenfunctionSpec {
    /// log-prefactor L(x) = (1/2+alpha) ln cosh(mu x) - beta arctan(sinh mu x)
    fn log_prefactor(&self, x: f64) -> C64 {
        let mx = self.mu * x;
        (self.alpha + 0.5) * mx.cosh().ln() - self.beta * mx.sinh().atan()
    }

    pub fn eval(&self, x: f64) -> C64 {
        let z = (self.mu * x).sinh();
        self.log_prefactor(x).exp() * poly_eval(&self.poly, c(z, 0.0))
    }

    /// Analytic second derivative of the closed form (no numerical
    /// differentiation), for residual checks against the potential.
    pub fn second_derivative(&self, x: f64) -> C64 {
        let mu = self.mu;
        let mx = mu * x;
        let t = mx.tanh();
        let s = mx.cosh().recip();
        let lp = (self.alpha + 0.5) * mu * t - self.beta * mu * s;
        let lpp = (self.alpha + 0.5) * mu * mu * s * s + self.beta * mu * mu * s * t;
        let z = mx.sinh();
        let zp = mu * mx.cosh();
        let zpp = mu * mu * z;
        let d1 = poly_deriv(&self.poly);
        let d2 = poly_deriv(&d1);
        let y = poly_eval(&self.poly, c(z, 0.0));
        let yp = poly_eval(&d1, c(z, 0.0));
        let ypp = poly_eval(&d2, c(z, 0.0));
        self.log_prefactor(x).exp()
            * ((lp * lp + lpp) * y + lp * yp * zp * 2.0 + ypp * zp * zp + yp * zpp)
    }
}

/// Rodrigues construction: y_n = P_n with P_0 = 1 and
/// P_{k+1} = (2(n+p-k) z + q) P_k + (1+z^2) P_k'.
fn rodrigues(n: usize, p: C64, q: C64) -> Vec<C64> {
    let mut pk = vec![c(1.0, 0.0)];
    for k in 0..n {
        let a = (p + (n - k) as f64) * 2.0;
        let d = poly_deriv(&pk);
        let mut next = vec![c(0.0, 0.0); pk.len() + 1];
        for (i, &ci) in pk.iter().enumerate() {
            next[i + 1] += a * ci;
            next[i] += q * ci;
        }
        for (i, &di) in d.iter().enumerate() {
            next[i] += di;
            if di.norm_sqr() != 0.0 {
                next[i + 2] += di;
            }
        }
        while next.len() > 1 && next.last().unwrap().norm() == 0.0 {
            next.pop();
        }
        pk = next;
    }
    pk
}

/// Closed-form level-n eigenfunction for the branch; exponents
/// alpha = -g and beta = -p0 follow from the weight and prefactor matching.
pub fn nu_eigenfunction(problem: &NUProblem, branch: Branch, n: usize) -> Result<EigenfunctionSpec> {
    if n > MAX_LEVEL {
        return Err(Error::UnsupportedDegree { n, cap: MAX_LEVEL });
    }
    let d = branch_data(problem, branch);
    let weight_p = (d.tau_prime - 2.0) / 2.0;
    let weight_q = d.p0 * 2.0;
    let poly = rodrigues(n, weight_p, weight_q);
    let degenerate = poly.len() != n + 1;
    Ok(EigenfunctionSpec {
        n,
        branch,
        alpha: -d.g,
        beta: -d.p0,
        poly,
        degenerate,
        mu: problem.mu,
    })
}

/// Level census for one branch.
#[derive(Debug, Clone, Copy)]
pub struct LevelReport {
    pub branch: Branch,
    pub status: BranchStatus,
    pub tau_prime: C64,
    /// count of n with Re(1/2 + alpha) + n < 0 (strict decay)
    pub normalizable: usize,
    /// the single level sitting exactly on the threshold, if any
    pub marginal: Option<usize>,
}

/// Count the normalizable levels: chi_n decays at both infinities iff
/// Re(1/2 + alpha) + n < 0. Rejected branches carry no states.
pub fn level_report(problem: &NUProblem, branch: Branch) -> LevelReport {
    let d = branch_data(problem, branch);
    if d.status == BranchStatus::Rejected {
        return LevelReport {
            branch,
            status: d.status,
            tau_prime: d.tau_prime,
            normalizable: 0,
            marginal: None,
        };
    }
    // Re(1/2 - g) + n < 0  <=>  n < Re g - 1/2
    let bound = d.g.re - 0.5;
    let normalizable = if bound > 0.0 { bound.ceil() as usize } else { 0 };
    let marginal = if bound >= 0.0 && bound.fract() == 0.0 {
        Some(bound as usize)
    } else {
        None
    };
    LevelReport {
        branch,
        status: d.status,
        tau_prime: d.tau_prime,
        normalizable,
        marginal,
    }
}

pub fn normalizable_levels(problem: &NUProblem, branch: Branch) -> usize {
    level_report(problem, branch).normalizable
}

/// Potential couplings induced by an intertwiner pair (B1, S):
/// A1 = -(V2^2/mu^2 + 2 B1 mu), A2 = i (V2 + 2 S mu), with V2 = a mu.
pub fn scarf_couplings_from_intertwiner(b1: C64, s: C64, a: f64, mu: f64) -> (C64, C64) {
    let v2 = c(a * mu, 0.0);
    let cap_a1 = -(v2 * v2 / (mu * mu) + b1 * 2.0 * mu);
    let cap_a2 = c(0.0, 1.0) * (v2 + s * 2.0 * mu);
    (cap_a1, cap_a2)
}

/// Jacobi polynomial P_n^{(a,b)}(x) for complex parameters, by the
/// three-term recurrence. Diagnostic use only: comparison target for the
/// Rodrigues construction under t = i z, a = p + i q/2, b = p - i q/2.
pub fn jacobi_poly(n: usize, a: C64, b: C64, x: C64) -> C64 {
    if n == 0 {
        return c(1.0, 0.0);
    }
    let mut pm1 = c(1.0, 0.0);
    let mut p = (a - b) / 2.0 + (a + b + 2.0) / 2.0 * x;
    for m in 2..=n {
        let mf = m as f64;
        let c1 = (a + b + 2.0 * mf) * (a + b + 2.0 * mf - 1.0) * (a + b + 2.0 * mf - 2.0);
        let c2 = (a + b + 2.0 * mf - 1.0) * (a * a - b * b);
        let c3 = 2.0 * (a + mf - 1.0) * (b + mf - 1.0) * (a + b + 2.0 * mf);
        let c4 = 2.0 * mf * (a + b + mf) * (a + b + 2.0 * mf - 2.0);
        let next = ((c1 * x + c2) * p - c3 * pm1) / c4;
        pm1 = p;
        p = next;
    }
    p
}
