use clap::Args;
use num_complex::Complex64 as C64;

use ptscarf::intertwine::{
    intertwining_residual, pseudo_hermiticity_residual, solve_bs_constraints, spectral_shift_check,
    EtaOperator,
};
use ptscarf::model::{partner_potentials, pt_symmetry_residual, scarf2_potentials, ScarfModel};
use ptscarf::oracle::convergence_study;
use ptscarf::pdfv::{
    eff_potential_full, eff_potential_simplified, transcription_residual, ConstraintSet,
    PdfvAnsatz, PdfvKind, Which,
};
use ptscarf::Grid;

use crate::commands::{require_format, CommonArgs};
use crate::config::{load, pick};
use crate::output::{fmt_f, header, write_out};
use crate::{CliError, CliResult};

const IDENTITY_TOL: f64 = 1e-12;
const REDUCTION_TOL: f64 = 1e-10;
const SHIFT_TOL: f64 = 5e-3;
const COLLINEARITY_TOL: f64 = 1e-2;
const RATIO_BAND: (f64, f64) = (3.5, 4.5);

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// negative control: shift every solved B1 by this before re-checking
    #[arg(long = "perturb-b1")]
    pub perturb_b1: Option<f64>,
}

struct Check {
    name: &'static str,
    detail: Vec<(&'static str, String)>,
    pass: bool,
}

impl Check {
    fn line(&self) -> String {
        let mut s = format!("check {}:", self.name);
        for (k, v) in &self.detail {
            s.push(' ');
            s.push_str(k);
            s.push('=');
            s.push_str(v);
        }
        s.push_str(if self.pass { " result=pass" } else { " result=fail" });
        s.push('\n');
        s
    }

    fn failed(name: &'static str, err: impl std::fmt::Display) -> Check {
        Check {
            name,
            detail: vec![("error", format!("\"{err}\""))],
            pass: false,
        }
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn family_pair(a: f64, mu: f64) -> (impl Fn(f64) -> C64, impl Fn(f64) -> C64) {
    let left = move |x: f64| {
        let s = (mu * x).cosh().recip();
        let t = (mu * x).tanh();
        c(-a * a * s * s, -a * mu * s * t)
    };
    let right = move |x: f64| {
        let s = (mu * x).cosh().recip();
        let t = (mu * x).tanh();
        c(-a * a * s * s, a * mu * s * t)
    };
    (left, right)
}

fn factorization_check(a: f64, mu: f64) -> Check {
    let run = || -> Result<Check, ptscarf::Error> {
        let model = ScarfModel::new(a, mu)?;
        let spec = model.superpotential_spec();
        let grid = Grid::new(8.0, 1001)?;
        let mut worst1 = 0.0f64;
        let mut worst2 = 0.0f64;
        for &x in &grid.points() {
            let closed = scarf2_potentials(&model, x);
            let built = partner_potentials(&spec, x)?;
            worst1 = worst1.max((closed.0 - built.0).norm());
            worst2 = worst2.max((closed.1 - built.1).norm());
        }
        Ok(Check {
            name: "factorization",
            detail: vec![
                ("points", "1001".into()),
                ("residual_v1", fmt_f(worst1)),
                ("residual_v2", fmt_f(worst2)),
                ("threshold", fmt_f(IDENTITY_TOL)),
            ],
            pass: worst1 <= IDENTITY_TOL && worst2 <= IDENTITY_TOL,
        })
    };
    run().unwrap_or_else(|e| Check::failed("factorization", e))
}

fn pt_symmetry_check(a: f64, mu: f64) -> Check {
    let run = || -> Result<Check, ptscarf::Error> {
        let model = ScarfModel::new(a, mu)?;
        let grid = Grid::new(8.0, 1001)?;
        let xs = grid.points();
        let r1 = pt_symmetry_residual(|x| scarf2_potentials(&model, x).0, &xs)?;
        let r2 = pt_symmetry_residual(|x| scarf2_potentials(&model, x).1, &xs)?;
        Ok(Check {
            name: "pt-symmetry",
            detail: vec![
                ("points", "1001".into()),
                ("residual_v1", fmt_f(r1)),
                ("residual_v2", fmt_f(r2)),
                ("threshold", fmt_f(IDENTITY_TOL)),
            ],
            pass: r1 <= IDENTITY_TOL && r2 <= IDENTITY_TOL,
        })
    };
    run().unwrap_or_else(|e| Check::failed("pt-symmetry", e))
}

fn constraints_check(a: f64, mu: f64, perturb_b1: Option<f64>) -> Check {
    let run = || -> Result<Check, ptscarf::Error> {
        let sols = solve_bs_constraints(a, mu)?;
        let eps = perturb_b1.unwrap_or(0.0);
        let mut worst = 0.0f64;
        for sol in &sols {
            // residuals re-evaluated from the constraint equations, at the
            // (optionally shifted) root
            let b1 = sol.b1 + eps;
            let s = sol.s;
            let r34 = b1 * s * 2.0 - a * mu - s * mu;
            let r35 = b1 * b1 + s * s - b1 * mu - a * a;
            worst = worst.max(r34.norm()).max(r35.norm());
        }
        let mut detail: Vec<(&'static str, String)> = vec![
            ("count", sols.len().to_string()),
            ("max_residual", fmt_f(worst)),
            ("threshold", fmt_f(IDENTITY_TOL)),
        ];
        if let Some(eps) = perturb_b1 {
            detail.push(("perturb_b1", fmt_f(eps)));
        }
        Ok(Check {
            name: "constraints",
            detail,
            pass: sols.len() == 4 && worst <= IDENTITY_TOL,
        })
    };
    run().unwrap_or_else(|e| Check::failed("constraints", e))
}

fn ratio_detail(ratios: &[f64]) -> String {
    let parts: Vec<String> = ratios.iter().map(|r| fmt_f(*r)).collect();
    format!("[{}]", parts.join(";"))
}

fn intertwining_check(a: f64, mu: f64) -> Check {
    let run = || -> Result<Check, ptscarf::Error> {
        let (u_left, u_right) = family_pair(a, mu);
        let op = EtaOperator::eta1(c(0.0, 0.0), c(-a, 0.0), mu);
        let grids = [
            Grid::new(12.0, 501)?,
            Grid::new(12.0, 1001)?,
            Grid::new(12.0, 2001)?,
        ];
        let report = convergence_study("intertwining", &grids, |g| {
            intertwining_residual(&u_left, &u_right, &op, g)
        })?;
        let ok = !report.inconclusive
            && report
                .ratios
                .iter()
                .all(|r| (RATIO_BAND.0..=RATIO_BAND.1).contains(r));
        Ok(Check {
            name: "intertwining",
            detail: vec![
                ("grid_l", fmt_f(12.0)),
                ("grids", "[501;1001;2001]".into()),
                ("ratios", ratio_detail(&report.ratios)),
                ("band", format!("[{};{}]", fmt_f(RATIO_BAND.0), fmt_f(RATIO_BAND.1))),
            ],
            pass: ok,
        })
    };
    run().unwrap_or_else(|e| Check::failed("intertwining", e))
}

fn pseudo_hermiticity_check(a: f64, mu: f64) -> Check {
    let run = || -> Result<Check, ptscarf::Error> {
        let (_, u_right) = family_pair(a, mu);
        let op = EtaOperator::eta2(a, mu);
        let grids = [
            Grid::new(18.0, 501)?,
            Grid::new(18.0, 1001)?,
            Grid::new(18.0, 2001)?,
        ];
        let report = convergence_study("pseudo-hermiticity", &grids, |g| {
            pseudo_hermiticity_residual(&u_right, &op, g)
        })?;
        let ok = !report.inconclusive
            && report
                .ratios
                .iter()
                .all(|r| (RATIO_BAND.0..=RATIO_BAND.1).contains(r));
        Ok(Check {
            name: "pseudo-hermiticity",
            detail: vec![
                ("grid_l", fmt_f(18.0)),
                ("grids", "[501;1001;2001]".into()),
                ("ratios", ratio_detail(&report.ratios)),
                ("band", format!("[{};{}]", fmt_f(RATIO_BAND.0), fmt_f(RATIO_BAND.1))),
            ],
            pass: ok,
        })
    };
    run().unwrap_or_else(|e| Check::failed("pseudo-hermiticity", e))
}

fn spectral_shift_check_suite(a: f64, mu: f64) -> Check {
    let run = || -> Result<Check, ptscarf::Error> {
        let (u_left, u_right) = family_pair(a, mu);
        let op = EtaOperator::eta1(c(0.0, 0.0), c(-a, 0.0), mu);
        let grid = Grid::new(20.0, 3001)?;
        let report = spectral_shift_check(&u_left, &u_right, &op, &grid, SHIFT_TOL)?;
        let max_shift = report
            .matched
            .iter()
            .map(|(_, _, d)| *d)
            .fold(0.0f64, f64::max);
        let max_col = report.collinearity.iter().copied().fold(0.0f64, f64::max);
        let ok = report.shift_ok
            && !report.matched.is_empty()
            && max_shift <= SHIFT_TOL
            && max_col <= COLLINEARITY_TOL;
        Ok(Check {
            name: "spectral-shift",
            detail: vec![
                ("grid_l", fmt_f(20.0)),
                ("grid_n", "3001".into()),
                ("matched", report.matched.len().to_string()),
                (
                    "unmatched",
                    (report.unmatched_left.len() + report.unmatched_right.len()).to_string(),
                ),
                ("max_shift", fmt_f(max_shift)),
                ("max_collinearity", fmt_f(max_col)),
                ("tol", fmt_f(SHIFT_TOL)),
                ("collinearity_tol", fmt_f(COLLINEARITY_TOL)),
            ],
            pass: ok,
        })
    };
    run().unwrap_or_else(|e| Check::failed("spectral-shift", e))
}

fn pdfv_reduction_check() -> Check {
    let run = || -> Result<Check, ptscarf::Error> {
        let triples = [(1.0, 1.0, 1.0), (1.0, 2.0, 1.0), (2.0, 1.0, 0.5)];
        let mut worst_transcription = 0.0f64;
        let mut worst_gap = 0.0f64;
        for kind in [PdfvKind::Real, PdfvKind::Complex] {
            for &(alpha, beta, mu) in &triples {
                let ans =
                    PdfvAnsatz::with_constraint_set(kind, alpha, beta, mu, ConstraintSet::First, 0.0)?;
                for i in 0..101 {
                    let x = -5.0 + 0.1 * i as f64;
                    worst_transcription = worst_transcription.max(transcription_residual(&ans, x));
                    let full = eff_potential_full(&ans, Which::Two, x)?;
                    let simp = eff_potential_simplified(&ans, Which::Two, x)?;
                    worst_gap = worst_gap.max((full - simp).norm());
                }
            }
        }
        Ok(Check {
            name: "pdfv-reduction",
            detail: vec![
                ("kinds", "2".into()),
                ("triples", "3".into()),
                ("points", "101".into()),
                ("max_transcription", fmt_f(worst_transcription)),
                ("max_simplified_gap", fmt_f(worst_gap)),
                ("threshold", fmt_f(REDUCTION_TOL)),
            ],
            pass: worst_transcription <= REDUCTION_TOL && worst_gap <= REDUCTION_TOL,
        })
    };
    run().unwrap_or_else(|e| Check::failed("pdfv-reduction", e))
}

pub fn run(args: VerifyArgs) -> CliResult<()> {
    let file = load(args.common.config.as_deref())?;
    let a = pick(args.common.a, file.a, 1.0);
    let mu = pick(args.common.mu, file.mu, 1.0);
    let perturb_b1 = args.perturb_b1.or(file.perturb_b1);
    let format = pick(args.common.format, file.format, "report".to_string());
    require_format(&format, "report")?;
    let out = args.common.out.or(file.out);

    let checks = [
        factorization_check(a, mu),
        pt_symmetry_check(a, mu),
        constraints_check(a, mu, perturb_b1),
        intertwining_check(a, mu),
        pseudo_hermiticity_check(a, mu),
        spectral_shift_check_suite(a, mu),
        pdfv_reduction_check(),
    ];

    let passed = checks.iter().filter(|c| c.pass).count();
    let mut head: Vec<(&str, String)> = vec![
        ("a", fmt_f(a)),
        ("mu", fmt_f(mu)),
        ("format", format.clone()),
        ("checks", checks.len().to_string()),
    ];
    if let Some(eps) = perturb_b1 {
        head.push(("perturb_b1", fmt_f(eps)));
    }

    let mut content = header("verify", &head);
    for check in &checks {
        content.push_str(&check.line());
    }
    content.push_str(&format!(
        "summary: pass={} fail={} total={}\n",
        passed,
        checks.len() - passed,
        checks.len()
    ));

    write_out(out.as_deref(), &content)?;
    if passed == checks.len() {
        Ok(())
    } else {
        Err(CliError::ChecksFailed)
    }
}
