use clap::Args;
use num_complex::Complex64 as C64;

use ptscarf::nu::{dirac_energy, nu_energy, BranchStatus, LevelReport, NUProblem};
use ptscarf::oracle::{bound_spectrum, match_spectra};
use ptscarf::{Branch, Grid};

use crate::commands::{require_format, CommonArgs};
use crate::config::{load, pick};
use crate::output::{fmt_f, header, write_out};
use crate::{CliError, CliResult};

/// Matching tolerance for --verify-inline, absolute in the complex plane.
const INLINE_TOL: f64 = 2e-3;

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// quantization branch: k1 or k2
    #[arg(long)]
    pub branch: Option<String>,
    /// highest level index to emit
    #[arg(long)]
    pub nmax: Option<i64>,
    /// which partner carries the couplings: v1 or v2
    #[arg(long)]
    pub select: Option<String>,
    /// treat the Fermi velocity as imaginary when mapping to first-order energies
    #[arg(long = "imaginary-vf")]
    pub imaginary_vf: bool,
    /// also emit the threshold level when one sits exactly on the border
    #[arg(long = "include-marginal")]
    pub include_marginal: bool,
    /// cross-check each level against the finite-difference eigensolver
    #[arg(long = "verify-inline")]
    pub verify_inline: bool,
}

pub fn run(args: SpectrumArgs) -> CliResult<()> {
    let file = load(args.common.config.as_deref())?;
    let a = pick(args.common.a, file.a, 1.0);
    let mu = pick(args.common.mu, file.mu, 1.0);
    let branch_s = pick(args.branch, file.branch, "k2".to_string());
    let nmax = pick(args.nmax, file.nmax, 8);
    let select = pick(args.select, file.select, "v1".to_string());
    let grid_l = pick(args.common.grid_l, file.grid_l, 15.0);
    let grid_n = pick(args.common.grid_n, file.grid_n, 3001);
    let imaginary_vf = args.imaginary_vf || file.imaginary_vf.unwrap_or(false);
    let include_marginal = args.include_marginal || file.include_marginal.unwrap_or(false);
    let verify_inline = args.verify_inline || file.verify_inline.unwrap_or(false);
    let format = pick(args.common.format, file.format, "csv".to_string());
    require_format(&format, "csv")?;
    let out = args.common.out.or(file.out);

    if nmax < 0 {
        return Err(CliError::Usage(format!("nmax must be >= 0, got {nmax}")));
    }
    let nmax = nmax as usize;
    let branch = match branch_s.as_str() {
        "k1" => Branch::K1,
        "k2" => Branch::K2,
        other => return Err(CliError::Usage(format!("branch must be k1 or k2, got '{other}'"))),
    };
    let (cap_a1, cap_a2) = match select.as_str() {
        "v1" => (C64::new(-a * a, 0.0), C64::new(0.0, -a * mu)),
        "v2" => (C64::new(-a * a, 0.0), C64::new(0.0, a * mu)),
        other => return Err(CliError::Usage(format!("select must be v1 or v2, got '{other}'"))),
    };

    let prob = NUProblem::from_couplings(cap_a1, cap_a2, mu)?;
    let report: LevelReport = ptscarf::nu::level_report(&prob, branch);
    let status = match report.status {
        BranchStatus::Accepted => "accepted",
        BranchStatus::Marginal => "marginal",
        BranchStatus::Rejected => "rejected",
    };

    // level indices to emit: the normalizable tower capped by nmax, plus the
    // threshold level on request
    let mut levels: Vec<(usize, bool)> = Vec::new();
    if report.status != BranchStatus::Rejected {
        for n in 0..report.normalizable.min(nmax + 1) {
            levels.push((n, false));
        }
        if include_marginal {
            if let Some(m) = report.marginal {
                if m <= nmax {
                    levels.push((m, true));
                }
            }
        }
    }

    let mut energies: Vec<C64> = Vec::with_capacity(levels.len());
    for &(n, _) in &levels {
        energies.push(nu_energy(&prob, branch, n)?);
    }

    let mut head: Vec<(&str, String)> = vec![
        ("a", fmt_f(a)),
        ("mu", fmt_f(mu)),
        ("branch", branch_s.clone()),
        ("select", select.clone()),
        ("nmax", nmax.to_string()),
        ("v_f", fmt_f(1.0)),
        ("imaginary_vf", imaginary_vf.to_string()),
        ("include_marginal", include_marginal.to_string()),
        ("verify_inline", verify_inline.to_string()),
        ("status", status.to_string()),
        ("normalizable", report.normalizable.to_string()),
        (
            "marginal_level",
            report
                .marginal
                .map(|m| m.to_string())
                .unwrap_or_else(|| "none".to_string()),
        ),
        ("format", format.clone()),
    ];

    // oracle pass: match only the normalizable levels; threshold states decay
    // too slowly for a boxed eigensolver
    let mut inline: Vec<Option<(C64, f64)>> = vec![None; levels.len()];
    if verify_inline && !levels.is_empty() {
        head.push(("grid_l", fmt_f(grid_l)));
        head.push(("grid_n", grid_n.to_string()));
        head.push(("tol", fmt_f(INLINE_TOL)));
        let grid = Grid::new(grid_l, grid_n)?;
        let numeric = bound_spectrum(|x| prob.potential(x), &grid)?;
        let closed: Vec<C64> = levels
            .iter()
            .zip(&energies)
            .filter(|((_, marginal), _)| !marginal)
            .map(|(_, &e)| e)
            .collect();
        let matched = match_spectra(&closed, &numeric, INLINE_TOL);
        let mut it = matched.pairs.iter();
        for (slot, (_, marginal)) in inline.iter_mut().zip(&levels) {
            if *marginal {
                continue;
            }
            let pair = it.next().expect("one pair per closed level");
            if let (Some(num), Some(err)) = (pair.numeric, pair.abs_err) {
                *slot = Some((num, err));
            }
        }
    }

    let mut body = String::new();
    if verify_inline {
        body.push_str("branch,n,re_energy,im_energy,re_dirac,im_dirac,normalizable,marginal,re_numeric,im_numeric,abs_err\n");
    } else {
        body.push_str("branch,n,re_energy,im_energy,re_dirac,im_dirac,normalizable,marginal\n");
    }
    for (i, &(n, marginal)) in levels.iter().enumerate() {
        let e = energies[i];
        let (plus, _) = dirac_energy(e, 1.0, imaginary_vf);
        body.push_str(&format!(
            "{},{},{},{},{},{},{},{}",
            branch_s,
            n,
            fmt_f(e.re),
            fmt_f(e.im),
            fmt_f(plus.re),
            fmt_f(plus.im),
            u8::from(!marginal),
            u8::from(marginal),
        ));
        if verify_inline {
            match inline[i] {
                Some((num, err)) => {
                    body.push_str(&format!(",{},{},{}", fmt_f(num.re), fmt_f(num.im), fmt_f(err)))
                }
                None => body.push_str(",,,"),
            }
        }
        body.push('\n');
    }

    let content = format!("{}{}", header("spectrum", &head), body);
    write_out(out.as_deref(), &content)
}
