use clap::Args;

use ptscarf::pdfv::{
    eff_potential_definitional, eff_potential_full, eff_potential_simplified, ConstraintSet,
    PdfvAnsatz, PdfvKind, Which,
};
use ptscarf::Grid;

use crate::commands::{require_format, CommonArgs};
use crate::config::{load, pick};
use crate::output::{fmt_f, header, write_out};
use crate::{CliError, CliResult};

#[derive(Debug, Args)]
pub struct PdfvArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// velocity kind: real or complex
    #[arg(long)]
    pub kind: Option<String>,
    /// velocity slope
    #[arg(long)]
    pub alpha: Option<f64>,
    /// velocity offset
    #[arg(long)]
    pub beta: Option<f64>,
    /// effective-potential index (1 or 2)
    #[arg(long)]
    pub which: Option<u8>,
    /// solvability constraint set (1 or 2; simplified column needs 1)
    #[arg(long = "constraint-set")]
    pub constraint_set: Option<u8>,
}

pub fn run(args: PdfvArgs) -> CliResult<()> {
    let file = load(args.common.config.as_deref())?;
    let mu = pick(args.common.mu, file.mu, 1.0);
    let k = pick(args.common.k, file.k, 0.0);
    let grid_l = pick(args.common.grid_l, file.grid_l, 12.0);
    let grid_n = pick(args.common.grid_n, file.grid_n, 2001);
    let alpha = pick(args.alpha, file.alpha, 1.0);
    let beta = pick(args.beta, file.beta, 1.0);
    let format = pick(args.common.format, file.format, "csv".to_string());
    require_format(&format, "csv")?;
    let out = args.common.out.or(file.out);

    let kind = match pick(args.kind, file.kind, "real".to_string()).as_str() {
        "real" => PdfvKind::Real,
        "complex" => PdfvKind::Complex,
        other => {
            return Err(CliError::Usage(format!(
                "kind must be real or complex, got '{other}'"
            )))
        }
    };
    let which = match pick(args.which, file.which, 2) {
        1 => Which::One,
        2 => Which::Two,
        other => return Err(CliError::Usage(format!("which must be 1 or 2, got {other}"))),
    };
    let set = match pick(args.constraint_set, file.constraint_set, 1) {
        1 => ConstraintSet::First,
        2 => ConstraintSet::Second,
        other => {
            return Err(CliError::Usage(format!(
                "constraint-set must be 1 or 2, got {other}"
            )))
        }
    };

    let ans = PdfvAnsatz::with_constraint_set(kind, alpha, beta, mu, set, k)?;
    let grid = Grid::new(grid_l, grid_n)?;
    let xs = grid.points();

    let simplified_available = set == ConstraintSet::First;
    let route = if which == Which::Two {
        "expansion-checked"
    } else {
        "definitional"
    };

    let head: Vec<(&str, String)> = vec![
        ("kind", format!("{kind:?}").to_lowercase()),
        ("alpha", fmt_f(alpha)),
        ("beta", fmt_f(beta)),
        ("mu", fmt_f(mu)),
        ("k", fmt_f(k)),
        ("which", which.as_u8().to_string()),
        ("constraint_set", set.label().to_string()),
        ("route", route.to_string()),
        (
            "simplified",
            if simplified_available {
                "included".to_string()
            } else {
                "unavailable".to_string()
            },
        ),
        ("grid_l", fmt_f(grid_l)),
        ("grid_n", grid_n.to_string()),
        ("format", format.clone()),
    ];

    let mut body = String::new();
    if simplified_available {
        body.push_str("x,re_full,im_full,re_simplified,im_simplified\n");
    } else {
        body.push_str("x,re_full,im_full\n");
    }
    for &x in &xs {
        let full = if which == Which::Two {
            eff_potential_full(&ans, which, x)?
        } else {
            eff_potential_definitional(&ans, which, x)
        };
        body.push_str(&fmt_f(x));
        body.push(',');
        body.push_str(&fmt_f(full.re));
        body.push(',');
        body.push_str(&fmt_f(full.im));
        if simplified_available {
            let simp = eff_potential_simplified(&ans, which, x)?;
            body.push(',');
            body.push_str(&fmt_f(simp.re));
            body.push(',');
            body.push_str(&fmt_f(simp.im));
        }
        body.push('\n');
    }

    let content = format!("{}{}", header("pdfv", &head), body);
    write_out(out.as_deref(), &content)
}
