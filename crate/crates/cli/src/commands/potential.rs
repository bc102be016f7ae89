use clap::Args;
use num_complex::Complex64 as C64;

use ptscarf::intertwine::u_family_members;
use ptscarf::model::{scarf2_potentials, ScarfModel};
use ptscarf::pdfv::{
    eff_potential_definitional, eff_potential_full, ConstraintSet, PdfvAnsatz, PdfvKind, Which,
};
use ptscarf::Grid;

use crate::commands::{require_format, CommonArgs};
use crate::config::{load, pick};
use crate::output::{fmt_f, header, write_out};
use crate::{CliError, CliResult};

#[derive(Debug, Args)]
pub struct PotentialArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// which profile: v1, v2, u, veff
    #[arg(long)]
    pub select: Option<String>,
    /// family member for select=u: b1-zero, b1-mu, b1-minus, b1-plus
    #[arg(long)]
    pub member: Option<String>,
    /// velocity kind for select=veff: real or complex
    #[arg(long)]
    pub kind: Option<String>,
    /// velocity slope for select=veff
    #[arg(long)]
    pub alpha: Option<f64>,
    /// velocity offset for select=veff
    #[arg(long)]
    pub beta: Option<f64>,
    /// effective-potential index for select=veff (1 or 2)
    #[arg(long)]
    pub which: Option<u8>,
    /// solvability constraint set for select=veff (1 or 2)
    #[arg(long = "constraint-set")]
    pub constraint_set: Option<u8>,
}

pub fn run(args: PotentialArgs) -> CliResult<()> {
    let file = load(args.common.config.as_deref())?;
    let a = pick(args.common.a, file.a, 1.0);
    let mu = pick(args.common.mu, file.mu, 1.0);
    let k = pick(args.common.k, file.k, 0.0);
    let grid_l = pick(args.common.grid_l, file.grid_l, 12.0);
    let grid_n = pick(args.common.grid_n, file.grid_n, 2001);
    let select = pick(args.select, file.select, "v1".to_string());
    let format = pick(args.common.format, file.format, "csv".to_string());
    require_format(&format, "csv")?;
    let out = args.common.out.or(file.out);

    let grid = Grid::new(grid_l, grid_n)?;
    let xs = grid.points();

    let mut head: Vec<(&str, String)> = vec![
        ("a", fmt_f(a)),
        ("mu", fmt_f(mu)),
        ("grid_l", fmt_f(grid_l)),
        ("grid_n", grid_n.to_string()),
        ("select", select.clone()),
        ("format", format.clone()),
        ("rows", xs.len().to_string()),
    ];

    let values: Vec<C64> = match select.as_str() {
        "v1" | "v2" => {
            let model = ScarfModel::new(a, mu)?;
            head.push(("k", fmt_f(k)));
            head.push(("k_absorbed", model.k_absorbed().to_string()));
            xs.iter()
                .map(|&x| {
                    let (v1, v2) = scarf2_potentials(&model, x);
                    if select == "v1" {
                        v1
                    } else {
                        v2
                    }
                })
                .collect()
        }
        "u" => {
            let member = pick(args.member, file.member, "b1-zero".to_string());
            let members = u_family_members(a, mu)?;
            let m = members
                .iter()
                .find(|m| m.provenance == member)
                .ok_or_else(|| {
                    CliError::Usage(format!(
                        "unknown member '{member}'; expected one of {:?}",
                        members.iter().map(|m| m.provenance).collect::<Vec<_>>()
                    ))
                })?;
            head.push(("member", member.clone()));
            head.push(("k", fmt_f(k)));
            xs.iter()
                .map(|&x| {
                    let sech = (mu * x).cosh().recip();
                    let tanh = (mu * x).tanh();
                    m.a1_coeff * sech * sech + m.a2_coeff * sech * tanh
                })
                .collect()
        }
        "veff" => {
            let kind = match pick(args.kind, file.kind, "real".to_string()).as_str() {
                "real" => PdfvKind::Real,
                "complex" => PdfvKind::Complex,
                other => {
                    return Err(CliError::Usage(format!(
                        "kind must be real or complex, got '{other}'"
                    )))
                }
            };
            let alpha = pick(args.alpha, file.alpha, 1.0);
            let beta = pick(args.beta, file.beta, 1.0);
            let which = match pick(args.which, file.which, 2) {
                1 => Which::One,
                2 => Which::Two,
                other => {
                    return Err(CliError::Usage(format!("which must be 1 or 2, got {other}")))
                }
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
            head.push(("kind", format!("{:?}", ans.kind).to_lowercase()));
            head.push(("alpha", fmt_f(alpha)));
            head.push(("beta", fmt_f(beta)));
            head.push(("which", which.as_u8().to_string()));
            head.push(("constraint_set", set.label().to_string()));
            head.push(("k", fmt_f(k)));
            let route = if which == Which::Two {
                "expansion-checked"
            } else {
                "definitional"
            };
            head.push(("route", route.to_string()));
            let mut vals = Vec::with_capacity(xs.len());
            for &x in &xs {
                let v = if which == Which::Two {
                    eff_potential_full(&ans, which, x)?
                } else {
                    eff_potential_definitional(&ans, which, x)
                };
                vals.push(v);
            }
            vals
        }
        other => {
            return Err(CliError::Usage(format!(
                "select must be one of v1, v2, u, veff; got '{other}'"
            )))
        }
    };

    let mut body = String::from("x,re_v,im_v\n");
    for (x, v) in xs.iter().zip(&values) {
        body.push_str(&fmt_f(*x));
        body.push(',');
        body.push_str(&fmt_f(v.re));
        body.push(',');
        body.push_str(&fmt_f(v.im));
        body.push('\n');
    }

    let content = format!("{}{}", header("potential", &head), body);
    write_out(out.as_deref(), &content)
}
