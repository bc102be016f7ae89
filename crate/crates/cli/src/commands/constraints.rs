use clap::Args;

use ptscarf::intertwine::{solve_bs_constraints, u_family_members};

use crate::commands::{require_format, CommonArgs};
use crate::config::{load, pick};
use crate::output::{fmt_f, header, write_out};
use crate::CliResult;

#[derive(Debug, Args)]
pub struct ConstraintsArgs {
    #[command(flatten)]
    pub common: CommonArgs,
}

pub fn run(args: ConstraintsArgs) -> CliResult<()> {
    let file = load(args.common.config.as_deref())?;
    let a = pick(args.common.a, file.a, 1.0);
    let mu = pick(args.common.mu, file.mu, 1.0);
    let format = pick(args.common.format, file.format, "csv".to_string());
    require_format(&format, "csv")?;
    let out = args.common.out.or(file.out);

    let sols = solve_bs_constraints(a, mu)?;
    let members = u_family_members(a, mu)?;

    let head: Vec<(&str, String)> = vec![
        ("a", fmt_f(a)),
        ("mu", fmt_f(mu)),
        ("format", format.clone()),
        ("rows", sols.len().to_string()),
    ];

    let mut body = String::from(
        "member,b1_re,b1_im,s_re,s_im,residual34,residual35,a1_re,a1_im,a2_re,a2_im,degenerate\n",
    );
    for (sol, member) in sols.iter().zip(&members) {
        body.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            member.provenance,
            fmt_f(sol.b1.re),
            fmt_f(sol.b1.im),
            fmt_f(sol.s.re),
            fmt_f(sol.s.im),
            fmt_f(sol.residual34.norm()),
            fmt_f(sol.residual35.norm()),
            fmt_f(member.a1_coeff.re),
            fmt_f(member.a1_coeff.im),
            fmt_f(member.a2_coeff.re),
            fmt_f(member.a2_coeff.im),
            u8::from(sol.degenerate),
        ));
    }

    let content = format!("{}{}", header("constraints", &head), body);
    write_out(out.as_deref(), &content)
}
