use std::path::PathBuf;

use clap::{Args, ValueEnum};
use padic_cf::families::{
    gen_ooto, gen_qper, gen_sturmian, gen_thue_morse, palindromic_prefix_lengths, symmetry_mismatches, FamilySpec,
    RealQuadratic, SturmianSlope,
};
use padic_cf::PartialQuotient;
use serde::Serialize;

use super::{join_human, parse_quotient, pass_fail, read_json};
use crate::error::{CliError, CliResult};
use crate::report::Report;
use crate::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    /// Growing runs of `1/p`.
    Qper,
    /// Growing repetitions of blocks.
    Ooto,
    Sturmian,
    ThueMorse,
}

#[derive(Args, Debug)]
pub struct FamilyArgs {
    #[arg(value_enum)]
    kind: FamilyKind,
    #[arg(long)]
    p: u64,
    /// Number of partial quotients `b_1 … b_N` to produce.
    #[arg(long)]
    length: usize,
    /// Run layout and filler pool (qper and ooto).
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Include the full certificate in the output.
    #[arg(long)]
    emit_certificate: bool,
    /// Sturmian slope in (0, 1), e.g. `(3 - sqrt(5))/2`.
    #[arg(long, allow_hyphen_values = true)]
    slope: Option<String>,
    /// Letter for 0 digits (default `1/p`).
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Letter for 1 digits (default `-1/p`).
    #[arg(long, allow_hyphen_values = true)]
    b: Option<String>,
}

/// Symmetry checks for a two-letter word.
#[derive(Serialize)]
struct WordCertificate {
    palindromic_prefixes: Vec<usize>,
    /// Lengths where matrix symmetry and palindromicity disagree.
    symmetry_mismatches: Vec<usize>,
}

fn letters(args: &FamilyArgs) -> CliResult<(PartialQuotient, PartialQuotient)> {
    let p = args.p;
    let a = match &args.a {
        Some(s) => parse_quotient(s, p)?,
        None => PartialQuotient::inv_p_pow(1),
    };
    let b = match &args.b {
        Some(s) => parse_quotient(s, p)?,
        None => parse_quotient(&format!("-1/{p}"), p)?,
    };
    for (name, q) in [("a", &a), ("b", &b)] {
        if q.exponent() == 0 || !q.is_browkin_image(p) {
            return Err(CliError::Usage(format!(
                "--{name} = {} is not a Browkin partial quotient of negative valuation",
                q.human(p)
            )));
        }
    }
    Ok((a, b))
}

pub fn family(args: &FamilyArgs, cfg: &RunConfig) -> CliResult<Report> {
    let p = args.p;
    padic_cf::exact_arith::modular::check_prime(p)?;
    let mut r = Report::new("family");
    r.field("family", &args.kind.to_possible_value().expect("named").get_name());
    r.field("p", &p);
    r.header(&["i", "u", "a", "quotient"]);
    let mut notes = Vec::new();
    let quotients = match args.kind {
        FamilyKind::Qper | FamilyKind::Ooto => {
            let path = args
                .spec
                .as_ref()
                .ok_or_else(|| CliError::Usage("--spec is required for qper and ooto".into()))?;
            let spec: FamilySpec = read_json(path)?;
            if spec.p != p {
                return Err(CliError::Usage(format!("--p {p} does not match p = {} in the spec", spec.p)));
            }
            let out = match args.kind {
                FamilyKind::Qper => gen_qper(&spec, args.length, cfg.seed)?,
                _ => gen_ooto(&spec, args.length, cfg.seed)?,
            };
            let cert = &out.certificate;
            for e in &cert.entries {
                notes.push(format!("{} {}: {}", pass_fail(e.holds), e.hypothesis, e.detail));
                if !e.holds {
                    r.violation(format!("{}: {}", e.hypothesis, e.detail));
                }
            }
            if args.emit_certificate {
                r.field("certificate", cert);
            }
            out.quotients
        }
        FamilyKind::Sturmian => {
            let slope = args
                .slope
                .as_ref()
                .ok_or_else(|| CliError::Usage("--slope is required for sturmian".into()))?;
            let (a, b) = letters(args)?;
            let slope = SturmianSlope::new(RealQuadratic::parse(slope)?, a, b)?;
            r.field("slope", &slope);
            gen_sturmian(&slope, args.length)
        }
        FamilyKind::ThueMorse => {
            let (a, b) = letters(args)?;
            gen_thue_morse(&a, &b, args.length)?
        }
    };
    if matches!(args.kind, FamilyKind::Sturmian | FamilyKind::ThueMorse) {
        let cert = WordCertificate {
            palindromic_prefixes: palindromic_prefix_lengths(&quotients),
            symmetry_mismatches: symmetry_mismatches(&quotients, p),
        };
        notes.push(format!("palindromic prefixes at n = {:?}", cert.palindromic_prefixes));
        notes.push(format!(
            "M_n symmetric exactly at palindromic n: {}",
            pass_fail(cert.symmetry_mismatches.is_empty())
        ));
        for n in &cert.symmetry_mismatches {
            r.violation(format!("matrix symmetry and palindromicity disagree at n = {n}"));
        }
        if args.emit_certificate {
            r.field("certificate", &cert);
        }
    }
    r.line(format!("[0, {}]", join_human(&quotients, p)));
    for l in notes {
        r.line(l);
    }
    for (i, b) in quotients.iter().enumerate() {
        r.row(vec![(i + 1).to_string(), b.unit().to_string(), b.exponent().to_string(), b.human(p)]);
    }
    r.field("quotients", &quotients);
    Ok(r)
}
