//! Command-line front end.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::applications::{cap_analysis, cap_single, ginzburg_hundley_check, BorelInductionDatum, GhScenario, Mu};
use crate::characters::{inducing_character, FiniteOrderClass, Mode as CharMode};
use crate::gk::{gk_general, gk_sline};
use crate::golden::{self, Check, Suite, Table, TableId};
use crate::lfun::order_at;
use crate::poles::{pole_table, verdict, Attainment, Mode};
use crate::root_datum::{EtaleForm, FormKind};
use crate::scalar::{fmt_q, parse_q};
use crate::weyl::{act, enumerate_coset_reps, WeylWord};
use crate::{Error, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Markdown,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "eisenpole", version, about = "Pole analysis of degenerate Eisenstein series on quasi-split Spin(8)")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Directory of reference data (default: ./golden, else the one shipped with the crate).
    #[arg(long, global = true)]
    pub golden: Option<PathBuf>,
    /// Use the conjectural pole orders instead of the unconditional ones.
    #[arg(long, global = true)]
    pub assume_conjecture: bool,
    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Minimal coset representatives of the Levi's Weyl group, ShortLex order.
    Cosets {
        #[arg(long)]
        form: String,
    },
    /// w⁻¹·χ_s for one representative.
    CharAction {
        #[arg(long)]
        form: String,
        /// Comma-separated reduced word, e.g. "2,1,3".
        #[arg(long)]
        word: String,
        #[arg(long, default_value = "chi")]
        chi: String,
        /// Also specialize at this point.
        #[arg(long)]
        at: Option<String>,
    },
    /// Gindikin-Karpelevich factor J(w, χ_s) or J(w, χ, λ).
    Gk {
        #[arg(long)]
        form: String,
        #[arg(long)]
        word: String,
        #[arg(long, default_value = "chi")]
        chi: String,
        /// Use independent coordinates instead of the line.
        #[arg(long)]
        general: bool,
        /// Report the pole order at this point.
        #[arg(long)]
        at: Option<String>,
    },
    /// Pole order at one point, or the whole table when the point is omitted.
    Poles {
        #[arg(long)]
        form: Option<String>,
        #[arg(long)]
        chi: Option<String>,
        #[arg(long)]
        s0: Option<String>,
        /// trivial, unconditional or conjectural; overrides --assume-conjecture.
        #[arg(long)]
        mode: Option<String>,
    },
    /// Regenerate the reference tables.
    Tables {
        /// 4..12, "all", or family/kind such as "quad/exponents".
        #[arg(long, default_value = "all")]
        which: String,
        /// Compare structurally with the transcriptions in this directory.
        #[arg(long)]
        diff: Option<PathBuf>,
    },
    /// Run assertion suites against the reference data.
    Verify {
        /// cosets, tables, poles, cancellations, exponents, cap, gh or all.
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Borel CAP case analysis; give all four of --z1 --z2 --eta1 --eta2 for one branch.
    Cap {
        #[arg(long)]
        form: String,
        #[arg(long)]
        z1: Option<String>,
        #[arg(long)]
        z2: Option<String>,
        #[arg(long)]
        eta1: Option<String>,
        #[arg(long)]
        eta2: Option<String>,
    },
    /// The triple-pole contradiction for a given number of removed places.
    Gh {
        #[arg(long, default_value_t = 1)]
        s_size: u32,
    },
}

/// Process exit status plus what to print.
struct Outcome {
    code: i32,
    out: String,
}

impl Outcome {
    fn ok(out: String) -> Self {
        Outcome { code: 0, out }
    }
}

/// Errors in what the user typed exit with 2, anything else with 1.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invalid(_) | Error::NotReduced(_) | Error::UndefinedClass(_) | Error::NoPole => 2,
        _ => 1,
    }
}

pub fn run() -> i32 {
    run_with(std::env::args_os())
}

pub fn run_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(o) => {
            print!("{}", o.out);
            o.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn form_of(s: &str) -> crate::Result<EtaleForm> {
    Ok(EtaleForm::new(FormKind::parse(s)?))
}

fn point(s: &str) -> crate::Result<Q> {
    parse_q(s).ok_or_else(|| Error::Invalid(format!("bad point {s:?}")))
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn word_text(w: &WeylWord) -> String {
    w.letters.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
}

fn execute(cli: &Cli) -> crate::Result<Outcome> {
    let mode = if cli.assume_conjecture { Mode::Conjectural } else { Mode::Unconditional };
    let dir = cli.golden.clone().unwrap_or_else(golden::default_dir);
    match &cli.cmd {
        Cmd::Cosets { form } => cosets(cli.format, &form_of(form)?),
        Cmd::CharAction { form, word, chi, at } => {
            let form = form_of(form)?;
            let w = WeylWord::parse(&form, word)?;
            let chi = FiniteOrderClass::parse(form.kind, chi)?;
            let ch = act(&form, &w, &inducing_character(&form, &chi, CharMode::Line)?)?;
            let at = at.as_deref().map(point).transpose()?;
            Ok(Outcome::ok(match cli.format {
                Format::Json => {
                    let mut v = json!({
                        "form": form.kind.name(),
                        "word": w.letters,
                        "labels": form.labels(),
                        "chi_pow": ch.chi_pow,
                        "exps": ch.exps.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                        "rendered": ch.render(),
                    });
                    if let Some(s0) = at {
                        let sp = ch.specialize(s0);
                        v["at"] = json!({ "s0": fmt_q(&s0), "character": sp.to_string(),
                            "exponent": sp.real_exponent().coeffs.iter().map(fmt_q).collect::<Vec<_>>() });
                    }
                    pretty(&v)
                }
                _ => {
                    let mut s = format!("{}\n", ch.render());
                    if let Some(s0) = at {
                        let sp = ch.specialize(s0);
                        writeln!(s, "at s = {}: {}", fmt_q(&s0), sp).unwrap();
                        writeln!(s, "real exponent: {}", sp.real_exponent()).unwrap();
                    }
                    s
                }
            }))
        }
        Cmd::Gk { form, word, chi, general, at } => {
            let form = form_of(form)?;
            let w = WeylWord::parse(&form, word)?;
            let chi = FiniteOrderClass::parse(form.kind, chi)?;
            let e = if *general { gk_general(&form, &w, &chi)? } else { gk_sline(&form, &w, &chi)? };
            let order = match at {
                Some(_) if *general => return Err(Error::Invalid("--at needs the line, drop --general".into())),
                Some(s) => Some((point(s)?, order_at(&e, point(s)?))),
                None => None,
            };
            Ok(Outcome::ok(match cli.format {
                Format::Json => {
                    let mut v = json!({ "form": form.kind.name(), "word": w.letters, "factors": e.to_json(),
                        "rendered": e.to_string() });
                    if let Some((s0, n)) = order {
                        v["order"] = json!({ "s0": fmt_q(&s0), "order": n });
                    }
                    pretty(&v)
                }
                _ => {
                    let mut s = format!("{e}\n");
                    if let Some((s0, n)) = order {
                        writeln!(s, "pole order at s = {}: {n}", fmt_q(&s0)).unwrap();
                    }
                    s
                }
            }))
        }
        Cmd::Poles { form, chi, s0, mode: m } => {
            let mode = match m {
                Some(m) => Mode::parse(m)?,
                None => mode,
            };
            match (form, chi, s0) {
                (Some(f), Some(c), Some(s)) => {
                    let form = form_of(f)?;
                    let chi = FiniteOrderClass::parse(form.kind, c)?;
                    poles_point(cli.format, &form, &chi, point(s)?, mode)
                }
                (None, None, None) => poles_table(cli.format, mode),
                _ => Err(Error::Invalid("give all of --form, --chi and --s0, or none".into())),
            }
        }
        Cmd::Tables { which, diff } => {
            let ids = if which == "all" { TableId::numbered() } else { vec![TableId::parse(which)?] };
            match diff {
                Some(d) => tables_diff(cli.format, &ids, d),
                None => tables(cli.format, &ids),
            }
        }
        Cmd::Verify { suite } => {
            let mut checks = Vec::new();
            for s in Suite::parse(suite)? {
                checks.extend(s.run(&dir));
            }
            Ok(report(cli.format, &checks))
        }
        Cmd::Cap { form, z1, z2, eta1, eta2 } => {
            let kind = FormKind::parse(form)?;
            match (z1, z2, eta1, eta2) {
                (None, None, None, None) => cap_full(cli.format, kind, mode),
                (Some(z1), Some(z2), e1, e2) => {
                    let e1 = FiniteOrderClass::parse(kind, e1.as_deref().unwrap_or("id"))?;
                    let e2 = FiniteOrderClass::parse(kind, e2.as_deref().unwrap_or("id"))?;
                    let d = BorelInductionDatum::new(Mu::new(e1, point(z1)?), Mu::new(e2, point(z2)?))?;
                    let b = cap_single(kind, &d, mode)?;
                    Ok(Outcome::ok(match cli.format {
                        Format::Json => pretty(&serde_json::to_value(&b).expect("serializes")),
                        _ => branch_line(&b) + "\n",
                    }))
                }
                _ => Err(Error::Invalid("--z1 and --z2 go together".into())),
            }
        }
        Cmd::Gh { s_size } => {
            let r = ginzburg_hundley_check(GhScenario::ThetaLift, *s_size)?;
            Ok(Outcome::ok(match cli.format {
                Format::Json => pretty(&serde_json::to_value(&r).expect("serializes")),
                _ => {
                    let mut s = String::new();
                    writeln!(s, "partial L-function: {} with {} places removed", r.theta_expr, r.s_size).unwrap();
                    writeln!(s, "order at s = 1: {}", r.theta_order).unwrap();
                    writeln!(s, "Eisenstein bound at split, id, 1/2: {}", r.split_id_bound).unwrap();
                    writeln!(s, "largest other bound: {}", r.max_other).unwrap();
                    writeln!(s, "contradiction: {}", if r.contradiction { "yes" } else { "no" }).unwrap();
                    writeln!(s, "pole order at most 2: {}", if r.at_most_double { "yes" } else { "no" }).unwrap();
                    s
                }
            }))
        }
    }
}

fn cosets(format: Format, form: &EtaleForm) -> crate::Result<Outcome> {
    let reps = enumerate_coset_reps(form);
    Ok(Outcome::ok(match format {
        Format::Json => pretty(&json!(reps.iter().map(|w| w.letters.clone()).collect::<Vec<_>>())),
        Format::Csv => {
            let mut s = "length,word\n".to_string();
            for w in &reps {
                writeln!(s, "{},{}", w.len(), csv_field(&word_text(w))).unwrap();
            }
            s
        }
        Format::Markdown => reps.iter().map(|w| format!("- `{}`\n", word_text(w))).collect(),
        Format::Text => reps.iter().map(|w| word_text(w) + "\n").collect(),
    }))
}

fn attainment_text(a: &Attainment) -> String {
    match a {
        Attainment::NotApplicable => "no pole".into(),
        Attainment::Certified { witness } => format!("attained, {}", serde_json::to_string(witness).unwrap_or_default()),
        Attainment::Axiom { statement } => format!("attained by assumption: {statement}"),
        Attainment::Undetermined => "attainment undetermined".into(),
    }
}

fn poles_point(format: Format, form: &EtaleForm, chi: &FiniteOrderClass, s0: Q, mode: Mode) -> crate::Result<Outcome> {
    let v = verdict(form, chi, s0, mode)?;
    Ok(Outcome::ok(match format {
        Format::Json => pretty(&serde_json::to_value(&v).expect("serializes")),
        _ => {
            let mut s = String::new();
            writeln!(s, "{} {} at s = {} ({} mode): order {}", v.form, chi.label(), fmt_q(&s0), mode.name(), v.order)
                .unwrap();
            writeln!(
                s,
                "bounds: trivial {}, unconditional {}, conjectural {}",
                v.trivial_bound, v.unconditional_bound, v.conjectural_order
            )
            .unwrap();
            writeln!(s, "{}", attainment_text(&v.attained)).unwrap();
            for a in &v.assumptions {
                writeln!(s, "assumes: {a}").unwrap();
            }
            if let Some(p) = &v.provenance {
                writeln!(s, "source: {p}").unwrap();
            }
            for t in &v.trace {
                writeln!(s, "  {t}").unwrap();
            }
            s
        }
    }))
}

fn poles_table(format: Format, mode: Mode) -> crate::Result<Outcome> {
    let cells = pole_table(mode)?;
    let cols = crate::poles::Column::ALL;
    let mut header = vec!["form".to_string()];
    header.extend(cols.iter().map(|c| c.name().to_string()));
    let mut rows: Vec<Vec<String>> = Vec::new();
    for form in FormKind::ALL {
        let mut r = vec![form.name().to_string()];
        for c in cols {
            let cell = cells.iter().find(|x| x.form == form && x.column == c);
            r.push(cell.map(|x| x.order.to_string()).unwrap_or_else(|| "-".into()));
        }
        rows.push(r);
    }
    Ok(Outcome::ok(match format {
        Format::Json => pretty(&json!({ "mode": mode.name(), "cells": cells })),
        _ => grid(format, &format!("{} pole orders", mode.name()), &header, &rows),
    }))
}

/// Renders rows as text, markdown or csv.
fn grid(format: Format, title: &str, header: &[String], rows: &[Vec<String>]) -> String {
    let mut s = String::new();
    match format {
        Format::Csv => {
            writeln!(s, "{}", header.iter().map(|h| csv_field(h)).collect::<Vec<_>>().join(",")).unwrap();
            for r in rows {
                writeln!(s, "{}", r.iter().map(|h| csv_field(h)).collect::<Vec<_>>().join(",")).unwrap();
            }
        }
        Format::Markdown => {
            writeln!(s, "### {title}\n").unwrap();
            writeln!(s, "| {} |", header.join(" | ")).unwrap();
            writeln!(s, "|{}", " --- |".repeat(header.len())).unwrap();
            for r in rows {
                writeln!(s, "| {} |", r.join(" | ")).unwrap();
            }
        }
        _ => {
            let widths: Vec<usize> = (0..header.len())
                .map(|k| rows.iter().map(|r| r[k].chars().count()).chain([header[k].chars().count()]).max().unwrap_or(0))
                .collect();
            let line = |r: &[String]| {
                let cells: Vec<String> =
                    r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}", w = *w)).collect();
                cells.join("  ").trim_end().to_string()
            };
            writeln!(s, "{title}").unwrap();
            writeln!(s, "{}", line(header)).unwrap();
            for r in rows {
                writeln!(s, "{}", line(r)).unwrap();
            }
        }
    }
    s
}

fn table_rows(t: &Table) -> (Vec<String>, Vec<Vec<String>>) {
    let mut header = vec!["w".to_string()];
    header.extend(t.columns.iter().cloned());
    let rows = t
        .rows
        .iter()
        .map(|r| {
            let mut v = vec![r.word.to_string()];
            v.extend(r.cells.iter().map(|c| c.to_string()));
            v
        })
        .collect();
    (header, rows)
}

fn tables(format: Format, ids: &[TableId]) -> crate::Result<Outcome> {
    let computed = ids.iter().map(|&id| golden::compute(id)).collect::<crate::Result<Vec<_>>>()?;
    if format == Format::Json {
        let mut out = Vec::new();
        for t in &computed {
            let (header, rows) = table_rows(t);
            let rows: Vec<_> = rows
                .iter()
                .map(|r| json!({ "cells": r, "source": "computed", "golden": t.id.path() }))
                .collect();
            out.push(json!({
                "table": t.id.number(),
                "id": format!("{}/{}", t.id.family.dir(), t.id.kind.file()),
                "form": t.id.family.form().name(),
                "columns": header,
                "rows": rows,
                "record": golden::to_record(t)?,
            }));
        }
        let v = if out.len() == 1 { out.remove(0) } else { json!(out) };
        return Ok(Outcome::ok(pretty(&v)));
    }
    let mut s = String::new();
    for (i, t) in computed.iter().enumerate() {
        if i > 0 {
            s.push('\n');
        }
        let (header, rows) = table_rows(t);
        if format == Format::Csv && computed.len() > 1 {
            writeln!(s, "# {}", t.id).unwrap();
        }
        s.push_str(&grid(format, &t.id.title(), &header, &rows));
    }
    Ok(Outcome::ok(s))
}

fn tables_diff(format: Format, ids: &[TableId], dir: &std::path::Path) -> crate::Result<Outcome> {
    let mut diffs = Vec::new();
    for &id in ids {
        diffs.push(golden::diff_against(dir, id)?);
    }
    let code = if diffs.iter().all(|d| d.ok()) { 0 } else { 1 };
    let out = match format {
        Format::Json => pretty(&json!(diffs
            .iter()
            .map(|d| json!({ "table": d.id.number(), "id": d.id.path(), "cells": d.cells, "matched": d.matched,
                "mismatches": d.mismatches }))
            .collect::<Vec<_>>())),
        _ => {
            let mut s = String::new();
            for d in &diffs {
                if d.ok() {
                    writeln!(s, "{}: {} cells match", d.id, d.matched).unwrap();
                } else {
                    writeln!(s, "{}: {} of {} cells match, {} mismatches", d.id, d.matched, d.cells, d.mismatches.len())
                        .unwrap();
                    for m in &d.mismatches {
                        writeln!(s, "  {m}").unwrap();
                    }
                }
            }
            s
        }
    };
    Ok(Outcome { code, out })
}

fn report(format: Format, checks: &[Check]) -> Outcome {
    let failed = checks.iter().filter(|c| !c.pass).count();
    let out = match format {
        Format::Json => pretty(&json!({ "checks": checks, "failed": failed })),
        Format::Csv => {
            let mut s = "check,result,detail\n".to_string();
            for c in checks {
                writeln!(s, "{},{},{}", csv_field(&c.id), if c.pass { "PASS" } else { "FAIL" }, csv_field(&c.detail))
                    .unwrap();
            }
            s
        }
        _ => {
            let mut s: String = checks.iter().map(|c| format!("{c}\n")).collect();
            writeln!(s, "{} checks, {} failed", checks.len(), failed).unwrap();
            s
        }
    };
    Outcome { code: if failed == 0 { 0 } else { 1 }, out }
}

fn branch_line(b: &crate::applications::Branch) -> String {
    let pair = format!("({}, {})", b.datum.mu1, b.datum.mu2);
    match &b.kill {
        Some(c) => format!("{pair}: eliminated, {} at {}, s = {}", c, c.chi, fmt_q(&c.s_l)),
        None => match &b.at_one {
            Some(c) => format!("{pair}: survives ({} at {}, s = 1)", c, c.chi),
            None => format!("{pair}: survives"),
        },
    }
}

fn cap_full(format: Format, form: FormKind, mode: Mode) -> crate::Result<Outcome> {
    let r = cap_analysis(form, mode)?;
    Ok(Outcome::ok(match format {
        Format::Json => pretty(&serde_json::to_value(&r).expect("serializes")),
        _ => {
            let mut s = String::new();
            writeln!(s, "{} ({} bounds): {} candidates, {} branches", form, mode.name(), r.candidates.len(), r.branches.len())
                .unwrap();
            for b in &r.branches {
                writeln!(s, "  {}", branch_line(b)).unwrap();
            }
            let surv: Vec<String> = r.survivors.iter().map(|d| format!("({}, {})", d.mu1, d.mu2)).collect();
            writeln!(s, "survivors: {}", if surv.is_empty() { "none".into() } else { surv.join(", ") }).unwrap();
            s
        }
    }))
}
