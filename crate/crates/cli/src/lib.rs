//! Command-line front end for `qfsplit-core`: one subcommand per operation,
//! a scenario runner and JSON/TSV/text reports.

pub mod args;
pub mod checks;
pub mod error;
pub mod family;
pub mod report;
pub mod scenario;

use std::time::{Duration, Instant};

use serde_json::{json, Value};

use qfsplit_core::criteria::{chain_search, ChainSearchOptions};
use qfsplit_core::{
    chain_verify, delta, extension_check, fedder_fpure, lambda_search, qfs_height_search,
    singular_scan, trace_u, Budget, Error, HeightVerdict, Poly,
};

use args::{Cli, Command, Format, RingArgs};
use checks::{build_ring, run_sweep, verdict_text};
use error::{CliError, CliResult};
use report::{CheckRecord, Report, Status, Table};
use scenario::{RunOptions, Scenario};

fn parse_poly(ring: &RingArgs, text: &str) -> CliResult<Poly> {
    let r = build_ring(ring.p, ring.ext_degree, ring.modulus.as_deref(), &ring.vars)?;
    Ok(Poly::parse(&r, text)?)
}

/// Result of one command before it is wrapped into a report.
struct Done {
    detail: Value,
    summary: String,
    table: Option<Table>,
    status: Status,
}

impl Done {
    fn ok(detail: Value, summary: String) -> Self {
        Done {
            detail,
            summary,
            table: None,
            status: Status::Pass,
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn height_summary(rep: &qfsplit_core::HeightReport) -> String {
    let mut s = verdict_text(&rep.verdict);
    for l in &rep.levels {
        s.push_str(&format!(
            "\n  r={} {:?} via {:?} ({:.1} ms)",
            l.r, l.verdict, l.backend, l.wall_ms
        ));
    }
    s
}

fn run_command(cmd: &Command, budget: &Budget) -> CliResult<Done> {
    Ok(match cmd {
        Command::Height {
            ring,
            poly,
            cap,
            level,
        } => {
            let f = parse_poly(ring, poly)?;
            let rep = qfs_height_search(&f, *cap, level.variant, level.backend, budget)?;
            let status = match rep.verdict {
                HeightVerdict::BudgetExhausted(_) => Status::SkippedBudget,
                _ => Status::Pass,
            };
            Done {
                summary: height_summary(&rep),
                detail: to_value(&rep),
                table: None,
                status,
            }
        }
        Command::Chain { ring, poly, a, n } => {
            if *n == 0 {
                return Err(CliError::Config("--n must be at least 1".into()));
            }
            let g = parse_poly(ring, poly)?;
            let a = Poly::parse(g.ring(), a)?;
            let rep = chain_verify(&g, &a, *n)?;
            let mut summary = String::new();
            for (i, ai) in rep.chain.iter().enumerate() {
                let flag = match rep.kernel_flags.get(i) {
                    Some(true) => "in Ker(u)",
                    Some(false) => "NOT in Ker(u)",
                    None if rep.terminus_outside => "outside m^[p]",
                    None => "inside m^[p]",
                };
                summary.push_str(&format!("a_{} = {ai}  [{flag}]\n", i + 1));
            }
            summary.push_str(if rep.certified {
                "certified"
            } else {
                "not certified"
            });
            let mut detail = to_value(&rep);
            detail["note"] = json!(
                "certificate conditional on the Witt-vector splitting criterion for θ-chains"
            );
            Done::ok(detail, summary)
        }
        Command::ChainSearch {
            ring,
            poly,
            n_max,
            bounds,
        } => {
            let g = parse_poly(ring, poly)?;
            let options = ChainSearchOptions {
                budget: *budget,
                ..Default::default()
            };
            let hit = chain_search(&g, *n_max, bounds, &options)?;
            let summary = match &hit {
                Some(h) => format!("a = {}, n = {}", h.report.a, h.n),
                None => "no certificate within the bounds".into(),
            };
            Done::ok(to_value(&hit), summary)
        }
        Command::Delta { ring, poly } => {
            let d = delta(&parse_poly(ring, poly)?)?;
            Done::ok(json!({ "delta": d }), d.to_string())
        }
        Command::Trace { ring, poly } => {
            let u = trace_u(&parse_poly(ring, poly)?);
            Done::ok(json!({ "trace": u }), u.to_string())
        }
        Command::Fedder { ring, poly } => {
            let fpure = fedder_fpure(&parse_poly(ring, poly)?)?;
            Done::ok(
                json!({ "fpure": fpure }),
                if fpure { "F-pure" } else { "not F-pure" }.into(),
            )
        }
        Command::Claims { sweep, qmax } => {
            let rep = run_sweep(*sweep, *qmax, family::BASE_QUARTIC)?;
            let table = Table {
                header: vec!["q".into(), "s".into(), "witness".into()],
                rows: rep
                    .entries
                    .iter()
                    .map(|e| {
                        vec![
                            e.q.to_string(),
                            e.s.to_string(),
                            e.witness
                                .as_ref()
                                .map_or("none".into(), |w| format!("{w:?}")),
                        ]
                    })
                    .collect(),
            };
            let summary = format!(
                "{} values of q, {} feasible, {} contradictions",
                rep.entries.len(),
                rep.feasible_count(),
                rep.contradictions.len()
            );
            Done {
                detail: json!({
                    "rule": rep.rule,
                    "entries": rep.entries,
                    "contradictions": rep.contradictions,
                }),
                summary,
                table: Some(table),
                status: Status::Pass,
            }
        }
        Command::Lambda { p } => {
            let res = lambda_search(*p)?;
            let summary = match res.lambda {
                Some(l) => format!("lambda = {l}"),
                None => "no lambda found".into(),
            };
            Done::ok(to_value(&res), summary)
        }
        Command::ScanFamily {
            ring,
            poly,
            m,
            cap,
            n_max,
            bounds,
            level,
        } => scan_family(
            ring,
            poly,
            *m,
            *cap,
            *n_max,
            bounds.as_deref(),
            level,
            budget,
        )?,
        Command::SingularScan { ring, poly, e_max } => {
            let rep = singular_scan(
                &parse_poly(ring, poly)?,
                *e_max,
                qfsplit_core::criteria::DEFAULT_SCAN_BUDGET,
            )?;
            let table = Table {
                header: vec!["degree".into(), "point".into()],
                rows: rep
                    .points
                    .iter()
                    .map(|pt| vec![pt.field_degree.to_string(), pt.coords.join(":")])
                    .collect(),
            };
            let summary = if rep.points.is_empty() {
                format!("no singular points over F_{}^e for e <= {e_max}", ring.p)
            } else {
                let pts: Vec<String> = rep
                    .points
                    .iter()
                    .map(|pt| format!("({})", pt.coords.join(":")))
                    .collect();
                format!("{} singular points: {}", pts.len(), pts.join(" "))
            };
            Done {
                detail: to_value(&rep),
                summary,
                table: Some(table),
                status: Status::Pass,
            }
        }
        Command::Extension {
            ring,
            poly,
            n,
            l,
            fn_variant,
            level,
        } => {
            let f = parse_poly(ring, poly)?;
            let rep = extension_check(
                &f,
                *n,
                *l,
                level.variant,
                *fn_variant,
                level.backend,
                budget,
            )?;
            let summary = format!(
                "levels 1..{} member: {}\nf_{n} in m^[p^{n}]: {}\nl >= p^{n}: {}\nA[t]/(f + t^{l}) not quasi-F-split: {}",
                n - 1,
                rep.hypothesis_sht,
                rep.hypothesis_fn,
                rep.l_large_enough,
                if rep.conclusion { "yes" } else { "not established" }
            );
            Done::ok(to_value(&rep), summary)
        }
        Command::VerifyPaper { .. } => unreachable!("handled by the scenario runner"),
    })
}

#[allow(clippy::too_many_arguments)]
fn scan_family(
    ring: &RingArgs,
    poly: &str,
    (m_lo, m_hi): (u64, u64),
    cap: u32,
    n_max: u32,
    bounds: Option<&[u64]>,
    level: &args::LevelArgs,
    budget: &Budget,
) -> CliResult<Done> {
    let base = parse_poly(ring, poly)?;
    let ext = base.ring().extend("t")?;
    let f = base.embed(&ext)?;
    let p = ring.p;
    let bounds: Vec<u64> = match bounds {
        Some(b) => b.to_vec(),
        None => {
            let mut b = vec![p * p - 1; base.ring().nvars()];
            let tb = p
                .checked_pow(cap + 1)
                .ok_or_else(|| CliError::Config("cap too large for default bounds".into()))?;
            b.push(tb - 1);
            b
        }
    };
    let options = ChainSearchOptions {
        budget: *budget,
        ..Default::default()
    };
    let mut rows = Vec::new();
    let mut table = Vec::new();
    for m in m_lo..=m_hi {
        let t = Poly::monomial(&ext, &{
            let mut e = vec![0; ext.nvars()];
            e[ext.nvars() - 1] = m;
            e
        })?;
        let g = f.add(&t)?;
        let hit = chain_search(&g, n_max, &bounds, &options)?;
        let height = qfs_height_search(&g, cap, level.variant, level.backend, budget)?;
        let chain_cell = hit.as_ref().map_or("none".into(), |h| h.n.to_string());
        let levels: Vec<&str> = height
            .levels
            .iter()
            .map(|l| match l.verdict {
                qfsplit_core::LevelVerdict::Member => "M",
                qfsplit_core::LevelVerdict::NonMember => "N",
                qfsplit_core::LevelVerdict::Unknown => "?",
            })
            .collect();
        table.push(vec![
            m.to_string(),
            chain_cell,
            hit.as_ref().map_or("-".into(), |h| h.report.a.to_string()),
            verdict_text(&height.verdict),
            levels.concat(),
        ]);
        rows.push(json!({
            "m": m,
            "chain_n": hit.as_ref().map(|h| h.n),
            "multiplier": hit.as_ref().map(|h| h.report.a.to_string()),
            "height": height.verdict,
            "levels": height.levels.iter().map(|l| l.verdict).collect::<Vec<_>>(),
        }));
    }
    let summary = table
        .iter()
        .map(|r| {
            format!(
                "m={}: chain n={} (a = {}), {} levels {}",
                r[0], r[1], r[2], r[3], r[4]
            )
        })
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Done {
        detail: json!({ "bounds": bounds, "rows": rows }),
        summary,
        table: Some(Table {
            header: ["m", "chain_n", "multiplier", "height", "levels"]
                .map(String::from)
                .to_vec(),
            rows: table,
        }),
        status: Status::Pass,
    })
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Height { .. } => "height",
        Command::Chain { .. } => "chain",
        Command::ChainSearch { .. } => "chain-search",
        Command::VerifyPaper { .. } => "verify-paper",
        Command::Delta { .. } => "delta",
        Command::Trace { .. } => "trace",
        Command::Fedder { .. } => "fedder",
        Command::Claims { .. } => "claims",
        Command::Lambda { .. } => "lambda",
        Command::ScanFamily { .. } => "scan-family",
        Command::SingularScan { .. } => "singular-scan",
        Command::Extension { .. } => "extension",
    }
}

/// Builds the report for a parsed command line.
pub fn build_report(cli: &Cli) -> CliResult<Report> {
    let config = to_value(cli);
    let common = &cli.common;
    if let Command::VerifyPaper {
        section,
        tier,
        scenario,
    } = &cli.command
    {
        let sc = match scenario {
            None => Scenario::paper(),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                Scenario::parse(&text)?
            }
        };
        let opts = RunOptions {
            section: section.clone(),
            tier: Some(*tier),
            seconds: common.budget_seconds,
            terms: common.budget_terms,
        };
        return scenario::run(&sc, &opts, config);
    }

    let name = command_name(&cli.command);
    let started = Instant::now();
    let budget = Budget {
        max_terms: common.budget_terms,
        deadline: common
            .budget_seconds
            .map(|s| started + Duration::from_secs_f64(s)),
    };
    let done = match run_command(&cli.command, &budget) {
        Ok(d) => d,
        Err(CliError::Core(Error::ResourceBudgetExceeded(why))) => Done {
            detail: json!({ "error": why }),
            summary: format!("budget exhausted: {why}"),
            table: None,
            status: Status::SkippedBudget,
        },
        Err(e) => return Err(e),
    };
    let mut report = Report::new(name, config);
    report.checks.push(CheckRecord {
        name: name.to_string(),
        kind: name.to_string(),
        status: done.status,
        wall_ms: started.elapsed().as_secs_f64() * 1e3,
        detail: done.detail,
        summary: done.summary,
        table: done.table,
    });
    Ok(report)
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Tsv => report.to_tsv(),
        Format::Text => report.to_text(),
    }
}

/// Runs the command line and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    if cli.common.threads > 0 {
        // Fails only if a pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.common.threads)
            .build_global();
    }
    let report = match build_report(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let text = render(&report, cli.common.format);
    match &cli.common.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: {}: {e}", path.display());
                return 2;
            }
        }
        None => print!("{text}"),
    }
    report.exit_code()
}
