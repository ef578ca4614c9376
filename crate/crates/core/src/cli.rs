//! The `mhs` command line.
//!
//! Exit codes: 0 when every checked instance holds, 1 when an identity
//! fails, 2 on unparsable or invalid input, 3 when a summand or table guard
//! is exceeded.

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use crate::bench::{bench_ladder, rows_to_csv};
use crate::egf::identities::egf_suite;
use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, Rational};
use crate::mhs::{dual_index, embed_type1, embed_type2, mhs_value_guarded, verify_mhs_duality, MultiIndex};
use crate::multiseq::IndexBox;
use crate::nested::{
    c_direct_guarded, c_recursive, verify_difference_formula, verify_duality, verify_kt_reduction,
    verify_recurrence, verify_shift_identity, verify_two_index_reduction, NestedSumSpec,
};
use crate::random::Grid;
use crate::report::Report;

#[derive(Debug, Parser)]
#[command(name = "mhs", version, about = "Exact multiple harmonic sums, nested sums and their identities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Seed for randomized parameter grids.
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,

    /// Maximum number of summands a direct enumeration may visit.
    #[arg(long, default_value_t = crate::DEFAULT_GUARD, global = true)]
    pub guard: u128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum IdentityArg {
    MhsDuality,
    CDuality,
    DifferenceFormula,
    Recurrence,
    Shift,
    EgfSuite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Direct,
    Recursive,
}

#[derive(Debug, Args)]
pub struct SpecArgs {
    /// Parameter blocks: `;` between slots, `,` within a slot, e.g. "1/2,1/3;0,1".
    #[arg(long)]
    pub x: Option<String>,

    /// Shift parameters t_1..t_{p-1}, comma separated.
    #[arg(long, default_value = "")]
    pub t: String,
}

impl SpecArgs {
    fn spec(&self) -> Result<Option<NestedSumSpec>> {
        self.x.as_deref().map(|x| NestedSumSpec::parse(x, &self.t)).transpose()
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Value of the multiple harmonic sum s_mu(n).
    S {
        #[arg(long)]
        mu: String,
        #[arg(long)]
        n: usize,
    },
    /// The dual multi-index mu*.
    Dual {
        #[arg(long)]
        mu: String,
    },
    /// The two 0/1 parameter vectors whose single-index sums equal s_mu.
    Embed {
        #[arg(long)]
        mu: String,
    },
    /// Value of a nested sum c[x | t](n).
    C {
        #[command(flatten)]
        spec: SpecArgs,
        /// Index vector, comma separated, one entry per slot.
        #[arg(long)]
        n: String,
        #[arg(long, value_enum, default_value_t = Method::Recursive)]
        method: Method,
    },
    /// Check an identity on a box of indices, for one spec or a seeded batch.
    Verify {
        #[arg(long, value_enum)]
        identity: IdentityArg,
        #[arg(long)]
        mu: Option<String>,
        #[command(flatten)]
        spec: SpecArgs,
        /// Largest index in every slot.
        #[arg(long)]
        nmax: Option<usize>,
        /// Box extents, comma separated (overrides --nmax).
        #[arg(long = "box")]
        extents: Option<String>,
        /// Largest difference order in every slot (difference-formula).
        #[arg(long)]
        kmax: Option<usize>,
        /// 1-based slots of the shift identity, comma separated.
        #[arg(long)]
        subset: Option<String>,
        /// The constant c of the shift identity; defaults to the subset sum.
        #[arg(long = "shift-c", allow_hyphen_values = true)]
        shift_c: Option<String>,
        /// Number of seeded cases when no spec is given.
        #[arg(long)]
        count: Option<usize>,
        /// Degree bound for the series suite.
        #[arg(long, default_value_t = 6)]
        degree: usize,
        /// Largest multi-index weight swept by mhs-duality without --mu.
        #[arg(long, default_value_t = 6)]
        max_weight: usize,
    },
    /// Time chain enumeration against the recurrence (one slot, t = 1).
    Bench {
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Values of n, comma separated.
        #[arg(long, default_value = "5,10,20,30,40")]
        ladder: String,
        #[arg(long, default_value_t = 5)]
        reps: usize,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::GuardExceeded { .. } => 3,
        Error::ParseRational(_)
        | Error::ParseMultiIndex(..)
        | Error::InvalidSpec(_)
        | Error::ArityMismatch { .. }
        | Error::ShiftHypothesis(_)
        | Error::DepthTooSmall
        | Error::DegreeExhausted => 2,
        _ => 1,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            return if code == 0 {
                Outcome::ok(text)
            } else {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(&cli) {
        Ok(outcome) => outcome,
        Err(e) => Outcome {
            code: exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse()
                .map_err(|_| Error::InvalidSpec(format!("expected a list of naturals, got {s:?}")))
        })
        .collect()
}

fn region(extents: &Option<String>, nmax: usize, arity: usize) -> Result<IndexBox> {
    match extents {
        Some(e) => {
            let b = IndexBox::new(parse_usize_list(e)?)?;
            if b.arity() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    got: b.arity(),
                });
            }
            Ok(b)
        }
        None => Ok(IndexBox::cube(arity, nmax)),
    }
}

fn render_value(format: Format, fields: serde_json::Value, text: String) -> String {
    match format {
        Format::Json => format!("{fields}\n"),
        Format::Csv => {
            let obj = fields.as_object().expect("object");
            let keys: Vec<&str> = obj.keys().map(String::as_str).collect();
            let vals: Vec<String> = obj
                .values()
                .map(|v| match v {
                    serde_json::Value::String(s) => s.clone(),
                    other => other.to_string(),
                })
                .collect();
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&keys).expect("in-memory write");
            w.write_record(&vals).expect("in-memory write");
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
        Format::Text => format!("{text}\n"),
    }
}

fn render_report(format: Format, report: &Report) -> Outcome {
    let stdout = match format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv(),
    };
    if report.all_equal() {
        return Outcome::ok(stdout);
    }
    let mut stderr = String::new();
    for f in report.failures() {
        stderr.push_str(&format!(
            "FAIL {} {} n={:?}: {} != {}\n",
            f.identity, f.spec, f.index, f.lhs, f.rhs
        ));
    }
    Outcome {
        code: 1,
        stdout,
        stderr,
    }
}

/// Runs `f` for each seeded case in parallel and merges reports in case order.
fn batch<F>(seed: u64, count: usize, f: F) -> Result<Report>
where
    F: Fn(&mut Grid) -> Result<Report> + Sync,
{
    let parts: Vec<Result<Report>> = (0..count)
        .into_par_iter()
        .map(|case| f(&mut Grid::new(seed.wrapping_add(case as u64))))
        .collect();
    let mut report = Report::new();
    for part in parts {
        report.merge(part?);
    }
    Ok(report)
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let (format, seed, guard) = (cli.format, cli.seed, cli.guard);
    match &cli.command {
        Command::S { mu, n } => {
            let mu: MultiIndex = mu.parse()?;
            let v = format_rational(&mhs_value_guarded(&mu, *n, guard)?);
            let fields = json!({"mu": mu.to_string(), "n": n, "value": v});
            Ok(Outcome::ok(render_value(format, fields, v)))
        }
        Command::Dual { mu } => {
            let mu: MultiIndex = mu.parse()?;
            let d = dual_index(&mu).to_string();
            let fields = json!({"mu": mu.to_string(), "dual": d});
            Ok(Outcome::ok(render_value(format, fields, d)))
        }
        Command::Embed { mu } => {
            let mu: MultiIndex = mu.parse()?;
            let show = |v: Vec<Rational>| {
                format!("({})", v.iter().map(format_rational).collect::<Vec<_>>().join(","))
            };
            let (e1, e2) = (show(embed_type1(&mu)), show(embed_type2(&mu)));
            let text = format!("type1 {e1}\ntype2 {e2}");
            let fields = json!({"mu": mu.to_string(), "type1": e1, "type2": e2});
            Ok(Outcome::ok(render_value(format, fields, text)))
        }
        Command::C { spec, n, method } => {
            let spec = spec
                .spec()?
                .ok_or_else(|| Error::InvalidSpec("--x is required".into()))?;
            let n = parse_usize_list(n)?;
            let v = match method {
                Method::Direct => c_direct_guarded(&spec, &n, guard)?,
                Method::Recursive => c_recursive(&spec, &n)?,
            };
            let v = format_rational(&v);
            let fields = json!({"spec": spec.to_string(), "index": n, "value": v});
            Ok(Outcome::ok(render_value(format, fields, v)))
        }
        Command::Verify {
            identity,
            mu,
            spec,
            nmax,
            extents,
            kmax,
            subset,
            shift_c,
            count,
            degree,
            max_weight,
        } => {
            let spec = spec.spec()?;
            let report = match identity {
                IdentityArg::MhsDuality => {
                    let nmax = nmax.unwrap_or(8);
                    let indices = match mu {
                        Some(m) => vec![m.parse::<MultiIndex>()?],
                        None => MultiIndex::up_to_weight(*max_weight),
                    };
                    let parts: Vec<Result<Report>> =
                        indices.par_iter().map(|m| verify_mhs_duality(m, nmax)).collect();
                    let mut report = Report::new();
                    for p in parts {
                        report.merge(p?);
                    }
                    report
                }
                IdentityArg::CDuality => {
                    let nmax = nmax.unwrap_or(3);
                    match spec {
                        Some(s) => verify_duality(&s, &region(extents, nmax, s.r())?, guard)?,
                        None => batch(seed, count.unwrap_or(200), |g| {
                            let s = g.spec_up_to(3, 3);
                            verify_duality(&s, &IndexBox::cube(s.r(), nmax), guard)
                        })?,
                    }
                }
                IdentityArg::DifferenceFormula => {
                    let (nmax, kmax) = (nmax.unwrap_or(2), kmax.unwrap_or(2));
                    let run = |s: &NestedSumSpec| {
                        let nbox = region(extents, nmax, s.r())?;
                        verify_difference_formula(s, &nbox, &IndexBox::cube(s.r(), kmax), guard)
                    };
                    match spec {
                        Some(s) => run(&s)?,
                        None => batch(seed, count.unwrap_or(50), |g| run(&g.spec_up_to(2, 2)))?,
                    }
                }
                IdentityArg::Recurrence => {
                    let nmax = nmax.unwrap_or(4);
                    match spec {
                        Some(s) => verify_recurrence(&s, &region(extents, nmax, s.r())?, guard)?,
                        None => batch(seed, count.unwrap_or(200), |g| {
                            let s = g.spec_up_to(3, 3);
                            let mut report = verify_recurrence(&s, &IndexBox::cube(s.r(), nmax), guard)?;
                            let p = g.between(1, 3);
                            let (x, y) = (g.rationals(p), g.rationals(p));
                            report.merge(verify_kt_reduction(&x, nmax)?);
                            report.merge(verify_two_index_reduction(&x, &y, nmax, nmax)?);
                            Ok(report)
                        })?,
                    }
                }
                IdentityArg::Shift => {
                    let nmax = nmax.unwrap_or(3);
                    match spec {
                        Some(s) => {
                            let subset = subset
                                .as_deref()
                                .ok_or_else(|| Error::InvalidSpec("--subset is required with --x".into()))?;
                            let slots = parse_usize_list(subset)?
                                .into_iter()
                                .map(|i| {
                                    i.checked_sub(1).ok_or_else(|| {
                                        Error::ShiftHypothesis("slots are 1-based".into())
                                    })
                                })
                                .collect::<Result<Vec<_>>>()?;
                            let c = match shift_c {
                                Some(c) => parse_rational(c)?,
                                None => slots
                                    .iter()
                                    .filter(|&&i| i < s.r())
                                    .map(|&i| &s.xblocks()[i][0])
                                    .sum(),
                            };
                            verify_shift_identity(&s, &slots, &c, &region(extents, nmax, s.r())?, guard)?
                        }
                        None => batch(seed, count.unwrap_or(50), |g| {
                            let (s, slots, c) = g.shift_case(3, 3);
                            verify_shift_identity(&s, &slots, &c, &IndexBox::cube(s.r(), nmax), guard)
                        })?,
                    }
                }
                IdentityArg::EgfSuite => egf_suite(seed, count.unwrap_or(10), 2, *degree)?,
            };
            Ok(render_report(format, &report))
        }
        Command::Bench { depth, ladder, reps } => {
            let ladder = parse_usize_list(ladder)?;
            if *depth == 0 {
                return Err(Error::InvalidSpec("depth must be positive".into()));
            }
            let rows = bench_ladder(seed, *depth, &ladder, *reps, guard)?;
            let stdout = match format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&rows).expect("plain data")),
                _ => rows_to_csv(&rows),
            };
            let code = if rows.iter().all(|r| r.equal) { 0 } else { 1 };
            Ok(Outcome {
                code,
                stdout,
                stderr: String::new(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;
    use crate::report::Identity;

    #[test]
    fn failures_exit_one_and_are_listed() {
        let mut report = Report::new();
        report.record(Identity::CDuality, "s", vec![0], &int(1), &int(1));
        report.record(Identity::CDuality, "s", vec![1], &int(1), &int(2));
        let out = render_report(Format::Text, &report);
        assert_eq!(out.code, 1);
        assert_eq!(out.stderr, "FAIL c-duality s n=[1]: 1 != 2\n");
        assert!(out.stdout.ends_with("2 comparisons, 1 failures\n"));
    }

    #[test]
    fn error_classes_map_to_exit_codes() {
        let guard = Error::GuardExceeded { what: "summands", count: 5, limit: 1 };
        assert_eq!(exit_code(&guard), 3);
        assert_eq!(exit_code(&Error::ParseRational("x".into())), 2);
        assert_eq!(exit_code(&Error::Internal("x".into())), 1);
    }

    #[test]
    fn value_csv_has_header_and_row() {
        let text = render_value(Format::Csv, json!({"mu": "(1)", "dual": "(1)"}), String::new());
        assert_eq!(text, "dual,mu\n(1),(1)\n");
    }
}
