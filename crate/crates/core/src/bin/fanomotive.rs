use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use fanomotive::charsums::{point_count_brute, point_count_cached};
use fanomotive::error::{Error, Result};
use fanomotive::ffield::FiniteField;
use fanomotive::geometry::{critical_dimension, full_middle_hodge_numbers, hodge_numbers};
use fanomotive::harness::{builtin_identities, run_identities, ConfigFile, Context, Recipe, CACHE_DIR_ENV};
use fanomotive::numtheory::prime_power;
use fanomotive::qseries::int_json;

#[derive(Parser)]
#[command(name = "fanomotive", version, about = "Point counts, motivic L-series and modular identities for diagonal hypersurfaces")]
struct Cli {
    /// TOML file with extra varieties and identities
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// List registered varieties and identities
    Registry,
    /// Projective point count over F_q
    Count {
        #[arg(long)]
        variety: String,
        /// Field size (a prime power)
        #[arg(long)]
        field: u64,
        /// Also count by enumeration
        #[arg(long)]
        brute: bool,
    },
    /// Coefficients of the motivic L-series
    Lseries {
        #[arg(long)]
        variety: String,
        #[arg(long, default_value_t = 100)]
        bound: usize,
        /// Tate twist replacing charge - 1
        #[arg(long)]
        twist_override: Option<u32>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Expansion of a modular form: eta, theta K L M, string K L M, fieldtheta eisenstein|gauss
    Qform {
        /// Form name followed by its parameters
        form: Vec<String>,
        /// Substitute q -> q^scale
        #[arg(long, default_value_t = 1)]
        scale: i64,
        /// Number of printed terms
        #[arg(long, default_value_t = 10)]
        terms: usize,
        /// Exponent precision
        #[arg(long, default_value_t = 50)]
        precision: i64,
        /// Full recipe expression instead of a single form
        #[arg(long)]
        recipe: Option<String>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Hodge numbers of the primitive middle cohomology
    Hodge {
        variety: String,
        /// Include the hyperplane class
        #[arg(long)]
        full: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
    /// Verify one identity or all of them
    Verify {
        #[arg(default_value = "all")]
        id: String,
        /// Replace every comparison bound
        #[arg(long)]
        bound: Option<usize>,
        /// Write the JSON report here instead of stdout
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    let config = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let mut ctx = Context::with_builtin();
    for v in config.variety_entries()? {
        ctx.add_variety(v);
    }
    if let Some(b) = config.settings.brute_budget {
        ctx.set_brute_budget(b as u128);
    }
    let cache_dir = std::env::var_os(CACHE_DIR_ENV).map(PathBuf::from);
    if let Some(dir) = &cache_dir {
        ctx.load_cache(dir)?;
    }
    let ok = dispatch(&ctx, &config, cli.command)?;
    if let Some(dir) = &cache_dir {
        ctx.save_cache(dir)?;
    }
    Ok(ok)
}

fn dispatch(ctx: &Context, config: &ConfigFile, command: Command) -> Result<bool> {
    match command {
        Command::Registry => {
            println!("name,weights,exponents,degree,dimension,charge,critical_dimension,level");
            for v in ctx.varieties() {
                let d = &v.descriptor;
                let join = |xs: &[u32]| xs.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
                println!(
                    "{},{},{},{},{},{},{},{}",
                    d.name(),
                    join(d.weights()),
                    join(d.exponents()),
                    d.degree(),
                    d.dimension(),
                    d.charge(),
                    critical_dimension(d)?,
                    v.level.map_or(String::new(), |l| l.to_string())
                );
            }
            println!();
            println!("id,description");
            for c in all_cases(config)? {
                println!("{},{}", c.id, c.description);
            }
            Ok(true)
        }
        Command::Count { variety, field, brute } => {
            let (p, f) = prime_power(field).ok_or_else(|| Error::Config(format!("{field} is not a prime power")))?;
            let ff = FiniteField::new(p, f)?;
            let d = &ctx.variety(&variety)?.descriptor;
            let n = point_count_cached(d, &ff, ctx.cache())?;
            if brute {
                let b = point_count_brute(d, &ff, ctx.brute_budget())?;
                println!("q,count,brute");
                println!("{field},{n},{b}");
                Ok(n == b)
            } else {
                println!("q,count");
                println!("{field},{n}");
                Ok(true)
            }
        }
        Command::Lseries {
            variety,
            bound,
            twist_override,
            format,
        } => {
            let mut motive = ctx.motive(&variety)?;
            if let Some(t) = twist_override {
                motive = motive.with_twist(t);
            }
            let l = motive.lseries_coefficients(bound, ctx.cache())?;
            match format {
                Format::Csv => {
                    println!("n,a_n");
                    for n in 1..=bound {
                        println!("{n},{}", l.coeffs[n]);
                    }
                }
                Format::Json => {
                    let coeffs: Vec<_> = l.coeffs[1..].iter().map(int_json).collect();
                    let out = json!({
                        "variety": l.name,
                        "twist": l.twist,
                        "weight": l.weight,
                        "bad_primes": l.bad_primes,
                        "unverified_indices": l.flagged,
                        "coefficients": coeffs,
                    });
                    println!("{}", serde_json::to_string_pretty(&out).expect("json"));
                }
            }
            Ok(true)
        }
        Command::Qform {
            form,
            scale,
            terms,
            precision,
            recipe,
            format,
        } => {
            let recipe = match recipe {
                Some(r) => Recipe::parse(&r)?,
                None => Recipe::parse(&form_recipe(&form, scale)?)?,
            };
            let e = recipe.evaluate(ctx, precision)?;
            match format {
                None => println!("{}", e.series.pretty(terms)),
                Some(Format::Json) => println!("{}", serde_json::to_string_pretty(&e.series.to_json()).expect("json")),
                Some(Format::Csv) => {
                    println!("exponent,coefficient");
                    for (x, c) in e.series.terms().take(terms) {
                        println!("{x},{c}");
                    }
                }
            }
            Ok(true)
        }
        Command::Hodge { variety, full, format } => {
            let d = &ctx.variety(&variety)?.descriptor;
            let t = if full {
                full_middle_hodge_numbers(d)
            } else {
                hodge_numbers(d)
            };
            match format {
                Format::Csv => {
                    println!("p,q,h");
                    for ((p, q), h) in t.entries() {
                        println!("{p},{q},{h}");
                    }
                }
                Format::Json => {
                    let rows: Vec<_> = t.entries().iter().map(|((p, q), h)| json!([p, q, h])).collect();
                    println!("{}", serde_json::to_string_pretty(&rows).expect("json"));
                }
            }
            Ok(true)
        }
        Command::Verify { id, bound, output } => {
            let bound = bound.or(config.settings.coefficient_bound);
            let cases: Vec<_> = all_cases(config)?
                .into_iter()
                .filter(|c| id == "all" || c.id == id)
                .collect();
            if cases.is_empty() {
                return Err(Error::Unknown { kind: "identity", name: id });
            }
            let report = run_identities(ctx, &cases, bound);
            for r in &report.reports {
                for c in &r.checks {
                    let detail = match (&c.first_mismatch, &c.error) {
                        (_, Some(e)) => format!("error: {e}"),
                        (Some(m), None) => format!("first mismatch at {}: {} vs {}", m.index, m.left, m.right),
                        (None, None) => format!("{} compared", c.compared),
                    };
                    eprintln!("{} {} [{}] {}", r.id, if c.passed { "pass" } else { "FAIL" }, c.label, detail);
                }
            }
            match output {
                Some(path) => std::fs::write(path, report.to_json())?,
                None => println!("{}", report.to_json()),
            }
            Ok(report.passed())
        }
    }
}

fn all_cases(config: &ConfigFile) -> Result<Vec<fanomotive::harness::IdentityCase>> {
    let mut cases = builtin_identities();
    cases.extend(config.identity_cases()?);
    Ok(cases)
}

fn form_recipe(form: &[String], scale: i64) -> Result<String> {
    let usage = || Error::Config("form must be: eta | theta K L M | string K L M | fieldtheta eisenstein|gauss".into());
    let base = match form.first().map(String::as_str) {
        Some("eta") if form.len() == 1 => "eta".to_string(),
        Some(name @ ("theta" | "string")) if form.len() == 4 => {
            for p in &form[1..] {
                p.parse::<i64>().map_err(|_| usage())?;
            }
            format!("{name}({},{},{})", form[1], form[2], form[3])
        }
        Some("fieldtheta") if form.len() == 2 => format!("fieldtheta({})", form[1]),
        _ => return Err(usage()),
    };
    if scale < 1 {
        return Err(Error::Config("scale must be positive".into()));
    }
    Ok(if scale == 1 { base } else { format!("{base}@{scale}") })
}
