use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use aru_core::aut::DEFAULT_SEARCH_BUDGET;
use aru_core::binary::{dozen_rank, BinaryAlgebra, ElementType, DELTA};
use aru_core::character::{self, TableFormat};
use aru_core::fermion;
use aru_core::invariants;
use aru_core::monomial::LiftMode;
use aru_core::orbits;
use aru_core::perm;
use aru_core::pipeline::DEFAULT_LIFT_BUDGET;
use aru_core::report::{self, Config, Format};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "aru", version, about = "Binary Cayley geometry, monomial invariants and the rank-28 character")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the 256 elements of the binary Cayley algebra.
    Classify {
        /// List every element with its type.
        #[arg(long)]
        elements: bool,
    },
    /// The 28 cube-root pairs.
    Delta,
    /// The 63 dozens and the rank of their indicators.
    Dozens,
    /// Automorphism group of the binary algebra.
    Aut(GeometryArgs),
    /// Orbits of the automorphism group on k-subsets of the 28 pairs.
    Orbits {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long, default_value_t = DELTA / 2)]
        k: usize,
        /// Compare the enumeration with the Burnside count.
        #[arg(long)]
        check_burnside: bool,
        #[arg(long)]
        parallel: bool,
        /// Include every orbit record.
        #[arg(long)]
        list: bool,
    },
    /// Invariant vectors of the monomial group on the middle exterior power.
    Invariants {
        #[command(flatten)]
        geometry: GeometryArgs,
        #[arg(long, value_enum, default_value_t = Lift::Search)]
        lift: Lift,
        #[arg(long, default_value_t = DEFAULT_LIFT_BUDGET)]
        lift_budget: usize,
        /// 34 lines of "re im" Gaussian integer coefficients.
        #[arg(long)]
        rho_coeffs: Option<PathBuf>,
        #[arg(long)]
        parallel: bool,
    },
    /// Two-variable character coefficients.
    Character {
        /// Largest degree, e.g. 6 or 11/2.
        #[arg(long, default_value = "11/2", value_parser = parse_degree)]
        max_degree: u32,
        #[arg(long, default_value_t = 8)]
        max_charge: i64,
        #[arg(long, value_enum, default_value_t = TableOutput::Table)]
        format: TableOutput,
    },
    /// Mode-algebra axiom checks on a truncated Fock space.
    Axioms {
        #[arg(long, default_value_t = 1)]
        pairs: u32,
        #[arg(long, default_value = "4", value_parser = parse_degree)]
        max_degree: u32,
    },
    /// Run every acceptance check and print the report.
    VerifyAll {
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ReportOutput::Text)]
        format: ReportOutput,
        #[arg(long, default_value_t = DELTA / 2)]
        k: usize,
        /// Character window, e.g. 6.
        #[arg(long, default_value = "6", value_parser = parse_degree)]
        max_degree: u32,
        /// Single-threaded orbit enumeration.
        #[arg(long)]
        sequential: bool,
        #[arg(long, value_enum, default_value_t = Lift::Search)]
        lift: Lift,
        #[arg(long, default_value_t = DEFAULT_LIFT_BUDGET)]
        lift_budget: usize,
        #[arg(long)]
        rho_coeffs: Option<PathBuf>,
        /// Omit wall-clock times so output is byte-stable.
        #[arg(long)]
        no_timings: bool,
    },
}

#[derive(Args)]
struct GeometryArgs {
    /// Directory for content-addressed caches.
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
    search_budget: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Lift {
    Search,
    None,
}

impl From<Lift> for LiftMode {
    fn from(l: Lift) -> Self {
        match l {
            Lift::Search => LiftMode::Search,
            Lift::None => LiftMode::None,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TableOutput {
    Table,
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportOutput {
    Json,
    Csv,
    Text,
}

fn parse_degree(s: &str) -> Result<u32, String> {
    character::parse_half_degree(s).ok_or_else(|| format!("not a half-integer degree: {s}"))
}

fn print_json(v: &Value) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, v)?;
    writeln!(out)?;
    Ok(())
}

fn classify(elements: bool) -> Result<Value> {
    let alg = BinaryAlgebra::new()?;
    let mut v = json!({ "census": alg.census() });
    if elements {
        v["elements"] = BinaryAlgebra::elements()
            .map(|x| json!({ "code": x.0, "type": alg.classify(x) }))
            .collect();
    }
    Ok(v)
}

fn delta() -> Result<Value> {
    let alg = BinaryAlgebra::new()?;
    let pairs = alg.build_delta();
    Ok(json!({
        "count": pairs.len(),
        "idempotent_pairs": alg.unit_pairs(ElementType::Idempotent).len(),
        "pairs": pairs,
    }))
}

fn dozens() -> Result<Value> {
    let alg = BinaryAlgebra::new()?;
    let delta = alg.build_delta();
    let (rule, dozens) = alg.build_dozens(&delta)?;
    let list: Vec<Value> = dozens
        .iter()
        .map(|d| {
            let members: Vec<usize> = (0..DELTA).filter(|i| d.members >> i & 1 == 1).collect();
            json!({ "involution": d.involution.0, "members": members })
        })
        .collect();
    Ok(json!({
        "rule": format!("{rule:?}"),
        "count": dozens.len(),
        "rank": dozen_rank(&dozens),
        "dozens": list,
    }))
}

fn aut(args: &GeometryArgs) -> Result<Value> {
    let geo = report::load_geometry(args.cache_dir.as_deref(), args.search_budget)?;
    let generators: Vec<Vec<u8>> = geo.group.generators().iter().map(|g| g.images().to_vec()).collect();
    Ok(json!({
        "order": geo.automorphisms.len(),
        "transitive_on_delta": perm::point_orbit(&geo.perms, 0).count_ones() as usize == DELTA,
        "all_even": geo.perms.iter().all(|p| !p.is_odd()),
        "delta_generators": generators,
    }))
}

fn orbits_cmd(args: &GeometryArgs, k: usize, check_burnside: bool, parallel: bool, list: bool) -> Result<Value> {
    let geo = report::load_geometry(args.cache_dir.as_deref(), args.search_budget)?;
    let records = report::load_orbits(args.cache_dir.as_deref(), &geo.perms, k, parallel)?;
    let sum: u128 = records.iter().map(|o| o.size as u128).sum();
    let mut v = json!({
        "k": k,
        "orbits": records.len(),
        "size_sum": sum.to_string(),
        "subsets": orbits::binomial(DELTA as u64, k as u64).to_string(),
    });
    if check_burnside {
        let burnside = orbits::check_enumeration(&geo.perms, k, &records)?;
        let admissible = orbits::admissible_burnside_count(&geo.perms, geo.sign.dozen_masks(), k)?;
        v["burnside"] = json!(burnside.to_string());
        v["admissible_burnside"] = json!(admissible.to_string());
    }
    if list {
        v["records"] = records
            .iter()
            .map(|o| json!({ "rep": format!("{:#09x}", o.rep), "size": o.size, "complement": o.complement }))
            .collect();
    }
    Ok(v)
}

fn invariants_cmd(
    args: &GeometryArgs,
    lift: Lift,
    lift_budget: usize,
    rho_coeffs: Option<&Path>,
    parallel: bool,
) -> Result<Value> {
    let coeffs = match rho_coeffs {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            invariants::parse_rho_coefficients(&text)?
        }
        None => report::default_rho_coefficients(),
    };
    let geo = report::load_geometry(args.cache_dir.as_deref(), args.search_budget)?;
    let mut records = report::load_orbits(args.cache_dir.as_deref(), &geo.perms, DELTA / 2, parallel)?;
    let group = geo.monomial_group(lift.into(), lift_budget)?;
    let parity = invariants::sign_parity_filter(&mut records, &geo.sign, &geo.perms);
    let outcome = invariants::full_invariance_filter(&mut records, &group)?;
    let mut v = json!({
        "lift": group.mode(),
        "lift_report": group.report(),
        "sign_parity_orbits": parity,
        "invariants": outcome.invariants.len(),
        "approximate": outcome.approximate,
    });
    if !outcome.approximate {
        let pairs = invariants::complement_pairs(&outcome.invariants, &records)?;
        let rho = invariants::build_rho(&outcome.invariants, &records, &coeffs)?;
        let gens = group.generators();
        v["complement_pairs"] = json!(pairs.len());
        v["nu_fixed"] = json!(invariants::check_nu_invariance(&group).is_ok());
        v["rho_terms"] = json!(rho.len());
        v["rho_fixed"] = json!(rho.first_moved_by(&gens).is_none());
        v["involutions"] = json!(group.involution_count());
    }
    Ok(v)
}

fn character_cmd(max_half: u32, max_charge: i64, format: TableOutput) -> Result<String> {
    let series = character::character(max_half)?;
    let format = match format {
        TableOutput::Table => TableFormat::Table,
        TableOutput::Json => TableFormat::Json,
        TableOutput::Csv => TableFormat::Csv,
    };
    Ok(character::render(&series, max_half, max_charge, format))
}

fn axioms(pairs: u32, max_half: u32) -> Result<(Value, bool)> {
    let checks = fermion::axiom_suite(pairs, max_half)?;
    let passed = checks.iter().all(|c| c.passed);
    Ok((
        json!({
            "pairs": pairs,
            "max_degree": character::degree_label(max_half),
            "passed": passed,
            "checks": checks,
        }),
        passed,
    ))
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Classify { elements } => print_json(&classify(elements)?)?,
        Command::Delta => print_json(&delta()?)?,
        Command::Dozens => print_json(&dozens()?)?,
        Command::Aut(args) => print_json(&aut(&args)?)?,
        Command::Orbits {
            geometry,
            k,
            check_burnside,
            parallel,
            list,
        } => print_json(&orbits_cmd(&geometry, k, check_burnside, parallel, list)?)?,
        Command::Invariants {
            geometry,
            lift,
            lift_budget,
            rho_coeffs,
            parallel,
        } => print_json(&invariants_cmd(&geometry, lift, lift_budget, rho_coeffs.as_deref(), parallel)?)?,
        Command::Character {
            max_degree,
            max_charge,
            format,
        } => print!("{}", character_cmd(max_degree, max_charge, format)?),
        Command::Axioms { pairs, max_degree } => {
            let (v, passed) = axioms(pairs, max_degree)?;
            print_json(&v)?;
            if !passed {
                return Ok(ExitCode::from(1));
            }
        }
        Command::VerifyAll {
            cache_dir,
            format,
            k,
            max_degree,
            sequential,
            lift,
            lift_budget,
            rho_coeffs,
            no_timings,
        } => {
            let config = Config {
                k,
                max_half_degree: max_degree,
                parallel: !sequential,
                cache_dir,
                rho_coeffs,
                lift: lift.into(),
                lift_budget,
                timings: !no_timings,
                ..Config::default()
            };
            let report = report::run_verify_all(&config)?;
            let format = match format {
                ReportOutput::Json => Format::Json,
                ReportOutput::Csv => Format::Csv,
                ReportOutput::Text => Format::Text,
            };
            std::io::stdout().lock().write_all(&report::emit(&report, format)?)?;
            return Ok(ExitCode::from(report.exit_code() as u8));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
