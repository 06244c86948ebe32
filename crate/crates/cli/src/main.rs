use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser};
use twobridge_hfk_cli::{
    batch, render, render_batch_tsv, run, CacheStatus, CliError, Flavor, Format, Input, RunRequest,
};

/// Knot Floer homology of two-bridge knots in their double branched covers.
#[derive(Debug, Parser)]
#[command(name = "hfk", version)]
#[command(group(ArgGroup::new("input").required(true).args(["p", "crossings", "batch"])))]
struct Args {
    /// Odd determinant p >= 3.
    #[arg(long, requires = "q")]
    p: Option<i64>,
    /// Odd q coprime to p; any representative mod p.
    #[arg(long, allow_negative_numbers = true, requires = "p")]
    q: Option<i64>,
    /// Crossing numbers of a two-bridge presentation.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    crossings: Option<Vec<i64>>,
    /// Flavors to compute; graded and filtered are always included.
    #[arg(long, value_enum, value_delimiter = ',')]
    flavor: Vec<Flavor>,
    /// Truncation order N of the minus flavor (default 2p).
    #[arg(long)]
    truncate: Option<u32>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Cross-check against the brute-force oracle (small p only).
    #[arg(long)]
    validate: bool,
    /// Tabulate every knot class with odd p <= P_MAX.
    #[arg(long, value_name = "P_MAX")]
    batch: Option<i64>,
    /// Result cache directory.
    #[arg(long, env = "HFK_CACHE_DIR")]
    cache: Option<PathBuf>,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main_inner(args: Args) -> Result<String, CliError> {
    if let Some(p_max) = args.batch {
        if args.validate {
            return Err(CliError::InvalidInput(
                "--validate is not available with --batch".into(),
            ));
        }
        let reports = batch(p_max, &args.flavor, args.truncate, args.cache.as_deref())?;
        return Ok(match args.format {
            Format::Json => {
                serde_json::to_string_pretty(&reports).expect("reports serialize") + "\n"
            }
            Format::Tsv | Format::Text => render_batch_tsv(&reports),
        });
    }
    let input = match (args.p, args.q, args.crossings) {
        (Some(p), Some(q), None) => Input::Params { p, q },
        (None, None, Some(c)) => Input::Crossings(c),
        _ => {
            return Err(CliError::InvalidInput(
                "give either --p and --q or --crossings".into(),
            ))
        }
    };
    let request = RunRequest {
        input,
        flavors: args.flavor,
        truncation: args.truncate,
        validate: args.validate,
        cache_dir: args.cache,
    };
    let (report, status) = run(&request)?;
    if status == CacheStatus::Hit {
        eprintln!("served from cache");
    }
    Ok(render(&report, args.format))
}

fn main() -> ExitCode {
    let args = Args::parse();
    let out = args.out.clone();
    let result = main_inner(args).and_then(|text| match &out {
        Some(path) => std::fs::write(path, text).map_err(CliError::from),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hfk: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
