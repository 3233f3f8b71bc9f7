//! Command-line toolkit: ingest firm CSVs, decompose three-way synergy by
//! region, profile datasets, correlate contribution series against external
//! indicators, and generate synthetic test corpora.
//!
//! Exit codes: 0 success, 1 data error, 2 configuration error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use synergy_core::correlate::rank_correlations;
use synergy_core::error::{Error, Result};
use synergy_core::ingest::{
    dataset_profile, issues_to_csv, parse_records, profile_to_csv, ColumnSchema,
};
use synergy_core::pipeline::{
    read_series, run_pipeline, AnalysisConfig, GroupingLevel, OutputFormat, SectorFilter,
};
use synergy_core::report::{format_millibits, parse_report_json};
use synergy_core::synth::{generate_dataset, records_to_csv_string, PopulationSpec};
use synergy_core::taxonomy::{GeoHierarchy, SizeClassScheme};

#[derive(Parser)]
#[command(
    name = "synergy",
    about = "Three-way synergy analysis of firm records (geography x size x technology)",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SectorArg {
    All,
    /// High-tech plus medium-high-tech manufacturing
    HighMediumTech,
    /// Knowledge-intensive services
    Kis,
    /// The high-tech subset of knowledge-intensive services
    HighTechServices,
}

impl From<SectorArg> for SectorFilter {
    fn from(value: SectorArg) -> SectorFilter {
        match value {
            SectorArg::All => SectorFilter::All,
            SectorArg::HighMediumTech => SectorFilter::HighMediumTech,
            SectorArg::Kis => SectorFilter::Kis,
            SectorArg::HighTechServices => SectorFilter::HighTechServices,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Csv,
    Json,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Input firm CSV file(s)
    #[arg(long, required = true, num_args = 1..)]
    input: Vec<PathBuf>,
    /// Schema file mapping logical fields to column headers
    #[arg(long)]
    schema: Option<PathBuf>,
    /// Inclusive year range, e.g. 2008-2010 or a single year
    #[arg(long)]
    years: Option<String>,
    /// Grouping level: 1 = province, 2 = prefecture
    #[arg(long, default_value_t = 1)]
    level: u8,
    /// Technology-axis granularity in NACE digits
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=4))]
    digits: u8,
    /// Sector filter applied before the decomposition
    #[arg(long, value_enum, default_value_t = SectorArg::All)]
    sector: SectorArg,
    /// Drop groups with fewer records than this (1 = keep everything)
    #[arg(long, default_value_t = 1)]
    min_group_size: u64,
    /// Output directory
    #[arg(long)]
    out: PathBuf,
    /// Report formats to write (default: all three)
    #[arg(long, value_enum, num_args = 1.., value_delimiter = ',')]
    format: Option<Vec<FormatArg>>,
    /// Worker threads for per-group computations
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline and write report + region export + audit
    Analyze(AnalyzeArgs),
    /// Sector contributions as a share of a baseline run, per group and total
    Compare {
        /// report.json of the baseline (usually all-sector) run
        #[arg(long)]
        baseline: PathBuf,
        /// report.json of the filtered (sector) run
        #[arg(long)]
        sector: PathBuf,
        /// Write CSV here instead of printing a text table
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse and validate a firm CSV, writing profile and issue listings
    Profile {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        schema: Option<PathBuf>,
        /// Optional inclusive year range filter, e.g. 2008-2010
        #[arg(long)]
        years: Option<String>,
        /// Output directory
        #[arg(long)]
        out: PathBuf,
    },
    /// Pearson and Spearman correlation of two labeled series
    Correlate {
        /// CSV with label,value rows
        #[arg(long)]
        a: PathBuf,
        /// CSV with label,value rows
        #[arg(long)]
        b: PathBuf,
    },
    /// Generate a synthetic firm CSV from a population spec
    Synthgen {
        /// TOML population spec
        #[arg(long)]
        spec: PathBuf,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_years(text: &str) -> Result<std::ops::RangeInclusive<i32>> {
    let bad = |t: &str| Error::Config(format!("bad year range {t:?}; expected YYYY or YYYY-YYYY"));
    match text.split_once('-') {
        Some((a, b)) => {
            let start: i32 = a.trim().parse().map_err(|_| bad(text))?;
            let end: i32 = b.trim().parse().map_err(|_| bad(text))?;
            if start > end {
                return Err(bad(text));
            }
            Ok(start..=end)
        }
        None => {
            let year: i32 = text.trim().parse().map_err(|_| bad(text))?;
            Ok(year..=year)
        }
    }
}

fn run_analyze(args: AnalyzeArgs) -> Result<()> {
    let mut config = AnalysisConfig::new(args.input, args.out);
    config.schema = args.schema;
    if let Some(years) = &args.years {
        config.years = parse_years(years)?;
    }
    config.level = GroupingLevel::from_number(args.level)?;
    config.digits = args.digits as usize;
    config.sector = args.sector.into();
    config.min_group_size = args.min_group_size;
    if let Some(formats) = args.format {
        config.formats = formats
            .into_iter()
            .map(|f| match f {
                FormatArg::Text => OutputFormat::Text,
                FormatArg::Csv => OutputFormat::Csv,
                FormatArg::Json => OutputFormat::Json,
            })
            .collect();
    }
    config.threads = args.threads;

    let outcome = run_pipeline(&config)?;
    println!(
        "{}",
        synergy_core::report::render_table(&outcome.report, synergy_core::report::TableStyle::Text)
    );
    println!(
        "n used: {} of {} parsed rows",
        outcome.audit.n_used, outcome.audit.parsed_rows
    );
    for (reason, count) in &outcome.audit.exclusions {
        println!("excluded ({reason}): {count}");
    }
    for path in &outcome.written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn run_compare(baseline: PathBuf, sector: PathBuf, out: Option<PathBuf>) -> Result<()> {
    let base = parse_report_json(&fs::read_to_string(&baseline)?)?;
    let filtered = parse_report_json(&fs::read_to_string(&sector)?)?;

    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record([
        "group",
        "baseline_delta_t_mbit",
        "sector_delta_t_mbit",
        "sector_share_pct",
    ])
    .expect("csv");
    let percent = |part: f64, whole: f64| {
        if whole != 0.0 {
            format!("{:.1}", (1000.0 * part / whole).round() / 10.0 + 0.0)
        } else {
            "-".to_string()
        }
    };
    for group in &base.groups {
        // a group absent from the sector run simply has no matching firms
        let (sector_delta, share) = match filtered.groups.iter().find(|g| g.label == group.label)
        {
            Some(other) => (
                format_millibits(other.delta_t.millibits()),
                percent(other.delta_t.millibits(), group.delta_t.millibits()),
            ),
            None => ("-".to_string(), "-".to_string()),
        };
        w.write_record([
            group.label.clone(),
            format_millibits(group.delta_t.millibits()),
            sector_delta,
            share,
        ])
        .expect("csv");
    }
    // two distinct aggregate shares: summed group contributions vs pooled totals
    w.write_record([
        "(share of summed contributions)".to_string(),
        format_millibits(base.sum_delta_t.millibits()),
        format_millibits(filtered.sum_delta_t.millibits()),
        percent(
            filtered.sum_delta_t.millibits(),
            base.sum_delta_t.millibits(),
        ),
    ])
    .expect("csv");
    w.write_record([
        "(share of pooled totals)".to_string(),
        format_millibits(base.total_t.millibits()),
        format_millibits(filtered.total_t.millibits()),
        percent(filtered.total_t.millibits(), base.total_t.millibits()),
    ])
    .expect("csv");
    let csv_text = String::from_utf8(w.into_inner().expect("csv")).expect("utf8");

    match out {
        Some(path) => {
            fs::write(&path, csv_text)?;
            println!("wrote {}", path.display());
        }
        None => print!("{csv_text}"),
    }
    Ok(())
}

fn run_profile(
    input: PathBuf,
    schema: Option<PathBuf>,
    years: Option<String>,
    out: PathBuf,
) -> Result<()> {
    let schema = match schema {
        Some(path) => ColumnSchema::from_path(&path)?,
        None => ColumnSchema::canonical(),
    };
    let file = fs::File::open(&input)?;
    let (records, issues) = parse_records(file, &schema)?;
    let (records, dropped) = match years {
        Some(text) => {
            let range = parse_years(&text)?;
            synergy_core::ingest::filter_window(records, &range)
        }
        None => (records, 0),
    };
    let profile = dataset_profile(
        &records,
        &issues,
        &SizeClassScheme::bundled(),
        &GeoHierarchy::bundled(),
    );

    fs::create_dir_all(&out)?;
    let profile_csv = out.join("profile.csv");
    fs::write(&profile_csv, profile_to_csv(&profile))?;
    let profile_json = out.join("profile.json");
    let mut json = serde_json::to_string_pretty(&profile)?;
    json.push('\n');
    fs::write(&profile_json, json)?;
    let issues_csv = out.join("issues.csv");
    fs::write(&issues_csv, issues_to_csv(&issues))?;

    println!(
        "parsed {} rows: {} included, {} excluded, {} dropped by year filter",
        profile.included + profile.excluded_total() + dropped,
        profile.included,
        profile.excluded_total(),
        dropped
    );
    for path in [profile_csv, profile_json, issues_csv] {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn run_correlate(a: PathBuf, b: PathBuf) -> Result<()> {
    let series_a = read_series(fs::File::open(&a)?)?;
    let series_b = read_series(fs::File::open(&b)?)?;
    let c = rank_correlations(&series_a, &series_b)?;
    println!("n common labels: {}", c.n);
    println!("pearson r:    {:.4}", c.pearson);
    println!("spearman rho: {:.4}", c.spearman);
    Ok(())
}

fn run_synthgen(spec: PathBuf, out: PathBuf) -> Result<()> {
    let spec = PopulationSpec::from_path(&spec)?;
    let records = generate_dataset(&spec)?;
    fs::write(&out, records_to_csv_string(&records)?)?;
    println!("wrote {} records to {}", records.len(), out.display());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Analyze(args) => run_analyze(args),
        Command::Compare {
            baseline,
            sector,
            out,
        } => run_compare(baseline, sector, out),
        Command::Profile {
            input,
            schema,
            years,
            out,
        } => run_profile(input, schema, years, out),
        Command::Correlate { a, b } => run_correlate(a, b),
        Command::Synthgen { spec, out } => run_synthgen(spec, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error}");
            ExitCode::from(error.exit_code() as u8)
        }
    }
}
