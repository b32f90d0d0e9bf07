use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use perfect_arrays::construction::ArrayFamily;
use perfect_arrays::correlation::{
    verify_perfect, xcorr_auto, zcz_report, CorrelationResult, Threshold,
};
use perfect_arrays::formats::{
    self, array_to_json, correlation_to_json, sequence_to_json, zcz_report_to_json,
};
use perfect_arrays::presets;
use perfect_arrays::tooling::{parse_block_spec, parse_k_spec, BaseSpec, BlockSpec, JobConfig};
use perfect_arrays::{xcorr_nd, Error, PerfectArray, Sequence, DEFAULT_TOLERANCE};

/// Exit status: 0 verified, 1 a property check failed, 2 usage or I/O error.
enum Failure {
    Verification(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        match err {
            Error::Precondition(_) => Failure::Verification(err.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type CliResult = Result<(), Failure>;

#[derive(Parser)]
#[command(
    name = "perfect-arrays",
    version,
    about = "Block-circulant N-dimensional perfect arrays and ZCZ families"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct arrays and write them as JSON files.
    Gen(GenArgs),
    /// Check perfectness of one array, or the pairwise census of several.
    Verify(VerifyArgs),
    /// Correlate two arrays and report the non-zero values.
    Correlate(CorrelateArgs),
    /// Rebuild the bundled worked examples and check their properties.
    Report(ReportArgs),
}

#[derive(Args)]
struct ThresholdArgs {
    /// Absolute chop tolerance.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    /// Additional threshold as a fraction of the cell count; the larger one applies.
    #[arg(long)]
    relative: Option<f64>,
}

impl ThresholdArgs {
    fn threshold(&self) -> Threshold {
        let t = Threshold::absolute(self.tol);
        match self.relative {
            Some(r) => t.with_relative(r),
            None => t,
        }
    }
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("base_source").required(true).args(["frank", "q16", "base"]))]
struct GenArgs {
    /// Use the Frank sequence over r roots of unity as the base.
    #[arg(long, value_name = "R")]
    frank: Option<u32>,
    /// Use the bundled 16-entry quaternion sequence as the base.
    #[arg(long)]
    q16: bool,
    /// Read the base sequence from a JSON file.
    #[arg(long, value_name = "FILE")]
    base: Option<PathBuf>,
    /// Block as transforms of the base, e.g. "id,dec:3" or "dec:2,dec:5,dec:7".
    #[arg(long, default_value = "id", conflicts_with = "block_file")]
    block: String,
    /// Read block sequences from JSON files instead (repeatable, in order).
    #[arg(long, value_name = "FILE")]
    block_file: Vec<PathBuf>,
    /// Family parameter: "0", "1..9" or "1,4,7".
    #[arg(long)]
    k: String,
    /// Total number of dimensions N (at least 2).
    #[arg(long)]
    dims: usize,
    /// Output file (single k, ending in .json) or directory.
    #[arg(long, short, default_value = ".")]
    out: PathBuf,
    /// Also write the base sequence to this file.
    #[arg(long, value_name = "FILE")]
    save_base: Option<PathBuf>,
    /// Skip the perfectness and AOP checks on the inputs.
    #[arg(long)]
    no_strict: bool,
    /// Tolerance for the input checks.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
}

#[derive(Args)]
struct VerifyArgs {
    /// Array files.
    #[arg(required = true)]
    paths: Vec<PathBuf>,
    #[command(flatten)]
    threshold: ThresholdArgs,
    /// Expected block size d; distinct pairs must then have exactly d² non-zero values.
    #[arg(long)]
    d: Option<usize>,
    /// Use the direct correlation route for roots arrays.
    #[arg(long)]
    direct: bool,
}

#[derive(Args)]
struct CorrelateArgs {
    /// Left array file S.
    a: PathBuf,
    /// Right array file T, conjugated and shifted.
    b: PathBuf,
    #[command(flatten)]
    threshold: ThresholdArgs,
    /// Use the transform-accelerated route (roots arrays only).
    #[arg(long)]
    fast: bool,
    /// Write the sparse JSON report here.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// Check only a few ternary family pairs instead of all 81.
    #[arg(long)]
    quick: bool,
    /// Print the binary and quaternion arrays.
    #[arg(long)]
    show: bool,
    /// Write the ternary family pairwise report as JSON.
    #[arg(long, value_name = "FILE")]
    json: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(args) => gen(args),
        Command::Verify(args) => verify(args),
        Command::Correlate(args) => correlate(args),
        Command::Report(args) => report(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn shape(array: &PerfectArray) -> String {
    array
        .dims()
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join("x")
}

fn gen(args: GenArgs) -> CliResult {
    let base = match (args.frank, args.q16, args.base) {
        (Some(r), _, _) => BaseSpec::Frank(r),
        (_, true, _) => BaseSpec::Q16,
        (_, _, Some(path)) => BaseSpec::File(path),
        _ => unreachable!("clap enforces one base source"),
    };
    let block = if args.block_file.is_empty() {
        BlockSpec::Transforms(parse_block_spec(&args.block)?)
    } else {
        BlockSpec::Files(args.block_file)
    };
    let job = JobConfig {
        base,
        block,
        ks: parse_k_spec(&args.k)?,
        dims: args.dims,
        tol: args.tol,
        strict: !args.no_strict,
        out: args.out,
    };
    let (base, block, family) = job.build()?;
    if job.strict {
        println!(
            "inputs: base perfect with AOP for d = {}, {} block sequences perfect",
            block.d(),
            block.d()
        );
    }
    if let Some(dir) = job.output_dir() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir)
                .map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
        }
    }
    if let Some(path) = &args.save_base {
        formats::write_text(path, &sequence_to_json(&base))?;
    }
    for member in &family.members {
        let path = job.output_path(member.k);
        formats::write_text(&path, &array_to_json(&member.array))?;
        println!(
            "k={}: {} array over {} -> {}",
            member.k,
            shape(&member.array),
            member.array.domain(),
            path.display()
        );
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> CliResult {
    let threshold = args.threshold.threshold();
    let arrays = args
        .paths
        .iter()
        .map(formats::read_array)
        .collect::<Result<Vec<_>, _>>()?;
    let mut all_ok = true;
    for (path, array) in args.paths.iter().zip(&arrays) {
        let verdict = verify_perfect(array, threshold, !args.direct)?;
        let mut line = format!(
            "{}: perfect: {}, nonzero autocorrelation values: {}",
            path.display(),
            if verdict.perfect { "yes" } else { "no" },
            verdict.census.count
        );
        if let Some(shift) = &verdict.first_failure {
            line.push_str(&format!(", first failing shift: {shift}"));
        }
        println!("{line}");
        all_ok &= verdict.perfect;
    }
    if arrays.len() > 1 {
        let family = ArrayFamily::from_arrays(arrays, args.d)?;
        let report = zcz_report(&family, threshold)?;
        println!(
            "pairwise nonzero counts ({} x {}):",
            report.members, report.members
        );
        for row in report.counts().chunks(report.members) {
            println!(
                "  {}",
                row.iter().map(|c| format!("{c:>4}")).collect::<String>()
            );
        }
        if let (Some(d2), Some(ratio)) = (report.d_squared, report.ratio) {
            println!("expected d² = {d2}, ratio d²/M = {ratio:.3e}");
        }
        all_ok &= report.holds();
    }
    if all_ok {
        Ok(())
    } else {
        Err(Failure::Verification(
            "expected correlation properties do not hold".into(),
        ))
    }
}

fn print_census(res: &CorrelationResult) {
    let census = res.nonzero_census();
    println!("nonzero values: {}", census.count);
    for (shift, value) in &census.entries {
        println!("  {shift} {value}");
    }
}

fn correlate(args: CorrelateArgs) -> CliResult {
    let a = formats::read_array(&args.a)?;
    let b = formats::read_array(&args.b)?;
    let threshold = args.threshold.threshold();
    let res = if args.fast {
        perfect_arrays::xcorr_nd_fast(&a, &b, threshold)?
    } else {
        xcorr_nd(&a, &b, threshold)?
    };
    print_census(&res);
    if let Some(path) = &args.out {
        formats::write_text(path, &correlation_to_json(&res))?;
    }
    Ok(())
}

fn report(args: ReportArgs) -> CliResult {
    let threshold = Threshold::default();
    let mut failures = Vec::new();
    let mut expect = |name: &str, ok: bool, detail: String| {
        println!("[{}] {name}: {detail}", if ok { "ok" } else { "FAIL" });
        if !ok {
            failures.push(name.to_string());
        }
    };

    let binary = presets::binary_array()?;
    let census = xcorr_nd(&binary, &binary, threshold)?.nonzero_census();
    expect(
        "binary 4x4x4x4 array, frank(2) with {id, dec:3}, k=0",
        census.count == 1,
        format!("nonzero autocorrelation values: {}", census.count),
    );
    if args.show {
        print_binary(&binary);
    }

    let quaternion = presets::quaternion_array()?;
    let census = xcorr_nd(&quaternion, &quaternion, threshold)?.nonzero_census();
    expect(
        "quaternion 16x16 array, q16 with {id, dec:3, rot:2, id}, k=0",
        census.count == 1,
        format!("nonzero autocorrelation values: {}", census.count),
    );
    if args.show {
        print_quaternion(&quaternion);
    }

    let pair = presets::ternary_family_for(&[1, 2])?;
    let census =
        xcorr_auto(&pair.members[0].array, &pair.members[1].array, threshold)?.nonzero_census();
    let values: Vec<String> = census.entries.iter().map(|(_, v)| v.to_string()).collect();
    expect(
        "ternary 9x9x9x9 pair k=(1,2)",
        census.count == 9,
        format!("nonzero values: {{{}}}", values.join(", ")),
    );

    let family_threshold = threshold.with_relative(1e-8);
    let ks: Vec<i64> = if args.quick {
        vec![1, 2, 4, 7, 9]
    } else {
        (1..=9).collect()
    };
    let family = presets::ternary_family_for(&ks)?;
    let report = zcz_report(&family, family_threshold)?;
    let counts: Vec<String> = report.counts().iter().map(usize::to_string).collect();
    expect(
        &format!("ternary family ordered-pair census, k = {ks:?}"),
        report.holds(),
        format!("{{{}}}", counts.join(", ")),
    );
    if let Some(path) = &args.json {
        formats::write_text(path, &zcz_report_to_json(&report))?;
    }

    let q = Sequence::from(presets::q16());
    let aop = q.aop_check(4, DEFAULT_TOLERANCE)?;
    expect(
        "q16 AOP for d = 4",
        aop.holds,
        format!("{} failing conditions", aop.failures.len()),
    );

    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(failures.join("; ")))
    }
}

fn print_binary(array: &PerfectArray) {
    let dims = array.dims();
    for j in 0..dims[0] {
        for i0 in 0..dims[1] {
            println!("  slice j={j}, i0={i0}:");
            for i1 in 0..dims[2] {
                let row: Vec<String> = (0..dims[3])
                    .map(|i2| array.exponent_at(&[j, i0, i1, i2]).unwrap().to_string())
                    .collect();
                println!("    {}", row.join(" "));
            }
        }
    }
}

fn print_quaternion(array: &PerfectArray) {
    let dims = array.dims();
    for j in 0..dims[0] {
        let row: Vec<String> = (0..dims[1])
            .map(|i| format!("{:>2}", array.quaternion_at(&[j, i]).unwrap().to_string()))
            .collect();
        println!("  {}", row.join(" "));
    }
}
