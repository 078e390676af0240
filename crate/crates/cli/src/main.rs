//! `tqft`: quantize surface invariants, check almost-Frobenius algebras,
//! count finite-group representations and reproduce the SL₂ recurrence.
//!
//! Exit status: 0 ok, 1 input error, 2 insufficient data, 3 internal
//! cross-check failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};

use tqft_core::document::{AlgebraDocument, AnyAlgebra, AnyReport, AnySequence, SequenceDocument};
use tqft_core::exactmath::{Field, FieldKind};
use tqft_core::frobenius::{AlmostFrobeniusAlgebra, Verdict};
use tqft_core::quantize::{quantization_report, InvariantSequence, ReportStatus};
use tqft_core::repvar::{self, brute_force_unbounded, FiniteGroup, SurfaceCounter};
use tqft_core::sl2data::{self, Sl2Error};

/// Largest tuple count `--brute-force` will enumerate.
const CLI_BRUTE_FORCE_LIMIT: u128 = 100_000_000;

#[derive(Parser, Debug)]
#[command(name = "tqft", version, about = "Exact quantization of surface invariants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Extract the minimal almost-Frobenius algebra from a sequence file.
    Quantize {
        #[arg(long)]
        input: PathBuf,
        /// Predict up to this genus.
        #[arg(long)]
        predict: Option<usize>,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Field override: Q or Qq.
        #[arg(long)]
        field: Option<FieldKind>,
    },
    /// Test whether an almost-Frobenius algebra extends to a monoidal TQFT.
    CheckMonoidal {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Count representations of surface groups into a finite group.
    Repvar {
        /// A group file or `builtin:NAME` (C<n>, D<n>, S3, S4, Q8).
        #[arg(long)]
        group: String,
        #[arg(long)]
        genus: Option<usize>,
        /// Number of basepoints.
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        points: Option<u32>,
        /// Also enumerate all tuples and compare.
        #[arg(long)]
        brute_force: bool,
        /// Quantize the counts for genus 0 up to this bound.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        quantize_upto: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover the SL₂(ℂ) recurrence and cross-check the closed formula.
    Sl2 {
        #[arg(long, value_parser = clap::value_parser!(u64).range(12..))]
        max_genus: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also print the handle matrix multiplied by q^3 - q.
        #[arg(long)]
        rescaled: bool,
    },
}

enum Failure {
    Input(anyhow::Error),
    Insufficient,
    CrossCheck(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Quantize {
            input,
            predict,
            out,
            field,
        } => cmd_quantize(&input, predict, out.as_deref(), field),
        Command::CheckMonoidal { algebra } => cmd_check_monoidal(&algebra),
        Command::Repvar {
            group,
            genus,
            points,
            brute_force,
            quantize_upto,
            out,
        } => cmd_repvar(&group, genus, points, brute_force, quantize_upto, out.as_deref()),
        Command::Sl2 {
            max_genus,
            out,
            rescaled,
        } => cmd_sl2(max_genus as usize, out.as_deref(), rescaled),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Insufficient) => ExitCode::from(2),
        Err(Failure::CrossCheck(e)) => {
            eprintln!("cross-check failed: {e:#}");
            ExitCode::from(3)
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn write_report(path: Option<&Path>, report: &AnyReport) -> anyhow::Result<()> {
    if let Some(path) = path {
        fs::write(path, report.to_json()).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn report_for<F: Field>(seq: &InvariantSequence<F>, predict: Option<usize>) -> anyhow::Result<tqft_core::quantize::QuantizationReport<F>> {
    quantization_report(seq, predict).map_err(|e| anyhow!(e))
}

fn print_and_save(report: AnyReport, predict: Option<usize>, out: Option<&Path>) -> Outcome {
    println!("{}", report.summary());
    let (status, certainty, predictions) = match &report {
        AnyReport::Q(r) => (r.status, r.certainty, prediction_lines(&r.predictions, predict)),
        AnyReport::Qq(r) => (r.status, r.certainty, prediction_lines(&r.predictions, predict)),
    };
    if let Some(c) = certainty {
        println!("certainty: {c:?}");
    }
    for line in predictions {
        println!("{line}");
    }
    write_report(out, &report)?;
    if status == ReportStatus::InsufficientData {
        return Err(Failure::Insufficient);
    }
    Ok(())
}

fn prediction_lines<F: Field>(preds: &[tqft_core::quantize::Prediction<F>], predict: Option<usize>) -> Vec<String> {
    match predict {
        Some(_) => preds.iter().map(|p| format!("genus {}: {}", p.genus, p.value)).collect(),
        None => Vec::new(),
    }
}

fn cmd_quantize(input: &Path, predict: Option<usize>, out: Option<&Path>, field: Option<FieldKind>) -> Outcome {
    let doc = SequenceDocument::from_json(&read(input)?).context("parsing sequence document")?;
    let seq = doc.parse(field).context("parsing sequence values")?;
    let report = match &seq {
        AnySequence::Q(s) => AnyReport::Q(report_for(s, predict)?),
        AnySequence::Qq(s) => AnyReport::Qq(report_for(s, predict)?),
    };
    print_and_save(report, predict, out)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn describe_algebra<F: Field>(alg: &AlmostFrobeniusAlgebra<F>) {
    let v = alg.check_monoidality();
    println!("dim: {}", alg.dim());
    println!("wide: {}", yes_no(v.wide));
    if v.wide {
        println!("condition 1 (nondegenerate pairing): {}", yes_no(v.gram_nondegenerate));
        println!("condition 2 (handle element is v1): {}", yes_no(v.condition_two));
    }
    println!("euler_check: {}", yes_no(v.euler_check));
    if let Some(w) = &v.witness {
        let show = |x: &[F]| x.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
        println!(
            "witness: b = ({}), handle image ({}), Frobenius image ({})",
            show(&w.basis_vector),
            show(&w.handle_image),
            show(&w.frobenius_image)
        );
    }
    println!("verdict: {:?}", v.verdict);
    debug_assert!(v.verdict != Verdict::Monoidal || v.is_monoidal());
}

fn cmd_check_monoidal(path: &Path) -> Outcome {
    let doc = AlgebraDocument::from_json(&read(path)?).context("parsing algebra document")?;
    match doc.parse().context("building algebra")? {
        AnyAlgebra::Q(a) => describe_algebra(&a),
        AnyAlgebra::Qq(a) => describe_algebra(&a),
    }
    Ok(())
}

fn load_group(group_arg: &str) -> anyhow::Result<FiniteGroup> {
    match group_arg.strip_prefix("builtin:") {
        Some(name) => Ok(repvar::builtin(name)?),
        None => {
            let src = read(Path::new(group_arg))?;
            Ok(repvar::parse_group_file(&src, repvar::DEFAULT_CLOSURE_BOUND).with_context(|| format!("group file {group_arg}"))?)
        }
    }
}

fn cmd_repvar(
    group_arg: &str,
    genus: Option<usize>,
    points: Option<u32>,
    brute_force: bool,
    quantize_upto: Option<u64>,
    out: Option<&Path>,
) -> Outcome {
    let group = load_group(group_arg)?;
    if genus.is_none() && quantize_upto.is_none() {
        return Err(Failure::Input(anyhow!("nothing to do: pass --genus and/or --quantize-upto")));
    }
    let counter = SurfaceCounter::new(&group);
    let n = group.order();
    let c = counter.classes().class_count();
    println!("group: order {n}, {c} conjugacy classes");

    let twist = counter.twist();
    let expected_trace = num_bigint::BigInt::from(n * c);
    if twist.trace != expected_trace || twist.idempotent_up_to_order == Some(false) {
        return Err(Failure::CrossCheck(anyhow!("twist operator identities fail for this group")));
    }
    println!(
        "twist trace: {} = |G|·c ({:?}); commuting pairs: {}",
        twist.trace,
        twist.provenance,
        counter.commuting_pairs()
    );
    if counter.commuting_pairs() != twist.trace {
        return Err(Failure::CrossCheck(anyhow!("commuting pairs differ from the twist trace")));
    }

    if let Some(g) = genus {
        let count = counter.genus_count(g);
        println!("genus {g}: {count}");
        if brute_force {
            let tuples = (n as u128).checked_pow(2 * g as u32);
            if tuples.is_none_or(|t| t > CLI_BRUTE_FORCE_LIMIT) {
                return Err(Failure::Input(anyhow!(
                    "brute force over |G|^{} tuples exceeds {CLI_BRUTE_FORCE_LIMIT}",
                    2 * g
                )));
            }
            let oracle = brute_force_unbounded(&group, g);
            println!("brute force: {oracle}");
            if num_bigint::BigInt::from(oracle) != count {
                return Err(Failure::CrossCheck(anyhow!("convolution {count} ≠ brute force {oracle}")));
            }
        }
        if let Some(k) = points {
            println!("genus {g}, {k} points: {}", counter.pointed_count(g, k as usize));
        }
    }

    if let Some(m) = quantize_upto {
        let seq = counter.sequence(m as usize);
        let report = AnyReport::Q(report_for(&seq, None)?);
        return print_and_save(report, None, out);
    }
    Ok(())
}

fn cmd_sl2(max_genus: usize, out: Option<&Path>, rescaled: bool) -> Outcome {
    let result = match sl2data::sl2_pipeline(max_genus) {
        Ok(r) => r,
        Err(e @ Sl2Error::MaxGenusTooSmall(_)) => return Err(Failure::Input(anyhow!(e))),
        Err(e) => return Err(Failure::CrossCheck(anyhow!(e))),
    };
    println!("n={}", sl2data::ORDER);
    for (i, p) in result.p.iter().enumerate() {
        println!("P{i} = {p}");
    }
    for (g, v) in &result.predictions {
        println!("genus {g}: {v}");
    }
    println!(
        "closed formula agrees for genus {}..={}",
        result.closed_formula_checked.start(),
        result.closed_formula_checked.end()
    );
    println!("{}", result.report.summary());
    if rescaled {
        println!("handle matrix times q^3 - q:");
        for row in result.rescaled_handle.to_rows() {
            println!("  [{}]", row.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "));
        }
    }
    write_report(out, &AnyReport::Qq(result.report))?;
    Ok(())
}
