//! The command-line interface: six verbs over the library.
//!
//! - `barcode FILE` computes persistence barcodes of a `.flt`/`.cwf`
//!   filtration; `--module all` computes all four standard modules and
//!   asserts both dualities before printing anything.
//! - `homology FILE` prints integer homology (Betti numbers and torsion)
//!   per dimension.
//! - `rips POINTS --max-dim D --max-radius R` builds a Vietoris-Rips
//!   filtration and prints it in `.cwf` form.
//! - `verify --suite NAME --seed S --count N` runs the randomized suites.
//! - `diagram BARCODE.tsv --style STYLE` renders barcode TSV as SVG.
//! - `example s2` prints the built-in sphere filtration.
//!
//! Exit codes: 0 success, 1 verification/assertion failure, 2 input or
//! usage errors (one-line reason on stderr). Output is byte-deterministic
//! for identical inputs and seeds. The environment variable
//! `PERSISTA_ORACLE_CAP` raises the rank-invariant oracle's cell cap; the
//! `--oracle-cap` flag takes precedence over it.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::algebra::PrimeField;
use crate::core::Filtration;
use crate::error::{Error, Result};
use crate::fixtures;
use crate::homology::integer_homology_of_filtration;
use crate::io::{
    build_rips_with_cap, emit_diagram_svg, parse_filtration, parse_points, read_barcode_tsv,
    write_barcode, write_cwf, BarcodeFormat, DiagramStyle, FiltrationFormat, DEFAULT_RIPS_CAP,
};
use crate::persistence::{
    barcode_absolute_cohomology, barcode_absolute_homology, barcode_relative, reduce,
    standard_barcodes, Barcode, Flavor, DEFAULT_ORACLE_CAP,
};
use crate::verify::{parse_suites, run_suites_with_cap};

#[derive(Parser)]
#[command(
    name = "persista",
    version,
    about = "Homology and persistence barcodes for filtered cell complexes",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute persistence barcodes of a filtration file (.flt or .cwf)
    Barcode {
        /// Input filtration (.flt simplicial or .cwf explicit-boundary)
        file: PathBuf,
        /// Coefficient field F_p (p prime)
        #[arg(long, default_value_t = 2)]
        field: u64,
        /// abs-hom, abs-coh, rel-hom, rel-coh, or all
        #[arg(long, default_value = "all")]
        module: String,
        /// Output format: tsv or json
        #[arg(long, default_value = "tsv")]
        format: String,
    },
    /// Print integer homology (Betti numbers and torsion) per dimension
    Homology {
        /// Input filtration (.flt or .cwf); births are ignored
        file: PathBuf,
    },
    /// Build a Vietoris-Rips filtration from a point cloud, printed as .cwf
    Rips {
        /// Point file: one point per line, whitespace-separated coordinates
        points: PathBuf,
        /// Largest simplex dimension to build
        #[arg(long)]
        max_dim: usize,
        /// Largest pairwise distance allowed in a simplex (the birth is the
        /// max pairwise distance, not half of it)
        #[arg(long)]
        max_radius: f64,
        /// Cap on the number of simplices
        #[arg(long, default_value_t = DEFAULT_RIPS_CAP)]
        cap: usize,
    },
    /// Run randomized verification suites (barcode dualities, the
    /// rank-invariant oracle, exactness, excision, subdivision)
    Verify {
        /// duality, oracle, les, excision, subdivision, or all
        #[arg(long, default_value = "all")]
        suite: String,
        /// PRNG seed; identical seeds generate identical cases
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Cases per suite (defaults mirror the release acceptance counts)
        #[arg(long)]
        count: Option<usize>,
        /// Cell cap for the rank-invariant oracle
        #[arg(long)]
        oracle_cap: Option<usize>,
    },
    /// Render a barcode TSV file as an SVG persistence diagram
    Diagram {
        /// Barcode TSV as written by `barcode`
        file: PathBuf,
        /// diagram (birth/death scatter) or barcode-strips
        #[arg(long, default_value = "diagram")]
        style: String,
    },
    /// Print a built-in example filtration
    Example {
        /// Example name (currently: s2)
        name: String,
    },
}

/// Runs the CLI against the standard streams and returns the exit code.
pub fn run<I: IntoIterator<Item = String>>(argv: I) -> i32 {
    let (mut out, mut err) = (std::io::stdout(), std::io::stderr());
    run_to(argv, &mut out, &mut err)
}

/// [`run`] with explicit output streams, for in-process testing.
pub fn run_to<I: IntoIterator<Item = String>>(
    argv: I,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(out, "{e}");
            return 0;
        }
        Err(e) => {
            // Missing-subcommand errors render as full help; keep the reason
            // to one line either way.
            let text = e.render().to_string();
            let reason = text
                .lines()
                .find(|l| l.starts_with("error:"))
                .unwrap_or("error: missing or invalid arguments; run --help for usage");
            let _ = writeln!(err, "{reason}");
            return 2;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            match e {
                // A duality violation means a verification assertion failed,
                // not that the input was bad.
                Error::DualityViolation(_) => 1,
                _ => 2,
            }
        }
    }
}

fn read_input(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::ValidationError(format!("cannot read {}: {e}", path.display())))
}

fn load_filtration(path: &Path) -> Result<Filtration> {
    let format = FiltrationFormat::from_path(path)?;
    parse_filtration(&read_input(path)?, format)
}

fn parse_barcode_format(name: &str) -> Result<BarcodeFormat> {
    match name {
        "tsv" => Ok(BarcodeFormat::Tsv),
        "json" => Ok(BarcodeFormat::Json),
        _ => Err(Error::ValidationError(format!(
            "unknown format {name:?}; expected tsv or json"
        ))),
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Barcode {
            file,
            field,
            module,
            format,
        } => {
            let f = load_filtration(&file)?;
            let field = PrimeField::new(field)?;
            let format = parse_barcode_format(&format)?;
            let mut single = |b: Barcode| -> Result<i32> {
                let _ = write!(out, "{}", write_barcode(&b, format));
                Ok(0)
            };
            match module.as_str() {
                "all" => {
                    // Computes and checks everything before the first write.
                    let b = standard_barcodes(&f, field)?;
                    let modules = [
                        ("absolute-homology", &b.absolute_homology),
                        ("absolute-cohomology", &b.absolute_cohomology),
                        ("relative-homology", &b.relative_homology),
                        ("relative-cohomology", &b.relative_cohomology),
                    ];
                    match format {
                        BarcodeFormat::Tsv => {
                            for (name, barcode) in modules {
                                let _ = writeln!(out, "# module: {name}");
                                let _ = write!(out, "{}", write_barcode(barcode, format));
                            }
                        }
                        BarcodeFormat::Json => {
                            let mut entries = serde_json::Map::new();
                            for (name, barcode) in modules {
                                let value: serde_json::Value = serde_json::from_str(
                                    &write_barcode(barcode, BarcodeFormat::Json),
                                )
                                .expect("own JSON output parses");
                                entries.insert(name.into(), value);
                            }
                            let doc = serde_json::Value::Object(
                                [("modules".to_string(), serde_json::Value::Object(entries))]
                                    .into_iter()
                                    .collect(),
                            );
                            let _ = writeln!(
                                out,
                                "{}",
                                serde_json::to_string_pretty(&doc).expect("serializable")
                            );
                        }
                    }
                    Ok(0)
                }
                "abs-hom" => single(barcode_absolute_homology(&reduce(&f, field), &f)),
                "abs-coh" => single(barcode_absolute_cohomology(&f, field)?),
                "rel-hom" => single(barcode_relative(&f, field, Flavor::Homology)?),
                "rel-coh" => single(barcode_relative(&f, field, Flavor::Cohomology)?),
                other => Err(Error::ValidationError(format!(
                    "unknown module {other:?}; expected abs-hom, abs-coh, rel-hom, rel-coh, or all"
                ))),
            }
        }
        Command::Homology { file } => {
            let f = load_filtration(&file)?;
            let h = integer_homology_of_filtration(&f);
            for d in 0..h.dims() {
                let _ = writeln!(out, "H_{d} = {}", h.group_string(d));
            }
            Ok(0)
        }
        Command::Rips {
            points,
            max_dim,
            max_radius,
            cap,
        } => {
            let pc = parse_points(&read_input(&points)?)?;
            let f = build_rips_with_cap(&pc, max_dim, max_radius, cap)?;
            let _ = write!(out, "{}", write_cwf(&f));
            Ok(0)
        }
        Command::Verify {
            suite,
            seed,
            count,
            oracle_cap,
        } => {
            let suites = parse_suites(&suite)?;
            let cap = match oracle_cap {
                Some(c) => c,
                None => match std::env::var("PERSISTA_ORACLE_CAP") {
                    Ok(text) => text.parse().map_err(|_| {
                        Error::ValidationError(format!(
                            "PERSISTA_ORACLE_CAP must be an integer, found {text:?}"
                        ))
                    })?,
                    Err(_) => DEFAULT_ORACLE_CAP,
                },
            };
            let outcomes = run_suites_with_cap(&suites, seed, count, cap);
            let mut all_ok = true;
            for o in &outcomes {
                if o.ok() {
                    let _ = writeln!(out, "{}: pass ({} cases)", o.name, o.cases);
                } else {
                    all_ok = false;
                    let _ = writeln!(out, "{}: FAIL ({}/{} cases)", o.name, o.passed, o.cases);
                    for line in &o.failures {
                        let _ = writeln!(out, "  {line}");
                    }
                }
            }
            Ok(if all_ok { 0 } else { 1 })
        }
        Command::Diagram { file, style } => {
            let style = match style.as_str() {
                "diagram" => DiagramStyle::Diagram,
                "barcode-strips" => DiagramStyle::BarcodeStrips,
                other => {
                    return Err(Error::ValidationError(format!(
                        "unknown style {other:?}; expected diagram or barcode-strips"
                    )))
                }
            };
            let b = read_barcode_tsv(&read_input(&file)?)?;
            let _ = write!(out, "{}", emit_diagram_svg(&b, style));
            Ok(0)
        }
        Command::Example { name } => match name.as_str() {
            "s2" => {
                let _ = write!(out, "{}", fixtures::S2_CWF);
                Ok(0)
            }
            other => Err(Error::ValidationError(format!(
                "unknown example {other:?}; available: s2"
            ))),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let argv = std::iter::once("persista".to_string())
            .chain(args.iter().map(|s| s.to_string()));
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_to(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    fn write_temp(name: &str, contents: &str) -> PathBuf {
        let path = std::env::temp_dir().join(format!("persista-cli-unit-{name}"));
        std::fs::write(&path, contents).unwrap();
        path
    }

    #[test]
    fn example_prints_the_sphere_fixture() {
        let (code, out, err) = run_capture(&["example", "s2"]);
        assert_eq!((code, err.as_str()), (0, ""));
        assert_eq!(out, fixtures::S2_CWF);
    }

    #[test]
    fn barcode_single_module_golden() {
        let path = write_temp("s2.cwf", fixtures::S2_CWF);
        let (code, out, _) = run_capture(&[
            "barcode",
            path.to_str().unwrap(),
            "--field",
            "2",
            "--module",
            "abs-hom",
        ]);
        assert_eq!(code, 0);
        assert_eq!(
            out,
            "dim\tbirth\tdeath\tkind\n\
             0\t0\tinf\tessential\n\
             0\t1\t2\tfinite\n\
             1\t3\t4\tfinite\n\
             2\t5\tinf\tessential\n"
        );
        let (code, out, _) =
            run_capture(&["barcode", path.to_str().unwrap(), "--module", "rel-hom"]);
        assert_eq!(code, 0);
        assert!(out.contains("0\t-inf\t0\tessential\n"));
        assert!(out.contains("2\t-inf\t5\tessential\n"));
    }

    #[test]
    fn barcode_all_prints_four_modules() {
        let path = write_temp("s2-all.cwf", fixtures::S2_CWF);
        let (code, out, _) = run_capture(&["barcode", path.to_str().unwrap()]);
        assert_eq!(code, 0);
        for name in [
            "absolute-homology",
            "absolute-cohomology",
            "relative-homology",
            "relative-cohomology",
        ] {
            assert!(out.contains(&format!("# module: {name}\n")));
        }
        let (code, json_out, _) = run_capture(&[
            "barcode",
            path.to_str().unwrap(),
            "--format",
            "json",
        ]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&json_out).unwrap();
        assert_eq!(v["modules"]["absolute-homology"]["intervals"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn homology_verb_prints_groups() {
        let path = write_temp("s2-h.cwf", fixtures::S2_CWF);
        let (code, out, _) = run_capture(&["homology", path.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert_eq!(out, "H_0 = Z\nH_1 = 0\nH_2 = Z\nH_3 = 0\n");
    }

    #[test]
    fn usage_errors_exit_2_with_one_line() {
        let (code, _, err) = run_capture(&["barcode"]);
        assert_eq!(code, 2);
        assert_eq!(err.lines().count(), 1);
        let (code, _, err) = run_capture(&["frobnicate"]);
        assert_eq!(code, 2);
        assert_eq!(err.lines().count(), 1);
        let path = write_temp("s2-err.cwf", fixtures::S2_CWF);
        let (code, _, _) =
            run_capture(&["barcode", path.to_str().unwrap(), "--module", "sideways"]);
        assert_eq!(code, 2);
        let (code, _, err) =
            run_capture(&["barcode", path.to_str().unwrap(), "--field", "6"]);
        assert_eq!(code, 2);
        assert!(err.contains("prime"), "{err}");
        let (code, _, _) = run_capture(&["example", "mystery"]);
        assert_eq!(code, 2);
        let (code, _, err) = run_capture(&["barcode", "/nonexistent/x.cwf"]);
        assert_eq!(code, 2);
        assert!(err.contains("cannot read"));
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("barcode"));
        assert!(out.contains("verify"));
    }

    #[test]
    fn verify_small_run_passes() {
        let (code, out, _) = run_capture(&["verify", "--suite", "subdivision", "--count", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out, "subdivision: pass (3 cases)\n");
    }

    #[test]
    fn rips_and_diagram_pipeline() {
        let points = write_temp("square.txt", "0 0\n1 0\n1 1\n0 1\n");
        let (code, cwf, _) = run_capture(&[
            "rips",
            points.to_str().unwrap(),
            "--max-dim",
            "2",
            "--max-radius",
            "2",
        ]);
        assert_eq!(code, 0);
        assert_eq!(cwf.lines().filter(|l| !l.starts_with('#')).count(), 14);
        let cwf_path = write_temp("square.cwf", &cwf);
        let (code, tsv, _) = run_capture(&[
            "barcode",
            cwf_path.to_str().unwrap(),
            "--module",
            "abs-hom",
        ]);
        assert_eq!(code, 0);
        assert!(tsv.contains(&format!("1\t1\t{}\tfinite\n", 2.0f64.sqrt())));
        let tsv_path = write_temp("square.tsv", &tsv);
        let (code, svg, _) = run_capture(&["diagram", tsv_path.to_str().unwrap()]);
        assert_eq!(code, 0);
        assert!(svg.starts_with("<?xml"));
        let (code, strips, _) = run_capture(&[
            "diagram",
            tsv_path.to_str().unwrap(),
            "--style",
            "barcode-strips",
        ]);
        assert_eq!(code, 0);
        assert!(strips.contains("class=\"bar"));
    }
}
