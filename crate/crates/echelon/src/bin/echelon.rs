//! Command-line interface: poset generation, echelonmotion, rowmotion,
//! independence testing, MacNeille completion, property inspection, and the
//! verification suites.
//!
//! Exit codes: `0` success, `1` a violation or dependence was found, `2`
//! input error, `3` capacity exceeded.  Poset payloads use the `poset-v1`
//! JSON format; extensions and bijections use 1-based comma-separated
//! arrays.  Reports are line-delimited JSON on stdout (or `--out`); human
//! summaries and timings go to stderr.

use std::fs;
use std::io::{BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use echelon::echelon::{
    echelonmotion, echelonmotion_image, is_echelon_independent_brute, is_echelon_independent_fast,
    EngineError, IndependenceReport,
};
use echelon::families::{self, FamilyError};
use echelon::io::{self, IoError};
use echelon::lattice::LatticeError;
use echelon::macneille::{macneille_completion, MacNeilleError};
use echelon::poset::PosetError;
use echelon::suites::{verify_suite, SuiteConfig, SuiteError, SUITE_NAMES};
use echelon::trim::{trim_data, TrimError};
use echelon::{Lattice, Poset};

#[derive(Parser)]
#[command(
    name = "echelon",
    version,
    about = "Echelonmotion, rowmotion, and verification suites on finite posets"
)]
struct Cli {
    /// Master RNG seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for suites (0 = default pool).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Forbid mod-p prescreens; run exact arithmetic only.
    #[arg(long, global = true)]
    exact_only: bool,

    /// Write primary output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate posets from a family spec, one JSON object per line.
    ///
    /// Specs look like `chain(5)`, `boolean(3)`, `tamari(4)`,
    /// `j_of_poset(antichain(3))`, or `all_lattices(6)`.
    Gen {
        /// Family spec; `;`-separated specs concatenate their outputs.
        spec: String,
    },

    /// Compute echelonmotion of a poset along a linear extension.
    Ech {
        /// Poset file in poset-v1 JSON (`-` for stdin).
        poset: String,
        /// Linear extension as 1-based comma-separated positions; defaults
        /// to the first extension in enumeration order.
        #[arg(long)]
        extension: Option<String>,
        /// Print only the image of this element (by name).
        #[arg(long)]
        element: Option<String>,
    },

    /// Compute rowmotion of a lattice.
    Row {
        /// Poset file in poset-v1 JSON (`-` for stdin); must be a lattice.
        poset: String,
        /// Which definition to use: `auto` picks ideal rowmotion on
        /// distributive lattices, label-set rowmotion on semidistributive
        /// ones, and chain-word rowmotion on trim ones.
        #[arg(long, default_value = "auto")]
        kind: String,
    },

    /// Test whether a poset is echelon-independent.
    ///
    /// Exits 1 when dependent, with the witness on stdout.
    Independent {
        /// Poset file in poset-v1 JSON (`-` for stdin).
        poset: String,
        /// Cross-check by brute force over all linear extensions.
        #[arg(long)]
        brute: bool,
        /// Extension-count cap for the brute-force pass.
        #[arg(long, default_value_t = 1_000_000)]
        cap: u128,
    },

    /// Compute the Dedekind-MacNeille completion of a poset.
    Complete {
        /// Poset file in poset-v1 JSON (`-` for stdin).
        poset: String,
        /// Also print the embedding as a JSON object instead of bare JSON.
        #[arg(long)]
        embedding: bool,
    },

    /// Print structural properties of a poset as one JSON object.
    Props {
        /// Poset file in poset-v1 JSON (`-` for stdin).
        poset: String,
    },

    /// Run a verification suite; records go to stdout as JSON lines.
    Verify {
        /// Suite name; `--list` shows the available suites.
        suite: Option<String>,
        /// List available suites and exit.
        #[arg(long)]
        list: bool,
        /// Scope override: `;`-separated family specs.
        #[arg(long)]
        scope: Option<String>,
        /// Enumerate extensions exhaustively up to this count.
        #[arg(long, default_value_t = 100_000)]
        extension_cap: u128,
        /// Seeded samples drawn when the cap is exceeded.
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

/// Everything that can go wrong, tagged with the exit code it maps to.
#[derive(Debug)]
enum CliError {
    /// Bad input or usage: exit 2.
    Input(String),
    /// A supported limit was exceeded: exit 3.
    Capacity(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Capacity(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Capacity(m) => m,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<PosetError> for CliError {
    fn from(e: PosetError) -> Self {
        match e {
            PosetError::Capacity(_) => CliError::Capacity(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<FamilyError> for CliError {
    fn from(e: FamilyError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        match e {
            EngineError::Capacity(_) => CliError::Capacity(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<TrimError> for CliError {
    fn from(e: TrimError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<MacNeilleError> for CliError {
    fn from(e: MacNeilleError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SuiteError> for CliError {
    fn from(e: SuiteError) -> Self {
        match e {
            SuiteError::Capacity(_) => CliError::Capacity(e.to_string()),
            SuiteError::Engine(EngineError::Capacity(_)) => CliError::Capacity(e.to_string()),
            SuiteError::Poset(PosetError::Capacity(_)) => CliError::Capacity(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out: Box<dyn Write> = match &cli.out {
        Some(path) => match fs::File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot open {}: {e}", path.display());
                return ExitCode::from(2);
            }
        },
        None => Box::new(BufWriter::new(std::io::stdout())),
    };
    match execute(&cli, &mut out) {
        Ok(found_negative) => {
            if out.flush().is_err() {
                return ExitCode::from(2);
            }
            ExitCode::from(if found_negative { 1 } else { 0 })
        }
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

/// Runs the selected command.  `Ok(true)` means "a violation or dependence
/// was found" (exit 1); `Ok(false)` is a clean pass (exit 0).
fn execute(cli: &Cli, out: &mut dyn Write) -> Result<bool, CliError> {
    match &cli.command {
        Command::Gen { spec } => {
            for part in spec.split(';').filter(|s| !s.trim().is_empty()) {
                for p in families::generate(part)? {
                    writeln!(out, "{}", io::poset_to_json(&p))?;
                }
            }
            Ok(false)
        }

        Command::Ech {
            poset,
            extension,
            element,
        } => {
            let p = read_poset(poset)?;
            let sigma = match extension {
                Some(csv) => io::extension_from_csv(&p, csv)?,
                None => p.first_extension(),
            };
            match element {
                Some(name) => {
                    let x = find_element(&p, name)?;
                    let y = echelonmotion_image(&p, &sigma, x)?;
                    writeln!(out, "{}", p.name(y))?;
                }
                None => {
                    let map = echelonmotion(&p, &sigma)?;
                    writeln!(out, "{}", io::bijection_to_csv(&map))?;
                }
            }
            Ok(false)
        }

        Command::Row { poset, kind } => {
            let p = read_poset(poset)?;
            let lattice = Lattice::new(p.clone())?;
            let (map, used) = match kind.as_str() {
                "auto" => {
                    if lattice.is_distributive() {
                        (lattice.birkhoff_rowmotion()?, "distributive")
                    } else if lattice.is_semidistributive() {
                        (lattice.barnard_rowmotion()?, "semidistributive")
                    } else if let Some(data) = trim_data(&lattice)? {
                        (data.trim_rowmotion(&lattice)?, "trim")
                    } else {
                        return Err(CliError::Input(
                            "lattice is neither distributive, semidistributive, nor trim; \
                             no rowmotion definition applies"
                                .into(),
                        ));
                    }
                }
                "distributive" => (lattice.birkhoff_rowmotion()?, "distributive"),
                "semidistributive" => (lattice.barnard_rowmotion()?, "semidistributive"),
                "trim" => {
                    let data = trim_data(&lattice)?.ok_or_else(|| {
                        CliError::Input("lattice is not trim".into())
                    })?;
                    (data.trim_rowmotion(&lattice)?, "trim")
                }
                other => {
                    return Err(CliError::Input(format!(
                        "unknown rowmotion kind \"{other}\"; expected auto, distributive, \
                         semidistributive, or trim"
                    )))
                }
            };
            eprintln!("rowmotion kind: {used}");
            writeln!(out, "{}", io::bijection_to_csv(&map))?;
            Ok(false)
        }

        Command::Independent { poset, brute, cap } => {
            let p = read_poset(poset)?;
            let fast = is_echelon_independent_fast(&p)?;
            if *brute {
                let brute_report = is_echelon_independent_brute(&p, *cap)?;
                if fast.independent != brute_report.independent {
                    return Err(CliError::Input(format!(
                        "internal disagreement: fast test says independent={}, brute force \
                         says independent={}",
                        fast.independent, brute_report.independent
                    )));
                }
            }
            writeln!(out, "{}", independence_json(&p, &fast))?;
            Ok(!fast.independent)
        }

        Command::Complete { poset, embedding } => {
            let p = read_poset(poset)?;
            let completion = macneille_completion(&p)?;
            let lattice_json = io::poset_to_json(completion.lattice().poset());
            if *embedding {
                let embed: Vec<usize> = completion.embed().to_vec();
                let obj = serde_json::json!({
                    "completion": serde_json::from_str::<serde_json::Value>(&lattice_json)
                        .expect("emitted JSON reparses"),
                    "embedding": embed,
                    "bijective": completion.is_bijective(),
                });
                writeln!(out, "{obj}")?;
            } else {
                writeln!(out, "{lattice_json}")?;
            }
            Ok(false)
        }

        Command::Props { poset } => {
            let p = read_poset(poset)?;
            writeln!(out, "{}", props_json(&p)?)?;
            Ok(false)
        }

        Command::Verify {
            suite,
            list,
            scope,
            extension_cap,
            samples,
        } => {
            if *list {
                for name in SUITE_NAMES {
                    writeln!(out, "{name}")?;
                }
                return Ok(false);
            }
            let Some(suite) = suite else {
                return Err(CliError::Input(
                    "missing suite name; use --list to see the available suites".into(),
                ));
            };
            let config = SuiteConfig {
                seed: cli.seed,
                jobs: cli.jobs,
                exact_only: cli.exact_only,
                scope: scope.clone(),
                extension_cap: *extension_cap,
                sample_count: *samples,
            };
            let report = verify_suite(suite, &config)?;
            report.write_jsonl(out).map_err(CliError::from)?;
            eprintln!(
                "suite {}: {} instances, {} checks, {} violations in {:.2?}",
                report.suite,
                report.records.len(),
                report.total_checks(),
                report.total_violations(),
                report.elapsed
            );
            Ok(!report.passed())
        }
    }
}

fn read_poset(path: &str) -> Result<Poset, CliError> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))?
    };
    Ok(io::poset_from_json(&text)?)
}

fn find_element(p: &Poset, name: &str) -> Result<usize, CliError> {
    families::element_named(p, name)
        .ok_or_else(|| CliError::Input(format!("no element named \"{name}\"")))
}

fn independence_json(p: &Poset, report: &IndependenceReport) -> String {
    let witness = report.witness.as_ref().map(|w| {
        serde_json::json!({
            "element": p.name(w.x),
            "base_extension": io::extension_to_csv(&w.base),
            "other_extension": io::extension_to_csv(&w.other),
            "base_image": p.name(w.image_base),
            "other_image": p.name(w.image_other),
            "class": w.class.map(|c| c.to_string()),
        })
    });
    serde_json::json!({
        "independent": report.independent,
        "map": report.map.as_ref().map(io::bijection_to_csv),
        "witness": witness,
        "evaluations": report.evaluations,
    })
    .to_string()
}

fn props_json(p: &Poset) -> Result<String, CliError> {
    let extension_count = match p.count_linear_extensions() {
        Ok(c) => Some(c.to_string()),
        Err(PosetError::Capacity(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let cover_count: usize = (0..p.n()).map(|x| p.up_covers(x).len()).sum();
    let mut obj = serde_json::json!({
        "n": p.n(),
        "covers": cover_count,
        "connected": p.is_connected(),
        "bounded": p.is_bounded(),
        "graded": p.is_graded(),
        "eulerian": p.is_eulerian(),
        "linear_extensions": extension_count,
        "lattice": false,
    });
    if let Ok(lattice) = Lattice::new(p.clone()) {
        obj["lattice"] = serde_json::Value::Bool(true);
        obj["distributive"] = lattice.is_distributive().into();
        obj["modular"] = lattice.is_modular().into();
        obj["semidistributive"] = lattice.is_semidistributive().into();
        obj["trim"] = trim_data(&lattice)?.is_some().into();
        obj["join_irreducibles"] = lattice.join_irreducibles().len().into();
        obj["meet_irreducibles"] = lattice.meet_irreducibles().len().into();
    }
    Ok(obj.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> Result<(bool, String), CliError> {
        let cli = Cli::try_parse_from(args).expect("arguments parse");
        let mut buf = Vec::new();
        let negative = execute(&cli, &mut buf)?;
        Ok((negative, String::from_utf8(buf).expect("utf-8 output")))
    }

    fn temp_poset_file(json: &str) -> PathBuf {
        use std::sync::atomic::{AtomicUsize, Ordering};
        static COUNTER: AtomicUsize = AtomicUsize::new(0);
        let path = std::env::temp_dir().join(format!(
            "echelon-cli-test-{}-{}.json",
            std::process::id(),
            COUNTER.fetch_add(1, Ordering::SeqCst)
        ));
        fs::write(&path, json).expect("temp file writes");
        path
    }

    #[test]
    fn gen_emits_one_json_line_per_poset() {
        let (neg, output) = run(&["echelon", "gen", "all_posets(3)"]).unwrap();
        assert!(!neg);
        assert_eq!(output.lines().count(), 5);
        for line in output.lines() {
            assert!(io::poset_from_json(line).is_ok());
        }
    }

    #[test]
    fn ech_reproduces_the_worked_example() {
        let (_, gen) = run(&["echelon", "gen", "r5_example"]).unwrap();
        let path = temp_poset_file(gen.trim());
        let file = path.to_str().unwrap();
        let (neg, output) = run(&["echelon", "ech", file]).unwrap();
        assert!(!neg);
        assert_eq!(output.trim(), "5,3,2,1,4");
        let (_, single) =
            run(&["echelon", "ech", file, "--element", "e2"]).unwrap();
        assert_eq!(single.trim(), "e3");
        let (_, row) = run(&["echelon", "row", file]).unwrap();
        assert_eq!(row.trim(), "5,3,2,1,4");
        fs::remove_file(path).ok();
    }

    #[test]
    fn independent_exits_one_on_dependent_posets() {
        let (_, gen) = run(&["echelon", "gen", "m3"]).unwrap();
        let path = temp_poset_file(gen.trim());
        let (neg, output) = run(&[
            "echelon",
            "independent",
            path.to_str().unwrap(),
            "--brute",
        ])
        .unwrap();
        assert!(neg, "M3 is echelon-dependent");
        let parsed: serde_json::Value = serde_json::from_str(output.trim()).unwrap();
        assert_eq!(parsed["independent"], serde_json::Value::Bool(false));
        assert!(parsed["witness"].is_object());
        fs::remove_file(path).ok();
    }

    #[test]
    fn complete_embeds_the_two_element_antichain_in_the_diamond() {
        let (_, gen) = run(&["echelon", "gen", "antichain(2)"]).unwrap();
        let path = temp_poset_file(gen.trim());
        let (neg, output) = run(&[
            "echelon",
            "complete",
            path.to_str().unwrap(),
            "--embedding",
        ])
        .unwrap();
        assert!(!neg);
        let parsed: serde_json::Value = serde_json::from_str(output.trim()).unwrap();
        assert_eq!(parsed["completion"]["n"], 4);
        assert_eq!(parsed["bijective"], serde_json::Value::Bool(false));
        fs::remove_file(path).ok();
    }

    #[test]
    fn props_reports_lattice_structure() {
        let (_, gen) = run(&["echelon", "gen", "n5"]).unwrap();
        let path = temp_poset_file(gen.trim());
        let (_, output) = run(&["echelon", "props", path.to_str().unwrap()]).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(output.trim()).unwrap();
        assert_eq!(parsed["n"], 5);
        assert_eq!(parsed["lattice"], serde_json::Value::Bool(true));
        assert_eq!(parsed["semidistributive"], serde_json::Value::Bool(true));
        assert_eq!(parsed["distributive"], serde_json::Value::Bool(false));
        assert_eq!(parsed["trim"], serde_json::Value::Bool(true));
        fs::remove_file(path).ok();
    }

    #[test]
    fn verify_runs_a_small_suite_and_lists_names() {
        let (neg, output) = run(&[
            "echelon",
            "verify",
            "eulerian",
            "--scope",
            "boolean(2)",
        ])
        .unwrap();
        assert!(!neg);
        let first: serde_json::Value =
            serde_json::from_str(output.lines().next().unwrap()).unwrap();
        assert_eq!(first["suite"], "eulerian");
        assert_eq!(first["violations"].as_array().unwrap().len(), 0);

        let (_, listing) = run(&["echelon", "verify", "--list"]).unwrap();
        assert_eq!(listing.lines().count(), SUITE_NAMES.len());
    }

    #[test]
    fn bad_inputs_map_to_input_errors() {
        let err = run(&["echelon", "gen", "frobnicate(3)"]).unwrap_err();
        assert_eq!(err.code(), 2);
        let path = temp_poset_file("{\"format\":\"wrong\"}");
        let err = run(&["echelon", "props", path.to_str().unwrap()]).unwrap_err();
        assert_eq!(err.code(), 2);
        fs::remove_file(path).ok();
        let err = run(&["echelon", "verify", "nope"]).unwrap_err();
        assert_eq!(err.code(), 2);
    }
}
