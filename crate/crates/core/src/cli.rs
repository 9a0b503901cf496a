//! The `perturb`, `sweep` and `witness` commands and their file formats.
//!
//! Matrix files are plain text: a `dims d_a d_b` line followed by `d_a·d_b`
//! rows of `d_a·d_b` whitespace-separated entries written `re+imj` (or
//! `re-imj`). Blank lines and lines starting with `#` are ignored.
//!
//! Config files hold flat `key = value` lines with `#` comments:
//!
//! ```text
//! dims = 2, 2
//! epsilons = 0.5, 0.1, 0.02
//! samples = 100
//! components = 4
//! seed = 42
//! output = sweep.csv
//! ```
//!
//! Exit codes: 0 on success, 2 for unreadable or malformed input, 3 when the
//! input parses but violates a domain invariant (e.g. not a density operator).

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use thiserror::Error;

use crate::error::Error;
use crate::genericity::{derive_seed, entangling_perturbation, sample_separable};
use crate::linops::{ComplexMatrix, C64};
use crate::separability::{separable_ball_check, witness, Verdict};
use crate::states::{DensityOperator, DimensionProfile};

pub const CSV_HEADER: &str = "seed,epsilon,achieved_distance,verdict,negativity,min_pt_eig,input_ball_check";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or malformed input.
    #[error("{0}")]
    Input(String),
    /// Well-formed input that violates a domain invariant.
    #[error("{0}")]
    Domain(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Domain(_) => EXIT_DOMAIN,
        }
    }
}

fn input_err(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}

/// Shortest round-trip decimal form; exponent notation outside
/// `[1e-5, 1e16)`. Never locale dependent, never more than 17 significant
/// digits.
pub fn format_real(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn format_complex(z: C64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{sign}{}j", format_real(z.re), format_real(z.im.abs()))
}

pub fn parse_complex(token: &str) -> Result<C64, CliError> {
    let bad = || input_err(format!("malformed complex entry {token:?}"));
    let parse = |s: &str| -> Result<f64, CliError> {
        let x: f64 = s.parse().map_err(|_| bad())?;
        if x.is_finite() {
            Ok(x)
        } else {
            Err(bad())
        }
    };
    let Some(body) = token.strip_suffix('j') else {
        return Ok(C64::new(parse(token)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match split {
        Some(i) => Ok(C64::new(parse(&body[..i])?, parse(&body[i..])?)),
        None => Ok(C64::new(0.0, parse(body)?)),
    }
}

/// Parses a matrix file into its bipartite dimensions and matrix.
pub fn parse_matrix(text: &str) -> Result<(DimensionProfile, ComplexMatrix), CliError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| input_err("empty matrix file"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let (da, db) = match fields[..] {
        ["dims", a, b] => (
            a.parse::<usize>().map_err(|_| input_err(format!("bad dimension {a:?}")))?,
            b.parse::<usize>().map_err(|_| input_err(format!("bad dimension {b:?}")))?,
        ),
        _ => return Err(input_err(format!("expected `dims d_a d_b`, got {header:?}"))),
    };
    let dims = DimensionProfile::bipartite(da, db).map_err(|e| input_err(e.to_string()))?;
    let n = dims.total();
    let mut entries = Vec::with_capacity(n * n);
    let mut rows = 0;
    for line in lines {
        rows += 1;
        let row: Vec<C64> = line
            .split_whitespace()
            .map(parse_complex)
            .collect::<Result<_, _>>()?;
        if row.len() != n {
            return Err(input_err(format!(
                "row {rows} has {} entries, expected {n}",
                row.len()
            )));
        }
        entries.extend(row);
    }
    if rows != n {
        return Err(input_err(format!("found {rows} rows, expected {n}")));
    }
    let matrix = ComplexMatrix::from_row_slice(n, n, &entries).map_err(|e| input_err(e.to_string()))?;
    Ok((dims, matrix))
}

pub fn read_density(path: &Path) -> Result<DensityOperator, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| input_err(format!("cannot read {}: {e}", path.display())))?;
    let (dims, matrix) = parse_matrix(&text)?;
    Ok(DensityOperator::new(dims, matrix)?)
}

/// Serializes a bipartite operator in the matrix file format.
pub fn format_matrix(dims: &DimensionProfile, m: &ComplexMatrix) -> String {
    let mut out = format!("dims {} {}\n", dims.d1(), dims.d2());
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| format_complex(m[(i, j)])).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub dims: (usize, usize),
    pub epsilons: Vec<f64>,
    pub samples: usize,
    /// Product states per separable input.
    pub components: usize,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
}

const DEFAULT_COMPONENTS: usize = 4;

pub fn parse_config(text: &str) -> Result<ExperimentConfig, CliError> {
    let mut dims = None;
    let mut epsilons = None;
    let mut samples = None;
    let mut components = None;
    let mut seed = None;
    let mut output_path = None;

    fn set<T>(slot: &mut Option<T>, key: &str, value: T) -> Result<(), CliError> {
        if slot.replace(value).is_some() {
            return Err(input_err(format!("duplicate key {key:?}")));
        }
        Ok(())
    }
    fn number<T: std::str::FromStr>(key: &str, s: &str) -> Result<T, CliError> {
        s.trim()
            .parse()
            .map_err(|_| input_err(format!("bad value {s:?} for {key:?}")))
    }

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| input_err(format!("line {}: expected `key = value`", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "dims" => {
                let parts: Vec<usize> = value
                    .split(',')
                    .map(|s| number(key, s))
                    .collect::<Result<_, _>>()?;
                match parts[..] {
                    [a, b] if a > 0 && b > 0 => set(&mut dims, key, (a, b))?,
                    _ => return Err(input_err(format!("dims must be two positive integers, got {value:?}"))),
                }
            }
            "epsilons" => {
                let list: Vec<f64> = if value.is_empty() {
                    Vec::new()
                } else {
                    value.split(',').map(|s| number(key, s)).collect::<Result<_, _>>()?
                };
                set(&mut epsilons, key, list)?;
            }
            "samples" => set(&mut samples, key, number(key, value)?)?,
            "components" => set(&mut components, key, number(key, value)?)?,
            "seed" => set(&mut seed, key, number(key, value)?)?,
            "output" => set(&mut output_path, key, PathBuf::from(value))?,
            other => return Err(input_err(format!("unknown key {other:?}"))),
        }
    }

    let config = ExperimentConfig {
        dims: dims.ok_or_else(|| input_err("missing key \"dims\""))?,
        epsilons: epsilons.ok_or_else(|| input_err("missing key \"epsilons\""))?,
        samples: samples.ok_or_else(|| input_err("missing key \"samples\""))?,
        components: components.unwrap_or(DEFAULT_COMPONENTS),
        seed: seed.ok_or_else(|| input_err("missing key \"seed\""))?,
        output_path,
    };
    if config.epsilons.is_empty() {
        return Err(input_err("epsilons must not be empty"));
    }
    if let Some(bad) = config.epsilons.iter().find(|e| !(**e > 0.0 && e.is_finite())) {
        return Err(input_err(format!("epsilon {bad} must be positive")));
    }
    if config.samples == 0 {
        return Err(input_err("samples must be at least 1"));
    }
    if config.components == 0 {
        return Err(input_err("components must be at least 1"));
    }
    DimensionProfile::bipartite(config.dims.0, config.dims.1).map_err(|e| input_err(e.to_string()))?;
    Ok(config)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub seed: u64,
    pub epsilon: f64,
    pub achieved_distance: f64,
    pub verdict: Verdict,
    pub negativity: f64,
    pub min_pt_eig: f64,
    pub input_ball_check: bool,
}

impl SweepRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.seed,
            format_real(self.epsilon),
            format_real(self.achieved_distance),
            self.verdict,
            format_real(self.negativity),
            format_real(self.min_pt_eig),
            self.input_ball_check
        )
    }
}

/// Runs every (sample, epsilon) pair. Sample `i` is drawn with seed
/// `derive_seed(config.seed, i)`; rows come back sorted by (seed, epsilon).
pub fn run_sweep(config: &ExperimentConfig) -> Result<Vec<SweepRow>, Error> {
    let dims = DimensionProfile::bipartite(config.dims.0, config.dims.1)?;
    let per_sample: Vec<Vec<SweepRow>> = (0..config.samples as u64)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(config.seed, i);
            let input = sample_separable(&dims, config.components, seed)?;
            let ball = separable_ball_check(&input);
            config
                .epsilons
                .iter()
                .map(|&epsilon| {
                    let (_, record) = entangling_perturbation(&input, epsilon, seed)?;
                    Ok(SweepRow {
                        seed,
                        epsilon,
                        achieved_distance: record.achieved_trace_distance,
                        verdict: record.verdict.verdict,
                        negativity: record.verdict.negativity,
                        min_pt_eig: record.verdict.min_pt_eigenvalue,
                        input_ball_check: ball,
                    })
                })
                .collect()
        })
        .collect::<Result<_, Error>>()?;
    let mut rows: Vec<SweepRow> = per_sample.into_iter().flatten().collect();
    rows.sort_by(|a, b| a.seed.cmp(&b.seed).then(a.epsilon.total_cmp(&b.epsilon)));
    Ok(rows)
}

/// CSV text for a sweep. A `# generated_unix=<secs>` line precedes the
/// header when `timestamp` is given.
pub fn render_csv(rows: &[SweepRow], timestamp: Option<u64>) -> String {
    let mut out = String::new();
    if let Some(t) = timestamp {
        let _ = writeln!(out, "# generated_unix={t}");
    }
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    out
}

pub fn cmd_perturb(
    matrix: &Path,
    epsilon: f64,
    seed: u64,
    out: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(input_err(format!("epsilon {epsilon} must be positive")));
    }
    let d = read_density(matrix)?;
    let (perturbed, record) = entangling_perturbation(&d, epsilon, seed)?;
    if let Some(path) = out {
        write_atomically(path, &format_matrix(perturbed.dims(), perturbed.matrix()))?;
    }
    writeln!(
        stdout,
        "dims={} enlarged_dims={} ancilla={} epsilon={} achieved_distance={} verdict={} negativity={} min_pt_eig={}",
        record.input_dims,
        record.enlarged_dims,
        record.ancilla_dim,
        format_real(epsilon),
        format_real(record.achieved_trace_distance),
        record.verdict.verdict,
        format_real(record.verdict.negativity),
        format_real(record.verdict.min_pt_eigenvalue),
    )
    .map_err(|e| input_err(format!("cannot write output: {e}")))
}

pub fn cmd_sweep(
    config_path: &Path,
    out: Option<&Path>,
    no_timestamp: bool,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let text = fs::read_to_string(config_path)
        .map_err(|e| input_err(format!("cannot read {}: {e}", config_path.display())))?;
    let config = parse_config(&text)?;
    let target = out
        .map(Path::to_path_buf)
        .or_else(|| config.output_path.clone())
        .ok_or_else(|| input_err("no output path: set `output` in the config or pass --out"))?;
    let rows = run_sweep(&config)?;
    let timestamp = (!no_timestamp).then(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    });
    write_atomically(&target, &render_csv(&rows, timestamp))?;
    let _ = writeln!(stdout, "wrote {} rows to {}", rows.len(), target.display());
    Ok(())
}

pub fn cmd_witness(matrix: &Path, stdout: &mut dyn Write) -> Result<(), CliError> {
    let d = read_density(matrix)?;
    let report = witness(&d)?;
    writeln!(
        stdout,
        "{} negativity={} min_pt_eig={}",
        report.verdict,
        format_real(report.negativity),
        format_real(report.min_pt_eigenvalue)
    )
    .map_err(|e| input_err(format!("cannot write output: {e}")))
}

/// Writes through a sibling temporary file so that a failed run leaves no
/// partial output behind.
fn write_atomically(path: &Path, contents: &str) -> Result<(), CliError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    let result = fs::write(&tmp, contents).and_then(|()| fs::rename(&tmp, path));
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(input_err(format!("cannot write {}: {e}", path.display())));
    }
    Ok(())
}

#[derive(Parser, Debug)]
#[command(name = "nonsep", version, about = "Entangling perturbations and partial-transpose witnesses")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Perturb a density operator into a nonseparable one within trace distance epsilon.
    Perturb {
        matrix: PathBuf,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the perturbed operator in matrix file format.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a seeded sweep over separable inputs and write CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Report the partial-transpose verdict for a density operator.
    Witness { matrix: PathBuf },
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Diagnostics go to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    let result = match args.command {
        Command::Perturb {
            matrix,
            epsilon,
            seed,
            out,
        } => cmd_perturb(&matrix, epsilon, seed, out.as_deref(), stdout),
        Command::Sweep {
            config,
            out,
            no_timestamp,
        } => cmd_sweep(&config, out.as_deref(), no_timestamp, stdout),
        Command::Witness { matrix } => cmd_witness(&matrix, stdout),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_entries_parse() {
        assert_eq!(parse_complex("0.5+0j").unwrap(), C64::new(0.5, 0.0));
        assert_eq!(parse_complex("-0.25-1.5j").unwrap(), C64::new(-0.25, -1.5));
        assert_eq!(parse_complex("1e-3+2.5E-4j").unwrap(), C64::new(1e-3, 2.5e-4));
        assert_eq!(parse_complex("-1e+2-3e-2j").unwrap(), C64::new(-100.0, -0.03));
        assert_eq!(parse_complex("2j").unwrap(), C64::new(0.0, 2.0));
        assert_eq!(parse_complex("0.75").unwrap(), C64::new(0.75, 0.0));
        for bad in ["", "j", "abc", "1+xj", "nan+0j", "1+infj", "0.5+0i"] {
            assert!(parse_complex(bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn complex_formatting_round_trips() {
        for z in [
            C64::new(0.5, 0.0),
            C64::new(-0.1, 1.0 / 3.0),
            C64::new(1e-20, -2.5e17),
            C64::new(0.0, -0.0),
        ] {
            let text = format_complex(z);
            let back = parse_complex(&text).unwrap();
            assert_eq!(back.re.to_bits(), z.re.to_bits(), "{text}");
            assert_eq!(back.im.to_bits(), z.im.to_bits(), "{text}");
        }
        assert_eq!(format_complex(C64::new(0.5, -0.25)), "0.5-0.25j");
    }

    #[test]
    fn matrix_file_parsing() {
        let text = "dims 2 1\n0.5+0j 0+0j\n\n0+0j 0.5+0j\n";
        let (dims, m) = parse_matrix(text).unwrap();
        assert_eq!(dims.factors(), &[2, 1]);
        assert_eq!(m, ComplexMatrix::from_diagonal(&[0.5, 0.5]));
        assert_eq!(parse_matrix(&format_matrix(&dims, &m)).unwrap().1, m);
        for bad in [
            "",
            "dim 2 1\n1 0\n0 0\n",
            "dims 2\n1\n",
            "dims 2 1\n1 0\n",
            "dims 2 1\n1 0\n0 0\n0 0\n",
            "dims 2 1\n1 0 0\n0 0\n",
            "dims 0 1\n",
            "dims 2 1\n1 0\n0 q\n",
        ] {
            assert!(matches!(parse_matrix(bad), Err(CliError::Input(_))), "{bad:?}");
        }
    }

    #[test]
    fn config_parsing() {
        let text = "# sweep\ndims = 2, 3\nepsilons = 0.5, 0.1 # two\nsamples = 10\nseed = 7\noutput = out.csv\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.dims, (2, 3));
        assert_eq!(cfg.epsilons, vec![0.5, 0.1]);
        assert_eq!(cfg.samples, 10);
        assert_eq!(cfg.components, DEFAULT_COMPONENTS);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.output_path, Some(PathBuf::from("out.csv")));

        let base = "dims = 2, 2\nsamples = 1\nseed = 1\n";
        for bad in [
            format!("{base}epsilons =\n"),
            format!("{base}epsilons = 0.1, -0.1\n"),
            format!("{base}epsilons = 0.1\nepsilons = 0.2\n"),
            format!("{base}epsilons = 0.1\ncolour = red\n"),
            format!("{base}epsilons = 0.1\nnonsense\n"),
            format!("{base}epsilons = 0.1\ncomponents = 0\n"),
            "dims = 2\nsamples = 1\nseed = 1\nepsilons = 0.1\n".to_string(),
            "dims = 2, 2\nsamples = 0\nseed = 1\nepsilons = 0.1\n".to_string(),
            "dims = 2, 2\nsamples = 1\nepsilons = 0.1\n".to_string(),
        ] {
            assert!(parse_config(&bad).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn sweep_rows_are_sorted_and_within_budget() {
        let cfg = ExperimentConfig {
            dims: (2, 2),
            epsilons: vec![0.1, 0.5],
            samples: 5,
            components: 3,
            seed: 99,
            output_path: None,
        };
        let rows = run_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 10);
        assert!(rows.windows(2).all(|w| (w[0].seed, w[0].epsilon) < (w[1].seed, w[1].epsilon)));
        assert!(rows.iter().all(|r| r.achieved_distance < r.epsilon));
        assert!(rows.iter().all(|r| r.verdict != Verdict::SeparableCertified));
        let csv = render_csv(&rows, None);
        assert!(csv.starts_with(&format!("{CSV_HEADER}\n")));
        assert_eq!(csv, render_csv(&run_sweep(&cfg).unwrap(), None));
        assert!(render_csv(&rows, Some(5)).starts_with("# generated_unix=5\n"));
    }

    #[test]
    fn exit_codes_for_bad_arguments() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["nonsep"], &mut out, &mut err), EXIT_INPUT);
        assert_eq!(run(["nonsep", "frobnicate"], &mut out, &mut err), EXIT_INPUT);
        assert_eq!(run(["nonsep", "--help"], &mut out, &mut err), EXIT_OK);
        assert_eq!(run(["nonsep", "witness", "/nonexistent/file"], &mut out, &mut err), EXIT_INPUT);
    }
}
