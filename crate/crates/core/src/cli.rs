//! Command-line front end.
//!
//! Exit codes: 0 when an adequate decomposition was found (or a `synth` /
//! passing `selftest` run), 2 when the component cap was reached without an
//! adequate model (the result file is still written), 1 on any input or
//! usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::decomposer::{decompose, DecompositionConfig, DecompositionResult, DofMode, Status};
use crate::error::{Error, Result};
use crate::io::{emit_plot_svg, read_spectrum_csv_path, write_result_json_path, write_spectrum_csv_path};
use crate::model::{DebyeComponent, PhysicalConstants};
use crate::selftest;
use crate::synth::{generate, SynthSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_CAP_REACHED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "debyefit", version, about = "Decompose relaxation spectra into Debye components")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decompose a measured spectrum (CSV with header `T,Q[,var_eps]`).
    Fit(FitArgs),
    /// Write a synthetic spectrum with known components as CSV.
    Synth(SynthArgs),
    /// Check special functions and residual tests against frozen reference values.
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DofModeArg {
    Corrected,
    PerComponent,
}

impl From<DofModeArg> for DofMode {
    fn from(m: DofModeArg) -> Self {
        match m {
            DofModeArg::Corrected => DofMode::Corrected,
            DofModeArg::PerComponent => DofMode::PerComponent,
        }
    }
}

#[derive(Debug, clap::Args)]
pub struct FitArgs {
    /// Input spectrum CSV.
    pub input: PathBuf,
    /// Measurement frequency, Hz.
    #[arg(long)]
    pub freq: f64,
    /// Significance level of every adequacy test.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, default_value_t = 8)]
    pub max_components: usize,
    /// Known measurement-error variance (overrides a `var_eps` CSV column).
    #[arg(long)]
    pub var_eps: Option<f64>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Bootstrap replicates for the Durbin–Watson p-values.
    #[arg(long, default_value_t = 1000)]
    pub dw_reps: usize,
    /// Free-parameter count used by the variance test: 2n (corrected) or one per component (per-component).
    #[arg(long, value_enum, default_value_t = DofModeArg::Corrected)]
    pub dof_mode: DofModeArg,
    /// Result JSON path.
    #[arg(long, default_value = "result.json")]
    pub out: PathBuf,
    /// Optional SVG plot path.
    #[arg(long)]
    pub plot: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct SynthArgs {
    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub freq: f64,
    /// Component as `Q0:T0`; repeat for several. Defaults to 1:450, 1:550, 1:650.
    #[arg(long = "component", value_name = "Q0:T0")]
    pub components: Vec<String>,
    #[arg(long, default_value_t = 350.0)]
    pub t_min: f64,
    #[arg(long, default_value_t = 750.0)]
    pub t_max: f64,
    #[arg(long, default_value_t = 400)]
    pub points: usize,
    #[arg(long, default_value_t = 0.01)]
    pub noise_sd: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Omit the `var_eps` column.
    #[arg(long)]
    pub no_var_eps: bool,
}

fn parse_component(s: &str, f: f64) -> Result<DebyeComponent> {
    let bad = || Error::Config(format!("component {s:?} must look like Q0:T0"));
    let (q, t) = s.split_once(':').ok_or_else(bad)?;
    let q: f64 = q.trim().parse().map_err(|_| bad())?;
    let t: f64 = t.trim().parse().map_err(|_| bad())?;
    DebyeComponent::new(q, t, f, &PhysicalConstants::CODATA_2018)
}

fn fmt_p(p: Option<f64>) -> String {
    p.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"))
}

fn print_summary<W: Write>(out: &mut W, result: &DecompositionResult) -> std::io::Result<()> {
    writeln!(out, "{:>3}  {:>12}  {:>8}  {:>8}  {:>8}  {:>8}  verdict", "n", "sse", "p(AD)", "p(t)", "p(DW)", "p(F)")?;
    for a in &result.attempts {
        let sse = a.fit.as_ref().map_or_else(|| "-".to_string(), |f| format!("{:.5e}", f.sse));
        let (ad, t, dw, f) = match &a.report {
            Some(r) => (
                r.normality.map(|x| x.p_value),
                r.zero_mean.map(|x| x.p_value),
                r.autocorrelation.as_ref().map(|d| d.lags.iter().map(|l| l.p_value).fold(1.0, f64::min)),
                r.variance.map(|x| x.p_value),
            ),
            None => (None, None, None, None),
        };
        let verdict = if a.error.is_some() {
            "failed"
        } else if a.adequate {
            "adequate"
        } else if !a.spurious_components.is_empty() {
            "spurious component"
        } else {
            "inadequate"
        };
        writeln!(
            out,
            "{:>3}  {:>12}  {:>8}  {:>8}  {:>8}  {:>8}  {verdict}",
            a.n_components,
            sse,
            fmt_p(ad),
            fmt_p(t),
            fmt_p(dw),
            fmt_p(f)
        )?;
    }
    match result.accepted_attempt().and_then(|a| a.fit.as_ref()) {
        Some(fit) => {
            let model = result.model().map_err(std::io::Error::other)?;
            writeln!(out, "accepted {} component(s):", fit.params.n_components())?;
            for c in model.components(&fit.params).map_err(std::io::Error::other)? {
                writeln!(out, "  Q0 = {:.6}  T0 = {:.3} K  E = {:.1} J/mol", c.q0(), c.t0(), c.energy())?;
            }
        }
        None => writeln!(out, "no adequate model within the component cap")?,
    }
    Ok(())
}

fn run_fit<W: Write, E: Write>(args: &FitArgs, stdout: &mut W, stderr: &mut E) -> Result<i32> {
    if !(args.freq > 0.0 && args.freq.is_finite()) {
        return Err(Error::Config(format!("--freq must be positive, got {}", args.freq)));
    }
    if !(args.alpha > 0.0 && args.alpha < 1.0) {
        return Err(Error::Config(format!("--alpha must lie in (0, 1), got {}", args.alpha)));
    }
    let mut spectrum = read_spectrum_csv_path(&args.input)?;
    if let Some(v) = args.var_eps {
        if let Some(file_v) = spectrum.var_eps().filter(|fv| *fv != v) {
            writeln!(stderr, "warning: --var-eps {v} overrides var_eps {file_v} from the input file")?;
        }
        spectrum = spectrum.with_var_eps(Some(v))?;
    }
    if spectrum.var_eps().is_none() {
        writeln!(stderr, "warning: no measurement-error variance given; the variance test is skipped")?;
    }

    let config = DecompositionConfig {
        alpha: args.alpha,
        max_components: args.max_components,
        dw_reps: args.dw_reps,
        seed: args.seed,
        dof_mode: args.dof_mode.into(),
        ..DecompositionConfig::new(args.freq)
    };
    let result = decompose(&spectrum, &config)?;
    write_result_json_path(&result, &args.out)?;
    if let Some(plot) = &args.plot {
        emit_plot_svg(&spectrum, &result, plot)?;
    }
    print_summary(stdout, &result)?;
    Ok(match result.status {
        Status::Adequate => EXIT_OK,
        Status::CapReached => EXIT_CAP_REACHED,
    })
}

fn run_synth<W: Write>(args: &SynthArgs, stdout: &mut W) -> Result<i32> {
    let components = if args.components.is_empty() {
        SynthSpec::canonical(args.seed).components
    } else {
        args.components.iter().map(|s| parse_component(s, args.freq)).collect::<Result<_>>()?
    };
    let spec = SynthSpec {
        components,
        t_range: (args.t_min, args.t_max),
        n_points: args.points,
        noise_sd: args.noise_sd,
        frequency: args.freq,
        seed: args.seed,
    };
    let synth = generate(&spec)?;
    let spectrum = if args.no_var_eps { synth.spectrum.with_var_eps(None)? } else { synth.spectrum };
    write_spectrum_csv_path(&spectrum, &args.out)?;
    writeln!(stdout, "wrote {} points to {}", spectrum.len(), args.out.display())?;
    Ok(EXIT_OK)
}

fn run_selftest<W: Write>(stdout: &mut W) -> Result<i32> {
    let checks = selftest::run()?;
    let mut failures = 0;
    for c in &checks {
        let tag = if c.passed() { "PASS" } else { "FAIL" };
        failures += usize::from(!c.passed());
        writeln!(
            stdout,
            "{tag}  {:<40} got {:>24.17e} expected {:>24.17e} |err| {:.2e} (tol {:.0e})",
            c.name,
            c.got,
            c.expected,
            c.error(),
            c.tolerance
        )?;
    }
    writeln!(stdout, "{} checks, {} failed", checks.len(), failures)?;
    Ok(if failures == 0 { EXIT_OK } else { EXIT_ERROR })
}

/// Parses `args` (including the program name) and runs the requested command.
pub fn run_with<I, T, W, E>(args: I, stdout: &mut W, stderr: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_ERROR
                }
            };
        }
    };
    run(&cli, stdout, stderr)
}

pub fn run<W: Write, E: Write>(cli: &Cli, stdout: &mut W, stderr: &mut E) -> i32 {
    let outcome = match &cli.command {
        Command::Fit(args) => run_fit(args, stdout, stderr),
        Command::Synth(args) => run_synth(args, stdout),
        Command::Selftest => run_selftest(stdout),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(std::iter::once("debyefit").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn missing_freq_is_usage_error() {
        let (code, _, err) = run_args(&["fit", "spectrum.csv"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.contains("--freq"), "{err}");
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("selftest"));
    }

    #[test]
    fn invalid_alpha() {
        let (code, _, err) = run_args(&["fit", "x.csv", "--freq", "1", "--alpha", "1.5"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.contains("alpha"));
    }

    #[test]
    fn missing_input_file() {
        let (code, _, err) = run_args(&["fit", "/nonexistent/spectrum.csv", "--freq", "1"]);
        assert_eq!(code, EXIT_ERROR);
        assert!(err.starts_with("error:"));
    }

    #[test]
    fn component_parsing() {
        let c = parse_component("0.5:600", 1.0).unwrap();
        assert_eq!((c.q0(), c.t0()), (0.5, 600.0));
        assert!(parse_component("0.5-600", 1.0).is_err());
        assert!(parse_component("a:600", 1.0).is_err());
    }
}
