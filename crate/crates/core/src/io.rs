//! Spectrum CSV input, result JSON output and SVG plots.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use log::warn;
use serde::Serialize;

pub use crate::spectrum::Spectrum;

use crate::decomposer::{Attempt, DecompositionResult, Status};
use crate::diagnostics::{AdequacyReport, TestResult};
use crate::error::{Error, Result};
use crate::model::DebyeModel;
use crate::optimizer::TerminationReason;

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

struct Row {
    line: u64,
    t: f64,
    q: f64,
}

fn parse_field(record: &csv::StringRecord, idx: usize, name: &str, line: u64) -> Result<f64> {
    let raw = record.get(idx).unwrap_or("");
    let v: f64 =
        raw.parse().map_err(|_| Error::Parse { line, message: format!("cannot parse {name} value {raw:?}") })?;
    if !v.is_finite() {
        return Err(Error::Parse { line, message: format!("{name} value {raw:?} is not finite") });
    }
    Ok(v)
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        kind => Error::Parse { line, message: format!("{kind:?}") },
    }
}

/// Reads a spectrum from CSV text with header `T,Q` or `T,Q,var_eps`.
///
/// Lines starting with `#` are ignored. Rows out of temperature order are
/// sorted (with a warning); duplicate or non-positive temperatures and
/// non-finite values are rejected with the offending line number. A
/// `var_eps` column must hold the same value on every row.
pub fn read_spectrum_csv<R: Read>(reader: R) -> Result<Spectrum> {
    let mut rdr =
        csv::ReaderBuilder::new().has_headers(true).comment(Some(b'#')).trim(csv::Trim::All).from_reader(reader);

    let headers = rdr.headers().map_err(csv_error)?.clone();
    let header_line = headers.position().map_or(1, |p| p.line());
    let names: Vec<&str> = headers.iter().collect();
    let has_var = match names.as_slice() {
        ["T", "Q"] => false,
        ["T", "Q", "var_eps"] => true,
        _ => {
            return Err(Error::Parse {
                line: header_line,
                message: format!("expected header `T,Q` or `T,Q,var_eps`, found {:?}", names.join(",")),
            })
        }
    };

    let mut rows = Vec::new();
    let mut var_eps: Option<f64> = None;
    for rec in rdr.records() {
        let rec = rec.map_err(csv_error)?;
        let line = rec.position().map_or(0, |p| p.line());
        let t = parse_field(&rec, 0, "T", line)?;
        let q = parse_field(&rec, 1, "Q", line)?;
        if t <= 0.0 {
            return Err(Error::Parse { line, message: format!("temperature must be positive, got {t}") });
        }
        if has_var {
            let v = parse_field(&rec, 2, "var_eps", line)?;
            if v < 0.0 {
                return Err(Error::Parse { line, message: format!("var_eps must be non-negative, got {v}") });
            }
            match var_eps {
                None => var_eps = Some(v),
                Some(prev) if prev != v => {
                    return Err(Error::Parse { line, message: format!("var_eps must be constant ({prev} then {v})") })
                }
                _ => {}
            }
        }
        rows.push(Row { line, t, q });
    }

    if rows.windows(2).any(|w| w[1].t < w[0].t) {
        warn!("spectrum rows are not in ascending temperature order; sorting");
        rows.sort_by(|a, b| a.t.total_cmp(&b.t));
    }
    if let Some(w) = rows.windows(2).find(|w| w[1].t == w[0].t) {
        return Err(Error::Parse {
            line: w[0].line.max(w[1].line),
            message: format!("duplicate temperature {} (also on line {})", w[0].t, w[0].line.min(w[1].line)),
        });
    }

    let (t, q) = rows.into_iter().map(|r| (r.t, r.q)).unzip();
    Spectrum::new(t, q, var_eps)
}

pub fn read_spectrum_csv_path(path: impl AsRef<Path>) -> Result<Spectrum> {
    read_spectrum_csv(BufReader::new(File::open(path)?))
}

/// Writes a spectrum in the format `read_spectrum_csv` accepts. Values use
/// the shortest representation that parses back to the same `f64`.
pub fn write_spectrum_csv<W: Write>(spectrum: &Spectrum, mut out: W) -> Result<()> {
    match spectrum.var_eps() {
        Some(v) => {
            writeln!(out, "T,Q,var_eps")?;
            for (t, q) in spectrum.temperatures().iter().zip(spectrum.intensities()) {
                writeln!(out, "{t},{q},{v}")?;
            }
        }
        None => {
            writeln!(out, "T,Q")?;
            for (t, q) in spectrum.temperatures().iter().zip(spectrum.intensities()) {
                writeln!(out, "{t},{q}")?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

pub fn write_spectrum_csv_path(spectrum: &Spectrum, path: impl AsRef<Path>) -> Result<()> {
    write_spectrum_csv(spectrum, BufWriter::new(File::create(path)?))
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

/// Writes every float with 17 significant digits in exponent form, and
/// non-finite values as `null`.
struct SignificantDigits;

impl serde_json::ser::Formatter for SignificantDigits {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }
}

#[derive(Serialize)]
struct JsonComponent {
    #[serde(rename = "Q0")]
    q0: f64,
    #[serde(rename = "T0")]
    t0: f64,
    #[serde(rename = "E")]
    energy: f64,
}

#[derive(Serialize)]
struct JsonTest {
    statistic: f64,
    p_value: f64,
    passed: bool,
}

impl From<&TestResult> for JsonTest {
    fn from(t: &TestResult) -> Self {
        Self { statistic: t.statistic, p_value: t.p_value, passed: t.passed }
    }
}

#[derive(Serialize)]
struct JsonLag {
    lag: usize,
    statistic: f64,
    p_value: f64,
}

#[derive(Serialize)]
struct JsonAutocorrelation {
    lags: Vec<JsonLag>,
    passed: bool,
}

#[derive(Serialize)]
struct JsonReport {
    alpha: Option<f64>,
    normality: Option<JsonTest>,
    zero_mean: Option<JsonTest>,
    autocorrelation: Option<JsonAutocorrelation>,
    variance: Option<JsonTest>,
    adequate: bool,
    notes: Vec<String>,
}

impl From<&AdequacyReport> for JsonReport {
    fn from(r: &AdequacyReport) -> Self {
        let alpha = r
            .normality
            .map(|t| t.alpha)
            .or(r.zero_mean.map(|t| t.alpha))
            .or(r.autocorrelation.as_ref().map(|d| d.alpha));
        Self {
            alpha,
            normality: r.normality.as_ref().map(Into::into),
            zero_mean: r.zero_mean.as_ref().map(Into::into),
            autocorrelation: r.autocorrelation.as_ref().map(|d| JsonAutocorrelation {
                lags: d
                    .lags
                    .iter()
                    .map(|l| JsonLag { lag: l.lag, statistic: l.statistic, p_value: l.p_value })
                    .collect(),
                passed: d.passed,
            }),
            variance: r.variance.as_ref().map(Into::into),
            adequate: r.adequate,
            notes: r.notes.clone(),
        }
    }
}

#[derive(Serialize)]
struct JsonAttempt {
    n_components: usize,
    components: Option<Vec<JsonComponent>>,
    sse: Option<f64>,
    iterations: Option<usize>,
    converged: Option<bool>,
    termination_reason: Option<TerminationReason>,
    report: Option<JsonReport>,
    spurious_components: Vec<usize>,
    adequate: bool,
    warnings: Vec<String>,
    error: Option<String>,
}

#[derive(Serialize)]
struct JsonAccepted {
    n_components: usize,
    components: Vec<JsonComponent>,
    sse: f64,
    report: JsonReport,
}

#[derive(Serialize)]
struct JsonResult {
    status: Status,
    frequency: f64,
    accepted: Option<JsonAccepted>,
    attempts: Vec<JsonAttempt>,
}

fn json_components(attempt: &Attempt, model: &DebyeModel) -> Result<Option<Vec<JsonComponent>>> {
    let Some(fit) = &attempt.fit else { return Ok(None) };
    let comps = model.components(&fit.params)?;
    Ok(Some(comps.iter().map(|c| JsonComponent { q0: c.q0(), t0: c.t0(), energy: c.energy() }).collect()))
}

fn json_result(result: &DecompositionResult) -> Result<JsonResult> {
    let model = result.model()?;
    let attempts = result
        .attempts
        .iter()
        .map(|a| {
            Ok(JsonAttempt {
                n_components: a.n_components,
                components: json_components(a, &model)?,
                sse: a.fit.as_ref().map(|f| f.sse),
                iterations: a.fit.as_ref().map(|f| f.iterations),
                converged: a.fit.as_ref().map(|f| f.converged),
                termination_reason: a.fit.as_ref().map(|f| f.termination_reason),
                report: a.report.as_ref().map(Into::into),
                spurious_components: a.spurious_components.clone(),
                adequate: a.adequate,
                warnings: a.warnings.clone(),
                error: a.error.clone(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let accepted = match result.accepted_attempt() {
        Some(a) => {
            let (Some(fit), Some(report), Some(components)) = (&a.fit, &a.report, json_components(a, &model)?) else {
                return Err(Error::InvalidSpectrum("accepted attempt has no fit".into()));
            };
            Some(JsonAccepted { n_components: a.n_components, components, sse: fit.sse, report: report.into() })
        }
        None => None,
    };
    Ok(JsonResult { status: result.status, frequency: result.frequency, accepted, attempts })
}

/// Serializes a decomposition result as pretty-printed JSON with a fixed
/// key order and 17 significant digits per float.
pub fn write_result_json<W: Write>(result: &DecompositionResult, mut out: W) -> Result<()> {
    let doc = json_result(result)?;
    let mut ser = serde_json::Serializer::with_formatter(&mut out, PrettySignificant::default());
    doc.serialize(&mut ser)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

pub fn write_result_json_path(result: &DecompositionResult, path: impl AsRef<Path>) -> Result<()> {
    write_result_json(result, BufWriter::new(File::create(path)?))
}

pub fn result_json_string(result: &DecompositionResult) -> Result<String> {
    let mut buf = Vec::new();
    write_result_json(result, &mut buf)?;
    Ok(String::from_utf8(buf).expect("serde_json writes UTF-8"))
}

/// Pretty printing with the float format of [`SignificantDigits`].
#[derive(Default)]
struct PrettySignificant<'a> {
    pretty: serde_json::ser::PrettyFormatter<'a>,
}

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(
            fn $name<W: ?Sized + Write>(&mut self, writer: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.pretty.$name(writer $(, $arg)*)
            }
        )*
    };
}

impl serde_json::ser::Formatter for PrettySignificant<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        SignificantDigits.write_f64(writer, value)
    }

    fn write_f32<W: ?Sized + Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        SignificantDigits.write_f32(writer, value)
    }

    delegate! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        end_object_key();
        begin_object_value();
        end_object_value();
    }
}

// ---------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 620.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const MAIN_TOP: f64 = 50.0;
const MAIN_BOTTOM: f64 = 400.0;
const RES_TOP: f64 = 440.0;
const RES_BOTTOM: f64 = 570.0;
const CURVE_SAMPLES: usize = 400;
const COMPONENT_COLORS: [&str; 6] = ["#1f77b4", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2"];

struct Axis {
    lo: f64,
    hi: f64,
    px_lo: f64,
    px_hi: f64,
}

impl Axis {
    fn new(lo: f64, hi: f64, px_lo: f64, px_hi: f64) -> Self {
        let (lo, hi) = if hi > lo { (lo, hi) } else { (lo - 0.5, lo + 0.5) };
        Self { lo, hi, px_lo, px_hi }
    }

    fn map(&self, v: f64) -> f64 {
        self.px_lo + (v - self.lo) / (self.hi - self.lo) * (self.px_hi - self.px_lo)
    }
}

fn path_data(xs: &[f64], ys: &[f64], x: &Axis, y: &Axis) -> String {
    let mut d = String::new();
    for (i, (a, b)) in xs.iter().zip(ys).enumerate() {
        let cmd = if i == 0 { 'M' } else { 'L' };
        let _ = write!(d, "{cmd}{:.2},{:.2} ", x.map(*a), y.map(*b));
    }
    d.trim_end().to_string()
}

fn ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let span = hi - lo;
    if !(span > 0.0) {
        return vec![lo];
    }
    let raw = span / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * mag).find(|s| span / s <= target as f64).unwrap_or(10.0 * mag);
    let first = (lo / step).ceil() as i64;
    let last = (hi / step).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

fn fmt_tick(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

/// Renders the measured points, the fitted total curve, each component as a
/// dashed curve, and the residuals in a lower panel.
///
/// The accepted model is drawn if there is one, otherwise the last attempt
/// that produced a fit. Only component curves carry `stroke-dasharray`.
pub fn render_plot_svg(spectrum: &Spectrum, result: &DecompositionResult) -> Result<String> {
    let model = result.model()?;
    let attempt = result.accepted_attempt().or_else(|| result.attempts.iter().rev().find(|a| a.fit.is_some()));
    let fit = attempt.and_then(|a| a.fit.as_ref());

    let t = spectrum.temperatures();
    let q = spectrum.intensities();
    let (t_lo, t_hi) =
        spectrum.temperature_range().ok_or_else(|| Error::InvalidSpectrum("spectrum is empty".into()))?;
    let fine: Vec<f64> =
        (0..CURVE_SAMPLES).map(|i| t_lo + (t_hi - t_lo) * i as f64 / (CURVE_SAMPLES - 1) as f64).collect();

    let mut component_curves = Vec::new();
    let mut total = None;
    if let Some(fit) = fit {
        for comp in model.components(&fit.params)? {
            component_curves.push(crate::model::spectrum_model(&fine, &[comp], &model.constants)?);
        }
        total = Some(model.evaluate(&fine, &fit.params)?);
    }

    let mut y_lo = q.iter().copied().fold(0.0_f64, f64::min);
    let mut y_hi = q.iter().copied().fold(f64::MIN, f64::max);
    for curve in component_curves.iter().chain(total.iter()) {
        for &v in curve {
            y_lo = y_lo.min(v);
            y_hi = y_hi.max(v);
        }
    }
    let pad = 0.05 * (y_hi - y_lo).max(f64::EPSILON);
    let x_axis = Axis::new(t_lo, t_hi, LEFT, WIDTH - RIGHT);
    let y_axis = Axis::new(y_lo - pad, y_hi + pad, MAIN_BOTTOM, MAIN_TOP);

    let residuals: Vec<f64> = fit.map(|f| f.residuals.clone()).unwrap_or_default();
    let r_max = residuals.iter().fold(0.0_f64, |a, v| a.max(v.abs())).max(f64::EPSILON) * 1.1;
    let r_axis = Axis::new(-r_max, r_max, RES_BOTTOM, RES_TOP);

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let title = match (attempt, result.status) {
        (Some(a), Status::Adequate) => format!("{} components (adequate)", a.n_components),
        (Some(a), Status::CapReached) => format!("{} components (no adequate model found)", a.n_components),
        (None, _) => "no fit".to_string(),
    };
    let _ = writeln!(svg, r#"<text x="{}" y="30" text-anchor="middle" font-size="15">{title}</text>"#, WIDTH / 2.0);

    // frames
    for (top, bottom) in [(MAIN_TOP, MAIN_BOTTOM), (RES_TOP, RES_BOTTOM)] {
        let _ = writeln!(
            svg,
            r#"<rect x="{LEFT}" y="{top}" width="{}" height="{}" fill="none" stroke="black"/>"#,
            WIDTH - RIGHT - LEFT,
            bottom - top
        );
    }
    // ticks
    for v in ticks(t_lo, t_hi, 8) {
        let x = x_axis.map(v);
        let _ = writeln!(
            svg,
            r#"<line x1="{x:.2}" y1="{RES_BOTTOM}" x2="{x:.2}" y2="{}" stroke="black"/>"#,
            RES_BOTTOM + 5.0
        );
        let _ =
            writeln!(svg, r#"<text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"#, RES_BOTTOM + 18.0, fmt_tick(v));
    }
    for v in ticks(y_axis.lo, y_axis.hi, 6) {
        let y = y_axis.map(v);
        let _ = writeln!(svg, r#"<line x1="{}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/>"#, LEFT - 5.0);
        let _ =
            writeln!(svg, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, LEFT - 8.0, y + 4.0, fmt_tick(v));
    }
    for v in ticks(-r_max, r_max, 4) {
        let y = r_axis.map(v);
        let _ = writeln!(svg, r#"<line x1="{}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/>"#, LEFT - 5.0);
        let _ =
            writeln!(svg, r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#, LEFT - 8.0, y + 4.0, fmt_tick(v));
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">T (K)</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        HEIGHT - 12.0
    );
    let mid = (MAIN_TOP + MAIN_BOTTOM) / 2.0;
    let _ = writeln!(svg, r#"<text x="20" y="{mid}" text-anchor="middle" transform="rotate(-90 20 {mid})">Q</text>"#);
    let rmid = (RES_TOP + RES_BOTTOM) / 2.0;
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{rmid}" text-anchor="middle" transform="rotate(-90 20 {rmid})">residual</text>"#
    );

    // measured points
    let _ = writeln!(svg, r##"<g id="measured" fill="none" stroke="#444444">"##);
    for (a, b) in t.iter().zip(q) {
        let _ = writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="2"/>"#, x_axis.map(*a), y_axis.map(*b));
    }
    let _ = writeln!(svg, "</g>");

    // components and total
    let _ = writeln!(svg, r#"<g id="components" fill="none" stroke-width="1.2">"#);
    for (j, curve) in component_curves.iter().enumerate() {
        let color = COMPONENT_COLORS[j % COMPONENT_COLORS.len()];
        let _ = writeln!(
            svg,
            r#"<path d="{}" stroke="{color}" stroke-dasharray="6,4"/>"#,
            path_data(&fine, curve, &x_axis, &y_axis)
        );
    }
    let _ = writeln!(svg, "</g>");
    if let Some(total) = &total {
        let _ = writeln!(
            svg,
            r#"<path id="total" d="{}" fill="none" stroke="black" stroke-width="1.8"/>"#,
            path_data(&fine, total, &x_axis, &y_axis)
        );
    }

    // residual panel
    let zero = r_axis.map(0.0);
    let _ =
        writeln!(svg, r##"<line x1="{LEFT}" y1="{zero:.2}" x2="{}" y2="{zero:.2}" stroke="#888888"/>"##, WIDTH - RIGHT);
    let _ = writeln!(svg, r##"<g id="residuals" fill="#444444">"##);
    for (a, r) in t.iter().zip(&residuals) {
        let _ = writeln!(svg, r#"<circle cx="{:.2}" cy="{:.2}" r="1.5"/>"#, x_axis.map(*a), r_axis.map(*r));
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(svg, "</svg>");
    Ok(svg)
}

pub fn emit_plot_svg(spectrum: &Spectrum, result: &DecompositionResult, path: impl AsRef<Path>) -> Result<()> {
    let svg = render_plot_svg(spectrum, result)?;
    let mut f = BufWriter::new(File::create(path)?);
    f.write_all(svg.as_bytes())?;
    f.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::ser::Formatter;

    #[test]
    fn minimal_csv() {
        let s = read_spectrum_csv("T,Q\n400,0.1\n500,0.2".as_bytes()).unwrap();
        assert_eq!(s.temperatures(), &[400.0, 500.0]);
        assert_eq!(s.intensities(), &[0.1, 0.2]);
        assert_eq!(s.var_eps(), None);
    }

    #[test]
    fn duplicate_temperature_names_line() {
        let err = read_spectrum_csv("T,Q\n500,0.1\n500,0.2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn comments_var_eps_and_sorting() {
        let text = "# measured 2024\nT,Q,var_eps\n500,0.2,1e-4\n# mid comment\n400,0.1,1e-4\n";
        let s = read_spectrum_csv(text.as_bytes()).unwrap();
        assert_eq!(s.temperatures(), &[400.0, 500.0]);
        assert_eq!(s.intensities(), &[0.1, 0.2]);
        assert_eq!(s.var_eps(), Some(1e-4));
    }

    #[test]
    fn bad_inputs_are_positioned() {
        let cases = [
            ("T,Q\n400,0.1\n500,abc\n", 3),
            ("T,Q\n400,0.1\n-5,0.2\n", 3),
            ("T,Q\n400,NaN\n", 2),
            ("T,Q,var_eps\n400,0.1,1\n500,0.1,2\n", 3),
            ("T,Q\n400,0.1,7\n", 2),
            ("X,Y\n400,0.1\n", 1),
        ];
        for (text, line) in cases {
            match read_spectrum_csv(text.as_bytes()) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn float_format() {
        let mut buf = Vec::new();
        SignificantDigits.write_f64(&mut buf, 0.1).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "1.0000000000000001e-1");
    }

    #[test]
    fn ticks_are_round() {
        assert_eq!(ticks(350.0, 750.0, 8), vec![350.0, 400.0, 450.0, 500.0, 550.0, 600.0, 650.0, 700.0, 750.0]);
        assert_eq!(fmt_tick(0.30000000000000004), "0.3");
    }
}
