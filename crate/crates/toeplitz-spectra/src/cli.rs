use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use toeplitz_spectra::error::Error;
use toeplitz_spectra::exact::{char_poly, reduced_matrix, unit_toeplitz};
use toeplitz_spectra::mp::{MPComplex, MPReal};
use toeplitz_spectra::par;
use toeplitz_spectra::params::{compute_params, SymbolSpec};
use toeplitz_spectra::spectrum::{check_constructible, degenerate_spectrum, full_spectrum, symbol_spectrum, Spectrum};
use toeplitz_spectra::verify::{bench_point, write_reports_jsonl, VerificationReport, EXACT_IDENTITY_GUIDELINE};

const VALIDATION_EXIT: i32 = 1;
const COMPUTE_EXIT: i32 = 2;

#[derive(Parser)]
#[command(
    name = "toeplitz-spectra",
    version,
    about = "Spectra of Toeplitz matrices with two off-diagonals: exact reduced matrices, characteristic polynomials, and high-precision eigenvalues"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the derived integer parameters for (n, r, s)
    Params(ParamsArgs),
    /// Full spectrum of the unit two-diagonal matrix, or of a general
    /// symbol when coefficients are given
    Spectrum(SpectrumArgs),
    /// Dump the reduced integer matrix (exact, decimal strings)
    Bmatrix(BmatrixArgs),
    /// Exact characteristic polynomial of the full or reduced matrix
    Charpoly(CharpolyArgs),
    /// Exact identity check plus a numeric cross-check per point
    Verify(SweepArgs),
    /// Timing sweep: reduction algorithm vs dense oracle
    Bench(BenchArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the artifact here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ParamsArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    s: usize,
    /// Allow r > s by transposing (a stderr notice is printed)
    #[arg(long)]
    transpose_ok: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SpectrumArgs {
    #[arg(long)]
    n: usize,
    /// Subdiagonal offset; negative values put both off-diagonals on one
    /// side, which is the degenerate constant-spectrum case
    #[arg(long)]
    r: i64,
    /// Superdiagonal offset (negative: degenerate case, see --r)
    #[arg(long)]
    s: i64,
    /// Working precision in bits (>= 53)
    #[arg(long, env = "TOEPLITZ_SPECTRA_PRECISION", default_value_t = 256)]
    precision: usize,
    /// Constant coefficient, e.g. "1.5" or "1+2i"
    #[arg(long)]
    f0: Option<String>,
    /// Subdiagonal coefficient
    #[arg(long)]
    fr: Option<String>,
    /// Superdiagonal coefficient
    #[arg(long)]
    fms: Option<String>,
    #[arg(long)]
    transpose_ok: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BmatrixArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    s: usize,
    #[arg(long)]
    transpose_ok: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CharpolyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    s: usize,
    /// Characteristic polynomial of the reduced matrix instead of the full one
    #[arg(long)]
    bmatrix: bool,
    #[arg(long)]
    transpose_ok: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Orders to verify: a value, a comma list, or an inclusive range "a-b"
    #[arg(long)]
    n: String,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    s: usize,
    #[arg(long, env = "TOEPLITZ_SPECTRA_PRECISION", default_value_t = 256)]
    precision: usize,
    /// Restrict the error metric to nonzero eigenvalues
    #[arg(long)]
    nonzero_only: bool,
    /// Worker threads for the sweep
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    transpose_ok: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// Orders to time: a value, a comma list, or an inclusive range "a-b"
    #[arg(long)]
    n: String,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    s: usize,
    /// Precisions in bits, comma separated
    #[arg(long, default_value = "53,256")]
    precisions: String,
    /// Repetitions per timing (minimum is reported)
    #[arg(long, default_value_t = 3)]
    reps: usize,
    #[arg(long)]
    nonzero_only: bool,
    #[arg(long)]
    jobs: Option<usize>,
    #[arg(long)]
    transpose_ok: bool,
    #[command(flatten)]
    output: OutputArgs,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn validation(message: impl Into<String>) -> Self {
        Failure { code: VALIDATION_EXIT, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: if e.is_validation() { VALIDATION_EXIT } else { COMPUTE_EXIT },
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure { code: COMPUTE_EXIT, message: format!("i/o error: {e}") }
    }
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            // malformed flags are a validation failure
            let _ = write!(io::stderr(), "{e}");
            return VALIDATION_EXIT;
        }
        Err(e) => {
            // --help / --version
            let _ = write!(io::stdout(), "{e}");
            return 0;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Params(a) => cmd_params(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Bmatrix(a) => cmd_bmatrix(a),
        Command::Charpoly(a) => cmd_charpoly(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

fn emit(out: &Option<PathBuf>, body: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            let mut f = File::create(path)?;
            f.write_all(body.as_bytes())?;
            if !body.ends_with('\n') {
                f.write_all(b"\n")?;
            }
        }
        None => println!("{body}"),
    }
    Ok(())
}

/// Normalize offsets: reject r > s unless transposition was allowed.
fn normalize_offsets(r: usize, s: usize, transpose_ok: bool) -> Result<(usize, usize), Failure> {
    if r == 0 || s == 0 {
        return Err(Failure::validation(format!(
            "offsets must be positive, got r={r}, s={s}"
        )));
    }
    if r > s {
        if transpose_ok {
            eprintln!("note: r={r} > s={s}; computing the transposed problem (identical spectrum)");
            return Ok((s, r));
        }
        return Err(Failure::validation(format!(
            "r={r} exceeds s={s}; pass --transpose-ok to study the transposed matrix"
        )));
    }
    Ok((r, s))
}

fn check_precision(p: usize) -> Result<(), Failure> {
    if p < 53 {
        return Err(Failure::validation(format!(
            "precision must be at least 53 bits, got {p}"
        )));
    }
    Ok(())
}

/// Complex literal: optional real part, optional imaginary part with an `i`
/// suffix. Examples: "1.5", "2i", "1+2i", "-0.5-1i", "3e-2+1.5e1i".
fn parse_complex(lit: &str, prec: usize) -> Result<MPComplex, Failure> {
    let bad = || Failure::from(Error::BadComplexLiteral { literal: lit.to_string() });
    let t = lit.trim().replace(' ', "");
    if t.is_empty() {
        return Err(bad());
    }
    let parse_real = |s: &str| -> Result<MPReal, Failure> {
        MPReal::parse(s, prec).map_err(|_| bad())
    };
    let parse_imag_part = |s: &str| -> Result<MPReal, Failure> {
        match s {
            "" | "+" => Ok(MPReal::one(prec)),
            "-" => Ok(MPReal::one(prec).neg()),
            other => parse_real(other),
        }
    };
    if let Some(head) = t.strip_suffix(['i', 'I']) {
        // find the sign separating real and imaginary parts: the last +/-
        // that is neither leading nor an exponent sign
        let bytes = head.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let c = bytes[idx];
            if (c == b'+' || c == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
                split = Some(idx);
                break;
            }
        }
        match split {
            Some(idx) => {
                let re = parse_real(&head[..idx])?;
                let im = parse_imag_part(&head[idx..])?;
                Ok(MPComplex::new(re, im))
            }
            None => Ok(MPComplex::new(MPReal::zero(prec), parse_imag_part(head)?)),
        }
    } else {
        Ok(MPComplex::new(parse_real(&t)?, MPReal::zero(prec)))
    }
}

/// Orders spec: "17", "12,13,17", or "12-17" (inclusive).
fn parse_orders(spec: &str) -> Result<Vec<usize>, Failure> {
    let bad = || Failure::validation(format!("invalid order list {spec:?}; use N, a,b,c or a-b"));
    let t = spec.trim();
    if let Some((a, b)) = t.split_once('-') {
        let lo: usize = a.trim().parse().map_err(|_| bad())?;
        let hi: usize = b.trim().parse().map_err(|_| bad())?;
        if lo == 0 || hi < lo {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    let vals: Result<Vec<usize>, _> = t.split(',').map(|v| v.trim().parse::<usize>()).collect();
    let vals = vals.map_err(|_| bad())?;
    if vals.is_empty() || vals.contains(&0) {
        return Err(bad());
    }
    Ok(vals)
}

fn spectrum_to_json(spec: &Spectrum, params: Option<&toeplitz_spectra::params::ParamSet>) -> serde_json::Value {
    let eigenvalues: Vec<serde_json::Value> = spec
        .values()
        .iter()
        .map(|v| json!({ "re": v.re.to_decimal_string(), "im": v.im.to_decimal_string() }))
        .collect();
    json!({
        "params": params,
        "precision_bits": spec.precision(),
        "eigenvalues": eigenvalues,
    })
}

fn spectrum_to_csv(spec: &Spectrum) -> String {
    let mut s = String::from("re,im\n");
    for v in spec.values() {
        s.push_str(&v.re.to_decimal_string());
        s.push(',');
        s.push_str(&v.im.to_decimal_string());
        s.push('\n');
    }
    s.pop();
    s
}

fn cmd_params(a: ParamsArgs) -> Result<(), Failure> {
    let (r, s) = normalize_offsets(a.r, a.s, a.transpose_ok)?;
    let params = compute_params(a.n, r, s)?;
    let body = match a.output.format {
        Format::Json => serde_json::to_string_pretty(&params).expect("params serialize"),
        Format::Csv => {
            let head = "n,r,s,gamma,sigma,omega,beta_sigma,n_sigma,beta_gamma,n_gamma,r_gamma,s_gamma,sigma_gamma,beta_gamma_sigma,n_gamma_sigma,n_zero";
            let row = format!(
                "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                params.n,
                params.r,
                params.s,
                params.gamma,
                params.sigma,
                params.omega,
                params.beta_sigma,
                params.n_sigma,
                params.beta_gamma,
                params.n_gamma,
                params.r_gamma,
                params.s_gamma,
                params.sigma_gamma,
                params.beta_gamma_sigma,
                params.n_gamma_sigma,
                params.n_zero
            );
            format!("{head}\n{row}")
        }
    };
    emit(&a.output.out, &body)
}

fn cmd_spectrum(a: SpectrumArgs) -> Result<(), Failure> {
    check_precision(a.precision)?;
    if a.n == 0 {
        return Err(Failure::validation("n must be positive"));
    }
    let p = a.precision;
    let wants_symbol = a.f0.is_some() || a.fr.is_some() || a.fms.is_some();
    let f0 = match &a.f0 {
        Some(lit) => parse_complex(lit, p)?,
        None => MPComplex::zero(p),
    };

    // same-side layout: exactly one negative offset makes both diagonals
    // land on the same side of the main diagonal
    if a.r == 0 || a.s == 0 {
        return Err(Failure::validation("offsets must be nonzero"));
    }
    if a.r < 0 || a.s < 0 {
        if a.r < 0 && a.s < 0 {
            return Err(Failure::validation(
                "both offsets negative is the transposed general case; negate both and swap coefficients",
            ));
        }
        let spec = degenerate_spectrum(a.n, &f0, p);
        let body = match a.output.format {
            Format::Json => spectrum_to_json(&spec, None).to_string(),
            Format::Csv => spectrum_to_csv(&spec),
        };
        return emit(&a.output.out, &body);
    }

    let (r, s) = normalize_offsets(a.r as usize, a.s as usize, a.transpose_ok)?;
    check_constructible(a.n, r, s)?;
    let params = compute_params(a.n, r, s)?;
    let spec = if wants_symbol {
        let fr = match &a.fr {
            Some(lit) => parse_complex(lit, p)?,
            None => MPComplex::one(p),
        };
        let fms = match &a.fms {
            Some(lit) => parse_complex(lit, p)?,
            None => MPComplex::one(p),
        };
        if fr.is_zero() || fms.is_zero() {
            degenerate_spectrum(a.n, &f0, p)
        } else {
            let sym = SymbolSpec::new(r, s, f0, fr, fms)?;
            symbol_spectrum(a.n, &sym, p)?
        }
    } else {
        full_spectrum(a.n, r, s, p)?
    };
    let body = match a.output.format {
        Format::Json => spectrum_to_json(&spec, Some(&params)).to_string(),
        Format::Csv => spectrum_to_csv(&spec),
    };
    emit(&a.output.out, &body)
}

fn cmd_bmatrix(a: BmatrixArgs) -> Result<(), Failure> {
    let (r, s) = normalize_offsets(a.r, a.s, a.transpose_ok)?;
    let b = reduced_matrix(a.n, r, s)?;
    let body = serde_json::to_string(&b).expect("matrix serialize");
    emit(&a.out, &body)
}

fn cmd_charpoly(a: CharpolyArgs) -> Result<(), Failure> {
    let (r, s) = normalize_offsets(a.r, a.s, a.transpose_ok)?;
    let m = if a.bmatrix {
        reduced_matrix(a.n, r, s)?
    } else {
        unit_toeplitz(a.n, r, s)?
    };
    let poly = char_poly(&m)?;
    let coeffs: Vec<String> = poly.coefficients().iter().map(|c| c.to_string()).collect();
    let body = match a.output.format {
        Format::Json => json!({
            "matrix": if a.bmatrix { "reduced" } else { "full" },
            "n": a.n, "r": r, "s": s,
            "degree": poly.degree(),
            "coefficients": coeffs,
        })
        .to_string(),
        Format::Csv => coeffs.join(","),
    };
    emit(&a.output.out, &body)
}

fn reports_to_body(reports: &[VerificationReport], format: Format) -> String {
    match format {
        Format::Json => {
            let mut buf = Vec::new();
            write_reports_jsonl(reports, &mut buf).expect("in-memory write");
            let mut s = String::from_utf8(buf).expect("utf8");
            if s.ends_with('\n') {
                s.pop();
            }
            s
        }
        Format::Csv => {
            let mut s = String::from(
                "n,r,s,precision,exact_identity_holds,numeric_error,algorithm_runtime,oracle_runtime,n_zero",
            );
            for rep in reports {
                s.push_str(&format!(
                    "\n{},{},{},{},{},{},{},{},{}",
                    rep.params.n,
                    rep.params.r,
                    rep.params.s,
                    rep.precision,
                    rep.exact_identity_holds.map_or("".to_string(), |b| b.to_string()),
                    rep.numeric_error.to_decimal_string(),
                    rep.algorithm_runtime,
                    rep.oracle_runtime,
                    rep.params.n_zero,
                ));
            }
            s
        }
    }
}

fn run_sweep(
    orders: Vec<usize>,
    r: usize,
    s: usize,
    precisions: Vec<usize>,
    reps: usize,
    nonzero_only: bool,
    jobs: Option<usize>,
) -> Result<Vec<VerificationReport>, Failure> {
    // fail fast on construction-regime points before spending any time
    for &n in &orders {
        check_constructible(n, r, s)?;
    }
    let results = par::with_jobs(jobs, move || {
        par::map(orders, move |n| {
            bench_point_with_metric(n, r, s, &precisions, reps, nonzero_only)
        })
    });
    let mut reports = Vec::new();
    for r in results {
        reports.extend(r?);
    }
    Ok(reports)
}

fn bench_point_with_metric(
    n: usize,
    r: usize,
    s: usize,
    precisions: &[usize],
    reps: usize,
    nonzero_only: bool,
) -> Result<Vec<VerificationReport>, Error> {
    let mut reports = bench_point(n, r, s, precisions, reps)?;
    if !nonzero_only {
        // recompute the error without dropping zeros
        for rep in &mut reports {
            let alg = full_spectrum(n, r, s, rep.precision)?;
            let orc = toeplitz_spectra::verify::oracle_spectrum(n, r, s, rep.precision)?;
            rep.numeric_error = toeplitz_spectra::verify::spectral_error(&alg, &orc, false)?;
        }
    }
    Ok(reports)
}

fn cmd_verify(a: SweepArgs) -> Result<(), Failure> {
    check_precision(a.precision)?;
    let (r, s) = normalize_offsets(a.r, a.s, a.transpose_ok)?;
    let orders = parse_orders(&a.n)?;
    for &n in &orders {
        if n <= EXACT_IDENTITY_GUIDELINE {
            continue;
        }
        eprintln!("note: n={n} is past the exact-polynomial guideline; identity check skipped");
    }
    let reports = run_sweep(orders, r, s, vec![a.precision], 1, a.nonzero_only, a.jobs)?;
    let body = reports_to_body(&reports, a.output.format);
    emit(&a.output.out, &body)
}

fn cmd_bench(a: BenchArgs) -> Result<(), Failure> {
    let (r, s) = normalize_offsets(a.r, a.s, a.transpose_ok)?;
    let orders = parse_orders(&a.n)?;
    let precisions: Result<Vec<usize>, _> =
        a.precisions.split(',').map(|v| v.trim().parse::<usize>()).collect();
    let precisions = precisions
        .map_err(|_| Failure::validation(format!("invalid precision list {:?}", a.precisions)))?;
    for &p in &precisions {
        check_precision(p)?;
    }
    if a.reps == 0 {
        return Err(Failure::validation("reps must be positive"));
    }
    let reports = run_sweep(orders, r, s, precisions, a.reps, a.nonzero_only, a.jobs)?;
    let body = reports_to_body(&reports, a.output.format);
    emit(&a.output.out, &body)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        let p = 128;
        let c = |s: &str| parse_complex(s, p).unwrap();
        assert!(c("1.5") == MPComplex::new(MPReal::from_f64(1.5, p), MPReal::zero(p)));
        assert!(c("2i") == MPComplex::from_i64(0, 2, p));
        assert!(c("1+2i") == MPComplex::from_i64(1, 2, p));
        assert!(c("-0.5-1i") == MPComplex::new(MPReal::from_f64(-0.5, p), MPReal::from_i64(-1, p)));
        assert!(c("i") == MPComplex::from_i64(0, 1, p));
        assert!(c("-i") == MPComplex::from_i64(0, -1, p));
        assert!(c("3e-2+1.5e1i") == MPComplex::new(MPReal::from_f64(0.03, p), MPReal::from_f64(15.0, p)));
        assert!(parse_complex("blah", p).is_err());
        assert!(parse_complex("", p).is_err());
    }

    #[test]
    fn order_lists() {
        assert_eq!(parse_orders("17").unwrap(), vec![17]);
        assert_eq!(parse_orders("12-15").unwrap(), vec![12, 13, 14, 15]);
        assert_eq!(parse_orders("3,9,5").unwrap(), vec![3, 9, 5]);
        assert!(parse_orders("0").is_err());
        assert!(parse_orders("9-3").is_err());
        assert!(parse_orders("x").is_err());
    }
}
