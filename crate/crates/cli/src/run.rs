use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use serde::Serialize;
use serde_json::json;

use unitgraph::cayley::{bfs_diameter, dense_spectrum_oracle, spectrum_by_classes, CayleyGraphSpec, Connection};
use unitgraph::decomp::{sum_of_sl_zero, sum_of_two_sl, sum_of_two_units, verify_decomposition, DecompositionWitness};
use unitgraph::gf::{parse_poly, prime_power};
use unitgraph::matring::GroupCounts;
use unitgraph::normform::sl_normal_form;
use unitgraph::spectra::{kloosterman_table, srg_check_bruteforce, srg_eigen_from_params, srg_params_unit_mat2};
use unitgraph::sumprod::{
    det_difference_witness, gap_threshold, gap_trials, parse_codes, sumprod_cover, sumprod_trials, SubsetOfField,
    SubsetOfRing,
};
use unitgraph::verify::{run_all, run_at, run_criterion, CriterionResult};
use unitgraph::{Error, Field, Matrix};

use crate::args::{Cli, Command, FieldArgs, Format, Mode};

/// Exit statuses: success, failed verification, bad usage, module error.
const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_MODULE: u8 = 3;

enum Failure {
    Usage { code: &'static str, message: String },
    Module(Error),
    Verify,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Module(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Module(e.into())
    }
}

fn usage(code: &'static str, message: impl Into<String>) -> Failure {
    Failure::Usage { code, message: message.into() }
}

struct Out {
    format: Format,
    w: Box<dyn Write>,
}

impl Out {
    fn json<T: Serialize>(&mut self, v: &T) -> io::Result<()> {
        serde_json::to_writer(&mut self.w, v)?;
        self.w.write_all(b"\n")
    }

    fn line(&mut self, s: impl AsRef<str>) -> io::Result<()> {
        writeln!(self.w, "{}", s.as_ref())
    }
}

pub fn run(cli: Cli) -> ExitCode {
    let w: Box<dyn Write> = match &cli.out {
        Some(path) => match fs::File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => {
                eprintln!("error: cannot create {}: {e}", path.display());
                return ExitCode::from(EXIT_USAGE);
            }
        },
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let mut out = Out { format: cli.format, w };
    let result = dispatch(cli.command, &mut out);
    let status = match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(EXIT_VERIFY),
        Err(Failure::Usage { code, message }) => {
            report_error(&mut out, code, &message);
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Module(e)) => {
            report_error(&mut out, e.code(), &e.to_string());
            ExitCode::from(EXIT_MODULE)
        }
    };
    if out.w.flush().is_err() {
        return ExitCode::from(EXIT_MODULE);
    }
    status
}

fn report_error(out: &mut Out, code: &str, message: &str) {
    eprintln!("error[{code}]: {message}");
    if out.format == Format::Json {
        let _ = out.json(&json!({ "error": { "code": code, "message": message } }));
    }
}

fn field_of(args: &FieldArgs) -> Result<Field, Failure> {
    let poly = match &args.poly {
        Some(s) => Some(parse_poly(s).map_err(|e| usage("invalid_field", e.to_string()))?),
        None => None,
    };
    let (p, k) = match (args.p, args.q) {
        (Some(p), q) => {
            let k = args.k.unwrap_or(1);
            if let Some(q) = q {
                if (p as u64).checked_pow(k) != Some(q as u64) {
                    return Err(usage("invalid_field", format!("--q {q} disagrees with --p {p} --k {k}")));
                }
            }
            (p, k)
        }
        (None, Some(q)) => {
            let (p, k) = prime_power(q).ok_or_else(|| usage("invalid_field", format!("{q} is not a prime power")))?;
            if args.k.is_some_and(|given| given != k) {
                return Err(usage("invalid_field", format!("--k disagrees with --q {q}")));
            }
            (p, k)
        }
        (None, None) => return Err(usage("missing_argument", "one of --q or --p is required")),
    };
    Field::new(p, k, poly.as_deref()).map_err(|e| usage("invalid_field", e.to_string()))
}

fn given(args: &FieldArgs) -> bool {
    args.q.is_some() || args.p.is_some()
}

fn parse_matrix(args: &FieldArgs, literal: &str) -> Result<Matrix, Failure> {
    if given(args) {
        Ok(Matrix::parse_literal(literal, &field_of(args)?)?)
    } else {
        Ok(Matrix::from_literal(literal)?)
    }
}

fn graph_spec(field: &FieldArgs, n: usize, connection: &str) -> Result<CayleyGraphSpec, Failure> {
    let f = field_of(field)?;
    let c: Connection = connection.parse().map_err(|e: Error| usage("invalid_connection", e.to_string()))?;
    Ok(CayleyGraphSpec::new(n, &f, c)?)
}

fn read_codes(path: &Path) -> Result<Vec<u64>, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(parse_codes(&text)?)
}

fn dispatch(command: Command, out: &mut Out) -> Result<(), Failure> {
    match command {
        Command::Counts { field, n } => counts(out, &field, n),
        Command::Spectrum { field, n, connection, dense } => spectrum(out, &field, n, &connection, dense),
        Command::Srg { field, n, connection } => srg(out, &field, n, &connection),
        Command::Kloosterman { field } => kloosterman(out, &field),
        Command::NormalForm { field, matrix } => normal_form(out, &field, &matrix),
        Command::Decompose { field, n, mode, matrix } => decompose(out, &field, n, mode, &matrix),
        Command::Diameter { field, n, connection } => diameter(out, &field, n, &connection),
        Command::GapCheck { field, alpha, x, y, trials, seed } => gap_check(out, &field, alpha, x.zip(y), trials, seed),
        Command::Sumprod { field, a, b, c, d, trials, seed } => sumprod(out, &field, a, [b, c, d], trials, seed),
        Command::Verify { q, n, criterion } => verify(out, q.zip(n), criterion),
    }
}

fn counts(out: &mut Out, field: &FieldArgs, n: usize) -> Result<(), Failure> {
    let f = field_of(field)?;
    let c = GroupCounts::new(n, f.q());
    match out.format {
        Format::Json => out.json(&c.to_json())?,
        Format::Csv => {
            out.line("n,q,gl,sl,phi")?;
            out.line(format!("{},{},{},{},{}/{}", n, f.q(), c.gl_order, c.sl_order, c.phi.numer(), c.phi.denom()))?;
        }
        Format::Text => out.line(format!(
            "n={n} q={}: |GL| = {}, |SL| = {}, phi = {}/{}",
            f.q(),
            c.gl_order,
            c.sl_order,
            c.phi.numer(),
            c.phi.denom()
        ))?,
    }
    Ok(())
}

fn spectrum(out: &mut Out, field: &FieldArgs, n: usize, connection: &str, dense: bool) -> Result<(), Failure> {
    let spec = graph_spec(field, n, connection)?;
    let r = spectrum_by_classes(&spec)?;
    let deviation = if dense {
        let oracle = dense_spectrum_oracle(&spec)?;
        Some(oracle.iter().zip(r.expanded()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    } else {
        None
    };
    match out.format {
        Format::Json => {
            out.json(&r)?;
            if let Some(d) = deviation {
                out.json(&json!({ "dense_max_deviation": d }))?;
            }
        }
        Format::Csv => {
            out.line("label,rep,re,im,mult")?;
            for c in &r.classes {
                let (re, im) = (unitgraph::cayley::tidy(c.eig.re), unitgraph::cayley::tidy(c.eig.im));
                out.line(format!("{},{},{re},{im},{}", c.label, c.rep, c.mult))?;
            }
        }
        Format::Text => {
            out.line(format!("Cay(Mat_{n}(F_{}), {}): {} classes", spec.q(), spec.connection, r.classes.len()))?;
            for c in &r.classes {
                out.line(format!("  {:<8} {:<24} {:>14.6} {:+.6}i  x{}", c.label, c.rep.to_string(), c.eig.re, c.eig.im, c.mult))?;
            }
            let merged: Vec<String> = r.merged.iter().map(|m| format!("{:.6}^{}", m.eig.re, m.mult)).collect();
            out.line(format!("  merged: {}", merged.join(", ")))?;
            if let Some(d) = deviation {
                out.line(format!("  dense oracle max deviation: {d:.3e}"))?;
            }
        }
    }
    Ok(())
}

fn srg(out: &mut Out, field: &FieldArgs, n: usize, connection: &str) -> Result<(), Failure> {
    let spec = graph_spec(field, n, connection)?;
    let params = srg_check_bruteforce(&spec)?;
    let closed = (n == 2 && spec.connection == Connection::Invertible).then(|| srg_params_unit_mat2(spec.q() as u64));
    let eigen = params.as_ref().map(srg_eigen_from_params).transpose()?;
    let verdict = if params.is_some() { "strongly regular" } else { "not strongly regular" };
    match out.format {
        Format::Text => {
            let detail = params.map(|p| format!(" ({}, {}, {}, {})", p.v, p.k, p.a, p.c)).unwrap_or_default();
            out.line(format!("{verdict}{detail}"))?;
        }
        _ => out.json(&json!({
            "graph": spec.label(),
            "verdict": verdict,
            "params": params,
            "closed_form": closed,
            "matches_closed_form": closed.map(|c| Some(c) == params),
            "eigen": eigen,
        }))?,
    }
    Ok(())
}

fn kloosterman(out: &mut Out, field: &FieldArgs) -> Result<(), Failure> {
    let rows = kloosterman_table(&field_of(field)?);
    match out.format {
        Format::Json => rows.iter().try_for_each(|r| out.json(r))?,
        Format::Csv => {
            out.line("q,delta,K,weil_bound")?;
            for r in &rows {
                let (k, w) = (unitgraph::cayley::tidy(r.k), unitgraph::cayley::tidy(r.weil_bound));
                out.line(format!("{},{},{k},{w}", r.q, r.delta))?;
            }
        }
        Format::Text => {
            for r in &rows {
                out.line(format!("K({}) = {:.6}   |K| <= {:.6}", r.delta, r.k, r.weil_bound))?;
            }
        }
    }
    Ok(())
}

fn normal_form(out: &mut Out, field: &FieldArgs, literal: &str) -> Result<(), Failure> {
    let a = parse_matrix(field, literal)?;
    let w = sl_normal_form(&a);
    if !w.verify() {
        return Err(Failure::Module(Error::Unsupported("normal-form witness failed its own check".into())));
    }
    match out.format {
        Format::Text => {
            out.line(format!("A = {}", w.input))?;
            out.line(format!("D = {}  (rank {})", w.d, w.rank()))?;
            out.line(format!("P = {}", w.p))?;
            out.line(format!("Q = {}", w.q))?;
            out.line(format!("{} elementary operations", w.ops.len()))?;
        }
        _ => out.json(&w)?,
    }
    Ok(())
}

#[derive(Serialize)]
struct DecomposeReport<'a> {
    #[serde(flatten)]
    witness: &'a DecompositionWitness,
    verified: bool,
}

fn decompose(out: &mut Out, field: &FieldArgs, n: Option<usize>, mode: Mode, literal: &str) -> Result<(), Failure> {
    let a = parse_matrix(field, literal)?;
    if let Some(n) = n {
        if n != a.n() {
            return Err(Error::DimensionMismatch(n, a.n()).into());
        }
    }
    let w = match mode {
        Mode::Units => sum_of_two_units(&a)?,
        Mode::Sl if a.is_zero() && a.n() >= 2 => sum_of_sl_zero(a.n(), a.field())?,
        Mode::Sl => sum_of_two_sl(&a)?,
    };
    let verified = verify_decomposition(&w);
    match out.format {
        Format::Text => {
            let parts: Vec<String> = w.summands.iter().map(Matrix::to_string).collect();
            out.line(format!("{} = {}", w.target, parts.join(" + ")))?;
        }
        _ => out.json(&DecomposeReport { witness: &w, verified })?,
    }
    if verified {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn diameter(out: &mut Out, field: &FieldArgs, n: usize, connection: &str) -> Result<(), Failure> {
    let spec = graph_spec(field, n, connection)?;
    let d = bfs_diameter(&spec)?;
    match out.format {
        Format::Text => out.line(if d.connected {
            format!("connected, diameter {}", d.diameter)
        } else {
            "not connected".to_string()
        })?,
        _ => out.json(&json!({ "graph": spec.label(), "connected": d.connected, "diameter": d.diameter }))?,
    }
    Ok(())
}

fn gap_check(
    out: &mut Out,
    field: &FieldArgs,
    alpha: u16,
    sets: Option<(std::path::PathBuf, std::path::PathBuf)>,
    trials: usize,
    seed: u64,
) -> Result<(), Failure> {
    let f = field_of(field)?;
    let Some((xp, yp)) = sets else {
        let r = gap_trials(&f, trials, seed)?;
        match out.format {
            Format::Text => out.line(format!(
                "q={}: {} trials (seed {}), n* = {:.6}, failures {:?}",
                r.q, r.trials, r.seed, r.nstar_exact, r.failures
            ))?,
            _ => out.json(&r)?,
        }
        return if r.failures.is_empty() { Ok(()) } else { Err(Failure::Verify) };
    };
    let alpha = f.elem(alpha as u32)?;
    if alpha.is_zero() {
        return Err(Error::ZeroAlpha.into());
    }
    let x = SubsetOfRing::new(2, &f, read_codes(&xp)?)?;
    let y = SubsetOfRing::new(2, &f, read_codes(&yp)?)?;
    let t = gap_threshold(&f)?;
    let mean = ((x.len() * y.len()) as f64).sqrt();
    let witness = det_difference_witness(&x, &y, alpha)?;
    match out.format {
        Format::Text => {
            out.line(format!("sqrt(|X||Y|) = {mean:.6}, n* = {:.6} (weil {:.6})", t.exact, t.weil))?;
            out.line(match &witness {
                Some((m, n)) => format!("det({m} - {n}) = {alpha}"),
                None => format!("no pair with det(M - N) = {alpha}"),
            })?;
        }
        _ => out.json(&json!({
            "q": f.q(),
            "alpha": alpha,
            "size_x": x.len(),
            "size_y": y.len(),
            "sqrt_xy": mean,
            "threshold": t,
            "above_exact_threshold": mean > t.exact,
            "witness": witness,
        }))?,
    }
    Ok(())
}

fn sumprod(
    out: &mut Out,
    field: &FieldArgs,
    a: Option<std::path::PathBuf>,
    rest: [Option<std::path::PathBuf>; 3],
    trials: usize,
    seed: u64,
) -> Result<(), Failure> {
    let f = field_of(field)?;
    let Some(ap) = a else {
        let r = sumprod_trials(&f, trials, seed)?;
        match out.format {
            Format::Text => out.line(format!("q={}: {} trials (seed {}), failures {:?}", r.q, r.trials, r.seed, r.failures))?,
            _ => out.json(&r)?,
        }
        return if r.failures.is_empty() { Ok(()) } else { Err(Failure::Verify) };
    };
    let a = SubsetOfField::new(&f, read_codes(&ap)?)?;
    let load = |p: Option<std::path::PathBuf>| -> Result<SubsetOfField, Failure> {
        match p {
            Some(p) => Ok(SubsetOfField::new(&f, read_codes(&p)?)?),
            None => Ok(a.clone()),
        }
    };
    let [b, c, d] = rest;
    let (b, c, d) = (load(b)?, load(c)?, load(d)?);
    let r = sumprod_cover(&a, &b, &c, &d)?;
    match out.format {
        Format::Text => {
            let set: Vec<String> = r.set.iter().map(|e| e.to_string()).collect();
            out.line(format!("(A-B)(C-D) = {{{}}}", set.join(", ")))?;
            out.line(format!("covers F_{}: {}", r.q, r.covers_all))?;
        }
        _ => out.json(&r)?,
    }
    Ok(())
}

fn verify(out: &mut Out, size: Option<(u32, usize)>, criterion: Option<u8>) -> Result<(), Failure> {
    if let Some((q, _)) = size {
        if prime_power(q).is_none() {
            return Err(usage("invalid_field", format!("{q} is not a prime power")));
        }
        Field::with_order(q).map_err(|e| usage("invalid_field", e.to_string()))?;
    }
    let results: Vec<CriterionResult> = match (size, criterion) {
        (Some((q, n)), _) => run_at(n, q),
        (None, Some(id)) => vec![run_criterion(id)],
        (None, None) => run_all(),
    };
    let failed = results.iter().filter(|r| !r.passed).count();
    match out.format {
        Format::Text => {
            for r in &results {
                out.line(r.to_string())?;
            }
            out.line(format!("{} passed, {failed} failed", results.len() - failed))?;
        }
        _ => {
            for r in &results {
                out.json(r)?;
            }
            out.json(&json!({ "summary": { "passed": results.len() - failed, "failed": failed } }))?;
        }
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}
