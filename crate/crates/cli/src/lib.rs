#![allow(clippy::result_large_err)]

//! `bvcode` command-line front end.
//!
//! Exit codes: 0 success, 1 validation failure, 2 hypothesis violation, 3 I/O.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use bvcode::algebra::rat::decimal;
use bvcode::algebra::{parse_rat, poly_variation, pow2, Rat, Real};
use bvcode::code::{bvcode_norm_l1, check_levels, BVCode};
use bvcode::dual::{cantor_sum, decode_pi01, jordan_poly, Direction, Pi01Gadget, Verdict};
use bvcode::json::{self, CodeFile};
use bvcode::mollify::{mollify_code, smooth_indicator_depth, DEFAULT_SMOOTH_DEPTH};
use bvcode::selection::{bw_product_select, bw_select, bw_to_hst_instance, helly_select, hst_to_bw_instance};
use bvcode::Error;
use clap::{Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_HYPOTHESIS: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Core(Error),
    Io(String),
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::HypothesisViolation { .. } | Error::BoundaryViolation { .. }) => EXIT_HYPOTHESIS,
            CliError::Core(_) | CliError::Usage(_) => EXIT_INVALID,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::Usage(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn parse_rational(s: &str) -> std::result::Result<Rat, String> {
    parse_rat(s).ok_or_else(|| format!("not a rational number: {s:?} (use a/b or a decimal)"))
}

#[derive(Parser, Debug)]
#[command(name = "bvcode", version, about = "Exact codes for functions of bounded variation")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ReduceDirection {
    /// Points in [0, 1] to constant codes.
    BwToHst,
    /// Codes to the product-space points handed to Bolzano-Weierstraß.
    HstToBw,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check the rate and variation invariants of a code file.
    Validate { path: PathBuf },
    /// Code of the mollified indicator of [a, b].
    Indicator {
        #[arg(value_parser = parse_rational, allow_hyphen_values = true)]
        a: Rat,
        #[arg(value_parser = parse_rational, allow_hyphen_values = true)]
        b: Rat,
        #[arg(value_parser = parse_rational)]
        eps: Rat,
        m: u32,
        #[arg(long, default_value_t = DEFAULT_SMOOTH_DEPTH)]
        depth: usize,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Mollify a code at scale eps with kernel smoothness m.
    Mollify {
        input: PathBuf,
        #[arg(value_parser = parse_rational)]
        eps: Rat,
        m: u32,
        /// Depth of the output code.
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Enclosure of the L1 norm from level k.
    Norm { input: PathBuf, k: usize },
    /// Exact variation of a stored level (default: the deepest).
    Variation {
        input: PathBuf,
        #[arg(long)]
        level: Option<usize>,
    },
    /// Helly selection over code files (or bundles of codes).
    Helly {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        #[arg(long, value_parser = parse_rational)]
        u: Rat,
        #[arg(long, value_parser = parse_rational)]
        v: Rat,
        #[arg(long)]
        depth: usize,
        /// Limit code output.
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Bolzano-Weierstraß selection over a points file: a list of rationals
    /// in [0, 1], or a list of points of [0, 1]^D.
    Bw {
        points: PathBuf,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Materialize one of the reductions between the two selection problems.
    Reduce {
        #[arg(value_enum)]
        direction: ReduceDirection,
        input: PathBuf,
        out: PathBuf,
        #[arg(long, value_parser = parse_rational)]
        u: Option<Rat>,
        #[arg(long, value_parser = parse_rational)]
        v: Option<Rat>,
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Sample the deepest stored polynomial on a uniform grid.
    Sample {
        input: PathBuf,
        /// Number of grid cells.
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[arg(long)]
        csv: PathBuf,
    },
    /// Build the Cantor-sum gadget code from a witness table and decode it.
    DemoReversal {
        /// Witness table: [{"n": …, "witness_at": i' or null}, …].
        table: Option<PathBuf>,
        #[arg(long)]
        depth: usize,
        /// Number of gadgets (default: one past the largest n in the table).
        #[arg(long)]
        terms: Option<usize>,
        /// Decode this code file instead of building one.
        #[arg(long, conflicts_with = "table")]
        code: Option<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Monotone pieces of a stored level (default: the deepest).
    Jordan {
        input: PathBuf,
        #[arg(long)]
        level: Option<usize>,
    },
}

/// Parse `args` (program name first) and run, writing reports to `out`.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INVALID,
            };
            let _ = write!(out, "{e}");
            return code;
        }
    };
    match dispatch(cli.cmd, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            e.exit_code()
        }
    }
}

fn read_text(p: &Path) -> CliResult<String> {
    fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
}

fn read_json(p: &Path) -> CliResult<Value> {
    serde_json::from_str(&read_text(p)?).map_err(|e| Error::Json(format!("{}: {e}", p.display())).into())
}

fn write_text(p: &Path, s: &str) -> CliResult<()> {
    fs::write(p, s).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
}

fn write_json(p: &Path, v: &Value) -> CliResult<()> {
    write_text(p, &serde_json::to_string_pretty(v).expect("json values always serialize"))
}

fn read_code_file(p: &Path) -> CliResult<CodeFile> {
    Ok(CodeFile::from_json(&read_json(p)?)?)
}

fn read_code(p: &Path) -> CliResult<BVCode> {
    Ok(read_code_file(p)?.to_code()?)
}

/// Code files or bundles `{"codes": [code, …]}`, in order.
fn read_codes(paths: &[PathBuf]) -> CliResult<Vec<BVCode>> {
    let mut out = Vec::new();
    for p in paths {
        let doc = read_json(p)?;
        match doc.get("codes").and_then(Value::as_array) {
            Some(cs) => {
                for c in cs {
                    out.push(CodeFile::from_json(c)?.to_code()?);
                }
            }
            None => out.push(CodeFile::from_json(&doc)?.to_code()?),
        }
    }
    Ok(out)
}

fn io(e: std::io::Error) -> CliError {
    CliError::Io(e.to_string())
}

/// Exact value with a labeled decimal rendering.
fn show_rat(r: &Rat) -> String {
    format!("{r} (decimal {})", decimal(r, 12))
}

fn show_real(x: &Real) -> String {
    match x.to_rat() {
        Some(r) => show_rat(r),
        None => x.to_string(),
    }
}

fn level_or_last(code: &BVCode, level: Option<usize>) -> CliResult<usize> {
    let k = level.unwrap_or(code.depth());
    if k > code.depth() {
        return Err(Error::DepthExhausted { needed: k, available: code.depth() }.into());
    }
    Ok(k)
}

fn dispatch(cmd: Cmd, out: &mut dyn Write) -> CliResult<i32> {
    match cmd {
        Cmd::Validate { path } => cmd_validate(&path, out),
        Cmd::Indicator { a, b, eps, m, depth, out: path } => {
            let s = smooth_indicator_depth(&a, &b, &eps, m, depth)?;
            write_text(&path, &CodeFile::from_code(&s.code).to_string_pretty())?;
            writeln!(out, "indicator of [{a}, {b}], eps = {eps}, m = {m}, depth {depth}").map_err(io)?;
            writeln!(out, "v = {}", show_rat(s.code.v())).map_err(io)?;
            writeln!(out, "variation of smoothed function = {}", show_real(&s.variation)).map_err(io)?;
            writeln!(out, "L1 distance to indicator = {}", show_real(&s.distance)).map_err(io)?;
            writeln!(out, "wrote {}", path.display()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Cmd::Mollify { input, eps, m, depth, out: path, cert } => {
            let f = read_code(&input)?;
            let (g, c) = mollify_code(&f, &eps, m, depth)?;
            write_text(&path, &CodeFile::from_code(&g).to_string_pretty())?;
            writeln!(out, "bound 2 eps v = {}", show_rat(&c.bound)).map_err(io)?;
            writeln!(out, "exact instance error ||p_K^eps - p_K||_1 = {}", show_real(&c.instance_error)).map_err(io)?;
            writeln!(out, "projection error = {}", show_real(&c.projection_error)).map_err(io)?;
            writeln!(out, "new v = {}", show_rat(&c.new_v)).map_err(io)?;
            if let Some(p) = cert {
                write_json(&p, &json::mollify_certificate_json(&c))?;
            }
            writeln!(out, "wrote {}", path.display()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Cmd::Norm { input, k } => {
            let f = read_code(&input)?;
            let n = bvcode_norm_l1(&f, k)?;
            writeln!(out, "||f||_1 in [{}, {}]", n.lo, n.hi).map_err(io)?;
            writeln!(out, "decimal [{}, {}]", decimal(&n.lo, 12), decimal(&n.hi, 12)).map_err(io)?;
            Ok(EXIT_OK)
        }
        Cmd::Variation { input, level } => {
            let f = read_code(&input)?;
            let k = level_or_last(&f, level)?;
            writeln!(out, "int |p_{k}'| = {}", show_real(&poly_variation(f.level(k)))).map_err(io)?;
            writeln!(out, "v = {}", show_rat(f.v())).map_err(io)?;
            Ok(EXIT_OK)
        }
        Cmd::Helly { paths, u, v, depth, out: path, cert } => {
            let fs = read_codes(&paths)?;
            let r = helly_select(&fs, &u, &v, depth)?;
            write_text(&path, &CodeFile::from_code(&r.limit).to_string_pretty())?;
            let c = json::helly_certificate_json(&r.certificate, r.shift);
            match cert {
                Some(p) => write_json(&p, &c)?,
                None => writeln!(out, "{}", serde_json::to_string_pretty(&c).unwrap()).map_err(io)?,
            }
            writeln!(out, "g = {:?}", r.certificate.g).map_err(io)?;
            writeln!(out, "limit depth {}, v = {}", r.limit.depth(), r.limit.v()).map_err(io)?;
            writeln!(out, "wrote {}", path.display()).map_err(io)?;
            Ok(EXIT_OK)
        }
        Cmd::Bw { points, depth, cert } => {
            let doc = read_json(&points)?;
            let arr = doc.as_array().ok_or_else(|| Error::Json("points must be an array".into()))?;
            let c = if arr.first().is_some_and(Value::is_array) {
                let ps: Vec<Vec<Rat>> = arr.iter().map(json::parse_points).collect::<bvcode::Result<_>>()?;
                bw_product_select(&ps, depth)?
            } else {
                bw_select(&json::parse_points(&doc)?, depth)?
            };
            let j = json::selection_certificate_json(&c);
            match cert {
                Some(p) => {
                    write_json(&p, &j)?;
                    writeln!(out, "g = {:?}", c.g).map_err(io)?;
                }
                None => writeln!(out, "{}", serde_json::to_string_pretty(&j).unwrap()).map_err(io)?,
            }
            Ok(EXIT_OK)
        }
        Cmd::Reduce { direction, input, out: path, u, v, depth } => match direction {
            ReduceDirection::BwToHst => {
                let xs = json::parse_points(&read_json(&input)?)?;
                let codes = bw_to_hst_instance(&xs)?;
                let bundle: Vec<Value> = codes.iter().map(|c| CodeFile::from_code(c).to_json()).collect();
                write_json(&path, &json!({ "codes": bundle }))?;
                writeln!(out, "wrote {} constant codes (u = 1, v = 0) to {}", codes.len(), path.display()).map_err(io)?;
                Ok(EXIT_OK)
            }
            ReduceDirection::HstToBw => {
                let need = |name: &str| CliError::Usage(format!("hst-to-bw needs --{name}"));
                let (u, v, depth) = (u.ok_or_else(|| need("u"))?, v.ok_or_else(|| need("v"))?, depth.ok_or_else(|| need("depth"))?);
                let fs = read_codes(&[input])?;
                let inst = hst_to_bw_instance(&fs, &u, &v, depth)?;
                let pts: Vec<Value> = inst.points.iter().map(|p| json::points_json(p)).collect();
                write_json(&path, &Value::Array(pts))?;
                let dim = inst.points.first().map_or(0, Vec::len);
                writeln!(out, "wrote {} points of dimension {dim} to {}", inst.points.len(), path.display()).map_err(io)?;
                Ok(EXIT_OK)
            }
        },
        Cmd::Sample { input, grid, csv } => {
            if grid == 0 {
                return Err(CliError::Usage("--grid must be positive".into()));
            }
            let f = read_code(&input)?;
            let p = f.last();
            let mut s = String::from("x,y\n");
            for i in 0..=grid {
                let x = Rat::new(i.into(), grid.into());
                s.push_str(&format!("{},{}\n", decimal(&x, 12), decimal(&p.eval(&x), 12)));
            }
            write_text(&csv, &s)?;
            let slack = pow2(-(f.depth() as i64) + 1);
            writeln!(out, "sampled p_{} at {} points; the code determines f only up to L1 distance {slack}", f.depth(), grid + 1)
                .map_err(io)?;
            Ok(EXIT_OK)
        }
        Cmd::DemoReversal { table, depth, terms, code, out: path } => {
            let tagged = match (table, code) {
                (_, Some(c)) => {
                    let file = read_code_file(&c)?;
                    let code = file.to_code()?;
                    bvcode::dual::TaggedCode { code, provenance: file.provenance, truncation: Rat::zero() }
                }
                (Some(t), None) => {
                    let rows = json::parse_witness_table(&read_json(&t)?)?;
                    let n = terms.unwrap_or_else(|| rows.iter().map(|r| r.0 + 1).max().unwrap_or(1));
                    cantor_sum(&Pi01Gadget::from_table(&rows), n, depth)?
                }
                (None, None) => return Err(CliError::Usage("give a witness table or --code".into())),
            };
            if let Some(p) = &path {
                write_text(p, &CodeFile::from_tagged(&tagged).to_string_pretty())?;
            }
            let n_terms = tagged.provenance.as_ref().map_or(0, |p| p.terms);
            let k = depth.min(tagged.code.depth());
            for n in 0..n_terms.max(1) {
                let d = decode_pi01(&tagged, n, k)?;
                let verdict = match d.verdict {
                    Verdict::HoldsSoFar => "holds-so-far",
                    Verdict::Refuted => "refuted",
                    Verdict::Unknown => "unknown",
                };
                writeln!(out, "n={n}: {verdict} at k={k}; position {} in [{}, {}]", d.position, d.lo, d.hi).map_err(io)?;
            }
            writeln!(out, "truncation 3^-N = {}", tagged.truncation).map_err(io)?;
            Ok(EXIT_OK)
        }
        Cmd::Jordan { input, level } => {
            let f = read_code(&input)?;
            let k = level_or_last(&f, level)?;
            for piece in jordan_poly(f.level(k)) {
                let dir = match piece.direction {
                    Direction::Up => "nondecreasing",
                    Direction::Down => "nonincreasing",
                };
                writeln!(out, "[{}, {}] {dir}", piece.start, piece.end).map_err(io)?;
            }
            Ok(EXIT_OK)
        }
    }
}

fn cmd_validate(path: &Path, out: &mut dyn Write) -> CliResult<i32> {
    let file = read_code_file(path)?;
    if file.polys.is_empty() {
        return Err(Error::EmptyPrefix.into());
    }
    let checks = check_levels(&file.polys, Some(&file.v));
    let mut first: Option<Error> = None;
    for c in checks {
        let mark = |ok: bool| if ok { "ok" } else { "FAIL" };
        let rate = match &c.rate {
            Some(r) => format!("||p_{} - p_{}||_1 = {} <= 2^-{} {}", c.level, c.level + 1, show_real(r), c.level, mark(c.rate_ok)),
            None => "last level".into(),
        };
        let var = c.variation.as_ref().map(show_real).unwrap_or_default();
        writeln!(out, "level {}: {rate}; int |p_{}'| = {var} <= {} {}", c.level, c.level, file.v, mark(c.variation_ok))
            .map_err(io)?;
        if first.is_none() && !c.rate_ok {
            first = Some(Error::RateViolation { level: c.level, norm: c.rate.clone().unwrap(), bound: pow2(-(c.level as i64)) });
        }
        if first.is_none() && !c.variation_ok {
            first = Some(Error::VariationViolation { level: c.level, variation: c.variation.clone().unwrap(), bound: file.v.clone() });
        }
    }
    if let Some(e) = first {
        return Err(e.into());
    }
    if file.provenance.is_some() {
        file.to_tagged()?;
        writeln!(out, "provenance replays to the same code").map_err(io)?;
    }
    writeln!(out, "OK, depth {}, v={}", file.depth(), file.v).map_err(io)?;
    Ok(EXIT_OK)
}
