//! Command-line front end. [`run`] parses arguments, dispatches to the library
//! and returns the process exit code:
//!
//! - 0 success
//! - 1 negative answer (not a member, not isomorphic, verification failed)
//! - 2 input error
//! - 3 internal consistency failure (the Betti computations disagree)

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::betti::{betti_table, cross_validate};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::fincat::{bound_warnings, find_isomorphism, non_subset_objects, FiniteCategory};
use crate::resolution::{
    bar_complex, io, minimize, transport_resolution, verify_dsquare, verify_resolution, GradedFreeComplex,
};
use crate::semigroup::{default_names, AffineSemigroup, Degree};

#[derive(Debug, Parser)]
#[command(name = "betticat", version, about = "Betti categories and free resolutions of toric rings")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Coefficient field: rational, prime, prime:<p>
    #[arg(long, global = true, default_value = "rational")]
    field: FieldSpec,

    /// Candidate box: a degree such as 6,6 or a multiple xK of deg M
    #[arg(long, global = true, default_value = "x1")]
    bound: String,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Comma-separated variable names, one per generator
    #[arg(long, global = true, value_delimiter = ',')]
    names: Option<Vec<String>>,

    /// Worker threads (default: all cores)
    #[arg(long, short = 'j', global = true, env = "BETTICAT_JOBS")]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum What {
    Betti,
    Lub,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a semigroup file
    Check { file: PathBuf },
    /// Decide whether a degree lies in Q
    Member { file: PathBuf, degree: String },
    /// List the monomials of degree target − source
    Hom { file: PathBuf, source: String, target: String },
    /// The lub-category inside the candidate box
    Lub { file: PathBuf },
    /// Multigraded Betti numbers of k[Q]
    Betti {
        file: PathBuf,
        /// Also compute the constant-functor and minimal-resolution tables
        #[arg(long)]
        cross_validate: bool,
    },
    /// Bar resolution of the Betti category
    Bar {
        file: PathBuf,
        #[arg(long)]
        minimize: bool,
        /// Check exactness on the box [0, BOX]
        #[arg(long, value_name = "BOX")]
        verify: Option<String>,
        /// Write the complex file here
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
    /// Minimal resolution: bar, minimize, and verify on the candidate box
    Minres {
        file: PathBuf,
        #[arg(long, value_name = "BOX")]
        verify: Option<String>,
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
    /// Look for an isomorphism between the categories of two semigroups
    Compare {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum, default_value_t = What::Betti)]
        what: What,
    },
    /// Move a resolution of SOURCE's ring to TARGET's ring along the Betti-category isomorphism
    Transport {
        resolution: PathBuf,
        source: PathBuf,
        target: PathBuf,
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
    /// Check d^2 = 0, exactness and minimality of a complex file
    Verify {
        complex: PathBuf,
        #[arg(long = "box", value_name = "BOX")]
        bbox: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    Success,
    Negative,
    Inconsistent,
}

impl Outcome {
    fn code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::Negative => 1,
            Outcome::Inconsistent => 3,
        }
    }
}

#[derive(Deserialize)]
struct SemigroupFile {
    generators: Vec<Vec<i64>>,
}

/// Reads `{"generators": [[..], ..]}` from a JSON or TOML file.
pub fn read_semigroup(path: &Path) -> Result<AffineSemigroup> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    let is_toml = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("toml"));
    let parsed: SemigroupFile = if is_toml {
        toml::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?
    } else {
        serde_json::from_str(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?
    };
    AffineSemigroup::new(parsed.generators)
}

/// Parses `5,4` or `(5,4)`.
pub fn parse_degree(s: &str) -> Result<Degree> {
    let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
    inner
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| Error::InvalidInput(format!("bad degree '{s}'")))
        })
        .collect::<Result<Vec<_>>>()
        .map(Degree)
}

/// Resolves `--bound`: a degree, or `xK` for `K · deg M`.
pub fn parse_bound(q: &AffineSemigroup, s: &str) -> Result<Degree> {
    let bound = match s.trim().strip_prefix('x') {
        Some(k) => {
            let k: i64 = k
                .parse()
                .ok()
                .filter(|&k| k >= 1)
                .ok_or_else(|| Error::InvalidInput(format!("bad bound multiplier '{s}'")))?;
            q.total_degree().checked_scale(k)?
        }
        None => parse_degree(s)?,
    };
    q.check_dimension(&bound)?;
    Ok(bound)
}

struct Ctx<'a> {
    cli: &'a Cli,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn names(&self, q: &AffineSemigroup) -> Result<Vec<String>> {
        match &self.cli.names {
            None => Ok(default_names(q.num_generators())),
            Some(names) if names.len() == q.num_generators() => Ok(names.clone()),
            Some(names) => Err(Error::InvalidInput(format!(
                "{} names given for {} generators",
                names.len(),
                q.num_generators()
            ))),
        }
    }

    fn say(&mut self, s: &str) -> Result<()> {
        self.out.write_all(s.as_bytes()).map_err(io_error)
    }

    fn warn(&mut self, s: &str) -> Result<()> {
        writeln!(self.err, "warning: {s}").map_err(io_error)
    }

    fn note(&mut self, s: &str) -> Result<()> {
        writeln!(self.err, "{s}").map_err(io_error)
    }
}

fn io_error(e: std::io::Error) -> Error {
    Error::InvalidInput(e.to_string())
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    if let Some(jobs) = cli.jobs {
        // the global pool can only be set once per process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global();
    }
    let mut ctx = Ctx { cli: &cli, out, err };
    match dispatch(&mut ctx) {
        Ok(outcome) => outcome.code(),
        Err(e) => {
            let _ = writeln!(ctx.err, "error: {e}");
            2
        }
    }
}

fn dispatch(ctx: &mut Ctx) -> Result<Outcome> {
    let cli = ctx.cli;
    match &cli.command {
        Command::Check { file } => cmd_check(ctx, file),
        Command::Member { file, degree } => cmd_member(ctx, file, degree),
        Command::Hom { file, source, target } => cmd_hom(ctx, file, source, target),
        Command::Lub { file } => cmd_lub(ctx, file),
        Command::Betti { file, cross_validate } => cmd_betti(ctx, file, *cross_validate),
        Command::Bar {
            file,
            minimize,
            verify,
            output,
        } => cmd_bar(ctx, file, *minimize, verify.as_deref(), false, output.as_deref()),
        Command::Minres { file, verify, output } => {
            cmd_bar(ctx, file, true, verify.as_deref(), true, output.as_deref())
        }
        Command::Compare { first, second, what } => cmd_compare(ctx, first, second, *what),
        Command::Transport {
            resolution,
            source,
            target,
            output,
        } => cmd_transport(ctx, resolution, source, target, output.as_deref()),
        Command::Verify { complex, bbox } => cmd_verify(ctx, complex, bbox.as_deref()),
    }
}

#[derive(Serialize)]
struct CheckJson {
    valid: bool,
    r: usize,
    n: usize,
    #[serde(rename = "degM")]
    deg_m: Degree,
}

fn cmd_check(ctx: &mut Ctx, file: &Path) -> Result<Outcome> {
    let q = read_semigroup(file)?;
    let text = match ctx.cli.format {
        Format::Json => json_line(&CheckJson {
            valid: true,
            r: q.rank(),
            n: q.num_generators(),
            deg_m: q.total_degree(),
        }),
        _ => format!("valid, r={}, n={}, degM={}\n", q.rank(), q.num_generators(), q.total_degree()),
    };
    ctx.say(&text)?;
    Ok(Outcome::Success)
}

fn cmd_member(ctx: &mut Ctx, file: &Path, degree: &str) -> Result<Outcome> {
    let q = read_semigroup(file)?;
    let d = parse_degree(degree)?;
    let member = q.is_member(&d)?;
    let text = match ctx.cli.format {
        Format::Json => json_line(&serde_json::json!({ "degree": d, "member": member })),
        _ => format!("{d} {}\n", if member { "is in Q" } else { "is not in Q" }),
    };
    ctx.say(&text)?;
    Ok(if member { Outcome::Success } else { Outcome::Negative })
}

fn cmd_hom(ctx: &mut Ctx, file: &Path, source: &str, target: &str) -> Result<Outcome> {
    let q = read_semigroup(file)?;
    let names = ctx.names(&q)?;
    let (s, t) = (parse_degree(source)?, parse_degree(target)?);
    for d in [&s, &t] {
        if !q.is_member(d)? {
            return Err(Error::NotAMember(d.clone()));
        }
    }
    let homs = q.enumerate_monomials(&t.sub(&s))?;
    let text = match ctx.cli.format {
        Format::Json => json_line(&serde_json::json!({ "source": s, "target": t, "morphisms": homs })),
        _ => {
            let rendered: Vec<String> = homs.iter().map(|m| m.render(&names)).collect();
            format!("hom({s}, {t}) = {{{}}}\n", rendered.join(", "))
        }
    };
    ctx.say(&text)?;
    Ok(Outcome::Success)
}

fn render_category(cat: &FiniteCategory, names: &[String], format: Format) -> String {
    match format {
        Format::Json => json_line(&cat.to_json()),
        Format::Dot => cat.to_dot(names),
        Format::Text => {
            let mut s = String::new();
            let objects: Vec<String> = cat.objects().iter().map(Degree::to_string).collect();
            let _ = writeln!(s, "objects ({}): {}", objects.len(), objects.join(" "));
            let _ = writeln!(s, "non-identity morphisms: {}", cat.non_identity_count());
            for a in 0..cat.num_objects() {
                for b in cat.successors(a) {
                    let homs: Vec<String> = cat.hom(a, b).iter().map(|m| m.render(names)).collect();
                    let _ = writeln!(s, "{} -> {}: {}", cat.object(a), cat.object(b), homs.join(", "));
                }
            }
            s
        }
    }
}

fn lub_category(ctx: &mut Ctx, q: &AffineSemigroup) -> Result<FiniteCategory> {
    let bound = parse_bound(q, &ctx.cli.bound)?;
    let cat = FiniteCategory::lub_category(q, &bound)?;
    for w in bound_warnings(q, &bound, non_subset_objects(q, &cat)) {
        ctx.warn(&w)?;
    }
    Ok(cat)
}

fn betti_category(ctx: &mut Ctx, q: &AffineSemigroup, field: FieldSpec) -> Result<FiniteCategory> {
    let bound = parse_bound(q, &ctx.cli.bound)?;
    let table = betti_table(q, field, Some(&bound))?;
    for w in table.warnings() {
        ctx.warn(w)?;
    }
    FiniteCategory::full_subcategory(q, table.degrees())
}

fn cmd_lub(ctx: &mut Ctx, file: &Path) -> Result<Outcome> {
    let q = read_semigroup(file)?;
    let names = ctx.names(&q)?;
    let cat = lub_category(ctx, &q)?;
    ctx.say(&render_category(&cat, &names, ctx.cli.format))?;
    Ok(Outcome::Success)
}

fn cmd_betti(ctx: &mut Ctx, file: &Path, cross: bool) -> Result<Outcome> {
    let q = read_semigroup(file)?;
    let names = ctx.names(&q)?;
    let field = ctx.cli.field;
    let bound = parse_bound(&q, &ctx.cli.bound)?;
    let (table, mismatches) = if cross {
        let report = cross_validate(&q, field, Some(&bound))?;
        let mismatches = report.mismatches();
        (report.delta, mismatches)
    } else {
        (betti_table(&q, field, Some(&bound))?, Vec::new())
    };
    for w in table.warnings() {
        ctx.warn(w)?;
    }
    let text = match ctx.cli.format {
        Format::Json => format!("{}\n", table.to_json()),
        Format::Text => table.to_text(),
        Format::Dot => FiniteCategory::full_subcategory(&q, table.degrees())?.to_dot(&names),
    };
    ctx.say(&text)?;
    if cross {
        if mismatches.is_empty() {
            ctx.note("cross-validation: all three computations agree")?;
        } else {
            for m in &mismatches {
                ctx.note(&format!("mismatch: {m}"))?;
            }
            return Ok(Outcome::Inconsistent);
        }
    }
    Ok(Outcome::Success)
}

fn emit_complex(ctx: &mut Ctx, x: &GradedFreeComplex, names: &[String], output: Option<&Path>) -> Result<()> {
    if let Some(path) = output {
        std::fs::write(path, io::to_json(x) + "\n").map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    }
    let text = match (ctx.cli.format, output) {
        (Format::Json, None) => io::to_json(x) + "\n",
        (Format::Dot, _) => return Err(Error::InvalidInput("complexes have no dot format".into())),
        (_, Some(_)) => format!("ranks: {}\n", format_ranks(&x.ranks())),
        (Format::Text, None) => x.render(names),
    };
    ctx.say(&text)
}

fn format_ranks(ranks: &[usize]) -> String {
    let parts: Vec<String> = ranks.iter().map(usize::to_string).collect();
    format!("({})", parts.join(","))
}

/// Prints the verification report to stderr and says whether it passed.
fn report_verification(ctx: &mut Ctx, x: &GradedFreeComplex, bound: &Degree) -> Result<bool> {
    let dsquare = verify_dsquare(x);
    ctx.note(&format!("d^2 = 0: {}", if dsquare { "yes" } else { "no" }))?;
    let report = verify_resolution(x, bound)?;
    ctx.note(&format!(
        "exact on [0, {bound}]: {} ({} degrees checked)",
        if report.is_exact() { "yes" } else { "no" },
        report.degrees_checked
    ))?;
    for f in report.failures.iter().take(20) {
        let at = if f.position < 0 { "k[Q]".to_string() } else { format!("F_{}", f.position) };
        ctx.note(&format!("  degree {}: defect {} at {at}", f.degree, f.defect))?;
    }
    ctx.note(&format!("minimal: {}", if x.is_minimal() { "yes" } else { "no" }))?;
    Ok(dsquare && report.is_exact())
}

fn cmd_bar(
    ctx: &mut Ctx,
    file: &Path,
    minimized: bool,
    verify: Option<&str>,
    always_verify: bool,
    output: Option<&Path>,
) -> Result<Outcome> {
    let q = read_semigroup(file)?;
    let names = ctx.names(&q)?;
    let field = ctx.cli.field;
    let cat = betti_category(ctx, &q, field)?;
    let mut x = bar_complex(&cat, field);
    if minimized {
        x = minimize(&x)?;
    }
    let verify_box = match verify {
        Some(b) => Some(parse_bound(&q, b)?),
        None if always_verify => Some(parse_bound(&q, &ctx.cli.bound)?),
        None => None,
    };
    emit_complex(ctx, &x, &names, output)?;
    if let Some(b) = verify_box {
        if !report_verification(ctx, &x, &b)? {
            return Ok(Outcome::Negative);
        }
    }
    Ok(Outcome::Success)
}

#[derive(Serialize)]
struct CompareJson {
    isomorphic: bool,
    objects: Vec<(Degree, Degree)>,
}

fn cmd_compare(ctx: &mut Ctx, first: &Path, second: &Path, what: What) -> Result<Outcome> {
    let (qa, qb) = (read_semigroup(first)?, read_semigroup(second)?);
    let field = ctx.cli.field;
    let (ca, cb) = match what {
        What::Betti => (betti_category(ctx, &qa, field)?, betti_category(ctx, &qb, field)?),
        What::Lub => (lub_category(ctx, &qa)?, lub_category(ctx, &qb)?),
    };
    let iso = find_isomorphism(&ca, &cb);
    let objects = iso.as_ref().map(|i| i.object_map()).unwrap_or_default();
    let text = match ctx.cli.format {
        Format::Json => json_line(&CompareJson {
            isomorphic: iso.is_some(),
            objects,
        }),
        _ => {
            let mut s = String::new();
            if iso.is_some() {
                let _ = writeln!(s, "isomorphic");
                for (a, b) in objects {
                    let _ = writeln!(s, "  {a} -> {b}");
                }
            } else {
                let _ = writeln!(
                    s,
                    "not isomorphic ({} objects / {} morphisms vs {} objects / {} morphisms)",
                    ca.num_objects(),
                    ca.non_identity_count(),
                    cb.num_objects(),
                    cb.non_identity_count()
                );
            }
            s
        }
    };
    ctx.say(&text)?;
    Ok(if iso.is_some() { Outcome::Success } else { Outcome::Negative })
}

fn cmd_transport(
    ctx: &mut Ctx,
    resolution: &Path,
    source: &Path,
    target: &Path,
    output: Option<&Path>,
) -> Result<Outcome> {
    let x = io::read_file(resolution)?;
    let (qs, qt) = (read_semigroup(source)?, read_semigroup(target)?);
    if x.semigroup() != &qs {
        return Err(Error::InvalidInput(format!(
            "{} is not a complex over the semigroup of {}",
            resolution.display(),
            source.display()
        )));
    }
    let names = ctx.names(&qt)?;
    let field = x.field();
    let target_cat = betti_category(ctx, &qt, field)?;
    let source_cat = betti_category(ctx, &qs, field)?;
    let Some(iso) = find_isomorphism(&target_cat, &source_cat) else {
        ctx.note("the Betti categories are not isomorphic")?;
        return Ok(Outcome::Negative);
    };
    let moved = transport_resolution(&x, &iso)?;
    emit_complex(ctx, &moved, &names, output)?;
    Ok(Outcome::Success)
}

fn cmd_verify(ctx: &mut Ctx, complex: &Path, bbox: Option<&str>) -> Result<Outcome> {
    let x = io::read_file(complex)?;
    let q = x.semigroup().clone();
    let bound = parse_bound(&q, bbox.unwrap_or(&ctx.cli.bound))?;
    let ok = report_verification(ctx, &x, &bound)?;
    ctx.say(&format!("ranks: {}\n{}\n", format_ranks(&x.ranks()), if ok { "ok" } else { "failed" }))?;
    Ok(if ok { Outcome::Success } else { Outcome::Negative })
}

fn json_line<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("report serialization cannot fail") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_degrees_and_bounds() {
        let q = AffineSemigroup::new(vec![vec![3, 0], vec![2, 1], vec![1, 2], vec![0, 3]]).unwrap();
        assert_eq!(parse_degree("5,4").unwrap(), Degree(vec![5, 4]));
        assert_eq!(parse_degree("(5, 4)").unwrap(), Degree(vec![5, 4]));
        assert!(parse_degree("5;4").is_err());
        assert_eq!(parse_bound(&q, "x1").unwrap(), Degree(vec![6, 6]));
        assert_eq!(parse_bound(&q, "x2").unwrap(), Degree(vec![12, 12]));
        assert!(parse_bound(&q, "x0").is_err());
        assert!(matches!(parse_bound(&q, "1,2,3"), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn help_exits_zero() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["betticat", "--help"], &mut out, &mut err), 0);
        assert!(String::from_utf8(out).unwrap().contains("betti"));
        assert_eq!(run(["betticat", "frobnicate"], &mut Vec::new(), &mut Vec::new()), 2);
    }
}
