//! Argument handling and dispatch for the `braidq` binary.
//!
//! Exit codes: 0 on success, 2 on a theorem-level obstruction (unmet
//! hypothesis, gcd obstruction, no torsion, non-split extension), 1 on usage
//! or internal errors.

use std::io::Write;
use std::path::PathBuf;

use braidq::cert::{check_cert, EmbeddingCert};
use braidq::constructions::{
    cayley_embed, example27, normalise_order27_multiplier, prime_power_spec, semidirect_embed, torsion_element,
    SemidirectSpec, Variant,
};
use braidq::groups::{from_perm_gens, group_from_json, orbit_basis, Level};
use braidq::quotient::{q_of_word, q_order};
use braidq::{BraidWord, Error, Obstruction, Perm};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "braidq", version, about = "Exact arithmetic in B_n/Γ_k(P_n) for k = 2, 3, and embedding certificates")]
pub struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Write JSON output to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Orbits of a permutation group on the pair or triple basis.
    Orbits {
        #[arg(long)]
        n: usize,
        /// Generators separated by ';', e.g. "(1,2,3)(4,5,6); (1,4,7,3,5,8,2,6,9)".
        #[arg(long)]
        gens: String,
        #[arg(long, value_enum, default_value = "pairs")]
        level: LevelArg,
    },
    /// Build an embedding certificate.
    #[command(subcommand)]
    Embed(Embed),
    /// Reproduce a worked example.
    #[command(subcommand)]
    Verify(Verify),
    /// Quotient-element operations on braid words.
    #[command(subcommand)]
    Word(WordCmd),
    /// Order of a braid word in B_n/Γ_k(P_n).
    Order(WordArgs),
    /// Search for an element of the given order, one permutation per cycle type.
    Torsion {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_k)]
        k: u8,
        #[arg(long = "order")]
        m: u64,
    },
    /// Re-verify a certificate from scratch.
    CheckCert { file: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum Embed {
    /// Regular representation of a group read from JSON.
    Cayley {
        #[arg(long)]
        group: PathBuf,
        #[arg(long, value_parser = parse_k)]
        k: u8,
    },
    /// Z_n ⋊ Z_m acting affinely on Z_n, the generator of Z_m multiplying by t.
    Semidirect {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        m: u64,
        #[arg(long)]
        t: u64,
        #[arg(long, value_parser = parse_k)]
        k: u8,
    },
    /// Z_{p^r} ⋊ Z_{d1} with the smallest multiplier of order d1.
    PrimePower {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        d1: u64,
        #[arg(long, value_parser = parse_k)]
        k: u8,
    },
}

#[derive(Subcommand, Debug)]
pub enum Verify {
    /// The two non-abelian groups of order 27 in B_9/Γ_2(P_9).
    Example27 {
        #[arg(long, value_enum)]
        variant: VariantArg,
        /// Multiplier for variant a; any presentation of Z_9 ⋊ Z_3 is normalised to t = 4.
        #[arg(long)]
        t: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
pub enum WordCmd {
    /// Normal form (permutation and pure part) of a braid word.
    Nf(WordArgs),
}

#[derive(Args, Debug)]
pub struct WordArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_parser = parse_k)]
    pub k: u8,
    /// Letters such as "s1 s2^-1 A1,3^2".
    pub word: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum LevelArg {
    Pairs,
    Triples,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum VariantArg {
    A,
    B,
}

fn parse_k(s: &str) -> Result<u8, String> {
    match s {
        "2" => Ok(2),
        "3" => Ok(3),
        _ => Err(format!("k must be 2 or 3, got '{s}'")),
    }
}

/// A failed command: exit code and message.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Obstruction(_) | Error::Unsolvable(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn fail(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

/// What a command produced: machine output and its human rendering.
struct Output {
    json: Value,
    text: String,
    /// Print `text` in both modes (for scalar results such as orders).
    plain: bool,
}

fn cert_output(cert: &EmbeddingCert, notes: &[String]) -> Output {
    let mut text = String::new();
    for note in notes {
        text.push_str(note);
        text.push('\n');
    }
    text.push_str(&format!("group: {} (order {})\n", cert.description, cert.order()));
    text.push_str(&format!("target: B_{}/Γ_{}(P_{})\n", cert.degree, cert.k, cert.degree));
    for c in &cert.transcript {
        text.push_str(&format!("  {:<10} {:>8}  {}\n", c.name, c.count, if c.passed { "ok" } else { "FAILED" }));
    }
    Output { json: cert.to_json(), text, plain: false }
}

fn parse_gens(n: usize, gens: &str) -> Result<Vec<Perm>, Failure> {
    gens.split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| Perm::parse(n, s).map_err(Failure::from))
        .collect()
}

fn read_json(path: &PathBuf) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| fail(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| fail(format!("{} is not valid JSON: {e}", path.display())))
}

fn execute(cmd: &Command) -> Result<Output, Failure> {
    match cmd {
        Command::Orbits { n, gens, level } => {
            let perms = parse_gens(*n, gens)?;
            if perms.is_empty() {
                return Err(fail("at least one generator is required"));
            }
            let (group, rep) = from_perm_gens(*n, &perms)?;
            let level = match level {
                LevelArg::Pairs => Level::Pairs,
                LevelArg::Triples => Level::Triples,
            };
            let basis = orbit_basis(&rep, level)?;
            let mut text = format!("group of order {} on {} points, {} level\n", group.order(), n, level);
            let orbits: Vec<Value> = basis
                .orbits
                .iter()
                .map(|o| {
                    let members: Vec<String> = o.members.iter().map(ToString::to_string).collect();
                    text.push_str(&format!(
                        "  size {:>4}{}  {}\n",
                        members.len(),
                        if o.free { " free" } else { "     " },
                        members.join(" ")
                    ));
                    json!({
                        "representative": o.representative.to_string(),
                        "size": members.len(),
                        "free": o.free,
                        "members": members,
                    })
                })
                .collect();
            let json = json!({
                "n": n,
                "group_order": group.order(),
                "level": level.to_string(),
                "all_free": basis.all_free(),
                "orbits": orbits,
            });
            Ok(Output { json, text, plain: false })
        }
        Command::Embed(Embed::Cayley { group, k }) => {
            let v = read_json(group)?;
            let (g, _, description) = group_from_json(&v)?;
            let name = v.get("name").and_then(Value::as_str).map(str::to_string).unwrap_or(description);
            Ok(cert_output(&cayley_embed(&g, &name, *k)?, &[]))
        }
        Command::Embed(Embed::Semidirect { n, m, t, k }) => {
            let spec = SemidirectSpec::new(*n, *m, *t)?;
            Ok(cert_output(&semidirect_embed(&spec, *k)?, &[]))
        }
        Command::Embed(Embed::PrimePower { p, r, d1, k }) => {
            let spec = prime_power_spec(*p, *r, *d1)?;
            let note = format!("Z_{} ⋊ Z_{} with t = {}", spec.n, spec.m, spec.t);
            Ok(cert_output(&semidirect_embed(&spec, *k)?, &[note]))
        }
        Command::Verify(Verify::Example27 { variant, t }) => {
            let variant = match variant {
                VariantArg::A => Variant::A,
                VariantArg::B => Variant::B,
            };
            let mut notes = Vec::new();
            if let Some(t) = t {
                if variant != Variant::A {
                    return Err(fail("--t applies to variant a only"));
                }
                let t4 = normalise_order27_multiplier(*t)?;
                if *t != t4 {
                    notes.push(format!("t = {t} normalised to t = {t4}"));
                }
            }
            let ex = example27(variant)?;
            notes.extend(ex.checks.iter().map(|c| format!("{}: {}", if c.passed { "ok" } else { "FAILED" }, c.name)));
            Ok(cert_output(&ex.cert, &notes))
        }
        Command::Word(WordCmd::Nf(args)) => {
            let q = q_of_word(&BraidWord::parse(args.n, &args.word)?, args.k)?;
            Ok(Output { json: q.to_json(), text: format!("{q}\n"), plain: false })
        }
        Command::Order(args) => {
            let q = q_of_word(&BraidWord::parse(args.n, &args.word)?, args.k)?;
            let order = q_order(&q).to_string();
            Ok(Output { json: Value::from(order.clone()), text: format!("{order}\n"), plain: true })
        }
        Command::Torsion { n, k, m } => match torsion_element(*n, *k, *m)? {
            Some(q) => Ok(Output { json: q.to_json(), text: format!("{q}\n"), plain: false }),
            None => Err(Error::Obstruction(Obstruction::NoTorsion { n: *n, k: *k, m: *m }).into()),
        },
        Command::CheckCert { file } => {
            let report = check_cert(&read_json(file)?)?;
            let mut text = format!("certificate accepted: order {} in B_{}/Γ_{}(P_{})\n", report.order, report.n, report.k, report.n);
            for c in &report.checks {
                text.push_str(&format!("  {:<10} {:>8}  ok\n", c.name, c.count));
            }
            let json = json!({
                "accepted": true,
                "order": report.order,
                "target": {"n": report.n, "k": report.k},
            });
            Ok(Output { json, text, plain: false })
        }
    }
}

/// Runs the tool on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = if e.use_stderr() { write!(stderr, "{e}") } else { write!(stdout, "{e}") };
            return code;
        }
    };
    let result = execute(&cli.command).and_then(|out| {
        if out.plain {
            return stdout.write_all(out.text.as_bytes()).map_err(|e| fail(e.to_string()));
        }
        let mut rendered = serde_json::to_string(&out.json).map_err(|e| fail(e.to_string()))?;
        rendered.push('\n');
        match &cli.out {
            Some(path) => std::fs::write(path, &rendered).map_err(|e| fail(format!("cannot write {}: {e}", path.display())))?,
            None if !cli.pretty => stdout.write_all(rendered.as_bytes()).map_err(|e| fail(e.to_string()))?,
            None => {}
        }
        if cli.pretty {
            stdout.write_all(out.text.as_bytes()).map_err(|e| fail(e.to_string()))?;
        }
        Ok(())
    });
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "{}: {}", if f.code == 2 { "obstruction" } else { "error" }, f.message);
            f.code
        }
    }
}
