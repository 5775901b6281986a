//! zeta2: linear forms q·ζ(2) − p from two hypergeometric-style
//! constructions, their prime-sieve denominators, the irrationality-measure
//! pipeline, and numeric cross-checks.
//!
//! Exit codes: 0 success, 1 a verification or computation failed,
//! 2 usage error.

use std::collections::BTreeMap;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use zeta2_core::exact::rat;
use zeta2_core::hp::Hp;
use zeta2_core::oracle::{contour_quad1, contour_quad2, cross_tale_check, zeta2, QuadratureSpec};
use zeta2_core::sieve::{
    big_phi, inclusion_check, phi_hat, phi_perm, phi_tilde, step_table, SieveSpec, StepFn,
};
use zeta2_core::tale_one::{Family, LinForm, PEX, REM3};
use zeta2_core::tale_two::{that, THAT_ALPHA, THAT_BETA};
use zeta2_core::verify;

#[derive(Parser)]
#[command(
    name = "zeta2",
    version,
    about = "Exact rational approximations to ζ(2) and the measure bound they certify",
    max_term_width = 100
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit the linear-form sequence (n, q, p, harmonic subscripts)
    Form(FormArgs),
    /// Compare the two constructions' coefficients (and optionally their
    /// normalized contour integrals)
    Identity(IdentityArgs),
    /// Print a prime-exponent step table
    Phi(PhiArgs),
    /// Evaluate Φ_n products and divisibility reports
    Sieve(SieveArgs),
    /// Run the growth/denominator pipeline down to the measure bound
    Measure(MeasureArgs),
    /// Evaluate one form by contour quadrature and compare with the exact
    /// value
    Oracle(OracleArgs),
    /// Run every invariant suite
    VerifyAll(VerifyArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Preset {
    Pex,
    Rem3,
    That,
    Tilde,
}

impl Preset {
    fn name(self) -> &'static str {
        match self {
            Preset::Pex => "pex",
            Preset::Rem3 => "rem3",
            Preset::That => "that",
            Preset::Tilde => "tilde",
        }
    }
}

#[derive(Args)]
struct FormArgs {
    /// Construction: 1 (squared-cosecant kernel) or 2 (doubled argument)
    #[arg(long, default_value_t = 1)]
    tale: u8,
    /// pex or rem3 for tale 1, that for tale 2
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Single index K or inclusive range A..B (cap 300)
    #[arg(long, default_value = "1..10")]
    n: String,
    /// Alias for --n accepting the same syntax
    #[arg(long, conflicts_with = "n")]
    n_range: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Sequence cache directory (env ZETA2_CACHE_DIR when absent)
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

#[derive(Args)]
struct IdentityArgs {
    /// Single index K or inclusive range A..B (cap 300)
    #[arg(long, default_value = "1..8")]
    n: String,
    #[arg(long, conflicts_with = "n")]
    n_range: Option<String>,
    /// Also compare the prefactor-normalized integrals at n = 0, 1, 2
    #[arg(long)]
    integrals: bool,
    /// Working precision (decimal digits) for --integrals
    #[arg(long, default_value_t = 30, value_parser = clap::value_parser!(u32).range(15..=1000))]
    prec: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct PhiArgs {
    /// pex, rem3 (φ of each family), that (φ̂), or tilde (φ̃)
    #[arg(long, value_enum, default_value_t = Preset::Pex)]
    preset: Preset,
    /// Emit the full step table (the default and only mode)
    #[arg(long)]
    table: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct SieveArgs {
    /// pex, rem3, that, or tilde (the sharpened main-family product)
    #[arg(long, value_enum, default_value_t = Preset::Pex)]
    preset: Preset,
    /// Single index K ≥ 1 or inclusive range A..B (cap 300)
    #[arg(long, default_value = "1..10")]
    n: String,
    #[arg(long, conflicts_with = "n")]
    n_range: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct MeasureArgs {
    /// pex or rem3
    #[arg(long, value_enum, default_value_t = Preset::Pex)]
    preset: Preset,
    /// Use the sharpened step function φ̃ (main family only)
    #[arg(long)]
    corrected: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct OracleArgs {
    /// Construction: 1 or 2
    #[arg(long, default_value_t = 1)]
    tale: u8,
    /// pex or rem3 for tale 1, that for tale 2
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Single index (quadrature cost grows quickly with n)
    #[arg(long, default_value_t = 1)]
    n: i64,
    /// Decimal digits of working precision
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u32).range(15..=1000))]
    prec: u32,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    /// Depth cap handed to every index-bounded suite
    #[arg(long, default_value_t = 20)]
    max_n: i64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

enum Failure {
    Usage(String),
    Run(String),
}

impl From<zeta2_core::Error> for Failure {
    fn from(e: zeta2_core::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

type Outcome = Result<bool, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap renders help/version through the same error path
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.cmd {
        Cmd::Form(a) => cmd_form(a),
        Cmd::Identity(a) => cmd_identity(a),
        Cmd::Phi(a) => cmd_phi(a),
        Cmd::Sieve(a) => cmd_sieve(a),
        Cmd::Measure(a) => cmd_measure(a),
        Cmd::Oracle(a) => cmd_oracle(a),
        Cmd::VerifyAll(a) => cmd_verify_all(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
    }
}

const N_CAP: i64 = 300;

/// "K" or "A..B" (inclusive; "A..=B" accepted), capped at 300.
fn parse_indices(primary: &str, alias: &Option<String>, min: i64) -> Result<(i64, i64), Failure> {
    let s = alias.as_deref().unwrap_or(primary).trim();
    let parse = |t: &str| {
        t.trim()
            .parse::<i64>()
            .map_err(|_| usage(format!("index `{t}` is not an integer")))
    };
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let k = parse(s)?;
            (k, k)
        }
    };
    if a < min {
        return Err(usage(format!("indices start at {min}, got {a}")));
    }
    if b < a {
        return Err(usage(format!("empty range {a}..{b}")));
    }
    if b > N_CAP {
        return Err(usage(format!("index cap is {N_CAP}, got {b}")));
    }
    Ok((a, b))
}

fn epoch_seconds() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0)
}

fn family_of(preset: Preset) -> Result<&'static Family, Failure> {
    match preset {
        Preset::Pex => Ok(&PEX),
        Preset::Rem3 => Ok(&REM3),
        _ => Err(usage(format!("preset {} is not a tale-one family", preset.name()))),
    }
}

/// Tale/preset pairing: tale 1 owns pex and rem3, tale 2 owns that.
fn resolve_pair(tale: u8, preset: Option<Preset>) -> Result<Preset, Failure> {
    match (tale, preset) {
        (1, None) => Ok(Preset::Pex),
        (1, Some(p @ (Preset::Pex | Preset::Rem3))) => Ok(p),
        (2, None) | (2, Some(Preset::That)) => Ok(Preset::That),
        (1, Some(p)) => Err(usage(format!("preset {} does not belong to tale 1", p.name()))),
        (2, Some(p)) => Err(usage(format!("preset {} does not belong to tale 2", p.name()))),
        (t, _) => Err(usage(format!("tale must be 1 or 2, got {t}"))),
    }
}

// ---------------------------------------------------------------- form

#[derive(Serialize, Deserialize, Clone, PartialEq, Eq)]
struct SeqRow {
    tale: u8,
    n: i64,
    q: String,
    p_num: String,
    p_den: String,
    c1: i64,
    c2: i64,
}

impl SeqRow {
    fn from_form(tale: u8, n: i64, f: &LinForm) -> Self {
        SeqRow {
            tale,
            n,
            q: f.q.to_string(),
            p_num: f.p.numer().to_string(),
            p_den: f.p.denom().to_string(),
            c1: f.c1,
            c2: f.c2,
        }
    }

    /// Canonical string the cache checksum is taken over.
    fn canonical(&self) -> String {
        format!("{}|{}|{}|{}|{}|{}", self.n, self.q, self.p_num, self.p_den, self.c1, self.c2)
    }
}

#[derive(Serialize, Deserialize)]
struct CacheLine {
    #[serde(flatten)]
    row: SeqRow,
    sha256: String,
}

fn checksum(row: &SeqRow) -> String {
    let mut h = Sha256::new();
    h.update(row.canonical().as_bytes());
    let digest = h.finalize();
    let mut out = String::with_capacity(64);
    for byte in digest {
        out.push_str(&format!("{byte:02x}"));
    }
    out
}

struct Cache {
    path: PathBuf,
    rows: BTreeMap<i64, SeqRow>,
    dirty: bool,
}

impl Cache {
    /// Loads the preset's JSONL file, dropping (with a warning) every line
    /// that fails to parse or fails its checksum.
    fn open(dir: &std::path::Path, preset: Preset) -> Result<Self, Failure> {
        std::fs::create_dir_all(dir)
            .map_err(|e| usage(format!("cache directory {}: {e}", dir.display())))?;
        let path = dir.join(format!("{}.jsonl", preset.name()));
        let mut rows = BTreeMap::new();
        let mut dirty = false;
        match std::fs::read_to_string(&path) {
            Ok(text) => {
                for line in text.lines().filter(|l| !l.trim().is_empty()) {
                    match serde_json::from_str::<CacheLine>(line) {
                        Ok(entry) if checksum(&entry.row) == entry.sha256 => {
                            rows.insert(entry.row.n, entry.row);
                        }
                        Ok(entry) => {
                            eprintln!(
                                "warning: cache entry n = {} failed its checksum; recomputing",
                                entry.row.n
                            );
                            dirty = true;
                        }
                        Err(e) => {
                            eprintln!("warning: unreadable cache line ({e}); recomputing");
                            dirty = true;
                        }
                    }
                }
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(Failure::Run(format!("cache read {}: {e}", path.display()))),
        }
        Ok(Cache { path, rows, dirty })
    }

    fn get(&self, n: i64) -> Option<&SeqRow> {
        self.rows.get(&n)
    }

    fn put(&mut self, row: SeqRow) {
        self.dirty = true;
        self.rows.insert(row.n, row);
    }

    fn flush(&self) -> Result<(), Failure> {
        if !self.dirty {
            return Ok(());
        }
        let mut out = String::new();
        for row in self.rows.values() {
            let line = CacheLine { sha256: checksum(row), row: row.clone() };
            out.push_str(&serde_json::to_string(&line).expect("cache rows are serializable"));
            out.push('\n');
        }
        let mut f = std::fs::File::create(&self.path)
            .map_err(|e| Failure::Run(format!("cache write {}: {e}", self.path.display())))?;
        f.write_all(out.as_bytes())
            .map_err(|e| Failure::Run(format!("cache write {}: {e}", self.path.display())))
    }
}

fn compute_row(preset: Preset, tale: u8, n: i64) -> Result<SeqRow, Failure> {
    let form = match preset {
        Preset::That => that(n)?.linear_form()?,
        _ => family_of(preset)?.linear_form(n)?,
    };
    Ok(SeqRow::from_form(tale, n, &form))
}

fn cmd_form(a: FormArgs) -> Outcome {
    let preset = resolve_pair(a.tale, a.preset)?;
    let (lo, hi) = parse_indices(&a.n, &a.n_range, 0)?;
    let cache_dir = a
        .cache_dir
        .or_else(|| std::env::var_os("ZETA2_CACHE_DIR").map(PathBuf::from));
    let mut cache = match &cache_dir {
        Some(d) => Some(Cache::open(d, preset)?),
        None => None,
    };
    let mut out = Vec::new();
    for n in lo..=hi {
        if let Some(row) = cache.as_ref().and_then(|c| c.get(n)) {
            out.push(row.clone());
            continue;
        }
        let row = compute_row(preset, a.tale, n)?;
        if let Some(c) = cache.as_mut() {
            c.put(row.clone());
        }
        out.push(row);
    }
    if let Some(c) = &cache {
        c.flush()?;
    }
    match a.format {
        Format::Csv => {
            if a.tale == 1 {
                println!("n,q,p_num,p_den,c1,c2");
                for r in &out {
                    println!("{},{},{},{},{},{}", r.n, r.q, r.p_num, r.p_den, r.c1, r.c2);
                }
            } else {
                println!("n,q,p_num,p_den,c1,c2,tale");
                for r in &out {
                    println!(
                        "{},{},{},{},{},{},{}",
                        r.n, r.q, r.p_num, r.p_den, r.c1, r.c2, r.tale
                    );
                }
            }
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Envelope<'a> {
                preset: &'a str,
                generated_at: u64,
                rows: &'a [SeqRow],
            }
            let env =
                Envelope { preset: preset.name(), generated_at: epoch_seconds(), rows: &out };
            println!("{}", serde_json::to_string(&env).expect("rows serialize"));
        }
        Format::Text => {
            for r in &out {
                println!(
                    "n = {:>3}: q = {}, p = {}/{}, subscripts ({}, {})",
                    r.n, r.q, r.p_num, r.p_den, r.c1, r.c2
                );
            }
        }
    }
    Ok(true)
}

// ------------------------------------------------------------ identity

#[derive(Serialize)]
struct IdentityRow {
    n: i64,
    q: String,
    p_num: String,
    p_den: String,
    sign: i8,
    coefficients_match: bool,
}

#[derive(Serialize)]
struct IntegralRow {
    n: i64,
    first: String,
    second: String,
    agree_to_10_digits: bool,
}

fn cmd_identity(a: IdentityArgs) -> Outcome {
    let (lo, hi) = parse_indices(&a.n, &a.n_range, 1)?;
    let mut rows = Vec::new();
    let mut all_ok = true;
    for n in lo..=hi {
        let f1 = PEX.linear_form(n)?;
        let f2 = that(n)?.linear_form()?;
        let (sign, matches) = if f2.q == f1.q && f2.p == f1.p {
            (1i8, true)
        } else if f2.q == -&f1.q && f2.p == -&f1.p {
            (-1, true)
        } else {
            (0, false)
        };
        all_ok &= matches;
        rows.push(IdentityRow {
            n,
            q: f1.q.to_string(),
            p_num: f1.p.numer().to_string(),
            p_den: f1.p.denom().to_string(),
            sign,
            coefficients_match: matches,
        });
    }
    let mut integrals = Vec::new();
    if a.integrals {
        for n in 0..=2 {
            let (lhs, rhs) = cross_tale_check(n, a.prec)?;
            let (l, r) = (lhs.value.to_rat(), rhs.value.to_rat());
            let zero = rat(0, 1);
            let diff = if l >= r { &l - &r } else { &r - &l };
            let scale = if l >= zero { l.clone() } else { -l.clone() };
            let agree = diff <= scale * rat(1, 10_000_000_000);
            all_ok &= agree;
            integrals.push(IntegralRow {
                n,
                first: lhs.value.to_decimal_string(15),
                second: rhs.value.to_decimal_string(15),
                agree_to_10_digits: agree,
            });
        }
    }
    match a.format {
        Format::Csv => {
            println!("n,q,p_num,p_den,sign,coefficients_match");
            for r in &rows {
                println!(
                    "{},{},{},{},{},{}",
                    r.n, r.q, r.p_num, r.p_den, r.sign, r.coefficients_match
                );
            }
            if a.integrals {
                println!("n,first,second,agree_to_10_digits");
                for r in &integrals {
                    println!("{},{},{},{}", r.n, r.first, r.second, r.agree_to_10_digits);
                }
            }
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Envelope<'a> {
                generated_at: u64,
                rows: &'a [IdentityRow],
                integrals: &'a [IntegralRow],
                all_match: bool,
            }
            let env = Envelope {
                generated_at: epoch_seconds(),
                rows: &rows,
                integrals: &integrals,
                all_match: all_ok,
            };
            println!("{}", serde_json::to_string(&env).expect("rows serialize"));
        }
        Format::Text => {
            for r in &rows {
                if r.coefficients_match {
                    println!("n = {:>2}: coefficients agree, common sign {:+}", r.n, r.sign);
                } else {
                    println!("n = {:>2}: MISMATCH between the two constructions", r.n);
                }
            }
            for r in &integrals {
                println!(
                    "n = {}: normalized integrals {} vs {} ({})",
                    r.n,
                    r.first,
                    r.second,
                    if r.agree_to_10_digits { "agree to 10 digits" } else { "DISAGREE" }
                );
            }
        }
    }
    Ok(all_ok)
}

// ----------------------------------------------------------------- phi

fn preset_table(preset: Preset) -> Result<StepFn, Failure> {
    let t = match preset {
        Preset::Pex => step_table(|x| phi_perm(&PEX, x), 126)?,
        Preset::Rem3 => step_table(|x| phi_perm(&REM3, x), 126)?,
        Preset::That => step_table(|x| phi_hat(&THAT_ALPHA, &THAT_BETA, x), 126)?,
        Preset::Tilde => step_table(phi_tilde, 126)?,
    };
    Ok(t)
}

#[derive(Serialize)]
struct PieceRow {
    from: String,
    to: String,
    value: i64,
}

fn cmd_phi(a: PhiArgs) -> Outcome {
    let table = preset_table(a.preset)?;
    let pieces: Vec<PieceRow> = table
        .pieces()
        .into_iter()
        .map(|(from, to, value)| PieceRow {
            from: format!("{}/{}", from.numer(), from.denom()),
            to: format!("{}/{}", to.numer(), to.denom()),
            value,
        })
        .collect();
    match a.format {
        Format::Json => {
            println!("{}", serde_json::to_string(&pieces).expect("pieces serialize"));
        }
        Format::Csv => {
            println!("from,to,value");
            for p in &pieces {
                println!("{},{},{}", p.from, p.to, p.value);
            }
        }
        Format::Text => {
            println!("step table for {} (1-periodic):", a.preset.name());
            for p in &pieces {
                println!("  [{:>5}, {:>5})  →  {}", p.from, p.to, p.value);
            }
        }
    }
    Ok(true)
}

// --------------------------------------------------------------- sieve

#[derive(Serialize)]
struct SieveRow {
    n: i64,
    phi: String,
    d1: i64,
    d2: i64,
    q_divisible: bool,
    p_cleared: bool,
}

fn cmd_sieve(a: SieveArgs) -> Outcome {
    let (lo, hi) = parse_indices(&a.n, &a.n_range, 1)?;
    let table = preset_table(a.preset)?;
    let spec = match a.preset {
        Preset::Pex => SieveSpec::for_family(&PEX),
        Preset::Rem3 => SieveSpec::for_family(&REM3),
        Preset::That | Preset::Tilde => SieveSpec::preset_hat(),
    };
    let mut rows = Vec::new();
    let mut all_ok = true;
    for n in lo..=hi {
        let form = match a.preset {
            Preset::That => that(n)?.linear_form()?,
            Preset::Tilde => PEX.linear_form(n)?,
            _ => family_of(a.preset)?.linear_form(n)?,
        };
        let phi = big_phi(n, &table, &spec)?;
        let rep = inclusion_check(n, &form, &phi, (form.c1, form.c2))?;
        all_ok &= rep.holds();
        rows.push(SieveRow {
            n,
            phi: rep.phi.to_string(),
            d1: rep.d_subscripts.0,
            d2: rep.d_subscripts.1,
            q_divisible: rep.q_divisible,
            p_cleared: rep.p_cleared,
        });
    }
    match a.format {
        Format::Csv => {
            println!("n,phi,d1,d2,q_divisible,p_cleared");
            for r in &rows {
                println!(
                    "{},{},{},{},{},{}",
                    r.n, r.phi, r.d1, r.d2, r.q_divisible, r.p_cleared
                );
            }
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Envelope<'a> {
                preset: &'a str,
                generated_at: u64,
                rows: &'a [SieveRow],
                all_hold: bool,
            }
            let env = Envelope {
                preset: a.preset.name(),
                generated_at: epoch_seconds(),
                rows: &rows,
                all_hold: all_ok,
            };
            println!("{}", serde_json::to_string(&env).expect("rows serialize"));
        }
        Format::Text => {
            for r in &rows {
                println!(
                    "n = {:>3}: Φ = {} | q divisible: {} | D_{}·D_{}·p/Φ integral: {}",
                    r.n, r.phi, r.q_divisible, r.d1, r.d2, r.p_cleared
                );
            }
        }
    }
    Ok(all_ok)
}

// ------------------------------------------------------------- measure

fn cmd_measure(a: MeasureArgs) -> Outcome {
    let fam = family_of(a.preset)?;
    if a.corrected && a.preset != Preset::Pex {
        return Err(usage("--corrected applies to the main family (pex) only"));
    }
    let rep = zeta2_core::measure::measure_pipeline(fam, a.corrected, 256)?;
    let dec = |h: &Hp| h.to_decimal_string(10);
    match a.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Envelope<'a> {
                preset: &'a str,
                corrected: bool,
                generated_at: u64,
                #[serde(rename = "C0")]
                c0: String,
                #[serde(rename = "C1")]
                c1: String,
                #[serde(rename = "C2")]
                c2: String,
                phi_limit: String,
                mu: String,
            }
            let env = Envelope {
                preset: rep.preset,
                corrected: rep.corrected,
                generated_at: epoch_seconds(),
                c0: dec(&rep.c0),
                c1: dec(&rep.c1),
                c2: dec(&rep.c2),
                phi_limit: dec(&rep.phi_limit),
                mu: dec(&rep.mu),
            };
            println!("{}", serde_json::to_string(&env).expect("report serializes"));
        }
        Format::Csv => {
            println!("constant,value");
            println!("C0,{}", dec(&rep.c0));
            println!("C1,{}", dec(&rep.c1));
            println!("C2,{}", dec(&rep.c2));
            println!("phi_limit,{}", dec(&rep.phi_limit));
            println!("mu,{}", dec(&rep.mu));
        }
        Format::Text => {
            println!("preset {} ({})", rep.preset, if rep.corrected { "sharpened φ̃" } else { "plain φ" });
            println!("  C0        = {}", dec(&rep.c0));
            println!("  C1        = {}", dec(&rep.c1));
            println!("  C2        = {}", dec(&rep.c2));
            println!("  φ-limit   = {}", dec(&rep.phi_limit));
            println!("  μ(ζ(2)) ≤ {}", dec(&rep.mu));
        }
    }
    Ok(true)
}

// -------------------------------------------------------------- oracle

fn cmd_oracle(a: OracleArgs) -> Outcome {
    let preset = resolve_pair(a.tale, a.preset)?;
    if a.n < 0 || a.n > N_CAP {
        return Err(usage(format!("index must lie in 0..={N_CAP}")));
    }
    let (form, quad) = match preset {
        Preset::That => {
            let p = that(a.n)?;
            let spec = QuadratureSpec::tale_two_default(&p).with_digits(a.prec);
            (p.linear_form()?, contour_quad2(&p, &spec)?)
        }
        _ => {
            let p = family_of(preset)?.params(a.n)?;
            let spec = QuadratureSpec::tale_one_default(&p).with_digits(a.prec);
            (p.linear_form()?, contour_quad1(&p, &spec)?)
        }
    };
    // ζ(2) needs ~10.1·n extra digits before the q·ζ(2) cancellation
    // leaves prec digits of residual
    let needed = a.prec + (11 * a.n.unsigned_abs() as u32) + 10;
    let zdigits = needed.min(1000);
    if zdigits < needed {
        eprintln!("warning: residual limited by the 1000-digit ζ(2) cap at this n");
    }
    let z = zeta2(zdigits)?.to_rat();
    let residual = form.residual(&z);
    let bits = (a.prec as f64 * 3.33) as u32 + 24 * a.n.unsigned_abs() as u32 + 64;
    let residual_dec = Hp::from_rat(&residual, bits).to_decimal_string(a.prec);
    match a.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Envelope<'a> {
                tale: u8,
                preset: &'a str,
                n: i64,
                prec: u32,
                generated_at: u64,
                value: String,
                error: String,
                residual: String,
                nodes: usize,
            }
            let env = Envelope {
                tale: a.tale,
                preset: preset.name(),
                n: a.n,
                prec: a.prec,
                generated_at: epoch_seconds(),
                value: quad.value.to_decimal_string(a.prec),
                error: quad.error.to_decimal_string(3),
                residual: residual_dec,
                nodes: quad.nodes,
            };
            println!("{}", serde_json::to_string(&env).expect("report serializes"));
        }
        Format::Csv => {
            println!("field,value");
            println!("value,{}", quad.value.to_decimal_string(a.prec));
            println!("error,{}", quad.error.to_decimal_string(3));
            println!("residual,{}", residual_dec);
            println!("nodes,{}", quad.nodes);
        }
        Format::Text => {
            println!("quadrature value = {}", quad.value.to_decimal_string(a.prec));
            println!("error estimate   ≤ {}", quad.error.to_decimal_string(3));
            println!("exact-form value = {}", residual_dec);
            println!("nodes            = {}", quad.nodes);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------- verify-all

fn cmd_verify_all(a: VerifyArgs) -> Outcome {
    if a.max_n < 1 || a.max_n > N_CAP {
        return Err(usage(format!("--max-n must lie in 1..={N_CAP}")));
    }
    let checks = verify::run_all(a.max_n);
    let all_ok = checks.iter().all(|c| c.passed);
    match a.format {
        Format::Csv => {
            println!("name,passed,detail");
            for c in &checks {
                println!("{},{},{}", c.name, c.passed, c.detail.replace(',', ";"));
            }
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row<'a> {
                name: &'a str,
                passed: bool,
                detail: &'a str,
            }
            #[derive(Serialize)]
            struct Envelope<'a> {
                max_n: i64,
                generated_at: u64,
                checks: Vec<Row<'a>>,
                all_passed: bool,
            }
            let env = Envelope {
                max_n: a.max_n,
                generated_at: epoch_seconds(),
                checks: checks
                    .iter()
                    .map(|c| Row { name: &c.name, passed: c.passed, detail: &c.detail })
                    .collect(),
                all_passed: all_ok,
            };
            println!("{}", serde_json::to_string(&env).expect("report serializes"));
        }
        Format::Text => {
            for c in &checks {
                println!("{} {} — {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            if !all_ok {
                // machine-readable failure report alongside the text log
                let failed: Vec<&str> =
                    checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
                println!(
                    "{}",
                    serde_json::to_string(&serde_json::json!({ "failed": failed }))
                        .expect("names serialize")
                );
            }
        }
    }
    Ok(all_ok)
}
