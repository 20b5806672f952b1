use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use faure_loidreau::attacks::{
    attack_interleaved_key_recovery, close_error_attack, gok_condition, linearization_feasibility,
    linearization_rank_bound,
};
use faure_loidreau::estimator::{estimate_fl, render_csv, render_text, table1_rows, table_report};
use faure_loidreau::system::{key_metrics, validate};
use faure_loidreau::{
    AttackError, ChaCha20Rng, FlError, FlSystem, MidElem, Plaintext, SeedableRng, SystemParams, Tier, TopElem,
};

use crate::format::{self, Header, Payload};
use crate::{exit, CliError};

#[derive(Debug, Parser)]
#[command(name = "fl", version, about = "Repaired Faure-Loidreau rank-metric encryption")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a key pair, written to <prefix>.pub and <prefix>.sec.
    Keygen(KeygenArgs),
    /// Write a plaintext file for a public key.
    Plaintext(PlaintextArgs),
    Encrypt(EncryptArgs),
    Decrypt(DecryptArgs),
    /// Work factors for one parameter set, or the comparison table.
    Analyze(AnalyzeArgs),
    /// Run an attack against a public key.
    Attack(AttackArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ParamArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub u: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub w: usize,
}

impl ParamArgs {
    fn params(&self) -> SystemParams {
        SystemParams::new(self.q, self.m, self.u, self.n, self.k, self.w)
    }
}

#[derive(Debug, Args)]
pub struct KeygenArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Use the original key generation, which is open to key recovery.
    #[arg(long, conflicts_with = "repaired")]
    pub original: bool,
    /// Use the repaired key generation (the default).
    #[arg(long)]
    pub repaired: bool,
    #[arg(long, default_value = "key")]
    pub out_prefix: PathBuf,
}

#[derive(Debug, Args)]
pub struct PlaintextArgs {
    /// Public key that fixes the parameters.
    #[arg(long)]
    pub key: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Comma-separated element indices for the k - u free symbols; random if absent.
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<u128>>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct EncryptArgs {
    #[arg(long)]
    pub key: PathBuf,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct DecryptArgs {
    /// Private key.
    #[arg(long)]
    pub key: PathBuf,
    /// Public key; defaults to the private key path with extension `.pub`.
    #[arg(long = "pub")]
    pub public: Option<PathBuf>,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Report the comparison table instead of a single parameter set.
    #[arg(long, conflicts_with_all = ["q", "m", "u", "n", "k", "w"])]
    pub table1: bool,
    /// CSV output for the table.
    #[arg(long, requires = "table1")]
    pub csv: bool,
    #[arg(long, required_unless_present = "table1")]
    pub q: Option<u32>,
    #[arg(long, required_unless_present = "table1")]
    pub m: Option<usize>,
    #[arg(long, required_unless_present = "table1")]
    pub u: Option<usize>,
    #[arg(long, required_unless_present = "table1")]
    pub n: Option<usize>,
    #[arg(long, required_unless_present = "table1")]
    pub k: Option<usize>,
    #[arg(long, required_unless_present = "table1")]
    pub w: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Interleaved,
    Linearization,
    CloseError,
}

#[derive(Debug, Args)]
pub struct AttackArgs {
    /// Public key.
    #[arg(long)]
    pub key: PathBuf,
    #[arg(long, value_enum)]
    pub method: Method,
    /// Trial budget for the close-error attack.
    #[arg(long, default_value_t = 10 << 14)]
    pub budget: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Ciphertext for the linearization attack.
    #[arg(long)]
    pub ciphertext: Option<PathBuf>,
}

/// Runs a command, printing its report to stdout, and returns the exit code.
pub fn run(cli: Cli) -> Result<u8, CliError> {
    match cli.command {
        Command::Keygen(a) => keygen(&a),
        Command::Plaintext(a) => plaintext(&a),
        Command::Encrypt(a) => encrypt(&a),
        Command::Decrypt(a) => decrypt(&a),
        Command::Analyze(a) => analyze(&a),
        Command::Attack(a) => attack(&a),
    }
}

fn rng_for(seed: Option<u64>) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed.unwrap_or_else(rand::random))
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn load(path: &Path, want: format::Role) -> Result<(Header, Payload), CliError> {
    let (h, p) = format::decode(&read(path)?).map_err(|e| CliError::Malformed(format!("{}: {}", path.display(), e.0)))?;
    if h.role != want {
        return Err(CliError::Malformed(format!("{}: expected a {want:?} file, found {:?}", path.display(), h.role)));
    }
    Ok((h, p))
}

fn system(h: &Header) -> Result<FlSystem, CliError> {
    FlSystem::with_tower(h.params, h.tower.clone()).map_err(|e| CliError::Malformed(e.to_string()))
}

fn same_params(a: &Header, b: &Header) -> Result<(), CliError> {
    if a.params != b.params || a.tower.mid().modulus() != b.tower.mid().modulus() || a.tower.top().modulus() != b.tower.top().modulus()
    {
        return Err(CliError::Malformed("files belong to different parameter sets".into()));
    }
    Ok(())
}

fn functional_check(p: &SystemParams) -> Result<(), CliError> {
    let v = validate(p, Tier::Functional);
    if v.is_empty() {
        return Ok(());
    }
    let lines: Vec<String> = v.iter().map(ToString::to_string).collect();
    Err(CliError::Params(format!("invalid parameters {p}:\n  {}", lines.join("\n  "))))
}

fn security_warnings(p: &SystemParams) -> String {
    validate(p, Tier::Security).iter().map(|v| format!("warning: {v}\n")).collect()
}

fn with_ext(path: &Path, ext: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(ext);
    PathBuf::from(s)
}

fn show_mid(sys: &FlSystem, a: &MidElem) -> String {
    format!("{:x}", sys.tower().mid().index(*a))
}

fn show_top(sys: &FlSystem, a: &TopElem) -> String {
    a.coeffs().iter().map(|c| show_mid(sys, c)).collect::<Vec<_>>().join(":")
}

fn show_tops(sys: &FlSystem, v: &[TopElem]) -> String {
    v.iter().map(|a| show_top(sys, a)).collect::<Vec<_>>().join(" ")
}

fn keygen(a: &KeygenArgs) -> Result<u8, CliError> {
    let p = a.params.params();
    functional_check(&p)?;
    let sys = FlSystem::new(p).map_err(|e| CliError::Params(e.to_string()))?;
    let mut rng = rng_for(a.seed);
    let keys = if a.original { sys.keygen_original(&mut rng) } else { sys.keygen_repaired(&mut rng) };
    let (sk, pk) = keys.map_err(|e| CliError::Params(e.to_string()))?;
    let pub_path = with_ext(&a.out_prefix, ".pub");
    let sec_path = with_ext(&a.out_prefix, ".sec");
    write(&pub_path, &format::encode(&p, sys.tower(), &Payload::Public(pk)))?;
    write(&sec_path, &format::encode(&p, sys.tower(), &Payload::Private(sk.clone())))?;
    let metrics = key_metrics(&p);
    let gok = gok_condition(&sys, &sk.z);
    print!("{}", security_warnings(&p));
    println!("parameters: {p}");
    println!("mode: {}", if a.original { "original" } else { "repaired" });
    println!("t_pub: {}", p.t_pub());
    println!("key size: {:.2} KB ({} bytes)", metrics.key_size_bytes as f64 / 1000.0, metrics.key_size_bytes);
    println!("rate: {:.2}", metrics.rate);
    println!("phi: {} (key recovery {})", gok.phi, if gok.would_succeed { "possible" } else { "blocked" });
    println!("wrote {} and {}", pub_path.display(), sec_path.display());
    Ok(exit::OK)
}

fn plaintext(a: &PlaintextArgs) -> Result<u8, CliError> {
    let (h, _) = load(&a.key, format::Role::Public)?;
    let f = h.tower.mid();
    let len = h.params.k - h.params.u;
    let free: Vec<MidElem> = match &a.values {
        Some(v) => {
            if v.len() != len {
                return Err(CliError::Params(format!("expected {len} values, got {}", v.len())));
            }
            let order = u128::from(h.params.q).checked_pow(h.params.m as u32);
            if let Some(bad) = v.iter().find(|&&i| order.is_some_and(|o| i >= o)) {
                return Err(CliError::Params(format!("value {bad} is not a field element index")));
            }
            v.iter().map(|&i| f.from_index(i)).collect()
        }
        None => {
            let mut rng = rng_for(a.seed);
            (0..len).map(|_| faure_loidreau::Field::random(f, &mut rng)).collect()
        }
    };
    write(&a.out, &format::encode(&h.params, &h.tower, &Payload::Plaintext(free)))?;
    println!("wrote {} ({len} symbols)", a.out.display());
    Ok(exit::OK)
}

fn encrypt(a: &EncryptArgs) -> Result<u8, CliError> {
    let (h, Payload::Public(pk)) = load(&a.key, format::Role::Public)? else { unreachable!("role checked") };
    let (hm, Payload::Plaintext(free)) = load(&a.input, format::Role::Plaintext)? else { unreachable!("role checked") };
    same_params(&h, &hm)?;
    let sys = system(&h)?;
    let msg = Plaintext::from_free(free, h.params.u);
    let c = sys.encrypt(&pk, &msg, &mut rng_for(a.seed)).map_err(|e| CliError::Malformed(e.to_string()))?;
    write(&a.out, &format::encode(&h.params, &h.tower, &Payload::Ciphertext(c)))?;
    println!("wrote {}", a.out.display());
    Ok(exit::OK)
}

fn decrypt(a: &DecryptArgs) -> Result<u8, CliError> {
    let pub_path = a.public.clone().unwrap_or_else(|| a.key.with_extension("pub"));
    let (hs, Payload::Private(sk)) = load(&a.key, format::Role::Private)? else { unreachable!("role checked") };
    let (hp, Payload::Public(pk)) = load(&pub_path, format::Role::Public)? else { unreachable!("role checked") };
    let (hc, Payload::Ciphertext(c)) = load(&a.input, format::Role::Ciphertext)? else { unreachable!("role checked") };
    same_params(&hs, &hp)?;
    same_params(&hs, &hc)?;
    let sys = system(&hs)?;
    let msg = match sys.decrypt(&sk, &pk, &c) {
        Ok(m) => m,
        Err(FlError::KeyMismatch(s)) => return Err(CliError::Malformed(s)),
        Err(_) => return Err(CliError::Decryption),
    };
    let free = msg.free(hs.params.u).to_vec();
    write(&a.out, &format::encode(&hs.params, &hs.tower, &Payload::Plaintext(free)))?;
    println!("wrote {}", a.out.display());
    Ok(exit::OK)
}

fn analyze(a: &AnalyzeArgs) -> Result<u8, CliError> {
    if a.table1 {
        let lines = table_report(&table1_rows());
        print!("{}", if a.csv { render_csv(&lines) } else { render_text(&lines) });
        return Ok(exit::OK);
    }
    let (Some(q), Some(m), Some(u), Some(n), Some(k), Some(w)) = (a.q, a.m, a.u, a.n, a.k, a.w) else {
        return Err(CliError::Params("all of --q --m --u --n --k --w are required".into()));
    };
    let p = SystemParams::new(q, m, u, n, k, w);
    functional_check(&p)?;
    let report = estimate_fl(&p).map_err(|e| CliError::Params(e.to_string()))?;
    print!("{}", security_warnings(&p));
    print!("{}", report.render());
    Ok(exit::OK)
}

fn attack(a: &AttackArgs) -> Result<u8, CliError> {
    let (h, Payload::Public(pk)) = load(&a.key, format::Role::Public)? else { unreachable!("role checked") };
    let sys = system(&h)?;
    let p = h.params;
    let mut out = String::new();
    let precondition = |e: AttackError| match e {
        AttackError::Precondition(s) => CliError::Params(s),
        other => CliError::Params(other.to_string()),
    };
    let code = match a.method {
        Method::Interleaved => {
            let outcome = attack_interleaved_key_recovery(&sys, &pk).map_err(precondition)?;
            match &outcome.recovered {
                Some(key) => {
                    let d = &outcome.diagnostics;
                    writeln!(out, "key recovered: k_pub = x G + z verified").ok();
                    writeln!(out, "error rank: {}", d.error_rank.unwrap_or(0)).ok();
                    writeln!(out, "phi: {}", d.phi.unwrap_or(0)).ok();
                    writeln!(out, "x: {}", show_tops(&sys, &key.x)).ok();
                    writeln!(out, "z: {}", show_tops(&sys, &key.z)).ok();
                    exit::OK
                }
                None => {
                    writeln!(out, "interleaved decoder reported failure: failure condition holds (phi < w)").ok();
                    writeln!(out, "key not recovered").ok();
                    exit::ATTACK_FAILED
                }
            }
        }
        Method::Linearization => {
            let path = a.ciphertext.as_ref().ok_or_else(|| CliError::Params("--ciphertext is required".into()))?;
            let (hc, Payload::Ciphertext(c)) = load(path, format::Role::Ciphertext)? else { unreachable!("role checked") };
            same_params(&h, &hc)?;
            let rep = linearization_feasibility(&sys, &pk, &c).map_err(precondition)?;
            writeln!(out, "matrix: {} x {}", rep.rows, rep.cols).ok();
            writeln!(out, "rank: {} (repaired-key bound {})", rep.rank, linearization_rank_bound(&sys)).ok();
            writeln!(out, "left kernel dimension: {}", rep.kernel_dim).ok();
            writeln!(out, "feasible: {}", rep.feasible).ok();
            if rep.feasible { exit::OK } else { exit::ATTACK_FAILED }
        }
        Method::CloseError => {
            let mut rng = rng_for(a.seed);
            match close_error_attack(&sys, &pk, a.budget, &mut rng) {
                Ok(outcome) => {
                    let key = outcome.recovered.as_ref().expect("successful attack carries a key");
                    writeln!(out, "key recovered after {} trials (budget {})", outcome.diagnostics.trials, a.budget).ok();
                    writeln!(out, "phi of shifted error: {}", outcome.diagnostics.phi.unwrap_or(0)).ok();
                    writeln!(out, "x: {}", show_tops(&sys, &key.x)).ok();
                    writeln!(out, "z: {}", show_tops(&sys, &key.z)).ok();
                    exit::OK
                }
                Err(AttackError::TrialBudgetExhausted { trials }) => {
                    writeln!(out, "no key recovered within {trials} trials").ok();
                    exit::ATTACK_FAILED
                }
                Err(e) => return Err(precondition(e)),
            }
        }
    };
    println!("parameters: {p}");
    print!("{out}");
    Ok(code)
}
