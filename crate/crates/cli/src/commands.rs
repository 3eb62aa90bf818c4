//! Argument definitions and the body of each subcommand.
//!
//! Every command returns the text it would print, so tests can drive the
//! exact code path the binary uses.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use przk_bind_core::channel::{ms_to_us, run_exchange, Latency};
use przk_bind_core::hash::hash_h2;
use przk_bind_core::protocol::{EntitySession, TwinSession};
use przk_bind_core::registration::BindingRecord;
use przk_bind_core::{GroupId, P256Group, PrimeGroup, ToyGroup};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::config::{self, parse_latency, Overrides, CONFIG_ENV};
use crate::error::CliError;
use crate::{keyfile, parallel, registry_file, report};

#[derive(Debug, Parser)]
#[command(
    name = "przk-bind",
    version,
    about = "Twin/entity binding: keys, registry, sessions and campaigns"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derive an entity identity and a twin key pair from a seed.
    Keygen(KeygenArgs),
    /// Bind an entity public key to a twin public key in a registry file.
    Register(RegisterArgs),
    /// Run one session between stored keys over a simulated link.
    Authenticate(AuthenticateArgs),
    /// Run a campaign of honest and adversarial sessions.
    Simulate(SimulateArgs),
    /// Check a campaign report and print it in another format.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct KeygenArgs {
    /// Seed for the identity source and the twin key generator.
    #[arg(long)]
    pub seed: String,
    #[arg(long, default_value = "production", value_parser = parse_group)]
    pub group: GroupId,
    /// Directory for the four key files.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RegisterArgs {
    #[arg(long, value_name = "FILE")]
    pub entity: PathBuf,
    #[arg(long, value_name = "FILE")]
    pub twin: PathBuf,
    /// Registry file (NDJSON, created if missing).
    #[arg(long, value_name = "FILE", default_value = "registry.ndjson")]
    pub registry: PathBuf,
    /// Registration timestamp in seconds.
    #[arg(long, default_value_t = 1_700_000_000)]
    pub time: u64,
}

#[derive(Debug, Args)]
pub struct AuthenticateArgs {
    /// Entity secret file.
    #[arg(long, value_name = "FILE")]
    pub entity: PathBuf,
    /// Twin secret file.
    #[arg(long, value_name = "FILE")]
    pub twin: PathBuf,
    #[arg(long, value_name = "FILE", default_value = "registry.ndjson")]
    pub registry: PathBuf,
    /// One-way latency in ms, `low:high` or a single value.
    #[arg(long, default_value = "10:20", value_parser = parse_latency)]
    pub latency: [f64; 2],
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// JSON campaign config; flags below override its fields.
    #[arg(long, env = CONFIG_ENV, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub sessions: Option<u64>,
    #[arg(long)]
    pub adv_ratio: Option<f64>,
    /// One-way latency in ms, `low:high` or a single value.
    #[arg(long, value_parser = parse_latency)]
    pub latency: Option<[f64; 2]>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_parser = parse_group)]
    pub group: Option<GroupId>,
    /// Worker threads; 1 runs serially.
    #[arg(long, default_value_t = 1)]
    pub parallel: usize,
    #[arg(long, value_name = "FILE")]
    pub out_json: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    pub out_csv: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Csv,
    Json,
    Table,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Report JSON written by `simulate --out-json`.
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
    pub format: ReportFormat,
}

fn parse_group(s: &str) -> Result<GroupId, String> {
    s.parse().map_err(|e| format!("{e}"))
}

pub fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Keygen(a) => cmd_keygen(&a),
        Command::Register(a) => cmd_register(&a),
        Command::Authenticate(a) => cmd_authenticate(&a),
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Report(a) => cmd_report(&a),
    }
}

pub fn cmd_keygen(args: &KeygenArgs) -> Result<String, CliError> {
    let keys = keyfile::generate(&args.seed, args.group)?;
    fs::create_dir_all(&args.out).map_err(|e| CliError::io(&args.out, e))?;
    let written = keyfile::write_all(&args.out, &keys)?;
    let mut out = format!("generated {} keys\n", args.group);
    for f in written {
        let note = if f.secret {
            "  (secret, mode 0600)"
        } else {
            ""
        };
        let _ = writeln!(out, "  {}{note}", f.path.display());
    }
    let _ = writeln!(out, "pk_p = {}", keys.entity_public.pk_p);
    let _ = writeln!(out, "pk_d = {}", keys.twin_public.pk_d);
    Ok(out)
}

fn same_group(a: (&Path, GroupId), b: (&Path, GroupId)) -> Result<GroupId, CliError> {
    if a.1 != b.1 {
        return Err(CliError::usage(format!(
            "{} is {} but {} is {}",
            a.0.display(),
            a.1,
            b.0.display(),
            b.1
        )));
    }
    Ok(a.1)
}

fn registry_group(path: &Path, group: GroupId) -> Result<(), CliError> {
    match registry_file::peek_group(path)? {
        Some(g) if g != group => Err(CliError::usage(format!(
            "{} holds {g} records, keys are {group}",
            path.display()
        ))),
        _ => Ok(()),
    }
}

pub fn cmd_register(args: &RegisterArgs) -> Result<String, CliError> {
    let group = same_group(
        (&args.entity, keyfile::group_of(&args.entity)?),
        (&args.twin, keyfile::group_of(&args.twin)?),
    )?;
    registry_group(&args.registry, group)?;
    match group {
        GroupId::Toy => register_in::<ToyGroup>(args),
        GroupId::Production => register_in::<P256Group>(args),
    }
}

fn register_in<G: PrimeGroup>(args: &RegisterArgs) -> Result<String, CliError> {
    let pk_p = keyfile::load_entity_public::<G>(&args.entity)?;
    let pk_d = keyfile::load_twin_public::<G>(&args.twin)?;
    let rec = BindingRecord::<G>::mint(pk_p, pk_d, args.time).map_err(CliError::usage)?;
    registry_file::append(&args.registry, &rec)?;
    Ok(format!(
        "registered in {}\nzeta = {}\n",
        args.registry.display(),
        hex::encode(rec.zeta.as_bytes())
    ))
}

pub fn cmd_authenticate(args: &AuthenticateArgs) -> Result<String, CliError> {
    let group = same_group(
        (&args.entity, keyfile::group_of(&args.entity)?),
        (&args.twin, keyfile::group_of(&args.twin)?),
    )?;
    registry_group(&args.registry, group)?;
    match group {
        GroupId::Toy => authenticate_in::<ToyGroup>(args),
        GroupId::Production => authenticate_in::<P256Group>(args),
    }
}

fn authenticate_in<G: PrimeGroup>(args: &AuthenticateArgs) -> Result<String, CliError> {
    let entity_keys = keyfile::load_entity_keys::<G>(&args.entity)?;
    let twin_keys = keyfile::load_twin_keys::<G>(&args.twin)?;
    let registry = registry_file::load::<G>(&args.registry)?;
    let rec = *registry
        .lookup(&entity_keys.public_key(), &twin_keys.public_key())
        .ok_or_else(|| {
            CliError::integrity(format!(
                "{} has no binding for these keys",
                args.registry.display()
            ))
        })?;
    let mut twin = TwinSession::new(twin_keys, &rec).map_err(CliError::integrity)?;
    let mut entity = EntitySession::new(entity_keys, &rec).map_err(CliError::integrity)?;
    let latency = Latency::uniform(ms_to_us(args.latency[0]), ms_to_us(args.latency[1]));
    let mut rng = ChaCha20Rng::seed_from_u64(args.seed);
    let trace =
        run_exchange(&mut twin, &mut entity, latency, None, &mut rng).map_err(CliError::runtime)?;

    let mut out = String::new();
    for d in &trace.deliveries {
        let name = d.message.as_ref().map_or("malformed", |m| m.name());
        let _ = writeln!(
            out,
            "{:>10.3} ms  -> {:<6}  {name} ({} bytes)",
            d.delivered_us as f64 / 1000.0,
            format!("{:?}", d.to).to_lowercase(),
            d.bytes.len()
        );
    }
    let t = &trace.transcript;
    let element =
        |e: &Option<G::Element>| e.map_or("-".into(), |e| hex::encode(G::encode_element(&e)));
    let scalar =
        |s: &Option<G::Scalar>| s.map_or("-".into(), |s| hex::encode(G::encode_scalar(&s)));
    let _ = writeln!(out, "transcript:");
    let _ = writeln!(out, "  alpha   = {}", element(&t.alpha));
    let _ = writeln!(out, "  c       = {}", scalar(&t.c));
    let _ = writeln!(out, "  z       = {}", scalar(&t.z));
    let _ = writeln!(out, "  h_sp    = {}", scalar(&t.h_sp));
    let _ = writeln!(out, "  r_p_pub = {}", element(&t.r_p_pub));
    let _ = writeln!(
        out,
        "phases: twin {}, entity {}",
        twin.phase().name(),
        entity.phase().name()
    );
    match (twin.key(), entity.key()) {
        (Some(kd), Some(kp)) if kd == kp => {
            let auth_ms = trace.auth_complete_us().unwrap_or(0) as f64 / 1000.0;
            let fingerprint = hash_h2(&[b"przk-bind/key-fingerprint", kd.as_bytes()]);
            let _ = writeln!(out, "authenticated: yes (auth {auth_ms:.3} ms)");
            let _ = writeln!(
                out,
                "session key fingerprint: {}",
                hex::encode(&fingerprint.as_bytes()[..8])
            );
            Ok(out)
        }
        _ => Err(CliError::integrity(format!(
            "authentication rejected (twin {}, entity {})\n{out}",
            twin.phase().name(),
            entity.phase().name()
        ))),
    }
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<String, CliError> {
    let overrides = Overrides {
        sessions: args.sessions,
        adv_ratio: args.adv_ratio,
        latency_ms: args.latency,
        seed: args.seed,
        group: args.group,
    };
    let config = config::resolve(args.config.as_deref(), &overrides)?;
    let report = parallel::run(&config, Some(args.parallel))?;
    let mut out = report::summary(&report);
    if let Some(p) = &args.out_json {
        fs::write(p, report::to_json(&report)).map_err(|e| CliError::io(p, e))?;
        let _ = writeln!(out, "wrote {}", p.display());
    }
    if let Some(p) = &args.out_csv {
        fs::write(p, report::to_csv(&report)).map_err(|e| CliError::io(p, e))?;
        let _ = writeln!(out, "wrote {}", p.display());
    }
    Ok(out)
}

pub fn cmd_report(args: &ReportArgs) -> Result<String, CliError> {
    let report = report::load(&args.input)?;
    report::verify(&report)
        .map_err(|e| CliError::Integrity(format!("{}: {e}", args.input.display())))?;
    Ok(match args.format {
        ReportFormat::Json => report::to_json(&report),
        ReportFormat::Csv => report::to_csv(&report),
        ReportFormat::Table => report::table(&report),
    })
}
