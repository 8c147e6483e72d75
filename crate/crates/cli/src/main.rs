//! `dof`: experiment harness over the alignment, simulation, and prover
//! modules. Every command is deterministic given its flags and seed, and
//! repeated runs produce byte-identical output, so results can be diffed
//! and scripted.
//!
//! Exit codes form a stable contract: 0 success or verified, 1 negative
//! verification (a decoder fails, a claim is not provable), 2 usage or
//! parse errors.

use clap::{Parser, Subcommand, ValueEnum};
use dof_core::entropy::{
    converse_system, parse_file, prove, reconstructs, substitution_multipliers,
    verify_certificate, CertificateOutcome, Mode,
};
use dof_core::network::{build_topology, sample_generic_channel, ChannelRealization, Connectivity};
use dof_core::simulate::{sweep, write_csv};
use dof_core::{
    alignment_report, build_example_channel, clustered_outer_bound, example_scheme,
    search_power_assignment,
};
use serde_json::json;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dof", version, about = "interference alignment experiments for clustered decoding")]
struct Cli {
    /// RNG seed for sampled channels
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// emit machine-readable JSON instead of text
    #[arg(long, global = true)]
    json: bool,

    /// write output to this file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a channel against the three-beam scheme: per-decoder ranks and DoF
    VerifyExample {
        /// channel realization JSON to check instead of the built-in one
        #[arg(long, value_name = "PATH")]
        channel: Option<PathBuf>,
    },
    /// Enumerate diagonal power assignments that achieve DoF 12/5
    Search {
        /// largest exponent tried for each of the three link powers
        #[arg(long, default_value_t = 2)]
        max_exponent: u32,
    },
    /// Sum-rate sweep over an SNR grid; CSV rows plus a fitted slope
    Simulate {
        /// comma-separated dB values, strictly increasing
        #[arg(long, value_delimiter = ',', default_value = "100,110,120,130,140,150")]
        snr_db: Vec<f64>,
    },
    /// Decide an inequality file and print the dual certificate
    Prove {
        /// inequality file: one target statement, optional `given:` constraints
        file: PathBuf,

        /// elemental system to prove against
        #[arg(long, value_enum, default_value_t = ModeArg::Discrete)]
        mode: ModeArg,
    },
    /// Verify the converse certificate and print the resulting rate bound
    Certificate,
    /// Closed-form per-user DoF outer bound for clustered decoding
    Bound {
        /// number of users
        #[arg(long = "K", value_name = "USERS")]
        k: usize,

        /// cluster size (receivers decoding jointly)
        #[arg(long = "M", value_name = "SIZE")]
        m: usize,
    },
    /// Draw a generic locally connected channel and print its JSON
    SampleChannel {
        #[arg(long, default_value_t = 4)]
        users: usize,

        /// symbol extension length
        #[arg(long, default_value_t = 5)]
        extension: usize,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Discrete,
    MiOnly,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Discrete => Mode::Discrete,
            ModeArg::MiOnly => Mode::MiOnly,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = validate_paths(&cli) {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match run(&cli) {
        Ok((output, code)) => {
            let emitted = match &cli.out {
                Some(path) => std::fs::write(path, &output)
                    .map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    print!("{output}");
                    Ok(())
                }
            };
            match emitted {
                Ok(()) => ExitCode::from(code),
                Err(msg) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(2)
                }
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Input and output paths are rejected up front, before any computation.
fn validate_paths(cli: &Cli) -> Result<(), String> {
    let mut inputs: Vec<&Path> = Vec::new();
    match &cli.command {
        Command::VerifyExample { channel: Some(p) } => inputs.push(p),
        Command::Prove { file, .. } => inputs.push(file),
        _ => {}
    }
    for p in inputs {
        if !p.is_file() {
            return Err(format!("no such file: {}", p.display()));
        }
    }
    if let Some(out) = &cli.out {
        if let Some(parent) = out.parent() {
            if !parent.as_os_str().is_empty() && !parent.is_dir() {
                return Err(format!("no such directory: {}", parent.display()));
            }
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(String, u8), String> {
    match &cli.command {
        Command::VerifyExample { channel } => cmd_verify_example(cli, channel.as_deref()),
        Command::Search { max_exponent } => cmd_search(cli, *max_exponent),
        Command::Simulate { snr_db } => cmd_simulate(cli, snr_db),
        Command::Prove { file, mode } => cmd_prove(cli, file, (*mode).into()),
        Command::Certificate => cmd_certificate(cli),
        Command::Bound { k, m } => cmd_bound(cli, *k, *m),
        Command::SampleChannel { users, extension } => {
            cmd_sample_channel(cli, *users, *extension)
        }
    }
}

fn cmd_verify_example(cli: &Cli, channel_path: Option<&Path>) -> Result<(String, u8), String> {
    let channel = match channel_path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            ChannelRealization::from_json(&text).map_err(|e| e.to_string())?
        }
        None => build_example_channel(),
    };
    let report =
        alignment_report(&channel, &example_scheme()).map_err(|e| e.to_string())?;
    let all_ok = report.dof.is_some();

    let output = if cli.json {
        let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
        s.push('\n');
        s
    } else {
        let mut s = String::new();
        for d in &report.per_decoder {
            let verdict = if d.decodable { "decodable" } else { "not decodable" };
            let _ = writeln!(
                s,
                "decoder {}: interference rank {}, joint rank {}, {}",
                d.k, d.interference_rank, d.joint_rank, verdict
            );
        }
        match &report.dof {
            Some(dof) => {
                let _ = writeln!(s, "DoF = {dof}");
            }
            None => {
                let failing: Vec<String> = report
                    .per_decoder
                    .iter()
                    .filter(|d| !d.decodable)
                    .map(|d| d.k.to_string())
                    .collect();
                let _ = writeln!(s, "failing decoders: {}", failing.join(", "));
            }
        }
        s
    };
    Ok((output, if all_ok { 0 } else { 1 }))
}

fn cmd_search(cli: &Cli, max_exponent: u32) -> Result<(String, u8), String> {
    let found = search_power_assignment(max_exponent);
    let output = if cli.json {
        let mut s = serde_json::to_string_pretty(&found).expect("assignments serialize");
        s.push('\n');
        s
    } else {
        let mut s = String::new();
        for a in &found {
            let _ = writeln!(s, "({}, {}, {})", a.direct, a.succ, a.pred);
        }
        let _ = writeln!(s, "{} assignments achieve DoF 12/5", found.len());
        s
    };
    Ok((output, if found.is_empty() { 1 } else { 0 }))
}

fn cmd_simulate(cli: &Cli, snr_db: &[f64]) -> Result<(String, u8), String> {
    if snr_db.is_empty() {
        return Err("empty SNR grid".into());
    }
    if snr_db.windows(2).any(|w| w[0] >= w[1]) {
        return Err("SNR grid must be strictly increasing".into());
    }
    let rhos: Vec<f64> = snr_db.iter().map(|db| 10f64.powf(db / 10.0)).collect();
    let report = sweep(&build_example_channel(), &example_scheme(), &rhos)
        .map_err(|e| e.to_string())?;
    let output = if cli.json {
        let rows: Vec<_> = report
            .rows
            .iter()
            .map(|r| {
                json!({
                    "snr_db": 10.0 * r.rho.log10(),
                    "rates": r.rates,
                    "sum": r.sum,
                })
            })
            .collect();
        let window_db: Vec<f64> = report
            .window
            .iter()
            .map(|&i| 10.0 * report.rows[i].rho.log10())
            .collect();
        let doc = json!({ "rows": rows, "slope": report.slope, "window_db": window_db });
        let mut s = serde_json::to_string_pretty(&doc).expect("rows serialize");
        s.push('\n');
        s
    } else {
        write_csv(&report)
    };
    Ok((output, 0))
}

fn cmd_prove(cli: &Cli, path: &Path, mode: Mode) -> Result<(String, u8), String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let file = parse_file(&text).map_err(|e| e.to_string())?;
    let outcome = prove(&file.target, &file.constraints, mode).map_err(|e| e.to_string())?;
    if outcome.provable() && !reconstructs(&file.target, &file.constraints, &outcome) {
        return Err("internal: certificate fails to reconstruct the target".into());
    }
    let output = if cli.json {
        let mut s = serde_json::to_string_pretty(&outcome.to_json()).expect("proof serializes");
        s.push('\n');
        s
    } else {
        let mut s = String::new();
        let status = if outcome.provable() { "provable" } else { "not-provable" };
        let _ = writeln!(s, "{status} ({} mode)", mode.as_str());
        for (id, v) in &outcome.lambda {
            let _ = writeln!(s, "  {v} * [{id} >= 0]");
        }
        for (idx, v) in &outcome.mu {
            let _ = writeln!(s, "  {v} * [constraint {idx}]");
        }
        s
    };
    Ok((output, if outcome.provable() { 0 } else { 1 }))
}

fn cmd_certificate(cli: &Cli) -> Result<(String, u8), String> {
    let system = converse_system();
    let multipliers = substitution_multipliers(&system);
    let outcome =
        verify_certificate(&system, &multipliers).map_err(|e| e.to_string())?;
    match outcome {
        CertificateOutcome::Verified { rate, log_snr, dof_bound } => {
            let output = if cli.json {
                let weighted: Vec<_> = system
                    .iter()
                    .zip(&multipliers)
                    .map(|(ineq, m)| json!([ineq.id, m.to_string()]))
                    .collect();
                let doc = json!({
                    "rate": rate.to_string(),
                    "log_snr": log_snr.to_string(),
                    "dof_bound": dof_bound.to_string(),
                    "multipliers": weighted,
                });
                let mut s = serde_json::to_string_pretty(&doc).expect("certificate serializes");
                s.push('\n');
                s
            } else {
                let mut s = String::new();
                let _ = writeln!(s, "{rate}R <= {log_snr}L, DoF <= {dof_bound}");
                for (ineq, m) in system.iter().zip(&multipliers) {
                    let _ = writeln!(s, "  {m} * [{}]", ineq.display);
                }
                s
            };
            Ok((output, 0))
        }
        CertificateOutcome::Incomplete { residual } => {
            let terms: Vec<String> =
                residual.iter().map(|(n, c)| format!("{c} * {n}")).collect();
            Ok((format!("residual terms: {}\n", terms.join(", ")), 1))
        }
    }
}

fn cmd_bound(cli: &Cli, users: usize, cluster: usize) -> Result<(String, u8), String> {
    let per_user = clustered_outer_bound(users, cluster).map_err(|e| e.to_string())?;
    let total = per_user.clone() * dof_core::rat(users as i64);
    let as_f64 = |r: &dof_core::Rat| {
        use num_traits::ToPrimitive;
        r.to_f64().expect("small rational")
    };
    let output = if cli.json {
        let doc = json!({
            "users": users,
            "cluster": cluster,
            "per_user": per_user.to_string(),
            "per_user_decimal": as_f64(&per_user),
            "total": total.to_string(),
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("bound serializes");
        s.push('\n');
        s
    } else {
        format!(
            "{} per user ({per_user}), {} total over {users} users\n",
            as_f64(&per_user),
            total
        )
    };
    Ok((output, 0))
}

fn cmd_sample_channel(cli: &Cli, users: usize, extension: usize) -> Result<(String, u8), String> {
    let topology =
        build_topology(users, Connectivity::Local, 2).map_err(|e| e.to_string())?;
    let channel =
        sample_generic_channel(&topology, extension, cli.seed).map_err(|e| e.to_string())?;
    let mut output = channel.to_json();
    output.push('\n');
    Ok((output, 0))
}
