use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use trigap::interval::Interval;
use trigap::oracle::{cross_check_sandwich, fd_eigs_1d, fem_triangle_eigs, Potential1d};
use trigap::prover::{airy_scan, prove_separation, scan_curves, verify_certificate, ProofCertificate, ProofConfig, Verdict};

#[derive(Parser)]
#[command(name = "trigap", version, about = "Computer-assisted proof of lambda_2 < lambda_3 on nearly degenerate triangles")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the full proof and write the certificate.
    Prove(ProveArgs),
    /// Per-point curves of the upper and lower bounds (CSV).
    Scan {
        #[arg(long, default_value_t = 51)]
        grid: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The characteristic function f_s on a kappa grid (CSV).
    AiryScan {
        #[arg(long, default_value_t = 0.0)]
        s: f64,
        #[arg(long, default_value_t = 0.0)]
        kappa_min: f64,
        #[arg(long, default_value_t = 4.0)]
        kappa_max: f64,
        #[arg(long, default_value_t = 401)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a stored certificate without recomputing the sweeps.
    Verify {
        #[arg(long)]
        cert: PathBuf,
    },
    /// Floating-point reference solvers.
    Oracle {
        #[command(subcommand)]
        cmd: OracleCmd,
    },
}

#[derive(Args)]
struct ProveArgs {
    #[arg(long, default_value_t = 17)]
    n_basis: usize,
    #[arg(long, default_value_t = 100)]
    ns: usize,
    #[arg(long, default_value_t = 1e-6)]
    quad_target: f64,
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Finite-difference eigenvalues of the 1-D problems.
    Fd {
        #[arg(long)]
        problem: Problem,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, default_value_t = 4000)]
        grid: usize,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// P1 finite-element Dirichlet eigenvalues of T(s,t).
    Fem {
        #[arg(long)]
        s: f64,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 6)]
        level: u32,
        #[arg(long, default_value_t = 4)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// FEM eigenvalues at (s,t) against a certificate.
    Check {
        #[arg(long)]
        cert: PathBuf,
        #[arg(long)]
        s: f64,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 7)]
        level: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

type CliResult<T> = Result<T, Box<dyn std::error::Error>>;

fn sink(out: &Option<PathBuf>) -> CliResult<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(fs::File::create(p)?),
        None => Box::new(io::stdout()),
    })
}

fn write_json<T: serde::Serialize>(out: &Option<PathBuf>, v: &T) -> CliResult<()> {
    let mut w = sink(out)?;
    serde_json::to_writer_pretty(&mut w, v)?;
    writeln!(w)?;
    Ok(())
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn prove(a: &ProveArgs) -> CliResult<ExitCode> {
    let mut cfg = ProofConfig { n_basis: a.n_basis, n_s: a.ns, quad_target: a.quad_target, ..ProofConfig::default() };
    if let Some(th) = a.threshold {
        cfg = cfg.with_threshold(th)?;
    }
    let cert = prove_separation(&cfg);
    let json = cert.to_json();
    match &a.out {
        Some(p) => fs::write(p, json + "\n")?,
        None => println!("{json}"),
    }
    let u = cert.u.as_deref().unwrap_or("-");
    let l = cert.l.as_deref().unwrap_or("-");
    eprintln!("verdict: {:?}  U = {u}  L = {l}", cert.verdict);
    if let Some(e) = &cert.error {
        eprintln!("failed at stage {}: {}", e.stage, e.message);
    }
    Ok(match cert.verdict {
        Verdict::Proven => ExitCode::SUCCESS,
        Verdict::NotProven => ExitCode::from(2),
        Verdict::Error => ExitCode::from(1),
    })
}

fn run(cli: Cli) -> CliResult<ExitCode> {
    match cli.cmd {
        Cmd::Prove(a) => return prove(&a),
        Cmd::Scan { grid, out } => {
            let rows = scan_curves(grid, &ProofConfig::default())?;
            let mut w = csv::Writer::from_writer(sink(&out)?);
            w.write_record(["s", "mu_hat2_upper", "mu_bar3_lo", "mu_bar3_hi", "mu3_transferred_lo"])?;
            for r in rows {
                w.write_record([
                    r.s.to_string(),
                    opt(r.mu_hat2_upper),
                    opt(r.mu_bar3.map(|m| m.lo())),
                    opt(r.mu_bar3.map(|m| m.hi())),
                    opt(r.mu3_transferred_lo),
                ])?;
            }
            w.flush()?;
        }
        Cmd::AiryScan { s, kappa_min, kappa_max, steps, out } => {
            let rows = airy_scan(s, Interval::new(kappa_min, kappa_max)?, steps)?;
            let mut w = csv::Writer::from_writer(sink(&out)?);
            w.write_record(["kappa", "f_mid", "f_width"])?;
            for r in rows {
                w.write_record([r.kappa.to_string(), r.f_mid.to_string(), r.f_width.to_string()])?;
            }
            w.flush()?;
        }
        Cmd::Verify { cert } => {
            let c = ProofCertificate::from_json(&fs::read_to_string(cert)?)?;
            verify_certificate(&c)?;
            eprintln!("certificate consistent: {:?}", c.verdict);
        }
        Cmd::Oracle { cmd } => match cmd {
            OracleCmd::Fd { problem, s, t, grid, k, out } => {
                let pot = match problem {
                    Problem::Two => Potential1d::Problem2 { s, t: t.ok_or("--t is required for problem 2")? },
                    Problem::Three => Potential1d::Problem3 { s },
                };
                let r = fd_eigs_1d(&pot, None, grid, k)?;
                if r.truncation_warning {
                    eprintln!("warning: eigenfunction mass near the box ends exceeds the limit");
                }
                write_json(&out, &r)?;
            }
            OracleCmd::Fem { s, t, level, k, out } => {
                let r = fem_triangle_eigs(s, t, level, k)?;
                if r.ill_conditioned {
                    eprintln!("warning: very flat triangle, FEM results are unreliable");
                }
                write_json(&out, &r)?;
            }
            OracleCmd::Check { cert, s, t, level, out } => {
                let c = ProofCertificate::from_json(&fs::read_to_string(cert)?)?;
                let r = cross_check_sandwich(s, t, &c, level)?;
                write_json(&out, &r)?;
            }
        },
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
