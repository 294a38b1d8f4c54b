//! Command-line surface.
//!
//! Subcommands: `forms` (normal forms with witnesses), `solve` (slack
//! pipelines with certificates), `oracle` (box scans as CSV), `gen`
//! (the tight diagonal family), `bound` (discrepancy envelopes).
//!
//! Exit codes are a stable contract: 0 verified-feasible, 2
//! certified-negative (no slack point / infeasible), 1 operational error.

use crate::basefind::e_surrogate;
use crate::delta::rat_delta_j;
use crate::discrepancy::disc_bound;
use crate::frobenius::{
    self, gen_tight_instance, oracle_diagfrob_box, oracle_slackfrob_box, BaseMode, SlackOutcome,
    StandardOutcome,
};
use crate::normal_form::{hnf, snf};
use crate::report;
use crate::system::BaseSelection;
use crate::textio::{self, SystemFile};
use crate::Config;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::fs;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NEGATIVE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "frobcert",
    about = "Exact feasibility certificates for integer linear systems",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub caps: CapArgs,
}

/// Caps and the seed, shared by every subcommand.
#[derive(Debug, Args)]
pub struct CapArgs {
    /// Seed for all randomized search (certificates are reproducible).
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
    /// Exhaustive rounding cap (fractional support size).
    #[arg(long, default_value_t = 24, global = true)]
    pub round_cap: usize,
    /// Random restarts for the rounding heuristic.
    #[arg(long, default_value_t = 10_000, global = true)]
    pub restarts: usize,
    /// Largest codimension admitted by the 2^k subset sweep.
    #[arg(long, default_value_t = 20, global = true)]
    pub sweep_cap: usize,
    /// Cap on enumerated minors.
    #[arg(long, default_value_t = 1_000_000, global = true)]
    pub minor_cap: u64,
    /// Cap on enumerated lattice points / scanned box cells.
    #[arg(long, default_value_t = 10_000_000, global = true)]
    pub enum_cap: u64,
}

impl CapArgs {
    pub fn to_config(&self) -> Config {
        Config {
            seed: self.seed,
            rounding_exhaustive_cap: self.round_cap,
            rounding_restarts: self.restarts,
            sweep_k_cap: self.sweep_cap,
            minor_cap: self.minor_cap,
            enum_cap: self.enum_cap,
            ..Config::default()
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Maxdet,
    Poly,
    ExpSweep,
}

impl From<ModeArg> for BaseMode {
    fn from(m: ModeArg) -> BaseMode {
        match m {
            ModeArg::Maxdet => BaseMode::Maxdet,
            ModeArg::Poly => BaseMode::Poly,
            ModeArg::ExpSweep => BaseMode::ExpSweep,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the Hermite or Smith normal form with unimodular witnesses.
    Forms {
        /// Matrix file (`rows cols` header then rows of integers).
        file: PathBuf,
        /// Hermite normal form (column style, lower triangular).
        #[arg(long, conflicts_with = "snf")]
        hnf: bool,
        /// Smith normal form.
        #[arg(long)]
        snf: bool,
    },
    /// Decide feasibility under the slack condition and emit a certificate.
    Solve {
        /// System file (`canonical` or `standard` header).
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Maxdet)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = FormatArg::Text)]
        format: FormatArg,
    },
    /// Scan right-hand sides in a box: exact slack vs integer feasibility.
    Oracle {
        /// System file; omit when generating the tight family inline.
        file: Option<PathBuf>,
        /// Generate the tight instance with this p instead of reading a file.
        #[arg(long)]
        gen_tight_p: Option<i64>,
        /// Dimension for the generated tight instance.
        #[arg(long, default_value_t = 1)]
        gen_tight_n: usize,
        /// Scan radius around the file's right-hand side (per coordinate).
        #[arg(long, default_value_t = 0)]
        box_radius: u32,
    },
    /// Emit a tight-family instance as a canonical system file.
    Gen {
        #[arg(long)]
        tight_p: i64,
        #[arg(long, default_value_t = 1)]
        tight_n: usize,
        /// Output path (stdout when omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Report subdeterminant statistics and discrepancy envelopes for the
    /// base the chosen mode would select.
    Bound {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Maxdet)]
        mode: ModeArg,
    },
}

pub fn run(cli: Cli) -> i32 {
    let config = cli.caps.to_config();
    match cli.command {
        Command::Forms { file, hnf, snf } => cmd_forms(&file, hnf, snf),
        Command::Solve { file, mode, format } => cmd_solve(&file, mode.into(), format, &config),
        Command::Oracle {
            file,
            gen_tight_p,
            gen_tight_n,
            box_radius,
        } => cmd_oracle(file.as_deref(), gen_tight_p, gen_tight_n, box_radius, &config),
        Command::Gen {
            tight_p,
            tight_n,
            output,
        } => cmd_gen(tight_p, tight_n, output.as_deref()),
        Command::Bound { file, mode } => cmd_bound(&file, mode.into(), &config),
    }
}

fn read_file(path: &std::path::Path) -> Result<String, i32> {
    fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        EXIT_ERROR
    })
}

fn cmd_forms(path: &std::path::Path, want_hnf: bool, want_snf: bool) -> i32 {
    let text = match read_file(path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let m = match textio::parse_matrix(&text) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    if want_snf && !want_hnf {
        let form = snf(&m);
        println!("S =");
        print!("{}", form.s);
        println!("P =");
        print!("{}", form.p);
        println!("Q =");
        print!("{}", form.q);
        println!(
            "reconstruction P*A*Q == S: {}",
            if form.verify() { "ok" } else { "FAILED" }
        );
        if !form.verify() {
            return EXIT_ERROR;
        }
    } else {
        match hnf(&m) {
            Ok(form) => {
                println!("H =");
                print!("{}", form.h);
                println!("Q =");
                print!("{}", form.q);
                println!(
                    "reconstruction (H|0)*Q == A: {}",
                    if form.verify() { "ok" } else { "FAILED" }
                );
                if !form.verify() {
                    return EXIT_ERROR;
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                return EXIT_ERROR;
            }
        }
    }
    EXIT_OK
}

fn cmd_solve(
    path: &std::path::Path,
    mode: BaseMode,
    format: FormatArg,
    config: &Config,
) -> i32 {
    let text = match read_file(path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let parsed = match textio::parse_system_with_cap(&text, config.minor_cap) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    match parsed {
        SystemFile::Canonical(sys) => {
            match frobenius::solve_canonical_with_slack(&sys, mode, config) {
                Ok(SlackOutcome::Certificate(cert)) => {
                    let record = report::canonical_record(&cert, &sys);
                    match format {
                        FormatArg::Json => println!("{}", report::to_json(&record)),
                        FormatArg::Text => {
                            println!("verified: {}", cert.verified);
                            println!("z = {}", join_ints(&cert.z));
                            println!("base rows = {:?}", cert.base.indices);
                            println!("delta = {}, |det A_B| = {}", cert.delta, cert.base.det_abs);
                            println!(
                                "threshold 'Delta - 1 + achieved' = {}, available slack = {}",
                                cert.threshold_t, cert.slack_input.min_slack
                            );
                        }
                    }
                    if cert.verified {
                        EXIT_OK
                    } else {
                        eprintln!("pipeline failed to verify the constructed point");
                        EXIT_ERROR
                    }
                }
                Ok(SlackOutcome::NoSlackPoint {
                    available,
                    required,
                    ..
                }) => {
                    println!(
                        "no slack point: available uniform slack {available} is below the required {required}"
                    );
                    EXIT_NEGATIVE
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_ERROR
                }
            }
        }
        SystemFile::Standard(sys) => {
            match frobenius::solve_standard_with_slack(&sys, mode, config) {
                Ok(StandardOutcome::Certificate(cert)) => {
                    let record = report::standard_record(&cert, &sys);
                    match format {
                        FormatArg::Json => println!("{}", report::to_json(&record)),
                        FormatArg::Text => {
                            println!("verified: {}", cert.verified);
                            println!("z = {}", join_ints(&cert.z));
                            if let Some(c) = &cert.canonical {
                                println!(
                                    "canonical base rows = {:?}, delta = {}",
                                    c.base.indices, c.delta
                                );
                                println!(
                                    "threshold = {}, available slack = {}",
                                    c.threshold_t, c.slack_input.min_slack
                                );
                            }
                        }
                    }
                    if cert.verified {
                        EXIT_OK
                    } else {
                        eprintln!("pipeline failed to verify the constructed point");
                        EXIT_ERROR
                    }
                }
                Ok(StandardOutcome::NoSlackPoint {
                    available,
                    required,
                }) => {
                    println!(
                        "no slack point: available uniform slack {available} is below the required {required}"
                    );
                    EXIT_NEGATIVE
                }
                Ok(StandardOutcome::Infeasible) => {
                    println!("infeasible: certified by the reduction");
                    EXIT_NEGATIVE
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    EXIT_ERROR
                }
            }
        }
    }
}

fn cmd_oracle(
    path: Option<&std::path::Path>,
    gen_p: Option<i64>,
    gen_n: usize,
    radius: u32,
    config: &Config,
) -> i32 {
    let (a, b, canonical) = match (path, gen_p) {
        (_, Some(p)) => {
            let sys = gen_tight_instance(p, gen_n);
            (sys.a.clone(), sys.b.clone(), true)
        }
        (Some(path), None) => {
            let text = match read_file(path) {
                Ok(t) => t,
                Err(code) => return code,
            };
            match textio::parse_system_with_cap(&text, config.minor_cap) {
                Ok(SystemFile::Canonical(sys)) => (sys.a.clone(), sys.b.clone(), true),
                Ok(SystemFile::Standard(sys)) => (sys.a.clone(), sys.b.clone(), false),
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_ERROR;
                }
            }
        }
        (None, None) => {
            eprintln!("error: provide a system file or --gen-tight-p");
            return EXIT_ERROR;
        }
    };
    let b_box: Vec<(BigInt, BigInt)> = b
        .iter()
        .map(|v| (v - BigInt::from(radius), v + BigInt::from(radius)))
        .collect();
    let result = if canonical {
        oracle_slackfrob_box(&a, &b_box, config)
    } else {
        oracle_diagfrob_box(&a, &b_box, config)
    };
    match result {
        Ok(report) => {
            print!("{}", report::oracle_csv(&report));
            EXIT_OK
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn cmd_gen(p: i64, n: usize, output: Option<&std::path::Path>) -> i32 {
    if p < 2 || n < 1 {
        eprintln!("error: the family needs p >= 2 and n >= 1");
        return EXIT_ERROR;
    }
    let sys = gen_tight_instance(p, n);
    let text = textio::format_canonical(&sys.a, &sys.b);
    match output {
        Some(path) => {
            if let Err(e) = fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_ERROR;
            }
        }
        None => print!("{text}"),
    }
    EXIT_OK
}

fn cmd_bound(path: &std::path::Path, mode: BaseMode, config: &Config) -> i32 {
    let text = match read_file(path) {
        Ok(t) => t,
        Err(code) => return code,
    };
    let parsed = match textio::parse_system_with_cap(&text, config.minor_cap) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    let (base, stats_delta, name): (BaseSelection, BigInt, &str) = match &parsed {
        SystemFile::Canonical(sys) => {
            match frobenius::choose_canonical_base(sys, mode, config) {
                Ok(b) => (b, sys.delta().clone(), "canonical"),
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_ERROR;
                }
            }
        }
        SystemFile::Standard(sys) => {
            match crate::basefind::maxdet_subset(&sys.a.to_rational(), sys.codim(), config) {
                Ok((cols, _)) => match BaseSelection::standard(&sys.a, cols) {
                    Ok(b) => (b, sys.delta().clone(), "standard"),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return EXIT_ERROR;
                    }
                },
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_ERROR;
                }
            }
        }
    };
    println!("form: {name}");
    println!("delta = {stats_delta}");
    println!("base = {:?}, |det A_B| = {}", base.indices, base.det_abs);
    println!("e-surrogate c = {}", e_surrogate());
    match &base.m {
        None => println!("no nonbase part: M is empty, envelope 0"),
        Some(m) => {
            let order = m.rows().min(m.cols());
            match rat_delta_j(m, order, config.minor_cap) {
                Ok(deltas) => {
                    for (i, d) in deltas.iter().enumerate() {
                        println!("Delta_{}(M) = {}", i + 1, d);
                    }
                    let bound = disc_bound(m, &deltas);
                    println!(
                        "detlb(M) = ({}, {})",
                        bound.detlb_pair.0, bound.detlb_pair.1
                    );
                    println!("bound form = {}", bound.bound_form.as_str());
                    println!("numeric envelope = {}", bound.numeric_envelope);
                    let threshold = BigRational::from_integer(stats_delta - BigInt::from(1))
                        + bound.numeric_envelope.clone();
                    println!("slack threshold envelope 'Delta - 1 + envelope' = {threshold}");
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    return EXIT_ERROR;
                }
            }
        }
    }
    EXIT_OK
}

fn join_ints(v: &[BigInt]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}
