//! Command-line interface over the library: invariants, point counts,
//! lattice verdicts, cusp tables, gate reports, and the full verification
//! manifest.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use cartan_curves::counting::{self, Variant};
use cartan_curves::cuspdiv::{self, CuspAutomorphism, CuspDivisor};
use cartan_curves::gates;
use cartan_curves::invariants;
use cartan_curves::lattices;

#[derive(Parser)]
#[command(
    name = "cartan-curves",
    about = "Exact computations on non-split Cartan modular curves of prime level",
    version
)]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Largest admissible level prime.
    #[arg(long, global = true, default_value_t = 97)]
    pmax: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Ns,
    #[value(name = "ns+", alias = "ns-plus")]
    NsPlus,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Variant {
        match v {
            VariantArg::Ns => Variant::Ns,
            VariantArg::NsPlus => Variant::NsPlus,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Moduli,
    Trace,
}

#[derive(Subcommand)]
enum Command {
    /// Genus, elliptic points, cusp counts, class-number split.
    Invariants {
        #[arg(short)]
        p: u64,
    },
    /// Point count of X_ns(p) or X_ns+(p) over F_{q^2}.
    Count {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        q: u64,
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Newform record file for the trace method (defaults to the bundled
        /// fixtures when the level is 121 or 169).
        #[arg(long)]
        newforms: Option<std::path::PathBuf>,
    },
    /// Fixed lattice classes and the normalizer verdict.
    Lattices {
        #[arg(short)]
        p: u64,
    },
    /// Hecke action tables and commutator checks on cuspidal divisors.
    Cuspdiv {
        #[arg(short)]
        p: u64,
        #[arg(short)]
        l: u64,
    },
    /// Theorem gates at one level.
    Gates {
        #[arg(short)]
        p: u64,
    },
    /// Run every bundled check and emit the pass/fail manifest.
    VerifyPaper {
        /// Write the manifest to a file as well as stdout.
        #[arg(long)]
        report: Option<std::path::PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn check_pmax(p: u64, pmax: u64) -> cartan_curves::Result<()> {
    if p > pmax {
        return Err(cartan_curves::Error::PrimeOutOfRange { p, min: 5, max: pmax });
    }
    Ok(())
}

fn run(cli: Cli) -> cartan_curves::Result<ExitCode> {
    match cli.command {
        Command::Invariants { p } => {
            check_pmax(p, cli.pmax)?;
            let inv = invariants::curve_invariants(p)?;
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&inv).unwrap());
            } else {
                print!("{inv}");
            }
        }
        Command::Count { p, q, variant, method, newforms } => {
            check_pmax(p, cli.pmax)?;
            let variant: Variant = variant.into();
            match method {
                MethodArg::Moduli => {
                    let report = counting::count_points_moduli(p, q, variant)?;
                    if cli.json {
                        println!("{}", serde_json::to_string_pretty(&report).unwrap());
                    } else {
                        print!("{report}");
                    }
                }
                MethodArg::Trace => {
                    let level = p * p;
                    let records = match &newforms {
                        Some(path) => counting::load_newform_records(path)?,
                        None => counting::bundled_records(level).ok_or_else(|| {
                            cartan_curves::Error::Domain(format!(
                                "no bundled newform records for level {level}; pass --newforms"
                            ))
                        })?,
                    };
                    for r in &records {
                        if r.level != level {
                            return Err(cartan_curves::Error::Domain(format!(
                                "record level {} does not match required level {level}",
                                r.level
                            )));
                        }
                    }
                    let expected_dim = match variant {
                        Variant::Ns => invariants::genus_ns(p)?,
                        Variant::NsPlus => invariants::genus_ns_plus(p)?,
                    };
                    counting::validate_cover(&records, expected_dim)?;
                    let total = counting::count_points_trace(&records, q, 2)?;
                    let report = counting::PointCountReport {
                        p,
                        q,
                        r: 2,
                        variant,
                        method: counting::Method::Trace,
                        noncuspidal: total
                            - counting::rational_cusp_count(p, q * q, variant)?,
                        rational_cusps: counting::rational_cusp_count(p, q * q, variant)?,
                        total,
                        per_j: vec![],
                        supersingular_subtotal: None,
                    };
                    if cli.json {
                        println!("{}", serde_json::to_string_pretty(&report).unwrap());
                    } else {
                        print!("{report}");
                    }
                }
            }
        }
        Command::Lattices { p } => {
            check_pmax(p, cli.pmax)?;
            let verdict = lattices::normalizer_verdict(p)?;
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&verdict).unwrap());
            } else {
                let all = lattices::gamma_p_fixed_lattices(p)?;
                println!("level-{p} congruence-fixed classes ({} entries):", all.len());
                for lat in &all {
                    println!("  {lat}");
                }
                print!("{verdict}");
            }
        }
        Command::Cuspdiv { p, l } => {
            check_pmax(p, cli.pmax)?;
            if cli.json {
                #[derive(serde::Serialize)]
                struct CuspTable {
                    p: u64,
                    l: u64,
                    hecke_action: Vec<(u64, CuspDivisor)>,
                    commutators_vanish: bool,
                    shape_check: bool,
                }
                let mut action = Vec::new();
                for t in 1..p {
                    action.push((t, cuspdiv::hecke_tl(l, &CuspDivisor::cusp(p, t))?));
                }
                let mut vanish = true;
                for c in 1..p {
                    for c2 in 1..p {
                        if c == c2 {
                            continue;
                        }
                        for u in [CuspAutomorphism::Identity, CuspAutomorphism::W] {
                            vanish &= cuspdiv::d_l(
                                u,
                                l,
                                &CuspDivisor::cusp(p, c),
                                &CuspDivisor::cusp(p, c2),
                            )?
                            .is_zero();
                        }
                    }
                }
                let table = CuspTable {
                    p,
                    l,
                    hecke_action: action,
                    commutators_vanish: vanish,
                    shape_check: cuspdiv::eichler_shimura_shape_check(l, p)?,
                };
                println!("{}", serde_json::to_string_pretty(&table).unwrap());
            } else {
                println!("Hecke action T_{l} on the cusps of X_ns({p}):");
                for t in 1..p {
                    let td = cuspdiv::hecke_tl(l, &CuspDivisor::cusp(p, t))?;
                    println!("  T_{l} [{t}] = {td}");
                }
                println!(
                    "operator identity T_l = sigma_l + l sigma_l^-1: {}",
                    cuspdiv::eichler_shimura_shape_check(l, p)?
                );
                let mut vanish = true;
                for c in 1..p {
                    for c2 in 1..p {
                        if c == c2 {
                            continue;
                        }
                        for u in [CuspAutomorphism::Identity, CuspAutomorphism::W] {
                            vanish &= cuspdiv::d_l(
                                u,
                                l,
                                &CuspDivisor::cusp(p, c),
                                &CuspDivisor::cusp(p, c2),
                            )?
                            .is_zero();
                        }
                    }
                }
                println!("commutator divisors (u T_l - T_l u)(C - C') all vanish: {vanish}");
                if p >= 11 && l <= 7 {
                    println!("disjoint-support choices:");
                    for c in 1..p {
                        let c2 = cuspdiv::disjoint_support_choice(l, c, p)?;
                        println!("  C = {c}: least disjoint C' = {c2}");
                    }
                }
            }
        }
        Command::Gates { p } => {
            check_pmax(p, cli.pmax)?;
            let report = gates::gate_report(p)?;
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report).unwrap());
            } else {
                print!("{report}");
            }
        }
        Command::VerifyPaper { report } => {
            let manifest = gates::verification_manifest()?;
            let rendered = if cli.json {
                serde_json::to_string_pretty(&manifest).unwrap()
            } else {
                manifest.to_string()
            };
            println!("{rendered}");
            if let Some(path) = report {
                std::fs::write(&path, &rendered)?;
            }
            if manifest.failed > 0 {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
