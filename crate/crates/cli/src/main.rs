//! `fburnside`: build groups, print tables of marks and γ tables, check species
//! isomorphisms and rerun the order-p²q counterexample.
//!
//! Exit codes: 0 success or valid, 1 negative verdict, 2 bad input.

mod report;
mod spec;

use std::env;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fibered_burnside::species::{search_species, thevenaz_witness, verify_species, SpeciesError, SEARCH_SCOPE_NOTE};
use fibered_burnside::{
    reproduce, AbelianFiber, BurnsideRing, ReproduceError, ReproduceParams, SearchOutcome, SpeciesWitness, Verdict,
};
use serde_json::json;

use crate::report::{Outcome, RunReport};
use crate::spec::{GroupSpec, LoadedGroup};

#[derive(Parser)]
#[command(name = "fburnside", version, about = "Fibered Burnside rings of finite groups")]
struct Cli {
    /// Worker threads (falls back to FB_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Output {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct VerifyMode {
    /// JSON file with `subgroup_map` and `char_maps`.
    #[arg(long)]
    witness: Option<PathBuf>,
    /// Search for a witness.
    #[arg(long)]
    auto: bool,
    /// Use the explicit witness between two `thevenaz:` groups.
    #[arg(long)]
    thevenaz_witness: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Table of marks over subgroup class representatives.
    Marks {
        /// cyclic:n | abelian:d1,d2,.. | dihedral:n | symmetric:n | thevenaz:p,q,a,b | cayley:file.json
        group: String,
        #[command(flatten)]
        output: Output,
    },
    /// Monomial basis and γ table.
    Gamma {
        group: String,
        /// Cyclic orders of the fiber A, e.g. `2,4`.
        #[arg(long, default_value = "1")]
        fiber: String,
        #[command(flatten)]
        output: Output,
    },
    /// Structure constants of the orbit basis.
    Structure {
        group: String,
        #[arg(long, default_value = "1")]
        fiber: String,
        #[command(flatten)]
        output: Output,
    },
    /// Check a species isomorphism B^A(G) -> B^A(H).
    Verify {
        g: String,
        h: String,
        #[arg(long, default_value = "1")]
        fiber: String,
        #[command(flatten)]
        mode: VerifyMode,
        /// Node budget for --auto.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Rebuild the p=11, q=5 counterexample end to end.
    Reproduce {
        #[arg(long, default_value_t = 11)]
        p: u64,
        #[arg(long, default_value_t = 5)]
        q: u64,
        /// First pair `a,b`; with neither pair given and (p,q) != (11,5) the
        /// pairs are picked from the first two isomorphism classes.
        #[arg(long, value_parser = parse_pair)]
        pair_g: Option<(u64, u64)>,
        #[arg(long, value_parser = parse_pair)]
        pair_h: Option<(u64, u64)>,
        #[arg(long, default_value = "5")]
        fiber: String,
        #[command(flatten)]
        output: Output,
    },
}

fn parse_pair(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected a,b, got {s:?}"))?;
    let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("{t:?}: {e}"));
    Ok((num(a)?, num(b)?))
}

fn configure_threads(flag: Option<usize>) -> Result<()> {
    let n = match flag {
        Some(n) => Some(n),
        None => match env::var("FB_THREADS") {
            Ok(v) => Some(v.trim().parse::<usize>().with_context(|| format!("FB_THREADS={v:?}"))?),
            Err(_) => None,
        },
    };
    #[cfg(feature = "parallel")]
    if let Some(n) = n {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring thread pool")?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn load(text: &str) -> Result<LoadedGroup> {
    GroupSpec::parse(text)?.load(text)
}

fn fiber(text: &str) -> Result<AbelianFiber> {
    text.parse().with_context(|| format!("fiber {text:?}"))
}

fn json_only(output: &Output, command: &str) -> Result<()> {
    if output.format == Format::Csv {
        bail!("{command} only supports --format json");
    }
    Ok(())
}

fn matrix_csv(m: &[Vec<u64>]) -> String {
    m.iter().map(|row| row.iter().map(u64::to_string).collect::<Vec<_>>().join(",") + "\n").collect()
}

fn run(cli: Cli) -> Result<Outcome> {
    configure_threads(cli.threads)?;
    let mut report = RunReport::from_env();
    match cli.command {
        Command::Marks { group, output } => {
            let g = load(&group)?;
            report.input("group", &g.identity);
            let table = fibered_burnside::SubgroupClassTable::new(&g.group);
            if output.format == Format::Csv {
                return report.emit_raw(&matrix_csv(table.marks()), output.out.as_deref());
            }
            let named = match &g.thevenaz {
                Some(t) => {
                    let map = t.canonical_class_map(&table)?;
                    let names = t.canonical_names();
                    Some(
                        map.iter()
                            .zip(names)
                            .map(|(&c, n)| json!({"name": n.to_string(), "class": c}))
                            .collect::<Vec<_>>(),
                    )
                }
                None => None,
            };
            let export = table.export();
            let orders: Vec<usize> = table.reps().iter().map(|s| s.order()).collect();
            report.payload = json!({
                "group_order": g.group.order(),
                "subgroups": table.subgroups().len(),
                "orders": orders,
                "reps": export.reps,
                "marks": export.marks,
                "named": named,
            });
            report.emit(Outcome::Success, output.out.as_deref())
        }
        Command::Gamma { group, fiber: a, output } => {
            let g = load(&group)?;
            let a = fiber(&a)?;
            report.input("group", &g.identity);
            report.input("fiber", a.to_string().as_bytes());
            let ring = BurnsideRing::new(g.group, a);
            let table = ring.gamma_table();
            if output.format == Format::Csv {
                return report.emit_raw(&table.to_csv(), output.out.as_deref());
            }
            report.payload = json!({
                "fiber": ring.fiber().factors(),
                "basis_size": ring.basis_len(),
                "basis": ring.export_basis(),
                "gamma": table.gamma,
                "determinant": table.determinant().to_string(),
            });
            report.emit(Outcome::Success, output.out.as_deref())
        }
        Command::Structure { group, fiber: a, output } => {
            json_only(&output, "structure")?;
            let g = load(&group)?;
            let a = fiber(&a)?;
            report.input("group", &g.identity);
            report.input("fiber", a.to_string().as_bytes());
            let ring = BurnsideRing::new(g.group, a);
            let identity = ring.identity().coeffs.iter().position(|&c| c == 1);
            report.payload = json!({
                "fiber": ring.fiber().factors(),
                "basis": ring.export_basis(),
                "identity": identity,
                "structure_constants": ring.export_structure_constants().structure_constants,
            });
            report.emit(Outcome::Success, output.out.as_deref())
        }
        Command::Verify { g, h, fiber: a, mode, budget, output } => {
            json_only(&output, "verify")?;
            let (lg, lh) = (load(&g)?, load(&h)?);
            let a = fiber(&a)?;
            report.input("g", &lg.identity);
            report.input("h", &lh.identity);
            report.input("fiber", a.to_string().as_bytes());
            let outcome = verify(&mut report, lg, lh, a, &mode, budget)?;
            report.emit(outcome, output.out.as_deref())
        }
        Command::Reproduce { p, q, pair_g, pair_h, fiber: a, output } => {
            json_only(&output, "reproduce")?;
            let a = fiber(&a)?;
            let pairs = match (pair_g, pair_h) {
                (Some(x), Some(y)) => Some((x, y)),
                (None, None) if (p, q) == (11, 5) => ReproduceParams::default().pairs,
                (None, None) => None,
                _ => bail!("give both --pair-g and --pair-h or neither"),
            };
            report.input("params", format!("p={p},q={q},pairs={pairs:?},fiber={a}").as_bytes());
            let params = ReproduceParams { p, q, pairs, fiber: a };
            let outcome = match reproduce(&params) {
                Ok(r) => {
                    report.payload = serde_json::to_value(&r)?;
                    Outcome::Success
                }
                Err(e @ (ReproduceError::Stage { .. } | ReproduceError::NoCounterexample { .. })) => {
                    let stage = match &e {
                        ReproduceError::Stage { stage, .. } => *stage,
                        _ => "classification",
                    };
                    report.payload = json!({"failed_stage": stage, "message": e.to_string()});
                    Outcome::Negative
                }
                Err(e) => return Err(e.into()),
            };
            report.emit(outcome, output.out.as_deref())
        }
    }
}

fn verify(
    report: &mut RunReport,
    lg: LoadedGroup,
    lh: LoadedGroup,
    a: AbelianFiber,
    mode: &VerifyMode,
    budget: u64,
) -> Result<Outcome> {
    let (tg, th) = (lg.thevenaz, lh.thevenaz);
    let rg = BurnsideRing::new(lg.group, a.clone());
    let rh = BurnsideRing::new(lh.group, a);
    let sizes = json!([rg.basis_len(), rh.basis_len()]);

    let (mode_name, witness): (&str, SpeciesWitness) = if let Some(path) = &mode.witness {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        report.input("witness", &bytes);
        let w = serde_json::from_slice(&bytes).with_context(|| format!("parsing witness {}", path.display()))?;
        ("witness", w)
    } else if mode.auto {
        match search_species(&rg, &rh, budget) {
            Ok(SearchOutcome::Found { witness, nodes }) => {
                report.payload = json!({"search_nodes": nodes});
                ("auto", witness)
            }
            Ok(SearchOutcome::Exhausted { nodes }) => {
                report.payload = json!({
                    "mode": "auto",
                    "basis_sizes": sizes,
                    "search_nodes": nodes,
                    "result": "exhausted",
                    "note": SEARCH_SCOPE_NOTE,
                });
                return Ok(Outcome::Negative);
            }
            Err(e @ SpeciesError::SearchBudgetExceeded { .. }) => {
                report.payload = json!({"mode": "auto", "basis_sizes": sizes, "result": "budget_exceeded", "message": e.to_string()});
                return Ok(Outcome::Negative);
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        let (Some(tg), Some(th)) = (&tg, &th) else {
            bail!("--thevenaz-witness needs two thevenaz: groups");
        };
        ("thevenaz", thevenaz_witness(tg, &rg, th, &rh)?)
    };

    let mut payload = json!({
        "mode": mode_name,
        "basis_sizes": sizes,
        "witness": witness,
    });
    if let Some(nodes) = report.payload.get("search_nodes").cloned() {
        payload["search_nodes"] = nodes;
    }
    let outcome = match verify_species(&rg, &rh, &witness) {
        Ok(v) => {
            let valid = v.is_valid();
            payload["result"] = json!(if valid { "valid" } else { "invalid" });
            payload["verdict"] = serde_json::to_value(&v)?;
            if let Verdict::Valid { .. } = v {
                Outcome::Success
            } else {
                Outcome::Negative
            }
        }
        Err(e @ (SpeciesError::NotABijection(_) | SpeciesError::NotAGroupIso { .. })) => {
            payload["result"] = json!("invalid");
            payload["message"] = json!(e.to_string());
            Outcome::Negative
        }
        Err(e) => return Err(e.into()),
    };
    report.payload = payload;
    Ok(outcome)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(cli) {
        Ok(outcome) => {
            eprintln!("fburnside: done in {:.3}s", start.elapsed().as_secs_f64());
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
