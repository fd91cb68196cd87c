//! `dng`: solve, predict, verify and play the do-not-generate game.

mod repl;

use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use dng_core::descriptor::GroupSpec;
use dng_core::play::SolvedGame;
use dng_core::solver::{optimal_move, CompressedGameState, MoveClass};
use dng_core::theory::{best_prediction, covering_class, covering_implication, Prediction};
use dng_core::verify::{verify_descriptors, write_report, Family, LatticeCache, ReportFormat, Sweep, VerifyOptions};
use dng_core::{ElementSet, Seat, SubgroupLattice, DEFAULT_ORDER_CAP};
use dng_service::Store;
use serde_json::json;

#[derive(Parser)]
#[command(name = "dng", version, about = "Three-player do-not-generate on finite groups")]
struct Cli {
    /// Refuse groups with more elements than this.
    #[arg(long, global = true, default_value_t = DEFAULT_ORDER_CAP)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a group exactly and print the outcome.
    Solve {
        spec: String,
        /// Include the solved state table.
        #[arg(long)]
        table: bool,
        #[arg(long)]
        json: bool,
    },
    /// Print the closed-form prediction for a group, if one applies.
    Predict {
        spec: String,
        #[arg(long)]
        json: bool,
    },
    /// Compare predictions with solved outcomes over a family of groups.
    Verify {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        min: Option<usize>,
        #[arg(long, default_value_t = 30)]
        max: usize,
        /// Descriptor for `--family list`; repeatable.
        #[arg(long = "group")]
        groups: Vec<String>,
        /// Write the per-group report here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
        format: FormatArg,
        /// Leave the ms column empty so reports are reproducible byte for byte.
        #[arg(long)]
        no_timing: bool,
        /// Persist subgroup lattices here between runs.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
        /// Cross-check groups of order at most 16 with the brute-force solver.
        #[arg(long)]
        oracle: bool,
        /// Print the summary as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Classify how the order-divisible-by-3 maximal subgroups cover the group.
    Covering {
        spec: String,
        #[arg(long)]
        json: bool,
    },
    /// Play in the terminal against the engine.
    Play {
        spec: String,
        /// Seats entered from the keyboard, e.g. `1,3`. Empty for engine self-play.
        #[arg(long, default_value = "1")]
        human_seats: String,
    },
    /// Run the HTTP game service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Load sessions from this file at startup and save them on shutdown.
        #[arg(long)]
        snapshot: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Cyclic,
    Dihedral,
    Abelian,
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

/// Exit status 2: bad input or any other failure that is not a disagreement.
struct Failure(String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn print_json(v: &serde_json::Value) -> CmdResult {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(ExitCode::SUCCESS)
}

fn describe_class(lat: &SubgroupLattice, c: MoveClass) -> String {
    match c {
        MoveClass::Stay => "stay".into(),
        MoveClass::Escalate(t) => format!("escalate to a subgroup of order {}", lat.get(t).size()),
        MoveClass::Generates => "generates".into(),
    }
}

fn cmd_solve(spec: &str, cap: usize, table: bool, as_json: bool) -> CmdResult {
    let game = SolvedGame::from_descriptor(spec, cap)?;
    let SolvedGame {
        group,
        lattice,
        table: solved,
    } = &game;
    let outcome = solved.outcome();
    let start = CompressedGameState::start();
    let best = solved.get(start).expect("start state is solved").best;
    let first = optimal_move(group, lattice, solved, start, &ElementSet::new(group.order()))?;
    if as_json {
        let mut v = json!({
            "descriptor": group.descriptor(),
            "order": group.order(),
            "subgroups": lattice.len(),
            "winner": outcome.winner(),
            "runnerUp": outcome.runner_up(),
            "loser": outcome.loser,
            "firstMove": { "element": first, "class": best },
            "totalMoves": solved.total_moves(),
        });
        if table {
            v["table"] = solved.to_json(lattice);
        }
        return print_json(&v);
    }
    println!(
        "group: {} (order {}, {} subgroups)",
        group.descriptor(),
        group.order(),
        lattice.len()
    );
    println!("winner: {}", outcome.winner());
    println!("runner-up: {}", outcome.runner_up());
    println!("loser: {}", outcome.loser);
    println!("optimal first move: {first} ({})", describe_class(lattice, best));
    println!("game length: {} moves", solved.total_moves());
    if table {
        println!("{}", serde_json::to_string_pretty(&solved.to_json(lattice))?);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_predict(spec: &str, cap: usize, as_json: bool) -> CmdResult {
    let parsed = GroupSpec::parse(spec)?;
    let g = parsed.build(cap)?;
    let lat = SubgroupLattice::build(&g);
    let rec = best_prediction(&g, &lat, parsed.dihedral_n())?;
    if as_json {
        return print_json(&json!({ "descriptor": g.descriptor(), "prediction": rec }));
    }
    match rec {
        Some(r) => {
            println!("{}", r.headline());
            println!("condition: {}", r.condition);
            println!("evidence: {}", serde_json::to_string(&r.evidence)?);
        }
        None => println!("no closed-form prediction; use solve"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_covering(spec: &str, cap: usize, as_json: bool) -> CmdResult {
    let g = GroupSpec::parse(spec)?.build(cap)?;
    let lat = SubgroupLattice::build(&g);
    let class = covering_class(&g, &lat)?;
    let implication = covering_implication(class);
    if as_json {
        return print_json(&json!({ "descriptor": g.descriptor(), "class": class, "implies": implication }));
    }
    match implication {
        Prediction::Winner(s) => println!("{class}: {s} wins"),
        Prediction::NotP1 => println!("{class}: P1 cannot win"),
        Prediction::NotP3 => println!("{class}: P3 cannot win"),
    }
    Ok(ExitCode::SUCCESS)
}

fn print_summary(sweep: &Sweep) {
    let s = &sweep.summary;
    for row in sweep.rows.iter().filter(|r| r.is_failure()) {
        let predicted = row
            .prediction
            .as_ref()
            .map_or("-".to_string(), |p| p.predicted.to_string());
        println!(
            "DISAGREE {} predicted {predicted} solved {}",
            row.descriptor, row.solved
        );
    }
    for (d, e) in &sweep.errors {
        println!("ERROR {d}: {e}");
    }
    println!(
        "rows: {}  point predictions: {}  agree: {}  disagree: {}",
        s.rows, s.point_predictions, s.agreements, s.disagreements
    );
    println!(
        "constraint only: {}  no prediction: {}  oracle mismatches: {}  errors: {}",
        s.constraint_only, s.no_prediction, s.oracle_mismatches, s.errors
    );
    if s.theorem_gaps.is_empty() {
        println!("theorem gaps: none");
    } else {
        for (clause, n) in &s.theorem_gaps {
            println!("theorem gap: {clause} x{n}");
        }
    }
    println!("result: {}", if s.all_clear() { "AGREE" } else { "DISAGREE" });
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    family: FamilyArg,
    min: Option<usize>,
    max: usize,
    groups: Vec<String>,
    out: Option<PathBuf>,
    format: FormatArg,
    no_timing: bool,
    cache_dir: Option<PathBuf>,
    oracle: bool,
    as_json: bool,
    cap: usize,
) -> CmdResult {
    let family = match family {
        FamilyArg::Cyclic => Family::Cyclic {
            min: min.unwrap_or(2),
            max,
        },
        FamilyArg::Dihedral => Family::Dihedral {
            min: min.unwrap_or(3),
            max,
        },
        FamilyArg::Abelian => Family::Abelian { max },
        FamilyArg::List if groups.is_empty() => return Err(Failure("--family list needs at least one --group".into())),
        FamilyArg::List => Family::Explicit(groups),
    };
    let opts = VerifyOptions {
        order_cap: cap,
        timing: !no_timing,
        oracle,
        cache: cache_dir.map(|d| Arc::new(LatticeCache::with_dir(d))),
    };
    let sweep = verify_descriptors(&family.descriptors(), family.tag(), &opts);
    if let Some(path) = out {
        let format = match format {
            FormatArg::Csv => ReportFormat::Csv,
            FormatArg::Json => ReportFormat::Json,
        };
        write_report(&sweep.rows, format, &path)?;
    }
    if as_json {
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({ "summary": sweep.summary, "errors": sweep.errors }))?
        );
    } else {
        print_summary(&sweep);
    }
    if !sweep.errors.is_empty() {
        return Ok(ExitCode::from(2));
    }
    Ok(if sweep.summary.all_clear() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_play(spec: &str, cap: usize, human_seats: &str) -> CmdResult {
    let humans = human_seats
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .ok()
                .and_then(Seat::new)
                .ok_or_else(|| Failure(format!("no seat `{s}`; seats are 1, 2, 3")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let game = Arc::new(SolvedGame::from_descriptor(spec, cap)?);
    let stdin = io::stdin();
    let mut stdout = io::stdout();
    repl::run(game, &humans, stdin.lock(), &mut stdout)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_serve(host: &str, port: u16, snapshot: Option<PathBuf>, cap: usize) -> CmdResult {
    let runtime = tokio::runtime::Runtime::new()?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind((host, port))
            .await
            .map_err(|e| Failure(format!("cannot bind {host}:{port}: {e}")))?;
        let store = Arc::new(Store::new(cap));
        if let Some(path) = snapshot.as_ref().filter(|p| p.exists()) {
            let n = store
                .load_snapshot(path)
                .map_err(|e| Failure(format!("{}: {e}", path.display())))?;
            println!("restored {n} sessions from {}", path.display());
        }
        println!("dng game service listening on http://{}", listener.local_addr()?);
        io::stdout().flush()?;
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        dng_service::serve(listener, store.clone(), shutdown).await?;
        if let Some(path) = snapshot {
            store.save_snapshot(&path)?;
            println!("saved {} sessions to {}", store.len(), path.display());
        }
        Ok(ExitCode::SUCCESS)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cap = cli.cap;
    let result = match cli.command {
        Command::Solve { spec, table, json } => cmd_solve(&spec, cap, table, json),
        Command::Predict { spec, json } => cmd_predict(&spec, cap, json),
        Command::Verify {
            family,
            min,
            max,
            groups,
            out,
            format,
            no_timing,
            cache_dir,
            oracle,
            json,
        } => cmd_verify(
            family, min, max, groups, out, format, no_timing, cache_dir, oracle, json, cap,
        ),
        Command::Covering { spec, json } => cmd_covering(&spec, cap, json),
        Command::Play { spec, human_seats } => cmd_play(&spec, cap, &human_seats),
        Command::Serve { port, host, snapshot } => cmd_serve(&host, port, snapshot, cap),
    };
    match result {
        Ok(code) => code,
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
