use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;

use qsearch::grover::{optimal_queries, run_grover};
use qsearch::lab::{
    self, config::int_list, grover_table, parse_config, reproduce_fig3, reproduce_fig4, sweep, table, CosDelta,
    FigureOptions, Mode, SearchRecord, Status, DEFAULT_MAX_N,
};
use qsearch::lattice::make_lattice;
use qsearch::spatial::{default_cos_delta, lower_bound_check, run_search, SearchConfig};
use qsearch::walk::{BlockHamiltonian, TuneOptions};
use qsearch::Error;

#[derive(Parser)]
#[command(name = "qsearch", version, about = "Grover and lattice spatial-search laboratory")]
struct Cli {
    /// Largest database size to simulate (default 2^22, or QSEARCH_MAX_N).
    #[arg(long, global = true)]
    max_n: Option<usize>,

    /// Worker threads.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Unstructured Grover search.
    Grover {
        #[arg(long)]
        n: usize,
        /// Marked indices, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        marked: Vec<usize>,
        /// Iterations to run; defaults to the optimum.
        #[arg(long)]
        queries: Option<usize>,
        /// Print the success probability after every iteration.
        #[arg(long)]
        trace: bool,
    },
    /// Walk-based search on a periodic L^d lattice.
    Spatial {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 3)]
        t1: usize,
        #[command(flatten)]
        walk: WalkArgs,
    },
    /// Ancilla-regulated search, d = 2 unless overridden.
    Tulsi {
        #[arg(long)]
        l: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 3)]
        t1: usize,
        /// Mixing parameter; `auto` is 1/sqrt(log2 N).
        #[arg(long, conflicts_with = "sweep_delta")]
        cos_delta: Option<CosDelta>,
        /// Several mixing parameters, comma separated.
        #[arg(long, value_delimiter = ',')]
        sweep_delta: Vec<CosDelta>,
        #[command(flatten)]
        walk: WalkArgs,
    },
    /// Run a sweep described by a key = value file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Overrides `output` in the file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Effective queries against dimension with an a + b/d fit.
    Fig3 {
        #[arg(long, default_value = "4")]
        ls: String,
        #[arg(long, default_value = "3..9")]
        ds: String,
        #[command(flatten)]
        fig: FigArgs,
    },
    /// Regulated d = 2 scaling with an a + b/L fit.
    Fig4 {
        #[arg(long, default_value = "16,32,64,128")]
        ls: String,
        #[arg(long, value_delimiter = ',', default_value = "auto")]
        cos_delta: Vec<CosDelta>,
        #[command(flatten)]
        fig: FigArgs,
    },
    /// Classical and quantum query counts.
    Table {
        #[arg(long, value_delimiter = ',', required = true)]
        ns: Vec<usize>,
        /// CSV instead of aligned text.
        #[arg(long)]
        csv: bool,
    },
}

#[derive(Args)]
struct WalkArgs {
    /// Fixed step parameter; tuned when absent.
    #[arg(long, conflicts_with = "tune")]
    tau: Option<f64>,
    /// Tune tau (the default when no --tau is given).
    #[arg(long)]
    tune: bool,
    #[arg(long)]
    t2_max: Option<usize>,
    #[arg(long, default_value = "staggered")]
    kind: BlockHamiltonian,
    #[arg(long, default_value_t = 64)]
    grid: usize,
    /// Print the full probability curve instead of the summary row.
    #[arg(long)]
    curve: bool,
}

#[derive(Args)]
struct FigArgs {
    #[arg(long, default_value_t = 3)]
    t1: usize,
    #[arg(long)]
    t2_max: Option<usize>,
    #[arg(long, default_value = "staggered")]
    kind: BlockHamiltonian,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        e if e.is_consistency_failure() => 2,
        Error::InfeasibleSize { .. } => 3,
        _ => 1,
    }
}

fn max_n(cli: &Cli) -> Result<usize, Error> {
    if let Some(n) = cli.max_n {
        return Ok(n);
    }
    match std::env::var("QSEARCH_MAX_N") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("QSEARCH_MAX_N='{v}' is not an integer"))),
        Err(_) => Ok(DEFAULT_MAX_N),
    }
}

fn check_cap(size: usize, cap: usize) -> Result<(), Error> {
    if size > cap {
        return Err(Error::InfeasibleSize { size, cap });
    }
    Ok(())
}

fn search_config(d: usize, l: usize, t1: usize, walk: &WalkArgs, cap: usize) -> Result<SearchConfig, Error> {
    let lattice = make_lattice(d, l)?;
    check_cap(lattice.size(), cap)?;
    let mut cfg = SearchConfig::new(lattice, t1).with_kind(walk.kind);
    cfg.tune = TuneOptions {
        grid: walk.grid,
        kind: walk.kind,
        ..TuneOptions::default()
    };
    if let Some(tau) = walk.tau {
        cfg = cfg.with_tau(tau);
    }
    if let Some(m) = walk.t2_max {
        cfg = cfg.with_budget(m);
    }
    Ok(cfg)
}

/// Runs one lattice search and renders it as a record.
fn search_record(cfg: &SearchConfig, mode: Mode, cos_delta: Option<f64>, curve: bool) -> Result<SearchRecord, Error> {
    let lat = &cfg.lattice;
    let r = run_search(cfg)?;
    let report = lower_bound_check(lat, &r)?;
    info!(
        "d={} L={} tau={:.6} t2*={} P_max={:.6} steps/(dL)={:.4} eff/sqrt(N)={:.4} reaches antipode: {}",
        lat.dim(),
        lat.side(),
        r.tau,
        r.t2_star,
        r.p_max,
        report.light_cone_ratio,
        report.query_ratio,
        report.reaches_antipode
    );
    if curve {
        println!("t2,p_marked");
        for (t, p) in r.p_curve.iter().enumerate() {
            println!("{t},{}", lab::record::fmt_g(*p));
        }
    }
    let mut rec = SearchRecord::pending(mode, Some(lat.dim()), Some(lat.side()), lat.size(), Some(cfg.t1), cos_delta);
    rec.tau = Some(r.tau);
    rec.t2_star = Some(r.t2_star);
    rec.p_max = Some(r.p_max);
    rec.effective_queries = Some(r.effective_queries);
    rec.walk_steps_total = Some(r.walk_steps_total);
    if r.budget_limited {
        rec.status = Status::BudgetLimited;
    }
    Ok(rec)
}

fn fig_options(fig: &FigArgs, cap: usize, jobs: usize) -> FigureOptions {
    FigureOptions {
        t1: fig.t1,
        kind: fig.kind,
        t2_max: fig.t2_max,
        max_n: cap,
        jobs,
        output: fig.out.clone(),
        ..FigureOptions::default()
    }
}

fn print_records(records: &[SearchRecord], out: Option<&PathBuf>) -> Result<(), Error> {
    if out.is_none() {
        lab::sweep::emit(records, None)?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<u8, Error> {
    let cap = max_n(cli)?;
    match &cli.command {
        Command::Grover {
            n,
            marked,
            queries,
            trace,
        } => {
            check_cap(*n, cap)?;
            let (q_opt, _) = optimal_queries(*n, marked.len().max(1))?;
            let q = queries.unwrap_or(q_opt);
            let run = run_grover(*n, marked, q)?;
            println!("N,M,Q,success");
            let last = run.trace.last().map(|t| t.1).unwrap_or(0.0);
            println!("{},{},{},{}", n, run.marked.len(), run.q_performed, lab::record::fmt_g(last));
            if *trace {
                println!("iteration,success");
                for (i, p) in &run.trace {
                    println!("{i},{}", lab::record::fmt_g(*p));
                }
            }
        }
        Command::Spatial { d, l, t1, walk } => {
            let cfg = search_config(*d, *l, *t1, walk, cap)?;
            let rec = search_record(&cfg, Mode::Spatial, None, walk.curve)?;
            if !walk.curve {
                lab::sweep::emit(&[rec], None)?;
            }
        }
        Command::Tulsi {
            l,
            d,
            t1,
            cos_delta,
            sweep_delta,
            walk,
        } => {
            let base = search_config(*d, *l, *t1, walk, cap)?;
            let n = base.lattice.size();
            // Tune once, shared by every cos_delta.
            let base = match base.tau {
                Some(_) => base,
                None => {
                    let tau = base.walk()?.tau();
                    base.with_tau(tau)
                }
            };
            let deltas: Vec<CosDelta> = match (cos_delta, sweep_delta.is_empty()) {
                (Some(c), _) => vec![*c],
                (None, false) => sweep_delta.clone(),
                (None, true) => vec![CosDelta::Auto],
            };
            let mut rows = Vec::new();
            for c in deltas {
                let cd = c.resolve(n);
                let cfg = base.clone().with_tulsi(cd);
                rows.push(search_record(&cfg, Mode::Tulsi, Some(cd), walk.curve)?);
            }
            if !walk.curve {
                lab::sweep::emit(&rows, None)?;
            }
            info!("default cos_delta for N={n}: {:.6}", default_cos_delta(n));
        }
        Command::Sweep { config, out } => {
            let text = fs::read_to_string(config)?;
            let mut spec = parse_config(&text)?;
            if out.is_some() {
                spec.output = out.clone();
            }
            if cli.max_n.is_some() || std::env::var("QSEARCH_MAX_N").is_ok() {
                spec.max_n = cap;
            }
            if cli.jobs > 1 {
                spec.jobs = cli.jobs;
            }
            let rows = sweep(&spec)?;
            print_records(&rows, spec.output.as_ref())?;
            if rows.iter().any(|r| matches!(r.status, Status::Inconsistent(_))) {
                return Ok(2);
            }
        }
        Command::Fig3 { ls, ds, fig } => {
            let (ls, ds) = (int_list(ls)?, int_list(ds)?);
            let rep = reproduce_fig3(&ls, &ds, &fig_options(fig, cap, cli.jobs))?;
            print_records(&rep.records, fig.out.as_ref())?;
            for (d, l, y) in &rep.points {
                eprintln!("d={d} L={l} eff/sqrt(N)={y:.6}");
            }
            for (d, l) in &rep.skipped {
                eprintln!("skipped d={d} L={l}");
            }
            match &rep.fit {
                Ok(f) => eprintln!(
                    "fit eff/sqrt(N) = a + b/d: a={:.6} b={:.6} rms={:.3e} points={} (a - pi/4 = {:+.6})",
                    f.a,
                    f.b,
                    f.residual_rms,
                    f.points_used,
                    rep.prefactor_gap().unwrap_or(f64::NAN)
                ),
                Err(e) => eprintln!("fit unavailable: {e}"),
            }
            if rep.records.iter().any(|r| matches!(r.status, Status::Inconsistent(_))) {
                return Ok(2);
            }
        }
        Command::Fig4 { ls, cos_delta, fig } => {
            let ls = int_list(ls)?;
            let rep = reproduce_fig4(&ls, cos_delta, &fig_options(fig, cap, cli.jobs))?;
            print_records(&rep.records, fig.out.as_ref())?;
            for col in rep.columns.iter().chain(std::iter::once(&rep.control)) {
                let label = match col.cos_delta {
                    Some(CosDelta::Auto) => "cos_delta=auto".to_string(),
                    Some(CosDelta::Value(v)) => format!("cos_delta={v}"),
                    None => "unregulated".to_string(),
                };
                for (l, _, y, p) in &col.points {
                    eprintln!("{label} L={l} eff/sqrt(N log2 N)={y:.6} p_max={p:.6}");
                }
                match &col.fit {
                    Ok(f) => eprintln!("{label}: fit a={:.6} b={:.6} rms={:.3e}", f.a, f.b, f.residual_rms),
                    Err(e) => eprintln!("{label}: fit unavailable: {e}"),
                }
            }
            if rep.records.iter().any(|r| matches!(r.status, Status::Inconsistent(_))) {
                return Ok(2);
            }
        }
        Command::Table { ns, csv } => {
            let rows = grover_table(ns)?;
            if *csv {
                print!("{}", table::render_csv(&rows));
            } else {
                print!("{}", table::render_text(&rows));
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs.max(1)).build_global() {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
