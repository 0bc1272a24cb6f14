use clap::{Parser, Subcommand};
use qknot::{
    census_counts, coefficient_cloud, color_values, compute, load_knots, report_coeffs,
    report_pairs, report_roots, report_timing, report_unique, Cache, Engine, Inv, Store, Table,
};
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

#[derive(Parser)]
#[command(
    name = "qknot",
    about = "Knot invariant pipeline: compute, cache, report"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a knot list and copy it into the store.
    Ingest {
        /// line-oriented `name;PD[...]` list
        #[arg(long)]
        knots: PathBuf,
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        max_crossings: Option<usize>,
    },
    /// Compute missing invariant values and append them to the store.
    Compute {
        #[arg(long)]
        store: PathBuf,
        /// comma-separated list from A2,A,B1,J,K,KT1 (default: all)
        #[arg(long)]
        invariant: Option<String>,
        /// rmatrix | skein | fox | cube (default: per invariant)
        #[arg(long)]
        engine: Option<String>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        max_crossings: Option<usize>,
        /// per-knot wall-clock budget; over-budget knots record TIMEOUT
        #[arg(long)]
        timeout_secs: Option<f64>,
    },
    /// Emit the report tables as CSV files.
    Report {
        #[arg(long)]
        store: PathBuf,
        /// unique | coeffs | pairs | roots | timing | all
        #[arg(long, default_value = "all")]
        kind: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        max_crossings: Option<usize>,
        /// sampled-pair trials (pairs report)
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// per-trial draw cap (pairs report)
        #[arg(long, default_value_t = 1_000_000)]
        cap: u64,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
    /// Export a root-density grid (PGM image + CSV) for one invariant.
    Roots {
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        invariant: String,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        /// `auto` or a half-width c for the symmetric bounds [-c, c]^2
        #[arg(long, default_value = "auto")]
        bounds: String,
        #[arg(long)]
        max_crossings: Option<usize>,
    },
    /// Build a ball-mapper graph over one invariant's coefficient vectors.
    Ballmapper {
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        invariant: String,
        #[arg(long)]
        epsilon: f64,
        /// color vertices by another invariant's coefficient abs-sum
        #[arg(long)]
        color_by: Option<String>,
        /// fixed coefficient-vector half-width (default: batch maximum)
        #[arg(long)]
        report_width: Option<i64>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        max_crossings: Option<usize>,
        /// extra comma-separated radii for a vertex/edge-count sweep
        #[arg(long)]
        sweep: Option<String>,
    },
}

fn parse_invariants(arg: Option<&str>) -> Result<Vec<Inv>, String> {
    match arg {
        None => Ok(Inv::ALL.to_vec()),
        Some(s) => s
            .split(',')
            .map(|t| Inv::parse(t.trim()).ok_or_else(|| format!("unknown invariant {t}")))
            .collect(),
    }
}

fn write_tables(out: &PathBuf, tables: &[Table]) -> std::io::Result<()> {
    fs::create_dir_all(out)?;
    for t in tables {
        fs::write(out.join(format!("{}.csv", t.name)), t.to_csv())?;
        println!("wrote {}", out.join(format!("{}.csv", t.name)).display());
    }
    Ok(())
}

fn run() -> Result<u8, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Ingest {
            knots,
            store,
            max_crossings,
        } => {
            let list = load_knots(&knots, max_crossings).map_err(|e| e.to_string())?;
            let store = Store::open(store).map_err(|e| e.to_string())?;
            let mut body = String::new();
            for d in &list {
                body.push_str(&format!("{};{}\n", d.id(), d.to_pd_string()));
            }
            fs::write(store.knots_path(), body).map_err(|e| e.to_string())?;
            println!("ingested {} knots", list.len());
            for (n, c, cum) in census_counts(&list) {
                println!("  n={n}: {c} (cumulative {cum})");
            }
            Ok(0)
        }
        Command::Compute {
            store,
            invariant,
            engine,
            workers,
            max_crossings,
            timeout_secs,
        } => {
            let store = Store::open(store).map_err(|e| e.to_string())?;
            let knots =
                load_knots(&store.knots_path(), max_crossings).map_err(|e| e.to_string())?;
            let invs = parse_invariants(invariant.as_deref())?;
            let timeout = timeout_secs.map(Duration::from_secs_f64);
            let mut failed = false;
            for inv in invs {
                let eng = match engine.as_deref() {
                    Some(e) => Engine::parse(e).ok_or_else(|| format!("unknown engine {e}"))?,
                    None => Engine::default_for(inv),
                };
                let s = compute(&store, &knots, inv, eng, workers, timeout)
                    .map_err(|e| e.to_string())?;
                println!(
                    "{inv}: computed {} skipped {} timeouts {} failures {}",
                    s.computed,
                    s.skipped,
                    s.timeouts,
                    s.failures.len()
                );
                for f in &s.failures {
                    eprintln!("  {f}");
                }
                failed |= !s.failures.is_empty();
            }
            Ok(u8::from(failed))
        }
        Command::Report {
            store,
            kind,
            out,
            max_crossings,
            trials,
            cap,
            seed,
        } => {
            let store = Store::open(store).map_err(|e| e.to_string())?;
            let knots =
                load_knots(&store.knots_path(), max_crossings).map_err(|e| e.to_string())?;
            let max_n = knots.iter().map(|d| d.n()).max().unwrap_or(0);
            let cache = Cache::load(&store, &knots, &Inv::ALL).map_err(|e| e.to_string())?;
            let mut tables = Vec::new();
            let e = |x: qknot::Error| x.to_string();
            if matches!(kind.as_str(), "unique" | "all") {
                tables.push(report_unique(&cache, max_n).map_err(e)?);
            }
            if matches!(kind.as_str(), "coeffs" | "all") {
                tables.extend(report_coeffs(&cache, max_n).map_err(e)?);
            }
            if matches!(kind.as_str(), "pairs" | "all") {
                tables.push(report_pairs(&cache, max_n, trials, cap, seed).map_err(e)?);
            }
            if matches!(kind.as_str(), "roots" | "all") {
                tables.extend(report_roots(&cache, max_n).map_err(e)?);
            }
            if matches!(kind.as_str(), "timing" | "all") {
                tables.push(report_timing(&store, &cache, &Inv::ALL).map_err(e)?);
            }
            if tables.is_empty() {
                return Err(format!("unknown report kind {kind}"));
            }
            write_tables(&out, &tables).map_err(|x| x.to_string())?;
            Ok(0)
        }
        Command::Roots {
            store,
            invariant,
            out,
            grid,
            bounds,
            max_crossings,
        } => {
            let inv =
                Inv::parse(&invariant).ok_or_else(|| format!("unknown invariant {invariant}"))?;
            if inv == Inv::K {
                return Err("root plots need a univariate invariant".into());
            }
            let store = Store::open(store).map_err(|e| e.to_string())?;
            let knots =
                load_knots(&store.knots_path(), max_crossings).map_err(|e| e.to_string())?;
            let max_n = knots.iter().map(|d| d.n()).max().unwrap_or(0);
            let cache = Cache::load(&store, &knots, &[inv]).map_err(|e| e.to_string())?;
            let solver = qknot::roots::Solver::default();
            let mut all = Vec::new();
            for s in cache.column(inv, max_n).map_err(|e| e.to_string())? {
                let p = qknot::laurent::LaurentPoly::from_canonical_str(s)
                    .map_err(|e| format!("bad stored polynomial: {e:?}"))?;
                if p.num_terms() <= 1 {
                    continue;
                }
                let rs = solver.roots(&p).map_err(|e| e.to_string())?;
                all.extend(rs.roots);
            }
            let bound = match bounds.as_str() {
                "auto" => qknot::roots::DensityGrid::auto_bound(&all),
                c => c.parse::<f64>().map_err(|_| format!("bad bounds {c}"))?,
            };
            let mut g = qknot::roots::DensityGrid::new(grid, bound);
            g.accumulate(&all);
            fs::create_dir_all(&out).map_err(|e| e.to_string())?;
            fs::write(out.join(format!("{inv}_roots.pgm")), g.to_pgm())
                .map_err(|e| e.to_string())?;
            fs::write(out.join(format!("{inv}_roots.csv")), g.to_csv())
                .map_err(|e| e.to_string())?;
            println!("{}: {} roots, bound {bound:.4}", inv, all.len());
            Ok(0)
        }
        Command::Ballmapper {
            store,
            invariant,
            epsilon,
            color_by,
            report_width,
            out,
            max_crossings,
            sweep,
        } => {
            let inv =
                Inv::parse(&invariant).ok_or_else(|| format!("unknown invariant {invariant}"))?;
            if inv == Inv::K {
                return Err("ball mapper needs a univariate invariant".into());
            }
            let store = Store::open(store).map_err(|e| e.to_string())?;
            let knots =
                load_knots(&store.knots_path(), max_crossings).map_err(|e| e.to_string())?;
            let max_n = knots.iter().map(|d| d.n()).max().unwrap_or(0);
            let color_inv = match color_by.as_deref() {
                Some(c) => Some(Inv::parse(c).ok_or_else(|| format!("unknown invariant {c}"))?),
                None => None,
            };
            let mut load = vec![inv];
            load.extend(color_inv);
            let cache = Cache::load(&store, &knots, &load).map_err(|e| e.to_string())?;
            let vals = cache.column(inv, max_n).map_err(|e| e.to_string())?;
            let (d, cloud) = coefficient_cloud(&vals, report_width).map_err(|e| e.to_string())?;
            let mut g = qknot::ballmapper::build(&cloud, epsilon).map_err(|e| e.to_string())?;
            if let Some(ci) = color_inv {
                let colors = color_values(&cache, ci, max_n).map_err(|e| e.to_string())?;
                g.color_by(&colors).map_err(|e| e.to_string())?;
            }
            fs::create_dir_all(&out).map_err(|e| e.to_string())?;
            fs::write(out.join(format!("{inv}_mapper.txt")), g.to_record())
                .map_err(|e| e.to_string())?;
            fs::write(out.join(format!("{inv}_mapper.svg")), g.to_svg())
                .map_err(|e| e.to_string())?;
            println!(
                "{inv}: {} points in dim {}, {} vertices, {} edges at eps {epsilon}",
                cloud.len(),
                2 * d + 1,
                g.num_vertices(),
                g.num_edges()
            );
            if let Some(s) = sweep {
                let ladder: Vec<f64> = s
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<f64>()
                            .map_err(|_| format!("bad radius {t}"))
                    })
                    .collect::<Result<_, _>>()?;
                for (eps, v, e) in
                    qknot::ballmapper::sweep(&cloud, &ladder).map_err(|e| e.to_string())?
                {
                    println!("  eps {eps}: {v} vertices, {e} edges");
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
