//! Pipeline orchestration: compute invariants over a knot table, persist
//! canonical values in an append-only store, and emit the report tables.
//!
//! Store layout (one directory):
//!   - `knots.txt` — the ingested diagram list, census order
//!   - `<INV>.records` — append-only `id;engine;value` lines after a
//!     `# qknot-store convention=1 invariant=<INV>` header; the value is the
//!     canonical polynomial text or `TIMEOUT`; later lines supersede earlier
//!   - `timings/<INV>.csv` — wall-clock seconds per knot (environment
//!     specific, deliberately outside the deterministic record files)
//!
//! Record content is a pure function of the inputs: worker count and
//! scheduling order never change what is appended (tasks are scheduled by
//! descending estimated cost but results are merged back into census order
//! before writing).

use knotdata::Diagram;
use laurent::{BiLaurentPoly, CoeffStats, LaurentPoly};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use stats::{aggregate, ClassPartition, Fixed4};
use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::io::{BufReader, Write as _};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

pub const CONVENTION_VERSION: u32 = 1;

/// The six studied invariants.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Inv {
    A2,
    A,
    B1,
    J,
    K,
    KT1,
}

impl Inv {
    pub const ALL: [Inv; 6] = [Inv::A2, Inv::A, Inv::B1, Inv::J, Inv::K, Inv::KT1];

    pub fn as_str(self) -> &'static str {
        match self {
            Inv::A2 => "A2",
            Inv::A => "A",
            Inv::B1 => "B1",
            Inv::J => "J",
            Inv::K => "K",
            Inv::KT1 => "KT1",
        }
    }

    pub fn parse(s: &str) -> Option<Inv> {
        Inv::ALL
            .into_iter()
            .find(|i| i.as_str().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for Inv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Compute engines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    /// Morse-slice R-matrix contraction (J, B1, A2).
    RMatrix,
    /// Kauffman bracket state sum / tangle contraction (J only).
    Skein,
    /// Fox calculus on the Wirtinger presentation (A only).
    Fox,
    /// Cube of resolutions (K, KT1).
    Cube,
}

impl Engine {
    pub fn as_str(self) -> &'static str {
        match self {
            Engine::RMatrix => "rmatrix",
            Engine::Skein => "skein",
            Engine::Fox => "fox",
            Engine::Cube => "cube",
        }
    }

    pub fn parse(s: &str) -> Option<Engine> {
        match s {
            "rmatrix" => Some(Engine::RMatrix),
            "skein" => Some(Engine::Skein),
            "fox" => Some(Engine::Fox),
            "cube" => Some(Engine::Cube),
            _ => None,
        }
    }

    /// Default engine per invariant.
    pub fn default_for(inv: Inv) -> Engine {
        match inv {
            Inv::J | Inv::B1 | Inv::A2 => Engine::RMatrix,
            Inv::A => Engine::Fox,
            Inv::K | Inv::KT1 => Engine::Cube,
        }
    }

    /// Engine/invariant compatibility: A has no skein or R-matrix engine
    /// here, K has no R-matrix engine.
    pub fn supports(self, inv: Inv) -> bool {
        match self {
            Engine::RMatrix => matches!(inv, Inv::J | Inv::B1 | Inv::A2),
            Engine::Skein => inv == Inv::J,
            Engine::Fox => inv == Inv::A,
            Engine::Cube => matches!(inv, Inv::K | Inv::KT1),
        }
    }
}

#[derive(Debug)]
pub enum Error {
    Io(std::io::Error),
    BadInvocation(String),
    Knot(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Io(e) => write!(f, "i/o error: {e}"),
            Error::BadInvocation(m) => write!(f, "bad invocation: {m}"),
            Error::Knot(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e)
    }
}

/// Run `f` over `items`, preserving input order in the output.  With the
/// `parallel` feature and `workers > 1` the work runs on a rayon pool of that
/// size; otherwise it runs sequentially.  Results are identical either way.
pub fn par_map<T, U, F>(items: Vec<T>, workers: usize, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if workers > 1 {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .expect("thread pool");
            return pool.install(|| items.into_par_iter().map(f).collect());
        }
    }
    let _ = workers;
    items.into_iter().map(f).collect()
}

/// One stored invariant value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Poly(String),
    Timeout,
}

/// The append-only result store.
pub struct Store {
    dir: PathBuf,
}

impl Store {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Store, Error> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        fs::create_dir_all(dir.join("timings"))?;
        Ok(Store { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn knots_path(&self) -> PathBuf {
        self.dir.join("knots.txt")
    }

    pub fn records_path(&self, inv: Inv) -> PathBuf {
        self.dir.join(format!("{inv}.records"))
    }

    /// Load the records of one invariant; later lines supersede earlier ones.
    pub fn load(&self, inv: Inv) -> Result<BTreeMap<String, Value>, Error> {
        let path = self.records_path(inv);
        let mut out = BTreeMap::new();
        if !path.exists() {
            return Ok(out);
        }
        for line in fs::read_to_string(&path)?.lines() {
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            let mut parts = line.splitn(3, ';');
            let (Some(id), Some(_engine), Some(val)) = (parts.next(), parts.next(), parts.next())
            else {
                return Err(Error::Knot(format!("malformed record line: {line}")));
            };
            let value = if val == "TIMEOUT" {
                Value::Timeout
            } else {
                Value::Poly(val.to_string())
            };
            out.insert(id.to_string(), value);
        }
        Ok(out)
    }

    /// Append records (already in census order).  Writes the header if the
    /// file is new.
    pub fn append(
        &self,
        inv: Inv,
        engine: Engine,
        records: &[(String, Value)],
    ) -> Result<(), Error> {
        if records.is_empty() {
            return Ok(());
        }
        let path = self.records_path(inv);
        let mut f = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)?;
        if f.metadata()?.len() == 0 {
            writeln!(
                f,
                "# qknot-store convention={CONVENTION_VERSION} invariant={inv}"
            )?;
        }
        for (id, value) in records {
            let v = match value {
                Value::Poly(s) => s.as_str(),
                Value::Timeout => "TIMEOUT",
            };
            writeln!(f, "{id};{};{v}", engine.as_str())?;
        }
        Ok(())
    }

    pub fn append_timings(&self, inv: Inv, rows: &[(String, f64)]) -> Result<(), Error> {
        if rows.is_empty() {
            return Ok(());
        }
        let path = self.dir.join("timings").join(format!("{inv}.csv"));
        let new = !path.exists();
        let mut f = fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)?;
        if new {
            writeln!(f, "id,seconds")?;
        }
        for (id, secs) in rows {
            writeln!(f, "{id},{secs:.6}")?;
        }
        Ok(())
    }

    pub fn load_timings(&self, inv: Inv) -> Result<Vec<(String, f64)>, Error> {
        let path = self.dir.join("timings").join(format!("{inv}.csv"));
        let mut out = Vec::new();
        if !path.exists() {
            return Ok(out);
        }
        for line in fs::read_to_string(&path)?.lines().skip(1) {
            if let Some((id, s)) = line.split_once(',') {
                if let Ok(v) = s.parse::<f64>() {
                    out.push((id.to_string(), v));
                }
            }
        }
        Ok(out)
    }
}

/// Load the census from the store's `knots.txt` (or a given list file).
pub fn load_knots(path: &Path, max_crossings: Option<usize>) -> Result<Vec<Diagram>, Error> {
    let f = fs::File::open(path)?;
    let table = knotdata::ingest_list(BufReader::new(f), max_crossings);
    if !table.errors.is_empty() {
        let (line, msg) = &table.errors[0];
        return Err(Error::Knot(format!(
            "{} malformed knot entries, first at line {line}: {msg}",
            table.errors.len()
        )));
    }
    Ok(table.knots)
}

/// Why a single knot's computation produced no value.
#[derive(Debug)]
enum ComputeErr {
    Timeout,
    Other(String),
}

/// Compute one invariant value; canonical text form.
fn compute_value(
    d: &Diagram,
    inv: Inv,
    engine: Engine,
    deadline: Option<Instant>,
) -> Result<String, ComputeErr> {
    let err = |e: String| ComputeErr::Other(format!("{} {inv}: {e}", d.id()));
    let o = d.orient().map_err(|e| err(format!("orient: {e}")))?;
    match (inv, engine) {
        (Inv::J, Engine::Skein) => {
            match bracket::jones_with(&o, bracket::Strategy::Auto, deadline) {
                Ok(p) => Ok(p.to_canonical_string()),
                Err(_) => Err(ComputeErr::Timeout),
            }
        }
        (Inv::J | Inv::B1 | Inv::A2, Engine::RMatrix) => {
            let data = rmatrix_data(inv);
            let w = rmatrix::morse_encode(&o).map_err(|e| err(e.to_string()))?;
            let p = rmatrix::evaluate(&w, data).map_err(|e| err(e.to_string()))?;
            Ok(p.to_canonical_string())
        }
        (Inv::A, Engine::Fox) => alexander::alexander_fox(&o)
            .map(|p| p.to_canonical_string())
            .map_err(|e| err(e.to_string())),
        (Inv::K, Engine::Cube) => khovanov::khovanov(&o, khovanov::DEFAULT_MAX_CROSSINGS)
            .map(|p| p.to_cache_string())
            .map_err(|e| err(e.to_string())),
        (Inv::KT1, Engine::Cube) => khovanov::khovanov(&o, khovanov::DEFAULT_MAX_CROSSINGS)
            .map(|p| khovanov::kt1(&p).to_canonical_string())
            .map_err(|e| err(e.to_string())),
        _ => Err(err(format!("engine {} unsupported", engine.as_str()))),
    }
}

fn rmatrix_data(inv: Inv) -> &'static rmatrix::RMatrixData {
    use std::sync::OnceLock;
    static J: OnceLock<rmatrix::RMatrixData> = OnceLock::new();
    static B1: OnceLock<rmatrix::RMatrixData> = OnceLock::new();
    static A2: OnceLock<rmatrix::RMatrixData> = OnceLock::new();
    match inv {
        Inv::J => J.get_or_init(|| rmatrix::RMatrixData::library(rmatrix::Invariant::J)),
        Inv::B1 => B1.get_or_init(|| rmatrix::RMatrixData::library(rmatrix::Invariant::B1)),
        Inv::A2 => A2.get_or_init(|| rmatrix::RMatrixData::library(rmatrix::Invariant::A2)),
        _ => unreachable!("no R-matrix data for {inv}"),
    }
}

/// Outcome of a compute batch.
#[derive(Debug, Default)]
pub struct ComputeSummary {
    pub computed: usize,
    pub skipped: usize,
    pub timeouts: usize,
    pub failures: Vec<String>,
}

/// Compute all missing records for one invariant and append them in census
/// order.  Existing (non-timeout) records are never recomputed; timeout
/// records are retried.
pub fn compute(
    store: &Store,
    knots: &[Diagram],
    inv: Inv,
    engine: Engine,
    workers: usize,
    timeout: Option<Duration>,
) -> Result<ComputeSummary, Error> {
    if !engine.supports(inv) {
        return Err(Error::BadInvocation(format!(
            "engine {} does not compute {inv}",
            engine.as_str()
        )));
    }
    let existing = store.load(inv)?;
    let mut tasks: Vec<(usize, &Diagram)> = knots
        .iter()
        .enumerate()
        .filter(|(_, d)| !matches!(existing.get(d.id()), Some(Value::Poly(_))))
        .collect();
    let skipped = knots.len() - tasks.len();
    // schedule big diagrams first to avoid stragglers; census order is
    // restored before anything is written
    tasks.sort_by_key(|&(idx, d)| (std::cmp::Reverse(d.n()), idx));
    let mut ordered: Vec<(usize, Result<String, ComputeErr>, f64)> =
        par_map(tasks, workers, move |(idx, d)| {
            let start = Instant::now();
            let deadline = timeout.map(|t| start + t);
            let mut r = compute_value(d, inv, engine, deadline);
            let secs = start.elapsed().as_secs_f64();
            if let Some(t) = timeout {
                // engines without cooperative deadlines are cut off post hoc
                if r.is_ok() && start.elapsed() > t {
                    r = Err(ComputeErr::Timeout);
                }
            }
            (idx, r, secs)
        });
    ordered.sort_by_key(|&(idx, _, _)| idx);
    let mut summary = ComputeSummary {
        skipped,
        ..Default::default()
    };
    let mut records = Vec::new();
    let mut timings = Vec::new();
    for (idx, res, secs) in ordered {
        let id = knots[idx].id().to_string();
        timings.push((id.clone(), secs));
        match res {
            Ok(poly) => {
                summary.computed += 1;
                records.push((id, Value::Poly(poly)));
            }
            Err(ComputeErr::Timeout) => {
                summary.timeouts += 1;
                records.push((id, Value::Timeout));
            }
            Err(ComputeErr::Other(e)) => summary.failures.push(e),
        }
    }
    store.append(inv, engine, &records)?;
    store.append_timings(inv, &timings)?;
    Ok(summary)
}

/// Parsed store contents for reporting: per invariant, census-ordered
/// canonical values for the knots that have them.
pub struct Cache {
    /// census-ordered (id, crossing number)
    pub knots: Vec<(String, usize)>,
    pub values: BTreeMap<Inv, BTreeMap<String, String>>,
}

impl Cache {
    pub fn load(store: &Store, knots: &[Diagram], invs: &[Inv]) -> Result<Cache, Error> {
        let mut values = BTreeMap::new();
        for &inv in invs {
            let recs = store.load(inv)?;
            let polys: BTreeMap<String, String> = recs
                .into_iter()
                .filter_map(|(id, v)| match v {
                    Value::Poly(s) => Some((id, s)),
                    Value::Timeout => None,
                })
                .collect();
            values.insert(inv, polys);
        }
        Ok(Cache {
            knots: knots.iter().map(|d| (d.id().to_string(), d.n())).collect(),
            values,
        })
    }

    /// ids of knots with ≤ n crossings missing a value for `inv`.
    pub fn missing(&self, inv: Inv, max_n: usize) -> Vec<String> {
        let m = &self.values[&inv];
        self.knots
            .iter()
            .filter(|(id, n)| *n <= max_n && !m.contains_key(id))
            .map(|(id, _)| id.clone())
            .collect()
    }

    /// Census-ordered values of `inv` over knots with ≤ n crossings.
    /// Errors if any are missing.
    pub fn column(&self, inv: Inv, max_n: usize) -> Result<Vec<&str>, Error> {
        let m = &self.values[&inv];
        self.knots
            .iter()
            .filter(|(_, n)| *n <= max_n)
            .map(|(id, _)| {
                m.get(id)
                    .map(|s| s.as_str())
                    .ok_or_else(|| Error::Knot(format!("missing {inv} record for {id}")))
            })
            .collect()
    }

    pub fn crossing_numbers(&self) -> Vec<usize> {
        let mut ns: Vec<usize> = self.knots.iter().map(|(_, n)| *n).collect();
        ns.sort_unstable();
        ns.dedup();
        ns
    }
}

fn univariate_stats(values: &[&str]) -> Result<Vec<CoeffStats>, Error> {
    values
        .iter()
        .map(|s| {
            LaurentPoly::from_canonical_str(s)
                .map(|p| p.coeff_stats())
                .map_err(|e| Error::Knot(format!("bad stored polynomial: {e:?}")))
        })
        .collect()
}

/// One emitted table: a header and stringly rows, rendered as CSV.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }
}

const SIX: [Inv; 6] = [Inv::A2, Inv::A, Inv::B1, Inv::J, Inv::K, Inv::KT1];
const FIVE: [Inv; 5] = [Inv::A2, Inv::A, Inv::B1, Inv::J, Inv::KT1];

fn six_header() -> Vec<String> {
    [
        "n",
        "A2",
        "Alexander",
        "B1",
        "Jones",
        "Khovanov",
        "KhovanovT1",
    ]
    .map(String::from)
    .to_vec()
}

fn five_header() -> Vec<String> {
    ["n", "A2", "Alexander", "B1", "Jones", "KhovanovT1"]
        .map(String::from)
        .to_vec()
}

/// Figures 3/4/7 (byte-exact integers) and 5/6/8 (truncated 4 decimals):
/// coefficient and span aggregates over the cumulative census.
pub fn report_coeffs(cache: &Cache, max_n: usize) -> Result<Vec<Table>, Error> {
    let mut fig3 = Table {
        name: "figure3".into(),
        header: six_header(),
        rows: vec![],
    };
    let mut fig4 = Table {
        name: "figure4".into(),
        header: six_header(),
        rows: vec![],
    };
    let mut fig5 = Table {
        name: "figure5".into(),
        header: six_header(),
        rows: vec![],
    };
    let mut fig6 = Table {
        name: "figure6".into(),
        header: five_header(),
        rows: vec![],
    };
    let mut fig7 = Table {
        name: "figure7".into(),
        header: five_header(),
        rows: vec![],
    };
    let mut fig8 = Table {
        name: "figure8".into(),
        header: five_header(),
        rows: vec![],
    };
    for n in cache.crossing_numbers() {
        if n > max_n {
            break;
        }
        let mut r3 = vec![n.to_string()];
        let mut r4 = vec![n.to_string()];
        let mut r5 = vec![n.to_string()];
        let mut r6 = vec![n.to_string()];
        let mut r7 = vec![n.to_string()];
        let mut r8 = vec![n.to_string()];
        for inv in SIX {
            if inv == Inv::K {
                // bigraded: abs-sum statistics only (no span)
                let vals = cache.column(inv, n)?;
                let stats: Vec<(BigInt, BigInt)> = vals
                    .iter()
                    .map(|s| {
                        BiLaurentPoly::from_cache_str(s)
                            .map(|p| p.coeff_stats())
                            .map_err(|e| Error::Knot(format!("bad stored K value: {e:?}")))
                    })
                    .collect::<Result<_, _>>()?;
                let max_abs = stats.iter().map(|(_, m)| m.clone()).max().unwrap();
                let max_sum = stats.iter().map(|(s, _)| s.clone()).max().unwrap();
                let total: BigInt = stats.iter().map(|(s, _)| s.clone()).sum();
                let avg = Fixed4::from_ratio(&total, &BigInt::from(stats.len()));
                r3.push(max_abs.to_string());
                r4.push(max_sum.to_string());
                r5.push(avg.to_string());
            } else {
                let stats = univariate_stats(&cache.column(inv, n)?)?;
                let a = aggregate(&stats);
                r3.push(a.max_coeff.to_string());
                r4.push(a.max_abs_sum.to_string());
                r5.push(a.avg_abs_sum.to_string());
                r6.push(a.max_avg_coeff.to_string());
                r7.push(a.max_span.to_string());
                r8.push(a.avg_span.to_string());
            }
        }
        fig3.rows.push(r3);
        fig4.rows.push(r4);
        fig5.rows.push(r5);
        fig6.rows.push(r6);
        fig7.rows.push(r7);
        fig8.rows.push(r8);
    }
    Ok(vec![fig3, fig4, fig5, fig6, fig7, fig8])
}

/// Distinct-value percentages (figure comparison1): the six invariants plus
/// the J+KT1 and All composites, floored to one decimal.
pub fn report_unique(cache: &Cache, max_n: usize) -> Result<Table, Error> {
    let mut t = Table {
        name: "comparison1".into(),
        header: ["n", "A2", "A", "B1", "J", "K", "KT1", "J+KT1", "All"]
            .map(String::from)
            .to_vec(),
        rows: vec![],
    };
    for n in cache.crossing_numbers() {
        if n > max_n {
            break;
        }
        let mut row = vec![n.to_string()];
        let cols: BTreeMap<Inv, Vec<&str>> = SIX
            .iter()
            .map(|&i| Ok((i, cache.column(i, n)?)))
            .collect::<Result<_, Error>>()?;
        for inv in SIX {
            let p = ClassPartition::from_keys(cols[&inv].iter());
            row.push(p.distinct_percent().to_string());
        }
        let jk: Vec<(&str, &str)> = cols[&Inv::J]
            .iter()
            .zip(&cols[&Inv::KT1])
            .map(|(&a, &b)| (a, b))
            .collect();
        row.push(ClassPartition::from_keys(jk).distinct_percent().to_string());
        let all: Vec<[&str; 5]> = (0..cols[&Inv::J].len())
            .map(|i| {
                [
                    cols[&Inv::A2][i],
                    cols[&Inv::A][i],
                    cols[&Inv::B1][i],
                    cols[&Inv::J][i],
                    cols[&Inv::K][i],
                ]
            })
            .collect();
        row.push(
            ClassPartition::from_keys(all)
                .distinct_percent()
                .to_string(),
        );
        t.rows.push(row);
    }
    Ok(t)
}

/// Pair-collision expectations (figure comparison2 layout): exact `1/ρ`
/// plus a seeded sampled estimate, one decimal.  Singleton-only partitions
/// print `inf`.
pub fn report_pairs(
    cache: &Cache,
    max_n: usize,
    trials: u64,
    cap: u64,
    seed: u64,
) -> Result<Table, Error> {
    use rand::SeedableRng;
    let mut t = Table {
        name: "comparison2".into(),
        header: [
            "n",
            "A2",
            "A",
            "B1",
            "J",
            "K",
            "KT1",
            "J+KT1",
            "All",
            "A2_sampled",
            "A_sampled",
            "B1_sampled",
            "J_sampled",
            "K_sampled",
            "KT1_sampled",
            "J+KT1_sampled",
            "All_sampled",
        ]
        .map(String::from)
        .to_vec(),
        rows: vec![],
    };
    for n in cache.crossing_numbers() {
        if n > max_n {
            break;
        }
        let cols: BTreeMap<Inv, Vec<&str>> = SIX
            .iter()
            .map(|&i| Ok((i, cache.column(i, n)?)))
            .collect::<Result<_, Error>>()?;
        let mut partitions: Vec<ClassPartition> = SIX
            .iter()
            .map(|&inv| ClassPartition::from_keys(cols[&inv].iter()))
            .collect();
        let jk: Vec<(&str, &str)> = cols[&Inv::J]
            .iter()
            .zip(&cols[&Inv::KT1])
            .map(|(&a, &b)| (a, b))
            .collect();
        partitions.push(ClassPartition::from_keys(jk));
        let all: Vec<[&str; 5]> = (0..cols[&Inv::J].len())
            .map(|i| {
                [
                    cols[&Inv::A2][i],
                    cols[&Inv::A][i],
                    cols[&Inv::B1][i],
                    cols[&Inv::J][i],
                    cols[&Inv::K][i],
                ]
            })
            .collect();
        partitions.push(ClassPartition::from_keys(all));
        if partitions[0].total() < 2 {
            continue;
        }
        let mut row = vec![n.to_string()];
        for p in &partitions {
            match p.pair_expectation_exact().to_f64() {
                Some(v) => row.push(format!("{:.1}", (v * 10.0).floor() / 10.0)),
                None => row.push("inf".into()),
            }
        }
        for (k, p) in partitions.iter().enumerate() {
            // an all-distinct partition never collides: report inf without
            // burning `trials * cap` draws
            if p.pair_expectation_exact().to_f64().is_none() {
                row.push("inf".into());
                continue;
            }
            let mut rng =
                rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ ((n as u64) << 8) ^ k as u64);
            let s = p.pair_expectation_sampled(trials, cap, &mut rng);
            row.push(format!("{:.1}", (s.mean * 10.0).floor() / 10.0));
        }
        t.rows.push(row);
    }
    Ok(t)
}

/// Root-location statistics (figures 9/10/11): maximal modulus, percentage of
/// pure roots, percentage with `|z|² ∈ [0.9, 1.1]`; truncated 4 decimals.
pub fn report_roots(cache: &Cache, max_n: usize) -> Result<Vec<Table>, Error> {
    let solver = roots::Solver::default();
    let mut fig9 = Table {
        name: "figure9".into(),
        header: five_header(),
        rows: vec![],
    };
    let mut fig10 = Table {
        name: "figure10".into(),
        header: five_header(),
        rows: vec![],
    };
    let mut fig11 = Table {
        name: "figure11".into(),
        header: five_header(),
        rows: vec![],
    };
    let ns = cache.crossing_numbers();
    // per-invariant, per-knot classification, solved once (identical
    // polynomial texts share one solve)
    let mut per: BTreeMap<Inv, Vec<(usize, roots::Classification)>> = BTreeMap::new();
    for inv in FIVE {
        let vals = cache.column(inv, max_n)?;
        let mut memo: BTreeMap<&str, roots::Classification> = BTreeMap::new();
        let mut list = Vec::new();
        for (s, (_, n)) in vals
            .iter()
            .zip(cache.knots.iter().filter(|(_, n)| *n <= max_n))
        {
            if !memo.contains_key(s) {
                let p = LaurentPoly::from_canonical_str(s)
                    .map_err(|e| Error::Knot(format!("bad stored polynomial: {e:?}")))?;
                let c = if p.num_terms() <= 1 {
                    // monomial units have no roots
                    roots::classify(&[], roots::PURE_TOL)
                } else {
                    let rs = solver
                        .roots(&p)
                        .map_err(|e| Error::Knot(format!("root solve: {e}")))?;
                    if rs.rejected > 0 {
                        return Err(Error::Knot(format!(
                            "{} non-converged roots for {inv}",
                            rs.rejected
                        )));
                    }
                    roots::classify(&rs.roots, roots::PURE_TOL)
                };
                memo.insert(s, c);
            }
            list.push((*n, memo[s].clone()));
        }
        per.insert(inv, list);
    }
    for n in ns {
        if n > max_n {
            break;
        }
        let mut r9 = vec![n.to_string()];
        let mut r10 = vec![n.to_string()];
        let mut r11 = vec![n.to_string()];
        for inv in FIVE {
            let mut max_abs: f64 = 0.0;
            let (mut pure, mut annulus, mut total) = (0u64, 0u64, 0u64);
            for (kn, c) in &per[&inv] {
                if *kn > n {
                    continue;
                }
                max_abs = max_abs.max(c.max_abs);
                pure += c.pure as u64;
                annulus += c.annulus as u64;
                total += c.total as u64;
            }
            r9.push(floor4_f64(max_abs).to_string());
            r10.push(percent4(pure, total).to_string());
            r11.push(percent4(annulus, total).to_string());
        }
        fig9.rows.push(r9);
        fig10.rows.push(r10);
        fig11.rows.push(r11);
    }
    Ok(vec![fig9, fig10, fig11])
}

/// Floor a nonnegative float to four decimals, with a small guard so values
/// that are exact up to solver noise (e.g. moduli on the unit circle) land on
/// the intended digit.
pub fn floor4_f64(v: f64) -> Fixed4 {
    Fixed4((v * 10_000.0 + 1e-6).floor() as i128)
}

/// `100·num/den` floored to four decimals (0 when `den` is 0).
pub fn percent4(num: u64, den: u64) -> Fixed4 {
    if den == 0 {
        return Fixed4(0);
    }
    Fixed4((num as i128 * 1_000_000) / den as i128)
}

/// Timing summary per crossing number: count, mean and quartiles of the
/// wall-clock seconds (box-plot data; values are environment specific).
pub fn report_timing(store: &Store, cache: &Cache, invs: &[Inv]) -> Result<Table, Error> {
    let n_of: BTreeMap<&str, usize> = cache
        .knots
        .iter()
        .map(|(id, n)| (id.as_str(), *n))
        .collect();
    let mut t = Table {
        name: "timing".into(),
        header: ["invariant", "n", "count", "mean", "q1", "median", "q3"]
            .map(String::from)
            .to_vec(),
        rows: vec![],
    };
    for &inv in invs {
        let mut per_n: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for (id, secs) in store.load_timings(inv)? {
            if let Some(&n) = n_of.get(id.as_str()) {
                per_n.entry(n).or_default().push(secs);
            }
        }
        for (n, mut v) in per_n {
            v.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let q = |f: f64| v[(f * (v.len() - 1) as f64).round() as usize];
            let mean: f64 = v.iter().sum::<f64>() / v.len() as f64;
            t.rows.push(vec![
                inv.to_string(),
                n.to_string(),
                v.len().to_string(),
                format!("{mean:.6}"),
                format!("{:.6}", q(0.25)),
                format!("{:.6}", q(0.5)),
                format!("{:.6}", q(0.75)),
            ]);
        }
    }
    Ok(t)
}

/// Coefficient vectors of one invariant's values for the ball mapper: the
/// common half-width is the maximal half-support over the batch unless
/// overridden.
pub fn coefficient_cloud(
    values: &[&str],
    width_override: Option<i64>,
) -> Result<(i64, Vec<Vec<f64>>), Error> {
    let polys: Vec<LaurentPoly> = values
        .iter()
        .map(|s| {
            LaurentPoly::from_canonical_str(s)
                .map_err(|e| Error::Knot(format!("bad stored polynomial: {e:?}")))
        })
        .collect::<Result<_, _>>()?;
    let d = match width_override {
        Some(d) => d,
        None => polys
            .iter()
            .filter_map(|p| p.degree_range())
            .map(|(lo, hi)| lo.abs().max(hi.abs()))
            .max()
            .unwrap_or(0),
    };
    let cloud = polys
        .iter()
        .map(|p| {
            p.to_vector(d)
                .map(|v| v.to_f64())
                .map_err(|e| Error::Knot(format!("vectorize: {e:?}")))
        })
        .collect::<Result<_, _>>()?;
    Ok((d, cloud))
}

/// Scalar per knot used for cross-invariant coloring: the coefficient
/// abs-sum of the chosen invariant's value.
pub fn color_values(cache: &Cache, inv: Inv, max_n: usize) -> Result<Vec<f64>, Error> {
    let vals = cache.column(inv, max_n)?;
    vals.iter()
        .map(|s| {
            if inv == Inv::K {
                BiLaurentPoly::from_cache_str(s)
                    .map(|p| p.coeff_stats().0.to_f64().unwrap())
                    .map_err(|e| Error::Knot(format!("bad stored K value: {e:?}")))
            } else {
                LaurentPoly::from_canonical_str(s)
                    .map(|p| p.coeff_stats().abs_sum.to_f64().unwrap())
                    .map_err(|e| Error::Knot(format!("bad stored polynomial: {e:?}")))
            }
        })
        .collect()
}

/// Per-n and cumulative census counts for `ingest`.
pub fn census_counts(knots: &[Diagram]) -> Vec<(usize, usize, usize)> {
    let mut per: BTreeMap<usize, usize> = BTreeMap::new();
    for d in knots {
        *per.entry(d.n()).or_insert(0) += 1;
    }
    let mut out = Vec::new();
    let mut cum = 0;
    for (n, c) in per {
        cum += c;
        out.push((n, c, cum));
    }
    out
}

// re-exports for the binary and the acceptance suite
pub use alexander;
pub use ballmapper;
pub use bracket;
pub use khovanov;
pub use knotdata;
pub use laurent;
pub use rmatrix;
pub use roots;
pub use stats;
