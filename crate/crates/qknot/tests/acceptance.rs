//! Acceptance suite: one test per criterion, each printing a single
//! `acceptance criterion N (...): pass|FAIL` line (visible with
//! `cargo test -- --nocapture`).

use qknot::{
    alexander, ballmapper, bracket, coefficient_cloud, compute, khovanov, knotdata, laurent,
    rmatrix, stats, Cache, Engine, Inv, Store,
};

use laurent::LaurentPoly;
use rand::SeedableRng;
use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::panic::AssertUnwindSafe;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

fn data_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn census(max_n: usize) -> Vec<knotdata::Diagram> {
    let table = knotdata::ingest_list(
        BufReader::new(File::open(data_path("knots.txt")).unwrap()),
        Some(max_n),
    );
    assert!(table.errors.is_empty());
    table.knots
}

fn criterion(n: u32, name: &str, body: impl FnOnce()) {
    match std::panic::catch_unwind(AssertUnwindSafe(body)) {
        Ok(()) => println!("acceptance criterion {n} ({name}): pass"),
        Err(e) => {
            println!("acceptance criterion {n} ({name}): FAIL");
            std::panic::resume_unwind(e);
        }
    }
}

struct Ctx {
    _dir: tempfile::TempDir,
    store: Store,
    knots: Vec<knotdata::Diagram>,
}

/// Shared n≤10 store with all six invariants computed once.
fn ctx() -> &'static Ctx {
    static CTX: OnceLock<Ctx> = OnceLock::new();
    CTX.get_or_init(|| {
        let dir = tempfile::tempdir().unwrap();
        let store = Store::open(dir.path()).unwrap();
        let knots = census(10);
        for inv in Inv::ALL {
            let s = compute(&store, &knots, inv, Engine::default_for(inv), 8, None).unwrap();
            assert!(s.failures.is_empty(), "{inv} failures: {:?}", s.failures);
            assert_eq!(s.timeouts, 0);
        }
        Ctx {
            _dir: dir,
            store,
            knots,
        }
    })
}

fn cache() -> Cache {
    let c = ctx();
    Cache::load(&c.store, &c.knots, &Inv::ALL).unwrap()
}

fn poly(terms: &[(i64, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(1, terms.iter().map(|&(e, c)| (e, c)))
}

fn rows(t: &qknot::Table) -> Vec<String> {
    t.rows.iter().map(|r| r.join(",")).collect()
}

#[test]
fn criterion_1_census_integrity() {
    criterion(1, "census integrity", || {
        let table = knotdata::ingest_list(
            BufReader::new(File::open(data_path("knots.txt")).unwrap()),
            None,
        );
        assert!(table.errors.is_empty());
        let counts = table.counts_per_n();
        let expected = [1usize, 1, 2, 3, 7, 21, 49, 165, 552];
        for (n, want) in (3..=11).zip(expected) {
            assert_eq!(counts.get(&n), Some(&want), "count at n={n}");
        }
    });
}

#[test]
fn criterion_2_polynomial_fixtures() {
    criterion(2, "polynomial fixtures", || {
        let knots = census(4);
        let by_id: HashMap<&str, &knotdata::Diagram> = knots.iter().map(|d| (d.id(), d)).collect();
        let trefoil = by_id["3_1"].orient().unwrap();
        let fig8 = by_id["4_1"].orient().unwrap();
        assert_eq!(
            bracket::jones(&trefoil),
            poly(&[(-4, -1), (-3, 1), (-1, 1)])
        );
        assert_eq!(
            bracket::jones(&fig8),
            poly(&[(-2, 1), (-1, -1), (0, 1), (1, -1), (2, 1)])
        );
        // symmetric representative of 1 - q + q², i.e. q⁻¹(1 - q + q²)
        assert_eq!(
            alexander::alexander_fox(&trefoil).unwrap(),
            poly(&[(-1, 1), (0, -1), (1, 1)])
        );
        let hopf = knotdata::Diagram::new_unchecked_for_links(
            "hopf",
            vec![
                knotdata::Crossing([1, 3, 2, 4]),
                knotdata::Crossing([3, 1, 4, 2]),
            ],
        );
        assert_eq!(
            bracket::bracket_with_signs(&hopf, &[1, 1]),
            poly(&[(3, 1), (1, 1), (-1, 1), (-3, 1)])
        );
    });
}

#[test]
fn criterion_3_coefficient_tables() {
    criterion(3, "coefficient and distinct-value tables", || {
        let cache = cache();
        let tables = qknot::report_coeffs(&cache, 10).unwrap();
        let expect: [(&str, &[&str]); 6] = [
            (
                "figure3",
                &[
                    "3,2,1,1,1,1,1",
                    "4,2,3,1,1,1,2",
                    "5,2,3,2,2,1,2",
                    "6,2,5,2,3,2,3",
                    "7,2,9,5,4,3,5",
                    "8,4,13,17,9,5,8",
                ],
            ),
            (
                "figure4",
                &[
                    "3,7,3,9,3,4,4",
                    "4,7,5,9,5,6,6",
                    "5,9,7,9,7,8,8",
                    "6,9,13,27,13,14,14",
                    "7,11,21,53,21,22,22",
                    "8,19,45,203,45,46,46",
                ],
            ),
            (
                "figure5",
                &[
                    "3,7.0000,3.0000,9.0000,3.0000,4.0000,4.0000",
                    "4,6.0000,4.0000,8.0000,4.0000,5.0000,5.0000",
                    "5,7.0000,5.0000,8.5000,5.0000,6.0000,6.0000",
                    "6,7.0000,7.5714,12.7142,7.5714,8.5714,8.5714",
                    "7,8.2857,11.1428,20.4285,11.1428,12.1428,12.1428",
                    "8,10.5428,18.8857,46.3714,18.8285,19.9428,19.9428",
                ],
            ),
            (
                "figure6",
                &[
                    "3,0.5384,1.0000,0.3913,0.7500,0.4444",
                    "4,0.5384,1.6666,0.3913,1.0000,0.5454",
                    "5,0.5384,2.3333,0.3913,1.1666,0.6153",
                    "6,0.5384,3.0000,0.6585,1.8571,0.9333",
                    "7,0.5384,5.0000,1.1276,2.6250,1.2941",
                    "8,0.7600,6.6000,3.8301,5.0000,2.4210",
                ],
            ),
            (
                "figure7",
                &[
                    "3,13,3,23,4,9",
                    "4,17,3,29,5,11",
                    "5,19,5,35,6,13",
                    "6,23,5,41,7,15",
                    "7,25,7,47,8,17",
                    "8,29,7,53,9,19",
                ],
            ),
            (
                "figure8",
                &[
                    "3,13.0000,3.0000,23.0000,4.0000,9.0000",
                    "4,15.0000,3.0000,26.0000,4.5000,10.0000",
                    "5,16.5000,3.5000,30.5000,5.2500,11.5000",
                    "6,18.7142,3.8571,35.0000,6.0000,13.0000",
                    "7,21.2857,4.2857,41.0000,7.0000,15.0000",
                    "8,23.9714,5.1142,47.1142,8.0000,17.0000",
                ],
            ),
        ];
        for ((name, want), table) in expect.iter().zip(&tables) {
            assert_eq!(&table.name, name);
            let got = rows(table);
            assert_eq!(&got[..6], *want, "{name} rows 3..8");
        }
        let unique = qknot::report_unique(&cache, 10).unwrap();
        let got = rows(&unique);
        for (i, row) in got[..6].iter().enumerate() {
            assert_eq!(
                row,
                &format!("{},100.0,100.0,100.0,100.0,100.0,100.0,100.0,100.0", i + 3),
                "comparison1 row n={}",
                i + 3
            );
        }
        // Alexander drops to 94.0% at n=9; Jones to 96.3% at n=10
        assert_eq!(got[6].split(',').nth(2), Some("94.0"));
        assert_eq!(got[7].split(',').nth(4), Some("96.3"));
    });
}

#[test]
fn criterion_4_root_statistics() {
    criterion(4, "root statistics", || {
        let cache = cache();
        let tables = qknot::report_roots(&cache, 10).unwrap();
        let expect: [(&str, &[&str]); 3] = [
            (
                "figure9",
                &[
                    "3,1.1278,1.0000,1.0731,1.2106,1.1168",
                    "4,1.1837,2.6180,1.1080,1.2106,1.2406",
                    "5,1.1837,2.6180,1.1388,1.2837,1.2451",
                    "6,1.2196,2.6180,1.1990,1.6355,1.3042",
                    "7,1.2547,3.3165,1.2197,1.6355,1.6993",
                    "8,1.4348,4.3902,1.7655,1.8692,1.6993",
                ],
            ),
            (
                "figure10",
                &[
                    "3,33.3333,0.0000,9.0909,33.3333,0.0000",
                    "4,28.5714,50.0000,4.0000,14.2857,11.1111",
                    "5,22.5806,20.0000,5.0847,17.6470,4.7619",
                    "6,22.5806,30.0000,4.2016,14.2857,9.5238",
                    "7,21.1267,17.3913,4.2857,14.2857,10.2040",
                    "8,19.9004,25.0000,4.3370,11.0204,11.4285",
                ],
            ),
            (
                "figure11",
                &[
                    "3,33.3333,100.0000,36.3636,0.0000,0.0000",
                    "4,57.1428,50.0000,56.0000,57.1428,11.1111",
                    "5,58.0645,80.0000,61.0169,23.5294,14.2857",
                    "6,54.8387,50.0000,65.5462,22.8571,16.6666",
                    "7,49.2957,65.2173,63.9285,14.2857,20.4081",
                    "8,47.7611,52.7777,60.4708,20.4081,21.0714",
                ],
            ),
        ];
        for ((name, want), table) in expect.iter().zip(&tables) {
            assert_eq!(&table.name, name);
            let got = rows(table);
            assert_eq!(&got[..6], *want, "{name} rows 3..8");
        }
    });
}

#[test]
fn criterion_5_engine_equivalence() {
    criterion(5, "engine equivalence", || {
        let data = rmatrix::RMatrixData::library(rmatrix::Invariant::J);
        for d in census(8) {
            let o = d.orient().unwrap();
            let skein = bracket::jones(&o);
            let w = rmatrix::morse_encode(&o).unwrap();
            let rm = rmatrix::evaluate(&w, &data).unwrap();
            assert_eq!(skein, rm, "Jones engine mismatch on {}", d.id());
        }
        let fox: HashMap<String, LaurentPoly> = census(8)
            .iter()
            .map(|d| {
                (
                    d.id().to_string(),
                    alexander::alexander_fox(&d.orient().unwrap()).unwrap(),
                )
            })
            .collect();
        let mut checked = 0usize;
        for line in BufReader::new(File::open(data_path("braids.txt")).unwrap()).lines() {
            let Some((name, word)) = alexander::parse_braid_line(&line.unwrap()) else {
                continue;
            };
            let Some(expect) = fox.get(&name) else {
                continue;
            };
            let s = alexander::seifert_from_braid(&word);
            let a = alexander::alexander_seifert(&s).unwrap();
            assert_eq!(&a, expect, "Fox vs Seifert mismatch on {name}");
            checked += 1;
        }
        assert_eq!(checked, 35, "all knots with ≤8 crossings checked");
    });
}

#[test]
fn criterion_6_khovanov_consistency() {
    criterion(6, "Khovanov consistency", || {
        let circle = poly(&[(1, 1), (-1, 1)]);
        for d in census(8) {
            let o = d.orient().unwrap();
            assert!(
                khovanov::d_squared_is_zero(&o, khovanov::DEFAULT_MAX_CROSSINGS).unwrap(),
                "d² ≠ 0 on {}",
                d.id()
            );
            let p = khovanov::khovanov(&o, khovanov::DEFAULT_MAX_CROSSINGS).unwrap();
            let (k_abs, _) = p.coeff_stats();
            assert_eq!(
                khovanov::abs_sum(&khovanov::kt1(&p)),
                k_abs,
                "abs-sum mismatch on {}",
                d.id()
            );
            // t = −1 specialization = (q + q⁻¹) · J(q²)
            let expect = bracket::jones(&o).substitute(2, 1).mul(&circle);
            assert_eq!(
                khovanov::euler(&p),
                expect,
                "Euler/Jones mismatch on {}",
                d.id()
            );
        }
    });
}

fn three_sigma_check(p: &stats::ClassPartition, trials: u64, seed: u64) {
    let exact = match p.pair_expectation_exact().to_f64() {
        Some(v) => v,
        None => return, // no collisions ever: nothing to match
    };
    let (num, den) = p.collision_probability();
    let rho = num_traits::ToPrimitive::to_f64(&num).unwrap()
        / num_traits::ToPrimitive::to_f64(&den).unwrap();
    // geometric waiting time: SE = sqrt((1-ρ)/ρ²) / sqrt(T)
    let se = ((1.0 - rho).max(0.0)).sqrt() / rho / (trials as f64).sqrt();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let s = p.pair_expectation_sampled(trials, 100_000_000, &mut rng);
    assert_eq!(s.capped, 0);
    assert!(
        (s.mean - exact).abs() <= 3.0 * se,
        "sampled {} vs exact {exact} (3σ = {})",
        s.mean,
        3.0 * se
    );
}

#[test]
fn criterion_7_pair_expectation() {
    criterion(7, "pair expectation sampler", || {
        use rand::Rng;
        let trials = 100_000u64;
        // 20 synthetic partitions with seeded random class sizes
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for round in 0..20u64 {
            let classes = rng.gen_range(2..8usize);
            let keys: Vec<u32> = (0..rng.gen_range(6..40usize))
                .map(|_| rng.gen_range(0..classes) as u32)
                .collect();
            let p = stats::ClassPartition::from_keys(keys);
            three_sigma_check(&p, trials, 1000 + round);
        }
        // census partitions at n ≤ 10 for each invariant
        let cache = cache();
        let mut exacts: HashMap<Inv, Option<f64>> = HashMap::new();
        for (k, inv) in Inv::ALL.into_iter().enumerate() {
            let p = stats::ClassPartition::from_keys(cache.column(inv, 10).unwrap());
            three_sigma_check(&p, trials, 2000 + k as u64);
            exacts.insert(inv, p.pair_expectation_exact().to_f64());
            // monotone growth in n over the rows where the oracle is finite
            let mut last = 0.0f64;
            for n in 3..=10usize {
                let pn = stats::ClassPartition::from_keys(cache.column(inv, n).unwrap());
                if let Some(v) = pn.pair_expectation_exact().to_f64() {
                    assert!(v >= last, "{inv} expectation not monotone at n={n}");
                    last = v;
                }
            }
        }
        // ordering B1 > A2 > K > A at the largest computed n (all-distinct
        // partitions never collide: treat their expectation as +infinity)
        let v = |i: Inv| exacts[&i].unwrap_or(f64::INFINITY);
        assert!(v(Inv::B1) > v(Inv::A2), "B1 > A2");
        assert!(v(Inv::A2) > v(Inv::K), "A2 > K");
        assert!(v(Inv::K) > v(Inv::A), "K > A");
    });
}

fn mapper_laws(points: &[Vec<f64>], eps: f64) {
    let g = ballmapper::build(points, eps).unwrap();
    // coverage completeness
    let mut covered = vec![false; points.len()];
    for c in &g.covered {
        for &i in c {
            covered[i] = true;
        }
    }
    assert!(covered.iter().all(|&b| b), "uncovered point at ε={eps}");
    // determinism under fixed order
    let g2 = ballmapper::build(points, eps).unwrap();
    assert_eq!(g, g2);
    assert_eq!(g.to_record(), g2.to_record());
    // ε-monotone vertex counts and ε→∞ collapse
    let ladder = [eps, 2.0 * eps, 4.0 * eps, 1e12];
    let sweep = ballmapper::sweep(points, &ladder).unwrap();
    for w in sweep.windows(2) {
        assert!(
            w[1].1 <= w[0].1,
            "vertex count grew: {:?} -> {:?}",
            w[0],
            w[1]
        );
    }
    assert_eq!(sweep.last().unwrap().1, 1, "huge ε must give one vertex");
}

#[test]
fn criterion_8_ball_mapper_laws() {
    criterion(8, "ball mapper laws", || {
        use rand::Rng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let random: Vec<Vec<f64>> = (0..1000)
            .map(|_| (0..5).map(|_| rng.gen_range(-5.0..5.0)).collect())
            .collect();
        mapper_laws(&random, 2.0);
        let cache = cache();
        let jones = cache.column(Inv::J, 10).unwrap();
        let (d, cloud) = coefficient_cloud(&jones, None).unwrap();
        assert_eq!(cloud.len(), 249);
        assert!(d > 0);
        mapper_laws(&cloud, 2.0);
    });
}

#[test]
fn criterion_9_parallel_determinism() {
    criterion(9, "determinism under parallelism", || {
        let bin = env!("CARGO_BIN_EXE_qknot");
        let mut dirs = Vec::new();
        for workers in ["1", "8"] {
            let dir = tempfile::tempdir().unwrap();
            let store = dir.path().join("store");
            let rep = dir.path().join("report");
            let run = |args: &[&str]| {
                let out = std::process::Command::new(bin).args(args).output().unwrap();
                assert!(
                    out.status.success(),
                    "qknot {args:?}: {}",
                    String::from_utf8_lossy(&out.stderr)
                );
            };
            let store_s = store.to_str().unwrap().to_string();
            let rep_s = rep.to_str().unwrap().to_string();
            let knots = data_path("knots.txt");
            run(&[
                "ingest",
                "--knots",
                knots.to_str().unwrap(),
                "--store",
                &store_s,
                "--max-crossings",
                "7",
            ]);
            run(&["compute", "--store", &store_s, "--workers", workers]);
            run(&[
                "report", "--store", &store_s, "--kind", "all", "--out", &rep_s, "--trials",
                "2000", "--seed", "99",
            ]);
            dirs.push(dir);
        }
        let (a, b) = (dirs[0].path(), dirs[1].path());
        let mut compared = 0usize;
        let mut names = vec!["store/knots.txt".to_string()];
        for inv in Inv::ALL {
            names.push(format!("store/{inv}.records"));
        }
        for f in std::fs::read_dir(a.join("report")).unwrap() {
            let name = f.unwrap().file_name().to_string_lossy().to_string();
            // timing.csv summarizes wall-clock measurements and is the one
            // deliberately environment-dependent report
            if name != "timing.csv" {
                names.push(format!("report/{name}"));
            }
        }
        for name in names {
            let x = std::fs::read(a.join(&name)).unwrap();
            let y = std::fs::read(b.join(&name)).unwrap();
            assert_eq!(x, y, "byte mismatch in {name}");
            compared += 1;
        }
        assert!(compared >= 7 + 11, "compared {compared} files");
    });
}
