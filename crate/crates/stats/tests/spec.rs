use laurent::{CoeffStats, LaurentPoly};
use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use stats::{aggregate, successive_quotients, ClassPartition, Expectation, Fixed4, Tenths};

fn partition_of(counts: &[u64]) -> ClassPartition {
    let keys = counts
        .iter()
        .enumerate()
        .flat_map(|(k, &c)| std::iter::repeat(k).take(c as usize));
    ClassPartition::from_keys(keys)
}

#[test]
fn distinct_percent_floors_to_one_decimal() {
    // 240 distinct classes among 249 values: 96.38…% -> 96.3
    let mut counts = vec![1u64; 239];
    counts.push(10);
    let p = partition_of(&counts);
    assert_eq!(p.total(), 249);
    assert_eq!(p.num_classes(), 240);
    assert_eq!(p.distinct_percent(), Tenths(963));
    assert_eq!(p.distinct_percent().to_string(), "96.3");
    // all distinct -> exactly 100.0
    let q = partition_of(&[1, 1, 1]);
    assert_eq!(q.distinct_percent().to_string(), "100.0");
}

#[test]
fn exact_pair_expectation() {
    // classes [2,1,1]: ρ = 2/12, expectation 6
    let p = partition_of(&[2, 1, 1]);
    assert_eq!(
        p.pair_expectation_exact(),
        Expectation::Finite {
            num: BigInt::from(12),
            den: BigInt::from(2),
        }
    );
    assert_eq!(p.pair_expectation_exact().floor4(), Some(Fixed4(60_000)));
    // all singletons: no collision possible
    let q = partition_of(&[1, 1, 1, 1]);
    assert_eq!(q.pair_expectation_exact(), Expectation::Infinite);
    assert_eq!(q.pair_expectation_exact().floor4(), None);
}

#[test]
fn sampled_expectation_converges_to_oracle() {
    // classes [3,2,1]: ρ = (6+2)/30 = 4/15, expectation 3.75
    let p = partition_of(&[3, 2, 1]);
    let exact = p.pair_expectation_exact().to_f64().unwrap();
    assert!((exact - 3.75).abs() < 1e-12);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let s = p.pair_expectation_sampled(200_000, 1_000_000, &mut rng);
    assert_eq!(s.capped, 0);
    assert!(
        (s.mean - exact).abs() < 0.05,
        "sampled {} vs exact {exact}",
        s.mean
    );
}

#[test]
fn sampler_is_deterministic_for_a_seed() {
    let p = partition_of(&[4, 3, 2, 1]);
    let a = p.pair_expectation_sampled(10_000, 1_000, &mut ChaCha8Rng::seed_from_u64(42));
    let b = p.pair_expectation_sampled(10_000, 1_000, &mut ChaCha8Rng::seed_from_u64(42));
    assert_eq!(a, b);
    let c = p.pair_expectation_sampled(10_000, 1_000, &mut ChaCha8Rng::seed_from_u64(43));
    assert_ne!(a.mean, c.mean);
}

#[test]
fn sampler_cap_is_reported() {
    // all singletons: every trial hits the cap
    let p = partition_of(&[1, 1, 1, 1, 1]);
    let s = p.pair_expectation_sampled(100, 50, &mut ChaCha8Rng::seed_from_u64(1));
    assert_eq!(s.capped, 100);
    assert_eq!(s.mean, 50.0);
}

#[test]
fn fixed4_formatting() {
    assert_eq!(Fixed4(75_714).to_string(), "7.5714");
    assert_eq!(Fixed4(70_000).to_string(), "7.0000");
    assert_eq!(Fixed4(5_384).to_string(), "0.5384");
    assert_eq!(Fixed4(40_000).to_string(), "4.0000");
    assert_eq!(
        Fixed4::from_ratio(&BigInt::from(53), &BigInt::from(7)),
        Fixed4(75_714) // 53/7 = 7.571428…, floored
    );
    assert_eq!(
        Fixed4::from_ratio(&BigInt::from(-1), &BigInt::from(3)).to_string(),
        "-0.3334" // floor truncation is downward also for negatives
    );
}

#[test]
fn aggregates_match_hand_computation() {
    // trefoil-row data: Alexander, Jones, KhovanovT1 coefficient stats
    let polys = [
        LaurentPoly::from_terms(1, [(-1i64, 1i64), (0, -1), (1, 1)]),
        LaurentPoly::from_terms(1, [(-4i64, -1i64), (-3, 1), (-1, 1)]),
    ];
    let stats: Vec<CoeffStats> = polys.iter().map(|p| p.coeff_stats()).collect();
    let a = aggregate(&stats);
    assert_eq!(a.max_coeff, BigInt::from(1));
    assert_eq!(a.max_abs_sum, BigInt::from(3));
    assert_eq!(a.max_span, 4);
    assert_eq!(a.avg_abs_sum, Fixed4(30_000));
    assert_eq!(a.avg_span.to_string(), "3.5000");
    // ratios 3/3 = 1 and 3/4: maximum is 1.0000
    assert_eq!(a.max_avg_coeff.to_string(), "1.0000");
}

#[test]
fn aggregate_average_floors_exactly() {
    // spans 13 and 17, average 15; abs sums 7 and 5 -> avg 6.0000; ratio max 7/13
    let s = vec![
        CoeffStats {
            abs_sum: BigInt::from(7),
            max_abs: BigInt::from(2),
            span: 13,
        },
        CoeffStats {
            abs_sum: BigInt::from(5),
            max_abs: BigInt::from(1),
            span: 17,
        },
    ];
    let a = aggregate(&s);
    assert_eq!(a.avg_span.to_string(), "15.0000");
    assert_eq!(a.avg_abs_sum.to_string(), "6.0000");
    assert_eq!(a.max_avg_coeff.to_string(), "0.5384"); // 7/13 = 0.53846…
}

#[test]
fn quotients() {
    let q = successive_quotients(&[1.0, 2.0, 8.0]);
    assert_eq!(q, vec![2.0, 4.0]);
}
