use laurent::{BiLaurentPoly, Error, LaurentPoly};
use num_bigint::BigInt;

fn q(e: i64) -> LaurentPoly {
    LaurentPoly::monomial(e, 1, BigInt::from(1))
}

fn from_pairs(pairs: &[(i64, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(1, pairs.iter().map(|&(e, c)| (e, c)))
}

#[test]
fn binomial_square() {
    let b = q(1).add(&q(-1));
    let sq = b.mul(&b);
    assert_eq!(sq, from_pairs(&[(2, 1), (0, 2), (-2, 1)]));
}

#[test]
fn hopf_bracket_identity() {
    // q·(q+q⁻¹)² − 2(q+q⁻¹) + q⁻¹·(q+q⁻¹)² = q³+q+q⁻¹+q⁻³
    let b = q(1).add(&q(-1));
    let sq = b.mul(&b);
    let val = q(1)
        .mul(&sq)
        .sub(&b.scalar_mul(&BigInt::from(2)))
        .add(&q(-1).mul(&sq));
    assert_eq!(val, from_pairs(&[(3, 1), (1, 1), (-1, 1), (-3, 1)]));
}

#[test]
fn add_opposite_is_zero() {
    let p = from_pairs(&[(-2, 3), (5, -7)]);
    assert!(p.add(&p.neg()).is_zero());
}

#[test]
fn substitute_negates_exponents() {
    let p = from_pairs(&[(1, 1), (3, 1), (4, -1)]);
    assert_eq!(
        p.substitute(-1, 1),
        from_pairs(&[(-1, 1), (-3, 1), (-4, -1)])
    );
}

#[test]
fn trefoil_vector_descending_reading() {
    // Jones(trefoil) = −q⁻⁴+q⁻³+q⁻¹ at half-width 4 → [−1,1,0,1,0,0,0,0,0]
    let j = from_pairs(&[(-4, -1), (-3, 1), (-1, 1)]);
    let v = j.to_vector(4).unwrap();
    let got: Vec<i64> = v
        .entries()
        .iter()
        .map(|c| i64::try_from(c).unwrap())
        .collect();
    assert_eq!(got, vec![-1, 1, 0, 1, 0, 0, 0, 0, 0]);
    assert_eq!(v.to_poly(), j);
}

#[test]
fn figure_eight_vector() {
    let j = from_pairs(&[(-2, 1), (-1, -1), (0, 1), (1, -1), (2, 1)]);
    let v = j.to_vector(4).unwrap();
    let got: Vec<i64> = v
        .entries()
        .iter()
        .map(|c| i64::try_from(c).unwrap())
        .collect();
    assert_eq!(got, vec![0, 0, 1, -1, 1, -1, 1, 0, 0]);
}

#[test]
fn zero_vector() {
    let v = LaurentPoly::zero().to_vector(1).unwrap();
    assert!(v.entries().iter().all(|c| c == &BigInt::from(0)));
    assert_eq!(v.entries().len(), 3);
}

#[test]
fn vector_width_error() {
    let p = from_pairs(&[(5, 1)]);
    assert!(matches!(
        p.to_vector(4),
        Err(Error::SupportExceedsWidth {
            needed: 5,
            given: 4
        })
    ));
}

#[test]
fn coeff_stats_fixtures() {
    // Jones(trefoil): abs_sum 3, max_abs 1, span 4
    let j = from_pairs(&[(-4, -1), (-3, 1), (-1, 1)]);
    let s = j.coeff_stats();
    assert_eq!((s.abs_sum, s.max_abs, s.span), (3.into(), 1.into(), 4));
    // Alexander(trefoil) q⁻¹−1+q: abs_sum 3, max_abs 1, span 3
    let a = from_pairs(&[(-1, 1), (0, -1), (1, 1)]);
    let s = a.coeff_stats();
    assert_eq!((s.abs_sum, s.max_abs, s.span), (3.into(), 1.into(), 3));
    // constant 5
    let c = LaurentPoly::from_terms(1, [(0i64, 5i64)]);
    let s = c.coeff_stats();
    assert_eq!((s.abs_sum, s.max_abs, s.span), (5.into(), 5.into(), 1));
}

#[test]
fn stats_invariant_under_units_and_mirror() {
    let p = from_pairs(&[(-2, 4), (0, -3), (3, 1)]);
    let base = p.coeff_stats();
    for k in [-3i64, 0, 5] {
        for sign in [1i64, -1] {
            let m = p.mul_mono(k, 1).scalar_mul(&BigInt::from(sign));
            assert_eq!(m.coeff_stats(), base);
            assert_eq!(m.mirror_q().coeff_stats(), base);
        }
    }
}

#[test]
fn canonical_text_roundtrip() {
    let p = LaurentPoly::from_terms(2, [(-3i64, 7i64), (1, -2), (4, 9)]);
    let s = p.to_canonical_string();
    let back = LaurentPoly::from_canonical_str(&s).unwrap();
    assert_eq!(back, p);
    assert_eq!(back.to_canonical_string(), s);
}

#[test]
fn big_coefficients_roundtrip() {
    let big: BigInt = "123456789012345678901234567890".parse().unwrap();
    let p = LaurentPoly::from_terms(1, [(0i64, big.clone()), (2, -big.clone())]);
    let back = LaurentPoly::from_canonical_str(&p.to_canonical_string()).unwrap();
    assert_eq!(back, p);
}

#[test]
fn bilaurent_specializations() {
    // q⁻¹t⁻¹ + q + q³t: at t=1 → q⁻¹+q+q³; at t=−1 → −q⁻¹+q−q³
    let k = BiLaurentPoly::from_terms([((-1i64, -1i64), 1i64), ((1, 0), 1), ((3, 1), 1)]);
    assert_eq!(k.specialize_t(1), from_pairs(&[(-1, 1), (1, 1), (3, 1)]));
    assert_eq!(k.specialize_t(-1), from_pairs(&[(-1, -1), (1, 1), (3, -1)]));
    assert!(k.span().is_err());
    let s = k.to_cache_string();
    assert_eq!(BiLaurentPoly::from_cache_str(&s).unwrap(), k);
}

#[test]
fn arith_properties_small_random() {
    // deterministic pseudo-random commutativity/associativity/distributivity
    let mut seed = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        seed
    };
    let mut rand_poly = move || {
        let n = 1 + (next() % 4) as usize;
        LaurentPoly::from_terms(
            1 + (next() % 3) as i64,
            (0..n).map(|_| ((next() % 11) as i64 - 5, (next() % 9) as i64 - 4)),
        )
    };
    for _ in 0..50 {
        let (a, b, c) = (rand_poly(), rand_poly(), rand_poly());
        assert_eq!(a.add(&b), b.add(&a));
        assert_eq!(a.mul(&b), b.mul(&a));
        assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }
}
