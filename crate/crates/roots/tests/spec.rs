use laurent::LaurentPoly;
use num_complex::Complex64;
use roots::{classify, normalize_for_roots, DensityGrid, Solver, PURE_TOL};

fn poly(pairs: &[(i64, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(1, pairs.iter().copied())
}

fn solve(pairs: &[(i64, i64)]) -> Vec<Complex64> {
    let rs = Solver::default().roots(&poly(pairs)).unwrap();
    assert_eq!(rs.rejected, 0, "unexpected rejected roots");
    rs.roots
}

#[test]
fn normalization_strips_the_unit() {
    let p = poly(&[(-1, 1), (0, -1), (1, 1)]);
    assert_eq!(normalize_for_roots(&p).unwrap(), vec![1.0, -1.0, 1.0]);
    assert!(normalize_for_roots(&LaurentPoly::zero()).is_err());
    // constants have no roots
    let rs = Solver::default().roots(&LaurentPoly::one()).unwrap();
    assert!(rs.roots.is_empty());
}

#[test]
fn trefoil_alexander_roots_are_sixth_roots_of_unity() {
    // 1 - t + t²: roots e^{±iπ/3}
    let roots = solve(&[(-1, 1), (0, -1), (1, 1)]);
    assert_eq!(roots.len(), 2);
    for z in &roots {
        assert!((z.norm() - 1.0).abs() < 1e-10);
        assert!((z.re - 0.5).abs() < 1e-10);
    }
    let c = classify(&roots, PURE_TOL);
    assert_eq!(c.pure, 0);
    assert_eq!(c.annulus, 2);
    assert!((c.max_abs - 1.0).abs() < 1e-10);
    assert_eq!(c.max_abs_pure, None);
}

#[test]
fn figure_eight_alexander_max_root_is_golden() {
    // -1 + 3t - t²: roots (3±√5)/2, both real
    let roots = solve(&[(-1, -1), (0, 3), (1, -1)]);
    let c = classify(&roots, PURE_TOL);
    assert_eq!(c.pure, 2);
    assert_eq!(c.annulus, 0);
    let phi2 = (3.0 + 5.0f64.sqrt()) / 2.0;
    assert!((c.max_abs - phi2).abs() < 1e-9);
    assert!((c.max_abs_pure.unwrap() - phi2).abs() < 1e-9);
    // floor to four decimals gives the published value
    assert_eq!((c.max_abs * 1e4).floor() as i64, 26180);
}

#[test]
fn imaginary_axis_roots_are_pure() {
    // 1 + q²: roots ±i
    let roots = solve(&[(-1, 1), (1, 1)]);
    let c = classify(&roots, PURE_TOL);
    assert_eq!(c.pure, 2);
    assert_eq!(c.annulus, 2);
}

#[test]
fn multiplicity_is_preserved() {
    // (q-1)⁴ = q⁴ - 4q³ + 6q² - 4q + 1
    let roots = solve(&[(0, 1), (1, -4), (2, 6), (3, -4), (4, 1)]);
    assert_eq!(roots.len(), 4);
    for z in &roots {
        assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-3);
    }
}

#[test]
fn real_polynomials_have_conjugate_root_pairs() {
    let mut seed = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        (seed % 11) as i64 - 5
    };
    for _ in 0..20 {
        let mut pairs: Vec<(i64, i64)> = (0..6).map(|e| (e, next())).collect();
        pairs.push((6, 1)); // force degree 6
        if pairs[0].1 == 0 {
            pairs[0].1 = 1;
        }
        let roots = {
            let rs = Solver::default().roots(&poly(&pairs)).unwrap();
            rs.roots
        };
        for z in &roots {
            if z.im.abs() > 1e-7 {
                let conj = Complex64::new(z.re, -z.im);
                let found = roots
                    .iter()
                    .any(|w| (w - conj).norm() < 1e-6 * (1.0 + z.norm()));
                assert!(found, "no conjugate for {z} in {roots:?} of {pairs:?}");
            }
        }
    }
}

#[test]
fn mirror_roots_are_inverses() {
    // roots of the exponent-reversed polynomial are the inverses
    let p = [(0i64, 2i64), (1, -3), (2, 1), (3, 5)];
    let rev: Vec<(i64, i64)> = p.iter().map(|&(e, c)| (3 - e, c)).collect();
    let r1 = solve(&p);
    let r2 = solve(&rev);
    for z in &r1 {
        let inv = z.finv();
        let found = r2
            .iter()
            .any(|w| (w - inv).norm() < 1e-6 * (1.0 + inv.norm()));
        assert!(found, "no inverse partner for {z}");
    }
}

#[test]
fn product_roots_against_factor_oracle() {
    // (q² - 3q + 1)(q² + 1): roots are the union of the factors' roots
    let f1 = poly(&[(0, 1), (1, -3), (2, 1)]);
    let f2 = poly(&[(0, 1), (2, 1)]);
    let prod = f1.mul(&f2);
    let rs = Solver::default().roots(&prod).unwrap();
    assert_eq!(rs.roots.len(), 4);
    let mut expected = Vec::new();
    expected.extend(Solver::default().roots(&f1).unwrap().roots);
    expected.extend(Solver::default().roots(&f2).unwrap().roots);
    for e in &expected {
        assert!(
            rs.roots
                .iter()
                .any(|z| (z - e).norm() < 1e-8 * (1.0 + e.norm())),
            "missing root {e}"
        );
    }
}

#[test]
fn density_grid_accumulates_and_exports() {
    let roots = vec![
        Complex64::new(0.5, 0.5),
        Complex64::new(-0.5, -0.5),
        Complex64::new(0.5, 0.5),
    ];
    assert!((DensityGrid::auto_bound(&roots) - 0.525).abs() < 1e-12);
    let mut g = DensityGrid::new(4, 1.0);
    g.accumulate(&roots);
    assert_eq!(g.counts.iter().sum::<u64>(), 3);
    // (0.5, 0.5) lands twice in the same cell
    assert_eq!(g.counts.iter().copied().max().unwrap(), 2);
    let pgm = g.to_pgm();
    assert!(pgm.starts_with(b"P5\n4 4\n255\n"));
    assert_eq!(pgm.len(), 11 + 16);
    let csv = g.to_csv();
    assert!(csv.starts_with("row,col,count\n"));
    assert_eq!(csv.lines().count(), 3); // header + 2 occupied cells
                                        // out-of-bounds roots are dropped, not wrapped
    let mut h = DensityGrid::new(4, 0.25);
    h.accumulate(&roots);
    assert_eq!(h.counts.iter().sum::<u64>(), 0);
}

#[test]
fn census_alexander_roots_have_unit_products() {
    // Δ(t) has Δ(1)=1 and symmetric coefficients, so the product of all
    // roots of the stripped polynomial has modulus 1
    use std::io::BufReader;
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/knots.txt");
    let table = knotdata::ingest_list(BufReader::new(std::fs::File::open(path).unwrap()), Some(7));
    for d in table.knots {
        let a = alexander::alexander_fox(&d.orient().unwrap()).unwrap();
        let rs = Solver::default().roots(&a).unwrap();
        assert_eq!(rs.rejected, 0, "rejected roots on {}", d.id());
        let prod: f64 = rs.roots.iter().map(|z| z.norm()).product();
        assert!(
            (prod - 1.0).abs() < 1e-6,
            "root product {prod} on {}",
            d.id()
        );
    }
}
