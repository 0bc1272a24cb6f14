use alexander::{
    alexander_fox, alexander_seifert, determinant, determinant_cofactor, normalize,
    parse_braid_line, seifert_det, seifert_from_braid, SeifertMatrix,
};
use knotdata::{ingest_list, parse_pd};
use laurent::LaurentPoly;
use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};

const TREFOIL: &str = "PD[X[1,5,2,4],X[3,1,4,6],X[5,3,6,2]]";
const FIG8: &str = "PD[X[4,2,5,1],X[8,6,1,5],X[6,3,7,4],X[2,7,3,8]]";

fn poly(pairs: &[(i64, i64)]) -> LaurentPoly {
    LaurentPoly::from_terms(1, pairs.iter().copied())
}

fn data_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

#[test]
fn trefoil_fox() {
    let d = parse_pd("3_1", TREFOIL).unwrap().orient().unwrap();
    assert_eq!(
        alexander_fox(&d).unwrap(),
        poly(&[(-1, 1), (0, -1), (1, 1)])
    );
}

#[test]
fn figure_eight_fox() {
    let d = parse_pd("4_1", FIG8).unwrap().orient().unwrap();
    assert_eq!(
        alexander_fox(&d).unwrap(),
        poly(&[(-1, -1), (0, 3), (1, -1)])
    );
}

#[test]
fn kink_fox_is_one() {
    let d = parse_pd("kink", "PD[X[1,1,2,2]]")
        .unwrap()
        .orient()
        .unwrap();
    assert_eq!(alexander_fox(&d).unwrap(), LaurentPoly::one());
}

#[test]
fn seifert_trefoil_matrix() {
    let s = SeifertMatrix(vec![vec![1, 0], vec![-1, 1]]);
    // raw determinant is 1 - t + t² up to the convention; normalized form is
    // the symmetric representative
    let raw = seifert_det(&s);
    assert_eq!(raw.eval_one().to_string(), "1");
    assert_eq!(
        alexander_seifert(&s).unwrap(),
        poly(&[(-1, 1), (0, -1), (1, 1)])
    );
}

#[test]
fn seifert_empty_is_unknot() {
    let s = SeifertMatrix(vec![]);
    assert_eq!(alexander_seifert(&s).unwrap(), LaurentPoly::one());
}

#[test]
fn bareiss_matches_cofactor_oracle() {
    let mut seed = 0xdeadbeefu64;
    let mut next = move || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        seed
    };
    for _ in 0..20 {
        for dim in [2usize, 3, 4] {
            let m: Vec<Vec<LaurentPoly>> = (0..dim)
                .map(|_| {
                    (0..dim)
                        .map(|_| {
                            poly(&[(0, (next() % 7) as i64 - 3), (1, (next() % 7) as i64 - 3)])
                        })
                        .collect()
                })
                .collect();
            assert_eq!(determinant(m.clone()), determinant_cofactor(&m));
        }
    }
}

#[test]
fn random_seifert_det_is_cofactor_det() {
    let s = SeifertMatrix(vec![vec![2, -1], vec![3, 0]]);
    let m: Vec<Vec<LaurentPoly>> = (0..2)
        .map(|i| {
            (0..2)
                .map(|j| poly(&[(0, s.0[i][j]), (1, -s.0[j][i])]))
                .collect()
        })
        .collect();
    assert_eq!(seifert_det(&s), determinant_cofactor(&m));
}

fn census(max_n: usize) -> Vec<knotdata::Diagram> {
    let table = ingest_list(
        BufReader::new(File::open(data_path("knots.txt")).unwrap()),
        Some(max_n),
    );
    table.knots
}

#[test]
fn census_properties_n8() {
    for d in census(8) {
        let o = d.orient().unwrap();
        let a = alexander_fox(&o).unwrap();
        assert_eq!(a.eval_one().to_string(), "1", "Δ(1)=1 on {}", d.id());
        assert_eq!(a, a.mirror_q(), "symmetry on {}", d.id());
        let am = alexander_fox(&d.mirror().orient().unwrap()).unwrap();
        assert_eq!(am, a, "mirror invariance on {}", d.id());
    }
}

#[test]
fn fox_equals_seifert_construction_n9() {
    let fox: HashMap<String, LaurentPoly> = census(9)
        .iter()
        .map(|d| {
            (
                d.id().to_string(),
                alexander_fox(&d.orient().unwrap()).unwrap(),
            )
        })
        .collect();
    let f = File::open(data_path("braids.txt")).unwrap();
    let mut checked = 0usize;
    for line in BufReader::new(f).lines() {
        let Some((name, word)) = parse_braid_line(&line.unwrap()) else {
            continue;
        };
        let Some(expect) = fox.get(&name) else {
            continue;
        };
        let s = seifert_from_braid(&word);
        // Seifert matrix is at most n×n for an n-crossing braid word
        assert!(s.size() <= word.len());
        let a = alexander_seifert(&s).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(&a, expect, "Fox vs Seifert mismatch on {name}");
        checked += 1;
    }
    assert_eq!(checked, 84, "all 84 knots with ≤9 crossings checked");
}

#[test]
fn braid_line_parser() {
    assert_eq!(
        parse_braid_line("3_1;[-1,-1,-1]"),
        Some(("3_1".into(), vec![-1, -1, -1]))
    );
    assert_eq!(parse_braid_line("# comment"), None);
    assert_eq!(parse_braid_line(""), None);
}

#[test]
fn normalize_rejects_non_units() {
    // Δ(1) = 2 cannot be normalized
    let p = poly(&[(0, 2)]);
    assert!(normalize(&p).is_err());
}
