//! Alexander polynomial engines.
//!
//! Primary path: Fox calculus on the Wirtinger presentation read off a PD
//! diagram.  Secondary path: `det(S - t·Sᵀ)` for a Seifert matrix `S`, with a
//! band construction of `S` from a braid word.  Both normalize to the
//! symmetric representative with `Δ(1) = +1`.

use knotdata::OrientedDiagram;
use laurent::LaurentPoly;
use num_bigint::BigInt;
use num_traits::{One, Signed};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The Wirtinger matrix was degenerate (malformed input).
    DegenerateMatrix,
    /// Determinant is not a unit at t=1; cannot normalize to Δ(1)=1.
    NotNormalizable,
    /// Normalized polynomial failed the symmetry (palindromicity) check.
    NotSymmetric,
}

impl std::fmt::Display for Error {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Error::DegenerateMatrix => write!(f, "degenerate Wirtinger matrix"),
            Error::NotNormalizable => write!(f, "determinant is not ±1 at t=1"),
            Error::NotSymmetric => write!(f, "polynomial is not palindromic"),
        }
    }
}

impl std::error::Error for Error {}

/// An integer Seifert matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeifertMatrix(pub Vec<Vec<i64>>);

impl SeifertMatrix {
    pub fn size(&self) -> usize {
        self.0.len()
    }
}

/// Alexander polynomial via Fox calculus on the Wirtinger presentation:
/// one relation row per crossing over the arc generators, first row and
/// column deleted, determinant taken, then symmetric Δ(1)=+1 normalization.
pub fn alexander_fox(d: &OrientedDiagram) -> Result<LaurentPoly, Error> {
    let (edge2arc, na) = arcs(d);
    let t = || LaurentPoly::monomial(1, 1, BigInt::one());
    let one = LaurentPoly::one;
    let mut rows: Vec<Vec<LaurentPoly>> = Vec::with_capacity(d.n());
    for (&(ui, uo, oi, _oo), &s) in d.strands().iter().zip(d.signs()) {
        let (u, v, o) = (
            edge2arc[ui as usize],
            edge2arc[uo as usize],
            edge2arc[oi as usize],
        );
        let mut row = vec![LaurentPoly::zero(); na];
        if s > 0 {
            row[o] = row[o].add(&one().sub(&t())); // 1 - t
            row[u] = row[u].add(&t());
            row[v] = row[v].sub(&one());
        } else {
            row[o] = row[o].add(&t().sub(&one())); // t - 1
            row[u] = row[u].add(&one());
            row[v] = row[v].sub(&t());
        }
        rows.push(row);
    }
    // delete generator 0's column and the first relation
    let reduced: Vec<Vec<LaurentPoly>> = rows
        .into_iter()
        .skip(1)
        .map(|r| r.into_iter().skip(1).collect())
        .collect();
    let det = determinant(reduced);
    normalize(&det)
}

/// `det(S - t·Sᵀ)` without normalization (the spec's raw determinant form).
pub fn seifert_det(s: &SeifertMatrix) -> LaurentPoly {
    let m = s.size();
    if m == 0 {
        return LaurentPoly::one();
    }
    let rows: Vec<Vec<LaurentPoly>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    LaurentPoly::from_terms(
                        1,
                        [
                            (0i64, BigInt::from(s.0[i][j])),
                            (1, BigInt::from(-s.0[j][i])),
                        ],
                    )
                })
                .collect()
        })
        .collect();
    determinant(rows)
}

/// Alexander polynomial from a Seifert matrix, symmetric Δ(1)=+1 normalized.
pub fn alexander_seifert(s: &SeifertMatrix) -> Result<LaurentPoly, Error> {
    normalize(&seifert_det(s))
}

/// Band-construction Seifert matrix of a braid-word closure.  Generators of
/// the homology basis are the "cycles" between consecutive occurrences of the
/// same braid generator; linking numbers follow a fixed convention calibrated
/// against the Fox-calculus engine.
pub fn seifert_from_braid(word: &[i32]) -> SeifertMatrix {
    // cycles[(gen, occurrence pair)] in order of generator then position
    let mut occ: std::collections::BTreeMap<i32, Vec<(usize, i32)>> = Default::default();
    for (pos, &g) in word.iter().enumerate() {
        occ.entry(g.abs()).or_default().push((pos, g.signum()));
    }
    let mut cycles: Vec<(i32, (usize, i32), (usize, i32))> = Vec::new();
    for (&gen, os) in &occ {
        for w in os.windows(2) {
            cycles.push((gen, w[0], w[1]));
        }
    }
    let m = cycles.len();
    let mut s = vec![vec![0i64; m]; m];
    for a in 0..m {
        let (gen, (p1, e1), (p2, e2)) = cycles[a];
        s[a][a] = match (e1, e2) {
            (1, 1) => -1,
            (-1, -1) => 1,
            _ => 0,
        };
        for b in 0..m {
            if a == b {
                continue;
            }
            let (gen2, (q1, f1), (q2, _f2)) = cycles[b];
            if gen2 == gen {
                // cycle b starts at the occurrence where cycle a ends
                if (q1, f1) == (p2, e2) {
                    if e2 == 1 {
                        s[a][b] = 1;
                        s[b][a] = 0;
                    } else {
                        s[a][b] = 0;
                        s[b][a] = -1;
                    }
                }
            } else if gen2 == gen + 1 {
                // adjacent generators: interleaving patterns
                if p1 < q1 && q1 < p2 && p2 < q2 {
                    s[a][b] = 1;
                    s[b][a] = 0;
                } else if q1 < p1 && p1 < q2 && q2 < p2 {
                    s[a][b] = -1;
                    s[b][a] = 0;
                }
            }
        }
    }
    SeifertMatrix(s)
}

/// Parse one `name;[g1,g2,...]` braid-word line.
pub fn parse_braid_line(line: &str) -> Option<(String, Vec<i32>)> {
    let t = line.trim();
    if t.is_empty() || t.starts_with('#') {
        return None;
    }
    let (name, rest) = t.split_once(';')?;
    let inner = rest.trim().strip_prefix('[')?.strip_suffix(']')?;
    let mut word = Vec::new();
    for part in inner.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        word.push(part.parse().ok()?);
    }
    Some((name.trim().to_string(), word))
}

/// Symmetric normalization: strip the monomial unit, require Δ(1) = ±1,
/// choose the sign with Δ(1) = +1, check palindromicity and center the
/// exponents.
pub fn normalize(p: &LaurentPoly) -> Result<LaurentPoly, Error> {
    if p.is_zero() {
        return Err(Error::DegenerateMatrix);
    }
    assert!(p.has_integer_exponents());
    let (lo, hi) = p.degree_range().unwrap();
    let s1 = p.eval_one();
    if !s1.abs().is_one() {
        return Err(Error::NotNormalizable);
    }
    let deg = hi - lo;
    if deg % 2 != 0 {
        return Err(Error::NotSymmetric);
    }
    let shift = -(lo + deg / 2);
    let centered = p.mul_mono(shift, 1).scalar_mul(&s1);
    if centered != centered.mirror_q() {
        return Err(Error::NotSymmetric);
    }
    Ok(centered)
}

/// Exact determinant by fraction-free Bareiss elimination over the Laurent
/// polynomial ring (divisions by previous pivots are exact).
pub fn determinant(mut m: Vec<Vec<LaurentPoly>>) -> LaurentPoly {
    let n = m.len();
    if n == 0 {
        return LaurentPoly::one();
    }
    debug_assert!(m.iter().all(|r| r.len() == n));
    let mut sign = 1i64;
    let mut prev = LaurentPoly::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return LaurentPoly::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num
                    .div_exact(&prev)
                    .expect("Bareiss division is exact over an integral domain");
            }
            m[i][k] = LaurentPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        det.neg()
    } else {
        det
    }
}

/// Brute-force cofactor-expansion determinant (test oracle).
pub fn determinant_cofactor(m: &[Vec<LaurentPoly>]) -> LaurentPoly {
    let n = m.len();
    if n == 0 {
        return LaurentPoly::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = LaurentPoly::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<LaurentPoly>> = (1..n)
            .map(|i| {
                (0..n)
                    .filter(|&c| c != j)
                    .map(|c| m[i][c].clone())
                    .collect()
            })
            .collect();
        let term = m[0][j].mul(&determinant_cofactor(&minor));
        acc = if j % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    acc
}

/// Arc labels: arcs run from one under-crossing to the next.  Returns
/// `edge -> arc index` (1-based edge labels; index 0 unused) and arc count.
fn arcs(d: &OrientedDiagram) -> (Vec<usize>, usize) {
    let m = 2 * d.n();
    let mut under_in = vec![false; m + 1];
    for &(ui, _, _, _) in d.strands() {
        under_in[ui as usize] = true;
    }
    let starts: Vec<u32> = (1..=m as u32)
        .filter(|&e| under_in[e as usize])
        .map(|e| d.successor(e))
        .collect();
    let mut edge2arc = vec![usize::MAX; m + 1];
    for (a, &s) in starts.iter().enumerate() {
        let mut e = s;
        loop {
            edge2arc[e as usize] = a;
            if under_in[e as usize] {
                break;
            }
            e = d.successor(e);
        }
    }
    debug_assert!(edge2arc[1..].iter().all(|&a| a != usize::MAX));
    (edge2arc, starts.len())
}
