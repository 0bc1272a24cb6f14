//! Khovanov homology over Q via the cube of resolutions.
//!
//! For each vertex of the cube the diagram is smoothed (bit 0 = the oriented
//! smoothing of a positive crossing; for negative crossings bit 1 is the
//! oriented one) and circles are labelled by the Frobenius algebra basis
//! {1, x}.  The differential merges with `m(1,1)=1, m(1,x)=m(x,1)=x,
//! m(x,x)=0` and splits with `Δ(1)=1⊗x+x⊗1, Δ(x)=x⊗x`, with the usual
//! `(−1)^{#1-bits below}` sign.  Gradings: homological `i = r − n₋` and
//! quantum `j = deg + r + n₊ − 2n₋`.
//!
//! Ranks of the graded differentials are computed by sparse Gaussian
//! elimination over `F_p` with `p = 2⁶¹ − 1`; an exact rational-rank
//! cross-check is exposed for tests.  Over a field this size a rank drop
//! against Q would require a determinant divisible by p, which does not occur
//! for the tiny integer entries of these complexes (the test suite verifies
//! exactness on the small census).

use knotdata::OrientedDiagram;
use laurent::{BiLaurentPoly, LaurentPoly};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, HashMap};

const P: u64 = (1 << 61) - 1;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Diagram exceeds the configured crossing limit for the cube.
    TooManyCrossings { n: usize, limit: usize },
}

impl std::fmt::Display for Error {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Error::TooManyCrossings { n, limit } => {
                write!(f, "diagram has {n} crossings, cube limit is {limit}")
            }
        }
    }
}

impl std::error::Error for Error {}

/// Default crossing limit: the 2ⁿ cube is exponential, and census work never
/// needs more than this.
pub const DEFAULT_MAX_CROSSINGS: usize = 14;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn powmod(mut b: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b);
        }
        b = mulmod(b, b);
        e >>= 1;
    }
    acc
}

/// Rank over `F_p` of a sparse matrix given as columns (`row -> value`).
pub fn rank_mod_p(cols: &[HashMap<u32, u64>]) -> usize {
    let mut pivots: HashMap<u32, HashMap<u32, u64>> = HashMap::new();
    let mut rank = 0usize;
    for col in cols {
        let mut col: HashMap<u32, u64> = col.clone();
        while !col.is_empty() {
            let r = *col.keys().max().unwrap();
            if let Some(piv) = pivots.get(&r) {
                let f = col[&r];
                for (&rr, &vv) in piv {
                    let cur = col.get(&rr).copied().unwrap_or(0);
                    let nv = (cur + P - mulmod(f, vv)) % P;
                    if nv == 0 {
                        col.remove(&rr);
                    } else {
                        col.insert(rr, nv);
                    }
                }
            } else {
                let inv = powmod(col[&r], P - 2);
                let piv: HashMap<u32, u64> =
                    col.iter().map(|(&rr, &vv)| (rr, mulmod(vv, inv))).collect();
                pivots.insert(r, piv);
                rank += 1;
                break;
            }
        }
    }
    rank
}

/// Exact rank over Q by dense fraction-free elimination (test oracle; only
/// suitable for small matrices).
pub fn rank_exact(cols: &[HashMap<u32, u64>], nrows: usize) -> usize {
    let ncols = cols.len();
    let mut m: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); ncols]; nrows];
    for (c, col) in cols.iter().enumerate() {
        for (&r, &v) in col {
            // entries of the Khovanov differential are ±1; recover the sign
            let signed = if v > P / 2 {
                BigInt::from(v as i128 - P as i128)
            } else {
                BigInt::from(v)
            };
            m[r as usize][c] = signed;
        }
    }
    let mut rank = 0usize;
    let mut row = 0usize;
    for col in 0..ncols {
        let Some(piv) = (row..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, piv);
        for r in row + 1..nrows {
            if m[r][col].is_zero() {
                continue;
            }
            let (a, b) = (m[row][col].clone(), m[r][col].clone());
            for c in col..ncols {
                m[r][c] = &m[r][c] * &a - &m[row][c] * &b;
            }
        }
        row += 1;
        rank += 1;
        if row == nrows {
            break;
        }
    }
    rank
}

/// Circle structure at a cube vertex: per-slot circle index and circle count.
struct Resolution {
    cmap: Vec<u8>,
    nc: u8,
}

fn resolve_all(d: &OrientedDiagram) -> Vec<Resolution> {
    let n = d.n();
    let crossings = d.base().crossings();
    // edge occurrences: each edge label appears in exactly two slots
    let mut occ: HashMap<u32, Vec<usize>> = HashMap::new();
    for (c, x) in crossings.iter().enumerate() {
        for (s, &e) in x.slots().iter().enumerate() {
            occ.entry(e).or_default().push(4 * c + s);
        }
    }
    let edge_pairs: Vec<(usize, usize)> = occ.values().map(|v| (v[0], v[1])).collect();
    let signs = d.signs();
    (0u32..1 << n)
        .map(|res| {
            let mut dsu: Vec<usize> = (0..4 * n).collect();
            fn find(dsu: &mut [usize], mut x: usize) -> usize {
                while dsu[x] != x {
                    dsu[x] = dsu[dsu[x]];
                    x = dsu[x];
                }
                x
            }
            let union = |dsu: &mut [usize], a: usize, b: usize| {
                let (ra, rb) = (find(dsu, a), find(dsu, b));
                dsu[ra] = rb;
            };
            for &(a, b) in &edge_pairs {
                union(&mut dsu, a, b);
            }
            for c in 0..n {
                let bit = (res >> c) & 1;
                let oriented = if signs[c] > 0 { bit == 0 } else { bit == 1 };
                if (signs[c] > 0) == oriented {
                    union(&mut dsu, 4 * c, 4 * c + 3);
                    union(&mut dsu, 4 * c + 1, 4 * c + 2);
                } else {
                    union(&mut dsu, 4 * c, 4 * c + 1);
                    union(&mut dsu, 4 * c + 2, 4 * c + 3);
                }
            }
            let mut reps: BTreeMap<usize, u8> = BTreeMap::new();
            let mut cmap = vec![0u8; 4 * n];
            for slot in 0..4 * n {
                let r = find(&mut dsu, slot);
                let next = reps.len() as u8;
                let idx = *reps.entry(r).or_insert(next);
                cmap[slot] = idx;
            }
            Resolution {
                cmap,
                nc: reps.len() as u8,
            }
        })
        .collect()
}

/// Rational Betti numbers `(i, j) -> rank` of the Khovanov complex.
pub fn betti(
    d: &OrientedDiagram,
    max_crossings: usize,
) -> Result<BTreeMap<(i64, i64), u64>, Error> {
    let n = d.n();
    if n > max_crossings {
        return Err(Error::TooManyCrossings {
            n,
            limit: max_crossings,
        });
    }
    let (npos, nneg) = d.signed_counts();
    let verts = resolve_all(d);
    // enumerate states grouped by (i, j); index within each group
    let mut groups: HashMap<(i64, i64), Vec<(u32, u32)>> = HashMap::new();
    let mut index: HashMap<(u32, u32), u32> = HashMap::new();
    for (res, v) in verts.iter().enumerate() {
        let res = res as u32;
        let r = res.count_ones() as i64;
        for lab in 0u32..1 << v.nc {
            let xs = lab.count_ones() as i64;
            let deg = (v.nc as i64 - xs) - xs;
            let i = r - nneg as i64;
            let j = deg + r + npos as i64 - 2 * nneg as i64;
            let g = groups.entry((i, j)).or_default();
            index.insert((res, lab), g.len() as u32);
            g.push((res, lab));
        }
    }
    let mut matranks: HashMap<(i64, i64), usize> = HashMap::new();
    for (&(i, j), g) in &groups {
        let cols: Vec<HashMap<u32, u64>> = g
            .iter()
            .map(|&(res, lab)| {
                let mut col: HashMap<u32, u64> = HashMap::new();
                for (res2, lab2, sgn) in differential(d, &verts, res, lab) {
                    let row = index[&(res2, lab2)];
                    let e = col.entry(row).or_insert(0);
                    *e = (*e + if sgn > 0 { 1 } else { P - 1 }) % P;
                }
                col.retain(|_, v| *v != 0);
                col
            })
            .collect();
        matranks.insert((i, j), rank_mod_p(&cols));
    }
    let mut betti = BTreeMap::new();
    for (&(i, j), g) in &groups {
        let dim = g.len();
        let b = dim
            - matranks.get(&(i, j)).copied().unwrap_or(0)
            - matranks.get(&(i - 1, j)).copied().unwrap_or(0);
        if b > 0 {
            betti.insert((i, j), b as u64);
        }
    }
    Ok(betti)
}

/// Image states of the cube differential on one state, with signs.
fn differential(
    d: &OrientedDiagram,
    verts: &[Resolution],
    res: u32,
    lab: u32,
) -> Vec<(u32, u32, i64)> {
    let n = d.n();
    let mut out = Vec::new();
    let v = &verts[res as usize];
    for c in 0..n {
        if (res >> c) & 1 == 1 {
            continue;
        }
        let below = (res & ((1u32 << c) - 1)).count_ones();
        let sgn = if below % 2 == 0 { 1 } else { -1 };
        let res2 = res | (1 << c);
        let v2 = &verts[res2 as usize];
        if v2.nc == v.nc - 1 {
            // merge: find the two old circles mapping to one new circle
            let mut o2n = vec![u8::MAX; v.nc as usize];
            for slot in 0..4 * n {
                o2n[v.cmap[slot] as usize] = v2.cmap[slot];
            }
            let mut tgt_count = vec![0u8; v2.nc as usize];
            for &nw in &o2n {
                tgt_count[nw as usize] += 1;
            }
            let merged = tgt_count.iter().position(|&k| k == 2).unwrap() as u8;
            let (mut va, mut vb) = (u32::MAX, u32::MAX);
            for (o, &nw) in o2n.iter().enumerate() {
                if nw == merged {
                    let bit = (lab >> o) & 1;
                    if va == u32::MAX {
                        va = bit;
                    } else {
                        vb = bit;
                    }
                }
            }
            if va == 1 && vb == 1 {
                continue; // x·x = 0
            }
            let newval = if va == 1 || vb == 1 { 1u32 } else { 0 };
            let mut lab2 = 0u32;
            for (o, &nw) in o2n.iter().enumerate() {
                if nw != merged {
                    lab2 |= ((lab >> o) & 1) << nw;
                }
            }
            lab2 |= newval << merged;
            out.push((res2, lab2, sgn));
        } else {
            debug_assert_eq!(v2.nc, v.nc + 1);
            // split: one old circle maps to two new circles
            let mut n2o = vec![u8::MAX; v2.nc as usize];
            for slot in 0..4 * n {
                n2o[v2.cmap[slot] as usize] = v.cmap[slot];
            }
            let mut src_count = vec![0u8; v.nc as usize];
            for &o in &n2o {
                src_count[o as usize] += 1;
            }
            let split_old = src_count.iter().position(|&k| k == 2).unwrap() as u8;
            let (mut c1, mut c2) = (u8::MAX, u8::MAX);
            let mut base = 0u32;
            for (nw, &o) in n2o.iter().enumerate() {
                if o == split_old {
                    if c1 == u8::MAX {
                        c1 = nw as u8;
                    } else {
                        c2 = nw as u8;
                    }
                } else {
                    base |= ((lab >> o) & 1) << nw;
                }
            }
            if (lab >> split_old) & 1 == 0 {
                // Δ(1) = 1⊗x + x⊗1
                out.push((res2, base | (1 << c2), sgn));
                out.push((res2, base | (1 << c1), sgn));
            } else {
                // Δ(x) = x⊗x
                out.push((res2, base | (1 << c1) | (1 << c2), sgn));
            }
        }
    }
    out
}

/// Verify `d∘d = 0` on the whole cube complex by composing the differential
/// twice from every state and checking that all signed contributions cancel.
pub fn d_squared_is_zero(d: &OrientedDiagram, max_crossings: usize) -> Result<bool, Error> {
    let n = d.n();
    if n > max_crossings {
        return Err(Error::TooManyCrossings {
            n,
            limit: max_crossings,
        });
    }
    let verts = resolve_all(d);
    for (res, v) in verts.iter().enumerate() {
        let res = res as u32;
        for lab in 0u32..1 << v.nc {
            let mut acc: HashMap<(u32, u32), i64> = HashMap::new();
            for (r2, l2, s2) in differential(d, &verts, res, lab) {
                for (r3, l3, s3) in differential(d, &verts, r2, l2) {
                    *acc.entry((r3, l3)).or_insert(0) += s2 * s3;
                }
            }
            if acc.values().any(|&c| c != 0) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Poincaré polynomial `Σ bᵢⱼ tⁱ qʲ` of the Khovanov homology.
pub fn khovanov(d: &OrientedDiagram, max_crossings: usize) -> Result<BiLaurentPoly, Error> {
    let b = betti(d, max_crossings)?;
    Ok(BiLaurentPoly::from_terms(
        b.into_iter().map(|((i, j), r)| ((j, i), BigInt::from(r))),
    ))
}

/// Graded total rank `P(q, t=1)`.
pub fn kt1(p: &BiLaurentPoly) -> LaurentPoly {
    p.specialize_t(1)
}

/// Graded Euler characteristic `P(q, t=−1)`; equals `(q+q⁻¹)·J(q²)`.
pub fn euler(p: &BiLaurentPoly) -> LaurentPoly {
    p.specialize_t(-1)
}

/// Sum of absolute coefficient values of a univariate polynomial (the "K" and
/// "KT1" columns share this by positivity of the Betti numbers).
pub fn abs_sum(p: &LaurentPoly) -> BigInt {
    p.iter().map(|(_, c)| c.abs()).sum()
}
