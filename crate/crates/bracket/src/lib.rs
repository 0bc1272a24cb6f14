//! Kauffman-bracket state-sum engine and the normalized Jones polynomial.
//!
//! Internally the state sum runs in the variable `u = q^(1/2)`: a crossing of
//! sign `s` contributes `u^(-s)` for its orientation-compatible smoothing and
//! `u^(+s)` for the other one, and every closed circle contributes
//! `-(q + q^(-1))`.  The writhe correction multiplies by `(-1)^w u^(3w)`;
//! after dividing out one circle factor the exponents are divisible by four
//! and collapse onto the integer-exponent Jones polynomial with `J(unknot)=1`.
//!
//! Two evaluation strategies are provided: the naive `2^n` enumeration and a
//! tangle-contraction order that absorbs one crossing at a time, keeping a
//! weighted set of boundary matchings.  They agree everywhere both run.

use knotdata::{Diagram, OrientedDiagram};
use laurent::LaurentPoly;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::{BTreeMap, HashMap};

/// Number of closed circles after smoothing every crossing according to the
/// bitmask `res` (bit `c` = 1 selects the smoothing pairing slots (0,3),(1,2);
/// bit 0 selects (0,1),(2,3)).
pub fn count_circles(d: &Diagram, res: u64) -> usize {
    let n = d.n();
    let mut dsu = Dsu::new(4 * n);
    let mut occ: HashMap<u32, usize> = HashMap::new();
    for (ci, c) in d.crossings().iter().enumerate() {
        for (si, &e) in c.slots().iter().enumerate() {
            let slot = 4 * ci + si;
            if let Some(&other) = occ.get(&e) {
                dsu.union(slot, other);
            } else {
                occ.insert(e, slot);
            }
        }
    }
    for ci in 0..n {
        if (res >> ci) & 1 == 0 {
            dsu.union(4 * ci, 4 * ci + 1);
            dsu.union(4 * ci + 2, 4 * ci + 3);
        } else {
            dsu.union(4 * ci, 4 * ci + 3);
            dsu.union(4 * ci + 1, 4 * ci + 2);
        }
    }
    let mut roots: Vec<usize> = (0..4 * n).map(|s| dsu.find(s)).collect();
    roots.sort_unstable();
    roots.dedup();
    roots.len()
}

/// The raw bracket state sum over all `2^n` resolutions, for explicit crossing
/// signs.  Exposed separately from [`bracket`] so that multi-component
/// worked examples (e.g. the Hopf link) can be evaluated too.
pub fn bracket_with_signs(d: &Diagram, signs: &[i8]) -> LaurentPoly {
    assert_eq!(signs.len(), d.n());
    let terms = bracket_terms_enumerated(d, signs, None).expect("no deadline");
    // u-exponent k means q^(k/2)
    LaurentPoly::from_terms(2, terms)
}

/// Kauffman bracket of an oriented diagram (no writhe correction), in
/// half-integer powers of `q`.
pub fn bracket(d: &OrientedDiagram) -> LaurentPoly {
    bracket_with_signs(d.base(), d.signs())
}

/// Evaluation backend for the state sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// Enumerate all `2^n` resolutions.
    Enumerate,
    /// Absorb crossings one at a time, tracking boundary matchings.
    Contract,
    /// Enumerate up to 20 crossings, contract beyond.
    Auto,
}

/// Writhe-corrected, unknot-normalized Jones polynomial with integer
/// exponents; `J(unknot) = 1`.
pub fn jones(d: &OrientedDiagram) -> LaurentPoly {
    jones_with(d, Strategy::Auto, None).expect("no deadline")
}

/// [`jones`] with an explicit strategy and an optional cooperative deadline.
pub fn jones_with(
    d: &OrientedDiagram,
    strategy: Strategy,
    deadline: Option<std::time::Instant>,
) -> Result<LaurentPoly, Timeout> {
    let n = d.n();
    let use_contract = match strategy {
        Strategy::Enumerate => false,
        Strategy::Contract => true,
        Strategy::Auto => n > 20,
    };
    let terms = if use_contract {
        bracket_terms_contracted(d.base(), d.signs(), deadline)?
    } else {
        bracket_terms_enumerated(d.base(), d.signs(), deadline)?
    };
    Ok(normalize_jones(terms, d.writhe()))
}

/// Cooperative timeout marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Timeout;

impl std::fmt::Display for Timeout {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "computation exceeded its deadline")
    }
}

impl std::error::Error for Timeout {}

fn normalize_jones(total: BTreeMap<i64, BigInt>, writhe: i64) -> LaurentPoly {
    // multiply by (-1)^w u^(3w)
    let sign = if writhe.rem_euclid(2) == 1 { -1i64 } else { 1 };
    let mut shifted: BTreeMap<i64, BigInt> = total
        .into_iter()
        .map(|(e, c)| (e + 3 * writhe, c * sign))
        .collect();
    shifted.retain(|_, c| !c.is_zero());
    // divide by the circle value -(u^2 + u^-2), from the top
    let mut quo: BTreeMap<i64, BigInt> = BTreeMap::new();
    while let Some((&top, _)) = shifted.iter().next_back() {
        let qe = top - 2;
        let qv = -shifted.get(&top).unwrap().clone();
        *quo.entry(qe).or_insert_with(BigInt::zero) += &qv;
        for de in [2i64, -2] {
            let slot = shifted.entry(qe + de).or_insert_with(BigInt::zero);
            *slot += &qv;
        }
        shifted.retain(|_, c| !c.is_zero());
    }
    quo.retain(|_, c| !c.is_zero());
    assert!(
        quo.keys().all(|e| e % 4 == 0),
        "normalized Jones must have exponents divisible by 4 in u"
    );
    LaurentPoly::from_terms(1, quo.into_iter().map(|(e, c)| (e / 4, c)))
}

/// Per-crossing u-exponent of a resolution choice.
fn crossing_weight(sign: i8, res_bit: bool) -> i64 {
    // the orientation-compatible smoothing is bit 1 for positive crossings
    // and bit 0 for negative ones
    let oriented = if sign > 0 { res_bit } else { !res_bit };
    if oriented {
        -(sign as i64)
    } else {
        sign as i64
    }
}

fn check_deadline(deadline: Option<std::time::Instant>) -> Result<(), Timeout> {
    if let Some(dl) = deadline {
        if std::time::Instant::now() > dl {
            return Err(Timeout);
        }
    }
    Ok(())
}

fn bracket_terms_enumerated(
    d: &Diagram,
    signs: &[i8],
    deadline: Option<std::time::Instant>,
) -> Result<BTreeMap<i64, BigInt>, Timeout> {
    let n = d.n();
    assert!(n <= 30, "naive enumeration limited to 30 crossings");
    let mut total: BTreeMap<i64, BigInt> = BTreeMap::new();
    let mut binom_cache: Vec<Vec<BigInt>> = Vec::new();
    for res in 0u64..(1u64 << n) {
        if res % 4096 == 0 {
            check_deadline(deadline)?;
        }
        let c = count_circles(d, res);
        let mut uexp = 0i64;
        for ci in 0..n {
            uexp += crossing_weight(signs[ci], (res >> ci) & 1 == 1);
        }
        // (-(u^2+u^-2))^c expanded binomially
        while binom_cache.len() <= c {
            let row = binom_row(binom_cache.len());
            binom_cache.push(row);
        }
        let sign = if c % 2 == 1 { -1i64 } else { 1 };
        for (k, b) in binom_cache[c].iter().enumerate() {
            let e = uexp + 2 * (k as i64) - 2 * ((c - k) as i64);
            let slot = total.entry(e).or_insert_with(BigInt::zero);
            *slot += b * sign;
        }
    }
    total.retain(|_, c| !c.is_zero());
    Ok(total)
}

fn binom_row(c: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 0..c {
        let next = &row[k] * (c - k) / (k + 1);
        row.push(next);
    }
    row
}

/// Tangle-contraction evaluation: crossings are absorbed one at a time in a
/// greedy order minimizing the open boundary; the state is a weighted set of
/// perfect matchings on the dangling edge endpoints.
fn bracket_terms_contracted(
    d: &Diagram,
    signs: &[i8],
    deadline: Option<std::time::Instant>,
) -> Result<BTreeMap<i64, BigInt>, Timeout> {
    let n = d.n();
    // mate[slot] = the other occurrence of the same edge label
    let mut occ: HashMap<u32, usize> = HashMap::new();
    let mut mate = vec![usize::MAX; 4 * n];
    for (ci, c) in d.crossings().iter().enumerate() {
        for (si, &e) in c.slots().iter().enumerate() {
            let slot = 4 * ci + si;
            if let Some(other) = occ.remove(&e) {
                mate[slot] = other;
                mate[other] = slot;
            } else {
                occ.insert(e, slot);
            }
        }
    }
    let order = contraction_order(d);
    let mut processed = vec![false; n];

    type Key = Vec<(u32, u32)>;
    let circle = LaurentPoly::from_terms(1, [(2i64, -1i64), (-2, -1)]);
    let mut states: HashMap<Key, LaurentPoly> = HashMap::new();
    states.insert(Vec::new(), LaurentPoly::one());

    for &ci in &order {
        check_deadline(deadline)?;
        let mut next: HashMap<Key, LaurentPoly> = HashMap::new();
        for (key, weight) in &states {
            for bit in [false, true] {
                let uexp = crossing_weight(signs[ci], bit);
                let arcs: [(usize, usize); 2] = if !bit {
                    [(4 * ci, 4 * ci + 1), (4 * ci + 2, 4 * ci + 3)]
                } else {
                    [(4 * ci, 4 * ci + 3), (4 * ci + 1, 4 * ci + 2)]
                };
                // rebuild the matching with this crossing's arcs and any
                // edges to already-processed crossings connected
                let mut partner: HashMap<u32, u32> =
                    key.iter().flat_map(|&(a, b)| [(a, b), (b, a)]).collect();
                let mut circles = 0usize;
                let connect =
                    |partner: &mut HashMap<u32, u32>, circles: &mut usize, a: u32, b: u32| {
                        let pa = partner.remove(&a);
                        let pb = partner.remove(&b);
                        match (pa, pb) {
                            (None, None) => {
                                partner.insert(a, b);
                                partner.insert(b, a);
                            }
                            (Some(x), None) => {
                                partner.remove(&x);
                                if x == b {
                                    *circles += 1;
                                } else {
                                    partner.insert(x, b);
                                    partner.insert(b, x);
                                }
                            }
                            (None, Some(y)) => {
                                partner.remove(&y);
                                if y == a {
                                    *circles += 1;
                                } else {
                                    partner.insert(a, y);
                                    partner.insert(y, a);
                                }
                            }
                            (Some(x), Some(y)) => {
                                partner.remove(&x);
                                partner.remove(&y);
                                if x == b && y == a {
                                    *circles += 1;
                                } else {
                                    partner.insert(x, y);
                                    partner.insert(y, x);
                                }
                            }
                        }
                    };
                for (a, b) in arcs {
                    connect(&mut partner, &mut circles, a as u32, b as u32);
                }
                for si in 0..4 {
                    let slot = 4 * ci + si;
                    let m = mate[slot];
                    if m / 4 == ci {
                        // both occurrences in this crossing: connect once
                        if m > slot {
                            connect(&mut partner, &mut circles, slot as u32, m as u32);
                        }
                    } else if processed[m / 4] {
                        connect(&mut partner, &mut circles, slot as u32, m as u32);
                    }
                }
                let mut new_key: Key = Vec::with_capacity(partner.len() / 2);
                for (&a, &b) in &partner {
                    if a < b {
                        new_key.push((a, b));
                    }
                }
                new_key.sort_unstable();
                let mut w = weight.mul_mono(uexp, 1);
                for _ in 0..circles {
                    w = w.mul(&circle);
                }
                match next.entry(new_key) {
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        let cur = e.get().add(&w);
                        *e.get_mut() = cur;
                    }
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(w);
                    }
                }
            }
        }
        processed[ci] = true;
        states = next;
        states.retain(|_, w| !w.is_zero());
    }
    assert!(states.len() <= 1, "all boundary endpoints must close up");
    let mut out = BTreeMap::new();
    if let Some(w) = states.get(&Vec::new()) {
        // weights were built with integer u-exponents (scale 1)
        assert_eq!(
            w.scale(),
            1,
            "contracted bracket must have integer u-exponents"
        );
        out = w.iter().map(|(e, c)| (e, c.clone())).collect();
    }
    Ok(out)
}

/// Greedy crossing order minimizing the number of dangling edges.
fn contraction_order(d: &Diagram) -> Vec<usize> {
    let n = d.n();
    let mut label_sets: Vec<Vec<u32>> = d.crossings().iter().map(|c| c.slots().to_vec()).collect();
    for s in &mut label_sets {
        s.sort_unstable();
    }
    let mut order = Vec::with_capacity(n);
    let mut used = vec![false; n];
    let mut boundary: BTreeMap<u32, usize> = BTreeMap::new();
    for _ in 0..n {
        // choose the unused crossing sharing the most labels with the
        // boundary (ties: lowest index); first pick is crossing 0
        let mut best: Option<(i64, usize)> = None;
        for ci in 0..n {
            if used[ci] {
                continue;
            }
            let shared = label_sets[ci]
                .iter()
                .filter(|e| boundary.contains_key(e))
                .count() as i64;
            let score = 2 * shared - 4; // net boundary change, negated
            if best.map_or(true, |(bs, _)| score > bs) {
                best = Some((score, ci));
            }
        }
        let (_, ci) = best.unwrap();
        used[ci] = true;
        order.push(ci);
        for &e in &label_sets[ci] {
            let cnt = boundary.entry(e).or_insert(0);
            *cnt += 1;
            if *cnt == 2 {
                boundary.remove(&e);
            }
        }
    }
    order
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.parent[ra] = rb;
    }
}
