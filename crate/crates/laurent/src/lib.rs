//! Exact Laurent-polynomial arithmetic in one and two variables.
//!
//! `LaurentPoly` stores polynomials in `q` whose exponents live in `(1/L)·ℤ`
//! for a per-value positive integer scale `L` (kept minimal), with arbitrary
//! precision integer coefficients.  `BiLaurentPoly` stores polynomials in
//! `(q, t)` with integer exponents.  Both are immutable value types with
//! semantic equality and a canonical text form used by the on-disk cache.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Operation requires integer exponents but the polynomial has scale > 1.
    NonIntegerExponents,
    /// Vector half-width too small for the polynomial's support.
    SupportExceedsWidth { needed: i64, given: i64 },
    /// Operation undefined on the zero polynomial.
    ZeroPolynomial,
    /// Span requested on a two-variable polynomial.
    SpanOfBivariate,
    /// Canonical-form parse error at byte offset.
    Parse(usize, &'static str),
    /// Exact division failed (nonzero remainder).
    InexactDivision,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NonIntegerExponents => write!(f, "polynomial has non-integer exponents"),
            Error::SupportExceedsWidth { needed, given } => {
                write!(f, "support needs half-width {needed}, got {given}")
            }
            Error::ZeroPolynomial => write!(f, "operation undefined on zero polynomial"),
            Error::SpanOfBivariate => write!(f, "span is undefined for two-variable polynomials"),
            Error::Parse(pos, msg) => write!(f, "parse error at byte {pos}: {msg}"),
            Error::InexactDivision => write!(f, "division left a nonzero remainder"),
        }
    }
}

impl std::error::Error for Error {}

/// A Laurent polynomial in `q` with exponents in `(1/L)·ℤ`.
///
/// Invariants: no zero coefficients are stored, and `L` is minimal (the gcd of
/// `L` and all exponent numerators is 1).  Equality is semantic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    scale: i64,
    /// exponent numerator -> nonzero coefficient; exponent of q is num/scale.
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly {
            scale: 1,
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(0, 1, BigInt::one())
    }

    /// `coeff * q^(exp_num/exp_den)`; `exp_den` must be positive.
    pub fn monomial(exp_num: i64, exp_den: i64, coeff: BigInt) -> Self {
        assert!(exp_den > 0, "exponent denominator must be positive");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp_num, coeff);
        }
        let mut p = LaurentPoly {
            scale: exp_den,
            terms,
        };
        p.canonicalize();
        p
    }

    /// Build from `(exponent numerator, coefficient)` pairs at a common scale.
    /// Repeated exponents are summed.
    pub fn from_terms<I, C>(scale: i64, it: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        assert!(scale > 0);
        let mut terms: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e, c) in it {
            let c: BigInt = c.into();
            let slot = terms.entry(e).or_insert_with(BigInt::zero);
            *slot += c;
        }
        let mut p = LaurentPoly { scale, terms };
        p.canonicalize();
        p
    }

    fn canonicalize(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
        if self.terms.is_empty() {
            self.scale = 1;
            return;
        }
        let mut g = self.scale;
        for &e in self.terms.keys() {
            g = g.gcd(&e);
            if g == 1 {
                return;
            }
        }
        if g > 1 {
            self.scale /= g;
            self.terms = self.terms.iter().map(|(e, c)| (e / g, c.clone())).collect();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The minimal exponent denominator `L`.
    pub fn scale(&self) -> i64 {
        self.scale
    }

    pub fn has_integer_exponents(&self) -> bool {
        self.scale == 1
    }

    /// Iterate `(exponent numerator, coefficient)` in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of `q^(exp_num/scale)` at this polynomial's own scale.
    pub fn coeff(&self, exp_num: i64) -> BigInt {
        self.terms
            .get(&exp_num)
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    /// (min, max) exponent numerators at this polynomial's scale; None if zero.
    pub fn degree_range(&self) -> Option<(i64, i64)> {
        let min = *self.terms.keys().next()?;
        let max = *self.terms.keys().next_back()?;
        Some((min, max))
    }

    fn at_scale(&self, scale: i64) -> BTreeMap<i64, BigInt> {
        debug_assert!(scale % self.scale == 0);
        let f = scale / self.scale;
        self.terms.iter().map(|(e, c)| (e * f, c.clone())).collect()
    }

    fn joint_scale(&self, other: &Self) -> i64 {
        self.scale.lcm(&other.scale)
    }

    pub fn add(&self, other: &Self) -> Self {
        let s = self.joint_scale(other);
        let mut terms = self.at_scale(s);
        for (e, c) in other.at_scale(s) {
            let slot = terms.entry(e).or_insert_with(BigInt::zero);
            *slot += c;
        }
        let mut p = LaurentPoly { scale: s, terms };
        p.canonicalize();
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            scale: self.scale,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let s = self.joint_scale(other);
        let a = self.at_scale(s);
        let b = other.at_scale(s);
        let mut terms: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (ea, ca) in &a {
            for (eb, cb) in &b {
                let slot = terms.entry(ea + eb).or_insert_with(BigInt::zero);
                *slot += ca * cb;
            }
        }
        let mut p = LaurentPoly { scale: s, terms };
        p.canonicalize();
        p
    }

    pub fn scalar_mul(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            scale: self.scale,
            terms: self.terms.iter().map(|(e, t)| (*e, t * c)).collect(),
        }
    }

    /// Multiply by the monomial `q^(exp_num/exp_den)`.
    pub fn mul_mono(&self, exp_num: i64, exp_den: i64) -> Self {
        self.mul(&Self::monomial(exp_num, exp_den, BigInt::one()))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitute `q ↦ q^(e_num/e_den)` exactly.
    pub fn substitute(&self, e_num: i64, e_den: i64) -> Self {
        assert!(
            e_den > 0 && e_num != 0,
            "substitution exponent must be nonzero"
        );
        let mut p = LaurentPoly {
            scale: self.scale * e_den,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e * e_num, c.clone()))
                .collect(),
        };
        p.canonicalize();
        p
    }

    /// Mirror substitution `q ↦ q⁻¹`.
    pub fn mirror_q(&self) -> Self {
        self.substitute(-1, 1)
    }

    /// Evaluate at `q = 1` (sum of coefficients).
    pub fn eval_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Exact division: returns `self / div` if the remainder is zero.
    pub fn div_exact(&self, div: &Self) -> Result<Self, Error> {
        if div.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let s = self.joint_scale(div);
        let mut rem = self.at_scale(s);
        let d = div.at_scale(s);
        let (&dmax, dlead) = d.iter().next_back().unwrap();
        let &dmin = d.keys().next().unwrap();
        // An exact quotient has minimal degree self_min - div_min; any shift
        // below that bound proves the division inexact (and guards against
        // the non-terminating descent Laurent division would otherwise take).
        let shift_floor = rem.keys().next().unwrap() - dmin;
        let mut quo: BTreeMap<i64, BigInt> = BTreeMap::new();
        while let Some((&rmax, rlead)) = rem.iter().next_back() {
            let (qc, r) = rlead.div_rem(dlead);
            if !r.is_zero() {
                return Err(Error::InexactDivision);
            }
            let shift = rmax - dmax;
            if shift < shift_floor {
                return Err(Error::InexactDivision);
            }
            for (e, c) in &d {
                let slot = rem.entry(e + shift).or_insert_with(BigInt::zero);
                *slot -= &qc * c;
            }
            rem.retain(|_, c| !c.is_zero());
            if rem.keys().next_back().is_some_and(|&m| m >= rmax) {
                return Err(Error::InexactDivision);
            }
            quo.insert(shift, qc);
        }
        let mut p = LaurentPoly {
            scale: s,
            terms: quo,
        };
        p.canonicalize();
        Ok(p)
    }

    /// Coefficient statistics: sum of |coefficients|, max |coefficient| and
    /// span = (max degree − min degree) in coefficient slots, inclusive.
    pub fn coeff_stats(&self) -> CoeffStats {
        let abs_sum: BigInt = self.terms.values().map(|c| c.abs()).sum();
        let max_abs = self
            .terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero);
        let span = self
            .degree_range()
            .map(|(min, max)| ((max - min) / self.scale) as u64 + 1)
            .unwrap_or(0);
        CoeffStats {
            abs_sum,
            max_abs,
            span,
        }
    }

    /// Ascending coefficient vector `[a₋d, …, a_d]` of length `2d+1`.
    pub fn to_vector(&self, d: i64) -> Result<CoeffVector, Error> {
        if !self.has_integer_exponents() {
            return Err(Error::NonIntegerExponents);
        }
        if let Some((min, max)) = self.degree_range() {
            let needed = min.abs().max(max.abs());
            if needed > d {
                return Err(Error::SupportExceedsWidth { needed, given: d });
            }
        }
        let mut entries = vec![BigInt::zero(); (2 * d + 1) as usize];
        for (e, c) in self.iter() {
            entries[(e + d) as usize] = c.clone();
        }
        Ok(CoeffVector { d, entries })
    }

    /// Canonical text form `{"L":1,"terms":[[exp,coeff],…]}`, ascending exponent.
    pub fn to_canonical_string(&self) -> String {
        let mut s = format!("{{\"L\":{},\"terms\":[", self.scale);
        let mut first = true;
        for (e, c) in self.iter() {
            if !first {
                s.push(',');
            }
            first = false;
            s.push_str(&format!("[{},{}]", e, c));
        }
        s.push_str("]}");
        s
    }

    /// Parse the canonical text form (bit-exact round-trip with
    /// `to_canonical_string`).
    pub fn from_canonical_str(input: &str) -> Result<Self, Error> {
        let mut p = Parser::new(input);
        p.expect("{\"L\":")?;
        let scale = p.integer()?;
        if scale <= 0 {
            return Err(Error::Parse(p.pos, "scale must be positive"));
        }
        p.expect(",\"terms\":[")?;
        let mut terms: BTreeMap<i64, BigInt> = BTreeMap::new();
        if !p.peek(b']') {
            loop {
                p.expect("[")?;
                let e = p.integer()?;
                p.expect(",")?;
                let c = p.bigint()?;
                p.expect("]")?;
                if terms.insert(e, c).is_some() {
                    return Err(Error::Parse(p.pos, "duplicate exponent"));
                }
                if !p.peek(b',') {
                    break;
                }
                p.expect(",")?;
            }
        }
        p.expect("]}")?;
        p.end()?;
        let mut poly = LaurentPoly { scale, terms };
        poly.canonicalize();
        Ok(poly)
    }

    /// Human-readable rendering, e.g. `-q^-4+q^-3+q^-1`.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (e, c) in self.iter() {
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            let show_coeff = !mag.is_one() || e == 0;
            if show_coeff {
                out.push_str(&mag.to_string());
            }
            if e != 0 {
                if show_coeff {
                    out.push('*');
                }
                out.push('q');
                if !(e == self.scale) {
                    out.push('^');
                    if self.scale == 1 {
                        out.push_str(&e.to_string());
                    } else {
                        out.push_str(&format!("({}/{})", e, self.scale));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pretty())
    }
}

/// Coefficient statistics of a polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffStats {
    pub abs_sum: BigInt,
    pub max_abs: BigInt,
    /// Inclusive coefficient-slot count (0 for the zero polynomial).
    pub span: u64,
}

/// The ascending vector encoding `[a₋d, …, a_d] ∈ ℤ^(2d+1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffVector {
    d: i64,
    entries: Vec<BigInt>,
}

impl CoeffVector {
    pub fn half_width(&self) -> i64 {
        self.d
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    /// Read the vector back into a polynomial (exact inverse of `to_vector`).
    pub fn to_poly(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            1,
            self.entries
                .iter()
                .enumerate()
                .map(|(i, c)| (i as i64 - self.d, c.clone())),
        )
    }

    /// Entries as `f64`, for metric embeddings.
    pub fn to_f64(&self) -> Vec<f64> {
        self.entries
            .iter()
            .map(|c| {
                let (sign, digits) = c.to_u64_digits();
                let mut v = 0.0f64;
                for d in digits.iter().rev() {
                    v = v * 18446744073709551616.0 + *d as f64;
                }
                match sign {
                    num_bigint::Sign::Minus => -v,
                    _ => v,
                }
            })
            .collect()
    }
}

/// A Laurent polynomial in `(q, t)` with integer exponents.
///
/// Invariant: no zero coefficients stored.  Used for Khovanov Poincaré
/// polynomials (where all coefficients are nonnegative Betti numbers).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BiLaurentPoly {
    /// (q-exponent, t-exponent) -> nonzero coefficient.
    terms: BTreeMap<(i64, i64), BigInt>,
}

impl BiLaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms<I, C>(it: I) -> Self
    where
        I: IntoIterator<Item = ((i64, i64), C)>,
        C: Into<BigInt>,
    {
        let mut terms: BTreeMap<(i64, i64), BigInt> = BTreeMap::new();
        for (k, c) in it {
            let c: BigInt = c.into();
            let slot = terms.entry(k).or_insert_with(BigInt::zero);
            *slot += c;
        }
        terms.retain(|_, c| !c.is_zero());
        BiLaurentPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, q: i64, t: i64, c: impl Into<BigInt>) {
        let c: BigInt = c.into();
        let slot = self.terms.entry((q, t)).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(q, t));
        }
    }

    /// Iterate `((q-exp, t-exp), coefficient)` in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), &BigInt)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    /// Specialize `t ↦ value` (an integer), collapsing to one variable.
    pub fn specialize_t(&self, value: i64) -> LaurentPoly {
        let v = BigInt::from(value);
        LaurentPoly::from_terms(
            1,
            self.terms.iter().map(|(&(q, t), c)| {
                let mut f = c.clone();
                let (mut n, inv) = if t >= 0 { (t, false) } else { (-t, true) };
                let mut pw = BigInt::one();
                while n > 0 {
                    pw *= &v;
                    n -= 1;
                }
                if inv {
                    // only ±1 specializations keep us in ℤ
                    assert!(
                        pw.abs().is_one(),
                        "negative t-powers require t = ±1 specialization"
                    );
                }
                f *= pw;
                (q, f)
            }),
        )
    }

    /// abs-sum and max-abs of the coefficients; span is an error ("invariant K
    /// is excluded" from span statistics).
    pub fn coeff_stats(&self) -> (BigInt, BigInt) {
        let abs_sum: BigInt = self.terms.values().map(|c| c.abs()).sum();
        let max_abs = self
            .terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero);
        (abs_sum, max_abs)
    }

    pub fn span(&self) -> Result<u64, Error> {
        Err(Error::SpanOfBivariate)
    }

    /// Cache form `[[qexp,texp,coeff],…]` sorted lexicographically.
    pub fn to_cache_string(&self) -> String {
        let mut s = String::from("[");
        let mut first = true;
        for ((q, t), c) in self.iter() {
            if !first {
                s.push(',');
            }
            first = false;
            s.push_str(&format!("[{},{},{}]", q, t, c));
        }
        s.push(']');
        s
    }

    pub fn from_cache_str(input: &str) -> Result<Self, Error> {
        let mut p = Parser::new(input);
        p.expect("[")?;
        let mut terms: BTreeMap<(i64, i64), BigInt> = BTreeMap::new();
        if !p.peek(b']') {
            loop {
                p.expect("[")?;
                let q = p.integer()?;
                p.expect(",")?;
                let t = p.integer()?;
                p.expect(",")?;
                let c = p.bigint()?;
                p.expect("]")?;
                if terms.insert((q, t), c).is_some() {
                    return Err(Error::Parse(p.pos, "duplicate exponent pair"));
                }
                if !p.peek(b',') {
                    break;
                }
                p.expect(",")?;
            }
        }
        p.expect("]")?;
        p.end()?;
        terms.retain(|_, c| !c.is_zero());
        Ok(BiLaurentPoly { terms })
    }

    /// Flatten to a row-major matrix vector over `[-dq,dq]×[-dt,dt]`.
    pub fn to_matrix_vector(&self, dq: i64, dt: i64) -> Result<Vec<BigInt>, Error> {
        let (wq, wt) = ((2 * dq + 1) as usize, (2 * dt + 1) as usize);
        let mut out = vec![BigInt::zero(); wq * wt];
        for ((q, t), c) in self.iter() {
            if q.abs() > dq || t.abs() > dt {
                return Err(Error::SupportExceedsWidth {
                    needed: q.abs().max(t.abs()),
                    given: dq.min(dt),
                });
            }
            out[(t + dt) as usize * wq + (q + dq) as usize] = c.clone();
        }
        Ok(out)
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser {
            bytes: s.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn expect(&mut self, lit: &'static str) -> Result<(), Error> {
        for &b in lit.as_bytes() {
            self.skip_ws();
            if self.pos >= self.bytes.len() || self.bytes[self.pos] != b {
                return Err(Error::Parse(self.pos, "unexpected token"));
            }
            self.pos += 1;
        }
        Ok(())
    }

    fn peek(&mut self, b: u8) -> bool {
        self.skip_ws();
        self.pos < self.bytes.len() && self.bytes[self.pos] == b
    }

    fn digits(&mut self) -> Result<&'a [u8], Error> {
        self.skip_ws();
        let start = self.pos;
        if self.pos < self.bytes.len() && self.bytes[self.pos] == b'-' {
            self.pos += 1;
        }
        let dstart = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == dstart {
            return Err(Error::Parse(self.pos, "expected integer"));
        }
        Ok(&self.bytes[start..self.pos])
    }

    fn integer(&mut self) -> Result<i64, Error> {
        let pos = self.pos;
        let d = self.digits()?;
        std::str::from_utf8(d)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(Error::Parse(pos, "integer out of range"))
    }

    fn bigint(&mut self) -> Result<BigInt, Error> {
        let pos = self.pos;
        let d = self.digits()?;
        std::str::from_utf8(d)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(Error::Parse(pos, "bad big integer"))
    }

    fn end(&mut self) -> Result<(), Error> {
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return Err(Error::Parse(self.pos, "trailing input"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod unit {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        LaurentPoly::from_canonical_str(s).unwrap()
    }

    #[test]
    fn canonical_scale_reduction() {
        let half = LaurentPoly::monomial(2, 4, BigInt::one());
        assert_eq!(half.scale(), 2);
        let whole = LaurentPoly::monomial(4, 4, BigInt::one());
        assert_eq!(whole.scale(), 1);
        assert_eq!(whole, LaurentPoly::monomial(1, 1, BigInt::one()));
    }

    #[test]
    fn zero_is_canonical() {
        let a = p(r#"{"L":1,"terms":[[2,1]]}"#);
        let z = a.sub(&a);
        assert!(z.is_zero());
        assert_eq!(z, LaurentPoly::zero());
        assert_eq!(z.to_canonical_string(), r#"{"L":1,"terms":[]}"#);
    }

    #[test]
    fn div_exact_roundtrip() {
        let a = p(r#"{"L":1,"terms":[[-2,1],[0,3],[1,-5]]}"#);
        let b = p(r#"{"L":2,"terms":[[-1,2],[3,7]]}"#);
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        let bad = prod.add(&LaurentPoly::one());
        assert!(bad.div_exact(&a).is_err());
    }

    #[test]
    fn substitute_mirror() {
        let a = p(r#"{"L":1,"terms":[[1,1],[3,1],[4,-1]]}"#);
        let m = a.mirror_q();
        assert_eq!(
            m.to_canonical_string(),
            r#"{"L":1,"terms":[[-4,-1],[-3,1],[-1,1]]}"#
        );
        assert_eq!(m.mirror_q(), a);
    }
}
