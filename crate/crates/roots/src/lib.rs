//! Numerical root analysis of invariant polynomials.
//!
//! A Laurent polynomial is stripped of its monomial unit (so the constant
//! term is nonzero) and its roots are found with the Aberth–Ehrlich
//! simultaneous iteration, then polished by Newton steps.  Roots are kept
//! with multiplicity (no squarefree reduction).  A root is accepted when its
//! relative residual `|p(z)| / ‖p‖₁` is at most the tolerance;
//! non-converged roots are excluded and counted.
//!
//! Classification counts "pure" roots (real or purely imaginary up to a
//! relative tolerance) and roots whose squared modulus lies in the annulus
//! `[0.9, 1.1]`, and tracks the maximal modulus.

use laurent::LaurentPoly;
use num_complex::Complex64;
use num_traits::ToPrimitive;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// The zero polynomial has no well-defined root set.
    ZeroPolynomial,
    /// Exponents must be integral to read off real coefficients.
    FractionalExponents,
}

impl std::fmt::Display for Error {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Error::ZeroPolynomial => write!(f, "zero polynomial"),
            Error::FractionalExponents => write!(f, "fractional exponents"),
        }
    }
}

impl std::error::Error for Error {}

/// Ascending real coefficients `[a₀, …, a_d]` with `a₀ ≠ 0 ≠ a_d`, obtained
/// by dividing out the lowest monomial.
pub fn normalize_for_roots(p: &LaurentPoly) -> Result<Vec<f64>, Error> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !p.has_integer_exponents() {
        return Err(Error::FractionalExponents);
    }
    let (lo, hi) = p.degree_range().unwrap();
    let mut coeffs = vec![0.0; (hi - lo + 1) as usize];
    for (e, c) in p.iter() {
        coeffs[(e - lo) as usize] = c.to_f64().unwrap();
    }
    Ok(coeffs)
}

/// Solver configuration.
#[derive(Debug, Clone, Copy)]
pub struct Solver {
    pub max_iterations: usize,
    /// Acceptance threshold on the relative backward error
    /// `|p(z)| / Σᵢ |aᵢ| |z|ⁱ` (the scale a correctly rounded evaluation can
    /// actually reach, unlike a plain `‖p‖₁` denominator when `|z| > 1`).
    pub residual_tol: f64,
}

impl Default for Solver {
    fn default() -> Self {
        Solver {
            max_iterations: 500,
            residual_tol: 1e-10,
        }
    }
}

/// All accepted roots (with multiplicity) plus the count of non-converged
/// candidates that were excluded.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    pub rejected: usize,
}

/// `Σᵢ |aᵢ| r^i`: the attainable floating-point evaluation scale at `|z| = r`.
fn majorant(coeffs: &[f64], r: f64) -> f64 {
    let mut m = 0.0f64;
    for &c in coeffs.iter().rev() {
        m = m * r + c.abs();
    }
    m.max(f64::MIN_POSITIVE)
}

fn horner(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

impl Solver {
    /// Roots of the stripped polynomial of `p` by Aberth–Ehrlich iteration
    /// followed by Newton polishing.
    pub fn roots(&self, p: &LaurentPoly) -> Result<RootSet, Error> {
        let coeffs = normalize_for_roots(p)?;
        Ok(self.roots_of_coeffs(&coeffs))
    }

    /// Roots from ascending coefficients (`a₀ ≠ 0`, `a_d ≠ 0`).
    pub fn roots_of_coeffs(&self, coeffs: &[f64]) -> RootSet {
        let d = coeffs.len() - 1;
        if d == 0 {
            return RootSet {
                roots: Vec::new(),
                rejected: 0,
            };
        }
        // initial guesses on a circle scaled by the geometric-mean estimate
        let an = coeffs[d].abs();
        let a0 = coeffs[0].abs();
        let r = (a0 / an).powf(1.0 / d as f64).clamp(0.2, 5.0);
        let mut z: Vec<Complex64> = (0..d)
            .map(|k| {
                let theta = 2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4;
                Complex64::from_polar(r, theta)
            })
            .collect();
        for _ in 0..self.max_iterations {
            let mut moved: f64 = 0.0;
            for i in 0..d {
                let (p, dp) = horner(coeffs, z[i]);
                if p.norm() <= 1e-14 * majorant(coeffs, z[i].norm()) {
                    continue;
                }
                let ratio = p / dp;
                let s: Complex64 = (0..d)
                    .filter(|&j| j != i)
                    .map(|j| (z[i] - z[j]).finv())
                    .sum();
                let denom = Complex64::new(1.0, 0.0) - ratio * s;
                let step = ratio / denom;
                z[i] -= step;
                moved = moved.max(step.norm());
            }
            if moved <= 1e-14 {
                break;
            }
        }
        // Newton polish and residual acceptance
        let mut roots = Vec::with_capacity(d);
        let mut rejected = 0usize;
        for mut zi in z {
            for _ in 0..20 {
                let (p, dp) = horner(coeffs, zi);
                if p.norm() <= 1e-15 * majorant(coeffs, zi.norm()) || dp.norm() == 0.0 {
                    break;
                }
                let step = p / dp;
                if step.norm() <= 1e-15 * zi.norm().max(1.0) {
                    break;
                }
                zi -= step;
            }
            let (p, _) = horner(coeffs, zi);
            if p.norm() <= self.residual_tol * majorant(coeffs, zi.norm()) {
                roots.push(zi);
            } else {
                rejected += 1;
            }
        }
        roots.sort_by(|a, b| {
            (a.re, a.im)
                .partial_cmp(&(b.re, b.im))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        RootSet { roots, rejected }
    }
}

/// Root classification counters for one polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub total: usize,
    /// roots on a coordinate axis (real or purely imaginary) up to a
    /// relative tolerance
    pub pure: usize,
    /// roots with `0.9 ≤ |z|² ≤ 1.1`
    pub annulus: usize,
    /// maximal modulus over all roots
    pub max_abs: f64,
    /// maximal modulus over the pure roots only
    pub max_abs_pure: Option<f64>,
}

pub const PURE_TOL: f64 = 1e-8;

pub fn classify(roots: &[Complex64], tol: f64) -> Classification {
    let mut pure = 0usize;
    let mut annulus = 0usize;
    let mut max_abs: f64 = 0.0;
    let mut max_abs_pure: Option<f64> = None;
    for z in roots {
        let m = z.norm();
        max_abs = max_abs.max(m);
        let scale = tol * (1.0 + m);
        if z.im.abs() <= scale || z.re.abs() <= scale {
            pure += 1;
            max_abs_pure = Some(max_abs_pure.map_or(m, |x: f64| x.max(m)));
        }
        let m2 = z.norm_sqr();
        if (0.9..=1.1).contains(&m2) {
            annulus += 1;
        }
    }
    Classification {
        total: roots.len(),
        pure,
        annulus,
        max_abs,
        max_abs_pure,
    }
}

/// Square occupancy grid over the complex plane for density plots.
#[derive(Debug, Clone)]
pub struct DensityGrid {
    pub size: usize,
    /// half-width of the symmetric bounds `[-c, c]²`
    pub bound: f64,
    pub counts: Vec<u64>,
}

impl DensityGrid {
    pub fn new(size: usize, bound: f64) -> Self {
        DensityGrid {
            size,
            bound,
            counts: vec![0; size * size],
        }
    }

    /// Symmetric bounds that cover every root (with 5% margin).
    pub fn auto_bound(roots: &[Complex64]) -> f64 {
        let m = roots
            .iter()
            .map(|z| z.re.abs().max(z.im.abs()))
            .fold(0.0f64, f64::max);
        (m * 1.05).max(1e-9)
    }

    pub fn accumulate(&mut self, roots: &[Complex64]) {
        let n = self.size as f64;
        for z in roots {
            let x = (z.re + self.bound) / (2.0 * self.bound) * n;
            let y = (z.im + self.bound) / (2.0 * self.bound) * n;
            if x < 0.0 || y < 0.0 || x >= n || y >= n {
                continue;
            }
            let (i, j) = (y as usize, x as usize);
            self.counts[i * self.size + j] += 1;
        }
    }

    /// Binary PGM image with logarithmic brightness.
    pub fn to_pgm(&self) -> Vec<u8> {
        let maxc = self.counts.iter().copied().max().unwrap_or(0);
        let scale = if maxc > 0 {
            255.0 / ((maxc as f64) + 1.0).ln()
        } else {
            0.0
        };
        let mut out = format!("P5\n{} {}\n255\n", self.size, self.size).into_bytes();
        // image rows top-down: highest imaginary part first
        for i in (0..self.size).rev() {
            for j in 0..self.size {
                let c = self.counts[i * self.size + j];
                let v = ((c as f64 + 1.0).ln() * scale).round().clamp(0.0, 255.0);
                out.push(v as u8);
            }
        }
        out
    }

    /// CSV `row,col,count` of the nonzero cells.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("row,col,count\n");
        for i in 0..self.size {
            for j in 0..self.size {
                let c = self.counts[i * self.size + j];
                if c > 0 {
                    s.push_str(&format!("{i},{j},{c}\n"));
                }
            }
        }
        s
    }
}
