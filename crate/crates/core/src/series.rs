//! Exact generating-function coefficients and square-root singularity
//! asymptotics.
//!
//! All counting coefficients are computed with arbitrary-precision integers
//! through functional-equation recurrences — no floating point enters before
//! the asymptotic layer. The streams here are cross-checked against the
//! brute-force census of [`crate::enumerate`] at small sizes.
//!
//! Generating functions covered (z marks an application node):
//!
//! * `T_L(z) = (1 - sqrt(1 - 4dz)) / (2z)` — all terms over a d-primitive
//!   basis, with `[z^n] T_L = d^(n+1) * Catalan(n)`;
//! * `C(z) = T_L` at `d = 2` — the S/K class;
//! * `R0(z) = (1 - 2z - sqrt(1 - 4z - 4z^2)) / (2z^2)` — S/K normal forms,
//!   via the equation `R0 = 2 + 2z R0 + z^2 R0^2`;
//! * the subterm generating function for trees containing a fixed size-p
//!   pattern, via `O = z^p + 2z T_L O - z O^2`;
//! * `(1 - 4z - 4z^2)^(-1/2)` — the common factor of every reduction
//!   grammar equation `R_n = (1-4z-4z^2)^(-1/2) * sum_a z^k C^c prod R_i^r_i`.

use num_bigint::{BigInt, BigUint};
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("pattern size p must be at least 1")]
    ZeroPatternSize,
    #[error("grammar index {n} requires {n} lower streams, got {got}")]
    MissingLowerStream { n: usize, got: usize },
    #[error("production exponent vector of length {len} exceeds grammar index {n}")]
    ExponentIndexOutOfRange { n: usize, len: usize },
    #[error("relative error undefined for exact value 0")]
    ZeroExact,
    #[error("invalid decimal constant {0:?}")]
    BadDecimal(String),
}

/// Truncated exact power series a_0..a_N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientStream {
    coeffs: Vec<BigInt>,
}

impl CoefficientStream {
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> CoefficientStream {
        assert!(!coeffs.is_empty());
        CoefficientStream { coeffs }
    }

    pub fn zero(order: usize) -> CoefficientStream {
        CoefficientStream {
            coeffs: vec![BigInt::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> CoefficientStream {
        CoefficientStream::monomial(0, order)
    }

    /// The stream of `z^k` truncated at `order`.
    pub fn monomial(k: usize, order: usize) -> CoefficientStream {
        let mut s = CoefficientStream::zero(order);
        if k <= order {
            s.coeffs[k] = BigInt::one();
        }
        s
    }

    /// Truncation order N; the stream holds coefficients 0..=N.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn add(&self, other: &CoefficientStream) -> CoefficientStream {
        let order = self.order().min(other.order());
        CoefficientStream {
            coeffs: (0..=order).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect(),
        }
    }

    pub fn mul(&self, other: &CoefficientStream) -> CoefficientStream {
        let order = self.order().min(other.order());
        let mut out = vec![BigInt::zero(); order + 1];
        for (i, a) in self.coeffs.iter().take(order + 1).enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(order + 1 - i).enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        CoefficientStream { coeffs: out }
    }

    pub fn pow(&self, e: usize) -> CoefficientStream {
        let mut acc = CoefficientStream::one(self.order());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// `Catalan(n) = binom(2n, n) / (n + 1)`.
pub fn catalan(n: u64) -> BigUint {
    let mut c = BigUint::one();
    for k in 0..n {
        // C_{k+1} = C_k * 2(2k+1) / (k+2), exact at every step
        c = c * BigUint::from(2 * (2 * k + 1)) / BigUint::from(k + 2);
    }
    c
}

/// `[z^n] T_L(z) = d^(n+1) * Catalan(n)` for a basis of cardinality d.
#[allow(non_snake_case)]
pub fn coeff_TL(d: u64, n: u64) -> BigUint {
    assert!(d >= 1, "basis cardinality must be positive");
    BigUint::from(d).pow(n as u32 + 1) * catalan(n)
}

/// `[z^n] C(z)`, the number of S/K-terms of size n.
#[allow(non_snake_case)]
pub fn coeff_C(n: u64) -> BigUint {
    coeff_TL(2, n)
}

/// Stream of `[z^n] C(z)` up to `order`.
pub fn c_stream(order: usize) -> CoefficientStream {
    CoefficientStream {
        coeffs: (0..=order as u64).map(|n| coeff_C(n).into()).collect(),
    }
}

/// Stream of S/K normal-form counts, from `R0 = 2 + 2z R0 + z^2 R0^2`.
pub fn r0_stream(order: usize) -> CoefficientStream {
    let mut r = vec![BigInt::zero(); order + 1];
    r[0] = BigInt::from(2);
    for n in 1..=order {
        let mut v = 2 * &r[n - 1];
        if n >= 2 {
            for i in 0..=n - 2 {
                v += &r[i] * &r[n - 2 - i];
            }
        }
        r[n] = v;
    }
    CoefficientStream { coeffs: r }
}

/// `[z^n] R0(z)`, the number of S/K normal forms of size n.
#[allow(non_snake_case)]
pub fn coeff_R0(n: u64) -> BigUint {
    r0_stream(n as usize)
        .coeff(n as usize)
        .to_biguint()
        .expect("normal-form counts are non-negative")
}

/// `[z^n]` of the generating function of d-ary-labelled trees containing a
/// fixed size-p pattern as a subterm, from `O = z^p + 2z T_L O - z O^2`.
/// The count depends on the pattern only through its size.
pub fn coeff_subterm(d: u64, p: u64, n: u64) -> Result<BigUint, SeriesError> {
    if p == 0 {
        return Err(SeriesError::ZeroPatternSize);
    }
    let order = n as usize;
    let t: Vec<BigInt> = (0..=n).map(|i| coeff_TL(d, i).into()).collect();
    let mut o = vec![BigInt::zero(); order + 1];
    for m in 0..=order {
        let mut v = if m as u64 == p {
            BigInt::one()
        } else {
            BigInt::zero()
        };
        for i in 0..m {
            // both products carry an extra z, so indices sum to m - 1
            v += 2 * &t[i] * &o[m - 1 - i] - &o[i] * &o[m - 1 - i];
        }
        o[m] = v;
    }
    o[order]
        .to_biguint()
        .ok_or_else(|| unreachable!("subterm counts are non-negative"))
}

/// Truncated expansion of `(1 - 4z - 4z^2)^(-1/2)`, computed by the
/// holonomic recurrence `(n+1) f_{n+1} = (4n+2) f_n + 4n f_{n-1}` obtained
/// from `(1 - 4z - 4z^2) f' = (2 + 4z) f`. Begins 1, 2, 8, 32, 136.
pub fn inverse_sqrt_core(order: usize) -> CoefficientStream {
    let mut f = vec![BigInt::zero(); order + 1];
    f[0] = BigInt::one();
    if order >= 1 {
        f[1] = BigInt::from(2);
    }
    for n in 1..order {
        let num = (4 * n as i64 + 2) * &f[n] + (4 * n as i64) * &f[n - 1];
        let (q, rem) = num_integer::Integer::div_rem(&num, &BigInt::from(n as i64 + 1));
        debug_assert!(rem.is_zero());
        f[n + 1] = q;
    }
    CoefficientStream { coeffs: f }
}

/// One summand `z^k * C^c * prod_i R_i^(r_i)` of a reduction grammar.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
pub struct ProductionSummary {
    pub k: usize,
    pub c: usize,
    #[serde(default)]
    pub r: Vec<usize>,
}

/// Production summaries for the grammar of terms reducing in exactly `n`
/// normal-order steps. This is input data: the grammar construction itself
/// is outside the scope of this crate.
#[derive(Clone, Debug, Deserialize, PartialEq, Eq)]
pub struct GrammarData {
    pub n: usize,
    pub productions: Vec<ProductionSummary>,
}

impl GrammarData {
    pub fn from_json(text: &str) -> Result<GrammarData, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Evaluates `R_n = (1-4z-4z^2)^(-1/2) * sum_a z^k C^c prod R_i^(r_i)`
/// to truncation order `order`, given the streams of `R_0 .. R_{n-1}`.
pub fn grammar_coeffs(
    g: &GrammarData,
    lower: &[CoefficientStream],
    order: usize,
) -> Result<CoefficientStream, SeriesError> {
    if lower.len() < g.n {
        return Err(SeriesError::MissingLowerStream {
            n: g.n,
            got: lower.len(),
        });
    }
    for prod in &g.productions {
        if prod.r.len() > g.n {
            return Err(SeriesError::ExponentIndexOutOfRange {
                n: g.n,
                len: prod.r.len(),
            });
        }
    }
    let c = c_stream(order);
    let mut sum = CoefficientStream::zero(order);
    for prod in &g.productions {
        let mut term = CoefficientStream::monomial(prod.k, order);
        if prod.c > 0 {
            term = term.mul(&c.pow(prod.c));
        }
        for (i, &ri) in prod.r.iter().enumerate() {
            if ri > 0 {
                term = term.mul(&lower[i].pow(ri));
            }
        }
        sum = sum.add(&term);
    }
    Ok(inverse_sqrt_core(order).mul(&sum))
}

/// Data of a square-root singularity: `[z^n] f ~ zeta^-n * C~ * n^(-3/2)`
/// with the normalised constant `C~ = C_bar / Gamma(-1/2)`.
#[derive(Clone, Debug)]
pub struct AsymptoticSpec {
    /// Dominant singularity, an exact rational in (0, 1).
    pub zeta: Ratio<BigInt>,
    /// Normalised constant C~.
    pub c_tilde: f64,
}

impl AsymptoticSpec {
    pub fn new(zeta: Ratio<BigInt>, c_tilde: f64) -> AsymptoticSpec {
        assert!(zeta > Ratio::zero() && zeta < Ratio::one());
        AsymptoticSpec { zeta, c_tilde }
    }

    /// The Newton-Puiseux constant `C_bar = Gamma(-1/2) * C~ = -2 sqrt(pi) C~`.
    pub fn c_bar(&self) -> f64 {
        -2.0 * std::f64::consts::PI.sqrt() * self.c_tilde
    }
}

/// `zeta^-n * C~ * n^(-3/2)` in double precision.
pub fn asymptotic_estimate(spec: &AsymptoticSpec, n: u64) -> f64 {
    assert!(n >= 1);
    let inv_zeta = spec.zeta.recip().to_f64().expect("singularity out of range");
    inv_zeta.powi(n as i32) * spec.c_tilde * (n as f64).powf(-1.5)
}

/// Exact `floor(inv_zeta^n * C~ * n^(-3/2))` for an integer `1/zeta` and a
/// decimal constant like `"0.101116689571324087..."` carrying enough digits
/// that the floor is exact at the requested n.
///
/// With `C~ = A / 10^k`, the value is `floor(sqrt(X^2 / (10^2k * n^3)))`
/// for `X = inv_zeta^n * A`, using integer square root and floor division.
pub fn asymptotic_floor(inv_zeta: u64, c_tilde: &str, n: u64) -> Result<BigUint, SeriesError> {
    let (int_part, frac_part) = c_tilde
        .split_once('.')
        .ok_or_else(|| SeriesError::BadDecimal(c_tilde.into()))?;
    let digits: String = format!("{int_part}{frac_part}");
    let a: BigUint = digits
        .parse()
        .map_err(|_| SeriesError::BadDecimal(c_tilde.into()))?;
    let k = frac_part.len() as u32;
    let x = BigUint::from(inv_zeta).pow(n as u32) * a;
    let denom = BigUint::from(10u32).pow(2 * k) * BigUint::from(n).pow(3);
    Ok((&x * &x / denom).sqrt())
}

/// `|exact - approx| / exact` in double precision.
pub fn relative_error(exact: &BigUint, approx: f64) -> Result<f64, SeriesError> {
    if exact.is_zero() {
        return Err(SeriesError::ZeroExact);
    }
    let e = exact.to_f64().expect("exact value overflows f64 range");
    Ok((e - approx).abs() / e)
}

/// Asymptotic density from a normalised constant: `C~ * sqrt(pi) / 2`,
/// equivalently `C_bar / -4`.
pub fn density_from_constant(c_tilde: f64) -> f64 {
    c_tilde * std::f64::consts::PI.sqrt() / 2.0
}

/// Lower bound `1 / (d^(p+1) * 4^(p+2))` on the density of trees containing
/// a fixed size-p pattern.
#[allow(non_snake_case)]
pub fn density_lower_bound_L(d: u64, p: u64) -> Ratio<BigInt> {
    let denom = BigInt::from(d).pow(p as u32 + 1) * BigInt::from(4).pow(p as u32 + 2);
    Ratio::new(BigInt::one(), denom)
}

/// Upper-bound ingredient `d / (4d)^p` for the density of trees avoiding a
/// fixed size-p pattern (the avoiding class has density at most `1 - d/(4d)^p`).
#[allow(non_snake_case)]
pub fn density_U(d: u64, p: u64) -> Result<Ratio<BigInt>, SeriesError> {
    if p == 0 {
        return Err(SeriesError::ZeroPatternSize);
    }
    Ok(Ratio::new(
        BigInt::from(d),
        BigInt::from(4 * d).pow(p as u32),
    ))
}

/// Plain summation, for combining finitely many asymptotic densities.
pub fn sum_densities(values: &[f64]) -> f64 {
    values.iter().sum()
}

/// `C~_1 = (62 - 22 sqrt 7) / (8 sqrt(7 pi))`, the normalised
/// Newton-Puiseux constant of the length-1 reduction grammar, to 45 digits.
pub const C1_TILDE_DIGITS: &str = "0.101116689571324087156534838089149003262380655";

/// Double-precision value of [`C1_TILDE_DIGITS`].
pub const C1_TILDE: f64 = 0.101116689571324087;

/// Asymptotic densities of the classes of S/K-terms reducing in exactly
/// m = 1..7 normal-order steps.
pub const R_DENSITIES: [f64; 7] = [
    0.08961233291075565,
    0.06417374404832035,
    0.0501056553007704,
    0.04131967414765603,
    0.03570996929825453,
    0.03119525702124082,
    0.027987393260263862,
];
