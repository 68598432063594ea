//! Exact arithmetic in the cyclotomic field ℚ(ζ_N).
//!
//! Elements are stored as coefficient vectors in the power basis
//! `1, ζ, …, ζ^{φ(N)-1}`, always reduced modulo the N-th cyclotomic
//! polynomial Φ_N. Because Φ_N is the minimal polynomial of ζ, the
//! representation is canonical and structural equality is field equality.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::FieldError;

/// Arbitrary-precision rational number, always in lowest terms.
pub type Rational = BigRational;

/// Builds a rational from a pair of machine integers.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Returns Φ_N as dense integer coefficients, lowest degree first.
///
/// Computed by exact division of `y^N - 1` by Φ_d for every proper divisor d of N.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1, "cyclotomic_polynomial: conductor must be positive");
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            num = exact_div_monic(&num, &cyclotomic_polynomial(d));
        }
    }
    num
}

fn exact_div_monic(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    debug_assert!(den[dd].is_one());
    let qlen = rem.len() - dd;
    let mut quot = vec![BigInt::zero(); qlen];
    for k in (0..qlen).rev() {
        let c = rem[k + dd].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[k + j] -= &c * dj;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// Per-conductor reduction data, shared by all elements of ℚ(ζ_N).
#[derive(Debug)]
pub struct CyclotomicContext {
    conductor: u32,
    degree: usize,
    modulus: Vec<BigInt>,
    /// `powers[k]` is ζ^k in the power basis, for `0 <= k < max(N, 2·deg - 1)`.
    powers: Vec<Vec<BigInt>>,
}

impl CyclotomicContext {
    fn build(n: u32) -> Self {
        let modulus = cyclotomic_polynomial(n);
        let degree = modulus.len() - 1;
        let count = (n as usize).max(2 * degree).max(1);
        let mut powers = Vec::with_capacity(count);
        let mut cur = vec![BigInt::zero(); degree];
        cur[0] = BigInt::one();
        for _ in 0..count {
            powers.push(cur.clone());
            // multiply by ζ and reduce with ζ^deg = -Σ modulus[j] ζ^j
            let top = cur[degree - 1].clone();
            for j in (1..degree).rev() {
                cur[j] = cur[j - 1].clone();
            }
            cur[0] = BigInt::zero();
            if !top.is_zero() {
                for j in 0..degree {
                    cur[j] -= &top * &modulus[j];
                }
            }
        }
        CyclotomicContext { conductor: n, degree, modulus, powers }
    }

    /// The context for conductor `n`, created on first use and kept for the process lifetime.
    pub fn get(n: u32) -> &'static CyclotomicContext {
        static CONTEXTS: OnceLock<Mutex<HashMap<u32, &'static CyclotomicContext>>> =
            OnceLock::new();
        let map = CONTEXTS.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = map.lock().expect("cyclotomic context registry poisoned");
        guard
            .entry(n)
            .or_insert_with(|| Box::leak(Box::new(CyclotomicContext::build(n))))
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    /// φ(N), the dimension of ℚ(ζ_N) over ℚ.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }
}

/// An element of ℚ(ζ_N).
#[derive(Clone)]
pub struct CycloNum {
    ctx: &'static CyclotomicContext,
    coeffs: Vec<Rational>,
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.conductor == other.ctx.conductor && self.coeffs == other.coeffs
    }
}

impl Eq for CycloNum {}

impl Hash for CycloNum {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.ctx.conductor.hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNum[N={}]({})", self.ctx.conductor, self)
    }
}

impl CycloNum {
    pub fn zero(n: u32) -> Self {
        let ctx = CyclotomicContext::get(n);
        CycloNum { ctx, coeffs: vec![Rational::zero(); ctx.degree] }
    }

    pub fn one(n: u32) -> Self {
        Self::from_rational(n, Rational::one())
    }

    pub fn from_rational(n: u32, q: Rational) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = q;
        z
    }

    pub fn from_int(n: u32, v: i64) -> Self {
        Self::from_rational(n, Rational::from_integer(BigInt::from(v)))
    }

    /// ζ_N^k for any integer k.
    pub fn zeta_pow(n: u32, k: i64) -> Self {
        let ctx = CyclotomicContext::get(n);
        let idx = k.rem_euclid(n as i64) as usize;
        let coeffs = ctx.powers[idx]
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect();
        CycloNum { ctx, coeffs }
    }

    pub fn zeta(n: u32) -> Self {
        Self::zeta_pow(n, 1)
    }

    /// Builds an element from power-basis coefficients of any length, reducing mod Φ_N.
    pub fn from_power_coeffs(n: u32, coeffs: &[Rational]) -> Self {
        let ctx = CyclotomicContext::get(n);
        let mut out = vec![Rational::zero(); ctx.degree];
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // ζ^N = 1 and the table holds at least N powers
            let row = &ctx.powers[k % ctx.conductor as usize];
            for (o, r) in out.iter_mut().zip(row) {
                if r.is_one() {
                    *o += c;
                } else if (-r).is_one() {
                    *o -= c;
                } else if !r.is_zero() {
                    *o += c * Rational::from_integer(r.clone());
                }
            }
        }
        CycloNum { ctx, coeffs: out }
    }

    pub fn conductor(&self) -> u32 {
        self.ctx.conductor
    }

    pub fn context(&self) -> &'static CyclotomicContext {
        self.ctx
    }

    /// Canonical power-basis coefficients (length φ(N)).
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> Result<(), FieldError> {
        if self.ctx.conductor != other.ctx.conductor {
            Err(FieldError::ConductorMismatch(self.ctx.conductor, other.ctx.conductor))
        } else {
            Ok(())
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(CycloNum { ctx: self.ctx, coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(CycloNum { ctx: self.ctx, coeffs })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        let d = self.ctx.degree;
        if d == 1 {
            return Ok(CycloNum { ctx: self.ctx, coeffs: vec![&self.coeffs[0] * &other.coeffs[0]] });
        }
        let mut prod = vec![Rational::zero(); 2 * d - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut out: Vec<Rational> = prod[..d].to_vec();
        for (k, c) in prod.iter().enumerate().skip(d) {
            if c.is_zero() {
                continue;
            }
            for (o, r) in out.iter_mut().zip(&self.ctx.powers[k]) {
                if r.is_one() {
                    *o += c;
                } else if (-r).is_one() {
                    *o -= c;
                } else if !r.is_zero() {
                    *o += c * Rational::from_integer(r.clone());
                }
            }
        }
        Ok(CycloNum { ctx: self.ctx, coeffs: out })
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ_N.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let modulus: Vec<Rational> =
            self.ctx.modulus.iter().map(|c| Rational::from_integer(c.clone())).collect();
        let s = upoly::inverse_mod(&self.coeffs, &modulus);
        Ok(CycloNum::from_power_coeffs(self.ctx.conductor, &s))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.check(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CycloNum { ctx: self.ctx, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = CycloNum::one(self.conductor());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplicative order if the element is a root of unity of order at most `bound`.
    pub fn root_of_unity_order(&self, bound: u64) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc.is_one() {
                return Some(k);
            }
            acc = &acc * self;
        }
        None
    }

    /// Expresses the element over the basis {1, i, √3, i√3} when the conductor allows it
    /// (N ∈ {1, 2, 3, 4, 6, 12}); returns `None` otherwise.
    pub fn surd_terms(&self) -> Option<Vec<(Rational, Surd)>> {
        let n = self.conductor();
        let basis: Vec<Surd> = match n {
            1 | 2 => vec![Surd::One],
            3 | 6 => vec![Surd::One, Surd::ISqrt3],
            4 => vec![Surd::One, Surd::I],
            12 => vec![Surd::One, Surd::I, Surd::Sqrt3, Surd::ISqrt3],
            _ => return None,
        };
        let vectors: Vec<CycloNum> = basis.iter().map(|s| s.value(n)).collect();
        let solved = crate::linalg::solve_rational_coords(&vectors, self)?;
        Some(
            solved
                .into_iter()
                .zip(basis)
                .filter(|(c, _)| !c.is_zero())
                .collect(),
        )
    }

    /// Number of nonzero power-basis terms.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

/// Real and imaginary quadratic surds used when displaying elements of ℚ(i, √3).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Surd {
    One,
    I,
    Sqrt3,
    ISqrt3,
}

impl Surd {
    /// The surd as an element of ℚ(ζ_N); N must contain it.
    pub fn value(self, n: u32) -> CycloNum {
        match self {
            Surd::One => CycloNum::one(n),
            Surd::I => CycloNum::zeta_pow(n, n as i64 / 4),
            Surd::Sqrt3 => {
                // ζ_12 + ζ_12^{-1}
                let k = n as i64 / 12;
                CycloNum::zeta_pow(n, k) + CycloNum::zeta_pow(n, -k)
            }
            Surd::ISqrt3 => {
                // ζ_3 - ζ_3^{-1} = i√3
                assert!(n % 3 == 0, "conductor {n} does not contain i*sqrt(3)");
                let k = n as i64 / 3;
                CycloNum::zeta_pow(n, k) - CycloNum::zeta_pow(n, -k)
            }
        }
    }

    pub fn text(self) -> &'static str {
        match self {
            Surd::One => "",
            Surd::I => "i",
            Surd::Sqrt3 => "sqrt(3)",
            Surd::ISqrt3 => "i*sqrt(3)",
        }
    }

    pub fn latex(self) -> &'static str {
        match self {
            Surd::One => "",
            Surd::I => "i",
            Surd::Sqrt3 => "\\sqrt{3}",
            Surd::ISqrt3 => "i\\sqrt{3}",
        }
    }
}

pub(crate) fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Prints in the scalar grammar: `c_k*zeta^k` terms, highest power first, e.g. `1/2*zeta^3 - zeta`.
impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let zeta = match k {
                0 => String::new(),
                1 => "zeta".to_string(),
                _ => format!("zeta^{k}"),
            };
            if zeta.is_empty() {
                f.write_str(&fmt_rational(&mag))?;
            } else if mag.is_one() {
                f.write_str(&zeta)?;
            } else {
                write!(f, "{}*{}", fmt_rational(&mag), zeta)?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl Add for &CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: &CycloNum) -> CycloNum {
        self.try_add(rhs).expect("conductor mismatch in addition")
    }
}

impl Sub for &CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: &CycloNum) -> CycloNum {
        self.try_sub(rhs).expect("conductor mismatch in subtraction")
    }
}

impl Mul for &CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: &CycloNum) -> CycloNum {
        self.try_mul(rhs).expect("conductor mismatch in multiplication")
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum { ctx: self.ctx, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Add for CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: CycloNum) -> CycloNum {
        &self + &rhs
    }
}

impl Sub for CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: CycloNum) -> CycloNum {
        &self - &rhs
    }
}

impl Mul for CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: CycloNum) -> CycloNum {
        &self * &rhs
    }
}

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

/// Dense univariate polynomials over ℚ, only what inversion needs.
mod upoly {
    use super::Rational;
    use num_traits::Zero;

    fn trim(p: &mut Vec<Rational>) {
        while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
        if p.is_empty() {
            p.push(Rational::zero());
        }
    }

    fn degree(p: &[Rational]) -> Option<usize> {
        p.iter().rposition(|c| !c.is_zero())
    }

    fn sub_mul(a: &[Rational], q: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut out = a.to_vec();
        let len = (q.len() + b.len()).saturating_sub(1).max(out.len());
        out.resize(len, Rational::zero());
        for (i, qi) in q.iter().enumerate() {
            if qi.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                out[i + j] -= qi * bj;
            }
        }
        trim(&mut out);
        out
    }

    fn divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let db = degree(b).expect("division by zero polynomial");
        let mut rem = a.to_vec();
        trim(&mut rem);
        let mut quot = vec![Rational::zero(); rem.len().max(1)];
        while let Some(dr) = degree(&rem) {
            if dr < db {
                break;
            }
            let c = &rem[dr] / &b[db];
            let shift = dr - db;
            for (j, bj) in b.iter().enumerate().take(db + 1) {
                rem[shift + j] -= &c * bj;
            }
            quot[shift] = c;
        }
        trim(&mut quot);
        trim(&mut rem);
        (quot, rem)
    }

    /// s with s·a ≡ 1 (mod m), assuming gcd(a, m) = 1.
    pub(super) fn inverse_mod(a: &[Rational], m: &[Rational]) -> Vec<Rational> {
        let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
        trim(&mut r1);
        let (mut s0, mut s1) = (vec![Rational::zero()], vec![Rational::from_integer(1.into())]);
        while degree(&r1).is_some_and(|d| d > 0) {
            let (q, r) = divrem(&r0, &r1);
            let s2 = sub_mul(&s0, &q, &s1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        let c = r1[0].clone();
        debug_assert!(!c.is_zero(), "element shares a factor with the modulus");
        s1.iter().map(|x| x / &c).collect()
    }
}
