//! Sparse multivariate polynomials and rational functions over ℚ(ζ_N).
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lexicographic with `var1 > var2 > … > varn`. The largest key is the
//! leading term.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{FieldError, PolyError};
use crate::field::{fmt_rational, CycloNum, Rational};
use crate::linalg::{Matrix, RingElem};

/// Which family of variables a polynomial is written in: `x` for the
/// coordinates the group acts on, `z` for the fundamental-invariant coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Alphabet {
    X,
    Z,
}

impl Alphabet {
    pub fn letter(self) -> char {
        match self {
            Alphabet::X => 'x',
            Alphabet::Z => 'z',
        }
    }
}

/// Exponent vector ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other`, if `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| *a.min(b)).collect())
    }

    /// All monomials in `nvars` variables of total degree `d`, largest first.
    pub fn all_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
        fn rec(prefix: &mut Vec<u32>, left: usize, remaining: u32, out: &mut Vec<Monomial>) {
            if left == 1 {
                prefix.push(remaining);
                out.push(Monomial(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in (0..=remaining).rev() {
                prefix.push(e);
                rec(prefix, left - 1, remaining - e, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if nvars == 0 {
            if d == 0 {
                out.push(Monomial(vec![]));
            }
            return out;
        }
        rec(&mut Vec::new(), nvars, d, &mut out);
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `nvars` variables of one alphabet with coefficients in ℚ(ζ_N).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly {
    alphabet: Alphabet,
    nvars: usize,
    conductor: u32,
    terms: BTreeMap<Monomial, CycloNum>,
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MPoly({})", self)
    }
}

impl MPoly {
    pub fn zero(alphabet: Alphabet, nvars: usize, conductor: u32) -> Self {
        MPoly { alphabet, nvars, conductor, terms: BTreeMap::new() }
    }

    pub fn constant(alphabet: Alphabet, nvars: usize, c: CycloNum) -> Self {
        let mut p = MPoly::zero(alphabet, nvars, c.conductor());
        if !c.is_zero() {
            p.terms.insert(Monomial::one(nvars), c);
        }
        p
    }

    /// The variable with 1-based index `i`.
    pub fn var(alphabet: Alphabet, nvars: usize, conductor: u32, i: usize) -> Self {
        assert!(i >= 1 && i <= nvars, "variable index out of range");
        let mut e = vec![0; nvars];
        e[i - 1] = 1;
        let mut p = MPoly::zero(alphabet, nvars, conductor);
        p.terms.insert(Monomial(e), CycloNum::one(conductor));
        p
    }

    pub fn monomial(alphabet: Alphabet, c: CycloNum, m: Monomial) -> Self {
        let nvars = m.0.len();
        let mut p = MPoly::zero(alphabet, nvars, c.conductor());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a polynomial from (monomial, coefficient) pairs, summing repeats.
    pub fn from_terms(
        alphabet: Alphabet,
        nvars: usize,
        conductor: u32,
        terms: impl IntoIterator<Item = (Monomial, CycloNum)>,
    ) -> Self {
        let mut p = MPoly::zero(alphabet, nvars, conductor);
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars);
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: CycloNum) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v = &*v + &c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending grlex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CycloNum)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Option<&CycloNum> {
        self.terms.get(m)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &CycloNum)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&CycloNum> {
        self.leading_term().map(|(_, c)| c)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Common degree of all terms, or `None` for zero and non-homogeneous polynomials.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    /// Degree with respect to weights `w` (e.g. the invariant degrees for z-polynomials),
    /// if every term has the same weighted degree.
    pub fn weighted_homogeneous_degree(&self, w: &[u32]) -> Option<u32> {
        let mut it = self.terms.keys().map(|m| m.0.iter().zip(w).map(|(e, d)| e * d).sum::<u32>());
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn as_constant(&self) -> Option<CycloNum> {
        match self.terms.len() {
            0 => Some(CycloNum::zero(self.conductor)),
            1 => {
                let (m, c) = self.leading_term()?;
                (m.degree() == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    fn same_ring(&self, other: &MPoly) -> Result<(), PolyError> {
        if self.conductor != other.conductor {
            return Err(PolyError::ConductorMismatch(self.conductor, other.conductor));
        }
        if self.alphabet != other.alphabet || self.nvars != other.nvars {
            return Err(PolyError::RingMismatch(format!(
                "{}[{}] vs {}[{}]",
                self.alphabet.letter(),
                self.nvars,
                other.alphabet.letter(),
                other.nvars
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.same_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &MPoly) -> Result<MPoly, PolyError> {
        self.same_ring(other)?;
        let mut acc: HashMap<Monomial, CycloNum> = HashMap::with_capacity(self.len() * other.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(v) => *v = &*v + &c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(MPoly { alphabet: self.alphabet, nvars: self.nvars, conductor: self.conductor, terms })
    }

    pub fn scale(&self, c: &CycloNum) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.alphabet, self.nvars, self.conductor);
        }
        let terms = self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect();
        MPoly { terms, ..self.shell() }
    }

    pub fn scale_rational(&self, q: &Rational) -> MPoly {
        self.scale(&CycloNum::from_rational(self.conductor, q.clone()))
    }

    fn shell(&self) -> MPoly {
        MPoly::zero(self.alphabet, self.nvars, self.conductor)
    }

    pub fn mul_monomial(&self, m: &Monomial) -> MPoly {
        let terms = self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect();
        MPoly { terms, ..self.shell() }
    }

    pub fn pow(&self, e: u32) -> MPoly {
        let mut acc = MPoly::constant(self.alphabet, self.nvars, CycloNum::one(self.conductor));
        let mut base = self.clone();
        let mut e = e;
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

    /// Exact quotient `f / g` by leading-term elimination.
    pub fn exact_div(&self, g: &MPoly) -> Result<MPoly, PolyError> {
        self.same_ring(g)?;
        let (lm_g, lc_g) = g.leading_term().ok_or(PolyError::Field(FieldError::DivisionByZero))?;
        let lc_inv = lc_g.inv()?;
        let mut rem = self.clone();
        let mut quot = self.shell();
        while let Some((lm, lc)) = rem.leading_term() {
            let m = lm.div(lm_g).ok_or(PolyError::NotDivisible)?;
            let c = lc * &lc_inv;
            let t = MPoly::monomial(self.alphabet, c.clone(), m.clone());
            rem = &rem - &(&t * g);
            quot.add_term(m, c);
        }
        Ok(quot)
    }

    /// Divides by a monomial that must divide every term.
    pub fn div_monomial(&self, m: &Monomial) -> Option<MPoly> {
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| k.div(m).map(|q| (q, v.clone())))
            .collect::<Option<BTreeMap<_, _>>>()?;
        Some(MPoly { terms, ..self.shell() })
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(self.nvars),
            Some(first) => it.fold(first.clone(), |acc, m| acc.gcd(m)),
        }
    }

    /// Formal partial derivative with respect to the variable with 0-based index `i`.
    pub fn partial_derivative(&self, i: usize) -> MPoly {
        assert!(i < self.nvars, "variable index out of range");
        let mut out = self.shell();
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut nm = m.clone();
            nm.0[i] -= 1;
            out.terms.insert(nm, c.scale(&Rational::from_integer(e.into())));
        }
        out
    }

    /// Replaces each variable `v_i` by `images[i]`; the result lives in the images' ring.
    /// Evaluated by nested Horner schemes, one variable at a time.
    pub fn compose(&self, images: &[MPoly]) -> MPoly {
        assert_eq!(images.len(), self.nvars, "one image per variable required");
        let Some(target) = images.first().map(MPoly::shell) else { return self.clone() };
        let terms: Vec<(&Monomial, &CycloNum)> = self.terms.iter().collect();
        let mut powers: Vec<Vec<MPoly>> = images.iter().map(|_| vec![target.one_like()]).collect();
        horner(&terms, 0, images, &target, &mut powers)
    }

    /// Substitutes `x_j ↦ Σ_k l[j][k]·x_k`.
    pub fn substitute_linear(&self, l: &Matrix<CycloNum>) -> MPoly {
        assert!(l.is_square() && l.rows() == self.nvars, "substitution matrix shape");
        let forms: Vec<MPoly> = (0..self.nvars)
            .map(|j| {
                MPoly::from_terms(
                    self.alphabet,
                    self.nvars,
                    self.conductor,
                    (0..self.nvars).map(|k| {
                        let mut e = vec![0; self.nvars];
                        e[k] = 1;
                        (Monomial(e), l.get(j, k).clone())
                    }),
                )
            })
            .collect();
        self.compose(&forms)
    }

    /// The group action γ_M(f)(x) = f(x·M^{-⊤}).
    pub fn linear_substitute(&self, m: &Matrix<CycloNum>) -> Result<MPoly, PolyError> {
        let inv = m.inverse().ok_or(PolyError::SingularMatrix)?;
        // (x·M^{-⊤})_j = Σ_k x_k (M^{-1})_{jk}
        Ok(self.substitute_linear(&inv))
    }

    /// Same polynomial, variables relabelled into another alphabet.
    pub fn with_alphabet(&self, alphabet: Alphabet) -> MPoly {
        MPoly { alphabet, ..self.clone() }
    }

    /// Returns `r` with `r^k = self` when `self` is monic and a perfect k-th power.
    pub fn nth_root(&self, k: u32) -> Option<MPoly> {
        let (lm, lc) = self.leading_term()?;
        if k == 0 || !lc.is_one() || lm.0.iter().any(|e| e % k != 0) {
            return None;
        }
        if k == 1 {
            return Some(self.clone());
        }
        let lead = Monomial(lm.0.iter().map(|e| e / k).collect());
        let mut root = MPoly::monomial(self.alphabet, CycloNum::one(self.conductor), lead.clone());
        let kq = CycloNum::from_int(self.conductor, k as i64);
        let denom_mono = Monomial(lead.0.iter().map(|e| e * (k - 1)).collect());
        let mut last = lead;
        loop {
            let rem = self - &root.pow(k);
            let Some((rm, rc)) = rem.leading_term() else {
                return Some(root);
            };
            let m = rm.div(&denom_mono)?;
            if m >= last {
                return None;
            }
            let c = rc.try_div(&kq).ok()?;
            root.add_term(m.clone(), c);
            last = m;
        }
    }

    /// Expands polynomial entries of a matrix product `A·M` with a scalar matrix `M`.
    pub fn matrix_times_scalar(a: &Matrix<MPoly>, m: &Matrix<CycloNum>) -> Matrix<MPoly> {
        Matrix::from_fn(a.rows(), m.cols(), |i, j| {
            let mut acc = a.get(i, 0).shell();
            for k in 0..a.cols() {
                if !m.get(k, j).is_zero() {
                    acc = &acc + &a.get(i, k).scale(m.get(k, j));
                }
            }
            acc
        })
    }

    pub fn display(&self, style: Style) -> String {
        format_poly(self, style)
    }
}

fn horner(
    terms: &[(&Monomial, &CycloNum)],
    var: usize,
    images: &[MPoly],
    target: &MPoly,
    powers: &mut [Vec<MPoly>],
) -> MPoly {
    if var == images.len() {
        let mut out = target.clone();
        for (_, c) in terms {
            out.add_term(Monomial::one(target.nvars), (*c).clone());
        }
        return out;
    }
    let mut groups: BTreeMap<u32, Vec<(&Monomial, &CycloNum)>> = BTreeMap::new();
    for &(m, c) in terms {
        groups.entry(m.0[var]).or_default().push((m, c));
    }
    let step = |gap: u32, acc: MPoly, powers: &mut [Vec<MPoly>]| -> MPoly {
        if gap == 0 || acc.is_zero() {
            return acc;
        }
        let table = &mut powers[var];
        while table.len() <= gap as usize {
            let next = table.last().expect("starts with 1") * &images[var];
            table.push(next);
        }
        &acc * &table[gap as usize]
    };
    let mut acc = target.clone();
    let mut prev: Option<u32> = None;
    for (&k, group) in groups.iter().rev() {
        if let Some(pk) = prev {
            acc = step(pk - k, acc, powers);
        }
        let inner = horner(group, var + 1, images, target, powers);
        acc = &acc + &inner;
        prev = Some(k);
    }
    step(prev.unwrap_or(0), acc, powers)
}

impl RingElem for MPoly {
    fn zero_like(&self) -> Self {
        self.shell()
    }
    fn one_like(&self) -> Self {
        MPoly::constant(self.alphabet, self.nvars, CycloNum::one(self.conductor))
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
}

impl Add for &MPoly {
    type Output = MPoly;
    fn add(self, rhs: &MPoly) -> MPoly {
        self.try_add(rhs).expect("polynomial ring mismatch")
    }
}

impl Sub for &MPoly {
    type Output = MPoly;
    fn sub(self, rhs: &MPoly) -> MPoly {
        self.try_sub(rhs).expect("polynomial ring mismatch")
    }
}

impl Mul for &MPoly {
    type Output = MPoly;
    fn mul(self, rhs: &MPoly) -> MPoly {
        self.try_mul(rhs).expect("polynomial ring mismatch")
    }
}

impl Neg for &MPoly {
    type Output = MPoly;
    fn neg(self) -> MPoly {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect();
        MPoly { terms, ..self.shell() }
    }
}

/// Output flavour for polynomials and scalars.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    /// The parseable expression grammar (`zeta` powers).
    Grammar,
    /// Human-readable, with `i` and `sqrt(3)` where the conductor allows.
    Text,
    Latex,
}

/// Formats a coefficient as a list of signed summands `(negative, magnitude)`.
fn scalar_parts(c: &CycloNum, style: Style) -> Vec<(bool, String)> {
    let render = |q: &Rational, label: &str, latex: bool| -> (bool, String) {
        let neg = q.is_negative();
        let mag = q.abs();
        let num = if latex && !mag.denom().is_one() {
            format!("\\frac{{{}}}{{{}}}", mag.numer(), mag.denom())
        } else {
            fmt_rational(&mag)
        };
        let s = match (label.is_empty(), mag.is_one()) {
            (true, _) => num,
            (false, true) => label.to_string(),
            (false, false) if latex => format!("{num}{label}"),
            (false, false) => format!("{num}*{label}"),
        };
        (neg, s)
    };
    if style != Style::Grammar {
        if let Some(terms) = c.surd_terms() {
            let latex = style == Style::Latex;
            return terms
                .iter()
                .map(|(q, s)| render(q, if latex { s.latex() } else { s.text() }, latex))
                .collect();
        }
    }
    let latex = style == Style::Latex;
    c.coeffs()
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, q)| !num_traits::Zero::is_zero(*q))
        .map(|(k, q)| {
            let label = match (k, latex) {
                (0, _) => String::new(),
                (1, false) => "zeta".to_string(),
                (1, true) => "\\zeta".to_string(),
                (_, false) => format!("zeta^{k}"),
                (_, true) => format!("\\zeta^{{{k}}}"),
            };
            render(q, &label, latex)
        })
        .collect()
}

fn join_parts(parts: &[(bool, String)]) -> String {
    let mut s = String::new();
    for (i, (neg, mag)) in parts.iter().enumerate() {
        match (i, neg) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        s.push_str(mag);
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

/// Scalar in the requested style.
pub fn format_scalar(c: &CycloNum, style: Style) -> String {
    join_parts(&scalar_parts(c, style))
}

fn format_monomial(m: &Monomial, letter: char, style: Style) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let v = match style {
            Style::Latex => format!("{letter}_{{{}}}", i + 1),
            _ => format!("{letter}{}", i + 1),
        };
        parts.push(match (e, style) {
            (1, _) => v,
            (_, Style::Latex) => format!("{v}^{{{e}}}"),
            _ => format!("{v}^{e}"),
        });
    }
    let sep = if style == Style::Latex { " " } else { "*" };
    parts.join(sep)
}

fn format_poly(p: &MPoly, style: Style) -> String {
    let mut out = String::new();
    let letter = p.alphabet.letter();
    for (idx, (m, c)) in p.terms().enumerate() {
        let parts = scalar_parts(c, style);
        let mono = format_monomial(m, letter, style);
        let (neg, body) = if parts.len() == 1 {
            let (neg, mag) = &parts[0];
            let body = match (mono.is_empty(), mag == "1") {
                (true, _) => mag.clone(),
                (false, true) => mono.clone(),
                (false, false) if style == Style::Latex => format!("{mag} {mono}"),
                (false, false) => format!("{mag}*{mono}"),
            };
            (*neg, body)
        } else {
            let inner = join_parts(&parts);
            let body = if mono.is_empty() {
                format!("({inner})")
            } else if style == Style::Latex {
                format!("\\left({inner}\\right) {mono}")
            } else {
                format!("({inner})*{mono}")
            };
            (false, body)
        };
        match (idx, neg) {
            (0, true) => out.push('-'),
            (0, false) => {}
            (_, true) => out.push_str(" - "),
            (_, false) => out.push_str(" + "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Prints in the parseable grammar, highest grlex term first.
impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_poly(self, Style::Grammar))
    }
}

// ---------------------------------------------------------------------------
// parsing

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(num_bigint::BigUint),
    Ident(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = text[start..i].parse().expect("digits");
            out.push((start, Tok::Num(n)));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(PolyError::Syntax { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    alphabet: Alphabet,
    nvars: usize,
    conductor: u32,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax { pos: self.here(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn uint(&mut self) -> Result<num_bigint::BigUint, PolyError> {
        match self.peek() {
            Some(Tok::Num(n)) => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            _ => self.err("expected an unsigned integer"),
        }
    }

    fn expr(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MPoly, PolyError> {
        let negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let mut acc = self.factor()?;
        while self.eat('*') {
            acc = &acc * &self.factor()?;
        }
        Ok(if negate { -&acc } else { acc })
    }

    fn factor(&mut self) -> Result<MPoly, PolyError> {
        let base = self.base()?;
        if self.eat('^') {
            let e = self.uint()?;
            let e: u32 = e.try_into().or_else(|_| self.err("exponent too large"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<MPoly, PolyError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let mut q = Rational::from_integer(n.into());
                if self.eat('/') {
                    let d = self.uint()?;
                    if num_traits::Zero::is_zero(&d) {
                        return self.err("zero denominator");
                    }
                    q /= Rational::from_integer(d.into());
                }
                Ok(MPoly::constant(self.alphabet, self.nvars, CycloNum::from_rational(self.conductor, q)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "zeta" {
                    // zeta^k is resolved directly rather than by repeated squaring
                    if self.peek() == Some(&Tok::Sym('^')) {
                        let save = self.pos;
                        self.pos += 1;
                        if let Ok(k) = self.uint() {
                            let k = (k % num_bigint::BigUint::from(self.conductor)).to_u64_digits();
                            let k = k.first().copied().unwrap_or(0) as i64;
                            return Ok(MPoly::constant(
                                self.alphabet,
                                self.nvars,
                                CycloNum::zeta_pow(self.conductor, k),
                            ));
                        }
                        self.pos = save;
                    }
                    return Ok(MPoly::constant(self.alphabet, self.nvars, CycloNum::zeta(self.conductor)));
                }
                let mut chars = name.chars();
                let letter = chars.next().expect("nonempty identifier");
                let idx: Option<usize> = chars.as_str().parse().ok();
                match idx {
                    Some(i) if letter == self.alphabet.letter() && i >= 1 && i <= self.nvars => {
                        Ok(MPoly::var(self.alphabet, self.nvars, self.conductor, i))
                    }
                    _ => Err(PolyError::UnknownVariable(name)),
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(_) => self.err("unexpected token"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses an expression in the polynomial grammar into canonical form.
pub fn parse_expr(text: &str, alphabet: Alphabet, nvars: usize, conductor: u32) -> Result<MPoly, PolyError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), alphabet, nvars, conductor };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// Parses a scalar literal (no variables) such as `1/2*zeta^3 - zeta`.
pub fn parse_scalar(text: &str, conductor: u32) -> Result<CycloNum, PolyError> {
    let p = parse_expr(text, Alphabet::X, 0, conductor)?;
    Ok(p.as_constant().expect("a polynomial in zero variables is constant"))
}

// ---------------------------------------------------------------------------
// rational functions

/// Quotient of two polynomials in one ring; the denominator is kept monic.
#[derive(Clone, Debug)]
pub struct RatFun {
    num: MPoly,
    den: MPoly,
}

impl RatFun {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self, PolyError> {
        num.same_ring(&den)?;
        let lc = den.leading_coeff().ok_or(PolyError::Field(FieldError::DivisionByZero))?;
        let inv = lc.inv()?;
        Ok(RatFun { num: num.scale(&inv), den: den.scale(&inv) })
    }

    pub fn from_poly(p: MPoly) -> Self {
        let den = p.one_like();
        RatFun { num: p, den }
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    /// Numerator and denominator rescaled by one rational factor so that every
    /// ζ-coordinate is an integer and the coordinates have no common divisor.
    pub fn integral_pair(&self) -> (MPoly, MPoly) {
        let f = integral_factor(&[&self.num, &self.den]);
        (self.num.scale_rational(&f), self.den.scale_rational(&f))
    }

    /// Equality by cross-multiplication.
    pub fn rf_eq(&self, other: &RatFun) -> bool {
        match (self.num.try_mul(&other.den), other.num.try_mul(&self.den)) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.as_constant().is_some_and(|c| c.is_one()) {
            return write!(f, "{}", self.num);
        }
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// The positive rational c such that c·p has integral, coprime ζ-coordinates
/// across all the given polynomials.
pub fn integral_factor(polys: &[&MPoly]) -> Rational {
    let coords = || polys.iter().flat_map(|p| p.terms.values()).flat_map(|c| c.coeffs().iter());
    let lcm = coords().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let gcd = coords().fold(BigInt::zero(), |acc, q| acc.gcd(&(q.numer() * &lcm / q.denom())));
    Rational::new(lcm, if gcd.is_zero() { BigInt::one() } else { gcd })
}

pub fn rf_eq(a: &RatFun, b: &RatFun) -> bool {
    a.rf_eq(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, Surd};

    fn x(s: &str) -> MPoly {
        parse_expr(s, Alphabet::X, 2, 12).unwrap()
    }

    fn z(s: &str) -> MPoly {
        parse_expr(s, Alphabet::Z, 2, 12).unwrap()
    }

    fn scalar_matrix(rows: &[[i64; 2]; 2]) -> Matrix<CycloNum> {
        Matrix::from_fn(2, 2, |i, j| CycloNum::from_int(12, rows[i][j]))
    }

    #[test]
    fn parses_g4_invariant() {
        let p = x("x1^4 + 2*zeta^3*(zeta+zeta^11)*x1^2*x2^2 + x2^4");
        let two_i_sqrt3 = Surd::ISqrt3.value(12).scale(&rat(2, 1));
        assert_eq!(p.coeff(&Monomial(vec![2, 2])), Some(&two_i_sqrt3));
        assert_eq!(p.len(), 3);
        assert_eq!(p.homogeneous_degree(), Some(4));
    }

    #[test]
    fn parses_basic() {
        let p = x("x1^2+x2^2");
        assert_eq!(p.to_string(), "x1^2 + x2^2");
        let zero = x("0");
        assert!(zero.is_zero());
        assert_eq!(zero.to_string(), "0");
        assert_eq!(x("-x1 + 3/4*x2").to_string(), "-x1 + 3/4*x2");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_expr("x1 +", Alphabet::X, 2, 12), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse_expr("x1 $ x2", Alphabet::X, 2, 12), Err(PolyError::Syntax { pos: 3, .. })));
        assert_eq!(parse_expr("x3", Alphabet::X, 2, 12), Err(PolyError::UnknownVariable("x3".into())));
        assert_eq!(parse_expr("z1", Alphabet::X, 2, 12), Err(PolyError::UnknownVariable("z1".into())));
        assert!(parse_expr("1/0", Alphabet::X, 2, 12).is_err());
        assert!(parse_expr("", Alphabet::X, 2, 12).is_err());
    }

    #[test]
    fn scalar_literals() {
        let c = parse_scalar("1/2*zeta^3 - zeta", 12).unwrap();
        assert_eq!(c.to_string(), "1/2*zeta^3 - zeta");
        assert_eq!(parse_scalar("zeta^12", 12).unwrap(), CycloNum::one(12));
    }

    #[test]
    fn exact_division() {
        assert_eq!(x("x1^2 - x2^2").exact_div(&x("x1 - x2")).unwrap(), x("x1 + x2"));
        assert_eq!(x("x1 + x2").exact_div(&x("x1*x2")), Err(PolyError::NotDivisible));
        let sq = &x("x1^2+x2^2").pow(2) - &x("2*x1^2*x2^2");
        assert_eq!(sq, x("x1^4 + x2^4"));
    }

    #[test]
    fn derivatives() {
        assert_eq!(x("x1^2*x2^2").partial_derivative(0), x("2*x1*x2^2"));
        assert_eq!(x("x1^2+x2^2").partial_derivative(0), x("2*x1"));
        assert_eq!(x("x1^5*x2 - x1*x2^5").partial_derivative(1), x("x1^5 - 5*x1*x2^4"));
    }

    #[test]
    fn group_action_examples() {
        let m2 = scalar_matrix(&[[0, 1], [1, 0]]);
        assert_eq!(x("x1^2*x2^4").linear_substitute(&m2).unwrap(), x("x1^4*x2^2"));
        let m1 = scalar_matrix(&[[1, 0], [0, -1]]);
        assert_eq!(x("x2").linear_substitute(&m1).unwrap(), x("-x2"));
        let id = scalar_matrix(&[[1, 0], [0, 1]]);
        let f = x("x1^3 + zeta*x1*x2 + 7");
        assert_eq!(f.linear_substitute(&id).unwrap(), f);
        let sing = scalar_matrix(&[[1, 1], [1, 1]]);
        assert_eq!(f.linear_substitute(&sing), Err(PolyError::SingularMatrix));
    }

    #[test]
    fn rational_function_equality() {
        let a = RatFun::new(x("x1"), x("x2")).unwrap();
        let b = RatFun::new(x("x1*x2"), x("x2^2")).unwrap();
        assert!(a.rf_eq(&b));
        let c = RatFun::new(z("z1"), z("2")).unwrap();
        let d = RatFun::from_poly(z("1/2*z1"));
        assert!(c.rf_eq(&d));
        assert!(c.den().as_constant().unwrap().is_one());
        let e = RatFun::new(z("1"), z("z1")).unwrap();
        let f = RatFun::new(z("1"), z("z2")).unwrap();
        assert!(!e.rf_eq(&f));
    }

    #[test]
    fn grlex_order() {
        let p = x("x2^3 + x1*x2 + x1^3 + x1^2*x2");
        assert_eq!(p.to_string(), "x1^3 + x1^2*x2 + x2^3 + x1*x2");
        assert_eq!(Monomial::all_of_degree(2, 2), vec![Monomial(vec![2, 0]), Monomial(vec![1, 1]), Monomial(vec![0, 2])]);
    }

    #[test]
    fn nth_roots() {
        let r = z("z1^3 - 12*zeta^3*(zeta+zeta^11)*z2^2");
        assert_eq!(r.pow(2).nth_root(2), Some(r.clone()));
        assert_eq!(r.nth_root(2), None);
        assert_eq!(z("z1^2 - 4*z2").nth_root(2), None);
    }

    #[test]
    fn text_and_latex_styles() {
        let p = z("z1^3 - 12*zeta^3*(zeta+zeta^11)*z2^2");
        assert_eq!(p.display(Style::Text), "z1^3 - 12*i*sqrt(3)*z2^2");
        assert_eq!(p.display(Style::Latex), "z_{1}^{3} - 12i\\sqrt{3} z_{2}^{2}");
        let q = x("(1 + zeta^3)*x1");
        assert_eq!(q.display(Style::Text), "(1 + i)*x1");
        assert_eq!(parse_expr(&q.to_string(), Alphabet::X, 2, 12).unwrap(), q);
    }
}
