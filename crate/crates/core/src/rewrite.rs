//! Expressing invariant polynomials in the fundamental invariants.
//!
//! A homogeneous invariant f of degree D is a linear combination of the
//! products Π φ_i^{e_i} over the exponent vectors with Σ e_i d_i = D. The
//! coefficients are found by matching x-monomial coefficients and solving the
//! resulting linear system exactly.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::RewriteError;
use crate::field::CycloNum;
use crate::invariants::InvariantTuple;
use crate::linalg::{solve_augmented, Solution};
use crate::poly::{Alphabet, MPoly, Monomial};

/// All exponent vectors `e` with `Σ e_i·d_i = target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentSet {
    pub target: u32,
    pub degrees: Vec<u32>,
    /// Lexicographically descending.
    pub members: Vec<Vec<u32>>,
}

pub fn exponent_set(target: u32, degrees: &[u32]) -> ExponentSet {
    fn rec(degrees: &[u32], remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        let Some((&d, rest)) = degrees.split_first() else {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        };
        assert!(d > 0, "degrees must be positive");
        for e in (0..=remaining / d).rev() {
            prefix.push(e);
            rec(rest, remaining - e * d, prefix, out);
            prefix.pop();
        }
    }
    let mut members = Vec::new();
    rec(degrees, target, &mut Vec::new(), &mut members);
    ExponentSet { target, degrees: degrees.to_vec(), members }
}

/// Rewriting engine for one tuple of fundamental invariants. Products of
/// invariants are memoized and shared between calls.
pub struct Rewriter<'a> {
    phi: &'a InvariantTuple,
    products: Mutex<HashMap<Vec<u32>, Arc<MPoly>>>,
}

impl<'a> Rewriter<'a> {
    pub fn new(phi: &'a InvariantTuple) -> Self {
        Rewriter { phi, products: Mutex::new(HashMap::new()) }
    }

    pub fn invariants(&self) -> &InvariantTuple {
        self.phi
    }

    /// Π φ_i^{e_i}.
    pub fn product(&self, e: &[u32]) -> Arc<MPoly> {
        if let Some(p) = self.products.lock().expect("product cache poisoned").get(e) {
            return Arc::clone(p);
        }
        let p = match e.iter().position(|&k| k > 0) {
            None => {
                let sample = &self.phi.phis()[0];
                Arc::new(MPoly::constant(Alphabet::X, sample.nvars(), CycloNum::one(sample.conductor())))
            }
            Some(i) => {
                let mut lower = e.to_vec();
                lower[i] -= 1;
                let base = self.product(&lower);
                Arc::new(&*base * &self.phi.phis()[i])
            }
        };
        self.products.lock().expect("product cache poisoned").insert(e.to_vec(), Arc::clone(&p));
        p
    }

    /// Returns f̃ in z with f̃(φ) = f.
    pub fn rewrite(&self, f: &MPoly) -> Result<MPoly, RewriteError> {
        let n = self.phi.len();
        let conductor = f.conductor();
        if f.is_zero() {
            return Ok(MPoly::zero(Alphabet::Z, n, conductor));
        }
        let deg = f.homogeneous_degree().ok_or(RewriteError::NonHomogeneousInput)?;
        let set = exponent_set(deg, self.phi.degrees());
        if set.members.is_empty() {
            return Err(RewriteError::NotInvariant);
        }
        let products: Vec<Arc<MPoly>> = set.members.iter().map(|e| self.product(e)).collect();

        let mut row_of: HashMap<&Monomial, usize> = HashMap::new();
        let mut monos: Vec<&Monomial> = Vec::new();
        for p in products.iter().map(|p| &**p).chain(std::iter::once(f)) {
            for (m, _) in p.terms() {
                row_of.entry(m).or_insert_with(|| {
                    monos.push(m);
                    monos.len() - 1
                });
            }
        }
        let cols = set.members.len();
        let zero = CycloNum::zero(conductor);
        let mut rows = vec![vec![zero; cols + 1]; monos.len()];
        for (j, p) in products.iter().enumerate() {
            for (m, c) in p.terms() {
                rows[row_of[m]][j] = c.clone();
            }
        }
        for (m, c) in f.terms() {
            rows[row_of[m]][cols] = c.clone();
        }
        match solve_augmented(rows, cols) {
            Solution::Unique(coeffs) => Ok(MPoly::from_terms(
                Alphabet::Z,
                n,
                conductor,
                set.members.into_iter().map(Monomial).zip(coeffs),
            )),
            Solution::Inconsistent => Err(RewriteError::NotInvariant),
            Solution::Underdetermined => Err(RewriteError::RankDeficient),
        }
    }
}

/// One-shot form of [`Rewriter::rewrite`].
pub fn rewrite_invariant(f: &MPoly, phi: &InvariantTuple) -> Result<MPoly, RewriteError> {
    Rewriter::new(phi).rewrite(f)
}
