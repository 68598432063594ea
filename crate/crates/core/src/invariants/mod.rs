//! Invariant theory of finite reflection groups: the Reynolds operator,
//! invariant degrees from the Molien series, fundamental invariants, and the
//! built-in catalog.

pub mod catalog;

use rayon::prelude::*;

use crate::error::InvariantError;
use crate::field::{CycloNum, Rational};
use crate::group::GroupData;
use crate::linalg::{row_reduce, Matrix};
use crate::poly::{Alphabet, MPoly, Monomial};

pub use catalog::{catalog_lookup, catalog_names, catalog_spec, CatalogEntry, GroupSpec};

/// Where a tuple of fundamental invariants came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InvariantSource {
    Catalog,
    Reynolds,
}

impl InvariantSource {
    pub fn as_str(self) -> &'static str {
        match self {
            InvariantSource::Catalog => "catalog",
            InvariantSource::Reynolds => "reynolds",
        }
    }
}

/// Homogeneous invariants φ_1, …, φ_n in the x-variables with their degrees.
#[derive(Clone, Debug)]
pub struct InvariantTuple {
    phis: Vec<MPoly>,
    degrees: Vec<u32>,
    source: InvariantSource,
}

impl InvariantTuple {
    pub fn new(phis: Vec<MPoly>, source: InvariantSource) -> Result<Self, InvariantError> {
        if phis.is_empty() {
            return Err(InvariantError::BadSpec("empty invariant tuple".into()));
        }
        let degrees = phis
            .iter()
            .enumerate()
            .map(|(i, p)| {
                p.homogeneous_degree()
                    .filter(|&d| d > 0)
                    .ok_or_else(|| InvariantError::BadSpec(format!("invariant {} is not homogeneous of positive degree", i + 1)))
            })
            .collect::<Result<_, _>>()?;
        Ok(InvariantTuple { phis, degrees, source })
    }

    pub fn phis(&self) -> &[MPoly] {
        &self.phis
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn source(&self) -> InvariantSource {
        self.source
    }

    pub fn len(&self) -> usize {
        self.phis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phis.is_empty()
    }

    /// Degrees sorted ascending, for comparison with [`invariant_degrees`].
    pub fn sorted_degrees(&self) -> Vec<u32> {
        let mut d = self.degrees.clone();
        d.sort_unstable();
        d
    }

    /// Jacobian matrix, row i = gradient of φ_i.
    pub fn jacobian_matrix(&self) -> Matrix<MPoly> {
        let n = self.phis[0].nvars();
        Matrix::from_fn(self.phis.len(), n, |i, j| self.phis[i].partial_derivative(j))
    }

    /// True iff every φ_i is fixed by every generator of `g`.
    pub fn is_invariant_under(&self, g: &GroupData) -> bool {
        self.phis.iter().all(|p| is_invariant(p, g))
    }
}

/// γ_M(f) = f for every generator M of `g`.
pub fn is_invariant(f: &MPoly, g: &GroupData) -> bool {
    g.generators().all(|m| f.linear_substitute(m).is_ok_and(|h| &h == f))
}

/// (1/|G|) Σ_{M∈G} γ_M(f).
pub fn reynolds(f: &MPoly, g: &GroupData) -> MPoly {
    // γ_M(f) substitutes M^{-1}; summing over the whole group, M ↦ M^{-1} is a bijection
    let images: Vec<MPoly> = g.elements().par_iter().map(|m| f.substitute_linear(m)).collect();
    let mut acc = MPoly::zero(f.alphabet(), f.nvars(), f.conductor());
    for p in &images {
        acc = &acc + p;
    }
    acc.scale_rational(&Rational::new(1.into(), (g.order() as i64).into()))
}

/// Coefficients of the Molien series (1/|G|) Σ det(I − tM)^{-1} up to `t^len-1`.
pub fn molien_series(g: &GroupData, len: usize) -> Vec<Rational> {
    let n = g.rank();
    let conductor = g.conductor();
    let t = MPoly::var(Alphabet::X, 1, conductor, 1);
    let one = CycloNum::one(conductor);
    // group elements by det(I - tM), stored as coefficient vectors in t
    let mut classes: Vec<(Vec<CycloNum>, usize)> = Vec::new();
    let mut seen: std::collections::HashMap<Vec<CycloNum>, usize> = std::collections::HashMap::new();
    for m in g.elements() {
        let shifted = Matrix::from_fn(n, n, |i, j| {
            let mt = t.scale(m.get(i, j));
            if i == j {
                &MPoly::constant(Alphabet::X, 1, one.clone()) - &mt
            } else {
                -&mt
            }
        });
        let d = shifted.det();
        let coeffs: Vec<CycloNum> = (0..=n)
            .map(|k| d.coeff(&Monomial(vec![k as u32])).cloned().unwrap_or_else(|| CycloNum::zero(conductor)))
            .collect();
        match seen.get(&coeffs) {
            Some(&i) => classes[i].1 += 1,
            None => {
                seen.insert(coeffs.clone(), classes.len());
                classes.push((coeffs, 1));
            }
        }
    }
    let mut total = vec![CycloNum::zero(conductor); len];
    for (p, count) in &classes {
        // 1/p(t) with p(0) = 1
        let mut s: Vec<CycloNum> = Vec::with_capacity(len);
        for k in 0..len {
            if k == 0 {
                s.push(one.clone());
                continue;
            }
            let mut acc = CycloNum::zero(conductor);
            for j in 1..=n.min(k) {
                if !p[j].is_zero() {
                    acc = &acc - &(&p[j] * &s[k - j]);
                }
            }
            s.push(acc);
        }
        let c = CycloNum::from_int(conductor, *count as i64);
        for (tk, sk) in total.iter_mut().zip(&s) {
            *tk = &*tk + &(sk * &c);
        }
    }
    let inv_order = Rational::new(1.into(), (g.order() as i64).into());
    total
        .into_iter()
        .map(|c| c.as_rational().expect("Molien coefficients are rational").clone() * &inv_order)
        .collect()
}

/// Invariant degrees d_1 ≤ … ≤ d_n, read off the Molien series by stripping
/// factors (1 − t^d)^{-1} starting from the lowest nonconstant coefficient.
pub fn invariant_degrees(g: &GroupData, max_degree: usize) -> Result<Vec<u32>, InvariantError> {
    let fail = || InvariantError::DegreeSearchFailed(max_degree);
    let len = max_degree + 1;
    let mut series = molien_series(g, len);
    let mut degrees = Vec::with_capacity(g.rank());
    for _ in 0..g.rank() {
        let d = (1..len).find(|&k| !num_traits::Zero::is_zero(&series[k])).ok_or_else(fail)?;
        for k in (d..len).rev() {
            let lower = series[k - d].clone();
            series[k] -= lower;
        }
        degrees.push(d as u32);
    }
    if series.iter().skip(1).any(|c| !num_traits::Zero::is_zero(c)) {
        return Err(fail());
    }
    let product: usize = degrees.iter().map(|&d| d as usize).product();
    let reflections: usize = degrees.iter().map(|&d| d as usize - 1).sum();
    if product != g.order() || reflections != g.reflection_indices().len() {
        return Err(fail());
    }
    Ok(degrees)
}

/// Reynolds images of the degree-`d` monomials (grlex order), keeping each one
/// that is linearly independent of those kept before it.
pub fn invariant_basis(g: &GroupData, d: u32) -> Vec<MPoly> {
    let n = g.rank();
    let conductor = g.conductor();
    let monos = Monomial::all_of_degree(n, d);
    let zero = CycloNum::zero(conductor);
    let mut basis: Vec<MPoly> = Vec::new();
    let mut echelon: Vec<Vec<CycloNum>> = Vec::new();
    for m in &monos {
        let r = reynolds(&MPoly::monomial(Alphabet::X, CycloNum::one(conductor), m.clone()), g);
        if r.is_zero() {
            continue;
        }
        let row: Vec<CycloNum> = monos.iter().map(|k| r.coeff(k).cloned().unwrap_or_else(|| zero.clone())).collect();
        let mut trial = echelon.clone();
        trial.push(row);
        let rank = row_reduce(&mut trial, monos.len()).len();
        if rank > echelon.len() {
            trial.truncate(rank);
            echelon = trial;
            basis.push(r);
        }
    }
    basis
}

fn normalize_monic(p: &MPoly) -> MPoly {
    let lc = p.leading_coeff().expect("nonzero invariant");
    p.scale(&lc.inv().expect("nonzero leading coefficient"))
}

/// Index tuples for the candidate search: for each distinct degree with
/// multiplicity k, a strictly increasing k-tuple of candidate indices; the
/// overall tuples come out in lexicographic order.
fn candidate_tuples(groups: &[(u32, usize, usize)]) -> Vec<Vec<usize>> {
    fn combos(k: usize, n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            combos(k, n, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut tuples = vec![Vec::new()];
    for &(_, mult, available) in groups {
        let mut options = Vec::new();
        combos(mult, available, 0, &mut Vec::new(), &mut options);
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                options.iter().map(move |o| {
                    let mut t = t.clone();
                    t.extend_from_slice(o);
                    t
                })
            })
            .collect();
    }
    tuples
}

/// Fundamental invariants derived from the group alone, via Reynolds averaging.
pub fn fundamental_invariants(g: &GroupData) -> Result<InvariantTuple, InvariantError> {
    let degrees = invariant_degrees(g, g.order().max(2))?;
    let mut groups: Vec<(u32, usize, usize)> = Vec::new();
    let mut candidates: Vec<Vec<MPoly>> = Vec::new();
    for &d in &degrees {
        if let Some(last) = groups.last_mut().filter(|(e, _, _)| *e == d) {
            last.1 += 1;
            continue;
        }
        let basis: Vec<MPoly> = invariant_basis(g, d).iter().map(normalize_monic).collect();
        groups.push((d, 1, basis.len()));
        candidates.push(basis);
    }
    for tuple in candidate_tuples(&groups) {
        let mut phis = Vec::with_capacity(degrees.len());
        let mut offset = 0;
        for (gi, &(_, mult, _)) in groups.iter().enumerate() {
            for &idx in &tuple[offset..offset + mult] {
                phis.push(candidates[gi][idx].clone());
            }
            offset += mult;
        }
        let tuple = InvariantTuple::new(phis, InvariantSource::Reynolds)?;
        if !tuple.jacobian_matrix().det().is_zero() {
            return Ok(tuple);
        }
    }
    Err(InvariantError::IndependenceSearchFailed)
}
