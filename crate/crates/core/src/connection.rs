//! Jacobians, the coordinate derivations δ_ℓ and the connection matrices
//! A_ℓ = δ_ℓ(J)·J⁻¹, first in x (polynomial, adjugate based) and then
//! rewritten into the invariant coordinates z.

use rayon::prelude::*;

use crate::error::{ConnectionError, PolyError, RewriteError};
use crate::field::CycloNum;
use crate::group::{CMatrix, GroupData};
use crate::invariants::InvariantTuple;
use crate::linalg::{Matrix, RingElem};
use crate::poly::{MPoly, RatFun};
use crate::rewrite::Rewriter;

/// J_φ together with its adjugate and determinant.
#[derive(Clone, Debug)]
pub struct JacobianData {
    /// Row i is the gradient of φ_i.
    pub j: Matrix<MPoly>,
    pub adj: Matrix<MPoly>,
    pub det: MPoly,
    /// Scaling exponent: D^m is invariant.
    pub m: u32,
    pub degrees: Vec<u32>,
}

/// Smallest multiple of `e` that is at least 2.
pub fn scaling_exponent(e: u64) -> u32 {
    let e = e.max(1) as u32;
    e * 2u32.div_ceil(e)
}

/// `det_char_order` is the order e of the determinant character of the group.
pub fn jacobian(phi: &InvariantTuple, det_char_order: u64) -> Result<JacobianData, ConnectionError> {
    let j = phi.jacobian_matrix();
    let det = j.det();
    if det.is_zero() {
        return Err(ConnectionError::SingularJacobian);
    }
    let adj = j.adjugate();
    Ok(JacobianData { j, adj, det, m: scaling_exponent(det_char_order), degrees: phi.degrees().to_vec() })
}

impl JacobianData {
    pub fn rank(&self) -> usize {
        self.j.rows()
    }

    /// Σ_i adj_{i,ℓ}·∂f/∂x_i, i.e. D·δ_ℓ(f). `ell` is 0-based.
    pub fn scaled_delta(&self, ell: usize, f: &MPoly) -> MPoly {
        let mut acc = f.zero_like();
        for i in 0..self.rank() {
            let a = self.adj.get(i, ell);
            if !a.is_zero() {
                acc = &acc + &(a * &f.partial_derivative(i));
            }
        }
        acc
    }

    /// D·δ_ℓ(J), entrywise.
    pub fn scaled_delta_matrix(&self, ell: usize) -> Matrix<MPoly> {
        self.j.map(|e| self.scaled_delta(ell, e))
    }
}

/// δ_ℓ(f) as a rational function in x; `ell` is 1-based.
pub fn delta_apply(ell: usize, f: &MPoly, jd: &JacobianData) -> RatFun {
    assert!((1..=jd.rank()).contains(&ell), "derivation index out of range");
    RatFun::new(jd.scaled_delta(ell - 1, f), jd.det.clone()).expect("nonzero determinant")
}

/// Predicted degree of entry (r, c) of D²·A_ℓ (all indices 0-based).
pub fn predicted_degree(degrees: &[u32], ell: usize, r: usize, c: usize) -> i64 {
    let d: Vec<i64> = degrees.iter().map(|&x| x as i64).collect();
    let cof = |skip: usize| d.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &x)| x - 1).sum::<i64>();
    d[r] - 2 + cof(ell) + cof(c)
}

/// A degree-bookkeeping mismatch between a computed entry and the prediction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeDiscrepancy {
    pub ell: usize,
    pub row: usize,
    pub col: usize,
    pub predicted: i64,
    pub actual: u32,
}

/// A_ℓ = P_ℓ / D^m with every P_ℓ entry an invariant polynomial in x.
#[derive(Clone, Debug)]
pub struct ScaledConnection {
    pub p: Vec<Matrix<MPoly>>,
    pub dm: MPoly,
    pub m: u32,
    pub degree_discrepancies: Vec<DegreeDiscrepancy>,
}

/// D²·A_ℓ = (D·δ_ℓ(J))·adj.
pub fn cleared_connection_matrix(jd: &JacobianData, ell: usize) -> Matrix<MPoly> {
    jd.scaled_delta_matrix(ell).mul(&jd.adj)
}

/// Characters of the generators: (M, det(M)^{2-m}), after checking that
/// γ_M(D) = det(M)·D and det(M)^m = 1.
fn generator_characters<'g>(
    jd: &JacobianData,
    g: &'g GroupData,
) -> Result<Vec<(&'g CMatrix, CycloNum)>, ConnectionError> {
    let bad = ConnectionError::NonInvariantEntry { ell: 0, row: 0, col: 0 };
    g.generators()
        .map(|mat| {
            let chi = mat.det();
            if jd.det.linear_substitute(mat)? != jd.det.scale(&chi) || !chi.pow(jd.m as u64).is_one() {
                return Err(bad.clone());
            }
            let inv = chi.inv().map_err(PolyError::from)?;
            Ok((mat, inv.pow(jd.m as u64 - 2)))
        })
        .collect()
}

/// Builds P_ℓ = D^{m-2}·Q_ℓ with Q_ℓ = D²·A_ℓ.
///
/// Invariance of every P entry is certified on the lower-degree Q entries:
/// γ_M(Q) = det(M)^{2-m}·Q together with γ_M(D) = det(M)·D gives γ_M(P) = P,
/// since γ_M is a ring homomorphism.
pub fn scaled_connection(jd: &JacobianData, g: &GroupData) -> Result<ScaledConnection, ConnectionError> {
    let n = jd.rank();
    let characters = generator_characters(jd, g)?;
    let scale = jd.det.pow(jd.m - 2);
    let dm = jd.det.pow(jd.m);
    let base_degree = (jd.m as i64 - 2) * jd.det.homogeneous_degree().unwrap_or(0) as i64;
    let mut p = Vec::with_capacity(n);
    let mut degree_discrepancies = Vec::new();
    for ell in 0..n {
        let q = cleared_connection_matrix(jd, ell);
        let cells: Vec<(usize, usize)> = (0..n).flat_map(|r| (0..n).map(move |c| (r, c))).collect();
        let entries: Vec<MPoly> = cells
            .par_iter()
            .map(|&(r, c)| {
                let qe = q.get(r, c);
                for (mat, factor) in &characters {
                    if qe.linear_substitute(mat)? != qe.scale(factor) {
                        return Err(ConnectionError::NonInvariantEntry { ell: ell + 1, row: r + 1, col: c + 1 });
                    }
                }
                if !qe.is_homogeneous() {
                    return Err(ConnectionError::NonHomogeneousEntry { ell: ell + 1, row: r + 1, col: c + 1 });
                }
                Ok(&scale * qe)
            })
            .collect::<Result<_, _>>()?;
        for (&(r, c), e) in cells.iter().zip(&entries) {
            if let Some(actual) = e.homogeneous_degree().filter(|_| !e.is_zero()) {
                let predicted = base_degree + predicted_degree(&jd.degrees, ell, r, c);
                if predicted != actual as i64 {
                    degree_discrepancies.push(DegreeDiscrepancy { ell: ell + 1, row: r + 1, col: c + 1, predicted, actual });
                }
            }
        }
        let mut it = entries.into_iter();
        p.push(Matrix::from_fn(n, n, |_, _| it.next().expect("n*n entries")));
    }
    Ok(ScaledConnection { p, dm, m: jd.m, degree_discrepancies })
}

/// The system δ_ℓ(y) = A_ℓ·y in the invariant coordinates z.
#[derive(Clone, Debug)]
pub struct ConnectionSystem {
    pub group: String,
    /// Per-entry rational functions in z (display-reduced, equal to numerator/denominator).
    pub a: Vec<Matrix<RatFun>>,
    /// Common denominator q in z: the rewritten D^m.
    pub denominator: MPoly,
    pub invariants: InvariantTuple,
    pub m: u32,
}

impl ConnectionSystem {
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    pub fn conductor(&self) -> u32 {
        self.denominator.conductor()
    }

    /// Numerators over the common denominator: P_ℓ with A_ℓ = P_ℓ/q. Fails
    /// with the first entry whose denominator does not divide q.
    pub fn common_numerators(&self) -> Result<Vec<Matrix<MPoly>>, (usize, usize, usize)> {
        let mut out = Vec::with_capacity(self.a.len());
        for (ell, m) in self.a.iter().enumerate() {
            let mut entries = Vec::with_capacity(m.rows() * m.cols());
            for (r, c, e) in m.indexed() {
                let k = self.denominator.exact_div(e.den()).map_err(|_| (ell + 1, r + 1, c + 1))?;
                entries.push(e.num() * &k);
            }
            let mut it = entries.into_iter();
            out.push(Matrix::from_fn(m.rows(), m.cols(), |_, _| it.next().expect("entry")));
        }
        Ok(out)
    }
}

/// Cosmetic reduction of num/den: drops shared monomial content, then divides
/// out the largest perfect-power root of the denominator's non-monomial part
/// as often as it divides both sides.
pub fn reduce_display(num: &MPoly, den: &MPoly) -> RatFun {
    let mut num = num.clone();
    let mut den = den.clone();
    if num.is_zero() {
        return RatFun::new(num, den.one_like()).expect("constant denominator");
    }
    let shared = num.monomial_content().gcd(&den.monomial_content());
    num = num.div_monomial(&shared).expect("content divides");
    den = den.div_monomial(&shared).expect("content divides");

    let mono = den.monomial_content();
    let core = den.div_monomial(&mono).expect("content divides");
    if core.as_constant().is_none() {
        let lc = core.leading_coeff().expect("nonzero").inv().expect("nonzero");
        let core = core.scale(&lc);
        let deg = core.total_degree().unwrap_or(1);
        let root = (1..=deg.max(1)).rev().find_map(|k| core.nth_root(k));
        if let Some(root) = root {
            loop {
                match (num.exact_div(&root), den.exact_div(&root)) {
                    (Ok(a), Ok(b)) => {
                        num = a;
                        den = b;
                    }
                    _ => break,
                }
            }
        }
    }
    RatFun::new(num, den).expect("nonzero denominator")
}

/// Rewrites every P_ℓ entry and D^m into z.
pub fn connection_in_z(sc: &ScaledConnection, phi: &InvariantTuple, group: &str) -> Result<ConnectionSystem, ConnectionError> {
    let rw = Rewriter::new(phi);
    let denominator = rw.rewrite(&sc.dm)?;
    let mut a = Vec::with_capacity(sc.p.len());
    for p in &sc.p {
        let cells: Vec<&MPoly> = p.iter().collect();
        let rewritten: Vec<RatFun> = cells
            .par_iter()
            .map(|e| rw.rewrite(e).map(|z| reduce_display(&z, &denominator)))
            .collect::<Result<_, RewriteError>>()?;
        let mut it = rewritten.into_iter();
        a.push(Matrix::from_fn(p.rows(), p.cols(), |_, _| it.next().expect("entry")));
    }
    Ok(ConnectionSystem { group: group.to_string(), a, denominator, invariants: phi.clone(), m: sc.m })
}

/// Every intermediate object of one end-to-end computation.
#[derive(Clone, Debug)]
pub struct Computation {
    pub jacobian: JacobianData,
    pub scaled: ScaledConnection,
    pub system: ConnectionSystem,
}

pub fn compute(g: &GroupData, phi: &InvariantTuple, name: &str) -> Result<Computation, ConnectionError> {
    let jacobian = jacobian(phi, g.det_char_order())?;
    let scaled = scaled_connection(&jacobian, g)?;
    let system = connection_in_z(&scaled, phi, name)?;
    Ok(Computation { jacobian, scaled, system })
}
