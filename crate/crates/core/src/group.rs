//! Finite matrix groups over ℚ(ζ_N): closure from generators, reflection
//! detection and validation.

use std::collections::{HashMap, VecDeque};

use crate::error::GroupError;
use crate::field::CycloNum;
use crate::linalg::Matrix;

pub type CMatrix = Matrix<CycloNum>;

/// Default bound on the number of elements produced by [`close_group`].
pub const DEFAULT_CAP: usize = 1 << 20;

/// A finite group of n×n matrices, listed in breadth-first discovery order.
#[derive(Clone, Debug)]
pub struct GroupData {
    rank: usize,
    conductor: u32,
    elements: Vec<CMatrix>,
    index: HashMap<CMatrix, usize>,
    generator_indices: Vec<usize>,
    reflection_indices: Vec<usize>,
    det_char_order: u64,
}

/// Canonical printed form of a matrix, used to order generators.
pub fn matrix_key(m: &CMatrix) -> String {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
        .collect::<Vec<_>>()
        .join("; ")
}

/// True iff `rank(M - I) = 1`.
pub fn is_reflection_matrix(m: &CMatrix) -> bool {
    let id = CMatrix::identity_like(m.get(0, 0), m.rows());
    m.sub(&id).rank() == 1
}

/// Breadth-first closure of the group generated by `generators`.
///
/// Generators are deduplicated and sorted by their canonical print before the
/// search, so the element order depends only on the generated set.
pub fn close_group(generators: &[CMatrix], cap: usize) -> Result<GroupData, GroupError> {
    let first = generators.first().ok_or(GroupError::NoGenerators)?;
    let n = first.rows();
    let conductor = first.get(0, 0).conductor();
    for (i, g) in generators.iter().enumerate() {
        if !g.is_square() || g.rows() != n {
            return Err(GroupError::BadShape(i, n));
        }
        for c in g.iter() {
            if c.conductor() != conductor {
                return Err(GroupError::Field(crate::error::FieldError::ConductorMismatch(
                    conductor,
                    c.conductor(),
                )));
            }
        }
        if g.det().is_zero() {
            return Err(GroupError::SingularGenerator(i));
        }
    }
    let mut gens: Vec<(String, CMatrix)> = generators.iter().map(|g| (matrix_key(g), g.clone())).collect();
    gens.sort_by(|a, b| a.0.cmp(&b.0));
    gens.dedup_by(|a, b| a.0 == b.0);
    let gens: Vec<CMatrix> = gens.into_iter().map(|(_, g)| g).collect();

    let identity = CMatrix::identity_like(&CycloNum::one(conductor), n);
    let mut elements = vec![identity.clone()];
    let mut index = HashMap::from([(identity, 0usize)]);
    let mut queue = VecDeque::from([0usize]);
    while let Some(k) = queue.pop_front() {
        for s in &gens {
            let h = elements[k].mul(s);
            if index.contains_key(&h) {
                continue;
            }
            if elements.len() >= cap {
                return Err(GroupError::CapExceeded(cap));
            }
            index.insert(h.clone(), elements.len());
            queue.push_back(elements.len());
            elements.push(h);
        }
    }

    let generator_indices = gens.iter().map(|g| index[g]).collect();
    let reflection_indices = elements
        .iter()
        .enumerate()
        .filter(|(_, m)| is_reflection_matrix(m))
        .map(|(i, _)| i)
        .collect();
    let bound = 2 * conductor as u64;
    let mut det_char_order = 1u64;
    for m in &elements {
        let ord = m
            .det()
            .root_of_unity_order(bound)
            .expect("determinant of a finite-order matrix is a root of unity");
        det_char_order = lcm(det_char_order, ord);
    }
    Ok(GroupData { rank: n, conductor, elements, index, generator_indices, reflection_indices, det_char_order })
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    a / gcd(a, b) * b
}

impl GroupData {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.generator_indices
    }

    pub fn generators(&self) -> impl Iterator<Item = &CMatrix> {
        self.generator_indices.iter().map(|&i| &self.elements[i])
    }

    pub fn reflection_indices(&self) -> &[usize] {
        &self.reflection_indices
    }

    pub fn reflections(&self) -> impl Iterator<Item = &CMatrix> {
        self.reflection_indices.iter().map(|&i| &self.elements[i])
    }

    /// Least common multiple of the orders of det(M) over all elements.
    pub fn det_char_order(&self) -> u64 {
        self.det_char_order
    }

    pub fn index_of(&self, m: &CMatrix) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn contains(&self, m: &CMatrix) -> bool {
        self.index.contains_key(m)
    }

    pub fn is_reflection(&self, m: &CMatrix) -> Result<bool, GroupError> {
        if !self.contains(m) {
            return Err(GroupError::NotAMember);
        }
        Ok(is_reflection_matrix(m))
    }

    /// Confirms that the reflections contained in the group generate all of it.
    pub fn validate_reflection_group(self) -> Result<GroupData, GroupError> {
        let refl: Vec<CMatrix> = self.reflections().cloned().collect();
        if refl.is_empty() {
            return Err(GroupError::NotAReflectionGroup { order: self.order(), reflection_closure: 1 });
        }
        let sub = close_group(&refl, self.order().max(1))?;
        if sub.order() != self.order() {
            return Err(GroupError::NotAReflectionGroup {
                order: self.order(),
                reflection_closure: sub.order(),
            });
        }
        Ok(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn int_matrix(rows: &[&[i64]]) -> CMatrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| CycloNum::from_int(12, v)).collect()).collect())
    }

    fn d8() -> GroupData {
        close_group(&[int_matrix(&[&[1, 0], &[0, -1]]), int_matrix(&[&[0, 1], &[1, 0]])], DEFAULT_CAP).unwrap()
    }

    #[test]
    fn dihedral_closure() {
        let g = d8();
        assert_eq!(g.order(), 8);
        for a in [1, -1] {
            for b in [1, -1] {
                assert!(g.contains(&int_matrix(&[&[a, 0], &[0, b]])));
                assert!(g.contains(&int_matrix(&[&[0, a], &[b, 0]])));
            }
        }
        assert!(g.elements()[0].mul(&g.elements()[0]) == g.elements()[0]);
    }

    #[test]
    fn dihedral_reflections() {
        let g = d8().validate_reflection_group().unwrap();
        assert_eq!(g.reflection_indices().len(), 4);
        assert_eq!(g.det_char_order(), 2);
        assert_eq!(g.is_reflection(&int_matrix(&[&[1, 0], &[0, -1]])), Ok(true));
        assert_eq!(g.is_reflection(&int_matrix(&[&[1, 0], &[0, 1]])), Ok(false));
        assert_eq!(g.is_reflection(&int_matrix(&[&[-1, 0], &[0, -1]])), Ok(false));
        assert_eq!(g.is_reflection(&int_matrix(&[&[2, 0], &[0, 1]])), Err(GroupError::NotAMember));
        let mut expected: Vec<String> = [
            int_matrix(&[&[1, 0], &[0, -1]]),
            int_matrix(&[&[-1, 0], &[0, 1]]),
            int_matrix(&[&[0, 1], &[1, 0]]),
            int_matrix(&[&[0, -1], &[-1, 0]]),
        ]
        .iter()
        .map(matrix_key)
        .collect();
        let mut got: Vec<String> = g.reflections().map(matrix_key).collect();
        expected.sort();
        got.sort();
        assert_eq!(got, expected);
    }

    #[test]
    fn trivial_group() {
        let g = close_group(&[int_matrix(&[&[1, 0], &[0, 1]])], DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn minus_identity_is_not_a_reflection_group() {
        let g = close_group(&[int_matrix(&[&[-1, 0], &[0, -1]])], DEFAULT_CAP).unwrap();
        assert_eq!(g.order(), 2);
        assert!(matches!(g.validate_reflection_group(), Err(GroupError::NotAReflectionGroup { .. })));
    }

    #[test]
    fn sign_group_rank_one() {
        let g = close_group(&[int_matrix(&[&[-1]])], DEFAULT_CAP).unwrap().validate_reflection_group().unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.reflection_indices().len(), 1);
        assert_eq!(g.det_char_order(), 2);
    }

    #[test]
    fn errors() {
        assert!(matches!(close_group(&[int_matrix(&[&[2]])], 16), Err(GroupError::CapExceeded(16))));
        assert_eq!(
            close_group(&[int_matrix(&[&[1, 1], &[1, 1]])], 16).unwrap_err(),
            GroupError::SingularGenerator(0)
        );
        assert_eq!(close_group(&[], 16).unwrap_err(), GroupError::NoGenerators);
    }
}
