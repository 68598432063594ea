//! Group specification files and the built-in catalog.

use serde::{Deserialize, Serialize};

use crate::error::InvariantError;
use crate::field::CycloNum;
use crate::group::{close_group, CMatrix, GroupData, DEFAULT_CAP};
use crate::linalg::Matrix;
use crate::poly::{parse_expr, parse_scalar, Alphabet};

use super::{InvariantSource, InvariantTuple};

/// On-disk group description. Generators are matrices given row by row in
/// the scalar grammar; invariants (optional) are polynomials in x1..xn.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    pub name: String,
    pub conductor: u32,
    pub rank: usize,
    pub generators: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub invariants: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
}

impl GroupSpec {
    pub fn from_json(text: &str) -> Result<Self, InvariantError> {
        let spec: GroupSpec = serde_json::from_str(text).map_err(|e| InvariantError::BadSpec(e.to_string()))?;
        if spec.conductor == 0 {
            return Err(InvariantError::BadSpec("conductor must be positive".into()));
        }
        if spec.rank == 0 {
            return Err(InvariantError::BadSpec("rank must be positive".into()));
        }
        Ok(spec)
    }

    pub fn generator_matrices(&self) -> Result<Vec<CMatrix>, InvariantError> {
        self.generators
            .iter()
            .enumerate()
            .map(|(k, rows)| {
                if rows.len() != self.rank || rows.iter().any(|r| r.len() != self.rank) {
                    return Err(InvariantError::BadSpec(format!(
                        "generator {} is not {}x{}",
                        k + 1,
                        self.rank,
                        self.rank
                    )));
                }
                let parsed = rows
                    .iter()
                    .map(|r| r.iter().map(|s| parse_scalar(s, self.conductor)).collect::<Result<Vec<CycloNum>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(Matrix::from_rows(parsed))
            })
            .collect()
    }

    /// Closes the generators and validates the result as a reflection group.
    /// `cap` overrides the spec's own cap.
    pub fn build_group(&self, cap: Option<usize>) -> Result<GroupData, InvariantError> {
        let gens = self.generator_matrices()?;
        let cap = cap.or(self.cap).unwrap_or(DEFAULT_CAP);
        Ok(close_group(&gens, cap)?.validate_reflection_group()?)
    }

    /// The invariants listed in the spec, if any, as a catalog-sourced tuple.
    pub fn invariant_tuple(&self) -> Result<Option<InvariantTuple>, InvariantError> {
        let Some(list) = &self.invariants else { return Ok(None) };
        if list.len() != self.rank {
            return Err(InvariantError::BadSpec(format!("expected {} invariants, got {}", self.rank, list.len())));
        }
        let phis = list
            .iter()
            .map(|s| parse_expr(s, Alphabet::X, self.rank, self.conductor))
            .collect::<Result<Vec<_>, _>>()?;
        InvariantTuple::new(phis, InvariantSource::Catalog).map(Some)
    }
}

/// A catalog group: its spec, the closed group and the stored invariants.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub spec: GroupSpec,
    pub group: GroupData,
    pub invariants: InvariantTuple,
}

const FILES: &[(&str, &str)] = &[
    ("G(2,1,1)", include_str!("../../catalog/g211.json")),
    ("G(2,1,2)", include_str!("../../catalog/g212.json")),
    ("G4", include_str!("../../catalog/g4.json")),
    ("G5", include_str!("../../catalog/g5.json")),
    ("G6", include_str!("../../catalog/g6.json")),
    ("G7", include_str!("../../catalog/g7.json")),
];

const ALIASES: &[(&str, &str)] = &[("D8", "G(2,1,2)")];

/// Canonical catalog names, in catalog order.
pub fn catalog_names() -> Vec<&'static str> {
    FILES.iter().map(|(n, _)| *n).collect()
}

fn canonical_name(name: &str) -> Option<&'static str> {
    let trimmed: String = name.chars().filter(|c| !c.is_whitespace()).collect();
    let key = ALIASES.iter().find(|(a, _)| a.eq_ignore_ascii_case(&trimmed)).map(|(_, n)| *n).unwrap_or(&trimmed);
    FILES.iter().map(|(n, _)| *n).find(|n| n.eq_ignore_ascii_case(key))
}

/// The stored spec for a catalog group.
pub fn catalog_spec(name: &str) -> Result<GroupSpec, InvariantError> {
    let canon = canonical_name(name).ok_or_else(|| InvariantError::UnknownGroup(name.to_string()))?;
    let text = FILES.iter().find(|(n, _)| *n == canon).map(|(_, t)| *t).expect("listed");
    GroupSpec::from_json(text)
}

pub fn catalog_lookup(name: &str) -> Result<CatalogEntry, InvariantError> {
    let spec = catalog_spec(name)?;
    let group = spec.build_group(None)?;
    let invariants = spec
        .invariant_tuple()?
        .ok_or_else(|| InvariantError::BadSpec(format!("catalog entry {} has no invariants", spec.name)))?;
    Ok(CatalogEntry { spec, group, invariants })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{invariant_degrees, is_invariant};

    #[test]
    fn catalog_orders_and_degrees() {
        let expected = [
            ("G(2,1,1)", 2, vec![2], 1, 2),
            ("G(2,1,2)", 8, vec![2, 4], 4, 2),
            ("G4", 24, vec![4, 6], 8, 3),
            ("G5", 72, vec![6, 12], 16, 3),
            ("G6", 48, vec![4, 12], 14, 6),
            ("G7", 144, vec![12, 12], 22, 6),
        ];
        for (name, order, degrees, refl, e) in expected {
            let entry = catalog_lookup(name).unwrap();
            assert_eq!(entry.group.order(), order, "{name}");
            assert_eq!(entry.group.reflection_indices().len(), refl, "{name}");
            assert_eq!(entry.group.det_char_order(), e, "{name}");
            assert_eq!(invariant_degrees(&entry.group, 24).unwrap(), degrees, "{name}");
            assert_eq!(entry.invariants.sorted_degrees(), degrees, "{name}");
            for phi in entry.invariants.phis() {
                assert!(is_invariant(phi, &entry.group), "{name}");
            }
        }
    }

    #[test]
    fn lookup_names() {
        let d8 = catalog_lookup("D8").unwrap();
        assert_eq!(d8.spec.name, "G(2,1,2)");
        assert_eq!(d8.invariants.phis()[1].to_string(), "x1^2*x2^2");
        assert!(catalog_lookup("g(2, 1, 2)").is_ok());
        assert_eq!(catalog_lookup("G99").unwrap_err(), InvariantError::UnknownGroup("G99".into()));
        let g6 = catalog_lookup("G6").unwrap();
        let q = parse_expr("x1^5*x2 - x1*x2^5", Alphabet::X, 2, 12).unwrap();
        assert_eq!(g6.invariants.phis()[1], q.pow(2));
    }

    #[test]
    fn spec_errors() {
        assert!(matches!(GroupSpec::from_json("{}"), Err(InvariantError::BadSpec(_))));
        let bad = r#"{"name":"x","conductor":4,"rank":2,"generators":[[["1"]]]}"#;
        let spec = GroupSpec::from_json(bad).unwrap();
        assert!(matches!(spec.build_group(None), Err(InvariantError::BadSpec(_))));
        let bad = r#"{"name":"x","conductor":4,"rank":1,"generators":[[["1+"]]]}"#;
        assert!(matches!(GroupSpec::from_json(bad).unwrap().build_group(None), Err(InvariantError::Poly(_))));
    }
}
