//! Named generator classes with their Hodge and de Rham data, so virtual
//! varieties can be assembled symbolically by multiplying catalog entries.
//!
//! Some entries are deliberately partial: the Hodge-asymmetric surface and
//! the non-degenerating surface are only known through a few of their
//! numbers, so the catalog records those constraints and refuses to invent
//! the rest.

use crate::derham::{self, DeRhamVector};
use crate::hdr::{self, HdrElement};
use crate::hodge::HodgeDiamond;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown catalog name {0}")]
    UnknownName(String),
    #[error("entry {0} is partial and cannot enter products")]
    PartialEntry(String),
}

/// A named class. `hodge`/`derham` are present only when the full data is
/// pinned; `known` lists individual numbers for partial entries.
#[derive(Debug, Clone)]
pub struct VarietyClass {
    pub name: &'static str,
    pub dim: usize,
    pub hodge: Option<HodgeDiamond>,
    pub derham: Option<DeRhamVector>,
    /// Virtual classes are ring elements that are not classes of actual
    /// varieties (differences, normalized generators).
    pub is_virtual: bool,
    /// Individually pinned numbers for partial entries, as (label, value).
    pub known: Vec<(&'static str, i64)>,
    pub notes: &'static str,
}

impl VarietyClass {
    pub fn is_partial(&self) -> bool {
        self.hodge.is_none() || self.derham.is_none()
    }

    /// The pair, for entries with both parts pinned.
    pub fn pair(&self) -> Option<HdrElement> {
        Some(HdrElement {
            hodge: self.hodge.clone()?,
            derham: self.derham.clone()?,
        })
    }
}

pub const NAMES: [&str; 9] = [
    "point",
    "P1",
    "E",
    "P2",
    "GenD",
    "Sprime",
    "Tprime",
    "SerreSurface",
    "LangSurface",
];

pub fn get(name: &str) -> Result<VarietyClass, CatalogError> {
    let entry = match name {
        "point" => VarietyClass {
            name: "point",
            dim: 0,
            hodge: Some(HodgeDiamond::from_rows_i64(&[&[1]])),
            derham: Some(DeRhamVector::from_i64(&[1])),
            is_virtual: false,
            known: vec![],
            notes: "the one-point variety; multiplicative unit",
        },
        "P1" => VarietyClass {
            name: "P1",
            dim: 1,
            hodge: Some(HodgeDiamond::from_rows_i64(&[&[1, 0], &[0, 1]])),
            derham: Some(DeRhamVector::from_i64(&[1, 0, 1])),
            is_virtual: false,
            known: vec![],
            notes: "projective line; its class is the generator A",
        },
        "E" => VarietyClass {
            name: "E",
            dim: 1,
            hodge: Some(HodgeDiamond::from_rows_i64(&[&[1, 1], &[1, 1]])),
            derham: Some(DeRhamVector::from_i64(&[1, 2, 1])),
            is_virtual: false,
            known: vec![],
            notes: "any elliptic curve; A + B in the presentation",
        },
        "P2" => VarietyClass {
            name: "P2",
            dim: 2,
            hodge: Some(HodgeDiamond::from_rows_i64(&[
                &[1, 0, 0],
                &[0, 1, 0],
                &[0, 0, 1],
            ])),
            derham: Some(DeRhamVector::from_i64(&[1, 0, 1, 0, 1])),
            is_virtual: false,
            known: vec![],
            notes: "projective plane; A^2 - C in the presentation",
        },
        "GenD" => VarietyClass {
            name: "GenD",
            dim: 2,
            hodge: Some(HodgeDiamond::from_rows_i64(&[
                &[0, 0, 0],
                &[1, 0, 1],
                &[0, 0, 0],
            ])),
            derham: Some(DeRhamVector::from_i64(&[0, 1, 0, 1, 0])),
            is_virtual: true,
            known: vec![],
            notes: "the abstract generator D with image (x + x y^2) z^2; a virtual class, not a variety",
        },
        "Sprime" => VarietyClass {
            name: "Sprime",
            dim: 2,
            hodge: Some(HodgeDiamond::zero(2)),
            derham: Some(hdr::g2_vector()),
            is_virtual: true,
            known: vec![],
            notes: "normalized surface class (0, (t + 2t^2 + t^3) z^2); the first kernel-ideal generator",
        },
        "Tprime" => VarietyClass {
            name: "Tprime",
            dim: 3,
            hodge: Some(HodgeDiamond::zero(3)),
            derham: Some(hdr::g3_vector()),
            is_virtual: true,
            known: vec![],
            notes: "normalized threefold class (0, (t^2 + 2t^3 + t^4) z^3); the second kernel-ideal generator",
        },
        "SerreSurface" => VarietyClass {
            name: "SerreSurface",
            dim: 2,
            hodge: None,
            derham: None,
            is_virtual: false,
            known: vec![("h^{1,0}", 0), ("h^{0,1}", 1)],
            notes: "a smooth projective surface breaking Hodge symmetry: no global 1-forms yet h^1(O) = 1; the rest of its diamond is not pinned",
        },
        "LangSurface" => VarietyClass {
            name: "LangSurface",
            dim: 2,
            hodge: None,
            derham: None,
            is_virtual: false,
            known: vec![("h^{1,0}", 1), ("h^{0,1}", 1), ("h^1_dR", 1)],
            notes: "a smooth projective surface whose Hodge and de Rham numbers disagree in degree 1 (h^{1,0} + h^{0,1} = 2 but h^1_dR = 1); only these numbers are pinned",
        },
        other => return Err(CatalogError::UnknownName(other.to_string())),
    };
    Ok(entry)
}

pub fn list() -> Vec<VarietyClass> {
    NAMES.iter().map(|n| get(n).expect("built-in")).collect()
}

/// Componentwise product of the named entries; the empty product is the
/// point. Partial entries are refused.
pub fn product(names: &[&str]) -> Result<HdrElement, CatalogError> {
    let mut acc = get("point")
        .expect("built-in")
        .pair()
        .expect("point is concrete");
    for name in names {
        let entry = get(name)?;
        let pair = entry
            .pair()
            .ok_or_else(|| CatalogError::PartialEntry(entry.name.to_string()))?;
        acc = acc
            .product(&pair)
            .expect("catalog entries are members");
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concrete_entries_are_members_and_degenerate() {
        for entry in list() {
            if let Some(pair) = entry.pair() {
                assert!(pair.is_member(), "{} must satisfy both constraints", entry.name);
            }
        }
        // the honest varieties have degenerate pairs: b = s(a)
        for name in ["point", "P1", "E", "P2"] {
            let pair = get(name).unwrap().pair().unwrap();
            assert_eq!(pair.derham, derham::s(&pair.hodge), "{name}");
        }
    }

    #[test]
    fn get_examples() {
        let p1 = get("P1").unwrap();
        assert_eq!(p1.hodge.unwrap(), HodgeDiamond::from_rows_i64(&[&[1, 0], &[0, 1]]));
        assert_eq!(p1.derham.unwrap(), DeRhamVector::from_i64(&[1, 0, 1]));

        let e = get("E").unwrap();
        assert_eq!(e.hodge.unwrap(), HodgeDiamond::from_rows_i64(&[&[1, 1], &[1, 1]]));
        assert_eq!(e.derham.unwrap(), DeRhamVector::from_i64(&[1, 2, 1]));

        let s = get("SerreSurface").unwrap();
        assert!(s.is_partial());
        assert_eq!(s.known, vec![("h^{1,0}", 0), ("h^{0,1}", 1)]);

        assert!(matches!(
            get("P3"),
            Err(CatalogError::UnknownName(_))
        ));
    }

    #[test]
    fn product_examples() {
        let sq = product(&["P1", "P1"]).unwrap();
        assert_eq!(
            sq.hodge,
            HodgeDiamond::from_rows_i64(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 1]])
        );
        assert_eq!(sq.derham, DeRhamVector::from_i64(&[1, 0, 2, 0, 1]));

        let ab = product(&["E", "E"]).unwrap();
        assert_eq!(
            ab.hodge,
            HodgeDiamond::from_rows_i64(&[&[1, 2, 1], &[2, 4, 2], &[1, 2, 1]])
        );

        assert_eq!(
            product(&["SerreSurface"]),
            Err(CatalogError::PartialEntry("SerreSurface".to_string()))
        );

        // order independence
        let left = product(&["P1", "E", "P2"]).unwrap();
        let right = product(&["P2", "P1", "E"]).unwrap();
        assert_eq!(left, right);

        assert_eq!(product(&[]).unwrap(), get("point").unwrap().pair().unwrap());
    }
}
