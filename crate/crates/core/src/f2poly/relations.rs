//! Relation files: JSON carrying the images of `v_1, …, v_h` in the
//! polynomial generators for one `(G, m)`.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "group_n": 1,
//!   "m": 2,
//!   "generators": [{"name": "t_1", "degree": 1}, {"name": "t_2", "degree": 3}],
//!   "action": [{"generator": "t_1", "image": "t_1", "sign": -1}, ...],
//!   "v_images": [{"index": 1, "polynomial": [{"coefficient": 1, "exponents": [1, 0]}]}, ...],
//!   "extra_relations": [],
//!   "provenance": ["..."]
//! }
//! ```
//!
//! Coefficients are integers and are reduced mod 2 on load. `v_images` may
//! list fewer than `h` relations; [`RelationFile::validate`] only checks that
//! the ones present are well formed.

use serde::{Deserialize, Serialize};
use std::path::Path;

use super::groebner::IdealSpec;
use super::ring::{GeneratorTable, Monomial, MonomialOrder, PolyRing, Polynomial, SignedPermutation};
use super::PolyError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub name: String,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionEntry {
    pub generator: String,
    pub image: String,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermEntry {
    pub coefficient: i64,
    pub exponents: Vec<u16>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VImage {
    pub index: u32,
    pub polynomial: Vec<TermEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationFile {
    pub schema_version: u32,
    pub group_n: u32,
    pub m: u32,
    pub generators: Vec<GeneratorEntry>,
    #[serde(default)]
    pub action: Vec<ActionEntry>,
    pub v_images: Vec<VImage>,
    #[serde(default)]
    pub extra_relations: Vec<Vec<TermEntry>>,
    #[serde(default)]
    pub provenance: Vec<String>,
}

pub fn terms_of(p: &Polynomial) -> Vec<TermEntry> {
    p.terms()
        .iter()
        .map(|t| TermEntry {
            coefficient: 1,
            exponents: t.exponents().to_vec(),
        })
        .collect()
}

impl RelationFile {
    pub(crate) fn from_parts(
        group_n: u32,
        m: u32,
        ring: &PolyRing,
        v_images: Vec<(u32, Polynomial)>,
        extra: Vec<Polynomial>,
        provenance: Vec<String>,
    ) -> Self {
        let table = &ring.table;
        let action = table
            .action
            .as_ref()
            .map(|a| {
                a.images()
                    .iter()
                    .enumerate()
                    .map(|(i, &(j, s))| ActionEntry {
                        generator: table.names[i].clone(),
                        image: table.names[j].clone(),
                        sign: s,
                    })
                    .collect()
            })
            .unwrap_or_default();
        RelationFile {
            schema_version: SCHEMA_VERSION,
            group_n,
            m,
            generators: table
                .names
                .iter()
                .zip(&table.degrees)
                .map(|(name, &degree)| GeneratorEntry {
                    name: name.clone(),
                    degree,
                })
                .collect(),
            action,
            v_images: v_images
                .into_iter()
                .map(|(index, p)| VImage {
                    index,
                    polynomial: terms_of(&p),
                })
                .collect(),
            extra_relations: extra.iter().map(terms_of).collect(),
            provenance,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, PolyError> {
        let file: RelationFile =
            serde_json::from_str(text).map_err(|e| PolyError::RelationFile(e.to_string()))?;
        file.validate()?;
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self, PolyError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PolyError::RelationFile(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("relation files serialize")
    }

    /// `h = 2^{n-1} m`.
    pub fn height(&self) -> u64 {
        if self.group_n == 0 {
            return 0;
        }
        (1u64 << (self.group_n - 1)) * self.m as u64
    }

    pub fn table(&self) -> Result<GeneratorTable, PolyError> {
        let table = GeneratorTable::new(
            self.generators.iter().map(|g| g.name.clone()).collect(),
            self.generators.iter().map(|g| g.degree).collect(),
        )?;
        if self.action.is_empty() {
            return Ok(table);
        }
        let mut images = vec![None; table.arity()];
        for entry in &self.action {
            let i = table
                .index_of(&entry.generator)
                .ok_or_else(|| PolyError::UnknownGenerator(entry.generator.clone()))?;
            let j = table
                .index_of(&entry.image)
                .ok_or_else(|| PolyError::UnknownGenerator(entry.image.clone()))?;
            if images[i].replace((j, entry.sign)).is_some() {
                return Err(PolyError::InvalidAction(format!(
                    "generator {} listed twice in action",
                    entry.generator
                )));
            }
        }
        let images: Option<Vec<_>> = images.into_iter().collect();
        let images = images
            .ok_or_else(|| PolyError::InvalidAction("action must list every generator".into()))?;
        table.with_action(SignedPermutation::new(images)?)
    }

    pub fn ring(&self) -> Result<PolyRing, PolyError> {
        Ok(PolyRing::new(self.table()?, MonomialOrder::DegRevLex))
    }

    fn polynomial(&self, ring: &PolyRing, terms: &[TermEntry]) -> Result<Polynomial, PolyError> {
        let mut monomials = Vec::new();
        for t in terms {
            if t.exponents.len() != ring.arity() {
                return Err(PolyError::Arity {
                    expected: ring.arity(),
                    found: t.exponents.len(),
                });
            }
            if t.coefficient.rem_euclid(2) == 1 {
                monomials.push(Monomial(t.exponents.iter().copied().collect()));
            }
        }
        Ok(ring.poly(monomials))
    }

    /// `(index, image)` pairs, in file order.
    pub fn v_polynomials(&self) -> Result<Vec<(u32, Polynomial)>, PolyError> {
        let ring = self.ring()?;
        self.v_images
            .iter()
            .map(|v| Ok((v.index, self.polynomial(&ring, &v.polynomial)?)))
            .collect()
    }

    pub fn extra_polynomials(&self) -> Result<Vec<Polynomial>, PolyError> {
        let ring = self.ring()?;
        self.extra_relations
            .iter()
            .map(|t| self.polynomial(&ring, t))
            .collect()
    }

    /// The ideal `(v_1, …, v_h, extra relations)` over `F_2`.
    pub fn ideal(&self) -> Result<IdealSpec, PolyError> {
        let ring = self.ring()?;
        let mut gens: Vec<Polynomial> = self.v_polynomials()?.into_iter().map(|(_, p)| p).collect();
        gens.extend(self.extra_polynomials()?);
        Ok(IdealSpec::new(ring, gens))
    }

    pub fn validate(&self) -> Result<(), PolyError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(PolyError::RelationFile(format!(
                "unsupported schema_version {} (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let ring = self.ring()?;
        if let Some(action) = &ring.table.action {
            if self.group_n >= 1 && !action.pow(1u64 << self.group_n).is_identity() {
                return Err(PolyError::InvalidAction(format!(
                    "γ^{} is not the identity",
                    1u64 << self.group_n
                )));
            }
        }
        let h = self.height();
        let mut seen = std::collections::BTreeSet::new();
        for v in &self.v_images {
            if v.index == 0 || v.index as u64 > h {
                return Err(PolyError::RelationFile(format!(
                    "v_{} outside 1..={h}",
                    v.index
                )));
            }
            if !seen.insert(v.index) {
                return Err(PolyError::RelationFile(format!("v_{} given twice", v.index)));
            }
            let p = self.polynomial(&ring, &v.polynomial)?;
            let want = (1u64 << v.index) - 1;
            match ring.homogeneous_degree(&p) {
                Some(d) if d == want => {}
                None if p.is_zero() => {}
                other => {
                    return Err(PolyError::RelationFile(format!(
                        "v_{} image must be homogeneous of degree {want}, found {other:?}",
                        v.index
                    )))
                }
            }
        }
        for rel in &self.extra_relations {
            self.polynomial(&ring, rel)?;
        }
        Ok(())
    }
}
