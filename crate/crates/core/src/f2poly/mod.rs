//! Polynomials over `F_2`, reduced Gröbner bases, radical membership and
//! quotient dimensions, plus the presentations used for the `C_2` and `C_4`
//! quotient rings.

mod groebner;
mod relations;
mod ring;
mod steenrod;

pub use groebner::{
    divide, groebner, in_ideal, is_nilpotent, is_nilpotent_witness, quotient_dim, same_basis,
    saturation_test, staircase_series, standard_monomials, GroebnerBasis, IdealSpec, Limits,
    NilpotenceWitness, QuotientDim,
};
pub use relations::{
    terms_of, ActionEntry, GeneratorEntry, RelationFile, TermEntry, VImage, SCHEMA_VERSION,
};
pub use ring::{GeneratorTable, Monomial, MonomialOrder, PolyRing, Polynomial, Rendered, SignedPermutation};
pub use steenrod::{
    c2_relation_file, c4_mod2_presentation, c4_relation_file, conjugates, milnor_ring,
    steenrod_conjugates,
};

use crate::hilbert::HeightContext;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("resource limit exceeded: {resource} (cap {cap})")]
    ResourceLimit { resource: &'static str, cap: u64 },
    #[error("arity mismatch: expected {expected} exponents, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("invalid generator table: {0}")]
    InvalidTable(String),
    #[error("invalid group action: {0}")]
    InvalidAction(String),
    #[error("cannot parse polynomial `{0}`")]
    Parse(String),
    #[error("relation file: {0}")]
    RelationFile(String),
    #[error("relation file is for (n={file_n}, m={file_m}) but the context is (n={ctx_n}, m={ctx_m})")]
    ContextMismatch {
        file_n: u32,
        file_m: u32,
        ctx_n: u32,
        ctx_m: u32,
    },
}

impl PolyError {
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, PolyError::ResourceLimit { .. })
    }
}

/// Outcome of [`verify_regularity`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub regular: bool,
    pub height: u64,
    pub sequence_length: usize,
    pub generator_count: usize,
    pub quotient_dim: QuotientDim,
    pub mismatch: Option<String>,
}

/// Checks that `(v_1, …, v_h)` is regular in `F_2[G·t_1, …, G·t_m]` by the
/// Krull-dimension count: the quotient must be finite and the sequence length
/// must equal the number of polynomial generators, `h = m·|G|/2`.
pub fn verify_regularity(
    ctx: &HeightContext,
    relations: &RelationFile,
    limits: &Limits,
) -> Result<RegularityReport, PolyError> {
    if relations.group_n != ctx.n || relations.m != ctx.m {
        return Err(PolyError::ContextMismatch {
            file_n: relations.group_n,
            file_m: relations.m,
            ctx_n: ctx.n,
            ctx_m: ctx.m,
        });
    }
    let v = relations.v_polynomials()?;
    let ring = relations.ring()?;
    let ideal = IdealSpec::new(ring.clone(), v.iter().map(|(_, p)| p.clone()).collect());
    let dim = quotient_dim(&ideal, limits)?;
    let sequence_length = v.len();
    let generator_count = ring.arity();
    let mut problems = Vec::new();
    if sequence_length as u64 != ctx.h {
        problems.push(format!("sequence length {sequence_length} != h = {}", ctx.h));
    }
    if generator_count as u64 != ctx.h {
        problems.push(format!(
            "polynomial generator count {generator_count} != h = {}",
            ctx.h
        ));
    }
    if dim == QuotientDim::Infinite {
        problems.push("quotient is infinite-dimensional".into());
    }
    Ok(RegularityReport {
        regular: problems.is_empty(),
        height: ctx.h,
        sequence_length,
        generator_count,
        quotient_dim: dim,
        mismatch: (!problems.is_empty()).then(|| problems.join("; ")),
    })
}

const BUNDLED: [(u32, u32, &str); 5] = [
    (1, 1, include_str!("../../data/c2_m1.json")),
    (1, 2, include_str!("../../data/c2_m2.json")),
    (1, 3, include_str!("../../data/c2_m3.json")),
    (2, 1, include_str!("../../data/c4_m1.json")),
    (2, 2, include_str!("../../data/c4_m2.json")),
];

/// `(group_n, m)` pairs with a relation file shipped in `data/`.
pub fn bundled_contexts() -> Vec<(u32, u32)> {
    BUNDLED.iter().map(|&(n, m, _)| (n, m)).collect()
}

/// The shipped relation file for `C_{2^group_n}` at `m`, if there is one.
pub fn bundled_relation_file(group_n: u32, m: u32) -> Option<RelationFile> {
    BUNDLED
        .iter()
        .find(|&&(n, mm, _)| n == group_n && mm == m)
        .map(|(_, _, text)| RelationFile::from_json(text).expect("bundled files are valid"))
}
