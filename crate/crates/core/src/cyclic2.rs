//! Cyclic 2-groups `C_{2^n}` and the orbits of `C_2`-equivariant markings
//! `f: G -> {0, 1}`.
//!
//! Group elements are residues `0..2^n` with generator `γ = 1`; the unique
//! element of order two is `σ = 2^{n-1}`. A marking is constant on the
//! `C_2`-cosets `{γ^j, σγ^j}`, so it is stored as one bit per coset
//! (`j = 0..2^{n-1}`). Translation by `γ^a` rotates that bit-vector by `a`.

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Largest exponent for which markings are enumerated explicitly
/// (`2^{2^{n-1}}` markings, i.e. 65536 at `n = 5`).
pub const MAX_ENUMERATION_EXPONENT: u32 = 5;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("the trivial group C1 contains no C2; n must be at least 1")]
    TrivialGroup,
    #[error("C_2^{n} is too large to enumerate markings (limit n <= {limit})")]
    TooLarge { n: u32, limit: u32 },
    #[error("subgroup exponent {exponent} exceeds group exponent {n}")]
    NotASubgroup { exponent: u32, n: u32 },
    #[error("cannot parse group name `{0}`; expected e, C1, C2, C4, C8, ...")]
    BadName(String),
}

/// The cyclic group of order `2^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicGroup {
    n: u32,
}

impl CyclicGroup {
    pub fn new(n: u32) -> Self {
        assert!(n < 32, "group exponent {n} out of range");
        CyclicGroup { n }
    }

    pub fn exponent(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u64 {
        1u64 << self.n
    }

    /// Number of `C_2`-cosets, `|G|/2`. Only meaningful for `n >= 1`.
    pub fn coset_count(&self) -> u64 {
        debug_assert!(self.n >= 1);
        1u64 << (self.n - 1)
    }

    /// The order-two element `σ = γ^{2^{n-1}}`, if there is one.
    pub fn sigma(&self) -> Option<u64> {
        (self.n >= 1).then(|| 1u64 << (self.n - 1))
    }

    /// Parses `C8`, `C_8`, `c8`, or `e`/`C1` into a group.
    pub fn parse(name: &str) -> Result<Self, GroupError> {
        let s = name.trim();
        if s == "e" {
            return Ok(CyclicGroup::new(0));
        }
        let digits = s
            .strip_prefix("C_")
            .or_else(|| s.strip_prefix('C'))
            .or_else(|| s.strip_prefix('c'))
            .ok_or_else(|| GroupError::BadName(name.to_string()))?;
        let order: u64 = digits
            .parse()
            .map_err(|_| GroupError::BadName(name.to_string()))?;
        if order == 0 || !order.is_power_of_two() || order > (1 << 31) {
            return Err(GroupError::BadName(name.to_string()));
        }
        Ok(CyclicGroup::new(order.trailing_zeros()))
    }

    fn require_c2(&self) -> Result<(), GroupError> {
        if self.n == 0 {
            Err(GroupError::TrivialGroup)
        } else {
            Ok(())
        }
    }

    fn require_enumerable(&self) -> Result<(), GroupError> {
        self.require_c2()?;
        if self.n > MAX_ENUMERATION_EXPONENT {
            return Err(GroupError::TooLarge {
                n: self.n,
                limit: MAX_ENUMERATION_EXPONENT,
            });
        }
        Ok(())
    }
}

impl fmt::Display for CyclicGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&subgroup_name(self.n))
    }
}

/// Display name of `C_{2^k}`: `e`, `C2`, `C4`, ...
pub fn subgroup_name(k: u32) -> String {
    if k == 0 {
        "e".to_string()
    } else {
        format!("C{}", 1u64 << k)
    }
}

/// The subgroup lattice of `C_{2^n}` is the chain `{e} ⊂ C_2 ⊂ … ⊂ G`;
/// subgroups are listed by exponent.
pub fn subgroups(group: CyclicGroup) -> Vec<u32> {
    (0..=group.n).collect()
}

/// A `C_2`-equivariant function `G -> {0, 1}`, stored per coset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Marking {
    n: u32,
    bits: u32,
}

impl Marking {
    /// Builds a marking from per-coset values; `values.len()` must be `2^{n-1}`.
    pub fn from_cosets(group: CyclicGroup, values: &[bool]) -> Result<Self, GroupError> {
        group.require_enumerable()?;
        assert_eq!(values.len() as u64, group.coset_count(), "wrong marking length");
        let bits = values
            .iter()
            .enumerate()
            .fold(0u32, |acc, (j, &v)| acc | ((v as u32) << j));
        Ok(Marking { n: group.n, bits })
    }

    pub fn group(&self) -> CyclicGroup {
        CyclicGroup::new(self.n)
    }

    fn len(&self) -> u32 {
        1 << (self.n - 1)
    }

    fn mask(&self) -> u32 {
        if self.len() == 32 {
            u32::MAX
        } else {
            (1u32 << self.len()) - 1
        }
    }

    /// Value on the coset `{γ^j, σγ^j}`.
    pub fn coset_value(&self, j: u32) -> bool {
        (self.bits >> (j % self.len())) & 1 == 1
    }

    /// Value at the group element with residue `g`.
    pub fn value_at(&self, g: u64) -> bool {
        self.coset_value((g % (1u64 << (self.n - 1))) as u32)
    }

    pub fn cosets(&self) -> Vec<bool> {
        (0..self.len()).map(|j| self.coset_value(j)).collect()
    }

    /// `(γ^a · f)(j) = f(j + a)`.
    pub fn translate(&self, a: u32) -> Marking {
        let len = self.len();
        let a = a % len;
        if a == 0 {
            return *self;
        }
        let rotated = ((self.bits >> a) | (self.bits << (len - a))) & self.mask();
        Marking {
            n: self.n,
            bits: rotated,
        }
    }

    /// Number of cosets marked 1.
    pub fn marked_cosets(&self) -> u32 {
        self.bits.count_ones()
    }

    /// Smallest `p > 0` with `γ^p · f = f`; always a power of two.
    pub fn period(&self) -> u32 {
        let len = self.len();
        let mut p = 1;
        while p < len {
            if self.translate(p) == *self {
                return p;
            }
            p <<= 1;
        }
        len
    }

    /// Lexicographic key on the coset sequence `f(0), f(1), …`.
    fn lex_key(&self) -> Vec<bool> {
        self.cosets()
    }
}

impl fmt::Display for Marking {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.cosets() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// All `2^{2^{n-1}}` markings, in increasing order of their bit encoding.
pub fn enumerate_markings(group: CyclicGroup) -> Result<Vec<Marking>, GroupError> {
    group.require_enumerable()?;
    let count = 1u64 << group.coset_count();
    Ok((0..count)
        .map(|bits| Marking {
            n: group.n,
            bits: bits as u32,
        })
        .collect())
}

/// A `G`-orbit of markings together with the data the Koszul filtration
/// reads off it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkingOrbit {
    pub representative: Marking,
    /// `H_f = C_{2^k}`.
    pub stabilizer_exponent: u32,
    pub orbit_size: u64,
    /// `|f⁻¹(1) / H_f|`.
    pub n_f: u64,
    /// `½ |f⁻¹(1)|`, counted in `G`.
    pub grading: u64,
}

impl MarkingOrbit {
    fn of(rep: Marking) -> Self {
        let group = rep.group();
        let period = rep.period() as u64;
        let stabilizer_exponent = group.n - period.trailing_zeros();
        let grading = rep.marked_cosets() as u64;
        // cosets per H_f-orbit of cosets
        let per_orbit = group.coset_count() / period;
        MarkingOrbit {
            representative: rep,
            stabilizer_exponent,
            orbit_size: period,
            n_f: grading / per_orbit,
            grading,
        }
    }

    pub fn stabilizer_order(&self) -> u64 {
        1u64 << self.stabilizer_exponent
    }

    pub fn is_constant(&self) -> bool {
        let g = self.representative.group();
        self.grading == 0 || self.grading == g.coset_count()
    }

    /// `H_f`-coset classes of `G` as residues modulo the period, split by
    /// the value of `f`: `(f⁻¹(0)/H_f, f⁻¹(1)/H_f)`.
    pub fn coset_classes(&self) -> (Vec<u32>, Vec<u32>) {
        let period = self.orbit_size as u32;
        (0..period).partition(|&a| !self.representative.coset_value(a))
    }
}

/// Orbits of `G` on `Map^{C_2}(G, {0,1})`, sorted by grading, then by
/// decreasing stabilizer, then by representative.
pub fn orbit_decompose(group: CyclicGroup) -> Result<Vec<MarkingOrbit>, GroupError> {
    let markings = enumerate_markings(group)?;
    let len = group.coset_count() as u32;
    let mut seen = vec![false; markings.len()];
    let mut orbits = Vec::new();
    for f in &markings {
        if seen[f.bits as usize] {
            continue;
        }
        let mut rep = *f;
        for a in 0..len {
            let g = f.translate(a);
            seen[g.bits as usize] = true;
            if g.lex_key() < rep.lex_key() {
                rep = g;
            }
        }
        orbits.push(MarkingOrbit::of(rep));
    }
    orbits.sort_by(|a, b| {
        a.grading
            .cmp(&b.grading)
            .then(b.stabilizer_exponent.cmp(&a.stabilizer_exponent))
            .then(a.representative.lex_key().cmp(&b.representative.lex_key()))
    });
    Ok(orbits)
}

/// Burnside count of orbits of the rotation action on `2^{n-1}` cosets.
/// Independent of [`orbit_decompose`]; used to cross-check it.
pub fn burnside_orbit_count(group: CyclicGroup) -> Result<u64, GroupError> {
    group.require_c2()?;
    let len = group.coset_count();
    if len > 62 {
        return Err(GroupError::TooLarge { n: group.n, limit: 6 });
    }
    let total: u128 = (0..len)
        .map(|a| 1u128 << num_integer::gcd(a, len))
        .sum();
    Ok((total / len as u128) as u64)
}
