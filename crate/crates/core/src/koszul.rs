//! The Koszul-type filtration of an `S[G·x̄]`-module `M`.
//!
//! Each `G`-orbit of markings `f` contributes one summand
//! `Ind_{H_f}^G Σ^{n_f·k·ρ_{H_f}} M/(H_f·gx̄ | gH_f ∈ f⁻¹(0)/H_f)`
//! in grading `½|f⁻¹(1)|`. Everything here is symbolic: `M` is an opaque
//! token and suspensions stay in regular-representation units.

use crate::cyclic2::{orbit_decompose, subgroup_name, CyclicGroup, GroupError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// Residues of `G/H` that index conjugates `gx̄` up to the action of
/// `H = C_{2^k}`. Since `σx̄ = -x̄`, conjugates are always indexed modulo
/// `C_2`, so the modulus is `2^{n - max(k, 1)}`.
pub fn coset_modulus(group_n: u32, acting_exponent: u32) -> u32 {
    1u32 << (group_n - acting_exponent.max(1))
}

/// The variables `H·gx̄` coned off for one base class `x̄`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VariableOrbit {
    pub base_name: String,
    /// Exponent `n` of the ambient group the residues live in.
    pub group_n: u32,
    pub acting_subgroup_exponent: u32,
    /// Sorted, distinct residues modulo [`coset_modulus`].
    pub conjugate_offsets: Vec<u32>,
}

impl VariableOrbit {
    pub fn new(base: &str, group_n: u32, acting: u32, offsets: impl IntoIterator<Item = u32>) -> Self {
        assert!(acting <= group_n);
        let modulus = coset_modulus(group_n, acting);
        let mut conjugate_offsets: Vec<u32> = offsets.into_iter().map(|o| o % modulus).collect();
        conjugate_offsets.sort_unstable();
        conjugate_offsets.dedup();
        VariableOrbit {
            base_name: base.to_string(),
            group_n,
            acting_subgroup_exponent: acting,
            conjugate_offsets,
        }
    }

    pub fn modulus(&self) -> u32 {
        coset_modulus(self.group_n, self.acting_subgroup_exponent)
    }

    /// Re-express as orbits of the smaller subgroup `C_{2^target}`: each
    /// `H`-orbit of conjugates splits into `[H : K]` orbits of `K`.
    pub fn restrict(&self, target: u32) -> VariableOrbit {
        assert!(target <= self.acting_subgroup_exponent);
        let old = self.modulus();
        let new = coset_modulus(self.group_n, target);
        let offsets = self
            .conjugate_offsets
            .iter()
            .flat_map(|&a| (0..new / old).map(move |t| a + t * old));
        VariableOrbit::new(&self.base_name, self.group_n, target, offsets)
    }

    fn translated(&self, shift: u32) -> VariableOrbit {
        let modulus = self.modulus();
        VariableOrbit::new(
            &self.base_name,
            self.group_n,
            self.acting_subgroup_exponent,
            self.conjugate_offsets.iter().map(|&a| (a + shift) % modulus),
        )
    }

    fn render_conjugate(&self, offset: u32) -> String {
        let conj = match offset {
            0 => self.base_name.clone(),
            1 => format!("γ{}", self.base_name),
            a => format!("γ^{a}{}", self.base_name),
        };
        if self.acting_subgroup_exponent >= 2 {
            format!("{}·{conj}", subgroup_name(self.acting_subgroup_exponent))
        } else {
            conj
        }
    }
}

impl fmt::Display for VariableOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self
            .conjugate_offsets
            .iter()
            .map(|&a| self.render_conjugate(a))
            .collect();
        f.write_str(&parts.join(", "))
    }
}

/// Brings a list of variable orbits to conjugation normal form: the whole
/// list is translated by the `γ^t` giving the lexicographically smallest
/// offset lists, then sorted.
pub fn normalize_conjugation(vars: &[VariableOrbit]) -> Vec<VariableOrbit> {
    if vars.is_empty() {
        return Vec::new();
    }
    // conjugation by γ acts on all variables at once; the largest modulus
    // among them is a period of that action
    let period = vars.iter().map(VariableOrbit::modulus).max().unwrap_or(1);
    (0..period)
        .map(|t| {
            let mut shifted: Vec<_> = vars.iter().map(|v| v.translated(t)).collect();
            shifted.sort();
            shifted
        })
        .min()
        .unwrap()
}

/// A quotient `M/(H·gx̄, …)` viewed as an `H`-spectrum, `H = C_{2^exponent}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuotientDescriptor {
    pub module: String,
    pub group_n: u32,
    pub exponent: u32,
    pub vars: Vec<VariableOrbit>,
}

impl QuotientDescriptor {
    /// `M/(G·x̄)` as a `G`-spectrum.
    pub fn full(module: &str, base: &str, group_n: u32) -> Self {
        QuotientDescriptor {
            module: module.to_string(),
            group_n,
            exponent: group_n,
            vars: vec![VariableOrbit::new(base, group_n, group_n, [0])],
        }
    }

    pub fn normalized(&self) -> Self {
        QuotientDescriptor {
            vars: normalize_conjugation(&self.vars),
            ..self.clone()
        }
    }
}

impl fmt::Display for QuotientDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.module)?;
        let vars: Vec<_> = self
            .vars
            .iter()
            .filter(|v| !v.conjugate_offsets.is_empty())
            .map(|v| v.to_string())
            .collect();
        if !vars.is_empty() {
            write!(f, "/({})", vars.join(", "))?;
        }
        Ok(())
    }
}

/// `Res^G_H` of a quotient descriptor:
/// `Res(M/(G·x̄)) = M/(H·gx̄ | gH ∈ G/H)`.
pub fn restrict_quotient(
    desc: &QuotientDescriptor,
    target_exponent: u32,
) -> Result<QuotientDescriptor, GroupError> {
    if target_exponent > desc.exponent {
        return Err(GroupError::NotASubgroup {
            exponent: target_exponent,
            n: desc.exponent,
        });
    }
    Ok(QuotientDescriptor {
        module: desc.module.clone(),
        group_n: desc.group_n,
        exponent: target_exponent,
        vars: desc.vars.iter().map(|v| v.restrict(target_exponent)).collect(),
    })
}

/// `Σ^{multiplier·ρ_{C_{2^rep_subgroup_exponent}}}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Suspension {
    pub multiplier: u64,
    pub rep_subgroup_exponent: u32,
}

impl fmt::Display for Suspension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rho = format!("ρ_{}", subgroup_name(self.rep_subgroup_exponent));
        if self.multiplier == 1 {
            write!(f, "Σ^{{{rho}}}")
        } else {
            write!(f, "Σ^{{{}{rho}}}", self.multiplier)
        }
    }
}

/// One summand `Ind_{H_f}^G Σ^{n_f·k·ρ_{H_f}} M/(…)` of the associated graded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerSummand {
    pub grading: u64,
    pub induced_from_exponent: u32,
    /// `None` when the multiplier is zero (the bottom layer).
    pub suspension: Option<Suspension>,
    pub quotient: QuotientDescriptor,
    pub n_f: u64,
    pub orbit_size: u64,
}

impl fmt::Display for LayerSummand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let group_n = self.quotient.group_n;
        if self.induced_from_exponent != group_n {
            write!(
                f,
                "Ind_{}^{} ",
                subgroup_name(self.induced_from_exponent),
                subgroup_name(group_n)
            )?;
        }
        if let Some(s) = self.suspension {
            write!(f, "{s} ")?;
        }
        write!(f, "{}", self.quotient)
    }
}

pub type LayerTable = BTreeMap<u64, Vec<LayerSummand>>;

/// Associated graded of the filtration of `module` along `base` with
/// `|x̄| = k_deg·ρ_2`, for `G = C_{2^n}`.
pub fn associated_graded_for(
    group: CyclicGroup,
    k_deg: u64,
    module: &str,
    base: &str,
) -> Result<LayerTable, GroupError> {
    assert!(k_deg >= 1, "variable degree must be positive");
    let n = group.exponent();
    let mut table = LayerTable::new();
    for orbit in orbit_decompose(group)? {
        let h = orbit.stabilizer_exponent;
        let (zeros, _) = orbit.coset_classes();
        let vars = if zeros.is_empty() {
            Vec::new()
        } else {
            vec![VariableOrbit::new(base, n, h, zeros)]
        };
        let multiplier = orbit.n_f * k_deg;
        let summand = LayerSummand {
            grading: orbit.grading,
            induced_from_exponent: h,
            suspension: (orbit.grading > 0).then_some(Suspension {
                multiplier,
                rep_subgroup_exponent: h,
            }),
            quotient: QuotientDescriptor {
                module: module.to_string(),
                group_n: n,
                exponent: h,
                vars,
            }
            .normalized(),
            n_f: orbit.n_f,
            orbit_size: orbit.orbit_size,
        };
        table.entry(orbit.grading).or_default().push(summand);
    }
    Ok(table)
}

/// [`associated_graded_for`] with module `M` and variable `x`.
pub fn associated_graded(group: CyclicGroup, k_deg: u64) -> Result<LayerTable, GroupError> {
    associated_graded_for(group, k_deg, "M", "x")
}

/// Puts every summand's quotient in conjugation normal form.
pub fn normalize_table(table: &LayerTable) -> LayerTable {
    table
        .iter()
        .map(|(g, row)| {
            let row = row
                .iter()
                .map(|s| LayerSummand {
                    quotient: s.quotient.normalized(),
                    ..s.clone()
                })
                .collect();
            (*g, row)
        })
        .collect()
}

/// Plain-text report, one row per summand.
pub fn render_table(table: &LayerTable) -> String {
    let mut out = String::from("grading\tinduced_from\tsuspension\tquotient_vars\tsummand\n");
    for row in table.values() {
        for s in row {
            let susp = s.suspension.map(|s| s.to_string()).unwrap_or_else(|| "-".into());
            let vars: Vec<_> = s.quotient.vars.iter().map(|v| v.to_string()).collect();
            let vars = if vars.is_empty() { "-".to_string() } else { vars.join("; ") };
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\n",
                s.grading,
                subgroup_name(s.induced_from_exponent),
                susp,
                vars,
                s
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn offsets(s: &LayerSummand) -> Vec<(u32, Vec<u32>)> {
        s.quotient
            .vars
            .iter()
            .map(|v| (v.acting_subgroup_exponent, v.conjugate_offsets.clone()))
            .collect()
    }

    #[test]
    fn c2_two_layers() {
        let t = associated_graded(CyclicGroup::new(1), 3).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t[&0][0].to_string(), "M/(x)");
        assert_eq!(t[&0][0].suspension, None);
        assert_eq!(t[&1][0].to_string(), "Σ^{3ρ_C2} M");
    }

    #[test]
    fn c4_layers() {
        let t = associated_graded(CyclicGroup::new(2), 1).unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t[&0][0].to_string(), "M/(C4·x)");
        assert_eq!(t[&1][0].to_string(), "Ind_C2^C4 Σ^{ρ_C2} M/(x)");
        assert_eq!(t[&2][0].to_string(), "Σ^{ρ_C4} M");
    }

    #[test]
    fn c8_layers() {
        let t = associated_graded(CyclicGroup::new(3), 1).unwrap();
        assert_eq!(t.len(), 5);
        assert_eq!(t.values().map(Vec::len).sum::<usize>(), 6);
        assert_eq!(offsets(&t[&1][0]), vec![(1, vec![0, 1, 2])]);
        let gr2 = &t[&2];
        assert_eq!(gr2.len(), 2);
        assert_eq!(gr2[0].to_string(), "Ind_C4^C8 Σ^{ρ_C4} M/(C4·x)");
        assert_eq!(gr2[1].to_string(), "Ind_C2^C8 Σ^{2ρ_C2} M/(x, γx)");
        assert_eq!(t[&3][0].to_string(), "Ind_C2^C8 Σ^{3ρ_C2} M/(x)");
        assert_eq!(t[&4][0].to_string(), "Σ^{ρ_C8} M");
    }

    #[test]
    fn suspension_multiplier_is_nf_times_kdeg() {
        let t = associated_graded(CyclicGroup::new(3), 5).unwrap();
        for s in t.values().flatten() {
            match s.suspension {
                Some(susp) => assert_eq!(susp.multiplier, s.n_f * 5),
                None => assert_eq!(s.grading, 0),
            }
        }
    }

    #[test]
    fn restriction_examples() {
        let full = QuotientDescriptor::full("M", "x", 2);
        assert_eq!(restrict_quotient(&full, 2).unwrap(), full);
        let c2 = restrict_quotient(&full, 1).unwrap();
        assert_eq!(c2.vars[0].conjugate_offsets, vec![0, 1]);
        assert_eq!(c2.to_string(), "M/(x, γx)");
        let e = restrict_quotient(&full, 0).unwrap();
        assert_eq!(e.vars[0].acting_subgroup_exponent, 0);
        assert_eq!(e.to_string(), "M/(x, γx)");
        assert!(restrict_quotient(&full, 3).is_err());
    }

    #[test]
    fn restriction_in_c8() {
        let c4 = VariableOrbit::new("x", 3, 2, [0]);
        assert_eq!(c4.restrict(1).conjugate_offsets, vec![0, 2]);
        assert_eq!(c4.restrict(0).conjugate_offsets, vec![0, 2]);
        let full = VariableOrbit::new("x", 3, 3, [0]);
        assert_eq!(full.restrict(1).conjugate_offsets, vec![0, 1, 2, 3]);
    }

    #[test]
    fn conjugation_normal_form() {
        let v = VariableOrbit::new("x", 3, 1, [1, 2, 3]);
        let n = normalize_conjugation(&[v]);
        assert_eq!(n[0].conjugate_offsets, vec![0, 1, 2]);
        let twice = normalize_conjugation(&n);
        assert_eq!(twice, n);
        let table = associated_graded(CyclicGroup::new(4), 1).unwrap();
        let once = normalize_table(&table);
        assert_eq!(normalize_table(&once), once);
    }

    #[test]
    fn report_has_one_row_per_summand() {
        let t = associated_graded(CyclicGroup::new(3), 1).unwrap();
        let report = render_table(&t);
        assert_eq!(report.lines().count(), 1 + 6);
    }
}
