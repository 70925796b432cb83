//! Formal `K_0` arithmetic on fixed-point classes.
//!
//! An atom is the class `[(Ind_H^G Σ^{mρ_J} M/(…))^K]`; expressions are
//! finitely supported integer combinations of atoms. Relations carry the
//! sequence of rewrite rules that produced them so they can be replayed.

use crate::cyclic2::{subgroup_name, CyclicGroup, GroupError};
use crate::koszul::{associated_graded_for, normalize_conjugation, Suspension, VariableOrbit};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum K0Error {
    #[error("suspension by ρ_{rep} does not match fixed points for {fixed}")]
    MismatchedSubgroup { rep: String, fixed: String },
    #[error("atom has no suspension to eliminate")]
    NoSuspension,
    #[error("quotient relations need an odd variable degree, got {0}")]
    EvenDegree(u64),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("trace step {step} does not apply: {reason}")]
    Replay { step: usize, reason: String },
}

/// `Ind_{C_{2^from}}^{C_{2^to}}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Induction {
    pub from_exponent: u32,
    pub to_exponent: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct K0Atom {
    pub module: String,
    pub quotient_vars: Vec<VariableOrbit>,
    pub induced: Option<Induction>,
    /// Applied innermost first; empty when unsuspended.
    pub suspension: Vec<Suspension>,
    pub fixed_subgroup_exponent: u32,
}

impl K0Atom {
    /// `[module^{C_{2^k}}]`.
    pub fn plain(module: &str, k: u32) -> Self {
        K0Atom {
            module: module.to_string(),
            quotient_vars: Vec::new(),
            induced: None,
            suspension: Vec::new(),
            fixed_subgroup_exponent: k,
        }
    }

    /// `[module/(vars)^{C_{2^k}}]`, vars put in conjugation normal form.
    pub fn quotient(module: &str, vars: Vec<VariableOrbit>, k: u32) -> Self {
        K0Atom {
            quotient_vars: normalize_conjugation(&vars),
            ..K0Atom::plain(module, k)
        }
    }

    pub fn suspended(mut self, multiplier: u64, rep_subgroup_exponent: u32) -> Self {
        if multiplier != 0 {
            self.suspension.push(Suspension {
                multiplier,
                rep_subgroup_exponent,
            });
        }
        self
    }

    pub fn with_fixed(&self, k: u32) -> Self {
        K0Atom {
            fixed_subgroup_exponent: k,
            ..self.clone()
        }
    }

    pub fn is_quotient(&self) -> bool {
        self.quotient_vars.iter().any(|v| !v.conjugate_offsets.is_empty())
    }

    pub fn is_normal(&self) -> bool {
        self.induced.is_none()
            && self.suspension.is_empty()
            && self
                .quotient_vars
                .iter()
                .all(|v| v.acting_subgroup_exponent == self.fixed_subgroup_exponent)
            && normalize_conjugation(&self.quotient_vars) == self.quotient_vars
    }

    fn render_spectrum(&self) -> String {
        let mut s = String::new();
        if let Some(ind) = self.induced {
            s.push_str(&format!(
                "Ind_{}^{} ",
                subgroup_name(ind.from_exponent),
                subgroup_name(ind.to_exponent)
            ));
        }
        for susp in self.suspension.iter().rev() {
            s.push_str(&format!("{susp} "));
        }
        s.push_str(&self.module);
        let vars: Vec<String> = self
            .quotient_vars
            .iter()
            .filter(|v| !v.conjugate_offsets.is_empty())
            .map(|v| v.to_string())
            .collect();
        if !vars.is_empty() {
            let joined = vars.join(", ");
            if joined.contains(", ") || joined.contains('·') {
                s.push_str(&format!("/({joined})"));
            } else {
                s.push_str(&format!("/{joined}"));
            }
        }
        s
    }
}

impl fmt::Display for K0Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = self.render_spectrum();
        let k = subgroup_name(self.fixed_subgroup_exponent);
        if self.induced.is_some() || !self.suspension.is_empty() {
            write!(f, "[({body})^{k}]")
        } else {
            write!(f, "[{body}^{k}]")
        }
    }
}

/// A finitely supported integer combination of atoms.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(into = "Vec<TermRecord>", try_from = "Vec<TermRecord>")]
pub struct K0Expression {
    terms: BTreeMap<K0Atom, BigInt>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TermRecord {
    coefficient: String,
    atom: K0Atom,
}

impl From<K0Expression> for Vec<TermRecord> {
    fn from(e: K0Expression) -> Self {
        e.terms
            .into_iter()
            .map(|(atom, c)| TermRecord {
                coefficient: c.to_string(),
                atom,
            })
            .collect()
    }
}

impl TryFrom<Vec<TermRecord>> for K0Expression {
    type Error = String;
    fn try_from(records: Vec<TermRecord>) -> Result<Self, String> {
        let mut e = K0Expression::zero();
        for r in records {
            let c: BigInt = r
                .coefficient
                .parse()
                .map_err(|_| format!("bad coefficient `{}`", r.coefficient))?;
            e.add_term(r.atom, c);
        }
        Ok(e)
    }
}

impl K0Expression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn atom(atom: K0Atom) -> Self {
        Self::term(atom, 1)
    }

    pub fn term(atom: K0Atom, coefficient: impl Into<BigInt>) -> Self {
        let mut e = Self::zero();
        e.add_term(atom, coefficient.into());
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (K0Atom, BigInt)>) -> Self {
        let mut e = Self::zero();
        for (a, c) in terms {
            e.add_term(a, c);
        }
        e
    }

    pub fn add_term(&mut self, atom: K0Atom, coefficient: BigInt) {
        if coefficient.is_zero() {
            return;
        }
        let slot = self.terms.entry(atom.clone()).or_insert_with(BigInt::zero);
        *slot += coefficient;
        if slot.is_zero() {
            self.terms.remove(&atom);
        }
    }

    pub fn add(&self, other: &K0Expression) -> K0Expression {
        let mut e = self.clone();
        for (a, c) in &other.terms {
            e.add_term(a.clone(), c.clone());
        }
        e
    }

    pub fn sub(&self, other: &K0Expression) -> K0Expression {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn scale(&self, factor: &BigInt) -> K0Expression {
        K0Expression::from_terms(self.terms.iter().map(|(a, c)| (a.clone(), c * factor)))
    }

    pub fn coefficient(&self, atom: &K0Atom) -> BigInt {
        self.terms.get(atom).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&K0Atom, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Applies `f` to every atom and sums the resulting expressions with the
    /// original coefficients.
    pub fn flat_map(&self, mut f: impl FnMut(&K0Atom) -> K0Expression) -> K0Expression {
        let mut out = K0Expression::zero();
        for (a, c) in &self.terms {
            for (b, d) in f(a).terms {
                out.add_term(b, d * c);
            }
        }
        out
    }

    /// Evaluates a homomorphism to `Z` given on atoms.
    pub fn evaluate(&self, mut f: impl FnMut(&K0Atom) -> BigInt) -> BigInt {
        self.terms.iter().map(|(a, c)| c * f(a)).sum()
    }
}

impl fmt::Display for K0Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (atom, c)) in self.terms.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, false) => {}
                (0, true) => f.write_str("-")?,
                _ => write!(f, " {sign} ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag}")?;
            }
            write!(f, "{atom}")?;
        }
        Ok(())
    }
}

/// Prop-6.2 style evaluation of `[(Σ^{mρ_G} X)^G]` for the outermost
/// suspension of `atom`, whose representation subgroup must be the fixed
/// subgroup.
pub fn suspend_fixed_points(atom: &K0Atom) -> Result<K0Expression, K0Error> {
    let (&susp, rest) = atom.suspension.split_last().ok_or(K0Error::NoSuspension)?;
    let k = atom.fixed_subgroup_exponent;
    if susp.rep_subgroup_exponent != k {
        return Err(K0Error::MismatchedSubgroup {
            rep: subgroup_name(susp.rep_subgroup_exponent),
            fixed: subgroup_name(k),
        });
    }
    let inner = K0Atom {
        suspension: rest.to_vec(),
        ..atom.clone()
    };
    let odd = susp.multiplier % 2 == 1;
    Ok(match (k, odd) {
        (_, false) => K0Expression::atom(inner),
        (0, true) => K0Expression::term(inner, -1),
        (_, true) => {
            let mut e = K0Expression::atom(inner.with_fixed(k - 1));
            e.add_term(inner, BigInt::from(-1));
            e
        }
    })
}

/// One cell-structure step for `[(Σ^{mρ_G} X)^G]`, `G = C_{2^n}`, using
/// `S^{ρ_G} = S^0 ∪ ⋃_{i,j} G/C_{2^{n-i}} cells`:
/// `-[(Σ^{(m-1)ρ}X)^G] + Σ_{i=1}^n Σ_{j=2^{i-1}+1}^{2^i} (-1)^j [(Σ^{(m-1)ρ}X)^{C_{2^{n-i}}}]`.
/// Inner suspensions are left in place; [`normalize`] finishes the job.
pub fn raw_suspension_sum(module: &str, n: u32, m: u64) -> K0Expression {
    assert!(m >= 1, "suspension multiplier must be positive");
    let inner = K0Atom::plain(module, n).suspended(m - 1, n);
    if n == 0 {
        return K0Expression::term(inner, -1);
    }
    let mut e = K0Expression::term(inner.clone(), -1);
    for i in 1..=n {
        let lo = (1u64 << (i - 1)) + 1;
        let hi = 1u64 << i;
        let sign: i64 = (lo..=hi).map(|j| if j % 2 == 0 { 1 } else { -1 }).sum();
        e.add_term(inner.with_fixed(n - i), BigInt::from(sign));
    }
    e
}

/// An atom [`normalize`] could not reduce.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizeFlag {
    pub atom: K0Atom,
    pub reason: String,
}

fn rewrite_induced_atom(atom: &K0Atom) -> K0Expression {
    let Some(ind) = atom.induced else {
        return K0Expression::atom(atom.clone());
    };
    let k = atom.fixed_subgroup_exponent;
    let h = ind.from_exponent;
    let inner = K0Atom {
        induced: None,
        ..atom.clone()
    };
    // Res_K Ind_H^G Y is [G:K] copies of Ind_H^K (K ≥ H) or [G:H] copies of
    // Res_K Y (K ≤ H); conjugate copies share a normal form
    if k >= h {
        K0Expression::term(inner.with_fixed(h), BigInt::one() << (ind.to_exponent - k))
    } else {
        K0Expression::term(inner, BigInt::one() << (ind.to_exponent - h))
    }
}

/// `[(Ind_H^G Y)^K]` ↦ `[G:K][Y^H]` for `K ≥ H`, `[G:H][Y^K]` otherwise.
pub fn rewrite_induced(expr: &K0Expression) -> K0Expression {
    expr.flat_map(rewrite_induced_atom)
}

fn eliminate_atom(atom: &K0Atom, flags: &mut Vec<NormalizeFlag>) -> K0Expression {
    if atom.induced.is_some() {
        return K0Expression::atom(atom.clone());
    }
    let Some(&last) = atom.suspension.last() else {
        return K0Expression::atom(atom.clone());
    };
    let k = atom.fixed_subgroup_exponent;
    let j = last.rep_subgroup_exponent;
    if j < k {
        flags.push(NormalizeFlag {
            atom: atom.clone(),
            reason: format!(
                "suspension by ρ_{} under fixed points for {}",
                subgroup_name(j),
                subgroup_name(k)
            ),
        });
        return K0Expression::atom(atom.clone());
    }
    let mut atom = atom.clone();
    if j > k {
        // Res ρ_{C_{2^j}} = 2^{j-k} ρ_{C_{2^k}}; only the parity survives, and it is even
        let multiplier = last.multiplier.checked_shl(j - k).filter(|&v| v >> (j - k) == last.multiplier);
        *atom.suspension.last_mut().unwrap() = Suspension {
            multiplier: multiplier.unwrap_or(2),
            rep_subgroup_exponent: k,
        };
    }
    suspend_fixed_points(&atom).expect("subgroups match")
}

/// Removes every suspension it can, recording atoms whose data does not fit.
pub fn eliminate_suspensions(expr: &K0Expression) -> (K0Expression, Vec<NormalizeFlag>) {
    let mut flags = Vec::new();
    let mut current = expr.clone();
    loop {
        let next = current.flat_map(|a| eliminate_atom(a, &mut flags));
        if next == current {
            break;
        }
        flags.clear();
        current = next;
    }
    flags.sort_by(|a, b| a.atom.cmp(&b.atom));
    flags.dedup();
    (current, flags)
}

fn canonical_atom(atom: &K0Atom) -> K0Atom {
    let k = atom.fixed_subgroup_exponent;
    let vars: Vec<VariableOrbit> = atom
        .quotient_vars
        .iter()
        .filter(|v| !v.conjugate_offsets.is_empty())
        .map(|v| {
            if atom.induced.is_none() && atom.suspension.is_empty() && v.acting_subgroup_exponent > k {
                v.restrict(k)
            } else {
                v.clone()
            }
        })
        .collect();
    K0Atom {
        quotient_vars: normalize_conjugation(&vars),
        ..atom.clone()
    }
}

/// Restricts quotient variables to the fixed subgroup and puts them in
/// conjugation normal form.
pub fn canonicalize(expr: &K0Expression) -> K0Expression {
    expr.flat_map(|a| K0Expression::atom(canonical_atom(a)))
}

/// [`normalize`] together with the atoms it had to leave alone.
pub fn normalize_with_flags(expr: &K0Expression) -> (K0Expression, Vec<NormalizeFlag>) {
    let mut current = expr.clone();
    loop {
        let (next, flags) = eliminate_suspensions(&rewrite_induced(&current));
        let next = canonicalize(&next);
        if next == current {
            return (next, flags);
        }
        current = next;
    }
}

pub fn normalize(expr: &K0Expression) -> K0Expression {
    normalize_with_flags(expr).0
}

/// One step of a relation's derivation. Every rule acts on both sides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum Rule {
    /// Replace `[module^G]` on the right by the sum of the layers of its
    /// filtration along `base` with `|base| = k_deg·ρ_2`.
    ExpandFiltration {
        group_n: u32,
        k_deg: u64,
        module: String,
        base: String,
    },
    RewriteInduced,
    EliminateSuspensions,
    Canonicalize,
    /// Move the right-hand term on `atom` to the left.
    MoveToLhs { atom: K0Atom },
    /// Set every quotient atom to zero.
    ModTorsion,
    Scale { factor: String },
    /// Replace each multiple of the single-atom `lhs` by the matching
    /// multiple of `rhs`, on the right-hand side.
    Substitute {
        lhs: K0Expression,
        rhs: K0Expression,
    },
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::ExpandFiltration {
                group_n,
                k_deg,
                module,
                base,
            } => write!(
                f,
                "expand filtration of {module} along {base} over {} (|{base}| = {k_deg}ρ_C2)",
                subgroup_name(*group_n)
            ),
            Rule::RewriteInduced => f.write_str("rewrite fixed points of induced atoms"),
            Rule::EliminateSuspensions => f.write_str("eliminate regular-representation suspensions"),
            Rule::Canonicalize => f.write_str("restrict quotients and canonicalize conjugates"),
            Rule::MoveToLhs { atom } => write!(f, "move {atom} to the left"),
            Rule::ModTorsion => f.write_str("set quotient atoms to zero (mod torsion)"),
            Rule::Scale { factor } => write!(f, "multiply by {factor}"),
            Rule::Substitute { lhs, rhs } => write!(f, "substitute {lhs} = {rhs}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Sides {
    lhs: K0Expression,
    rhs: K0Expression,
    mod_torsion: bool,
}

fn filtration_classes(group_n: u32, k_deg: u64, module: &str, base: &str) -> Result<K0Expression, K0Error> {
    let table = associated_graded_for(CyclicGroup::new(group_n), k_deg, module, base)?;
    let mut sum = K0Expression::zero();
    for s in table.values().flatten() {
        let atom = K0Atom {
            module: module.to_string(),
            quotient_vars: s.quotient.vars.clone(),
            induced: (s.induced_from_exponent != group_n).then_some(Induction {
                from_exponent: s.induced_from_exponent,
                to_exponent: group_n,
            }),
            suspension: s.suspension.into_iter().collect(),
            fixed_subgroup_exponent: group_n,
        };
        sum.add_term(atom, BigInt::one());
    }
    Ok(sum)
}

fn apply_rule(rule: &Rule, sides: &Sides) -> Result<Sides, String> {
    let both = |f: &dyn Fn(&K0Expression) -> K0Expression| Sides {
        lhs: f(&sides.lhs),
        rhs: f(&sides.rhs),
        mod_torsion: sides.mod_torsion,
    };
    Ok(match rule {
        Rule::ExpandFiltration {
            group_n,
            k_deg,
            module,
            base,
        } => {
            let top = K0Atom::plain(module, *group_n);
            let c = sides.rhs.coefficient(&top);
            if c.is_zero() {
                return Err(format!("{top} does not occur on the right"));
            }
            let layers = filtration_classes(*group_n, *k_deg, module, base).map_err(|e| e.to_string())?;
            let rhs = sides
                .rhs
                .sub(&K0Expression::term(top, c.clone()))
                .add(&layers.scale(&c));
            Sides {
                rhs,
                ..sides.clone()
            }
        }
        Rule::RewriteInduced => both(&rewrite_induced),
        Rule::EliminateSuspensions => both(&|e| eliminate_suspensions(e).0),
        Rule::Canonicalize => both(&canonicalize),
        Rule::MoveToLhs { atom } => {
            let c = sides.rhs.coefficient(atom);
            if c.is_zero() {
                return Err(format!("{atom} does not occur on the right"));
            }
            let moved = K0Expression::term(atom.clone(), c);
            Sides {
                lhs: sides.lhs.sub(&moved),
                rhs: sides.rhs.sub(&moved),
                mod_torsion: sides.mod_torsion,
            }
        }
        Rule::ModTorsion => {
            let kill = |e: &K0Expression| {
                K0Expression::from_terms(
                    e.terms()
                        .filter(|(a, _)| !a.is_quotient())
                        .map(|(a, c)| (a.clone(), c.clone())),
                )
            };
            Sides {
                mod_torsion: true,
                ..both(&kill)
            }
        }
        Rule::Scale { factor } => {
            let f: BigInt = factor.parse().map_err(|_| format!("bad factor `{factor}`"))?;
            both(&|e| e.scale(&f))
        }
        Rule::Substitute { lhs, rhs } => {
            let mut iter = lhs.terms();
            let (atom, d) = match (iter.next(), iter.next()) {
                (Some((a, d)), None) => (a.clone(), d.clone()),
                _ => return Err("substitution source must be a single term".into()),
            };
            let c = sides.rhs.coefficient(&atom);
            if c.is_zero() || !c.is_multiple_of(&d) {
                return Err(format!("right side has no multiple of {lhs}"));
            }
            let q = &c / &d;
            let new_rhs = sides.rhs.sub(&lhs.scale(&q)).add(&rhs.scale(&q));
            Sides {
                rhs: new_rhs,
                ..sides.clone()
            }
        }
    })
}

/// `lhs = rhs` (or `≡` modulo torsion) with the derivation that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct K0Relation {
    pub start_lhs: K0Expression,
    pub start_rhs: K0Expression,
    pub lhs: K0Expression,
    pub rhs: K0Expression,
    pub mod_torsion: bool,
    pub trace: Vec<Rule>,
}

impl K0Relation {
    /// The tautology `e = e`.
    pub fn identity(e: K0Expression) -> Self {
        K0Relation {
            start_lhs: e.clone(),
            start_rhs: e.clone(),
            lhs: e.clone(),
            rhs: e,
            mod_torsion: false,
            trace: Vec::new(),
        }
    }

    pub fn apply(&self, rule: Rule) -> Result<Self, K0Error> {
        let sides = Sides {
            lhs: self.lhs.clone(),
            rhs: self.rhs.clone(),
            mod_torsion: self.mod_torsion,
        };
        let next = apply_rule(&rule, &sides).map_err(|reason| K0Error::Replay {
            step: self.trace.len(),
            reason,
        })?;
        let mut trace = self.trace.clone();
        trace.push(rule);
        Ok(K0Relation {
            start_lhs: self.start_lhs.clone(),
            start_rhs: self.start_rhs.clone(),
            lhs: next.lhs,
            rhs: next.rhs,
            mod_torsion: next.mod_torsion,
            trace,
        })
    }

    /// Re-runs the trace from the starting sides.
    pub fn replay(&self) -> Result<K0Relation, K0Error> {
        let mut r = K0Relation {
            start_lhs: self.start_lhs.clone(),
            start_rhs: self.start_rhs.clone(),
            lhs: self.start_lhs.clone(),
            rhs: self.start_rhs.clone(),
            mod_torsion: false,
            trace: Vec::new(),
        };
        for rule in &self.trace {
            r = r.apply(rule.clone())?;
        }
        Ok(r)
    }

    pub fn replays(&self) -> bool {
        self.replay().map(|r| r == *self).unwrap_or(false)
    }

    /// Human-readable derivation, one step per line.
    pub fn proof(&self) -> String {
        let mut out = format!("start: {} = {}\n", self.start_lhs, self.start_rhs);
        let mut r = K0Relation::identity(K0Expression::zero());
        r.lhs = self.start_lhs.clone();
        r.rhs = self.start_rhs.clone();
        for (i, rule) in self.trace.iter().enumerate() {
            match r.apply(rule.clone()) {
                Ok(next) => {
                    r = next;
                    let eq = if r.mod_torsion { "≡" } else { "=" };
                    out.push_str(&format!("{}. {rule}\n   {} {eq} {}\n", i + 1, r.lhs, r.rhs));
                }
                Err(e) => {
                    out.push_str(&format!("{}. {rule}: {e}\n", i + 1));
                    break;
                }
            }
        }
        out
    }
}

impl fmt::Display for K0Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eq = if self.mod_torsion { "≡" } else { "=" };
        write!(f, "{} {eq} {}", self.lhs, self.rhs)?;
        if self.mod_torsion {
            f.write_str(" (mod torsion)")?;
        }
        Ok(())
    }
}

/// `2[M^G] = [M^{G'}] + [M/(G·x)^G] + …` for `G = C_{2^n}`: the layers of
/// the filtration of `M` along `x`, normalized, with the top cell moved
/// left.
pub fn quotient_relation_for(n: u32, k_deg: u64, module: &str, base: &str) -> Result<K0Relation, K0Error> {
    if k_deg % 2 == 0 {
        return Err(K0Error::EvenDegree(k_deg));
    }
    let top = K0Atom::plain(module, n);
    K0Relation::identity(K0Expression::atom(top.clone()))
        .apply(Rule::ExpandFiltration {
            group_n: n,
            k_deg,
            module: module.to_string(),
            base: base.to_string(),
        })?
        .apply(Rule::RewriteInduced)?
        .apply(Rule::EliminateSuspensions)?
        .apply(Rule::Canonicalize)?
        .apply(Rule::MoveToLhs { atom: top })
}

/// [`quotient_relation_for`] with module `M` and variable `x`.
pub fn quotient_relation(n: u32, k_deg: u64) -> Result<K0Relation, K0Error> {
    quotient_relation_for(n, k_deg, "M", "x")
}

/// Height-drop relations modulo torsion for `G = C_{2^n}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightDrop {
    /// `2[M^{C_{2^k}}] ≡ [M^{C_{2^{k-1}}}]` for `k = 1..=n`.
    pub steps: Vec<K0Relation>,
    /// `2^k[M^{C_{2^k}}] ≡ [M^e]` for `k = 1..=n`; for `n = 0` the single
    /// tautology `[M^e] ≡ [M^e]`.
    pub composed: Vec<K0Relation>,
}

/// Derives [`HeightDrop`] with a variable of degree `k_deg·ρ_2`.
pub fn derive_height_drop_for(n: u32, k_deg: u64) -> Result<HeightDrop, K0Error> {
    if n == 0 {
        let mut r = K0Relation::identity(K0Expression::atom(K0Atom::plain("M", 0)));
        r = r.apply(Rule::ModTorsion)?;
        return Ok(HeightDrop {
            steps: Vec::new(),
            composed: vec![r],
        });
    }
    let steps = (1..=n)
        .map(|k| quotient_relation(k, k_deg)?.apply(Rule::ModTorsion))
        .collect::<Result<Vec<_>, _>>()?;
    let mut composed = Vec::new();
    for k in 1..=n {
        let mut r = steps[k as usize - 1].clone();
        for j in (1..k).rev() {
            r = r.apply(Rule::Scale { factor: "2".into() })?;
            r = r.apply(Rule::Substitute {
                lhs: steps[j as usize - 1].lhs.clone(),
                rhs: steps[j as usize - 1].rhs.clone(),
            })?;
        }
        composed.push(r);
    }
    Ok(HeightDrop { steps, composed })
}

/// The variable degree used by [`derive_height_drop`]: the degree of the
/// last `v̄`, `2^h - 1` with the exponent capped so the value fits. Only its
/// parity affects the normalized relations.
pub fn height_drop_degree(ctx: &crate::hilbert::HeightContext) -> u64 {
    let e = ctx.h.clamp(1, 63) as u32;
    (1u64 << e) - 1
}

pub fn derive_height_drop(ctx: &crate::hilbert::HeightContext) -> Result<HeightDrop, K0Error> {
    derive_height_drop_for(ctx.n, height_drop_degree(ctx))
}

/// Sends `[M^{C_{2^j}}]` to `2^{n-j}` and quotient atoms to 0. This is the
/// rank of underlying homotopy divided by the order of the fixed subgroup,
/// and every derived relation must balance under it.
pub fn rank_weight(atom: &K0Atom, n: u32) -> BigInt {
    if atom.is_quotient() {
        return BigInt::zero();
    }
    let k = atom.fixed_subgroup_exponent.min(n);
    BigInt::one() << (n - k)
}

/// `(ψ(lhs), ψ(rhs))` for [`rank_weight`].
pub fn conservation_check(rel: &K0Relation, n: u32) -> (BigInt, BigInt) {
    (
        rel.lhs.evaluate(|a| rank_weight(a, n)),
        rel.rhs.evaluate(|a| rank_weight(a, n)),
    )
}
