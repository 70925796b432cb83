use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use super::PolyError;

/// Exponent vector, one entry per generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Monomial(pub SmallVec<[u16; 8]>);

impl Monomial {
    pub fn one(arity: usize) -> Self {
        Monomial(SmallVec::from_elem(0, arity))
    }

    pub fn var(arity: usize, index: usize, power: u16) -> Self {
        let mut m = Monomial::one(arity);
        m.0[index] = power;
        m
    }

    pub fn exponents(&self) -> &[u16] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    /// `self / other`; caller guarantees divisibility.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect())
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| *a.max(b)).collect())
    }

    pub fn coprime(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| *a == 0 || *b == 0)
    }

    /// The variable index if this is `x_i^a` with `a > 0`.
    pub fn pure_power(&self) -> Option<(usize, u16)> {
        let mut found = None;
        for (i, &e) in self.0.iter().enumerate() {
            if e > 0 {
                if found.is_some() {
                    return None;
                }
                found = Some((i, e));
            }
        }
        found
    }

    fn extended(&self, extra: usize) -> Monomial {
        let mut m = self.clone();
        m.0.extend(std::iter::repeat(0).take(extra));
        m
    }
}

/// `γ` acting on generators by a signed permutation: `γ·x_i = sign_i · x_{π(i)}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedPermutation {
    images: Vec<(usize, i8)>,
}

impl SignedPermutation {
    pub fn identity(arity: usize) -> Self {
        SignedPermutation {
            images: (0..arity).map(|i| (i, 1)).collect(),
        }
    }

    pub fn new(images: Vec<(usize, i8)>) -> Result<Self, PolyError> {
        let mut seen = vec![false; images.len()];
        for &(target, sign) in &images {
            if target >= images.len() || seen[target] || (sign != 1 && sign != -1) {
                return Err(PolyError::InvalidAction(
                    "action must be a signed permutation of the generators".into(),
                ));
            }
            seen[target] = true;
        }
        Ok(SignedPermutation { images })
    }

    pub fn images(&self) -> &[(usize, i8)] {
        &self.images
    }

    pub fn arity(&self) -> usize {
        self.images.len()
    }

    /// `(self ∘ other)(i) = self(other(i))`.
    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        let images = other
            .images
            .iter()
            .map(|&(j, s)| {
                let (k, t) = self.images[j];
                (k, s * t)
            })
            .collect();
        SignedPermutation { images }
    }

    pub fn pow(&self, e: u64) -> SignedPermutation {
        let mut out = SignedPermutation::identity(self.arity());
        for _ in 0..e {
            out = self.compose(&out);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &(j, s))| i == j && s == 1)
    }

    pub fn is_negation(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &(j, s))| i == j && s == -1)
    }

    /// The permutation part, i.e. the action over `F_2`.
    pub fn permutation(&self) -> Vec<usize> {
        self.images.iter().map(|&(j, _)| j).collect()
    }
}

/// Named generators with halved degrees and an optional `γ`-action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorTable {
    pub names: Vec<String>,
    pub degrees: Vec<u32>,
    pub action: Option<SignedPermutation>,
}

impl GeneratorTable {
    pub fn new(names: Vec<String>, degrees: Vec<u32>) -> Result<Self, PolyError> {
        if names.len() != degrees.len() {
            return Err(PolyError::Arity {
                expected: names.len(),
                found: degrees.len(),
            });
        }
        if degrees.iter().any(|&d| d == 0) {
            return Err(PolyError::InvalidTable("generator degrees must be positive".into()));
        }
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != names.len() {
            return Err(PolyError::InvalidTable("duplicate generator names".into()));
        }
        Ok(GeneratorTable {
            names,
            degrees,
            action: None,
        })
    }

    pub fn with_action(mut self, action: SignedPermutation) -> Result<Self, PolyError> {
        if action.arity() != self.arity() {
            return Err(PolyError::Arity {
                expected: self.arity(),
                found: action.arity(),
            });
        }
        for (i, &(j, _)) in action.images().iter().enumerate() {
            if self.degrees[i] != self.degrees[j] {
                return Err(PolyError::InvalidAction(format!(
                    "γ maps {} to {} of a different degree",
                    self.names[i], self.names[j]
                )));
            }
        }
        self.action = Some(action);
        Ok(self)
    }

    pub fn arity(&self) -> usize {
        self.names.len()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MonomialOrder {
    /// Weighted degree first, ties broken reverse-lexicographically.
    #[default]
    DegRevLex,
    Lex,
}

/// `F_2[x_1, …, x_r]` with a generator table and a monomial order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyRing {
    pub table: GeneratorTable,
    pub order: MonomialOrder,
}

/// An element of `F_2[x_1, …, x_r]`: distinct monomials, sorted decreasingly
/// in the ring's order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: Vec<Monomial>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].is_one()
    }

    pub fn terms(&self) -> &[Monomial] {
        &self.terms
    }

    pub fn leading(&self) -> Option<&Monomial> {
        self.terms.first()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl PolyRing {
    pub fn new(table: GeneratorTable, order: MonomialOrder) -> Self {
        PolyRing { table, order }
    }

    /// Generators of degree one named by `names`, in grevlex.
    pub fn with_names(names: &[&str]) -> Self {
        let table = GeneratorTable::new(
            names.iter().map(|s| s.to_string()).collect(),
            vec![1; names.len()],
        )
        .expect("valid names");
        PolyRing::new(table, MonomialOrder::DegRevLex)
    }

    pub fn arity(&self) -> usize {
        self.table.arity()
    }

    pub fn degree_of(&self, m: &Monomial) -> u64 {
        m.0.iter()
            .zip(&self.table.degrees)
            .map(|(&e, &d)| e as u64 * d as u64)
            .sum()
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.order {
            MonomialOrder::Lex => a.0.cmp(&b.0),
            MonomialOrder::DegRevLex => self.degree_of(a).cmp(&self.degree_of(b)).then_with(|| {
                for (x, y) in a.0.iter().zip(b.0.iter()).rev() {
                    if x != y {
                        // smaller exponent in the last differing variable is larger
                        return y.cmp(x);
                    }
                }
                Ordering::Equal
            }),
        }
    }

    /// Builds a polynomial from monomials, cancelling repeated ones mod 2.
    pub fn poly(&self, monomials: impl IntoIterator<Item = Monomial>) -> Polynomial {
        let mut parity: HashMap<Monomial, bool> = HashMap::new();
        for m in monomials {
            assert_eq!(m.0.len(), self.arity(), "monomial arity mismatch");
            let e = parity.entry(m).or_insert(false);
            *e = !*e;
        }
        let mut terms: Vec<Monomial> = parity.into_iter().filter(|(_, v)| *v).map(|(m, _)| m).collect();
        terms.sort_by(|a, b| self.cmp(b, a));
        Polynomial { terms }
    }

    pub fn one(&self) -> Polynomial {
        Polynomial {
            terms: vec![Monomial::one(self.arity())],
        }
    }

    pub fn var(&self, index: usize) -> Polynomial {
        Polynomial {
            terms: vec![Monomial::var(self.arity(), index, 1)],
        }
    }

    pub fn var_named(&self, name: &str) -> Result<Polynomial, PolyError> {
        self.table
            .index_of(name)
            .map(|i| self.var(i))
            .ok_or_else(|| PolyError::UnknownGenerator(name.to_string()))
    }

    pub fn monomial(&self, m: Monomial) -> Polynomial {
        assert_eq!(m.0.len(), self.arity());
        Polynomial { terms: vec![m] }
    }

    pub fn add(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        Polynomial {
            terms: self.merge(&a.terms, &b.terms),
        }
    }

    /// Symmetric difference of two decreasing term lists.
    pub(crate) fn merge(&self, a: &[Monomial], b: &[Monomial]) -> Vec<Monomial> {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match self.cmp(&a[i], &b[j]) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(b[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        out
    }

    /// `m · p`; multiplication by a monomial preserves the term order.
    pub fn mul_monomial(&self, p: &Polynomial, m: &Monomial) -> Polynomial {
        Polynomial {
            terms: p.terms.iter().map(|t| t.mul(m)).collect(),
        }
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        self.poly(
            a.terms
                .iter()
                .flat_map(|x| b.terms.iter().map(move |y| x.mul(y))),
        )
    }

    pub fn pow(&self, p: &Polynomial, mut e: u32) -> Polynomial {
        let mut base = p.clone();
        let mut out = self.one();
        while e > 0 {
            if e & 1 == 1 {
                out = self.mul(&out, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.square(&base);
            }
        }
        out
    }

    /// Frobenius: `(Σ m)^2 = Σ m^2` over `F_2`.
    pub fn square(&self, p: &Polynomial) -> Polynomial {
        Polynomial {
            terms: p.terms.iter().map(|t| t.mul(t)).collect(),
        }
    }

    /// Degree of the homogeneous polynomial `p`, or `None` if `p` is zero or
    /// not homogeneous.
    pub fn homogeneous_degree(&self, p: &Polynomial) -> Option<u64> {
        let first = self.degree_of(p.terms.first()?);
        p.terms
            .iter()
            .all(|t| self.degree_of(t) == first)
            .then_some(first)
    }

    /// Applies the generator action `γ` (over `F_2`, signs drop out).
    pub fn act(&self, action: &SignedPermutation, p: &Polynomial) -> Polynomial {
        let perm = action.permutation();
        self.poly(p.terms.iter().map(|t| {
            let mut out = Monomial::one(self.arity());
            for (i, &e) in t.0.iter().enumerate() {
                out.0[perm[i]] += e;
            }
            out
        }))
    }

    /// The ring with one more generator appended.
    pub fn extended(&self, name: &str, degree: u32) -> PolyRing {
        let mut names = self.table.names.clone();
        names.push(name.to_string());
        let mut degrees = self.table.degrees.clone();
        degrees.push(degree);
        PolyRing::new(
            GeneratorTable::new(names, degrees).expect("fresh generator name"),
            self.order,
        )
    }

    /// Embeds `p` into a ring with `extra` more generators appended.
    pub fn embed(&self, target: &PolyRing, p: &Polynomial) -> Polynomial {
        let extra = target.arity() - self.arity();
        target.poly(p.terms.iter().map(|t| t.extended(extra)))
    }

    pub fn render_monomial(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    self.table.names[i].clone()
                } else {
                    format!("{}^{}", self.table.names[i], e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    pub fn render(&self, p: &Polynomial) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        p.terms
            .iter()
            .map(|m| self.render_monomial(m))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Parses sums of products such as `xi_1^2*xi_2 + t_1 + 1`. Integer
    /// coefficients are reduced mod 2.
    pub fn parse(&self, text: &str) -> Result<Polynomial, PolyError> {
        let mut monomials = Vec::new();
        for term in text.split('+') {
            let term = term.trim();
            if term.is_empty() {
                return Err(PolyError::Parse(text.to_string()));
            }
            let mut mono = Monomial::one(self.arity());
            let mut coefficient = 1u64;
            for factor in term.split('*') {
                let factor = factor.trim();
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => (
                        b.trim(),
                        e.trim()
                            .parse::<u16>()
                            .map_err(|_| PolyError::Parse(text.to_string()))?,
                    ),
                    None => (factor, 1),
                };
                if let Ok(c) = base.parse::<u64>() {
                    coefficient = coefficient.wrapping_mul(c.wrapping_pow(exp as u32) % 2);
                    continue;
                }
                let i = self
                    .table
                    .index_of(base)
                    .ok_or_else(|| PolyError::UnknownGenerator(base.to_string()))?;
                mono.0[i] += exp;
            }
            if coefficient % 2 == 1 {
                monomials.push(mono);
            }
        }
        Ok(self.poly(monomials))
    }
}

/// Renders with a ring; `Polynomial` alone does not know generator names.
pub struct Rendered<'a>(pub &'a PolyRing, pub &'a Polynomial);

impl fmt::Display for Rendered<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.render(self.1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grevlex_weighted() {
        let table = GeneratorTable::new(vec!["a".into(), "b".into()], vec![1, 3]).unwrap();
        let r = PolyRing::new(table, MonomialOrder::DegRevLex);
        let a3 = Monomial(SmallVec::from_slice(&[3, 0]));
        let b = Monomial(SmallVec::from_slice(&[0, 1]));
        let a2 = Monomial(SmallVec::from_slice(&[2, 0]));
        // equal weighted degree: b is smaller in revlex (positive exponent in last var)
        assert_eq!(r.cmp(&a3, &b), Ordering::Greater);
        assert_eq!(r.cmp(&b, &a2), Ordering::Greater);
    }

    #[test]
    fn arithmetic_mod_two() {
        let r = PolyRing::with_names(&["x", "y"]);
        let x = r.var(0);
        let y = r.var(1);
        let s = r.add(&x, &y);
        let sq = r.mul(&s, &s);
        assert_eq!(sq, r.add(&r.mul(&x, &x), &r.mul(&y, &y)));
        assert_eq!(r.square(&s), sq);
        assert!(r.add(&s, &s).is_zero());
        assert_eq!(r.pow(&s, 4), r.square(&sq));
    }

    #[test]
    fn parse_and_render() {
        let r = PolyRing::with_names(&["x", "y"]);
        let p = r.parse("x^2*y + y^3 + 3*x + 2*y + 1").unwrap();
        assert_eq!(r.render(&p), "x^2*y + y^3 + x + 1");
        assert!(r.parse("z").is_err());
        assert!(r.parse("x + ").is_err());
    }

    #[test]
    fn signed_permutation_order() {
        // γ: a -> b, b -> -a has order 4, γ^2 = -1
        let g = SignedPermutation::new(vec![(1, 1), (0, -1)]).unwrap();
        assert!(g.pow(2).is_negation());
        assert!(g.pow(4).is_identity());
        assert!(SignedPermutation::new(vec![(0, 1), (0, 1)]).is_err());
    }

    #[test]
    fn homogeneity() {
        let table = GeneratorTable::new(vec!["a".into(), "b".into()], vec![1, 3]).unwrap();
        let r = PolyRing::new(table, MonomialOrder::DegRevLex);
        assert_eq!(r.homogeneous_degree(&r.parse("a^3 + b").unwrap()), Some(3));
        assert_eq!(r.homogeneous_degree(&r.parse("a + b").unwrap()), None);
    }
}
