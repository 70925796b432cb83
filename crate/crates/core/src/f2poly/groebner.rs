use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use super::ring::{Monomial, PolyRing, Polynomial};
use super::PolyError;

/// Caps that keep Buchberger from running away on pathological input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest intermediate basis.
    pub max_basis_size: usize,
    /// Largest weighted degree of an S-pair lcm.
    pub max_degree: u64,
    /// Total reduction steps across the whole computation.
    pub max_reductions: u64,
    /// Largest power tried by the `p^e ∈ I` fast path of nilpotence checks.
    pub max_power: u32,
    /// Largest staircase enumerated by [`quotient_dim`].
    pub max_standard_monomials: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_basis_size: 4096,
            max_degree: 1 << 14,
            max_reductions: 5_000_000,
            max_power: 1 << 12,
            max_standard_monomials: 1 << 24,
        }
    }
}

/// Generators of an ideal of a polynomial ring over `F_2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealSpec {
    pub ring: PolyRing,
    pub generators: Vec<Polynomial>,
}

impl IdealSpec {
    /// Zero generators are dropped.
    pub fn new(ring: PolyRing, generators: Vec<Polynomial>) -> Self {
        let generators = generators.into_iter().filter(|g| !g.is_zero()).collect();
        IdealSpec { ring, generators }
    }
}

/// A reduced Gröbner basis, sorted by decreasing leading monomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerBasis {
    pub ring: PolyRing,
    pub polys: Vec<Polynomial>,
}

impl GroebnerBasis {
    pub fn is_unit_ideal(&self) -> bool {
        self.polys.iter().any(Polynomial::is_one)
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.polys
            .iter()
            .map(|p| p.leading().expect("basis elements are nonzero").clone())
            .collect()
    }

    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        let mut steps = u64::MAX;
        normal_form(&self.ring, p, &self.polys, &mut steps).expect("unbounded reduction")
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.normal_form(p).is_zero()
    }

    pub fn to_ideal(&self) -> IdealSpec {
        IdealSpec::new(self.ring.clone(), self.polys.clone())
    }
}

fn divisor_index(lt: &Monomial, basis: &[Polynomial]) -> Option<usize> {
    basis
        .iter()
        .position(|g| g.leading().is_some_and(|l| l.divides(lt)))
}

/// Full reduction of `p` by `basis`. Decrements `budget` per step and fails
/// once it is exhausted.
pub(crate) fn normal_form(
    ring: &PolyRing,
    p: &Polynomial,
    basis: &[Polynomial],
    budget: &mut u64,
) -> Result<Polynomial, PolyError> {
    let mut work: Vec<Monomial> = p.terms().to_vec();
    let mut rem: Vec<Monomial> = Vec::new();
    let mut start = 0;
    while start < work.len() {
        let t = &work[start];
        match divisor_index(t, basis) {
            Some(i) => {
                if *budget == 0 {
                    return Err(PolyError::ResourceLimit {
                        resource: "reductions",
                        cap: 0,
                    });
                }
                *budget -= 1;
                let g = &basis[i];
                let q = t.div(g.leading().unwrap());
                let shifted = ring.mul_monomial(g, &q);
                work = ring.merge(&work[start..], shifted.terms());
                start = 0;
            }
            None => {
                rem.push(t.clone());
                start += 1;
            }
        }
    }
    // remainder terms were emitted in decreasing order
    Ok(ring.poly(rem))
}

/// Division with quotients: `p = Σ q_i b_i + r`, no term of `r` divisible by
/// any leading monomial of `basis`.
pub fn divide(ring: &PolyRing, p: &Polynomial, basis: &[Polynomial]) -> (Vec<Polynomial>, Polynomial) {
    let mut quotients: Vec<Vec<Monomial>> = vec![Vec::new(); basis.len()];
    let mut work: Vec<Monomial> = p.terms().to_vec();
    let mut rem = Vec::new();
    while let Some(t) = work.first().cloned() {
        match divisor_index(&t, basis) {
            Some(i) => {
                let q = t.div(basis[i].leading().unwrap());
                let shifted = ring.mul_monomial(&basis[i], &q);
                work = ring.merge(&work, shifted.terms());
                quotients[i].push(q);
            }
            None => {
                rem.push(t);
                work.remove(0);
            }
        }
    }
    (
        quotients.into_iter().map(|qs| ring.poly(qs)).collect(),
        ring.poly(rem),
    )
}

fn s_polynomial(ring: &PolyRing, f: &Polynomial, g: &Polynomial) -> Polynomial {
    let lf = f.leading().unwrap();
    let lg = g.leading().unwrap();
    let l = lf.lcm(lg);
    ring.add(
        &ring.mul_monomial(f, &l.div(lf)),
        &ring.mul_monomial(g, &l.div(lg)),
    )
}

fn limit(resource: &'static str, cap: u64) -> PolyError {
    PolyError::ResourceLimit { resource, cap }
}

/// The reduced Gröbner basis of `ideal` in the ring's monomial order.
///
/// Buchberger's algorithm with the normal selection strategy, the coprime
/// criterion and the chain criterion, followed by minimalization and
/// interreduction. The output is the unique reduced basis, so it does not
/// depend on the order of the input generators.
pub fn groebner(ideal: &IdealSpec, limits: &Limits) -> Result<GroebnerBasis, PolyError> {
    let ring = &ideal.ring;
    for g in &ideal.generators {
        if g.terms().iter().any(|t| t.0.len() != ring.arity()) {
            return Err(PolyError::Arity {
                expected: ring.arity(),
                found: g.terms()[0].0.len(),
            });
        }
    }
    let mut budget = limits.max_reductions;
    let mut basis: Vec<Polynomial> = Vec::new();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();

    let insert = |basis: &mut Vec<Polynomial>,
                      pending: &mut BTreeSet<(usize, usize)>,
                      p: Polynomial|
     -> Result<bool, PolyError> {
        if p.is_one() {
            basis.clear();
            basis.push(p);
            return Ok(true);
        }
        let k = basis.len();
        for i in 0..k {
            pending.insert((i, k));
        }
        basis.push(p);
        if basis.len() > limits.max_basis_size {
            return Err(limit("basis size", limits.max_basis_size as u64));
        }
        Ok(false)
    };

    for g in &ideal.generators {
        let r = normal_form(ring, g, &basis, &mut budget)
            .map_err(|_| limit("reductions", limits.max_reductions))?;
        if !r.is_zero() && insert(&mut basis, &mut pending, r)? {
            return Ok(finish(ring, basis));
        }
    }

    while !pending.is_empty() {
        // normal strategy: smallest lcm first
        let &(i, j) = pending
            .iter()
            .min_by(|a, b| {
                let la = basis[a.0].leading().unwrap().lcm(basis[a.1].leading().unwrap());
                let lb = basis[b.0].leading().unwrap().lcm(basis[b.1].leading().unwrap());
                ring.cmp(&la, &lb).then(a.cmp(b))
            })
            .unwrap();
        pending.remove(&(i, j));
        let li = basis[i].leading().unwrap();
        let lj = basis[j].leading().unwrap();
        if li.coprime(lj) {
            continue;
        }
        let l = li.lcm(lj);
        if ring.degree_of(&l) > limits.max_degree {
            return Err(limit("degree", limits.max_degree));
        }
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && basis[k].leading().unwrap().divides(&l)
                && !pending.contains(&(i.min(k), i.max(k)))
                && !pending.contains(&(j.min(k), j.max(k)))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(ring, &basis[i], &basis[j]);
        let r = normal_form(ring, &s, &basis, &mut budget)
            .map_err(|_| limit("reductions", limits.max_reductions))?;
        if !r.is_zero() && insert(&mut basis, &mut pending, r)? {
            return Ok(finish(ring, basis));
        }
    }
    Ok(finish(ring, basis))
}

fn finish(ring: &PolyRing, basis: Vec<Polynomial>) -> GroebnerBasis {
    // minimal basis: drop elements whose leading monomial is divisible by
    // another's (keeping the first of equal ones)
    let lts: Vec<Monomial> = basis.iter().map(|g| g.leading().unwrap().clone()).collect();
    let mut keep = Vec::new();
    for (i, g) in basis.iter().enumerate() {
        let redundant = lts.iter().enumerate().any(|(j, lj)| {
            j != i && lj.divides(&lts[i]) && (lj != &lts[i] || j < i)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    // interreduce
    let mut reduced = Vec::with_capacity(keep.len());
    for i in 0..keep.len() {
        let others: Vec<Polynomial> = keep
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, g)| g.clone())
            .collect();
        let mut steps = u64::MAX;
        let r = normal_form(ring, &keep[i], &others, &mut steps).unwrap();
        debug_assert_eq!(r.leading(), keep[i].leading());
        reduced.push(r);
    }
    reduced.sort_by(|a, b| ring.cmp(b.leading().unwrap(), a.leading().unwrap()));
    GroebnerBasis {
        ring: ring.clone(),
        polys: reduced,
    }
}

/// `p ∈ ideal`.
pub fn in_ideal(p: &Polynomial, ideal: &IdealSpec, limits: &Limits) -> Result<bool, PolyError> {
    Ok(groebner(ideal, limits)?.contains(p))
}

/// How [`is_nilpotent`] decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NilpotenceWitness {
    /// `p^e ∈ I` for this `e` (a power of two).
    Power(u32),
    /// `1 ∈ I + (1 + y·p)` in a ring with a fresh variable `y`.
    Saturation,
    /// `1 ∉ I + (1 + y·p)`.
    NotNilpotent,
}

impl NilpotenceWitness {
    pub fn is_nilpotent(&self) -> bool {
        !matches!(self, NilpotenceWitness::NotNilpotent)
    }
}

/// Radical membership `p ∈ √I`.
///
/// Tries `p^{2^j} ∈ I` for `2^j ≤ max_power` first (squaring is Frobenius,
/// so this is cheap), then decides with the slack-variable test.
pub fn is_nilpotent_witness(
    p: &Polynomial,
    ideal: &IdealSpec,
    limits: &Limits,
) -> Result<NilpotenceWitness, PolyError> {
    let ring = &ideal.ring;
    let gb = groebner(ideal, limits)?;
    let mut power = 1u32;
    let mut q = gb.normal_form(p);
    loop {
        if q.is_zero() {
            return Ok(NilpotenceWitness::Power(power));
        }
        if power.saturating_mul(2) > limits.max_power {
            break;
        }
        // (p mod I)^2 ≡ p^2 mod I
        q = gb.normal_form(&ring.square(&q));
        power *= 2;
    }
    Ok(if saturation_test(p, ideal, limits)? {
        NilpotenceWitness::Saturation
    } else {
        NilpotenceWitness::NotNilpotent
    })
}

pub fn is_nilpotent(p: &Polynomial, ideal: &IdealSpec, limits: &Limits) -> Result<bool, PolyError> {
    Ok(is_nilpotent_witness(p, ideal, limits)?.is_nilpotent())
}

/// `1 ∈ I + (1 - y·p)` with `y` fresh.
pub fn saturation_test(p: &Polynomial, ideal: &IdealSpec, limits: &Limits) -> Result<bool, PolyError> {
    let ring = &ideal.ring;
    let mut slack = String::from("_slack");
    while ring.table.index_of(&slack).is_some() {
        slack.push('_');
    }
    let ext = ring.extended(&slack, 1);
    let y = ext.var(ext.arity() - 1);
    let mut gens: Vec<Polynomial> = ideal.generators.iter().map(|g| ring.embed(&ext, g)).collect();
    let yp = ext.mul(&y, &ring.embed(&ext, p));
    gens.push(ext.add(&ext.one(), &yp));
    let gb = groebner(&IdealSpec::new(ext, gens), limits)?;
    Ok(gb.is_unit_ideal())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum QuotientDim {
    Finite(u64),
    Infinite,
}

impl QuotientDim {
    pub fn finite(&self) -> Option<u64> {
        match self {
            QuotientDim::Finite(d) => Some(*d),
            QuotientDim::Infinite => None,
        }
    }
}

/// Standard monomials (not divisible by any leading monomial) of a
/// zero-dimensional basis; `None` if the staircase is infinite.
pub fn standard_monomials(gb: &GroebnerBasis, limits: &Limits) -> Result<Option<Vec<Monomial>>, PolyError> {
    let arity = gb.ring.arity();
    let lts = gb.leading_monomials();
    let mut bounds = vec![u16::MAX; arity];
    for lt in &lts {
        if lt.is_one() {
            return Ok(Some(Vec::new()));
        }
        if let Some((i, e)) = lt.pure_power() {
            bounds[i] = bounds[i].min(e);
        }
    }
    if bounds.contains(&u16::MAX) {
        return Ok(None);
    }
    let mut out = Vec::new();
    let mut current = Monomial::one(arity);
    fn walk(
        var: usize,
        current: &mut Monomial,
        bounds: &[u16],
        lts: &[Monomial],
        out: &mut Vec<Monomial>,
        cap: u64,
    ) -> Result<(), PolyError> {
        if var == bounds.len() {
            if !lts.iter().any(|lt| lt.divides(current)) {
                if out.len() as u64 >= cap {
                    return Err(limit("standard monomials", cap));
                }
                out.push(current.clone());
            }
            return Ok(());
        }
        for e in 0..bounds[var] {
            current.0[var] = e;
            // staircase is an order ideal: once divisible, larger e stays so
            if lts.iter().any(|lt| lt.divides(current)) {
                break;
            }
            walk(var + 1, current, bounds, lts, out, cap)?;
        }
        current.0[var] = 0;
        Ok(())
    }
    walk(0, &mut current, &bounds, &lts, &mut out, limits.max_standard_monomials)?;
    out.sort_by(|a, b| gb.ring.cmp(a, b));
    Ok(Some(out))
}

/// `dim_{F_2} R/I` via the staircase of the reduced basis.
pub fn quotient_dim(ideal: &IdealSpec, limits: &Limits) -> Result<QuotientDim, PolyError> {
    let gb = groebner(ideal, limits)?;
    Ok(match standard_monomials(&gb, limits)? {
        Some(ms) => QuotientDim::Finite(ms.len() as u64),
        None => QuotientDim::Infinite,
    })
}

/// Hilbert function of `R/I` read off the staircase, indexed by weighted
/// degree. Valid for homogeneous ideals under a graded order.
pub fn staircase_series(gb: &GroebnerBasis, limits: &Limits) -> Result<Option<Vec<u64>>, PolyError> {
    let Some(ms) = standard_monomials(gb, limits)? else {
        return Ok(None);
    };
    let mut series = Vec::new();
    for m in ms {
        let d = gb.ring.degree_of(&m) as usize;
        if series.len() <= d {
            series.resize(d + 1, 0);
        }
        series[d] += 1;
    }
    Ok(Some(series))
}

/// Compares two reduced bases for equality as sets.
pub fn same_basis(a: &GroebnerBasis, b: &GroebnerBasis) -> bool {
    a.polys.len() == b.polys.len()
        && a.polys.iter().zip(&b.polys).all(|(x, y)| x == y)
        && a.ring == b.ring
}
