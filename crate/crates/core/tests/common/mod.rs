//! Independent oracles shared by the integration tests. Nothing here calls
//! into the code paths it is used to check.
#![allow(dead_code)]

use hrk_core::f2poly::{Monomial, PolyRing, Polynomial};
use num_bigint::BigUint;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::{BTreeMap, HashMap};

/// `(N choose M)_2` by the q-Pascal rule
/// `(N, M) = (N-1, M-1) + 2^M (N-1, M)`.
pub fn q_pascal(top: u64, bottom: u64) -> BigUint {
    let mut row: Vec<BigUint> = vec![BigUint::from(1u8)];
    for n in 1..=top {
        let mut next = vec![BigUint::from(0u8); n as usize + 1];
        for k in 0..=n as usize {
            let mut v = BigUint::from(0u8);
            if k >= 1 {
                v += &row[k - 1];
            }
            if k < row.len() {
                v += &row[k] << k;
            }
            next[k] = v;
        }
        row = next;
    }
    row.get(bottom as usize).cloned().unwrap_or_default()
}

/// Truncated power-series evaluation of
/// `∏_{i≤h}(1-x^{2^i-1}) / ∏^{|G|/2} ∏_{i≤m}(1-x^{2^i-1})`: expand each
/// denominator as a geometric series up to `cutoff`, multiply, and return
/// the coefficients through `cutoff`.
pub fn series_by_geometric_expansion(n: u32, m: u32, cutoff: usize) -> Vec<i128> {
    let h = (1u64 << (n - 1)) * m as u64;
    let mut f = vec![0i128; cutoff + 1];
    f[0] = 1;
    for i in 1..=h {
        let a = (1usize << i) - 1;
        for d in (a..=cutoff).rev() {
            f[d] -= f[d - a];
        }
    }
    for _ in 0..(1u32 << (n - 1)) {
        for i in 1..=m {
            let b = (1usize << i) - 1;
            for d in b..=cutoff {
                f[d] += f[d - b];
            }
        }
    }
    f
}

/// Cell-by-cell evaluation of `[(Σ^{sρ_{C_{2^k}}} X)^{C_{2^k}}]` as a map
/// from fixed-subgroup exponent to coefficient, recursing on `s` all the way
/// down:
/// `cell(k, s) = -cell(k, s-1) + Σ_i Σ_{j=2^{i-1}+1}^{2^i} (-1)^j cell(k-i, (s-1)·2^i)`.
pub fn cell_oracle(k: u32, s: u64) -> BTreeMap<u32, i64> {
    fn go(k: u32, s: u64, memo: &mut HashMap<(u32, u64), BTreeMap<u32, i64>>) -> BTreeMap<u32, i64> {
        if let Some(v) = memo.get(&(k, s)) {
            return v.clone();
        }
        let mut out = BTreeMap::new();
        if s == 0 {
            out.insert(k, 1);
        } else if k == 0 {
            out.insert(0, if s % 2 == 0 { 1 } else { -1 });
        } else {
            for (sub, c) in go(k, s - 1, memo) {
                *out.entry(sub).or_insert(0) -= c;
            }
            for i in 1..=k {
                for j in (1u64 << (i - 1)) + 1..=(1u64 << i) {
                    let sign = if j % 2 == 0 { 1 } else { -1 };
                    for (sub, c) in go(k - i, (s - 1) << i, memo) {
                        *out.entry(sub).or_insert(0) += sign * c;
                    }
                }
            }
            out.retain(|_, c| *c != 0);
        }
        memo.insert((k, s), out.clone());
        out
    }
    go(k, s, &mut HashMap::new())
}

fn monomials_of_degree(arity: usize, degree: u32) -> Vec<Vec<u16>> {
    if arity == 0 {
        return if degree == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=degree).rev() {
        for mut rest in monomials_of_degree(arity - 1, degree - first) {
            rest.insert(0, first as u16);
            out.push(rest);
        }
    }
    out
}

/// Rank over `F_2` of rows given as bitsets.
fn f2_rank(mut rows: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let width = rows.first().map_or(0, |r| r.len() * 64);
    for col in 0..width {
        let (w, b) = (col / 64, col % 64);
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][w] >> b & 1 == 1) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for r in 0..rows.len() {
            if r != rank && rows[r][w] >> b & 1 == 1 {
                for (x, y) in rows[r].iter_mut().zip(&pivot_row) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `dim_{F_2} F_2[x_1..x_k]/I` for `I` generated by homogeneous polynomials
/// in standard grading, by computing `dim I_d` as the span of all
/// `monomial · generator` in each degree. Gives up (returns `None`) past
/// `max_degree`.
pub fn brute_quotient_dim(ring: &PolyRing, gens: &[Polynomial], max_degree: u32) -> Option<u64> {
    let arity = ring.arity();
    let gen_degrees: Vec<u32> = gens
        .iter()
        .map(|g| g.terms()[0].exponents().iter().map(|&e| e as u32).sum())
        .collect();
    let mut total = 0u64;
    for d in 0..=max_degree {
        let basis = monomials_of_degree(arity, d);
        let index: HashMap<&Vec<u16>, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let words = basis.len().div_ceil(64).max(1);
        let mut rows = Vec::new();
        for (g, &gd) in gens.iter().zip(&gen_degrees) {
            if gd > d {
                continue;
            }
            for mult in monomials_of_degree(arity, d - gd) {
                let mut row = vec![0u64; words];
                for t in g.terms() {
                    let e: Vec<u16> = t.exponents().iter().zip(&mult).map(|(a, b)| a + b).collect();
                    let i = index[&e];
                    row[i / 64] ^= 1 << (i % 64);
                }
                rows.push(row);
            }
        }
        let quotient = basis.len() - f2_rank(rows);
        if quotient == 0 {
            return Some(total);
        }
        total += quotient as u64;
    }
    None
}

/// A random homogeneous polynomial of the given degree (possibly zero).
pub fn random_homogeneous(rng: &mut StdRng, ring: &PolyRing, degree: u32) -> Polynomial {
    let monomials = monomials_of_degree(ring.arity(), degree);
    ring.poly(
        monomials
            .into_iter()
            .filter(|_| rng.gen_bool(0.4))
            .map(|e| Monomial(e.into_iter().collect())),
    )
}

/// A random polynomial with terms of degree at most `max_degree`.
pub fn random_poly(rng: &mut StdRng, ring: &PolyRing, max_degree: u32, terms: usize) -> Polynomial {
    let mut all = Vec::new();
    for d in 0..=max_degree {
        all.extend(monomials_of_degree(ring.arity(), d));
    }
    ring.poly((0..terms).map(|_| Monomial(all.choose(rng).unwrap().iter().copied().collect())))
}

/// Pure powers `x_i^{a_i}` (`Π a_i ≤ 64`) plus a few random homogeneous
/// forms: a zero-dimensional homogeneous ideal with a quotient of
/// dimension at most 64.
pub fn random_zero_dim_instance(rng: &mut StdRng) -> (PolyRing, Vec<Polynomial>) {
    let arity = rng.gen_range(1..=3usize);
    let names: Vec<String> = (0..arity).map(|i| format!("x{i}")).collect();
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let ring = PolyRing::with_names(&name_refs);
    let cap = match arity {
        1 => 64,
        2 => 8,
        _ => 4,
    };
    let mut gens: Vec<Polynomial> = (0..arity)
        .map(|i| ring.monomial(Monomial::var(arity, i, rng.gen_range(1..=cap))))
        .collect();
    for _ in 0..rng.gen_range(0..=3) {
        let degree = rng.gen_range(1..=3);
        let p = random_homogeneous(rng, &ring, degree);
        if !p.is_zero() {
            gens.push(p);
        }
    }
    gens.shuffle(rng);
    (ring, gens)
}

/// Same ideal, different generators: shuffled, with some generators
/// replaced by `g_i + t·g_j` for a random monomial `t`.
pub fn scramble(rng: &mut StdRng, ring: &PolyRing, gens: &[Polynomial]) -> Vec<Polynomial> {
    let mut out = gens.to_vec();
    if out.len() >= 2 {
        for _ in 0..rng.gen_range(1..=3) {
            let i = rng.gen_range(0..out.len());
            let j = (i + rng.gen_range(1..out.len())) % out.len();
            let t = random_poly(rng, ring, 1, 1);
            let add = ring.mul(&t, &out[j]);
            let candidate = ring.add(&out[i], &add);
            if !candidate.is_zero() {
                out[i] = candidate;
            }
        }
    }
    out.shuffle(rng);
    out
}
