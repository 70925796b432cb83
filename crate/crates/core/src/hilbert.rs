//! Poincaré series and dimensions of `π_*^e BP^((G))⟨m⟩/(2, v_1, …, v_h)`.
//!
//! Degrees are halved throughout, so `|t_i| = |v_i| = 2^i - 1`. The series is
//!
//! ```text
//!           ∏_{i=1}^{h} (1 - x^{2^i-1})
//! f_m(x) = -----------------------------
//!          (∏_{i=1}^{m} (1 - x^{2^i-1}))^{|G|/2}
//! ```
//!
//! and is computed two ways: by dense exact division, and by counting
//! cyclotomic factors `Φ_d` on either side. The second route scales to
//! heights where the dense polynomial would have billions of coefficients.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Largest series degree the dense route will materialize.
pub const DENSE_DEGREE_LIMIT: u64 = 1 << 21;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HilbertError {
    #[error("group exponent must be at least 1 (got {0})")]
    BadGroup(u32),
    #[error("height h = {h} is too large (limit {limit})")]
    HeightTooLarge { h: u64, limit: u64 },
    #[error("polynomial division left a nonzero remainder")]
    NonExactDivision,
    #[error("dense series of degree {degree} exceeds the limit {limit}")]
    ResourceLimit { degree: u64, limit: u64 },
}

/// `G = C_{2^n}`, truncation `m`, and `h = 2^{n-1}·m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HeightContext {
    pub n: u32,
    pub m: u32,
    pub h: u64,
}

impl HeightContext {
    /// Largest supported height; `2^h - 1` must fit the cyclotomic bookkeeping.
    pub const MAX_H: u64 = 62;

    pub fn new(n: u32, m: u32) -> Result<Self, HilbertError> {
        if n == 0 || n > 31 {
            return Err(HilbertError::BadGroup(n));
        }
        let h = (1u64 << (n - 1)) * m as u64;
        Ok(HeightContext { n, m, h })
    }

    /// `|G|/2`.
    pub fn half_order(&self) -> u64 {
        1u64 << (self.n - 1)
    }

    fn check_height(&self) -> Result<(), HilbertError> {
        if self.h > Self::MAX_H {
            Err(HilbertError::HeightTooLarge {
                h: self.h,
                limit: Self::MAX_H,
            })
        } else {
            Ok(())
        }
    }
}

/// Dense polynomial with exact integer coefficients; index = halved degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntPolynomial {
    #[serde(with = "crate::decimal::vec")]
    coefficients: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coefficients: Vec<BigInt>) -> Self {
        while coefficients.last().is_some_and(Zero::is_zero) {
            coefficients.pop();
        }
        IntPolynomial { coefficients }
    }

    pub fn one() -> Self {
        IntPolynomial::new(vec![BigInt::one()])
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    /// `f(1)`.
    pub fn coefficient_sum(&self) -> BigInt {
        self.coefficients.iter().sum()
    }

    /// Nonzero `(degree, coefficient)` pairs.
    pub fn sparse_terms(&self) -> Vec<(usize, BigInt)> {
        self.coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(d, c)| (d, c.clone()))
            .collect()
    }

    /// Multiplies in place by `1 - x^a`.
    pub fn mul_one_minus_power(&mut self, a: usize) {
        let old_len = self.coefficients.len();
        if old_len == 0 {
            return;
        }
        self.coefficients.resize(old_len + a, BigInt::zero());
        for i in (a..old_len + a).rev() {
            let shifted = self.coefficients[i - a].clone();
            self.coefficients[i] -= shifted;
        }
        *self = IntPolynomial::new(std::mem::take(&mut self.coefficients));
    }

    /// Exact division by `1 - x^a`.
    pub fn div_one_minus_power(&self, a: usize) -> Result<IntPolynomial, HilbertError> {
        assert!(a > 0);
        let Some(deg) = self.degree() else {
            return Ok(self.clone());
        };
        if deg < a {
            return Err(HilbertError::NonExactDivision);
        }
        // q(1 - x^a) = p  =>  q_i = p_i + q_{i-a}
        let qlen = deg + 1 - a;
        let mut q: Vec<BigInt> = Vec::with_capacity(qlen);
        for i in 0..qlen {
            let mut c = self.coefficients[i].clone();
            if i >= a {
                c += &q[i - a];
            }
            q.push(c);
        }
        // remaining coefficients must equal -q_{i-a}
        for i in qlen..=deg {
            let expected = if i >= a {
                -q[i - a].clone()
            } else {
                BigInt::zero()
            };
            if self.coefficients[i] != expected {
                return Err(HilbertError::NonExactDivision);
            }
        }
        Ok(IntPolynomial::new(q))
    }

    /// General long division, `(quotient, remainder)`. The divisor must be
    /// nonzero with leading coefficient ±1.
    pub fn div_rem(&self, divisor: &IntPolynomial) -> (IntPolynomial, IntPolynomial) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.coefficients[dd].clone();
        assert!(lead.abs().is_one(), "divisor must be monic up to sign");
        let mut rem = self.coefficients.clone();
        let Some(deg) = self.degree() else {
            return (IntPolynomial::new(vec![]), IntPolynomial::new(vec![]));
        };
        if deg < dd {
            return (IntPolynomial::new(vec![]), self.clone());
        }
        let mut quot = vec![BigInt::zero(); deg - dd + 1];
        for i in (0..=deg - dd).rev() {
            let c = &rem[i + dd] * &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in divisor.coefficients.iter().enumerate() {
                rem[i + j] -= &c * dj;
            }
            quot[i] = c;
        }
        (IntPolynomial::new(quot), IntPolynomial::new(rem))
    }

    pub fn mul(&self, other: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || other.is_zero() {
            return IntPolynomial::new(vec![]);
        }
        let mut out = vec![BigInt::zero(); self.coefficients.len() + other.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sparse_terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        let rendered: Vec<String> = terms
            .iter()
            .map(|(d, c)| match (d, c.is_one()) {
                (0, _) => c.to_string(),
                (1, true) => "x".to_string(),
                (1, false) => format!("{c}x"),
                (_, true) => format!("x^{d}"),
                (_, false) => format!("{c}x^{d}"),
            })
            .collect();
        f.write_str(&rendered.join(" + "))
    }
}

/// The Gaussian binomial coefficient `(N choose M)_2`, from its product formula.
pub fn gaussian_binomial(top: u64, bottom: u64) -> BigUint {
    if bottom > top {
        return BigUint::zero();
    }
    let two = BigUint::from(2u8);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..bottom {
        // (1 - 2^{N-i}) / (1 - 2^{i+1}); both factors negative, signs cancel
        num *= two.pow((top - i) as u32) - 1u8;
        den *= two.pow((i + 1) as u32) - 1u8;
    }
    let (q, r) = num.div_rem(&den);
    debug_assert!(r.is_zero());
    debug_assert!(q.is_odd(), "Gaussian binomial at q = 2 must be odd");
    q
}

/// `∏_{j=0}^{|G|/2-1} ((j+1)m choose m)_2`.
pub fn gaussian_product(ctx: &HeightContext) -> BigUint {
    let m = ctx.m as u64;
    (0..ctx.half_order())
        .map(|j| gaussian_binomial((j + 1) * m, m))
        .product()
}

fn numerator_exponents(ctx: &HeightContext) -> Vec<u64> {
    (1..=ctx.h).map(|i| (1u64 << i) - 1).collect()
}

fn denominator_exponents(ctx: &HeightContext) -> Vec<u64> {
    let one_copy: Vec<u64> = (1..=ctx.m as u64).map(|i| (1u64 << i) - 1).collect();
    (0..ctx.half_order()).flat_map(|_| one_copy.iter().copied()).collect()
}

/// Degree of `f_m`: `Σ_{i≤h}(2^i-1) - |G|/2 · Σ_{i≤m}(2^i-1)`.
pub fn series_degree(ctx: &HeightContext) -> Result<u64, HilbertError> {
    ctx.check_height()?;
    let num: u128 = numerator_exponents(ctx).iter().map(|&a| a as u128).sum();
    let den: u128 = denominator_exponents(ctx).iter().map(|&a| a as u128).sum();
    Ok((num - den) as u64)
}

/// Dense Poincaré series by exact division.
pub fn poincare_series(ctx: &HeightContext) -> Result<IntPolynomial, HilbertError> {
    let degree = series_degree(ctx)?;
    let num_degree: u64 = numerator_exponents(ctx).iter().sum();
    if num_degree > DENSE_DEGREE_LIMIT {
        return Err(HilbertError::ResourceLimit {
            degree: degree.max(num_degree),
            limit: DENSE_DEGREE_LIMIT,
        });
    }
    let mut poly = IntPolynomial::one();
    for a in numerator_exponents(ctx) {
        poly.mul_one_minus_power(a as usize);
    }
    for a in denominator_exponents(ctx) {
        poly = poly.div_one_minus_power(a as usize)?;
    }
    debug_assert_eq!(poly.degree(), Some(degree as usize));
    Ok(poly)
}

/// `f_m(x) = ∏_d Φ_d(x)^{e_d}` with `e_d ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CyclotomicFactorization {
    pub exponents: BTreeMap<u64, u64>,
}

impl CyclotomicFactorization {
    /// `f(1) = ∏ Φ_d(1)^{e_d}`, where `Φ_d(1) = p` for `d = p^k` and 1
    /// otherwise (`d > 1`).
    pub fn value_at_one(&self) -> BigUint {
        let mut out = BigUint::one();
        for (&d, &e) in &self.exponents {
            assert!(d > 1 || e == 0, "Φ_1 vanishes at 1");
            if let Some(p) = prime_power_base(d) {
                out *= BigUint::from(p).pow(e as u32);
            }
        }
        out
    }

    /// Degree `Σ e_d φ(d)`.
    pub fn degree(&self) -> u64 {
        self.exponents
            .iter()
            .map(|(&d, &e)| e * euler_phi(d))
            .sum()
    }
}

/// Proves exact divisibility by comparing cyclotomic multiplicities:
/// `1 - x^a = -∏_{d|a} Φ_d(x)`, and the numerator and denominator have the
/// same number `h` of factors so the signs cancel.
pub fn poincare_factorization(ctx: &HeightContext) -> Result<CyclotomicFactorization, HilbertError> {
    ctx.check_height()?;
    let mut counts: BTreeMap<u64, i64> = BTreeMap::new();
    for a in numerator_exponents(ctx) {
        for d in divisors(a) {
            *counts.entry(d).or_default() += 1;
        }
    }
    for a in denominator_exponents(ctx) {
        for d in divisors(a) {
            *counts.entry(d).or_default() -= 1;
        }
    }
    let mut exponents = BTreeMap::new();
    for (d, c) in counts {
        match c.cmp(&0) {
            std::cmp::Ordering::Less => return Err(HilbertError::NonExactDivision),
            std::cmp::Ordering::Greater => {
                exponents.insert(d, c as u64);
            }
            std::cmp::Ordering::Equal => {}
        }
    }
    Ok(CyclotomicFactorization { exponents })
}

/// `dim_{F_2}` of the quotient ring, `f_m(1)`.
pub fn dimension(ctx: &HeightContext) -> Result<BigUint, HilbertError> {
    let dim = poincare_factorization(ctx)?.value_at_one();
    debug_assert!(dim.is_odd());
    Ok(dim)
}

/// Dimension via the dense series; limited to [`DENSE_DEGREE_LIMIT`].
pub fn dimension_dense(ctx: &HeightContext) -> Result<BigUint, HilbertError> {
    let sum = poincare_series(ctx)?.coefficient_sum();
    Ok(sum.to_biguint().expect("dimension is nonnegative"))
}

fn factorize(mut a: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= a {
        if a % p == 0 {
            let mut e = 0;
            while a % p == 0 {
                a /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if a > 1 {
        out.push((a, 1));
    }
    out
}

fn divisors(a: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(a) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

fn prime_power_base(d: u64) -> Option<u64> {
    match factorize(d).as_slice() {
        [(p, _)] => Some(*p),
        _ => None,
    }
}

fn euler_phi(d: u64) -> u64 {
    factorize(d)
        .into_iter()
        .fold(d, |acc, (p, _)| acc / p * (p - 1))
}

/// 2-adic valuation; `None` for zero.
pub fn nu2(x: &BigUint) -> Option<u64> {
    x.trailing_zeros()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: u32, m: u32) -> HeightContext {
        HeightContext::new(n, m).unwrap()
    }

    /// q-Pascal: (N, M) = (N-1, M-1) + 2^M (N-1, M).
    fn pascal(top: u64, bottom: u64) -> BigUint {
        let mut row = vec![BigUint::one()];
        for nn in 1..=top {
            let mut next = vec![BigUint::one(); nn as usize + 1];
            for k in 1..nn as usize {
                next[k] = &row[k - 1] + (BigUint::one() << k) * &row[k];
            }
            row = next;
        }
        row.get(bottom as usize).cloned().unwrap_or_default()
    }

    #[test]
    fn gaussian_examples() {
        assert_eq!(gaussian_binomial(7, 0), BigUint::one());
        assert_eq!(gaussian_binomial(2, 1), BigUint::from(3u8));
        assert_eq!(gaussian_binomial(4, 2), BigUint::from(35u8));
        assert_eq!(gaussian_binomial(2, 3), BigUint::zero());
    }

    #[test]
    fn gaussian_matches_pascal() {
        for top in 0..=12 {
            for bottom in 0..=top {
                assert_eq!(gaussian_binomial(top, bottom), pascal(top, bottom));
            }
        }
    }

    #[test]
    fn context_height() {
        assert_eq!(ctx(3, 2).h, 8);
        assert!(HeightContext::new(0, 1).is_err());
    }

    #[test]
    fn series_examples() {
        assert_eq!(poincare_series(&ctx(1, 3)).unwrap(), IntPolynomial::one());
        let s = poincare_series(&ctx(2, 1)).unwrap();
        assert_eq!(s.to_string(), "1 + x + x^2");
        let s = poincare_series(&ctx(2, 2)).unwrap();
        assert_eq!(s.coefficient_sum(), BigInt::from(35));
    }

    #[test]
    fn series_matches_general_long_division() {
        // numerator divided by the denominator product in one long division
        let c = ctx(2, 2);
        let mut num = IntPolynomial::one();
        for a in numerator_exponents(&c) {
            num.mul_one_minus_power(a as usize);
        }
        let mut den = IntPolynomial::one();
        for a in denominator_exponents(&c) {
            den.mul_one_minus_power(a as usize);
        }
        let (q, r) = num.div_rem(&den);
        assert!(r.is_zero());
        assert_eq!(q, poincare_series(&c).unwrap());
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dimension(&ctx(1, 4)).unwrap(), BigUint::one());
        assert_eq!(dimension(&ctx(2, 1)).unwrap(), BigUint::from(3u8));
        assert_eq!(dimension(&ctx(3, 1)).unwrap(), BigUint::from(315u16));
        assert_eq!(dimension(&ctx(2, 2)).unwrap(), BigUint::from(35u8));
    }

    #[test]
    fn gaussian_product_examples() {
        assert_eq!(gaussian_product(&ctx(1, 5)), BigUint::one());
        assert_eq!(gaussian_product(&ctx(2, 1)), BigUint::from(3u8));
        assert_eq!(gaussian_product(&ctx(2, 2)), BigUint::from(35u8));
    }

    #[test]
    fn three_routes_agree_where_dense_fits() {
        for n in 1..=3 {
            for m in 0..=3 {
                let c = ctx(n, m);
                let dense = dimension_dense(&c).unwrap();
                assert_eq!(dense, dimension(&c).unwrap(), "n={n} m={m}");
                assert_eq!(dense, gaussian_product(&c), "n={n} m={m}");
                let f = poincare_factorization(&c).unwrap();
                assert_eq!(f.degree(), series_degree(&c).unwrap());
            }
        }
    }

    #[test]
    fn coefficients_nonnegative() {
        for (n, m) in [(2, 3), (3, 2), (4, 1)] {
            let s = poincare_series(&ctx(n, m)).unwrap();
            assert!(s.coefficients().iter().all(|c| !c.is_negative()));
        }
    }

    #[test]
    fn dense_route_has_a_cap() {
        assert!(matches!(
            poincare_series(&ctx(4, 4)),
            Err(HilbertError::ResourceLimit { .. })
        ));
        assert!(poincare_factorization(&ctx(4, 4)).is_ok());
    }

    #[test]
    fn inexact_division_detected() {
        let p = IntPolynomial::new(vec![BigInt::one(), BigInt::one()]);
        assert_eq!(p.div_one_minus_power(1), Err(HilbertError::NonExactDivision));
    }

    #[test]
    fn cyclotomic_helpers() {
        assert_eq!(divisors(15), vec![1, 3, 5, 15]);
        assert_eq!(euler_phi(15), 8);
        assert_eq!(prime_power_base(9), Some(3));
        assert_eq!(prime_power_base(15), None);
    }
}
