//! Euler characteristics of generalized Moore spectra
//! `S/(2^{i_0}, v_1^{i_1}, …, v_h^{i_h})` and the 2-adic nonexistence gate.

use crate::hilbert::{dimension, nu2, HeightContext, HilbertError};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MooreError {
    #[error("a Moore shape needs at least one exponent")]
    EmptyShape,
    #[error("exponent {index} is zero; all exponents must be positive")]
    ZeroExponent { index: usize },
    #[error("shape has height {shape} but the context has height {context}")]
    HeightMismatch { shape: u64, context: u64 },
    #[error("height 0 carries no constraint")]
    HeightZero,
    #[error("|π_{degree}| = {order} is not a power of {prime}")]
    NotPrimePower { degree: i64, order: BigUint, prime: u32 },
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
}

/// Exponents `(i_0, i_1, …, i_h)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct MooreShape {
    exponents: Vec<u64>,
}

impl MooreShape {
    pub fn new(exponents: Vec<u64>) -> Result<Self, MooreError> {
        if exponents.is_empty() {
            return Err(MooreError::EmptyShape);
        }
        if let Some(index) = exponents.iter().position(|&i| i == 0) {
            return Err(MooreError::ZeroExponent { index });
        }
        Ok(MooreShape { exponents })
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn height(&self) -> u64 {
        self.exponents.len() as u64 - 1
    }

    /// Parses `"1,4,32"`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let exps = text
            .split(',')
            .map(|s| s.trim().parse::<u64>().map_err(|_| format!("bad exponent `{s}`")))
            .collect::<Result<Vec<_>, _>>()?;
        MooreShape::new(exps).map_err(|e| e.to_string())
    }
}

impl TryFrom<Vec<u64>> for MooreShape {
    type Error = MooreError;
    fn try_from(v: Vec<u64>) -> Result<Self, MooreError> {
        MooreShape::new(v)
    }
}

impl From<MooreShape> for Vec<u64> {
    fn from(s: MooreShape) -> Self {
        s.exponents
    }
}

impl fmt::Display for MooreShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::with_capacity(self.exponents.len());
        for (k, &i) in self.exponents.iter().enumerate() {
            let base = if k == 0 { "2".to_string() } else { format!("v_{k}") };
            parts.push(if i == 1 && k > 0 { base } else { format!("{base}^{i}") });
        }
        write!(f, "S/({})", parts.join(", "))
    }
}

/// Orders `|π_i|` of a finite spectrum's homotopy, all powers of `prime`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyTable {
    pub prime: u32,
    #[serde(with = "crate::decimal::map")]
    pub orders: BTreeMap<i64, BigUint>,
}

impl HomotopyTable {
    pub fn new(prime: u32) -> Self {
        HomotopyTable {
            prime,
            orders: BTreeMap::new(),
        }
    }

    pub fn with(mut self, degree: i64, order: impl Into<BigUint>) -> Self {
        self.orders.insert(degree, order.into());
        self
    }
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn log_p(order: &BigUint, p: u32) -> Option<u64> {
    if order.is_zero() {
        return None;
    }
    let p = BigUint::from(p);
    let mut x = order.clone();
    let mut e = 0;
    while !x.is_one() {
        if !(&x % &p).is_zero() {
            return None;
        }
        x /= &p;
        e += 1;
    }
    Some(e)
}

/// `Σ_i (-1)^i log_p |π_i|`.
pub fn euler_characteristic(table: &HomotopyTable) -> Result<BigInt, MooreError> {
    if !is_prime(table.prime) {
        return Err(MooreError::NotPrime(table.prime));
    }
    let mut chi = BigInt::zero();
    for (&degree, order) in &table.orders {
        let e = log_p(order, table.prime).ok_or_else(|| MooreError::NotPrimePower {
            degree,
            order: order.clone(),
            prime: table.prime,
        })?;
        if degree.rem_euclid(2) == 0 {
            chi += e;
        } else {
            chi -= e;
        }
    }
    Ok(chi)
}

/// `χ_{BP⟨h⟩} = ∏ i_k`.
pub fn chi_bp(shape: &MooreShape) -> BigUint {
    shape.exponents.iter().map(|&i| BigUint::from(i)).product()
}

/// `dim · ∏ i_k`, the characteristic against the fixed points of the
/// height-`h` quotient for `ctx`.
pub fn chi_eo(ctx: &HeightContext, shape: &MooreShape) -> Result<BigUint, MooreError> {
    if shape.height() != ctx.h {
        return Err(MooreError::HeightMismatch {
            shape: shape.height(),
            context: ctx.h,
        });
    }
    Ok(dimension(ctx)? * chi_bp(shape))
}

/// `2^{ν_2(h)+1}`.
pub fn divisibility_bound(h: u64) -> Result<BigUint, MooreError> {
    if h == 0 {
        return Err(MooreError::HeightZero);
    }
    Ok(BigUint::one() << (h.trailing_zeros() + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    RuledOut,
    NotRuledOut,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::RuledOut => "RuledOut",
            Status::NotRuledOut => "NotRuledOut",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub nu2_product: u64,
    pub nu2_height: u64,
    #[serde(with = "crate::decimal")]
    pub bound: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    pub shape: MooreShape,
    pub height: u64,
    pub witness: Witness,
    /// Set on `NotRuledOut`: passing the gate does not construct anything.
    pub caveat: Option<String>,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = &self.witness;
        let cmp = if self.status == Status::RuledOut { "<=" } else { ">" };
        write!(
            f,
            "{}: {} at h={}: nu2(prod)={} {cmp} nu2(h)={}, bound {}",
            self.status, self.shape, self.height, w.nu2_product, w.nu2_height, w.bound
        )?;
        if let Some(c) = &self.caveat {
            write!(f, " ({c})")?;
        }
        Ok(())
    }
}

/// Rules out the shape when `ν_2(∏ i_k) ≤ ν_2(h)`.
pub fn moore_gate(shape: &MooreShape) -> Result<Verdict, MooreError> {
    let h = shape.height();
    let bound = divisibility_bound(h)?;
    let nu2_product = nu2(&chi_bp(shape)).expect("exponents are positive");
    let nu2_height = h.trailing_zeros() as u64;
    let status = if nu2_product <= nu2_height {
        Status::RuledOut
    } else {
        Status::NotRuledOut
    };
    Ok(Verdict {
        status,
        shape: shape.clone(),
        height: h,
        witness: Witness {
            nu2_product,
            nu2_height,
            bound,
        },
        caveat: (status == Status::NotRuledOut).then(|| "existence not implied".to_string()),
    })
}
