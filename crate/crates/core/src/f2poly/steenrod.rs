//! The truncated dual Steenrod algebra presentation of
//! `π_*^e BP^((C_4))⟨m⟩/(2, v_1, …, v_{2m})`.
//!
//! Conjugates are computed from the antipode recursion
//! `Σ_{i+j=k} ξ_i^{2^j} ζ_j = 0` (`ξ_0 = ζ_0 = 1`) with `ξ_i = 0` for `i > m`.

use super::groebner::IdealSpec;
use super::relations::RelationFile;
use super::ring::{GeneratorTable, MonomialOrder, PolyRing, Polynomial, SignedPermutation};

fn generator_degree(i: u32) -> u32 {
    (1u32 << i) - 1
}

/// `F_2[ξ_1, …, ξ_m]` with `|ξ_i| = 2^i - 1`.
pub fn milnor_ring(m: u32) -> PolyRing {
    assert!(m >= 1);
    let names = (1..=m).map(|i| format!("xi_{i}")).collect();
    let degrees = (1..=m).map(generator_degree).collect();
    PolyRing::new(
        GeneratorTable::new(names, degrees).expect("distinct names"),
        MonomialOrder::DegRevLex,
    )
}

/// `ξ_i` as a polynomial, zero for `i > m`; `ξ_0 = 1`.
fn xi(ring: &PolyRing, i: u32) -> Polynomial {
    match i {
        0 => ring.one(),
        i if i as usize <= ring.arity() => ring.var(i as usize - 1),
        _ => Polynomial::zero(),
    }
}

/// `ζ_1, …, ζ_count` in `F_2[ξ_1, …, ξ_m]`.
pub fn conjugates(ring: &PolyRing, count: u32) -> Vec<Polynomial> {
    let mut zeta: Vec<Polynomial> = vec![ring.one()];
    for k in 1..=count {
        let mut acc = Polynomial::zero();
        for i in 1..=k {
            let mut xi_pow = xi(ring, i);
            for _ in 0..(k - i) {
                xi_pow = ring.square(&xi_pow);
            }
            acc = ring.add(&acc, &ring.mul(&xi_pow, &zeta[(k - i) as usize]));
        }
        zeta.push(acc);
    }
    zeta.remove(0);
    zeta
}

/// `ζ_1, …, ζ_{2m}` together with their ring.
pub fn steenrod_conjugates(m: u32) -> (PolyRing, Vec<Polynomial>) {
    let ring = milnor_ring(m);
    let zeta = conjugates(&ring, 2 * m);
    (ring, zeta)
}

/// `F_2[ξ_1, …, ξ_m]/(ζ_{m+1}, …, ζ_{2m})`.
pub fn c4_mod2_presentation(m: u32) -> IdealSpec {
    let (ring, zeta) = steenrod_conjugates(m);
    let gens = zeta[m as usize..].to_vec();
    IdealSpec::new(ring, gens)
}

/// Relation data for `G = C_4` in which the `2m` polynomial generators are
/// `ξ_1, …, ξ_m, ζ_1, …, ζ_m` and the `k`-th relation is the coefficient of
/// `x^{2^k}` in `g(f(x)) - x`, for `f = x + Σ ξ_i x^{2^i}` and
/// `g = x + Σ ζ_j x^{2^j}`. Eliminating the `ζ`'s recovers
/// [`c4_mod2_presentation`].
pub fn c4_relation_file(m: u32) -> RelationFile {
    assert!(m >= 1);
    let mut names: Vec<String> = (1..=m).map(|i| format!("xi_{i}")).collect();
    names.extend((1..=m).map(|i| format!("zeta_{i}")));
    let degrees: Vec<u32> = (1..=m).chain(1..=m).map(generator_degree).collect();
    let mu = m as usize;
    // γ: ξ_i -> ζ_i -> -ξ_i
    let action: Vec<(usize, i8)> = (0..mu)
        .map(|i| (i + mu, 1))
        .chain((0..mu).map(|i| (i, -1)))
        .collect();
    let table = GeneratorTable::new(names, degrees)
        .and_then(|t| t.with_action(SignedPermutation::new(action)?))
        .expect("valid table");
    let ring = PolyRing::new(table, MonomialOrder::DegRevLex);
    let var = |name: String| ring.var_named(&name).unwrap_or_else(|_| Polynomial::zero());
    let xi = |i: u32| if i == 0 { ring.one() } else { var(format!("xi_{i}")) };
    let zeta = |j: u32| if j == 0 { ring.one() } else { var(format!("zeta_{j}")) };
    let mut v_images = Vec::new();
    for k in 1..=2 * m {
        let mut rel = Polynomial::zero();
        for i in 0..=k {
            let j = k - i;
            let mut xi_pow = xi(i);
            for _ in 0..j {
                xi_pow = ring.square(&xi_pow);
            }
            rel = ring.add(&rel, &ring.mul(&xi_pow, &zeta(j)));
        }
        v_images.push((k, rel));
    }
    RelationFile::from_parts(
        2,
        m,
        &ring,
        v_images,
        Vec::new(),
        vec![
            "Presentation of the C4 quotient by (2, v_1, ..., v_2m) through the truncated dual Steenrod algebra.".into(),
            "Generators xi_i, zeta_i stand for the 2m polynomial generators G.t_i; relation k is the x^(2^k) coefficient of g(f(x)) - x with f = x + sum xi_i x^(2^i), g = x + sum zeta_j x^(2^j).".into(),
            "Only the ring is asserted; the generator correspondence with t_i, gamma t_i is not.".into(),
        ],
    )
}

/// Relation data for `G = C_2`: `v_i ↦ t_i` (`t_i ≡ v_i` modulo lower `v`'s).
pub fn c2_relation_file(m: u32) -> RelationFile {
    let names: Vec<String> = (1..=m).map(|i| format!("t_{i}")).collect();
    let degrees: Vec<u32> = (1..=m).map(generator_degree).collect();
    // γ acts on t_i by the sign σ t = -t
    let action = SignedPermutation::new((0..m as usize).map(|i| (i, -1)).collect()).expect("valid");
    let table = GeneratorTable::new(names, degrees)
        .and_then(|t| t.with_action(action))
        .expect("valid table");
    let ring = PolyRing::new(table, MonomialOrder::DegRevLex);
    let v_images = (1..=m).map(|i| (i, ring.var(i as usize - 1))).collect();
    RelationFile::from_parts(
        1,
        m,
        &ring,
        v_images,
        Vec::new(),
        vec!["C2 base case: t_i is congruent to v_i modulo (2, v_1, ..., v_{i-1}); the file records v_i = t_i.".into()],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2poly::groebner::{quotient_dim, Limits, QuotientDim};

    #[test]
    fn low_conjugates() {
        let (ring, zeta) = steenrod_conjugates(2);
        assert_eq!(ring.render(&zeta[0]), "xi_1");
        assert_eq!(ring.render(&zeta[1]), "xi_1^3 + xi_2");
        assert_eq!(
            ring.poly(zeta[2].terms().iter().cloned()),
            ring.parse("xi_1*xi_2^2 + xi_1^4*xi_2 + xi_1^7").unwrap()
        );
        for (k, z) in zeta.iter().enumerate() {
            assert_eq!(ring.homogeneous_degree(z), Some((1u64 << (k + 1)) - 1));
        }
    }

    #[test]
    fn zeta2_with_xi2_zero() {
        let (ring, zeta) = steenrod_conjugates(1);
        assert_eq!(ring.render(&zeta[1]), "xi_1^3");
    }

    #[test]
    fn presentations() {
        let l = Limits::default();
        let p1 = c4_mod2_presentation(1);
        assert_eq!(p1.generators.len(), 1);
        assert_eq!(quotient_dim(&p1, &l).unwrap(), QuotientDim::Finite(3));
        assert_eq!(quotient_dim(&c4_mod2_presentation(2), &l).unwrap(), QuotientDim::Finite(35));
    }

    #[test]
    fn relation_file_matches_presentation() {
        let l = Limits::default();
        for m in 1..=2 {
            let file = c4_relation_file(m);
            let ideal = file.ideal().unwrap();
            let dim = quotient_dim(&ideal, &l).unwrap();
            assert_eq!(dim, quotient_dim(&c4_mod2_presentation(m), &l).unwrap());
        }
    }
}
