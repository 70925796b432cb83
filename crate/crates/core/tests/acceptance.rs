//! Acceptance suite: one PASS/FAIL line per criterion, with wall time
//! against its budget. Exits non-zero if any criterion fails.

mod common;

use common::{brute_quotient_dim, cell_oracle, q_pascal, random_poly, random_zero_dim_instance, scramble};
use hrk_core::cyclic2::{burnside_orbit_count, orbit_decompose, CyclicGroup};
use hrk_core::f2poly::{
    bundled_relation_file, c4_mod2_presentation, groebner, is_nilpotent, quotient_dim, same_basis,
    verify_regularity, IdealSpec, Limits, PolyRing, Polynomial, QuotientDim,
};
use hrk_core::hilbert::{
    dimension, dimension_dense, gaussian_binomial, gaussian_product, nu2, poincare_factorization,
    poincare_series, series_degree, HeightContext, HilbertError, IntPolynomial,
};
use hrk_core::koszul::{associated_graded, VariableOrbit};
use hrk_core::kzero::{
    derive_height_drop_for, normalize, quotient_relation, raw_suspension_sum, suspend_fixed_points, K0Atom,
    K0Expression,
};
use hrk_core::moore::{chi_bp, chi_eo, moore_gate, MooreShape, Status};
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ctx(n: u32, m: u32) -> HeightContext {
    HeightContext::new(n, m).expect("valid context")
}

fn dimension_triple() -> Outcome {
    let l = Limits::default();
    for (m, want) in [(1u32, 3u32), (2, 35)] {
        let c = ctx(2, m);
        let division = dimension_dense(&c).map_err(|e| e.to_string())?;
        let gauss = gaussian_product(&c);
        let staircase = quotient_dim(&c4_mod2_presentation(m), &l).map_err(|e| e.to_string())?;
        let want = BigUint::from(want);
        check(division == want, || format!("m={m}: division gave {division}"))?;
        check(gauss == want, || format!("m={m}: Gaussian product gave {gauss}"))?;
        check(staircase.finite().map(BigUint::from) == Some(want.clone()), || {
            format!("m={m}: staircase gave {staircase:?}")
        })?;
    }
    Ok("division = Gaussian = staircase: 3 (m=1), 35 (m=2)".into())
}

fn oddness_sweep() -> Outcome {
    let mut count = 0;
    for n in 1..=4 {
        for m in 0..=4 {
            let d = dimension(&ctx(n, m)).map_err(|e| e.to_string())?;
            check(d.is_odd(), || format!("dimension({n}, {m}) = {d} is even"))?;
            count += 1;
        }
    }
    for top in 0..=12u64 {
        for bottom in 0..=top {
            let g = gaussian_binomial(top, bottom);
            check(g == q_pascal(top, bottom), || format!("({top} choose {bottom})_2 disagrees with q-Pascal"))?;
            check(g.is_odd(), || format!("({top} choose {bottom})_2 = {g} is even"))?;
        }
    }
    Ok(format!("{count} dimensions and 91 Gaussian binomials odd"))
}

fn series_exactness() -> Outcome {
    let mut dense = 0;
    let mut cyclotomic_only = Vec::new();
    for n in 1..=4 {
        for m in 0..=4 {
            let c = ctx(n, m);
            // exact divisibility of the numerator by every denominator factor,
            // by cyclotomic multiplicities
            let f = poincare_factorization(&c).map_err(|e| format!("({n}, {m}): {e}"))?;
            let degree = series_degree(&c).map_err(|e| e.to_string())?;
            check(f.degree() == degree, || format!("({n}, {m}): degree mismatch"))?;
            match poincare_series(&c) {
                Ok(series) => {
                    // each division by 1 - x^a ran with zero remainder
                    check(series.coefficient_sum() == BigInt::from(f.value_at_one()), || {
                        format!("({n}, {m}): dense and cyclotomic values differ")
                    })?;
                    if n == 1 {
                        check(series == IntPolynomial::one(), || format!("(1, {m}): series is {series}"))?;
                    }
                    dense += 1;
                }
                Err(HilbertError::ResourceLimit { .. }) => cyclotomic_only.push(format!("({n},{m})")),
                Err(e) => return Err(format!("({n}, {m}): {e}")),
            }
        }
    }
    Ok(format!(
        "20 contexts exact; {dense} also by dense division, {} by cyclotomic multiplicities only (dense degree over cap)",
        cyclotomic_only.join(" ")
    ))
}

fn filtration_golden() -> Outcome {
    let render = |n| -> Vec<(u64, String)> {
        associated_graded(CyclicGroup::new(n), 1)
            .unwrap()
            .iter()
            .flat_map(|(g, row)| row.iter().map(move |s| (*g, s.to_string())))
            .collect()
    };
    let c4 = render(2);
    let want_c4 = [(0, "M/(C4·x)"), (1, "Ind_C2^C4 Σ^{ρ_C2} M/(x)"), (2, "Σ^{ρ_C4} M")];
    check(c4.len() == 3 && c4.iter().zip(want_c4).all(|(a, b)| a.0 == b.0 && a.1 == b.1), || {
        format!("C4 layers: {c4:?}")
    })?;
    let c8 = render(3);
    let want_c8 = [
        (0, "M/(C8·x)"),
        (1, "Ind_C2^C8 Σ^{ρ_C2} M/(x, γx, γ^2x)"),
        (2, "Ind_C4^C8 Σ^{ρ_C4} M/(C4·x)"),
        (2, "Ind_C2^C8 Σ^{2ρ_C2} M/(x, γx)"),
        (3, "Ind_C2^C8 Σ^{3ρ_C2} M/(x)"),
        (4, "Σ^{ρ_C8} M"),
    ];
    check(c8.len() == 6 && c8.iter().zip(want_c8).all(|(a, b)| a.0 == b.0 && a.1 == b.1), || {
        format!("C8 layers: {c8:?}")
    })?;
    let mut counts = Vec::new();
    for n in 1..=5 {
        let g = CyclicGroup::new(n);
        let orbits = orbit_decompose(g).unwrap().len() as u64;
        let burnside = burnside_orbit_count(g).unwrap();
        check(orbits == burnside, || format!("n={n}: {orbits} orbits, Burnside says {burnside}"))?;
        counts.push(orbits);
    }
    check(counts[..3] == [2, 3, 6], || format!("orbit counts {counts:?}"))?;
    Ok(format!("C4: 3 layers, C8: 5 gradings / 6 summands; orbit counts {counts:?} match Burnside"))
}

fn k0_golden() -> Outcome {
    let plain = |k| K0Atom::plain("M", k);
    let quot = |n, acting, offsets: &[u32], k| {
        K0Atom::quotient("M", vec![VariableOrbit::new("x", n, acting, offsets.iter().copied())], k)
    };
    let expr = |terms: Vec<(K0Atom, i64)>| K0Expression::from_terms(terms.into_iter().map(|(a, c)| (a, BigInt::from(c))));

    let r2 = quotient_relation(2, 1).map_err(|e| e.to_string())?;
    let want2 = expr(vec![(plain(1), 1), (quot(2, 2, &[0], 2), 1), (quot(2, 0, &[0], 0), 1), (quot(2, 1, &[0], 1), -1)]);
    check(r2.lhs == expr(vec![(plain(2), 2)]) && r2.rhs == want2 && r2.replays(), || format!("C4 relation: {r2}"))?;

    let r3 = quotient_relation(3, 1).map_err(|e| e.to_string())?;
    let want3 = expr(vec![
        (plain(2), 1),
        (quot(3, 3, &[0], 3), 1),
        (quot(3, 0, &[0, 1, 2], 0), 1),
        (quot(3, 1, &[0, 1, 2], 1), -1),
        (quot(3, 1, &[0, 2], 1), 1),
        (quot(3, 2, &[0], 2), -1),
        (quot(3, 1, &[0, 1], 1), 1),
        (quot(3, 0, &[0], 0), 1),
        (quot(3, 1, &[0], 1), -1),
    ]);
    check(r3.lhs == expr(vec![(plain(3), 2)]) && r3.rhs == want3 && r3.replays(), || format!("C8 relation: {r3}"))?;

    for n in 0..=4u32 {
        for m in 1..=6u64 {
            let raw = normalize(&raw_suspension_sum("X", n, m));
            let closed = suspend_fixed_points(&K0Atom::plain("X", n).suspended(m, n)).map_err(|e| e.to_string())?;
            let oracle = K0Expression::from_terms(
                cell_oracle(n, m).into_iter().map(|(k, c)| (K0Atom::plain("X", k), BigInt::from(c))),
            );
            check(raw == normalize(&closed) && raw == oracle, || format!("suspension sum n={n} m={m}: {raw}"))?;
        }
    }

    let drop = derive_height_drop_for(3, 1).map_err(|e| e.to_string())?;
    for (k, r) in (1u32..).zip(&drop.composed) {
        check(
            r.mod_torsion && r.lhs == expr(vec![(plain(k), 1 << k)]) && r.rhs == expr(vec![(plain(0), 1)]) && r.replays(),
            || format!("height drop k={k}: {r}"),
        )?;
    }
    Ok("C4 verbatim, C8 nine terms up to conjugation, 30 suspension sums, 2^k[M^C_2^k] ≡ [M^e] for k ≤ 3".into())
}

fn moore_checks() -> Outcome {
    let gate = |v: &[u64]| moore_gate(&MooreShape::new(v.to_vec()).unwrap()).unwrap();
    check(gate(&[1, 1]).status == Status::RuledOut, || "(1,1) not ruled out".into())?;
    check(gate(&[1, 2]).status == Status::NotRuledOut, || "(1,2) ruled out".into())?;
    let ones = gate(&[1; 5]);
    check(ones.status == Status::RuledOut && ones.witness.bound == BigUint::from(8u8), || {
        format!("all-ones at h=4: {ones}")
    })?;
    for s in [&[1, 4][..], &[1, 4, 32], &[3, 8, 32]] {
        let v = gate(s);
        check(v.status == Status::NotRuledOut && v.caveat.is_some(), || format!("{s:?}: {v}"))?;
    }
    Ok("(1,1) RuledOut, (1,2) NotRuledOut, 1^5 RuledOut with bound 8, known self maps pass".into())
}

fn nilpotence_and_regularity() -> Outcome {
    let l = Limits::default();
    for m in 1..=3 {
        let file = bundled_relation_file(1, m).ok_or("missing C2 file")?;
        let ideal = file.ideal().map_err(|e| e.to_string())?;
        for i in 1..=m {
            let t = ideal.ring.var_named(&format!("t_{i}")).map_err(|e| e.to_string())?;
            check(is_nilpotent(&t, &ideal, &l).map_err(|e| e.to_string())?, || format!("t_{i} not nilpotent at m={m}"))?;
        }
    }
    let mut dims = Vec::new();
    for (n, m) in [(1, 1), (1, 2), (1, 3), (2, 1), (2, 2)] {
        let file = bundled_relation_file(n, m).ok_or("missing relation file")?;
        let report = verify_regularity(&ctx(n, m), &file, &l).map_err(|e| e.to_string())?;
        check(report.regular, || format!("({n}, {m}) not regular: {:?}", report.mismatch))?;
        dims.push(format!("({n},{m})→{:?}", report.quotient_dim.finite().unwrap_or(0)));
    }
    Ok(format!("t_i nilpotent for i ≤ m ≤ 3; regular: {}", dims.join(" ")))
}

fn groebner_properties() -> Outcome {
    let l = Limits::default();
    let mut rng = StdRng::seed_from_u64(0x5eed_0001);
    let ring = PolyRing::with_names(&["a", "b", "c"]);
    for trial in 0..100 {
        let count = rng.gen_range(1..=4);
        let gens: Vec<Polynomial> = (0..count).map(|_| random_poly(&mut rng, &ring, 3, 3)).collect();
        let a = groebner(&IdealSpec::new(ring.clone(), gens.clone()), &l).map_err(|e| e.to_string())?;
        let b = groebner(&IdealSpec::new(ring.clone(), scramble(&mut rng, &ring, &gens)), &l).map_err(|e| e.to_string())?;
        check(same_basis(&a, &b), || format!("trial {trial}: reduced bases differ"))?;
    }
    let mut max_dim = 0;
    for trial in 0..200 {
        let (ring, gens) = random_zero_dim_instance(&mut rng);
        let brute = brute_quotient_dim(&ring, &gens, 200).ok_or("brute force did not terminate")?;
        let dim = quotient_dim(&IdealSpec::new(ring, gens), &l).map_err(|e| e.to_string())?;
        check(dim == QuotientDim::Finite(brute), || format!("trial {trial}: {dim:?} vs brute {brute}"))?;
        max_dim = max_dim.max(brute);
    }
    Ok(format!("100 shuffled bases identical; 200 quotients (dim ≤ {max_dim}) match linear algebra"))
}

fn euler_consistency() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed_0009);
    let mut checked = 0;
    for n in 1..=3 {
        for m in 0..=2 {
            let c = ctx(n, m);
            let dim = dimension(&c).map_err(|e| e.to_string())?;
            for _ in 0..20 {
                let exps: Vec<u64> = (0..=c.h).map(|_| rng.gen_range(1..=96)).collect();
                let shape = MooreShape::new(exps).unwrap();
                let eo = chi_eo(&c, &shape).map_err(|e| e.to_string())?;
                let bp = chi_bp(&shape);
                check(eo == &dim * &bp, || format!("({n}, {m}) {shape}: chi_eo = {eo}"))?;
                check(nu2(&eo) == nu2(&bp), || format!("({n}, {m}) {shape}: valuations differ"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} random shapes: chi_eo = dim · chi_bp with equal ν₂"))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 9] = [
        ("dimension triple agreement", 10, dimension_triple),
        ("oddness sweep", 5, oddness_sweep),
        ("series exactness", 5, series_exactness),
        ("filtration golden tests", 1, filtration_golden),
        ("K0 golden tests", 1, k0_golden),
        ("Moore gate", 1, moore_checks),
        ("nilpotence and regularity", 30, nilpotence_and_regularity),
        ("Gröbner engine properties", 60, groebner_properties),
        ("Euler formula consistency", 5, euler_consistency),
    ];
    let mut failed = 0;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let within = elapsed <= Duration::from_secs(*budget);
        let (tag, detail) = match (&outcome, within) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("over time budget; {d}")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!(
            "[{tag}] criterion {}: {name} ({:.2}s of {budget}s): {detail}",
            i + 1,
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
