mod common;

use std::collections::BTreeSet;

use common::ladders::{fresh_distinct, fresh_fixed, random_distinct, random_fixed};
use lambda_systems::int::{modulo, pow, Int};
use lambda_systems::uniformization::{
    build_chain, lemma2_table, lemma3_table, lemma4_table, lemma_sub2_table, recode, shift_disjoint, simulate,
    t_sequence, BlockTable, LadderInstance, ResidueTable, UnifError,
};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

#[test]
fn random_shifts_are_disjoint() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let modulus = big(101);
    let all: BTreeSet<BigInt> = (0..101).map(big).collect();
    for _ in 0..200 {
        let size = rng.gen_range(1..=10);
        let y: BTreeSet<BigInt> = (0..size).map(|_| big(rng.gen_range(0..101))).collect();
        let s = shift_disjoint(&y, &all, &modulus).unwrap();
        assert!(s.hypothesis_holds);
        for v in &y {
            assert!(!y.contains(&modulo(&(v + &s.b), &modulus)));
        }
    }
}

#[test]
fn lemma2_brute_force_small_primes() {
    for p in [2u64, 3, 5, 7, 11, 13, 97] {
        let t = lemma2_table(p).unwrap();
        // smallest shift clearing every difference, by brute force
        let y: Vec<i64> = (-(p as i64)..=p as i64).filter(|m| (2 * m.abs() + 1).pow(2) < p as i64).collect();
        let b =
            (0..p as i64).find(|b| y.iter().all(|u| y.iter().all(|v| (u - v - b).rem_euclid(p as i64) != 0))).unwrap();
        assert_eq!(t.a[1], big(b), "p = {p}");
        let ones = (0..p as i64).filter(|&x| t.f.eval(&big(x)) == 1).count();
        assert_eq!(ones, y.len(), "p = {p}");
    }
}

#[test]
fn t_sequence_by_direct_inequality() {
    let holds = |prev: u32, d: u32| (2u128 * 2u128.pow(prev) + 1).pow(2) * 2u128.pow(prev).pow(2) < 2u128.pow(d);
    let d1 = (1..).find(|&d| holds(0, d)).unwrap();
    let d2 = (1..).find(|&d| holds(d1, d)).unwrap();
    assert_eq!(t_sequence(2, 0, 2).unwrap(), vec![0, d1 as usize, (d1 + d2) as usize]);
    // 9 < 3^2 fails, so d_1 = 3
    assert_eq!(t_sequence(3, 0, 1).unwrap()[1], 3);
}

fn sub2_equation_holds(table: &BlockTable, t: &[usize]) -> bool {
    let big_p = pow(table.p, t[table.i - 1]).to_i64().unwrap();
    (0..2).all(|l| {
        let block = table.block_value(l);
        (-big_p..=big_p).all(|m0| (0..big_p).all(|low| table.f.eval(&(big(m0 + low) + &block)) as usize == l))
    })
}

#[test]
fn sub2_exhaustive_for_small_primes() {
    for p in [2, 3] {
        let t = t_sequence(p, 0, 2).unwrap();
        for i in 1..=2 {
            let table = lemma_sub2_table(p, i, &t).unwrap();
            assert!(sub2_equation_holds(&table, &t), "p = {p}, i = {i}");
            assert_eq!(table.digits[0], vec![0; t[i] - t[i - 1]]);
        }
    }
}

#[test]
fn lemma3_depends_only_on_the_restriction() {
    let t = t_sequence(2, 1, 1).unwrap();
    let mu: Vec<BigInt> = (0..t[1] as i64).map(|n| big(n % 3 - 1)).collect();
    let mut longer = mu.clone();
    longer.extend([big(5), big(-7)]);
    let a = lemma3_table(2, 1, &[mu], 1, &t).unwrap();
    let b = lemma3_table(2, 1, &[longer], 1, &t).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn lemma4_with_one_coefficient() {
    let table = lemma4_table(101, 1, &[big(1)]).unwrap();
    assert_eq!(table.t_p, 1);
    for m0 in -1..=1 {
        for m1 in -1..=1 {
            for l in 0..2 {
                assert_eq!(table.f.eval(&(big(m0 + m1) + &table.a[l])) as usize, l);
            }
        }
    }
}

#[test]
fn tables_round_trip_through_json() {
    let t = t_sequence(2, 0, 2).unwrap();
    let table = lemma_sub2_table(2, 2, &t).unwrap();
    let json = serde_json::to_string(&table).unwrap();
    assert!(json.contains("\"modulus\":\"8388608\""));
    let back: BlockTable = serde_json::from_str(&json).unwrap();
    assert_eq!(back, table);
    let f: ResidueTable = serde_json::from_str(r#"{"modulus":"5","ones":[["1","1"]]}"#).unwrap();
    assert_eq!(f.eval(&big(6)), 1);
}

/// `ψ(g) - ρ(g)` recomputed from the report's `ρ` and the instance's own `g`,
/// then pushed through a freshly built table.
fn independent_h(inst: &LadderInstance, report: &lambda_systems::uniformization::SimulationReport) -> Vec<Vec<u8>> {
    let k = |name: &str| report.rho.get(name).map_or(BigInt::zero(), |v| v.0.clone());
    inst.levels
        .iter()
        .map(|level| {
            level
                .primes
                .iter()
                .zip(&level.g)
                .map(|(&p, g)| {
                    let residue: BigInt = -g.iter().map(|(x, c)| &c.0 * k(x)).sum::<BigInt>();
                    lemma2_table(p).unwrap().f.eval(&residue)
                })
                .collect()
        })
        .collect()
}

#[test]
fn distinct_primes_example_recovers_the_coloring() {
    let c = [1, 0, 1, 1, 0, 1];
    let inst = fresh_distinct(&[11, 13, 17, 19, 23, 29], &c);
    let report = simulate(&inst).unwrap();
    assert!(report.recovered && report.kernel_is_ze && report.splitting_holds && report.section_holds);
    let level = &report.levels[0];
    assert_eq!(level.n0, 0);
    assert_eq!(level.h, c);
    assert!(level.mismatches_before_n0.is_empty() && level.derivation_identity);
    assert_eq!(independent_h(&inst, &report), vec![c.to_vec()]);
}

#[test]
fn zero_coloring_gives_zero_everywhere() {
    let inst = fresh_distinct(&[31, 37, 41, 43], &[0; 4]);
    let report = simulate(&inst).unwrap();
    assert!(report.recovered);
    assert!(report.rho.is_empty());
    assert!(report.h.iter().all(|e| e.value == 0 && e.residue.is_zero()));
    assert_eq!(report.levels[0].n0, 0);
}

#[test]
fn fixed_prime_two_recovers_both_blocks() {
    for c in [[0u8, 0], [1, 0], [0, 1], [1, 1]] {
        let inst = fresh_fixed(2, 0, &[], &c);
        let report = simulate(&inst).unwrap();
        assert_eq!(report.t, vec![0, 4, 23]);
        assert_eq!(report.relations, 23);
        assert!(report.recovered, "c = {c:?}");
        assert_eq!(report.levels[0].h, c);
        // the residues recomputed from ρ land in the forced classes
        let t = &report.t;
        for (i, entry) in report.h.iter().enumerate() {
            let table = lemma_sub2_table(2, i + 1, t).unwrap();
            assert_eq!(entry.modulus, table.modulus());
            assert_eq!(table.f.eval(&entry.residue), entry.value);
        }
    }
}

#[test]
fn fixed_prime_with_a_coefficient_sequence() {
    let inst = fresh_fixed(2, 1, &[vec![1, -1, 2]], &[1]);
    let report = simulate(&inst).unwrap();
    assert_eq!(report.t, vec![0, 7]);
    assert!(report.recovered);
    assert_eq!(report.levels[0].h, vec![1]);
}

#[test]
fn chain_invariants_on_random_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..30 {
        let inst = random_distinct(&mut rng, case % 2);
        let (chain, originals) = build_chain(&inst).unwrap();
        assert!(chain.kernel_is_ze(), "case {case}");
        assert!(chain.splitting_holds(), "case {case}");
        assert!(chain.section_holds(&originals), "case {case}");
        // π∘ρ = id: ρ(x) differs from x' only in e
        assert_eq!(chain.rho.len(), chain.width());
    }
}

#[test]
fn shared_values_push_n0_up_without_late_mismatches() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut nontrivial, mut early) = (0, 0);
    for _ in 0..60 {
        let inst = random_distinct(&mut rng, 0);
        let report = simulate(&inst).unwrap();
        assert!(report.recovered);
        for level in &report.levels {
            assert!(level.mismatches_after_n0.is_empty());
            if level.n0 > 0 {
                nontrivial += 1;
            }
            early += level.mismatches_before_n0.len();
        }
    }
    eprintln!("levels with n0 > 0: {nontrivial}, mismatches before n0: {early}");
    assert!(nontrivial > 0, "no instance exercised a positive n0");
}

#[test]
fn random_fixed_prime_instances_recover() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..5 {
        let inst = random_fixed(&mut rng);
        let report = simulate(&inst).unwrap();
        assert!(report.recovered);
    }
}

#[test]
fn recoding_is_injective_and_keeps_h() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let inst = random_distinct(&mut rng, 1);
    let report = simulate(&inst).unwrap();
    let recoded = recode(&inst, &report);
    for (level, lr) in recoded.iter().zip(&report.levels) {
        assert!(level.is_ladder());
        assert_eq!(level.h, lr.h);
    }
}

#[test]
fn malformed_instances_are_rejected() {
    let mut inst = fresh_distinct(&[11, 13], &[1, 0]);
    inst.levels[0].primes = vec![11, 11];
    assert!(matches!(simulate(&inst), Err(UnifError::Instance(_))));
    let mut inst = fresh_distinct(&[11, 13], &[1, 0]);
    inst.levels[0].ladder = vec![5, 5];
    assert!(matches!(simulate(&inst), Err(UnifError::Instance(_))));
    let mut inst = fresh_distinct(&[11, 13], &[1, 0]);
    inst.levels[0].g[0].insert("y[100,0]".into(), Int::from(1));
    assert!(matches!(simulate(&inst), Err(UnifError::Instance(_))));
    let json = r#"{"subcase":"distinct-primes","levels":[],"extra":1}"#;
    assert!(LadderInstance::from_json(json).is_err());
}
