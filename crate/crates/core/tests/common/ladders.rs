use std::collections::BTreeMap;

use lambda_systems::int::{primes_above, Int};
use lambda_systems::uniformization::{t_sequence, y_name, z_name, LadderInstance, Level, Subcase};
use rand::seq::SliceRandom;
use rand::Rng;

fn gen(name: String, coeff: i64) -> BTreeMap<String, Int> {
    BTreeMap::from([(name, Int::from(coeff))])
}

/// One level with `g_n = b_n` for its own base generators `b_n`.
pub fn fresh_distinct(primes: &[u64], c: &[u8]) -> LadderInstance {
    let m = c.len();
    LadderInstance {
        schema: None,
        subcase: Subcase::DistinctPrimes,
        r: 0,
        p: None,
        base: (0..m).map(|n| format!("b{n}")).collect(),
        levels: vec![Level {
            alpha: 100,
            ladder: (0..m as u64).map(|n| 10 * n).collect(),
            c: c.to_vec(),
            primes: primes.to_vec(),
            mu: Vec::new(),
            g: (0..m).map(|n| gen(format!("b{n}"), 1)).collect(),
        }],
    }
}

pub fn fresh_fixed(p: u64, r: usize, mu: &[Vec<i64>], c: &[u8]) -> LadderInstance {
    let t = t_sequence(p, r, c.len()).unwrap();
    let count = t[c.len()];
    LadderInstance {
        schema: None,
        subcase: Subcase::FixedPrime,
        r,
        p: Some(p),
        base: (0..count).map(|n| format!("b{n}")).collect(),
        levels: vec![Level {
            alpha: 1000,
            ladder: (0..c.len() as u64).collect(),
            c: c.to_vec(),
            primes: Vec::new(),
            mu: mu.iter().map(|row| (0..count).map(|n| Int::from(row[n % row.len()])).collect()).collect(),
            g: (0..count).map(|n| gen(format!("b{n}"), 1)).collect(),
        }],
    }
}

fn ladder(rng: &mut impl Rng, len: usize, alpha: u64) -> Vec<u64> {
    let mut rungs: Vec<u64> =
        rand::seq::index::sample(rng, alpha as usize, len).into_iter().map(|v| v as u64).collect();
    rungs.sort_unstable();
    rungs
}

fn combination(rng: &mut impl Rng, names: &[String]) -> BTreeMap<String, Int> {
    let mut g = BTreeMap::new();
    for _ in 0..rng.gen_range(1..=2) {
        let x = names.choose(rng).unwrap().clone();
        let v = g.entry(x).or_insert(Int::from(0));
        *v = Int(&v.0 + rng.gen_range(-2i64..=2));
    }
    g.retain(|_, v| v.0 != 0.into());
    g
}

/// 1-3 levels with distinct primes from a shared pool; levels reuse shared
/// base generators and coefficients often enough that some `w` repeat across
/// levels, and otherwise draw `g` from the base and earlier levels.
pub fn random_distinct(rng: &mut impl Rng, r: usize) -> LadderInstance {
    let pool = primes_above(30, 10);
    let shared_mu: Vec<Vec<i64>> = (0..r).map(|_| (0..8).map(|_| rng.gen_range(-2..=2)).collect()).collect();
    let base: Vec<String> = (0..8).map(|n| format!("s{n}")).chain((0..4).map(|n| format!("b{n}"))).collect();
    let mut names = base.clone();
    let mut levels = Vec::new();
    for l in 0..rng.gen_range(1..=3usize) {
        let alpha = 100 * (l as u64 + 1);
        let m = rng.gen_range(1..=8usize);
        let mut primes: Vec<u64> = if rng.gen_bool(0.5) {
            pool[..m].to_vec()
        } else {
            rand::seq::index::sample(rng, pool.len(), m).into_iter().map(|i| pool[i]).collect()
        };
        primes.sort_unstable();
        let shared = rng.gen_bool(0.6);
        let mu = (0..r)
            .map(|k| (0..m).map(|n| Int::from(if shared { shared_mu[k][n] } else { rng.gen_range(-2..=2) })).collect())
            .collect();
        let g = (0..m)
            .map(|n| match rng.gen_range(0..3) {
                0 if shared => gen(format!("s{n}"), 1),
                0 | 1 => combination(rng, &base),
                _ => combination(rng, &names),
            })
            .collect();
        let c = (0..m).map(|_| rng.gen_range(0..=1)).collect();
        levels.push(Level { alpha, ladder: ladder(rng, m, alpha), c, primes, mu, g });
        names.extend((0..=m).map(|n| y_name(alpha, n)));
        names.extend((1..=r).map(|k| z_name(alpha, k)));
    }
    levels.shuffle(rng);
    LadderInstance { schema: None, subcase: Subcase::DistinctPrimes, r, p: None, base, levels }
}

/// 1-2 levels over `p = 2`, `r = 0`, colorings of length 1 or 2.
pub fn random_fixed(rng: &mut impl Rng) -> LadderInstance {
    let t = t_sequence(2, 0, 2).unwrap();
    let base: Vec<String> = (0..t[2]).map(|n| format!("b{n}")).collect();
    let mut names = base.clone();
    let mut levels = Vec::new();
    for l in 0..rng.gen_range(1..=2usize) {
        let alpha = 100 * (l as u64 + 1);
        let len = rng.gen_range(1..=2usize);
        let count = t[len];
        let g = (0..count)
            .map(|n| match rng.gen_range(0..4) {
                0 | 1 => gen(format!("b{n}"), 1),
                2 => combination(rng, &base),
                _ => combination(rng, &names),
            })
            .collect();
        let c = (0..len).map(|_| rng.gen_range(0..=1)).collect();
        levels.push(Level { alpha, ladder: ladder(rng, len, alpha), c, primes: Vec::new(), mu: Vec::new(), g });
        names.extend((0..=count).map(|n| y_name(alpha, n)));
    }
    LadderInstance { schema: None, subcase: Subcase::FixedPrime, r: 0, p: Some(2), base, levels }
}
