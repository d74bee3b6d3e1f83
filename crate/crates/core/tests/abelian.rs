mod common;

use common::ints;
use common::oracles::{box_solution, cofactor_det, random_matrix, smith_holds};
use lambda_systems::abelian::{
    build_h, divisibility_evidence, hnf, in_subgroup_mod_relations, snf, solve_z, IntMatrix, NonfreeSpec, Presentation,
    PresentationDoc, Solution,
};
use lambda_systems::int::Int;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn spec(r: usize, q: &[u64], d: &[&[i64]], j: usize) -> NonfreeSpec {
    NonfreeSpec { r, q: q.to_vec(), d: d.iter().map(|row| row.iter().map(|&v| Int::from(v)).collect()).collect(), j }
}

fn pres(gens: usize, rels: &[&[i64]]) -> Presentation {
    let m = if rels.is_empty() { IntMatrix::zeros(0, gens) } else { IntMatrix::from_i64(rels) };
    Presentation::new((0..gens).map(|i| format!("z{i}")).collect(), m).unwrap()
}

#[test]
fn smith_examples() {
    let id = IntMatrix::identity(3);
    let s = snf(&id);
    assert_eq!((s.d.clone(), s.u.clone(), s.v.clone()), (id.clone(), id.clone(), id.clone()));
    assert_eq!(snf(&IntMatrix::from_i64(&[&[2, 0], &[0, 3]])).diagonal(), ints(&[1, 6]));
    assert_eq!(snf(&IntMatrix::from_i64(&[&[2, 4], &[6, 8]])).diagonal(), ints(&[2, 4]));
}

#[test]
fn random_smith_and_hermite_forms_recompose() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..300 {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let a = random_matrix(&mut rng, r, c, 20);
        let s = snf(&a);
        assert!(smith_holds(&a, &s), "{a:?}");
        s.verify(&a).unwrap();

        let h = hnf(&a);
        assert_eq!(h.u.mul(&a).unwrap(), h.h);
        assert_eq!(cofactor_det(&h.u.to_rows()).abs(), BigInt::one());
        // pivots strictly move right and are positive; entries above a pivot are reduced
        assert!(h.pivots.windows(2).all(|w| w[0] < w[1]));
        for (i, &p) in h.pivots.iter().enumerate() {
            assert!(h.h[(i, p)].is_positive());
            assert!((0..p).all(|j| h.h[(i, j)].is_zero()));
            for k in 0..i {
                assert!(!h.h[(k, p)].is_negative() && h.h[(k, p)] < h.h[(i, p)]);
            }
        }
        assert!((h.rank()..r).all(|i| h.h.row(i).iter().all(Zero::is_zero)));
        assert_eq!(h.rank(), s.rank());
    }
}

#[test]
fn solve_examples() {
    let a = IntMatrix::from_i64(&[&[2]]);
    assert_eq!(solve_z(&a, &ints(&[4])).unwrap(), Solution::Integral(ints(&[2])));
    let Solution::Infeasible(cert) = solve_z(&a, &ints(&[3])).unwrap() else { panic!() };
    assert!(cert.verify(&a, &ints(&[3])));
    assert_eq!(lambda_systems::int::rational_to_string(&cert.y[0]), "1/2");
}

#[test]
fn planted_solutions_are_found() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..200 {
        let a = random_matrix(&mut rng, 4, 6, 9);
        let x: Vec<BigInt> = (0..6).map(|_| BigInt::from(rng.gen_range(-9..=9))).collect();
        let b = a.mul_vec(&x).unwrap();
        let sol = solve_z(&a, &b).unwrap();
        assert!(sol.is_feasible() && sol.verify(&a, &b));

        // perturbing b may break feasibility; whichever branch comes back must check out
        let mut b2 = b.clone();
        b2[rng.gen_range(0..4)] += rng.gen_range(1..=3);
        assert!(solve_z(&a, &b2).unwrap().verify(&a, &b2));
    }
}

#[test]
fn feasibility_agrees_with_a_search_box() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let mut checked = 0;
    while checked < 100 {
        let rows = rng.gen_range(1..=3);
        let a = random_matrix(&mut rng, rows, 3, 4);
        let b: Vec<BigInt> = (0..rows).map(|_| BigInt::from(rng.gen_range(-6..=6))).collect();
        let sol = solve_z(&a, &b).unwrap();
        assert!(sol.verify(&a, &b));
        let boxed = box_solution(&a, &b, 6);
        if boxed.is_some() {
            assert!(sol.is_feasible());
        }
        // with a square invertible system the solution is unique, so the box decides
        if rows == 3 && !a.determinant().unwrap().is_zero() {
            let inside = sol.integral().is_some_and(|x| x.iter().all(|v| v.abs() <= BigInt::from(6)));
            assert_eq!(boxed.is_some(), inside);
        }
        checked += 1;
    }
}

#[test]
fn group_invariants() {
    let z = pres(1, &[]);
    assert!(z.is_free() && z.rank() == 1);
    let z2 = pres(1, &[&[2]]);
    assert!(!z2.is_free() && z2.torsion() == ints(&[2]));
    let doc = z2.to_doc();
    let json = serde_json::to_string(&doc).unwrap();
    assert_eq!(json, r#"{"gens":["z0"],"rels":[[2]]}"#);
    let back = Presentation::from_doc(serde_json::from_str::<PresentationDoc>(&json).unwrap()).unwrap();
    assert_eq!(back, z2);
    assert!(serde_json::from_str::<PresentationDoc>(r#"{"gens":[],"rels":[],"x":0}"#).is_err());
}

#[test]
fn halving_chain_truncation() {
    let s = spec(0, &[2, 2, 2, 2], &[], 5);
    let h = build_h(&s).unwrap();
    assert_eq!(
        h.relations().to_rows(),
        IntMatrix::from_i64(&[&[-1, 2, 0, 0, 0], &[0, -1, 2, 0, 0], &[0, 0, -1, 2, 0], &[0, 0, 0, -1, 2],]).to_rows()
    );
    assert!(h.is_free() && h.rank() == 1);
    let ev = divisibility_evidence(&s, 3).unwrap();
    assert!(ev.verify(&s));
    assert_eq!(ev.steps[3].product, Int::from(16));
    assert!(ev.target_nonzero);
}

#[test]
fn rank_two_truncation() {
    let s = spec(1, &[2, 3, 5], &[&[1], &[1], &[1]], 5);
    let h = build_h(&s).unwrap();
    assert!(h.is_free());
    assert_eq!(h.rank(), 2);
    let ev = divisibility_evidence(&s, 2).unwrap();
    assert!(ev.verify(&s));
    let products: Vec<Int> = ev.steps.iter().map(|st| st.product.clone()).collect();
    assert_eq!(products, vec![Int::from(2), Int::from(6), Int::from(30)]);
    assert!(build_h(&spec(1, &[2, 3, 5], &[&[1], &[1], &[1]], 6)).is_err());
    assert!(build_h(&spec(1, &[2], &[&[1]], 2)).is_err());
}

#[test]
fn tampered_evidence_is_rejected() {
    let s = spec(1, &[2, 3, 5], &[&[1], &[2], &[-1]], 5);
    let mut ev = divisibility_evidence(&s, 2).unwrap();
    assert!(ev.verify(&s));
    ev.steps[1].l_coefficients[0] = Int(&ev.steps[1].l_coefficients[0].0 + 1);
    assert!(!ev.verify(&s));
}

#[test]
fn l_is_pure_in_a_search_box() {
    // kx ∈ L + relations forces x ∈ L + relations, for small x and k
    let s = spec(1, &[2, 3, 5], &[&[1], &[1], &[1]], 5);
    let h = build_h(&s).unwrap();
    let l = [0usize];
    let bound = 2i64;
    let side = (2 * bound + 1) as usize;
    for code in 0..side.pow(5) {
        let mut c = code;
        let x: Vec<BigInt> = (0..5)
            .map(|_| {
                let v = (c % side) as i64 - bound;
                c /= side;
                BigInt::from(v)
            })
            .collect();
        let inside = in_subgroup_mod_relations(&h, &x, &l);
        for k in 2..=3 {
            let kx: Vec<BigInt> = x.iter().map(|v| v * k).collect();
            if in_subgroup_mod_relations(&h, &kx, &l) {
                assert!(inside, "x = {x:?}, k = {k}");
            }
        }
    }
}
