mod common;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use common::atom;
use common::systems::random_system;
use lambda_systems::lambda_core::{
    check_beautiful, derived_system, lex_compare, transform_disjoint, transform_tree, Atom, BasedFamily, Clause,
    LambdaDoc, LambdaError, Node, SystemSkeleton,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const TWO_LEVEL: &str = r#"{
  "nodes": ["", "0", "1", "0.0", "0.1", "1.0"],
  "level": {"": 2, "0": 1, "1": 1, "0.0": 0, "0.1": 0, "1.0": 0},
  "E": {"": [0, 1], "0": [0, 1], "1": [0]},
  "B": {"0": ["a", "b"], "1": ["a", "b", "c"], "0.0": ["x"], "0.1": ["x", "y"], "1.0": ["u"]},
  "phi": {"0.0": [["a"], ["x"]], "0.1": [["b"], ["y"]], "1.0": [["c"], ["u"]]}
}"#;

fn two_level() -> (SystemSkeleton, BasedFamily) {
    LambdaDoc::from_json(TWO_LEVEL).unwrap()
}

#[test]
fn validation_examples() {
    let lone =
        SystemSkeleton { nodes: BTreeSet::from([vec![]]), level: BTreeMap::from([(vec![], 1)]), ..Default::default() };
    assert!(lone.validate().has(Clause::NoFinalReachable));

    let (sys, fam) = LambdaDoc::from_json(
        r#"{"nodes": ["", "0"], "level": {"": 2, "0": 0}, "E": {"": [0]}, "B": {"0": ["a"]}, "phi": {"0": [["a"]]}}"#,
    )
    .unwrap();
    assert!(sys.validate().is_valid());
    assert!(fam.validate(&sys).is_empty());

    let mut flat = sys.clone();
    flat.level.insert(vec![0], 2);
    assert!(flat.validate().has(Clause::LevelNotDecreasing));

    let mut rooted = sys;
    rooted.carriers.insert(vec![], BTreeSet::from([atom("r")]));
    assert!(rooted.validate().has(Clause::RootCarrierNonempty));
}

#[test]
fn family_must_be_based() {
    let (sys, mut fam) = two_level();
    assert!(sys.validate().is_valid());
    assert!(fam.validate(&sys).is_empty());
    fam.phi.get_mut(&vec![0, 0]).unwrap()[1] = vec![atom("u")];
    assert!(fam.validate(&sys).iter().any(|v| v.clause == Clause::NotBased));
}

#[test]
fn lex_order_is_total_and_matches_pairwise_definition() {
    let (sys, _) = two_level();
    let nodes: Vec<Node> = sys.nodes.iter().cloned().collect();
    let by_definition = |a: &Node, b: &Node| -> Ordering {
        if a == b {
            Ordering::Equal
        } else if b.starts_with(a) {
            Ordering::Less
        } else if a.starts_with(b) {
            Ordering::Greater
        } else {
            let i = a.iter().zip(b).position(|(x, y)| x != y).unwrap();
            a[i].cmp(&b[i])
        }
    };
    for a in &nodes {
        for b in &nodes {
            assert_eq!(lex_compare(a, b), by_definition(a, b));
            assert_eq!(lex_compare(a, b), lex_compare(b, a).reverse());
            for c in &nodes {
                if lex_compare(a, b).is_le() && lex_compare(b, c).is_le() {
                    assert!(lex_compare(a, c).is_le());
                }
            }
        }
    }
    assert_eq!(lex_compare(&[1], &[1, 0]), Ordering::Less);
    assert_eq!(lex_compare(&[1, 5], &[2]), Ordering::Less);
}

#[test]
fn heights_and_restriction() {
    let (sys, _) = two_level();
    assert_eq!(sys.height(), Some(2));
    let mut mixed = sys.clone();
    mixed.nodes.insert(vec![2]);
    mixed.level.insert(vec![2], 0);
    mixed.index_sets.get_mut(&vec![]).unwrap().insert(2);
    mixed.carriers.insert(vec![2], ["a", "b", "c", "d"].into_iter().map(atom).collect());
    assert!(mixed.validate().is_valid());
    assert_eq!(mixed.height(), None);
    let one = mixed.restrict_to_height(1).unwrap();
    assert_eq!(one.finals(), vec![vec![2]]);
    assert!(one.validate().is_valid());
    let two = mixed.restrict_to_height(2).unwrap();
    assert_eq!(two.finals().len(), 3);
}

#[test]
fn restrictions_revalidate() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..200 {
        let (sys, _) = random_system(&mut rng, 2);
        assert!(sys.validate().is_valid());
        for n in 1..=2 {
            if let Some(r) = sys.restrict_to_height(n) {
                assert!(r.validate().is_valid());
                assert!(r.finals().iter().all(|z| z.len() == n));
            }
        }
        for n in sys.select_heights() {
            assert!(sys.restrict_to_height(n).is_some());
        }
    }
}

#[test]
fn derived_systems() {
    let (sys, fam) = two_level();
    let (same, same_fam) = derived_system(&sys, &fam, &[]).unwrap();
    assert_eq!((same, same_fam), (sys.clone(), fam.clone()));

    let (below, below_fam) = derived_system(&sys, &fam, &[0]).unwrap();
    assert!(below.validate().is_valid());
    assert_eq!(below.height(), Some(1));
    assert!(below.carrier(&[]).is_empty());
    assert_eq!(below_fam.slice(&[1], 1), BTreeSet::from([atom("y")]));
    assert!(matches!(derived_system(&sys, &fam, &[0, 0]), Err(LambdaError::FinalNode(_))));

    // after tagging, the derived slices avoid the carriers above η
    let t = transform_disjoint(&sys, &fam);
    for eta in [vec![0u32], vec![1]] {
        let (_, slices) = derived_system(&t.skeleton, &t.family, &eta).unwrap();
        for z in slices.phi.keys() {
            let s = slices.set(z);
            for m in 1..=eta.len() {
                assert!(s.is_disjoint(t.skeleton.carrier(&eta[..m])));
            }
        }
    }
}

#[test]
fn beautiful_examples() {
    let (sys, fam) = two_level();
    let report = check_beautiful(&sys, &fam);
    // overlaps in the example are all between siblings
    assert!(report.property_i.holds && report.property_ii.holds);
    let mut cousins = sys.clone();
    cousins.carriers.get_mut(&vec![1, 0]).unwrap().insert(atom("x"));
    let report = check_beautiful(&cousins, &fam);
    assert!(report.property_i.witnesses.iter().any(|w| w.first == vec![0, 0] && w.second == vec![1, 0]));

    // "a" at level 1 for one final and level 2 for another
    let mut clash = fam.clone();
    clash.phi.get_mut(&vec![1, 0]).unwrap()[1] = vec![atom("a")];
    let report = check_beautiful(&sys, &clash);
    assert!(report.property_ii.witnesses.iter().any(|w| w.atom == atom("a") && w.k != w.i));

    // ⟨a, b⟩ enumerates ζ while ν's slice holds only b
    let (flat, mut flat_fam) = common::flat_system(&[vec!["a", "b"], vec!["b", "c"]]);
    flat_fam.truncation = 2;
    let report = check_beautiful(&flat, &flat_fam);
    let broken = &report.property_iii.witnesses;
    assert!(broken.iter().any(|w| w.present == atom("b") && w.missing == atom("a")));
}

#[test]
fn transforms_establish_their_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let (sys, fam) = random_system(&mut rng, 2);
        let d = transform_disjoint(&sys, &fam);
        let report = check_beautiful(&d.skeleton, &d.family);
        assert!(report.property_i.holds);
        assert!(d.skeleton.validate().is_valid());
        assert!(d.family.validate(&d.skeleton).is_empty());
        for z in d.family.finals() {
            let slices: Vec<BTreeSet<Atom>> = (1..=z.len()).map(|k| d.family.slice(&z, k)).collect();
            for i in 0..slices.len() {
                for k in i + 1..slices.len() {
                    assert!(slices[i].is_disjoint(&slices[k]));
                }
            }
        }
        // a second pass is a relabeling of the first
        let again = transform_disjoint(&d.skeleton, &d.family);
        assert!(again.is_injective_on_family());
        assert_eq!(again.family.union().len(), d.family.union().len());

        let t = transform_tree(&sys, &fam);
        assert!(check_beautiful(&t.skeleton, &t.family).property_iii.holds);
        assert!(t.skeleton.validate().is_valid());
        for (new, old) in &t.renaming {
            assert!(matches!(new, Atom::Seq(items) if items.last() == Some(old)));
        }
    }
}

#[test]
fn documents_round_trip() {
    let (sys, fam) = two_level();
    let doc = LambdaDoc::from_parts(&sys, &fam);
    let json = serde_json::to_string(&doc).unwrap();
    assert_eq!(LambdaDoc::from_json(&json).unwrap(), (sys, fam));
    assert!(LambdaDoc::from_json(r#"{"nodes": [""], "level": {"": 0}, "bogus": 1}"#).is_err());
    assert!(LambdaDoc::from_json(r#"{"nodes": ["x"], "level": {}}"#).is_err());
}
