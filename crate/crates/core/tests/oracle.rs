use distrealize::instance::{random_instance, InstanceSpec};
use distrealize::oracle::brute_force_tree_decide;
use distrealize::tree::{decide_star, decide_tree, TreeDecision};
use distrealize::verify::verify_tree;
use distrealize::{Strategy, Variant};

fn agree(variant: Variant, n: usize, seeds: std::ops::Range<u64>) {
    for seed in seeds {
        let (f, _) = random_instance(&InstanceSpec::mixed(n, variant, seed)).unwrap();
        let d =
            if variant == Variant::StarOpen { decide_star(&f) } else { decide_tree(&f, Strategy::Topology) }.unwrap();
        let o = brute_force_tree_decide(&f).unwrap();
        assert_eq!(d.is_feasible(), o.is_feasible(), "{} n={n} seed {seed}", variant.name());
        match &d {
            TreeDecision::Feasible { witness, .. } => assert!(verify_tree(witness, &f).unwrap().passed()),
            TreeDecision::Infeasible { certificates } => {
                assert!(certificates.iter().all(|c| c.validate(&f).is_ok()))
            }
        }
    }
}

#[test]
fn star_agrees_with_brute_force() {
    for n in 3..=6 {
        agree(Variant::StarOpen, n, 0..40);
    }
}

#[test]
fn six_leaves_agree_with_brute_force() {
    for variant in [Variant::TreeGeneralOpen, Variant::TreeGeneralClosed, Variant::TreePositiveOpen] {
        agree(variant, 6, 0..8);
    }
}

#[test]
fn small_trees_agree_with_brute_force() {
    for variant in [Variant::TreeGeneralOpen, Variant::TreeGeneralClosed, Variant::TreePositiveOpen] {
        agree(variant, 3, 0..40);
    }
}
