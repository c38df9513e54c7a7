use std::sync::Arc;

use proptest::prelude::*;

use famtop::bitset::BitSet;
use famtop::cli::{parse_definitions, print_space, print_topology};
use famtop::family_open::LevelChain;
use famtop::finite_space::{enumerate_continuous_maps, sierpinski, validate_topology, FiniteSpace};
use famtop::guards::Guards;
use famtop::topology_algebra::{
    generate_topology, naive_fixpoint_closure, scott_topology, Poset,
};
use famtop::tower::containment;

fn g() -> Guards {
    Guards::default()
}

/// Transitive-reflexive closure of an arbitrary relation on n points, turned
/// into the space of its up-sets.
fn space_from_relation(n: usize, bits: &[bool]) -> FiniteSpace {
    let mut le = vec![false; n * n];
    for i in 0..n {
        le[i * n + i] = true;
    }
    for i in 0..n {
        for j in 0..n {
            if bits[i * n + j] {
                le[i * n + j] = true;
            }
        }
    }
    loop {
        let mut changed = false;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if le[i * n + j] && le[j * n + k] && !le[i * n + k] {
                        le[i * n + k] = true;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
    let refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    let opens: Vec<BitSet> = (0..(1u64 << n))
        .map(|m| BitSet::from_mask(n, m))
        .filter(|s| s.iter().all(|x| (0..n).all(|y| !le[x * n + y] || s.contains(y))))
        .collect();
    validate_topology(&refs, &opens).expect("up-set families satisfy the axioms")
}

fn subbasis_strategy(universe: usize) -> impl Strategy<Value = Vec<BitSet>> {
    prop::collection::vec(0..(1u64 << universe), 0..5)
        .prop_map(move |masks| masks.into_iter().map(|m| BitSet::from_mask(universe, m)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_topology_matches_naive_closure(
        universe in 1usize..6,
        masks in prop::collection::vec(0u64..64, 0..5),
    ) {
        let sub: Vec<BitSet> = masks
            .into_iter()
            .map(|m| BitSet::from_mask(universe, m % (1 << universe)))
            .collect();
        let gen = generate_topology(universe, &sub, &g()).unwrap();
        let oracle = naive_fixpoint_closure(universe, &sub);
        prop_assert_eq!(gen.opens(), oracle.as_slice());
    }

    #[test]
    fn scott_opens_are_exactly_up_sets(bits in prop::collection::vec(any::<bool>(), 16)) {
        let n = 4;
        let space = space_from_relation(n, &bits);
        // specialization order of the space, read off the opens
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[i * n + j] = space
                    .opens()
                    .iter()
                    .all(|o| !o.contains(i) || o.contains(j));
            }
        }
        // only T0 spaces give an antisymmetric specialization order
        prop_assume!((0..n).all(|i| (0..n).all(|j| i == j || !(leq[i * n + j] && leq[j * n + i]))));
        let p = Poset::new(n, leq);
        let tau = scott_topology(&p);
        for m in 0..(1u64 << n) {
            let h = BitSet::from_mask(n, m);
            prop_assert_eq!(tau.contains(&h), p.is_up_set(&h));
        }
    }

    #[test]
    fn definitions_roundtrip(bits in prop::collection::vec(any::<bool>(), 9)) {
        let space = space_from_relation(3, &bits);
        let printed = print_space("X", &space);
        let defs = parse_definitions(&printed).unwrap();
        prop_assert_eq!(defs.space("X").unwrap().as_ref(), &space);

        let tau = generate_topology(4, &[BitSet::from_mask(4, 0b0101)], &g()).unwrap();
        let reparsed = parse_definitions(&print_topology("t", &tau)).unwrap();
        prop_assert_eq!(&reparsed.topologies["t"], &tau);
    }

    #[test]
    fn family_open_is_monotone_in_tau(
        bits in prop::collection::vec(any::<bool>(), 9),
        fam_masks in prop::collection::vec(0u64..256, 1..4),
        sub in subbasis_strategy(4),
    ) {
        let y = Arc::new(space_from_relation(3, &bits));
        let oc = y.open_count();
        let mut chain = LevelChain::new(y.clone());
        chain
            .push_level(fam_masks.iter().map(|&m| BitSet::from_mask(oc, m % (1 << oc))).collect())
            .unwrap();
        let c1 = chain.carrier_len(1).unwrap();
        let coarse = famtop::topology_algebra::SetFamilyTopology::indiscrete(c1);
        let finer = generate_topology(
            c1,
            &sub.iter().map(|s| {
                BitSet::from_indices(c1, s.iter().filter(|&i| i < c1))
            }).collect::<Vec<_>>(),
            &g(),
        )
        .unwrap();
        let z = Arc::new(sierpinski());
        let cys = enumerate_continuous_maps(&y, &z, &g()).unwrap();
        let mut a = chain.clone();
        a.set_tau(1, coarse).unwrap();
        let t_coarse = a.family_open_topology(1, &cys, &g()).unwrap();
        let mut b = chain;
        b.set_tau(1, finer).unwrap();
        let t_finer = b.family_open_topology(1, &cys, &g()).unwrap();
        prop_assert!(containment(&t_coarse, &t_finer).contained);
    }
}
