//! Towers of induced topologies: the level-(n+1) topology determined by a
//! level-n topology, containment of the resulting function-space topologies,
//! and an exploratory stabilization search.

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::family_open::LevelChain;
use crate::finite_space::PointMap;
use crate::guards::Guards;
use crate::topology_algebra::{inclusion_poset, scott_topology, SetFamilyTopology};

/// How the membership comprehension behind the induced topology is indexed.
/// `ByOpen` follows the set-builder over all opens U of Y; `ByCarrier` ranges
/// over carrier elements with an arbitrary witnessing open. The level-(n+1)
/// value of U factors through the level-n value, so the two always agree;
/// both are kept for comparison experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComprehensionIndex {
    ByOpen,
    ByCarrier,
}

/// tau_{n+1}: a subset H of carrier_{n+1} is open iff the set of level-n
/// values of the opens U with O^(n+1)(U) in H belongs to tau_n. The result is
/// asserted to satisfy the topology axioms.
pub fn induced_next_topology(
    chain: &LevelChain,
    n: usize,
    indexing: ComprehensionIndex,
    guards: &Guards,
) -> Result<SetFamilyTopology> {
    let tau_n = chain.tau(n)?;
    let c_next = chain.carrier_len(n + 1)?;
    let c_prev = chain.carrier_len(n)?;
    guards.check_family(1usize.checked_shl(c_next as u32).unwrap_or(usize::MAX))?;
    let open_count = chain.base().open_count();
    let mut opens = Vec::new();
    for mask in 0u64..1 << c_next {
        let h = BitSet::from_mask(c_next, mask);
        let h_prime = match indexing {
            ComprehensionIndex::ByOpen => BitSet::from_indices(
                c_prev,
                (0..open_count)
                    .filter(|&u| h.contains(chain.o_index(n + 1, u).unwrap()))
                    .map(|u| chain.o_index(n, u).unwrap()),
            ),
            ComprehensionIndex::ByCarrier => {
                // one witnessing open per level-n carrier element
                let mut witness = vec![usize::MAX; c_prev];
                for u in 0..open_count {
                    witness[chain.o_index(n, u)?] = u;
                }
                BitSet::from_indices(
                    c_prev,
                    (0..c_prev)
                        .filter(|&e| h.contains(chain.o_index(n + 1, witness[e]).unwrap())),
                )
            }
        };
        if tau_n.contains(&h_prime) {
            opens.push(h);
        }
    }
    SetFamilyTopology::new(c_next, opens).map_err(|e| Error::InternalAxiomFailure(Box::new(e)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContainmentReport {
    pub contained: bool,
    /// First open of the finer family missing from the coarser one.
    pub witness: Option<BitSet>,
}

/// Is every open of `sub` an open of `sup`?
pub fn containment(sub: &SetFamilyTopology, sup: &SetFamilyTopology) -> ContainmentReport {
    for w in sub.opens() {
        if !sup.contains(w) {
            return ContainmentReport {
                contained: false,
                witness: Some(w.clone()),
            };
        }
    }
    ContainmentReport {
        contained: true,
        witness: None,
    }
}

/// Rule extending the family at the next level from the level-n data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyRule {
    /// F_{n+1} = P(carrier_n)
    PowerSet,
    /// F_{n+1} = Scott opens of (carrier_n, inclusion)
    ScottOpens,
    /// F_{n+1} = tau_n
    TauItself,
}

impl FamilyRule {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "power-set" => Some(FamilyRule::PowerSet),
            "scott-opens" => Some(FamilyRule::ScottOpens),
            "tau-itself" => Some(FamilyRule::TauItself),
            _ => None,
        }
    }

    fn next_family(
        &self,
        chain: &LevelChain,
        n: usize,
        guards: &Guards,
    ) -> Result<Vec<BitSet>> {
        let c = chain.carrier_len(n)?;
        match self {
            FamilyRule::PowerSet => {
                guards.check_family(1usize.checked_shl(c as u32).unwrap_or(usize::MAX))?;
                Ok((0u64..1 << c).map(|m| BitSet::from_mask(c, m)).collect())
            }
            FamilyRule::ScottOpens => {
                let (p, _) = inclusion_poset(chain.carrier(n)?);
                Ok(scott_topology(&p).opens().to_vec())
            }
            FamilyRule::TauItself => Ok(chain.tau(n)?.opens().to_vec()),
        }
    }
}

/// Search for the smallest level n <= max_depth at which the function-space
/// topology stops changing, confirmed over two consecutive steps. The chain
/// must come with level 1 and tau_1 built; deeper levels are generated by the
/// rule with tau given by the induced construction. Exploratory data only.
pub fn stabilization_search(
    chain: &mut LevelChain,
    cyz: &[PointMap],
    rule: FamilyRule,
    max_depth: usize,
    guards: &Guards,
) -> Result<Option<usize>> {
    if max_depth == 0 {
        return Ok(None);
    }
    let mut stages = vec![chain.family_open_topology(1, cyz, guards)?];
    // stages[k] holds t at level k+1; need levels through n+2 for depth n
    for level in 1..=max_depth + 1 {
        if chain.depth() < level + 1 {
            let fam = rule.next_family(chain, level, guards)?;
            chain.push_level(fam)?;
            let tau = induced_next_topology(chain, level, ComprehensionIndex::ByOpen, guards)?;
            chain.set_tau(level + 1, tau)?;
        }
        stages.push(chain.family_open_topology(level + 1, cyz, guards)?);
    }
    for n in 1..=max_depth {
        if stages[n - 1] == stages[n] && stages[n] == stages[n + 1] {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_space::{enumerate_continuous_maps, sierpinski, FiniteSpace};
    use crate::fixtures;
    use std::sync::Arc;

    fn f1p_chain_with_tau() -> (Arc<FiniteSpace>, LevelChain) {
        let y = Arc::new(fixtures::example_a_y());
        let mut c = LevelChain::new(y.clone());
        c.push_level(vec![
            BitSet::from_indices(5, [1, 3]),
            BitSet::from_indices(5, [2, 3]),
        ])
        .unwrap();
        let tau1 = SetFamilyTopology::new(
            4,
            vec![
                BitSet::empty(4),
                BitSet::from_indices(4, [1, 3]),
                BitSet::full(4),
            ],
        )
        .unwrap();
        c.set_tau(1, tau1).unwrap();
        (y, c)
    }

    #[test]
    fn induced_tau2_from_f1_prime() {
        let g = Guards::default();
        let (y, mut c) = f1p_chain_with_tau();
        // F_2 = {{F'_1}}: one member containing the carrier element F'_1
        // (carrier index 3)
        c.push_level(vec![BitSet::singleton(4, 3)]).unwrap();
        let tau2 = induced_next_topology(&c, 1, ComprehensionIndex::ByOpen, &g).unwrap();
        // carrier_2 = {∅, {m}}; only ∅ and the full carrier survive
        assert_eq!(tau2.opens().len(), 2);
        c.set_tau(2, tau2).unwrap();
        let s = Arc::new(sierpinski());
        let cys = enumerate_continuous_maps(&y, &s, &g).unwrap();
        let t1 = c.family_open_topology(1, &cys, &g).unwrap();
        let t2 = c.family_open_topology(2, &cys, &g).unwrap();
        let rep = containment(&t2, &t1);
        assert!(rep.contained);
    }

    #[test]
    fn both_indexings_agree() {
        let g = Guards::default();
        let (_, mut c) = f1p_chain_with_tau();
        c.push_level(vec![BitSet::singleton(4, 3), BitSet::from_indices(4, [1, 3])])
            .unwrap();
        let a = induced_next_topology(&c, 1, ComprehensionIndex::ByOpen, &g).unwrap();
        let b = induced_next_topology(&c, 1, ComprehensionIndex::ByCarrier, &g).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn indiscrete_tau_induces_topology_with_extremes() {
        let g = Guards::default();
        let (_, mut c) = f1p_chain_with_tau();
        c.set_tau(1, SetFamilyTopology::indiscrete(4)).unwrap();
        c.push_level(vec![BitSet::singleton(4, 3)]).unwrap();
        let tau2 = induced_next_topology(&c, 1, ComprehensionIndex::ByOpen, &g).unwrap();
        assert!(tau2.contains(&BitSet::empty(tau2.carrier_size())));
        assert!(tau2.contains(&BitSet::full(tau2.carrier_size())));
    }

    #[test]
    fn non_tower_tau_can_break_containment() {
        let g = Guards::default();
        let (y, mut c) = f1p_chain_with_tau();
        c.push_level(vec![BitSet::singleton(4, 3)]).unwrap();
        // replace the induced tau_2 by the discrete topology
        let c2 = c.carrier_len(2).unwrap();
        c.set_tau(2, SetFamilyTopology::discrete(c2)).unwrap();
        let s = Arc::new(sierpinski());
        let cys = enumerate_continuous_maps(&y, &s, &g).unwrap();
        let t1 = c.family_open_topology(1, &cys, &g).unwrap();
        let t2 = c.family_open_topology(2, &cys, &g).unwrap();
        let rep = containment(&t2, &t1);
        assert!(!rep.contained);
        assert!(rep.witness.is_some());
    }

    #[test]
    fn induced_monotone_in_tau() {
        let g = Guards::default();
        let (_, base) = f1p_chain_with_tau();
        let mut small = base.clone();
        small.set_tau(1, SetFamilyTopology::indiscrete(4)).unwrap();
        small.push_level(vec![BitSet::singleton(4, 3)]).unwrap();
        let mut large = base;
        large.push_level(vec![BitSet::singleton(4, 3)]).unwrap();
        let tau_small = induced_next_topology(&small, 1, ComprehensionIndex::ByOpen, &g).unwrap();
        let tau_large = induced_next_topology(&large, 1, ComprehensionIndex::ByOpen, &g).unwrap();
        assert!(containment(&tau_small, &tau_large).contained);
    }

    #[test]
    fn stabilization_trivial_cases() {
        let g = Guards::default();
        let (y, mut c) = f1p_chain_with_tau();
        let s = Arc::new(sierpinski());
        let cys = enumerate_continuous_maps(&y, &s, &g).unwrap();
        assert_eq!(
            stabilization_search(&mut c.clone(), &cys, FamilyRule::TauItself, 0, &g).unwrap(),
            None
        );
        let d = stabilization_search(&mut c, &cys, FamilyRule::TauItself, 6, &g).unwrap();
        assert!(d.is_some());
    }

    #[test]
    fn stabilization_one_point_y() {
        let g = Guards::default();
        let y = Arc::new(fixtures::one_point());
        let s = Arc::new(sierpinski());
        let cys = enumerate_continuous_maps(&y, &s, &g).unwrap();
        let mut c = LevelChain::new(y.clone());
        c.push_level(vec![BitSet::full(2)]).unwrap();
        let n1 = c.carrier_len(1).unwrap();
        c.set_tau(1, SetFamilyTopology::indiscrete(n1)).unwrap();
        let d = stabilization_search(&mut c, &cys, FamilyRule::TauItself, 4, &g).unwrap();
        assert_eq!(d, Some(1));
    }

    #[test]
    fn f1_seed_reproduces_level_one_value() {
        // F_1 = {O(Y)} with indiscrete tau_1: t is {∅, C} at level 1 and the
        // search finds an early stabilization depth
        let g = Guards::default();
        let y = Arc::new(fixtures::example_a_y());
        let s = Arc::new(sierpinski());
        let cys = enumerate_continuous_maps(&y, &s, &g).unwrap();
        let mut c = LevelChain::new(y.clone());
        c.push_level(vec![BitSet::full(5)]).unwrap();
        c.set_tau(1, SetFamilyTopology::indiscrete(1)).unwrap();
        let t1 = c.family_open_topology(1, &cys, &g).unwrap();
        assert_eq!(t1.opens().len(), 2);
        let d = stabilization_search(&mut c, &cys, FamilyRule::TauItself, 5, &g).unwrap();
        assert_eq!(d, Some(1));
    }
}
