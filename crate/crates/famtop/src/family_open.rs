//! The staged family-open construction. A chain over a base space Y holds,
//! per level n, a family of sets of previous-level carrier elements, the map
//! U -> O^n(U), the carrier {O^n(U) : U open in Y}, and optionally a topology
//! tau_n on the carrier. The function-space topology at level n is generated
//! by the subbasic sets <H,U>_n = {f : O^n(f^(-1)(U)) in H}.
//!
//! Level 0 is the identity level: its carrier is the open-set family of Y
//! itself and O^0(U) = U. A topology attached at level 0 turns the level-0
//! subbasic sets into {f : f^(-1)(U) in H}, which recovers the Isbell
//! topology when tau_0 is the Scott topology on the opens of Y.
//!
//! Note: at level 1 the subbasic sets are sometimes presented directly as
//! {f : f^(-1)(U) in H} with H a family of open sets of Y; this module always
//! applies the staged test O^1(f^(-1)(U)) in H with H a set of carrier
//! elements. The two readings differ and the staged one is used throughout.

use std::sync::Arc;

use crate::bitset::{canonicalize, BitSet};
use crate::error::{Error, Result};
use crate::finite_space::{FiniteSpace, PointMap};
use crate::guards::Guards;
use crate::topology_algebra::{generate_topology, SetFamilyTopology};

#[derive(Debug, Clone)]
pub struct Level {
    /// Family members, each a set of previous-level carrier elements.
    family: Vec<BitSet>,
    /// Per open U of Y (by open index): O^n(U) as a subset of the family.
    o_values: Vec<BitSet>,
    /// Per open U of Y: index of O^n(U) in the carrier.
    o_index: Vec<usize>,
    /// Deduplicated image {O^n(U) : U open}, canonical order.
    carrier: Vec<BitSet>,
    tau: Option<SetFamilyTopology>,
}

impl Level {
    pub fn family(&self) -> &[BitSet] {
        &self.family
    }
}

/// The staged data over a base space. Levels are built bottom-up and are
/// immutable once pushed (only a topology may be attached later).
#[derive(Debug, Clone)]
pub struct LevelChain {
    base: Arc<FiniteSpace>,
    tau0: Option<SetFamilyTopology>,
    levels: Vec<Level>,
}

impl LevelChain {
    pub fn new(base: Arc<FiniteSpace>) -> Self {
        LevelChain {
            base,
            tau0: None,
            levels: Vec::new(),
        }
    }

    pub fn base(&self) -> &Arc<FiniteSpace> {
        &self.base
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    fn level(&self, n: usize) -> Result<&Level> {
        if n == 0 || n > self.levels.len() {
            return Err(Error::LevelNotBuilt(n));
        }
        Ok(&self.levels[n - 1])
    }

    /// Number of carrier elements at level n (level 0: the opens of Y).
    pub fn carrier_len(&self, n: usize) -> Result<usize> {
        if n == 0 {
            Ok(self.base.open_count())
        } else {
            Ok(self.level(n)?.carrier.len())
        }
    }

    /// The carrier at level n >= 1, in canonical order.
    pub fn carrier(&self, n: usize) -> Result<&[BitSet]> {
        Ok(&self.level(n)?.carrier)
    }

    /// O^n(U) as a subset of family_n, for the open with index `u`.
    pub fn o_level(&self, n: usize, u: usize) -> Result<&BitSet> {
        Ok(&self.level(n)?.o_values[u])
    }

    /// Carrier index of O^n(U) (level 0: `u` itself).
    pub fn o_index(&self, n: usize, u: usize) -> Result<usize> {
        if n == 0 {
            Ok(u)
        } else {
            Ok(self.level(n)?.o_index[u])
        }
    }

    /// The map U -> O^n(U) as carrier indices, with its injectivity flag.
    pub fn phi(&self, n: usize) -> Result<(Vec<usize>, bool)> {
        let table: Vec<usize> = (0..self.base.open_count())
            .map(|u| self.o_index(n, u))
            .collect::<Result<_>>()?;
        let injective = self.carrier_len(n)? == self.base.open_count();
        Ok((table, injective))
    }

    /// Push family_{n+1}, a set of subsets of the current top carrier.
    pub fn push_level(&mut self, family: Vec<BitSet>) -> Result<()> {
        let prev_len = self.carrier_len(self.levels.len())?;
        let family = canonicalize(family);
        for m in &family {
            assert_eq!(m.universe(), prev_len, "family member over wrong carrier");
        }
        let nf = family.len();
        let mut o_values = Vec::with_capacity(self.base.open_count());
        for u in 0..self.base.open_count() {
            let prev = self.o_index(self.levels.len(), u)?;
            o_values.push(BitSet::from_indices(
                nf,
                (0..nf).filter(|&j| family[j].contains(prev)),
            ));
        }
        let carrier = canonicalize(o_values.clone());
        let o_index = o_values
            .iter()
            .map(|v| carrier.binary_search(v).expect("value in carrier"))
            .collect();
        self.levels.push(Level {
            family,
            o_values,
            o_index,
            carrier,
            tau: None,
        });
        Ok(())
    }

    pub fn set_tau(&mut self, n: usize, tau: SetFamilyTopology) -> Result<()> {
        assert_eq!(tau.carrier_size(), self.carrier_len(n)?);
        if n == 0 {
            self.tau0 = Some(tau);
        } else {
            let idx = n - 1;
            self.level(n)?;
            self.levels[idx].tau = Some(tau);
        }
        Ok(())
    }

    pub fn tau(&self, n: usize) -> Result<&SetFamilyTopology> {
        let slot = if n == 0 {
            &self.tau0
        } else {
            &self.level(n)?.tau
        };
        slot.as_ref().ok_or(Error::TopologyNotSet(n))
    }

    /// <H,U>_n over an enumerated list of continuous maps Y -> Z: the maps f
    /// with O^n(f^(-1)(U)) in H. `h` is a subset of the level-n carrier and
    /// `u_z` an open index of Z.
    pub fn subbasic_set(
        &self,
        n: usize,
        h: &BitSet,
        u_z: usize,
        cyz: &[PointMap],
    ) -> Result<BitSet> {
        assert_eq!(h.universe(), self.carrier_len(n)?);
        let mut out = BitSet::empty(cyz.len());
        for (i, f) in cyz.iter().enumerate() {
            let pre = f.preimage(&f.target.opens()[u_z]);
            let u = self
                .base
                .open_index(&pre)
                .expect("preimage of a continuous map is open");
            if h.contains(self.o_index(n, u)?) {
                out.insert(i);
            }
        }
        Ok(out)
    }

    /// The level-n family-open topology on the enumerated maps: generated by
    /// all subbasic sets <H,U>_n with H in tau_n and U open in Z.
    pub fn family_open_topology(
        &self,
        n: usize,
        cyz: &[PointMap],
        guards: &Guards,
    ) -> Result<SetFamilyTopology> {
        let tau = self.tau(n)?.clone();
        let open_count_z = cyz.first().map_or(0, |f| f.target.open_count());
        let mut subbasis = Vec::new();
        for h in tau.opens() {
            for u_z in 0..open_count_z {
                subbasis.push(self.subbasic_set(n, h, u_z, cyz)?);
            }
        }
        generate_topology(cyz.len(), &subbasis, guards)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite_space::{enumerate_continuous_maps, sierpinski};
    use crate::fixtures;
    use crate::topology_algebra::{inclusion_poset, scott_topology};

    fn y1() -> Arc<FiniteSpace> {
        Arc::new(fixtures::example_a_y())
    }

    fn y2() -> Arc<FiniteSpace> {
        Arc::new(fixtures::example_b_y())
    }

    // F1 = {O(Y)} over the example A space: the single member containing all opens
    fn chain_f1(y: &Arc<FiniteSpace>) -> LevelChain {
        let mut c = LevelChain::new(y.clone());
        c.push_level(vec![BitSet::full(y.open_count())]).unwrap();
        c
    }

    // F'1 = {{U1,U3},{U2,U3}} over the example A space (open indices 1,3 and 2,3)
    fn chain_f1p(y: &Arc<FiniteSpace>) -> LevelChain {
        let mut c = LevelChain::new(y.clone());
        c.push_level(vec![
            BitSet::from_indices(5, [1, 3]),
            BitSet::from_indices(5, [2, 3]),
        ])
        .unwrap();
        c
    }

    #[test]
    fn o_level_collapses_for_f1() {
        let y = y1();
        let c = chain_f1(&y);
        let all = BitSet::full(1);
        for u in 0..5 {
            assert_eq!(c.o_level(1, u).unwrap(), &all);
        }
        assert_eq!(c.carrier_len(1).unwrap(), 1);
        let (_, injective) = c.phi(1).unwrap();
        assert!(!injective);
    }

    #[test]
    fn o_level_f1_prime() {
        let y = y1();
        let c = chain_f1p(&y);
        // members in canonical order: {U1,U3} = bits {1,3} -> value 10,
        // {U2,U3} = bits {2,3} -> value 12; so member 0 = {U1,U3}
        assert_eq!(c.o_level(1, 1).unwrap(), &BitSet::singleton(2, 0));
        // carrier = {∅, {m0}, {m1}, {m0,m1}}, four elements
        assert_eq!(c.carrier_len(1).unwrap(), 4);
    }

    #[test]
    fn empty_family_gives_singleton_carrier() {
        let y = y1();
        let mut c = LevelChain::new(y.clone());
        c.push_level(vec![]).unwrap();
        for u in 0..5 {
            assert!(c.o_level(1, u).unwrap().is_empty());
        }
        assert_eq!(c.carrier_len(1).unwrap(), 1);
    }

    #[test]
    fn carrier_example_b_powerset() {
        let y = y2();
        let mut c = LevelChain::new(y.clone());
        // F1 = P(O(Y)): all 8 subsets of the 3 opens
        c.push_level((0u64..8).map(|m| BitSet::from_mask(3, m)).collect())
            .unwrap();
        assert_eq!(c.carrier_len(1).unwrap(), 3);
        let (_, injective) = c.phi(1).unwrap();
        assert!(injective);
        // the three O^1 values: members containing ∅ / U / Y respectively.
        // family canonical order over opens {∅=bit0, U=bit1, Y=bit2}:
        // masks 0..7 sorted: {},{∅},{U},{∅,U},{Y},{∅,Y},{U,Y},{∅,U,Y}
        let o_empty = c.o_level(1, 0).unwrap();
        assert_eq!(o_empty, &BitSet::from_indices(8, [1, 3, 5, 7]));
        let o_u = c.o_level(1, 1).unwrap();
        assert_eq!(o_u, &BitSet::from_indices(8, [2, 3, 6, 7]));
        let o_y = c.o_level(1, 2).unwrap();
        assert_eq!(o_y, &BitSet::from_indices(8, [4, 5, 6, 7]));
        // the carrier is a 3-element antichain under inclusion
        let (p, _) = inclusion_poset(c.carrier(1).unwrap());
        let tau = scott_topology(&p);
        assert!(tau.is_discrete());
    }

    #[test]
    fn subbasic_sets_example_a() {
        let y = y1();
        let z = Arc::new(sierpinski());
        let g = Guards::default();
        let cyz = enumerate_continuous_maps(&y, &z, &g).unwrap();
        assert_eq!(cyz.len(), 5);

        // F1 = {O(Y)}, tau_1 = {∅, carrier}: <{F1},{1}>_1 = C(Y,S)
        let mut c = chain_f1(&y);
        c.set_tau(1, SetFamilyTopology::indiscrete(1)).unwrap();
        let one = 1; // opens of S in canonical order: ∅, {1}, S
        let h = BitSet::full(1);
        assert_eq!(
            c.subbasic_set(1, &h, one, &cyz).unwrap(),
            BitSet::full(5)
        );
        // H = ∅ gives the empty subbasic set for every U
        for u_z in 0..3 {
            assert!(c
                .subbasic_set(1, &BitSet::empty(1), u_z, &cyz)
                .unwrap()
                .is_empty());
        }
        let t = c.family_open_topology(1, &cyz, &g).unwrap();
        assert_eq!(t.opens().len(), 2); // {∅, C(Y,S)}
    }

    #[test]
    fn family_open_topologies_f1_prime() {
        let y = y1();
        let z = Arc::new(sierpinski());
        let g = Guards::default();
        let cyz = enumerate_continuous_maps(&y, &z, &g).unwrap();
        let mut c = chain_f1p(&y);
        // carrier in canonical order: 0=∅, 1={m0}, 2={m1}, 3={m0,m1}.
        // tau'_1 has one proper nonempty open, {{{U1,U3}}, F'_1} = {1, 3}.
        let tau1p = SetFamilyTopology::new(
            4,
            vec![
                BitSet::empty(4),
                BitSet::from_indices(4, [1, 3]),
                BitSet::full(4),
            ],
        )
        .unwrap();
        c.set_tau(1, tau1p).unwrap();
        let t = c.family_open_topology(1, &cyz, &g).unwrap();
        // maps canonical order (table lex): X_∅, X_{U2}, X_{U1}, X_{U3}, X_Y
        // tables over (a,b,c): X_∅=000, X_{U2}=010, X_{U1}=100, X_{U3}=110, X_Y=111
        // expected {∅, {X_{U1},X_{U3}}, C} = {∅, {2,3}, full}
        assert_eq!(
            t.opens().to_vec(),
            vec![
                BitSet::empty(5),
                BitSet::from_indices(5, [2, 3]),
                BitSet::full(5)
            ]
        );
    }

    #[test]
    fn level_not_built_errors() {
        let y = y1();
        let c = LevelChain::new(y);
        assert_eq!(c.carrier(1).unwrap_err(), Error::LevelNotBuilt(1));
        assert_eq!(c.tau(1).unwrap_err(), Error::LevelNotBuilt(1));
        assert_eq!(c.tau(0).unwrap_err(), Error::TopologyNotSet(0));
    }
}
