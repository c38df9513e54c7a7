//! Topologies on the enumerated set of continuous maps Y -> Z: the Isbell
//! topology, arbitrary user topologies, the evaluation maps h_n onto chain
//! carriers, and homeomorphism checks.

use std::sync::Arc;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::family_open::LevelChain;
use crate::finite_space::{
    enumerate_continuous_maps, is_continuous, sierpinski, FiniteSpace, PointMap,
};
use crate::guards::Guards;
use crate::topology_algebra::{generate_topology, inclusion_poset, scott_topology, SetFamilyTopology};

/// The set C(Y,Z) in canonical order together with a topology on it.
#[derive(Debug, Clone)]
pub struct FunctionSpaceTopology {
    pub y: Arc<FiniteSpace>,
    pub z: Arc<FiniteSpace>,
    pub maps: Vec<PointMap>,
    pub topology: SetFamilyTopology,
}

impl FunctionSpaceTopology {
    pub fn new(
        y: Arc<FiniteSpace>,
        z: Arc<FiniteSpace>,
        topology: SetFamilyTopology,
        guards: &Guards,
    ) -> Result<Self> {
        let maps = enumerate_continuous_maps(&y, &z, guards)?;
        assert_eq!(topology.carrier_size(), maps.len());
        Ok(FunctionSpaceTopology {
            y,
            z,
            maps,
            topology,
        })
    }

    pub fn map_index(&self, f: &PointMap) -> Option<usize> {
        self.maps.iter().position(|g| g.table == f.table)
    }
}

/// The characteristic map of an open set U of Y into the Sierpinski space.
pub fn characteristic_map(y: &Arc<FiniteSpace>, u: &BitSet) -> Result<PointMap> {
    if !y.is_open(u) {
        return Err(Error::NotOpen);
    }
    let s = Arc::new(sierpinski());
    let table = (0..y.point_count())
        .map(|i| if u.contains(i) { 1 } else { 0 })
        .collect();
    let f = PointMap::new(y.clone(), s, table);
    debug_assert!(is_continuous(&f));
    Ok(f)
}

/// Isbell topology: generated by (H,U) = {f : f^(-1)(U) in H} with H Scott
/// open in the inclusion order on the opens of Y.
pub fn isbell_topology(
    y: &Arc<FiniteSpace>,
    z: &Arc<FiniteSpace>,
    guards: &Guards,
) -> Result<FunctionSpaceTopology> {
    let maps = enumerate_continuous_maps(y, z, guards)?;
    let (poset, fam) = inclusion_poset(y.opens());
    debug_assert_eq!(fam, y.opens().to_vec());
    let tau_sc = scott_topology(&poset);
    let mut subbasis = Vec::new();
    for h in tau_sc.opens() {
        for u_z in z.opens() {
            let mut s = BitSet::empty(maps.len());
            for (i, f) in maps.iter().enumerate() {
                let pre = f.preimage(u_z);
                let idx = y.open_index(&pre).expect("continuous preimage open");
                if h.contains(idx) {
                    s.insert(i);
                }
            }
            subbasis.push(s);
        }
    }
    let topology = generate_topology(maps.len(), &subbasis, guards)?;
    Ok(FunctionSpaceTopology {
        y: y.clone(),
        z: z.clone(),
        maps,
        topology,
    })
}

/// h_n : C(Y,S) -> carrier_n, f |-> O^n(f^(-1)({1})), as a table of carrier
/// indices aligned with the map list.
pub fn h_map(chain: &LevelChain, n: usize, cys: &[PointMap]) -> Result<Vec<usize>> {
    let s = sierpinski();
    let one = BitSet::singleton(2, 1);
    let mut out = Vec::with_capacity(cys.len());
    for f in cys {
        if f.target.as_ref() != &s {
            return Err(Error::WrongCodomain);
        }
        let pre = f.preimage(&one);
        let u = chain
            .base()
            .open_index(&pre)
            .expect("continuous preimage open");
        out.push(chain.o_index(n, u)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HMapReport {
    pub continuous: bool,
    pub open: bool,
    pub onto: bool,
    pub bijective: bool,
    pub homeomorphism: bool,
}

/// Exhaustively evaluate continuity, openness, surjectivity and the
/// homeomorphism property of h_n between C(Y,S) with the level-n family-open
/// topology and the carrier with tau_n.
pub fn check_h_properties(
    chain: &LevelChain,
    n: usize,
    fst: &FunctionSpaceTopology,
) -> Result<HMapReport> {
    let h = h_map(chain, n, &fst.maps)?;
    let tau = chain.tau(n)?;
    let carrier_len = chain.carrier_len(n)?;
    let continuous = tau.opens().iter().all(|ho| {
        let pre = BitSet::from_indices(
            fst.maps.len(),
            (0..fst.maps.len()).filter(|&i| ho.contains(h[i])),
        );
        fst.topology.contains(&pre)
    });
    let open = fst.topology.opens().iter().all(|w| {
        let image = BitSet::from_indices(carrier_len, w.iter().map(|i| h[i]));
        tau.contains(&image)
    });
    let image_all = BitSet::from_indices(carrier_len, h.iter().copied());
    let onto = image_all.is_full();
    let injective = {
        let mut seen = vec![false; carrier_len];
        let mut inj = true;
        for &v in &h {
            if seen[v] {
                inj = false;
            }
            seen[v] = true;
        }
        inj
    };
    let bijective = onto && injective;
    Ok(HMapReport {
        continuous,
        open,
        onto,
        bijective,
        homeomorphism: continuous && open && bijective,
    })
}

/// Build the chain with family_{i+1} = tau_i, starting from a T0 topology
/// tau_0 on the opens of Y. Each derived tau_{i+1} is the elementwise image
/// of tau_i along O^i(U) |-> O^(i+1)(U) and is re-checked to be a T0 topology
/// rather than assumed.
pub fn t0_chain_build(
    y: &Arc<FiniteSpace>,
    tau0: &SetFamilyTopology,
    depth: usize,
) -> Result<LevelChain> {
    assert_eq!(tau0.carrier_size(), y.open_count());
    if !tau0.is_t0() {
        return Err(Error::NotT0(0));
    }
    let mut chain = LevelChain::new(y.clone());
    chain.set_tau(0, tau0.clone())?;
    for i in 0..depth {
        let tau_i = chain.tau(i)?.clone();
        chain.push_level(tau_i.opens().to_vec())?;
        // carrier_i -> carrier_{i+1} along any witnessing open U; O^(i+1)(U)
        // depends only on O^i(U), so the choice of witness cannot matter
        let n_prev = chain.carrier_len(i)?;
        let n_next = chain.carrier_len(i + 1)?;
        let mut step = vec![usize::MAX; n_prev];
        for u in 0..y.open_count() {
            step[chain.o_index(i, u)?] = chain.o_index(i + 1, u)?;
        }
        let next_opens: Vec<BitSet> = tau_i
            .opens()
            .iter()
            .map(|h| BitSet::from_indices(n_next, h.iter().map(|e| step[e])))
            .collect();
        let tau_next =
            SetFamilyTopology::new(n_next, next_opens).map_err(|_| Error::NotT0(i + 1))?;
        if !tau_next.is_t0() {
            return Err(Error::NotT0(i + 1));
        }
        chain.set_tau(i + 1, tau_next)?;
    }
    Ok(chain)
}
