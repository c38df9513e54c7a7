//! Exhaustive verification of splitting and joint continuity over a probe
//! catalog, plus the auxiliary first-variable maps and the machine-checked
//! characterization equivalences.

use std::collections::HashMap;
use std::sync::Arc;

use crate::bitset::BitSet;
use crate::error::{Error, Result};
use crate::family_open::LevelChain;
use crate::finite_space::{
    enumerate_continuous_maps, is_continuous, pair_index, product_space, FiniteSpace, PointMap,
    ProbeCatalog,
};
use crate::guards::Guards;
use crate::topology_algebra::{
    generate_topology, inclusion_poset, is_scott_continuous, scott_topology, SetFamilyTopology,
};

/// Which quantified check produced a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// A continuous F: X x Y -> Z whose curried map into C_t(Y,Z) fails.
    CurryFails,
    /// A continuous G: X -> C_t(Y,Z) whose uncurried map fails.
    UncurryFails,
}

/// A concrete continuity failure, re-checkable without any of the search
/// machinery.
#[derive(Debug, Clone)]
pub struct Witness {
    pub probe_index: usize,
    pub kind: WitnessKind,
    /// For CurryFails: the table of F over the product points of X x Y.
    /// For UncurryFails: the table of G as indices into C(Y,Z).
    pub table: Vec<usize>,
    /// The open set whose preimage is not open (a subset of C(Y,Z) for
    /// CurryFails, an open of Z for UncurryFails).
    pub open: BitSet,
}

#[derive(Debug, Clone)]
pub struct SplittingReport {
    pub verdict: bool,
    pub witness: Option<Witness>,
    pub checked_count: usize,
}

/// A table X x O(Z) -> carrier elements of some level (or opens of Y for the
/// level-0 variant).
#[derive(Debug, Clone)]
pub struct FirstVariableMap {
    pub probe_index: usize,
    /// values[x][u_z] = carrier element index.
    pub values: Vec<Vec<usize>>,
}

/// Everything about one probe space X that does not depend on the topology
/// under test: the product X x Y, the continuous maps F: X x Y -> Z with
/// their curried tables, and all set maps G: X -> C(Y,Z) with their uncurried
/// continuity verdicts.
#[derive(Debug, Clone)]
pub struct ProbeData {
    pub space: Arc<FiniteSpace>,
    pub product: Arc<FiniteSpace>,
    /// (table over product points, curried table x -> C index)
    pub continuous_f: Vec<(Vec<usize>, Vec<usize>)>,
    /// (table x -> C index, uncurried map is continuous)
    pub all_g: Vec<(Vec<usize>, bool)>,
}

/// Probe data for a fixed (Y, Z, catalog), reused across every topology that
/// gets tested against the same triple.
#[derive(Debug, Clone)]
pub struct ProbeContext {
    pub y: Arc<FiniteSpace>,
    pub z: Arc<FiniteSpace>,
    pub cyz: Vec<PointMap>,
    pub probes: Vec<ProbeData>,
}

impl ProbeContext {
    pub fn new(
        y: &Arc<FiniteSpace>,
        z: &Arc<FiniteSpace>,
        catalog: &ProbeCatalog,
        guards: &Guards,
    ) -> Result<Self> {
        Self::build(y, z, catalog, guards, true)
    }

    /// Like `new`, but skips the enumeration of all set maps G: X -> C(Y,Z).
    /// Contexts built this way support splitting checks only.
    pub fn new_curry_only(
        y: &Arc<FiniteSpace>,
        z: &Arc<FiniteSpace>,
        catalog: &ProbeCatalog,
        guards: &Guards,
    ) -> Result<Self> {
        Self::build(y, z, catalog, guards, false)
    }

    fn build(
        y: &Arc<FiniteSpace>,
        z: &Arc<FiniteSpace>,
        catalog: &ProbeCatalog,
        guards: &Guards,
        with_g: bool,
    ) -> Result<Self> {
        let cyz = enumerate_continuous_maps(y, z, guards)?;
        let index_of: HashMap<&[usize], usize> = cyz
            .iter()
            .enumerate()
            .map(|(i, f)| (f.table.as_slice(), i))
            .collect();
        let mut probes = Vec::with_capacity(catalog.spaces.len());
        for x in &catalog.spaces {
            let product = Arc::new(product_space(x, y, guards)?);
            let nx = x.point_count();
            let ny = y.point_count();
            let mut continuous_f = Vec::new();
            for f in enumerate_continuous_maps(&product, z, guards)? {
                let fhat: Vec<usize> = (0..nx)
                    .map(|ix| {
                        let slice: Vec<usize> =
                            (0..ny).map(|iy| f.table[pair_index(ix, iy, ny)]).collect();
                        *index_of
                            .get(slice.as_slice())
                            .expect("slice of a continuous map is continuous")
                    })
                    .collect();
                continuous_f.push((f.table, fhat));
            }
            // all set maps G: X -> C(Y,Z)
            let mut all_g = Vec::new();
            if with_g {
                let gcount = (cyz.len() as u128)
                    .checked_pow(nx as u32)
                    .unwrap_or(u128::MAX);
                guards.check_candidates(usize::try_from(gcount).unwrap_or(usize::MAX))?;
            }
            if with_g && (!cyz.is_empty() || nx == 0) {
                let mut table = vec![0usize; nx];
                loop {
                    let gtilde_table: Vec<usize> = (0..nx)
                        .flat_map(|ix| cyz[table[ix]].table.iter().copied().collect::<Vec<_>>())
                        .collect();
                    let gtilde =
                        PointMap::new(product.clone(), z.clone(), gtilde_table);
                    all_g.push((table.clone(), is_continuous(&gtilde)));
                    let mut k = nx;
                    let mut done = true;
                    while k > 0 {
                        k -= 1;
                        table[k] += 1;
                        if table[k] < cyz.len() {
                            done = false;
                            break;
                        }
                        table[k] = 0;
                    }
                    if done {
                        break;
                    }
                }
            }
            probes.push(ProbeData {
                space: x.clone(),
                product,
                continuous_f,
                all_g,
            });
        }
        Ok(ProbeContext {
            y: y.clone(),
            z: z.clone(),
            cyz,
            probes,
        })
    }
}

/// Curry a continuous F on X x Y into its per-point slices.
pub fn f_hat(
    f: &PointMap,
    x: &Arc<FiniteSpace>,
    y: &Arc<FiniteSpace>,
    z: &Arc<FiniteSpace>,
) -> Result<Vec<PointMap>> {
    if !is_continuous(f) {
        return Err(Error::NotContinuous);
    }
    let ny = y.point_count();
    let mut slices = Vec::with_capacity(x.point_count());
    for ix in 0..x.point_count() {
        let table: Vec<usize> = (0..ny).map(|iy| f.table[pair_index(ix, iy, ny)]).collect();
        let slice = PointMap::new(y.clone(), z.clone(), table);
        assert!(is_continuous(&slice), "slice of a continuous map");
        slices.push(slice);
    }
    Ok(slices)
}

/// Uncurry G: X -> C(Y,Z) into the map on the product. Continuity is not
/// asserted; it is the property under test downstream.
pub fn g_tilde(
    g: &[&PointMap],
    product: &Arc<FiniteSpace>,
    y: &Arc<FiniteSpace>,
    z: &Arc<FiniteSpace>,
) -> PointMap {
    let ny = y.point_count();
    let table: Vec<usize> = (0..g.len())
        .flat_map(|ix| (0..ny).map(move |iy| g[ix].table[iy]))
        .collect();
    PointMap::new(product.clone(), z.clone(), table)
}

/// The level-n first-variable table of a continuous F: values[x][U] =
/// O^n(F_x^(-1)(U)). Level 0 gives the plain preimage table F*.
pub fn f_bar(
    chain: &LevelChain,
    n: usize,
    probe_index: usize,
    f_table: &[usize],
    ctx: &ProbeContext,
) -> Result<FirstVariableMap> {
    let probe = &ctx.probes[probe_index];
    let f = PointMap::new(probe.product.clone(), ctx.z.clone(), f_table.to_vec());
    if !is_continuous(&f) {
        return Err(Error::NotContinuous);
    }
    let ny = ctx.y.point_count();
    let mut values = Vec::with_capacity(probe.space.point_count());
    for ix in 0..probe.space.point_count() {
        let slice: Vec<usize> = (0..ny)
            .map(|iy| f_table[pair_index(ix, iy, ny)])
            .collect();
        let slice_map = PointMap::new(ctx.y.clone(), ctx.z.clone(), slice);
        let mut row = Vec::with_capacity(ctx.z.open_count());
        for u_z in ctx.z.opens() {
            let pre = slice_map.preimage(u_z);
            let u = ctx.y.open_index(&pre).ok_or(Error::NotContinuous)?;
            row.push(chain.o_index(n, u)?);
        }
        values.push(row);
    }
    Ok(FirstVariableMap {
        probe_index,
        values,
    })
}

/// The level-n first-variable table of an arbitrary G: X -> C(Y,Z):
/// values[x][U] = O^n((G(x))^(-1)(U)). No continuity requirement on G.
pub fn g_bar(
    chain: &LevelChain,
    n: usize,
    probe_index: usize,
    g_table: &[usize],
    ctx: &ProbeContext,
) -> Result<FirstVariableMap> {
    let mut values = Vec::with_capacity(g_table.len());
    for &gi in g_table {
        let f = &ctx.cyz[gi];
        let mut row = Vec::with_capacity(ctx.z.open_count());
        for u_z in ctx.z.opens() {
            let pre = f.preimage(u_z);
            let u = ctx.y.open_index(&pre).expect("continuous preimage open");
            row.push(chain.o_index(n, u)?);
        }
        values.push(row);
    }
    Ok(FirstVariableMap {
        probe_index,
        values,
    })
}

/// For every fixed open U of Z, is x -> M(x, U) continuous from X into the
/// carrier with topology `tau`?
pub fn first_variable_continuous(
    m: &FirstVariableMap,
    tau: &SetFamilyTopology,
    x: &FiniteSpace,
) -> bool {
    let nx = x.point_count();
    let n_opens_z = m.values.first().map_or(0, |r| r.len());
    for u_z in 0..n_opens_z {
        for h in tau.opens() {
            let pre = BitSet::from_indices(nx, (0..nx).filter(|&ix| h.contains(m.values[ix][u_z])));
            if !x.is_open(&pre) {
                return false;
            }
        }
    }
    true
}

/// Is `t` splitting for every probe space: does every continuous F on X x Y
/// curry to a continuous map into C_t(Y,Z)?
pub fn is_a_splitting(t: &SetFamilyTopology, ctx: &ProbeContext) -> SplittingReport {
    assert_eq!(t.carrier_size(), ctx.cyz.len());
    let mut checked = 0;
    for (pi, probe) in ctx.probes.iter().enumerate() {
        for (f_table, fhat) in &probe.continuous_f {
            checked += 1;
            for w in t.opens() {
                let pre = BitSet::from_indices(
                    probe.space.point_count(),
                    (0..probe.space.point_count()).filter(|&ix| w.contains(fhat[ix])),
                );
                if !probe.space.is_open(&pre) {
                    return SplittingReport {
                        verdict: false,
                        witness: Some(Witness {
                            probe_index: pi,
                            kind: WitnessKind::CurryFails,
                            table: f_table.clone(),
                            open: w.clone(),
                        }),
                        checked_count: checked,
                    };
                }
            }
        }
    }
    SplittingReport {
        verdict: true,
        witness: None,
        checked_count: checked,
    }
}

/// Is `t` jointly continuous for every probe space: does every continuous
/// G: X -> C_t(Y,Z) uncurry to a continuous map on X x Y?
pub fn is_a_jointly_continuous(t: &SetFamilyTopology, ctx: &ProbeContext) -> SplittingReport {
    assert_eq!(t.carrier_size(), ctx.cyz.len());
    let mut checked = 0;
    for (pi, probe) in ctx.probes.iter().enumerate() {
        for (g_table, gtilde_continuous) in &probe.all_g {
            let g_continuous = t.opens().iter().all(|w| {
                let pre = BitSet::from_indices(
                    probe.space.point_count(),
                    (0..probe.space.point_count()).filter(|&ix| w.contains(g_table[ix])),
                );
                probe.space.is_open(&pre)
            });
            if !g_continuous {
                continue;
            }
            checked += 1;
            if !gtilde_continuous {
                // the failing open of Z is recovered for the witness
                let open = first_failing_open(g_table, probe, ctx)
                    .expect("discontinuous uncurried map has a failing open");
                return SplittingReport {
                    verdict: false,
                    witness: Some(Witness {
                        probe_index: pi,
                        kind: WitnessKind::UncurryFails,
                        table: g_table.clone(),
                        open,
                    }),
                    checked_count: checked,
                };
            }
        }
    }
    SplittingReport {
        verdict: true,
        witness: None,
        checked_count: checked,
    }
}

fn first_failing_open(g_table: &[usize], probe: &ProbeData, ctx: &ProbeContext) -> Option<BitSet> {
    let ny = ctx.y.point_count();
    let table: Vec<usize> = (0..g_table.len())
        .flat_map(|ix| (0..ny).map(move |iy| ctx.cyz[g_table[ix]].table[iy]))
        .collect();
    let gt = PointMap::new(probe.product.clone(), ctx.z.clone(), table);
    ctx.z
        .opens()
        .iter()
        .find(|w| !gt.source.is_open(&gt.preimage(w)))
        .cloned()
}

#[derive(Debug, Clone)]
pub struct CharacterizationReport {
    pub direct: SplittingReport,
    pub first_variable_side: bool,
    pub agree: bool,
}

/// Both sides of the splitting characterization, computed independently:
/// the direct quantifier check of the level-n family-open topology, and the
/// first-variable continuity of every curried table. A disagreement signals
/// an implementation bug.
pub fn check_splitting_characterization(
    chain: &LevelChain,
    n: usize,
    ctx: &ProbeContext,
    guards: &Guards,
) -> Result<CharacterizationReport> {
    let t = chain.family_open_topology(n, &ctx.cyz, guards)?;
    let direct = is_a_splitting(&t, ctx);
    let tau = chain.tau(n)?;
    let mut side_b = true;
    'outer: for (pi, probe) in ctx.probes.iter().enumerate() {
        for (f_table, _) in &probe.continuous_f {
            let m = f_bar(chain, n, pi, f_table, ctx)?;
            if !first_variable_continuous(&m, tau, &probe.space) {
                side_b = false;
                break 'outer;
            }
        }
    }
    Ok(CharacterizationReport {
        agree: direct.verdict == side_b,
        direct,
        first_variable_side: side_b,
    })
}

/// Both sides of the joint-continuity characterization. G ranges over all
/// set maps X -> C(Y,Z); the first-variable side holds when every G whose
/// level-n first-variable table is continuous uncurries continuously.
pub fn check_jointly_characterization(
    chain: &LevelChain,
    n: usize,
    ctx: &ProbeContext,
    guards: &Guards,
) -> Result<CharacterizationReport> {
    let t = chain.family_open_topology(n, &ctx.cyz, guards)?;
    let direct = is_a_jointly_continuous(&t, ctx);
    let tau = chain.tau(n)?;
    let mut side_b = true;
    'outer: for (pi, probe) in ctx.probes.iter().enumerate() {
        for (g_table, gtilde_continuous) in &probe.all_g {
            let m = g_bar(chain, n, pi, g_table, ctx)?;
            if first_variable_continuous(&m, tau, &probe.space) && !gtilde_continuous {
                side_b = false;
                break 'outer;
            }
        }
    }
    Ok(CharacterizationReport {
        agree: direct.verdict == side_b,
        direct,
        first_variable_side: side_b,
    })
}

#[derive(Debug, Clone)]
pub struct PhiScottReport {
    pub phi_scott_continuous: bool,
    /// Per tested codomain: the splitting verdict of the level-n family-open
    /// topology under the Scott topology on the carrier.
    pub verdicts: Vec<bool>,
    pub all_hold: bool,
}

/// When Phi is Scott continuous the Scott family-open topology must come out
/// splitting, for every supplied codomain.
pub fn check_phi_scott_implies_splitting(
    chain: &mut LevelChain,
    n: usize,
    catalog: &ProbeCatalog,
    codomains: &[Arc<FiniteSpace>],
    guards: &Guards,
) -> Result<PhiScottReport> {
    let (p_y, _) = inclusion_poset(chain.base().opens());
    let (p_c, _) = inclusion_poset(chain.carrier(n)?);
    chain.set_tau(n, scott_topology(&p_c))?;
    let (phi, _) = chain.phi(n)?;
    let phi_scott_continuous = is_scott_continuous(&phi, &p_y, &p_c);
    let mut verdicts = Vec::new();
    for z in codomains {
        let ctx = ProbeContext::new_curry_only(&chain.base().clone(), z, catalog, guards)?;
        let t = chain.family_open_topology(n, &ctx.cyz, guards)?;
        verdicts.push(is_a_splitting(&t, &ctx).verdict);
    }
    let all_hold = !phi_scott_continuous || verdicts.iter().all(|&v| v);
    Ok(PhiScottReport {
        phi_scott_continuous,
        verdicts,
        all_hold,
    })
}

/// All labeled topologies on an abstract c-element carrier, enumerated
/// through their specialization preorders (every topology on a finite set is
/// determined by one).
pub fn enumerate_all_topologies(c: usize, guards: &Guards) -> Result<Vec<SetFamilyTopology>> {
    guards.check("carrier for topology enumeration", c, 5)?;
    if c == 0 {
        return Ok(vec![SetFamilyTopology::new(0, vec![BitSet::empty(0)])
            .expect("empty carrier topology")]);
    }
    let off_diag = c * c - c;
    let mut out = Vec::new();
    for mask in 0u64..1 << off_diag {
        // unpack into a reflexive relation
        let mut le = vec![false; c * c];
        let mut k = 0;
        for a in 0..c {
            for b in 0..c {
                if a == b {
                    le[a * c + b] = true;
                } else {
                    le[a * c + b] = mask >> k & 1 == 1;
                    k += 1;
                }
            }
        }
        let transitive = (0..c).all(|a| {
            (0..c).all(|b| {
                !le[a * c + b] || (0..c).all(|d| !le[b * c + d] || le[a * c + d])
            })
        });
        if !transitive {
            continue;
        }
        // opens = up-sets of the preorder
        let opens: Vec<BitSet> = (0u64..1 << c)
            .map(|m| BitSet::from_mask(c, m))
            .filter(|h| {
                h.iter()
                    .all(|a| (0..c).all(|b| !le[a * c + b] || h.contains(b)))
            })
            .collect();
        out.push(SetFamilyTopology::new(c, opens).expect("up-sets form a topology"));
    }
    out.sort_by(|a, b| a.opens().cmp(b.opens()));
    out.dedup();
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct GreatestSplittingReport {
    pub join: SetFamilyTopology,
    pub splitting_count: usize,
    pub total_count: usize,
    /// The join is itself splitting and contains every splitting candidate.
    pub join_is_greatest: bool,
}

/// Brute force: enumerate every labeled topology on C(Y,Z), keep the
/// splitting ones, and join them. The join is re-verified to be splitting
/// and to contain every candidate.
pub fn greatest_splitting_bruteforce(
    ctx: &ProbeContext,
    guards: &Guards,
) -> Result<GreatestSplittingReport> {
    let c = ctx.cyz.len();
    let all = enumerate_all_topologies(c, guards)?;
    let splitting: Vec<&SetFamilyTopology> = all
        .iter()
        .filter(|t| is_a_splitting(t, ctx).verdict)
        .collect();
    let mut subbasis = Vec::new();
    for t in &splitting {
        subbasis.extend(t.opens().iter().cloned());
    }
    let join = generate_topology(c, &subbasis, guards)?;
    let join_is_greatest = is_a_splitting(&join, ctx).verdict
        && splitting.iter().all(|t| {
            t.opens().iter().all(|w| join.contains(w))
        });
    Ok(GreatestSplittingReport {
        splitting_count: splitting.len(),
        total_count: all.len(),
        join,
        join_is_greatest,
    })
}

/// Independent re-check of a witness: a direct preimage computation with no
/// shared search helpers.
pub fn recheck_witness(w: &Witness, ctx: &ProbeContext, t: &SetFamilyTopology) -> bool {
    let probe = &ctx.probes[w.probe_index];
    let x = &probe.space;
    let ny = ctx.y.point_count();
    match w.kind {
        WitnessKind::CurryFails => {
            // recompute the slice indices by scanning the map list
            let bad: Vec<usize> = (0..x.point_count())
                .filter(|&ix| {
                    let slice: Vec<usize> =
                        (0..ny).map(|iy| w.table[ix * ny + iy]).collect();
                    let ci = ctx
                        .cyz
                        .iter()
                        .position(|f| f.table == slice)
                        .expect("slice continuous");
                    w.open.contains(ci)
                })
                .collect();
            let pre = BitSet::from_indices(x.point_count(), bad);
            let _ = t;
            !x.is_open(&pre)
        }
        WitnessKind::UncurryFails => {
            // G must be continuous into t, G-tilde discontinuous at w.open
            let g_cont = t.opens().iter().all(|ho| {
                let pre = BitSet::from_indices(
                    x.point_count(),
                    (0..x.point_count()).filter(|&ix| ho.contains(w.table[ix])),
                );
                x.is_open(&pre)
            });
            let mut pre = BitSet::empty(probe.product.point_count());
            for ix in 0..x.point_count() {
                for iy in 0..ny {
                    if w.open.contains(ctx.cyz[w.table[ix]].table[iy]) {
                        pre.insert(pair_index(ix, iy, ny));
                    }
                }
            }
            g_cont && !probe.product.is_open(&pre)
        }
    }
}
