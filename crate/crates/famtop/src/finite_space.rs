//! Finite topological spaces: axiom validation, products, continuous-map
//! enumeration and probe catalogs.

use std::sync::Arc;

use crate::bitset::{canonicalize, BitSet};
use crate::error::{Error, Result};
use crate::guards::Guards;
use crate::topology_algebra::close_under_subbasis;

/// A finite point set together with a validated topology. Opens are kept
/// deduplicated and in canonical (bit-value) order, so every computation
/// derived from a space is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSpace {
    labels: Vec<String>,
    opens: Vec<BitSet>,
}

impl FiniteSpace {
    pub fn point_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn opens(&self) -> &[BitSet] {
        &self.opens
    }

    pub fn open_count(&self) -> usize {
        self.opens.len()
    }

    pub fn is_open(&self, s: &BitSet) -> bool {
        self.open_index(s).is_some()
    }

    /// Index of `s` in the canonical open list, if open.
    pub fn open_index(&self, s: &BitSet) -> Option<usize> {
        self.opens.binary_search(s).ok()
    }

    pub fn full_set(&self) -> BitSet {
        BitSet::full(self.point_count())
    }
}

/// A total point map between two spaces. The spaces are shared so a map can
/// always be re-checked against the topologies it was built over.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointMap {
    pub source: Arc<FiniteSpace>,
    pub target: Arc<FiniteSpace>,
    pub table: Vec<usize>,
}

impl PointMap {
    pub fn new(source: Arc<FiniteSpace>, target: Arc<FiniteSpace>, table: Vec<usize>) -> Self {
        assert_eq!(table.len(), source.point_count());
        assert!(table.iter().all(|&t| t < target.point_count()));
        PointMap {
            source,
            target,
            table,
        }
    }

    pub fn identity(space: &Arc<FiniteSpace>) -> Self {
        PointMap::new(
            space.clone(),
            space.clone(),
            (0..space.point_count()).collect(),
        )
    }

    pub fn preimage(&self, target_set: &BitSet) -> BitSet {
        BitSet::from_indices(
            self.source.point_count(),
            self.table
                .iter()
                .enumerate()
                .filter(|(_, &t)| target_set.contains(t))
                .map(|(i, _)| i),
        )
    }
}

/// The family of probe spaces used as the test spaces X in the restricted
/// splitting / joint-continuity checks.
#[derive(Debug, Clone)]
pub struct ProbeCatalog {
    pub spaces: Vec<Arc<FiniteSpace>>,
    pub description: String,
}

/// Check the topology axioms on a candidate family and build a space.
pub fn validate_topology(points: &[&str], candidate: &[BitSet]) -> Result<FiniteSpace> {
    let n = points.len();
    let opens = canonicalize(candidate.to_vec());
    for s in &opens {
        assert_eq!(s.universe(), n, "candidate set over wrong universe");
    }
    if !opens.iter().any(|s| s.is_empty()) {
        return Err(Error::MissingEmptySet);
    }
    if !opens.iter().any(|s| s.is_full()) {
        return Err(Error::MissingFullSet);
    }
    for i in 0..opens.len() {
        for j in i + 1..opens.len() {
            let inter = opens[i].intersection(&opens[j]);
            if opens.binary_search(&inter).is_err() {
                return Err(Error::NotClosedUnderIntersection(i, j));
            }
            let uni = opens[i].union(&opens[j]);
            if opens.binary_search(&uni).is_err() {
                return Err(Error::NotClosedUnderUnion(i, j));
            }
        }
    }
    Ok(FiniteSpace {
        labels: points.iter().map(|s| s.to_string()).collect(),
        opens,
    })
}

/// The Sierpinski space: points 0, 1 with opens {}, {1}, {0,1}.
pub fn sierpinski() -> FiniteSpace {
    validate_topology(
        &["0", "1"],
        &[
            BitSet::empty(2),
            BitSet::singleton(2, 1),
            BitSet::full(2),
        ],
    )
    .expect("sierpinski axioms")
}

/// Index of the pair (x, y) in the product point order.
pub fn pair_index(x: usize, y: usize, y_count: usize) -> usize {
    x * y_count + y
}

/// Product of two spaces under the topology generated by open rectangles.
pub fn product_space(x: &FiniteSpace, y: &FiniteSpace, guards: &Guards) -> Result<FiniteSpace> {
    let n = x.point_count() * y.point_count();
    guards.check_points(n)?;
    let mut labels = Vec::with_capacity(n);
    for lx in x.labels() {
        for ly in y.labels() {
            labels.push(format!("({lx},{ly})"));
        }
    }
    let mut rectangles = Vec::new();
    for u in x.opens() {
        for v in y.opens() {
            let mut rect = BitSet::empty(n);
            for i in u.iter() {
                for j in v.iter() {
                    rect.insert(pair_index(i, j, y.point_count()));
                }
            }
            rectangles.push(rect);
        }
    }
    let opens = close_under_subbasis(n, &rectangles, guards)?;
    let label_refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    validate_topology(&label_refs, &opens)
}

/// True iff the preimage of every open set of the target is open.
pub fn is_continuous(f: &PointMap) -> bool {
    f.target.opens().iter().all(|u| f.source.is_open(&f.preimage(u)))
}

/// All continuous maps Y -> Z, in lexicographic table order.
pub fn enumerate_continuous_maps(
    y: &Arc<FiniteSpace>,
    z: &Arc<FiniteSpace>,
    guards: &Guards,
) -> Result<Vec<PointMap>> {
    let ny = y.point_count();
    let nz = z.point_count();
    if ny == 0 {
        // C(empty, Z) has exactly one (empty) map.
        return Ok(vec![PointMap::new(y.clone(), z.clone(), vec![])]);
    }
    let total = (nz as u128).checked_pow(ny as u32).unwrap_or(u128::MAX);
    guards.check_candidates(usize::try_from(total).unwrap_or(usize::MAX))?;
    let mut out = Vec::new();
    let mut table = vec![0usize; ny];
    loop {
        let f = PointMap::new(y.clone(), z.clone(), table.clone());
        if is_continuous(&f) {
            out.push(f);
        }
        // next table in lexicographic order (last point varies fastest)
        let mut k = ny;
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            table[k] += 1;
            if table[k] < nz {
                break;
            }
            table[k] = 0;
        }
    }
}

/// All labeled topologies on point sets of size 1..=max_points.
pub fn enumerate_probe_catalog(max_points: usize, guards: &Guards) -> Result<ProbeCatalog> {
    guards.check("catalog points", max_points, 4)?;
    assert!(max_points >= 1);
    let mut spaces = Vec::new();
    for k in 1..=max_points {
        for space in enumerate_labeled_topologies(k) {
            spaces.push(Arc::new(space));
        }
    }
    Ok(ProbeCatalog {
        description: format!("all labeled topologies on <={max_points} points"),
        spaces,
    })
}

/// Brute force over all subset families on k labeled points, keeping those
/// that satisfy the topology axioms. Only feasible for k <= 4.
pub fn enumerate_labeled_topologies(k: usize) -> Vec<FiniteSpace> {
    assert!(k <= 4, "2^(2^k) family enumeration explodes past 4 points");
    let labels: Vec<String> = (0..k).map(|i| format!("p{i}")).collect();
    let label_refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    let nsubsets = 1usize << k;
    let subsets: Vec<BitSet> = (0..nsubsets as u64).map(|m| BitSet::from_mask(k, m)).collect();
    let empty_bit = 1u64;
    let full_bit = 1u64 << (nsubsets - 1);
    let mut out = Vec::new();
    for fam_mask in 0..(1u64 << nsubsets) {
        // every topology contains the empty and full sets
        if fam_mask & empty_bit == 0 || fam_mask & full_bit == 0 {
            continue;
        }
        let family: Vec<BitSet> = (0..nsubsets)
            .filter(|&i| fam_mask >> i & 1 == 1)
            .map(|i| subsets[i].clone())
            .collect();
        if let Ok(space) = validate_topology(&label_refs, &family) {
            out.push(space);
        }
    }
    out
}

/// Drop catalog entries that are homeomorphic to an earlier one.
pub fn dedup_up_to_homeomorphism(catalog: &ProbeCatalog) -> ProbeCatalog {
    let mut kept: Vec<Arc<FiniteSpace>> = Vec::new();
    for s in &catalog.spaces {
        if !kept.iter().any(|t| are_homeomorphic(s, t)) {
            kept.push(s.clone());
        }
    }
    ProbeCatalog {
        spaces: kept,
        description: format!("{} (up to homeomorphism)", catalog.description),
    }
}

fn are_homeomorphic(a: &FiniteSpace, b: &FiniteSpace) -> bool {
    let n = a.point_count();
    if n != b.point_count() || a.open_count() != b.open_count() {
        return false;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    permute_check(&mut perm, 0, a, b)
}

fn permute_check(perm: &mut Vec<usize>, k: usize, a: &FiniteSpace, b: &FiniteSpace) -> bool {
    if k == perm.len() {
        return a.opens().iter().all(|u| {
            let image = BitSet::from_indices(b.point_count(), u.iter().map(|i| perm[i]));
            b.is_open(&image)
        });
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        let found = permute_check(perm, k + 1, a, b);
        perm.swap(k, i);
        if found {
            return true;
        }
    }
    false
}

/// T0: every pair of distinct points is separated by some open set.
pub fn is_t0(space: &FiniteSpace) -> bool {
    let n = space.point_count();
    for i in 0..n {
        for j in i + 1..n {
            let separated = space
                .opens()
                .iter()
                .any(|u| u.contains(i) != u.contains(j));
            if !separated {
                return false;
            }
        }
    }
    true
}

/// Literal corecompactness check: for every point y and open U containing y
/// there is an open V containing y that is relatively compact in the subspace
/// U. Always true on finite spaces, but executed definition-by-definition so
/// it can serve as an oracle.
pub fn is_corecompact(space: &FiniteSpace) -> bool {
    for y in 0..space.point_count() {
        for u in space.opens() {
            if !u.contains(y) {
                continue;
            }
            let found = space
                .opens()
                .iter()
                .any(|v| v.contains(y) && relatively_compact_in(space, v, u));
            if !found {
                return false;
            }
        }
    }
    true
}

/// Is `k` relatively compact in the subspace on `u`? Checks every open cover
/// of the subspace for a finite subcover of `k`.
fn relatively_compact_in(space: &FiniteSpace, k: &BitSet, u: &BitSet) -> bool {
    if !k.is_subset(u) {
        // a cover of the subspace cannot reach points outside it
        return k.intersection(u) == *k;
    }
    let traces: Vec<BitSet> = canonicalize(
        space
            .opens()
            .iter()
            .map(|w| w.intersection(u))
            .collect(),
    );
    let c = traces.len();
    if c > 20 {
        // covers explode; subset check above already decides the finite case
        return true;
    }
    for cover_mask in 0u64..(1 << c) {
        let mut union = BitSet::empty(space.point_count());
        for (i, t) in traces.iter().enumerate() {
            if cover_mask >> i & 1 == 1 {
                union = union.union(t);
            }
        }
        if union != *u {
            continue; // not a cover of the subspace
        }
        // any subfamily of a finite cover is finite, so a finite subcover of k
        // exists iff the cover itself reaches all of k
        if !k.is_subset(&union) {
            return false;
        }
    }
    true
}
