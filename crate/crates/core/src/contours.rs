//! Contours of finite-volume configurations with the `+1` boundary condition.
//!
//! The minus spins of `σ_n` split into connected components; the edge
//! boundary of each component is a subcontour, and subcontours whose vertex
//! sets come within distance two of each other are chained into contours.
//! Improper balls are classified into the `2k+3` parts `∂^+_i` (`i ≥ 1`) and
//! `∂^-_i` (`i ≥ 0`), and the conditional Hamiltonian is rewritten in terms
//! of the part sizes.
//!
//! Balls are always taken with centers in `V_{n+1}` (every ball meeting
//! `V_n`). The larger ball set `M_{n+2}` only adds all-plus balls, so it
//! shifts the Hamiltonian by a configuration-independent multiple of
//! `U_{+,0}`; [`BallSet::Extended`] exposes that variant.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use serde::Serialize;

use crate::configurations::{Boundary, Configuration};
use crate::error::{Error, Result};
use crate::exact::{int, Exact};
use crate::model::{BallClass, CouplingConstants, Couplings, Spin};
use crate::tree::{distance, Edge, IndexedVolume, TreeParams, Vertex};

/// Cap on minus subsets enumerated by [`count_contours_through`].
pub const CONTOUR_ENUMERATION_CAP: u128 = 1 << 20;

/// A maximal connected set of minus vertices.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct MinusComponent {
    pub vertices: BTreeSet<Vertex>,
    pub edges: BTreeSet<Edge>,
}

/// Edge boundary of a minus component, with the component as its interior.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub struct Subcontour {
    pub edges: BTreeSet<Edge>,
    pub interior: BTreeSet<Vertex>,
}

impl Subcontour {
    /// All endpoints of the boundary edges.
    pub fn vertex_set(&self) -> BTreeSet<Vertex> {
        self.edges
            .iter()
            .flat_map(|e| e.endpoints().into_iter().cloned())
            .collect()
    }
}

/// A maximal chain of pairwise-adjacent subcontours.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Contour {
    pub subcontours: Vec<Subcontour>,
    pub support: BTreeSet<Edge>,
    pub interior: BTreeSet<Vertex>,
}

impl Contour {
    fn from_subcontours(mut subcontours: Vec<Subcontour>) -> Self {
        subcontours.sort();
        let support = subcontours.iter().flat_map(|s| s.edges.iter().cloned()).collect();
        let interior = subcontours.iter().flat_map(|s| s.interior.iter().cloned()).collect();
        Contour {
            subcontours,
            support,
            interior,
        }
    }

    /// `V(supp γ)`: endpoints of the support edges.
    pub fn vertex_set(&self) -> BTreeSet<Vertex> {
        self.support
            .iter()
            .flat_map(|e| e.endpoints().into_iter().cloned())
            .collect()
    }

    /// Every vertex the contour occupies: its interior and its support endpoints.
    pub fn closure(&self) -> BTreeSet<Vertex> {
        let mut out = self.vertex_set();
        out.extend(self.interior.iter().cloned());
        out
    }

    /// `true` iff the ball centered at `center` meets the contour.
    pub fn meets_ball(&self, center: &Vertex, k: usize) -> bool {
        let closure = self.closure();
        closure.contains(center) || center.neighbors(k).iter().any(|y| closure.contains(y))
    }

    fn smallest_vertex(&self) -> Option<&Vertex> {
        self.interior.iter().next()
    }
}

/// `min d(x, y)` over the two vertex sets.
fn set_distance(a: &BTreeSet<Vertex>, b: &BTreeSet<Vertex>) -> usize {
    let mut best = usize::MAX;
    for x in a {
        for y in b {
            best = best.min(distance(x, y));
            if best == 0 {
                return 0;
            }
        }
    }
    best
}

pub fn subcontour_distance(a: &Subcontour, b: &Subcontour) -> usize {
    set_distance(&a.vertex_set(), &b.vertex_set())
}

pub fn contour_distance(a: &Contour, b: &Contour) -> usize {
    set_distance(&a.vertex_set(), &b.vertex_set())
}

fn require_plus_boundary(config: &Configuration) -> Result<()> {
    if *config.boundary() != Boundary::Plus {
        return Err(Error::Unsupported(
            "contours are extracted under the +1 boundary condition; flip the configuration and the field for -1".into(),
        ));
    }
    Ok(())
}

/// Connected components of the minus set, ordered by smallest vertex.
pub fn minus_components(config: &Configuration) -> Result<Vec<MinusComponent>> {
    require_plus_boundary(config)?;
    let k = config.k();
    let minus = config.minus_set();
    let mut seen: BTreeSet<Vertex> = BTreeSet::new();
    let mut out = Vec::new();
    for start in &minus {
        if seen.contains(start) {
            continue;
        }
        let mut vertices = BTreeSet::new();
        let mut edges = BTreeSet::new();
        let mut queue = VecDeque::from([start.clone()]);
        seen.insert(start.clone());
        while let Some(x) = queue.pop_front() {
            for y in x.neighbors(k) {
                if minus.contains(&y) {
                    edges.insert(Edge::new_unchecked(x.clone(), y.clone()));
                    if seen.insert(y.clone()) {
                        queue.push_back(y);
                    }
                }
            }
            vertices.insert(x);
        }
        out.push(MinusComponent { vertices, edges });
    }
    Ok(out)
}

/// Edges leaving the component. For components with at least one edge this
/// is exactly the set of outside edges sharing an endpoint with a component
/// edge; a lone vertex gets its incident edges.
pub fn subcontour_of(component: &MinusComponent, k: usize) -> Subcontour {
    let mut edges = BTreeSet::new();
    for x in &component.vertices {
        for y in x.neighbors(k) {
            if !component.vertices.contains(&y) {
                edges.insert(Edge::new_unchecked(x.clone(), y));
            }
        }
    }
    Subcontour {
        edges,
        interior: component.vertices.clone(),
    }
}

/// Group subcontours into contours: components of the "distance at most 2" relation.
pub fn assemble_contours(subcontours: Vec<Subcontour>) -> Vec<Contour> {
    let n = subcontours.len();
    let vsets: Vec<BTreeSet<Vertex>> = subcontours.iter().map(|s| s.vertex_set()).collect();
    let mut label: Vec<Option<usize>> = vec![None; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for start in 0..n {
        if label[start].is_some() {
            continue;
        }
        let g = groups.len();
        label[start] = Some(g);
        let mut members = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(a) = queue.pop_front() {
            for b in 0..n {
                if label[b].is_none() && set_distance(&vsets[a], &vsets[b]) <= 2 {
                    label[b] = Some(g);
                    members.push(b);
                    queue.push_back(b);
                }
            }
        }
        groups.push(members);
    }
    let mut contours: Vec<Contour> = groups
        .into_iter()
        .map(|members| Contour::from_subcontours(members.into_iter().map(|i| subcontours[i].clone()).collect()))
        .collect();
    contours.sort_by(|a, b| a.smallest_vertex().cmp(&b.smallest_vertex()));
    contours
}

/// All contours of a `+1`-boundary configuration.
pub fn extract_contours(config: &Configuration) -> Result<Vec<Contour>> {
    let k = config.k();
    let subs = minus_components(config)?
        .iter()
        .map(|c| subcontour_of(c, k))
        .collect();
    Ok(assemble_contours(subs))
}

/// Improper balls (centers in `V_{n+1}`) split by class.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct BoundaryPartition {
    pub k: usize,
    pub parts: BTreeMap<BallClass, BTreeSet<Vertex>>,
}

impl BoundaryPartition {
    /// `|∂^ε_i|`.
    pub fn count(&self, cls: &BallClass) -> usize {
        self.parts.get(cls).map_or(0, |s| s.len())
    }

    /// The `2k+3` part labels: `(+, 1..=k+1)` then `(-, 0..=k+1)`.
    pub fn labels(k: usize) -> Vec<BallClass> {
        (1..=k + 1)
            .map(|i| BallClass::new(Spin::Plus, i))
            .chain((0..=k + 1).map(|i| BallClass::new(Spin::Minus, i)))
            .collect()
    }

    pub fn improper_centers(&self) -> BTreeSet<Vertex> {
        self.parts.values().flat_map(|s| s.iter().cloned()).collect()
    }

    pub fn len(&self) -> usize {
        self.parts.values().map(|s| s.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Classify every improper ball by center spin and number of minus neighbors.
///
/// The reference ball is all-plus, the unique ground-state ball in the interior of `A_{+,0}`.
pub fn boundary_partition(config: &Configuration) -> Result<BoundaryPartition> {
    require_plus_boundary(config)?;
    let k = config.k();
    let mut parts: BTreeMap<BallClass, BTreeSet<Vertex>> = BoundaryPartition::labels(k)
        .into_iter()
        .map(|c| (c, BTreeSet::new()))
        .collect();
    for ball in config.volume().interacting_balls() {
        let (c, nb) = config.resolved_ball_spins(ball)?;
        let minus_nb = nb.iter().filter(|s| **s == Spin::Minus).count();
        // Ω_i: center +1 with i minus neighbors; Ω^-_i its flip, so i counts plus neighbors.
        let cls = match c {
            Spin::Plus if minus_nb == 0 => continue,
            Spin::Plus => BallClass::new(Spin::Plus, minus_nb),
            Spin::Minus => BallClass::new(Spin::Minus, k + 1 - minus_nb),
        };
        parts.entry(cls).or_default().insert(ball.center.clone());
    }
    Ok(BoundaryPartition { k, parts })
}

/// `|γ^ε_i|` and `|γ|`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct ContourStats {
    pub gamma_counts: BTreeMap<BallClass, usize>,
    pub size: usize,
}

/// Improper balls meeting the contour, counted per part.
pub fn contour_stats(gamma: &Contour, partition: &BoundaryPartition) -> ContourStats {
    let k = partition.k;
    let closure = gamma.closure();
    let meets = |c: &Vertex| closure.contains(c) || c.neighbors(k).iter().any(|y| closure.contains(y));
    let gamma_counts: BTreeMap<BallClass, usize> = partition
        .parts
        .iter()
        .map(|(cls, centers)| (*cls, centers.iter().filter(|c| meets(c)).count()))
        .collect();
    let size = gamma_counts.values().sum();
    ContourStats { gamma_counts, size }
}

/// Which balls enter the contour representation of the Hamiltonian.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BallSet {
    /// Centers in `V_{n+1}`: exactly the balls meeting `V_n`.
    Interacting,
    /// Centers in `V_{n+3}` (`M_{n+2}`); the extra balls are all-plus.
    Extended,
}

impl BallSet {
    pub fn center_radius(self, n: usize) -> usize {
        match self {
            BallSet::Interacting => n + 1,
            BallSet::Extended => n + 3,
        }
    }

    pub fn ball_count(self, params: TreeParams) -> u128 {
        params.ball_size(self.center_radius(params.n))
    }
}

/// The conditional Hamiltonian rewritten through the boundary partition:
/// `Σ_i (U_{+,i} - U_{+,0}) |∂^+_i| + Σ_i (U_{-,i} - U_{+,0}) |∂^-_i| + |M| U_{+,0}`.
pub fn contour_hamiltonian(config: &Configuration, j: &CouplingConstants, ball_set: BallSet) -> Result<Exact> {
    let k = config.k();
    let partition = boundary_partition(config)?;
    let table = Couplings::Constant(j.clone()).energy_table(k);
    let ground = table
        .get(&BallClass::new(Spin::Plus, 0))
        .expect("(+,0) is always tabulated")
        .clone();
    let mut total = Exact::from_integer(ball_set.ball_count(config.params()).into()) * &ground;
    for cls in BoundaryPartition::labels(k) {
        let n = partition.count(&cls) as i64;
        if n > 0 {
            total += (table.get(&cls).expect("label is tabulated") - &ground) * int(n);
        }
    }
    Ok(total)
}

/// Erase a contour: every interior spin becomes `+1`.
pub fn chi_gamma(config: &Configuration, gamma: &Contour) -> Result<Configuration> {
    if !extract_contours(config)?.iter().any(|c| c.support == gamma.support) {
        return Err(Error::Precondition("the given contour is not a contour of the configuration".into()));
    }
    let volume = config.volume().clone();
    let spins = volume
        .vertices()
        .iter()
        .zip(config.spins())
        .map(|(v, s)| if gamma.interior.contains(v) { Spin::Plus } else { *s })
        .collect();
    Configuration::new(volume, spins, Boundary::Plus)
}

/// Rebuild the configuration generated by a collection of contours.
pub fn config_from_contours(collection: &[Contour], params: TreeParams) -> Result<Configuration> {
    let volume = Arc::new(IndexedVolume::new(params));
    for (idx, gamma) in collection.iter().enumerate() {
        if gamma.interior.is_empty() {
            return Err(Error::InvalidCollection(format!("contour {idx} has an empty interior")));
        }
        if let Some(v) = gamma.interior.iter().find(|v| !volume.contains(v)) {
            return Err(Error::InvalidCollection(format!(
                "contour {idx} has interior vertex \"{v}\" outside V_{}",
                params.n
            )));
        }
        if let Some(v) = gamma.vertex_set().iter().find(|v| v.len() > params.n + 1) {
            return Err(Error::InvalidCollection(format!(
                "contour {idx} reaches \"{v}\" outside V_{}",
                params.n + 1
            )));
        }
        let alone = Configuration::new(
            volume.clone(),
            volume
                .vertices()
                .iter()
                .map(|v| if gamma.interior.contains(v) { Spin::Minus } else { Spin::Plus })
                .collect(),
            Boundary::Plus,
        )?;
        let rebuilt = extract_contours(&alone)?;
        if rebuilt.len() != 1 || rebuilt[0] != *gamma {
            return Err(Error::InvalidCollection(format!(
                "contour {idx} is not the contour generated by its interior"
            )));
        }
    }
    for (a, ga) in collection.iter().enumerate() {
        for (b, gb) in collection.iter().enumerate().skip(a + 1) {
            let d = contour_distance(ga, gb);
            if d <= 2 {
                return Err(Error::InvalidCollection(format!(
                    "contours {a} and {b} are at distance {d} <= 2"
                )));
            }
        }
    }
    let spins = volume
        .vertices()
        .iter()
        .map(|v| {
            if collection.iter().any(|g| g.interior.contains(v)) {
                Spin::Minus
            } else {
                Spin::Plus
            }
        })
        .collect();
    Configuration::new(volume, spins, Boundary::Plus)
}

/// Number of distinct contours through a vertex, by size.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct ContourCounts {
    pub vertex: Vertex,
    pub volume_radius: usize,
    pub r_max: usize,
    /// `r -> N_r(x)` for every observed `r <= r_max`.
    pub counts: BTreeMap<usize, u64>,
}

impl ContourCounts {
    /// `(4e)^{2r}`.
    pub fn bound(r: usize) -> f64 {
        (4.0 * std::f64::consts::E).powi(2 * r as i32)
    }

    /// Sizes at which `N_r(x) > (4e)^{2r}`.
    pub fn violations(&self) -> Vec<usize> {
        self.counts
            .iter()
            .filter(|(r, n)| **n as f64 > Self::bound(**r))
            .map(|(r, _)| *r)
            .collect()
    }
}

/// Enumerate every minus subset of `V_m`, collect the distinct contours (by
/// support) whose vertex set contains `x`, and count them by `|γ|`.
pub fn count_contours_through(x: &Vertex, r_max: usize, params: TreeParams) -> Result<ContourCounts> {
    if params.k != 2 {
        return Err(Error::Unsupported(format!(
            "contour counting is stated for k = 2 only (got k = {})",
            params.k
        )));
    }
    let n = params.volume_size();
    let needed = if n >= 127 { u128::MAX } else { 1u128 << n };
    if needed > CONTOUR_ENUMERATION_CAP {
        return Err(Error::Resource {
            needed,
            cap: CONTOUR_ENUMERATION_CAP,
        });
    }
    let volume = Arc::new(IndexedVolume::new(params));
    let mut seen: BTreeMap<BTreeSet<Edge>, usize> = BTreeMap::new();
    for mask in 0..needed as u64 {
        let config = Configuration::from_mask(volume.clone(), mask, Boundary::Plus)?;
        let contours = extract_contours(&config)?;
        if contours.is_empty() {
            continue;
        }
        let partition = boundary_partition(&config)?;
        for gamma in contours {
            if gamma.vertex_set().contains(x) && !seen.contains_key(&gamma.support) {
                let size = contour_stats(&gamma, &partition).size;
                seen.insert(gamma.support, size);
            }
        }
    }
    let mut counts = BTreeMap::new();
    for size in seen.into_values().filter(|s| *s <= r_max) {
        *counts.entry(size).or_insert(0u64) += 1;
    }
    Ok(ContourCounts {
        vertex: x.clone(),
        volume_radius: params.n,
        r_max,
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configurations::conditional_hamiltonian;
    use crate::exact::ratio;
    use crate::tree::enumerate_volume;

    fn v(s: &str) -> Vertex {
        s.parse().unwrap()
    }

    fn e(a: &str, b: &str) -> Edge {
        Edge::new(v(a), v(b)).unwrap()
    }

    fn p(n: usize) -> TreeParams {
        TreeParams::new(2, n).unwrap()
    }

    fn minus(n: usize, set: &[&str]) -> Configuration {
        let vs: Vec<Vertex> = set.iter().map(|s| v(s)).collect();
        Configuration::with_minus_set(p(n), &vs).unwrap()
    }

    /// The edge-adjacency form of the edge boundary, for components with edges.
    fn literal_edge_boundary(component: &MinusComponent, k: usize, radius: usize) -> BTreeSet<Edge> {
        let mut all = BTreeSet::new();
        for x in enumerate_volume(TreeParams { k, n: radius }) {
            for y in x.children(k) {
                all.insert(Edge::new_unchecked(x.clone(), y));
            }
        }
        all.into_iter()
            .filter(|l1| !component.edges.contains(l1))
            .filter(|l1| {
                component.edges.iter().any(|l2| {
                    let shared = l1.endpoints().iter().filter(|a| l2.contains(a)).count();
                    shared == 1
                })
            })
            .collect()
    }

    #[test]
    fn components_examples() {
        assert!(minus_components(&minus(2, &[])).unwrap().is_empty());
        let c = minus_components(&minus(2, &["", "1"])).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].vertices.len(), 2);
        assert_eq!(c[0].edges.len(), 1);
        let c = minus_components(&minus(2, &["2", "3"])).unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.iter().all(|x| x.vertices.len() == 1 && x.edges.is_empty()));
        assert!(c[0].vertices.contains(&v("2")));
    }

    #[test]
    fn minus_boundary_is_rejected() {
        let c = Configuration::constant(p(1), Spin::Minus);
        assert!(matches!(minus_components(&c), Err(Error::Unsupported(_))));
    }

    #[test]
    fn subcontour_examples() {
        let comp = &minus_components(&minus(2, &["", "1"])).unwrap()[0];
        let expect: BTreeSet<Edge> = [e("", "2"), e("", "3"), e("1", "12"), e("1", "13")].into_iter().collect();
        assert_eq!(subcontour_of(comp, 2).edges, expect);

        let comp = &minus_components(&minus(2, &["2"])).unwrap()[0];
        let expect: BTreeSet<Edge> = [e("", "2"), e("2", "21"), e("2", "23")].into_iter().collect();
        assert_eq!(subcontour_of(comp, 2).edges, expect);

        let comp = &minus_components(&minus(2, &["", "1", "2", "3"])).unwrap()[0];
        let s = subcontour_of(comp, 2);
        assert_eq!(s.edges.len(), 6);
        assert!(s.edges.iter().all(|e| e.inner().len() == 1 && e.outer().len() == 2));
    }

    #[test]
    fn vertex_form_agrees_with_edge_form_when_component_has_edges() {
        let vol = Arc::new(IndexedVolume::new(p(2)));
        for mask in 0..1u64 << 10 {
            let c = Configuration::from_mask(vol.clone(), mask, Boundary::Plus).unwrap();
            for comp in minus_components(&c).unwrap() {
                if !comp.edges.is_empty() {
                    assert_eq!(subcontour_of(&comp, 2).edges, literal_edge_boundary(&comp, 2, 4));
                }
            }
        }
    }

    #[test]
    fn assemble_examples() {
        let cs = extract_contours(&minus(2, &["2", "3"])).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].subcontours.len(), 2);
        assert_eq!(cs[0].support.len(), 6);

        let cs = extract_contours(&minus(2, &[""])).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].support.len(), 3);

        // brute force: merge iff some pair of support vertices is within distance 2
        let cs = extract_contours(&minus(2, &["12", "32"])).unwrap();
        let a = subcontour_of(&minus_components(&minus(2, &["12"])).unwrap()[0], 2);
        let b = subcontour_of(&minus_components(&minus(2, &["32"])).unwrap()[0], 2);
        let mut brute = usize::MAX;
        for x in a.vertex_set() {
            for y in b.vertex_set() {
                brute = brute.min(distance(&x, &y));
            }
        }
        assert_eq!(brute, 2);
        assert_eq!(cs.len(), if brute <= 2 { 1 } else { 2 });
    }

    #[test]
    fn far_contours_stay_separate() {
        let cs = extract_contours(&minus(3, &["121", "323"])).unwrap();
        assert_eq!(cs.len(), 2);
        assert!(contour_distance(&cs[0], &cs[1]) > 2);
    }

    #[test]
    fn partition_examples() {
        let part = boundary_partition(&minus(2, &[""])).unwrap();
        assert_eq!(part.count(&BallClass::new(Spin::Plus, 1)), 3);
        assert_eq!(part.count(&BallClass::new(Spin::Minus, 3)), 1);
        assert_eq!(part.len(), 4);

        assert!(boundary_partition(&minus(2, &[])).unwrap().is_empty());

        let part = boundary_partition(&minus(2, &["2", "3"])).unwrap();
        assert_eq!(part.count(&BallClass::new(Spin::Plus, 2)), 1);
        assert_eq!(part.count(&BallClass::new(Spin::Plus, 1)), 4);
        assert_eq!(part.count(&BallClass::new(Spin::Minus, 3)), 2);
        assert_eq!(part.len(), 7);
    }

    #[test]
    fn stats_examples() {
        let c = minus(2, &[""]);
        let gamma = &extract_contours(&c).unwrap()[0];
        assert_eq!(contour_stats(gamma, &boundary_partition(&c).unwrap()).size, 4);

        let c = minus(2, &["2", "3"]);
        let gamma = &extract_contours(&c).unwrap()[0];
        let stats = contour_stats(gamma, &boundary_partition(&c).unwrap());
        assert_eq!(stats.size, 7);
        assert_eq!(stats.gamma_counts[&BallClass::new(Spin::Minus, 3)], 2);
    }

    #[test]
    fn fully_minus_core_balls_belong_to_the_contour() {
        // The ball at the root is (-,0): it contains no support edge but is erased with γ.
        let c = minus(2, &["", "1", "2", "3"]);
        let gamma = &extract_contours(&c).unwrap()[0];
        let stats = contour_stats(gamma, &boundary_partition(&c).unwrap());
        assert_eq!(stats.gamma_counts[&BallClass::new(Spin::Minus, 0)], 1);
        assert_eq!(stats.size, 10);
    }

    #[test]
    fn contour_hamiltonian_examples() {
        let j = CouplingConstants::from_ints(-1, 0, -1);
        assert_eq!(contour_hamiltonian(&minus(2, &[""]), &j, BallSet::Interacting).unwrap(), int(-47));
        assert_eq!(contour_hamiltonian(&minus(2, &[]), &j, BallSet::Interacting).unwrap(), int(-55));
        let zero = CouplingConstants::from_ints(0, 0, 0);
        assert_eq!(contour_hamiltonian(&minus(2, &["1", "23"]), &zero, BallSet::Interacting).unwrap(), int(0));
    }

    #[test]
    fn contour_hamiltonian_matches_conditional() {
        let j = CouplingConstants::new(ratio(-7, 3), ratio(2, 5), ratio(-1, 4));
        let c: Couplings = j.clone().into();
        let vol = Arc::new(IndexedVolume::new(p(2)));
        for mask in 0..1u64 << 10 {
            let cfg = Configuration::from_mask(vol.clone(), mask, Boundary::Plus).unwrap();
            assert_eq!(
                contour_hamiltonian(&cfg, &j, BallSet::Interacting).unwrap(),
                conditional_hamiltonian(&cfg, &c).unwrap()
            );
        }
    }

    #[test]
    fn extended_ball_set_is_a_constant_shift() {
        let j = CouplingConstants::from_ints(-1, 0, -1);
        let a = minus(2, &["1"]);
        let b = minus(2, &["2", "31"]);
        let da = contour_hamiltonian(&a, &j, BallSet::Extended).unwrap() - contour_hamiltonian(&a, &j, BallSet::Interacting).unwrap();
        let db = contour_hamiltonian(&b, &j, BallSet::Extended).unwrap() - contour_hamiltonian(&b, &j, BallSet::Interacting).unwrap();
        assert_eq!(da, db);
        // |V_5| - |V_3| = 94 - 22 all-plus balls at -5/2
        assert_eq!(da, int(72) * ratio(-5, 2));
    }

    #[test]
    fn chi_gamma_examples() {
        let c = minus(2, &[""]);
        let gamma = extract_contours(&c).unwrap().remove(0);
        assert_eq!(chi_gamma(&c, &gamma).unwrap(), minus(2, &[]));

        let c = minus(3, &["121", "323"]);
        let cs = extract_contours(&c).unwrap();
        let erased = chi_gamma(&c, &cs[0]).unwrap();
        let rest = extract_contours(&erased).unwrap();
        assert_eq!(rest, vec![cs[1].clone()]);

        let other = minus(2, &["1"]);
        assert!(matches!(chi_gamma(&other, &gamma), Err(Error::Precondition(_))));
    }

    #[test]
    fn from_contours_examples() {
        assert_eq!(config_from_contours(&[], p(2)).unwrap(), minus(2, &[]));
        let root = minus(2, &[""]);
        let gamma = extract_contours(&root).unwrap();
        assert_eq!(config_from_contours(&gamma, p(2)).unwrap(), root);
    }

    #[test]
    fn from_contours_rejects_invalid_collections() {
        let a = extract_contours(&minus(2, &["1"])).unwrap().remove(0);
        let b = extract_contours(&minus(2, &["2"])).unwrap().remove(0);
        assert!(matches!(config_from_contours(&[a.clone(), b], p(2)), Err(Error::InvalidCollection(_))));
        // interior outside V_1
        let deep = extract_contours(&minus(2, &["12"])).unwrap().remove(0);
        assert!(matches!(config_from_contours(&[deep], p(1)), Err(Error::InvalidCollection(_))));
        // tampered support
        let mut bad = a;
        bad.support.insert(e("3", "31"));
        assert!(matches!(config_from_contours(&[bad], p(2)), Err(Error::InvalidCollection(_))));
    }

    #[test]
    fn improper_balls_split_by_contour_and_round_trip() {
        let vol = Arc::new(IndexedVolume::new(p(2)));
        for mask in 0..1u64 << 10 {
            let cfg = Configuration::from_mask(vol.clone(), mask, Boundary::Plus).unwrap();
            let part = boundary_partition(&cfg).unwrap();
            let contours = extract_contours(&cfg).unwrap();
            for cls in BoundaryPartition::labels(2) {
                let split: usize = contours
                    .iter()
                    .map(|g| contour_stats(g, &part).gamma_counts[&cls])
                    .sum();
                assert_eq!(split, part.count(&cls), "mask {mask} class {cls}");
            }
            for (a, ga) in contours.iter().enumerate() {
                for gb in contours.iter().skip(a + 1) {
                    assert!(contour_distance(ga, gb) > 2);
                }
            }
            assert_eq!(config_from_contours(&contours, p(2)).unwrap(), cfg);
        }
    }

    #[test]
    fn counting_examples() {
        let counts = count_contours_through(&Vertex::root(), 10, p(1)).unwrap();
        assert!(counts.counts.get(&4).copied().unwrap_or(0) >= 1);
        assert!(counts.violations().is_empty());
        // a vertex far from the volume is never on a contour
        let far = count_contours_through(&v("1212"), 10, p(1)).unwrap();
        assert!(far.counts.is_empty());
        assert!(matches!(
            count_contours_through(&Vertex::root(), 4, TreeParams::new(3, 1).unwrap()),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            count_contours_through(&Vertex::root(), 4, p(3)),
            Err(Error::Resource { .. })
        ));
    }
}
