//! Finite-volume spin configurations, the configuration families built from
//! index-two subgroups, Hamiltonians and ground-state checks.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{int, Exact};
use crate::model::{in_peierls_region, BallClass, CouplingConstants, Couplings, Spin};
use crate::tree::{enumerate_sphere, CosetSubgroup, IndexedVolume, ResolvedBall, TreeParams, Vertex, VolumeSite};

/// Cap on exhaustive sweeps performed with exact arithmetic.
pub const EXACT_SWEEP_CAP: u128 = 1 << 20;

/// Spins outside the finite volume.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Boundary {
    Plus,
    Minus,
    /// Spins on `W_{n+1} ∪ W_{n+2}`: every outside vertex a ball meeting `V_n` touches.
    Explicit(BTreeMap<Vertex, Spin>),
}

impl Boundary {
    pub fn constant(s: Spin) -> Self {
        match s {
            Spin::Plus => Boundary::Plus,
            Spin::Minus => Boundary::Minus,
        }
    }

    pub fn flipped(&self) -> Self {
        match self {
            Boundary::Plus => Boundary::Minus,
            Boundary::Minus => Boundary::Plus,
            Boundary::Explicit(m) => {
                Boundary::Explicit(m.iter().map(|(v, s)| (v.clone(), s.flip())).collect())
            }
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Boundary::Plus => "plus",
            Boundary::Minus => "minus",
            Boundary::Explicit(_) => "explicit",
        }
    }
}

/// A spin assignment on `V_n` together with its boundary condition.
#[derive(Clone, Debug)]
pub struct Configuration {
    volume: Arc<IndexedVolume>,
    spins: Vec<Spin>,
    boundary: Boundary,
}

impl PartialEq for Configuration {
    fn eq(&self, other: &Self) -> bool {
        self.volume.params() == other.volume.params()
            && self.spins == other.spins
            && self.boundary == other.boundary
    }
}

impl Eq for Configuration {}

impl Configuration {
    pub fn new(volume: Arc<IndexedVolume>, spins: Vec<Spin>, boundary: Boundary) -> Result<Self> {
        if spins.len() != volume.len() {
            return Err(Error::InvalidConfig(format!(
                "{} spins given for a volume of {} vertices",
                spins.len(),
                volume.len()
            )));
        }
        if let Boundary::Explicit(map) = &boundary {
            let params = volume.params();
            let shell = boundary_shell(params);
            let keys: BTreeSet<Vertex> = map.keys().cloned().collect();
            if keys != shell {
                return Err(Error::InvalidConfig(format!(
                    "explicit boundary must cover exactly the {} vertices of W_{} and W_{}",
                    shell.len(),
                    params.n + 1,
                    params.n + 2
                )));
            }
        }
        Ok(Configuration {
            volume,
            spins,
            boundary,
        })
    }

    pub fn from_fn(params: TreeParams, boundary: Boundary, f: impl Fn(&Vertex) -> Spin) -> Result<Self> {
        let volume = Arc::new(IndexedVolume::new(params));
        let spins = volume.vertices().iter().map(f).collect();
        Self::new(volume, spins, boundary)
    }

    pub fn constant(params: TreeParams, s: Spin) -> Self {
        Self::from_fn(params, Boundary::constant(s), |_| s).expect("constant configuration is valid")
    }

    /// Bit `i` of `mask` set means vertex `i` (canonical order) carries `-1`.
    pub fn from_mask(volume: Arc<IndexedVolume>, mask: u64, boundary: Boundary) -> Result<Self> {
        let spins = (0..volume.len())
            .map(|i| if mask >> i & 1 == 1 { Spin::Minus } else { Spin::Plus })
            .collect();
        Self::new(volume, spins, boundary)
    }

    /// The `+1`-boundary configuration whose minus set is `minus`.
    pub fn with_minus_set<'a>(params: TreeParams, minus: impl IntoIterator<Item = &'a Vertex>) -> Result<Self> {
        let volume = Arc::new(IndexedVolume::new(params));
        let mut spins = vec![Spin::Plus; volume.len()];
        for v in minus {
            let i = volume
                .index_of(v)
                .ok_or_else(|| Error::InvalidConfig(format!("vertex \"{v}\" outside V_{}", params.n)))?;
            spins[i] = Spin::Minus;
        }
        Self::new(volume, spins, Boundary::Plus)
    }

    pub fn params(&self) -> TreeParams {
        self.volume.params()
    }

    pub fn k(&self) -> usize {
        self.volume.k()
    }

    pub fn radius(&self) -> usize {
        self.volume.radius()
    }

    pub fn volume(&self) -> &Arc<IndexedVolume> {
        &self.volume
    }

    pub fn spins(&self) -> &[Spin] {
        &self.spins
    }

    pub fn boundary(&self) -> &Boundary {
        &self.boundary
    }

    pub fn to_mask(&self) -> u64 {
        self.spins
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Spin::Minus)
            .fold(0u64, |m, (i, _)| m | 1 << i)
    }

    /// Spin at any vertex the configuration determines, reading the boundary outside `V_n`.
    pub fn spin(&self, x: &Vertex) -> Result<Spin> {
        if let Some(i) = self.volume.index_of(x) {
            return Ok(self.spins[i]);
        }
        match &self.boundary {
            Boundary::Plus => Ok(Spin::Plus),
            Boundary::Minus => Ok(Spin::Minus),
            Boundary::Explicit(m) => m
                .get(x)
                .copied()
                .ok_or_else(|| Error::IncompleteBoundary(x.to_string())),
        }
    }

    /// Center spin and neighbor spins of a ball resolved against this configuration's volume.
    pub fn resolved_ball_spins(&self, ball: &ResolvedBall) -> Result<(Spin, Vec<Spin>)> {
        let mut spins = ball.sites.iter().map(|site| match site {
            VolumeSite::Inner(i) => Ok(self.spins[*i]),
            VolumeSite::Outer(v) => self.spin(v),
        });
        let center = spins.next().expect("a ball has a center")?;
        Ok((center, spins.collect::<Result<Vec<_>>>()?))
    }

    pub fn with_spin(&self, x: &Vertex, s: Spin) -> Result<Self> {
        let i = self
            .volume
            .index_of(x)
            .ok_or_else(|| Error::InvalidConfig(format!("vertex \"{x}\" outside the volume")))?;
        let mut out = self.clone();
        out.spins[i] = s;
        Ok(out)
    }

    /// Global spin flip, boundary included.
    pub fn flipped(&self) -> Self {
        Configuration {
            volume: self.volume.clone(),
            spins: self.spins.iter().map(|s| s.flip()).collect(),
            boundary: self.boundary.flipped(),
        }
    }

    pub fn minus_set(&self) -> BTreeSet<Vertex> {
        self.volume
            .vertices()
            .iter()
            .zip(&self.spins)
            .filter(|(_, s)| **s == Spin::Minus)
            .map(|(v, _)| v.clone())
            .collect()
    }

    fn same_frame(&self, other: &Configuration) -> bool {
        self.volume.params() == other.volume.params() && self.boundary == other.boundary
    }
}

/// `W_{n+1} ∪ W_{n+2}`, the support of an explicit boundary.
pub fn boundary_shell(params: TreeParams) -> BTreeSet<Vertex> {
    enumerate_sphere(params.k, params.n + 1)
        .into_iter()
        .chain(enumerate_sphere(params.k, params.n + 2))
        .collect()
}

/// Infinite-volume configuration families.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum ConfigKind {
    Constant(Spin),
    /// `l0` on `H_A`, `l1` on its complement.
    HaPeriodic { subgroup: CosetSubgroup, l0: Spin, l1: Spin },
    /// `values[i][j]` where `x_↓ ∈ H_i` and `x ∈ H_j`; the root takes `values[0][0]`.
    HaWeaklyPeriodic { subgroup: CosetSubgroup, values: [[Spin; 2]; 2] },
    /// `s_even` on even-length words, its opposite on odd-length words.
    Alternating(Spin),
}

impl ConfigKind {
    pub fn spin_at(&self, x: &Vertex) -> Spin {
        match self {
            ConfigKind::Constant(s) => *s,
            ConfigKind::HaPeriodic { subgroup, l0, l1 } => {
                if subgroup.coset(x) == 0 {
                    *l0
                } else {
                    *l1
                }
            }
            ConfigKind::HaWeaklyPeriodic { subgroup, values } => match x.parent() {
                None => values[0][0],
                Some(p) => values[subgroup.coset(&p) as usize][subgroup.coset(x) as usize],
            },
            ConfigKind::Alternating(s_even) => {
                if x.is_even() {
                    *s_even
                } else {
                    s_even.flip()
                }
            }
        }
    }
}

/// Restrict a configuration family to `V_n`, with the family itself as the boundary.
pub fn generate(kind: &ConfigKind, params: TreeParams) -> Result<Configuration> {
    let k = params.k;
    let check = |s: &CosetSubgroup| -> Result<()> {
        if s.generators().iter().any(|&g| g > k + 1) {
            return Err(Error::InvalidSubgroup(format!(
                "generator set {:?} not inside 1..={}",
                s.generators(),
                k + 1
            )));
        }
        Ok(())
    };
    let boundary = match kind {
        ConfigKind::Constant(s) => Boundary::constant(*s),
        other => {
            if let ConfigKind::HaPeriodic { subgroup, .. } | ConfigKind::HaWeaklyPeriodic { subgroup, .. } = other {
                check(subgroup)?;
            }
            Boundary::Explicit(
                boundary_shell(params)
                    .into_iter()
                    .map(|v| {
                        let s = other.spin_at(&v);
                        (v, s)
                    })
                    .collect(),
            )
        }
    };
    Configuration::from_fn(params, boundary, |x| kind.spin_at(x))
}

fn ball_spins(config: &Configuration, center: &Vertex) -> Result<(Spin, Vec<Spin>)> {
    let k = config.k();
    let c = config.spin(center)?;
    let nb = center
        .neighbors(k)
        .iter()
        .map(|y| config.spin(y))
        .collect::<Result<Vec<_>>>()?;
    Ok((c, nb))
}

/// Class of the ball centered at `center`.
pub fn ball_class_at(config: &Configuration, couplings: &Couplings, center: &Vertex) -> Result<BallClass> {
    let (c, nb) = ball_spins(config, center)?;
    couplings.class_at(center, c, &nb, config.k())
}

/// Energy of the ball centered at `center`, evaluated directly from the spins.
pub fn ball_energy_at(config: &Configuration, couplings: &Couplings, center: &Vertex) -> Result<Exact> {
    let (c, nb) = ball_spins(config, center)?;
    couplings.ball_energy_at(center, c, &nb, config.k())
}

/// Sum of class energies over balls centered in `V_radius`.
pub fn ball_sum(config: &Configuration, couplings: &Couplings, radius: usize) -> Result<Exact> {
    let k = config.k();
    let table = couplings.energy_table(k);
    let mut counts: BTreeMap<BallClass, i64> = BTreeMap::new();
    if radius == config.radius() + 1 {
        for ball in config.volume().interacting_balls() {
            let (c, nb) = config.resolved_ball_spins(ball)?;
            *counts.entry(couplings.class_at(&ball.center, c, &nb, k)?).or_default() += 1;
        }
    } else {
        for center in crate::tree::enumerate_volume(TreeParams { k, n: radius }) {
            *counts.entry(ball_class_at(config, couplings, &center)?).or_default() += 1;
        }
    }
    Ok(counts.into_iter().fold(Exact::zero(), |acc, (cls, n)| {
        acc + table.get(&cls).expect("class belongs to the table") * int(n)
    }))
}

/// `H(σ_Λ | ω)` for `Λ = V_n`: every ball meeting `V_n`, i.e. centered in `V_{n+1}`.
pub fn conditional_hamiltonian(config: &Configuration, couplings: &Couplings) -> Result<Exact> {
    ball_sum(config, couplings, config.radius() + 1)
}

/// The Hamiltonian written with bonds and pairs, truncated so that it equals
/// the sum of ball energies centered in `V_n`: full bonds inside `V_n`, half
/// bonds across to `W_{n+1}`, pairs with midpoint in `V_n`, field on `V_n`.
pub fn truncated_direct_hamiltonian(config: &Configuration, couplings: &Couplings, n: usize) -> Result<Exact> {
    let k = config.k();
    let mut bonds_full = Exact::zero();
    let mut bonds_half = Exact::zero();
    let mut pairs = Exact::zero();
    let mut field = Exact::zero();
    for x in crate::tree::enumerate_volume(TreeParams { k, n }) {
        let sx = config.spin(&x)?.value();
        for y in x.children(k) {
            let prod = int(sx * config.spin(&y)?.value());
            if y.len() <= n {
                bonds_full += prod;
            } else {
                bonds_half += prod;
            }
        }
        let nb = x.neighbors(k);
        for (a, ya) in nb.iter().enumerate() {
            let sa = config.spin(ya)?.value();
            for yb in &nb[a + 1..] {
                pairs += int(sa * config.spin(yb)?.value());
            }
        }
        field += couplings.field_at(&x) * int(sx);
    }
    Ok(couplings.j1() * (bonds_full + bonds_half / int(2)) + couplings.j2() * pairs + field)
}

fn difference_set(sigma: &Configuration, phi: &Configuration) -> Result<Vec<Vertex>> {
    if !sigma.same_frame(phi) {
        return Err(Error::VolumeMismatch);
    }
    Ok(sigma
        .volume
        .vertices()
        .iter()
        .enumerate()
        .filter(|(i, _)| sigma.spins[*i] != phi.spins[*i])
        .map(|(_, v)| v.clone())
        .collect())
}

/// Relative Hamiltonian `H(σ, φ)` from bond, pair and field differences.
///
/// Both configurations must share their volume and boundary, so they coincide
/// outside `V_n`.
pub fn relative_hamiltonian(sigma: &Configuration, phi: &Configuration, couplings: &Couplings) -> Result<Exact> {
    let k = sigma.k();
    let diff = difference_set(sigma, phi)?;
    let mut edges: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    let mut pairs: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    let ordered = |a: Vertex, b: Vertex| if a <= b { (a, b) } else { (b, a) };
    for x in &diff {
        for y in x.neighbors(k) {
            edges.insert(ordered(x.clone(), y.clone()));
            for z in y.neighbors(k) {
                if &z != x {
                    pairs.insert(ordered(x.clone(), z));
                }
            }
        }
    }
    let delta = |a: &Vertex, b: &Vertex| -> Result<i64> {
        Ok(sigma.spin(a)?.value() * sigma.spin(b)?.value() - phi.spin(a)?.value() * phi.spin(b)?.value())
    };
    let mut bond_sum = 0i64;
    for (a, b) in &edges {
        bond_sum += delta(a, b)?;
    }
    let mut pair_sum = 0i64;
    for (a, b) in &pairs {
        pair_sum += delta(a, b)?;
    }
    let mut field = Exact::zero();
    for x in &diff {
        field += couplings.field_at(x) * int(sigma.spin(x)?.value() - phi.spin(x)?.value());
    }
    Ok(couplings.j1() * int(bond_sum) + couplings.j2() * int(pair_sum) + field)
}

/// `Σ_b (U(σ_b) - U(φ_b))` over the balls that can differ.
pub fn ball_difference_sum(sigma: &Configuration, phi: &Configuration, couplings: &Couplings) -> Result<Exact> {
    let k = sigma.k();
    let diff = difference_set(sigma, phi)?;
    let mut centers: BTreeSet<Vertex> = BTreeSet::new();
    for x in &diff {
        centers.insert(x.clone());
        centers.extend(x.neighbors(k));
    }
    let mut total = Exact::zero();
    for c in &centers {
        total += ball_energy_at(sigma, couplings, c)? - ball_energy_at(phi, couplings, c)?;
    }
    Ok(total)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct OffendingBall {
    pub center: Vertex,
    pub class: BallClass,
    #[serde(serialize_with = "crate::exact::serialize_exact")]
    pub energy: Exact,
    #[serde(serialize_with = "crate::exact::serialize_exact")]
    pub minimum: Exact,
}

/// Outcome of a ground-state check on finitely many balls.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct GroundStateReport {
    pub is_ground: bool,
    pub depth: usize,
    #[serde(serialize_with = "crate::exact::serialize_exact")]
    pub minimum: Exact,
    pub minimal_classes: Vec<BallClass>,
    pub realized_classes: BTreeSet<BallClass>,
    pub offending_balls: Vec<OffendingBall>,
}

impl GroundStateReport {
    /// Two realized classes of opposite center sign, if any.
    pub fn opposite_sign_witness(&self) -> Option<(BallClass, BallClass)> {
        let plus = self.realized_classes.iter().find(|c| c.sign == Spin::Plus)?;
        let minus = self.realized_classes.iter().find(|c| c.sign == Spin::Minus)?;
        Some((*plus, *minus))
    }
}

/// Check that every ball centered in `V_depth` attains the minimal class energy.
pub fn ground_state_audit(config: &Configuration, couplings: &Couplings, depth: usize) -> Result<GroundStateReport> {
    let k = config.k();
    let table = couplings.energy_table(k);
    let minimum = table.min().clone();
    let mut realized = BTreeSet::new();
    let mut offending = Vec::new();
    for center in crate::tree::enumerate_volume(TreeParams { k, n: depth }) {
        let class = ball_class_at(config, couplings, &center)?;
        realized.insert(class);
        let energy = table.get(&class).expect("class belongs to the table").clone();
        if energy != minimum {
            offending.push(OffendingBall {
                center,
                class,
                energy,
                minimum: minimum.clone(),
            });
        }
    }
    Ok(GroundStateReport {
        is_ground: offending.is_empty(),
        depth,
        minimum,
        minimal_classes: table.minimal_classes(),
        realized_classes: realized,
        offending_balls: offending,
    })
}

/// The complete ground-state set where it is known: constant configurations
/// for a nonzero constant field, the alternating configuration for the
/// periodic field when only the two fully-disagreeing classes are minimal.
pub fn known_ground_states(couplings: &Couplings, k: usize) -> Result<Vec<ConfigKind>> {
    let minimal = couplings.energy_table(k).minimal_classes();
    match couplings {
        Couplings::Constant(j) => {
            if j.alpha.is_zero() {
                return Err(Error::Unsupported(
                    "ground-state set is not determined for alpha = 0".into(),
                ));
            }
            let s = if j.alpha.is_negative() { Spin::Plus } else { Spin::Minus };
            if minimal.contains(&BallClass::new(s, 0)) {
                Ok(vec![ConfigKind::Constant(s)])
            } else {
                Err(Error::Unsupported(format!(
                    "{j} lies outside A_(+,0) and A_(-,0): no ground state exists"
                )))
            }
        }
        Couplings::Periodic(_) => {
            let set: BTreeSet<BallClass> = minimal.into_iter().collect();
            for s in [Spin::Plus, Spin::Minus] {
                let (even, odd) = match s {
                    Spin::Plus => (0, 1),
                    Spin::Minus => (1, 0),
                };
                let expect: BTreeSet<BallClass> = [
                    BallClass::periodic(Spin::Plus, k + 1, even),
                    BallClass::periodic(Spin::Minus, k + 1, odd),
                ]
                .into_iter()
                .collect();
                if set == expect {
                    return Ok(vec![ConfigKind::Alternating(s)]);
                }
            }
            Err(Error::Unsupported(format!(
                "ground-state set is not determined at {couplings}"
            )))
        }
    }
}

/// Centers (in `V_{n+1}`) of balls whose restriction matches no ground state.
pub fn improper_boundary(config: &Configuration, couplings: &Couplings) -> Result<BTreeSet<Vertex>> {
    let k = config.k();
    let grounds = known_ground_states(couplings, k)?;
    let mut out = BTreeSet::new();
    for center in crate::tree::enumerate_volume(TreeParams {
        k,
        n: config.radius() + 1,
    }) {
        let ball: Vec<Vertex> = std::iter::once(center.clone()).chain(center.neighbors(k)).collect();
        let spins = ball.iter().map(|v| config.spin(v)).collect::<Result<Vec<_>>>()?;
        let proper = grounds
            .iter()
            .any(|g| ball.iter().zip(&spins).all(|(v, s)| g.spin_at(v) == *s));
        if !proper {
            out.insert(center);
        }
    }
    Ok(out)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PeierlsViolation {
    pub minus_set: Vec<Vertex>,
    #[serde(serialize_with = "crate::exact::serialize_exact")]
    pub relative_energy: Exact,
    pub boundary_size: usize,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct PeierlsReport {
    pub radius: usize,
    pub total: u64,
    pub satisfied: u64,
    #[serde(serialize_with = "crate::exact::serialize_exact")]
    pub lambda0: Exact,
    #[serde(serialize_with = "crate::exact::serialize_exact_opt")]
    pub min_ratio: Option<Exact>,
    /// Flipped set (relative to the ground state) attaining the minimum ratio.
    pub min_ratio_witness: Vec<Vertex>,
    pub violations: Vec<PeierlsViolation>,
}

/// Check `H(σ, φ) ≥ λ0 |∂(σ)|` for every `σ` equal to the ground state outside `V_radius`.
pub fn peierls_verify(j: &CouplingConstants, k: usize, radius: usize) -> Result<PeierlsReport> {
    if !in_peierls_region(j, k)? {
        return Err(Error::Precondition(format!("{j} is not in the Peierls region P")));
    }
    let couplings = Couplings::Constant(j.clone());
    let ground = if j.alpha.is_negative() { Spin::Plus } else { Spin::Minus };
    let params = TreeParams::new(k, radius)?;
    let n = params.volume_size();
    let total = 1u128 << n.min(127);
    if n >= 64 || total > EXACT_SWEEP_CAP {
        return Err(Error::Resource {
            needed: total,
            cap: EXACT_SWEEP_CAP,
        });
    }
    let volume = Arc::new(IndexedVolume::new(params));
    let phi = Configuration::constant(params, ground);
    let lambda0 = couplings.energy_table(k).lambda0();
    let boundary = Boundary::constant(ground);

    struct Partial {
        satisfied: u64,
        best: Option<(Exact, u64)>,
        violations: Vec<(u64, Exact, usize)>,
    }
    let check = |mask: u64| -> Result<Partial> {
        // bit set = spin differs from the ground state
        let spins = (0..volume.len())
            .map(|i| if mask >> i & 1 == 1 { ground.flip() } else { ground })
            .collect();
        let sigma = Configuration::new(volume.clone(), spins, boundary.clone())?;
        let h = relative_hamiltonian(&sigma, &phi, &couplings)?;
        let size = improper_boundary(&sigma, &couplings)?.len();
        let ok = h >= &lambda0 * int(size as i64);
        Ok(Partial {
            satisfied: ok as u64,
            best: (size > 0).then(|| (h.clone() / int(size as i64), mask)),
            violations: if ok { vec![] } else { vec![(mask, h, size)] },
        })
    };
    let merge = |a: Partial, b: Partial| -> Partial {
        let best = match (a.best, b.best) {
            (Some(x), Some(y)) => Some(if (y.0 < x.0) || (y.0 == x.0 && y.1 < x.1) { y } else { x }),
            (x, None) => x,
            (None, y) => y,
        };
        let mut violations = a.violations;
        violations.extend(b.violations);
        Partial {
            satisfied: a.satisfied + b.satisfied,
            best,
            violations,
        }
    };
    let merged = (0..total as u64)
        .into_par_iter()
        .map(check)
        .try_reduce(
            || Partial {
                satisfied: 0,
                best: None,
                violations: vec![],
            },
            |a, b| Ok(merge(a, b)),
        )?;
    let mut violations = merged.violations;
    violations.sort_by_key(|v| v.0);
    let flipped_set = |mask: u64| -> Vec<Vertex> {
        (0..volume.len())
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| volume.vertex(i).clone())
            .collect()
    };
    Ok(PeierlsReport {
        radius,
        total: total as u64,
        satisfied: merged.satisfied,
        lambda0,
        min_ratio: merged.best.as_ref().map(|b| b.0.clone()),
        min_ratio_witness: merged.best.map(|b| flipped_set(b.1)).unwrap_or_default(),
        violations: violations
            .into_iter()
            .map(|(mask, h, size)| PeierlsViolation {
                minus_set: flipped_set(mask),
                relative_energy: h,
                boundary_size: size,
            })
            .collect(),
    })
}
