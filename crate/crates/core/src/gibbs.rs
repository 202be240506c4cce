//! Exact finite-volume Gibbs distributions by exhaustive enumeration, plus a
//! small Metropolis sampler for volumes beyond the enumeration cap.
//!
//! The conditional Hamiltonian is compiled once into an integer quadratic
//! form in the free spins of `V_n`: every energy is an exact rational with a
//! shared denominator, so each configuration costs a few integer operations
//! and a single conversion to floating point. Weights are summed with
//! log-sum-exp over fixed chunks of the configuration index range; chunks run
//! in parallel and are combined sequentially, so results do not depend on the
//! number of worker threads.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::configurations::{Boundary, Configuration};
use crate::contours::{boundary_partition, config_from_contours, contour_stats, extract_contours, BallSet, Contour};
use crate::error::{Error, Result};
use crate::exact::{to_f64, Exact};
use crate::model::{region_membership, CouplingConstants, Couplings, RegionLabel, Spin};
use crate::tree::{enumerate_sphere, enumerate_volume, IndexedVolume, TreeParams, Vertex};

/// Default cap on the number of enumerated configurations.
pub const EXACT_GIBBS_CAP: u128 = 1 << 24;

/// Cap for enumerations that extract contours from every configuration.
pub const CONTOUR_GIBBS_CAP: u128 = 1 << 20;

const CHUNK: u64 = 1 << 12;

/// A finite-volume Gibbs distribution.
#[derive(Clone, Debug)]
pub struct GibbsSpec {
    pub params: TreeParams,
    pub couplings: Couplings,
    pub beta: f64,
    pub boundary: Boundary,
    pub cap: u128,
    pub ball_set: BallSet,
}

impl GibbsSpec {
    pub fn new(params: TreeParams, couplings: impl Into<Couplings>, beta: f64, boundary: Boundary) -> Self {
        GibbsSpec {
            params,
            couplings: couplings.into(),
            beta,
            boundary,
            cap: EXACT_GIBBS_CAP,
            ball_set: BallSet::Interacting,
        }
    }

    pub fn with_cap(mut self, cap: u128) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_ball_set(mut self, ball_set: BallSet) -> Self {
        self.ball_set = ball_set;
        self
    }

    pub fn with_boundary(mut self, boundary: Boundary) -> Self {
        self.boundary = boundary;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    fn check_beta(&self) -> Result<()> {
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::Domain(format!("beta must be a positive finite number, got {}", self.beta)));
        }
        Ok(())
    }

    fn enumeration_size(&self, cap: u128) -> Result<u64> {
        let n = self.params.volume_size();
        let needed = if n >= 127 { u128::MAX } else { 1u128 << n };
        if needed > cap || n > 62 {
            return Err(Error::Resource { needed, cap });
        }
        Ok(needed as u64)
    }
}

/// Events whose probabilities [`exact_gibbs`] reports.
#[derive(Clone, Debug)]
pub enum Event {
    /// `σ(x) = s`; `x` may lie in `V_n` or in the fixed boundary shell.
    Spin(Vertex, Spin),
    /// `γ` is one of the contours of the configuration (matched by support).
    ContourPresent(Contour),
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct GibbsResult {
    pub beta: f64,
    pub boundary: String,
    pub configurations: u64,
    pub log_partition: f64,
    pub root_marginal_plus: f64,
    pub root_marginal_minus: f64,
    pub event_probabilities: Vec<f64>,
}

/// `H · D` as an integer quadratic form in `s_i ∈ {±1}`, with `D` the common
/// denominator of the couplings.
#[derive(Clone, Debug)]
struct Kernel {
    denominator: f64,
    constant: i128,
    linear: Vec<i128>,
    pairs: Vec<(usize, usize, i128)>,
    adjacency: Vec<Vec<(usize, i128)>>,
}

#[derive(Clone, Copy)]
enum Site {
    Free(usize),
    Fixed(i64),
}

/// Integer counts over the unit energies `(J1/2, J2, α0, α1)`.
type Counts = [i64; 4];

struct FormBuilder {
    constant: Counts,
    linear: Vec<Counts>,
    pairs: BTreeMap<(usize, usize), Counts>,
}

impl FormBuilder {
    fn add(&mut self, a: Site, b: Site, t: usize) {
        match (a, b) {
            (Site::Fixed(x), Site::Fixed(y)) => self.constant[t] += x * y,
            (Site::Free(i), Site::Fixed(y)) | (Site::Fixed(y), Site::Free(i)) => self.linear[i][t] += y,
            (Site::Free(i), Site::Free(j)) => {
                let key = if i < j { (i, j) } else { (j, i) };
                self.pairs.entry(key).or_insert([0; 4])[t] += 1;
            }
        }
    }

    fn add_field(&mut self, a: Site, t: usize) {
        match a {
            Site::Fixed(x) => self.constant[t] += x,
            Site::Free(i) => self.linear[i][t] += 1,
        }
    }
}

fn unit_weights(c: &Couplings) -> [Exact; 4] {
    let half = Exact::new(BigInt::one(), BigInt::from(2));
    match c {
        Couplings::Constant(j) => [&j.j1 * &half, j.j2.clone(), j.alpha.clone(), Exact::zero()],
        Couplings::Periodic(p) => [&p.j1 * &half, p.j2.clone(), p.alpha0.clone(), p.alpha1.clone()],
    }
}

fn field_slot(c: &Couplings, x: &Vertex) -> usize {
    2 + c.sublattice_of(x).unwrap_or(0) as usize
}

fn boundary_spin(boundary: &Boundary, x: &Vertex) -> Result<Spin> {
    match boundary {
        Boundary::Plus => Ok(Spin::Plus),
        Boundary::Minus => Ok(Spin::Minus),
        Boundary::Explicit(map) => map
            .get(x)
            .copied()
            .ok_or_else(|| Error::IncompleteBoundary(x.to_string())),
    }
}

impl Kernel {
    fn build(spec: &GibbsSpec, volume: &IndexedVolume) -> Result<Kernel> {
        let k = spec.params.k;
        let n = spec.params.n;
        let c = &spec.couplings;
        let site = |x: &Vertex| -> Result<Site> {
            match volume.index_of(x) {
                Some(i) => Ok(Site::Free(i)),
                None => Ok(Site::Fixed(boundary_spin(&spec.boundary, x)?.value())),
            }
        };
        let mut fb = FormBuilder {
            constant: [0; 4],
            linear: vec![[0; 4]; volume.len()],
            pairs: BTreeMap::new(),
        };
        for center in enumerate_volume(TreeParams { k, n: n + 1 }) {
            let sc = site(&center)?;
            let nb = center.neighbors(k);
            let sites = nb.iter().map(&site).collect::<Result<Vec<_>>>()?;
            for s in &sites {
                fb.add(sc, *s, 0);
            }
            for (a, sa) in sites.iter().enumerate() {
                for sb in &sites[a + 1..] {
                    fb.add(*sa, *sb, 1);
                }
            }
            fb.add_field(sc, field_slot(c, &center));
        }
        if spec.ball_set == BallSet::Extended {
            let s = match spec.boundary {
                Boundary::Plus => 1,
                Boundary::Minus => -1,
                Boundary::Explicit(_) => {
                    return Err(Error::Unsupported(
                        "the extended ball set needs a constant boundary condition".into(),
                    ))
                }
            };
            for r in [n + 2, n + 3] {
                for x in enumerate_sphere(k, r) {
                    fb.constant[0] += (k as i64) + 1;
                    fb.constant[1] += (k as i64) * (k as i64 + 1) / 2;
                    fb.constant[field_slot(c, &x)] += s;
                }
            }
        }

        let weights = unit_weights(c);
        let denom = weights
            .iter()
            .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let nums: Vec<i128> = weights
            .iter()
            .map(|w| {
                (w.numer() * (&denom / w.denom()))
                    .to_i128()
                    .ok_or_else(|| Error::Domain("coupling numerators are too large for the enumeration kernel".into()))
            })
            .collect::<Result<_>>()?;
        let dot = |cnt: &Counts| -> i128 { cnt.iter().zip(&nums).map(|(a, b)| *a as i128 * b).sum() };
        let linear: Vec<i128> = fb.linear.iter().map(dot).collect();
        let pairs: Vec<(usize, usize, i128)> = fb
            .pairs
            .iter()
            .map(|((i, j), cnt)| (*i, *j, dot(cnt)))
            .filter(|(_, _, w)| *w != 0)
            .collect();
        let mut adjacency = vec![Vec::new(); volume.len()];
        for (i, j, w) in &pairs {
            adjacency[*i].push((*j, *w));
            adjacency[*j].push((*i, *w));
        }
        let denominator = denom
            .to_f64()
            .filter(|d| d.is_finite())
            .ok_or_else(|| Error::Domain("coupling denominators are too large".into()))?;
        Ok(Kernel {
            denominator,
            constant: dot(&fb.constant),
            linear,
            pairs,
            adjacency,
        })
    }

    /// `H · D` for the configuration with minus spins at the set bits of `mask`.
    fn scaled_energy(&self, mask: u64) -> i128 {
        let s = |i: usize| if mask >> i & 1 == 1 { -1i128 } else { 1 };
        let mut e = self.constant;
        for (i, h) in self.linear.iter().enumerate() {
            e += h * s(i);
        }
        for (i, j, w) in &self.pairs {
            e += w * s(*i) * s(*j);
        }
        e
    }

    fn energy(&self, mask: u64) -> f64 {
        self.scaled_energy(mask) as f64 / self.denominator
    }

    /// `(H(σ^i) - H(σ)) · D` where `σ^i` flips site `i`.
    fn scaled_flip_delta(&self, spins: &[i8], i: usize) -> i128 {
        let mut local = self.linear[i];
        for (j, w) in &self.adjacency[i] {
            local += w * spins[*j] as i128;
        }
        -2 * spins[i] as i128 * local
    }
}

/// Running `(max, Σ exp(x - max))` accumulators for the partition value and
/// each tracked event.
#[derive(Clone, Debug)]
struct Accumulator {
    max: f64,
    total: f64,
    root_plus: f64,
    events: Vec<f64>,
}

impl Accumulator {
    fn empty(events: usize) -> Self {
        Accumulator {
            max: f64::NEG_INFINITY,
            total: 0.0,
            root_plus: 0.0,
            events: vec![0.0; events],
        }
    }

    fn rescale(&mut self, new_max: f64) {
        if self.max == f64::NEG_INFINITY {
            self.max = new_max;
            return;
        }
        let f = (self.max - new_max).exp();
        self.total *= f;
        self.root_plus *= f;
        for e in &mut self.events {
            *e *= f;
        }
        self.max = new_max;
    }

    fn push(&mut self, x: f64, root_plus: bool, hits: impl Iterator<Item = bool>) {
        if x > self.max {
            self.rescale(x);
        }
        let w = (x - self.max).exp();
        self.total += w;
        if root_plus {
            self.root_plus += w;
        }
        for (acc, hit) in self.events.iter_mut().zip(hits) {
            if hit {
                *acc += w;
            }
        }
    }

    fn merge(mut self, mut other: Accumulator) -> Accumulator {
        let m = self.max.max(other.max);
        if m == f64::NEG_INFINITY {
            return self;
        }
        self.rescale(m);
        other.rescale(m);
        self.total += other.total;
        self.root_plus += other.root_plus;
        for (a, b) in self.events.iter_mut().zip(other.events) {
            *a += b;
        }
        self
    }
}

enum CompiledEvent {
    Free(usize, Spin),
    Fixed(bool),
    Contour(BTreeSet<crate::tree::Edge>),
}

fn compile_events(spec: &GibbsSpec, volume: &IndexedVolume, events: &[Event]) -> Result<Vec<CompiledEvent>> {
    events
        .iter()
        .map(|ev| match ev {
            Event::Spin(x, s) => match volume.index_of(x) {
                Some(i) => Ok(CompiledEvent::Free(i, *s)),
                None if x.len() <= spec.params.n + 2 => Ok(CompiledEvent::Fixed(boundary_spin(&spec.boundary, x)? == *s)),
                None => Err(Error::Precondition(format!(
                    "vertex \"{x}\" lies outside V_{} and its boundary shell",
                    spec.params.n
                ))),
            },
            Event::ContourPresent(g) => {
                if spec.boundary != Boundary::Plus {
                    return Err(Error::Unsupported("contour events need the +1 boundary condition".into()));
                }
                Ok(CompiledEvent::Contour(g.support.clone()))
            }
        })
        .collect()
}

/// Exact Gibbs probabilities of the requested events, the root marginal and `ln Z`.
pub fn exact_gibbs(spec: &GibbsSpec, events: &[Event]) -> Result<GibbsResult> {
    spec.check_beta()?;
    let has_contours = events.iter().any(|e| matches!(e, Event::ContourPresent(_)));
    let cap = if has_contours { spec.cap.min(CONTOUR_GIBBS_CAP) } else { spec.cap };
    let total = spec.enumeration_size(cap)?;
    let volume = Arc::new(IndexedVolume::new(spec.params));
    let kernel = Kernel::build(spec, &volume)?;
    let compiled = compile_events(spec, &volume, events)?;
    let beta = spec.beta;
    let chunks = total.div_ceil(CHUNK);

    let run_chunk = |c: u64| -> Result<Accumulator> {
        let mut acc = Accumulator::empty(compiled.len());
        for mask in c * CHUNK..((c + 1) * CHUNK).min(total) {
            let x = -beta * kernel.energy(mask);
            let contours: Option<BTreeSet<BTreeSet<crate::tree::Edge>>> = if has_contours {
                let cfg = Configuration::from_mask(volume.clone(), mask, spec.boundary.clone())?;
                Some(extract_contours(&cfg)?.into_iter().map(|g| g.support).collect())
            } else {
                None
            };
            let hits = compiled.iter().map(|ev| match ev {
                CompiledEvent::Free(i, s) => (mask >> i & 1 == 1) == (*s == Spin::Minus),
                CompiledEvent::Fixed(b) => *b,
                CompiledEvent::Contour(sup) => contours.as_ref().is_some_and(|cs| cs.contains(sup)),
            });
            acc.push(x, mask & 1 == 0, hits);
        }
        Ok(acc)
    };
    let parts: Vec<Accumulator> = (0..chunks)
        .into_par_iter()
        .map(run_chunk)
        .collect::<Result<Vec<_>>>()?;
    let acc = parts
        .into_iter()
        .fold(Accumulator::empty(compiled.len()), Accumulator::merge);

    let root_plus = acc.root_plus / acc.total;
    Ok(GibbsResult {
        beta,
        boundary: spec.boundary.label().to_string(),
        configurations: total,
        log_partition: acc.max + acc.total.ln(),
        root_marginal_plus: root_plus,
        root_marginal_minus: (acc.total - acc.root_plus) / acc.total,
        event_probabilities: acc.events.iter().map(|e| e / acc.total).collect(),
    })
}

/// `p_+(γ)` with the exponential bound `exp(-β λ₀ |γ|)`.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct ContourProbability {
    pub size: usize,
    pub p_plus: f64,
    pub lambda0: f64,
    pub bound: f64,
    pub holds: bool,
}

fn contour_precondition(spec: &GibbsSpec) -> Result<(CouplingConstants, Exact)> {
    let j = match &spec.couplings {
        Couplings::Constant(j) => j.clone(),
        Couplings::Periodic(_) => {
            return Err(Error::Unsupported("contour probabilities are defined for the constant-field model".into()))
        }
    };
    if spec.boundary != Boundary::Plus {
        return Err(Error::Unsupported("contour probabilities need the +1 boundary condition".into()));
    }
    if !region_membership(&j, spec.params.k, RegionLabel::open(Spin::Plus, 0))? {
        return Err(Error::Precondition("the couplings must lie in the interior of A_{+,0}".into()));
    }
    let lambda0 = spec.couplings.energy_table(spec.params.k).lambda0();
    Ok((j, lambda0))
}

/// `|γ|`, read from the configuration that `γ` generates alone.
fn realized_size(gamma: &Contour, params: TreeParams) -> Result<usize> {
    let cfg = config_from_contours(std::slice::from_ref(gamma), params)
        .map_err(|e| Error::Precondition(format!("contour is not realizable in V_{}: {e}", params.n)))?;
    Ok(contour_stats(gamma, &boundary_partition(&cfg)?).size)
}

fn bounded(size: usize, p_plus: f64, lambda0: &Exact, beta: f64) -> ContourProbability {
    let lambda0 = to_f64(lambda0);
    let bound = (-beta * lambda0 * size as f64).exp();
    ContourProbability {
        size,
        p_plus,
        lambda0,
        bound,
        holds: p_plus <= bound,
    }
}

/// Probability that `γ` is one of the contours, and the bound check.
pub fn p_plus(gamma: &Contour, spec: &GibbsSpec) -> Result<ContourProbability> {
    let (_, lambda0) = contour_precondition(spec)?;
    let size = realized_size(gamma, spec.params)?;
    let res = exact_gibbs(spec, &[Event::ContourPresent(gamma.clone())])?;
    Ok(bounded(size, res.event_probabilities[0], &lambda0, spec.beta))
}

/// `p_+(γ)` for every contour realizable in `V_n`, in one enumeration.
pub fn contour_probabilities(spec: &GibbsSpec) -> Result<Vec<(Contour, ContourProbability)>> {
    spec.check_beta()?;
    let (_, lambda0) = contour_precondition(spec)?;
    let total = spec.enumeration_size(spec.cap.min(CONTOUR_GIBBS_CAP))?;
    let volume = Arc::new(IndexedVolume::new(spec.params));
    let kernel = Kernel::build(spec, &volume)?;
    let per_config: Vec<(f64, Vec<Contour>)> = (0..total)
        .into_par_iter()
        .map(|mask| {
            let cfg = Configuration::from_mask(volume.clone(), mask, Boundary::Plus)?;
            Ok((-spec.beta * kernel.energy(mask), extract_contours(&cfg)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let max = per_config.iter().map(|(x, _)| *x).fold(f64::NEG_INFINITY, f64::max);
    let mut z = 0.0;
    let mut by_support: BTreeMap<BTreeSet<crate::tree::Edge>, (Contour, f64)> = BTreeMap::new();
    for (x, contours) in per_config {
        let w = (x - max).exp();
        z += w;
        for g in contours {
            by_support.entry(g.support.clone()).or_insert((g, 0.0)).1 += w;
        }
    }
    by_support
        .into_values()
        .map(|(g, w)| {
            let size = realized_size(&g, spec.params)?;
            let prob = bounded(size, w / z, &lambda0, spec.beta);
            Ok((g, prob))
        })
        .collect()
}

/// Root-plus marginals at one inverse temperature.
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct TwoPhaseRow {
    pub beta: f64,
    pub plus_bc: f64,
    pub minus_bc: f64,
    /// Same quantities at the mirrored point `α → -α`.
    pub mirrored_plus_bc: f64,
    pub mirrored_minus_bc: f64,
    /// Largest deviation from `P^{+,α}(+) = P^{-,-α}(-)` and `P^{-,α}(+) = P^{+,-α}(-)`.
    pub symmetry_error: f64,
}

#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct TwoPhaseReport {
    pub n: usize,
    pub region: String,
    pub rows: Vec<TwoPhaseRow>,
}

/// Root marginals under both boundary conditions at `J` and its mirror.
pub fn two_phase_report(params: TreeParams, j: &CouplingConstants, betas: &[f64], cap: u128) -> Result<TwoPhaseReport> {
    let k = params.k;
    let region = if region_membership(j, k, RegionLabel::open(Spin::Plus, 0))? {
        "int A_{+,0}"
    } else if region_membership(j, k, RegionLabel::open(Spin::Minus, 0))? {
        "int A_{-,0}"
    } else {
        return Err(Error::Precondition(
            "the couplings must lie in the interior of A_{+,0} or A_{-,0}".into(),
        ));
    };
    let mirror = CouplingConstants::new(j.j1.clone(), j.j2.clone(), -j.alpha.clone());
    let mut rows = Vec::new();
    for &beta in betas {
        let marginal = |c: &CouplingConstants, bc: Boundary| -> Result<GibbsResult> {
            exact_gibbs(&GibbsSpec::new(params, c.clone(), beta, bc).with_cap(cap), &[])
        };
        let pp = marginal(j, Boundary::Plus)?;
        let pm = marginal(j, Boundary::Minus)?;
        let mp = marginal(&mirror, Boundary::Plus)?;
        let mm = marginal(&mirror, Boundary::Minus)?;
        let symmetry_error = (pp.root_marginal_plus - mm.root_marginal_minus)
            .abs()
            .max((pm.root_marginal_plus - mp.root_marginal_minus).abs());
        rows.push(TwoPhaseRow {
            beta,
            plus_bc: pp.root_marginal_plus,
            minus_bc: pm.root_marginal_plus,
            mirrored_plus_bc: mp.root_marginal_plus,
            mirrored_minus_bc: mm.root_marginal_plus,
            symmetry_error,
        });
    }
    Ok(TwoPhaseReport {
        n: params.n,
        region: region.to_string(),
        rows,
    })
}

/// Output of [`mcmc_sample`].
#[derive(Clone, PartialEq, Debug, Serialize)]
pub struct McmcResult {
    pub sweeps: u64,
    pub seed: u64,
    pub acceptance_rate: f64,
    pub root_marginal_plus: f64,
    /// Batch-means standard error of the root marginal.
    pub root_standard_error: f64,
    /// Plus-marginal of every vertex of `V_n`, in shortlex order.
    pub marginals_plus: Vec<(Vertex, f64)>,
}

const MCMC_BATCHES: u64 = 50;

/// Single-site Metropolis dynamics on `V_n`.
///
/// A sweep is `|V_n|` proposals at uniformly chosen sites. The chain starts
/// from the boundary's constant value (all plus for explicit boundaries),
/// discards the first tenth of the sweeps, and records one sample per sweep.
/// `β = 0` is accepted and gives the uniform dynamics.
pub fn mcmc_sample(spec: &GibbsSpec, sweeps: u64, seed: u64) -> Result<McmcResult> {
    if !(spec.beta.is_finite() && spec.beta >= 0.0) {
        return Err(Error::Domain(format!("beta must be a finite number >= 0, got {}", spec.beta)));
    }
    if sweeps == 0 {
        return Err(Error::Precondition("at least one sweep is required".into()));
    }
    let volume = Arc::new(IndexedVolume::new(spec.params));
    let kernel = Kernel::build(spec, &volume)?;
    let n = volume.len();
    let start = if spec.boundary == Boundary::Minus { -1 } else { 1 };
    let mut spins = vec![start as i8; n];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let burn_in = sweeps / 10;
    let recorded = sweeps - burn_in;
    let batch_len = (recorded / MCMC_BATCHES).max(1);
    let mut plus_counts = vec![0u64; n];
    let mut batch_sums: Vec<f64> = Vec::new();
    let mut batch_plus = 0u64;
    let mut batch_fill = 0u64;
    let mut accepted = 0u64;
    for sweep in 0..sweeps {
        for _ in 0..n {
            let i = rng.gen_range(0..n);
            let delta = kernel.scaled_flip_delta(&spins, i) as f64 / kernel.denominator;
            if delta <= 0.0 || rng.gen::<f64>() < (-spec.beta * delta).exp() {
                spins[i] = -spins[i];
                accepted += 1;
            }
        }
        if sweep >= burn_in {
            for (c, s) in plus_counts.iter_mut().zip(&spins) {
                if *s > 0 {
                    *c += 1;
                }
            }
            batch_plus += u64::from(spins[0] > 0);
            batch_fill += 1;
            if batch_fill == batch_len {
                batch_sums.push(batch_plus as f64 / batch_len as f64);
                batch_plus = 0;
                batch_fill = 0;
            }
        }
    }
    let root = plus_counts[0] as f64 / recorded as f64;
    let se = if batch_sums.len() >= 2 {
        let b = batch_sums.len() as f64;
        let mean = batch_sums.iter().sum::<f64>() / b;
        let var = batch_sums.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (b - 1.0);
        (var / b).sqrt()
    } else {
        f64::NAN
    };
    Ok(McmcResult {
        sweeps,
        seed,
        acceptance_rate: accepted as f64 / (sweeps * n as u64) as f64,
        root_marginal_plus: root,
        root_standard_error: se,
        marginals_plus: volume
            .vertices()
            .iter()
            .zip(&plus_counts)
            .map(|(v, c)| (v.clone(), *c as f64 / recorded as f64))
            .collect(),
    })
}

/// Exact conditional Hamiltonian of a mask under the spec's ball set, for cross-checks.
pub fn kernel_energy(spec: &GibbsSpec, mask: u64) -> Result<f64> {
    let volume = IndexedVolume::new(spec.params);
    Ok(Kernel::build(spec, &volume)?.energy(mask))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configurations::conditional_hamiltonian;
    use crate::contours::extract_contours;
    use crate::exact::ratio;
    use crate::model::PeriodicFieldConstants;
    use crate::tree::distance;

    fn p(n: usize) -> TreeParams {
        TreeParams::new(2, n).unwrap()
    }

    fn j(a: i64, b: i64, c: i64) -> CouplingConstants {
        CouplingConstants::from_ints(a, b, c)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    /// Eq.-(1)-style energy over the whole of `V_{n+2}` from pairwise distances.
    /// It differs from the conditional Hamiltonian by boundary-only terms.
    fn direct_energy(cfg: &Configuration, jj: &CouplingConstants) -> f64 {
        let all = enumerate_volume(TreeParams { k: 2, n: cfg.radius() + 2 });
        let spins: Vec<f64> = all.iter().map(|v| cfg.spin(v).unwrap().value() as f64).collect();
        let (j1, j2, a) = (to_f64(&jj.j1), to_f64(&jj.j2), to_f64(&jj.alpha));
        let mut h = 0.0;
        for i in 0..all.len() {
            h += a * spins[i];
            for t in i + 1..all.len() {
                match distance(&all[i], &all[t]) {
                    1 => h += j1 * spins[i] * spins[t],
                    2 => h += j2 * spins[i] * spins[t],
                    _ => {}
                }
            }
        }
        h
    }

    fn oracle_root_plus(params: TreeParams, jj: &CouplingConstants, beta: f64, bc: Boundary) -> f64 {
        let vol = Arc::new(IndexedVolume::new(params));
        let xs: Vec<(f64, bool)> = (0..1u64 << vol.len())
            .map(|m| {
                let cfg = Configuration::from_mask(vol.clone(), m, bc.clone()).unwrap();
                (-beta * direct_energy(&cfg, jj), m & 1 == 0)
            })
            .collect();
        let max = xs.iter().map(|x| x.0).fold(f64::NEG_INFINITY, f64::max);
        let z: f64 = xs.iter().map(|x| (x.0 - max).exp()).sum();
        let plus: f64 = xs.iter().filter(|x| x.1).map(|x| (x.0 - max).exp()).sum();
        plus / z
    }

    #[test]
    fn single_vertex_volume() {
        let r = exact_gibbs(&GibbsSpec::new(p(0), j(-1, 0, -1), 1.0, Boundary::Plus), &[]).unwrap();
        assert!(close(r.root_marginal_plus, 1.0 / (1.0 + (-8f64).exp()), 1e-14));
        assert!((r.root_marginal_plus + r.root_marginal_minus - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_couplings_are_uniform() {
        for beta in [0.1, 1.0, 7.0] {
            let r = exact_gibbs(&GibbsSpec::new(p(2), j(0, 0, 0), beta, Boundary::Plus), &[]).unwrap();
            assert!((r.root_marginal_plus - 0.5).abs() < 1e-12);
            assert!((r.log_partition - 1024f64.ln()).abs() < 1e-12);
        }
    }

    #[test]
    fn kernel_matches_conditional_hamiltonian() {
        let jj = CouplingConstants::new(ratio(-7, 3), ratio(2, 5), ratio(-1, 4));
        let spec = GibbsSpec::new(p(2), jj.clone(), 1.0, Boundary::Minus);
        let vol = Arc::new(IndexedVolume::new(p(2)));
        let kernel = Kernel::build(&spec, &vol).unwrap();
        let c: Couplings = jj.into();
        for mask in 0..1u64 << 10 {
            let cfg = Configuration::from_mask(vol.clone(), mask, Boundary::Minus).unwrap();
            let exact = conditional_hamiltonian(&cfg, &c).unwrap();
            let d = BigInt::from(kernel.denominator as i64);
            let scaled = exact * Exact::from_integer(d);
            assert!(scaled.is_integer());
            assert_eq!(scaled.to_integer(), BigInt::from(kernel.scaled_energy(mask)));
        }
    }

    #[test]
    fn kernel_handles_periodic_fields() {
        let pf = PeriodicFieldConstants::new(ratio(4, 1), ratio(1, 3), ratio(-1, 2), ratio(3, 7));
        let c: Couplings = pf.clone().into();
        let spec = GibbsSpec::new(p(1), pf, 1.0, Boundary::Plus);
        let vol = Arc::new(IndexedVolume::new(p(1)));
        for mask in 0..1u64 << 4 {
            let cfg = Configuration::from_mask(vol.clone(), mask, Boundary::Plus).unwrap();
            let exact = to_f64(&conditional_hamiltonian(&cfg, &c).unwrap());
            assert!(close(kernel_energy(&spec, mask).unwrap(), exact, 1e-15));
        }
    }

    #[test]
    fn matches_direct_oracle() {
        for (bc, beta) in [(Boundary::Plus, 2.0), (Boundary::Minus, 0.7), (Boundary::Minus, 3.0)] {
            let jj = j(-1, 0, -1);
            let r = exact_gibbs(&GibbsSpec::new(p(2), jj.clone(), beta, bc.clone()), &[]).unwrap();
            let o = oracle_root_plus(p(2), &jj, beta, bc);
            assert!(close(r.root_marginal_plus, o, 1e-12), "{} vs {o}", r.root_marginal_plus);
        }
        let jj = CouplingConstants::new(ratio(3, 2), ratio(-1, 3), ratio(1, 5));
        let r = exact_gibbs(&GibbsSpec::new(p(2), jj.clone(), 1.3, Boundary::Plus), &[]).unwrap();
        assert!(close(r.root_marginal_plus, oracle_root_plus(p(2), &jj, 1.3, Boundary::Plus), 1e-12));
    }

    #[test]
    fn errors() {
        let s = GibbsSpec::new(p(2), j(-1, 0, -1), 0.0, Boundary::Plus);
        assert!(matches!(exact_gibbs(&s, &[]), Err(Error::Domain(_))));
        let s = GibbsSpec::new(p(4), j(-1, 0, -1), 1.0, Boundary::Plus);
        assert!(matches!(exact_gibbs(&s, &[]), Err(Error::Resource { .. })));
        let s = GibbsSpec::new(p(2), j(-1, 0, -1), 1.0, Boundary::Plus).with_cap(512);
        assert!(matches!(exact_gibbs(&s, &[]), Err(Error::Resource { .. })));
    }

    #[test]
    fn events_normalize_and_match_marginals() {
        let spec = GibbsSpec::new(p(2), j(-1, 1, 1), 0.8, Boundary::Minus);
        let x: Vertex = "12".parse().unwrap();
        let ev = [
            Event::Spin(Vertex::root(), Spin::Plus),
            Event::Spin(x.clone(), Spin::Plus),
            Event::Spin(x, Spin::Minus),
            Event::Spin("121".parse().unwrap(), Spin::Minus),
        ];
        let r = exact_gibbs(&spec, &ev).unwrap();
        assert!((r.event_probabilities[0] - r.root_marginal_plus).abs() < 1e-15);
        assert!((r.event_probabilities[1] + r.event_probabilities[2] - 1.0).abs() < 1e-12);
        assert_eq!(r.event_probabilities[3], 1.0);
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let spec = GibbsSpec::new(p(3), j(-1, 0, -1), 0.9, Boundary::Plus);
        let a = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| exact_gibbs(&spec, &[]).unwrap());
        let b = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap().install(|| exact_gibbs(&spec, &[]).unwrap());
        assert_eq!(a.root_marginal_plus.to_bits(), b.root_marginal_plus.to_bits());
        assert_eq!(a.log_partition.to_bits(), b.log_partition.to_bits());
    }

    #[test]
    fn root_contour_probability() {
        let cfg = Configuration::with_minus_set(p(2), [&Vertex::root()]).unwrap();
        let gamma = extract_contours(&cfg).unwrap().remove(0);
        for beta in [1.0, 2.0] {
            let r = p_plus(&gamma, &GibbsSpec::new(p(2), j(-1, 0, -1), beta, Boundary::Plus)).unwrap();
            assert_eq!(r.size, 4);
            assert!(close(r.bound, (-4.0 * beta).exp(), 1e-15));
            assert!(r.holds && r.p_plus > 0.0);
        }
    }

    #[test]
    fn ball_set_convention_does_not_change_probabilities() {
        let spec = GibbsSpec::new(p(2), j(-1, 0, -1), 1.0, Boundary::Plus);
        let a = contour_probabilities(&spec).unwrap();
        let b = contour_probabilities(&spec.clone().with_ball_set(BallSet::Extended)).unwrap();
        assert_eq!(a.len(), b.len());
        for ((ga, pa), (gb, pb)) in a.iter().zip(&b) {
            assert_eq!(ga, gb);
            assert!(close(pa.p_plus, pb.p_plus, 1e-12));
        }
        let ra = exact_gibbs(&spec, &[]).unwrap();
        let rb = exact_gibbs(&spec.clone().with_ball_set(BallSet::Extended), &[]).unwrap();
        // 72 extra all-plus balls at U_{+,0} = -5/2
        assert!(close(rb.log_partition - ra.log_partition, 180.0, 1e-12));
    }

    #[test]
    fn contour_probability_preconditions() {
        let cfg = Configuration::with_minus_set(p(2), [&Vertex::root()]).unwrap();
        let gamma = extract_contours(&cfg).unwrap().remove(0);
        let outside = GibbsSpec::new(p(2), j(1, 0, -1), 1.0, Boundary::Plus);
        assert!(matches!(p_plus(&gamma, &outside), Err(Error::Precondition(_))));
        let deep = extract_contours(&Configuration::with_minus_set(p(2), [&"12".parse().unwrap()]).unwrap())
            .unwrap()
            .remove(0);
        let small = GibbsSpec::new(p(1), j(-1, 0, -1), 1.0, Boundary::Plus);
        assert!(matches!(p_plus(&deep, &small), Err(Error::Precondition(_))));
    }

    #[test]
    fn two_phase_symmetry_and_high_temperature() {
        let r = two_phase_report(p(2), &j(-1, 0, -1), &[0.01, 1.0, 3.0], EXACT_GIBBS_CAP).unwrap();
        assert_eq!(r.region, "int A_{+,0}");
        for row in &r.rows {
            assert!(row.symmetry_error < 1e-12);
        }
        assert!((r.rows[0].plus_bc - 0.5).abs() < 0.05 && (r.rows[0].minus_bc - 0.5).abs() < 0.05);
        assert!(r.rows[2].plus_bc > 0.9);
        assert!(matches!(
            two_phase_report(p(1), &j(1, 0, -1), &[1.0], EXACT_GIBBS_CAP),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn plus_marginal_increases_with_beta() {
        let mut last = 0.0;
        for beta in [0.5, 1.0, 2.0, 3.0] {
            let r = exact_gibbs(&GibbsSpec::new(p(2), j(-1, 0, -1), beta, Boundary::Plus), &[]).unwrap();
            assert!(r.root_marginal_plus >= last);
            last = r.root_marginal_plus;
        }
    }

    #[test]
    fn sampler_agrees_with_exact() {
        let spec = GibbsSpec::new(p(2), j(-1, 0, -1), 1.0, Boundary::Plus);
        let exact = exact_gibbs(&spec, &[]).unwrap().root_marginal_plus;
        let m = mcmc_sample(&spec, 100_000, 7).unwrap();
        assert!((m.root_marginal_plus - exact).abs() <= 3.0 * m.root_standard_error.max(1e-6));
        assert_eq!(m, mcmc_sample(&spec, 100_000, 7).unwrap());

        let hot = mcmc_sample(&spec.clone().with_beta(0.0), 20_000, 1).unwrap();
        assert!((hot.root_marginal_plus - 0.5).abs() < 0.03);
        assert_eq!(hot.acceptance_rate, 1.0);
    }
}
