//! Geometry of the order-k Cayley tree through its group representation.
//!
//! Vertices are reduced words over the generators `a_1, ..., a_{k+1}` of the
//! free product of `k+1` copies of the two-element group. The empty word is
//! the root. Since every generator is an involution, a word is reduced when no
//! two consecutive letters coincide, and the word length is the distance to
//! the root.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A vertex of the Cayley tree, stored as a reduced word of generator indices.
///
/// Ordering is shortlex (length first, then lexicographic), which is the
/// canonical enumeration order used throughout the crate.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Vertex(Vec<u8>);

impl Vertex {
    pub fn root() -> Self {
        Vertex(Vec::new())
    }

    /// Reduce an arbitrary word by cancelling adjacent equal letters.
    pub fn reduce(letters: &[usize], k: usize) -> Result<Self> {
        let mut word: Vec<u8> = Vec::with_capacity(letters.len());
        for &letter in letters {
            check_letter(letter, k)?;
            if word.last() == Some(&(letter as u8)) {
                word.pop();
            } else {
                word.push(letter as u8);
            }
        }
        Ok(Vertex(word))
    }

    /// Build a vertex from a word that must already be reduced.
    pub fn from_reduced(letters: &[usize], k: usize) -> Result<Self> {
        let v = Self::reduce(letters, k)?;
        if v.0.len() != letters.len() {
            return Err(Error::Parse(format!("word {letters:?} is not reduced")));
        }
        Ok(v)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    /// Word length, i.e. the distance to the root.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn last_letter(&self) -> Option<usize> {
        self.0.last().map(|&l| l as usize)
    }

    /// The predecessor `x_↓`; `None` for the root.
    pub fn parent(&self) -> Option<Vertex> {
        if self.0.is_empty() {
            None
        } else {
            Some(Vertex(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    /// Direct successors in ascending generator order.
    pub fn children(&self, k: usize) -> Vec<Vertex> {
        let last = self.0.last().copied();
        (1..=k + 1)
            .map(|g| g as u8)
            .filter(|&g| Some(g) != last)
            .map(|g| {
                let mut w = self.0.clone();
                w.push(g);
                Vertex(w)
            })
            .collect()
    }

    /// The `k+1` nearest neighbors: parent first (if any), then children by
    /// ascending generator index.
    pub fn neighbors(&self, k: usize) -> Vec<Vertex> {
        let mut out = Vec::with_capacity(k + 1);
        if let Some(p) = self.parent() {
            out.push(p);
        }
        out.extend(self.children(k));
        out
    }

    /// Right multiplication by a generator, i.e. moving along the edge labelled `letter`.
    pub fn step(&self, letter: usize) -> Vertex {
        let mut w = self.0.clone();
        if w.last() == Some(&(letter as u8)) {
            w.pop();
        } else {
            w.push(letter as u8);
        }
        Vertex(w)
    }

    /// Group product `xy` of two reduced words.
    pub fn product(&self, other: &Vertex) -> Vertex {
        let mut w = self.0.clone();
        for &l in &other.0 {
            if w.last() == Some(&l) {
                w.pop();
            } else {
                w.push(l);
            }
        }
        Vertex(w)
    }

    /// Group inverse: the reversed word.
    pub fn inverse(&self) -> Vertex {
        Vertex(self.0.iter().rev().copied().collect())
    }

    /// Number of occurrences of generator `a_j` in the word.
    pub fn letter_count(&self, j: usize) -> usize {
        self.0.iter().filter(|&&l| l as usize == j).count()
    }

    /// `true` iff `|x|` is even (membership in `G_k^{(2)}`).
    pub fn is_even(&self) -> bool {
        self.0.len().is_multiple_of(2)
    }

    /// Sublattice index: 0 for even length, 1 for odd.
    pub fn sublattice(&self) -> u8 {
        (self.0.len() % 2) as u8
    }
}

fn check_letter(letter: usize, k: usize) -> Result<()> {
    if letter == 0 || letter > k + 1 || letter > u8::MAX as usize {
        return Err(Error::InvalidGenerator {
            letter,
            max: k + 1,
        });
    }
    Ok(())
}

impl Ord for Vertex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Vertex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&l| l <= 9) {
            for l in &self.0 {
                write!(f, "{l}")?;
            }
        } else {
            let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
            write!(f, "{}", parts.join("."))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vertex(\"{self}\")")
    }
}

/// Parses the vertex string format without range checks; the word must be reduced.
///
/// Letters are single digits, or `.`-separated integers when some index exceeds 9.
impl FromStr for Vertex {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters: Vec<usize> = if s.is_empty() {
            Vec::new()
        } else if s.contains('.') {
            s.split('.')
                .map(|p| {
                    p.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad vertex string \"{s}\"")))
                })
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::Parse(format!("bad vertex string \"{s}\"")))
                })
                .collect::<Result<_>>()?
        };
        let max = letters.iter().copied().max().unwrap_or(1);
        Vertex::from_reduced(&letters, max.max(1))
    }
}

impl Vertex {
    /// Parse and check that every letter is a valid generator for order `k`.
    pub fn parse(s: &str, k: usize) -> Result<Self> {
        let v: Vertex = s.parse()?;
        for &l in &v.0 {
            check_letter(l as usize, k)?;
        }
        Ok(v)
    }
}

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Vertex {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Graph distance: `|x^{-1} y|`.
pub fn distance(x: &Vertex, y: &Vertex) -> usize {
    let common = x
        .0
        .iter()
        .zip(y.0.iter())
        .take_while(|(a, b)| a == b)
        .count();
    x.0.len() + y.0.len() - 2 * common
}

/// An unordered nearest-neighbor pair, stored with endpoints in canonical order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub struct Edge {
    a: Vertex,
    b: Vertex,
}

impl Edge {
    pub fn new(x: Vertex, y: Vertex) -> Result<Self> {
        if distance(&x, &y) != 1 {
            return Err(Error::Domain(format!(
                "\"{x}\" and \"{y}\" are not nearest neighbors"
            )));
        }
        Ok(Self::new_unchecked(x, y))
    }

    pub(crate) fn new_unchecked(x: Vertex, y: Vertex) -> Self {
        if x <= y {
            Edge { a: x, b: y }
        } else {
            Edge { a: y, b: x }
        }
    }

    /// The endpoint closer to the root.
    pub fn inner(&self) -> &Vertex {
        &self.a
    }

    /// The endpoint farther from the root.
    pub fn outer(&self) -> &Vertex {
        &self.b
    }

    pub fn endpoints(&self) -> [&Vertex; 2] {
        [&self.a, &self.b]
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        &self.a == v || &self.b == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(\"{}\",\"{}\")", self.a, self.b)
    }
}

/// A unit ball: a center and its `k+1` neighbors in canonical order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnitBall {
    pub center: Vertex,
    pub neighbors: Vec<Vertex>,
}

impl UnitBall {
    pub fn new(center: Vertex, k: usize) -> Self {
        let neighbors = center.neighbors(k);
        UnitBall { center, neighbors }
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        &self.center == v || self.neighbors.contains(v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = &Vertex> {
        std::iter::once(&self.center).chain(self.neighbors.iter())
    }
}

/// Branching order and volume radius.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TreeParams {
    pub k: usize,
    pub n: usize,
}

impl TreeParams {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Domain("branching order k must be at least 1".into()));
        }
        if k + 1 > u8::MAX as usize {
            return Err(Error::Domain(format!("branching order k = {k} is too large")));
        }
        Ok(TreeParams { k, n })
    }

    /// `|W_r|` for this order.
    pub fn sphere_size(&self, r: usize) -> u128 {
        if r == 0 {
            1
        } else {
            (self.k as u128 + 1) * (self.k as u128).pow(r as u32 - 1)
        }
    }

    /// `|V_r|` for this order.
    pub fn ball_size(&self, r: usize) -> u128 {
        (0..=r).map(|i| self.sphere_size(i)).sum()
    }

    /// `|V_n|`.
    pub fn volume_size(&self) -> u128 {
        self.ball_size(self.n)
    }
}

/// All vertices of the sphere `W_r` in canonical order.
pub fn enumerate_sphere(k: usize, r: usize) -> Vec<Vertex> {
    let mut layer = vec![Vertex::root()];
    for _ in 0..r {
        layer = layer.iter().flat_map(|v| v.children(k)).collect();
    }
    layer
}

/// All vertices of `V_n` ordered by length, then lexicographically.
pub fn enumerate_volume(params: TreeParams) -> Vec<Vertex> {
    let mut out = Vec::new();
    let mut layer = vec![Vertex::root()];
    for r in 0..=params.n {
        if r > 0 {
            layer = layer.iter().flat_map(|v| v.children(params.k)).collect();
        }
        out.extend(layer.iter().cloned());
    }
    out
}

/// A normal subgroup `H_A` of index two, given by a nonempty generator set `A`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CosetSubgroup {
    generators: Vec<usize>,
}

impl CosetSubgroup {
    pub fn new(generators: &[usize], k: usize) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidSubgroup("generator set A is empty".into()));
        }
        let mut gens = generators.to_vec();
        gens.sort_unstable();
        gens.dedup();
        for &g in &gens {
            if g == 0 || g > k + 1 {
                return Err(Error::InvalidSubgroup(format!(
                    "generator {g} not in 1..={}",
                    k + 1
                )));
            }
        }
        Ok(CosetSubgroup { generators: gens })
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// 0 if `x ∈ H_A`, 1 otherwise.
    pub fn coset(&self, x: &Vertex) -> u8 {
        let total: usize = self.generators.iter().map(|&j| x.letter_count(j)).sum();
        (total % 2) as u8
    }

    /// Every nonempty subset of `{1, ..., k+1}`.
    pub fn all(k: usize) -> Vec<CosetSubgroup> {
        (1u32..(1 << (k + 1)))
            .map(|mask| CosetSubgroup {
                generators: (0..=k).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect(),
            })
            .collect()
    }
}

/// Coset index of `x` relative to `H_A`.
pub fn subgroup_membership(x: &Vertex, generators: &[usize], k: usize) -> Result<u8> {
    Ok(CosetSubgroup::new(generators, k)?.coset(x))
}

/// A ball vertex seen from a volume: an index into it, or a vertex outside it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum VolumeSite {
    Inner(usize),
    Outer(Vertex),
}

/// A unit ball with its vertices resolved against a volume; `sites[0]` is the center.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ResolvedBall {
    pub center: Vertex,
    pub sites: Vec<VolumeSite>,
}

/// `V_m` with a dense index, for fast repeated lookups.
#[derive(Clone, Debug)]
pub struct IndexedVolume {
    params: TreeParams,
    vertices: Vec<Vertex>,
    index: HashMap<Vertex, usize>,
    interacting: OnceLock<Vec<ResolvedBall>>,
}

impl IndexedVolume {
    pub fn new(params: TreeParams) -> Self {
        let vertices = enumerate_volume(params);
        let index = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        IndexedVolume {
            params,
            vertices,
            index,
            interacting: OnceLock::new(),
        }
    }

    pub fn params(&self) -> TreeParams {
        self.params
    }

    pub fn k(&self) -> usize {
        self.params.k
    }

    pub fn radius(&self) -> usize {
        self.params.n
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Vertex {
        &self.vertices[i]
    }

    pub fn index_of(&self, v: &Vertex) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &Vertex) -> bool {
        self.index.contains_key(v)
    }

    /// The balls meeting the volume (centers in `V_{m+1}`), in shortlex order of centers.
    pub fn interacting_balls(&self) -> &[ResolvedBall] {
        self.interacting.get_or_init(|| {
            let k = self.params.k;
            enumerate_volume(TreeParams {
                k,
                n: self.params.n + 1,
            })
            .into_iter()
            .map(|center| {
                let sites = std::iter::once(center.clone())
                    .chain(center.neighbors(k))
                    .map(|v| match self.index_of(&v) {
                        Some(i) => VolumeSite::Inner(i),
                        None => VolumeSite::Outer(v),
                    })
                    .collect();
                ResolvedBall { center, sites }
            })
            .collect()
        })
    }
}
