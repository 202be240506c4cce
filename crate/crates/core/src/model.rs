//! Ball energies, class tables, phase regions and the Peierls gap.
//!
//! A unit-ball configuration is classified by its center spin and the number
//! of neighbors disagreeing with it. Its energy is an integer linear form in
//! `(J1/2, J2, alpha)` (or `(J1/2, J2, alpha0, alpha1)` with a sublattice
//! dependent field), so every comparison below is exact once the couplings are
//! rational.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_exact, int, Exact};
use crate::tree::Vertex;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Spin {
    Plus,
    Minus,
}

impl Spin {
    pub fn value(self) -> i64 {
        match self {
            Spin::Plus => 1,
            Spin::Minus => -1,
        }
    }

    pub fn flip(self) -> Spin {
        match self {
            Spin::Plus => Spin::Minus,
            Spin::Minus => Spin::Plus,
        }
    }

    pub fn from_value(v: i64) -> Result<Spin> {
        match v {
            1 => Ok(Spin::Plus),
            -1 => Ok(Spin::Minus),
            other => Err(Error::Domain(format!("spin value {other} is not +1 or -1"))),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Spin::Plus => '+',
            Spin::Minus => '-',
        }
    }
}

/// The class `(ε, i)` of a unit-ball configuration, with the center's
/// sublattice for the periodic-field model.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct BallClass {
    pub sign: Spin,
    pub disagree: usize,
    pub sublattice: Option<u8>,
}

impl BallClass {
    pub fn new(sign: Spin, disagree: usize) -> Self {
        BallClass {
            sign,
            disagree,
            sublattice: None,
        }
    }

    pub fn periodic(sign: Spin, disagree: usize, sublattice: u8) -> Self {
        BallClass {
            sign,
            disagree,
            sublattice: Some(sublattice),
        }
    }

    /// Image under the global spin flip.
    pub fn flipped(self) -> Self {
        BallClass {
            sign: self.sign.flip(),
            ..self
        }
    }

    fn key(&self) -> (usize, u8, Option<u8>) {
        let s = match self.sign {
            Spin::Plus => 0,
            Spin::Minus => 1,
        };
        (self.disagree, s, self.sublattice)
    }
}

impl Ord for BallClass {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for BallClass {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BallClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sublattice {
            None => write!(f, "({},{})", self.sign.symbol(), self.disagree),
            Some(j) => write!(f, "({},{},{})", self.sign.symbol(), self.disagree, j),
        }
    }
}

/// Integer coefficients of a class energy over `(J1/2, J2, field)`.
///
/// `field[0]` multiplies `alpha` (constant field) or `alpha0`; `field[1]`
/// multiplies `alpha1` and is zero for the constant-field model.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub struct EnergyCoefficients {
    pub half_j1: i64,
    pub j2: i64,
    pub field: [i64; 2],
}

impl EnergyCoefficients {
    pub fn alpha(&self) -> i64 {
        self.field[0]
    }
}

/// Coefficients of `U_{ε,i}` (or `U^{(j)}_{ε,i}`).
pub fn class_energy(cls: BallClass, k: usize) -> Result<EnergyCoefficients> {
    let i = cls.disagree as i64;
    let kk = k as i64;
    if cls.disagree > k + 1 {
        return Err(Error::InvalidClass(format!(
            "disagreement count {} exceeds k+1 = {}",
            cls.disagree,
            k + 1
        )));
    }
    let mut field = [0, 0];
    match cls.sublattice {
        None => field[0] = cls.sign.value(),
        Some(j @ (0 | 1)) => field[j as usize] = cls.sign.value(),
        Some(j) => {
            return Err(Error::InvalidClass(format!("sublattice index {j} not in {{0,1}}")))
        }
    }
    Ok(EnergyCoefficients {
        half_j1: kk + 1 - 2 * i,
        j2: kk * (kk + 1) / 2 + 2 * i * (i - kk - 1),
        field,
    })
}

pub fn class_energy_periodic(cls: BallClass, k: usize) -> Result<EnergyCoefficients> {
    if cls.sublattice.is_none() {
        return Err(Error::InvalidClass(
            "periodic-field class needs a sublattice index".into(),
        ));
    }
    class_energy(cls, k)
}

/// Class of a ball from its center spin and the `k+1` neighbor spins.
pub fn class_of_ball(center: Spin, neighbors: &[Spin], k: usize) -> Result<BallClass> {
    if neighbors.len() != k + 1 {
        return Err(Error::InvalidBall {
            expected: k + 1,
            got: neighbors.len(),
        });
    }
    let disagree = neighbors.iter().filter(|&&s| s != center).count();
    Ok(BallClass::new(center, disagree))
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CouplingConstants {
    pub j1: Exact,
    pub j2: Exact,
    pub alpha: Exact,
}

impl CouplingConstants {
    pub fn new(j1: Exact, j2: Exact, alpha: Exact) -> Self {
        CouplingConstants { j1, j2, alpha }
    }

    pub fn from_ints(j1: i64, j2: i64, alpha: i64) -> Self {
        Self::new(int(j1), int(j2), int(alpha))
    }
}

impl fmt::Display for CouplingConstants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(J1={}, J2={}, alpha={})",
            format_exact(&self.j1),
            format_exact(&self.j2),
            format_exact(&self.alpha)
        )
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PeriodicFieldConstants {
    pub j1: Exact,
    pub j2: Exact,
    pub alpha0: Exact,
    pub alpha1: Exact,
}

impl PeriodicFieldConstants {
    pub fn new(j1: Exact, j2: Exact, alpha0: Exact, alpha1: Exact) -> Self {
        PeriodicFieldConstants {
            j1,
            j2,
            alpha0,
            alpha1,
        }
    }

    pub fn from_ints(j1: i64, j2: i64, alpha0: i64, alpha1: i64) -> Self {
        Self::new(int(j1), int(j2), int(alpha0), int(alpha1))
    }
}

impl fmt::Display for PeriodicFieldConstants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(J1={}, J2={}, alpha0={}, alpha1={})",
            format_exact(&self.j1),
            format_exact(&self.j2),
            format_exact(&self.alpha0),
            format_exact(&self.alpha1)
        )
    }
}

/// Either model: constant field, or a field alternating between the even and
/// odd sublattices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Couplings {
    Constant(CouplingConstants),
    Periodic(PeriodicFieldConstants),
}

impl From<CouplingConstants> for Couplings {
    fn from(c: CouplingConstants) -> Self {
        Couplings::Constant(c)
    }
}

impl From<PeriodicFieldConstants> for Couplings {
    fn from(c: PeriodicFieldConstants) -> Self {
        Couplings::Periodic(c)
    }
}

impl fmt::Display for Couplings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Couplings::Constant(c) => c.fmt(f),
            Couplings::Periodic(p) => p.fmt(f),
        }
    }
}

impl Couplings {
    pub fn is_periodic(&self) -> bool {
        matches!(self, Couplings::Periodic(_))
    }

    pub fn j1(&self) -> &Exact {
        match self {
            Couplings::Constant(c) => &c.j1,
            Couplings::Periodic(p) => &p.j1,
        }
    }

    pub fn j2(&self) -> &Exact {
        match self {
            Couplings::Constant(c) => &c.j2,
            Couplings::Periodic(p) => &p.j2,
        }
    }

    /// Field value at a vertex.
    pub fn field_at(&self, x: &Vertex) -> &Exact {
        match self {
            Couplings::Constant(c) => &c.alpha,
            Couplings::Periodic(p) => {
                if x.is_even() {
                    &p.alpha0
                } else {
                    &p.alpha1
                }
            }
        }
    }

    /// Sublattice tag carried by classes of balls centered at `x`.
    pub fn sublattice_of(&self, x: &Vertex) -> Option<u8> {
        match self {
            Couplings::Constant(_) => None,
            Couplings::Periodic(_) => Some(x.sublattice()),
        }
    }

    /// The same model with every field value negated.
    pub fn mirrored(&self) -> Couplings {
        match self {
            Couplings::Constant(c) => {
                Couplings::Constant(CouplingConstants::new(c.j1.clone(), c.j2.clone(), -c.alpha.clone()))
            }
            Couplings::Periodic(p) => Couplings::Periodic(PeriodicFieldConstants::new(
                p.j1.clone(),
                p.j2.clone(),
                -p.alpha0.clone(),
                -p.alpha1.clone(),
            )),
        }
    }

    /// Every class the model distinguishes, in table order.
    pub fn classes(&self, k: usize) -> Vec<BallClass> {
        let sublattices: Vec<Option<u8>> = match self {
            Couplings::Constant(_) => vec![None],
            Couplings::Periodic(_) => vec![Some(0), Some(1)],
        };
        let mut out = Vec::new();
        for i in 0..=k + 1 {
            for sign in [Spin::Plus, Spin::Minus] {
                for &s in &sublattices {
                    out.push(BallClass {
                        sign,
                        disagree: i,
                        sublattice: s,
                    });
                }
            }
        }
        out
    }

    pub fn evaluate(&self, c: &EnergyCoefficients) -> Exact {
        if let Some(v) = self.evaluate_small(c) {
            return v;
        }
        let base = self.j1() * int(c.half_j1) / int(2) + self.j2() * int(c.j2);
        match self {
            Couplings::Constant(cc) => base + &cc.alpha * int(c.field[0]),
            Couplings::Periodic(p) => base + &p.alpha0 * int(c.field[0]) + &p.alpha1 * int(c.field[1]),
        }
    }

    /// `evaluate` over a common denominator in `i128`, when every coupling fits.
    fn evaluate_small(&self, c: &EnergyCoefficients) -> Option<Exact> {
        let (a0, a1) = match self {
            Couplings::Constant(cc) => (&cc.alpha, None),
            Couplings::Periodic(p) => (&p.alpha0, Some(&p.alpha1)),
        };
        let small = |x: &Exact| -> Option<(i128, i128)> { Some((x.numer().to_i64()? as i128, x.denom().to_i64()? as i128)) };
        let mut terms = vec![(small(self.j1())?, c.half_j1 as i128, 2i128), (small(self.j2())?, c.j2 as i128, 1), (small(a0)?, c.field[0] as i128, 1)];
        if let Some(a1) = a1 {
            terms.push((small(a1)?, c.field[1] as i128, 1));
        }
        let mut lcm: i128 = 1;
        for ((_, d), _, extra) in &terms {
            lcm = lcm.lcm(&d.checked_mul(*extra)?);
        }
        let mut sum: i128 = 0;
        for ((n, d), coef, extra) in &terms {
            let scale = lcm / (d * extra);
            sum = sum.checked_add(n.checked_mul(*coef)?.checked_mul(scale)?)?;
        }
        Some(Exact::new(BigInt::from(sum), BigInt::from(lcm)))
    }

    /// Exact energy of a class under these couplings.
    pub fn class_value(&self, cls: BallClass, k: usize) -> Result<Exact> {
        match (self, cls.sublattice) {
            (Couplings::Constant(_), Some(_)) => Err(Error::InvalidClass(
                "sublattice class given to the constant-field model".into(),
            )),
            (Couplings::Periodic(_), None) => Err(Error::InvalidClass(
                "periodic-field model needs a sublattice index".into(),
            )),
            _ => Ok(self.evaluate(&class_energy(cls, k)?)),
        }
    }

    pub fn energy_table(&self, k: usize) -> EnergyTable {
        let entries = self
            .classes(k)
            .into_iter()
            .map(|c| {
                let v = self.evaluate(&class_energy(c, k).expect("class in range"));
                (c, v)
            })
            .collect();
        EnergyTable { k, entries }
    }

    /// Class of the ball centered at `center`.
    pub fn class_at(&self, center: &Vertex, center_spin: Spin, neighbors: &[Spin], k: usize) -> Result<BallClass> {
        let mut cls = class_of_ball(center_spin, neighbors, k)?;
        cls.sublattice = self.sublattice_of(center);
        Ok(cls)
    }

    /// Direct evaluation of the ball energy from the spins: half the
    /// nearest-neighbor bonds, every neighbor pair once, and the center field.
    pub fn ball_energy_at(&self, center: &Vertex, center_spin: Spin, neighbors: &[Spin], k: usize) -> Result<Exact> {
        if neighbors.len() != k + 1 {
            return Err(Error::InvalidBall {
                expected: k + 1,
                got: neighbors.len(),
            });
        }
        let c = center_spin.value();
        let bonds: i64 = neighbors.iter().map(|s| s.value() * c).sum();
        let mut pairs = 0i64;
        for (a, sa) in neighbors.iter().enumerate() {
            for sb in &neighbors[a + 1..] {
                pairs += sa.value() * sb.value();
            }
        }
        Ok(self.j1() * int(bonds) / int(2) + self.j2() * int(pairs) + self.field_at(center) * int(c))
    }
}

/// All class energies of a model at fixed couplings.
#[derive(Clone, Debug)]
pub struct EnergyTable {
    k: usize,
    entries: Vec<(BallClass, Exact)>,
}

impl EnergyTable {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn entries(&self) -> &[(BallClass, Exact)] {
        &self.entries
    }

    pub fn get(&self, cls: &BallClass) -> Option<&Exact> {
        self.entries.iter().find(|(c, _)| c == cls).map(|(_, v)| v)
    }

    pub fn min(&self) -> &Exact {
        self.entries
            .iter()
            .map(|(_, v)| v)
            .min()
            .expect("energy table is never empty")
    }

    /// Exact argmin, ties preserved, in table order.
    pub fn minimal_classes(&self) -> Vec<BallClass> {
        let m = self.min();
        self.entries
            .iter()
            .filter(|(_, v)| v == m)
            .map(|(c, _)| *c)
            .collect()
    }

    /// Gap between the minimum and the next distinct value; zero when every
    /// class shares the minimum.
    pub fn lambda0(&self) -> Exact {
        let m = self.min();
        self.entries
            .iter()
            .map(|(_, v)| v)
            .filter(|v| *v > m)
            .min()
            .map(|next| next - m)
            .unwrap_or_else(Exact::zero)
    }
}

pub fn ball_energy(center: Spin, neighbors: &[Spin], j: &CouplingConstants, k: usize) -> Result<Exact> {
    Couplings::Constant(j.clone()).ball_energy_at(&Vertex::root(), center, neighbors, k)
}

pub fn energy_table(j: &CouplingConstants, k: usize) -> EnergyTable {
    Couplings::Constant(j.clone()).energy_table(k)
}

pub fn minimal_classes(j: &CouplingConstants, k: usize) -> Vec<BallClass> {
    energy_table(j, k).minimal_classes()
}

pub fn minimal_classes_periodic(p: &PeriodicFieldConstants, k: usize) -> Vec<BallClass> {
    Couplings::Periodic(p.clone()).energy_table(k).minimal_classes()
}

pub fn lambda0(j: &CouplingConstants, k: usize) -> Exact {
    energy_table(j, k).lambda0()
}

/// Names a phase region `A_{ε,m}` (or `A^{(j)}_{ε,m}`), closed or open.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct RegionLabel {
    pub sign: Spin,
    pub m: usize,
    pub sublattice: Option<u8>,
    pub interior: bool,
}

impl RegionLabel {
    pub fn closed(sign: Spin, m: usize) -> Self {
        RegionLabel {
            sign,
            m,
            sublattice: None,
            interior: false,
        }
    }

    pub fn open(sign: Spin, m: usize) -> Self {
        RegionLabel {
            interior: true,
            ..Self::closed(sign, m)
        }
    }

    pub fn periodic(sign: Spin, m: usize, sublattice: u8) -> Self {
        RegionLabel {
            sublattice: Some(sublattice),
            ..Self::closed(sign, m)
        }
    }

    pub fn class(&self) -> BallClass {
        BallClass {
            sign: self.sign,
            disagree: self.m,
            sublattice: self.sublattice,
        }
    }
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = if self.interior { "int " } else { "" };
        match self.sublattice {
            None => write!(f, "{prefix}A({},{})", self.sign.symbol(), self.m),
            Some(j) => write!(f, "{prefix}A({},{})^({j})", self.sign.symbol(), self.m),
        }
    }
}

/// Either `a <= b` or `a < b`.
fn le(a: &Exact, b: &Exact, strict: bool) -> bool {
    if strict {
        a < b
    } else {
        a <= b
    }
}

/// The nearest-neighbor/next-nearest part of the closed forms: the inequalities
/// on `(J1, J2)` that make `m` the optimal disagreement count.
fn coupling_condition(j1: &Exact, j2: &Exact, k: usize, m: usize, strict: bool) -> bool {
    let zero = Exact::zero();
    let kk = k as i64;
    if m == 0 {
        le(j1, &zero, strict) && le(&(j1 + j2 * int(2 * kk)), &zero, strict)
    } else if m <= k {
        let mm = m as i64;
        let lower = j2 * int(2 * (2 * mm - kk - 2));
        let upper = j2 * int(2 * (2 * mm - kk));
        le(&zero, j2, strict) && le(&lower, j1, strict) && le(j1, &upper, strict)
    } else {
        le(&zero, j1, strict) && le(&zero, &(j1 - j2 * int(2 * kk)), strict)
    }
}

/// Closed-form membership in `A_{ε,m}` for any order `k`.
pub fn region_membership(j: &CouplingConstants, k: usize, label: RegionLabel) -> Result<bool> {
    if label.sublattice.is_some() {
        return Err(Error::InvalidClass(
            "constant-field regions carry no sublattice index".into(),
        ));
    }
    if label.m > k + 1 {
        return Err(Error::InvalidClass(format!("m = {} exceeds k+1", label.m)));
    }
    let zero = Exact::zero();
    let signed_alpha = &j.alpha * int(label.sign.value());
    Ok(coupling_condition(&j.j1, &j.j2, k, label.m, label.interior)
        && le(&signed_alpha, &zero, label.interior))
}

/// Closed-form membership in `A^{(j)}_{ε,m}`; available for `k = 2` only.
pub fn region_membership_periodic(p: &PeriodicFieldConstants, label: RegionLabel, k: usize) -> Result<bool> {
    if k != 2 {
        return Err(Error::Unsupported(format!(
            "closed-form periodic-field regions are known for k = 2 only (got k = {k})"
        )));
    }
    let j = match label.sublattice {
        Some(j @ (0 | 1)) => j,
        _ => {
            return Err(Error::InvalidClass(
                "periodic-field region needs sublattice 0 or 1".into(),
            ))
        }
    };
    if label.m > k + 1 {
        return Err(Error::InvalidClass(format!("m = {} exceeds k+1", label.m)));
    }
    let (own, other) = if j == 0 {
        (&p.alpha0, &p.alpha1)
    } else {
        (&p.alpha1, &p.alpha0)
    };
    let zero = Exact::zero();
    // -ε·α_j ≥ 0 and |α_other| ≤ -ε·α_j
    let neg_signed = -(own * int(label.sign.value()));
    Ok(coupling_condition(&p.j1, &p.j2, k, label.m, label.interior)
        && le(&zero, &neg_signed, label.interior)
        && le(&other.abs(), &neg_signed, label.interior))
}

/// All closed region labels of a model.
pub fn region_labels(k: usize, periodic: bool) -> Vec<RegionLabel> {
    let mut out = Vec::new();
    for m in 0..=k + 1 {
        for sign in [Spin::Plus, Spin::Minus] {
            if periodic {
                out.push(RegionLabel::periodic(sign, m, 0));
                out.push(RegionLabel::periodic(sign, m, 1));
            } else {
                out.push(RegionLabel::closed(sign, m));
            }
        }
    }
    out
}

/// Closed regions containing the given parameter point.
pub fn containing_regions(c: &Couplings, k: usize) -> Result<Vec<RegionLabel>> {
    let mut out = Vec::new();
    for label in region_labels(k, c.is_periodic()) {
        let inside = match c {
            Couplings::Constant(j) => region_membership(j, k, label)?,
            Couplings::Periodic(p) => region_membership_periodic(p, label, k)?,
        };
        if inside {
            out.push(label);
        }
    }
    Ok(out)
}

/// Membership in `P = int A_{+,0} ∪ int A_{-,0}` for `k = 2`.
pub fn in_peierls_region(j: &CouplingConstants, k: usize) -> Result<bool> {
    if k != 2 {
        return Err(Error::Unsupported(format!(
            "the Peierls region is defined for k = 2 only (got k = {k})"
        )));
    }
    let zero = Exact::zero();
    Ok(j.j1 < zero && &j.j1 + &j.j2 * int(4) < zero && !j.alpha.is_zero())
}
