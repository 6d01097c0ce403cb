//! Gröbner cones of Hibi-type and Plücker ideals as H-descriptions over the
//! lattice-indexed weight space, facet witnesses, initial forms, and the
//! linear maps `σ`, `ρ` from the tropical Grassmannian coordinates.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{internal, invalid, Error, Result};
use crate::order::{diamond_pairs, DistributiveLattice};
use crate::plucker::{LatticeKind, PairKind, PluckerLattice};
use crate::poly::{coeff, format_coeff, parse_coeff, Coeff};
use crate::polytope::{odot_elements, ChainOrderPartition};
use crate::straighten::{ladder, straighten_pair, LatticePolynomial};

/// A weight on lattice elements.
pub type WeightVector = Vec<Coeff>;

/// Which cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConeTarget {
    /// Minimal description of the cone of the Hibi ideal.
    Hibi,
    /// Minimal description of the cone of the generalized Hibi ideal.
    Genhibi,
    /// Minimal description of the maximal cone for semistandard tableaux.
    Ssyt,
    /// Minimal description of the maximal cone for PBW-semistandard tableaux.
    Pbw,
    /// One inequality per incomparable pair for the Hibi ideal.
    HibiRedundant,
    /// One inequality per incomparable pair for the generalized Hibi ideal.
    GenhibiRedundant,
    /// One inequality per term of every straightening relation in `M(n)`.
    SsytRedundant,
    /// One inequality per term of every straightening relation in `N(n)`.
    PbwRedundant,
    /// The cone whose initial ideal is the Hibi ideal of `M(n)`.
    ToricGt,
    /// The cone whose initial ideal is the generalized Hibi ideal of `N(n)`.
    ToricFflv,
}

impl ConeTarget {
    /// All targets.
    pub const ALL: [ConeTarget; 10] = [
        ConeTarget::Hibi,
        ConeTarget::Genhibi,
        ConeTarget::Ssyt,
        ConeTarget::Pbw,
        ConeTarget::HibiRedundant,
        ConeTarget::GenhibiRedundant,
        ConeTarget::SsytRedundant,
        ConeTarget::PbwRedundant,
        ConeTarget::ToricGt,
        ConeTarget::ToricFflv,
    ];

    /// Canonical name such as `SSYT_REDUNDANT`.
    pub fn name(self) -> &'static str {
        match self {
            ConeTarget::Hibi => "HIBI",
            ConeTarget::Genhibi => "GENHIBI",
            ConeTarget::Ssyt => "SSYT",
            ConeTarget::Pbw => "PBW",
            ConeTarget::HibiRedundant => "HIBI_REDUNDANT",
            ConeTarget::GenhibiRedundant => "GENHIBI_REDUNDANT",
            ConeTarget::SsytRedundant => "SSYT_REDUNDANT",
            ConeTarget::PbwRedundant => "PBW_REDUNDANT",
            ConeTarget::ToricGt => "TORIC_GT",
            ConeTarget::ToricFflv => "TORIC_FFLV",
        }
    }

    /// True for the four minimal descriptions.
    pub fn is_minimal(self) -> bool {
        matches!(self, ConeTarget::Hibi | ConeTarget::Genhibi | ConeTarget::Ssyt | ConeTarget::Pbw)
    }
}

impl fmt::Display for ConeTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConeTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        ConeTarget::ALL
            .into_iter()
            .find(|t| t.name() == norm)
            .ok_or_else(|| invalid(format!("unknown cone target `{s}`")))
    }
}

/// Relation of a linear form to zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rel {
    /// `form < 0`.
    #[serde(rename = "<")]
    Lt,
    /// `form <= 0`.
    #[serde(rename = "<=")]
    Le,
    /// `form = 0`.
    #[serde(rename = "=")]
    Eq,
}

/// `Σ c_a w_a  rel  0` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearInequality {
    /// Nonzero coefficients by element.
    pub terms: BTreeMap<usize, i64>,
    /// Relation to zero.
    pub rel: Rel,
}

impl LinearInequality {
    /// Builds `Σ c w  rel  0`, merging repeated elements.
    pub fn new(terms: &[(usize, i64)], rel: Rel) -> Self {
        let mut map = BTreeMap::new();
        for &(a, c) in terms {
            *map.entry(a).or_insert(0) += c;
        }
        map.retain(|_, c| *c != 0);
        LinearInequality { terms: map, rel }
    }

    /// Value of the form at `w`.
    pub fn eval(&self, w: &[Coeff]) -> Coeff {
        self.terms.iter().fold(Coeff::zero(), |acc, (&a, &c)| acc + &w[a] * coeff(c))
    }

    /// True when `w` satisfies the relation.
    pub fn holds(&self, w: &[Coeff]) -> bool {
        let v = self.eval(w);
        match self.rel {
            Rel::Lt => v.is_negative(),
            Rel::Le => !v.is_positive(),
            Rel::Eq => v.is_zero(),
        }
    }

    /// True when `w` satisfies the closure of the relation.
    pub fn holds_weakly(&self, w: &[Coeff]) -> bool {
        let v = self.eval(w);
        match self.rel {
            Rel::Lt | Rel::Le => !v.is_positive(),
            Rel::Eq => v.is_zero(),
        }
    }
}

/// Where an inequality comes from: the pair and the ladder index `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Provenance {
    /// First element of the pair.
    pub a: usize,
    /// Second element of the pair.
    pub b: usize,
    /// Index of the compared term (0 for the first ladder term).
    pub index: usize,
}

/// An H-description of a cone in the weight space indexed by lattice elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeHRep {
    /// Which cone.
    pub target: ConeTarget,
    /// Parameter `n` for cones of Plücker lattices.
    pub n: Option<usize>,
    /// Number of coordinates.
    pub dim: usize,
    /// Inequalities in emission order.
    pub inequalities: Vec<LinearInequality>,
    /// Origin of each inequality.
    pub provenance: Vec<Provenance>,
}

impl ConeHRep {
    fn new(target: ConeTarget, n: Option<usize>, dim: usize) -> Self {
        ConeHRep {
            target,
            n,
            dim,
            inequalities: Vec::new(),
            provenance: Vec::new(),
        }
    }

    fn push(&mut self, seen: &mut HashSet<LinearInequality>, ineq: LinearInequality, prov: Provenance) -> Result<()> {
        if ineq.terms.is_empty() {
            return Err(internal(format!("empty form from pair ({}, {})", prov.a, prov.b)));
        }
        if seen.insert(ineq.clone()) {
            self.inequalities.push(ineq);
            self.provenance.push(prov);
        }
        Ok(())
    }

    /// Number of inequalities.
    pub fn len(&self) -> usize {
        self.inequalities.len()
    }

    /// True when there are no inequalities.
    pub fn is_empty(&self) -> bool {
        self.inequalities.is_empty()
    }

    /// Serializable form with element names from `name`.
    pub fn to_json(&self, name: impl Fn(usize) -> String) -> ConeJson {
        ConeJson {
            target: self.target,
            n: self.n,
            inequalities: self
                .inequalities
                .iter()
                .map(|q| InequalityJson {
                    terms: q.terms.iter().map(|(&a, &c)| (name(a), c)).collect(),
                    rel: q.rel,
                })
                .collect(),
            provenance: self
                .provenance
                .iter()
                .map(|p| ProvenanceJson {
                    a: name(p.a),
                    b: name(p.b),
                    index: p.index,
                })
                .collect(),
        }
    }
}

/// Serialized inequality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityJson {
    /// Coefficients by element name.
    pub terms: BTreeMap<String, i64>,
    /// Relation to zero.
    pub rel: Rel,
}

/// Serialized provenance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProvenanceJson {
    /// First element.
    pub a: String,
    /// Second element.
    pub b: String,
    /// Ladder index.
    pub index: usize,
}

/// Serialized cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeJson {
    /// Which cone.
    pub target: ConeTarget,
    /// Parameter `n`, when applicable.
    pub n: Option<usize>,
    /// Inequalities.
    pub inequalities: Vec<InequalityJson>,
    /// Origin of each inequality.
    pub provenance: Vec<ProvenanceJson>,
}

/// What a cone is built from.
#[derive(Clone, Copy, Debug)]
pub enum ConeContext<'a> {
    /// A distributive lattice.
    Lattice(&'a DistributiveLattice),
    /// A distributive lattice with a split of its join-irreducibles.
    Partitioned(&'a DistributiveLattice, &'a ChainOrderPartition),
    /// A lattice of Plücker variables.
    Plucker(&'a PluckerLattice),
}

impl<'a> ConeContext<'a> {
    /// The underlying lattice.
    pub fn lattice(&self) -> &'a DistributiveLattice {
        match *self {
            ConeContext::Lattice(l) | ConeContext::Partitioned(l, _) => l,
            ConeContext::Plucker(p) => p.lattice(),
        }
    }

    fn partition(&self) -> Result<&'a ChainOrderPartition> {
        match *self {
            ConeContext::Partitioned(_, p) => Ok(p),
            ConeContext::Plucker(p) => Ok(p.partition()),
            ConeContext::Lattice(_) => Err(invalid("this cone needs a chain-order partition")),
        }
    }

    fn plucker(&self, kind: LatticeKind) -> Result<&'a PluckerLattice> {
        match *self {
            ConeContext::Plucker(p) if p.kind() == kind => Ok(p),
            _ => Err(invalid(format!("this cone needs the lattice {kind}(n)"))),
        }
    }

    fn n(&self) -> Option<usize> {
        match *self {
            ConeContext::Plucker(p) => Some(p.n()),
            _ => None,
        }
    }
}

fn pair_form(a: usize, b: usize, c: usize, d: usize) -> Vec<(usize, i64)> {
    vec![(a, 1), (b, 1), (c, -1), (d, -1)]
}

/// Builds the H-description of a cone.
pub fn cone_hrep(target: ConeTarget, ctx: ConeContext<'_>) -> Result<ConeHRep> {
    let l = ctx.lattice();
    let mut h = ConeHRep::new(target, ctx.n(), l.len());
    let mut seen = HashSet::new();
    let prov = |a, b, index| Provenance { a, b, index };
    match target {
        ConeTarget::Hibi | ConeTarget::HibiRedundant => {
            let pairs = if target == ConeTarget::Hibi { diamond_pairs(l) } else { l.incomparable_pairs() };
            for (a, b) in pairs {
                let q = LinearInequality::new(&pair_form(a, b, l.meet(a, b), l.join(a, b)), Rel::Lt);
                h.push(&mut seen, q, prov(a, b, 0))?;
            }
        }
        ConeTarget::Genhibi | ConeTarget::GenhibiRedundant => {
            let part = ctx.partition()?;
            let pairs = if target == ConeTarget::Genhibi { diamond_pairs(l) } else { l.incomparable_pairs() };
            for (a, b) in pairs {
                let o = odot_elements(l, part, a, b)?;
                let q = LinearInequality::new(&pair_form(a, b, o, l.join(a, b)), Rel::Lt);
                h.push(&mut seen, q, prov(a, b, 0))?;
            }
        }
        ConeTarget::Ssyt | ConeTarget::Pbw => {
            let kind = if target == ConeTarget::Ssyt { LatticeKind::M } else { LatticeKind::N };
            let pl = ctx.plucker(kind)?;
            for (a, b) in diamond_pairs(l) {
                let c = pl.classify_pair(a, b)?;
                let first = match kind {
                    LatticeKind::M => c.meet,
                    LatticeKind::N => c.below.expect("a ⊙ b"),
                };
                h.push(&mut seen, LinearInequality::new(&pair_form(a, b, first, c.join), Rel::Lt), prov(a, b, 0))?;
                if c.kind == PairKind::DiamondSpecial {
                    let (lo, hi) = match kind {
                        LatticeKind::M => (c.below.expect("p1"), c.above.expect("q1")),
                        LatticeKind::N => (c.meet, c.above.expect("h1")),
                    };
                    h.push(&mut seen, LinearInequality::new(&pair_form(a, b, lo, hi), Rel::Lt), prov(a, b, 1))?;
                }
            }
        }
        ConeTarget::SsytRedundant | ConeTarget::PbwRedundant | ConeTarget::ToricGt | ConeTarget::ToricFflv => {
            let kind = match target {
                ConeTarget::SsytRedundant | ConeTarget::ToricGt => LatticeKind::M,
                _ => LatticeKind::N,
            };
            let pl = ctx.plucker(kind)?;
            let toric = matches!(target, ConeTarget::ToricGt | ConeTarget::ToricFflv);
            for (a, b) in l.incomparable_pairs() {
                let s = straighten_pair(pl, a, b)?;
                for (i, t) in ladder(pl, &s, a, b).into_iter().enumerate() {
                    let rel = if toric && i == 0 { Rel::Eq } else { Rel::Lt };
                    if toric && i == 0 {
                        let expected = match kind {
                            LatticeKind::M => l.meet(a, b),
                            LatticeKind::N => odot_elements(l, pl.partition(), a, b)?,
                        };
                        if t.lower != expected || t.upper != l.join(a, b) || !t.coeff.is_one() {
                            return Err(internal(format!(
                                "leading straightening term of ({}, {}) is not the toric one",
                                pl.id(a),
                                pl.id(b)
                            )));
                        }
                    }
                    let q = LinearInequality::new(&pair_form(a, b, t.lower, t.upper), rel);
                    h.push(&mut seen, q, prov(a, b, i))?;
                }
            }
        }
    }
    Ok(h)
}

/// True when `w` satisfies every inequality.
pub fn contains(h: &ConeHRep, w: &[Coeff]) -> Result<bool> {
    if w.len() != h.dim {
        return Err(invalid(format!("weight has {} coordinates, cone lives in {}", w.len(), h.dim)));
    }
    Ok(h.inequalities.iter().all(|q| q.holds(w)))
}

/// Indices of the violated inequalities.
pub fn violations(h: &ConeHRep, w: &[Coeff]) -> Vec<usize> {
    (0..h.len()).filter(|&i| !h.inequalities[i].holds(w)).collect()
}

/// Terms of `p` whose monomial weight is minimal.
pub fn initial_form(p: &LatticePolynomial, w: &[Coeff]) -> LatticePolynomial {
    let weight = |m: &Vec<usize>| m.iter().fold(Coeff::zero(), |acc, &a| acc + &w[a]);
    let Some(min) = p.terms().map(|(m, _)| weight(m)).min() else {
        return LatticePolynomial::zero();
    };
    let mut out = LatticePolynomial::zero();
    for (m, c) in p.terms() {
        if weight(m) == min {
            out.add_term(m.clone(), c.clone());
        }
    }
    out
}

/// `w_a = 3^{rank(a)}`, which satisfies every inequality of every target.
pub fn interior_witness(l: &DistributiveLattice) -> WeightVector {
    (0..l.len()).map(|a| big_pow(3, l.grade(a))).collect()
}

fn big_pow(base: i64, e: u32) -> Coeff {
    BigRational::from_integer(num_traits::pow(BigInt::from(base), e as usize))
}

fn hibi_witness(l: &DistributiveLattice, a: usize, b: usize) -> WeightVector {
    let x = l.grade(a) as i64;
    (0..l.len())
        .map(|c| if c == a || c == b { coeff(1) } else { coeff((l.grade(c) as i64 - x).pow(2)) })
        .collect()
}

fn genhibi_witness(l: &DistributiveLattice, part: &ChainOrderPartition, a: usize, b: usize) -> Result<WeightVector> {
    let o = odot_elements(l, part, a, b)?;
    let x = l.grade(a);
    let gap = x - l.grade(o);
    let big_a = num_traits::pow(BigInt::from(3), gap as usize);
    Ok((0..l.len())
        .map(|c| {
            let g = l.grade(c);
            if c == a || c == b {
                BigRational::from_integer(big_a.clone())
            } else if g >= x {
                BigRational::from_integer(num_traits::pow(big_a.clone(), (g - x) as usize))
            } else {
                big_pow(3, x - g)
            }
        })
        .collect())
}

fn ssyt_special_witness(m: &PluckerLattice, a: usize, b: usize) -> Result<WeightVector> {
    let c = m.classify_pair(a, b)?;
    if c.kind != PairKind::DiamondSpecial {
        return Err(invalid("pair is not special"));
    }
    let l = m.lattice();
    let p = l.poset();
    let (p1, q1, join) = (c.below.expect("p1"), c.above.expect("q1"), c.join);
    let x = l.grade(a) as i64;
    Ok((0..l.len())
        .map(|e| {
            let g = l.grade(e) as i64;
            let v = match g - x {
                2 => {
                    if e == q1 {
                        0
                    } else {
                        2
                    }
                }
                1 => {
                    if e == join {
                        1
                    } else if p.lt(e, q1) {
                        0
                    } else {
                        1
                    }
                }
                0 => {
                    if p.lt(e, join) {
                        1
                    } else if p.lt(e, q1) {
                        0
                    } else {
                        1
                    }
                }
                -1 => 1,
                -2 => {
                    if e == p1 {
                        1
                    } else {
                        2
                    }
                }
                d => 1i64 << d.unsigned_abs(),
            };
            coeff(v)
        })
        .collect())
}

/// A weight that violates inequality `facet` of a minimal description and
/// satisfies all others strictly.
pub fn facet_witness(h: &ConeHRep, ctx: ConeContext<'_>, facet: usize) -> Result<WeightVector> {
    let v = base_witness(h, ctx, facet)?;
    let own = &h.inequalities[facet];
    let excess = own.eval(&v);
    if !excess.is_positive() || check_witness(h, facet, &v).others_strict {
        return Ok(v);
    }
    let u = interior_witness(ctx.lattice());
    let slope = own.eval(&u);
    let eps = if slope.is_negative() { excess / (-slope * coeff(2)) } else { Coeff::one() };
    Ok(v.iter().zip(&u).map(|(x, y)| x + &eps * y).collect())
}

/// The level-based weight attached to a facet, which violates its inequality
/// and satisfies the others weakly.
pub fn base_witness(h: &ConeHRep, ctx: ConeContext<'_>, facet: usize) -> Result<WeightVector> {
    let prov = *h
        .provenance
        .get(facet)
        .ok_or_else(|| invalid(format!("facet {facet} out of range (0..{})", h.len())))?;
    let (a, b) = (prov.a, prov.b);
    let l = ctx.lattice();
    match (h.target, prov.index) {
        (ConeTarget::Hibi, _) | (ConeTarget::Ssyt, 0) => Ok(hibi_witness(l, a, b)),
        (ConeTarget::Genhibi, _) | (ConeTarget::Pbw, 0) => genhibi_witness(l, ctx.partition()?, a, b),
        (ConeTarget::Ssyt, _) => ssyt_special_witness(ctx.plucker(LatticeKind::M)?, a, b),
        (ConeTarget::Pbw, _) => {
            let nl = ctx.plucker(LatticeKind::N)?;
            let m = nl.m_lattice().ok_or_else(|| internal("N(n) without M(n)"))?;
            let v = ssyt_special_witness(m, nl.tau_inv(a)?, nl.tau_inv(b)?)?;
            (0..nl.len()).map(|c| Ok(v[nl.tau_inv(c)?].clone())).collect()
        }
        (t, _) => Err(invalid(format!("facet witnesses are provided for minimal descriptions, not {t}"))),
    }
}

/// Outcome of checking a facet witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    /// Facet index.
    pub facet: usize,
    /// The facet's own inequality fails.
    pub violates_own: bool,
    /// Every other inequality holds weakly.
    pub others_weak: bool,
    /// Every other inequality holds strictly.
    pub others_strict: bool,
}

impl WitnessCheck {
    /// The witness violates exactly its own inequality.
    pub fn ok(&self) -> bool {
        self.violates_own && self.others_strict
    }
}

/// Checks a witness against a description.
pub fn check_witness(h: &ConeHRep, facet: usize, w: &[Coeff]) -> WitnessCheck {
    let others = (0..h.len()).filter(|&i| i != facet);
    WitnessCheck {
        facet,
        violates_own: !h.inequalities[facet].holds(w),
        others_weak: others.clone().all(|i| h.inequalities[i].holds_weakly(w)),
        others_strict: others.into_iter().all(|i| h.inequalities[i].holds(w)),
    }
}

/// Facet counts of the minimal descriptions for `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetCounts {
    /// Parameter `n`.
    pub n: usize,
    /// Diamond pairs of `M(n)`.
    pub diamond: usize,
    /// Special pairs of `M(n)`.
    pub special: usize,
    /// Inequalities of the minimal SSYT description.
    pub ssyt: usize,
    /// Inequalities of the minimal PBW description.
    pub pbw: usize,
    /// `2^{n−5}(n^2 − n − 2)`.
    pub diamond_formula: u64,
    /// `2^{n−4}(n − 3) + 2^{n−3}`.
    pub special_formula: u64,
    /// `2^{n−5}(n^2 + n − 4)`.
    pub total_formula: u64,
}

fn times_two_pow(x: u64, e: i64) -> u64 {
    if e >= 0 {
        x << e
    } else {
        x >> (-e)
    }
}

/// Counts the facets of both minimal descriptions by building them.
pub fn facet_count(n: usize) -> Result<FacetCounts> {
    if n < 3 {
        return Err(invalid("facet counts need n ≥ 3"));
    }
    let m = crate::plucker::build_m(n)?;
    let nl = crate::plucker::build_n(n)?;
    let pairs = diamond_pairs(m.lattice());
    let mut special = 0;
    for &(a, b) in &pairs {
        if m.classify_pair(a, b)?.kind == PairKind::DiamondSpecial {
            special += 1;
        }
    }
    let ssyt = cone_hrep(ConeTarget::Ssyt, ConeContext::Plucker(&m))?.len();
    let pbw = cone_hrep(ConeTarget::Pbw, ConeContext::Plucker(&nl))?.len();
    let (nn, e) = (n as u64, n as i64);
    Ok(FacetCounts {
        n,
        diamond: pairs.len(),
        special,
        ssyt,
        pbw,
        diamond_formula: times_two_pow(nn * nn - nn - 2, e - 5),
        special_formula: times_two_pow(nn - 3, e - 4) + times_two_pow(1, e - 3),
        total_formula: times_two_pow(nn * nn + nn - 4, e - 5),
    })
}

/// A point `(z, c)` of the coordinates on which `σ` and `ρ` are defined:
/// `z_{s,t}` for `1 ≤ s ≤ n − 1`, `s ≤ t ≤ n`, and `c_1, …, c_{n−1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XiPoint {
    /// Parameter `n`.
    pub n: usize,
    /// Entries `z_{s,t}`.
    pub z: BTreeMap<(u8, u8), Coeff>,
    /// Entries `c_k`.
    pub c: Vec<Coeff>,
}

/// Serialized point: `z` keyed `"s,t"`, rationals as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct XiPointJson {
    /// Parameter `n`.
    pub n: usize,
    /// Entries `z_{s,t}`.
    pub z: BTreeMap<String, String>,
    /// Entries `c_k`.
    pub c: Vec<String>,
}

impl XiPoint {
    /// The zero point.
    pub fn zero(n: usize) -> Self {
        let mut z = BTreeMap::new();
        for s in 1..n as u8 {
            for t in s..=n as u8 {
                z.insert((s, t), Coeff::zero());
            }
        }
        XiPoint {
            n,
            z,
            c: vec![Coeff::zero(); n - 1],
        }
    }

    /// `z_{s,t}`.
    pub fn zv(&self, s: u8, t: u8) -> Coeff {
        self.z.get(&(s, t)).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Serializable form.
    pub fn to_json(&self) -> XiPointJson {
        XiPointJson {
            n: self.n,
            z: self.z.iter().map(|(&(s, t), v)| (format!("{s},{t}"), format_coeff(v))).collect(),
            c: self.c.iter().map(format_coeff).collect(),
        }
    }

    /// Parses the serialized form; missing `z` entries are zero.
    pub fn from_json(j: &XiPointJson) -> Result<Self> {
        let mut p = XiPoint::zero(j.n);
        for (k, v) in &j.z {
            let (s, t) = k
                .split_once(',')
                .and_then(|(s, t)| Some((s.trim().parse::<u8>().ok()?, t.trim().parse::<u8>().ok()?)))
                .ok_or_else(|| invalid(format!("bad z key `{k}`")))?;
            if !p.z.contains_key(&(s, t)) {
                return Err(invalid(format!("z_{{{s},{t}}} is not a coordinate for n = {}", j.n)));
            }
            p.z.insert((s, t), parse_coeff(v).ok_or_else(|| invalid(format!("bad rational `{v}`")))?);
        }
        if j.c.len() != j.n - 1 {
            return Err(invalid(format!("expected {} entries in c", j.n - 1)));
        }
        p.c = j
            .c
            .iter()
            .map(|v| parse_coeff(v).ok_or_else(|| invalid(format!("bad rational `{v}`"))))
            .collect::<Result<_>>()?;
        Ok(p)
    }
}

/// `z_{s,t} + z_{s+1,t+1} − z_{s,t+1} − z_{s+1,t}`.
pub fn binomial(xi: &XiPoint, s: u8, t: u8) -> Coeff {
    xi.zv(s, t) + xi.zv(s + 1, t + 1) - xi.zv(s, t + 1) - xi.zv(s + 1, t)
}

/// Membership in the region `K`: vanishing diagonal and every binomial
/// `(s, t)` with `s < t ≤ n − 1` negative.
pub fn in_k(xi: &XiPoint) -> bool {
    let n = xi.n as u8;
    (1..n).all(|s| xi.zv(s, s).is_zero())
        && (1..n).all(|s| (s + 1..n).all(|t| binomial(xi, s, t).is_negative()))
}

fn check_xi(pl: &PluckerLattice, xi: &XiPoint) -> Result<()> {
    if xi.n != pl.n() {
        return Err(invalid(format!("point has n = {}, lattice has n = {}", xi.n, pl.n())));
    }
    Ok(())
}

/// `σ(a_I) = Σ_r z_{r, i_r} + c_{|I|}` on `M(n)`.
pub fn sigma_map(m: &PluckerLattice, xi: &XiPoint) -> Result<WeightVector> {
    if m.kind() != LatticeKind::M {
        return Err(invalid("σ is defined on M(n)"));
    }
    check_xi(m, xi)?;
    Ok((0..m.len())
        .map(|a| {
            let col = m.label(a);
            col.iter()
                .enumerate()
                .fold(xi.c[col.len() - 1].clone(), |acc, (r, &i)| acc + xi.zv(r as u8 + 1, i))
        })
        .collect())
}

/// `ρ(b_α) = −Σ_r z_{r, α_r} + c_{|α|}` on `N(n)`, with `z_{r,r} = 0`.
pub fn rho_map(nl: &PluckerLattice, xi: &XiPoint) -> Result<WeightVector> {
    if nl.kind() != LatticeKind::N {
        return Err(invalid("ρ is defined on N(n)"));
    }
    check_xi(nl, xi)?;
    Ok((0..nl.len())
        .map(|a| {
            let col = nl.label(a);
            col.iter().enumerate().fold(xi.c[col.len() - 1].clone(), |acc, (r, &v)| {
                if v as usize == r + 1 {
                    acc
                } else {
                    acc - xi.zv(r as u8 + 1, v)
                }
            })
        })
        .collect())
}

/// Symbols of the linear forms pulled back through `σ` or `ρ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum XiSymbol {
    /// `z_{s,t}`.
    Z(u8, u8),
    /// `c_k`.
    C(u8),
}

/// A linear form in `z` and `c`.
pub type XiForm = BTreeMap<XiSymbol, i64>;

fn map_symbolic(pl: &PluckerLattice, a: usize) -> XiForm {
    let col = pl.label(a);
    let mut f = XiForm::new();
    f.insert(XiSymbol::C(col.len() as u8), 1);
    for (r, &v) in col.iter().enumerate() {
        let r1 = r as u8 + 1;
        match pl.kind() {
            LatticeKind::M => *f.entry(XiSymbol::Z(r1, v)).or_insert(0) += 1,
            LatticeKind::N => {
                if v != r1 {
                    *f.entry(XiSymbol::Z(r1, v)).or_insert(0) -= 1;
                }
            }
        }
    }
    f
}

/// The pull-back of a cone inequality through `σ` (on `M(n)`) or `ρ` (on
/// `N(n)`), with diagonal `z_{s,s}` dropped.
pub fn pullback(pl: &PluckerLattice, q: &LinearInequality) -> XiForm {
    let mut out = XiForm::new();
    for (&a, &c) in &q.terms {
        for (sym, v) in map_symbolic(pl, a) {
            *out.entry(sym).or_insert(0) += c * v;
        }
    }
    out.retain(|s, v| *v != 0 && !matches!(s, XiSymbol::Z(x, y) if x == y));
    out
}

/// The binomial `(s, t)` as a form, diagonal entries dropped.
pub fn binomial_form(s: u8, t: u8) -> XiForm {
    let mut f = XiForm::new();
    for (x, y, c) in [(s, t, 1), (s + 1, t + 1, 1), (s, t + 1, -1), (s + 1, t, -1)] {
        if x != y {
            *f.entry(XiSymbol::Z(x, y)).or_insert(0) += c;
        }
    }
    f.retain(|_, v| *v != 0);
    f
}

/// How a facet meets the image of `K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum FacetSubcone {
    /// The pulled-back form vanishes: the facet hyperplane contains the image.
    ContainsSubcone,
    /// The pulled-back form is `sign · binomial(s, t)`.
    MeetsInFacet {
        /// Row index.
        s: u8,
        /// Column index.
        t: u8,
        /// `+1` or `−1`.
        sign: i8,
    },
}

/// Classifies inequality `facet` of the SSYT (via `σ`) or PBW (via `ρ`)
/// description against the image of `K`.
pub fn classify_facet_vs_subcone(h: &ConeHRep, facet: usize, pl: &PluckerLattice) -> Result<FacetSubcone> {
    let kind = match h.target {
        ConeTarget::Ssyt | ConeTarget::SsytRedundant | ConeTarget::ToricGt => LatticeKind::M,
        ConeTarget::Pbw | ConeTarget::PbwRedundant | ConeTarget::ToricFflv => LatticeKind::N,
        t => return Err(invalid(format!("{t} is not a cone of a Plücker lattice"))),
    };
    if pl.kind() != kind {
        return Err(invalid(format!("{} needs {kind}(n)", h.target)));
    }
    let q = h
        .inequalities
        .get(facet)
        .ok_or_else(|| invalid(format!("facet {facet} out of range (0..{})", h.len())))?;
    let form = pullback(pl, q);
    if form.keys().any(|s| matches!(s, XiSymbol::C(_))) {
        return Err(internal("pulled-back form depends on c"));
    }
    if form.is_empty() {
        return Ok(FacetSubcone::ContainsSubcone);
    }
    let n = pl.n() as u8;
    let mut found = Vec::new();
    for s in 1..n {
        for t in s + 1..n {
            let b = binomial_form(s, t);
            for sign in [1i8, -1] {
                let signed: XiForm = b.iter().map(|(k, v)| (*k, v * sign as i64)).collect();
                if signed == form {
                    found.push(FacetSubcone::MeetsInFacet { s, t, sign });
                }
            }
        }
    }
    match found.as_slice() {
        [one] => Ok(*one),
        _ => Err(internal(format!("pulled-back form {form:?} is not a single binomial"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plucker::{build_m, build_n};

    #[test]
    fn n3_cones() {
        let m = build_m(3).unwrap();
        let h = cone_hrep(ConeTarget::Ssyt, ConeContext::Plucker(&m)).unwrap();
        assert_eq!(h.len(), 2);
        let nl = build_n(3).unwrap();
        let h = cone_hrep(ConeTarget::Pbw, ConeContext::Plucker(&nl)).unwrap();
        assert_eq!(h.len(), 2);
        let w = interior_witness(nl.lattice());
        assert!(contains(&h, &w).unwrap());
    }

    #[test]
    fn target_names_round_trip() {
        for t in ConeTarget::ALL {
            assert_eq!(t.name().parse::<ConeTarget>().unwrap(), t);
        }
        assert_eq!("ssyt-redundant".parse::<ConeTarget>().unwrap(), ConeTarget::SsytRedundant);
        assert!("nope".parse::<ConeTarget>().is_err());
    }

    #[test]
    fn facet_counts_small() {
        let c = facet_count(4).unwrap();
        assert_eq!((c.diamond, c.special, c.ssyt, c.pbw), (5, 3, 8, 8));
        assert_eq!(c.total_formula, 8);
    }
}
