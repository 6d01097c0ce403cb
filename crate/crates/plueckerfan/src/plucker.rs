//! The lattices of Plücker variables: `M(n)` of semistandard columns and
//! `N(n)` of PBW-semistandard columns, their join-irreducible coordinates,
//! the isomorphism `τ: M(n) → N(n)`, and the classification of incomparable
//! pairs into diamond and special pairs.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{internal, invalid, Error, Result};
use crate::order::{is_diamond, DistributiveLattice, OrderIdeal, Poset};
use crate::polytope::{k_set, odot_elements, ChainOrderPartition};

/// Smallest supported `n`.
pub const MIN_N: usize = 2;
/// Largest supported `n` (`2^n − 2` elements must fit the lattice capacity).
pub const MAX_N: usize = 12;

/// A column of indices in `[1, n]`, 1-based.
pub type Column = Vec<u8>;

/// Which lattice of Plücker variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LatticeKind {
    /// Semistandard columns under the tableau order.
    M,
    /// PBW-semistandard columns under the PBW tableau order.
    N,
}

impl fmt::Display for LatticeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LatticeKind::M => "M",
            LatticeKind::N => "N",
        })
    }
}

impl FromStr for LatticeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "M" | "m" => Ok(LatticeKind::M),
            "N" | "n" => Ok(LatticeKind::N),
            _ => Err(invalid(format!("unknown lattice kind `{s}` (expected M or N)"))),
        }
    }
}

/// Renders a column as `1,4`.
pub fn format_column(c: &[u8]) -> String {
    c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// Parses `1,4`, `1 4` or, when every entry is a single digit, `14`.
pub fn parse_column(s: &str) -> Result<Column> {
    let s = s.trim();
    let parts: Vec<&str> = if s.contains(',') || s.contains(char::is_whitespace) {
        s.split(|c: char| c == ',' || c.is_whitespace())
            .filter(|p| !p.is_empty())
            .collect()
    } else {
        s.char_indices().map(|(i, c)| &s[i..i + c.len_utf8()]).collect()
    };
    if parts.is_empty() {
        return Err(invalid("empty column"));
    }
    parts
        .iter()
        .map(|p| {
            p.parse::<u8>()
                .map_err(|_| invalid(format!("bad column entry `{p}` in `{s}`")))
        })
        .collect()
}

fn check_n(n: usize) -> Result<()> {
    if n < MIN_N {
        return Err(invalid(format!("n must be at least {MIN_N}, got {n}")));
    }
    if n > MAX_N {
        return Err(Error::Capacity(format!("n = {n} exceeds the maximum {MAX_N}")));
    }
    Ok(())
}

/// True for a strictly increasing column of length `1..n` with entries in `[1, n]`.
pub fn is_column(c: &[u8], n: usize) -> bool {
    !c.is_empty()
        && c.len() < n
        && c.iter().all(|&x| x >= 1 && x as usize <= n)
        && c.windows(2).all(|w| w[0] < w[1])
}

/// True for a PBW column of length `k` in `1..n`: distinct entries in `[1, n]`,
/// each entry at position `r` is `r` or exceeds `k`, and the entries exceeding
/// `k` decrease.
pub fn is_pbw_column(c: &[u8], n: usize) -> bool {
    let k = c.len();
    if k == 0 || k >= n || c.iter().any(|&x| x == 0 || x as usize > n) {
        return false;
    }
    let mut seen = vec![false; n + 1];
    for &x in c {
        if std::mem::replace(&mut seen[x as usize], true) {
            return false;
        }
    }
    let mut last = u8::MAX;
    for (r, &x) in c.iter().enumerate() {
        if x as usize == r + 1 {
            continue;
        }
        if x as usize <= k || x >= last {
            return false;
        }
        last = x;
    }
    true
}

/// The PBW column with the given entry set (any order).
pub fn pbw_column_of_set(set: &[u8]) -> Column {
    let k = set.len();
    let mut big: Vec<u8> = set.iter().copied().filter(|&x| x as usize > k).collect();
    big.sort_unstable_by(|a, b| b.cmp(a));
    let mut big = big.into_iter();
    (1..=k as u8)
        .map(|r| if set.contains(&r) { r } else { big.next().unwrap_or(0) })
        .collect()
}

/// Sign of the permutation sorting `c`, or 0 when an entry repeats.
pub fn column_sign(c: &[u8]) -> i8 {
    let mut inv = 0usize;
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            match c[i].cmp(&c[j]) {
                std::cmp::Ordering::Greater => inv += 1,
                std::cmp::Ordering::Equal => return 0,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Entries of `c` in increasing order.
pub fn sorted(c: &[u8]) -> Column {
    let mut s = c.to_vec();
    s.sort_unstable();
    s
}

/// Rank of a column in `M(n)`.
pub fn m_grade(c: &[u8], n: usize) -> u32 {
    let k = c.len();
    let sum: usize = c.iter().map(|&x| x as usize).sum();
    (sum + (n - k) * (n - k + 1) / 2 - k * (k + 1) / 2 - 1) as u32
}

/// `a ≤ b` in `M(n)`: `a` is at least as long and entrywise below `b`.
pub fn m_leq(a: &[u8], b: &[u8]) -> bool {
    a.len() >= b.len() && a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Meet in `M(n)`.
pub fn m_meet(a: &[u8], b: &[u8]) -> Column {
    let (i, j) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = i.to_vec();
    for (r, &y) in j.iter().enumerate() {
        out[r] = out[r].min(y);
    }
    out
}

/// Join in `M(n)`.
pub fn m_join(a: &[u8], b: &[u8]) -> Column {
    let (i, j) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    j.iter().zip(i).map(|(&x, &y)| x.max(y)).collect()
}

fn pbw_leq_unchecked(alpha: &[u8], beta: &[u8]) -> bool {
    let l = beta.len();
    if alpha.len() < l {
        return false;
    }
    beta.iter().enumerate().all(|(r, &b)| {
        b as usize <= l || alpha[r..].iter().any(|&a| a >= b)
    })
}

/// True when the two-column tableau `(α, β)` is PBW-semistandard, i.e.
/// `b_β ≤ b_α` in `N(n)`.
pub fn pbw_two_column_leq(alpha: &[u8], beta: &[u8]) -> Result<bool> {
    for c in [alpha, beta] {
        if !is_pbw_column(c, u8::MAX as usize) {
            return Err(invalid(format!("`{}` is not a PBW column", format_column(c))));
        }
    }
    Ok(pbw_leq_unchecked(alpha, beta))
}

/// How an incomparable pair sits in the lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    /// Incomparable but not a diamond.
    NotDiamond,
    /// A diamond pair that is not special.
    DiamondPlain,
    /// A special diamond pair.
    DiamondSpecial,
}

/// Classification of an incomparable pair together with the elements of its
/// straightening ladder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairClass {
    /// The classification.
    pub kind: PairKind,
    /// First element.
    pub a: usize,
    /// Second element.
    pub b: usize,
    /// `a ∧ b`.
    pub meet: usize,
    /// `a ∨ b`.
    pub join: usize,
    /// In `M(n)`, the first lower factor `p_1` of a diamond pair; in `N(n)`,
    /// the element `a ⊙ b` of any pair.
    pub below: Option<usize>,
    /// In `M(n)`, the first upper factor `q_1` of a diamond pair; in `N(n)`,
    /// the upper factor `h_1` of a special pair.
    pub above: Option<usize>,
}

/// A lattice of Plücker variables with its join-irreducible coordinates.
#[derive(Clone, Debug)]
pub struct PluckerLattice {
    kind: LatticeKind,
    n: usize,
    lattice: DistributiveLattice,
    labels: Vec<Column>,
    by_label: HashMap<Column, usize>,
    by_set: HashMap<Column, usize>,
    signs: Vec<i8>,
    coords: Vec<Option<(u8, u8)>>,
    by_coord: HashMap<(u8, u8), usize>,
    partition: ChainOrderPartition,
    tau: Vec<usize>,
    tau_inv: Vec<usize>,
    m: Option<Box<PluckerLattice>>,
}

fn complement_interval(c: &[u8], n: usize) -> Option<(usize, usize)> {
    let missing: Vec<usize> = (1..=n).filter(|x| !c.contains(&(*x as u8))).collect();
    let (&u, &v) = (missing.first()?, missing.last()?);
    (v - u + 1 == missing.len()).then_some((u, v))
}

/// Builds `M(n)` with elements ordered by rank, then lexicographically.
pub fn build_m(n: usize) -> Result<PluckerLattice> {
    check_n(n)?;
    let full = (1u32 << n) - 1;
    let mut labels: Vec<Column> = (1..full)
        .map(|mask| (1..=n as u8).filter(|&x| mask >> (x - 1) & 1 == 1).collect())
        .collect();
    labels.sort_by(|a: &Column, b: &Column| (m_grade(a, n), a).cmp(&(m_grade(b, n), b)));
    let len = labels.len();
    let mask_of = |c: &[u8]| c.iter().fold(0usize, |m, &x| m | 1 << (x - 1));
    let mut index_of_mask = vec![u16::MAX; 1 << n];
    for (i, c) in labels.iter().enumerate() {
        index_of_mask[mask_of(c)] = i as u16;
    }
    let down: Vec<BitSet> = (0..len)
        .map(|a| BitSet::from_indices(len, (0..=a).filter(|&b| m_leq(&labels[b], &labels[a]))))
        .collect();
    let mut join = vec![0u16; len * len];
    let mut meet = vec![0u16; len * len];
    for a in 0..len {
        for b in a..len {
            let j = index_of_mask[mask_of(&m_join(&labels[a], &labels[b]))];
            let m = index_of_mask[mask_of(&m_meet(&labels[a], &labels[b]))];
            join[a * len + b] = j;
            join[b * len + a] = j;
            meet[a * len + b] = m;
            meet[b * len + a] = m;
        }
    }
    let ids = labels.iter().map(|c| format_column(c)).collect();
    let poset = Poset::from_down_sets_unchecked(ids, down);
    let lattice = DistributiveLattice::from_tables(poset, join, meet)?;
    let mut coords = vec![None; len];
    for &a in lattice.join_irreducible_elements() {
        let (u, v) = complement_interval(&labels[a], n)
            .ok_or_else(|| internal(format!("join-irreducible `{}` has no interval complement", lattice.id(a))))?;
        let s = n - u + 1;
        let r = v - u + 1;
        coords[a] = Some((r as u8, s as u8));
    }
    finish(LatticeKind::M, n, lattice, labels, coords, Vec::new(), Vec::new(), None)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    kind: LatticeKind,
    n: usize,
    lattice: DistributiveLattice,
    labels: Vec<Column>,
    coords: Vec<Option<(u8, u8)>>,
    tau: Vec<usize>,
    tau_inv: Vec<usize>,
    m: Option<Box<PluckerLattice>>,
) -> Result<PluckerLattice> {
    let expected = n * (n + 1) / 2 - 2;
    if lattice.join_irreducible_elements().len() != expected {
        return Err(internal(format!(
            "{kind}({n}) has {} join-irreducibles, expected {expected}",
            lattice.join_irreducible_elements().len()
        )));
    }
    let mut by_coord = HashMap::new();
    for (a, c) in coords.iter().enumerate() {
        if let Some(rs) = c {
            if by_coord.insert(*rs, a).is_some() {
                return Err(internal("repeated join-irreducible coordinate"));
            }
        }
    }
    let flags = lattice
        .join_irreducible_elements()
        .iter()
        .map(|&a| coords[a].map(|(r, s)| r == s).unwrap_or(false))
        .collect();
    let partition = ChainOrderPartition::from_flags(flags);
    let by_label = labels.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
    let by_set = labels.iter().enumerate().map(|(i, c)| (sorted(c), i)).collect();
    let signs = labels.iter().map(|c| column_sign(c)).collect();
    Ok(PluckerLattice {
        kind,
        n,
        lattice,
        labels,
        by_label,
        by_set,
        signs,
        coords,
        by_coord,
        partition,
        tau,
        tau_inv,
        m,
    })
}

/// `ν(a)`: the PBW column attached to an element of `M(n)` through the K-set
/// of its ideal of join-irreducibles.
pub fn nu(m: &PluckerLattice, a: usize) -> Result<Column> {
    if m.kind != LatticeKind::M {
        return Err(invalid("ν is defined on M(n)"));
    }
    m.check_element(a)?;
    let jp = m.lattice.ji_poset();
    let ideal = m.lattice.ideal_of(a);
    let ks = k_set(jp, &m.partition, ideal)?;
    let coords_in = |bits: &BitSet| -> Vec<(u8, u8)> {
        bits.iter()
            .map(|i| m.coords[m.lattice.join_irreducible_elements()[i]].expect("ji coordinate"))
            .collect()
    };
    let k = coords_in(ideal.bits())
        .iter()
        .filter(|(r, s)| r == s)
        .map(|&(r, _)| r)
        .max()
        .unwrap_or(1);
    let mut col: Column = (1..=k).collect();
    for (r, s) in coords_in(&ks) {
        if r != s {
            if r > k {
                return Err(internal(format!("K-set entry y_{r},{s} beyond column length {k}")));
            }
            col[r as usize - 1] = s;
        }
    }
    Ok(col)
}

/// Builds `N(n)` by transporting `M(n)` through `ν`, verifying that `ν` is a
/// bijection onto the PBW columns and an order isomorphism; elements are
/// ordered by rank, then lexicographically.
pub fn build_n(n: usize) -> Result<PluckerLattice> {
    let m = build_m(n)?;
    let len = m.len();
    let nus: Vec<Column> = (0..len).map(|a| nu(&m, a)).collect::<Result<_>>()?;
    let mut seen = HashMap::new();
    for (a, c) in nus.iter().enumerate() {
        if !is_pbw_column(c, n) {
            return Err(internal(format!("ν({}) = {} is not a PBW column", m.id(a), format_column(c))));
        }
        if let Some(b) = seen.insert(sorted(c), a) {
            return Err(internal(format!("ν is not injective on {} and {}", m.id(a), m.id(b))));
        }
    }
    for a in 0..len {
        for b in 0..len {
            if m.lattice.leq(b, a) != pbw_leq_unchecked(&nus[a], &nus[b]) {
                return Err(internal(format!(
                    "ν is not an order isomorphism at ({}, {})",
                    m.id(a),
                    m.id(b)
                )));
            }
        }
    }
    let mut order: Vec<usize> = (0..len).collect();
    order.sort_by(|&a, &b| (m.lattice.grade(a), &nus[a]).cmp(&(m.lattice.grade(b), &nus[b])));
    let tau_inv = order;
    let mut tau = vec![0; len];
    for (x, &a) in tau_inv.iter().enumerate() {
        tau[a] = x;
    }
    let labels: Vec<Column> = tau_inv.iter().map(|&a| nus[a].clone()).collect();
    let down: Vec<BitSet> = tau_inv
        .iter()
        .map(|&a| BitSet::from_indices(len, m.lattice.poset().down_set(a).iter().map(|b| tau[b])))
        .collect();
    let mut join = vec![0u16; len * len];
    let mut meet = vec![0u16; len * len];
    for x in 0..len {
        for y in 0..len {
            let (a, b) = (tau_inv[x], tau_inv[y]);
            join[x * len + y] = tau[m.lattice.join(a, b)] as u16;
            meet[x * len + y] = tau[m.lattice.meet(a, b)] as u16;
        }
    }
    let ids = labels.iter().map(|c| format_column(c)).collect();
    let poset = Poset::from_down_sets_unchecked(ids, down);
    let lattice = DistributiveLattice::from_tables(poset, join, meet)?;
    let coords = tau_inv.iter().map(|&a| m.coords[a]).collect();
    finish(LatticeKind::N, n, lattice, labels, coords, tau, tau_inv, Some(Box::new(m)))
}

/// Builds `M(n)` or `N(n)`.
pub fn build(kind: LatticeKind, n: usize) -> Result<PluckerLattice> {
    match kind {
        LatticeKind::M => build_m(n),
        LatticeKind::N => build_n(n),
    }
}

/// The PBW column of the element of `N(n)` whose ideal of join-irreducibles
/// is `j`: length `k` is the largest `l` with `x_{l,l} ∈ j` (or 1), and each
/// maximal off-diagonal `x_{s,t}` of `j` puts `t` at position `s`.
pub fn tableau_from_ideal(nl: &PluckerLattice, j: &OrderIdeal) -> Result<Column> {
    if nl.kind != LatticeKind::N {
        return Err(invalid("tableau_from_ideal expects N(n)"));
    }
    let jp = nl.lattice.ji_poset();
    if j.bits().universe() != jp.len() {
        return Err(invalid("ideal does not belong to the join-irreducibles of N(n)"));
    }
    OrderIdeal::new(jp, j.bits().clone())?;
    let coord = |i: usize| nl.coords[nl.lattice.join_irreducible_elements()[i]].expect("ji coordinate");
    let k = j
        .members()
        .into_iter()
        .map(coord)
        .filter(|(r, s)| r == s)
        .map(|(r, _)| r)
        .max()
        .unwrap_or(1);
    let mut col: Column = (1..=k).collect();
    for i in j.maximal_elements(jp) {
        let (s, t) = coord(i);
        if s != t {
            col[s as usize - 1] = t;
        }
    }
    Ok(col)
}

/// Serializable Hasse diagram.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HasseJson {
    /// Parameter `n`.
    pub n: usize,
    /// Lattice kind.
    pub kind: LatticeKind,
    /// Element names in canonical order.
    pub elements: Vec<String>,
    /// Cover relations `(lower, upper)`.
    pub covers: Vec<(String, String)>,
}

impl PluckerLattice {
    /// Kind of lattice.
    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    /// Parameter `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Underlying distributive lattice.
    pub fn lattice(&self) -> &DistributiveLattice {
        &self.lattice
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    /// Never true; kept for API symmetry.
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    fn check_element(&self, a: usize) -> Result<()> {
        if a < self.len() {
            Ok(())
        } else {
            Err(Error::UnknownElement(format!("element index {a}")))
        }
    }

    /// Column of an element: increasing for `M(n)`, a PBW column for `N(n)`.
    pub fn label(&self, a: usize) -> &[u8] {
        &self.labels[a]
    }

    /// Entries of an element's column in increasing order.
    pub fn sorted_label(&self, a: usize) -> Column {
        sorted(&self.labels[a])
    }

    /// Sign with `X_a = sign · X_{sorted(a)}`.
    pub fn sign(&self, a: usize) -> i8 {
        self.signs[a]
    }

    /// Name of an element, such as `1,4`.
    pub fn id(&self, a: usize) -> String {
        format_column(&self.labels[a])
    }

    /// Element with the given column, or with the given entry set.
    pub fn element(&self, c: &[u8]) -> Result<usize> {
        self.by_label
            .get(c)
            .or_else(|| self.by_set.get(&sorted(c)))
            .copied()
            .ok_or_else(|| Error::UnknownElement(format!("{}({}) has no element {}", self.kind, self.n, format_column(c))))
    }

    /// Element whose entry set is `set`.
    pub fn element_by_set(&self, set: &[u8]) -> Option<usize> {
        self.by_set.get(&sorted(set)).copied()
    }

    /// Element from its name.
    pub fn element_of_id(&self, id: &str) -> Result<usize> {
        self.element(&parse_column(id)?)
    }

    /// Coordinates `(r, s)` of a join-irreducible element.
    pub fn ji_coord(&self, a: usize) -> Option<(u8, u8)> {
        self.coords.get(a).copied().flatten()
    }

    /// The join-irreducible with coordinates `(r, s)`.
    pub fn ji_element(&self, r: u8, s: u8) -> Option<usize> {
        self.by_coord.get(&(r, s)).copied()
    }

    /// Coordinates of the join-irreducibles below `a`.
    pub fn ideal_coords(&self, a: usize) -> Vec<(u8, u8)> {
        let ji = self.lattice.join_irreducible_elements();
        self.lattice
            .ideal_of(a)
            .members()
            .into_iter()
            .map(|i| self.coords[ji[i]].expect("ji coordinate"))
            .collect()
    }

    /// The split of the join-irreducibles into diagonal (order) and
    /// off-diagonal (chain) parts, indexed by `lattice().ji_poset()`.
    pub fn partition(&self) -> &ChainOrderPartition {
        &self.partition
    }

    /// The lattice `M(n)` underlying `N(n)`.
    pub fn m_lattice(&self) -> Option<&PluckerLattice> {
        self.m.as_deref()
    }

    /// `τ` from an element of `M(n)` to an element of this `N(n)`.
    pub fn tau(&self, a: usize) -> Result<usize> {
        if self.kind != LatticeKind::N {
            return Err(invalid("τ lands in N(n)"));
        }
        self.tau.get(a).copied().ok_or_else(|| Error::UnknownElement(format!("element index {a}")))
    }

    /// `τ^{-1}` from an element of this `N(n)` to `M(n)`.
    pub fn tau_inv(&self, a: usize) -> Result<usize> {
        if self.kind != LatticeKind::N {
            return Err(invalid("τ^{-1} starts in N(n)"));
        }
        self.tau_inv.get(a).copied().ok_or_else(|| Error::UnknownElement(format!("element index {a}")))
    }

    /// The Hasse diagram with element names.
    pub fn hasse_json(&self) -> HasseJson {
        HasseJson {
            n: self.n,
            kind: self.kind,
            elements: (0..self.len()).map(|a| self.id(a)).collect(),
            covers: self
                .lattice
                .poset()
                .covers()
                .into_iter()
                .map(|(lo, hi)| (self.id(lo), self.id(hi)))
                .collect(),
        }
    }

    /// Classifies an incomparable pair; comparable pairs are an error.
    pub fn classify_pair(&self, a: usize, b: usize) -> Result<PairClass> {
        self.check_element(a)?;
        self.check_element(b)?;
        let l = &self.lattice;
        if l.poset().comparable(a, b) {
            return Err(Error::Comparable(self.id(a), self.id(b)));
        }
        match self.kind {
            LatticeKind::M => self.classify_m(a, b),
            LatticeKind::N => self.classify_n(a, b),
        }
    }

    fn classify_m(&self, a: usize, b: usize) -> Result<PairClass> {
        let l = &self.lattice;
        let (meet, join) = (l.meet(a, b), l.join(a, b));
        let mut class = PairClass {
            kind: PairKind::NotDiamond,
            a,
            b,
            meet,
            join,
            below: None,
            above: None,
        };
        let shape = diamond_shape(self.n as u8, &self.labels[a], &self.labels[b]);
        let diamond = is_diamond(l, a, b);
        let Some((p1, q1, special)) = shape else {
            if diamond {
                return Err(internal(format!("diamond pair ({}, {}) has no column shape", self.id(a), self.id(b))));
            }
            return Ok(class);
        };
        if !diamond {
            return Err(internal(format!("pair ({}, {}) has diamond shape but is not a diamond", self.id(a), self.id(b))));
        }
        let p = self.element(&p1)?;
        let q = self.element(&q1)?;
        if !(l.poset().lt(p, meet) && l.poset().lt(join, q)) {
            return Err(internal(format!("p1/q1 misplaced for ({}, {})", self.id(a), self.id(b))));
        }
        let between = (0..self.len())
            .filter(|&c| l.poset().lt(p, c) && l.poset().lt(c, q))
            .count();
        if (between == 4) != special {
            return Err(internal(format!(
                "({}, {}): {between} elements between p1 and q1, special = {special}",
                self.id(a),
                self.id(b)
            )));
        }
        let po = l.poset();
        let witness = (0..self.len()).any(|c| {
            c != a
                && c != b
                && po.lt(p, c)
                && po.lt(c, q)
                && (!po.comparable(c, a) || !po.comparable(c, b))
        });
        if witness == special {
            return Err(internal(format!(
                "({}, {}): between-witness {witness} contradicts special = {special}",
                self.id(a),
                self.id(b)
            )));
        }
        if special != self.diagonal_square(a, b)?.is_some() {
            return Err(internal(format!("special shape disagrees with the ideals at ({}, {})", self.id(a), self.id(b))));
        }
        if let Some((s, t)) = self.diagonal_square(a, b)? {
            let mut ip = l.ideal_of(meet).bits().clone();
            let mut iq = l.ideal_of(join).bits().clone();
            let y = |r: u8, s: u8| -> Result<usize> {
                let e = self.ji_element(r, s).ok_or_else(|| internal(format!("no y_{r},{s}")))?;
                Ok(l.ji_position(e).expect("ji position"))
            };
            ip.remove(y(s - 1, t)?);
            iq.insert(y(s, t + 1)?);
            if l.ideal_of(p).bits() != &ip || l.ideal_of(q).bits() != &iq {
                return Err(internal(format!("p1/q1 disagree with the ideal description at ({}, {})", self.id(a), self.id(b))));
            }
        }
        class.kind = if special { PairKind::DiamondSpecial } else { PairKind::DiamondPlain };
        class.below = Some(p);
        class.above = Some(q);
        Ok(class)
    }

    /// For a diamond pair whose added join-irreducibles are `(s, t)` and
    /// `(s − 1, t + 1)`, returns `(s, t)`.
    fn diagonal_square(&self, a: usize, b: usize) -> Result<Option<(u8, u8)>> {
        let l = &self.lattice;
        let meet = l.meet(a, b);
        let added = |x: usize| -> Result<(u8, u8)> {
            let d = l.ideal_of(x).bits().difference(l.ideal_of(meet).bits());
            let mut it = d.iter();
            match (it.next(), it.next()) {
                (Some(i), None) => Ok(self.coords[l.join_irreducible_elements()[i]].expect("ji coordinate")),
                _ => Err(internal("not a cover of the meet")),
            }
        };
        let (c1, c2) = (added(a)?, added(b)?);
        for ((s, t), (u, v)) in [(c1, c2), (c2, c1)] {
            if u + 1 == s && v == t + 1 {
                return Ok(Some((s, t)));
            }
        }
        Ok(None)
    }

    fn classify_n(&self, a: usize, b: usize) -> Result<PairClass> {
        let l = &self.lattice;
        let m = self.m.as_deref().ok_or_else(|| internal("N(n) without M(n)"))?;
        let mc = m.classify_m(self.tau_inv[a], self.tau_inv[b])?;
        let (meet, join) = (l.meet(a, b), l.join(a, b));
        let odot = odot_elements(l, &self.partition, a, b)?;
        let mut class = PairClass {
            kind: mc.kind,
            a,
            b,
            meet,
            join,
            below: Some(odot),
            above: None,
        };
        match mc.kind {
            PairKind::NotDiamond => {}
            PairKind::DiamondPlain => {
                if odot != meet {
                    return Err(internal(format!("a ⊙ b ≠ a ∧ b at plain pair ({}, {})", self.id(a), self.id(b))));
                }
                if self.diagonal_square(a, b)?.is_some() {
                    return Err(internal("plain pair with a diagonal square"));
                }
            }
            PairKind::DiamondSpecial => {
                let p = self.tau[mc.below.expect("p1")];
                let q = self.tau[mc.above.expect("q1")];
                if odot != p {
                    return Err(internal(format!("a ⊙ b ≠ τ(p1) at special pair ({}, {})", self.id(a), self.id(b))));
                }
                if self.diagonal_square(a, b)?.is_none() {
                    return Err(internal("special pair without a diagonal square"));
                }
                class.above = Some(q);
            }
        }
        Ok(class)
    }
}

/// Detects the column shape of a diamond pair in `M(n)` and returns
/// `(p_1, q_1, special)`.
fn diamond_shape(n: u8, a: &[u8], b: &[u8]) -> Option<(Column, Column, bool)> {
    let (i, j) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let (k, l) = (i.len(), j.len());
    if k == l {
        let diff: Vec<usize> = (0..k).filter(|&r| i[r] != j[r]).collect();
        let &[r1, r2] = diff.as_slice() else {
            return None;
        };
        let (i, j) = if i[r1] < j[r1] { (i, j) } else { (j, i) };
        if i[r1] + 1 != j[r1] || i[r2] != j[r2] + 1 {
            return None;
        }
        let gamma: Column = (0..k)
            .map(|r| {
                if r < r1 || r > r2 || r == r1 {
                    i[r]
                } else if r == r1 + 1 {
                    j[r1]
                } else {
                    i[r - 1]
                }
            })
            .collect();
        let delta: Column = (0..k)
            .map(|r| {
                if r < r1 || r > r2 {
                    j[r]
                } else if r + 2 <= r2 {
                    j[r + 1]
                } else if r + 1 == r2 {
                    j[r2]
                } else {
                    i[r2]
                }
            })
            .collect();
        let special = r1 + 1 == r2 && j[r1] + 1 == j[r2];
        Some((gamma, delta, special))
    } else if k == l + 1 {
        if i[k - 1] != n {
            return None;
        }
        let diff: Vec<usize> = (0..l).filter(|&r| i[r] != j[r]).collect();
        let &[r1] = diff.as_slice() else {
            return None;
        };
        if i[r1] != j[r1] + 1 {
            return None;
        }
        let gamma: Column = (0..k)
            .map(|r| {
                if r < r1 {
                    i[r]
                } else if r == r1 {
                    j[r1]
                } else {
                    i[r - 1]
                }
            })
            .collect();
        let delta: Column = (0..l)
            .map(|r| {
                if r < r1 {
                    j[r]
                } else if r + 1 < l {
                    j[r + 1]
                } else {
                    n
                }
            })
            .collect();
        let special = r1 + 1 == l && j[r1] + 2 == n;
        Some((gamma, delta, special))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nu_examples() {
        let m = build_m(4).unwrap();
        let find = |coords: &[(u8, u8)]| {
            let mut want: Vec<(u8, u8)> = coords.to_vec();
            want.sort();
            (0..m.len())
                .find(|&a| {
                    let mut c = m.ideal_coords(a);
                    c.sort();
                    c == want
                })
                .unwrap()
        };
        let a = find(&[(1, 2), (2, 2), (1, 3), (2, 3), (1, 4)]);
        assert_eq!(nu(&m, a).unwrap(), vec![4, 3]);
        let a = find(&[(1, 2), (2, 2), (1, 3)]);
        assert_eq!(nu(&m, a).unwrap(), vec![3, 2]);
        assert_eq!(nu(&m, m.lattice().bottom()).unwrap(), vec![1]);
    }

    #[test]
    fn pbw_columns() {
        assert!(is_pbw_column(&[3, 2], 3));
        assert!(!is_pbw_column(&[2, 3], 3));
        assert!(is_pbw_column(&[1, 3], 3));
        assert!(!is_pbw_column(&[4, 5, 3], 5));
        assert!(is_pbw_column(&[5, 4, 3], 5));
        assert_eq!(pbw_column_of_set(&[2, 3]), vec![3, 2]);
        assert_eq!(column_sign(&[3, 2]), -1);
        assert_eq!(column_sign(&[2, 2]), 0);
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_column("1,4").unwrap(), vec![1, 4]);
        assert_eq!(parse_column("14").unwrap(), vec![1, 4]);
        assert_eq!(parse_column("10 11").unwrap(), vec![10, 11]);
        assert_eq!(format_column(&[3, 2]), "3,2");
        assert!(parse_column("").is_err());
    }

    #[test]
    fn n3_shapes() {
        let m = build_m(3).unwrap();
        let a = m.element(&[2, 3]).unwrap();
        let b = m.element(&[1]).unwrap();
        let c = m.classify_pair(a, b).unwrap();
        assert_eq!(c.kind, PairKind::DiamondSpecial);
        assert_eq!(m.label(c.below.unwrap()), &[1, 2]);
        assert_eq!(m.label(c.above.unwrap()), &[3]);
    }
}
