//! Interpolating chain-order polytopes of a poset: their H-representation,
//! the transfer maps between them and the order polytope, K-sets, the
//! ⊙ operation on order ideals, lattice points of dilations and Minkowski
//! decomposition of those points.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::ops::{Add, Sub};

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{internal, invalid, Error, Result};
use crate::order::{down_closure, enumerate_order_ideals, DistributiveLattice, OrderIdeal, Poset, MAX_IDEAL_BITS};

/// A split `P = U_o ⊔ U_c` of a poset into an order part and a chain part.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainOrderPartition {
    order: Vec<bool>,
}

/// JSON exchange format for partitions.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PartitionJson {
    /// Ids in the order part.
    pub order: Vec<String>,
    /// Ids in the chain part.
    pub chain: Vec<String>,
}

impl ChainOrderPartition {
    /// Partition from a membership vector (`true` = order part).
    pub fn from_flags(order: Vec<bool>) -> Self {
        ChainOrderPartition { order }
    }

    /// `U_o = P`.
    pub fn all_order(p: &Poset) -> Self {
        ChainOrderPartition {
            order: vec![true; p.len()],
        }
    }

    /// `U_c = P`.
    pub fn all_chain(p: &Poset) -> Self {
        ChainOrderPartition {
            order: vec![false; p.len()],
        }
    }

    /// Partition whose order part is given by the set bits of `mask`.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        ChainOrderPartition {
            order: (0..len).map(|i| mask >> i & 1 == 1).collect(),
        }
    }

    /// Partition from id lists; they must be disjoint and cover `p`.
    pub fn from_ids(p: &Poset, order: &[String], chain: &[String]) -> Result<Self> {
        let mut flags = vec![None; p.len()];
        for (ids, flag) in [(order, true), (chain, false)] {
            for id in ids {
                let i = p.index_of(id)?;
                if flags[i].is_some() {
                    return Err(invalid(format!("element `{id}` listed twice in partition")));
                }
                flags[i] = Some(flag);
            }
        }
        let order = flags
            .into_iter()
            .enumerate()
            .map(|(i, f)| f.ok_or_else(|| invalid(format!("element `{}` missing from partition", p.id(i)))))
            .collect::<Result<Vec<bool>>>()?;
        Ok(ChainOrderPartition { order })
    }

    /// Parses `{"order": [...], "chain": [...]}`.
    pub fn from_json(p: &Poset, text: &str) -> Result<Self> {
        let pj: PartitionJson =
            serde_json::from_str(text).map_err(|e| invalid(format!("partition JSON: {e}")))?;
        ChainOrderPartition::from_ids(p, &pj.order, &pj.chain)
    }

    /// Exports id lists.
    pub fn to_json(&self, p: &Poset) -> PartitionJson {
        let pick = |want: bool| {
            (0..self.order.len())
                .filter(|&i| self.order[i] == want)
                .map(|i| p.id(i).to_string())
                .collect()
        };
        PartitionJson {
            order: pick(true),
            chain: pick(false),
        }
    }

    /// Number of elements covered.
    pub fn len(&self) -> usize {
        self.order.len()
    }

    /// True for the partition of the empty poset.
    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// `a ∈ U_o`.
    pub fn is_order(&self, a: usize) -> bool {
        self.order[a]
    }

    /// `a ∈ U_c`.
    pub fn is_chain(&self, a: usize) -> bool {
        !self.order[a]
    }

    /// Membership flags (`true` = order part).
    pub fn flags(&self) -> &[bool] {
        &self.order
    }

    fn check(&self, p: &Poset) -> Result<()> {
        if self.order.len() != p.len() {
            return Err(invalid(format!(
                "partition covers {} elements but the poset has {}",
                self.order.len(),
                p.len()
            )));
        }
        Ok(())
    }
}

/// An exact rational point of `R^P`, indexed by the poset's canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint {
    coords: Vec<Rational64>,
}

impl RationalPoint {
    /// Point from coordinates.
    pub fn new(coords: Vec<Rational64>) -> Self {
        RationalPoint { coords }
    }

    /// Point from integer coordinates.
    pub fn from_ints(coords: &[i64]) -> Self {
        RationalPoint {
            coords: coords.iter().map(|&c| Rational64::from_integer(c)).collect(),
        }
    }

    /// The origin of `R^len`.
    pub fn zero(len: usize) -> Self {
        RationalPoint {
            coords: vec![Rational64::zero(); len],
        }
    }

    /// Coordinates.
    pub fn coords(&self) -> &[Rational64] {
        &self.coords
    }

    /// Integer coordinates, if all are integers.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.coords
            .iter()
            .map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None })
            .collect()
    }

    /// `{id: "p/q"}` map.
    pub fn to_json(&self, p: &Poset) -> BTreeMap<String, String> {
        self.coords
            .iter()
            .enumerate()
            .map(|(i, c)| (p.id(i).to_string(), c.to_string()))
            .collect()
    }

    /// Parses a `{id: "p/q"}` map; every element must be present.
    pub fn from_json(p: &Poset, map: &BTreeMap<String, String>) -> Result<Self> {
        let mut coords = vec![None; p.len()];
        for (id, v) in map {
            let i = p.index_of(id)?;
            let q: Rational64 = v
                .trim()
                .parse()
                .map_err(|_| invalid(format!("`{v}` is not a rational number")))?;
            coords[i] = Some(q);
        }
        let coords = coords
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.ok_or_else(|| invalid(format!("coordinate `{}` missing", p.id(i)))))
            .collect::<Result<Vec<_>>>()?;
        Ok(RationalPoint { coords })
    }
}

/// One inequality `Σ coeff·x_p ≤ bound` with integer data.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PolytopeInequality {
    /// Sparse form, sorted by element index.
    pub terms: Vec<(usize, i64)>,
    /// Right-hand side.
    pub bound: i64,
}

impl PolytopeInequality {
    fn new(mut terms: Vec<(usize, i64)>, bound: i64) -> Self {
        terms.sort_unstable();
        let mut merged: Vec<(usize, i64)> = Vec::with_capacity(terms.len());
        for (i, c) in terms {
            match merged.last_mut() {
                Some((j, d)) if *j == i => *d += c,
                _ => merged.push((i, c)),
            }
        }
        merged.retain(|&(_, c)| c != 0);
        PolytopeInequality { terms: merged, bound }
    }

    /// Evaluates the form.
    pub fn lhs<T: Copy + Zero + Add<Output = T> + Sub<Output = T>>(&self, x: &[T]) -> T {
        let mut acc = T::zero();
        for &(i, c) in &self.terms {
            for _ in 0..c.abs() {
                acc = if c > 0 { acc + x[i] } else { acc - x[i] };
            }
        }
        acc
    }

    /// Renders the inequality with element ids.
    pub fn display(&self, p: &Poset) -> String {
        let mut s = String::new();
        for (k, &(i, c)) in self.terms.iter().enumerate() {
            let sign = if c < 0 { "-" } else if k > 0 { "+" } else { "" };
            let mag = if c.abs() == 1 { String::new() } else { c.abs().to_string() };
            if k > 0 {
                s.push(' ');
            }
            s.push_str(&format!("{sign}{mag}x[{}]", p.id(i)));
        }
        if self.terms.is_empty() {
            s.push('0');
        }
        format!("{s} <= {}", self.bound)
    }
}

/// H-representation of `Π_{U_o,U_c}(P)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolytopeHRep {
    inequalities: Vec<PolytopeInequality>,
}

impl PolytopeHRep {
    /// The inequalities in emission order.
    pub fn inequalities(&self) -> &[PolytopeInequality] {
        &self.inequalities
    }

    /// True when `x` lies in the `t`-th dilation.
    pub fn contains_scaled(&self, x: &RationalPoint, t: i64) -> bool {
        self.contains_scaled_generic(x.coords(), Rational64::from_integer(t))
    }

    /// Same check on integer coordinates.
    pub fn contains_scaled_ints(&self, x: &[i64], t: i64) -> bool {
        self.contains_scaled_generic(x, t)
    }

    fn contains_scaled_generic<T>(&self, x: &[T], t: T) -> bool
    where
        T: Copy + Zero + Ord + Add<Output = T> + Sub<Output = T>,
    {
        self.inequalities.iter().all(|ineq| {
            let rhs = if ineq.bound == 0 {
                T::zero()
            } else {
                let mut r = T::zero();
                for _ in 0..ineq.bound.abs() {
                    r = if ineq.bound > 0 { r + t } else { r - t };
                }
                r
            };
            ineq.lhs(x) <= rhs
        })
    }
}

fn is_admissible_chain(p: &Poset, part: &ChainOrderPartition, chain: &[usize]) -> bool {
    chain.windows(2).all(|w| p.lt(w[0], w[1]))
        && chain[..chain.len().saturating_sub(1)]
            .iter()
            .all(|&a| part.is_chain(a))
}

/// Maximal admissible chains inside `allowed`.
fn maximal_admissible_chains(p: &Poset, part: &ChainOrderPartition, allowed: &BitSet) -> Vec<Vec<usize>> {
    let mut all = Vec::new();
    let mut stack: Vec<Vec<usize>> = allowed.iter().map(|a| vec![a]).collect();
    while let Some(chain) = stack.pop() {
        let last = *chain.last().expect("chains are nonempty");
        if part.is_chain(last) {
            for q in p.up_set(last).iter() {
                if q != last && allowed.contains(q) {
                    let mut next = chain.clone();
                    next.push(q);
                    stack.push(next);
                }
            }
        }
        all.push(chain);
    }
    let mut out: Vec<Vec<usize>> = all
        .into_iter()
        .filter(|chain| {
            !allowed.iter().any(|x| {
                if chain.contains(&x) {
                    return false;
                }
                let mut ext = chain.clone();
                let pos = ext.partition_point(|&c| c < x);
                ext.insert(pos, x);
                is_admissible_chain(p, part, &ext)
            })
        })
        .collect();
    out.sort();
    out
}

/// The defining inequalities of `Π_{U_o,U_c}(P)`: box constraints, order
/// constraints inside `U_o`, and chain-sum constraints over maximal admissible
/// chains (plain, and dominated by an element of `U_o`). Duplicates are removed.
pub fn interpolating_hrep(p: &Poset, part: &ChainOrderPartition) -> Result<PolytopeHRep> {
    part.check(p)?;
    let n = p.len();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut push = |ineq: PolytopeInequality| {
        if seen.insert(ineq.clone()) {
            out.push(ineq);
        }
    };
    for a in 0..n {
        push(PolytopeInequality::new(vec![(a, -1)], 0));
        push(PolytopeInequality::new(vec![(a, 1)], 1));
    }
    for a in 0..n {
        for b in p.up_set(a).iter() {
            if b != a && part.is_order(a) && part.is_order(b) {
                push(PolytopeInequality::new(vec![(b, 1), (a, -1)], 0));
            }
        }
    }
    for chain in maximal_admissible_chains(p, part, &BitSet::full(n)) {
        push(PolytopeInequality::new(chain.iter().map(|&c| (c, 1)).collect(), 1));
    }
    for q in 0..n {
        if !part.is_order(q) {
            continue;
        }
        let mut above = p.up_set(q).clone();
        above.remove(q);
        for chain in maximal_admissible_chains(p, part, &above) {
            let mut terms: Vec<(usize, i64)> = chain.iter().map(|&c| (c, 1)).collect();
            terms.push((q, -1));
            push(PolytopeInequality::new(terms, 0));
        }
    }
    Ok(PolytopeHRep { inequalities: out })
}

/// Transfer map from the order polytope side: `x_p` on `U_o` and on maximal
/// elements, `min_{q>p}(x_p − x_q)` elsewhere.
pub fn zeta(p: &Poset, part: &ChainOrderPartition, x: &RationalPoint) -> Result<RationalPoint> {
    part.check(p)?;
    check_len(p, x)?;
    Ok(RationalPoint::new(zeta_generic(p, part, x.coords())))
}

/// Inverse transfer: `x_p` on `U_o`, the largest chain sum starting at `p`
/// with interior in `U_c` elsewhere.
pub fn zeta_prime(p: &Poset, part: &ChainOrderPartition, x: &RationalPoint) -> Result<RationalPoint> {
    part.check(p)?;
    check_len(p, x)?;
    Ok(RationalPoint::new(zeta_prime_generic(p, part, x.coords())))
}

fn check_len(p: &Poset, x: &RationalPoint) -> Result<()> {
    if x.coords().len() != p.len() {
        return Err(invalid("point dimension does not match poset"));
    }
    Ok(())
}

/// [`zeta`] over any ordered additive group.
pub fn zeta_generic<T: Copy + Ord + Sub<Output = T>>(p: &Poset, part: &ChainOrderPartition, x: &[T]) -> Vec<T> {
    (0..p.len())
        .map(|a| {
            if part.is_order(a) {
                return x[a];
            }
            p.up_set(a)
                .iter()
                .filter(|&q| q != a)
                .map(|q| x[a] - x[q])
                .min()
                .unwrap_or(x[a])
        })
        .collect()
}

/// [`zeta_prime`] over any ordered additive group.
pub fn zeta_prime_generic<T: Copy + Ord + Zero + Add<Output = T>>(
    p: &Poset,
    part: &ChainOrderPartition,
    x: &[T],
) -> Vec<T> {
    let n = p.len();
    let mut y = x.to_vec();
    for a in (0..n).rev() {
        if part.is_order(a) {
            continue;
        }
        let best = p
            .up_set(a)
            .iter()
            .filter(|&q| q != a)
            .map(|q| y[q])
            .max()
            .unwrap_or_else(T::zero);
        y[a] = x[a] + best.max(T::zero());
    }
    y
}

/// `K(J) = (J ∩ U_o) ∪ {p ∈ J ∩ U_c maximal in J}`.
pub fn k_set(p: &Poset, part: &ChainOrderPartition, j: &OrderIdeal) -> Result<BitSet> {
    part.check(p)?;
    if j.bits().universe() != p.len() {
        return Err(invalid("ideal does not belong to this poset"));
    }
    Ok(k_set_unchecked(p, part, j.bits()))
}

fn k_set_unchecked(p: &Poset, part: &ChainOrderPartition, j: &BitSet) -> BitSet {
    BitSet::from_indices(
        p.len(),
        j.iter()
            .filter(|&a| part.is_order(a) || p.up_set(a).intersection_count(j) == 1),
    )
}

/// `J1 ⊙ J2`: the smallest ideal containing
/// `D = 1_{K(J1)} + 1_{K(J2)} − 1_{K(J1 ∪ J2)}`; asserts `K(J1 ⊙ J2) = D`.
pub fn odot_ideals(p: &Poset, part: &ChainOrderPartition, j1: &OrderIdeal, j2: &OrderIdeal) -> Result<OrderIdeal> {
    let k1 = k_set(p, part, j1)?;
    let k2 = k_set(p, part, j2)?;
    let k12 = k_set_unchecked(p, part, j1.union(j2).bits());
    let mut d = BitSet::new(p.len());
    for a in 0..p.len() {
        let v = k1.contains(a) as i32 + k2.contains(a) as i32 - k12.contains(a) as i32;
        match v {
            0 => {}
            1 => d.insert(a),
            _ => return Err(internal(format!("⊙ indicator takes value {v} at `{}`", p.id(a)))),
        }
    }
    let jp = down_closure(p, &d);
    if k_set_unchecked(p, part, jp.bits()) != d {
        return Err(internal("K(J1 ⊙ J2) differs from the indicator difference"));
    }
    Ok(jp)
}

/// `a ⊙ b` for lattice elements, computed on the ideals of join-irreducibles.
pub fn odot_elements(l: &DistributiveLattice, part: &ChainOrderPartition, a: usize, b: usize) -> Result<usize> {
    let j = odot_ideals(l.ji_poset(), part, l.ideal_of(a), l.ideal_of(b))?;
    l.element_of_ideal(&j)
        .ok_or_else(|| internal("⊙ ideal does not correspond to an element"))
}

/// Ideals of `p` with their K-set indicator vectors and the subideal lists.
struct IdealTable {
    k_vectors: Vec<Vec<i64>>,
    subideals: Vec<Vec<usize>>,
}

fn ideal_table(p: &Poset, part: &ChainOrderPartition) -> Result<IdealTable> {
    if p.len() > MAX_IDEAL_BITS {
        return Err(Error::Capacity(format!(
            "poset has {} elements; at most {MAX_IDEAL_BITS} supported",
            p.len()
        )));
    }
    let ideals = enumerate_order_ideals(p)?;
    let k_vectors = ideals
        .iter()
        .map(|j| {
            let k = k_set_unchecked(p, part, j.bits());
            (0..p.len()).map(|a| k.contains(a) as i64).collect()
        })
        .collect();
    let subideals = ideals
        .iter()
        .map(|j| (0..ideals.len()).filter(|&i| ideals[i].is_subset(j)).collect())
        .collect();
    Ok(IdealTable { k_vectors, subideals })
}

/// Integer points `Σ_{i≤t} 1_{K(J_i)}` over decreasing ideal chains
/// `J_1 ⊇ … ⊇ J_t`, as sorted distinct integer vectors; each is checked
/// against the dilated H-representation.
pub fn dilation_points_ints(p: &Poset, part: &ChainOrderPartition, t: usize) -> Result<Vec<Vec<i64>>> {
    part.check(p)?;
    let table = ideal_table(p, part)?;
    let hrep = interpolating_hrep(p, part)?;
    let n = p.len();
    let mut points = BTreeSet::new();
    fn walk(
        table: &IdealTable,
        from: Option<usize>,
        left: usize,
        acc: &mut Vec<i64>,
        out: &mut BTreeSet<Vec<i64>>,
    ) {
        if left == 0 {
            out.insert(acc.clone());
            return;
        }
        let choices: Vec<usize> = match from {
            None => (0..table.k_vectors.len()).collect(),
            Some(j) => table.subideals[j].clone(),
        };
        for i in choices {
            for (a, v) in acc.iter_mut().zip(&table.k_vectors[i]) {
                *a += v;
            }
            walk(table, Some(i), left - 1, acc, out);
            for (a, v) in acc.iter_mut().zip(&table.k_vectors[i]) {
                *a -= v;
            }
        }
    }
    walk(&table, None, t, &mut vec![0; n], &mut points);
    for x in &points {
        if !hrep.contains_scaled_ints(x, t as i64) {
            return Err(internal(format!("dilation point {x:?} violates the H-representation")));
        }
    }
    Ok(points.into_iter().collect())
}

/// [`dilation_points_ints`] as rational points.
pub fn dilation_points(p: &Poset, part: &ChainOrderPartition, t: usize) -> Result<Vec<RationalPoint>> {
    Ok(dilation_points_ints(p, part, t)?
        .iter()
        .map(|x| RationalPoint::from_ints(x))
        .collect())
}

/// Writes an integer point of the `t`-th dilation as a sum of `t` integer
/// points of the polytope, via the level sets of `ζ′(x)`.
pub fn minkowski_decompose(
    p: &Poset,
    part: &ChainOrderPartition,
    x: &RationalPoint,
    t: usize,
) -> Result<Vec<RationalPoint>> {
    part.check(p)?;
    check_len(p, x)?;
    let xi = x
        .to_ints()
        .ok_or_else(|| invalid("point is not integral"))?;
    let hrep = interpolating_hrep(p, part)?;
    Ok(minkowski_decompose_ints(p, part, &hrep, &xi, t)?
        .iter()
        .map(|v| RationalPoint::from_ints(v))
        .collect())
}

/// [`minkowski_decompose`] on integer vectors with a precomputed H-representation.
pub fn minkowski_decompose_ints(
    p: &Poset,
    part: &ChainOrderPartition,
    hrep: &PolytopeHRep,
    x: &[i64],
    t: usize,
) -> Result<Vec<Vec<i64>>> {
    if !hrep.contains_scaled_ints(x, t as i64) {
        return Err(invalid(format!("point is not in the {t}-th dilation")));
    }
    let n = p.len();
    let y = zeta_prime_generic(p, part, x);
    let mut parts = Vec::with_capacity(t);
    let mut total = vec![0i64; n];
    for i in 1..=t as i64 {
        let level = BitSet::from_indices(n, (0..n).filter(|&a| y[a] >= i));
        if !crate::order::is_order_ideal(p, &level) {
            return Err(internal(format!("level set {i} of ζ′(x) is not an order ideal")));
        }
        let k = k_set_unchecked(p, part, &level);
        let v: Vec<i64> = (0..n).map(|a| k.contains(a) as i64).collect();
        if !hrep.contains_scaled_ints(&v, 1) {
            return Err(internal("decomposition summand violates the H-representation"));
        }
        for (s, c) in total.iter_mut().zip(&v) {
            *s += c;
        }
        parts.push(v);
    }
    if total != x {
        return Err(internal("decomposition summands do not add up to the point"));
    }
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_chain() -> Poset {
        Poset::from_covers(vec!["p".into(), "q".into()], &[("p".into(), "q".into())]).unwrap()
    }

    #[test]
    fn chain_polytope_of_two_chain() {
        let p = two_chain();
        let h = interpolating_hrep(&p, &ChainOrderPartition::all_chain(&p)).unwrap();
        let shown: Vec<String> = h.inequalities().iter().map(|i| i.display(&p)).collect();
        assert!(shown.contains(&"x[p] +x[q] <= 1".to_string()), "{shown:?}");
        assert!(shown.contains(&"-x[p] <= 0".to_string()));
        assert_eq!(h.inequalities().len(), 5);
    }

    #[test]
    fn order_polytope_of_two_chain() {
        let p = two_chain();
        let h = interpolating_hrep(&p, &ChainOrderPartition::all_order(&p)).unwrap();
        let shown: Vec<String> = h.inequalities().iter().map(|i| i.display(&p)).collect();
        assert!(shown.contains(&"-x[p] +x[q] <= 0".to_string()), "{shown:?}");
        assert_eq!(h.inequalities().len(), 5);
    }

    #[test]
    fn zeta_examples() {
        let p = two_chain();
        let part = ChainOrderPartition::all_chain(&p);
        let z = zeta(&p, &part, &RationalPoint::from_ints(&[1, 1])).unwrap();
        assert_eq!(z, RationalPoint::from_ints(&[0, 1]));
        let back = zeta_prime(&p, &part, &RationalPoint::from_ints(&[0, 1])).unwrap();
        assert_eq!(back, RationalPoint::from_ints(&[1, 1]));
    }

    #[test]
    fn two_chain_points_and_decomposition() {
        let p = two_chain();
        let part = ChainOrderPartition::all_chain(&p);
        let pts = dilation_points_ints(&p, &part, 1).unwrap();
        assert_eq!(pts, vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        let parts = minkowski_decompose(&p, &part, &RationalPoint::from_ints(&[1, 1]), 2).unwrap();
        assert_eq!(parts, vec![RationalPoint::from_ints(&[0, 1]), RationalPoint::from_ints(&[1, 0])]);
        assert!(minkowski_decompose(&p, &part, &RationalPoint::from_ints(&[1, 1]), 1).is_err());
    }

    #[test]
    fn empty_poset() {
        let p = Poset::from_covers(vec![], &[]).unwrap();
        let part = ChainOrderPartition::all_order(&p);
        assert!(interpolating_hrep(&p, &part).unwrap().inequalities().is_empty());
        assert_eq!(dilation_points_ints(&p, &part, 2).unwrap(), vec![Vec::<i64>::new()]);
    }
}
