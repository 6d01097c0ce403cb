//! Finite posets, order ideals, distributive lattices, gradings, the Birkhoff
//! representation and diamond pairs.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{internal, invalid, Error, Result};

/// Largest poset whose order ideals may be enumerated (bitset capacity guard).
pub const MAX_IDEAL_BITS: usize = 62;

/// Largest lattice that may be materialized with pairwise tables.
pub const MAX_LATTICE_ELEMENTS: usize = 4096;

/// Lattices up to this size get an exhaustive distributivity check.
pub const FULL_CHECK_LIMIT: usize = 64;

/// Number of random triples checked on larger lattices.
pub const SAMPLED_TRIPLES: usize = 1000;

/// A finite poset with a dense comparability relation.
///
/// Elements are indexed `0..len()` in a canonical order which is always a
/// linear extension of the partial order.
#[derive(Clone, Debug)]
pub struct Poset {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    down: Vec<BitSet>,
    up: Vec<BitSet>,
    lower_covers: Vec<Vec<usize>>,
    upper_covers: Vec<Vec<usize>>,
}

/// JSON exchange format for posets.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PosetJson {
    /// Element ids.
    pub elements: Vec<String>,
    /// Cover edges `[lo, hi]`.
    pub covers: Vec<(String, String)>,
}

impl Poset {
    /// Builds a poset from cover edges `(lo, hi)`, taking the reflexive-transitive
    /// closure. Elements are reordered canonically by (height, id).
    pub fn from_covers(ids: Vec<String>, covers: &[(String, String)]) -> Result<Poset> {
        let n = ids.len();
        let mut index = HashMap::new();
        for (i, id) in ids.iter().enumerate() {
            if index.insert(id.clone(), i).is_some() {
                return Err(invalid(format!("duplicate element id `{id}`")));
            }
        }
        let mut succ = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for (lo, hi) in covers {
            let l = *index.get(lo).ok_or_else(|| Error::UnknownElement(lo.clone()))?;
            let h = *index.get(hi).ok_or_else(|| Error::UnknownElement(hi.clone()))?;
            if l == h {
                return Err(invalid(format!("cover edge `{lo}` -> `{hi}` is a loop")));
            }
            succ[l].push(h);
            indeg[h] += 1;
        }
        let mut height = vec![0usize; n];
        let mut queue: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut topo = Vec::with_capacity(n);
        while let Some(v) = queue.pop() {
            topo.push(v);
            for &w in &succ[v] {
                height[w] = height[w].max(height[v] + 1);
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push(w);
                }
            }
        }
        if topo.len() != n {
            return Err(invalid("cover edges contain a cycle"));
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| height[a].cmp(&height[b]).then_with(|| ids[a].cmp(&ids[b])));
        let mut new_pos = vec![0usize; n];
        for (p, &old) in order.iter().enumerate() {
            new_pos[old] = p;
        }
        let mut down = vec![BitSet::new(n); n];
        for &old in &order {
            let a = new_pos[old];
            down[a].insert(a);
        }
        let mut preds = vec![Vec::new(); n];
        for (l, hs) in succ.iter().enumerate() {
            for &h in hs {
                preds[new_pos[h]].push(new_pos[l]);
            }
        }
        for a in 0..n {
            let ps = preds[a].clone();
            for p in ps {
                let d = down[p].clone();
                down[a].union_with(&d);
            }
        }
        let new_ids = order.iter().map(|&o| ids[o].clone()).collect();
        Ok(Poset::from_down_sets_unchecked(new_ids, down))
    }

    /// Builds a poset from its down-sets (`down[a]` contains `b` iff `b <= a`),
    /// keeping the given element order, after validating the partial-order axioms
    /// and that the order is a linear extension.
    pub fn from_down_sets(ids: Vec<String>, down: Vec<BitSet>) -> Result<Poset> {
        let n = ids.len();
        if down.len() != n || down.iter().any(|d| d.universe() != n) {
            return Err(invalid("down-set shape does not match element count"));
        }
        let mut seen = HashMap::new();
        for id in &ids {
            if seen.insert(id.as_str(), ()).is_some() {
                return Err(invalid(format!("duplicate element id `{id}`")));
            }
        }
        for a in 0..n {
            if !down[a].contains(a) {
                return Err(invalid(format!("relation is not reflexive at `{}`", ids[a])));
            }
            for b in down[a].iter() {
                if b > a {
                    return Err(invalid(format!(
                        "element order is not a linear extension at `{}`",
                        ids[a]
                    )));
                }
                if b != a && down[b].contains(a) {
                    return Err(invalid(format!(
                        "relation is not antisymmetric on `{}`, `{}`",
                        ids[a], ids[b]
                    )));
                }
                if !down[b].is_subset(&down[a]) {
                    return Err(invalid(format!("relation is not transitive below `{}`", ids[a])));
                }
            }
        }
        Ok(Poset::from_down_sets_unchecked(ids, down))
    }

    pub(crate) fn from_down_sets_unchecked(ids: Vec<String>, down: Vec<BitSet>) -> Poset {
        let n = ids.len();
        let mut up = vec![BitSet::new(n); n];
        for (a, d) in down.iter().enumerate() {
            for b in d.iter() {
                up[b].insert(a);
            }
        }
        let mut lower_covers = vec![Vec::new(); n];
        let mut upper_covers = vec![Vec::new(); n];
        for a in 0..n {
            for b in down[a].iter() {
                if b != a && up[b].intersection_count(&down[a]) == 2 {
                    lower_covers[a].push(b);
                    upper_covers[b].push(a);
                }
            }
        }
        let index = ids.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        Poset {
            ids,
            index,
            down,
            up,
            lower_covers,
            upper_covers,
        }
    }

    /// Parses the JSON exchange format.
    pub fn from_json(text: &str) -> Result<Poset> {
        let pj: PosetJson =
            serde_json::from_str(text).map_err(|e| invalid(format!("poset JSON: {e}")))?;
        Poset::from_covers(pj.elements, &pj.covers)
    }

    /// Exports elements and cover edges.
    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            elements: self.ids.clone(),
            covers: self
                .covers()
                .into_iter()
                .map(|(l, h)| (self.ids[l].clone(), self.ids[h].clone()))
                .collect(),
        }
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    /// True for the empty poset.
    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// Element ids in canonical order.
    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    /// Id of element `a`.
    pub fn id(&self, a: usize) -> &str {
        &self.ids[a]
    }

    /// Index of the element with the given id.
    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownElement(id.to_string()))
    }

    /// `a <= b`.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.down[b].contains(a)
    }

    /// `a < b`.
    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    /// `a <= b` or `b <= a`.
    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// All `b <= a`.
    pub fn down_set(&self, a: usize) -> &BitSet {
        &self.down[a]
    }

    /// All `b >= a`.
    pub fn up_set(&self, a: usize) -> &BitSet {
        &self.up[a]
    }

    /// Elements covered by `a`.
    pub fn lower_covers(&self, a: usize) -> &[usize] {
        &self.lower_covers[a]
    }

    /// Elements covering `a`.
    pub fn upper_covers(&self, a: usize) -> &[usize] {
        &self.upper_covers[a]
    }

    /// Cover relation as `(lo, hi)` pairs in canonical order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = (0..self.len())
            .flat_map(|a| self.lower_covers[a].iter().map(move |&b| (b, a)))
            .collect();
        out.sort_unstable();
        out
    }

    /// `hi` covers `lo`.
    pub fn is_cover(&self, lo: usize, hi: usize) -> bool {
        self.lower_covers[hi].contains(&lo)
    }

    /// Maximal elements.
    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.upper_covers[a].is_empty()).collect()
    }

    /// Induced subposet on `members`, in the given order.
    pub fn subposet(&self, members: &[usize]) -> Poset {
        let m = members.len();
        let down = members
            .iter()
            .map(|&a| {
                BitSet::from_indices(
                    m,
                    members
                        .iter()
                        .enumerate()
                        .filter(|&(_, &b)| self.leq(b, a))
                        .map(|(j, _)| j),
                )
            })
            .collect();
        let ids = members.iter().map(|&a| self.ids[a].clone()).collect();
        Poset::from_down_sets_unchecked(ids, down)
    }
}

/// A downward-closed subset of a poset, stored as a bitset over its canonical order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderIdeal {
    bits: BitSet,
}

impl Ord for OrderIdeal {
    /// Cardinality first, then bit pattern.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.bits
            .count()
            .cmp(&other.bits.count())
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for OrderIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl OrderIdeal {
    /// Validates that `bits` is downward closed in `p`.
    pub fn new(p: &Poset, bits: BitSet) -> Result<OrderIdeal> {
        if bits.universe() != p.len() {
            return Err(invalid("bitset universe does not match poset"));
        }
        if !is_order_ideal(p, &bits) {
            return Err(invalid("subset is not downward closed"));
        }
        Ok(OrderIdeal { bits })
    }

    /// Validates a member list.
    pub fn from_members(p: &Poset, members: &[usize]) -> Result<OrderIdeal> {
        if members.iter().any(|&m| m >= p.len()) {
            return Err(invalid("member index out of range"));
        }
        OrderIdeal::new(p, BitSet::from_indices(p.len(), members.iter().copied()))
    }

    /// The empty ideal.
    pub fn empty(p: &Poset) -> OrderIdeal {
        OrderIdeal {
            bits: BitSet::new(p.len()),
        }
    }

    pub(crate) fn from_bits_unchecked(bits: BitSet) -> OrderIdeal {
        OrderIdeal { bits }
    }

    /// Underlying bitset.
    pub fn bits(&self) -> &BitSet {
        &self.bits
    }

    /// Membership.
    pub fn contains(&self, a: usize) -> bool {
        self.bits.contains(a)
    }

    /// Members in canonical order.
    pub fn members(&self) -> Vec<usize> {
        self.bits.iter().collect()
    }

    /// Cardinality.
    pub fn len(&self) -> usize {
        self.bits.count()
    }

    /// True for the empty ideal.
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Union (again an ideal).
    pub fn union(&self, other: &OrderIdeal) -> OrderIdeal {
        OrderIdeal {
            bits: self.bits.union(&other.bits),
        }
    }

    /// Intersection (again an ideal).
    pub fn intersection(&self, other: &OrderIdeal) -> OrderIdeal {
        OrderIdeal {
            bits: self.bits.intersection(&other.bits),
        }
    }

    /// Inclusion.
    pub fn is_subset(&self, other: &OrderIdeal) -> bool {
        self.bits.is_subset(&other.bits)
    }

    /// Maximal members.
    pub fn maximal_elements(&self, p: &Poset) -> Vec<usize> {
        self.bits
            .iter()
            .filter(|&a| p.up_set(a).intersection_count(&self.bits) == 1)
            .collect()
    }
}

/// True when `bits` is downward closed in `p`.
pub fn is_order_ideal(p: &Poset, bits: &BitSet) -> bool {
    bits.iter().all(|a| p.down_set(a).is_subset(bits))
}

/// Smallest order ideal containing `bits`.
pub fn down_closure(p: &Poset, bits: &BitSet) -> OrderIdeal {
    let mut out = BitSet::new(p.len());
    for a in bits.iter() {
        out.union_with(p.down_set(a));
    }
    OrderIdeal { bits: out }
}

/// All order ideals of `p`, sorted by cardinality then bit pattern.
pub fn enumerate_order_ideals(p: &Poset) -> Result<Vec<OrderIdeal>> {
    const MAX_IDEALS: usize = 1 << 22;
    let n = p.len();
    if n > MAX_IDEAL_BITS {
        return Err(Error::Capacity(format!(
            "poset has {n} elements; ideal enumeration supports at most {MAX_IDEAL_BITS}"
        )));
    }
    let strict_down: Vec<u64> = (0..n)
        .map(|a| {
            let mut s = p.down_set(a).clone();
            s.remove(a);
            s.to_u64()
        })
        .collect();
    let mut out = Vec::new();
    let mut stack = vec![(0usize, 0u64)];
    while let Some((i, mask)) = stack.pop() {
        if i == n {
            out.push(mask);
            if out.len() > MAX_IDEALS {
                return Err(Error::Capacity(format!(
                    "poset has more than {MAX_IDEALS} order ideals"
                )));
            }
            continue;
        }
        stack.push((i + 1, mask));
        if strict_down[i] & !mask == 0 {
            stack.push((i + 1, mask | 1 << i));
        }
    }
    let mut ideals: Vec<OrderIdeal> = out
        .into_iter()
        .map(|m| OrderIdeal::from_bits_unchecked(BitSet::from_u64(n, m)))
        .collect();
    ideals.sort();
    Ok(ideals)
}

/// Integer grading of a graded lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    values: Vec<u32>,
}

impl Grading {
    /// Grade of element `a`.
    pub fn value(&self, a: usize) -> u32 {
        self.values[a]
    }

    /// All grades, indexed by element.
    pub fn values(&self) -> &[u32] {
        &self.values
    }
}

/// A finite distributive lattice with materialized join and meet tables.
#[derive(Clone, Debug)]
pub struct DistributiveLattice {
    poset: Poset,
    join: Vec<u16>,
    meet: Vec<u16>,
    grading: Vec<u32>,
    ji: Vec<usize>,
    ji_pos: Vec<Option<usize>>,
    ji_poset: Poset,
    ideals: Vec<OrderIdeal>,
    ideal_index: HashMap<BitSet, usize>,
    bottom: usize,
    top: usize,
}

impl DistributiveLattice {
    /// Builds the lattice structure of a poset, failing if it is not a
    /// distributive lattice.
    pub fn from_poset(poset: Poset) -> Result<DistributiveLattice> {
        let n = poset.len();
        if n > MAX_LATTICE_ELEMENTS {
            return Err(Error::Capacity(format!(
                "lattice has {n} elements; at most {MAX_LATTICE_ELEMENTS} supported"
            )));
        }
        let up_count: Vec<usize> = (0..n).map(|a| poset.up_set(a).count()).collect();
        let down_count: Vec<usize> = (0..n).map(|a| poset.down_set(a).count()).collect();
        let mut join = vec![0u16; n * n];
        let mut meet = vec![0u16; n * n];
        for a in 0..n {
            for b in a..n {
                let u = poset.up_set(a).intersection(poset.up_set(b));
                let uc = u.count();
                let j = u.iter().find(|&c| up_count[c] == uc).ok_or_else(|| {
                    invalid(format!("`{}` and `{}` have no join", poset.id(a), poset.id(b)))
                })?;
                let d = poset.down_set(a).intersection(poset.down_set(b));
                let dc = d.count();
                let m = d.iter().find(|&c| down_count[c] == dc).ok_or_else(|| {
                    invalid(format!("`{}` and `{}` have no meet", poset.id(a), poset.id(b)))
                })?;
                join[a * n + b] = j as u16;
                join[b * n + a] = j as u16;
                meet[a * n + b] = m as u16;
                meet[b * n + a] = m as u16;
            }
        }
        DistributiveLattice::from_tables(poset, join, meet)
    }

    /// Assembles a lattice from precomputed tables (row-major `n * n`) and
    /// validates them against the order and the distributive law.
    pub fn from_tables(poset: Poset, join: Vec<u16>, meet: Vec<u16>) -> Result<DistributiveLattice> {
        let n = poset.len();
        if n == 0 {
            return Err(invalid("a lattice needs at least one element"));
        }
        if n > MAX_LATTICE_ELEMENTS {
            return Err(Error::Capacity(format!(
                "lattice has {n} elements; at most {MAX_LATTICE_ELEMENTS} supported"
            )));
        }
        if join.len() != n * n || meet.len() != n * n {
            return Err(invalid("operation table shape mismatch"));
        }
        let bottom = (0..n)
            .find(|&a| poset.up_set(a).count() == n)
            .ok_or_else(|| invalid("no minimum element"))?;
        let top = (0..n)
            .find(|&a| poset.down_set(a).count() == n)
            .ok_or_else(|| invalid("no maximum element"))?;
        let ji: Vec<usize> = (0..n).filter(|&a| poset.lower_covers(a).len() == 1).collect();
        let mut ji_pos = vec![None; n];
        for (i, &a) in ji.iter().enumerate() {
            ji_pos[a] = Some(i);
        }
        let ji_poset = poset.subposet(&ji);
        let ideals: Vec<OrderIdeal> = (0..n)
            .map(|a| {
                OrderIdeal::from_bits_unchecked(BitSet::from_indices(
                    ji.len(),
                    ji.iter()
                        .enumerate()
                        .filter(|&(_, &p)| poset.leq(p, a))
                        .map(|(i, _)| i),
                ))
            })
            .collect();
        let mut ideal_index = HashMap::with_capacity(n);
        for (a, id) in ideals.iter().enumerate() {
            if ideal_index.insert(id.bits().clone(), a).is_some() {
                return Err(invalid("lattice is not distributive (Birkhoff map not injective)"));
            }
        }
        let grading: Vec<u32> = ideals.iter().map(|i| i.len() as u32).collect();
        let lat = DistributiveLattice {
            poset,
            join,
            meet,
            grading,
            ji,
            ji_pos,
            ji_poset,
            ideals,
            ideal_index,
            bottom,
            top,
        };
        lat.validate()?;
        Ok(lat)
    }

    fn validate(&self) -> Result<()> {
        let n = self.len();
        if self.grading[self.bottom] != 0 {
            return Err(internal("grading of the minimum is not zero"));
        }
        for (lo, hi) in self.poset.covers() {
            if self.grading[hi] != self.grading[lo] + 1 {
                return Err(invalid("lattice is not graded by its join-irreducibles"));
            }
        }
        let check_pair = |a: usize, b: usize| -> Result<()> {
            let j = self.join(a, b);
            let m = self.meet(a, b);
            let u = self.poset.up_set(a).intersection(self.poset.up_set(b));
            let d = self.poset.down_set(a).intersection(self.poset.down_set(b));
            if !u.contains(j) || !u.is_subset(self.poset.up_set(j)) {
                return Err(invalid(format!("join table wrong at ({a},{b})")));
            }
            if !d.contains(m) || !d.is_subset(self.poset.down_set(m)) {
                return Err(invalid(format!("meet table wrong at ({a},{b})")));
            }
            Ok(())
        };
        let check_triple = |a: usize, b: usize, c: usize| -> Result<()> {
            let lhs = self.meet(a, self.join(b, c));
            let rhs = self.join(self.meet(a, b), self.meet(a, c));
            if lhs != rhs {
                return Err(invalid(format!(
                    "distributive law fails at ({}, {}, {})",
                    self.poset.id(a),
                    self.poset.id(b),
                    self.poset.id(c)
                )));
            }
            Ok(())
        };
        if n <= FULL_CHECK_LIMIT {
            for a in 0..n {
                for b in 0..n {
                    check_pair(a, b)?;
                    for c in 0..n {
                        check_triple(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(0);
            for _ in 0..SAMPLED_TRIPLES {
                let (a, b, c) = (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n));
                check_pair(a, b)?;
                check_triple(a, b, c)?;
            }
        }
        Ok(())
    }

    /// Underlying poset.
    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.poset.len()
    }

    /// Always false: lattices are nonempty.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// `a ∨ b`.
    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.len() + b] as usize
    }

    /// `a ∧ b`.
    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.len() + b] as usize
    }

    /// `a <= b`.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.poset.leq(a, b)
    }

    /// Minimum element.
    pub fn bottom(&self) -> usize {
        self.bottom
    }

    /// Maximum element.
    pub fn top(&self) -> usize {
        self.top
    }

    /// Grade `|a|`.
    pub fn grade(&self, a: usize) -> u32 {
        self.grading[a]
    }

    /// Join-irreducible elements in canonical order.
    pub fn join_irreducible_elements(&self) -> &[usize] {
        &self.ji
    }

    /// Position of `a` among the join-irreducibles.
    pub fn ji_position(&self, a: usize) -> Option<usize> {
        self.ji_pos[a]
    }

    /// The poset of join-irreducibles, ordered as in the lattice.
    pub fn ji_poset(&self) -> &Poset {
        &self.ji_poset
    }

    /// `ι(a)`: join-irreducibles below `a`, as an ideal of [`Self::ji_poset`].
    pub fn ideal_of(&self, a: usize) -> &OrderIdeal {
        &self.ideals[a]
    }

    /// Inverse of [`Self::ideal_of`].
    pub fn element_of_ideal(&self, j: &OrderIdeal) -> Option<usize> {
        self.ideal_index.get(j.bits()).copied()
    }

    /// Unordered incomparable pairs `(a, b)` with `a < b` as indices.
    pub fn incomparable_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if !self.poset.comparable(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Id of element `a`.
    pub fn id(&self, a: usize) -> &str {
        self.poset.id(a)
    }
}

/// `J(P)`: the lattice of order ideals with union and intersection.
pub fn lattice_of_ideals(p: &Poset) -> Result<DistributiveLattice> {
    let ideals = enumerate_order_ideals(p)?;
    let n = ideals.len();
    if n > MAX_LATTICE_ELEMENTS {
        return Err(Error::Capacity(format!(
            "poset has {n} order ideals; at most {MAX_LATTICE_ELEMENTS} supported"
        )));
    }
    let index: HashMap<&BitSet, usize> = ideals.iter().enumerate().map(|(i, j)| (j.bits(), i)).collect();
    let ids = ideals
        .iter()
        .map(|j| {
            let names: Vec<&str> = j.members().iter().map(|&a| p.id(a)).collect();
            format!("{{{}}}", names.join("|"))
        })
        .collect();
    let down = ideals
        .iter()
        .map(|j| BitSet::from_indices(n, (0..n).filter(|&i| ideals[i].is_subset(j))))
        .collect();
    let poset = Poset::from_down_sets_unchecked(ids, down);
    let mut join = vec![0u16; n * n];
    let mut meet = vec![0u16; n * n];
    for a in 0..n {
        for b in 0..n {
            join[a * n + b] = index[&ideals[a].bits().union(ideals[b].bits())] as u16;
            meet[a * n + b] = index[&ideals[a].bits().intersection(ideals[b].bits())] as u16;
        }
    }
    DistributiveLattice::from_tables(poset, join, meet)
}

/// The subposet of join-irreducible elements.
pub fn join_irreducibles(l: &DistributiveLattice) -> Poset {
    l.ji_poset.clone()
}

/// `ι_L(a)` as an ideal of the join-irreducible poset.
pub fn birkhoff_iso(l: &DistributiveLattice, a: usize) -> Result<OrderIdeal> {
    if a >= l.len() {
        return Err(Error::UnknownElement(a.to_string()));
    }
    Ok(l.ideals[a].clone())
}

/// Grading `|a| = |ι(a)|`.
pub fn grading_of(l: &DistributiveLattice) -> Grading {
    Grading {
        values: l.grading.clone(),
    }
}

/// All diamond pairs `(a, b)`, `a < b` as indices, sorted.
pub fn diamond_pairs(l: &DistributiveLattice) -> Vec<(usize, usize)> {
    let p = l.poset();
    let mut out = Vec::new();
    for c in 0..l.len() {
        let ups = p.upper_covers(c);
        for (i, &a) in ups.iter().enumerate() {
            for &b in &ups[i + 1..] {
                let j = l.join(a, b);
                if p.is_cover(a, j) && p.is_cover(b, j) {
                    out.push((a.min(b), a.max(b)));
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// True when `{a, b}` is a diamond pair.
pub fn is_diamond(l: &DistributiveLattice, a: usize, b: usize) -> bool {
    let p = l.poset();
    if p.comparable(a, b) {
        return false;
    }
    let (j, m) = (l.join(a, b), l.meet(a, b));
    p.is_cover(a, j) && p.is_cover(b, j) && p.is_cover(m, a) && p.is_cover(m, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(m: usize) -> Poset {
        let ids: Vec<String> = (0..m).map(|i| format!("c{i}")).collect();
        let covers: Vec<(String, String)> =
            (1..m).map(|i| (ids[i - 1].clone(), ids[i].clone())).collect();
        Poset::from_covers(ids, &covers).unwrap()
    }

    fn antichain(m: usize) -> Poset {
        Poset::from_covers((0..m).map(|i| format!("x{i}")).collect(), &[]).unwrap()
    }

    #[test]
    fn ideal_counts_of_small_posets() {
        assert_eq!(enumerate_order_ideals(&antichain(2)).unwrap().len(), 4);
        assert_eq!(enumerate_order_ideals(&chain(3)).unwrap().len(), 4);
    }

    #[test]
    fn cycle_is_rejected() {
        let ids = vec!["a".to_string(), "b".to_string()];
        let covers = vec![("a".into(), "b".into()), ("b".into(), "a".into())];
        assert!(Poset::from_covers(ids, &covers).is_err());
    }

    #[test]
    fn redundant_edges_reduce_to_covers() {
        let ids = vec!["a".to_string(), "b".into(), "c".into()];
        let covers = vec![
            ("a".into(), "b".into()),
            ("b".into(), "c".into()),
            ("a".into(), "c".into()),
        ];
        let p = Poset::from_covers(ids, &covers).unwrap();
        assert_eq!(p.covers(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn capacity_guard() {
        let p = antichain(63);
        assert!(matches!(enumerate_order_ideals(&p), Err(Error::Capacity(_))));
    }

    #[test]
    fn empty_poset_gives_one_point_lattice() {
        let l = lattice_of_ideals(&antichain(0)).unwrap();
        assert_eq!(l.len(), 1);
        assert!(diamond_pairs(&l).is_empty());
    }

    #[test]
    fn boolean_lattice() {
        let l = lattice_of_ideals(&antichain(2)).unwrap();
        assert_eq!(l.len(), 4);
        assert_eq!(l.join_irreducible_elements().len(), 2);
        assert_eq!(diamond_pairs(&l).len(), 1);
        assert_eq!(l.grade(l.top()), 2);
    }

    #[test]
    fn chains_have_no_diamonds() {
        let l = lattice_of_ideals(&chain(4)).unwrap();
        assert_eq!(l.len(), 5);
        assert!(diamond_pairs(&l).is_empty());
        assert_eq!(l.join_irreducible_elements().len(), 4);
    }

    #[test]
    fn non_distributive_lattice_is_rejected() {
        // The diamond M3.
        let ids = vec!["0".to_string(), "a".into(), "b".into(), "c".into(), "1".into()];
        let covers = vec![
            ("0".into(), "a".into()),
            ("0".into(), "b".into()),
            ("0".into(), "c".into()),
            ("a".into(), "1".into()),
            ("b".into(), "1".into()),
            ("c".into(), "1".into()),
        ];
        let p = Poset::from_covers(ids, &covers).unwrap();
        assert!(DistributiveLattice::from_poset(p).is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = Poset::from_json(r#"{"elements":["b","a"],"covers":[["a","b"]]}"#).unwrap();
        assert_eq!(p.ids(), &["a".to_string(), "b".to_string()]);
        let q = Poset::from_covers(p.to_json().elements, &p.to_json().covers).unwrap();
        assert_eq!(q.covers(), p.covers());
    }
}
