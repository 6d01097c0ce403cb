//! Plücker relations and straightening: canonical signed variables, exchange
//! and shuffle relations, the straightening of a product of two incomparable
//! lattice variables into standard monomials, Hibi-type generators, and the
//! toric exponent maps `θ` and `ψ`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{internal, invalid, Error, Result};
use crate::order::DistributiveLattice;
use crate::plucker::{column_sign, is_column, sorted, Column, LatticeKind, PluckerLattice};
use crate::poly::{coeff, format_coeff, parse_coeff, Coeff, Poly};
use crate::polytope::{k_set, odot_elements, ChainOrderPartition};

/// A polynomial in the Plücker variables `X_I`, keyed by increasing columns.
pub type RelationPolynomial = Poly<Column>;

/// A polynomial in lattice variables `X_a`, keyed by element indices.
pub type LatticePolynomial = Poly<usize>;

/// Upper bound on straightening steps before reporting an internal error.
pub const MAX_STRAIGHTENING_STEPS: usize = 100_000;

/// Sorts an index tuple: `X_{indices} = sign · X_{column}`; `None` when an
/// index repeats (the variable vanishes).
pub fn canonicalize(indices: &[u8], n: usize) -> Result<Option<(i8, Column)>> {
    if indices.is_empty() || indices.len() >= n {
        return Err(invalid(format!("column length {} outside 1..{n}", indices.len())));
    }
    if let Some(&x) = indices.iter().find(|&&x| x == 0 || x as usize > n) {
        return Err(invalid(format!("index {x} outside [1, {n}]")));
    }
    match column_sign(indices) {
        0 => Ok(None),
        s => Ok(Some((s, sorted(indices)))),
    }
}

/// `c · Π X_{factor}` with every factor canonicalized.
pub fn plucker_term(c: Coeff, factors: &[&[u8]], n: usize) -> Result<RelationPolynomial> {
    let mut sign = 1i64;
    let mut mono = Vec::with_capacity(factors.len());
    for f in factors {
        match canonicalize(f, n)? {
            Some((s, col)) => {
                sign *= s as i64;
                mono.push(col);
            }
            None => return Ok(Poly::zero()),
        }
    }
    Ok(Poly::term(mono, c * coeff(sign)))
}

fn check_pair_shape(a: &[u8], b: &[u8], r: usize) -> Result<()> {
    if a.len() < b.len() {
        return Err(invalid("the first column must be at least as long as the second"));
    }
    if r == 0 || r > b.len() {
        return Err(invalid(format!("position r = {r} outside 1..={}", b.len())));
    }
    Ok(())
}

/// `X_A X_B − Σ_s X_{A[i_s ← j_r]} X_{B[j_r ← i_s]}`.
pub fn exchange_relation(a: &[u8], b: &[u8], r: usize, n: usize) -> Result<RelationPolynomial> {
    for c in [a, b] {
        if !is_column(c, n) {
            return Err(invalid(format!("`{c:?}` is not an increasing column for n = {n}")));
        }
    }
    check_pair_shape(a, b, r)?;
    let mut out = plucker_term(Coeff::one(), &[a, b], n)?;
    for s in 0..a.len() {
        let mut a2 = a.to_vec();
        let mut b2 = b.to_vec();
        std::mem::swap(&mut a2[s], &mut b2[r - 1]);
        out = &out - &plucker_term(Coeff::one(), &[&a2, &b2], n)?;
    }
    Ok(out)
}

fn permutation_sign(p: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// The alternating sum over shuffles of `(i_r, …, i_k, j_1, …, j_r)` between
/// the two columns, one term per coset, normalized so that the coefficient of
/// `X_A X_B` (as written) is 1 whenever it is nonzero.
pub fn shuffle_relation(a: &[u8], b: &[u8], r: usize, n: usize) -> Result<RelationPolynomial> {
    check_pair_shape(a, b, r)?;
    let k = a.len();
    let t: Vec<u8> = a[r - 1..].iter().chain(&b[..r]).copied().collect();
    let m = k - r + 1;
    let mut out = Poly::zero();
    for mask in 0u32..(1 << t.len()) {
        if mask.count_ones() as usize != m {
            continue;
        }
        let chosen: Vec<usize> = (0..t.len()).filter(|&i| mask >> i & 1 == 1).collect();
        let rest: Vec<usize> = (0..t.len()).filter(|&i| mask >> i & 1 == 0).collect();
        let perm: Vec<usize> = chosen.iter().chain(&rest).copied().collect();
        let a2: Column = a[..r - 1].iter().copied().chain(chosen.iter().map(|&i| t[i])).collect();
        let b2: Column = rest.iter().map(|&i| t[i]).chain(b[r..].iter().copied()).collect();
        let term = plucker_term(coeff(permutation_sign(&perm)), &[&a2, &b2], n)?;
        out = &out + &term;
    }
    let (Some((sa, ca)), Some((sb, cb))) = (canonicalize(a, n)?, canonicalize(b, n)?) else {
        return Ok(out);
    };
    let lead = out.coeff_of(&[ca, cb]);
    if lead.is_zero() {
        return Ok(out);
    }
    Ok(out.scaled(&(coeff(sa as i64 * sb as i64) / lead)))
}

/// Appends `extra` to the shorter factor of every quadratic monomial.
pub fn append_columns(rel: &RelationPolynomial, extra: &[u8], n: usize) -> Result<RelationPolynomial> {
    let mut out = Poly::zero();
    for (mono, c) in rel.terms() {
        let [x, y] = mono.as_slice() else {
            return Err(invalid("append_columns expects quadratic monomials"));
        };
        let (long, short) = if x.len() >= y.len() { (x, y) } else { (y, x) };
        if short.len() + extra.len() > long.len() {
            return Err(invalid("appended column would exceed the longer factor"));
        }
        let grown: Column = short.iter().chain(extra).copied().collect();
        out = &out + &plucker_term(c.clone(), &[long, &grown], n)?;
    }
    Ok(out)
}

/// Relabels every index `i` as `perm[i − 1]`.
pub fn apply_index_permutation(rel: &RelationPolynomial, perm: &[u8], n: usize) -> Result<RelationPolynomial> {
    if perm.len() != n || sorted(perm) != (1..=n as u8).collect::<Vec<_>>() {
        return Err(invalid(format!("`{perm:?}` is not a permutation of 1..={n}")));
    }
    let mut out = Poly::zero();
    for (mono, c) in rel.terms() {
        let factors: Vec<Column> = mono
            .iter()
            .map(|col| col.iter().map(|&i| perm[i as usize - 1]).collect())
            .collect();
        let refs: Vec<&[u8]> = factors.iter().map(Vec::as_slice).collect();
        out = &out + &plucker_term(c.clone(), &refs, n)?;
    }
    Ok(out)
}

/// Multidegree: the number of factors of each length `1..n`.
pub fn deg(mono: &[Column], n: usize) -> Vec<u32> {
    let mut d = vec![0; n - 1];
    for c in mono {
        d[c.len() - 1] += 1;
    }
    d
}

/// Weight: how often each index `1..=n` occurs.
pub fn wt(mono: &[Column], n: usize) -> Vec<u32> {
    let mut w = vec![0; n];
    for c in mono {
        for &i in c {
            w[i as usize - 1] += 1;
        }
    }
    w
}

/// Orders an incomparable pair for the shuffle relation and returns
/// `(first, second, r)`.
fn orient(pl: &PluckerLattice, x: usize, y: usize) -> Result<(usize, usize, usize)> {
    let (lx, ly) = (pl.label(x), pl.label(y));
    let l = pl.lattice();
    let (a, b) = match lx.len().cmp(&ly.len()) {
        std::cmp::Ordering::Greater => (x, y),
        std::cmp::Ordering::Less => (y, x),
        std::cmp::Ordering::Equal => match pl.kind() {
            LatticeKind::M => {
                if lx < ly {
                    (x, y)
                } else {
                    (y, x)
                }
            }
            LatticeKind::N => {
                if (l.grade(x), x) > (l.grade(y), y) {
                    (x, y)
                } else {
                    (y, x)
                }
            }
        },
    };
    let (ia, ib) = (pl.label(a), pl.label(b));
    let r = match pl.kind() {
        LatticeKind::M => (0..ib.len()).find(|&p| ia[p] > ib[p]),
        LatticeKind::N => (0..ib.len()).find(|&p| ia[p..].iter().all(|&v| v < ib[p])),
    };
    let r = r.ok_or_else(|| internal(format!("no violating position for ({}, {})", pl.id(a), pl.id(b))))?;
    Ok((a, b, r + 1))
}

/// Rewrites a polynomial in increasing-column variables in lattice variables.
pub fn plucker_to_lattice(pl: &PluckerLattice, p: &RelationPolynomial) -> Result<LatticePolynomial> {
    let mut missing = None;
    let out = p.map_vars(|c| match pl.element_by_set(c) {
        Some(e) => Some((pl.sign(e), e)),
        None => {
            missing = Some(c.clone());
            None
        }
    });
    match missing {
        Some(c) => Err(Error::UnknownElement(format!("no lattice element with entries {c:?}"))),
        None => Ok(out),
    }
}

/// Rewrites a polynomial in lattice variables with increasing-column variables.
pub fn lattice_to_plucker(pl: &PluckerLattice, p: &LatticePolynomial) -> RelationPolynomial {
    p.map_vars(|&e| Some((pl.sign(e), pl.sorted_label(e))))
}

/// The shuffle relation of an incomparable pair in lattice variables, with
/// coefficient 1 on `X_x X_y`.
pub fn local_relation(pl: &PluckerLattice, x: usize, y: usize) -> Result<LatticePolynomial> {
    let (a, b, r) = orient(pl, x, y)?;
    let rel = shuffle_relation(pl.label(a), pl.label(b), r, pl.n())?;
    let rel = plucker_to_lattice(pl, &rel)?;
    if rel.coeff_of(&[a, b]) != Coeff::one() {
        return Err(internal(format!("shuffle relation of ({}, {}) lost its leading term", pl.id(a), pl.id(b))));
    }
    Ok(rel)
}

/// `s(a, b)`: `X_a X_b` minus its expansion in standard monomials (products
/// of comparable lattice variables).
pub fn straighten_pair(pl: &PluckerLattice, a: usize, b: usize) -> Result<LatticePolynomial> {
    if a >= pl.len() || b >= pl.len() {
        return Err(Error::UnknownElement(format!("element index {}", a.max(b))));
    }
    let poset = pl.lattice().poset();
    if poset.comparable(a, b) {
        return Err(Error::Comparable(pl.id(a), pl.id(b)));
    }
    let start = Poly::term(vec![a, b], Coeff::one());
    let mut f = start.clone();
    for _ in 0..MAX_STRAIGHTENING_STEPS {
        let next = f
            .terms()
            .find(|(m, _)| !poset.comparable(m[0], m[1]))
            .map(|(m, c)| (m.clone(), c.clone()));
        let Some((m, c)) = next else {
            return Ok(&start - &f);
        };
        let rel = local_relation(pl, m[0], m[1])?;
        f.add_scaled(&rel, &-c);
    }
    Err(internal(format!(
        "straightening of ({}, {}) exceeded {MAX_STRAIGHTENING_STEPS} steps",
        pl.id(a),
        pl.id(b)
    )))
}

/// True when all terms share one `deg` and one `wt`.
pub fn is_bihomogeneous(p: &RelationPolynomial, n: usize) -> bool {
    let mut grades = p.terms().map(|(m, _)| (deg(m, n), wt(m, n)));
    match grades.next() {
        Some(first) => grades.all(|g| g == first),
        None => true,
    }
}

/// Graded reverse lexicographic comparison of two monomials in lattice
/// variables, where a variable is larger when its index is larger.
pub fn grevlex_cmp(x: &[usize], y: &[usize]) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    match x.len().cmp(&y.len()) {
        Ordering::Equal => {}
        o => return o,
    }
    let count = |m: &[usize]| {
        let mut c: BTreeMap<usize, i64> = BTreeMap::new();
        for &v in m {
            *c.entry(v).or_insert(0) += 1;
        }
        c
    };
    let (cx, cy) = (count(x), count(y));
    let vars: std::collections::BTreeSet<usize> = cx.keys().chain(cy.keys()).copied().collect();
    for v in vars {
        let (ex, ey) = (cx.get(&v).copied().unwrap_or(0), cy.get(&v).copied().unwrap_or(0));
        if ex != ey {
            return ey.cmp(&ex);
        }
    }
    Ordering::Equal
}

/// The grevlex-largest monomial of a nonzero polynomial.
pub fn grevlex_leading(p: &LatticePolynomial) -> Option<Vec<usize>> {
    p.terms().map(|(m, _)| m.clone()).max_by(|x, y| grevlex_cmp(x, y))
}

/// One term `c · X_lower X_upper` of `X_a X_b − s(a, b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LadderTerm {
    /// The smaller factor.
    pub lower: usize,
    /// The larger factor.
    pub upper: usize,
    /// Coefficient in `X_a X_b = Σ c · X_lower X_upper` modulo the ideal.
    pub coeff: Coeff,
}

/// The standard terms of `s(a, b)` with their signs flipped, the term whose
/// upper factor is `a ∨ b` first and the rest in monomial order.
pub fn ladder(pl: &PluckerLattice, s: &LatticePolynomial, a: usize, b: usize) -> Vec<LadderTerm> {
    let l = pl.lattice();
    let join = l.join(a, b);
    let mut out: Vec<LadderTerm> = s
        .terms()
        .filter(|(m, _)| m.as_slice() != [a.min(b), a.max(b)])
        .map(|(m, c)| {
            let (lo, hi) = if l.leq(m[0], m[1]) { (m[0], m[1]) } else { (m[1], m[0]) };
            LadderTerm {
                lower: lo,
                upper: hi,
                coeff: -c.clone(),
            }
        })
        .collect();
    out.sort_by_key(|t| t.upper != join);
    out
}

/// `X_a X_b − X_{a⊙b} X_{a∨b}`.
pub fn hibi_generator(l: &DistributiveLattice, part: &ChainOrderPartition, a: usize, b: usize) -> Result<LatticePolynomial> {
    if a >= l.len() || b >= l.len() {
        return Err(Error::UnknownElement(format!("element index {}", a.max(b))));
    }
    if l.poset().comparable(a, b) {
        return Err(Error::Comparable(l.id(a).to_string(), l.id(b).to_string()));
    }
    let odot = odot_elements(l, part, a, b)?;
    let mut p = Poly::term(vec![a, b], Coeff::one());
    p.add_term(vec![odot, l.join(a, b)], coeff(-1));
    Ok(p)
}

/// Exponent vector of `θ(X_a) = t · Π_{p ∈ K(ι(a))} z_p`, indexed by the
/// join-irreducible poset with `t` last.
pub fn theta_exponent(l: &DistributiveLattice, part: &ChainOrderPartition, a: usize) -> Result<Vec<u32>> {
    let jp = l.ji_poset();
    let k = k_set(jp, part, l.ideal_of(a))?;
    let mut e: Vec<u32> = (0..jp.len()).map(|i| k.contains(i) as u32).collect();
    e.push(1);
    Ok(e)
}

/// Exponent vector of `θ` on a monomial.
pub fn theta_of_monomial(l: &DistributiveLattice, part: &ChainOrderPartition, mono: &[usize]) -> Result<Vec<u32>> {
    let mut total = vec![0; l.ji_poset().len() + 1];
    for &a in mono {
        for (t, e) in total.iter_mut().zip(theta_exponent(l, part, a)?) {
            *t += e;
        }
    }
    Ok(total)
}

/// Variables of the PBW degeneration's toric ring.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ZVar {
    /// `z_k`, marking column length.
    Diag(u8),
    /// `z_{i,j}` with `i < j`.
    Off(u8, u8),
}

/// `ψ(b_α) = z_k · Π_{α_j > k} z_{j, α_j}` as an exponent map.
pub fn psi_exponent(alpha: &[u8]) -> BTreeMap<ZVar, i32> {
    let k = alpha.len() as u8;
    let mut e = BTreeMap::new();
    e.insert(ZVar::Diag(k), 1);
    for (j, &v) in alpha.iter().enumerate() {
        if v > k {
            *e.entry(ZVar::Off(j as u8 + 1, v)).or_insert(0) += 1;
        }
    }
    e
}

/// `θ(X_a)` on `N(n)` under `z_{x_{r,s}} = z_{r,s}`,
/// `z_{x_{k,k}} = z_k / z_{k−1}` and `t = z_1`.
pub fn theta_in_z(nl: &PluckerLattice, a: usize) -> Result<BTreeMap<ZVar, i32>> {
    if nl.kind() != LatticeKind::N {
        return Err(invalid("θ in z-variables is defined on N(n)"));
    }
    let l = nl.lattice();
    let e = theta_exponent(l, nl.partition(), a)?;
    let mut out: BTreeMap<ZVar, i32> = BTreeMap::new();
    let mut add = |v: ZVar, d: i32| *out.entry(v).or_insert(0) += d;
    add(ZVar::Diag(1), e[e.len() - 1] as i32);
    for (i, &x) in e[..e.len() - 1].iter().enumerate() {
        if x == 0 {
            continue;
        }
        let (r, s) = nl.ji_coord(l.join_irreducible_elements()[i]).expect("ji coordinate");
        if r < s {
            add(ZVar::Off(r, s), x as i32);
        } else {
            add(ZVar::Diag(r), x as i32);
            add(ZVar::Diag(r - 1), -(x as i32));
        }
    }
    out.retain(|_, v| *v != 0);
    Ok(out)
}

/// One term of a serialized relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    /// Coefficient as `p` or `p/q`.
    pub coeff: String,
    /// Factors as index lists.
    pub factors: Vec<Column>,
}

/// Serialized relation.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct RelationJson {
    /// Terms.
    pub terms: Vec<TermJson>,
}

/// Serializes a polynomial in increasing-column variables.
pub fn relation_to_json(p: &RelationPolynomial) -> RelationJson {
    RelationJson {
        terms: p
            .terms()
            .map(|(m, c)| TermJson {
                coeff: format_coeff(c),
                factors: m.clone(),
            })
            .collect(),
    }
}

/// Serializes a polynomial in lattice variables, naming factors by their
/// lattice columns.
pub fn lattice_relation_to_json(pl: &PluckerLattice, p: &LatticePolynomial) -> RelationJson {
    RelationJson {
        terms: p
            .terms()
            .map(|(m, c)| TermJson {
                coeff: format_coeff(c),
                factors: m.iter().map(|&e| pl.label(e).to_vec()).collect(),
            })
            .collect(),
    }
}

/// Parses a serialized relation, canonicalizing every factor.
pub fn relation_from_json(j: &RelationJson, n: usize) -> Result<RelationPolynomial> {
    let mut out = Poly::zero();
    for t in &j.terms {
        let c = parse_coeff(&t.coeff).ok_or_else(|| invalid(format!("bad coefficient `{}`", t.coeff)))?;
        let refs: Vec<&[u8]> = t.factors.iter().map(Vec::as_slice).collect();
        out = &out + &plucker_term(c, &refs, n)?;
    }
    Ok(out)
}

/// Renders a lattice polynomial as text, such as `X[1,4]X[2,3] - X[1,3]X[2,4]`.
pub fn format_lattice_polynomial(pl: &PluckerLattice, p: &LatticePolynomial) -> String {
    let mut s = String::new();
    for (i, (m, c)) in p.terms().enumerate() {
        let neg = c < &Coeff::zero();
        let abs = if neg { -c.clone() } else { c.clone() };
        if i == 0 {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        if !abs.is_one() {
            s.push_str(&format_coeff(&abs));
            s.push(' ');
        }
        for &e in m {
            s.push_str(&format!("X[{}]", pl.id(e)));
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::plucker::{build_m, build_n};

    fn rel(terms: &[(i64, &[u8], &[u8])], n: usize) -> RelationPolynomial {
        let mut p = Poly::zero();
        for &(c, a, b) in terms {
            p = &p + &plucker_term(coeff(c), &[a, b], n).unwrap();
        }
        p
    }

    #[test]
    fn classical_relations() {
        let want = rel(&[(1, &[1, 4], &[2, 3]), (-1, &[1, 3], &[2, 4]), (1, &[1, 2], &[3, 4])], 4);
        assert_eq!(shuffle_relation(&[1, 4], &[2, 3], 2, 4).unwrap(), want);
        assert_eq!(exchange_relation(&[1, 4], &[2, 3], 2, 4).unwrap(), want);
        let two_one = rel(&[(1, &[2, 3], &[1]), (-1, &[1, 3], &[2]), (1, &[1, 2], &[3])], 3);
        assert_eq!(append_columns(&two_one, &[4], 4).unwrap(), want);
    }

    #[test]
    fn straightening_in_m3_and_n3() {
        let m = build_m(3).unwrap();
        let a = m.element(&[2, 3]).unwrap();
        let b = m.element(&[1]).unwrap();
        let s = straighten_pair(&m, a, b).unwrap();
        let want = rel(&[(1, &[2, 3], &[1]), (-1, &[1, 3], &[2]), (1, &[1, 2], &[3])], 3);
        assert_eq!(lattice_to_plucker(&m, &s), want);
        let nl = build_n(3).unwrap();
        let a = nl.element(&[1, 2]).unwrap();
        let b = nl.element(&[3]).unwrap();
        let s = straighten_pair(&nl, a, b).unwrap();
        let want = rel(&[(1, &[1, 2], &[3]), (1, &[1], &[2, 3]), (-1, &[2], &[1, 3])], 3);
        assert_eq!(lattice_to_plucker(&nl, &s), want);
    }

    #[test]
    fn canonical_signs() {
        assert_eq!(canonicalize(&[3, 1], 4).unwrap(), Some((-1, vec![1, 3])));
        assert_eq!(canonicalize(&[2, 2], 4).unwrap(), None);
        assert!(canonicalize(&[5], 4).is_err());
        assert!(canonicalize(&[1, 2, 3, 4], 4).is_err());
    }

    #[test]
    fn psi_matches_theta_on_n3() {
        let nl = build_n(3).unwrap();
        for a in 0..nl.len() {
            assert_eq!(theta_in_z(&nl, a).unwrap(), psi_exponent(nl.label(a)), "{}", nl.id(a));
        }
    }
}
