//! Membership oracles for the Plücker ideal: evaluation of Plücker variables
//! as maximal minors over a prime field, Schwartz–Zippel membership tests,
//! exact symbolic expansion for small cases, a standard-monomial basis check
//! and a linear-algebra oracle for standard-monomial expansions.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{internal, invalid, Error, Result};
use crate::plucker::{Column, PluckerLattice};
use crate::poly::{coeff, Poly};
use crate::straighten::{deg, lattice_to_plucker, LatticePolynomial, RelationPolynomial};

/// The prime `2^62 − 57`.
pub const PRIME: u64 = (1 << 62) - 57;

/// Largest total degree accepted by the symbolic oracle.
pub const SYMBOLIC_MAX_DEGREE: usize = 3;
/// Largest `n` accepted by the symbolic oracle.
pub const SYMBOLIC_MAX_N: usize = 6;

/// Modular multiplication.
pub fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

/// Modular exponentiation.
pub fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn inv_mod(a: u64, p: u64) -> Option<u64> {
    (a % p != 0).then(|| pow_mod(a, p - 2, p))
}

/// Reduces a rational modulo `p`; fails when the denominator vanishes.
pub fn rational_mod(c: &BigRational, p: u64) -> Result<u64> {
    let pb = BigInt::from(p);
    let num = c.numer().mod_floor(&pb).to_u64().expect("reduced");
    let den = c.denom().mod_floor(&pb).to_u64().expect("reduced");
    let inv = inv_mod(den, p).ok_or_else(|| invalid("coefficient denominator divisible by the prime"))?;
    Ok(mul_mod(num, inv, p))
}

/// Determinant of a square matrix over `F_p` by Gaussian elimination.
pub fn det_mod(mut m: Vec<Vec<u64>>, p: u64) -> u64 {
    let k = m.len();
    let mut det = 1u64;
    for c in 0..k {
        let Some(piv) = (c..k).find(|&r| m[r][c] != 0) else {
            return 0;
        };
        if piv != c {
            m.swap(piv, c);
            det = (p - det) % p;
        }
        det = mul_mod(det, m[c][c], p);
        let inv = inv_mod(m[c][c], p).expect("nonzero pivot");
        for r in c + 1..k {
            if m[r][c] == 0 {
                continue;
            }
            let f = mul_mod(m[r][c], inv, p);
            for cc in c..k {
                let sub = mul_mod(f, m[c][cc], p);
                m[r][cc] = (m[r][cc] + p - sub) % p;
            }
        }
    }
    det
}

/// Rank of a matrix over `F_p`.
pub fn rank_mod(mut m: Vec<Vec<u64>>, p: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(piv, rank);
        let inv = inv_mod(m[rank][c], p).expect("nonzero pivot");
        for r in 0..rows {
            if r != rank && m[r][c] != 0 {
                let f = mul_mod(m[r][c], inv, p);
                for cc in c..cols {
                    let sub = mul_mod(f, m[rank][cc], p);
                    m[r][cc] = (m[r][cc] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Solves `A x = b` over `F_p` when `A` has full column rank; `None` when
/// the system is inconsistent or underdetermined.
pub fn solve_mod(a: &[Vec<u64>], b: &[u64], p: u64) -> Option<Vec<u64>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<u64>> = a.iter().zip(b).map(|(r, &v)| r.iter().copied().chain([v]).collect()).collect();
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| m[r][c] != 0) else {
            return None;
        };
        m.swap(piv, rank);
        let inv = inv_mod(m[rank][c], p).expect("nonzero pivot");
        for cc in c..=cols {
            m[rank][cc] = mul_mod(m[rank][cc], inv, p);
        }
        for r in 0..rows {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c];
                for cc in c..=cols {
                    let sub = mul_mod(f, m[rank][cc], p);
                    m[r][cc] = (m[r][cc] + p - sub) % p;
                }
            }
        }
        rank += 1;
    }
    if m[rank..].iter().any(|r| r[cols] != 0) {
        return None;
    }
    Some((0..cols).map(|i| m[i][cols]).collect())
}

/// A random `(n − 1) × n` matrix over `F_p`.
pub fn random_matrix(n: usize, rng: &mut impl Rng) -> Vec<Vec<u64>> {
    (0..n.saturating_sub(1))
        .map(|_| (0..n).map(|_| rng.gen_range(0..PRIME)).collect())
        .collect()
}

/// Caches maximal minors of the top rows of a fixed matrix.
pub struct MinorEvaluator<'a> {
    z: &'a [Vec<u64>],
    cache: HashMap<Column, u64>,
}

impl<'a> MinorEvaluator<'a> {
    /// Evaluator for the matrix `z` (rows `1..n−1`, columns `1..n`).
    pub fn new(z: &'a [Vec<u64>]) -> Self {
        MinorEvaluator { z, cache: HashMap::new() }
    }

    /// `π(X_I)`: the minor on rows `1..|I|` and columns `I`.
    pub fn minor(&mut self, col: &[u8]) -> u64 {
        if let Some(&v) = self.cache.get(col) {
            return v;
        }
        let k = col.len();
        let m: Vec<Vec<u64>> = (0..k)
            .map(|r| col.iter().map(|&c| self.z[r][c as usize - 1]).collect())
            .collect();
        let v = det_mod(m, PRIME);
        self.cache.insert(col.to_vec(), v);
        v
    }

    /// Value of a polynomial in increasing-column variables.
    pub fn eval(&mut self, p: &RelationPolynomial) -> Result<u64> {
        let mut acc = 0u64;
        for (mono, c) in p.terms() {
            let mut v = rational_mod(c, PRIME)?;
            for col in mono {
                v = mul_mod(v, self.minor(col), PRIME);
            }
            acc = (acc + v) % PRIME;
        }
        Ok(acc)
    }
}

/// Evaluates a relation at the matrix `z` over `F_p`.
pub fn plucker_eval(p: &RelationPolynomial, z: &[Vec<u64>]) -> Result<u64> {
    MinorEvaluator::new(z).eval(p)
}

/// Membership test strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OracleMode {
    /// Exact expansion in the matrix entries.
    Symbolic,
    /// Random evaluation over `F_p`.
    Probabilistic,
}

impl std::str::FromStr for OracleMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symbolic" => Ok(OracleMode::Symbolic),
            "probabilistic" => Ok(OracleMode::Probabilistic),
            _ => Err(invalid(format!("unknown oracle `{s}` (expected symbolic or probabilistic)"))),
        }
    }
}

/// Outcome of a membership test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipVerdict {
    /// Whether the polynomial lies in the ideal.
    pub member: bool,
    /// Strategy used.
    pub mode: OracleMode,
    /// Number of random evaluations (0 for symbolic).
    pub trials: usize,
    /// Upper bound on the probability that a non-member was accepted.
    #[serde(serialize_with = "serialize_rational")]
    pub failure_bound: BigRational,
}

fn serialize_rational<S: serde::Serializer>(c: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::poly::format_coeff(c))
}

fn split_by_deg(p: &RelationPolynomial, n: usize) -> BTreeMap<Vec<u32>, RelationPolynomial> {
    let mut parts: BTreeMap<Vec<u32>, RelationPolynomial> = BTreeMap::new();
    for (mono, c) in p.terms() {
        parts.entry(deg(mono, n)).or_default().add_term(mono.clone(), c.clone());
    }
    parts
}

fn check_relation(p: &RelationPolynomial, n: usize) -> Result<()> {
    for (mono, _) in p.terms() {
        for col in mono {
            if !crate::plucker::is_column(col, n) {
                return Err(invalid(format!("`{col:?}` is not an increasing column for n = {n}")));
            }
        }
    }
    Ok(())
}

/// Tests `p ∈ I_n`. Each multidegree component is tested separately.
pub fn ideal_membership(p: &RelationPolynomial, n: usize, mode: OracleMode, trials: usize, seed: u64) -> Result<MembershipVerdict> {
    check_relation(p, n)?;
    let parts = split_by_deg(p, n);
    match mode {
        OracleMode::Symbolic => {
            if p.degree() > SYMBOLIC_MAX_DEGREE || n > SYMBOLIC_MAX_N {
                return Err(Error::Capacity(format!(
                    "symbolic oracle supports degree ≤ {SYMBOLIC_MAX_DEGREE} and n ≤ {SYMBOLIC_MAX_N}"
                )));
            }
            let member = parts.values().all(|q| symbolic_expand(q).is_zero());
            Ok(MembershipVerdict {
                member,
                mode,
                trials: 0,
                failure_bound: BigRational::zero(),
            })
        }
        OracleMode::Probabilistic => {
            if trials == 0 {
                return Err(invalid("at least one trial is required"));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut member = true;
            for _ in 0..trials {
                let z = random_matrix(n, &mut rng);
                let mut ev = MinorEvaluator::new(&z);
                for q in parts.values() {
                    if ev.eval(q)? != 0 {
                        member = false;
                    }
                }
                if !member {
                    break;
                }
            }
            let d: usize = p
                .terms()
                .map(|(m, _)| m.iter().map(Vec::len).sum::<usize>())
                .max()
                .unwrap_or(0);
            let failure_bound = if member {
                let base = BigRational::new(BigInt::from(d), BigInt::from(PRIME));
                num_traits::pow(base, trials)
            } else {
                BigRational::zero()
            };
            Ok(MembershipVerdict {
                member,
                mode,
                trials,
                failure_bound,
            })
        }
    }
}

/// Variable `z_{row, col}` of the generic matrix (1-based).
type ZEntry = (u8, u8);

fn symbolic_minor(col: &[u8], cache: &mut HashMap<Column, Poly<ZEntry>>) -> Poly<ZEntry> {
    if let Some(p) = cache.get(col) {
        return p.clone();
    }
    let k = col.len();
    let mut out = Poly::zero();
    let mut perm: Vec<usize> = (0..k).collect();
    permute(&mut perm, 0, &mut |perm| {
        let sign = permutation_parity(perm);
        let mono: Vec<ZEntry> = (0..k).map(|r| (r as u8 + 1, col[perm[r]])).collect();
        out.add_term(mono, coeff(sign));
    });
    cache.insert(col.to_vec(), out.clone());
    out
}

fn permute(p: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize])) {
    if i == p.len() {
        f(p);
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permute(p, i + 1, f);
        p.swap(i, j);
    }
}

fn permutation_parity(p: &[usize]) -> i64 {
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

/// `π(p)` expanded exactly in the matrix entries.
pub fn symbolic_expand(p: &RelationPolynomial) -> Poly<ZEntry> {
    let mut cache = HashMap::new();
    let mut out = Poly::zero();
    for (mono, c) in p.terms() {
        let mut t = Poly::one();
        for col in mono {
            t = t.mul(&symbolic_minor(col, &mut cache));
        }
        out.add_scaled(&t, c);
    }
    out
}

/// All monomials with `λ_k` factors of length `k`, each factor an increasing
/// column of `[1, n]`.
pub fn monomials_of_degree(lambda: &[u32], n: usize) -> Vec<Vec<Column>> {
    let mut out: Vec<Vec<Column>> = vec![Vec::new()];
    for (k1, &count) in lambda.iter().enumerate() {
        let cols = columns_of_length(k1 + 1, n);
        let mut next = Vec::new();
        for prefix in &out {
            multisets(&cols, count as usize, 0, &mut Vec::new(), &mut |ms| {
                let mut m = prefix.clone();
                m.extend(ms.iter().cloned());
                next.push(m);
            });
        }
        out = next;
    }
    out
}

fn columns_of_length(k: usize, n: usize) -> Vec<Column> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (1..=n as u8).filter(|&x| m >> (x - 1) & 1 == 1).collect())
        .collect()
}

fn multisets(cols: &[Column], count: usize, from: usize, cur: &mut Vec<Column>, f: &mut impl FnMut(&[Column])) {
    if count == 0 {
        f(cur);
        return;
    }
    for i in from..cols.len() {
        cur.push(cols[i].clone());
        multisets(cols, count - 1, i, cur, f);
        cur.pop();
    }
}

/// True when the factors of a monomial of lattice elements form a chain.
pub fn is_standard(pl: &PluckerLattice, mono: &[usize]) -> bool {
    let p = pl.lattice().poset();
    mono.iter().all(|&a| mono.iter().all(|&b| p.comparable(a, b)))
}

/// Result of the standard-monomial basis check in one multidegree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisReport {
    /// Multidegree.
    pub lambda: Vec<u32>,
    /// Number of monomials of that multidegree.
    pub monomials: usize,
    /// Number of standard monomials.
    pub standard: usize,
    /// Rank of all monomials at random points, per seed.
    pub ranks: Vec<usize>,
    /// Rank of the standard monomials alone, per seed.
    pub standard_ranks: Vec<usize>,
    /// Whether the standard monomials form a basis of the component.
    pub ok: bool,
}

/// Checks that the standard monomials of multidegree `λ` (chains in the
/// lattice) are linearly independent and span the degree-`λ` component of
/// the coordinate ring, by evaluating at random points for three seeds.
pub fn standard_basis_check(pl: &PluckerLattice, lambda: &[u32], seed: u64) -> Result<BasisReport> {
    let n = pl.n();
    if lambda.len() != n - 1 {
        return Err(invalid(format!("multidegree needs {} entries", n - 1)));
    }
    let total: u32 = lambda.iter().sum();
    if total > 3 || n > 5 {
        return Err(Error::Capacity("basis check supports total degree ≤ 3 and n ≤ 5".into()));
    }
    let monos = monomials_of_degree(lambda, n);
    let as_elements: Vec<Vec<usize>> = monos
        .iter()
        .map(|m| m.iter().map(|c| pl.element_by_set(c).expect("column is an element")).collect())
        .collect();
    let standard: Vec<usize> = (0..monos.len()).filter(|&i| is_standard(pl, &as_elements[i])).collect();
    let points = monos.len() + 8;
    let mut ranks = Vec::new();
    let mut standard_ranks = Vec::new();
    for s in 0..3 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(s));
        let mut rows = Vec::with_capacity(points);
        for _ in 0..points {
            let z = random_matrix(n, &mut rng);
            let mut ev = MinorEvaluator::new(&z);
            rows.push(
                monos
                    .iter()
                    .map(|m| m.iter().fold(1u64, |acc, c| mul_mod(acc, ev.minor(c), PRIME)))
                    .collect::<Vec<u64>>(),
            );
        }
        let std_rows: Vec<Vec<u64>> = rows.iter().map(|r| standard.iter().map(|&i| r[i]).collect()).collect();
        ranks.push(rank_mod(rows, PRIME));
        standard_ranks.push(rank_mod(std_rows, PRIME));
    }
    let ok = ranks.iter().all(|&r| r == standard.len()) && standard_ranks.iter().all(|&r| r == standard.len());
    Ok(BasisReport {
        lambda: lambda.to_vec(),
        monomials: monos.len(),
        standard: standard.len(),
        ranks,
        standard_ranks,
        ok,
    })
}

/// Expansion of `X_a X_b` in the standard monomials of the same multidegree
/// and weight, solved by linear algebra over `F_p` at random points. Returns
/// the coefficient of each standard monomial (as sorted element pairs).
pub fn standard_expansion_mod_p(pl: &PluckerLattice, a: usize, b: usize, seed: u64) -> Result<BTreeMap<Vec<usize>, u64>> {
    let n = pl.n();
    let target = vec![pl.sorted_label(a), pl.sorted_label(b)];
    let lambda = deg(&target, n);
    let weight = crate::straighten::wt(&target, n);
    let candidates: Vec<Vec<usize>> = monomials_of_degree(&lambda, n)
        .into_iter()
        .filter(|m| crate::straighten::wt(m, n) == weight)
        .map(|m| {
            let mut e: Vec<usize> = m.iter().map(|c| pl.element_by_set(c).expect("element")).collect();
            e.sort_unstable();
            e
        })
        .filter(|m| is_standard(pl, m))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = candidates.len() + 8;
    let mut rows = Vec::with_capacity(points);
    let mut rhs = Vec::with_capacity(points);
    let value = |ev: &mut MinorEvaluator, e: usize| {
        let v = ev.minor(&pl.sorted_label(e));
        if pl.sign(e) < 0 {
            (PRIME - v) % PRIME
        } else {
            v
        }
    };
    for _ in 0..points {
        let z = random_matrix(n, &mut rng);
        let mut ev = MinorEvaluator::new(&z);
        rows.push(
            candidates
                .iter()
                .map(|m| mul_mod(value(&mut ev, m[0]), value(&mut ev, m[1]), PRIME))
                .collect::<Vec<u64>>(),
        );
        rhs.push(mul_mod(value(&mut ev, a), value(&mut ev, b), PRIME));
    }
    let x = solve_mod(&rows, &rhs, PRIME).ok_or_else(|| internal("standard monomials do not determine the product"))?;
    Ok(candidates.into_iter().zip(x).filter(|(_, v)| *v != 0).collect())
}

/// Membership of a lattice-variable polynomial.
pub fn lattice_membership(pl: &PluckerLattice, p: &LatticePolynomial, mode: OracleMode, trials: usize, seed: u64) -> Result<MembershipVerdict> {
    ideal_membership(&lattice_to_plucker(pl, p), pl.n(), mode, trials, seed)
}

/// Reduces every coefficient of a lattice polynomial modulo `p`.
pub fn coefficients_mod_p(p: &LatticePolynomial) -> Result<BTreeMap<Vec<usize>, u64>> {
    p.terms()
        .map(|(m, c)| Ok((m.clone(), rational_mod(c, PRIME)?)))
        .filter(|r| !matches!(r, Ok((_, 0))))
        .collect()
}

/// `2^{-bits}` as an exact rational.
pub fn two_pow_neg(bits: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::straighten::{plucker_term, shuffle_relation};

    #[test]
    fn prime_is_prime() {
        assert!(is_prime_u64(PRIME));
        assert!(!is_prime_u64(PRIME - 2));
        assert!(is_prime_u64(2));
        assert!(!is_prime_u64(1));
    }

    #[test]
    fn classical_relation_is_member_both_ways() {
        let r = shuffle_relation(&[1, 4], &[2, 3], 2, 4).unwrap();
        for mode in [OracleMode::Symbolic, OracleMode::Probabilistic] {
            assert!(ideal_membership(&r, 4, mode, 5, 1).unwrap().member);
        }
        let x = plucker_term(coeff(1), &[&[1, 2], &[3, 4]], 4).unwrap();
        for mode in [OracleMode::Symbolic, OracleMode::Probabilistic] {
            assert!(!ideal_membership(&x, 4, mode, 5, 1).unwrap().member);
        }
    }

    #[test]
    fn solve_small_system() {
        let a = vec![vec![1, 2], vec![3, 4], vec![5, 6]];
        let b = vec![5, 11, 17];
        assert_eq!(solve_mod(&a, &b, PRIME), Some(vec![1, 2]));
        assert_eq!(solve_mod(&a, &[5, 11, 18], PRIME), None);
    }
}
