//! Sparse polynomials with exact rational coefficients in commuting variables.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact coefficient type.
pub type Coeff = BigRational;

/// Integer coefficient.
pub fn coeff(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

/// Renders a coefficient as `p` or `p/q`.
pub fn format_coeff(c: &Coeff) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Parses `p` or `p/q`.
pub fn parse_coeff(s: &str) -> Option<Coeff> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(BigRational::new(p.trim().parse().ok()?, q))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// A polynomial: sorted monomials (multisets of variables) mapped to nonzero
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly<V: Ord + Clone> {
    terms: BTreeMap<Vec<V>, Coeff>,
}

impl<V: Ord + Clone> Default for Poly<V> {
    fn default() -> Self {
        Poly { terms: BTreeMap::new() }
    }
}

impl<V: Ord + Clone> Poly<V> {
    /// The zero polynomial.
    pub fn zero() -> Self {
        Self::default()
    }

    /// A single term; the monomial is sorted.
    pub fn term(mut mono: Vec<V>, c: Coeff) -> Self {
        mono.sort();
        let mut p = Self::zero();
        p.add_term(mono, c);
        p
    }

    /// The constant 1.
    pub fn one() -> Self {
        Self::term(Vec::new(), Coeff::one())
    }

    /// Adds `c · mono` (the monomial is sorted first).
    pub fn add_term(&mut self, mut mono: Vec<V>, c: Coeff) {
        if c.is_zero() {
            return;
        }
        mono.sort();
        let e = self.terms.entry(mono.clone()).or_insert_with(Coeff::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&mono);
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &Poly<V>, c: &Coeff) {
        if c.is_zero() {
            return;
        }
        for (m, v) in &other.terms {
            let e = self.terms.entry(m.clone()).or_insert_with(Coeff::zero);
            *e += v * c;
            if e.is_zero() {
                self.terms.remove(m);
            }
        }
    }

    /// `c · self`.
    pub fn scaled(&self, c: &Coeff) -> Poly<V> {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Product.
    pub fn mul(&self, other: &Poly<V>) -> Poly<V> {
        let mut out: BTreeMap<Vec<V>, Coeff> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut m: Vec<V> = m1.iter().chain(m2).cloned().collect();
                m.sort();
                *out.entry(m).or_insert_with(Coeff::zero) += c1 * c2;
            }
        }
        out.retain(|_, v| !v.is_zero());
        Poly { terms: out }
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// True when there are no terms.
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<V>, &Coeff)> {
        self.terms.iter()
    }

    /// Coefficient of a (sorted) monomial.
    pub fn coeff_of(&self, mono: &[V]) -> Coeff {
        let mut m = mono.to_vec();
        m.sort();
        self.terms.get(&m).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Largest monomial degree.
    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Applies `f` to every variable, dropping a term when `f` returns `None`
    /// and multiplying it by the returned sign otherwise.
    pub fn map_vars<W: Ord + Clone>(&self, mut f: impl FnMut(&V) -> Option<(i8, W)>) -> Poly<W> {
        let mut out = Poly::zero();
        'terms: for (m, c) in &self.terms {
            let mut sign = 1i64;
            let mut w = Vec::with_capacity(m.len());
            for v in m {
                match f(v) {
                    Some((s, x)) => {
                        sign *= s as i64;
                        w.push(x);
                    }
                    None => continue 'terms,
                }
            }
            if sign != 0 {
                out.add_term(w, c * coeff(sign));
            }
        }
        out
    }
}

impl<V: Ord + Clone> std::ops::Sub for &Poly<V> {
    type Output = Poly<V>;

    fn sub(self, rhs: &Poly<V>) -> Poly<V> {
        let mut out = self.clone();
        out.add_scaled(rhs, &coeff(-1));
        out
    }
}

impl<V: Ord + Clone> std::ops::Add for &Poly<V> {
    type Output = Poly<V>;

    fn add(self, rhs: &Poly<V>) -> Poly<V> {
        let mut out = self.clone();
        out.add_scaled(rhs, &Coeff::one());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let x = Poly::term(vec!['x'], coeff(1));
        let y = Poly::term(vec!['y'], coeff(1));
        let s = &x + &y;
        let d = &x - &y;
        let p = s.mul(&d);
        assert_eq!(p.len(), 2);
        assert_eq!(p.coeff_of(&['x', 'x']), coeff(1));
        assert_eq!(p.coeff_of(&['y', 'y']), coeff(-1));
        assert!((&p - &p).is_zero());
        assert_eq!(p.degree(), 2);
    }

    #[test]
    fn coefficient_strings() {
        assert_eq!(format_coeff(&coeff(-3)), "-3");
        let h = parse_coeff("2/4").unwrap();
        assert_eq!(format_coeff(&h), "1/2");
        assert!(parse_coeff("1/0").is_none());
        assert!(parse_coeff("x").is_none());
    }
}
