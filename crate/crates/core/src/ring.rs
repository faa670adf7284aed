//! Exact rational coefficients and bihomogeneous polynomials in base
//! variables `x1..xm` and fiber variables `t1..td` of S = Q[x][t].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact rational coefficient. `num_rational` keeps the fraction reduced
/// with a positive denominator, which is exactly the stored invariant.
pub type Coeff = BigRational;

pub fn coeff(n: i64, d: i64) -> Coeff {
    BigRational::new(n.into(), d.into())
}

pub fn coeff_int(n: i64) -> Coeff {
    BigRational::from_integer(n.into())
}

/// Variable counts of the ambient ring S = Q[x1..xm, t1..td].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct RingSig {
    pub base_vars: usize,
    pub fiber_vars: usize,
}

impl RingSig {
    pub fn new(base_vars: usize, fiber_vars: usize) -> Self {
        RingSig { base_vars, fiber_vars }
    }

    pub fn total_vars(&self) -> usize {
        self.base_vars + self.fiber_vars
    }

    /// The coefficient ring A = Q[x1..xm], seen as a ring with no fiber variables.
    pub fn base_ring(&self) -> RingSig {
        RingSig { base_vars: self.base_vars, fiber_vars: 0 }
    }

    pub fn check(&self, other: &RingSig) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SignatureMismatch(
                self.base_vars,
                self.fiber_vars,
                other.base_vars,
                other.fiber_vars,
            ))
        }
    }
}

/// (x-degree, t-degree). Shifts may be negative in either component.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BiDegree {
    pub x: i64,
    pub t: i64,
}

impl BiDegree {
    pub fn new(x: i64, t: i64) -> Self {
        BiDegree { x, t }
    }
}

impl Add for BiDegree {
    type Output = BiDegree;
    fn add(self, rhs: BiDegree) -> BiDegree {
        BiDegree { x: self.x + rhs.x, t: self.t + rhs.t }
    }
}

impl Sub for BiDegree {
    type Output = BiDegree;
    fn sub(self, rhs: BiDegree) -> BiDegree {
        BiDegree { x: self.x - rhs.x, t: self.t - rhs.t }
    }
}

impl Neg for BiDegree {
    type Output = BiDegree;
    fn neg(self) -> BiDegree {
        BiDegree { x: -self.x, t: -self.t }
    }
}

impl fmt::Display for BiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.t)
    }
}

/// A monomial x^a t^b. Negative t-exponents are only produced inside Cech
/// localizations; x-exponents are always non-negative.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Monomial {
    pub x: Vec<i32>,
    pub t: Vec<i32>,
}

impl Monomial {
    pub fn one(sig: RingSig) -> Self {
        Monomial { x: vec![0; sig.base_vars], t: vec![0; sig.fiber_vars] }
    }

    pub fn x_var(sig: RingSig, i: usize) -> Self {
        let mut m = Monomial::one(sig);
        m.x[i] = 1;
        m
    }

    pub fn t_var(sig: RingSig, i: usize) -> Self {
        let mut m = Monomial::one(sig);
        m.t[i] = 1;
        m
    }

    pub fn x_degree(&self) -> i64 {
        self.x.iter().map(|&e| e as i64).sum()
    }

    pub fn t_degree(&self) -> i64 {
        self.t.iter().map(|&e| e as i64).sum()
    }

    pub fn bidegree(&self) -> BiDegree {
        BiDegree { x: self.x_degree(), t: self.t_degree() }
    }

    /// True when every t-exponent is non-negative, i.e. the monomial lies in
    /// S itself rather than a localization.
    pub fn is_polynomial(&self) -> bool {
        self.t.iter().all(|&e| e >= 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect(),
            t: self.t.iter().zip(&other.t).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.x.iter().zip(&other.x).all(|(a, b)| a <= b)
            && self.t.iter().zip(&other.t).all(|(a, b)| a <= b)
    }

    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if other.divides(self) {
            Some(Monomial {
                x: self.x.iter().zip(&other.x).map(|(a, b)| a - b).collect(),
                t: self.t.iter().zip(&other.t).map(|(a, b)| a - b).collect(),
            })
        } else {
            None
        }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        Monomial {
            x: self.x.iter().zip(&other.x).map(|(a, b)| *a.max(b)).collect(),
            t: self.t.iter().zip(&other.t).map(|(a, b)| *a.max(b)).collect(),
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &e) in self.x.iter().enumerate() {
            if e == 1 {
                parts.push(format!("x{}", i + 1));
            } else if e != 0 {
                parts.push(format!("x{}^{}", i + 1, e));
            }
        }
        for (i, &e) in self.t.iter().enumerate() {
            if e == 1 {
                parts.push(format!("t{}", i + 1));
            } else if e != 0 {
                parts.push(format!("t{}^{}", i + 1, e));
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

/// Sparse polynomial: map from monomials to nonzero rational coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    sig: RingSig,
    terms: BTreeMap<Monomial, Coeff>,
}

impl Polynomial {
    pub fn zero(sig: RingSig) -> Self {
        Polynomial { sig, terms: BTreeMap::new() }
    }

    pub fn constant(sig: RingSig, c: Coeff) -> Self {
        let mut p = Polynomial::zero(sig);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(sig), c);
        }
        p
    }

    pub fn one(sig: RingSig) -> Self {
        Polynomial::constant(sig, Coeff::one())
    }

    pub fn monomial(sig: RingSig, m: Monomial, c: Coeff) -> Self {
        debug_assert_eq!(m.x.len(), sig.base_vars);
        debug_assert_eq!(m.t.len(), sig.fiber_vars);
        let mut p = Polynomial::zero(sig);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn x_var(sig: RingSig, i: usize) -> Self {
        Polynomial::monomial(sig, Monomial::x_var(sig, i), Coeff::one())
    }

    pub fn t_var(sig: RingSig, i: usize) -> Self {
        Polynomial::monomial(sig, Monomial::t_var(sig, i), Coeff::one())
    }

    pub fn sig(&self) -> RingSig {
        self.sig
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().clone() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.sig.check(&other.sig)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.sig.check(&other.sig)?;
        let mut out = Polynomial::zero(self.sig);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.clone() * c2.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.sig);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c.clone();
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Coeff) -> Polynomial {
        let mut out = Polynomial::zero(self.sig);
        if c.is_zero() {
            return out;
        }
        for (mm, cc) in &self.terms {
            out.terms.insert(mm.mul(m), cc.clone() * c.clone());
        }
        out
    }

    /// Substitute t_i -> -t_i: every monomial picks up (-1)^(t-degree).
    pub fn reverse_fibers(&self) -> Polynomial {
        let mut out = Polynomial::zero(self.sig);
        for (m, c) in &self.terms {
            let sign = if m.t_degree().rem_euclid(2) == 0 { c.clone() } else { -c.clone() };
            out.terms.insert(m.clone(), sign);
        }
        out
    }

    /// The common bidegree of all monomials, if there is one. Zero
    /// polynomials are bihomogeneous of every degree and return `None`.
    pub fn bidegree(&self) -> Option<BiDegree> {
        let mut iter = self.terms.keys();
        let first = iter.next()?;
        let deg = first.bidegree();
        for m in iter {
            if m.bidegree() != deg {
                return None;
            }
        }
        Some(deg)
    }

    pub fn is_bihomogeneous(&self) -> bool {
        self.is_zero() || self.bidegree().is_some()
    }

    /// Check bihomogeneity, reporting the first offending pair of monomials.
    pub fn require_bihomogeneous(&self) -> Result<()> {
        let mut iter = self.terms.keys();
        let first = match iter.next() {
            None => return Ok(()),
            Some(m) => m,
        };
        let deg = first.bidegree();
        for m in iter {
            let other = m.bidegree();
            if other != deg {
                return Err(Error::NotBihomogeneous {
                    first: first.to_string(),
                    fx: deg.x,
                    ft: deg.t,
                    second: m.to_string(),
                    sx: other.x,
                    st: other.t,
                });
            }
        }
        Ok(())
    }

    /// Largest x-degree (resp. t-degree) over the support; 0 for the zero polynomial.
    pub fn max_x_degree(&self) -> i64 {
        self.terms.keys().map(|m| m.x_degree()).max().unwrap_or(0)
    }

    pub fn max_t_degree(&self) -> i64 {
        self.terms.keys().map(|m| m.t_degree()).max().unwrap_or(0)
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("signature mismatch in +")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(&rhs.neg()).expect("signature mismatch in -")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("signature mismatch in *")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = -v.clone();
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // Highest monomial first reads like hand-written input.
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let is_const = m.bidegree() == BiDegree::new(0, 0);
            if abs.is_one() && !is_const {
                write!(f, "{}", m)?;
            } else if is_const {
                write!(f, "{}", abs)?;
            } else {
                write!(f, "{}*{}", abs, m)?;
            }
        }
        Ok(())
    }
}

/// All monomials of the given bidegree with non-negative exponents, in a
/// fixed deterministic order. Empty when either component is unreachable.
pub fn monomials_of_bidegree(sig: RingSig, deg: BiDegree) -> Vec<Monomial> {
    let xs = compositions(deg.x, sig.base_vars);
    let ts = compositions(deg.t, sig.fiber_vars);
    let mut out = Vec::with_capacity(xs.len() * ts.len());
    for x in &xs {
        for t in &ts {
            out.push(Monomial { x: x.clone(), t: t.clone() });
        }
    }
    out
}

/// Vectors of `parts` non-negative integers summing to `total`, in
/// lexicographic order. For zero parts the only composition of 0 is `[]`.
pub fn compositions(total: i64, parts: usize) -> Vec<Vec<i32>> {
    if total < 0 {
        return Vec::new();
    }
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut current = vec![0i32; parts];
    fn rec(out: &mut Vec<Vec<i32>>, current: &mut Vec<i32>, idx: usize, remaining: i64) {
        if idx + 1 == current.len() {
            current[idx] = remaining as i32;
            out.push(current.clone());
            return;
        }
        for v in 0..=remaining {
            current[idx] = v as i32;
            rec(out, current, idx + 1, remaining - v);
        }
    }
    rec(&mut out, &mut current, 0, total);
    out
}

pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || k > n || n < 0 {
        return 0;
    }
    let k = k.min(n - k);
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for i in 0..k {
        num *= (n - i) as i128;
        den *= (i + 1) as i128;
    }
    (num / den) as i64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> RingSig {
        RingSig::new(1, 2)
    }

    #[test]
    fn product_of_conjugates() {
        let s = RingSig::new(0, 2);
        let t1 = Polynomial::t_var(s, 0);
        let t2 = Polynomial::t_var(s, 1);
        let lhs = &(&t1 + &t2) * &(&t1 - &t2);
        let rhs = &(&t1 * &t1) - &(&t2 * &t2);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn additive_identity() {
        let s = sig();
        let p = &Polynomial::x_var(s, 0) * &Polynomial::t_var(s, 0);
        let q = p.checked_add(&Polynomial::zero(s)).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn rational_coefficient_product() {
        let s = RingSig::new(0, 1);
        let half_t = Polynomial::t_var(s, 0).scale(&coeff(1, 2));
        let two_thirds_t = Polynomial::t_var(s, 0).scale(&coeff(2, 3));
        let prod = &half_t * &two_thirds_t;
        let mut expected = Polynomial::zero(s);
        expected.add_term(Monomial { x: vec![], t: vec![2] }, coeff(1, 3));
        assert_eq!(prod, expected);
    }

    #[test]
    fn signature_mismatch_reported() {
        let p = Polynomial::one(RingSig::new(1, 1));
        let q = Polynomial::one(RingSig::new(2, 1));
        assert!(p.checked_add(&q).is_err());
        assert!(p.checked_mul(&q).is_err());
    }

    #[test]
    fn bihomogeneity_under_mul() {
        let s = sig();
        let p = &Polynomial::x_var(s, 0) * &Polynomial::t_var(s, 0);
        let q = Polynomial::t_var(s, 1);
        let prod = &p * &q;
        assert_eq!(prod.bidegree(), Some(BiDegree::new(1, 2)));
    }

    #[test]
    fn inhomogeneous_pair_reported() {
        let s = sig();
        let p = &Polynomial::x_var(s, 0) + &Polynomial::t_var(s, 0);
        let err = p.require_bihomogeneous().unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("x1") && msg.contains("t1"), "{msg}");
    }

    #[test]
    fn monomial_enumeration_counts() {
        // dim S_(a,b) = C(a+m-1, m-1) * C(b+d-1, d-1)
        let s = RingSig::new(2, 3);
        for a in 0..4i64 {
            for b in 0..4i64 {
                let n = monomials_of_bidegree(s, BiDegree::new(a, b)).len() as i64;
                assert_eq!(n, binomial(a + 1, 1) * binomial(b + 2, 2));
            }
        }
        assert!(monomials_of_bidegree(s, BiDegree::new(-1, 0)).is_empty());
        // m = 0 admits only x-degree 0
        let s0 = RingSig::new(0, 1);
        assert_eq!(monomials_of_bidegree(s0, BiDegree::new(0, 2)).len(), 1);
        assert!(monomials_of_bidegree(s0, BiDegree::new(1, 2)).is_empty());
    }

    #[test]
    fn reverse_fibers_is_involution() {
        let s = sig();
        let p = &(&Polynomial::t_var(s, 0) + &Polynomial::t_var(s, 1))
            * &(&Polynomial::x_var(s, 0) * &Polynomial::t_var(s, 0));
        assert_eq!(p.reverse_fibers().reverse_fibers(), p);
    }

    #[test]
    fn display_roundtrip_shape() {
        let s = sig();
        let p = &(&Polynomial::x_var(s, 0) * &Polynomial::t_var(s, 0)).scale(&coeff(-3, 2))
            + &Polynomial::t_var(s, 1);
        assert_eq!(p.to_string(), "-3/2*x1*t1 + t2");
    }
}
