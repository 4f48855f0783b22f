//! Multivariate polynomial representatives of elements of `O[[T_1,...,T_l]]`.
//!
//! Polynomials are exact (no truncation); coefficients live in a ring
//! context passed to every operation. Terms are kept in a `BTreeMap`
//! keyed by exponent vectors, so iteration order is the lexicographic
//! monomial order with `T_1` most significant.

use std::collections::BTreeMap;

use crate::padic::{FqElt, LocalRingSpec, RingElt};
use crate::{Error, Result};

/// Coefficient-ring context for polynomial arithmetic.
pub trait CoeffRing {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn c_zero(&self) -> Self::Elem;
    fn c_one(&self) -> Self::Elem;
    fn c_is_zero(&self, a: &Self::Elem) -> bool;
    fn c_add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn c_sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn c_neg(&self, a: &Self::Elem) -> Self::Elem;
    fn c_mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn c_is_unit(&self, a: &Self::Elem) -> bool;
    fn c_inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
}

impl CoeffRing for LocalRingSpec {
    type Elem = RingElt;

    fn c_zero(&self) -> RingElt {
        self.zero()
    }
    fn c_one(&self) -> RingElt {
        self.one()
    }
    fn c_is_zero(&self, a: &RingElt) -> bool {
        self.is_zero(a)
    }
    fn c_add(&self, a: &RingElt, b: &RingElt) -> RingElt {
        self.add(a, b)
    }
    fn c_sub(&self, a: &RingElt, b: &RingElt) -> RingElt {
        self.sub(a, b)
    }
    fn c_neg(&self, a: &RingElt) -> RingElt {
        self.neg(a)
    }
    fn c_mul(&self, a: &RingElt, b: &RingElt) -> RingElt {
        self.mul(a, b)
    }
    fn c_is_unit(&self, a: &RingElt) -> bool {
        self.v_pi(a) == crate::padic::PiValuation::Finite(0)
    }
    fn c_inv(&self, a: &RingElt) -> Result<RingElt> {
        self.inv_unit(a)
    }
}

/// The residue field `F_q = O/(pi)` as a coefficient context.
#[derive(Debug, Clone)]
pub struct ResidueField {
    pub spec: LocalRingSpec,
}

impl LocalRingSpec {
    pub fn residue_field(&self) -> ResidueField {
        ResidueField { spec: self.clone() }
    }
}

impl CoeffRing for ResidueField {
    type Elem = FqElt;

    fn c_zero(&self) -> FqElt {
        self.spec.fq_zero()
    }
    fn c_one(&self) -> FqElt {
        self.spec.fq_one()
    }
    fn c_is_zero(&self, a: &FqElt) -> bool {
        self.spec.fq_is_zero(a)
    }
    fn c_add(&self, a: &FqElt, b: &FqElt) -> FqElt {
        self.spec.fq_add(a, b)
    }
    fn c_sub(&self, a: &FqElt, b: &FqElt) -> FqElt {
        self.spec.fq_sub(a, b)
    }
    fn c_neg(&self, a: &FqElt) -> FqElt {
        self.spec.fq_neg(a)
    }
    fn c_mul(&self, a: &FqElt, b: &FqElt) -> FqElt {
        self.spec.fq_mul(a, b)
    }
    fn c_is_unit(&self, a: &FqElt) -> bool {
        !self.spec.fq_is_zero(a)
    }
    fn c_inv(&self, a: &FqElt) -> Result<FqElt> {
        self.spec.fq_inv(a)
    }
}

/// Exponent vector of a monomial.
pub type Monomial = Vec<u32>;

/// A polynomial in `l` variables with coefficients in `R`.
pub struct MPoly<R: CoeffRing> {
    pub vars: usize,
    pub terms: BTreeMap<Monomial, R::Elem>,
}

impl<R: CoeffRing> Clone for MPoly<R> {
    fn clone(&self) -> Self {
        MPoly {
            vars: self.vars,
            terms: self.terms.clone(),
        }
    }
}

impl<R: CoeffRing> PartialEq for MPoly<R> {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.terms == other.terms
    }
}

impl<R: CoeffRing> std::fmt::Debug for MPoly<R> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MPoly")
            .field("vars", &self.vars)
            .field("terms", &self.terms)
            .finish()
    }
}

/// Polynomial over the local ring `O` (an element of `O[[T_1..T_l]]`).
pub type AlgebraElt = MPoly<LocalRingSpec>;

/// Polynomial over the residue field `F_q`.
pub type FqPoly = MPoly<ResidueField>;

impl<R: CoeffRing> MPoly<R> {
    pub fn zero(vars: usize) -> Self {
        MPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(ring: &R, c: R::Elem, vars: usize) -> Self {
        let mut z = Self::zero(vars);
        z.insert_add(ring, vec![0; vars], c);
        z
    }

    pub fn one(ring: &R, vars: usize) -> Self {
        Self::constant(ring, ring.c_one(), vars)
    }

    /// The variable `T_i` (1-based, matching the algebra notation).
    pub fn var(ring: &R, i: usize, vars: usize) -> Self {
        assert!(i >= 1 && i <= vars, "variable index out of range");
        let mut expv = vec![0u32; vars];
        expv[i - 1] = 1;
        let mut z = Self::zero(vars);
        z.insert_add(ring, expv, ring.c_one());
        z
    }

    pub fn monomial(ring: &R, expv: Monomial, c: R::Elem, vars: usize) -> Self {
        assert_eq!(expv.len(), vars);
        let mut z = Self::zero(vars);
        z.insert_add(ring, expv, c);
        z
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn insert_add(&mut self, ring: &R, expv: Monomial, c: R::Elem) {
        if ring.c_is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&expv) {
            Some(cur) => {
                let s = ring.c_add(cur, &c);
                if ring.c_is_zero(&s) {
                    self.terms.remove(&expv);
                } else {
                    *cur = s;
                }
            }
            None => {
                self.terms.insert(expv, c);
            }
        }
    }

    pub fn add(&self, ring: &R, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(ring, m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, ring: &R, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_add(ring, m.clone(), ring.c_neg(c));
        }
        out
    }

    pub fn neg(&self, ring: &R) -> Self {
        let mut out = Self::zero(self.vars);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), ring.c_neg(c));
        }
        out
    }

    pub fn mul(&self, ring: &R, other: &Self) -> Self {
        let mut out = Self::zero(self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let prod = ring.c_mul(c1, c2);
                if ring.c_is_zero(&prod) {
                    continue;
                }
                let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.insert_add(ring, m, prod);
            }
        }
        out
    }

    pub fn mul_coeff(&self, ring: &R, c: &R::Elem) -> Self {
        let mut out = Self::zero(self.vars);
        for (m, cc) in &self.terms {
            out.insert_add(ring, m.clone(), ring.c_mul(cc, c));
        }
        out
    }

    pub fn pow(&self, ring: &R, mut exp: u64) -> Self {
        let mut acc = Self::one(ring, self.vars);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(ring, &base);
            }
            base = base.mul(ring, &base);
            exp >>= 1;
        }
        acc
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m[i - 1]).max().unwrap_or(0)
    }

    pub fn constant_term(&self, ring: &R) -> R::Elem {
        self.terms
            .get(&vec![0; self.vars])
            .cloned()
            .unwrap_or_else(|| ring.c_zero())
    }

    /// Leading term in the lexicographic order (`T_1` most significant).
    pub fn leading(&self) -> Option<(&Monomial, &R::Elem)> {
        self.terms.iter().next_back()
    }

    /// Exact division by `g`, in the polynomial ring. `None` when no
    /// polynomial quotient exists. The leading coefficient of `g` must be
    /// a unit.
    pub fn exact_div(&self, ring: &R, g: &Self) -> Option<Self> {
        let (gm, gc) = g.leading()?;
        assert!(ring.c_is_unit(gc), "divisor leading coefficient not a unit");
        let gc_inv = ring.c_inv(gc).expect("unit leading coefficient");
        let gm = gm.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.vars);
        while let Some((rm, rc)) = rem.leading() {
            let rm = rm.clone();
            let rc = rc.clone();
            if !gm.iter().zip(&rm).all(|(a, b)| a <= b) {
                return None;
            }
            let qm: Monomial = rm.iter().zip(&gm).map(|(a, b)| a - b).collect();
            let qc = ring.c_mul(&rc, &gc_inv);
            // rem -= qc * T^qm * g
            for (m2, c2) in &g.terms {
                let mm: Monomial = qm.iter().zip(m2).map(|(a, b)| a + b).collect();
                let prod = ring.c_mul(&qc, c2);
                rem.insert_add(ring, mm, ring.c_neg(&prod));
            }
            quot.insert_add(ring, qm, qc);
        }
        Some(quot)
    }

    /// Divisibility by the single variable `T_i`, and the exact quotient.
    pub fn div_var(&self, i: usize) -> Option<Self> {
        if self.terms.keys().any(|m| m[i - 1] == 0) {
            return None;
        }
        let mut out = Self::zero(self.vars);
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            m2[i - 1] -= 1;
            out.terms.insert(m2, c.clone());
        }
        Some(out)
    }

    /// `(1 + T_i)^exp`, expanded exactly.
    pub fn one_plus_var_pow(ring: &R, i: usize, exp: u64, vars: usize) -> Self {
        let base = Self::one(ring, vars).add(ring, &Self::var(ring, i, vars));
        base.pow(ring, exp)
    }

    pub fn map_coeffs<S: CoeffRing>(
        &self,
        target: &S,
        mut f: impl FnMut(&R::Elem) -> S::Elem,
    ) -> MPoly<S> {
        let mut out = MPoly::zero(self.vars);
        for (m, c) in &self.terms {
            out.insert_add(target, m.clone(), f(c));
        }
        out
    }
}

impl AlgebraElt {
    /// Parse-free constructor for tests and configs: terms as
    /// (exponent vector, integer coefficient).
    pub fn from_int_terms(ring: &LocalRingSpec, vars: usize, terms: &[(Vec<u32>, i64)]) -> Self {
        let mut out = Self::zero(vars);
        for (m, c) in terms {
            out.insert_add(ring, m.clone(), ring.from_i64(*c));
        }
        out
    }

    /// Substitute `T_i = value` for every variable (total evaluation).
    pub fn eval_all(&self, ring: &LocalRingSpec, values: &[RingElt]) -> RingElt {
        assert_eq!(values.len(), self.vars);
        let mut acc = ring.zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &exp) in m.iter().enumerate() {
                if exp > 0 {
                    term = ring.mul(&term, &ring.pow(&values[i], exp as u64));
                }
            }
            acc = ring.add(&acc, &term);
        }
        acc
    }
}

/// Degree-cap guard shared by the coordinate-change operations.
pub fn check_degree_cap<R: CoeffRing>(h: &MPoly<R>, cap: u32) -> Result<()> {
    let d = h.total_degree();
    if d > cap {
        return Err(Error::DegreeCap(format!(
            "total degree {d} exceeds the cap {cap}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::make_ring;

    #[test]
    fn arithmetic_basics() {
        let r = make_ring(3, 1, 1, 8).unwrap();
        let t1 = AlgebraElt::var(&r, 1, 2);
        let t2 = AlgebraElt::var(&r, 2, 2);
        let s = t1.add(&r, &t2);
        let prod = s.mul(&r, &s);
        // (T1 + T2)^2 = T1^2 + 2 T1 T2 + T2^2
        assert_eq!(prod.terms.len(), 3);
        assert_eq!(prod.terms[&vec![1, 1]], r.from_u64(2));
        assert!(s.sub(&r, &s).is_zero());
    }

    #[test]
    fn lex_leading_term() {
        let r = make_ring(3, 1, 1, 8).unwrap();
        let h = AlgebraElt::from_int_terms(&r, 2, &[(vec![1, 0], 1), (vec![0, 5], 1)]);
        assert_eq!(h.leading().unwrap().0, &vec![1, 0]);
    }

    #[test]
    fn exact_division() {
        let r = make_ring(2, 1, 1, 8).unwrap();
        let t1 = AlgebraElt::var(&r, 1, 2);
        let g = t1.add(&r, &AlgebraElt::constant(&r, r.from_u64(2), 2));
        let h = g.mul(&r, &g);
        let q = h.exact_div(&r, &g).unwrap();
        assert_eq!(q, g);
        // T2 + 2 is not divisible by T1 + 2
        let other = AlgebraElt::var(&r, 2, 2).add(&r, &AlgebraElt::constant(&r, r.from_u64(2), 2));
        assert!(other.exact_div(&r, &g).is_none());
    }

    #[test]
    fn var_division() {
        let r = make_ring(3, 1, 1, 8).unwrap();
        let h = AlgebraElt::from_int_terms(&r, 2, &[(vec![2, 1], 1), (vec![1, 0], 3)]);
        let q = h.div_var(1).unwrap();
        assert_eq!(q.terms[&vec![1, 1]], r.one());
        assert!(h.div_var(2).is_none());
    }
}
