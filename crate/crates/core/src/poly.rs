//! Polynomials over a finite field: exact arithmetic, deterministic
//! factorization, dual polynomials and the Φ-classification of monic
//! polynomials with nonzero constant term.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Fel, Field};

/// A polynomial with little-endian coefficient vector and no trailing zeros;
/// the zero polynomial has an empty vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Fel>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match i {
                0 => format!("{c}"),
                1 if c == 1 => "t".into(),
                1 => format!("{c}t"),
                _ if c == 1 => format!("t^{i}"),
                _ => format!("{c}t^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Poly {
    pub fn new(field: &Field, mut coeffs: Vec<Fel>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> Poly {
        Poly::new(field, vec![])
    }

    pub fn one(field: &Field) -> Poly {
        Poly::new(field, vec![1])
    }

    pub fn constant(field: &Field, c: Fel) -> Poly {
        Poly::new(field, vec![c])
    }

    /// The monomial `t`.
    pub fn t(field: &Field) -> Poly {
        Poly::new(field, vec![0, 1])
    }

    /// The linear polynomial `t - λ`.
    pub fn t_minus(field: &Field, lambda: Fel) -> Poly {
        Poly::new(field, vec![field.neg(lambda), 1])
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Fel] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Fel {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial has degree `usize::MAX` sentinel avoided —
    /// callers must check `is_zero` first.
    pub fn degree(&self) -> usize {
        assert!(!self.is_zero(), "degree of the zero polynomial");
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Fel {
        *self.coeffs.last().expect("leading coeff of zero polynomial")
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.leading() == 1
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.field.add(self.coeff(i), other.coeff(i)));
        }
        Poly::new(&self.field, out)
    }

    pub fn neg(&self) -> Poly {
        Poly::new(
            &self.field,
            self.coeffs.iter().map(|&c| self.field.neg(c)).collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = self.field.add(out[i + j], self.field.mul(a, b));
            }
        }
        Poly::new(&self.field, out)
    }

    pub fn scale(&self, c: Fel) -> Poly {
        Poly::new(
            &self.field,
            self.coeffs.iter().map(|&a| self.field.mul(a, c)).collect(),
        )
    }

    /// Quotient and remainder; panics if `other` is zero.
    pub fn divrem(&self, other: &Poly) -> (Poly, Poly) {
        assert!(!other.is_zero(), "division by zero polynomial");
        let f = &self.field;
        let dlead = f.inv(other.leading()).expect("nonzero leading coeff");
        let db = other.degree();
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return (Poly::zero(f), self.clone());
        }
        let mut quot = vec![0; rem.len() - db];
        for i in (db..rem.len()).rev() {
            let c = f.mul(rem[i], dlead);
            if c == 0 {
                continue;
            }
            quot[i - db] = c;
            for (j, &bc) in other.coeffs.iter().enumerate() {
                let idx = i - db + j;
                rem[idx] = f.sub(rem[idx], f.mul(c, bc));
            }
        }
        (Poly::new(f, quot), Poly::new(f, rem))
    }

    pub fn rem(&self, other: &Poly) -> Poly {
        self.divrem(other).1
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.leading()).unwrap())
    }

    pub fn eval(&self, x: Fel) -> Fel {
        let mut acc = 0;
        for &c in self.coeffs.iter().rev() {
            acc = self.field.add(self.field.mul(acc, x), c);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero(&self.field);
        }
        let f = &self.field;
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, &c) in self.coeffs.iter().enumerate().skip(1) {
            let mut m = 0;
            for _ in 0..(i as u64 % f.p()) {
                m = f.add(m, 1);
            }
            out.push(f.mul(c, m));
        }
        Poly::new(f, out)
    }

    pub fn pow(&self, mut e: usize) -> Poly {
        let mut acc = Poly::one(&self.field);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    /// Apply bar to every coefficient.
    pub fn bar(&self) -> Poly {
        Poly::new(
            &self.field,
            self.coeffs.iter().map(|&c| self.field.bar(c)).collect(),
        )
    }

    /// Graded-lexicographic order: by degree, then by the coefficient vector.
    pub fn grlex_cmp(&self, other: &Poly) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }

    /// Is this polynomial irreducible? (Deterministic trial division.)
    pub fn is_irreducible(&self) -> bool {
        if self.is_zero() || self.degree() == 0 {
            return false;
        }
        let d = self.degree();
        if d == 1 {
            return true;
        }
        for cand in monic_polys(&self.field, 1, d / 2) {
            if cand.divides(self) {
                return false;
            }
        }
        true
    }

    /// Deterministic complete factorization into monic irreducibles with
    /// multiplicities, sorted graded-lexicographically.
    pub fn factorize(&self) -> Vec<(Poly, usize)> {
        assert!(!self.is_zero(), "factorization of zero polynomial");
        let f = &self.field;
        let mut out: Vec<(Poly, usize)> = vec![];
        let mut rest = self.monic();
        // Peel off powers of t.
        let mut t_mult = 0;
        while !rest.is_zero() && rest.coeff(0) == 0 {
            rest = rest.divrem(&Poly::t(f)).0;
            t_mult += 1;
        }
        if t_mult > 0 {
            out.push((Poly::t(f), t_mult));
        }
        if rest.degree() > 0 {
            factor_rec(&rest, 1, &mut out);
        }
        out.sort_by(|a, b| a.0.grlex_cmp(&b.0));
        out
    }

    /// The dual polynomial `f*(t) = bar(a₀)⁻¹ · t^d · bar(f)(t⁻¹)`: the monic
    /// polynomial whose roots are the inverse-conjugates of the roots of `f`.
    pub fn dual(&self) -> Result<Poly> {
        if !self.is_monic() {
            return Err(Error::Unsupported("dual of a non-monic polynomial".into()));
        }
        if self.coeff(0) == 0 {
            return Err(Error::ZeroConstantTerm);
        }
        let f = &self.field;
        let mut rev: Vec<Fel> = self.coeffs.iter().rev().map(|&c| f.bar(c)).collect();
        let scale = f.inv(f.bar(self.coeff(0)))?;
        for c in rev.iter_mut() {
            *c = f.mul(*c, scale);
        }
        Ok(Poly::new(f, rev))
    }

    pub fn is_self_dual(&self) -> bool {
        self.dual().map(|d| d == *self).unwrap_or(false)
    }
}

/// The Φ-classification of a monic polynomial with nonzero constant term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PhiClass {
    /// `f = f*` of degree 1.
    Phi1,
    /// `f = g·g*` with `g` irreducible and `g ≠ g*`; carries the
    /// graded-lex-least such factor `g`.
    Phi2 { g: Poly },
    /// `f = f*` irreducible of degree > 1.
    Phi3,
    /// Not of any Φ shape.
    None,
}

/// Classify `f` per the three Φ cases.
pub fn phi_classify(f: &Poly) -> Result<PhiClass> {
    if f.is_zero() || !f.is_monic() {
        return Err(Error::Unsupported("Φ-classification needs monic f".into()));
    }
    if f.coeff(0) == 0 {
        return Err(Error::ZeroConstantTerm);
    }
    if f.is_self_dual() {
        if f.degree() == 1 {
            return Ok(PhiClass::Phi1);
        }
        if f.is_irreducible() {
            return Ok(PhiClass::Phi3);
        }
        if f.degree() % 2 == 0 {
            let factors = f.factorize();
            if factors.len() == 2 && factors[0].1 == 1 && factors[1].1 == 1 {
                let g = &factors[0].0;
                let gd = g.dual()?;
                if gd != *g && g.mul(&gd) == *f {
                    return Ok(PhiClass::Phi2 { g: g.clone() });
                }
            }
            if factors.len() == 1 && factors[0].1 == 2 {
                // f = g² with g = g* is not a generalized elementary divisor shape
                return Ok(PhiClass::None);
            }
        }
        return Ok(PhiClass::None);
    }
    Ok(PhiClass::None)
}

fn factor_rec(g: &Poly, outer_mult: usize, out: &mut Vec<(Poly, usize)>) {
    let f = g.field();
    if g.degree() == 0 {
        return;
    }
    let deriv = g.derivative();
    if deriv.is_zero() {
        // g(t) = h(t^p); recurse on the p-th root of the coefficients.
        let p = f.p() as usize;
        let inv_frob = f.q() / f.p();
        let mut root = vec![];
        for i in (0..g.coeffs().len()).step_by(p) {
            root.push(f.pow(g.coeff(i), inv_frob));
        }
        factor_rec(&Poly::new(f, root), outer_mult * p, out);
        return;
    }
    let sq_gcd = g.gcd(&deriv);
    let squarefree = g.divrem(&sq_gcd).0.monic();
    // Factor the squarefree part by distinct-degree splitting followed by
    // trial division against all monic polynomials of the split degree.
    let mut factors = vec![];
    let mut rest = squarefree.clone();
    let mut d = 1usize;
    let mut xq = Poly::t(f); // t^(q^d) mod rest, updated incrementally
    while !rest.is_zero() && rest.degree() >= 1 {
        if rest.degree() < 2 * d {
            factors.push(rest.clone());
            break;
        }
        xq = pow_mod(&xq, f.q(), &rest);
        let split = xq.sub(&Poly::t(f)).gcd(&rest);
        if split.degree() > 0 {
            // All irreducible factors of `split` have degree exactly d.
            let mut part = split.clone();
            for cand in monic_polys(f, d, d) {
                if part.degree() < d {
                    break;
                }
                if cand.divides(&part) {
                    factors.push(cand.clone());
                    part = part.divrem(&cand).0;
                }
            }
            rest = rest.divrem(&split).0.monic();
            xq = xq.rem(&rest);
        }
        d += 1;
    }
    // Recover true multiplicities against g itself.
    let mut remaining = g.clone();
    for fac in factors {
        let mut mult = 0;
        while fac.divides(&remaining) {
            remaining = remaining.divrem(&fac).0;
            mult += 1;
        }
        merge_factor(out, fac, mult * outer_mult);
    }
    // Factors with multiplicity divisible by p vanish from the squarefree
    // part entirely; they survive in the quotient, so recurse on it.
    if !remaining.is_zero() && remaining.degree() > 0 {
        factor_rec(&remaining.monic(), outer_mult, out);
    }
}

fn merge_factor(out: &mut Vec<(Poly, usize)>, fac: Poly, mult: usize) {
    for entry in out.iter_mut() {
        if entry.0 == fac {
            entry.1 += mult;
            return;
        }
    }
    out.push((fac, mult));
}

/// `base^e mod m` by square-and-multiply.
pub fn pow_mod(base: &Poly, mut e: u64, m: &Poly) -> Poly {
    let f = base.field();
    let mut acc = Poly::one(f);
    let mut b = base.rem(m);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&b).rem(m);
        }
        b = b.mul(&b).rem(m);
        e >>= 1;
    }
    acc
}

/// All monic polynomials with degree in `lo..=hi`, in graded-lex order.
pub fn monic_polys(field: &Field, lo: usize, hi: usize) -> Vec<Poly> {
    let mut out = vec![];
    for d in lo..=hi {
        let count = field.q().pow(d as u32);
        for enc in 0..count {
            let mut coeffs = Vec::with_capacity(d + 1);
            let mut e = enc;
            for _ in 0..d {
                coeffs.push(e % field.q());
                e /= field.q();
            }
            coeffs.push(1);
            out.push(Poly::new(field, coeffs));
        }
    }
    out
}

/// All monic irreducible polynomials of exactly `deg`, graded-lex order.
pub fn monic_irreducibles(field: &Field, deg: usize) -> Vec<Poly> {
    monic_polys(field, deg, deg)
        .into_iter()
        .filter(|f| f.is_irreducible())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64, k: u32) -> Field {
        Field::new(p, k).unwrap()
    }

    #[test]
    fn arithmetic_roundtrip() {
        let f3 = f(3, 1);
        let a = Poly::new(&f3, vec![1, 2, 1]); // 1 + 2t + t²
        let b = Poly::new(&f3, vec![2, 1]); // 2 + t
        let (q, r) = a.divrem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
    }

    #[test]
    fn factorize_examples() {
        // t² + 1 over F_5 = (t - 2)(t - 3) = (t + 3)(t + 2)
        let f5 = f(5, 1);
        let g = Poly::new(&f5, vec![1, 0, 1]);
        let fac = g.factorize();
        assert_eq!(fac.len(), 2);
        assert_eq!(fac[0].0, Poly::new(&f5, vec![2, 1]));
        assert_eq!(fac[1].0, Poly::new(&f5, vec![3, 1]));

        // t² over F_2 = t·t
        let f2 = f(2, 1);
        let g = Poly::new(&f2, vec![0, 0, 1]);
        assert_eq!(g.factorize(), vec![(Poly::t(&f2), 2)]);

        // t² + t + 1 irreducible over F_2
        let g = Poly::new(&f2, vec![1, 1, 1]);
        assert_eq!(g.factorize(), vec![(g.clone(), 1)]);
        assert!(g.is_irreducible());
    }

    #[test]
    fn factorize_high_multiplicity_char_p() {
        // (t+1)^4 (t²+t+1) over F_2 exercises the derivative-zero path.
        let f2 = f(2, 1);
        let a = Poly::new(&f2, vec![1, 1]);
        let b = Poly::new(&f2, vec![1, 1, 1]);
        let g = a.pow(4).mul(&b);
        let fac = g.factorize();
        assert_eq!(fac, vec![(a, 4), (b, 1)]);
    }

    #[test]
    fn factorize_product_reassembles() {
        for field in [f(2, 1), f(3, 1), f(2, 2), f(5, 1)] {
            for g in monic_polys(&field, 1, 4) {
                if g.coeff(0) == 0 {
                    continue;
                }
                let fac = g.factorize();
                let mut prod = Poly::one(&field);
                for (h, m) in &fac {
                    assert!(h.is_irreducible());
                    prod = prod.mul(&h.pow(*m));
                }
                assert_eq!(prod, g);
            }
        }
    }

    #[test]
    fn dual_examples() {
        // t − 1 is self-dual.
        let f3 = f(3, 1);
        let g = Poly::t_minus(&f3, 1);
        assert_eq!(g.dual().unwrap(), g);

        // t² + t + 2 over F_3 → t² + 2t + 2, verified by root inversion in F_9.
        let g = Poly::new(&f3, vec![2, 1, 1]);
        let gd = g.dual().unwrap();
        assert_eq!(gd, Poly::new(&f3, vec![2, 2, 1]));
        let f9 = Field::with_bar(3, 1).unwrap();
        let emb = crate::field::SubfieldEmbedding::new(&f3, &f9).unwrap();
        let lift = |h: &Poly| Poly::new(&f9, h.coeffs().iter().map(|&c| emb.embed(c)).collect());
        let (g9, gd9) = (lift(&g), lift(&gd));
        let roots: Vec<Fel> = f9.elements().filter(|&x| g9.eval(x) == 0).collect();
        assert_eq!(roots.len(), 2);
        for r in roots {
            // over F_3-coefficients bar acts trivially on the polynomial, so the
            // roots of the dual are exactly the inverses
            assert_eq!(gd9.eval(f9.inv(r).unwrap()), 0);
        }

        // t² + 1 over F_3 is self-dual.
        let g = Poly::new(&f3, vec![1, 0, 1]);
        assert_eq!(g.dual().unwrap(), g);

        assert_eq!(Poly::t(&f3).dual(), Err(Error::ZeroConstantTerm));
    }

    #[test]
    fn dual_is_involutive_and_multiplicative() {
        for field in [f(2, 1), f(3, 1), f(5, 1)] {
            let polys: Vec<Poly> = monic_polys(&field, 1, 3)
                .into_iter()
                .filter(|g| g.coeff(0) != 0)
                .collect();
            for g in &polys {
                assert_eq!(g.dual().unwrap().dual().unwrap(), *g);
            }
            for g in polys.iter().take(12) {
                for h in polys.iter().take(12) {
                    assert_eq!(
                        g.mul(h).dual().unwrap(),
                        g.dual().unwrap().mul(&h.dual().unwrap())
                    );
                }
            }
        }
    }

    #[test]
    fn phi_classification() {
        let f3 = f(3, 1);
        // t − 1 → Φ₁
        assert_eq!(
            phi_classify(&Poly::t_minus(&f3, 1)).unwrap(),
            PhiClass::Phi1
        );
        // t² + 1 over F_3 → Φ₃ (self-dual irreducible, degree 2)
        assert_eq!(
            phi_classify(&Poly::new(&f3, vec![1, 0, 1])).unwrap(),
            PhiClass::Phi3
        );
        // t² + 1 over F_5 → Φ₂ splitting as (t − 2)(t − 3); the stored factor
        // is the graded-lex-least of the dual pair, t + 2 = t − 3.
        let f5 = f(5, 1);
        let c = phi_classify(&Poly::new(&f5, vec![1, 0, 1])).unwrap();
        match c {
            PhiClass::Phi2 { g } => {
                assert_eq!(g, Poly::new(&f5, vec![2, 1]));
                assert_eq!(g.dual().unwrap(), Poly::new(&f5, vec![3, 1]));
            }
            other => panic!("expected Phi2, got {other:?}"),
        }
        // t − 2 over F_5 alone is not self-dual → None
        assert_eq!(
            phi_classify(&Poly::new(&f5, vec![3, 1])).unwrap(),
            PhiClass::None
        );
    }
}
