//! Dense univariate polynomials over any [`Field`], with the Euclidean
//! toolkit: gcd, resultants, discriminants, squarefree parts, modular
//! exponentiation, and interpolation.
//!
//! Coefficients are stored in ascending order and kept trimmed, so the zero
//! polynomial is the empty coefficient vector and `degree()` is `None` for it.

use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::field::{Elt, Field};

/// A univariate polynomial with exact coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    /// Ascending coefficients, trimmed (no trailing zeros).
    coeffs: Vec<Elt>,
}

impl fmt::Debug for Poly {
    /// Prints `c0 + (c1)*x + ...`, skipping zero terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})*x", c)?,
                _ => write!(f, "({})*x^{}", c, i)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Poly {
    /// Build from ascending coefficients (trailing zeros trimmed).
    pub fn new(field: &Field, coeffs: Vec<Elt>) -> Poly {
        let mut p = Poly {
            field: field.clone(),
            coeffs,
        };
        p.trim();
        p
    }

    /// Build from small integer coefficients, ascending.
    pub fn from_i64(field: &Field, coeffs: &[i64]) -> Poly {
        Poly::new(
            field,
            coeffs.iter().map(|&c| field.from_i64(c)).collect(),
        )
    }

    /// The zero polynomial.
    pub fn zero(field: &Field) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: vec![],
        }
    }

    /// The constant polynomial 1.
    pub fn one(field: &Field) -> Poly {
        Poly::new(field, vec![field.one()])
    }

    /// The monomial x.
    pub fn x(field: &Field) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    /// The constant polynomial c.
    pub fn constant(c: &Elt) -> Poly {
        Poly::new(c.field(), vec![c.clone()])
    }

    /// Monic polynomial with the given roots: ∏(x − rᵢ).
    pub fn from_roots(field: &Field, roots: &[Elt]) -> Poly {
        let mut p = Poly::one(field);
        for r in roots {
            let lin = Poly::new(field, vec![r.neg(), field.one()]);
            p = p.mul(&lin);
        }
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().map(|c| c.is_zero()) == Some(true) {
            self.coeffs.pop();
        }
    }

    /// The coefficient field.
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Degree treating the zero polynomial as degree 0 (convenience).
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Ascending coefficients (trimmed).
    pub fn coeffs(&self) -> &[Elt] {
        &self.coeffs
    }

    /// Coefficient of x^i (zero if beyond the degree).
    pub fn coeff(&self, i: usize) -> Elt {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Leading coefficient (of the zero polynomial: zero).
    pub fn lc(&self) -> Elt {
        self.coeffs
            .last()
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Scales so the leading coefficient is 1.
    pub fn monic(&self) -> Result<Poly> {
        if self.is_zero() {
            return Err(Error::ZeroInput("monic of zero".into()));
        }
        let ilc = self.lc().inv()?;
        Ok(self.scale(&ilc))
    }

    /// Multiply every coefficient by `c`.
    pub fn scale(&self, c: &Elt) -> Poly {
        Poly::new(
            &self.field,
            self.coeffs.iter().map(|a| a.mul(c)).collect(),
        )
    }

    /// Polynomial addition.
    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add(&other.coeff(i)));
        }
        Poly::new(&self.field, out)
    }

    /// Polynomial subtraction.
    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    /// Negation.
    pub fn neg(&self) -> Poly {
        Poly::new(&self.field, self.coeffs.iter().map(|c| c.neg()).collect())
    }

    /// Polynomial multiplication (schoolbook; degrees here are small).
    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly::new(&self.field, out)
    }

    /// Multiply by x^n.
    pub fn shift_up(&self, n: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut out = vec![self.field.zero(); n];
        out.extend(self.coeffs.iter().cloned());
        Poly::new(&self.field, out)
    }

    /// Euclidean division: (quotient, remainder).
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let db = divisor.degree().unwrap();
        let ilb = divisor.lc().inv()?;
        let mut r = self.clone();
        if r.deg() < db || r.is_zero() {
            return Ok((Poly::zero(&self.field), r));
        }
        let mut q = vec![self.field.zero(); r.coeffs.len() - db];
        while !r.is_zero() && r.degree().unwrap() >= db {
            let da = r.degree().unwrap();
            let c = r.lc().mul(&ilb);
            let shift = da - db;
            q[shift] = c.clone();
            let sub = divisor.scale(&c).shift_up(shift);
            r = r.sub(&sub);
        }
        Ok((Poly::new(&self.field, q), r))
    }

    /// Remainder modulo `divisor`.
    pub fn rem(&self, divisor: &Poly) -> Result<Poly> {
        Ok(self.divrem(divisor)?.1)
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(divisor)?;
        if !r.is_zero() {
            return Err(Error::InvalidInput("inexact polynomial division".into()));
        }
        Ok(q)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::ZeroInput("gcd(0,0)".into()));
        }
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns (g, s, t) with s·self + t·other = g, g monic.
    pub fn ext_gcd(&self, other: &Poly) -> Result<(Poly, Poly, Poly)> {
        let f = &self.field;
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(f), Poly::zero(f));
        let (mut t0, mut t1) = (Poly::zero(f), Poly::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1)?;
            let s = s0.sub(&q.mul(&s1));
            let t = t0.sub(&q.mul(&t1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
            t0 = t1;
            t1 = t;
        }
        if r0.is_zero() {
            return Err(Error::ZeroInput("gcd(0,0)".into()));
        }
        let ilc = r0.lc().inv()?;
        Ok((r0.scale(&ilc), s0.scale(&ilc), t0.scale(&ilc)))
    }

    /// Formal derivative.
    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero(&self.field);
        }
        let out = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(i, c)| c.mul(&self.field.from_i64((i + 1) as i64)))
            .collect();
        Poly::new(&self.field, out)
    }

    /// Evaluate at a point.
    pub fn eval(&self, x: &Elt) -> Elt {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Substitute another polynomial: self(g(x)).
    pub fn compose(&self, g: &Poly) -> Poly {
        let mut acc = Poly::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(g).add(&Poly::constant(c));
        }
        acc
    }

    /// Map coefficients into another field via the supplied embedding.
    pub fn map_coeffs(&self, target: &Field, f: impl Fn(&Elt) -> Elt) -> Poly {
        Poly::new(target, self.coeffs.iter().map(f).collect())
    }

    /// self·other mod m.
    pub fn mul_mod(&self, other: &Poly, m: &Poly) -> Result<Poly> {
        self.mul(other).rem(m)
    }

    /// self^e mod m with square-and-multiply (arbitrary-precision exponent).
    pub fn pow_mod(&self, e: &BigUint, m: &Poly) -> Result<Poly> {
        let mut acc = Poly::one(&self.field);
        let mut base = self.rem(m)?;
        for i in 0..e.bits() {
            if e.bit(i) {
                acc = acc.mul_mod(&base, m)?;
            }
            base = base.mul_mod(&base, m)?;
        }
        Ok(acc)
    }

    /// Resultant Res(self, other) with the Sylvester-determinant sign
    /// convention; in particular Res(x−a, x−b) = a−b.
    pub fn resultant(&self, other: &Poly) -> Result<Elt> {
        let f = &self.field;
        let (mut a, mut b) = (self.clone(), other.clone());
        if a.is_zero() || b.is_zero() {
            return Ok(f.zero());
        }
        let mut acc = f.one();
        loop {
            let da = a.degree().unwrap();
            let db = b.degree().unwrap();
            if db == 0 {
                // Res(a, c) = c^{deg a}
                return Ok(acc.mul(&b.coeff(0).pow_i64(da as i64)?));
            }
            if da < db {
                // Res(a,b) = (−1)^{da·db} Res(b,a)
                if da * db % 2 == 1 {
                    acc = acc.neg();
                }
                std::mem::swap(&mut a, &mut b);
                continue;
            }
            let r = a.rem(&b)?;
            if r.is_zero() {
                return Ok(f.zero());
            }
            let dr = r.degree().unwrap();
            // Res(a,b) = (−1)^{da·db} · lc(b)^{da−dr} · Res(b, r)
            acc = acc.mul(&b.lc().pow_i64((da - dr) as i64)?);
            if da * db % 2 == 1 {
                acc = acc.neg();
            }
            a = b;
            b = r;
        }
    }

    /// Discriminant: disc(p) = (−1)^{d(d−1)/2} Res(p, p′)/lc(p).
    pub fn discriminant(&self) -> Result<Elt> {
        let d = self
            .degree()
            .ok_or_else(|| Error::ZeroInput("disc of 0".into()))?;
        if d == 0 {
            return Err(Error::InvalidInput("disc of a constant".into()));
        }
        let dp = self.derivative();
        let res = self.resultant(&dp)?;
        let mut out = res.div(&self.lc())?;
        if (d * (d - 1) / 2) % 2 == 1 {
            out = out.neg();
        }
        Ok(out)
    }

    /// True iff gcd(p, p′) is constant.
    pub fn is_separable(&self) -> Result<bool> {
        if self.deg() == 0 {
            return Ok(true);
        }
        let dp = self.derivative();
        if dp.is_zero() {
            return Ok(false);
        }
        Ok(self.gcd(&dp)?.deg() == 0)
    }

    /// Squarefree part: self / gcd(self, self′), made monic.
    ///
    /// Over F_p this is correct for the polynomials in scope (degree < p or
    /// separable inputs); purely inseparable layers (p-th power parts) are
    /// handled by the factorization driver.
    pub fn squarefree_part(&self) -> Result<Poly> {
        let dp = self.derivative();
        if dp.is_zero() {
            return Err(Error::Inseparable("polynomial is a p-th power".into()));
        }
        let g = self.gcd(&dp)?;
        self.div_exact(&g)?.monic()
    }

    /// Lagrange interpolation through distinct nodes.
    pub fn interpolate(field: &Field, points: &[(Elt, Elt)]) -> Result<Poly> {
        let mut acc = Poly::zero(field);
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut num = Poly::constant(yi);
            let mut den = field.one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                num = num.mul(&Poly::new(field, vec![xj.neg(), field.one()]));
                den = den.mul(&xi.sub(xj));
            }
            acc = acc.add(&num.scale(&den.inv()?));
        }
        Ok(acc)
    }

    /// Reverse coefficients (x ↦ 1/x up to x^deg); used by root utilities.
    pub fn reversed(&self) -> Poly {
        let mut c = self.coeffs.clone();
        c.reverse();
        Poly::new(&self.field, c)
    }

    /// Random polynomial of exactly the given degree over a finite field.
    pub fn random(field: &Field, degree: usize, rng: &mut impl rand::Rng) -> Poly {
        loop {
            let mut coeffs: Vec<Elt> = (0..=degree).map(|_| field.random(rng)).collect();
            if coeffs[degree].is_zero() {
                coeffs[degree] = field.one();
            }
            let p = Poly::new(field, coeffs);
            if p.deg() == degree {
                return p;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn gcd_basic() {
        let f = q();
        let a = Poly::from_i64(&f, &[-1, 0, 1]); // x²−1
        let b = Poly::from_i64(&f, &[-1, 1]); // x−1
        assert_eq!(a.gcd(&b).unwrap(), b);
    }

    #[test]
    fn disc_quadratic() {
        let f = q();
        // x²+x−1 → disc = 1+4 = 5
        let p = Poly::from_i64(&f, &[-1, 1, 1]);
        assert_eq!(p.discriminant().unwrap(), f.from_i64(5));
    }

    #[test]
    fn resultant_linear_convention() {
        let f = q();
        // Res(x−a, x−b) = a−b with a=2, b=7
        let pa = Poly::from_i64(&f, &[-2, 1]);
        let pb = Poly::from_i64(&f, &[-7, 1]);
        assert_eq!(pa.resultant(&pb).unwrap(), f.from_i64(-5));
    }

    #[test]
    fn resultant_vs_product_formula() {
        // Res(f,g) = lc(f)^dg · ∏ g(rootᵢ(f)) for split f.
        let f = q();
        let roots = vec![f.from_i64(1), f.from_i64(2), f.from_i64(5)];
        let pf = Poly::from_roots(&f, &roots).scale(&f.from_i64(3));
        let pg = Poly::from_i64(&f, &[1, 4, 0, 2]); // 2x³+4x+1
        let dg = 3i64;
        let mut expect = pf.lc().pow_i64(dg).unwrap();
        for r in &roots {
            expect = expect.mul(&pg.eval(r));
        }
        assert_eq!(pf.resultant(&pg).unwrap(), expect);
    }

    #[test]
    fn divrem_roundtrip() {
        let f = Field::prime(13).unwrap();
        let a = Poly::from_i64(&f, &[3, 1, 4, 1, 5]);
        let b = Poly::from_i64(&f, &[2, 7, 1]);
        let (qq, r) = a.divrem(&b).unwrap();
        assert_eq!(qq.mul(&b).add(&r), a);
        assert!(r.deg() < b.deg());
    }

    #[test]
    fn interpolate_recovers() {
        let f = Field::prime(11).unwrap();
        let p = Poly::from_i64(&f, &[3, 0, 5, 1]);
        let pts: Vec<(Elt, Elt)> = (0..5)
            .map(|i| {
                let x = f.from_i64(i);
                (x.clone(), p.eval(&x))
            })
            .collect();
        assert_eq!(Poly::interpolate(&f, &pts).unwrap(), p);
    }

    #[test]
    fn disc_zero_iff_repeated_root() {
        let f = Field::prime(7).unwrap();
        let sep = Poly::from_i64(&f, &[1, 0, 1, 1]);
        let rep = Poly::from_roots(&f, &[f.from_i64(2), f.from_i64(2), f.from_i64(3)]);
        assert!(!sep.discriminant().unwrap().is_zero());
        assert!(rep.discriminant().unwrap().is_zero());
    }
}
