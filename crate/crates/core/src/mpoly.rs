//! Sparse multivariate polynomials over any [`Field`].
//!
//! Used for ternary quartic models, the Kummer-surface quartic in the four
//! theta coordinates, and intermediate bivariate eliminations.  Terms are kept
//! in a `BTreeMap` keyed by exponent vectors, so iteration order (and hence
//! serialization) is deterministic.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elt, Field};
use crate::poly::Poly;

/// A sparse multivariate polynomial in a fixed number of variables.
#[derive(Clone, PartialEq, Eq)]
pub struct MPoly {
    field: Field,
    nvars: usize,
    /// exponent vector (length `nvars`) → nonzero coefficient
    terms: BTreeMap<Vec<u16>, Elt>,
}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", c)?;
            for (v, &e) in exp.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*x{}", v)?,
                    _ => write!(f, "*x{}^{}", v, e)?,
                }
            }
        }
        Ok(())
    }
}

impl MPoly {
    /// The zero polynomial in `nvars` variables.
    pub fn zero(field: &Field, nvars: usize) -> MPoly {
        MPoly {
            field: field.clone(),
            nvars,
            terms: BTreeMap::new(),
        }
    }

    /// A constant.
    pub fn constant(field: &Field, nvars: usize, c: &Elt) -> MPoly {
        let mut p = MPoly::zero(field, nvars);
        p.add_term(vec![0; nvars], c.clone());
        p
    }

    /// The variable x_i.
    pub fn var(field: &Field, nvars: usize, i: usize) -> MPoly {
        assert!(i < nvars);
        let mut exp = vec![0u16; nvars];
        exp[i] = 1;
        let mut p = MPoly::zero(field, nvars);
        p.add_term(exp, field.one());
        p
    }

    /// A single monomial c·∏ x_i^{e_i}.
    pub fn monomial(field: &Field, exp: Vec<u16>, c: Elt) -> MPoly {
        let nvars = exp.len();
        let mut p = MPoly::zero(field, nvars);
        p.add_term(exp, c);
        p
    }

    /// The coefficient field.
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Number of variables.
    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Deterministic iteration over (exponent, coefficient) pairs.
    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u16>, &Elt)> {
        self.terms.iter()
    }

    /// Coefficient of the given exponent vector (zero if absent).
    pub fn coeff(&self, exp: &[u16]) -> Elt {
        self.terms
            .get(exp)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// True for the zero polynomial.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree (0 for the zero polynomial).
    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|e| e.iter().map(|&x| x as usize).sum())
            .max()
            .unwrap_or(0)
    }

    /// Degree in variable `i`.
    pub fn degree_in(&self, i: usize) -> usize {
        self.terms
            .keys()
            .map(|e| e[i] as usize)
            .max()
            .unwrap_or(0)
    }

    fn add_term(&mut self, exp: Vec<u16>, c: Elt) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&exp) {
            Some(old) => {
                let s = old.add(&c);
                if !s.is_zero() {
                    self.terms.insert(exp, s);
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    /// Addition.
    pub fn add(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// Subtraction.
    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    /// Negation.
    pub fn neg(&self) -> MPoly {
        let mut out = MPoly::zero(&self.field, self.nvars);
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c.neg());
        }
        out
    }

    /// Multiply by a scalar.
    pub fn scale(&self, c: &Elt) -> MPoly {
        let mut out = MPoly::zero(&self.field, self.nvars);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a.mul(c));
        }
        out
    }

    /// Multiplication (schoolbook over sparse terms).
    pub fn mul(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = MPoly::zero(&self.field, self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exp: Vec<u16> = ea.iter().zip(eb).map(|(&x, &y)| x + y).collect();
                out.add_term(exp, ca.mul(cb));
            }
        }
        out
    }

    /// Small integer power.
    pub fn pow(&self, e: usize) -> MPoly {
        let mut acc = MPoly::constant(&self.field, self.nvars, &self.field.one());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Evaluate fully at a point (one value per variable).
    pub fn eval(&self, xs: &[Elt]) -> Result<Elt> {
        if xs.len() != self.nvars {
            return Err(Error::InvalidInput("wrong number of evaluation points".into()));
        }
        let mut acc = self.field.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&xs[v].pow_i64(k as i64)?);
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Substitute a value for variable `i`, keeping the variable count
    /// (its exponent becomes 0 everywhere).
    pub fn eval_var(&self, i: usize, x: &Elt) -> Result<MPoly> {
        let mut out = MPoly::zero(&self.field, self.nvars);
        for (e, c) in &self.terms {
            let k = e[i];
            let mut exp = e.clone();
            exp[i] = 0;
            let val = if k > 0 {
                c.mul(&x.pow_i64(k as i64)?)
            } else {
                c.clone()
            };
            out.add_term(exp, val);
        }
        Ok(out)
    }

    /// Substitute a whole multivariate polynomial for variable `i`.
    pub fn subst_var(&self, i: usize, g: &MPoly) -> MPoly {
        assert_eq!(self.nvars, g.nvars);
        let mut out = MPoly::zero(&self.field, self.nvars);
        // group by exponent of x_i, reuse powers of g
        let maxk = self.degree_in(i);
        let mut powers = Vec::with_capacity(maxk + 1);
        powers.push(MPoly::constant(&self.field, self.nvars, &self.field.one()));
        for k in 1..=maxk {
            let next = powers[k - 1].mul(g);
            powers.push(next);
        }
        for (e, c) in &self.terms {
            let k = e[i] as usize;
            let mut exp = e.clone();
            exp[i] = 0;
            let base = MPoly::monomial(&self.field, exp, c.clone());
            out = out.add(&base.mul(&powers[k]));
        }
        out
    }

    /// View as a univariate polynomial in variable `i` whose coefficients are
    /// multivariate polynomials (with x_i-exponent zeroed).
    pub fn coeffs_in(&self, i: usize) -> Vec<MPoly> {
        let d = self.degree_in(i);
        let mut out = vec![MPoly::zero(&self.field, self.nvars); d + 1];
        for (e, c) in &self.terms {
            let k = e[i] as usize;
            let mut exp = e.clone();
            exp[i] = 0;
            out[k].add_term(exp, c.clone());
        }
        out
    }

    /// Convert to a univariate [`Poly`] in variable `i`; all other variables
    /// must be absent.
    pub fn to_univariate(&self, i: usize) -> Result<Poly> {
        let mut coeffs = vec![self.field.zero(); self.degree_in(i) + 1];
        for (e, c) in &self.terms {
            for (v, &k) in e.iter().enumerate() {
                if v != i && k != 0 {
                    return Err(Error::InvalidInput(
                        "polynomial is not univariate in the requested variable".into(),
                    ));
                }
            }
            coeffs[e[i] as usize] = c.clone();
        }
        Ok(Poly::new(&self.field, coeffs))
    }

    /// Lift a univariate polynomial into variable `i` of an `nvars`-variable ring.
    pub fn from_univariate(p: &Poly, nvars: usize, i: usize) -> MPoly {
        let mut out = MPoly::zero(p.field(), nvars);
        for (k, c) in p.coeffs().iter().enumerate() {
            let mut exp = vec![0u16; nvars];
            exp[i] = k as u16;
            out.add_term(exp, c.clone());
        }
        out
    }

    /// Formal derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> MPoly {
        let mut out = MPoly::zero(&self.field, self.nvars);
        for (e, c) in &self.terms {
            let k = e[i];
            if k == 0 {
                continue;
            }
            let mut exp = e.clone();
            exp[i] = k - 1;
            out.add_term(exp, c.mul(&self.field.from_i64(k as i64)));
        }
        out
    }

    /// Map coefficients into another field via the supplied embedding.
    pub fn map_coeffs(&self, target: &Field, f: impl Fn(&Elt) -> Elt) -> MPoly {
        let mut out = MPoly::zero(target, self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_eval() {
        let f = Field::prime(7).unwrap();
        // p = (x+y)² = x² + 2xy + y²
        let x = MPoly::var(&f, 2, 0);
        let y = MPoly::var(&f, 2, 1);
        let p = x.add(&y).pow(2);
        assert_eq!(p.total_degree(), 2);
        assert_eq!(p.coeff(&[1, 1]), f.from_i64(2));
        let v = p.eval(&[f.from_i64(3), f.from_i64(2)]).unwrap();
        assert_eq!(v, f.from_i64(25 % 7));
    }

    #[test]
    fn substitution_roundtrip() {
        let f = Field::rationals();
        let x = MPoly::var(&f, 2, 0);
        let y = MPoly::var(&f, 2, 1);
        // p(x,y) = x² − y; substitute x ↦ y+1: (y+1)² − y = y² + y + 1
        let p = x.mul(&x).sub(&y);
        let s = p.subst_var(0, &y.add(&MPoly::constant(&f, 2, &f.one())));
        let expect = y
            .mul(&y)
            .add(&y)
            .add(&MPoly::constant(&f, 2, &f.one()));
        assert_eq!(s, expect);
        let u = s.to_univariate(1).unwrap();
        assert_eq!(u, Poly::from_i64(&f, &[1, 1, 1]));
    }

    #[test]
    fn coeffs_in_decomposition() {
        let f = Field::rationals();
        let x = MPoly::var(&f, 2, 0);
        let y = MPoly::var(&f, 2, 1);
        // x²y + 3x + y²
        let p = x
            .mul(&x)
            .mul(&y)
            .add(&x.scale(&f.from_i64(3)))
            .add(&y.mul(&y));
        let cs = p.coeffs_in(0);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[0], y.mul(&y));
        assert_eq!(cs[1], MPoly::constant(&f, 2, &f.from_i64(3)));
        assert_eq!(cs[2], y);
        // reassemble
        let mut acc = MPoly::zero(&f, 2);
        for (k, c) in cs.iter().enumerate() {
            acc = acc.add(&c.mul(&x.pow(k)));
        }
        assert_eq!(acc, p);
    }

    #[test]
    fn derivative_rule() {
        let f = Field::rationals();
        let x = MPoly::var(&f, 3, 0);
        let z = MPoly::var(&f, 3, 2);
        // d/dx (x³z) = 3x²z
        let p = x.pow(3).mul(&z);
        assert_eq!(p.derivative(0), x.pow(2).mul(&z).scale(&f.from_i64(3)));
    }
}
