//! Binary forms, ternary quartics, and the matrix actions on them.
//!
//! A binary form of degree d carries the point at infinity as a root with
//! multiplicity d − deg(p) when built from a polynomial p of smaller degree,
//! so Möbius substitutions permute the full projective root multiset.
//! Ternary quartics are plane quartic models F(x, y, z) = 0; GL₃ acts by
//! substitution of linear forms.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elt, Field};
use crate::mpoly::MPoly;
use crate::poly::Poly;

/// A 2×2 matrix over a field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix2 {
    pub a: Elt,
    pub b: Elt,
    pub c: Elt,
    pub d: Elt,
}

impl fmt::Debug for Matrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} {}; {} {}]", self.a, self.b, self.c, self.d)
    }
}

impl Matrix2 {
    /// Build from entries (row major).
    pub fn new(a: Elt, b: Elt, c: Elt, d: Elt) -> Matrix2 {
        Matrix2 { a, b, c, d }
    }

    /// The identity matrix.
    pub fn identity(f: &Field) -> Matrix2 {
        Matrix2::new(f.one(), f.zero(), f.zero(), f.one())
    }

    /// Determinant.
    pub fn det(&self) -> Elt {
        self.a.mul(&self.d).sub(&self.b.mul(&self.c))
    }

    /// Matrix product self·other.
    pub fn mul(&self, o: &Matrix2) -> Matrix2 {
        Matrix2::new(
            self.a.mul(&o.a).add(&self.b.mul(&o.c)),
            self.a.mul(&o.b).add(&self.b.mul(&o.d)),
            self.c.mul(&o.a).add(&self.d.mul(&o.c)),
            self.c.mul(&o.b).add(&self.d.mul(&o.d)),
        )
    }

    /// True inverse (errors when singular).
    pub fn inv(&self) -> Result<Matrix2> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::InvalidInput("singular 2×2 matrix".into()));
        }
        let i = det.inv()?;
        Ok(Matrix2::new(
            self.d.mul(&i),
            self.b.neg().mul(&i),
            self.c.neg().mul(&i),
            self.a.mul(&i),
        ))
    }

    /// Apply to a projective point (y : z), normalizing to z = 1 or (1 : 0).
    pub fn apply_proj(&self, p: &ProjPoint) -> Result<ProjPoint> {
        let y = self.a.mul(&p.0).add(&self.b.mul(&p.1));
        let z = self.c.mul(&p.0).add(&self.d.mul(&p.1));
        ProjPoint::new(y, z)
    }

    /// The Möbius transformation sending α₁ ↦ ∞, α₂ ↦ 0, α₃ ↦ 1
    /// (as a matrix acting on column vectors (y, z)ᵀ with x = y/z).
    ///
    /// Each αᵢ may be the point at infinity.
    pub fn to_infty_zero_one(a1: &ProjPoint, a2: &ProjPoint, a3: &ProjPoint) -> Result<Matrix2> {
        // Rows are linear forms vanishing at α₂ (numerator) and α₁
        // (denominator), scaled so the value at α₃ is equal for both.
        let lin_vanishing = |p: &ProjPoint| -> (Elt, Elt) {
            // z·y_p... the form y·z_p − z·y_p vanishes at (y_p : z_p)
            (p.1.clone(), p.0.neg())
        };
        let (n_a, n_b) = lin_vanishing(a2);
        let (d_a, d_b) = lin_vanishing(a1);
        // evaluate both at α₃ and cross-scale
        let num_at3 = n_a.mul(&a3.0).add(&n_b.mul(&a3.1));
        let den_at3 = d_a.mul(&a3.0).add(&d_b.mul(&a3.1));
        if num_at3.is_zero() || den_at3.is_zero() {
            return Err(Error::InvalidInput("coincident points for Möbius map".into()));
        }
        let m = Matrix2::new(
            n_a.mul(&den_at3),
            n_b.mul(&den_at3),
            d_a.mul(&num_at3),
            d_b.mul(&num_at3),
        );
        if m.det().is_zero() {
            return Err(Error::InvalidInput("coincident points for Möbius map".into()));
        }
        Ok(m)
    }
}

/// A point of P¹ in normalized coordinates: (x : 1) or (1 : 0).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct ProjPoint(pub Elt, pub Elt);

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1.is_zero() {
            write!(f, "∞")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl ProjPoint {
    /// Normalize homogeneous coordinates.
    pub fn new(y: Elt, z: Elt) -> Result<ProjPoint> {
        if z.is_zero() {
            if y.is_zero() {
                return Err(Error::InvalidInput("(0:0) is not a projective point".into()));
            }
            let f = y.field().clone();
            Ok(ProjPoint(f.one(), f.zero()))
        } else {
            Ok(ProjPoint(y.div(&z)?, z.field().one()))
        }
    }

    /// The affine point (x : 1).
    pub fn affine(x: Elt) -> ProjPoint {
        let one = x.field().one();
        ProjPoint(x, one)
    }

    /// The point at infinity (1 : 0).
    pub fn infinity(f: &Field) -> ProjPoint {
        ProjPoint(f.one(), f.zero())
    }

    /// True for (1 : 0).
    pub fn is_infinity(&self) -> bool {
        self.1.is_zero()
    }
}

/// A binary form of fixed degree d: Σ cᵢ·yⁱ z^{d−i}.
#[derive(Clone, PartialEq, Eq)]
pub struct BinaryForm {
    field: Field,
    degree: usize,
    /// coefficient of yⁱ z^{d−i}, i = 0..=d
    coeffs: Vec<Elt>,
}

impl fmt::Debug for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryForm(deg {}, {:?})", self.degree, self.to_poly())
    }
}

impl BinaryForm {
    /// Homogenize a polynomial of degree ≤ d to a degree-d form; the deficit
    /// d − deg(p) becomes the multiplicity of the root at infinity.
    pub fn from_poly(p: &Poly, degree: usize) -> Result<BinaryForm> {
        if p.deg() > degree {
            return Err(Error::InvalidInput(format!(
                "degree {} exceeds form degree {}",
                p.deg(),
                degree
            )));
        }
        let f = p.field().clone();
        let coeffs = (0..=degree).map(|i| p.coeff(i)).collect();
        Ok(BinaryForm {
            field: f,
            degree,
            coeffs,
        })
    }

    /// The coefficient field.
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// The form degree d (not the polynomial degree).
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficient of yⁱ z^{d−i}.
    pub fn coeff(&self, i: usize) -> Elt {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    /// Dehomogenize at z = 1.
    pub fn to_poly(&self) -> Poly {
        Poly::new(&self.field, self.coeffs.clone())
    }

    /// Evaluate at homogeneous coordinates.
    pub fn eval(&self, y: &Elt, z: &Elt) -> Result<Elt> {
        let mut acc = self.field.zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            let t = c
                .mul(&y.pow_i64(i as i64)?)
                .mul(&z.pow_i64((self.degree - i) as i64)?);
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Multiplicity of the root at infinity: d − deg.
    pub fn infinity_multiplicity(&self) -> usize {
        self.degree - self.to_poly().deg()
    }

    /// Scale by a constant.
    pub fn scale(&self, c: &Elt) -> BinaryForm {
        BinaryForm {
            field: self.field.clone(),
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    /// Right action of GL₂: (F·A)(y, z) = F(a·y + b·z, c·y + d·z).
    ///
    /// Roots transform by the inverse fractional-linear map, so if A sends
    /// α ↦ ∞ then F·A picks up the former root α at infinity.
    pub fn act(&self, m: &Matrix2) -> Result<BinaryForm> {
        if m.det().is_zero() {
            return Err(Error::InvalidInput("singular matrix action".into()));
        }
        // substitute into the bivariate expansion
        let f = &self.field;
        let ny = [m.a.clone(), m.b.clone()]; // a·y + b·z
        let nz = [m.c.clone(), m.d.clone()];
        // accumulate as bivariate dense coeffs[i][?]: represent as vec over y-degree
        let d = self.degree;
        let mut acc = vec![f.zero(); d + 1];
        // powers of (a y + b z) and (c y + d z) as coefficient vectors in y
        let pow_lin = |l: &[Elt; 2], k: usize| -> Vec<Elt> {
            // (l0 y + l1 z)^k → coefficient of y^i z^{k-i} = C(k,i) l0^i l1^{k-i}
            let mut out = vec![f.one()];
            for _ in 0..k {
                let mut next = vec![f.zero(); out.len() + 1];
                for (i, c) in out.iter().enumerate() {
                    next[i + 1] = next[i + 1].add(&c.mul(&l[0]));
                    next[i] = next[i].add(&c.mul(&l[1]));
                }
                out = next;
            }
            out
        };
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let py = pow_lin(&ny, i);
            let pz = pow_lin(&nz, d - i);
            for (u, cu) in py.iter().enumerate() {
                for (v, cv) in pz.iter().enumerate() {
                    acc[u + v] = acc[u + v].add(&c.mul(cu).mul(cv));
                }
            }
        }
        Ok(BinaryForm {
            field: f.clone(),
            degree: d,
            coeffs: acc,
        })
    }
}

/// Möbius action that moves the projective root multiset by the point map
/// (y : z) ↦ A·(y : z).  Implemented by substituting the adjugate of A, so no
/// inversion is needed; the returned scalar det(A)^d is the factor a
/// roundtrip (acting by A, then by A⁻¹) multiplies the form by.
pub fn mobius_act(f: &BinaryForm, a: &Matrix2) -> Result<(BinaryForm, Elt)> {
    let det = a.det();
    if det.is_zero() {
        return Err(Error::InvalidInput("singular matrix action".into()));
    }
    let adj = Matrix2::new(a.d.clone(), a.b.neg(), a.c.neg(), a.a.clone());
    let moved = f.act(&adj)?;
    Ok((moved, det.pow_i64(f.degree() as i64)?))
}

/// Scalar λ with f = λ·g, for proportional polynomials; errors otherwise.
pub fn proportionality(f: &Poly, g: &Poly) -> Result<Elt> {
    if g.is_zero() || f.is_zero() {
        return Err(Error::ZeroInput("proportionality with zero".into()));
    }
    if f.deg() != g.deg() {
        return Err(Error::InvalidInput("polynomials not proportional".into()));
    }
    let lam = f.lc().div(&g.lc())?;
    if &g.scale(&lam) != f {
        return Err(Error::InvalidInput("polynomials not proportional".into()));
    }
    Ok(lam)
}

/// A 3×3 matrix over a field (row major).
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix3 {
    pub rows: [[Elt; 3]; 3],
}

impl fmt::Debug for Matrix3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} {} {}; {} {} {}; {} {} {}]",
            self.rows[0][0],
            self.rows[0][1],
            self.rows[0][2],
            self.rows[1][0],
            self.rows[1][1],
            self.rows[1][2],
            self.rows[2][0],
            self.rows[2][1],
            self.rows[2][2]
        )
    }
}

impl Matrix3 {
    /// Build from rows.
    pub fn new(rows: [[Elt; 3]; 3]) -> Matrix3 {
        Matrix3 { rows }
    }

    /// The identity matrix.
    pub fn identity(f: &Field) -> Matrix3 {
        let z = f.zero();
        let o = f.one();
        Matrix3::new([
            [o.clone(), z.clone(), z.clone()],
            [z.clone(), o.clone(), z.clone()],
            [z.clone(), z.clone(), o],
        ])
    }

    /// Diagonal matrix.
    pub fn diag(a: Elt, b: Elt, c: Elt) -> Matrix3 {
        let f = a.field().clone();
        let z = f.zero();
        Matrix3::new([
            [a, z.clone(), z.clone()],
            [z.clone(), b, z.clone()],
            [z.clone(), z, c],
        ])
    }

    /// Block diagonal diag(1, M) acting on (x, y, z) with M on (y, z).
    pub fn block_1_2(m: &Matrix2) -> Matrix3 {
        let f = m.a.field().clone();
        let z = f.zero();
        Matrix3::new([
            [f.one(), z.clone(), z.clone()],
            [z.clone(), m.a.clone(), m.b.clone()],
            [z, m.c.clone(), m.d.clone()],
        ])
    }

    /// Determinant.
    pub fn det(&self) -> Elt {
        let r = &self.rows;
        let m = |i: usize, j: usize| &r[i][j];
        let t1 = m(0, 0).mul(&m(1, 1).mul(m(2, 2)).sub(&m(1, 2).mul(m(2, 1))));
        let t2 = m(0, 1).mul(&m(1, 0).mul(m(2, 2)).sub(&m(1, 2).mul(m(2, 0))));
        let t3 = m(0, 2).mul(&m(1, 0).mul(m(2, 1)).sub(&m(1, 1).mul(m(2, 0))));
        t1.sub(&t2).add(&t3)
    }

    /// Matrix product self·other.
    pub fn mul(&self, o: &Matrix3) -> Matrix3 {
        let f = self.rows[0][0].field().clone();
        let mut out = Matrix3::identity(&f);
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = f.zero();
                for k in 0..3 {
                    acc = acc.add(&self.rows[i][k].mul(&o.rows[k][j]));
                }
                out.rows[i][j] = acc;
            }
        }
        out
    }

    /// True inverse (errors when singular).
    pub fn inv(&self) -> Result<Matrix3> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::InvalidInput("singular 3×3 matrix".into()));
        }
        let idet = det.inv()?;
        let r = &self.rows;
        let cof = |i: usize, j: usize| -> Elt {
            let (r0, r1) = match i {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let (c0, c1) = match j {
                0 => (1, 2),
                1 => (0, 2),
                _ => (0, 1),
            };
            let m = r[r0][c0].mul(&r[r1][c1]).sub(&r[r0][c1].mul(&r[r1][c0]));
            if (i + j) % 2 == 1 {
                m.neg()
            } else {
                m
            }
        };
        let f = self.rows[0][0].field().clone();
        let mut out = Matrix3::identity(&f);
        for i in 0..3 {
            for j in 0..3 {
                // adjugate transpose
                out.rows[i][j] = cof(j, i).mul(&idet);
            }
        }
        Ok(out)
    }
}

/// A ternary quartic F(x, y, z): a homogeneous degree-4 polynomial in three
/// variables, the plane model of the glued curve.
#[derive(Clone, PartialEq, Eq)]
pub struct TernaryQuartic {
    inner: MPoly,
}

impl fmt::Debug for TernaryQuartic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.inner)
    }
}

/// The 15 quartic monomial exponents in deterministic (lexicographic) order.
pub const QUARTIC_MONOMIALS: [[u16; 3]; 15] = [
    [0, 0, 4],
    [0, 1, 3],
    [0, 2, 2],
    [0, 3, 1],
    [0, 4, 0],
    [1, 0, 3],
    [1, 1, 2],
    [1, 2, 1],
    [1, 3, 0],
    [2, 0, 2],
    [2, 1, 1],
    [2, 2, 0],
    [3, 0, 1],
    [3, 1, 0],
    [4, 0, 0],
];

impl TernaryQuartic {
    /// Build from a 3-variable polynomial, checking homogeneity of degree 4.
    pub fn new(p: MPoly) -> Result<TernaryQuartic> {
        if p.nvars() != 3 {
            return Err(Error::InvalidInput("ternary quartic needs 3 variables".into()));
        }
        for (e, _) in p.terms() {
            if e.iter().map(|&x| x as usize).sum::<usize>() != 4 {
                return Err(Error::InvalidInput(
                    "ternary quartic must be homogeneous of degree 4".into(),
                ));
            }
        }
        if p.is_zero() {
            return Err(Error::ZeroInput("zero ternary quartic".into()));
        }
        Ok(TernaryQuartic { inner: p })
    }

    /// Build from the 15 coefficients in [`QUARTIC_MONOMIALS`] order.
    pub fn from_coeffs(field: &Field, coeffs: &[Elt]) -> Result<TernaryQuartic> {
        if coeffs.len() != 15 {
            return Err(Error::InvalidInput("expected 15 coefficients".into()));
        }
        let mut p = MPoly::zero(field, 3);
        for (exp, c) in QUARTIC_MONOMIALS.iter().zip(coeffs) {
            p = p.add(&MPoly::monomial(field, exp.to_vec(), c.clone()));
        }
        TernaryQuartic::new(p)
    }

    /// The 15 coefficients in [`QUARTIC_MONOMIALS`] order.
    pub fn coeffs(&self) -> Vec<Elt> {
        QUARTIC_MONOMIALS
            .iter()
            .map(|e| self.inner.coeff(e))
            .collect()
    }

    /// The underlying polynomial.
    pub fn mpoly(&self) -> &MPoly {
        &self.inner
    }

    /// The coefficient field.
    pub fn field(&self) -> &Field {
        self.inner.field()
    }

    /// Evaluate at a point.
    pub fn eval(&self, x: &Elt, y: &Elt, z: &Elt) -> Result<Elt> {
        self.inner.eval(&[x.clone(), y.clone(), z.clone()])
    }

    /// Scale by a nonzero constant.
    pub fn scale(&self, c: &Elt) -> Result<TernaryQuartic> {
        if c.is_zero() {
            return Err(Error::ZeroInput("scaling quartic by zero".into()));
        }
        Ok(TernaryQuartic {
            inner: self.inner.scale(c),
        })
    }

    /// Right action of GL₃: (F·T)(v) = F(T·v) for column vectors v = (x,y,z)ᵀ.
    pub fn act(&self, t: &Matrix3) -> Result<TernaryQuartic> {
        if t.det().is_zero() {
            return Err(Error::InvalidInput("singular matrix action".into()));
        }
        let f = self.field().clone();
        let lin = |row: &[Elt; 3]| -> MPoly {
            let mut acc = MPoly::zero(&f, 3);
            for (v, c) in row.iter().enumerate() {
                acc = acc.add(&MPoly::var(&f, 3, v).scale(c));
            }
            acc
        };
        let images = [lin(&t.rows[0]), lin(&t.rows[1]), lin(&t.rows[2])];
        let mut out = MPoly::zero(&f, 3);
        for (e, c) in self.inner.terms() {
            let mut term = MPoly::constant(&f, 3, c);
            for (v, &k) in e.iter().enumerate() {
                term = term.mul(&images[v].pow(k as usize));
            }
            out = out.add(&term);
        }
        TernaryQuartic::new(out)
    }

    /// Map coefficients into another field via the supplied embedding.
    pub fn map_coeffs(&self, target: &Field, f: impl Fn(&Elt) -> Elt) -> Result<TernaryQuartic> {
        TernaryQuartic::new(self.inner.map_coeffs(target, f))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mobius_identity_and_diag() {
        let f = Field::rationals();
        // x²−1 as a degree-4 form: double root at ∞, roots ±1
        let p = Poly::from_i64(&f, &[-1, 0, 1]);
        let bf = BinaryForm::from_poly(&p, 4).unwrap();
        assert_eq!(bf.infinity_multiplicity(), 2);
        let id = Matrix2::identity(&f);
        assert_eq!(bf.act(&id).unwrap(), bf);
        // diag(1,2) as a point map sends x = y/z to x/2: roots ±1 ↦ ±1/2
        let a = Matrix2::new(f.one(), f.zero(), f.zero(), f.from_i64(2));
        let (moved, scalar) = mobius_act(&bf, &a).unwrap();
        let half = f.from_rational(&num_rational::BigRational::new(1.into(), 2.into())).unwrap();
        assert!(moved.to_poly().eval(&half).is_zero());
        assert!(moved.to_poly().eval(&half.neg()).is_zero());
        assert_eq!(scalar, f.from_i64(16)); // det(A)⁴ = 2⁴
        // roundtrip: acting by A then A⁻¹ rescales by det⁴
        let (back, _) = mobius_act(&moved, &a.inv().unwrap()).unwrap();
        assert_eq!(proportionality(&back.to_poly(), &bf.to_poly()).is_ok(), true);
    }

    #[test]
    fn mobius_swap_sends_zero_to_infinity() {
        let f = Field::rationals();
        // p = x (root 0, triple root at ∞ as a quartic form)
        let p = Poly::from_i64(&f, &[0, 1]);
        let bf = BinaryForm::from_poly(&p, 4).unwrap();
        let swap = Matrix2::new(f.zero(), f.one(), f.one(), f.zero());
        let moved = bf.act(&swap).unwrap();
        // after swapping, the former root 0 sits at infinity: y·z³ ↦ z·y³
        assert_eq!(moved.infinity_multiplicity(), 1);
        assert!(moved.to_poly().eval(&f.zero()).is_zero());
    }

    #[test]
    fn mobius_right_action_property() {
        let f = Field::prime(11).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let p = Poly::random(&f, 4, &mut rng);
            let bf = BinaryForm::from_poly(&p, 4).unwrap();
            let rand_mat = |rng: &mut ChaCha8Rng| loop {
                let m = Matrix2::new(
                    f.random(rng),
                    f.random(rng),
                    f.random(rng),
                    f.random(rng),
                );
                if !m.det().is_zero() {
                    return m;
                }
            };
            let a = rand_mat(&mut rng);
            let b = rand_mat(&mut rng);
            let lhs = bf.act(&a.mul(&b)).unwrap();
            let rhs = bf.act(&a).unwrap().act(&b).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn to_infty_zero_one_maps_correctly() {
        let f = Field::rationals();
        let a1 = ProjPoint::affine(f.from_i64(3));
        let a2 = ProjPoint::affine(f.from_i64(-2));
        let a3 = ProjPoint::affine(f.from_i64(7));
        let m = Matrix2::to_infty_zero_one(&a1, &a2, &a3).unwrap();
        assert!(m.apply_proj(&a1).unwrap().is_infinity());
        assert_eq!(m.apply_proj(&a2).unwrap(), ProjPoint::affine(f.zero()));
        assert_eq!(m.apply_proj(&a3).unwrap(), ProjPoint::affine(f.one()));
        // also with one point at infinity
        let m2 =
            Matrix2::to_infty_zero_one(&ProjPoint::infinity(&f), &a2, &a3).unwrap();
        assert!(m2.apply_proj(&ProjPoint::infinity(&f)).unwrap().is_infinity());
        assert_eq!(m2.apply_proj(&a2).unwrap(), ProjPoint::affine(f.zero()));
        assert_eq!(m2.apply_proj(&a3).unwrap(), ProjPoint::affine(f.one()));
    }

    #[test]
    fn gl3_roundtrip_random() {
        let f = Field::prime(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let coeffs: Vec<Elt> = (0..15).map(|_| f.random(&mut rng)).collect();
            let q = match TernaryQuartic::from_coeffs(&f, &coeffs) {
                Ok(q) => q,
                Err(_) => continue, // all-zero draw
            };
            let t = loop {
                let m = Matrix3::new([
                    [f.random(&mut rng), f.random(&mut rng), f.random(&mut rng)],
                    [f.random(&mut rng), f.random(&mut rng), f.random(&mut rng)],
                    [f.random(&mut rng), f.random(&mut rng), f.random(&mut rng)],
                ]);
                if !m.det().is_zero() {
                    break m;
                }
            };
            let back = q.act(&t).unwrap().act(&t.inv().unwrap()).unwrap();
            assert_eq!(back, q);
        }
    }

    #[test]
    fn gl3_diag_on_x4() {
        let f = Field::rationals();
        let x4 = TernaryQuartic::new(MPoly::monomial(&f, vec![4, 0, 0], f.one())).unwrap();
        let t = Matrix3::diag(f.from_i64(3), f.one(), f.one());
        let moved = x4.act(&t).unwrap();
        assert_eq!(moved.mpoly().coeff(&[4, 0, 0]), f.from_i64(81));
    }

    #[test]
    fn proportional_scalar() {
        let f = Field::rationals();
        let p = Poly::from_i64(&f, &[1, 2, 3]);
        let q = p.scale(&f.from_i64(5));
        assert_eq!(proportionality(&q, &p).unwrap(), f.from_i64(5));
        assert!(proportionality(&q, &Poly::from_i64(&f, &[1, 1, 1])).is_err());
    }
}
