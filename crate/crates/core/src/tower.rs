//! Splitting towers: a field extension containing all roots of one or more
//! polynomials, with the Galois action made explicit.
//!
//! Over F_q the tower is F_{q^d} with d the lcm of the irreducible factor
//! degrees, and the Galois group is cyclic, generated by x ↦ x^q.
//!
//! Over ℚ only towers of degree 1, 2, 3 or 6 are supported: the splitting
//! field of a separable cubic (adjoin a real generator β, then √disc when the
//! discriminant is not a square), realized as a single quotient ℚ[t]/(m) with
//! a primitive element γ = β + j·√disc.  Root data of degree-≤4 polynomials
//! whose splitting demands anything larger is reported as unsupported rather
//! than approximated.

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::factor::{self, extension_field, rational_quotient_field};
use crate::field::{Elt, Field, FieldKind};
use crate::poly::Poly;

/// How the Galois group of a tower acts.
#[derive(Debug, Clone)]
enum GaloisRep {
    /// Cyclic, generated by x ↦ x^{p^step}; `order` automorphisms total.
    Finite { step: usize, order: usize },
    /// Automorphism i sends the tower generator to `gen_images[i]`
    /// (identity first).
    Rational { gen_images: Vec<Elt> },
}

/// A splitting tower: base field, extension field, embedding, Galois action.
#[derive(Debug, Clone)]
pub struct Tower {
    base: Field,
    field: Field,
    /// Image in `field` of the generator of `base` (finite non-prime bases).
    embed_gen: Option<Elt>,
    galois: GaloisRep,
}

impl Tower {
    /// The base field.
    pub fn base(&self) -> &Field {
        &self.base
    }

    /// The extension field containing the roots.
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// Number of automorphisms (= tower degree; the tower is Galois).
    pub fn num_automorphisms(&self) -> usize {
        match &self.galois {
            GaloisRep::Finite { order, .. } => *order,
            GaloisRep::Rational { gen_images } => gen_images.len(),
        }
    }

    /// Apply automorphism `i` (index 0 is the identity).
    pub fn apply_aut(&self, i: usize, a: &Elt) -> Result<Elt> {
        match &self.galois {
            GaloisRep::Finite { step, order } => {
                a.frobenius_power((i % order) * step)
            }
            GaloisRep::Rational { gen_images } => {
                apply_gen_image(&self.field, a, &gen_images[i % gen_images.len()])
            }
        }
    }

    /// Embed a base-field element into the tower field.
    pub fn embed(&self, a: &Elt) -> Result<Elt> {
        if a.field() == &self.field {
            return Ok(a.clone());
        }
        if a.field() != &self.base {
            return Err(Error::FieldMismatch("element not in the tower base".into()));
        }
        if self.base == self.field {
            return Ok(a.clone());
        }
        match self.base.kind() {
            FieldKind::Rationals => self.field.from_rational(a.as_rational().unwrap()),
            FieldKind::Prime { .. } => self.field.embed(a),
            FieldKind::Extension { .. } => {
                // decompose over F_p, evaluate at the image of the base generator
                let g = self.embed_gen.as_ref().expect("finite tower embedding");
                let coeffs = self.base.base_coeffs(a);
                let mut acc = self.field.zero();
                for c in coeffs.iter().rev() {
                    acc = acc.mul(g).add(&self.field.embed(c)?);
                }
                Ok(acc)
            }
            FieldKind::RationalQuotient { .. } => {
                Err(Error::TowerUnsupported("quotient-algebra base".into()))
            }
        }
    }

    /// Embed a base-coefficient polynomial into the tower field.
    pub fn embed_poly(&self, p: &Poly) -> Result<Poly> {
        let mut out = Vec::with_capacity(p.coeffs().len());
        for c in p.coeffs() {
            out.push(self.embed(c)?);
        }
        Ok(Poly::new(&self.field, out))
    }

    /// Express a tower element in the base field, if it lies there.
    pub fn descend(&self, a: &Elt) -> Option<Elt> {
        if self.base == self.field {
            return Some(a.clone());
        }
        match self.base.kind() {
            FieldKind::Rationals | FieldKind::Prime { .. } => self.field.descend(a),
            FieldKind::Extension { .. } => {
                // Solve a = Σ cᵢ gᵢ with cᵢ ∈ F_p, g = image of the base
                // generator, by Gaussian elimination on F_p coordinates.
                let g = self.embed_gen.as_ref()?;
                let j = self.base.degree();
                let n = self.field.degree();
                let fp = self.field.base_field();
                let mut cols: Vec<Vec<Elt>> = vec![];
                let mut pw = self.field.one();
                for _ in 0..j {
                    cols.push(self.field.base_coeffs(&pw));
                    pw = pw.mul(g);
                }
                let rhs = self.field.base_coeffs(a);
                let sol = solve_linear(&fp, n, j, &cols, &rhs)?;
                self.base.from_base_coeffs(&sol).ok()
            }
            FieldKind::RationalQuotient { .. } => None,
        }
    }

    /// All roots of a base-coefficient polynomial inside the tower field,
    /// sorted canonically.  Errors if the polynomial does not split.
    pub fn roots_of(&self, p: &Poly, rng: &mut ChaCha8Rng) -> Result<Vec<Elt>> {
        let lifted = self.embed_poly(p)?;
        let mut rs = factor::roots(&lifted, rng)?;
        if rs.len() != p.deg() {
            return Err(Error::TowerUnsupported(format!(
                "polynomial of degree {} has only {} roots in the tower",
                p.deg(),
                rs.len()
            )));
        }
        rs.sort();
        Ok(rs)
    }
}

/// Evaluate the unique base-linear map sending the field generator to `img`
/// on element `a` (the automorphism determined by a conjugate root).
fn apply_gen_image(field: &Field, a: &Elt, img: &Elt) -> Result<Elt> {
    let coeffs = field.base_coeffs(a);
    let mut acc = field.zero();
    for c in coeffs.iter().rev() {
        let lifted = match c.as_rational() {
            Some(r) => field.from_rational(r)?,
            None => field.embed(c)?,
        };
        acc = acc.mul(img).add(&lifted);
    }
    Ok(acc)
}

/// Solve the n×j system cols·x = rhs over a prime field (x ∈ F_p^j).
fn solve_linear(_fp: &Field, n: usize, j: usize, cols: &[Vec<Elt>], rhs: &[Elt]) -> Option<Vec<Elt>> {
    // augmented matrix rows: n equations, j unknowns
    let mut m: Vec<Vec<Elt>> = (0..n)
        .map(|r| {
            let mut row: Vec<Elt> = (0..j).map(|c| cols[c][r].clone()).collect();
            row.push(rhs[r].clone());
            row
        })
        .collect();
    let mut pivots = vec![];
    let mut row = 0usize;
    for col in 0..j {
        let piv = (row..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(row, piv);
        let inv = m[row][col].inv().ok()?;
        for c in col..=j {
            m[row][c] = m[row][c].mul(&inv);
        }
        for r in 0..n {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=j {
                    m[r][c] = m[r][c].sub(&f.mul(&m[row][c]));
                }
            }
        }
        pivots.push(row);
        row += 1;
        if row == n {
            break;
        }
    }
    if pivots.len() < j {
        return None;
    }
    // consistency: remaining rows must be zero
    for r in j..n {
        if !m[r][j].is_zero() {
            return None;
        }
    }
    Some((0..j).map(|i| m[i][j].clone()).collect())
}

/// Splitting tower of a single separable polynomial, with its sorted roots.
pub fn splitting_tower(p: &Poly, rng: &mut ChaCha8Rng) -> Result<(Tower, Vec<Elt>)> {
    let (t, mut roots) = common_splitting_tower(std::slice::from_ref(p), rng)?;
    Ok((t, roots.remove(0)))
}

/// Common splitting tower of several polynomials over the same base field,
/// returning the sorted roots of each.
pub fn common_splitting_tower(
    polys: &[Poly],
    rng: &mut ChaCha8Rng,
) -> Result<(Tower, Vec<Vec<Elt>>)> {
    let base = polys
        .first()
        .ok_or_else(|| Error::InvalidInput("no polynomials given".into()))?
        .field()
        .clone();
    for p in polys {
        if p.field() != &base {
            return Err(Error::FieldMismatch("mixed base fields".into()));
        }
        if p.deg() == 0 {
            return Err(Error::InvalidInput("constant polynomial".into()));
        }
        if !p.is_separable()? {
            return Err(Error::Inseparable(format!("{:?}", p)));
        }
    }
    match base.kind() {
        FieldKind::Prime { .. } | FieldKind::Extension { .. } => {
            finite_tower(&base, polys, rng)
        }
        FieldKind::Rationals => rational_tower(polys, rng),
        FieldKind::RationalQuotient { .. } => {
            Err(Error::TowerUnsupported("quotient-algebra base".into()))
        }
    }
}

fn finite_tower(
    base: &Field,
    polys: &[Poly],
    rng: &mut ChaCha8Rng,
) -> Result<(Tower, Vec<Vec<Elt>>)> {
    let p = base.characteristic();
    let j = base.degree();
    let mut d = 1usize;
    for poly in polys {
        let f = factor::factor(poly, rng)?;
        for (g, _) in &f.factors {
            d = num_integer::lcm(d, g.deg());
        }
    }
    let (field, embed_gen) = if d == 1 {
        (base.clone(), None)
    } else {
        let big = extension_field(p, j * d, rng)?;
        let embed_gen = if j == 1 {
            None
        } else {
            // image of the base generator: a root of the base modulus in `big`
            let modulus = match base.kind() {
                FieldKind::Extension { modulus, .. } => modulus.clone(),
                _ => unreachable!(),
            };
            let fp = Field::prime(p)?;
            let mpoly = Poly::new(
                &big,
                modulus
                    .iter()
                    .map(|&c| big.embed(&fp.from_i64(c as i64)).unwrap())
                    .collect(),
            );
            let mut rs = factor::roots(&mpoly, rng)?;
            if rs.len() != j {
                return Err(Error::TowerUnsupported(
                    "base modulus does not split in the extension".into(),
                ));
            }
            rs.sort();
            Some(rs.remove(0))
        };
        (big, embed_gen)
    };
    let tower = Tower {
        base: base.clone(),
        field,
        embed_gen,
        galois: GaloisRep::Finite { step: j, order: d },
    };
    let mut all_roots = vec![];
    for poly in polys {
        all_roots.push(tower.roots_of(poly, rng)?);
    }
    Ok((tower, all_roots))
}

/// Square root of a rational field element, if it is a square.
fn rational_sqrt(a: &Elt) -> Option<Elt> {
    let r = a.as_rational()?;
    let n = crate::intutil::perfect_sqrt(r.numer())?;
    let d = crate::intutil::perfect_sqrt(r.denom())?;
    Some(
        a.field()
            .from_rational(&num_rational::BigRational::new(n, d))
            .unwrap(),
    )
}

fn rational_tower(polys: &[Poly], rng: &mut ChaCha8Rng) -> Result<(Tower, Vec<Vec<Elt>>)> {
    let q = Field::rationals();
    // Collect distinct irreducible factors of degree ≥ 2 across all inputs.
    let mut quads: Vec<Poly> = vec![];
    let mut cubics: Vec<Poly> = vec![];
    for p in polys {
        let f = factor::factor(p, rng)?;
        for (g, _) in f.factors {
            match g.deg() {
                1 => {}
                2 => {
                    if !quads.contains(&g) {
                        quads.push(g);
                    }
                }
                3 => {
                    if !cubics.contains(&g) {
                        cubics.push(g);
                    }
                }
                _ => {
                    return Err(Error::TowerUnsupported(format!(
                        "irreducible factor of degree {} over ℚ",
                        g.deg()
                    )))
                }
            }
        }
    }
    let tower = if cubics.is_empty() && quads.is_empty() {
        Tower {
            base: q.clone(),
            field: q.clone(),
            embed_gen: None,
            galois: GaloisRep::Rational {
                gen_images: vec![q.one()],
            },
        }
    } else if cubics.is_empty() {
        quadratic_tower(&quads[0], rng)?
    } else {
        // Prefer an S₃ cubic (degree-6 field) as the tower generator so that
        // quadratic subfields are available.
        let pick = cubics
            .iter()
            .position(|c| {
                let d = c.discriminant().unwrap();
                rational_sqrt(&d).is_none()
            })
            .unwrap_or(0);
        cubic_tower(&cubics[pick], rng)?
    };
    let mut all_roots = vec![];
    for p in polys {
        // Factor over ℚ first so each norm computed during tower
        // factorization stays within the supported degree range.
        let f = factor::factor(p, rng)?;
        let mut rs: Vec<Elt> = vec![];
        for (g, mult) in &f.factors {
            let gr = tower.roots_of(g, rng)?;
            for r in gr {
                for _ in 0..*mult {
                    rs.push(r.clone());
                }
            }
        }
        rs.sort();
        all_roots.push(rs);
    }
    Ok((tower, all_roots))
}

/// Degree-2 tower ℚ[t]/(q₀) for a monic irreducible quadratic.
fn quadratic_tower(quad: &Poly, rng: &mut ChaCha8Rng) -> Result<Tower> {
    let k = rational_quotient_field(quad, rng)?;
    let g = k.gen()?;
    // conjugate root: −b − t̄ for x² + bx + c
    let b = k.from_rational(quad.monic()?.coeff(1).as_rational().unwrap())?;
    let conj = b.neg().sub(&g);
    Ok(Tower {
        base: Field::rationals(),
        field: k,
        embed_gen: None,
        galois: GaloisRep::Rational {
            gen_images: vec![g, conj],
        },
    })
}

/// Degree-3 or degree-6 tower for a monic irreducible cubic over ℚ.
fn cubic_tower(cubic: &Poly, rng: &mut ChaCha8Rng) -> Result<Tower> {
    let q = Field::rationals();
    let c = cubic.monic()?;
    let d = c.discriminant()?;
    if rational_sqrt(&d).is_some() {
        // Galois group C₃: the cubic field is already the splitting field.
        let k = rational_quotient_field(&c, rng)?;
        let mut images = factor::roots(
            &c.map_coeffs(&k, |x| k.from_rational(x.as_rational().unwrap()).unwrap()),
            rng,
        )?;
        if images.len() != 3 {
            return Err(Error::TowerUnsupported(
                "cyclic cubic failed to split in its own field".into(),
            ));
        }
        let g = k.gen()?;
        images.sort();
        let mut ordered = vec![g.clone()];
        ordered.extend(images.into_iter().filter(|r| r != &g));
        Ok(Tower {
            base: q,
            field: k,
            embed_gen: None,
            galois: GaloisRep::Rational { gen_images: ordered },
        })
    } else {
        // Galois group S₃: primitive element γ = β + j√d for a small j ≥ 1.
        's: for j in 1..20i64 {
            let j2d = d.mul(&q.from_i64(j * j));
            // minimal polynomial m(x) = Res_y(c(y), (x−y)² − j²d), by
            // evaluation–interpolation in x.
            let mut pts = vec![];
            for x0 in 0..7i64 {
                let xe = q.from_i64(x0);
                // (x₀−y)² − j²d as a polynomial in y
                let yy = Poly::new(&q, vec![xe.clone(), q.from_i64(-1)]);
                let quad = yy.mul(&yy).sub(&Poly::constant(&j2d));
                pts.push((xe, c.resultant(&quad)?));
            }
            let m = Poly::interpolate(&q, &pts)?;
            if m.deg() != 6 || !m.is_separable()? {
                continue;
            }
            if !factor::is_irreducible(&m, rng)? {
                continue;
            }
            let k = rational_quotient_field(&m, rng)?;
            let gamma = k.gen()?;
            let lift =
                |p: &Poly| p.map_coeffs(&k, |x| k.from_rational(x.as_rational().unwrap()).unwrap());
            let ck = lift(&c);
            let j2d_k = k.from_rational(j2d.as_rational().unwrap())?;
            // δ = j√d from the cubic Taylor expansion of c(γ − δ):
            // c(γ) − c′(γ)δ + (c″(γ)/2)δ² − δ³ with δ² = j²d scalar.
            let num = ck
                .eval(&gamma)
                .add(&ck.derivative().derivative().eval(&gamma).div(&k.from_i64(2))?.mul(&j2d_k));
            let den = ck.derivative().eval(&gamma).add(&j2d_k);
            if den.is_zero() {
                continue 's;
            }
            let delta = num.div(&den)?;
            let beta1 = gamma.sub(&delta);
            if !ck.eval(&beta1).is_zero() {
                continue 's;
            }
            // remaining roots via the quadratic cofactor and √d = δ/j
            let lin = Poly::new(&k, vec![beta1.neg(), k.one()]);
            let quad = ck.div_exact(&lin)?;
            let q1 = quad.coeff(1);
            let sqrt_d = delta.div(&k.from_i64(j))?;
            let qeval = quad.eval(&beta1);
            if qeval.is_zero() {
                continue 's;
            }
            let e = sqrt_d.div(&qeval)?;
            let beta2 = q1.neg().add(&e).div(&k.from_i64(2))?;
            let beta3 = q1.neg().sub(&e).div(&k.from_i64(2))?;
            if !ck.eval(&beta2).is_zero() || !ck.eval(&beta3).is_zero() {
                continue 's;
            }
            // the six conjugates of γ are βᵢ ± j√d
            let jd = delta.clone();
            let mut images = vec![];
            for b in [&beta1, &beta2, &beta3] {
                images.push(b.add(&jd));
                images.push(b.sub(&jd));
            }
            let mk = lift(&m);
            for im in &images {
                if !mk.eval(im).is_zero() {
                    continue 's;
                }
            }
            let mut ordered = vec![gamma.clone()];
            let mut rest: Vec<Elt> = images.into_iter().filter(|r| r != &gamma).collect();
            rest.sort();
            ordered.extend(rest);
            if ordered.len() != 6 {
                continue 's;
            }
            return Ok(Tower {
                base: q,
                field: k,
                embed_gen: None,
                galois: GaloisRep::Rational { gen_images: ordered },
            });
        }
        Err(Error::TowerUnsupported(
            "no primitive element found for the S₃ tower".into(),
        ))
    }
}

/// The image of the generator of one finite field inside a larger one,
/// using the smallest root of the source modulus (identity if equal fields);
/// `None` when the source is the prime field.
pub fn finite_gen_image(from: &Field, to: &Field, rng: &mut ChaCha8Rng) -> Result<Option<Elt>> {
    match from.kind() {
        FieldKind::Prime { .. } => Ok(None),
        FieldKind::Extension { modulus, .. } => {
            if from == to {
                return Ok(Some(from.gen()?));
            }
            let coeffs: Vec<Elt> = modulus.iter().map(|&c| to.from_i64(c as i64)).collect();
            let m = Poly::new(to, coeffs);
            let rs = factor::roots(&m, rng)?;
            rs.into_iter()
                .min()
                .ok_or_else(|| Error::FieldMismatch("source field does not embed into target".into()))
                .map(Some)
        }
        _ => Err(Error::InvalidInput("finite fields expected".into())),
    }
}

/// Apply the embedding determined by [`finite_gen_image`].
pub fn embed_finite(e: &Elt, to: &Field, gen_img: &Option<Elt>) -> Result<Elt> {
    match gen_img {
        None => {
            if e.field() == to {
                Ok(e.clone())
            } else {
                to.embed(e)
            }
        }
        Some(g) => {
            let coeffs = e.field().base_coeffs(e);
            let mut acc = to.zero();
            for c in coeffs.iter().rev() {
                acc = acc.mul(g).add(&embed_finite(c, to, &None)?);
            }
            Ok(acc)
        }
    }
}

/// Image of the source quotient-field generator in the target field: the
/// smallest root of the source modulus there (None when the source is a base
/// field, where [`embed_finite`] falls back to coefficient embedding).
/// Handles finite extensions and rational quotient fields alike.
pub fn gen_image(from: &Field, to: &Field, rng: &mut ChaCha8Rng) -> Result<Option<Elt>> {
    match from.kind() {
        FieldKind::Prime { .. } | FieldKind::Rationals => Ok(None),
        FieldKind::Extension { .. } => finite_gen_image(from, to, rng),
        FieldKind::RationalQuotient { modulus } => {
            if from == to {
                return Ok(Some(from.gen()?));
            }
            let coeffs: Vec<Elt> = modulus
                .iter()
                .map(|c| to.from_rational(c))
                .collect::<Result<_>>()?;
            let m = Poly::new(to, coeffs);
            let rs = factor::roots(&m, rng)?;
            rs.into_iter()
                .min()
                .ok_or_else(|| {
                    Error::FieldMismatch("source field does not embed into target".into())
                })
                .map(Some)
        }
    }
}

/// Map a polynomial coefficientwise through [`embed_finite`].
pub fn embed_poly_finite(p: &Poly, to: &Field, gen_img: &Option<Elt>) -> Result<Poly> {
    let coeffs: Vec<Elt> = p
        .coeffs()
        .iter()
        .map(|c| embed_finite(c, to, gen_img))
        .collect::<Result<_>>()?;
    Ok(Poly::new(to, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    #[test]
    fn quadratic_over_q() {
        let q = Field::rationals();
        let p = Poly::from_i64(&q, &[-1, 1, 1]); // x²+x−1
        let (t, roots) = splitting_tower(&p, &mut rng()).unwrap();
        assert_eq!(t.field().degree(), 2);
        assert_eq!(roots.len(), 2);
        let lifted = t.embed_poly(&p).unwrap();
        for r in &roots {
            assert!(lifted.eval(r).is_zero());
        }
        // the nontrivial automorphism swaps the roots
        assert_eq!(t.num_automorphisms(), 2);
        assert_eq!(t.apply_aut(1, &roots[0]).unwrap(), roots[1]);
    }

    #[test]
    fn cubic_over_f3_needs_f27() {
        let f3 = Field::prime(3).unwrap();
        let p = Poly::from_i64(&f3, &[1, 2, 0, 1]); // x³+2x+1, irreducible mod 3
        let (t, roots) = splitting_tower(&p, &mut rng()).unwrap();
        assert_eq!(t.field().degree(), 3);
        assert_eq!(roots.len(), 3);
        let lifted = t.embed_poly(&p).unwrap();
        for r in &roots {
            assert!(lifted.eval(r).is_zero());
        }
        // Frobenius permutes the roots cyclically
        let fr = t.apply_aut(1, &roots[0]).unwrap();
        assert!(roots.contains(&fr));
        assert_ne!(fr, roots[0]);
    }

    #[test]
    fn s3_cubic_over_q_degree_six() {
        let q = Field::rationals();
        // the printed genus-1 quartic read as a cubic: 4x³+5x²−98x+157 (S₃)
        let p = Poly::from_i64(&q, &[157, -98, 5, 4]);
        let (t, roots) = splitting_tower(&p, &mut rng()).unwrap();
        assert_eq!(t.field().degree(), 6);
        assert_eq!(roots.len(), 3);
        let lifted = t.embed_poly(&p).unwrap();
        for r in &roots {
            assert!(lifted.eval(r).is_zero());
        }
        assert_eq!(t.num_automorphisms(), 6);
        // every automorphism permutes the root set
        for i in 0..6 {
            for r in &roots {
                let img = t.apply_aut(i, r).unwrap();
                assert!(roots.contains(&img));
            }
        }
        // automorphisms fix ℚ
        let half = t.embed(&q.from_rational(&num_rational::BigRational::new(1.into(), 2.into())).unwrap()).unwrap();
        for i in 0..6 {
            assert_eq!(t.apply_aut(i, &half).unwrap(), half);
        }
    }

    #[test]
    fn common_tower_of_isomorphic_cubics() {
        let q = Field::rationals();
        // x³+2x+1 and the resolvent x³−2x²+5x−8 generate the same S₃ field
        let a = Poly::from_i64(&q, &[1, 2, 0, 1]);
        let b = Poly::from_i64(&q, &[-8, 5, -2, 1]);
        let (t, roots) = common_splitting_tower(&[a.clone(), b.clone()], &mut rng()).unwrap();
        assert_eq!(t.field().degree(), 6);
        assert_eq!(roots[0].len(), 3);
        assert_eq!(roots[1].len(), 3);
        for r in &roots[0] {
            assert!(t.embed_poly(&a).unwrap().eval(r).is_zero());
        }
        for r in &roots[1] {
            assert!(t.embed_poly(&b).unwrap().eval(r).is_zero());
        }
    }

    #[test]
    fn finite_extension_base_descend_roundtrip() {
        let mut r = rng();
        let f9 = extension_field(3, 2, &mut r).unwrap();
        // an irreducible quadratic over F₉ forces F₈₁
        let mut p;
        loop {
            p = Poly::random(&f9, 2, &mut r);
            if factor::is_irreducible(&p, &mut r).unwrap() {
                break;
            }
        }
        let (t, roots) = splitting_tower(&p, &mut r).unwrap();
        assert_eq!(t.field().degree(), 4);
        assert_eq!(roots.len(), 2);
        // embedding respects arithmetic and descends back
        let a = f9.gen().unwrap();
        let b = f9.from_i64(2);
        let ea = t.embed(&a).unwrap();
        let eb = t.embed(&b).unwrap();
        assert_eq!(t.embed(&a.mul(&b)).unwrap(), ea.mul(&eb));
        assert_eq!(t.descend(&ea).unwrap(), a);
        assert!(t.descend(&t.field().gen().unwrap()).is_none() || t.field().degree() == 2);
    }

    #[test]
    fn unsupported_quartic_over_q() {
        let q = Field::rationals();
        // x⁴−x−1 has Galois group S₄ over ℚ
        let p = Poly::from_i64(&q, &[-1, -1, 0, 0, 1]);
        match splitting_tower(&p, &mut rng()) {
            Err(Error::TowerUnsupported(_)) => {}
            other => panic!("expected tower unsupported, got {:?}", other.map(|_| ())),
        }
    }
}
