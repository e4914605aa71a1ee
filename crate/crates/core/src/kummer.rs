//! The Kummer-surface gluing pipeline over finite fields.
//!
//! Starting from a genus-2 curve Y: y² = f(x) (deg f ∈ {5, 6}), this module
//! builds an affine model of Jac(Y) in Mumford coordinates (a₁,a₂,b₁,b₂), the
//! quartic Kummer surface in P³ with its 16 nodes, plane sections through two
//! chosen nodes, and — for a genus-1 curve X and a gluing datum — the glued
//! plane quartic obtained by constructing an explicit degree-2 cover of the
//! normalized section.  Everything is exact; extensions F_{q^k} are created on
//! demand for roots and square roots.

use crate::error::{Error, Result};
use crate::factor;
use crate::field::{Elt, Field};
use crate::forms::{BinaryForm, ProjPoint, TernaryQuartic};
use crate::gluer;
use crate::mpoly::MPoly;
use crate::poly::Poly;
use crate::tower::{common_splitting_tower, splitting_tower, Tower};
use crate::twotorsion::GluingDatum;
use crate::verifier;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

// ---------------------------------------------------------------------------
// Exact linear algebra over an arbitrary coefficient field.
// ---------------------------------------------------------------------------

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(rows: &mut [Vec<Elt>]) -> Result<Vec<usize>> {
    if rows.is_empty() {
        return Ok(vec![]);
    }
    let ncols = rows[0].len();
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..ncols {
        if r >= rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r][c].inv()?;
        for j in c..ncols {
            rows[r][j] = rows[r][j].mul(&inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                for j in c..ncols {
                    let t = rows[r][j].mul(&factor);
                    rows[i][j] = rows[i][j].sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    Ok(pivots)
}

/// Basis of the right kernel of the matrix.
pub fn kernel_basis(m: &[Vec<Elt>], field: &Field) -> Result<Vec<Vec<Elt>>> {
    let ncols = if m.is_empty() { 0 } else { m[0].len() };
    let mut rows: Vec<Vec<Elt>> = m.to_vec();
    let pivots = rref(&mut rows)?;
    let mut basis = vec![];
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![field.zero(); ncols];
        v[free] = field.one();
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = rows[i][free].neg();
        }
        basis.push(v);
    }
    Ok(basis)
}

/// Solve M·x = rhs; `None` when inconsistent, else one solution (free
/// variables set to zero).
pub fn solve_linear(m: &[Vec<Elt>], rhs: &[Elt], field: &Field) -> Result<Option<Vec<Elt>>> {
    let ncols = if m.is_empty() { 0 } else { m[0].len() };
    let mut rows: Vec<Vec<Elt>> = m
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut v = r.clone();
            v.push(b.clone());
            v
        })
        .collect();
    let pivots = rref(&mut rows)?;
    if pivots.contains(&ncols) {
        return Ok(None);
    }
    let mut x = vec![field.zero(); ncols];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = rows[i][ncols].clone();
    }
    Ok(Some(x))
}

// ---------------------------------------------------------------------------
// Jacobian model in Mumford coordinates.
// ---------------------------------------------------------------------------

/// The seven coefficients f₀..f₆ of p_Y, padded with f₆ = 0 in degree 5.
fn sextic_coeffs(p_y: &Poly) -> Result<[Elt; 7]> {
    if p_y.deg() != 5 && p_y.deg() != 6 {
        return Err(Error::InvalidInput("p_Y must have degree 5 or 6".into()));
    }
    if !p_y.is_separable()? {
        return Err(Error::Inseparable("p_Y must be separable".into()));
    }
    let mut out: Vec<Elt> = (0..7).map(|i| p_y.coeff(i)).collect();
    Ok([
        out.remove(0),
        out.remove(0),
        out.remove(0),
        out.remove(0),
        out.remove(0),
        out.remove(0),
        out.remove(0),
    ])
}

/// F̃₀(s, p) = 2f₀ + f₁s + 2f₂p + f₃sp + 2f₄p² + f₅sp² + 2f₆p³, the symmetric
/// biquadratic form in elementary-symmetric coordinates (s = x+y, p = xy).
fn f0_sym(fc: &[Elt; 7], s: &Elt, p: &Elt) -> Elt {
    let f = s.field();
    let two = f.from_i64(2);
    let p2 = p.mul(p);
    let p3 = p2.mul(p);
    two.mul(&fc[0])
        .add(&fc[1].mul(s))
        .add(&two.mul(&fc[2]).mul(p))
        .add(&fc[3].mul(s).mul(p))
        .add(&two.mul(&fc[4]).mul(&p2))
        .add(&fc[5].mul(s).mul(&p2))
        .add(&two.mul(&fc[6]).mul(&p3))
}

/// Affine model of an open subset of Jac(Y) in Mumford coordinates: the locus
/// g₁ = g₂ = 0 in 𝔸⁴ with coordinates (a₁, a₂, b₁, b₂), where
/// g₁x + g₂ ≡ b(x)² − f(x) mod x² + a₁x + a₂ and b = b₁x + b₂.
#[derive(Clone, Debug)]
pub struct JacobianModel {
    /// The defining sextic (or quintic) f of Y.
    pub f: Poly,
    /// f₀..f₆ (f₆ = 0 in degree 5).
    pub fc: [Elt; 7],
    /// Coefficient of x in the remainder of b² − f.
    pub g1: MPoly,
    /// Constant coefficient of the remainder of b² − f.
    pub g2: MPoly,
}

/// Variables of the Mumford polynomial ring: (a₁, a₂, b₁, b₂).
const A1: usize = 0;
const A2: usize = 1;
const B1: usize = 2;
const B2: usize = 3;

pub fn jacobian_model(p_y: &Poly) -> Result<JacobianModel> {
    let fc = sextic_coeffs(p_y)?;
    let k = p_y.field().clone();
    let a1 = MPoly::var(&k, 4, A1);
    let a2 = MPoly::var(&k, 4, A2);
    let b1 = MPoly::var(&k, 4, B1);
    let b2 = MPoly::var(&k, 4, B2);
    // coefficients of b(x)² − f(x) in x, degree 6 downwards
    let mut c: Vec<MPoly> = (0..7)
        .map(|i| MPoly::constant(&k, 4, &fc[i].neg()))
        .collect();
    c[2] = c[2].add(&b1.mul(&b1));
    c[1] = c[1].add(&b1.mul(&b2).scale(&k.from_i64(2)));
    c[0] = c[0].add(&b2.mul(&b2));
    // reduce modulo x² + a₁x + a₂ via x² ≡ −a₁x − a₂
    for i in (2..7).rev() {
        let top = c[i].clone();
        c[i] = MPoly::zero(&k, 4);
        c[i - 1] = c[i - 1].sub(&a1.mul(&top));
        c[i - 2] = c[i - 2].sub(&a2.mul(&top));
    }
    Ok(JacobianModel {
        f: p_y.clone(),
        fc,
        g1: c[1].clone(),
        g2: c[0].clone(),
    })
}

impl JacobianModel {
    /// Membership test for a Mumford tuple (a₁, a₂, b₁, b₂).
    pub fn is_member(&self, pt: &[Elt; 4]) -> Result<bool> {
        let xs = pt.to_vec();
        Ok(self.g1.eval(&xs)?.is_zero() && self.g2.eval(&xs)?.is_zero())
    }
}

/// Random Mumford tuple on Jac(Y) built from two distinct affine points of Y
/// with distinct x-coordinates (rejection sampling).
pub fn random_mumford(f: &Poly, rng: &mut ChaCha8Rng) -> Result<[Elt; 4]> {
    let k = f.field().clone();
    for _ in 0..4000 {
        let x1 = k.random(rng);
        let x2 = k.random(rng);
        if x1 == x2 {
            continue;
        }
        let (v1, v2) = (f.eval(&x1), f.eval(&x2));
        let (Some(y1), Some(y2)) = (factor::sqrt_in_field(&v1, rng)?, factor::sqrt_in_field(&v2, rng)?)
        else {
            continue;
        };
        let b1 = y1.sub(&y2).div(&x1.sub(&x2))?;
        let b2 = y1.sub(&b1.mul(&x1));
        let a1 = x1.add(&x2).neg();
        let a2 = x1.mul(&x2);
        return Ok([a1, a2, b1, b2]);
    }
    Err(Error::Degenerate("no Mumford point found by sampling".into()))
}

// ---------------------------------------------------------------------------
// Kummer surface.
// ---------------------------------------------------------------------------

/// The Kummer quartic K = K₂κ₄² + K₁κ₄ + K₀ in P³ with its 16 nodes.
#[derive(Clone, Debug)]
pub struct KummerSurface {
    /// f₀..f₆ of the genus-2 model.
    pub fc: [Elt; 7],
    /// K₂(κ₁,κ₂,κ₃) = κ₂² − 4κ₁κ₃.
    pub k2: MPoly,
    /// K₁(κ₁,κ₂,κ₃), cubic.
    pub k1: MPoly,
    /// K₀(κ₁,κ₂,κ₃), quartic.
    pub k0: MPoly,
    /// The full quartic in (κ₁, κ₂, κ₃, κ₄).
    pub quartic: MPoly,
    /// The 16 nodes, with coordinates in the top of `tower`.
    pub nodes: Vec<[Elt; 4]>,
    /// Splitting tower of f over the base field; every node lives in its top.
    pub tower: Tower,
}

impl KummerSurface {
    /// The splitting field containing the nodes.
    pub fn node_field(&self) -> &Field {
        self.tower.field()
    }
}

fn mono3(k: &Field, e: [u16; 3], c: &Elt) -> MPoly {
    MPoly::monomial(k, e.to_vec(), c.clone())
}

pub fn kummer_surface(p_y: &Poly, rng: &mut ChaCha8Rng) -> Result<KummerSurface> {
    let fc = sextic_coeffs(p_y)?;
    let k = p_y.field().clone();
    let c = |n: i64| k.from_i64(n);
    let f = &fc;
    // K₂ = κ₂² − 4κ₁κ₃ in variables (κ₁, κ₂, κ₃)
    let k2 = mono3(&k, [0, 2, 0], &c(1)).add(&mono3(&k, [1, 0, 1], &c(-4)));
    // K₁ = −4κ₁³f₀ − 2κ₁²κ₂f₁ − 4κ₁²κ₃f₂ − 2κ₁κ₂κ₃f₃ − 4κ₁κ₃²f₄ − 2κ₂κ₃²f₅ − 4κ₃³f₆
    let k1 = [
        ([3, 0, 0], c(-4).mul(&f[0])),
        ([2, 1, 0], c(-2).mul(&f[1])),
        ([2, 0, 1], c(-4).mul(&f[2])),
        ([1, 1, 1], c(-2).mul(&f[3])),
        ([1, 0, 2], c(-4).mul(&f[4])),
        ([0, 1, 2], c(-2).mul(&f[5])),
        ([0, 0, 3], c(-4).mul(&f[6])),
    ]
    .iter()
    .fold(MPoly::zero(&k, 3), |acc, (e, v)| acc.add(&mono3(&k, *e, v)));
    // K₀, quartic in (κ₁, κ₂, κ₃)
    let prod = |i: usize, j: usize| f[i].mul(&f[j]);
    let k0 = [
        ([4, 0, 0], c(-4).mul(&prod(0, 2)).add(&f[1].mul(&f[1]))),
        ([3, 1, 0], c(-4).mul(&prod(0, 3))),
        ([3, 0, 1], c(-2).mul(&prod(1, 3))),
        ([2, 2, 0], c(-4).mul(&prod(0, 4))),
        (
            [2, 1, 1],
            c(4).mul(&prod(0, 5)).add(&c(-4).mul(&prod(1, 4))),
        ),
        (
            [2, 0, 2],
            c(-4)
                .mul(&prod(0, 6))
                .add(&c(2).mul(&prod(1, 5)))
                .add(&c(-4).mul(&prod(2, 4)))
                .add(&f[3].mul(&f[3])),
        ),
        ([1, 3, 0], c(-4).mul(&prod(0, 5))),
        (
            [1, 2, 1],
            c(8).mul(&prod(0, 6)).add(&c(-4).mul(&prod(1, 5))),
        ),
        (
            [1, 1, 2],
            c(4).mul(&prod(1, 6)).add(&c(-4).mul(&prod(2, 5))),
        ),
        ([1, 0, 3], c(-2).mul(&prod(3, 5))),
        ([0, 4, 0], c(-4).mul(&prod(0, 6))),
        ([0, 3, 1], c(-4).mul(&prod(1, 6))),
        ([0, 2, 2], c(-4).mul(&prod(2, 6))),
        ([0, 1, 3], c(-4).mul(&prod(3, 6))),
        ([0, 0, 4], c(-4).mul(&prod(4, 6)).add(&f[5].mul(&f[5]))),
    ]
    .iter()
    .fold(MPoly::zero(&k, 3), |acc, (e, v)| acc.add(&mono3(&k, *e, v)));
    // assemble the quartic in 4 variables
    let lift = |p: &MPoly, extra: u16| -> MPoly {
        let mut out = MPoly::zero(&k, 4);
        for (e, cf) in p.terms() {
            out = out.add(&MPoly::monomial(
                &k,
                vec![e[0], e[1], e[2], extra],
                cf.clone(),
            ));
        }
        out
    };
    let quartic = lift(&k2, 2).add(&lift(&k1, 1)).add(&lift(&k0, 0));
    // nodes over a splitting field of f
    let (tower, roots) = splitting_tower(p_y, rng)?;
    let kk = tower.field().clone();
    let fck: Vec<Elt> = fc.iter().map(|e| tower.embed(e)).collect::<Result<_>>()?;
    let fck: [Elt; 7] = fck.try_into().unwrap();
    let mut nodes: Vec<[Elt; 4]> = vec![[kk.zero(), kk.zero(), kk.zero(), kk.one()]];
    let rs = &roots;
    for i in 0..rs.len() {
        for j in (i + 1)..rs.len() {
            let (bi, bj) = (&rs[i], &rs[j]);
            let s = bi.add(bj);
            let p = bi.mul(bj);
            let d = bi.sub(bj);
            let k4 = f0_sym(&fck, &s, &p).div(&d.mul(&d))?;
            nodes.push([kk.one(), s, p, k4]);
        }
    }
    if p_y.deg() == 5 {
        // pairs of a finite root with the Weierstrass point at infinity
        for b in rs {
            let b2 = b.mul(b);
            let k4 = fck[5]
                .mul(&b2)
                .add(&kk.from_i64(2).mul(&fck[6]).mul(&b2).mul(b));
            nodes.push([kk.zero(), kk.one(), b.clone(), k4]);
        }
    }
    if nodes.len() != 16 {
        return Err(Error::Degenerate(format!(
            "expected 16 nodes, found {}",
            nodes.len()
        )));
    }
    Ok(KummerSurface {
        fc,
        k2,
        k1,
        k0,
        quartic,
        nodes,
        tower,
    })
}

/// The map Jac(Y) → Kum(Y) ⊂ P³ in Mumford coordinates:
/// (a₁,a₂,b₁,b₂) ↦ (1 : −a₁ : a₂ : κ₄) with
/// κ₄ = (F̃₀(−a₁,a₂) − 2(b₁²a₂ − b₁b₂a₁ + b₂²)) / (a₁² − 4a₂).
pub fn kummer_image(fc: &[Elt; 7], pt: &[Elt; 4]) -> Result<[Elt; 4]> {
    let k = pt[0].field().clone();
    let [a1, a2, b1, b2] = pt;
    let den = a1.mul(a1).sub(&k.from_i64(4).mul(a2));
    if den.is_zero() {
        return Err(Error::Degenerate("degenerate chart: a₁² = 4a₂".into()));
    }
    let corr = b1
        .mul(b1)
        .mul(a2)
        .sub(&b1.mul(b2).mul(a1))
        .add(&b2.mul(b2));
    let k4 = f0_sym(fc, &a1.neg(), a2)
        .sub(&k.from_i64(2).mul(&corr))
        .div(&den)?;
    Ok([k.one(), a1.neg(), a2.clone(), k4])
}

// ---------------------------------------------------------------------------
// The function h with φ(h) = b₁².
// ---------------------------------------------------------------------------

/// Rational function h(κ₂,κ₃,κ₄) on the Kummer surface whose pullback along
/// the Kummer image is b₁².
#[derive(Clone, Debug)]
pub struct HFunction {
    /// Numerator, polynomial in (κ₂, κ₃, κ₄).
    pub num: MPoly,
    /// Denominator, polynomial in (κ₂, κ₃, κ₄).
    pub den: MPoly,
}

impl HFunction {
    /// Evaluate at a projective Kummer point with κ₁ ≠ 0.
    pub fn eval(&self, kappa: &[Elt; 4]) -> Result<Elt> {
        if kappa[0].is_zero() {
            return Err(Error::Degenerate("h undefined on the plane κ₁ = 0".into()));
        }
        let inv = kappa[0].inv()?;
        let xs = vec![
            kappa[1].mul(&inv),
            kappa[2].mul(&inv),
            kappa[3].mul(&inv),
        ];
        let d = self.den.eval(&xs)?;
        if d.is_zero() {
            return Err(Error::Degenerate("h has a pole at the given point".into()));
        }
        self.num.eval(&xs)?.div(&d)
    }
}

/// Split a Mumford-model polynomial g into (s, p, q, r) with
/// g = s + p·b₁² + q·b₁b₂ + r·b₂², each a polynomial in (a₁, a₂) re-expressed
/// in (κ₂, κ₃) = (−a₁, a₂) inside a 3-variable ring (κ₂, κ₃, κ₄).
fn split_b_parts(g: &MPoly) -> Result<[MPoly; 4]> {
    let k = g.field().clone();
    let mut parts = [
        MPoly::zero(&k, 3),
        MPoly::zero(&k, 3),
        MPoly::zero(&k, 3),
        MPoly::zero(&k, 3),
    ];
    for (e, c) in g.terms() {
        let slot = match (e[B1], e[B2]) {
            (0, 0) => 0,
            (2, 0) => 1,
            (1, 1) => 2,
            (0, 2) => 3,
            _ => {
                return Err(Error::Degenerate(
                    "unexpected b-monomial in the Jacobian model".into(),
                ))
            }
        };
        // a₁ = −κ₂ contributes a sign per power of a₁
        let sign = if e[A1] % 2 == 1 { c.neg() } else { c.clone() };
        parts[slot] = parts[slot].add(&MPoly::monomial(&k, vec![e[A1], e[A2], 0], sign));
    }
    Ok(parts)
}

pub fn h_function(model: &JacobianModel) -> Result<HFunction> {
    let k = model.f.field().clone();
    let [s1, p1, q1, r1] = split_b_parts(&model.g1)?;
    let [s2, p2, q2, r2] = split_b_parts(&model.g2)?;
    // Solve q_i·(b₁b₂) + r_i·(b₂²) = −s_i − p_i·b₁² by Cramer's rule:
    //   b₁b₂ = α₁ + α₂·b₁²,  b₂² = β₁ + β₂·b₁²,  over k(a₁,a₂)·Δ
    let delta = q1.mul(&r2).sub(&q2.mul(&r1));
    if delta.is_zero() {
        return Err(Error::Degenerate("singular linear system for h".into()));
    }
    let alpha1 = s2.mul(&r1).sub(&s1.mul(&r2));
    let alpha2 = p2.mul(&r1).sub(&p1.mul(&r2));
    let beta1 = q2.mul(&s1).sub(&q1.mul(&s2));
    let beta2 = q2.mul(&p1).sub(&q1.mul(&p2));
    // κ₄(κ₂² − 4κ₃) = F̃₀(κ₂,κ₃) − 2(b₁²κ₃ + b₁b₂κ₂ + b₂²) on the surface;
    // substituting the two linear relations and solving for b₁² gives h.
    let two = k.from_i64(2);
    let kap2 = MPoly::var(&k, 3, 0);
    let kap3 = MPoly::var(&k, 3, 1);
    let kap4 = MPoly::var(&k, 3, 2);
    let f0t = {
        // F̃₀(κ₂, κ₃) as a polynomial
        let f = &model.fc;
        let p = &kap3;
        let s = &kap2;
        MPoly::constant(&k, 3, &two.mul(&f[0]))
            .add(&s.scale(&f[1]))
            .add(&p.scale(&two.mul(&f[2])))
            .add(&s.mul(p).scale(&f[3]))
            .add(&p.mul(p).scale(&two.mul(&f[4])))
            .add(&s.mul(&p.mul(p)).scale(&f[5]))
            .add(&p.mul(p).mul(p).scale(&two.mul(&f[6])))
    };
    let lead = kap4
        .mul(&kap2.mul(&kap2).sub(&kap3.scale(&k.from_i64(4))))
        .sub(&f0t);
    let num = lead
        .mul(&delta)
        .add(&kap2.mul(&alpha1).scale(&two))
        .add(&beta1.scale(&two));
    let den = kap3
        .mul(&delta)
        .scale(&two.neg())
        .sub(&kap2.mul(&alpha2).scale(&two))
        .sub(&beta2.scale(&two));
    if den.is_zero() {
        return Err(Error::Degenerate("vanishing denominator for h".into()));
    }
    Ok(HFunction { num, den })
}

// ---------------------------------------------------------------------------
// Plane sections through two nodes.
// ---------------------------------------------------------------------------

/// The pencil of planes through two chosen nodes of the Kummer surface.
#[derive(Clone, Debug)]
pub struct PlanePencil {
    /// Basis of the 2-dimensional space of linear forms vanishing at both nodes.
    pub l1: [Elt; 4],
    /// Second basis form.
    pub l2: [Elt; 4],
    /// Fixed lift of the first node (projection center).
    pub p1: [Elt; 4],
    /// Fixed lift of the second node.
    pub p2: [Elt; 4],
    /// The Kummer quartic in (κ₁..κ₄).
    pub quartic: MPoly,
}

/// A member of the pencil together with the section curve in an affine chart
/// in which the two nodes sit at (0,0) and (1,0).
#[derive(Clone, Debug)]
pub struct PlaneSection {
    /// Pencil parameter.
    pub lambda: Elt,
    /// The plane l1 + λ·l2.
    pub plane: [Elt; 4],
    /// The affine quartic F(x, y) cut out on the plane.
    pub curve: MPoly,
    /// Chart origin (first node).
    pub p1: [Elt; 4],
    /// Chart x-direction: second node minus first.
    pub dir: [Elt; 4],
    /// Chart y-direction, completing a basis of the plane.
    pub b: [Elt; 4],
}

impl PlaneSection {
    /// Map a chart point (x, y) to homogeneous Kummer coordinates.
    pub fn embed_chart(&self, x: &Elt, y: &Elt) -> [Elt; 4] {
        let mut out = [x.field().zero(), x.field().zero(), x.field().zero(), x.field().zero()];
        for i in 0..4 {
            out[i] = self.p1[i]
                .add(&x.mul(&self.dir[i]))
                .add(&y.mul(&self.b[i]));
        }
        out
    }
}

pub fn plane_pencil(quartic: &MPoly, p1: &[Elt; 4], p2: &[Elt; 4]) -> Result<PlanePencil> {
    let k = quartic.field().clone();
    let rows = vec![p1.to_vec(), p2.to_vec()];
    let basis = kernel_basis(&rows, &k)?;
    if basis.len() != 2 {
        return Err(Error::Degenerate("nodes do not span a line".into()));
    }
    let arr = |v: &[Elt]| -> [Elt; 4] { [v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()] };
    Ok(PlanePencil {
        l1: arr(&basis[0]),
        l2: arr(&basis[1]),
        p1: p1.clone(),
        p2: p2.clone(),
        quartic: quartic.clone(),
    })
}

impl PlanePencil {
    /// Transport the pencil along a field embedding (constants of a prime
    /// base field into an extension).
    pub fn embed_to(&self, kk: &Field) -> Result<PlanePencil> {
        let emb = |v: &[Elt; 4]| -> Result<[Elt; 4]> {
            Ok([
                kk.embed(&v[0])?,
                kk.embed(&v[1])?,
                kk.embed(&v[2])?,
                kk.embed(&v[3])?,
            ])
        };
        Ok(PlanePencil {
            l1: emb(&self.l1)?,
            l2: emb(&self.l2)?,
            p1: emb(&self.p1)?,
            p2: emb(&self.p2)?,
            quartic: {
                let mut out = MPoly::zero(kk, 4);
                for (e, c) in self.quartic.terms() {
                    out = out.add(&MPoly::monomial(kk, e.clone(), kk.embed(c)?));
                }
                out
            },
        })
    }

    /// The section at pencil parameter λ.
    pub fn section(&self, lambda: &Elt) -> Result<PlaneSection> {
        let k = lambda.field().clone();
        let mut plane = [k.zero(), k.zero(), k.zero(), k.zero()];
        for i in 0..4 {
            plane[i] = self.l1[i].add(&lambda.mul(&self.l2[i]));
        }
        if plane.iter().all(|c| c.is_zero()) {
            return Err(Error::Degenerate("zero form in the pencil".into()));
        }
        // third spanning direction of the plane, independent of the two nodes
        let candidates = kernel_basis(&[plane.to_vec()], &k)?;
        let dir: Vec<Elt> = (0..4).map(|i| self.p2[i].sub(&self.p1[i])).collect();
        let mut b = None;
        for cand in &candidates {
            let mut rows = vec![self.p1.to_vec(), dir.clone(), cand.clone()];
            if rref(&mut rows)?.len() == 3 {
                b = Some(cand.clone());
                break;
            }
        }
        let Some(b0) = b else {
            return Err(Error::Degenerate("no independent chart direction".into()));
        };
        // The section curve in the chart p1 + x·dir + y·b.  The chart's
        // vertical line through the node may be tangent to the surface (it
        // can fall into a trope); shear b by multiples of dir until the
        // slope at infinity is not a branch slope.
        let build = |b: &[Elt]| -> MPoly {
            let lin: Vec<MPoly> = (0..4)
                .map(|i| {
                    MPoly::constant(&k, 2, &self.p1[i])
                        .add(&MPoly::var(&k, 2, 0).scale(&dir[i]))
                        .add(&MPoly::var(&k, 2, 1).scale(&b[i]))
                })
                .collect();
            let mut curve = MPoly::zero(&k, 2);
            for (e, c) in self.quartic.terms() {
                let mut t = MPoly::constant(&k, 2, c);
                for (v, &p) in e.iter().enumerate() {
                    t = t.mul(&lin[v].pow(p as usize));
                }
                curve = curve.add(&t);
            }
            curve
        };
        let mut chosen = None;
        for t in 0..8i64 {
            let tt = k.from_i64(t);
            let bt: Vec<Elt> = (0..4).map(|i| b0[i].add(&tt.mul(&dir[i]))).collect();
            let curve = build(&bt);
            if curve.is_zero() {
                return Err(Error::Degenerate("plane contained in the surface".into()));
            }
            let a2 = curve.coeff(&[0, 2]);
            let a3 = curve.coeff(&[0, 3]);
            let a4 = curve.coeff(&[0, 4]);
            let disc_inf = a3.mul(&a3).sub(&k.from_i64(4).mul(&a2).mul(&a4));
            if !disc_inf.is_zero() {
                chosen = Some((bt, curve));
                break;
            }
        }
        let Some((b, curve)) = chosen else {
            return Err(Error::Degenerate(
                "no chart with a non-branch slope at infinity".into(),
            ));
        };
        // both nodes double on the line y = 0: F(x,0) = c·x²(x−1)²
        let on_axis = curve.eval_var(1, &k.zero())?.to_univariate(0)?;
        let c = on_axis.coeff(4);
        let model = Poly::from_i64(&k, &[0, 0, 1, -2, 1]).scale(&c);
        if c.is_zero() || on_axis != model {
            return Err(Error::Degenerate(
                "section does not meet the node axis as expected".into(),
            ));
        }
        Ok(PlaneSection {
            lambda: lambda.clone(),
            plane,
            curve,
            p1: self.p1.clone(),
            dir: {
                let d: Vec<Elt> = dir.to_vec();
                [d[0].clone(), d[1].clone(), d[2].clone(), d[3].clone()]
            },
            b: [b[0].clone(), b[1].clone(), b[2].clone(), b[3].clone()],
        })
    }
}

// ---------------------------------------------------------------------------
// Branch slopes and the j-invariant of the normalized section.
// ---------------------------------------------------------------------------

/// The slope double-cover data of a section, seen from the node at the chart
/// origin: residual quadratic q₂x² + q₁x + q₀ (coefficients in k[μ]),
/// discriminant decomposition D = c·s·r² with s the monic squarefree quartic
/// of branch slopes, and the j-invariant of the double cover w² = s(μ).
#[derive(Clone, Debug)]
pub struct SlopeCoverData {
    /// Residual-quadratic coefficients in the slope variable μ.
    pub q0: Poly,
    /// Coefficient of x.
    pub q1: Poly,
    /// Coefficient of x².
    pub q2: Poly,
    /// Monic squarefree quartic whose roots are the four branch slopes.
    pub s: Poly,
    /// Constant in D = c·s·r².
    pub c: Elt,
    /// Square part of the discriminant.
    pub r: Poly,
    /// j-invariant of w² = s(μ).
    pub j: Elt,
}

/// j-invariant of a separable binary quartic (branch locus of a genus-1
/// double cover), normalized as 256(c²−c+1)³/(c²(c−1)²) in the cross ratio c.
pub fn quartic_j(q: &BinaryForm, rng: &mut ChaCha8Rng) -> Result<Elt> {
    let k = q.field().clone();
    if k.characteristic() >= 5 {
        let inv = verifier::binary_quartic_ij(q)?;
        let four = k.from_i64(4);
        let i3 = inv.i.mul(&inv.i).mul(&inv.i).mul(&four);
        let den = i3.sub(&inv.j.mul(&inv.j));
        if den.is_zero() {
            return Err(Error::Degenerate("degenerate j-invariant (4I³ = J²)".into()));
        }
        return k.from_i64(1728).mul(&i3).div(&den);
    }
    // characteristic 3: compute the cross ratio of the four branch points
    let p = q.to_poly();
    let (tower, mut roots) = splitting_tower(&p, rng)?;
    let kk = tower.field().clone();
    let mut pts: Vec<ProjPoint> = roots
        .drain(..)
        .map(ProjPoint::affine)
        .collect();
    for _ in p.deg()..4 {
        pts.push(ProjPoint::infinity(&kk));
    }
    if pts.len() != 4 {
        return Err(Error::Degenerate("quartic with fewer than 4 branch points".into()));
    }
    let c = cross_ratio(&[pts[0].clone(), pts[1].clone(), pts[2].clone(), pts[3].clone()])?;
    let j = j_of_cross_ratio(&c)?;
    tower
        .descend(&j)
        .ok_or_else(|| Error::Degenerate("j-invariant failed to descend".into()))
}

/// Cross ratio (x₃−x₁)(x₄−x₂)/((x₃−x₂)(x₄−x₁)) of four projective points.
pub fn cross_ratio(pts: &[ProjPoint; 4]) -> Result<Elt> {
    let d = |u: &ProjPoint, v: &ProjPoint| u.0.mul(&v.1).sub(&v.0.mul(&u.1));
    let num = d(&pts[2], &pts[0]).mul(&d(&pts[3], &pts[1]));
    let den = d(&pts[2], &pts[1]).mul(&d(&pts[3], &pts[0]));
    if den.is_zero() {
        return Err(Error::Degenerate("coincident points in cross ratio".into()));
    }
    num.div(&den)
}

/// j = 256(c²−c+1)³/(c²(c−1)²).
pub fn j_of_cross_ratio(c: &Elt) -> Result<Elt> {
    let k = c.field().clone();
    let one = k.one();
    let num = c.mul(c).sub(c).add(&one);
    let num3 = num.mul(&num).mul(&num).mul(&k.from_i64(256));
    let den = c.mul(c).mul(&c.sub(&one)).mul(&c.sub(&one));
    if den.is_zero() {
        return Err(Error::Degenerate("harmonic degenerate cross ratio".into()));
    }
    num3.div(&den)
}

/// j-invariant of a genus-1 curve y² = p(x), deg p ∈ {3, 4}.
pub fn genus1_j(p_x: &Poly, rng: &mut ChaCha8Rng) -> Result<Elt> {
    if p_x.deg() != 3 && p_x.deg() != 4 {
        return Err(Error::InvalidInput("genus-1 model must have degree 3 or 4".into()));
    }
    if !p_x.is_separable()? {
        return Err(Error::Inseparable("genus-1 model must be separable".into()));
    }
    quartic_j(&BinaryForm::from_poly(p_x, 4)?, rng)
}

pub fn branch_slopes(sec: &PlaneSection, rng: &mut ChaCha8Rng) -> Result<SlopeCoverData> {
    let k = sec.lambda.field().clone();
    // F(x, μx) = Σ_k x^k c_k(μ): collect c_k
    let mut cs: Vec<Vec<Elt>> = vec![vec![k.zero(); 5]; 5];
    for (e, c) in sec.curve.terms() {
        let (a, b) = (e[0] as usize, e[1] as usize);
        if a + b > 4 {
            return Err(Error::Degenerate("section of degree exceeding 4".into()));
        }
        cs[a + b][b] = cs[a + b][b].add(c);
    }
    let c_poly: Vec<Poly> = cs.iter().map(|v| Poly::new(&k, v.clone())).collect();
    if !c_poly[0].is_zero() || !c_poly[1].is_zero() {
        return Err(Error::Degenerate("chart origin is not a node".into()));
    }
    let (q0, q1, q2) = (c_poly[2].clone(), c_poly[3].clone(), c_poly[4].clone());
    let d = q1.mul(&q1).sub(&q2.mul(&q0).scale(&k.from_i64(4)));
    if d.is_zero() {
        return Err(Error::Degenerate("identically vanishing slope discriminant".into()));
    }
    // odd/even multiplicity split: D = c·s·r² with s monic squarefree
    let fac = factor::factor(&d, rng)?;
    let mut s = Poly::one(&k);
    let mut r = Poly::one(&k);
    for (g, m) in &fac.factors {
        if m % 2 == 1 {
            s = s.mul(g);
        }
        for _ in 0..(m / 2) {
            r = r.mul(g);
        }
    }
    let c = fac.unit.clone();
    if s.deg() != 4 {
        return Err(Error::Degenerate(format!(
            "expected 4 branch slopes, discriminant odd part has degree {}",
            s.deg()
        )));
    }
    if s.eval(&k.zero()).is_zero() {
        return Err(Error::Degenerate(
            "branch slope collides with the line through the second node".into(),
        ));
    }
    let j = quartic_j(&BinaryForm::from_poly(&s, 4)?, rng)?;
    Ok(SlopeCoverData { q0, q1, q2, s, c, r, j })
}

// ---------------------------------------------------------------------------
// λ-matching by rational interpolation.
// ---------------------------------------------------------------------------

/// j(λ) of the pencil as a rational function of degree ≤ (12, 12), by exact
/// interpolation from sampled nondegenerate sections.  Returns (num, den)
/// over the pencil's base field.
pub fn interpolate_pencil_j(pencil: &PlanePencil, rng: &mut ChaCha8Rng) -> Result<(Poly, Poly)> {
    let base = pencil.quartic.field().clone();
    let q = base
        .order()
        .ok_or_else(|| Error::InvalidInput("pencil must live over a finite field".into()))?;
    // sample over an extension when the base field is too small
    let (kk, pen) = if q < 45u64.into() {
        let p = base.characteristic();
        if base.degree() != 1 {
            return Err(Error::TowerUnsupported(
                "small non-prime base fields are not supported for interpolation".into(),
            ));
        }
        let mut e = 2;
        let mut size = p * p;
        while size < 45 {
            e += 1;
            size *= p;
        }
        let kk = factor::extension_field(p, e, rng)?;
        let pen = pencil.embed_to(&kk)?;
        (kk, pen)
    } else {
        (base.clone(), pencil.clone())
    };
    let mut samples: Vec<(Elt, Elt)> = vec![];
    let mut tried = 0;
    while samples.len() < 32 && tried < 4000 {
        tried += 1;
        let lam = kk.random(rng);
        if samples.iter().any(|(l, _)| l == &lam) {
            continue;
        }
        let Ok(sec) = pen.section(&lam) else { continue };
        let Ok(data) = branch_slopes(&sec, rng) else { continue };
        samples.push((lam, data.j));
    }
    if samples.len() < 32 {
        return Err(Error::Degenerate("not enough nondegenerate sections to sample".into()));
    }
    // kernel of Σ nᵢλⁱ − j·Σ dᵢλⁱ = 0 over the samples
    let mut rows = vec![];
    for (lam, j) in &samples {
        let mut row = vec![];
        let mut pw = kk.one();
        for _ in 0..=12 {
            row.push(pw.clone());
            pw = pw.mul(lam);
        }
        let mut pw = j.neg();
        for _ in 0..=12 {
            row.push(pw.clone());
            pw = pw.mul(lam);
        }
        rows.push(row);
    }
    let kernel = kernel_basis(&rows, &kk)?;
    let Some(v) = kernel.first() else {
        return Err(Error::Degenerate(
            "j(λ) does not satisfy the degree-(12,12) bound".into(),
        ));
    };
    // verify the fit at fresh sample points
    let num_k = Poly::new(&kk, v[..13].to_vec());
    let den_k = Poly::new(&kk, v[13..].to_vec());
    if den_k.is_zero() {
        return Err(Error::Degenerate("vanishing interpolated denominator".into()));
    }
    let mut fresh = 0;
    let mut tried = 0;
    while fresh < 6 && tried < 4000 {
        tried += 1;
        let lam = kk.random(rng);
        if samples.iter().any(|(l, _)| l == &lam) {
            continue;
        }
        let Ok(sec) = pen.section(&lam) else { continue };
        let Ok(data) = branch_slopes(&sec, rng) else { continue };
        let dv = den_k.eval(&lam);
        if dv.is_zero() {
            continue;
        }
        if num_k.eval(&lam).div(&dv)? != data.j {
            return Err(Error::VerificationFailed(
                "interpolated j(λ) fails at a fresh sample".into(),
            ));
        }
        fresh += 1;
    }
    // the function is defined over the base field: descend coefficientwise
    let descend_poly = |p: &Poly| -> Result<Poly> {
        let cs: Vec<Elt> = p
            .coeffs()
            .iter()
            .map(|c| {
                kk.descend(c).ok_or_else(|| {
                    Error::VerificationFailed("interpolated j(λ) is not base-rational".into())
                })
            })
            .collect::<Result<_>>()?;
        Ok(Poly::new(&base, cs))
    };
    if kk == base {
        Ok((num_k, den_k))
    } else {
        Ok((descend_poly(&num_k)?, descend_poly(&den_k)?))
    }
}

/// All λ in the base field whose section has j-invariant `j_target`
/// (each candidate re-verified exactly).
pub fn match_lambda(pencil: &PlanePencil, j_target: &Elt, rng: &mut ChaCha8Rng) -> Result<Vec<Elt>> {
    let (num, den) = interpolate_pencil_j(pencil, rng)?;
    let poly = num.sub(&den.scale(j_target));
    if poly.is_zero() {
        return Err(Error::Degenerate("identically matching pencil".into()));
    }
    let mut out = vec![];
    for lam in factor::roots(&poly, rng)? {
        if out.contains(&lam) {
            continue;
        }
        let Ok(sec) = pencil.section(&lam) else { continue };
        let Ok(data) = branch_slopes(&sec, rng) else { continue };
        if &data.j == j_target {
            out.push(lam);
        }
    }
    out.sort();
    Ok(out)
}

// ---------------------------------------------------------------------------
// The datum-selected second node and datum matching.
// ---------------------------------------------------------------------------

/// The node of the Kummer surface cut out by the datum's 2-torsion factor
/// q_Y: for q_Y = (x−δ₅)(x−δ₆) the node
/// (1 : δ₅+δ₆ : δ₅δ₆ : F₀(δ₅,δ₆)/(δ₅−δ₆)²), computed symmetrically so it
/// lives over the base field even when the δᵢ do not; for 𝒯 = {δ, ∞}
/// (degree-5 model) the node (0 : 1 : δ : f₅δ² + 2f₆δ³).
pub fn datum_node(fc: &[Elt; 7], q_y: &Poly, t_includes_infinity: bool) -> Result<[Elt; 4]> {
    let k = q_y.field().clone();
    if t_includes_infinity {
        if q_y.deg() != 1 {
            return Err(Error::InvalidInput("𝒯 ∋ ∞ requires a linear q_Y".into()));
        }
        let q = q_y.monic()?;
        let delta = q.coeff(0).neg();
        let d2 = delta.mul(&delta);
        let kap4 = fc[5]
            .mul(&d2)
            .add(&k.from_i64(2).mul(&fc[6]).mul(&d2).mul(&delta));
        return Ok([k.zero(), k.one(), delta, kap4]);
    }
    if q_y.deg() != 2 {
        return Err(Error::InvalidInput("q_Y must be quadratic".into()));
    }
    let q = q_y.monic()?;
    let s = q.coeff(1).neg();
    let p = q.coeff(0);
    let disc = s.mul(&s).sub(&k.from_i64(4).mul(&p));
    if disc.is_zero() {
        return Err(Error::Inseparable("q_Y has a double root".into()));
    }
    let kap4 = f0_sym(fc, &s, &p).div(&disc)?;
    Ok([k.one(), s, p, kap4])
}

fn embed_point4(p: &[Elt; 4], tower: &Tower) -> Result<[Elt; 4]> {
    Ok([
        tower.embed(&p[0])?,
        tower.embed(&p[1])?,
        tower.embed(&p[2])?,
        tower.embed(&p[3])?,
    ])
}

fn embed_mpoly(m: &MPoly, tower: &Tower) -> Result<MPoly> {
    let kk = tower.field();
    let mut out = MPoly::zero(kk, m.nvars());
    for (e, c) in m.terms() {
        out = out.add(&MPoly::monomial(kk, e.clone(), tower.embed(c)?));
    }
    Ok(out)
}

/// Decide whether the section's branch-slope configuration realizes the given
/// gluing datum.  Each of the four tangency points from the projection center
/// lies on exactly one of the six tropes β²κ₁ − βκ₂ + κ₃ = 0 with β a root of
/// r_Y (the two tropes of the q_Y roots pass through the second node
/// instead), which labels the slopes by roots of r_Y; the datum matches iff
/// the labeled slopes and the branch points of X have equal cross ratios
/// under the datum's resolvent alignment.  Klein relabelings act by double
/// transpositions, which fix the cross ratio, so the test is well defined.
pub fn datum_match(
    sec: &PlaneSection,
    data: &SlopeCoverData,
    p_x: &Poly,
    d: &GluingDatum,
    rng: &mut ChaCha8Rng,
) -> Result<bool> {
    let (tower, alphas, betas, extra) =
        gluer::aligned_labels_with(p_x, d, std::slice::from_ref(&data.s), rng)?;
    let slopes = &extra[0];
    if slopes.len() != 4 {
        return Err(Error::Degenerate("branch-slope quartic failed to split".into()));
    }
    let kk = tower.field().clone();
    let q1 = tower.embed_poly(&data.q1)?;
    let q2 = tower.embed_poly(&data.q2)?;
    let p1 = embed_point4(&sec.p1, &tower)?;
    let dir = embed_point4(&sec.dir, &tower)?;
    let bvec = embed_point4(&sec.b, &tower)?;
    let two = kk.from_i64(2);
    let mut ordered: Vec<Option<ProjPoint>> = vec![None; 4];
    for mu in slopes {
        let q2v = q2.eval(mu);
        if q2v.is_zero() {
            return Err(Error::Degenerate("branch tangency point at infinity".into()));
        }
        let x = q1.eval(mu).neg().div(&two.mul(&q2v))?;
        let y = mu.mul(&x);
        let mut kap = [kk.zero(), kk.zero(), kk.zero(), kk.zero()];
        for i in 0..4 {
            kap[i] = p1[i].add(&x.mul(&dir[i])).add(&y.mul(&bvec[i]));
        }
        let mut hits = vec![];
        for (j, beta) in betas.iter().enumerate() {
            // homogeneous trope form β₀²κ₁ − β₀β₁κ₂ + β₁²κ₃ at (β₀ : β₁)
            let v = beta
                .0
                .mul(&beta.0)
                .mul(&kap[0])
                .sub(&beta.0.mul(&beta.1).mul(&kap[1]))
                .add(&beta.1.mul(&beta.1).mul(&kap[2]));
            if v.is_zero() {
                hits.push(j);
            }
        }
        if hits.len() != 1 || ordered[hits[0]].is_some() {
            return Err(Error::Degenerate(
                "tangency points are not uniquely labeled by tropes".into(),
            ));
        }
        ordered[hits[0]] = Some(ProjPoint::affine(mu.clone()));
    }
    let pts: Vec<ProjPoint> = ordered.into_iter().map(|o| o.unwrap()).collect();
    let cr_s = cross_ratio(&[pts[0].clone(), pts[1].clone(), pts[2].clone(), pts[3].clone()])?;
    let cr_a = cross_ratio(&[
        alphas[0].clone(),
        alphas[1].clone(),
        alphas[2].clone(),
        alphas[3].clone(),
    ])?;
    Ok(cr_s == cr_a)
}

// ---------------------------------------------------------------------------
// Chord–tangent group law on a cubic model (divisor-class oracle).
// ---------------------------------------------------------------------------

/// y² = x³ + ax² + bx + c with the chord–tangent group law; `None` is the
/// point at infinity.
#[derive(Clone, Debug)]
pub struct EllipticCubic {
    pub a: Elt,
    pub b: Elt,
    pub c: Elt,
}

pub type EcPoint = Option<(Elt, Elt)>;

impl EllipticCubic {
    pub fn contains(&self, p: &EcPoint) -> bool {
        match p {
            None => true,
            Some((x, y)) => {
                let rhs = x
                    .mul(x)
                    .mul(x)
                    .add(&self.a.mul(x).mul(x))
                    .add(&self.b.mul(x))
                    .add(&self.c);
                y.mul(y) == rhs
            }
        }
    }

    pub fn neg(&self, p: &EcPoint) -> EcPoint {
        p.as_ref().map(|(x, y)| (x.clone(), y.neg()))
    }

    pub fn add(&self, p: &EcPoint, q: &EcPoint) -> Result<EcPoint> {
        let (x1, y1) = match p {
            None => return Ok(q.clone()),
            Some(v) => v.clone(),
        };
        let (x2, y2) = match q {
            None => return Ok(p.clone()),
            Some(v) => v.clone(),
        };
        let f = x1.field().clone();
        let lam = if x1 == x2 {
            if y1 == y2.neg() {
                return Ok(None);
            }
            // tangent slope (3x² + 2ax + b)/(2y)
            let num = f
                .from_i64(3)
                .mul(&x1)
                .mul(&x1)
                .add(&f.from_i64(2).mul(&self.a).mul(&x1))
                .add(&self.b);
            num.div(&f.from_i64(2).mul(&y1))?
        } else {
            y2.sub(&y1).div(&x2.sub(&x1))?
        };
        let x3 = lam.mul(&lam).sub(&self.a).sub(&x1).sub(&x2);
        let y3 = lam.mul(&x1.sub(&x3)).sub(&y1);
        Ok(Some((x3, y3)))
    }
}

/// Möbius normalization of w² = g(μ) (deg g = 4) sending the Weierstrass
/// point over a chosen simple root to infinity: with g(root + t) =
/// g₁t + g₂t² + g₃t³ + g₄t⁴, the substitution ξ = 1/(μ−root), X = g₁ξ,
/// Y = g₁wξ² gives Y² = X³ + g₂X² + g₁g₃X + g₁²g₄.
#[derive(Clone, Debug)]
pub struct CubicModel {
    pub e: EllipticCubic,
    pub root: Elt,
    g1: Elt,
}

pub fn cubic_model(g: &Poly, root: &Elt) -> Result<CubicModel> {
    let k = g.field().clone();
    if g.deg() != 4 {
        return Err(Error::InvalidInput("cubic model requires a quartic input".into()));
    }
    let shift = Poly::new(&k, vec![root.clone(), k.one()]);
    let sh = g.compose(&shift);
    if !sh.coeff(0).is_zero() {
        return Err(Error::InvalidInput("chosen point is not a root".into()));
    }
    let g1 = sh.coeff(1);
    if g1.is_zero() {
        return Err(Error::Inseparable("chosen root is a double root".into()));
    }
    let (g2, g3, g4) = (sh.coeff(2), sh.coeff(3), sh.coeff(4));
    let e = EllipticCubic {
        a: g2,
        b: g1.mul(&g3),
        c: g1.mul(&g1).mul(&g4),
    };
    Ok(CubicModel { e, root: root.clone(), g1 })
}

impl CubicModel {
    /// Image of an affine point (μ, w) of the quartic model.
    pub fn map(&self, mu: &Elt, w: &Elt) -> Result<EcPoint> {
        if mu == &self.root {
            return Ok(None);
        }
        let xi = mu.sub(&self.root).inv()?;
        let x = self.g1.mul(&xi);
        let y = self.g1.mul(w).mul(&xi).mul(&xi);
        Ok(Some((x, y)))
    }

    /// Image of a point at infinity of the quartic model: wlead is a square
    /// root of the leading coefficient, with sign selecting the sheet.
    pub fn map_infinity(&self, wlead: &Elt) -> EcPoint {
        Some((self.root.field().zero(), self.g1.mul(wlead)))
    }
}

// ---------------------------------------------------------------------------
// The four degree-2 covers of the normalized section.
// ---------------------------------------------------------------------------

/// A formal sum of points on the cubic model of the slope cover (`None` is
/// the origin at infinity).
#[derive(Clone, Debug)]
pub struct EllipticDivisor {
    pub points: Vec<(EcPoint, i64)>,
}

impl EllipticDivisor {
    pub fn degree(&self) -> i64 {
        self.points.iter().map(|(_, m)| m).sum()
    }
}

/// x³ + ax² + bx + c evaluated at x.
fn cubic_rhs(e: &EllipticCubic, x: &Elt) -> Elt {
    x.mul(x)
        .mul(x)
        .add(&e.a.mul(x).mul(x))
        .add(&e.b.mul(x))
        .add(&e.c)
}

/// The x-coordinates of points W with 2W = S on y² = x³ + ax² + bx + c are
/// the roots of (3x² + 2ax + b)² − 4(x_S + a + 2x)(x³ + ax² + bx + c)
/// (duplication formula; always of degree 4).
fn division_quartic(e: &EllipticCubic, xs: &Elt) -> Poly {
    let k = xs.field().clone();
    let tang = Poly::new(
        &k,
        vec![e.b.clone(), k.from_i64(2).mul(&e.a), k.from_i64(3)],
    );
    let cubic = Poly::new(&k, vec![e.c.clone(), e.b.clone(), e.a.clone(), k.one()]);
    let lin = Poly::new(&k, vec![xs.add(&e.a), k.from_i64(2)]);
    tang.mul(&tang).sub(&lin.mul(&cubic).scale(&k.from_i64(4)))
}

/// All points W rational over the current field with 2W = S (group-law
/// halving).  For S = O these are the rational 2-torsion points (always at
/// least the origin); otherwise the rational roots of the division quartic
/// whose y-coordinate exists and which actually double to S (the quartic
/// also picks up the halves of −S).
fn halve_point(e: &EllipticCubic, s: &EcPoint, rng: &mut ChaCha8Rng) -> Result<Vec<EcPoint>> {
    let mut out: Vec<EcPoint> = vec![];
    match s {
        None => {
            let k = e.a.field().clone();
            out.push(None);
            let cubic = Poly::new(&k, vec![e.c.clone(), e.b.clone(), e.a.clone(), k.one()]);
            for x in factor::roots(&cubic, rng)? {
                out.push(Some((x, k.zero())));
            }
        }
        Some((xs, _)) => {
            let dq = division_quartic(e, xs).squarefree_part()?;
            for xw in factor::roots(&dq, rng)? {
                let rhs = cubic_rhs(e, &xw);
                let Some(y) = factor::sqrt_in_field(&rhs, rng)? else { continue };
                for yc in [y.clone(), y.neg()] {
                    let w: EcPoint = Some((xw.clone(), yc));
                    if &e.add(&w, &w)? == s && !out.contains(&w) {
                        out.push(w);
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Evaluate at a finite point the line through p and q: the chord, the
/// tangent when p = q, the vertical when the points are opposite or one is
/// the origin, and the constant 1 when both are the origin.  Together with
/// `vert_eval` these are the Miller-style building blocks for evaluating
/// functions with prescribed divisors.
fn line_eval(e: &EllipticCubic, p: &EcPoint, q: &EcPoint, at: &(Elt, Elt)) -> Result<Elt> {
    let (x1, y1) = match p {
        None => {
            return Ok(match q {
                None => at.0.field().one(),
                Some((xq, _)) => at.0.sub(xq),
            })
        }
        Some(v) => v.clone(),
    };
    let (x2, y2) = match q {
        None => return Ok(at.0.sub(&x1)),
        Some(v) => v.clone(),
    };
    let f = x1.field().clone();
    if x1 == x2 && y1 == y2.neg() {
        return Ok(at.0.sub(&x1));
    }
    let lam = if x1 == x2 {
        let num = f
            .from_i64(3)
            .mul(&x1)
            .mul(&x1)
            .add(&f.from_i64(2).mul(&e.a).mul(&x1))
            .add(&e.b);
        num.div(&f.from_i64(2).mul(&y1))?
    } else {
        y2.sub(&y1).div(&x2.sub(&x1))?
    };
    Ok(at.1.sub(&y1).sub(&lam.mul(&at.0.sub(&x1))))
}

/// Evaluate the vertical line through q (the constant 1 for the origin).
fn vert_eval(q: &EcPoint, at: &(Elt, Elt)) -> Elt {
    match q {
        None => at.0.field().one(),
        Some((xq, _)) => at.0.sub(xq),
    }
}

/// Product of two truncated power series to order n.
fn series_mul(a: &[Elt], b: &[Elt], n: usize, k: &Field) -> Vec<Elt> {
    let mut out = vec![k.zero(); n];
    for i in 0..a.len().min(n) {
        for j in 0..b.len().min(n - i) {
            out[i + j] = out[i + j].add(&a[i].mul(&b[j]));
        }
    }
    out
}

/// First n coefficients of the branch of √d(μ₀ + t) with value w₀ ≠ 0 at
/// t = 0, by the direct square-root recurrence (valid in any odd
/// characteristic, unlike repeated differentiation).
fn sqrt_series(d: &Poly, mu0: &Elt, w0: &Elt, n: usize) -> Result<Vec<Elt>> {
    let k = mu0.field().clone();
    let shift = Poly::new(&k, vec![mu0.clone(), k.one()]);
    let dd = d.compose(&shift);
    let mut w = vec![w0.clone()];
    let inv2w0 = k.from_i64(2).mul(w0).inv()?;
    for m in 1..n {
        let mut s = dd.coeff(m);
        for i in 1..m {
            s = s.sub(&w[i].mul(&w[m - i]));
        }
        w.push(s.mul(&inv2w0));
    }
    Ok(w)
}

/// Linear conditions on the coefficients (a₀..a_da, b₀..b_db) forcing
/// a(μ) + b(μ)·w to vanish to the given order at the point (μ₀, w₀) of
/// w² = d(μ): one row per series coefficient.
fn vanishing_rows(
    d: &Poly,
    mu0: &Elt,
    w0: &Elt,
    order: usize,
    da: usize,
    db: usize,
) -> Result<Vec<Vec<Elt>>> {
    let k = mu0.field().clone();
    let lin = vec![mu0.clone(), k.one()];
    let mut pw: Vec<Vec<Elt>> = vec![vec![k.one()]];
    for j in 1..=da.max(db) {
        let prev = pw[j - 1].clone();
        pw.push(series_mul(&prev, &lin, order, &k));
    }
    let ws = sqrt_series(d, mu0, w0, order)?;
    let mut rows = vec![vec![k.zero(); da + db + 2]; order];
    for j in 0..=da {
        for r in 0..order {
            rows[r][j] = pw[j].get(r).cloned().unwrap_or_else(|| k.zero());
        }
    }
    for j in 0..=db {
        let prod = series_mul(&pw[j], &ws, order, &k);
        for r in 0..order {
            rows[r][da + 1 + j] = prod[r].clone();
        }
    }
    Ok(rows)
}

/// Scaffold for the cover construction on one section: the genus-1 curve
/// C: w² = c·s(μ) (the discriminant constant absorbed into the model), the
/// four Weierstrass slopes, the node preimages Q₁, Q₂ (over the tangent
/// slopes at the projection center) and R₁, R₂ (over μ = 0, the slope of the
/// second node), a cubic group-law model, and the halved divisor classes:
/// the class B of the four node preimages is divided by 2 in the Jacobian,
/// giving for each solution W the degree-2 cover of class E = (W) + (O).
/// Everything lives in a splitting field K of the relevant data, reached
/// through a chain of towers (slope data first, then — only when the halving
/// needs it — the division quartic and a square root for its y-coordinate).
#[derive(Clone, Debug)]
pub struct CoverScaffold {
    /// Towers from the section's base field up to the construction field;
    /// each tower's base is the previous tower's extension field.
    pub chain: Vec<Tower>,
    /// Defining quartic of C (leading coefficient the discriminant constant).
    pub cpoly: Poly,
    /// The four branch slopes (Weierstrass μ-values) in K.
    pub slopes: Vec<Elt>,
    /// Q₁, Q₂, R₁, R₂.
    pub ram: [(Elt, Elt); 4],
    /// Cubic model of C with origin the Weierstrass point over slopes[0].
    pub cm: CubicModel,
    /// Images of the ramification points on the cubic model (all finite).
    pub b: [EcPoint; 4],
    /// Their group-law sum S.
    pub s_sum: EcPoint,
    /// The K-rational points W with 2W = S; one per K-rational cover class.
    pub halves: Vec<EcPoint>,
    /// Defining quartic of C over the section's base field.
    cpoly_base: Poly,
    q1: Poly,
    q2: Poly,
    r: Poly,
    chart: [[Elt; 4]; 3],
}

/// Build the cover scaffold for a nondegenerate section: the divisor class
/// of the node preimages is halved in the group law, extending the field
/// when no half is rational over the slope splitting field.
pub fn four_covers(
    sec: &PlaneSection,
    data: &SlopeCoverData,
    rng: &mut ChaCha8Rng,
) -> Result<CoverScaffold> {
    let k = sec.lambda.field().clone();
    if data.q0.deg() != 2 {
        return Err(Error::Degenerate("node tangent slope at infinity".into()));
    }
    if !data.q0.is_separable()? {
        return Err(Error::Degenerate("coincident node tangents".into()));
    }
    let cs0 = data.c.mul(&data.s.eval(&k.zero()));
    if cs0.is_zero() {
        return Err(Error::Degenerate("branch slope through the second node".into()));
    }
    let aux = Poly::new(&k, vec![cs0.neg(), k.zero(), k.one()]);
    let (tower, roots) =
        common_splitting_tower(&[data.s.clone(), data.q0.clone(), aux], rng)?;
    let kk = tower.field().clone();
    let slopes = roots[0].clone();
    let qmus = &roots[1];
    let w0 = roots[2][0].clone();
    if slopes.len() != 4 || qmus.len() != 2 {
        return Err(Error::Degenerate("slope data failed to split".into()));
    }
    let s_emb = tower.embed_poly(&data.s)?;
    let cpoly = s_emb.scale(&tower.embed(&data.c)?);
    let q1 = tower.embed_poly(&data.q1)?;
    let q2 = tower.embed_poly(&data.q2)?;
    let r = tower.embed_poly(&data.r)?;
    let mut ram_v = vec![];
    for mu in qmus {
        let rv = r.eval(mu);
        if rv.is_zero() {
            return Err(Error::Degenerate("node preimage on the branch locus".into()));
        }
        let w = q1.eval(mu).div(&rv)?;
        if w.is_zero() {
            return Err(Error::Degenerate("node preimage is a Weierstrass point".into()));
        }
        debug_assert_eq!(w.mul(&w), cpoly.eval(mu));
        ram_v.push((mu.clone(), w));
    }
    ram_v.push((kk.zero(), w0.clone()));
    ram_v.push((kk.zero(), w0.neg()));
    for i in 0..4 {
        for j in (i + 1)..4 {
            if ram_v[i] == ram_v[j] {
                return Err(Error::Degenerate("coincident ramification points".into()));
            }
        }
    }
    let chart = [
        embed_point4(&sec.p1, &tower)?,
        embed_point4(&sec.dir, &tower)?,
        embed_point4(&sec.b, &tower)?,
    ];
    let cm = cubic_model(&cpoly, &slopes[0])?;
    let mut b_v = vec![];
    for (mu, w) in &ram_v {
        let p = cm.map(mu, w)?;
        if p.is_none() {
            return Err(Error::Degenerate("ramification point at the cubic origin".into()));
        }
        b_v.push(p);
    }
    let mut s_sum: EcPoint = None;
    for p in &b_v {
        s_sum = cm.e.add(&s_sum, p)?;
    }
    let mut sc = CoverScaffold {
        chain: vec![tower],
        cpoly,
        slopes,
        ram: [
            ram_v[0].clone(),
            ram_v[1].clone(),
            ram_v[2].clone(),
            ram_v[3].clone(),
        ],
        cm,
        b: [
            b_v[0].clone(),
            b_v[1].clone(),
            b_v[2].clone(),
            b_v[3].clone(),
        ],
        s_sum,
        halves: vec![],
        cpoly_base: data.s.scale(&data.c),
        q1,
        q2,
        r,
        chart,
    };
    sc.halves = halve_point(&sc.cm.e, &sc.s_sum, rng)?;
    if sc.halves.is_empty() {
        // no x-coordinate of a half is rational: split the division quartic
        let xs = match &sc.s_sum {
            Some((x, _)) => x.clone(),
            None => unreachable!("halving S = O always finds the origin"),
        };
        let dq = division_quartic(&sc.cm.e, &xs).squarefree_part()?;
        if dq.deg() >= 1 && factor::roots(&dq, rng)?.is_empty() {
            let (t2, _) = splitting_tower(&dq, rng)?;
            sc = sc.lift(&t2)?;
            sc.halves = halve_point(&sc.cm.e, &sc.s_sum, rng)?;
        }
    }
    if sc.halves.is_empty() {
        // roots of the division quartic exist but no y-coordinate is
        // rational: adjoin one square root
        let xs = match &sc.s_sum {
            Some((x, _)) => x.clone(),
            None => unreachable!("halving S = O always finds the origin"),
        };
        let kk2 = sc.field().clone();
        let dq = division_quartic(&sc.cm.e, &xs).squarefree_part()?;
        let mut aux = None;
        for xw in factor::roots(&dq, rng)? {
            let rhs = cubic_rhs(&sc.cm.e, &xw);
            if !rhs.is_zero() && !rhs.is_square()? {
                aux = Some(Poly::new(&kk2, vec![rhs.neg(), kk2.zero(), kk2.one()]));
                break;
            }
        }
        if let Some(aux) = aux {
            let (t3, _) = splitting_tower(&aux, rng)?;
            sc = sc.lift(&t3)?;
            sc.halves = halve_point(&sc.cm.e, &sc.s_sum, rng)?;
        }
    }
    if sc.halves.is_empty() {
        return Err(Error::Degenerate("cover divisor class could not be halved".into()));
    }
    Ok(sc)
}

impl CoverScaffold {
    pub fn field(&self) -> &Field {
        self.chain.last().expect("nonempty tower chain").field()
    }

    /// Re-embed every piece of the scaffold into the extension field of a
    /// new tower over the current construction field.
    fn lift(&self, t: &Tower) -> Result<CoverScaffold> {
        let embp = |p: &(Elt, Elt)| -> Result<(Elt, Elt)> { Ok((t.embed(&p.0)?, t.embed(&p.1)?)) };
        let embpt = |p: &EcPoint| -> Result<EcPoint> {
            Ok(match p {
                None => None,
                Some(v) => Some(embp(v)?),
            })
        };
        let mut chart = self.chart.clone();
        for row in chart.iter_mut() {
            for c in row.iter_mut() {
                *c = t.embed(c)?;
            }
        }
        let mut chain = self.chain.clone();
        chain.push(t.clone());
        Ok(CoverScaffold {
            chain,
            cpoly: t.embed_poly(&self.cpoly)?,
            slopes: self
                .slopes
                .iter()
                .map(|s| t.embed(s))
                .collect::<Result<Vec<_>>>()?,
            ram: [
                embp(&self.ram[0])?,
                embp(&self.ram[1])?,
                embp(&self.ram[2])?,
                embp(&self.ram[3])?,
            ],
            cm: CubicModel {
                e: EllipticCubic {
                    a: t.embed(&self.cm.e.a)?,
                    b: t.embed(&self.cm.e.b)?,
                    c: t.embed(&self.cm.e.c)?,
                },
                root: t.embed(&self.cm.root)?,
                g1: t.embed(&self.cm.g1)?,
            },
            b: [
                embpt(&self.b[0])?,
                embpt(&self.b[1])?,
                embpt(&self.b[2])?,
                embpt(&self.b[3])?,
            ],
            s_sum: embpt(&self.s_sum)?,
            halves: vec![],
            cpoly_base: self.cpoly_base.clone(),
            q1: t.embed_poly(&self.q1)?,
            q2: t.embed_poly(&self.q2)?,
            r: t.embed_poly(&self.r)?,
            chart,
        })
    }

    /// The divisor classes E_i = (W_i) + (O) of the rational covers; their
    /// pairwise differences are the 2-torsion translations distinguishing
    /// the covers.
    pub fn divisors(&self) -> Vec<EllipticDivisor> {
        self.halves
            .iter()
            .map(|w| EllipticDivisor {
                points: vec![(w.clone(), 1), (None, 1)],
            })
            .collect()
    }

    /// A degree-2 function u with polar divisor (W) + (O): the coordinate x
    /// for W = O, otherwise (y + y_W)/(x − x_W).
    fn u_eval(&self, w: &EcPoint, at: &(Elt, Elt)) -> Result<Elt> {
        match w {
            None => Ok(at.0.clone()),
            Some((xw, yw)) => at.1.add(yw).div(&at.0.sub(xw)),
        }
    }

    /// Value at a cubic-model point of the function v with divisor
    /// (b₁)+(b₂)+(b₃)+(b₄) − 2(W) − 2(O), assembled Miller-style from chord
    /// and vertical lines; every removable-singularity point raises a
    /// division error, so samples there are simply skipped.
    fn v_eval(&self, w: &EcPoint, at: &(Elt, Elt)) -> Result<Elt> {
        let e = &self.cm.e;
        let s12 = e.add(&self.b[0], &self.b[1])?;
        let s34 = e.add(&self.b[2], &self.b[3])?;
        let f1 = line_eval(e, &self.b[0], &self.b[1], at)?.div(&vert_eval(&s12, at))?;
        let f2 = line_eval(e, &self.b[2], &self.b[3], at)?.div(&vert_eval(&s34, at))?;
        let f3 = line_eval(e, &s12, &s34, at)?.div(&vert_eval(&self.s_sum, at))?;
        let g = vert_eval(&self.s_sum, at).div(&line_eval(e, w, w, at)?)?;
        Ok(f1.mul(&f2).mul(&f3).mul(&g))
    }

    /// A uniformly random affine non-Weierstrass point of C.
    pub fn random_point(&self, rng: &mut ChaCha8Rng) -> Result<(Elt, Elt)> {
        let kk = self.field().clone();
        for _ in 0..10_000 {
            let mu = kk.random(rng);
            let val = self.cpoly.eval(&mu);
            if val.is_zero() || !val.is_square()? {
                continue;
            }
            let mut w = factor::sqrt_in_field(&val, rng)?
                .ok_or_else(|| Error::Degenerate("square root extraction failed".into()))?;
            if rng.gen::<bool>() {
                w = w.neg();
            }
            return Ok((mu, w));
        }
        Err(Error::Degenerate("no affine points found on the slope cover".into()))
    }

    /// Kummer coordinates of the section point under (μ, w): the chart point
    /// x = (−q₁(μ) + r(μ)w)/(2q₂(μ)), y = μx.
    fn chart_kappa(&self, mu: &Elt, w: &Elt) -> Result<[Elt; 4]> {
        let kk = self.field().clone();
        let q2v = self.q2.eval(mu);
        if q2v.is_zero() {
            return Err(Error::Degenerate("chart pole".into()));
        }
        let x = self
            .q1
            .eval(mu)
            .neg()
            .add(&self.r.eval(mu).mul(w))
            .div(&kk.from_i64(2).mul(&q2v))?;
        let y = mu.mul(&x);
        let mut kap = [kk.zero(), kk.zero(), kk.zero(), kk.zero()];
        for i in 0..4 {
            kap[i] = self.chart[0][i]
                .add(&x.mul(&self.chart[1][i]))
                .add(&y.mul(&self.chart[2][i]));
        }
        Ok(kap)
    }

    /// Select the halved classes whose cover function v has the square class
    /// of the pullback of h: sample points of C and require all pairwise
    /// products v(P)·h(P)·v(P′)·h(P′) to be squares — true identically
    /// exactly when v and h differ by a constant times a square in K(C).
    pub fn select_covers(&self, h: &HFunction, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
        let mut hn = h.num.clone();
        let mut hd = h.den.clone();
        for t in &self.chain {
            hn = embed_mpoly(&hn, t)?;
            hd = embed_mpoly(&hd, t)?;
        }
        let hk = HFunction { num: hn, den: hd };
        let nh = self.halves.len();
        let mut samples: Vec<Vec<Elt>> = vec![];
        let mut tries = 0;
        while samples.len() < 12 && tries < 10_000 {
            tries += 1;
            let (mu, w) = self.random_point(rng)?;
            let Ok(kap) = self.chart_kappa(&mu, &w) else { continue };
            let Ok(hv) = hk.eval(&kap) else { continue };
            if hv.is_zero() {
                continue;
            }
            let at = match self.cm.map(&mu, &w) {
                Ok(Some(p)) => p,
                _ => continue,
            };
            let mut ts = vec![];
            for wi in &self.halves {
                let Ok(vv) = self.v_eval(wi, &at) else { break };
                if vv.is_zero() {
                    break;
                }
                ts.push(vv.mul(&hv));
            }
            if ts.len() != nh {
                continue;
            }
            samples.push(ts);
        }
        if samples.len() < 12 {
            return Err(Error::Degenerate("not enough sample points on the cover".into()));
        }
        let mut out = vec![];
        for i in 0..nh {
            let mut all = true;
            'outer: for a in 0..samples.len() {
                for b in (a + 1)..samples.len() {
                    if !samples[a][i].mul(&samples[b][i]).is_square()? {
                        all = false;
                        break 'outer;
                    }
                }
            }
            if all {
                out.push(i);
            }
        }
        Ok(out)
    }

    /// Solve the relation v² + v·h(u) + f(u) = 0 for the cover of class
    /// (W) + (O) (u ∈ L((W)+(O)), v ∈ L(2(W)+2(O)) vanishing on the node
    /// preimages, deg h ≤ 2, deg f ≤ 4) from sampled points, verify it on
    /// fresh points, and return the plane quartic x⁴ + x²·h(y,z) + f(y,z),
    /// whose function field adjoins √v to K(C).
    pub fn build_cover(&self, i: usize, rng: &mut ChaCha8Rng) -> Result<TernaryQuartic> {
        let w = self
            .halves
            .get(i)
            .cloned()
            .ok_or_else(|| Error::InvalidInput("cover index out of range".into()))?;
        let kk = self.field().clone();
        for _attempt in 0..4 {
            let mut rows = vec![];
            let mut rhs = vec![];
            let mut seen: Vec<(Elt, Elt)> = vec![];
            let mut tries = 0;
            while rows.len() < 16 && tries < 10_000 {
                tries += 1;
                let (mu, ww) = self.random_point(rng)?;
                let at = match self.cm.map(&mu, &ww) {
                    Ok(Some(p)) => p,
                    _ => continue,
                };
                if seen.contains(&at) {
                    continue;
                }
                let Ok(u) = self.u_eval(&w, &at) else { continue };
                let Ok(v) = self.v_eval(&w, &at) else { continue };
                let u2 = u.mul(&u);
                rows.push(vec![
                    v.clone(),
                    v.mul(&u),
                    v.mul(&u2),
                    kk.one(),
                    u.clone(),
                    u2.clone(),
                    u2.mul(&u),
                    u2.mul(&u2),
                ]);
                rhs.push(v.mul(&v).neg());
                seen.push(at);
            }
            if rows.len() < 16 {
                return Err(Error::Degenerate("not enough sample points on the cover".into()));
            }
            let Some(sol) = solve_linear(&rows, &rhs, &kk)? else { continue };
            // verify on fresh points
            let hc = [sol[0].clone(), sol[1].clone(), sol[2].clone()];
            let fc = [
                sol[3].clone(),
                sol[4].clone(),
                sol[5].clone(),
                sol[6].clone(),
                sol[7].clone(),
            ];
            let mut ok = true;
            let mut checked = 0;
            let mut vtries = 0;
            while checked < 4 && vtries < 10_000 {
                vtries += 1;
                let (mu, ww) = self.random_point(rng)?;
                let at = match self.cm.map(&mu, &ww) {
                    Ok(Some(p)) => p,
                    _ => continue,
                };
                let Ok(u) = self.u_eval(&w, &at) else { continue };
                let Ok(v) = self.v_eval(&w, &at) else { continue };
                let mut hval = kk.zero();
                for c in hc.iter().rev() {
                    hval = hval.mul(&u).add(c);
                }
                let mut fval = kk.zero();
                for c in fc.iter().rev() {
                    fval = fval.mul(&u).add(c);
                }
                if !v.mul(&v).add(&v.mul(&hval)).add(&fval).is_zero() {
                    ok = false;
                    break;
                }
                checked += 1;
            }
            if !ok || checked < 4 {
                continue;
            }
            // x⁴ + x²(h₂y² + h₁yz + h₀z²) + f₄y⁴ + f₃y³z + f₂y²z² + f₁yz³ + f₀z⁴
            let mut m = MPoly::monomial(&kk, vec![4, 0, 0], kk.one());
            for (j, c) in hc.iter().enumerate() {
                m = m.add(&MPoly::monomial(&kk, vec![2, j as u16, 2 - j as u16], c.clone()));
            }
            for (j, c) in fc.iter().enumerate() {
                m = m.add(&MPoly::monomial(&kk, vec![0, j as u16, 4 - j as u16], c.clone()));
            }
            return TernaryQuartic::new(m);
        }
        Err(Error::Degenerate("cover relation linear system stayed inconsistent".into()))
    }

    /// Invert the cubic-model map on a finite cubic point: None when the
    /// preimage is a point at infinity of C.
    fn cubic_preimage(&self, t: &(Elt, Elt)) -> Result<Option<(Elt, Elt)>> {
        let (x, y) = t;
        if x.is_zero() {
            return Ok(None);
        }
        let mu = self.cm.root.add(&self.cm.g1.div(x)?);
        let d = mu.sub(&self.cm.root);
        let w = y.mul(&d).mul(&d).div(&self.cm.g1)?;
        Ok(Some((mu, w)))
    }

    /// Find a base-field-rational effective divisor E′ = (P) + (Q) in the
    /// class (W) + (O) of a halved point: P runs over rational points of C
    /// and the group law forces Q, which is then automatically rational
    /// because the class itself is Galois-fixed.  Pairs touching the node
    /// preimages, Weierstrass points, infinity, or forming a μ-fiber are
    /// skipped, since the function-space ansatz below does not cover them.
    fn rational_pair(
        &self,
        w_half: &EcPoint,
        rng: &mut ChaCha8Rng,
    ) -> Result<((Elt, Elt), (Elt, Elt))> {
        use num_traits::ToPrimitive;
        let base = self.chain[0].base().clone();
        let small = base
            .order()
            .and_then(|o| o.to_u64())
            .map(|q| q <= 4096)
            .unwrap_or(false);
        let cands: Vec<Elt> = if small {
            base.all_elements()
        } else {
            (0..400).map(|_| base.random(rng)).collect()
        };
        for mu in &cands {
            let val = self.cpoly_base.eval(mu);
            if val.is_zero() || !val.is_square()? {
                continue;
            }
            let Some(wv) = factor::sqrt_in_field(&val, rng)? else { continue };
            let mu_k = chain_embed_elt(mu, &self.chain)?;
            if self.ram.iter().any(|(m, _)| m == &mu_k) {
                continue;
            }
            for wp in [wv.clone(), wv.neg()] {
                let wp_k = chain_embed_elt(&wp, &self.chain)?;
                let pp = match self.cm.map(&mu_k, &wp_k) {
                    Ok(Some(p)) => p,
                    _ => continue,
                };
                let Ok(t) = self.cm.e.add(w_half, &self.cm.e.neg(&Some(pp)))
                else {
                    continue;
                };
                let Some(tq) = t else { continue };
                let (mu_q, w_q) = match self.cubic_preimage(&tq) {
                    Ok(Some(p)) => p,
                    _ => continue,
                };
                if w_q.is_zero() || self.ram.iter().any(|(m, _)| m == &mu_q) {
                    continue;
                }
                if mu_q == mu_k && w_q == wp_k.neg() {
                    continue;
                }
                if chain_descend_elt(&mu_q, &self.chain).is_none()
                    || chain_descend_elt(&w_q, &self.chain).is_none()
                {
                    continue;
                }
                return Ok(((mu_k, wp_k), (mu_q, w_q)));
            }
        }
        Err(Error::Degenerate(
            "no rational representative of the cover class".into(),
        ))
    }

    /// Like `build_cover`, but through a base-field-rational divisor E′ in
    /// the cover class, so that u ∈ L(E′) and v ∈ L(2E′) (v vanishing on the
    /// node preimages) are Galois-equivariant and the relation coefficients
    /// descend: the returned quartic is over the section's base field.
    /// Both live in the ansatz space (a(μ) + b(μ)w)/π(μ)ⁿ with
    /// π = (μ−μ_P)(μ−μ_Q), cut out by vanishing conditions at the
    /// ι-conjugate points (computed via branch power series, so no
    /// characteristic restrictions beyond char ≠ 2).
    pub fn build_cover_rational(&self, i: usize, rng: &mut ChaCha8Rng) -> Result<TernaryQuartic> {
        let w_half = self
            .halves
            .get(i)
            .cloned()
            .ok_or_else(|| Error::InvalidInput("cover index out of range".into()))?;
        let kk = self.field().clone();
        let base = self.chain[0].base().clone();
        let (p, q) = self.rational_pair(&w_half, rng)?;
        let conds: Vec<(Elt, Elt, usize)> = if p == q {
            vec![(p.0.clone(), p.1.neg(), 2)]
        } else {
            vec![(p.0.clone(), p.1.neg(), 1), (q.0.clone(), q.1.neg(), 1)]
        };
        let lin = |m: &Elt| Poly::new(&kk, vec![m.neg(), kk.one()]);
        let pi = lin(&p.0).mul(&lin(&q.0));
        // u = (a₀ + a₁μ + a₂μ² + b₀w)/π
        let mut urows = vec![];
        for (m0, w0, mult) in &conds {
            urows.extend(vanishing_rows(&self.cpoly, m0, w0, *mult, 2, 0)?);
        }
        let uker = kernel_basis(&urows, &kk)?;
        if uker.len() != 2 {
            return Err(Error::Degenerate(
                "unexpected dimension for the cover coordinate space".into(),
            ));
        }
        // discard the constant direction (numerator proportional to π)
        let pc = [pi.coeff(0), pi.coeff(1), pi.coeff(2)];
        let is_const = |v: &[Elt]| -> bool {
            v[3].is_zero()
                && v[0].mul(&pc[1]) == v[1].mul(&pc[0])
                && v[1].mul(&pc[2]) == v[2].mul(&pc[1])
                && v[0].mul(&pc[2]) == v[2].mul(&pc[0])
        };
        let uvec = if is_const(&uker[0]) { uker[1].clone() } else { uker[0].clone() };
        // v = (a₀ + … + a₄μ⁴ + (b₀ + b₁μ + b₂μ²)w)/π², vanishing on the
        // node preimages; the kernel is 1-dimensional exactly because
        // 2E′ is linearly equivalent to their divisor
        let mut vrows = vec![];
        for (m0, w0, mult) in &conds {
            vrows.extend(vanishing_rows(&self.cpoly, m0, w0, 2 * mult, 4, 2)?);
        }
        for (mb, wb) in &self.ram {
            let mut row = vec![];
            let mut pwv = kk.one();
            for _ in 0..=4 {
                row.push(pwv.clone());
                pwv = pwv.mul(mb);
            }
            let mut pwv = wb.clone();
            for _ in 0..=2 {
                row.push(pwv.clone());
                pwv = pwv.mul(mb);
            }
            vrows.push(row);
        }
        let vker = kernel_basis(&vrows, &kk)?;
        if vker.len() != 1 {
            return Err(Error::Degenerate(
                "cover function space has the wrong dimension".into(),
            ));
        }
        let vvec = &vker[0];
        let ueval = |mu: &Elt, w: &Elt| -> Result<Elt> {
            let pv = pi.eval(mu);
            uvec[0]
                .add(&uvec[1].mul(mu))
                .add(&uvec[2].mul(mu).mul(mu))
                .add(&uvec[3].mul(w))
                .div(&pv)
        };
        let veval = |mu: &Elt, w: &Elt| -> Result<Elt> {
            let pv = pi.eval(mu);
            let mut a = kk.zero();
            for j in (0..=4).rev() {
                a = a.mul(mu).add(&vvec[j]);
            }
            let mut b = kk.zero();
            for j in (0..=2).rev() {
                b = b.mul(mu).add(&vvec[5 + j]);
            }
            a.add(&b.mul(w)).div(&pv.mul(&pv))
        };
        for _attempt in 0..4 {
            let mut rows = vec![];
            let mut rhs = vec![];
            let mut seen: Vec<(Elt, Elt)> = vec![];
            let mut tries = 0;
            while rows.len() < 16 && tries < 10_000 {
                tries += 1;
                let pt = self.random_point(rng)?;
                if seen.contains(&pt) {
                    continue;
                }
                let Ok(u) = ueval(&pt.0, &pt.1) else { continue };
                let Ok(v) = veval(&pt.0, &pt.1) else { continue };
                let u2 = u.mul(&u);
                rows.push(vec![
                    v.clone(),
                    v.mul(&u),
                    v.mul(&u2),
                    kk.one(),
                    u.clone(),
                    u2.clone(),
                    u2.mul(&u),
                    u2.mul(&u2),
                ]);
                rhs.push(v.mul(&v).neg());
                seen.push(pt);
            }
            if rows.len() < 16 {
                return Err(Error::Degenerate("not enough sample points on the cover".into()));
            }
            let Some(sol) = solve_linear(&rows, &rhs, &kk)? else { continue };
            let hc = [sol[0].clone(), sol[1].clone(), sol[2].clone()];
            let fc = [
                sol[3].clone(),
                sol[4].clone(),
                sol[5].clone(),
                sol[6].clone(),
                sol[7].clone(),
            ];
            let mut ok = true;
            let mut checked = 0;
            let mut vtries = 0;
            while checked < 4 && vtries < 10_000 {
                vtries += 1;
                let pt = self.random_point(rng)?;
                let Ok(u) = ueval(&pt.0, &pt.1) else { continue };
                let Ok(v) = veval(&pt.0, &pt.1) else { continue };
                let mut hval = kk.zero();
                for c in hc.iter().rev() {
                    hval = hval.mul(&u).add(c);
                }
                let mut fval = kk.zero();
                for c in fc.iter().rev() {
                    fval = fval.mul(&u).add(c);
                }
                if !v.mul(&v).add(&v.mul(&hval)).add(&fval).is_zero() {
                    ok = false;
                    break;
                }
                checked += 1;
            }
            if !ok || checked < 4 {
                continue;
            }
            // the relation coefficients are Galois-fixed: descend them
            let down = |c: &Elt| -> Result<Elt> {
                chain_descend_elt(c, &self.chain).ok_or_else(|| {
                    Error::Degenerate("cover relation failed to descend".into())
                })
            };
            let mut m = MPoly::monomial(&base, vec![4, 0, 0], base.one());
            for (j, c) in hc.iter().enumerate() {
                m = m.add(&MPoly::monomial(
                    &base,
                    vec![2, j as u16, 2 - j as u16],
                    down(c)?,
                ));
            }
            for (j, c) in fc.iter().enumerate() {
                m = m.add(&MPoly::monomial(
                    &base,
                    vec![0, j as u16, 4 - j as u16],
                    down(c)?,
                ));
            }
            return TernaryQuartic::new(m);
        }
        Err(Error::Degenerate("cover relation linear system stayed inconsistent".into()))
    }
}

// ---------------------------------------------------------------------------
// Orchestration: the full Kummer gluing pipeline for one datum.
// ---------------------------------------------------------------------------

/// One verified gluing produced by the Kummer pipeline, with the section data
/// needed to reproduce it.
#[derive(Clone, Debug)]
pub struct KummerGluing {
    pub z: TernaryQuartic,
    /// Twist class of the genus-1 factor.
    pub mu_x: Elt,
    /// Twist class of the Prym factor.
    pub mu_y: Elt,
    /// Pencil parameter of the section used.
    pub lambda: Elt,
    /// The datum-selected second node; the first is always (0:0:0:1).
    pub node: [Elt; 4],
    /// Monic quartic of branch slopes over the base field.
    pub slopes: Poly,
    /// Which of the four covers passed selection and verification.
    pub cover_index: usize,
    /// Whether the model was descended to the base field.
    pub descended: bool,
    pub datum: GluingDatum,
}

fn descend_quartic(z: &TernaryQuartic, tower: &Tower) -> Option<TernaryQuartic> {
    let base = tower.base().clone();
    let mut out = MPoly::zero(&base, 3);
    for (e, c) in z.mpoly().terms() {
        let cd = tower.descend(c)?;
        out = out.add(&MPoly::monomial(&base, e.clone(), cd));
    }
    TernaryQuartic::new(out).ok()
}

/// Descend a quartic through a whole tower chain, back to the base field of
/// the first tower.
fn chain_descend_quartic(z: &TernaryQuartic, chain: &[Tower]) -> Option<TernaryQuartic> {
    let mut cur = z.clone();
    for t in chain.iter().rev() {
        cur = descend_quartic(&cur, t)?;
    }
    Some(cur)
}

/// Embed a base-field polynomial through a whole tower chain.
fn chain_embed_poly(p: &Poly, chain: &[Tower]) -> Result<Poly> {
    let mut cur = p.clone();
    for t in chain {
        cur = t.embed_poly(&cur)?;
    }
    Ok(cur)
}

/// Embed a base-field element through a whole tower chain.
fn chain_embed_elt(e: &Elt, chain: &[Tower]) -> Result<Elt> {
    let mut cur = e.clone();
    for t in chain {
        cur = t.embed(&cur)?;
    }
    Ok(cur)
}

/// Descend an element through a whole tower chain (None if any level fails).
fn chain_descend_elt(e: &Elt, chain: &[Tower]) -> Option<Elt> {
    let mut cur = e.clone();
    for t in chain.iter().rev() {
        cur = t.descend(&cur)?;
    }
    Some(cur)
}

/// Rescale an x-even quartic so its first nonzero x²-band coefficient is 1
/// (an ι-twist composed with an overall scaling); used before attempting
/// Galois descent, since the pipeline's model is canonical only up to that
/// twist.
fn iota_normalize(z: &TernaryQuartic) -> Result<TernaryQuartic> {
    let f = z.field().clone();
    let mut band: Option<Elt> = None;
    for (e, c) in z.mpoly().terms() {
        if e[0] == 2 && !c.is_zero() {
            band = Some(c.clone());
            break;
        }
    }
    let Some(b) = band else { return Ok(z.clone()) };
    let binv = b.inv()?;
    let b2inv = binv.mul(&binv);
    let mut out = MPoly::zero(&f, 3);
    for (e, c) in z.mpoly().terms() {
        let s = match e[0] {
            4 => f.one(),
            2 => binv.clone(),
            0 => b2inv.clone(),
            _ => return Err(Error::InvalidInput("ι-twist requires an x-even quartic".into())),
        };
        out = out.add(&MPoly::monomial(&f, e.clone(), c.mul(&s)));
    }
    TernaryQuartic::new(out)
}

/// A quadratic nonresidue found by sampling (usable for large fields).
fn any_nonresidue(f: &Field, rng: &mut ChaCha8Rng) -> Result<Elt> {
    for _ in 0..1_000 {
        let e = f.random(rng);
        if !e.is_zero() && !e.is_square()? {
            return Ok(e);
        }
    }
    Err(Error::Degenerate("no quadratic nonresidue found".into()))
}

const COUNT_LIMIT: u64 = 1 << 21;

/// All verified gluings of X: y² = p_X and Y: y² = p_Y realizing the given
/// gluing datum, via the geometric Kummer pipeline: Kummer surface, pencil of
/// planes through (0:0:0:1) and the datum's node, j-matched sections, datum
/// matching by trope labels, cover construction, and the trace-identity gate
/// with the twist classes inferred by a χ(μ) sign fit.
pub fn kummer_glue_all(
    p_x: &Poly,
    p_y: &Poly,
    datum: &GluingDatum,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<KummerGluing>> {
    let k = p_y.field().clone();
    if p_x.field() != &k {
        return Err(Error::FieldMismatch("p_X and p_Y over different fields".into()));
    }
    if k.order().is_none() {
        return Err(Error::TowerUnsupported(
            "the Kummer pipeline runs over finite fields".into(),
        ));
    }
    if k.characteristic() < 3 {
        return Err(Error::InvalidInput("characteristic must be at least 3".into()));
    }
    let prod = datum.q_y.mul(&datum.r_y);
    if prod.monic()? != p_y.monic()? {
        return Err(Error::InvalidInput(
            "datum factors do not multiply to p_Y".into(),
        ));
    }
    let ks = kummer_surface(p_y, rng)?;
    let model = jacobian_model(p_y)?;
    let h = h_function(&model)?;
    let j_x = genus1_j(p_x, rng)?;
    let node = datum_node(&ks.fc, &datum.q_y, datum.t_includes_infinity)?;
    let p1 = [k.zero(), k.zero(), k.zero(), k.one()];
    let pencil = plane_pencil(&ks.quartic, &p1, &node)?;
    let lambdas = match_lambda(&pencil, &j_x, rng)?;
    let mut out: Vec<KummerGluing> = vec![];
    for lam in &lambdas {
        let Ok(sec) = pencil.section(lam) else { continue };
        let Ok(data) = branch_slopes(&sec, rng) else { continue };
        match datum_match(&sec, &data, p_x, datum, rng) {
            Ok(true) => {}
            Ok(false) => continue,
            Err(Error::TowerUnsupported(e)) => return Err(Error::TowerUnsupported(e)),
            Err(_) => continue,
        }
        let Ok(scaffold) = four_covers(&sec, &data, rng) else { continue };
        let Ok(selected) = scaffold.select_covers(&h, rng) else { continue };
        'cover: for &ci in &selected {
            // candidate models, preferring the base-field-rational route
            let mut cands: Vec<(TernaryQuartic, bool)> = vec![];
            if let Ok(zr) = scaffold.build_cover_rational(ci, rng) {
                cands.push((zr, true));
            } else if let Ok(z_k) = scaffold.build_cover(ci, rng) {
                if scaffold.field() == &k {
                    cands.push((z_k.clone(), true));
                } else {
                    if let Some(zd) = chain_descend_quartic(&z_k, &scaffold.chain) {
                        cands.push((zd, true));
                    } else if let Ok(zn) = iota_normalize(&z_k) {
                        if let Some(zd) = chain_descend_quartic(&zn, &scaffold.chain) {
                            cands.push((zd, true));
                        }
                    }
                    cands.push((z_k.clone(), false));
                }
            } else {
                continue;
            }
            for (zc, descended) in cands {
                let kf = zc.field().clone();
                let ord = match kf.order() {
                    Some(o) => o,
                    None => continue,
                };
                use num_traits::ToPrimitive;
                let Some(q) = ord.to_u64() else { continue };
                let m_max = if (q as u128) * (q as u128) <= COUNT_LIMIT as u128 {
                    2
                } else if q <= COUNT_LIMIT {
                    1
                } else {
                    return Err(Error::Degenerate(
                        "construction field too large to verify by counting".into(),
                    ));
                };
                if !verifier::is_smooth_quartic(&zc, rng)? {
                    continue;
                }
                let (pxf, pyf) = if &kf == &k {
                    (p_x.clone(), p_y.clone())
                } else {
                    (
                        chain_embed_poly(p_x, &scaffold.chain)?,
                        chain_embed_poly(p_y, &scaffold.chain)?,
                    )
                };
                let nr = any_nonresidue(&kf, rng)?;
                let mu_cands = [
                    (kf.one(), kf.one()),
                    (kf.one(), nr.clone()),
                    (nr.clone(), kf.one()),
                    (nr.clone(), nr.clone()),
                ];
                for (mx, my) in &mu_cands {
                    let rep = verifier::trace_identity_split(
                        &zc, mx, my, &pxf, &pyf, m_max, COUNT_LIMIT, rng,
                    )?;
                    if rep.pass {
                        out.push(KummerGluing {
                            z: zc.clone(),
                            mu_x: mx.clone(),
                            mu_y: my.clone(),
                            lambda: lam.clone(),
                            node: node.clone(),
                            slopes: data.s.clone(),
                            cover_index: ci,
                            descended,
                            datum: datum.clone(),
                        });
                        continue 'cover;
                    }
                }
            }
        }
    }
    if out.is_empty() {
        return Err(Error::Degenerate(
            "no nondegenerate section produced a verified gluing".into(),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::{embed_finite, gen_image};
    use rand::SeedableRng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(2024)
    }

    /// The classical worked sextic y² = x⁶ − 2x⁵ − 10x⁴ + 20x³ + 9x² − 18x.
    fn worked_sextic(k: &Field) -> Poly {
        Poly::from_i64(k, &[0, -18, 9, 20, -10, -2, 1])
    }

    fn mpoly_from(k: &Field, nvars: usize, terms: &[([u16; 5], i64)]) -> MPoly {
        let mut p = MPoly::zero(k, nvars);
        for (e, c) in terms {
            p = p.add(&MPoly::monomial(
                k,
                e[..nvars].to_vec(),
                k.from_i64(*c),
            ));
        }
        p
    }

    #[test]
    fn jacobian_model_matches_reference_system_mod_primes() {
        // the worked example's printed pair of defining equations, which use
        // the opposite sign convention (remainder of f − b²)
        let eq1_terms: [([u16; 5], i64); 11] = [
            ([4, 1, 0, 0, 0], -1),
            ([3, 1, 0, 0, 0], -2),
            ([2, 2, 0, 0, 0], 3),
            ([2, 1, 0, 0, 0], 10),
            ([1, 2, 0, 0, 0], 4),
            ([1, 1, 0, 0, 0], 20),
            ([0, 3, 0, 0, 0], -1),
            ([0, 2, 0, 0, 0], -10),
            ([0, 1, 2, 0, 0], 1),
            ([0, 1, 0, 0, 0], -9),
            ([0, 0, 0, 2, 0], -1),
        ];
        let eq2_terms: [([u16; 5], i64); 14] = [
            ([5, 0, 0, 0, 0], -1),
            ([4, 0, 0, 0, 0], -2),
            ([3, 1, 0, 0, 0], 4),
            ([3, 0, 0, 0, 0], 10),
            ([2, 1, 0, 0, 0], 6),
            ([2, 0, 0, 0, 0], 20),
            ([1, 2, 0, 0, 0], -3),
            ([1, 1, 0, 0, 0], -20),
            ([1, 0, 2, 0, 0], 1),
            ([1, 0, 0, 0, 0], -9),
            ([0, 2, 0, 0, 0], -2),
            ([0, 1, 0, 0, 0], -20),
            ([0, 0, 1, 1, 0], -2),
            ([0, 0, 0, 0, 0], -18),
        ];
        for p in [101u64, 103] {
            let k = Field::prime(p).unwrap();
            let model = jacobian_model(&worked_sextic(&k)).unwrap();
            let eq1 = mpoly_from(&k, 4, &eq1_terms);
            let eq2 = mpoly_from(&k, 4, &eq2_terms);
            assert!(model.g2.neg() == eq1, "constant coefficient mismatch mod {p}");
            assert!(model.g1.neg() == eq2, "linear coefficient mismatch mod {p}");
        }
    }

    #[test]
    fn jacobian_model_contains_mumford_points() {
        let mut rng = rng();
        let k = Field::prime(101).unwrap();
        let model = jacobian_model(&worked_sextic(&k)).unwrap();
        for _ in 0..20 {
            let pt = random_mumford(&model.f, &mut rng).unwrap();
            assert!(model.is_member(&pt).unwrap());
        }
        // 2-torsion: a splits off two roots of f, b = 0
        let roots = factor::roots(&model.f, &mut rng).unwrap();
        assert!(roots.len() >= 2);
        let (r, s) = (&roots[0], &roots[1]);
        let two_torsion = [r.add(s).neg(), r.mul(s), k.zero(), k.zero()];
        assert!(model.is_member(&two_torsion).unwrap());
    }

    #[test]
    fn kummer_surface_matches_reference_quartic_mod_primes() {
        let quartic_terms: [([u16; 5], i64); 18] = [
            ([4, 0, 0, 0, 0], 324),
            ([3, 0, 1, 0, 0], 720),
            ([2, 1, 1, 0, 0], -720),
            ([1, 2, 1, 0, 0], -144),
            ([0, 3, 1, 0, 0], 72),
            ([2, 0, 2, 0, 0], 832),
            ([0, 2, 2, 0, 0], -36),
            ([1, 0, 3, 0, 0], 80),
            ([0, 1, 3, 0, 0], -80),
            ([0, 0, 4, 0, 0], 44),
            ([2, 1, 0, 1, 0], 36),
            ([2, 0, 1, 1, 0], -36),
            ([1, 1, 1, 1, 0], -40),
            ([1, 0, 2, 1, 0], 40),
            ([0, 1, 2, 1, 0], 4),
            ([0, 0, 3, 1, 0], -4),
            ([0, 2, 0, 2, 0], 1),
            ([1, 0, 1, 2, 0], -4),
        ];
        for p in [101u64, 103] {
            let mut rng = rng();
            let k = Field::prime(p).unwrap();
            let ks = kummer_surface(&worked_sextic(&k), &mut rng).unwrap();
            let expected = mpoly_from(&k, 4, &quartic_terms);
            assert!(ks.quartic == expected, "Kummer quartic mismatch mod {p}");
        }
    }

    #[test]
    fn kummer_nodes_annihilate_all_partials() {
        let mut rng = rng();
        for p in [13u64, 101] {
            let k = Field::prime(p).unwrap();
            let ks = kummer_surface(&worked_sextic(&k), &mut rng).unwrap();
            assert_eq!(ks.nodes.len(), 16);
            let kk = ks.node_field().clone();
            let gi = gen_image(&k, &kk, &mut rng).unwrap();
            let quartic_ext = ks
                .quartic
                .map_coeffs(&kk, |c| embed_finite(c, &kk, &gi).unwrap());
            for node in &ks.nodes {
                for v in 0..4 {
                    let d = quartic_ext.derivative(v).eval(&node.to_vec()).unwrap();
                    assert!(d.is_zero(), "∂K/∂κ{} nonzero at node", v + 1);
                }
            }
        }
    }

    #[test]
    fn kummer_image_lands_on_surface_and_ignores_negation() {
        let mut rng = rng();
        let k = Field::prime(101).unwrap();
        let f = worked_sextic(&k);
        let ks = kummer_surface(&f, &mut rng).unwrap();
        for _ in 0..100 {
            let pt = random_mumford(&f, &mut rng).unwrap();
            let Ok(img) = kummer_image(&ks.fc, &pt) else {
                continue;
            };
            let val = ks.quartic.eval(&img.to_vec()).unwrap();
            assert!(val.is_zero(), "image off the surface");
            let flipped = [pt[0].clone(), pt[1].clone(), pt[2].neg(), pt[3].neg()];
            assert_eq!(kummer_image(&ks.fc, &flipped).unwrap(), img);
        }
    }

    #[test]
    fn two_torsion_images_are_nodes() {
        let mut rng = rng();
        let k = Field::prime(101).unwrap();
        let f = worked_sextic(&k);
        let ks = kummer_surface(&f, &mut rng).unwrap();
        let roots = factor::roots(&f, &mut rng).unwrap();
        let kk = ks.node_field().clone();
        let gi = gen_image(&k, &kk, &mut rng).unwrap();
        for i in 0..roots.len() {
            for j in (i + 1)..roots.len() {
                let pt = [
                    roots[i].add(&roots[j]).neg(),
                    roots[i].mul(&roots[j]),
                    k.zero(),
                    k.zero(),
                ];
                let img = kummer_image(&ks.fc, &pt).unwrap();
                let img_ext: Vec<Elt> = img
                    .iter()
                    .map(|e| embed_finite(e, &kk, &gi).unwrap())
                    .collect();
                assert!(
                    ks.nodes.iter().any(|n| n.to_vec() == img_ext),
                    "2-torsion image is not a listed node"
                );
            }
        }
    }

    /// Node of the worked sextic for the Weierstrass pair {1, −3}: the
    /// reference's second projection node (1 : −2 : −3 : −6).
    fn worked_p2(k: &Field, fc: &[Elt; 7]) -> [Elt; 4] {
        let (r, s) = (k.one(), k.from_i64(-3));
        let sum = r.add(&s);
        let prod = r.mul(&s);
        let diff = r.sub(&s);
        let k4 = f0_sym(fc, &sum, &prod).div(&diff.mul(&diff)).unwrap();
        [k.one(), sum, prod, k4]
    }

    fn worked_pencil(k: &Field, rng: &mut ChaCha8Rng) -> (KummerSurface, PlanePencil) {
        let ks = kummer_surface(&worked_sextic(k), rng).unwrap();
        let p1 = [k.zero(), k.zero(), k.zero(), k.one()];
        let p2 = worked_p2(k, &ks.fc);
        let pencil = plane_pencil(&ks.quartic, &p1, &p2).unwrap();
        (ks, pencil)
    }

    #[test]
    fn pencil_forms_vanish_at_nodes_and_sections_are_nodal_quartics() {
        let mut rng = rng();
        let k = Field::prime(101).unwrap();
        let (_, pencil) = worked_pencil(&k, &mut rng);
        for form in [&pencil.l1, &pencil.l2] {
            for node in [&pencil.p1, &pencil.p2] {
                let v = (0..4).fold(k.zero(), |acc, i| acc.add(&form[i].mul(&node[i])));
                assert!(v.is_zero());
            }
        }
        let sec = pencil.section(&k.from_i64(7)).unwrap();
        assert_eq!(sec.curve.total_degree(), 4);
        // chart embeds the nodes correctly
        assert_eq!(sec.embed_chart(&k.zero(), &k.zero()), pencil.p1);
        assert_eq!(sec.embed_chart(&k.one(), &k.zero()), pencil.p2);
    }

    #[test]
    fn branch_slopes_give_four_values_and_consistent_j() {
        let mut rng = rng();
        let k = Field::prime(101).unwrap();
        let (_, pencil) = worked_pencil(&k, &mut rng);
        let mut checked = 0;
        for l in 2..40u64 {
            let lam = k.from_i64(l as i64);
            let Ok(sec) = pencil.section(&lam) else { continue };
            let Ok(data) = branch_slopes(&sec, &mut rng) else { continue };
            assert_eq!(data.s.deg(), 4);
            assert!(data.s.is_separable().unwrap());
            // D = c·s·r² exactly
            let d = data
                .q1
                .mul(&data.q1)
                .sub(&data.q2.mul(&data.q0).scale(&k.from_i64(4)));
            assert!(d == data.s.mul(&data.r).mul(&data.r).scale(&data.c));
            // two-path j: cross-ratio of the slopes in any ordering equals
            // the invariant-theoretic value
            let (tower, roots) = splitting_tower(&data.s, &mut rng).unwrap();
            let pts: Vec<ProjPoint> = roots.iter().cloned().map(ProjPoint::affine).collect();
            for order in [[0usize, 1, 2, 3], [2, 0, 3, 1], [3, 2, 1, 0]] {
                let c = cross_ratio(&[
                    pts[order[0]].clone(),
                    pts[order[1]].clone(),
                    pts[order[2]].clone(),
                    pts[order[3]].clone(),
                ])
                .unwrap();
                let j = j_of_cross_ratio(&c).unwrap();
                assert_eq!(tower.descend(&j).unwrap(), data.j);
            }
            checked += 1;
            if checked >= 3 {
                break;
            }
        }
        assert!(checked >= 3, "no usable sections found");
    }

    #[test]
    fn generic_sections_have_exactly_the_two_nodes_singular() {
        let mut rng = rng();
        let k = Field::prime(13).unwrap();
        let (_, pencil) = worked_pencil(&k, &mut rng);
        let mut counts = vec![];
        for l in 0..13u64 {
            let lam = k.from_i64(l as i64);
            let Ok(sec) = pencil.section(&lam) else { continue };
            // homogenize and scan P²(F₁₃) for singular points
            let mut hom = MPoly::zero(&k, 3);
            for (e, c) in sec.curve.terms() {
                let dz = 4 - e[0] - e[1];
                hom = hom.add(&MPoly::monomial(&k, vec![e[0], e[1], dz], c.clone()));
            }
            let dx = hom.derivative(0);
            let dy = hom.derivative(1);
            let dz = hom.derivative(2);
            let mut sing = vec![];
            let mut reps = vec![];
            for a in 0..13i64 {
                for b in 0..13i64 {
                    reps.push([k.from_i64(a), k.from_i64(b), k.one()]);
                }
                reps.push([k.from_i64(a), k.one(), k.zero()]);
            }
            reps.push([k.one(), k.zero(), k.zero()]);
            for p in reps {
                let v = p.to_vec();
                if hom.eval(&v).unwrap().is_zero()
                    && dx.eval(&v).unwrap().is_zero()
                    && dy.eval(&v).unwrap().is_zero()
                    && dz.eval(&v).unwrap().is_zero()
                {
                    sing.push(v);
                }
            }
            // the two chart nodes are always singular
            for node in [[k.zero(), k.zero()], [k.one(), k.zero()]] {
                let p = sec.embed_chart(&node[0], &node[1]);
                assert!(!p.iter().all(|c| c.is_zero()));
            }
            counts.push(sing.len());
        }
        assert!(!counts.is_empty());
        assert!(
            counts.iter().filter(|&&c| c == 2).count() * 2 >= counts.len(),
            "most sections should have exactly the two nodes singular, got {counts:?}"
        );
    }

    #[test]
    fn match_lambda_returns_sampled_parameter() {
        let mut rng = rng();
        let k = Field::prime(101).unwrap();
        let (_, pencil) = worked_pencil(&k, &mut rng);
        let lam0 = k.from_i64(7);
        let sec = pencil.section(&lam0).unwrap();
        let j0 = branch_slopes(&sec, &mut rng).unwrap().j;
        let matches = match_lambda(&pencil, &j0, &mut rng).unwrap();
        assert!(matches.contains(&lam0));
        assert!(matches.len() <= 12);
    }

    /// Factor-degree multiset (with multiplicity) of a polynomial.
    fn factor_shape(p: &Poly, rng: &mut ChaCha8Rng) -> Vec<usize> {
        let fac = factor::factor(p, rng).unwrap();
        let mut out = vec![];
        for (g, m) in &fac.factors {
            for _ in 0..*m {
                out.push(g.deg());
            }
        }
        out.sort();
        out
    }

    #[test]
    fn reference_lambda_matching_polynomial_shape_mod_primes() {
        // the reference λ-matching polynomial for gluing y² = x⁴+2x³−x²−2x
        // to the worked sextic: two linear and five quadratic factors over ℚ.
        // Our pencil parameter differs from the reference one by a rational
        // Möbius change, which preserves factor-degree multisets mod p.
        let q = Field::rationals();
        let frac = |n: i64, d: i64| {
            use num_rational::BigRational;
            use num_bigint::BigInt;
            q.from_rational(&BigRational::new(BigInt::from(n), BigInt::from(d)))
                .unwrap()
        };
        let lin = |a: i64, b: i64| Poly::new(&q, vec![frac(-a, b), q.one()]);
        let quad =
            |a: i64, b: i64, c: i64, d: i64| Poly::new(&q, vec![frac(c, d), frac(-a, b), q.one()]);
        let reference = [
            lin(9, 23),
            lin(1, 11),
            quad(38, 67, -9, 67),
            quad(98, 193, -3, 193),
            quad(42, 85, 1, 85),
            quad(22, 47, 3, 47),
            quad(2, 5, 1, 5),
        ]
        .iter()
        .fold(Poly::one(&q), |acc, f| acc.mul(f));
        for p in [101u64, 103] {
            let mut rng = rng();
            let k = Field::prime(p).unwrap();
            let (_, pencil) = worked_pencil(&k, &mut rng);
            let p_x = Poly::from_i64(&k, &[0, -2, -1, 2, 1]);
            let j_x = genus1_j(&p_x, &mut rng).unwrap();
            let (num, den) = interpolate_pencil_j(&pencil, &mut rng).unwrap();
            let ours = num.sub(&den.scale(&j_x));
            assert_eq!(ours.deg(), 12, "λ-matching degree mod {p}");
            let reduced = verifier::reduce_poly(&reference, &k).unwrap();
            assert_eq!(
                factor_shape(&ours, &mut rng),
                factor_shape(&reduced, &mut rng),
                "λ-factor shape mismatch mod {p}"
            );
        }
    }

    #[test]
    fn h_pullback_is_b1_squared() {
        let mut rng = rng();
        for p in [101u64, 13] {
            let k = Field::prime(p).unwrap();
            let f = worked_sextic(&k);
            let model = jacobian_model(&f).unwrap();
            let h = h_function(&model).unwrap();
            let mut checked = 0;
            while checked < 50 {
                let pt = random_mumford(&f, &mut rng).unwrap();
                let Ok(img) = kummer_image(&model.fc, &pt) else {
                    continue;
                };
                let Ok(val) = h.eval(&img) else {
                    continue;
                };
                assert_eq!(val, pt[2].mul(&pt[2]), "φ(h) ≠ b₁² mod {p}");
                checked += 1;
            }
            // on the 2-torsion locus b₁ = 0 the value is 0 where defined
            let roots = factor::roots(&f, &mut rng).unwrap();
            let tt = [
                roots[0].add(&roots[1]).neg(),
                roots[0].mul(&roots[1]),
                k.zero(),
                k.zero(),
            ];
            if let Ok(img) = kummer_image(&model.fc, &tt) {
                if let Ok(val) = h.eval(&img) {
                    assert!(val.is_zero());
                }
            }
        }
    }

    #[test]
    fn datum_node_matches_pair_and_infinity_formulas() {
        let mut rng = rng();
        let k = Field::prime(101).unwrap();
        // quadratic factor (x−1)(x+3) of the worked sextic → the node of the
        // Weierstrass pair {1, −3}
        let ks = kummer_surface(&worked_sextic(&k), &mut rng).unwrap();
        let q_y = Poly::from_i64(&k, &[-3, 2, 1]);
        let node = datum_node(&ks.fc, &q_y, false).unwrap();
        assert_eq!(node, worked_p2(&k, &ks.fc));
        // degree-5 model with 𝒯 = {1, ∞}
        let quintic = Poly::from_i64(&k, &[0, -1, 0, 0, 0, 1]); // x⁵ − x
        let ks5 = kummer_surface(&quintic, &mut rng).unwrap();
        let q_lin = Poly::from_i64(&k, &[-1, 1]);
        let node5 = datum_node(&ks5.fc, &q_lin, true).unwrap();
        // the node must appear in the surface's node list (projectively)
        let emb: Vec<Elt> = node5.iter().map(|c| ks5.tower.embed(c).unwrap()).collect();
        let found = ks5.nodes.iter().any(|n| {
            let mut prop = true;
            for i in 0..4 {
                for j in (i + 1)..4 {
                    prop &= n[i].mul(&emb[j]) == n[j].mul(&emb[i]);
                }
            }
            prop
        });
        assert!(found, "∞-pair node is not a node of the surface");
    }

    /// A nondegenerate section of the worked pencil with its slope data and
    /// cover scaffold, at a fixed λ chosen so everything splits.
    fn worked_scaffold(
        k: &Field,
        lam: i64,
        rng: &mut ChaCha8Rng,
    ) -> (JacobianModel, HFunction, CoverScaffold) {
        let model = jacobian_model(&worked_sextic(k)).unwrap();
        let h = h_function(&model).unwrap();
        let (_, pencil) = worked_pencil(k, rng);
        let sec = pencil.section(&k.from_i64(lam)).unwrap();
        let data = branch_slopes(&sec, rng).unwrap();
        let scaffold = four_covers(&sec, &data, rng).unwrap();
        (model, h, scaffold)
    }

    #[test]
    fn halved_classes_double_back_to_the_node_preimage_class() {
        let mut rng = rng();
        let k = Field::prime(101).unwrap();
        let (_, _, scaffold) = worked_scaffold(&k, 7, &mut rng);
        let e = &scaffold.cm.e;
        // the recorded sum really is the group-law sum of the node preimages
        let mut acc: EcPoint = None;
        for p in &scaffold.b {
            assert!(e.contains(p));
            acc = e.add(&acc, p).unwrap();
        }
        assert_eq!(acc, scaffold.s_sum);
        // every halved point doubles to it, and the cover divisors have
        // degree 2 with pairwise differences of exact order dividing 2
        assert!(!scaffold.halves.is_empty());
        for w in &scaffold.halves {
            assert!(e.contains(w));
            assert_eq!(e.add(w, w).unwrap(), scaffold.s_sum);
        }
        for d in scaffold.divisors() {
            assert_eq!(d.degree(), 2);
        }
        for i in 0..scaffold.halves.len() {
            for j in (i + 1)..scaffold.halves.len() {
                let diff = e
                    .add(&scaffold.halves[i], &e.neg(&scaffold.halves[j]))
                    .unwrap();
                assert!(diff.is_some(), "two halves coincide");
                assert!(e.add(&diff, &diff).unwrap().is_none());
            }
        }
    }

    #[test]
    fn exactly_one_cover_matches_the_h_square_class() {
        let mut rng = rng();
        let k = Field::prime(101).unwrap();
        let (_, h, scaffold) = worked_scaffold(&k, 7, &mut rng);
        let sel = scaffold.select_covers(&h, &mut rng).unwrap();
        assert_eq!(sel.len(), 1, "selection is not unique: {sel:?}");
        // and the selected relation holds identically (verified internally)
        let z = scaffold.build_cover(sel[0], &mut rng).unwrap();
        assert!(verifier::is_smooth_quartic(&z, &mut rng).unwrap());
    }

    #[test]
    fn kummer_pipeline_reproduces_the_printed_f3_gluings() {
        use crate::twotorsion::rational_gluing_data;
        let mut rng = rng();
        let f3 = Field::prime(3).unwrap();
        let p_x = Poly::from_i64(&f3, &[1, 1, 0, 2, 1]);
        let p_y = Poly::from_i64(&f3, &[1, 2, 1, 1, 1, 0, 2]);
        let quart = |monos: &[([u16; 3], i64)]| {
            let mut m = MPoly::zero(&f3, 3);
            for (e, c) in monos {
                m = m.add(&MPoly::monomial(&f3, e.to_vec(), f3.from_i64(*c)));
            }
            TernaryQuartic::new(m).unwrap()
        };
        let z1 = quart(&[
            ([4, 0, 0], 1),
            ([2, 1, 1], 1),
            ([2, 0, 2], 2),
            ([0, 3, 1], 2),
            ([0, 2, 2], 1),
            ([0, 0, 4], 1),
        ]);
        let z2 = quart(&[
            ([4, 0, 0], 1),
            ([2, 1, 1], 2),
            ([2, 0, 2], 1),
            ([0, 3, 1], 2),
            ([0, 2, 2], 1),
            ([0, 0, 4], 1),
        ]);
        let traces = |z: &TernaryQuartic| -> Vec<i128> {
            let mut r = self::rng();
            let rec = verifier::count_points(
                &verifier::CurveKind::PlaneQuartic(z.clone()),
                2,
                1 << 21,
                &mut r,
            )
            .unwrap();
            (1..=2).map(|m| rec.trace(m).unwrap()).collect()
        };
        let (t1, t2) = (traces(&z1), traces(&z2));
        let data = rational_gluing_data(&p_x, &p_y, &mut rng).unwrap();
        assert!(!data.is_empty());
        let mut matched = 0;
        for d in &data {
            let Ok(results) = kummer_glue_all(&p_x, &p_y, &d, &mut rng) else {
                continue;
            };
            for g in &results {
                if !g.descended {
                    continue;
                }
                let t = traces(&g.z);
                if t == t1 || t == t2 {
                    matched += 1;
                }
            }
        }
        assert!(matched > 0, "no Kummer gluing is trace-equivalent to a printed model");
    }

    #[test]
    fn kummer_and_interpolation_paths_agree_on_a_special_instance() {
        let k = Field::prime(5).unwrap();
        let mut rng = rng();
        let mut done = false;
        'search: for _ in 0..60 {
            let params = gluer::SpecialParams {
                alpha: k.random(&mut rng),
                beta: k.random(&mut rng),
                a: k.random(&mut rng),
                b: k.random(&mut rng),
            };
            if params.validate().is_err() {
                continue;
            }
            let (p_x, p_y) = (params.p_x(), params.p_y());
            let Ok(glued) = gluer::glue_all(&p_x, &p_y, &mut rng) else { continue };
            for g in &glued {
                let Ok(results) = kummer_glue_all(&p_x, &p_y, &g.datum, &mut rng) else {
                    continue;
                };
                let nr = gluer::nonresidue(&k).unwrap();
                for kg in &results {
                    if !kg.descended {
                        continue;
                    }
                    let direct = verifier::quartic_equivalent_bruteforce(&kg.z, &g.z)
                        .unwrap()
                        .is_some();
                    let twisted = gluer::twist_curve(&kg.z, &nr).unwrap();
                    let via_twist = verifier::quartic_equivalent_bruteforce(&twisted, &g.z)
                        .unwrap()
                        .is_some();
                    assert!(
                        direct || via_twist,
                        "kummer output is not PGL₃-equivalent (even up to ι-twist) \
                         to the interpolation output"
                    );
                    done = true;
                    break 'search;
                }
            }
        }
        assert!(done, "no special instance over F₅ completed both pipelines");
    }
}
