//! Independent correctness checks for gluing outputs.
//!
//! The checks are deliberately elementary: binary-quartic invariants for the
//! genus-1 factor, naive (but structured) point counting over small finite
//! fields, L-polynomials via Newton identities, the twisted trace identity
//! `χ_q(μ)^m·t_Z = t_X + t_Y`, torsion-order divisibility through the twisted
//! L-value, and brute-force plane-quartic equivalence over tiny prime fields.
//!
//! The genus-2 factor is verified through the trace identity rather than an
//! invariant-theoretic test: the trace identity checks the full isogeny claim
//! `μ∗Jac(Z) ∼ Jac(X) × Jac(Y)` at every available prime power, which is a
//! strictly stronger desk-scale certificate.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::factor;
use crate::field::{Elt, Field, FieldKind};
use crate::forms::{BinaryForm, Matrix3, TernaryQuartic};
use crate::mpoly::MPoly;
use crate::poly::Poly;
use crate::tower::{embed_finite, embed_poly_finite, finite_gen_image};

// ---------------------------------------------------------------------------
// Binary-quartic invariants and the genus-1 factor test.
// ---------------------------------------------------------------------------

/// The classical invariants I, J of a binary quartic.
#[derive(Debug, Clone)]
pub struct QuarticInvariants {
    pub i: Elt,
    pub j: Elt,
}

/// For an x-even ternary quartic Z = A·x⁴ + B(y,z)·x² + C(y,z), the binary
/// quartic p = B² − 4AC of the quotient Z/ι by the involution x ↦ −x.
pub fn quotient_quartic(z: &TernaryQuartic) -> Result<BinaryForm> {
    let f = z.field().clone();
    let slices = z.mpoly().coeffs_in(0);
    for (d, s) in slices.iter().enumerate() {
        if d % 2 == 1 && !s.is_zero() {
            return Err(Error::InvalidInput(
                "quartic has odd x-degree monomials; no x ↦ −x involution".into(),
            ));
        }
    }
    let zero = MPoly::zero(&f, 3);
    let c = slices.first().unwrap_or(&zero).clone();
    let b = slices.get(2).unwrap_or(&zero).clone();
    let a = slices.get(4).unwrap_or(&zero).clone();
    // A is a scalar (x⁴ coefficient), B quadratic and C quartic in (y,z)
    let four = f.from_i64(4);
    let p = b.mul(&b).sub(&a.mul(&c).scale(&four));
    if p.is_zero() {
        return Err(Error::Degenerate("quotient quartic vanishes".into()));
    }
    // p is a binary form in (y,z); convert via y-univariate at z = 1
    let uni = p.eval_var(2, &f.one())?.to_univariate(1)?;
    BinaryForm::from_poly(&uni, 4)
}

/// I = 12ae − 3bd + c², J = 72ace + 9bcd − 27ad² − 27b²e − 2c³ for
/// p = a·y⁴ + b·y³z + c·y²z² + d·yz³ + e·z⁴.
pub fn binary_quartic_ij(p: &BinaryForm) -> Result<QuarticInvariants> {
    if p.degree() != 4 {
        return Err(Error::InvalidInput("binary quartic expected".into()));
    }
    let f = p.field().clone();
    let (a, b, c, d, e) = (p.coeff(4), p.coeff(3), p.coeff(2), p.coeff(1), p.coeff(0));
    let n = |k: i64| f.from_i64(k);
    let i = n(12).mul(&a).mul(&e).sub(&n(3).mul(&b).mul(&d)).add(&c.mul(&c));
    let j = n(72)
        .mul(&a)
        .mul(&c)
        .mul(&e)
        .add(&n(9).mul(&b).mul(&c).mul(&d))
        .sub(&n(27).mul(&a).mul(&d).mul(&d))
        .sub(&n(27).mul(&b).mul(&b).mul(&e))
        .sub(&n(2).mul(&c).mul(&c).mul(&c));
    Ok(QuarticInvariants { i, j })
}

/// Outcome of the genus-1 factor test.
#[derive(Debug, Clone)]
pub struct G1Report {
    /// Whether the quotient of Z and the curve y² = p_X(x) have the same
    /// point in weighted (2,3)-projective invariant space, i.e. are twists.
    pub equivalent_over_closure: bool,
    /// The scalar μ with (I, J) = (μ²I₀, μ³J₀), when it exists in the base
    /// field.
    pub twist_class: Option<Elt>,
}

/// Compare the genus-1 quotient of an x-even quartic Z with y² = p_X(x) in
/// the weighted (4,6)-space of binary-quartic invariants.
///
/// Not available in characteristic 3, where the classical invariants
/// degenerate; callers must rely on the trace identity there.
pub fn g1_check(z: &TernaryQuartic, p_x: &Poly, rng: &mut ChaCha8Rng) -> Result<G1Report> {
    let f = z.field().clone();
    if f.characteristic() == 3 {
        return Err(Error::Degenerate(
            "invariant test unavailable in characteristic 3".into(),
        ));
    }
    if !p_x.is_separable()? {
        return Err(Error::Inseparable("p_X is not separable".into()));
    }
    let p = quotient_quartic(z)?;
    let p0 = BinaryForm::from_poly(p_x, 4)?;
    let QuarticInvariants { i, j } = binary_quartic_ij(&p)?;
    let QuarticInvariants { i: i0, j: j0 } = binary_quartic_ij(&p0)?;
    let fail = || {
        Ok(G1Report {
            equivalent_over_closure: false,
            twist_class: None,
        })
    };
    if !i.is_zero() && !j.is_zero() && !i0.is_zero() && !j0.is_zero() {
        let mu = j.mul(&i0).div(&j0.mul(&i))?;
        let ok = i == mu.mul(&mu).mul(&i0) && j == mu.mul(&mu).mul(&mu).mul(&j0);
        if ok {
            return Ok(G1Report {
                equivalent_over_closure: true,
                twist_class: Some(mu),
            });
        }
        return fail();
    }
    if i.is_zero() && i0.is_zero() && !j.is_zero() && !j0.is_zero() {
        // j-invariant 0: μ³ = J/J₀; any ratio works over the closure
        let ratio = j.div(&j0)?;
        let cubic = Poly::new(&f, vec![ratio.neg(), f.zero(), f.zero(), f.one()]);
        let mu = factor::roots(&cubic, rng)?.into_iter().min();
        return Ok(G1Report {
            equivalent_over_closure: true,
            twist_class: mu,
        });
    }
    if j.is_zero() && j0.is_zero() && !i.is_zero() && !i0.is_zero() {
        // j-invariant 1728: μ² = I/I₀
        let ratio = i.div(&i0)?;
        let mu = factor::sqrt_in_field(&ratio, rng)?;
        return Ok(G1Report {
            equivalent_over_closure: true,
            twist_class: mu,
        });
    }
    fail()
}

/// Canonical square-class representative: over ℚ the signed squarefree
/// integer; over a finite field 1 for squares and the smallest nonsquare
/// otherwise.
pub fn square_class_rep(a: &Elt) -> Result<Elt> {
    if a.is_zero() {
        return Err(Error::ZeroInput("square class of zero".into()));
    }
    let f = a.field().clone();
    match f.kind() {
        FieldKind::Rationals => {
            let r = a.as_rational().unwrap();
            let n = r.numer() * r.denom();
            let s = crate::intutil::squarefree_part(&n)?;
            f.from_rational(&num_rational::BigRational::from_integer(s))
        }
        _ => {
            if a.is_square()? {
                Ok(f.one())
            } else {
                for e in f.all_elements() {
                    if !e.is_zero() && !e.is_square()? {
                        return Ok(e);
                    }
                }
                unreachable!("odd finite field has a nonsquare")
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Point counting.
// ---------------------------------------------------------------------------

/// A curve accepted by the counting routines.
#[derive(Debug, Clone)]
pub enum CurveKind {
    /// y² = f(x), deg f ∈ {3,...,6}, f separable.
    Hyperelliptic(Poly),
    /// A smooth plane quartic.
    PlaneQuartic(TernaryQuartic),
}

impl CurveKind {
    pub fn field(&self) -> &Field {
        match self {
            CurveKind::Hyperelliptic(f) => f.field(),
            CurveKind::PlaneQuartic(z) => z.field(),
        }
    }

    pub fn genus(&self) -> Result<usize> {
        match self {
            CurveKind::Hyperelliptic(f) => match f.deg() {
                3 | 4 => Ok(1),
                5 | 6 => Ok(2),
                d => Err(Error::InvalidInput(format!(
                    "unsupported hyperelliptic degree {}",
                    d
                ))),
            },
            CurveKind::PlaneQuartic(_) => Ok(3),
        }
    }
}

/// Point counts N(q^m) for m = 1..m_max.
#[derive(Debug, Clone)]
pub struct CountRecord {
    pub q: u64,
    pub genus: usize,
    /// (m, N(q^m)) pairs.
    pub counts: Vec<(usize, u64)>,
    pub method: String,
}

impl CountRecord {
    pub fn count(&self, m: usize) -> Option<u64> {
        self.counts.iter().find(|&&(k, _)| k == m).map(|&(_, n)| n)
    }

    /// Frobenius trace t(q^m) = q^m + 1 − N(q^m).
    pub fn trace(&self, m: usize) -> Option<i128> {
        let qm = (self.q as i128).pow(m as u32);
        self.count(m).map(|n| qm + 1 - n as i128)
    }
}

fn check_weil(n: u64, q: u64, m: usize, g: usize) -> Result<()> {
    let qm = (q as i128).pow(m as u32);
    let d = n as i128 - qm - 1;
    if d * d > 4 * (g as i128) * (g as i128) * qm {
        return Err(Error::VerificationFailed(format!(
            "Weil bound violated: N = {} over q^m = {} at genus {}",
            n, qm, g
        )));
    }
    Ok(())
}

/// The degree-m extension of a finite field, with the generator image needed
/// to transport coefficients.
fn extension_of(base: &Field, m: usize, rng: &mut ChaCha8Rng) -> Result<(Field, Option<Elt>)> {
    let p = base.characteristic();
    let k = base.degree();
    if m * k == 1 {
        return Ok((base.clone(), None));
    }
    let big = if m == 1 {
        base.clone()
    } else {
        factor::extension_field(p, k * m, rng)?
    };
    let img = finite_gen_image(base, &big, rng)?;
    Ok((big, img))
}

/// Count points on y² = f(x) over the field of f by a quadratic-character
/// sum, plus the standard points at infinity (2 if deg f even with square
/// leading coefficient, 0 if even nonsquare, 1 if odd).
fn count_hyperelliptic(f: &Poly) -> Result<u64> {
    let k = f.field().clone();
    if !k.is_finite() || k.characteristic() == 2 {
        return Err(Error::InvalidInput("odd finite field required".into()));
    }
    if !f.is_separable()? {
        return Err(Error::Inseparable("singular hyperelliptic model".into()));
    }
    // squares table
    let elems = k.all_elements();
    let mut squares = std::collections::BTreeSet::new();
    for y in &elems {
        squares.insert(y.mul(y));
    }
    let mut n = 0u64;
    for x in &elems {
        let v = f.eval(x);
        if v.is_zero() {
            n += 1;
        } else if squares.contains(&v) {
            n += 2;
        }
    }
    n += if f.deg() % 2 == 1 {
        1
    } else if f.lc().is_square()? {
        2
    } else {
        0
    };
    Ok(n)
}

/// Number of distinct roots of a low-degree polynomial over its (finite)
/// field of definition, via deg gcd(x^Q − x, f).
fn root_count(f: &Poly) -> Result<u64> {
    let k = f.field().clone();
    if f.is_zero() {
        // the whole affine line
        return Ok(k.order().unwrap().to_u64().unwrap());
    }
    if f.deg() == 0 {
        return Ok(0);
    }
    let q = k.order().unwrap();
    let x = Poly::new(&k, vec![k.zero(), k.one()]);
    let frob = x.pow_mod(&q, f)?;
    let diff = frob.sub(&x).rem(f)?;
    let g = f.gcd(&diff)?;
    Ok(g.deg() as u64)
}

/// Count points on a plane quartic over its field by fibering over the
/// (y : z)-line: the points (x : y₀ : 1) and (x : 1 : 0), plus (1 : 0 : 0)
/// when the x⁴-coefficient vanishes.
fn count_quartic_fibered(z: &TernaryQuartic) -> Result<u64> {
    let k = z.field().clone();
    let slices = z.mpoly().coeffs_in(0); // x-degree slices, forms in (y,z)
    // coefficient functions c_i(y) at z = 1 and constants at (1, 0)
    let mut cy: Vec<Poly> = vec![];
    let mut cinf: Vec<Elt> = vec![];
    for s in &slices {
        cy.push(s.eval_var(2, &k.one())?.to_univariate(1)?);
        cinf.push(s.eval(&[k.zero(), k.one(), k.zero()])?);
    }
    let mut n = 0u64;
    for y0 in k.all_elements() {
        let coeffs: Vec<Elt> = cy.iter().map(|c| c.eval(&y0)).collect();
        n += root_count(&Poly::new(&k, coeffs))?;
    }
    n += root_count(&Poly::new(&k, cinf))?;
    // (1:0:0) lies on Z iff the x⁴-coefficient vanishes
    if z.eval(&k.one(), &k.zero(), &k.zero())?.is_zero() {
        n += 1;
    }
    Ok(n)
}

/// Count points on a plane quartic by scanning all of P² (oracle method).
pub fn count_quartic_scan(z: &TernaryQuartic) -> Result<u64> {
    let k = z.field().clone();
    let elems = k.all_elements();
    let mut n = 0u64;
    for x in &elems {
        for y in &elems {
            if z.eval(x, y, &k.one())?.is_zero() {
                n += 1;
            }
        }
    }
    for x in &elems {
        if z.eval(x, &k.one(), &k.zero())?.is_zero() {
            n += 1;
        }
    }
    if z.eval(&k.one(), &k.zero(), &k.zero())?.is_zero() {
        n += 1;
    }
    Ok(n)
}

/// Count points over F_{q^m} for m = 1..m_max, with q^m capped by `limit`.
/// Plane quartics are required to be smooth.
pub fn count_points(
    curve: &CurveKind,
    m_max: usize,
    limit: u64,
    rng: &mut ChaCha8Rng,
) -> Result<CountRecord> {
    let base = curve.field().clone();
    if !base.is_finite() {
        return Err(Error::InvalidInput("point counting needs a finite field".into()));
    }
    let q = base.order().unwrap().to_u64().ok_or_else(|| {
        Error::InvalidInput("field too large for counting".into())
    })?;
    let genus = curve.genus()?;
    if let CurveKind::PlaneQuartic(z) = curve {
        if !is_smooth_quartic(z, rng)? {
            return Err(Error::Degenerate("plane quartic is singular".into()));
        }
    }
    let mut counts = vec![];
    for m in 1..=m_max {
        let qm = (q as u128).pow(m as u32);
        if qm > limit as u128 {
            return Err(Error::InvalidInput(format!(
                "q^m = {} exceeds the counting limit {}",
                qm, limit
            )));
        }
        let (big, img) = extension_of(&base, m, rng)?;
        let n = match curve {
            CurveKind::Hyperelliptic(f) => {
                let fm = embed_poly_finite(f, &big, &img)?;
                count_hyperelliptic(&fm)?
            }
            CurveKind::PlaneQuartic(z) => {
                let coeffs: Vec<Elt> = z
                    .coeffs()
                    .iter()
                    .map(|c| embed_finite(c, &big, &img))
                    .collect::<Result<_>>()?;
                let zm = TernaryQuartic::from_coeffs(&big, &coeffs)?;
                count_quartic_fibered(&zm)?
            }
        };
        check_weil(n, q, m, genus)?;
        counts.push((m, n));
    }
    Ok(CountRecord {
        q,
        genus,
        counts,
        method: match curve {
            CurveKind::Hyperelliptic(_) => "character-sum".into(),
            CurveKind::PlaneQuartic(_) => "fibered-gcd".into(),
        },
    })
}

// ---------------------------------------------------------------------------
// L-polynomials.
// ---------------------------------------------------------------------------

/// The numerator L(T) of the zeta function, degree 2g, constant term 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LPolynomial {
    pub g: usize,
    pub q: u64,
    /// Coefficients c₀ = 1, c₁, ..., c_{2g}.
    pub coeffs: Vec<i128>,
}

impl LPolynomial {
    /// L(1) — the group order of the Jacobian over F_q.
    pub fn l1(&self) -> i128 {
        self.coeffs.iter().sum()
    }

    /// The μ-twisted L-polynomial: cᵢ ↦ χ(μ)ⁱ·cᵢ.
    pub fn twisted(&self, chi: i64) -> LPolynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| if chi == 1 || i % 2 == 0 { c } else { -c })
            .collect();
        LPolynomial {
            g: self.g,
            q: self.q,
            coeffs,
        }
    }
}

/// Recover L(T) from counts N(q^m), m = 1..g, by Newton identities on the
/// Frobenius power sums, completed by the functional equation.
pub fn lpoly(rec: &CountRecord) -> Result<LPolynomial> {
    let g = rec.genus;
    let q = rec.q as i128;
    let mut s = vec![0i128; g + 1]; // power sums s[1..g]
    for m in 1..=g {
        let t = rec.trace(m).ok_or_else(|| {
            Error::InvalidInput(format!("count for m = {} missing", m))
        })?;
        s[m] = t;
    }
    // Newton: k·e_k = Σ_{i=1}^{k} (−1)^{i−1} e_{k−i} s_i, with e₀ = 1
    let mut e = vec![0i128; g + 1];
    e[0] = 1;
    for k in 1..=g {
        let mut acc = 0i128;
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1 } else { -1 };
            acc += sign * e[k - i] * s[i];
        }
        if acc % k as i128 != 0 {
            return Err(Error::VerificationFailed(
                "Newton identities gave a non-integer coefficient".into(),
            ));
        }
        e[k] = acc / k as i128;
    }
    // L(T) = ∏(1 − αᵢT): c_k = (−1)^k e_k
    let mut coeffs = vec![0i128; 2 * g + 1];
    for k in 0..=g {
        coeffs[k] = if k % 2 == 0 { e[k] } else { -e[k] };
    }
    for i in 0..g {
        coeffs[2 * g - i] = q.pow((g - i) as u32) * coeffs[i];
    }
    let l = LPolynomial {
        g,
        q: rec.q,
        coeffs,
    };
    if l.l1() <= 0 {
        return Err(Error::VerificationFailed("L(1) must be positive".into()));
    }
    Ok(l)
}

// ---------------------------------------------------------------------------
// Trace identity and torsion divisibility.
// ---------------------------------------------------------------------------

/// The quadratic character χ_q(μ) = ±1.
pub fn quadratic_character(mu: &Elt) -> Result<i64> {
    if mu.is_zero() {
        return Err(Error::ZeroInput("twist scalar must be nonzero".into()));
    }
    Ok(if mu.is_square()? { 1 } else { -1 })
}

/// One row of a trace-identity report.
#[derive(Debug, Clone)]
pub struct TraceRow {
    pub m: usize,
    pub lhs: i128,
    pub rhs: i128,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct TraceReport {
    pub chi_x: i64,
    pub chi_y: i64,
    pub rows: Vec<TraceRow>,
    pub pass: bool,
}

/// Verify t_Z(q^m) = χ_q(μ_X)^m·t_X(q^m) + χ_q(μ_Y)^m·t_Y(q^m) for
/// m = 1..m_max, where t_C(q^m) = q^m + 1 − N_C(q^m).  A quartic glued from
/// (X, Y) carries one twist class per isogeny factor — rescaling the model
/// twists the genus-1 quotient and the Prym by different square classes — so
/// the identity takes a scalar for each side.  All inputs over one finite
/// field.
pub fn trace_identity_split(
    z: &TernaryQuartic,
    mu_x: &Elt,
    mu_y: &Elt,
    p_x: &Poly,
    p_y: &Poly,
    m_max: usize,
    limit: u64,
    rng: &mut ChaCha8Rng,
) -> Result<TraceReport> {
    if !p_x.is_separable()? || !p_y.is_separable()? {
        return Err(Error::Inseparable("bad reduction: inseparable side model".into()));
    }
    let chi_x = quadratic_character(mu_x)?;
    let chi_y = quadratic_character(mu_y)?;
    let rec_z = count_points(&CurveKind::PlaneQuartic(z.clone()), m_max, limit, rng)?;
    let rec_x = count_points(&CurveKind::Hyperelliptic(p_x.clone()), m_max, limit, rng)?;
    let rec_y = count_points(&CurveKind::Hyperelliptic(p_y.clone()), m_max, limit, rng)?;
    let mut rows = vec![];
    let mut pass = true;
    for m in 1..=m_max {
        let cm = |chi: i64| if chi == 1 || m % 2 == 0 { 1i128 } else { -1 };
        let lhs = rec_z.trace(m).unwrap();
        let rhs = cm(chi_x) * rec_x.trace(m).unwrap() + cm(chi_y) * rec_y.trace(m).unwrap();
        let ok = lhs == rhs;
        pass &= ok;
        rows.push(TraceRow {
            m,
            lhs,
            rhs,
            pass: ok,
        });
    }
    Ok(TraceReport { chi_x, chi_y, rows, pass })
}

/// Verify χ_q(μ)^m · t_Z(q^m) = t_X(q^m) + t_Y(q^m) for m = 1..m_max — the
/// single-scalar identity, used when both factors share the twist class μ.
pub fn trace_identity(
    z: &TernaryQuartic,
    mu: &Elt,
    p_x: &Poly,
    p_y: &Poly,
    m_max: usize,
    limit: u64,
    rng: &mut ChaCha8Rng,
) -> Result<TraceReport> {
    trace_identity_split(z, mu, mu, p_x, p_y, m_max, limit, rng)
}

/// Exact division of L-polynomials over ℤ: the cofactor of `den` in `num`.
fn lpoly_div(num: &LPolynomial, den: &LPolynomial) -> Result<LPolynomial> {
    if den.g >= num.g || num.q != den.q {
        return Err(Error::InvalidInput("L-polynomial division shape mismatch".into()));
    }
    let g = num.g - den.g;
    let mut rem = num.coeffs.clone();
    let mut quo = vec![0i128; 2 * g + 1];
    // both polynomials have constant term 1; divide from the low end
    for i in 0..=2 * g {
        let c = rem[i];
        quo[i] = c;
        for (j, &d) in den.coeffs.iter().enumerate() {
            rem[i + j] -= c * d;
        }
    }
    if rem.iter().any(|&c| c != 0) {
        return Err(Error::VerificationFailed(
            "genus-1 L-factor does not divide the quartic's L-polynomial".into(),
        ));
    }
    Ok(LPolynomial { g, q: num.q, coeffs: quo })
}

/// Whether n divides the order of the twisted Jacobian over F_q, i.e. the
/// product of the χ(μ_X)-twisted genus-1 L-factor and the χ(μ_Y)-twisted
/// Prym L-factor, evaluated at 1.  When the two classes agree this is the
/// μ-twist of the full L-polynomial; otherwise the genus-1 factor is split
/// off by counting the quotient curve of the x-even model.
pub fn torsion_divisibility_split(
    z: &TernaryQuartic,
    mu_x: &Elt,
    mu_y: &Elt,
    n: u64,
    limit: u64,
    rng: &mut ChaCha8Rng,
) -> Result<bool> {
    if n == 0 {
        return Err(Error::ZeroInput("torsion order must be positive".into()));
    }
    let rec = count_points(&CurveKind::PlaneQuartic(z.clone()), 3, limit, rng)?;
    let l = lpoly(&rec)?;
    let chi_x = quadratic_character(mu_x)?;
    let chi_y = quadratic_character(mu_y)?;
    let lt = if chi_x == chi_y {
        l.twisted(chi_x).l1()
    } else {
        let e = quotient_quartic(z)?.to_poly();
        let rec_e = count_points(&CurveKind::Hyperelliptic(e), 1, limit, rng)?;
        let le = lpoly(&rec_e)?;
        let lp = lpoly_div(&l, &le)?;
        le.twisted(chi_x).l1() * lp.twisted(chi_y).l1()
    };
    if lt <= 0 {
        return Err(Error::VerificationFailed("twisted L(1) must be positive".into()));
    }
    Ok(lt % n as i128 == 0)
}

/// Whether n divides the μ-twisted L-value L̃(1) of the quartic's Jacobian.
pub fn torsion_divisibility(
    z: &TernaryQuartic,
    mu: &Elt,
    n: u64,
    limit: u64,
    rng: &mut ChaCha8Rng,
) -> Result<bool> {
    torsion_divisibility_split(z, mu, mu, n, limit, rng)
}

// ---------------------------------------------------------------------------
// Smoothness of plane quartics.
// ---------------------------------------------------------------------------

/// Res_x of two ternary forms dehomogenized at z = 1, as a univariate
/// polynomial in y over a sampling field (an extension when the base is too
/// small); computed by evaluation–interpolation with leading-coefficient
/// guards.
fn resultant_in_x(
    a: &MPoly,
    b: &MPoly,
    sample_field: &Field,
    img: &Option<Elt>,
    rng: &mut ChaCha8Rng,
) -> Result<Poly> {
    let k = sample_field.clone();
    let embed_mp = |m: &MPoly| -> Result<(Vec<Poly>, usize)> {
        // x-degree slices at z = 1, as univariate polynomials in y over k
        let one = m.field().one();
        let slices = m.eval_var(2, &one)?.coeffs_in(0);
        let polys: Vec<Poly> = slices
            .iter()
            .map(|s| {
                let u = s.to_univariate(1)?;
                embed_poly_finite(&u, &k, img)
            })
            .collect::<Result<_>>()?;
        let deg = polys.iter().rposition(|p| !p.is_zero());
        Ok((polys.clone(), deg.unwrap_or(0)))
    };
    let (ca, da) = embed_mp(a)?;
    let (cb, db) = embed_mp(b)?;
    if ca.iter().all(|p| p.is_zero()) || cb.iter().all(|p| p.is_zero()) {
        return Err(Error::ZeroInput("resultant of zero polynomial".into()));
    }
    // degree bound of Res_x in y
    let dy = |c: &[Poly]| c.iter().map(|p| if p.is_zero() { 0 } else { p.deg() }).max().unwrap();
    let bound = da * dy(&cb) + db * dy(&ca) + 1;
    let mut samples = vec![];
    for y0 in k.all_elements() {
        if samples.len() > bound {
            break;
        }
        let lc_a = ca[da].eval(&y0);
        let lc_b = cb[db].eval(&y0);
        if lc_a.is_zero() || lc_b.is_zero() {
            continue;
        }
        let pa = Poly::new(&k, ca.iter().take(da + 1).map(|p| p.eval(&y0)).collect());
        let pb = Poly::new(&k, cb.iter().take(db + 1).map(|p| p.eval(&y0)).collect());
        samples.push((y0, pa.resultant(&pb)?));
    }
    if samples.len() <= bound {
        return Err(Error::InvalidInput(
            "sampling field too small for resultant interpolation".into(),
        ));
    }
    let _ = rng;
    Poly::interpolate(&k, &samples)
}

/// Geometric smoothness of a plane quartic over a finite field of odd
/// characteristic: no common projective zero of the three partials over the
/// algebraic closure.
pub fn is_smooth_quartic(z: &TernaryQuartic, rng: &mut ChaCha8Rng) -> Result<bool> {
    let k = z.field().clone();
    if !k.is_finite() {
        return Err(Error::InvalidInput("smoothness test needs a finite field".into()));
    }
    if k.characteristic() == 2 {
        return Err(Error::InvalidInput("characteristic 2 not supported".into()));
    }
    let fx = z.mpoly().derivative(0);
    let fy = z.mpoly().derivative(1);
    let fz = z.mpoly().derivative(2);
    // a coordinate-free degenerate case: the quartic misses a variable
    if fx.is_zero() || fy.is_zero() || fz.is_zero() {
        return Ok(false);
    }
    // the point (1:0:0)
    let at = |m: &MPoly, x: &Elt, y: &Elt, zz: &Elt| -> Result<Elt> {
        m.eval(&[x.clone(), y.clone(), zz.clone()])
    };
    let (o, l) = (k.zero(), k.one());
    if at(&fx, &l, &o, &o)?.is_zero()
        && at(&fy, &l, &o, &o)?.is_zero()
        && at(&fz, &l, &o, &o)?.is_zero()
    {
        return Ok(false);
    }
    // the line z = 0: points (x : 1 : 0)
    let line_poly = |m: &MPoly| -> Result<Poly> {
        m.eval_var(2, &o)?.eval_var(1, &l)?.to_univariate(0)
    };
    let (lx, ly, lz) = (line_poly(&fx)?, line_poly(&fy)?, line_poly(&fz)?);
    let mut g = lx.clone();
    for other in [&ly, &lz] {
        g = if g.is_zero() {
            (*other).clone()
        } else if other.is_zero() {
            g
        } else {
            g.gcd(other)?
        };
    }
    if g.is_zero() || g.deg() > 0 {
        return Ok(false);
    }
    // affine chart z = 1: sample in a field with more than ~25 elements
    let q = k.order().unwrap();
    let need = BigUint::from(32u32);
    let (sample_field, img) = if q >= need {
        (k.clone(), finite_gen_image(&k, &k, rng)?)
    } else {
        let mut e = 2usize;
        while k.order().unwrap().pow(e as u32) < need {
            e += 1;
        }
        let big = factor::extension_field(k.characteristic(), k.degree() * e, rng)?;
        let img = finite_gen_image(&k, &big, rng)?;
        (big, img)
    };
    let r1 = resultant_in_x(&fx, &fy, &sample_field, &img, rng)?;
    let r2 = resultant_in_x(&fx, &fz, &sample_field, &img, rng)?;
    if r1.is_zero() || r2.is_zero() {
        // the partials share a curve component; it meets the third partial
        return Ok(false);
    }
    let g12 = r1.gcd(&r2)?;
    if g12.deg() == 0 {
        return Ok(true);
    }
    // inspect each candidate y₀ over the closure
    let fac = factor::factor(&g12, rng)?;
    for (h, _) in &fac.factors {
        // realize a root of h in a large enough extension of the prime field
        let fdeg = sample_field.degree() * h.deg();
        let (root_field, root) = if h.deg() == 1 {
            let r = h.coeff(0).neg().div(&h.lc())?;
            (sample_field.clone(), r)
        } else {
            let big = factor::extension_field(k.characteristic(), fdeg, rng)?;
            let s_img = finite_gen_image(&sample_field, &big, rng)?;
            let hb = embed_poly_finite(h, &big, &s_img)?;
            let rs = factor::roots(&hb, rng)?;
            let r = rs.into_iter().min().ok_or_else(|| {
                Error::VerificationFailed("factor has no root in its splitting field".into())
            })?;
            (big, r)
        };
        // specialize the three partials at y = y₀, z = 1 over root_field
        let base_img = finite_gen_image(&k, &root_field, rng)?;
        let specialize = |m: &MPoly| -> Result<Poly> {
            let slices = m.eval_var(2, &k.one())?.coeffs_in(0);
            let coeffs: Vec<Elt> = slices
                .iter()
                .map(|s| {
                    let u = s.to_univariate(1)?;
                    Ok(embed_poly_finite(&u, &root_field, &base_img)?.eval(&root))
                })
                .collect::<Result<_>>()?;
            Ok(Poly::new(&root_field, coeffs))
        };
        let (sx, sy, sz) = (specialize(&fx)?, specialize(&fy)?, specialize(&fz)?);
        let mut common = sx.clone();
        for other in [&sy, &sz] {
            common = if common.is_zero() {
                (*other).clone()
            } else if other.is_zero() {
                common
            } else {
                common.gcd(other)?
            };
        }
        if common.is_zero() || common.deg() > 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Brute-force plane-quartic equivalence over tiny prime fields.
// ---------------------------------------------------------------------------

/// Search PGL₃(F_p), p ≤ 11 prime, for T with F·T projectively equal to G.
pub fn quartic_equivalent_bruteforce(
    f: &TernaryQuartic,
    g: &TernaryQuartic,
) -> Result<Option<Matrix3>> {
    let k = f.field().clone();
    if g.field() != &k {
        return Err(Error::FieldMismatch("quartics over different fields".into()));
    }
    let p = match k.kind() {
        FieldKind::Prime { p } if *p <= 11 => *p,
        _ => {
            return Err(Error::InvalidInput(
                "brute-force search limited to prime fields with p ≤ 11".into(),
            ))
        }
    };
    // u64 fast path: coefficients and sample evaluations mod p
    let fc: Vec<u64> = f.coeffs().iter().map(|c| c.as_fp().unwrap()).collect();
    let gc: Vec<u64> = g.coeffs().iter().map(|c| c.as_fp().unwrap()).collect();
    let monos = crate::forms::QUARTIC_MONOMIALS;
    let eval = |c: &[u64], v: &[u64; 3]| -> u64 {
        let mut acc = 0u64;
        for (mono, &cf) in monos.iter().zip(c) {
            if cf == 0 {
                continue;
            }
            let mut t = cf;
            for (i, &e) in mono.iter().enumerate() {
                for _ in 0..e {
                    t = t * v[i] % p;
                }
            }
            acc = (acc + t) % p;
        }
        acc
    };
    let samples: Vec<[u64; 3]> = vec![
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
        [1, 1, 0],
        [1, 0, 1],
        [1, 1, 1],
        [1, 2 % p, 1],
    ];
    let gs: Vec<u64> = samples.iter().map(|v| eval(&gc, v)).collect();
    let det3 = |m: &[[u64; 3]; 3]| -> u64 {
        let pos = m[0][0] * m[1][1] % p * m[2][2] % p
            + m[0][1] * m[1][2] % p * m[2][0] % p
            + m[0][2] * m[1][0] % p * m[2][1] % p;
        let neg = m[0][2] * m[1][1] % p * m[2][0] % p
            + m[0][0] * m[1][2] % p * m[2][1] % p
            + m[0][1] * m[1][0] % p * m[2][2] % p;
        (pos + 3 * p * p * p - neg) % p
    };
    let p3 = p * p * p;
    let decode = |mut i: u64| -> [u64; 3] {
        let a = i % p;
        i /= p;
        let b = i % p;
        i /= p;
        [a, b, i]
    };
    for i0 in 1..p3 {
        let r0 = decode(i0);
        // normalize: the first nonzero entry of the matrix is 1
        if *r0.iter().find(|&&x| x != 0).unwrap() != 1 {
            continue;
        }
        for i1 in 1..p3 {
            let r1 = decode(i1);
            for i2 in 1..p3 {
                let r2 = decode(i2);
                let t = [r0, r1, r2];
                if det3(&t) == 0 {
                    continue;
                }
                // prefilter on sample points: F(T·v) must be proportional
                // to G(v) with one common ratio
                let mut ratio: Option<(u64, u64)> = None; // (fv, gv) reference
                let mut ok = true;
                for (v, &gv) in samples.iter().zip(&gs) {
                    let tv = [
                        (t[0][0] * v[0] + t[0][1] * v[1] + t[0][2] * v[2]) % p,
                        (t[1][0] * v[0] + t[1][1] * v[1] + t[1][2] * v[2]) % p,
                        (t[2][0] * v[0] + t[2][1] * v[1] + t[2][2] * v[2]) % p,
                    ];
                    let fv = eval(&fc, &tv);
                    match ratio {
                        None => {
                            if (fv == 0) != (gv == 0) {
                                ok = false;
                                break;
                            }
                            if fv != 0 {
                                ratio = Some((fv, gv));
                            }
                        }
                        Some((fr, gr)) => {
                            if fv * gr % p != fr * gv % p {
                                ok = false;
                                break;
                            }
                        }
                    }
                }
                if !ok {
                    continue;
                }
                // full check
                let m = Matrix3::new([
                    [k.from_i64(t[0][0] as i64), k.from_i64(t[0][1] as i64), k.from_i64(t[0][2] as i64)],
                    [k.from_i64(t[1][0] as i64), k.from_i64(t[1][1] as i64), k.from_i64(t[1][2] as i64)],
                    [k.from_i64(t[2][0] as i64), k.from_i64(t[2][1] as i64), k.from_i64(t[2][2] as i64)],
                ]);
                let ft = f.act(&m)?;
                if proportional_quartics(&ft, g) {
                    return Ok(Some(m));
                }
            }
        }
    }
    Ok(None)
}

/// Projective equality of two quartics (coefficient vectors proportional).
pub fn proportional_quartics(a: &TernaryQuartic, b: &TernaryQuartic) -> bool {
    let ca = a.coeffs();
    let cb = b.coeffs();
    let mut ratio: Option<(Elt, Elt)> = None;
    for (x, y) in ca.iter().zip(cb.iter()) {
        if x.is_zero() != y.is_zero() {
            return false;
        }
        if x.is_zero() {
            continue;
        }
        match &ratio {
            None => ratio = Some((x.clone(), y.clone())),
            Some((rx, ry)) => {
                if &x.mul(ry) != &y.mul(rx) {
                    return false;
                }
            }
        }
    }
    ratio.is_some()
}

// ---------------------------------------------------------------------------
// The printed Galois-matrix linear algebra for the 70-torsion example.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct GaloisMatrixReport {
    /// U is stable under both generators (right action).
    pub u_stable: bool,
    /// The induced action on V/U in the basis (e₂, e₃, e₆) matches the
    /// printed pair of 3×3 matrices.
    pub quotient_matches: bool,
    /// The fixed subspace of the quotient is exactly ⟨image of e₆⟩.
    pub fixed_line_e6: bool,
}

const GAL_M1: [[u64; 6]; 6] = [
    [1, 1, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0],
    [0, 0, 1, 1, 1, 0],
    [0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 1, 1],
];
const GAL_M2: [[u64; 6]; 6] = [
    [1, 1, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0],
    [0, 0, 1, 1, 1, 0],
    [0, 0, 0, 1, 0, 0],
    [0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 1],
];
const GAL_U: [[u64; 6]; 3] = [
    [1, 0, 1, 0, 0, 0],
    [0, 1, 0, 1, 0, 0],
    [0, 0, 0, 0, 1, 0],
];
const GAL_Q1: [[u64; 3]; 3] = [[1, 1, 0], [1, 0, 0], [0, 0, 1]];
const GAL_Q2: [[u64; 3]; 3] = [[1, 1, 0], [0, 1, 0], [0, 0, 1]];

fn row_times_matrix(v: &[u64; 6], m: &[[u64; 6]; 6]) -> [u64; 6] {
    let mut out = [0u64; 6];
    for j in 0..6 {
        for i in 0..6 {
            out[j] = (out[j] + v[i] * m[i][j]) % 2;
        }
    }
    out
}

/// Check the printed F₂ linear algebra of the 70-torsion example: stability
/// of U under the two Galois generators, the induced quotient matrices, and
/// the unique fixed line in the quotient.
pub fn galois_matrix_check() -> GaloisMatrixReport {
    let u_rows: Vec<Vec<u64>> = GAL_U.iter().map(|r| r.to_vec()).collect();
    let in_u = |v: &[u64; 6]| -> bool {
        crate::twotorsion::rref_mod(
            &{
                let mut rows = u_rows.clone();
                rows.push(v.to_vec());
                rows
            },
            2,
        )
        .len()
            == 3
    };
    let mut u_stable = true;
    for m in [&GAL_M1, &GAL_M2] {
        for r in &GAL_U {
            if !in_u(&row_times_matrix(r, m)) {
                u_stable = false;
            }
        }
    }
    // quotient basis: images of e₂, e₃, e₆ (1-indexed)
    let basis_idx = [1usize, 2, 5];
    // full basis of F₂⁶: U rows then e₂, e₃, e₆ — coordinates by elimination
    let coords_mod_u = |v: &[u64; 6]| -> Option<[u64; 3]> {
        // solve v = Σ aᵢ·Uᵢ + Σ bⱼ·eⱼ over F₂ by brute force (64 cases)
        for code in 0u32..64 {
            let mut acc = [0u64; 6];
            for i in 0..3 {
                if code >> i & 1 == 1 {
                    for c in 0..6 {
                        acc[c] ^= GAL_U[i][c];
                    }
                }
            }
            let mut b = [0u64; 3];
            for j in 0..3 {
                if code >> (3 + j) & 1 == 1 {
                    b[j] = 1;
                    acc[basis_idx[j]] ^= 1;
                }
            }
            if acc == *v {
                return Some(b);
            }
        }
        None
    };
    let mut quotient_matches = true;
    let mut qmats = vec![];
    for m in [&GAL_M1, &GAL_M2] {
        let mut qm = [[0u64; 3]; 3];
        for (r, &bi) in basis_idx.iter().enumerate() {
            let mut e = [0u64; 6];
            e[bi] = 1;
            match coords_mod_u(&row_times_matrix(&e, m)) {
                Some(b) => qm[r] = b,
                None => quotient_matches = false,
            }
        }
        qmats.push(qm);
    }
    // The printed 3×3 matrices list the quotient basis in the order
    // (e₃, e₂, e₆); conjugate the computed action by the swap of the first
    // two coordinates before comparing.
    let swap_conj = |m: &[[u64; 3]; 3]| -> [[u64; 3]; 3] {
        let perm = [1usize, 0, 2];
        let mut out = [[0u64; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                out[i][j] = m[perm[i]][perm[j]];
            }
        }
        out
    };
    if swap_conj(&qmats[0]) != GAL_Q1 || swap_conj(&qmats[1]) != GAL_Q2 {
        quotient_matches = false;
    }
    // fixed vectors of the quotient action (right action by the printed
    // matrices): v with v·Q = v for both
    let apply3 = |v: &[u64; 3], m: &[[u64; 3]; 3]| -> [u64; 3] {
        let mut out = [0u64; 3];
        for j in 0..3 {
            for i in 0..3 {
                out[j] = (out[j] + v[i] * m[i][j]) % 2;
            }
        }
        out
    };
    let mut fixed = vec![];
    for code in 1u32..8 {
        let v = [code as u64 & 1, (code >> 1) as u64 & 1, (code >> 2) as u64 & 1];
        if apply3(&v, &GAL_Q1) == v && apply3(&v, &GAL_Q2) == v {
            fixed.push(v);
        }
    }
    let fixed_line_e6 = fixed == vec![[0, 0, 1]];
    GaloisMatrixReport {
        u_stable,
        quotient_matches,
        fixed_line_e6,
    }
}

// ---------------------------------------------------------------------------
// Reduction of rational data modulo a prime.
// ---------------------------------------------------------------------------

/// Reduce a rational number modulo p (the target prime field); errors when
/// the denominator vanishes mod p.
pub fn reduce_rational(e: &Elt, fp: &Field) -> Result<Elt> {
    let r = e
        .as_rational()
        .ok_or_else(|| Error::InvalidInput("rational element expected".into()))?;
    let p = num_bigint::BigInt::from(fp.characteristic());
    if r.denom().mod_floor(&p).is_zero() {
        return Err(Error::InvalidInput(format!(
            "denominator divisible by {}",
            fp.characteristic()
        )));
    }
    let n = r.numer().mod_floor(&p).to_i64().unwrap();
    let d = r.denom().mod_floor(&p).to_i64().unwrap();
    fp.from_i64(n).div(&fp.from_i64(d))
}

/// Coefficientwise reduction of a rational polynomial modulo p.
pub fn reduce_poly(q: &Poly, fp: &Field) -> Result<Poly> {
    let coeffs: Vec<Elt> = q
        .coeffs()
        .iter()
        .map(|c| reduce_rational(c, fp))
        .collect::<Result<_>>()?;
    Ok(Poly::new(fp, coeffs))
}

/// Coefficientwise reduction of a rational ternary quartic modulo p.
pub fn reduce_quartic(z: &TernaryQuartic, fp: &Field) -> Result<TernaryQuartic> {
    let coeffs: Vec<Elt> = z
        .coeffs()
        .iter()
        .map(|c| reduce_rational(c, fp))
        .collect::<Result<_>>()?;
    TernaryQuartic::from_coeffs(fp, &coeffs)
}

/// Whether p is a good odd prime for the reduction of the gluing data
/// (models stay separable / smooth with the right degrees, μ stays a unit).
pub fn is_good_prime(
    p: u64,
    p_x: &Poly,
    p_y: &Poly,
    z: &TernaryQuartic,
    mu: &Elt,
    rng: &mut ChaCha8Rng,
) -> bool {
    if p == 2 {
        return false;
    }
    let fp = match Field::prime(p) {
        Ok(f) => f,
        Err(_) => return false,
    };
    let mut check = || -> Result<bool> {
        let px = reduce_poly(p_x, &fp)?;
        let py = reduce_poly(p_y, &fp)?;
        if px.deg() != p_x.deg() || py.deg() != p_y.deg() {
            return Ok(false);
        }
        if !px.is_separable()? || !py.is_separable()? {
            return Ok(false);
        }
        let zp = reduce_quartic(z, &fp)?;
        let mp = reduce_rational(mu, &fp)?;
        if mp.is_zero() {
            return Ok(false);
        }
        is_smooth_quartic(&zp, rng)
    };
    check().unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;

    use rand::SeedableRng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(23)
    }

    /// The printed 70-torsion quartic.
    fn z70(f: &Field) -> TernaryQuartic {
        // 32x⁴ + 3x²y² − 132x²yz + 37x²z² + 3y⁴ − 14y³z + 7y²z² − 6yz³ − 2z⁴
        let monos: [([u16; 3], i64); 9] = [
            ([4, 0, 0], 32),
            ([2, 2, 0], 3),
            ([2, 1, 1], -132),
            ([2, 0, 2], 37),
            ([0, 4, 0], 3),
            ([0, 3, 1], -14),
            ([0, 2, 2], 7),
            ([0, 1, 3], -6),
            ([0, 0, 4], -2),
        ];
        let mut m = MPoly::zero(f, 3);
        for (e, c) in monos {
            m = m.add(&MPoly::monomial(f, e.to_vec(), f.from_i64(c)));
        }
        TernaryQuartic::new(m).unwrap()
    }

    fn px70(f: &Field) -> Poly {
        Poly::from_i64(f, &[157, -98, 5, 4])
    }

    fn py70(f: &Field) -> Poly {
        Poly::from_i64(f, &[1, 0, -4, 2, 0, 0, 1])
    }

    fn f3_curves(f3: &Field) -> (Poly, Poly, TernaryQuartic, TernaryQuartic) {
        let p_x = Poly::from_i64(f3, &[1, 1, 0, 2, 1]);
        let p_y = Poly::from_i64(f3, &[1, 2, 1, 1, 1, 0, 2]);
        let quart = |monos: &[([u16; 3], i64)]| {
            let mut m = MPoly::zero(f3, 3);
            for (e, c) in monos {
                m = m.add(&MPoly::monomial(f3, e.to_vec(), f3.from_i64(*c)));
            }
            TernaryQuartic::new(m).unwrap()
        };
        // Z₁ = x⁴ + x²yz + 2x²z² + 2y³z + y²z² + z⁴
        let z1 = quart(&[
            ([4, 0, 0], 1),
            ([2, 1, 1], 1),
            ([2, 0, 2], 2),
            ([0, 3, 1], 2),
            ([0, 2, 2], 1),
            ([0, 0, 4], 1),
        ]);
        // Z₂ = x⁴ + 2x²yz + x²z² + 2y³z + y²z² + z⁴
        let z2 = quart(&[
            ([4, 0, 0], 1),
            ([2, 1, 1], 2),
            ([2, 0, 2], 1),
            ([0, 3, 1], 2),
            ([0, 2, 2], 1),
            ([0, 0, 4], 1),
        ]);
        (p_x, p_y, z1, z2)
    }

    #[test]
    fn quotient_quartic_trivial() {
        // Z = x⁴ − q(y,z) → p = 4q with q = y⁴ + y²z² + z⁴
        let f = Field::prime(13).unwrap();
        let mut m = MPoly::monomial(&f, vec![4, 0, 0], f.one());
        for e in [[0u16, 4, 0], [0, 2, 2], [0, 0, 4]] {
            m = m.sub(&MPoly::monomial(&f, e.to_vec(), f.one()));
        }
        let z = TernaryQuartic::new(m).unwrap();
        let p = quotient_quartic(&z).unwrap();
        let four = f.from_i64(4);
        assert_eq!(p.coeff(4), four);
        assert_eq!(p.coeff(2), four);
        assert_eq!(p.coeff(0), four);
        assert_eq!(p.coeff(3), f.zero());
    }

    #[test]
    fn ij_examples_and_covariance() {
        let q = Field::rationals();
        // p = y⁴ + z⁴ → I = 12, J = 0
        let p = BinaryForm::from_poly(&Poly::from_i64(&q, &[1, 0, 0, 0, 1]), 4).unwrap();
        let inv = binary_quartic_ij(&p).unwrap();
        assert_eq!(inv.i, q.from_i64(12));
        assert_eq!(inv.j, q.zero());
        // scaling by c: (I, J) ↦ (c²I, c³J)
        let f = Field::prime(101).unwrap();
        let mut r = rng();
        for _ in 0..10 {
            let poly = Poly::random(&f, 4, &mut r);
            if poly.deg() < 1 {
                continue;
            }
            let b = BinaryForm::from_poly(&poly, 4).unwrap();
            let c = loop {
                let c = f.random(&mut r);
                if !c.is_zero() {
                    break c;
                }
            };
            let i1 = binary_quartic_ij(&b).unwrap();
            let i2 = binary_quartic_ij(&b.scale(&c)).unwrap();
            assert_eq!(i2.i, c.mul(&c).mul(&i1.i));
            assert_eq!(i2.j, c.mul(&c).mul(&c).mul(&i1.j));
        }
    }

    #[test]
    fn ij_j_consistency_by_counting() {
        // y² = p(x) and y² = x³ − 27I·x − 27J have equal counts over F_q
        let f = Field::prime(13).unwrap();
        let mut r = rng();
        let mut done = 0;
        while done < 10 {
            let p = Poly::random(&f, 4, &mut r);
            if p.deg() != 4 || !p.is_separable().unwrap() {
                continue;
            }
            let inv = binary_quartic_ij(&BinaryForm::from_poly(&p, 4).unwrap()).unwrap();
            let e = Poly::new(
                &f,
                vec![
                    f.from_i64(-27).mul(&inv.j),
                    f.from_i64(-27).mul(&inv.i),
                    f.zero(),
                    f.one(),
                ],
            );
            if !e.is_separable().unwrap() {
                continue;
            }
            done += 1;
            let n1 = count_hyperelliptic(&p).unwrap();
            let n2 = count_hyperelliptic(&e).unwrap();
            assert_eq!(n1, n2, "p = {:?}", p);
        }
    }

    #[test]
    fn count_basic_example() {
        let f = Field::prime(5).unwrap();
        let c = Poly::from_i64(&f, &[0, -1, 0, 1]); // x³ − x
        let rec = count_points(&CurveKind::Hyperelliptic(c), 2, 1 << 20, &mut rng()).unwrap();
        assert_eq!(rec.count(1), Some(8));
    }

    #[test]
    fn dual_method_quartic_counts() {
        let mut r = rng();
        for p in [11u64, 13] {
            let f = Field::prime(p).unwrap();
            let z = z70(&f);
            assert!(is_smooth_quartic(&z, &mut r).unwrap());
            let fib = count_quartic_fibered(&z).unwrap();
            let scan = count_quartic_scan(&z).unwrap();
            assert_eq!(fib, scan);
        }
    }

    #[test]
    fn smoothness_detects_singular() {
        let f = Field::prime(7).unwrap();
        let mut r = rng();
        // x⁴ − y²z² is singular (e.g. at (0:0:1))
        let m = MPoly::monomial(&f, vec![4, 0, 0], f.one())
            .sub(&MPoly::monomial(&f, vec![0, 2, 2], f.one()));
        let z = TernaryQuartic::new(m).unwrap();
        assert!(!is_smooth_quartic(&z, &mut r).unwrap());
        // Fermat quartic is smooth away from characteristic 2
        let mut fm = MPoly::zero(&f, 3);
        for e in [[4u16, 0, 0], [0, 4, 0], [0, 0, 4]] {
            fm = fm.add(&MPoly::monomial(&f, e.to_vec(), f.one()));
        }
        let fq = TernaryQuartic::new(fm).unwrap();
        assert!(is_smooth_quartic(&fq, &mut r).unwrap());
    }

    #[test]
    fn lpoly_shapes() {
        // supersingular genus 1: N(q) = q + 1 → L = 1 + qT²
        let rec = CountRecord {
            q: 7,
            genus: 1,
            counts: vec![(1, 8)],
            method: "test".into(),
        };
        let l = lpoly(&rec).unwrap();
        assert_eq!(l.coeffs, vec![1, 0, 7]);
        // genus 1: L(1) = N(q)
        let rec2 = CountRecord {
            q: 7,
            genus: 1,
            counts: vec![(1, 11)],
            method: "test".into(),
        };
        assert_eq!(lpoly(&rec2).unwrap().l1(), 11);
    }

    #[test]
    fn g1_check_eq70() {
        let q = Field::rationals();
        let z = z70(&q);
        let mut r = rng();
        let rep = g1_check(&z, &px70(&q), &mut r).unwrap();
        assert!(rep.equivalent_over_closure);
        let mu = rep.twist_class.expect("twist scalar");
        assert_eq!(square_class_rep(&mu).unwrap(), q.from_i64(5));
        // unrelated X → false
        let bad = Poly::from_i64(&q, &[1, 3, 0, 1]);
        let rep2 = g1_check(&z, &bad, &mut r).unwrap();
        assert!(!rep2.equivalent_over_closure);
    }

    #[test]
    fn trace_identity_eq70() {
        let q = Field::rationals();
        let z = z70(&q);
        let (p_x, p_y) = (px70(&q), py70(&q));
        let mu = q.from_i64(5);
        let mut r = rng();
        let mut good = vec![];
        for p in [3u64, 7, 11, 13, 17, 19, 23, 29] {
            if is_good_prime(p, &p_x, &p_y, &z, &mu, &mut r) {
                good.push(p);
            }
            if good.len() == 3 {
                break;
            }
        }
        assert!(good.len() >= 2, "not enough good primes found: {:?}", good);
        // the printed model carries twist class 5 on the genus-1 factor and
        // −5 on the Prym factor
        let mu_y = q.from_i64(-5);
        for &p in &good {
            let fp = Field::prime(p).unwrap();
            let rep = trace_identity_split(
                &reduce_quartic(&z, &fp).unwrap(),
                &reduce_rational(&mu, &fp).unwrap(),
                &reduce_rational(&mu_y, &fp).unwrap(),
                &reduce_poly(&p_x, &fp).unwrap(),
                &reduce_poly(&p_y, &fp).unwrap(),
                2,
                1 << 20,
                &mut r,
            )
            .unwrap();
            assert!(rep.pass, "trace identity failed at p = {}: {:?}", p, rep.rows);
            // χ-multiplicativity: μ·c² gives the same verdict
            let c = fp.from_i64(2);
            let mx2 = reduce_rational(&mu, &fp).unwrap().mul(&c).mul(&c);
            let my2 = reduce_rational(&mu_y, &fp).unwrap().mul(&c).mul(&c);
            let rep2 = trace_identity_split(
                &reduce_quartic(&z, &fp).unwrap(),
                &mx2,
                &my2,
                &reduce_poly(&p_x, &fp).unwrap(),
                &reduce_poly(&p_y, &fp).unwrap(),
                2,
                1 << 20,
                &mut r,
            )
            .unwrap();
            assert!(rep2.pass);
        }
    }

    #[test]
    fn trace_identity_f3_example() {
        let f3 = Field::prime(3).unwrap();
        let (p_x, p_y, z1, z2) = f3_curves(&f3);
        let mut r = rng();
        let rep1 = trace_identity(&z1, &f3.one(), &p_x, &p_y, 3, 1 << 20, &mut r).unwrap();
        assert!(rep1.pass, "{:?}", rep1.rows);
        let rep2 = trace_identity(&z2, &f3.from_i64(-1), &p_x, &p_y, 3, 1 << 20, &mut r).unwrap();
        assert!(rep2.pass, "{:?}", rep2.rows);
        // the wrong twist fails
        let bad = trace_identity(&z2, &f3.one(), &p_x, &p_y, 3, 1 << 20, &mut r).unwrap();
        assert!(!bad.pass);
    }

    #[test]
    fn torsion_70() {
        let q = Field::rationals();
        let z = z70(&q);
        let (p_x, p_y) = (px70(&q), py70(&q));
        let mu = q.from_i64(5);
        let mut r = rng();
        let mut tested = 0;
        for p in [3u64, 7, 11, 13, 17] {
            if !is_good_prime(p, &p_x, &p_y, &z, &mu, &mut r) {
                continue;
            }
            let fp = Field::prime(p).unwrap();
            let zp = reduce_quartic(&z, &fp).unwrap();
            let mx = reduce_rational(&mu, &fp).unwrap();
            let my = reduce_rational(&q.from_i64(-5), &fp).unwrap();
            assert!(torsion_divisibility_split(&zp, &mx, &my, 70, 1 << 21, &mut r).unwrap());
            assert!(torsion_divisibility_split(&zp, &mx, &my, 1, 1 << 21, &mut r).unwrap());
            // n = L̃(1) + 1 never divides: recompute the split twisted order
            let rec = count_points(&CurveKind::PlaneQuartic(zp.clone()), 3, 1 << 21, &mut r)
                .unwrap();
            let l = lpoly(&rec).unwrap();
            let e = quotient_quartic(&zp).unwrap().to_poly();
            let rec_e =
                count_points(&CurveKind::Hyperelliptic(e), 1, 1 << 21, &mut r).unwrap();
            let le = lpoly(&rec_e).unwrap();
            let lt = if quadratic_character(&mx).unwrap() == quadratic_character(&my).unwrap()
            {
                l.twisted(quadratic_character(&mx).unwrap()).l1()
            } else {
                le.twisted(quadratic_character(&mx).unwrap()).l1()
                    * lpoly_div(&l, &le)
                        .unwrap()
                        .twisted(quadratic_character(&my).unwrap())
                        .l1()
            };
            assert!(
                !torsion_divisibility_split(&zp, &mx, &my, lt as u64 + 1, 1 << 21, &mut r)
                    .unwrap()
            );
            tested += 1;
            if tested == 2 {
                break;
            }
        }
        assert!(tested >= 1);
    }

    #[test]
    fn bruteforce_identity_and_roundtrip() {
        let f3 = Field::prime(3).unwrap();
        let (_, _, z1, _) = f3_curves(&f3);
        let t = quartic_equivalent_bruteforce(&z1, &z1).unwrap();
        assert!(t.is_some());
        // F vs F·T₀ for random T₀
        let mut r = rng();
        let mut done = 0;
        while done < 3 {
            let entries: Vec<Elt> = (0..9).map(|_| f3.random(&mut r)).collect();
            let m = Matrix3::new([
                [entries[0].clone(), entries[1].clone(), entries[2].clone()],
                [entries[3].clone(), entries[4].clone(), entries[5].clone()],
                [entries[6].clone(), entries[7].clone(), entries[8].clone()],
            ]);
            if m.det().is_zero() {
                continue;
            }
            done += 1;
            let g = z1.act(&m).unwrap();
            let w = quartic_equivalent_bruteforce(&z1, &g).unwrap();
            let w = w.expect("witness expected");
            assert!(proportional_quartics(&z1.act(&w).unwrap(), &g));
        }
    }

    #[test]
    fn bruteforce_f3_pair_outcome() {
        // the two printed gluings over F₃: record whether they are
        // PGL₃-equivalent (the construction does not assert either way)
        let f3 = Field::prime(3).unwrap();
        let (_, _, z1, z2) = f3_curves(&f3);
        let w = quartic_equivalent_bruteforce(&z1, &z2).unwrap();
        // exhaustive scan is deterministic; pin the observed outcome so a
        // regression in the search is visible
        assert!(w.is_none(), "unexpectedly equivalent via {:?}", w);
    }

    #[test]
    fn galois_matrices_ex70() {
        let rep = galois_matrix_check();
        assert!(rep.u_stable);
        assert!(rep.quotient_matches);
        assert!(rep.fixed_line_e6);
    }
}
