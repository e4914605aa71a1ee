//! Polynomial factorization over all supported fields.
//!
//! * Finite fields: squarefree decomposition, distinct-degree splitting, and
//!   randomized Cantor–Zassenhaus equal-degree splitting (odd q).
//! * Rationals: squarefree decomposition, factorization modulo a good prime,
//!   quadratic Hensel lifting, and bounded factor recombination (Zassenhaus).
//!   Degrees up to 18 are supported, which covers every norm polynomial this
//!   crate ever builds (a cubic over a degree-6 quotient algebra).
//! * Quotient algebras ℚ[t]/(m): Trager's norm method, reducing to the
//!   rational case.
//!
//! All randomness flows through an explicit seedable generator so CLI runs
//! are reproducible.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Elt, Field, FieldKind};
use crate::poly::Poly;

/// A complete factorization `unit · ∏ fᵢ^{eᵢ}` with monic irreducible `fᵢ`.
#[derive(Debug, Clone)]
pub struct Factorization {
    /// The scalar unit (the original leading structure).
    pub unit: Elt,
    /// Monic irreducible factors with multiplicities, deterministically sorted.
    pub factors: Vec<(Poly, usize)>,
}

impl Factorization {
    /// Re-expand the factorization (used in round-trip tests).
    pub fn expand(&self) -> Poly {
        let mut acc = Poly::constant(&self.unit);
        for (f, e) in &self.factors {
            for _ in 0..*e {
                acc = acc.mul(f);
            }
        }
        acc
    }
}

/// Factor a nonconstant polynomial over its coefficient field.
pub fn factor(p: &Poly, rng: &mut ChaCha8Rng) -> Result<Factorization> {
    if p.deg() == 0 || p.is_zero() {
        return Err(Error::InvalidInput("factor of a constant".into()));
    }
    let mut factors = match p.field().kind() {
        FieldKind::Prime { .. } | FieldKind::Extension { .. } => factor_finite(p, rng)?,
        FieldKind::Rationals => factor_rationals(p)?,
        FieldKind::RationalQuotient { .. } => factor_trager(p, rng)?,
    };
    factors.sort_by(|a, b| {
        (a.0.deg(), a.0.coeffs())
            .cmp(&(b.0.deg(), b.0.coeffs()))
            .then(a.1.cmp(&b.1))
    });
    Ok(Factorization {
        unit: p.lc(),
        factors,
    })
}

/// All roots of `p` in its own coefficient field.
pub fn roots(p: &Poly, rng: &mut ChaCha8Rng) -> Result<Vec<Elt>> {
    let f = factor(p, rng)?;
    let mut out = vec![];
    for (g, e) in f.factors {
        if g.deg() == 1 {
            let root = g.coeff(0).neg();
            for _ in 0..e {
                out.push(root.clone());
            }
        }
    }
    Ok(out)
}

/// Square root of a field element through root finding on x² − a;
/// works uniformly over every supported field.
pub fn sqrt_in_field(a: &Elt, rng: &mut ChaCha8Rng) -> Result<Option<Elt>> {
    if a.is_zero() {
        return Ok(Some(a.clone()));
    }
    let f = a.field();
    let p = Poly::new(f, vec![a.neg(), f.zero(), f.one()]);
    let mut rs = roots(&p, rng)?;
    rs.sort();
    Ok(rs.into_iter().next())
}

/// Irreducibility test (any field).
pub fn is_irreducible(p: &Poly, rng: &mut ChaCha8Rng) -> Result<bool> {
    if p.deg() == 0 {
        return Ok(false);
    }
    if p.deg() == 1 {
        return Ok(true);
    }
    let f = factor(p, rng)?;
    Ok(f.factors.len() == 1 && f.factors[0].1 == 1)
}

/// Build F_{p^k} with a deterministically chosen irreducible modulus.
pub fn extension_field(p: u64, k: usize, rng: &mut ChaCha8Rng) -> Result<Field> {
    if k == 1 {
        return Field::prime(p);
    }
    let fp = Field::prime(p)?;
    // Deterministic scan: x^k + c x + d over increasing (c, d), then random.
    for c in 0..p.min(50) {
        for d in 0..p.min(50) {
            let mut coeffs = vec![0i64; k + 1];
            coeffs[0] = d as i64;
            coeffs[1] = c as i64;
            coeffs[k] = 1;
            let m = Poly::from_i64(&fp, &coeffs);
            if m.deg() == k && is_irreducible(&m, rng)? {
                let mv: Vec<u64> = m.coeffs().iter().map(|e| e.as_fp().unwrap()).collect();
                return Field::extension_unchecked(p, mv);
            }
        }
    }
    loop {
        let m = Poly::random(&fp, k, rng).monic()?;
        if is_irreducible(&m, rng)? {
            let mv: Vec<u64> = m.coeffs().iter().map(|e| e.as_fp().unwrap()).collect();
            return Field::extension_unchecked(p, mv);
        }
    }
}

/// Build ℚ[t]/(m) after checking `m` is irreducible over ℚ.
pub fn rational_quotient_field(m: &Poly, rng: &mut ChaCha8Rng) -> Result<Field> {
    if m.field() != &Field::rationals() {
        return Err(Error::InvalidInput("modulus must be over ℚ".into()));
    }
    if !is_irreducible(m, rng)? {
        return Err(Error::InvalidInput("modulus is reducible over ℚ".into()));
    }
    let mm = m.monic()?;
    let coeffs: Vec<BigRational> = mm
        .coeffs()
        .iter()
        .map(|c| c.as_rational().unwrap().clone())
        .collect();
    Field::rational_quotient_unchecked(coeffs)
}

// ---------------------------------------------------------------------------
// Finite fields.
// ---------------------------------------------------------------------------

fn factor_finite(p: &Poly, rng: &mut ChaCha8Rng) -> Result<Vec<(Poly, usize)>> {
    let monic = p.monic()?;
    let mut out = vec![];
    for (part, mult) in squarefree_decomposition(&monic)? {
        for irr in factor_squarefree_finite(&part, rng)? {
            out.push((irr, mult));
        }
    }
    Ok(out)
}

/// Squarefree decomposition over F_q, handling p-th power layers.
fn squarefree_decomposition(f: &Poly) -> Result<Vec<(Poly, usize)>> {
    let field = f.field().clone();
    let p = field.characteristic() as usize;
    let mut out: Vec<(Poly, usize)> = vec![];
    let mut stack = vec![(f.clone(), 1usize)];
    while let Some((f, scale)) = stack.pop() {
        if f.deg() == 0 {
            continue;
        }
        let df = f.derivative();
        if df.is_zero() {
            // f is a polynomial in x^p: take the p-th root.
            stack.push((pth_root(&f)?, scale * p));
            continue;
        }
        let mut g = f.gcd(&df)?;
        let mut w = f.div_exact(&g)?;
        let mut i = 1usize;
        while w.deg() > 0 {
            let y = w.gcd(&g)?;
            let z = w.div_exact(&y)?;
            if z.deg() > 0 {
                out.push((z.monic()?, i * scale));
            }
            i += 1;
            w = y;
            g = g.div_exact(&w)?;
        }
        if g.deg() > 0 {
            stack.push((g, scale));
        }
    }
    Ok(out)
}

/// p-th root of a polynomial in x^p over F_{p^k}: coefficient-wise inverse
/// Frobenius (x ↦ x^{p^{k−1}}) and exponent division.
fn pth_root(f: &Poly) -> Result<Poly> {
    let field = f.field().clone();
    let p = field.characteristic() as usize;
    let k = field.degree();
    let mut out = vec![];
    for (i, c) in f.coeffs().iter().enumerate() {
        if i % p != 0 {
            if !c.is_zero() {
                return Err(Error::InvalidInput("not a polynomial in x^p".into()));
            }
            continue;
        }
        out.push(c.frobenius_power(k - 1)?);
    }
    Ok(Poly::new(&field, out))
}

/// Factor a monic squarefree polynomial via distinct-degree then
/// Cantor–Zassenhaus equal-degree splitting.
fn factor_squarefree_finite(f: &Poly, rng: &mut ChaCha8Rng) -> Result<Vec<Poly>> {
    let field = f.field().clone();
    let q = field.order().unwrap();
    let mut out = vec![];
    let mut f = f.clone();
    let x = Poly::x(&field);
    let mut h = x.clone();
    let mut d = 0usize;
    while f.deg() >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(&q, &f)?;
        let g = h.sub(&x).gcd(&f).unwrap_or_else(|_| Poly::one(&field));
        if g.deg() > 0 {
            equal_degree_split(&g, d, &q, rng, &mut out)?;
            f = f.div_exact(&g)?;
            h = h.rem(&f)?;
        }
    }
    if f.deg() > 0 {
        out.push(f.monic()?);
    }
    Ok(out)
}

/// Cantor–Zassenhaus: split a product of distinct irreducibles of degree `d`.
fn equal_degree_split(
    f: &Poly,
    d: usize,
    q: &BigUint,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Poly>,
) -> Result<()> {
    let field = f.field().clone();
    if f.deg() == d {
        out.push(f.monic()?);
        return Ok(());
    }
    // exponent (q^d − 1)/2
    let e = (q.pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
    loop {
        let a = Poly::random(&field, f.deg() - 1, rng);
        let b = a.pow_mod(&e, f)?;
        let g = b.sub(&Poly::one(&field)).gcd(f);
        if let Ok(g) = g {
            if g.deg() > 0 && g.deg() < f.deg() {
                equal_degree_split(&g, d, q, rng, out)?;
                equal_degree_split(&f.div_exact(&g)?, d, q, rng, out)?;
                return Ok(());
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Rationals: Zassenhaus with quadratic Hensel lifting.
// ---------------------------------------------------------------------------

/// Supported degree cap over ℚ (largest Trager norm in scope).
pub const RATIONAL_DEGREE_CAP: usize = 18;

fn factor_rationals(p: &Poly) -> Result<Vec<(Poly, usize)>> {
    if p.deg() > RATIONAL_DEGREE_CAP {
        return Err(Error::InvalidInput(format!(
            "rational factorization capped at degree {}, got {}",
            RATIONAL_DEGREE_CAP,
            p.deg()
        )));
    }
    let field = p.field().clone();
    // Squarefree decomposition (Yun, characteristic 0).
    let monic = p.monic()?;
    let mut out = vec![];
    let mut g = monic.gcd(&monic.derivative())?;
    let mut w = monic.div_exact(&g)?;
    let mut i = 1usize;
    while w.deg() > 0 {
        let y = w.gcd(&g)?;
        let z = w.div_exact(&y)?;
        if z.deg() > 0 {
            for irr in factor_squarefree_rational(&z)? {
                out.push((irr, i));
            }
        }
        i += 1;
        w = y;
        g = g.div_exact(&w)?;
    }
    debug_assert!(g.deg() == 0);
    let _ = field;
    Ok(out)
}

/// Integer polynomial helpers (ascending `Vec<BigInt>`).
mod zpoly {
    use super::*;

    pub fn trim(v: &mut Vec<BigInt>) {
        while v.last().map(|c| c.is_zero()) == Some(true) {
            v.pop();
        }
    }

    pub fn mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        trim(&mut out);
        out
    }

    pub fn sub(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = a.len().max(b.len());
        let zero = BigInt::zero();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero));
        }
        trim(&mut out);
        out
    }

    pub fn add(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = a.len().max(b.len());
        let zero = BigInt::zero();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(a.get(i).unwrap_or(&zero) + b.get(i).unwrap_or(&zero));
        }
        trim(&mut out);
        out
    }

    /// Reduce coefficients into the symmetric range (−m/2, m/2].
    pub fn symmetric_mod(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
        let half = m / 2;
        let mut out: Vec<BigInt> = a
            .iter()
            .map(|c| {
                let mut r = c % m;
                if r.is_negative() {
                    r += m;
                }
                if r > half {
                    r -= m;
                }
                r
            })
            .collect();
        trim(&mut out);
        out
    }

    /// Division with remainder by a monic divisor, coefficients mod m.
    pub fn divrem_monic_mod(
        a: &[BigInt],
        b: &[BigInt],
        m: &BigInt,
    ) -> (Vec<BigInt>, Vec<BigInt>) {
        let mut r = symmetric_mod(a, m);
        let db = b.len() - 1;
        if r.len() <= db {
            return (vec![], r);
        }
        let mut q = vec![BigInt::zero(); r.len() - db];
        while r.len() > db {
            let c = r.last().unwrap().clone();
            let shift = r.len() - 1 - db;
            q[shift] = c.clone();
            for i in 0..=db {
                let t = &c * &b[i];
                r[shift + i] -= t;
            }
            r = symmetric_mod(&r, m);
            // the leading term cancelled exactly; enforce shrinkage
            if r.len() > shift + db {
                r.truncate(shift + db);
                trim(&mut r);
            }
        }
        (symmetric_mod(&q, m), r)
    }

    /// Exact division test over ℤ: returns Some(quotient) iff b | a.
    pub fn div_exact(a: &[BigInt], b: &[BigInt]) -> Option<Vec<BigInt>> {
        if b.is_empty() {
            return None;
        }
        let mut r: Vec<BigInt> = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let lb = b.last().unwrap();
        if r.is_empty() {
            return Some(vec![]);
        }
        if r.len() <= db {
            return None;
        }
        let mut q = vec![BigInt::zero(); r.len() - db];
        while r.len() > db {
            let (c, rem) = (r.last().unwrap() / lb, r.last().unwrap() % lb);
            if !rem.is_zero() {
                return None;
            }
            let shift = r.len() - 1 - db;
            q[shift] = c.clone();
            for i in 0..=db {
                let t = &c * &b[i];
                r[shift + i] -= t;
            }
            trim(&mut r);
        }
        if r.is_empty() {
            Some(q)
        } else {
            None
        }
    }

    /// Content (gcd of coefficients, positive).
    pub fn content(a: &[BigInt]) -> BigInt {
        let mut g = BigInt::zero();
        for c in a {
            g = num_integer::gcd(g, c.abs());
        }
        if g.is_zero() {
            BigInt::one()
        } else {
            g
        }
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive(a: &[BigInt]) -> Vec<BigInt> {
        let c = content(a);
        let mut out: Vec<BigInt> = a.iter().map(|x| x / &c).collect();
        if out.last().map(|c| c.is_negative()) == Some(true) {
            for x in out.iter_mut() {
                *x = -&*x;
            }
        }
        out
    }
}

/// Factor a monic squarefree polynomial over ℚ into monic irreducibles.
fn factor_squarefree_rational(p: &Poly) -> Result<Vec<Poly>> {
    let field = p.field().clone();
    if p.deg() == 1 {
        return Ok(vec![p.clone()]);
    }
    // Clear denominators → primitive integer polynomial g with lc c > 0,
    // then monicize via G(x) = c^{d−1} g(x/c).
    let mut den = BigInt::one();
    for c in p.coeffs() {
        let r = c.as_rational().unwrap();
        den = num_integer::lcm(den, r.denom().clone());
    }
    let gz: Vec<BigInt> = p
        .coeffs()
        .iter()
        .map(|c| {
            let r = c.as_rational().unwrap();
            (r * BigRational::from_integer(den.clone())).to_integer()
        })
        .collect();
    let gz = zpoly::primitive(&gz);
    let d = gz.len() - 1;
    let c = gz[d].clone();
    // G monic integer: G_i = g_i · c^{d−1−i}
    let big_g: Vec<BigInt> = gz
        .iter()
        .enumerate()
        .map(|(i, gi)| {
            if i == d {
                BigInt::one()
            } else {
                gi * c.pow((d - 1 - i) as u32)
            }
        })
        .collect();
    let int_factors = factor_monic_squarefree_int(&big_g)?;
    // Map back: factor h(x) of G ↦ pp(h(cx)) is a factor of g; monicize over ℚ.
    let mut out = vec![];
    for h in int_factors {
        let dh = h.len() - 1;
        let hc: Vec<BigInt> = h
            .iter()
            .enumerate()
            .map(|(i, hi)| hi * c.pow(i as u32))
            .collect();
        let prim = zpoly::primitive(&hc);
        let qpoly = Poly::new(
            &field,
            prim.iter()
                .map(|z| field.from_rational(&BigRational::from_integer(z.clone())).unwrap())
                .collect(),
        );
        debug_assert_eq!(qpoly.deg(), dh);
        out.push(qpoly.monic()?);
    }
    Ok(out)
}

/// Zassenhaus driver for a monic squarefree integer polynomial.
fn factor_monic_squarefree_int(g: &[BigInt]) -> Result<Vec<Vec<BigInt>>> {
    let d = g.len() - 1;
    if d == 1 {
        return Ok(vec![g.to_vec()]);
    }
    // Choose an odd prime with squarefree reduction.
    let mut chosen = None;
    'primes: for ell in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59] {
        let fp = Field::prime(ell)?;
        let gp = Poly::new(
            &fp,
            g.iter()
                .map(|z| fp.from_rational(&BigRational::from_integer(z.clone())).unwrap())
                .collect(),
        );
        if gp.deg() != d {
            continue 'primes;
        }
        if gp.is_separable()? {
            chosen = Some((ell, fp, gp));
            break;
        }
    }
    let (ell, fp, gp) = chosen.ok_or_else(|| {
        Error::InvalidInput("no good prime found for modular factorization".into())
    })?;
    // Factor mod ℓ.
    let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(0x5eed);
    let modular = factor_finite(&gp, &mut rng)?;
    let mod_factors: Vec<Vec<BigInt>> = modular
        .iter()
        .map(|(f, _)| {
            f.coeffs()
                .iter()
                .map(|e| BigInt::from(e.as_fp().unwrap()))
                .collect()
        })
        .collect();
    if mod_factors.len() == 1 {
        return Ok(vec![g.to_vec()]); // irreducible mod ℓ ⇒ irreducible over ℚ
    }
    // Landau–Mignotte bound for monic factors: 2^d · ||g||₂.
    let norm2_sq: BigInt = g.iter().map(|c| c * c).sum();
    let norm2 = norm2_sq.sqrt() + BigInt::one();
    let bound: BigInt = (BigInt::one() << d) * norm2 * 2 + BigInt::one();
    let mut e = 1u32;
    let mut modulus = BigInt::from(ell);
    while modulus < bound {
        modulus = &modulus * &modulus;
        e *= 2;
    }
    let _ = e;
    // Hensel-lift the full factor list to `modulus`.
    let lifted = hensel_tree(g, &mod_factors, ell, &modulus, &fp)?;
    // Recombination over subsets.
    recombine(g, lifted, &modulus)
}

/// Lift a factorization of `f` from mod ℓ to mod `target` (a power of ℓ),
/// recursively splitting the factor list in two.
fn hensel_tree(
    f: &[BigInt],
    factors: &[Vec<BigInt>],
    ell: u64,
    target: &BigInt,
    fp: &Field,
) -> Result<Vec<Vec<BigInt>>> {
    if factors.len() == 1 {
        return Ok(vec![zpoly::symmetric_mod(f, target)]);
    }
    let mid = factors.len() / 2;
    let (left, right) = factors.split_at(mid);
    let mut gl = vec![BigInt::one()];
    for h in left {
        gl = zpoly::mul(&gl, h);
    }
    let mut hr = vec![BigInt::one()];
    for h in right {
        hr = zpoly::mul(&hr, h);
    }
    let ellb = BigInt::from(ell);
    let gl = zpoly::symmetric_mod(&gl, &ellb);
    let hr = zpoly::symmetric_mod(&hr, &ellb);
    // Bezout over F_ℓ.
    let to_fp = |v: &[BigInt]| -> Poly {
        Poly::new(
            fp,
            v.iter()
                .map(|z| fp.from_rational(&BigRational::from_integer(z.clone())).unwrap())
                .collect(),
        )
    };
    let (gcd, s, t) = to_fp(&gl).ext_gcd(&to_fp(&hr))?;
    if gcd.deg() != 0 {
        return Err(Error::InvalidInput("modular factors not coprime".into()));
    }
    let from_fp = |p: &Poly| -> Vec<BigInt> {
        p.coeffs()
            .iter()
            .map(|e| BigInt::from(e.as_fp().unwrap()))
            .collect()
    };
    let (g_lift, h_lift) = hensel_pair(
        f,
        &gl,
        &hr,
        &from_fp(&s),
        &from_fp(&t),
        &ellb,
        target,
    )?;
    let mut out = hensel_tree(&g_lift, left, ell, target, fp)?;
    out.extend(hensel_tree(&h_lift, right, ell, target, fp)?);
    Ok(out)
}

/// Quadratic Hensel lifting: given f ≡ g·h (mod m) with monic f, g, h and
/// s·g + t·h ≡ 1 (mod m), returns (g*, h*) with f ≡ g*·h* (mod target).
fn hensel_pair(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
    target: &BigInt,
) -> Result<(Vec<BigInt>, Vec<BigInt>)> {
    let mut m = m.clone();
    let mut g = g.to_vec();
    let mut h = h.to_vec();
    let mut s = s.to_vec();
    let mut t = t.to_vec();
    while &m < target {
        let m2 = &m * &m;
        // err = f − g·h mod m²
        let err = zpoly::symmetric_mod(&zpoly::sub(f, &zpoly::mul(&g, &h)), &m2);
        // (q, r) = divrem(s·err, h); g* = g + t·err + q·g; h* = h + r
        let se = zpoly::mul(&s, &err);
        let (q, r) = zpoly::divrem_monic_mod(&se, &h, &m2);
        let g_new = zpoly::symmetric_mod(
            &zpoly::add(&zpoly::add(&g, &zpoly::mul(&t, &err)), &zpoly::mul(&q, &g)),
            &m2,
        );
        let h_new = zpoly::symmetric_mod(&zpoly::add(&h, &r), &m2);
        // Lift the Bezout pair: b = s·g* + t·h* − 1
        let mut b = zpoly::add(&zpoly::mul(&s, &g_new), &zpoly::mul(&t, &h_new));
        if b.is_empty() {
            b = vec![-BigInt::one()];
        } else {
            b[0] -= BigInt::one();
        }
        let b = zpoly::symmetric_mod(&b, &m2);
        let sb = zpoly::mul(&s, &b);
        let (cq, cr) = zpoly::divrem_monic_mod(&sb, &h_new, &m2);
        let s_new = zpoly::symmetric_mod(&zpoly::sub(&s, &cr), &m2);
        let t_new = zpoly::symmetric_mod(
            &zpoly::sub(&t, &zpoly::add(&zpoly::mul(&t, &b), &zpoly::mul(&cq, &g_new))),
            &m2,
        );
        g = g_new;
        h = h_new;
        s = s_new;
        t = t_new;
        m = m2;
    }
    Ok((zpoly::symmetric_mod(&g, target), zpoly::symmetric_mod(&h, target)))
}

/// Subset recombination of lifted modular factors into true integer factors.
fn recombine(
    g: &[BigInt],
    lifted: Vec<Vec<BigInt>>,
    modulus: &BigInt,
) -> Result<Vec<Vec<BigInt>>> {
    let mut remaining = g.to_vec();
    let mut pool: Vec<Vec<BigInt>> = lifted;
    let mut out = vec![];
    let mut size = 1usize;
    while 2 * size <= pool.len() {
        let mut advanced = false;
        // iterate over index subsets of `pool` of cardinality `size`
        let mut indices: Vec<usize> = (0..size).collect();
        'subsets: loop {
            // candidate = ∏ pool[i] mod modulus, symmetric
            let mut cand = vec![BigInt::one()];
            for &i in &indices {
                cand = zpoly::symmetric_mod(&zpoly::mul(&cand, &pool[i]), modulus);
            }
            if let Some(quot) = zpoly::div_exact(&remaining, &cand) {
                out.push(cand);
                remaining = quot;
                let drop: std::collections::BTreeSet<usize> = indices.iter().cloned().collect();
                pool = pool
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !drop.contains(i))
                    .map(|(_, f)| f)
                    .collect();
                advanced = true;
                break 'subsets;
            }
            // next subset (lexicographic)
            let mut i = size;
            loop {
                if i == 0 {
                    break 'subsets;
                }
                i -= 1;
                if indices[i] != i + pool.len() - size {
                    indices[i] += 1;
                    for j in i + 1..size {
                        indices[j] = indices[j - 1] + 1;
                    }
                    continue 'subsets;
                }
            }
        }
        if !advanced {
            size += 1;
        }
    }
    if remaining.len() > 1 {
        out.push(remaining);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Quotient algebras: Trager's norm method.
// ---------------------------------------------------------------------------

fn factor_trager(p: &Poly, rng: &mut ChaCha8Rng) -> Result<Vec<(Poly, usize)>> {
    let monic = p.monic()?;
    // Squarefree decomposition (characteristic 0: Yun).
    let mut out = vec![];
    let mut g = monic.gcd(&monic.derivative())?;
    let mut w = monic.div_exact(&g)?;
    let mut i = 1usize;
    while w.deg() > 0 {
        let y = w.gcd(&g)?;
        let z = w.div_exact(&y)?;
        if z.deg() > 0 {
            for irr in factor_squarefree_trager(&z, rng)? {
                out.push((irr, i));
            }
        }
        i += 1;
        w = y;
        g = g.div_exact(&w)?;
    }
    Ok(out)
}

fn factor_squarefree_trager(f: &Poly, rng: &mut ChaCha8Rng) -> Result<Vec<Poly>> {
    let kfield = f.field().clone();
    let modulus = match kfield.kind() {
        FieldKind::RationalQuotient { modulus } => modulus.clone(),
        _ => unreachable!(),
    };
    let q = Field::rationals();
    let m_poly = Poly::new(
        &q,
        modulus.iter().map(|c| q.from_rational(c).unwrap()).collect(),
    );
    let mdeg = m_poly.deg();
    if f.deg() == 1 {
        return Ok(vec![f.clone()]);
    }
    let gamma = kfield.gen()?;
    for shift in 0..40i64 {
        // f_s(x) = f(x − s·γ)
        let s = kfield.from_i64(shift);
        let sub = Poly::new(&kfield, vec![gamma.mul(&s).neg(), kfield.one()]);
        let fs = f.compose(&sub);
        // Norm via evaluation–interpolation: N(x₀) = Res_y(m(y), fs(x₀) as
        // a polynomial in the generator y).
        let n_deg = f.deg() * mdeg;
        let mut pts = vec![];
        let mut x0 = 0i64;
        while pts.len() < n_deg + 1 {
            let xe = kfield.from_i64(x0);
            let val = fs.eval(&xe);
            let val_poly = Poly::new(
                &q,
                kfield
                    .base_coeffs(&val)
                    .iter()
                    .map(|c| c.clone())
                    .collect(),
            );
            let resv = m_poly.resultant(&val_poly)?;
            pts.push((q.from_i64(x0), resv));
            x0 += 1;
        }
        let norm = Poly::interpolate(&q, &pts)?;
        if norm.deg() != n_deg {
            // evaluation degenerated; try next shift
            continue;
        }
        if !norm.is_separable()? {
            continue;
        }
        let nf = factor(&norm, rng)?;
        if nf.factors.len() == 1 {
            return Ok(vec![f.monic()?]);
        }
        let mut out = vec![];
        for (ni, _) in nf.factors {
            // factor of f = gcd_K(f, N_i(x + s·γ))
            let unsub = Poly::new(&kfield, vec![gamma.mul(&kfield.from_i64(shift)), kfield.one()]);
            let ni_k = ni.map_coeffs(&kfield, |c| {
                kfield.from_rational(c.as_rational().unwrap()).unwrap()
            });
            let lifted = ni_k.compose(&unsub);
            let g = f.gcd(&lifted)?;
            if g.deg() > 0 {
                out.push(g.monic()?);
            }
        }
        let total: usize = out.iter().map(|g| g.deg()).sum();
        if total == f.deg() {
            return Ok(out);
        }
    }
    Err(Error::InvalidInput(
        "Trager factorization failed to find a squarefree norm".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(42)
    }

    #[test]
    fn factor_over_f5() {
        let f5 = Field::prime(5).unwrap();
        let p = Poly::from_i64(&f5, &[-1, 0, 1]); // x²−1 = (x−1)(x+1)
        let f = factor(&p, &mut rng()).unwrap();
        assert_eq!(f.factors.len(), 2);
        assert!(f.factors.iter().all(|(g, e)| g.deg() == 1 && *e == 1));
        assert_eq!(f.expand(), p);
    }

    #[test]
    fn irreducible_over_f3() {
        let f3 = Field::prime(3).unwrap();
        let p = Poly::from_i64(&f3, &[1, 0, 1]); // x²+1, no root mod 3
        assert!(is_irreducible(&p, &mut rng()).unwrap());
        let c = Poly::from_i64(&f3, &[1, 2, 0, 1]); // x³+2x+1, the sextic's cubic factor mod 3
        assert!(is_irreducible(&c, &mut rng()).unwrap());
    }

    #[test]
    fn rational_sextic_splits_as_printed() {
        // x⁶+2x³−4x²+1 = (x−1)(x²+x−1)(x³+2x+1)
        let q = Field::rationals();
        let p = Poly::from_i64(&q, &[1, 0, -4, 2, 0, 0, 1]);
        let f = factor(&p, &mut rng()).unwrap();
        let degs: Vec<usize> = f.factors.iter().map(|(g, _)| g.deg()).collect();
        assert_eq!(degs, vec![1, 2, 3]);
        assert!(f.factors.iter().any(|(g, _)| g == &Poly::from_i64(&q, &[-1, 1])));
        assert!(f
            .factors
            .iter()
            .any(|(g, _)| g == &Poly::from_i64(&q, &[-1, 1, 1])));
        assert!(f
            .factors
            .iter()
            .any(|(g, _)| g == &Poly::from_i64(&q, &[1, 2, 0, 1])));
        assert_eq!(f.expand(), p);
    }

    #[test]
    fn rational_with_multiplicity_and_unit() {
        let q = Field::rationals();
        // 3(x−1)²(x²+1)
        let p = Poly::from_i64(&q, &[-1, 1])
            .mul(&Poly::from_i64(&q, &[-1, 1]))
            .mul(&Poly::from_i64(&q, &[1, 0, 1]))
            .scale(&q.from_i64(3));
        let f = factor(&p, &mut rng()).unwrap();
        assert_eq!(f.unit, q.from_i64(3));
        assert_eq!(f.expand(), p);
        let mut mults: Vec<(usize, usize)> =
            f.factors.iter().map(|(g, e)| (g.deg(), *e)).collect();
        mults.sort();
        assert_eq!(mults, vec![(1, 2), (2, 1)]);
    }

    #[test]
    fn trager_quadratic_splits_golden_ratio() {
        // Over K = ℚ[t]/(t²+t−1), x²+x−1 splits as (x−t)(x+1+t).
        let q = Field::rationals();
        let m = Poly::from_i64(&q, &[-1, 1, 1]);
        let k = rational_quotient_field(&m, &mut rng()).unwrap();
        let p = Poly::from_i64(&k, &[-1, 1, 1]);
        let f = factor(&p, &mut rng()).unwrap();
        assert_eq!(f.factors.len(), 2);
        assert!(f.factors.iter().all(|(g, _)| g.deg() == 1));
        assert_eq!(f.expand(), p);
    }

    #[test]
    fn sqrt_various() {
        let f13 = Field::prime(13).unwrap();
        let four = f13.from_i64(4);
        let r = sqrt_in_field(&four, &mut rng()).unwrap().unwrap();
        assert_eq!(r.mul(&r), four);
        let q = Field::rationals();
        assert!(sqrt_in_field(&q.from_i64(5), &mut rng()).unwrap().is_none());
    }

    #[test]
    fn roundtrip_random_finite() {
        let f7 = Field::prime(7).unwrap();
        let mut r = rng();
        for _ in 0..30 {
            let deg = 1 + (rand::Rng::gen_range(&mut r, 0..7) as usize);
            let p = Poly::random(&f7, deg, &mut r);
            let f = factor(&p, &mut r).unwrap();
            assert_eq!(f.expand(), p);
        }
    }

    #[test]
    fn roundtrip_random_extension() {
        let mut r = rng();
        let f9 = extension_field(3, 2, &mut r).unwrap();
        for _ in 0..20 {
            let deg = 1 + (rand::Rng::gen_range(&mut r, 0..5) as usize);
            let p = Poly::random(&f9, deg, &mut r);
            let f = factor(&p, &mut r).unwrap();
            assert_eq!(f.expand(), p);
        }
    }
}
