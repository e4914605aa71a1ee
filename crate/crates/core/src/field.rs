//! Exact field arithmetic: ℚ, prime fields F_p, extension fields F_{p^k},
//! and quotient algebras ℚ[x]/(m) with m irreducible of degree ≤ 6.
//!
//! Every element is stored in a canonical form (reduced fractions, residues
//! below the modulus degree), so equality is structural and results are
//! reproducible bit-for-bit.  The characteristic is never 2.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::intutil;

/// Description of one of the supported exact fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldKind {
    /// The rational numbers ℚ.
    Rationals,
    /// The prime field F_p, p an odd prime.
    Prime { p: u64 },
    /// F_{p^k} = F_p[t]/(modulus), modulus monic irreducible of degree k,
    /// stored as ascending coefficients of length k+1.
    Extension { p: u64, k: usize, modulus: Vec<u64> },
    /// ℚ[t]/(m), m monic irreducible of degree ≤ 6, ascending coefficients.
    RationalQuotient { modulus: Vec<BigRational> },
}

/// A shared handle to a field; cheap to clone.
#[derive(Clone)]
pub struct Field {
    kind: Arc<FieldKind>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.kind, &other.kind) || self.kind == other.kind
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.kind {
            FieldKind::Rationals => write!(f, "Q"),
            FieldKind::Prime { p } => write!(f, "F{}", p),
            FieldKind::Extension { p, k, .. } => write!(f, "F{}^{}", p, k),
            FieldKind::RationalQuotient { modulus } => {
                write!(f, "Q[t]/(deg {})", modulus.len() - 1)
            }
        }
    }
}

/// Canonical internal representation of a field element.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Repr {
    Rat(BigRational),
    Fp(u64),
    /// Fixed length k, entries reduced mod p.
    Fq(Vec<u64>),
    /// Fixed length deg(m), reduced fractions.
    Quot(Vec<BigRational>),
}

/// An element of a [`Field`]; carries its field handle.
#[derive(Clone, PartialEq, Eq)]
pub struct Elt {
    field: Field,
    repr: Repr,
}

impl fmt::Debug for Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rat(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Repr::Fp(v) => write!(f, "{}", v),
            Repr::Fq(v) => {
                write!(f, "[")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", c)?;
                }
                write!(f, "]")
            }
            Repr::Quot(v) => {
                write!(f, "[")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    if c.denom().is_one() {
                        write!(f, "{}", c.numer())?;
                    } else {
                        write!(f, "{}/{}", c.numer(), c.denom())?;
                    }
                }
                write!(f, "]")
            }
        }
    }
}

impl PartialOrd for Elt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Elt {
    /// A canonical total order on elements of one field, used only for
    /// deterministic tie-breaking (it has no algebraic meaning).
    fn cmp(&self, other: &Self) -> Ordering {
        assert_eq!(self.field, other.field, "ordering across fields");
        match (&self.repr, &other.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => a.cmp(b),
            (Repr::Fp(a), Repr::Fp(b)) => a.cmp(b),
            (Repr::Fq(a), Repr::Fq(b)) => a.cmp(b),
            (Repr::Quot(a), Repr::Quot(b)) => a.cmp(b),
            _ => unreachable!("same field, different representation kind"),
        }
    }
}

// ---------------------------------------------------------------------------
// Small helpers for arithmetic on raw coefficient vectors.
// ---------------------------------------------------------------------------

mod fpvec {
    //! Polynomial helpers over F_p on raw `Vec<u64>` (ascending coefficients).
    use crate::intutil::{inv_mod_u64, mul_mod_u64};

    pub fn trim(v: &mut Vec<u64>) {
        while v.last() == Some(&0) {
            v.pop();
        }
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod_u64(x, y, p)) % p;
            }
        }
        trim(&mut out);
        out
    }

    /// Remainder of `a` modulo monic `m`.
    pub fn rem_monic(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r: Vec<u64> = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        while r.len() > dm {
            let lead = *r.last().unwrap();
            let shift = r.len() - 1 - dm;
            if lead != 0 {
                for i in 0..dm {
                    let t = mul_mod_u64(lead, m[i], p);
                    let idx = shift + i;
                    r[idx] = (r[idx] + p - t % p) % p;
                }
            }
            r.pop();
            trim(&mut r);
        }
        r
    }

    /// Extended Euclid: returns (g, s) with s·a ≡ g (mod m), g monic gcd.
    pub fn half_ext_gcd(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
        trim(&mut r0);
        trim(&mut r1);
        let (mut s0, mut s1) = (vec![], vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1, p);
            let qs1 = mul(&q, &s1, p);
            let s_new = sub(&s0, &qs1, p);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s_new;
        }
        // Normalize gcd monic.
        if let Some(&lc) = r0.last() {
            if lc != 1 {
                let ilc = inv_mod_u64(lc, p).expect("p prime");
                for c in r0.iter_mut() {
                    *c = mul_mod_u64(*c, ilc, p);
                }
                for c in s0.iter_mut() {
                    *c = mul_mod_u64(*c, ilc, p);
                }
            }
        }
        (r0, s0)
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out = vec![0u64; n];
        for i in 0..n {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            out[i] = (x + p - y) % p;
        }
        trim(&mut out);
        out
    }

    pub fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let lb = *b.last().unwrap();
        let ilb = inv_mod_u64(lb, p).expect("p prime");
        if r.len() <= db {
            return (vec![], r);
        }
        let mut q = vec![0u64; r.len() - db];
        while r.len() > db {
            let lead = *r.last().unwrap();
            let c = mul_mod_u64(lead, ilb, p);
            let shift = r.len() - 1 - db;
            q[shift] = c;
            for i in 0..=db {
                let t = mul_mod_u64(c, b[i], p);
                r[shift + i] = (r[shift + i] + p - t) % p;
            }
            trim(&mut r);
            if r.is_empty() {
                break;
            }
        }
        trim(&mut q);
        (q, r)
    }
}

mod qvec {
    //! Polynomial helpers over ℚ on raw `Vec<BigRational>` (ascending).
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    pub fn trim(v: &mut Vec<BigRational>) {
        while v.last().map(|c| c.is_zero()) == Some(true) {
            v.pop();
        }
    }

    pub fn mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                let t = x * y;
                out[i + j] += t;
            }
        }
        trim(&mut out);
        out
    }

    pub fn sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let n = a.len().max(b.len());
        let zero = BigRational::zero();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let x = a.get(i).unwrap_or(&zero);
            let y = b.get(i).unwrap_or(&zero);
            out.push(x - y);
        }
        trim(&mut out);
        out
    }

    pub fn divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let lb = b.last().unwrap().clone();
        if r.len() <= db {
            return (vec![], r);
        }
        let mut q = vec![BigRational::zero(); r.len() - db];
        while r.len() > db {
            let c = r.last().unwrap() / &lb;
            let shift = r.len() - 1 - db;
            q[shift] = c.clone();
            for i in 0..=db {
                let t = &c * &b[i];
                r[shift + i] -= t;
            }
            trim(&mut r);
            if r.is_empty() {
                break;
            }
        }
        trim(&mut q);
        (q, r)
    }

    pub fn rem_monic(a: &[BigRational], m: &[BigRational]) -> Vec<BigRational> {
        divrem(a, m).1
    }

    /// Extended Euclid: (monic gcd g, s) with s·a ≡ g (mod m).
    pub fn half_ext_gcd(
        a: &[BigRational],
        m: &[BigRational],
    ) -> (Vec<BigRational>, Vec<BigRational>) {
        let (mut r0, mut r1) = (m.to_vec(), a.to_vec());
        trim(&mut r0);
        trim(&mut r1);
        let (mut s0, mut s1) = (vec![], vec![BigRational::one()]);
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1);
            let qs1 = mul(&q, &s1);
            let s_new = sub(&s0, &qs1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s_new;
        }
        if let Some(lc) = r0.last().cloned() {
            if !lc.is_one() {
                for c in r0.iter_mut() {
                    *c /= lc.clone();
                }
                for c in s0.iter_mut() {
                    *c /= lc.clone();
                }
            }
        }
        (r0, s0)
    }
}

// ---------------------------------------------------------------------------
// Field construction and accessors.
// ---------------------------------------------------------------------------

impl Field {
    /// The rational numbers.
    pub fn rationals() -> Field {
        Field {
            kind: Arc::new(FieldKind::Rationals),
        }
    }

    /// The prime field F_p; `p` must be an odd prime.
    pub fn prime(p: u64) -> Result<Field> {
        if p == 2 {
            return Err(Error::InvalidInput("characteristic 2 is not supported".into()));
        }
        if !intutil::is_prime_u64(p) {
            return Err(Error::InvalidInput(format!("{} is not prime", p)));
        }
        Ok(Field {
            kind: Arc::new(FieldKind::Prime { p }),
        })
    }

    /// F_{p^k} given a monic modulus of degree k over F_p (ascending
    /// coefficients, length k+1).  Irreducibility is the caller's
    /// responsibility; use [`crate::factor::extension_field`] to have it
    /// checked.
    pub fn extension_unchecked(p: u64, modulus: Vec<u64>) -> Result<Field> {
        if p == 2 || !intutil::is_prime_u64(p) {
            return Err(Error::InvalidInput(format!("bad characteristic {}", p)));
        }
        let k = modulus.len().checked_sub(1).unwrap_or(0);
        if k == 0 || modulus.last() != Some(&1) {
            return Err(Error::InvalidInput("modulus must be monic of degree ≥ 1".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidInput("modulus coefficients must be reduced mod p".into()));
        }
        if k == 1 {
            // F_{p^1} is just F_p.
            return Field::prime(p);
        }
        Ok(Field {
            kind: Arc::new(FieldKind::Extension { p, k, modulus }),
        })
    }

    /// ℚ[t]/(m) for monic `m` of degree ≤ 6 (ascending coefficients).
    /// Irreducibility over ℚ is the caller's responsibility; use
    /// [`crate::factor::rational_quotient_field`] to have it checked.
    pub fn rational_quotient_unchecked(modulus: Vec<BigRational>) -> Result<Field> {
        let m = modulus.len().checked_sub(1).unwrap_or(0);
        if m == 0 || modulus.last().map(|c| c.is_one()) != Some(true) {
            return Err(Error::InvalidInput("modulus must be monic of degree ≥ 1".into()));
        }
        if m > 6 {
            return Err(Error::TowerUnsupported(format!(
                "quotient modulus degree {} exceeds 6",
                m
            )));
        }
        if m == 1 {
            return Ok(Field::rationals());
        }
        Ok(Field {
            kind: Arc::new(FieldKind::RationalQuotient { modulus }),
        })
    }

    /// Raw field kind.
    pub fn kind(&self) -> &FieldKind {
        &self.kind
    }

    /// The characteristic (0 for ℚ and quotient algebras over ℚ).
    pub fn characteristic(&self) -> u64 {
        match &*self.kind {
            FieldKind::Rationals | FieldKind::RationalQuotient { .. } => 0,
            FieldKind::Prime { p } => *p,
            FieldKind::Extension { p, .. } => *p,
        }
    }

    /// Number of elements of a finite field, `None` for infinite fields.
    pub fn order(&self) -> Option<BigUint> {
        match &*self.kind {
            FieldKind::Prime { p } => Some(BigUint::from(*p)),
            FieldKind::Extension { p, k, .. } => Some(BigUint::from(*p).pow(*k as u32)),
            _ => None,
        }
    }

    /// Degree over the base field (1 for ℚ and F_p themselves).
    pub fn degree(&self) -> usize {
        match &*self.kind {
            FieldKind::Rationals | FieldKind::Prime { .. } => 1,
            FieldKind::Extension { k, .. } => *k,
            FieldKind::RationalQuotient { modulus } => modulus.len() - 1,
        }
    }

    /// The base field: F_p for extensions, ℚ for quotient algebras, self
    /// otherwise.
    pub fn base_field(&self) -> Field {
        match &*self.kind {
            FieldKind::Rationals | FieldKind::Prime { .. } => self.clone(),
            FieldKind::Extension { p, .. } => Field::prime(*p).expect("validated"),
            FieldKind::RationalQuotient { .. } => Field::rationals(),
        }
    }

    /// True for F_p and F_{p^k}.
    pub fn is_finite(&self) -> bool {
        matches!(
            &*self.kind,
            FieldKind::Prime { .. } | FieldKind::Extension { .. }
        )
    }

    // -- element constructors ------------------------------------------------

    /// The zero element.
    pub fn zero(&self) -> Elt {
        let repr = match &*self.kind {
            FieldKind::Rationals => Repr::Rat(BigRational::zero()),
            FieldKind::Prime { .. } => Repr::Fp(0),
            FieldKind::Extension { k, .. } => Repr::Fq(vec![0; *k]),
            FieldKind::RationalQuotient { modulus } => {
                Repr::Quot(vec![BigRational::zero(); modulus.len() - 1])
            }
        };
        Elt {
            field: self.clone(),
            repr,
        }
    }

    /// The unit element.
    pub fn one(&self) -> Elt {
        self.from_i64(1)
    }

    /// Embed a small integer.
    pub fn from_i64(&self, n: i64) -> Elt {
        match &*self.kind {
            FieldKind::Rationals => Elt {
                field: self.clone(),
                repr: Repr::Rat(BigRational::from_integer(n.into())),
            },
            FieldKind::Prime { p } => Elt {
                field: self.clone(),
                repr: Repr::Fp(n.rem_euclid(*p as i64) as u64),
            },
            FieldKind::Extension { p, k, .. } => {
                let mut v = vec![0u64; *k];
                v[0] = n.rem_euclid(*p as i64) as u64;
                Elt {
                    field: self.clone(),
                    repr: Repr::Fq(v),
                }
            }
            FieldKind::RationalQuotient { modulus } => {
                let mut v = vec![BigRational::zero(); modulus.len() - 1];
                v[0] = BigRational::from_integer(n.into());
                Elt {
                    field: self.clone(),
                    repr: Repr::Quot(v),
                }
            }
        }
    }

    /// Embed a rational number; reduces mod p over finite fields
    /// (error if the denominator is divisible by p).
    pub fn from_rational(&self, r: &BigRational) -> Result<Elt> {
        match &*self.kind {
            FieldKind::Rationals => Ok(Elt {
                field: self.clone(),
                repr: Repr::Rat(r.clone()),
            }),
            FieldKind::RationalQuotient { modulus } => {
                let mut v = vec![BigRational::zero(); modulus.len() - 1];
                v[0] = r.clone();
                Ok(Elt {
                    field: self.clone(),
                    repr: Repr::Quot(v),
                })
            }
            FieldKind::Prime { p } | FieldKind::Extension { p, .. } => {
                let pb = BigInt::from(*p);
                let num = r.numer().mod_floor(&pb).to_u64().unwrap();
                let den = r.denom().mod_floor(&pb).to_u64().unwrap();
                let deninv = intutil::inv_mod_u64(den, *p)
                    .ok_or_else(|| Error::DivisionByZero)?;
                let val = intutil::mul_mod_u64(num, deninv, *p);
                Ok(self.from_i64(val as i64))
            }
        }
    }

    /// The canonical generator t̄ of an extension or quotient field.
    pub fn gen(&self) -> Result<Elt> {
        match &*self.kind {
            FieldKind::Extension { k, .. } => {
                let mut v = vec![0u64; *k];
                v[1] = 1;
                Ok(Elt {
                    field: self.clone(),
                    repr: Repr::Fq(v),
                })
            }
            FieldKind::RationalQuotient { modulus } => {
                let mut v = vec![BigRational::zero(); modulus.len() - 1];
                v[1] = BigRational::one();
                Ok(Elt {
                    field: self.clone(),
                    repr: Repr::Quot(v),
                })
            }
            _ => Err(Error::InvalidInput("field has no generator".into())),
        }
    }

    /// Build an element of an extension/quotient field from base-field
    /// coordinates (ascending in the generator); length ≤ degree.
    pub fn from_base_coeffs(&self, coeffs: &[Elt]) -> Result<Elt> {
        match &*self.kind {
            FieldKind::Extension { p, k, .. } => {
                let mut v = vec![0u64; *k];
                if coeffs.len() > *k {
                    return Err(Error::InvalidInput("too many coordinates".into()));
                }
                for (i, c) in coeffs.iter().enumerate() {
                    match &c.repr {
                        Repr::Fp(x) => v[i] = *x % *p,
                        _ => return Err(Error::FieldMismatch("expected F_p coordinate".into())),
                    }
                }
                Ok(Elt {
                    field: self.clone(),
                    repr: Repr::Fq(v),
                })
            }
            FieldKind::RationalQuotient { modulus } => {
                let m = modulus.len() - 1;
                let mut v = vec![BigRational::zero(); m];
                if coeffs.len() > m {
                    return Err(Error::InvalidInput("too many coordinates".into()));
                }
                for (i, c) in coeffs.iter().enumerate() {
                    match &c.repr {
                        Repr::Rat(x) => v[i] = x.clone(),
                        _ => return Err(Error::FieldMismatch("expected rational coordinate".into())),
                    }
                }
                Ok(Elt {
                    field: self.clone(),
                    repr: Repr::Quot(v),
                })
            }
            _ => Err(Error::InvalidInput("not an extension field".into())),
        }
    }

    /// Base-field coordinates of an element (ascending in the generator).
    /// For F_p and ℚ this is the one-entry vector.
    pub fn base_coeffs(&self, e: &Elt) -> Vec<Elt> {
        assert_eq!(&e.field, self);
        let base = self.base_field();
        match &e.repr {
            Repr::Rat(_) | Repr::Fp(_) => vec![e.clone()],
            Repr::Fq(v) => v.iter().map(|&c| base.from_i64(c as i64)).collect(),
            Repr::Quot(v) => v
                .iter()
                .map(|c| base.from_rational(c).expect("rational base"))
                .collect(),
        }
    }

    /// If `e` lies in the base field (all higher coordinates zero), return it
    /// as a base-field element.
    pub fn descend(&self, e: &Elt) -> Option<Elt> {
        assert_eq!(&e.field, self);
        match &e.repr {
            Repr::Rat(_) | Repr::Fp(_) => Some(e.clone()),
            Repr::Fq(v) => {
                if v[1..].iter().all(|&c| c == 0) {
                    Some(self.base_field().from_i64(v[0] as i64))
                } else {
                    None
                }
            }
            Repr::Quot(v) => {
                if v[1..].iter().all(|c| c.is_zero()) {
                    Some(self.base_field().from_rational(&v[0]).unwrap())
                } else {
                    None
                }
            }
        }
    }

    /// Embed a base-field element into this field.
    pub fn embed(&self, e: &Elt) -> Result<Elt> {
        if &e.field == self {
            return Ok(e.clone());
        }
        match (&*self.kind, &e.repr) {
            (FieldKind::Extension { .. }, Repr::Fp(_)) => {
                if e.field.characteristic() != self.characteristic() {
                    return Err(Error::FieldMismatch("different characteristic".into()));
                }
                self.from_base_coeffs(std::slice::from_ref(e))
            }
            (FieldKind::RationalQuotient { .. }, Repr::Rat(r)) => self.from_rational(r),
            _ => Err(Error::FieldMismatch(format!(
                "cannot embed element of {:?} into {:?}",
                e.field, self
            ))),
        }
    }

    /// Uniformly random element (finite fields only).
    pub fn random(&self, rng: &mut impl rand::Rng) -> Elt {
        match &*self.kind {
            FieldKind::Prime { p } => self.from_i64(rng.gen_range(0..*p) as i64),
            FieldKind::Extension { p, k, .. } => {
                let v: Vec<u64> = (0..*k).map(|_| rng.gen_range(0..*p)).collect();
                Elt {
                    field: self.clone(),
                    repr: Repr::Fq(v),
                }
            }
            _ => panic!("random elements only over finite fields"),
        }
    }

    /// Iterate over all elements of a finite field (small fields only).
    pub fn all_elements(&self) -> Vec<Elt> {
        match &*self.kind {
            FieldKind::Prime { p } => (0..*p).map(|v| self.from_i64(v as i64)).collect(),
            FieldKind::Extension { p, k, .. } => {
                let q = (*p as u128).pow(*k as u32);
                assert!(q <= 1 << 24, "field too large to enumerate");
                let mut out = Vec::with_capacity(q as usize);
                let mut v = vec![0u64; *k];
                loop {
                    out.push(Elt {
                        field: self.clone(),
                        repr: Repr::Fq(v.clone()),
                    });
                    // odometer increment
                    let mut i = 0;
                    loop {
                        if i == *k {
                            return out;
                        }
                        v[i] += 1;
                        if v[i] < *p {
                            break;
                        }
                        v[i] = 0;
                        i += 1;
                    }
                }
            }
            _ => panic!("cannot enumerate an infinite field"),
        }
    }
}

// ---------------------------------------------------------------------------
// Element arithmetic.
// ---------------------------------------------------------------------------

impl Elt {
    /// The field this element belongs to.
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// True iff this is the zero element.
    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rat(r) => r.is_zero(),
            Repr::Fp(v) => *v == 0,
            Repr::Fq(v) => v.iter().all(|&c| c == 0),
            Repr::Quot(v) => v.iter().all(|c| c.is_zero()),
        }
    }

    /// True iff this is the unit element.
    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Rat(r) => r.is_one(),
            Repr::Fp(v) => *v == 1,
            Repr::Fq(v) => v[0] == 1 && v[1..].iter().all(|&c| c == 0),
            Repr::Quot(v) => v[0].is_one() && v[1..].iter().all(|c| c.is_zero()),
        }
    }

    fn assert_same(&self, other: &Elt) {
        assert_eq!(
            self.field, other.field,
            "field descriptor mismatch in element arithmetic"
        );
    }

    /// Addition.
    pub fn add(&self, other: &Elt) -> Elt {
        self.assert_same(other);
        let repr = match (&self.repr, &other.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a + b),
            (Repr::Fp(a), Repr::Fp(b)) => {
                let p = self.field.characteristic();
                Repr::Fp((a + b) % p)
            }
            (Repr::Fq(a), Repr::Fq(b)) => {
                let p = self.field.characteristic();
                Repr::Fq(a.iter().zip(b).map(|(x, y)| (x + y) % p).collect())
            }
            (Repr::Quot(a), Repr::Quot(b)) => {
                Repr::Quot(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            _ => unreachable!(),
        };
        Elt {
            field: self.field.clone(),
            repr,
        }
    }

    /// Subtraction.
    pub fn sub(&self, other: &Elt) -> Elt {
        self.add(&other.neg())
    }

    /// Negation.
    pub fn neg(&self) -> Elt {
        let repr = match &self.repr {
            Repr::Rat(a) => Repr::Rat(-a),
            Repr::Fp(a) => {
                let p = self.field.characteristic();
                Repr::Fp(if *a == 0 { 0 } else { p - a })
            }
            Repr::Fq(a) => {
                let p = self.field.characteristic();
                Repr::Fq(a.iter().map(|&x| if x == 0 { 0 } else { p - x }).collect())
            }
            Repr::Quot(a) => Repr::Quot(a.iter().map(|x| -x).collect()),
        };
        Elt {
            field: self.field.clone(),
            repr,
        }
    }

    /// Multiplication.
    pub fn mul(&self, other: &Elt) -> Elt {
        self.assert_same(other);
        let repr = match (&self.repr, &other.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a * b),
            (Repr::Fp(a), Repr::Fp(b)) => {
                let p = self.field.characteristic();
                Repr::Fp(intutil::mul_mod_u64(*a, *b, p))
            }
            (Repr::Fq(a), Repr::Fq(b)) => {
                let (p, k, modulus) = match self.field.kind() {
                    FieldKind::Extension { p, k, modulus } => (*p, *k, modulus),
                    _ => unreachable!(),
                };
                let prod = fpvec::mul(a, b, p);
                let mut r = fpvec::rem_monic(&prod, modulus, p);
                r.resize(k, 0);
                Repr::Fq(r)
            }
            (Repr::Quot(a), Repr::Quot(b)) => {
                let modulus = match self.field.kind() {
                    FieldKind::RationalQuotient { modulus } => modulus,
                    _ => unreachable!(),
                };
                let m = modulus.len() - 1;
                let prod = qvec::mul(a, b);
                let mut r = qvec::rem_monic(&prod, modulus);
                r.resize(m, BigRational::zero());
                Repr::Quot(r)
            }
            _ => unreachable!(),
        };
        Elt {
            field: self.field.clone(),
            repr,
        }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Elt> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let repr = match &self.repr {
            Repr::Rat(a) => Repr::Rat(a.recip()),
            Repr::Fp(a) => {
                let p = self.field.characteristic();
                Repr::Fp(intutil::inv_mod_u64(*a, p).ok_or(Error::DivisionByZero)?)
            }
            Repr::Fq(a) => {
                let (p, k, modulus) = match self.field.kind() {
                    FieldKind::Extension { p, k, modulus } => (*p, *k, modulus),
                    _ => unreachable!(),
                };
                let (g, s) = fpvec::half_ext_gcd(a, modulus, p);
                if g != vec![1u64] {
                    return Err(Error::DivisionByZero);
                }
                let mut s = fpvec::rem_monic(&s, modulus, p);
                s.resize(k, 0);
                Repr::Fq(s)
            }
            Repr::Quot(a) => {
                let modulus = match self.field.kind() {
                    FieldKind::RationalQuotient { modulus } => modulus,
                    _ => unreachable!(),
                };
                let m = modulus.len() - 1;
                let (g, s) = qvec::half_ext_gcd(a, modulus);
                if !(g.len() == 1 && g[0].is_one()) {
                    return Err(Error::DivisionByZero);
                }
                let mut s = qvec::rem_monic(&s, modulus);
                s.resize(m, BigRational::zero());
                Repr::Quot(s)
            }
        };
        Ok(Elt {
            field: self.field.clone(),
            repr,
        })
    }

    /// Division.
    pub fn div(&self, other: &Elt) -> Result<Elt> {
        Ok(self.mul(&other.inv()?))
    }

    /// Integer power (negative exponents allowed for nonzero elements).
    pub fn pow_i64(&self, e: i64) -> Result<Elt> {
        if e < 0 {
            return self.inv()?.pow_i64(-e);
        }
        let mut acc = self.field.one();
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Power with an arbitrary-precision nonnegative exponent.
    pub fn pow_biguint(&self, e: &BigUint) -> Elt {
        let mut acc = self.field.one();
        let mut base = self.clone();
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
        }
        acc
    }

    /// The Frobenius x ↦ x^p on finite fields.
    pub fn frobenius(&self) -> Result<Elt> {
        let p = self.field.characteristic();
        if p == 0 {
            return Err(Error::InvalidInput("Frobenius needs positive characteristic".into()));
        }
        Ok(self.pow_biguint(&BigUint::from(p)))
    }

    /// Iterated Frobenius x ↦ x^{p^j}.
    pub fn frobenius_power(&self, j: usize) -> Result<Elt> {
        let mut e = self.clone();
        for _ in 0..j {
            e = e.frobenius()?;
        }
        Ok(e)
    }

    /// Square-class test.  Over finite fields this is the Euler criterion;
    /// over ℚ it checks that numerator·denominator is a perfect square.
    /// For quotient algebras use [`crate::factor::sqrt_in_field`].
    pub fn is_square(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::ZeroInput("square test of 0".into()));
        }
        match &self.repr {
            Repr::Rat(r) => {
                let prod = r.numer() * r.denom();
                Ok(intutil::perfect_sqrt(&prod).is_some())
            }
            Repr::Fp(_) | Repr::Fq(_) => {
                let q = self.field.order().unwrap();
                let e = (&q - BigUint::one()) / BigUint::from(2u32);
                Ok(self.pow_biguint(&e).is_one())
            }
            Repr::Quot(_) => Err(Error::InvalidInput(
                "square test over quotient algebras lives in factor::sqrt_in_field".into(),
            )),
        }
    }

    /// Rational value of an element of ℚ.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.repr {
            Repr::Rat(r) => Some(r),
            _ => None,
        }
    }

    /// Residue of an element of F_p.
    pub fn as_fp(&self) -> Option<u64> {
        match &self.repr {
            Repr::Fp(v) => Some(*v),
            _ => None,
        }
    }
}

/// Checked binary operation for API boundaries (CLI): verifies matching
/// descriptors before dispatching.
pub fn checked_op(op: &str, a: &Elt, b: &Elt) -> Result<Elt> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch(format!(
            "{:?} vs {:?}",
            a.field(),
            b.field()
        )));
    }
    match op {
        "add" => Ok(a.add(b)),
        "sub" => Ok(a.sub(b)),
        "mul" => Ok(a.mul(b)),
        "div" => a.div(b),
        _ => Err(Error::InvalidInput(format!("unknown operation {}", op))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_arithmetic() {
        let q = Field::rationals();
        let half = q.from_rational(&BigRational::new(1.into(), 2.into())).unwrap();
        let third = q.from_rational(&BigRational::new(1.into(), 3.into())).unwrap();
        let sum = half.add(&third);
        assert_eq!(
            sum.as_rational().unwrap(),
            &BigRational::new(5.into(), 6.into())
        );
    }

    #[test]
    fn prime_field_inverse() {
        let f7 = Field::prime(7).unwrap();
        let three = f7.from_i64(3);
        assert_eq!(three.inv().unwrap().as_fp(), Some(5));
    }

    #[test]
    fn f9_frobenius() {
        // F_9 = F_3[t]/(t²+1); Frobenius sends t to t³ = -t.
        let f9 = Field::extension_unchecked(3, vec![1, 0, 1]).unwrap();
        let t = f9.gen().unwrap();
        assert_eq!(t.frobenius().unwrap(), t.neg());
    }

    #[test]
    fn quotient_inverse() {
        // ℚ[t]/(t²+t-1): golden-ratio arithmetic. (t̄)⁻¹ = t̄+1 since t²+t=1.
        let m: Vec<BigRational> = [-1i64, 1, 1]
            .iter()
            .map(|&n| BigRational::from_integer(n.into()))
            .collect();
        let k = Field::rational_quotient_unchecked(m).unwrap();
        let t = k.gen().unwrap();
        let inv = t.inv().unwrap();
        assert_eq!(inv, t.add(&k.one()));
        assert!(t.mul(&inv).is_one());
    }

    #[test]
    fn euler_squares() {
        let f3 = Field::prime(3).unwrap();
        assert!(!f3.from_i64(-1).is_square().unwrap());
        let f7 = Field::prime(7).unwrap();
        assert!(f7.from_i64(2).is_square().unwrap());
        assert!(!f7.from_i64(3).is_square().unwrap());
        let q = Field::rationals();
        assert!(q.from_i64(4).is_square().unwrap());
        assert!(!q.from_i64(5).is_square().unwrap());
    }

    #[test]
    fn frobenius_fixes_prime_subfield() {
        for (p, modulus) in [(3u64, vec![1u64, 0, 1]), (5, vec![2, 1, 1])] {
            let fq = Field::extension_unchecked(p, modulus).unwrap();
            for v in 0..p {
                let e = fq.from_i64(v as i64);
                assert_eq!(e.frobenius().unwrap(), e);
            }
            // ... and moves the generator (the extension is nontrivial).
            let t = fq.gen().unwrap();
            assert_ne!(t.frobenius().unwrap(), t);
        }
    }
}
