//! Two-torsion combinatorics and the rationality criterion.
//!
//! The 2-torsion of a hyperelliptic Jacobian is described by even-cardinality
//! subsets of the Weierstrass root set modulo complementation, with the
//! alternating pairing #(S₁∩S₂) mod 2.  Gluing data are classified by maximal
//! isotropic subgroups of V_X × V_Y that are indecomposable; these in turn
//! correspond to a choice of a two-element root subset 𝒯 of the sextic
//! (a quadratic factor q_Y) together with an equivariant matching of the
//! cubic-resolvent roots of p_X with those of the complementary quartic r_Y.
//!
//! Note on the resolvent: the linear coefficient is a₁a₃ − 4a₀.  The
//! root-expansion γ₁ = α₁α₂ + α₃α₄ (and its two companions) is authoritative
//! and is checked against the closed form by a randomized oracle test.

use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::factor;
use crate::field::{Elt, FieldKind};
use crate::forms::ProjPoint;
use crate::poly::Poly;
use crate::tower::{common_splitting_tower, Tower};

// ---------------------------------------------------------------------------
// Root sets and two-torsion spaces.
// ---------------------------------------------------------------------------

/// The labeled Weierstrass root set of a genus-1 or genus-2 model: 4 or 6
/// projective points.  When the defining polynomial has deficient degree the
/// point at infinity is a root and is listed first (label 0).
#[derive(Debug, Clone)]
pub struct RootSet {
    /// The defining polynomial (over the base field).
    pub poly: Poly,
    /// 4 or 6 distinct points, in a splitting tower of the polynomial;
    /// infinity (if present) first, finite roots sorted canonically.
    pub points: Vec<ProjPoint>,
}

impl RootSet {
    /// Build from a polynomial and its roots in a tower, padding with ∞.
    pub fn new(poly: &Poly, finite_roots: &[Elt], size: usize) -> Result<RootSet> {
        if poly.deg() != size && poly.deg() + 1 != size {
            return Err(Error::InvalidInput(format!(
                "polynomial degree {} incompatible with root-set size {}",
                poly.deg(),
                size
            )));
        }
        if finite_roots.len() != poly.deg() {
            return Err(Error::InvalidInput("wrong number of finite roots".into()));
        }
        let mut points = vec![];
        if poly.deg() + 1 == size {
            let f = finite_roots
                .first()
                .map(|r| r.field().clone())
                .ok_or_else(|| Error::InvalidInput("empty root list".into()))?;
            points.push(ProjPoint::infinity(&f));
        }
        let mut fin: Vec<Elt> = finite_roots.to_vec();
        fin.sort();
        points.extend(fin.into_iter().map(ProjPoint::affine));
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(Error::Inseparable("repeated root in root set".into()));
                }
            }
        }
        Ok(RootSet {
            poly: poly.clone(),
            points,
        })
    }

    /// Number of labels (4 or 6).
    pub fn size(&self) -> usize {
        self.points.len()
    }
}

/// The F₂ space of even-cardinality label subsets modulo complementation,
/// with the pairing #(S₁∩S₂) mod 2: dimension n − 2 for n labels.
#[derive(Debug, Clone)]
pub struct TwoTorsionSpace {
    /// Number of labels (4 or 6).
    pub n: usize,
    /// Basis classes: bᵢ = class of {0, i+1}, i = 0..n−3.
    pub dim: usize,
    /// Pairing matrix on the basis.
    pub pairing: Vec<Vec<u64>>,
}

/// Canonical representative of a class: the lexicographically smaller of
/// S and its complement (bitmask over n labels; lower bits = lower labels).
pub fn canonical_class(mask: u32, n: usize) -> u32 {
    let full = (1u32 << n) - 1;
    let comp = full & !mask;
    // lexicographic on sorted index lists = compare lowest set bits first
    let a = sorted_indices(mask, n);
    let b = sorted_indices(comp, n);
    if a <= b {
        mask
    } else {
        comp
    }
}

fn sorted_indices(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|i| mask >> i & 1 == 1).collect()
}

impl TwoTorsionSpace {
    /// Build the space for a 4- or 6-element root set.
    pub fn build(n: usize) -> Result<TwoTorsionSpace> {
        if n != 4 && n != 6 {
            return Err(Error::InvalidInput("root set must have 4 or 6 labels".into()));
        }
        let dim = n - 2;
        let mut pairing = vec![vec![0u64; dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                let a = basis_mask(i);
                let b = basis_mask(j);
                pairing[i][j] = ((a & b).count_ones() % 2) as u64;
            }
        }
        Ok(TwoTorsionSpace { n, dim, pairing })
    }

    /// Express an even-cardinality subset as a basis vector.
    pub fn class_vector(&self, mask: u32) -> Result<Vec<u64>> {
        if mask.count_ones() % 2 != 0 {
            return Err(Error::InvalidInput("subset has odd cardinality".into()));
        }
        let target = canonical_class(mask & ((1 << self.n) - 1), self.n);
        // brute force over the ≤16 basis combinations
        for combo in 0u32..1 << self.dim {
            let mut acc = 0u32;
            for i in 0..self.dim {
                if combo >> i & 1 == 1 {
                    acc ^= basis_mask(i);
                }
            }
            if canonical_class(acc & ((1 << self.n) - 1), self.n) == target {
                return Ok((0..self.dim).map(|i| (combo >> i & 1) as u64).collect());
            }
        }
        unreachable!("even subsets are spanned by the pair basis")
    }

    /// The canonical subset representative of a basis vector.
    pub fn vector_class(&self, v: &[u64]) -> u32 {
        let mut acc = 0u32;
        for (i, &x) in v.iter().enumerate() {
            if x % 2 == 1 {
                acc ^= basis_mask(i);
            }
        }
        canonical_class(acc & ((1 << self.n) - 1), self.n)
    }

    /// Pairing of two vectors.
    pub fn pair(&self, a: &[u64], b: &[u64]) -> u64 {
        let mut acc = 0u64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                acc += a[i] * self.pairing[i][j] * b[j];
            }
        }
        acc % 2
    }

    /// The linear map on the space induced by a permutation of the labels
    /// (columns are images of the basis vectors).
    pub fn permutation_matrix(&self, perm: &[usize]) -> Result<Vec<Vec<u64>>> {
        if perm.len() != self.n {
            return Err(Error::InvalidInput("permutation has wrong length".into()));
        }
        let mut cols = vec![];
        for i in 0..self.dim {
            let mask = basis_mask(i);
            let mut image = 0u32;
            for l in 0..self.n {
                if mask >> l & 1 == 1 {
                    image |= 1 << perm[l];
                }
            }
            cols.push(self.class_vector(image)?);
        }
        // transpose columns into a matrix acting on column vectors
        let mut m = vec![vec![0u64; self.dim]; self.dim];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..self.dim {
                m[i][j] = col[i];
            }
        }
        Ok(m)
    }

    /// Number of nonzero classes: 2^dim − 1.
    pub fn num_nonzero_classes(&self) -> usize {
        (1 << self.dim) - 1
    }
}

/// Basis class i ↔ subset {0, i+1}.
fn basis_mask(i: usize) -> u32 {
    1 | (1 << (i + 1))
}

// ---------------------------------------------------------------------------
// Isotropic subgroup enumeration over F_p, p ∈ {2, 3}.
// ---------------------------------------------------------------------------

/// The symplectic product space (V_X, E_X) × (V_Y, E_Y) over F_p.
#[derive(Debug, Clone)]
pub struct ProductPairing {
    pub p: u64,
    /// 2×2 pairing on V_X.
    pub ex: Vec<Vec<u64>>,
    /// 4×4 pairing on V_Y.
    pub ey: Vec<Vec<u64>>,
}

impl ProductPairing {
    /// The pairing built from the label-subset spaces (p = 2).
    pub fn from_spaces(vx: &TwoTorsionSpace, vy: &TwoTorsionSpace) -> Result<ProductPairing> {
        if vx.dim != 2 || vy.dim != 4 {
            return Err(Error::InvalidInput("expected dim-2 and dim-4 spaces".into()));
        }
        Ok(ProductPairing {
            p: 2,
            ex: vx.pairing.clone(),
            ey: vy.pairing.clone(),
        })
    }

    /// Standard symplectic pairing over F_p (used for p = 3 counting).
    pub fn standard(p: u64) -> Result<ProductPairing> {
        if p != 2 && p != 3 {
            return Err(Error::InvalidInput("enumeration supports p ∈ {2,3}".into()));
        }
        let j2 = |m: &mut Vec<Vec<u64>>, i: usize| {
            m[i][i + 1] = 1;
            m[i + 1][i] = p - 1;
        };
        let mut ex = vec![vec![0u64; 2]; 2];
        j2(&mut ex, 0);
        let mut ey = vec![vec![0u64; 4]; 4];
        j2(&mut ey, 0);
        j2(&mut ey, 2);
        Ok(ProductPairing { p, ex, ey })
    }

    /// Full 6×6 pairing E = E_X ⊕ E_Y.
    pub fn full(&self) -> Vec<Vec<u64>> {
        let mut m = vec![vec![0u64; 6]; 6];
        for i in 0..2 {
            for j in 0..2 {
                m[i][j] = self.ex[i][j];
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                m[i + 2][j + 2] = self.ey[i][j];
            }
        }
        m
    }

    /// Evaluate E(a, b) for vectors in F_p⁶.
    pub fn eval(&self, a: &[u64], b: &[u64]) -> u64 {
        let m = self.full();
        let mut acc = 0u64;
        for i in 0..6 {
            for j in 0..6 {
                acc = (acc + a[i] * m[i][j] % self.p * b[j]) % self.p;
            }
        }
        acc
    }
}

/// A dimension-3 subspace of V_X × V_Y ≅ F_p⁶ on which the product pairing
/// vanishes, stored by its reduced row-echelon basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsotropicSubgroup {
    pub p: u64,
    /// Three rows in reduced echelon form.
    pub basis: Vec<Vec<u64>>,
    /// Always true for dim 3 in a 6-dimensional symplectic space.
    pub maximal: bool,
    /// dim(G ∩ (0 × V_Y)) = 1 and the projection to V_X is surjective.
    pub indecomposable: bool,
}

/// Reduced row echelon form mod p; returns (rref rows without zero rows, rank).
pub fn rref_mod(rows: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x % p).collect()).collect();
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut lead = 0usize;
    let mut r = 0usize;
    while r < m.len() && lead < ncols {
        let piv = (r..m.len()).find(|&i| m[i][lead] != 0);
        match piv {
            None => {
                lead += 1;
                continue;
            }
            Some(piv) => {
                m.swap(r, piv);
                let inv = crate::intutil::inv_mod_u64(m[r][lead], p).unwrap();
                for c in 0..ncols {
                    m[r][c] = m[r][c] * inv % p;
                }
                for i in 0..m.len() {
                    if i != r && m[i][lead] != 0 {
                        let f = m[i][lead];
                        for c in 0..ncols {
                            m[i][c] = (m[i][c] + (p - f) * m[r][c]) % p;
                        }
                    }
                }
                r += 1;
                lead += 1;
            }
        }
    }
    m.retain(|row| row.iter().any(|&x| x != 0));
    m
}

fn rank_mod(rows: &[Vec<u64>], p: u64) -> usize {
    rref_mod(rows, p).len()
}

/// Membership of a vector in the row space.
fn in_row_space(rows: &[Vec<u64>], v: &[u64], p: u64) -> bool {
    let mut aug: Vec<Vec<u64>> = rows.to_vec();
    aug.push(v.to_vec());
    rank_mod(&aug, p) == rank_mod(rows, p)
}

fn classify(basis: &[Vec<u64>], p: u64) -> (bool, bool) {
    // maximal: dim 3 (callers pass dim-3 bases)
    let maximal = basis.len() == 3;
    // projection to V_X (first 2 coords)
    let proj: Vec<Vec<u64>> = basis.iter().map(|r| r[0..2].to_vec()).collect();
    let rank_x = rank_mod(&proj, p);
    // kernel of the projection = G ∩ (0 × V_Y); dim = 3 − rank_x
    let indecomposable = rank_x == 2;
    (maximal, indecomposable)
}

/// Enumerate every maximal isotropic (dimension-3) subspace of the product
/// space by scanning reduced echelon forms; p ∈ {2, 3}.
///
/// Returns the isotropic ones with flags; `scanned` (second value) is the
/// total number of dimension-3 subspaces visited.
pub fn enumerate_isotropic(pairing: &ProductPairing) -> (Vec<IsotropicSubgroup>, usize) {
    let p = pairing.p;
    let mut out = vec![];
    let mut scanned = 0usize;
    // choose pivot columns c0 < c1 < c2
    for c0 in 0..6 {
        for c1 in c0 + 1..6 {
            for c2 in c1 + 1..6 {
                let pivots = [c0, c1, c2];
                // free positions: (row i, col j) with j > pivots[i], j not a pivot
                let mut free: Vec<(usize, usize)> = vec![];
                for (i, &pc) in pivots.iter().enumerate() {
                    for j in pc + 1..6 {
                        if !pivots.contains(&j) {
                            free.push((i, j));
                        }
                    }
                }
                let total = (p as usize).pow(free.len() as u32);
                for code in 0..total {
                    let mut rows = vec![vec![0u64; 6]; 3];
                    for (i, &pc) in pivots.iter().enumerate() {
                        rows[i][pc] = 1;
                    }
                    let mut c = code;
                    for &(i, j) in &free {
                        rows[i][j] = (c % p as usize) as u64;
                        c /= p as usize;
                    }
                    scanned += 1;
                    // isotropy
                    let mut ok = true;
                    'pairs: for i in 0..3 {
                        for j in i..3 {
                            if pairing.eval(&rows[i], &rows[j]) != 0 {
                                ok = false;
                                break 'pairs;
                            }
                        }
                    }
                    if !ok {
                        continue;
                    }
                    let (maximal, indecomposable) = classify(&rows, p);
                    out.push(IsotropicSubgroup {
                        p,
                        basis: rows,
                        maximal,
                        indecomposable,
                    });
                }
            }
        }
    }
    (out, scanned)
}

// ---------------------------------------------------------------------------
// Combinatorial gluing data ↔ subgroups (p = 2).
// ---------------------------------------------------------------------------

/// The three pair-partitions of four labels {0,1,2,3}, in resolvent order:
/// partition i pairs label 0 with label i+1.
pub const PARTITIONS: [[[usize; 2]; 2]; 3] = [
    [[0, 1], [2, 3]],
    [[0, 2], [1, 3]],
    [[0, 3], [1, 2]],
];

/// A gluing datum at the label level: the two-element subset 𝒯 of the six
/// Y-labels, and the matching σ sending X-partition i to the partition
/// σ[i] of the four remaining Y-labels.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CombinatorialDatum {
    /// Indices of 𝒯 = {β₅, β₆} among the 6 labels, ascending.
    pub t_pair: [usize; 2],
    /// Partition matching: X-partition i ↦ r_Y-partition σ[i].
    pub sigma: [usize; 3],
}

/// The labels complementary to 𝒯, ascending.
fn complement_labels(t: &[usize; 2]) -> [usize; 4] {
    let mut out = [0usize; 4];
    let mut k = 0;
    for l in 0..6 {
        if l != t[0] && l != t[1] {
            out[k] = l;
            k += 1;
        }
    }
    out
}

/// Build the maximal isotropic subgroup G = {(x, y) : ℓ(x) = y + H}
/// encoded by a combinatorial datum.
pub fn datum_to_subgroup(
    vx: &TwoTorsionSpace,
    vy: &TwoTorsionSpace,
    d: &CombinatorialDatum,
) -> Result<IsotropicSubgroup> {
    if d.t_pair[0] >= d.t_pair[1] || d.t_pair[1] > 5 {
        return Err(Error::InvalidInput("bad 𝒯 indices".into()));
    }
    let h = vy.class_vector((1 << d.t_pair[0]) | (1 << d.t_pair[1]))?;
    let comp = complement_labels(&d.t_pair);
    // ℓ on the X-partition classes: partition i of the complement labels,
    // represented by the pair containing comp[0]
    let ell = |i: usize| -> Result<Vec<u64>> {
        let pr = &PARTITIONS[d.sigma[i]][0]; // pair containing local label 0
        let mask = (1u32 << comp[pr[0]]) | (1 << comp[pr[1]]);
        vy.class_vector(mask)
    };
    let vx_class = |i: usize| -> Result<Vec<u64>> {
        let pr = &PARTITIONS[i][0];
        vx.class_vector((1u32 << pr[0]) | (1 << pr[1]))
    };
    // anti-symplectic check on the basis images
    let (x0, x1) = (vx_class(0)?, vx_class(1)?);
    let (y0, y1) = (ell(0)?, ell(1)?);
    if vy.pair(&y0, &y1) != vx.pair(&x0, &x1) {
        return Err(Error::InvalidInput(
            "pairing is not anti-symplectic on the datum".into(),
        ));
    }
    let mut rows = vec![];
    for (x, y) in [(x0, y0), (x1, y1)] {
        let mut r = vec![0u64; 6];
        r[..2].copy_from_slice(&x);
        r[2..].copy_from_slice(&y);
        rows.push(r);
    }
    let mut hr = vec![0u64; 6];
    hr[2..].copy_from_slice(&h);
    rows.push(hr);
    let basis = rref_mod(&rows, 2);
    if basis.len() != 3 {
        return Err(Error::InvalidInput("datum does not span dimension 3".into()));
    }
    let (maximal, indecomposable) = classify(&basis, 2);
    Ok(IsotropicSubgroup {
        p: 2,
        basis,
        maximal,
        indecomposable,
    })
}

/// Recover the combinatorial datum from an indecomposable maximal isotropic
/// subgroup; errors on decomposable input.
pub fn subgroup_to_datum(
    vx: &TwoTorsionSpace,
    vy: &TwoTorsionSpace,
    g: &IsotropicSubgroup,
) -> Result<CombinatorialDatum> {
    if g.p != 2 {
        return Err(Error::InvalidInput("datum correspondence is for p = 2".into()));
    }
    if !g.indecomposable || !g.maximal {
        return Err(Error::InvalidInput(
            "subgroup is decomposable; no gluing datum".into(),
        ));
    }
    // H = G ∩ (0 × V_Y): the unique nonzero element with zero X-part
    let mut h: Option<Vec<u64>> = None;
    for combo in 1u32..8 {
        let mut v = vec![0u64; 6];
        for (i, row) in g.basis.iter().enumerate() {
            if combo >> i & 1 == 1 {
                for c in 0..6 {
                    v[c] = (v[c] + row[c]) % 2;
                }
            }
        }
        if v[0] == 0 && v[1] == 0 && v.iter().any(|&x| x != 0) {
            h = Some(v[2..].to_vec());
            break;
        }
    }
    let h = h.ok_or_else(|| Error::InvalidInput("no kernel element found".into()))?;
    // 𝒯 = the 2-subset representative of the class of h (the canonical
    // representative may be the complementary 4-subset)
    let mut hmask = vy.vector_class(&h);
    if hmask.count_ones() == 4 {
        hmask = 0b111111 & !hmask;
    }
    let t_idx = sorted_indices(hmask, 6);
    if t_idx.len() != 2 {
        return Err(Error::InvalidInput("kernel class is not a 2-subset".into()));
    }
    let t_pair = [t_idx[0], t_idx[1]];
    let comp = complement_labels(&t_pair);
    // ℓ: for each X-partition class find a group element with that X-part
    let mut sigma = [usize::MAX; 3];
    for i in 0..3 {
        let pr = &PARTITIONS[i][0];
        let x = vx.class_vector((1u32 << pr[0]) | (1 << pr[1]))?;
        let mut y_part: Option<Vec<u64>> = None;
        for combo in 1u32..8 {
            let mut v = vec![0u64; 6];
            for (r, row) in g.basis.iter().enumerate() {
                if combo >> r & 1 == 1 {
                    for c in 0..6 {
                        v[c] = (v[c] + row[c]) % 2;
                    }
                }
            }
            if v[0] == x[0] && v[1] == x[1] {
                y_part = Some(v[2..].to_vec());
                break;
            }
        }
        let y = y_part.ok_or_else(|| Error::InvalidInput("projection not surjective".into()))?;
        // identify which partition of the complement: y (or y + h) is the
        // class of a pair inside the complement
        let mut found = None;
        for (j, part) in PARTITIONS.iter().enumerate() {
            let mask = (1u32 << comp[part[0][0]]) | (1 << comp[part[0][1]]);
            let v = vy.class_vector(mask)?;
            let eq = v == y || {
                let shifted: Vec<u64> = y.iter().zip(&h).map(|(a, b)| (a + b) % 2).collect();
                v == shifted
            };
            if eq {
                found = Some(j);
                break;
            }
        }
        sigma[i] =
            found.ok_or_else(|| Error::InvalidInput("image is not a partition class".into()))?;
    }
    Ok(CombinatorialDatum {
        t_pair,
        sigma,
    })
}

// ---------------------------------------------------------------------------
// Cubic resolvents and the rationality criterion.
// ---------------------------------------------------------------------------

/// Cubic resolvent of a monic separable quartic x⁴+a₃x³+a₂x²+a₁x+a₀:
/// ϱ(p) = x³ − a₂x² + (a₁a₃ − 4a₀)x + (4a₀a₂ − a₁² − a₀a₃²), whose roots are
/// γ₁ = α₁α₂+α₃α₄, γ₂ = α₁α₃+α₂α₄, γ₃ = α₁α₄+α₂α₃.
pub fn cubic_resolvent(p: &Poly) -> Result<Poly> {
    if p.deg() != 4 {
        return Err(Error::InvalidInput("resolvent needs a quartic".into()));
    }
    if !p.is_separable()? {
        return Err(Error::Inseparable("resolvent of inseparable quartic".into()));
    }
    let m = p.monic()?;
    let f = p.field().clone();
    let (a0, a1, a2, a3) = (m.coeff(0), m.coeff(1), m.coeff(2), m.coeff(3));
    let four = f.from_i64(4);
    let c2 = a2.neg();
    let c1 = a1.mul(&a3).sub(&four.mul(&a0));
    let c0 = four
        .mul(&a0)
        .mul(&a2)
        .sub(&a1.mul(&a1))
        .sub(&a0.mul(&a3).mul(&a3));
    Ok(Poly::new(&f, vec![c0, c1, c2, f.one()]))
}

/// The comparison cubic of a genus-1 side model: the resolvent for a
/// quartic, the (monicized) polynomial itself for a cubic.
pub fn comparison_cubic(p: &Poly) -> Result<Poly> {
    match p.deg() {
        3 => p.monic(),
        4 => cubic_resolvent(p),
        d => Err(Error::InvalidInput(format!(
            "expected degree 3 or 4, got {}",
            d
        ))),
    }
}

/// Splitting-field degree of a polynomial over F_q: lcm of factor degrees.
fn finite_splitting_degree(p: &Poly, rng: &mut ChaCha8Rng) -> Result<usize> {
    let f = factor::factor(p, rng)?;
    let mut d = 1usize;
    for (g, _) in &f.factors {
        d = num_integer::lcm(d, g.deg());
    }
    Ok(d)
}

/// Sorted multiset of irreducible factor degrees.
fn shape(p: &Poly, rng: &mut ChaCha8Rng) -> Result<Vec<usize>> {
    let f = factor::factor(p, rng)?;
    let mut s: Vec<usize> = f.factors.iter().map(|(g, _)| g.deg()).collect();
    s.sort();
    Ok(s)
}

fn rational_square(a: &Elt) -> bool {
    match a.as_rational() {
        Some(r) => {
            crate::intutil::perfect_sqrt(r.numer()).is_some()
                && crate::intutil::perfect_sqrt(r.denom()).is_some()
        }
        None => false,
    }
}

/// Whether two separable cubics generate isomorphic splitting fields.
pub fn splitting_fields_isomorphic(f: &Poly, g: &Poly, rng: &mut ChaCha8Rng) -> Result<bool> {
    if f.deg() != 3 || g.deg() != 3 {
        return Err(Error::InvalidInput("expected cubics".into()));
    }
    if !f.is_separable()? || !g.is_separable()? {
        return Err(Error::Inseparable("inseparable cubic".into()));
    }
    match f.field().kind() {
        FieldKind::Prime { .. } | FieldKind::Extension { .. } => Ok(
            finite_splitting_degree(f, rng)? == finite_splitting_degree(g, rng)?,
        ),
        FieldKind::Rationals => {
            let sf = shape(f, rng)?;
            let sg = shape(g, rng)?;
            if sf != sg {
                return Ok(false);
            }
            match sf.as_slice() {
                [1, 1, 1] => Ok(true),
                [1, 2] => {
                    // same square class of the quadratic discriminants
                    let df = f.discriminant()?;
                    let dg = g.discriminant()?;
                    Ok(rational_square(&df.mul(&dg)))
                }
                [3] => {
                    let df = f.discriminant()?;
                    let dg = g.discriminant()?;
                    if !rational_square(&df.mul(&dg)) {
                        return Ok(false);
                    }
                    // f must acquire a root over ℚ[x]/(g)
                    let k = factor::rational_quotient_field(&g.monic()?, rng)?;
                    let fk = f.map_coeffs(&k, |c| {
                        k.from_rational(c.as_rational().unwrap()).unwrap()
                    });
                    let rs = factor::roots(&fk, rng)?;
                    Ok(!rs.is_empty())
                }
                _ => Err(Error::InvalidInput("unexpected cubic shape".into())),
            }
        }
        FieldKind::RationalQuotient { .. } => Err(Error::InvalidInput(
            "criterion over quotient algebras not supported".into(),
        )),
    }
}

/// All bijections of resolvent roots commuting with the Galois action,
/// between the sorted root lists of f and g in their common tower.
pub fn equivariant_bijections(
    f: &Poly,
    g: &Poly,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<[usize; 3]>> {
    let (tower, roots) = common_splitting_tower(&[f.clone(), g.clone()], rng)?;
    let rf = &roots[0];
    let rg = &roots[1];
    if rf.len() != 3 || rg.len() != 3 {
        return Err(Error::InvalidInput("expected cubics".into()));
    }
    // Galois action as permutations of the sorted root indices
    let perm_of = |rs: &Vec<Elt>, aut: usize| -> Result<[usize; 3]> {
        let mut p = [0usize; 3];
        for (i, r) in rs.iter().enumerate() {
            let img = tower.apply_aut(aut, r)?;
            p[i] = rs
                .iter()
                .position(|x| x == &img)
                .ok_or_else(|| Error::VerificationFailed("automorphism does not permute roots".into()))?;
        }
        Ok(p)
    };
    let nauts = tower.num_automorphisms();
    let mut perms = vec![];
    for a in 0..nauts {
        perms.push((perm_of(rf, a)?, perm_of(rg, a)?));
    }
    let all: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut out = vec![];
    for b in all {
        // σ is equivariant iff σ ∘ g_f = g_g ∘ σ for every automorphism
        let ok = perms.iter().all(|(pf, pg)| (0..3).all(|i| b[pf[i]] == pg[b[i]]));
        if ok {
            out.push(b);
        }
    }
    Ok(out)
}

/// Number of Galois-equivariant isomorphisms between the splitting fields,
/// as permutation matchings of the resolvent roots: the centralizer order of
/// the common Galois image (S₃ ↦ 1, C₃ ↦ 3, C₂ ↦ 2, trivial ↦ 6).
pub fn count_equivariant_isos(f: &Poly, g: &Poly, rng: &mut ChaCha8Rng) -> Result<usize> {
    if !splitting_fields_isomorphic(f, g, rng)? {
        return Err(Error::InvalidInput("splitting fields not isomorphic".into()));
    }
    Ok(equivariant_bijections(f, g, rng)?.len())
}

// ---------------------------------------------------------------------------
// Gluing data enumeration (polynomial level).
// ---------------------------------------------------------------------------

/// A rational gluing datum: the quadratic factor (or linear factor plus ∞,
/// for quintic models), its complementary quartic, and the equivariant
/// matching of resolvent roots (by sorted index in the common tower).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GluingDatum {
    /// Monic factor of p_Y cutting out 𝒯: quadratic, or linear when 𝒯
    /// contains the point at infinity.
    pub q_y: Poly,
    /// Complementary factor (the genus-1 comparison side), p_Y / q_Y.
    pub r_y: Poly,
    /// Resolvent-root matching: root i of the comparison cubic of p_X ↦
    /// root pairing[i] of the comparison cubic of r_Y (sorted tower order).
    pub pairing: [usize; 3],
    /// True when 𝒯 = {root of q_y, ∞}.
    pub t_includes_infinity: bool,
}

impl GluingDatum {
    /// The comparison cubics (c_X from p_X is supplied by the caller).
    pub fn comparison_cubic_r(&self) -> Result<Poly> {
        comparison_cubic(&self.r_y)
    }
}

/// Enumerate candidate 𝒯-factors of p_Y: monic quadratic divisors, and for
/// quintic p_Y each monic linear factor (𝒯 = {root, ∞}).
fn t_factors(p_y: &Poly, rng: &mut ChaCha8Rng) -> Result<Vec<(Poly, bool)>> {
    let f = factor::factor(p_y, rng)?;
    let mut linears = vec![];
    let mut quads = vec![];
    for (g, e) in &f.factors {
        debug_assert_eq!(*e, 1);
        match g.deg() {
            1 => linears.push(g.clone()),
            2 => quads.push(g.clone()),
            _ => {}
        }
    }
    let mut out: Vec<(Poly, bool)> = vec![];
    // quadratic = irreducible quadratic factor, or product of two linears
    for q in &quads {
        out.push((q.clone(), false));
    }
    for i in 0..linears.len() {
        for j in i + 1..linears.len() {
            out.push((linears[i].mul(&linears[j]), false));
        }
    }
    if p_y.deg() == 5 {
        for l in &linears {
            out.push((l.clone(), true));
        }
    }
    Ok(out)
}

/// All rational gluing data for the pair (p_X, p_Y): one per quadratic factor
/// of p_Y passing the splitting-field criterion, times the equivariant
/// resolvent matchings.  Empty exactly when the rationality criterion fails.
pub fn rational_gluing_data(
    p_x: &Poly,
    p_y: &Poly,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<GluingDatum>> {
    if p_x.deg() != 3 && p_x.deg() != 4 {
        return Err(Error::InvalidInput("p_X must have degree 3 or 4".into()));
    }
    if p_y.deg() != 5 && p_y.deg() != 6 {
        return Err(Error::InvalidInput("p_Y must have degree 5 or 6".into()));
    }
    if !p_x.is_separable()? || !p_y.is_separable()? {
        return Err(Error::Inseparable("curve model must be separable".into()));
    }
    let c_x = comparison_cubic(p_x)?;
    if !c_x.is_separable()? {
        return Err(Error::Inseparable("degenerate resolvent of p_X".into()));
    }
    let mut out = vec![];
    for (q, with_inf) in t_factors(p_y, rng)? {
        let r = p_y.div_exact(&q)?.monic()?;
        let c_r = comparison_cubic(&r)?;
        if !c_r.is_separable()? {
            continue;
        }
        if !splitting_fields_isomorphic(&c_x, &c_r, rng)? {
            continue;
        }
        for sigma in equivariant_bijections(&c_x, &c_r, rng)? {
            out.push(GluingDatum {
                q_y: q.clone(),
                r_y: r.clone(),
                pairing: sigma,
                t_includes_infinity: with_inf,
            });
        }
    }
    out.sort_by(|a, b| {
        (a.q_y.coeffs(), a.pairing).cmp(&(b.q_y.coeffs(), b.pairing))
    });
    Ok(out)
}

// ---------------------------------------------------------------------------
// Finite-field label-level data (used by the gluer and verifier).
// ---------------------------------------------------------------------------

use crate::tower::{embed_finite, finite_gen_image};

/// Over a finite field, translate a polynomial-level datum into label-level
/// combinatorics inside a common splitting tower of p_X and p_Y, and verify
/// that the induced subgroup is Frobenius-stable.
pub fn datum_combinatorics(
    p_x: &Poly,
    p_y: &Poly,
    d: &GluingDatum,
    rng: &mut ChaCha8Rng,
) -> Result<(CombinatorialDatum, Tower, RootSet, RootSet)> {
    let c_x = comparison_cubic(p_x)?;
    let c_r = comparison_cubic(&d.r_y)?;
    let (tower, roots) = common_splitting_tower(&[p_x.clone(), p_y.clone()], rng)?;
    let rs_x = RootSet::new(p_x, &roots[0], 4)?;
    let rs_y = RootSet::new(p_y, &roots[1], 6)?;
    // the datum's pairing indexes the sorted resolvent roots in the small
    // common tower of (c_X, c_R); rebuild it (the construction is
    // deterministic) and embed its roots into the big tower
    let (small, sroots) = common_splitting_tower(&[c_x.clone(), c_r.clone()], rng)?;
    let gen_img = finite_gen_image(small.field(), tower.field(), rng)?;
    let gamma: Vec<Elt> = sroots[0]
        .iter()
        .map(|e| embed_finite(e, tower.field(), &gen_img))
        .collect::<Result<_>>()?;
    let delta: Vec<Elt> = sroots[1]
        .iter()
        .map(|e| embed_finite(e, tower.field(), &gen_img))
        .collect::<Result<_>>()?;
    let gamma = &gamma;
    let delta = &delta;
    // 𝒯 indices among the Y labels
    let qk = tower.embed_poly(&d.q_y)?;
    let mut t_idx: Vec<usize> = rs_y
        .points
        .iter()
        .enumerate()
        .filter(|(_, pt)| {
            if pt.is_infinity() {
                d.t_includes_infinity
            } else {
                qk.eval(&pt.0).is_zero()
            }
        })
        .map(|(i, _)| i)
        .collect();
    if t_idx.len() != 2 {
        return Err(Error::VerificationFailed("𝒯 does not have two labels".into()));
    }
    t_idx.sort();
    let t_pair = [t_idx[0], t_idx[1]];
    // partition values: resolvent root attached to each partition
    let comp = complement_labels(&t_pair);
    let part_value = |pts: &[ProjPoint], part: &[[usize; 2]; 2]| -> Result<Elt> {
        // with an ∞ label (always label 0), the partition pairing ∞ with a
        // finite root corresponds to that root itself
        let has_inf = pts.iter().any(|p| p.is_infinity());
        if has_inf {
            let pair_with_inf = if part[0].contains(&0) { &part[0] } else { &part[1] };
            let other = if pair_with_inf[0] == 0 {
                pair_with_inf[1]
            } else {
                pair_with_inf[0]
            };
            Ok(pts[other].0.clone())
        } else {
            let a = &pts[part[0][0]].0;
            let b = &pts[part[0][1]].0;
            let c = &pts[part[1][0]].0;
            let e = &pts[part[1][1]].0;
            Ok(a.mul(b).add(&c.mul(e)))
        }
    };
    // X side: partition index → sorted γ index
    let mut x_part_to_root = [usize::MAX; 3];
    for (i, part) in PARTITIONS.iter().enumerate() {
        let v = part_value(&rs_x.points, part)?;
        x_part_to_root[i] = gamma
            .iter()
            .position(|g| g == &v)
            .ok_or_else(|| Error::VerificationFailed("partition value is not a resolvent root".into()))?;
    }
    // R side: partition of the complement labels → sorted δ index
    let comp_points: Vec<ProjPoint> = comp.iter().map(|&l| rs_y.points[l].clone()).collect();
    let mut r_part_to_root = [usize::MAX; 3];
    for (i, part) in PARTITIONS.iter().enumerate() {
        let v = part_value(&comp_points, part)?;
        r_part_to_root[i] = delta
            .iter()
            .position(|g| g == &v)
            .ok_or_else(|| Error::VerificationFailed("partition value is not a resolvent root".into()))?;
    }
    // σ at partition level: partition i of X ↦ partition j of R with
    // d.pairing[γ-index of i] = δ-index of j
    let mut sigma = [usize::MAX; 3];
    for i in 0..3 {
        let target = d.pairing[x_part_to_root[i]];
        sigma[i] = r_part_to_root
            .iter()
            .position(|&x| x == target)
            .ok_or_else(|| Error::VerificationFailed("resolvent matching inconsistent".into()))?;
    }
    let cd = CombinatorialDatum { t_pair, sigma };
    // Frobenius stability of the induced subgroup
    let vx = TwoTorsionSpace::build(4)?;
    let vy = TwoTorsionSpace::build(6)?;
    let g = datum_to_subgroup(&vx, &vy, &cd)?;
    for aut in 0..tower.num_automorphisms() {
        let perm_x = label_permutation(&tower, aut, &rs_x)?;
        let perm_y = label_permutation(&tower, aut, &rs_y)?;
        let mx = vx.permutation_matrix(&perm_x)?;
        let my = vy.permutation_matrix(&perm_y)?;
        for row in &g.basis {
            let mut img = vec![0u64; 6];
            for i in 0..2 {
                for j in 0..2 {
                    img[i] = (img[i] + mx[i][j] * row[j]) % 2;
                }
            }
            for i in 0..4 {
                for j in 0..4 {
                    img[i + 2] = (img[i + 2] + my[i][j] * row[j + 2]) % 2;
                }
            }
            if !in_row_space(&g.basis, &img, 2) {
                return Err(Error::VerificationFailed(
                    "induced subgroup is not Galois stable".into(),
                ));
            }
        }
    }
    Ok((cd, tower, rs_x, rs_y))
}

/// The permutation of labels induced by a tower automorphism (∞ is fixed).
pub fn label_permutation(tower: &Tower, aut: usize, rs: &RootSet) -> Result<Vec<usize>> {
    let mut perm = vec![usize::MAX; rs.points.len()];
    for (i, pt) in rs.points.iter().enumerate() {
        if pt.is_infinity() {
            perm[i] = i;
            continue;
        }
        let img = tower.apply_aut(aut, &pt.0)?;
        perm[i] = rs
            .points
            .iter()
            .position(|q| !q.is_infinity() && q.0 == img)
            .ok_or_else(|| Error::VerificationFailed("automorphism does not permute roots".into()))?;
    }
    Ok(perm)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use rand::SeedableRng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(11)
    }

    #[test]
    fn space_dimensions_and_classes() {
        let v4 = TwoTorsionSpace::build(4).unwrap();
        assert_eq!(v4.dim, 2);
        assert_eq!(v4.num_nonzero_classes(), 3);
        let v6 = TwoTorsionSpace::build(6).unwrap();
        assert_eq!(v6.dim, 4);
        assert_eq!(v6.num_nonzero_classes(), 15);
        // the 15 2-subsets hit each nonzero class exactly once
        let mut seen = std::collections::BTreeSet::new();
        for i in 0..6u32 {
            for j in i + 1..6 {
                let v = v6.class_vector((1 << i) | (1 << j)).unwrap();
                assert!(v.iter().any(|&x| x != 0));
                seen.insert(v);
            }
        }
        assert_eq!(seen.len(), 15);
    }

    #[test]
    fn pairing_example() {
        // {P1,P2} vs {P2,P3} share one element → pairing 1
        let v4 = TwoTorsionSpace::build(4).unwrap();
        let a = v4.class_vector(0b0011).unwrap();
        let b = v4.class_vector(0b0110).unwrap();
        assert_eq!(v4.pair(&a, &b), 1);
        assert_eq!(v4.pair(&a, &a), 0);
    }

    #[test]
    fn class_well_defined_under_complement() {
        let v6 = TwoTorsionSpace::build(6).unwrap();
        for mask in 0u32..64 {
            if mask.count_ones() % 2 != 0 {
                continue;
            }
            let comp = 0b111111 & !mask;
            assert_eq!(
                v6.class_vector(mask).unwrap(),
                v6.class_vector(comp).unwrap()
            );
        }
    }

    #[test]
    fn isotropic_counts_p2() {
        let pp = ProductPairing::standard(2).unwrap();
        let (subs, scanned) = enumerate_isotropic(&pp);
        assert_eq!(scanned, 1395); // Gaussian binomial [6 choose 3]₂
        assert_eq!(subs.len(), 135);
        assert_eq!(subs.iter().filter(|s| s.indecomposable).count(), 90);
        assert!(subs.iter().all(|s| s.maximal));
    }

    #[test]
    fn isotropic_counts_p3() {
        let pp = ProductPairing::standard(3).unwrap();
        let (subs, _) = enumerate_isotropic(&pp);
        assert_eq!(subs.len(), 1120); // (p³+1)(p²+1)(p+1)
        assert_eq!(subs.iter().filter(|s| s.indecomposable).count(), 960); // p(p+1)(p⁴−1)
    }

    #[test]
    fn datum_subgroup_roundtrip_all_90() {
        let vx = TwoTorsionSpace::build(4).unwrap();
        let vy = TwoTorsionSpace::build(6).unwrap();
        let pp = ProductPairing::from_spaces(&vx, &vy).unwrap();
        let (subs, _) = enumerate_isotropic(&pp);
        let indec: Vec<_> = subs.iter().filter(|s| s.indecomposable).collect();
        assert_eq!(indec.len(), 90);
        let mut images = std::collections::BTreeSet::new();
        for g in &indec {
            let d = subgroup_to_datum(&vx, &vy, g).unwrap();
            let g2 = datum_to_subgroup(&vx, &vy, &d).unwrap();
            assert_eq!(g2.basis, g.basis);
            images.insert((d.t_pair, d.sigma));
        }
        assert_eq!(images.len(), 90); // bijection with (15 pairs) × (6 matchings)
        // decomposable subgroups have no datum
        let dec = subs.iter().find(|s| !s.indecomposable).unwrap();
        assert!(subgroup_to_datum(&vx, &vy, dec).is_err());
    }

    #[test]
    fn resolvent_printed_example() {
        let q = Field::rationals();
        let p = Poly::from_i64(&q, &[-1, -1, 2, -1, 1]); // x⁴−x³+2x²−x−1
        let r = cubic_resolvent(&p).unwrap();
        assert_eq!(r, Poly::from_i64(&q, &[-8, 5, -2, 1])); // x³−2x²+5x−8
    }

    #[test]
    fn resolvent_biquadratic() {
        let q = Field::rationals();
        // x⁴ + c x² → x³ − c x² with c = 7 (make it separable: x⁴+7x²+1)
        let p = Poly::from_i64(&q, &[1, 0, 7, 0, 1]);
        let r = cubic_resolvent(&p).unwrap();
        assert_eq!(r.coeff(2), q.from_i64(-7));
    }

    #[test]
    fn resolvent_roots_oracle_f11() {
        // expand ∏(x − γ_i) from the root formulas and compare coefficients
        let f = Field::prime(11).unwrap();
        let mut r = rng();
        let mut trials = 0;
        while trials < 50 {
            let p = Poly::random(&f, 4, &mut r).monic().unwrap();
            if !p.is_separable().unwrap() {
                continue;
            }
            let roots = factor::roots(&p, &mut r).unwrap();
            if roots.len() != 4 {
                continue;
            }
            trials += 1;
            let g1 = roots[0].mul(&roots[1]).add(&roots[2].mul(&roots[3]));
            let g2 = roots[0].mul(&roots[2]).add(&roots[1].mul(&roots[3]));
            let g3 = roots[0].mul(&roots[3]).add(&roots[1].mul(&roots[2]));
            let expanded = Poly::from_roots(&f, &[g1, g2, g3]);
            assert_eq!(cubic_resolvent(&p).unwrap(), expanded);
        }
    }

    #[test]
    fn resolvent_permutation_invariant() {
        let f = Field::prime(13).unwrap();
        let mut r = rng();
        for _ in 0..10 {
            let roots: Vec<Elt> = loop {
                let v: Vec<Elt> = (0..4).map(|_| f.random(&mut r)).collect();
                let distinct = (0..4).all(|i| (i + 1..4).all(|j| v[i] != v[j]));
                if distinct {
                    break v;
                }
            };
            let p = Poly::from_roots(&f, &roots);
            let base = cubic_resolvent(&p).unwrap();
            // any relabeling of the roots yields the same resolvent
            let mut perm = roots.clone();
            perm.swap(0, 2);
            perm.swap(1, 3);
            assert_eq!(cubic_resolvent(&Poly::from_roots(&f, &perm)).unwrap(), base);
        }
    }

    #[test]
    fn iso_fields_examples() {
        let q = Field::rationals();
        let mut r = rng();
        // the printed pair: p_X as cubic vs resolvent of r_Y
        let a = Poly::from_i64(&q, &[157, -98, 5, 4]);
        let b = Poly::from_i64(&q, &[-8, 5, -2, 1]);
        assert!(splitting_fields_isomorphic(&a, &b, &mut r).unwrap());
        assert_eq!(count_equivariant_isos(&a, &b, &mut r).unwrap(), 1);
        // f = g trivially
        assert!(splitting_fields_isomorphic(&a, &a, &mut r).unwrap());
        // x³−2 vs x³−3: same shape, non-isomorphic fields
        let c2 = Poly::from_i64(&q, &[-2, 0, 0, 1]);
        let c3 = Poly::from_i64(&q, &[-3, 0, 0, 1]);
        assert!(!splitting_fields_isomorphic(&c2, &c3, &mut r).unwrap());
        // split cubics → 6 matchings
        let s1 = Poly::from_i64(&q, &[0, -1, 0, 1]); // x(x−1)(x+1)
        let s2 = Poly::from_roots(&q, &[q.from_i64(2), q.from_i64(3), q.from_i64(5)]);
        assert_eq!(count_equivariant_isos(&s1, &s2, &mut r).unwrap(), 6);
    }

    #[test]
    fn iso_fields_c3_over_f5() {
        // irreducible cubics over F_5 generate F_125 with cyclic C₃ action
        let f = Field::prime(5).unwrap();
        let mut r = rng();
        let a = Poly::from_i64(&f, &[1, 1, 0, 1]); // x³+x+1
        assert!(factor::is_irreducible(&a, &mut r).unwrap());
        let b = Poly::from_i64(&f, &[1, 2, 0, 1]); // x³+2x+1: also irreducible
        assert!(factor::is_irreducible(&b, &mut r).unwrap());
        assert_eq!(count_equivariant_isos(&a, &b, &mut r).unwrap(), 3);
    }

    #[test]
    fn seventy_example_unique_datum() {
        let q = Field::rationals();
        let mut r = rng();
        let p_x = Poly::from_i64(&q, &[157, -98, 5, 4]);
        let p_y = Poly::from_i64(&q, &[1, 0, -4, 2, 0, 0, 1]);
        let data = rational_gluing_data(&p_x, &p_y, &mut r).unwrap();
        assert_eq!(data.len(), 1);
        assert_eq!(data[0].q_y, Poly::from_i64(&q, &[-1, 1, 1]));
        assert!(!data[0].t_includes_infinity);
    }

    #[test]
    fn irreducible_sextic_no_datum() {
        let q = Field::rationals();
        let mut r = rng();
        let p_x = Poly::from_i64(&q, &[1, 1, 0, 1]);
        // x⁶ + x + 1 is irreducible over ℚ (irreducible mod 2... check by factor)
        let p_y = Poly::from_i64(&q, &[1, 1, 0, 0, 0, 0, 1]);
        let f = factor::factor(&p_y, &mut r).unwrap();
        if f.factors.len() == 1 {
            let data = rational_gluing_data(&p_x, &p_y, &mut r).unwrap();
            assert!(data.is_empty());
        }
    }

    #[test]
    fn f3_example_two_gluings() {
        let f3 = Field::prime(3).unwrap();
        let mut r = rng();
        let p_x = Poly::from_i64(&f3, &[1, 1, 0, 2, 1]); // x⁴+2x³+x+1
        let p_y = Poly::from_i64(&f3, &[1, 2, 1, 1, 1, 0, 2]); // 2x⁶+x⁴+x³+x²+2x+1
        let data = rational_gluing_data(&p_x, &p_y, &mut r).unwrap();
        assert!(data.len() >= 2, "expected at least two gluing data, got {}", data.len());
        // each datum's combinatorics must produce a Frobenius-stable subgroup
        for d in &data {
            datum_combinatorics(&p_x, &p_y, d, &mut r).unwrap();
        }
    }

    #[test]
    fn frobenius_stability_random_instances() {
        let mut r = rng();
        for &p in &[5u64, 7, 11, 13] {
            let f = Field::prime(p).unwrap();
            let mut done = 0;
            while done < 5 {
                let p_x = Poly::random(&f, 4, &mut r);
                let p_y = Poly::random(&f, 6, &mut r);
                if !p_x.is_separable().unwrap() || !p_y.is_separable().unwrap() {
                    continue;
                }
                let c_x = comparison_cubic(&p_x).unwrap();
                if !c_x.is_separable().unwrap() {
                    continue;
                }
                done += 1;
                let data = match rational_gluing_data(&p_x, &p_y, &mut r) {
                    Ok(d) => d,
                    Err(_) => continue,
                };
                for d in &data {
                    // stability is verified inside datum_combinatorics
                    datum_combinatorics(&p_x, &p_y, d, &mut r).unwrap();
                }
            }
        }
    }
}
