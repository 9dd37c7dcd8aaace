//! Integral lattices: sublattices, isometries, discriminant data and overlattices.

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{
    bilinear, det_exact, invariant_factors, kernel_basis, rank, rat, smith_normal_form,
    IntMatrix, ScaledBasis,
};

/// Largest discriminant group whose form values are tabulated element by element.
pub const MAX_TABULATED_GROUP: u64 = 4096;

/// Default candidate budget for [`glue_unimodular_search`].
pub const DEFAULT_GLUE_BOUND: u64 = 1_000_000;

/// A free Z-module with an integral symmetric bilinear form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    label: String,
    gram: IntMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Lattice {
    pub fn new(label: impl Into<String>, gram: IntMatrix) -> Result<Self> {
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(Lattice {
            label: label.into(),
            gram,
        })
    }

    pub fn from_i64(label: impl Into<String>, rows: &[&[i64]]) -> Result<Self> {
        Self::new(label, IntMatrix::from_i64(rows))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn det(&self) -> BigInt {
        det_exact(&self.gram).expect("gram is square")
    }

    /// Order of the discriminant group, `|det|`.
    pub fn disc_order(&self) -> BigInt {
        self.det().abs()
    }

    pub fn parity(&self) -> Parity {
        if (0..self.rank()).all(|i| self.gram.get(i, i).is_even()) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_even(&self) -> bool {
        self.parity() == Parity::Even
    }

    pub fn is_unimodular(&self) -> bool {
        self.disc_order().is_one()
    }

    pub fn pair(&self, x: &[BigRational], y: &[BigRational]) -> BigRational {
        bilinear(&self.gram, x, y)
    }

    pub fn signature(&self) -> (usize, usize) {
        let (p, n, _) = signature(&self.gram);
        (p, n)
    }
}

/// `(positive, negative, null)` inertia of a symmetric integer matrix.
///
/// Congruence diagonalization kept fraction-free: each elimination step
/// multiplies the remaining block by the pivot, which is tracked as a sign flip.
pub fn signature(g: &IntMatrix) -> (usize, usize, usize) {
    let mut m: Vec<Vec<BigInt>> = g.to_rows();
    let mut flipped = false;
    let (mut pos, mut neg) = (0usize, 0usize);
    loop {
        let n = m.len();
        if n == 0 {
            return (pos, neg, 0);
        }
        if let Some(i) = (0..n).find(|&i| !m[i][i].is_zero()) {
            let p = m[i][i].clone();
            if p.is_positive() != flipped {
                pos += 1;
            } else {
                neg += 1;
            }
            let rest: Vec<usize> = (0..n).filter(|&r| r != i).collect();
            let next: Vec<Vec<BigInt>> = rest
                .iter()
                .map(|&r| {
                    rest.iter()
                        .map(|&c| &p * &m[r][c] - &m[r][i] * &m[i][c])
                        .collect()
                })
                .collect();
            if p.is_negative() {
                flipped = !flipped;
            }
            m = reduce_content(next);
            continue;
        }
        let hit = (0..n).find_map(|i| (0..n).find(|&j| !m[i][j].is_zero()).map(|j| (i, j)));
        let Some((i, j)) = hit else {
            return (pos, neg, n);
        };
        // Zero diagonal with b = m[i][j] ≠ 0: a hyperbolic block, inertia (1, 1).
        pos += 1;
        neg += 1;
        let b = m[i][j].clone();
        let rest: Vec<usize> = (0..n).filter(|&r| r != i && r != j).collect();
        let next: Vec<Vec<BigInt>> = rest
            .iter()
            .map(|&r| {
                rest.iter()
                    .map(|&c| &b * &m[r][c] - (&m[r][i] * &m[c][j] + &m[r][j] * &m[c][i]))
                    .collect()
            })
            .collect();
        if b.is_negative() {
            flipped = !flipped;
        }
        m = reduce_content(next);
    }
}

fn reduce_content(mut m: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let c = m
        .iter()
        .flatten()
        .fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if c > BigInt::one() {
        for x in m.iter_mut().flatten() {
            *x = &*x / &c;
        }
    }
    m
}

/// A sublattice of `ambient`, spanned by the columns of `basis`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sublattice {
    ambient: Lattice,
    basis: IntMatrix,
}

impl Sublattice {
    pub fn new(ambient: Lattice, basis: IntMatrix) -> Result<Self> {
        if basis.rows() != ambient.rank() {
            return Err(Error::Shape(format!(
                "basis has {} rows but ambient rank is {}",
                basis.rows(),
                ambient.rank()
            )));
        }
        if rank(&basis) != basis.cols() {
            return Err(Error::Invalid("basis columns are linearly dependent".into()));
        }
        Ok(Sublattice { ambient, basis })
    }

    pub fn ambient(&self) -> &Lattice {
        &self.ambient
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.cols()
    }

    pub fn gram(&self) -> IntMatrix {
        self.basis
            .congruence(self.ambient.gram())
            .expect("conformal basis")
    }

    pub fn as_lattice(&self, label: impl Into<String>) -> Lattice {
        Lattice::new(label, self.gram()).expect("induced gram is symmetric")
    }
}

/// An isometry of a lattice, `Mᵀ G M = G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isometry {
    lattice: Lattice,
    matrix: IntMatrix,
}

impl Isometry {
    pub fn new(lattice: Lattice, matrix: IntMatrix) -> Result<Self> {
        let n = lattice.rank();
        if matrix.rows() != n || matrix.cols() != n {
            return Err(Error::Shape("isometry matrix must match lattice rank".into()));
        }
        if matrix.congruence(lattice.gram())? != *lattice.gram() {
            return Err(Error::NotIsometry("matrix does not preserve the gram".into()));
        }
        Ok(Isometry { lattice, matrix })
    }

    pub fn identity(lattice: Lattice) -> Self {
        let n = lattice.rank();
        Isometry {
            lattice,
            matrix: IntMatrix::identity(n),
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn is_involution(&self) -> bool {
        self.matrix.mul(&self.matrix).expect("square") == IntMatrix::identity(self.lattice.rank())
    }
}

/// Discriminant group `L*/L` with its generators in rational lattice coordinates.
#[derive(Clone, Debug)]
pub struct DiscriminantGroup {
    pub generators: Vec<Vec<BigRational>>,
    pub orders: Vec<BigInt>,
    /// Pairings of generators, `gᵢᵀ G gⱼ`, unreduced.
    pub pairings: Vec<Vec<BigRational>>,
    pub parity: Parity,
}

fn reduce_mod(x: &BigRational, m: &BigRational) -> BigRational {
    x - m * (x / m).floor()
}

impl DiscriminantGroup {
    pub fn order(&self) -> BigInt {
        self.orders.iter().product()
    }

    /// Modulus for discriminant-form values: 2 for even lattices, 1 otherwise.
    pub fn modulus(&self) -> BigRational {
        match self.parity {
            Parity::Even => rat(2),
            Parity::Odd => rat(1),
        }
    }

    /// Value of the form on `Σ cᵢ gᵢ`, reduced.
    pub fn q(&self, c: &[BigInt]) -> BigRational {
        reduce_mod(&self.raw_pair(c, c), &self.modulus())
    }

    /// Bilinear value on two elements, reduced mod 1.
    pub fn b(&self, c: &[BigInt], d: &[BigInt]) -> BigRational {
        reduce_mod(&self.raw_pair(c, d), &rat(1))
    }

    fn raw_pair(&self, c: &[BigInt], d: &[BigInt]) -> BigRational {
        let mut acc = BigRational::zero();
        for (i, ci) in c.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, dj) in d.iter().enumerate() {
                if !dj.is_zero() {
                    acc += &self.pairings[i][j] * BigRational::from_integer(ci * dj);
                }
            }
        }
        acc
    }

    /// All elements as coefficient tuples, or `None` when the group is too large.
    pub fn elements(&self) -> Option<Vec<Vec<BigInt>>> {
        let total = self.order().to_u64()?;
        if total > MAX_TABULATED_GROUP {
            return None;
        }
        let mut out = vec![Vec::new()];
        for d in &self.orders {
            let d = d.to_u64()?;
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..d).map(move |k| {
                        let mut p = prefix.clone();
                        p.push(BigInt::from(k));
                        p
                    })
                })
                .collect();
        }
        Some(out)
    }

    /// Rational lattice coordinates of `Σ cᵢ gᵢ`.
    pub fn lift(&self, c: &[BigInt]) -> Vec<BigRational> {
        let n = self.generators.first().map_or(0, Vec::len);
        let mut v = vec![BigRational::zero(); n];
        for (ci, g) in c.iter().zip(&self.generators) {
            if ci.is_zero() {
                continue;
            }
            let cq = BigRational::from_integer(ci.clone());
            for (vi, gi) in v.iter_mut().zip(g) {
                *vi += &cq * gi;
            }
        }
        v
    }

    fn reduce(&self, c: &[BigInt]) -> Vec<BigInt> {
        c.iter().zip(&self.orders).map(|(x, d)| x.mod_floor(d)).collect()
    }
}

/// Discriminant group from the Smith form `U G V = D`: generators `V eᵢ / dᵢ`.
pub fn discriminant_group(l: &Lattice) -> Result<DiscriminantGroup> {
    let snf = smith_normal_form(l.gram());
    if snf.d.iter().any(Zero::is_zero) {
        return Err(Error::Degenerate);
    }
    let mut generators = Vec::new();
    let mut orders = Vec::new();
    for (i, d) in snf.d.iter().enumerate() {
        if d.is_one() {
            continue;
        }
        let dq = BigRational::from_integer(d.clone());
        generators.push(
            snf.v
                .column(i)
                .into_iter()
                .map(|x| BigRational::from_integer(x) / &dq)
                .collect::<Vec<_>>(),
        );
        orders.push(d.clone());
    }
    let pairings = generators
        .iter()
        .map(|x| generators.iter().map(|y| l.pair(x, y)).collect())
        .collect();
    Ok(DiscriminantGroup {
        generators,
        orders,
        pairings,
        parity: l.parity(),
    })
}

/// Comparison fingerprint of a nondegenerate lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantProfile {
    pub rank: usize,
    pub signature: (usize, usize),
    pub parity: Parity,
    #[serde(serialize_with = "crate::json::ser", deserialize_with = "crate::json::de_ints")]
    pub invariant_factors: Vec<BigInt>,
    /// Histogram of form values over the whole discriminant group, when tabulated.
    pub disc_form_values: Option<Vec<(String, u64)>>,
}

impl DiscriminantProfile {
    pub fn disc_order(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    /// `Some(k)` when the discriminant group is `(Z/2)^k`.
    pub fn two_elementary_rank(&self) -> Option<usize> {
        self.invariant_factors
            .iter()
            .all(|d| *d == BigInt::from(2))
            .then_some(self.invariant_factors.len())
    }
}

pub fn discriminant_profile(l: &Lattice) -> Result<DiscriminantProfile> {
    let (p, n, z) = signature(l.gram());
    if z > 0 {
        return Err(Error::Degenerate);
    }
    let factors: Vec<BigInt> = invariant_factors(l.gram())
        .into_iter()
        .filter(|d| !d.is_one())
        .collect();
    let order: BigInt = factors.iter().product();
    let disc_form_values = if order <= BigInt::from(MAX_TABULATED_GROUP) {
        let group = discriminant_group(l)?;
        let mut hist: BTreeMap<BigRational, u64> = BTreeMap::new();
        for e in group.elements().expect("small group") {
            *hist.entry(group.q(&e)).or_default() += 1;
        }
        Some(hist.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
    } else {
        None
    };
    Ok(DiscriminantProfile {
        rank: l.rank(),
        signature: (p, n),
        parity: l.parity(),
        invariant_factors: factors,
        disc_form_values,
    })
}

pub fn profile_equal(a: &Lattice, b: &Lattice) -> bool {
    match (discriminant_profile(a), discriminant_profile(b)) {
        (Ok(x), Ok(y)) => x == y,
        _ => false,
    }
}

pub fn direct_sum(a: &Lattice, b: &Lattice) -> Lattice {
    let label = match (a.label.is_empty(), b.label.is_empty()) {
        (false, false) => format!("{}+{}", a.label, b.label),
        _ => format!("{}{}", a.label, b.label),
    };
    Lattice {
        label,
        gram: a.gram.block_diag(&b.gram),
    }
}

/// Direct sum of several lattices, in order.
pub fn direct_sum_all(parts: &[Lattice]) -> Lattice {
    let mut it = parts.iter();
    let first = it.next().cloned().unwrap_or_else(|| Lattice {
        label: String::new(),
        gram: IntMatrix::zeros(0, 0),
    });
    it.fold(first, |acc, l| direct_sum(&acc, l))
}

pub fn rescale(a: &Lattice, n: i64) -> Result<Lattice> {
    if n == 0 {
        return Err(Error::ZeroScale);
    }
    Ok(Lattice {
        label: format!("{}({n})", a.label),
        gram: a.gram.scale(&BigInt::from(n)),
    })
}

pub fn orthogonal_complement(s: &Sublattice) -> Result<Sublattice> {
    if s.ambient.det().is_zero() {
        return Err(Error::Degenerate);
    }
    let a = s.basis.transpose().mul(s.ambient.gram())?;
    Sublattice::new(s.ambient.clone(), kernel_basis(&a))
}

/// Minimal primitive sublattice containing `s`, with the index `[sat : s]`.
pub fn saturation(s: &Sublattice) -> (Sublattice, BigInt) {
    let index: BigInt = smith_normal_form(&s.basis)
        .d
        .into_iter()
        .filter(|d| !d.is_zero())
        .product();
    if index.is_one() {
        return (s.clone(), index);
    }
    let annihilator = kernel_basis(&s.basis.transpose());
    let sat = kernel_basis(&annihilator.transpose());
    (
        Sublattice {
            ambient: s.ambient.clone(),
            basis: sat,
        },
        index,
    )
}

pub fn is_primitive(s: &Sublattice) -> bool {
    saturation(s).1.is_one()
}

fn shifted(g: &Isometry, shift: i64) -> IntMatrix {
    let n = g.lattice.rank();
    g.matrix
        .add(&IntMatrix::identity(n).scale(&BigInt::from(shift)))
        .expect("square")
}

/// Saturated kernel of `g − 1`.
pub fn invariant_sublattice(g: &Isometry) -> Sublattice {
    Sublattice {
        ambient: g.lattice.clone(),
        basis: kernel_basis(&shifted(g, -1)),
    }
}

/// Saturated kernel of `g + 1`.
pub fn anti_invariant_sublattice(g: &Isometry) -> Sublattice {
    Sublattice {
        ambient: g.lattice.clone(),
        basis: kernel_basis(&shifted(g, 1)),
    }
}

/// A lattice presented inside the rational span of a parent lattice.
#[derive(Clone, Debug)]
pub struct Overlattice {
    pub lattice: Lattice,
    /// Basis in rational coordinates of the parent.
    pub basis: ScaledBasis,
}

impl Overlattice {
    /// Coordinates of a parent vector in this lattice's basis (rational in general).
    pub fn coordinates_of(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if self.basis.numer.is_square() {
            let d = BigRational::from_integer(self.basis.denom.clone());
            let scaled: Vec<BigRational> = v.iter().map(|x| x * &d).collect();
            return crate::linalg::solve_rational(&self.basis.numer, &scaled);
        }
        coordinates_in(&self.basis.columns(), v)
    }
}

/// Solves `Σ cⱼ colsⱼ = v` for a full-column-rank family via its normal equations.
pub fn coordinates_in(cols: &[Vec<BigRational>], v: &[BigRational]) -> Result<Vec<BigRational>> {
    let k = cols.len();
    let den = cols
        .iter()
        .chain(std::iter::once(&v.to_vec()))
        .fold(BigInt::one(), |acc, c| acc.lcm(&crate::linalg::common_denominator(c)));
    let dq = BigRational::from_integer(den);
    let scale = |c: &[BigRational]| -> Vec<BigInt> { c.iter().map(|x| (x * &dq).to_integer()).collect() };
    let a = IntMatrix::from_columns(v.len(), &cols.iter().map(|c| scale(c)).collect::<Vec<_>>())?;
    let at = a.transpose();
    let normal = at.mul(&a)?;
    let rhs: Vec<BigRational> = at
        .mul_vec(&scale(v))?
        .into_iter()
        .map(BigRational::from_integer)
        .collect();
    let c = crate::linalg::solve_rational(&normal, &rhs)?;
    // Verify v really lies in the span.
    for (i, vi) in v.iter().enumerate() {
        let back: BigRational = (0..k).map(|j| &c[j] * &cols[j][i]).sum();
        if &back != vi {
            return Err(Error::Invalid("vector is not in the rational span".into()));
        }
    }
    Ok(c)
}

/// The lattice generated by the invariant sublattice and `½(1+g)·t` for all `t`,
/// carrying the doubled form `2B`.
pub fn norm_overlattice(l: &Lattice, g: &Isometry) -> Result<Overlattice> {
    if g.lattice.gram != l.gram {
        return Err(Error::Shape("isometry acts on a different lattice".into()));
    }
    if !g.is_involution() {
        return Err(Error::NotInvolution);
    }
    let n = l.rank();
    let inv = invariant_sublattice(g);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut gens: Vec<Vec<BigRational>> = inv
        .basis
        .columns()
        .into_iter()
        .map(|c| c.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let one_plus_g = shifted(g, 1);
    for i in 0..n {
        gens.push(
            one_plus_g
                .column(i)
                .into_iter()
                .map(|x| BigRational::from_integer(x) * &half)
                .collect(),
        );
    }
    let basis = ScaledBasis::span(n, &gens)?;
    let doubled = l.gram.scale(&BigInt::from(2));
    let gram = crate::linalg::rational_rows_to_int(&basis.gram_in(&doubled)?)
        .ok_or_else(|| Error::NonIntegral("norm overlattice gram".into()))?;
    Ok(Overlattice {
        lattice: Lattice::new(format!("N({})", l.label), gram)?,
        basis,
    })
}

/// Overlattice spanned by `l` and rational glue vectors (coordinates in `l`'s basis).
pub fn adjoin_glue_vectors(
    l: &Lattice,
    glue: &[Vec<BigRational>],
    require_even: bool,
) -> Result<Overlattice> {
    let n = l.rank();
    for (idx, v) in glue.iter().enumerate() {
        if v.len() != n {
            return Err(Error::BadGlue {
                index: idx,
                reason: format!("length {} but rank {n}", v.len()),
            });
        }
        for j in 0..n {
            let pj = l.pair(v, &unit(n, j));
            if !pj.is_integer() {
                return Err(Error::BadGlue {
                    index: idx,
                    reason: format!("pairing {pj} with basis vector {j} is not integral"),
                });
            }
        }
        let vv = l.pair(v, v);
        if !vv.is_integer() {
            return Err(Error::BadGlue {
                index: idx,
                reason: format!("self-pairing {vv} is not integral"),
            });
        }
        if require_even && !vv.to_integer().is_even() {
            return Err(Error::BadGlue {
                index: idx,
                reason: format!("self-pairing {vv} is odd"),
            });
        }
        for (jdx, w) in glue[..idx].iter().enumerate() {
            let vw = l.pair(v, w);
            if !vw.is_integer() {
                return Err(Error::BadGlue {
                    index: idx,
                    reason: format!("pairing {vw} with glue vector {jdx} is not integral"),
                });
            }
        }
    }
    let mut gens: Vec<Vec<BigRational>> = (0..n).map(|j| unit(n, j)).collect();
    gens.extend(glue.iter().cloned());
    let basis = ScaledBasis::span(n, &gens)?;
    let gram = crate::linalg::rational_rows_to_int(&basis.gram_in(&l.gram)?)
        .ok_or_else(|| Error::NonIntegral("glued gram".into()))?;
    Ok(Overlattice {
        lattice: Lattice::new(l.label.clone(), gram)?,
        basis,
    })
}

pub fn unit(n: usize, j: usize) -> Vec<BigRational> {
    (0..n).map(|i| rat(i32::from(i == j))).collect()
}

/// Outcome of [`glue_unimodular_search`].
#[derive(Clone, Debug)]
pub enum GlueSearch {
    Found {
        overlattice: Overlattice,
        glue: Vec<Vec<BigRational>>,
        candidates: u64,
    },
    /// Every generator-wise assignment was tried; none gave an anti-isometry.
    Exhausted { candidates: u64 },
    /// The candidate budget ran out first.
    BoundReached { candidates: u64 },
}

impl GlueSearch {
    pub fn found(&self) -> Option<&Overlattice> {
        match self {
            GlueSearch::Found { overlattice, .. } => Some(overlattice),
            _ => None,
        }
    }
}

struct SearchState<'a> {
    ga: &'a DiscriminantGroup,
    gb: &'a DiscriminantGroup,
    elements: Vec<Vec<BigInt>>,
    q_b: Vec<BigRational>,
    bound: u64,
    candidates: u64,
    images: Vec<usize>,
    subgroup: Vec<HashSet<Vec<BigInt>>>,
}

impl SearchState<'_> {
    fn dfs(&mut self) -> Option<bool> {
        let i = self.images.len();
        if i == self.ga.orders.len() {
            return Some(true);
        }
        let two = rat(2);
        let one = rat(1);
        let ord = self.ga.orders[i].clone();
        let gi: Vec<BigInt> = (0..self.ga.orders.len()).map(|k| BigInt::from(i32::from(k == i))).collect();
        let target_q = reduce_mod(&-self.ga.raw_pair(&gi, &gi), &two);
        for h in 0..self.elements.len() {
            self.candidates += 1;
            if self.candidates > self.bound {
                return None;
            }
            let e = &self.elements[h];
            if self.gb.reduce(&e.iter().map(|c| c * &ord).collect::<Vec<_>>()).iter().any(|c| !c.is_zero()) {
                continue;
            }
            if self.q_b[h] != target_q {
                continue;
            }
            let compatible = self.images.iter().enumerate().all(|(j, &hj)| {
                let gj: Vec<BigInt> = (0..self.ga.orders.len()).map(|k| BigInt::from(i32::from(k == j))).collect();
                let want = reduce_mod(&-self.ga.raw_pair(&gi, &gj), &one);
                self.gb.b(e, &self.elements[hj]) == want
            });
            if !compatible {
                continue;
            }
            let prev = self.subgroup.last().expect("seeded");
            let mut grown = HashSet::with_capacity(prev.len() * 2);
            let mut k = BigInt::zero();
            while k < ord {
                for s in prev {
                    let v: Vec<BigInt> = s.iter().zip(e).map(|(a, b)| a + &k * b).collect();
                    grown.insert(self.gb.reduce(&v));
                }
                k += 1;
            }
            if BigInt::from(grown.len()) != BigInt::from(prev.len()) * &ord {
                continue;
            }
            self.images.push(h);
            self.subgroup.push(grown);
            match self.dfs() {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {
                    self.images.pop();
                    self.subgroup.pop();
                }
            }
        }
        Some(false)
    }
}

/// Searches for an anti-isometry `A_a → A_b` whose graph glues `a ⊕ b`
/// to an even unimodular overlattice.
pub fn glue_unimodular_search(a: &Lattice, b: &Lattice, bound: u64) -> Result<GlueSearch> {
    if !a.is_even() || !b.is_even() {
        return Err(Error::Invalid("glue search needs even lattices".into()));
    }
    let ga = discriminant_group(a)?;
    let gb = discriminant_group(b)?;
    if ga.order() != gb.order() {
        return Err(Error::Invalid(format!(
            "discriminant orders differ: {} vs {}",
            ga.order(),
            gb.order()
        )));
    }
    let elements = gb
        .elements()
        .ok_or_else(|| Error::Invalid("discriminant group too large to enumerate".into()))?;
    let q_b = elements.iter().map(|e| gb.q(e)).collect();
    let mut seed = HashSet::new();
    seed.insert(vec![BigInt::zero(); gb.orders.len()]);
    let mut st = SearchState {
        ga: &ga,
        gb: &gb,
        elements,
        q_b,
        bound,
        candidates: 0,
        images: Vec::new(),
        subgroup: vec![seed],
    };
    match st.dfs() {
        None => Ok(GlueSearch::BoundReached {
            candidates: st.candidates,
        }),
        Some(false) => Ok(GlueSearch::Exhausted {
            candidates: st.candidates,
        }),
        Some(true) => {
            let sum = direct_sum(a, b);
            let glue: Vec<Vec<BigRational>> = st
                .images
                .iter()
                .enumerate()
                .map(|(i, &h)| {
                    let mut v = ga.generators[i].clone();
                    v.extend(gb.lift(&st.elements[h]));
                    v
                })
                .collect();
            let overlattice = adjoin_glue_vectors(&sum, &glue, true)?;
            if !overlattice.lattice.is_unimodular() {
                return Err(Error::Invalid("glued lattice is not unimodular".into()));
            }
            Ok(GlueSearch::Found {
                overlattice,
                glue,
                candidates: st.candidates,
            })
        }
    }
}

/// Lattice JSON: `{"label", "gram"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub label: String,
    #[serde(serialize_with = "crate::json::ser", deserialize_with = "crate::json::de_int_rows")]
    pub gram: Vec<Vec<BigInt>>,
}

/// Sublattice JSON: lattice fields plus `ambient` label and basis vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SublatticeJson {
    pub label: String,
    #[serde(serialize_with = "crate::json::ser", deserialize_with = "crate::json::de_int_rows")]
    pub gram: Vec<Vec<BigInt>>,
    pub ambient: String,
    #[serde(serialize_with = "crate::json::ser", deserialize_with = "crate::json::de_int_rows")]
    pub basis: Vec<Vec<BigInt>>,
}

impl From<&Lattice> for LatticeJson {
    fn from(l: &Lattice) -> Self {
        LatticeJson {
            label: l.label.clone(),
            gram: l.gram.to_rows(),
        }
    }
}

impl TryFrom<LatticeJson> for Lattice {
    type Error = Error;
    fn try_from(j: LatticeJson) -> Result<Self> {
        Lattice::new(j.label, IntMatrix::from_rows(&j.gram)?)
    }
}

impl Sublattice {
    pub fn to_json(&self, label: impl Into<String>) -> SublatticeJson {
        SublatticeJson {
            label: label.into(),
            gram: self.gram().to_rows(),
            ambient: self.ambient.label.clone(),
            basis: self.basis.columns(),
        }
    }

    /// Rebuilds a sublattice from JSON given its ambient lattice.
    pub fn from_json(ambient: Lattice, j: &SublatticeJson) -> Result<Self> {
        if j.ambient != ambient.label {
            return Err(Error::Invalid(format!(
                "ambient label {} does not match {}",
                j.ambient, ambient.label
            )));
        }
        let s = Sublattice::new(ambient.clone(), IntMatrix::from_columns(ambient.rank(), &j.basis)?)?;
        if s.gram().to_rows() != j.gram {
            return Err(Error::Invalid("stored gram disagrees with basis".into()));
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::linalg::rat_frac;

    #[test]
    fn signature_of_hyperbolic_plane() {
        assert_eq!(signature(&IntMatrix::from_i64(&[&[0, 1], &[1, 0]])), (1, 1, 0));
        assert_eq!(signature(&IntMatrix::from_i64(&[&[0, 0], &[0, 0]])), (0, 0, 2));
        assert_eq!(signature(&IntMatrix::from_i64(&[&[-3, 1], &[1, 5]])), (1, 1, 0));
    }

    #[test]
    fn sums_and_scaling() {
        let u = catalog::hyperbolic_plane();
        let uu = direct_sum(&u, &u);
        assert_eq!(uu.rank(), 4);
        assert_eq!(uu.det(), BigInt::one());
        let u2 = rescale(&u, 2).unwrap();
        assert_eq!(*u2.gram(), IntMatrix::from_i64(&[&[0, 2], &[2, 0]]));
        let m4 = rescale(&catalog::rank_one(-2), 2).unwrap();
        assert_eq!(*m4.gram(), IntMatrix::from_i64(&[&[-4]]));
        assert_eq!(rescale(&u, 0), Err(Error::ZeroScale));
        let e8m2 = rescale(&catalog::e8(1), -2).unwrap();
        assert_eq!(e8m2.det(), BigInt::from(256));
    }

    #[test]
    fn u2_cubed_profile() {
        let u2 = rescale(&catalog::hyperbolic_plane(), 2).unwrap();
        let l = direct_sum_all(&[u2.clone(), u2.clone(), u2]);
        let p = discriminant_profile(&l).unwrap();
        assert_eq!(p.signature, (3, 3));
        assert_eq!(p.two_elementary_rank(), Some(6));
    }

    #[test]
    fn e8_profile_trivial() {
        let p = discriminant_profile(&catalog::e8(-1)).unwrap();
        assert!(p.invariant_factors.is_empty());
        assert_eq!(p.signature, (0, 8));
        assert_eq!(p.parity, Parity::Even);
    }

    #[test]
    fn isotropic_line_complement() {
        let u = catalog::hyperbolic_plane();
        let s = Sublattice::new(u, IntMatrix::from_i64(&[&[1], &[0]])).unwrap();
        let c = orthogonal_complement(&s).unwrap();
        assert_eq!(c.rank(), 1);
        assert_eq!(c.basis().column(0), vec![BigInt::one(), BigInt::zero()]);
    }

    #[test]
    fn saturation_of_doubled_square_lattice() {
        let z2 = Lattice::new("Z2", IntMatrix::identity(2)).unwrap();
        let s = Sublattice::new(z2, IntMatrix::diagonal(&[2i64, 2])).unwrap();
        assert!(!is_primitive(&s));
        let (sat, idx) = saturation(&s);
        assert_eq!(idx, BigInt::from(4));
        assert_eq!(det_exact(sat.basis()).unwrap().abs(), BigInt::one());
        let (again, idx2) = saturation(&sat);
        assert_eq!(idx2, BigInt::one());
        assert_eq!(again, sat);
    }

    #[test]
    fn glue_pair_of_minus_four() {
        let l = Lattice::new("m4m4", IntMatrix::diagonal(&[-4i64, -4])).unwrap();
        let h = rat_frac(1, 2);
        let glue = vec![vec![h.clone(), h.clone()], vec![h.clone(), -h]];
        let o = adjoin_glue_vectors(&l, &glue, true).unwrap();
        assert_eq!(o.lattice.det(), BigInt::from(4));
        assert!(profile_equal(
            &o.lattice,
            &Lattice::new("m2m2", IntMatrix::diagonal(&[-2i64, -2])).unwrap()
        ));
        assert!(adjoin_glue_vectors(&l, &[], true).unwrap().lattice.det() == l.det());
    }

    #[test]
    fn bad_glue_is_rejected_with_index() {
        let l = Lattice::new("m2", IntMatrix::diagonal(&[-2i64, -2])).unwrap();
        let q = rat_frac(1, 4);
        let err = adjoin_glue_vectors(&l, &[vec![q.clone(), q]], false).unwrap_err();
        assert!(matches!(err, Error::BadGlue { index: 0, .. }));
    }

    #[test]
    fn profile_separates_parity() {
        let u2 = rescale(&catalog::hyperbolic_plane(), 2).unwrap();
        let odd = Lattice::new("2,-2", IntMatrix::diagonal(&[2i64, -2])).unwrap();
        assert!(!profile_equal(&u2, &odd));
        assert!(profile_equal(&u2, &u2));
    }

    #[test]
    fn glue_two_copies_of_u2() {
        let u2 = rescale(&catalog::hyperbolic_plane(), 2).unwrap();
        let r = glue_unimodular_search(&u2, &u2, DEFAULT_GLUE_BOUND).unwrap();
        let o = r.found().expect("anti-isometry exists");
        assert_eq!(o.lattice.rank(), 4);
        assert!(o.lattice.is_unimodular());
        assert!(o.lattice.is_even());
    }

    #[test]
    fn glue_bound_is_reported() {
        let u2 = rescale(&catalog::hyperbolic_plane(), 2).unwrap();
        let r = glue_unimodular_search(&u2, &u2, 1).unwrap();
        assert!(matches!(r, GlueSearch::BoundReached { .. }));
    }

    #[test]
    fn json_roundtrip() {
        let l = catalog::nikulin();
        let j = serde_json::to_string(&LatticeJson::from(&l)).unwrap();
        let back: Lattice = serde_json::from_str::<LatticeJson>(&j).unwrap().try_into().unwrap();
        assert_eq!(back, l);
    }
}
