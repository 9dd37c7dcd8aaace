//! Degree-4 cohomology lattice of the Hilbert square of a K3 surface.
//!
//! Classes are coordinates in the Qin–Wang basis. Products of degree-2 classes
//! are formal monomials; their pairings come from the Fujiki relation with
//! constant 3 plus the rules for the point class.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::catalog::{self, convention};
use crate::error::{Error, Result};
use crate::lattice::{
    adjoin_glue_vectors, is_primitive, Isometry, Lattice, Overlattice, Sublattice,
};
use crate::linalg::{
    bilinear, content, det_exact, inverse_unimodular, kernel_basis, rat, rat_frac,
    solve_rational_many, to_integers, IntMatrix,
};

/// One element of the Qin–Wang basis; indices are 0-based K3 classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QwIndex {
    /// `q₁(1)q₁(x)|0⟩`
    Point,
    /// `q₂(α_k)|0⟩`
    Q2(usize),
    /// `q₁(α_k)q₁(α_m)|0⟩`, `k < m`
    Q11(usize, usize),
    /// `m₁,₁(α_k)|0⟩`
    M11(usize),
}

impl QwIndex {
    pub fn label(&self) -> String {
        match *self {
            QwIndex::Point => "pt".into(),
            QwIndex::Q2(k) => format!("q2({})", convention::name(k)),
            QwIndex::Q11(k, m) => format!("q1q1({},{})", convention::name(k), convention::name(m)),
            QwIndex::M11(k) => format!("m11({})", convention::name(k)),
        }
    }
}

impl fmt::Display for QwIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Enumeration of the basis for `n` degree-2 classes of the surface.
///
/// Order: point, then `Q2` by `k`, then `Q11` lexicographic in `(k, m)`, then `M11`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QwBasis {
    n: usize,
}

impl QwBasis {
    pub fn new(n: usize) -> Self {
        QwBasis { n }
    }

    pub fn classes(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        1 + 2 * self.n + self.n * (self.n - 1) / 2
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn pair_offset(&self, k: usize, m: usize) -> usize {
        k * (2 * self.n - k - 1) / 2 + (m - k - 1)
    }

    pub fn index(&self, q: QwIndex) -> usize {
        let n = self.n;
        match q {
            QwIndex::Point => 0,
            QwIndex::Q2(k) => 1 + k,
            QwIndex::Q11(k, m) => {
                assert!(k < m && m < n, "Q11 needs k < m < n");
                1 + n + self.pair_offset(k, m)
            }
            QwIndex::M11(k) => 1 + n + n * (n - 1) / 2 + k,
        }
    }

    pub fn element(&self, i: usize) -> QwIndex {
        let n = self.n;
        let pairs = n * (n - 1) / 2;
        match i {
            0 => QwIndex::Point,
            i if i <= n => QwIndex::Q2(i - 1),
            i if i <= n + pairs => {
                let mut r = i - 1 - n;
                let mut k = 0;
                while r >= n - k - 1 {
                    r -= n - k - 1;
                    k += 1;
                }
                QwIndex::Q11(k, k + 1 + r)
            }
            i => {
                assert!(i < self.len(), "basis index out of range");
                QwIndex::M11(i - 1 - n - pairs)
            }
        }
    }

    pub fn elements(&self) -> Vec<QwIndex> {
        (0..self.len()).map(|i| self.element(i)).collect()
    }
}

/// A formal product of two degree-2 classes or the point class.
///
/// Degree-2 indices run over `0..=n`, where `n` stands for δ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Monomial {
    Pt,
    Prod(usize, usize),
}

impl Monomial {
    pub fn prod(a: usize, b: usize) -> Self {
        Monomial::Prod(a.min(b), a.max(b))
    }
}

/// Rational combination of monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MonomialCombo(pub BTreeMap<Monomial, BigRational>);

impl MonomialCombo {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut s = Self::new();
        s.add(m, c);
        s
    }

    pub fn add(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(m).or_insert_with(BigRational::zero);
        *e += c;
        if e.is_zero() {
            self.0.remove(&m);
        }
    }

    pub fn add_combo(&mut self, other: &MonomialCombo, scale: &BigRational) {
        for (m, c) in &other.0 {
            self.add(*m, c * scale);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.0.iter()
    }
}

/// Pairing data for degree-4 classes, parametrized by the K3 Gram matrix.
#[derive(Clone, Debug)]
pub struct H4Model {
    g: IntMatrix,
    basis: QwBasis,
}

impl H4Model {
    pub fn new(k3_gram: IntMatrix) -> Result<Self> {
        if !k3_gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let n = k3_gram.rows();
        Ok(H4Model {
            g: k3_gram,
            basis: QwBasis::new(n),
        })
    }

    pub fn basis(&self) -> QwBasis {
        self.basis
    }

    pub fn k3_gram(&self) -> &IntMatrix {
        &self.g
    }

    /// Index standing for δ among degree-2 classes.
    pub fn delta(&self) -> usize {
        self.basis.n
    }

    /// Beauville–Bogomolov form on `H²` of the Hilbert square: `G ⊕ ⟨−2⟩`.
    pub fn bb(&self, a: usize, b: usize) -> BigInt {
        let d = self.delta();
        match (a == d, b == d) {
            (true, true) => BigInt::from(-2),
            (true, false) | (false, true) => BigInt::zero(),
            _ => self.g.get(a, b).clone(),
        }
    }

    /// The four-fold product `a·b·c·d` of degree-2 classes.
    pub fn fujiki_quadruple(&self, a: usize, b: usize, c: usize, d: usize) -> BigInt {
        self.bb(a, b) * self.bb(c, d) + self.bb(a, c) * self.bb(b, d) + self.bb(a, d) * self.bb(b, c)
    }

    /// Same as [`H4Model::fujiki_quadruple`] for arbitrary vectors of degree-2 classes.
    pub fn fujiki_vectors(&self, a: &[BigInt], b: &[BigInt], c: &[BigInt], d: &[BigInt]) -> BigInt {
        let bb = |x: &[BigInt], y: &[BigInt]| -> BigInt {
            let mut acc = BigInt::zero();
            for (i, xi) in x.iter().enumerate() {
                if xi.is_zero() {
                    continue;
                }
                for (j, yj) in y.iter().enumerate() {
                    if !yj.is_zero() {
                        acc += xi * yj * self.bb(i, j);
                    }
                }
            }
            acc
        };
        bb(a, b) * bb(c, d) + bb(a, c) * bb(b, d) + bb(a, d) * bb(b, c)
    }

    /// Pairing of two monomials. `pt·δδ` needs the resolved constant `d`.
    pub fn monomial_pair(&self, x: Monomial, y: Monomial, d: Option<&BigInt>) -> Result<BigInt> {
        let delta = self.delta();
        match (x, y) {
            (Monomial::Pt, Monomial::Pt) => Ok(BigInt::one()),
            (Monomial::Pt, Monomial::Prod(a, b)) | (Monomial::Prod(a, b), Monomial::Pt) => {
                match (a == delta, b == delta) {
                    (true, true) => d
                        .cloned()
                        .ok_or_else(|| Error::Unresolved("pt·δδ before resolution".into())),
                    (true, false) | (false, true) => Ok(BigInt::zero()),
                    _ => Ok(self.g.get(a, b).clone()),
                }
            }
            (Monomial::Prod(a, b), Monomial::Prod(c, e)) => Ok(self.fujiki_quadruple(a, b, c, e)),
        }
    }

    pub fn combo_pair(&self, x: &MonomialCombo, y: &MonomialCombo, d: Option<&BigInt>) -> Result<BigRational> {
        let mut acc = BigRational::zero();
        for (mx, cx) in x.terms() {
            for (my, cy) in y.terms() {
                let p = self.monomial_pair(*mx, *my, d)?;
                if !p.is_zero() {
                    acc += cx * cy * BigRational::from_integer(p);
                }
            }
        }
        Ok(acc)
    }

    /// Monomial expansion of a basis element.
    pub fn expansion(&self, q: QwIndex) -> MonomialCombo {
        let delta = self.delta();
        let mut c = MonomialCombo::new();
        match q {
            QwIndex::Point => c.add(Monomial::Pt, rat(1)),
            QwIndex::Q2(k) => c.add(Monomial::prod(delta, k), rat(1)),
            QwIndex::Q11(k, m) => {
                c.add(Monomial::prod(k, m), rat(1));
                c.add(Monomial::Pt, -BigRational::from_integer(self.g.get(k, m).clone()));
            }
            QwIndex::M11(k) => {
                let h = rat_frac(1, 2);
                c.add(Monomial::prod(k, k), h.clone());
                c.add(Monomial::prod(delta, k), -h.clone());
                c.add(Monomial::Pt, -BigRational::from_integer(self.g.get(k, k).clone()) * h);
            }
        }
        c
    }

    pub fn expansions(&self) -> Vec<MonomialCombo> {
        self.basis.elements().into_iter().map(|q| self.expansion(q)).collect()
    }

    /// Gram matrix of the basis; never consults the `pt·δδ` constant.
    pub fn gram(&self) -> Result<IntMatrix> {
        let ex = self.expansions();
        let n = ex.len();
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = self.combo_pair(&ex[i], &ex[j], None)?;
                if !v.is_integer() {
                    return Err(Error::NonIntegral(format!(
                        "gram entry ({}, {}) = {v}",
                        self.basis.element(i),
                        self.basis.element(j)
                    )));
                }
                let v = v.to_integer();
                m.set(j, i, v.clone());
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    /// Pairings of a combination against every basis element.
    pub fn pairing_vector(&self, x: &MonomialCombo, d: Option<&BigInt>) -> Result<Vec<BigRational>> {
        self.expansions()
            .iter()
            .map(|e| self.combo_pair(x, e, d))
            .collect()
    }

    /// Basis coordinates of a monomial combination by direct rewriting.
    ///
    /// `δδ` terms are rewritten with `delta2` when provided.
    pub fn coords_of(&self, x: &MonomialCombo, delta2: Option<&[BigInt]>) -> Result<Vec<BigRational>> {
        let delta = self.delta();
        let b = self.basis;
        let mut out = vec![BigRational::zero(); b.len()];
        let mut bump = |q: QwIndex, c: BigRational| out[b.index(q)] += c;
        for (m, c) in x.terms() {
            match *m {
                Monomial::Pt => bump(QwIndex::Point, c.clone()),
                Monomial::Prod(a, e) if a == delta && e == delta => {
                    let d2 = delta2.ok_or_else(|| Error::Unresolved("δδ without δ² coordinates".into()))?;
                    for (i, v) in d2.iter().enumerate() {
                        if !v.is_zero() {
                            bump(b.element(i), c * BigRational::from_integer(v.clone()));
                        }
                    }
                }
                Monomial::Prod(a, e) if e == delta => bump(QwIndex::Q2(a), c.clone()),
                Monomial::Prod(a, e) if a == e => {
                    // γ² = G pt + 2 m₁₁ + q₂
                    bump(QwIndex::Point, c * BigRational::from_integer(self.g.get(a, a).clone()));
                    bump(QwIndex::M11(a), c * rat(2));
                    bump(QwIndex::Q2(a), c.clone());
                }
                Monomial::Prod(a, e) => {
                    bump(QwIndex::Point, c * BigRational::from_integer(self.g.get(a, e).clone()));
                    bump(QwIndex::Q11(a, e), c.clone());
                }
            }
        }
        Ok(out)
    }

    /// Permutation of basis indices induced by a permutation of K3 indices.
    pub fn induced_permutation(&self, p: impl Fn(usize) -> usize) -> Vec<usize> {
        let b = self.basis;
        b.elements()
            .into_iter()
            .map(|q| {
                b.index(match q {
                    QwIndex::Point => QwIndex::Point,
                    QwIndex::Q2(k) => QwIndex::Q2(p(k)),
                    QwIndex::Q11(k, m) => {
                        let (x, y) = (p(k), p(m));
                        QwIndex::Q11(x.min(y), x.max(y))
                    }
                    QwIndex::M11(k) => QwIndex::M11(p(k)),
                })
            })
            .collect()
    }
}

pub fn permutation_matrix(perm: &[usize]) -> IntMatrix {
    let n = perm.len();
    let mut m = IntMatrix::zeros(n, n);
    for (src, &dst) in perm.iter().enumerate() {
        m.set(dst, src, BigInt::one());
    }
    m
}

/// Inverse of the K3 Gram matrix, with its consistency checks.
#[derive(Clone, Debug)]
pub struct MuMatrix {
    pub mu: IntMatrix,
}

impl MuMatrix {
    pub fn new(g: &IntMatrix) -> Result<Self> {
        Ok(MuMatrix {
            mu: inverse_unimodular(g)?,
        })
    }

    pub fn diagonal_even(&self) -> bool {
        (0..self.mu.rows()).all(|i| self.mu.get(i, i).is_even())
    }

    /// `Σ μ_km μ_ij G_ki G_mj + 2`, the self-intersection of the diagonal of S×S.
    pub fn diagonal_self_intersection(&self, g: &IntMatrix) -> BigInt {
        let mg = self.mu.mul(g).expect("square");
        let mut acc = BigInt::zero();
        for a in 0..mg.rows() {
            for b in 0..mg.rows() {
                acc += mg.get(a, b) * mg.get(b, a);
            }
        }
        acc + 2
    }
}

/// Which of the six orbit families an invariant basis vector belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum OrbitType {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl OrbitType {
    pub const ALL: [OrbitType; 6] = [
        OrbitType::A,
        OrbitType::B,
        OrbitType::C,
        OrbitType::D,
        OrbitType::E,
        OrbitType::F,
    ];

    /// Singleton families, whose coordinates carry the parity conditions.
    pub fn is_fixed(self) -> bool {
        matches!(self, OrbitType::A | OrbitType::D | OrbitType::F)
    }
}

fn block(k: usize) -> u8 {
    if convention::U_BLOCK.contains(&k) {
        0
    } else if convention::E8_FIRST.contains(&k) {
        1
    } else {
        2
    }
}

fn classify(q: QwIndex, orbit_len: usize) -> OrbitType {
    match (q, orbit_len) {
        (QwIndex::Point, _) => OrbitType::F,
        (QwIndex::Q11(k, m), 1) if m == convention::swap(k) && k != m => OrbitType::D,
        (_, 1) => OrbitType::A,
        (QwIndex::Q2(_), _) => OrbitType::B,
        (QwIndex::M11(_), _) => OrbitType::C,
        (QwIndex::Q11(k, m), _) => match (block(k), block(m)) {
            (0, _) | (_, 0) => OrbitType::B,
            (x, y) if x == y => OrbitType::C,
            _ => OrbitType::E,
        },
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Orbit {
    pub members: Vec<usize>,
    pub kind: OrbitType,
}

/// Row of the δ² resolution scan.
#[derive(Clone, Debug, Serialize)]
pub struct DScanEntry {
    pub d: i64,
    pub integral: bool,
    pub self_pairing: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaSquaredResolution {
    #[serde(serialize_with = "crate::json::ser")]
    pub d: BigInt,
    pub scan: Vec<DScanEntry>,
    #[serde(serialize_with = "crate::json::ser")]
    pub expected_self_pairing: BigInt,
    /// Coordinates read off the closed-form expansion with `μ = G⁻¹`.
    #[serde(serialize_with = "crate::json::ser")]
    pub printed: Vec<BigRational>,
    pub printed_matches: bool,
    pub printed_matches_negated: bool,
}

/// Degree-4 data of the Hilbert square with the E8-swap involution.
pub struct Hilb2H4 {
    model: H4Model,
    mu: MuMatrix,
    gram: IntMatrix,
    gram_det: OnceLock<BigInt>,
    delta2: Vec<BigInt>,
    resolution: DeltaSquaredResolution,
    sigma: Vec<BigInt>,
    iota_perm: Vec<usize>,
    orbits: Vec<Orbit>,
    invariant: OnceLock<InvariantH4>,
    k_tilde: OnceLock<Result<Overlattice>>,
}

#[derive(Clone, Debug)]
pub struct InvariantH4 {
    pub sublattice: Sublattice,
    pub census: [usize; 6],
    pub disc: BigInt,
    pub certified_against_kernel: bool,
}

static H4: OnceLock<Result<Hilb2H4>> = OnceLock::new();

/// The shared instance; built on first use.
pub fn hilb2_h4() -> Result<&'static Hilb2H4> {
    H4.get_or_init(Hilb2H4::build).as_ref().map_err(Clone::clone)
}

impl Hilb2H4 {
    pub fn build() -> Result<Self> {
        let (k3, _) = catalog::k3_with_swap();
        let model = H4Model::new(k3.gram().clone())?;
        let mu = MuMatrix::new(model.k3_gram())?;
        let gram = model.gram()?;
        let basis = model.basis();
        let delta = model.delta();

        // δ² pairs as v0 + d·v1 where d = pt·δδ.
        let dd = MonomialCombo::term(Monomial::prod(delta, delta), rat(1));
        let v0 = model.pairing_vector(&dd, Some(&BigInt::zero()))?;
        let v1: Vec<BigRational> = model
            .pairing_vector(&dd, Some(&BigInt::one()))?
            .iter()
            .zip(&v0)
            .map(|(a, b)| a - b)
            .collect();
        let sigma_rhs = sigma_pairings(&model);
        let sols = solve_rational_many(&gram, &[v0.clone(), v1.clone(), sigma_rhs])?;
        let (x0, x1, xs) = (&sols[0], &sols[1], &sols[2]);

        let expected = model.fujiki_quadruple(delta, delta, delta, delta);
        let mut scan = Vec::new();
        let mut accepted = Vec::new();
        for d in -4i64..=4 {
            let dq = rat(d);
            let x: Vec<BigRational> = x0.iter().zip(x1).map(|(a, b)| a + &dq * b).collect();
            let v: Vec<BigRational> = v0.iter().zip(&v1).map(|(a, b)| a + &dq * b).collect();
            let self_pairing: BigRational = x.iter().zip(&v).map(|(a, b)| a * b).sum();
            let integral = x.iter().all(BigRational::is_integer);
            if integral && self_pairing == BigRational::from_integer(expected.clone()) {
                accepted.push((d, to_integers(&x).expect("integral")));
            }
            scan.push(DScanEntry {
                d,
                integral,
                self_pairing: self_pairing.to_string(),
            });
        }
        if accepted.len() != 1 {
            return Err(Error::Inconsistent(format!(
                "pt·δδ scan accepted {} values: {:?}",
                accepted.len(),
                scan
            )));
        }
        let (d, delta2) = accepted.pop().expect("one");

        let printed = printed_delta_squared(&model, &mu);
        let solved_q: Vec<BigRational> = delta2.iter().map(|x| BigRational::from_integer(x.clone())).collect();
        let resolution = DeltaSquaredResolution {
            d: BigInt::from(d),
            scan,
            expected_self_pairing: expected,
            printed_matches: printed == solved_q,
            printed_matches_negated: printed.iter().zip(&solved_q).all(|(p, s)| *p == -s),
            printed,
        };

        let sigma = to_integers(xs)
            .ok_or_else(|| Error::NonIntegral("Σ coordinates".into()))?;

        let iota_perm = model.induced_permutation(convention::swap);
        let mut seen = vec![false; basis.len()];
        let mut orbits = Vec::new();
        for i in 0..basis.len() {
            if seen[i] {
                continue;
            }
            let j = iota_perm[i];
            seen[i] = true;
            seen[j] = true;
            let members = if i == j { vec![i] } else { vec![i, j] };
            let kind = classify(basis.element(i), members.len());
            orbits.push(Orbit { members, kind });
        }
        orbits.sort_by_key(|o| (o.kind, o.members[0]));

        Ok(Hilb2H4 {
            model,
            mu,
            gram,
            gram_det: OnceLock::new(),
            delta2,
            resolution,
            sigma,
            iota_perm,
            orbits,
            invariant: OnceLock::new(),
            k_tilde: OnceLock::new(),
        })
    }

    pub fn model(&self) -> &H4Model {
        &self.model
    }

    pub fn mu(&self) -> &MuMatrix {
        &self.mu
    }

    pub fn gram(&self) -> &IntMatrix {
        &self.gram
    }

    pub fn gram_det(&self) -> &BigInt {
        self.gram_det
            .get_or_init(|| det_exact(&self.gram).expect("square"))
    }

    pub fn lattice(&self) -> Lattice {
        Lattice::new("H4", self.gram.clone()).expect("symmetric")
    }

    pub fn delta_squared(&self) -> &[BigInt] {
        &self.delta2
    }

    pub fn resolution(&self) -> &DeltaSquaredResolution {
        &self.resolution
    }

    pub fn sigma(&self) -> &[BigInt] {
        &self.sigma
    }

    pub fn iota_permutation(&self) -> &[usize] {
        &self.iota_perm
    }

    pub fn iota(&self) -> Result<Isometry> {
        Isometry::new(self.lattice(), permutation_matrix(&self.iota_perm))
    }

    pub fn apply_iota(&self, x: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); x.len()];
        for (src, &dst) in self.iota_perm.iter().enumerate() {
            out[dst] = x[src].clone();
        }
        out
    }

    pub fn pair(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        crate::linalg::bilinear_int(&self.gram, x, y)
    }

    pub fn orbits(&self) -> &[Orbit] {
        &self.orbits
    }

    pub fn census(&self) -> [usize; 6] {
        let mut c = [0usize; 6];
        for o in &self.orbits {
            c[o.kind as usize] += 1;
        }
        c
    }

    /// Orbit-sum basis of the invariant sublattice, certified against the saturated kernel.
    pub fn invariant(&self) -> &InvariantH4 {
        self.invariant.get_or_init(|| {
            let n = self.model.basis().len();
            let cols: Vec<Vec<BigInt>> = self
                .orbits
                .iter()
                .map(|o| {
                    let mut v = vec![BigInt::zero(); n];
                    for &i in &o.members {
                        v[i] = BigInt::one();
                    }
                    v
                })
                .collect();
            let basis = IntMatrix::from_columns(n, &cols).expect("orbit columns");
            let sub = Sublattice::new(self.lattice(), basis).expect("independent orbit sums");
            let kernel = kernel_basis(
                &permutation_matrix(&self.iota_perm)
                    .sub(&IntMatrix::identity(n))
                    .expect("square"),
            );
            let fixed = cols.iter().all(|c| self.apply_iota(c) == *c);
            let certified = fixed && kernel.cols() == cols.len() && is_primitive(&sub);
            let disc = det_exact(&sub.gram()).expect("square").abs();
            InvariantH4 {
                census: self.census(),
                sublattice: sub,
                disc,
                certified_against_kernel: certified,
            }
        })
    }

    /// Coordinates of an invariant class in the orbit basis.
    pub fn orbit_coordinates(&self, x: &[BigInt]) -> Result<Vec<BigInt>> {
        if self.apply_iota(x) != x {
            return Err(Error::Invalid("class is not invariant".into()));
        }
        Ok(self.orbits.iter().map(|o| x[o.members[0]].clone()).collect())
    }

    /// `K`: the invariant lattice with doubled form.
    pub fn k_lattice(&self) -> Lattice {
        let g = self.invariant().sublattice.gram().scale(&BigInt::from(2));
        Lattice::new("K", g).expect("symmetric")
    }

    /// `K̃`: `K` with the halves of all two-element orbit sums adjoined.
    pub fn k_tilde(&self) -> Result<&Overlattice> {
        self.k_tilde
            .get_or_init(|| self.build_k_tilde())
            .as_ref()
            .map_err(Clone::clone)
    }

    fn build_k_tilde(&self) -> Result<Overlattice> {
        let k = self.k_lattice();
        let r = k.rank();
        let glue: Vec<Vec<BigRational>> = self
            .orbits
            .iter()
            .enumerate()
            .filter(|(_, o)| o.members.len() == 2)
            .map(|(i, _)| {
                let mut v = vec![BigRational::zero(); r];
                v[i] = rat_frac(1, 2);
                v
            })
            .collect();
        let mut o = adjoin_glue_vectors(&k, &glue, false)?;
        o.lattice = o.lattice.with_label("K~");
        Ok(o)
    }

    /// Whether adjoining half of the given orbit generator to `K` is rejected.
    pub fn halving_rejected(&self, orbit: usize) -> bool {
        let k = self.k_lattice();
        let mut v = vec![BigRational::zero(); k.rank()];
        v[orbit] = rat_frac(1, 2);
        adjoin_glue_vectors(&k, &[v], false).is_err()
    }

    /// Even coordinates on every fixed (types a, d, f) orbit element.
    pub fn adf_parity(&self, x: &[BigInt]) -> Result<bool> {
        let c = self.orbit_coordinates(x)?;
        Ok(self
            .orbits
            .iter()
            .zip(&c)
            .filter(|(o, _)| o.kind.is_fixed())
            .all(|(_, v)| v.is_even()))
    }

    pub fn delta2_minus_sigma(&self) -> Vec<BigInt> {
        self.delta2.iter().zip(&self.sigma).map(|(a, b)| a - b).collect()
    }

    pub fn adf_parity_check(&self) -> Result<bool> {
        self.adf_parity(&self.delta2_minus_sigma())
    }

    /// Basis coordinates of a product of two degree-2 classes (δ = index 22).
    pub fn product(&self, a: &[BigInt], b: &[BigInt]) -> Result<Vec<BigInt>> {
        let mut combo = MonomialCombo::new();
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                if !ai.is_zero() && !bj.is_zero() {
                    combo.add(Monomial::prod(i, j), BigRational::from_integer(ai * bj));
                }
            }
        }
        let c = self.model.coords_of(&combo, Some(&self.delta2))?;
        to_integers(&c).ok_or_else(|| Error::NonIntegral("product coordinates".into()))
    }

    /// Selection bits, in order, over `u11, u12, u21, u22, u31, u32, δ`.
    pub fn half_vector_classes() -> [usize; 7] {
        [0, 1, 2, 3, 4, 5, convention::DELTA]
    }

    /// Whether the square of half the selected sum, pushed forward, lies in `K̃`.
    pub fn h2_half_vector_membership(&self, selection: u8) -> Result<bool> {
        let mut y = vec![BigInt::zero(); convention::HILB2_RANK];
        for (bit, &idx) in Self::half_vector_classes().iter().enumerate() {
            if selection >> bit & 1 == 1 {
                y[idx] = BigInt::one();
            }
        }
        let y2 = self.orbit_coordinates(&self.product(&y, &y)?)?;
        // (y/2)² pushes to π(y²)/2.
        let target: Vec<BigRational> = y2.iter().map(|c| rat_frac(c.clone(), 2)).collect();
        let kt = self.k_tilde()?;
        let coords = kt.coordinates_of(&target)?;
        Ok(coords.iter().all(BigRational::is_integer))
    }

    /// Indivisibility of a class: gcd of its coordinates is 1.
    pub fn is_indivisible(x: &[BigInt]) -> bool {
        content(x.iter().cloned()).is_one()
    }

    pub fn labelled(&self, x: &[BigInt]) -> Vec<(String, BigInt)> {
        let b = self.model.basis();
        x.iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (b.element(i).label(), v.clone()))
            .collect()
    }
}

/// Pairings of Σ with the basis: `1` on the point class, `0` on `q₂`,
/// `α_k·i*α_m` on `q₁q₁`, and `(α_k·i*α_k)/2` on `m₁,₁`.
pub fn sigma_pairings(model: &H4Model) -> Vec<BigRational> {
    let g = model.k3_gram();
    model
        .basis()
        .elements()
        .into_iter()
        .map(|q| match q {
            QwIndex::Point => rat(1),
            QwIndex::Q2(_) => rat(0),
            QwIndex::Q11(k, m) => BigRational::from_integer(g.get(k, convention::swap(m)).clone()),
            QwIndex::M11(k) => rat_frac(g.get(k, convention::swap(k)).clone(), 2),
        })
        .collect()
}

/// Coordinates of `Σ_{i<j} μ_ij q₁q₁ + ½ Σ_i μ_ii q₁(α_i)² + pt`.
pub fn printed_delta_squared(model: &H4Model, mu: &MuMatrix) -> Vec<BigRational> {
    let b = model.basis();
    let mut out = vec![BigRational::zero(); b.len()];
    out[0] = rat(1);
    let n = b.classes();
    for i in 0..n {
        for j in i + 1..n {
            out[b.index(QwIndex::Q11(i, j))] = BigRational::from_integer(mu.mu.get(i, j).clone());
        }
        // q₁(α)² = 2 m₁,₁(α) + q₂(α)
        let half = rat_frac(mu.mu.get(i, i).clone(), 2);
        out[b.index(QwIndex::M11(i))] = &half * rat(2);
        out[b.index(QwIndex::Q2(i))] = half;
    }
    out
}

/// Serializable coordinate vector in the Qin–Wang basis.
#[derive(Clone, Debug, Serialize)]
pub struct H4ClassJson {
    pub class: String,
    #[serde(serialize_with = "crate::json::ser")]
    pub coords: Vec<BigInt>,
    #[serde(serialize_with = "crate::json::ser")]
    pub nonzero: BTreeMap<String, BigInt>,
}

impl H4ClassJson {
    pub fn new(name: &str, h: &Hilb2H4, x: &[BigInt]) -> Self {
        H4ClassJson {
            class: name.to_string(),
            coords: x.to_vec(),
            nonzero: h.labelled(x).into_iter().collect(),
        }
    }
}

/// Pairing of two rational H⁴ coordinate vectors.
pub fn pair_rational(h: &Hilb2H4, x: &[BigRational], y: &[BigRational]) -> BigRational {
    bilinear(&h.gram, x, y)
}
