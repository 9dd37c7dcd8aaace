//! Named lattices and involutions with fixed basis conventions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::{adjoin_glue_vectors, direct_sum_all, Isometry, Lattice, Overlattice};
use crate::linalg::{rat_frac, IntMatrix};

/// Index layout of the K3 lattice and the Hilbert-square lattice (0-based).
///
/// `0..6` hyperbolic planes `(u_{k,1}, u_{k,2})`, `6..14` first E8(-1),
/// `14..22` second E8(-1), `22` the class δ (Hilbert-square lattice only).
pub mod convention {
    use std::ops::Range;

    pub const U_BLOCK: Range<usize> = 0..6;
    pub const E8_FIRST: Range<usize> = 6..14;
    pub const E8_SECOND: Range<usize> = 14..22;
    pub const K3_RANK: usize = 22;
    pub const DELTA: usize = 22;
    pub const HILB2_RANK: usize = 23;

    /// Image of an index under the swap of the two E8 blocks.
    pub fn swap(k: usize) -> usize {
        if E8_FIRST.contains(&k) {
            k + 8
        } else if E8_SECOND.contains(&k) {
            k - 8
        } else {
            k
        }
    }

    /// Human-readable name of a K3 or Hilbert-square basis index.
    pub fn name(k: usize) -> String {
        if U_BLOCK.contains(&k) {
            format!("u{}{}", k / 2 + 1, k % 2 + 1)
        } else if E8_FIRST.contains(&k) {
            format!("e{}_1", k - 5)
        } else if E8_SECOND.contains(&k) {
            format!("e{}_2", k - 13)
        } else if k == DELTA {
            "delta".into()
        } else {
            format!("#{k}")
        }
    }
}

pub fn hyperbolic_plane() -> Lattice {
    Lattice::from_i64("U", &[&[0, 1], &[1, 0]]).expect("symmetric")
}

pub fn rank_one(n: i64) -> Lattice {
    Lattice::from_i64(format!("<{n}>"), &[&[n]]).expect("symmetric")
}

/// The 8×8 half-integral column matrix realizing E8 in Euclidean R⁸.
///
/// Column 1 is `2e₁`, columns 2..7 are `e_j − e_{j−1}`, column 8 is `½(1,…,1)`.
pub fn e8_columns() -> Vec<Vec<BigRational>> {
    let mut cols = Vec::with_capacity(8);
    let z = || BigRational::zero();
    let mut c1 = vec![z(); 8];
    c1[0] = BigRational::from_integer(BigInt::from(2));
    cols.push(c1);
    for j in 1..7 {
        let mut c = vec![z(); 8];
        c[j - 1] = BigRational::from_integer(BigInt::from(-1));
        c[j] = BigRational::one();
        cols.push(c);
    }
    cols.push(vec![rat_frac(1, 2); 8]);
    cols
}

/// E8 with Gram `sign · CᵀC` for the column matrix of [`e8_columns`].
pub fn e8(sign: i64) -> Lattice {
    assert!(sign == 1 || sign == -1, "sign must be ±1");
    let cols = e8_columns();
    let s = BigRational::from_integer(BigInt::from(sign));
    let rows: Vec<Vec<BigInt>> = cols
        .iter()
        .map(|a| {
            cols.iter()
                .map(|b| {
                    let dot: BigRational = a.iter().zip(b).map(|(x, y)| x * y).sum();
                    (dot * &s).to_integer()
                })
                .collect()
        })
        .collect();
    let label = if sign == 1 { "E8" } else { "E8(-1)" };
    Lattice::new(label, IntMatrix::from_rows(&rows).expect("8x8")).expect("symmetric")
}

/// Nikulin lattice as `⟨−2⟩⁸` glued by the half-sum, with its presentation.
pub fn nikulin_overlattice() -> Overlattice {
    let base = nikulin_base();
    let glue = vec![vec![rat_frac(1, 2); 8]];
    let mut o = adjoin_glue_vectors(&base, &glue, true).expect("half-sum is valid glue");
    o.lattice = o.lattice.with_label("Nikulin");
    o
}

/// `⟨−2⟩⁸`, spanned by the eight classes `N₁…N₈`.
pub fn nikulin_base() -> Lattice {
    Lattice::new("<-2>^8", IntMatrix::diagonal(&[-2i64; 8])).expect("symmetric")
}

pub fn nikulin() -> Lattice {
    nikulin_overlattice().lattice
}

/// Nine generators `N₁…N₈, N̂` in coordinates of `⟨−2⟩⁸`.
pub fn nikulin_generators() -> Vec<Vec<BigRational>> {
    let mut gens: Vec<Vec<BigRational>> = (0..8).map(|j| crate::lattice::unit(8, j)).collect();
    gens.push(vec![rat_frac(1, 2); 8]);
    gens
}

fn swap_matrix(n: usize) -> IntMatrix {
    let mut m = IntMatrix::zeros(n, n);
    for k in 0..n {
        m.set(convention::swap(k), k, BigInt::one());
    }
    m
}

/// `U³ ⊕ E8(−1)²` with the involution exchanging the E8 blocks.
pub fn k3_with_swap() -> (Lattice, Isometry) {
    let u = hyperbolic_plane();
    let e = e8(-1);
    let l = direct_sum_all(&[u.clone(), u.clone(), u, e.clone(), e]).with_label("K3");
    let g = Isometry::new(l.clone(), swap_matrix(convention::K3_RANK)).expect("swap is an isometry");
    (l, g)
}

/// `U³ ⊕ E8(−1)² ⊕ ⟨−2⟩` (δ last) with the E8 swap fixing δ.
pub fn hilb2_with_swap() -> (Lattice, Isometry) {
    let (k3, _) = k3_with_swap();
    let l = direct_sum_all(&[k3, rank_one(-2)]).with_label("K3Hilb2");
    let g = Isometry::new(l.clone(), swap_matrix(convention::HILB2_RANK))
        .expect("swap is an isometry");
    (l, g)
}

/// The torus lattice `U³` with the identity involution.
pub fn torus_with_identity() -> (Lattice, Isometry) {
    let u = hyperbolic_plane();
    let l = direct_sum_all(&[u.clone(), u.clone(), u]).with_label("U3");
    let g = Isometry::identity(l.clone());
    (l, g)
}

/// Names accepted by [`by_name`].
pub const NAMES: [&str; 6] = ["U", "E8", "E8(-1)", "Nikulin", "K3", "K3Hilb2"];

pub fn by_name(name: &str) -> Result<Lattice> {
    match name {
        "U" => Ok(hyperbolic_plane()),
        "E8" => Ok(e8(1)),
        "E8(-1)" => Ok(e8(-1)),
        "Nikulin" => Ok(nikulin()),
        "K3" => Ok(k3_with_swap().0),
        "K3Hilb2" => Ok(hilb2_with_swap().0),
        other => Err(Error::UnknownName(other.to_string())),
    }
}
