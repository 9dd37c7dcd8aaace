//! Cohomology of Z/2 with coefficients in a free module with involution.
//!
//! Uses the periodic free resolution: in positive degrees the groups are
//! `ker(1+g)/im(g−1)` (odd) and `ker(g−1)/im(g+1)` (even).

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::coordinates_in;
use crate::linalg::{
    inverse_unimodular, kernel_basis, smith_normal_form, to_integers, to_rationals, IntMatrix,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutionModule {
    action: IntMatrix,
}

impl InvolutionModule {
    pub fn new(action: IntMatrix) -> Result<Self> {
        if !action.is_square() {
            return Err(Error::Shape("action must be square".into()));
        }
        let n = action.rows();
        if action.mul(&action)? != IntMatrix::identity(n) {
            return Err(Error::NotInvolution);
        }
        Ok(InvolutionModule { action })
    }

    pub fn rank(&self) -> usize {
        self.action.rows()
    }

    pub fn action(&self) -> &IntMatrix {
        &self.action
    }

    fn shifted(&self, s: i64) -> IntMatrix {
        self.action
            .add(&IntMatrix::identity(self.rank()).scale(&BigInt::from(s)))
            .expect("square")
    }
}

/// A finitely generated abelian group `Z^r ⊕ ⊕ Z/dᵢ` with generators in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupDescription {
    pub free_rank: usize,
    #[serde(serialize_with = "crate::json::ser")]
    pub torsion: Vec<BigInt>,
    /// Torsion generators first (matching `torsion`), then free generators.
    #[serde(serialize_with = "crate::json::ser")]
    pub generators: Vec<Vec<BigInt>>,
}

impl GroupDescription {
    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// `Some(k)` when the group is `(Z/2)^k`.
    pub fn two_elementary_rank(&self) -> Option<usize> {
        (self.free_rank == 0 && self.torsion.iter().all(|d| *d == BigInt::from(2)))
            .then_some(self.torsion.len())
    }

    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }
}

/// `ker(a) / im(b)` for integer matrices with `a·b = 0`.
fn subquotient(a: &IntMatrix, b: &IntMatrix) -> Result<GroupDescription> {
    let k = kernel_basis(a);
    let kcols: Vec<_> = k.columns().iter().map(|c| to_rationals(c)).collect();
    let kdim = k.cols();
    let mut coord_cols = Vec::with_capacity(b.cols());
    for col in b.columns() {
        let c = coordinates_in(&kcols, &to_rationals(&col))?;
        coord_cols.push(
            to_integers(&c).ok_or_else(|| Error::Invalid("image not inside the kernel lattice".into()))?,
        );
    }
    let coords = IntMatrix::from_columns(kdim, &coord_cols)?;
    let snf = smith_normal_form(&coords);
    let basis = k.mul(&inverse_unimodular(&snf.u)?)?;
    let mut torsion = Vec::new();
    let mut generators = Vec::new();
    let mut free = Vec::new();
    for i in 0..kdim {
        let d = snf.d.get(i).cloned().unwrap_or_else(BigInt::zero);
        if d.is_zero() {
            free.push(basis.column(i));
        } else if !d.is_one() {
            torsion.push(d);
            generators.push(basis.column(i));
        }
    }
    let free_rank = free.len();
    generators.extend(free);
    Ok(GroupDescription {
        free_rank,
        torsion,
        generators,
    })
}

/// `Hᵖ(Z/2; M)`.
pub fn cohomology_z2(m: &InvolutionModule, p: usize) -> Result<GroupDescription> {
    let minus = m.shifted(-1);
    let plus = m.shifted(1);
    match p {
        0 => subquotient(&minus, &IntMatrix::zeros(m.rank(), 0)),
        p if p % 2 == 1 => subquotient(&plus, &minus),
        _ => subquotient(&minus, &plus),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_action_on_z() {
        let m = InvolutionModule::new(IntMatrix::identity(1)).unwrap();
        assert_eq!(cohomology_z2(&m, 0).unwrap().free_rank, 1);
        assert!(cohomology_z2(&m, 1).unwrap().is_trivial());
        assert_eq!(cohomology_z2(&m, 2).unwrap().two_elementary_rank(), Some(1));
    }

    #[test]
    fn sign_action_on_z() {
        let m = InvolutionModule::new(IntMatrix::from_i64(&[&[-1]])).unwrap();
        assert_eq!(cohomology_z2(&m, 1).unwrap().two_elementary_rank(), Some(1));
        assert!(cohomology_z2(&m, 2).unwrap().is_trivial());
    }

    #[test]
    fn regular_representation_is_acyclic() {
        let m = InvolutionModule::new(IntMatrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap();
        for p in 1..5 {
            assert!(cohomology_z2(&m, p).unwrap().is_trivial(), "degree {p}");
        }
    }

    #[test]
    fn rejects_non_involution() {
        assert!(InvolutionModule::new(IntMatrix::from_i64(&[&[1, 1], &[0, 1]])).is_err());
    }
}
