//! Independent routes shared by the integration tests.
#![allow(dead_code)]

use bblab_core::linalg::IntMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

pub const PRIMES: [u64; 4] = [1_000_000_007, 998_244_353, 2_147_483_647, 4_294_967_291];

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u128;
    let mut b128 = (b % p) as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b128 % p as u128;
        }
        b128 = b128 * b128 % p as u128;
        e >>= 1;
    }
    b = r as u64;
    b
}

fn residue(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("reduced")
}

/// Determinant modulo a prime by plain Gaussian elimination.
pub fn det_mod(a: &IntMatrix, p: u64) -> u64 {
    let n = a.rows();
    let mut m: Vec<Vec<u64>> = (0..n).map(|i| a.row(i).iter().map(|x| residue(x, p)).collect()).collect();
    let mut det = 1u128;
    for c in 0..n {
        let Some(piv) = (c..n).find(|&i| m[i][c] != 0) else {
            return 0;
        };
        if piv != c {
            m.swap(piv, c);
            det = (p as u128 - det) % p as u128;
        }
        det = det * m[c][c] as u128 % p as u128;
        let inv = pow_mod(m[c][c], p - 2, p) as u128;
        for i in c + 1..n {
            if m[i][c] == 0 {
                continue;
            }
            let f = m[i][c] as u128 * inv % p as u128;
            for j in c..n {
                let sub = f * m[c][j] as u128 % p as u128;
                m[i][j] = ((m[i][j] as u128 + p as u128 - sub) % p as u128) as u64;
            }
        }
    }
    det as u64
}

/// `Some(±v)` when the determinant agrees with `±v` modulo every test prime.
pub fn det_sign_mod_primes(a: &IntMatrix, v: &BigInt) -> Option<i8> {
    let mut sign = None;
    for &p in &PRIMES {
        let d = det_mod(a, p);
        let plus = residue(v, p);
        let minus = residue(&-v, p);
        let s = if d == plus {
            1
        } else if d == minus {
            -1
        } else {
            return None;
        };
        match sign {
            None => sign = Some(s),
            Some(t) if t != s => return None,
            _ => {}
        }
    }
    sign
}

/// `xᵀ G y` by direct summation.
pub fn form(g: &IntMatrix, x: &[BigInt], y: &[BigInt]) -> BigInt {
    let mut acc = BigInt::zero();
    for i in 0..x.len() {
        for j in 0..y.len() {
            acc += &x[i] * g.get(i, j) * &y[j];
        }
    }
    acc
}

/// E8(−1) Gram written out from the column matrix by hand.
pub fn e8_minus_by_hand() -> IntMatrix {
    // c1 = 2e1, c_j = e_j − e_{j−1}, c8 = (1/2,…,1/2); Gram = −CᵀC.
    let mut g = vec![vec![0i64; 8]; 8];
    g[0][0] = 4;
    g[0][1] = -2;
    g[0][7] = 1;
    for j in 1..7 {
        g[j][j] = 2;
        if j + 1 < 7 {
            g[j][j + 1] = -1;
        }
    }
    g[7][7] = 2;
    for i in 0..8 {
        for j in 0..i {
            g[i][j] = g[j][i];
        }
    }
    let rows: Vec<Vec<i64>> = g.iter().map(|r| r.iter().map(|x| -x).collect()).collect();
    IntMatrix::from_rows(&rows).unwrap()
}

pub fn block_diag(parts: &[IntMatrix]) -> IntMatrix {
    let mut acc = parts[0].clone();
    for p in &parts[1..] {
        acc = acc.block_diag(p);
    }
    acc
}

pub fn u(scale: i64) -> IntMatrix {
    IntMatrix::from_i64(&[&[0, scale], &[scale, 0]])
}
