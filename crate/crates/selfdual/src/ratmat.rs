//! Exact linear algebra over the rationals.
//!
//! All spectral claims reduce to ranks and kernels of small dense matrices;
//! everything here is arbitrary-precision rational elimination, no floating
//! point anywhere.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat_int(v: i64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn rat_u64(v: u64) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

pub fn rat_u128(v: u128) -> Rat {
    Rat::from_integer(BigInt::from(v))
}

/// In-place reduced row echelon form; returns the pivot columns.
pub fn rref(mat: &mut Vec<Vec<Rat>>) -> Vec<usize> {
    let rows = mat.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = mat[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        // pick the largest entry for mild coefficient control
        let Some(src) = (r..rows)
            .filter(|&i| !mat[i][c].is_zero())
            .max_by(|&a, &b| mat[a][c].abs().cmp(&mat[b][c].abs()))
        else {
            continue;
        };
        mat.swap(r, src);
        let inv = mat[r][c].clone();
        for e in mat[r][c..].iter_mut() {
            *e /= inv.clone();
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                for j in c..cols {
                    let sub = &f * &mat[r][j];
                    mat[i][j] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank(mut mat: Vec<Vec<Rat>>) -> usize {
    rref(&mut mat).len()
}

/// Basis of the right kernel {v : M v = 0}.
pub fn kernel_basis(mat: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    if mat.is_empty() {
        return Vec::new();
    }
    let cols = mat[0].len();
    let mut work = mat.to_vec();
    let pivots = rref(&mut work);
    let pivot_of_col: Vec<Option<usize>> = {
        let mut v = vec![None; cols];
        for (i, &p) in pivots.iter().enumerate() {
            v[p] = Some(i);
        }
        v
    };
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_of_col[free].is_some() {
            continue;
        }
        let mut v = vec![Rat::zero(); cols];
        v[free] = Rat::one();
        for (row, &p) in pivots.iter().enumerate() {
            v[p] = -work[row][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Solve A x = b exactly; `None` when inconsistent. Free variables are set
/// to zero, so the answer is deterministic.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.len();
    assert_eq!(rows, b.len());
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    // inconsistent iff a pivot lands in the augmented column
    if pivots.contains(&cols) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = aug[row][cols].clone();
    }
    Some(x)
}

pub fn mat_vec(a: &[Vec<Rat>], v: &[Rat]) -> Vec<Rat> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).fold(Rat::zero(), |acc, t| acc + t))
        .collect()
}

pub fn mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = a.len();
    let inner = b.len();
    let m = if inner == 0 { 0 } else { b[0].len() };
    let mut out = vec![vec![Rat::zero(); m]; n];
    for i in 0..n {
        for (k, brow) in b.iter().enumerate() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                let add = &a[i][k] * &brow[j];
                out[i][j] += add;
            }
        }
    }
    out
}

pub fn identity(n: usize) -> Vec<Vec<Rat>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect()
}
