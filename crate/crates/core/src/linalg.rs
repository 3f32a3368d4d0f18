//! Exact elimination over the rationals.
//!
//! Rows are cleared to integers and reduced fraction-free: each update is
//! `row = p·row - a·pivot_row`, followed by division by the row content, so
//! entries stay small and no rational arithmetic happens inside the loop.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Reduced row echelon form with pivot columns. Each returned row has
/// pivot entry 1.
pub fn rref(rows: &[Vec<BigRational>], ncols: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| clear_denominators(r, ncols))
        .filter(|r| r.iter().any(|v| !v.is_zero()))
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot_row = m[rank].clone();
        let pv = pivot_row[col].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == rank || row[col].is_zero() {
                continue;
            }
            let a = row[col].clone();
            let g = pv.gcd(&a);
            let (sp, sa) = (&pv / &g, &a / &g);
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = &*x * &sp - &sa * y;
            }
            remove_content(row);
        }
        pivots.push(col);
        rank += 1;
    }
    m.truncate(rank);
    let out = m
        .into_iter()
        .zip(&pivots)
        .map(|(row, &pc)| {
            let p = row[pc].clone();
            row.into_iter()
                .map(|v| BigRational::new(v, p.clone()))
                .collect()
        })
        .collect();
    (out, pivots)
}

/// Basis of `{c : rows · c = 0}`, one vector per free column, with a 1 in
/// that column.
pub fn nullspace(rows: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    let (r, pivots) = rref(rows, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::one();
        for (row, &pc) in r.iter().zip(&pivots) {
            v[pc] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

pub fn rank(rows: &[Vec<BigRational>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

fn clear_denominators(r: &[BigRational], ncols: usize) -> Vec<BigInt> {
    let l = r.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let mut row: Vec<BigInt> = r.iter().map(|q| q.numer() * (&l / q.denom())).collect();
    row.resize(ncols, BigInt::zero());
    remove_content(&mut row);
    row
}

fn remove_content(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
    if g.is_zero() || g.is_one() {
        return;
    }
    for v in row.iter_mut() {
        *v = &*v / &g;
    }
    if let Some(first) = row.iter().find(|v| !v.is_zero()) {
        if first.is_negative() {
            for v in row.iter_mut() {
                *v = -&*v;
            }
        }
    }
}
