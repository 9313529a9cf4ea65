//! Direct summands of `Z^n` and related lattice operations.

use crate::automorphism::abelianize_word;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::IntRing;
use crate::snf::invariant_factors;
use crate::word::Word;
use crate::Int;

fn check_vectors<T: IntRing>(vectors: &[Vec<T>], n: usize) -> Result<()> {
    if vectors.len() > n {
        return Err(Error::Dimension(format!(
            "{} vectors cannot span a summand of rank {} in Z^{}",
            vectors.len(),
            vectors.len(),
            n
        )));
    }
    if let Some(v) = vectors.iter().find(|v| v.len() != n) {
        return Err(Error::Dimension(format!(
            "vector of length {} in Z^{}",
            v.len(),
            n
        )));
    }
    Ok(())
}

/// Whether the `k` vectors span a `k`-dimensional direct summand of `Z^n`,
/// i.e. the Smith form of the `k x n` matrix is `k` ones.
pub fn spans_direct_summand<T: IntRing>(vectors: &[Vec<T>], n: usize) -> Result<bool> {
    check_vectors(vectors, n)?;
    if vectors.is_empty() {
        return Ok(true);
    }
    let m = Matrix::from_rows(vectors.to_vec())?;
    let d = invariant_factors(&m);
    Ok(d.len() == vectors.len() && d.iter().all(|x| x.is_one()))
}

/// Whether a vector is primitive (its entries have gcd 1).
pub fn is_primitive<T: IntRing>(v: &[T]) -> bool {
    let g = v.iter().fold(T::zero(), |g, x| g.gcd(x));
    g.is_one()
}

/// Extend `vectors` (spanning a summand) to a basis of `Z^n`; the result
/// starts with the input unchanged and has determinant `±1`.
///
/// Column operations reduce the input to `[L 0]` with `L` unit lower
/// triangular while the inverse operations are accumulated as row operations
/// on `W`; the trailing rows of `W` complete the basis.
pub fn unimodular_complete<T: IntRing>(vectors: &[Vec<T>], n: usize) -> Result<Vec<Vec<T>>> {
    check_vectors(vectors, n)?;
    let k = vectors.len();
    let mut a = if k == 0 {
        Matrix::zeros(0, n)
    } else {
        Matrix::from_rows(vectors.to_vec())?
    };
    let mut w = Matrix::<T>::identity(n);
    // col_i += m col_j on a; the inverse acts as row_j -= m row_i on w.
    let add = |a: &mut Matrix<T>, w: &mut Matrix<T>, i: usize, j: usize, m: T| {
        a.add_col_multiple(i, j, &m);
        w.add_row_multiple(j, i, &-m);
    };
    for r in 0..k {
        loop {
            let nz: Vec<usize> = (r..n).filter(|&c| !a[(r, c)].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz
                .iter()
                .min_by(|&&x, &&y| a[(r, x)].abs().cmp(&a[(r, y)].abs()))
                .unwrap();
            for &c in &nz {
                if c != p {
                    let q = a[(r, c)].nearest_quotient(&a[(r, p)]);
                    add(&mut a, &mut w, c, p, -q);
                }
            }
        }
        let p = (r..n)
            .find(|&c| !a[(r, c)].is_zero())
            .ok_or(Error::NotSummand)?;
        if !a[(r, p)].is_unit() {
            return Err(Error::NotSummand);
        }
        if p != r {
            a.swap_cols(r, p);
            w.swap_rows(r, p);
        }
    }
    let mut out = vectors.to_vec();
    out.extend((k..n).map(|i| w.row(i).to_vec()));
    debug_assert!(Matrix::from_rows(out.clone()).is_ok_and(|m| m.is_unimodular()));
    Ok(out)
}

/// Replace `vx` by `vx + q v` with `|last coordinate|` minimal, preferring the
/// smaller `|q|` on ties. Returns `(q, vx + q v)`.
pub fn reduce_rank<T: IntRing>(vx: &[T], v: &[T]) -> Result<(T, Vec<T>)> {
    if vx.len() != v.len() || v.is_empty() {
        return Err(Error::Dimension("vectors of different lengths".into()));
    }
    let b = v.last().unwrap().clone();
    if b.is_zero() {
        return Err(Error::InvalidParameter(
            "pivot must have nonzero last coordinate".into(),
        ));
    }
    let a = vx.last().unwrap().clone();
    // a + q b is minimized near q = -a / b
    let q0 = (-a.clone()).div_floor(&b);
    let key = |q: &T| ((a.clone() + q.clone() * b.clone()).abs(), q.abs());
    let q = [q0.clone(), q0 + T::one()]
        .into_iter()
        .min_by(|x, y| key(x).cmp(&key(y)))
        .unwrap();
    let out = vx
        .iter()
        .zip(v)
        .map(|(x, y)| x.clone() + q.clone() * y.clone())
        .collect();
    Ok((q, out))
}

/// The abelianized tuple of a partial basis: its image vertex in `B_n(Z)`.
pub fn quotient_vertex_tuple(words: &[Word]) -> Vec<Vec<Int>> {
    words.iter().map(abelianize_word).collect()
}
