//! Smith normal form over exact integers, dense and sparse.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::IntRing;

/// `U · A · V = D` with `U`, `V` unimodular and `D` diagonal,
/// `d_1 | d_2 | ...`, all `d_i >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult<T> {
    pub u: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
}

impl<T: IntRing> SnfResult<T> {
    /// Diagonal entries `d_1, ..., d_min(m,n)`.
    pub fn diagonal(&self) -> Vec<T> {
        let k = self.d.rows().min(self.d.cols());
        (0..k).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<T> {
        self.diagonal()
            .into_iter()
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors().len()
    }

    /// Check every postcondition against the input matrix.
    pub fn verify(&self, a: &Matrix<T>) -> Result<()> {
        let fail = |m: &str| Err(Error::InvalidParameter(format!("SNF postcondition: {m}")));
        let uav = self.u.mul(a)?.mul(&self.v)?;
        if uav != self.d {
            return fail("U*A*V != D");
        }
        if !self.d.is_diagonal() {
            return fail("D not diagonal");
        }
        if !self.u.is_unimodular() || !self.v.is_unimodular() {
            return fail("transform not unimodular");
        }
        if !divisibility_chain(&self.diagonal()) {
            return fail("divisibility chain");
        }
        Ok(())
    }
}

/// `d_i >= 0` and `d_i | d_{i+1}` (zeros only at the tail).
pub fn divisibility_chain<T: IntRing>(diag: &[T]) -> bool {
    diag.iter().all(|d| !d.is_negative())
        && diag.windows(2).all(|w| {
            if w[0].is_zero() {
                w[1].is_zero()
            } else {
                (w[1].clone() % w[0].clone()).is_zero()
            }
        })
}

struct Diagonalizer<T> {
    d: Matrix<T>,
    u: Option<Matrix<T>>,
    v: Option<Matrix<T>>,
}

impl<T: IntRing> Diagonalizer<T> {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.d.swap_rows(a, b);
        if let Some(u) = &mut self.u {
            u.swap_rows(a, b);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        self.d.swap_cols(a, b);
        if let Some(v) = &mut self.v {
            v.swap_cols(a, b);
        }
    }

    fn add_row(&mut self, dst: usize, src: usize, m: &T) {
        self.d.add_row_multiple(dst, src, m);
        if let Some(u) = &mut self.u {
            u.add_row_multiple(dst, src, m);
        }
    }

    fn add_col(&mut self, dst: usize, src: usize, m: &T) {
        self.d.add_col_multiple(dst, src, m);
        if let Some(v) = &mut self.v {
            v.add_col_multiple(dst, src, m);
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        if let Some(u) = &mut self.u {
            u.negate_row(i);
        }
    }

    fn run(&mut self) {
        let (m, n) = self.d.shape();
        for t in 0..m.min(n) {
            loop {
                // smallest nonzero entry of the trailing block becomes the pivot
                let mut best: Option<(usize, usize)> = None;
                for i in t..m {
                    for j in t..n {
                        let x = &self.d[(i, j)];
                        if x.is_zero() {
                            continue;
                        }
                        if best.is_none_or(|(bi, bj)| x.abs() < self.d[(bi, bj)].abs()) {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = best else { return };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let p = self.d[(t, t)].clone();

                let mut clean = true;
                for i in t + 1..m {
                    if self.d[(i, t)].is_zero() {
                        continue;
                    }
                    let q = self.d[(i, t)].nearest_quotient(&p);
                    self.add_row(i, t, &-q);
                    clean &= self.d[(i, t)].is_zero();
                }
                for j in t + 1..n {
                    if self.d[(t, j)].is_zero() {
                        continue;
                    }
                    let q = self.d[(t, j)].nearest_quotient(&p);
                    self.add_col(j, t, &-q);
                    clean &= self.d[(t, j)].is_zero();
                }
                if !clean {
                    continue;
                }
                // enforce p | every entry of the trailing block
                let offender = (t + 1..m)
                    .find(|&i| (t + 1..n).any(|j| !(self.d[(i, j)].clone() % p.clone()).is_zero()));
                match offender {
                    Some(i) => self.add_row(t, i, &T::one()),
                    None => break,
                }
            }
            if self.d[(t, t)].is_negative() {
                self.negate_row(t);
            }
        }
    }
}

/// Smith normal form with both transforms.
///
/// In debug builds every result is checked against [`SnfResult::verify`].
pub fn smith_normal_form<T: IntRing>(a: &Matrix<T>) -> SnfResult<T> {
    let (m, n) = a.shape();
    let mut dz = Diagonalizer {
        d: a.clone(),
        u: Some(Matrix::identity(m)),
        v: Some(Matrix::identity(n)),
    };
    dz.run();
    let res = SnfResult {
        u: dz.u.unwrap(),
        d: dz.d,
        v: dz.v.unwrap(),
    };
    if cfg!(debug_assertions) {
        res.verify(a)
            .expect("Smith normal form postcondition violated");
    }
    res
}

/// Nonzero invariant factors of a dense matrix, ascending, without transforms.
pub fn invariant_factors<T: IntRing>(a: &Matrix<T>) -> Vec<T> {
    let mut dz = Diagonalizer {
        d: a.clone(),
        u: None,
        v: None,
    };
    dz.run();
    let k = a.rows().min(a.cols());
    let diag: Vec<T> = (0..k).map(|i| dz.d[(i, i)].clone()).collect();
    debug_assert!(divisibility_chain(&diag));
    diag.into_iter().filter(|x| !x.is_zero()).collect()
}

/// Sparse integer matrix stored by lines (rows); the caller picks the orientation.
#[derive(Clone, Debug)]
pub struct SparseMatrix<T> {
    width: usize,
    lines: Vec<BTreeMap<usize, T>>,
}

impl<T: IntRing> SparseMatrix<T> {
    pub fn new(width: usize) -> Self {
        SparseMatrix {
            width,
            lines: Vec::new(),
        }
    }

    pub fn push_line(&mut self, entries: impl IntoIterator<Item = (usize, T)>) {
        let mut line = BTreeMap::new();
        for (j, v) in entries {
            assert!(j < self.width, "column index out of range");
            let e = line.entry(j).or_insert_with(T::zero);
            *e = e.clone() + v;
            if e.is_zero() {
                line.remove(&j);
            }
        }
        self.lines.push(line);
    }

    pub fn height(&self) -> usize {
        self.lines.len()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn to_dense(&self) -> Matrix<T> {
        let mut m = Matrix::zeros(self.lines.len(), self.width);
        for (i, line) in self.lines.iter().enumerate() {
            for (j, v) in line {
                m[(i, *j)] = v.clone();
            }
        }
        m
    }

    /// Nonzero invariant factors, ascending.
    ///
    /// Eliminates on unit pivots first (each contributes a factor 1 and removes a
    /// line and a column), then hands the residue to the dense algorithm.
    pub fn invariant_factors(&self) -> Vec<T> {
        let mut lines: Vec<Option<BTreeMap<usize, T>>> = self
            .lines
            .iter()
            .map(|l| (!l.is_empty()).then(|| l.clone()))
            .collect();
        let mut col_lines: Vec<Vec<usize>> = vec![Vec::new(); self.width];
        for (i, l) in lines.iter().enumerate() {
            if let Some(l) = l {
                for &j in l.keys() {
                    col_lines[j].push(i);
                }
            }
        }
        let mut units = 0usize;
        loop {
            let mut order: Vec<usize> = (0..lines.len()).filter(|&i| lines[i].is_some()).collect();
            order.sort_by_key(|&i| lines[i].as_ref().map_or(0, |l| l.len()));
            let mut progressed = false;
            for r in order {
                let Some(line) = lines[r].as_ref() else {
                    continue;
                };
                // unit entry whose column is shortest
                let pick = line
                    .iter()
                    .filter(|(_, v)| v.is_unit())
                    .min_by_key(|(j, _)| col_lines[**j].len())
                    .map(|(j, v)| (*j, v.clone()));
                let Some((c, p)) = pick else { continue };
                let pivot = lines[r].take().unwrap();
                for &j in pivot.keys() {
                    col_lines[j].retain(|&i| i != r);
                }
                let others = std::mem::take(&mut col_lines[c]);
                for r2 in others {
                    let target = lines[r2].as_mut().expect("stale column index");
                    let f = target[&c].clone() * p.clone();
                    for (j, v) in &pivot {
                        let e = target.entry(*j).or_insert_with(T::zero);
                        let was_zero = e.is_zero();
                        *e = e.clone() - f.clone() * v.clone();
                        if e.is_zero() {
                            target.remove(j);
                            if !was_zero && *j != c {
                                col_lines[*j].retain(|&i| i != r2);
                            }
                        } else if was_zero {
                            col_lines[*j].push(r2);
                        }
                    }
                    debug_assert!(!target.contains_key(&c));
                    if target.is_empty() {
                        lines[r2] = None;
                    }
                }
                units += 1;
                progressed = true;
            }
            if !progressed {
                break;
            }
        }
        let rest: Vec<&BTreeMap<usize, T>> = lines.iter().flatten().collect();
        let mut out = vec![T::one(); units];
        if !rest.is_empty() {
            let mut cols: Vec<usize> = rest.iter().flat_map(|l| l.keys().copied()).collect();
            cols.sort_unstable();
            cols.dedup();
            let pos: BTreeMap<usize, usize> =
                cols.iter().enumerate().map(|(k, &j)| (j, k)).collect();
            let mut dense = Matrix::zeros(rest.len(), cols.len());
            for (i, l) in rest.iter().enumerate() {
                for (j, v) in l.iter() {
                    dense[(i, pos[j])] = v.clone();
                }
            }
            out.extend(invariant_factors(&dense));
        }
        out
    }
}
