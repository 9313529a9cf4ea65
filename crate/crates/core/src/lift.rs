//! Lifting integer matrices back to automorphisms of `F_n`.
//!
//! The matrix is reduced to the identity by integer column operations. Adding
//! `m` times column `j` to column `i` is right multiplication by `I + m E_ji`,
//! whose inverse is the abelianization of `M(v_i, v_j^-m)`; negating a column
//! is undone by `I(v_i)`. Collecting the inverses in order gives a product of
//! generators abelianizing to the input.

use crate::automorphism::{FreeAutomorphism, GeneratorSpec};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::IntRing;
use crate::word::{Letter, Word};
use crate::IntMatrix;

/// An automorphism together with the generators it was built from.
#[derive(Clone, Debug)]
pub struct Lift {
    pub automorphism: FreeAutomorphism,
    /// Factors in product order: the automorphism is `factors[0] ∘ factors[1] ∘ ...`.
    pub factors: Vec<GeneratorSpec>,
}

impl Lift {
    /// The factors as a generator expression, `Id` when empty.
    pub fn expression(&self) -> String {
        if self.factors.is_empty() {
            return "Id".to_string();
        }
        let parts: Vec<String> = self.factors.iter().map(|g| g.to_string()).collect();
        parts.join(" ")
    }
}

struct ColumnReducer<T> {
    a: Matrix<T>,
    n: usize,
    /// Inverse generators in the order the column operations were applied.
    ops: Vec<GeneratorSpec>,
}

impl<T: IntRing> ColumnReducer<T> {
    /// `col_i += m col_j` (0-based).
    fn add(&mut self, i: usize, j: usize, m: &T) -> Result<()> {
        if m.is_zero() {
            return Ok(());
        }
        let e = m
            .to_i64()
            .ok_or_else(|| Error::InvalidParameter(format!("multiplier {m} too large")))?;
        self.a.add_col_multiple(i, j, m);
        self.ops.push(GeneratorSpec::MulLeft {
            target: Letter::pos(i + 1),
            word: Word::letter(self.n, Letter::pos(j + 1)).pow(-e),
        });
        Ok(())
    }

    fn negate(&mut self, i: usize) {
        self.a.negate_col(i);
        self.ops.push(GeneratorSpec::InvertLetter(i + 1));
    }

    /// Exchange columns `i` and `j` with three additions and a negation.
    fn swap(&mut self, i: usize, j: usize) -> Result<()> {
        let one = T::one();
        self.add(i, j, &one)?;
        self.add(j, i, &-one.clone())?;
        self.add(i, j, &one)?;
        self.negate(j);
        Ok(())
    }

    /// Reduce the trailing `n-k` columns to the identity, assuming the
    /// leading `k` columns are already `e_1..e_k`.
    fn reduce(&mut self, k: usize) -> Result<()> {
        let n = self.n;
        for r in k..n {
            // Euclid across row r in columns r..n until a single nonzero remains.
            loop {
                let nonzero: Vec<usize> = (r..n).filter(|&c| !self.a[(r, c)].is_zero()).collect();
                if nonzero.len() <= 1 {
                    break;
                }
                let p = *nonzero
                    .iter()
                    .min_by(|&&x, &&y| self.a[(r, x)].abs().cmp(&self.a[(r, y)].abs()))
                    .unwrap();
                for &c in &nonzero {
                    if c != p {
                        let q = self.a[(r, c)].nearest_quotient(&self.a[(r, p)]);
                        self.add(c, p, &-q)?;
                    }
                }
            }
            let p = (r..n)
                .find(|&c| !self.a[(r, c)].is_zero())
                .ok_or_else(|| Error::NotUnimodular("singular matrix".into()))?;
            if !self.a[(r, p)].is_unit() {
                return Err(Error::NotUnimodular(format!(
                    "pivot {} in row {}",
                    self.a[(r, p)],
                    r + 1
                )));
            }
            if p != r {
                self.swap(r, p)?;
            }
            if self.a[(r, r)].is_negative() {
                self.negate(r);
            }
        }
        // Unit lower triangular now; clear below the diagonal right to left.
        for c in (k..n).rev() {
            for r in c + 1..n {
                let m = self.a[(r, c)].clone();
                self.add(c, r, &-m)?;
            }
        }
        // Clear the block above, using the fixed columns e_1..e_k.
        for c in k..n {
            for r in 0..k {
                let m = self.a[(r, c)].clone();
                self.add(c, r, &-m)?;
            }
        }
        debug_assert!(self.a.is_identity());
        Ok(())
    }
}

fn check_prefix_shape<T: IntRing>(a: &Matrix<T>, k: usize) -> Result<()> {
    let n = a.rows();
    if k > n {
        return Err(Error::PrefixOutOfRange { k, rank: n });
    }
    for c in 0..k {
        for r in 0..n {
            let want = if r == c { T::one() } else { T::zero() };
            if a[(r, c)] != want {
                return Err(Error::BlockShape(format!(
                    "column {} must be e_{}; entry ({}, {}) is {}",
                    c + 1,
                    c + 1,
                    r + 1,
                    c + 1,
                    a[(r, c)]
                )));
            }
        }
    }
    Ok(())
}

/// A product of `MulLeft` and `InvertLetter` generators abelianizing to `a`.
///
/// With `k > 0` the first `k` columns of `a` must be `e_1..e_k`; then no
/// factor touches `v_1..v_k`, so the result fixes those letters exactly.
pub fn matrix_to_automorphism<T: IntRing>(a: &Matrix<T>, k: usize) -> Result<Lift> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::Dimension(format!(
            "expected a nonempty square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    check_prefix_shape(a, k)?;
    if !a.is_unimodular() {
        return Err(Error::NotUnimodular(format!(
            "determinant {}",
            a.determinant()?
        )));
    }
    let n = a.rows();
    let mut red = ColumnReducer {
        a: a.clone(),
        n,
        ops: Vec::new(),
    };
    red.reduce(k)?;
    // A E_1 ... E_m = I, so A = E_m^-1 ... E_1^-1 and ops[t] abelianizes to E_t^-1.
    let factors: Vec<GeneratorSpec> = red.ops.into_iter().rev().collect();
    let mut phi = FreeAutomorphism::identity(n);
    for g in factors.iter().rev() {
        phi = FreeAutomorphism::generator(g, n)?.compose(&phi)?;
    }
    Ok(Lift {
        automorphism: phi,
        factors,
    })
}

/// A basis of `F_n` extending a partial basis, with prescribed abelianization.
#[derive(Clone, Debug)]
pub struct BasisCompletion {
    pub basis: Vec<Word>,
    /// Sends `v_i` to `basis[i-1]`.
    pub certificate: FreeAutomorphism,
}

/// Extend `partial` (certified by `certificate`, which sends `v_i` to
/// `partial[i-1]`) to a basis whose remaining elements abelianize to the
/// columns of `targets`.
///
/// The certificate gives some completion; the constrained lift of
/// `abel(certificate)^-1 [partial | targets]` then corrects the new
/// elements without moving the first `k`.
pub fn complete_basis_lift(
    partial: &[Word],
    certificate: &FreeAutomorphism,
    targets: &IntMatrix,
) -> Result<BasisCompletion> {
    let n = certificate.rank();
    let k = partial.len();
    if k > n {
        return Err(Error::PrefixOutOfRange { k, rank: n });
    }
    if targets.rows() != n || targets.cols() != n - k {
        return Err(Error::Dimension(format!(
            "targets must be {}x{}, got {}x{}",
            n,
            n - k,
            targets.rows(),
            targets.cols()
        )));
    }
    for (i, w) in partial.iter().enumerate() {
        if w.rank() != n {
            return Err(Error::RankMismatch {
                left: n,
                right: w.rank(),
            });
        }
        if certificate.image(i + 1) != w {
            return Err(Error::InvalidParameter(format!(
                "certificate sends v{} to {}, not {}",
                i + 1,
                certificate.image(i + 1),
                w
            )));
        }
    }
    let mut columns: Vec<Vec<crate::Int>> = partial
        .iter()
        .map(crate::automorphism::abelianize_word)
        .collect();
    columns.extend((0..n - k).map(|c| targets.column(c)));
    let full = IntMatrix::from_columns(&columns)?;
    if !full.is_unimodular() {
        return Err(Error::NotUnimodular(
            "prescribed columns do not complete the partial basis".into(),
        ));
    }
    let m = certificate.inverse().abelianize().mul(&full)?;
    let chi = matrix_to_automorphism(&m, k)?;
    let phi = certificate.compose(&chi.automorphism)?;
    Ok(BasisCompletion {
        basis: phi.images().to_vec(),
        certificate: phi,
    })
}
