//! Automorphisms of `F_n` as basis-image maps.
//!
//! Automorphisms act on the left and compose right to left:
//! `compose(phi, psi)(w) = phi(psi(w))`. Every automorphism carries the images
//! of the basis under its inverse, so inversion and composition never search.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::word::{Letter, Word};
use crate::IntMatrix;

/// Parameters of one of the standard generators.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GeneratorSpec {
    /// `M_{a,w}`: `a -> w a` for the signed letter `a`, other basis letters fixed.
    MulLeft { target: Letter, word: Word },
    /// `M'_{a,w}`: `a -> a w`.
    MulRight { target: Letter, word: Word },
    /// `C_{v_i,w}`: `v_i -> w v_i w^-1`.
    Conj { target: usize, word: Word },
    /// `w_{a,b}`: `a -> b^-1`, `b -> a`.
    Swap { a: Letter, b: Letter },
    /// `v_i -> v_i^-1`.
    InvertLetter(usize),
    /// `v_i -> v_{perm[i-1]}`.
    Permute(Vec<usize>),
}

impl GeneratorSpec {
    /// `M_{a,b}` for single letters.
    pub fn mul(rank: usize, target: Letter, by: Letter) -> GeneratorSpec {
        GeneratorSpec::MulLeft {
            target,
            word: Word::letter(rank, by),
        }
    }

    /// `C_{v_i,b}` for a single letter.
    pub fn conj(rank: usize, target: usize, by: Letter) -> GeneratorSpec {
        GeneratorSpec::Conj {
            target,
            word: Word::letter(rank, by),
        }
    }
}

impl fmt::Display for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorSpec::MulLeft { target, word } => write!(f, "M({target}, {word})"),
            GeneratorSpec::MulRight { target, word } => write!(f, "Mr({target}, {word})"),
            GeneratorSpec::Conj { target, word } => write!(f, "C(v{target}, {word})"),
            GeneratorSpec::Swap { a, b } => write!(f, "W({a}, {b})"),
            GeneratorSpec::InvertLetter(i) => write!(f, "I(v{i})"),
            GeneratorSpec::Permute(p) => {
                let s: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                write!(f, "P({})", s.join(","))
            }
        }
    }
}

/// Image of `Aut(F_n) -> GL_n(Z)` relative to `IA_n` and `SAut(F_n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Classification {
    /// Abelianizes to the identity matrix.
    IA,
    /// Determinant 1 but not IA.
    SAutNotIA,
    /// Determinant -1.
    DetMinusOne,
}

#[derive(Clone)]
pub struct FreeAutomorphism {
    rank: usize,
    images: Vec<Word>,
    inverse_images: Vec<Word>,
}

fn substitute(images: &[Word], w: &Word) -> Word {
    let rank = w.rank();
    let mut out: Vec<Letter> = Vec::new();
    for &l in w.letters() {
        let img = &images[l.index() - 1];
        if l.is_inverse() {
            out.extend(img.letters().iter().rev().map(|x| x.inv()));
        } else {
            out.extend_from_slice(img.letters());
        }
    }
    Word::normalize(out, rank).expect("images share the rank of the word")
}

impl FreeAutomorphism {
    pub fn identity(rank: usize) -> FreeAutomorphism {
        let basis: Vec<Word> = (1..=rank).map(|i| Word::generator(rank, i)).collect();
        FreeAutomorphism {
            rank,
            images: basis.clone(),
            inverse_images: basis,
        }
    }

    /// Build from images and inverse images, checking the mutual-inverse certificate.
    pub fn from_images(images: Vec<Word>, inverse_images: Vec<Word>) -> Result<FreeAutomorphism> {
        let rank = images.len();
        if inverse_images.len() != rank {
            return Err(Error::NotAutomorphism(format!(
                "{} images but {} inverse images",
                rank,
                inverse_images.len()
            )));
        }
        for w in images.iter().chain(&inverse_images) {
            if w.rank() != rank {
                return Err(Error::RankMismatch {
                    left: rank,
                    right: w.rank(),
                });
            }
        }
        let phi = FreeAutomorphism {
            rank,
            images,
            inverse_images,
        };
        for i in 1..=rank {
            let v = Word::generator(rank, i);
            if substitute(&phi.images, &phi.inverse_images[i - 1]) != v {
                return Err(Error::NotAutomorphism(format!("phi(phi^-1(v{i})) != v{i}")));
            }
            if substitute(&phi.inverse_images, &phi.images[i - 1]) != v {
                return Err(Error::NotAutomorphism(format!("phi^-1(phi(v{i})) != v{i}")));
            }
        }
        Ok(phi)
    }

    /// Construct one of the standard generators with its closed-form inverse.
    pub fn generator(spec: &GeneratorSpec, rank: usize) -> Result<FreeAutomorphism> {
        let check_letter = |l: &Letter| {
            if l.index() > rank {
                Err(Error::LetterOutOfRange {
                    index: l.index(),
                    rank,
                })
            } else {
                Ok(())
            }
        };
        let check_index = |i: usize| {
            if i == 0 || i > rank {
                Err(Error::LetterOutOfRange { index: i, rank })
            } else {
                Ok(())
            }
        };
        let mut phi = FreeAutomorphism::identity(rank);
        match spec {
            GeneratorSpec::MulLeft { target, word } | GeneratorSpec::MulRight { target, word } => {
                check_letter(target)?;
                let w = word.with_rank(rank)?;
                let i = target.index();
                if w.contains_index(i) {
                    return Err(Error::InvalidGenerator(format!(
                        "{spec}: multiplier involves the target letter"
                    )));
                }
                let v = Word::generator(rank, i);
                let left = matches!(spec, GeneratorSpec::MulLeft { .. });
                // a -> w a (left) or a -> a w (right), a = v_i^e; solve for v_i
                let img = |w: &Word| match (left, target.is_inverse()) {
                    (true, false) => w.mul_unchecked(&v),
                    (true, true) => v.mul_unchecked(&w.invert()),
                    (false, false) => v.mul_unchecked(w),
                    (false, true) => w.invert().mul_unchecked(&v),
                };
                phi.images[i - 1] = img(&w);
                phi.inverse_images[i - 1] = img(&w.invert());
            }
            GeneratorSpec::Conj { target, word } => {
                check_index(*target)?;
                let w = word.with_rank(rank)?;
                if w.contains_index(*target) {
                    return Err(Error::InvalidGenerator(format!(
                        "{spec}: conjugating word involves the target letter"
                    )));
                }
                let v = Word::generator(rank, *target);
                let wi = w.invert();
                phi.images[target - 1] = w.mul_unchecked(&v).mul_unchecked(&wi);
                phi.inverse_images[target - 1] = wi.mul_unchecked(&v).mul_unchecked(&w);
            }
            GeneratorSpec::Swap { a, b } => {
                check_letter(a)?;
                check_letter(b)?;
                if a.index() == b.index() {
                    return Err(Error::InvalidGenerator(format!("{spec}: a = b^(+-1)")));
                }
                // a -> b^-1 and b -> a; inverse b -> a^-1 and a -> b
                let (i, j) = (a.index(), b.index());
                let (e, f) = (a.sign(), b.sign());
                let lw = |l: Letter| Word::letter(rank, l);
                phi.images[i - 1] = lw(Letter::new(j, -e * f));
                phi.images[j - 1] = lw(Letter::new(i, e * f));
                phi.inverse_images[i - 1] = lw(Letter::new(j, e * f));
                phi.inverse_images[j - 1] = lw(Letter::new(i, -e * f));
            }
            GeneratorSpec::InvertLetter(i) => {
                check_index(*i)?;
                let w = Word::letter(rank, Letter::neg(*i));
                phi.images[i - 1] = w.clone();
                phi.inverse_images[i - 1] = w;
            }
            GeneratorSpec::Permute(p) => {
                let mut seen = vec![false; rank];
                if p.len() != rank {
                    return Err(Error::InvalidGenerator(format!("{spec}: wrong length")));
                }
                for &x in p {
                    if x == 0 || x > rank || seen[x - 1] {
                        return Err(Error::InvalidGenerator(format!(
                            "{spec}: not a permutation"
                        )));
                    }
                    seen[x - 1] = true;
                }
                for (i, &x) in p.iter().enumerate() {
                    phi.images[i] = Word::generator(rank, x);
                    phi.inverse_images[x - 1] = Word::generator(rank, i + 1);
                }
            }
        }
        Ok(phi)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[Word] {
        &self.inverse_images
    }

    /// `phi(v_i)`, 1-based.
    pub fn image(&self, i: usize) -> &Word {
        &self.images[i - 1]
    }

    fn check_rank(&self, rank: usize) -> Result<()> {
        if self.rank != rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: rank,
            });
        }
        Ok(())
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        self.check_rank(w.rank())?;
        Ok(substitute(&self.images, w))
    }

    pub fn apply_inverse(&self, w: &Word) -> Result<Word> {
        self.check_rank(w.rank())?;
        Ok(substitute(&self.inverse_images, w))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FreeAutomorphism) -> Result<FreeAutomorphism> {
        self.check_rank(other.rank)?;
        Ok(FreeAutomorphism {
            rank: self.rank,
            images: other
                .images
                .iter()
                .map(|w| substitute(&self.images, w))
                .collect(),
            inverse_images: self
                .inverse_images
                .iter()
                .map(|w| substitute(&other.inverse_images, w))
                .collect(),
        })
    }

    pub fn inverse(&self) -> FreeAutomorphism {
        FreeAutomorphism {
            rank: self.rank,
            images: self.inverse_images.clone(),
            inverse_images: self.images.clone(),
        }
    }

    pub fn pow(&self, e: i64) -> FreeAutomorphism {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeAutomorphism::identity(self.rank);
        for _ in 0..e.unsigned_abs() {
            out = out.compose(&base).expect("same rank");
        }
        out
    }

    /// `[g, h] = g h g^-1 h^-1`.
    pub fn commutator(&self, other: &FreeAutomorphism) -> Result<FreeAutomorphism> {
        self.compose(other)?
            .compose(&self.inverse())?
            .compose(&other.inverse())
    }

    /// Equality of basis images.
    pub fn equals(&self, other: &FreeAutomorphism) -> Result<bool> {
        self.check_rank(other.rank)?;
        Ok(self.images == other.images)
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, w)| w.len() == 1 && w.letters()[0] == Letter::pos(i + 1))
    }

    /// First basis index whose images differ.
    pub fn first_difference(&self, other: &FreeAutomorphism) -> Option<usize> {
        (0..self.rank.min(other.rank))
            .find(|&i| self.images[i] != other.images[i])
            .map(|i| i + 1)
    }

    pub fn fixes_conjugacy_class(&self, w: &Word) -> Result<bool> {
        self.apply(w)?.is_conjugate(w)
    }

    /// Matrix whose i-th column is the exponent-sum vector of `phi(v_i)`.
    pub fn abelianize(&self) -> IntMatrix {
        let cols: Vec<Vec<BigInt>> = self.images.iter().map(abelianize_word).collect();
        Matrix::from_columns(&cols).expect("square")
    }

    pub fn classify(&self) -> Classification {
        let m = self.abelianize();
        if m.is_identity() {
            return Classification::IA;
        }
        let d = m.determinant().expect("square");
        if d.is_one() {
            Classification::SAutNotIA
        } else {
            debug_assert!(d.is_negative() && d.abs().is_one());
            Classification::DetMinusOne
        }
    }

    /// Parse the text format (see [`fmt::Display`]); inverse lines are required.
    pub fn parse(text: &str) -> Result<FreeAutomorphism> {
        let BasisMapText {
            images,
            inverse_images,
        } = BasisMapText::parse(text)?;
        let inverse_images = inverse_images
            .ok_or_else(|| Error::Parse("missing inverse image lines `v<i> <- <word>`".into()))?;
        FreeAutomorphism::from_images(images, inverse_images)
    }
}

impl PartialEq for FreeAutomorphism {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.images == other.images
    }
}

impl Eq for FreeAutomorphism {}

impl std::hash::Hash for FreeAutomorphism {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rank.hash(state);
        self.images.hash(state);
    }
}

/// `n` lines `v<i> -> <word>`, then `n` lines `v<i> <- <word>` for the inverse.
impl fmt::Display for FreeAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.images.iter().enumerate() {
            writeln!(f, "v{} -> {}", i + 1, w)?;
        }
        for (i, w) in self.inverse_images.iter().enumerate() {
            writeln!(f, "v{} <- {}", i + 1, w)?;
        }
        Ok(())
    }
}

impl fmt::Debug for FreeAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .map(|(i, w)| format!("v{} -> {}", i + 1, w))
            .collect();
        write!(f, "Aut[{}]({})", self.rank, parts.join("; "))
    }
}

/// Basis images read from text, with optional inverse images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisMapText {
    pub images: Vec<Word>,
    pub inverse_images: Option<Vec<Word>>,
}

impl BasisMapText {
    pub fn parse(text: &str) -> Result<BasisMapText> {
        let mut fwd: Vec<(usize, &str)> = Vec::new();
        let mut back: Vec<(usize, &str)> = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (lhs, rhs, target) = if let Some((l, r)) = line.split_once("->") {
                (l, r, &mut fwd)
            } else if let Some((l, r)) = line.split_once("<-") {
                (l, r, &mut back)
            } else {
                return Err(Error::Parse(format!("expected `v<i> -> <word>`: `{line}`")));
            };
            let letter: Letter = lhs.trim().parse()?;
            if letter.is_inverse() {
                return Err(Error::Parse(format!(
                    "left side must be a basis letter: `{line}`"
                )));
            }
            target.push((letter.index(), rhs));
        }
        let rank = fwd.len();
        if rank == 0 {
            return Err(Error::Parse("no image lines".into()));
        }
        let collect = |entries: &[(usize, &str)]| -> Result<Vec<Word>> {
            let mut out: Vec<Option<Word>> = vec![None; rank];
            for &(i, rhs) in entries {
                if i > rank || out[i - 1].is_some() {
                    return Err(Error::Parse(format!("bad or repeated index v{i}")));
                }
                out[i - 1] = Some(Word::parse(rhs, rank)?);
            }
            out.into_iter()
                .enumerate()
                .map(|(i, w)| w.ok_or_else(|| Error::Parse(format!("missing line for v{}", i + 1))))
                .collect()
        };
        let images = collect(&fwd)?;
        let inverse_images = if back.is_empty() {
            None
        } else {
            if back.len() != rank {
                return Err(Error::Parse("incomplete inverse image lines".into()));
            }
            Some(collect(&back)?)
        };
        Ok(BasisMapText {
            images,
            inverse_images,
        })
    }
}

/// Exponent-sum vector of a word: the abelianization `F_n -> Z^n`.
pub fn abelianize_word(w: &Word) -> Vec<BigInt> {
    w.exponent_sums().into_iter().map(BigInt::from).collect()
}

/// Generators of the Gersten presentation of `SAut(F_n)`:
/// `M_{a,b}` (`a, b` signed, `a != b^±1`), `C_{a,b}` (`a != b` positive) and `w_{a,b}`.
pub fn gersten_generators(rank: usize) -> Vec<(GeneratorSpec, FreeAutomorphism)> {
    let signed = signed_letters(rank);
    let mut out = Vec::new();
    for &a in &signed {
        for &b in &signed {
            if a.index() != b.index() {
                out.push(GeneratorSpec::mul(rank, a, b));
            }
        }
    }
    for i in 1..=rank {
        for j in 1..=rank {
            if i != j {
                out.push(GeneratorSpec::conj(rank, i, Letter::pos(j)));
            }
        }
    }
    for &a in &signed {
        for &b in &signed {
            if a.index() != b.index() {
                out.push(GeneratorSpec::Swap { a, b });
            }
        }
    }
    out.into_iter()
        .map(|s| {
            let phi = FreeAutomorphism::generator(&s, rank).expect("valid Gersten generator");
            (s, phi)
        })
        .collect()
}

/// `v1, v1^-1, v2, v2^-1, ...` in letter order.
pub fn signed_letters(rank: usize) -> Vec<Letter> {
    (1..=rank)
        .flat_map(|i| [Letter::pos(i), Letter::neg(i)])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(rank: usize, s: &[i32]) -> Word {
        Word::from_signed(rank, s).unwrap()
    }

    fn gen(spec: GeneratorSpec, rank: usize) -> FreeAutomorphism {
        FreeAutomorphism::generator(&spec, rank).unwrap()
    }

    fn ml(rank: usize, t: i32, by: &[i32]) -> FreeAutomorphism {
        gen(
            GeneratorSpec::MulLeft {
                target: Letter::from_signed(t),
                word: w(rank, by),
            },
            rank,
        )
    }

    fn mr(rank: usize, t: i32, by: &[i32]) -> FreeAutomorphism {
        gen(
            GeneratorSpec::MulRight {
                target: Letter::from_signed(t),
                word: w(rank, by),
            },
            rank,
        )
    }

    fn cj(rank: usize, t: usize, by: &[i32]) -> FreeAutomorphism {
        gen(
            GeneratorSpec::Conj {
                target: t,
                word: w(rank, by),
            },
            rank,
        )
    }

    #[test]
    fn mul_left_images() {
        let m = ml(3, 1, &[2]);
        assert_eq!(m.apply(&w(3, &[1])).unwrap(), w(3, &[2, 1]));
        assert_eq!(m.apply(&w(3, &[-1])).unwrap(), w(3, &[-1, -2]));
        // the inverse letter is multiplied on the left: v1^-1 -> v2 v1^-1
        let m = ml(3, -1, &[2]);
        assert_eq!(m.apply(&w(3, &[1])).unwrap(), w(3, &[1, -2]));
        assert_eq!(m.apply(&w(3, &[-1])).unwrap(), w(3, &[2, -1]));
    }

    #[test]
    fn conj_images() {
        let c = cj(3, 1, &[2]);
        assert_eq!(c.apply(&w(3, &[1])).unwrap(), w(3, &[2, 1, -2]));
        assert_eq!(c.apply(&w(3, &[3])).unwrap(), w(3, &[3]));
    }

    #[test]
    fn degenerate_parameters_rejected() {
        let bad = GeneratorSpec::Conj {
            target: 1,
            word: w(3, &[2, 1]),
        };
        assert!(matches!(
            FreeAutomorphism::generator(&bad, 3),
            Err(Error::InvalidGenerator(_))
        ));
        let bad = GeneratorSpec::Swap {
            a: Letter::pos(2),
            b: Letter::neg(2),
        };
        assert!(FreeAutomorphism::generator(&bad, 3).is_err());
        assert!(FreeAutomorphism::generator(&GeneratorSpec::Permute(vec![1, 1, 2]), 3).is_err());
        assert!(FreeAutomorphism::generator(&GeneratorSpec::InvertLetter(4), 3).is_err());
    }

    #[test]
    fn inverse_of_mul_left() {
        let m = ml(3, 1, &[2]);
        assert_eq!(m.inverse(), ml(3, 1, &[-2]));
        assert!(m.compose(&m.inverse()).unwrap().is_identity());
    }

    #[test]
    fn conj_is_product_of_muls() {
        let c = cj(3, 1, &[2]);
        let p = ml(3, 1, &[2]).compose(&ml(3, -1, &[2])).unwrap();
        assert!(c.equals(&p).unwrap());
    }

    #[test]
    fn left_and_right_multiplication_differ() {
        assert!(!ml(2, 1, &[2]).equals(&mr(2, 1, &[2])).unwrap());
        let m = ml(2, 1, &[2]);
        assert!(m.equals(&m).unwrap());
    }

    #[test]
    fn swap_has_order_four() {
        let s = gen(
            GeneratorSpec::Swap {
                a: Letter::pos(1),
                b: Letter::neg(2),
            },
            3,
        );
        assert_eq!(s.apply(&w(3, &[1])).unwrap(), w(3, &[2]));
        assert!(!s.pow(2).is_identity());
        assert!(s.pow(4).is_identity());
        assert!(s.compose(&s.inverse()).unwrap().is_identity());
    }

    #[test]
    fn conjugacy_class_fixity() {
        assert!(cj(3, 1, &[2]).fixes_conjugacy_class(&w(3, &[1])).unwrap());
        assert!(!ml(3, 1, &[2]).fixes_conjugacy_class(&w(3, &[1])).unwrap());
    }

    #[test]
    fn abelianization_and_classification() {
        assert!(FreeAutomorphism::identity(3).abelianize().is_identity());
        assert!(cj(3, 1, &[2]).abelianize().is_identity());
        assert_eq!(ml(3, 1, &[2, 3, -2, -3]).classify(), Classification::IA);
        let sw = gen(
            GeneratorSpec::Swap {
                a: Letter::pos(1),
                b: Letter::pos(2),
            },
            3,
        );
        assert_eq!(sw.classify(), Classification::SAutNotIA);
        assert_eq!(
            gen(GeneratorSpec::InvertLetter(1), 3).classify(),
            Classification::DetMinusOne
        );
        assert_eq!(
            abelianize_word(&w(3, &[1, 1, -3])),
            vec![BigInt::from(2), BigInt::from(0), BigInt::from(-1)]
        );
    }

    #[test]
    fn permutation_inverse() {
        let p = gen(GeneratorSpec::Permute(vec![2, 3, 1]), 3);
        assert_eq!(p.apply(&w(3, &[1])).unwrap(), w(3, &[2]));
        assert!(p.compose(&p.inverse()).unwrap().is_identity());
        assert!(p.pow(3).is_identity());
    }

    #[test]
    fn certificate_is_checked() {
        let bad = FreeAutomorphism::from_images(
            vec![w(2, &[1, 1]), w(2, &[2])],
            vec![w(2, &[1]), w(2, &[2])],
        );
        assert!(matches!(bad, Err(Error::NotAutomorphism(_))));
    }

    #[test]
    fn text_round_trip() {
        let phi = ml(3, 1, &[2, 3]).compose(&cj(3, 2, &[1])).unwrap();
        let s = phi.to_string();
        assert!(s.starts_with("v1 -> "));
        assert_eq!(FreeAutomorphism::parse(&s).unwrap(), phi);
        let images_only = BasisMapText::parse("v1 -> v2 v1\nv2 -> v2\n").unwrap();
        assert!(images_only.inverse_images.is_none());
        assert!(FreeAutomorphism::parse("v1 -> v2 v1\nv2 -> v2\n").is_err());
        assert!(BasisMapText::parse("v1 -> v1\nv1 -> v2\n").is_err());
    }

    #[test]
    fn gersten_generator_count() {
        // 2n(2n-2) Mul, n(n-1) Con, 2n(2n-2) swaps
        let g = gersten_generators(3);
        assert_eq!(g.len(), 24 + 6 + 24);
        assert!(g
            .iter()
            .all(|(_, phi)| phi.classify() != Classification::DetMinusOne));
    }
}
