//! Reduced words in the free group `F_n` on the basis `v1, ..., vn`.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A basis letter `v_i` or its inverse.
///
/// Letters order by index first, then `v_i` before `v_i^-1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    index: u32,
    inverse: bool,
}

impl Letter {
    /// `v_index^sign`. Panics on index 0 or a sign other than ±1.
    pub fn new(index: usize, sign: i32) -> Letter {
        assert!(index >= 1, "letter indices start at 1");
        assert!(sign == 1 || sign == -1, "letter sign must be +1 or -1");
        Letter {
            index: index as u32,
            inverse: sign < 0,
        }
    }

    pub fn pos(index: usize) -> Letter {
        Letter::new(index, 1)
    }

    pub fn neg(index: usize) -> Letter {
        Letter::new(index, -1)
    }

    /// Signed encoding `+i` / `-i`.
    pub fn from_signed(v: i32) -> Letter {
        Letter::new(v.unsigned_abs() as usize, v.signum())
    }

    pub fn index(self) -> usize {
        self.index as usize
    }

    pub fn sign(self) -> i32 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    pub fn is_inverse(self) -> bool {
        self.inverse
    }

    pub fn signed(self) -> i32 {
        self.index as i32 * self.sign()
    }

    pub fn inv(self) -> Letter {
        Letter {
            index: self.index,
            inverse: !self.inverse,
        }
    }

    /// `self^e` for `e = ±1`.
    pub fn pow(self, e: i32) -> Letter {
        if e < 0 {
            self.inv()
        } else {
            self
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.index == other.index && self.inverse != other.inverse
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.index
            .cmp(&other.index)
            .then(self.inverse.cmp(&other.inverse))
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "v{}^-1", self.index)
        } else {
            write!(f, "v{}", self.index)
        }
    }
}

impl std::str::FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Letter> {
        let bad = || Error::Parse(format!("bad letter token `{s}`"));
        let body = s.strip_prefix('v').ok_or_else(bad)?;
        let (digits, inverse) = match body.strip_suffix("^-1") {
            Some(d) => (d, true),
            None => (body, false),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let index: u32 = digits.parse().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        Ok(Letter { index, inverse })
    }
}

/// A freely reduced word of `F_rank`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

/// Free reduction with a stack; single pass, confluent.
fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    match out.last() {
        Some(&last) if last.cancels(l) => {
            out.pop();
        }
        _ => out.push(l),
    }
}

impl Word {
    pub fn identity(rank: usize) -> Word {
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    /// The basis letter `v_i` as a word.
    pub fn generator(rank: usize, i: usize) -> Word {
        Word::letter(rank, Letter::pos(i))
    }

    pub fn letter(rank: usize, l: Letter) -> Word {
        assert!(l.index() <= rank, "letter {l} exceeds rank {rank}");
        Word {
            rank,
            letters: vec![l],
        }
    }

    /// Freely reduce an arbitrary letter sequence.
    pub fn normalize<I>(tokens: I, rank: usize) -> Result<Word>
    where
        I: IntoIterator<Item = Letter>,
    {
        let mut letters = Vec::new();
        for l in tokens {
            if l.index() > rank {
                return Err(Error::LetterOutOfRange {
                    index: l.index(),
                    rank,
                });
            }
            push_reduced(&mut letters, l);
        }
        Ok(Word { rank, letters })
    }

    /// Build from signed indices, e.g. `[1, -2]` for `v1 v2^-1`.
    pub fn from_signed(rank: usize, signed: &[i32]) -> Result<Word> {
        if signed.contains(&0) {
            return Err(Error::Parse("letter index 0".into()));
        }
        Word::normalize(signed.iter().map(|&v| Letter::from_signed(v)), rank)
    }

    /// Parse the text format: `v1 v2^-1 v1`, or `1` for the empty word.
    pub fn parse(s: &str, rank: usize) -> Result<Word> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        if tokens.is_empty() {
            return Err(Error::Parse("empty word text (use `1`)".into()));
        }
        if tokens == ["1"] {
            return Ok(Word::identity(rank));
        }
        let letters = tokens
            .iter()
            .map(|t| t.parse::<Letter>())
            .collect::<Result<Vec<_>>>()?;
        Word::normalize(letters, rank)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// The same word viewed in `F_rank` for a larger rank.
    pub fn with_rank(&self, rank: usize) -> Result<Word> {
        Word::normalize(self.letters.iter().copied(), rank)
    }

    fn check_rank(&self, other: &Word) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        self.check_rank(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        Word {
            rank: self.rank,
            letters,
        }
    }

    pub fn invert(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.invert() } else { self.clone() };
        let mut out = Word::identity(self.rank);
        for _ in 0..e.unsigned_abs() {
            out = out.mul_unchecked(&base);
        }
        out
    }

    /// `[g, h] = g h g^-1 h^-1`.
    pub fn commutator(&self, other: &Word) -> Result<Word> {
        self.check_rank(other)?;
        Ok(self
            .mul_unchecked(other)
            .mul_unchecked(&self.invert())
            .mul_unchecked(&other.invert()))
    }

    /// `(core, conjugator)` with `self = conjugator · core · conjugator^-1` and
    /// `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let l = &self.letters;
        let mut i = 0;
        let mut j = l.len();
        while j - i >= 2 && l[i].cancels(l[j - 1]) {
            i += 1;
            j -= 1;
        }
        (
            Word {
                rank: self.rank,
                letters: l[i..j].to_vec(),
            },
            Word {
                rank: self.rank,
                letters: l[..i].to_vec(),
            },
        )
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(&a), Some(&b)) => self.letters.len() < 2 || !a.cancels(b),
            _ => true,
        }
    }

    pub fn conjugacy_class(&self) -> ConjugacyClass {
        ConjugacyClass::of(self)
    }

    pub fn is_conjugate(&self, other: &Word) -> Result<bool> {
        self.check_rank(other)?;
        Ok(self.conjugacy_class() == other.conjugacy_class())
    }

    /// Image in `F_n / <<v1, ..., vk>>`, written over `v_{k+1}, ..., v_n` and kept at rank `n`.
    pub fn project_kill(&self, k: usize) -> Result<Word> {
        if k > self.rank {
            return Err(Error::PrefixOutOfRange { k, rank: self.rank });
        }
        Ok(self.project_kill_unchecked(k))
    }

    pub(crate) fn project_kill_unchecked(&self, k: usize) -> Word {
        let mut letters = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if l.index() > k {
                push_reduced(&mut letters, l);
            }
        }
        Word {
            rank: self.rank,
            letters,
        }
    }

    /// Indices of letters occurring in the word.
    pub fn support(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.letters.iter().map(|l| l.index()).collect();
        s.sort_unstable();
        s.dedup();
        s
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.letters.iter().any(|l| l.index() == i)
    }

    /// Exponent sum of each letter, indexed `0..rank`.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.rank];
        for l in &self.letters {
            v[l.index() - 1] += l.sign() as i64;
        }
        v
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word[{}]({})", self.rank, self)
    }
}

/// The conjugacy class `[[g]]`, stored as the least cyclic rotation of the
/// cyclically reduced core.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ConjugacyClass {
    rank: usize,
    representative: Vec<Letter>,
}

impl ConjugacyClass {
    pub fn of(w: &Word) -> ConjugacyClass {
        let (core, _) = w.cyclic_reduce();
        ConjugacyClass {
            rank: w.rank,
            representative: least_rotation(&core.letters),
        }
    }

    pub fn representative(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.representative.clone(),
        }
    }

    pub fn cyclic_len(&self) -> usize {
        self.representative.len()
    }
}

impl fmt::Debug for ConjugacyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}]]", self.representative())
    }
}

fn least_rotation(s: &[Letter]) -> Vec<Letter> {
    let n = s.len();
    if n == 0 {
        return Vec::new();
    }
    let best = (0..n)
        .min_by(|&a, &b| {
            (0..n)
                .map(|t| s[(a + t) % n].cmp(&s[(b + t) % n]))
                .find(|o| *o != Ordering::Equal)
                .unwrap_or(Ordering::Equal)
        })
        .unwrap();
    (0..n).map(|t| s[(best + t) % n]).collect()
}
