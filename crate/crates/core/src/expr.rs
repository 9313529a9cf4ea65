//! A text language for words and products of generators.
//!
//! ```text
//! M(v1, v2)            a -> w a        (target may be inverted: M(v1^-1, v2))
//! Mr(v1, v2)           a -> a w
//! C(v1, [v2, v3])      v1 -> w v1 w^-1
//! W(v1, v2^-1)         a -> b^-1, b -> a
//! I(v3)                v3 -> v3^-1
//! P(2, 3, 1)           v_i -> v_{p(i)}
//! K(c, a, b)           multiply c by the commutator [a, b]; side fixed by EvalOptions
//! Id, 1                identity
//! ```
//!
//! Juxtaposition composes right to left like functions, `[X, Y]` is
//! `X Y X^-1 Y^-1`, and `^k` takes powers. Exponents may be sign variables
//! (`^e`, `^-e`), and lowercase identifiers other than `v<i>` are letter
//! variables resolved from [`Bindings`].

use std::collections::BTreeMap;

use crate::automorphism::{FreeAutomorphism, GeneratorSpec};
use crate::error::{Error, Result};
use crate::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Exponent {
    Int(i64),
    /// `negate` for `^-e`.
    Var {
        name: String,
        negate: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordExpr {
    One,
    Letter(Letter),
    Var(String),
    Product(Vec<WordExpr>),
    Power(Box<WordExpr>, Exponent),
    Commutator(Box<WordExpr>, Box<WordExpr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenExpr {
    Mul {
        target: WordExpr,
        word: WordExpr,
    },
    MulRight {
        target: WordExpr,
        word: WordExpr,
    },
    Conj {
        target: WordExpr,
        word: WordExpr,
    },
    Swap {
        a: WordExpr,
        b: WordExpr,
    },
    Invert {
        target: WordExpr,
    },
    Permute(Vec<usize>),
    CommMul {
        c: WordExpr,
        a: WordExpr,
        b: WordExpr,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AutExpr {
    Identity,
    Gen(GenExpr),
    Product(Vec<AutExpr>),
    Power(Box<AutExpr>, Exponent),
    Commutator(Box<AutExpr>, Box<AutExpr>),
}

/// Which side the commutator multiplies on for `K(c, a, b)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub enum CommutatorReading {
    /// `M_{c,[a,b]}`: `c -> [a,b] c`.
    #[default]
    Left,
    /// `M'_{c,[a,b]}`: `c -> c [a,b]`.
    Right,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bindings {
    pub letters: BTreeMap<String, Letter>,
    pub signs: BTreeMap<String, i32>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn letter(mut self, name: &str, l: Letter) -> Self {
        self.letters.insert(name.to_string(), l);
        self
    }

    pub fn sign(mut self, name: &str, s: i32) -> Self {
        self.signs.insert(name.to_string(), s);
        self
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EvalOptions {
    pub reading: CommutatorReading,
}

// ---------------------------------------------------------------- lexer

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Caret,
    Minus,
    Star,
    Int(i64),
    Ident(String),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() {
        let c = b[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => {}
            '(' => out.push(Tok::LParen),
            ')' => out.push(Tok::RParen),
            '[' => out.push(Tok::LBrack),
            ']' => out.push(Tok::RBrack),
            ',' => out.push(Tok::Comma),
            '^' => out.push(Tok::Caret),
            '-' => out.push(Tok::Minus),
            '*' => out.push(Tok::Star),
            '0'..='9' => {
                let st = i;
                while i + 1 < b.len() && b[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let v = s[st..=i]
                    .parse()
                    .map_err(|_| Error::Parse(format!("integer too large at {st}")))?;
                out.push(Tok::Int(v));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let st = i;
                while i + 1 < b.len() && (b[i + 1].is_ascii_alphanumeric() || b[i + 1] == b'_') {
                    i += 1;
                }
                out.push(Tok::Ident(s[st..=i].to_string()));
            }
            _ => return Err(Error::Parse(format!("unexpected character `{c}` at {i}"))),
        }
        i += 1;
    }
    Ok(out)
}

fn as_basis_letter(id: &str) -> Option<usize> {
    let d = id.strip_prefix('v')?;
    if d.is_empty() || !d.bytes().all(|c| c.is_ascii_digit()) {
        return None;
    }
    d.parse().ok().filter(|&i| i > 0)
}

// ---------------------------------------------------------------- parser

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.next() {
            Some(ref x) if *x == t => Ok(()),
            other => Err(Error::Parse(format!("expected {t:?}, found {other:?}"))),
        }
    }

    fn err<T>(&self, what: &str) -> Result<T> {
        Err(Error::Parse(format!(
            "{what} at token {}: {:?}",
            self.pos,
            self.peek()
        )))
    }

    fn exponent(&mut self) -> Result<Exponent> {
        let negate = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        match self.next() {
            Some(Tok::Int(v)) => Ok(Exponent::Int(if negate { -v } else { v })),
            Some(Tok::Ident(name)) if as_basis_letter(&name).is_none() => {
                Ok(Exponent::Var { name, negate })
            }
            _ => self.err("expected exponent"),
        }
    }

    fn word_expr(&mut self) -> Result<WordExpr> {
        let mut factors = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Ident(_)) | Some(Tok::LBrack) | Some(Tok::LParen) | Some(Tok::Int(1)) => {
                    factors.push(self.word_factor()?)
                }
                Some(Tok::Star) => self.pos += 1,
                _ => break,
            }
        }
        match factors.len() {
            0 => self.err("expected word"),
            1 => Ok(factors.pop().unwrap()),
            _ => Ok(WordExpr::Product(factors)),
        }
    }

    fn word_factor(&mut self) -> Result<WordExpr> {
        let atom = match self.next() {
            Some(Tok::Int(1)) => WordExpr::One,
            Some(Tok::Ident(id)) => match as_basis_letter(&id) {
                Some(i) => WordExpr::Letter(Letter::pos(i)),
                None if id.starts_with(|c: char| c.is_ascii_lowercase()) => WordExpr::Var(id),
                None => return self.err("expected letter or variable"),
            },
            Some(Tok::LBrack) => {
                let g = self.word_expr()?;
                self.expect(Tok::Comma)?;
                let h = self.word_expr()?;
                self.expect(Tok::RBrack)?;
                WordExpr::Commutator(Box::new(g), Box::new(h))
            }
            Some(Tok::LParen) => {
                let g = self.word_expr()?;
                self.expect(Tok::RParen)?;
                g
            }
            _ => return self.err("expected word factor"),
        };
        self.powers_word(atom)
    }

    fn powers_word(&mut self, mut atom: WordExpr) -> Result<WordExpr> {
        while self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            atom = WordExpr::Power(Box::new(atom), self.exponent()?);
        }
        Ok(atom)
    }

    fn aut_expr(&mut self) -> Result<AutExpr> {
        let mut factors = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Ident(_)) | Some(Tok::LBrack) | Some(Tok::LParen) | Some(Tok::Int(1)) => {
                    factors.push(self.aut_factor()?)
                }
                Some(Tok::Star) => self.pos += 1,
                _ => break,
            }
        }
        match factors.len() {
            0 => self.err("expected automorphism"),
            1 => Ok(factors.pop().unwrap()),
            _ => Ok(AutExpr::Product(factors)),
        }
    }

    fn aut_factor(&mut self) -> Result<AutExpr> {
        let mut atom = match self.next() {
            Some(Tok::Int(1)) => AutExpr::Identity,
            Some(Tok::Ident(name)) => self.generator(&name)?,
            Some(Tok::LBrack) => {
                let g = self.aut_expr()?;
                self.expect(Tok::Comma)?;
                let h = self.aut_expr()?;
                self.expect(Tok::RBrack)?;
                AutExpr::Commutator(Box::new(g), Box::new(h))
            }
            Some(Tok::LParen) => {
                let g = self.aut_expr()?;
                self.expect(Tok::RParen)?;
                g
            }
            _ => return self.err("expected generator"),
        };
        while self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            atom = AutExpr::Power(Box::new(atom), self.exponent()?);
        }
        Ok(atom)
    }

    fn generator(&mut self, name: &str) -> Result<AutExpr> {
        if name == "Id" {
            return Ok(AutExpr::Identity);
        }
        self.expect(Tok::LParen)?;
        let g = match name {
            "M" | "Mr" | "C" => {
                let target = self.word_expr()?;
                self.expect(Tok::Comma)?;
                let word = self.word_expr()?;
                match name {
                    "M" => GenExpr::Mul { target, word },
                    "Mr" => GenExpr::MulRight { target, word },
                    _ => GenExpr::Conj { target, word },
                }
            }
            "W" => {
                let a = self.word_expr()?;
                self.expect(Tok::Comma)?;
                let b = self.word_expr()?;
                GenExpr::Swap { a, b }
            }
            "I" => GenExpr::Invert {
                target: self.word_expr()?,
            },
            "K" => {
                let c = self.word_expr()?;
                self.expect(Tok::Comma)?;
                let a = self.word_expr()?;
                self.expect(Tok::Comma)?;
                let b = self.word_expr()?;
                GenExpr::CommMul { c, a, b }
            }
            "P" => {
                let mut p = Vec::new();
                loop {
                    match self.next() {
                        Some(Tok::Int(v)) if v > 0 => p.push(v as usize),
                        _ => return self.err("expected permutation entry"),
                    }
                    if self.peek() == Some(&Tok::Comma) {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                GenExpr::Permute(p)
            }
            _ => return Err(Error::Parse(format!("unknown generator `{name}`"))),
        };
        self.expect(Tok::RParen)?;
        Ok(AutExpr::Gen(g))
    }

    fn finish(&self) -> Result<()> {
        if self.pos != self.toks.len() {
            return self.err("trailing input");
        }
        Ok(())
    }
}

impl WordExpr {
    pub fn parse(s: &str) -> Result<WordExpr> {
        let mut p = Parser {
            toks: lex(s)?,
            pos: 0,
        };
        let e = p.word_expr()?;
        p.finish()?;
        Ok(e)
    }

    pub fn eval(&self, rank: usize, env: &Bindings) -> Result<Word> {
        Ok(match self {
            WordExpr::One => Word::identity(rank),
            WordExpr::Letter(l) => Word::normalize([*l], rank)?,
            WordExpr::Var(name) => {
                let l = env
                    .letters
                    .get(name)
                    .ok_or_else(|| Error::Parse(format!("unbound letter variable `{name}`")))?;
                Word::normalize([*l], rank)?
            }
            WordExpr::Product(fs) => {
                let mut w = Word::identity(rank);
                for f in fs {
                    w = w.multiply(&f.eval(rank, env)?)?;
                }
                w
            }
            WordExpr::Power(b, e) => b.eval(rank, env)?.pow(e.eval(env)?),
            WordExpr::Commutator(g, h) => g.eval(rank, env)?.commutator(&h.eval(rank, env)?)?,
        })
    }

    fn eval_letter(&self, rank: usize, env: &Bindings) -> Result<Letter> {
        let w = self.eval(rank, env)?;
        match w.letters() {
            [l] => Ok(*l),
            _ => Err(Error::InvalidGenerator(format!(
                "expected a single letter, got `{w}`"
            ))),
        }
    }
}

impl Exponent {
    pub fn eval(&self, env: &Bindings) -> Result<i64> {
        match self {
            Exponent::Int(v) => Ok(*v),
            Exponent::Var { name, negate } => {
                let s = *env
                    .signs
                    .get(name)
                    .ok_or_else(|| Error::Parse(format!("unbound sign variable `{name}`")))?
                    as i64;
                Ok(if *negate { -s } else { s })
            }
        }
    }
}

impl GenExpr {
    pub fn spec(&self, rank: usize, env: &Bindings, opts: EvalOptions) -> Result<GeneratorSpec> {
        Ok(match self {
            GenExpr::Mul { target, word } => GeneratorSpec::MulLeft {
                target: target.eval_letter(rank, env)?,
                word: word.eval(rank, env)?,
            },
            GenExpr::MulRight { target, word } => GeneratorSpec::MulRight {
                target: target.eval_letter(rank, env)?,
                word: word.eval(rank, env)?,
            },
            GenExpr::Conj { target, word } => GeneratorSpec::Conj {
                target: target.eval_letter(rank, env)?.index(),
                word: word.eval(rank, env)?,
            },
            GenExpr::Swap { a, b } => GeneratorSpec::Swap {
                a: a.eval_letter(rank, env)?,
                b: b.eval_letter(rank, env)?,
            },
            GenExpr::Invert { target } => {
                GeneratorSpec::InvertLetter(target.eval_letter(rank, env)?.index())
            }
            GenExpr::Permute(p) => GeneratorSpec::Permute(p.clone()),
            GenExpr::CommMul { c, a, b } => {
                let target = c.eval_letter(rank, env)?;
                let word = a.eval(rank, env)?.commutator(&b.eval(rank, env)?)?;
                match opts.reading {
                    CommutatorReading::Left => GeneratorSpec::MulLeft { target, word },
                    CommutatorReading::Right => GeneratorSpec::MulRight { target, word },
                }
            }
        })
    }
}

impl AutExpr {
    pub fn parse(s: &str) -> Result<AutExpr> {
        let mut p = Parser {
            toks: lex(s)?,
            pos: 0,
        };
        let e = p.aut_expr()?;
        p.finish()?;
        Ok(e)
    }

    pub fn eval(&self, rank: usize, env: &Bindings, opts: EvalOptions) -> Result<FreeAutomorphism> {
        Ok(match self {
            AutExpr::Identity => FreeAutomorphism::identity(rank),
            AutExpr::Gen(g) => FreeAutomorphism::generator(&g.spec(rank, env, opts)?, rank)?,
            AutExpr::Product(fs) => {
                let mut phi = FreeAutomorphism::identity(rank);
                for f in fs {
                    phi = phi.compose(&f.eval(rank, env, opts)?)?;
                }
                phi
            }
            AutExpr::Power(b, e) => b.eval(rank, env, opts)?.pow(e.eval(env)?),
            AutExpr::Commutator(g, h) => g
                .eval(rank, env, opts)?
                .commutator(&h.eval(rank, env, opts)?)?,
        })
    }
}

/// Parse and evaluate a closed expression (no variables).
pub fn eval_closed(expr: &str, rank: usize) -> Result<FreeAutomorphism> {
    AutExpr::parse(expr)?.eval(rank, &Bindings::new(), EvalOptions::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(rank: usize, s: &[i32]) -> Word {
        Word::from_signed(rank, s).unwrap()
    }

    #[test]
    fn word_expressions() {
        let e = WordExpr::parse("[v1, v2] v3^-1").unwrap();
        assert_eq!(
            e.eval(3, &Bindings::new()).unwrap(),
            w(3, &[1, 2, -1, -2, -3])
        );
        let env = Bindings::new().letter("a", Letter::neg(2)).sign("e", -1);
        assert_eq!(
            WordExpr::parse("a^e").unwrap().eval(3, &env).unwrap(),
            w(3, &[2])
        );
        assert_eq!(
            WordExpr::parse("(v1 a)^2").unwrap().eval(3, &env).unwrap(),
            w(3, &[1, -2, 1, -2])
        );
        assert!(WordExpr::parse("1")
            .unwrap()
            .eval(2, &env)
            .unwrap()
            .is_identity());
    }

    #[test]
    fn generator_expressions() {
        let phi = eval_closed("M(v1, v2)", 3).unwrap();
        assert_eq!(phi.image(1), &w(3, &[2, 1]));
        let c = eval_closed("C(v1, v2)", 3).unwrap();
        let p = eval_closed("M(v1, v2) M(v1^-1, v2)", 3).unwrap();
        assert_eq!(c, p);
        let k = eval_closed("K(v1, v2, v3)", 3).unwrap();
        assert_eq!(k.image(1), &w(3, &[2, 3, -2, -3, 1]));
        let id = eval_closed("[M(v1, v2), M(v1, v3)] [M(v1, v2), M(v1, v3)]^-1", 3).unwrap();
        assert!(id.is_identity());
        assert!(eval_closed("W(v1, v2)^4", 3).unwrap().is_identity());
        assert!(eval_closed("Id", 2).unwrap().is_identity());
        assert!(eval_closed("P(2,1) P(2,1)", 2).unwrap().is_identity());
    }

    #[test]
    fn sign_variables_in_exponents() {
        let e = AutExpr::parse("(C(c,a)^e C(c,x)^d)^-e").unwrap();
        let env = Bindings::new()
            .letter("a", Letter::pos(1))
            .letter("c", Letter::pos(2))
            .letter("x", Letter::pos(3))
            .sign("e", -1)
            .sign("d", 1);
        let phi = e.eval(3, &env, EvalOptions::default()).unwrap();
        let direct = eval_closed("C(v2,v1)^-1 C(v2,v3)", 3).unwrap();
        assert_eq!(phi, direct);
    }

    #[test]
    fn right_reading_of_commutator_generator() {
        let e = AutExpr::parse("K(v1, v2, v3)").unwrap();
        let opts = EvalOptions {
            reading: CommutatorReading::Right,
        };
        let phi = e.eval(3, &Bindings::new(), opts).unwrap();
        assert_eq!(phi.image(1), &w(3, &[1, 2, 3, -2, -3]));
    }

    #[test]
    fn parse_errors() {
        assert!(AutExpr::parse("M(v1 v2").is_err());
        assert!(AutExpr::parse("Q(v1)").is_err());
        assert!(AutExpr::parse("M(v1, v2) )").is_err());
        assert!(eval_closed("M(v1 v2, v3)", 3).is_err());
        assert!(eval_closed("M(a, v2)", 3).is_err());
        assert!(eval_closed("M(v1, v1)", 3).is_err());
    }
}
