//! Exhaustive verification of explicit identities between automorphisms.
//!
//! Each family is a pair of generator expressions (see [`crate::expr`]) over
//! letter variables with a side condition. Every admissible binding at the
//! requested rank is evaluated and both sides compared as automorphisms.
//! Bindings are enumerated in lexicographic letter order and checked in
//! parallel; results are merged in enumeration order.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::automorphism::{gersten_generators, signed_letters, FreeAutomorphism, GeneratorSpec};
use crate::error::{Error, Result};
use crate::expr::{AutExpr, Bindings, CommutatorReading, EvalOptions};
use crate::report::{Outcome, VerificationReport};
use crate::word::{Letter, Word};

/// Values a letter variable ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// `v_1, ..., v_n`.
    Positive,
    /// `v_1, v_1^-1, ..., v_n, v_n^-1`.
    Signed,
}

/// A family of identities `lhs = rhs` indexed by letter and sign variables.
pub struct Family {
    pub name: &'static str,
    pub lhs: &'static str,
    pub rhs: &'static str,
    pub letters: &'static [(&'static str, Domain)],
    pub signs: &'static [&'static str],
    /// Side condition on the letters, in the order of `letters`.
    pub admissible: fn(&[Letter]) -> bool,
}

fn idx(l: Letter) -> usize {
    l.index()
}

fn distinct_indices(ls: &[Letter]) -> bool {
    (0..ls.len()).all(|i| (i + 1..ls.len()).all(|j| ls[i].index() != ls[j].index()))
}

/// The seven relation families of the presentation of `SAut(F_n)`, `n >= 3`.
pub fn gersten_families() -> Vec<Family> {
    use Domain::*;
    vec![
        Family {
            name: "R1 M(a,b)M(a,b^-1)=1",
            lhs: "M(a,b) M(a,b^-1)",
            rhs: "Id",
            letters: &[("a", Signed), ("b", Signed)],
            signs: &[],
            admissible: distinct_indices,
        },
        Family {
            name: "R2 [M(a,b),M(c,d)]=1",
            lhs: "[M(a,b), M(c,d)]",
            rhs: "Id",
            letters: &[("a", Signed), ("b", Signed), ("c", Signed), ("d", Signed)],
            signs: &[],
            admissible: |l| {
                let (a, b, c, d) = (l[0], l[1], l[2], l[3]);
                idx(b) != idx(a)
                    && idx(b) != idx(c)
                    && idx(d) != idx(c)
                    && idx(d) != idx(a)
                    && a != c
            },
        },
        Family {
            name: "R3 [M(b,a^-1),M(c,b^-1)]=M(c,a)",
            lhs: "[M(b,a^-1), M(c,b^-1)]",
            rhs: "M(c,a)",
            letters: &[("a", Signed), ("b", Signed), ("c", Signed)],
            signs: &[],
            admissible: distinct_indices,
        },
        Family {
            name: "R4 W(a,b)=W(a^-1,b^-1)",
            lhs: "W(a,b)",
            rhs: "W(a^-1,b^-1)",
            letters: &[("a", Signed), ("b", Signed)],
            signs: &[],
            admissible: distinct_indices,
        },
        Family {
            name: "R5 W(a,b)=MMM",
            lhs: "W(a,b)",
            rhs: "M(b^-1,a^-1) M(a^-1,b) M(b,a)",
            letters: &[("a", Signed), ("b", Signed)],
            signs: &[],
            admissible: distinct_indices,
        },
        Family {
            name: "R6 W(a,b)^4=1",
            lhs: "W(a,b)^4",
            rhs: "Id",
            letters: &[("a", Signed), ("b", Signed)],
            signs: &[],
            admissible: distinct_indices,
        },
        Family {
            name: "R7 C(a,b)=M(a,b)M(a^-1,b)",
            lhs: "C(a,b)",
            rhs: "M(a,b) M(a^-1,b)",
            letters: &[("a", Positive), ("b", Positive)],
            signs: &[],
            admissible: distinct_indices,
        },
    ]
}

/// Identities relating the left, right and conjugation generator families.
pub fn identity_families() -> Vec<Family> {
    use Domain::*;
    vec![
        Family {
            name: "Mr via C and M",
            lhs: "Mr(a,[b,c])",
            rhs: "C(a,b)^-1 C(a,c)^-1 C(a,b) C(a,c) M(a,[b,c])",
            letters: &[("a", Positive), ("b", Positive), ("c", Positive)],
            signs: &[],
            admissible: distinct_indices,
        },
        Family {
            name: "[M,M]=M(commutator)",
            lhs: "[M(a,b), M(a,d)]",
            rhs: "M(a,[d^-1,b^-1])",
            letters: &[("a", Positive), ("b", Positive), ("d", Positive)],
            signs: &[],
            admissible: distinct_indices,
        },
        Family {
            name: "[M,M]=(M C M^-1) C^-1",
            lhs: "[M(a,b), M(a,d)]",
            rhs: "(M(a,b) C(a,d) M(a,b)^-1) C(a,d)^-1",
            letters: &[("a", Positive), ("b", Positive), ("d", Positive)],
            signs: &[],
            admissible: distinct_indices,
        },
        Family {
            name: "C=M M (letter)",
            lhs: "C(a,b)",
            rhs: "M(a,b) M(a^-1,b)",
            letters: &[("a", Positive), ("b", Signed)],
            signs: &[],
            admissible: distinct_indices,
        },
        Family {
            name: "C=M M (commutator)",
            lhs: "C(a,[b,c])",
            rhs: "M(a,[b,c]) M(a^-1,[b,c])",
            letters: &[("a", Positive), ("b", Positive), ("c", Positive)],
            signs: &[],
            admissible: distinct_indices,
        },
    ]
}

fn domain_values(d: Domain, rank: usize) -> Vec<Letter> {
    match d {
        Domain::Positive => (1..=rank).map(Letter::pos).collect(),
        Domain::Signed => signed_letters(rank),
    }
}

/// All admissible bindings of a family at this rank, in lexicographic order.
pub fn bindings(family: &Family, rank: usize) -> Vec<Bindings> {
    let mut out = Vec::new();
    let domains: Vec<Vec<Letter>> = family
        .letters
        .iter()
        .map(|(_, d)| domain_values(*d, rank))
        .collect();
    let mut current = Vec::new();
    letter_tuples(&domains, &mut current, &mut |ls| {
        if !(family.admissible)(ls) {
            return;
        }
        for signs in sign_tuples(family.signs.len()) {
            let mut b = Bindings::new();
            for ((name, _), &l) in family.letters.iter().zip(ls) {
                b = b.letter(name, l);
            }
            for (name, &s) in family.signs.iter().zip(&signs) {
                b = b.sign(name, s);
            }
            out.push(b);
        }
    });
    out
}

fn letter_tuples(domains: &[Vec<Letter>], current: &mut Vec<Letter>, f: &mut dyn FnMut(&[Letter])) {
    if current.len() == domains.len() {
        f(current);
        return;
    }
    for &l in &domains[current.len()] {
        current.push(l);
        letter_tuples(domains, current, f);
        current.pop();
    }
}

/// All sign vectors of length `k`, `+1` before `-1`.
fn sign_tuples(k: usize) -> Vec<Vec<i32>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v| {
                [1, -1].into_iter().map(move |s| {
                    let mut w = v.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    out
}

/// Bindings rendered as `a=v1 b=v2^-1 e=-1`.
pub fn describe(b: &Bindings, order: &[&str], signs: &[&str]) -> String {
    let mut parts: Vec<String> = order
        .iter()
        .filter_map(|n| b.letters.get(*n).map(|l| format!("{n}={l}")))
        .collect();
    parts.extend(
        signs
            .iter()
            .filter_map(|n| b.signs.get(*n).map(|s| format!("{n}={s:+}"))),
    );
    parts.join(" ")
}

fn verify_family(family: &Family, rank: usize, report: &mut VerificationReport) -> Result<()> {
    let lhs = AutExpr::parse(family.lhs)?;
    let rhs = AutExpr::parse(family.rhs)?;
    let names: Vec<&str> = family.letters.iter().map(|(n, _)| *n).collect();
    report.family(family.name);
    let opts = EvalOptions::default();
    let outcomes: Vec<Outcome> = bindings(family, rank)
        .par_iter()
        .map(|b| {
            let desc = describe(b, &names, family.signs);
            match (lhs.eval(rank, b, opts), rhs.eval(rank, b, opts)) {
                (Ok(l), Ok(r)) => Outcome::compare(family.name, desc, &l, &r),
                (Err(e), _) | (_, Err(e)) => Outcome::fail(family.name, desc, e.to_string()),
            }
        })
        .collect();
    report.extend(outcomes);
    Ok(())
}

/// Check all seven relation families at rank `n >= 3`.
pub fn verify_gersten(n: usize) -> Result<VerificationReport> {
    if n < 3 {
        return Err(Error::InvalidParameter(
            "presentation requires n ≥ 3".into(),
        ));
    }
    let mut report = VerificationReport::new(format!("presentation relations, rank {n}"));
    for f in gersten_families() {
        verify_family(&f, n, &mut report)?;
    }
    Ok(report)
}

/// Check the right-multiplication, commutator and conjugation identities at rank `n >= 3`.
pub fn verify_identities(n: usize) -> Result<VerificationReport> {
    if n < 3 {
        return Err(Error::InvalidParameter(
            "identities need three distinct indices (n ≥ 3)".into(),
        ));
    }
    let mut report = VerificationReport::new(format!("generator identities, rank {n}"));
    for f in identity_families() {
        verify_family(&f, n, &mut report)?;
    }
    Ok(report)
}

// ------------------------------------------------------------ conjugation table

/// Which element of the Magnus generating set a table block conjugates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    /// `t = K(c,a,b)`, the commutator multiplication.
    Commutator,
    /// `t = C(c,a)`.
    Conjugation,
}

impl Block {
    pub fn t(self) -> &'static str {
        match self {
            Block::Commutator => "K(c,a,b)",
            Block::Conjugation => "C(c,a)",
        }
    }

    fn letters(self) -> &'static [&'static str] {
        match self {
            Block::Commutator => &["c", "a", "b"],
            Block::Conjugation => &["c", "a"],
        }
    }
}

/// One row: `s t s^-1 = rhs`.
pub struct TableRow {
    pub block: Block,
    pub row: usize,
    pub s: &'static str,
    pub rhs: &'static str,
    pub signs: &'static [&'static str],
}

macro_rules! rows {
    ($block:expr; $( $n:literal : $s:literal => $rhs:literal $([$($sg:literal),+])? ),* $(,)?) => {
        vec![ $( TableRow { block: $block, row: $n, s: $s, rhs: $rhs, signs: &[$($($sg),+)?] } ),* ]
    };
}

/// The conjugation table for the Magnus generators by `M(v_i, v_j)^{±1}`.
///
/// `a, b, c, x` are distinct positive letters; `e` and `d` are signs.
pub fn conjugation_table() -> Vec<TableRow> {
    let mut t = rows![Block::Commutator;
        1: "M(x,c)" => "C(x,c) [C(x,b)^-1, C(x,a)^-1] K(x,b,a) K(c,a,b) C(x,c)^-1",
        2: "M(x,c)^-1" => "K(x,a,b) K(c,a,b)",
        3: "M(a,x)" => "K(c,x,b) C(c,x)^-1 K(c,a,b) C(c,x)",
        4: "M(a,x)^-1" => "C(a,x)^-1 K(c,a,b) C(c,a)^-1 C(c,x) K(c,b,x) C(c,x)^-1 C(c,a) C(a,x)",
        5: "M(a^-1,x)" => "K(c,a,b) C(c,a)^-1 C(c,x) K(c,b,x) C(c,x)^-1 C(c,a)",
        6: "M(a^-1,x)^-1" => "C(a,x)^-1 K(c,x,b) C(c,x)^-1 K(c,a,b) C(c,x) C(a,x)",
        7: "M(b,x)" => "C(c,x)^-1 K(c,a,b) C(c,x) K(c,a,x)",
        8: "M(b,x)^-1" => "C(b,x)^-1 C(c,b)^-1 C(c,x) K(c,x,a) C(c,x)^-1 C(c,b) K(c,a,b) C(b,x)",
        9: "M(b^-1,x)" => "C(c,b)^-1 C(c,x) K(c,x,a) C(c,x)^-1 C(c,b) K(c,a,b)",
        10: "M(b^-1,x)^-1" => "C(b,x)^-1 C(c,x)^-1 K(c,a,b) C(c,x) K(c,a,x) C(b,x)",
        11: "M(c,x)^e" => "C(c,x)^e K(c,a,b) C(c,x)^-e" ["e"],
        12: "M(a,b)^e" => "C(c,b)^-e K(c,a,b) C(c,b)^e" ["e"],
        13: "M(a,c)" => "C(a,c) C(a,b) K(a,b,c) C(a,b)^-1 C(a,c)^-1 C(a,b) [C(c,a)^-1, C(c,b)^-1] K(c,a,b) C(c,b)^-1",
        14: "M(a,c)^-1" => "C(c,b) K(c,a,b) C(c,a)^-1 C(a,c) K(a,b,c) C(a,b)^-1 C(a,c)^-1 C(c,a)",
        15: "M(a^-1,c)" => "C(a,c) C(c,b) K(c,a,b) C(c,a)^-1 C(a,c) K(a,b,c) C(a,b)^-1 C(a,c)^-1 C(c,a) C(a,c)^-1",
        16: "M(a^-1,c)^-1" => "C(a,b) K(a,b,c) C(a,b)^-1 C(a,c)^-1 C(a,b) [C(c,a)^-1, C(c,b)^-1] K(c,a,b) C(c,b)^-1 C(a,c)",
        17: "M(b,a)^e" => "C(c,a)^-e K(c,a,b) C(c,a)^e" ["e"],
        18: "M(b,c)" => "C(c,a) K(c,a,b) [C(c,a)^-1, C(c,b)^-1] C(b,a)^-1 C(b,c) C(b,a) K(b,c,a) C(b,a)^-1 C(b,c)^-1",
        19: "M(b,c)^-1" => "C(c,b)^-1 C(b,c) C(b,a) K(b,c,a) C(b,c)^-1 C(c,b) K(c,a,b) C(c,a)^-1",
        20: "M(b^-1,c)" => "C(b,c) C(c,b)^-1 C(b,c) C(b,a) K(b,c,a) C(b,c)^-1 C(c,b) K(c,a,b) C(c,a)^-1 C(b,c)^-1",
        21: "M(b^-1,c)^-1" => "C(b,c)^-1 C(c,a) K(c,a,b) [C(c,a)^-1, C(c,b)^-1] C(b,a)^-1 C(b,c) C(b,a) K(b,c,a) C(b,a)^-1",
        22: "M(c,a)^e" => "C(c,a)^e K(c,a,b) C(c,a)^-e" ["e"],
        23: "M(c,b)^e" => "C(c,b)^e K(c,a,b) C(c,b)^-e" ["e"],
    ];
    t.extend(rows![Block::Conjugation;
        1: "M(x,c)" => "C(c,a) C(x,c) C(x,a) K(x,c,a) C(x,a)^-1 C(x,c)^-1",
        2: "M(x,c)^-1" => "C(c,a) C(x,a) K(x,a,c) C(x,a)^-1",
        3: "M(x^-1,c)" => "C(x,c) C(c,a) C(x,a) K(x,a,c) C(x,a)^-1 C(x,c)^-1",
        4: "M(x^-1,c)^-1" => "C(x,c)^-1 C(c,a) C(x,c) C(x,a) K(x,c,a) C(x,a)^-1",
        5: "M(a^e,x)^d" => "(C(c,a)^e C(c,x)^d)^e" ["e", "d"],
        6: "M(c,x)" => "C(c,a) C(c,x) K(c,a,x) C(c,x)^-1",
        7: "M(c,x)^-1" => "C(c,a) K(c,x,a)",
        8: "M(c^-1,x)" => "C(c,x) C(c,a) K(c,x,a) C(c,x)^-1",
        9: "M(c^-1,x)^-1" => "C(c,x)^-1 C(c,a) C(c,x) K(c,a,x)",
        10: "M(a^e,c)^d" => "(C(a,c)^d C(c,a)^e)^e" ["e", "d"],
    ]);
    t
}

fn block_name(b: Block) -> &'static str {
    match b {
        Block::Commutator => "K",
        Block::Conjugation => "C",
    }
}

impl TableRow {
    pub fn family(&self) -> String {
        format!("{}{:02} {}", block_name(self.block), self.row, self.s)
    }
}

/// Ordered tuples of `len` distinct positive letters at this rank.
fn distinct_tuples(rank: usize, len: usize) -> Vec<Vec<Letter>> {
    let domains = vec![domain_values(Domain::Positive, rank); len];
    let mut out = Vec::new();
    letter_tuples(&domains, &mut Vec::new(), &mut |ls| {
        if distinct_indices(ls) {
            out.push(ls.to_vec());
        }
    });
    out
}

struct ParsedRow<'a> {
    row: &'a TableRow,
    t: AutExpr,
    s: AutExpr,
    rhs: AutExpr,
}

fn parse_rows(rows: &[TableRow]) -> Result<Vec<ParsedRow<'_>>> {
    rows.iter()
        .map(|r| {
            Ok(ParsedRow {
                row: r,
                t: AutExpr::parse(r.block.t())?,
                s: AutExpr::parse(r.s)?,
                rhs: AutExpr::parse(r.rhs)?,
            })
        })
        .collect()
}

fn check_row(
    p: &ParsedRow,
    rank: usize,
    b: &Bindings,
    reading: CommutatorReading,
) -> Result<(FreeAutomorphism, FreeAutomorphism)> {
    let opts = EvalOptions { reading };
    let t = p.t.eval(rank, b, opts)?;
    let s = p.s.eval(rank, b, opts)?;
    let lhs = s.compose(&t)?.compose(&s.inverse())?;
    let rhs = p.rhs.eval(rank, b, opts)?;
    Ok((lhs, rhs))
}

/// Check every table row over all assignments of distinct letters to
/// `(a, b, c, x)` and all sign choices; optionally check at `default_rank`
/// that every `M(v_i, v_j)^{±1}` not covered by a row commutes with `t`.
///
/// A row failing under the adopted reading of `K` is re-evaluated under
/// the other reading and flagged if it passes there.
pub fn verify_table(
    n: usize,
    include_defaults: bool,
    default_rank: usize,
    reading: CommutatorReading,
) -> Result<VerificationReport> {
    if n < 4 {
        return Err(Error::InvalidParameter(
            "table rows need four distinct letters (n ≥ 4)".into(),
        ));
    }
    if include_defaults && default_rank < 5 {
        return Err(Error::InvalidParameter(
            "default cases need a fifth letter (default rank ≥ 5)".into(),
        ));
    }
    let other = match reading {
        CommutatorReading::Left => CommutatorReading::Right,
        CommutatorReading::Right => CommutatorReading::Left,
    };
    let table = conjugation_table();
    let parsed = parse_rows(&table)?;
    let mut report =
        VerificationReport::new(format!("conjugation table, rank {n}, reading {reading:?}"));
    let assignments = distinct_tuples(n, 4);
    let names = ["a", "b", "c", "x"];
    let mut flagged = Vec::new();
    for p in &parsed {
        let family = p.row.family();
        report.family(&family);
        let mut jobs = Vec::new();
        for tup in &assignments {
            for signs in sign_tuples(p.row.signs.len()) {
                let mut b = Bindings::new();
                for (nm, &l) in names.iter().zip(tup) {
                    b = b.letter(nm, l);
                }
                for (nm, &s) in p.row.signs.iter().zip(&signs) {
                    b = b.sign(nm, s);
                }
                jobs.push(b);
            }
        }
        let results: Vec<(Outcome, bool)> = jobs
            .par_iter()
            .map(|b| {
                let desc = describe(b, &names, p.row.signs);
                match check_row(p, n, b, reading) {
                    Ok((l, r)) => {
                        let o = Outcome::compare(&family, desc, &l, &r);
                        let alt = !o.passed()
                            && matches!(check_row(p, n, b, other), Ok((l2, r2)) if l2 == r2);
                        (o, alt)
                    }
                    Err(e) => (Outcome::fail(&family, desc, e.to_string()), false),
                }
            })
            .collect();
        let mut any_alt = false;
        for (o, alt) in results {
            any_alt |= alt;
            report.record(o);
        }
        if any_alt {
            flagged.push(format!(
                "{family}: fails under {reading:?} but passes under {other:?}"
            ));
        }
    }
    report.flags.extend(flagged);
    if include_defaults {
        report.merge(verify_table_defaults(default_rank, reading, &parsed)?);
    }
    Ok(report)
}

/// `M(v_i, v_j)^{±1}` for `i != j`.
fn positive_mul_generators(rank: usize) -> Result<Vec<(String, FreeAutomorphism)>> {
    let mut out = Vec::new();
    for i in 1..=rank {
        for j in 1..=rank {
            if i == j {
                continue;
            }
            let g = FreeAutomorphism::generator(
                &GeneratorSpec::mul(rank, Letter::pos(i), Letter::pos(j)),
                rank,
            )?;
            out.push((format!("M(v{i},v{j})"), g.clone()));
            out.push((format!("M(v{i},v{j})^-1"), g.inverse()));
        }
    }
    Ok(out)
}

fn verify_table_defaults(
    rank: usize,
    reading: CommutatorReading,
    parsed: &[ParsedRow],
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(format!("default commuting cases, rank {rank}"));
    let universe = positive_mul_generators(rank)?;
    let opts = EvalOptions { reading };
    for block in [Block::Commutator, Block::Conjugation] {
        let family = format!("{} default", block_name(block));
        report.family(&family);
        let t_expr = AutExpr::parse(block.t())?;
        let tuples = distinct_tuples(rank, block.letters().len());
        let outcomes: Vec<Vec<Outcome>> = tuples
            .par_iter()
            .map(|tup| -> Result<Vec<Outcome>> {
                let mut b = Bindings::new();
                for (nm, &l) in block.letters().iter().zip(tup) {
                    b = b.letter(nm, l);
                }
                let t = t_expr.eval(rank, &b, opts)?;
                let mut covered = HashSet::new();
                for p in parsed.iter().filter(|p| p.row.block == block) {
                    for x in (1..=rank).map(Letter::pos).filter(|x| !tup.contains(x)) {
                        for signs in sign_tuples(p.row.signs.len()) {
                            let mut bx = b.clone().letter("x", x);
                            if block == Block::Conjugation {
                                // b does not occur in these rows
                                bx = bx.letter("b", x);
                            }
                            for (nm, &s) in p.row.signs.iter().zip(&signs) {
                                bx = bx.sign(nm, s);
                            }
                            covered.insert(p.s.eval(rank, &bx, opts)?);
                        }
                    }
                }
                let desc_t = describe(&b, block.letters(), &[]);
                let mut out = Vec::new();
                for (name, s) in &universe {
                    if covered.contains(s) {
                        continue;
                    }
                    let lhs = s.compose(&t)?.compose(&s.inverse())?;
                    out.push(Outcome::compare(
                        &family,
                        format!("{desc_t} s={name}"),
                        &lhs,
                        &t,
                    ));
                }
                Ok(out)
            })
            .collect::<Result<_>>()?;
        report.extend(outcomes.into_iter().flatten());
    }
    Ok(report)
}

// ------------------------------------------------------------ edge property

/// How the edge property holds for one generator.
#[derive(Clone, Debug)]
pub enum EdgeWitness {
    /// `s(v1)` is conjugate to `v1`.
    SameClass,
    /// An automorphism sending `(v1, v2)` to `(v1, s(v1))`, with its factors.
    PartialBasis {
        certificate: FreeAutomorphism,
        factors: Vec<GeneratorSpec>,
    },
}

/// `v1 -> v1` and `v2 -> v_j` (transposition of 2 and j).
fn move_to_second(rank: usize, j: usize) -> GeneratorSpec {
    let mut p: Vec<usize> = (1..=rank).collect();
    p.swap(1, j - 1);
    GeneratorSpec::Permute(p)
}

/// A closed-form certificate for `{v1, w}` when `w` is one of the shapes a
/// single generator can produce from `v1`: `v_j^σ`, `v_j^f v1` or `v1 v_j^f`.
pub fn edge_certificate(w: &Word) -> Option<Vec<GeneratorSpec>> {
    let rank = w.rank();
    let v1 = Letter::pos(1);
    let ls = w.letters();
    let (y, build): (Letter, &dyn Fn(Letter) -> Option<GeneratorSpec>) = match ls {
        [y] if y.index() != 1 => (*y, &|_| None),
        [y, l] if *l == v1 && y.index() != 1 => (*y, &|y| {
            Some(GeneratorSpec::MulRight {
                target: y,
                word: Word::letter(rank, v1),
            })
        }),
        [l, y] if *l == v1 && y.index() != 1 => (*y, &|y| {
            Some(GeneratorSpec::MulLeft {
                target: y,
                word: Word::letter(rank, v1),
            })
        }),
        _ => return None,
    };
    // product order: last factor applied first
    let mut factors = Vec::new();
    if let Some(g) = build(y) {
        factors.push(g);
    }
    if y.is_inverse() {
        factors.push(GeneratorSpec::InvertLetter(y.index()));
    }
    factors.push(move_to_second(rank, y.index()));
    Some(factors)
}

/// Either `s(v1)` is conjugate to `v1` or `{v1, s(v1)}` is a partial basis.
pub fn edge_witness(s: &FreeAutomorphism) -> Result<Option<EdgeWitness>> {
    let rank = s.rank();
    let v1 = Word::generator(rank, 1);
    let w = s.image(1);
    if w.is_conjugate(&v1)? {
        return Ok(Some(EdgeWitness::SameClass));
    }
    let Some(factors) = edge_certificate(w) else {
        return Ok(None);
    };
    let mut phi = FreeAutomorphism::identity(rank);
    for g in &factors {
        phi = phi.compose(&FreeAutomorphism::generator(g, rank)?)?;
    }
    Ok(Some(EdgeWitness::PartialBasis {
        certificate: phi,
        factors,
    }))
}

/// Check the edge property for every generator of the presentation at rank `n >= 2`.
pub fn verify_edge_property(n: usize) -> Result<VerificationReport> {
    if n < 2 {
        return Err(Error::InvalidParameter("edge property needs n ≥ 2".into()));
    }
    let mut report = VerificationReport::new(format!("edge property, rank {n}"));
    report.family("same class");
    report.family("partial basis");
    let gens = gersten_generators(n);
    let outcomes: Vec<Outcome> = gens
        .par_iter()
        .map(|(spec, s)| {
            let desc = spec.to_string();
            match edge_witness(s) {
                Ok(Some(EdgeWitness::SameClass)) => Outcome::pass("same class", desc),
                Ok(Some(EdgeWitness::PartialBasis { certificate, .. })) => {
                    let ok = certificate.image(1) == &Word::generator(n, 1)
                        && certificate.image(2) == s.image(1);
                    if ok {
                        Outcome::pass("partial basis", desc)
                    } else {
                        Outcome::fail(
                            "partial basis",
                            desc,
                            format!("certificate sends v2 to {}", certificate.image(2)),
                        )
                    }
                }
                Ok(None) => Outcome::fail(
                    "partial basis",
                    desc,
                    format!("no certificate for s(v1) = {}", s.image(1)),
                ),
                Err(e) => Outcome::fail("partial basis", desc, e.to_string()),
            }
        })
        .collect();
    report.extend(outcomes);
    Ok(report)
}

// ------------------------------------------------------------ stabilizers

/// The generating set for the stabilizer in `SAut(F_n)` of the conjugacy
/// classes of `v_1..v_k`: `M(a,b)` with `a` outside `v_1..v_k` and all
/// `C(a,b)`, for signed `a != b^±1`. Since `C(v_i^-1, b) = C(v_i, b)`, each
/// conjugation appears once. When `k < n` the letter inversion `I(v_n)` is
/// appended; together they generate the stabilizer in `Aut(F_n)`.
pub fn stabilizer_generators(n: usize, k: usize) -> Result<Vec<(GeneratorSpec, FreeAutomorphism)>> {
    if k == 0 || k > n {
        return Err(Error::PrefixOutOfRange { k, rank: n });
    }
    let signed = signed_letters(n);
    let mut specs = Vec::new();
    for &a in &signed {
        if a.index() <= k {
            continue;
        }
        for &b in &signed {
            if a.index() != b.index() {
                specs.push(GeneratorSpec::mul(n, a, b));
            }
        }
    }
    for i in 1..=n {
        for &b in &signed {
            if b.index() != i {
                specs.push(GeneratorSpec::conj(n, i, b));
            }
        }
    }
    if k < n {
        specs.push(GeneratorSpec::InvertLetter(n));
    }
    specs
        .into_iter()
        .map(|s| {
            let phi = FreeAutomorphism::generator(&s, n)?;
            Ok((s, phi))
        })
        .collect()
}


#[cfg(test)]
mod table_tests {
    use super::*;

    #[test]
    fn table_rank_four_with_defaults() {
        let r = verify_table(4, true, 5, CommutatorReading::Left).unwrap();
        assert!(r.passed());
    }
}
