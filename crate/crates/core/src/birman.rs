//! The stabilizer of the conjugacy classes of `v_1..v_k`, its map onto
//! `Aut(F_n / V)` with `V` the normal closure of `v_1..v_k`, the kernel of
//! that map, and the matrix-level picture in `GL_n(Z)`.
//!
//! `F_n / V` is identified with `F_{n-k}` on the letters `v_{k+1}..v_n` by
//! deleting `v_1..v_k` and renumbering.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::automorphism::{gersten_generators, FreeAutomorphism, GeneratorSpec};
use crate::error::{Error, Result};
use crate::expr::eval_closed;
use crate::relations::stabilizer_generators;
use crate::report::{Outcome, VerificationReport};
use crate::snf::smith_normal_form;
use crate::word::{Letter, Word};
use crate::{Int, IntMatrix};

/// A rank `n` and the distinguished partial basis `v_1..v_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StabilizerContext {
    n: usize,
    k: usize,
}

impl StabilizerContext {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::PrefixOutOfRange { k, rank: n });
        }
        Ok(StabilizerContext { n, k })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn prefix(&self) -> usize {
        self.k
    }

    /// Rank of the quotient `F_n / V`.
    pub fn quotient_rank(&self) -> usize {
        self.n - self.k
    }
}

fn build(specs: Vec<GeneratorSpec>, n: usize) -> Vec<(GeneratorSpec, FreeAutomorphism)> {
    specs
        .into_iter()
        .map(|s| {
            let phi = FreeAutomorphism::generator(&s, n).expect("well-formed generator");
            (s, phi)
        })
        .collect()
}

/// `M(v_i, [v_j, v_k])` for distinct `i, j, k` followed by `C(v_i, v_j)` for `i != j`.
pub fn magnus_generators(n: usize) -> Vec<(GeneratorSpec, FreeAutomorphism)> {
    let mut specs = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..=n {
                if i != j && j != k && i != k {
                    let c = Word::generator(n, j)
                        .commutator(&Word::generator(n, k))
                        .expect("same rank");
                    specs.push(GeneratorSpec::MulLeft {
                        target: Letter::pos(i),
                        word: c,
                    });
                }
            }
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                specs.push(GeneratorSpec::conj(n, i, Letter::pos(j)));
            }
        }
    }
    build(specs, n)
}

/// `M(v_i, v_j)` for `i > k >= j`: the generators not in `IA_n`.
pub fn kernel_mul_generators(ctx: &StabilizerContext) -> Vec<(GeneratorSpec, FreeAutomorphism)> {
    let (n, k) = (ctx.n, ctx.k);
    let mut specs = Vec::new();
    for i in k + 1..=n {
        for j in 1..=k {
            specs.push(GeneratorSpec::mul(n, Letter::pos(i), Letter::pos(j)));
        }
    }
    build(specs, n)
}

/// `M(v_i, v_j)` for `i > k >= j`, then `C(v_i, v_j)` for `i <= k`, `j != i`.
pub fn kernel_generators(ctx: &StabilizerContext) -> Vec<(GeneratorSpec, FreeAutomorphism)> {
    let n = ctx.n;
    let mut out = kernel_mul_generators(ctx);
    let mut specs = Vec::new();
    for i in 1..=ctx.k {
        for j in 1..=n {
            if i != j {
                specs.push(GeneratorSpec::conj(n, i, Letter::pos(j)));
            }
        }
    }
    out.extend(build(specs, n));
    out
}

/// Per-index results of the two kernel conditions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelMembership {
    /// `stabilizer[i-1]`: `phi(v_i)` is conjugate to `v_i`, for `i <= k`.
    pub stabilizer: Vec<bool>,
    /// `quotient_identity[j-k-1]`: `phi(v_j)` maps to `v_j` in `F_n / V`, for `j > k`.
    pub quotient_identity: Vec<bool>,
}

impl KernelMembership {
    pub fn in_stabilizer(&self) -> bool {
        self.stabilizer.iter().all(|&b| b)
    }

    pub fn acts_trivially_on_quotient(&self) -> bool {
        self.quotient_identity.iter().all(|&b| b)
    }

    pub fn in_kernel(&self) -> bool {
        self.in_stabilizer() && self.acts_trivially_on_quotient()
    }
}

fn check_rank(phi: &FreeAutomorphism, ctx: &StabilizerContext) -> Result<()> {
    if phi.rank() != ctx.n {
        return Err(Error::RankMismatch {
            left: ctx.n,
            right: phi.rank(),
        });
    }
    Ok(())
}

pub fn is_in_kernel(phi: &FreeAutomorphism, ctx: &StabilizerContext) -> Result<KernelMembership> {
    check_rank(phi, ctx)?;
    let n = ctx.n;
    let stabilizer = (1..=ctx.k)
        .map(|i| phi.fixes_conjugacy_class(&Word::generator(n, i)))
        .collect::<Result<_>>()?;
    let quotient_identity = (ctx.k + 1..=n)
        .map(|j| Ok(phi.image(j).project_kill(ctx.k)? == Word::generator(n, j)))
        .collect::<Result<_>>()?;
    Ok(KernelMembership {
        stabilizer,
        quotient_identity,
    })
}

/// Image of a word in `F_n / V`, as a word of rank `n - k` on renumbered letters.
pub fn quotient_word(w: &Word, k: usize) -> Word {
    let m = w.rank() - k;
    let letters = w
        .letters()
        .iter()
        .filter(|l| l.index() > k)
        .map(|l| Letter::new(l.index() - k, l.sign()));
    Word::normalize(letters, m).expect("indices shifted into range")
}

/// The automorphism of `F_n / V` induced by a stabilizer element.
pub fn quotient_automorphism(
    phi: &FreeAutomorphism,
    ctx: &StabilizerContext,
) -> Result<FreeAutomorphism> {
    check_rank(phi, ctx)?;
    let k = ctx.k;
    let images = (k + 1..=ctx.n)
        .map(|j| quotient_word(phi.image(j), k))
        .collect();
    let inverse = (k + 1..=ctx.n)
        .map(|j| quotient_word(&phi.inverse_images()[j - 1], k))
        .collect();
    FreeAutomorphism::from_images(images, inverse)
}

/// The rank-`n` automorphism fixing `v_1..v_k` that acts on `v_{k+1}..v_n`
/// as `psi` acts on `v_1..v_{n-k}`: the splitting of the quotient map.
pub fn split_lift(psi: &FreeAutomorphism, ctx: &StabilizerContext) -> Result<FreeAutomorphism> {
    let (n, k) = (ctx.n, ctx.k);
    if psi.rank() != n - k {
        return Err(Error::RankMismatch {
            left: n - k,
            right: psi.rank(),
        });
    }
    let shift = |w: &Word| {
        Word::normalize(
            w.letters()
                .iter()
                .map(|l| Letter::new(l.index() + k, l.sign())),
            n,
        )
        .expect("shifted into range")
    };
    let mut images: Vec<Word> = (1..=k).map(|i| Word::generator(n, i)).collect();
    let mut inverse = images.clone();
    images.extend(psi.images().iter().map(shift));
    inverse.extend(psi.inverse_images().iter().map(shift));
    FreeAutomorphism::from_images(images, inverse)
}

/// An element of `Hom(Z^n / V̄, V̄)` as a `k x (n-k)` block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomBlock(pub IntMatrix);

impl HomBlock {
    /// The matrix `[[I, B], [0, I]]`, i.e. `x -> x + B(π(x))`.
    pub fn to_matrix(&self, n: usize) -> IntMatrix {
        let k = self.0.rows();
        let mut m = IntMatrix::identity(n);
        for r in 0..k {
            for c in 0..n - k {
                m[(r, k + c)] = self.0[(r, c)].clone();
            }
        }
        m
    }

    /// Entries in row-major order.
    pub fn flatten(&self) -> Vec<Int> {
        self.0.to_rows().into_iter().flatten().collect()
    }
}

fn block_is_identity(m: &IntMatrix, r0: usize, c0: usize, size: usize) -> bool {
    (0..size).all(|r| {
        (0..size).all(|c| {
            let want = if r == c { Int::one() } else { Int::zero() };
            m[(r0 + r, c0 + c)] == want
        })
    })
}

/// Whether an abelianized matrix fixes `V̄` pointwise: `[[I, *], [0, *]]`.
pub fn fixes_prefix_columns(m: &IntMatrix, k: usize) -> bool {
    let n = m.rows();
    block_is_identity(m, 0, 0, k) && (k..n).all(|r| (0..k).all(|c| m[(r, c)].is_zero()))
}

/// `Φ(phi)`: the upper-right block of the abelianization, which must have
/// the shape `[[I_k, B], [0, I_{n-k}]]`.
pub fn phi_hom_image(phi: &FreeAutomorphism, ctx: &StabilizerContext) -> Result<HomBlock> {
    check_rank(phi, ctx)?;
    let (n, k) = (ctx.n, ctx.k);
    let m = phi.abelianize();
    if !fixes_prefix_columns(&m, k) || !block_is_identity(&m, k, k, n - k) {
        return Err(Error::BlockShape(format!(
            "abelianization is not of the form [[I, B], [0, I]]:\n{m}"
        )));
    }
    Ok(HomBlock(m.block(0, k, k, n)))
}

/// Generators of the quotient `Aut(F_{n-k})`: the presentation generators
/// together with the inversion of the first letter.
fn quotient_generators(m: usize) -> Vec<(GeneratorSpec, FreeAutomorphism)> {
    let mut out = if m >= 2 {
        gersten_generators(m)
    } else {
        Vec::new()
    };
    if m >= 1 {
        let s = GeneratorSpec::InvertLetter(1);
        let phi = FreeAutomorphism::generator(&s, m).expect("valid");
        out.push((s, phi));
    }
    out
}

/// The generators used for the diagram: the stabilizer generating set,
/// the kernel generators, and the split lifts of the quotient generators.
pub fn diagram_generators(ctx: &StabilizerContext) -> Result<Vec<(String, FreeAutomorphism)>> {
    let mut out: Vec<(String, FreeAutomorphism)> = Vec::new();
    let mut push = |name: String, phi: FreeAutomorphism| {
        if !out.iter().any(|(_, p)| *p == phi) {
            out.push((name, phi));
        }
    };
    for (s, phi) in stabilizer_generators(ctx.n, ctx.k)? {
        push(s.to_string(), phi);
    }
    for (s, phi) in kernel_generators(ctx) {
        push(s.to_string(), phi);
    }
    for (s, psi) in quotient_generators(ctx.quotient_rank()) {
        push(format!("lift {s}"), split_lift(&psi, ctx)?);
    }
    Ok(out)
}

/// Check the right square for one stabilizer element: it fixes `V̄`, and the
/// abelianization of its quotient equals the lower-right block of its
/// abelianization.
fn right_square(
    phi: &FreeAutomorphism,
    ctx: &StabilizerContext,
) -> std::result::Result<(), String> {
    let (n, k) = (ctx.n, ctx.k);
    let m = phi.abelianize();
    if !fixes_prefix_columns(&m, k) {
        return Err("abelianization does not fix the prefix span".into());
    }
    if k == n {
        return Ok(());
    }
    let q = quotient_automorphism(phi, ctx).map_err(|e| format!("quotient: {e}"))?;
    if q.abelianize() != m.block(k, n, k, n) {
        return Err("quotient abelianization differs from the lower-right block".into());
    }
    Ok(())
}

/// Commutativity of the diagram relating the stabilizer, its kernel and
/// quotient to their images in `GL_n(Z)`, checked on generators and on all
/// ordered pairs of generators.
pub fn verify_birman_diagram(ctx: &StabilizerContext) -> Result<VerificationReport> {
    let (n, k) = (ctx.n, ctx.k);
    let mut report = VerificationReport::new(format!("stabilizer diagram, rank {n}, prefix {k}"));
    for f in [
        "kernel membership",
        "left square",
        "splitting",
        "right square",
        "pair: homomorphisms",
        "pair: kernel additivity",
        "hom basis",
        "normal closure witness",
    ] {
        report.family(f);
    }

    // kernel generators: membership and the left square
    for (s, phi) in kernel_generators(ctx) {
        let desc = s.to_string();
        let mem = is_in_kernel(&phi, ctx)?;
        report.record(if mem.in_kernel() {
            Outcome::pass("kernel membership", desc.clone())
        } else {
            Outcome::fail("kernel membership", desc.clone(), format!("{mem:?}"))
        });
        report.record(match phi_hom_image(&phi, ctx) {
            Ok(b) if b.to_matrix(n) == phi.abelianize() => Outcome::pass("left square", desc),
            Ok(_) => Outcome::fail(
                "left square",
                desc,
                "block does not rebuild the matrix".into(),
            ),
            Err(e) => Outcome::fail("left square", desc, e.to_string()),
        });
    }

    // splitting: lifts fix the prefix letter-exactly and map back to themselves
    for (s, psi) in quotient_generators(ctx.quotient_rank()) {
        let desc = s.to_string();
        let lift = split_lift(&psi, ctx)?;
        let fixes = (1..=k).all(|i| lift.image(i) == &Word::generator(n, i));
        let back = quotient_automorphism(&lift, ctx)?;
        report.record(if fixes && back == psi {
            Outcome::pass("splitting", desc)
        } else {
            Outcome::fail("splitting", desc, "lift is not a section".into())
        });
    }

    let gens = diagram_generators(ctx)?;
    for (name, phi) in &gens {
        report.record(match right_square(phi, ctx) {
            Ok(()) => Outcome::pass("right square", name.clone()),
            Err(e) => Outcome::fail("right square", name.clone(), e),
        });
    }

    // all ordered pairs: quotient and abelianization are homomorphisms on products
    let pairs: Vec<(usize, usize)> = (0..gens.len())
        .flat_map(|i| (0..gens.len()).map(move |j| (i, j)))
        .collect();
    let outcomes: Vec<Vec<Outcome>> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (gn, g) = &gens[i];
            let (hn, h) = &gens[j];
            let desc = format!("{gn} * {hn}");
            let p = g.compose(h).expect("same rank");
            let mut out = Vec::new();
            let homs = (|| -> std::result::Result<(), String> {
                right_square(&p, ctx)?;
                if p.abelianize()
                    != g.abelianize()
                        .mul(&h.abelianize())
                        .map_err(|e| e.to_string())?
                {
                    return Err("abelianization is not multiplicative".into());
                }
                if k < n {
                    let q = |x: &FreeAutomorphism| {
                        quotient_automorphism(x, ctx).map_err(|e| e.to_string())
                    };
                    let qp = q(&p)?;
                    let qgh = q(g)?.compose(&q(h)?).map_err(|e| e.to_string())?;
                    if qp != qgh {
                        return Err("quotient map is not multiplicative".into());
                    }
                }
                Ok(())
            })();
            out.push(match homs {
                Ok(()) => Outcome::pass("pair: homomorphisms", desc.clone()),
                Err(e) => Outcome::fail("pair: homomorphisms", desc.clone(), e),
            });
            let in_kernel =
                |x: &FreeAutomorphism| is_in_kernel(x, ctx).map(|m| m.in_kernel()).unwrap_or(false);
            if in_kernel(g) && in_kernel(h) {
                let add = (|| -> Result<bool> {
                    if !is_in_kernel(&p, ctx)?.in_kernel() {
                        return Ok(false);
                    }
                    let sum: Vec<Int> = phi_hom_image(g, ctx)?
                        .flatten()
                        .into_iter()
                        .zip(phi_hom_image(h, ctx)?.flatten())
                        .map(|(a, b)| a + b)
                        .collect();
                    Ok(phi_hom_image(&p, ctx)?.flatten() == sum)
                })();
                out.push(match add {
                    Ok(true) => Outcome::pass("pair: kernel additivity", desc),
                    Ok(false) => {
                        Outcome::fail("pair: kernel additivity", desc, "Φ not additive".into())
                    }
                    Err(e) => Outcome::fail("pair: kernel additivity", desc, e.to_string()),
                });
            }
            out
        })
        .collect();
    report.extend(outcomes.into_iter().flatten());

    report.record(match hom_basis_check(ctx) {
        Ok(()) => Outcome::pass("hom basis", format!("n={n} k={k}")),
        Err(e) => Outcome::fail("hom basis", format!("n={n} k={k}"), e),
    });
    report.extend(normal_closure_witness(ctx)?);
    Ok(report)
}

/// The `Φ`-images of `M(v_i, v_j)` (`i > k >= j`) are distinct and stack to a
/// matrix whose Smith normal form is the identity.
pub fn hom_basis_check(ctx: &StabilizerContext) -> std::result::Result<(), String> {
    let t = kernel_mul_generators(ctx);
    if t.is_empty() {
        return Ok(());
    }
    let rows: Vec<Vec<Int>> = t
        .iter()
        .map(|(_, phi)| phi_hom_image(phi, ctx).map(|b| b.flatten()))
        .collect::<Result<_>>()
        .map_err(|e| e.to_string())?;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            if rows[i] == rows[j] {
                return Err(format!("Φ identifies generators {} and {}", t[i].0, t[j].0));
            }
        }
    }
    let m = IntMatrix::from_rows(rows).map_err(|e| e.to_string())?;
    if !m.is_square() {
        return Err(format!(
            "{} images in a lattice of rank {}",
            m.rows(),
            m.cols()
        ));
    }
    let snf = smith_normal_form(&m);
    if !snf.d.is_identity() {
        return Err(format!("Smith form {:?}", snf.diagonal()));
    }
    Ok(())
}

/// For `t1 = M(v_i, v_j)`, `t2 = M(v_i', v_j')` in the kernel: the commutator is
/// trivial unless `i = i'` and `j != j'`, in which case it equals
/// `(t1 C(v_i, v_j') t1^-1) C(v_i, v_j')^-1`.
pub fn normal_closure_witness(ctx: &StabilizerContext) -> Result<Vec<Outcome>> {
    let n = ctx.n;
    let t = kernel_mul_generators(ctx);
    let mut out = Vec::new();
    for (s1, t1) in &t {
        for (s2, t2) in &t {
            let (
                GeneratorSpec::MulLeft {
                    target: a1,
                    word: w1,
                },
                GeneratorSpec::MulLeft {
                    target: a2,
                    word: w2,
                },
            ) = (s1, s2)
            else {
                unreachable!("kernel multiplication generators");
            };
            let desc = format!("[{s1}, {s2}]");
            let comm = t1.commutator(t2)?;
            let (i, j, jp) = (a1.index(), w1.letters()[0].index(), w2.letters()[0].index());
            let expected = if a1 != a2 || w1 == w2 {
                FreeAutomorphism::identity(n)
            } else {
                eval_closed(
                    &format!("(M(v{i},v{j}) C(v{i},v{jp}) M(v{i},v{j})^-1) C(v{i},v{jp})^-1"),
                    n,
                )?
            };
            out.push(Outcome::compare(
                "normal closure witness",
                desc,
                &comm,
                &expected,
            ));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: usize, k: usize) -> StabilizerContext {
        StabilizerContext::new(n, k).unwrap()
    }

    #[test]
    fn magnus_counts_and_classification() {
        assert_eq!(magnus_generators(3).len(), 12);
        assert_eq!(magnus_generators(2).len(), 2);
        for (_, g) in magnus_generators(4) {
            assert_eq!(g.classify(), crate::Classification::IA);
        }
    }

    #[test]
    fn kernel_generators_small_case() {
        let names: Vec<String> = kernel_generators(&ctx(3, 1))
            .into_iter()
            .map(|(s, _)| s.to_string())
            .collect();
        assert_eq!(names, ["M(v2, v1)", "M(v3, v1)", "C(v1, v2)", "C(v1, v3)"]);
        assert_eq!(kernel_generators(&ctx(3, 3)).len(), 6);
    }

    #[test]
    fn membership_examples() {
        let c = ctx(3, 1);
        let m31 = eval_closed("M(v3, v1)", 3).unwrap();
        assert!(is_in_kernel(&m31, &c).unwrap().in_kernel());
        let m12 = eval_closed("M(v1, v2)", 3).unwrap();
        assert!(!is_in_kernel(&m12, &c).unwrap().in_stabilizer());
        assert!(is_in_kernel(&FreeAutomorphism::identity(3), &c)
            .unwrap()
            .in_kernel());
    }

    #[test]
    fn phi_examples() {
        let c = ctx(3, 1);
        let b = phi_hom_image(&eval_closed("M(v3, v1)", 3).unwrap(), &c).unwrap();
        assert_eq!(b.0, IntMatrix::from_i64_rows(&[&[0, 1]]));
        let z = phi_hom_image(&eval_closed("C(v1, v3)", 3).unwrap(), &c).unwrap();
        assert!(z.0.is_zero());
        assert!(phi_hom_image(&eval_closed("M(v1, v2)", 3).unwrap(), &c).is_err());
    }

    #[test]
    fn quotient_and_split_lift() {
        let c = ctx(4, 2);
        let psi = eval_closed("M(v1, v2^-1) W(v1, v2)", 2).unwrap();
        let lift = split_lift(&psi, &c).unwrap();
        assert_eq!(quotient_automorphism(&lift, &c).unwrap(), psi);
        assert_eq!(
            quotient_word(&Word::from_signed(4, &[1, 3, -2, 4]).unwrap(), 2),
            Word::from_signed(2, &[1, 2]).unwrap()
        );
    }

    #[test]
    fn diagram_small_cases() {
        for (n, k) in [(2, 1), (3, 1), (3, 2), (3, 3)] {
            let r = verify_birman_diagram(&ctx(n, k)).unwrap();
            assert!(r.passed(), "{}", r.to_text());
        }
    }
}
