//! Command-line front end. [`run`] does all the work and returns the exit
//! code and output text, so the binary is a thin wrapper and tests can drive
//! commands directly.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::automorphism::FreeAutomorphism;
use crate::birman::{
    is_in_kernel, kernel_generators, phi_hom_image, verify_birman_diagram, StabilizerContext,
};
use crate::bn::{serialize, truncated_bn};
use crate::error::{Error, Result};
use crate::expr::{AutExpr, Bindings, CommutatorReading, EvalOptions};
use crate::lift::{complete_basis_lift, matrix_to_automorphism};
use crate::relations::{verify_edge_property, verify_gersten, verify_identities, verify_table};
use crate::report::VerificationReport;
use crate::word::Word;
use crate::IntMatrix;

/// Exit status and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    /// 0: all checks passed; 1: verification failures; 2: usage or input error.
    pub exit_code: i32,
    pub stdout: String,
    /// Diagnostics and timing; never part of the payload.
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(
    name = "freeaut",
    version,
    about = "Free-group automorphism verifiers and B_n(Z) builders"
)]
struct Cli {
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for the verifiers.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Reading {
    Left,
    Right,
}

impl From<Reading> for CommutatorReading {
    fn from(r: Reading) -> Self {
        match r {
            Reading::Left => CommutatorReading::Left,
            Reading::Right => CommutatorReading::Right,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the seven relation families of the SAut(F_n) presentation.
    VerifyGersten {
        #[arg(long)]
        rank: usize,
    },
    /// Check the conjugation table for the IA_n generators.
    VerifyTable {
        #[arg(long)]
        rank: usize,
        /// Also check that uncovered generators commute.
        #[arg(long)]
        defaults: bool,
        #[arg(long, default_value_t = 5)]
        default_rank: usize,
        /// Side on which K(c,a,b) multiplies by [a,b].
        #[arg(long, value_enum, default_value_t = Reading::Left)]
        reading: Reading,
    },
    /// Check the Mul', commutator and Con = Mul Mul identities.
    VerifyIdentities {
        #[arg(long)]
        rank: usize,
    },
    /// Check that each generator moves v1 to a conjugate or a partial-basis partner.
    VerifyEdgeProperty {
        #[arg(long)]
        rank: usize,
    },
    /// Test kernel membership of the kernel generators, or of one automorphism.
    KernelCheck {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        prefix: usize,
        /// Automorphism text (`v<i> -> w` and `v<i> <- w` lines) or a generator expression.
        #[arg(long)]
        aut: Option<PathBuf>,
    },
    /// Check the stabilizer / kernel / quotient diagram against GL_n(Z).
    BirmanDiagram {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        prefix: usize,
    },
    /// Lift an integer matrix to a product of generators.
    LiftMatrix {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        prefix: usize,
    },
    /// Complete a certified partial basis with prescribed abelianization.
    CompleteBasis {
        #[arg(long)]
        file: PathBuf,
    },
    /// Build a truncation of B_n(Z) or of a link in it.
    BnBuild {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        bound: i64,
        #[arg(long, default_value_t = 0)]
        link: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Integral homology of a truncation of B_n(Z).
    BnHomology {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        bound: i64,
        #[arg(long, default_value_t = 0)]
        link: usize,
        #[arg(long, default_value_t = 2)]
        max_degree: usize,
        /// Report reduced homology.
        #[arg(long)]
        reduced: bool,
    },
    /// Evaluate a generator expression and print basis images.
    WordEval {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        expr: String,
        #[arg(long, value_enum, default_value_t = Reading::Left)]
        reading: Reading,
    },
}

struct Output {
    passed: bool,
    text: String,
    json: serde_json::Value,
}

impl Output {
    fn report(r: &VerificationReport) -> Output {
        Output {
            passed: r.passed(),
            text: r.to_text(),
            json: serde_json::to_value(r).expect("report serializes"),
        }
    }
}

/// Parse arguments (including the program name) and execute.
pub fn run<I, T>(args: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                CommandResult {
                    exit_code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                CommandResult {
                    exit_code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let start = Instant::now();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.max(1))
        .build()
    {
        Ok(p) => p,
        Err(e) => return usage_error(&format!("thread pool: {e}")),
    };
    let result = pool.install(|| execute(&cli.command));
    let elapsed = format!("elapsed {:.3}s\n", start.elapsed().as_secs_f64());
    match result {
        Ok(out) => {
            let mut stdout = if cli.json {
                serde_json::to_string_pretty(&out.json).expect("json")
            } else {
                out.text
            };
            if !stdout.ends_with('\n') {
                stdout.push('\n');
            }
            CommandResult {
                exit_code: if out.passed { 0 } else { 1 },
                stdout,
                stderr: elapsed,
            }
        }
        Err(e) => usage_error(&e.to_string()),
    }
}

fn usage_error(msg: &str) -> CommandResult {
    CommandResult {
        exit_code: 2,
        stdout: String::new(),
        stderr: format!("error: {msg}\n"),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn execute(cmd: &Command) -> Result<Output> {
    match cmd {
        Command::VerifyGersten { rank } => Ok(Output::report(&verify_gersten(*rank)?)),
        Command::VerifyTable {
            rank,
            defaults,
            default_rank,
            reading,
        } => Ok(Output::report(&verify_table(
            *rank,
            *defaults,
            *default_rank,
            (*reading).into(),
        )?)),
        Command::VerifyIdentities { rank } => Ok(Output::report(&verify_identities(*rank)?)),
        Command::VerifyEdgeProperty { rank } => Ok(Output::report(&verify_edge_property(*rank)?)),
        Command::KernelCheck { rank, prefix, aut } => kernel_check(*rank, *prefix, aut.as_deref()),
        Command::BirmanDiagram { rank, prefix } => {
            let ctx = StabilizerContext::new(*rank, *prefix)?;
            Ok(Output::report(&verify_birman_diagram(&ctx)?))
        }
        Command::LiftMatrix { file, prefix } => lift_matrix(file, *prefix),
        Command::CompleteBasis { file } => complete_basis(file),
        Command::BnBuild {
            rank,
            bound,
            link,
            out,
        } => bn_build(*rank, *bound, *link, out.as_deref()),
        Command::BnHomology {
            rank,
            bound,
            link,
            max_degree,
            reduced,
        } => bn_homology(*rank, *bound, *link, *max_degree, *reduced),
        Command::WordEval {
            rank,
            expr,
            reading,
        } => word_eval(*rank, expr, (*reading).into()),
    }
}

/// Automorphism text if the input has `->` lines, otherwise a generator expression.
fn parse_automorphism(text: &str, rank: usize) -> Result<FreeAutomorphism> {
    let phi = if text.contains("->") {
        FreeAutomorphism::parse(text)?
    } else {
        let body: String = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .collect::<Vec<_>>()
            .join(" ");
        AutExpr::parse(&body)?.eval(rank, &Bindings::new(), EvalOptions::default())?
    };
    if phi.rank() != rank {
        return Err(Error::RankMismatch {
            left: rank,
            right: phi.rank(),
        });
    }
    Ok(phi)
}

#[derive(Serialize)]
struct ConditionRecord {
    automorphism: String,
    condition: &'static str,
    index: usize,
    holds: bool,
}

fn kernel_check(rank: usize, prefix: usize, aut: Option<&Path>) -> Result<Output> {
    let ctx = StabilizerContext::new(rank, prefix)?;
    let subjects: Vec<(String, FreeAutomorphism)> = match aut {
        Some(p) => {
            let phi = parse_automorphism(&read(p)?, rank)?;
            vec![(p.display().to_string(), phi)]
        }
        None => kernel_generators(&ctx)
            .into_iter()
            .map(|(s, phi)| (s.to_string(), phi))
            .collect(),
    };
    let mut records = Vec::new();
    let mut blocks = Vec::new();
    let mut text = format!("kernel membership, rank {rank}, prefix {prefix}\n");
    let mut passed = true;
    for (name, phi) in &subjects {
        let m = is_in_kernel(phi, &ctx)?;
        for (i, &h) in m.stabilizer.iter().enumerate() {
            records.push(ConditionRecord {
                automorphism: name.clone(),
                condition: "stabilizer",
                index: i + 1,
                holds: h,
            });
        }
        for (j, &h) in m.quotient_identity.iter().enumerate() {
            records.push(ConditionRecord {
                automorphism: name.clone(),
                condition: "quotient_identity",
                index: prefix + j + 1,
                holds: h,
            });
        }
        passed &= m.in_kernel();
        let block = if m.in_kernel() {
            phi_hom_image(phi, &ctx).ok().map(|b| b.0.to_rows())
        } else {
            None
        };
        blocks.push(json!({
            "automorphism": name,
            "in_kernel": m.in_kernel(),
            "hom_block": block.as_ref().map(|rows| rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()),
        }));
    }
    for r in &records {
        text.push_str(&format!(
            "  {:<24} {:<18} v{:<3} {}\n",
            r.automorphism,
            r.condition,
            r.index,
            if r.holds { "yes" } else { "no" }
        ));
    }
    for b in &blocks {
        if let Some(rows) = b["hom_block"].as_array() {
            let rows: Vec<String> = rows
                .iter()
                .map(|r| {
                    r.as_array()
                        .unwrap()
                        .iter()
                        .map(|x| x.as_str().unwrap().to_string())
                        .collect::<Vec<_>>()
                        .join(" ")
                })
                .collect();
            text.push_str(&format!(
                "  Φ({}) = [{}]\n",
                b["automorphism"].as_str().unwrap(),
                rows.join("; ")
            ));
        }
    }
    text.push_str(if passed {
        "  all in kernel: PASS\n"
    } else {
        "  not all in kernel: FAIL\n"
    });
    Ok(Output {
        passed,
        text,
        json: json!({ "records": records, "summary": blocks, "passed": passed }),
    })
}

fn automorphism_json(phi: &FreeAutomorphism) -> serde_json::Value {
    json!({
        "rank": phi.rank(),
        "images": phi.images().iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "inverse_images": phi.inverse_images().iter().map(|w| w.to_string()).collect::<Vec<_>>(),
    })
}

fn matrix_json(m: &IntMatrix) -> serde_json::Value {
    json!(m
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn lift_matrix(file: &Path, prefix: usize) -> Result<Output> {
    let a = IntMatrix::parse(&read(file)?)?;
    let lift = matrix_to_automorphism(&a, prefix)?;
    let phi = &lift.automorphism;
    let round_trip = phi.abelianize() == a;
    let fixes = (1..=prefix).all(|i| phi.image(i) == &Word::generator(phi.rank(), i));
    let passed = round_trip && fixes;
    let text = format!(
        "# factors: {}\n# abelianization matches: {}\n# fixes v1..v{}: {}\n{}",
        lift.expression(),
        round_trip,
        prefix,
        fixes,
        phi
    );
    Ok(Output {
        passed,
        text,
        json: json!({
            "factors": lift.factors.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "automorphism": automorphism_json(phi),
            "abelianization_matches": round_trip,
            "fixes_prefix": fixes,
        }),
    })
}

/// Sections `[certificate]`, `[partial]` (one word per line) and `[targets]`
/// (an integer matrix whose columns are the prescribed abelianizations).
fn parse_completion_file(text: &str) -> Result<(FreeAutomorphism, Vec<String>, IntMatrix)> {
    let mut sections: Vec<(String, String)> = Vec::new();
    for line in text.lines() {
        let t = line.trim();
        if t.starts_with('[') && t.ends_with(']') {
            sections.push((t[1..t.len() - 1].trim().to_string(), String::new()));
        } else if let Some((_, body)) = sections.last_mut() {
            body.push_str(line);
            body.push('\n');
        } else if !t.is_empty() && !t.starts_with('#') {
            return Err(Error::Parse("content before the first section".into()));
        }
    }
    let get = |name: &str| {
        sections
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, b)| b.as_str())
            .ok_or_else(|| Error::Parse(format!("missing [{name}] section")))
    };
    let cert = FreeAutomorphism::parse(get("certificate")?)?;
    let partial = get("partial")?
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim().to_string())
        .filter(|l| !l.is_empty())
        .collect();
    let targets = IntMatrix::parse(get("targets")?)?;
    Ok((cert, partial, targets))
}

fn complete_basis(file: &Path) -> Result<Output> {
    let (cert, partial_text, targets) = parse_completion_file(&read(file)?)?;
    let n = cert.rank();
    let partial: Vec<Word> = partial_text
        .iter()
        .map(|s| Word::parse(s, n))
        .collect::<Result<_>>()?;
    let c = complete_basis_lift(&partial, &cert, &targets)?;
    let k = partial.len();
    let ab = c.certificate.abelianize();
    let extends = c.basis[..k] == partial[..];
    let matches = (0..n - k).all(|j| ab.column(k + j) == targets.column(j));
    let passed = extends && matches;
    let mut text = String::from("# basis\n");
    for w in &c.basis {
        text.push_str(&format!("{w}\n"));
    }
    text.push_str(&format!(
        "# extends partial basis: {extends}\n# abelianization matches targets: {matches}\n# certificate\n{}",
        c.certificate
    ));
    Ok(Output {
        passed,
        text,
        json: json!({
            "basis": c.basis.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
            "certificate": automorphism_json(&c.certificate),
            "extends_partial": extends,
            "abelianization_matches": matches,
        }),
    })
}

fn f_vector<V: Ord + Clone + Send + Sync>(c: &crate::complex::SimplicialComplex<V>) -> Vec<usize> {
    (0..=c.dim().unwrap_or(0)).map(|d| c.count(d)).collect()
}

fn describe_truncation(rank: usize, bound: i64, link: usize) -> String {
    if link == 0 {
        format!("B_{rank}(Z) truncated to max-norm ≤ {bound}")
    } else {
        format!("link of e1..e{link} in B_{rank}(Z), truncated to max-norm ≤ {bound}")
    }
}

fn bn_build(rank: usize, bound: i64, link: usize, out: Option<&Path>) -> Result<Output> {
    let c = truncated_bn(rank, bound, link)?;
    let fv = f_vector(&c);
    let body = serialize(&c);
    let mut text = format!(
        "# {}\n# f-vector: {}\n",
        describe_truncation(rank, bound, link),
        fv.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    );
    match out {
        Some(p) => {
            fs::write(p, &body).map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?;
            text.push_str(&format!("# maximal simplices written to {}\n", p.display()));
        }
        None => text.push_str(&body),
    }
    Ok(Output {
        passed: true,
        text,
        json: json!({
            "rank": rank,
            "bound": bound,
            "link": link,
            "f_vector": fv,
            "maximal_simplices": out.is_none().then(|| body.lines().map(str::to_string).collect::<Vec<_>>()),
        }),
    })
}

const TRUNCATION_NOTE: &str =
    "computed on a finite truncation of an infinite complex: evidence at this bound, not a proof";

fn bn_homology(
    rank: usize,
    bound: i64,
    link: usize,
    max_degree: usize,
    reduced: bool,
) -> Result<Output> {
    let c = truncated_bn(rank, bound, link)?;
    let fv = f_vector(&c);
    let h = c.homology(max_degree, reduced);
    let mut text = format!(
        "{}\nf-vector: {}\n{} homology:\n",
        describe_truncation(rank, bound, link),
        fv.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" "),
        if reduced { "reduced" } else { "unreduced" }
    );
    for g in &h {
        text.push_str(&format!("  {g}\n"));
    }
    text.push_str(&format!("note: {TRUNCATION_NOTE}\n"));
    Ok(Output {
        passed: true,
        text,
        json: json!({
            "rank": rank,
            "bound": bound,
            "link": link,
            "f_vector": fv,
            "reduced": reduced,
            "homology": h,
            "note": TRUNCATION_NOTE,
        }),
    })
}

fn word_eval(rank: usize, expr: &str, reading: CommutatorReading) -> Result<Output> {
    let phi = AutExpr::parse(expr)?.eval(rank, &Bindings::new(), EvalOptions { reading })?;
    let class = phi.classify();
    let ab = phi.abelianize();
    let text = format!("{phi}# class: {class:?}\n# abelianization:\n{ab}");
    let mut json = automorphism_json(&phi);
    json["classification"] = json!(class);
    json["abelianization"] = matrix_json(&ab);
    Ok(Output {
        passed: true,
        text,
        json,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> CommandResult {
        run(std::iter::once("freeaut").chain(args.iter().copied()))
    }

    #[test]
    fn rank_two_presentation_is_a_usage_error() {
        let r = run_args(&["verify-gersten", "--rank", "2"]);
        assert_eq!(r.exit_code, 2);
        assert!(r.stderr.contains("presentation requires n ≥ 3"));
    }

    #[test]
    fn unknown_subcommand() {
        assert_eq!(run_args(&["frobnicate"]).exit_code, 2);
        assert_eq!(
            run_args(&["verify-gersten", "--rank", "3", "--bogus"]).exit_code,
            2
        );
    }

    #[test]
    fn word_eval_prints_images() {
        let r = run_args(&["word-eval", "--rank", "3", "--expr", "M(v1, [v2, v3])"]);
        assert_eq!(r.exit_code, 0);
        assert!(r.stdout.starts_with("v1 -> v2 v3 v2^-1 v3^-1 v1\n"));
        assert!(r.stdout.contains("# class: IA"));
    }

    #[test]
    fn homology_rank_two() {
        let r = run_args(&["bn-homology", "--rank", "2", "--bound", "1", "--json"]);
        assert_eq!(r.exit_code, 0);
        let v: serde_json::Value = serde_json::from_str(&r.stdout).unwrap();
        assert_eq!(v["homology"][0]["betti"], 1);
    }
}
