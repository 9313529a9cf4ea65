//! Verification reports shared by the exhaustive checkers.

use std::fmt::Write as _;

use serde::Serialize;

use crate::automorphism::FreeAutomorphism;

/// One failed instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub family: String,
    pub binding: String,
    /// First basis letter whose images differ, when the check compares two automorphisms.
    pub letter: Option<usize>,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyCount {
    pub family: String,
    pub instances: usize,
    pub failures: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub title: String,
    pub families: Vec<FamilyCount>,
    pub failures: Vec<Failure>,
    /// Observations that are not failures, such as rows passing only under an alternative reading.
    pub flags: Vec<String>,
    pub notes: Vec<String>,
}

/// The outcome of checking one instance, before it is recorded.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub family: String,
    pub binding: String,
    pub failure: Option<Failure>,
}

impl Outcome {
    pub fn pass(family: &str, binding: String) -> Outcome {
        Outcome {
            family: family.to_string(),
            binding,
            failure: None,
        }
    }

    pub fn fail(family: &str, binding: String, detail: String) -> Outcome {
        Outcome {
            family: family.to_string(),
            failure: Some(Failure {
                family: family.to_string(),
                binding: binding.clone(),
                letter: None,
                lhs: None,
                rhs: None,
                detail: Some(detail),
            }),
            binding,
        }
    }

    /// Compare two automorphisms; on mismatch record the first differing basis image.
    pub fn compare(
        family: &str,
        binding: String,
        lhs: &FreeAutomorphism,
        rhs: &FreeAutomorphism,
    ) -> Outcome {
        match lhs.first_difference(rhs) {
            None => Outcome::pass(family, binding),
            Some(i) => Outcome {
                family: family.to_string(),
                failure: Some(Failure {
                    family: family.to_string(),
                    binding: binding.clone(),
                    letter: Some(i),
                    lhs: Some(lhs.image(i).to_string()),
                    rhs: Some(rhs.image(i).to_string()),
                    detail: None,
                }),
                binding,
            },
        }
    }

    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

impl VerificationReport {
    pub fn new(title: impl Into<String>) -> Self {
        VerificationReport {
            title: title.into(),
            ..Default::default()
        }
    }

    /// Register a family so it is listed even with zero instances.
    pub fn family(&mut self, family: &str) -> &mut FamilyCount {
        if let Some(pos) = self.families.iter().position(|f| f.family == family) {
            return &mut self.families[pos];
        }
        self.families.push(FamilyCount {
            family: family.to_string(),
            instances: 0,
            failures: 0,
        });
        self.families.last_mut().unwrap()
    }

    pub fn record(&mut self, outcome: Outcome) {
        let fc = self.family(&outcome.family);
        fc.instances += 1;
        if let Some(f) = outcome.failure {
            fc.failures += 1;
            self.failures.push(f);
        }
    }

    pub fn extend(&mut self, outcomes: impl IntoIterator<Item = Outcome>) {
        for o in outcomes {
            self.record(o);
        }
    }

    pub fn merge(&mut self, other: VerificationReport) {
        for f in other.families {
            let fc = self.family(&f.family);
            fc.instances += f.instances;
            fc.failures += f.failures;
        }
        self.failures.extend(other.failures);
        self.flags.extend(other.flags);
        self.notes.extend(other.notes);
    }

    pub fn total(&self) -> usize {
        self.families.iter().map(|f| f.instances).sum()
    }

    pub fn instances(&self, family: &str) -> usize {
        self.families
            .iter()
            .find(|f| f.family == family)
            .map_or(0, |f| f.instances)
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.title);
        for f in &self.families {
            let _ = writeln!(
                s,
                "  {:<28} {:>8} instances  {:>6} failures",
                f.family, f.instances, f.failures
            );
        }
        let _ = writeln!(
            s,
            "  total {} instances, {} failures: {}",
            self.total(),
            self.failures.len(),
            if self.passed() { "PASS" } else { "FAIL" }
        );
        for fl in &self.flags {
            let _ = writeln!(s, "  flag: {fl}");
        }
        for n in &self.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        for f in &self.failures {
            let _ = write!(s, "  FAIL {} [{}]", f.family, f.binding);
            if let (Some(i), Some(l), Some(r)) = (f.letter, &f.lhs, &f.rhs) {
                let _ = write!(s, " v{i}: {l} != {r}");
            }
            if let Some(d) = &f.detail {
                let _ = write!(s, " {d}");
            }
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::eval_closed;

    #[test]
    fn records_failures_with_first_difference() {
        let a = eval_closed("M(v1, v2)", 2).unwrap();
        let b = eval_closed("Mr(v1, v2)", 2).unwrap();
        let mut r = VerificationReport::new("demo");
        r.record(Outcome::compare("same", "x".into(), &a, &a));
        r.record(Outcome::compare("diff", "y".into(), &a, &b));
        assert_eq!(r.total(), 2);
        assert!(!r.passed());
        let f = &r.failures[0];
        assert_eq!(f.letter, Some(1));
        assert_eq!(f.lhs.as_deref(), Some("v2 v1"));
        assert!(r.to_text().contains("FAIL diff [y] v1: v2 v1 != v1 v2"));
        assert!(r.to_json().contains("\"family\": \"diff\""));
    }
}
