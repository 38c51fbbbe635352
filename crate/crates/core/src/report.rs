//! Pass/fail reports produced by the axiom validators.

use std::fmt;

/// One named law together with the outcome of checking it. `witness` holds a
/// rendered counterexample tuple when the law fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawCheck {
    pub law: String,
    pub pass: bool,
    pub witness: Option<String>,
}

impl LawCheck {
    pub fn pass(law: impl Into<String>) -> LawCheck {
        LawCheck {
            law: law.into(),
            pass: true,
            witness: None,
        }
    }

    pub fn fail(law: impl Into<String>, witness: impl Into<String>) -> LawCheck {
        LawCheck {
            law: law.into(),
            pass: false,
            witness: Some(witness.into()),
        }
    }
}

/// Every axiom of a structure's class, checked exhaustively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub subject: String,
    pub checks: Vec<LawCheck>,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>) -> ValidationReport {
        ValidationReport {
            subject: subject.into(),
            checks: Vec::new(),
        }
    }

    pub fn record(&mut self, law: &str, witness: Option<String>) {
        self.checks.push(match witness {
            None => LawCheck::pass(law),
            Some(w) => LawCheck::fail(law, w),
        });
    }

    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&LawCheck> {
        self.checks.iter().find(|c| !c.pass)
    }

    pub fn check(&self, law: &str) -> Option<&LawCheck> {
        self.checks.iter().find(|c| c.law == law)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}:", self.subject)?;
        for c in &self.checks {
            if c.pass {
                writeln!(f, "  ok   {}", c.law)?;
            } else {
                writeln!(
                    f,
                    "  FAIL {} witness={}",
                    c.law,
                    c.witness.as_deref().unwrap_or("-")
                )?;
            }
        }
        Ok(())
    }
}
