use std::fmt;

use crate::curve::{Section, WeierstrassSurface};
use crate::mw::{is_two_divisible, MWContext, Verdict};

use super::{decompose, validate_tangency, SplitError, SplitInstance, SplitVerdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Agreement {
    Agree,
    /// The two procedures contradict each other. This indicates a bug.
    Disagree,
    Undecided,
}

impl fmt::Display for Agreement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Agreement::Agree => "AGREE",
            Agreement::Disagree => "DISAGREE",
            Agreement::Undecided => "UNDECIDED",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrosscheckReport {
    pub split: SplitVerdict,
    pub halving: Verdict,
    pub agreement: Agreement,
}

impl fmt::Display for CrosscheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.agreement)?;
        writeln!(f, "decomposition: {}", self.split)?;
        write!(f, "halving: {}", self.halving)
    }
}

/// Runs the decomposition of the branch curve along `x = x(s_plus)` and the
/// halving of `s_plus`, and compares the answers.
pub fn theorem_crosscheck(
    surface: &WeierstrassSurface,
    s_plus: &Section,
    cap: usize,
) -> Result<CrosscheckReport, SplitError> {
    let outside = |e: SplitError| SplitError::OutsideHypotheses(e.to_string());
    surface.check(s_plus).map_err(|e| outside(e.into()))?;
    let inst = SplitInstance::from_section(surface, s_plus).map_err(outside)?;
    let tangency = validate_tangency(&inst).map_err(outside)?;
    if !tangency.pass() {
        return Err(SplitError::OutsideHypotheses(
            tangency.failures().join("; "),
        ));
    }
    let split = decompose(&inst, cap)?;
    let ctx = MWContext::new(surface.clone(), Vec::new(), cap)?;
    let halving = is_two_divisible(&ctx, s_plus)?;
    let agreement = match (split.splits(), &halving) {
        (None, _) | (_, Verdict::UndecidedOverTower(_)) => Agreement::Undecided,
        (Some(true), Verdict::Divisible) | (Some(false), Verdict::NotDivisible) => Agreement::Agree,
        _ => Agreement::Disagree,
    };
    Ok(CrosscheckReport {
        split,
        halving,
        agreement,
    })
}
