//! Pass/fail records shared by every verification routine.

use serde::Serialize;

use crate::arith::Field;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    /// Stable relation name, e.g. `wilcox_yu_linear`.
    pub relation: String,
    /// Relation index (ℓ, a, j, ...) when the relation is a family.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<i64>,
    pub passed: bool,
    /// Printed residual; `"0"` when the relation holds.
    pub residual: String,
}

impl Check {
    pub fn from_residual<F: Field>(relation: &str, index: Option<i64>, residual: &F) -> Self {
        let passed = residual.is_zero();
        Self {
            relation: relation.to_string(),
            index,
            passed,
            residual: if passed { "0".into() } else { residual.to_string() },
        }
    }

    /// A check whose residual is a matrix: passes iff every entry vanishes.
    pub fn from_entries<'a, F: Field, I: IntoIterator<Item = &'a F>>(
        relation: &str,
        index: Option<i64>,
        entries: I,
    ) -> Self {
        let bad = entries.into_iter().find(|x| !x.is_zero());
        Self {
            relation: relation.to_string(),
            index,
            passed: bad.is_none(),
            residual: bad.map_or_else(|| "0".into(), |x| format!("entry {x}")),
        }
    }

    pub fn boolean(relation: &str, index: Option<i64>, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            relation: relation.to_string(),
            index,
            passed,
            residual: if passed { "0".into() } else { detail.into() },
        }
    }

    pub fn label(&self) -> String {
        match self.index {
            Some(i) => format!("{}[{}]", self.relation, i),
            None => self.relation.clone(),
        }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}
