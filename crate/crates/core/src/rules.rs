//! The three recitation rules every clip is labelled for.

use std::fmt;

use serde::{Deserialize, Serialize};

pub const N_RULES: usize = 3;

/// Per-rule binary labels, `1` = correct pronunciation, `0` = incorrect.
///
/// Indexed in [`Rule::ALL`] order.
pub type Labels = [u8; N_RULES];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rule {
    /// Madd munfasil.
    SeparateStretching,
    /// Noon mushaddad.
    TightNoon,
    /// Ikhfa.
    Hide,
}

impl Rule {
    pub const ALL: [Rule; N_RULES] = [Rule::SeparateStretching, Rule::TightNoon, Rule::Hide];

    pub fn index(self) -> usize {
        match self {
            Rule::SeparateStretching => 0,
            Rule::TightNoon => 1,
            Rule::Hide => 2,
        }
    }

    /// Column name used in manifests.
    pub fn column(self) -> &'static str {
        match self {
            Rule::SeparateStretching => "madd_separate",
            Rule::TightNoon => "tight_noon",
            Rule::Hide => "hide",
        }
    }

    /// Short suffix used in curve files.
    pub fn short(self) -> &'static str {
        match self {
            Rule::SeparateStretching => "madd",
            Rule::TightNoon => "noon",
            Rule::Hide => "hide",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Rule::SeparateStretching => "Separate Stretching",
            Rule::TightNoon => "Tight Noon",
            Rule::Hide => "Hide",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.display_name())
    }
}
