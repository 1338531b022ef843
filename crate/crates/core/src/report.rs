//! Three-valued verdicts shared by every checking operation.
//!
//! Symbolic zero-testing is undecidable in general, so checks answer
//! `Yes`, `No`, or `Undecided`. `Undecided` is a legitimate outcome and is
//! never silently coerced to either definite answer.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tri {
    Yes,
    No,
    Undecided,
}

impl Tri {
    /// Conjunction: every part must hold.
    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::No, _) | (_, Tri::No) => Tri::No,
            (Tri::Yes, Tri::Yes) => Tri::Yes,
            _ => Tri::Undecided,
        }
    }

    pub fn all(iter: impl IntoIterator<Item = Tri>) -> Tri {
        iter.into_iter().fold(Tri::Yes, Tri::and)
    }

    pub fn is_yes(self) -> bool {
        self == Tri::Yes
    }

    pub fn is_no(self) -> bool {
        self == Tri::No
    }

    /// Negation; `Undecided` stays undecided.
    pub fn negate(self) -> Tri {
        match self {
            Tri::Yes => Tri::No,
            Tri::No => Tri::Yes,
            Tri::Undecided => Tri::Undecided,
        }
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tri::Yes => write!(f, "yes"),
            Tri::No => write!(f, "no"),
            Tri::Undecided => write!(f, "undecided"),
        }
    }
}
