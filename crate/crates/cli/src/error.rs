use std::fmt;

use stratakit_core::canon::CanonError;
use stratakit_core::category::CategoryError;
use stratakit_core::charney_lee::ClError;
use stratakit_core::clutching::ClutchError;
use stratakit_core::enumerate::EnumError;
use stratakit_core::formats::FormatError;
use stratakit_core::graph::GraphError;
use stratakit_core::homology::HomologyError;
use stratakit_core::perm::GroupError;
use stratakit_core::poset::PosetError;
use stratakit_core::twisted::TwError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Malformed input or a failed validation.
    Invalid,
    /// A search or size budget was exceeded.
    Budget,
}

#[derive(Debug)]
pub struct CliError {
    pub kind: Kind,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> CliError {
        CliError { kind: Kind::Invalid, message: message.into() }
    }

    pub fn exit_code(&self) -> u8 {
        match self.kind {
            Kind::Invalid => 1,
            Kind::Budget => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

fn over_budget_canon(e: &CanonError) -> bool {
    matches!(e, CanonError::BudgetExceeded(_))
}

fn over_budget_category(e: &CategoryError) -> bool {
    matches!(e, CategoryError::TooLarge { .. } | CategoryError::LimitBudget(_))
}

fn over_budget_group(e: &GroupError) -> bool {
    matches!(e, GroupError::TooLarge(_))
}

fn over_budget_enum(e: &EnumError) -> bool {
    match e {
        EnumError::BudgetExceeded(_) => true,
        EnumError::Canon(c) => over_budget_canon(c),
        _ => false,
    }
}

fn over_budget_cl(e: &ClError) -> bool {
    matches!(e, ClError::Category(c) if over_budget_category(c))
}

fn over_budget_tw(e: &TwError) -> bool {
    match e {
        TwError::Cl(c) => over_budget_cl(c),
        TwError::Category(c) => over_budget_category(c),
        TwError::Homology(HomologyError::BudgetExceeded(_)) => true,
        TwError::CoverTooLarge(_) => true,
        _ => false,
    }
}

fn over_budget_format(e: &FormatError) -> bool {
    match e {
        FormatError::Group(g) => over_budget_group(g),
        FormatError::Cl(c) => over_budget_cl(c),
        _ => false,
    }
}

fn over_budget_clutch(e: &ClutchError) -> bool {
    match e {
        ClutchError::Enum(e) => over_budget_enum(e),
        ClutchError::Canon(c) => over_budget_canon(c),
        ClutchError::Group(g) => over_budget_group(g),
        _ => false,
    }
}

macro_rules! classify {
    ($($ty:ty => $test:expr),* $(,)?) => {
        $(impl From<$ty> for CliError {
            fn from(e: $ty) -> CliError {
                let test: fn(&$ty) -> bool = $test;
                let kind = if test(&e) { Kind::Budget } else { Kind::Invalid };
                CliError { kind, message: e.to_string() }
            }
        })*
    };
}

classify! {
    CanonError => over_budget_canon,
    CategoryError => over_budget_category,
    GroupError => over_budget_group,
    EnumError => over_budget_enum,
    ClError => over_budget_cl,
    TwError => over_budget_tw,
    FormatError => over_budget_format,
    ClutchError => over_budget_clutch,
    HomologyError => |e| matches!(e, HomologyError::BudgetExceeded(_)),
    GraphError => |_| false,
    PosetError => |_| false,
}
