//! Small textbook trees bundled with the crate, as tree-file text.

/// `x1 ∨ x2`.
pub const FIG1A: &str = include_str!("../fixtures/fig1a.json");
/// `(x1 ∧ x2) ∨ (x3 ∧ x4)` as learned from all 16 points.
pub const FIG1B: &str = include_str!("../fixtures/fig1b.json");
/// Tree where an instance has a PI-explanation that is not part of any path.
pub const FIG3: &str = include_str!("../fixtures/fig3.json");
/// PlayTennis tree with a multi-valued `Outlook` edge.
pub const PLAYTENNIS: &str = include_str!("../fixtures/playtennis.json");
/// Restaurant-waiting tree (Russell & Norvig).
pub const RUSSELL_NORVIG: &str = include_str!("../fixtures/russell_norvig.json");
/// Article-reading tree (Poole & Mackworth).
pub const POOLE_MACKWORTH: &str = include_str!("../fixtures/poole_mackworth.json");
/// Cross/circle tree over two thresholds (Zhou).
pub const ZHOU: &str = include_str!("../fixtures/zhou.json");
/// A single leaf over an empty feature space.
pub const CONSTANT: &str = include_str!("../fixtures/constant.json");

/// Every bundled fixture with its file stem.
pub const ALL: &[(&str, &str)] = &[
    ("fig1a", FIG1A),
    ("fig1b", FIG1B),
    ("fig3", FIG3),
    ("playtennis", PLAYTENNIS),
    ("russell_norvig", RUSSELL_NORVIG),
    ("poole_mackworth", POOLE_MACKWORTH),
    ("zhou", ZHOU),
    ("constant", CONSTANT),
];
