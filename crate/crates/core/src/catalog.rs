//! Named collections used throughout the examples and tests.

use crate::collection::{collection, PatternCollection};

/// `{1342765, 152364}`.
pub fn pi1() -> PatternCollection {
    collection(&["1342765", "152364"])
}

/// `{132679485}`, self-overlapping in 1 and 3 entries.
pub fn pi2() -> PatternCollection {
    collection(&["132679485"])
}

/// `{1576243, 13254}`.
pub fn pi3() -> PatternCollection {
    collection(&["1576243", "13254"])
}

/// `{12354, 132465}`.
pub fn pi4() -> PatternCollection {
    collection(&["12354", "132465"])
}

/// Six length-7 patterns with self-overlaps of lengths 1 and 2 and equal
/// sets of first two and last two entries.
pub const SEVEN_FAMILY: [&str; 6] = ["1734526", "1735426", "1743526", "1745326", "1753426", "1754326"];

/// Two length-9 patterns with self-overlaps of lengths 1 and 4.
pub const NINE_PAIR: [&str; 2] = ["143265987", "134265897"];

/// Four monotone length-9 patterns.
pub const MONOTONE_FAMILY: [&str; 4] = ["143265987", "134265897", "143256987", "134256897"];

/// Four two-pattern collections listed as mutually equivalent. Two of
/// them are not reduced: 14562 standardizes to 13452 and 14652 to 13542.
pub const TWO_PATTERN_FAMILY: [[&str; 2]; 4] = [
    ["145623", "13452"],
    ["145623", "13542"],
    ["146523", "13452"],
    ["146523", "13542"],
];
