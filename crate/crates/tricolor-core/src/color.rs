//! The three constraint strengths carried by every node and arc.

use core::fmt;

/// Constraint strength of a node or arc.
///
/// Red marks an element as essential, yellow as inferable but inviolable,
/// green as defeasible. Strength is totally ordered `Red > Yellow > Green`;
/// the painter only ever weakens one step at a time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Color {
    Red,
    Yellow,
    Green,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::Red, Color::Yellow, Color::Green];

    /// Rank by strength: red 0, yellow 1, green 2.
    #[inline]
    pub fn rank(self) -> u8 {
        match self {
            Color::Red => 0,
            Color::Yellow => 1,
            Color::Green => 2,
        }
    }

    /// Color-extended subsumption between single elements: a red element
    /// subsumes only a red one, yellow subsumes red and yellow, green
    /// subsumes anything.
    #[inline]
    pub fn subsumes(self, other: Color) -> bool {
        self.rank() >= other.rank()
    }

    /// Color of the unification of two elements: red absorbs everything,
    /// yellow absorbs yellow and green, green survives only against green.
    #[inline]
    pub fn join(self, other: Color) -> Color {
        if self.rank() <= other.rank() {
            self
        } else {
            other
        }
    }

    /// One painter step weaker, if any (the root can never leave red).
    #[inline]
    pub fn weakened(self) -> Option<Color> {
        match self {
            Color::Red => Some(Color::Yellow),
            Color::Yellow => Some(Color::Green),
            Color::Green => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Yellow => "yellow",
            Color::Green => "green",
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn join_is_strength_min() {
        use Color::*;
        assert_eq!(Red.join(Green), Red);
        assert_eq!(Green.join(Red), Red);
        assert_eq!(Yellow.join(Green), Yellow);
        assert_eq!(Green.join(Green), Green);
    }

    #[test]
    fn weakening_is_one_step() {
        assert_eq!(Color::Red.weakened(), Some(Color::Yellow));
        assert_eq!(Color::Yellow.weakened(), Some(Color::Green));
        assert_eq!(Color::Green.weakened(), None);
    }
}
