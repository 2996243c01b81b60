use std::fmt;

use super::boolval::BoolVal;

/// The five-point sign lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Bot,
    Neg,
    Zero,
    Pos,
    Top,
}

impl Sign {
    pub const ALL: [Sign; 5] = [Sign::Bot, Sign::Neg, Sign::Zero, Sign::Pos, Sign::Top];

    pub fn of(n: i64) -> Sign {
        match n.signum() {
            -1 => Sign::Neg,
            0 => Sign::Zero,
            _ => Sign::Pos,
        }
    }

    pub fn alpha(ns: impl IntoIterator<Item = i64>) -> Sign {
        ns.into_iter().fold(Sign::Bot, |acc, n| acc.join(Sign::of(n)))
    }

    pub fn contains(self, n: i64) -> bool {
        Sign::of(n).leq(self)
    }

    pub fn leq(self, other: Sign) -> bool {
        self == other || self == Sign::Bot || other == Sign::Top
    }

    pub fn join(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Bot, x) | (x, Sign::Bot) => x,
            (x, y) if x == y => x,
            _ => Sign::Top,
        }
    }

    pub fn meet(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Top, x) | (x, Sign::Top) => x,
            (x, y) if x == y => x,
            _ => Sign::Bot,
        }
    }

    /// Integers of the given range that the sign describes.
    pub fn gamma(self, lo: i64, hi: i64) -> Vec<i64> {
        (lo..=hi).filter(|&n| self.contains(n)).collect()
    }

    pub fn neg(self) -> Sign {
        match self {
            Sign::Neg => Sign::Pos,
            Sign::Pos => Sign::Neg,
            x => x,
        }
    }

    pub fn add(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Bot, _) | (_, Sign::Bot) => Sign::Bot,
            (Sign::Zero, x) | (x, Sign::Zero) => x,
            (x, y) if x == y => x,
            _ => Sign::Top,
        }
    }

    pub fn sub(self, other: Sign) -> Sign {
        self.add(other.neg())
    }

    pub fn mul(self, other: Sign) -> Sign {
        match (self, other) {
            (Sign::Bot, _) | (_, Sign::Bot) => Sign::Bot,
            (Sign::Zero, _) | (_, Sign::Zero) => Sign::Zero,
            (Sign::Top, _) | (_, Sign::Top) => Sign::Top,
            (x, y) if x == y => Sign::Pos,
            _ => Sign::Neg,
        }
    }

    /// Bounds of the described integers; `None` means unbounded.
    fn bounds(self) -> (Option<i64>, Option<i64>) {
        match self {
            Sign::Neg => (None, Some(-1)),
            Sign::Zero => (Some(0), Some(0)),
            Sign::Pos => (Some(1), None),
            _ => (None, None),
        }
    }

    pub fn less(self, other: Sign) -> BoolVal {
        if self == Sign::Bot || other == Sign::Bot {
            return BoolVal::BOT;
        }
        let (lo_a, hi_a) = self.bounds();
        let (lo_b, hi_b) = other.bounds();
        let surely_true = matches!((hi_a, lo_b), (Some(h), Some(l)) if h < l);
        let surely_false = matches!((lo_a, hi_b), (Some(l), Some(h)) if l >= h);
        BoolVal::from_flags(!surely_false, !surely_true)
    }

    pub fn greater(self, other: Sign) -> BoolVal {
        other.less(self)
    }

    pub fn eq_verdict(self, other: Sign) -> BoolVal {
        if self == Sign::Bot || other == Sign::Bot {
            return BoolVal::BOT;
        }
        if self == Sign::Zero && other == Sign::Zero {
            return BoolVal::TRUE;
        }
        if self.meet(other) == Sign::Bot {
            return BoolVal::FALSE;
        }
        BoolVal::TOP
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Sign::Top => "⊤",
            Sign::Pos => "+",
            Sign::Neg => "−",
            Sign::Zero => "0",
            Sign::Bot => "⊥",
        }
    }

    /// Leaf notation used when printing abstract labels.
    pub fn leaf(self) -> &'static str {
        match self {
            Sign::Top => "Z",
            Sign::Pos => "Z+",
            Sign::Neg => "Z-",
            Sign::Zero => "0",
            Sign::Bot => "∅",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}
