use std::fmt;

/// A subset of {true, false}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoolVal {
    pub can_true: bool,
    pub can_false: bool,
}

impl BoolVal {
    pub const BOT: BoolVal = BoolVal { can_true: false, can_false: false };
    pub const TRUE: BoolVal = BoolVal { can_true: true, can_false: false };
    pub const FALSE: BoolVal = BoolVal { can_true: false, can_false: true };
    pub const TOP: BoolVal = BoolVal { can_true: true, can_false: true };
    pub const ALL: [BoolVal; 4] = [BoolVal::BOT, BoolVal::TRUE, BoolVal::FALSE, BoolVal::TOP];

    pub fn from_flags(can_true: bool, can_false: bool) -> BoolVal {
        BoolVal { can_true, can_false }
    }

    pub fn of(b: bool) -> BoolVal {
        if b {
            BoolVal::TRUE
        } else {
            BoolVal::FALSE
        }
    }

    pub fn alpha(bs: impl IntoIterator<Item = bool>) -> BoolVal {
        bs.into_iter().fold(BoolVal::BOT, |acc, b| acc.join(BoolVal::of(b)))
    }

    pub fn contains(self, b: bool) -> bool {
        if b {
            self.can_true
        } else {
            self.can_false
        }
    }

    pub fn is_bot(self) -> bool {
        self == BoolVal::BOT
    }

    pub fn leq(self, other: BoolVal) -> bool {
        (!self.can_true || other.can_true) && (!self.can_false || other.can_false)
    }

    pub fn join(self, other: BoolVal) -> BoolVal {
        BoolVal::from_flags(self.can_true || other.can_true, self.can_false || other.can_false)
    }

    pub fn meet(self, other: BoolVal) -> BoolVal {
        BoolVal::from_flags(self.can_true && other.can_true, self.can_false && other.can_false)
    }

    pub fn not(self) -> BoolVal {
        BoolVal::from_flags(self.can_false, self.can_true)
    }

    pub fn and(self, other: BoolVal) -> BoolVal {
        if self.is_bot() || other.is_bot() {
            return BoolVal::BOT;
        }
        BoolVal::from_flags(self.can_true && other.can_true, self.can_false || other.can_false)
    }

    pub fn gamma(self) -> Vec<bool> {
        [false, true].into_iter().filter(|&b| self.contains(b)).collect()
    }

    /// Members as a sorted list of names.
    pub fn names(self) -> Vec<&'static str> {
        self.gamma().into_iter().map(|b| if b { "true" } else { "false" }).collect()
    }
}

impl fmt::Display for BoolVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.names().join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn and_is_sound() {
        for a in BoolVal::ALL {
            for b in BoolVal::ALL {
                for x in a.gamma() {
                    for y in b.gamma() {
                        assert!(a.and(b).contains(x && y));
                    }
                }
            }
        }
    }
}
