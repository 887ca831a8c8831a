//! Trailed variable store.
//!
//! Integer domains are bitmasks over `0..=63`. Set variables keep a
//! required/possible pair of bitmasks over a universe of at most 64 elements.
//! Every write records the previous word on the trail so that `undo_to`
//! restores the store exactly.

use std::fmt;

/// Largest value an integer domain may hold, and largest set universe.
pub const MAX_VALUE: u32 = 63;
pub const MAX_UNIVERSE: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntVar(pub(crate) u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetVar(pub(crate) u32);

impl IntVar {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl SetVar {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    Int(IntVar),
    Set(SetVar),
}

/// A domain or bound was emptied.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inconsistent;

impl fmt::Display for Inconsistent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("inconsistent")
    }
}

impl std::error::Error for Inconsistent {}

pub type PropResult = Result<(), Inconsistent>;

#[derive(Debug, Clone, Copy)]
enum Slot {
    Int(u32),
    Required(u32),
    Possible(u32),
}

#[inline]
pub(crate) fn bit(v: u32) -> u64 {
    1u64 << v
}

/// Iterates the set bits of `mask`, lowest first.
pub fn bits(mut mask: u64) -> impl Iterator<Item = u32> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros();
            mask &= mask - 1;
            Some(b)
        }
    })
}

#[derive(Debug, Clone, Default)]
pub struct Store {
    ints: Vec<u64>,
    required: Vec<u64>,
    possible: Vec<u64>,
    trail: Vec<(Slot, u64)>,
    pub(crate) changed: Vec<Var>,
}

impl Store {
    pub(crate) fn add_int(&mut self, domain: u64) -> IntVar {
        assert!(domain != 0, "integer variable created with an empty domain");
        self.ints.push(domain);
        IntVar(self.ints.len() as u32 - 1)
    }

    pub(crate) fn add_set(&mut self, universe: u64) -> SetVar {
        self.required.push(0);
        self.possible.push(universe);
        SetVar(self.possible.len() as u32 - 1)
    }

    pub fn int_count(&self) -> usize {
        self.ints.len()
    }

    pub fn set_count(&self) -> usize {
        self.possible.len()
    }

    /// Current trail position.
    pub fn mark(&self) -> usize {
        self.trail.len()
    }

    /// Restores every variable to its state when the trail had length `mark`.
    pub fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (slot, old) = self.trail.pop().expect("trail longer than mark");
            match slot {
                Slot::Int(i) => self.ints[i as usize] = old,
                Slot::Required(i) => self.required[i as usize] = old,
                Slot::Possible(i) => self.possible[i as usize] = old,
            }
        }
        self.changed.clear();
    }

    // ---- integer variables ----

    #[inline]
    pub fn domain(&self, x: IntVar) -> u64 {
        self.ints[x.index()]
    }

    pub fn min(&self, x: IntVar) -> u32 {
        self.domain(x).trailing_zeros()
    }

    pub fn max(&self, x: IntVar) -> u32 {
        63 - self.domain(x).leading_zeros()
    }

    pub fn size(&self, x: IntVar) -> u32 {
        self.domain(x).count_ones()
    }

    #[inline]
    pub fn contains(&self, x: IntVar, v: u32) -> bool {
        v <= MAX_VALUE && self.domain(x) & bit(v) != 0
    }

    #[inline]
    pub fn is_fixed(&self, x: IntVar) -> bool {
        self.domain(x).is_power_of_two()
    }

    pub fn value(&self, x: IntVar) -> Option<u32> {
        self.is_fixed(x).then(|| self.min(x))
    }

    /// Intersects the domain of `x` with `mask`. Returns whether it shrank.
    pub fn restrict(&mut self, x: IntVar, mask: u64) -> Result<bool, Inconsistent> {
        let old = self.ints[x.index()];
        let new = old & mask;
        if new == old {
            return Ok(false);
        }
        if new == 0 {
            return Err(Inconsistent);
        }
        self.trail.push((Slot::Int(x.0), old));
        self.ints[x.index()] = new;
        self.changed.push(Var::Int(x));
        Ok(true)
    }

    pub fn fix(&mut self, x: IntVar, v: u32) -> Result<bool, Inconsistent> {
        if v > MAX_VALUE {
            return Err(Inconsistent);
        }
        self.restrict(x, bit(v))
    }

    pub fn remove(&mut self, x: IntVar, v: u32) -> Result<bool, Inconsistent> {
        if v > MAX_VALUE {
            return Ok(false);
        }
        self.restrict(x, !bit(v))
    }

    /// Removes every value `< v`.
    pub fn remove_below(&mut self, x: IntVar, v: u32) -> Result<bool, Inconsistent> {
        if v > MAX_VALUE {
            return Err(Inconsistent);
        }
        self.restrict(x, !(bit(v) - 1))
    }

    /// Removes every value `> v`.
    pub fn remove_above(&mut self, x: IntVar, v: u32) -> Result<bool, Inconsistent> {
        if v >= MAX_VALUE {
            return Ok(false);
        }
        self.restrict(x, bit(v + 1) - 1)
    }

    // ---- set variables ----

    #[inline]
    pub fn required(&self, s: SetVar) -> u64 {
        self.required[s.index()]
    }

    #[inline]
    pub fn possible(&self, s: SetVar) -> u64 {
        self.possible[s.index()]
    }

    pub fn set_fixed(&self, s: SetVar) -> bool {
        self.required(s) == self.possible(s)
    }

    /// Adds `mask` to the lower bound of `s`.
    pub fn require(&mut self, s: SetVar, mask: u64) -> Result<bool, Inconsistent> {
        let old = self.required[s.index()];
        let new = old | mask;
        if new == old {
            return Ok(false);
        }
        if new & !self.possible[s.index()] != 0 {
            return Err(Inconsistent);
        }
        self.trail.push((Slot::Required(s.0), old));
        self.required[s.index()] = new;
        self.changed.push(Var::Set(s));
        Ok(true)
    }

    /// Intersects the upper bound of `s` with `mask`.
    pub fn restrict_possible(&mut self, s: SetVar, mask: u64) -> Result<bool, Inconsistent> {
        let old = self.possible[s.index()];
        let new = old & mask;
        if new == old {
            return Ok(false);
        }
        if self.required[s.index()] & !new != 0 {
            return Err(Inconsistent);
        }
        self.trail.push((Slot::Possible(s.0), old));
        self.possible[s.index()] = new;
        self.changed.push(Var::Set(s));
        Ok(true)
    }

    pub fn include(&mut self, s: SetVar, e: u32) -> Result<bool, Inconsistent> {
        self.require(s, bit(e))
    }

    pub fn exclude(&mut self, s: SetVar, e: u32) -> Result<bool, Inconsistent> {
        self.restrict_possible(s, !bit(e))
    }

    /// Full copy of all bounds, for tests and diagnostics.
    pub fn snapshot(&self) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
        (
            self.ints.clone(),
            self.required.clone(),
            self.possible.clone(),
        )
    }
}
