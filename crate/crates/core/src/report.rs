//! Grid-check results shared by every verification routine.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

/// Basis states left out of a grid check, keyed by 1-based input slot.
///
/// Serializes as `{"slot1": [0], "slot2": [0, 1]}`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ExcludedStates(BTreeMap<usize, BTreeSet<u64>>);

impl ExcludedStates {
    pub fn new() -> Self {
        Self::default()
    }

    /// Record state `n` of 1-based slot `slot`.
    pub fn insert(&mut self, slot: usize, n: u64) {
        self.0.entry(slot).or_default().insert(n);
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, u64)>>(pairs: I) -> Self {
        let mut out = Self::new();
        for (s, n) in pairs {
            out.insert(s, n);
        }
        out
    }

    pub fn contains(&self, slot: usize, n: u64) -> bool {
        self.0.get(&slot).is_some_and(|s| s.contains(&n))
    }

    pub fn is_empty(&self) -> bool {
        self.0.values().all(BTreeSet::is_empty)
    }

    pub fn len(&self) -> usize {
        self.0.values().map(BTreeSet::len).sum()
    }

    pub fn slot(&self, slot: usize) -> Option<&BTreeSet<u64>> {
        self.0.get(&slot).filter(|s| !s.is_empty())
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.0.iter().flat_map(|(s, set)| set.iter().map(move |n| (*s, *n)))
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    pub fn extend(&mut self, other: &Self) {
        for (s, n) in other.iter() {
            self.insert(s, n);
        }
    }

    pub fn difference(&self, other: &Self) -> Self {
        Self::from_pairs(self.iter().filter(|&(s, n)| !other.contains(s, n)))
    }

    /// Keep only states `n <= n_max`.
    pub fn truncated(&self, n_max: u64) -> Self {
        Self::from_pairs(self.iter().filter(|&(_, n)| n <= n_max))
    }
}

impl fmt::Display for ExcludedStates {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("{}");
        }
        f.write_str("{")?;
        let mut first = true;
        for (slot, set) in &self.0 {
            if set.is_empty() {
                continue;
            }
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            write!(f, "slot{slot}: {set:?}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for ExcludedStates {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        for (slot, set) in &self.0 {
            if !set.is_empty() {
                map.serialize_entry(&format!("slot{slot}"), set)?;
            }
        }
        map.end()
    }
}

/// Location of a grid deviation: output `(row, m)` reached from input
/// `(col, n)`. Slots are 1-based; plain operators use slot 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPoint {
    pub row: usize,
    pub m: u64,
    pub col: usize,
    pub n: u64,
    pub deviation: f64,
}

/// How a check turns its measured deviation into pass/fail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", content = "threshold", rename_all = "snake_case")]
pub enum Criterion {
    /// Pass iff the deviation is at most the threshold.
    AtMost(f64),
    /// Pass iff the deviation strictly exceeds the threshold.
    Exceeds(f64),
    /// A sequence of errors must strictly decrease; the verdict is set by the
    /// caller and `max_deviation` holds the last error.
    Decreasing,
}

impl Criterion {
    pub fn accepts(&self, deviation: f64) -> bool {
        match *self {
            Criterion::AtMost(t) => deviation <= t,
            Criterion::Exceeds(t) => deviation > t,
            Criterion::Decreasing => true,
        }
    }
}

/// One named identity checked on a basis grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    #[serde(rename = "paper_anchor")]
    pub anchor: String,
    pub max_deviation: f64,
    pub criterion: Criterion,
    pub pass: bool,
    pub excluded_states: ExcludedStates,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst: Option<GridPoint>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl CheckOutcome {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>, criterion: Criterion) -> Self {
        CheckOutcome {
            name: name.into(),
            anchor: anchor.into(),
            max_deviation: 0.0,
            criterion,
            pass: criterion.accepts(0.0),
            excluded_states: ExcludedStates::new(),
            worst: None,
            notes: Vec::new(),
        }
    }

    /// Fill in deviation data from a grid comparison.
    pub fn with_comparison(mut self, cmp: &GridComparison) -> Self {
        self.max_deviation = cmp.max_deviation;
        self.worst = cmp.worst;
        self.excluded_states = cmp.excluded.clone();
        self.pass = self.criterion.accepts(cmp.max_deviation);
        self
    }

    pub fn with_deviation(mut self, deviation: f64) -> Self {
        self.max_deviation = deviation;
        self.pass = self.criterion.accepts(deviation);
        self
    }

    pub fn with_excluded(mut self, excluded: ExcludedStates) -> Self {
        self.excluded_states = excluded;
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Force the outcome, for checks whose verdict is not a single deviation.
    pub fn with_verdict(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }
}

/// Result of comparing two operators (or operator matrices) on a grid.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GridComparison {
    pub max_deviation: f64,
    pub worst: Option<GridPoint>,
    /// First grid point, in input-major scan order, whose deviation exceeded
    /// the comparison tolerance (if one was given).
    pub first_violation: Option<GridPoint>,
    pub excluded: ExcludedStates,
    pub points_compared: usize,
}

impl GridComparison {
    pub(crate) fn record(&mut self, p: GridPoint, tol: Option<f64>) {
        self.points_compared += 1;
        if self.worst.is_none() || p.deviation > self.max_deviation {
            self.max_deviation = p.deviation;
            self.worst = Some(p);
        }
        if let Some(t) = tol {
            if self.first_violation.is_none() && p.deviation > t {
                self.first_violation = Some(p);
            }
        }
    }

    /// Merge two comparisons over disjoint parts of a grid.
    pub fn merge(mut self, other: GridComparison) -> GridComparison {
        if other.worst.is_some() && (self.worst.is_none() || other.max_deviation > self.max_deviation) {
            self.max_deviation = other.max_deviation;
            self.worst = other.worst;
        }
        if self.first_violation.is_none() {
            self.first_violation = other.first_violation;
        }
        self.excluded.extend(&other.excluded);
        self.points_compared += other.points_compared;
        self
    }
}

/// One output amplitude `value` at `(row, m)` for a fixed input state.
pub type ColumnEntry = (usize, u64, num_complex::Complex64);

/// Compare two linear maps column by column over inputs `(slot, n)` with
/// `slot < slots` and `n <= n_max`; outputs with `m > n_max` are ignored.
///
/// A column that either side cannot evaluate is skipped and listed in
/// `excluded`. Slots in the result are 1-based.
pub fn compare_columns<L, R>(
    slots: usize,
    n_max: u64,
    tol: Option<f64>,
    mut left: L,
    mut right: R,
) -> GridComparison
where
    L: FnMut(usize, u64) -> Option<Vec<ColumnEntry>>,
    R: FnMut(usize, u64) -> Option<Vec<ColumnEntry>>,
{
    use num_complex::Complex64;
    let mut out = GridComparison::default();
    for col in 0..slots {
        for n in 0..=n_max {
            let (Some(l), Some(r)) = (left(col, n), right(col, n)) else {
                out.excluded.insert(col + 1, n);
                continue;
            };
            let mut diff: BTreeMap<(usize, u64), Complex64> = BTreeMap::new();
            for (row, m, v) in l {
                *diff.entry((row, m)).or_default() += v;
            }
            for (row, m, v) in r {
                *diff.entry((row, m)).or_default() -= v;
            }
            for ((row, m), d) in diff {
                if m > n_max {
                    continue;
                }
                out.record(
                    GridPoint { row: row + 1, m, col: col + 1, n, deviation: d.norm() },
                    tol,
                );
            }
        }
    }
    out
}
