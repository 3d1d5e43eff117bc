use std::borrow::Cow;

use crate::graph::Label;

/// Picks one label per set, all distinct, by depth-first backtracking.
///
/// Positions are filled in list order; within a set, labels are tried in
/// ascending id order and labels already taken by earlier positions are
/// skipped. Returns the first complete assignment in that order.
pub fn sdr_backtrack<S: AsRef<[Label]>>(sets: &[S]) -> Option<Vec<Label>> {
    let sets: Vec<Cow<'_, [Label]>> = sets
        .iter()
        .map(|s| {
            let s = s.as_ref();
            if s.windows(2).all(|w| w[0] < w[1]) {
                Cow::Borrowed(s)
            } else {
                let mut v = s.to_vec();
                v.sort_unstable();
                v.dedup();
                Cow::Owned(v)
            }
        })
        .collect();
    let mut solver = Backtrack::new(&sets);
    if solver.place(0) {
        Some(solver.chosen)
    } else {
        None
    }
}

/// Feasibility only, for sets already sorted ascending.
pub(crate) fn sdr_exists(sets: &[&[Label]]) -> bool {
    Backtrack::new(sets).place(0)
}

struct Backtrack<'a, S> {
    sets: &'a [S],
    used: Vec<bool>,
    chosen: Vec<Label>,
}

impl<'a, S: AsRef<[Label]>> Backtrack<'a, S> {
    fn new(sets: &'a [S]) -> Self {
        let universe = sets
            .iter()
            .flat_map(|s| s.as_ref().last())
            .map(|l| l.index() + 1)
            .max()
            .unwrap_or(0);
        Self {
            sets,
            used: vec![false; universe],
            chosen: Vec::with_capacity(sets.len()),
        }
    }

    fn place(&mut self, pos: usize) -> bool {
        let Some(set) = self.sets.get(pos) else {
            return true;
        };
        for &label in set.as_ref() {
            if self.used[label.index()] {
                continue;
            }
            self.used[label.index()] = true;
            self.chosen.push(label);
            if self.place(pos + 1) {
                return true;
            }
            self.chosen.pop();
            self.used[label.index()] = false;
        }
        false
    }
}
