use std::collections::HashMap;
use std::sync::Arc;

use super::ModeGrid;
use crate::{Error, Result};

pub const DEFAULT_BASIS_LIMIT: usize = 2_000_000;

/// Occupation-number basis of a truncated Fock space.
///
/// States are ordered by total photon number and, within one total, in
/// reverse lexicographic order of the occupation vector, so the vacuum is
/// state 0 and `(1,0)` precedes `(0,1)`.
#[derive(Debug, Clone)]
pub struct FockBasis {
    grid: Arc<ModeGrid>,
    max_total: usize,
    max_per_mode: usize,
    n_modes: usize,
    occupations: Vec<u8>,
    totals: Vec<u16>,
    lookup: HashMap<Box<[u8]>, usize>,
}

/// Number of occupation vectors of `modes` entries with entries `<= cap` and
/// sum `<= max_total`.
pub fn count_states(modes: usize, max_total: usize, cap: usize) -> u128 {
    // ways[t] = number of vectors over the modes seen so far with sum exactly t
    let mut ways = vec![0u128; max_total + 1];
    ways[0] = 1;
    for _ in 0..modes {
        let mut next = vec![0u128; max_total + 1];
        for (t, &w) in ways.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for n in 0..=cap.min(max_total - t) {
                next[t + n] = next[t + n].saturating_add(w);
            }
        }
        ways = next;
    }
    ways.iter().fold(0u128, |a, &b| a.saturating_add(b))
}

fn push_compositions(total: usize, cap: usize, slot: usize, scratch: &mut Vec<u8>, out: &mut Vec<u8>) {
    let n = scratch.len();
    if slot == n - 1 {
        if total <= cap {
            scratch[slot] = total as u8;
            out.extend_from_slice(scratch);
        }
        return;
    }
    let remaining_slots = n - slot - 1;
    let hi = total.min(cap);
    for v in (0..=hi).rev() {
        if total - v > remaining_slots * cap {
            break;
        }
        scratch[slot] = v as u8;
        push_compositions(total - v, cap, slot + 1, scratch, out);
    }
    scratch[slot] = 0;
}

impl FockBasis {
    pub fn new(grid: Arc<ModeGrid>, max_total: usize, max_per_mode: usize) -> Result<Self> {
        Self::with_limit(grid, max_total, max_per_mode, DEFAULT_BASIS_LIMIT)
    }

    pub fn with_limit(grid: Arc<ModeGrid>, max_total: usize, max_per_mode: usize, limit: usize) -> Result<Self> {
        if max_per_mode == 0 {
            return Err(Error::arg("max_per_mode must be >= 1"));
        }
        if max_per_mode > u8::MAX as usize || max_total > u16::MAX as usize {
            return Err(Error::arg("occupation caps too large for the packed representation"));
        }
        let n_modes = grid.len();
        if n_modes == 0 {
            return Err(Error::arg("mode grid is empty"));
        }
        let size = count_states(n_modes, max_total, max_per_mode);
        if size > limit as u128 {
            return Err(Error::Capacity {
                size,
                limit,
                modes: n_modes,
                max_total,
                max_per_mode,
            });
        }
        let size = size as usize;
        let mut occupations = Vec::with_capacity(size * n_modes);
        let mut scratch = vec![0u8; n_modes];
        let mut totals = Vec::with_capacity(size);
        for t in 0..=max_total {
            let before = occupations.len();
            push_compositions(t, max_per_mode, 0, &mut scratch, &mut occupations);
            let added = (occupations.len() - before) / n_modes;
            totals.extend(std::iter::repeat_n(t as u16, added));
        }
        debug_assert_eq!(totals.len(), size);
        let mut lookup = HashMap::with_capacity(size);
        for i in 0..size {
            lookup.insert(occupations[i * n_modes..(i + 1) * n_modes].into(), i);
        }
        Ok(Self {
            grid,
            max_total,
            max_per_mode,
            n_modes,
            occupations,
            totals,
            lookup,
        })
    }

    pub fn grid(&self) -> &Arc<ModeGrid> {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.totals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.totals.is_empty()
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn max_total(&self) -> usize {
        self.max_total
    }

    pub fn max_per_mode(&self) -> usize {
        self.max_per_mode
    }

    pub fn occupation(&self, state: usize) -> &[u8] {
        &self.occupations[state * self.n_modes..(state + 1) * self.n_modes]
    }

    pub fn total(&self, state: usize) -> usize {
        self.totals[state] as usize
    }

    pub fn index_of(&self, occupation: &[u8]) -> Option<usize> {
        self.lookup.get(occupation).copied()
    }

    /// Whether adding a photon to `mode` in `state` leaves the truncated space.
    pub fn creation_dropped(&self, state: usize, mode: usize) -> bool {
        self.total(state) >= self.max_total || self.occupation(state)[mode] as usize >= self.max_per_mode
    }

    pub fn states(&self) -> impl Iterator<Item = &[u8]> {
        self.occupations.chunks_exact(self.n_modes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::Mode;

    fn line_grid(n: usize) -> Arc<ModeGrid> {
        let modes = (0..n)
            .map(|i| Mode {
                index: i,
                momentum: [0.1 * (i + 1) as f64, 0.0, 0.0],
                polarization: None,
                weight: 1.0,
            })
            .collect();
        Arc::new(ModeGrid::from_modes(1, modes, 0.1, 10.0).unwrap())
    }

    fn binomial(n: u128, k: u128) -> u128 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn single_mode_enumeration() {
        let b = FockBasis::new(line_grid(1), 2, 2).unwrap();
        let states: Vec<Vec<u8>> = b.states().map(|s| s.to_vec()).collect();
        assert_eq!(states, vec![vec![0], vec![1], vec![2]]);
    }

    #[test]
    fn two_mode_single_photon() {
        let b = FockBasis::new(line_grid(2), 1, 1).unwrap();
        let states: Vec<Vec<u8>> = b.states().map(|s| s.to_vec()).collect();
        assert_eq!(states, vec![vec![0, 0], vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn multiset_count_matches_binomial() {
        let b = FockBasis::new(line_grid(12), 4, 4).unwrap();
        assert_eq!(b.len() as u128, binomial(16, 4));
        assert_eq!(b.len(), 1820);
    }

    #[test]
    fn caps_and_ordering() {
        let b = FockBasis::new(line_grid(4), 5, 2).unwrap();
        assert_eq!(b.len() as u128, count_states(4, 5, 2));
        assert!(b.occupation(0).iter().all(|&n| n == 0));
        for i in 0..b.len() {
            let occ = b.occupation(i);
            assert!(occ.iter().all(|&n| n <= 2));
            assert_eq!(occ.iter().map(|&n| n as usize).sum::<usize>(), b.total(i));
            assert_eq!(b.index_of(occ), Some(i));
            if i > 0 {
                let prev = b.occupation(i - 1);
                assert!(b.total(i - 1) < b.total(i) || prev > occ);
            }
        }
    }

    #[test]
    fn capacity_error_names_parameters() {
        let err = FockBasis::with_limit(line_grid(12), 4, 4, 1000).unwrap_err();
        match err {
            Error::Capacity {
                size,
                limit,
                modes,
                max_total,
                max_per_mode,
            } => {
                assert_eq!((size, limit, modes, max_total, max_per_mode), (1820, 1000, 12, 4, 4));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn enumeration_is_deterministic() {
        let a = FockBasis::new(line_grid(5), 3, 2).unwrap();
        let b = FockBasis::new(line_grid(5), 3, 2).unwrap();
        assert!(a.states().eq(b.states()));
    }
}
