use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Block labels `z` with occupancy counts. Labels are always compact:
/// every label in `0..L` has at least one member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    labels: Vec<u32>,
    sizes: Vec<usize>,
}

impl Assignment {
    /// Builds an assignment from arbitrary labels, compacting them in order
    /// of first appearance.
    pub fn from_labels(raw: &[u32]) -> Self {
        let mut map = std::collections::HashMap::new();
        let mut sizes = Vec::new();
        let labels = raw
            .iter()
            .map(|&r| {
                let next = map.len() as u32;
                let l = *map.entry(r).or_insert(next);
                if l as usize == sizes.len() {
                    sizes.push(0);
                }
                sizes[l as usize] += 1;
                l
            })
            .collect();
        Assignment { labels, sizes }
    }

    /// Builds an assignment from labels that must already be compact.
    pub fn from_compact(labels: Vec<u32>) -> Result<Self> {
        let l = labels.iter().map(|&x| x as usize + 1).max().unwrap_or(0);
        let mut sizes = vec![0usize; l];
        for &x in &labels {
            sizes[x as usize] += 1;
        }
        if sizes.iter().any(|&s| s == 0) {
            return Err(Error::arg("block labels are not compact"));
        }
        Ok(Assignment { labels, sizes })
    }

    pub fn single_block(n: usize) -> Self {
        Assignment {
            labels: vec![0; n],
            sizes: if n > 0 { vec![n] } else { Vec::new() },
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn num_blocks(&self) -> usize {
        self.sizes.len()
    }

    #[inline]
    pub fn label(&self, i: usize) -> usize {
        self.labels[i] as usize
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    /// Labels renumbered by first appearance; equal for equal set partitions.
    pub fn canonical_labels(&self) -> Vec<u32> {
        Assignment::from_labels(&self.labels).labels
    }

    /// Detaches vertex `i`. Returns `Some(last)` if its block emptied and
    /// the former last label `last` was moved into the vacated slot.
    pub(crate) fn detach(&mut self, i: usize) -> Option<usize> {
        let k = self.labels[i] as usize;
        self.sizes[k] -= 1;
        if self.sizes[k] > 0 {
            return None;
        }
        let last = self.sizes.len() - 1;
        self.sizes.swap_remove(k);
        if k != last {
            for l in self.labels.iter_mut() {
                if *l as usize == last {
                    *l = k as u32;
                }
            }
        }
        Some(last)
    }

    /// Attaches vertex `i` to block `k`; `k == num_blocks()` opens a new one.
    pub(crate) fn attach(&mut self, i: usize, k: usize) {
        if k == self.sizes.len() {
            self.sizes.push(0);
        }
        self.sizes[k] += 1;
        self.labels[i] = k as u32;
    }

    pub(crate) fn check(&self) -> bool {
        let mut sizes = vec![0usize; self.sizes.len()];
        for &l in &self.labels {
            match sizes.get_mut(l as usize) {
                Some(s) => *s += 1,
                None => return false,
            }
        }
        sizes == self.sizes && sizes.iter().all(|&s| s > 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compacts_in_first_appearance_order() {
        let z = Assignment::from_labels(&[7, 3, 7, 9]);
        assert_eq!(z.labels(), &[0, 1, 0, 2]);
        assert_eq!(z.sizes(), &[2, 1, 1]);
        assert!(z.check());
    }

    #[test]
    fn detach_compacts_by_moving_last_label() {
        let mut z = Assignment::from_labels(&[0, 1, 1, 2, 2]);
        assert_eq!(z.detach(0), Some(2));
        assert_eq!(z.labels()[3..], [0, 0]);
        assert_eq!(z.sizes(), &[2, 2]);
        z.attach(0, 2);
        assert!(z.check());
        assert_eq!(z.num_blocks(), 3);
    }
}
