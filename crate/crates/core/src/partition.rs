//! Ordered partitions of `{0..n-1}` into cells.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cells are kept sorted internally and ordered by their minimum vertex, so the
/// cell holding vertex 0 always has index 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BlockPartition {
    n: usize,
    cells: Vec<Vec<usize>>,
    base_cell_index: usize,
}

impl BlockPartition {
    pub fn new(n: usize, cells: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut cells: Vec<Vec<usize>> = cells.into_iter().filter(|c| !c.is_empty()).collect();
        for cell in &mut cells {
            cell.sort_unstable();
            for &v in cell.iter() {
                if v >= n {
                    return Err(Error::InvalidPartition(format!(
                        "vertex {v} out of range {n}"
                    )));
                }
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::InvalidPartition(format!("vertex {v} in two cells")));
                }
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!("vertex {v} not covered")));
        }
        cells.sort_unstable_by_key(|c| c[0]);
        Ok(BlockPartition {
            n,
            cells,
            base_cell_index: 0,
        })
    }

    /// Builds the partition whose cells are the fibres of `cell_of`.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for (v, &l) in labels.iter().enumerate() {
            map.entry(l).or_default().push(v);
        }
        BlockPartition::new(labels.len(), map.into_values().collect())
            .expect("labels cover every vertex")
    }

    pub fn singletons(n: usize) -> Self {
        BlockPartition::new(n, (0..n).map(|v| vec![v]).collect()).unwrap()
    }

    pub fn single_cell(n: usize) -> Self {
        BlockPartition::new(n, vec![(0..n).collect()]).unwrap()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> &[usize] {
        &self.cells[i]
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn base_cell_index(&self) -> usize {
        self.base_cell_index
    }

    /// Cell representative: the minimum vertex of the cell.
    pub fn representative(&self, i: usize) -> usize {
        self.cells[i][0]
    }

    /// `map[v]` is the index of the cell holding `v`.
    pub fn cell_map(&self) -> Vec<usize> {
        let mut map = vec![0; self.n];
        for (i, cell) in self.cells.iter().enumerate() {
            for &v in cell {
                map[v] = i;
            }
        }
        map
    }

    pub fn is_uniform(&self) -> bool {
        self.cells.windows(2).all(|w| w[0].len() == w[1].len())
    }
}
