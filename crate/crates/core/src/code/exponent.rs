use std::fmt;

use crate::{Error, Result};

/// Matrix of cyclic shifts describing a QC parity-check matrix; `-1` marks an
/// all-zero block.
#[derive(Clone, PartialEq, Eq)]
pub struct ExponentMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i32>,
}

impl ExponentMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<i32>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(format!(
                "exponent matrix must be non-empty, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} exponent matrix",
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|&e| e < -1) {
            return Err(Error::InvalidShift {
                row: pos / cols,
                col: pos % cols,
                shift: entries[pos],
                lifting: 0,
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from nested rows, mostly for tests and small examples.
    pub fn from_rows(rows: &[Vec<i32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Shape("ragged exponent matrix rows".into()));
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    /// An all-empty matrix, i.e. every block is the zero block.
    pub fn empty(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![-1; rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> i32 {
        self.entries[row * self.cols + col]
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, shift: i32) {
        self.entries[row * self.cols + col] = shift;
    }

    pub fn entries(&self) -> &[i32] {
        &self.entries
    }

    pub fn is_populated(&self, row: usize, col: usize) -> bool {
        self.get(row, col) >= 0
    }

    /// Checks that every shift fits the lifting factor.
    pub fn check_lifting(&self, lifting: usize) -> Result<()> {
        if lifting == 0 {
            return Err(Error::Parameter("lifting factor must be at least 1".into()));
        }
        for (pos, &e) in self.entries.iter().enumerate() {
            if e >= 0 && e as usize >= lifting {
                return Err(Error::InvalidShift {
                    row: pos / self.cols,
                    col: pos % self.cols,
                    shift: e,
                    lifting,
                });
            }
        }
        Ok(())
    }

    pub fn to_rows(&self) -> Vec<Vec<i32>> {
        self.entries
            .chunks(self.cols)
            .map(<[i32]>::to_vec)
            .collect()
    }
}

impl fmt::Debug for ExponentMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExponentMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.entries.chunks(self.cols) {
            let line: Vec<String> = row.iter().map(|e| format!("{e:>3}")).collect();
            writeln!(f, "  {}", line.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Sparse binary parity-check matrix stored as per-row column indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedPcm {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<Vec<usize>>,
}

impl LiftedPcm {
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Column indices of the ones in `row`, in increasing block order.
    pub fn row(&self, row: usize) -> &[usize] {
        &self.rows[row]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[usize]> {
        self.rows.iter().map(Vec::as_slice)
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows[row].contains(&col)
    }

    pub fn ones(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn column_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.n_cols];
        for r in &self.rows {
            for &c in r {
                w[c] += 1;
            }
        }
        w
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        self.rows
            .iter()
            .map(|r| {
                let mut d = vec![0u8; self.n_cols];
                for &c in r {
                    d[c] = 1;
                }
                d
            })
            .collect()
    }
}

/// Expands every shift into a `lifting x lifting` identity whose rows are
/// rotated right by the shift; negative entries become zero blocks.
pub fn lift(matrix: &ExponentMatrix, lifting: usize) -> Result<LiftedPcm> {
    matrix.check_lifting(lifting)?;
    let mut rows = Vec::with_capacity(matrix.rows() * lifting);
    for j in 0..matrix.rows() {
        for r in 0..lifting {
            let cols = (0..matrix.cols())
                .filter(|&i| matrix.is_populated(j, i))
                .map(|i| i * lifting + (r + matrix.get(j, i) as usize) % lifting)
                .collect();
            rows.push(cols);
        }
    }
    Ok(LiftedPcm {
        n_rows: matrix.rows() * lifting,
        n_cols: matrix.cols() * lifting,
        rows,
    })
}

/// True iff the lifted Tanner graph has a cycle of length 4.
///
/// Only block columns whose supports share at least two block rows can close
/// a 4-cycle, so the check walks column pairs and their common rows and tests
/// `E[j1][i1] - E[j2][i1] + E[j2][i2] - E[j1][i2] == 0 (mod lifting)`.
pub fn has_four_cycle(matrix: &ExponentMatrix, lifting: usize) -> bool {
    let theta = lifting as i64;
    let supports: Vec<Vec<(usize, i64)>> = (0..matrix.cols())
        .map(|i| {
            (0..matrix.rows())
                .filter(|&j| matrix.is_populated(j, i))
                .map(|j| (j, i64::from(matrix.get(j, i))))
                .collect()
        })
        .collect();

    let mut common: Vec<(i64, i64)> = Vec::new();
    for (i1, a) in supports.iter().enumerate() {
        for b in &supports[i1 + 1..] {
            common.clear();
            let (mut x, mut y) = (0, 0);
            while x < a.len() && y < b.len() {
                match a[x].0.cmp(&b[y].0) {
                    std::cmp::Ordering::Less => x += 1,
                    std::cmp::Ordering::Greater => y += 1,
                    std::cmp::Ordering::Equal => {
                        common.push((a[x].1, b[y].1));
                        x += 1;
                        y += 1;
                    }
                }
            }
            for (p, &(e11, e12)) in common.iter().enumerate() {
                for &(e21, e22) in &common[p + 1..] {
                    if (e11 - e21 + e22 - e12).rem_euclid(theta) == 0 {
                        return true;
                    }
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Girth-4 search on the lifted matrix: two rows sharing two columns.
    fn brute_force_four_cycle(pcm: &LiftedPcm) -> bool {
        let dense = pcm.to_dense();
        for r1 in 0..pcm.n_rows() {
            for r2 in r1 + 1..pcm.n_rows() {
                let shared = (0..pcm.n_cols())
                    .filter(|&c| dense[r1][c] == 1 && dense[r2][c] == 1)
                    .count();
                if shared >= 2 {
                    return true;
                }
            }
        }
        false
    }

    #[test]
    fn lift_empty_block() {
        let e = ExponentMatrix::from_rows(&[vec![-1]]).unwrap();
        let h = lift(&e, 2).unwrap();
        assert_eq!(h.to_dense(), vec![vec![0, 0], vec![0, 0]]);
    }

    #[test]
    fn lift_rotates_rows_right() {
        let e = ExponentMatrix::from_rows(&[vec![2]]).unwrap();
        let h = lift(&e, 3).unwrap();
        assert_eq!(
            h.to_dense(),
            vec![vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]
        );
    }

    #[test]
    fn lift_two_by_two() {
        // Block (0,0): I, (0,1): 0, (1,0): I rotated once, (1,1): I.
        let e = ExponentMatrix::from_rows(&[vec![0, -1], vec![1, 0]]).unwrap();
        let h = lift(&e, 2).unwrap();
        assert_eq!(
            h.to_dense(),
            vec![
                vec![1, 0, 0, 0],
                vec![0, 1, 0, 0],
                vec![0, 1, 1, 0],
                vec![1, 0, 0, 1]
            ]
        );
    }

    #[test]
    fn lift_rejects_large_shift() {
        let e = ExponentMatrix::from_rows(&[vec![0, 3]]).unwrap();
        assert!(matches!(
            lift(&e, 3),
            Err(Error::InvalidShift {
                shift: 3,
                col: 1,
                ..
            })
        ));
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(ExponentMatrix::new(0, 1, vec![]).is_err());
        assert!(ExponentMatrix::new(1, 2, vec![0]).is_err());
        assert!(ExponentMatrix::new(1, 1, vec![-2]).is_err());
    }

    #[test]
    fn four_cycle_examples() {
        let zeros = ExponentMatrix::from_rows(&[vec![0, 0], vec![0, 0]]).unwrap();
        assert!(has_four_cycle(&zeros, 2));

        let single_row = ExponentMatrix::from_rows(&[vec![0, 0, 0, 0]]).unwrap();
        assert!(!has_four_cycle(&single_row, 4));
        let single_col = ExponentMatrix::from_rows(&[vec![0], vec![0], vec![0]]).unwrap();
        assert!(!has_four_cycle(&single_col, 4));

        let e = ExponentMatrix::from_rows(&[vec![0, 0], vec![0, 1]]).unwrap();
        assert!(!brute_force_four_cycle(&lift(&e, 3).unwrap()));
        assert!(!has_four_cycle(&e, 3));
    }

    #[test]
    fn empty_blocks_break_cycles() {
        let e = ExponentMatrix::from_rows(&[vec![0, 0], vec![0, -1]]).unwrap();
        assert!(!has_four_cycle(&e, 2));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_matrix() -> impl Strategy<Value = (ExponentMatrix, usize)> {
            (1usize..=8, 1usize..=4, 1usize..=5).prop_flat_map(|(theta, rows, cols)| {
                proptest::collection::vec(-1i32..theta as i32, rows * cols).prop_map(
                    move |entries| (ExponentMatrix::new(rows, cols, entries).unwrap(), theta),
                )
            })
        }

        proptest! {
            #[test]
            fn four_cycle_matches_brute_force((e, theta) in small_matrix()) {
                let pcm = lift(&e, theta).unwrap();
                prop_assert_eq!(has_four_cycle(&e, theta), brute_force_four_cycle(&pcm));
            }

            #[test]
            fn every_block_contributes_theta_ones((e, theta) in small_matrix()) {
                let pcm = lift(&e, theta).unwrap();
                let populated = e.entries().iter().filter(|&&x| x >= 0).count();
                prop_assert_eq!(pcm.ones(), populated * theta);
                prop_assert_eq!(pcm.n_rows(), e.rows() * theta);
                prop_assert_eq!(pcm.n_cols(), e.cols() * theta);
            }
        }
    }
}
