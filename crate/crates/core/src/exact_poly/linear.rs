use num_traits::{One, Zero};

use super::rational::Rational;
use crate::error::{Error, Result};

/// Dense `rows x cols` system `A x = b` over the rationals.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSystem {
    cols: usize,
    matrix: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
}

/// Solution set of a consistent system: `particular + span(basis)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionSpace {
    pub particular: Vec<Rational>,
    pub basis: Vec<Vec<Rational>>,
}

impl LinearSystem {
    pub fn new(matrix: Vec<Vec<Rational>>, rhs: Vec<Rational>, cols: usize) -> Result<Self> {
        if matrix.len() != rhs.len() {
            return Err(Error::MalformedSystem(format!(
                "{} rows but {} right-hand sides",
                matrix.len(),
                rhs.len()
            )));
        }
        if let Some((i, row)) = matrix.iter().enumerate().find(|(_, r)| r.len() != cols) {
            return Err(Error::MalformedSystem(format!(
                "row {i} has {} entries, expected {cols}",
                row.len()
            )));
        }
        Ok(LinearSystem { cols, matrix, rhs })
    }

    pub fn homogeneous(matrix: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        let rhs = vec![Rational::zero(); matrix.len()];
        LinearSystem::new(matrix, rhs, cols)
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }

    pub fn solve(&self) -> Result<SolutionSpace> {
        let augmented: Vec<Vec<Rational>> = self
            .matrix
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| {
                let mut r = row.clone();
                r.push(b.clone());
                r
            })
            .collect();
        let (reduced, pivots) = rref_with_width(augmented, self.cols + 1, self.cols);

        for (i, row) in reduced.iter().enumerate().skip(pivots.len()) {
            if !row[self.cols].is_zero() {
                return Err(Error::InconsistentSystem {
                    row: i,
                    value: row[self.cols].to_string(),
                });
            }
        }

        let mut particular = vec![Rational::zero(); self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            particular[c] = reduced[r][self.cols].clone();
        }

        let basis = (0..self.cols)
            .filter(|c| !pivots.contains(c))
            .map(|free| {
                let mut v = vec![Rational::zero(); self.cols];
                v[free] = Rational::one();
                for (r, &c) in pivots.iter().enumerate() {
                    v[c] = -reduced[r][free].clone();
                }
                v
            })
            .collect();

        Ok(SolutionSpace { particular, basis })
    }

    /// Basis of `{x : A x = 0}`; the right-hand side is ignored.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        LinearSystem::homogeneous(self.matrix.clone(), self.cols)
            .and_then(|s| s.solve())
            .map(|s| s.basis)
            .expect("homogeneous systems are consistent")
    }
}

/// Reduced row echelon form with first-nonzero pivoting; returns pivot columns.
pub fn rref(matrix: Vec<Vec<Rational>>) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let width = matrix.first().map_or(0, Vec::len);
    rref_with_width(matrix, width, width)
}

pub fn rank(matrix: Vec<Vec<Rational>>) -> usize {
    rref(matrix).1.len()
}

fn rref_with_width(
    mut m: Vec<Vec<Rational>>,
    width: usize,
    pivot_cols: usize,
) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..pivot_cols.min(width) {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut().skip(col) {
            *x *= &inv;
        }
        let pivot_row = m[row].clone();
        for (r, other) in m.iter_mut().enumerate() {
            if r == row || other[col].is_zero() {
                continue;
            }
            let f = other[col].clone();
            for (x, p) in other.iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    (m, pivots)
}
