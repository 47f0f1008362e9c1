//! Grid functions on the reference strip.
//!
//! Fields on the strip `S^1 x [0,1]` are stored by their values at the
//! tensor grid `(x_j, y_l) = (2 pi j/m, l/n)` with `j = 0..m` periodic
//! and `l = 0..=n`.

use crate::format::fmt_float;
use ndarray::Array2;

/// A real field sampled on the `m x (n+1)` strip grid; first index is the
/// periodic angular one.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction2D {
    values: Array2<f64>,
}

impl GridFunction2D {
    /// Wraps an `m x (n+1)` array (first axis angular).
    pub fn new(values: Array2<f64>) -> Self {
        Self { values }
    }

    pub fn zeros(m: usize, n: usize) -> Self {
        Self {
            values: Array2::zeros((m, n + 1)),
        }
    }

    /// Builds the field `u(x_j, y_l) = column[l]`, constant in `x`.
    pub fn broadcast_column(m: usize, column: &[f64]) -> Self {
        let n = column.len() - 1;
        let mut values = Array2::zeros((m, n + 1));
        for j in 0..m {
            for (l, v) in column.iter().enumerate() {
                values[[j, l]] = *v;
            }
        }
        Self { values }
    }

    /// Number of angular samples.
    pub fn m(&self) -> usize {
        self.values.nrows()
    }

    /// Number of vertical cells (`n + 1` nodes).
    pub fn n(&self) -> usize {
        self.values.ncols() - 1
    }

    pub fn get(&self, j: usize, l: usize) -> f64 {
        self.values[[j, l]]
    }

    pub fn set(&mut self, j: usize, l: usize, v: f64) {
        self.values[[j, l]] = v;
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    /// Trace along the lower edge `y = 0`.
    pub fn bottom_row(&self) -> Vec<f64> {
        (0..self.m()).map(|j| self.values[[j, 0]]).collect()
    }

    /// Trace along the upper edge `y = 1`.
    pub fn top_row(&self) -> Vec<f64> {
        let n = self.n();
        (0..self.m()).map(|j| self.values[[j, n]]).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .fold(f64::NEG_INFINITY, |acc, v| acc.max(*v))
    }

    pub fn min(&self) -> f64 {
        self.values.iter().fold(f64::INFINITY, |acc, v| acc.min(*v))
    }

    /// Largest absolute difference against another field of the same shape.
    pub fn max_abs_diff(&self, other: &GridFunction2D) -> f64 {
        assert_eq!(self.values.dim(), other.values.dim());
        self.values
            .iter()
            .zip(other.values.iter())
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()))
    }

    /// CSV dump: a `m,n` header line, the two sizes, then one row per
    /// angular index with the `n + 1` vertical values.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,n\n");
        out.push_str(&format!("{},{}\n", self.m(), self.n()));
        for j in 0..self.m() {
            let row: Vec<String> = (0..=self.n())
                .map(|l| fmt_float(self.values[[j, l]]))
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}
