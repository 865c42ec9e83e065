//! Colorings: validation, exact and greedy solvers, the explicit shift-graph
//! colorings, and the sum/product combinators.

mod combine;
mod constructions;
mod solve;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub use combine::{product_coloring, sum_coloring};
pub use constructions::{
    cycle_coloring, eh_pair_coloring, recursive_palette, recursive_shift_coloring, tower, zorbit_coloring,
};
pub use solve::{
    chi_csp, chi_exact, chi_exact_with, chi_greedy, k_colorable, max_clique, Certificate, GreedyOrder, SolveReport,
    Stats,
};

/// A vertex coloring: `colors[v]` in `[0, palette)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    pub colors: Vec<u32>,
    pub palette: u32,
}

impl Coloring {
    pub fn new(colors: Vec<u32>, palette: u32) -> Result<Self> {
        if let Some(c) = colors.iter().find(|&&c| c >= palette) {
            return Err(Error::InvalidParameter(format!("color {c} outside palette {palette}")));
        }
        Ok(Coloring { colors, palette })
    }

    /// Palette = one more than the largest color used.
    pub fn tight(colors: Vec<u32>) -> Self {
        let palette = colors.iter().max().map_or(0, |&m| m + 1);
        Coloring { colors, palette }
    }

    pub fn to_json(&self) -> Value {
        json!({ "colors": self.colors, "palette": self.palette })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let c: Coloring = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("coloring: {e}")))?;
        Coloring::new(c.colors, c.palette)
    }
}

/// The monochromatic edges of `c` on `g`.
pub fn validate(g: &Graph, c: &Coloring) -> Result<Vec<(usize, usize)>> {
    if c.colors.len() < g.n() {
        return Err(Error::MissingVertex(c.colors.len()));
    }
    if let Some(v) = c.colors.iter().position(|&x| x >= c.palette) {
        return Err(Error::InvalidParameter(format!("vertex {v} has a color outside the palette")));
    }
    Ok(g.edges().iter().copied().filter(|&(u, v)| c.colors[u] == c.colors[v]).collect())
}
