use serde::Serialize;

/// One finite-size value of an estimator.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "M")]
    pub m: u32,
    pub value: f64,
    pub exact: bool,
}

/// The `N → ∞` value of an estimator at depth `M`, where it has a closed form.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExtrapolatedRow {
    #[serde(rename = "M")]
    pub m: u32,
    pub value: f64,
}

/// Rows of an estimator over an `(N, M)` grid, sorted by `(M, N)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub estimator: String,
    pub rows: Vec<TableRow>,
    pub extrapolated: Vec<ExtrapolatedRow>,
    pub target: Option<f64>,
}

impl ConvergenceTable {
    pub fn new(estimator: impl Into<String>, mut rows: Vec<TableRow>, target: Option<f64>) -> ConvergenceTable {
        rows.sort_by_key(|r| (r.m, r.n));
        ConvergenceTable { estimator: estimator.into(), rows, extrapolated: Vec::new(), target }
    }

    pub fn with_extrapolated(mut self, mut rows: Vec<ExtrapolatedRow>) -> ConvergenceTable {
        rows.sort_by_key(|r| r.m);
        self.extrapolated = rows;
        self
    }

    pub fn value_at(&self, n: u32, m: u32) -> Option<f64> {
        self.rows.iter().find(|r| r.n == n && r.m == m).map(|r| r.value)
    }

    /// The row with the largest `(M, N)`.
    pub fn last(&self) -> Option<&TableRow> {
        self.rows.iter().max_by_key(|r| (r.m, r.n))
    }

    /// `|value − target|` at the largest budgeted cell.
    pub fn final_deviation(&self) -> Option<f64> {
        Some((self.last()?.value - self.target?).abs())
    }

    pub fn all_exact(&self) -> bool {
        self.rows.iter().all(|r| r.exact)
    }

    /// Whether the extrapolated column moves monotonically toward the target.
    pub fn extrapolated_approaches_target(&self) -> Option<bool> {
        let t = self.target?;
        if self.extrapolated.len() < 2 {
            return None;
        }
        let gaps: Vec<f64> = self.extrapolated.iter().map(|r| (r.value - t).abs()).collect();
        Some(gaps.windows(2).all(|w| w[1] <= w[0] + 1e-12))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_are_sorted_by_depth_then_radius() {
        let rows = vec![
            TableRow { n: 4, m: 1, value: 1.0, exact: true },
            TableRow { n: 1, m: 2, value: 2.0, exact: true },
            TableRow { n: 2, m: 1, value: 3.0, exact: true },
        ];
        let t = ConvergenceTable::new("x", rows, Some(1.5));
        let keys: Vec<(u32, u32)> = t.rows.iter().map(|r| (r.m, r.n)).collect();
        assert_eq!(keys, vec![(1, 2), (1, 4), (2, 1)]);
        assert_eq!(t.last().unwrap().value, 2.0);
        assert_eq!(t.final_deviation(), Some(0.5));
    }

    #[test]
    fn approach_to_target() {
        let t = ConvergenceTable::new("x", vec![], Some(2.0)).with_extrapolated(vec![
            ExtrapolatedRow { m: 1, value: 3.0 },
            ExtrapolatedRow { m: 2, value: 2.5 },
            ExtrapolatedRow { m: 4, value: 2.25 },
        ]);
        assert_eq!(t.extrapolated_approaches_target(), Some(true));
    }
}
