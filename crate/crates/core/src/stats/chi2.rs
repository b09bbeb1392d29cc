use statrs::function::gamma::checked_gamma_ur;

use crate::error::{invalid, Result};

use super::TestOutcome;

const MIN_EXPECTED: f64 = 5.0;

/// Upper tail of the chi-square distribution with `df` degrees of freedom,
/// via the regularized upper incomplete gamma function.
pub fn chi2_sf(statistic: f64, df: usize) -> f64 {
    if df == 0 || !(statistic > 0.0) {
        return 1.0;
    }
    checked_gamma_ur(df as f64 / 2.0, statistic / 2.0).unwrap_or(0.0)
}

/// Pearson test of `counts` against equal cell probabilities.
pub fn chi2_uniformity(counts: &[u64]) -> Result<TestOutcome> {
    if counts.len() < 2 {
        return Err(invalid("uniformity test needs at least two cells"));
    }
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return Err(invalid("uniformity test needs a positive total count"));
    }
    let expected = total as f64 / counts.len() as f64;
    // Summing in sorted order makes the statistic exactly permutation invariant.
    let mut sorted = counts.to_vec();
    sorted.sort_unstable();
    let statistic = sorted
        .iter()
        .map(|&c| {
            let diff = c as f64 - expected;
            diff * diff / expected
        })
        .sum::<f64>();
    Ok(TestOutcome::new(
        statistic,
        chi2_sf(statistic, counts.len() - 1),
        total as usize,
    ))
}

/// Pearson homogeneity test for two samples of a discrete variable.
///
/// Categories whose smaller pooled expected count falls below 5 are merged:
/// first from the left tail inward, then from the right tail inward, then any
/// remaining sparse interior cell is folded into its right neighbour.
pub fn chi2_two_sample_discrete(counts_a: &[u64], counts_b: &[u64]) -> Result<TestOutcome> {
    if counts_a.len() != counts_b.len() {
        return Err(invalid("count vectors have different lengths"));
    }
    if counts_a.len() < 2 {
        return Err(invalid("homogeneity test needs at least two categories"));
    }
    let na: u64 = counts_a.iter().sum();
    let nb: u64 = counts_b.iter().sum();
    if na == 0 || nb == 0 {
        return Err(invalid("both samples need at least one observation"));
    }
    let frac_small = na.min(nb) as f64 / (na + nb) as f64;
    let sparse = |a: u64, b: u64| ((a + b) as f64) * frac_small < MIN_EXPECTED;

    let mut cells: Vec<(u64, u64)> = counts_a.iter().copied().zip(counts_b.iter().copied()).collect();
    // Empty categories carry no information.
    cells.retain(|(a, b)| a + b > 0);
    let merged = merge_sparse(cells, sparse);
    if merged.len() < 2 {
        return Err(invalid("fewer than two categories remain after merging"));
    }

    let total = (na + nb) as f64;
    let mut statistic = 0.0;
    for (a, b) in &merged {
        let pooled = (a + b) as f64;
        let ea = pooled * na as f64 / total;
        let eb = pooled * nb as f64 / total;
        statistic += (*a as f64 - ea).powi(2) / ea + (*b as f64 - eb).powi(2) / eb;
    }
    Ok(TestOutcome::new(
        statistic,
        chi2_sf(statistic, merged.len() - 1),
        (na + nb) as usize,
    ))
}

fn merge_sparse(mut cells: Vec<(u64, u64)>, sparse: impl Fn(u64, u64) -> bool) -> Vec<(u64, u64)> {
    let add = |x: (u64, u64), y: (u64, u64)| (x.0 + y.0, x.1 + y.1);
    while cells.len() >= 2 && sparse(cells[0].0, cells[0].1) {
        let first = cells.remove(0);
        cells[0] = add(cells[0], first);
    }
    while cells.len() >= 2 && {
        let last = cells[cells.len() - 1];
        sparse(last.0, last.1)
    } {
        let last = cells.pop().unwrap();
        let n = cells.len();
        cells[n - 1] = add(cells[n - 1], last);
    }
    let mut i = 1;
    while cells.len() >= 2 && i + 1 < cells.len() {
        if sparse(cells[i].0, cells[i].1) {
            let cell = cells.remove(i);
            cells[i] = add(cells[i], cell);
        } else {
            i += 1;
        }
    }
    cells
}

/// Counts of each distinct value in two samples, over the sorted union of
/// observed values. Returns `(values, counts_a, counts_b)`.
pub fn tabulate_pair(a: &[f64], b: &[f64]) -> (Vec<f64>, Vec<u64>, Vec<u64>) {
    let mut values: Vec<f64> = a.iter().chain(b.iter()).copied().collect();
    values.sort_unstable_by(f64::total_cmp);
    values.dedup();
    let index = |v: &f64| values.binary_search_by(|p| p.total_cmp(v)).unwrap();
    let mut ca = vec![0u64; values.len()];
    let mut cb = vec![0u64; values.len()];
    for v in a {
        ca[index(v)] += 1;
    }
    for v in b {
        cb[index(v)] += 1;
    }
    (values, ca, cb)
}
