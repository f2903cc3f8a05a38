//! Derivative-free one-dimensional minimisation.

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a minimum of `f` on `[lo, hi]`, stopping when the
/// bracket is narrower than `tol`. Returns `(x_min, f_min)`.
pub fn golden_section_minimize(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    tol: f64,
) -> (f64, f64) {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    // 200 reductions shrink any finite bracket below f64 resolution.
    for _ in 0..200 {
        if (b - a) <= tol {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Scan `n_grid` evenly spaced points on `[lo, hi]`, then refine around the
/// best one with golden-section search. The bounds themselves are candidates,
/// so a minimum pinned at a bound is returned as such.
pub fn grid_then_golden(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    n_grid: usize,
    tol: f64,
) -> (f64, f64) {
    let n_grid = n_grid.max(2);
    let step = (hi - lo) / (n_grid - 1) as f64;
    let grid: Vec<f64> = (0..n_grid)
        .map(|i| {
            if i + 1 == n_grid {
                hi
            } else {
                lo + step * i as f64
            }
        })
        .collect();
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let best = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);

    let left = grid[best.saturating_sub(1)];
    let right = grid[(best + 1).min(n_grid - 1)];
    let (x, fx) = golden_section_minimize(&mut f, left, right, tol);

    let mut result = (x, fx);
    for &(gx, gf) in &[
        (grid[best], values[best]),
        (lo, values[0]),
        (hi, values[n_grid - 1]),
    ] {
        if gf < result.1 {
            result = (gx, gf);
        }
    }
    result
}
