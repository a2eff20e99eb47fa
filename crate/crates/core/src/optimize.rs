//! Deterministic one-dimensional search: golden-section minimisation and
//! sign-change bisection.

const INV_PHI: f64 = 0.618_033_988_749_894_9; // (sqrt(5) - 1) / 2

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
///
/// Every evaluation is passed to `f`; callers that need the best evaluated
/// point should track it inside the closure. Iterates until the bracket is
/// narrower than `tol` and returns the bracket midpoint.
pub fn golden_section<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64
where
    F: FnMut(f64) -> f64,
{
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo >= tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    0.5 * (lo + hi)
}

/// Bisection on a predicate that holds at `inside` and fails at `outside`.
///
/// Returns the midpoint of the final bracket, which is narrower than `tol`.
/// The two ends may be given in either order.
pub fn bisect_boundary<P>(mut holds: P, mut inside: f64, mut outside: f64, tol: f64) -> f64
where
    P: FnMut(f64) -> bool,
{
    while (outside - inside).abs() >= tol {
        let mid = 0.5 * (inside + outside);
        if mid == inside || mid == outside {
            break;
        }
        if holds(mid) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    0.5 * (inside + outside)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_minimum() {
        let mut evals = 0;
        let x = golden_section(
            |x| {
                evals += 1;
                (x - 0.3).powi(2)
            },
            0.0,
            1.0,
            1e-10,
        );
        assert!((x - 0.3).abs() < 1e-9);
        assert!(evals < 60);
    }

    #[test]
    fn golden_converges_to_boundary_minimum() {
        let x = golden_section(|x| x, 2.0, 3.0, 1e-9);
        assert!((x - 2.0).abs() < 1e-9);
    }

    #[test]
    fn bisection_finds_sqrt2() {
        let r = bisect_boundary(|x| x * x < 2.0, 0.0, 2.0, 1e-12);
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-12);
        let r = bisect_boundary(|x| x * x > 2.0, 2.0, 1.0, 1e-12);
        assert!((r - std::f64::consts::SQRT_2).abs() < 1e-12);
    }
}
