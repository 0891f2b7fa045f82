use super::AnalysisError;
use serde::Serialize;

/// Least-squares parabola `a x² + b x + c`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FitResult {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub residual_sum_squares: f64,
    pub n: usize,
}

impl FitResult {
    pub fn eval(&self, x: f64) -> f64 {
        (self.a * x + self.b) * x + self.c
    }
}

/// Fits `y = a x² + b x + c` by solving the normal equations.
///
/// x is centred and scaled to `[-1, 1]` before forming the 3×3 system, which
/// keeps it well conditioned for trial indices in the hundreds; the solution
/// is mapped back to the original variable.
pub fn quadratic_fit(points: &[(f64, f64)]) -> Result<FitResult, AnalysisError> {
    if let Some(bad) = points.iter().flat_map(|(x, y)| [*x, *y]).find(|v| !v.is_finite()) {
        return Err(AnalysisError::NonFinite(bad));
    }
    let mut xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if xs.len() < 3 {
        return Err(AnalysisError::Degenerate(xs.len()));
    }
    let mid = (xs[0] + xs[xs.len() - 1]) / 2.0;
    let half = (xs[xs.len() - 1] - xs[0]) / 2.0;

    let mut m = [[0.0; 4]; 3];
    for &(x, y) in points {
        let u = (x - mid) / half;
        let basis = [u * u, u, 1.0];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += basis[i] * basis[j];
            }
            m[i][3] += basis[i] * y;
        }
    }
    let [p, q, r] = solve3(m).ok_or(AnalysisError::Degenerate(xs.len()))?;

    // p u² + q u + r with u = (x - mid) / half
    let a = p / (half * half);
    let b = q / half - 2.0 * p * mid / (half * half);
    let c = p * mid * mid / (half * half) - q * mid / half + r;
    let mut fit = FitResult {
        a,
        b,
        c,
        residual_sum_squares: 0.0,
        n: points.len(),
    };
    fit.residual_sum_squares = points.iter().map(|&(x, y)| (y - fit.eval(x)).powi(2)).sum();
    Ok(fit)
}

/// Gaussian elimination with partial pivoting on an augmented 3×4 matrix.
fn solve3(mut m: [[f64; 4]; 3]) -> Option<[f64; 3]> {
    let scale = m.iter().flat_map(|r| r[..3].iter()).fold(0.0f64, |s, v| s.max(v.abs()));
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))?;
        if m[pivot][col].abs() <= 1e-12 * scale {
            return None;
        }
        m.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            let upper = m[col];
            for (cell, u) in m[row].iter_mut().zip(upper).skip(col) {
                *cell -= f * u;
            }
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let tail: f64 = (i + 1..3).map(|k| m[i][k] * x[k]).sum();
        x[i] = (m[i][3] - tail) / m[i][i];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn exact_parabola() {
        let pts: Vec<_> = (-3..=5).map(|x| (x as f64, 2.0 * (x * x) as f64 - 3.0 * x as f64 + 1.0)).collect();
        let f = quadratic_fit(&pts).unwrap();
        assert!((f.a - 2.0).abs() < 1e-9 && (f.b + 3.0).abs() < 1e-9 && (f.c - 1.0).abs() < 1e-9);
        assert!(f.residual_sum_squares < 1e-9);
    }

    #[test]
    fn constant_data() {
        let pts: Vec<_> = (0..10).map(|x| (x as f64, 5.0)).collect();
        let f = quadratic_fit(&pts).unwrap();
        assert!(f.a.abs() < 1e-12 && f.b.abs() < 1e-12 && (f.c - 5.0).abs() < 1e-12);
    }

    #[test]
    fn too_few_distinct_x() {
        assert_eq!(quadratic_fit(&[(1.0, 1.0), (1.0, 2.0), (2.0, 3.0), (2.0, 0.0)]), Err(AnalysisError::Degenerate(2)));
        assert!(quadratic_fit(&[(0.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(quadratic_fit(&[(0.0, 1.0), (1.0, f64::NAN), (2.0, 0.0)]).is_err());
    }

    /// Normal equations in the raw variable, solved by Cramer's rule.
    fn cramer(points: &[(f64, f64)]) -> [f64; 3] {
        let mut s = [0.0f64; 5];
        let mut t = [0.0f64; 3];
        for &(x, y) in points {
            let mut xp = 1.0;
            for k in 0..5 {
                s[k] += xp;
                if k < 3 {
                    t[k] += xp * y;
                }
                xp *= x;
            }
        }
        let m = [[s[4], s[3], s[2]], [s[3], s[2], s[1]], [s[2], s[1], s[0]]];
        let rhs = [t[2], t[1], t[0]];
        let det = |m: &[[f64; 3]; 3]| {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        let d = det(&m);
        let mut out = [0.0; 3];
        for (col, o) in out.iter_mut().enumerate() {
            let mut mc = m;
            for row in 0..3 {
                mc[row][col] = rhs[row];
            }
            *o = det(&mc) / d;
        }
        out
    }

    #[test]
    fn matches_independent_solve() {
        let mut rng = crate::seed::rng(77);
        for _ in 0..1000 {
            let n = rng.random_range(3..60);
            let pts: Vec<(f64, f64)> = (0..n)
                .map(|_| (rng.random_range(-3.0..3.0), rng.random_range(-10.0..10.0)))
                .collect();
            let f = quadratic_fit(&pts).unwrap();
            let o = cramer(&pts);
            let norm = o.iter().map(|v| v * v).sum::<f64>().sqrt();
            let diff = ((f.a - o[0]).powi(2) + (f.b - o[1]).powi(2) + (f.c - o[2]).powi(2)).sqrt();
            assert!(diff <= 1e-9 * norm.max(1.0), "{diff} vs {norm}");
        }
    }

    proptest! {
        #[test]
        fn residuals_are_orthogonal(
            pts in proptest::collection::vec((-5.0..5.0f64, -10.0..10.0f64), 3..60),
        ) {
            let distinct = {
                let mut x: Vec<f64> = pts.iter().map(|p| p.0).collect();
                x.sort_by(f64::total_cmp);
                x.dedup_by(|a, b| (*a - *b).abs() < 1e-3);
                x.len()
            };
            prop_assume!(distinct >= 3);
            let f = quadratic_fit(&pts).unwrap();
            let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
            for &(x, y) in &pts {
                let r = y - f.eval(x);
                s0 += r;
                s1 += r * x;
                s2 += r * x * x;
            }
            prop_assert!(s0.abs() < 1e-6 && s1.abs() < 1e-6 && s2.abs() < 1e-6, "{s0} {s1} {s2}");
            prop_assert!(f.residual_sum_squares >= 0.0);
        }

        #[test]
        fn noiseless_recovery(a in -3.0..3.0f64, b in -5.0..5.0f64, c in -5.0..5.0f64, n in 3usize..60) {
            let pts: Vec<_> = (0..n).map(|i| {
                let x = i as f64;
                (x, a * x * x + b * x + c)
            }).collect();
            let f = quadratic_fit(&pts).unwrap();
            let scale = 1.0 + (a.abs() + b.abs() + c.abs());
            prop_assert!((f.a - a).abs() < 1e-9 * scale);
            prop_assert!((f.b - b).abs() < 1e-7 * scale);
            prop_assert!((f.c - c).abs() < 1e-6 * scale);
            prop_assert!(f.residual_sum_squares < 1e-9, "{}", f.residual_sum_squares);
        }
    }
}
