//! Sampled-function calculus: finite-difference derivatives and composite quadrature.

/// Relative tolerance under which a parameter grid counts as uniform.
pub const UNIFORM_RTOL: f64 = 1e-9;

/// Common step of `xs` if the spacing is uniform.
pub fn uniform_step(xs: &[f64]) -> Option<f64> {
    if xs.len() < 2 {
        return None;
    }
    let h = (xs[xs.len() - 1] - xs[0]) / (xs.len() - 1) as f64;
    let ok = xs
        .windows(2)
        .all(|w| ((w[1] - w[0]) - h).abs() <= UNIFORM_RTOL * h.abs().max(f64::MIN_POSITIVE));
    ok.then_some(h)
}

/// Stencil for the first derivative at each sample: `(index, weight)` pairs
/// such that `f'(xᵢ) ≈ Σ w·f(x_index)`.
///
/// Uniform grids with at least five samples use the five-point formulas
/// (central in the interior, one-sided near the ends), accurate to O(h⁴).
/// Otherwise the three-point formulas on the local spacings are used, O(h²).
pub fn derivative_stencils(xs: &[f64]) -> Vec<Vec<(usize, f64)>> {
    let n = xs.len();
    assert!(n >= 3, "finite-difference stencils need at least 3 samples");
    match uniform_step(xs) {
        Some(h) if n >= 5 => five_point(n, h),
        _ => three_point(xs),
    }
}

fn five_point(n: usize, h: f64) -> Vec<Vec<(usize, f64)>> {
    const EDGE0: [f64; 5] = [-25.0, 48.0, -36.0, 16.0, -3.0];
    const EDGE1: [f64; 5] = [-3.0, -10.0, 18.0, -6.0, 1.0];
    const CENTRAL: [f64; 5] = [1.0, -8.0, 0.0, 8.0, -1.0];
    let scale = 1.0 / (12.0 * h);
    (0..n)
        .map(|i| {
            let (base, w, sign) = if i == 0 {
                (0, EDGE0, 1.0)
            } else if i == 1 {
                (0, EDGE1, 1.0)
            } else if i == n - 1 {
                (n - 5, rev(EDGE0), -1.0)
            } else if i == n - 2 {
                (n - 5, rev(EDGE1), -1.0)
            } else {
                (i - 2, CENTRAL, 1.0)
            };
            w.iter()
                .enumerate()
                .filter(|(_, wk)| **wk != 0.0)
                .map(|(k, wk)| (base + k, sign * wk * scale))
                .collect()
        })
        .collect()
}

fn rev(w: [f64; 5]) -> [f64; 5] {
    [w[4], w[3], w[2], w[1], w[0]]
}

fn three_point(xs: &[f64]) -> Vec<Vec<(usize, f64)>> {
    let n = xs.len();
    (0..n)
        .map(|i| {
            if i == 0 {
                let h1 = xs[1] - xs[0];
                let h2 = xs[2] - xs[1];
                vec![
                    (0, -(2.0 * h1 + h2) / (h1 * (h1 + h2))),
                    (1, (h1 + h2) / (h1 * h2)),
                    (2, -h1 / (h2 * (h1 + h2))),
                ]
            } else if i == n - 1 {
                let h2 = xs[n - 1] - xs[n - 2];
                let h1 = xs[n - 2] - xs[n - 3];
                vec![
                    (n - 3, h2 / (h1 * (h1 + h2))),
                    (n - 2, -(h1 + h2) / (h1 * h2)),
                    (n - 1, (2.0 * h2 + h1) / (h2 * (h1 + h2))),
                ]
            } else {
                let h1 = xs[i] - xs[i - 1];
                let h2 = xs[i + 1] - xs[i];
                vec![
                    (i - 1, -h2 / (h1 * (h1 + h2))),
                    (i, (h2 - h1) / (h1 * h2)),
                    (i + 1, h1 / (h2 * (h1 + h2))),
                ]
            }
        })
        .collect()
}

/// Integrate samples `ys` over the grid `xs`.
///
/// Uniform grids use composite Simpson; an odd number of intervals closes
/// with Simpson's 3/8 rule on the last three. A single interval or a
/// non-uniform grid falls back to the trapezoid rule.
pub fn integrate(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let intervals = n - 1;
    match uniform_step(xs) {
        Some(h) if intervals >= 2 => {
            if intervals.is_multiple_of(2) {
                simpson(ys, h)
            } else if intervals >= 3 {
                let head = n - 3;
                let tail = &ys[head - 1..];
                simpson(&ys[..head], h)
                    + 3.0 * h / 8.0 * (tail[0] + 3.0 * tail[1] + 3.0 * tail[2] + tail[3])
            } else {
                trapezoid(xs, ys)
            }
        }
        _ => trapezoid(xs, ys),
    }
}

fn simpson(ys: &[f64], h: f64) -> f64 {
    let n = ys.len();
    if n < 3 {
        return if n == 2 { 0.5 * h * (ys[0] + ys[1]) } else { 0.0 };
    }
    debug_assert!(n % 2 == 1);
    let mut acc = ys[0] + ys[n - 1];
    for (k, y) in ys.iter().enumerate().take(n - 1).skip(1) {
        acc += if k % 2 == 1 { 4.0 * y } else { 2.0 * y };
    }
    acc * h / 3.0
}

/// Running integral `∫_{x₀}^{xᵢ} y dx` at every sample.
///
/// Uniform grids with at least four samples integrate each interval with the
/// cubic through its four nearest samples, fourth-order accurate; otherwise
/// the running trapezoid rule is used.
pub fn cumulative(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    out.push(0.0);
    let h = uniform_step(xs).filter(|_| n >= 4);
    for i in 0..n - 1 {
        let piece = match h {
            Some(h) => {
                let w = h / 24.0;
                if i == 0 {
                    w * (9.0 * ys[0] + 19.0 * ys[1] - 5.0 * ys[2] + ys[3])
                } else if i == n - 2 {
                    w * (9.0 * ys[n - 1] + 19.0 * ys[n - 2] - 5.0 * ys[n - 3] + ys[n - 4])
                } else {
                    w * (13.0 * (ys[i] + ys[i + 1]) - ys[i - 1] - ys[i + 2])
                }
            }
            None => 0.5 * (xs[i + 1] - xs[i]) * (ys[i] + ys[i + 1]),
        };
        out.push(out[i] + piece);
    }
    out
}

pub fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}
