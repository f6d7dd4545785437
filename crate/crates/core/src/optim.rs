//! Derivative-free maximization with the Nelder-Mead simplex method.
//!
//! All objectives in this crate are smooth trigonometric polynomial
//! compositions on low-dimensional angle spaces (2 to 16 parameters), which
//! is squarely inside Nelder-Mead territory. Restart logic lives with the
//! callers; this module is a single deterministic descent.

/// Nelder-Mead configuration. Coefficients are the classic choices:
/// reflection 1, expansion 2, contraction 1/2, shrink 1/2.
#[derive(Clone, Copy, Debug)]
pub struct NelderMead {
    /// Budget counted in objective evaluations.
    pub max_evals: usize,
    /// Stop when the simplex diameter falls below this.
    pub xtol: f64,
    /// Stop when the best-to-worst value spread falls below this.
    pub ftol: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        NelderMead {
            max_evals: 4000,
            xtol: 1e-10,
            ftol: 1e-12,
        }
    }
}

impl NelderMead {
    /// Maximizes `f` starting from `x0`, with an initial simplex of edge
    /// length `step` along each coordinate. Returns the best point and value.
    pub fn maximize(
        &self,
        mut f: impl FnMut(&[f64]) -> f64,
        x0: &[f64],
        step: f64,
    ) -> (Vec<f64>, f64) {
        let n = x0.len();
        assert!(n > 0, "objective must have at least one parameter");
        let mut evals = 0usize;
        let mut eval = |x: &[f64], evals: &mut usize| {
            *evals += 1;
            f(x)
        };

        // points[i] = (value, coordinates), kept sorted descending by value.
        let mut points: Vec<(f64, Vec<f64>)> = Vec::with_capacity(n + 1);
        points.push((eval(x0, &mut evals), x0.to_vec()));
        for i in 0..n {
            let mut x = x0.to_vec();
            x[i] += step;
            points.push((eval(&x, &mut evals), x));
        }
        let sort = |pts: &mut Vec<(f64, Vec<f64>)>| {
            pts.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("objective returned NaN"));
        };
        sort(&mut points);

        while evals < self.max_evals {
            let spread = points[0].0 - points[n].0;
            let diameter = points
                .iter()
                .skip(1)
                .map(|(_, x)| {
                    x.iter()
                        .zip(&points[0].1)
                        .map(|(a, b)| (a - b) * (a - b))
                        .sum::<f64>()
                        .sqrt()
                })
                .fold(0.0f64, f64::max);
            if spread < self.ftol || diameter < self.xtol {
                break;
            }

            let centroid: Vec<f64> = (0..n)
                .map(|d| points[..n].iter().map(|(_, x)| x[d]).sum::<f64>() / n as f64)
                .collect();
            let worst = points[n].clone();
            let combine = |t: f64| -> Vec<f64> {
                // centroid + t (centroid - worst)
                centroid
                    .iter()
                    .zip(&worst.1)
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };

            let xr = combine(1.0);
            let fr = eval(&xr, &mut evals);
            if fr > points[0].0 {
                // Greedy expansion: keep whichever of the reflected and
                // expanded points is better.
                let xe = combine(2.0);
                let fe = eval(&xe, &mut evals);
                points[n] = if fe > fr { (fe, xe) } else { (fr, xr) };
            } else if fr > points[n - 1].0 {
                points[n] = (fr, xr);
            } else {
                let (xc, fc) = if fr > worst.0 {
                    let x = combine(0.5);
                    let v = eval(&x, &mut evals);
                    (x, v)
                } else {
                    let x = combine(-0.5);
                    let v = eval(&x, &mut evals);
                    (x, v)
                };
                if fc > fr.max(worst.0) {
                    points[n] = (fc, xc);
                } else {
                    // Shrink toward the best vertex.
                    for i in 1..=n {
                        let shrunk: Vec<f64> = points[i]
                            .1
                            .iter()
                            .zip(&points[0].1)
                            .map(|(x, b)| b + 0.5 * (x - b))
                            .collect();
                        points[i] = (eval(&shrunk, &mut evals), shrunk);
                    }
                }
            }
            sort(&mut points);
        }

        let best = points.remove(0);
        (best.1, best.0)
    }
}
