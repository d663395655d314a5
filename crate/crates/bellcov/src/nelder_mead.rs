//! Minimal Nelder-Mead simplex minimizer for the low-dimensional (n <= 6)
//! feasibility searches. Box constraints and equality ties are handled by
//! the caller inside the objective (project, then evaluate), so the search
//! itself is unconstrained.

/// Search options. The reflection/expansion/contraction/shrink coefficients
/// are the standard ones.
#[derive(Debug, Clone)]
pub struct Options {
    /// Step used to build the initial simplex around the start point.
    pub initial_step: f64,
    /// Stop when this many objective evaluations have been spent.
    pub max_evals: usize,
    /// Stop when the simplex diameter falls below this.
    pub x_tol: f64,
    /// Stop when the objective spread over the simplex falls below this.
    pub f_tol: f64,
    /// Stop early as soon as a point with `f(x) <= target` is seen.
    pub target: Option<f64>,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            initial_step: 0.1,
            max_evals: 2000,
            x_tol: 1e-10,
            f_tol: 1e-12,
            target: None,
        }
    }
}

/// Result of a single search.
#[derive(Debug, Clone)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

/// Minimizes `f` starting from `x0`.
pub fn minimize<F: FnMut(&[f64]) -> f64>(mut f: F, x0: &[f64], opts: &Options) -> Minimum {
    let n = x0.len();
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        f(x)
    };

    if n == 0 {
        let value = eval(x0, &mut evals);
        return Minimum {
            x: Vec::new(),
            value,
            evaluations: evals,
        };
    }

    // initial simplex: x0 and one step along each coordinate
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let f0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), f0));
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += opts.initial_step;
        let fp = eval(&p, &mut evals);
        simplex.push((p, fp));
    }

    let below_target = |v: f64| opts.target.map(|t| v <= t).unwrap_or(false);

    loop {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let best = simplex[0].1;
        let worst = simplex[n].1;

        if below_target(best) || evals >= opts.max_evals {
            break;
        }
        let diameter = simplex[1..]
            .iter()
            .map(|(p, _)| {
                p.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if (worst - best).abs() < opts.f_tol && diameter < opts.x_tol {
            break;
        }

        // centroid of all but the worst
        let mut centroid = vec![0.0; n];
        for (p, _) in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(p) {
                *c += x / n as f64;
            }
        }

        let lerp = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n].0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let reflected = lerp(1.0);
        let f_reflected = eval(&reflected, &mut evals);

        if f_reflected < simplex[0].1 {
            let expanded = lerp(2.0);
            let f_expanded = eval(&expanded, &mut evals);
            simplex[n] = if f_expanded < f_reflected {
                (expanded, f_expanded)
            } else {
                (reflected, f_reflected)
            };
        } else if f_reflected < simplex[n - 1].1 {
            simplex[n] = (reflected, f_reflected);
        } else {
            let contracted = if f_reflected < simplex[n].1 {
                lerp(0.5)
            } else {
                lerp(-0.5)
            };
            let f_contracted = eval(&contracted, &mut evals);
            if f_contracted < simplex[n].1.min(f_reflected) {
                simplex[n] = (contracted, f_contracted);
            } else {
                // shrink toward the best point
                for k in 1..=n {
                    let shrunk: Vec<f64> = simplex[0]
                        .0
                        .iter()
                        .zip(&simplex[k].0)
                        .map(|(b, p)| b + 0.5 * (p - b))
                        .collect();
                    let f_shrunk = eval(&shrunk, &mut evals);
                    simplex[k] = (shrunk, f_shrunk);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    let (x, value) = simplex.swap_remove(0);
    Minimum {
        x,
        value,
        evaluations: evals,
    }
}
