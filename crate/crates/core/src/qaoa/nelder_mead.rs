/// Tuning for [`minimize`].
#[derive(Clone, Copy, Debug)]
pub struct NelderMeadOptions {
    pub max_iter: usize,
    /// Stop once every vertex lies within this distance of the best one and
    /// their values agree to the same tolerance.
    pub tol: f64,
    pub initial_step: f64,
}

#[derive(Clone, Debug)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub f: f64,
    pub iterations: usize,
    pub evaluations: usize,
    pub converged: bool,
    /// Best value after each iteration, starting with the initial simplex.
    pub trace: Vec<(Vec<f64>, f64)>,
}

/// Derivative-free simplex minimization with the standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
pub fn minimize(
    f: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    opts: NelderMeadOptions,
) -> NelderMeadResult {
    let d = x0.len();
    let mut evaluations = 0;
    let mut eval = |x: &[f64]| {
        evaluations += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for i in 0..d {
        let mut x = x0.to_vec();
        x[i] += opts.initial_step;
        let v = eval(&x);
        simplex.push((x, v));
    }
    sort(&mut simplex);

    let mut trace = vec![simplex[0].clone()];
    let mut iterations = 0;
    let mut converged = spread(&simplex) <= opts.tol;
    while !converged && iterations < opts.max_iter {
        iterations += 1;
        let centroid: Vec<f64> = (0..d)
            .map(|k| simplex[..d].iter().map(|v| v.0[k]).sum::<f64>() / d as f64)
            .collect();
        let worst = simplex[d].clone();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(1.0);
        let fr = eval(&xr);
        if fr < simplex[0].1 {
            let xe = along(2.0);
            let fe = eval(&xe);
            simplex[d] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[d - 1].1 {
            simplex[d] = (xr, fr);
        } else {
            let (xc, fc) = if fr < worst.1 {
                let xc = along(0.5);
                let fc = eval(&xc);
                (xc, fc)
            } else {
                let xc = along(-0.5);
                let fc = eval(&xc);
                (xc, fc)
            };
            if fc < fr.min(worst.1) {
                simplex[d] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for v in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = best
                        .iter()
                        .zip(&v.0)
                        .map(|(b, x)| b + 0.5 * (x - b))
                        .collect();
                    let fx = eval(&x);
                    *v = (x, fx);
                }
            }
        }
        sort(&mut simplex);
        trace.push(simplex[0].clone());
        converged = spread(&simplex) <= opts.tol;
    }

    let (x, f) = simplex.swap_remove(0);
    NelderMeadResult {
        x,
        f,
        iterations,
        evaluations,
        converged,
        trace,
    }
}

// Stable, so equal values keep their earlier order.
fn sort(simplex: &mut [(Vec<f64>, f64)]) {
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
}

fn spread(simplex: &[(Vec<f64>, f64)]) -> f64 {
    let (best, fb) = (&simplex[0].0, simplex[0].1);
    simplex[1..]
        .iter()
        .map(|(x, fx)| {
            let dx = x
                .iter()
                .zip(best)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            dx.max((fx - fb).abs())
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    const OPTS: NelderMeadOptions = NelderMeadOptions {
        max_iter: 2000,
        tol: 1e-10,
        initial_step: 0.5,
    };

    #[test]
    fn quadratic_bowl() {
        let r = minimize(
            |x| (x[0] - 1.0).powi(2) + 3.0 * (x[1] + 2.0).powi(2),
            &[0.0, 0.0],
            OPTS,
        );
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-4 && (r.x[1] + 2.0).abs() < 1e-4);
    }

    #[test]
    fn rosenbrock() {
        let r = minimize(
            |x| 100.0 * (x[1] - x[0] * x[0]).powi(2) + (1.0 - x[0]).powi(2),
            &[-1.2, 1.0],
            OPTS,
        );
        assert!(r.f < 1e-8, "{}", r.f);
    }

    #[test]
    fn trace_never_rises() {
        let r = minimize(|x| x[0].sin() + (2.0 * x[1]).cos(), &[0.3, 0.1], OPTS);
        assert!(r.trace.windows(2).all(|w| w[1].1 <= w[0].1));
        assert_eq!(r.trace.len(), r.iterations + 1);
        assert_eq!(r.trace.last().unwrap().1, r.f);
    }

    #[test]
    fn iteration_cap_reported() {
        let opts = NelderMeadOptions {
            max_iter: 3,
            ..OPTS
        };
        let r = minimize(|x| x[0] * x[0] + x[1] * x[1], &[5.0, 5.0], opts);
        assert!(!r.converged);
        assert_eq!(r.iterations, 3);
    }
}
