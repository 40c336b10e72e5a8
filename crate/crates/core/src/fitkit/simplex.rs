//! Nelder-Mead minimization with box projection and restarts.

/// Options for [`minimize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplexOptions {
    pub max_evals: usize,
    /// Stop once every vertex is within `x_tol · max(‖x_best‖∞, 1)` of the best.
    pub x_tol: f64,
    /// Initial edge length relative to each coordinate.
    pub step_frac: f64,
    /// Initial edge length for coordinates that are zero.
    pub zero_step: f64,
    pub max_restarts: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions { max_evals: 10_000, x_tol: 1e-9, step_frac: 0.05, zero_step: 0.00025, max_restarts: 5 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub n_evals: usize,
    pub converged: bool,
}

struct Problem<'a, F> {
    f: F,
    lower: &'a [f64],
    upper: &'a [f64],
    evals: usize,
}

impl<F: FnMut(&[f64]) -> f64> Problem<'_, F> {
    fn project(&self, x: &mut [f64]) {
        for ((xi, lo), hi) in x.iter_mut().zip(self.lower).zip(self.upper) {
            *xi = xi.clamp(*lo, *hi);
        }
    }

    fn eval(&mut self, x: &mut [f64]) -> f64 {
        self.project(x);
        self.evals += 1;
        let v = (self.f)(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }
}

/// Minimizes `f` from `x0` inside `[lower, upper]`. Non-finite values of
/// `f` are treated as `+∞`.
pub fn minimize<F>(f: F, x0: &[f64], lower: &[f64], upper: &[f64], opts: &SimplexOptions) -> SimplexResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = x0.len();
    assert!(lower.len() == n && upper.len() == n, "bounds must match the dimension");
    let mut prob = Problem { f, lower, upper, evals: 0 };
    let mut best = x0.to_vec();
    let mut best_f = prob.eval(&mut best);
    if n == 0 {
        return SimplexResult { x: best, fx: best_f, n_evals: prob.evals, converged: true };
    }

    let mut converged = false;
    for _ in 0..=opts.max_restarts {
        let (x, fx, done) = run(&mut prob, &best, best_f, opts);
        let improved = fx < best_f;
        if fx <= best_f {
            best = x;
            best_f = fx;
        }
        converged = done;
        // A restart that cannot improve confirms the minimum.
        if !done || !improved {
            break;
        }
    }
    SimplexResult { x: best, fx: best_f, n_evals: prob.evals, converged }
}

fn run<F: FnMut(&[f64]) -> f64>(
    prob: &mut Problem<'_, F>,
    start: &[f64],
    start_f: f64,
    opts: &SimplexOptions,
) -> (Vec<f64>, f64, bool) {
    let n = start.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((start.to_vec(), start_f));
    for i in 0..n {
        let mut v = start.to_vec();
        let step = if v[i] != 0.0 { opts.step_frac * v[i] } else { opts.zero_step };
        v[i] += step;
        // flip the step if projection collapsed the vertex onto the start
        prob.project(&mut v);
        if v[i] == start[i] {
            v[i] -= 2.0 * step;
        }
        let fv = prob.eval(&mut v);
        simplex.push((v, fv));
    }

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = &simplex[0].0;
        let scale = best.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        let diameter = simplex[1..]
            .iter()
            .flat_map(|(v, _)| v.iter().zip(best).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        if diameter < opts.x_tol * scale {
            let (x, fx) = simplex.swap_remove(0);
            return (x, fx, true);
        }
        if prob.evals >= opts.max_evals {
            let (x, fx) = simplex.swap_remove(0);
            return (x, fx, false);
        }

        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|(v, _)| v[j]).sum::<f64>() / n as f64)
            .collect();
        let worst_f = simplex[n].1;
        let toward = |coef: f64, simplex: &[(Vec<f64>, f64)]| -> Vec<f64> {
            centroid.iter().zip(&simplex[n].0).map(|(c, w)| c + coef * (c - w)).collect()
        };

        let mut xr = toward(1.0, &simplex);
        let fr = prob.eval(&mut xr);
        if fr < simplex[0].1 {
            let mut xe = toward(2.0, &simplex);
            let fe = prob.eval(&mut xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        let (mut xc, fc_limit) = if fr < worst_f { (toward(0.5, &simplex), fr) } else { (toward(-0.5, &simplex), worst_f) };
        let fc = prob.eval(&mut xc);
        if fc < fc_limit {
            simplex[n] = (xc, fc);
            continue;
        }
        // shrink toward the best vertex
        let anchor = simplex[0].0.clone();
        for vertex in simplex.iter_mut().skip(1) {
            let mut v: Vec<f64> = anchor.iter().zip(&vertex.0).map(|(a, x)| a + 0.5 * (x - a)).collect();
            let fv = prob.eval(&mut v);
            *vertex = (v, fv);
        }
    }
}
