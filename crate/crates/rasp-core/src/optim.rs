//! Internal minimizers.
//!
//! Three small, dependency-free routines sized to this crate's problems
//! (dimension at most seven, objectives that are smooth inside the feasible
//! region but may return `+inf` outside it):
//!
//! - [`brent_min`]: derivative-free scalar minimization on a bracket, used
//!   for tuning the inspection spacing of a design.
//! - [`bfgs`]: quasi-Newton minimization with analytic gradients and Armijo
//!   backtracking, used for likelihood maximization in log-coordinates.
//! - [`nelder_mead`]: simplex search, used to polish BFGS solutions and as
//!   the primary method when no analytic gradient exists.
//!
//! All three treat non-finite objective values as "worse than anything",
//! which keeps iterates inside the feasible region without explicit
//! constraint handling.

// --- scalar minimization -------------------------------------------------

/// Brent's method on the bracket `[a, b]`: golden-section steps with
/// parabolic interpolation where it is safe. Returns `(x_min, f_min)`.
pub(crate) fn brent_min<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: f64,
    max_iter: usize,
) -> (f64, f64) {
    let gold = 0.5 * (3.0 - 5.0_f64.sqrt());
    let (mut lo, mut hi) = if a < b { (a, b) } else { (b, a) };
    let mut x = lo + gold * (hi - lo);
    let mut w = x;
    let mut v = x;
    let mut fx = f(x);
    let mut fw = fx;
    let mut fv = fx;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;

    for _ in 0..max_iter {
        let m = 0.5 * (lo + hi);
        let tol1 = tol * x.abs() + 1e-12;
        let tol2 = 2.0 * tol1;
        if (x - m).abs() <= tol2 - 0.5 * (hi - lo) {
            break;
        }
        let mut use_golden = true;
        if e.abs() > tol1 {
            // Parabola through (x, fx), (w, fw), (v, fv).
            let r = (x - w) * (fx - fv);
            let q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            let mut q2 = 2.0 * (q - r);
            if q2 > 0.0 {
                p = -p;
            }
            q2 = q2.abs();
            let e_prev = e;
            e = d;
            // Accept only if the step is small and stays inside the bracket.
            if p.abs() < (0.5 * q2 * e_prev).abs() && p > q2 * (lo - x) && p < q2 * (hi - x) {
                d = p / q2;
                let u = x + d;
                if u - lo < tol2 || hi - u < tol2 {
                    d = if m > x { tol1 } else { -tol1 };
                }
                use_golden = false;
            }
        }
        if use_golden {
            e = if x < m { hi - x } else { lo - x };
            d = gold * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else if d > 0.0 {
            x + tol1
        } else {
            x - tol1
        };
        let fu = f(u);
        if fu <= fx {
            if u < x {
                hi = x;
            } else {
                lo = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                lo = u;
            } else {
                hi = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    (x, fx)
}

// --- quasi-Newton minimization -------------------------------------------

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// BFGS with Armijo backtracking. `f` may return `+inf` outside the feasible
/// region; the line search simply shortens the step until it re-enters.
/// Returns `(x_min, f_min)`.
pub(crate) fn bfgs<F, G>(
    mut f: F,
    mut grad: G,
    x0: &[f64],
    tol: f64,
    max_iter: usize,
) -> (Vec<f64>, f64)
where
    F: FnMut(&[f64]) -> f64,
    G: FnMut(&[f64]) -> Vec<f64>,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut fx = f(&x);
    if !fx.is_finite() {
        return (x, fx);
    }
    let mut g = grad(&x);
    // Inverse-Hessian approximation, started at the identity.
    let mut h = vec![vec![0.0; n]; n];
    for (i, row) in h.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    for _ in 0..max_iter {
        let mut d = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                d[i] -= h[i][j] * g[j];
            }
        }
        let mut gd = dot(&g, &d);
        if !gd.is_finite() || gd >= 0.0 {
            // Curvature information went bad; restart from steepest descent.
            for (i, row) in h.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    *v = if i == j { 1.0 } else { 0.0 };
                }
            }
            for (di, gi) in d.iter_mut().zip(&g) {
                *di = -gi;
            }
            gd = -dot(&g, &g);
            if gd == 0.0 {
                break;
            }
        }

        // Armijo backtracking line search.
        let c1 = 1e-4;
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let xt: Vec<f64> = x.iter().zip(&d).map(|(xi, di)| xi + t * di).collect();
            let ft = f(&xt);
            if ft.is_finite() && ft <= fx + c1 * t * gd {
                accepted = Some((xt, ft));
                break;
            }
            t *= 0.5;
        }
        let Some((xt, ft)) = accepted else { break };
        let gt = grad(&xt);

        let s: Vec<f64> = xt.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = gt.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * norm(&s) * norm(&y) {
            // Sherman–Morrison form of the inverse update.
            let hy: Vec<f64> = (0..n).map(|i| dot(&h[i], &y)).collect();
            let yhy = dot(&y, &hy);
            let k = (1.0 + yhy / sy) / sy;
            for i in 0..n {
                for j in 0..n {
                    h[i][j] += k * s[i] * s[j] - (s[i] * hy[j] + hy[i] * s[j]) / sy;
                }
            }
        }

        let df = fx - ft;
        x = xt;
        fx = ft;
        g = gt;
        if df <= tol * (fx.abs() + tol) && norm(&g) <= tol.sqrt() {
            break;
        }
    }
    (x, fx)
}

// --- simplex minimization -------------------------------------------------

/// Nelder–Mead simplex search started from `x0` with per-coordinate initial
/// steps `scale * max(1, |x0_i|)`. Returns `(x_min, f_min)`.
pub(crate) fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    scale: f64,
    tol: f64,
    max_iter: usize,
) -> (Vec<f64>, f64) {
    let n = x0.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    simplex.push(x0.to_vec());
    for i in 0..n {
        let mut v = x0.to_vec();
        v[i] += scale * x0[i].abs().max(1.0);
        simplex.push(v);
    }
    let mut fvals: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

    let order = |sx: &mut Vec<Vec<f64>>, fv: &mut Vec<f64>| {
        let mut idx: Vec<usize> = (0..sx.len()).collect();
        idx.sort_by(|&a, &b| fv[a].partial_cmp(&fv[b]).unwrap_or(std::cmp::Ordering::Equal));
        *sx = idx.iter().map(|&i| sx[i].clone()).collect();
        *fv = idx.iter().map(|&i| fv[i]).collect();
    };
    order(&mut simplex, &mut fvals);

    for _ in 0..max_iter {
        let spread = fvals[n] - fvals[0];
        if spread.is_finite() && spread <= tol * (fvals[0].abs() + tol) {
            break;
        }
        // Centroid of all but the worst vertex.
        let mut centroid = vec![0.0; n];
        for v in simplex.iter().take(n) {
            for (c, vi) in centroid.iter_mut().zip(v) {
                *c += vi / n as f64;
            }
        }
        let at = |coef: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n])
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };

        let xr = at(1.0);
        let fr = f(&xr);
        if fr < fvals[0] {
            let xe = at(2.0);
            let fe = f(&xe);
            if fe < fr {
                simplex[n] = xe;
                fvals[n] = fe;
            } else {
                simplex[n] = xr;
                fvals[n] = fr;
            }
        } else if fr < fvals[n - 1] {
            simplex[n] = xr;
            fvals[n] = fr;
        } else {
            // Contract toward the centroid (outside if the reflection helped).
            let (xc, fc) = if fr < fvals[n] {
                let xc = at(0.5);
                let fc = f(&xc);
                (xc, fc)
            } else {
                let xc = at(-0.5);
                let fc = f(&xc);
                (xc, fc)
            };
            if fc < fvals[n].min(fr) {
                simplex[n] = xc;
                fvals[n] = fc;
            } else {
                // Shrink everything toward the best vertex.
                for i in 1..=n {
                    let best = simplex[0].clone();
                    for (v, b) in simplex[i].iter_mut().zip(&best) {
                        *v = b + 0.5 * (*v - b);
                    }
                    fvals[i] = f(&simplex[i]);
                }
            }
        }
        order(&mut simplex, &mut fvals);
    }
    (simplex.swap_remove(0), fvals[0])
}
