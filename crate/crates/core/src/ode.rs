//! Classical fixed-step fourth-order Runge–Kutta.

/// Integrates `y' = f(t, y)` from `(t0, y0)` over `steps` steps of size `h`,
/// calling `observe(t, y)` after every step (and once for the initial state).
/// Returns the final state.
pub fn rk4<F, O>(f: F, t0: f64, y0: &[f64], h: f64, steps: usize, mut observe: O) -> Vec<f64>
where
    F: Fn(f64, &[f64], &mut [f64]),
    O: FnMut(f64, &[f64]),
{
    let dim = y0.len();
    let mut y = y0.to_vec();
    let mut k1 = vec![0.0; dim];
    let mut k2 = vec![0.0; dim];
    let mut k3 = vec![0.0; dim];
    let mut k4 = vec![0.0; dim];
    let mut scratch = vec![0.0; dim];
    observe(t0, &y);
    for step in 0..steps {
        let t = t0 + step as f64 * h;
        f(t, &y, &mut k1);
        for i in 0..dim {
            scratch[i] = y[i] + 0.5 * h * k1[i];
        }
        f(t + 0.5 * h, &scratch, &mut k2);
        for i in 0..dim {
            scratch[i] = y[i] + 0.5 * h * k2[i];
        }
        f(t + 0.5 * h, &scratch, &mut k3);
        for i in 0..dim {
            scratch[i] = y[i] + h * k3[i];
        }
        f(t + h, &scratch, &mut k4);
        for i in 0..dim {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        observe(t + h, &y);
    }
    y
}
