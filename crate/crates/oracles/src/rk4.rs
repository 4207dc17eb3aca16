fn rk4_step<const D: usize>(
    z: f64,
    h: f64,
    y: &[f64; D],
    f: &impl Fn(f64, &[f64; D]) -> [f64; D],
) -> [f64; D] {
    let shift = |k: &[f64; D], s: f64| {
        let mut r = *y;
        r.iter_mut().zip(k).for_each(|(a, b)| *a += s * b);
        r
    };
    let k1 = f(z, y);
    let k2 = f(z + 0.5 * h, &shift(&k1, 0.5 * h));
    let k3 = f(z + 0.5 * h, &shift(&k2, 0.5 * h));
    let k4 = f(z + h, &shift(&k3, h));
    let mut next = *y;
    for d in 0..D {
        next[d] += h / 6.0 * (k1[d] + 2.0 * k2[d] + 2.0 * k3[d] + k4[d]);
    }
    next
}

/// Classical fourth-order Runge-Kutta on `[0, 1]` with `steps` uniform
/// steps; returns the state at every step boundary.
pub(crate) fn rk4_march<const D: usize>(
    y0: [f64; D],
    steps: usize,
    f: impl Fn(f64, &[f64; D]) -> [f64; D],
) -> Vec<[f64; D]> {
    let h = 1.0 / steps as f64;
    let mut out = Vec::with_capacity(steps + 1);
    out.push(y0);
    for i in 0..steps {
        let next = rk4_step(i as f64 * h, h, &out[i], &f);
        out.push(next);
    }
    out
}

/// Same march, final state only.
pub(crate) fn rk4_end<const D: usize>(
    y0: [f64; D],
    steps: usize,
    f: impl Fn(f64, &[f64; D]) -> [f64; D],
) -> [f64; D] {
    let h = 1.0 / steps as f64;
    (0..steps).fold(y0, |y, i| rk4_step(i as f64 * h, h, &y, &f))
}
