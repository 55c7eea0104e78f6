//! Adaptive Dormand–Prince 5(4) for matrix ODEs.

use nalgebra::DMatrix;

use crate::{Error, Result, C64};

#[derive(Clone, Copy, Debug)]
pub(crate) struct StepControl {
    pub rtol: f64,
    pub atol: f64,
    pub max_rejections: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth minus fourth order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn combo(y: &DMatrix<C64>, h: f64, terms: &[(f64, &DMatrix<C64>)]) -> DMatrix<C64> {
    let mut out = y.clone();
    for &(w, k) in terms {
        if w != 0.0 {
            out.zip_apply(k, |o, kv| *o += kv * (h * w));
        }
    }
    out
}

/// Integrates `dy/dt = f(t, y)` from `t0` to `t1`. `h` carries the step size
/// between calls; a non-positive value picks a starting step.
pub(crate) fn integrate<F>(
    f: &F,
    y0: &DMatrix<C64>,
    t0: f64,
    t1: f64,
    h: &mut f64,
    ctl: StepControl,
) -> Result<DMatrix<C64>>
where
    F: Fn(f64, &DMatrix<C64>) -> DMatrix<C64>,
{
    let span = t1 - t0;
    if span <= 0.0 {
        return Ok(y0.clone());
    }
    if *h <= 0.0 || !h.is_finite() {
        let scale = f(t0, y0).iter().fold(0.0f64, |a, z| a.max(z.norm())).max(1e-12);
        *h = (0.01 / scale).min(span);
    }
    let mut t = t0;
    let mut y = y0.clone();
    let mut k1 = f(t, &y);
    let mut rejections = 0usize;
    while t < t1 {
        let last = t + *h >= t1 - 1e-14 * t1.abs().max(1.0);
        let step = if last { t1 - t } else { *h };
        let k2 = f(t + C2 * step, &combo(&y, step, &[(A21, &k1)]));
        let k3 = f(t + C3 * step, &combo(&y, step, &[(A31, &k1), (A32, &k2)]));
        let k4 = f(t + C4 * step, &combo(&y, step, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = f(t + C5 * step, &combo(&y, step, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]));
        let k6 = f(t + step, &combo(
            &y,
            step,
            &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        ));
        let y_new = combo(&y, step, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)]);
        let k7 = f(t + step, &y_new);

        let mut acc = 0.0;
        for idx in 0..y.len() {
            let e = step
                * (k1[idx] * E1 + k3[idx] * E3 + k4[idx] * E4 + k5[idx] * E5 + k6[idx] * E6 + k7[idx] * E7);
            let sc = ctl.atol + ctl.rtol * y[idx].norm().max(y_new[idx].norm());
            acc += (e.norm() / sc).powi(2);
        }
        let err = (acc / y.len() as f64).sqrt();

        if err <= 1.0 {
            t = if last { t1 } else { t + step };
            y = y_new;
            k1 = k7;
            rejections = 0;
            let grow = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            if !last || step >= *h {
                *h = step * grow;
            }
        } else {
            rejections += 1;
            if rejections > ctl.max_rejections {
                return Err(Error::Integration {
                    time: t,
                    reason: format!("{rejections} consecutive step rejections (error ratio {err:.3e})"),
                });
            }
            *h = step * (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
            if *h < 1e-13 * t.abs().max(1.0) {
                return Err(Error::Integration {
                    time: t,
                    reason: format!("step size underflow ({:.3e})", *h),
                });
            }
        }
    }
    Ok(y)
}
