//! Dormand–Prince 5(4) for an autonomous complex scalar ODE `y' = f(y)`.

use num_complex::Complex64;

use crate::{Error, Result};

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
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// 5th-order weights minus embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

pub(crate) struct Tolerances {
    pub rtol: f64,
    pub atol: f64,
    pub min_step: f64,
}

/// Integrates from `s0` to `s1`, returning every accepted `(s, y)` including both ends.
///
/// The field is autonomous, so the stage nodes `c_i` never enter.
pub(crate) fn integrate<F>(
    f: F,
    y0: Complex64,
    s0: f64,
    s1: f64,
    tol: &Tolerances,
) -> Result<Vec<(f64, Complex64)>>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut out = vec![(s0, y0)];
    if s0 == s1 {
        return Ok(out);
    }
    let direction = (s1 - s0).signum();
    let mut h = (s1 - s0) / 64.0;
    let mut s = s0;
    let mut y = y0;
    let mut k1 = f(y)?;

    while (s1 - s) * direction > 0.0 {
        // Stretch a step that would stop just short of s1, so no sliver remains.
        let last = (s + 1.001 * h - s1) * direction >= 0.0;
        if last {
            h = s1 - s;
        }
        if h.abs() < tol.min_step {
            return Err(Error::StepUnderflow {
                r: s.exp(),
                step: h.abs(),
            });
        }
        let k2 = f(y + h * (A21 * k1))?;
        let k3 = f(y + h * (A31 * k1 + A32 * k2))?;
        let k4 = f(y + h * (A41 * k1 + A42 * k2 + A43 * k3))?;
        let k5 = f(y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4))?;
        let k6 = f(y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5))?;
        let y_new = y + h * (A71 * k1 + A73 * k3 + A74 * k4 + A75 * k5 + A76 * k6);
        let k7 = f(y_new)?;
        let err_vec = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7);
        let scale = tol.atol + tol.rtol * y.norm().max(y_new.norm());
        let err = err_vec.norm() / scale;

        if err <= 1.0 {
            s = if last { s1 } else { s + h };
            y = y_new;
            k1 = k7;
            out.push((s, y));
        }
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h *= factor;
    }
    Ok(out)
}
