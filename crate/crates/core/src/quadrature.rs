//! Globally adaptive 15-point Gauss–Kronrod quadrature.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// Kronrod nodes and weights with the digits as tabulated in QUADPACK.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd Kronrod nodes 1, 3, 5 and the centre.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Stopping rule for [`integrate`]: stop once the estimated error is below
/// `max(abs, rel·|I|)`, or fail after `max_intervals` subdivisions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 0.0,
            rel: 1e-10,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub abs_error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rule<F>(f: &mut F, a: f64, b: f64, op: &'static str) -> Result<Segment>
where
    F: FnMut(f64) -> Result<f64>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut eval = |x: f64| -> Result<f64> {
        let v = f(x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::quadrature(
                op,
                format!("integrand is not finite at x = {x}"),
            ))
        }
    };

    let fc = eval(center)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut res_abs = kronrod.abs();
    let mut fv = [(0.0, 0.0); 7];
    for (j, slot) in fv.iter_mut().enumerate() {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        *slot = (f1, f2);
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }

    let mean = 0.5 * kronrod;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for (j, (f1, f2)) in fv.iter().enumerate() {
        res_asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }

    let value = kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut error = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Segment { a, b, value, error })
}

/// Integrate `f` over `[a, b]`. The integrand is never evaluated at the
/// endpoints, so integrable endpoint singularities are tolerated.
pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: Tolerance, op: &'static str) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::quadrature(op, "integration limits must be finite"));
    }
    if a == b {
        return Ok(Integral {
            value: 0.0,
            abs_error: 0.0,
            evaluations: 0,
        });
    }

    let first = rule(&mut f, a, b, op)?;
    let mut evaluations = 15;
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    while error > tol.abs.max(tol.rel * value.abs()) {
        if heap.len() >= tol.max_intervals {
            return Err(Error::quadrature(
                op,
                format!(
                    "no convergence on [{a}, {b}] after {} subintervals (estimate {value:e} ± {error:e})",
                    heap.len()
                ),
            ));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval cannot be split any further in floating point
            return Err(Error::quadrature(
                op,
                format!(
                    "subinterval [{}, {}] exhausted machine precision",
                    worst.a, worst.b
                ),
            ));
        }
        let left = rule(&mut f, worst.a, mid, op)?;
        let right = rule(&mut f, mid, worst.b, op)?;
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // re-sum occasionally to keep roundoff from the running updates bounded
        if heap.len() % 64 == 0 {
            value = heap.iter().map(|s| s.value).sum();
            error = heap.iter().map(|s| s.error).sum();
        }
    }

    value = heap.iter().map(|s| s.value).sum();
    error = heap.iter().map(|s| s.error).sum();
    Ok(Integral {
        value,
        abs_error: error,
        evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn run<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> Integral {
        integrate(|x| Ok(f(x)), a, b, Tolerance::default(), "test").unwrap()
    }

    #[test]
    fn polynomials_are_exact() {
        let i = run(|x| 3.0 * x * x - 2.0 * x + 1.0, -1.0, 2.0);
        assert!((i.value - 9.0).abs() < 1e-13);
    }

    #[test]
    fn oscillatory_and_peaked() {
        let i = run(|x| x.sin(), 0.0, PI);
        assert!((i.value - 2.0).abs() < 1e-12);
        let i = run(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0);
        let exact = 2.0 * (1.0 / 1e-2) * (1.0_f64 / 1e-2).atan();
        assert!((i.value - exact).abs() < 1e-9 * exact);
    }

    #[test]
    fn endpoint_singularity() {
        let i = run(|x| 1.0 / x.sqrt(), 0.0, 1.0);
        assert!((i.value - 2.0).abs() < 1e-8);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let i = run(|x| x.exp(), 1.0, 0.0);
        assert!((i.value + (1f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn divergent_integral_fails() {
        let err = integrate(|x| Ok(1.0 / x), 0.0, 1.0, Tolerance::default(), "test").unwrap_err();
        assert_eq!(err.code(), "quadrature_error");
    }

    #[test]
    fn integrand_errors_propagate() {
        let err = integrate(
            |x| {
                if x > 0.5 {
                    Err(Error::domain("inner", "boom"))
                } else {
                    Ok(x)
                }
            },
            0.0,
            1.0,
            Tolerance::default(),
            "test",
        )
        .unwrap_err();
        assert_eq!(err.op(), "inner");
    }
}
