//! Scalar numerical routines shared by the capacity and bound modules:
//! adaptive quadrature, bracketing root finding, golden-section search,
//! and overflow-safe log-sum-exp.

use crate::error::{Error, Result};

/// 15-point Kronrod nodes on [-1, 1] (non-negative half, descending).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// 7-point Gauss weights matching the odd Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_DEPTH: u32 = 60;

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, (&x, &w)) in XGK.iter().zip(WGK.iter()).take(7).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    err: f64,
    tol: f64,
    depth: u32,
) -> Result<f64> {
    if err <= tol || (b - a).abs() <= f64::EPSILON * a.abs().max(b.abs()) {
        return Ok(whole);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::Numerical(format!(
            "adaptive quadrature did not converge on [{a}, {b}]"
        )));
    }
    let mid = 0.5 * (a + b);
    let (left, left_err) = gauss_kronrod(f, a, mid);
    let (right, right_err) = gauss_kronrod(f, mid, b);
    Ok(adapt(f, a, mid, left, left_err, 0.5 * tol, depth + 1)?
        + adapt(f, mid, b, right, right_err, 0.5 * tol, depth + 1)?)
}

/// Integrates `f` over `[a, b]` by recursive Gauss-Kronrod (7/15) bisection
/// until the estimated error is below `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (whole, err) = gauss_kronrod(&f, a, b);
    if !whole.is_finite() {
        return Err(Error::Numerical("non-finite integrand".into()));
    }
    let tol = abs_tol.max(rel_tol * whole.abs());
    adapt(&f, a, b, whole, err, tol, 0)
}

/// Bisection for an increasing-sign bracket: requires `f(lo) <= 0 < f(hi)`
/// (or the mirrored signs). Stops when the bracket width falls below
/// `tol * max(1, |hi|)`.
pub fn bisect<F: FnMut(f64) -> Result<f64>>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo.signum() == f_hi.signum() && f_lo != 0.0 && f_hi != 0.0 {
        return Err(Error::Unsolvable(format!("no sign change on [{lo}, {hi}]")));
    }
    let rising = f_hi > f_lo;
    for _ in 0..400 {
        if (hi - lo).abs() <= tol * hi.abs().max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let v = f(mid)?;
        if (v <= 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section minimisation of `f` on `[lo, hi]`. Returns the best
/// abscissa seen and its value. Non-finite evaluations count as `+inf`.
pub fn golden_section_min<F: FnMut(f64) -> f64>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let mut eval = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    for _ in 0..200 {
        if (hi - lo).abs() <= tol {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = eval(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = eval(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// `log(sum(exp(v)))` with max-shift; `-inf` for an empty or all `-inf` input.
pub fn log_sum_exp<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let values: Vec<f64> = values.into_iter().collect();
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        return max;
    }
    max + values.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n)
            .map(|i| {
                if i == n - 1 {
                    b
                } else {
                    a + (b - a) * i as f64 / (n - 1) as f64
                }
            })
            .collect(),
    }
}

/// `n` log-spaced points from `a` to `b` inclusive (both positive).
pub fn logspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    linspace(a.ln(), b.ln(), n)
        .into_iter()
        .enumerate()
        .map(|(i, l)| if i == 0 { a } else if i + 1 == n { b } else { l.exp() })
        .collect()
}
