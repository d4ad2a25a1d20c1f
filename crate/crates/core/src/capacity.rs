//! Closed-form quantum-channel capacities and cumulative capacity.
//!
//! Four channel families are supported: the broadband lossy bosonic channel
//! (classical capacity), the far-field free-space optical channel (classical
//! capacity through a power constraint), the single-mode attenuation channel
//! (quantum capacity), and the two-dimensional qubit channel with a qubit
//! environment (quantum capacity). Parameters are taken as dimensionless
//! ratios so that no unit system is baked in.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::numeric;

/// `g(x) = (x+1) log2(x+1) - x log2 x`, the entropy of a thermal bosonic mode
/// with mean photon number `x`. Continuous at zero with `g(0) = 0`.
pub fn g_function(x: f64) -> Result<f64> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("g(x) requires finite x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(((x + 1.0) * x.ln_1p() - x * x.ln()) / LN_2)
}

/// Binary entropy `h(x) = -x log2 x - (1-x) log2 (1-x)`.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("binary entropy requires x in [0, 1], got {x}")));
    }
    Ok(xlog2x(x) + xlog2x(1.0 - x))
}

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Classical capacity (bits/s) of the broadband lossy channel with uniform
/// transmissivity `eta` and power ratio `P/hbar`.
pub fn broadband_lossy_capacity(eta: f64, power_ratio: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::domain(format!("transmissivity must lie in [0, 1], got {eta}")));
    }
    if !(power_ratio >= 0.0) || !power_ratio.is_finite() {
        return Err(Error::domain(format!("power ratio must be finite and >= 0, got {power_ratio}")));
    }
    Ok(eta.sqrt() / LN_2 * (PI * power_ratio / 3.0).sqrt())
}

/// Upper limit for the free-space `y0` search.
pub const FREESPACE_Y0_CEILING: f64 = 1e6;
const FREESPACE_Y0_FLOOR: f64 = 1e-9;
const FREESPACE_ROOT_TOL: f64 = 1e-10;
const QUAD_TOL: f64 = 1e-13;

/// Mean photon number of a thermal mode at reduced frequency `x`:
/// `1 / (e^{1/x} - 1)`, extended by 0 at `x = 0`.
fn thermal_occupation(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let m = (1.0 / x).exp_m1();
    if m.is_infinite() {
        0.0
    } else {
        1.0 / m
    }
}

/// `∫_0^y (1/x) · 1/(e^{1/x} - 1) dx`, the normalised transmitted power.
pub fn freespace_power_integral(y0: f64) -> Result<f64> {
    numeric::integrate(
        |x| if x <= 0.0 { 0.0 } else { thermal_occupation(x) / x },
        0.0,
        y0,
        QUAD_TOL,
        QUAD_TOL,
    )
}

/// Solves the free-space power constraint `P/P0 = ∫_0^{y0} dx/x · 1/(e^{1/x}-1)`
/// for `y0`.
pub fn freespace_y0(power_ratio: f64) -> Result<f64> {
    if !(power_ratio > 0.0) || !power_ratio.is_finite() {
        return Err(Error::domain(format!("free-space power ratio must be > 0, got {power_ratio}")));
    }
    let residual = |y: f64| Ok(freespace_power_integral(y)? - power_ratio);
    let mut hi = 1.0;
    while residual(hi)? < 0.0 {
        hi *= 2.0;
        if hi > FREESPACE_Y0_CEILING {
            return Err(Error::Unsolvable(format!(
                "no y0 below {FREESPACE_Y0_CEILING} satisfies power ratio {power_ratio}"
            )));
        }
    }
    if residual(FREESPACE_Y0_FLOOR)? >= 0.0 {
        return Ok(FREESPACE_Y0_FLOOR);
    }
    numeric::bisect(residual, FREESPACE_Y0_FLOOR, hi, FREESPACE_ROOT_TOL)
}

/// Classical capacity (bits/s) of the far-field free-space channel with
/// cutoff frequency `omega_c` (rad/s) and power ratio `P/P0`.
pub fn freespace_capacity(omega_c: f64, power_ratio: f64) -> Result<f64> {
    let y0 = freespace_y0(power_ratio)?;
    let integral = numeric::integrate(
        |x| g_function(thermal_occupation(x)).unwrap_or(0.0),
        0.0,
        y0,
        QUAD_TOL,
        QUAD_TOL,
    )?;
    Ok(omega_c / (2.0 * PI * y0) * integral)
}

/// Quantum capacity (qubits/use) of the attenuation channel with
/// `eta = exp(-l / l_a)`: `log2|eta| - log2|1 - eta|`. The raw value is
/// returned; it is negative when `eta < 1/2`.
pub fn attenuation_quantum_capacity(l: f64, l_a: f64) -> Result<f64> {
    if !(l_a > 0.0) || !l_a.is_finite() || !l.is_finite() {
        return Err(Error::domain(format!("need finite l and l_a > 0, got l={l}, l_a={l_a}")));
    }
    let exponent = -l / l_a;
    if exponent == 0.0 {
        return Err(Error::InfiniteCapacity("eta = 1 (l = 0) gives unbounded capacity".into()));
    }
    let eta = exponent.exp();
    if eta == 0.0 {
        return Err(Error::domain(format!("eta = exp({exponent}) underflows to 0")));
    }
    // log2|eta| is exactly exponent / ln 2; |1 - eta| via expm1 keeps precision near eta = 1.
    Ok(exponent / LN_2 - exponent.exp_m1().abs().log2())
}

/// Objective maximised by the qubit-channel capacity for input weight `p`.
pub fn qubit_objective(alpha: f64, beta: f64, p: f64) -> f64 {
    let (ca2, sa2, sb2) = (alpha.cos().powi(2), alpha.sin().powi(2), beta.sin().powi(2));
    let clamp = |v: f64| v.clamp(0.0, 1.0);
    let out = clamp(p * ca2 + (1.0 - p) * sb2);
    let env = clamp(p * sa2 + (1.0 - p) * sb2);
    binary_entropy(out).unwrap_or(0.0) - binary_entropy(env).unwrap_or(0.0)
}

const QUBIT_GRID: usize = 1024;
const QUBIT_TOL: f64 = 1e-10;

/// Maximiser `p*` and capacity of the qubit channel. Returns `(p*, 0)` with
/// `p* = 0` outside the nonzero-capacity region `cos 2α / cos 2β > 0`.
pub fn qubit_channel_optimum(alpha: f64, beta: f64) -> (f64, f64) {
    if (2.0 * alpha).cos() * (2.0 * beta).cos() <= 0.0 {
        return (0.0, 0.0);
    }
    let f = |p: f64| qubit_objective(alpha, beta, p);
    let step = 1.0 / (QUBIT_GRID - 1) as f64;
    let (best_i, _) = (0..QUBIT_GRID)
        .map(|i| (i, f(i as f64 * step)))
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v > acc.1 { (i, v) } else { acc });
    let lo = best_i.saturating_sub(1) as f64 * step;
    let hi = ((best_i + 1).min(QUBIT_GRID - 1)) as f64 * step;
    let (p, neg) = numeric::golden_section_min(|p| -f(p), lo, hi, QUBIT_TOL);
    let grid_best = f(best_i as f64 * step);
    let (p, q) = if -neg >= grid_best { (p, -neg) } else { (best_i as f64 * step, grid_best) };
    (p, q.clamp(0.0, 1.0))
}

/// Quantum capacity (qubits/use) of the qubit channel with Kraus angles
/// `alpha`, `beta`.
pub fn qubit_channel_capacity(alpha: f64, beta: f64) -> f64 {
    qubit_channel_optimum(alpha, beta).1
}

/// Parameters of one of the closed-form channel models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ChannelSpec {
    /// Broadband lossy bosonic channel; `power_ratio` is `P/hbar`.
    BroadbandLossy { eta: f64, power_ratio: f64 },
    /// Far-field free-space channel; `power_ratio` is `P/P0`.
    FreeSpace { omega_c: f64, power_ratio: f64 },
    /// Single-mode attenuation channel with `eta = exp(-l / l_a)`.
    Attenuation { l: f64, l_a: f64 },
    /// Qubit channel with a qubit environment.
    Qubit { alpha: f64, beta: f64 },
}

impl ChannelSpec {
    /// Capacity per slot; classical bits for the bosonic classical models,
    /// qubits for the quantum models. May be negative for `Attenuation`.
    pub fn capacity(&self) -> Result<f64> {
        let c = match *self {
            ChannelSpec::BroadbandLossy { eta, power_ratio } => broadband_lossy_capacity(eta, power_ratio)?,
            ChannelSpec::FreeSpace { omega_c, power_ratio } => freespace_capacity(omega_c, power_ratio)?,
            ChannelSpec::Attenuation { l, l_a } => attenuation_quantum_capacity(l, l_a)?,
            ChannelSpec::Qubit { alpha, beta } => qubit_channel_capacity(alpha, beta),
        };
        if c.is_finite() {
            Ok(c)
        } else {
            Err(Error::Numerical(format!("capacity of {self:?} is not finite")))
        }
    }

    /// `[Q]^+`: the capacity clipped at zero.
    pub fn usable_capacity(&self) -> Result<f64> {
        Ok(self.capacity()?.max(0.0))
    }

    pub fn unit(&self) -> CapacityUnit {
        match self {
            ChannelSpec::BroadbandLossy { .. } | ChannelSpec::FreeSpace { .. } => CapacityUnit::ClassicalBits,
            ChannelSpec::Attenuation { .. } | ChannelSpec::Qubit { .. } => CapacityUnit::Qubits,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapacityUnit {
    ClassicalBits,
    Qubits,
}

/// Per-slot capacities over a run of time slots.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacitySequence {
    pub values: Vec<f64>,
    pub unit: CapacityUnit,
}

impl CapacitySequence {
    pub fn new(values: Vec<f64>, unit: CapacityUnit) -> Self {
        Self { values, unit }
    }

    /// `S(m, n)`: total capacity of slots `m..=n`.
    pub fn cumulative(&self, m: usize, n: usize) -> Result<f64> {
        let len = self.values.len();
        if n >= len {
            return Err(Error::IndexOutOfRange { index: n, len });
        }
        if m > n {
            return Err(Error::IndexOutOfRange { index: m, len: n + 1 });
        }
        Ok(self.values[m..=n].iter().sum())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_function_values() {
        assert_eq!(g_function(0.0).unwrap(), 0.0);
        assert!((g_function(1.0).unwrap() - 2.0).abs() < 1e-15);
        // 4 log2 4 - 3 log2 3
        let oracle = 8.0 - 3.0 * 3f64.log2();
        assert!((g_function(3.0).unwrap() - oracle).abs() < 1e-14);
        assert!((g_function(3.0).unwrap() - 3.245_112_497_836_531).abs() < 1e-12);
        assert!(matches!(g_function(-1e-3), Err(Error::Domain(_))));
    }

    #[test]
    fn g_is_increasing_and_concave() {
        let h = 1e-3;
        for i in 1..500 {
            let x = i as f64 * 0.05;
            let (a, b, c) = (g_function(x - h).unwrap(), g_function(x).unwrap(), g_function(x + h).unwrap());
            assert!(c > b && b > a, "not increasing at {x}");
            assert!(a + c - 2.0 * b < 0.0, "not concave at {x}");
        }
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.5).unwrap(), 1.0);
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        let oracle = -(0.25f64 * 0.25f64.log2() + 0.75 * 0.75f64.log2());
        assert!((binary_entropy(0.25).unwrap() - oracle).abs() < 1e-15);
        assert!((oracle - 0.811_278_124_459_132_8).abs() < 1e-12);
        assert!(binary_entropy(1.5).is_err());
        assert!(binary_entropy(-0.1).is_err());
    }

    #[test]
    fn broadband_values() {
        assert_eq!(broadband_lossy_capacity(0.0, 7.0).unwrap(), 0.0);
        let ratio = 3.0 / PI;
        assert!((broadband_lossy_capacity(1.0, ratio).unwrap() - 1.0 / LN_2).abs() < 1e-12);
        assert!((broadband_lossy_capacity(0.25, ratio).unwrap() - 0.721_347_520_444_481_7).abs() < 1e-9);
        assert!(broadband_lossy_capacity(1.2, ratio).is_err());
    }

    #[test]
    fn attenuation_values() {
        let l_a = 50.0;
        assert!(attenuation_quantum_capacity(l_a * LN_2, l_a).unwrap().abs() < 1e-12);
        // eta = 2/3
        let l = -l_a * (2.0f64 / 3.0).ln();
        assert!((attenuation_quantum_capacity(l, l_a).unwrap() - 1.0).abs() < 1e-12);
        let eta = (-0.2f64).exp();
        let oracle = eta.log2() - (1.0 - eta).log2();
        assert!((attenuation_quantum_capacity(10.0, 50.0).unwrap() - oracle).abs() < 1e-12);
        assert!(matches!(attenuation_quantum_capacity(0.0, 1.0), Err(Error::InfiniteCapacity(_))));
        assert!(matches!(attenuation_quantum_capacity(1.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn attenuation_sign_tracks_half_transmissivity() {
        for i in 1..200 {
            let l = i as f64 * 0.05;
            let eta = (-l).exp();
            let q = attenuation_quantum_capacity(l, 1.0).unwrap();
            if eta > 0.5 + 1e-12 {
                assert!(q > 0.0);
            } else if eta < 0.5 - 1e-12 {
                assert!(q < 0.0);
            }
        }
    }

    #[test]
    fn qubit_special_cases() {
        assert!((qubit_channel_capacity(0.0, 0.0) - 1.0).abs() < 1e-12);
        assert_eq!(qubit_channel_capacity(PI / 2.0, 0.0), 0.0);
    }

    #[test]
    fn qubit_returned_optimum_matches_dense_grid() {
        for &(a, b) in &[(0.3, 0.1), (PI / 8.0, PI / 8.0), (0.2, 0.0), (0.6, 0.25)] {
            let (p, q) = qubit_channel_optimum(a, b);
            let grid_max = (0..=10_000)
                .map(|i| qubit_objective(a, b, i as f64 / 10_000.0))
                .fold(f64::NEG_INFINITY, f64::max);
            assert!(q >= grid_max - 1e-9, "({a},{b}): {q} < {grid_max}");
            assert!((qubit_objective(a, b, p) - q).abs() < 1e-12);
        }
    }

    #[test]
    fn channel_spec_units_and_usable() {
        let spec = ChannelSpec::Attenuation { l: 50.0, l_a: 50.0 };
        assert!(spec.capacity().unwrap() < 0.0);
        assert_eq!(spec.usable_capacity().unwrap(), 0.0);
        assert_eq!(spec.unit(), CapacityUnit::Qubits);
    }

    #[test]
    fn cumulative_capacity_ranges() {
        let seq = CapacitySequence::new(vec![1.5; 10], CapacityUnit::Qubits);
        assert_eq!(seq.cumulative(0, 9).unwrap(), 15.0);
        assert_eq!(seq.cumulative(4, 4).unwrap(), 1.5);
        assert!(seq.cumulative(0, 10).is_err());
        assert!(seq.cumulative(5, 4).is_err());
    }
}
