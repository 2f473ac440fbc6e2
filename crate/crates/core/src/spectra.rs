//! Trigonometric polynomials on the torus.
//!
//! A [`TrigPolynomial`] is `P(θ) = Σ_{n=lo}^{hi} c_n e^{2πinθ}` with complex
//! coefficients on a contiguous integer support. L² norms come from the
//! coefficients (Parseval), never from quadrature. Sup norms are estimated on
//! a uniform grid evaluated by one FFT, together with a certified error bound:
//! the true supremum lies in `[value, value + error_bound]`.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::par;
use crate::report::ExperimentReport;
use crate::seq::WeightSequence;
use crate::util::{e2pi, ksum, KahanComplex};
use crate::{Error, Result};

const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Largest FFT grid we are willing to allocate (1 GiB of complex doubles
/// would be 2^26; stay one notch below).
const MAX_GRID: usize = 1 << 25;

/// A complex sequence stored on a contiguous integer window
/// `start..start + values.len()`.
#[derive(Clone, Copy, Debug)]
pub struct Window<'a> {
    pub start: i64,
    pub values: &'a [Complex64],
}

impl<'a> Window<'a> {
    pub fn new(start: i64, values: &'a [Complex64]) -> Self {
        Self { start, values }
    }

    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64
    }

    pub fn get(&self, n: i64) -> Result<Complex64> {
        if n < self.start || n >= self.end() {
            return Err(Error::Range(format!(
                "index {n} outside window [{}, {})",
                self.start,
                self.end()
            )));
        }
        Ok(self.values[(n - self.start) as usize])
    }

    /// Value at `n`, reading 0 outside the window (finitely supported model).
    pub fn get_or_zero(&self, n: i64) -> Complex64 {
        if n < self.start || n >= self.end() {
            Complex64::new(0.0, 0.0)
        } else {
            self.values[(n - self.start) as usize]
        }
    }
}

impl WeightSequence {
    /// View the sequence as the window `1..=N`.
    pub fn window(&self) -> Window<'_> {
        Window::new(1, self.values())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrigPolynomial {
    lo: i64,
    coeffs: Vec<Complex64>,
}

impl TrigPolynomial {
    /// Coefficients `c_{lo}, c_{lo+1}, ..` on the support starting at `lo`.
    pub fn new(lo: i64, coeffs: Vec<Complex64>) -> Self {
        Self { lo, coeffs }
    }

    pub fn zero() -> Self {
        Self { lo: 0, coeffs: vec![Complex64::new(0.0, 0.0)] }
    }

    /// Single coefficient `c` at frequency `n`.
    pub fn monomial(n: i64, c: Complex64) -> Self {
        Self { lo: n, coeffs: vec![c] }
    }

    pub fn support(&self) -> (i64, i64) {
        (self.lo, self.lo + self.coeffs.len() as i64 - 1)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Coefficient at frequency `n` (zero off support).
    pub fn coeff(&self, n: i64) -> Complex64 {
        if n < self.lo || n >= self.lo + self.coeffs.len() as i64 {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(n - self.lo) as usize]
        }
    }

    /// Degree bound `max(|lo|, |hi|)`.
    pub fn degree(&self) -> i64 {
        let (lo, hi) = self.support();
        lo.abs().max(hi.abs())
    }

    /// Exact evaluation `Σ c_n e^{2πinθ}` with compensated summation.
    pub fn eval(&self, theta: f64) -> Complex64 {
        let mut acc = KahanComplex::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            let n = self.lo + i as i64;
            acc.add(c * e2pi(n as f64 * theta));
        }
        acc.value()
    }

    /// `Σ |c_n|²` (squared torus L² norm, by Parseval).
    pub fn l2_norm_sqr(&self) -> f64 {
        ksum(self.coeffs.iter().map(|c| c.norm_sqr()))
    }

    pub fn l2_norm(&self) -> f64 {
        self.l2_norm_sqr().sqrt()
    }

    /// Wiener algebra norm `Σ |c_n|`.
    pub fn wiener_norm(&self) -> f64 {
        ksum(self.coeffs.iter().map(|c| c.norm()))
    }

    /// `P'` with respect to θ: coefficient `2πi n c_n` at frequency `n`.
    pub fn derivative(&self) -> TrigPolynomial {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| Complex64::new(0.0, TAU * (self.lo + i as i64) as f64) * c)
            .collect();
        TrigPolynomial::new(self.lo, coeffs)
    }

    /// Multiply by `e^{2πi·shift·θ}` (support translates by `shift`).
    pub fn modulated(&self, shift: i64) -> TrigPolynomial {
        TrigPolynomial::new(self.lo + shift, self.coeffs.clone())
    }

    /// Coefficient-wise difference on the union of supports.
    pub fn sub(&self, other: &TrigPolynomial) -> TrigPolynomial {
        let lo = self.lo.min(other.lo);
        let hi = (self.support().1).max(other.support().1);
        let coeffs = (lo..=hi).map(|n| self.coeff(n) - other.coeff(n)).collect();
        TrigPolynomial::new(lo, coeffs)
    }

    /// Values on the uniform grid `θ_g = g/grid_len`, computed by a single
    /// (inverse-direction, unnormalized) FFT. Exact up to rounding: reducing
    /// frequencies mod the grid length does not change values at grid points.
    pub fn grid_values(&self, grid_len: usize) -> Result<Vec<Complex64>> {
        if grid_len == 0 || grid_len > MAX_GRID {
            return Err(Error::Capacity(format!(
                "grid of {grid_len} points outside supported range"
            )));
        }
        let mut buf = vec![Complex64::new(0.0, 0.0); grid_len];
        let g = grid_len as i64;
        for (i, &c) in self.coeffs.iter().enumerate() {
            let n = (self.lo + i as i64).rem_euclid(g) as usize;
            buf[n] += c;
        }
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_inverse(grid_len);
        fft.process(&mut buf);
        Ok(buf)
    }
}

/// A certified two-sided sup-norm estimate: the true supremum of `|P|` lies
/// in `[value, value + error_bound]`, and `value = |P(argmax_theta)|`.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct SupEstimate {
    pub value: f64,
    pub error_bound: f64,
    pub argmax_theta: f64,
}

/// Grid + Bernstein certified estimate of `sup_θ |P(θ)|`.
///
/// The grid has `oversample · (2·deg + 1)` points rounded up to a power of
/// two. Two valid upper bounds on `sup - value` are combined:
/// * `h · 2π·deg · Σ|c_n|` (derivative bounded through the coefficients),
/// * `value · π·deg·h / (1 - π·deg·h)` (derivative bounded through the yet
///   unknown sup itself, solved for the sup),
///
/// with `h` the grid spacing; the reported `error_bound` is their minimum.
/// The second form is what keeps bounds meaningful for long Möbius-weighted
/// sums, where `Σ|c_n|` is of order N times the sup.
pub fn sup_norm(p: &TrigPolynomial, oversample: u32) -> Result<SupEstimate> {
    if p.coeffs.is_empty() {
        return Err(Error::DegeneratePolynomial("empty coefficient support".into()));
    }
    if oversample < 4 {
        return Err(Error::Precondition("oversample must be at least 4".into()));
    }
    let deg = p.degree().max(1) as u64;
    let raw = (oversample as u64)
        .checked_mul(2 * deg + 1)
        .filter(|&r| r <= MAX_GRID as u64)
        .ok_or_else(|| {
            Error::Capacity(format!(
                "certified grid exceeds {MAX_GRID} points; reduce degree or oversample"
            ))
        })?;
    let grid_len = raw.next_power_of_two() as usize;
    if grid_len > MAX_GRID {
        return Err(Error::Capacity(format!(
            "certified grid needs {grid_len} points (max {MAX_GRID}); reduce degree or oversample"
        )));
    }
    let values = p.grid_values(grid_len)?;
    let (arg, value) = par::argmax_norm(&values);
    let h = 1.0 / grid_len as f64;
    let coeff_route = h * TAU * deg as f64 * p.wiener_norm();
    let self_route = {
        let t = std::f64::consts::PI * deg as f64 * h;
        if t < 1.0 {
            value * t / (1.0 - t)
        } else {
            f64::INFINITY
        }
    };
    Ok(SupEstimate {
        value,
        error_bound: coeff_route.min(self_route),
        argmax_theta: arg as f64 * h,
    })
}

/// Sequential variant of [`sup_norm`] (same result; used by benches).
pub fn sup_norm_seq(p: &TrigPolynomial, oversample: u32) -> Result<SupEstimate> {
    if p.coeffs.is_empty() {
        return Err(Error::DegeneratePolynomial("empty coefficient support".into()));
    }
    if oversample < 4 {
        return Err(Error::Precondition("oversample must be at least 4".into()));
    }
    let deg = p.degree().max(1) as u64;
    let raw = (oversample as u64)
        .checked_mul(2 * deg + 1)
        .filter(|&r| r <= MAX_GRID as u64)
        .ok_or_else(|| {
            Error::Capacity(format!(
                "certified grid exceeds {MAX_GRID} points; reduce degree or oversample"
            ))
        })?;
    let grid_len = raw.next_power_of_two() as usize;
    let values = p.grid_values(grid_len)?;
    let (arg, value) = par::argmax_norm_seq(&values);
    let h = 1.0 / grid_len as f64;
    let coeff_route = h * TAU * deg as f64 * p.wiener_norm();
    let t = std::f64::consts::PI * deg as f64 * h;
    let self_route = if t < 1.0 { value * t / (1.0 - t) } else { f64::INFINITY };
    Ok(SupEstimate {
        value,
        error_bound: coeff_route.min(self_route),
        argmax_theta: arg as f64 * h,
    })
}

/// Local polynomial `P_{x,N}(θ) = (1/N) Σ_{n=x-N}^{x-1} e^{2πinθ} ψ(n)`.
pub fn local_poly(psi: &Window<'_>, x: i64, n: u64) -> Result<TrigPolynomial> {
    if n == 0 {
        return Err(Error::Precondition("window length N must be >= 1".into()));
    }
    let n_i = n as i64;
    let coeffs: Result<Vec<Complex64>> = (x - n_i..x)
        .map(|k| psi.get(k).map(|v| v / n as f64))
        .collect();
    Ok(TrigPolynomial::new(x - n_i, coeffs?))
}

/// Weighted local polynomial
/// `Q_{x,N}(θ) = (1/N) Σ_{x-N<=n<x} ν_x(n) e^{-2πinθ} ψ(n)` with
/// `ν_x(n) = ν(n+x)`.
///
/// The exponent is conjugated, so the coefficient attached to `ψ(n)` is
/// stored at frequency `-n`; the support is `[1-x, N-x]` and the modulation
/// `e^{2πixθ} Q_{x,N}` lives on `[1, N]`.
pub fn weighted_local_poly(
    nu: &Window<'_>,
    psi: &Window<'_>,
    x: i64,
    n: u64,
) -> Result<TrigPolynomial> {
    if n == 0 {
        return Err(Error::Precondition("window length N must be >= 1".into()));
    }
    let n_i = n as i64;
    // Frequency -n for n in [x-N, x-1] descending gives ascending support.
    let coeffs: Result<Vec<Complex64>> = (1 - x..=n_i - x)
        .map(|freq| {
            let idx = -freq;
            let w = nu.get(idx + x)?;
            let v = psi.get(idx)?;
            Ok(w * v / n as f64)
        })
        .collect();
    Ok(TrigPolynomial::new(1 - x, coeffs?))
}

/// Checks `‖φ‖_A <= (π/√3) √‖φ‖₂ √‖φ'‖₂` for a mean-zero polynomial.
pub fn wiener_carlson_report(p: &TrigPolynomial) -> Result<ExperimentReport> {
    if p.coeff(0).norm() != 0.0 {
        return Err(Error::Precondition(
            "Wiener-Carlson bound needs a mean-zero polynomial (c_0 = 0)".into(),
        ));
    }
    let lhs = p.wiener_norm();
    let rhs =
        std::f64::consts::PI / 3f64.sqrt() * p.l2_norm().sqrt() * p.derivative().l2_norm().sqrt();
    let mut report = ExperimentReport::new(
        &[("operation", "wiener_carlson".into())],
        None,
        &["lhs", "rhs"],
    );
    report.push_row(vec![lhs, rhs]);
    report.set_flag("holds", lhs <= rhs + 1e-12);
    Ok(report)
}

/// Convolution bound `‖F^{-1}(P·F(φ))‖_∞ <= ‖P‖_A · ‖φ‖_∞` for a finitely
/// supported sequence φ; the left side is computed as the explicit discrete
/// convolution of the coefficient sequence of `P` with φ.
pub fn convolution_bound_report(p: &TrigPolynomial, phi: &Window<'_>) -> ExperimentReport {
    let (plo, phi_hi) = p.support();
    let out_lo = plo + phi.start;
    let out_hi = phi_hi + phi.end() - 1;
    let mut sup: f64 = 0.0;
    for k in out_lo..=out_hi {
        let mut acc = KahanComplex::new();
        for (i, &c) in p.coeffs.iter().enumerate() {
            let n = p.lo + i as i64;
            acc.add(c * phi.get_or_zero(k - n));
        }
        sup = sup.max(acc.value().norm());
    }
    let phi_sup = phi.values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let rhs = p.wiener_norm() * phi_sup;
    let mut report = ExperimentReport::new(
        &[("operation", "convolution_bound".into())],
        None,
        &["lhs", "rhs"],
    );
    report.push_row(vec![sup, rhs]);
    report.set_flag("holds", sup <= rhs + 1e-12);
    report
}

/// Normalized sup of the power-frequency sum:
/// `sup_θ |Σ_{n<=N} w(n) e^{2πi n^k θ}| / N` for each `N` in `n_list`.
pub fn power_sum_profile(
    w: &WeightSequence,
    k: u32,
    n_list: &[u64],
    oversample: u32,
) -> Result<ExperimentReport> {
    if k == 0 {
        return Err(Error::Precondition("power k must be >= 1".into()));
    }
    let mut report = ExperimentReport::new(
        &[("operation", "power_sum_profile".into()), ("k", k.to_string())],
        None,
        &["n", "value", "error_bound", "argmax_theta"],
    );
    for &n in n_list {
        if n > w.len() {
            return Err(Error::Range(format!("N = {n} exceeds stored length {}", w.len())));
        }
        let top = (n as i64)
            .checked_pow(k)
            .ok_or_else(|| Error::Capacity(format!("{n}^{k} overflows signed 64-bit frequencies")))?;
        let mut coeffs = vec![Complex64::new(0.0, 0.0); top as usize];
        for m in 1..=n {
            let f = (m as i64).pow(k);
            coeffs[(f - 1) as usize] = w.get(m) / n as f64;
        }
        let est = sup_norm(&TrigPolynomial::new(1, coeffs), oversample)?;
        report.push_row(vec![n as f64, est.value, est.error_bound, est.argmax_theta]);
    }
    Ok(report)
}

/// Short-interval profile `sup_θ |Σ_{N<=n<N+M} w(n) e^{2πinθ}| / M`.
///
/// Frequencies are recentred to `[0, M)`; multiplying by the unimodular
/// `e^{2πiNθ}` does not change the supremum, and it keeps the certified grid
/// proportional to `M` rather than `N + M`.
pub fn short_interval_profile(
    w: &WeightSequence,
    n: u64,
    m: u64,
    oversample: u32,
) -> Result<ExperimentReport> {
    if m == 0 {
        return Err(Error::Precondition("interval length M must be >= 1".into()));
    }
    if n == 0 || n + m - 1 > w.len() {
        return Err(Error::Range(format!(
            "window [{n}, {}) exceeds stored length {}",
            n + m,
            w.len()
        )));
    }
    let coeffs: Vec<Complex64> = (0..m).map(|j| w.get(n + j) / m as f64).collect();
    let est = sup_norm(&TrigPolynomial::new(0, coeffs), oversample)?;
    let mut report = ExperimentReport::new(
        &[("operation", "short_interval_profile".into())],
        None,
        &["n", "m", "value", "error_bound", "argmax_theta"],
    );
    report.push_row(vec![n as f64, m as f64, est.value, est.error_bound, est.argmax_theta]);
    Ok(report)
}
