//! Gowers uniformity norms on cyclic groups and intervals.
//!
//! All cyclic-group averages are normalized: the inner product divides by
//! `M^{d+1}`, so `‖1‖_{U^d(Z/M)} = 1` and norms are scale-free. The interval
//! norm embeds `f(1..=N)` into `Z/(2^d N)Z` and divides by the norm of the
//! interval indicator; zero-padding by the factor `2^d` removes wraparound,
//! so only genuine integer parallelepipeds inside `[1, N]` contribute.
//!
//! Route selection: `d = 2` uses the Fourier identity
//! `‖f‖_{U²}⁴ = Σ_ξ |f̂(ξ)|⁴`; `d >= 3` recurses through discrete derivatives
//! `‖f‖_{U^d}^{2^d} = (1/M) Σ_h ‖∂_h f‖_{U^{d-1}}^{2^{d-1}}` down to the
//! Fourier base. The brute-force parallelepiped sum lives in [`crate::oracle`]
//! and is only used to check these routes.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::report::ExperimentReport;
use crate::spectra::{sup_norm, SupEstimate, TrigPolynomial};
use crate::util::{ksum, ksum_complex};
use crate::{par, Error, Result};

/// A complex sequence on `Z/M` (indices wrap).
#[derive(Clone, Debug, PartialEq)]
pub struct CyclicSequence {
    values: Vec<Complex64>,
}

impl CyclicSequence {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Shape("cyclic sequence needs modulus >= 1".into()));
        }
        Ok(Self { values })
    }

    pub fn modulus(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Value at `x mod M`.
    pub fn get(&self, x: i64) -> Complex64 {
        let m = self.values.len() as i64;
        self.values[x.rem_euclid(m) as usize]
    }

    /// The translate `x ↦ f(x + a)`.
    pub fn shifted(&self, a: i64) -> CyclicSequence {
        let m = self.values.len();
        let values = (0..m as i64).map(|x| self.get(x + a)).collect();
        CyclicSequence { values }
    }

    /// Normalized Fourier coefficients `f̂(ξ) = (1/M) Σ_x f(x) e^{-2πixξ/M}`.
    pub fn fourier(&self) -> Vec<Complex64> {
        let m = self.values.len();
        let mut buf = self.values.clone();
        let mut planner = FftPlanner::new();
        planner.plan_fft_forward(m).process(&mut buf);
        for v in &mut buf {
            *v /= m as f64;
        }
        buf
    }
}

/// Discrete derivative `∂_h(f)(x) = f(x+h) · conj(f(x))`.
pub fn discrete_derivative(f: &CyclicSequence, h: i64) -> CyclicSequence {
    let m = f.modulus() as i64;
    let values = (0..m).map(|x| f.get(x + h) * f.get(x).conj()).collect();
    CyclicSequence { values }
}

#[derive(Clone, Debug, serde::Serialize)]
pub struct GowersResult {
    pub d: u32,
    pub norm: f64,
    /// `norm^{2^d}` before the root (clamped at 0 when roundoff makes a
    /// single-function inner product slightly negative).
    pub raw_power: f64,
    pub method: String,
}

fn check_degree(d: u32) -> Result<()> {
    if d == 0 {
        return Err(Error::Precondition("Gowers degree d must be >= 1".into()));
    }
    if d > 6 {
        return Err(Error::Capacity("Gowers degree capped at 6".into()));
    }
    Ok(())
}

/// `‖f‖_{U^d}^{2^d}` by the derivative recursion with the `d = 2` Fourier
/// base (`d = 1` is `|mean|²`).
fn gowers_power(f: &CyclicSequence, d: u32) -> f64 {
    match d {
        1 => {
            let m = f.modulus() as f64;
            (ksum_complex(f.values.iter().copied()) / m).norm_sqr()
        }
        2 => ksum(f.fourier().iter().map(|c| c.norm_sqr() * c.norm_sqr())),
        _ => {
            let m = f.modulus();
            let parts = par::map_indexed(m, |h| gowers_power(&discrete_derivative(f, h as i64), d - 1));
            ksum(parts) / m as f64
        }
    }
}

/// `U^d(Z/M)` norm of `f`.
pub fn gowers_norm_cyclic(f: &CyclicSequence, d: u32) -> Result<GowersResult> {
    check_degree(d)?;
    let raw = gowers_power(f, d).max(0.0);
    Ok(GowersResult {
        d,
        norm: raw.powf(1.0 / (1u64 << d) as f64),
        raw_power: raw,
        method: if d == 2 { "fourier".into() } else { "derivative_recursion".into() },
    })
}

/// `U^d(Z/M)` power by direct summation with shift-canonical accumulation:
/// per-base-point partial sums are sorted before the final reduction, so the
/// result is bit-identical under any cyclic shift of the input.
pub fn gowers_power_direct(f: &CyclicSequence, d: u32) -> Result<f64> {
    check_degree(d)?;
    let m = f.modulus();
    if (m as f64).powi(d as i32 + 1) > 2e9 {
        return Err(Error::Capacity(format!(
            "direct U^{d} summation over Z/{m} exceeds the practical cap"
        )));
    }
    let vertices = 1usize << d;
    let mut partials: Vec<Complex64> = par::map_indexed(m, |x| {
        let mut acc = crate::util::KahanComplex::new();
        let mut shifts = vec![0i64; d as usize];
        loop {
            let mut prod = Complex64::new(1.0, 0.0);
            for c in 0..vertices {
                let mut idx = x as i64;
                for (i, &h) in shifts.iter().enumerate() {
                    if c >> i & 1 == 1 {
                        idx += h;
                    }
                }
                let v = f.get(idx);
                prod *= if (c.count_ones()) % 2 == 1 { v.conj() } else { v };
            }
            acc.add(prod);
            let mut k = 0;
            loop {
                if k == shifts.len() {
                    return acc.value();
                }
                shifts[k] += 1;
                if shifts[k] < m as i64 {
                    break;
                }
                shifts[k] = 0;
                k += 1;
            }
        }
    });
    partials.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let total = ksum_complex(partials.into_iter());
    Ok(total.re / (m as f64).powi(d as i32 + 1))
}

/// Gowers inner product of a family indexed by cube vertices (bit `i` of the
/// index is coordinate `i`); odd-weight vertices are conjugated. Normalized
/// by `M^{d+1}`.
pub fn gowers_inner(family: &[CyclicSequence], d: u32) -> Result<Complex64> {
    check_degree(d)?;
    let vertices = 1usize << d;
    if family.len() != vertices {
        return Err(Error::Shape(format!(
            "family must have 2^{d} = {vertices} members, got {}",
            family.len()
        )));
    }
    let m = family[0].modulus();
    if family.iter().any(|f| f.modulus() != m) {
        return Err(Error::Shape("family members must share the modulus".into()));
    }
    if (m as f64).powi(d as i32 + 1) > 2e9 {
        return Err(Error::Capacity(format!(
            "inner product over Z/{m} at degree {d} exceeds the practical cap"
        )));
    }
    let partials: Vec<Complex64> = par::map_indexed(m, |x| {
        let mut acc = crate::util::KahanComplex::new();
        let mut shifts = vec![0i64; d as usize];
        loop {
            let mut prod = Complex64::new(1.0, 0.0);
            for (c, f) in family.iter().enumerate() {
                let mut idx = x as i64;
                for (i, &h) in shifts.iter().enumerate() {
                    if c >> i & 1 == 1 {
                        idx += h;
                    }
                }
                let v = f.get(idx);
                prod *= if (c.count_ones()) % 2 == 1 { v.conj() } else { v };
            }
            acc.add(prod);
            let mut k = 0;
            loop {
                if k == shifts.len() {
                    return acc.value();
                }
                shifts[k] += 1;
                if shifts[k] < m as i64 {
                    break;
                }
                shifts[k] = 0;
                k += 1;
            }
        }
    });
    Ok(ksum_complex(partials.into_iter()) / (m as f64).powi(d as i32 + 1))
}

/// `U^d[N]` norm of `f(1..=N)`: zero-pad into `Z/(2^d N)Z` and divide by the
/// norm of the interval indicator.
pub fn gowers_norm_interval(f: &[Complex64], d: u32) -> Result<GowersResult> {
    check_degree(d)?;
    let n = f.len();
    if n == 0 {
        return Err(Error::Precondition("interval length must be >= 1".into()));
    }
    let m = n
        .checked_mul(1usize << d)
        .filter(|&m| m <= (1 << 28))
        .ok_or_else(|| Error::Capacity("embedding modulus 2^d N too large".into()))?;
    let mut tilde = vec![Complex64::new(0.0, 0.0); m];
    tilde[1..=n].copy_from_slice(f);
    let mut indicator = vec![Complex64::new(0.0, 0.0); m];
    for slot in indicator.iter_mut().skip(1).take(n) {
        *slot = Complex64::new(1.0, 0.0);
    }
    let num = gowers_power(&CyclicSequence::new(tilde)?, d).max(0.0);
    let den = gowers_power(&CyclicSequence::new(indicator)?, d);
    let raw = num / den;
    Ok(GowersResult {
        d,
        norm: raw.powf(1.0 / (1u64 << d) as f64),
        raw_power: raw,
        method: "interval_ratio".into(),
    })
}

/// Polynomial phase `x ↦ e^{2πi (Σ_k coeffs[k] x^k) / M}` on `Z/M`; integer
/// coefficients over the common denominator `M` make it a well-defined
/// polynomial function on the group, evaluated in exact modular arithmetic.
pub fn cyclic_polynomial_phase(coeffs: &[i64], m: usize) -> Result<CyclicSequence> {
    if m == 0 {
        return Err(Error::Shape("modulus must be >= 1".into()));
    }
    let mm = m as i128;
    let values = (0..m as i128)
        .map(|x| {
            let mut h: i128 = 0;
            for &c in coeffs.iter().rev() {
                h = (h * x + c as i128).rem_euclid(mm);
            }
            crate::util::e2pi(h as f64 / m as f64)
        })
        .collect();
    CyclicSequence::new(values)
}

/// Pointwise product `x ↦ phase(x) f(x)`.
pub fn modulate(f: &CyclicSequence, phase: &CyclicSequence) -> Result<CyclicSequence> {
    if f.modulus() != phase.modulus() {
        return Err(Error::Shape("modulation needs matching moduli".into()));
    }
    CyclicSequence::new(
        f.values
            .iter()
            .zip(phase.values.iter())
            .map(|(a, b)| a * b)
            .collect(),
    )
}

/// Reports `‖e^{2πiφ} f‖_{U^d}` against `‖f‖_{U^d}` for a polynomial phase φ
/// given by integer coefficients over the denominator `M`.
pub fn phase_invariance_report(
    f: &CyclicSequence,
    phi_coeffs: &[i64],
    d: u32,
) -> Result<ExperimentReport> {
    let phase = cyclic_polynomial_phase(phi_coeffs, f.modulus())?;
    let plain = gowers_norm_cyclic(f, d)?;
    let twisted = gowers_norm_cyclic(&modulate(f, &phase)?, d)?;
    let mut report = ExperimentReport::new(
        &[
            ("operation", "phase_invariance".into()),
            ("d", d.to_string()),
            ("phase_degree", phi_coeffs.len().saturating_sub(1).to_string()),
        ],
        None,
        &["norm_plain", "norm_twisted", "abs_difference"],
    );
    report.push_row(vec![plain.norm, twisted.norm, (plain.norm - twisted.norm).abs()]);
    Ok(report)
}

/// Certified check of the degree-2 uniformity bound: the sup over linear
/// phases of `|(1/N) Σ f(n) e^{2πinθ}|` is at most `‖f‖_{U²[N]}`.
pub fn linear_phase_sup_report(f: &[Complex64], oversample: u32) -> Result<ExperimentReport> {
    let n = f.len();
    if n < 2 {
        return Err(Error::Precondition("need N >= 2".into()));
    }
    let coeffs: Vec<Complex64> = f.iter().map(|&c| c / n as f64).collect();
    let est: SupEstimate = sup_norm(&TrigPolynomial::new(1, coeffs), oversample)?;
    let rhs = gowers_norm_interval(f, 2)?;
    let mut report = ExperimentReport::new(
        &[("operation", "linear_phase_sup_bound".into())],
        None,
        &["lhs_value", "lhs_error_bound", "rhs_u2_norm"],
    );
    report.push_row(vec![est.value, est.error_bound, rhs.norm]);
    report.set_flag("holds", est.value <= rhs.norm + est.error_bound + 1e-10);
    Ok(report)
}

/// Cauchy-Schwarz-Gowers check: `|⟨(f_c)⟩| <= Π_c ‖f_c‖_{U^d}`.
pub fn cbs_gowers_report(family: &[CyclicSequence], d: u32) -> Result<ExperimentReport> {
    let inner = gowers_inner(family, d)?;
    let mut rhs = 1.0;
    for f in family {
        rhs *= gowers_norm_cyclic(f, d)?.norm;
    }
    let mut report = ExperimentReport::new(
        &[("operation", "cbs_gowers".into()), ("d", d.to_string())],
        None,
        &["lhs_abs_inner", "rhs_norm_product"],
    );
    report.push_row(vec![inner.norm(), rhs]);
    report.set_flag("holds", inner.norm() <= rhs + 1e-10);
    Ok(report)
}

/// Empirical Gowers seminorm of an orbit sample: the inductive ergodic
/// definition with the `H`-limit truncated at `h_cap` and space averages
/// replaced by averages over the available window.
///
/// Truncation can leave the level-`k` value slightly negative; it is clamped
/// at zero (the flag in the result records whether clamping happened).
pub fn ghk_seminorm_empirical(orbit: &[Complex64], k: u32, h_cap: usize) -> Result<(f64, bool)> {
    if k == 0 {
        return Err(Error::Precondition("seminorm degree k must be >= 1".into()));
    }
    if k > 4 {
        return Err(Error::Capacity("empirical seminorm capped at k = 4".into()));
    }
    if h_cap == 0 || h_cap * 4 > orbit.len() {
        return Err(Error::Precondition(
            "averaging length H must satisfy 1 <= H <= L/4".into(),
        ));
    }
    fn power(seq: &[Complex64], k: u32, h_cap: usize) -> f64 {
        if k == 1 {
            let mean = ksum_complex(seq.iter().copied()) / seq.len() as f64;
            return mean.norm_sqr();
        }
        let h_cap = h_cap.min(seq.len().saturating_sub(1)).max(1);
        let parts = par::map_indexed(h_cap, |i| {
            let l = i + 1;
            let derived: Vec<Complex64> = (0..seq.len() - l)
                .map(|j| seq[j].conj() * seq[j + l])
                .collect();
            power(&derived, k - 1, h_cap)
        });
        ksum(parts) / h_cap as f64
    }
    let raw = power(orbit, k, h_cap);
    let clamped = raw < 0.0;
    Ok((raw.max(0.0).powf(1.0 / (1u64 << k) as f64), clamped))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;
    use crate::rng;
    use crate::util::e2pi;

    fn random_cyclic(m: usize, seed: u64) -> CyclicSequence {
        let mut r = rng::root(seed);
        CyclicSequence::new((0..m).map(|_| rng::disc_complex(&mut r)).collect()).unwrap()
    }

    #[test]
    fn constant_norm_is_one() {
        let one = CyclicSequence::new(vec![Complex64::new(1.0, 0.0); 12]).unwrap();
        for d in 1..=3 {
            let r = gowers_norm_cyclic(&one, d).unwrap();
            assert!((r.norm - 1.0).abs() < 1e-12, "d = {d}");
        }
    }

    #[test]
    fn delta_norm_closed_form() {
        let m = 9;
        let mut vals = vec![Complex64::new(0.0, 0.0); m];
        vals[0] = Complex64::new(1.0, 0.0);
        let f = CyclicSequence::new(vals).unwrap();
        let r = gowers_norm_cyclic(&f, 2).unwrap();
        assert!((r.norm - (m as f64).powf(-0.75)).abs() < 1e-12);
        // Inner product of the constant delta family at d = 2 is M^{-3}.
        let fam = vec![f.clone(), f.clone(), f.clone(), f.clone()];
        let inner = gowers_inner(&fam, 2).unwrap();
        assert!((inner.re - (m as f64).powi(-3)).abs() < 1e-12);
        assert!(inner.im.abs() < 1e-14);
    }

    #[test]
    fn fast_routes_match_brute_force() {
        for seed in 0..8 {
            let m = 10 + (seed as usize % 5);
            let f = random_cyclic(m, 100 + seed);
            for d in 2..=3 {
                let fast = gowers_norm_cyclic(&f, d).unwrap();
                let brute = oracle::gowers_norm_bruteforce(f.values(), d);
                assert!(
                    (fast.norm - brute).abs() < 1e-10,
                    "seed {seed} d {d}: {} vs {brute}",
                    fast.norm
                );
                let direct = gowers_power_direct(&f, d).unwrap();
                assert!((direct.max(0.0).powf(1.0 / (1u64 << d) as f64) - brute).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn quadratic_phase_brute_force_match() {
        let m = 17;
        let f = cyclic_polynomial_phase(&[0, 0, 1], m).unwrap();
        let fast = gowers_norm_cyclic(&f, 2).unwrap();
        let brute = oracle::gowers_norm_bruteforce(f.values(), 2);
        assert!((fast.norm - brute).abs() < 1e-12);
    }

    #[test]
    fn shift_invariance_is_exact_on_direct_route() {
        for seed in 0..5 {
            let f = random_cyclic(16, 200 + seed);
            let g = f.shifted(7);
            for d in 2..=3 {
                let a = gowers_power_direct(&f, d).unwrap();
                let b = gowers_power_direct(&g, d).unwrap();
                assert_eq!(a.to_bits(), b.to_bits(), "seed {seed} d {d}");
            }
        }
    }

    #[test]
    fn derivative_of_linear_phase_is_constant() {
        let m = 16usize;
        let f = cyclic_polynomial_phase(&[0, 1], m).unwrap();
        for h in [1i64, 3, 7] {
            let df = discrete_derivative(&f, h);
            let expect = e2pi(h as f64 / m as f64);
            for x in 0..m as i64 {
                assert!((df.get(x) - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn iterated_derivative_of_quadratic_phase_is_constant() {
        let m = 32usize;
        let f = cyclic_polynomial_phase(&[0, 0, 1], m).unwrap();
        for (h1, h2) in [(1i64, 2i64), (5, 11), (7, 7)] {
            let dd = discrete_derivative(&discrete_derivative(&f, h1), h2);
            // ∂_{h2}∂_{h1} e(x²/M) = e(2 h1 h2 / M), independent of x.
            let expect = e2pi((2 * h1 * h2) as f64 / m as f64);
            for x in 0..m as i64 {
                assert!((dd.get(x) - expect).norm() < 1e-12, "x = {x}");
            }
        }
    }

    #[test]
    fn u1_norm_is_abs_mean() {
        let f = random_cyclic(33, 7);
        let mean = ksum_complex(f.values().iter().copied()) / 33.0;
        let r = gowers_norm_cyclic(&f, 1).unwrap();
        assert!((r.norm - mean.norm()).abs() < 1e-12);
    }

    #[test]
    fn interval_norm_of_constant_is_one() {
        for d in 1..=3 {
            let f = vec![Complex64::new(1.0, 0.0); 40];
            let r = gowers_norm_interval(&f, d).unwrap();
            assert!((r.norm - 1.0).abs() < 1e-12, "d = {d}");
        }
    }

    #[test]
    fn interval_norm_ignores_linear_modulation() {
        let n = 64;
        let alpha = 0.217331;
        let f: Vec<Complex64> = (1..=n).map(|k| e2pi(alpha * k as f64)).collect();
        let r = gowers_norm_interval(&f, 2).unwrap();
        assert!((r.norm - 1.0).abs() < 1e-9, "norm {}", r.norm);
    }

    #[test]
    fn phase_invariance_quadratic_but_not_cubic() {
        let f = random_cyclic(32, 3);
        let quad = phase_invariance_report(&f, &[3, 5, 7], 2).unwrap();
        assert!(quad.rows[0][2] < 1e-10);
        let cubic = phase_invariance_report(&f, &[0, 0, 0, 1], 2).unwrap();
        assert!(cubic.rows[0][2] > 1e-6, "cubic diff {}", cubic.rows[0][2]);
    }

    #[test]
    fn zero_phase_changes_nothing() {
        let f = random_cyclic(24, 4);
        let rep = phase_invariance_report(&f, &[0], 2).unwrap();
        assert_eq!(rep.rows[0][2], 0.0);
    }

    #[test]
    fn cbs_equality_for_constant_family() {
        let f = random_cyclic(12, 5);
        let fam = vec![f.clone(), f.clone(), f.clone(), f.clone()];
        let rep = cbs_gowers_report(&fam, 2).unwrap();
        assert!((rep.rows[0][0] - rep.rows[0][1]).abs() < 1e-10);
        assert_eq!(rep.flag("holds"), Some(true));
    }

    #[test]
    fn cbs_zero_member_collapses() {
        let f = random_cyclic(8, 6);
        let z = CyclicSequence::new(vec![Complex64::new(0.0, 0.0); 8]).unwrap();
        let fam = vec![f.clone(), z, f.clone(), f];
        let rep = cbs_gowers_report(&fam, 2).unwrap();
        assert_eq!(rep.rows[0][0], 0.0);
        assert_eq!(rep.rows[0][1], 0.0);
    }

    #[test]
    fn monotonicity_u2_le_u3() {
        for seed in 0..10 {
            let f = random_cyclic(24, 300 + seed);
            let u2 = gowers_norm_cyclic(&f, 2).unwrap().norm;
            let u3 = gowers_norm_cyclic(&f, 3).unwrap().norm;
            assert!(u2 <= u3 + 1e-10, "seed {seed}: {u2} > {u3}");
        }
    }

    #[test]
    fn linear_phase_bound_saturates_for_constants() {
        let f = vec![Complex64::new(1.0, 0.0); 32];
        let rep = linear_phase_sup_report(&f, 8).unwrap();
        assert!((rep.rows[0][0] - 1.0).abs() < 1e-9);
        assert!((rep.rows[0][2] - 1.0).abs() < 1e-9);
        assert_eq!(rep.flag("holds"), Some(true));
    }

    #[test]
    fn ghk_constant_orbit() {
        let orbit = vec![Complex64::new(0.3, 0.4); 256];
        for k in 1..=3 {
            let (v, clamped) = ghk_seminorm_empirical(&orbit, k, 32).unwrap();
            assert!((v - 0.5).abs() < 1e-12, "k = {k}");
            assert!(!clamped);
        }
    }

    #[test]
    fn ghk_level_one_matches_geometric_sum() {
        let alpha = 0.381966011;
        let l = 4096;
        let orbit: Vec<Complex64> = (0..l).map(|n| e2pi(alpha * n as f64)).collect();
        let (v, _) = ghk_seminorm_empirical(&orbit, 1, 64).unwrap();
        let direct = ksum_complex(orbit.iter().copied()).norm() / l as f64;
        assert!((v - direct).abs() < 1e-12);
        assert!(v < 0.01, "rotation mean should be small, got {v}");
    }

    #[test]
    fn ghk_rejects_oversized_h() {
        let orbit = vec![Complex64::new(1.0, 0.0); 64];
        assert!(matches!(
            ghk_seminorm_empirical(&orbit, 2, 32),
            Err(Error::Precondition(_))
        ));
    }
}
