//! Fejér and de la Vallée-Poussin summability kernels.
//!
//! Conventions (checked against each other in the tests):
//!
//! * Fejér: `K_n(θ) = Σ_{|j|<=n} (1 - |j|/(n+1)) e^{2πijθ}
//!   = (1/(n+1)) (sin(π(n+1)θ)/sin(πθ))²`, so `K_n(0) = n+1`.
//! * de la Vallée-Poussin: `V_{n,p}(θ)
//!   = (1/p) (sin²(π(n+p)θ) - sin²(πnθ)) / sin²(πθ)`, whose Fourier
//!   coefficients are exactly the trapezoid `v_{n,p}(j)`: 1 on `|j| <= n`,
//!   linear ramp `(n+p-|j|)/p` on `n <= |j| <= n+p`, zero beyond. In terms of
//!   Fejér kernels this is `((n+p)/p) K_{n+p-1} - (n/p) K_{n-1}`; the classical
//!   kernel is `V_{n,n} = 2 K_{2n-1} - K_{n-1}`.

use num_complex::Complex64;

use crate::par;
use crate::report::ExperimentReport;
use crate::spectra::TrigPolynomial;
use crate::{Error, Result};

const PI: f64 = std::f64::consts::PI;

/// `K_n(θ)`; the removable singularity at integer θ evaluates to `n+1`.
pub fn fejer_eval(n: u64, theta: f64) -> f64 {
    if theta == theta.floor() {
        return (n + 1) as f64;
    }
    let s = (PI * theta).sin();
    let t = (PI * (n + 1) as f64 * theta).sin();
    (t * t) / (s * s) / (n + 1) as f64
}

/// Fejér coefficient vector `(1 - |j|/(n+1))` on `|j| <= n`.
pub fn fejer_coefficients(n: u64) -> TrigPolynomial {
    let n = n as i64;
    let coeffs = (-n..=n)
        .map(|j| Complex64::new(1.0 - j.abs() as f64 / (n + 1) as f64, 0.0))
        .collect();
    TrigPolynomial::new(-n, coeffs)
}

/// Trapezoid multiplier profile `v_{n,p}` on the real line.
pub fn vdp_profile(n: u64, p: u64, t: f64) -> f64 {
    let a = n as f64;
    let b = (n + p) as f64;
    let t = t.abs();
    if t <= a {
        1.0
    } else if t >= b {
        0.0
    } else {
        (b - t) / p as f64
    }
}

/// Trapezoid coefficients of `V_{n,p}`: support `[-(n+p-1), n+p-1]` (the
/// values at `|j| = n+p` are exactly zero and are not stored).
pub fn vdp_coefficients(n: u64, p: u64) -> Result<TrigPolynomial> {
    if p == 0 {
        return Err(Error::Precondition("ramp width p must be >= 1".into()));
    }
    let hi = (n + p) as i64 - 1;
    let coeffs = (-hi..=hi)
        .map(|j| Complex64::new(vdp_profile(n, p, j as f64), 0.0))
        .collect();
    Ok(TrigPolynomial::new(-hi, coeffs))
}

/// Closed-form `V_{n,p}(θ)`; the removable singularity at integer θ evaluates
/// to `2n+p`.
pub fn vdp_eval(n: u64, p: u64, theta: f64) -> Result<f64> {
    if p == 0 {
        return Err(Error::Precondition("ramp width p must be >= 1".into()));
    }
    if theta == theta.floor() {
        return Ok((2 * n + p) as f64);
    }
    let s = (PI * theta).sin();
    let hi = (PI * (n + p) as f64 * theta).sin();
    let lo = (PI * n as f64 * theta).sin();
    Ok((hi * hi - lo * lo) / (s * s) / p as f64)
}

// 7-point Gauss / 15-point Kronrod pair on [-1, 1].
const GK_NODES: [f64; 8] = [
    0.991455371120813,
    0.949107912342759,
    0.864864423359769,
    0.741531185599394,
    0.586087235467691,
    0.405845151377397,
    0.207784955007898,
    0.0,
];
const K15_WEIGHTS: [f64; 8] = [
    0.022935322010529,
    0.063092092629979,
    0.104790010322250,
    0.140653259715525,
    0.169004726639267,
    0.190350578064785,
    0.204432940075298,
    0.209482141084728,
];
const G7_WEIGHTS: [f64; 4] = [
    0.129484966168870,
    0.279705391489277,
    0.381830050505119,
    0.417959183673469,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let mut k15 = K15_WEIGHTS[7] * f(c);
    let mut g7 = G7_WEIGHTS[3] * f(c);
    for i in 0..7 {
        let x = GK_NODES[i] * h;
        let pair = f(c - x) + f(c + x);
        k15 += K15_WEIGHTS[i] * pair;
        if i % 2 == 1 {
            g7 += G7_WEIGHTS[i / 2] * pair;
        }
    }
    (k15 * h, (k15 - g7).abs() * h)
}

fn adaptive<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, tol: f64, depth: u32) -> f64 {
    let (val, err) = gk15(f, lo, hi);
    if err <= tol || depth >= 28 {
        return val;
    }
    let mid = 0.5 * (lo + hi);
    adaptive(f, lo, mid, tol * 0.5, depth + 1) + adaptive(f, mid, hi, tol * 0.5, depth + 1)
}

/// Adaptive quadrature of `f` over `[lo, hi]`: panels no wider than
/// `max_panel` (so kernel oscillations are resolved), each refined to the
/// given absolute tolerance. Panels evaluate in parallel.
pub fn integrate<F: Fn(f64) -> f64 + Sync>(f: F, lo: f64, hi: f64, max_panel: f64, tol: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let panels = (((hi - lo) / max_panel).ceil() as usize).max(1);
    let w = (hi - lo) / panels as f64;
    let per_panel_tol = tol / panels as f64;
    let parts = par::map_indexed(panels, |i| {
        let a = lo + i as f64 * w;
        adaptive(&f, a, a + w, per_panel_tol, 0)
    });
    crate::util::ksum(parts)
}

/// Tail integral of `|V_{n,p}|` and the proof-side bound.
#[derive(Clone, Copy, Debug)]
pub struct TailMass {
    /// `∫_{M/|I| < |x| <= 1/2} |V_{n,p}(x)| dx` by adaptive quadrature.
    pub integral: f64,
    /// `|I|² / (p M²)`, valid once the exterior window is nonempty.
    pub bound: f64,
}

/// Mass of `V_{n,p}` outside the window `{|x| <= M/|I|}` on the circle.
pub fn tail_mass(n: u64, p: u64, m: f64, interval_len: u64) -> Result<TailMass> {
    if p == 0 || m <= 0.0 || interval_len == 0 {
        return Err(Error::Precondition("need p >= 1, M > 0, |I| >= 1".into()));
    }
    let cut = m / interval_len as f64;
    if cut >= 0.5 {
        return Err(Error::Precondition(format!(
            "window M/|I| = {cut} leaves no exterior on the circle"
        )));
    }
    let max_panel = 1.0 / (4.0 * (n + p) as f64);
    let integral = 2.0 * integrate(
        |x| vdp_eval(n, p, x).expect("p >= 1").abs(),
        cut,
        0.5,
        max_panel,
        1e-10,
    );
    let il = interval_len as f64;
    Ok(TailMass {
        integral,
        bound: il * il / (p as f64 * m * m),
    })
}

/// C² bump `(35/32h)(1-(u/h)²)³` on `[-h, h]`, unit mass.
fn bump(u: f64, h: f64) -> f64 {
    let r = u / h;
    if r.abs() >= 1.0 {
        0.0
    } else {
        let q = 1.0 - r * r;
        35.0 / 32.0 * q * q * q / h
    }
}

// 4-point Gauss-Legendre on [-1, 1]: exact through degree 7, enough for the
// (degree <= 1) trapezoid times the degree-6 bump.
const GL4_NODES: [f64; 2] = [0.33998104358485626, 0.8611363115940526];
const GL4_WEIGHTS: [f64; 2] = [0.6521451548625461, 0.34785484513745385];

/// Smoothed multiplier profile: the trapezoid with flat radius `n + h` and
/// support radius `n + p - h`, mollified by the C² bump of half-width
/// `h = γp/4`. The result is C², equals 1 on `[-n, n]`, and vanishes outside
/// `[-(n+p), n+p]`.
pub fn smooth_vdp_profile(n: u64, p: u64, gamma: f64) -> Result<impl Fn(f64) -> f64> {
    if p == 0 || gamma <= 0.0 || gamma >= 0.1 {
        return Err(Error::Precondition("need p >= 1 and gamma in (0, 1/10)".into()));
    }
    let h = gamma * p as f64 / 4.0;
    if 2.0 * h >= p as f64 {
        return Err(Error::Precondition("mollifier width exceeds ramp".into()));
    }
    let flat = n as f64 + h;
    let zero = (n + p) as f64 - h;
    let ramp = zero - flat;
    let base = move |t: f64| -> f64 {
        let t = t.abs();
        if t <= flat {
            1.0
        } else if t >= zero {
            0.0
        } else {
            (zero - t) / ramp
        }
    };
    Ok(move |t: f64| -> f64 {
        // Piecewise-polynomial integrand: split at the base profile's
        // breakpoints and integrate each smooth piece exactly.
        let mut cuts = vec![-h, h];
        for b in [-zero, -flat, flat, zero] {
            let u = t - b;
            if u > -h && u < h {
                cuts.push(u);
            }
        }
        cuts.sort_by(f64::total_cmp);
        let mut acc = 0.0;
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b <= a {
                continue;
            }
            let c = 0.5 * (a + b);
            let r = 0.5 * (b - a);
            for i in 0..2 {
                let x = GL4_NODES[i] * r;
                acc += GL4_WEIGHTS[i]
                    * r
                    * (base(t - (c - x)) * bump(c - x, h) + base(t - (c + x)) * bump(c + x, h));
            }
        }
        acc
    })
}

/// Kernel with even multiplier `profile[j] = v(j)`, `j = 0..=support`,
/// evaluated as a cosine sum.
fn profile_kernel_eval(profile: &[f64], x: f64) -> f64 {
    let mut acc = profile[0];
    for (j, &v) in profile.iter().enumerate().skip(1) {
        acc += 2.0 * v * (2.0 * PI * j as f64 * x).cos();
    }
    acc
}

/// Tail comparison for the smoothed de la Vallée-Poussin kernel
/// `V_{n, ⌊γn⌋}`: integrates `|kernel|` outside both candidate windows
/// (`M/(2n+1)` and `M/|I|` with `|I| = 2(n+p)+1`) and reports them against
/// the shape `γ^{-1}(γM)^{-D}`, for the smoothed and the plain piecewise
/// linear profile.
pub fn smooth_vdp_tail_report(n: u64, gamma: f64, m: f64, d_exp: f64) -> Result<ExperimentReport> {
    if gamma <= 0.0 || gamma >= 0.1 {
        return Err(Error::Precondition("gamma must lie in (0, 1/10)".into()));
    }
    if m <= 1.0 / gamma {
        return Err(Error::Precondition("need M > 1/gamma".into()));
    }
    if d_exp <= 1.0 {
        return Err(Error::Precondition("need D > 1".into()));
    }
    let p = ((gamma * n as f64).floor() as u64).max(1);
    let prof = smooth_vdp_profile(n, p, gamma)?;
    let top = n + p;
    let smooth: Vec<f64> = (0..=top as i64).map(|j| prof(j as f64)).collect();
    let plain: Vec<f64> = (0..=top as i64).map(|j| vdp_profile(n, p, j as f64)).collect();

    let interval_len = 2 * (n + p) + 1;
    let cut_classic = m / (2 * n + 1) as f64;
    let cut_interval = m / interval_len as f64;
    for cut in [cut_classic, cut_interval] {
        if cut >= 0.5 {
            return Err(Error::Precondition(format!(
                "window cut {cut} leaves no exterior on the circle"
            )));
        }
    }
    let max_panel = 1.0 / (4.0 * top as f64);
    let tail = |profile: &[f64], cut: f64| -> f64 {
        2.0 * integrate(
            |x| profile_kernel_eval(profile, x).abs(),
            cut,
            0.5,
            max_panel,
            1e-10,
        )
    };
    let lhs_smooth_classic = tail(&smooth, cut_classic);
    let lhs_smooth_interval = tail(&smooth, cut_interval);
    let lhs_plain_classic = tail(&plain, cut_classic);
    let rhs_shape = (gamma * m).powf(-d_exp) / gamma;

    let mut report = ExperimentReport::new(
        &[
            ("operation", "smooth_vdp_tail".into()),
            ("n", n.to_string()),
            ("p", p.to_string()),
            ("gamma", gamma.to_string()),
            ("m", m.to_string()),
            ("d_exp", d_exp.to_string()),
        ],
        None,
        &[
            "lhs_smooth_classic",
            "lhs_smooth_interval",
            "lhs_plain_classic",
            "rhs_shape",
            "c_hat_classic",
            "c_hat_interval",
        ],
    );
    report.push_row(vec![
        lhs_smooth_classic,
        lhs_smooth_interval,
        lhs_plain_classic,
        rhs_shape,
        lhs_smooth_classic / rhs_shape,
        lhs_smooth_interval / rhs_shape,
    ]);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fejer_at_zero_and_half() {
        assert_eq!(fejer_eval(8, 0.0), 9.0);
        assert!(fejer_eval(1, 0.5).abs() < 1e-25);
    }

    #[test]
    fn fejer_closed_form_matches_coefficient_sum() {
        let n = 8;
        let poly = fejer_coefficients(n);
        let mut rng = crate::rng::root(17);
        for _ in 0..1000 {
            let theta: f64 = rand::Rng::gen(&mut rng);
            let closed = fejer_eval(n, theta);
            let summed = poly.eval(theta).re;
            assert!((closed - summed).abs() < 1e-12, "theta = {theta}");
        }
    }

    #[test]
    fn fejer_nonnegative() {
        for n in [1u64, 5, 32] {
            for g in 0..500 {
                assert!(fejer_eval(n, g as f64 / 500.0) >= 0.0);
            }
        }
    }

    #[test]
    fn fejer_unit_mass() {
        for n in [4u64, 64, 256] {
            let mass = integrate(
                |x| fejer_eval(n, x),
                0.0,
                1.0,
                1.0 / (8.0 * (n + 1) as f64),
                1e-13,
            );
            assert!((mass - 1.0).abs() < 1e-12, "n = {n}: {mass}");
        }
    }

    #[test]
    fn vdp_profile_values() {
        assert_eq!(vdp_profile(4, 4, 0.0), 1.0);
        assert_eq!(vdp_profile(4, 4, 8.0), 0.0);
        assert_eq!(vdp_profile(4, 4, 6.0), 0.5);
    }

    #[test]
    fn vdp_at_zero_is_coefficient_sum() {
        for (n, p) in [(4u64, 4u64), (16, 8), (9, 5)] {
            let v0 = vdp_eval(n, p, 0.0).unwrap();
            assert_eq!(v0, (2 * n + p) as f64);
            let total: f64 = vdp_coefficients(n, p).unwrap().eval(0.0).re;
            assert!((v0 - total).abs() < 1e-10);
        }
    }

    #[test]
    fn vdp_closed_form_matches_coefficients_on_random_grid() {
        let mut rng = crate::rng::root(5);
        for (n, p) in [(16u64, 16u64), (37, 11), (128, 64)] {
            let poly = vdp_coefficients(n, p).unwrap();
            for _ in 0..200 {
                let theta: f64 = rand::Rng::gen(&mut rng);
                let closed = vdp_eval(n, p, theta).unwrap();
                let summed = poly.eval(theta).re;
                assert!((closed - summed).abs() < 1e-10, "n={n} p={p} theta={theta}");
            }
        }
    }

    #[test]
    fn classical_vdp_is_fejer_difference() {
        // V_{n,n} = 2 K_{2n-1} - K_{n-1} pointwise.
        for n in [4u64, 9, 32] {
            for g in 0..1000 {
                let theta = g as f64 / 1000.0;
                let lhs = vdp_eval(n, n, theta).unwrap();
                let rhs = 2.0 * fejer_eval(2 * n - 1, theta) - fejer_eval(n - 1, theta);
                assert!((lhs - rhs).abs() < 1e-10, "n={n} theta={theta}");
            }
        }
    }

    #[test]
    fn vdp_fourier_coefficients_are_the_trapezoid() {
        // DFT of closed-form samples on a 2(n+p)+1 grid recovers v_{n,p}(j).
        for (n, p) in [(8u64, 8u64), (12, 5)] {
            let g = (2 * (n + p) + 1) as i64;
            for j in -(n as i64 + p as i64)..=(n as i64 + p as i64) {
                let mut acc = crate::util::KahanComplex::new();
                for k in 0..g {
                    let theta = k as f64 / g as f64;
                    let v = vdp_eval(n, p, theta).unwrap();
                    acc.add(
                        Complex64::new(v, 0.0) * crate::util::e2pi(-(j as f64) * theta),
                    );
                }
                let hat = acc.value() / g as f64;
                let expect = vdp_profile(n, p, j as f64);
                assert!((hat.re - expect).abs() < 1e-9, "n={n} p={p} j={j}");
                assert!(hat.im.abs() < 1e-9);
            }
        }
    }

    #[test]
    fn tail_mass_respects_proof_bound_and_monotonicity() {
        let (n, p, il) = (64u64, 64u64, 256u64);
        let t16 = tail_mass(n, p, 16.0, il).unwrap();
        assert!(t16.integral <= t16.bound, "{} > {}", t16.integral, t16.bound);
        let t32 = tail_mass(n, p, 32.0, il).unwrap();
        assert!(t32.integral <= t16.integral);
        assert!(t32.integral <= t32.bound);
    }

    #[test]
    fn tail_mass_rejects_empty_exterior() {
        assert!(matches!(
            tail_mass(8, 8, 128.0, 256),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn smooth_profile_keeps_flat_top_and_support() {
        let (n, p, gamma) = (128u64, 12u64, 0.05);
        let prof = smooth_vdp_profile(n, p, gamma).unwrap();
        for j in 0..=n {
            assert!((prof(j as f64) - 1.0).abs() < 1e-12, "j = {j}");
        }
        assert!(prof((n + p) as f64).abs() < 1e-12);
        assert!(prof((n + p) as f64 + 1.0).abs() < 1e-15);
        // Interior of the ramp stays between 0 and 1 and decreases.
        let mut last = 1.0;
        for k in 0..50 {
            let t = n as f64 + k as f64 * (p as f64 / 50.0);
            let v = prof(t);
            assert!(v <= last + 1e-12 && v >= -1e-15);
            last = v;
        }
    }

    #[test]
    fn smooth_tail_beats_plain_tail() {
        let rep = smooth_vdp_tail_report(512, 0.05, 40.0, 2.0).unwrap();
        let smooth = rep.rows[0][0];
        let plain = rep.rows[0][2];
        assert!(smooth < plain, "smooth {smooth} vs plain {plain}");
    }

    #[test]
    fn smooth_tail_halves_when_m_doubles() {
        let r1 = smooth_vdp_tail_report(512, 0.05, 30.0, 1.5).unwrap();
        let r2 = smooth_vdp_tail_report(512, 0.05, 60.0, 1.5).unwrap();
        assert!(r2.rows[0][0] <= 0.5 * r1.rows[0][0] + 1e-12);
    }
}
