//! Point-sampled measure-preserving systems and the transfer to the shift
//! model.
//!
//! Four concrete systems: the circle rotation `x ↦ x + α`, the doubling map
//! `x ↦ 2x`, the skew product `(x, y) ↦ (x + α, y + x)`, and the cyclic shift
//! on `Z/J`. Rotation and skew orbits accumulate with compensated summation
//! so `2^20` steps stay at machine precision. Doubling orbits are generated
//! from an explicit seeded bit stream — the orbit *is* the bit shift — which
//! makes the map exactly reproducible and, through a two-sided stream (the
//! natural extension), invertible for negative powers.

use num_complex::Complex64;
use rand::RngCore;

use crate::spectra::Window;
use crate::util::{e2pi, frac, Kahan};
use crate::{rng, Error, Result};

/// Golden-mean frequency `(√5 - 1)/2`, the default badly-approximable α.
pub fn golden_alpha() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DynSystem {
    Rotation { alpha: f64 },
    Doubling,
    SkewProduct { alpha: f64 },
    Cyclic { j: u64 },
}

/// A point of one of the supported state spaces.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Point {
    Torus(f64),
    Torus2(f64, f64),
    Residue(u64),
}

/// Starting data for an orbit. Doubling starts from a bit-stream seed rather
/// than a floating point, sidestepping floating-point chaos.
#[derive(Clone, Copy, Debug)]
pub enum Start {
    Torus(f64),
    Torus2(f64, f64),
    Residue(u64),
    /// Seed of the two-sided symbolic stream (doubling only).
    BitSeed(u64),
}

impl DynSystem {
    fn check_start(&self, start: &Start) -> Result<()> {
        let ok = matches!(
            (self, start),
            (DynSystem::Rotation { .. }, Start::Torus(_))
                | (DynSystem::Doubling, Start::BitSeed(_))
                | (DynSystem::SkewProduct { .. }, Start::Torus2(_, _))
                | (DynSystem::Cyclic { .. }, Start::Residue(_))
        );
        if !ok {
            return Err(Error::Domain(format!(
                "start {start:?} does not belong to the state space of {self:?}"
            )));
        }
        if let (DynSystem::Rotation { alpha } | DynSystem::SkewProduct { alpha }, _) = (self, start)
        {
            if !(0.0..1.0).contains(alpha) {
                return Err(Error::Domain("alpha must lie in [0, 1)".into()));
            }
        }
        if let (DynSystem::Cyclic { j }, Start::Residue(r)) = (self, start) {
            if *j == 0 || r >= j {
                return Err(Error::Domain("residue start must satisfy x0 < J".into()));
            }
        }
        Ok(())
    }
}

/// The orbit segment `T^j x0` for `j = lo..=hi`, as a window indexed by `j`.
pub struct OrbitWindow {
    pub lo: i64,
    pub points: Vec<Point>,
}

impl OrbitWindow {
    pub fn point(&self, j: i64) -> &Point {
        &self.points[(j - self.lo) as usize]
    }
}

/// Deterministic bit of the two-sided symbolic stream at position `i`.
fn stream_bit(seed: u64, i: i64) -> u8 {
    // Zigzag fold Z into N, then read one bit of a per-block ChaCha word.
    let u = if i >= 0 { (i as u64) << 1 } else { (((-1 - i) as u64) << 1) | 1 };
    let block = u >> 6;
    let offset = (u & 63) as u32;
    let mut r = rng::fork(seed ^ 0x9e37_79b9_7f4a_7c15, block);
    (r.next_u64() >> offset & 1) as u8
}

/// Generate `T^j x0` for `j ∈ [lo, hi]`.
pub fn orbit_window(system: &DynSystem, start: &Start, lo: i64, hi: i64) -> Result<OrbitWindow> {
    system.check_start(start)?;
    if lo > hi {
        return Err(Error::Precondition("orbit window is empty".into()));
    }
    let len = (hi - lo + 1) as usize;
    if len > (1 << 28) {
        return Err(Error::Capacity("orbit window too long".into()));
    }
    let points = match (system, start) {
        (DynSystem::Rotation { alpha }, Start::Torus(x0)) => {
            let mut pts = vec![Point::Torus(0.0); len];
            // March from j = 0 in both directions, reducing mod 1 inside the
            // compensated accumulator so precision does not degrade with j.
            let mut walk = |step: f64, range: Box<dyn Iterator<Item = i64>>| {
                let mut acc = Kahan::new();
                acc.add(frac(*x0));
                for j in range {
                    if j >= lo && j <= hi {
                        pts[(j - lo) as usize] = Point::Torus(frac(acc.value()));
                    }
                    acc.add(step);
                    if acc.value() >= 1.0 {
                        acc.add(-1.0);
                    } else if acc.value() < 0.0 {
                        acc.add(1.0);
                    }
                }
            };
            walk(*alpha, Box::new(0..=hi.max(0)));
            if lo < 0 {
                walk(-*alpha, Box::new((lo..=0).rev()));
            }
            pts
        }
        (DynSystem::Doubling, Start::BitSeed(seed)) => (lo..=hi)
            .map(|j| {
                let mut x = 0.0;
                let mut w = 0.5;
                for k in 0..53 {
                    if stream_bit(*seed, j + k) == 1 {
                        x += w;
                    }
                    w *= 0.5;
                }
                Point::Torus(x)
            })
            .collect(),
        (DynSystem::SkewProduct { alpha }, Start::Torus2(x0, y0)) => {
            let mut pts = vec![Point::Torus2(0.0, 0.0); len];
            // Forward: x_{j+1} = x_j + α, y_{j+1} = y_j + x_j.
            let reduce = |acc: &mut Kahan| {
                if acc.value() >= 1.0 {
                    acc.add(-1.0);
                } else if acc.value() < 0.0 {
                    acc.add(1.0);
                }
            };
            let mut x = Kahan::new();
            x.add(frac(*x0));
            let mut y = Kahan::new();
            y.add(frac(*y0));
            for j in 0..=hi.max(0) {
                if j >= lo && j <= hi {
                    pts[(j - lo) as usize] = Point::Torus2(frac(x.value()), frac(y.value()));
                }
                y.add(frac(x.value()));
                reduce(&mut y);
                x.add(*alpha);
                reduce(&mut x);
            }
            if lo < 0 {
                // Backward: x_{j-1} = x_j - α, y_{j-1} = y_j - x_{j-1}.
                let mut x = Kahan::new();
                x.add(frac(*x0));
                let mut y = Kahan::new();
                y.add(frac(*y0));
                for j in (lo..0).rev() {
                    x.add(-*alpha);
                    reduce(&mut x);
                    y.add(-frac(x.value()));
                    reduce(&mut y);
                    if j <= hi {
                        pts[(j - lo) as usize] = Point::Torus2(frac(x.value()), frac(y.value()));
                    }
                }
            }
            pts
        }
        (DynSystem::Cyclic { j }, Start::Residue(r)) => (lo..=hi)
            .map(|step| Point::Residue((*r as i64 + step).rem_euclid(*j as i64) as u64))
            .collect(),
        _ => unreachable!("start checked against system"),
    };
    Ok(OrbitWindow { lo, points })
}

/// Bounded observables with analytically known means.
#[derive(Clone, Debug)]
pub enum Observable {
    /// `e^{2πi·freq·u}` where `u` is the torus coordinate (the `y` coordinate
    /// on the skew product, `x/J` on the cyclic group).
    Trig { freq: i64 },
    /// Indicator of `[lo, hi) ⊂ [0,1)` on the same coordinate.
    Indicator { lo: f64, hi: f64 },
    /// Arbitrary table on `Z/J` (cyclic systems only).
    Table(Vec<Complex64>),
}

impl Observable {
    /// Analytic mean with respect to the invariant measure.
    pub fn mean(&self) -> Complex64 {
        match self {
            Observable::Trig { freq } => {
                if *freq == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            }
            Observable::Indicator { lo, hi } => Complex64::new(hi - lo, 0.0),
            Observable::Table(t) => {
                crate::util::ksum_complex(t.iter().copied()) / t.len() as f64
            }
        }
    }

    pub fn is_mean_zero(&self) -> bool {
        self.mean().norm() < 1e-15
    }

    /// Evaluate at a point; the acting coordinate is the last torus
    /// coordinate (`y` for the skew product) or the normalized residue.
    pub fn eval(&self, p: &Point) -> Result<Complex64> {
        let coord = |p: &Point| -> f64 {
            match p {
                Point::Torus(x) => *x,
                Point::Torus2(_, y) => *y,
                Point::Residue(_) => unreachable!(),
            }
        };
        match (self, p) {
            (Observable::Table(t), Point::Residue(r)) => {
                t.get(*r as usize).copied().ok_or_else(|| {
                    Error::Shape(format!("table of length {} lacks residue {r}", t.len()))
                })
            }
            (Observable::Table(_), _) => Err(Error::Domain(
                "table observables require a cyclic system".into(),
            )),
            (obs, Point::Residue(r)) => {
                // Interpret the residue as the torus point r/J through the
                // table length... the modulus is not stored in the point, so
                // cyclic trig/indicator observables go through `eval_cyclic`.
                let _ = (obs, r);
                Err(Error::Domain(
                    "use eval_cyclic for trig/indicator observables on Z/J".into(),
                ))
            }
            (Observable::Trig { freq }, p) => Ok(e2pi(*freq as f64 * coord(p))),
            (Observable::Indicator { lo, hi }, p) => {
                let u = coord(p);
                Ok(Complex64::new(if u >= *lo && u < *hi { 1.0 } else { 0.0 }, 0.0))
            }
        }
    }

    /// Evaluate on `Z/J` with the residue mapped to `r/J`.
    pub fn eval_cyclic(&self, r: u64, j: u64) -> Result<Complex64> {
        match self {
            Observable::Table(t) => t.get(r as usize).copied().ok_or_else(|| {
                Error::Shape(format!("table of length {} lacks residue {r}", t.len()))
            }),
            Observable::Trig { freq } => Ok(e2pi(*freq as f64 * r as f64 / j as f64)),
            Observable::Indicator { lo, hi } => {
                let u = r as f64 / j as f64;
                Ok(Complex64::new(if u >= *lo && u < *hi { 1.0 } else { 0.0 }, 0.0))
            }
        }
    }
}

fn eval_at(system: &DynSystem, obs: &Observable, p: &Point) -> Result<Complex64> {
    match (system, p) {
        (DynSystem::Cyclic { j }, Point::Residue(r)) => obs.eval_cyclic(*r, *j),
        _ => obs.eval(p),
    }
}

/// Samples `f(T^{a n} x0)` for `n = 0..L-1`.
pub fn sample_observable(
    system: &DynSystem,
    f: &Observable,
    start: &Start,
    a: i64,
    len: u64,
) -> Result<Vec<Complex64>> {
    if len == 0 {
        return Err(Error::Precondition("sample length must be >= 1".into()));
    }
    let top = a * (len as i64 - 1);
    let orbit = orbit_window(system, start, top.min(0), top.max(0))?;
    (0..len as i64)
        .map(|n| eval_at(system, f, orbit.point(a * n)))
        .collect()
}

/// Shift-model data produced from one dynamical orbit: `phi[j] = f(T^{j - anchor} x0)`
/// and `psi[j] = g(T^{j - anchor} x0)` on `j ∈ [0, J]`, so the weighted
/// bilinear average of `(f, g)` at `x0` equals the shift-model average at
/// `j = anchor` — the two sides read the very same floating-point values.
pub struct TransferData {
    pub phi: Vec<Complex64>,
    pub psi: Vec<Complex64>,
    pub anchor: i64,
    pub j_len: i64,
}

impl TransferData {
    pub fn phi_window(&self) -> Window<'_> {
        Window::new(0, &self.phi)
    }

    pub fn psi_window(&self) -> Window<'_> {
        Window::new(0, &self.psi)
    }
}

/// Builds the shift model for the bilinear average with exponents `(a, b)`
/// and horizon `N`.
pub fn calderon_transfer(
    system: &DynSystem,
    start: &Start,
    f: &Observable,
    g: &Observable,
    a: i64,
    b: i64,
    n: u64,
) -> Result<TransferData> {
    if a == 0 && b == 0 {
        return Err(Error::Precondition("need (a, b) != (0, 0)".into()));
    }
    if n == 0 {
        return Err(Error::Precondition("horizon N must be >= 1".into()));
    }
    let n_i = n as i64;
    let span = a.max(b).max(0) - a.min(b).min(0);
    let j_len = (a.abs().max(b.abs()) + 1).max(span) * n_i;
    let anchor = -a.min(b).min(0) * n_i;
    let orbit = orbit_window(system, start, -anchor, j_len - anchor)?;
    let phi: Result<Vec<Complex64>> = (0..=j_len)
        .map(|j| eval_at(system, f, orbit.point(j - anchor)))
        .collect();
    let psi: Result<Vec<Complex64>> = (0..=j_len)
        .map(|j| eval_at(system, g, orbit.point(j - anchor)))
        .collect();
    Ok(TransferData { phi: phi?, psi: psi?, anchor, j_len })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_orbit_enumerates_residues() {
        let sys = DynSystem::Cyclic { j: 7 };
        let orb = orbit_window(&sys, &Start::Residue(0), 0, 6).unwrap();
        for j in 0..7 {
            assert_eq!(*orb.point(j), Point::Residue(j as u64));
        }
    }

    #[test]
    fn rotation_orbit_matches_direct_formula() {
        let alpha = golden_alpha();
        let sys = DynSystem::Rotation { alpha };
        let orb = orbit_window(&sys, &Start::Torus(0.0), -50, 50).unwrap();
        for j in -50..=50i64 {
            let expect = frac(j as f64 * alpha);
            let got = match orb.point(j) {
                Point::Torus(x) => *x,
                _ => unreachable!(),
            };
            assert!(crate::util::torus_dist(got, expect) < 1e-12, "j = {j}");
        }
    }

    #[test]
    fn rotation_compensation_survives_long_orbits() {
        let alpha = golden_alpha();
        let sys = DynSystem::Rotation { alpha };
        let l = 1 << 20;
        let orb = orbit_window(&sys, &Start::Torus(0.25), 0, l).unwrap();
        let expect = frac(0.25 + (l as f64) * alpha);
        let got = match orb.point(l) {
            Point::Torus(x) => *x,
            _ => unreachable!(),
        };
        // Direct n·α multiplication carries a one-ulp-scale error itself;
        // the compensated walk must stay within that scale, not drift by L·ε.
        assert!(crate::util::torus_dist(got, expect) < 1e-9);
    }

    #[test]
    fn doubling_orbit_is_the_bit_shift() {
        let sys = DynSystem::Doubling;
        let seed = 99;
        let orb = orbit_window(&sys, &Start::BitSeed(seed), 0, 63).unwrap();
        let bits: Vec<u8> = (0..200).map(|i| stream_bit(seed, i)).collect();
        let oracle_pts = crate::oracle::doubling_orbit_from_bits(&bits, 64, 53);
        for j in 0..64i64 {
            let got = match orb.point(j) {
                Point::Torus(x) => *x,
                _ => unreachable!(),
            };
            assert_eq!(got, oracle_pts[j as usize], "j = {j}");
        }
    }

    #[test]
    fn doubling_natural_extension_inverts() {
        // T(x_{j-1}) = x_j: the point at j-1 doubles (mod 1) to the point at j
        // up to the last stored bit.
        let sys = DynSystem::Doubling;
        let orb = orbit_window(&sys, &Start::BitSeed(5), -20, 20).unwrap();
        for j in -19..=20i64 {
            let prev = match orb.point(j - 1) {
                Point::Torus(x) => *x,
                _ => unreachable!(),
            };
            let here = match orb.point(j) {
                Point::Torus(x) => *x,
                _ => unreachable!(),
            };
            let doubled = frac(2.0 * prev);
            assert!((doubled - here).abs() < 2f64.powi(-50), "j = {j}");
        }
    }

    #[test]
    fn skew_orbit_matches_closed_form() {
        let alpha = 0.3726177653;
        let sys = DynSystem::SkewProduct { alpha };
        let (x0, y0) = (0.11, 0.77);
        let orb = orbit_window(&sys, &Start::Torus2(x0, y0), -30, 30).unwrap();
        for j in -30..=30i64 {
            let jf = j as f64;
            let ex = frac(x0 + jf * alpha);
            let ey = frac(y0 + jf * x0 + jf * (jf - 1.0) / 2.0 * alpha);
            match orb.point(j) {
                Point::Torus2(x, y) => {
                    assert!(crate::util::torus_dist(*x, ex) < 1e-10, "x at {j}");
                    assert!(crate::util::torus_dist(*y, ey) < 1e-10, "y at {j}");
                }
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn cyclic_inverse_composes_to_identity() {
        let sys = DynSystem::Cyclic { j: 12 };
        let orb = orbit_window(&sys, &Start::Residue(5), -12, 12).unwrap();
        for j in -12..=0i64 {
            assert_eq!(*orb.point(j), *orb.point(j + 12));
        }
    }

    #[test]
    fn sample_constant_observable() {
        let sys = DynSystem::Rotation { alpha: golden_alpha() };
        let s = sample_observable(&sys, &Observable::Trig { freq: 0 }, &Start::Torus(0.2), 2, 50)
            .unwrap();
        assert!(s.iter().all(|v| (v - Complex64::new(1.0, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn sample_rotation_trig_explicit() {
        let alpha = 0.1375623;
        let sys = DynSystem::Rotation { alpha };
        let x0 = 0.4;
        let s = sample_observable(&sys, &Observable::Trig { freq: 1 }, &Start::Torus(x0), 2, 64)
            .unwrap();
        for (n, v) in s.iter().enumerate() {
            let expect = e2pi(x0 + 2.0 * n as f64 * alpha);
            assert!((v - expect).norm() < 1e-9, "n = {n}");
        }
    }

    #[test]
    fn sample_cyclic_delta_indicator() {
        let j = 11u64;
        let sys = DynSystem::Cyclic { j };
        let mut table = vec![Complex64::new(0.0, 0.0); j as usize];
        table[0] = Complex64::new(1.0, 0.0);
        let x0 = 4u64;
        let s = sample_observable(&sys, &Observable::Table(table), &Start::Residue(x0), 1, 40)
            .unwrap();
        for (n, v) in s.iter().enumerate() {
            let expect = if (x0 + n as u64) % j == 0 { 1.0 } else { 0.0 };
            assert_eq!(v.re, expect, "n = {n}");
        }
    }

    #[test]
    fn negative_power_sampling_works_on_invertible_systems() {
        let sys = DynSystem::Rotation { alpha: 0.32 };
        let s = sample_observable(&sys, &Observable::Trig { freq: 1 }, &Start::Torus(0.0), -1, 16)
            .unwrap();
        for (n, v) in s.iter().enumerate() {
            let expect = e2pi(frac(-(n as f64) * 0.32));
            assert!((v - expect).norm() < 1e-10);
        }
    }

    #[test]
    fn empirical_measure_preservation_rotation_and_doubling() {
        // Mean of a mean-zero trig observable along a long orbit stays near 0.
        let l = 1 << 16;
        let obs = Observable::Trig { freq: 1 };
        let rot = DynSystem::Rotation { alpha: golden_alpha() };
        let s = sample_observable(&rot, &obs, &Start::Torus(0.123), 1, l).unwrap();
        let mean_rot = crate::util::ksum_complex(s.into_iter()).norm() / l as f64;
        assert!(mean_rot < 5.0 / 256.0, "rotation mean {mean_rot}");
        let dbl = DynSystem::Doubling;
        let s = sample_observable(&dbl, &obs, &Start::BitSeed(7), 1, l).unwrap();
        let mean_dbl = crate::util::ksum_complex(s.into_iter()).norm() / l as f64;
        assert!(mean_dbl < 5.0 / 256.0, "doubling mean {mean_dbl}");
    }
}
