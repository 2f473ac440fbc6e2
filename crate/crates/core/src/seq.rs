//! Arithmetic weight sequences.
//!
//! A [`WeightSequence`] is a finite 1-bounded complex sequence `w(1..=N)`.
//! Constructors cover the Möbius and Liouville functions (linear sieves),
//! custom (completely) multiplicative functions extended from prime or
//! prime-power assignments, the Thue-Morse and Rudin-Shapiro automatic
//! sequences, and polynomial phases `e^{2πi P(n)}` with rational `P`.
//!
//! Sequences are 1-indexed to match sums of the form `Σ_{n=1}^{N}`.

use num_complex::Complex64;

use crate::rng;
use crate::util::{e2pi, gcd, ksum_complex};
use crate::{Error, Result};

/// Tolerance for the 1-boundedness check at construction. Unimodular values
/// produced through `sin_cos` land within a few ulps of the unit circle.
const BOUND_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum WeightKind {
    Mobius,
    Liouville,
    CustomMultiplicative,
    CustomCompletelyMultiplicative,
    Automatic,
    PolynomialPhase,
    Raw,
}

/// A finite 1-bounded complex sequence with multiplicativity metadata.
#[derive(Clone, Debug)]
pub struct WeightSequence {
    kind: WeightKind,
    /// `values[i]` holds `w(i+1)`.
    values: Vec<Complex64>,
}

impl WeightSequence {
    /// Wrap raw values as `w(1..=len)`, enforcing 1-boundedness.
    pub fn from_values(kind: WeightKind, values: Vec<Complex64>) -> Result<Self> {
        for (i, v) in values.iter().enumerate() {
            if v.norm_sqr() > (1.0 + BOUND_TOL) * (1.0 + BOUND_TOL) {
                return Err(Error::BoundViolation(format!(
                    "|w({})| = {} exceeds 1",
                    i + 1,
                    v.norm()
                )));
            }
        }
        Ok(Self { kind, values })
    }

    pub fn kind(&self) -> WeightKind {
        self.kind
    }

    /// Number of stored values `N`.
    pub fn len(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Value at 1-based index `n`.
    pub fn get(&self, n: u64) -> Complex64 {
        self.values[(n - 1) as usize]
    }

    /// Checked access at 1-based index `n`.
    pub fn try_get(&self, n: u64) -> Result<Complex64> {
        if n == 0 || n > self.len() {
            return Err(Error::Range(format!(
                "index {n} outside stored range 1..={}",
                self.len()
            )));
        }
        Ok(self.get(n))
    }

    /// All values, `w(1)` first.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

fn check_len(n: u64) -> Result<usize> {
    if n == 0 {
        return Err(Error::Precondition("sequence length must be >= 1".into()));
    }
    usize::try_from(n)
        .ok()
        .filter(|&m| m < (1usize << 31))
        .ok_or_else(|| Error::Capacity(format!("sequence length {n} not addressable")))
}

/// Möbius function values `μ(1..=n)` as integers, via a linear sieve.
pub fn mobius_values(n: u64) -> Result<Vec<i8>> {
    let n = check_len(n)?;
    let mut mu = vec![0i8; n + 1];
    let mut composite = vec![false; n + 1];
    let mut primes: Vec<usize> = Vec::new();
    if n >= 1 {
        mu[1] = 1;
    }
    for i in 2..=n {
        if !composite[i] {
            primes.push(i);
            mu[i] = -1;
        }
        for &p in &primes {
            let ip = i.checked_mul(p).filter(|&v| v <= n);
            let Some(ip) = ip else { break };
            composite[ip] = true;
            if i % p == 0 {
                mu[ip] = 0;
                break;
            }
            mu[ip] = -mu[i];
        }
    }
    mu.remove(0);
    Ok(mu)
}

/// Liouville function values `λ(1..=n) = (-1)^{Ω}` as integers.
pub fn liouville_values(n: u64) -> Result<Vec<i8>> {
    let n = check_len(n)?;
    let mut lam = vec![0i8; n + 1];
    let mut composite = vec![false; n + 1];
    let mut primes: Vec<usize> = Vec::new();
    if n >= 1 {
        lam[1] = 1;
    }
    for i in 2..=n {
        if !composite[i] {
            primes.push(i);
            lam[i] = -1;
        }
        for &p in &primes {
            let ip = i.checked_mul(p).filter(|&v| v <= n);
            let Some(ip) = ip else { break };
            composite[ip] = true;
            lam[ip] = -lam[i];
            if i % p == 0 {
                break;
            }
        }
    }
    lam.remove(0);
    Ok(lam)
}

fn from_i8(kind: WeightKind, vals: Vec<i8>) -> WeightSequence {
    WeightSequence {
        kind,
        values: vals
            .into_iter()
            .map(|v| Complex64::new(v as f64, 0.0))
            .collect(),
    }
}

/// `μ(1..=n)` as a weight sequence.
pub fn mobius_sieve(n: u64) -> Result<WeightSequence> {
    Ok(from_i8(WeightKind::Mobius, mobius_values(n)?))
}

/// `λ(1..=n)` as a weight sequence.
pub fn liouville_sieve(n: u64) -> Result<WeightSequence> {
    Ok(from_i8(WeightKind::Liouville, liouville_values(n)?))
}

/// Completely multiplicative extension of prime assignments to `1..=n`.
///
/// `prime_value(p)` must return a value of modulus at most 1 for every prime
/// `p <= n`; the extension satisfies `w(ab) = w(a)w(b)` for all `ab <= n`.
pub fn completely_multiplicative<F>(n: u64, prime_value: F) -> Result<WeightSequence>
where
    F: Fn(u64) -> Complex64,
{
    let n = check_len(n)?;
    let mut vals = vec![Complex64::new(0.0, 0.0); n + 1];
    let mut composite = vec![false; n + 1];
    let mut primes: Vec<usize> = Vec::new();
    vals[1] = Complex64::new(1.0, 0.0);
    for i in 2..=n {
        if !composite[i] {
            let v = prime_value(i as u64);
            if v.norm_sqr() > (1.0 + BOUND_TOL) * (1.0 + BOUND_TOL) {
                return Err(Error::BoundViolation(format!(
                    "|value at prime {i}| = {} exceeds 1",
                    v.norm()
                )));
            }
            primes.push(i);
            vals[i] = v;
        }
        for &p in &primes {
            let ip = i.checked_mul(p).filter(|&v| v <= n);
            let Some(ip) = ip else { break };
            composite[ip] = true;
            vals[ip] = vals[i] * vals[p];
            if i % p == 0 {
                break;
            }
        }
    }
    vals.remove(0);
    WeightSequence::from_values(WeightKind::CustomCompletelyMultiplicative, vals)
}

/// Multiplicative extension of explicit prime-power assignments to `1..=n`.
///
/// `prime_power_value(p, e)` must cover every prime power `p^e <= n`;
/// a missing assignment is an error rather than a silent default, because
/// prime-power values of a multiplicative function are not determined by its
/// values at primes.
pub fn multiplicative_from_prime_powers<F>(n: u64, prime_power_value: F) -> Result<WeightSequence>
where
    F: Fn(u64, u32) -> Option<Complex64>,
{
    let n = check_len(n)?;
    // Smallest prime factor sieve, then extend along p^e * m with (p, m) = 1.
    let mut spf = vec![0u32; n + 1];
    for i in 2..=n {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    let mut vals = vec![Complex64::new(0.0, 0.0); n + 1];
    if n >= 1 {
        vals[1] = Complex64::new(1.0, 0.0);
    }
    for i in 2..=n {
        let p = spf[i] as usize;
        let mut m = i;
        let mut e = 0u32;
        let mut pe = 1usize;
        while m % p == 0 {
            m /= p;
            e += 1;
            pe *= p;
        }
        let v = prime_power_value(p as u64, e).ok_or_else(|| {
            Error::Precondition(format!("no value supplied for prime power {p}^{e} = {pe}"))
        })?;
        if v.norm_sqr() > (1.0 + BOUND_TOL) * (1.0 + BOUND_TOL) {
            return Err(Error::BoundViolation(format!(
                "|value at {p}^{e}| = {} exceeds 1",
                v.norm()
            )));
        }
        vals[i] = v * vals[m];
    }
    vals.remove(0);
    WeightSequence::from_values(WeightKind::CustomMultiplicative, vals)
}

/// Seeded random 1-bounded multiplicative weight: independent unimodular
/// values at each prime (completely multiplicative) or each prime power.
pub fn random_multiplicative(n: u64, seed: u64, completely: bool) -> Result<WeightSequence> {
    if completely {
        completely_multiplicative(n, |p| rng::unit_complex(&mut rng::fork(seed, p)))
    } else {
        multiplicative_from_prime_powers(n, |p, e| {
            Some(rng::unit_complex(&mut rng::fork(
                seed,
                p.wrapping_mul(64) + e as u64,
            )))
        })
    }
}

/// Raw 1-bounded sequence of independent uniform points of the unit disc.
pub fn random_disc(n: u64, seed: u64) -> Result<WeightSequence> {
    let n = check_len(n)?;
    let mut r = rng::root(seed);
    let vals = (0..n).map(|_| rng::disc_complex(&mut r)).collect();
    WeightSequence::from_values(WeightKind::Raw, vals)
}

/// Raw ±1 sequence of independent fair signs.
pub fn random_signs(n: u64, seed: u64) -> Result<WeightSequence> {
    let n = check_len(n)?;
    let mut r = rng::root(seed);
    let vals = (0..n)
        .map(|_| Complex64::new(rng::sign(&mut r), 0.0))
        .collect();
    WeightSequence::from_values(WeightKind::Raw, vals)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AutomaticKind {
    ThueMorse,
    RudinShapiro,
}

/// Thue-Morse value `(-1)^{s_2(n)}` (parity of the binary digit sum).
pub fn thue_morse_at(n: u64) -> f64 {
    if n.count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Rudin-Shapiro value `(-1)^{#occurrences of "11" in binary n}`.
pub fn rudin_shapiro_at(n: u64) -> f64 {
    if (n & (n >> 1)).count_ones() % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// The ±1 automatic sequence sampled at `n = 1..=len`.
pub fn automatic_sequence(kind: AutomaticKind, len: u64) -> Result<WeightSequence> {
    let m = check_len(len)?;
    let f = match kind {
        AutomaticKind::ThueMorse => thue_morse_at,
        AutomaticKind::RudinShapiro => rudin_shapiro_at,
    };
    let vals = (1..=m as u64)
        .map(|n| Complex64::new(f(n), 0.0))
        .collect();
    WeightSequence::from_values(WeightKind::Automatic, vals)
}

/// Polynomial phase sequence `w(n) = e^{2πi P(n)}` for rational
/// `P(x) = Σ coeffs[k] x^k`, with `coeffs[k] = (numerator, denominator)`.
///
/// `P(n) mod 1` is reduced in exact integer arithmetic (Horner over a common
/// denominator) before the single transcendental call, so large `n` cannot
/// cause cancellation in the phase.
pub fn polynomial_phase(coeffs: &[(i64, u64)], len: u64) -> Result<WeightSequence> {
    let m = check_len(len)?;
    for &(_, q) in coeffs {
        if q == 0 {
            return Err(Error::Precondition("zero denominator in phase coefficient".into()));
        }
    }
    // Common denominator and integer numerators.
    let mut denom: i128 = 1;
    for &(_, q) in coeffs {
        let q = q as i128;
        let g = gcd(denom as u64 % q as u64, q as u64).max(1);
        denom = denom
            .checked_mul(q / g as i128)
            .ok_or_else(|| Error::Capacity("denominator lcm overflows".into()))?;
        if denom > (1i128 << 62) {
            return Err(Error::Capacity("denominator lcm exceeds 2^62".into()));
        }
    }
    let nums: Vec<i128> = coeffs
        .iter()
        .map(|&(p, q)| (p as i128) * (denom / q as i128))
        .collect();
    let vals = (1..=m as i128)
        .map(|x| {
            // Horner for the numerator of P(x), reduced mod denom each step.
            let mut h: i128 = 0;
            for &c in nums.iter().rev() {
                h = (h * x + c).rem_euclid(denom);
            }
            e2pi(h as f64 / denom as f64)
        })
        .collect();
    WeightSequence::from_values(WeightKind::PolynomialPhase, vals)
}

/// Constant-one weight of length `n`.
pub fn constant_one(n: u64) -> Result<WeightSequence> {
    let m = check_len(n)?;
    WeightSequence::from_values(WeightKind::Raw, vec![Complex64::new(1.0, 0.0); m])
}

/// Averages `(1/N) |Σ_{n=1}^{N} w(an+b)|` for each progression `(a, b)` and
/// each `N` in `n_list`; one report row per `(a, b, N)`, sorted.
pub fn aperiodicity_profile(
    w: &WeightSequence,
    pairs: &[(u64, u64)],
    n_list: &[u64],
) -> Result<crate::report::ExperimentReport> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for &(a, b) in pairs {
        if a == 0 {
            return Err(Error::Precondition("progression step a must be >= 1".into()));
        }
        for &n in n_list {
            let last = a
                .checked_mul(n)
                .and_then(|v| v.checked_add(b))
                .ok_or_else(|| Error::Capacity("a*N + b overflows".into()))?;
            if last > w.len() {
                return Err(Error::Range(format!(
                    "progression ({a}, {b}) at N = {n} needs index {last} > stored {}",
                    w.len()
                )));
            }
            let sum = ksum_complex((1..=n).map(|k| w.get(a * k + b)));
            rows.push(vec![a as f64, b as f64, n as f64, sum.norm() / n as f64]);
        }
    }
    rows.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut report = crate::report::ExperimentReport::new(
        &[("operation", "aperiodicity_profile".into())],
        None,
        &["a", "b", "n", "value"],
    );
    for row in rows {
        report.push_row(row);
    }
    Ok(report)
}
