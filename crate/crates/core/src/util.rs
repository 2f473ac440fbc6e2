//! Small numeric helpers: compensated summation, modular arithmetic,
//! torus geometry, and least-squares slopes.

use num_complex::Complex64;

/// Neumaier compensated accumulator for `f64`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated accumulator for complex values (real and imaginary parts
/// carried separately).
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanComplex {
    re: Kahan,
    im: Kahan,
}

impl KahanComplex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, z: Complex64) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Compensated sum of a sequence of complex values in iteration order.
pub fn ksum_complex<I: IntoIterator<Item = Complex64>>(items: I) -> Complex64 {
    let mut acc = KahanComplex::new();
    for z in items {
        acc.add(z);
    }
    acc.value()
}

/// Compensated sum of a sequence of reals in iteration order.
pub fn ksum<I: IntoIterator<Item = f64>>(items: I) -> f64 {
    let mut acc = Kahan::new();
    for x in items {
        acc.add(x);
    }
    acc.value()
}

/// `e^{2πi t}`.
pub fn e2pi(t: f64) -> Complex64 {
    let (s, c) = (2.0 * std::f64::consts::PI * t).sin_cos();
    Complex64::new(c, s)
}

/// `a*b mod m` for nonnegative operands, without overflow.
pub fn mulmod_i128(a: i128, b: i128, m: i128) -> i128 {
    debug_assert!(m > 0);
    (a.rem_euclid(m) * b.rem_euclid(m)).rem_euclid(m)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Fractional part mapped to `[0, 1)`.
pub fn frac(x: f64) -> f64 {
    let f = x - x.floor();
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Distance on the circle `R/Z` between points of `[0, 1)`.
pub fn torus_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).abs() % 1.0;
    d.min(1.0 - d)
}

/// Least-squares slope of `ln y` against `ln x`.
///
/// Zero or negative `y` values are floored at `1e-300` so a single vanishing
/// sample cannot poison a trend estimate.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    debug_assert!(points.len() >= 2);
    let logs: Vec<(f64, f64)> = points
        .iter()
        .map(|&(x, y)| (x.ln(), y.max(1e-300).ln()))
        .collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    sxy / sxx
}

/// All primes `<= n` by an Eratosthenes sieve.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut q = p * p;
            while q <= n {
                composite[q] = true;
                q += p;
            }
        }
    }
    primes
}
