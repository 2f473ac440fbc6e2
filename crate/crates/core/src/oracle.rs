//! Naive reference implementations used to cross-check the fast paths.
//!
//! Everything here trades speed for obviousness: trial division instead of
//! sieves, explicit parallelepiped sums instead of FFT identities, dense grids
//! instead of certified estimates. These functions deliberately share no code
//! with the implementations they verify.

use num_complex::Complex64;

/// Prime factorization by trial division: `(p, exponent)` pairs, `p` ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1);
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Möbius value from trial division.
pub fn mobius(n: u64) -> i8 {
    let fac = factorize(n);
    if fac.iter().any(|&(_, e)| e > 1) {
        0
    } else if fac.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Liouville value from trial division.
pub fn liouville(n: u64) -> i8 {
    let omega: u32 = factorize(n).iter().map(|&(_, e)| e).sum();
    if omega % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Binary digit sum by repeated division.
pub fn binary_digit_sum(mut n: u64) -> u32 {
    let mut s = 0;
    while n > 0 {
        s += (n % 2) as u32;
        n /= 2;
    }
    s
}

/// Number of (possibly overlapping) "11" factors in the binary expansion,
/// counted on the digit string.
pub fn count_11_factors(n: u64) -> u32 {
    let digits = format!("{n:b}");
    let bytes = digits.as_bytes();
    let mut count = 0;
    for w in bytes.windows(2) {
        if w == b"11" {
            count += 1;
        }
    }
    count
}

/// Gowers inner product over `Z/M` by explicit summation over all
/// `(x, h_1, .., h_d)`, conjugating odd-weight vertices. Family order is by
/// vertex bits: `family[c]` is the function at cube vertex `c`.
///
/// Cost `O(M^{d+1} 2^d)`; intended for small `M` only.
pub fn gowers_inner_bruteforce(family: &[Vec<Complex64>], d: u32) -> Complex64 {
    let vertices = 1usize << d;
    assert_eq!(family.len(), vertices);
    let m = family[0].len();
    assert!(family.iter().all(|f| f.len() == m));
    let mut total = Complex64::new(0.0, 0.0);
    let mut shifts = vec![0usize; d as usize];
    loop {
        for x in 0..m {
            let mut prod = Complex64::new(1.0, 0.0);
            for (c, f) in family.iter().enumerate() {
                let mut idx = x;
                for (i, &h) in shifts.iter().enumerate() {
                    if c >> i & 1 == 1 {
                        idx += h;
                    }
                }
                let v = f[idx % m];
                prod *= if (c.count_ones()) % 2 == 1 { v.conj() } else { v };
            }
            total += prod;
        }
        // Odometer over (h_1, .., h_d) in 0..m each.
        let mut k = 0;
        loop {
            if k == shifts.len() {
                let norm = (m as f64).powi(1 + d as i32);
                return total / norm;
            }
            shifts[k] += 1;
            if shifts[k] < m {
                break;
            }
            shifts[k] = 0;
            k += 1;
        }
    }
}

/// `U^d(Z/M)` norm of a single function by the brute-force inner product.
pub fn gowers_norm_bruteforce(f: &[Complex64], d: u32) -> f64 {
    let family: Vec<Vec<Complex64>> = (0..(1usize << d)).map(|_| f.to_vec()).collect();
    let raw = gowers_inner_bruteforce(&family, d);
    raw.re.max(0.0).powf(1.0 / (1u64 << d) as f64)
}

/// Dense-grid estimate of `sup_θ |Σ_k coeffs[k] e^{2πi n_k θ}|` by direct
/// summation at `grid` equispaced points. No FFT, no error model.
pub fn sup_norm_dense_grid(support: &[i64], coeffs: &[Complex64], grid: usize) -> f64 {
    assert_eq!(support.len(), coeffs.len());
    let mut best: f64 = 0.0;
    for g in 0..grid {
        let theta = g as f64 / grid as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (&n, &c) in support.iter().zip(coeffs.iter()) {
            let ang = 2.0 * std::f64::consts::PI * (n as f64 * theta);
            acc += c * Complex64::new(ang.cos(), ang.sin());
        }
        best = best.max(acc.norm());
    }
    best
}

/// Variation norm `v_s` by exhaustive enumeration of all increasing
/// subsequences. Exponential; keep `a.len() <= ~16`.
pub fn variation_norm_exhaustive(a: &[Complex64], s: f64) -> f64 {
    let n = a.len();
    assert!(n <= 20, "exhaustive variation norm limited to short sequences");
    let mut best: f64 = 0.0;
    for mask in 0u32..(1u32 << n) {
        if mask.count_ones() < 2 {
            continue;
        }
        let picked: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let mut sum = 0.0;
        for w in picked.windows(2) {
            sum += (a[w[1]] - a[w[0]]).norm().powf(s);
        }
        best = best.max(sum);
    }
    best.powf(1.0 / s)
}

/// Orbit of the doubling map read off an explicit bit string:
/// `x_j = 0.b_j b_{j+1} ...` truncated to `precision` bits.
pub fn doubling_orbit_from_bits(bits: &[u8], len: usize, precision: usize) -> Vec<f64> {
    assert!(len + precision <= bits.len());
    (0..len)
        .map(|j| {
            let mut x = 0.0;
            let mut w = 0.5;
            for k in 0..precision {
                if bits[j + k] == 1 {
                    x += w;
                }
                w *= 0.5;
            }
            x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorization_basics() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(4), 0);
        assert_eq!(liouville(8), -1);
        assert_eq!(liouville(12), -1);
    }

    #[test]
    fn digit_oracles() {
        assert_eq!(binary_digit_sum(0b1011), 3);
        assert_eq!(count_11_factors(0b111), 2);
        assert_eq!(count_11_factors(0b1011), 1);
    }

    #[test]
    fn brute_force_gowers_of_constant_is_one() {
        let f = vec![Complex64::new(1.0, 0.0); 5];
        for d in 1..=3 {
            assert!((gowers_norm_bruteforce(&f, d) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn brute_force_gowers_of_delta() {
        // ||δ||_{U^2(Z/M)} = M^{-3/4}: only the degenerate parallelogram
        // contributes.
        let m = 7;
        let mut f = vec![Complex64::new(0.0, 0.0); m];
        f[0] = Complex64::new(1.0, 0.0);
        let got = gowers_norm_bruteforce(&f, 2);
        assert!((got - (m as f64).powf(-0.75)).abs() < 1e-12);
    }
}
