//! Data-parallel helpers with a sequential fallback.
//!
//! Everything heavy in this crate is an independent map over grid points,
//! shift indices, or trial seeds. These helpers run those maps through rayon
//! when the `parallel` feature is enabled (the default) and fall back to
//! plain iteration otherwise. Outputs are collected in index order in both
//! modes, so results are bit-identical regardless of thread count.
//!
//! The `*_seq` variants are always compiled; benches compare them against the
//! parallel paths.

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(feature = "parallel")]
pub fn map_indexed<U: Send, F: Fn(usize) -> U + Sync + Send>(n: usize, f: F) -> Vec<U> {
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

/// Map `f` over `0..n`, collecting results in index order.
#[cfg(not(feature = "parallel"))]
pub fn map_indexed<U: Send, F: Fn(usize) -> U + Sync + Send>(n: usize, f: F) -> Vec<U> {
    map_indexed_seq(n, f)
}

/// Sequential reference version of [`map_indexed`].
pub fn map_indexed_seq<U, F: Fn(usize) -> U>(n: usize, f: F) -> Vec<U> {
    (0..n).map(f).collect()
}

/// Map `f` over a slice, collecting results in index order.
#[cfg(feature = "parallel")]
pub fn map_slice<T: Sync, U: Send, F: Fn(&T) -> U + Sync + Send>(items: &[T], f: F) -> Vec<U> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// Map `f` over a slice, collecting results in index order.
#[cfg(not(feature = "parallel"))]
pub fn map_slice<T: Sync, U: Send, F: Fn(&T) -> U + Sync + Send>(items: &[T], f: F) -> Vec<U> {
    map_slice_seq(items, f)
}

/// Sequential reference version of [`map_slice`].
pub fn map_slice_seq<T, U, F: Fn(&T) -> U>(items: &[T], f: F) -> Vec<U> {
    items.iter().map(f).collect()
}

/// Location and value of the maximum of `values`; the smallest index wins
/// ties so the answer does not depend on chunking.
#[cfg(feature = "parallel")]
pub fn argmax(values: &[f64]) -> (usize, f64) {
    use rayon::prelude::*;
    values
        .par_iter()
        .enumerate()
        .map(|(i, &v)| (i, v))
        .reduce(|| (usize::MAX, f64::NEG_INFINITY), pick_max)
}

/// Location and value of the maximum of `values`; the smallest index wins ties.
#[cfg(not(feature = "parallel"))]
pub fn argmax(values: &[f64]) -> (usize, f64) {
    argmax_seq(values)
}

/// Sequential reference version of [`argmax`].
pub fn argmax_seq(values: &[f64]) -> (usize, f64) {
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| (i, v))
        .fold((usize::MAX, f64::NEG_INFINITY), pick_max)
}

fn pick_max(a: (usize, f64), b: (usize, f64)) -> (usize, f64) {
    if b.1 > a.1 || (b.1 == a.1 && b.0 < a.0) {
        b
    } else {
        a
    }
}

/// Index and magnitude of the largest-modulus entry, without materializing a
/// magnitude buffer; the smallest index wins ties.
#[cfg(feature = "parallel")]
pub fn argmax_norm(values: &[num_complex::Complex64]) -> (usize, f64) {
    use rayon::prelude::*;
    values
        .par_iter()
        .enumerate()
        .map(|(i, z)| (i, z.norm()))
        .reduce(|| (usize::MAX, f64::NEG_INFINITY), pick_max)
}

/// Index and magnitude of the largest-modulus entry; smallest index on ties.
#[cfg(not(feature = "parallel"))]
pub fn argmax_norm(values: &[num_complex::Complex64]) -> (usize, f64) {
    argmax_norm_seq(values)
}

/// Sequential reference version of [`argmax_norm`].
pub fn argmax_norm_seq(values: &[num_complex::Complex64]) -> (usize, f64) {
    values
        .iter()
        .enumerate()
        .map(|(i, z)| (i, z.norm()))
        .fold((usize::MAX, f64::NEG_INFINITY), pick_max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_matches_sequential() {
        let f = |i: usize| (i * i) as f64;
        assert_eq!(map_indexed(100, f), map_indexed_seq(100, f));
    }

    #[test]
    fn argmax_prefers_first_on_ties() {
        let v = [1.0, 3.0, 3.0, 2.0];
        assert_eq!(argmax(&v), (1, 3.0));
        assert_eq!(argmax_seq(&v), (1, 3.0));
    }
}
