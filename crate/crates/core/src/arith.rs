//! Small integer helpers.

/// Prime factorization as `(prime, exponent)` pairs in ascending prime order.
pub fn factorize(mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: usize) -> Vec<usize> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// True if `n` is a power of `p` (including `p^0 = 1`).
pub fn is_power_of(mut n: usize, p: usize) -> bool {
    while n > 1 && n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorizations() {
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(12), vec![(2, 2), (3, 1)]);
        assert_eq!(factorize(98), vec![(2, 1), (7, 2)]);
        assert_eq!(prime_divisors(97), vec![97]);
        assert!(is_power_of(27, 3));
        assert!(is_power_of(1, 5));
        assert!(!is_power_of(12, 2));
    }
}
