use alloc::vec::Vec;

/// `n!` as `u64` (exact for `n ≤ 20`).
pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Calls `visit` once for every permutation of `{0, …, n−1}`.
///
/// Iterative Heap's algorithm: consecutive permutations differ by a single
/// transposition and nothing is allocated per permutation. The first
/// permutation visited is the identity.
pub fn for_each_permutation(n: usize, mut visit: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut counters = alloc::vec![0usize; n];
    visit(&perm);
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            visit(&perm);
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;

    #[test]
    fn visits_every_permutation_once() {
        for n in 1..=6 {
            let mut seen = BTreeSet::new();
            let mut count = 0u64;
            for_each_permutation(n, |p| {
                count += 1;
                seen.insert(p.to_vec());
            });
            assert_eq!(count, factorial(n));
            assert_eq!(seen.len() as u64, factorial(n));
        }
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), 1);
        assert_eq!(factorial(8), 40320);
    }
}
