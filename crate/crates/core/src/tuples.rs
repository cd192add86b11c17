//! Mixed-radix indexing of tuples over `0..base`, most significant
//! coordinate first. `(t_0, ..., t_{k-1})` has index
//! `t_0 * base^(k-1) + ... + t_{k-1}`.

/// `base^k` as a `u128`, saturating on overflow.
pub fn count(base: usize, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..k {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}

pub fn index(tuple: &[usize], base: usize) -> usize {
    tuple.iter().fold(0, |acc, &t| acc * base + t)
}

/// Writes the tuple with the given index into `out` (whose length is the arity).
pub fn decode_into(mut idx: usize, base: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = idx % base;
        idx /= base;
    }
}

pub fn decode(idx: usize, base: usize, arity: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    decode_into(idx, base, &mut out);
    out
}

/// Advances `tuple` to its lexicographic successor. Returns `false` after the
/// last tuple (leaving all zeros).
pub fn advance(tuple: &mut [usize], base: usize) -> bool {
    for slot in tuple.iter_mut().rev() {
        *slot += 1;
        if *slot < base {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Calls `f` on every tuple of length `arity` over `0..base` in index order.
pub fn for_each(base: usize, arity: usize, mut f: impl FnMut(&[usize])) {
    let mut t = vec![0; arity];
    loop {
        f(&t);
        if !advance(&mut t, base) {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_and_decode_agree() {
        let mut seen = 0;
        for_each(3, 4, |t| {
            assert_eq!(index(t, 3), seen);
            assert_eq!(decode(seen, 3, 4), t);
            seen += 1;
        });
        assert_eq!(seen, 81);
    }

    #[test]
    fn empty_arity_has_one_tuple() {
        let mut n = 0;
        for_each(5, 0, |t| {
            assert!(t.is_empty());
            n += 1;
        });
        assert_eq!(n, 1);
        assert_eq!(count(5, 0), 1);
    }

    #[test]
    fn count_saturates() {
        assert_eq!(count(10, 3), 1000);
        assert_eq!(count(1 << 20, 10), u128::MAX);
    }
}
