//! Bitmask k-subset enumeration for vertex sets with at most 64 elements.
//!
//! Vertex `v` (1-based) maps to bit `v - 1`. Enumeration follows Gosper's
//! hack, so masks are produced in strictly increasing numeric order.

/// Iterator over all k-element subsets of `{1..n}` as bitmasks.
///
/// The step arithmetic runs in `u128` so that `n = 64` needs no special
/// casing; every yielded mask fits in a `u64`.
#[derive(Debug, Clone)]
pub struct KSubsetMasks {
    cur: u128,
    end: u128,
}

/// Enumerates the k-subsets of `{1..n}`. Requires `k <= n <= 64`.
pub fn k_subset_masks(n: u32, k: u32) -> KSubsetMasks {
    assert!(n <= 64, "bitmask enumeration requires n <= 64");
    assert!(k <= n, "subset size exceeds ground set");
    let end = 1u128 << n;
    let cur = if k == 0 { 0 } else { (1u128 << k) - 1 };
    KSubsetMasks { cur, end }
}

impl Iterator for KSubsetMasks {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.cur >= self.end {
            return None;
        }
        let result = self.cur as u64;
        if self.cur == 0 {
            // The lone empty subset.
            self.cur = self.end;
        } else {
            let x = self.cur & self.cur.wrapping_neg();
            let y = self.cur + x;
            self.cur = (((self.cur & !y) / x) >> 1) | y;
        }
        Some(result)
    }
}

/// Bitmask of a strictly increasing 1-based vertex list.
pub fn mask_from_vertices(vertices: &[u32]) -> u64 {
    vertices.iter().fold(0u64, |m, &v| m | (1u64 << (v - 1)))
}

/// Sorted 1-based vertex list of a bitmask.
pub fn vertices_from_mask(mask: u64) -> Vec<u32> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    let mut rest = mask;
    while rest != 0 {
        let bit = rest.trailing_zeros();
        out.push(bit + 1);
        rest &= rest - 1;
    }
    out
}

/// Mask covering vertices `1..=c`.
pub fn prefix_mask(c: u32) -> u64 {
    debug_assert!(c <= 64);
    if c >= 64 {
        u64::MAX
    } else {
        (1u64 << c) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;

    #[test]
    fn enumerates_every_subset_once_in_order() {
        for n in 0..=8u32 {
            for k in 0..=n {
                let masks: Vec<u64> = k_subset_masks(n, k).collect();
                let expected: Vec<u64> = (1..=n)
                    .combinations(k as usize)
                    .map(|c| mask_from_vertices(&c))
                    .sorted()
                    .collect();
                assert_eq!(masks, expected, "n={n} k={k}");
                assert!(masks.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn handles_the_full_width_ground_set() {
        assert_eq!(k_subset_masks(64, 64).collect::<Vec<_>>(), vec![u64::MAX]);
        assert_eq!(k_subset_masks(64, 1).count(), 64);
        assert_eq!(k_subset_masks(64, 63).count(), 64);
        assert_eq!(k_subset_masks(5, 0).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn mask_vertex_round_trip() {
        for n in 1..=10u32 {
            for k in 1..=n {
                for mask in k_subset_masks(n, k) {
                    let vs = vertices_from_mask(mask);
                    assert_eq!(mask_from_vertices(&vs), mask);
                    assert!(vs.windows(2).all(|w| w[0] < w[1]));
                }
            }
        }
    }

    #[test]
    fn prefix_masks() {
        assert_eq!(prefix_mask(0), 0);
        assert_eq!(prefix_mask(3), 0b111);
        assert_eq!(prefix_mask(64), u64::MAX);
    }
}
