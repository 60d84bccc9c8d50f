//! Deterministic sample bindings for parametric entries.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactmath::{frac, Binding, Scalar};

/// Values tried for every parameter before the random ones.
pub const SAMPLE_VALUES: [(i64, i64); 7] = [(0, 1), (1, 1), (-1, 1), (2, 1), (1, 2), (-3, 1), (7, 1)];

const RANDOM_PER_PARAM: usize = 2;

/// FNV-1a, used to derive per-entry seeds that do not depend on
/// scheduling or on the standard library's hasher.
pub(crate) fn mix(seed: u64, tag: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325 ^ seed;
    for b in tag.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

fn value_list(seed: u64, tag: &str, param: &str) -> Vec<Scalar> {
    let mut vals: Vec<Scalar> = SAMPLE_VALUES.iter().map(|&(n, d)| frac(n, d)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(mix(seed, &format!("{tag}/{param}")));
    let mut added = 0;
    while added < RANDOM_PER_PARAM {
        let n: i64 = rng.gen_range(-9..=9);
        let d: i64 = rng.gen_range(2..=7);
        let q = frac(n, d);
        if q.is_zero() || vals.contains(&q) {
            continue;
        }
        vals.push(q);
        added += 1;
    }
    vals
}

/// Bindings for `params`: the fixed values followed by two seeded random
/// rationals per parameter, combined by cyclic zip. A second pass offsets
/// parameter `p` by `p` positions so that parameters do not always move
/// together. When a combination is rejected by `valid` the later parameters
/// are rotated until one is accepted. A single empty binding is returned
/// when there are no parameters.
pub fn sample_bindings(params: &[String], seed: u64, tag: &str, valid: impl Fn(&Binding) -> bool) -> Vec<Binding> {
    if params.is_empty() {
        return vec![Binding::new()];
    }
    let lists: Vec<Vec<Scalar>> = params.iter().map(|p| value_list(seed, tag, p)).collect();
    let len = lists.iter().map(Vec::len).max().unwrap_or(0);
    let mut out: Vec<Binding> = Vec::new();
    let passes = if params.len() > 1 { 2 } else { 1 };
    for (pass, k) in (0..passes).flat_map(|pass| (0..len).map(move |k| (pass, k))) {
        for shift in 0..len {
            let b: Binding = params
                .iter()
                .zip(&lists)
                .enumerate()
                .map(|(p, (name, l))| (name.clone(), l[(k + (shift + pass) * p) % l.len()].clone()))
                .collect();
            if valid(&b) {
                if !out.contains(&b) {
                    out.push(b);
                }
                break;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::int;

    #[test]
    fn respects_exclusions_and_is_deterministic() {
        let ps = vec!["lambda".to_string()];
        let a = sample_bindings(&ps, 7, "X", |b| b["lambda"] != int(1));
        let b = sample_bindings(&ps, 7, "X", |b| b["lambda"] != int(1));
        assert_eq!(a, b);
        assert_eq!(a.len(), 8);
        assert!(a.iter().all(|b| b["lambda"] != int(1)));
        let c = sample_bindings(&ps, 8, "X", |_| true);
        assert_ne!(a[6..], c[7..]);
    }

    #[test]
    fn two_parameters_zip() {
        let ps = vec!["alpha".to_string(), "gamma".to_string()];
        let bs = sample_bindings(&ps, 1, "Y", |b| !(b["alpha"].is_zero() && b["gamma"] == frac(-1, 3)));
        assert!(bs.len() >= 5);
        assert_eq!(sample_bindings(&ps, 1, "Y", |_| true).len(), 18);
    }
}
