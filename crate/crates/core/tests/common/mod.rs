//! Reference implementations shared by the integration tests. These are
//! written independently of the library's fast paths.

#![allow(dead_code)]

use sumlab_core::FunctionTable;

/// `f(1..=n)` from an independent prime-power counting pass:
/// returns (distinct prime count, total prime count) for every k.
pub fn omega_counts(n: usize) -> Vec<(u32, u32)> {
    let mut counts = vec![(0u32, 0u32); n + 1];
    let mut is_composite = vec![false; n + 1];
    for p in 2..=n {
        if is_composite[p] {
            continue;
        }
        for m in (2 * p..=n).step_by(p) {
            is_composite[m] = true;
        }
        let mut pk = p;
        loop {
            for m in (pk..=n).step_by(pk) {
                counts[m].1 += 1;
                if pk == p {
                    counts[m].0 += 1;
                }
            }
            match pk.checked_mul(p) {
                Some(next) if next <= n => pk = next,
                _ => break,
            }
        }
    }
    counts
}

/// Σ_{i≠j} f(i) f(j) by the double loop.
pub fn offdiag_double_sum(values: &[i8]) -> i128 {
    let mut acc = 0i128;
    for (i, &a) in values.iter().enumerate() {
        for (j, &b) in values.iter().enumerate() {
            if i != j {
                acc += i128::from(a) * i128::from(b);
            }
        }
    }
    acc
}

/// Σ_i f(i) · (S - f(i)), the same ordered-pair sum in linear time.
pub fn offdiag_linear(values: &[i8]) -> i128 {
    let s: i128 = values.iter().map(|&v| i128::from(v)).sum();
    values.iter().map(|&v| i128::from(v) * (s - i128::from(v))).sum()
}

/// α̂ by enumerating event pairs and counting each event directly over the
/// window, one pass per (A, B).
pub fn naive_alpha(table: &FunctionTable, lag: u64, start: u64, len: usize) -> f64 {
    let alphabet = &table.spec().alphabet;
    let size = alphabet.len();
    let in_set = |mask: usize, v: i8| {
        let i = alphabet.iter().position(|&a| a == v).unwrap();
        mask >> i & 1 == 1
    };
    let w = len as i128;
    let mut best = 0i128;
    for a in 0..1usize << size {
        for b in 0..1usize << size {
            let (mut ca, mut cb, mut cab) = (0i128, 0i128, 0i128);
            for k in start..start + len as u64 {
                let x = in_set(a, table.get(k).unwrap());
                let y = in_set(b, table.get(k + lag).unwrap());
                ca += i128::from(x);
                cb += i128::from(y);
                cab += i128::from(x && y);
            }
            best = best.max((w * cab - ca * cb).abs());
        }
    }
    best as f64 / (len as u128 * len as u128) as f64
}
