//! Families of commuting matrix pairs used to exercise the whole pipeline.
//!
//! Arbitrary commuting 0/1 pairs are hard to generate, so the corpus sticks
//! to families that commute by construction: circulants (all circulants of
//! one size commute), pairs `(A, I)` and `(A, A)`, and the one-vertex
//! exchange systems.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::matrix::NonnegMatrix;
use crate::textile::{exchange_system, TextileSystem};

/// Circulant with ones at offsets `support` in every row.
pub fn circulant(n: usize, support: &[usize]) -> NonnegMatrix {
    NonnegMatrix::from_fn(n, |i, j| support.iter().filter(|&&s| (i + s) % n == j).count() as u64)
}

/// Nonempty offset sets of a circulant of size `n`, as bitmasks.
fn supports(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..(1 << n)).map(move |mask| (0..n).filter(|&s| mask >> s & 1 == 1).collect())
}

pub struct CorpusSystem {
    pub name: String,
    pub system: TextileSystem,
}

fn named(name: String, a: &NonnegMatrix, b: &NonnegMatrix) -> CorpusSystem {
    let system = TextileSystem::canonical(a, b).expect("corpus pairs commute");
    CorpusSystem { name, system }
}

/// Every pair of 0/1 circulants of size `n` (`n ≤ 3` keeps this small).
pub fn all_circulant_pairs(n: usize) -> Vec<CorpusSystem> {
    let mut out = Vec::new();
    for sa in supports(n) {
        for sb in supports(n) {
            out.push(named(format!("circulant{n}{sa:?}x{sb:?}"), &circulant(n, &sa), &circulant(n, &sb)));
        }
    }
    out
}

/// A fixed sample of size-4 and size-5 circulant pairs.
pub fn sampled_circulant_pairs() -> Vec<CorpusSystem> {
    let picks: &[(usize, &[usize], &[usize])] = &[
        (4, &[1], &[1]),
        (4, &[1], &[2]),
        (4, &[1], &[0, 2]),
        (4, &[0, 1], &[0, 3]),
        (4, &[2], &[2]),
        (4, &[1, 3], &[0]),
        (4, &[1, 2], &[3]),
        (4, &[0, 1, 2, 3], &[1]),
        (5, &[1], &[2]),
        (5, &[0, 1], &[4]),
        (5, &[2, 3], &[1]),
    ];
    picks
        .iter()
        .map(|&(n, sa, sb)| named(format!("circulant{n}{sa:?}x{sb:?}"), &circulant(n, sa), &circulant(n, sb)))
        .collect()
}

/// Pairs `(A, I)`, `(A, A)` and the disconnected identity system.
pub fn special_pairs() -> Vec<CorpusSystem> {
    let mats: [(&str, NonnegMatrix); 4] = [
        ("upper", NonnegMatrix::from_rows(&[[1, 1], [0, 1]]).expect("square")),
        ("swap", NonnegMatrix::from_rows(&[[0, 1], [1, 0]]).expect("square")),
        ("golden", NonnegMatrix::from_rows(&[[1, 1], [1, 0]]).expect("square")),
        ("cycle3", circulant(3, &[1])),
    ];
    let mut out = Vec::new();
    for (name, a) in &mats {
        let id = NonnegMatrix::identity(a.dim());
        out.push(named(format!("{name}xI"), a, &id));
        out.push(named(format!("{name}x{name}"), a, a));
    }
    let i2 = NonnegMatrix::identity(2);
    out.push(named("identity2".into(), &i2, &i2));
    out.push(named("identity3".into(), &NonnegMatrix::identity(3), &NonnegMatrix::identity(3)));
    out
}

/// Exchange systems for `2 ≤ N, M ≤ max`.
pub fn exchange_systems(max: u64) -> Vec<CorpusSystem> {
    let mut out = Vec::new();
    for n in 2..=max {
        for m in 2..=max {
            let system = exchange_system(n, m).expect("sizes above one");
            out.push(CorpusSystem { name: format!("exchange({n},{m})"), system });
        }
    }
    out
}

/// Exchange systems up to `(6, 6)`, all circulant pairs of sizes 2 and 3,
/// a sample of larger circulants and the special pairs.
pub fn standard_corpus() -> Vec<CorpusSystem> {
    let mut out = exchange_systems(6);
    out.extend(all_circulant_pairs(2));
    out.extend(all_circulant_pairs(3));
    out.extend(sampled_circulant_pairs());
    out.extend(special_pairs());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circulants_commute() {
        for sa in supports(4) {
            for sb in supports(4) {
                let (a, b) = (circulant(4, &sa), circulant(4, &sb));
                assert_eq!(a.mul(&b), b.mul(&a));
            }
        }
    }

    #[test]
    fn corpus_shape() {
        let c = standard_corpus();
        let circ = c.iter().filter(|s| s.name.starts_with("circulant")).count();
        assert!(circ >= 20, "{circ}");
        assert!(c.iter().any(|s| s.name == "identity2"));
    }
}
