//! Seeded random generators for instances, hypergraphs, hypertrees and diverse families.

use std::collections::BTreeSet;

use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::hypergraph::{Hypergraph, Vertex};
use crate::partition::{BlockPartition, ColorId, MultiFamily};
use crate::vbp::{ItemVector, Mode, VbpInstance};

/// Binary instance with each entry set independently with probability `density`.
pub fn random_binary_instance<R: Rng>(
    rng: &mut R,
    dimension: usize,
    items: usize,
    bin_size: i64,
    density: f64,
) -> Result<VbpInstance> {
    let rows: Vec<Vec<u8>> = (0..items)
        .map(|_| (0..dimension).map(|_| rng.gen_bool(density) as u8).collect())
        .collect();
    VbpInstance::binary(dimension, bin_size, &rows)
}

/// Unit instance whose entries are multiples of `1/denominator`.
pub fn random_unit_instance<R: Rng>(
    rng: &mut R,
    dimension: usize,
    items: usize,
    bin_size: Rational64,
    denominator: i64,
) -> Result<VbpInstance> {
    let items = (0..items)
        .map(|_| {
            ItemVector::new(
                (0..dimension)
                    .map(|_| Rational64::new(rng.gen_range(0..=denominator), denominator))
                    .collect(),
            )
        })
        .collect();
    VbpInstance::new(Mode::Unit, dimension, bin_size, items)
}

/// k-uniform hypergraph on `n` vertices keeping each k-subset with probability `density`.
pub fn random_hypergraph<R: Rng>(rng: &mut R, n: usize, k: usize, density: f64) -> Result<Hypergraph> {
    let mut edges = Vec::new();
    let pool: Vec<Vertex> = (1..=n).collect();
    crate::subsets::for_each_subset(&pool, k, |s| {
        if rng.gen_bool(density) {
            edges.push(s.to_vec());
        }
    });
    Hypergraph::new(n, k, edges)
}

/// Random k-uniform hypertree with `edges` hyperedges, labels shuffled so arrival order is random.
///
/// Each new edge shares exactly one vertex with the tree built so far.
pub fn random_hypertree<R: Rng>(rng: &mut R, k: usize, edges: usize) -> Result<Hypergraph> {
    let n = 1 + edges * (k - 1);
    let mut labels: Vec<Vertex> = (1..=n).collect();
    labels.shuffle(rng);
    let mut next = 1;
    let mut list = Vec::with_capacity(edges);
    for _ in 0..edges {
        let anchor = rng.gen_range(0..next);
        let mut e = vec![labels[anchor]];
        e.extend(labels[next..next + k - 1].iter().copied());
        next += k - 1;
        list.push(e);
    }
    Hypergraph::new(n, k, list)
}

/// A multi-family over colors `1..=q` with a diverse partition at parameter `p`.
///
/// Block `i` gets `p + extra` members, each of size at least `i`; `extra` is drawn from
/// `0..=max_extra`.
pub fn random_diverse_family<R: Rng>(
    rng: &mut R,
    p: usize,
    q: usize,
    max_extra: usize,
) -> Result<(MultiFamily, BlockPartition)> {
    let ground: Vec<ColorId> = (1..=q as ColorId).collect();
    let mut members: Vec<BTreeSet<ColorId>> = Vec::new();
    let mut blocks = Vec::with_capacity(q);
    for i in 1..=q {
        let count = p + rng.gen_range(0..=max_extra);
        let mut block = Vec::with_capacity(count);
        for _ in 0..count {
            let size = rng.gen_range(i..=q);
            let set = ground.choose_multiple(rng, size).copied().collect();
            block.push(members.len());
            members.push(set);
        }
        blocks.push(block);
    }
    // shuffle member order so blocks are not contiguous index ranges
    let mut order: Vec<usize> = (0..members.len()).collect();
    order.shuffle(rng);
    let mut position = vec![0; members.len()];
    for (new, &old) in order.iter().enumerate() {
        position[old] = new;
    }
    let shuffled = order.iter().map(|&old| members[old].clone()).collect();
    let blocks = blocks
        .into_iter()
        .map(|b| {
            let mut b: Vec<usize> = b.into_iter().map(|m| position[m]).collect();
            b.sort_unstable();
            b
        })
        .collect();
    Ok((MultiFamily::new(ground, shuffled)?, BlockPartition::new(blocks)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::is_hypertree;
    use crate::partition::verify_diverse;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_hypertrees_are_hypertrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for k in 2..=4 {
            for edges in 0..6 {
                let h = random_hypertree(&mut rng, k, edges).unwrap();
                assert_eq!(h.edge_count(), edges);
                assert!(is_hypertree(&h));
            }
        }
    }

    #[test]
    fn generated_families_are_diverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let (f, part) = random_diverse_family(&mut rng, 3, 4, 2).unwrap();
            assert!(verify_diverse(&f, &part, 3).unwrap());
        }
    }

    #[test]
    fn same_seed_same_output() {
        let a = random_binary_instance(&mut ChaCha8Rng::seed_from_u64(3), 5, 6, 2, 0.4).unwrap();
        let b = random_binary_instance(&mut ChaCha8Rng::seed_from_u64(3), 5, 6, 2, 0.4).unwrap();
        assert_eq!(a, b);
        let u = random_unit_instance(&mut ChaCha8Rng::seed_from_u64(3), 3, 4, Rational64::from_integer(2), 4).unwrap();
        assert_eq!(u.len(), 4);
        let h = random_hypergraph(&mut ChaCha8Rng::seed_from_u64(3), 5, 3, 0.5).unwrap();
        assert_eq!(h.n(), 5);
    }
}
