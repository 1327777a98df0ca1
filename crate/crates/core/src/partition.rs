//! Multi-families of color subsets and their diverse and starry block partitions.
//!
//! For a ground list `c_1, ..., c_q` and a quota `p`, a q-block partition of the members is
//! *diverse* when block `i` has at least `p` members, each of size at least `i`, and *starry*
//! when block `i` has at least `p` members, each containing `c_i`. [`diverse_to_starry`] turns
//! any diverse partition into a starry one.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

pub type ColorId = u32;

pub const DEFAULT_MEMBER_CAP: usize = 12;
pub const DEFAULT_GROUND_CAP: usize = 4;

/// An ordered multiset of subsets of an ordered ground list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiFamily {
    ground: Vec<ColorId>,
    members: Vec<BTreeSet<ColorId>>,
}

impl MultiFamily {
    pub fn new(ground: Vec<ColorId>, members: Vec<BTreeSet<ColorId>>) -> Result<Self> {
        let distinct: BTreeSet<_> = ground.iter().collect();
        if distinct.len() != ground.len() {
            return Err(Error::malformed(format!("ground list {:?} repeats a color", ground)));
        }
        for (i, m) in members.iter().enumerate() {
            if let Some(c) = m.iter().find(|c| !distinct.contains(c)) {
                return Err(Error::malformed(format!(
                    "member {} uses color {} outside the ground list",
                    i, c
                )));
            }
        }
        Ok(MultiFamily { ground, members })
    }

    /// Shorthand for tests and examples: members given as color slices.
    pub fn from_slices(ground: &[ColorId], members: &[&[ColorId]]) -> Result<Self> {
        MultiFamily::new(
            ground.to_vec(),
            members.iter().map(|m| m.iter().copied().collect()).collect(),
        )
    }

    pub fn ground(&self) -> &[ColorId] {
        &self.ground
    }

    pub fn members(&self) -> &[BTreeSet<ColorId>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Blocks of member indices; block `i` (0-based) pairs with ground color `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    blocks: Vec<Vec<usize>>,
}

impl BlockPartition {
    pub fn new(blocks: Vec<Vec<usize>>) -> Self {
        BlockPartition { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn into_blocks(self) -> Vec<Vec<usize>> {
        self.blocks
    }

    fn check_against(&self, family: &MultiFamily) -> Result<()> {
        if self.blocks.len() != family.ground.len() {
            return Err(Error::malformed(format!(
                "partition has {} blocks, ground list has {} colors",
                self.blocks.len(),
                family.ground.len()
            )));
        }
        let mut seen = vec![false; family.len()];
        for &idx in self.blocks.iter().flatten() {
            if idx >= family.len() || std::mem::replace(&mut seen[idx], true) {
                return Err(Error::malformed(format!(
                    "member index {} is out of range or repeated",
                    idx
                )));
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::malformed(format!("member {} is in no block", missing)));
        }
        Ok(())
    }
}

pub fn verify_diverse(family: &MultiFamily, partition: &BlockPartition, p: usize) -> Result<bool> {
    partition.check_against(family)?;
    Ok(partition
        .blocks
        .iter()
        .enumerate()
        .all(|(i, block)| block.len() >= p && block.iter().all(|&m| family.members[m].len() > i)))
}

pub fn verify_starry(family: &MultiFamily, partition: &BlockPartition, p: usize) -> Result<bool> {
    partition.check_against(family)?;
    Ok(partition.blocks.iter().enumerate().all(|(i, block)| {
        let c = family.ground[i];
        block.len() >= p && block.iter().all(|&m| family.members[m].contains(&c))
    }))
}

/// Removes `color` from the ground list and from every member, keeping member order.
pub fn project_away(family: &MultiFamily, color: ColorId) -> Result<MultiFamily> {
    if !family.ground.contains(&color) {
        return Err(Error::domain(format!("color {} is not in the ground list", color)));
    }
    Ok(MultiFamily {
        ground: family.ground.iter().copied().filter(|&c| c != color).collect(),
        members: family
            .members
            .iter()
            .map(|m| {
                let mut m = m.clone();
                m.remove(&color);
                m
            })
            .collect(),
    })
}

/// Counters collected while [`diverse_to_starry`] runs.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StarryTrace {
    /// Smallest pool size seen at a backward reallocation step (`None` if none happened).
    pub min_backward_pool: Option<usize>,
    /// Levels whose forward greedy stopped in the first block.
    pub first_block_stops: usize,
}

pub fn diverse_to_starry(family: &MultiFamily, diverse: &BlockPartition, p: usize) -> Result<BlockPartition> {
    diverse_to_starry_traced(family, diverse, p).map(|(partition, _)| partition)
}

/// Builds a starry partition from a diverse one, one ground color per level.
///
/// At each level the first remaining color `c` gets a star: members containing `c` are taken
/// greedily, block by block, until `p` are chosen. The chosen members leave, `c` is projected
/// out of everything else, and the leftovers are rearranged into a diverse partition over the
/// shorter ground list: blocks after the stopping block shift down by one, blocks up to it are
/// refilled from the back, each keeping its first `p` members and passing the rest down.
pub fn diverse_to_starry_traced(
    family: &MultiFamily,
    diverse: &BlockPartition,
    p: usize,
) -> Result<(BlockPartition, StarryTrace)> {
    if p == 0 {
        return Err(Error::domain("the block quota p must be at least 1"));
    }
    if !verify_diverse(family, diverse, p)? {
        return Err(Error::domain(format!("the given partition is not ({}, C)-diverse", p)));
    }
    let mut sets = family.members.clone();
    let mut blocks: Vec<Vec<usize>> = diverse
        .blocks
        .iter()
        .map(|b| {
            let mut b = b.clone();
            b.sort_unstable();
            b
        })
        .collect();
    let mut stars = Vec::with_capacity(family.ground.len());
    let mut trace = StarryTrace::default();

    for (level, &color) in family.ground.iter().enumerate() {
        let q = blocks.len();
        if q == 1 {
            let mut last = blocks.pop().expect("one block left");
            last.sort_unstable();
            stars.push(last);
            break;
        }

        let mut star = Vec::with_capacity(p);
        let mut stop = 0;
        'forward: for (i, block) in blocks.iter().enumerate() {
            for &m in block {
                if star.len() == p {
                    break 'forward;
                }
                if sets[m].contains(&color) {
                    star.push(m);
                    stop = i;
                }
            }
        }
        if star.len() < p {
            return Err(Error::Invariant(format!(
                "only {} members contain color {} at level {}",
                star.len(),
                color,
                level
            )));
        }

        let chosen: BTreeSet<usize> = star.iter().copied().collect();
        let mut rest: Vec<Vec<usize>> = blocks
            .iter()
            .map(|b| b.iter().copied().filter(|m| !chosen.contains(m)).collect())
            .collect();

        let next_blocks = if stop == 0 {
            // Nothing shifts into a block below the first, so its leftovers either join the
            // star (they contain the color) or the new first block (they are nonempty without it).
            trace.first_block_stops += 1;
            let (with, without): (Vec<usize>, Vec<usize>) = rest[0].iter().partition(|&&m| sets[m].contains(&color));
            star.extend(with);
            let mut next: Vec<Vec<usize>> = rest.drain(1..).collect();
            next[0].extend(without);
            next
        } else {
            let tail: Vec<Vec<usize>> = rest.drain(stop + 1..).collect();
            let merged = rest.pop().expect("stop block present");
            let mut objects = rest;
            objects.last_mut().expect("stop >= 1").extend(merged);
            for t in (0..objects.len()).rev() {
                objects[t].sort_unstable();
                let pool = objects[t].len();
                trace.min_backward_pool = Some(trace.min_backward_pool.map_or(pool, |m| m.min(pool)));
                if pool < p {
                    return Err(Error::Invariant(format!(
                        "backward reallocation found {} < {} members at block {}",
                        pool,
                        p,
                        t + 1
                    )));
                }
                if t > 0 {
                    let surplus = objects[t].split_off(p);
                    objects[t - 1].extend(surplus);
                }
            }
            objects.extend(tail);
            objects
        };

        for &m in next_blocks.iter().flatten() {
            sets[m].remove(&color);
        }
        star.sort_unstable();
        stars.push(star);
        blocks = next_blocks;
    }

    let starry = BlockPartition::new(stars);
    if !verify_starry(family, &starry, p)? {
        return Err(Error::Invariant("constructed partition is not starry".into()));
    }
    Ok((starry, trace))
}

fn check_caps(family: &MultiFamily) -> Result<()> {
    if family.len() > DEFAULT_MEMBER_CAP {
        return Err(Error::Capacity {
            what: "member count",
            value: family.len(),
            cap: DEFAULT_MEMBER_CAP,
        });
    }
    if family.ground.len() > DEFAULT_GROUND_CAP {
        return Err(Error::Capacity {
            what: "ground size",
            value: family.ground.len(),
            cap: DEFAULT_GROUND_CAP,
        });
    }
    Ok(())
}

/// Exhaustive search for a starry partition.
pub fn brute_force_starry(family: &MultiFamily, p: usize) -> Result<Option<BlockPartition>> {
    check_caps(family)?;
    let ground = family.ground.clone();
    Ok(brute_force(family, p, |m, i| family.members[m].contains(&ground[i])))
}

/// Exhaustive search for a diverse partition.
pub fn brute_force_diverse(family: &MultiFamily, p: usize) -> Result<Option<BlockPartition>> {
    check_caps(family)?;
    Ok(brute_force(family, p, |m, i| family.members[m].len() > i))
}

fn brute_force<F: Fn(usize, usize) -> bool>(family: &MultiFamily, p: usize, fits: F) -> Option<BlockPartition> {
    let q = family.ground.len();
    if q == 0 {
        return family.is_empty().then(|| BlockPartition::new(Vec::new()));
    }
    let mut blocks = vec![Vec::new(); q];
    assign(family.len(), 0, p, &fits, &mut blocks).then(|| BlockPartition::new(blocks))
}

fn assign<F: Fn(usize, usize) -> bool>(
    total: usize,
    next: usize,
    p: usize,
    fits: &F,
    blocks: &mut [Vec<usize>],
) -> bool {
    let shortfall: usize = blocks.iter().map(|b| p.saturating_sub(b.len())).sum();
    if shortfall > total - next {
        return false;
    }
    if next == total {
        return true;
    }
    for i in 0..blocks.len() {
        if fits(next, i) {
            blocks[i].push(next);
            if assign(total, next + 1, p, fits, blocks) {
                return true;
            }
            blocks[i].pop();
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The 12-member family over {1,2,3} and its natural diverse blocks.
    fn twelve() -> (MultiFamily, BlockPartition) {
        let f = MultiFamily::from_slices(
            &[1, 2, 3],
            &[
                &[1],
                &[2],
                &[3],
                &[1],
                &[1, 3],
                &[1, 3],
                &[2, 3],
                &[1, 3],
                &[1, 2, 3],
                &[1, 2, 3],
                &[1, 2, 3],
                &[1, 2, 3],
            ],
        )
        .unwrap();
        let p = BlockPartition::new(vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7], vec![8, 9, 10, 11]]);
        (f, p)
    }

    #[test]
    fn twelve_member_family_is_diverse_and_starry() {
        let (f, p) = twelve();
        assert!(verify_diverse(&f, &p, 4).unwrap());
        let shown = BlockPartition::new(vec![vec![0, 3, 4, 5], vec![1, 6, 8, 9], vec![2, 7, 10, 11]]);
        assert!(verify_starry(&f, &shown, 4).unwrap());
        let (out, trace) = diverse_to_starry_traced(&f, &p, 4).unwrap();
        assert!(verify_starry(&f, &out, 4).unwrap());
        // the greedy reproduces the expected star partition member for member
        assert_eq!(out, shown);
        assert_eq!(trace.first_block_stops, 0);
    }

    #[test]
    fn pairs_are_starry_but_never_diverse() {
        let f = MultiFamily::from_slices(&[1, 2], &[&[1], &[1], &[2], &[2]]).unwrap();
        let stars = BlockPartition::new(vec![vec![0, 1], vec![2, 3]]);
        assert!(verify_starry(&f, &stars, 2).unwrap());
        assert!(!verify_diverse(&f, &stars, 2).unwrap());
        assert!(brute_force_starry(&f, 2).unwrap().is_some());
        assert!(brute_force_diverse(&f, 2).unwrap().is_none());
    }

    #[test]
    fn single_color_is_returned_unchanged() {
        let f = MultiFamily::from_slices(&[7], &[&[7], &[7], &[7]]).unwrap();
        let p = BlockPartition::new(vec![vec![2, 0, 1]]);
        assert!(verify_diverse(&f, &p, 2).unwrap());
        let out = diverse_to_starry(&f, &p, 2).unwrap();
        assert_eq!(out.blocks(), &[vec![0, 1, 2]]);
    }

    #[test]
    fn empty_member_breaks_starry() {
        let f = MultiFamily::from_slices(&[1], &[&[1], &[]]).unwrap();
        let p = BlockPartition::new(vec![vec![0, 1]]);
        assert!(!verify_starry(&f, &p, 1).unwrap());
    }

    #[test]
    fn wrong_block_count_is_malformed() {
        let (f, _) = twelve();
        let two = BlockPartition::new(vec![(0..6).collect(), (6..12).collect()]);
        assert!(matches!(verify_diverse(&f, &two, 1), Err(Error::Malformed(_))));
        assert!(matches!(verify_starry(&f, &two, 1), Err(Error::Malformed(_))));
        let dup = BlockPartition::new(vec![vec![0, 0], (1..6).collect(), (6..12).collect()]);
        assert!(matches!(verify_diverse(&f, &dup, 1), Err(Error::Malformed(_))));
    }

    #[test]
    fn non_diverse_input_is_rejected() {
        let f = MultiFamily::from_slices(&[1, 2], &[&[1], &[1], &[2], &[2]]).unwrap();
        let p = BlockPartition::new(vec![vec![0, 1], vec![2, 3]]);
        assert!(matches!(diverse_to_starry(&f, &p, 2), Err(Error::Domain(_))));
    }

    #[test]
    fn greedy_stopping_in_first_block() {
        // The star for color 1 fills inside block 1; its leftover {1} must join the star.
        let f = MultiFamily::from_slices(&[1, 2], &[&[1], &[1], &[2], &[1, 2]]).unwrap();
        let p = BlockPartition::new(vec![vec![0, 1, 2], vec![3]]);
        assert!(verify_diverse(&f, &p, 1).unwrap());
        let (out, trace) = diverse_to_starry_traced(&f, &p, 1).unwrap();
        assert!(verify_starry(&f, &out, 1).unwrap());
        assert_eq!(trace.first_block_stops, 1);
        assert_eq!(out.blocks(), &[vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn brute_force_cases() {
        let f = MultiFamily::from_slices(&[1, 2], &[&[1], &[1]]).unwrap();
        assert!(brute_force_starry(&f, 1).unwrap().is_none());
        let (big, _) = twelve();
        let found = brute_force_starry(&big, 4).unwrap().unwrap();
        assert!(verify_starry(&big, &found, 4).unwrap());
        let members: Vec<&[u32]> = vec![&[1]; 13];
        let too_many = MultiFamily::from_slices(&[1], &members).unwrap();
        assert!(matches!(brute_force_starry(&too_many, 1), Err(Error::Capacity { .. })));
    }

    #[test]
    fn project_away_cases() {
        let f = MultiFamily::from_slices(&[1, 2], &[&[1, 2], &[2]]).unwrap();
        let g = project_away(&f, 1).unwrap();
        assert_eq!(g, MultiFamily::from_slices(&[2], &[&[2], &[2]]).unwrap());
        assert_eq!(g.members()[1], f.members()[1]);
        assert_eq!(g.ground().len(), f.ground().len() - 1);
        assert!(matches!(project_away(&f, 5), Err(Error::Domain(_))));
        assert!(MultiFamily::from_slices(&[1], &[&[2]]).is_err());
    }
}
