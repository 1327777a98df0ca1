//! Vector bin packing: instances, online packers, FirstFit, an exact optimum oracle and the
//! double-counting upper bound on FirstFit.
//!
//! All arithmetic is exact. Binary instances hold entries in `{0,1}` with an integer bin size;
//! unit instances hold rational entries in `[0,1]`.

use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_OPT_CAP: usize = 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Binary,
    Unit,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Binary => "binary",
            Mode::Unit => "unit",
        })
    }
}

/// One arriving item: a vector of `d` exact scalars.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ItemVector {
    entries: Vec<Rational64>,
}

impl ItemVector {
    pub fn new(entries: Vec<Rational64>) -> Self {
        ItemVector { entries }
    }

    pub fn binary(bits: &[u8]) -> Self {
        ItemVector {
            entries: bits.iter().map(|&b| Rational64::from_integer(b as i64)).collect(),
        }
    }

    pub fn zeros(dimension: usize) -> Self {
        ItemVector {
            entries: vec![Rational64::zero(); dimension],
        }
    }

    pub fn entries(&self) -> &[Rational64] {
        &self.entries
    }

    pub fn dimension(&self) -> usize {
        self.entries.len()
    }

    pub fn ones(&self) -> usize {
        self.entries.iter().filter(|e| e.is_one()).count()
    }

    fn check(&self, mode: Mode, dimension: usize) -> Result<()> {
        if self.entries.len() != dimension {
            return Err(Error::malformed(format!(
                "item has dimension {}, instance dimension is {}",
                self.entries.len(),
                dimension
            )));
        }
        for e in &self.entries {
            let ok = match mode {
                Mode::Binary => e.is_zero() || e.is_one(),
                Mode::Unit => !e.is_negative() && *e <= Rational64::one(),
            };
            if !ok {
                return Err(Error::malformed(format!("entry {} is not valid in {} mode", e, mode)));
            }
        }
        Ok(())
    }
}

/// An ordered arrival sequence of items together with the bin size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VbpInstance {
    mode: Mode,
    dimension: usize,
    bin_size: Rational64,
    items: Vec<ItemVector>,
}

impl VbpInstance {
    pub fn new(mode: Mode, dimension: usize, bin_size: Rational64, items: Vec<ItemVector>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::malformed("dimension must be at least 1"));
        }
        match mode {
            Mode::Binary if !bin_size.is_integer() || bin_size < Rational64::one() => {
                return Err(Error::malformed(format!(
                    "binary mode needs a positive integer bin size, got {}",
                    bin_size
                )))
            }
            Mode::Unit if bin_size < Rational64::one() => {
                return Err(Error::malformed(format!(
                    "unit mode needs a bin size of at least 1, got {}",
                    bin_size
                )))
            }
            _ => {}
        }
        for (i, item) in items.iter().enumerate() {
            item.check(mode, dimension)
                .map_err(|e| Error::malformed(format!("item {}: {}", i + 1, e)))?;
        }
        Ok(VbpInstance {
            mode,
            dimension,
            bin_size,
            items,
        })
    }

    /// Convenience constructor for `{0,1}` instances.
    pub fn binary(dimension: usize, bin_size: i64, items: &[Vec<u8>]) -> Result<Self> {
        let items = items.iter().map(|b| ItemVector::binary(b)).collect();
        VbpInstance::new(Mode::Binary, dimension, Rational64::from_integer(bin_size), items)
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn bin_size(&self) -> Rational64 {
        self.bin_size
    }

    pub fn items(&self) -> &[ItemVector] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Same items against a different bin size.
    pub fn with_bin_size(&self, bin_size: Rational64) -> Result<Self> {
        VbpInstance::new(self.mode, self.dimension, bin_size, self.items.clone())
    }

    /// Entries and bin size multiplied by the common denominator, so feasibility becomes
    /// integer comparison.
    fn scaled(&self) -> (Vec<Vec<i64>>, i64) {
        let mut lcm = *self.bin_size.denom();
        for item in &self.items {
            for e in item.entries() {
                lcm = lcm.lcm(e.denom());
            }
        }
        let scale = |r: &Rational64| r.numer() * (lcm / r.denom());
        let items = self
            .items
            .iter()
            .map(|it| it.entries().iter().map(scale).collect())
            .collect();
        (items, scale(&self.bin_size))
    }
}

/// Result of packing: bins are numbered from 1 in opening order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingAssignment {
    bin_of: Vec<usize>,
    loads: Vec<Vec<Rational64>>,
}

impl PackingAssignment {
    /// Builds an assignment from raw bin indices (1-based), computing the loads.
    pub fn from_bins(instance: &VbpInstance, bin_of: Vec<usize>) -> Result<Self> {
        if bin_of.len() != instance.len() {
            return Err(Error::malformed(format!(
                "assignment covers {} items, instance has {}",
                bin_of.len(),
                instance.len()
            )));
        }
        let bins = bin_of.iter().copied().max().unwrap_or(0);
        let mut loads = vec![vec![Rational64::zero(); instance.dimension()]; bins];
        for (item, &b) in instance.items().iter().zip(&bin_of) {
            if b == 0 {
                return Err(Error::malformed("bin indices start at 1"));
            }
            for (l, e) in loads[b - 1].iter_mut().zip(item.entries()) {
                *l += e;
            }
        }
        Ok(PackingAssignment { bin_of, loads })
    }

    pub fn bin_of(&self) -> &[usize] {
        &self.bin_of
    }

    pub fn loads(&self) -> &[Vec<Rational64>] {
        &self.loads
    }

    pub fn bin_count(&self) -> usize {
        self.loads.len()
    }
}

/// A deterministic online packing algorithm.
///
/// `place` sees one item at a time and answers with a 1-based bin index; an index one past the
/// currently open bins opens a new bin. The caller checks feasibility after every answer.
pub trait OnlinePacker {
    fn name(&self) -> &str;
    fn place(&mut self, item: &ItemVector) -> usize;
}

impl<P: OnlinePacker + ?Sized> OnlinePacker for Box<P> {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn place(&mut self, item: &ItemVector) -> usize {
        (**self).place(item)
    }
}

/// Lowest-index bin that still fits the item, otherwise a fresh bin.
#[derive(Debug, Clone)]
pub struct FirstFitPacker {
    bin_size: Rational64,
    loads: Vec<Vec<Rational64>>,
}

impl FirstFitPacker {
    pub fn new(bin_size: Rational64) -> Self {
        FirstFitPacker {
            bin_size,
            loads: Vec::new(),
        }
    }
}

impl OnlinePacker for FirstFitPacker {
    fn name(&self) -> &str {
        "firstfit"
    }

    fn place(&mut self, item: &ItemVector) -> usize {
        let b = self.bin_size;
        let fits = |load: &Vec<Rational64>| load.iter().zip(item.entries()).all(|(l, e)| *l + *e <= b);
        let idx = match self.loads.iter().position(fits) {
            Some(i) => i,
            None => {
                self.loads.push(vec![Rational64::zero(); item.dimension()]);
                self.loads.len() - 1
            }
        };
        for (l, e) in self.loads[idx].iter_mut().zip(item.entries()) {
            *l += e;
        }
        idx + 1
    }
}

/// Keeps a single open bin and opens a new one whenever the item does not fit.
#[derive(Debug, Clone)]
pub struct NextFitPacker {
    bin_size: Rational64,
    open: usize,
    load: Vec<Rational64>,
}

impl NextFitPacker {
    pub fn new(bin_size: Rational64) -> Self {
        NextFitPacker {
            bin_size,
            open: 0,
            load: Vec::new(),
        }
    }
}

impl OnlinePacker for NextFitPacker {
    fn name(&self) -> &str {
        "nextfit"
    }

    fn place(&mut self, item: &ItemVector) -> usize {
        let b = self.bin_size;
        let fits = self.open > 0 && self.load.iter().zip(item.entries()).all(|(l, e)| *l + *e <= b);
        if !fits {
            self.open += 1;
            self.load = vec![Rational64::zero(); item.dimension()];
        }
        for (l, e) in self.load.iter_mut().zip(item.entries()) {
            *l += e;
        }
        self.open
    }
}

pub const PACKER_NAMES: &[&str] = &["firstfit", "nextfit"];

pub fn packer_by_name(name: &str, bin_size: Rational64) -> Option<Box<dyn OnlinePacker>> {
    match name {
        "firstfit" => Some(Box::new(FirstFitPacker::new(bin_size))),
        "nextfit" => Some(Box::new(NextFitPacker::new(bin_size))),
        _ => None,
    }
}

/// Referee for an online packing run: owns the true loads and rejects illegal placements.
#[derive(Debug, Clone)]
pub struct PackingSession {
    dimension: usize,
    bin_size: Rational64,
    loads: Vec<Vec<Rational64>>,
    bin_of: Vec<usize>,
}

impl PackingSession {
    pub fn new(dimension: usize, bin_size: Rational64) -> Self {
        PackingSession {
            dimension,
            bin_size,
            loads: Vec::new(),
            bin_of: Vec::new(),
        }
    }

    /// Offers `item` to `packer` and records the answer, or fails if it is illegal.
    pub fn offer(&mut self, packer: &mut dyn OnlinePacker, item: &ItemVector) -> Result<usize> {
        if item.dimension() != self.dimension {
            return Err(Error::malformed(format!(
                "item has dimension {}, session dimension is {}",
                item.dimension(),
                self.dimension
            )));
        }
        let bin = packer.place(item);
        if bin == 0 || bin > self.loads.len() + 1 {
            return Err(Error::Validity(format!(
                "packer {} chose bin {} with {} bins open",
                packer.name(),
                bin,
                self.loads.len()
            )));
        }
        if bin == self.loads.len() + 1 {
            self.loads.push(vec![Rational64::zero(); self.dimension]);
        }
        let load = &mut self.loads[bin - 1];
        for (row, (l, e)) in load.iter_mut().zip(item.entries()).enumerate() {
            *l += e;
            if *l > self.bin_size {
                return Err(Error::Validity(format!(
                    "packer {} overfilled bin {} in coordinate {}: load {} > {}",
                    packer.name(),
                    bin,
                    row + 1,
                    l,
                    self.bin_size
                )));
            }
        }
        self.bin_of.push(bin);
        Ok(bin)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn bin_count(&self) -> usize {
        self.loads.len()
    }

    pub fn bin_of(&self) -> &[usize] {
        &self.bin_of
    }

    pub fn into_assignment(self) -> PackingAssignment {
        PackingAssignment {
            bin_of: self.bin_of,
            loads: self.loads,
        }
    }
}

/// Runs `packer` over the instance in arrival order.
pub fn pack_online(instance: &VbpInstance, packer: &mut dyn OnlinePacker) -> Result<PackingAssignment> {
    let mut session = PackingSession::new(instance.dimension(), instance.bin_size());
    for item in instance.items() {
        session.offer(packer, item)?;
    }
    Ok(session.into_assignment())
}

pub fn first_fit_pack(instance: &VbpInstance) -> PackingAssignment {
    let mut packer = FirstFitPacker::new(instance.bin_size());
    pack_online(instance, &mut packer).expect("FirstFit only opens feasible bins")
}

/// True iff every bin is within the bin size and bins are numbered 1..=count without gaps.
pub fn verify_packing(instance: &VbpInstance, assignment: &PackingAssignment) -> Result<bool> {
    if assignment.bin_of.len() != instance.len() {
        return Err(Error::malformed(format!(
            "assignment covers {} items, instance has {}",
            assignment.bin_of.len(),
            instance.len()
        )));
    }
    let count = assignment.loads.len();
    let mut seen = vec![false; count];
    for &b in &assignment.bin_of {
        if b == 0 || b > count {
            return Ok(false);
        }
        seen[b - 1] = true;
    }
    if seen.iter().any(|s| !s) {
        return Ok(false);
    }
    let mut loads = vec![vec![Rational64::zero(); instance.dimension()]; count];
    for (item, &b) in instance.items().iter().zip(&assignment.bin_of) {
        for (l, e) in loads[b - 1].iter_mut().zip(item.entries()) {
            *l += e;
        }
    }
    let b = instance.bin_size();
    Ok(loads.iter().flatten().all(|l| *l <= b))
}

pub fn exact_opt_bins(instance: &VbpInstance) -> Result<usize> {
    exact_opt_bins_with_cap(instance, DEFAULT_OPT_CAP)
}

/// Minimum number of feasible bins, by branch and bound over item-to-bin assignments.
///
/// Items are placed in arrival order and may only open bin `j+1` once bins `1..=j` are in use.
/// FirstFit seeds the incumbent; the per-coordinate volume bound stops the search early.
pub fn exact_opt_bins_with_cap(instance: &VbpInstance, cap: usize) -> Result<usize> {
    if instance.len() > cap {
        return Err(Error::Capacity {
            what: "item count",
            value: instance.len(),
            cap,
        });
    }
    if instance.is_empty() {
        return Ok(0);
    }
    let (items, bin) = instance.scaled();
    let d = instance.dimension();
    let mut volume = 1;
    for row in 0..d {
        let total: i64 = items.iter().map(|it| it[row]).sum();
        volume = volume.max(Integer::div_ceil(&total, &bin) as usize);
    }
    let upper = first_fit_pack(instance).bin_count();
    if upper == volume {
        return Ok(upper);
    }
    let mut search = OptSearch {
        items: &items,
        bin,
        lower: volume,
        best: upper,
        loads: Vec::with_capacity(upper),
    };
    search.descend(0);
    Ok(search.best)
}

struct OptSearch<'a> {
    items: &'a [Vec<i64>],
    bin: i64,
    lower: usize,
    best: usize,
    loads: Vec<Vec<i64>>,
}

impl OptSearch<'_> {
    /// Returns true once the lower bound is met, which ends the whole search.
    fn descend(&mut self, next: usize) -> bool {
        if next == self.items.len() {
            self.best = self.best.min(self.loads.len());
            return self.best == self.lower;
        }
        let item = &self.items[next];
        for b in 0..self.loads.len() {
            if self.loads[b].iter().zip(item).all(|(l, e)| l + e <= self.bin) {
                add(&mut self.loads[b], item, 1);
                let done = self.descend(next + 1);
                add(&mut self.loads[b], item, -1);
                if done {
                    return true;
                }
            }
        }
        if self.loads.len() + 1 < self.best {
            self.loads.push(item.clone());
            let done = self.descend(next + 1);
            self.loads.pop();
            if done {
                return true;
            }
        }
        false
    }
}

fn add(load: &mut [i64], item: &[i64], sign: i64) {
    for (l, e) in load.iter_mut().zip(item) {
        *l += sign * e;
    }
}

/// Largest number of 1-entries in a single coordinate across all items.
pub fn max_row_ones(instance: &VbpInstance) -> Result<usize> {
    if instance.mode() != Mode::Binary {
        return Err(Error::UnsupportedMode(
            "max_row_ones is defined for binary instances only".into(),
        ));
    }
    let mut counts = vec![0usize; instance.dimension()];
    for item in instance.items() {
        for (c, e) in counts.iter_mut().zip(item.entries()) {
            if e.is_one() {
                *c += 1;
            }
        }
    }
    Ok(counts.into_iter().max().unwrap_or(0))
}

/// The double-counting upper bound on FirstFit bins for binary instances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FfBound {
    /// `(sqrt(8dp^2 - 8dp + (B-2)^2) + 3B - 2) / 2B`
    pub value: f64,
    /// Exact floor of `value`; FirstFit never uses more bins than this.
    pub bins: u64,
}

pub fn ff_bin_bound(d: u64, p: u64, bin_size: u64) -> Result<FfBound> {
    if p < 2 {
        return Err(Error::domain(format!(
            "bound needs at least two ones in some row (p = {}); p <= 1 means FirstFit uses one bin",
            p
        )));
    }
    if d == 0 || bin_size == 0 {
        return Err(Error::domain("dimension and bin size must be positive"));
    }
    let (d, p, b) = (d as u128, p as u128, bin_size as u128);
    let b_minus_2 = b.abs_diff(2);
    let disc = 8 * d * p * p - 8 * d * p + b_minus_2 * b_minus_2;
    let root = disc.isqrt();
    // floor((x + a) / c) == floor((floor(x) + a) / c) for integer a and positive integer c
    let bins = (root + 3 * b - 2) / (2 * b);
    let value = ((disc as f64).sqrt() + (3 * b) as f64 - 2.0) / (2 * b) as f64;
    Ok(FfBound {
        value,
        bins: bins as u64,
    })
}

/// `alg / opt` as an exact rational.
pub fn competitive_ratio(alg_bins: usize, opt_bins: usize) -> Result<Rational64> {
    if opt_bins == 0 {
        return Err(Error::domain("optimum must be at least 1"));
    }
    Ok(Rational64::new(alg_bins as i64, opt_bins as i64))
}

pub(crate) fn ratio_to_f64(r: Rational64) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
