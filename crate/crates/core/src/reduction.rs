//! Online incidence matrices and the packer-to-colorer reduction.
//!
//! Each arriving vertex of a k-uniform hypergraph on at most `n` vertices is turned into one
//! column, computable from what has been revealed so far. Packing those columns into bins of
//! size `k - 1` is the same as properly coloring the hypergraph: a bin can never hold a whole
//! edge, and any edge-free vertex set fits in one bin.
//!
//! Two column flavours exist. The binary one has a row per k-subset of `1..=n`; the unit one has
//! a row per (k-1)-subset and marks completed edges with `1/n`.

use std::collections::BTreeSet;

use num_rational::Rational64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::adversary::{Adversary, HypertreeAdversary, KillerAdversary};
use crate::colorer::OnlineColorer;
use crate::error::{Error, Result};
use crate::hypergraph::{chromatic_number, Color, Edge, Hypergraph, Vertex};
use crate::subsets::{binomial, for_each_subset, rank_subset};
use crate::vbp::{
    competitive_ratio, exact_opt_bins, pack_online, ratio_to_f64, ItemVector, Mode, OnlinePacker, PackingSession,
    VbpInstance, DEFAULT_OPT_CAP,
};

/// Largest `n` for which the dense matrix helpers run.
pub const DEFAULT_MATRIX_CAP: usize = 12;

/// Largest item dimension the reduction will materialize.
pub const MAX_REDUCTION_DIMENSION: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Binary,
    Unit,
}

impl Variant {
    pub fn mode(self) -> Mode {
        match self {
            Variant::Binary => Mode::Binary,
            Variant::Unit => Mode::Unit,
        }
    }

    /// Size of the subsets labeling the rows.
    pub fn row_subset_size(self, k: usize) -> usize {
        match self {
            Variant::Binary => k,
            Variant::Unit => k - 1,
        }
    }
}

impl std::fmt::Display for Variant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.mode().fmt(f)
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binary" => Ok(Variant::Binary),
            "unit" => Ok(Variant::Unit),
            other => Err(Error::malformed(format!("unknown variant {:?}", other))),
        }
    }
}

pub fn column_dimension(n: usize, k: usize, variant: Variant) -> usize {
    binomial(n, variant.row_subset_size(k))
}

/// One column of an online incidence matrix; rows not listed are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseColumn {
    dimension: usize,
    entries: Vec<(usize, Rational64)>,
}

impl SparseColumn {
    pub fn new(dimension: usize, mut entries: Vec<(usize, Rational64)>) -> Result<Self> {
        entries.retain(|(_, v)| !v.is_zero());
        entries.sort_by_key(|&(r, _)| r);
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::malformed("column lists a row twice"));
        }
        if entries.last().is_some_and(|&(r, _)| r >= dimension) {
            return Err(Error::malformed(format!(
                "row index out of range for dimension {}",
                dimension
            )));
        }
        Ok(SparseColumn { dimension, entries })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn entries(&self) -> &[(usize, Rational64)] {
        &self.entries
    }

    pub fn get(&self, row: usize) -> Rational64 {
        match self.entries.binary_search_by_key(&row, |&(r, _)| r) {
            Ok(i) => self.entries[i].1,
            Err(_) => Rational64::zero(),
        }
    }

    pub fn to_dense(&self) -> Vec<Rational64> {
        let mut out = vec![Rational64::zero(); self.dimension];
        for &(r, v) in &self.entries {
            out[r] = v;
        }
        out
    }

    pub fn to_item(&self) -> ItemVector {
        ItemVector::new(self.to_dense())
    }
}

/// Appends zero rows up to `target` rows.
pub fn pad_column(c: &SparseColumn, target: usize) -> Result<SparseColumn> {
    if target < c.dimension {
        return Err(Error::domain(format!(
            "cannot pad a column of dimension {} down to {}",
            c.dimension, target
        )));
    }
    Ok(SparseColumn {
        dimension: target,
        entries: c.entries.clone(),
    })
}

/// Largest `n` with `C(n, size) <= d`.
pub fn choose_n(d: usize, size: usize) -> usize {
    assert!(size >= 1, "row subsets have at least one vertex");
    let mut n = size;
    if binomial(n, size) > d {
        return n - 1;
    }
    while binomial(n + 1, size) <= d {
        n += 1;
    }
    n
}

fn check_arrival(n: usize, k: usize, arrived: &BTreeSet<Vertex>, v: Vertex, revealed: &[Edge]) -> Result<()> {
    if k < 2 {
        return Err(Error::malformed("uniformity must be at least 2"));
    }
    if v == 0 || v > n {
        return Err(Error::malformed(format!("vertex {} outside 1..={}", v, n)));
    }
    if arrived.contains(&v) {
        return Err(Error::malformed(format!("vertex {} already arrived", v)));
    }
    if let Some(&bad) = arrived.iter().find(|&&u| u == 0 || u > n) {
        return Err(Error::malformed(format!("arrived vertex {} outside 1..={}", bad, n)));
    }
    for e in revealed {
        let completed = e.vertices().iter().all(|&u| u == v || arrived.contains(&u));
        if e.len() != k || !e.contains(v) || !completed {
            return Err(Error::malformed(format!(
                "edge {} is not completed by the arrival of vertex {}",
                e, v
            )));
        }
    }
    Ok(())
}

/// Binary column: a row per k-subset `e` of `1..=n`.
///
/// The entry is 1 when `v` is in `e` and `e` is either still incomplete or a revealed edge; it is
/// 0 otherwise (including complete non-edges).
pub fn online_column_binary(
    n: usize,
    k: usize,
    arrived: &BTreeSet<Vertex>,
    v: Vertex,
    revealed: &[Edge],
) -> Result<SparseColumn> {
    check_arrival(n, k, arrived, v, revealed)?;
    let revealed: BTreeSet<&[Vertex]> = revealed.iter().map(Edge::vertices).collect();
    let others: Vec<Vertex> = (1..=n).filter(|&u| u != v).collect();
    let mut entries = Vec::with_capacity(binomial(n - 1, k - 1));
    let mut row = Vec::with_capacity(k);
    for_each_subset(&others, k - 1, |rest| {
        row.clear();
        row.extend_from_slice(rest);
        let at = row.partition_point(|&u| u < v);
        row.insert(at, v);
        let complete = rest.iter().all(|u| arrived.contains(u));
        if !complete || revealed.contains(row.as_slice()) {
            let rank = rank_subset(&row, n, k).expect("row is a valid k-subset");
            entries.push((rank, Rational64::one()));
        }
    });
    SparseColumn::new(binomial(n, k), entries)
}

/// Unit column: a row per (k-1)-subset `eps` of `1..=n`.
///
/// The entry is 1 when `v` is in `eps`, `1/n` when `eps` has fully arrived and `eps + v` is a
/// revealed edge, and 0 otherwise.
pub fn online_column_unit(
    n: usize,
    k: usize,
    arrived: &BTreeSet<Vertex>,
    v: Vertex,
    revealed: &[Edge],
) -> Result<SparseColumn> {
    check_arrival(n, k, arrived, v, revealed)?;
    let others: Vec<Vertex> = (1..=n).filter(|&u| u != v).collect();
    let mut entries = Vec::new();
    let mut row = Vec::with_capacity(k - 1);
    for_each_subset(&others, k - 2, |rest| {
        row.clear();
        row.extend_from_slice(rest);
        let at = row.partition_point(|&u| u < v);
        row.insert(at, v);
        let rank = rank_subset(&row, n, k - 1).expect("row is a valid (k-1)-subset");
        entries.push((rank, Rational64::one()));
    });
    let tiny = Rational64::new(1, n as i64);
    for e in revealed {
        let eps: Vec<Vertex> = e.vertices().iter().copied().filter(|&u| u != v).collect();
        entries.push((rank_subset(&eps, n, k - 1)?, tiny));
    }
    SparseColumn::new(binomial(n, k - 1), entries)
}

pub fn online_column(
    variant: Variant,
    n: usize,
    k: usize,
    arrived: &BTreeSet<Vertex>,
    v: Vertex,
    revealed: &[Edge],
) -> Result<SparseColumn> {
    match variant {
        Variant::Binary => online_column_binary(n, k, arrived, v, revealed),
        Variant::Unit => online_column_unit(n, k, arrived, v, revealed),
    }
}

/// Dense rows-by-vertices matrix, used for inspection and tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    pub rows: Vec<Vec<Rational64>>,
}

impl IncidenceMatrix {
    pub fn row_sums(&self) -> Vec<Rational64> {
        self.rows.iter().map(|r| r.iter().sum()).collect()
    }
}

/// The online columns of `h`, one per vertex in arrival order.
pub fn incidence_columns(h: &Hypergraph, variant: Variant) -> Result<Vec<SparseColumn>> {
    let mut arrived = BTreeSet::new();
    let mut cols = Vec::with_capacity(h.n());
    for v in 1..=h.n() {
        cols.push(online_column(
            variant,
            h.n(),
            h.k(),
            &arrived,
            v,
            h.reveal_at_arrival(v),
        )?);
        arrived.insert(v);
    }
    Ok(cols)
}

pub fn build_incidence_matrix(h: &Hypergraph, variant: Variant) -> Result<IncidenceMatrix> {
    if h.n() > DEFAULT_MATRIX_CAP {
        return Err(Error::Capacity {
            what: "vertex count",
            value: h.n(),
            cap: DEFAULT_MATRIX_CAP,
        });
    }
    let cols = incidence_columns(h, variant)?;
    let dim = column_dimension(h.n(), h.k(), variant);
    let mut rows = vec![vec![Rational64::zero(); h.n()]; dim];
    for (j, c) in cols.iter().enumerate() {
        for &(r, val) in c.entries() {
            rows[r][j] = val;
        }
    }
    Ok(IncidenceMatrix { rows })
}

/// The packing instance whose items are the online columns of `h`, with bin size `k - 1`.
pub fn incidence_instance(h: &Hypergraph, variant: Variant) -> Result<VbpInstance> {
    let dim = column_dimension(h.n(), h.k(), variant);
    if dim == 0 || dim > MAX_REDUCTION_DIMENSION {
        return Err(Error::domain(format!("incidence dimension {} is not supported", dim)));
    }
    let items = incidence_columns(h, variant)?
        .iter()
        .map(SparseColumn::to_item)
        .collect();
    VbpInstance::new(variant.mode(), dim, Rational64::from_integer(h.k() as i64 - 1), items)
}

/// An online packer driven as an online colorer: each arriving vertex becomes its incidence
/// column, and the bin the packer picks is the vertex's color.
pub struct PackerColorer<P> {
    packer: P,
    n: usize,
    k: usize,
    variant: Variant,
    arrived: BTreeSet<Vertex>,
    session: PackingSession,
    emitted: Vec<SparseColumn>,
}

pub fn packer_to_colorer<P: OnlinePacker>(packer: P, n: usize, k: usize, variant: Variant) -> Result<PackerColorer<P>> {
    let dim = column_dimension(n, k, variant);
    PackerColorer::with_dimension(packer, n, k, variant, dim)
}

impl<P: OnlinePacker> PackerColorer<P> {
    /// Columns are zero-padded to `dimension` rows before the packer sees them.
    pub fn with_dimension(packer: P, n: usize, k: usize, variant: Variant, dimension: usize) -> Result<Self> {
        if k < 2 || n == 0 {
            return Err(Error::domain(format!(
                "need k >= 2 and n >= 1, got k = {}, n = {}",
                k, n
            )));
        }
        let natural = column_dimension(n, k, variant);
        if dimension < natural {
            return Err(Error::domain(format!(
                "dimension {} is below the {} incidence rows for n = {}, k = {}",
                dimension, natural, n, k
            )));
        }
        if dimension > MAX_REDUCTION_DIMENSION {
            return Err(Error::Capacity {
                what: "item dimension",
                value: dimension,
                cap: MAX_REDUCTION_DIMENSION,
            });
        }
        let bin = Rational64::from_integer(k as i64 - 1);
        Ok(PackerColorer {
            packer,
            n,
            k,
            variant,
            arrived: BTreeSet::new(),
            session: PackingSession::new(dimension, bin),
            emitted: Vec::new(),
        })
    }

    pub fn bins_used(&self) -> usize {
        self.session.bin_count()
    }

    pub fn emitted(&self) -> &[SparseColumn] {
        &self.emitted
    }

    /// The padded columns seen so far as a packing instance.
    pub fn emitted_instance(&self) -> Result<VbpInstance> {
        VbpInstance::new(
            self.variant.mode(),
            self.session.dimension(),
            Rational64::from_integer(self.k as i64 - 1),
            self.emitted.iter().map(SparseColumn::to_item).collect(),
        )
    }
}

impl<P: OnlinePacker> OnlineColorer for PackerColorer<P> {
    fn name(&self) -> &str {
        self.packer.name()
    }

    fn color(&mut self, v: Vertex, revealed: &[Edge]) -> Result<Color> {
        let column = online_column(self.variant, self.n, self.k, &self.arrived, v, revealed)?;
        let column = pad_column(&column, self.session.dimension())?;
        let bin = self.session.offer(&mut self.packer, &column.to_item())?;
        self.arrived.insert(v);
        self.emitted.push(column);
        Ok(bin as Color)
    }

    fn vertex_hint(&self) -> Option<usize> {
        Some(self.n)
    }
}

/// Which lower-bound construction a reduction experiment drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdversaryKind {
    Killer,
    Hypertree,
}

impl std::str::FromStr for AdversaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "killer" => Ok(AdversaryKind::Killer),
            "hypertree" => Ok(AdversaryKind::Hypertree),
            other => Err(Error::malformed(format!("unknown adversary {:?}", other))),
        }
    }
}

impl std::fmt::Display for AdversaryKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AdversaryKind::Killer => "killer",
            AdversaryKind::Hypertree => "hypertree",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub adversary: String,
    pub packer: String,
    pub d: usize,
    #[serde(rename = "B")]
    pub bin_size: usize,
    pub variant: Variant,
    pub k: usize,
    /// Vertex count announced to the wrapped packer.
    pub n: usize,
    /// Vertices the adversary actually produced.
    pub vertices: usize,
    /// Rows of the unpadded incidence columns.
    pub natural_dimension: usize,
    pub bins: usize,
    /// Bins used by a fresh packer replaying the emitted instance.
    pub replay_bins: usize,
    pub chi: usize,
    pub opt: Option<usize>,
    #[serde(with = "crate::format::rational_string")]
    pub ratio: Rational64,
    pub bound: f64,
    /// Whether the ratio must exceed the bound strictly.
    pub strict: bool,
    pub pass: bool,
}

/// Runs an adversary against a packer through the incidence reduction.
///
/// `k = B + 1` for both variants. The vertex budget `n` is the largest value whose incidence
/// rows fit in `d`; the columns are padded to `d` rows. The reported ratio is bins over the
/// chromatic number of the produced hypergraph, compared with the lower bound the construction
/// certifies.
pub fn reduction_experiment(
    adversary: AdversaryKind,
    make_packer: &dyn Fn(Rational64) -> Box<dyn OnlinePacker>,
    d: usize,
    bin_size: usize,
    variant: Variant,
) -> Result<ReductionReport> {
    if bin_size == 0 {
        return Err(Error::domain("bin size must be positive"));
    }
    let k = bin_size + 1;
    let size = variant.row_subset_size(k);
    if d < 1 {
        return Err(Error::domain(format!("dimension {} admits no incidence row", d)));
    }
    let n = choose_n(d, size);
    if n < k {
        return Err(Error::domain(format!(
            "dimension {} only fits {} vertices, fewer than one {}-edge",
            d, n, k
        )));
    }
    let bin = Rational64::from_integer(bin_size as i64);
    let (adv, bound, strict): (Box<dyn Adversary>, f64, bool) = match adversary {
        AdversaryKind::Killer => {
            if k != 2 {
                return Err(Error::domain("the killer graph needs k = 2, i.e. B = 1"));
            }
            let even = n - n % 2;
            let (bound, strict) = match variant {
                Variant::Binary => (((2.0 * d as f64).sqrt() - 1.0) / 4.0, true),
                Variant::Unit => (d as f64 / 4.0, false),
            };
            (Box::new(KillerAdversary::new(even)?), bound, strict)
        }
        AdversaryKind::Hypertree => {
            let m = crate::hypergraph::ff_hypertree_upper_floor(n, k);
            (Box::new(HypertreeAdversary::new(k, m)?), m as f64 / 2.0, false)
        }
    };

    let packer = make_packer(bin);
    let packer_name = packer.name().to_string();
    let mut colorer = PackerColorer::with_dimension(packer, n, k, variant, d)?;
    let transcript = adv.run(&mut colorer)?;
    let hypergraph = transcript.final_hypergraph();
    let bins = colorer.bins_used();
    let instance = colorer.emitted_instance()?;
    let replay_bins = pack_online(&instance, make_packer(bin).as_mut())?.bin_count();
    let chi = chromatic_number(hypergraph)?;
    let opt = if instance.len() <= DEFAULT_OPT_CAP {
        Some(exact_opt_bins(&instance)?)
    } else {
        None
    };
    let ratio = competitive_ratio(bins, chi)?;
    let r = ratio_to_f64(ratio);
    let pass = if strict { r > bound } else { r >= bound };
    Ok(ReductionReport {
        adversary: adv.name().to_string(),
        packer: packer_name,
        d,
        bin_size,
        variant,
        k,
        n,
        vertices: hypergraph.n(),
        natural_dimension: column_dimension(n, k, variant),
        bins,
        replay_bins,
        chi,
        opt,
        ratio,
        bound,
        strict,
        pass,
    })
}
