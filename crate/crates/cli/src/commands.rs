//! The `pack`, `adversary` and `reduce` experiments.

use std::path::Path;

use anyhow::{Context, Result};
use hyperpack::adversary::{vertex_count_bound, Adversary, AdversaryTranscript, HypertreeAdversary};
use hyperpack::colorer::colorer_by_name;
use hyperpack::format::{parse_instances, rational_to_string};
use hyperpack::hypergraph::{chromatic_number, is_hypertree, is_proper};
use hyperpack::reduction::{reduction_experiment, AdversaryKind, Variant};
use hyperpack::vbp::{
    competitive_ratio, exact_opt_bins_with_cap, ff_bin_bound, first_fit_pack, max_row_ones, packer_by_name,
    verify_packing, Mode, VbpInstance,
};
use num_rational::Rational64;

use crate::report::{Report, ReportRow};

/// One row for a single instance packed by FirstFit.
pub fn pack_row(id: String, inst: &VbpInstance, cap_n: usize) -> Result<ReportRow> {
    let assignment = first_fit_pack(inst);
    let bins = assignment.bin_count();
    let mut pass = verify_packing(inst, &assignment)?;
    let opt = if inst.len() <= cap_n {
        Some(exact_opt_bins_with_cap(inst, cap_n)?)
    } else {
        None
    };
    let ratio = match opt {
        Some(o) if o > 0 => Some(competitive_ratio(bins, o)?),
        _ => None,
    };
    let d = inst.dimension();
    let mut bound = None;
    if inst.mode() == Mode::Binary {
        let b = inst.bin_size().to_integer() as u64;
        let p = max_row_ones(inst)? as u64;
        let cap = if p >= 2 { ff_bin_bound(d as u64, p, b)?.bins } else { 1 };
        pass &= bins as u64 <= cap;
        let limit = (2.0 * d as f64).sqrt() + 2.0;
        if let Some(r) = ratio {
            pass &= (*r.numer() as f64) / (*r.denom() as f64) < limit;
        }
        bound = Some(format!("bins<={} ratio<{:.4}", cap, limit));
    }
    Ok(ReportRow {
        id,
        experiment: "pack".into(),
        parameters: format!(
            "mode={} d={} B={} items={}",
            inst.mode(),
            d,
            rational_to_string(&inst.bin_size()),
            inst.len()
        ),
        bins: Some(bins),
        opt,
        ratio: ratio.map(|r| rational_to_string(&r)),
        bound,
        pass,
        ..Default::default()
    })
}

/// Packs every instance in `path` with FirstFit; `bin_size` overrides the file's bin size.
pub fn cmd_pack(path: &Path, bin_size: Option<i64>, cap_n: usize) -> Result<Report> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let instances = parse_instances(&text).with_context(|| format!("parsing {}", path.display()))?;
    let mut report = Report::new();
    for (i, inst) in instances.iter().enumerate() {
        let inst = match bin_size {
            Some(b) => inst.with_bin_size(Rational64::from_integer(b))?,
            None => inst.clone(),
        };
        report.push(pack_row(format!("pack-{:04}", i + 1), &inst, cap_n)?);
    }
    Ok(report)
}

/// Row describing one hypertree adversary run; `cap_n` limits the chromatic number oracle.
pub fn adversary_row(id: String, t: &AdversaryTranscript, k: usize, m: usize, cap_n: usize) -> Result<ReportRow> {
    let h = t.final_hypergraph();
    let cap = vertex_count_bound(k, m);
    let chi = if h.n() <= cap_n {
        Some(chromatic_number(h)?)
    } else {
        None
    };
    let pass = t.color_count() >= m && h.n() <= cap && is_hypertree(h) && is_proper(h, &t.coloring)?;
    Ok(ReportRow {
        id,
        experiment: "adversary".into(),
        parameters: format!("colorer={} k={} m={}", t.colorer, k, m),
        vertices: Some(h.n()),
        colors: Some(t.color_count()),
        chi,
        bound: Some(format!("colors>={} vertices<={}", m, cap)),
        pass,
        ..Default::default()
    })
}

pub fn cmd_adversary(colorer: &str, k: usize, m: usize, cap_n: usize) -> Result<(Report, AdversaryTranscript)> {
    let mut c = colorer_by_name(colorer).with_context(|| format!("unknown colorer {:?}", colorer))?;
    let t = HypertreeAdversary::new(k, m)?.run(&mut *c)?;
    let mut report = Report::new();
    report.push(adversary_row("adversary-0001".into(), &t, k, m, cap_n)?);
    Ok((report, t))
}

pub fn reduce_row(
    id: String,
    adversary: AdversaryKind,
    packer: &str,
    d: usize,
    bin_size: usize,
    variant: Variant,
) -> Result<ReportRow> {
    if packer_by_name(packer, Rational64::from_integer(1)).is_none() {
        anyhow::bail!("unknown packer {:?}", packer);
    }
    let make = |b: Rational64| packer_by_name(packer, b).expect("checked above");
    let r = reduction_experiment(adversary, &make, d, bin_size, variant)?;
    Ok(ReportRow {
        id,
        experiment: "reduce".into(),
        parameters: format!(
            "adversary={} packer={} d={} B={} variant={} k={} n={}",
            r.adversary, r.packer, r.d, r.bin_size, r.variant, r.k, r.n
        ),
        vertices: Some(r.vertices),
        bins: Some(r.bins),
        chi: Some(r.chi),
        opt: r.opt,
        ratio: Some(rational_to_string(&r.ratio)),
        bound: Some(format!("ratio{}{:.4}", if r.strict { ">" } else { ">=" }, r.bound)),
        pass: r.pass && r.replay_bins == r.bins && r.opt.is_none_or(|o| o == r.chi),
        ..Default::default()
    })
}

pub fn cmd_reduce(
    adversary: AdversaryKind,
    packer: &str,
    d: usize,
    bin_size: usize,
    variant: Variant,
) -> Result<Report> {
    let mut report = Report::new();
    report.push(reduce_row(
        "reduce-0001".into(),
        adversary,
        packer,
        d,
        bin_size,
        variant,
    )?);
    Ok(report)
}
