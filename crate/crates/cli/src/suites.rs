//! Invariant suites behind `hyperpack verify`.
//!
//! Every suite draws from one ChaCha8 stream seeded by `--seed`, so a seed fixes the report
//! byte for byte.

use std::collections::BTreeSet;

use anyhow::Result;
use hyperpack::adversary::{vertex_count_bound, Adversary, HypertreeAdversary};
use hyperpack::colorer::{colorer_by_name, COLORER_NAMES};
use hyperpack::generate::{random_binary_instance, random_diverse_family, random_hypergraph, random_hypertree};
use hyperpack::hypergraph::{
    chromatic_number, colors_used, ff_hypertree_upper_floor, first_fit_color, is_hypertree, is_proper, Hypergraph,
};
use hyperpack::partition::{brute_force_diverse, brute_force_starry, diverse_to_starry, verify_starry, MultiFamily};
use hyperpack::reduction::{build_incidence_matrix, incidence_instance, AdversaryKind, Variant};
use hyperpack::subsets::for_each_subset;
use hyperpack::vbp::{exact_opt_bins, ff_bin_bound, first_fit_pack, max_row_ones, PACKER_NAMES};
use hyperpack::Edge;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::commands::reduce_row;
use crate::config::Scale;
use crate::report::{Report, ReportRow};

struct Sizes {
    exhaustive_n: usize,
    random_hypergraphs: usize,
    family_members: usize,
    family_colors: u32,
    random_families: usize,
    max_k: usize,
    max_m: usize,
    random_instances: usize,
    random_hypertrees: usize,
}

fn sizes(scale: Scale) -> Sizes {
    match scale {
        Scale::Smoke => Sizes {
            exhaustive_n: 4,
            random_hypergraphs: 50,
            family_members: 6,
            family_colors: 2,
            random_families: 100,
            max_k: 4,
            max_m: 4,
            random_instances: 200,
            random_hypertrees: 30,
        },
        Scale::Full => Sizes {
            exhaustive_n: 5,
            random_hypergraphs: 300,
            family_members: 8,
            family_colors: 3,
            random_families: 500,
            max_k: 5,
            max_m: 5,
            random_instances: 1000,
            random_hypertrees: 100,
        },
    }
}

/// Outcome of a suite: number of cases and the first failure, if any.
struct Tally {
    cases: usize,
    failure: Option<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            cases: 0,
            failure: None,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok && self.failure.is_none() {
            self.failure = Some(what());
        }
    }

    fn row(self, id: &str, experiment: &str, detail: String) -> ReportRow {
        let mut parameters = format!("cases={} {}", self.cases, detail);
        if let Some(f) = &self.failure {
            parameters.push_str(&format!(" first_failure={}", f));
        }
        ReportRow {
            id: id.into(),
            experiment: experiment.into(),
            parameters,
            pass: self.failure.is_none(),
            ..Default::default()
        }
    }
}

fn all_hypergraphs(n: usize, k: usize) -> Result<Vec<Hypergraph>> {
    let pool: Vec<usize> = (1..=n).collect();
    let mut candidates = Vec::new();
    for_each_subset(&pool, k, |s| candidates.push(s.to_vec()));
    (0u64..1 << candidates.len())
        .map(|mask| {
            let edges = (0..candidates.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| candidates[i].clone());
            Ok(Hypergraph::new(n, k, edges)?)
        })
        .collect()
}

fn row_sums(s: &Sizes) -> Result<ReportRow> {
    let mut tally = Tally::new();
    let n = s.exhaustive_n;
    let pool: Vec<usize> = (1..=n).collect();
    for k in [2, 3] {
        for h in all_hypergraphs(n, k)? {
            let binary = build_incidence_matrix(&h, Variant::Binary)?.row_sums();
            let mut rows = Vec::new();
            for_each_subset(&pool, k, |e| rows.push(e.to_vec()));
            for (e, sum) in rows.iter().zip(&binary) {
                let in_h = h.contains_edge(&Edge::new(e.clone())?);
                let want = Rational64::from_integer(k as i64 - 1 + in_h as i64);
                tally.check(*sum == want, || {
                    format!("binary row {:?} of {:?}", e, h.edges().collect::<Vec<_>>())
                });
            }
            let lo = Rational64::from_integer(k as i64 - 1);
            let hi = lo + Rational64::new((n - k + 1) as i64, n as i64);
            for sum in build_incidence_matrix(&h, Variant::Unit)?.row_sums() {
                tally.check(sum >= lo && sum <= hi, || format!("unit row sum {}", sum));
            }
        }
    }
    Ok(tally.row("verify-01", "row-sum-law", format!("n={}", n)))
}

fn chi_equals_opt(s: &Sizes, rng: &mut ChaCha8Rng) -> Result<ReportRow> {
    let mut tally = Tally::new();
    let mut family = all_hypergraphs(s.exhaustive_n, 2)?;
    family.extend(all_hypergraphs(s.exhaustive_n, 3)?);
    for _ in 0..s.random_hypergraphs {
        let n = rng.gen_range(3..=6);
        let density = rng.gen_range(0.1..0.9);
        family.push(random_hypergraph(rng, n, 3, density)?);
    }
    for h in &family {
        let chi = chromatic_number(h)?;
        for variant in [Variant::Binary, Variant::Unit] {
            let opt = exact_opt_bins(&incidence_instance(h, variant)?)?;
            tally.check(opt == chi, || format!("chi={} opt={} variant={}", chi, opt, variant));
        }
    }
    Ok(tally.row(
        "verify-02",
        "chi-equals-opt",
        format!("random={}", s.random_hypergraphs),
    ))
}

fn multisets(types: usize, max_len: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, types: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if left == 0 {
            return;
        }
        for t in start..types {
            cur.push(t);
            go(t, types, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, types, max_len, &mut Vec::new(), &mut out);
    out
}

fn starry(s: &Sizes, rng: &mut ChaCha8Rng) -> Result<ReportRow> {
    let mut tally = Tally::new();
    for q in 1..=s.family_colors {
        let ground: Vec<u32> = (1..=q).collect();
        let subsets: Vec<BTreeSet<u32>> = (0..1u32 << q)
            .map(|mask| ground.iter().copied().filter(|c| mask >> (c - 1) & 1 == 1).collect())
            .collect();
        for ms in multisets(subsets.len(), s.family_members) {
            let family = MultiFamily::new(ground.clone(), ms.iter().map(|&t| subsets[t].clone()).collect())?;
            for p in 1..=ms.len() / q as usize {
                let Some(diverse) = brute_force_diverse(&family, p)? else {
                    break;
                };
                let stars = diverse_to_starry(&family, &diverse, p)?;
                let ok = verify_starry(&family, &stars, p)? && brute_force_starry(&family, p)?.is_some();
                tally.check(ok, || format!("p={} members={:?}", p, ms));
            }
        }
    }
    for _ in 0..s.random_families {
        let p = rng.gen_range(1..=4);
        let q = rng.gen_range(1..=5);
        let (family, diverse) = random_diverse_family(rng, p, q, 1)?;
        let stars = diverse_to_starry(&family, &diverse, p)?;
        tally.check(verify_starry(&family, &stars, p)?, || format!("random p={} q={}", p, q));
    }
    Ok(tally.row(
        "verify-03",
        "diverse-to-starry",
        format!(
            "members<={} colors<={} random={}",
            s.family_members, s.family_colors, s.random_families
        ),
    ))
}

fn adversaries(s: &Sizes, rng: &mut ChaCha8Rng) -> Result<Vec<ReportRow>> {
    let mut matrix = Tally::new();
    let mut upper = Tally::new();
    for name in COLORER_NAMES.iter().copied() {
        for k in 2..=s.max_k {
            for m in 1..=s.max_m {
                let mut colorer = colorer_by_name(name).expect("listed colorer");
                let t = HypertreeAdversary::new(k, m)?.run(&mut *colorer)?;
                let h = t.final_hypergraph();
                let mut again = colorer_by_name(name).expect("listed colorer");
                let ok = t.color_count() >= m
                    && h.n() <= vertex_count_bound(k, m)
                    && is_hypertree(h)
                    && is_proper(h, &t.coloring)?
                    && t.replay(&mut *again)?;
                matrix.check(ok, || format!("{} k={} m={}", name, k, m));
                let ff = colors_used(&first_fit_color(h)).len();
                upper.check(ff <= ff_hypertree_upper_floor(h.n(), k), || {
                    format!("{} k={} m={}", name, k, m)
                });
            }
        }
    }
    for _ in 0..s.random_hypertrees {
        let k = rng.gen_range(2..=5);
        let edges = rng.gen_range(0..=30);
        let h = random_hypertree(rng, k, edges)?;
        let ff = colors_used(&first_fit_color(&h)).len();
        upper.check(is_hypertree(&h) && ff <= ff_hypertree_upper_floor(h.n(), k), || {
            format!("random k={} edges={}", k, edges)
        });
    }
    Ok(vec![
        matrix.row(
            "verify-04",
            "adversary-matrix",
            format!("colorers={} k<={} m<={}", COLORER_NAMES.len(), s.max_k, s.max_m),
        ),
        upper.row(
            "verify-05",
            "hypertree-firstfit-bound",
            format!("random={}", s.random_hypertrees),
        ),
    ])
}

fn first_fit_sweep(s: &Sizes, rng: &mut ChaCha8Rng) -> Result<ReportRow> {
    let mut tally = Tally::new();
    for _ in 0..s.random_instances {
        let d = rng.gen_range(1..=20);
        let n = rng.gen_range(0..=30);
        let b = rng.gen_range(1..=3);
        let density = rng.gen_range(0.05..0.7);
        let inst = random_binary_instance(rng, d, n, b, density)?;
        let bins = first_fit_pack(&inst).bin_count();
        let p = max_row_ones(&inst)?;
        let cap = if p >= 2 {
            ff_bin_bound(d as u64, p as u64, b as u64)?.bins
        } else {
            1
        };
        let mut ok = bins as u64 <= cap;
        if (1..=14).contains(&n) {
            let opt = exact_opt_bins(&inst)?;
            ok &= (bins as f64) / (opt as f64) < (2.0 * d as f64).sqrt() + 2.0;
        }
        tally.check(ok, || format!("d={} n={} B={} bins={}", d, n, b, bins));
    }
    Ok(tally.row(
        "verify-06",
        "firstfit-bound-sweep",
        format!("instances={}", s.random_instances),
    ))
}

fn reductions() -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    let cases = [
        (AdversaryKind::Killer, 28, 1, Variant::Binary),
        (AdversaryKind::Killer, 10, 1, Variant::Unit),
        (AdversaryKind::Hypertree, 84, 2, Variant::Binary),
        (AdversaryKind::Hypertree, 36, 2, Variant::Unit),
    ];
    for (i, (adv, d, b, variant)) in cases.into_iter().enumerate() {
        for (j, packer) in PACKER_NAMES.iter().enumerate() {
            let id = format!("verify-07-{}{}", i + 1, j + 1);
            rows.push(reduce_row(id, adv, packer, d, b, variant)?);
        }
    }
    Ok(rows)
}

/// Runs every suite at the given scale; the report passes iff every suite does.
pub fn cmd_verify(scale: Scale, seed: u64) -> Result<Report> {
    let s = sizes(scale);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = Report::new();
    report.push(row_sums(&s)?);
    report.push(chi_equals_opt(&s, &mut rng)?);
    report.push(starry(&s, &mut rng)?);
    for row in adversaries(&s, &mut rng)? {
        report.push(row);
    }
    report.push(first_fit_sweep(&s, &mut rng)?);
    for row in reductions()? {
        report.push(row);
    }
    Ok(report)
}
