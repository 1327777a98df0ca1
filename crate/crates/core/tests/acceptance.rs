//! Acceptance suite: each criterion prints one PASS/FAIL line, and the test fails if any does.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use hyperpack::adversary::{vertex_count_bound, Adversary, HypertreeAdversary, KillerAdversary};
use hyperpack::colorer::{colorer_by_name, COLORER_NAMES};
use hyperpack::generate::{random_binary_instance, random_diverse_family, random_hypergraph, random_hypertree};
use hyperpack::hypergraph::{
    chromatic_number, colors_used, ff_hypertree_upper_floor, first_fit_color, is_hypertree, is_proper, Hypergraph,
};
use hyperpack::partition::{
    brute_force_diverse, brute_force_starry, diverse_to_starry, verify_diverse, verify_starry, BlockPartition,
    MultiFamily,
};
use hyperpack::reduction::{
    build_incidence_matrix, incidence_instance, online_column, packer_to_colorer, reduction_experiment, AdversaryKind,
    Variant,
};
use hyperpack::subsets::for_each_subset;
use hyperpack::vbp::{exact_opt_bins, ff_bin_bound, first_fit_pack, max_row_ones, FirstFitPacker, OnlinePacker};
use hyperpack::Edge;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

macro_rules! check {
    ($cond:expr, $($msg:tt)+) => {
        if !($cond) {
            return Err(format!($($msg)+));
        }
    };
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn run(id: usize, title: &str, limit: Duration, f: fn() -> Outcome) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into()))
    });
    let elapsed = start.elapsed();
    let outcome = match outcome {
        Ok(_) if elapsed > limit => Err(format!("took {:.2?}, limit {:?}", elapsed, limit)),
        other => other,
    };
    let ok = outcome.is_ok();
    let detail = outcome.unwrap_or_else(|e| e);
    println!(
        "criterion {:>2} [{}] {}: {} ({:.2?})",
        id,
        if ok { "PASS" } else { "FAIL" },
        title,
        detail,
        elapsed
    );
    ok
}

fn graph_k() -> Hypergraph {
    Hypergraph::new(4, 2, vec![vec![1, 4], vec![2, 3]]).unwrap()
}

fn ints(rows: &[Vec<Rational64>]) -> Vec<Vec<i64>> {
    rows.iter()
        .map(|r| r.iter().map(|x| x.to_integer()).collect())
        .collect()
}

/// Every k-uniform hypergraph on `n` vertices, one per subset of the k-subsets.
fn all_hypergraphs(n: usize, k: usize) -> Vec<Hypergraph> {
    let pool: Vec<usize> = (1..=n).collect();
    let mut candidates = Vec::new();
    for_each_subset(&pool, k, |s| candidates.push(s.to_vec()));
    (0u64..1 << candidates.len())
        .map(|mask| {
            let edges = candidates
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, e)| e.clone());
            Hypergraph::new(n, k, edges).unwrap()
        })
        .collect()
}

fn golden_matrix() -> Outcome {
    let m = build_incidence_matrix(&graph_k(), Variant::Binary).map_err(err)?;
    let expected = vec![
        vec![1, 0, 0, 0],
        vec![1, 0, 0, 0],
        vec![1, 0, 0, 1],
        vec![0, 1, 1, 0],
        vec![0, 1, 0, 0],
        vec![0, 0, 1, 0],
    ];
    check!(ints(&m.rows) == expected, "four-vertex matrix mismatch: {:?}", ints(&m.rows));

    // the fourth arrival of a 3-uniform stream on six vertices with edge {1,2,4}
    let arrived: BTreeSet<usize> = [1, 2, 3].into_iter().collect();
    let revealed = vec![Edge::new(vec![1, 2, 4]).unwrap()];
    let col = online_column(Variant::Binary, 6, 3, &arrived, 4, &revealed).map_err(err)?;
    let dense: Vec<i64> = col.to_dense().iter().map(|x| x.to_integer()).collect();
    let mut rows_with_v4 = Vec::new();
    let mut rows_without = Vec::new();
    let mut r = 0;
    for_each_subset(&[1, 2, 3, 4, 5, 6], 3, |s| {
        if s.contains(&4) {
            rows_with_v4.push(dense[r]);
        } else {
            rows_without.push(dense[r]);
        }
        r += 1;
    });
    check!(
        rows_with_v4 == vec![1, 0, 1, 1, 0, 1, 1, 1, 1, 1],
        "v4 column mismatch: {:?}",
        rows_with_v4
    );
    check!(
        rows_without.iter().all(|&x| x == 0),
        "v4 column nonzero outside its rows"
    );
    Ok("four-vertex matrix and the v4 column are bit-exact".into())
}

fn row_sum_law() -> Outcome {
    let mut checked = 0;
    for k in [2, 3] {
        for h in all_hypergraphs(5, k) {
            let n = h.n() as i64;
            let binary = build_incidence_matrix(&h, Variant::Binary).map_err(err)?;
            let mut r = 0;
            let mut failure = None;
            for_each_subset(&[1, 2, 3, 4, 5], k, |s| {
                let sum: Rational64 = binary.rows[r].iter().sum();
                let in_h = h.contains_edge(&Edge::new(s.to_vec()).unwrap());
                let want = Rational64::from_integer(if in_h { k as i64 } else { k as i64 - 1 });
                if sum != want && failure.is_none() {
                    failure = Some(format!("binary row {:?} sums to {}", s, sum));
                }
                r += 1;
            });
            if let Some(f) = failure {
                return Err(f);
            }
            let unit = build_incidence_matrix(&h, Variant::Unit).map_err(err)?;
            let lo = Rational64::from_integer(k as i64 - 1);
            let hi = lo + Rational64::new(n - k as i64 + 1, n);
            for sum in unit.row_sums() {
                check!(sum >= lo && sum <= hi, "unit row sum {} outside [{}, {}]", sum, lo, hi);
            }
            checked += 1;
        }
    }
    Ok(format!("{} hypergraphs on 5 vertices", checked))
}

fn chi_equals_opt() -> Outcome {
    let mut count = 0;
    let mut family: Vec<Hypergraph> = all_hypergraphs(5, 2);
    family.extend(all_hypergraphs(5, 3));
    let mut rng = ChaCha8Rng::seed_from_u64(0x1e44a);
    for _ in 0..250 {
        let n = rng.gen_range(3..=6);
        let density = rng.gen_range(0.1..0.9);
        family.push(random_hypergraph(&mut rng, n, 3, density).map_err(err)?);
    }
    for h in &family {
        let chi = chromatic_number(h).map_err(err)?;
        for variant in [Variant::Binary, Variant::Unit] {
            let inst = incidence_instance(h, variant).map_err(err)?;
            let opt = exact_opt_bins(&inst).map_err(err)?;
            check!(opt == chi, "chi {} but OPT {} ({:?}) on {:?}", chi, opt, variant, h);
        }
        count += 1;
    }
    Ok(format!("chi == OPT on {} hypergraphs, both variants", count))
}

fn killer_six() -> Outcome {
    let t = KillerAdversary::new(6)
        .map_err(err)?
        .run(&mut *colorer_by_name("firstfit").unwrap())
        .map_err(err)?;
    check!(t.color_count() == 3, "FirstFit used {} colors", t.color_count());
    let chi = chromatic_number(&t.hypergraph).map_err(err)?;
    check!(chi == 2, "chi = {}", chi);

    let mut wrapped =
        packer_to_colorer(FirstFitPacker::new(Rational64::from_integer(1)), 6, 2, Variant::Binary).map_err(err)?;
    KillerAdversary::new(6).map_err(err)?.run(&mut wrapped).map_err(err)?;
    let inst = wrapped.emitted_instance().map_err(err)?;
    check!(inst.dimension() == 15, "dimension {}", inst.dimension());
    check!(
        wrapped.bins_used() == 3,
        "online packer used {} bins",
        wrapped.bins_used()
    );
    let ff = first_fit_pack(&inst).bin_count();
    let opt = exact_opt_bins(&inst).map_err(err)?;
    check!(ff == 3 && opt == 2, "FirstFit {} bins, OPT {}", ff, opt);
    check!(
        incidence_instance(&t.hypergraph, Variant::Binary).map_err(err)? == inst,
        "emitted instance differs"
    );
    Ok("FirstFit 3 colors / 3 bins, chi = OPT = 2 on 15 rows".into())
}

fn first_fit_sweep() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xf1f1);
    let mut with_opt = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..1200 {
        let d = rng.gen_range(1..=20);
        let n = rng.gen_range(0..=30);
        let b = rng.gen_range(1..=3);
        let density = rng.gen_range(0.05..0.7);
        let inst = random_binary_instance(&mut rng, d, n, b, density).map_err(err)?;
        let bins = first_fit_pack(&inst).bin_count();
        let p = max_row_ones(&inst).map_err(err)?;
        if p >= 2 {
            let bound = ff_bin_bound(d as u64, p as u64, b as u64).map_err(err)?;
            check!(
                bins as u64 <= bound.bins,
                "FirstFit {} > bound {} (d={d}, p={p}, B={b})",
                bins,
                bound.bins
            );
        } else {
            check!(bins <= 1, "FirstFit opened {} bins with p = {}", bins, p);
        }
        if n <= 14 && n > 0 {
            let opt = exact_opt_bins(&inst).map_err(err)?;
            let ratio = bins as f64 / opt as f64;
            worst = worst.max(ratio / ((2.0 * d as f64).sqrt() + 2.0));
            let within = ratio < (2.0 * d as f64).sqrt() + 2.0;
            check!(within, "ratio {} too large at d = {}", ratio, d);
            with_opt += 1;
        }
    }
    Ok(format!(
        "1200 instances, {} with OPT, max ratio/bound {:.3}",
        with_opt, worst
    ))
}

fn killer_ratio() -> Outcome {
    let make = |b: Rational64| Box::new(FirstFitPacker::new(b)) as Box<dyn OnlinePacker>;
    let r = reduction_experiment(AdversaryKind::Killer, &make, 28, 1, Variant::Binary).map_err(err)?;
    let bound = (56f64.sqrt() - 1.0) / 4.0;
    check!(r.n == 8, "n = {}", r.n);
    check!(r.opt == Some(2), "OPT {:?}", r.opt);
    check!(r.ratio == Rational64::from_integer(2), "ratio {}", r.ratio);
    check!(2.0 > bound && (r.bound - bound).abs() < 1e-12, "bound {}", r.bound);
    check!(r.pass, "report marked as failing");
    Ok(format!("ratio 2 > {:.4}, OPT 2", bound))
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

fn starry_soundness() -> Outcome {
    let mut exhaustive = 0;
    for q in 1..=3u32 {
        let ground: Vec<u32> = (1..=q).collect();
        let subsets: Vec<BTreeSet<u32>> = (0..1u32 << q)
            .map(|mask| ground.iter().copied().filter(|c| mask >> (c - 1) & 1 == 1).collect())
            .collect();
        for ms in multisets(subsets.len(), 8) {
            let members: Vec<BTreeSet<u32>> = ms.iter().map(|&t| subsets[t].clone()).collect();
            let family = MultiFamily::new(ground.clone(), members).map_err(err)?;
            for p in 1..=ms.len() / q as usize {
                let Some(diverse) = brute_force_diverse(&family, p).map_err(err)? else {
                    break;
                };
                let stars = diverse_to_starry(&family, &diverse, p).map_err(err)?;
                check!(
                    verify_starry(&family, &stars, p).map_err(err)?,
                    "not starry: {:?}",
                    family
                );
                check!(
                    brute_force_starry(&family, p).map_err(err)?.is_some(),
                    "oracle disagrees: {:?}",
                    family
                );
                exhaustive += 1;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x57a7);
    let mut oracle_checked = 0;
    for _ in 0..600 {
        let p = rng.gen_range(1..=4);
        let q = rng.gen_range(1..=5);
        let (family, diverse) = random_diverse_family(&mut rng, p, q, 1).map_err(err)?;
        check!(
            verify_diverse(&family, &diverse, p).map_err(err)?,
            "generator produced a non-diverse family"
        );
        let stars = diverse_to_starry(&family, &diverse, p).map_err(err)?;
        check!(
            verify_starry(&family, &stars, p).map_err(err)?,
            "not starry: {:?}",
            family
        );
        if let Ok(found) = brute_force_starry(&family, p) {
            check!(found.is_some(), "oracle found no starry partition: {:?}", family);
            oracle_checked += 1;
        }
    }
    Ok(format!(
        "{} exhaustive (family, p) cases, 600 random ({} also brute-forced)",
        exhaustive, oracle_checked
    ))
}

fn partition_examples() -> Outcome {
    let twelve = MultiFamily::from_slices(
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
    .map_err(err)?;
    let natural = BlockPartition::new(vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7], vec![8, 9, 10, 11]]);
    check!(
        verify_diverse(&twelve, &natural, 4).map_err(err)?,
        "twelve-member family is not diverse"
    );
    let shown = BlockPartition::new(vec![vec![0, 3, 4, 5], vec![1, 6, 8, 9], vec![2, 7, 10, 11]]);
    check!(
        verify_starry(&twelve, &shown, 4).map_err(err)?,
        "expected star partition is not starry"
    );
    let derived = diverse_to_starry(&twelve, &natural, 4).map_err(err)?;
    check!(derived == shown, "greedy produced {:?}", derived.blocks());

    let pairs = MultiFamily::from_slices(&[1, 2], &[&[1], &[1], &[2], &[2]]).map_err(err)?;
    let stars = BlockPartition::new(vec![vec![0, 1], vec![2, 3]]);
    check!(verify_starry(&pairs, &stars, 2).map_err(err)?, "pairs not starry");
    check!(
        brute_force_diverse(&pairs, 2).map_err(err)?.is_none(),
        "pairs admit a diverse partition"
    );
    Ok("12-member family diverse and starry; pairs starry, never diverse".into())
}

struct Run {
    name: &'static str,
    k: usize,
    m: usize,
    n: usize,
    colors: usize,
    hypergraph: Hypergraph,
}

fn adversary_matrix() -> Result<Vec<Run>, String> {
    let mut runs = Vec::new();
    for name in COLORER_NAMES.iter().copied() {
        for k in 2..=5 {
            for m in 1..=5 {
                let mut colorer = colorer_by_name(name).unwrap();
                let t = HypertreeAdversary::new(k, m)
                    .map_err(err)?
                    .run(&mut *colorer)
                    .map_err(err)?;
                let h = t.final_hypergraph();
                check!(h.k() == k, "wrong uniformity");
                check!(is_hypertree(h), "{name} k={k} m={m}: not a hypertree");
                check!(is_proper(h, &t.coloring).map_err(err)?, "{name} k={k} m={m}: improper");
                check!(
                    t.color_count() >= m,
                    "{name} k={k} m={m}: only {} colors",
                    t.color_count()
                );
                check!(
                    h.n() <= vertex_count_bound(k, m),
                    "{name} k={k} m={m}: {} vertices > {}",
                    h.n(),
                    vertex_count_bound(k, m)
                );
                let mut again = colorer_by_name(name).unwrap();
                check!(
                    t.replay(&mut *again).map_err(err)?,
                    "{name} k={k} m={m}: replay differs"
                );
                runs.push(Run {
                    name,
                    k,
                    m,
                    n: h.n(),
                    colors: t.color_count(),
                    hypergraph: h.clone(),
                });
            }
        }
    }
    Ok(runs)
}

fn hypertree_adversary() -> Outcome {
    let runs = adversary_matrix()?;
    let fig = runs
        .iter()
        .find(|r| r.name == "firstfit" && r.k == 5 && r.m == 4)
        .unwrap();
    check!(
        fig.n <= 125 && fig.colors >= 4,
        "k=5, m=4: {} vertices, {} colors",
        fig.n,
        fig.colors
    );
    Ok(format!(
        "{} runs over {} colorers; k=5, m=4 uses {} vertices (cap 125)",
        runs.len(),
        COLORER_NAMES.len(),
        fig.n
    ))
}

fn hypertree_upper_bound() -> Outcome {
    let runs = adversary_matrix()?;
    let mut tight = 0;
    for r in &runs {
        let ff = colors_used(&first_fit_color(&r.hypergraph)).len();
        let cap = ff_hypertree_upper_floor(r.n, r.k);
        check!(ff <= cap, "{} k={} m={}: FirstFit {} > {}", r.name, r.k, r.m, ff, cap);
        if r.name == "firstfit" {
            // the adversary forces m colors within k^(m-1) vertices, so the bound is met exactly
            check!(
                r.colors == cap && ff == r.colors,
                "k={} m={}: not tight ({} vs {})",
                r.k,
                r.m,
                r.colors,
                cap
            );
            tight += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x7ee5);
    for _ in 0..120 {
        let k = rng.gen_range(2..=5);
        let edges = rng.gen_range(0..=30);
        let h = random_hypertree(&mut rng, k, edges).map_err(err)?;
        check!(is_hypertree(&h), "generator produced a non-hypertree");
        let ff = colors_used(&first_fit_color(&h)).len();
        check!(
            ff <= ff_hypertree_upper_floor(h.n(), k),
            "random hypertree beats the bound: {:?}",
            h
        );
    }
    Ok(format!(
        "{} adversary trees + 120 random; tight on all {} FirstFit runs",
        runs.len(),
        tight
    ))
}

#[test]
fn acceptance_criteria() {
    let secs = Duration::from_secs;
    let results = [
        run(1, "golden incidence matrix", secs(1), golden_matrix),
        run(2, "row-sum law", secs(30), row_sum_law),
        run(3, "chromatic number equals packing optimum", secs(300), chi_equals_opt),
        run(4, "killer graph on six vertices", secs(1), killer_six),
        run(5, "FirstFit bound sweep", secs(300), first_fit_sweep),
        run(6, "killer reduction at d = 28", secs(1), killer_ratio),
        run(7, "diverse to starry soundness", secs(300), starry_soundness),
        run(8, "partition examples", secs(1), partition_examples),
        run(9, "hypertree adversary matrix", secs(120), hypertree_adversary),
        run(10, "FirstFit hypertree upper bound", secs(60), hypertree_upper_bound),
    ];
    let failed: Vec<usize> = results
        .iter()
        .enumerate()
        .filter(|(_, ok)| !**ok)
        .map(|(i, _)| i + 1)
        .collect();
    assert!(failed.is_empty(), "failing criteria: {:?}", failed);
}
