//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::collections::{HashMap, HashSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rigidlab::affine::AffineMap;
use rigidlab::census::{self, Curve, CensusOptions, Filter, RichEquivalence};
use rigidlab::colour_pin::{self, ColourBoundFunctions, Norm};
use rigidlab::experiment::fit_exponent;
use rigidlab::group::Group;
use rigidlab::hypergraph::{find_nac_colouring, Hypergraph};
use rigidlab::pointset::{self, PointSet};
use rigidlab::rational::{format_q, q, qf};
use rigidlab::rigidity::{self, Realisation};
use rigidlab::{Metric, Q};

type Outcome = Result<String, String>;

const BUDGET: u128 = census::DEFAULT_BUDGET;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn distinct_count(m: &Metric, g: &Hypergraph, p: &PointSet, filter: Filter) -> Result<u64, String> {
    let opts = CensusOptions { filter, budget: BUDGET, ..CensusOptions::default() };
    Ok(census::census(m, g, p, &opts).map_err(err)?.distinct)
}

/// Every labelled tree on `n` vertices, from Prüfer sequences.
fn labelled_trees(n: usize) -> Vec<Hypergraph> {
    if n == 1 {
        return vec![Hypergraph::graph(1, &[]).unwrap()];
    }
    if n == 2 {
        return vec![Hypergraph::path(2)];
    }
    let mut out = Vec::new();
    let total = n.pow(n as u32 - 2);
    for code in 0..total {
        let mut seq = Vec::with_capacity(n - 2);
        let mut c = code;
        for _ in 0..n - 2 {
            seq.push(c % n);
            c /= n;
        }
        let mut degree = vec![1usize; n];
        for &v in &seq {
            degree[v] += 1;
        }
        let mut edges = Vec::new();
        for &v in &seq {
            let leaf = (0..n).find(|&u| degree[u] == 1).unwrap();
            edges.push((leaf, v));
            degree[leaf] -= 1;
            degree[v] -= 1;
        }
        let rest: Vec<usize> = (0..n).filter(|&u| degree[u] == 1).collect();
        edges.push((rest[0], rest[1]));
        out.push(Hypergraph::graph(n, &edges).unwrap());
    }
    out
}

fn criterion_1() -> Outcome {
    let e2 = Metric::euclid_sq(2);
    let mut checked = 0;
    for (name, g, rigid) in [
        ("K_3", Hypergraph::complete(3), true),
        ("K_4", Hypergraph::complete(4), true),
        ("P_3", Hypergraph::path(3), false),
        ("C_4", Hypergraph::cycle(4), false),
    ] {
        let r = rigidity::is_g_rigid(&e2, &g, rigidity::DEFAULT_TRIALS, 7).map_err(err)?;
        ensure(r.rigid == rigid && !r.verdict.approximate, || format!("{name} under euclid_sq d=2: rigid={}", r.rigid))?;
        checked += 1;
    }
    for d in 1..=3 {
        let r = rigidity::is_g_rigid(&Metric::euclid_sq(d), &Hypergraph::complete(d + 1), rigidity::DEFAULT_TRIALS, 7).map_err(err)?;
        ensure(r.rigid, || format!("K_{} not rigid under euclid_sq d={d}", d + 1))?;
        checked += 1;
    }
    let l4 = Metric::lp(4, 2).map_err(err)?;
    let r = rigidity::is_g_rigid(&l4, &Hypergraph::complete(4), rigidity::DEFAULT_TRIALS, 7).map_err(err)?;
    ensure(r.rigid, || "K_4 not rigid under l_4".into())?;
    checked += 1;
    for n in 2..=5 {
        for t in labelled_trees(n) {
            let r = rigidity::is_g_rigid(&l4, &t, rigidity::DEFAULT_TRIALS, 7).map_err(err)?;
            ensure(!r.rigid, || format!("tree {:?} rigid under l_4", t.edges()))?;
            checked += 1;
        }
    }
    let collinear = Realisation::from_ints(2, &[&[0, 0], &[1, 0], &[2, 0]]).map_err(err)?;
    let k3 = Hypergraph::complete(3);
    let v = rigidity::is_infinitesimally_rigid(&e2, &k3, &collinear).map_err(err)?;
    let regular = rigidity::is_g_regular(&e2, &k3, &collinear).map_err(err)?;
    ensure(v.rank == 2 && !regular, || format!("collinear K_3: rank {} regular {regular}", v.rank))?;
    Ok(format!("{} verdicts, collinear K_3 rank 2 and non-regular", checked + 1))
}

fn random_rational(rng: &mut ChaCha8Rng) -> Q {
    qf(rng.gen_range(-20..=20), rng.gen_range(1..=9))
}

fn criterion_2() -> Outcome {
    let metrics = [
        "euclid_sq:1", "euclid_sq:2", "euclid_sq:3", "pseudo11:2", "lp:4:2", "lp:6:2", "dot:1", "dot:2", "dot:3",
        "skew:2", "sym_tensor:3:2", "sym_tensor:3:3", "sym_tensor:4:2",
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut checks, mut failures) = (0usize, Vec::new());
    for spec in metrics {
        let (id, d) = spec.rsplit_once(':').unwrap();
        let m = Metric::parse(id, d.parse().unwrap()).map_err(err)?;
        for v in 1..=5 {
            let all = Hypergraph::complete_with_repetition(v, m.k());
            for _ in 0..20 {
                let edges: Vec<Vec<usize>> = all.edges().iter().filter(|_| rng.gen_bool(0.5)).cloned().collect();
                let g = Hypergraph::new(m.k(), v, edges).map_err(err)?;
                for _ in 0..100 {
                    let pts: Vec<Vec<Q>> = (0..v).map(|_| (0..m.d()).map(|_| random_rational(&mut rng)).collect()).collect();
                    let p = Realisation::new(m.d(), pts).map_err(err)?;
                    checks += 1;
                    if !rigidity::trivial_in_kernel(&m, &g, &p).map_err(err)? {
                        failures.push(format!("{m} {:?}", g.edges()));
                    }
                }
            }
        }
    }
    ensure(failures.is_empty(), || format!("{} failures, first {}", failures.len(), failures[0]))?;
    Ok(format!("{} metrics, {checks} exact containment checks, 0 failures", metrics.len()))
}

/// Energy of a finite linear group by applying every element to every realisation.
fn finite_energy_oracle(elements: &[AffineMap], pts: &[Vec<Q>], v: usize) -> u128 {
    let index: HashMap<&Vec<Q>, usize> = pts.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let n = pts.len();
    let mut total = 0u128;
    for code in 0..n.pow(v as u32) {
        let idx: Vec<usize> = (0..v).map(|i| code / n.pow((v - 1 - i) as u32) % n).collect();
        let mut images: HashSet<Vec<usize>> = HashSet::new();
        for gam in elements {
            let img: Option<Vec<usize>> = idx.iter().map(|&i| index.get(&gam.apply(&pts[i])).copied()).collect();
            if let Some(img) = img {
                images.insert(img);
            }
        }
        total += images.len() as u128;
    }
    total
}

fn criterion_3() -> Outcome {
    let mut runs = 0;
    let trivial = |r: &census::EnergyReport, n: usize| -> Result<(), String> {
        let lo = (n as u128).pow(r.vertices as u32);
        ensure(lo <= r.energy && r.energy <= lo * lo, || format!("{} energy {} outside [{lo}, {}]", r.group, r.energy, lo * lo))
    };
    let grid = pointset::grid(3, 2).map_err(err)?;
    for group in [Group::Euclidean { d: 2 }, Group::SpecialEuclidean2, Group::Orthogonal { d: 2 }, Group::SignedPermTranslations { d: 2 }, Group::PseudoEuclidean, Group::SpecialLinear2] {
        for v in 1..=2 {
            let r = census::energy(&group, v, &grid, BUDGET).map_err(err)?;
            trivial(&r, grid.len())?;
            runs += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in [3, 4] {
        for d in [1, 2] {
            let m = Metric::sym_tensor(k, d).map_err(err)?;
            let elements = m.finite_elements().ok_or_else(|| format!("{m} has no finite group"))?;
            let group = Group::of_metric(&m);
            for size in 1..=4 {
                for _ in 0..5 {
                    let mut pts: Vec<Vec<Q>> = Vec::new();
                    while pts.len() < size {
                        let p: Vec<Q> = (0..d).map(|_| q(rng.gen_range(-2..=2))).collect();
                        if !pts.contains(&p) {
                            pts.push(p);
                        }
                    }
                    let set = PointSet::from_exact(d, pts.clone()).map_err(err)?;
                    for v in 1..=3 {
                        let r = census::energy(&group, v, &set, BUDGET).map_err(err)?;
                        trivial(&r, size)?;
                        let law = elements.len() as u128 * (size as u128).pow(v as u32);
                        ensure(r.energy <= law, || format!("{m}: energy {} above |Γ||P|^|V| = {law}", r.energy))?;
                        let oracle = finite_energy_oracle(&elements, &pts, v);
                        ensure(r.energy == oracle, || format!("{m} |P|={size} |V|={v}: energy {} oracle {oracle}", r.energy))?;
                        runs += 1;
                    }
                }
            }
        }
    }
    let c = census::fibre_energy_consistency(&Metric::euclid_sq(2), &Hypergraph::complete(3), &grid, Filter::All, BUDGET).map_err(err)?;
    let lo = 9u128.pow(3);
    ensure(lo <= c.energy && c.energy <= lo * lo, || format!("K_3 energy {} outside trivial bounds", c.energy))?;
    ensure(c.mismatched_pairs == 0, || format!("{} energy pairs with different measurements", c.mismatched_pairs))?;
    Ok(format!("{} energy runs within trivial and finite-group bounds; K_3 over grid(3,2): energy {}, 0 mismatched pairs", runs + 1, c.energy))
}

fn criterion_4() -> Outcome {
    let m = Metric::euclid_sq(2);
    let mut rows = Vec::new();
    for (curve, d_curve) in [(Curve::XAxis, 1i64), (Curve::UnitCircle, 2)] {
        for n in [8usize, 12, 16] {
            let p = match curve {
                Curve::XAxis => pointset::line(n),
                Curve::UnitCircle => pointset::circle_rat(n),
            }
            .map_err(err)?;
            for (name, g) in [("K_2", Hypergraph::complete(2)), ("P_3", Hypergraph::path(3)), ("K_3", Hypergraph::complete(3))] {
                let v = g.vertex_count() as i64;
                let dd = d_curve * 2;
                let base = Q::new(((n as i64 - dd).max(0) / v).into(), dd.into());
                let bound = (0..v - 1).fold(Q::one(), |acc, _| acc * &base);
                let distinct = distinct_count(&m, &g, &p, Filter::All)?;
                ensure(Q::from_integer(distinct.into()) >= bound, || format!("{name} n={n} {curve:?}: {distinct} < {}", format_q(&bound)))?;
                let r = census::curve_bound_check(&m, &g, &p, curve, BUDGET).map_err(err)?;
                ensure(r.holds && r.bound == format_q(&bound) && r.distinct == distinct, || format!("{name} n={n} {curve:?}: report disagrees"))?;
                rows.push(format!("{name}/{n}/{}: {distinct}>={}", if d_curve == 1 { "line" } else { "circle" }, format_q(&bound)));
            }
        }
    }
    Ok(format!("18 comparisons hold ({})", rows.join(", ")))
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    let graphs = |loops: bool| -> Vec<Hypergraph> {
        let mut gs = vec![Hypergraph::complete(2), Hypergraph::path(3), Hypergraph::complete(3)];
        if loops {
            gs.extend((1..=3).map(Hypergraph::complete_with_loops));
        }
        gs
    };
    let rot90 = AffineMap::from_i64(&[&[0, -1], &[1, 0]], &[0, 0]);
    let rot_rat = AffineMap::new(vec![vec![qf(3, 5), qf(-4, 5)], vec![qf(4, 5), qf(3, 5)]], vec![q(0), q(0)]).map_err(err)?;
    let boost = AffineMap::new(vec![vec![qf(5, 4), qf(3, 4)], vec![qf(3, 4), qf(5, 4)]], vec![q(1), q(-2)]).map_err(err)?;
    let cases: Vec<(Metric, AffineMap, Vec<Q>, std::ops::RangeInclusive<usize>, bool)> = vec![
        (Metric::euclid_sq(2), AffineMap::translation(vec![q(1), qf(1, 2)]), vec![q(0), q(0)], 1..=8, false),
        (Metric::pseudo(), boost, vec![q(1), q(2)], 1..=8, false),
        (Metric::dot(2), rot90, vec![q(1), q(2)], 1..=4, true),
        (Metric::dot(2), rot_rat, vec![q(1), q(2)], 5..=8, true),
    ];
    for (m, theta, x, sizes, loops) in cases {
        for n in sizes {
            let p = pointset::orbit_tight_set(&m, &theta, &x, n).map_err(err)?;
            for g in graphs(loops) {
                let v = g.vertex_count() as u64;
                let cap = v * (n as u64).pow(v as u32 - 1);
                let distinct = distinct_count(&m, &g, &p, Filter::All)?;
                ensure(distinct <= cap, || format!("{m} n={n} {:?}: {distinct} > {cap}", g.edges()))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} orbit censuses within |V| n^(|V|-1)"))
}

type C = (Q, Q);

/// SE(2) maps `x -> Rx + b` induced by pairs of equal-length segments; classes are the
/// partial maps they induce on `P`, kept when at least `t` points land in `P`.
fn se2_rich_oracle(pts: &[Vec<Q>], t: usize) -> usize {
    let set: HashSet<&Vec<Q>> = pts.iter().collect();
    let mut maps: HashSet<(C, C)> = HashSet::new();
    for a in pts {
        for b in pts {
            for c in pts {
                for d in pts {
                    if a == b || c == d {
                        continue;
                    }
                    let u = [&b[0] - &a[0], &b[1] - &a[1]];
                    let w = [&d[0] - &c[0], &d[1] - &c[1]];
                    let len = &u[0] * &u[0] + &u[1] * &u[1];
                    if len != &w[0] * &w[0] + &w[1] * &w[1] {
                        continue;
                    }
                    let cos = (&u[0] * &w[0] + &u[1] * &w[1]) / &len;
                    let sin = (&u[0] * &w[1] - &u[1] * &w[0]) / &len;
                    let b = (&c[0] - (&cos * &a[0] - &sin * &a[1]), &c[1] - (&sin * &a[0] + &cos * &a[1]));
                    maps.insert(((cos, sin), b));
                }
            }
        }
    }
    let mut classes: HashSet<Vec<(Vec<Q>, Vec<Q>)>> = HashSet::new();
    for ((cos, sin), b) in maps {
        let mut partial: Vec<(Vec<Q>, Vec<Q>)> = pts
            .iter()
            .map(|p| (p.clone(), vec![&cos * &p[0] - &sin * &p[1] + &b.0, &sin * &p[0] + &cos * &p[1] + &b.1]))
            .filter(|(_, img)| set.contains(img))
            .collect();
        partial.sort();
        if partial.len() >= t {
            classes.insert(partial);
        }
    }
    classes.len()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n).filter(|s| s.count_ones() as usize == k).map(|s| (0..n).filter(|&i| s >> i & 1 == 1).collect()).collect()
}

fn criterion_6() -> Outcome {
    let grid = pointset::grid(3, 2).map_err(err)?;
    let mut sets = 0;
    for size in 2..=5 {
        for idx in subsets(9, size) {
            let p = grid.subset(&idx).map_err(err)?;
            let pts = p.exact().unwrap();
            let r = census::rich_transformations(&Group::SpecialEuclidean2, &p, 2, RichEquivalence::PartialMap).map_err(err)?;
            for &(t, count) in &r.counts_by_t {
                let oracle = se2_rich_oracle(pts, t) as u64;
                ensure(count == oracle, || format!("subset {idx:?} t={t}: {count} vs oracle {oracle}"))?;
            }
            sets += 1;
        }
    }
    let two = PointSet::from_ints(&[&[0, 0], &[1, 0]]).map_err(err)?;
    let r = census::rich_transformations(&Group::SpecialEuclidean2, &two, 2, RichEquivalence::PartialMap).map_err(err)?;
    ensure(r.count == 2, || format!("two-point example gives {}", r.count))?;
    Ok(format!("{sets} grid(3,2) subsets match the oracle at every t; two-point example gives 2"))
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for d in [2, 3] {
        let b = ColourBoundFunctions::unit_distance_log(d).map_err(err)?;
        let inv = b.inverse_violations((2..=1_000_000).map(|m| m as f64));
        ensure(inv.is_empty(), || format!("d={d}: f^-1(m) <= g(m) at m={}", inv[0]))?;
        let pairs: Vec<(f64, f64)> = (0..10_000).map(|_| (rng.gen_range(1.0..1e6), rng.gen_range(1.0..1e6))).collect();
        let sub = b.subadditivity_violations(pairs);
        ensure(sub.is_empty(), || format!("d={d}: subadditivity fails at {:?}", sub[0]))?;
    }
    let bounds = [
        ColourBoundFunctions::unit_distance_log(2).map_err(err)?,
        ColourBoundFunctions::unit_distance_log(3).map_err(err)?,
        ColourBoundFunctions::power_law(1.0, 0.5).map_err(err)?,
    ];
    let mut checked = 0;
    for (bi, b) in bounds.iter().enumerate() {
        for n in 2..=12 {
            let colourings = colour_pin::sample_admissible_colourings(n, n, b, 200, 100 * bi as u64 + n as u64).map_err(err)?;
            for c in colourings {
                let r = colour_pin::check_colour_lemma(&c, b).map_err(err)?;
                ensure(r.hypothesis_holds, || format!("sampled colouring fails its hypothesis (n={n})"))?;
                ensure(r.conclusion_holds, || format!("counterexample: n={n} {:?}, max {} < {}", b, r.max_colour_degree, r.bound))?;
                checked += 1;
            }
        }
    }
    Ok(format!("both claims hold on m=2..10^6 and 10^4 pairs for d=2,3; {checked} admissible colourings, 0 counterexamples"))
}

fn criterion_8() -> Outcome {
    let sets = [
        ("line(8)", pointset::line(8).map_err(err)?),
        ("grid(3,2)", pointset::grid(3, 2).map_err(err)?),
        ("random(2,8)", pointset::random_generic(2, 8, 100, 8).map_err(err)?),
    ];
    let mut checked = 0;
    for norm in [Norm::Euclidean, Norm::Linf] {
        for (name, p) in &sets {
            for n in 1..=4 {
                for tree in labelled_trees(n) {
                    let exact = colour_pin::norm_census(&norm, &tree, p, BUDGET).map_err(err)?.distinct as u128;
                    for root in 0..n {
                        let cert = colour_pin::tree_certificate(&norm, &tree, root, p).map_err(err)?.certificate;
                        ensure(cert <= exact, || format!("{norm} {name} {:?} root {root}: {cert} > {exact}", tree.edges()))?;
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} certificates at or below the exact census"))
}

fn criterion_9() -> Outcome {
    let m = Metric::euclid_sq(2);
    let g = Hypergraph::path(3);
    let mut rows = Vec::new();
    for (name, p) in [("grid(3,2)", pointset::grid(3, 2).map_err(err)?), ("line(9)", pointset::line(9).map_err(err)?)] {
        for (u, w) in [(0, 1), (0, 2), (1, 2)] {
            let ext = g.zero_extension(u, w).map_err(err)?;
            let base = distinct_count(&m, &g, &p, Filter::Injective)?;
            let grown = distinct_count(&m, &ext, &p, Filter::Injective)?;
            let spare = p.len() as u64 - g.vertex_count() as u64;
            ensure(2 * grown >= base * spare, || format!("{name} ({u},{w}): {grown} < {base}·{spare}/2"))?;
            let r = census::zero_extension_growth(&m, &g, u, w, &p, BUDGET).map_err(err)?;
            ensure(r.holds && r.base_distinct == base && r.extended_distinct == grown, || format!("{name} ({u},{w}): report disagrees"))?;
            rows.push(format!("{name} ({u},{w}): {grown} >= {base}*{spare}/2"));
        }
    }
    Ok(rows.join(", "))
}

/// Edge subsets forming a simple cycle.
fn cycles_by_subsets(g: &Hypergraph) -> Vec<Vec<usize>> {
    let e = g.edges();
    let mut out = Vec::new();
    for s in 1u32..1 << e.len() {
        let chosen: Vec<usize> = (0..e.len()).filter(|&i| s >> i & 1 == 1).collect();
        if chosen.len() < 3 {
            continue;
        }
        let mut deg = vec![0; g.vertex_count()];
        for &i in &chosen {
            deg[e[i][0]] += 1;
            deg[e[i][1]] += 1;
        }
        if deg.iter().any(|&d| d != 0 && d != 2) {
            continue;
        }
        let mut reached = HashSet::from([e[chosen[0]][0]]);
        loop {
            let before = reached.len();
            for &i in &chosen {
                if reached.contains(&e[i][0]) || reached.contains(&e[i][1]) {
                    reached.insert(e[i][0]);
                    reached.insert(e[i][1]);
                }
            }
            if reached.len() == before {
                break;
            }
        }
        if reached.len() == chosen.len() {
            out.push(chosen);
        }
    }
    out
}

fn nac_by_cycles(cycles: &[Vec<usize>], red: &[bool]) -> bool {
    red.iter().any(|&r| r)
        && red.iter().any(|&r| !r)
        && cycles.iter().all(|c| {
            let reds = c.iter().filter(|&&i| red[i]).count();
            reds != 1 && reds != c.len() - 1
        })
}

fn criterion_10() -> Outcome {
    let mut rows = Vec::new();
    for (name, g, expected) in [("K_4", Hypergraph::complete(4), false), ("C_4", Hypergraph::cycle(4), true)] {
        let cycles = cycles_by_subsets(&g);
        let m = g.edge_count();
        let exhaustive = (0u32..1 << m).any(|s| nac_by_cycles(&cycles, &(0..m).map(|i| s >> i & 1 == 1).collect::<Vec<_>>()));
        let found = find_nac_colouring(&g).map_err(err)?;
        ensure(exhaustive == expected, || format!("{name}: exhaustive search says {exhaustive}"))?;
        ensure(found.is_some() == expected, || format!("{name}: search says {}", found.is_some()))?;
        if let Some(c) = &found {
            ensure(nac_by_cycles(&cycles, &c.red), || format!("{name}: returned colouring breaks a cycle"))?;
        }
        rows.push(format!("{name}: {} ({} cycles)", if expected { "exists" } else { "none" }, cycles.len()));
    }
    Ok(rows.join(", "))
}

fn criterion_11() -> Outcome {
    let k3 = Hypergraph::complete(3);
    let e2 = Metric::euclid_sq(2);
    let grids = (3..=7)
        .map(|m| {
            let p = pointset::grid(m, 2).map_err(err)?;
            Ok((p.len() as f64, distinct_count(&e2, &k3, &p, Filter::All)? as f64))
        })
        .collect::<Result<Vec<_>, String>>()?;
    let fit = fit_exponent(&grids).map_err(err)?;
    ensure((1.70..=2.20).contains(&fit.slope), || format!("K_3 slope {:.4} outside [1.70, 2.20]", fit.slope))?;
    let dot = Metric::dot(2);
    let k2 = Hypergraph::complete(2);
    let circle = (8..=24)
        .map(|n| {
            let p = pointset::circle_rat(n).map_err(err)?;
            Ok((n as f64, distinct_count(&dot, &k2, &p, Filter::All)? as f64))
        })
        .collect::<Result<Vec<_>, String>>()?;
    let fit2 = fit_exponent(&circle).map_err(err)?;
    ensure((0.75..=1.25).contains(&fit2.slope), || format!("K_2/dot slope {:.4} outside [0.75, 1.25]", fit2.slope))?;
    Ok(format!("K_3/euclid_sq slope {:.4}, K_2/dot slope {:.4}", fit.slope, fit2.slope))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Option<u64>); 11] = [
        ("rigidity verdicts", criterion_1, Some(10)),
        ("trivial-motion containment", criterion_2, Some(60)),
        ("energy laws", criterion_3, None),
        ("curve lower bound", criterion_4, Some(60)),
        ("orbit tightness", criterion_5, None),
        ("rich transformations", criterion_6, None),
        ("colouring lemma", criterion_7, None),
        ("tree certificates", criterion_8, None),
        ("0-extension growth", criterion_9, None),
        ("NAC colourings", criterion_10, None),
        ("exponent fits", criterion_11, Some(300)),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let mut outcome = run();
        let elapsed = t0.elapsed();
        if let (Ok(_), Some(secs)) = (&outcome, limit) {
            if elapsed > Duration::from_secs(*secs) {
                outcome = Err(format!("took {:.1} s, limit {secs} s", elapsed.as_secs_f64()));
            }
        }
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {status} [{:.2} s] {name}: {detail}", i + 1, elapsed.as_secs_f64());
    }
    println!("acceptance: {} of {} criteria passed in {:.1} s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
