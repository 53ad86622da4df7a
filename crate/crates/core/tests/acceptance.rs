//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::time::{Duration, Instant};

use cleanflex::angle::circular_distance;
use cleanflex::census::{antiperiodic_corpus, fourier_corpus, random_fourier};
use cleanflex::curves::{conic_residual_slope, sextactic_scan, vertex_scan, SupportCurve};
use cleanflex::osculation::{group_points, sample_tuples, AUDIT_MIN_SEPARATION};
use cleanflex::{
    axiom_audit, bose_tally, classify_flex, clean_flex_census, curvature_radius, flex_scan,
    hermite_interpolate, minimal_function, operator_sign_change_check, sign_change_count, Catalog,
    Error, FlexKind, GridProfile, HermiteData, Multiplicity, PeriodicFunction, Smooth,
    SpaceDescriptor, TrigPoly,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn sharp_example(grid: &GridProfile) -> Outcome {
    let mut slowest = Duration::ZERO;
    for n in 1..=4 {
        let start = Instant::now();
        let u = PeriodicFunction::catalog(Catalog::Sharp { n }).map_err(err)?;
        let report = clean_flex_census(&u, n, grid).map_err(err)?;
        let elapsed = start.elapsed();
        slowest = slowest.max(elapsed);
        let m = (n + 1) as f64;
        ensure(report.records.len() == 2 * n + 2, || {
            format!("n={n}: {} flexes", report.records.len())
        })?;
        for (j, r) in report.records.iter().enumerate() {
            let expect = (FRAC_PI_2 + j as f64 * PI) / m;
            let at = r.location.midpoint();
            ensure(r.location.is_point() && circular_distance(at, expect) <= 1e-8, || {
                format!("n={n}: flex {j} at {at}, expected {expect}")
            })?;
            ensure(r.kind.is_clean(), || format!("n={n}: flex at {at} is {}", r.kind))?;
        }
        ensure(report.clean_max.len() == n + 1 && report.clean_min.len() == n + 1, || {
            format!("n={n}: {} clean-max, {} clean-min", report.clean_max.len(), report.clean_min.len())
        })?;
        ensure(elapsed < Duration::from_secs(5), || format!("n={n}: took {elapsed:?}"))?;
    }
    Ok(format!("n=1..4 sharp, slowest {:.2?}", slowest))
}

fn clean_flex_suite(grid: &GridProfile) -> (Outcome, Outcome) {
    let start = Instant::now();
    let mut first_failure = None;
    let mut sign_failure = None;
    let mut total = 0;
    let mut min_changes = usize::MAX;
    for n in 1..=3 {
        for (i, u) in fourier_corpus(1000 + n as u64, n, 100).iter().enumerate() {
            total += 1;
            match clean_flex_census(u, n, grid) {
                Ok(report) => {
                    if (report.clean_max.len() < n + 1 || report.clean_min.len() < n + 1) && first_failure.is_none() {
                        first_failure = Some(format!(
                            "n={n} #{i}: {} clean-max, {} clean-min",
                            report.clean_max.len(),
                            report.clean_min.len()
                        ));
                    }
                    match sign_change_count(&report) {
                        Ok(c) => {
                            min_changes = min_changes.min(c);
                            if c < 4 && sign_failure.is_none() {
                                sign_failure = Some(format!("n={n} #{i}: {c} sign changes"));
                            }
                        }
                        Err(e) => {
                            sign_failure.get_or_insert(format!("n={n} #{i}: {e}"));
                        }
                    }
                }
                Err(e) => {
                    first_failure.get_or_insert(format!("n={n} #{i}: {e}"));
                    sign_failure.get_or_insert(format!("n={n} #{i}: {e}"));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    let counts = match first_failure {
        Some(f) => Err(f),
        None if elapsed > Duration::from_secs(300) => Err(format!("took {elapsed:?}")),
        None => Ok(format!("{total} functions, n=1..3, {:.1?}", elapsed)),
    };
    let signs = match sign_failure {
        Some(f) => Err(f),
        None => Ok(format!("{total} functions, fewest sign changes {min_changes}")),
    };
    (counts, signs)
}

fn bose(grid: &GridProfile) -> Outcome {
    let sin2t = PeriodicFunction::fourier(vec![0.0, 0.0, 0.0, 0.0, 1.0]).map_err(err)?;
    let t = bose_tally(&sin2t, grid).map_err(err)?;
    ensure((t.s_count, t.t_count, t.difference) == (2, 0, 2), || format!("sin 2t gives {t:?}"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(4000);
    let mut accepted = 0;
    let mut infinite = 0;
    while accepted < 50 {
        let u = random_fourier(&mut rng, 1);
        match bose_tally(&u, grid) {
            Ok(t) => {
                ensure(t.difference == 2, || format!("function {accepted}: {t:?}"))?;
                accepted += 1;
            }
            Err(Error::InfiniteCount) => infinite += 1,
            Err(e) => return Err(format!("function {accepted}: {e}")),
        }
    }
    Ok(format!("sin 2t (2,0,2); 50 random with difference 2 ({infinite} skipped as infinite)"))
}

fn random_nodes(rng: &mut ChaCha8Rng, order: usize, min_sep: f64) -> Vec<(f64, usize)> {
    let mut mults = Vec::new();
    let mut left = order;
    while left > 0 {
        let m = rng.gen_range(1..=left.min(3));
        mults.push(m);
        left -= m;
    }
    let mut nodes: Vec<(f64, usize)> = Vec::with_capacity(mults.len());
    for m in mults {
        loop {
            let t = rng.gen_range(0.0..TAU);
            if nodes.iter().all(|&(s, _)| circular_distance(s, t) >= min_sep) {
                nodes.push((t, m));
                break;
            }
        }
    }
    nodes
}

fn hermite_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5000);
    let mut worst: f64 = 0.0;
    let mut confluent = 0;
    let mut ill = Vec::new();
    let mut inaccurate = Vec::new();
    for i in 0..1000 {
        let order = rng.gen_range(1..=9);
        let space = SpaceDescriptor::new(order).map_err(err)?;
        let coeffs: Vec<f64> = (0..order).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let p = TrigPoly::new(space, coeffs).map_err(err)?;
        let nodes = random_nodes(&mut rng, order, TAU / 100.0);
        if nodes.iter().any(|&(_, m)| m > 1) {
            confluent += 1;
        }
        let data = HermiteData::sample(&p, nodes.clone()).map_err(err)?;
        match hermite_interpolate(space, &data) {
            Ok(q) => {
                let rel = q.distance(&p) / p.coeff_norm();
                worst = worst.max(rel);
                if rel > 1e-9 {
                    inaccurate.push(format!("#{i} order {order} {nodes:?}: {rel:.2e}"));
                }
            }
            Err(e) => ill.push(format!("#{i} order {order} {nodes:?}: {e}")),
        }
    }
    let summary = format!(
        "1000 instances ({confluent} confluent), worst relative error {worst:.1e}, {} above 1e-9, {} errors",
        inaccurate.len(),
        ill.len()
    );
    if ill.is_empty() && inaccurate.is_empty() {
        Ok(summary)
    } else {
        let first = ill.first().or(inaccurate.first()).cloned().unwrap_or_default();
        Err(format!("{summary}; first: {first}"))
    }
}

fn minimal_functions(grid: &GridProfile) -> Outcome {
    let sin2t = PeriodicFunction::fourier(vec![0.0, 0.0, 0.0, 0.0, 1.0]).map_err(err)?;
    let r = minimal_function(&sin2t, &[(0.0, 1)], 1, grid).map_err(err)?;
    let expect = [2.0, -2.0, 2.0];
    ensure(r.phi.coeffs().iter().zip(expect).all(|(a, b)| (a - b).abs() < 1e-9), || {
        format!("worked example gives {:?}", r.phi.coeffs())
    })?;
    let e = r.contact.entries();
    ensure(
        e.len() == 2
            && circular_distance(e[0].location, 0.0) < 1e-8
            && circular_distance(e[1].location, 3.0 * FRAC_PI_2) < 1e-8
            && e.iter().all(|c| c.multiplicity == Multiplicity::Finite(2)),
        || format!("worked example contact {e:?}"),
    )?;

    let mut rng = ChaCha8Rng::seed_from_u64(6000);
    let check: Vec<f64> = (0..10_000).map(|i| i as f64 * TAU / 10_000.0).collect();
    for i in 0..200 {
        let n = 1 + i % 2;
        let u = random_fourier(&mut rng, n);
        let mut tuple = sample_tuples(&mut rng, n, 1, 0.1).remove(0);
        if n == 2 && rng.gen_bool(0.3) {
            tuple[1] = tuple[0];
        }
        let points = group_points(&tuple);
        let r = minimal_function(&u, &points, n, grid).map_err(|e| format!("#{i} n={n} {points:?}: {e}"))?;
        let scale = check.iter().map(|&t| u.value(t).abs()).fold(0.0, f64::max);
        for &t in &check {
            let gap = r.phi.eval(t, 0) - u.value(t);
            ensure(gap >= -1e-8 * scale, || format!("#{i}: phi below u by {gap:e} at {t}"))?;
        }
        for &(p, mu) in &points {
            let m = r.contact.at(p, 1e-6);
            ensure(m.is_some_and(|m| m.at_least(2 * mu)), || {
                format!("#{i} n={n} {points:?}: multiplicity {m:?} at {p}")
            })?;
        }
        ensure(r.contact.total().at_least(2 * n + 2), || {
            format!("#{i} n={n} {points:?}: total {}", r.contact.total())
        })?;
    }
    Ok("worked example exact; 200 random instances supporting with full contact".into())
}

fn axioms(grid: &GridProfile) -> Outcome {
    let mut checked = 0;
    let mut skipped = 0;
    for n in 1..=2 {
        for (i, u) in fourier_corpus(1000 + n as u64, n, 100).iter().enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(7000 + 100 * n as u64 + i as u64);
            let tuples = sample_tuples(&mut rng, n, 50, AUDIT_MIN_SEPARATION);
            let report = axiom_audit(u, n, &tuples, grid);
            for (name, o) in [
                ("symmetry", &report.symmetry),
                ("supporting", &report.supporting),
                ("exchangeability", &report.exchangeability),
                ("total multiplicity", &report.total_multiplicity),
            ] {
                checked += o.checked;
                skipped += o.skipped;
                ensure(o.passed(), || format!("n={n} #{i} {name}: {}", o.failures[0]))?;
            }
        }
    }
    Ok(format!("200 functions x 50 tuples, {checked} checks, {skipped} skipped"))
}

fn four_vertex(grid: &GridProfile) -> Outcome {
    let h = PeriodicFunction::fourier(vec![1.0, 0.0, 0.0, 0.1, 0.0]).map_err(err)?;
    let c = SupportCurve::new(h).map_err(err)?;
    let v = vertex_scan(&c, grid).map_err(err)?;
    ensure(v.len() == 4, || format!("{} vertices", v.len()))?;
    for (r, expect) in v.iter().zip([0.0, FRAC_PI_2, PI, 3.0 * FRAC_PI_2]) {
        let at = r.location.midpoint();
        ensure(r.location.is_point() && circular_distance(at, expect) <= 1e-8, || {
            format!("vertex at {at}, expected {expect}")
        })?;
    }
    let inscribed = v.iter().filter(|r| r.kind == FlexKind::CleanMax).count();
    let circumscribed = v.iter().filter(|r| r.kind == FlexKind::CleanMin).count();
    ensure(inscribed >= 2 && circumscribed >= 2, || format!("{inscribed} inscribed, {circumscribed} circumscribed"))?;
    let rho = curvature_radius(&c, 0.0);
    ensure((rho - 0.7).abs() <= 1e-10, || format!("radius {rho}"))?;
    Ok(format!("4 vertices, {inscribed} inscribed / {circumscribed} circumscribed clean, radius 0.7"))
}

fn sextactic(grid: &GridProfile) -> Outcome {
    let h = PeriodicFunction::fourier(vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.05, 0.0]).map_err(err)?;
    let c = SupportCurve::new(h).map_err(err)?;
    let recs = sextactic_scan(&c, grid).map_err(err)?;
    let max = recs.iter().filter(|r| r.kind == FlexKind::CleanMax).count();
    let min = recs.iter().filter(|r| r.kind == FlexKind::CleanMin).count();
    ensure(max >= 3 && min >= 3 && recs.len() >= 6, || {
        format!("{} records, {max} clean-max, {min} clean-min", recs.len())
    })?;
    let mut slope = f64::INFINITY;
    for r in &recs {
        let s = conic_residual_slope(&c, r.location.midpoint(), &[0.1, 0.05, 0.025, 0.0125]).map_err(err)?;
        slope = slope.min(s);
    }
    ensure(slope >= 4.5, || format!("residual slope {slope}"))?;
    let ellipse = SupportCurve::new(PeriodicFunction::catalog(Catalog::EllipseSupport { a: 2.0, b: 1.0 }).map_err(err)?)
        .map_err(err)?;
    match sextactic_scan(&ellipse, grid) {
        Err(Error::ConicDegenerate { .. }) => {}
        other => return Err(format!("ellipse gives {other:?}")),
    }
    Ok(format!("{max} clean-max, {min} clean-min, slope {slope:.2}, ellipse rejected"))
}

fn antiperiodic(grid: &GridProfile) -> Outcome {
    let u = PeriodicFunction::antiperiodic(vec![0.0, 0.0, 0.0, 1.0]).map_err(err)?;
    let flexes = flex_scan(&u, SpaceDescriptor::antiperiodic(1), grid).map_err(err)?;
    ensure(flexes.len() == 3, || format!("{} flexes", flexes.len()))?;
    for (a, expect) in flexes.iter().zip([0.0, TAU / 3.0, 2.0 * TAU / 3.0]) {
        let at = a.midpoint();
        ensure(a.is_point() && circular_distance(at, expect) <= 1e-8, || format!("flex at {at}, expected {expect}"))?;
    }
    let mut fewest = usize::MAX;
    for k in 1..=2 {
        let space = SpaceDescriptor::antiperiodic(k);
        for (i, v) in antiperiodic_corpus(10_000 + k as u64, k, 50).iter().enumerate() {
            let (count, pass) = operator_sign_change_check(v, space, grid).map_err(|e| format!("k={k} #{i}: {e}"))?;
            fewest = fewest.min(count);
            ensure(pass && count > space.order(), || format!("order {} #{i}: {count} sign changes", space.order()))?;
        }
    }
    Ok(format!("sin(3t/2) flexes at 0, 2pi/3, 4pi/3; 100 antiperiodic functions, fewest sign changes {fewest}"))
}

fn plateau(grid: &GridProfile) -> Outcome {
    let probes = [0.42 * PI, 0.5 * PI, 0.58 * PI];
    let mut seen = Vec::new();
    for (lambda, expect) in [(0.5, FlexKind::CleanMax), (1.0, FlexKind::GlobalMax), (1.5, FlexKind::Plain)] {
        let v = PeriodicFunction::plateau(lambda).map_err(err)?;
        for s in probes {
            let r = classify_flex(&v, s, 1, grid).map_err(err)?;
            ensure(r.kind == expect, || format!("lambda={lambda} at {s}: {} (expected {expect})", r.kind))?;
        }
        seen.push(format!("{lambda}: {expect}"));
    }
    Ok(seen.join(", "))
}

fn main() {
    let grid = GridProfile::default();
    let (counts, signs) = clean_flex_suite(&grid);
    let results: Vec<(&str, Outcome)> = vec![
        ("sharp example", sharp_example(&grid)),
        ("clean-flex lower bound", counts),
        ("clean-flex sign changes", signs),
        ("Bose tally", bose(&grid)),
        ("Hermite round trip", hermite_round_trip()),
        ("minimal function", minimal_functions(&grid)),
        ("axiom audit", axioms(&grid)),
        ("four vertices", four_vertex(&grid)),
        ("sextactic points", sextactic(&grid)),
        ("antiperiodic flexes", antiperiodic(&grid)),
        ("plateau trichotomy", plateau(&grid)),
    ];
    let mut failed = 0;
    for (i, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all {} criteria passed", results.len());
}
