//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails. Time limits are wall-clock seconds.

use coverkit_core::construction::{self, binomial, check_configuration, Built};
use coverkit_core::duality::{self, DualScene};
use coverkit_core::extension::{self, ExtendedCover, ExtensionParams};
use coverkit_core::geom::{point_in_polygon, realize_homothet, Point2, Rect};
use coverkit_core::hypergraph::{
    self, certified_witness, check_all_colorings, find_witness, Coloring, IncidenceHypergraph, Rule, WitnessSource,
};
use coverkit_core::prep::{presets, PrepError, PreparedPolygon};
use coverkit_core::rational::{int, one, rat, Rational};
use coverkit_core::scene::SceneDocument;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

const STATEMENT1_QUERIES: usize = 10_000;
const STATEMENT1_LIMIT: Duration = Duration::from_secs(10);
const MAX_SIZE: usize = 4;
const EXHAUSTIVE_LIMIT: Duration = Duration::from_secs(60);
const CERTIFICATE_SAMPLES: u64 = 100_000;
const CERTIFICATE_LIMIT: Duration = Duration::from_secs(60);
const EXTENSION_SAMPLES: usize = 10_000;
const EXTENSION_LIMIT: Duration = Duration::from_secs(120);
const SEED: u64 = 20_240_601;

type Verdict = Result<String, String>;

fn delta() -> Rational {
    rat(1, 64)
}

fn epsilon() -> Rational {
    rat(1, 10)
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed<T>(limit: Duration, what: &str, f: impl FnOnce() -> Result<T, String>) -> Result<(T, Duration), String> {
    let t = Instant::now();
    let v = f()?;
    let dt = t.elapsed();
    ensure(dt < limit, || format!("{what} took {dt:.1?}, limit {limit:?}"))?;
    Ok((v, dt))
}

struct Fixture {
    name: &'static str,
    prepared: PreparedPolygon,
    /// `built[k-1][l-1]` is `T(k,l)`.
    built: Vec<Vec<Built>>,
}

fn fixtures() -> Result<Vec<Fixture>, String> {
    presets::NAMES
        .iter()
        .map(|&name| {
            let prepared = PreparedPolygon::new(&presets::by_name(name).unwrap()).map_err(|e| e.to_string())?;
            let built = (1..=MAX_SIZE)
                .map(|k| {
                    (1..=MAX_SIZE)
                        .map(|l| construction::build(&prepared, k, l, &delta()).map_err(|e| format!("{name}: {e}")))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            Ok(Fixture { name, prepared, built })
        })
        .collect()
}

fn statement1() -> Verdict {
    let mut parts = Vec::new();
    for name in presets::NAMES {
        let p = PreparedPolygon::new(&presets::by_name(name).unwrap()).map_err(|e| e.to_string())?;
        let (r, dt) = timed(STATEMENT1_LIMIT, name, || Ok(duality::check_statement1(&p.normalized, STATEMENT1_QUERIES, SEED)))?;
        ensure(r.mismatches == 0, || format!("{name}: {} mismatches, first {:?}", r.mismatches, r.first_mismatch))?;
        ensure(r.samples == STATEMENT1_QUERIES, || format!("{name}: ran {} queries", r.samples))?;
        parts.push(format!("{name} {} queries 0 mismatches ({} positive) in {dt:.1?}", r.samples, r.positives));
    }
    Ok(parts.join("; "))
}

fn size_law(fx: &[Fixture]) -> Verdict {
    let mut checked = 0;
    for f in fx {
        for k in 1..=MAX_SIZE {
            for l in 1..=MAX_SIZE {
                let n = f.built[k - 1][l - 1].config.homothets.len();
                let want = binomial(k + l, k) - 1;
                ensure(n == want, || format!("{} T({k},{l}) has {n} homothets, want {want}", f.name))?;
                checked += 1;
            }
        }
    }
    let diag: Vec<usize> = (1..=MAX_SIZE).map(|k| fx[0].built[k - 1][k - 1].config.homothets.len()).collect();
    ensure(diag == [1, 5, 19, 69], || format!("diagonal sizes {diag:?}"))?;
    Ok(format!("{checked} configurations on {} presets; T(k,k) sizes {diag:?}", fx.len()))
}

fn edge_size_law(fx: &[Fixture]) -> Verdict {
    let mut edges = 0;
    for f in fx {
        for row in &f.built {
            for b in row {
                let c = &b.config;
                let t = check_configuration(c, &f.prepared.normalized).map_err(|e| format!("{}: {e}", f.name))?;
                for (sets, want, side) in [(&t.a_sets, c.k, "a"), (&t.b_sets, c.l, "b")] {
                    for (i, s) in sets.iter().enumerate() {
                        ensure(s.len() == want, || {
                            format!("{} T({},{}) {side}-wedge {i} meets {} homothets", f.name, c.k, c.l, s.len())
                        })?;
                        edges += 1;
                    }
                }
                ensure(t.tangencies.is_empty(), || format!("{} T({},{}) has tangencies", f.name, c.k, c.l))?;
            }
        }
    }
    Ok(format!("{edges} wedges checked, 0 violations"))
}

fn exhaustive(fx: &[Fixture]) -> Verdict {
    let mut parts = Vec::new();
    for f in fx {
        for (m, want) in [(2, 32u64), (3, 524_288)] {
            let b = &f.built[m - 1][m - 1];
            let h = IncidenceHypergraph::from_configuration(&b.config, &f.prepared.normalized);
            let (r, dt) = timed(EXHAUSTIVE_LIMIT, f.name, || {
                check_all_colorings(&h, Rule::RedAOrBlueB, hypergraph::DEFAULT_CAP).map_err(|e| e.to_string())
            })?;
            ensure(r.colorings == want, || format!("{} T({m},{m}): {} colorings", f.name, r.colorings))?;
            ensure(r.passed(), || format!("{} T({m},{m}): counterexample {:?}", f.name, r.counterexample))?;
            if m == 3 {
                parts.push(format!("{} {} colorings in {dt:.1?}", f.name, r.colorings));
            }
        }
    }
    Ok(format!("T(2,2) 32 and T(3,3): {}", parts.join(", ")))
}

fn certificate(fx: &[Fixture]) -> Verdict {
    let mut parts = Vec::new();
    for f in fx {
        let base = &f.prepared.normalized;
        let c = &f.built[3][3].config;
        let h = IncidenceHypergraph::from_configuration(c, base);
        let (r, dt) = timed(CERTIFICATE_LIMIT, f.name, || {
            Ok(hypergraph::sample_colorings(&h, Rule::RedAOrBlueB, WitnessSource::Certificate(c), CERTIFICATE_SAMPLES, SEED))
        })?;
        ensure(r.colorings == CERTIFICATE_SAMPLES && r.passed(), || {
            format!("{} T(4,4): {} of {} witnesses validated", f.name, r.validated, r.colorings)
        })?;
        let small = &f.built[1][1].config;
        let hs = IncidenceHypergraph::from_configuration(small, base);
        let all = check_all_colorings(&hs, Rule::RedAOrBlueB, hypergraph::DEFAULT_CAP).map_err(|e| e.to_string())?;
        for mask in 0..32 {
            let col = Coloring::from_mask(mask, 5);
            let cert = certified_witness(small, &hs, &col).is_ok();
            let search = find_witness(&hs, &col, Rule::RedAOrBlueB).is_some();
            ensure(cert && search && all.passed(), || format!("{} T(2,2) mask {mask}: modes disagree", f.name))?;
        }
        parts.push(format!("{} {} witnesses in {dt:.1?}", f.name, r.validated));
    }
    Ok(format!("T(4,4): {}; T(2,2) agrees on 32/32", parts.join(", ")))
}

fn dual_soundness() -> Verdict {
    let mut parts = Vec::new();
    for name in presets::NAMES {
        let p = PreparedPolygon::new(&presets::by_name(name).unwrap()).map_err(|e| e.to_string())?;
        let base = &p.normalized;
        for m in 1..=3 {
            let d = duality::dualize_with_retry(&p, m, &delta(), None, duality::MAX_RETRIES).map_err(|e| e.to_string())?;
            let counts = duality::point_incidences(&d.scene, base);
            ensure(counts.iter().all(|s| s.len() == m), || format!("{name} m={m}: recount {counts:?}"))?;
            let points = IncidenceHypergraph::from_scene(&d.scene, base);
            let wedges = IncidenceHypergraph::from_configuration(&d.built.config, base);
            ensure(points.same_edges(&wedges), || format!("{name} m={m}: point and wedge hypergraphs differ"))?;
            let r = hypergraph::verify_nondecomposable_dual(&d.scene, base, hypergraph::DEFAULT_CAP)
                .map_err(|e| e.to_string())?;
            ensure(r.passed() && r.colorings == 1 << d.scene.inflated.len(), || format!("{name} m={m}: {r:?}"))?;
            if name == presets::NAMES[0] {
                parts.push(format!("m={m} {} colorings", r.colorings));
            }
        }
    }
    Ok(format!("all presets, exact recount and equal hypergraphs; {}", parts.join(", ")))
}

fn scale_band(cover: &ExtendedCover) -> Verdict {
    let eps = epsilon();
    let (lo, hi) = (one() - &eps, one() + &eps);
    let inside = |s: &Rational| *s >= lo && *s <= hi;
    let mut count = 0;
    for name in presets::NAMES {
        let p = PreparedPolygon::new(&presets::by_name(name).unwrap()).map_err(|e| e.to_string())?;
        for m in 1..=3 {
            let d = duality::dualize_with_retry(&p, m, &delta(), Some(&eps), duality::MAX_RETRIES)
                .map_err(|e| e.to_string())?;
            let bad = d.scene.inflated.iter().filter(|h| !inside(&h.scale)).count();
            ensure(bad == 0, || format!("{name} m={m}: {bad} scales outside the band"))?;
            count += d.scene.inflated.len();
        }
    }
    let bad = cover.translates.iter().filter(|h| !inside(&h.scale)).count();
    ensure(bad == 0, || format!("extension: {bad} scales outside the band"))?;
    Ok(format!("{count} inflated homothets and {} translates in [9/10, 11/10], 0 violations", cover.translates.len()))
}

fn extension_run() -> Result<(ExtendedCover, DualScene, PreparedPolygon, Duration), String> {
    let p = PreparedPolygon::new(&presets::diamond()).map_err(|e| e.to_string())?;
    let t = Instant::now();
    let d = duality::dualize_with_retry(&p, 2, &delta(), Some(&epsilon()), duality::MAX_RETRIES)
        .map_err(|e| e.to_string())?;
    let bands = duality::validate_bands(&d.scene, &p.height()).map_err(|e| e.to_string())?;
    let params = ExtensionParams {
        epsilon: epsilon(),
        region: Rect::new(int(-2), int(-2), int(2), int(2)),
        m: 2,
        line_a: bands.line_a,
        line_b: bands.line_b,
        scale_free: false,
    };
    let cover = extension::extend(&d.scene, &p.normalized, &params, extension::DEFAULT_ROUNDS).map_err(|e| e.to_string())?;
    Ok((cover, d.scene, p, t.elapsed()))
}

fn extension_check(cover: &ExtendedCover, scene: &DualScene, p: &PreparedPolygon, built_in: Duration) -> Verdict {
    let base = &p.normalized;
    let region = &cover.params.region;
    let t = Instant::now();
    let before = hypergraph::verify_nondecomposable_dual(scene, base, hypergraph::DEFAULT_CAP).map_err(|e| e.to_string())?;
    let mut polys: Vec<Vec<Point2>> = scene.inflated.iter().map(|h| realize_homothet(h, base)).collect();
    polys.extend(cover.translates.iter().map(|h| realize_homothet(h, base)));
    let exact = extension::verify_depth(&polys, region, 2).map_err(|e| e.to_string())?;
    ensure(exact.min_depth >= 2, || format!("exact depth {} at {:?}", exact.min_depth, exact.witness_point))?;
    let (sampled, at) = extension::sample_min_depth(&polys, region, EXTENSION_SAMPLES, SEED);
    ensure(sampled >= 2, || format!("sampled depth {sampled} at {at:?}"))?;
    let points: Vec<Point2> = scene.points.iter().map(|q| q.q.clone()).collect();
    ensure(extension::all_avoid(&cover.translates, base, &points), || "a translate contains a point of Y'".into())?;
    // Recount every point against the whole family; translates must add
    // nothing, so the dual hypergraph and its verdict are unchanged.
    let mut after = IncidenceHypergraph::from_scene(scene, base);
    for (q, dp) in points.iter().zip(&scene.points) {
        let set: Vec<usize> = polys.iter().enumerate().filter(|(_, poly)| point_in_polygon(q, poly)).map(|(i, _)| i).collect();
        let edges = if dp.kind == construction::WedgeKind::A { &mut after.a_edges } else { &mut after.b_edges };
        edges[dp.wedge] = set;
    }
    let rerun = check_all_colorings(&after, Rule::Monochromatic { size: scene.m }, hypergraph::DEFAULT_CAP)
        .map_err(|e| e.to_string())?;
    let (a, b) = (serde_json::to_string(&before).unwrap(), serde_json::to_string(&rerun).unwrap());
    ensure(a == b && before.passed(), || format!("dual verdict changed: {a} vs {b}"))?;
    let total = built_in + t.elapsed();
    ensure(total < EXTENSION_LIMIT, || format!("took {total:.1?}, limit {EXTENSION_LIMIT:?}"))?;
    Ok(format!(
        "{} translates, exact min_depth>={} over {} cells, sampled min_depth {} over {EXTENSION_SAMPLES} points, avoidance ok, dual verdict identical, {total:.1?}",
        cover.translates.len(),
        exact.min_depth,
        exact.cells_checked,
        sampled
    ))
}

fn coverkit(dir: &Path, args: &[&str]) -> Result<(), String> {
    let o = Command::new(env!("CARGO_BIN_EXE_coverkit"))
        .current_dir(dir)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(o.status.success(), || format!("coverkit {}: {}", args.join(" "), String::from_utf8_lossy(&o.stderr)))
}

fn pipeline(dir: &Path) -> Result<(String, Vec<Vec<u8>>), String> {
    let steps: [&[&str]; 7] = [
        &["build", "--polygon", "preset:pentagon", "--k", "2", "--l", "2"],
        &["dualize", "--scene", "scene.json", "--epsilon", "1/10"],
        &["verify", "--scene", "scene.json", "--what", "property1"],
        &["verify", "--scene", "scene.json", "--what", "dual", "--mode", "certificate"],
        &["verify", "--scene", "scene.json", "--what", "statement1", "--samples", "500"],
        &["render", "--scene", "scene.json", "--view", "config", "--out", "config.svg", "--labels"],
        &["render", "--scene", "scene.json", "--view", "dual", "--out", "dual.svg"],
    ];
    for s in steps {
        coverkit(dir, s)?;
    }
    let text = std::fs::read_to_string(dir.join("scene.json")).map_err(|e| e.to_string())?;
    let doc = SceneDocument::from_json(&text).map_err(|e| e.to_string())?;
    ensure(doc.to_json() == text, || "scene.json is not canonical".into())?;
    let svgs = ["config.svg", "dual.svg"].iter().map(|f| std::fs::read(dir.join(f)).unwrap()).collect();
    Ok((doc.without_timestamps().to_json(), svgs))
}

fn determinism() -> Verdict {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (ja, sa) = pipeline(a.path())?;
    let (jb, sb) = pipeline(b.path())?;
    ensure(ja == jb, || "scene.json differs between runs".into())?;
    ensure(sa == sb, || "SVG differs between runs".into())?;
    Ok(format!("scene.json ({} bytes) and 2 SVGs byte-identical across runs", ja.len()))
}

fn failures() -> Verdict {
    let tri = [Point2::from_ints(0, 0), Point2::from_ints(1, 0), Point2::from_ints(0, 1)];
    ensure(PreparedPolygon::new(&tri).err() == Some(PrepError::TooFewSides(3)), || "triangle accepted".into())?;
    let dart = [Point2::from_ints(0, 2), Point2::from_ints(1, -1), Point2::from_ints(0, 0), Point2::from_ints(-1, -1)];
    let e = PreparedPolygon::new(&dart).err();
    ensure(e == Some(PrepError::Unsupported), || format!("concave input gave {e:?}"))?;
    let p = PreparedPolygon::new(&presets::diamond()).map_err(|e| e.to_string())?;
    let d = duality::dualize_with_retry(&p, 2, &int(64), None, duality::MAX_RETRIES).map_err(|e| e.to_string())?;
    let first = d.attempts[0].error.clone().unwrap_or_default();
    ensure(first.starts_with("IncidenceDrift"), || format!("first attempt: {first:?}"))?;
    let last = d.attempts.last().unwrap();
    ensure(last.error.is_none() && last.delta == int(32), || format!("final attempt {last:?}"))?;
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("t.json"), "[[0,0],[1,0],[0,1]]").unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_coverkit"))
        .current_dir(dir.path())
        .args(["build", "--polygon", "t.json", "--k", "2", "--l", "2"])
        .output()
        .unwrap();
    ensure(o.status.code() == Some(2), || format!("CLI exit {:?}", o.status.code()))?;
    Ok(format!(
        "TooFewSides, Unsupported, IncidenceDrift at delta 64 then success at delta {} after {} attempts",
        last.delta,
        d.attempts.len()
    ))
}

fn main() {
    let mut lines = Vec::new();
    let mut report = |n: usize, name: &str, v: Verdict| {
        let line = match v {
            Ok(detail) => format!("criterion {n:>2} {name}: PASS {detail}"),
            Err(why) => format!("criterion {n:>2} {name}: FAIL {why}"),
        };
        println!("{line}");
        lines.push(line);
    };
    report(1, "statement1", statement1());
    match fixtures() {
        Ok(fx) => {
            report(2, "size law", size_law(&fx));
            report(3, "edge-size law", edge_size_law(&fx));
            report(4, "property1 exhaustive", exhaustive(&fx));
            report(5, "certificate mode", certificate(&fx));
        }
        Err(e) => {
            for (n, name) in [(2, "size law"), (3, "edge-size law"), (4, "property1 exhaustive"), (5, "certificate mode")] {
                report(n, name, Err(e.clone()));
            }
        }
    }
    report(6, "dual soundness", dual_soundness());
    match extension_run() {
        Ok((cover, scene, p, dt)) => {
            report(7, "scale band", scale_band(&cover));
            report(8, "extension", extension_check(&cover, &scene, &p, dt));
        }
        Err(e) => {
            report(7, "scale band", Err(format!("extension failed: {e}")));
            report(8, "extension", Err(e));
        }
    }
    report(9, "determinism", determinism());
    report(10, "failure surfacing", failures());
    let failed = lines.iter().filter(|l| l.contains(": FAIL ")).count();
    println!("acceptance: {} passed, {failed} failed", lines.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
