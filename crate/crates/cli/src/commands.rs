use crate::config::Config;
use crate::{polygon, BuildArgs, DualizeArgs, ExtendArgs, ModeArg, RenderArgs, VerifyArgs, View, What};
use coverkit_core::construction::{self, ConstructionError};
use coverkit_core::duality::{self, DualityError};
use coverkit_core::extension::{self, ExtensionError, ExtensionParams};
use coverkit_core::geom::{realize_homothet, Point2, Rect};
use coverkit_core::hypergraph::{self, HypergraphError, IncidenceHypergraph, Rule, SampleReport, WitnessSource};
use coverkit_core::prep::{PrepError, PreparedPolygon};
use coverkit_core::rational::{self, rat, Rational};
use coverkit_core::scene::{ConfigurationRecord, DualRecord, Mode, SceneDocument, Verdict};
use coverkit_core::svg;
use std::collections::BTreeMap;
use std::path::Path;

const DEFAULT_SAMPLES: u64 = 10_000;
const DEFAULT_SEED: u64 = 1;

/// An exit code and the diagnostic printed before leaving.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    pub fn search(message: impl Into<String>) -> Self {
        Failure { code: 3, message: message.into() }
    }
}

impl From<PrepError> for Failure {
    fn from(e: PrepError) -> Self {
        match e {
            PrepError::NoValidDirection | PrepError::UnboundedQ => Failure::search(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::SearchExhausted { .. } => Failure::search(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<DualityError> for Failure {
    fn from(e: DualityError) -> Self {
        match e {
            DualityError::Construction(c) => c.into(),
            _ => Failure::search(e.to_string()),
        }
    }
}

impl From<ExtensionError> for Failure {
    fn from(e: ExtensionError) -> Self {
        match e {
            ExtensionError::Deficient { .. } => Failure::search(e.to_string()),
            _ => Failure::usage(e.to_string()),
        }
    }
}

impl From<HypergraphError> for Failure {
    fn from(e: HypergraphError) -> Self {
        match e {
            HypergraphError::TooLarge { .. } => Failure::usage(e.to_string()),
            HypergraphError::CertificateFailure(_) => Failure { code: 1, message: e.to_string() },
        }
    }
}

type Outcome = Result<(), Failure>;

fn parse_rational(flag: &str, s: &str) -> Result<Rational, Failure> {
    rational::parse(s).map_err(|e| Failure::usage(format!("--{flag}: {e}")))
}

/// Flag, then config file, then `fallback`.
fn rational_setting(flag: &str, given: Option<&String>, cfg: Option<&String>, fallback: Rational) -> Result<Rational, Failure> {
    match given.or(cfg) {
        Some(s) => parse_rational(flag, s),
        None => Ok(fallback),
    }
}

fn parse_region(s: &str) -> Result<Rect, Failure> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(Failure::usage(format!("--region expects x0,y0,x1,y1, got `{s}`")));
    }
    let v = parts.iter().map(|p| parse_rational("region", p)).collect::<Result<Vec<_>, _>>()?;
    Ok(Rect::new(v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()))
}

fn load(path: &Path) -> Result<SceneDocument, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    SceneDocument::from_json(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn save(doc: &SceneDocument, path: &Path) -> Outcome {
    std::fs::write(path, doc.to_json()).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn missing(stage: &str, command: &str) -> Failure {
    Failure::usage(format!("scene has no {stage}; run `coverkit {command}` first"))
}

pub fn build(a: BuildArgs, cfg: &Config) -> Outcome {
    let vertices = polygon::load(&a.polygon).map_err(Failure::usage)?;
    let prepared = PreparedPolygon::new(&vertices)?;
    let delta = rational_setting("delta", a.delta.as_ref(), cfg.delta.as_ref(), rat(1, 64))?;
    if delta <= rational::zero() {
        return Err(Failure::usage("--delta must be positive"));
    }
    let built = construction::build(&prepared, a.k, a.l, &delta)?;
    let mut doc = SceneDocument::new(&prepared);
    let c = &built.config;
    println!(
        "built T({},{}): {} homothets, {} a-wedges, {} b-wedges, delta {}",
        a.k,
        a.l,
        c.homothets.len(),
        c.a_wedges.len(),
        c.b_wedges.len(),
        rational::format(&delta)
    );
    doc.configuration = Some(ConfigurationRecord {
        k: a.k,
        l: a.l,
        delta: built.delta.clone(),
        assignment: built.templates.assignment,
        templates: built.templates.clone(),
        configuration: built.config,
    });
    save(&doc, &a.out)
}

pub fn dualize(a: DualizeArgs, cfg: &Config) -> Outcome {
    let mut doc = load(&a.scene)?;
    let record = doc.configuration.as_ref().ok_or_else(|| missing("configuration", "build"))?;
    if record.k != record.l {
        return Err(Failure::usage(format!("dualization needs k = l, scene has T({},{})", record.k, record.l)));
    }
    let m = record.k;
    let epsilon = a.epsilon.as_ref().or(cfg.epsilon.as_ref()).map(|s| parse_rational("epsilon", s)).transpose()?;
    let retries = a.max_retries.or(cfg.max_retries).unwrap_or(duality::MAX_RETRIES);
    let prepared = doc.prepared()?;
    let d = duality::dualize_with_retry(&prepared, m, &record.delta, epsilon.as_ref(), retries)?;
    let bands = duality::validate_bands(&d.scene, &prepared.height())?;
    for at in &d.attempts {
        match &at.error {
            Some(e) => println!("delta {}: {e}", rational::format(&at.delta)),
            None => println!("delta {}: ok", rational::format(&at.delta)),
        }
    }
    println!("dual scene: {} inflated homothets, {} points, m = {m}", d.scene.inflated.len(), d.scene.points.len());
    doc.configuration = Some(ConfigurationRecord {
        k: m,
        l: m,
        delta: d.built.delta.clone(),
        assignment: d.built.templates.assignment,
        templates: d.built.templates.clone(),
        configuration: d.built.config.clone(),
    });
    doc.dual = Some(DualRecord { scene: d.scene, bands, epsilon, attempts: d.attempts });
    doc.extension = None;
    save(&doc, a.out.as_deref().unwrap_or(&a.scene))
}

pub fn extend(a: ExtendArgs, cfg: &Config) -> Outcome {
    let mut doc = load(&a.scene)?;
    let dual = doc.dual.as_ref().ok_or_else(|| missing("dual scene", "dualize"))?;
    let fallback = dual.epsilon.clone().unwrap_or_else(|| rat(1, 10));
    let epsilon = rational_setting("epsilon", a.epsilon.as_ref(), cfg.epsilon.as_ref(), fallback)?;
    let params = ExtensionParams {
        epsilon,
        region: parse_region(&a.region)?,
        m: dual.scene.m,
        line_a: dual.bands.line_a.clone(),
        line_b: dual.bands.line_b.clone(),
        scale_free: a.scale_free,
    };
    let rounds = a.rounds.or(cfg.rounds).unwrap_or(extension::DEFAULT_ROUNDS);
    let cover = extension::extend(&dual.scene, doc.base(), &params, rounds)?;
    println!(
        "extension: {} translates, {} repair rounds, min_depth {} over {} cells",
        cover.translates.len(),
        cover.rounds,
        cover.report.min_depth,
        cover.report.cells_checked
    );
    doc.extension = Some(cover);
    save(&doc, a.out.as_deref().unwrap_or(&a.scene))
}

fn point_text(p: &Point2) -> String {
    format!("({}, {})", rational::format(&p.x), rational::format(&p.y))
}

fn sample_summary(r: &SampleReport) -> String {
    let mut s = format!("{} colorings, {} witnesses validated", r.colorings, r.validated);
    if let Some(c) = &r.first_failure {
        let bits: String = c.0.iter().map(|&red| if red { 'R' } else { 'B' }).collect();
        s.push_str(&format!(", no witness for {bits}"));
    }
    s
}

struct Check {
    passed: bool,
    summary: String,
}

pub fn verify(a: VerifyArgs, cfg: &Config) -> Outcome {
    let mut doc = load(&a.scene)?;
    let mode = a.mode.unwrap_or(match a.what {
        What::Statement1 => ModeArg::Random,
        _ => ModeArg::Exhaustive,
    });
    let samples = a.samples.or(cfg.samples).unwrap_or(DEFAULT_SAMPLES);
    let seed = a.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED);
    let cap = a.cap.or(cfg.cap).unwrap_or(hypergraph::DEFAULT_CAP);
    let mut params = BTreeMap::new();
    let sampled = matches!(mode, ModeArg::Certificate | ModeArg::Random);
    if sampled {
        params.insert("samples".to_string(), samples.to_string());
        params.insert("seed".to_string(), seed.to_string());
    }
    let base = doc.base().clone();
    let (what, check) = match a.what {
        What::Property1 => {
            let record = doc.configuration.as_ref().ok_or_else(|| missing("configuration", "build"))?;
            let c = &record.configuration;
            let h = IncidenceHypergraph::from_configuration(c, &base);
            params.insert("k".into(), c.k.to_string());
            params.insert("l".into(), c.l.to_string());
            let check = match mode {
                ModeArg::Exhaustive => {
                    params.insert("cap".into(), cap.to_string());
                    let r = hypergraph::check_all_colorings(&h, Rule::RedAOrBlueB, cap)?;
                    let summary = match r.counterexample {
                        None => format!("{} colorings, every one has a witness", r.colorings),
                        Some(mask) => format!("{} colorings, counterexample mask {mask:#b}", r.colorings),
                    };
                    Check { passed: r.passed(), summary }
                }
                ModeArg::Certificate | ModeArg::Random => {
                    let source = if matches!(mode, ModeArg::Certificate) {
                        WitnessSource::Certificate(c)
                    } else {
                        WitnessSource::Search
                    };
                    let r = hypergraph::sample_colorings(&h, Rule::RedAOrBlueB, source, samples, seed);
                    Check { passed: r.passed(), summary: sample_summary(&r) }
                }
            };
            ("property1", check)
        }
        What::Dual => {
            let record = doc.configuration.as_ref().ok_or_else(|| missing("configuration", "build"))?;
            let dual = doc.dual.as_ref().ok_or_else(|| missing("dual scene", "dualize"))?;
            let scene = &dual.scene;
            params.insert("m".into(), scene.m.to_string());
            let counts = duality::point_incidences(scene, &base);
            let recount = counts.iter().all(|s| s.len() == scene.m);
            let primal = IncidenceHypergraph::from_configuration(&record.configuration, &base);
            let h = IncidenceHypergraph::from_scene(scene, &base);
            let same = h.same_edges(&primal);
            let rule = Rule::Monochromatic { size: scene.m };
            let (ok, detail) = match mode {
                ModeArg::Exhaustive => {
                    params.insert("cap".into(), cap.to_string());
                    let r = hypergraph::check_all_colorings(&h, rule, cap)?;
                    let detail = match r.counterexample {
                        None => format!("{} colorings, every one has a witness", r.colorings),
                        Some(mask) => format!("{} colorings, counterexample mask {mask:#b}", r.colorings),
                    };
                    (r.passed(), detail)
                }
                ModeArg::Certificate | ModeArg::Random => {
                    let source = if matches!(mode, ModeArg::Certificate) {
                        WitnessSource::Certificate(&record.configuration)
                    } else {
                        WitnessSource::Search
                    };
                    let r = hypergraph::sample_colorings(&h, rule, source, samples, seed);
                    (r.passed(), sample_summary(&r))
                }
            };
            let summary = format!(
                "{} points each in exactly {} inflated homothets: {}; point and wedge hypergraphs equal: {}; {detail}",
                counts.len(),
                scene.m,
                if recount { "yes" } else { "no" },
                if same { "yes" } else { "no" }
            );
            ("dual", Check { passed: ok && recount && same, summary })
        }
        What::Depth => {
            let dual = doc.dual.as_ref().ok_or_else(|| missing("dual scene", "dualize"))?;
            let cover = doc.extension.as_ref().ok_or_else(|| missing("extension", "extend"))?;
            let region = match &a.region {
                Some(r) => parse_region(r)?,
                None => cover.params.region.clone(),
            };
            let m = a.m.unwrap_or(cover.params.m);
            params.insert("region".into(), format!("{},{},{},{}", rational::format(&region.x0), rational::format(&region.y0), rational::format(&region.x1), rational::format(&region.y1)));
            params.insert("m".into(), m.to_string());
            let mut polys: Vec<Vec<Point2>> = dual.scene.inflated.iter().map(|h| realize_homothet(h, &base)).collect();
            polys.extend(cover.translates.iter().map(|h| realize_homothet(h, &base)));
            let points: Vec<Point2> = dual.scene.points.iter().map(|p| p.q.clone()).collect();
            let avoid = extension::all_avoid(&cover.translates, &base, &points);
            let (depth, at, how) = match mode {
                ModeArg::Exhaustive | ModeArg::Certificate => {
                    let r = extension::verify_depth(&polys, &region, m)?;
                    (r.min_depth, r.witness_point, format!("{} cells", r.cells_checked))
                }
                ModeArg::Random => {
                    let (d, p) = extension::sample_min_depth(&polys, &region, samples as usize, seed);
                    (d, p, format!("{samples} sample points"))
                }
            };
            let summary = format!(
                "min_depth={depth} at {} over {how}; translates avoid every point: {}",
                point_text(&at),
                if avoid { "yes" } else { "no" }
            );
            ("depth", Check { passed: depth >= m && avoid, summary })
        }
        What::Statement1 => {
            if !matches!(mode, ModeArg::Random) {
                return Err(Failure::usage("statement1 is checked on random queries only; use --mode random"));
            }
            let r = duality::check_statement1(&base, samples as usize, seed);
            let mut summary = format!("{} queries, {} mismatches, {} with both sides true", r.samples, r.mismatches, r.positives);
            if let Some(q) = &r.first_mismatch {
                summary.push_str(&format!("; first mismatch {q}"));
            }
            ("statement1", Check { passed: r.mismatches == 0, summary })
        }
        What::Bands => {
            let dual = doc.dual.as_ref().ok_or_else(|| missing("dual scene", "dualize"))?;
            let prepared = doc.prepared()?;
            let check = match duality::validate_bands(&dual.scene, &prepared.height()) {
                Ok(b) => Check {
                    passed: true,
                    summary: format!(
                        "line_a y={}, line_b y={}, max deviation {}, gap error {}, delta {}",
                        rational::format(&b.line_a),
                        rational::format(&b.line_b),
                        rational::format(&b.max_deviation),
                        rational::format(&b.gap_error),
                        rational::format(&dual.scene.delta)
                    ),
                },
                Err(e) => Check { passed: false, summary: e.to_string() },
            };
            ("bands", check)
        }
        What::Scale => {
            let dual = doc.dual.as_ref().ok_or_else(|| missing("dual scene", "dualize"))?;
            let fallback = dual.epsilon.clone().unwrap_or_else(|| rat(1, 10));
            let eps = rational_setting("epsilon", a.epsilon.as_ref(), cfg.epsilon.as_ref(), fallback)?;
            params.insert("epsilon".into(), rational::format(&eps));
            let mut scales: Vec<&Rational> = dual.scene.inflated.iter().map(|h| &h.scale).collect();
            if let Some(cover) = &doc.extension {
                scales.extend(cover.translates.iter().map(|h| &h.scale));
            }
            let lo = rational::one() - &eps;
            let hi = rational::one() + &eps;
            let bad = scales.iter().filter(|s| ***s < lo || ***s > hi).count();
            let summary = format!(
                "{} homothets, {bad} with scale outside [{}, {}]",
                scales.len(),
                rational::format(&lo),
                rational::format(&hi)
            );
            ("scale", Check { passed: bad == 0, summary })
        }
    };
    let mode = match mode {
        ModeArg::Exhaustive => Mode::Exhaustive,
        ModeArg::Certificate => Mode::Certificate,
        ModeArg::Random => Mode::Random,
    };
    let tag = if check.passed { "PASS" } else { "FAIL" };
    println!("{tag} {what}: {}", check.summary);
    doc.verdicts.push(Verdict {
        what: what.to_string(),
        mode,
        params,
        passed: check.passed,
        summary: check.summary,
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
    });
    save(&doc, a.out.as_deref().unwrap_or(&a.scene))?;
    if check.passed {
        Ok(())
    } else {
        Err(Failure { code: 1, message: String::new() })
    }
}

pub fn render(a: RenderArgs) -> Outcome {
    let doc = load(&a.scene)?;
    let base = doc.base();
    let text = match a.view {
        View::Polygon => svg::render_polygon(base, &doc.normalization.q, a.labels),
        View::Config => {
            let record = doc.configuration.as_ref().ok_or_else(|| missing("configuration", "build"))?;
            svg::render_configuration(&record.configuration, base, a.labels)
        }
        View::Dual => {
            let dual = doc.dual.as_ref().ok_or_else(|| missing("dual scene", "dualize"))?;
            svg::render_dual(&dual.scene, Some(&dual.bands), base, a.labels)
        }
        View::Extension => {
            let dual = doc.dual.as_ref().ok_or_else(|| missing("dual scene", "dualize"))?;
            let cover = doc.extension.as_ref().ok_or_else(|| missing("extension", "extend"))?;
            svg::render_extension(cover, &dual.scene, Some(&dual.bands), base, a.labels)
        }
    };
    std::fs::write(&a.out, text).map_err(|e| Failure::usage(format!("{}: {e}", a.out.display())))
}
