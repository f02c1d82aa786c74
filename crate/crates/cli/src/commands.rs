use std::fs::File;
use std::io::BufReader;

use anyhow::{anyhow, bail, Context, Result};
use coarse_l1::analysis::{
    certificate_check, check_separation, contract_profile, exhaust, DistortionProfile,
    ExhaustOutcome, ExhaustParams, MassLedger,
};
use coarse_l1::decomposition::{
    annulus_decompose, kpr_decompose, kpr_diameter_bound, parameter_search,
    satisfies_mass_condition, satisfies_size_condition, AnnulusParams, CutParameters,
    Decomposition, Offsets, ResidueConvention, Variant,
};
use coarse_l1::embedding::{
    default_i_max, embed_scale, multiscale_embed, read_dump, sample_one, write_dump, EmbedConfig,
    PaddingEstimate,
};
use coarse_l1::graphcore::{
    generate as generate_graph, induced_diameter, metric_of, parse_graph, write_edge_list, Family,
    FamilySpec, Graph, MeasureFile, VertexMeasure,
};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{emit, read_input, to_json, RunConfig};
use crate::{
    CertifyArgs, DecomposeArgs, EmbedArgs, FamilyName, GenerateArgs, ParamsArgs, VariantArg,
    VerifyArgs,
};

pub enum Outcome {
    Ok,
    /// An exact invariant failed.
    Violation,
}

fn load_graph(path: &std::path::Path) -> Result<Graph> {
    parse_graph(&read_input(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn need<T>(v: Option<T>, flag: &str, family: &str) -> Result<T> {
    v.ok_or_else(|| anyhow!("--{flag} is required for {family}"))
}

pub fn generate(a: GenerateArgs) -> Result<Outcome> {
    let name = match a.family {
        FamilyName::Path => "path",
        FamilyName::Cycle => "cycle",
        FamilyName::Grid2d => "grid2d",
        FamilyName::RandomTree => "random_tree",
        FamilyName::SeriesParallel => "series_parallel",
        FamilyName::Hypercube => "hypercube",
        FamilyName::RandomRegular => "random_regular",
    };
    let family = match a.family {
        FamilyName::Path => Family::Path {
            n: need(a.n, "n", name)?,
        },
        FamilyName::Cycle => Family::Cycle {
            n: need(a.n, "n", name)?,
        },
        FamilyName::Grid2d => Family::Grid2d {
            rows: need(a.rows, "rows", name)?,
            cols: need(a.cols, "cols", name)?,
        },
        FamilyName::RandomTree => Family::RandomTree {
            n: need(a.n, "n", name)?,
        },
        FamilyName::SeriesParallel => Family::SeriesParallel {
            n: need(a.n, "n", name)?,
        },
        FamilyName::Hypercube => Family::Hypercube {
            dim: need(a.dim, "dim", name)?,
        },
        FamilyName::RandomRegular => Family::RandomRegular {
            n: need(a.n, "n", name)?,
            degree: need(a.degree, "degree", name)?,
        },
    };
    let seed = match (family.is_random(), a.seed) {
        (true, None) => bail!("--seed is required for the random family {name}"),
        (_, seed) => seed.unwrap_or(0),
    };
    let g = generate_graph(&FamilySpec::new(family, seed))?;
    emit(a.out.as_deref(), &write_edge_list(&g))?;
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct DecomposeSummary {
    components: usize,
    cut_vertices: usize,
    max_component_diameter: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    diameter_bound: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    surviving_mass: Option<f64>,
    partition_valid: bool,
}

#[derive(Serialize)]
struct DecomposeReport {
    config: RunConfig,
    decomposition: Decomposition,
    summary: DecomposeSummary,
}

pub fn decompose(a: DecomposeArgs) -> Result<Outcome> {
    let g = load_graph(&a.graph)?;
    let convention: ResidueConvention = a.convention.into();
    let mut cfg = RunConfig::new("decompose");
    cfg.graph = Some(a.graph.clone());
    cfg.out = a.out.clone();
    let mut surviving_mass = None;
    let dec = match a.variant {
        VariantArg::Residue => {
            let delta = a
                .delta
                .ok_or_else(|| anyhow!("--delta is required for the residue variant"))?;
            let offsets = match (&a.offsets, a.seed) {
                (Some(values), _) => {
                    if a.rounds.is_some_and(|r| r != values.len()) {
                        bail!("--rounds disagrees with the number of --offsets");
                    }
                    Offsets::new(delta, values.clone())?
                }
                (None, Some(seed)) => {
                    let rounds = a
                        .rounds
                        .ok_or_else(|| anyhow!("--rounds is required with --seed"))?;
                    sample_one(&g, delta, rounds, seed, 0, convention)?
                        .0
                        .offsets
                }
                (None, None) => bail!("either --seed or --offsets is required"),
            };
            cfg.variant = Some(Variant::Residue);
            cfg.convention = Some(convention);
            cfg.delta = Some(delta);
            cfg.seed = a.seed;
            cfg.rounds = Some(offsets.rounds());
            cfg.offsets = Some(offsets.values().to_vec());
            kpr_decompose(&g, &offsets, convention)
        }
        VariantArg::Annulus => {
            let (Some(s), Some(t)) = (a.s, a.t) else {
                bail!("the annulus variant requires --s and --t");
            };
            if a.offsets.is_some() || a.seed.is_some() {
                bail!("the annulus variant chooses its own offsets; drop --seed/--offsets");
            }
            let params = AnnulusParams::new(s, t)?;
            if a.delta.is_some_and(|d| d != params.delta()) {
                bail!(
                    "--delta must equal t + 2s = {} for the annulus variant",
                    params.delta()
                );
            }
            let rounds = a.rounds.ok_or_else(|| anyhow!("--rounds is required"))?;
            let nu = match &a.measure {
                None => VertexMeasure::uniform(g.n()),
                Some(path) => {
                    let file: MeasureFile = serde_json::from_str(&read_input(path)?)?;
                    file.into_vertex_measure(&metric_of(&g)?)?
                }
            };
            cfg.variant = Some(Variant::Annulus);
            cfg.measure = a.measure.clone();
            cfg.s = Some(s);
            cfg.t = Some(t);
            cfg.delta = Some(params.delta());
            cfg.rounds = Some(rounds);
            let dec = annulus_decompose(&g, &nu, params, rounds)?;
            surviving_mass = Some(dec.surviving_mass(&nu));
            dec
        }
    };
    let partition_valid = dec.validate(&g).is_ok();
    let summary = DecomposeSummary {
        components: dec.components.len(),
        cut_vertices: dec.cut_vertices().len(),
        max_component_diameter: dec
            .components
            .iter()
            .map(|c| induced_diameter(&g, &c.vertices))
            .max()
            .unwrap_or(0),
        diameter_bound: kpr_diameter_bound(dec.delta, dec.rounds as u32).ok(),
        surviving_mass,
        partition_valid,
    };
    emit(
        a.out.as_deref(),
        &to_json(&DecomposeReport {
            config: cfg,
            decomposition: dec,
            summary,
        })?,
    )?;
    Ok(if partition_valid {
        Outcome::Ok
    } else {
        Outcome::Violation
    })
}

#[derive(Serialize)]
struct ScaleSummary {
    index: u32,
    delta: u32,
    weight: f64,
    padding: PaddingEstimate,
    magnitude_violations: usize,
    lipschitz_violations: usize,
}

#[derive(Serialize)]
struct EmbedReport {
    config: RunConfig,
    n: usize,
    diameter: u32,
    embed: EmbedConfig,
    scales: Vec<ScaleSummary>,
    dump_sha256: String,
}

/// The fields `verify` needs back from an embed report.
#[derive(Deserialize)]
struct EmbedReportIn {
    embed: EmbedConfig,
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn embed(a: EmbedArgs) -> Result<Outcome> {
    let g = load_graph(&a.graph)?;
    g.require_connected()?;
    let diameter = g.diameter();
    let embed_cfg = EmbedConfig {
        rounds: a.rounds,
        i_max: a.i_max.unwrap_or_else(|| default_i_max(diameter)),
        samples: a.samples,
        seed: a.seed,
        base: a.base,
        convention: a.convention.into(),
    };
    let point = multiscale_embed(&g, &embed_cfg)?;
    let mut dump = Vec::new();
    write_dump(&point, &mut dump)?;
    let dump = String::from_utf8(dump)?;
    emit(Some(&a.out), &dump)?;

    let scales = point
        .blocks()
        .iter()
        .map(|b| {
            Ok(ScaleSummary {
                index: b.index(),
                delta: b.delta(),
                weight: b.weight(),
                padding: PaddingEstimate::from_block(b, a.rounds)?,
                magnitude_violations: b.magnitude_violations().len(),
                lipschitz_violations: b.lipschitz_violations(&g).len(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut cfg = RunConfig::new("embed");
    cfg.graph = Some(a.graph);
    cfg.out = Some(a.out);
    cfg.report = a.report.clone();
    cfg.seed = Some(a.seed);
    cfg.rounds = Some(a.rounds);
    cfg.i_max = Some(embed_cfg.i_max);
    cfg.samples = Some(a.samples);
    cfg.base = Some(a.base);
    cfg.convention = Some(embed_cfg.convention);
    let report = EmbedReport {
        config: cfg,
        n: g.n(),
        diameter,
        embed: embed_cfg,
        scales,
        dump_sha256: hex(&Sha256::digest(dump.as_bytes())),
    };
    emit(a.report.as_deref(), &to_json(&report)?)?;
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct Check {
    name: &'static str,
    checked: bool,
    violations: usize,
    /// Whether this check takes part in the exit status.
    counted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

impl Check {
    fn new(name: &'static str, violations: usize, detail: Option<String>) -> Self {
        Self {
            name,
            checked: true,
            violations,
            counted: true,
            detail,
        }
    }

    fn skipped(name: &'static str, why: &str) -> Self {
        Self {
            name,
            checked: false,
            violations: 0,
            counted: false,
            detail: Some(why.into()),
        }
    }
}

#[derive(Serialize)]
struct VerifyReport {
    config: RunConfig,
    passed: bool,
    checks: Vec<Check>,
    profile: DistortionProfile,
}

pub fn verify(a: VerifyArgs) -> Result<Outcome> {
    let g = load_graph(&a.graph)?;
    let file =
        File::open(&a.embedding).with_context(|| format!("opening {}", a.embedding.display()))?;
    let dump = read_dump(BufReader::new(file))
        .with_context(|| format!("reading {}", a.embedding.display()))?;
    if dump.n != g.n() {
        bail!(
            "the dump covers {} vertices but the graph has {}",
            dump.n,
            g.n()
        );
    }
    let m = metric_of(&g)?;
    let (point, defects) = dump.decode();
    let mut checks = vec![Check::new(
        "coordinates",
        defects.len(),
        defects.first().map(|d| {
            format!(
                "vertex {} scale {} sample {}: {}",
                d.vertex, d.scale, d.sample, d.reason
            )
        }),
    )];

    let lip = point.lipschitz_violations(&g);
    checks.push(Check::new(
        "lipschitz",
        lip.len(),
        lip.first().map(|(i, v)| {
            format!(
                "scale {i}, edge ({}, {}), sample {}: gap {}",
                v.u, v.v, v.sample, v.gap
            )
        }),
    ));

    let profile = contract_profile(&point, &m)?;
    let upper = profile.upper_violations();
    checks.push(Check::new(
        "upper_bound_3d",
        upper.len(),
        upper
            .first()
            .map(|b| format!("t = {}: rho2 = {}", b.t, b.rho2)),
    ));

    let mut cfg = RunConfig::new("verify");
    cfg.graph = Some(a.graph.clone());
    cfg.embedding = Some(a.embedding.clone());
    cfg.report = a.report.clone();
    cfg.out = a.out.clone();

    match &a.report {
        None => {
            checks.push(Check::skipped("magnitude", "needs --report"));
            checks.push(Check::skipped("regeneration", "needs --report"));
            checks.push(Check::skipped("partition", "needs --report"));
        }
        Some(path) => {
            let report: EmbedReportIn = serde_json::from_str(&read_input(path)?)
                .with_context(|| format!("parsing {}", path.display()))?;
            let e = report.embed;
            if e.i_max != dump.i_max || e.samples != dump.samples {
                bail!(
                    "report describes {} scales × {} samples, the dump {} × {}",
                    e.i_max,
                    e.samples,
                    dump.i_max,
                    dump.samples
                );
            }
            let mut magnitude = 0;
            let mut mismatched = 0;
            let mut partition = 0;
            let mut first_partition = None;
            for (i, dumped) in (1..=e.i_max).zip(point.blocks()) {
                let raw = embed_scale(&g, i, e.rounds, e.samples, e.seed, e.convention)?;
                magnitude += raw.magnitude_violations().len();
                let centered = raw.centered(e.base);
                mismatched += (0..g.n())
                    .filter(|&v| centered.row(v) != dumped.row(v))
                    .count();
                for k in 0..e.samples as u64 {
                    let (_, dec) = sample_one(&g, 1 << i, e.rounds, e.seed, k, e.convention)?;
                    if let Err(msg) = dec.validate(&g) {
                        partition += 1;
                        first_partition.get_or_insert(format!("scale {i}, sample {k}: {msg}"));
                    }
                }
            }
            let mut mag = Check::new("magnitude", magnitude, None);
            mag.counted = a.strict_magnitude;
            checks.push(mag);
            checks.push(Check::new(
                "regeneration",
                mismatched,
                (mismatched > 0).then(|| "rows differ from the regenerated embedding".to_string()),
            ));
            checks.push(Check::new("partition", partition, first_partition));
            if point.base() != e.base {
                checks.push(Check::new(
                    "base",
                    1,
                    Some(format!(
                        "zero row at {}, report says {}",
                        point.base(),
                        e.base
                    )),
                ));
            }
        }
    }

    let passed = checks.iter().all(|c| !c.counted || c.violations == 0);
    if let Some(csv) = &a.csv {
        emit(Some(csv), &profile.to_csv())?;
    }
    emit(
        a.out.as_deref(),
        &to_json(&VerifyReport {
            config: cfg,
            passed,
            checks,
            profile,
        })?,
    )?;
    Ok(if passed {
        Outcome::Ok
    } else {
        Outcome::Violation
    })
}

#[derive(Serialize)]
struct CertifyReport {
    config: RunConfig,
    outcome: ExhaustOutcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    separation_holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ledger: Option<MassLedger>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate_verified: Option<bool>,
}

pub fn certify(a: CertifyArgs) -> Result<Outcome> {
    let g = load_graph(&a.graph)?;
    let m = metric_of(&g)?;
    let file: MeasureFile = serde_json::from_str(&read_input(&a.measure)?)
        .with_context(|| format!("parsing {}", a.measure.display()))?;
    let nu = file.into_vertex_measure(&m)?;
    let params = ExhaustParams {
        s: a.s,
        threshold: a.threshold,
        phi: a.phi,
        strategy: a.strategy.into(),
    };
    let outcome = exhaust(&m, &nu, params)?;
    let (mut separation_holds, mut ledger, mut certificate_verified) = (None, None, None);
    match &outcome {
        ExhaustOutcome::Trace(t) => {
            separation_holds = Some(check_separation(t, &m, a.s));
            ledger = Some(t.ledger(&nu));
        }
        ExhaustOutcome::Certificate(c) => {
            certificate_verified = Some(certificate_check(c, &m, &nu, a.s, a.threshold));
        }
    }
    let ok = separation_holds.unwrap_or(true) && certificate_verified.unwrap_or(true);
    let mut cfg = RunConfig::new("certify");
    cfg.graph = Some(a.graph);
    cfg.measure = Some(a.measure);
    cfg.out = a.out.clone();
    cfg.s = Some(a.s);
    cfg.threshold = Some(a.threshold);
    cfg.phi = Some(a.phi);
    cfg.strategy = Some(params.strategy);
    emit(
        a.out.as_deref(),
        &to_json(&CertifyReport {
            config: cfg,
            outcome,
            separation_holds,
            ledger,
            certificate_verified,
        })?,
    )?;
    Ok(if ok { Outcome::Ok } else { Outcome::Violation })
}

#[derive(Serialize)]
struct ParamsReport {
    config: RunConfig,
    parameters: CutParameters,
    surviving_mass_condition: bool,
    size_condition: bool,
}

pub fn params(a: ParamsArgs) -> Result<Outcome> {
    let p = parameter_search(a.d, a.r)?;
    let mass_ok = satisfies_mass_condition(a.d, a.r, p.s, p.t)?;
    let size_ok = satisfies_size_condition(a.r, p.s, p.t, p.n);
    let mut cfg = RunConfig::new("params");
    cfg.d = Some(a.d);
    cfg.r = Some(a.r);
    cfg.out = a.out.clone();
    emit(
        a.out.as_deref(),
        &to_json(&ParamsReport {
            config: cfg,
            parameters: p,
            surviving_mass_condition: mass_ok,
            size_condition: size_ok,
        })?,
    )?;
    Ok(if mass_ok && size_ok {
        Outcome::Ok
    } else {
        Outcome::Violation
    })
}
