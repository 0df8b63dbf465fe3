//! One function per subcommand. Each writes its outputs, then a manifest
//! next to every output.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use bosim::chip::{layout_to_fabrication, ChipGeometry, FabricationSpec, TransmissivityMapping};
use bosim::decomposition::{
    compose, decompose_with, write_layout_csv, GaugePinning, TablePrecision,
};
use bosim::linalg::{gate_fidelity, haar_sample, similarity};
use bosim::reconstruction::{
    reconstruct_best_with, single_photon_similarity, synthesize_data, two_photon_similarity,
    visibility_similarity, MeasurementData, NoiseModel, ReconstructionOptions,
};
use bosim::sampler::{
    classical_distribution, full_distribution, sample_outcomes,
    three_photon_partial_distribution_with, visibility_tensor, Model, OutputDistribution,
    PhotonRoles, Restriction, SamplerOptions, VisibilityTensor,
};
use bosim::{fixtures, Error, FockState, UnitaryMatrix};
use serde::Serialize;

use crate::args::*;
use crate::io::{json_string, read_json, read_layout, read_unitary, write_text, Format};
use crate::manifest::RunManifest;

const SUM_TOLERANCE: f64 = 1e-9;

fn finish(
    out: &Path,
    text: &str,
    command: &str,
    params: &impl Serialize,
    seed: Option<u64>,
    inputs: &[&Path],
) -> Result<()> {
    // digest inputs before writing, in case an output overwrites one
    let manifest = RunManifest::new(command, params, seed, inputs)?;
    write_text(out, text)?;
    manifest.write_for(out)?;
    log::info!("wrote {}", out.display());
    Ok(())
}

pub fn haar(a: &HaarArgs) -> Result<()> {
    let u = haar_sample(a.m, a.seed)?;
    finish(&a.out, &json_string(&u)?, "haar", a, Some(a.seed), &[])
}

pub fn decompose(a: &DecomposeArgs) -> Result<()> {
    let u = read_unitary(&a.unitary, a.repair)?;
    let pinning = match a.pinning {
        Pinning::Minimal => GaugePinning::Minimal,
        Pinning::Full => GaugePinning::Full,
    };
    let layout = decompose_with(&u, pinning)?;
    let text = match Format::resolve(a.format, &a.out) {
        Format::Json => json_string(&layout)?,
        Format::Csv => {
            let precision = if a.display_precision {
                TablePrecision::Display
            } else {
                TablePrecision::Full
            };
            let mut buf = Vec::new();
            write_layout_csv(&layout, &mut buf, precision)?;
            String::from_utf8(buf)?
        }
    };
    finish(&a.out, &text, "decompose", a, None, &[&a.unitary])
}

pub fn compose_cmd(a: &ComposeArgs) -> Result<()> {
    let u = compose(&read_layout(&a.layout)?)?;
    finish(&a.out, &json_string(&u)?, "compose", a, None, &[&a.layout])
}

fn resolve_model(a: &SimulateArgs) -> Result<Model> {
    Ok(match (a.classical, a.partial) {
        (true, Some(_)) => bail!(Error::Unsupported(
            "--classical and --partial are exclusive".into()
        )),
        (true, None) => Model::Classical,
        (false, Some(r)) => format!("partial:{r}").parse()?,
        (false, None) => a.model.parse()?,
    })
}

/// Pair on the outer occupied modes, odd photon in the middle one.
fn roles_for(input: &FockState) -> Result<PhotonRoles> {
    let modes = input.mode_list();
    if modes.len() != 3 || !input.is_collision_free() {
        bail!(Error::Unsupported(format!(
            "the partial model needs three photons in distinct modes, got {input}"
        )));
    }
    Ok(PhotonRoles {
        pair: (modes[0], modes[2]),
        odd: modes[1],
    })
}

pub fn simulate(a: &SimulateArgs) -> Result<()> {
    let u = read_unitary(&a.unitary, a.repair)?;
    let input: FockState = a.input.parse()?;
    let restrict = if a.collision_free {
        Restriction::CollisionFree
    } else {
        Restriction::All
    };
    let dist = match resolve_model(a)? {
        Model::Quantum => full_distribution(&u, &input, restrict)?,
        Model::Classical => classical_distribution(&u, &input, restrict)?,
        Model::Partial { r } => three_photon_partial_distribution_with(
            &u,
            roles_for(&input)?,
            r,
            &SamplerOptions::default(),
        )?,
    };
    check_sum(&dist)?;
    let text = match Format::resolve(a.format, &a.out) {
        Format::Json => json_string(&dist)?,
        Format::Csv => {
            let mut buf = Vec::new();
            dist.write_csv(&mut buf)?;
            String::from_utf8(buf)?
        }
    };
    println!(
        "outcomes = {}, raw total = {:.12}",
        dist.outcomes.len(),
        dist.raw_total()
    );
    finish(&a.out, &text, "simulate", a, None, &[&a.unitary])
}

fn check_sum(d: &OutputDistribution) -> Result<()> {
    let total = if d.restriction == Restriction::All && !matches!(d.model, Model::Partial { .. }) {
        d.raw_total()
    } else {
        d.conditional().iter().sum()
    };
    if (total - 1.0).abs() > SUM_TOLERANCE {
        bail!(Error::InvalidDistribution(format!(
            "probabilities sum to {total}"
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct Count {
    state: FockState,
    count: usize,
    frequency: f64,
}

#[derive(Serialize)]
struct SampleFile {
    input: FockState,
    model: Model,
    shots: usize,
    seed: u64,
    counts: Vec<Count>,
}

pub fn sample(a: &SampleArgs) -> Result<()> {
    let dist: OutputDistribution = read_json(&a.distribution)?;
    let dist = if dist.restriction == Restriction::CollisionFree {
        dist.conditioned()
    } else {
        dist
    };
    let draws = sample_outcomes(&dist, a.shots, a.seed)?;
    let mut counts: Vec<usize> = vec![0; dist.outcomes.len()];
    for s in &draws {
        let k = dist
            .outcomes
            .binary_search_by(|o| o.state.cmp(s))
            .expect("samples come from the outcome list");
        counts[k] += 1;
    }
    let counts: Vec<Count> = dist
        .outcomes
        .iter()
        .zip(counts)
        .map(|(o, count)| Count {
            state: o.state.clone(),
            count,
            frequency: count as f64 / a.shots.max(1) as f64,
        })
        .collect();
    let text = match Format::resolve(a.format, &a.out) {
        Format::Json => json_string(&SampleFile {
            input: dist.input.clone(),
            model: dist.model,
            shots: a.shots,
            seed: a.seed,
            counts,
        })?,
        Format::Csv => {
            let mut s = String::from("state,count,frequency\n");
            for c in &counts {
                writeln!(s, "{},{},{}", c.state, c.count, c.frequency)?;
            }
            s
        }
    };
    finish(&a.out, &text, "sample", a, Some(a.seed), &[&a.distribution])
}

pub fn visibilities(a: &VisibilitiesArgs) -> Result<()> {
    let u = read_unitary(&a.unitary, a.repair)?;
    let t = visibility_tensor(&u, a.q)?;
    let text = match Format::resolve(a.format, &a.out) {
        Format::Json => json_string(&t)?,
        Format::Csv => {
            let mut s = String::from("i,j,K,L,v\n");
            for (i, j, k, l, v) in t.entries() {
                let v = v.map(|v| v.to_string()).unwrap_or_default();
                writeln!(s, "{},{},{},{},{v}", i + 1, j + 1, k + 1, l + 1)?;
            }
            s
        }
    };
    println!(
        "entries = {}, defined = {}",
        t.entries().len(),
        t.defined_count()
    );
    finish(&a.out, &text, "visibilities", a, None, &[&a.unitary])
}

fn parse_noise(s: &str) -> Result<NoiseModel> {
    let s = s.trim();
    if s == "none" {
        return Ok(NoiseModel::None);
    }
    let (kind, value) = s.split_once(':').unwrap_or((s, ""));
    let bad = || Error::Parse {
        line: 1,
        message: format!(
            "noise {s:?}: expected none, gaussian:<relative sigma> or poisson:<shots>"
        ),
    };
    Ok(match kind {
        "gaussian" => NoiseModel::Gaussian {
            relative_sigma: value.parse().map_err(|_| bad())?,
        },
        "poisson" => NoiseModel::Poisson {
            shots: value.parse().map_err(|_| bad())?,
        },
        _ => bail!(bad()),
    })
}

pub fn synthesize(a: &SynthesizeArgs) -> Result<()> {
    let u = read_unitary(&a.unitary, a.repair)?;
    let data = synthesize_data(&u, a.q, parse_noise(&a.noise)?, a.seed)?;
    finish(
        &a.out,
        &json_string(&data)?,
        "synthesize",
        a,
        Some(a.seed),
        &[&a.unitary],
    )
}

pub fn reconstruct(a: &ReconstructArgs) -> Result<()> {
    let data: MeasurementData = read_json(&a.data)?;
    let reference = a
        .reference
        .as_deref()
        .map(|p| read_unitary(p, a.repair))
        .transpose()?;
    let opts = ReconstructionOptions {
        reference,
        ..Default::default()
    };
    let r = reconstruct_best_with(&data, &opts)?;
    println!(
        "chi2 = {:.6} (initial {:.6}), reference = ({}, {}), iterations = {}",
        r.chi2, r.initial_chi2, r.reference_choice.0, r.reference_choice.1, r.iterations
    );
    let mut inputs: Vec<&Path> = vec![&a.data];
    inputs.extend(a.reference.as_deref());
    if let Some(report) = &a.report {
        finish(report, &json_string(&r)?, "reconstruct", a, None, &inputs)?;
    }
    finish(
        &a.out,
        &json_string(&r.unitary)?,
        "reconstruct",
        a,
        None,
        &inputs,
    )
}

fn fabrication_csv(spec: &FabricationSpec) -> Result<String> {
    let mut s = String::from("i,t,T,angle_rad,d_alpha_mm,d_beta_mm\n");
    for e in &spec.elements {
        writeln!(
            s,
            "{},{},{},{},{},{}",
            e.index, e.t, e.coupled_power, e.angle, e.deformation_alpha, e.deformation_beta
        )?;
    }
    Ok(s)
}

pub fn chip(a: &ChipArgs) -> Result<()> {
    let layout = read_layout(&a.layout)?;
    let geometry: ChipGeometry = match &a.geometry {
        Some(p) => read_json(p)?,
        None => ChipGeometry::default(),
    };
    let mapping = match a.mapping {
        Mapping::Cross => TransmissivityMapping::Cross,
        Mapping::Bar => TransmissivityMapping::Bar,
    };
    let spec = layout_to_fabrication(&layout, &geometry, mapping)?;
    print!("{}", spec.to_table());
    let text = match Format::resolve(a.format, &a.out) {
        Format::Json => json_string(&spec)?,
        Format::Csv => fabrication_csv(&spec)?,
    };
    let mut inputs: Vec<&Path> = vec![&a.layout];
    inputs.extend(a.geometry.as_deref());
    finish(&a.out, &text, "chip", a, None, &inputs)
}

enum Artifact {
    Unitary(UnitaryMatrix),
    Distribution(OutputDistribution),
    Visibilities(VisibilityTensor),
    Data(MeasurementData),
}

impl Artifact {
    fn kind(&self) -> &'static str {
        match self {
            Artifact::Unitary(_) => "unitary",
            Artifact::Distribution(_) => "distribution",
            Artifact::Visibilities(_) => "visibilities",
            Artifact::Data(_) => "data",
        }
    }
}

fn load_artifact(path: &Path, repair: bool) -> Result<Option<Artifact>> {
    let value: serde_json::Value = read_json(path)?;
    let has = |k: &str| value.get(k).is_some();
    Ok(Some(if has("rows") && has("entries") {
        Artifact::Unitary(read_unitary(path, repair)?)
    } else if has("outcomes") {
        Artifact::Distribution(
            serde_json::from_value(value).with_context(|| format!("parsing {}", path.display()))?,
        )
    } else if has("single_photon") {
        Artifact::Data(
            serde_json::from_value(value).with_context(|| format!("parsing {}", path.display()))?,
        )
    } else if has("m") && has("entries") {
        Artifact::Visibilities(
            serde_json::from_value(value).with_context(|| format!("parsing {}", path.display()))?,
        )
    } else {
        return Ok(None);
    }))
}

fn distribution_similarity(a: &OutputDistribution, b: &OutputDistribution) -> Result<f64> {
    if a.modes() != b.modes() {
        bail!(Error::DimensionMismatch {
            expected: a.modes(),
            found: b.modes()
        });
    }
    let same_states = a.outcomes.len() == b.outcomes.len()
        && a.outcomes
            .iter()
            .zip(&b.outcomes)
            .all(|(x, y)| x.state == y.state);
    if !same_states {
        bail!(Error::InconsistentData(
            "distributions cover different outcomes".into()
        ));
    }
    Ok(similarity(&a.conditional(), &b.conditional())?)
}

/// Metrics defined for a pair of artifacts, as `(name, value)`.
fn compare(a: &Artifact, b: &Artifact) -> Result<Vec<(&'static str, f64)>> {
    use Artifact::*;
    Ok(match (a, b) {
        (Unitary(x), Unitary(y)) => {
            if x.dim() != y.dim() {
                bail!(Error::DimensionMismatch {
                    expected: x.dim(),
                    found: y.dim()
                });
            }
            vec![("gate_fidelity", gate_fidelity(x, y)?)]
        }
        (Distribution(x), Distribution(y)) => vec![("similarity", distribution_similarity(x, y)?)],
        (Visibilities(x), Visibilities(y)) => {
            vec![("visibility_similarity", visibility_similarity(x, y)?)]
        }
        (Data(d), Unitary(u)) | (Unitary(u), Data(d)) => vec![
            ("single_photon_similarity", single_photon_similarity(d, u)?),
            ("two_photon_similarity", two_photon_similarity(d, u)?),
        ],
        _ => vec![],
    })
}

fn collect_paths(paths: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut out = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(p)
                .with_context(|| format!("listing {}", p.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| {
                    let name = f.file_name().and_then(|n| n.to_str()).unwrap_or("");
                    name.ends_with(".json") && !name.ends_with(".manifest.json")
                })
                .collect();
            found.sort();
            out.extend(found);
        } else {
            out.push(p.clone());
        }
    }
    Ok(out)
}

pub fn report(a: &ReportArgs) -> Result<()> {
    let paths = collect_paths(&a.paths)?;
    let mut artifacts = Vec::new();
    for p in &paths {
        match load_artifact(p, a.repair)? {
            Some(x) => artifacts.push((p, x)),
            None => log::warn!(
                "skipping {}: not a unitary, distribution, visibility or data file",
                p.display()
            ),
        }
    }
    let mut table = String::from("a,b,kind,metric,value\n");
    let mut rows = 0;
    for (n, (pa, x)) in artifacts.iter().enumerate() {
        for (pb, y) in &artifacts[n + 1..] {
            for (metric, value) in compare(x, y)
                .with_context(|| format!("comparing {} with {}", pa.display(), pb.display()))?
            {
                let kind = if x.kind() == y.kind() {
                    x.kind().to_owned()
                } else {
                    format!("{}/{}", x.kind(), y.kind())
                };
                writeln!(
                    table,
                    "{},{},{kind},{metric},{value:.6}",
                    pa.display(),
                    pb.display()
                )?;
                rows += 1;
            }
        }
    }
    if rows == 0 {
        bail!(Error::InconsistentData(
            "no comparable pair of files".into()
        ));
    }
    print!("{table}");
    if let Some(out) = &a.out {
        let inputs: Vec<&Path> = paths.iter().map(PathBuf::as_path).collect();
        finish(out, &table, "report", a, None, &inputs)?;
    }
    Ok(())
}

pub fn export_fixtures(a: &ExportArgs) -> Result<()> {
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let files = [
        ("sampled_u.json", fixtures::SAMPLED_U_JSON),
        ("reconstructed_u.json", fixtures::RECONSTRUCTED_U_JSON),
        ("sampled_layout.csv", fixtures::SAMPLED_LAYOUT_CSV),
    ];
    for (name, text) in files {
        finish(&a.out.join(name), text, "export-fixtures", a, None, &[])?;
    }
    Ok(())
}
