use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use motkit::audit::{self, SpeedProfile};
use motkit::io::{
    homography_path, load_meta, load_mot_path, load_result_bundle, load_seqmap, parse_mot_file,
    read_text, sequence_path, write_atomic, write_mot_file, SEQUENCE_EXT,
};
use motkit::metrics::{evaluate_benchmark_with_logs, EvalOptions, StdDevKind};
use motkit::ranking::{average_rank, Metric};
use motkit::report::{sequence_csv, summary_table, NamedReport};
use motkit::synth::{generate, write_dataset, SynthConfig};
use motkit::tracker::{track, TrackOutput};
use motkit::tuner::{tune, SearchConfig, TrainingSet};
use motkit::{
    DistanceMode, EntryRole, GroundTruthSequence, GroundTruthSet, Homography, ResultBundle, SeqMap,
    TrackerParams, Trajectory,
};

use crate::args::{
    AuditArgs, EvalArgs, Format, MatchArgs, Mode, RankArgs, SynthArgs, TrackArgs, TuneArgs,
    ValidateArgs,
};

/// Outcome of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    /// The command reported problems, e.g. invalid files during validation.
    Failed,
}

fn distance_mode(m: &MatchArgs) -> Result<DistanceMode> {
    let base = match m.mode {
        Mode::TwoD => DistanceMode::iou_2d(),
        Mode::ThreeD => DistanceMode::euclid_3d(),
    };
    Ok(match m.threshold {
        Some(t) => base.with_threshold(t)?,
        None => base,
    })
}

/// The given sequence map, or every `<name>.txt` in `dir` sorted by name.
pub fn resolve_seqmap(seqmap: Option<&Path>, dir: &Path) -> Result<SeqMap> {
    if let Some(p) = seqmap {
        return load_seqmap(p).with_context(|| format!("reading sequence map {}", p.display()));
    }
    let mut names = Vec::new();
    for item in fs::read_dir(dir).with_context(|| format!("reading {}", dir.display()))? {
        let path = item?.path();
        let is_seq = path
            .extension()
            .and_then(|x| x.to_str())
            .is_some_and(|x| x.eq_ignore_ascii_case(SEQUENCE_EXT));
        if is_seq && path.is_file() {
            if let Some(stem) = path.file_stem().and_then(|s| s.to_str()) {
                names.push(stem.to_string());
            }
        }
    }
    names.sort();
    if names.is_empty() {
        bail!("no sequence files in {}", dir.display());
    }
    Ok(SeqMap::new(names)?)
}

fn load_sequence(dir: &Path, name: &str, role: EntryRole) -> Result<Vec<motkit::MotEntry>> {
    let path = sequence_path(dir, name);
    if !path.is_file() {
        return Err(motkit::Error::MissingSequence(name.to_string()))
            .with_context(|| format!("looking for {}", path.display()));
    }
    Ok(load_mot_path(&path, role)?)
}

pub fn load_ground_truth(dir: &Path, seqmap: &SeqMap) -> Result<GroundTruthSet> {
    let mut set = GroundTruthSet::new();
    for name in seqmap.iter() {
        let entries = load_sequence(dir, name, EntryRole::GroundTruth)?;
        let meta = load_meta(dir, name)?;
        set.insert(name.to_string(), GroundTruthSequence { entries, meta });
    }
    Ok(set)
}

fn load_detections(dir: &Path, seqmap: &SeqMap) -> Result<ResultBundle> {
    let mut bundle = ResultBundle::new();
    for name in seqmap.iter() {
        bundle.insert(name, load_sequence(dir, name, EntryRole::Detection)?)?;
    }
    Ok(bundle)
}

fn load_homography(path: &Path) -> Result<Homography> {
    let text = read_text(path)?;
    Homography::parse(&text).with_context(|| format!("reading {}", path.display()))
}

/// `<dir>/<name>.homography` if it exists.
fn sequence_homography(dir: &Path, name: &str) -> Result<Option<Homography>> {
    let p = homography_path(dir, name);
    if p.is_file() {
        load_homography(&p).map(Some)
    } else {
        Ok(None)
    }
}

pub fn cmd_eval(args: &EvalArgs, out: &mut dyn Write) -> Result<Status> {
    let mode = distance_mode(&args.matching)?;
    let seqmap = resolve_seqmap(args.seqmap.as_deref(), &args.gt)?;
    let gt = load_ground_truth(&args.gt, &seqmap)?;
    let results = load_result_bundle(&args.results, Some(&seqmap))
        .with_context(|| format!("loading results from {}", args.results.display()))?;
    let opts = EvalOptions {
        stddev: if args.sample_stddev {
            StdDevKind::Sample
        } else {
            StdDevKind::Population
        },
        runtime_hz: args.hz,
    };
    let (report, logs) = evaluate_benchmark_with_logs(&results, &gt, mode, &opts)?;
    let named = NamedReport::new(args.name.clone(), report);

    if let Some(dir) = &args.out {
        let table = summary_table(&named.tracker, &named.report);
        write_atomic(&dir.join(format!("{}.json", args.name)), &named.to_json())?;
        write_atomic(&dir.join(format!("{}.txt", args.name)), &table)?;
        write_atomic(&dir.join(format!("{}_sequences.csv", args.name)), &sequence_csv(&named.report))?;
        if args.events {
            for (seq, log) in &logs {
                write_atomic(&dir.join("events").join(format!("{seq}.csv")), &log.to_csv())?;
            }
        }
    }
    match args.format {
        Format::Text => write!(out, "{}", summary_table(&named.tracker, &named.report))?,
        Format::Json => write!(out, "{}", named.to_json())?,
    }
    Ok(Status::Success)
}

pub fn cmd_rank(args: &RankArgs, out: &mut dyn Write) -> Result<Status> {
    let metrics = match &args.metrics {
        Some(list) => Metric::parse_list(list)?,
        None => Metric::DEFAULT_SET.to_vec(),
    };
    let mut reports = Vec::with_capacity(args.reports.len());
    for p in &args.reports {
        let text = read_text(p)?;
        let r = NamedReport::from_json(&text).with_context(|| format!("reading {}", p.display()))?;
        reports.push(r);
    }
    let first = reports[0].report.mode;
    if let Some(other) = reports.iter().find(|r| r.report.mode != first) {
        bail!(
            "incompatible reports: {:?} was evaluated with {:?}, {:?} with {:?}",
            reports[0].tracker,
            first,
            other.tracker,
            other.report.mode
        );
    }
    let mut seen = BTreeMap::new();
    for r in &reports {
        if seen.insert(r.tracker.clone(), ()).is_some() {
            bail!("tracker {:?} appears in more than one report", r.tracker);
        }
    }

    let table = average_rank(&reports, &metrics)?;
    let text = match args.format {
        Format::Text => table.to_text(&reports),
        Format::Json => table.to_json(),
    };
    match &args.out {
        Some(p) => write_atomic(p, &text)?,
        None => write!(out, "{text}")?,
    }
    Ok(Status::Success)
}

fn load_params(path: Option<&Path>) -> Result<TrackerParams> {
    match path {
        Some(p) => TrackerParams::parse(&read_text(p)?).with_context(|| format!("reading {}", p.display())),
        None => Ok(TrackerParams::default()),
    }
}

pub fn cmd_track(args: &TrackArgs, out: &mut dyn Write) -> Result<Status> {
    let params = load_params(args.params.as_deref())?;
    params.validate()?;
    let seqmap = resolve_seqmap(args.seqmap.as_deref(), &args.det)?;
    let dets = load_detections(&args.det, &seqmap)?;

    let names: Vec<&str> = seqmap.iter().collect();
    let outputs: Vec<(String, TrackOutput)> = names
        .par_iter()
        .map(|&name| -> Result<(String, TrackOutput)> {
            let mut o = track(dets.get(name).unwrap_or_default(), &params)?;
            if let Some(dir) = &args.project {
                let h = sequence_homography(dir, name)?
                    .with_context(|| format!("no homography for {name} in {}", dir.display()))?;
                o.project(&h)?;
            }
            Ok((name.to_string(), o))
        })
        .collect::<Result<_>>()?;

    for (name, o) in &outputs {
        write_atomic(&sequence_path(&args.out, name), &write_mot_file(&o.entries()))?;
        writeln!(out, "{name}: {} trajectories, {} boxes", o.trajectories.len(), o.entries().len())?;
    }
    Ok(Status::Success)
}

pub fn cmd_tune(args: &TuneArgs, out: &mut dyn Write) -> Result<Status> {
    let mode = distance_mode(&args.matching)?;
    let defaults = load_params(args.defaults.as_deref())?;
    let seqmap = resolve_seqmap(args.seqmap.as_deref(), &args.gt)?;
    let mut train = TrainingSet {
        detections: load_detections(&args.det, &seqmap)?,
        ground_truth: load_ground_truth(&args.gt, &seqmap)?,
        homographies: BTreeMap::new(),
    };
    if mode.is_3d() {
        for name in seqmap.iter() {
            let h = sequence_homography(&args.gt, name)?
                .with_context(|| format!("3D tuning needs {}", homography_path(&args.gt, name).display()))?;
            train.homographies.insert(name.to_string(), h);
        }
    }
    let config = SearchConfig {
        defaults,
        runs: args.runs,
        seed: args.seed,
        mode,
    };
    let outcome = tune(&train, &config)?;
    write_atomic(&args.out.join("best_params.txt"), &outcome.best_params.to_text())?;
    write_atomic(&args.out.join("search_log.csv"), &outcome.search_log_csv())?;
    let failed = outcome.runs.iter().filter(|r| r.error.is_some()).count();
    writeln!(
        out,
        "best run {} of {}: MOTA {:.1} ({} failed runs)",
        outcome.best_run,
        outcome.runs.len(),
        outcome.best_mota,
        failed
    )?;
    write!(out, "{}", outcome.best_params.to_text())?;
    Ok(Status::Success)
}

pub fn cmd_audit(args: &AuditArgs, out: &mut dyn Write) -> Result<Status> {
    let seqmap = resolve_seqmap(args.seqmap.as_deref(), &args.gt)?;
    let shared = args.homography.as_deref().map(load_homography).transpose()?;

    let mut profiles: Vec<(String, SpeedProfile)> = Vec::new();
    for name in seqmap.iter() {
        let entries = load_sequence(&args.gt, name, EntryRole::GroundTruth)?;
        let fps = match (load_meta(&args.gt, name)?, args.fps) {
            (Some(m), _) => m.fps,
            (None, Some(f)) => f,
            (None, None) => bail!("no frame rate for {name}: add {name}.meta or pass --fps"),
        };
        let h = match sequence_homography(&args.gt, name)? {
            Some(h) => Some(h),
            None => shared,
        };
        let trajectories = Trajectory::ground_truth(&entries)?;
        let has_world = entries.iter().any(|e| e.world().is_some());
        if !has_world && h.is_none() {
            bail!("{name} has no world coordinates and no homography was given");
        }
        let p = audit::profile(&trajectories, fps, h.as_ref(), args.bin_width)?;
        profiles.push((name.to_string(), p));
    }

    let pairs = || profiles.iter().map(|(n, p)| (n.as_str(), p));
    let outliers: Vec<(&str, audit::SpeedSample)> = profiles
        .iter()
        .flat_map(|(n, p)| audit::flag_outliers(p, args.max_speed).into_iter().map(move |s| (n.as_str(), s)))
        .collect();
    let samples = profiles
        .iter()
        .flat_map(|(n, p)| p.samples().map(move |s| (n.as_str(), s)));

    write_atomic(&args.out.join("speed_histogram.csv"), &audit::histogram_csv(pairs()))?;
    write_atomic(&args.out.join("mean_speeds.csv"), &audit::mean_speed_csv(pairs()))?;
    write_atomic(
        &args.out.join("outliers.csv"),
        &audit::samples_csv(outliers.iter().map(|(n, s)| (*n, s))),
    )?;
    write_atomic(&args.out.join("speed_samples.csv"), &audit::samples_csv(samples))?;

    for (name, p) in &profiles {
        let n = p.histogram.total();
        let flagged = outliers.iter().filter(|(s, _)| s == name).count();
        let skipped = p.skipped().count();
        writeln!(out, "{name}: {n} speed samples, {flagged} above {} m/s, {skipped} skipped pairs", args.max_speed)?;
    }
    Ok(Status::Success)
}

/// Checks one result file, returning a diagnostic on failure.
fn validate_file(path: &Path) -> std::result::Result<usize, String> {
    let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
    let entries = parse_mot_file(&text, EntryRole::Result).map_err(|e| e.to_string())?;
    Ok(entries.len())
}

pub fn cmd_validate(args: &ValidateArgs, out: &mut dyn Write) -> Result<Status> {
    let mut failed = false;
    let mut files: Vec<(String, PathBuf)> = Vec::new();
    match args.seqmap.as_deref() {
        Some(p) => {
            let map = load_seqmap(p).with_context(|| format!("reading sequence map {}", p.display()))?;
            for name in map.iter() {
                let path = sequence_path(&args.results, name);
                if path.is_file() {
                    files.push((name.to_string(), path));
                } else {
                    failed = true;
                    writeln!(out, "FAIL {name}: missing file {}", path.display())?;
                }
            }
        }
        None => {
            let map = resolve_seqmap(None, &args.results)?;
            files.extend(map.iter().map(|n| (n.to_string(), sequence_path(&args.results, n))));
        }
    }
    for (name, path) in &files {
        match validate_file(path) {
            Ok(n) => writeln!(out, "ok   {name}: {n} entries")?,
            Err(msg) => {
                failed = true;
                writeln!(out, "FAIL {name}: {msg}")?;
            }
        }
    }
    writeln!(out, "{}", if failed { "validation failed" } else { "validation passed" })?;
    Ok(if failed { Status::Failed } else { Status::Success })
}

pub fn cmd_synth(args: &SynthArgs, out: &mut dyn Write) -> Result<Status> {
    let sequences = (0..args.sequences)
        .map(|k| {
            generate(&SynthConfig {
                name: format!("Synth-{:02}", k + 1),
                frames: args.frames,
                targets: args.targets,
                jitter: args.jitter,
                miss_rate: args.miss_rate,
                false_positives: args.clutter,
                varying_lifespans: args.lifespans,
                seed: args.seed.wrapping_add(k as u64),
                ..SynthConfig::default()
            })
        })
        .collect::<motkit::Result<Vec<_>>>()?;
    let map = write_dataset(&args.out, &sequences)?;
    writeln!(out, "wrote {} sequences to {}", map.len(), args.out.display())?;
    Ok(Status::Success)
}
