mod args;

use std::fs;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::Parser;
use phasewalk_core::acceptance::{run_criterion, AcceptanceConfig, AcceptanceReport, CRITERIA};
use phasewalk_core::simulator::{default_stride, run_schedule_on};
use phasewalk_core::sweep::sweep_to_csv;
use phasewalk_core::{
    build_family, closed_form_spectrum, model_for, reduced_model_closed_form, spectrum_for, subdivide, sweep_d2,
    synthesize, EigenvalueSubdivision, PhaseWalkError, PhaseWalkSchedule, Propagator, ScheduleOptions, Spectrum,
    SpectrumOptions,
};
use serde_json::json;

use args::{Cli, Command, Format, GraphOpts, Input, RunCmd, ScheduleCmd, SweepCmd, VerifyCmd};

const EXIT_PERIODICITY: u8 = 2;
const EXIT_VERIFY: u8 = 3;

struct VerifyFailed;

fn analyze_input(opts: &GraphOpts) -> anyhow::Result<(Input, Spectrum, EigenvalueSubdivision)> {
    let input = opts.input()?;
    let spec = match &input {
        Input::Family(f) => closed_form_spectrum(f, opts.marked)?,
        Input::Graph(g) => {
            spectrum_for(g, opts.marked, &SpectrumOptions { dense_cap: opts.cap, ..SpectrumOptions::default() })?
        }
    };
    if opts.marked >= spec.n_vertices {
        bail!("marked vertex {} out of range for {} vertices", opts.marked, spec.n_vertices);
    }
    let sub = subdivide(&spec)?;
    Ok((input, spec, sub))
}

fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn pi_fraction(t: f64) -> String {
    let ratio = std::f64::consts::PI / t;
    if (ratio - ratio.round()).abs() < 1e-9 {
        format!("pi/{}", ratio.round())
    } else {
        format!("{t}")
    }
}

fn cmd_analyze(opts: &GraphOpts) -> anyhow::Result<()> {
    let (input, spec, sub) = analyze_input(opts)?;
    if opts.format == Some(Format::Json) || opts.out.is_some() {
        let report = json!({
            "family": input.family(),
            "n_vertices": spec.n_vertices,
            "spectrum": spec,
            "period": sub.period,
            "depth": sub.depth(),
            "levels": sub.levels,
            "decoupled": sub.decoupled,
        });
        return emit(&serde_json::to_string_pretty(&report)?, opts.out.as_deref());
    }
    match &input {
        Input::Graph(g) => println!("graph      {} ({} vertices, {} edges)", g.family(), g.n_vertices(), g.n_edges()),
        Input::Family(f) => println!("graph      {f} ({} vertices)", spec.n_vertices),
    }
    println!("marked     {}", opts.marked);
    println!("source     {:?}", spec.source);
    let scale = spec.scale;
    println!("eigenvalue  multiplicity  overlap");
    for ((l, m), o) in spec.eigenvalues.iter().zip(&spec.multiplicities).zip(&spec.overlaps) {
        let value = if scale == 1 { l.to_string() } else { format!("{l}/{scale}") };
        println!("{value:>10}  {m:>12}  {o:.9}");
    }
    println!("period     {}", sub.period);
    println!("depth      d={}", sub.depth());
    for (k, lvl) in sub.levels.iter().enumerate() {
        println!(
            "level {}    t={}  keep={:?} ({:.6})  flip={:?} ({:.6})",
            k + 1,
            pi_fraction(lvl.walk_time),
            lvl.keep,
            lvl.overlap_keep,
            lvl.flip,
            lvl.overlap_flip
        );
    }
    if !sub.decoupled.is_empty() {
        println!("decoupled  {:?}", sub.decoupled);
    }
    Ok(())
}

fn build_schedule(graph: &GraphOpts, opts: &ScheduleOptions) -> anyhow::Result<(Input, PhaseWalkSchedule)> {
    let (input, _, sub) = analyze_input(graph)?;
    let schedule = synthesize(&sub, input.family(), opts)?;
    Ok((input, schedule))
}

fn cmd_schedule(cmd: &ScheduleCmd) -> anyhow::Result<()> {
    let (_, schedule) = build_schedule(&cmd.graph, &cmd.flags.options())?;
    emit(&schedule.to_json()?, cmd.graph.out.as_deref())
}

fn cmd_run(cmd: &RunCmd) -> anyhow::Result<()> {
    let (input, schedule) = match &cmd.schedule {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            (cmd.graph.input()?, PhaseWalkSchedule::from_json(&text)?)
        }
        None => build_schedule(&cmd.graph, &cmd.flags.options())?,
    };
    let marked = cmd.graph.marked;
    let prop = match (&input, cmd.dense) {
        (Input::Graph(g), true) => Propagator::from_graph(g, marked, cmd.graph.cap)?,
        (Input::Graph(g), false) => Propagator::from_model(&model_for(g, marked)?),
        (Input::Family(f), true) => {
            if schedule.n_vertices > cmd.graph.cap {
                return Err(PhaseWalkError::Size { n: schedule.n_vertices, cap: cmd.graph.cap }.into());
            }
            Propagator::from_graph(&build_family(f)?, marked, cmd.graph.cap)?
        }
        (Input::Family(f), false) => Propagator::from_model(&reduced_model_closed_form(f)?),
    };
    let stride = cmd.stride.unwrap_or_else(|| default_stride(schedule.n_queries));
    let traj = run_schedule_on(&prop, &schedule, stride)?;
    if let Some(path) = &cmd.graph.out {
        let format = cmd.graph.format.unwrap_or_else(|| {
            if path.extension().is_some_and(|e| e == "json") {
                Format::Json
            } else {
                Format::Csv
            }
        });
        let text = match format {
            Format::Csv => traj.to_csv(),
            Format::Json => traj.to_json()?,
        };
        fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
    } else if cmd.graph.format == Some(Format::Json) {
        println!("{}", traj.to_json()?);
        return Ok(());
    }
    println!("queries {}", traj.n_queries);
    println!("final_success {}", traj.final_success);
    Ok(())
}

fn cmd_sweep(cmd: &SweepCmd) -> anyhow::Result<()> {
    let rows = sweep_d2(cmd.n, cmd.grid)?;
    let text = match cmd.format {
        Format::Csv => sweep_to_csv(&rows),
        Format::Json => serde_json::to_string_pretty(&rows)?,
    };
    match &cmd.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_verify(cmd: &VerifyCmd) -> anyhow::Result<bool> {
    let cfg = AcceptanceConfig { outer_rounding: cmd.outer_rounding.into() };
    let ids: Vec<u8> = if cmd.only.is_empty() { CRITERIA.to_vec() } else { cmd.only.clone() };
    let mut criteria = Vec::with_capacity(ids.len());
    for id in ids {
        let report = run_criterion(id, &cfg).with_context(|| format!("unknown criterion {id}"))?;
        if cmd.format != Some(Format::Json) {
            println!("{}", report.summary_line());
            for c in report.checks.iter().filter(|c| !c.passed) {
                println!("    {}: {}", c.name, c.detail);
            }
        }
        criteria.push(report);
    }
    let report = AcceptanceReport { passed: criteria.iter().all(|c| c.passed), criteria };
    let json = serde_json::to_string_pretty(&report)?;
    if let Some(path) = &cmd.out {
        fs::write(path, &json).with_context(|| format!("writing {}", path.display()))?;
    }
    if cmd.format == Some(Format::Json) {
        println!("{json}");
    }
    Ok(report.passed)
}

fn dispatch(cli: &Cli) -> anyhow::Result<Result<(), VerifyFailed>> {
    match &cli.command {
        Command::Analyze(opts) => cmd_analyze(opts)?,
        Command::Schedule(cmd) => cmd_schedule(cmd)?,
        Command::Run(cmd) => cmd_run(cmd)?,
        Command::SweepD2(cmd) => cmd_sweep(cmd)?,
        Command::Verify(cmd) => {
            if !cmd_verify(cmd)? {
                return Ok(Err(VerifyFailed));
            }
        }
    }
    Ok(Ok(()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(&cli) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(VerifyFailed)) => ExitCode::from(EXIT_VERIFY),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<PhaseWalkError>() {
                Some(PhaseWalkError::Periodicity { .. }) => ExitCode::from(EXIT_PERIODICITY),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
