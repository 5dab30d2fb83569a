use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use wcs_qrng::detection::{analytic_outcomes, throughput};
use wcs_qrng::pipeline::{generate, Target};
use wcs_qrng::postproc::{stream_stats, BitStream};
use wcs_qrng::randtests::{run_battery, BatteryConfig, TestReport, DEFAULT_SIGNIFICANCE};
use wcs_qrng::sim::run_streaming;
use wcs_qrng::sweep::{
    evaluate_point, find_optimum_with, format_sig9, sweep, sweep_from_csv, sweep_to_csv,
    sweep_to_text, OptimumOptions, Spacing, SweepRow, SweepSpec, DEFAULT_BRACKET, SWEEP_CSV_HEADER,
};
use wcs_qrng::{DetectorPair, Error, Executor, Result, SimConfig, SourceModel, TruncationPolicy};

use crate::args::{
    parse_spacing, Format, GenerateArgs, OptimumArgs, Output, ReportArgs, SweepArgs, TestArgs,
};
use crate::config::Config;

const DEFAULT_GATES: u64 = 1_000_000;
const DEFAULT_SEED: u64 = 1;
const DEFAULT_TEST_BLOCK: usize = 1_000_000;
const REPORT_HEADER: &str = "test,block,block_size,significance,p_value,pass";

/// Names the file in I/O errors.
fn at(path: &Path) -> impl FnOnce(Error) -> Error + '_ {
    move |e| match e {
        Error::Io(io) => Error::Io(std::io::Error::new(
            io.kind(),
            format!("{}: {io}", path.display()),
        )),
        other => other,
    }
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| at(p)(e.into()))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

fn format_of(output: &Output, cfg: &Config, default: Format) -> Result<Format> {
    cfg.pick_or(output.format, "format", default)
}

fn sources(flag: Vec<SourceModel>, cfg: &Config) -> Result<Vec<SourceModel>> {
    let list = cfg.pick_list(flag, "source")?;
    Ok(if list.is_empty() {
        vec![SourceModel::single(), SourceModel::indistinguishable()]
    } else {
        list
    })
}

fn policy(flag: Option<f64>, cfg: &Config) -> Result<TruncationPolicy> {
    match cfg.pick(flag, "tail-mass")? {
        Some(t) => TruncationPolicy::new(t),
        None => Ok(TruncationPolicy::default()),
    }
}

pub fn run_sweep(args: SweepArgs, cfg: &Config) -> Result<()> {
    let format = format_of(&args.output, cfg, Format::Csv)?;
    let policy = policy(args.tail_mass, cfg)?;
    let sources = sources(args.source, cfg)?;
    let explicit: Vec<f64> = cfg.pick_list(args.mu_eta, "mu-eta")?;
    let rows: Vec<SweepRow> = if explicit.is_empty() {
        let spacing = match args.spacing {
            Some(s) => s,
            None => match cfg.value::<String>("spacing")? {
                Some(s) => parse_spacing(&s).map_err(Error::InvalidParameter)?,
                None => Spacing::Logarithmic,
            },
        };
        let d = SweepSpec::default();
        let spec = SweepSpec {
            mu_eta_min: cfg.pick_or(args.min, "min", d.mu_eta_min)?,
            mu_eta_max: cfg.pick_or(args.max, "max", d.mu_eta_max)?,
            points: cfg.pick_or(args.points, "points", d.points)?,
            spacing,
            sources,
            policy,
        };
        sweep(&spec, Executor::default())?
    } else {
        let jobs: Vec<(f64, SourceModel)> = explicit
            .iter()
            .flat_map(|&x| sources.iter().map(move |&s| (x, s)))
            .collect();
        for &(x, _) in &jobs {
            if !(x.is_finite() && x > 0.0) {
                return Err(Error::Domain {
                    name: "mu_eta",
                    value: x,
                    expected: "finite and > 0",
                });
            }
        }
        Executor::default().map(jobs, |(mu_eta, source)| SweepRow {
            mu_eta,
            source,
            values: evaluate_point(source, mu_eta, policy).map_err(|e| e.to_string()),
        })
    };
    let text = match format {
        Format::Csv => sweep_to_csv(&rows),
        Format::Text => sweep_to_text(&rows),
    };
    emit(args.output.out.as_deref(), &text)
}

pub fn run_optimum(args: OptimumArgs, cfg: &Config) -> Result<()> {
    let format = format_of(&args.output, cfg, Format::Text)?;
    let opts = OptimumOptions {
        policy: policy(args.tail_mass, cfg)?,
        ..OptimumOptions::default()
    };
    let bracket = (
        cfg.pick_or(args.min, "min", DEFAULT_BRACKET.0)?,
        cfg.pick_or(args.max, "max", DEFAULT_BRACKET.1)?,
    );
    let sources = sources(args.source, cfg)?;
    let found = sources
        .iter()
        .map(|&s| find_optimum_with(s, bracket, opts).map(|o| (s, o)))
        .collect::<Result<Vec<_>>>()?;

    let mut text = String::new();
    match format {
        Format::Csv => {
            text.push_str("source,mu_eta,p_gen\n");
            for (s, o) in &found {
                let _ = writeln!(
                    text,
                    "{s},{},{}",
                    format_sig9(o.mu_eta),
                    format_sig9(o.p_gen)
                );
            }
        }
        Format::Text => {
            for (s, o) in &found {
                let _ = writeln!(text, "{s}.mu_eta={}", format_sig9(o.mu_eta));
                let _ = writeln!(text, "{s}.p_gen={}", format_sig9(o.p_gen));
            }
            let single = found.iter().find(|(s, _)| *s == SourceModel::single());
            let indist = found
                .iter()
                .find(|(s, _)| *s == SourceModel::indistinguishable());
            if let (Some((_, a)), Some((_, b))) = (single, indist) {
                let _ = writeln!(text, "improvement_ratio={}", format_sig9(b.p_gen / a.p_gen));
            }
        }
    }
    emit(args.output.out.as_deref(), &text)
}

/// Resolves `μ` from either `--mu` or `--mu-eta`, flags before file.
fn resolve_mu(
    args: &GenerateArgs,
    cfg: &Config,
    source: SourceModel,
    det: DetectorPair,
) -> Result<f64> {
    let mean_eta = 0.5 * (det.eta0() + det.eta1());
    let from_mu_eta = |x: f64| -> Result<f64> {
        if mean_eta > 0.0 {
            Ok(x / mean_eta)
        } else {
            Err(Error::InvalidParameter(
                "mu-eta needs a non-zero detector efficiency".into(),
            ))
        }
    };
    match (args.mu, args.mu_eta) {
        (Some(mu), _) => return Ok(mu),
        (None, Some(x)) => return from_mu_eta(x),
        (None, None) => {}
    }
    match (cfg.value::<f64>("mu")?, cfg.value::<f64>("mu-eta")?) {
        (Some(_), Some(_)) => Err(Error::InvalidParameter(
            "config sets both mu and mu-eta; keep one".into(),
        )),
        (Some(mu), None) => Ok(mu),
        (None, Some(x)) => from_mu_eta(x),
        (None, None) => from_mu_eta(
            find_optimum_with(source, DEFAULT_BRACKET, OptimumOptions::default())?.mu_eta,
        ),
    }
}

pub fn run_generate(args: GenerateArgs, cfg: &Config) -> Result<()> {
    let format = cfg.pick_or(args.format, "format", Format::Text)?;
    let source = cfg.pick_or(args.source, "source", SourceModel::indistinguishable())?;
    let det = DetectorPair::new(
        cfg.pick_or(args.eta0, "eta0", 1.0)?,
        cfg.pick_or(args.eta1, "eta1", 1.0)?,
    )?;
    let mu = resolve_mu(&args, cfg, source, det)?;
    let seed = cfg.pick_or(args.seed, "seed", DEFAULT_SEED)?;
    let gate_rate = cfg.pick_or(args.gate_rate, "gate-rate", SimConfig::DEFAULT_GATE_RATE)?;
    let debias = cfg.switch(args.debias, "debias")?;
    let ascii = cfg.switch(args.ascii, "ascii")?;
    let (n_gates, target) = match (args.gates, args.bits) {
        (Some(g), _) => (g, Target::Gates),
        (None, Some(b)) => (1, Target::Bits(b)),
        (None, None) => match (cfg.value::<u64>("gates")?, cfg.value::<u64>("bits")?) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidParameter(
                    "config sets both gates and bits; keep one".into(),
                ))
            }
            (Some(g), None) => (g, Target::Gates),
            (None, Some(b)) => (1, Target::Bits(b)),
            (None, None) => (DEFAULT_GATES, Target::Gates),
        },
    };
    let out = args
        .out
        .as_deref()
        .ok_or_else(|| Error::InvalidParameter("generate needs --out PATH".into()))?;

    let sim = SimConfig::new(seed, n_gates, mu, source)
        .with_detectors(det)
        .with_gate_rate(gate_rate);
    let executor = Executor::default();
    let g = generate(&sim, target, debias, executor)?;
    if ascii {
        g.bits.write_ascii(out).map_err(at(out))?;
    } else {
        g.bits.write_binary(out).map_err(at(out))?;
    }
    if let Some(path) = &args.events {
        let sink = BufWriter::new(File::create(path).map_err(|e| at(path)(e.into()))?);
        let replay = run_streaming(
            &SimConfig {
                n_gates: g.gates(),
                ..sim
            },
            executor,
            sink,
        )
        .map_err(at(path))?;
        if replay != g.tally {
            return Err(Error::Range(
                "event stream replay diverged from the generated run".into(),
            ));
        }
    }

    let analytic = analytic_outcomes(source, mu, det, TruncationPolicy::default())?;
    let duration = g.gates() as f64 / gate_rate;
    let tally_text = g.tally.to_string();
    let mut fields: Vec<(&str, String)> = vec![
        ("source", source.to_string()),
        ("mu", format_sig9(mu)),
        ("mu_eta", format_sig9(mu * 0.5 * (det.eta0() + det.eta1()))),
        ("eta0", format_sig9(det.eta0())),
        ("eta1", format_sig9(det.eta1())),
        ("seed", seed.to_string()),
    ];
    for line in tally_text.lines() {
        if let Some((k, v)) = line.split_once('=') {
            fields.push((k, v.to_string()));
        }
    }
    fields.extend([
        ("p_gen_analytic", format!("{:.9}", analytic.p_gen)),
        ("p_disc_analytic", format!("{:.9}", analytic.p_disc)),
        (
            "ones_fraction_raw",
            g.tally
                .ones_fraction()
                .map_or("nan".into(), |f| format!("{f:.9}")),
        ),
        ("raw_bits", g.raw_bits.to_string()),
        ("output_bits", g.bits.len().to_string()),
        ("debiased", u8::from(debias).to_string()),
        (
            "extraction_efficiency",
            match g.raw_bits {
                0 => "nan".into(),
                n => format!("{:.9}", g.bits.len() as f64 / n as f64),
            },
        ),
        ("gate_rate_hz", format_sig9(gate_rate)),
        (
            "raw_throughput_bps",
            format_sig9(throughput(g.tally.p_gen(), gate_rate)?),
        ),
        (
            "analytic_throughput_bps",
            format_sig9(throughput(analytic.p_gen, gate_rate)?),
        ),
        (
            "output_throughput_bps",
            format_sig9(g.bits.len() as f64 / duration),
        ),
    ]);

    let mut text = String::new();
    if format == Format::Csv {
        text.push_str("key,value\n");
    }
    for (k, v) in fields {
        let sep = if format == Format::Csv { ',' } else { '=' };
        let _ = writeln!(text, "{k}{sep}{v}");
    }
    emit(None, &text)
}

pub fn run_test(args: TestArgs, cfg: &Config) -> Result<()> {
    let format = format_of(&args.output, cfg, Format::Text)?;
    let bits = BitStream::read_file(&args.input)
        .map_err(at(&args.input))?
        .to_unpacked();
    let block_size = cfg.pick_or(
        args.block_size,
        "block-size",
        DEFAULT_TEST_BLOCK.min(bits.len()),
    )?;
    let alpha = cfg.pick_or(args.alpha, "alpha", DEFAULT_SIGNIFICANCE)?;
    let report = run_battery(
        &bits,
        &BatteryConfig::new(block_size).with_significance(alpha),
        Executor::default(),
    )?;
    let text = match format {
        Format::Csv => report.to_csv(),
        Format::Text => report.to_text(),
    };
    emit(args.output.out.as_deref(), &text)
}

pub fn run_report(args: ReportArgs, cfg: &Config) -> Result<()> {
    let format = format_of(&args.output, cfg, Format::Text)?;
    let data = std::fs::read(&args.input).map_err(|e| at(&args.input)(e.into()))?;
    let first_line = data.split(|&b| b == b'\n').next().unwrap_or_default();
    let first_line = std::str::from_utf8(first_line).unwrap_or_default().trim();

    let text = if first_line == SWEEP_CSV_HEADER {
        let rows = sweep_from_csv(&String::from_utf8_lossy(&data))?;
        match format {
            Format::Csv => sweep_to_csv(&rows),
            Format::Text => sweep_to_text(&rows),
        }
    } else if first_line == REPORT_HEADER {
        let report = TestReport::from_csv(&String::from_utf8_lossy(&data))?;
        match format {
            Format::Csv => report.to_csv(),
            Format::Text => report.to_text(),
        }
    } else {
        let bits = BitStream::read_file(&args.input).map_err(at(&args.input))?;
        bit_summary(&bits, format)
    };
    emit(args.output.out.as_deref(), &text)
}

fn bit_summary(bits: &BitStream, format: Format) -> String {
    let s = stream_stats(bits);
    let opt = |v: Option<f64>| v.map_or("nan".to_string(), |x| format!("{x:.9}"));
    let p = &bits.provenance;
    let fields = [
        ("length", s.length.to_string()),
        ("ones", s.ones.to_string()),
        ("ones_fraction", opt(s.ones_fraction)),
        ("extraction_efficiency", opt(s.extraction_efficiency)),
        ("source", p.source.clone().unwrap_or_default()),
        ("mu", p.mu.map(format_sig9).unwrap_or_default()),
        ("seed", p.seed.map(|v| v.to_string()).unwrap_or_default()),
        ("debiased", u8::from(p.debiased).to_string()),
    ];
    let mut text = String::new();
    if format == Format::Csv {
        text.push_str("key,value\n");
    }
    let sep = if format == Format::Csv { ',' } else { '=' };
    for (k, v) in fields {
        let _ = writeln!(text, "{k}{sep}{v}");
    }
    text
}
