use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use schottky_core::classify::{bounding_geodesic, classify, test_neighbourhoods, ClassifyOptions};
use schottky_core::coding::{decode, encode, DEFAULT_EPSILON};
use schottky_core::dsl::parse_family;
use schottky_core::group::{SchottkyConfig, SchottkyGroup};
use schottky_core::hyperbolic::{Arc, BoundaryPoint};
use schottky_core::lab::{
    crossed_translate, describe_outcome, neighbourhood, search_concentration, search_separation, ConcentrationTask,
};
use schottky_core::render::{render_scene, Element, RenderScene, Style};
use schottky_core::report::{classification_report, Report};
use schottky_core::sequence::SymbolicSequence;
use schottky_core::symbol::letters_to_string;

#[derive(Parser, Debug)]
#[command(name = "schottky", version, about = "Limit points of a two-generator Schottky group")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// JSON file of the form {"radius": r}
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output file (SVG for render, JSON report otherwise)
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    depth: Option<usize>,
    #[arg(long = "max-len", global = true, value_name = "L")]
    max_len: Option<usize>,
    #[arg(long, global = true, value_name = "E")]
    epsilon: Option<f64>,
    /// Print the JSON report instead of the text summary
    #[arg(long, global = true)]
    json: bool,
    /// Add wall-clock times to the report (makes output non-reproducible)
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Boundary angle → symbolic coding
    Encode {
        #[arg(long, allow_hyphen_values = true)]
        angle: f64,
    },
    /// Sequence → limit point
    Decode {
        #[arg(long)]
        seq: String,
    },
    /// Collect all evidence for a sequence
    Classify {
        #[arg(long)]
        seq: String,
        #[arg(long = "max-window", default_value_t = 8)]
        max_window: usize,
        /// Index n of the target neighbourhood U_n
        #[arg(long, default_value_t = 6)]
        target: usize,
        #[arg(long)]
        serial: bool,
    },
    /// Search for a word concentrating U into V at the limit point
    Concentrate {
        #[arg(long)]
        seq: String,
        /// U<n>, left, right, or START:END in radians
        #[arg(long, default_value = "U1")]
        u: String,
        /// U<n>, START:END, or centered:HALF_WIDTH
        #[arg(long, default_value = "U6")]
        v: String,
        #[arg(long)]
        control: bool,
    },
    /// Search for a word whose image of the geodesic bounding U separates the point from ∂V
    Separate {
        #[arg(long)]
        seq: String,
        #[arg(long, default_value = "left")]
        u: String,
        #[arg(long, default_value = "U6")]
        v: String,
    },
    /// Draw the sides and their translates as SVG
    Render {
        /// Also draw the ray to this sequence's limit point and its first crossed translates
        #[arg(long)]
        seq: Option<String>,
        #[arg(long, default_value_t = 1000)]
        size: u32,
    },
}

fn load_config(path: Option<&Path>) -> anyhow::Result<SchottkyConfig> {
    match path {
        None => Ok(SchottkyConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("cannot read config {}", p.display()))?;
            Ok(SchottkyConfig::from_json(&text)?)
        }
    }
}

fn sequence(text: &str) -> anyhow::Result<SymbolicSequence> {
    Ok(parse_family(text)?.expand())
}

fn parse_arc(text: &str, group: &SchottkyGroup, s: &SymbolicSequence, p: BoundaryPoint) -> anyhow::Result<Arc> {
    if let Some(n) = text.strip_prefix('U') {
        let n: usize = n.parse().map_err(|_| anyhow!("bad neighbourhood index in {text:?}"))?;
        return Ok(neighbourhood(group, s, n)?);
    }
    if let Some(hw) = text.strip_prefix("centered:") {
        let hw: f64 = hw.parse().map_err(|_| anyhow!("bad half width in {text:?}"))?;
        return Ok(Arc::centered(p, hw)?);
    }
    if text == "left" || text == "right" {
        let arcs = test_neighbourhoods(group, s)?;
        let i = if text == "left" { 1 } else { 2 };
        return Ok(arcs[i].1);
    }
    let (a, b) = text.split_once(':').ok_or_else(|| anyhow!("cannot read arc {text:?}"))?;
    Ok(Arc::from_angles(a.trim().parse()?, b.trim().parse()?)?)
}

fn emit(global: &Global, mut report: Report, text: String, started: Instant) -> anyhow::Result<()> {
    if global.timings {
        report.timings["wall_ms"] = json!(started.elapsed().as_secs_f64() * 1e3);
    }
    if global.json {
        let body = report.to_json();
        match &global.out {
            Some(path) => std::fs::write(path, body).with_context(|| format!("cannot write {}", path.display()))?,
            None => print!("{body}"),
        }
    } else {
        println!("{text}");
        if let Some(path) = &global.out {
            std::fs::write(path, report.to_json()).with_context(|| format!("cannot write {}", path.display()))?;
        }
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let started = Instant::now();
    let g = &cli.global;
    let config = load_config(g.config.as_deref())?;
    let group = SchottkyGroup::new(config)?;
    let epsilon = g.epsilon.unwrap_or(DEFAULT_EPSILON);

    match &cli.command {
        Command::Encode { angle } => {
            let max_len = g.max_len.unwrap_or(20);
            let p = BoundaryPoint::new(*angle);
            let letters = encode(&group, p, max_len)?;
            let word = letters_to_string(&letters);
            let mut r = Report::new("encode", config);
            r.inputs = json!({ "angle": angle, "max_len": max_len });
            r.verdicts = json!({ "symbols": word });
            emit(g, r, word, started)
        }
        Command::Decode { seq } => {
            let s = sequence(seq)?;
            let d = decode(&group, &s, epsilon)?;
            let mut r = Report::new("decode", config);
            r.inputs = json!({ "sequence": seq, "epsilon": epsilon });
            r.verdicts = json!({ "angle": d.point.angle(), "depth": d.depth, "diameter": d.diameter });
            let text = format!("angle {:.15} depth {} diameter {:e}", d.point.angle(), d.depth, d.diameter);
            emit(g, r, text, started)
        }
        Command::Classify { seq, max_window, target, serial } => {
            let family_spec = parse_family(seq)?;
            let options = ClassifyOptions {
                depth: g.depth.unwrap_or(500),
                max_len: g.max_len.unwrap_or(12),
                max_window: *max_window,
                target: *target,
                parallel: !serial,
            };
            let c = classify(&group, &family_spec, &options)?;
            let mut text = format!("{} → angle {:.12}\n", c.sequence, c.point.angle());
            text += &format!("  controlled:    {:?}\n", c.evidence.controlled);
            text += &format!("  concentration: {:?}\n", c.evidence.concentration);
            for s in &c.concentration {
                text += &format!("    {:<12} {}\n", s.label, describe_outcome(&s.report.outcome));
            }
            text += &format!("  separation:    {:?}\n", c.evidence.separation);
            for s in &c.separation {
                let dir = s.report.verification.as_ref().and_then(|v| v.direction);
                text += &format!("    {:<12} {} {:?}\n", s.label, describe_outcome(&s.report.outcome), dir);
            }
            text += &format!(
                "  conical:       {:?} (last-quartile minimum {:.3e})\n",
                c.evidence.conical, c.conical.last_quartile_minimum
            );
            text += &format!("  hierarchy violations: {}", c.hierarchy.violations.len());
            emit(g, classification_report(config, &c, &options), text, started)
        }
        Command::Concentrate { seq, u, v, control } => {
            let s = sequence(seq)?;
            let p = decode(&group, &s, 1e-13)?.point;
            let (ua, va) = (parse_arc(u, &group, &s, p)?, parse_arc(v, &group, &s, p)?);
            let max_len = g.max_len.unwrap_or(12);
            let task = ConcentrationTask::new(p, ua, va, *control, max_len)?.with_sequence(seq.clone());
            let report = search_concentration(&group, &task);
            let mut r = Report::new("concentrate", config);
            r.inputs = json!({ "sequence": seq, "u": ua, "v": va, "control": control, "max_len": max_len });
            r.verdicts = json!({ "outcome": describe_outcome(&report.outcome) });
            r.record_search("concentration", u, &report);
            emit(g, r, describe_outcome(&report.outcome), started)
        }
        Command::Separate { seq, u, v } => {
            let s = sequence(seq)?;
            let p = decode(&group, &s, 1e-13)?.point;
            let (ua, va) = (parse_arc(u, &group, &s, p)?, parse_arc(v, &group, &s, p)?);
            let lambda = bounding_geodesic(&ua)?;
            let max_len = g.max_len.unwrap_or(12);
            let report = search_separation(&group, p, &lambda, &va, max_len)?;
            let direction = report.verification.as_ref().and_then(|c| c.direction);
            let mut r = Report::new("separate", config);
            r.inputs = json!({ "sequence": seq, "lambda": lambda, "v": va, "max_len": max_len });
            r.verdicts = json!({ "outcome": describe_outcome(&report.outcome), "direction": direction });
            r.record_search("separation", u, &report);
            let text = match direction {
                Some(d) => format!("{} {:?}", describe_outcome(&report.outcome), d),
                None => describe_outcome(&report.outcome),
            };
            emit(g, r, text, started)
        }
        Command::Render { seq, size } => {
            let depth = g.depth.unwrap_or(3);
            let mut scene = RenderScene::with_translates(config, depth);
            scene.size_px = *size;
            if let Some(text) = seq {
                let s = sequence(text)?;
                let p = decode(&group, &s, 1e-13)?.point;
                scene.push(Element::Ray { to: p, label: Some("p".into()) });
                let neighbourhoods = test_neighbourhoods(&group, &s)?;
                let (label, left) = &neighbourhoods[1];
                scene.push(Element::BoundaryArc { arc: *left, label: Some(label.clone()) });
                scene.push(Element::Geodesic {
                    geodesic: bounding_geodesic(left)?,
                    style: Style::Highlight,
                    label: Some("λ".into()),
                    word: None,
                });
                for n in 1..=3 {
                    let geodesic = crossed_translate(&group, &s, n)?;
                    scene.push(Element::Geodesic { geodesic, style: Style::Highlight, label: Some(format!("λ{n}")), word: None });
                }
            }
            let svg = render_scene(&scene)?;
            let path = g.out.clone().unwrap_or_else(|| PathBuf::from("scene.svg"));
            std::fs::write(&path, &svg).with_context(|| format!("cannot write {}", path.display()))?;
            if g.json {
                let mut r = Report::new("render", config);
                r.inputs = json!({ "depth": depth, "size": size, "sequence": seq });
                r.verdicts = json!({ "svg": path.display().to_string(), "bytes": svg.len() });
                if g.timings {
                    r.timings["wall_ms"] = json!(started.elapsed().as_secs_f64() * 1e3);
                }
                print!("{}", r.to_json());
            } else {
                println!("wrote {}", path.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap exits with 2 on usage errors and 0 for --help/--version
            e.exit();
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
