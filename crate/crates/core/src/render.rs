//! SVG pictures of the tiling: the four sides, a few generations of their
//! translates with labels on the positive sides, and optional rays, boundary
//! arcs, extra geodesics and markers.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{enumerate_words, SchottkyConfig, SchottkyGroup};
use crate::hyperbolic::{Arc, BoundaryPoint, Geodesic};
use crate::symbol::Symbol;

pub const MAX_RENDER_DEPTH: usize = 8;
pub const DEFAULT_SIZE_PX: u32 = 1000;
pub const DEFAULT_MARGIN_PX: u32 = 20;

/// Number of translate geodesics drawn at `depth`: the four sides plus one per reduced word.
pub fn translate_count(depth: usize) -> usize {
    4 + (1..=depth).map(|l| 4 * 3usize.pow(l as u32 - 1)).sum::<usize>()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Style {
    Side,
    Translate,
    Highlight,
}

impl Style {
    fn class(self) -> &'static str {
        match self {
            Style::Side => "translate side",
            Style::Translate => "translate",
            Style::Highlight => "highlight",
        }
    }

    fn stroke(self) -> (&'static str, f64) {
        match self {
            Style::Side => ("#1f3a93", 2.0),
            Style::Translate => ("#4a6fa5", 1.0),
            Style::Highlight => ("#c0392b", 2.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Element {
    Geodesic { geodesic: Geodesic, style: Style, label: Option<String>, word: Option<String> },
    Ray { to: BoundaryPoint, label: Option<String> },
    BoundaryArc { arc: Arc, label: Option<String> },
    Marker { at: Complex64, label: Option<String> },
}

/// What to draw. `depth = None` leaves out the translates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RenderScene {
    pub config: SchottkyConfig,
    pub depth: Option<usize>,
    pub size_px: u32,
    pub margin_px: u32,
    pub extras: Vec<Element>,
}

impl Default for RenderScene {
    fn default() -> Self {
        RenderScene { config: SchottkyConfig::default(), depth: None, size_px: DEFAULT_SIZE_PX, margin_px: DEFAULT_MARGIN_PX, extras: Vec::new() }
    }
}

impl RenderScene {
    pub fn with_translates(config: SchottkyConfig, depth: usize) -> Self {
        RenderScene { config, depth: Some(depth), ..Default::default() }
    }

    pub fn push(&mut self, e: Element) -> &mut Self {
        self.extras.push(e);
        self
    }

    pub fn disc_radius_px(&self) -> f64 {
        0.5 * f64::from(self.size_px) - f64::from(self.margin_px)
    }

    pub fn to_px(&self, z: Complex64) -> (f64, f64) {
        let c = 0.5 * f64::from(self.size_px);
        let r = self.disc_radius_px();
        (c + r * z.re, c - r * z.im)
    }

    /// The translate geodesics in drawing order, each with its word (`None` for the sides).
    pub fn translates(&self, group: &SchottkyGroup) -> Result<Vec<(Option<String>, Geodesic)>> {
        let Some(depth) = self.depth else { return Ok(Vec::new()) };
        if depth > MAX_RENDER_DEPTH {
            return Err(Error::DepthGuard { depth, elements: translate_count(depth) });
        }
        let mut out: Vec<(Option<String>, Geodesic)> = Symbol::ALL.iter().map(|&s| (None, *group.side(s))).collect();
        for w in enumerate_words(depth) {
            let last = *w.letters().last().expect("words have length ≥ 1");
            out.push((Some(w.to_string()), group.translate_geodesic_labels(&w, group.side(last))));
        }
        Ok(out)
    }
}

fn fmt_px(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" { "0.000".into() } else { s }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn family_label(g: &Geodesic, group: &SchottkyGroup, word: Option<&str>) -> String {
    // sides of ā and b̄ are translates of a and b
    let last = match word.and_then(|w| w.chars().last()) {
        Some(c) => Symbol::from_char(c),
        None => Symbol::ALL.into_iter().find(|&s| group.side(s) == g),
    };
    match last {
        Some(Symbol::A | Symbol::AInv) => "a".into(),
        Some(Symbol::B | Symbol::BInv) => "b".into(),
        None => String::new(),
    }
}

/// Point used to anchor a geodesic's label, a little way into its positive side.
pub fn label_anchor(g: &Geodesic) -> Complex64 {
    match g.circle() {
        Some((center, radius)) => {
            let dir = center / center.norm();
            let nearest = dir * (center.norm() - radius);
            let outward = nearest + (dir - nearest) * 0.15;
            if g.on_positive_side(outward) {
                outward
            } else {
                nearest + (-dir - nearest) * 0.15
            }
        }
        None => {
            let q = g.positive_arc().midpoint().to_complex();
            q * 0.15
        }
    }
}

/// SVG path data for a geodesic: a circular arc orthogonal to the boundary, or a diameter.
pub fn geodesic_path(scene: &RenderScene, g: &Geodesic) -> String {
    let (x1, y1) = scene.to_px(g.start().to_complex());
    let (x2, y2) = scene.to_px(g.end().to_complex());
    match g.circle() {
        Some((center, radius)) => {
            let mid = center / center.norm() * (center.norm() - radius);
            let (mx, my) = scene.to_px(mid);
            let cross = (mx - x1) * (y2 - my) - (my - y1) * (x2 - mx);
            let sweep = u8::from(cross > 0.0);
            let r = radius * scene.disc_radius_px();
            format!(
                "M {} {} A {} {} 0 0 {sweep} {} {}",
                fmt_px(x1),
                fmt_px(y1),
                fmt_px(r),
                fmt_px(r),
                fmt_px(x2),
                fmt_px(y2)
            )
        }
        None => format!("M {} {} L {} {}", fmt_px(x1), fmt_px(y1), fmt_px(x2), fmt_px(y2)),
    }
}

fn font_size(g: &Geodesic, scene: &RenderScene) -> f64 {
    let size = g.circle().map_or(1.0, |(_, r)| r) * scene.disc_radius_px();
    (0.4 * size).clamp(2.0, 16.0)
}

fn push_geodesic(out: &mut String, scene: &RenderScene, g: &Geodesic, style: Style, label: Option<&str>, word: Option<&str>) {
    let (stroke, width) = style.stroke();
    let word_attr = word.map(|w| format!(" data-word=\"{}\"", escape(w))).unwrap_or_default();
    let _ = writeln!(
        out,
        "<path class=\"{}\"{word_attr} d=\"{}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{width}\"/>",
        style.class(),
        geodesic_path(scene, g)
    );
    if let Some(text) = label.filter(|t| !t.is_empty()) {
        let (x, y) = scene.to_px(label_anchor(g));
        let _ = writeln!(
            out,
            "<text class=\"label\" x=\"{}\" y=\"{}\" font-size=\"{}\" text-anchor=\"middle\" dominant-baseline=\"middle\">{}</text>",
            fmt_px(x),
            fmt_px(y),
            fmt_px(font_size(g, scene)),
            escape(text)
        );
    }
}

/// Deterministic SVG 1.1 document for the scene.
pub fn render_scene(scene: &RenderScene) -> Result<String> {
    let group = SchottkyGroup::new(scene.config)?;
    let translates = scene.translates(&group)?;
    let size = scene.size_px;
    let (cx, cy) = scene.to_px(Complex64::new(0.0, 0.0));
    let mut out = String::new();
    let _ = writeln!(out, "<?xml version=\"1.0\" encoding=\"UTF-8\"?>");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{size}\" height=\"{size}\" viewBox=\"0 0 {size} {size}\">"
    );
    let _ = writeln!(out, "<rect width=\"{size}\" height=\"{size}\" fill=\"white\"/>");
    let _ = writeln!(
        out,
        "<circle class=\"boundary\" cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>",
        fmt_px(cx),
        fmt_px(cy),
        fmt_px(scene.disc_radius_px())
    );
    for (word, g) in &translates {
        let style = if word.is_none() { Style::Side } else { Style::Translate };
        let label = family_label(g, &group, word.as_deref());
        push_geodesic(&mut out, scene, g, style, Some(&label), word.as_deref());
    }
    for e in &scene.extras {
        match e {
            Element::Geodesic { geodesic, style, label, word } => {
                push_geodesic(&mut out, scene, geodesic, *style, label.as_deref(), word.as_deref())
            }
            Element::Ray { to, label } => {
                let (x, y) = scene.to_px(to.to_complex());
                let _ = writeln!(
                    out,
                    "<path class=\"ray\" d=\"M {} {} L {} {}\" fill=\"none\" stroke=\"#27ae60\" stroke-width=\"1.5\"/>",
                    fmt_px(cx),
                    fmt_px(cy),
                    fmt_px(x),
                    fmt_px(y)
                );
                if let Some(text) = label {
                    let (lx, ly) = scene.to_px(to.to_complex() * 1.03);
                    let _ = writeln!(out, "<text class=\"label\" x=\"{}\" y=\"{}\" font-size=\"14\">{}</text>", fmt_px(lx), fmt_px(ly), escape(text));
                }
            }
            Element::BoundaryArc { arc, label } => {
                let (x1, y1) = scene.to_px(arc.start().to_complex());
                let (x2, y2) = scene.to_px(arc.end().to_complex());
                let r = scene.disc_radius_px();
                let large = u8::from(arc.width() > std::f64::consts::PI);
                // counterclockwise in the disc is clockwise on the y-down screen: sweep 1
                let _ = writeln!(
                    out,
                    "<path class=\"boundary-arc\" d=\"M {} {} A {} {} 0 {large} 1 {} {}\" fill=\"none\" stroke=\"#e67e22\" stroke-width=\"4\"/>",
                    fmt_px(x1),
                    fmt_px(y1),
                    fmt_px(r),
                    fmt_px(r),
                    fmt_px(x2),
                    fmt_px(y2)
                );
                if let Some(text) = label {
                    let (lx, ly) = scene.to_px(arc.midpoint().to_complex() * 1.035);
                    let _ = writeln!(out, "<text class=\"label\" x=\"{}\" y=\"{}\" font-size=\"12\">{}</text>", fmt_px(lx), fmt_px(ly), escape(text));
                }
            }
            Element::Marker { at, label } => {
                let (x, y) = scene.to_px(*at);
                let _ = writeln!(out, "<circle class=\"marker\" cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"black\"/>", fmt_px(x), fmt_px(y));
                if let Some(text) = label {
                    let _ = writeln!(out, "<text class=\"label\" x=\"{}\" y=\"{}\" font-size=\"12\">{}</text>", fmt_px(x + 5.0), fmt_px(y - 5.0), escape(text));
                }
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
