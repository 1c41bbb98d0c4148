//! Deterministic SVG waterfall charts of one period's effects.

use std::fmt::Write as _;

use crate::decompose::{EffectDirection, EffectVector};
use crate::report::format_value;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 40.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 50.0;

const COLOR_EXPANDING: &str = "#c0504d";
const COLOR_RESTRAINING: &str = "#4f81bd";
const COLOR_NEUTRAL: &str = "#9e9e9e";
const COLOR_TOTAL: &str = "#404040";

/// One bar of the waterfall. Effect bars span `[start, end]` on the running
/// total; the final ΔC bar spans `[0, delta_c]`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaterfallBar {
    pub label: String,
    pub value: f64,
    pub start: f64,
    pub end: f64,
    pub total: bool,
}

pub fn waterfall_bars(ev: &EffectVector) -> Vec<WaterfallBar> {
    let mut running = 0.0;
    let mut bars: Vec<WaterfallBar> = ev
        .effects
        .iter()
        .map(|(name, &value)| {
            let start = running;
            running += value;
            WaterfallBar {
                label: name.clone(),
                value,
                start,
                end: running,
                total: false,
            }
        })
        .collect();
    bars.push(WaterfallBar {
        label: "ΔC".to_owned(),
        value: ev.delta_c,
        start: 0.0,
        end: ev.delta_c,
        total: true,
    });
    bars
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn coord(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".to_owned()
    } else {
        s
    }
}

/// Renders the waterfall. Output depends only on `ev`.
pub fn render_waterfall_svg(ev: &EffectVector) -> String {
    let bars = waterfall_bars(ev);
    let (lo, hi) = bars
        .iter()
        .flat_map(|b| [b.start, b.end])
        .fold((0.0f64, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    let span = if hi > lo { hi - lo } else { 1.0 };
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let y = |v: f64| MARGIN_TOP + (hi - v) / span * plot_h;
    let slot = (WIDTH - MARGIN_LEFT - MARGIN_RIGHT) / bars.len() as f64;
    let bar_w = slot * 0.6;

    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" font-family=\"sans-serif\" font-size=\"12\">",
        w = WIDTH,
        h = HEIGHT
    );
    let _ = writeln!(
        s,
        "<title>Decomposition {}: ΔC = {}</title>",
        ev.label(),
        format_value(ev.delta_c)
    );
    let _ = writeln!(
        s,
        "<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"#ffffff\"/>"
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{}</text>",
        coord(WIDTH / 2.0),
        escape(&format!("Decomposition {}", ev.label()))
    );
    let _ = writeln!(
        s,
        "<line class=\"baseline\" x1=\"{}\" y1=\"{y0}\" x2=\"{}\" y2=\"{y0}\" stroke=\"#000000\" stroke-width=\"1\"/>",
        coord(MARGIN_LEFT),
        coord(WIDTH - MARGIN_RIGHT),
        y0 = coord(y(0.0))
    );

    for (i, bar) in bars.iter().enumerate() {
        let x = MARGIN_LEFT + slot * i as f64 + (slot - bar_w) / 2.0;
        let top = y(bar.start.max(bar.end));
        let height = y(bar.start.min(bar.end)) - top;
        let fill = if bar.total {
            COLOR_TOTAL
        } else {
            match EffectDirection::of(bar.value) {
                EffectDirection::Expanding => COLOR_EXPANDING,
                EffectDirection::Restraining => COLOR_RESTRAINING,
                EffectDirection::Neutral => COLOR_NEUTRAL,
            }
        };
        let _ = writeln!(
            s,
            "<g class=\"{class}\" data-label=\"{label}\" data-value=\"{value}\" data-start=\"{start}\" data-end=\"{end}\">",
            class = if bar.total { "bar total" } else { "bar" },
            label = escape(&bar.label),
            value = format_value(bar.value),
            start = format_value(bar.start),
            end = format_value(bar.end),
        );
        let _ = writeln!(
            s,
            "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{fill}\"/>",
            coord(x),
            coord(top),
            coord(bar_w),
            coord(height)
        );
        let cx = coord(x + bar_w / 2.0);
        let _ = writeln!(
            s,
            "<text x=\"{cx}\" y=\"{}\" text-anchor=\"middle\">{}</text>",
            coord(HEIGHT - MARGIN_BOTTOM / 2.0),
            escape(&bar.label)
        );
        let _ = writeln!(
            s,
            "<text x=\"{cx}\" y=\"{}\" text-anchor=\"middle\" font-size=\"10\">{}</text>",
            coord(top - 4.0),
            format_value(bar.value)
        );
        s.push_str("</g>\n");

        // connector to the next effect bar
        if !bar.total && i + 1 < bars.len() - 1 {
            let yc = coord(y(bar.end));
            let _ = writeln!(
                s,
                "<line class=\"connector\" x1=\"{}\" y1=\"{yc}\" x2=\"{}\" y2=\"{yc}\" stroke=\"#777777\" stroke-dasharray=\"3,3\"/>",
                coord(x + bar_w),
                coord(x + slot)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}
