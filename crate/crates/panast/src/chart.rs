//! Deterministic SVG rendering: Kiviat profiles and daily sparklines.
//!
//! Output is a plain string with fixed two-decimal coordinates. Axis
//! directions are compile-time constants, so identical inputs produce
//! byte-identical documents on every platform.

use std::fmt::Write;

use chrono::NaiveDate;

use crate::error::Error;
use crate::events::{TimePoint, TimeSeries};
use crate::lexicon::Sentiment;
use crate::score::ScoreVector;

/// Unit direction of each scale's axis: ordinal 0 points straight up,
/// later scales proceed clockwise (SVG y grows downward).
const AXIS_DIR: [(f64, f64); Sentiment::COUNT] = [
    (6.123233995736766e-17, -1.0),
    (0.5406408174555977, -0.8412535328311811),
    (0.9096319953545184, -0.4154150130018864),
    (0.9898214418809328, 0.14231483827328506),
    (0.7557495743542583, 0.6548607339452851),
    (0.2817325568414296, 0.9594929736144974),
    (-0.28173255684142945, 0.9594929736144975),
    (-0.7557495743542582, 0.6548607339452852),
    (-0.9898214418809327, 0.14231483827328517),
    (-0.9096319953545186, -0.4154150130018861),
    (-0.5406408174555974, -0.8412535328311812),
];

/// Fraction of the rim radius for a score: -1 at the center, +1 at the rim.
fn radial_fraction(p: f64) -> f64 {
    (p + 1.0) / 2.0
}

/// Two-decimal coordinate, with negative zero normalized away.
fn fmt2(v: f64) -> String {
    let s = format!("{v:.2}");
    if s == "-0.00" {
        "0.00".to_owned()
    } else {
        s
    }
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Render an eleven-axis Kiviat (radar) profile of one score vector.
///
/// Axes follow scale order clockwise from the top; the dashed ring marks
/// the baseline (p = 0) halfway between the center (-1) and the rim (+1).
pub fn render_kiviat(vector: &ScoreVector) -> String {
    const CX: f64 = 280.0;
    const CY: f64 = 250.0;
    const R: f64 = 180.0;
    const LABEL_R: f64 = 204.0;

    let mut out = String::new();
    out.push_str(concat!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"560\" height=\"520\" ",
        "viewBox=\"0 0 560 520\" role=\"img\">\n"
    ));
    out.push_str("<title>Affect profile</title>\n");
    writeln!(
        out,
        "<desc>n={}, baseline: {}</desc>",
        vector.event_size,
        esc(&vector.provenance)
    )
    .unwrap();
    out.push_str(concat!(
        "<style>\n",
        ".bg { fill: #ffffff; }\n",
        ".ring { fill: none; stroke: #d8dee4; }\n",
        ".baseline { fill: none; stroke: #9aa5b1; stroke-dasharray: 4 3; }\n",
        ".axis { stroke: #d8dee4; }\n",
        ".label { font: 13px sans-serif; fill: #333333; text-anchor: middle; ",
        "dominant-baseline: middle; }\n",
        ".caption { font: 12px sans-serif; fill: #666666; text-anchor: middle; }\n",
        ".profile { fill: #2b6cb0; fill-opacity: 0.25; stroke: #2b6cb0; stroke-width: 2; }\n",
        ".vertex { fill: #2b6cb0; }\n",
        "</style>\n",
    ));
    out.push_str("<rect class=\"bg\" x=\"0\" y=\"0\" width=\"560\" height=\"520\"/>\n");

    for frac in [0.25, 0.75, 1.0] {
        writeln!(
            out,
            "<circle class=\"ring\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
            fmt2(CX),
            fmt2(CY),
            fmt2(R * frac)
        )
        .unwrap();
    }
    writeln!(
        out,
        "<circle class=\"baseline\" cx=\"{}\" cy=\"{}\" r=\"{}\"/>",
        fmt2(CX),
        fmt2(CY),
        fmt2(R * 0.5)
    )
    .unwrap();

    for s in Sentiment::ALL {
        let (dx, dy) = AXIS_DIR[s.index()];
        writeln!(
            out,
            "<line class=\"axis\" x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>",
            fmt2(CX),
            fmt2(CY),
            fmt2(CX + R * dx),
            fmt2(CY + R * dy)
        )
        .unwrap();
        writeln!(
            out,
            "<text class=\"label\" x=\"{}\" y=\"{}\">{}</text>",
            fmt2(CX + LABEL_R * dx),
            fmt2(CY + LABEL_R * dy),
            s.name()
        )
        .unwrap();
    }

    let vertices: Vec<(f64, f64)> = Sentiment::ALL
        .iter()
        .map(|&s| {
            let (dx, dy) = AXIS_DIR[s.index()];
            let r = R * radial_fraction(vector.entries[s].p);
            (CX + r * dx, CY + r * dy)
        })
        .collect();
    let points: Vec<String> = vertices
        .iter()
        .map(|&(x, y)| format!("{},{}", fmt2(x), fmt2(y)))
        .collect();
    writeln!(
        out,
        "<polygon class=\"profile\" points=\"{}\"/>",
        points.join(" ")
    )
    .unwrap();
    for (x, y) in &vertices {
        writeln!(
            out,
            "<circle class=\"vertex\" cx=\"{}\" cy=\"{}\" r=\"3\"/>",
            fmt2(*x),
            fmt2(*y)
        )
        .unwrap();
    }

    out.push_str(concat!(
        "<text class=\"caption\" x=\"280\" y=\"506\">",
        "-1 at center, +1 at rim; dashed ring is the baseline (p = 0)",
        "</text>\n",
    ));
    out.push_str("</svg>\n");
    out
}

/// A rendered sparkline sheet plus the marker dates that fell outside the
/// plotted span and were skipped.
#[derive(Clone, Debug)]
pub struct Sparklines {
    pub svg: String,
    pub ignored_markers: Vec<NaiveDate>,
}

/// Consecutive-day runs of the series, as index ranges. A gap in the dates
/// breaks the line rather than interpolating across missing days.
fn runs(points: &[TimePoint]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..points.len() {
        if (points[i].date - points[i - 1].date).num_days() != 1 {
            out.push((start, i));
            start = i;
        }
    }
    out.push((start, points.len()));
    out
}

/// Render one small line chart per requested sentiment over a shared date
/// axis. An empty `sentiments` slice selects all eleven scales. Vertical
/// marker lines are drawn at the given dates; dates outside the plotted
/// span are skipped and reported.
pub fn render_sparklines(
    series: &TimeSeries,
    sentiments: &[Sentiment],
    markers: &[NaiveDate],
) -> Result<Sparklines, Error> {
    const LEFT: f64 = 130.0;
    const PLOT_W: f64 = 490.0;
    const TOP: f64 = 28.0;
    const ROW_H: f64 = 48.0;
    const BAND_PAD: f64 = 6.0;
    const BAND_H: f64 = 36.0;
    const W: f64 = 640.0;

    if series.points.is_empty() {
        return Err(Error::EmptyEvent);
    }
    let subset: Vec<Sentiment> = if sentiments.is_empty() {
        Sentiment::ALL.to_vec()
    } else {
        sentiments.to_vec()
    };

    let d0 = series.points.first().expect("non-empty").date;
    let d1 = series.points.last().expect("non-empty").date;
    let span = (d1 - d0).num_days();
    let x = |d: NaiveDate| -> f64 {
        if span == 0 {
            LEFT + PLOT_W / 2.0
        } else {
            LEFT + (d - d0).num_days() as f64 / span as f64 * PLOT_W
        }
    };
    let rows = subset.len();
    let height = TOP + rows as f64 * ROW_H + 14.0;
    let plot_bottom = TOP + rows as f64 * ROW_H;

    let mut out = String::new();
    writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" \
         viewBox=\"0 0 {0} {1}\" role=\"img\">",
        W as u32, height as u32
    )
    .unwrap();
    match &series.region {
        Some(region) => writeln!(
            out,
            "<title>{} [{}] daily affect</title>",
            esc(&series.event),
            esc(region)
        )
        .unwrap(),
        None => writeln!(out, "<title>{} daily affect</title>", esc(&series.event)).unwrap(),
    }
    out.push_str(concat!(
        "<style>\n",
        ".bg { fill: #ffffff; }\n",
        ".dates { font: 11px sans-serif; fill: #666666; }\n",
        ".rowlabel { font: 12px sans-serif; fill: #333333; text-anchor: end; ",
        "dominant-baseline: middle; }\n",
        ".zero { stroke: #d8dee4; stroke-dasharray: 4 3; }\n",
        ".spark { fill: none; stroke: #2b6cb0; stroke-width: 1.5; }\n",
        ".dot { fill: #2b6cb0; }\n",
        ".marker { stroke: #c0392b; stroke-dasharray: 2 2; }\n",
        "</style>\n",
    ));
    writeln!(
        out,
        "<rect class=\"bg\" x=\"0\" y=\"0\" width=\"{}\" height=\"{}\"/>",
        W as u32, height as u32
    )
    .unwrap();

    if span == 0 {
        writeln!(
            out,
            "<text class=\"dates\" x=\"{}\" y=\"18\" text-anchor=\"middle\">{d0}</text>",
            fmt2(LEFT + PLOT_W / 2.0)
        )
        .unwrap();
    } else {
        writeln!(
            out,
            "<text class=\"dates\" x=\"{}\" y=\"18\">{d0}</text>",
            fmt2(LEFT)
        )
        .unwrap();
        writeln!(
            out,
            "<text class=\"dates\" x=\"{}\" y=\"18\" text-anchor=\"end\">{d1}</text>",
            fmt2(LEFT + PLOT_W)
        )
        .unwrap();
    }

    let mut ignored = Vec::new();
    for &m in markers {
        if m < d0 || m > d1 {
            ignored.push(m);
            continue;
        }
        writeln!(
            out,
            "<line class=\"marker\" x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\"/>",
            fmt2(x(m)),
            fmt2(TOP),
            fmt2(plot_bottom)
        )
        .unwrap();
    }

    let segments = runs(&series.points);
    for (row, &s) in subset.iter().enumerate() {
        let band_top = TOP + row as f64 * ROW_H + BAND_PAD;
        let y = |p: f64| -> f64 { band_top + (1.0 - radial_fraction(p)) * BAND_H };
        let mid = band_top + BAND_H / 2.0;
        writeln!(
            out,
            "<text class=\"rowlabel\" x=\"122\" y=\"{}\">{}</text>",
            fmt2(mid),
            s.name()
        )
        .unwrap();
        writeln!(
            out,
            "<line class=\"zero\" x1=\"{}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\"/>",
            fmt2(LEFT),
            fmt2(y(0.0)),
            fmt2(LEFT + PLOT_W)
        )
        .unwrap();
        for &(a, b) in &segments {
            let pts = &series.points[a..b];
            if pts.len() == 1 {
                writeln!(
                    out,
                    "<circle class=\"dot\" cx=\"{}\" cy=\"{}\" r=\"2\"/>",
                    fmt2(x(pts[0].date)),
                    fmt2(y(pts[0].vector.entries[s].p))
                )
                .unwrap();
            } else {
                let coords: Vec<String> = pts
                    .iter()
                    .map(|p| format!("{},{}", fmt2(x(p.date)), fmt2(y(p.vector.entries[s].p))))
                    .collect();
                writeln!(
                    out,
                    "<polyline class=\"spark\" points=\"{}\"/>",
                    coords.join(" ")
                )
                .unwrap();
            }
        }
    }

    out.push_str("</svg>\n");
    Ok(Sparklines {
        svg: out,
        ignored_markers: ignored,
    })
}
