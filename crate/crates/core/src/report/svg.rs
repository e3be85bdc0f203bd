//! Plain SVG charts. Every plotted point and box carries its value in `data-*`
//! attributes so charts can be checked against the tables without parsing paths.

use std::fmt::Write as _;

use crate::distribution::{BoxplotSummary, Metric};

use super::ReportBundle;

const WIDTH: f64 = 720.0;
const PANEL_HEIGHT: f64 = 300.0;
const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 140.0;
const MARGIN_TOP: f64 = 36.0;
const MARGIN_BOTTOM: f64 = 40.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

#[derive(Debug, Default)]
pub struct ChartSet {
    pub files: Vec<(String, Vec<u8>)>,
    pub warnings: Vec<String>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

struct Frame {
    top: f64,
    lo: f64,
    hi: f64,
    n: usize,
}

impl Frame {
    fn new(top: f64, values: impl Iterator<Item = f64>, n: usize) -> Self {
        let (mut lo, mut hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| {
            (a.min(v), b.max(v))
        });
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        lo = lo.min(0.0);
        if hi - lo < 1e-12 {
            hi = lo + 1.0;
        }
        Frame { top, lo, hi, n }
    }

    fn x(&self, i: usize) -> f64 {
        let inner = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
        MARGIN_LEFT + inner * (i as f64 + 0.5) / self.n.max(1) as f64
    }

    fn y(&self, v: f64) -> f64 {
        let inner = PANEL_HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
        self.top + MARGIN_TOP + inner * (1.0 - (v - self.lo) / (self.hi - self.lo))
    }

    fn axes(&self, out: &mut String, title: &str, labels: &[String]) {
        let bottom = self.y(self.lo);
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="14">{}</text>"#,
            MARGIN_LEFT,
            self.top + 22.0,
            escape(title)
        );
        let _ = writeln!(
            out,
            r##"<line x1="{l:.2}" y1="{t:.2}" x2="{l:.2}" y2="{b:.2}" stroke="#333"/>"##,
            l = MARGIN_LEFT,
            t = self.top + MARGIN_TOP,
            b = bottom
        );
        if self.lo < 0.0 && self.hi > 0.0 {
            let _ = writeln!(
                out,
                r##"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#999" stroke-dasharray="4 3"/>"##,
                MARGIN_LEFT,
                WIDTH - MARGIN_RIGHT,
                y = self.y(0.0)
            );
        }
        for v in [self.lo, self.hi] {
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="end">{}</text>"#,
                MARGIN_LEFT - 4.0,
                self.y(v) + 3.0,
                super::format_number(v, 3)
            );
        }
        for (i, label) in labels.iter().enumerate() {
            let _ = writeln!(
                out,
                r#"<text x="{:.2}" y="{:.2}" font-size="10" text-anchor="middle">{}</text>"#,
                self.x(i),
                bottom + 16.0,
                escape(label)
            );
        }
    }
}

fn document(panels: usize, body: &str) -> Vec<u8> {
    let height = PANEL_HEIGHT * panels as f64;
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{height}\" viewBox=\"0 0 {WIDTH} {height}\">\n\
         <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n{body}</svg>\n"
    )
    .into_bytes()
}

/// One line per series across the x labels.
fn line_chart(title: &str, labels: &[String], series: &[(&str, Vec<f64>)]) -> Vec<u8> {
    let frame = Frame::new(
        0.0,
        series.iter().flat_map(|(_, v)| v.iter().copied()),
        labels.len(),
    );
    let mut out = String::new();
    frame.axes(&mut out, title, labels);
    for (k, (name, values)) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let points: Vec<String> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| format!("{:.2},{:.2}", frame.x(i), frame.y(v)))
            .collect();
        let _ = writeln!(out, r#"<g class="series" data-series="{}">"#, escape(name));
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            points.join(" ")
        );
        for (i, &v) in values.iter().enumerate() {
            let _ = writeln!(
                out,
                r#"<circle cx="{:.2}" cy="{:.2}" r="2.5" fill="{color}" data-x="{}" data-value="{v}"/>"#,
                frame.x(i),
                frame.y(v),
                escape(&labels[i])
            );
        }
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-size="11" fill="{color}">{}</text>"#,
            WIDTH - MARGIN_RIGHT + 8.0,
            MARGIN_TOP + 14.0 * (k as f64 + 1.0),
            escape(name)
        );
        out.push_str("</g>\n");
    }
    document(1, &out)
}

fn box_panel(out: &mut String, top: f64, title: &str, boxes: &[(String, &BoxplotSummary)]) {
    let values = boxes.iter().flat_map(|(_, b)| {
        [b.whisker_low, b.whisker_high]
            .into_iter()
            .chain(b.outliers.iter().copied())
    });
    let frame = Frame::new(top, values, boxes.len());
    let labels: Vec<String> = boxes.iter().map(|(l, _)| l.clone()).collect();
    frame.axes(out, title, &labels);
    let half = ((WIDTH - MARGIN_LEFT - MARGIN_RIGHT) / boxes.len().max(1) as f64 * 0.3).min(14.0);
    for (i, (label, b)) in boxes.iter().enumerate() {
        let x = frame.x(i);
        let _ = writeln!(
            out,
            r#"<g class="box" data-label="{}" data-n="{}" data-whisker-low="{}" data-q1="{}" data-median="{}" data-q3="{}" data-whisker-high="{}">"#,
            escape(label),
            b.n,
            b.whisker_low,
            b.q1,
            b.median,
            b.q3,
            b.whisker_high
        );
        let _ = writeln!(
            out,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#333"/>"##,
            frame.y(b.whisker_low),
            frame.y(b.whisker_high)
        );
        let _ = writeln!(
            out,
            r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#cfe0f1" stroke="#1f77b4"/>"##,
            x - half,
            frame.y(b.q3),
            2.0 * half,
            (frame.y(b.q1) - frame.y(b.q3)).max(0.5)
        );
        let _ = writeln!(
            out,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#d62728" stroke-width="2"/>"##,
            x - half,
            x + half,
            y = frame.y(b.median)
        );
        for &o in &b.outliers {
            let _ = writeln!(
                out,
                r##"<circle class="outlier" cx="{x:.2}" cy="{:.2}" r="1.5" fill="none" stroke="#555" data-value="{o}"/>"##,
                frame.y(o)
            );
        }
        out.push_str("</g>\n");
    }
}

fn boxes_for(bundle: &ReportBundle, metric: Metric) -> Vec<(String, &BoxplotSummary)> {
    bundle
        .distributions
        .iter()
        .filter(|d| d.metric == metric)
        .map(|d| (d.label.clone(), &d.summary))
        .collect()
}

/// Renders every chart the bundle has data for. Charts without data are skipped
/// with a warning rather than failing the run.
pub fn render_charts(bundle: &ReportBundle) -> ChartSet {
    let mut set = ChartSet::default();
    let scale = bundle.metadata.settings.scale.as_str();

    let years: Vec<String> = bundle.stocks.iter().map(|s| s.year.to_string()).collect();
    if years.is_empty() {
        set.warnings
            .push("no observation years; stock charts skipped".to_owned());
    } else {
        let col = |f: fn(&crate::seats::YearStocks) -> f64| bundle.stocks.iter().map(f).collect::<Vec<_>>();
        set.files.push((
            "fig_journal_stocks.svg".to_owned(),
            line_chart(
                "Active journals",
                &years,
                &[("journals", col(|s| s.journals as f64))],
            ),
        ));
        set.files.push((
            "fig_seats_members.svg".to_owned(),
            line_chart(
                "Seats and members",
                &years,
                &[
                    ("seats", col(|s| s.seats as f64)),
                    ("members", col(|s| s.members as f64)),
                ],
            ),
        ));
    }

    // time series use genesis and adjacent rows only
    let series_rows: Vec<_> = bundle
        .intervals
        .iter()
        .filter(|r| {
            r.interval.is_genesis()
                || bundle
                    .metadata
                    .years
                    .windows(2)
                    .any(|w| r.interval.from_year() == Some(w[0]) && r.interval.to_year() == w[1])
        })
        .collect();
    if series_rows.is_empty() {
        set.warnings
            .push("no adjacent intervals; rate charts skipped".to_owned());
    } else {
        let labels: Vec<String> = series_rows.iter().map(|r| r.label.clone()).collect();
        let pick = |f: &dyn Fn(&super::IntervalResult) -> &crate::rates::RateRecord| -> Vec<f64> {
            series_rows
                .iter()
                .map(|r| bundle.metadata.settings.scale.pick(f(r)))
                .collect()
        };
        set.files.push((
            "fig_journal_rates.svg".to_owned(),
            line_chart(
                &format!("Journal rates ({scale})"),
                &labels,
                &[
                    ("creation", pick(&|r| &r.journal_rates.creation)),
                    ("destruction", pick(&|r| &r.journal_rates.destruction)),
                    ("net_growth", pick(&|r| &r.journal_rates.net_growth)),
                    ("persistence", pick(&|r| &r.journal_rates.persistence)),
                    ("turnover", pick(&|r| &r.journal_rates.turnover)),
                ],
            ),
        ));
        set.files.push((
            "fig_seat_rates.svg".to_owned(),
            line_chart(
                &format!("Seat rates ({scale})"),
                &labels,
                &[
                    ("created", pick(&|r| &r.seat_rates.created)),
                    ("destroyed", pick(&|r| &r.seat_rates.destroyed)),
                    ("net_growth", pick(&|r| &r.seat_rates.net_growth)),
                    ("turnover", pick(&|r| &r.seat_rates.turnover)),
                ],
            ),
        ));
        set.files.push((
            "fig_member_rates.svg".to_owned(),
            line_chart(
                &format!("Member rates ({scale})"),
                &labels,
                &[
                    ("retention", pick(&|r| &r.member_rates.retention)),
                    ("entry", pick(&|r| &r.member_rates.entry)),
                    ("exit", pick(&|r| &r.member_rates.exit)),
                    ("net_growth", pick(&|r| &r.member_rates.growth)),
                    ("turnover", pick(&|r| &r.member_rates.turnover)),
                ],
            ),
        ));
    }

    let board = boxes_for(bundle, Metric::BoardGrowth);
    if board.is_empty() {
        set.warnings
            .push("no distributions; box plot charts skipped".to_owned());
        return set;
    }
    let mut out = String::new();
    box_panel(
        &mut out,
        0.0,
        &format!("Board growth across journals ({scale})"),
        &board,
    );
    set.files
        .push(("fig_board_growth.svg".to_owned(), document(1, &out)));

    let member_metrics = [
        Metric::MemberGrowth,
        Metric::MemberTurnover,
        Metric::MemberRetention,
        Metric::MemberEntry,
        Metric::SystemEntry,
        Metric::MemberExit,
    ];
    let mut out = String::new();
    for (k, metric) in member_metrics.iter().enumerate() {
        let boxes = boxes_for(bundle, *metric);
        box_panel(
            &mut out,
            PANEL_HEIGHT * k as f64,
            &format!("{} across journals ({scale})", metric.as_str()),
            &boxes,
        );
    }
    set.files.push((
        "fig_member_dynamics.svg".to_owned(),
        document(member_metrics.len(), &out),
    ));
    set
}
