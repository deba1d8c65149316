//! Reports and their text, CSV and JSON renderings.
//!
//! CSV layouts (one header line, then rows):
//!
//! * `table`: `scenario,marker,arm,observable,re,im,value`
//! * `pointer-sweep`: `row,scenario,observable,marker,g,sigma,mean_position,mean_momentum,postselect_prob,re,im,value`
//!   with `row` = `run` for each coupling and `extrapolated` for the final
//!   row; on `run` rows `re`/`im` are the position and momentum channels.
//! * `montecarlo`: `scenario,observable,marker,g,sigma,n,seed,accepted,postselect_rate,mean_position,stderr,estimate,estimate_stderr,exact`
//!
//! Real numbers use the shortest representation that round-trips; complex
//! `value` columns are `a+bi` with 12 significant digits.

use serde::Serialize;

use cheshire_core::Complex64;

/// One weak value of the table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub marker: String,
    /// `L`, `R`, or `both` for the whole-system identity.
    pub arm: String,
    pub observable: String,
    pub re: f64,
    pub im: f64,
    pub value: String,
}

/// Pointer readout at one coupling strength.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointerRun {
    pub g: f64,
    pub sigma: f64,
    pub mean_position: f64,
    pub mean_momentum: f64,
    pub momentum_variance: f64,
    pub real_channel: f64,
    pub imag_channel: f64,
    pub postselect_prob: f64,
    pub n_samples: Option<u64>,
    pub stderr: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub observable: String,
    pub marker: String,
    /// `weak_limit_extrapolation` or `monte_carlo`.
    pub method: String,
    pub re: f64,
    /// Not sampled by Monte Carlo, which reads positions only.
    pub im: Option<f64>,
    /// `a+bi`, or just `a` when `im` is absent.
    pub value: String,
    /// Standard error of `re` (Monte Carlo only).
    pub stderr: Option<f64>,
    pub exact_re: f64,
    pub exact_im: f64,
    pub exact_value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarloRun {
    pub n: u64,
    pub seed: u64,
    pub accepted: u64,
    pub postselect_rate: f64,
    pub exact_postselect_prob: f64,
    pub exact_mean_position: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub singular_denominator: f64,
    pub short_form: f64,
    pub weak_ratio: f64,
    pub grid_boundary: f64,
    pub starvation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointerGrid {
    pub sigma: f64,
    pub points: usize,
    pub half_width_sigmas: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub seed: Option<u64>,
    pub tolerances: Tolerances,
    pub pointer: Option<PointerGrid>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub scenario_name: String,
    pub command: String,
    pub postselect_probability: f64,
    pub table: Vec<TableRow>,
    pub pointer_runs: Option<Vec<PointerRun>>,
    pub estimate: Option<Estimate>,
    pub montecarlo: Option<MonteCarloRun>,
    pub metadata: Metadata,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

/// `x` with `digits` significant digits, like C's `%.{digits}g`.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if exp < -4 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        return format!("{m}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `a+bi` with 12 significant digits.
pub fn fmt_complex(c: Complex64) -> String {
    // + 0.0 turns -0 into 0
    let re = fmt_sig(c.re + 0.0, 12);
    let im = fmt_sig(c.im + 0.0, 12);
    if im.starts_with('-') {
        format!("{re}{im}i")
    } else {
        format!("{re}+{im}i")
    }
}

/// Short form (`0`, `1`, `-1`, `i`, `-i`) when within `tol`, else `a+bi`.
pub fn fmt_complex_short(c: Complex64, tol: f64) -> String {
    let candidates = [
        (Complex64::new(0.0, 0.0), "0"),
        (Complex64::new(1.0, 0.0), "1"),
        (Complex64::new(-1.0, 0.0), "-1"),
        (Complex64::new(0.0, 1.0), "i"),
        (Complex64::new(0.0, -1.0), "-i"),
    ];
    for (v, s) in candidates {
        if (c - v).norm() <= tol {
            return s.into();
        }
    }
    fmt_complex(c)
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt_num<T: std::fmt::Debug>(x: Option<T>) -> String {
    x.map_or_else(String::new, |v| format!("{v:?}"))
}

const COLUMNS: [(&str, &str); 4] = [("Sx", "sx"), ("Sy", "sy"), ("Sz", "sz"), ("Pi", "I")];

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Csv => self.csv(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
        }
    }

    fn short(&self, re: f64, im: f64) -> String {
        fmt_complex_short(Complex64::new(re, im), self.metadata.tolerances.short_form)
    }

    fn text(&self) -> String {
        let mut out = format!("scenario: {}\n", self.scenario_name);
        out.push_str(&format!("post-selection probability: {}\n", fmt_sig(self.postselect_probability, 12)));
        let mut markers: Vec<&str> = Vec::new();
        for r in &self.table {
            if !markers.contains(&r.marker.as_str()) {
                markers.push(&r.marker);
            }
        }
        for m in markers {
            let rows: Vec<&TableRow> = self.table.iter().filter(|r| r.marker == m).collect();
            out.push_str(&format!("\nweak values at {m}\n"));
            let mut grid = vec![vec!["arm".to_string()]];
            grid[0].extend(COLUMNS.iter().map(|(_, h)| h.to_string()));
            for arm in ["L", "R"] {
                if !rows.iter().any(|r| r.arm == arm) {
                    continue;
                }
                let mut line = vec![arm.to_string()];
                for (prefix, _) in COLUMNS {
                    let name = format!("{prefix}{arm}");
                    line.push(
                        rows.iter()
                            .find(|r| r.observable == name)
                            .map_or_else(|| "-".to_string(), |r| self.short(r.re, r.im)),
                    );
                }
                grid.push(line);
            }
            if grid.len() > 1 {
                out.push_str(&align(&grid));
            }
            for r in rows.iter().filter(|r| r.arm == "both") {
                out.push_str(&format!("whole system {}: {}\n", r.observable, self.short(r.re, r.im)));
            }
        }
        if let Some(runs) = &self.pointer_runs {
            let e = self.estimate.as_ref();
            let what = e.map_or_else(String::new, |e| format!(" of {} at {}", e.observable, e.marker));
            out.push_str(&format!("\npointer{what}\n"));
            let mut grid = vec![vec![
                "g".to_string(),
                "shift/g".to_string(),
                "momentum/(2g var p)".to_string(),
                "P(post)".to_string(),
                "stderr/g".to_string(),
            ]];
            for r in runs {
                grid.push(vec![
                    fmt_sig(r.g, 12),
                    fmt_sig(r.real_channel, 12),
                    fmt_sig(r.imag_channel, 12),
                    fmt_sig(r.postselect_prob, 12),
                    r.stderr.map_or_else(|| "-".to_string(), |s| fmt_sig(s / r.g, 12)),
                ]);
            }
            out.push_str(&align(&grid));
        }
        if let Some(mc) = &self.montecarlo {
            out.push_str(&format!(
                "\nmonte carlo: n = {}, seed = {}, accepted = {} (rate {}, exact {})\n",
                mc.n,
                mc.seed,
                mc.accepted,
                fmt_sig(mc.postselect_rate, 12),
                fmt_sig(mc.exact_postselect_prob, 12)
            ));
        }
        if let Some(e) = &self.estimate {
            let err = e.stderr.map_or_else(String::new, |s| format!(" +/- {}", fmt_sig(s, 6)));
            let label = if e.method == "monte_carlo" { "sampled" } else { "extrapolated" };
            out.push_str(&format!("{label} weak value: {}{err}\n", e.value));
            out.push_str(&format!("exact weak value: {}\n", self.short(e.exact_re, e.exact_im)));
        }
        out
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        match self.command.as_str() {
            "pointer-sweep" => {
                out.push_str("row,scenario,observable,marker,g,sigma,mean_position,mean_momentum,postselect_prob,re,im,value\n");
                let e = self.estimate.as_ref().expect("sweep has an estimate");
                for r in self.pointer_runs.iter().flatten() {
                    out.push_str(&format!(
                        "run,{},{},{},{},{},{},{},{},{},{},{}\n",
                        self.scenario_name,
                        e.observable,
                        e.marker,
                        num(r.g),
                        num(r.sigma),
                        num(r.mean_position),
                        num(r.mean_momentum),
                        num(r.postselect_prob),
                        num(r.real_channel),
                        num(r.imag_channel),
                        fmt_complex(Complex64::new(r.real_channel, r.imag_channel)),
                    ));
                }
                out.push_str(&format!(
                    "extrapolated,{},{},{},,,,,,{},{},{}\n",
                    self.scenario_name,
                    e.observable,
                    e.marker,
                    num(e.re),
                    opt_num(e.im),
                    e.value
                ));
            }
            "montecarlo" => {
                out.push_str("scenario,observable,marker,g,sigma,n,seed,accepted,postselect_rate,mean_position,stderr,estimate,estimate_stderr,exact\n");
                let e = self.estimate.as_ref().expect("montecarlo has an estimate");
                let mc = self.montecarlo.as_ref().expect("montecarlo run");
                let r = &self.pointer_runs.as_ref().expect("montecarlo readout")[0];
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
                    self.scenario_name,
                    e.observable,
                    e.marker,
                    num(r.g),
                    num(r.sigma),
                    mc.n,
                    mc.seed,
                    mc.accepted,
                    num(mc.postselect_rate),
                    num(r.mean_position),
                    opt_num(r.stderr),
                    num(e.re),
                    opt_num(e.stderr),
                    e.exact_value,
                ));
            }
            _ => {
                out.push_str("scenario,marker,arm,observable,re,im,value\n");
                for r in &self.table {
                    out.push_str(&format!(
                        "{},{},{},{},{},{},{}\n",
                        self.scenario_name,
                        r.marker,
                        r.arm,
                        r.observable,
                        num(r.re),
                        num(r.im),
                        r.value
                    ));
                }
            }
        }
        out
    }
}

/// Left-aligned columns separated by two spaces.
fn align(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> =
        (0..cols).map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let mut line = String::new();
        for (c, cell) in r.iter().enumerate() {
            if c + 1 < r.len() {
                line.push_str(&format!("{cell:<w$}  ", w = widths[c]));
            } else {
                line.push_str(cell);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}
