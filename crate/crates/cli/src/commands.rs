//! Subcommand implementations. Each writes its artifacts and returns them.

use std::path::Path;

use cournot_core::dynamics::{
    classify_stability, stability_interval, stability_zone_scan, BifurcationScan, SpectrumReport, NEUTRALITY_TOLERANCE,
};
use cournot_core::model::{nash_linear_solve, BaselineConfig, IterateMode, StateVector, Trajectory};

use crate::error::{CliError, Result};
use crate::output::{fmt_num, fmt_short, ArtifactWriter, CsvTable, RunArtifacts};
use crate::scenario::Scenario;
use crate::svg::{color, Chart, Series, Style};

pub const DEFAULT_STEPS: usize = 100;
pub const DEFAULT_D_LO: f64 = -0.17;
pub const DEFAULT_D_HI: f64 = 0.52;
pub const MAX_ZONE_MARKETS: usize = 1000;

/// Firm and market indices are 1-based in every CSV.
fn push_state(table: &mut CsvTable, prefix: &[String], state: &StateVector) {
    for i in 0..state.firms() {
        for j in 0..state.markets() {
            let mut cells = prefix.to_vec();
            cells.extend([(i + 1).to_string(), (j + 1).to_string(), fmt_num(state.get(i, j))]);
            table.row(cells);
        }
    }
}

fn equilibrium_table(nash: &StateVector) -> CsvTable {
    let mut table = CsvTable::new(&["firm", "market", "quantity"]);
    push_state(&mut table, &[], nash);
    table
}

fn trajectory_series(
    t: &Trajectory,
    firm: usize,
    market: usize,
    style: Style,
    label: String,
    c: &'static str,
) -> Series {
    Series {
        label,
        color: c,
        style,
        points: t.series(firm, market).into_iter().enumerate().map(|(k, q)| (k as f64, q)).collect(),
    }
}

fn horizontal(value: f64, steps: usize, c: &'static str) -> Series {
    Series { label: String::new(), color: c, style: Style::Dashed, points: vec![(0.0, value), (steps as f64, value)] }
}

/// Settings of `simulate` after merging flags with the scenario block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSettings {
    pub steps: usize,
    pub mode: IterateMode,
}

impl RunSettings {
    pub fn resolve(scenario: &Scenario, steps: Option<usize>, mode: Option<IterateMode>) -> Result<Self> {
        let steps = steps.or(scenario.options.steps).unwrap_or(DEFAULT_STEPS);
        if steps == 0 {
            return Err(CliError::Usage("T must be >= 1".into()));
        }
        Ok(Self { steps, mode: mode.or(scenario.options.mode).unwrap_or(IterateMode::Raw) })
    }

    fn tag(&self) -> String {
        format!("steps={};mode={}", self.steps, self.mode)
    }
}

pub fn cmd_simulate(scenario: &Scenario, settings: RunSettings, out_dir: &Path, svg: bool) -> Result<RunArtifacts> {
    let g = &scenario.config;
    let nash = nash_linear_solve(g)?;
    let trajectory = g.simulate(&scenario.initial_state(), settings.steps, settings.mode)?;

    let mut table = CsvTable::new(&["step", "firm", "market", "quantity"]);
    for (k, state) in trajectory.states.iter().enumerate() {
        push_state(&mut table, &[k.to_string()], state);
    }

    let mut w = ArtifactWriter::create(out_dir, "simulate", &[&scenario.digest, &settings.tag()])?;
    w.write("trajectory.csv", table.as_str())?;
    w.write("equilibrium.csv", equilibrium_table(&nash).as_str())?;
    if svg {
        let mut series = Vec::new();
        for j in 0..g.markets() {
            series.push(trajectory_series(&trajectory, 0, j, Style::Line, format!("q1 market {}", j + 1), color(j)));
            series.push(horizontal(nash.get(0, j), trajectory.steps(), color(j)));
        }
        let chart = Chart {
            title: format!("Firm 1 output, d = {}, {} mode", fmt_short(g.scale(), 6), settings.mode),
            x_label: "t".into(),
            y_label: "quantity".into(),
            series,
        };
        w.write("trajectory.svg", &chart.render())?;
    }
    w.finish()
}

pub fn cmd_equilibrium(scenario: &Scenario, out_dir: &Path) -> Result<(StateVector, RunArtifacts)> {
    let nash = nash_linear_solve(&scenario.config)?;
    let mut w = ArtifactWriter::create(out_dir, "equilibrium", &[&scenario.digest])?;
    w.write("equilibrium.csv", equilibrium_table(&nash).as_str())?;
    Ok((nash, w.finish()?))
}

/// One-line summary, e.g. `Stable, rho=0.75, interval=(-0.166667, 0.5)`.
/// The interval is a duopoly result and reads `n/a` for other firm counts.
pub fn stability_summary(report: &SpectrumReport, firms: usize, markets: usize) -> Result<String> {
    let interval = if firms == 2 {
        let iv = stability_interval(markets)?;
        format!("({}, {})", fmt_short(iv.d_lower, 6), fmt_short(iv.d_upper, 6))
    } else {
        "n/a".into()
    };
    Ok(format!("{}, rho={}, interval={}", report.stability, fmt_short(report.spectral_radius, 6), interval))
}

pub fn cmd_stability(scenario: &Scenario, out_dir: &Path, svg: bool) -> Result<(String, RunArtifacts)> {
    let g = &scenario.config;
    let report = classify_stability(g, NEUTRALITY_TOLERANCE)?;
    let summary = stability_summary(&report, g.firms(), g.markets())?;

    let mut table = CsvTable::new(&["index", "lambda"]);
    for (k, l) in report.eigenvalues.iter().enumerate() {
        table.row([(k + 1).to_string(), fmt_num(*l)]);
    }
    let mut w = ArtifactWriter::create(out_dir, "stability", &[&scenario.digest])?;
    w.write("eigen.csv", table.as_str())?;
    if svg {
        let n = report.eigenvalues.len();
        let chart = Chart {
            title: format!("Eigenvalues, d = {}", fmt_short(g.scale(), 6)),
            x_label: "index".into(),
            y_label: "lambda".into(),
            series: vec![
                Series {
                    label: "lambda".into(),
                    color: color(0),
                    style: Style::Line,
                    points: report.eigenvalues.iter().enumerate().map(|(k, &l)| ((k + 1) as f64, l)).collect(),
                },
                Series {
                    label: "+1".into(),
                    color: color(1),
                    style: Style::Dashed,
                    points: vec![(1.0, 1.0), (n as f64, 1.0)],
                },
                Series {
                    label: "-1".into(),
                    color: color(1),
                    style: Style::Dashed,
                    points: vec![(1.0, -1.0), (n as f64, -1.0)],
                },
            ],
        };
        w.write("eigen.svg", &chart.render())?;
    }
    Ok((summary, w.finish()?))
}

/// Scan flags as given on the command line; `None` falls back to the
/// scenario block, then to the defaults.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScanFlags {
    pub d_lo: Option<f64>,
    pub d_hi: Option<f64>,
    pub points: Option<usize>,
    pub transient: Option<usize>,
    pub samples: Option<usize>,
    pub mode: Option<IterateMode>,
}

impl ScanFlags {
    pub fn resolve(&self, scenario: &Scenario) -> Result<BifurcationScan> {
        let o = &scenario.options;
        let (lo, hi) = (self.d_lo.unwrap_or(DEFAULT_D_LO), self.d_hi.unwrap_or(DEFAULT_D_HI));
        if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
            return Err(CliError::Usage(format!("d range must satisfy d-lo < d-hi, got [{lo}, {hi}]")));
        }
        let points = self.points.unwrap_or(BifurcationScan::DEFAULT_POINTS);
        if points < 2 {
            return Err(CliError::Usage("points must be >= 2".into()));
        }
        let samples = self.samples.or(o.samples).unwrap_or(BifurcationScan::DEFAULT_SAMPLES);
        if samples == 0 {
            return Err(CliError::Usage("samples must be >= 1".into()));
        }
        let mut scan = BifurcationScan::new(lo, hi)
            .points(points)
            .transient(self.transient.or(o.transient).unwrap_or(BifurcationScan::DEFAULT_TRANSIENT))
            .samples(samples)
            .mode(self.mode.or(o.mode).unwrap_or(IterateMode::Clipped));
        if let Some(initial) = &o.initial {
            scan = scan.initial(initial.clone());
        }
        Ok(scan)
    }
}

fn scan_tag(scan: &BifurcationScan) -> String {
    format!(
        "d_lo={};d_hi={};points={};transient={};samples={};mode={}",
        fmt_num(scan.d_lo),
        fmt_num(scan.d_hi),
        scan.points,
        scan.transient,
        scan.samples,
        scan.mode
    )
}

pub fn cmd_bifurcate(scenario: &Scenario, scan: &BifurcationScan, out_dir: &Path, svg: bool) -> Result<RunArtifacts> {
    let data = scan.run(&scenario.config)?;

    let mut table = CsvTable::new(&["d", "firm", "market", "quantity"]);
    for cell in &data.cells {
        let d = fmt_num(cell.d);
        for i in 0..data.firms {
            for j in 0..data.markets {
                let (firm, market) = ((i + 1).to_string(), (j + 1).to_string());
                if cell.divergent {
                    table.row([d.as_str(), &firm, &market, "divergent"]);
                } else {
                    for q in cell.series(i, j) {
                        table.row([d.as_str(), &firm, &market, &fmt_num(q)]);
                    }
                }
            }
        }
    }

    let mut w = ArtifactWriter::create(out_dir, "bifurcate", &[&scenario.digest, &scan_tag(scan)])?;
    w.write("bifurcation.csv", table.as_str())?;
    if svg {
        let points = data.cells.iter().flat_map(|c| c.series(0, 0).map(move |q| (c.d, q))).collect();
        let chart = Chart {
            title: format!("Bifurcation of q1 market 1, {} mode", scan.mode),
            x_label: "d".into(),
            y_label: "q1 market 1".into(),
            series: vec![Series { label: String::new(), color: color(0), style: Style::Dots, points }],
        };
        w.write("bifurcation.svg", &chart.render())?;
    }
    w.finish()
}

pub fn cmd_zone(m_min: usize, m_max: usize, out_dir: &Path, svg: bool) -> Result<RunArtifacts> {
    if m_min < 1 || m_min > m_max || m_max > MAX_ZONE_MARKETS {
        return Err(CliError::Usage(format!(
            "market range must satisfy 1 <= m-min <= m-max <= {MAX_ZONE_MARKETS}, got {m_min}..{m_max}"
        )));
    }
    let rows = stability_zone_scan(m_min, m_max)?;
    let mut table = CsvTable::new(&["m", "d_lower", "d_upper"]);
    for iv in &rows {
        table.row([iv.markets.to_string(), fmt_num(iv.d_lower), fmt_num(iv.d_upper)]);
    }
    let mut w = ArtifactWriter::create(out_dir, "zone", &[&format!("m_min={m_min};m_max={m_max}")])?;
    w.write("zone.csv", table.as_str())?;
    if svg {
        let lower = rows.iter().map(|iv| (iv.markets as f64, iv.d_lower)).collect();
        // The unbounded upper edge is drawn at the plot's top by omission.
        let upper = rows.iter().filter(|iv| iv.d_upper.is_finite()).map(|iv| (iv.markets as f64, iv.d_upper)).collect();
        let chart = Chart {
            title: "Stability zone".into(),
            x_label: "markets".into(),
            y_label: "d".into(),
            series: vec![
                Series { label: "lower edge".into(), color: color(0), style: Style::Line, points: lower },
                Series { label: "upper edge".into(), color: color(1), style: Style::Line, points: upper },
            ],
        };
        w.write("zone.svg", &chart.render())?;
    }
    w.finish()
}

/// Retail trajectory next to `M` independent single-market baselines that
/// share each market's intercept, the costs and `d`. Each baseline starts
/// from the retail initial state's slice for its market.
pub fn cmd_compare(scenario: &Scenario, settings: RunSettings, out_dir: &Path, svg: bool) -> Result<RunArtifacts> {
    let g = &scenario.config;
    let initial = scenario.initial_state();
    let retail = g.simulate(&initial, settings.steps, settings.mode)?;
    let fisher = (0..g.markets())
        .map(|j| {
            let base = BaselineConfig::new(g.intercepts()[j], g.costs().to_vec(), g.scale())?;
            base.fisher_trajectory(&initial.market_slice(j), settings.steps)
        })
        .collect::<cournot_core::Result<Vec<_>>>()?;

    let mut table = CsvTable::new(&["step", "model", "firm", "market", "quantity"]);
    for (k, state) in retail.states.iter().enumerate() {
        push_state(&mut table, &[k.to_string(), "retail".into()], state);
    }
    let longest = fisher.iter().map(|t| t.states.len()).max().unwrap_or(0);
    for k in 0..longest {
        for i in 0..g.firms() {
            for (j, t) in fisher.iter().enumerate() {
                if let Some(state) = t.states.get(k) {
                    table.row([
                        k.to_string(),
                        "fisher".into(),
                        (i + 1).to_string(),
                        (j + 1).to_string(),
                        fmt_num(state.get(i, 0)),
                    ]);
                }
            }
        }
    }

    let mut w = ArtifactWriter::create(out_dir, "compare", &[&scenario.digest, &settings.tag()])?;
    w.write("compare.csv", table.as_str())?;
    if svg {
        let chart = Chart {
            title: format!("Firm 1, market 1, d = {}", fmt_short(g.scale(), 6)),
            x_label: "t".into(),
            y_label: "quantity".into(),
            series: vec![
                trajectory_series(&retail, 0, 0, Style::Line, "retail".into(), color(0)),
                trajectory_series(&fisher[0], 0, 0, Style::Line, "fisher".into(), color(1)),
            ],
        };
        w.write("compare.svg", &chart.render())?;
    }
    w.finish()
}
