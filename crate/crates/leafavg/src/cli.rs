//! Command-line driver. Every subcommand prints a short result on stdout;
//! with `--out DIR` it also writes its artifacts and a `manifest.json`
//! listing them with their tolerance metadata.
//!
//! `run --config FILE` reads a JSON object whose `command` key names the
//! subcommand and whose other keys are that subcommand's long options.
//!
//! Exit codes: 0 on success (including hypothesis warnings, which set
//! `hypothesis_ok: false` in the manifest), 2 on schema or argument errors,
//! 3 when a resource cap is hit.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::actions1d::iet::{preset_four_interval, preset_reducible, preset_rotation};
use crate::actions1d::{
    check_ping_pong, make_ping_pong, CircleAction, IntervalExchange, PingPongLayout, TorusRotation,
};
use crate::averages::{ball_average, rotation_ball_average, BallMode, Observable};
use crate::error::{Error, Result};
use crate::flows::{flow, leaf_time_average_series, time_average, trajectory_csv, FlowPoint, Roof, SuspensionSpace};
use crate::geometry::{
    assemble_sigma, build_corner_plug, plug_tree_distances, plug_tree_root_to_leaves, Sigma, SigmaSpec,
};
use crate::group_core::{
    ball_size, folner_defect, lambda_series, orbit_ball, FreeAction, GroupAction, PhasePoint, Word,
};
use crate::suspension::{
    large_boundary_certificate, product_extension_check, sandwich_bounds, small_boundary_limits, thin_check,
    transferred_gap, PlugSpec,
};
use crate::tolerances::{ORBIT_TOL, PINGPONG_ORBIT_TOL, WORD_CAP};

#[derive(Debug, Parser)]
#[command(name = "leafavg", version, about = "Ball averages, plug certificates and surface geometry")]
pub struct Cli {
    /// Write artifacts and manifest.json into this directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Size of the ball G_n of the free group on k generators.
    Ball {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// Orbit ball sizes |G_m(y)| and points.
    Orbit {
        #[command(flatten)]
        action: ActionArgs,
        #[arg(long)]
        n: usize,
    },
    /// Sphere-to-ball ratio series.
    Lambda {
        #[command(flatten)]
        action: ActionArgs,
        #[arg(long)]
        n: usize,
    },
    /// Følner defect |a G_n(y) △ G_n(y)| / |G_n(y)|.
    Folner {
        #[command(flatten)]
        action: ActionArgs,
        #[arg(long)]
        word: String,
        #[arg(long)]
        n: usize,
    },
    /// Ball average of an observable over the orbit ball.
    BallAverage {
        #[command(flatten)]
        action: ActionArgs,
        #[command(flatten)]
        obs: ObservableArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Mode::Words)]
        mode: Mode,
    },
    /// Plug sandwich bounds at a leaf radius.
    Sandwich {
        #[command(flatten)]
        action: ActionArgs,
        #[command(flatten)]
        obs: ObservableArgs,
        #[command(flatten)]
        plug: PlugArgs,
        #[arg(long)]
        r: f64,
    },
    /// Trailing limsup/liminf of the plug averages in the small-boundary case.
    SmallLimits {
        #[command(flatten)]
        action: ActionArgs,
        #[command(flatten)]
        obs: ObservableArgs,
        #[command(flatten)]
        plug: PlugArgs,
        #[arg(long = "N")]
        big_n: usize,
        #[arg(long, value_enum, default_value_t = Mode::Classes)]
        mode: Mode,
    },
    /// Oscillation certificate for thin plugs.
    Certificate {
        /// f2-thin | z-thin; overrides --action and --plug.
        #[arg(long)]
        preset: Option<String>,
        #[command(flatten)]
        action: ActionArgs,
        #[command(flatten)]
        plug: PlugArgs,
        #[arg(long = "N", default_value_t = 12)]
        big_n: usize,
    },
    /// Tree surface: build summary, distances, balls, oscillation series.
    Sigma {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Emit the series at radii 2kL and 2kL-2Δ*.
        #[arg(long)]
        series: bool,
        /// Largest k in the series; defaults to depth - 1.
        #[arg(long)]
        kmax: Option<u32>,
        /// Two chart points `k,l,x,y;k,l,x,y`.
        #[arg(long)]
        distance: Option<String>,
        /// Ball centre `k,l,x,y`, used with --r.
        #[arg(long)]
        ball: Option<String>,
        #[arg(long)]
        r: Option<f64>,
    },
    /// Planar plug piece with three equidistant boundary arcs.
    CornerPlug {
        #[arg(long, default_value_t = 0.25)]
        alpha: f64,
        #[arg(long, default_value_t = 0.02)]
        h: f64,
    },
    /// Distances between the roots of k glued plug trees of depth n.
    PlugTree {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 1.0)]
        r0: f64,
    },
    /// Suspension flow over an interval exchange.
    Flow {
        #[command(flatten)]
        space: FlowArgs,
        #[arg(long)]
        t: f64,
        /// Trajectory samples written to trajectory.csv.
        #[arg(long, default_value_t = 200)]
        steps: usize,
    },
    /// Symmetric time average along a flow line.
    TimeAverage {
        #[command(flatten)]
        space: FlowArgs,
        #[command(flatten)]
        obs: ObservableArgs,
        #[arg(long = "T")]
        big_t: f64,
        /// Also emit the series at T·2^-j for j below this count.
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Continuous ball average of a torus translation.
    RotationAverage {
        /// One translation vector per flag, comma separated.
        #[arg(long, required = true)]
        alpha: Vec<String>,
        #[command(flatten)]
        obs: ObservableArgs,
        /// Base point, comma separated; defaults to the origin.
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        r: f64,
    },
    /// Product extension check on the tree-surface series.
    ProductCheck {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Diameter of the compact factor; defaults to Δ*/2.
        #[arg(long)]
        r1: Option<f64>,
        #[arg(long)]
        kmax: Option<u32>,
    },
    /// Run a JSON experiment config.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Mode {
    Words,
    Classes,
}

impl From<Mode> for BallMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Words => BallMode::Words,
            Mode::Classes => BallMode::Classes,
        }
    }
}

/// Generator action, as JSON or shorthand: `rotation:ALPHA`, `pingpong`,
/// `pingpong:3`, `free:K`, `iet:rotation|four|reducible`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ActionSpec {
    Rotation {
        alpha: f64,
    },
    Pingpong {
        #[serde(default = "two")]
        generators: usize,
        #[serde(default)]
        layout: Option<PingPongLayout>,
    },
    Free {
        rank: usize,
    },
    Iet {
        lengths: Vec<f64>,
        perm: Vec<usize>,
    },
    Torus {
        alpha: Vec<Vec<f64>>,
    },
}

fn two() -> usize {
    2
}

fn iet_preset(name: &str) -> Result<IntervalExchange<f64>> {
    match name {
        "rotation" => Ok(preset_rotation()),
        "four" => Ok(preset_four_interval()),
        "reducible" => Ok(preset_reducible()),
        _ => Err(Error::Invalid(format!("unknown interval exchange preset {name:?}"))),
    }
}

impl FromStr for ActionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            return serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()));
        }
        let (head, arg) = s.split_once(':').map_or((s, None), |(h, a)| (h, Some(a)));
        let num = |a: Option<&str>| -> Result<f64> {
            a.ok_or_else(|| Error::Parse(format!("{head} needs a parameter")))?
                .parse()
                .map_err(|_| Error::Parse(format!("bad parameter in {s:?}")))
        };
        match head {
            "rotation" => Ok(ActionSpec::Rotation { alpha: num(arg)? }),
            "pingpong" => Ok(ActionSpec::Pingpong {
                generators: arg.map_or(Ok(2.0), |a| num(Some(a)))? as usize,
                layout: None,
            }),
            "free" => Ok(ActionSpec::Free {
                rank: num(arg)? as usize,
            }),
            "iet" => {
                let t = iet_preset(arg.unwrap_or("four"))?;
                Ok(ActionSpec::Iet {
                    lengths: t.lengths().to_vec(),
                    perm: t.perm().to_vec(),
                })
            }
            _ => Err(Error::Parse(format!("unknown action {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ActionArgs {
    #[arg(long, default_value = "pingpong")]
    pub action: String,
    /// Base point, comma separated; defaults per action.
    #[arg(long)]
    pub y: Option<String>,
    /// Orbit identification tolerance; defaults per action.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct ObservableArgs {
    /// JSON observable, or `cos`, `cos:AXIS`, `const:V`, `sign:SPLIT`.
    #[arg(long, default_value = "cos")]
    pub observable: String,
}

#[derive(Debug, Clone, Args)]
pub struct PlugArgs {
    /// `cylinder`, `thin`, or a JSON plug.
    #[arg(long, default_value = "cylinder")]
    pub plug: String,
}

#[derive(Debug, Clone, Args)]
pub struct SurfaceArgs {
    #[arg(long = "L", default_value_t = 25.0)]
    pub big_l: f64,
    #[arg(long, default_value_t = 3)]
    pub depth: u32,
    #[arg(long, default_value_t = 0.5)]
    pub delta: f64,
    #[arg(long, default_value_t = 0.05)]
    pub h: f64,
}

impl SurfaceArgs {
    fn spec(&self) -> SigmaSpec {
        SigmaSpec {
            big_l: self.big_l,
            depth: self.depth,
            delta: self.delta,
            h: self.h,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct FlowArgs {
    /// `rotation`, `four`, `reducible`, or JSON `{"lengths":[..],"perm":[..]}`.
    #[arg(long, default_value = "four")]
    pub iet: String,
    /// JSON roof; defaults to the constant 1.
    #[arg(long)]
    pub roof: Option<String>,
    #[arg(long, default_value_t = 0.1)]
    pub x: f64,
    #[arg(long = "y0", default_value_t = 0.0)]
    pub y: f64,
}

impl FlowArgs {
    fn space(&self) -> Result<SuspensionSpace> {
        let base = if self.iet.trim_start().starts_with('{') {
            #[derive(Deserialize)]
            struct Raw {
                lengths: Vec<f64>,
                perm: Vec<usize>,
            }
            let raw: Raw = parse_json(&self.iet)?;
            IntervalExchange::new(raw.lengths, raw.perm, 1e-12)?
        } else {
            iet_preset(&self.iet)?
        };
        let roof = match &self.roof {
            Some(r) => parse_json(r)?,
            None => Roof::Const { value: 1.0 },
        };
        SuspensionSpace::new(base, roof)
    }

    fn point(&self) -> FlowPoint {
        FlowPoint { x: self.x, y: self.y }
    }
}

fn parse_json<T: for<'de> Deserialize<'de>>(s: &str) -> Result<T> {
    serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number {t:?} in {s:?}"))))
        .collect()
}

fn parse_observable(s: &str, dim: usize) -> Result<Observable> {
    let s = s.trim();
    if s.starts_with('{') {
        return parse_json(s);
    }
    let (head, arg) = s.split_once(':').map_or((s, None), |(h, a)| (h, Some(a)));
    let num = |a: Option<&str>, d: f64| -> Result<f64> {
        a.map_or(Ok(d), |a| a.parse().map_err(|_| Error::Parse(format!("bad parameter in {s:?}"))))
    };
    match head {
        "cos" => {
            let axis = num(arg, 0.0)? as usize;
            if axis >= dim.max(1) {
                return Err(Error::Dimension {
                    expected: dim,
                    got: axis + 1,
                });
            }
            Ok(Observable::cosine(dim.max(1), axis, 1.0))
        }
        "const" => Ok(Observable::constant(num(arg, 1.0)?)),
        "sign" => Ok(Observable::Sign {
            split: num(arg, 0.5)?,
            axis: 0,
        }),
        _ => Err(Error::Parse(format!("unknown observable {s:?}"))),
    }
}

fn parse_plug(s: &str) -> Result<PlugSpec> {
    let p = match s.trim() {
        "cylinder" => PlugSpec::cylinder(),
        "thin" => PlugSpec::thin_preset(),
        j if j.starts_with('{') => parse_json(j)?,
        other => return Err(Error::Invalid(format!("unknown plug preset {other:?}"))),
    };
    p.validate()?;
    Ok(p)
}

/// Chart point `k,l,x,y` of the tree surface.
fn parse_chart_point(s: &Sigma, t: &str) -> Result<u32> {
    let v = parse_list(t)?;
    if v.len() != 4 {
        return Err(Error::Parse(format!("chart point needs k,l,x,y, got {t:?}")));
    }
    s.node_at(v[0] as i32, v[1] as u32, v[2], v[3])
}

/// One file written under `--out`.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub name: String,
    pub body: String,
    pub tolerance: Value,
}

/// Result of one subcommand.
#[derive(Debug, Clone)]
pub struct Output {
    pub stdout: String,
    pub artifacts: Vec<Artifact>,
    pub hypothesis_ok: bool,
}

impl Output {
    fn json(name: &str, v: &Value, tolerance: Value) -> Output {
        let body = serde_json::to_string_pretty(v).expect("values serialize");
        Output {
            stdout: body.clone(),
            artifacts: vec![Artifact {
                name: format!("{name}.json"),
                body,
                tolerance,
            }],
            hypothesis_ok: true,
        }
    }

    fn with(mut self, name: &str, body: String, tolerance: Value) -> Output {
        self.artifacts.push(Artifact {
            name: name.into(),
            body,
            tolerance,
        });
        self
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("values serialize")
}

fn exact() -> Value {
    json!({ "exact": true })
}

/// Work that runs against any group action.
enum Task {
    Orbit { n: usize },
    Lambda { n: usize },
    Folner { word: Word, n: usize },
    BallAverage { obs: String, n: usize, mode: BallMode },
    Sandwich { obs: String, plug: PlugSpec, r: f64 },
    SmallLimits { obs: String, plug: PlugSpec, n: usize, mode: BallMode },
    Certificate { plug: PlugSpec, n: usize },
}

impl Task {
    fn run<A: GroupAction>(self, a: &A, y: &A::Point, tol: f64, dim: usize) -> Result<Output> {
        let tol_meta = json!({ "orbit_tol": tol });
        match self {
            Task::Orbit { n } => {
                let ball = orbit_ball(a, y, n, tol, WORD_CAP)?;
                let sizes = ball.sizes();
                let free: Vec<usize> = (0..=n).map(|m| ball_size(a.rank(), m) as usize).collect();
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["level", "word", "coords"]).map_err(csv_err)?;
                for c in ball.classes() {
                    let coords: Vec<String> = c.point.coords().iter().map(|v| format!("{v:.17}")).collect();
                    w.write_record([c.level.to_string(), c.word.to_string(), coords.join(" ")])
                        .map_err(csv_err)?;
                }
                let body = String::from_utf8(w.into_inner().map_err(|e| Error::Parse(e.to_string()))?)
                    .map_err(|e| Error::Parse(e.to_string()))?;
                let v = json!({ "sizes": sizes, "free": sizes == free });
                Ok(Output::json("orbit", &v, tol_meta.clone()).with("orbit_points.csv", body, tol_meta))
            }
            Task::Lambda { n } => {
                let s = lambda_series(a, y, n, tol, WORD_CAP)?;
                let v = json!({
                    "last": s.samples().last().map(|x| x.value),
                    "limsup": s.limsup_estimate(),
                    "liminf": s.liminf_estimate(),
                    "window": s.window(),
                });
                Ok(Output::json("lambda", &v, tol_meta.clone()).with("lambda.csv", s.to_csv()?, tol_meta))
            }
            Task::Folner { word, n } => {
                let d = folner_defect(a, y, &word, n, tol, WORD_CAP)?;
                Ok(Output::json("folner", &json!({ "word": word, "n": n, "defect": d }), tol_meta))
            }
            Task::BallAverage { obs, n, mode } => {
                let phi = parse_observable(&obs, dim)?;
                let v = ball_average(a, &phi, y, n, tol, mode, WORD_CAP)?;
                Ok(Output::json("ball_average", &json!({ "n": n, "mode": mode, "average": v }), tol_meta))
            }
            Task::Sandwich { obs, plug, r } => {
                let phi = parse_observable(&obs, dim)?;
                let s = sandwich_bounds(a, y, &phi, &plug, r, tol, WORD_CAP)?;
                Ok(Output::json("sandwich", &to_value(&s), tol_meta))
            }
            Task::SmallLimits { obs, plug, n, mode } => {
                let phi = parse_observable(&obs, dim)?;
                let s = small_boundary_limits(a, y, &phi, &plug, n, mode, tol, WORD_CAP)?;
                let v = json!({
                    "limsup": s.limsup,
                    "liminf": s.liminf,
                    "gap": s.gap,
                    "lambda_estimate": s.lambda_estimate,
                    "hypothesis_ok": s.hypothesis_ok,
                });
                let mut out = Output::json("small_limits", &v, tol_meta.clone()).with(
                    "small_limits.csv",
                    s.series.to_csv()?,
                    tol_meta,
                );
                out.hypothesis_ok = s.hypothesis_ok;
                Ok(out)
            }
            Task::Certificate { plug, n } => {
                let thin = thin_check(&plug);
                let c = large_boundary_certificate(a, y, &plug, n, tol, WORD_CAP)?;
                let mut v = to_value(&c);
                v["thin"] = to_value(&thin);
                let mut out = Output::json("certificate", &v, json!({ "exact_orbit_counts": true, "orbit_tol": tol }));
                out.hypothesis_ok = thin.thin();
                Ok(out)
            }
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

fn scalar_point(y: &Option<Vec<f64>>, default: f64) -> Result<f64> {
    match y.as_deref() {
        None => Ok(default),
        Some([v]) => Ok(*v),
        Some(v) => Err(Error::Dimension {
            expected: 1,
            got: v.len(),
        }),
    }
}

fn dispatch(args: &ActionArgs, task: Task) -> Result<(Output, ActionSpec)> {
    let spec: ActionSpec = args.action.parse()?;
    let y = args.y.as_deref().map(parse_list).transpose()?;
    let out = match &spec {
        ActionSpec::Rotation { alpha } => {
            let a = CircleAction::rotation(*alpha);
            task.run(&a, &scalar_point(&y, 0.0)?, args.tol.unwrap_or(ORBIT_TOL), 1)?
        }
        ActionSpec::Pingpong { generators, layout } => {
            let t = make_ping_pong(&layout.unwrap_or_default())?;
            let report = check_ping_pong(&t);
            let a = t.action(*generators)?;
            let mut out = task.run(&a, &scalar_point(&y, t.base_point())?, args.tol.unwrap_or(PINGPONG_ORBIT_TOL), 1)?;
            out.hypothesis_ok &= report.all_hold();
            out
        }
        ActionSpec::Free { rank } => {
            if y.is_some() {
                return Err(Error::Invalid("the free action has no base point coordinates".into()));
            }
            task.run(&FreeAction::new(*rank)?, &Word::empty(), args.tol.unwrap_or(0.0), 0)?
        }
        ActionSpec::Iet { lengths, perm } => {
            let t = IntervalExchange::new(lengths.clone(), perm.clone(), 1e-12)?;
            task.run(&t, &scalar_point(&y, 0.1)?, args.tol.unwrap_or(ORBIT_TOL), 1)?
        }
        ActionSpec::Torus { alpha } => {
            let t = TorusRotation::new(alpha.clone())?;
            let d = t.d();
            let p = y.unwrap_or_else(|| vec![0.0; d]);
            task.run(&t, &p, args.tol.unwrap_or(ORBIT_TOL), d)?
        }
    };
    Ok((out, spec))
}

fn sigma_summary(s: &Sigma) -> Value {
    json!({
        "L": s.big_l(),
        "depth": s.depth(),
        "h": s.mesh().h(),
        "copies": s.mesh().copies().len(),
        "nodes": s.node_count(),
        "delta_effective": s.mesh().delta_effective(),
        "delta_star": s.delta_star(),
        "pants_volume": s.pants_volume(),
        "error_bound": s.mesh().error_bound(),
    })
}

fn rows_csv(rows: &[crate::geometry::SeriesRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    String::from_utf8(w.into_inner().map_err(|e| Error::Parse(e.to_string()))?).map_err(|e| Error::Parse(e.to_string()))
}

fn default_kmax(s: &Sigma, kmax: Option<u32>) -> u32 {
    kmax.unwrap_or(s.depth().saturating_sub(1).max(1))
}

fn sigma_command(
    surface: &SurfaceArgs,
    series: bool,
    kmax: Option<u32>,
    distance: Option<&str>,
    ball: Option<&str>,
    r: Option<f64>,
) -> Result<Output> {
    let s = assemble_sigma(surface.spec())?;
    let eps = s.mesh().error_bound();
    let mut v = json!({ "surface": sigma_summary(&s) });
    let mut extra = Vec::new();
    if let Some(pair) = distance {
        let (a, b) = pair
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("distance needs two points separated by ';', got {pair:?}")))?;
        let (p, q) = (parse_chart_point(&s, a)?, parse_chart_point(&s, b)?);
        let (d, err) = s.geodesic_distance(p, q)?;
        v["distance"] = json!({ "value": d, "error_bound": err, "heights": [s.height(p), s.height(q)] });
    }
    if let Some(c) = ball {
        let r = r.ok_or_else(|| Error::Invalid("--ball needs --r".into()))?;
        let p = parse_chart_point(&s, c)?;
        if r > s.reach(p) {
            return Err(Error::Mesh(format!("radius {r} exceeds the assembled reach {}", s.reach(p))));
        }
        let d = s.distances(p, r);
        let phi = s.make_phi();
        v["ball"] = json!({
            "r": r,
            "volume": s.mesh().volume(|u| d[u as usize] <= r),
            "phi_integral": s.integrate(&phi, |u| d[u as usize] <= r),
            "nodes": d.iter().filter(|&&x| x <= r).count(),
            "height_sandwich": s.height_sandwich(p, &d, r, eps),
        });
    }
    let mut hypothesis_ok = true;
    if series {
        let phi = s.make_phi();
        match s.oscillation_series(&phi, s.default_p0(), default_kmax(&s, kmax)) {
            Ok(ser) => {
                let plus = rows_csv(&ser.plus_rows)?;
                let minus = rows_csv(&ser.minus_rows)?;
                v["series"] = json!({
                    "p0_height": ser.p0_height,
                    "pants_volume": ser.pants_volume,
                    "gap": ser.gap(),
                    "support_disjoint": ser.support_disjoint,
                    "height_sandwich": ser.height_sandwich,
                    "volume_bound": ser.volume_bound,
                });
                let meta = json!({ "mesh_error_bound": eps, "minus_integrals": "exact zero by involution pairing" });
                extra.push(("series_2kL.csv".to_string(), plus, meta.clone()));
                extra.push(("series_2kL_minus_2dstar.csv".to_string(), minus, meta));
            }
            Err(Error::Hypothesis(m)) => {
                v["series"] = json!({ "hypothesis_violation": m });
                hypothesis_ok = false;
            }
            Err(e) => return Err(e),
        }
    }
    let mut out = Output::json("sigma", &v, json!({ "mesh_error_bound": eps }));
    if !extra.is_empty() {
        let mut text = String::new();
        for (name, body, meta) in extra {
            text.push_str(&format!("# {name}\n{body}"));
            out = out.with(&name, body, meta);
        }
        out.stdout = text;
    }
    out.hypothesis_ok = hypothesis_ok;
    Ok(out)
}

fn product_command(surface: &SurfaceArgs, r1: Option<f64>, kmax: Option<u32>) -> Result<Output> {
    let s = assemble_sigma(surface.spec())?;
    let phi = s.make_phi();
    let p0 = s.default_p0();
    let ser = s.oscillation_series(&phi, p0, default_kmax(&s, kmax))?;
    let r1 = r1.unwrap_or(s.delta_star() / 2.0);
    let plus_r: Vec<f64> = ser.plus_rows.iter().map(|r| r.r).collect();
    let minus_r: Vec<f64> = ser.minus_rows.iter().map(|r| r.r).collect();
    let reach = plus_r.iter().cloned().fold(0.0, f64::max);
    let d = s.distances(p0, reach + s.mesh().error_bound());
    let (plus, pz) = s.product_samples(&phi, &d, &plus_r, r1);
    let (minus, mz) = s.product_samples(&phi, &d, &minus_r, r1);
    if !(pz && mz) {
        let v = json!({ "r1": r1, "annulus_zero": false, "hypothesis_violation": "support meets an annulus" });
        let mut out = Output::json("product_check", &v, exact());
        out.hypothesis_ok = false;
        return Ok(out);
    }
    let pr = product_extension_check(&plus, r1, pz)?;
    let mr = product_extension_check(&minus, r1, mz)?;
    let gap = transferred_gap(&pr, &mr);
    let v = json!({
        "r1": r1,
        "plus": pr,
        "minus": mr,
        "transferred_gap": gap,
        "base_gap": ser.gap(),
        "gap_unchanged": gap.to_bits() == ser.gap().to_bits(),
    });
    Ok(Output::json("product_check", &v, json!({ "mesh_error_bound": s.mesh().error_bound() })))
}

/// Runs one parsed command.
pub fn execute(cmd: Command) -> Result<Output> {
    match cmd {
        Command::Ball { k, n } => {
            if k == 0 {
                return Err(Error::Invalid("k must be at least 1".into()));
            }
            let size = ball_size(k, n);
            let mut out = Output::json("ball", &json!({ "k": k, "n": n, "size": size.to_string() }), exact());
            out.stdout = size.to_string();
            Ok(out)
        }
        Command::Orbit { action, n } => Ok(dispatch(&action, Task::Orbit { n })?.0),
        Command::Lambda { action, n } => Ok(dispatch(&action, Task::Lambda { n })?.0),
        Command::Folner { action, word, n } => Ok(dispatch(
            &action,
            Task::Folner {
                word: word.parse()?,
                n,
            },
        )?
        .0),
        Command::BallAverage { action, obs, n, mode } => Ok(dispatch(
            &action,
            Task::BallAverage {
                obs: obs.observable,
                n,
                mode: mode.into(),
            },
        )?
        .0),
        Command::Sandwich { action, obs, plug, r } => Ok(dispatch(
            &action,
            Task::Sandwich {
                obs: obs.observable,
                plug: parse_plug(&plug.plug)?,
                r,
            },
        )?
        .0),
        Command::SmallLimits {
            action,
            obs,
            plug,
            big_n,
            mode,
        } => Ok(dispatch(
            &action,
            Task::SmallLimits {
                obs: obs.observable,
                plug: parse_plug(&plug.plug)?,
                n: big_n,
                mode: mode.into(),
            },
        )?
        .0),
        Command::Certificate {
            preset,
            action,
            plug,
            big_n,
        } => {
            let (action, plug) = match preset.as_deref() {
                None => (action, parse_plug(&plug.plug)?),
                Some(p) => {
                    let name = match p {
                        "f2-thin" => "pingpong",
                        "z-thin" => "free:1",
                        other => return Err(Error::Invalid(format!("unknown certificate preset {other:?}"))),
                    };
                    let a = ActionArgs {
                        action: name.into(),
                        y: None,
                        tol: action.tol,
                    };
                    (a, PlugSpec::thin_preset())
                }
            };
            Ok(dispatch(&action, Task::Certificate { plug, n: big_n })?.0)
        }
        Command::Sigma {
            surface,
            series,
            kmax,
            distance,
            ball,
            r,
        } => sigma_command(&surface, series, kmax, distance.as_deref(), ball.as_deref(), r),
        Command::CornerPlug { alpha, h } => {
            let p = build_corner_plug(alpha, h)?;
            let d = p.boundary_distances();
            let v = json!({
                "alpha": alpha,
                "h": h,
                "nodes": p.mesh().len(),
                "pairs": ["d-d0", "d-d1", "d0-d1"],
                "min_max": d,
                "ceiling": p.ceiling,
                "dc_distance": p.dc_distance,
            });
            Ok(Output::json("corner_plug", &v, json!({ "mesh_h": h })))
        }
        Command::PlugTree { n, k, r0 } => {
            let d = plug_tree_distances(n, k, r0)?;
            let leaves = plug_tree_root_to_leaves(n, r0)?;
            Ok(Output::json("plug_tree", &json!({ "roots": d, "root_to_leaves": leaves }), exact()))
        }
        Command::Flow { space, t, steps } => {
            let s = space.space()?;
            let z = space.point();
            s.check_point(&z)?;
            let p = flow(&s, z, t);
            let out = Output::json("flow", &json!({ "start": z, "t": t, "end": p }), json!({ "roundoff": true }));
            Ok(out.with("trajectory.csv", trajectory_csv(&s, z, t, steps)?, json!({ "roundoff": true })))
        }
        Command::TimeAverage { space, obs, big_t, count } => {
            let s = space.space()?;
            let phi = parse_observable(&obs.observable, 1)?;
            let e = time_average(&s, &phi, space.point(), big_t)?;
            let out = Output::json("time_average", &json!({ "T": big_t, "estimate": e }), json!({ "declared_error": e.error }));
            if count > 1 {
                let t0 = big_t / 2f64.powi(count as i32 - 1);
                let ser = leaf_time_average_series(&s, &phi, space.point(), t0, count)?;
                return Ok(out.with("time_average.csv", ser.to_csv()?, json!({ "declared_error": ser.max_error() })));
            }
            Ok(out)
        }
        Command::RotationAverage { alpha, obs, x, r } => {
            let rows = alpha.iter().map(|a| parse_list(a)).collect::<Result<Vec<_>>>()?;
            let rot = TorusRotation::new(rows)?;
            let x = match x {
                Some(x) => parse_list(&x)?,
                None => vec![0.0; rot.d()],
            };
            let phi = parse_observable(&obs.observable, rot.d())?;
            let a = rotation_ball_average(&rot, &phi, &x, r)?;
            Ok(Output::json(
                "rotation_average",
                &to_value(&a),
                json!({ "declared_error": a.quadrature.error }),
            ))
        }
        Command::ProductCheck { surface, r1, kmax } => product_command(&surface, r1, kmax),
        Command::Run { config } => {
            let argv = config_argv(&config)?;
            let cli = Cli::try_parse_from(argv).map_err(|e| Error::Parse(e.to_string()))?;
            execute(cli.command)
        }
    }
}

/// Turns a JSON experiment config into an argument vector.
pub fn config_argv(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))?;
    let v: Value = parse_json(&text)?;
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Parse("config must be a JSON object".into()))?;
    let cmd = obj
        .get("command")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("config needs a string \"command\"".into()))?;
    if cmd == "run" {
        return Err(Error::Parse("configs cannot nest \"run\"".into()));
    }
    let mut argv = vec!["leafavg".to_string(), cmd.to_string()];
    for (key, val) in obj {
        if key == "command" {
            continue;
        }
        let flag = format!("--{key}");
        match val {
            Value::Bool(true) => argv.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::String(s) => argv.extend([flag, s.clone()]),
            Value::Number(n) => argv.extend([flag, n.to_string()]),
            Value::Array(items) if key == "alpha" => {
                for it in items {
                    let row = match it {
                        Value::Array(xs) => xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","),
                        other => other.to_string(),
                    };
                    argv.extend([flag.clone(), row]);
                }
            }
            other => argv.extend([flag, other.to_string()]),
        }
    }
    Ok(argv)
}

#[derive(Serialize)]
struct ManifestEntry<'a> {
    path: &'a str,
    tolerance: &'a Value,
}

fn write_out(dir: &Path, argv: &[String], out: &Output) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    for a in &out.artifacts {
        fs::write(dir.join(&a.name), &a.body)?;
    }
    let manifest = json!({
        "argv": argv,
        "version": env!("CARGO_PKG_VERSION"),
        "hypothesis_ok": out.hypothesis_ok,
        "artifacts": out
            .artifacts
            .iter()
            .map(|a| ManifestEntry { path: &a.name, tolerance: &a.tolerance })
            .collect::<Vec<_>>(),
    });
    fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)? + "\n")
}

/// Writes one result to stdout; a closed pipe is not an error.
fn emit(text: &str) {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{text}");
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::ResourceCap { .. } => 3,
        _ => 2,
    }
}

/// Parses `args`, runs the command and returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let argv: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let out_dir = cli.out.clone();
    match execute(cli.command) {
        Ok(out) => {
            emit(out.stdout.trim_end());
            if !out.hypothesis_ok {
                eprintln!("warning: a hypothesis of the computation is not verified; see hypothesis_ok");
            }
            if let Some(dir) = out_dir {
                if let Err(e) = write_out(&dir, &argv, &out) {
                    eprintln!("error: writing {}: {e}", dir.display());
                    return 2;
                }
            }
            0
        }
        Err(Error::Hypothesis(m)) => {
            emit(&json!({ "hypothesis_ok": false, "hypothesis_violation": m }).to_string());
            eprintln!("warning: hypothesis not verified: {m}");
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn main() {
    std::process::exit(run(std::env::args_os()));
}
