use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use cubik::collapse::{
    collapse_all, expand_all, expand_relabeled, verify_decomposition, CollapseError, Decomposition,
};
use cubik::coloring::DEFAULT_NODE_BUDGET;
use cubik::complex::{CubeComplex, PointLocation};
use cubik::generators::{named, GenParams};
use cubik::hyperconvex::{
    ball_of_gcuboid, gcuboid_validate, hyperconvexity_probe, GeneralizedCuboid, HyperconvexError,
    ProbeVerdict,
};
use cubik::hyperplanes::{HyperplaneError, HyperplaneSystem};
use cubik::io::{
    decomposition_to_json, hyperplane_report, parse_decomposition, ComplexDoc, IoError,
};
use cubik::median::{
    is_cat0, is_median, link_condition_check, Cat0Reason, MedianVerdict, MedianWitness,
};
use cubik::metric::{distance_with, DistanceOptions, MetricError, PNorm};

use crate::output::{num, to_json, Failure, Report, BUDGET, NEGATIVE};
use crate::{Command, Opts};

pub fn run(cmd: &Command, opts: &Opts) -> Result<u8, Failure> {
    let report = match cmd {
        Command::Validate { file, complex } => validate(file, complex.as_deref())?,
        Command::Check {
            file,
            median,
            link,
            cat0,
        } => check(file, *median, *link, *cat0)?,
        Command::Hyperplanes { file } => hyperplanes(file)?,
        Command::Width { file } => width(file)?,
        Command::Color { file, exact } => color(file, *exact)?,
        Command::Collapse { file } => collapse(file)?,
        Command::Expand { file } => expand(file)?,
        Command::Dist { file, from, to } => dist(file, from, to, opts)?,
        Command::Ball {
            file,
            center,
            gcuboid,
            radius,
            decomp,
        } => ball(
            file,
            center.as_deref(),
            gcuboid.as_deref(),
            *radius,
            decomp.as_deref(),
        )?,
        Command::Hyperconvex {
            file,
            centers,
            radii,
            decomp,
        } => hyperconvex(file, centers, radii, decomp.as_deref(), opts.grid)?,
        Command::Gen {
            kind,
            n,
            m,
            steps,
            cuboids,
            decomp,
        } => {
            let params = GenParams {
                n: *n,
                m: *m,
                seed: opts.seed,
                steps: *steps,
                cuboids: *cuboids,
            };
            generate(kind, &params, decomp.as_deref())?
        }
    };
    emit(&report, opts)?;
    Ok(report.code)
}

fn emit(r: &Report, opts: &Opts) -> Result<(), Failure> {
    let summary = if opts.json {
        to_json(&r.json)
    } else {
        r.text.clone()
    };
    match (&r.artifact, &opts.output) {
        (Some(body), Some(path)) => {
            write(path, &to_json(body))?;
            println!("{summary}");
        }
        (Some(body), None) => println!("{}", to_json(body)),
        (None, Some(path)) => {
            write(path, &to_json(&r.json))?;
            println!("{summary}");
        }
        (None, None) => println!("{summary}"),
    }
    Ok(())
}

fn write(path: &Path, body: &str) -> Result<(), Failure> {
    fs::write(path, format!("{body}\n"))
        .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))
}

fn io_err(e: IoError) -> Failure {
    Failure::input(e)
}

fn load(path: &Path) -> Result<ComplexDoc, Failure> {
    ComplexDoc::parse(&read(path)?).map_err(io_err)
}

fn load_decomposition(path: &Path) -> Result<Decomposition, Failure> {
    parse_decomposition(&read(path)?).map_err(io_err)
}

fn metric_err(e: MetricError) -> Failure {
    match e {
        MetricError::BudgetExceeded(_) => Failure::new(BUDGET, e),
        MetricError::Unreachable => Failure::new(NEGATIVE, e),
        _ => Failure::input(e),
    }
}

fn hyperplane_err(e: HyperplaneError) -> Failure {
    match e {
        HyperplaneError::NotCat0 | HyperplaneError::NotTwoComponents(_) => {
            Failure::new(NEGATIVE, e)
        }
        HyperplaneError::Coloring(_) => Failure::new(BUDGET, e),
        HyperplaneError::Graph(_) => Failure::input(e),
    }
}

fn collapse_err(e: CollapseError) -> Failure {
    match e {
        CollapseError::Hyperplane(h) => hyperplane_err(h),
        CollapseError::Graph(_) => Failure::input(e),
        _ => Failure::new(NEGATIVE, e),
    }
}

fn hyperconvex_err(e: HyperconvexError) -> Failure {
    match e {
        HyperconvexError::Metric(m) => metric_err(m),
        _ => Failure::input(e),
    }
}

fn parse_json(text: &str) -> Value {
    serde_json::from_str(text).expect("library output is valid JSON")
}

fn format_point(doc: &ComplexDoc, p: &PointLocation) -> String {
    doc.format_point(p).expect("every maximal cube is listed")
}

fn validate(file: &Path, complex: Option<&Path>) -> Result<Report, Failure> {
    let text = read(file)?;
    let head: Value =
        serde_json::from_str(&text).map_err(|e| Failure::input(format!("malformed JSON: {e}")))?;
    match head["format"].as_str().unwrap_or_default() {
        "cubedecomp/1" => {
            let d = parse_decomposition(&text).map_err(io_err)?;
            let (built, _) = expand_all(&d).map_err(|e| Failure::new(NEGATIVE, e))?;
            let mut json = json!({"valid": true, "format": "cubedecomp/1", "steps": d.steps.len(), "vertices": built.num_vertices()});
            let mut text = format!(
                "valid decomposition: {} steps, {} vertices",
                d.steps.len(),
                built.num_vertices()
            );
            if let Some(path) = complex {
                let v = verify_decomposition(&load(path)?.complex, &d);
                json["valid"] = json!(v.valid);
                if let Some(f) = &v.failure {
                    json["failure"] = json!(format!("{f:?}"));
                    text = format!("invalid decomposition: {f:?}");
                }
                return Ok(Report::new(v.valid, json, text));
            }
            Ok(Report::new(true, json, text))
        }
        "gcuboid/1" => {
            let path = complex.ok_or_else(|| Failure::input("a gcuboid file needs --complex"))?;
            let doc = load(path)?;
            let x = doc.parse_gcuboid(&text).map_err(io_err)?;
            let v = gcuboid_validate(&doc.complex, &x);
            let failures: Vec<String> = v.failures.iter().map(|f| format!("{f:?}")).collect();
            let text = if v.valid {
                "valid generalized cuboid".to_string()
            } else {
                format!("invalid: {}", failures.join("; "))
            };
            Ok(Report::new(
                v.valid,
                json!({"valid": v.valid, "format": "gcuboid/1", "failures": failures}),
                text,
            ))
        }
        _ => {
            let doc = ComplexDoc::parse(&text).map_err(io_err)?;
            let c = &doc.complex;
            let json = json!({
                "valid": true,
                "format": "cubecomplex/1",
                "vertices": c.num_vertices(),
                "cubes": c.num_cubes(),
                "maximal": c.maximal().len(),
                "dim": c.dim(),
            });
            let text = format!(
                "valid complex: {} vertices, {} cubes ({} maximal), dimension {}",
                c.num_vertices(),
                c.num_cubes(),
                c.maximal().len(),
                c.dim()
            );
            Ok(Report::new(true, json, text))
        }
    }
}

fn median_witness(v: &MedianVerdict) -> String {
    match &v.witness {
        Some(MedianWitness::Disconnected) => "graph is disconnected".into(),
        Some(MedianWitness::Triple(t, outcome)) => format!("triple {t:?}: {outcome:?}"),
        None => match (&v.triangle, &v.k23, &v.quadrangle, &v.triangle_condition) {
            (Some(t), ..) => format!("triangle {t:?}"),
            (_, Some(k), ..) => format!("K23 with hubs {:?} and middles {:?}", k.hubs, k.middles),
            (_, _, Some(q), _) => format!("quadrangle condition fails at {q:?}"),
            (_, _, _, Some(t)) => format!("triangle condition fails at {t:?}"),
            _ => "no witness".into(),
        },
    }
}

fn check(file: &Path, median: bool, link: bool, cat0: bool) -> Result<Report, Failure> {
    let c = load(file)?.complex;
    let all = !(median || link || cat0);
    let mut json = json!({});
    let mut lines = Vec::new();
    let mut ok = true;
    let mut record = |key: &str, holds: bool, why: Option<String>| {
        json[key] = json!(holds);
        ok &= holds;
        match why {
            Some(w) if !holds => {
                json[format!("{key}_witness")] = json!(w);
                lines.push(format!("{key}: false ({w})"));
            }
            _ => lines.push(format!("{key}: {holds}")),
        }
    };
    if all || median {
        let v = is_median(c.graph());
        record("median", v.is_median, Some(median_witness(&v)));
    }
    if all || link {
        let v = link_condition_check(&c);
        let why = v.witness.map(|(q, bs)| {
            let corners: Vec<_> = bs.iter().map(|&b| c.cube(b).corners().to_vec()).collect();
            format!(
                "cubes {corners:?} around {:?} span no cube",
                c.cube(q).corners()
            )
        });
        record("link", v.holds, why);
    }
    if all || cat0 {
        let v = is_cat0(&c);
        let why = v.reason.map(|r| match r {
            Cat0Reason::MissingCubes(q) => format!("cube {q:?} is not filled"),
            Cat0Reason::GraphNotMedian(m) => format!("graph is not median: {}", median_witness(&m)),
        });
        record("cat0", v.is_cat0, why);
    }
    Ok(Report::new(ok, json, lines.join("\n")))
}

fn hyperplanes(file: &Path) -> Result<Report, Failure> {
    let c = load(file)?.complex;
    let report = hyperplane_report(&c).map_err(hyperplane_err)?;
    let count = report["hyperplanes"].as_array().map_or(0, Vec::len);
    let crossings = report["crossing_edges"].as_array().map_or(0, Vec::len);
    let json = json!({"hyperplanes": count, "crossings": crossings, "width": report["width"]});
    Ok(Report::artifact(
        json,
        format!("{count} hyperplanes, {crossings} crossings"),
        report,
    ))
}

fn width(file: &Path) -> Result<Report, Failure> {
    let c = load(file)?.complex;
    let w = HyperplaneSystem::for_cat0(&c)
        .map_err(hyperplane_err)?
        .width();
    Ok(Report::new(true, json!({"width": w}), w.to_string()))
}

fn color(file: &Path, exact: bool) -> Result<Report, Failure> {
    let c = load(file)?.complex;
    let sys = HyperplaneSystem::for_cat0(&c).map_err(hyperplane_err)?;
    let coloring = if exact {
        sys.chromatic_exact(DEFAULT_NODE_BUDGET)
            .map_err(hyperplane_err)?
            .1
    } else {
        sys.color_greedy()
    };
    let json =
        json!({"num_colors": coloring.num_colors, "exact": exact, "colors": coloring.colors});
    let colors: Vec<String> = coloring.colors.iter().map(usize::to_string).collect();
    let text = format!("{} colors: {}", coloring.num_colors, colors.join(" "));
    Ok(Report::new(true, json, text))
}

fn collapse(file: &Path) -> Result<Report, Failure> {
    let c = load(file)?.complex;
    let d = collapse_all(&c).map_err(collapse_err)?;
    let json = json!({"steps": d.steps.len(), "base_vertex": d.base});
    let text = format!("collapsed in {} steps to vertex {}", d.steps.len(), d.base);
    Ok(Report::artifact(
        json,
        text,
        parse_json(&decomposition_to_json(&d)),
    ))
}

fn expand(file: &Path) -> Result<Report, Failure> {
    let d = load_decomposition(file)?;
    let c = expand_relabeled(&d).map_err(|e| Failure::new(NEGATIVE, e))?;
    let json = json!({"vertices": c.num_vertices(), "cubes": c.num_cubes(), "dim": c.dim()});
    let text = format!(
        "expanded to {} vertices, {} cubes",
        c.num_vertices(),
        c.num_cubes()
    );
    Ok(Report::artifact(
        json,
        text,
        parse_json(&ComplexDoc::new(c).to_json()),
    ))
}

fn norm(opts: &Opts) -> Result<PNorm, Failure> {
    opts.p.parse::<PNorm>().map_err(Failure::input)
}

fn dist(file: &Path, from: &str, to: &str, opts: &Opts) -> Result<Report, Failure> {
    let doc = load(file)?;
    let (a, b) = (
        doc.point(from).map_err(io_err)?,
        doc.point(to).map_err(io_err)?,
    );
    let p = norm(opts)?;
    if opts.tol.is_nan() || opts.tol <= 0.0 {
        return Err(Failure::input(format!(
            "tolerance must be positive, got {}",
            opts.tol
        )));
    }
    let mut o = DistanceOptions::default();
    o.solver.move_tol = opts.tol;
    let (d, s) = distance_with(&doc.complex, &a, &b, p, &o).map_err(metric_err)?;
    let string: Vec<String> = s.points.iter().map(|q| format_point(&doc, q)).collect();
    let json = json!({"distance": d, "p": p.to_string(), "string": string});
    Ok(Report::new(true, json, num(d)))
}

fn decomposition_for(c: &CubeComplex, path: Option<&Path>) -> Result<Decomposition, Failure> {
    match path {
        Some(path) => load_decomposition(path),
        None => collapse_all(c).map_err(collapse_err),
    }
}

fn ball(
    file: &Path,
    center: Option<&str>,
    gcuboid: Option<&Path>,
    radius: f64,
    decomp: Option<&Path>,
) -> Result<Report, Failure> {
    let doc = load(file)?;
    let c = &doc.complex;
    let x = match (center, gcuboid) {
        (Some(p), _) => {
            GeneralizedCuboid::point(c, &doc.point(p).map_err(io_err)?).map_err(Failure::input)?
        }
        (None, Some(path)) => doc.parse_gcuboid(&read(path)?).map_err(io_err)?,
        (None, None) => return Err(Failure::input("give --center or --gcuboid")),
    };
    let d = decomposition_for(c, decomp)?;
    let b = ball_of_gcuboid(c, &d, &x, radius).map_err(hyperconvex_err)?;
    let body = parse_json(&doc.gcuboid_to_json(&b).map_err(io_err)?);
    let json = json!({"radius": radius, "boxes": b.boxes.len()});
    let text = format!(
        "ball of radius {} meets {} maximal cubes",
        num(radius),
        b.boxes.len()
    );
    Ok(Report::artifact(json, text, body))
}

fn hyperconvex(
    file: &Path,
    centers: &[String],
    radii: &[f64],
    decomp: Option<&Path>,
    grid: usize,
) -> Result<Report, Failure> {
    let doc = load(file)?;
    let c = &doc.complex;
    let points = centers
        .iter()
        .map(|s| doc.point(s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(io_err)?;
    if grid == 0 {
        return Err(Failure::input("--grid must be positive"));
    }
    let d = decomp.map(load_decomposition).transpose()?;
    let verdict =
        hyperconvexity_probe(c, &points, radii, grid, d.as_ref()).map_err(hyperconvex_err)?;
    Ok(match verdict {
        ProbeVerdict::CommonPointFound(p) => {
            let at = format_point(&doc, &p);
            Report::new(
                true,
                json!({"verdict": "common_point", "point": at}),
                format!("common point {at}"),
            )
        }
        ProbeVerdict::NotAdmissible { pair, distance } => Report::new(
            false,
            json!({"verdict": "not_admissible", "pair": [pair.0, pair.1], "distance": distance}),
            format!(
                "balls {} and {} are too far apart (distance {})",
                pair.0,
                pair.1,
                num(distance)
            ),
        ),
        ProbeVerdict::NoCommonPointAtResolution(k) => Report::new(
            false,
            json!({"verdict": "no_common_point", "grid": k}),
            format!("no common point found at resolution 1/{k}"),
        ),
    })
}

fn generate(kind: &str, params: &GenParams, decomp: Option<&Path>) -> Result<Report, Failure> {
    let (c, d) = named(kind, params).map_err(Failure::input)?;
    match (&d, decomp) {
        (Some(d), Some(path)) => write(path, &to_json(&parse_json(&decomposition_to_json(d))))?,
        (None, Some(_)) => {
            return Err(Failure::input(
                "--decomp applies to random_collapsible only",
            ))
        }
        _ => {}
    }
    let json =
        json!({"kind": kind, "vertices": c.num_vertices(), "cubes": c.num_cubes(), "dim": c.dim()});
    let text = format!(
        "{kind}: {} vertices, {} cubes, dimension {}",
        c.num_vertices(),
        c.num_cubes(),
        c.dim()
    );
    Ok(Report::artifact(
        json,
        text,
        parse_json(&ComplexDoc::new(c).to_json()),
    ))
}
