use std::fs;

use cayley_ising::config_file::{parse_config, render_config};
use cayley_ising::configurations::{conditional_hamiltonian, generate as generate_config, ground_state_audit, peierls_verify};
use cayley_ising::contours::{boundary_partition, contour_hamiltonian, contour_stats, count_contours_through, extract_contours, BallSet, BoundaryPartition, ContourCounts};
use cayley_ising::exact::{format_float, to_f64};
use cayley_ising::gibbs::{exact_gibbs, mcmc_sample, two_phase_report, Event, GibbsSpec};
use cayley_ising::model::{containing_regions, in_peierls_region, region_labels, region_membership, region_membership_periodic, RegionLabel};
use cayley_ising::{
    format_exact, parse_exact, Boundary, ConfigKind, Configuration, CosetSubgroup, CouplingConstants, Couplings, Exact,
    PeriodicFieldConstants, Spin, TreeParams, Vertex,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::output::{csv_field, manifest, CmdResult, Emitter, Failure, Format, Status};
use crate::{
    AuditArgs, BcArg, ContoursArgs, CouplingArgs, GenerateArgs, GibbsArgs, KindArg, NrArgs, PeierlsArgs, PhasesArgs,
    SamplerArg, ScanArgs, UtableArgs,
};

const MAX_GRID_POINTS: usize = 1_000_000;

fn exact(name: &str, s: &str) -> Result<Exact, Failure> {
    parse_exact(s).map_err(|e| Failure::Invalid(format!("--{name}: {e}")))
}

fn constant_couplings(j1: &str, j2: &str, alpha: &str) -> Result<CouplingConstants, Failure> {
    Ok(CouplingConstants::new(exact("j1", j1)?, exact("j2", j2)?, exact("alpha", alpha)?))
}

fn couplings(a: &CouplingArgs) -> Result<Couplings, Failure> {
    let j1 = exact("j1", &a.j1)?;
    let j2 = exact("j2", &a.j2)?;
    match (&a.alpha, &a.alpha0, &a.alpha1) {
        (Some(al), None, None) => Ok(CouplingConstants::new(j1, j2, exact("alpha", al)?).into()),
        (None, Some(a0), Some(a1)) => {
            Ok(PeriodicFieldConstants::new(j1, j2, exact("alpha0", a0)?, exact("alpha1", a1)?).into())
        }
        _ => Err(Failure::Invalid("give either --alpha or both --alpha0 and --alpha1".into())),
    }
}

fn params(k: usize, n: usize) -> Result<TreeParams, Failure> {
    Ok(TreeParams::new(k, n)?)
}

fn betas(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|b| {
            let x = to_f64(&exact("beta", b.trim())?);
            if x > 0.0 && x.is_finite() {
                Ok(x)
            } else {
                Err(Failure::Invalid(format!("--beta: {b} is not a positive number")))
            }
        })
        .collect()
}

fn read_config(path: &std::path::Path) -> Result<Configuration, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))?;
    Ok(parse_config(&text)?)
}

fn class_list<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> Vec<String> {
    items.into_iter().map(|c| c.to_string()).collect()
}

pub fn utable(a: &UtableArgs) -> CmdResult {
    let c = couplings(&a.couplings)?;
    let k = a.k;
    params(k, 0)?;
    let table = c.energy_table(k);
    let minimal = class_list(table.minimal_classes());
    let lambda0 = format_exact(&table.lambda0());
    let (regions, interior): (Option<Vec<String>>, Option<Vec<String>>) = match &c {
        Couplings::Periodic(_) if k != 2 => (None, None),
        _ => {
            let closed = containing_regions(&c, k)?;
            let mut open = Vec::new();
            for label in region_labels(k, c.is_periodic()) {
                let label = RegionLabel { interior: true, ..label };
                let inside = match &c {
                    Couplings::Constant(j) => region_membership(j, k, label)?,
                    Couplings::Periodic(p) => region_membership_periodic(p, label, k)?,
                };
                if inside {
                    open.push(label);
                }
            }
            (Some(class_list(closed)), Some(class_list(open)))
        }
    };
    let peierls = match &c {
        Couplings::Constant(j) if k == 2 => Some(in_peierls_region(j, k)?),
        _ => None,
    };
    let mut out = Emitter::open(a.out.as_ref(), a.format, manifest("utable", a, a.format))?;
    let model = if c.is_periodic() { "periodic" } else { "constant" };
    match a.format {
        Format::Json => out.json(json!({
            "k": k,
            "model": model,
            "couplings": c.to_string(),
            "table": table.entries().iter().map(|(cls, v)| json!({"class": cls.to_string(), "energy": format_exact(v)})).collect::<Vec<_>>(),
            "minimal_classes": minimal,
            "lambda0": lambda0,
            "regions": regions,
            "interior_regions": interior,
            "peierls_region": peierls,
        }))?,
        Format::Csv => {
            out.line("class,energy,minimal")?;
            let min = table.min().clone();
            for (cls, v) in table.entries() {
                out.line(format!("{},{},{}", csv_field(&cls.to_string()), format_exact(v), *v == min))?;
            }
        }
        Format::Text => {
            out.line(format!("model: {model}, k = {k}, couplings {c}"))?;
            out.line(format!("{:<10} energy", "class"))?;
            for (cls, v) in table.entries() {
                out.line(format!("{:<10} {}", cls.to_string(), format_exact(v)))?;
            }
            out.line(format!("minimal classes: {}", minimal.join(" ")))?;
            out.line(format!("lambda0: {lambda0}"))?;
            match (&regions, &interior) {
                (Some(r), Some(i)) => {
                    out.line(format!("regions: {}", r.join(" ")))?;
                    out.line(format!("interior regions: {}", if i.is_empty() { "none".into() } else { i.join(" ") }))?;
                }
                _ => out.line("regions: closed forms for the periodic-field model are known for k = 2 only")?,
            }
            if let Some(p) = peierls {
                out.line(format!("peierls region: {p}"))?;
            }
        }
    }
    out.finish()?;
    Ok(Status::Ok)
}

/// `lo:hi:count` (evenly spaced, endpoints included) or a single value.
fn grid(name: &str, spec: &str) -> Result<Vec<Exact>, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [v] => Ok(vec![exact(name, v)?]),
        [lo, hi, count] => {
            let (lo, hi) = (exact(name, lo)?, exact(name, hi)?);
            let count: usize = count
                .parse()
                .map_err(|_| Failure::Invalid(format!("--{name}: bad point count \"{count}\"")))?;
            if count == 0 || count > MAX_GRID_POINTS {
                return Err(Failure::Invalid(format!("--{name}: point count must be in 1..={MAX_GRID_POINTS}")));
            }
            if count == 1 {
                return Ok(vec![lo]);
            }
            let step = (&hi - &lo) / Exact::from_integer((count as i64 - 1).into());
            Ok((0..count)
                .map(|i| &lo + &step * Exact::from_integer((i as i64).into()))
                .collect())
        }
        _ => Err(Failure::Invalid(format!("--{name}: expected a value or lo:hi:count, got \"{spec}\""))),
    }
}

pub fn scan(a: &ScanArgs) -> CmdResult {
    params(a.k, 0)?;
    let (g1, g2, ga) = (grid("j1", &a.j1)?, grid("j2", &a.j2)?, grid("alpha", &a.alpha)?);
    let total = g1.len().saturating_mul(g2.len()).saturating_mul(ga.len());
    if total > MAX_GRID_POINTS {
        return Err(Failure::Invalid(format!("grid has {total} points; the limit is {MAX_GRID_POINTS}")));
    }
    let mut points = Vec::with_capacity(total);
    for al in &ga {
        for j1 in &g1 {
            for j2 in &g2 {
                points.push(CouplingConstants::new(j1.clone(), j2.clone(), al.clone()));
            }
        }
    }
    let k = a.k;
    let rows: Vec<String> = points
        .par_iter()
        .map(|j| {
            let table = Couplings::from(j.clone()).energy_table(k);
            let p = if k == 2 {
                in_peierls_region(j, k).map(|b| b.to_string()).unwrap_or_default()
            } else {
                "NA".to_string()
            };
            format!(
                "{},{},{},{},{},{}",
                format_exact(&j.j1),
                format_exact(&j.j2),
                format_exact(&j.alpha),
                csv_field(&class_list(table.minimal_classes()).join(" ")),
                format_exact(&table.lambda0()),
                p
            )
        })
        .collect();
    let mut out = Emitter::open(a.out.as_ref(), Format::Csv, manifest("scan", a, Format::Csv))?;
    out.line("j1,j2,alpha,minimal_classes,lambda0,in_peierls_region")?;
    for r in rows {
        out.line(r)?;
    }
    out.finish()?;
    Ok(Status::Ok)
}

pub fn audit(a: &AuditArgs) -> CmdResult {
    let config = read_config(&a.config)?;
    let c = couplings(&a.couplings)?;
    let depth = a.depth.unwrap_or((config.radius() + 1).min(3));
    if depth > config.radius() + 1 {
        return Err(Failure::Invalid(format!(
            "--depth {depth} needs spins beyond the file's boundary shell (max {})",
            config.radius() + 1
        )));
    }
    let report = ground_state_audit(&config, &c, depth)?;
    let mut out = Emitter::open(a.out.as_ref(), a.format, manifest("audit", a, a.format))?;
    let witness = report.opposite_sign_witness().map(|(p, m)| vec![p.to_string(), m.to_string()]);
    match a.format {
        Format::Json => {
            let mut body = serde_json::to_value(&report).expect("report serializes");
            body["opposite_sign_witness"] = json!(witness);
            out.json(body)?
        }
        _ => {
            out.line(format!("couplings {c}, depth {depth}"))?;
            out.line(format!("ground state: {}", if report.is_ground { "yes" } else { "no" }))?;
            out.line(format!("minimum ball energy: {}", format_exact(&report.minimum)))?;
            out.line(format!("minimal classes: {}", class_list(&report.minimal_classes).join(" ")))?;
            out.line(format!("realized classes: {}", class_list(&report.realized_classes).join(" ")))?;
            out.line(format!("offending balls: {}", report.offending_balls.len()))?;
            for b in report.offending_balls.iter().take(10) {
                out.line(format!(
                    "  center \"{}\" class {} energy {}",
                    b.center,
                    b.class,
                    format_exact(&b.energy)
                ))?;
            }
            if let Some(w) = witness {
                out.line(format!("opposite-sign classes: {} {}", w[0], w[1]))?;
            }
        }
    }
    out.finish()?;
    Ok(if report.is_ground { Status::Ok } else { Status::Violated })
}

pub fn contours(a: &ContoursArgs) -> CmdResult {
    let config = read_config(&a.config)?;
    let k = config.k();
    let contours = extract_contours(&config)?;
    let partition = boundary_partition(&config)?;
    let energies = match (&a.j1, &a.j2, &a.alpha) {
        (Some(j1), Some(j2), Some(al)) => {
            let j = constant_couplings(j1, j2, al)?;
            let from_contours = contour_hamiltonian(&config, &j, BallSet::Interacting)?;
            let direct = conditional_hamiltonian(&config, &j.into())?;
            Some((from_contours, direct))
        }
        _ => None,
    };
    let labels = BoundaryPartition::labels(k);
    let records: Vec<Value> = contours
        .iter()
        .map(|g| {
            let stats = contour_stats(g, &partition);
            json!({
                "interior": class_list(&g.interior),
                "support": g.support.iter().map(|e| [e.inner().to_string(), e.outer().to_string()]).collect::<Vec<_>>(),
                "subcontours": g.subcontours.len(),
                "size": stats.size,
                "counts": labels.iter().filter(|c| stats.gamma_counts[c] > 0).map(|c| json!([c.to_string(), stats.gamma_counts[c]])).collect::<Vec<_>>(),
            })
        })
        .collect();
    let part: Vec<Value> = labels
        .iter()
        .map(|c| json!([c.to_string(), partition.count(c)]))
        .collect();
    let agrees = energies.as_ref().is_none_or(|(x, y)| x == y);
    let mut out = Emitter::open(a.out.as_ref(), a.format, manifest("contours", a, a.format))?;
    match a.format {
        Format::Json => out.json(json!({
            "contours": records,
            "partition": part,
            "improper_balls": partition.len(),
            "contour_hamiltonian": energies.as_ref().map(|e| format_exact(&e.0)),
            "conditional_hamiltonian": energies.as_ref().map(|e| format_exact(&e.1)),
        }))?,
        _ => {
            out.line(format!("contours: {}", contours.len()))?;
            for (i, (g, r)) in contours.iter().zip(&records).enumerate() {
                out.line(format!(
                    "contour {i}: |gamma| = {}, {} support edges, {} subcontours, interior {}",
                    r["size"],
                    g.support.len(),
                    g.subcontours.len(),
                    g.interior.iter().map(|v| format!("\"{v}\"")).collect::<Vec<_>>().join(" ")
                ))?;
                out.line(format!(
                    "  support {}",
                    g.support.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")
                ))?;
            }
            out.line(format!(
                "improper balls: {} ({})",
                partition.len(),
                labels
                    .iter()
                    .filter(|c| partition.count(c) > 0)
                    .map(|c| format!("{c}:{}", partition.count(c)))
                    .collect::<Vec<_>>()
                    .join(" ")
            ))?;
            if let Some((x, y)) = &energies {
                out.line(format!(
                    "hamiltonian: contour form {}, direct {}, {}",
                    format_exact(x),
                    format_exact(y),
                    if agrees { "equal" } else { "DIFFERENT" }
                ))?;
            }
        }
    }
    out.finish()?;
    Ok(if agrees { Status::Ok } else { Status::Violated })
}

fn boundary(bc: BcArg) -> Boundary {
    match bc {
        BcArg::Plus => Boundary::Plus,
        BcArg::Minus => Boundary::Minus,
    }
}

pub fn gibbs(a: &GibbsArgs) -> CmdResult {
    let p = params(a.k, a.n)?;
    let c = couplings(&a.couplings)?;
    let bs = betas(&a.beta)?;
    let vertices = a
        .vertices
        .iter()
        .map(|s| Vertex::parse(s, a.k).map_err(Failure::from))
        .collect::<Result<Vec<_>, _>>()?;
    let events: Vec<Event> = vertices.iter().map(|v| Event::Spin(v.clone(), Spin::Plus)).collect();
    let mut records = Vec::new();
    for beta in &bs {
        let spec = GibbsSpec::new(p, c.clone(), *beta, boundary(a.bc)).with_cap(a.cap);
        let rec = match a.sampler {
            SamplerArg::Exact => {
                let r = exact_gibbs(&spec, &events)?;
                json!({
                    "beta": format_float(*beta),
                    "boundary": r.boundary,
                    "configurations": r.configurations,
                    "log_partition": format_float(r.log_partition),
                    "root_marginal_plus": format_float(r.root_marginal_plus),
                    "events": vertices.iter().zip(&r.event_probabilities).map(|(v, q)| json!([v.to_string(), format_float(*q)])).collect::<Vec<_>>(),
                })
            }
            SamplerArg::Mcmc => {
                let r = mcmc_sample(&spec, a.sweeps, a.seed)?;
                let marg: std::collections::BTreeMap<&Vertex, f64> = r.marginals_plus.iter().map(|(v, q)| (v, *q)).collect();
                let ev = vertices
                    .iter()
                    .map(|v| {
                        marg.get(v)
                            .map(|q| json!([v.to_string(), format_float(*q)]))
                            .ok_or_else(|| Failure::Invalid(format!("--vertex \"{v}\" lies outside V_{}", a.n)))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                json!({
                    "beta": format_float(*beta),
                    "boundary": boundary(a.bc).label(),
                    "sweeps": r.sweeps,
                    "seed": r.seed,
                    "root_marginal_plus": format_float(r.root_marginal_plus),
                    "root_standard_error": format_float(r.root_standard_error),
                    "acceptance_rate": format_float(r.acceptance_rate),
                    "events": ev,
                })
            }
        };
        records.push(rec);
    }
    let mut out = Emitter::open(a.out.as_ref(), a.format, manifest("gibbs", a, a.format))?;
    let exact_mode = matches!(a.sampler, SamplerArg::Exact);
    let event_cells = |r: &Value| -> Vec<String> {
        r["events"]
            .as_array()
            .map(|v| v.iter().map(|e| e[1].as_str().unwrap_or_default().to_string()).collect())
            .unwrap_or_default()
    };
    match out.format() {
        Format::Json => {
            for r in records {
                out.json(r)?;
            }
        }
        Format::Csv => {
            let mut header: Vec<String> = if exact_mode {
                ["beta", "boundary", "log_partition", "root_marginal_plus"].map(String::from).to_vec()
            } else {
                ["beta", "boundary", "root_marginal_plus", "root_standard_error"].map(String::from).to_vec()
            };
            header.extend(vertices.iter().map(|v| csv_field(&format!("P(\"{v}\"=+1)"))));
            out.line(header.join(","))?;
            for r in &records {
                let s = |key: &str| r[key].as_str().unwrap_or_default().to_string();
                let mut row = if exact_mode {
                    vec![s("beta"), s("boundary"), s("log_partition"), s("root_marginal_plus")]
                } else {
                    vec![s("beta"), s("boundary"), s("root_marginal_plus"), s("root_standard_error")]
                };
                row.extend(event_cells(r));
                out.line(row.join(","))?;
            }
        }
        Format::Text => {
            out.line(format!("couplings {c}, k = {}, n = {}", a.k, a.n))?;
            for r in &records {
                let s = |key: &str| r[key].as_str().unwrap_or_default().to_string();
                let mut line = format!("beta {} boundary {}", s("beta"), s("boundary"));
                if exact_mode {
                    line += &format!(" log_partition {} root_marginal_plus {}", s("log_partition"), s("root_marginal_plus"));
                } else {
                    line += &format!(
                        " root_marginal_plus {} standard_error {} acceptance {}",
                        s("root_marginal_plus"),
                        s("root_standard_error"),
                        s("acceptance_rate")
                    );
                }
                for (v, q) in vertices.iter().zip(event_cells(r)) {
                    line += &format!(" P(\"{v}\"=+1) {q}");
                }
                out.line(line)?;
            }
        }
    }
    out.finish()?;
    Ok(Status::Ok)
}

pub fn phases(a: &PhasesArgs) -> CmdResult {
    let p = params(a.k, a.n)?;
    let j = constant_couplings(&a.j1, &a.j2, &a.alpha)?;
    let bs = betas(&a.beta)?;
    let report = two_phase_report(p, &j, &bs, a.cap)?;
    let symmetric = report.rows.iter().all(|r| r.symmetry_error <= 1e-12);
    let mut out = Emitter::open(a.out.as_ref(), a.format, manifest("phases", a, a.format))?;
    let rows: Vec<[String; 6]> = report
        .rows
        .iter()
        .map(|r| {
            [r.beta, r.plus_bc, r.minus_bc, r.mirrored_plus_bc, r.mirrored_minus_bc, r.symmetry_error].map(format_float)
        })
        .collect();
    let header = ["beta", "plus_bc", "minus_bc", "mirrored_plus_bc", "mirrored_minus_bc", "symmetry_error"];
    match a.format {
        Format::Json => out.json(json!({
            "n": report.n,
            "region": report.region,
            "rows": rows.iter().map(|r| header.iter().zip(r).map(|(h, v)| ((*h).to_string(), json!(v))).collect::<serde_json::Map<_, _>>()).collect::<Vec<_>>(),
        }))?,
        Format::Csv => {
            out.line(header.join(","))?;
            for r in &rows {
                out.line(r.join(","))?;
            }
        }
        Format::Text => {
            out.line(format!("couplings {j} in {}, n = {}; root-plus marginals", report.region, report.n))?;
            out.line(header.join(" "))?;
            for r in &rows {
                out.line(r.join(" "))?;
            }
        }
    }
    out.finish()?;
    Ok(if symmetric { Status::Ok } else { Status::Violated })
}

pub fn peierls(a: &PeierlsArgs) -> CmdResult {
    let j = constant_couplings(&a.j1, &a.j2, &a.alpha)?;
    let r = peierls_verify(&j, a.k, a.radius)?;
    let mut out = Emitter::open(a.out.as_ref(), a.format, manifest("peierls", a, a.format))?;
    let ratio_float = r.min_ratio.as_ref().map(|x| format!("{:.1}", to_f64(x)));
    let ratio_exact = r.min_ratio.as_ref().map(format_exact);
    match a.format {
        Format::Json => {
            let mut body = serde_json::to_value(&r).expect("report serializes");
            body["min_ratio_float"] = json!(ratio_float);
            out.json(body)?
        }
        _ => {
            out.line(format!(
                "{}/{} satisfied, min ratio {} (exact {}), lambda0 = {}",
                r.satisfied,
                r.total,
                ratio_float.as_deref().unwrap_or("none"),
                ratio_exact.as_deref().unwrap_or("none"),
                format_exact(&r.lambda0)
            ))?;
            out.line(format!(
                "min ratio attained at minus set {{{}}}",
                r.min_ratio_witness.iter().map(|v| format!("\"{v}\"")).collect::<Vec<_>>().join(", ")
            ))?;
            for v in r.violations.iter().take(10) {
                out.line(format!(
                    "violation: minus set {:?}, H = {}, |boundary| = {}",
                    v.minus_set.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                    format_exact(&v.relative_energy),
                    v.boundary_size
                ))?;
            }
        }
    }
    out.finish()?;
    Ok(if r.violations.is_empty() { Status::Ok } else { Status::Violated })
}

pub fn nr(a: &NrArgs) -> CmdResult {
    let p = params(2, a.volume)?;
    let x = Vertex::parse(&a.vertex, 2)?;
    let counts = count_contours_through(&x, a.rmax, p)?;
    let rows: Vec<(usize, u64, f64)> = (1..=a.rmax)
        .map(|r| (r, counts.counts.get(&r).copied().unwrap_or(0), ContourCounts::bound(r)))
        .collect();
    let ok = counts.violations().is_empty();
    let mut out = Emitter::open(a.out.as_ref(), a.format, manifest("nr", a, a.format))?;
    match a.format {
        Format::Json => out.json(json!({
            "vertex": x.to_string(),
            "volume": a.volume,
            "rows": rows.iter().map(|(r, n, b)| json!({"r": r, "count": n, "bound": format_float(*b), "ok": (*n as f64) <= *b})).collect::<Vec<_>>(),
        }))?,
        Format::Csv => {
            out.line("r,count,bound,ok")?;
            for (r, n, b) in &rows {
                out.line(format!("{r},{n},{},{}", format_float(*b), (*n as f64) <= *b))?;
            }
        }
        Format::Text => {
            out.line(format!("contours through \"{x}\" from minus subsets of V_{}", a.volume))?;
            out.line("r count bound ok")?;
            for (r, n, b) in &rows {
                out.line(format!("{r} {n} {} {}", format_float(*b), (*n as f64) <= *b))?;
            }
        }
    }
    out.finish()?;
    Ok(if ok { Status::Ok } else { Status::Violated })
}

fn spin_values(s: &str, count: usize) -> Result<Vec<Spin>, Failure> {
    let v = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .ok()
                .and_then(|x| Spin::from_value(x).ok())
                .ok_or_else(|| Failure::Invalid(format!("--values: \"{t}\" is not 1 or -1")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if v.len() != count {
        return Err(Failure::Invalid(format!("--values: expected {count} values, got {}", v.len())));
    }
    Ok(v)
}

fn subgroup(a: &GenerateArgs) -> Result<CosetSubgroup, Failure> {
    let s = a
        .subgroup
        .as_deref()
        .ok_or_else(|| Failure::Invalid("--subgroup is required for periodic kinds".into()))?;
    let gens = s
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| Failure::Invalid(format!("--subgroup: bad generator \"{t}\""))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CosetSubgroup::new(&gens, a.k)?)
}

pub fn generate(a: &GenerateArgs) -> CmdResult {
    let p = params(a.k, a.n)?;
    let s = match a.spin {
        BcArg::Plus => Spin::Plus,
        BcArg::Minus => Spin::Minus,
    };
    let values = |count| -> Result<Vec<Spin>, Failure> {
        spin_values(
            a.values.as_deref().ok_or_else(|| Failure::Invalid("--values is required for periodic kinds".into()))?,
            count,
        )
    };
    let kind = match a.kind {
        KindArg::Constant => ConfigKind::Constant(s),
        KindArg::Alternating => ConfigKind::Alternating(s),
        KindArg::Periodic => {
            let v = values(2)?;
            ConfigKind::HaPeriodic { subgroup: subgroup(a)?, l0: v[0], l1: v[1] }
        }
        KindArg::WeaklyPeriodic => {
            let v = values(4)?;
            ConfigKind::HaWeaklyPeriodic { subgroup: subgroup(a)?, values: [[v[0], v[1]], [v[2], v[3]]] }
        }
    };
    let config = generate_config(&kind, p)?;
    let m = manifest("generate", a, Format::Json);
    let text = render_config(&config, Some(&m));
    match &a.out {
        Some(path) => fs::write(path, format!("{text}\n"))?,
        None => println!("{text}"),
    }
    Ok(Status::Ok)
}
