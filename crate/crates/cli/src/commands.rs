use wqed::model::{build_effective, build_h1, build_h2, compare_sw_doublon, Sector, TwoParticleBasis};
use wqed::observables::{loss_sweep, mobility_map, scaling_curves, AlphaSpec, Quantity};
use wqed::spectral::{eig_biorthogonal, eig_hermitian};
use wqed::verify::{run_all, SuiteReport};
use wqed::scattering::ORACLE_MAX_SITES;

use crate::config::{Format, RunConfig};
use crate::output::{json_doc, long_rows, map_rows, num, CsvDoc};
use crate::CliError;

/// Rendered output: the main document and optional sibling files keyed by suffix.
pub struct Rendered {
    pub main: String,
    pub siblings: Vec<(&'static str, String)>,
    /// Verification suites that failed, if any.
    pub failed_suites: Vec<String>,
}

impl Rendered {
    fn single(main: String) -> Self {
        Self { main, siblings: Vec::new(), failed_suites: Vec::new() }
    }
}

fn compute(e: wqed::Error) -> CliError {
    CliError::Compute(e.to_string())
}

fn map_command(config: &RunConfig, command: &str, quantity: Quantity) -> Result<Rendered, CliError> {
    let result = mobility_map(&config.params, &config.h_values(), &config.grids.alpha, &[quantity], &config.map_options())
        .map_err(compute)?;
    let replay = config.replay_json();
    match config.output.format {
        Format::Json => Ok(Rendered::single(json_doc(command, &replay, &result)?)),
        Format::Csv => {
            let mut doc = CsvDoc::new(command, &replay, vec!["h_over_J", "alpha", "value", "flags"]);
            doc.comment(format!("quantity: {}", quantity.name()));
            map_rows(&mut doc, &result, quantity, false);
            Ok(Rendered::single(doc.render()?))
        }
    }
}

pub fn t2_map(config: &RunConfig) -> Result<Rendered, CliError> {
    map_command(config, "t2-map", Quantity::T2)
}

pub fn pr_map(config: &RunConfig) -> Result<Rendered, CliError> {
    map_command(config, "pr-map", Quantity::LogPr)
}

pub fn t2coh_map(config: &RunConfig) -> Result<Rendered, CliError> {
    map_command(config, "t2coh-map", Quantity::T2Coh)
}

pub fn loss_map(config: &RunConfig) -> Result<Rendered, CliError> {
    let result = loss_sweep(
        &config.params,
        &config.gamma_values(),
        &config.h_values(),
        &config.grids.alpha,
        &config.map_options(),
    )
    .map_err(compute)?;
    let replay = config.replay_json();
    match config.output.format {
        Format::Json => Ok(Rendered::single(json_doc("loss-map", &replay, &result)?)),
        Format::Csv => {
            let mut doc = CsvDoc::new("loss-map", &replay, vec!["gamma_over_J", "h_over_J", "alpha", "value", "flags"]);
            doc.comment(format!("quantity: {}", Quantity::T2.name()));
            map_rows(&mut doc, &result, Quantity::T2, true);
            Ok(Rendered::single(doc.render()?))
        }
    }
}

pub fn scaling(config: &RunConfig) -> Result<Rendered, CliError> {
    let AlphaSpec::Select(selector) = config.grids.alpha else {
        return Err(CliError::Config("scaling needs grids.alpha to be \"lowest\", \"middle\" or \"highest\"".into()));
    };
    let mut ns = config.n_values();
    ns.sort_unstable();
    let result =
        scaling_curves(&config.params, &ns, selector, &config.h_values(), &config.map_options()).map_err(compute)?;
    let replay = config.replay_json();
    match config.output.format {
        Format::Json => Ok(Rendered::single(json_doc("scaling", &replay, &result)?)),
        Format::Csv => {
            let j = config.params.j;
            let mut doc = CsvDoc::new("scaling", &replay, vec!["N", "h_over_J", "alpha", "quantity", "value", "flags"]);
            if let Some(t) = result.metadata.sw_transition {
                doc.comment(format!("sw_transition_h_over_J: {}", num(t / j)));
            }
            let aa: Vec<String> =
                result.metadata.aa_reference.iter().map(|(h, v)| format!("{}:{}", num(h / j), num(*v))).collect();
            doc.comment(format!("aa_reference_h_over_J: {}", aa.join(" ")));
            long_rows(&mut doc, &result, &result.metadata.quantities);
            Ok(Rendered::single(doc.render()?))
        }
    }
}

#[derive(serde::Serialize)]
struct SpectrumRow {
    sector: usize,
    alpha: usize,
    re: f64,
    im: f64,
}

pub fn spectrum(config: &RunConfig) -> Result<Rendered, CliError> {
    let p = &config.params;
    let mut closed = Vec::new();
    for (sector, ham) in [(1, build_h1(p)), (2, build_h2(p, &TwoParticleBasis::new(p.n)))] {
        let s = eig_hermitian(&ham.map_err(compute)?).map_err(compute)?;
        closed.extend(s.values.iter().enumerate().map(|(a, &e)| SpectrumRow { sector, alpha: a + 1, re: e, im: 0.0 }));
    }
    let mut effective = Vec::new();
    for (sector, s) in [(1, Sector::One), (2, Sector::Two)] {
        let spec = eig_biorthogonal(&build_effective(p, s, true).map_err(compute)?).map_err(compute)?;
        effective.extend(spec.values.iter().enumerate().map(|(a, z)| SpectrumRow { sector, alpha: a + 1, re: z.re, im: z.im }));
    }
    let replay = config.replay_json();
    match config.output.format {
        Format::Json => {
            let body = serde_json::json!({ "closed": closed, "effective": effective });
            Ok(Rendered::single(json_doc("spectrum", &replay, body)?))
        }
        Format::Csv => {
            let table = |rows: &[SpectrumRow], label: &str| {
                let mut doc = CsvDoc::new("spectrum", &replay, vec!["sector", "alpha", "re_E", "im_E"]);
                doc.comment(format!("hamiltonian: {label}"));
                for r in rows {
                    doc.row(vec![r.sector.to_string(), r.alpha.to_string(), num(r.re), num(r.im)]);
                }
                doc.render()
            };
            Ok(Rendered {
                main: table(&closed, "closed")?,
                siblings: vec![("effective", table(&effective, "effective")?)],
                failed_suites: Vec::new(),
            })
        }
    }
}

pub fn sw_check(config: &RunConfig) -> Result<Rendered, CliError> {
    let c = compare_sw_doublon(&config.params).map_err(compute)?;
    let replay = config.replay_json();
    match config.output.format {
        Format::Json => {
            let body = serde_json::json!({
                "doublon": c.doublon,
                "exact": c.exact,
                "max_deviation": c.max_deviation,
                "bound": c.bound,
                "within_bound": c.within_bound(),
                "predicted_transition": c.predicted_transition / config.params.j,
            });
            Ok(Rendered::single(json_doc("sw-check", &replay, body)?))
        }
        Format::Csv => {
            let mut doc = CsvDoc::new("sw-check", &replay, vec!["k", "doublon", "exact", "abs_diff"]);
            doc.comment(format!("predicted_transition: {}", num(c.predicted_transition / config.params.j)));
            doc.comment(format!("max_deviation: {}", num(c.max_deviation)));
            doc.comment(format!("bound: {}", num(c.bound)));
            doc.comment(format!("within_bound: {}", c.within_bound()));
            for (k, (a, b)) in c.doublon.iter().zip(&c.exact).enumerate() {
                doc.row(vec![(k + 1).to_string(), num(*a), num(*b), num((a - b).abs())]);
            }
            Ok(Rendered::single(doc.render()?))
        }
    }
}

pub fn verify(config: &RunConfig) -> Result<(Rendered, Vec<SuiteReport>), CliError> {
    if config.params.n > ORACLE_MAX_SITES {
        return Err(CliError::Config(format!("verify runs the oracle suites, which need N <= {ORACLE_MAX_SITES}")));
    }
    let reports = run_all(&config.params).map_err(compute)?;
    let failed_suites = reports.iter().filter(|r| !r.passed).map(|r| r.name.to_string()).collect();
    let replay = config.replay_json();
    let main = match config.output.format {
        Format::Json => json_doc("verify", &replay, &reports)?,
        Format::Csv => {
            let mut doc = CsvDoc::new("verify", &replay, vec!["suite", "max_deviation", "threshold", "samples", "passed"]);
            for r in &reports {
                doc.row(vec![
                    r.name.to_string(),
                    num(r.max_deviation),
                    num(r.threshold),
                    r.samples.to_string(),
                    r.passed.to_string(),
                ]);
            }
            doc.render()?
        }
    };
    Ok((Rendered { main, siblings: Vec::new(), failed_suites }, reports))
}
