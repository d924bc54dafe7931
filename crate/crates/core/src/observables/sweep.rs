use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cell::ScatteringCell;
use super::transmission::{effective_lambda2, t2, t2_coherent, T2Options, UNDERFLOW};
use crate::error::{invalid, Result};
use crate::model::{build_h2, TwoParticleBasis};
use crate::params::LatticeParams;
use crate::spectral::{eig_hermitian, participation_ratio, HermitianSpectrum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    T2,
    T2Coh,
    LogPr,
    InvLambda2,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::T2 => "t2",
            Quantity::T2Coh => "t2_coh",
            Quantity::LogPr => "log_pr",
            Quantity::InvLambda2 => "inv_lambda2",
        }
    }

    fn needs_scattering(self) -> bool {
        !matches!(self, Quantity::LogPr)
    }
}

/// A single eigenstate picked by its position in the sorted two-particle spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlphaSelector {
    Lowest,
    Middle,
    Highest,
}

impl AlphaSelector {
    pub fn resolve(self, d2: usize) -> usize {
        match self {
            AlphaSelector::Lowest => 1,
            AlphaSelector::Middle => (d2 / 2).max(1),
            AlphaSelector::Highest => d2,
        }
    }
}

/// Which two-particle eigenstates a sweep visits. In JSON: `"all"`, one of
/// `"lowest"`, `"middle"`, `"highest"`, or an explicit list of 1-based indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "AlphaSpecRepr", into = "AlphaSpecRepr")]
pub enum AlphaSpec {
    All,
    Select(AlphaSelector),
    List(Vec<usize>),
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum AlphaKeyword {
    All,
    Lowest,
    Middle,
    Highest,
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum AlphaSpecRepr {
    Keyword(AlphaKeyword),
    List(Vec<usize>),
}

impl From<AlphaSpecRepr> for AlphaSpec {
    fn from(r: AlphaSpecRepr) -> Self {
        match r {
            AlphaSpecRepr::Keyword(AlphaKeyword::All) => AlphaSpec::All,
            AlphaSpecRepr::Keyword(AlphaKeyword::Lowest) => AlphaSpec::Select(AlphaSelector::Lowest),
            AlphaSpecRepr::Keyword(AlphaKeyword::Middle) => AlphaSpec::Select(AlphaSelector::Middle),
            AlphaSpecRepr::Keyword(AlphaKeyword::Highest) => AlphaSpec::Select(AlphaSelector::Highest),
            AlphaSpecRepr::List(v) => AlphaSpec::List(v),
        }
    }
}

impl From<AlphaSpec> for AlphaSpecRepr {
    fn from(s: AlphaSpec) -> Self {
        match s {
            AlphaSpec::All => AlphaSpecRepr::Keyword(AlphaKeyword::All),
            AlphaSpec::Select(AlphaSelector::Lowest) => AlphaSpecRepr::Keyword(AlphaKeyword::Lowest),
            AlphaSpec::Select(AlphaSelector::Middle) => AlphaSpecRepr::Keyword(AlphaKeyword::Middle),
            AlphaSpec::Select(AlphaSelector::Highest) => AlphaSpecRepr::Keyword(AlphaKeyword::Highest),
            AlphaSpec::List(v) => AlphaSpecRepr::List(v),
        }
    }
}

impl AlphaSpec {
    pub fn resolve(&self, d2: usize) -> Vec<usize> {
        match self {
            AlphaSpec::All => (1..=d2).collect(),
            AlphaSpec::Select(s) => vec![s.resolve(d2)],
            AlphaSpec::List(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MapOptions {
    pub t2: T2Options,
    /// Worker threads; `None` uses the available parallelism.
    #[serde(skip)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepAxes {
    pub h: Vec<f64>,
    pub alpha: AlphaSpec,
    pub gamma: Vec<f64>,
    pub n: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMetadata {
    /// Base parameters; each record overrides n, gamma and h.
    pub params: LatticeParams,
    pub quantities: Vec<Quantity>,
    pub options: T2Options,
    pub code_version: String,
    /// (h, 2 ln(h / 2J)) for the grid points above the Aubry-Andre transition.
    pub aa_reference: Vec<(f64, f64)>,
    /// The strong-interaction doublon transition 2J/U.
    pub sw_transition: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub n: usize,
    pub gamma: f64,
    pub h: f64,
    pub alpha: usize,
    /// Closed-system two-particle energy of the eigenstate.
    pub energy: Option<f64>,
    pub t2: Option<f64>,
    pub t2_coh: Option<f64>,
    pub log_pr: Option<f64>,
    pub inv_lambda2: Option<f64>,
    pub flags: Vec<String>,
    pub error: Option<String>,
}

impl CellRecord {
    fn empty(params: &LatticeParams, alpha: usize) -> Self {
        Self {
            n: params.n,
            gamma: params.gamma,
            h: params.h,
            alpha,
            energy: None,
            t2: None,
            t2_coh: None,
            log_pr: None,
            inv_lambda2: None,
            flags: Vec::new(),
            error: None,
        }
    }

    pub fn get(&self, q: Quantity) -> Option<f64> {
        match q {
            Quantity::T2 => self.t2,
            Quantity::T2Coh => self.t2_coh,
            Quantity::LogPr => self.log_pr,
            Quantity::InvLambda2 => self.inv_lambda2,
        }
    }

    fn flag(&mut self, name: &str) {
        if !self.flags.iter().any(|f| f == name) {
            self.flags.push(name.to_string());
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axes: SweepAxes,
    pub records: Vec<CellRecord>,
    pub metadata: SweepMetadata,
}

impl SweepResult {
    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| r.error.is_some()).count()
    }
}

struct Prepared {
    closed2: HermitianSpectrum,
    cell: Option<ScatteringCell>,
}

fn prepare(params: &LatticeParams, scattering: bool) -> Result<Prepared> {
    if scattering {
        let cell = ScatteringCell::new(params)?;
        Ok(Prepared { closed2: cell.closed2.clone(), cell: Some(cell) })
    } else {
        params.validate()?;
        let closed2 = eig_hermitian(&build_h2(params, &TwoParticleBasis::new(params.n))?)?;
        Ok(Prepared { closed2, cell: None })
    }
}

fn evaluate(
    record: &mut CellRecord,
    prep: &Prepared,
    alpha: usize,
    quantities: &[Quantity],
    options: &T2Options,
) -> Result<()> {
    if alpha == 0 || alpha > prep.closed2.dim() {
        return Err(invalid("alpha", format!("{alpha} outside 1..={}", prep.closed2.dim())));
    }
    record.energy = Some(prep.closed2.values[alpha - 1]);
    let has = |q| quantities.contains(&q);
    if has(Quantity::LogPr) {
        record.log_pr = Some(participation_ratio(alpha, &prep.closed2)?.log_d2);
    }
    let Some(cell) = &prep.cell else { return Ok(()) };
    if has(Quantity::T2) || has(Quantity::InvLambda2) {
        let o = t2(alpha, cell, options)?;
        if o.clamped {
            record.flag("clamped");
        }
        if o.fallbacks > 0 {
            record.flag("fallback");
        }
        record.t2 = Some(o.value);
        if has(Quantity::InvLambda2) {
            if o.value < UNDERFLOW {
                record.flag("underflow");
            }
            record.inv_lambda2 = Some(effective_lambda2(o.value, cell.params.n));
        }
    }
    if has(Quantity::T2Coh) {
        let o = t2_coherent(alpha, cell, options)?;
        if o.clamped {
            record.flag("clamped");
        }
        if o.fallbacks > 0 {
            record.flag("fallback");
        }
        record.t2_coh = Some(o.value);
    }
    Ok(())
}

/// Evaluates every (point, alpha) cell. Records come back in point-major,
/// alpha-minor order whatever the scheduling.
fn run_grid(
    points: &[LatticeParams],
    alphas: &AlphaSpec,
    quantities: &[Quantity],
    options: &MapOptions,
) -> Result<Vec<CellRecord>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.workers.unwrap_or(0))
        .build()
        .map_err(|e| invalid("workers", e.to_string()))?;
    let scattering = quantities.iter().any(|q| q.needs_scattering());
    pool.install(|| {
        let tasks: Vec<(usize, usize)> = points
            .iter()
            .enumerate()
            .flat_map(|(k, p)| alphas.resolve(p.d2()).into_iter().map(move |a| (k, a)))
            .collect();
        let mut needed = vec![false; points.len()];
        for &(k, _) in &tasks {
            needed[k] = true;
        }
        let prepared: Vec<Option<Result<Prepared>>> = points
            .par_iter()
            .zip(needed.par_iter())
            .map(|(p, &need)| need.then(|| prepare(p, scattering)))
            .collect();
        Ok(tasks
            .par_iter()
            .map(|&(k, alpha)| {
                let mut record = CellRecord::empty(&points[k], alpha);
                let outcome = match prepared[k].as_ref().expect("prepared for every task") {
                    Ok(prep) => evaluate(&mut record, prep, alpha, quantities, &options.t2),
                    Err(e) => Err(e.clone()),
                };
                if let Err(e) = outcome {
                    record.error = Some(e.to_string());
                }
                record
            })
            .collect())
    })
}

fn check_grid(name: &'static str, values: &[f64]) -> Result<()> {
    match values.iter().find(|v| !v.is_finite()) {
        Some(v) => Err(invalid(name, format!("non-finite grid value {v}"))),
        None => Ok(()),
    }
}

fn metadata(params: &LatticeParams, quantities: &[Quantity], options: &MapOptions) -> SweepMetadata {
    SweepMetadata {
        params: params.clone(),
        quantities: quantities.to_vec(),
        options: options.t2,
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        aa_reference: Vec::new(),
        sw_transition: None,
    }
}

impl SweepMetadata {
    fn with_references(mut self, params: &LatticeParams, h_grid: &[f64]) -> Self {
        self.aa_reference = h_grid
            .iter()
            .filter(|&&h| h > 2.0 * params.j)
            .map(|&h| (h, 2.0 * (h / (2.0 * params.j)).ln()))
            .collect();
        self.sw_transition = (params.u != 0.0).then(|| 2.0 * params.j / params.u);
        self
    }
}

/// Observables on the (h, alpha) grid at fixed remaining parameters.
pub fn mobility_map(
    params: &LatticeParams,
    h_grid: &[f64],
    alphas: &AlphaSpec,
    quantities: &[Quantity],
    options: &MapOptions,
) -> Result<SweepResult> {
    params.validate()?;
    check_grid("h_grid", h_grid)?;
    let points: Vec<LatticeParams> = h_grid.iter().map(|&h| LatticeParams { h, ..params.clone() }).collect();
    let records = run_grid(&points, alphas, quantities, options)?;
    Ok(SweepResult {
        axes: SweepAxes { h: h_grid.to_vec(), alpha: alphas.clone(), gamma: vec![params.gamma], n: vec![params.n] },
        records,
        metadata: metadata(params, quantities, options),
    })
}

/// log_{d2} R and 1/Lambda_2 against h for one selected eigenstate at each chain length.
pub fn scaling_curves(
    params: &LatticeParams,
    n_list: &[usize],
    selector: AlphaSelector,
    h_grid: &[f64],
    options: &MapOptions,
) -> Result<SweepResult> {
    params.validate()?;
    check_grid("h_grid", h_grid)?;
    if n_list.windows(2).any(|w| w[0] > w[1]) {
        return Err(invalid("n_list", "must be sorted ascending"));
    }
    let points: Vec<LatticeParams> = n_list
        .iter()
        .flat_map(|&n| h_grid.iter().map(move |&h| LatticeParams { n, h, ..params.clone() }))
        .collect();
    let quantities = [Quantity::LogPr, Quantity::InvLambda2];
    let alphas = AlphaSpec::Select(selector);
    let records = run_grid(&points, &alphas, &quantities, options)?;
    Ok(SweepResult {
        axes: SweepAxes { h: h_grid.to_vec(), alpha: alphas, gamma: vec![params.gamma], n: n_list.to_vec() },
        records,
        metadata: metadata(params, &quantities, options).with_references(params, h_grid),
    })
}

/// T2 maps for each loss rate. A record whose T2 exceeds the value at the
/// next smaller loss rate by more than the integration tolerance is flagged
/// `non_monotone_gamma`.
pub fn loss_sweep(
    params: &LatticeParams,
    gamma_list: &[f64],
    h_grid: &[f64],
    alphas: &AlphaSpec,
    options: &MapOptions,
) -> Result<SweepResult> {
    params.validate()?;
    check_grid("h_grid", h_grid)?;
    check_grid("gamma_list", gamma_list)?;
    if let Some(g) = gamma_list.iter().find(|&&g| g < 0.0) {
        return Err(invalid("gamma_list", format!("negative loss rate {g}")));
    }
    let points: Vec<LatticeParams> = gamma_list
        .iter()
        .flat_map(|&gamma| h_grid.iter().map(move |&h| LatticeParams { gamma, h, ..params.clone() }))
        .collect();
    let quantities = [Quantity::T2];
    let mut records = run_grid(&points, alphas, &quantities, options)?;

    let per_gamma = records.len() / gamma_list.len().max(1);
    let mut order: Vec<usize> = (0..gamma_list.len()).collect();
    order.sort_by(|&a, &b| gamma_list[a].total_cmp(&gamma_list[b]));
    let tol = options.t2.probability.quad.rel_tol;
    for pair in order.windows(2) {
        for cell in 0..per_gamma {
            let lo = records[pair[0] * per_gamma + cell].t2;
            let hi = &mut records[pair[1] * per_gamma + cell];
            if let (Some(lo), Some(v)) = (lo, hi.t2) {
                if v > lo * (1.0 + tol) + 1e-15 {
                    hi.flag("non_monotone_gamma");
                }
            }
        }
    }

    Ok(SweepResult {
        axes: SweepAxes { h: h_grid.to_vec(), alpha: alphas.clone(), gamma: gamma_list.to_vec(), n: vec![params.n] },
        records,
        metadata: metadata(params, &quantities, options),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::PulseShape;

    fn delta() -> MapOptions {
        MapOptions { t2: T2Options { pulse: PulseShape::Delta, ..Default::default() }, workers: Some(2) }
    }

    #[test]
    fn empty_alpha_set_gives_empty_records() {
        let p = LatticeParams::with_n(4);
        let r = mobility_map(&p, &[0.0, 1.0], &AlphaSpec::List(vec![]), &[Quantity::T2], &delta()).unwrap();
        assert!(r.records.is_empty());
        assert_eq!(r.metadata.params, p);
    }

    #[test]
    fn records_follow_grid_order() {
        let p = LatticeParams { n: 3, ..Default::default() };
        let r = mobility_map(&p, &[0.5, 0.0, 3.0], &AlphaSpec::All, &[Quantity::LogPr, Quantity::T2], &delta()).unwrap();
        let keys: Vec<(f64, usize)> = r.records.iter().map(|c| (c.h, c.alpha)).collect();
        let want: Vec<(f64, usize)> = [0.5, 0.0, 3.0].iter().flat_map(|&h| (1..=6).map(move |a| (h, a))).collect();
        assert_eq!(keys, want);
        for c in &r.records {
            assert!(c.error.is_none() && c.t2.is_some() && c.log_pr.is_some(), "{c:?}");
        }
    }

    #[test]
    fn bad_alpha_is_a_cell_failure() {
        let p = LatticeParams::with_n(3);
        let r = mobility_map(&p, &[1.0], &AlphaSpec::List(vec![2, 9]), &[Quantity::LogPr], &delta()).unwrap();
        assert!(r.records[0].error.is_none());
        assert!(r.records[1].error.as_deref().unwrap().contains("alpha"));
        assert_eq!(r.failures(), 1);
    }

    #[test]
    fn scaling_references_and_selection() {
        let p = LatticeParams { u: 4.0, ..Default::default() };
        let r = scaling_curves(&p, &[3, 4], AlphaSelector::Highest, &[1.0, 3.0], &delta()).unwrap();
        assert_eq!(r.records.iter().map(|c| c.alpha).collect::<Vec<_>>(), vec![6, 6, 10, 10]);
        assert_eq!(r.metadata.sw_transition, Some(0.5));
        assert_eq!(r.metadata.aa_reference, vec![(3.0, 2.0 * 1.5f64.ln())]);
        assert!(scaling_curves(&p, &[4, 3], AlphaSelector::Lowest, &[1.0], &delta()).is_err());
    }

    #[test]
    fn alpha_spec_json_forms() {
        let parse = |s: &str| -> AlphaSpec { serde_json::from_str(s).unwrap() };
        assert_eq!(parse("\"all\""), AlphaSpec::All);
        assert_eq!(parse("\"middle\""), AlphaSpec::Select(AlphaSelector::Middle));
        assert_eq!(parse("[1, 4]"), AlphaSpec::List(vec![1, 4]));
        assert!(serde_json::from_str::<AlphaSpec>("\"most\"").is_err());
        assert_eq!(serde_json::to_string(&AlphaSpec::Select(AlphaSelector::Highest)).unwrap(), "\"highest\"");
    }
}
