//! Subcommand implementations. Each file-based command parses the algebra,
//! dispatches on its coefficient field, and returns an [`Output`].

use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde_json::{json, Value};
use thiserror::Error;
use zerodiv::algebra::AlgebraHandle;
use zerodiv::ezd::{self, EzdVerdict, MinorsOutcome, ScanMode};
use zerodiv::family;
use zerodiv::field::{with_field, FieldVisitor};
use zerodiv::generic::{self, DensityOptions};
use zerodiv::linalg::Matrix;
use zerodiv::module::{self, PresentedModule, SearchOptions};
use zerodiv::parser::{parse_field_spec, parse_presentation, PresentationSource};
use zerodiv::{Element, Error, Field, GradedAlgebra, IdealView};

use crate::{AlgebraCmd, Command, EzdCmd, FamilyCmd, GenericCmd, ModeArg, ModuleCmd, Output, Status};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn status(&self) -> Status {
        match self {
            CliError::Core(e) if e.is_undecided() => Status::Undecided,
            _ => Status::Error,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ if self.status() == Status::Undecided => 2,
            _ => 1,
        }
    }

    /// Stable machine-readable tag for the JSON payload.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Usage(_) => "usage",
            CliError::Core(e) => match e {
                Error::NonPrimeModulus(_) => "non_prime_modulus",
                Error::ReducibleModulus(_) => "reducible_modulus",
                Error::InvalidModulus(_) => "invalid_modulus",
                Error::UnsupportedField(_) => "unsupported_field",
                Error::CoefficientNotInField(_) => "coefficient_not_in_field",
                Error::Parse(_) => "parse",
                Error::NotArtinianWithinCap { .. } => "not_artinian_within_cap",
                Error::AssocCheckFailed(_) => "assoc_check_failed",
                Error::AlgebraMismatch => "algebra_mismatch",
                Error::EntriesNotInAlgebra(_) => "entries_not_in_algebra",
                Error::NotShort => "not_short",
                Error::NotInMaxIdeal => "not_in_max_ideal",
                Error::ZeroElement => "zero_element",
                Error::UnitElement => "unit_element",
                Error::NotLinearForm => "not_linear_form",
                Error::WrongHilbertSeries { .. } => "wrong_hilbert_series",
                Error::PreconditionFailed(_) => "precondition_failed",
                Error::BudgetExceeded { .. } => "budget_exceeded",
                Error::InfiniteField => "infinite_field",
                Error::UndecidedAtBudget(_) => "undecided_at_budget",
                Error::HypothesesFail(_) => "hypotheses_fail",
                Error::SearchExhausted(_) => "search_exhausted",
                Error::Internal(_) => "internal",
            },
        }
    }
}

type CliResult<T> = Result<T, CliError>;

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn run(cmd: &Command, seed: u64) -> CliResult<Output> {
    if let Command::Generic(GenericCmd::Sample { e, field, trials, log }) = cmd {
        let spec = parse_field_spec(field)?;
        return with_field(
            &spec,
            Sample {
                e: *e,
                trials: *trials,
                seed,
                log: *log,
            },
        )?;
    }
    let file = match cmd {
        Command::Algebra(AlgebraCmd::Info { file }) => file,
        Command::Ezd(EzdCmd::Check(a) | EzdCmd::Minors(a) | EzdCmd::Conca(a)) => &a.file,
        Command::Ezd(EzdCmd::Scan { file, .. }) => file,
        Command::Family(
            FamilyCmd::Build { file, .. } | FamilyCmd::Bt2 { file, .. } | FamilyCmd::Findz { file, .. } | FamilyCmd::Finddata { file, .. },
        ) => file,
        Command::Module(ModuleCmd::Info { file, .. } | ModuleCmd::Iso { file, .. } | ModuleCmd::Pushout { file, .. }) => file,
        Command::Generic(_) => unreachable!("handled above"),
    };
    let src = parse_presentation(&read(file)?)?;
    with_field(&src.field.clone(), OnAlgebra { cmd, seed, src })?
}

struct OnAlgebra<'a> {
    cmd: &'a Command,
    seed: u64,
    src: PresentationSource,
}

impl FieldVisitor for OnAlgebra<'_> {
    type Output = CliResult<Output>;

    fn visit<F: Field>(self, field: F) -> CliResult<Output> {
        let alg = GradedAlgebra::build(field, &self.src)?;
        let opts = SearchOptions {
            seed: self.seed,
            ..SearchOptions::default()
        };
        match self.cmd {
            Command::Algebra(AlgebraCmd::Info { .. }) => algebra_info(&alg),
            Command::Ezd(c) => match c {
                EzdCmd::Check(a) => ezd_check(&alg.parse_element(&a.elem)?),
                EzdCmd::Scan { mode, budget, .. } => ezd_scan(&alg, *mode, *budget),
                EzdCmd::Minors(a) => ezd_minors(&alg.parse_element(&a.elem)?),
                EzdCmd::Conca(a) => ezd_conca(&alg.parse_element(&a.elem)?),
            },
            Command::Family(c) => family_cmd(&alg, c, &opts),
            Command::Module(c) => module_cmd(&alg, c, &opts),
            Command::Generic(_) => unreachable!("handled before parsing a file"),
        }
    }
}

fn render_all<F: Field>(xs: &[Element<F>]) -> Vec<String> {
    xs.iter().map(Element::render).collect()
}

fn render_ideal<F: Field>(ideal: &IdealView<F>) -> Vec<String> {
    render_all(&ideal.basis())
}

fn render_matrix<F: Field>(m: &Matrix<Element<F>>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).render()).collect()).collect()
}

fn render_scalars<F: Field>(f: &F, v: &[F::Elem]) -> Vec<String> {
    v.iter().map(|c| f.render(c)).collect()
}

fn render_scalar_matrix<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| render_scalars(f, m.row(i))).collect()
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn algebra_info<F: Field>(alg: &Arc<GradedAlgebra<F>>) -> CliResult<Output> {
    let hilbert = alg.hilbert();
    let socle = alg.socle().dim();
    let payload = json!({
        "field": alg.field().spec().to_string(),
        "variables": alg.variables(),
        "hilbert": hilbert,
        "e": alg.e(),
        "length": alg.dim(),
        "top_degree": alg.top_degree(),
        "socle_dim": socle,
        "gorenstein": alg.is_gorenstein(),
        "short": alg.is_short(),
    });
    let text = format!(
        "field: {}\nHilbert series: {:?}\nembedding dimension: {}\nlength: {}\nsocle dimension: {}\nGorenstein: {}\nshort: {}",
        alg.field().spec(),
        hilbert,
        alg.e(),
        alg.dim(),
        socle,
        yes_no(alg.is_gorenstein()),
        yes_no(alg.is_short())
    );
    Ok(Output::ok(payload, text))
}

fn ezd_check<F: Field>(x: &Element<F>) -> CliResult<Output> {
    Ok(match ezd::is_exact_zero_divisor(x)? {
        EzdVerdict::Exact(cert) => {
            let payload = json!({
                "element": x.render(),
                "exact": true,
                "partner": cert.w.render(),
                "ann_x": render_ideal(&cert.ann_x),
                "ann_partner": render_ideal(&cert.ann_w),
                "length_x": cert.length_x,
                "length_partner": cert.length_w,
                "sequence_exact": cert.sequence_exact,
            });
            let text = format!(
                "{} is an exact zero divisor\npartner: {}\nann: ({})\nlengths: {} + {}",
                x.render(),
                cert.w.render(),
                render_ideal(&cert.ann_x).join(", "),
                cert.length_x,
                cert.length_w
            );
            Output::ok(payload, text)
        }
        EzdVerdict::NotExact(reason) => {
            let payload = json!({ "element": x.render(), "exact": false, "reason": reason });
            let text = format!("{} is not an exact zero divisor ({reason:?})", x.render());
            Output::ok(payload, text)
        }
    })
}

fn ezd_scan<F: Field>(alg: &Arc<GradedAlgebra<F>>, mode: ModeArg, budget: u64) -> CliResult<Output> {
    let mode = match mode {
        ModeArg::All => ScanMode::AllOfM,
        ModeArg::Proj => ScanMode::ProjectiveLines,
    };
    let r = ezd::scan_ezd(alg, mode, budget)?;
    let witnesses: Vec<Value> = r
        .witnesses
        .iter()
        .map(|(x, w)| json!({ "element": x.render(), "partner": w.render() }))
        .collect();
    let payload = json!({
        "mode": r.mode,
        "examined": r.examined,
        "outside_m2": r.outside_m2,
        "ezd_count": r.ezd_count,
        "ezd_outside_m2": r.ezd_outside_m2,
        "conca_count": r.conca_count,
        "witnesses": witnesses,
    });
    let mut text = format!(
        "examined: {}\noutside m^2: {}\nexact zero divisors: {}\n  outside m^2: {}\nConca generators: {}",
        r.examined, r.outside_m2, r.ezd_count, r.ezd_outside_m2, r.conca_count
    );
    for (x, w) in &r.witnesses {
        text.push_str(&format!("\n  {} (partner {})", x.render(), w.render()));
    }
    Ok(Output::ok(payload, text))
}

fn ezd_minors<F: Field>(x: &Element<F>) -> CliResult<Output> {
    let f = x.algebra().field();
    Ok(match ezd::partner_via_minors(x)? {
        MinorsOutcome::Pair { w, minors_x, minors_w } => {
            let payload = json!({
                "element": x.render(),
                "outcome": "pair",
                "partner": w.render(),
                "minors_x": render_scalars(f, &minors_x),
                "minors_partner": render_scalars(f, &minors_w),
            });
            let text = format!("partner of {}: {}", x.render(), w.render());
            Output::ok(payload, text)
        }
        MinorsOutcome::Degenerate { minors_x, minors_w } => {
            let payload = json!({
                "element": x.render(),
                "outcome": "degenerate",
                "partner": Value::Null,
                "minors_x": render_scalars(f, &minors_x),
                "minors_partner": render_scalars(f, &minors_w),
            });
            let text = format!("minors of {} are degenerate; no partner", x.render());
            Output::ok(payload, text)
        }
    })
}

fn ezd_conca<F: Field>(x: &Element<F>) -> CliResult<Output> {
    let conca = ezd::is_conca_generator(x)?;
    let payload = json!({
        "element": x.render(),
        "conca": conca,
        "ann": render_ideal(&x.annihilator()),
    });
    let text = format!("{} {} its own annihilator", x.render(), if conca { "generates" } else { "does not generate" });
    Ok(Output::ok(payload, text))
}

fn parse_range(text: &str) -> CliResult<RangeInclusive<usize>> {
    let bad = || CliError::Usage(format!("--n expects `N` or `A..B`, got `{text}`"));
    let num = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    let (a, b) = match text.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => {
            let n = num(text)?;
            (n, n)
        }
    };
    if a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

fn family_text(report: &family::FamilyReport) -> String {
    let mut text = format!("hypotheses hold (case {})\n", report.case);
    for m in &report.members {
        text.push_str(&format!(
            "{}: length {}, generators {}, betti {:?}, indecomposable {}, totally acyclic {}\n",
            m.label,
            m.length,
            m.min_generators,
            m.betti,
            yes_no(m.indecomposable),
            yes_no(m.totally_acyclic)
        ));
    }
    if let Some(iso) = &report.isomorphisms {
        let distinct = iso.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, &v)| v == (i == j)));
        text.push_str(&format!("pairwise non-isomorphic: {}\n", yes_no(distinct)));
    }
    text.pop();
    text
}

fn family_cmd<F: Field>(alg: &Arc<GradedAlgebra<F>>, cmd: &FamilyCmd, opts: &SearchOptions) -> CliResult<Output> {
    let el = |s: &str| alg.parse_element(s).map_err(CliError::from);
    match cmd {
        FamilyCmd::Build { w, x, y, z, n, .. } => {
            let ns = parse_range(n)?;
            let report = family::build_family(&el(w)?, &el(x)?, &el(y)?, &el(z)?, ns, opts)?;
            let text = family_text(&report);
            Ok(Output::ok(serde_json::to_value(&report).expect("serializable"), text))
        }
        FamilyCmd::Bt2 { n, w, x, y, yprime, z, lambdas, .. } => {
            let f = alg.field();
            let lambdas: Vec<Element<F>> = if lambdas.trim() == "all" {
                let q = f.size().ok_or(Error::InfiniteField)?;
                (0..q).map(|i| alg.one().scale(&f.element(i))).collect()
            } else {
                lambdas.split(',').map(|s| el(s.trim())).collect::<CliResult<_>>()?
            };
            let report = family::bt2_family(*n, &el(w)?, &el(x)?, &el(y)?, &el(yprime)?, &el(z)?, &lambdas, opts)?;
            let text = family_text(&report);
            Ok(Output::ok(serde_json::to_value(&report).expect("serializable"), text))
        }
        FamilyCmd::Findz { w, x, y, .. } => {
            let z = family::find_z_for_y(&el(w)?, &el(x)?, &el(y)?)?;
            let rendered = z.as_ref().map(Element::render);
            let text = match &rendered {
                Some(z) => format!("z = {z}"),
                None => "no suitable z".into(),
            };
            Ok(Output::ok(json!({ "z": rendered }), text))
        }
        FamilyCmd::Finddata { w, x, .. } => {
            let (y, yp, z) = family::find_bt2_data(&el(w)?, &el(x)?)?;
            let payload = json!({ "y": y.render(), "yprime": yp.render(), "z": z.render() });
            let text = format!("y = {}\ny' = {}\nz = {}", y.render(), yp.render(), z.render());
            Ok(Output::ok(payload, text))
        }
    }
}

fn load_module<F: Field>(alg: &Arc<GradedAlgebra<F>>, path: &Path) -> CliResult<PresentedModule<F>> {
    let matrix = alg.parse_matrix(&read(path)?)?;
    Ok(PresentedModule::new(alg, &matrix)?)
}

fn module_cmd<F: Field>(alg: &Arc<GradedAlgebra<F>>, cmd: &ModuleCmd, opts: &SearchOptions) -> CliResult<Output> {
    let f = alg.field();
    match cmd {
        ModuleCmd::Info { matrix, betti, indec, tr, .. } => {
            let m = load_module(alg, matrix)?;
            let mut payload = json!({
                "length": m.length(),
                "min_generators": m.min_generators(),
                "min_relations": m.min_relations(),
                "presentation": render_matrix(m.presentation()),
                "free_summand": m.has_free_summand(),
            });
            let mut text = format!(
                "length: {}\ngenerators: {}\nrelations: {}\nfree summand: {}",
                m.length(),
                m.min_generators(),
                m.min_relations(),
                yes_no(m.has_free_summand())
            );
            if let Some(n) = betti {
                let b = m.betti(*n)?;
                text.push_str(&format!("\nbetti: {b:?}"));
                payload["betti"] = json!(b);
            }
            if *indec {
                let v = m.is_indecomposable(opts)?;
                text.push_str(&format!("\nindecomposable: {}", yes_no(v.indecomposable)));
                payload["indecomposable"] = json!({
                    "indecomposable": v.indecomposable,
                    "end_dim": v.end_dim,
                    "reduced_dim": v.reduced_dim,
                    "radical_dim": v.radical_dim,
                    "composition_factors": v.composition_factors,
                    "residue_commutative": v.residue_commutative,
                    "witness": v.witness.as_ref().map(|w| render_scalar_matrix(f, w)),
                });
            }
            if let Some(bound) = tr {
                let r = module::verify_totally_reflexive_bounded(&m, *bound, opts)?;
                text.push_str(&format!("\ntotal reflexivity: {:?}", r.verdict));
                payload["reflexivity"] = serde_json::to_value(&r).expect("serializable");
            }
            Ok(Output::ok(payload, text))
        }
        ModuleCmd::Iso { matrix, matrix2, .. } => {
            let a = load_module(alg, matrix)?;
            let b = load_module(alg, matrix2)?;
            let v = a.is_isomorphic(&b, opts)?;
            let payload = json!({
                "isomorphic": v.isomorphic,
                "method": v.method,
                "witness": v.witness.as_ref().map(|w| render_scalar_matrix(f, w)),
            });
            let text = format!("isomorphic: {} (by {:?})", yes_no(v.isomorphic), v.method);
            Ok(Output::ok(payload, text))
        }
        ModuleCmd::Pushout { matrix, elem, power, .. } => {
            let n = load_module(alg, matrix)?;
            let x = alg.parse_element(elem)?;
            let p = n.pushout_extension(&x, *power)?;
            let split = n.direct_sum(&n.syzygy()?.0)?;
            let splits = p.is_isomorphic(&split, opts)?.isomorphic;
            let payload = json!({
                "length": p.length(),
                "min_generators": p.min_generators(),
                "min_relations": p.min_relations(),
                "presentation": render_matrix(p.presentation()),
                "splits": splits,
            });
            let text = format!(
                "length: {}\ngenerators: {}\nrelations: {}\nsplits as N + syzygy: {}",
                p.length(),
                p.min_generators(),
                p.min_relations(),
                yes_no(splits)
            );
            Ok(Output::ok(payload, text))
        }
    }
}

struct Sample {
    e: usize,
    trials: u64,
    seed: u64,
    log: bool,
}

impl FieldVisitor for Sample {
    type Output = CliResult<Output>;

    fn visit<F: Field>(self, field: F) -> CliResult<Output> {
        let opts = DensityOptions {
            keep_log: self.log,
            ..DensityOptions::default()
        };
        let r = generic::density_report(self.e, &field, self.trials, self.seed, &opts)?;
        let text = format!(
            "e = {} over {}, {} trials (seed {})\nHilbert series [1, e, e-1]: {}\nwith an exact zero divisor: {}\nwith a Conca generator: {}\nundecided: {}",
            r.e, r.field, r.trials, r.seed, r.hilbert_ok, r.ezd_ok, r.conca_ok, r.undecided
        );
        let mut out = Output::ok(serde_json::to_value(&r).expect("serializable"), text);
        if r.undecided > 0 {
            out.diagnostics.push(format!("{} trials were undecided within the scan budget", r.undecided));
        }
        Ok(out)
    }
}
