//! Configuration ingestion, command dispatch, and verification reports.
//!
//! The interface is batch: a JSON config names one or two domain specs and a
//! command; the run produces a report with one verdict per check. JSON output
//! is byte-stable for a fixed config (timing only appears in text output),
//! and randomized audits draw from a fixed seed recorded in the config.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use exoring::chains::{self, ChainError};
use exoring::derivations;
use exoring::domains::{Domain, DomainSpec};
use exoring::grading::{self, WeightFunction};
use exoring::laurent::{LaurentPoly, LAURENT_VARS};
use exoring::parse::parse_multipoly;
use exoring::poly::{coeff_int, MultiPoly};
use exoring::rng::XorShift64;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

fn config_err<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Config(msg.into()))
}

// ---- configuration ------------------------------------------------------

#[derive(Clone, Debug, Deserialize)]
pub struct RunConfig {
    #[serde(default)]
    pub command: Option<String>,
    #[serde(default)]
    pub specs: Vec<SpecConfig>,
    #[serde(default)]
    pub bounds: BoundsConfig,
    /// Optional weight override for `grading`, as variable → integer on the
    /// presentation ring (X, Y, Z, S, T); the default weights come from the
    /// spec parameters.
    #[serde(default)]
    pub weights: Option<BTreeMap<String, i64>>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SpecConfig {
    Newclass {
        n: u32,
        e: u32,
        m: u32,
        d: u32,
        r: u32,
        #[serde(rename = "Q")]
        q: String,
    },
    Russell {
        n: u32,
        #[serde(rename = "F")]
        f: String,
    },
}

#[derive(Clone, Debug, Default, Deserialize)]
pub struct BoundsConfig {
    pub degree: Option<u32>,
    pub cap: Option<u32>,
    pub x_lo: Option<i64>,
    pub x_hi: Option<i64>,
    pub st_degree: Option<u32>,
}

impl SpecConfig {
    pub fn to_spec(&self) -> Result<DomainSpec, CliError> {
        match self {
            SpecConfig::Newclass { n, e, m, d, r, q } => {
                let q = parse_multipoly(q, &LAURENT_VARS)
                    .map_err(|err| CliError::Config(format!("Q: {err}")))?;
                Ok(DomainSpec::NewClass {
                    n: *n,
                    e: *e,
                    m: *m,
                    d: *d,
                    r: *r,
                    q,
                })
            }
            SpecConfig::Russell { n, f } => {
                let f = parse_multipoly(f, &LAURENT_VARS)
                    .map_err(|err| CliError::Config(format!("F: {err}")))?;
                Ok(DomainSpec::Russell { n: *n, f })
            }
        }
    }
}

/// Effective bounds after defaults: degree 2(nm+e)·max(d,r), cap 50, oracle
/// box x ∈ [−2(nm+e), 2] with s,t-degree 2·m·max(d,r) (Russell analogues use
/// the degree of F in place of max(d,r)).
#[derive(Clone, Copy, Debug)]
pub struct Bounds {
    pub degree: u32,
    pub cap: u32,
    pub x_lo: i64,
    pub x_hi: i64,
    pub st_degree: u32,
}

pub fn effective_bounds(spec: &DomainSpec, cfg: &BoundsConfig) -> Bounds {
    let (steps, width) = match spec {
        DomainSpec::NewClass { n, e, m, d, r, .. } => (n * m + e, (*d.max(r)).max(*m)),
        DomainSpec::Russell { n, f } => (*n, f.total_degree().unwrap_or(2).max(2)),
    };
    Bounds {
        degree: cfg.degree.unwrap_or(2 * steps * width),
        cap: cfg.cap.unwrap_or(50),
        x_lo: cfg.x_lo.unwrap_or(-(2 * steps as i64)),
        x_hi: cfg.x_hi.unwrap_or(2),
        st_degree: cfg.st_degree.unwrap_or(2 * steps * width),
    }
}

// ---- report --------------------------------------------------------------

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    /// Stable label of the mathematical fact the check exercises.
    pub provenance: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub tool_version: String,
    pub specs: Vec<String>,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub all_passed: bool,
    /// Wall time; kept out of the JSON encoding so reports stay byte-stable.
    #[serde(skip, default)]
    pub elapsed: Duration,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "exoring {} — {}", self.tool_version, self.command);
        for spec in &self.specs {
            let _ = writeln!(out, "spec: {spec}");
        }
        let _ = writeln!(out, "seed: {}", self.seed);
        for check in &self.checks {
            let status = if check.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(
                out,
                "[{status}] {} ({}) — {}",
                check.name, check.provenance, check.detail
            );
            if let Some(w) = &check.witness {
                let _ = writeln!(out, "       witness: {w}");
            }
        }
        let _ = writeln!(
            out,
            "{} of {} checks passed in {:.3}s",
            self.checks.iter().filter(|c| c.passed).count(),
            self.checks.len(),
            self.elapsed.as_secs_f64()
        );
        out
    }
}

struct ReportBuilder {
    checks: Vec<Check>,
}

impl ReportBuilder {
    fn new() -> Self {
        Self { checks: Vec::new() }
    }

    fn check(&mut self, name: &str, provenance: &str, passed: bool, detail: String) {
        self.checks.push(Check {
            name: name.to_string(),
            provenance: provenance.to_string(),
            passed,
            detail,
            witness: None,
        });
    }

    fn check_witness(
        &mut self,
        name: &str,
        provenance: &str,
        passed: bool,
        detail: String,
        witness: Option<String>,
    ) {
        self.checks.push(Check {
            name: name.to_string(),
            provenance: provenance.to_string(),
            passed,
            detail,
            witness: if passed { None } else { witness },
        });
    }
}

// ---- dispatch --------------------------------------------------------------

pub const COMMANDS: [&str; 8] = [
    "verify-domain",
    "verify-lnd",
    "grading",
    "contraction",
    "chain",
    "fingerprint",
    "compare",
    "oracle-audit",
];

/// Run a command against a parsed config. Config-level problems surface as
/// `CliError`; mathematical check failures live inside the report.
pub fn run(command: &str, config: &RunConfig, seed_override: Option<u64>) -> Result<Report, CliError> {
    let started = Instant::now();
    if !COMMANDS.contains(&command) {
        return config_err(format!(
            "unknown command `{command}`; expected one of {}",
            COMMANDS.join(", ")
        ));
    }
    if let Some(declared) = &config.command {
        if declared != command {
            return config_err(format!(
                "config declares command `{declared}` but `{command}` was requested"
            ));
        }
    }
    let expected_specs = if command == "compare" { 2 } else { 1 };
    if config.specs.len() != expected_specs {
        return config_err(format!(
            "command `{command}` needs {expected_specs} spec(s), config has {}",
            config.specs.len()
        ));
    }
    let seed = seed_override.or(config.seed).unwrap_or(0);
    let specs: Vec<DomainSpec> = config
        .specs
        .iter()
        .map(|s| s.to_spec())
        .collect::<Result<_, _>>()?;
    for spec in &specs {
        spec.validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }

    let mut builder = ReportBuilder::new();
    match command {
        "verify-domain" => cmd_verify_domain(&specs[0], &mut builder)?,
        "verify-lnd" => cmd_verify_lnd(&specs[0], &config.bounds, &mut builder)?,
        "grading" => cmd_grading(&specs[0], config.weights.as_ref(), &mut builder)?,
        "contraction" => cmd_contraction(&specs[0], &config.bounds, &mut builder)?,
        "chain" => cmd_chain(&specs[0], &mut builder)?,
        "fingerprint" => cmd_fingerprint(&specs[0], &mut builder)?,
        "compare" => cmd_compare(&specs[0], &specs[1], &mut builder)?,
        "oracle-audit" => cmd_oracle_audit(&specs[0], &config.bounds, seed, &mut builder)?,
        _ => unreachable!(),
    }

    let all_passed = builder.checks.iter().all(|c| c.passed);
    Ok(Report {
        command: command.to_string(),
        tool_version: TOOL_VERSION.to_string(),
        specs: specs.iter().map(|s| s.to_string()).collect(),
        seed,
        checks: builder.checks,
        all_passed,
        elapsed: started.elapsed(),
    })
}

fn build(spec: &DomainSpec) -> Result<(Domain, exoring::domains::RelationCertificate), CliError> {
    Domain::build(spec.clone()).map_err(|e| CliError::Config(e.to_string()))
}

fn cmd_verify_domain(spec: &DomainSpec, b: &mut ReportBuilder) -> Result<(), CliError> {
    let (domain, cert) = build(spec)?;
    b.check_witness(
        "defining-relation",
        "defining-relation-identity",
        cert.relation_residual.is_zero(),
        "x^n·y − (y^m − x^e·z)^d − t^r − x·Q(x, y^m − x^e·z, t) = 0".into(),
        Some(cert.relation_residual.to_string()),
    );
    if spec.is_newclass() {
        b.check_witness(
            "s-coordinate-identity",
            "coordinate-identity-s",
            cert.s_residual.is_zero(),
            "y^m − x^e·z = s".into(),
            Some(cert.s_residual.to_string()),
        );
    }
    b.check(
        "generator-bottom-slices",
        "generator-bottom-slices",
        cert.slices_match,
        format!(
            "bottom slice of y is P0 = {} at order −{}; z carries P0^m",
            domain.p0(),
            spec.n_e().0
        ),
    );
    Ok(())
}

fn cmd_verify_lnd(
    spec: &DomainSpec,
    bounds: &BoundsConfig,
    b: &mut ReportBuilder,
) -> Result<(), CliError> {
    if !spec.is_newclass() {
        return config_err("verify-lnd needs an extended-class (newclass) spec");
    }
    let (domain, _) = build(spec)?;
    let bounds = effective_bounds(spec, bounds);
    let (d1, d2) = derivations::standard_derivations(&domain)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let closed = derivations::standard_closed_forms(&domain)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let closed_ok = d1.apply(domain.y()) == closed.d1_y
        && d1.apply(domain.z().unwrap()) == closed.d1_z
        && d2.apply(domain.y()) == closed.d2_y
        && d2.apply(domain.z().unwrap()) == closed.d2_z;
    b.check(
        "closed-form-images",
        "lnd-closed-forms",
        closed_ok,
        "Laurent differentiation reproduces the closed forms for D1, D2 on y and z".into(),
    );

    for (name, d) in [("D1", &d1), ("D2", &d2)] {
        match derivations::derivation_degree(&domain, d) {
            Ok(report) => {
                b.check(
                    &format!("{name}-images-in-domain"),
                    "lnd-images-in-domain",
                    true,
                    "all generator images are members".into(),
                );
                b.check(
                    &format!("{name}-degree-bound"),
                    "lnd-degree-bound",
                    report.satisfies_lnd_bound(),
                    format!(
                        "generator degree bound {} ≤ {} (certified upper bound)",
                        report.upper_bound, report.lnd_bound
                    ),
                );
            }
            Err(e) => {
                b.check(
                    &format!("{name}-images-in-domain"),
                    "lnd-images-in-domain",
                    false,
                    e.to_string(),
                );
            }
        }
        let mut nil_ok = true;
        let mut details = Vec::new();
        let mut gens: Vec<(&str, LaurentPoly)> = vec![
            ("x", LaurentPoly::var_x()),
            ("s", LaurentPoly::var_s()),
            ("t", LaurentPoly::var_t()),
            ("y", domain.y().clone()),
        ];
        if let Some(z) = domain.z() {
            gens.push(("z", z.clone()));
        }
        for (gname, g) in gens {
            match d.nilpotency_index(&g, bounds.cap) {
                Ok(k) => details.push(format!("{gname}:{k}")),
                Err(_) => {
                    nil_ok = false;
                    details.push(format!("{gname}:>cap {}", bounds.cap));
                }
            }
        }
        b.check(
            &format!("{name}-nilpotency"),
            "lnd-nilpotency",
            nil_ok,
            format!("iteration vanishing indices: {}", details.join(", ")),
        );
        let restriction = derivations::verify_restriction_ideals(&domain, d);
        b.check_witness(
            &format!("{name}-restriction-ideals"),
            "lnd-restriction-ideals",
            restriction.all_hold(),
            "images of x,s,t in x^(n+e)·k[x,s,t]; image of y in x^e·B; image of z in B".into(),
            Some(restriction.failures.join("; ")),
        );
        match derivations::structure_check(&domain, d) {
            Ok(delta) => b.check(
                &format!("{name}-structure"),
                "lnd-structure-factorization",
                true,
                format!(
                    "D = x^(n+e)·δ with δ(s) = {}, δ(t) = {}",
                    delta.delta_s, delta.delta_t
                ),
            ),
            Err(e) => b.check(
                &format!("{name}-structure"),
                "lnd-structure-factorization",
                false,
                e.to_string(),
            ),
        }
    }
    Ok(())
}

/// Presentation relations over (X, Y, Z, S, T) and the matching weights.
fn presentation_data(spec: &DomainSpec) -> (Vec<MultiPoly>, WeightFunction, Vec<MultiPoly>) {
    const PRES: [&str; 5] = ["X", "Y", "Z", "S", "T"];
    let lift = |p: &MultiPoly| -> MultiPoly {
        // (x, s, t) → (X, S, T)
        MultiPoly::from_terms(
            &PRES,
            p.terms()
                .iter()
                .map(|(e, c)| (vec![e[0], 0, 0, e[1], e[2]], c.clone())),
        )
    };
    let var = |name: &str| MultiPoly::var(&PRES, name).unwrap();
    match spec {
        DomainSpec::NewClass { n, e, m, d, r, q } => {
            let rel1 = &(&(&var("X").pow(*n) * &var("Y")) - &var("S").pow(*d))
                - &(&var("T").pow(*r) + &(&var("X") * &lift(q)));
            let rel2 = &(&var("Y").pow(*m) - &(&var("X").pow(*e) * &var("Z"))) - &var("S");
            let w = WeightFunction::new([
                ("X", -1),
                ("Y", *n as i64),
                ("Z", (n * m + e) as i64),
                ("S", 0),
                ("T", 0),
            ]);
            let top1 = &(&var("X").pow(*n) * &var("Y")) - &(&var("S").pow(*d) + &var("T").pow(*r));
            let top2 = &var("Y").pow(*m) - &(&var("X").pow(*e) * &var("Z"));
            (vec![rel1, rel2], w, vec![top1, top2])
        }
        DomainSpec::Russell { n, f } => {
            let rel = &(&var("X").pow(*n) * &var("Y")) - &lift(f);
            let p0 = f.set_var_zero("x").unwrap();
            let top = &(&var("X").pow(*n) * &var("Y")) - &lift(&p0);
            let w = WeightFunction::new([
                ("X", -1),
                ("Y", *n as i64),
                ("Z", 0),
                ("S", 0),
                ("T", 0),
            ]);
            (vec![rel], w, vec![top])
        }
    }
}

fn cmd_grading(
    spec: &DomainSpec,
    weight_override: Option<&BTreeMap<String, i64>>,
    b: &mut ReportBuilder,
) -> Result<(), CliError> {
    let (domain, _) = build(spec)?;
    let (n, _) = spec.n_e();
    let steps = domain.total_steps();

    let mut values = vec![
        ("x", grading::omega_b(&LaurentPoly::var_x()), -1),
        ("s", grading::omega_b(&LaurentPoly::var_s()), 0),
        ("t", grading::omega_b(&LaurentPoly::var_t()), 0),
        ("y", grading::omega_b(domain.y()), n as i64),
    ];
    if let Some(z) = domain.z() {
        values.push(("z", grading::omega_b(z), steps as i64));
    }
    let all_ok = values.iter().all(|(_, got, want)| *got == Some(*want));
    let expected: Vec<String> = values.iter().map(|(_, _, want)| want.to_string()).collect();
    let names: Vec<&str> = values.iter().map(|(name, _, _)| *name).collect();
    b.check(
        "weight-values",
        "weight-values-on-generators",
        all_ok,
        format!("ω({}) = ({})", names.join(","), expected.join(", ")),
    );

    let (relations, derived_w, expected_tops) = presentation_data(spec);
    let w = match weight_override {
        Some(map) => WeightFunction::new(map.iter().map(|(k, v)| (k.clone(), *v))),
        None => derived_w,
    };
    if weight_override.is_none() {
        // the expected graded relations are only meaningful for the derived weights
        let mut tops_ok = true;
        for (rel, expected) in relations.iter().zip(&expected_tops) {
            let (top, _) = grading::top_component(rel, &w)
                .map_err(|e| CliError::Config(e.to_string()))?;
            if top != *expected {
                tops_ok = false;
            }
        }
        b.check(
            "top-components",
            "top-components-of-relations",
            tops_ok,
            "highest homogeneous parts of the presentation relations match the graded relations"
                .into(),
        );
    } else {
        for (idx, rel) in relations.iter().enumerate() {
            let (top, _) = grading::top_component(rel, &w)
                .map_err(|e| CliError::Config(e.to_string()))?;
            b.check(
                &format!("top-component-{}", idx + 1),
                "top-components-of-relations",
                true,
                format!("highest homogeneous part under the supplied weights: {top}"),
            );
        }
    }
    if relations.len() == 2 {
        let pair = grading::check_top_ideal_pair(&relations[0], &relations[1], &w)
            .map_err(|e| CliError::Config(e.to_string()))?;
        b.check(
            "top-ideal-pair",
            "top-ideal-gcd-criterion",
            pair.certified,
            format!("gcd of top components = {}", pair.gcd),
        );
    }

    let mut pieces_ok = true;
    let mut failures = Vec::new();
    for alpha in -3..=(steps as i64) {
        let idx = domain.piece(alpha).expect("piece exists at every weight");
        let generator = domain.piece_generator(&idx);
        let omega = grading::omega_b(&generator);
        let member = domain.filtration_test(&generator, alpha);
        if omega != Some(alpha) || !member {
            pieces_ok = false;
            failures.push(format!("α={alpha}: generator {generator}"));
        }
    }
    b.check_witness(
        "graded-pieces",
        "graded-piece-generators",
        pieces_ok,
        format!(
            "piece generators x^l·y^j·z^i for α ∈ [−3, {steps}] are members of weight exactly α"
        ),
        Some(failures.join("; ")),
    );
    Ok(())
}

fn cmd_contraction(
    spec: &DomainSpec,
    bounds: &BoundsConfig,
    b: &mut ReportBuilder,
) -> Result<(), CliError> {
    let (domain, _) = build(spec)?;
    let bounds = effective_bounds(spec, bounds);
    for step in 1..=domain.total_steps() {
        match chains::verify_contraction_step(&domain, step, bounds.degree) {
            Ok(rep) => {
                let mut detail = format!(
                    "generators {{{}}}; slice ranks {} = {} at degree ≤ {}",
                    rep.generators
                        .iter()
                        .map(|g| g.to_string())
                        .collect::<Vec<_>>()
                        .join(", "),
                    rep.member_rank,
                    rep.ideal_rank,
                    rep.degree_bound
                );
                if rep.middle_step_reading {
                    detail.push_str("; step index read as n·m0+n0");
                }
                b.check_witness(
                    &format!("step-{step}"),
                    "contraction-ideal-closed-form",
                    rep.verified,
                    detail,
                    rep.witness.map(|w| w.to_string()),
                );
            }
            Err(e) => {
                b.check(
                    &format!("step-{step}"),
                    "contraction-ideal-closed-form",
                    false,
                    e.to_string(),
                );
            }
        }
    }
    Ok(())
}

fn cmd_chain(spec: &DomainSpec, b: &mut ReportBuilder) -> Result<(), CliError> {
    let (domain, _) = build(spec)?;
    match chains::exponential_chain(&domain) {
        Ok(chain) => {
            for member in &chain.members {
                b.check(
                    &format!("member-{}", member.step),
                    "exponential-chain-identification",
                    true,
                    format!("identified as {}", member.id),
                );
            }
            let inclusions: Vec<String> = chain
                .distinct_flags
                .iter()
                .map(|&strict| if strict { "⊊".into() } else { "=".to_string() })
                .collect();
            b.check(
                "inclusion-pattern",
                "exponential-chain-identification",
                true,
                inclusions.join(" "),
            );
        }
        Err(e) => {
            b.check(
                "chain",
                "exponential-chain-identification",
                false,
                e.to_string(),
            );
        }
    }
    Ok(())
}

fn cmd_fingerprint(spec: &DomainSpec, b: &mut ReportBuilder) -> Result<(), CliError> {
    let (domain, _) = build(spec)?;
    match chains::fingerprint(&domain) {
        Ok(fp) => {
            let collapse_steps: Vec<String> = fp
                .collapse_pattern
                .iter()
                .enumerate()
                .filter_map(|(idx, &c)| c.then(|| format!("{}={}", idx, idx + 1)))
                .collect();
            b.check(
                "fingerprint",
                "chain-collapse-fingerprint",
                true,
                format!(
                    "total steps {}, distinct members {}, collapses [{}]",
                    fp.total_steps,
                    fp.distinct_members,
                    collapse_steps.join(", ")
                ),
            );
            let (n, e) = spec.n_e();
            let predicted = n + e + 1;
            b.check(
                "distinct-member-count",
                "distinct-member-count",
                fp.distinct_members == predicted,
                format!("{} distinct members; parameters predict {predicted}", fp.distinct_members),
            );
        }
        Err(e) => {
            b.check(
                "fingerprint",
                "chain-collapse-fingerprint",
                false,
                e.to_string(),
            );
        }
    }
    Ok(())
}

fn cmd_compare(
    spec_a: &DomainSpec,
    spec_b: &DomainSpec,
    b: &mut ReportBuilder,
) -> Result<(), CliError> {
    let (dom_a, _) = build(spec_a)?;
    let (dom_b, _) = build(spec_b)?;
    let report = match chains::compare(&dom_a, &dom_b) {
        Ok(rep) => rep,
        Err(ChainError::IncompatibleParameters(msg)) => return config_err(msg),
        Err(e) => {
            b.check("comparison", "comparison-verdict", false, e.to_string());
            return Ok(());
        }
    };
    let mut condition = |name: &str, provenance: &str, c: &chains::ConditionOutcome| {
        let status = if !c.applicable {
            "not applicable"
        } else if c.passed {
            "holds"
        } else {
            "fails"
        };
        b.check(name, provenance, true, format!("{status}; {}", c.detail));
    };
    condition("sum-condition", "iso-necessary-sum", &report.sum_condition);
    condition("pair-condition", "iso-necessary-pair", &report.pair_condition);
    condition(
        "russell-condition",
        "iso-necessary-russell-comparison",
        &report.russell_condition,
    );
    condition(
        "fingerprint-condition",
        "fingerprint-equality",
        &report.fingerprint_condition,
    );
    b.check(
        "verdict",
        "comparison-verdict",
        true,
        report.verdict.to_string(),
    );
    Ok(())
}

fn cmd_oracle_audit(
    spec: &DomainSpec,
    bounds: &BoundsConfig,
    seed: u64,
    b: &mut ReportBuilder,
) -> Result<(), CliError> {
    let (domain, _) = build(spec)?;
    let bounds = effective_bounds(spec, bounds);
    let oracle = match domain.span_oracle(bounds.x_lo, bounds.x_hi, bounds.st_degree) {
        Ok(o) => o,
        Err(e) => {
            b.check("oracle-build", "span-oracle-agreement", false, e.to_string());
            return Ok(());
        }
    };
    let mut basis_ok = true;
    let mut witness = None;
    for p in oracle.basis_polys() {
        if !domain.membership(&p).is_member() {
            basis_ok = false;
            witness = Some(p.to_string());
            break;
        }
    }
    b.check_witness(
        "basis-members",
        "span-oracle-agreement",
        basis_ok,
        format!("all {} basis vectors are members", oracle.rank()),
        witness,
    );

    let mut rng = XorShift64::new(seed);
    let mut agree = 0u32;
    let mut total = 0u32;
    let mut witness = None;
    for trial in 0..100 {
        let p = if trial % 2 == 0 {
            random_combination(&mut rng, oracle.products())
        } else {
            random_box_poly(&mut rng, bounds)
        };
        if p.is_zero() {
            continue;
        }
        total += 1;
        let by_oracle = oracle.contains(&p).expect("sampled inside the box");
        let by_membership = domain.membership(&p).is_member();
        if by_oracle == by_membership {
            agree += 1;
        } else if witness.is_none() {
            witness = Some(format!("oracle={by_oracle} membership={by_membership}: {p}"));
        }
    }
    b.check_witness(
        "random-agreement",
        "span-oracle-agreement",
        agree == total,
        format!("membership and span oracle agree on {agree}/{total} seeded samples"),
        witness,
    );
    Ok(())
}

fn random_combination(rng: &mut XorShift64, products: &[LaurentPoly]) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    if products.is_empty() {
        return p;
    }
    for _ in 0..=rng.below(3) {
        let pick = rng.below(products.len() as u64) as usize;
        p = p.add(&products[pick].scale(&coeff_int(rng.nonzero_int(4))));
    }
    p
}

fn random_box_poly(rng: &mut XorShift64, bounds: Bounds) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for _ in 0..=rng.below(4) {
        let b_exp = rng.range_u32(0, bounds.st_degree.min(6));
        let c_exp = rng.range_u32(0, bounds.st_degree.min(6) - b_exp);
        p = p.add(&LaurentPoly::monomial(
            (rng.range_i64(bounds.x_lo, bounds.x_hi), b_exp, c_exp),
            coeff_int(rng.nonzero_int(5)),
        ));
    }
    p
}

/// Parse a config file's JSON text.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
}

/// Round-trip helper used by tests: reports must survive JSON.
pub fn report_from_json(text: &str) -> Result<Report, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
}

/// Convenience for in-process tests: named Q/F strings into a config.
pub fn spec_map_example() -> BTreeMap<&'static str, &'static str> {
    BTreeMap::from([
        ("s1", r#"{"kind":"newclass","n":2,"e":1,"m":2,"d":2,"r":3,"Q":"1"}"#),
        ("russell3", r#"{"kind":"russell","n":3,"F":"s^2 + t^3 + x"}"#),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s1_config(command: &str) -> RunConfig {
        parse_config(&format!(
            r#"{{"command":"{command}","specs":[{{"kind":"newclass","n":2,"e":1,"m":2,"d":2,"r":3,"Q":"1"}}]}}"#
        ))
        .unwrap()
    }

    #[test]
    fn verify_domain_passes_for_s1() {
        let report = run("verify-domain", &s1_config("verify-domain"), None).unwrap();
        assert!(report.all_passed);
    }

    #[test]
    fn command_mismatch_is_a_config_error() {
        let err = run("fingerprint", &s1_config("verify-domain"), None).unwrap_err();
        assert!(matches!(err, CliError::Config(_)));
    }

    #[test]
    fn wrong_spec_count_is_a_config_error() {
        let err = run("compare", &s1_config("compare"), None).unwrap_err();
        assert!(matches!(err, CliError::Config(_)));
    }

    #[test]
    fn fingerprint_report_matches_expected_counts() {
        let report = run("fingerprint", &s1_config("fingerprint"), None).unwrap();
        assert!(report.all_passed);
        let detail = &report.checks[0].detail;
        assert!(detail.contains("total steps 5"), "{detail}");
        assert!(detail.contains("distinct members 4"), "{detail}");
        assert!(detail.contains("2=3, 3=4"), "{detail}");
    }

    #[test]
    fn grading_accepts_weight_override() {
        let config = parse_config(
            r#"{"command":"grading",
                "specs":[{"kind":"newclass","n":2,"e":1,"m":2,"d":2,"r":3,"Q":"1"}],
                "weights":{"X":-1,"Y":2,"Z":5,"S":0,"T":0}}"#,
        )
        .unwrap();
        let report = run("grading", &config, None).unwrap();
        assert!(report.all_passed);
        assert!(report
            .checks
            .iter()
            .any(|c| c.name.starts_with("top-component-")));
    }

    #[test]
    fn grading_passes_with_derived_weights() {
        let report = run("grading", &s1_config("grading"), None).unwrap();
        assert!(report.all_passed, "{}", report.to_text());
    }

    #[test]
    fn json_round_trips() {
        let report = run("verify-domain", &s1_config("verify-domain"), None).unwrap();
        let json = report.to_json();
        let back = report_from_json(&json).unwrap();
        assert_eq!(back.checks, report.checks);
        assert_eq!(back.all_passed, report.all_passed);
    }

    #[test]
    fn json_is_deterministic() {
        let a = run("verify-domain", &s1_config("verify-domain"), None).unwrap();
        let b = run("verify-domain", &s1_config("verify-domain"), None).unwrap();
        assert_eq!(a.to_json(), b.to_json());
    }
}
