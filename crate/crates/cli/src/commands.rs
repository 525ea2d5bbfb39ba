use std::path::Path;

use cantor_core::correlation::{
    additive_energy, cantor_phases, cantor_truncation_energy, pair_correlation_hypotheses,
    pair_correlation_profile, seeded_alphas, EnergyReport,
};
use cantor_core::digits::residue_index_set;
use cantor_core::ergodic::{
    ergodic_average, polynomial_ergodic_average, predicted_limit, recurrence_density, IntegerPolynomial,
    PeriodicSet, PolynomialMap, SpectralVector,
};
use cantor_core::expsum::{
    classify_limit, exact_limit, polynomial_weyl_sum, riesz_product, verify_witness, weyl_sum,
    weyl_sum_window,
};
use cantor_core::intersective::{
    bound_of, difference_digits, find_difference_kernel, intersective_ratio_profile,
    is_intersective_structure, max_avoiding_set, normalize_residues, packing_bound_holds, vdc_polynomial,
    vdc_product_polynomial, DifferenceFamily, KernelWitness, SolverMode,
};
use cantor_core::moddist::{
    digit_sum_subgroup, empirical_mod_distribution, joint_law_is_uniform, joint_mod_distribution,
    joint_uniformity_criterion, predicted_mod_distribution, subgroup_uniform, sum_digits_mod_distribution,
    total_variation,
};
use cantor_core::{Error, Frequency, LimitClass, Polynomial};
use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::acceptance;
use crate::args::{Command, Flags};
use crate::config::{parse_config, ExperimentConfig};
use crate::report::{emit, flag, float, joined, Table};
use crate::CliError;

/// Largest number of rows `enumerate` lists.
const ENUMERATE_LIMIT: u64 = 10_000_000;
/// Largest `|D|^j` at which `riesz` also sums the average directly.
const RIESZ_DIRECT_LIMIT: u64 = 1 << 24;

type Outcome = Result<Table, CliError>;

fn usage(message: impl Into<String>) -> CliError {
    CliError::Usage(message.into())
}

/// Config file, then flags, then `--set` entries.
fn load(flags: &dyn Flags) -> Result<ExperimentConfig, CliError> {
    let common = flags.common();
    let mut config = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            parse_config(&text)?
        }
        None => ExperimentConfig::default(),
    };
    let mut overrides = ExperimentConfig::default();
    let named = [
        ("cantor", common.cantor.as_deref()),
        ("seed", common.seed.as_deref()),
        ("output", common.out.as_deref()),
    ];
    for (key, value) in named.into_iter().chain(flags.pairs()) {
        if let Some(value) = value {
            overrides.set(key, value)?;
        }
    }
    for entry in &common.set {
        let (key, value) =
            entry.split_once('=').ok_or_else(|| usage(format!("--set expects KEY=VALUE, got {entry:?}")))?;
        overrides.set(key.trim(), value)?;
    }
    config.overlay(overrides);
    Ok(config)
}

pub fn execute(command: Command) -> Result<(), CliError> {
    let (flags, body): (&dyn Flags, fn(&ExperimentConfig) -> Outcome) = match &command {
        Command::Enumerate(a) => (a, enumerate),
        Command::Weyl(a) => (a, weyl),
        Command::Riesz(a) => (a, riesz),
        Command::Classify(a) => (a, classify),
        Command::Moddist(a) => (a, moddist),
        Command::Jointdist(a) => (a, jointdist),
        Command::ResidueSet(a) => (a, residue_set),
        Command::Intersective(a) => (a, intersective),
        Command::VdcPoly(a) => (a, vdc_poly),
        Command::Kernel(a) => (a, kernel),
        Command::Energy(a) => (a, energy),
        Command::Paircorr(a) => (a, paircorr),
        Command::Ergodic(a) => (a, ergodic),
        Command::Recurrence(a) => (a, recurrence),
        Command::VerifyAll(a) => (a, verify_all),
    };
    let config = load(flags)?;
    let table = body(&config)?;
    emit(&table, config.output.as_deref(), flags.common().json)?;
    if table.experiment == "verify-all" {
        let failed: Vec<&str> = table.rows.iter().filter(|r| r[3] != "true").map(|r| r[1].as_str()).collect();
        eprintln!("{} of {} criteria passed", table.rows.len() - failed.len(), table.rows.len());
        if !failed.is_empty() {
            return Err(CliError::Failed(format!("criteria failed: {}", failed.join(", "))));
        }
    }
    Ok(())
}

fn complex_cells(z: num_complex::Complex64) -> [String; 2] {
    [float(z.re), float(z.im)]
}

fn enumerate(cfg: &ExperimentConfig) -> Outcome {
    cfg.check_keys(&["count", "start"])?;
    let set = cfg.cantor_set()?;
    let count = cfg.count_or("count", 10)?;
    let start = cfg.count_or("start", 0)?;
    if count > ENUMERATE_LIMIT {
        return Err(usage(format!("count is capped at {ENUMERATE_LIMIT}")));
    }
    let mut t = Table::new("enumerate", &["cantor", "n", "k", "digit_sum"]);
    for n in start..start.saturating_add(count) {
        let k = set.element(n);
        t.push(vec![set.to_string(), n.to_string(), k.to_string(), set.sum_digits(&k).to_string()]);
    }
    Ok(t)
}

fn weyl(cfg: &ExperimentConfig) -> Outcome {
    cfg.check_keys(&["N", "start", "poly"])?;
    let set = cfg.cantor_set()?;
    let n = cfg.count_or("N", 4096)?;
    let start = cfg.count_or("start", 0)?;
    let mut t =
        Table::new("weyl", &["cantor", "alpha", "beta", "poly", "start", "N", "re", "im", "magnitude"]);
    let (alpha, beta, poly, result) = match cfg.text("poly") {
        Some(text) => {
            if start != 0 || cfg.alpha.is_some() {
                return Err(usage("poly replaces alpha and beta and starts at index 0"));
            }
            let p: Polynomial = text.parse()?;
            let r = polynomial_weyl_sum(&set, &p, n)?;
            (String::new(), String::new(), p.to_string(), r)
        }
        None => {
            let (alpha, beta) = (cfg.alpha()?, cfg.beta());
            let end = start.checked_add(n).ok_or_else(|| usage("window end overflows"))?;
            let r = weyl_sum_window(&set, &alpha, &beta, start, end)?;
            (alpha.to_string(), beta.to_string(), String::new(), r)
        }
    };
    let [re, im] = complex_cells(result.value);
    t.push(vec![
        set.to_string(),
        alpha,
        beta,
        poly,
        start.to_string(),
        n.to_string(),
        re,
        im,
        float(result.magnitude),
    ]);
    Ok(t)
}

fn riesz(cfg: &ExperimentConfig) -> Outcome {
    cfg.check_keys(&["k"])?;
    let set = cfg.cantor_set()?;
    let (alpha, beta) = (cfg.alpha()?, cfg.beta());
    let k = u32::try_from(cfg.count_or("k", 8)?).map_err(|_| usage("k is too large"))?;
    let mut t = Table::new(
        "riesz",
        &[
            "cantor",
            "alpha",
            "beta",
            "k",
            "N",
            "product_re",
            "product_im",
            "empirical_re",
            "empirical_im",
            "difference",
            "pass",
        ],
    );
    for j in 1..=k {
        let product = riesz_product(&set, &alpha, &beta, j);
        let n = BigUint::from(set.radix()).pow(j);
        let direct = n.to_u64().filter(|&n| set.has_zero() && n <= RIESZ_DIRECT_LIMIT);
        let [pr, pi] = complex_cells(product);
        let mut row =
            vec![set.to_string(), alpha.to_string(), beta.to_string(), j.to_string(), n.to_string(), pr, pi];
        match direct {
            Some(n) => {
                let avg = weyl_sum(&set, &alpha, &beta, n)?.value;
                let diff = (avg - product).norm();
                row.extend(complex_cells(avg));
                row.extend([float(diff), flag(diff < 1e-9)]);
            }
            None => row.extend([String::new(), String::new(), String::new(), String::new()]),
        }
        t.push(row);
    }
    Ok(t)
}

fn classify(cfg: &ExperimentConfig) -> Outcome {
    cfg.check_keys(&["N"])?;
    let set = cfg.cantor_set()?;
    let (alpha, beta) = (cfg.alpha()?, cfg.beta());
    let n = cfg.count_or("N", 1 << 16)?;
    let class = classify_limit(&set, &alpha, &beta);
    let (name, witness) = match &class {
        LimitClass::One => ("one", None),
        LimitClass::Zero => ("zero", None),
        LimitClass::NonzeroPossible { a, r, t } => ("nonzero-possible", Some((*a, r.clone(), *t))),
        LimitClass::MayNotExist { a, r, t } => ("may-not-exist", Some((*a, r.clone(), *t))),
    };
    let (a, r, tw, verified) = match &witness {
        Some((a, r, tw)) => (
            a.to_string(),
            r.to_string(),
            tw.to_string(),
            flag(verify_witness(&set, &alpha, &beta, *a, r, *tw)),
        ),
        None => Default::default(),
    };
    let limit = if set.has_zero() && alpha.is_rational() && beta.is_rational() {
        exact_limit(&set, &alpha, &beta).ok()
    } else {
        None
    };
    let [lr, li] = limit.map(complex_cells).unwrap_or_default();
    let magnitude = weyl_sum(&set, &alpha, &beta, n)?.magnitude;
    let mut t = Table::new(
        "classify",
        &[
            "cantor",
            "alpha",
            "beta",
            "class",
            "a",
            "r",
            "t",
            "witness_verified",
            "limit_re",
            "limit_im",
            "N",
            "magnitude",
        ],
    );
    t.push(vec![
        set.to_string(),
        alpha.to_string(),
        beta.to_string(),
        name.to_string(),
        a,
        r,
        tw,
        verified,
        lr,
        li,
        n.to_string(),
        float(magnitude),
    ]);
    Ok(t)
}

/// Predicted law as floats, with its exact values as text.
type Predicted = Option<(Vec<f64>, Vec<String>)>;

fn moddist(cfg: &ExperimentConfig) -> Outcome {
    cfg.check_keys(&["q", "N", "quantity", "tolerance"])?;
    let set = cfg.cantor_set()?;
    let q = cfg.required_count("q")?;
    let n = cfg.count_or("N", 1 << 16)?;
    let tolerance = cfg.float_or("tolerance", 0.02)?;
    let quantity = cfg.text("quantity").unwrap_or("element");
    let (empirical, predicted): (Vec<f64>, Predicted) = match quantity {
        "element" => {
            let e = empirical_mod_distribution(&set, q, n)?.to_f64();
            let p = if set.has_zero() {
                let p = predicted_mod_distribution(&set, q)?;
                Some((p.to_f64(), p.exact().iter().map(ToString::to_string).collect()))
            } else {
                None
            };
            (e, p)
        }
        "digit-sum" => {
            let e = sum_digits_mod_distribution(&set, q, n)?.to_f64();
            let g = digit_sum_subgroup(&set, q);
            let size = q / g;
            let exact = (0..q)
                .map(|x| if x % g == 0 { format!("1/{size}") } else { "0".into() })
                .map(|s| if s == "1/1" { "1".into() } else { s })
                .collect();
            (e, Some((subgroup_uniform(q, g), exact)))
        }
        other => return Err(usage(format!("quantity must be element or digit-sum, got {other:?}"))),
    };
    let tv = predicted.as_ref().map(|(p, _)| total_variation(&empirical, p));
    let mut t = Table::new(
        "moddist",
        &[
            "cantor",
            "quantity",
            "q",
            "N",
            "residue",
            "empirical",
            "predicted",
            "predicted_exact",
            "tv",
            "pass",
        ],
    );
    for (x, e) in empirical.iter().enumerate() {
        let (p, exact) = match &predicted {
            Some((p, exact)) => (float(p[x]), exact[x].clone()),
            None => Default::default(),
        };
        t.push(vec![
            set.to_string(),
            quantity.to_string(),
            q.to_string(),
            n.to_string(),
            x.to_string(),
            float(*e),
            p,
            exact,
            tv.map(float).unwrap_or_default(),
            tv.map(|tv| flag(tv < tolerance)).unwrap_or_default(),
        ]);
    }
    Ok(t)
}

fn jointdist(cfg: &ExperimentConfig) -> Outcome {
    cfg.check_keys(&["a", "a2", "N"])?;
    let set = cfg.cantor_set()?;
    let a = cfg.required_count("a")?;
    let a2 = cfg.required_count("a2")?;
    let n = cfg.count_or("N", 1 << 16)?;
    let joint = joint_mod_distribution(&set, a, a2, n)?;
    let criterion = joint_uniformity_criterion(&set, a, a2);
    let exact = match joint_law_is_uniform(&set, a, a2) {
        Ok(u) => flag(u),
        Err(e) if e.is_hypothesis_violation() => return Err(e.into()),
        Err(_) => String::new(),
    };
    let tv = joint.distance_to_uniform();
    let uniform = 1.0 / (a * a2) as f64;
    let mut t = Table::new(
        "jointdist",
        &["cantor", "a", "a2", "N", "x", "y", "empirical", "uniform", "tv", "criterion", "exact_uniform"],
    );
    for x in 0..a {
        for y in 0..a2 {
            t.push(vec![
                set.to_string(),
                a.to_string(),
                a2.to_string(),
                n.to_string(),
                x.to_string(),
                y.to_string(),
                float(joint.mass(x, y)),
                float(uniform),
                float(tv),
                flag(criterion),
                exact.clone(),
            ]);
        }
    }
    Ok(t)
}

fn residue_set(cfg: &ExperimentConfig) -> Outcome {
    cfg.check_keys(&["r", "r2", "q", "truncation"])?;
    let set = cfg.cantor_set()?;
    let r = cfg.required_count("r")?;
    let r2 = cfg.count_or("r2", 0)?;
    let q = cfg.required_count("q")?;
    let truncation = cfg.count_or("truncation", 1024)?;
    let family = residue_index_set(&set, r, r2, q, truncation)?;
    let mut t = Table::new(
        "residue-set",
        &[
            "cantor",
            "r",
            "r2",
            "q",
            "truncation",
            "offset",
            "step_exponent",
            "step",
            "certified",
            "exact_family",
            "disjoint",
        ],
    );
    for p in &family.progressions {
        t.push(vec![
            set.to_string(),
            r.to_string(),
            r2.to_string(),
            q.to_string(),
            truncation.to_string(),
            p.offset.to_string(),
            p.step_exponent.to_string(),
            p.step(family.radix).to_string(),
            flag(p.certified),
            flag(family.is_exact()),
            flag(family.pairwise_disjoint()),
        ]);
    }
    Ok(t)
}

fn solver_mode(cfg: &ExperimentConfig) -> Result<SolverMode, CliError> {
    match cfg.text("mode").unwrap_or("auto") {
        "exact" => Ok(SolverMode::Exact),
        "auto" => Ok(SolverMode::Auto),
        other => Err(usage(format!("mode must be exact or auto, got {other:?}"))),
    }
}

fn intersective(cfg: &ExperimentConfig) -> Outcome {
    cfg.check_keys(&["exponents", "mode", "H", "N"])?;
    let mode = solver_mode(cfg)?;
    let mut t = Table::new(
        "intersective",
        &[
            "source",
            "exponent",
            "N",
            "size",
            "ratio",
            "exact",
            "kernel",
            "packing_bound",
            "has_zero_digit",
            "ip_sample_holds",
            "witness",
        ],
    );
    if let Some(forbidden) = cfg.list::<u64>("H")? {
        if cfg.cantor.is_some() || cfg.text("exponents").is_some() {
            return Err(usage("H replaces the Cantor set and its exponents"));
        }
        let n = cfg.required_count("N")?;
        let family = DifferenceFamily::new(forbidden, "explicit");
        let a = max_avoiding_set(&family, n, mode)?;
        t.push(vec![
            format!("H={}", joined(&family.forbidden)),
            String::new(),
            n.to_string(),
            a.size.to_string(),
            a.ratio(n).to_string(),
            flag(a.exact),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            joined(&a.witness),
        ]);
        return Ok(t);
    }
    let set = cfg.cantor_set()?;
    let exponents = cfg.list::<u32>("exponents")?.unwrap_or_else(|| vec![1, 2]);
    let structure = is_intersective_structure(&set)?;
    let kernel = structure.kernel.witness.as_ref();
    for point in intersective_ratio_profile(&set, &exponents, mode)? {
        let packing = kernel.map(|w| {
            flag(packing_bound_holds(point.solution.size, w.elements.len(), set.base(), point.exponent))
        });
        t.push(vec![
            set.to_string(),
            point.exponent.to_string(),
            point.n.to_string(),
            point.solution.size.to_string(),
            point.solution.ratio(point.n).to_string(),
            flag(point.solution.exact),
            kernel.map(|w| joined(&w.elements)).unwrap_or_default(),
            packing.unwrap_or_default(),
            flag(structure.has_zero_digit),
            flag(structure.ip_sample_holds),
            joined(&point.solution.witness),
        ]);
    }
    Ok(t)
}

fn vdc_poly(cfg: &ExperimentConfig) -> Outcome {
    cfg.check_keys(&["S", "J", "grid", "construction"])?;
    let spec = cfg.digit_spec()?;
    let base = spec.base;
    let residues = spec.residues();
    let kernel = match cfg.list::<i64>("S")? {
        Some(s) => {
            let w = KernelWitness::new(base, s);
            if !w.differences_within(&residues) {
                return Err(Error::HypothesisViolated(format!("S - S is not inside D modulo {base}")).into());
            }
            w
        }
        None => find_difference_kernel(base, &residues)?
            .witness
            .ok_or_else(|| Error::HypothesisViolated(format!("no S with |S| > 1 and S - S inside {spec}")))?,
    };
    let j = u32::try_from(cfg.count_or("J", 2)?).map_err(|_| usage("J is too large"))?;
    let grid = cfg.count_or("grid", 10_000)? as usize;
    let construction = cfg.text("construction").unwrap_or("kernel");
    let poly = match construction {
        "kernel" => vdc_polynomial(base, &kernel.elements, j)?,
        "product" => vdc_product_polynomial(base, &kernel.elements, j)?,
        other => return Err(usage(format!("construction must be kernel or product, got {other}"))),
    };
    let bound = bound_of(&poly, base, &kernel.elements, j);
    let s = normalize_residues(base, &kernel.elements);
    let support_ok = poly.frequencies_outside(base, &difference_digits(base, &s)).is_empty();
    let grid_min = poly.grid_min(grid);
    let mut t = Table::new(
        "vdc-poly",
        &[
            "cantor",
            "S",
            "J",
            "construction",
            "frequency",
            "coefficient",
            "coefficient_f64",
            "constant_term",
            "value_at_zero",
            "grid_min",
            "support_ok",
            "degree_bound",
            "exponent",
            "certified",
        ],
    );
    for (n, a) in &poly.coefficients {
        t.push(vec![
            spec.to_string(),
            joined(&s),
            j.to_string(),
            construction.to_string(),
            n.to_string(),
            a.to_string(),
            float(a.to_f64().unwrap_or(f64::NAN)),
            bound.constant_term.to_string(),
            poly.value_at_zero().to_string(),
            float(grid_min),
            flag(support_ok),
            bound.degree_bound.to_string(),
            float(bound.exponent),
            flag(bound.certified),
        ]);
    }
    Ok(t)
}

fn kernel(cfg: &ExperimentConfig) -> Outcome {
    cfg.check_keys(&[])?;
    let spec = cfg.digit_spec()?;
    let residues = spec.residues();
    let report = find_difference_kernel(spec.base, &residues)?;
    let w = report.witness.as_ref();
    let dimension = (residues.len() as f64).ln() / f64::from(spec.base).ln();
    let mut t = Table::new(
        "kernel",
        &["cantor", "residues", "kernel", "kernel_residues", "size", "exponent", "antipodal", "dimension"],
    );
    t.push(vec![
        spec.to_string(),
        joined(&residues),
        w.map(|w| joined(&w.elements)).unwrap_or_default(),
        w.map(|w| joined(w.residues())).unwrap_or_default(),
        w.map_or(1, |w| w.elements.len()).to_string(),
        w.map(|w| float(w.exponent)).unwrap_or_default(),
        report.antipodal.map(|d| d.to_string()).unwrap_or_default(),
        float(dimension),
    ]);
    Ok(t)
}

fn energy_cells(r: &EnergyReport) -> [String; 4] {
    [r.set_size.to_string(), r.energy.to_string(), r.exponent.map(float).unwrap_or_default(), flag(r.sidon)]
}

fn energy(cfg: &ExperimentConfig) -> Outcome {
    cfg.check_keys(&["elements", "levels"])?;
    let mut t = Table::new(
        "energy",
        &[
            "source",
            "levels",
            "set_size",
            "energy",
            "exponent",
            "sidon",
            "digit_energy",
            "product_formula",
            "sumset_formula",
            "carry_free",
            "direct",
        ],
    );
    if let Some(elements) = cfg.list::<i64>("elements")? {
        if cfg.cantor.is_some() {
            return Err(usage("elements replaces the Cantor set"));
        }
        let r = additive_energy(&elements)?;
        let mut row = vec![format!("A={}", joined(&elements)), String::new()];
        row.extend(energy_cells(&r));
        row.extend(vec![String::new(); 4]);
        row.push(flag(true));
        t.push(row);
        return Ok(t);
    }
    let set = cfg.cantor_set()?;
    let levels = u32::try_from(cfg.count_or("levels", 2)?).map_err(|_| usage("levels is too large"))?;
    let e = cantor_truncation_energy(&set, levels)?;
    let mut row = vec![set.to_string(), levels.to_string()];
    row.extend(energy_cells(&e.report));
    row.extend([
        e.digit_energy.energy.to_string(),
        e.product_formula.to_string(),
        e.sumset_formula.to_string(),
        flag(e.carry_free),
        flag(e.direct),
    ]);
    t.push(row);
    Ok(t)
}

fn paircorr(cfg: &ExperimentConfig) -> Outcome {
    cfg.check_keys(&["draws", "N", "s", "tolerance"])?;
    let set = cfg.cantor_set()?;
    let n = cfg.count_or("N", 4096)?;
    let s_values = cfg.list::<f64>("s")?.unwrap_or_else(|| vec![0.25, 0.5, 0.75]);
    let tolerance = cfg.float_or("tolerance", 0.2)?;
    let (seed, alphas): (String, Vec<Frequency>) = match &cfg.alpha {
        Some(alpha) => {
            if cfg.text("draws").is_some() {
                return Err(usage("draws needs a seed instead of a fixed alpha"));
            }
            (String::new(), vec![alpha.clone()])
        }
        None => {
            let seed = cfg.seed()?;
            let draws = cfg.count_or("draws", 20)? as usize;
            (seed.to_string(), seeded_alphas(seed, draws).into_iter().map(Frequency::real).collect())
        }
    };
    let hypotheses = pair_correlation_hypotheses(&set)?;
    let mut t = Table::new(
        "paircorr",
        &["cantor", "seed", "draw", "alpha", "N", "s", "pairs", "r2", "target", "pass", "hypotheses_hold"],
    );
    for (draw, alpha) in alphas.iter().enumerate() {
        let phases = cantor_phases(&set, alpha, n);
        for report in pair_correlation_profile(&phases, &s_values)? {
            t.push(vec![
                set.to_string(),
                seed.clone(),
                draw.to_string(),
                alpha.to_string(),
                n.to_string(),
                float(report.s),
                report.pairs.to_string(),
                float(report.r2),
                float(report.target),
                flag((report.r2 - report.target).abs() < tolerance),
                flag(hypotheses.hold()),
            ]);
        }
    }
    Ok(t)
}

fn spectral_vector(cfg: &ExperimentConfig) -> Result<SpectralVector, CliError> {
    match (cfg.text("vector"), cfg.text("components")) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(Path::new(path))
                .map_err(|e| usage(format!("cannot read {path}: {e}")))?;
            Ok(text.parse()?)
        }
        (None, Some(inline)) => Ok(inline.replace(';', "\n").parse()?),
        _ => Err(usage("give exactly one of vector (a file) and components (inline)")),
    }
}

fn ergodic(cfg: &ExperimentConfig) -> Outcome {
    cfg.check_keys(&["vector", "components", "N", "map", "tolerance"])?;
    let set = cfg.cantor_set()?;
    let x = spectral_vector(cfg)?;
    let n = cfg.count_or("N", 1 << 14)?;
    let tolerance = cfg.float_or("tolerance", 0.05)?;
    let map: PolynomialMap = match cfg.text("map") {
        Some(m) => m.parse()?,
        None => PolynomialMap::identity(),
    };
    let (average, predicted) = if map == PolynomialMap::identity() {
        (ergodic_average(&set, &x, n)?, Some(predicted_limit(&set, &x)?))
    } else {
        (polynomial_ergodic_average(&set, &map, &x, n)?, None)
    };
    let distance = predicted.as_ref().map(|p| average.distance(p)).transpose()?;
    let mut t = Table::new(
        "ergodic",
        &[
            "cantor",
            "map",
            "N",
            "alpha",
            "beta",
            "coeff_re",
            "coeff_im",
            "average_re",
            "average_im",
            "predicted_re",
            "predicted_im",
            "distance",
            "pass",
        ],
    );
    for (i, c) in x.components().iter().enumerate() {
        let [pr, pi] = predicted.as_ref().map(|p| complex_cells(p.components()[i].coeff)).unwrap_or_default();
        let [cr, ci] = complex_cells(c.coeff);
        let [ar, ai] = complex_cells(average.components()[i].coeff);
        t.push(vec![
            set.to_string(),
            map.to_string(),
            n.to_string(),
            c.alpha.to_string(),
            c.beta.to_string(),
            cr,
            ci,
            ar,
            ai,
            pr,
            pi,
            distance.map(float).unwrap_or_default(),
            distance.map(|d| flag(d < tolerance)).unwrap_or_default(),
        ]);
    }
    Ok(t)
}

fn recurrence(cfg: &ExperimentConfig) -> Outcome {
    cfg.check_keys(&["q", "A", "p", "coefficients", "N"])?;
    let set = cfg.cantor_set()?;
    let q = cfg.required_count("q")?;
    let residues = cfg.list::<u64>("A")?.unwrap_or_else(|| vec![0]);
    let a = PeriodicSet::new(q, residues)?;
    let p = match (cfg.text("p"), cfg.list::<i64>("coefficients")?) {
        (Some(_), Some(_)) => return Err(usage("give p or coefficients, not both")),
        (_, Some(c)) => IntegerPolynomial {
            terms: c.iter().enumerate().map(|(i, &c)| (i as u32, 0, c)).filter(|t| t.2 != 0).collect(),
        },
        (p, None) => p.unwrap_or("x^2").parse()?,
    };
    let n = cfg.required_count("N")?;
    let report = recurrence_density(&set, &a, &p, n)?;
    let mut t =
        Table::new("recurrence", &["cantor", "q", "A", "p", "N", "members", "hits", "density", "positive"]);
    t.push(vec![
        set.to_string(),
        q.to_string(),
        joined(a.residues()),
        p.to_string(),
        n.to_string(),
        report.members.to_string(),
        report.hits.to_string(),
        float(report.density),
        flag(report.density > 0.0),
    ]);
    Ok(t)
}

fn verify_all(cfg: &ExperimentConfig) -> Outcome {
    cfg.check_keys(&["only"])?;
    if cfg.cantor.is_some() || cfg.alpha.is_some() || cfg.beta.is_some() || cfg.seed.is_some() {
        return Err(usage("verify-all uses its own fixed sets and seeds"));
    }
    let only = cfg.list::<u32>("only")?;
    let mut t = Table::new("verify-all", &["criterion", "name", "pass", "checks", "detail"]);
    for outcome in acceptance::run(only.as_deref())? {
        t.push(vec![
            outcome.id.to_string(),
            outcome.name.to_string(),
            flag(outcome.passed()),
            outcome.checks.to_string(),
            outcome.detail(),
        ]);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use cantor_core::CantorSet;

    fn config(text: &str) -> ExperimentConfig {
        parse_config(text).unwrap()
    }

    #[test]
    fn enumerate_lists_members() {
        let t = enumerate(&config("cantor=b=3;D=0,2\ncount=5")).unwrap();
        let ks: Vec<&str> = t.rows.iter().map(|r| r[3].as_str()).collect();
        assert_eq!(ks, ["0", "2", "6", "8", "18"]);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(enumerate(&config("cantor=b=3;D=0,2\ncuont=5")).is_err());
    }

    #[test]
    fn riesz_rows_agree() {
        let t = riesz(&config("cantor=b=7;D=0,1,3\nalpha=sqrt2m1\nbeta=1/3\nk=5")).unwrap();
        assert_eq!(t.rows.len(), 5);
        assert!(t.rows.iter().all(|r| r[11] == "true"));
    }

    #[test]
    fn kernel_normalizes_signed_digits() {
        let t = kernel(&config("b=9\nD=-2,-1,0,1,2")).unwrap();
        assert_eq!(t.rows[0][3], "-1 0 1");
        assert_eq!(t.rows[0][4], "0 1 8");
    }

    #[test]
    fn vdc_rows_sum_to_one() {
        let t = vdc_poly(&config("b=9\nD=-2,-1,0,1,2\nJ=1")).unwrap();
        assert!(t.rows.iter().all(|r| r[9] == "1" && r[11] == "true"));
        assert_eq!(t.rows[0][8], "1/9");
        let t = vdc_poly(&config("b=9\nD=-2,-1,0,1,2\nJ=1\nconstruction=product")).unwrap();
        assert_eq!(t.rows[0][8], "5/64");
        assert!(t.rows.iter().all(|r| r[11] == "false"));
    }

    #[test]
    fn hypothesis_errors_are_distinguished() {
        let set = CantorSet::new(3, [0, 2]).unwrap();
        let err = moddist(&config(&format!("cantor={set}\nq=3\nquantity=digit-sum")));
        assert_eq!(err.unwrap_err().exit_code(), 2);
        let err = enumerate(&config("seed=1"));
        assert_eq!(err.unwrap_err().exit_code(), 1);
    }
}
