use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use symtrans_core::cubic::StratumReport;
use symtrans_core::kahler::{rigidity, Connection, PointCheck};
use symtrans_core::numeric::{rat, scalar_to_f64, vec_ops, Field, RationalRange, Scalar, Vector};
use symtrans_core::{CubicForm, Error, GroupChart, HermitianSpace, HoloPotential, SKStructure, SymplecticSpace};

use crate::report::{vec_str, witness, Check, Report, Tally, Witness};
use crate::{command_rng, read_input, trial_rng, write_output, CliError, CliResult, Command, Outcome, RunConfig};

/// Points checked per potential when `sk-verify` samples its own potentials.
pub const SK_POINTS_PER_POTENTIAL: usize = 4;

const COMPLETENESS_TIMES: [i64; 2] = [1_000_000, -1_000_000];

/// Initial positions and velocities for geodesic comparisons; unit scale keeps
/// the f64 trajectories well inside the absolute tolerance.
pub const GEODESIC_RANGE: RationalRange = RationalRange { max_num: 1, max_den: 4 };

pub fn dispatch(config: &RunConfig) -> CliResult<Outcome> {
    let mut report = Report::new(config.command.name(), config.seed, config.trials);
    let mut artifact = None;
    match config.command {
        Command::Check => check(config, &mut report)?,
        Command::Stratum => stratum(config, &mut report)?,
        Command::Group => group(config, &mut report)?,
        Command::Orbit => orbit(config, &mut report)?,
        Command::Transitivity => transitivity(config, &mut report)?,
        Command::SkVerify => sk_verify(config, &mut report)?,
        Command::Geodesic => geodesic(config, &mut report)?,
        Command::Sample => artifact = sample(config, &mut report)?,
    }
    Ok(Outcome { report, artifact })
}

fn single_input(config: &RunConfig) -> CliResult<&std::path::Path> {
    match config.inputs.as_slice() {
        [p] => Ok(p),
        other => Err(CliError::Usage(format!(
            "{} expects exactly one input file, got {}",
            config.command.name(),
            other.len()
        ))),
    }
}

fn load_cubic(config: &RunConfig) -> CliResult<CubicForm> {
    Ok(CubicForm::parse(&read_input(single_input(config)?)?)?)
}

fn load_potential(config: &RunConfig) -> CliResult<HoloPotential> {
    Ok(HoloPotential::parse(&read_input(single_input(config)?)?)?)
}

/// Runs `f` for every trial in parallel; outcomes come back in trial order.
fn run_trials<T, F>(config: &RunConfig, f: F) -> CliResult<Vec<T>>
where
    T: Send,
    F: Fn(usize, &mut rand_chacha::ChaCha8Rng) -> CliResult<T> + Sync,
{
    let results: Vec<CliResult<T>> = (0..config.trials)
        .into_par_iter()
        .map(|i| f(i, &mut trial_rng(config.seed, i)))
        .collect();
    results.into_iter().collect()
}

fn tally(outcomes: Vec<Vec<(&'static str, Option<Witness>)>>) -> Vec<Check> {
    let mut t = Tally::default();
    for (i, checks) in outcomes.into_iter().enumerate() {
        for (name, w) in checks {
            t.record(i, name, w);
        }
    }
    t.into_checks()
}

fn unit(d: usize, i: usize) -> Vector {
    vec_ops::unit(d, i)
}

fn stratum_data(s: &CubicForm, rep: &StratumReport, report: &mut Report) {
    report.datum("dim", s.dim());
    report.datum("k", rep.k);
    report.datum("support", &rep.support);
    report.datum("isotropic", rep.isotropic);
    report.datum("translation_dim", rep.translation_dim.map_or("none".to_string(), |t| t.to_string()));
}

fn variety_witness(s: &CubicForm, rep: &StratumReport) -> Option<Witness> {
    let fam = s.endo_family();
    let d = s.dim();
    if let Some((i, j)) = rep.commutator_witness {
        let (si, sj) = (&fam.matrices()[i], &fam.matrices()[j]);
        return Some(witness([
            ("X", vec_str(&unit(d, i))),
            ("Y", vec_str(&unit(d, j))),
            ("[S_X,S_Y]", si.commutator(sj).expect("square").to_string()),
        ]));
    }
    rep.trace_witness.map(|i| {
        witness([("X", vec_str(&unit(d, i))), ("tr S_X", fam.matrices()[i].trace().expect("square").to_string())])
    })
}

fn isotropy_failure(s: &CubicForm, rep: &StratumReport) -> Option<Witness> {
    let (a, b) = rep.isotropy_witness?;
    let basis = rep.support.basis_vectors();
    let omega = s.space().omega_eval(&basis[a], &basis[b]).expect("same ambient");
    Some(witness([("u", vec_str(&basis[a])), ("v", vec_str(&basis[b])), ("omega(u,v)", omega.to_string())]))
}

fn check(config: &RunConfig, report: &mut Report) -> CliResult<()> {
    let s = load_cubic(config)?;
    let rep = s.in_c_sp();
    stratum_data(&s, &rep, report);
    report.verdict("variety", variety_witness(&s, &rep));
    report.verdict("isotropic_support", isotropy_failure(&s, &rep));
    if rep.in_variety {
        let fam = s.endo_family();
        let d = s.dim();
        let w = fam.product_witness().map(|(i, j)| {
            witness([
                ("X", vec_str(&unit(d, i))),
                ("Y", vec_str(&unit(d, j))),
                ("S_X S_Y", fam.matrices()[i].mul(&fam.matrices()[j]).expect("square").to_string()),
            ])
        });
        report.verdict("nilpotent_products", w);
    }
    Ok(())
}

fn stratum(config: &RunConfig, report: &mut Report) -> CliResult<()> {
    let s = load_cubic(config)?;
    let rep = s.in_c_sp();
    stratum_data(&s, &rep, report);
    let agree = (!rep.criteria_agree()).then(|| {
        witness([("in_variety", rep.in_variety.to_string()), ("isotropic", rep.isotropic.to_string())])
    });
    report.verdict("criteria_agree", agree);
    let n = s.space().half_dim();
    let bound = (rep.in_variety && rep.k > n).then(|| witness([("k", rep.k.to_string()), ("n", n.to_string())]));
    report.verdict("stratum_bound", bound);
    if let Some(t) = rep.translation_dim {
        let kernel = s.endo_family().kernel().dim();
        let w = (kernel != t).then(|| witness([("kernel_dim", kernel.to_string()), ("expected", t.to_string())]));
        report.verdict("translation_dim", w);
    }
    Ok(())
}

/// Builds the group chart; a cubic outside the variety becomes a failing verdict.
fn chart_or_fail(config: &RunConfig, report: &mut Report) -> CliResult<Option<GroupChart>> {
    let s = load_cubic(config)?;
    let rep = s.in_c_sp();
    report.datum("dim", s.dim());
    report.datum("k", rep.k);
    match GroupChart::new(s.clone()) {
        Ok(chart) => {
            report.datum("translation_dim", chart.translation_subgroup().dim());
            report.verdict("variety", None);
            Ok(Some(chart))
        }
        Err(Error::NotInVariety(_)) => {
            report.verdict("variety", variety_witness(&s, &rep));
            Ok(None)
        }
        Err(e) => Err(e.into()),
    }
}

fn group(config: &RunConfig, report: &mut Report) -> CliResult<()> {
    let Some(chart) = chart_or_fail(config, report)? else { return Ok(()) };
    let range = RationalRange::default();
    let outcomes = run_trials(config, |_, rng| {
        let x = range.sample_vec(rng, chart.dim());
        let y = range.sample_vec(rng, chart.dim());
        let (ex, ey) = (chart.exp_element(&x)?, chart.exp_element(&y)?);
        let sum = chart.exp_element(&vec_ops::add(&x, &y))?;
        let xy = ex.compose(&ey)?;
        let pair = || witness([("x", vec_str(&x)), ("y", vec_str(&y))]);
        Ok(vec![
            ("exp_homomorphism", (xy != sum).then(pair)),
            ("commutative", (xy != ey.compose(&ex)?).then(pair)),
        ])
    })?;
    report.checks.extend(tally(outcomes));
    Ok(())
}

fn orbit(config: &RunConfig, report: &mut Report) -> CliResult<()> {
    let Some(chart) = chart_or_fail(config, report)? else { return Ok(()) };
    let range = RationalRange::default();
    let origin = vec![Scalar::zero(); chart.dim()];
    let outcomes = run_trials(config, |_, rng| {
        let x = range.sample_vec(rng, chart.dim());
        let at = || witness([("x", vec_str(&x))]);
        Ok(vec![
            ("orbit_after_inverse", (chart.orbit_map(&chart.orbit_map_inverse(&x)?)? != x).then(at)),
            ("inverse_after_orbit", (chart.orbit_map_inverse(&chart.orbit_map(&x)?)? != x).then(at)),
            ("orbit_is_exp_at_origin", (chart.exp_element(&x)?.apply(&origin)? != chart.orbit_map(&x)?).then(at)),
        ])
    })?;
    report.checks.extend(tally(outcomes));
    Ok(())
}

fn transitivity(config: &RunConfig, report: &mut Report) -> CliResult<()> {
    let Some(chart) = chart_or_fail(config, report)? else { return Ok(()) };
    let n = chart.cubic().space().half_dim();
    let t = chart.translation_subgroup().dim();
    report.verdict(
        "translation_subgroup",
        (t < n).then(|| witness([("translation_dim", t.to_string()), ("n", n.to_string())])),
    );
    let range = RationalRange::default();
    let outcomes = run_trials(config, |_, rng| {
        let v = range.sample_vec(rng, chart.dim());
        let det = chart.differential(&v)?.det()?;
        let w = (!det.is_one()).then(|| witness([("v", vec_str(&v)), ("det", det.to_string())]));
        Ok(vec![("unipotent_differential", w)])
    })?;
    report.checks.extend(tally(outcomes));
    Ok(())
}

fn point_checks(sk: &SKStructure, pc: &PointCheck, bound: usize) -> CliResult<Vec<(&'static str, Option<Witness>)>> {
    let at = |what: &str, idx: String| witness([("point", vec_str(&pc.point)), (what, idx)]);
    let cj = sk.s_at(&pc.point)?.in_c_j(sk.space().j())?;
    Ok(vec![
        ("symmetric", pc.symmetry_witness.map(|w| at("indices", format!("{w:?}")))),
        ("commuting", pc.commutator_witness.map(|w| at("indices", format!("{w:?}")))),
        ("ds_symmetric", pc.ds_symmetry_witness.map(|w| at("indices", format!("{w:?}")))),
        ("anticommutes_with_j", pc.anticommutation_witness.map(|w| at("index", w.to_string()))),
        ("flat_connection", pc.curvature_witness.map(|w| at("indices", format!("{w:?}")))),
        ("levi_civita_relation", pc.levi_civita_witness.map(|w| at("index", w.to_string()))),
        ("constant_when_cubic", pc.nonconstant_witness.map(|w| at("indices", format!("{w:?}")))),
        ("isotropic_support", (!pc.support_isotropic).then(|| at("support_dim", pc.support_dim.to_string()))),
        ("c_j_member", (!cj.member).then(|| at("support_dim", pc.support_dim.to_string()))),
        ("stratum_bound", (pc.support_dim > 2 * bound).then(|| at("support_dim", pc.support_dim.to_string()))),
    ])
}

fn sk_verify(config: &RunConfig, report: &mut Report) -> CliResult<()> {
    let range = RationalRange::default();
    if !config.inputs.is_empty() {
        let sk = SKStructure::new(load_potential(config)?);
        let (p, q) = sk.space().signature();
        report.datum("signature", format!("{p},{q}"));
        report.datum("degree", sk.potential().degree());
        let bound = sk.space().max_isotropic_dim();
        let outcomes = run_trials(config, |_, rng| {
            let x = range.sample_vec(rng, sk.space().real_dim());
            point_checks(&sk, &sk.check_point(&x)?, bound)
        })?;
        report.checks.extend(tally(outcomes));
        return Ok(());
    }
    let sig = config
        .signature
        .ok_or_else(|| CliError::Usage("sk-verify needs a potential file or --signature".into()))?;
    let space = Arc::new(HermitianSpace::new(sig.p, sig.q)?);
    report.datum("signature", format!("{},{}", sig.p, sig.q));
    report.datum("degree", config.degree);
    report.datum("points_per_potential", SK_POINTS_PER_POTENTIAL);
    let bound = space.max_isotropic_dim();
    let outcomes = run_trials(config, |_, rng| {
        let m = rng.gen_range(0..=bound);
        let w = space.random_isotropic_complex(m, rng, &range)?;
        let sk = SKStructure::new(HoloPotential::sample_on(space.clone(), &w, 0, config.degree, rng, &range)?);
        let mut out = Vec::new();
        for _ in 0..SK_POINTS_PER_POTENTIAL {
            let x = range.sample_vec(rng, space.real_dim());
            out.extend(point_checks(&sk, &sk.check_point(&x)?, bound)?);
        }
        Ok(out)
    })?;
    report.checks.extend(tally(outcomes));
    if sig.p == 0 || sig.q == 0 {
        let r = rigidity(&space)?;
        report.datum("anticommuting_dim", r.anticommuting_dim);
        report.verdict(
            "definite_rigidity",
            (!r.trivial).then(|| witness([("trace_form_definite", r.trace_form_definite.to_string())])),
        );
    }
    Ok(())
}

fn geodesic(config: &RunConfig, report: &mut Report) -> CliResult<()> {
    if !(config.dt > 0.0 && config.t_end >= 0.0 && config.t_end.is_finite()) {
        return Err(CliError::Usage(format!("invalid time grid dt={} t-end={}", config.dt, config.t_end)));
    }
    let sk = SKStructure::new(load_potential(config)?);
    let (p, q) = sk.space().signature();
    report.datum("signature", format!("{p},{q}"));
    report.datum("dt", config.dt);
    report.datum("t_end", config.t_end);
    report.datum("tolerance", config.tolerance);
    let range = GEODESIC_RANGE;
    let d = sk.space().real_dim();
    let outcomes = run_trials(config, |_, rng| {
        let p0 = range.sample_vec(rng, d);
        let v0 = range.sample_vec(rng, d);
        let geo = sk.closed_form_geodesic(&p0, &v0)?;
        let exact = geo.sample(config.t_end, config.dt);
        let pf: Vec<f64> = p0.iter().map(scalar_to_f64).collect();
        let vf: Vec<f64> = v0.iter().map(scalar_to_f64).collect();
        let rk = sk.rk4_geodesic(Connection::Special, &pf, &vf, config.t_end, config.dt)?;
        let dev = exact.sup_distance(&rk);
        let initial = || witness([("p0", vec_str(&p0)), ("v0", vec_str(&v0))]);
        let agree = (!(dev < config.tolerance)).then(|| {
            let mut w = initial();
            w.insert("sup_deviation".into(), format!("{dev:e}"));
            w
        });
        let mut complete = None;
        for t in COMPLETENESS_TIMES {
            let finite = geo.eval(t as f64).iter().all(|v| v.is_finite());
            if !finite || geo.eval_exact(&rat(t)).is_err() {
                let mut w = initial();
                w.insert("t".into(), t.to_string());
                complete = Some(w);
                break;
            }
        }
        Ok((vec![("closed_form_matches_rk4", agree), ("complete", complete)], exact, dev))
    })?;
    let worst = outcomes.iter().map(|o| o.2).fold(0.0, f64::max);
    report.datum("max_deviation", format!("{worst:e}"));
    if let (Some(path), Some((_, first, _))) = (&config.out, outcomes.first()) {
        write_output(path, &first.to_csv())?;
    }
    report.checks.extend(tally(outcomes.into_iter().map(|(c, _, _)| c).collect()));
    Ok(())
}

fn sample(config: &RunConfig, report: &mut Report) -> CliResult<Option<String>> {
    let range = RationalRange::default();
    let mut rng = command_rng(config.seed);
    let text = if let Some(sig) = config.signature {
        let space = Arc::new(HermitianSpace::new(sig.p, sig.q)?);
        let m = config.k.unwrap_or(space.max_isotropic_dim());
        let w = space.random_isotropic_complex(m, &mut rng, &range)?;
        let f = if config.degree == 3 {
            HoloPotential::sample_regular_cubic(space, &w, &mut rng, &range)?
        } else {
            HoloPotential::sample_on(space, &w, 0, config.degree, &mut rng, &range)?
        };
        report.datum("signature", format!("{},{}", sig.p, sig.q));
        report.datum("k", m);
        report.datum("degree", f.degree());
        f.to_text()
    } else {
        let n = config.n.ok_or_else(|| CliError::Usage("sample needs --n (or --signature)".into()))?;
        let k = config.k.unwrap_or(n);
        let space = Arc::new(SymplecticSpace::darboux(n));
        let w = space.random_isotropic(k, &mut rng, &range)?;
        let s = CubicForm::sample_regular(space, &w, &mut rng, &range)?;
        report.datum("n", n);
        report.datum("k", k);
        report.verdict(
            "regular_support",
            (s.support() != w).then(|| witness([("support", s.support().to_string()), ("target", w.to_string())])),
        );
        s.to_text()
    };
    match &config.out {
        Some(path) => {
            write_output(path, &text)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}
