//! Command implementations: each returns structured report records; the
//! binary renders them and maps outcomes to exit codes.

use num_bigint::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::desc::{FactorDesc, Payload, SystemDescription};
use crate::report::{
    sig10, CheckOut, ColumnOut, D1Out, DegreesOut, ProfileOut, ReportOut, SequenceOut,
    TheoremEntryOut,
};
use crate::CliError;
use dyndeg::fibered::{
    abc_sequences, product_lambda_sequence, relative_sequence_orbit, relative_sequence_product,
    relative_sequence_triangular, system_profiles, verify_corollary_1_2, verify_corollary_1_3,
    verify_lemma_4_2, verify_power_rule, verify_theorem_1_1, FiberedSystem, ProductSystem, Verdict,
};
use dyndeg::matrix::{random_unimodular, IntMatrix};
use dyndeg::monomial::{degree_sequence, dynamical_degrees_exact, ExponentMatrix};
use dyndeg::profile::{estimate_d1, log_concavity_floats, DegreeSequence, EstimateMethod};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckName {
    Theorem11,
    Corollary12,
    Corollary13,
    LogConcavity,
    PowerRule,
    Lemma42,
}

impl CheckName {
    pub fn parse(name: &str) -> Result<Self, CliError> {
        match name {
            "theorem1.1" => Ok(Self::Theorem11),
            "corollary1.2" => Ok(Self::Corollary12),
            "corollary1.3" => Ok(Self::Corollary13),
            "logconcavity" => Ok(Self::LogConcavity),
            "powerrule" => Ok(Self::PowerRule),
            "lemma4.2" => Ok(Self::Lemma42),
            other => Err(CliError::Input(format!(
                "unknown check \"{other}\": expected theorem1.1 | corollary1.2 | \
                 corollary1.3 | logconcavity | powerrule | lemma4.2"
            ))),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Theorem11 => "theorem1.1",
            Self::Corollary12 => "corollary1.2",
            Self::Corollary13 => "corollary1.3",
            Self::LogConcavity => "logconcavity",
            Self::PowerRule => "powerrule",
            Self::Lemma42 => "lemma4.2",
        }
    }

    pub fn all() -> [Self; 6] {
        [
            Self::Theorem11,
            Self::Corollary12,
            Self::Corollary13,
            Self::LogConcavity,
            Self::PowerRule,
            Self::Lemma42,
        ]
    }
}

pub fn effective_seed(cli_seed: Option<u64>, desc: &SystemDescription) -> u64 {
    cli_seed.or(desc.options.seed).unwrap_or(0)
}

fn d1_out(seq: &DegreeSequence) -> Result<D1Out, CliError> {
    let est = estimate_d1(seq)?;
    Ok(D1Out {
        estimate: sig10(est.estimate),
        upper_bound: sig10(est.upper_bound),
        upper_bound_at: est.upper_bound_at,
        tol: est.tol,
        method: match est.method {
            EstimateMethod::Ratio => "ratio".into(),
            EstimateMethod::Root => "root".into(),
        },
    })
}

fn point_strings(point: &[BigInt]) -> Vec<String> {
    point.iter().map(|c| c.to_string()).collect()
}

// ---------------------------------------------------------------------------
// degrees
// ---------------------------------------------------------------------------

pub fn run_degrees(desc: &SystemDescription, seed: u64) -> Result<DegreesOut, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match &desc.payload {
        Payload::Monomial { matrix, .. } => {
            let profile = dynamical_degrees_exact(matrix)?;
            Ok(DegreesOut {
                system: format!("monomial map on P^{}", matrix.size()),
                profiles: vec![ProfileOut::new("d(f)", &profile)],
                d1: None,
                base_point: None,
            })
        }
        Payload::Rational { map, .. } => {
            let n = desc.options.n.unwrap_or(8);
            let seq = map.degree_sequence_d1(n)?;
            Ok(DegreesOut {
                system: format!(
                    "rational map on P^{} of degree {}",
                    map.dimension(),
                    map.degree()
                ),
                profiles: vec![],
                d1: Some(d1_out(&seq)?),
                base_point: None,
            })
        }
        Payload::Triangular { .. } | Payload::Product { .. } => {
            let sys = desc.fibered_system()?;
            let (d_f, d_g, d_rel) = system_profiles(&sys)?;
            Ok(DegreesOut {
                system: format!(
                    "{} over a base of dimension {}",
                    desc.kind.name(),
                    sys.base_dim()
                ),
                profiles: vec![
                    ProfileOut::new("d(g)", &d_g),
                    ProfileOut::new("d(f|pi)", &d_rel),
                    ProfileOut::new("d(f)", &d_f),
                ],
                d1: None,
                base_point: None,
            })
        }
        Payload::Skew { base_point, .. } => {
            let FiberedSystem::Skew(skew) = desc.fibered_system()? else {
                unreachable!()
            };
            let n = desc.options.n.unwrap_or(10);
            let rel = relative_sequence_orbit(&skew, n, base_point.clone(), &mut rng)?;
            let seq = DegreeSequence::new(1, rel.values.clone());
            let mut profiles = Vec::new();
            if let Ok(p) = skew.base().profile() {
                profiles.push(ProfileOut::new("d(g)", &p));
            }
            Ok(DegreesOut {
                system: format!(
                    "skew product over P^{} with P^{} fibers",
                    skew.base_dim(),
                    skew.fiber_dim()
                ),
                profiles,
                d1: Some(d1_out(&seq)?),
                base_point: rel.base_point.as_deref().map(point_strings),
            })
        }
    }
}

// ---------------------------------------------------------------------------
// sequence
// ---------------------------------------------------------------------------

pub fn run_sequence(
    desc: &SystemDescription,
    p: usize,
    n: usize,
    seed: u64,
) -> Result<SequenceOut, CliError> {
    if n == 0 {
        return Err(CliError::Input("need n >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let big_strings = |v: &[BigInt]| -> Vec<String> { v.iter().map(|x| x.to_string()).collect() };
    match &desc.payload {
        Payload::Monomial { matrix, .. } => {
            let seq = degree_sequence(matrix, p, n)?;
            Ok(SequenceOut {
                p,
                n,
                columns: vec![ColumnOut {
                    label: format!("lambda_{p}(f^n)"),
                    values: big_strings(seq.values()),
                }],
                base_point: None,
            })
        }
        Payload::Rational { map, .. } => {
            if p > 1 {
                return Err(CliError::Unsupported(format!(
                    "lambda_{p} of a general rational map is not certified; only p <= 1"
                )));
            }
            let values = if p == 0 {
                vec![BigInt::from(1); n]
            } else {
                map.degree_sequence_d1(n)?.values().to_vec()
            };
            Ok(SequenceOut {
                p,
                n,
                columns: vec![ColumnOut {
                    label: format!("lambda_{p}(f^n)"),
                    values: big_strings(&values),
                }],
                base_point: None,
            })
        }
        Payload::Triangular { .. } => {
            let FiberedSystem::MonomialTriangular(sys) = desc.fibered_system()? else {
                unreachable!()
            };
            let total = degree_sequence(sys.matrix(), p, n)?;
            let mut columns = vec![ColumnOut {
                label: format!("lambda_{p}(f^n)"),
                values: big_strings(total.values()),
            }];
            if p <= sys.fiber_block().size() {
                let rel = relative_sequence_triangular(&sys, p, n)?;
                columns.push(ColumnOut {
                    label: format!("lambda_{p}(f^n|pi)"),
                    values: big_strings(&rel.values),
                });
            }
            Ok(SequenceOut {
                p,
                n,
                columns,
                base_point: None,
            })
        }
        Payload::Product { .. } => {
            let FiberedSystem::Product(sys) = desc.fibered_system()? else {
                unreachable!()
            };
            let mut columns = Vec::new();
            let lambda = product_lambda_sequence(&sys, p, n)?;
            columns.push(ColumnOut {
                label: format!("lambda_{p}(f^n)"),
                values: big_strings(&lambda),
            });
            if p <= sys.fiber_dim() {
                let rel = relative_sequence_product(&sys, p, n)?;
                columns.push(ColumnOut {
                    label: format!("lambda_{p}(f^n|pi)"),
                    values: big_strings(&rel.values),
                });
            }
            let abc = abc_sequences(&sys, p, n)?;
            for (q, values) in &abc.a {
                columns.push(ColumnOut {
                    label: format!("a[{q},{p}](n)"),
                    values: big_strings(values),
                });
            }
            columns.push(ColumnOut {
                label: format!("b_{p}(n)"),
                values: big_strings(&abc.b),
            });
            if let Some(c) = &abc.c {
                columns.push(ColumnOut {
                    label: format!("c_{p}(n)"),
                    values: big_strings(c),
                });
            }
            Ok(SequenceOut {
                p,
                n,
                columns,
                base_point: None,
            })
        }
        Payload::Skew { base_point, .. } => {
            let FiberedSystem::Skew(skew) = desc.fibered_system()? else {
                unreachable!()
            };
            match p {
                0 => Ok(SequenceOut {
                    p,
                    n,
                    columns: vec![ColumnOut {
                        label: "lambda_0(f^n|pi)".into(),
                        values: vec!["1".into(); n],
                    }],
                    base_point: None,
                }),
                1 => {
                    let rel = relative_sequence_orbit(&skew, n, base_point.clone(), &mut rng)?;
                    Ok(SequenceOut {
                        p,
                        n,
                        columns: vec![ColumnOut {
                            label: "lambda_1(f^n|pi)".into(),
                            values: big_strings(&rel.values),
                        }],
                        base_point: rel.base_point.as_deref().map(point_strings),
                    })
                }
                q if q == skew.fiber_dim() => {
                    let det = skew.monomial_family_top_degree().ok_or_else(|| {
                        CliError::Unsupported(
                            "top relative degrees of skew systems need a monomial fiber family"
                                .into(),
                        )
                    })?;
                    let mut values = Vec::with_capacity(n);
                    let mut acc = BigInt::from(1);
                    for _ in 0..n {
                        acc = &acc * &det;
                        values.push(acc.clone());
                    }
                    Ok(SequenceOut {
                        p,
                        n,
                        columns: vec![ColumnOut {
                            label: format!("lambda_{p}(f^n|pi)"),
                            values: big_strings(&values),
                        }],
                        base_point: None,
                    })
                }
                _ => Err(CliError::Unsupported(format!(
                    "relative order {p} of a skew system is not certified; \
                     supported: 0, 1{}",
                    if skew.monomial_family_top_degree().is_some() {
                        format!(", {}", skew.fiber_dim())
                    } else {
                        String::new()
                    }
                ))),
            }
        }
    }
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

fn verdict_str(v: Verdict) -> &'static str {
    match v {
        Verdict::Holds => "holds",
        Verdict::Fails => "fails",
        Verdict::Indistinguishable => "indistinguishable",
    }
}

pub fn run_verify(
    desc: &SystemDescription,
    check: CheckName,
    n_override: Option<usize>,
    seed: u64,
) -> Result<CheckOut, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match check {
        CheckName::Theorem11 => {
            let sys = desc.fibered_system().map_err(|_| {
                CliError::Unsupported(format!(
                    "theorem1.1 needs a fibered system; kind \"{}\" has none",
                    desc.kind.name()
                ))
            })?;
            let (d_f, d_g, d_rel) = system_profiles(&sys)?;
            let rep = verify_theorem_1_1(&d_f, &d_g, &d_rel)?;
            let entries: Vec<TheoremEntryOut> = rep
                .entries
                .iter()
                .map(|e| TheoremEntryOut {
                    p: e.p,
                    verdict: verdict_str(e.verdict).into(),
                    witness: e.witness,
                    tied_witnesses: e.tied_witnesses.clone(),
                    residual: e.residual,
                    tolerance: e.tolerance,
                })
                .collect();
            let any_indistinct = rep
                .entries
                .iter()
                .any(|e| e.verdict == Verdict::Indistinguishable);
            if !rep.holds {
                Ok(CheckOut {
                    name: check.name().into(),
                    verdict: "fail".into(),
                    note: None,
                    theorem_entries: entries,
                    residuals: vec![],
                    gaps: vec![],
                })
            } else if any_indistinct {
                Err(CliError::Unsupported(
                    "estimation tolerance exceeds the gap between candidate maxima; \
                     the formula is indistinguishable at this precision"
                        .into(),
                ))
            } else {
                let note = if !rep.max_degree_dominates {
                    Some("max-degree comparison failed".into())
                } else {
                    None
                };
                Ok(CheckOut {
                    name: check.name().into(),
                    verdict: if rep.max_degree_dominates {
                        "pass"
                    } else {
                        "fail"
                    }
                    .into(),
                    note,
                    theorem_entries: entries,
                    residuals: vec![],
                    gaps: vec![],
                })
            }
        }
        CheckName::Corollary12 => run_corollary_1_2(desc, n_override, &mut rng),
        CheckName::Corollary13 => {
            let sys = desc.fibered_system().map_err(|_| {
                CliError::Unsupported(format!(
                    "corollary1.3 needs a fibered system; kind \"{}\" has none",
                    desc.kind.name()
                ))
            })?;
            let (d_f, d_g, d_rel) = system_profiles(&sys)?;
            let rep = verify_corollary_1_3(&d_f, &d_g, &d_rel);
            let note = if rep.vacuous {
                Some("predicate false; implication vacuous".into())
            } else {
                Some(format!(
                    "consecutive degrees distinct: f={}, g={}, f|pi={}",
                    rep.total.distinct, rep.base.distinct, rep.relative.distinct
                ))
            };
            Ok(CheckOut {
                name: check.name().into(),
                verdict: if rep.implication_holds {
                    "pass"
                } else {
                    "fail"
                }
                .into(),
                note,
                theorem_entries: vec![],
                residuals: vec![],
                gaps: vec![],
            })
        }
        CheckName::LogConcavity => run_log_concavity(desc),
        CheckName::PowerRule => run_power_rule(desc, n_override),
        CheckName::Lemma42 => run_lemma_4_2(desc, n_override),
    }
}

fn run_corollary_1_2(
    desc: &SystemDescription,
    n_override: Option<usize>,
    rng: &mut ChaCha8Rng,
) -> Result<CheckOut, CliError> {
    match &desc.payload {
        Payload::Monomial { matrix, conjugator } => {
            let m = match conjugator {
                Some(m) => m.clone(),
                None => random_unimodular(rng, matrix.size(), 10),
            };
            let m_inv = m.unimodular_inverse().map_err(|_| {
                CliError::Input("monomial conjugator must be unimodular (determinant ±1)".into())
            })?;
            let conj = ExponentMatrix::new(m.mul(matrix.matrix()).mul(&m_inv))?;
            let pa = dynamical_degrees_exact(matrix)?;
            let pc = dynamical_degrees_exact(&conj)?;
            let rep = verify_corollary_1_2(&pa, &pc)?;
            Ok(CheckOut {
                name: "corollary1.2".into(),
                verdict: if rep.equal { "pass" } else { "fail" }.into(),
                note: Some(format!(
                    "max |d_p(f) - d_p(g)| = {}, characteristic data equal: {:?}",
                    sig10(rep.max_abs_diff),
                    rep.char_poly_equal
                )),
                theorem_entries: vec![],
                residuals: vec![rep.max_abs_diff],
                gaps: vec![],
            })
        }
        Payload::Rational { map, conjugator } => {
            let k = map.dimension();
            let m = match conjugator {
                Some(m) => m.clone(),
                None => loop {
                    let mut rows = vec![vec![BigInt::from(0); k + 1]; k + 1];
                    for row in rows.iter_mut() {
                        for e in row.iter_mut() {
                            *e = BigInt::from(rng.gen_range(-2i64..=2));
                        }
                    }
                    if let Ok(m) = IntMatrix::from_rows(rows) {
                        if !num_traits::Zero::is_zero(&m.det()) {
                            break m;
                        }
                    }
                },
            };
            let conj = map.conjugate(&m)?;
            let n = n_override.or(desc.options.n).unwrap_or(8);
            let sa = map.degree_sequence_d1(n)?;
            let sc = conj.degree_sequence_d1(n)?;
            let ea = estimate_d1(&sa)?;
            let ec = estimate_d1(&sc)?;
            let ub_gap = (ea.upper_bound - ec.upper_bound).abs();
            let est_gap = (ea.estimate - ec.estimate).abs();
            let pass = ub_gap <= 1e-3 && est_gap <= 1e-3;
            Ok(CheckOut {
                name: "corollary1.2".into(),
                verdict: if pass { "pass" } else { "fail" }.into(),
                note: Some(format!(
                    "d_1 upper bounds {} vs {}; estimates differ by {}",
                    sig10(ea.upper_bound),
                    sig10(ec.upper_bound),
                    sig10(est_gap)
                )),
                theorem_entries: vec![],
                residuals: vec![ub_gap, est_gap],
                gaps: vec![],
            })
        }
        _ => Err(CliError::Unsupported(format!(
            "corollary1.2 compares a map with its conjugate; kind \"{}\" is not supported",
            desc.kind.name()
        ))),
    }
}

fn run_log_concavity(desc: &SystemDescription) -> Result<CheckOut, CliError> {
    let profiles: Vec<(String, dyndeg::profile::DegreeProfile)> = match &desc.payload {
        Payload::Monomial { matrix, .. } => {
            vec![("d(f)".to_string(), dynamical_degrees_exact(matrix)?)]
        }
        Payload::Triangular { .. } | Payload::Product { .. } => {
            let sys = desc.fibered_system()?;
            let (d_f, d_g, d_rel) = system_profiles(&sys)?;
            vec![
                ("d(f)".to_string(), d_f),
                ("d(g)".to_string(), d_g),
                ("d(f|pi)".to_string(), d_rel),
            ]
        }
        _ => {
            return Err(CliError::Unsupported(format!(
                "log-concavity needs a full degree profile; kind \"{}\" does not certify one",
                desc.kind.name()
            )))
        }
    };
    let mut pass = true;
    let mut notes = Vec::new();
    for (label, profile) in &profiles {
        let report = log_concavity_floats(&profile.shadows(), 1e-9);
        if let Some(p) = report.first_violation {
            pass = false;
            notes.push(format!("{label} violates log-concavity at p = {p}"));
        }
    }
    Ok(CheckOut {
        name: "logconcavity".into(),
        verdict: if pass { "pass" } else { "fail" }.into(),
        note: if notes.is_empty() {
            Some(format!("{} profiles log-concave", profiles.len()))
        } else {
            Some(notes.join("; "))
        },
        theorem_entries: vec![],
        residuals: vec![],
        gaps: vec![],
    })
}

fn run_power_rule(
    desc: &SystemDescription,
    n_override: Option<usize>,
) -> Result<CheckOut, CliError> {
    let n = n_override.or(desc.options.n).unwrap_or(2).max(1) as u64;
    let pairs: Vec<(String, ExponentMatrix)> = match &desc.payload {
        Payload::Monomial { matrix, .. } => vec![("f".into(), matrix.clone())],
        Payload::Triangular { .. } => {
            let FiberedSystem::MonomialTriangular(sys) = desc.fibered_system()? else {
                unreachable!()
            };
            vec![
                ("f".into(), sys.matrix().clone()),
                ("g".into(), sys.base_block().clone()),
                ("f|pi".into(), sys.fiber_block().clone()),
            ]
        }
        Payload::Product { base, fiber } => match (base, fiber) {
            (FactorDesc::Monomial { matrix: a }, FactorDesc::Monomial { matrix: b }) => {
                let block = ExponentMatrix::new(IntMatrix::block_diag(a.matrix(), b.matrix()))?;
                vec![
                    ("f".into(), block),
                    ("g".into(), a.clone()),
                    ("h".into(), b.clone()),
                ]
            }
            _ => {
                return Err(CliError::Unsupported(
                    "powerrule on products needs monomial factors".into(),
                ))
            }
        },
        _ => {
            return Err(CliError::Unsupported(format!(
                "powerrule needs exact profiles; kind \"{}\" does not certify them",
                desc.kind.name()
            )))
        }
    };
    let mut residuals = Vec::new();
    let mut pass = true;
    for (_, matrix) in &pairs {
        let base = dynamical_degrees_exact(matrix)?;
        let powered = dynamical_degrees_exact(&matrix.pow(n))?;
        let rep = verify_power_rule(&base, &powered, n)?;
        pass &= rep.holds;
        residuals.extend(rep.entries.iter().map(|e| e.relative_residual));
    }
    let max_res = residuals.iter().cloned().fold(0.0, f64::max);
    Ok(CheckOut {
        name: "powerrule".into(),
        verdict: if pass { "pass" } else { "fail" }.into(),
        note: Some(format!(
            "d_p(f^{n}) vs d_p(f)^{n}: max relative residual {}",
            sig10(max_res)
        )),
        theorem_entries: vec![],
        residuals,
        gaps: vec![],
    })
}

fn run_lemma_4_2(
    desc: &SystemDescription,
    n_override: Option<usize>,
) -> Result<CheckOut, CliError> {
    let Payload::Product { .. } = &desc.payload else {
        return Err(CliError::Unsupported(format!(
            "lemma4.2 needs a product system; kind \"{}\" is not one",
            desc.kind.name()
        )));
    };
    let FiberedSystem::Product(sys) = desc.fibered_system()? else {
        unreachable!()
    };
    let p = desc.options.p.unwrap_or(1);
    let n = n_override.or(desc.options.n).unwrap_or(25).max(2);
    let tolerance = desc.options.tolerance.unwrap_or(0.1);
    let rep = run_lemma(&sys, p, n)?;
    let final_gap = *rep.gaps.last().unwrap();
    let pass = final_gap <= tolerance;
    Ok(CheckOut {
        name: "lemma4.2".into(),
        verdict: if pass { "pass" } else { "fail" }.into(),
        note: Some(format!(
            "|b_{p}(n)^(1/n) - {}| = {} at n = {n} (tolerance {tolerance}), \
             gap nonincreasing from n = {}",
            sig10(rep.d_p),
            sig10(final_gap),
            rep.monotone_from.unwrap_or(0),
        )),
        theorem_entries: vec![],
        residuals: vec![],
        gaps: rep.gaps,
    })
}

fn run_lemma(
    sys: &ProductSystem,
    p: usize,
    n: usize,
) -> Result<dyndeg::fibered::Lemma42Report, CliError> {
    verify_lemma_4_2(sys, p, n).map_err(CliError::from)
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

pub fn run_report(desc: &SystemDescription, seed: u64) -> Result<ReportOut, CliError> {
    let degrees = match run_degrees(desc, seed) {
        Ok(d) => Some(d),
        Err(CliError::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    let p = desc.options.p.unwrap_or(1);
    let n = desc.options.n.unwrap_or(10);
    let sequence = match run_sequence(desc, p, n, seed) {
        Ok(s) => Some(s),
        Err(CliError::Unsupported(_)) => None,
        Err(e) => return Err(e),
    };
    let mut checks = Vec::new();
    for check in CheckName::all() {
        match run_verify(desc, check, None, seed) {
            Ok(out) => checks.push(out),
            Err(CliError::Unsupported(note)) => checks.push(CheckOut {
                name: check.name().into(),
                verdict: "unsupported".into(),
                note: Some(note),
                theorem_entries: vec![],
                residuals: vec![],
                gaps: vec![],
            }),
            Err(e) => return Err(e),
        }
    }
    let overall = if checks.iter().any(|c| c.verdict == "fail") {
        "fail"
    } else {
        "pass"
    };
    Ok(ReportOut {
        input: desc.source.clone(),
        kind: desc.kind.name().into(),
        seed,
        degrees,
        sequence,
        checks,
        overall: overall.into(),
    })
}
