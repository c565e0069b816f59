use num_bigint::BigInt;

use toral_core::exactnum::Real;
use toral_core::intlinalg::SymIntMatrix;
use toral_core::quadmod::{anomaly_kappa, milgram_check, FiniteQuadraticModule};
use toral_core::sampling::{self, KirbyMove};
use toral_core::suite::{self, SuiteConfig, KIRBY_TERM_LIMIT};
use toral_core::surgery::{
    homology, reciprocity_check, rt_raw_for_module, verify_closed_equivalence, EvalOptions,
};
use toral_core::tqft::{closure_weight_consistency, modular_relations_check};

use crate::fixtures;
use crate::input::{InputDocument, InputError, StrategyArg};
use crate::report::Report;

pub type CmdResult = Result<Report, InputError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Resolved {
    pub precision: u32,
    pub budget: u64,
    pub strategy: StrategyArg,
    pub seed: u64,
}

impl Resolved {
    pub fn eval(&self) -> EvalOptions {
        EvalOptions {
            precision: self.precision,
            budget: self.budget,
        }
    }

    fn push_into(&self, r: &mut Report) {
        r.push("precision", self.precision);
        r.push("budget", self.budget);
        r.push("strategy", self.strategy.name());
        r.push("seed", self.seed);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Check {
    Equivalence,
    Kirby,
    Milgram,
    Reciprocity,
    Modular,
    Weights,
}

impl Check {
    fn name(self) -> &'static str {
        match self {
            Check::Equivalence => "equivalence",
            Check::Kirby => "kirby",
            Check::Milgram => "milgram",
            Check::Reciprocity => "reciprocity",
            Check::Modular => "modular",
            Check::Weights => "weights",
        }
    }

    fn default_cases(self) -> usize {
        match self {
            Check::Reciprocity => 50,
            _ => 100,
        }
    }
}

fn residual(r: &Real) -> String {
    format!("{:.3e}", r.to_f64())
}

fn join<T: ToString>(xs: &[T]) -> String {
    if xs.is_empty() {
        "none".into()
    } else {
        xs.iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn require<T>(x: Option<T>, what: &str) -> Result<T, InputError> {
    x.ok_or_else(|| InputError::Invalid(format!("input has no {what}")))
}

fn push_module(r: &mut Report, m: &FiniteQuadraticModule) {
    r.push("group_divisors", join(m.divisors()));
    r.push("group_order", m.order());
}

pub fn invariant(doc: &InputDocument, res: &Resolved) -> CmdResult {
    let module = require(doc.module()?, "quadratic datum ([K] or [divisors]/[Q])")?;
    let p = require(
        doc.presentation()?,
        "linking matrix [L] (use --empty-link for the empty link)",
    )?;
    let mut r = Report::new("invariant");
    res.push_into(&mut r);
    let h = homology(&p);
    r.push("components", p.components());
    r.push("signature", p.sigma());
    r.push("rank", p.rank());
    r.push("nullity", p.nullity());
    r.push("b1", h.b1);
    r.push("torsion_divisors", join(&h.torsion_divisors));
    r.push("torsion_order", &h.torsion_order);
    r.push("m_M", &h.m_m);
    push_module(&mut r, &module);
    match doc.lattice()? {
        Some(k) => {
            let eq = verify_closed_equivalence(&p, &k, res.strategy.to_core(), &res.eval())?;
            r.push("rt_method", eq.rt.metadata.method);
            r.push("rt_terms", &eq.rt.metadata.term_count);
            r.push("rt_raw", &eq.rt.value);
            r.push("cs_terms", &eq.cs.metadata.term_count);
            r.push("cs_raw", &eq.cs.value);
            r.push("residual", residual(&eq.residual));
            r.verdict("verdict", eq.pass);
        }
        None => {
            let rt = rt_raw_for_module(&p, &module, res.strategy.to_core(), &res.eval())?;
            r.push("rt_method", rt.metadata.method);
            r.push("rt_terms", &rt.metadata.term_count);
            r.push("rt_raw", &rt.value);
            r.push("cs_raw", "unavailable for a generic module");
        }
    }
    Ok(r)
}

/// Per-case bookkeeping for `verify`.
struct Cases<'a> {
    r: &'a mut Report,
    count: usize,
    failures: usize,
}

impl Cases<'_> {
    fn record(&mut self, label: String, outcome: Result<(Real, bool), toral_core::Error>) {
        let i = self.count;
        self.count += 1;
        self.r.push(format!("case.{i}"), label);
        match outcome {
            Ok((res, pass)) => {
                self.r.push(format!("case.{i}.residual"), residual(&res));
                self.r.verdict(format!("case.{i}.verdict"), pass);
                self.failures += usize::from(!pass);
            }
            Err(e) => {
                self.r.push(format!("case.{i}.error"), e);
                self.r.verdict(format!("case.{i}.verdict"), false);
                self.failures += 1;
            }
        }
    }
}

pub fn verify(
    check: Check,
    doc: Option<&InputDocument>,
    res: &Resolved,
    cases: Option<usize>,
) -> CmdResult {
    let mut r = Report::new("verify");
    r.push("check", check.name());
    res.push_into(&mut r);
    let n_cases = cases.unwrap_or(check.default_cases());
    let opts = res.eval();
    let mut rng = sampling::rng(res.seed);
    let mut c = Cases {
        r: &mut r,
        count: 0,
        failures: 0,
    };
    match check {
        Check::Equivalence => {
            let docs: Vec<(String, InputDocument)> = match doc {
                Some(d) => vec![("input".into(), d.clone())],
                None => fixtures::manifest()?,
            };
            for (name, d) in docs {
                let k = require(d.lattice()?, "[K]")?;
                let p = require(d.presentation()?, "[L]")?;
                let out = verify_closed_equivalence(&p, &k, res.strategy.to_core(), &opts)
                    .map(|e| (e.residual, e.pass));
                c.record(format!("{name} K={k} L={}", p.linking_matrix()), out);
            }
        }
        Check::Kirby => {
            let fixed = match doc {
                Some(d) => Some((
                    require(d.module()?, "quadratic datum")?,
                    require(d.presentation()?, "[L]")?,
                )),
                None => None,
            };
            for _ in 0..n_cases {
                let (module, start) = match &fixed {
                    Some((m, p)) => (m.clone(), p.clone()),
                    None => {
                        let k = sampling::random_even_lattice(&mut rng, 2, 4, 16);
                        let p = sampling::random_presentation(&mut rng, 3, 3);
                        (toral_core::quadmod::discriminant_module(&k)?, p)
                    }
                };
                let order = module.order_u64()?;
                let mut p = start.clone();
                let mut moves: Vec<KirbyMove> = Vec::new();
                for _ in 0..6 {
                    let mv = sampling::random_kirby_move(&mut rng, &p, order, KIRBY_TERM_LIMIT);
                    p = mv.apply(&p);
                    moves.push(mv);
                }
                let out = (|| {
                    let a =
                        rt_raw_for_module(&start, &module, res.strategy.to_core(), &opts)?.value;
                    let b = rt_raw_for_module(&p, &module, res.strategy.to_core(), &opts)?.value;
                    let d = a.dist(&b);
                    let pass = opts.tolerance().close(&a, &b);
                    Ok((d, pass))
                })();
                c.record(
                    format!(
                        "{module} L={} moves={}",
                        start.linking_matrix(),
                        describe_moves(&moves)
                    ),
                    out,
                );
            }
        }
        Check::Milgram => {
            let lattices = match doc {
                Some(d) => vec![require(d.lattice()?, "[K]")?],
                None => suite::reference_lattices(),
            };
            for k in lattices {
                let out = milgram_check(&k, res.precision).map(|m| (m.residual, m.pass));
                c.record(format!("K={k}"), out);
            }
        }
        Check::Reciprocity => {
            let pairs: Vec<(SymIntMatrix, SymIntMatrix)> = match doc {
                Some(d) => {
                    let a = require(d.presentation()?, "[L] (used as A)")?;
                    vec![(a.linking_matrix().clone(), require(d.lattice()?, "[K]")?)]
                }
                None => (0..n_cases)
                    .map(|_| {
                        let a = sampling::random_nondegenerate(&mut rng, 3, -3, 3, false, 8);
                        (a, sampling::random_even_lattice(&mut rng, 2, 4, 8))
                    })
                    .collect(),
            };
            for (a, k) in pairs {
                let out = reciprocity_check(&a, &k, &opts).map(|x| (x.residual, x.pass));
                c.record(format!("A={a} K={k}"), out);
            }
        }
        Check::Modular => {
            let modules: Vec<FiniteQuadraticModule> = match doc {
                Some(d) => vec![require(d.module()?, "quadratic datum")?],
                None => suite::reference_lattices()
                    .iter()
                    .map(toral_core::quadmod::discriminant_module)
                    .collect::<Result<_, _>>()?,
            };
            for m in modules {
                let out = modular_relations_check(&m, res.precision).map(|x| {
                    let worst = x
                        .unitarity_residual
                        .clone()
                        .max(x.charge_residual.clone())
                        .max(x.st_cubed_residual.clone());
                    (worst, x.pass)
                });
                c.record(m.to_string(), out);
            }
        }
        Check::Weights => {
            let pairs: Vec<(SymIntMatrix, SymIntMatrix)> = match doc {
                Some(d) => {
                    let l = require(d.presentation()?, "[L] (used as L_reg)")?;
                    vec![(l.linking_matrix().clone(), require(d.lattice()?, "[K]")?)]
                }
                None => (0..n_cases)
                    .map(|_| {
                        let l = sampling::random_nondegenerate(&mut rng, 4, -3, 3, false, u64::MAX);
                        (l, sampling::random_even_lattice(&mut rng, 3, 4, 32))
                    })
                    .collect(),
            };
            for (l, k) in pairs {
                let out =
                    closure_weight_consistency(&l, &k, res.precision).map(|w| (w.residual, w.pass));
                c.record(format!("L_reg={l} K={k}"), out);
            }
        }
    }
    let (count, failures) = (c.count, c.failures);
    r.push("cases", count);
    r.push("failures", failures);
    r.verdict("verdict", failures == 0);
    Ok(r)
}

fn describe_moves(moves: &[KirbyMove]) -> String {
    moves
        .iter()
        .map(|m| match *m {
            KirbyMove::Stabilize(s) => format!("stab({s:+})"),
            KirbyMove::Slide { i, j, epsilon } => format!("slide({i}/{j},{epsilon:+})"),
        })
        .collect::<Vec<_>>()
        .join(",")
}

pub fn modular_data(doc: &InputDocument, res: &Resolved) -> CmdResult {
    let module = require(doc.module()?, "quadratic datum ([K] or [divisors]/[Q])")?;
    let mut r = Report::new("modular-data");
    r.push("precision", res.precision);
    push_module(&mut r, &module);
    let elements: Vec<_> = module.elements().collect();
    for (i, a) in elements.iter().enumerate() {
        r.push(
            format!("q[{i}]"),
            format!("{a} exp(pi i {})", module.q_value(a)?),
        );
    }
    let report = modular_relations_check(&module, res.precision)?;
    for (i, row) in report.s.rows().enumerate() {
        for (j, z) in row.iter().enumerate() {
            r.push(format!("S[{i},{j}]"), z);
        }
    }
    for i in 0..report.t.dim() {
        r.push(format!("T[{i},{i}]"), report.t.get(i, i));
    }
    let kappa = match doc.lattice()? {
        Some(k) => anomaly_kappa(&k, res.precision)?.value,
        None => {
            let g = num_rational::BigRational::from_integer(BigInt::from(module.order()));
            let inv_root = toral_core::exactnum::real_power(
                &g,
                &num_rational::BigRational::new((-1).into(), 2.into()),
                res.precision,
            )?;
            module.gauss_sum(-1, res.precision)?.mul_real(&inv_root)
        }
    };
    r.push("kappa", &kappa);
    r.push("central_charge_phase", &report.phase);
    r.push("s_symmetric", report.symmetric);
    r.push("unitarity_residual", residual(&report.unitarity_residual));
    r.push(
        "charge_conjugation_residual",
        residual(&report.charge_residual),
    );
    r.push("st_cubed_residual", residual(&report.st_cubed_residual));
    r.verdict("verdict", report.pass);
    Ok(r)
}

pub fn report_suite(res: &Resolved, only: &[u8], timings: bool) -> CmdResult {
    let mut r = Report::new("report-suite");
    r.push("precision", res.precision);
    r.push("budget", res.budget);
    r.push("seed", res.seed);
    let cfg = SuiteConfig {
        seed: res.seed,
        precision: res.precision,
        budget: res.budget,
    };
    let mut failures = 0usize;
    for &(id, name) in suite::CRITERIA.iter() {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let o = suite::run_criterion(id, &cfg);
        let mut line = format!(
            "{name}; cases={} failures={} max_residual={:.3e} threshold={}",
            o.cases, o.failures, o.max_residual, o.threshold
        );
        if timings {
            line.push_str(&format!(" time={:.3}s", o.elapsed.as_secs_f64()));
        }
        r.push(format!("criterion.{id}"), line);
        for (n, note) in o.notes.iter().enumerate() {
            r.push(format!("criterion.{id}.note.{n}"), note);
        }
        r.verdict(format!("criterion.{id}.verdict"), o.passed());
        failures += usize::from(!o.passed());
    }
    r.push("failures", failures);
    r.verdict("verdict", failures == 0);
    Ok(r)
}
