//! The twelve acceptance criteria as reproducible, seeded runners.

use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;

use crate::exactnum::{ComplexApprox, Real, DEFAULT_PRECISION};
use crate::intlinalg::{a2_gram, e8_gram, SymIntMatrix};
use crate::quadmod::{cyclic_module, discriminant_module, milgram_check, DEFAULT_BUDGET};
use crate::sampling::{self, KirbyMove};
use crate::surgery::{
    haar_functional, homology, reciprocity_check, rt_from_haar, rt_raw_for_module,
    rt_raw_invariant, verify_closed_equivalence, EvalOptions, HaarMeasure, Strategy,
    SurgeryPresentation,
};
use crate::tqft::{
    closure_weight_consistency, maslov_cocycle_defect, maslov_index, modular_relations_check,
    standard_symplectic, LagrangianTriple,
};
use crate::Result;

/// Largest reduced colouring count allowed after a stabilization in the Kirby suite.
pub const KIRBY_TERM_LIMIT: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub precision: u32,
    pub budget: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            precision: DEFAULT_PRECISION,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl SuiteConfig {
    fn eval(&self) -> EvalOptions {
        EvalOptions {
            precision: self.precision,
            budget: self.budget,
        }
    }

    // each criterion draws from its own stream so they can run independently
    fn rng(&self, id: u8) -> sampling::SuiteRng {
        sampling::rng(
            self.seed
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .wrapping_add(id as u64),
        )
    }
}

/// Residual bound, either `10^{-e}` or exact equality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Threshold {
    PowerOfTen(u32),
    Exact,
}

impl Threshold {
    fn admits(&self, r: &Real) -> bool {
        match self {
            Threshold::Exact => r.is_zero(),
            Threshold::PowerOfTen(e) => {
                let bound = BigRational::new(BigInt::from(1), BigInt::from(10).pow(*e));
                r.abs() < Real::from_rational(&bound, r.precision())
            }
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Exact => write!(f, "exact"),
            Threshold::PowerOfTen(e) => write!(f, "1e-{e}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub id: u8,
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub max_residual: f64,
    pub threshold: Threshold,
    pub time_limit: Option<Duration>,
    pub elapsed: Duration,
    pub notes: Vec<String>,
}

impl CriterionOutcome {
    pub fn passed(&self) -> bool {
        self.failures == 0 && self.cases > 0 && self.time_limit.is_none_or(|t| self.elapsed < t)
    }
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {:<28} {}  cases={} failures={} max_residual={:.3e} threshold={} time={:.2}s",
            self.id,
            self.name,
            if self.passed() { "PASS" } else { "FAIL" },
            self.cases,
            self.failures,
            self.max_residual,
            self.threshold,
            self.elapsed.as_secs_f64(),
        )?;
        if let Some(t) = self.time_limit {
            write!(f, " (limit {}s)", t.as_secs())?;
        }
        Ok(())
    }
}

struct Tally {
    cases: usize,
    failures: usize,
    max_residual: f64,
    notes: Vec<String>,
    threshold: Threshold,
}

impl Tally {
    fn new(threshold: Threshold) -> Self {
        Tally {
            cases: 0,
            failures: 0,
            max_residual: 0.0,
            notes: Vec::new(),
            threshold,
        }
    }

    fn record(&mut self, residual: &Real, label: impl FnOnce() -> String) {
        self.cases += 1;
        self.max_residual = self.max_residual.max(residual.to_f64().abs());
        if !self.threshold.admits(residual) {
            self.failures += 1;
            self.notes
                .push(format!("{} residual {:.3e}", label(), residual.to_f64()));
        }
    }

    fn record_exact(&mut self, ok: bool, label: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            self.notes.push(label());
        }
    }

    fn error(&mut self, e: crate::Error, label: impl FnOnce() -> String) {
        self.cases += 1;
        self.failures += 1;
        self.notes.push(format!("{}: {e}", label()));
    }
}

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "S3 normalization"),
    (2, "S2xS1 normalization"),
    (3, "closed equivalence"),
    (4, "Milgram"),
    (5, "reciprocity"),
    (6, "Kirby invariance"),
    (7, "strategy agreement"),
    (8, "modular data"),
    (9, "weight cancellation"),
    (10, "cyclic reduction"),
    (11, "Haar normalization"),
    (12, "Maslov cocycle"),
];

/// The five reference lattices.
pub fn reference_lattices() -> Vec<SymIntMatrix> {
    let sym = |rows: &[Vec<i64>]| SymIntMatrix::from_rows(rows).expect("symmetric");
    vec![
        sym(&[vec![2]]),
        a2_gram(),
        sym(&[vec![2, 0], vec![0, -2]]),
        sym(&[vec![4]]),
        e8_gram(),
    ]
}

fn abs_det_inv_sqrt(k: &SymIntMatrix, precision: u32) -> Result<ComplexApprox> {
    let det = BigRational::from_integer(k.det().magnitude().clone().into());
    let r = crate::exactnum::real_power(&det, &BigRational::new((-1).into(), 2.into()), precision)?;
    Ok(ComplexApprox::from_real(r))
}

pub fn run_criterion(id: u8, cfg: &SuiteConfig) -> CriterionOutcome {
    let name = CRITERIA
        .iter()
        .find(|c| c.0 == id)
        .map(|c| c.1)
        .unwrap_or("unknown");
    let start = Instant::now();
    let (tally, time_limit) = match id {
        1 => (s3_normalization(cfg), Some(Duration::from_secs(1))),
        2 => (s2s1_normalization(cfg), None),
        3 => (closed_equivalence(cfg).0, Some(Duration::from_secs(300))),
        4 => (milgram(cfg), None),
        5 => (reciprocity(cfg), None),
        6 => (kirby(cfg), None),
        7 => (closed_equivalence(cfg).1, None),
        8 => (modular(cfg), None),
        9 => (weights(cfg), None),
        10 => (cyclic(cfg), None),
        11 => (haar(cfg), None),
        12 => (maslov(cfg), None),
        _ => (Tally::new(Threshold::Exact), None),
    };
    CriterionOutcome {
        id,
        name,
        cases: tally.cases,
        failures: tally.failures,
        max_residual: tally.max_residual,
        threshold: tally.threshold,
        time_limit,
        elapsed: start.elapsed(),
        notes: tally.notes,
    }
}

pub fn run_all(cfg: &SuiteConfig) -> Vec<CriterionOutcome> {
    CRITERIA
        .iter()
        .map(|&(id, _)| run_criterion(id, cfg))
        .collect()
}

fn s3_normalization(cfg: &SuiteConfig) -> Tally {
    let mut t = Tally::new(Threshold::PowerOfTen(30));
    for k in reference_lattices() {
        let label = || format!("K={k}");
        let res = rt_raw_invariant(
            &SurgeryPresentation::empty(),
            &k,
            Strategy::Direct,
            &cfg.eval(),
        )
        .and_then(|v| Ok(v.value.dist(&abs_det_inv_sqrt(&k, cfg.precision)?)));
        match res {
            Ok(r) => t.record(&r, label),
            Err(e) => t.error(e, label),
        }
    }
    t
}

fn s2s1_normalization(cfg: &SuiteConfig) -> Tally {
    let mut t = Tally::new(Threshold::PowerOfTen(30));
    let p = SurgeryPresentation::from_rows(&[vec![0]]).expect("1x1");
    for k in reference_lattices() {
        let label = || format!("K={k}");
        match rt_raw_invariant(&p, &k, Strategy::Direct, &cfg.eval()) {
            Ok(v) => t.record(&v.value.dist(&ComplexApprox::one(cfg.precision)), label),
            Err(e) => t.error(e, label),
        }
    }
    t
}

/// Criterion 3 and, on the same cases, criterion 7.
fn closed_equivalence(cfg: &SuiteConfig) -> (Tally, Tally) {
    let mut eq = Tally::new(Threshold::PowerOfTen(25));
    let mut agree = Tally::new(Threshold::PowerOfTen(25));
    let mut rng = cfg.rng(3);
    for case in 0..200 {
        let k = sampling::random_even_lattice(&mut rng, 2, 4, 16);
        let p = sampling::random_presentation(&mut rng, 3, 3);
        let label = || format!("case {case}: K={k}, L={}", p.linking_matrix());
        let reduced = match verify_closed_equivalence(&p, &k, Strategy::NullSeparated, &cfg.eval())
        {
            Ok(r) => {
                eq.record(&r.residual, label);
                r.rt.value
            }
            Err(e) => {
                eq.error(e, label);
                continue;
            }
        };
        match rt_raw_invariant(&p, &k, Strategy::Direct, &cfg.eval()) {
            Ok(direct) => agree.record(&direct.value.dist(&reduced), label),
            Err(crate::Error::BudgetExceeded { .. }) => {}
            Err(e) => agree.error(e, label),
        }
    }
    (eq, agree)
}

fn milgram(cfg: &SuiteConfig) -> Tally {
    let mut t = Tally::new(Threshold::PowerOfTen(30));
    let mut rng = cfg.rng(4);
    let sym = |rows: &[Vec<i64>]| SymIntMatrix::from_rows(rows).expect("symmetric");
    let mut lattices = vec![
        sym(&[vec![2]]),
        a2_gram(),
        e8_gram(),
        sym(&[vec![2, 0], vec![0, -2]]),
    ];
    for _ in 0..100 {
        lattices.push(sampling::random_nondegenerate(
            &mut rng,
            3,
            -4,
            4,
            true,
            u64::MAX,
        ));
    }
    for k in lattices {
        let label = || format!("K={k}");
        match milgram_check(&k, cfg.precision) {
            Ok(r) => t.record(&r.residual, label),
            Err(e) => t.error(e, label),
        }
    }
    t
}

fn reciprocity(cfg: &SuiteConfig) -> Tally {
    let mut t = Tally::new(Threshold::PowerOfTen(25));
    let mut rng = cfg.rng(5);
    for case in 0..60 {
        let a = sampling::random_nondegenerate(&mut rng, 3, -3, 3, false, 8);
        let k = sampling::random_even_lattice(&mut rng, 2, 4, 8);
        let label = || format!("case {case}: A={a}, K={k}");
        match reciprocity_check(&a, &k, &cfg.eval()) {
            Ok(r) => t.record(&r.residual, label),
            Err(e) => t.error(e, label),
        }
    }
    t
}

fn kirby(cfg: &SuiteConfig) -> Tally {
    let mut t = Tally::new(Threshold::PowerOfTen(25));
    let mut rng = cfg.rng(6);
    let opts = cfg.eval();
    for case in 0..100 {
        let k = sampling::random_even_lattice(&mut rng, 2, 4, 16);
        let start = sampling::random_presentation(&mut rng, 3, 3);
        let order = k.det().magnitude().to_u64().expect("small determinant");
        let mut p = start.clone();
        let mut moves: Vec<KirbyMove> = Vec::new();
        for _ in 0..6 {
            let mv = sampling::random_kirby_move(&mut rng, &p, order, KIRBY_TERM_LIMIT);
            p = mv.apply(&p);
            moves.push(mv);
        }
        let label = || {
            format!(
                "case {case}: K={k}, L={}, moves {moves:?}",
                start.linking_matrix()
            )
        };
        let before = rt_raw_invariant(&start, &k, Strategy::NullSeparated, &opts);
        let after = rt_raw_invariant(&p, &k, Strategy::NullSeparated, &opts);
        match (before, after) {
            (Ok(b), Ok(a)) => t.record(&a.value.dist(&b.value), label),
            (Err(e), _) | (_, Err(e)) => t.error(e, label),
        }
    }
    t
}

fn modular(cfg: &SuiteConfig) -> Tally {
    let mut t = Tally::new(Threshold::PowerOfTen(25));
    let mut rng = cfg.rng(8);
    let mut modules = Vec::new();
    for k in reference_lattices() {
        modules.push((format!("K={k}"), discriminant_module(&k)));
    }
    for k in (2..=64).step_by(2) {
        modules.push((format!("cyclic {k}"), cyclic_module(k)));
    }
    for _ in 0..30 {
        let k = sampling::random_even_lattice(&mut rng, 3, 4, 64);
        modules.push((format!("K={k}"), discriminant_module(&k)));
    }
    for (name, m) in modules {
        let label = || name.clone();
        match m.and_then(|m| modular_relations_check(&m, cfg.precision)) {
            Ok(r) => {
                let worst = r
                    .unitarity_residual
                    .max(r.charge_residual)
                    .max(r.st_cubed_residual);
                if r.symmetric {
                    t.record(&worst, label);
                } else {
                    t.record_exact(false, || format!("{name}: S not symmetric"));
                }
            }
            Err(e) => t.error(e, label),
        }
    }
    t
}

fn weights(cfg: &SuiteConfig) -> Tally {
    let mut t = Tally::new(Threshold::PowerOfTen(30));
    let mut rng = cfg.rng(9);
    for case in 0..100 {
        let l_reg = sampling::random_nondegenerate(&mut rng, 4, -3, 3, false, u64::MAX);
        let k = sampling::random_even_lattice(&mut rng, 3, 4, 32);
        let label = || format!("case {case}: L_reg={l_reg}, K={k}");
        match closure_weight_consistency(&l_reg, &k, cfg.precision) {
            Ok(r) => t.record(&r.residual, label),
            Err(e) => t.error(e, label),
        }
    }
    t
}

fn cyclic(cfg: &SuiteConfig) -> Tally {
    let mut t = Tally::new(Threshold::PowerOfTen(25));
    let mut rng = cfg.rng(10);
    for k in [2i64, 4, 6] {
        let lattice = SymIntMatrix::from_rows(&[vec![k]]).expect("1x1");
        let module = cyclic_module(k).expect("even level");
        for case in 0..20 {
            let p = sampling::random_presentation(&mut rng, 3, 3);
            let label = || format!("k={k} case {case}: L={}", p.linking_matrix());
            let a = rt_raw_invariant(&p, &lattice, Strategy::Direct, &cfg.eval());
            let b = rt_raw_for_module(&p, &module, Strategy::Direct, &cfg.eval());
            match (a, b) {
                (Ok(a), Ok(b)) => t.record(&a.value.dist(&b.value), label),
                (Err(e), _) | (_, Err(e)) => t.error(e, label),
            }
        }
    }
    t
}

fn haar(cfg: &SuiteConfig) -> Tally {
    let mut t = Tally::new(Threshold::PowerOfTen(25));
    let mut rng = cfg.rng(11);
    for case in 0..50 {
        let k = sampling::random_even_lattice(&mut rng, 2, 4, 16);
        let p = sampling::random_presentation(&mut rng, 3, 3);
        let label = || format!("case {case}: K={k}, L={}", p.linking_matrix());
        let res = discriminant_module(&k).and_then(|m| {
            let tau = haar_functional(&m, &p, HaarMeasure::Counting, &cfg.eval())?;
            let predicted = rt_from_haar(
                &tau,
                &m,
                HaarMeasure::Counting,
                homology(&p).b1,
                cfg.precision,
            )?;
            let rt = rt_raw_for_module(&p, &m, Strategy::Direct, &cfg.eval())?;
            Ok(rt.value.dist(&predicted))
        });
        match res {
            Ok(r) => t.record(&r, label),
            Err(e) => t.error(e, label),
        }
    }
    t
}

const PERMUTATIONS: [([usize; 3], i64); 6] = [
    ([0, 1, 2], 1),
    ([1, 2, 0], 1),
    ([2, 0, 1], 1),
    ([1, 0, 2], -1),
    ([0, 2, 1], -1),
    ([2, 1, 0], -1),
];

fn maslov(cfg: &SuiteConfig) -> Tally {
    let mut t = Tally::new(Threshold::Exact);
    let mut rng = cfg.rng(12);
    for case in 0..100 {
        let d = if case % 2 == 0 { 1 } else { 2 };
        let _ = rng.gen::<u8>();
        let ls = sampling::random_lagrangian_quadruple(&mut rng, d);
        let omega = standard_symplectic(d);
        let label = || format!("case {case} (dim {})", 2 * d);
        let res = (|| -> Result<bool> {
            let defect = maslov_cocycle_defect(&omega, [&ls[0], &ls[1], &ls[2], &ls[3]])?;
            let mut ok = defect == 0;
            for triple in [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]] {
                let tr = LagrangianTriple::new(omega.clone(), triple.map(|i| ls[i].as_slice()))?;
                let mu = maslov_index(&tr);
                ok &= PERMUTATIONS
                    .iter()
                    .all(|&(perm, sign)| maslov_index(&tr.permuted(perm)) == sign * mu);
            }
            Ok(ok)
        })();
        match res {
            Ok(ok) => t.record_exact(ok, || format!("{}: identity violated", label())),
            Err(e) => t.error(e, label),
        }
    }
    t
}
